mod common;

use std::sync::Arc;

use multisidon::codes::{build_code, code_equivalence, CodeError, EquivalenceMode};
use multisidon::field::{Elem, Extension};
use multisidon::io::{family_to_json, FamilyJson};
use multisidon::linset::{structure_normalize, weight_spectrum, ProductSpace, DEFAULT_ENUM_CAP};
use multisidon::sidon::{
    automorphisms, is_multi_sidon, is_sidon, is_weak_multi_sidon, AutomorphismSet, EquivalenceWitness, MultiRoute,
    SidonRoute, SubspaceFamily,
};
use multisidon::subspace::Subspace;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const FIELDS: &[(u32, u32)] = &[(3, 4), (2, 6), (4, 3), (2, 4), (5, 2)];

fn field(i: usize) -> Arc<Extension> {
    let (q, n) = FIELDS[i % FIELDS.len()];
    Extension::build(q, n).unwrap()
}

fn subspace(ext: &Arc<Extension>, k: usize, seed: u64) -> Subspace {
    random_subspace(ext, k, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spectrum_matches_point_oracle(f in 0usize..5, k1 in 1usize..=3, k2 in 1usize..=3, seed in any::<u64>()) {
        let ext = field(f);
        let n = ext.n() as usize;
        let (k1, k2) = (k1.min(n), k2.min(n));
        let u1 = subspace(&ext, k1, seed);
        let u2 = subspace(&ext, k2, seed ^ 1);
        let v = ProductSpace::new(vec![u1.clone(), u2.clone()]).unwrap();
        let s = weight_spectrum(v.space(), DEFAULT_ENUM_CAP).unwrap();
        let oracle = line_weights(&u1, &u2);
        let heavy: std::collections::BTreeMap<usize, u64> =
            oracle.iter().filter(|(&w, _)| w > 0).map(|(&w, &c)| (w, c)).collect();
        prop_assert_eq!(&s.counts, &heavy);
        prop_assert_eq!(s.n0, Some(oracle.get(&0).copied().unwrap_or(0) as u128));
        prop_assert!(s.identities_ok && s.size_identity() && s.vector_identity() && s.size_bound());
    }

    #[test]
    fn min_distance_is_even_bounded_and_exact(f in 0usize..4, r in 1usize..=2, seed in any::<u64>()) {
        let ext = field(f);
        let t = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Subspace> = (0..r).map(|_| random_subspace(&ext, t, &mut rng)).collect();
        let fam = SubspaceFamily::new(gens.clone()).unwrap();
        let code = match build_code(&fam) {
            Ok(c) => c,
            Err(CodeError::OverlappingOrbits { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for (g, &size) in gens.iter().zip(code.orbit_sizes()) {
            prop_assert_eq!(orbit_size(g) as u64, size);
        }
        let d = code.min_distance().map(|x| x.distance);
        prop_assert_eq!(d, pairwise_min_distance(code.codewords()));
        if let Some(d) = d {
            prop_assert!(d % 2 == 0 && d <= 2 * t);
            // the criterion pairs distance 2t - 2 with full-length orbits
            let full = r as u64 * ext.coset_count();
            let ms = is_multi_sidon(&fam, MultiRoute::Profile).unwrap().result;
            prop_assert_eq!(ms, d == 2 * t - 2 && code.size() == full, "d {} size {} full {}", d, code.size(), full);
        }
    }

    #[test]
    fn sidon_routes_agree(f in 0usize..5, k in 2usize..=3, seed in any::<u64>()) {
        let ext = field(f);
        let u = subspace(&ext, k.min(ext.n() as usize), seed);
        let a = is_sidon(&u, SidonRoute::OrbitIntersection).unwrap().result;
        let b = is_sidon(&u, SidonRoute::Definitional).unwrap().result;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn multi_sidon_routes_agree_and_imply_weak(f in 0usize..5, r in 1usize..=3, seed in any::<u64>()) {
        let ext = field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let members: Vec<Subspace> = (0..r)
            .map(|_| {
                let k = rng.gen_range(2..=3.min(ext.n() as usize - 1).max(2));
                random_subspace(&ext, k, &mut rng)
            })
            .collect();
        let fam = SubspaceFamily::new(members).unwrap();
        let profile = is_multi_sidon(&fam, MultiRoute::Profile).unwrap().result;
        let scan = is_multi_sidon(&fam, MultiRoute::AlphaScan).unwrap().result;
        prop_assert_eq!(profile, scan);
        if profile {
            prop_assert!(is_weak_multi_sidon(&fam).result);
        }
    }

    #[test]
    fn normalization_round_trip(f in 0usize..3, k1 in 1usize..=2, k2 in 1usize..=2, seed in any::<u64>()) {
        let ext = field(f);
        let gf = ext.gf();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // the structure theorem needs rank <= (r - 1) n
        let k2 = k2.min(ext.n() as usize - k1);
        let u1 = random_subspace(&ext, k1, &mut rng);
        let u2 = random_subspace(&ext, k2, &mut rng);
        let product = ProductSpace::new(vec![u1, u2]).unwrap();
        let m = loop {
            let m: Vec<Vec<Elem>> = (0..2)
                .map(|_| (0..2).map(|_| Elem(rng.gen_range(0..ext.order()))).collect())
                .collect();
            let det = gf.sub(gf.mul(m[0][0], m[1][1]), gf.mul(m[0][1], m[1][0]));
            if !det.is_zero() {
                break m;
            }
        };
        let w = product.space().transform(&m).unwrap();
        let norm = structure_normalize(&w, &m).unwrap();
        let back = w.transform(&norm.witness).unwrap();
        prop_assert!(back.same_space(norm.product.space()));
        let mut got: Vec<usize> = norm.product.factors().iter().map(|u| u.dim()).collect();
        got.sort_unstable();
        let mut want = vec![k1, k2];
        want.sort_unstable();
        prop_assert_eq!(got, want);
        if let Some(ls) = &norm.lambdas {
            let sum = norm.product.factors()[0].sum(&norm.product.factors()[1]).unwrap();
            prop_assert_eq!(sum.dim(), k1 + k2);
            prop_assert_eq!(ls.len(), 2);
        }
    }

    #[test]
    fn family_json_round_trip(f in 0usize..5, r in 1usize..=3, seed in any::<u64>()) {
        let ext = field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let members: Vec<Subspace> = (0..r).map(|_| random_subspace(&ext, 2, &mut rng)).collect();
        let fam = SubspaceFamily::new(members).unwrap();
        let text = serde_json::to_string(&family_to_json(&fam)).unwrap();
        let back: FamilyJson = serde_json::from_str(&text).unwrap();
        let loaded = back.load().unwrap();
        prop_assert_eq!(loaded.members(), fam.members());
    }
}

/// C2 = ρ(C1) as sets of codewords for some automorphism ρ.
fn codes_equal_up_to_automorphism(c1: &multisidon::codes::CyclicCode, c2: &multisidon::codes::CyclicCode) -> bool {
    let mut target = c2.codewords().to_vec();
    target.sort();
    automorphisms(c1.ext(), AutomorphismSet::Semilinear)
        .into_iter()
        .any(|rho| {
            let mut img: Vec<Subspace> = c1.codewords().iter().map(|u| u.frobenius_image(rho)).collect();
            img.sort();
            img == target
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn code_equivalence_matches_codeword_oracle(f in 0usize..3, planted in any::<bool>(), seed in any::<u64>()) {
        let ext = field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = |rng: &mut ChaCha8Rng| -> Vec<Subspace> {
            (0..2).map(|_| random_subspace(&ext, 2, rng)).collect()
        };
        let fa = SubspaceFamily::new(gens(&mut rng)).unwrap();
        let fb = if planted {
            let mut sigma = vec![0, 1];
            sigma.shuffle(&mut rng);
            let w = EquivalenceWitness {
                sigma,
                lambdas: (0..2).map(|_| random_nonzero(&ext, &mut rng)).collect(),
                rho: rng.gen_range(0..ext.gf().degree()),
            };
            w.apply(&fa).unwrap()
        } else {
            SubspaceFamily::new(gens(&mut rng)).unwrap()
        };
        let (Ok(c1), Ok(c2)) = (build_code(&fa), build_code(&fb)) else {
            return Ok(());
        };
        match code_equivalence(&c1, &c2, EquivalenceMode::Semilinear) {
            Ok(found) => {
                prop_assert_eq!(found.is_some(), codes_equal_up_to_automorphism(&c1, &c2));
                if planted {
                    prop_assert!(found.is_some());
                }
                if let Some(w) = found {
                    prop_assert!(w.validates(&fa, &fb));
                }
            }
            // families outside the intersection hypothesis are rejected, not judged
            Err(CodeError::Sidon(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
