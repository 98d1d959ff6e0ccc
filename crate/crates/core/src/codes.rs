//! Cyclic subspace codes: unions of scalar orbits {αU : α ∈ F_{q^n}^*} in the
//! Grassmannian of t-dimensional F_q-subspaces, their distance and
//! equivalence, and a seeded operator channel with minimum-distance decoding.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, Extension};
use crate::sidon::{family_equivalence, AutomorphismSet, EquivalenceWitness, SidonError, SubspaceFamily};
use crate::subspace::{Subspace, SubspaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("code has no generators")]
    Empty,
    #[error("generator {index} has dimension {dim}, expected {t}")]
    MixedDimensions { index: usize, dim: usize, t: usize },
    #[error("orbits of generators {i} and {j} overlap: U_{i} = {alpha} U_{j}")]
    OverlappingOrbits { i: usize, j: usize, alpha: u32 },
    #[error("codes have different parameters")]
    ParameterMismatch,
    #[error("channel cannot erase {rho} of {t} dimensions and insert {err} in F_q^{n}")]
    InfeasibleChannel { rho: usize, err: usize, t: usize, n: usize },
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Sidon(#[from] SidonError),
}

/// d(U, V) = dim U + dim V - 2 dim(U ∩ V).
pub fn subspace_distance(u: &Subspace, v: &Subspace) -> Result<usize, CodeError> {
    let i = u.intersect_dim(v)?;
    Ok(u.dim() + v.dim() - 2 * i)
}

#[derive(Clone, Debug)]
pub struct CyclicCode {
    ext: Arc<Extension>,
    t: usize,
    generators: Vec<Subspace>,
    orbit_sizes: Vec<u64>,
    codewords: Vec<Subspace>,
}

/// Smallest distance between distinct codewords and a pair achieving it:
/// U_i ∩ αU_j has the maximal dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub distance: usize,
    pub i: usize,
    pub j: usize,
    pub alpha: Elem,
}

impl CyclicCode {
    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn generators(&self) -> &[Subspace] {
        &self.generators
    }

    pub fn orbit_sizes(&self) -> &[u64] {
        &self.orbit_sizes
    }

    pub fn size(&self) -> u64 {
        self.orbit_sizes.iter().sum()
    }

    /// All codewords, orbit by orbit, each orbit as g^i U for i below its size.
    pub fn codewords(&self) -> &[Subspace] {
        &self.codewords
    }

    /// Exact minimum distance from generator pairs and scalar classes; `None`
    /// for a code with a single codeword.
    pub fn min_distance(&self) -> Option<DistanceReport> {
        if self.size() < 2 {
            return None;
        }
        let r = self.generators.len();
        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
        let best = pairs
            .par_iter()
            .map(|&(i, j)| {
                let prof = self.generators[i]
                    .intersection_profile(&self.generators[j])
                    .expect("same field");
                let mut best: Option<(usize, Elem)> = None;
                for &(alpha, d) in prof.entries() {
                    // αU_i = U_i is the same codeword
                    if i == j && d == self.t {
                        continue;
                    }
                    if best.is_none_or(|(bd, ba)| d > bd || (d == bd && alpha < ba)) {
                        best = Some((d, alpha));
                    }
                }
                // two classes with trivial intersection: dimension 0 at some α
                let (d, alpha) = best.unwrap_or((0, Elem::ZERO));
                (d, i, j, alpha)
            })
            .collect::<Vec<_>>();
        let (d, i, j, alpha) = best
            .into_iter()
            .max_by(|a, b| a.0.cmp(&b.0).then((b.1, b.2).cmp(&(a.1, a.2))))?;
        let alpha = if alpha.is_zero() {
            self.zero_witness(i, j)
        } else {
            alpha
        };
        Some(DistanceReport {
            distance: 2 * self.t - 2 * d,
            i,
            j,
            alpha,
        })
    }

    /// Some α with U_i ∩ αU_j = 0 and αU_j ≠ U_i.
    fn zero_witness(&self, i: usize, j: usize) -> Elem {
        let (u, v) = (&self.generators[i], &self.generators[j]);
        self.ext
            .coset_reps()
            .into_iter()
            .find(|&a| u.intersect_dim_scaled(v, a) == 0)
            .expect("a trivial intersection exists")
    }
}

/// Materializes the orbits, checking sizes against the stabilizers and that
/// distinct generators have disjoint orbits.
pub fn build_code(f: &SubspaceFamily) -> Result<CyclicCode, CodeError> {
    let gens = f.members().to_vec();
    let first = gens.first().ok_or(CodeError::Empty)?;
    let ext = Arc::clone(first.ext());
    let t = first.dim();
    for (index, u) in gens.iter().enumerate() {
        if u.dim() != t {
            return Err(CodeError::MixedDimensions { index, dim: u.dim(), t });
        }
    }
    let g = ext.gf().primitive();
    let mut seen: HashMap<Subspace, (usize, Elem)> = HashMap::new();
    let mut codewords = Vec::new();
    let mut orbit_sizes = Vec::with_capacity(gens.len());
    for (j, u) in gens.iter().enumerate() {
        let size = u.orbit_stabilizer()?.orbit_size;
        let mut alpha = Elem::ONE;
        for _ in 0..size {
            let w = u.scale_unchecked(alpha);
            if let Some(&(i, beta)) = seen.get(&w) {
                // βU_i = αU_j
                return Err(CodeError::OverlappingOrbits {
                    i,
                    j,
                    alpha: ext.gf().div(alpha, beta).0,
                });
            }
            seen.insert(w.clone(), (j, alpha));
            codewords.push(w);
            alpha = ext.gf().mul(alpha, g);
        }
        orbit_sizes.push(size);
    }
    Ok(CyclicCode {
        ext,
        t,
        generators: gens,
        orbit_sizes,
        codewords,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceMode {
    /// ρ among the q-power Frobenius maps.
    Linear,
    /// ρ any automorphism of F_{q^n}.
    Semilinear,
}

/// Equivalence of codes as equivalence of their generator families.
pub fn code_equivalence(
    c1: &CyclicCode,
    c2: &CyclicCode,
    mode: EquivalenceMode,
) -> Result<Option<EquivalenceWitness>, CodeError> {
    if *c1.ext != *c2.ext || c1.t != c2.t {
        return Err(CodeError::ParameterMismatch);
    }
    if c1.size() != c2.size() || c1.generators.len() != c2.generators.len() {
        return Ok(None);
    }
    let autos = match mode {
        EquivalenceMode::Linear => AutomorphismSet::Linear,
        EquivalenceMode::Semilinear => AutomorphismSet::Semilinear,
    };
    let a = SubspaceFamily::new(c1.generators.clone())?;
    let b = SubspaceFamily::new(c2.generators.clone())?;
    Ok(family_equivalence(&a, &b, autos)?)
}

/// Operator channel: erase `rho_dims` dimensions, then add `err_dims`
/// dimensions outside the sent codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub rho_dims: usize,
    pub err_dims: usize,
    pub seed: u64,
}

fn random_element<R: Rng>(ext: &Extension, rng: &mut R) -> Elem {
    Elem(rng.gen_range(0..ext.order()))
}

fn random_member<R: Rng>(u: &Subspace, rng: &mut R) -> Elem {
    let ext = u.ext();
    let gf = ext.gf();
    let fq = ext.base_elements();
    u.fq_basis().into_iter().fold(Elem::ZERO, |acc, b| {
        gf.add(acc, gf.mul(fq[rng.gen_range(0..fq.len())], b))
    })
}

/// Received space H ⊕ E with H uniform of dimension t - rho in `sent` and E
/// uniform of dimension err meeting `sent` trivially.
pub fn transmit_with<R: Rng>(sent: &Subspace, ch: &ChannelParams, rng: &mut R) -> Result<Subspace, CodeError> {
    let ext = sent.ext();
    let t = sent.dim();
    let n = ext.n() as usize;
    if ch.rho_dims > t || t + ch.err_dims > n {
        return Err(CodeError::InfeasibleChannel {
            rho: ch.rho_dims,
            err: ch.err_dims,
            t,
            n,
        });
    }
    let mut h = Subspace::zero(ext);
    while h.dim() < t - ch.rho_dims {
        let x = random_member(sent, rng);
        if !h.contains(x) {
            h = h.sum(&Subspace::span(ext, &[x])?)?;
        }
    }
    let mut reach = sent.clone();
    let mut received = h;
    for _ in 0..ch.err_dims {
        let x = loop {
            let x = random_element(ext, rng);
            if !reach.contains(x) {
                break x;
            }
        };
        let line = Subspace::span(ext, &[x])?;
        reach = reach.sum(&line)?;
        received = received.sum(&line)?;
    }
    Ok(received)
}

/// `transmit_with` driven by a generator seeded from `ch.seed`.
pub fn transmit(sent: &Subspace, ch: &ChannelParams) -> Result<Subspace, CodeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(ch.seed);
    transmit_with(sent, ch, &mut rng)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecodeVerdict {
    /// Single nearest codeword inside the unique-decoding radius.
    Unique { index: usize },
    /// Single nearest codeword, but outside the radius: not guaranteed.
    Nearest { index: usize },
    /// Several codewords at the minimal distance.
    Ambiguous { indices: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoded {
    pub distance: usize,
    pub verdict: DecodeVerdict,
}

impl Decoded {
    pub fn index(&self) -> Option<usize> {
        match self.verdict {
            DecodeVerdict::Unique { index } | DecodeVerdict::Nearest { index } => Some(index),
            DecodeVerdict::Ambiguous { .. } => None,
        }
    }
}

/// Nearest codewords to `received`; ties are listed in canonical order.
pub fn decode_min_distance(
    code: &CyclicCode,
    received: &Subspace,
    min_distance: Option<usize>,
) -> Result<Decoded, CodeError> {
    if code.codewords.is_empty() {
        return Err(CodeError::Empty);
    }
    if **received.ext() != *code.ext {
        return Err(SubspaceError::FieldMismatch.into());
    }
    let dists: Vec<usize> = code
        .codewords
        .par_iter()
        .map(|c| c.dim() + received.dim() - 2 * c.intersect_dim_unchecked(received))
        .collect();
    let best = *dists.iter().min().expect("nonempty");
    let mut ties: Vec<usize> = (0..dists.len()).filter(|&i| dists[i] == best).collect();
    ties.sort_by(|&a, &b| code.codewords[a].cmp(&code.codewords[b]));
    let verdict = if ties.len() > 1 {
        DecodeVerdict::Ambiguous { indices: ties }
    } else if min_distance.is_some_and(|d| 2 * best < d) {
        DecodeVerdict::Unique { index: ties[0] }
    } else {
        DecodeVerdict::Nearest { index: ties[0] }
    };
    Ok(Decoded {
        distance: best,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials: usize,
    pub params: ChannelParams,
    pub successes: usize,
    pub ambiguous: usize,
    pub failures: usize,
    /// Unique verdicts that are false: the certificate fails on recheck, or
    /// the sent codeword was inside the radius and another one was returned.
    pub wrong_unique: usize,
    /// Correctly certified unique verdicts naming another codeword; only
    /// possible when the perturbation reaches half the minimum distance.
    pub miscorrected: usize,
    pub seed: u64,
}

/// Sends uniformly chosen codewords through the channel and decodes them.
/// All randomness comes from one generator seeded with `ch.seed`.
pub fn simulate(code: &CyclicCode, ch: &ChannelParams, trials: usize) -> Result<SimulationReport, CodeError> {
    let dmin = code.min_distance().map(|r| r.distance);
    let mut rng = ChaCha8Rng::seed_from_u64(ch.seed);
    let mut report = SimulationReport {
        trials,
        params: *ch,
        successes: 0,
        ambiguous: 0,
        failures: 0,
        wrong_unique: 0,
        miscorrected: 0,
        seed: ch.seed,
    };
    for _ in 0..trials {
        let idx = rng.gen_range(0..code.codewords.len());
        let sent = &code.codewords[idx];
        let received = transmit_with(sent, ch, &mut rng)?;
        let dec = decode_min_distance(code, &received, dmin)?;
        if let DecodeVerdict::Unique { index } = dec.verdict {
            let d = dmin.expect("unique verdicts need a minimum distance");
            let sent_dist = subspace_distance(sent, &received)?;
            let certified = 2 * subspace_distance(&code.codewords[index], &received)? < d;
            if !certified || (2 * sent_dist < d && index != idx) {
                report.wrong_unique += 1;
            } else if index != idx {
                report.miscorrected += 1;
            }
        }
        match dec.index() {
            None => report.ambiguous += 1,
            Some(i) if i == idx => report.successes += 1,
            Some(_) => report.failures += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(q: u32, n: u32) -> Arc<Extension> {
        Extension::build(q, n).unwrap()
    }

    #[test]
    fn distance_basics() {
        let e = ext(3, 4);
        let f = Subspace::subfield(&e, 2).unwrap();
        assert_eq!(subspace_distance(&f, &f).unwrap(), 0);
        let a = e.smallest_outside(2);
        assert_eq!(subspace_distance(&f, &f.scalar_mul(a).unwrap()).unwrap(), 4);
    }

    #[test]
    fn spread_code() {
        let e = ext(3, 4);
        let f = Subspace::subfield(&e, 2).unwrap();
        let code = build_code(&SubspaceFamily::new(vec![f]).unwrap()).unwrap();
        assert_eq!(code.size(), 10);
        assert_eq!(code.min_distance().unwrap().distance, 4);
    }

    #[test]
    fn overlapping_orbits_rejected() {
        let e = ext(3, 4);
        let u = Subspace::span(&e, &[Elem(1), Elem(5)]).unwrap();
        let v = u.scalar_mul(Elem(7)).unwrap();
        let err = build_code(&SubspaceFamily::new(vec![u.clone(), v]).unwrap()).unwrap_err();
        assert!(matches!(err, CodeError::OverlappingOrbits { i: 0, j: 1, .. }));
        let w = Subspace::span(&e, &[Elem(1)]).unwrap();
        assert!(matches!(
            build_code(&SubspaceFamily::new(vec![u, w]).unwrap()),
            Err(CodeError::MixedDimensions { index: 1, .. })
        ));
    }

    #[test]
    fn channel_properties() {
        let e = ext(3, 6);
        let u = Subspace::span(&e, &[Elem(1), Elem(5), Elem(100)]).unwrap();
        let same = transmit(
            &u,
            &ChannelParams {
                rho_dims: 0,
                err_dims: 0,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(same, u);
        let ch = ChannelParams {
            rho_dims: 1,
            err_dims: 1,
            seed: 9,
        };
        let r1 = transmit(&u, &ch).unwrap();
        assert_eq!(r1, transmit(&u, &ch).unwrap());
        assert_eq!(r1.dim(), 3);
        assert_eq!(subspace_distance(&u, &r1).unwrap(), 2);
        let bad = ChannelParams {
            rho_dims: 4,
            err_dims: 0,
            seed: 0,
        };
        assert!(matches!(transmit(&u, &bad), Err(CodeError::InfeasibleChannel { .. })));
    }
}
