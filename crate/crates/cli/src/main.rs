//! `multisidon`: build, verify and analyse multi-Sidon spaces and the cyclic
//! subspace codes they generate. Reports are JSON on stdout (or csv/table).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use multisidon::codes::{build_code, code_equivalence, simulate, ChannelParams, EquivalenceMode};
use multisidon::construct::{monomial_family, roth_code_params, MonomialParams};
use multisidon::field::{Elem, Extension};
use multisidon::io::{code_manifest, family_to_json, CodeManifest, FamilyJson};
use multisidon::linset::{
    heavy_points_analysis, hyperplane_weights, projection_form, LinsetError, ProductSpace, DEFAULT_ENUM_CAP,
};
use multisidon::sidon::{
    canonical_form, family_equivalence, is_multi_sidon, is_sidon, is_weak_multi_sidon, poly_criterion, span_class,
    AutomorphismSet, MultiRoute, SidonRoute, SubspaceFamily,
};

const EXIT_ERROR: u8 = 1;
const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "multisidon",
    version,
    about = "Multi-Sidon spaces, linear sets and cyclic subspace codes"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Global {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Enumeration cap for linear-set computations (vectors).
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include certificates and witnesses in reports.
    #[arg(long, global = true)]
    emit_witness: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe GF(q^n) over F_q.
    Field {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
    },
    /// Build a monomial family or the code-family generators.
    #[command(group(ArgGroup::new("kind").required(true).args(["monomial", "roth"])))]
    Construct {
        /// Monomial family; parameters q=, t=, s=, r= and optionally xi=, mu=a,b,...
        #[arg(long)]
        monomial: bool,
        /// Generators V_i = {u + u^(q^s) w^i γ_0}; parameters q=, t=, s=.
        #[arg(long)]
        roth: bool,
        /// Append F_(q^t) to the family.
        #[arg(long)]
        subfield: bool,
        /// key=value parameters.
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a family file.
    #[command(group(ArgGroup::new("check").required(true).args(["sidon", "multi_sidon", "weak", "poly", "span", "projection"])))]
    Verify {
        /// Each member is a Sidon space.
        #[arg(long)]
        sidon: bool,
        #[arg(long)]
        multi_sidon: bool,
        /// Cross-family unique factorization.
        #[arg(long)]
        weak: bool,
        /// Canonical form and kernel criterion (maximum families only).
        #[arg(long)]
        poly: bool,
        /// Minimum/maximum-span classification.
        #[arg(long)]
        span: bool,
        /// Projection maps of a direct-sum decomposition given as the members.
        #[arg(long)]
        projection: bool,
        /// orbit-intersection | definitional (sidon); profile | alpha-scan (multi-sidon).
        #[arg(long)]
        route: Option<String>,
        family: PathBuf,
    },
    /// Weight spectrum of L_{U_1 x ... x U_r}.
    Spectrum {
        family: PathBuf,
        /// Also list heavy points and bound checks.
        #[arg(long)]
        heavy: bool,
        /// Also derive the dual hyperplane weights (rank rn/2 only).
        #[arg(long)]
        hyperplanes: bool,
    },
    /// Size and minimum distance of the cyclic code generated by a family.
    Distance {
        /// Family JSON or code manifest.
        input: PathBuf,
        /// Write the code manifest here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equivalence of two families (or code manifests).
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Semilinear)]
        mode: Mode,
        /// Compare the generated codes (checks sizes first).
        #[arg(long)]
        codes: bool,
    },
    /// Operator-channel simulation with minimum-distance decoding.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Linear,
    Semilinear,
}

/// Provenance block carried by every report.
#[derive(Serialize)]
struct RunConfig {
    subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    global: Global,
    version: &'static str,
}

impl RunConfig {
    fn new(subcommand: &'static str, global: &Global) -> Self {
        RunConfig {
            subcommand,
            field: None,
            inputs: Vec::new(),
            output: None,
            seed: None,
            global: global.clone(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// A family file, or the generators of a code manifest.
fn load_family(path: &Path) -> Result<SubspaceFamily> {
    let value: Value = read_json(path)?;
    if value.get("generators").is_some() {
        let m: CodeManifest = serde_json::from_value(value)?;
        Ok(m.generator_family()?)
    } else {
        let f: FamilyJson = serde_json::from_value(value)?;
        Ok(f.load()?)
    }
}

fn parse_kv(params: &[String]) -> Result<BTreeMap<String, String>> {
    params
        .iter()
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value, got {p:?}"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn get_u32(kv: &BTreeMap<String, String>, key: &str) -> Result<u32> {
    kv.get(key)
        .ok_or_else(|| anyhow!("missing parameter {key}="))?
        .parse()
        .with_context(|| format!("parameter {key}"))
}

fn report(config: RunConfig, body: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    if let Value::Object(m) = body {
        obj.extend(m);
    }
    Value::Object(obj)
}

fn cmd_field(g: &Global, q: u32, n: u32) -> Result<Value> {
    let ext = Extension::build(q, n)?;
    let gf = ext.gf();
    let mut cfg = RunConfig::new("field", g);
    cfg.field = Some(gf.spec());
    Ok(report(
        cfg,
        json!({
            "p": gf.characteristic(),
            "m": gf.degree(),
            "q": q,
            "n": n,
            "order": gf.order(),
            "modulus": gf.modulus(),
            "primitive": gf.primitive(),
            "tabled": gf.is_tabled(),
        }),
    ))
}

fn cmd_construct(g: &Global, monomial: bool, subfield: bool, params: &[String], out: Option<&Path>) -> Result<Value> {
    let kv = parse_kv(params)?;
    let q = get_u32(&kv, "q")?;
    let t = get_u32(&kv, "t")?;
    let s = get_u32(&kv, "s")?;
    let ext = Extension::build(q, 2 * t)?;
    let (family, params_json) = if monomial {
        let p = if kv.contains_key("xi") || kv.contains_key("mu") {
            let xi = Elem(get_u32(&kv, "xi")?);
            let mus = kv
                .get("mu")
                .ok_or_else(|| anyhow!("missing parameter mu="))?
                .split(',')
                .map(|x| x.trim().parse().map(Elem))
                .collect::<Result<Vec<_>, _>>()
                .context("parameter mu")?;
            MonomialParams {
                s,
                xi,
                mus,
                append_subfield: subfield,
            }
        } else {
            let r = get_u32(&kv, "r")? as usize;
            MonomialParams::search(&ext, s, r, subfield)?
        };
        (monomial_family(&ext, &p)?, serde_json::to_value(&p)?)
    } else {
        let rp = roth_code_params(&ext, s)?;
        (rp.family(&ext, subfield)?, serde_json::to_value(&rp)?)
    };
    let fam_json = family_to_json(&family);
    let mut cfg = RunConfig::new("construct", g);
    cfg.field = Some(fam_json.field.clone());
    cfg.output = out.map(|p| p.display().to_string());
    if let Some(path) = out {
        write_json(path, &fam_json)?;
    }
    Ok(report(cfg, json!({ "params": params_json, "family": fam_json })))
}

fn cmd_verify(g: &Global, flags: [bool; 6], route: Option<&str>, path: &Path) -> Result<Value> {
    let fam = load_family(path)?;
    let mut cfg = RunConfig::new("verify", g);
    cfg.field = Some(fam.ext().gf().spec());
    cfg.inputs.push(path.display().to_string());
    let [sidon, multi, weak, poly, span, projection] = flags;
    let mut body = if sidon {
        let route = match route.unwrap_or("orbit-intersection") {
            "orbit-intersection" => SidonRoute::OrbitIntersection,
            "definitional" => SidonRoute::Definitional,
            other => bail!("unknown route {other:?}"),
        };
        let mut result = true;
        let mut witness = Value::Null;
        for (i, u) in fam.members().iter().enumerate() {
            let v = is_sidon(u, route)?;
            if !v.result {
                result = false;
                witness = json!({ "member": i, "witness": v.witness });
                break;
            }
        }
        json!({ "check": "sidon", "route": route, "result": result, "witness": witness })
    } else if multi {
        let route = match route.unwrap_or("profile") {
            "profile" => MultiRoute::Profile,
            "alpha-scan" => MultiRoute::AlphaScan,
            other => bail!("unknown route {other:?}"),
        };
        let v = is_multi_sidon(&fam, route)?;
        json!({ "check": "multi-sidon", "route": route, "result": v.result, "witness": v.witness })
    } else if weak {
        let v = is_weak_multi_sidon(&fam);
        json!({ "check": "weak-multi-sidon", "route": "factorization", "result": v.result, "witness": v.witness })
    } else if poly {
        let c = canonical_form(&fam, None)?;
        let v = poly_criterion(&c)?;
        json!({ "check": "poly-criterion", "route": "canonical-form", "result": v.result, "witness": v.witness })
    } else if projection {
        let p = projection_form(fam.members())?;
        let result = p.sum_is_identity && p.orthogonal_idempotents && p.images_match && p.set_equality;
        json!({
            "check": "projection",
            "route": "exhaustive",
            "result": result,
            "sum_is_identity": p.sum_is_identity,
            "orthogonal_idempotents": p.orthogonal_idempotents,
            "images_match": p.images_match,
            "set_equality": p.set_equality,
            "witness": Value::Null,
        })
    } else {
        debug_assert!(span);
        let s = span_class(&fam)?;
        json!({ "check": "span", "route": "product-span", "result": s.class, "witness": s })
    };
    if !g.emit_witness || body["witness"].is_null() {
        body.as_object_mut().expect("object").remove("witness");
    }
    Ok(report(cfg, body))
}

fn cmd_spectrum(g: &Global, path: &Path, heavy: bool, hyper: bool) -> Result<Value> {
    let fam = load_family(path)?;
    let mut cfg = RunConfig::new("spectrum", g);
    cfg.field = Some(fam.ext().gf().spec());
    cfg.inputs.push(path.display().to_string());
    let v = ProductSpace::from_family(&fam)?;
    let rep = heavy_points_analysis(&v, g.cap)?;
    let s = &rep.spectrum;
    let mut body = json!({
        "counts": s.counts,
        "size": s.size,
        "rank": s.rank,
        "identities_ok": s.identities_ok,
    });
    if let Some(n0) = s.n0 {
        body["n0"] = json!(n0.to_string());
    }
    if heavy {
        body["heavy"] = json!({
            "points": rep.heavy,
            "coordinate_points_only": rep.coordinate_points_only,
            "cross_intersections_ok": rep.cross_intersections_ok,
            "weight_bound_ok": rep.weight_bound_ok,
            "rank_bound_ok": rep.rank_bound_ok,
        });
    }
    if hyper {
        let h = hyperplane_weights(&v, g.cap)?;
        let counts: BTreeMap<usize, String> = h.counts.iter().map(|(&w, c)| (w, c.to_string())).collect();
        body["hyperplanes"] = json!({
            "counts": counts,
            "total": h.total.to_string(),
            "weights": h.weights,
            "stated_top_weight": h.stated_top_weight,
        });
    }
    Ok(report(cfg, body))
}

fn cmd_distance(g: &Global, path: &Path, out: Option<&Path>) -> Result<Value> {
    let fam = load_family(path)?;
    let code = build_code(&fam)?;
    let manifest = code_manifest(&code, true);
    let mut cfg = RunConfig::new("distance", g);
    cfg.field = Some(manifest.field.clone());
    cfg.inputs.push(path.display().to_string());
    cfg.output = out.map(|p| p.display().to_string());
    if let Some(p) = out {
        write_json(p, &manifest)?;
    }
    let mut body = json!({
        "t": code.t(),
        "size": code.size(),
        "orbit_sizes": code.orbit_sizes(),
        "min_distance": manifest.min_distance,
    });
    if g.emit_witness {
        body["witness"] = json!(code.min_distance());
    }
    Ok(report(cfg, body))
}

fn cmd_equiv(g: &Global, a: &Path, b: &Path, mode: Mode, codes: bool) -> Result<Value> {
    let fa = load_family(a)?;
    let fb = load_family(b)?;
    let mut cfg = RunConfig::new("equiv", g);
    cfg.field = Some(fa.ext().gf().spec());
    cfg.inputs = vec![a.display().to_string(), b.display().to_string()];
    let w = if codes {
        let m = match mode {
            Mode::Linear => EquivalenceMode::Linear,
            Mode::Semilinear => EquivalenceMode::Semilinear,
        };
        code_equivalence(&build_code(&fa)?, &build_code(&fb)?, m)?
    } else {
        let autos = match mode {
            Mode::Linear => AutomorphismSet::Linear,
            Mode::Semilinear => AutomorphismSet::Semilinear,
        };
        family_equivalence(&fa, &fb, autos)?
    };
    let mut body = json!({ "mode": mode, "result": w.is_some() });
    if g.emit_witness {
        if let Some(w) = w {
            body["witness"] = json!(w);
        }
    }
    Ok(report(cfg, body))
}

fn cmd_simulate(g: &Global, code: &Path, rho: usize, e: usize, trials: usize, seed: u64) -> Result<Value> {
    let fam = load_family(code)?;
    let c = build_code(&fam)?;
    let mut cfg = RunConfig::new("simulate", g);
    cfg.field = Some(fam.ext().gf().spec());
    cfg.inputs.push(code.display().to_string());
    cfg.seed = Some(seed);
    let ch = ChannelParams {
        rho_dims: rho,
        err_dims: e,
        seed,
    };
    let rep = simulate(&c, &ch, trials)?;
    Ok(report(cfg, serde_json::to_value(rep)?))
}

fn run(cli: &Cli) -> Result<Value> {
    let g = &cli.global;
    if g.threads == 0 || g.cap == 0 {
        bail!("--threads and --cap must be positive");
    }
    match &cli.command {
        Command::Field { q, n } => cmd_field(g, *q, *n),
        Command::Construct {
            monomial,
            roth: _,
            subfield,
            params,
            out,
        } => cmd_construct(g, *monomial, *subfield, params, out.as_deref()),
        Command::Verify {
            sidon,
            multi_sidon,
            weak,
            poly,
            span,
            projection,
            route,
            family,
        } => cmd_verify(
            g,
            [*sidon, *multi_sidon, *weak, *poly, *span, *projection],
            route.as_deref(),
            family,
        ),
        Command::Spectrum {
            family,
            heavy,
            hyperplanes,
        } => cmd_spectrum(g, family, *heavy, *hyperplanes),
        Command::Distance { input, out } => cmd_distance(g, input, out.as_deref()),
        Command::Equiv { a, b, mode, codes } => cmd_equiv(g, a, b, *mode, *codes),
        Command::Simulate {
            code,
            rho,
            e,
            trials,
            seed,
        } => cmd_simulate(g, code, *rho, *e, *trials, *seed),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(value: &Value, format: Format) -> String {
    let Value::Object(map) = value else {
        return value.to_string();
    };
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializes"),
        Format::Csv => {
            let keys: Vec<&String> = map.keys().collect();
            let vals: Vec<String> = map
                .values()
                .map(|v| {
                    let s = scalar_text(v);
                    format!("\"{}\"", s.replace('"', "\"\""))
                })
                .collect();
            format!(
                "{}\n{}",
                keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","),
                vals.join(",")
            )
        }
        Format::Table => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            map.iter()
                .map(|(k, v)| format!("{k:width$}  {}", scalar_text(v)))
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads.max(1))
        .build();
    let result = match pool {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(anyhow!(e)),
    };
    match result {
        Ok(v) => {
            println!("{}", render(&v, cli.global.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let cap = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<LinsetError>(), Some(LinsetError::CapExceeded { .. })));
            ExitCode::from(if cap { EXIT_CAP } else { EXIT_ERROR })
        }
    }
}
