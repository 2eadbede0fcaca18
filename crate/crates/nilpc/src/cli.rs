//! Command-line front end. Every command prints one JSON report on stdout.
//!
//! Exit status: 0 on success, 1 when the mathematics fails (inconsistent
//! input, violated relation, bad deformation data, …), 2 on usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nilpc_core::bilinear::{
    assemble_fr, associated_series, prime_decomposition_zero, refined_series, scalar_ring, series_rings,
    BilinearMap, FgAbelian, ScalarRing,
};
use nilpc_core::deformation::{abdef, adapt_basis, enumerate_deformations, DeformationParams};
use nilpc_core::morphism::{hom_from_images, image_index, invariant_report, is_inverse_pair, GroupHom};
use nilpc_core::series::{key_subgroups, lower_central_series, nilpotency_class, upper_central_series, SeriesChain};
use nilpc_core::{BigInt, GroupElement, Presentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::format::{self, FormatError};
use crate::report;

#[derive(Parser, Debug)]
#[command(name = "nilpc", version, about = "Polycyclic presentations of nilpotent groups: series, scalars, deformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a presentation and run the consistency check
    Check { file: PathBuf },
    /// Key subgroups and central series
    Analyze { file: PathBuf },
    /// One central series
    Series {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "lower")]
        kind: SeriesKind,
    },
    /// Bilinearization of a series and its rings of scalars
    Scalars {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "lower")]
        series: ChainKind,
        /// Include the basis triples of each ring
        #[arg(long)]
        basis: bool,
    },
    /// Adapted pseudo-basis
    Adapt { file: PathBuf },
    /// Abelian deformation; prints the new presentation file
    Deform {
        file: PathBuf,
        /// Comma-separated d_1,…,d_n
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Matrix c, rows separated by ';' and entries by ','
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Name written into the output file
        #[arg(long)]
        name: Option<String>,
    },
    /// Ext classes realized by deformations
    Enumerate { file: PathBuf },
    /// Certify a homomorphism given by generator images
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Also spot-check multiplicativity on random pairs and report the image index
        #[arg(long)]
        verify: bool,
    },
    /// Check that two maps are mutually inverse isomorphisms
    InversePair {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
    },
    /// Elementary invariants
    Invariants { file: PathBuf },
    /// Prime decomposition of zero in a finite ring of scalars
    Primes {
        file: Option<PathBuf>,
        /// Use the ring of scalars of multiplication on Z/N instead of a file
        #[arg(long)]
        cyclic: Option<u32>,
        #[arg(long, value_enum, default_value = "lower")]
        series: ChainKind,
        #[arg(long, value_enum, default_value = "a")]
        ring: RingKind,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SeriesKind {
    Lower,
    Upper,
    Refined,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ChainKind {
    Lower,
    Upper,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RingKind {
    P,
    Pl,
    Ae,
    Ad,
    A,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Math(String),
    /// A report is still printed.
    Report(Value, String),
}

impl From<nilpc_core::Error> for Failure {
    fn from(e: nilpc_core::Error) -> Self {
        Failure::Math(e.to_string())
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Syntax(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))
}

fn load(path: &Path) -> Result<(String, Presentation), Failure> {
    let text = read(path)?;
    format::parse_presentation(&text).map_err(|e| match e {
        FormatError::Syntax(s) => Failure::Usage(format!("{}: parse error: {}", path.display(), s)),
        other => Failure::Math(format!("{}: {}", path.display(), other)),
    })
}

fn chain(p: &Presentation, kind: ChainKind) -> SeriesChain {
    match kind {
        ChainKind::Lower => lower_central_series(p),
        ChainKind::Upper => upper_central_series(p),
    }
}

fn chain_name(kind: ChainKind) -> &'static str {
    match kind {
        ChainKind::Lower => "lower",
        ChainKind::Upper => "upper",
    }
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| Failure::Usage(format!("{}: {:?} is not an integer", what, t))))
        .collect()
}

fn parse_params(d: &str, c: &str) -> Result<DeformationParams, Failure> {
    let d = if d.trim().is_empty() { Vec::new() } else { parse_ints(d, "--d")? };
    let c: Vec<Vec<BigInt>> = if c.trim().is_empty() {
        Vec::new()
    } else {
        c.split(';').map(|row| parse_ints(row, "--c")).collect::<Result<_, _>>()?
    };
    Ok(DeformationParams { d, c })
}

/// Checks `φ(xy) = φ(x)φ(y)` on `count` seeded random pairs.
pub fn spot_check(phi: &GroupHom, count: usize, seed: u64) -> Option<(GroupElement, GroupElement)> {
    let src = phi.source();
    let dst = phi.target();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = |rng: &mut ChaCha8Rng| {
        let c: Vec<BigInt> = (0..src.rank()).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect();
        src.element(&c)
    };
    for _ in 0..count {
        let x = random(&mut rng);
        let y = random(&mut rng);
        let lhs = phi.apply(&src.multiply(&x, &y));
        let rhs = dst.multiply(&phi.apply(&x), &phi.apply(&y));
        if lhs != rhs {
            return Some((x, y));
        }
    }
    None
}

fn ring_for(kind: RingKind, file: &Path, series: ChainKind) -> Result<ScalarRing, Failure> {
    let (_, p) = load(file)?;
    let data = associated_series(&p, &chain(&p, series))?;
    let rings = series_rings(&data)?;
    Ok(match kind {
        RingKind::P => rings.p_r,
        RingKind::Pl => rings.pl_r,
        RingKind::Ae => rings.ae_r,
        RingKind::Ad => rings.ad_r,
        RingKind::A => rings.a_r,
    })
}

fn execute(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Check { file } => {
            let text = read(&file)?;
            let (name, p) = format::parse_unchecked(&text)?;
            let rep = p.consistency_check();
            let failures: Vec<Value> = rep
                .failures
                .iter()
                .map(|f| {
                    json!({
                        "overlap": f.overlap.to_string(),
                        "left": format::element_value(&f.left),
                        "right": format::element_value(&f.right),
                        "discrepancy": format::element_value(&f.discrepancy),
                    })
                })
                .collect();
            let consistent = failures.is_empty();
            let out = json!({
                "command": "check",
                "name": name,
                "rank": p.rank(),
                "consistent": consistent,
                "failures": failures,
            });
            if consistent {
                Ok(out)
            } else {
                Err(Failure::Report(out, "presentation is inconsistent".into()))
            }
        }
        Command::Analyze { file } => {
            let (name, p) = load(&file)?;
            let k = key_subgroups(&p)?;
            Ok(json!({
                "command": "analyze",
                "name": name,
                "rank": p.rank(),
                "class": nilpotency_class(&p),
                "key_subgroups": report::key_value(&k),
                "lower_central_series": report::chain_value(&lower_central_series(&p)),
                "upper_central_series": report::chain_value(&upper_central_series(&p)),
            }))
        }
        Command::Series { file, kind } => {
            let (name, p) = load(&file)?;
            let body = match kind {
                SeriesKind::Lower => json!({ "kind": "lower", "series": report::chain_value(&lower_central_series(&p)) }),
                SeriesKind::Upper => json!({ "kind": "upper", "series": report::chain_value(&upper_central_series(&p)) }),
                SeriesKind::Refined => {
                    let mut out = serde_json::Map::new();
                    out.insert("kind".into(), json!("refined"));
                    for base in [ChainKind::Lower, ChainKind::Upper] {
                        let rs = refined_series(&p, &chain(&p, base))?;
                        out.insert(
                            chain_name(base).into(),
                            json!({
                                "upper_refined": report::chain_value(&rs.upper),
                                "lower_refined": report::chain_value(&rs.lower),
                                "special_gap": report::section_value(&rs.special_gap),
                                "ring": report::ring_value(&rs.ring, false),
                                "actions": rs.actions.iter().map(report::action_value).collect::<Vec<_>>(),
                            }),
                        );
                    }
                    Value::Object(out)
                }
            };
            Ok(json!({ "command": "series", "name": name, "result": body }))
        }
        Command::Scalars { file, series, basis } => {
            let (name, p) = load(&file)?;
            let data = associated_series(&p, &chain(&p, series))?;
            let f = assemble_fr(&data)?;
            let rings = series_rings(&data)?;
            Ok(json!({
                "command": "scalars",
                "name": name,
                "series": chain_name(series),
                "bundle_size": data.bundle.len(),
                "v_r": report::subgroup_value(&data.v_r),
                "f_r": report::bilinear_value(&f),
                "rings": {
                    "P_R": report::ring_value(&rings.p_r, basis),
                    "PL_R": report::ring_value(&rings.pl_r, basis),
                    "AE_R": report::ring_value(&rings.ae_r, basis),
                    "AD_R": report::ring_value(&rings.ad_r, basis),
                    "A_R": report::ring_value(&rings.a_r, basis),
                },
            }))
        }
        Command::Adapt { file } => {
            let (name, p) = load(&file)?;
            let a = adapt_basis(&p)?;
            Ok(json!({
                "command": "adapt",
                "name": name,
                "unchanged": a.pres == p,
                "adapted": report::adapted_value(&name, &a),
            }))
        }
        Command::Deform { file, d, c, name } => {
            let (src_name, p) = load(&file)?;
            let params = parse_params(&d, &c)?;
            let a = adapt_basis(&p)?;
            let q = abdef(&a, &params)?;
            let name = name.unwrap_or_else(|| format!("{}-abdef", src_name));
            Ok(format::presentation_value(&name, &q))
        }
        Command::Enumerate { file } => {
            let (name, p) = load(&file)?;
            let a = adapt_basis(&p)?;
            let en = enumerate_deformations(&a)?;
            let base = invariant_report(&a.pres)?;
            let mut classes = Vec::new();
            for (k, def) in en.classes.iter().enumerate() {
                classes.push(json!({
                    "params": report::params_value(&def.params),
                    "class": report::class_value(&def.class),
                    "same_invariants": invariant_report(&def.pres)? == base,
                    "presentation": format::presentation_value(&format!("{}-def{}", name, k + 1), &def.pres),
                }));
            }
            Ok(json!({
                "command": "enumerate",
                "name": name,
                "n": a.n(),
                "p": a.p(),
                "e": format::int_value(&a.e()),
                "bound": format::int_value(&en.bound),
                "candidates": en.candidates,
                "realized": en.classes.len(),
                "classes": classes,
            }))
        }
        Command::Hom { source, target, map, verify } => {
            let (sn, src) = load(&source)?;
            let (tn, dst) = load(&target)?;
            let images = format::parse_map(&read(&map)?, src.rank(), &dst)?;
            let phi = match hom_from_images(&src, &dst, images) {
                Ok(h) => h,
                Err(e) => {
                    let out = json!({
                        "command": "hom", "source": sn, "target": tn,
                        "certified": false, "violation": e.to_string(),
                    });
                    return Err(Failure::Report(out, e.to_string()));
                }
            };
            let mut out = json!({ "command": "hom", "source": sn, "target": tn, "certified": true });
            if verify {
                const PAIRS: usize = 200;
                let bad = spot_check(&phi, PAIRS, 0x5eed);
                let (img, idx) = image_index(&phi);
                out["spot_checks"] = json!(PAIRS);
                out["multiplicative"] = json!(bad.is_none());
                out["image"] = report::subgroup_value(&img);
                out["index"] = report::period_value(&idx);
                if let Some((x, y)) = bad {
                    return Err(Failure::Report(out, format!("φ(xy) ≠ φ(x)φ(y) at x = {}, y = {}", x, y)));
                }
            }
            Ok(out)
        }
        Command::InversePair { a, b, phi, psi } => {
            let (an, pa) = load(&a)?;
            let (bn, pb) = load(&b)?;
            let f = hom_from_images(&pa, &pb, format::parse_map(&read(&phi)?, pa.rank(), &pb)?)?;
            let g = hom_from_images(&pb, &pa, format::parse_map(&read(&psi)?, pb.rank(), &pa)?)?;
            let inverse = is_inverse_pair(&f, &g)?;
            let out = json!({ "command": "inverse-pair", "a": an, "b": bn, "inverse": inverse });
            if inverse {
                Ok(out)
            } else {
                Err(Failure::Report(out, "maps are not mutually inverse".into()))
            }
        }
        Command::Invariants { file } => {
            let (name, p) = load(&file)?;
            let r = invariant_report(&p)?;
            Ok(json!({ "command": "invariants", "name": name, "invariants": report::invariants_value(&r) }))
        }
        Command::Primes { file, cyclic, series, ring } => {
            let (label, r) = match (cyclic, file) {
                (Some(n), None) => {
                    if n < 2 {
                        return Err(Failure::Usage("--cyclic needs N ≥ 2".into()));
                    }
                    let z = FgAbelian::cyclic(n as i64);
                    let f = BilinearMap::from_i64(z.clone(), z.clone(), z, &[&[&[1]]])?;
                    (format!("Z/{}", n), scalar_ring(&f)?)
                }
                (None, Some(f)) => (f.display().to_string(), ring_for(ring, &f, series)?),
                _ => return Err(Failure::Usage("give either a presentation file or --cyclic N".into())),
            };
            let primes = prime_decomposition_zero(&r)?;
            Ok(json!({
                "command": "primes",
                "ring": label,
                "order": report::period_value(&r.order()),
                "factors": primes.iter().map(|i| json!({
                    "ideal": i.to_string(),
                    "order": i.order,
                })).collect::<Vec<_>>(),
            }))
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(cli.command) {
        Ok(v) => Outcome { code: 0, stdout: format::to_text(&v), stderr: String::new() },
        Err(Failure::Usage(s)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {}\n", s) },
        Err(Failure::Math(s)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {}\n", s) },
        Err(Failure::Report(v, s)) => Outcome { code: 1, stdout: format::to_text(&v), stderr: format!("error: {}\n", s) },
    }
}
