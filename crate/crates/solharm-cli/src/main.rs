//! `solharm` — command-line access to the spherical-harmonics library.
//!
//! Every command prints a single JSON report to stdout. Exit codes:
//! 0 success, 1 tolerance breach, 2 usage/parse error, 3 domain error.
//! Identical invocations produce byte-identical stdout; wall time goes
//! to stderr so it never perturbs the report.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use solharm::checks::SuiteId;
use solharm::expansions::{
    image_charge, interaction_energy, multipole_moments, plane_wave_partial_sum,
    MomentConvention, PointChargeSet,
};
use solharm::harmonics::{eval_solid, eval_y, HarmonicIndex, SolidKind};
use solharm::quadrature::{build_grid, project, SHCoefficients};
use solharm::rotation::{cd_from_euler, rotate_coefficients, EulerAngles};
use solharm::{Complex, Error};

#[derive(Parser)]
#[command(name = "solharm", version, about = "Solid and surface spherical harmonics toolkit")]
struct Cli {
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalKind {
    Surface,
    Regular,
    Irregular,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a surface harmonic Y_lm(θ, φ) or a solid harmonic at a point.
    Eval {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: i32,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        /// Cartesian point "x,y,z" for solid-harmonic kinds.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, value_enum, default_value = "surface")]
        kind: EvalKind,
    },
    /// Run a seeded invariant suite and report its max residual.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 6)]
        l_max: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Project samples (or a builtin function) onto surface harmonics.
    Project {
        /// Builtin name ("cos-theta", "Y32") or path to a θ,φ,re[,im] CSV
        /// sampled on the projection grid.
        #[arg(long)]
        input: String,
        #[arg(long)]
        l_max: u32,
    },
    /// Multipole interaction energy of two charge sets separated by r.
    Energy {
        #[arg(long)]
        charges1: String,
        #[arg(long)]
        charges2: String,
        /// Separation vector "x,y,z".
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 16)]
        l_max: u32,
    },
    /// Image of a point charge in a grounded sphere.
    Image {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        /// Source position "x,y,z".
        #[arg(long = "R")]
        big_r: String,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
    },
    /// Wigner 3j symbol of a "lb,mb,lc,mc,ld,md" triple.
    #[command(name = "3j")]
    ThreeJ {
        #[arg(long)]
        triple: String,
    },
    /// Gaunt integral of a "lb,mb,lc,mc,ld,md" triple.
    Gaunt {
        #[arg(long)]
        triple: String,
    },
    /// Rotate a coefficient vector by Euler angles (z-y-z, active).
    Rotate {
        /// Path to a coefficients JSON document (as emitted by `project`).
        #[arg(long)]
        coeffs: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Partial-wave sum for the plane wave e^{ik·r}.
    Planewave {
        #[arg(long)]
        k: String,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 30)]
        lmax: u32,
    },
}

fn complex_json(z: Complex) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn parse_vec3(s: &str) -> Result<[f64; 3], Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected 3 components, found {}", parts.len())));
    }
    let mut v = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        v[i] = p
            .parse()
            .map_err(|e| Error::Parse(format!("bad component {p:?}: {e}")))?;
    }
    Ok(v)
}

fn parse_triple(s: &str) -> Result<solharm::coupling::TripleIndex, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(Error::Parse(format!("expected 6 components, found {}", parts.len())));
    }
    let num = |i: usize| -> Result<i32, Error> {
        parts[i]
            .parse()
            .map_err(|e| Error::Parse(format!("bad component {:?}: {e}", parts[i])))
    };
    let idx = |li: usize, mi: usize| -> Result<HarmonicIndex, Error> {
        let l = num(li)?;
        if l < 0 {
            return Err(Error::Parse(format!("negative degree {l}")));
        }
        HarmonicIndex::new(l as u32, num(mi)?)
    };
    Ok(solharm::coupling::TripleIndex::new(
        idx(0, 1)?,
        idx(2, 3)?,
        idx(4, 5)?,
    ))
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    l: u32,
    m: i32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct CoeffsDoc {
    l_max: u32,
    entries: Vec<CoeffEntry>,
}

impl CoeffsDoc {
    fn from_coeffs(c: &SHCoefficients) -> Self {
        Self {
            l_max: c.l_max(),
            entries: c
                .iter()
                .map(|(&(l, m), v)| CoeffEntry { l, m, re: v.re, im: v.im })
                .collect(),
        }
    }

    fn to_coeffs(&self) -> Result<SHCoefficients, Error> {
        let mut c = SHCoefficients::new(self.l_max);
        for e in &self.entries {
            c.set(e.l, e.m, Complex::new(e.re, e.im))?;
        }
        Ok(c)
    }
}

struct Report {
    command: &'static str,
    params: Value,
    results: Value,
    max_residual: Option<f64>,
    exit: ExitCode,
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Eval { l, m, theta, phi, point, kind } => {
            let idx = HarmonicIndex::new(*l, *m)?;
            let value = match (kind, point) {
                (EvalKind::Surface, None) => {
                    let theta = theta.ok_or_else(|| Error::Parse("--theta required".into()))?;
                    let phi = phi.ok_or_else(|| Error::Parse("--phi required".into()))?;
                    eval_y(idx, theta, phi)?
                }
                (EvalKind::Surface, Some(p)) => {
                    let r = parse_vec3(p)?;
                    let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                    if n == 0.0 {
                        return Err(Error::Singularity("direction undefined at origin".into()));
                    }
                    eval_y(idx, (r[2] / n).clamp(-1.0, 1.0).acos(), r[1].atan2(r[0]))?
                }
                (EvalKind::Regular, Some(p)) => {
                    eval_solid(SolidKind::Regular, idx, parse_vec3(p)?)?
                }
                (EvalKind::Irregular, Some(p)) => {
                    eval_solid(SolidKind::Irregular, idx, parse_vec3(p)?)?
                }
                _ => return Err(Error::Parse("--point required for solid kinds".into())),
            };
            Ok(Report {
                command: "eval",
                params: json!({ "l": l, "m": m, "theta": theta, "phi": phi, "point": point }),
                results: json!({ "value": complex_json(value) }),
                max_residual: None,
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Check { suite, l_max, seed } => {
            let id: SuiteId = suite.parse()?;
            let report = id.run(*l_max, *seed)?;
            let passed = report.passed();
            Ok(Report {
                command: "check",
                params: json!({ "suite": id.name(), "l_max": l_max, "seed": seed }),
                results: json!({
                    "cases": report.cases,
                    "tolerance": report.tolerance,
                    "passed": passed,
                }),
                max_residual: Some(report.max_residual),
                exit: if passed { ExitCode::SUCCESS } else { ExitCode::from(1) },
            })
        }
        Command::Project { input, l_max } => {
            let coeffs = match input.as_str() {
                "cos-theta" => project(|theta, _| Complex::new(theta.cos(), 0.0), *l_max)?,
                "Y32" => {
                    let idx = HarmonicIndex::new(3, 2)?;
                    project(move |theta, phi| eval_y(idx, theta, phi).unwrap(), *l_max)?
                }
                path => project_csv(path, *l_max)?,
            };
            Ok(Report {
                command: "project",
                params: json!({ "input": input, "l_max": l_max }),
                results: serde_json::to_value(CoeffsDoc::from_coeffs(&coeffs)).unwrap(),
                max_residual: None,
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Energy { charges1, charges2, r, l_max } => {
            let s1 = PointChargeSet::from_csv(&read_file(charges1)?)?;
            let s2 = PointChargeSet::from_csv(&read_file(charges2)?)?;
            let rv = parse_vec3(r)?;
            let m1 = multipole_moments(&s1, *l_max)?;
            let m2 = multipole_moments(&s2, *l_max)?;
            let e = interaction_energy(&m1, &m2, rv, *l_max, MomentConvention::Conjugated)?;
            Ok(Report {
                command: "energy",
                params: json!({ "charges1": charges1, "charges2": charges2, "r": rv, "l_max": l_max }),
                results: json!({
                    "value": e.value,
                    "shell_magnitudes": e.shell_magnitudes,
                    "diverging": e.diverging,
                }),
                max_residual: None,
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Image { a, big_r, q } => {
            let rv = parse_vec3(big_r)?;
            let (q_img, pos) = image_charge(*a, rv, *q)?;
            Ok(Report {
                command: "image",
                params: json!({ "a": a, "R": rv, "q": q }),
                results: json!({ "q_img": q_img, "pos": pos }),
                max_residual: None,
                exit: ExitCode::SUCCESS,
            })
        }
        Command::ThreeJ { triple } => {
            let t = parse_triple(triple)?;
            Ok(Report {
                command: "3j",
                params: json!({ "triple": triple }),
                results: json!({ "value": solharm::coupling::wigner_3j(&t) }),
                max_residual: None,
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Gaunt { triple } => {
            let t = parse_triple(triple)?;
            Ok(Report {
                command: "gaunt",
                params: json!({ "triple": triple }),
                results: json!({ "value": solharm::coupling::gaunt(&t) }),
                max_residual: None,
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Rotate { coeffs, alpha, beta, gamma } => {
            let doc: CoeffsDoc = serde_json::from_str(&read_file(coeffs)?)
                .map_err(|e| Error::Parse(format!("coefficients JSON: {e}")))?;
            let input = doc.to_coeffs()?;
            let p = cd_from_euler(EulerAngles { alpha: *alpha, beta: *beta, gamma: *gamma });
            let rotated = rotate_coefficients(&input, &p)?;
            Ok(Report {
                command: "rotate",
                params: json!({ "coeffs": coeffs, "alpha": alpha, "beta": beta, "gamma": gamma }),
                results: serde_json::to_value(CoeffsDoc::from_coeffs(&rotated)).unwrap(),
                max_residual: None,
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Planewave { k, r, lmax } => {
            let kv = parse_vec3(k)?;
            let rv = parse_vec3(r)?;
            let value = plane_wave_partial_sum(kv, rv, *lmax)?;
            Ok(Report {
                command: "planewave",
                params: json!({ "k": kv, "r": rv, "lmax": lmax }),
                results: json!({ "value": complex_json(value) }),
                max_residual: None,
                exit: ExitCode::SUCCESS,
            })
        }
    }
}

fn read_file(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

/// Project a CSV of θ,φ,re[,im] samples taken on the projection grid for
/// the requested band limit, in node order.
fn project_csv(path: &str, l_max: u32) -> Result<SHCoefficients, Error> {
    let text = read_file(path)?;
    let mut samples = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(Error::Parse(format!(
                "line {}: expected 3 or 4 fields, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let mut vals = vec![0.0; fields.len()];
        for (i, f) in fields.iter().enumerate() {
            vals[i] = f
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}: {f:?}", lineno + 1)))?;
        }
        let im = if vals.len() == 4 { vals[3] } else { 0.0 };
        samples.push((vals[0], vals[1], Complex::new(vals[2], im)));
    }
    let grid = build_grid(l_max + 2);
    if samples.len() != grid.nodes.len() {
        return Err(Error::Parse(format!(
            "expected {} grid samples for l_max {}, found {}",
            grid.nodes.len(),
            l_max,
            samples.len()
        )));
    }
    for (i, (&(theta, phi, _), &(st, sp, _))) in
        grid.nodes.iter().zip(samples.iter()).enumerate()
    {
        if (theta - st).abs() > 1e-9 || (phi - sp).abs() > 1e-9 {
            return Err(Error::Parse(format!(
                "sample {i} at ({st}, {sp}) does not match grid node ({theta}, {phi})"
            )));
        }
    }
    let nodes: Vec<(f64, f64, Complex)> = grid
        .nodes
        .iter()
        .zip(samples.iter())
        .map(|(&(theta, phi, _), &(_, _, v))| (theta, phi, v))
        .collect();
    project(
        move |theta, phi| {
            nodes
                .iter()
                .find(|&&(t, p, _)| (t - theta).abs() < 1e-12 && (p - phi).abs() < 1e-12)
                .map(|&(_, _, v)| v)
                .expect("projection grid node")
        },
        l_max,
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(report) => {
            let mut doc = json!({
                "command": report.command,
                "params": report.params,
                "results": report.results,
            });
            if let Some(r) = report.max_residual {
                doc["max_residual"] = json!(r);
            }
            let text = if cli.pretty {
                serde_json::to_string_pretty(&doc).unwrap()
            } else {
                serde_json::to_string(&doc).unwrap()
            };
            println!("{text}");
            eprintln!("elapsed: {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
            report.exit
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Parse(_) | Error::IndexOutOfRange { .. } => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}
