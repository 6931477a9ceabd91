//! `logmink` — command-line experiments around the logarithmic Minkowski
//! inequality: Wulff shapes, cone-volume measures, inequality checks, batch
//! sweeps and the extremum-problem solver. All artifacts are JSON (or CSV
//! for sweeps); runs are deterministic for a fixed seed.
//!
//! Exit codes: 0 success, 2 invalid input, 3 inequality violation in a
//! proven regime (a bug signal).

use clap::{Parser, Subcommand, ValueEnum};
use logmink::io::{
    body_from_str, body_to_json, measure_from_str, measure_to_json, solver_result_to_json,
    SCHEMA_VERSION,
};
use logmink::logmink::{log_minkowski_lhs, verify_log_minkowski, CombinationParams, Exponent};
use logmink::measures::{
    cone_volume_measure, surface_area_measure, transform_surface_measure,
};
use logmink::sampling::{random_cylinder, random_symmetric_polytope};
use logmink::solver::{solve_extremum, ExtremumProblem, SolverOptions};
use logmink::{
    classify_equality, detect_cylinder, lp_combination, ConvexBody, EqualityClass, LinearMap,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "logmink", version, about = "log-Minkowski inequality toolkit")]
struct Cli {
    /// RNG seed for randomized commands.
    #[arg(long, global = true, default_value_t = 42, env = "LOGMINK_SEED")]
    seed: u64,
    /// Output path (stdout when omitted).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    ConeVolume,
    Surface,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    PlanarRandom,
    Cylinder3dRandom,
    Boxes,
    Prisms,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Wulff shape (halfspace intersection) from a body JSON in
    /// halfspace form.
    Wulff { input: PathBuf },
    /// Check the log-Minkowski inequality for a pair of bodies.
    Verify {
        k: PathBuf,
        l: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Batch-verify a family of random instances; emits CSV.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Sphere points per random polytope before symmetrization.
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Solve the extremum problem for a prescribed cone-volume measure.
    Solve {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-8)]
        gtol: f64,
        /// Extra quasi-uniform directions added to the support of the
        /// target.
        #[arg(long, default_value_t = 0)]
        enrich: usize,
    },
    /// Compute the surface-area or cone-volume measure of a body.
    Measure {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "cone-volume")]
        kind: KindArg,
    },
    /// Apply an invertible linear map to a body or a surface measure.
    Transform {
        input: PathBuf,
        /// Row-major matrix entries, dim*dim comma-separated numbers.
        #[arg(long)]
        matrix: String,
    },
    /// Detect a cylinder decomposition.
    Detect { input: PathBuf },
    /// L_p or logarithmic Minkowski combination of two bodies.
    Combine {
        k: PathBuf,
        l: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Exponent p > 0; omit for the logarithmic combination.
        #[arg(long)]
        p: Option<f64>,
    },
}

struct CliError {
    code: u8,
    name: String,
    message: String,
}

impl CliError {
    fn input(name: &str, message: String) -> CliError {
        CliError {
            code: 2,
            name: name.to_string(),
            message,
        }
    }
}

impl From<logmink::Error> for CliError {
    fn from(e: logmink::Error) -> CliError {
        let name = match &e {
            logmink::Error::SingularMap { .. } => "SingularMap",
            logmink::Error::UnboundedShape { .. } => "UnboundedShape",
            logmink::Error::DegenerateShape { .. } => "DegenerateShape",
            logmink::Error::DimensionMismatch { .. } => "DimensionMismatch",
            logmink::Error::AsymmetricInput(_) => "AsymmetricInput",
            logmink::Error::InvalidP(_) => "InvalidP",
            logmink::Error::NonpositiveSupport { .. } => "NonpositiveSupport",
            logmink::Error::SubspaceNotComplementary(_) => "SubspaceNotComplementary",
            logmink::Error::NoDescent { .. } => "NoDescent",
            logmink::Error::InvalidInput(_) => "InvalidInput",
        };
        CliError::input(name, e.to_string())
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))
}

fn load_body(path: &PathBuf) -> Result<ConvexBody, CliError> {
    Ok(body_from_str(&read_file(path)?)?)
}

fn parse_matrix(dim: usize, spec: &str) -> Result<LinearMap, CliError> {
    let entries: Vec<f64> = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| CliError::input("InvalidInput", format!("bad matrix entry {t:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if entries.len() != dim * dim {
        return Err(CliError::input(
            "InvalidInput",
            format!("expected {} matrix entries, found {}", dim * dim, entries.len()),
        ));
    }
    let mut m = [[0.0; 3]; 3];
    for i in 0..dim {
        for j in 0..dim {
            m[i][j] = entries[i * dim + j];
        }
    }
    if dim < 3 {
        for i in dim..3 {
            m[i][i] = 1.0;
        }
    }
    Ok(LinearMap::new(dim, m)?)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn sweep_instance<R: Rng>(
    family: Family,
    points: usize,
    rng: &mut R,
) -> Result<(ConvexBody, ConvexBody), CliError> {
    let pair = match family {
        Family::PlanarRandom => (
            random_symmetric_polytope(2, points, rng)?,
            random_symmetric_polytope(2, points, rng)?,
        ),
        Family::Cylinder3dRandom => (
            random_cylinder(points.min(10), rng)?,
            random_symmetric_polytope(3, points, rng)?,
        ),
        Family::Boxes => {
            let dims = |rng: &mut R| {
                [
                    rng.gen_range(0.2..3.0),
                    rng.gen_range(0.2..3.0),
                    rng.gen_range(0.2..3.0),
                ]
            };
            (
                ConvexBody::make_box(3, dims(rng))?,
                ConvexBody::make_box(3, dims(rng))?,
            )
        }
        Family::Prisms => {
            // Relative prisms: one random base, two scale/height choices.
            let base = random_symmetric_polytope(2, points.min(8), rng)?;
            let prism = |rng: &mut R, base: &ConvexBody| -> Result<ConvexBody, CliError> {
                let c = rng.gen_range(0.3..2.0);
                let h = rng.gen_range(0.3..2.0);
                let mut pts = Vec::new();
                for v in base.vertices() {
                    for z in [-h, h] {
                        pts.push([c * v[0], c * v[1], z]);
                    }
                }
                Ok(ConvexBody::from_points(3, &pts)?)
            };
            (prism(rng, &base)?, prism(rng, &base)?)
        }
    };
    Ok(pair)
}

fn run(cli: &Cli) -> Result<(String, u8), CliError> {
    match &cli.command {
        Command::Wulff { input } => {
            let body = load_body(input)?;
            Ok((pretty(&serde_json::to_value(body_to_json(&body)).unwrap()), 0))
        }
        Command::Verify { k, l, tol } => {
            let k = load_body(k)?;
            let l = load_body(l)?;
            let report = verify_log_minkowski(&k, &l, *tol)?;
            let code = if report.violation() { 3 } else { 0 };
            let mut v = serde_json::to_value(&report).unwrap();
            v["schema"] = json!(SCHEMA_VERSION);
            Ok((pretty(&v), code))
        }
        Command::Sweep {
            family,
            count,
            points,
        } => {
            let mut out = String::from("seed,vol_k,vol_l,lhs,rhs,gap,class\n");
            let mut worst = f64::INFINITY;
            for i in 0..*count {
                let instance_seed = cli.seed.wrapping_add(i as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
                let (k, l) = sweep_instance(*family, *points, &mut rng)?;
                let report = verify_log_minkowski(&k, &l, 1e-9)?;
                worst = worst.min(report.gap);
                let class = serde_json::to_value(report.class).unwrap();
                writeln!(
                    out,
                    "{},{:.12},{:.12},{:.12e},{:.12e},{:.12e},{}",
                    instance_seed,
                    k.volume(),
                    l.volume(),
                    report.lhs,
                    report.rhs,
                    report.gap,
                    class.as_str().unwrap()
                )
                .unwrap();
                if report.violation() {
                    return Err(CliError {
                        code: 3,
                        name: "Violation".into(),
                        message: format!(
                            "negative gap {:.3e} at seed {instance_seed}",
                            report.gap
                        ),
                    });
                }
            }
            Ok((out, 0))
        }
        Command::Solve {
            measure,
            iters,
            gtol,
            enrich,
        } => {
            let (mu, warning) = measure_from_str(&read_file(measure)?)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            let options = SolverOptions {
                max_iters: *iters,
                grad_tol: *gtol,
                ..SolverOptions::default()
            };
            let problem = ExtremumProblem::new(&mu, *enrich, options)?;
            let result = solve_extremum(&problem)?;
            Ok((
                pretty(&serde_json::to_value(solver_result_to_json(&result)).unwrap()),
                0,
            ))
        }
        Command::Measure { input, kind } => {
            let body = load_body(input)?;
            let mu = match kind {
                KindArg::ConeVolume => cone_volume_measure(&body)?,
                KindArg::Surface => surface_area_measure(&body)?,
            };
            Ok((pretty(&serde_json::to_value(measure_to_json(&mu)).unwrap()), 0))
        }
        Command::Transform { input, matrix } => {
            let text = read_file(input)?;
            let sniff: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::input("InvalidInput", format!("bad JSON: {e}")))?;
            if sniff.get("atoms").is_some() {
                let (mu, warning) = measure_from_str(&text)?;
                if let Some(w) = warning {
                    eprintln!("warning: {w}");
                }
                let t = parse_matrix(mu.dim(), matrix)?;
                let out = transform_surface_measure(&mu, &t)?;
                Ok((pretty(&serde_json::to_value(measure_to_json(&out)).unwrap()), 0))
            } else {
                let body = body_from_str(&text)?;
                let t = parse_matrix(body.dim(), matrix)?;
                let out = body.apply_linear_map(&t)?;
                Ok((pretty(&serde_json::to_value(body_to_json(&out)).unwrap()), 0))
            }
        }
        Command::Detect { input } => {
            let body = load_body(input)?;
            let split = detect_cylinder(&body)?;
            let v = match split {
                None => json!({"schema": SCHEMA_VERSION, "is_cylinder": false}),
                Some(s) => {
                    let factors: Vec<serde_json::Value> = s
                        .factors()
                        .iter()
                        .map(|f| {
                            json!({
                                "dim": f.subspace.dim(),
                                "basis": f.subspace.basis().iter()
                                    .map(|b| b[..s.ambient()].to_vec())
                                    .collect::<Vec<_>>(),
                                "body": serde_json::to_value(body_to_json(&f.body)).unwrap(),
                            })
                        })
                        .collect();
                    json!({
                        "schema": SCHEMA_VERSION,
                        "is_cylinder": true,
                        "factors": factors,
                    })
                }
            };
            Ok((pretty(&v), 0))
        }
        Command::Combine { k, l, lambda, p } => {
            let k = load_body(k)?;
            let l = load_body(l)?;
            let exponent = match p {
                Some(p) => Exponent::P(*p),
                None => Exponent::Log,
            };
            let params = CombinationParams::new(*lambda, exponent)?;
            let body = lp_combination(&k, &l, &params, None)?;
            // Attach the functional values for quick inspection.
            let mut v = serde_json::to_value(body_to_json(&body)).unwrap();
            if let Ok(lhs) = log_minkowski_lhs(&k, &l) {
                v["lhs_k_l"] = json!(lhs);
            }
            if let Ok(Some(class)) = classify_equality(&k, &l) {
                v["equality_class"] = json!(match class {
                    EqualityClass::Dilatates => "dilatates",
                    EqualityClass::RelativeCylinders => "relative_cylinders",
                });
            }
            Ok((pretty(&v), 0))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::input("Io", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            if emit(&cli, &text).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            let payload = json!({
                "schema": SCHEMA_VERSION,
                "error": e.name,
                "message": e.message,
            });
            eprintln!("{}", serde_json::to_string(&payload).unwrap());
            ExitCode::from(e.code)
        }
    }
}
