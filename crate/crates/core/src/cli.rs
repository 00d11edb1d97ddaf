//! Command-line front end. [`run_command`] does all the work and returns the
//! exit code with both output streams, so it can be driven from tests.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::blh::{blh_solve, invariance_check, BlhOutcome, BlhProblem};
use crate::classify::{classify, fundamental_op, OperatorPair, VonNeumannProbes};
use crate::dilation::{compressed_scalar, nf_ay_build, schaffer_build};
use crate::error::{Error, Result};
use crate::gamma_point::{beta_solve, in_gamma, GammaPoint, DEFAULT_POINT_TOL};
use crate::io::{read_config, read_matrix, read_poly, to_json, write_json, MatrixFile, RunConfig, CONFIG_ENV};
use crate::numrad::numerical_radius;
use crate::suite::{run_criterion, CRITERIA};

const RNG_NAME: &str = "ChaCha8";
const DEFAULT_SCHAFFER_DEGREE: usize = 16;
const DEFAULT_BLH_DEGREE: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "bidisc", about = "Operator pairs on the symmetrized bidisc", version)]
struct Cli {
    /// RunConfig JSON (defaults to $BIDISC_CONFIG when set)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Membership of (s, p) in Γ and the β with s = β + p·conj(β)
    Point {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        p: Complex64,
    },
    /// Classification report for a commuting pair
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        /// Also report the von Neumann margin over random polynomials
        #[arg(long)]
        von_neumann: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fundamental operator of a pair
    Fundamental {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Numerical radius of a matrix
    Numrad {
        #[arg(long = "A")]
        a: PathBuf,
    },
    /// Build a dilation or functional model and write its matrices
    Dilate {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, conflicts_with = "nf_ay", required_unless_present = "nf_ay")]
        schaffer: bool,
        #[arg(long)]
        nf_ay: bool,
        /// Directory for the output matrices
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Beurling–Lax–Halmos problem (A + A*z)Θ = Θ(B + B*z)
    Blh {
        #[command(subcommand)]
        action: BlhAction,
    },
    /// Run the property suite
    Suite {
        #[arg(long)]
        seed: Option<u64>,
        /// Run a single criterion (1-12)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12))]
        only: Option<u64>,
    },
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long = "S")]
    s: PathBuf,
    #[arg(long = "P")]
    p: PathBuf,
}

#[derive(Debug, Subcommand)]
enum BlhAction {
    /// Solve for B
    Solve {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long)]
        theta: PathBuf,
    },
    /// Check invariance of ΘH² under the truncated multiplier
    Check {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        truncation: Option<usize>,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses a complex number: `a`, `a+bi`, `a-bi`, `bi` or `a,b`.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number `{text}`");
    let real = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let value = if let Some((re, im)) = t.split_once(',') {
        Complex64::new(real(re)?, real(im)?)
    } else if let Some(body) = t.strip_suffix(['i', 'j']) {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let coeff = |s: &str| match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(s),
        };
        match split {
            Some(k) => Complex64::new(real(&body[..k])?, coeff(&body[k..])?),
            None => Complex64::new(0.0, coeff(body)?),
        }
    } else {
        Complex64::new(real(&t)?, 0.0)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn error_json(e: &Error) -> String {
    to_json(&json!({ "error": e.code(), "message": e.to_string() }))
}

fn load_config(explicit: Option<&Path>) -> Result<RunConfig> {
    match explicit {
        Some(path) => read_config(path),
        None => match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => read_config(Path::new(&path)),
            _ => Ok(RunConfig::default()),
        },
    }
}

fn read_pair(args: &PairArgs) -> Result<OperatorPair> {
    OperatorPair::new(read_matrix(&args.s)?, read_matrix(&args.p)?)
}

fn matrix(m: &crate::linalg::ComplexMatrix) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(m)).expect("matrix serializes")
}

fn rng_header(seed: u64) -> Value {
    json!({ "generator": RNG_NAME, "seed": seed })
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput { code: 2, stdout: String::new(), stderr: text }
            } else {
                CommandOutput { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let outcome = load_config(cli.config.as_deref()).and_then(|cfg| dispatch(cli.command, &cfg));
    match outcome {
        Ok((code, stdout)) => CommandOutput { code, stdout, stderr: String::new() },
        Err(e) => CommandOutput { code: 1, stdout: String::new(), stderr: error_json(&e) },
    }
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<(i32, String)> {
    let tol = cfg.tolerance()?;
    match command {
        Command::Point { s, p } => {
            let pt = GammaPoint::new(s, p);
            let beta = beta_solve(pt);
            let out = json!({
                "s": [s.re, s.im],
                "p": [p.re, p.im],
                "inside": in_gamma(pt, DEFAULT_POINT_TOL),
                "beta": [beta.beta.re, beta.beta.im],
                "beta_exact": beta.exact,
                "beta_residual": beta.residual,
            });
            Ok((0, to_json(&out)))
        }
        Command::Classify { pair, von_neumann, seed } => {
            let pair = read_pair(&pair)?;
            let report = classify(&pair, &tol)?;
            let mut out = json!({
                "kind": report.kind,
                "fundamental_op": report.fundamental_op.as_ref().map(matrix),
                "fundamental_residual": report.fundamental_residual,
                "wA": report.w_a,
                "checks": report.checks,
            });
            if von_neumann {
                let seed = seed.unwrap_or(cfg.seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let probes = VonNeumannProbes::new(3, cfg.probes, cfg.grid, &mut rng);
                let vn = probes.min_margin(&pair);
                out["rng"] = rng_header(seed);
                out["von_neumann"] = serde_json::to_value(vn).expect("outcome serializes");
            }
            Ok((0, to_json(&out)))
        }
        Command::Fundamental { pair } => {
            let pair = read_pair(&pair)?;
            let f = fundamental_op(&pair, &tol)?;
            let out = json!({
                "A": matrix(&f.op),
                "residual": f.residual,
                "wA": numerical_radius(&f.op, &tol).value,
                "defect_rank": f.defect_basis.ncols(),
            });
            Ok((0, to_json(&out)))
        }
        Command::Numrad { a } => {
            let a = read_matrix(&a)?;
            if !a.is_square() {
                return Err(Error::InvalidInput("numerical radius needs a square matrix".into()));
            }
            let r = numerical_radius(&a, &tol);
            let certificate: Vec<[f64; 2]> = r.certificate.iter().map(|z| [z.re, z.im]).collect();
            let out = json!({ "value": r.value, "argmax_angle": r.argmax_angle, "certificate": certificate });
            Ok((0, to_json(&out)))
        }
        Command::Dilate { pair, schaffer, nf_ay: _, out, truncation } => {
            let pair = read_pair(&pair)?;
            let n = truncation.or(cfg.truncation);
            std::fs::create_dir_all(&out).map_err(|e| Error::InvalidInput(format!("{}: {e}", out.display())))?;
            let mut files = Vec::new();
            let mut save = |name: &str, m: &crate::linalg::ComplexMatrix| -> Result<()> {
                let path = out.join(name);
                write_json(&path, &MatrixFile::from_matrix(m))?;
                files.push(name.to_string());
                Ok(())
            };
            let summary = if schaffer {
                let degree = n.unwrap_or(DEFAULT_SCHAFFER_DEGREE);
                let sc = schaffer_build(&pair, degree, &tol)?;
                save("V.json", &sc.v.matrix)?;
                save("W.json", &sc.w.matrix)?;
                save("embed.json", &sc.embed)?;
                save("A.json", &sc.a_used)?;
                json!({
                    "construction": "schaffer",
                    "truncation": degree,
                    "v_intertwining": sc.v_intertwining(pair.p()),
                    "w_intertwining": sc.w_intertwining(pair.s()),
                    "interior_dim": sc.v.interior_dim(),
                })
            } else {
                let model = nf_ay_build(&pair, n, &tol)?;
                let scalar = compressed_scalar(&model, &tol)?;
                save("S_model.json", &model.s_model)?;
                save("P_model.json", &model.p_model)?;
                save("symbol_A.json", &model.symbol_a)?;
                save("X.json", &scalar.x)?;
                json!({
                    "construction": "nf-ay",
                    "truncation": model.model_space.n_trunc,
                    "trunc_error": model.model_space.trunc_error,
                    "tolerance": model.tolerance(),
                    "residual_s": model.residual_s,
                    "residual_p": model.residual_p,
                    "symbol_residual": model.symbol_residual,
                    "scalar_residual": scalar.residual,
                    "model_dim": model.model_space.dim(),
                })
            };
            let mut summary = summary;
            summary["files"] = json!(files);
            Ok((0, to_json(&summary)))
        }
        Command::Blh { action: BlhAction::Solve { a, theta } } => {
            let prob = BlhProblem::new(read_matrix(&a)?, read_poly(&theta)?)?;
            let out = match blh_solve(&prob, &tol) {
                BlhOutcome::Solved(sol) => json!({
                    "outcome": "Solved",
                    "B": matrix(&sol.b),
                    "residual": sol.residual,
                    "kernel_dim": sol.kernel_dim,
                    "unique": sol.unique,
                    "wB": sol.w_b,
                    "theta_inner": prob.is_inner(),
                }),
                BlhOutcome::NoSolution { residual, best } => json!({
                    "outcome": "NoSolution",
                    "B": Value::Null,
                    "best": matrix(&best.b),
                    "residual": residual,
                    "theta_inner": prob.is_inner(),
                }),
            };
            Ok((0, to_json(&out)))
        }
        Command::Blh { action: BlhAction::Check { a, theta, truncation } } => {
            let (a, theta) = (read_matrix(&a)?, read_poly(&theta)?);
            let n = truncation.or(cfg.truncation).unwrap_or(DEFAULT_BLH_DEGREE);
            let report = invariance_check(&a, &theta, n, &tol)?;
            Ok((0, to_json(&report)))
        }
        Command::Suite { seed, only } => {
            let seed = seed.unwrap_or(cfg.seed);
            let ids: Vec<usize> = match only {
                Some(id) => vec![id as usize],
                None => (1..=CRITERIA.len()).collect(),
            };
            let mut text = format!("suite seed={seed} rng={RNG_NAME}\n");
            let mut failed = 0;
            for id in ids {
                let outcome = run_criterion(id, seed);
                if !outcome.passed {
                    failed += 1;
                }
                text.push_str(&outcome.line());
                text.push('\n');
            }
            text.push_str(&format!("{failed} failed\n"));
            Ok((if failed == 0 { 0 } else { 1 }, text))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-1.5+2i").unwrap(), c(-1.5, 2.0));
        assert_eq!(parse_complex("0.5-i").unwrap(), c(0.5, -1.0));
        assert_eq!(parse_complex("-3j").unwrap(), c(0.0, -3.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("0.25, -0.75").unwrap(), c(0.25, -0.75));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn point_on_the_boundary() {
        let out = run_command(["bidisc", "point", "--s", "2", "--p", "1"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["inside"], true);
        assert_eq!(v["beta"][0].as_f64().unwrap(), 1.0);
        assert_eq!(v["beta"][1].as_f64().unwrap(), 0.0);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_command(["bidisc"]).code, 2);
        assert_eq!(run_command(["bidisc", "point", "--s", "x", "--p", "0"]).code, 2);
        assert_eq!(run_command(["bidisc", "suite", "--only", "13"]).code, 2);
        let help = run_command(["bidisc", "--help"]);
        assert_eq!(help.code, 0);
        assert!(help.stdout.contains("classify"));
    }
}
