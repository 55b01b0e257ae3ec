//! Command-line front end: lattice sums, Bernoulli polynomials, special
//! function values and identity checks, printed as JSON.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use conegamma::bernoulli::{generalized_bernoulli, Region};
use conegamma::cmath::{parse_complex, parse_complex_list};
use conegamma::cone_sums::{brute_force_cone_sum, cone_sum, interior_cone_sum};
use conegamma::special::{
    generalized_elliptic_gamma_c, generalized_multiple_sine_c, generalized_q_polylog_c,
    multiple_elliptic_gamma, multiple_sine, q_factorial, GammaMethod, ProductForm,
};
use conegamma::verify::{
    default_suite, run_report, sample_point, verify_named, Identity, SuiteEntry,
};
use conegamma::{corpus, Cone, ConeSpec, Error, EvalConfig, Result};

#[derive(Parser)]
#[command(name = "conegamma", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form lattice sum of exp(-n . omega) over the cone.
    Conesum {
        /// Cone JSON file or corpus name.
        #[arg(long)]
        cone: String,
        /// Periods as "re,im;re,im;...".
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        /// Sum over the interior only.
        #[arg(long)]
        strict: bool,
        /// Also sum directly, up to this cutoff on the dual grading.
        #[arg(long)]
        brute: Option<f64>,
    },
    /// Generalized Bernoulli polynomial B^C_{r,n}(z | omega).
    Bernoulli {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long)]
        interior: bool,
    },
    /// Evaluates a special function.
    Eval {
        #[arg(long = "fn", value_enum)]
        function: Function,
        /// Needed by the cone functions.
        #[arg(long)]
        cone: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Periods (tau or omega) as "re,im;re,im;...".
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use the second product representation of the multiple sines.
        #[arg(long)]
        second: bool,
    },
    /// Checks one identity at seeded sample points.
    Verify {
        #[arg(long)]
        identity: String,
        /// Cone JSON file or corpus name; for identities without a cone its
        /// dimension is the number of periods.
        #[arg(long)]
        cone: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Runs a batch of checks over the cone corpus.
    Report {
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict the suite to one identity.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the JSON report here instead of stdout; the table goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    #[value(name = "qfact")]
    QFactorial,
    #[value(name = "Gr")]
    Gr,
    #[value(name = "Sr")]
    Sr,
    #[value(name = "SrC")]
    SrC,
    #[value(name = "GrC")]
    GrC,
    #[value(name = "LiC")]
    LiC,
}

fn load_cone(arg: &str) -> Result<Cone> {
    if let Some(c) = corpus::by_name(arg) {
        return Ok(c);
    }
    let text = std::fs::read_to_string(Path::new(arg))
        .map_err(|e| Error::InvalidInput(format!("cannot read cone {arg}: {e}")))?;
    let spec: ConeSpec = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("bad cone JSON in {arg}: {e}")))?;
    spec.build()
}

fn load_config(path: Option<&Path>) -> Result<EvalConfig> {
    let Some(p) = path else {
        return Ok(EvalConfig::default());
    };
    let text = std::fs::read_to_string(p)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", p.display())))?;
    EvalConfig::from_json(&text).map_err(|e| Error::InvalidInput(format!("bad config JSON: {e}")))
}

fn complex(s: &str) -> Result<Complex64> {
    parse_complex(s)
        .ok_or_else(|| Error::InvalidInput(format!("cannot parse complex number {s:?}")))
}

fn complex_list(s: &str) -> Result<Vec<Complex64>> {
    parse_complex_list(s)
        .ok_or_else(|| Error::InvalidInput(format!("cannot parse period list {s:?}")))
}

/// Writes to stdout, ignoring a closed pipe (e.g. output piped into `head`).
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn print(v: &serde_json::Value) {
    emit(&serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Conesum {
            cone,
            omega,
            strict,
            brute,
        } => {
            let c = load_cone(&cone)?;
            let omega = complex_list(&omega)?;
            let value = if strict {
                interior_cone_sum(&c, &omega)?
            } else {
                cone_sum(&c, &omega)?
            };
            let mut out = json!({ "value": value });
            if let Some(cut) = brute {
                let b = brute_force_cone_sum(&c, &omega, Some(cut), strict)?;
                out["brute_force"] = json!(b);
            }
            print(&out);
        }
        Command::Bernoulli {
            cone,
            n,
            z,
            omega,
            interior,
        } => {
            let c = load_cone(&cone)?;
            let region = if interior {
                Region::Interior
            } else {
                Region::Closed
            };
            let b = generalized_bernoulli(&c, n, complex(&z)?, &complex_list(&omega)?, region)?;
            print(&json!(b));
        }
        Command::Eval {
            function,
            cone,
            z,
            tau,
            config,
            second,
        } => {
            let cfg = load_config(config.as_deref())?;
            let z = complex(&z)?;
            let tau = complex_list(&tau)?;
            let form = if second {
                ProductForm::Second
            } else {
                ProductForm::First
            };
            let cone = || -> Result<Cone> {
                load_cone(
                    cone.as_deref()
                        .ok_or_else(|| Error::InvalidInput("--cone is required".into()))?,
                )
            };
            let out = match function {
                Function::QFactorial => json!(q_factorial(z, &tau, &cfg)?),
                Function::Gr => json!(multiple_elliptic_gamma(z, &tau, &cfg)?),
                Function::Sr => json!(multiple_sine(z, &tau, form, &cfg)?),
                Function::SrC => json!(generalized_multiple_sine_c(&cone()?, z, &tau, form, &cfg)?),
                Function::GrC => json!(generalized_elliptic_gamma_c(
                    &cone()?,
                    z,
                    &tau,
                    GammaMethod::Direct,
                    &cfg
                )?),
                Function::LiC => json!(generalized_q_polylog_c(
                    &cone()?,
                    z,
                    &tau,
                    Region::Closed,
                    &cfg
                )?),
            };
            print(&out);
        }
        Command::Verify {
            identity,
            cone,
            seed,
            samples,
            config,
        } => {
            let cfg = load_config(config.as_deref())?;
            let id: Identity = identity.parse()?;
            let c = load_cone(&cone)?;
            let name = corpus::by_name(&cone).map(|_| cone.as_str());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checks = Vec::with_capacity(samples);
            for _ in 0..samples {
                let p = sample_point(id, &c, &mut rng)?;
                checks.push(verify_named(id, &c, name, &p, &cfg)?);
            }
            let ok = checks.iter().all(|c| c.passed());
            print(&json!({ "checks": checks, "config": cfg }));
            return Ok(ok);
        }
        Command::Report {
            suite,
            seed,
            only,
            config,
            out,
        } => {
            let cfg = load_config(config.as_deref())?;
            if suite != "default" {
                return Err(Error::InvalidInput(format!("unknown suite {suite:?}")));
            }
            let mut entries: Vec<SuiteEntry> = default_suite();
            if let Some(name) = only {
                let id: Identity = name.parse()?;
                entries.retain(|e| e.identity == id);
            }
            let report = run_report(&entries, seed, &cfg);
            match out {
                Some(path) => {
                    std::fs::write(&path, report.to_json()).map_err(|e| {
                        Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
                    })?;
                    emit(report.table().trim_end());
                }
                None => emit(&report.to_json()),
            }
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
