//! Command-line frontend: density tables, weight tables, raw draws, and the
//! verification suites, all emitted as CSV on stdout (or a file).
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on a
//! usage error.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distributions::Transform;
use crate::mixtures::{
    altnormal_representation_auto, classical_chisq, hypsec_representation,
    logistic_representation, sample_hypsec_phi_form, sample_logistic_construction, AltSpec,
    LogisticConstruction, MixtureRepresentation,
};
use crate::rng::Rng;
use crate::series::BuiltinSpec;
use crate::verify::{reports_to_csv, run_suite, Suite, SuiteOptions};
use crate::Result;

/// Mixture representations of noncentral distributions: tables, samplers,
/// and verification suites.
#[derive(Debug, Parser)]
#[command(name = "noncentral", version, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate direct and mixture densities over a grid
    Density(DensityArgs),
    /// Tabulate mixing-law weights with cumulative mass
    Weights(WeightsArgs),
    /// Emit raw draws from a selected construction
    Sample(SampleArgs),
    /// Run a verification suite and report pass/fail per check
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Normal,
    Logistic,
    Hypsec,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformArg {
    Abs,
    Square,
}

impl TransformArg {
    fn transform(self) -> Transform {
        match self {
            TransformArg::Abs => Transform::Abs,
            TransformArg::Square => Transform::Square,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpecArg {
    Classical,
    Geometric,
    GeometricV1,
    Logseries,
}

impl SpecArg {
    fn builtin(self, alpha: f64) -> Result<BuiltinSpec> {
        Ok(match self {
            SpecArg::Classical => BuiltinSpec::Classical,
            SpecArg::Geometric => BuiltinSpec::geometric(alpha)?,
            SpecArg::GeometricV1 => BuiltinSpec::GeometricV1,
            SpecArg::Logseries => BuiltinSpec::LogSeries,
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConstructionArg {
    /// closed-form target sampler
    Direct,
    /// mixing-index draw followed by a component draw
    Mixture,
    /// logistic scaled-sum of exponentials
    Sum,
    /// logistic max of exponentials
    Max,
    /// hyperbolic secant beta-ratio form
    Phi,
}

/// `min:max:points` grid specification.
#[derive(Debug, Clone, Copy)]
struct GridSpec {
    min: f64,
    max: f64,
    points: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be min:max:points, got '{s}'"));
        }
        let min: f64 = parts[0].parse().map_err(|_| format!("bad grid min '{}'", parts[0]))?;
        let max: f64 = parts[1].parse().map_err(|_| format!("bad grid max '{}'", parts[1]))?;
        let points: usize =
            parts[2].parse().map_err(|_| format!("bad grid points '{}'", parts[2]))?;
        if !(min > 0.0) {
            return Err("grid min must be > 0 for density evaluation".into());
        }
        if !(max > min) {
            return Err("grid max must exceed min".into());
        }
        if points < 2 {
            return Err("grid needs at least 2 points".into());
        }
        Ok(GridSpec { min, max, points })
    }
}

impl GridSpec {
    fn values(&self) -> Vec<f64> {
        crate::verify::grid(self.min, self.max, self.points)
    }
}

#[derive(Debug, Args)]
struct DensityArgs {
    /// Base family of the shifted variable
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Shift parameter (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    /// Transform applied to the shifted variable
    #[arg(long, value_enum, default_value = "square")]
    transform: TransformArg,
    /// Representation spec for the normal family
    #[arg(long, value_enum, default_value = "classical")]
    spec: SpecArg,
    /// Parameter of the geometric spec
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Evaluation grid, min:max:points with min > 0
    #[arg(long, default_value = "0.01:10:100")]
    grid: GridSpec,
    /// Write CSV here instead of stdout
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct WeightsArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, value_enum, default_value = "classical")]
    spec: SpecArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Stop once cumulative mass reaches 1 - tolerance
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, value_enum, default_value = "square")]
    transform: TransformArg,
    #[arg(long, value_enum, default_value = "classical")]
    spec: SpecArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Which sampler realizes the law
    #[arg(long, value_enum, default_value = "direct")]
    construction: ConstructionArg,
    /// Number of draws (>= 1)
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = default_seed())]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name (classical, logistic, hypsec, altnormal-a..d, poisson-mix,
    /// ray-knight, renyi-sukhatme, all)
    suite: String,
    #[arg(long, default_value_t = default_seed())]
    seed: u64,
    /// Monte Carlo sample size per check
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Local-time level for the ray-knight suite
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Path count for the ray-knight suite
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    /// Populate the seconds column (off by default so output is reproducible)
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

/// Seed default, overridable through `NONCENTRAL_SEED`.
fn default_seed() -> u64 {
    std::env::var("NONCENTRAL_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(42)
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn emit(output: &Option<std::path::PathBuf>, text: &str) -> i32 {
    match output {
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => 0,
            Err(e) => usage_error(&format!("cannot write {}: {e}", path.display())),
        },
        None => {
            print!("{text}");
            0
        }
    }
}

fn representation(
    family: FamilyArg,
    spec: SpecArg,
    alpha: f64,
    delta: f64,
    transform: Transform,
) -> Result<MixtureRepresentation> {
    match family {
        FamilyArg::Normal => match spec.builtin(alpha)? {
            BuiltinSpec::Classical => classical_chisq(delta),
            builtin => altnormal_representation_auto(&AltSpec::Builtin(builtin), delta),
        },
        FamilyArg::Logistic => logistic_representation(delta, transform),
        FamilyArg::Hypsec => hypsec_representation(delta, transform),
    }
}

fn cmd_density(args: &DensityArgs) -> i32 {
    if args.delta == 0.0 {
        return usage_error("--delta must be nonzero");
    }
    let transform = match args.family {
        // the normal representations cover the squared variable only
        FamilyArg::Normal => Transform::Square,
        _ => args.transform.transform(),
    };
    let rep = match representation(args.family, args.spec, args.alpha, args.delta, transform) {
        Ok(rep) => rep,
        Err(e) => return usage_error(&e.to_string()),
    };
    let mut out = String::from("x,direct_pdf,mixture_pdf,abs_diff\n");
    for x in args.grid.values() {
        let direct = match rep.target_pdf(x) {
            Ok(v) => v,
            Err(e) => return usage_error(&e.to_string()),
        };
        let mixture = match rep.pdf(x) {
            Ok(v) => v,
            Err(e) => return usage_error(&e.to_string()),
        };
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            x,
            direct,
            mixture,
            (direct - mixture).abs()
        );
    }
    emit(&args.output, &out)
}

fn cmd_weights(args: &WeightsArgs) -> i32 {
    if args.delta == 0.0 {
        return usage_error("--delta must be nonzero");
    }
    if !(args.tolerance > 0.0 && args.tolerance < 1.0) {
        return usage_error("--tolerance must lie in (0, 1)");
    }
    let rep =
        match representation(args.family, args.spec, args.alpha, args.delta, Transform::Square) {
            Ok(rep) => rep,
            Err(e) => return usage_error(&e.to_string()),
        };
    let mut out = String::from("n,weight,cumulative\n");
    let mut cumulative = 0.0;
    for (n, &w) in rep.mixing().probs().iter().enumerate() {
        cumulative += w;
        let _ = writeln!(out, "{n},{:.16e},{:.16e}", w, cumulative);
        if cumulative >= 1.0 - args.tolerance {
            break;
        }
    }
    emit(&args.output, &out)
}

fn cmd_sample(args: &SampleArgs) -> i32 {
    if args.delta == 0.0 {
        return usage_error("--delta must be nonzero");
    }
    if args.n == 0 {
        return usage_error("--n must be >= 1");
    }
    let transform = args.transform.transform();
    let rep = match representation(args.family, args.spec, args.alpha, args.delta, transform) {
        Ok(rep) => rep,
        Err(e) => return usage_error(&e.to_string()),
    };
    let mut rng = Rng::new(args.seed, args.stream);
    let mut draw: Box<dyn FnMut(&mut Rng) -> f64> = match (args.construction, args.family) {
        (ConstructionArg::Direct, _) => Box::new(move |rng| rep.sample_direct(rng)),
        (ConstructionArg::Mixture, _) => Box::new(move |rng| rep.sample_mixture(rng)),
        (ConstructionArg::Sum, FamilyArg::Logistic) => Box::new(move |rng| {
            sample_logistic_construction(&rep, LogisticConstruction::Sum, rng)
        }),
        (ConstructionArg::Max, FamilyArg::Logistic) => Box::new(move |rng| {
            sample_logistic_construction(&rep, LogisticConstruction::Max, rng)
        }),
        (ConstructionArg::Phi, FamilyArg::Hypsec) => {
            Box::new(move |rng| sample_hypsec_phi_form(&rep, rng))
        }
        (c, f) => {
            return usage_error(&format!(
                "construction {c:?} is not available for family {f:?}"
            ))
        }
    };
    let mut out = String::from("value\n");
    for _ in 0..args.n {
        let _ = writeln!(out, "{:.16e}", draw(&mut rng));
    }
    emit(&args.output, &out)
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let suite = match Suite::parse(&args.suite) {
        Some(s) => s,
        None => {
            return usage_error(&format!(
                "unknown suite '{}'; expected one of: {}",
                args.suite,
                Suite::names().join(", ")
            ))
        }
    };
    if args.samples < 1_000 {
        return usage_error("--samples must be >= 1000");
    }
    if !(args.eta > 0.0) {
        return usage_error("--eta must be > 0");
    }
    if args.paths == 0 {
        return usage_error("--paths must be >= 1");
    }
    let options = SuiteOptions {
        seed: args.seed,
        n_samples: args.samples,
        eta: args.eta,
        n_paths: args.paths,
    };
    let reports = match run_suite(suite, &options) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    let code = emit(&args.output, &reports_to_csv(&reports, args.timings));
    if code != 0 {
        return code;
    }
    if reports.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}

/// Parse `std::env::args` and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version exit 0; real parse errors exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Density(args) => cmd_density(&args),
        Command::Weights(args) => cmd_weights(&args),
        Command::Sample(args) => cmd_sample(&args),
        Command::Verify(args) => cmd_verify(&args),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parses() {
        let g: GridSpec = "0.01:6:100".parse().unwrap();
        assert_eq!(g.points, 100);
        assert!((g.min - 0.01).abs() < 1e-15);
        let xs = g.values();
        assert_eq!(xs.len(), 100);
        assert!((xs[99] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn grid_spec_rejects_bad_input() {
        assert!("0:6:100".parse::<GridSpec>().is_err());
        assert!("1:0.5:100".parse::<GridSpec>().is_err());
        assert!("0.1:6:1".parse::<GridSpec>().is_err());
        assert!("0.1:6".parse::<GridSpec>().is_err());
    }

    #[test]
    fn cli_parses_density_invocation() {
        let cli = Cli::try_parse_from([
            "noncentral",
            "density",
            "--family",
            "hypsec",
            "--delta",
            "1",
            "--transform",
            "abs",
            "--grid",
            "0.01:6:100",
        ])
        .unwrap();
        match cli.command {
            Command::Density(args) => {
                assert!((args.delta - 1.0).abs() < 1e-15);
                assert_eq!(args.grid.points, 100);
            }
            _ => panic!("expected density"),
        }
    }

    #[test]
    fn cli_rejects_missing_delta() {
        assert!(Cli::try_parse_from(["noncentral", "density", "--family", "normal"]).is_err());
    }

    #[test]
    fn negative_delta_parses() {
        let cli = Cli::try_parse_from([
            "noncentral", "weights", "--family", "logistic", "--delta", "-1",
        ])
        .unwrap();
        match cli.command {
            Command::Weights(args) => assert!((args.delta + 1.0).abs() < 1e-15),
            _ => panic!("expected weights"),
        }
    }
}
