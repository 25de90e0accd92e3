//! Command-line surface: print polynomials, evaluate moments, simulate
//! paths, and run the verification suites.
//!
//! Exit codes: 0 on success with every verdict passing, 1 when a verdict
//! fails, 2 on usage or configuration errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use levyq::models::LevyModel;
use levyq::render::{self, VarStyle};
use levyq::sim::{self, McVerdict, SimConfig};
use levyq::{gamma, harmonic, kailath_segall, limits, selftest};
use levyq::{Error, Result, SparsePoly};

const SCHEMA_VERSION: u64 = 1;
const DEFAULT_SEED: u64 = 20260822;
const SEED_ENV: &str = "LEVYQ_SEED";

#[derive(Parser)]
#[command(
    name = "levyq",
    version,
    about = "Time-space harmonic polynomials of Levy processes, exact and simulated"
)]
struct Cli {
    /// Highest polynomial degree the process will compute.
    #[arg(long, global = true, default_value_t = limits::DEFAULT_MAX_ORDER)]
    max_order: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the degree-n cumulant-to-moment polynomial in x1..xn.
    Gamma(GammaArgs),
    /// Print the degree-n time-space harmonic polynomial Q_n(x, t).
    Harmonic(HarmonicArgs),
    /// Print the degree-n Kailath-Segall polynomial in x1..xn.
    Ks(KsArgs),
    /// Print the moment polynomial E[X_t^n] as a polynomial in t.
    Moments(MomentsArgs),
    /// Draw seeded sample paths and summarize them.
    Simulate(SimulateArgs),
    /// Run a Monte Carlo verification gate.
    Verify(VerifyArgs),
    /// Run the deterministic symbolic identity suite.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Latex,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// Named model: brownian | poisson[:rate] | gamma | cp-lognormal | sum:A+B[+...].
    #[arg(long)]
    model: Option<String>,
    /// JSON model config file: {"sigma2": "p/q", "m": ["p/q", ...]}.
    #[arg(long)]
    model_file: Option<PathBuf>,
}

impl ModelArgs {
    fn resolve(&self) -> Result<LevyModel> {
        match (&self.model, &self.model_file) {
            (Some(spec), None) => LevyModel::parse(spec),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::ModelConfig(format!("{}: {e}", path.display()))
                })?;
                LevyModel::from_config_str(&text)
            }
            _ => Err(Error::ModelSpec(
                "provide exactly one of --model or --model-file".to_string(),
            )),
        }
    }
}

#[derive(Args)]
struct GammaArgs {
    /// Polynomial degree.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Closed,
    Recurrence,
    Gf,
}

#[derive(Args)]
struct HarmonicArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Polynomial degree.
    #[arg(long)]
    n: usize,
    /// Construction route; all routes agree exactly.
    #[arg(long, value_enum, default_value_t = Route::Closed)]
    route: Route,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct KsArgs {
    /// Polynomial degree.
    #[arg(long)]
    n: usize,
    /// Evaluate at comma-separated variation values x1,x2,... instead of printing.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    eval: Option<Vec<f64>>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Moment order.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n_paths: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated observation times, strictly increasing.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    t_grid: Vec<f64>,
    /// Write one CSV row of path values per path.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    check: VerifyCommand,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Gate: mean Q_n(X_t, t) and mean increment from s to t are within 3 SE of 0.
    Martingale(MartingaleArgs),
    /// Gate: iterated-integral product P^(n) P^(m) matches its covariance target.
    Orthogonality(OrthogonalityArgs),
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 100_000)]
    n_paths: usize,
    /// Defaults to the LEVYQ_SEED environment variable, then a fixed constant.
    #[arg(long)]
    seed: Option<u64>,
    /// Gate width in standard errors.
    #[arg(long, default_value_t = 3.0)]
    confidence: f64,
    /// Write per-path statistics as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MartingaleArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Polynomial degree.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Args)]
struct OrthogonalityArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[command(flatten)]
    mc: McArgs,
}

fn main() {
    let cli = Cli::parse();
    limits::set_max_order(cli.max_order);
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Gamma(args) => {
            limits::check_order(args.n)?;
            let g = gamma::gamma_recurrence(args.n)?;
            emit_poly(&g.poly, VarStyle::Indexed, &args.output, |extra| {
                extra["degree"] = json!(args.n);
            })?;
            Ok(0)
        }
        Command::Harmonic(args) => {
            limits::check_order(args.n)?;
            let model = args.model.resolve()?;
            let q = match args.route {
                Route::Closed => harmonic::q_closed(&model, args.n)?.poly,
                Route::Recurrence => harmonic::q_recurrence(&model, args.n)?.poly,
                Route::Gf => harmonic::q_gf_oracle(&model, args.n)?.poly,
            };
            emit_poly(&q, VarStyle::SpaceTime, &args.output, |extra| {
                extra["degree"] = json!(args.n);
                extra["model"] = json!(model.name);
                if model.is_degenerate() {
                    extra["degenerate"] = json!(true);
                }
            })?;
            Ok(0)
        }
        Command::Ks(args) => {
            limits::check_order(args.n)?;
            if let Some(values) = &args.eval {
                let value = kailath_segall::ks_evaluate(values, args.n)?;
                let text = match args.output.format {
                    Format::Json => serde_json::to_string_pretty(&json!({
                        "schema_version": SCHEMA_VERSION,
                        "kind": "evaluation",
                        "degree": args.n,
                        "value": value,
                    }))
                    .expect("serializable"),
                    _ => format!("{value}"),
                };
                write_output(&text, &args.output.out)?;
                return Ok(0);
            }
            let p = kailath_segall::ks_recurrence(args.n)?;
            emit_poly(&p.poly, VarStyle::Indexed, &args.output, |extra| {
                extra["degree"] = json!(args.n);
            })?;
            Ok(0)
        }
        Command::Moments(args) => {
            limits::check_order(args.n)?;
            let model = args.model.resolve()?;
            let mu = model.moment_poly(args.n)?;
            emit_poly(&mu, VarStyle::SpaceTime, &args.output, |extra| {
                extra["order"] = json!(args.n);
                extra["model"] = json!(model.name);
            })?;
            Ok(0)
        }
        Command::Simulate(args) => {
            let model = args.model.resolve()?;
            let seed = args.seed.unwrap_or_else(default_seed);
            let config = SimConfig::new(model, args.t_grid.clone(), args.n_paths, seed)?;
            let paths = sim::simulate(&config)?;
            if let Some(path) = &args.csv {
                let mut rows = String::new();
                rows.push_str("path");
                for g in &config.grid {
                    rows.push_str(&format!(",t={g}"));
                }
                rows.push('\n');
                for (i, p) in paths.iter().enumerate() {
                    rows.push_str(&i.to_string());
                    for v in &p.values {
                        rows.push_str(&format!(",{v}"));
                    }
                    rows.push('\n');
                }
                std::fs::write(path, rows)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            let summary: Vec<_> = config
                .grid
                .iter()
                .enumerate()
                .map(|(i, &g)| {
                    let xs: Vec<f64> = paths.iter().map(|p| p.values[i]).collect();
                    let n = xs.len() as f64;
                    let mean = xs.iter().sum::<f64>() / n;
                    let var =
                        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
                    json!({"t": g, "mean": mean, "variance": var})
                })
                .collect();
            let text = serde_json::to_string_pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "simulation",
                "model": config.model.name,
                "n_paths": config.n_paths,
                "seed": config.seed,
                "grid": config.grid,
                "summary": summary,
            }))
            .expect("serializable");
            write_output(&text, &args.output.out)?;
            Ok(0)
        }
        Command::Verify(args) => match args.check {
            VerifyCommand::Martingale(v) => {
                let model = v.model.resolve()?;
                let seed = v.mc.seed.unwrap_or_else(default_seed);
                let mut config = SimConfig::new(model, vec![v.s, v.t], v.mc.n_paths, seed)?;
                config.confidence = v.mc.confidence;
                config.validate()?;
                if let Some(path) = &v.mc.csv {
                    let samples = sim::martingale_samples(&config, v.n, v.s, v.t)?;
                    let mut rows = String::from("path,q_at_t,increment\n");
                    for (i, (qt, inc)) in
                        samples.at_t.iter().zip(&samples.increment).enumerate()
                    {
                        rows.push_str(&format!("{i},{qt},{inc}\n"));
                    }
                    std::fs::write(path, rows)
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                }
                let verdicts = sim::mc_martingale_test(&config, v.n, v.s, v.t)?;
                emit_verdicts(&verdicts, &v.mc.output)
            }
            VerifyCommand::Orthogonality(v) => {
                let model = v.model.resolve()?;
                let seed = v.mc.seed.unwrap_or_else(default_seed);
                let mut config = SimConfig::new(model, vec![v.t], v.mc.n_paths, seed)?;
                config.confidence = v.mc.confidence;
                config.validate()?;
                if let Some(path) = &v.mc.csv {
                    let products = sim::orthogonality_samples(&config, v.n, v.m, v.t)?;
                    let mut rows = String::from("path,product\n");
                    for (i, p) in products.iter().enumerate() {
                        rows.push_str(&format!("{i},{p}\n"));
                    }
                    std::fs::write(path, rows)
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                }
                let verdict = sim::mc_orthogonality_test(&config, v.n, v.m, v.t)?;
                emit_verdicts(std::slice::from_ref(&verdict), &v.mc.output)
            }
        },
        Command::Selftest => {
            let checks = selftest::run_all();
            let mut lines = Vec::new();
            for check in &checks {
                let tag = if check.pass { "ok  " } else { "FAIL" };
                lines.push(format!("{tag} {}: {}", check.name, check.detail));
            }
            let passed = checks.iter().filter(|c| c.pass).count();
            lines.push(format!("selftest: {passed}/{} checks passed", checks.len()));
            write_output(&lines.join("\n"), &None)?;
            Ok(if passed == checks.len() { 0 } else { 1 })
        }
    }
}

fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn emit_poly(
    poly: &SparsePoly,
    style: VarStyle,
    output: &OutputArgs,
    decorate: impl FnOnce(&mut serde_json::Value),
) -> Result<()> {
    let text = match output.format {
        Format::Plain => render::plain(poly, style),
        Format::Latex => render::latex(poly, style),
        Format::Json => {
            let mut envelope = json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "polynomial",
                "poly": render::json_terms(poly, style),
            });
            decorate(&mut envelope);
            serde_json::to_string_pretty(&envelope).expect("serializable")
        }
    };
    write_output(&text, &output.out)
}

fn emit_verdicts(verdicts: &[McVerdict], output: &OutputArgs) -> Result<i32> {
    let all_pass = verdicts.iter().all(|v| v.pass);
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "verdicts",
            "all_pass": all_pass,
            "verdicts": verdicts,
        }))
        .expect("serializable"),
        _ => {
            let mut lines = Vec::new();
            for v in verdicts {
                lines.push(format!(
                    "{} {}: estimate {:.6e}, target {:.6e}, std error {:.6e} ({} paths)",
                    if v.pass { "pass" } else { "FAIL" },
                    v.statistic,
                    v.estimate,
                    v.target,
                    v.std_error,
                    v.n_paths,
                ));
            }
            lines.join("\n")
        }
    };
    write_output(&text, &output.out)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            writeln!(handle, "{text}").map_err(|e| {
                // A closed pipe means the reader is gone; die the way a
                // SIGPIPE-terminated process reports, not with an error.
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(141);
                }
                Error::Io(e.to_string())
            })
        }
    }
}
