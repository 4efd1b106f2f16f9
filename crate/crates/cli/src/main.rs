//! `bachelier`: evaluate, tabulate, transform and verify solutions of the
//! Bachelier pricing equation.
//!
//! Exit codes: 0 success, 1 failed verification or I/O error, 2 usage /
//! parse / semantic / invalid parameter, 3 domain error, 4 range error.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use bachelier_core::dsl::{format_expr, parse_expr, parse_group};
use bachelier_core::numeric::format_shortest;
use bachelier_core::verify::{self, Scope};
use bachelier_core::{Error, EvalPoint, GridSpec, ModelParams, SolutionExpr, SolutionFn};
use clap::{Args, Parser, Subcommand};

use crate::config::{AxisRange, ConfigFile};

#[derive(Parser, Debug)]
#[command(
    name = "bachelier",
    version,
    about = "Elementary solutions of the Bachelier PDE and their symmetry transforms"
)]
struct Cli {
    /// key=value file supplying any option not given on the command line
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    /// Interest rate (nonzero, may be negative)
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Absolute volatility (> 0)
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the value of an expression at one point
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long = "S", allow_hyphen_values = true)]
        s: Option<f64>,
    },
    /// Emit a `t,S,C` CSV surface over a grid
    Table {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        /// low:high:count
        #[arg(long = "t-range", allow_hyphen_values = true)]
        t_range: Option<AxisRange>,
        /// low:high:count
        #[arg(long = "S-range", allow_hyphen_values = true)]
        s_range: Option<AxisRange>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in residual, group-law and worked-example checks
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// theorem1 | theorem2 | groups | examples | kummer | all
        #[arg(long)]
        scope: Option<String>,
    },
    /// Append a group element to an expression's pipeline
    Transform {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        /// e.g. G6(0.2)
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Semantic(_) | Error::InvalidParameter(_) => 2,
            Error::Domain(_) => 3,
            Error::Range(_) => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

struct Settings {
    file: ConfigFile,
}

impl Settings {
    /// Command-line value if present, else the config file's.
    fn pick<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| Failure::usage(format!("config key {key}: {e}"))),
        }
    }

    fn require<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<T, Failure>
    where
        T::Err: std::fmt::Display,
    {
        self.pick(cli, key)?.ok_or_else(|| Failure::usage(format!("missing --{key} (flag or config key)")))
    }

    fn params(&self, args: ParamArgs) -> Result<ModelParams, Failure> {
        let r = self.require(args.r, "r")?;
        let sigma = self.require(args.sigma, "sigma")?;
        Ok(ModelParams::new(r, sigma)?)
    }

    /// Verification defaults to `r = 0.05`, `sigma = 0.2`.
    fn params_or_default(&self, args: ParamArgs) -> Result<ModelParams, Failure> {
        let r = self.pick(args.r, "r")?.unwrap_or(0.05);
        let sigma = self.pick(args.sigma, "sigma")?.unwrap_or(0.2);
        Ok(ModelParams::new(r, sigma)?)
    }

    fn expr(&self, cli: Option<String>) -> Result<SolutionExpr, Failure> {
        let text: String = self.require(cli, "expr")?;
        Ok(parse_expr(&text)?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let file = match &cli.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
            ConfigFile::parse(&text).map_err(|e| Failure::usage(e.to_string()))?
        }
        None => ConfigFile::default(),
    };
    let settings = Settings { file };

    match cli.command {
        Command::Eval { params, expr, t, s } => {
            let mp = settings.params(params)?;
            let expr = settings.expr(expr)?;
            let t = settings.require(t, "t")?;
            let s = settings.require(s, "S")?;
            let value = expr.value(EvalPoint::new(t, s), &mp)?;
            println!("{}", format_shortest(value));
            Ok(0)
        }
        Command::Table { params, expr, t_range, s_range, out } => {
            let mp = settings.params(params)?;
            let expr = settings.expr(expr)?;
            let t_axis: AxisRange = settings.require(t_range, "t-range")?;
            let s_axis: AxisRange = settings.require(s_range, "S-range")?;
            let grid = GridSpec::new((t_axis.low, t_axis.high), (s_axis.low, s_axis.high), t_axis.count, s_axis.count)?;
            let csv = render_table(&expr, &grid, &mp)?;
            let out: Option<PathBuf> = settings.pick(out, "out")?;
            match out {
                Some(path) => {
                    fs::write(&path, csv).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?
                }
                None => print!("{csv}"),
            }
            Ok(0)
        }
        Command::Verify { params, scope } => {
            let mp = settings.params_or_default(params)?;
            let scope: String = settings.pick(scope, "scope")?.unwrap_or_else(|| "all".into());
            let scope = Scope::from_str(&scope)?;
            let outcomes = verify::run(scope, &mp)?;
            for o in &outcomes {
                println!("{o}");
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            println!("{passed}/{} checks passed (r={}, sigma={})", outcomes.len(), mp.r(), mp.sigma());
            Ok(if verify::all_passed(&outcomes) { 0 } else { 1 })
        }
        Command::Transform { params, expr, group } => {
            // Parameters are not needed to append a group, but bad ones are still rejected.
            if params.r.is_some() || params.sigma.is_some() {
                settings.params(params)?;
            }
            let expr = settings.expr(expr)?;
            let group: String = settings.require(group, "group")?;
            let g = parse_group(&group)?;
            println!("{}", format_expr(&expr.with_group(g)));
            Ok(0)
        }
    }
}

/// Row-major CSV, `t` outer; domain errors leave `C` empty and are counted
/// in a trailing `# skipped=N` line.
fn render_table(expr: &SolutionExpr, grid: &GridSpec, mp: &ModelParams) -> Result<String, Failure> {
    let mut csv = String::from("t,S,C\n");
    let mut skipped = 0usize;
    for p in grid.points() {
        let cell = match expr.value(p, mp) {
            Ok(v) => format_shortest(v),
            Err(e) if e.is_domain() => {
                skipped += 1;
                String::new()
            }
            Err(e) => return Err(e.into()),
        };
        let _ = writeln!(csv, "{},{},{}", format_shortest(p.t), format_shortest(p.s), cell);
    }
    if skipped > 0 {
        let _ = writeln!(csv, "# skipped={skipped}");
    }
    Ok(csv)
}
