//! Command-line surface.
//!
//! Exit codes are shared by every command: 0 success or pass, 1 a
//! mathematical check failed, 2 invalid input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::family::{
    self, counterexample_verdict, d_taylor, figure_csv, figure_rows, sign_scan, FamilyParam, VerdictConfig,
};
use crate::moments::{
    self, hausdorff_test_with, parse_sequence, stieltjes_test_with, Backend, MomentSeq,
};
use crate::oracle::{hsequence, DEFAULT_HORIZON};
use crate::scalar::{fmt_rat, parse_rat, to_decimal, Rat};
use crate::wco::{dual_weights, h_of, operator_report, SquaredWeights, WeightSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "cdl", version, about = "Cauchy duals of weighted composition operators on the one-circuit graph")]
pub struct Cli {
    /// Render rationals as 12-digit decimals instead of p/q.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Operator inspection.
    #[command(subcommand)]
    Wco(WcoCommand),
    /// Moment-sequence tests.
    #[command(subcommand)]
    Moments(MomentsCommand),
    /// The counterexample family.
    #[command(subcommand)]
    Family(FamilyCommand),
}

#[derive(Debug, Subcommand)]
enum WcoCommand {
    /// Norm, lower bound, cyclicity and 2-isometry residuals.
    Describe {
        spec: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Weights of the Cauchy dual.
    Dual {
        spec: PathBuf,
        /// Number of explicit dual weights to print.
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Hausdorff,
    Stieltjes,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
enum MomentsCommand {
    /// Test a sequence file or a dual moment sequence.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Sequence file (one value per line).
    #[arg(required_unless_present = "from_dual", conflicts_with = "from_dual")]
    file: Option<PathBuf>,
    /// Use ||C'^n e_k||^2 of the dual of this weight spec instead of a file.
    #[arg(long)]
    from_dual: Option<PathBuf>,
    #[arg(long, default_value_t = 0, requires = "from_dual")]
    fiber: usize,
    /// Last moment index taken from the dual.
    #[arg(long, default_value_t = DEFAULT_HORIZON, requires = "from_dual")]
    horizon: usize,
    #[arg(long, value_enum, default_value_t = Mode::Hausdorff)]
    mode: Mode,
    /// Hausdorff depth M, or Hankel order K for the Stieltjes test.
    #[arg(long)]
    depth: usize,
    /// Largest shift j for the Hausdorff test.
    #[arg(long)]
    j_cap: Option<usize>,
    #[arg(long, value_enum, env = "CDL_BACKEND", default_value = "exact")]
    backend: BackendArg,
    /// Absolute tolerance of the float backend.
    #[arg(long, default_value_t = moments::DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Debug, Subcommand)]
enum FamilyCommand {
    /// Derivatives D_m^(l)(0), l = 0..=order.
    Taylor {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Print Taylor coefficients D_m^(l)(0)/l! instead.
        #[arg(long)]
        coefficients: bool,
    },
    /// Exact sign scan of D_m on a uniform grid.
    Scan {
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = rat_arg)]
        xmax: Rat,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Full counterexample pipeline at one parameter.
    Verdict {
        #[arg(long, value_parser = rat_arg)]
        x: Rat,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 12)]
        horizon: usize,
        #[arg(long, default_value_t = 50)]
        residual_depth: usize,
    },
    /// CSV of D_4, D_5, D_6 on a grid.
    Figure {
        #[arg(long, value_parser = rat_arg, default_value = "3/5")]
        xmax: Rat,
        #[arg(long, default_value_t = 120)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exact p/q cells instead of decimals.
        #[arg(long)]
        exact: bool,
    },
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, msg: msg.to_string() }
    }

    fn check(msg: impl ToString) -> Self {
        Failure { code: EXIT_CHECK_FAILED, msg: msg.to_string() }
    }
}

struct Ctx<'a> {
    decimal: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn r(&self, v: &Rat) -> String {
        if self.decimal {
            to_decimal(v, 12)
        } else {
            fmt_rat(v)
        }
    }

    fn line(&mut self, s: impl AsRef<str>) -> Result<(), Failure> {
        writeln!(self.out, "{}", s.as_ref()).map_err(|e| Failure::input(format!("write failed: {e}")))
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let mut ctx = Ctx { decimal: cli.decimal, out };
    let result = match cli.command {
        Command::Wco(c) => run_wco(c, &mut ctx),
        Command::Moments(MomentsCommand::Check(a)) => run_moments(a, &mut ctx),
        Command::Family(c) => run_family(c, &mut ctx),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            if !f.msg.is_empty() {
                let _ = writeln!(err, "error: {}", f.msg);
            }
            f.code
        }
    }
}

fn load_weights(path: &PathBuf) -> Result<SquaredWeights, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let spec = WeightSpec::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    match spec {
        WeightSpec::Explicit(w) => Ok(w),
        WeightSpec::Family { x } => {
            let p = FamilyParam::new(x).map_err(Failure::input)?;
            Ok(family::family_weights(&p))
        }
    }
}

fn run_wco(cmd: WcoCommand, ctx: &mut Ctx) -> Result<u8, Failure> {
    match cmd {
        WcoCommand::Describe { spec, depth } => {
            let w = load_weights(&spec)?;
            let report = operator_report(&w, depth).map_err(Failure::input)?;
            ctx.line(format!("weights: {w}"))?;
            ctx.line(format!("alpha={}", ctx.r(&w.alpha())))?;
            ctx.line(format!(
                "norm_sq={} lower_sq={} cyclic_sufficient={}",
                ctx.r(&report.norm_sq),
                ctx.r(&report.lower_bound_sq),
                report.cyclic_sufficient
            ))?;
            ctx.line(format!("bounded={} bounded_below={}", report.bounded, report.bounded_below()))?;
            let nonzero: Vec<(usize, &Rat)> = report
                .two_isometry_residuals
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .collect();
            let tail = if report.tail_certified { "tail certified" } else { "tail not certified" };
            match nonzero.first() {
                None => ctx.line(format!("residuals: all zero (depth {depth}), {tail}"))?,
                Some((n, v)) => ctx.line(format!(
                    "residuals: {} nonzero (depth {depth}), first at n={n} value={}, {tail}",
                    nonzero.len(),
                    ctx.r(v)
                ))?,
            }
            ctx.line(format!("two_isometry={}", report.is_two_isometry()))?;
            Ok(EXIT_OK)
        }
        WcoCommand::Dual { spec, count } => {
            let w = load_weights(&spec)?;
            let d = dual_weights(&w).map_err(Failure::check)?;
            let head: Vec<String> = d.prefix(count).iter().map(|v| ctx.r(v)).collect();
            ctx.line(format!("dual sq' = [{}, ...]", head.join(", ")))?;
            ctx.line(format!("dual tail = {}", d.tail()))?;
            let h: Vec<String> = (0..count).map(|n| ctx.r(&h_of(&d, n))).collect();
            ctx.line(format!("h' = [{}, ...]", h.join(", ")))?;
            Ok(EXIT_OK)
        }
    }
}

fn run_moments(a: CheckArgs, ctx: &mut Ctx) -> Result<u8, Failure> {
    let backend = match a.backend {
        BackendArg::Exact => Backend::Exact,
        BackendArg::Float => Backend::Float,
    };
    if backend == Backend::Float && (a.tol.is_nan() || a.tol <= 0.0) {
        return Err(Failure::input(format!("tolerance must be positive, got {}", a.tol)));
    }
    let seq = match (&a.file, &a.from_dual) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            parse_sequence(&text, backend).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
        }
        (None, Some(spec)) => {
            let w = load_weights(spec)?;
            let d = dual_weights(&w).map_err(Failure::check)?;
            let seq = hsequence(&d, a.fiber, a.horizon).map_err(Failure::input)?;
            match backend {
                Backend::Exact => seq,
                Backend::Float => seq.to_float(),
            }
        }
        _ => return Err(Failure::input("give either a sequence file or --from-dual")),
    };
    let verdict = match a.mode {
        Mode::Hausdorff => hausdorff_test_with(&seq, a.depth, a.j_cap, a.tol),
        Mode::Stieltjes => stieltjes_test_with(&seq, a.depth, a.tol),
    }
    .map_err(Failure::input)?;
    let line = match (&verdict.detail, ctx.decimal, &seq) {
        (Some(moments::Scalar::Exact(v)), true, MomentSeq::Exact(_)) => {
            verdict.to_string().replace(&fmt_rat(v), &to_decimal(v, 12))
        }
        _ => verdict.to_string(),
    };
    ctx.line(line)?;
    Ok(if verdict.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn run_family(cmd: FamilyCommand, ctx: &mut Ctx) -> Result<u8, Failure> {
    match cmd {
        FamilyCommand::Taylor { m, order, coefficients } => {
            let values = if coefficients {
                family::d_function(m).taylor_at_zero(order).map_err(Failure::input)?
            } else {
                d_taylor(m, order).map_err(Failure::input)?
            };
            let cells: Vec<String> = values.iter().map(|v| ctx.r(v)).collect();
            ctx.line(cells.join(" "))?;
            Ok(EXIT_OK)
        }
        FamilyCommand::Scan { m, xmax, steps } => {
            let report = sign_scan(m, &xmax, steps).map_err(Failure::input)?;
            ctx.line(report.to_string())?;
            Ok(EXIT_OK)
        }
        FamilyCommand::Verdict { x, depth, horizon, residual_depth } => {
            if depth == 0 {
                return Err(Failure::input("depth must be at least 1"));
            }
            let p = FamilyParam::new(x).map_err(Failure::input)?;
            let config = VerdictConfig { depth, horizon, residual_depth };
            // x = 0 is rejected as input: the isometric boundary case
            let v = counterexample_verdict(&p, config).map_err(Failure::input)?;
            ctx.line(v.to_string())?;
            Ok(if v.confirmed { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        FamilyCommand::Figure { xmax, steps, out, exact } => {
            let rows = figure_rows(&xmax, steps).map_err(Failure::input)?;
            let csv = figure_csv(&rows, exact);
            match out {
                Some(path) => {
                    fs::write(&path, csv)
                        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
                    ctx.line(format!("wrote {} rows to {}", rows.len(), path.display()))?;
                }
                None => write!(ctx.out, "{csv}").map_err(|e| Failure::input(e.to_string()))?,
            }
            Ok(EXIT_OK)
        }
    }
}
