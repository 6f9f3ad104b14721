//! `cfdyn`: command-line front end for the flipped alpha-continued fraction
//! toolkit. Data goes to stdout (or `--output`), logs to stderr.
//!
//! Exit codes: 0 success, 1 usage, 2 domain, 3 precision-undecidable,
//! 4 verification failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cfdyn_core::cf::{convergents, semiregular_expand, tower_value};
use cfdyn_core::maps::{self, Alpha};
use cfdyn_core::matching::{
    detect_matching, enumerate_windows, scan_parameters, windows_csv, MatchMode, MatchingWindow,
};
use cfdyn_core::measure::{asymptotics, density, entropy_report, interior_grid, transfer_apply};
use cfdyn_core::natext::{explicit_domain, membership_fraction, simulate};
use cfdyn_core::numerics::{ExactReal, PrecisionPolicy};
use cfdyn_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod verify;

const PRECISION_CAP: u32 = 4096;

#[derive(Parser, Debug)]
#[command(name = "cfdyn", version, about = "Flipped alpha-continued fraction maps")]
struct Cli {
    #[command(flatten)]
    cfg: Common,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Working precision in bits for decimal literals and closed forms.
    #[arg(long, global = true, env = "CFDYN_PRECISION_BITS", default_value_t = 128)]
    precision_bits: u32,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write data to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Ppm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signed digits, convergents and truncation residuals of x.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Search for T^M(alpha) = T^N(1 - alpha).
    Match {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        /// Compare numerically (forced for decimal alpha).
        #[arg(long)]
        numerical: bool,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Matching windows of maximal pseudocenters.
    Windows {
        #[arg(long, default_value_t = 10)]
        max_denominator: u64,
    },
    /// Invariant density: pieces, and values at points or on a grid.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Evaluate at these points (repeatable).
        #[arg(long = "at")]
        at: Vec<String>,
        /// Evaluate on this many interior grid points.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Krengel entropy in closed form and by quadrature.
    Entropy {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Natural-extension point cloud.
    Natext {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Raster side length for `--format ppm`.
        #[arg(long, default_value_t = 512)]
        size: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        y_min: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        y_max: f64,
    },
    /// Matching scan over uniformly sampled alpha.
    Scan {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the invariant checks for one alpha; exit 4 on any failure.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failures of a command, mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
    Io(io::Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Core(Error::Parse(_)) => 1,
            Failure::Core(e) if e.is_undecidable() => 3,
            Failure::Core(_) | Failure::Io(_) => 2,
            Failure::Verify => 4,
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    policy: PrecisionPolicy,
    bits: u32,
    format: Format,
    output: Option<PathBuf>,
}

impl Ctx {
    fn alpha(&self, s: &str) -> Result<Alpha, Failure> {
        Ok(Alpha::parse_with(s, self.policy)?)
    }

    fn real(&self, s: &str) -> Result<ExactReal, Failure> {
        Ok(ExactReal::parse_with(s, self.policy)?)
    }

    fn sink(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn json(&self, v: &Value) -> Outcome {
        self.only(&[Format::Json])?;
        let mut w = self.sink()?;
        serde_json::to_writer_pretty(&mut w, v).map_err(io::Error::from)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn only(&self, allowed: &[Format]) -> Outcome {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(Failure::Usage(format!("format {:?} is not supported by this command", self.format)))
        }
    }
}

fn mode_of(alpha: &Alpha) -> &'static str {
    if alpha.is_exact() {
        "exact"
    } else {
        "adaptive"
    }
}

fn cmd_expand(ctx: &Ctx, alpha: &str, x: &str, n: usize) -> Outcome {
    let alpha = ctx.alpha(alpha)?;
    let x = ctx.real(x)?;
    let orbit = maps::orbit(&x, &alpha, n)?;
    let word = semiregular_expand(&x, &alpha, n)?;
    let conv = convergents(&word);
    let mut residuals = Vec::with_capacity(n);
    for k in 1..=n {
        let prefix = cfdyn_core::cf::SemiRegularWord(word.0[..k].to_vec());
        let r = x.sub(&tower_value(&prefix, orbit.point(k))?);
        residuals.push(if r.is_exact() { r.to_string() } else { format!("{:e}", r.to_f64()) });
    }
    let conv: Vec<Value> = conv
        .iter()
        .map(|c| json!({ "p": c.p.to_string(), "q": c.q.to_string(), "value": c.value().map(|v| v.to_string()) }))
        .collect();
    ctx.json(&json!({
        "alpha": alpha.to_string(),
        "x": x.to_string(),
        "mode": mode_of(&alpha),
        "digits": word.0.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "word": word.to_string(),
        "hit_one": orbit.hit_one,
        "convergents": conv,
        "truncation_residuals": residuals,
    }))
}

fn cmd_match(ctx: &Ctx, alpha: &str, max_steps: usize, numerical: bool, tolerance: f64) -> Outcome {
    let alpha = ctx.alpha(alpha)?;
    let mode = if numerical || !alpha.is_exact() {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Failure::Usage("tolerance must be positive".into()));
        }
        MatchMode::Numerical { tolerance }
    } else {
        MatchMode::Exact
    };
    let r = detect_matching(&alpha, max_steps, mode)?;
    let verified = if r.matched && mode == MatchMode::Exact { Some(r.verify(&alpha)?) } else { None };
    let mut v = serde_json::to_value(&r).map_err(io::Error::from)?;
    v["alpha"] = json!(alpha.to_string());
    v["verified"] = json!(verified);
    ctx.json(&v)
}

fn disjoint(ws: &[MatchingWindow]) -> bool {
    ws.windows(2).all(|p| {
        let r = ExactReal::from_surd(p[0].right.clone());
        let l = ExactReal::from_surd(p[1].left.clone());
        r.le(&l).unwrap_or(false)
    })
}

fn cmd_windows(ctx: &Ctx, q: u64) -> Outcome {
    let ws = enumerate_windows(q)?;
    if ctx.format == Format::Csv {
        let mut w = ctx.sink()?;
        w.write_all(windows_csv(&ws).as_bytes())?;
        w.flush()?;
        return Ok(());
    }
    let list: Vec<Value> = ws
        .iter()
        .map(|w| {
            let mut v = serde_json::to_value(w).unwrap_or(Value::Null);
            v["left_approx"] = json!(w.left_f64());
            v["right_approx"] = json!(w.right_f64());
            v
        })
        .collect();
    ctx.json(&json!({
        "max_denominator": q,
        "count": ws.len(),
        "disjoint": disjoint(&ws),
        "windows": list,
    }))
}

fn cmd_density(ctx: &Ctx, alpha: &str, at: &[String], samples: usize) -> Outcome {
    let alpha = ctx.alpha(alpha)?;
    let f = density(&alpha)?;
    let mut points = Vec::new();
    for s in at {
        points.push(ctx.real(s)?);
    }
    points.extend(interior_grid(&f, samples)?);
    let mut values = Vec::with_capacity(points.len());
    for x in &points {
        let fx = f.eval(x)?;
        let px = transfer_apply(&f, &alpha, x)?;
        values.push(json!({
            "x": x.to_string(),
            "density": fx.to_string(),
            "density_approx": fx.to_f64(),
            "transfer": px.to_string(),
            "fixed_point": fx == px,
        }));
    }
    let a = asymptotics(&alpha)?;
    ctx.json(&json!({
        "alpha": alpha.to_string(),
        "mode": mode_of(&alpha),
        "density": f,
        "breakpoints": f.breakpoints().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "asymptotics": a,
        "values": values,
    }))
}

fn cmd_entropy(ctx: &Ctx, alpha: &str) -> Outcome {
    let alpha = ctx.alpha(alpha)?;
    let r = entropy_report(&alpha, ctx.bits)?;
    let mut v = serde_json::to_value(&r).map_err(io::Error::from)?;
    v["mode"] = json!(mode_of(&alpha));
    v["precision_bits"] = json!(ctx.bits);
    ctx.json(&v)
}

fn cmd_natext(ctx: &Ctx, a: &Command) -> Outcome {
    let Command::Natext { alpha, points, burn_in, seed, size, y_min, y_max } = *a else {
        unreachable!()
    };
    if y_min.is_nan() || y_max.is_nan() || y_min >= y_max || size == 0 {
        return Err(Failure::Usage("need y_min < y_max and size >= 1".into()));
    }
    let cloud = simulate(alpha, points, burn_in, seed, None)?;
    match ctx.format {
        Format::Csv => {
            let mut w = ctx.sink()?;
            cloud.write_csv(&mut w)?;
            w.flush()?;
            Ok(())
        }
        Format::Ppm => {
            let mut w = ctx.sink()?;
            cloud.write_ppm(&mut w, size, y_min, y_max)?;
            w.flush()?;
            Ok(())
        }
        Format::Json => {
            // the explicit domain exists only below sqrt(2)/2
            let membership = ExactReal::from_f64(alpha, ctx.policy)
                .and_then(Alpha::new)
                .and_then(|al| explicit_domain(&al))
                .ok()
                .map(|r| membership_fraction(&r, &cloud, 1e-12));
            let mut v = serde_json::to_value(&cloud).map_err(io::Error::from)?;
            v["points"] = json!(cloud.len());
            v["domain_membership"] = json!(membership);
            ctx.json(&v)
        }
    }
}

fn cmd_scan(ctx: &Ctx, samples: usize, max_steps: usize, tolerance: f64, seed: u64) -> Outcome {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Failure::Usage("tolerance must be positive".into()));
    }
    let r = scan_parameters(samples, max_steps, tolerance, seed)?;
    ctx.json(&serde_json::to_value(&r).map_err(io::Error::from)?)
}

fn run(cli: Cli) -> Outcome {
    let bits = cli.cfg.precision_bits;
    if !(16..=PRECISION_CAP).contains(&bits) {
        return Err(Failure::Usage(format!("precision_bits must be in 16..={PRECISION_CAP}")));
    }
    let ctx = Ctx {
        policy: PrecisionPolicy { initial_bits: bits, cap_bits: PRECISION_CAP },
        bits,
        format: cli.cfg.format,
        output: cli.cfg.output,
    };
    log::debug!("{:?}", cli.cmd);
    match &cli.cmd {
        Command::Expand { alpha, x, n } => cmd_expand(&ctx, alpha, x, *n),
        Command::Match { alpha, max_steps, numerical, tolerance } => {
            cmd_match(&ctx, alpha, *max_steps, *numerical, *tolerance)
        }
        Command::Windows { max_denominator } => cmd_windows(&ctx, *max_denominator),
        Command::Density { alpha, at, samples } => cmd_density(&ctx, alpha, at, *samples),
        Command::Entropy { alpha } => cmd_entropy(&ctx, alpha),
        c @ Command::Natext { .. } => cmd_natext(&ctx, c),
        Command::Scan { samples, max_steps, tolerance, seed } => cmd_scan(&ctx, *samples, *max_steps, *tolerance, *seed),
        Command::Verify { alpha, seed } => {
            let alpha = ctx.alpha(alpha)?;
            let report = verify::run(&alpha, ctx.bits, *seed)?;
            let ok = report["passed"].as_bool() == Some(true);
            ctx.json(&report)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Io(e) => eprintln!("error: {e}"),
                Failure::Verify => eprintln!("error: verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
