// `!(x > 0.0)` style checks are kept so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use roadspeed_core::simulate;
use roadspeed_core::{
    limit_cinf, limit_speeds, r_max, solve_cstar, Dispersion, Error, InitialData, Params, Reaction, SimConfig,
    TangencyResult,
};

mod config;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::Domain { .. } | Error::Cfl { .. } => Self::Usage(e.to_string()),
            _ => Self::Runtime(e.to_string()),
        }
    }
}

/// Spreading speeds of a Fisher-KPP field inside a cylinder with a road on its boundary.
///
/// Every subcommand writes CSV to stdout and a short summary to stderr.
/// `--config FILE` splices `key=value` lines from FILE in as flags.
#[derive(Parser)]
#[command(name = "roadspeed", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spreading speed c* and the tangency point.
    Speed {
        #[command(flatten)]
        model: Model,
        #[command(flatten)]
        shape: Shape,
    },
    /// c* along a range of D or R.
    Sweep(SweepArgs),
    /// Limit speeds c0, c_tilde2, c_inf and the maximal speed.
    Limits {
        #[command(flatten)]
        model: Model,
        #[command(flatten)]
        shape: Shape,
    },
    /// Road and field alpha-intervals on a beta grid, at fixed c.
    Curves(CurvesArgs),
    /// Finite-difference run on the strip (N = 1).
    Simulate(SimulateArgs),
}

/// Parameters with defaults.
#[derive(Args, Clone, Copy)]
struct Model {
    /// Field diffusion d
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Exchange rate road -> field
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Exchange rate field -> road
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    /// Space dimension of the cross-section
    #[arg(long = "N", default_value_t = 1)]
    dim: u32,
    /// Growth rate f'(0)
    #[arg(long, default_value_t = 1.0)]
    f0: f64,
}

/// Road diffusion and radius, required.
#[derive(Args, Clone, Copy)]
struct Shape {
    /// Road diffusion D
    #[arg(long = "D")]
    big_d: f64,
    /// Cylinder radius R
    #[arg(long = "R")]
    radius: f64,
}

impl Model {
    fn params(&self, big_d: f64, radius: f64) -> Result<Params, CliError> {
        Ok(Params::new(self.d, big_d, self.mu, self.nu, radius, self.dim, self.f0)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    #[value(name = "D")]
    D,
    #[value(name = "R")]
    R,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spacing {
    Log,
    Lin,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: Model,
    #[arg(long, value_enum)]
    axis: Axis,
    /// Road diffusion; required unless sweeping D
    #[arg(long = "D")]
    big_d: Option<f64>,
    /// Radius; required unless sweeping R
    #[arg(long = "R")]
    radius: Option<f64>,
    /// Explicit comma-separated values
    #[arg(long, value_delimiter = ',', conflicts_with = "range", required_unless_present = "range")]
    values: Vec<f64>,
    /// LO:HI:COUNT
    #[arg(long)]
    range: Option<String>,
    #[arg(long, value_enum, default_value = "log")]
    spacing: Spacing,
}

#[derive(Args)]
struct CurvesArgs {
    #[command(flatten)]
    model: Model,
    #[command(flatten)]
    shape: Shape,
    /// Speed c
    #[arg(long)]
    c: f64,
    /// Lower end of the beta grid (default: where the field region ends)
    #[arg(long)]
    beta_min: Option<f64>,
    /// Upper end of the beta grid (default: where the road region ends)
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long, default_value_t = 401)]
    points: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReactionArg {
    Logistic,
    Zero,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: Model,
    #[arg(long = "D", default_value_t = 1.0)]
    big_d: f64,
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    /// Half-length of the domain [-L, L]
    #[arg(long = "L", default_value_t = 150.0)]
    half_length: f64,
    #[arg(long, default_value_t = 1501)]
    nx: usize,
    #[arg(long, default_value_t = 21)]
    ny: usize,
    /// Time step (default: the stability bound)
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value_t = 60.0)]
    t_end: f64,
    #[arg(long, value_enum, default_value = "logistic")]
    reaction: ReactionArg,
    /// Tracked level of max_y v
    #[arg(long, default_value_t = 0.5)]
    level: f64,
    /// Sampling interval of the trace
    #[arg(long, default_value_t = 0.5)]
    output_dt: f64,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

const SPEED_HEADER: &str = "c_star,beta_star,alpha_star,gamma_star,type,overlap_tol,c_tol";

fn speed_row(t: &TangencyResult) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        num(t.c_star),
        num(t.beta_star),
        num(t.alpha_star),
        num(t.gamma_star),
        t.wave_type,
        num(t.overlap_tol),
        num(t.c_tol)
    )
}

fn cmd_speed(model: Model, shape: Shape) -> Result<ExitCode, CliError> {
    let p = model.params(shape.big_d, shape.radius)?;
    let t = solve_cstar(&p)?;
    println!("{SPEED_HEADER}\n{}", speed_row(&t));
    let mut summary = format!("c* = {:.10} ({}), c_KPP = {:.10}", t.c_star, t.wave_type, p.c_kpp());
    if let Ok((rm, cm)) = r_max(&p) {
        write!(summary, ", R_M = {rm:.10}, c_M = {cm:.10}").unwrap();
    }
    eprintln!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn sweep_values(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    let values = match &args.range {
        None => args.values.clone(),
        Some(spec) => {
            let bad = || CliError::Usage(format!("--range {spec}: expected LO:HI:COUNT"));
            let parts: Vec<&str> = spec.split(':').collect();
            let [lo, hi, n] = parts[..] else { return Err(bad()) };
            let (lo, hi): (f64, f64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
            let n: usize = n.parse().map_err(|_| bad())?;
            if n < 2 {
                return Err(bad());
            }
            let frac = |k: usize| k as f64 / (n - 1) as f64;
            match args.spacing {
                Spacing::Lin => (0..n).map(|k| lo + (hi - lo) * frac(k)).collect(),
                Spacing::Log if lo > 0.0 && hi > 0.0 => {
                    (0..n).map(|k| (lo.ln() + (hi.ln() - lo.ln()) * frac(k)).exp()).collect()
                }
                Spacing::Log => return Err(CliError::Usage("log spacing needs a positive range".into())),
            }
        }
    };
    if values.is_empty() || values.iter().any(|v| !(*v > 0.0)) || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("sweep values must be positive and strictly increasing".into()));
    }
    Ok(values)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    let values = sweep_values(&args)?;
    let missing = |flag: &str| CliError::Usage(format!("--{flag} is required for this sweep"));
    let (name, base) = match args.axis {
        Axis::D => ("D", args.model.params(values[0], args.radius.ok_or_else(|| missing("R"))?)?),
        Axis::R => ("R", args.model.params(args.big_d.ok_or_else(|| missing("D"))?, values[0])?),
    };
    let at = |v: f64| match args.axis {
        Axis::D => base.with_road_diffusion(v),
        Axis::R => base.with_radius(v),
    };
    let rows: Vec<_> = values.par_iter().map(|&v| solve_cstar(&at(v))).collect();

    println!("{name},c_star,beta_star,type,status");
    let mut failures = 0;
    for (v, row) in values.iter().zip(&rows) {
        match row {
            Ok(t) => println!("{},{},{},{},ok", num(*v), num(t.c_star), num(t.beta_star), t.wave_type),
            Err(e) => {
                failures += 1;
                println!("{},,,,error: {}", num(*v), e.to_string().replace(',', ";"));
            }
        }
    }
    match args.axis {
        Axis::D => {
            let l = limit_speeds(&base)?;
            println!("# c0={}", num(l.c0));
            println!("# c_tilde2={} (large-D overlay: c_tilde2*sqrt(D))", num(l.c_tilde2));
        }
        Axis::R => {
            println!("# c_inf={}", num(limit_cinf(&base)?));
            if let Ok((rm, cm)) = r_max(&base) {
                println!("# R_M={}\n# c_M={}", num(rm), num(cm));
            }
        }
    }
    eprintln!("{} points, {failures} failed", values.len());
    Ok(if failures > 0 { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn cmd_limits(model: Model, shape: Shape) -> Result<ExitCode, CliError> {
    let p = model.params(shape.big_d, shape.radius)?;
    let l = limit_speeds(&p)?;
    match r_max(&p) {
        Ok((rm, cm)) => {
            println!("c0,c_tilde2,c_inf,R_M,c_M");
            println!("{},{},{},{},{}", num(l.c0), num(l.c_tilde2), num(l.c_inf), num(rm), num(cm));
        }
        Err(_) => {
            println!("c0,c_tilde2,c_inf");
            println!("{},{},{}", num(l.c0), num(l.c_tilde2), num(l.c_inf));
        }
    }
    eprintln!("c0 = {:.10}, c_tilde2 = {:.10}, c_inf = {:.10}", l.c0, l.c_tilde2, l.c_inf);
    Ok(ExitCode::SUCCESS)
}

fn cmd_curves(args: CurvesArgs) -> Result<ExitCode, CliError> {
    let p = args.model.params(args.shape.big_d, args.shape.radius)?;
    if !(args.c > 0.0) {
        return Err(CliError::Usage(format!("--c must be positive, got {}", args.c)));
    }
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let disp = Dispersion::new(p)?;
    let c = args.c;
    let lo = args.beta_min.unwrap_or_else(|| match disp.rho(c) {
        Some(rho) => -rho,
        None => disp.beta_hat(c).unwrap_or(0.0),
    });
    let hi = match args.beta_max {
        Some(b) => b,
        None => disp.beta_tilde(c)?,
    };
    if !(lo < hi) {
        return Err(CliError::Usage(format!("empty beta range [{lo}, {hi}]")));
    }
    let n = args.points - 1;
    let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let samples = disp.sample_curves(c, &grid)?;

    println!("beta,road_lo,road_hi,field_lo,field_hi,gap,overlap");
    let mut min_gap = f64::INFINITY;
    for s in &samples {
        let gap = s.boundary.zip(s.field).map(|(a, b)| a.gap(&b));
        if let Some(g) = gap {
            min_gap = min_gap.min(g);
        }
        println!(
            "{},{},{},{},{},{},{}",
            num(s.beta),
            opt(s.boundary.map(|a| a.lo)),
            opt(s.boundary.map(|a| a.hi)),
            opt(s.field.map(|a| a.lo)),
            opt(s.field.map(|a| a.hi)),
            opt(gap),
            u8::from(gap.is_some_and(|g| g <= 0.0))
        );
    }
    eprintln!("c = {c}: minimum gap {min_gap:.6e} over {} rows", samples.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    let params = args.model.params(args.big_d, args.radius)?;
    let cfg = SimConfig {
        params,
        half_length: args.half_length,
        nx: args.nx,
        ny: args.ny,
        dt: args.dt,
        t_end: args.t_end,
        reaction: match args.reaction {
            ReactionArg::Logistic => Reaction::Logistic,
            ReactionArg::Zero => Reaction::Zero,
        },
        level: args.level,
        init: InitialData::Bump { amplitude: 1.0, half_width: 5.0 },
        output_dt: args.output_dt,
    };
    if params.dim != 1 {
        return Err(CliError::Usage("the simulator only covers N = 1".into()));
    }
    cfg.validate()?;
    let trace = simulate::run(&cfg)?;

    println!("t,front_x,mass,v_center,u_center");
    for k in 0..trace.times.len() {
        println!(
            "{},{},{},{},{}",
            num(trace.times[k]),
            opt(trace.front_x[k]),
            num(trace.mass[k]),
            num(trace.v_center[k]),
            num(trace.u_center[k])
        );
    }
    let m0 = trace.mass[0];
    let drift = (trace.mass.last().copied().unwrap_or(m0) - m0) / m0;
    eprintln!("mass drift {:.3e}%", 100.0 * drift);
    match trace.speed_fit {
        Some(fit) => {
            let c = solve_cstar(&params)?.c_star;
            eprintln!(
                "speed_fit {fit:.6} over t in [{}, {}], c* {c:.6}, deviation {:+.3}%",
                trace.fit_window.0,
                trace.fit_window.1,
                100.0 * (fit - c) / c
            );
        }
        None => eprintln!("no front at level {}", cfg.level),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    let out = match cli.command {
        Command::Speed { model, shape } => cmd_speed(model, shape),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Limits { model, shape } => cmd_limits(model, shape),
        Command::Curves(a) => cmd_curves(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match out {
        Ok(code) => code,
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Runtime(_)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
