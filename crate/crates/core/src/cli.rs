//! Command-line front end.
//!
//! Exit codes: 0 success or passing check, 1 failing check, 2 usage or
//! domain error, 3 refusal by a resource cap.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{expansion_coeffs, moment_expansion, r_recursive, ExpansionCoeffs};
use crate::error::{domain, ensure_cap, Error};
use crate::exact::{exact_distribution, exact_moments, MAX_MOMENT_ORDER};
use crate::limits::Limits;
use crate::rates::{collision_rate, jump_pmf, total_rate, total_rate_closed_form, BetaParams};
use crate::simulation::{
    sample_collisions, sample_compositions, CompositionBackend, SimConfig, DEFAULT_EPS,
};
use crate::special::h_fn;
use crate::stats::summarize;
use crate::verify::{self, CheckReport};

/// Relative `--output` paths are resolved against this directory when set.
pub const OUTPUT_DIR_ENV: &str = "BETACOAL_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "betacoal", version, about = "Collision counts of beta(2,b)-coalescents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(flatten)]
    pub caps: Caps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Resource caps; requests above a cap are refused with exit code 3.
#[derive(Debug, Args)]
pub struct Caps {
    #[arg(long, global = true, default_value_t = Limits::default().rates_n_max)]
    pub max_rates_n: u64,
    #[arg(long, global = true, default_value_t = Limits::default().moments_n_max)]
    pub max_moments_n: usize,
    #[arg(long, global = true, default_value_t = Limits::default().dist_n_max)]
    pub max_dist_n: usize,
    #[arg(long, global = true, default_value_t = Limits::default().lemma_a1_n_max)]
    pub max_lemma_a1_n: usize,
    #[arg(long, global = true, default_value_t = Limits::default().lemma_a2_n_max)]
    pub max_lemma_a2_n: usize,
    /// Largest replicates × n for Monte Carlo commands.
    #[arg(long, global = true, default_value_t = Limits::default().sim_work)]
    pub max_sim_work: f64,
    /// Largest subordinator time for the path composition backend.
    #[arg(long, global = true, default_value_t = Limits::default().horizon)]
    pub max_horizon: f64,
}

impl Caps {
    pub fn limits(&self) -> Limits {
        Limits {
            rates_n_max: self.max_rates_n,
            moments_n_max: self.max_moments_n,
            dist_n_max: self.max_dist_n,
            lemma_a1_n_max: self.max_lemma_a1_n,
            lemma_a2_n_max: self.max_lemma_a2_n,
            sim_work: self.max_sim_work,
            horizon: self.max_horizon,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Collision rates g_nk, total rate g_n and the jump law of I_n.
    Rates {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2.0)]
        a: f64,
    },
    /// Expansion constants for a given b.
    Constants {
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 4)]
        k_max: u32,
    },
    /// Exact moments of X_n and their two-term expansions.
    Moments {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Exact law of X_n.
    Dist {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        n: usize,
    },
    /// Monte Carlo sampling.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Numerical checks with pass/fail verdicts.
    #[command(subcommand)]
    Verify(Check),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Expansion,
    Both,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub reps: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Emit summary statistics instead of one row per replicate.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Debug, Subcommand)]
pub enum Simulate {
    /// Draws of the collision count X_n.
    Xn(SimArgs),
    /// Draws of the regenerative composition (parts, Y_n, Z_n).
    Composition {
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Path,
}

impl From<Backend> for CompositionBackend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Exact => CompositionBackend::Exact,
            Backend::Path => CompositionBackend::Path,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Scaled error of the Lévy-moment approximation along a dyadic grid.
    LemmaA1 {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 16)]
        n_min: u64,
        #[arg(long, default_value_t = 131_072)]
        n_max: u64,
        /// Accepted for uniformity; the check is deterministic.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Induction bound u_n <= 2 - n^(-b/2).
    LemmaA2 {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// X_n / log² n against 1/(2 m_1) by simulation.
    Slln {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 10_000, 100_000])]
        n_grid: Vec<u64>,
        #[arg(long, default_value_t = 1_000)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// KS distance of standardised X_n to the normal law by simulation.
    Clt {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 100_000])]
        n_grid: Vec<u64>,
        #[arg(long, default_value_t = 20_000)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Exact moments minus the two-term expansion.
    Expansion {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 20_000)]
        n_max: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Growth of the gamma-ratio approximation error.
    GammaRatio {
        #[arg(long, default_value_t = 0.5)]
        b: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [100u64, 1_000, 10_000])]
        n_grid: Vec<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Quadrature of the Lévy moments against r! ζ(r+1, b).
    Hurwitz {
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3])]
        r: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        b_grid: Vec<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("betacoal: {e}");
            exit_code(&e)
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("output: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Lib(Error::Resource { .. }) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn output_path(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

/// Formats a real with 17 significant digits, trailing zeros removed.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if (-5..17).contains(&exp) {
        let fixed = format!("{x:.prec$}", prec = (16 - exp) as usize);
        trim_fraction(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One output cell.
enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

fn opt_real(x: Option<f64>) -> Cell {
    x.map_or(Cell::Empty, Cell::Real)
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

enum Payload {
    Table(Table),
    Json(Value),
}

fn write_payload(payload: Payload, out: &mut dyn Write) -> CliResult<()> {
    match payload {
        Payload::Table(t) => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(&t.header)?;
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::render))?;
            }
            w.flush()?;
        }
        Payload::Json(v) => {
            serde_json::to_writer_pretty(&mut *out, &v)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let limits = cli.caps.limits();
    let (payload, code) = dispatch(cli, &limits)?;
    match &cli.output {
        Some(path) => {
            let mut file = BufWriter::new(File::create(output_path(path))?);
            write_payload(payload, &mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_payload(payload, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(code)
}

fn dispatch(cli: &Cli, limits: &Limits) -> CliResult<(Payload, i32)> {
    let fmt = |default| cli.format.unwrap_or(default);
    let payload = match &cli.command {
        Command::Rates { b, n, a } => rates(*a, *b, *n, fmt(Format::Json), limits)?,
        Command::Constants { b, k_max } => constants(*b, *k_max, fmt(Format::Json))?,
        Command::Moments { b, n_max, k_max, mode } => {
            moments(*b, *n_max, *k_max, *mode, fmt(Format::Csv), limits)?
        }
        Command::Dist { b, n } => dist(*b, *n, fmt(Format::Csv), limits)?,
        Command::Simulate(sim) => {
            let summary = match sim {
                Simulate::Xn(s) => s.summary,
                Simulate::Composition { sim, .. } => sim.summary,
            };
            let default = if summary { Format::Json } else { Format::Csv };
            simulate(sim, fmt(default), limits)?
        }
        Command::Verify(check) => {
            let report = run_check(check, limits)?;
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            return Ok((report_payload(&report, fmt(Format::Json))?, code));
        }
    };
    Ok((payload, EXIT_OK))
}

fn to_json<T: Serialize>(v: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(v)?)
}

fn rates(a: f64, b: f64, n: u64, format: Format, limits: &Limits) -> CliResult<Payload> {
    let params = BetaParams::new(a, b)?;
    if n < 2 {
        return Err(domain(format!("rates needs n >= 2, got {n}")).into());
    }
    ensure_cap("rates n", n as f64, limits.rates_n_max as f64)?;
    let g: Vec<f64> = (1..n)
        .map(|k| collision_rate(params, n, k))
        .collect::<Result<_, _>>()?;
    let total = total_rate(params, n)?;
    // the jump law and closed forms exist for a = 2 only
    let two = a == 2.0;
    let pmf = if two { Some(jump_pmf(n, b)?) } else { None };
    let closed = if two { Some(total_rate_closed_form(n, b)?) } else { None };
    Ok(match format {
        Format::Json => Payload::Json(json!({
            "a": a,
            "b": b,
            "n": n,
            "g_nk": g,
            "g_n": total,
            "g_n_closed_form": closed,
            "h": if two { Some(h_fn(n, b)?) } else { None },
            "pmf": pmf.as_ref().map(|p| &p.probs),
        })),
        Format::Csv => Payload::Table(Table {
            header: vec!["k", "g_nk", "jump_prob"],
            rows: (1..n)
                .map(|k| {
                    vec![
                        Cell::Int(k),
                        Cell::Real(g[k as usize - 1]),
                        opt_real(pmf.as_ref().map(|p| p.prob(k))),
                    ]
                })
                .collect(),
        }),
    })
}

fn constants(b: f64, k_max: u32, format: Format) -> CliResult<Payload> {
    let c = expansion_coeffs(k_max, b)?;
    let recursive = r_recursive(k_max, c.m1, c.m2, c.c);
    Ok(match format {
        Format::Json => {
            let mut v = to_json(&c)?;
            v["r_recursive"] = json!(recursive);
            v["variance_coefficient"] = json!(c.variance_coefficient());
            Payload::Json(v)
        }
        Format::Csv => {
            let mut rows = vec![
                vec![Cell::Text("m1".into()), Cell::Real(c.m1)],
                vec![Cell::Text("m2".into()), Cell::Real(c.m2)],
                vec![Cell::Text("c".into()), Cell::Real(c.c)],
                vec![Cell::Text("alpha".into()), Cell::Real(c.alpha)],
                vec![
                    Cell::Text("variance_coefficient".into()),
                    Cell::Real(c.variance_coefficient()),
                ],
            ];
            for (k, r) in c.r.iter().enumerate() {
                rows.push(vec![Cell::Text(format!("r{}", k + 1)), Cell::Real(*r)]);
            }
            Payload::Table(Table {
                header: vec!["name", "value"],
                rows,
            })
        }
    })
}

#[derive(Serialize)]
struct MomentRow {
    n: usize,
    k: usize,
    exact: Option<f64>,
    expansion: Option<f64>,
    residual: Option<f64>,
}

fn moments(
    b: f64,
    n_max: usize,
    k_max: usize,
    mode: Mode,
    format: Format,
    limits: &Limits,
) -> CliResult<Payload> {
    if n_max < 1 {
        return Err(domain("n_max must be at least 1").into());
    }
    if !(1..=MAX_MOMENT_ORDER).contains(&k_max) {
        return Err(domain(format!("k_max must be in 1..={MAX_MOMENT_ORDER}")).into());
    }
    let coeffs: Option<ExpansionCoeffs> = match mode {
        Mode::Exact => None,
        _ => Some(expansion_coeffs(k_max as u32, b)?),
    };
    let table = match mode {
        Mode::Expansion => {
            ensure_cap("moments n_max", n_max as f64, limits.moments_n_max as f64)?;
            None
        }
        _ => Some(exact_moments(n_max, k_max, b, limits)?),
    };
    let mut rows = Vec::with_capacity(n_max * k_max);
    for n in 1..=n_max {
        for k in 1..=k_max {
            let exact = table.as_ref().map(|t| t.moment(n, k));
            let expansion = match (&coeffs, n >= 2) {
                (Some(c), true) => Some(moment_expansion(n as u64, k as u32, c)?),
                _ => None,
            };
            let residual = exact.zip(expansion).map(|(e, x)| e - x);
            rows.push(MomentRow {
                n,
                k,
                exact,
                expansion,
                residual,
            });
        }
    }
    Ok(match format {
        Format::Json => Payload::Json(json!({ "b": b, "mode": format!("{mode:?}").to_lowercase(), "rows": rows })),
        Format::Csv => Payload::Table(Table {
            header: vec!["n", "k", "exact", "expansion", "residual"],
            rows: rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Int(r.n as u64),
                        Cell::Int(r.k as u64),
                        opt_real(r.exact),
                        opt_real(r.expansion),
                        opt_real(r.residual),
                    ]
                })
                .collect(),
        }),
    })
}

fn dist(b: f64, n: usize, format: Format, limits: &Limits) -> CliResult<Payload> {
    let pmf = exact_distribution(n, b, limits)?;
    Ok(match format {
        Format::Json => Payload::Json(to_json(&pmf)?),
        Format::Csv => Payload::Table(Table {
            header: vec!["x", "prob"],
            rows: pmf
                .probs
                .iter()
                .enumerate()
                .map(|(j, p)| vec![Cell::Int(j as u64), Cell::Real(*p)])
                .collect(),
        }),
    })
}

/// Count, moments and the CLT-standardised mean of `samples` at size n.
fn summary_payload(samples: &[f64], n: u64, b: f64, extra: Value, format: Format) -> CliResult<Payload> {
    let s = summarize(samples)?;
    let coeffs = expansion_coeffs(1, b)?;
    let standardized_mean = if n >= 2 {
        Some(crate::asymptotics::clt_normalize(s.mean, n, &coeffs)?)
    } else {
        None
    };
    let mut v = json!({
        "count": s.count,
        "mean": s.mean,
        "variance": s.variance,
        "skewness": s.skewness,
        "excess_kurtosis": s.excess_kurtosis,
        "standardized_mean": standardized_mean,
    });
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    Ok(match format {
        Format::Json => Payload::Json(v),
        Format::Csv => {
            let map = v.as_object().cloned().unwrap_or_default();
            let mut rows = Vec::new();
            for (key, value) in map {
                let cell = match value {
                    Value::Number(num) => Cell::Real(num.as_f64().unwrap_or(f64::NAN)),
                    Value::Null => Cell::Empty,
                    other => Cell::Text(other.to_string()),
                };
                rows.push(vec![Cell::Text(key), cell]);
            }
            Payload::Table(Table {
                header: vec!["name", "value"],
                rows,
            })
        }
    })
}

fn simulate(sim: &Simulate, format: Format, limits: &Limits) -> CliResult<Payload> {
    match sim {
        Simulate::Xn(s) => {
            let cfg = SimConfig::new(s.n, s.b, s.reps, s.seed).with_workers(s.workers);
            let xs = sample_collisions(&cfg, limits)?;
            if s.summary {
                let as_real: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
                let extra = json!({ "n": s.n, "b": s.b, "seed": s.seed });
                return summary_payload(&as_real, s.n, s.b, extra, format);
            }
            Ok(match format {
                Format::Json => Payload::Json(json!({ "n": s.n, "b": s.b, "seed": s.seed, "x": xs })),
                Format::Csv => Payload::Table(Table {
                    header: vec!["replicate", "x"],
                    rows: xs
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| vec![Cell::Int(i as u64), Cell::Int(x)])
                        .collect(),
                }),
            })
        }
        Simulate::Composition { sim: s, eps, backend } => {
            let cfg = SimConfig::new(s.n, s.b, s.reps, s.seed)
                .with_workers(s.workers)
                .with_eps(*eps);
            let comps = sample_compositions(&cfg, (*backend).into(), limits)?;
            if s.summary {
                let ys: Vec<f64> = comps.iter().map(|c| c.y as f64).collect();
                let mean_z = comps.iter().map(|c| c.z as f64).sum::<f64>() / comps.len() as f64;
                let extra = json!({
                    "n": s.n, "b": s.b, "seed": s.seed, "eps": eps,
                    "backend": CompositionBackend::from(*backend),
                    "mean_large_parts": mean_z,
                });
                return summary_payload(&ys, s.n, s.b, extra, format);
            }
            Ok(match format {
                Format::Json => Payload::Json(to_json(&comps)?),
                Format::Csv => Payload::Table(Table {
                    header: vec!["replicate", "y", "z", "parts"],
                    rows: comps
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            let parts: Vec<String> = c.parts.iter().map(u64::to_string).collect();
                            vec![
                                Cell::Int(i as u64),
                                Cell::Int(c.y),
                                Cell::Int(c.z),
                                Cell::Text(parts.join(";")),
                            ]
                        })
                        .collect(),
                }),
            })
        }
    }
}

fn run_check(check: &Check, limits: &Limits) -> CliResult<CheckReport> {
    let report = match check {
        Check::LemmaA1 {
            b, k, n_min, n_max, ..
        } => {
            if *n_min < 2 || n_min > n_max {
                return Err(domain("lemma-a1 needs 2 <= n-min <= n-max").into());
            }
            let lo = n_min.next_power_of_two().trailing_zeros();
            let hi = 63 - n_max.leading_zeros();
            verify::check_lemma_a1(*b, *k, &verify::dyadic_grid(lo, hi), limits)?
        }
        Check::LemmaA2 { b, k, n_max, .. } => verify::check_lemma_a2(*b, *k, *n_max, limits)?,
        Check::Slln {
            b,
            n_grid,
            reps,
            seed,
            workers,
        } => verify::check_slln(*b, n_grid, *reps, *seed, *workers, limits)?,
        Check::Clt {
            b,
            n_grid,
            reps,
            seed,
            workers,
        } => verify::check_clt(*b, n_grid, *reps, *seed, *workers, limits)?,
        Check::Expansion { b, k, n_max, .. } => verify::check_expansion(*b, *k, *n_max, limits)?,
        Check::GammaRatio { b, n_grid, .. } => verify::check_gamma_ratio(*b, n_grid)?,
        Check::Hurwitz { r, b_grid, .. } => verify::check_hurwitz(r, b_grid)?,
    };
    Ok(report)
}

fn report_payload(report: &CheckReport, format: Format) -> CliResult<Payload> {
    Ok(match format {
        Format::Json => Payload::Json(to_json(report)?),
        Format::Csv => Payload::Table(Table {
            header: vec!["check", "name", "value", "relation", "threshold", "pass"],
            rows: report
                .stats
                .iter()
                .map(|s| {
                    let relation = match s.relation {
                        verify::Relation::AtMost => "<=",
                        verify::Relation::AtLeast => ">=",
                    };
                    vec![
                        Cell::Text(report.check.clone()),
                        Cell::Text(s.name.clone()),
                        Cell::Real(s.value),
                        Cell::Text(relation.into()),
                        Cell::Real(s.threshold),
                        Cell::Text(s.pass.to_string()),
                    ]
                })
                .collect(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_real(1.6), "1.6000000000000001");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(2.0), "2");
        assert_eq!(format_real(-0.1), "-0.10000000000000001");
        assert_eq!(format_real(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_real(1e20), "1e20");
        assert_eq!(format_real(f64::NAN), "NaN");
        for x in [std::f64::consts::PI, 1.0 / 3.0, 123456.789, 6.02e23, 1e-300] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn grammar_parses() {
        Cli::try_parse_from(["betacoal", "rates", "--b", "1", "--n", "3"]).unwrap();
        Cli::try_parse_from(["betacoal", "simulate", "xn", "--b", "1", "--n", "3", "--reps", "4", "--seed", "1"]).unwrap();
        Cli::try_parse_from(["betacoal", "verify", "slln", "--n-grid", "10,100", "--seed", "3"]).unwrap();
        // seed is mandatory for stochastic commands, unknown flags are errors
        assert!(Cli::try_parse_from(["betacoal", "simulate", "xn", "--b", "1", "--n", "3", "--reps", "4"]).is_err());
        assert!(Cli::try_parse_from(["betacoal", "rates", "--b", "1", "--n", "3", "--bogus"]).is_err());
    }
}
