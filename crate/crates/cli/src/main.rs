use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankmetric::bounds::{bounds_json, bounds_rows, write_bounds_csv, BoundParams, BoundsRow};
use rankmetric::gabidulin::GabidulinCode;
use rankmetric::oracle::{decodable_census, ExhaustiveCodebook};
use rankmetric::sim::{self, TrialPlan};
use rankmetric::verify;

#[derive(Parser, Debug)]
#[command(name = "rankmetric", version, about = "Rank-metric code bounds, censuses, verification suites and simulations")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// Base seed for simulations.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Trial budget per simulation row, overriding plan values.
    #[arg(long, global = true)]
    max_trials: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Error-probability bounds over ranges of t and u.
    Bounds(BoundsArgs),
    /// Run an exhaustive verification suite.
    Verify {
        /// One of: els-lemmas, mrd-lemmas, bound-chain, identities.
        suite: String,
    },
    /// Monte Carlo estimate of the decoder error probability.
    Simulate(SimulateArgs),
    /// Exhaustive decodability census of a tiny code.
    Census {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Fixed dimension; otherwise k = n - 2t for each t.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    t_min: usize,
    #[arg(long)]
    t_max: Option<usize>,
    /// Defaults to n.
    #[arg(long)]
    u_min: Option<usize>,
    /// Defaults to n.
    #[arg(long)]
    u_max: Option<usize>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// fig1 or fig2.
    #[arg(long, conflicts_with_all = ["plan", "q"])]
    preset: Option<String>,
    /// JSON file holding one plan or an array of plans.
    #[arg(long, conflicts_with = "q")]
    plan: Option<PathBuf>,
    #[arg(long, requires_all = ["m", "n", "k", "u"])]
    q: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    u: Option<usize>,
    #[arg(long)]
    min_decoder_errors: Option<u64>,
    #[arg(long)]
    zero_message: bool,
    /// Replay manifest path; defaults to <out>.manifest.json when --out is set.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

type CliResult<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    if let Some(w) = cli.common.workers {
        if w == 0 {
            return Err("--workers must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    match cli.cmd {
        Cmd::Bounds(args) => cmd_bounds(&cli.common, &args),
        Cmd::Verify { suite } => cmd_verify(&cli.common, &suite),
        Cmd::Simulate(args) => cmd_simulate(&cli.common, &args),
        Cmd::Census { q, m, n, k } => cmd_census(&cli.common, q, m, n, k),
    }
}

/// Writes to a temporary file next to `path` and renames it into place, so a
/// failed run never leaves a partial file.
fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| e.to_string())
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            tmp.write_all(bytes).map_err(|e| e.to_string())?;
            tmp.persist(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(())
        }
    }
}

fn json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s.into_bytes()
}

fn cmd_bounds(common: &Common, a: &BoundsArgs) -> CliResult<ExitCode> {
    let u_lo = a.u_min.unwrap_or(a.n);
    let u_hi = a.u_max.unwrap_or(a.n);
    let t_hi = a.t_max.unwrap_or(a.t_min);
    let mut rows: Vec<BoundsRow> = Vec::new();
    for t in a.t_min..=t_hi {
        let params = match a.k {
            Some(k) => {
                let p = BoundParams::new(a.q, a.m, a.n, k).map_err(|e| e.to_string())?;
                if p.t() != t {
                    continue;
                }
                p
            }
            None => BoundParams::with_correction_capability(a.q, a.m, a.n, t).map_err(|e| e.to_string())?,
        };
        rows.extend(bounds_rows(&params, u_lo..=u_hi).map_err(|e| e.to_string())?);
    }
    let bytes = match common.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_bounds_csv(&rows, &mut buf).map_err(|e| e.to_string())?;
            buf
        }
        Format::Json => json_bytes(&bounds_json(&rows)),
    };
    emit(common.out.as_deref(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(common: &Common, suite: &str) -> CliResult<ExitCode> {
    let report = verify::run_suite(suite).map_err(|e| e.to_string())?;
    let bytes = match common.format {
        Format::Csv => format!("{report}\n").into_bytes(),
        Format::Json => {
            let checks: Vec<serde_json::Value> = report
                .checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "name": c.name,
                        "instances": c.instances,
                        "passed": c.passed(),
                        "violations": c.violations,
                    })
                })
                .collect();
            json_bytes(&serde_json::json!({
                "suite": report.suite,
                "passed": report.passed(),
                "checks": checks,
            }))
        }
    };
    if !report.passed() {
        eprintln!("{report}");
        return Err(format!("suite {suite} has violations"));
    }
    emit(common.out.as_deref(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn load_plans(common: &Common, a: &SimulateArgs) -> CliResult<Vec<TrialPlan>> {
    let mut plans = if let Some(name) = &a.preset {
        sim::preset(name, common.seed).ok_or_else(|| format!("unknown preset {name:?} (available: fig1, fig2)"))?
    } else if let Some(path) = &a.plan {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let parsed = if value.is_array() {
            serde_json::from_value::<Vec<TrialPlan>>(value)
        } else {
            serde_json::from_value::<TrialPlan>(value).map(|p| vec![p])
        };
        parsed.map_err(|e| format!("{}: {e}", path.display()))?
    } else if let (Some(q), Some(m), Some(n), Some(k), Some(u)) = (a.q, a.m, a.n, a.k, a.u) {
        let mut p = TrialPlan::for_capability(q, n, 0, u, common.seed, 0);
        p.m = m;
        p.k = k;
        vec![p]
    } else {
        return Err("simulate needs --preset, --plan, or --q --m --n --k --u".into());
    };
    for p in &mut plans {
        if let Some(mt) = common.max_trials {
            p.max_trials = mt;
        }
        if let Some(me) = a.min_decoder_errors {
            p.min_decoder_errors = me;
        }
        if a.zero_message {
            p.zero_message = true;
        }
    }
    for (i, p) in plans.iter().enumerate() {
        p.validate().map_err(|e| format!("plan {i}: {e}"))?;
    }
    Ok(plans)
}

fn cmd_simulate(common: &Common, a: &SimulateArgs) -> CliResult<ExitCode> {
    let plans = load_plans(common, a)?;
    let rows = sim::sweep(&plans, common.workers);
    for row in &rows {
        let p = &row.plan;
        match &row.result {
            Ok(tally) => {
                let (_, hi) = tally.wilson_interval();
                let verdict = if hi < row.pe_eq8() { "below" } else { "not below" };
                eprintln!(
                    "t={} u={}: {} trials, {} decoder errors, PE_hat={}, upper={hi:.3e}, bound={:.3e} ({verdict}){}",
                    p.t(),
                    p.u,
                    tally.trials,
                    tally.decoder_errors,
                    tally.pe_hat().map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into()),
                    row.pe_eq8(),
                    if tally.censored { " censored" } else { "" },
                );
            }
            Err(e) => eprintln!("t={} u={}: {e}", p.t(), p.u),
        }
    }
    if let Some(err) = rows.iter().find_map(|r| r.result.as_ref().err()) {
        return Err(err.to_string());
    }
    let manifest = sim::manifest(&rows);
    let bytes = match common.format {
        Format::Csv => {
            let mut buf = Vec::new();
            sim::write_sweep_csv(&rows, &mut buf).map_err(|e| e.to_string())?;
            buf
        }
        Format::Json => json_bytes(&manifest),
    };
    let manifest_path = a.manifest.clone().or_else(|| {
        common.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    emit(common.out.as_deref(), &bytes)?;
    if let Some(path) = manifest_path {
        emit(Some(&path), &json_bytes(&manifest))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_census(common: &Common, q: u32, m: usize, n: usize, k: usize) -> CliResult<ExitCode> {
    let code = GabidulinCode::new(q, m, n, k).map_err(|e| e.to_string())?;
    let book = ExhaustiveCodebook::new(code).map_err(|e| e.to_string())?;
    let census = decodable_census(&book).map_err(|e| e.to_string())?;
    let bytes = match common.format {
        Format::Csv => {
            let mut buf = Vec::new();
            census.write_csv(&mut buf).map_err(|e| e.to_string())?;
            buf
        }
        Format::Json => json_bytes(&census.to_json()),
    };
    emit(common.out.as_deref(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}
