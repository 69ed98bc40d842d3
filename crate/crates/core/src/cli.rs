//! Command implementations behind the `fls` binary.
//!
//! Every CSV ends with a `# config-hash=<sha256> version=<version>` line. Stochastic commands
//! derive one random stream per sample or trajectory from `--seed`, so the bytes written do not
//! depend on `--threads`.

use crate::bounds::{choose_dt, error_bound, runtime_estimate_for};
use crate::error::{FlsError, Result};
use crate::gates::{
    fig4b, leakage_nonhermitian, log_grid, read_feshbach_table, simulate_cz, sweep_hardness_diagram, CzScheme,
    GateSpec, LeakageModel,
};
use crate::gaussian::{propagate, reduce_linear};
use crate::model::{Distribution, ExperimentConfig, FockConfiguration, Model};
use crate::oracle::{exact_distribution, tvd};
use crate::rng::{trajectory_rng, with_threads};
use crate::sampler::OutcomeDistributionHandle;
use crate::unraveling::{average_distribution, run_trajectories, TrajectoryPlan};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Largest register for which `simulate` averages exact per-trajectory distributions.
const EXACT_AVERAGE_MAX_MODES: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "fls", version, about = "Open free-fermion dynamics: sampling, trajectories, oracle, gates")]
pub struct Cli {
    /// Worker threads; falls back to FLS_THREADS, then to all cores.
    #[arg(long, global = true, env = "FLS_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Samples outcomes of a purely unitary circuit.
    Sample {
        #[command(flatten)]
        io: ConfigArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, alias = "trajectories", default_value_t = 1000)]
        samples: usize,
        /// Writes the exact distribution instead of samples.
        #[arg(long)]
        enumerate: bool,
        /// Also writes the Majorana rotation `R` as CSV to this path.
        #[arg(long)]
        dump_rotation: Option<PathBuf>,
    },
    /// Trajectory-averaged outcome distribution.
    Simulate {
        #[command(flatten)]
        io: ConfigArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        trajectories: usize,
        /// `auto` or a step size.
        #[arg(long, default_value = "auto")]
        dt: String,
        /// Target error used by `--dt auto`.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Exact distribution from dense Lindblad evolution.
    Oracle {
        #[command(flatten)]
        io: ConfigArgs,
    },
    /// Total variation distance between two distribution CSVs.
    Compare { a: PathBuf, b: PathBuf },
    /// Timestep, error bound and runtime estimate as JSON.
    Bound {
        #[command(flatten)]
        io: ConfigArgs,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        trajectories: usize,
    },
    /// Dense simulation of one CZ gate, reported as JSON.
    GateDemo {
        #[arg(long, default_value = "zeno")]
        scheme: String,
        /// `Γ/J`.
        #[arg(long)]
        gamma_ratio: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_prime: f64,
        #[arg(long, default_value_t = 0.0)]
        zeta: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hardness diagram over the gain/loss ratio.
    Sweep {
        #[arg(long, default_value_t = 0.01)]
        p0: f64,
        #[arg(long, default_value_t = 1e-6)]
        min_ratio: f64,
        #[arg(long, default_value_t = 1e6)]
        max_ratio: f64,
        #[arg(long, default_value_t = 121)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimized gate error for a table of `field,gamma,zeta` rows.
    Fig4b {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 1e-2)]
        gamma_prime: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn exit_code(e: &FlsError) -> i32 {
    match e {
        FlsError::Schema(_) => 2,
        FlsError::DimensionTooLarge(_) => 3,
        _ => 1,
    }
}

/// Parses `args` (program name first) and runs the command; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Loaded {
    config: ExperimentConfig,
    model: Model,
    initial: FockConfiguration,
    hash: String,
}

fn load(path: &Path) -> Result<Loaded> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| FlsError::Schema(format!("{}: {e}", path.display())))?;
    let config = ExperimentConfig::from_json_str(&text).map_err(|e| match e {
        FlsError::Schema(m) => FlsError::Schema(format!("{}: {m}", path.display())),
        other => other,
    })?;
    let model = config.model()?;
    let initial = config.initial_config()?;
    Ok(Loaded { config, model, initial, hash: content_hash(&bytes) })
}

fn seed_of(flag: Option<u64>, config: &ExperimentConfig) -> Result<u64> {
    flag.or(config.seed)
        .ok_or_else(|| FlsError::Schema("stochastic command needs --seed or a \"seed\" field".into()))
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn trailer(hash: &str) -> String {
    format!("# config-hash={hash} version={}\n", version())
}

pub fn distribution_csv(d: &Distribution, stderr: Option<&[f64]>, hash: &str) -> String {
    let mut s = String::from(if stderr.is_some() { "bitstring,probability,stderr\n" } else { "bitstring,probability\n" });
    for (i, (cfg, p)) in d.iter().enumerate() {
        match stderr {
            Some(e) => writeln!(s, "{cfg},{p:.17e},{:.17e}", e[i]),
            None => writeln!(s, "{cfg},{p:.17e}"),
        }
        .expect("write to string");
    }
    s.push_str(&trailer(hash));
    s
}

/// Reads a `bitstring,probability[,…]` CSV with a header row; `#` lines are skipped.
pub fn read_distribution_csv(text: &str) -> Result<Distribution> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).flexible(true).from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| FlsError::Schema(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = || FlsError::Schema(format!("line {line}: expected bitstring,probability"));
        let cfg = FockConfiguration::parse(record.get(0).ok_or_else(bad)?).map_err(|_| bad())?;
        let p: f64 = record.get(1).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        entries.push((cfg, p, line));
    }
    let modes = entries.first().map(|e| e.0.len()).ok_or_else(|| FlsError::Schema("no distribution rows".into()))?;
    let mut d = Distribution::zeros(modes);
    for (cfg, p, line) in entries {
        if cfg.len() != modes {
            return Err(FlsError::Schema(format!("line {line}: bitstring length {} != {modes}", cfg.len())));
        }
        d.probs[cfg.index()] += p;
    }
    Ok(d)
}

fn rotation_csv(r: &crate::linalg::RMat, hash: &str) -> String {
    let n = r.ncols();
    let mut s = (0..n).map(|j| format!("r{j}")).collect::<Vec<_>>().join(",");
    s.push('\n');
    for i in 0..r.nrows() {
        let row: Vec<String> = (0..n).map(|j| format!("{:.17e}", r[(i, j)])).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s.push_str(&trailer(hash));
    s
}

fn unitary_handle(l: &Loaded) -> Result<(OutcomeDistributionHandle, crate::linalg::RMat)> {
    if !l.model.lindblad.is_empty() {
        return Err(FlsError::InvalidArgument("sample needs a config without Lindblad terms; use simulate".into()));
    }
    let t = l.config.t_final;
    let h = OutcomeDistributionHandle::unitary(&l.model.hamiltonian, &l.initial, t)?;
    let r = propagate(&reduce_linear(&l.model.hamiltonian), 0.0, t, None)?.r;
    Ok((h, r))
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let threads = cli.threads;
    match &cli.command {
        Command::Sample { io, seed, samples, enumerate, dump_rotation } => {
            let l = load(&io.config)?;
            let (handle, r) = unitary_handle(&l)?;
            if let Some(p) = dump_rotation {
                std::fs::write(p, rotation_csv(&r, &l.hash))?;
            }
            let text = if *enumerate {
                distribution_csv(&handle.enumerate_distribution()?, None, &l.hash)
            } else {
                let seed = seed_of(*seed, &l.config)?;
                let draws: Vec<FockConfiguration> = with_threads(threads, || {
                    (0..*samples)
                        .into_par_iter()
                        .map(|i| handle.sample(&mut trajectory_rng(seed, i as u64)))
                        .collect()
                });
                let mut s = String::from("bitstring\n");
                for d in draws {
                    writeln!(s, "{d}").expect("write to string");
                }
                s.push_str(&trailer(&l.hash));
                s
            };
            emit(io.out.as_deref(), stdout, &text)
        }
        Command::Simulate { io, seed, trajectories, dt, epsilon } => {
            let l = load(&io.config)?;
            let seed = seed_of(*seed, &l.config)?;
            let t = l.config.t_final;
            let dt = match dt.as_str() {
                "auto" => {
                    let target = epsilon.or(l.config.target_epsilon).unwrap_or(1e-3);
                    choose_dt(&l.model, t, target)?
                }
                v => v.parse::<f64>().map_err(|_| FlsError::InvalidArgument(format!("--dt {v}")))?,
            };
            let plan = TrajectoryPlan::new(&l.model, t, dt, seed, *trajectories)?;
            let text = if l.model.modes() <= EXACT_AVERAGE_MAX_MODES {
                let avg = average_distribution(&l.model, &plan, &l.initial, threads)?;
                distribution_csv(&avg.mean, Some(&avg.stderr), &l.hash)
            } else {
                let res = run_trajectories(&l.model, &plan, &l.initial, threads)?;
                distribution_csv(&res.distribution, Some(&res.stderr), &l.hash)
            };
            emit(io.out.as_deref(), stdout, &text)
        }
        Command::Oracle { io } => {
            let l = load(&io.config)?;
            let d = exact_distribution(&l.model, &l.initial, l.config.t_final)?;
            emit(io.out.as_deref(), stdout, &distribution_csv(&d, None, &l.hash))
        }
        Command::Compare { a, b } => {
            let p = read_distribution_csv(&std::fs::read_to_string(a)?)?;
            let q = read_distribution_csv(&std::fs::read_to_string(b)?)?;
            if p.modes != q.modes {
                return Err(FlsError::DimensionMismatch(format!("{} vs {} modes", p.modes, q.modes)));
            }
            writeln!(stdout, "{}", tvd(&p, &q))?;
            Ok(())
        }
        Command::Bound { io, t, epsilon, trajectories } => {
            let l = load(&io.config)?;
            let t = t.unwrap_or(l.config.t_final);
            let target = epsilon
                .or(l.config.target_epsilon)
                .ok_or_else(|| FlsError::Schema("bound needs --epsilon or \"target_epsilon\"".into()))?;
            let dt = choose_dt(&l.model, t, target)?;
            let report = json!({
                "class": l.model.class_tag().to_string(),
                "t": t,
                "target_epsilon": target,
                "dt": dt,
                "steps": (t / dt).round() as u64,
                "epsilon_bound": error_bound(&l.model, t, dt)?,
                "runtime_estimate": runtime_estimate_for(&l.model, t, dt, *trajectories)?,
                "trajectories": trajectories,
                "config_hash": l.hash,
                "version": version(),
            });
            emit(io.out.as_deref(), stdout, &format!("{}\n", serde_json::to_string_pretty(&report).expect("json")))
        }
        Command::GateDemo { scheme, gamma_ratio, gamma_prime, zeta, epsilon0, out } => {
            let which = CzScheme::parse(scheme)
                .ok_or_else(|| FlsError::InvalidArgument(format!("scheme {scheme}: expected zeno, atom1 or atom2")))?;
            let spec = GateSpec {
                j: 1.0,
                gamma: *gamma_ratio,
                gamma_prime: *gamma_prime,
                zeta: *zeta,
                epsilon0: *epsilon0,
                duration: None,
            }
            .validated()?;
            let r = simulate_cz(&spec, which)?;
            let model = if which == CzScheme::Zeno { LeakageModel::TwoLevel } else { LeakageModel::ColdAtom };
            let report = json!({
                "scheme": which.name(),
                "gamma_ratio": gamma_ratio,
                "gamma_prime": gamma_prime,
                "zeta": zeta,
                "epsilon0": epsilon0,
                "gate_time": spec.gate_time(),
                "leaked": r.leaked,
                "leakage": r.leakage,
                "leakage_nonhermitian": leakage_nonhermitian(&spec, model),
                "phase_11": r.phase_11,
                "process_fidelity": r.process_fidelity,
                "version": version(),
            });
            emit(out.as_deref(), stdout, &format!("{}\n", serde_json::to_string_pretty(&report).expect("json")))
        }
        Command::Sweep { p0, min_ratio, max_ratio, points, out } => {
            let grid = log_grid(*min_ratio, *max_ratio, *points);
            let pts = sweep_hardness_diagram(&grid, *p0)?;
            let mut s = String::from("ratio,epsilon,label\n");
            for p in pts {
                writeln!(s, "{:.17e},{:.17e},{}", p.ratio, p.epsilon, p.regime).expect("write to string");
            }
            let params = format!("p0={p0} min={min_ratio} max={max_ratio} points={points}");
            s.push_str(&trailer(&content_hash(params.as_bytes())));
            emit(out.as_deref(), stdout, &s)
        }
        Command::Fig4b { table, gamma_prime, epsilon0, out } => {
            let bytes = std::fs::read(table)?;
            let text = String::from_utf8_lossy(&bytes);
            let rows = read_feshbach_table(&text).map_err(|e| match e {
                FlsError::Schema(m) => FlsError::Schema(format!("{}: {m}", table.display())),
                other => other,
            })?;
            let res = fig4b(&rows, *gamma_prime, *epsilon0)?;
            let mut s = String::from("field,gamma,zeta,t_opt,epsilon\n");
            for r in res {
                writeln!(s, "{},{},{},{:.17e},{:.17e}", r.field, r.gamma, r.zeta, r.t_opt, r.epsilon)
                    .expect("write to string");
            }
            let mut h = bytes.clone();
            h.extend_from_slice(format!("gamma_prime={gamma_prime} epsilon0={epsilon0}").as_bytes());
            s.push_str(&trailer(&content_hash(&h)));
            emit(out.as_deref(), stdout, &s)
        }
    }
}
