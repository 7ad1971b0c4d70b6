//! `mpelab` — command-line front end for the multiplicative Poisson equation
//! toolkit.
//!
//! Every subcommand reads kernels and rewards from JSON or CSV files, emits a
//! JSON report (CSV where noted) to stdout or `--out`, and exits 0 on
//! success and 1 on any I/O or validation error. `solve` additionally maps
//! its verdict to the exit code: 0 solved, 2 diverged, 3 inconclusive.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpelab::*;
use mpelab_cli::verify;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::result::Result;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Parser)]
#[command(
    name = "mpelab",
    version,
    about = "Decide, solve, and stress-test the multiplicative Poisson equation \
             w = g - lambda + mu_x(w) on finite Markov chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report mixing coefficients, minorization constants, and strong mixing
    /// ratios for step counts up to a horizon.
    Mixing {
        /// Kernel file (.json matrix or headerless .csv).
        #[arg(long)]
        kernel: PathBuf,
        /// Largest step count to profile.
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Iterate the multiplicative operator until it converges, diverges, or
    /// the iteration budget runs out.
    Solve {
        /// Kernel file (.json matrix or headerless .csv).
        #[arg(long)]
        kernel: PathBuf,
        /// Reward file (.json values or one-per-line .csv).
        #[arg(long)]
        reward: PathBuf,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        output: Output,
    },
    /// Solve the additive (risk-neutral) Poisson equation by direct linear
    /// algebra.
    Ape {
        /// Kernel file (.json matrix or headerless .csv).
        #[arg(long)]
        kernel: PathBuf,
        /// Reward file (.json values or one-per-line .csv).
        #[arg(long)]
        reward: PathBuf,
        /// Normalize the solution to vanish at this 0-based state (must lie
        /// in the invariant support).
        #[arg(long)]
        anchor: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Finite-horizon entropic averages T^n 0(start) / n for n up to a
    /// horizon, as JSON or plot-ready CSV.
    Average {
        /// Kernel file (.json matrix or headerless .csv).
        #[arg(long)]
        kernel: PathBuf,
        /// Reward file (.json values or one-per-line .csv).
        #[arg(long)]
        reward: PathBuf,
        /// 0-based start state.
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Largest horizon n.
        #[arg(long, default_value_t = 50)]
        horizon: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether every reward on this kernel admits a bounded solution,
    /// producing an explicit divergence witness when one does not.
    Classify {
        /// Kernel file (.json matrix or headerless .csv).
        #[arg(long)]
        kernel: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Test whether first entry into a state set happens at a geometric rate
    /// from every state outside it.
    EscapeTest {
        /// Kernel file (.json matrix or headerless .csv).
        #[arg(long)]
        kernel: PathBuf,
        /// Comma-separated 0-based state indices of the target set.
        #[arg(long)]
        support: String,
        /// Comma-separated rates in (0, 1) to test.
        #[arg(long, default_value = "0.9,0.5,0.1")]
        alphas: String,
        /// Largest horizon tried per rate.
        #[arg(long, default_value_t = 64)]
        horizon: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Sample reward paths; report the entropic estimate with bootstrap
    /// error bars (JSON) or the raw per-path reward sums (CSV).
    Simulate {
        /// Kernel file (.json matrix or headerless .csv).
        #[arg(long)]
        kernel: PathBuf,
        /// Reward file (.json values or one-per-line .csv).
        #[arg(long)]
        reward: PathBuf,
        /// Number of independent paths.
        #[arg(long, default_value_t = 1000)]
        paths: usize,
        /// Number of transitions per path.
        #[arg(long, default_value_t = 20)]
        horizon: usize,
        /// Master seed; every path gets its own substream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 0-based start state.
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the exact partial-sum laws of two rewards on one kernel for
    /// first-order stochastic dominance.
    Dominance {
        /// Kernel file (.json matrix or headerless .csv).
        #[arg(long)]
        kernel: PathBuf,
        /// First reward file.
        #[arg(long)]
        reward: PathBuf,
        /// Second reward file to compare against.
        #[arg(long)]
        other_reward: PathBuf,
        /// 0-based start state.
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Number of reward terms in the partial sum.
        #[arg(long, default_value_t = 10)]
        horizon: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Write a named example kernel and its companion reward to
    /// `<prefix>.kernel.json` and `<prefix>.reward.json`.
    Corpus {
        /// Family name: two-state, cyclic-three, shift, full-support-shift,
        /// recurrent-shift, branching, or local-geometric.
        name: String,
        /// Number of states (truncation size where applicable).
        #[arg(long)]
        n: Option<usize>,
        /// Stay probability for the two-state family.
        #[arg(long)]
        lambda: Option<f64>,
        /// Reward level; for two-state this is k in g = (0, ln k).
        #[arg(long)]
        level: Option<f64>,
        /// Output path prefix (defaults to the family name).
        #[arg(long)]
        out_prefix: Option<PathBuf>,
    },
    /// Run the built-in verification suite: one pass/fail line per
    /// criterion, exit 0 only if every criterion passes.
    VerifyPaper {
        /// Run only the criteria whose number or name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Also write the results as a JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; csv is available for `average` and `simulate`.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Output {
    fn require_json(&self, subcommand: &str) -> Result<(), String> {
        if self.format == Format::Csv {
            return Err(format!(
                "csv output is not available for `{subcommand}`; use --format json"
            ));
        }
        Ok(())
    }
}

#[derive(Args)]
struct Solver {
    /// Span tolerance for declaring convergence.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration budget before an inconclusive stop.
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Iterate span above which the run is declared divergent.
    #[arg(long, default_value_t = 1e4)]
    span_cap: f64,
    /// Normalize the solution to vanish at this 0-based state instead of at
    /// its minimum.
    #[arg(long)]
    anchor: Option<usize>,
}

impl Solver {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            span_cap: self.span_cap,
            anchor: self.anchor,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
    }
}

fn text_of(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn dispatch(command: Command) -> Result<i32, String> {
    match command {
        Command::Mixing {
            kernel,
            n_max,
            output,
        } => {
            output.require_json("mixing")?;
            let digest = digest_inputs(&[&kernel])?;
            let k = io::load_kernel(&kernel).map_err(text_of)?;
            let report = mixing_report(&k, n_max).map_err(text_of)?;
            emit_report(&output, "mixing", digest, report.to_json())?;
            Ok(0)
        }
        Command::Solve {
            kernel,
            reward,
            solver,
            output,
        } => {
            output.require_json("solve")?;
            let digest = digest_inputs(&[&kernel, &reward])?;
            let k = io::load_kernel(&kernel).map_err(text_of)?;
            let g = io::load_reward(&reward).map_err(text_of)?;
            let sol = solve_mpe(&k, g.values(), &solver.options()).map_err(text_of)?;
            let code = match sol.status {
                SolveStatus::Solved => 0,
                SolveStatus::Diverged => 2,
                SolveStatus::Inconclusive => 3,
            };
            emit_report(
                &output,
                "solve",
                digest,
                serde_json::to_value(&sol).map_err(text_of)?,
            )?;
            Ok(code)
        }
        Command::Ape {
            kernel,
            reward,
            anchor,
            output,
        } => {
            output.require_json("ape")?;
            let digest = digest_inputs(&[&kernel, &reward])?;
            let k = io::load_kernel(&kernel).map_err(text_of)?;
            let g = io::load_reward(&reward).map_err(text_of)?;
            let sol = solve_ape(&k, g.values(), anchor).map_err(text_of)?;
            emit_report(
                &output,
                "ape",
                digest,
                serde_json::to_value(&sol).map_err(text_of)?,
            )?;
            Ok(0)
        }
        Command::Average {
            kernel,
            reward,
            start,
            horizon,
            output,
        } => {
            let digest = digest_inputs(&[&kernel, &reward])?;
            let k = io::load_kernel(&kernel).map_err(text_of)?;
            let g = io::load_reward(&reward).map_err(text_of)?;
            let trace = average_trace(&k, g.values(), start, horizon).map_err(text_of)?;
            match output.format {
                Format::Json => emit_report(
                    &output,
                    "average",
                    digest,
                    serde_json::to_value(&trace).map_err(text_of)?,
                )?,
                Format::Csv => {
                    let mut text = String::from("n,value\n");
                    for (i, v) in trace.values.iter().enumerate() {
                        text.push_str(&format!("{},{v}\n", i + 1));
                    }
                    write_text(output.out.as_deref(), &text)?;
                }
            }
            Ok(0)
        }
        Command::Classify { kernel, output } => {
            output.require_json("classify")?;
            let digest = digest_inputs(&[&kernel])?;
            let k = io::load_kernel(&kernel).map_err(text_of)?;
            let verdict = finite_existence_classifier(&k).map_err(text_of)?;
            emit_report(
                &output,
                "classify",
                digest,
                serde_json::to_value(&verdict).map_err(text_of)?,
            )?;
            Ok(0)
        }
        Command::EscapeTest {
            kernel,
            support,
            alphas,
            horizon,
            output,
        } => {
            output.require_json("escape-test")?;
            let digest = digest_inputs(&[&kernel])?;
            let k = io::load_kernel(&kernel).map_err(text_of)?;
            let support: Vec<usize> = parse_list(&support, "support")?;
            let alphas: Vec<f64> = parse_list(&alphas, "alphas")?;
            let report =
                escape_geometric_test(&k, &support, &alphas, horizon).map_err(text_of)?;
            emit_report(
                &output,
                "escape-test",
                digest,
                serde_json::to_value(&report).map_err(text_of)?,
            )?;
            Ok(0)
        }
        Command::Simulate {
            kernel,
            reward,
            paths,
            horizon,
            seed,
            start,
            output,
        } => {
            let digest = digest_inputs(&[&kernel, &reward])?;
            let k = io::load_kernel(&kernel).map_err(text_of)?;
            let g = io::load_reward(&reward).map_err(text_of)?;
            match output.format {
                Format::Json => {
                    let estimate =
                        mc_entropic_estimate(&k, g.values(), start, horizon, paths, seed)
                            .map_err(text_of)?;
                    emit_report(
                        &output,
                        "simulate",
                        digest,
                        serde_json::to_value(&estimate).map_err(text_of)?,
                    )?;
                }
                Format::Csv => {
                    let batch = sample_paths(&k, start, horizon, paths, seed).map_err(text_of)?;
                    let sums = batch.reward_sums(g.values()).map_err(text_of)?;
                    let mut text = String::from("path,reward_sum\n");
                    for (i, s) in sums.iter().enumerate() {
                        text.push_str(&format!("{i},{s}\n"));
                    }
                    write_text(output.out.as_deref(), &text)?;
                }
            }
            Ok(0)
        }
        Command::Dominance {
            kernel,
            reward,
            other_reward,
            start,
            horizon,
            output,
        } => {
            output.require_json("dominance")?;
            let digest = digest_inputs(&[&kernel, &reward, &other_reward])?;
            let k = io::load_kernel(&kernel).map_err(text_of)?;
            let g1 = io::load_reward(&reward).map_err(text_of)?;
            let g2 = io::load_reward(&other_reward).map_err(text_of)?;
            let a = partial_sum_distribution(&k, g1.values(), start, horizon).map_err(text_of)?;
            let b = partial_sum_distribution(&k, g2.values(), start, horizon).map_err(text_of)?;
            let verdict = stochastic_dominance(&a, &b);
            emit_report(
                &output,
                "dominance",
                digest,
                json!({
                    "verdict": verdict,
                    "law_reward": a,
                    "law_other_reward": b,
                }),
            )?;
            Ok(0)
        }
        Command::Corpus {
            name,
            n,
            lambda,
            level,
            out_prefix,
        } => {
            let prefix = out_prefix.unwrap_or_else(|| PathBuf::from(&name));
            let built = build_corpus(&name, n, lambda, level)?;
            let kernel_path = with_suffix(&prefix, ".kernel.json");
            let reward_path = with_suffix(&prefix, ".reward.json");
            io::save_kernel(&kernel_path, &built.kernel).map_err(text_of)?;
            io::save_reward(&reward_path, &built.reward).map_err(text_of)?;
            let digest = digest_inputs(&[])?;
            let results = json!({
                "name": name,
                "states": built.kernel.n(),
                "kernel_file": kernel_path.display().to_string(),
                "reward_file": reward_path.display().to_string(),
                "truncation": built.policy,
            });
            let output = Output {
                out: None,
                format: Format::Json,
            };
            emit_report(&output, "corpus", digest, results)?;
            Ok(0)
        }
        Command::VerifyPaper { filter, out } => {
            let results = verify::run(filter.as_deref());
            if results.is_empty() {
                return Err(format!(
                    "no criterion matches filter {:?}",
                    filter.unwrap_or_default()
                ));
            }
            for r in &results {
                println!("{}", r.line());
            }
            let all_passed = results.iter().all(|r| r.passed);
            if let Some(path) = out {
                let envelope = json!({
                    "schema_version": 1,
                    "subcommand": "verify-paper",
                    "inputs_digest": digest_inputs(&[])?,
                    "timestamp_unix_ms": now_ms(),
                    "results": results,
                });
                let text = serde_json::to_string_pretty(&envelope).map_err(text_of)?;
                write_text(Some(&path), &(text + "\n"))?;
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

// ---------------------------------------------------------------------------
// Corpus construction.
// ---------------------------------------------------------------------------

struct BuiltCorpus {
    kernel: FiniteKernel,
    reward: RewardFunction,
    policy: Option<corpus::TruncationPolicy>,
}

fn build_corpus(
    name: &str,
    n: Option<usize>,
    lambda: Option<f64>,
    level: Option<f64>,
) -> Result<BuiltCorpus, String> {
    let size = n.unwrap_or(64);
    match name {
        "two-state" => {
            let lam = lambda.unwrap_or(0.5);
            let k = level.unwrap_or(1.5);
            if !(k > 0.0) {
                return Err(format!("two-state level k = {k} must be positive"));
            }
            Ok(BuiltCorpus {
                kernel: corpus::two_state(lam).map_err(text_of)?,
                reward: RewardFunction::new(vec![0.0, k.ln()]).map_err(text_of)?,
                policy: None,
            })
        }
        "cyclic-three" => Ok(BuiltCorpus {
            kernel: corpus::cyclic_three(),
            reward: RewardFunction::constant(level.unwrap_or(0.0), 3).map_err(text_of)?,
            policy: None,
        }),
        "shift" => {
            let chain = corpus::shift_chain(size).map_err(text_of)?;
            Ok(BuiltCorpus {
                reward: RewardFunction::constant(level.unwrap_or(0.0), chain.kernel.n())
                    .map_err(text_of)?,
                policy: Some(chain.policy),
                kernel: chain.kernel,
            })
        }
        "full-support-shift" => {
            let chain = corpus::full_support_shift(size).map_err(text_of)?;
            let high = level.unwrap_or(2.0 * (2.0f64.ln() + 0.5));
            Ok(BuiltCorpus {
                reward: corpus::block_reward(chain.kernel.n(), high).map_err(text_of)?,
                policy: Some(chain.policy),
                kernel: chain.kernel,
            })
        }
        "recurrent-shift" => {
            let chain = corpus::recurrent_shift(size).map_err(text_of)?;
            Ok(BuiltCorpus {
                reward: corpus::period_two_reward(chain.kernel.n(), level.unwrap_or(1.0))
                    .map_err(text_of)?,
                policy: Some(chain.policy),
                kernel: chain.kernel,
            })
        }
        "branching" => {
            let bc = corpus::branching_chain(size).map_err(text_of)?;
            Ok(BuiltCorpus {
                reward: corpus::branching_reward(&bc, level.unwrap_or(1.0)).map_err(text_of)?,
                policy: Some(bc.chain.policy.clone()),
                kernel: bc.chain.kernel,
            })
        }
        "local-geometric" => {
            let chain = corpus::local_geometric(size, None).map_err(text_of)?;
            Ok(BuiltCorpus {
                reward: RewardFunction::constant(level.unwrap_or(0.0), chain.kernel.n())
                    .map_err(text_of)?,
                policy: Some(chain.policy),
                kernel: chain.kernel,
            })
        }
        other => Err(format!(
            "unknown corpus family {other:?}; available: two-state, cyclic-three, shift, \
             full-support-shift, recurrent-shift, branching, local-geometric"
        )),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{suffix}", prefix.display()))
}

// ---------------------------------------------------------------------------
// Report plumbing.
// ---------------------------------------------------------------------------

/// SHA-256 over the raw command-line arguments and the bytes of every input
/// file, so reruns of the same config on the same inputs digest identically.
fn digest_inputs(paths: &[&Path]) -> Result<String, String> {
    let mut hasher = Sha256::new();
    for arg in std::env::args().skip(1) {
        hasher.update(arg.as_bytes());
        hasher.update([0x1f]);
    }
    for path in paths {
        let bytes = std::fs::read(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        hasher.update(&bytes);
        hasher.update([0x1e]);
    }
    Ok(format!("{:x}", hasher.finalize()))
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn emit_report(
    output: &Output,
    subcommand: &str,
    digest: String,
    results: serde_json::Value,
) -> Result<(), String> {
    let envelope = json!({
        "schema_version": 1,
        "subcommand": subcommand,
        "inputs_digest": digest,
        "timestamp_unix_ms": now_ms(),
        "results": results,
    });
    let text = serde_json::to_string_pretty(&envelope).map_err(text_of)?;
    write_text(output.out.as_deref(), &(text + "\n"))
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    let parsed: Result<Vec<T>, String> = text
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| format!("cannot parse {what} entry {s:?}: {e}"))
        })
        .collect();
    let list = parsed?;
    if list.is_empty() {
        return Err(format!("{what} must contain at least one entry"));
    }
    Ok(list)
}
