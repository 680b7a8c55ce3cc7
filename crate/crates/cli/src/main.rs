//! `weakval` — weak values of N-level observables on generalized Bloch
//! spheres, from scenario JSON files.
//!
//! Every command emits a report in which each geometric result carries its
//! direct-oracle residual; the process exits 0 when all residuals pass the
//! gate, 1 on a residual failure, and 2 on an input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use weakval::scenario::{self, Command, Report, RunOptions, Scenario};

#[derive(Parser)]
#[command(name = "weakval", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Geometric weak value of an observable, checked against the direct ratio.
    #[command(name = "weak-value")]
    WeakValue(CommonArgs),
    /// Variances, covariance, commutator averages, Heisenberg inequality.
    Moments(CommonArgs),
    /// Sweep the qubit family O_r = a(I + gamma r.sigma) over a gamma grid.
    #[command(name = "qubit-sweep")]
    QubitSweep(CommonArgs),
    /// Von Neumann pointer simulation and weak-value readout.
    Pointer(CommonArgs),
    /// Verify the SU(N) generator algebra and structure constants.
    #[command(name = "algebra-check")]
    AlgebraCheck(AlgebraArgs),
    /// S^7 embedding of qutrit states and the geodesic-circle sweep.
    Embed(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario JSON file.
    #[arg(long, value_name = "FILE")]
    scenario: Option<PathBuf>,
    /// Directory of scenario JSON files, processed independently.
    #[arg(long, value_name = "DIR", conflicts_with = "scenario")]
    batch: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for the on-disk structure-tensor cache.
    #[arg(long, value_name = "DIR")]
    tensor_cache: Option<PathBuf>,
    /// Seed echoed into the report (reports are deterministic given
    /// scenario and seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Override the oracle-residual gate.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct AlgebraArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Hilbert dimension to check (shortcut for a `{"n": N}` scenario).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (default_command, common, inline_n) = match &cli.command {
        CliCommand::WeakValue(c) => (Command::WeakValue, c, None),
        CliCommand::Moments(c) => (Command::Moments, c, None),
        CliCommand::QubitSweep(c) => (Command::QubitSweep, c, None),
        CliCommand::Pointer(c) => (Command::Pointer, c, None),
        CliCommand::AlgebraCheck(a) => (Command::AlgebraCheck, &a.common, a.n),
        CliCommand::Embed(c) => (Command::Embed, c, None),
    };

    match execute(default_command, common, inline_n) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": format!("{err:#}") })
            );
            ExitCode::from(2)
        }
    }
}

fn execute(default_command: Command, args: &CommonArgs, inline_n: Option<usize>) -> anyhow::Result<bool> {
    let options = RunOptions {
        tolerance: args.tolerance,
        tensor_cache: args.tensor_cache.clone(),
        seed: args.seed,
    };

    let jobs = collect_jobs(default_command, args, inline_n)?;
    let reports = run_jobs(&jobs, &options)?;

    let batch = args.batch.is_some();
    let mut all_passed = true;
    for report in &reports {
        all_passed &= report.passed;
        match args.format {
            Format::Json if batch => println!(
                "{}",
                serde_json::to_string(report).expect("report serializes")
            ),
            Format::Json => println!("{}", report.to_json()),
            Format::Csv => print!("{}", render_csv(report)),
        }
    }
    Ok(all_passed)
}

type Job = (Scenario, Command, Option<PathBuf>);

fn collect_jobs(
    default_command: Command,
    args: &CommonArgs,
    inline_n: Option<usize>,
) -> anyhow::Result<Vec<Job>> {
    if let Some(dir) = &args.batch {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .with_context(|| format!("reading batch directory {}", dir.display()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(anyhow!("no .json scenarios in {}", dir.display()));
        }
        paths
            .into_iter()
            .map(|p| load_job(&p, default_command))
            .collect()
    } else if let Some(path) = &args.scenario {
        Ok(vec![load_job(path, default_command)?])
    } else if let Some(n) = inline_n {
        let scenario = scenario::parse_scenario(&format!("{{\"n\": {n}}}"))?;
        Ok(vec![(scenario, default_command, None)])
    } else {
        Err(anyhow!("provide --scenario FILE, --batch DIR, or (for algebra-check) --n N"))
    }
}

fn load_job(path: &Path, default_command: Command) -> anyhow::Result<Job> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading scenario {}", path.display()))?;
    let scenario = scenario::parse_scenario(&text)
        .with_context(|| format!("parsing scenario {}", path.display()))?;
    let command = match &scenario.command {
        Some(name) => Command::from_str(name)
            .with_context(|| format!("scenario {}", path.display()))?,
        None => default_command,
    };
    Ok((scenario, command, Some(path.to_path_buf())))
}

fn run_jobs(jobs: &[Job], options: &RunOptions) -> anyhow::Result<Vec<Report>> {
    let results = weakval::par::map_slice(
        weakval::par::ExecMode::auto(),
        jobs,
        |(scenario, command, path)| {
            scenario::run(scenario, *command, options).map_err(|e| match path {
                Some(p) => anyhow!("{}: {e}", p.display()),
                None => anyhow!("{e}"),
            })
        },
    );
    results.into_iter().collect()
}

/// Flatten a report into CSV. Sweep commands emit their row tables; scalar
/// reports emit key,value lines.
fn render_csv(report: &Report) -> String {
    let mut out = String::new();
    match report.command.as_str() {
        "qubit-sweep" => {
            out.push_str("gamma,phi_ii_prime,phi_ri_prime,re_wv,im_wv,arg_wv\n");
            if let Some(rows) = report.results["rows"].as_array() {
                for row in rows {
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        row["gamma"],
                        row["phi_i_iprime"],
                        row["phi_r_iprime"],
                        row["re_wv"],
                        row["im_wv"],
                        row["arg_wv"]
                    ));
                }
            }
        }
        "pointer" => {
            out.push_str("g,mean_x,mean_p,postselect_prob,weak_regime\n");
            if let Some(rows) = report.results["outcomes"].as_array() {
                for row in rows {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        row["g"],
                        row["mean_x"],
                        row["mean_p"],
                        row["postselect_prob"],
                        row["weak_regime"]
                    ));
                }
            }
            out.push_str(&format!(
                "estimate,{},{}\n",
                report.results["estimate"][0], report.results["estimate"][1]
            ));
        }
        "embed" if report.results.get("sweep").is_some() => {
            out.push_str("s,e1,e2,e3,e4,e5,e6,e7,e8\n");
            if let Some(rows) = report.results["sweep"]["rows"].as_array() {
                for row in rows {
                    let e = row["embedding"].as_array().unwrap();
                    out.push_str(&format!(
                        "{},{}\n",
                        row["s"],
                        e.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ));
                }
            }
        }
        _ => {
            out.push_str("key,value\n");
            flatten_csv(&report.results, "", &mut out);
            out.push_str(&format!("passed,{}\n", report.passed));
        }
    }
    out
}

fn flatten_csv(value: &serde_json::Value, prefix: &str, out: &mut String) {
    match value {
        serde_json::Value::Object(map) => {
            for (key, inner) in map {
                let path = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten_csv(inner, &path, out);
            }
        }
        serde_json::Value::Array(items) if items.iter().all(|x| x.is_number()) => {
            let joined = items
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!("{prefix},{joined}\n"));
        }
        serde_json::Value::Array(_) => {}
        leaf => out.push_str(&format!("{prefix},{leaf}\n")),
    }
}
