use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ltg::degrees::{degree_histogram, powerlaw_fit, DegreeHistogram};
use ltg::estimation::{cls_exact, cls_heuristic, DEFAULT_MAX_ITERS, DEFAULT_RESTARTS};
use ltg::experiments::{run_experiment, write_outputs, ExperimentConfig};
use ltg::generators::{Model, ModelSpec};
use ltg::spectral::{laplacian, misclustered_count, spectral_cluster_matrix};
use ltg::{CommunityAssignment, Graph64, Ordering, OrderingKind};

#[derive(Parser)]
#[command(name = "ltg", version, about = "Latent time-order graphs: simulate, estimate, cluster, analyse")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph from a JSON model spec and write it as an edge list.
    Generate {
        /// Model spec (JSON with a "model" tag).
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: usize,
        /// omega1, omega2, pa or random:<seed>.
        #[arg(long, default_value = "omega1")]
        ordering: OrderingKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Sidecar JSON with spec, seed, ordering and the planted truth.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Least-squares block fit of an edge list.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Enumerate every assignment (small graphs only).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write the fitted probability matrix as CSV.
        #[arg(long)]
        theta_out: Option<PathBuf>,
    },
    /// Spectral clustering of an edge list.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// `node group` lines (1-based) to score against.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Degree histogram and power-law fit, pooled over all inputs.
    Degree {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        fit: PathBuf,
    },
    /// Run a Monte Carlo study described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

fn read_graph(path: &Path) -> Result<Graph64> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Graph64::read_edge_list(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn rows(m: &ltg::Matrix64) -> Value {
    json!(m.to_rows())
}

fn generate(model: &Path, n: usize, ordering: OrderingKind, seed: u64, out: &Path, meta: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(model).with_context(|| format!("reading {}", model.display()))?;
    let spec: ModelSpec<f64> = serde_json::from_str(&text).context("parsing model spec")?;
    let resolved = spec.resolve(n)?;
    let order = Arc::new(Ordering::new(ordering, n)?);
    let graph = resolved.generate(n, &order, seed)?;
    let mut w = BufWriter::new(File::create(out).with_context(|| format!("creating {}", out.display()))?);
    graph.write_edge_list(&mut w)?;
    w.flush()?;
    if let Some(meta) = meta {
        let block = match &resolved {
            Model::Csbm { params, .. } => Some(json!(params.block_matrix())),
            other => other.constant_marginal().map(|p| json!([[p]])),
        };
        let value = json!({
            "spec": spec,
            "n": n,
            "seed": seed,
            "ordering": ordering.to_string(),
            "edges": graph.edge_count(),
            "assignment": graph.assignment().map(|z| z.labels_one_based()),
            "block_theta": block,
        });
        write_json(meta, &value)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn estimate(
    input: &Path,
    k: usize,
    exact: bool,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    out: &Path,
    theta_out: Option<&Path>,
) -> Result<()> {
    let a = read_graph(input)?.adjacency();
    let est = if exact {
        cls_exact(&a, k)?
    } else {
        cls_heuristic(&a, k, restarts, max_iters, seed)?
    };
    write_json(
        out,
        &json!({
            "k": k,
            "labels": est.z.labels_one_based(),
            "Q": rows(&est.q),
            "loss": est.loss,
        }),
    )?;
    if let Some(path) = theta_out {
        let mut w = BufWriter::new(File::create(path)?);
        for r in est.theta_hat.to_rows() {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn cluster(input: &Path, k: usize, truth: Option<&Path>, seed: u64, out: &Path) -> Result<()> {
    let a = read_graph(input)?.adjacency();
    let res = spectral_cluster_matrix(&a, k, seed)?;
    let misclustered = match truth {
        Some(path) => {
            let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let z = CommunityAssignment::read(BufReader::new(f))?;
            if z.n() != a.n() {
                bail!("truth file covers {} nodes, graph has {}", z.n(), a.n());
            }
            Some(misclustered_count(&res.assignment, &z)?)
        }
        None => None,
    };
    let degrees = laplacian(&a)?.degrees;
    let tau = degrees.iter().copied().fold(f64::INFINITY, f64::min) / a.n() as f64;
    write_json(
        out,
        &json!({
            "labels": res.assignment.labels_one_based(),
            "misclustered": misclustered,
            "eigenvalues": res.eigenvalues,
            "tau": tau,
        }),
    )
}

fn degree(inputs: &[PathBuf], csv: &Path, fit_path: &Path) -> Result<()> {
    let hists = inputs
        .iter()
        .map(|p| read_graph(p).map(|g| degree_histogram(&g)))
        .collect::<Result<Vec<_>>>()?;
    let pooled = DegreeHistogram::pool(&hists)?;
    let mut w = BufWriter::new(File::create(csv)?);
    writeln!(w, "k,count,freq")?;
    for k in 0..=pooled.max_degree().unwrap_or(0) {
        writeln!(w, "{k},{},{}", pooled.count(k), pooled.freq(k))?;
    }
    w.flush()?;
    let fit = powerlaw_fit(&pooled).context("power-law fit")?;
    write_json(
        fit_path,
        &json!({
            "gamma0": fit.gamma0,
            "gamma1": fit.gamma1,
            "k_lo": fit.k_lo,
            "k_hi": fit.k_hi,
            "points_used": fit.points_used,
        }),
    )
}

fn experiment(config: &Path, output_dir: Option<PathBuf>) -> Result<bool> {
    let cfg = ExperimentConfig::load(config).with_context(|| format!("loading {}", config.display()))?;
    let dir = output_dir.unwrap_or_else(|| cfg.output_dir.clone());
    let report = run_experiment(&cfg)?;
    write_outputs(&report, &dir)?;
    for cell in &report.cells {
        match &cell.error {
            Some(e) => eprintln!("{}: FAILED: {e}", cell.name),
            None => {
                let head = cell
                    .summaries
                    .first()
                    .map(|s| format!("{} mean {:.6} median {:.6} band [{:.6}, {:.6}]", s.metric, s.mean, s.median, s.lo, s.hi))
                    .unwrap_or_default();
                println!("{}: {head}", cell.name);
            }
        }
    }
    Ok(report.succeeded())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            model,
            n,
            ordering,
            seed,
            out,
            meta,
        } => generate(&model, n, ordering, seed, &out, meta.as_deref()).map(|_| true),
        Command::Estimate {
            input,
            k,
            exact,
            restarts,
            max_iters,
            seed,
            out,
            theta_out,
        } => estimate(&input, k, exact, restarts, max_iters, seed, &out, theta_out.as_deref()).map(|_| true),
        Command::Cluster {
            input,
            k,
            truth,
            seed,
            out,
        } => cluster(&input, k, truth.as_deref(), seed, &out).map(|_| true),
        Command::Degree { input, csv, fit } => degree(&input, &csv, &fit).map(|_| true),
        Command::Experiment { config, output_dir } => experiment(&config, output_dir),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
