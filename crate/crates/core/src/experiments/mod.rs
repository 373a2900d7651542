//! Configuration-driven Monte Carlo studies.
//!
//! A config names a study `kind`, a list of models, node counts and
//! orderings; every `(model, n, ordering)` combination is a cell, run with
//! `replications` independent graphs. Cell `c` uses seed
//! `derive_seed(seed, c)` and replication `r` inside it
//! `derive_seed(cell_seed, r)`, so results do not depend on thread count.
//!
//! Per-cell kinds and their CSV columns:
//!
//! | kind            | index column  | columns |
//! |-----------------|---------------|---------|
//! | `misclustering` | `replication` | `misclustered, misclustered_frac, max_group_size, isolated` |
//! | `degree`        | `replication` | `gamma0, gamma1, k_lo, k_hi, mean_degree, poisson_tv` |
//! | `mse`           | `replication` | `mse, loss` |
//! | `dependence`    | `lag`         | `delta_hat, se, delta_closed, undefined_cells` |
//! | `phase`         | `replication` | `connected, components, largest` |
//!
//! Missing values (a failed power-law fit, a closed form that does not
//! exist) are empty fields. Degree cells also write `<kind>_<cell>_hist.csv`
//! with columns `k, count, freq, lo, hi` (pooled counts and the 2.5%/97.5%
//! per-replication frequency bands).

mod svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degrees::{components, poisson_tv, powerlaw_fit, DegreeHistogram, PowerLawFit};
use crate::dependence::{delta_closed_form, delta_empirical};
use crate::error::{Error, Result};
use crate::estimation::{cls_heuristic, graphon_k_select, mse, DEFAULT_MAX_ITERS};
use crate::generators::{Model, ModelSpec};
use crate::graph::degrees_from_chain;
use crate::ordering::{pair_count, Ordering, OrderingKind};
use crate::rng::derive_seed;
use crate::spectral::spectral_cluster;

pub use svg::{histogram, LinePlot, Series};

/// Stream for the seed handed to k-means / the estimator inside a
/// replication.
const SOLVER_STREAM: u64 = 0x501E;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Misclustering,
    Degree,
    Mse,
    Dependence,
    Phase,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Misclustering => "misclustering",
            ExperimentKind::Degree => "degree",
            ExperimentKind::Mse => "mse",
            ExperimentKind::Dependence => "dependence",
            ExperimentKind::Phase => "phase",
        }
    }

    fn index_column(self) -> &'static str {
        match self {
            ExperimentKind::Dependence => "lag",
            _ => "replication",
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Misclustering => &["misclustered", "misclustered_frac", "max_group_size", "isolated"],
            ExperimentKind::Degree => &["gamma0", "gamma1", "k_lo", "k_hi", "mean_degree", "poisson_tv"],
            ExperimentKind::Mse => &["mse", "loss"],
            ExperimentKind::Dependence => &["delta_hat", "se", "delta_closed", "undefined_cells"],
            ExperimentKind::Phase => &["connected", "components", "largest"],
        }
    }
}

/// A model with a filename-safe name; the spec's fields sit beside `name`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedModel {
    pub name: String,
    #[serde(flatten)]
    pub spec: ModelSpec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub models: Vec<NamedModel>,
    pub n: Vec<usize>,
    #[serde(default = "default_orderings")]
    pub orderings: Vec<OrderingKind>,
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    /// Groups for clustering and estimation; defaults to the model's own
    /// group count (graphon models: the `n^{1/(1+α∧1)}` rule).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Dependence lags; default `[1, 2, 3]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lags: Option<Vec<usize>>,
    /// 1-based chain positions for dependence cells; default
    /// `{lag + 1, N/2, N}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<usize>>,
    /// Estimator restarts for `mse` cells; default 5.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
}

fn default_orderings() -> Vec<OrderingKind> {
    vec![OrderingKind::Omega1]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidParameter("replications must be at least 1".into()));
        }
        if self.kind == ExperimentKind::Dependence && self.replications < 100 {
            return Err(Error::InvalidParameter("dependence cells need at least 100 replications".into()));
        }
        if self.models.is_empty() {
            return Err(Error::Empty("models"));
        }
        if self.n.is_empty() {
            return Err(Error::Empty("n"));
        }
        if self.orderings.is_empty() {
            return Err(Error::Empty("orderings"));
        }
        if self.orderings.iter().any(|o| matches!(o, OrderingKind::Explicit)) {
            return Err(Error::InvalidParameter("explicit orderings cannot be used in experiments".into()));
        }
        if self.k == Some(0) || self.restarts == Some(0) {
            return Err(Error::InvalidParameter("k and restarts must be positive".into()));
        }
        if self.lags.as_ref().is_some_and(|l| l.is_empty() || l.contains(&0)) {
            return Err(Error::InvalidParameter("lags must be a non-empty list of positive integers".into()));
        }
        let mut names = std::collections::BTreeSet::new();
        for m in &self.models {
            let safe = !m.name.is_empty() && m.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
            if !safe {
                return Err(Error::InvalidParameter(format!(
                    "model name {:?} must be non-empty [A-Za-z0-9_-]",
                    m.name
                )));
            }
            if !names.insert(&m.name) {
                return Err(Error::InvalidParameter(format!("duplicate model name {:?}", m.name)));
            }
            for &n in &self.n {
                m.spec.resolve(n)?;
            }
        }
        Ok(())
    }

    /// Cells in run order: models, then `n`, then orderings.
    pub fn cells(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for m in &self.models {
            for &n in &self.n {
                for o in &self.orderings {
                    out.push(CellKey {
                        model: m.name.clone(),
                        n,
                        ordering: *o,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellKey {
    pub model: String,
    pub n: usize,
    pub ordering: OrderingKind,
}

impl CellKey {
    /// `<model>_<ordering>_n<n>`, with `:` in the ordering replaced by `-`.
    pub fn name(&self) -> String {
        format!("{}_{}_n{}", self.model, self.ordering.to_string().replace(':', "-"), self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub metric: String,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Pooled degree counts with per-degree frequency bands across
/// replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramTable {
    pub k: Vec<usize>,
    pub count: Vec<u64>,
    pub freq: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub name: String,
    pub key: CellKey,
    pub seed: u64,
    pub index_column: String,
    pub columns: Vec<String>,
    pub index: Vec<usize>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub summaries: Vec<Summary>,
    /// Cell-level scalars (pooled fits, fractions).
    pub stats: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<HistogramTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CellReport {
    pub fn summary(&self, metric: &str) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.metric == metric)
    }

    pub fn column(&self, metric: &str) -> Option<Vec<Option<f64>>> {
        let c = self.columns.iter().position(|m| m == metric)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub cells: Vec<CellReport>,
    pub failed_cells: usize,
}

impl ExperimentReport {
    pub fn cell(&self, model: &str, n: usize, ordering: &OrderingKind) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.key.model == model && c.key.n == n && &c.key.ordering == ordering)
    }

    pub fn succeeded(&self) -> bool {
        self.failed_cells == 0
    }
}

/// Type-1 empirical quantiles: the order statistic of rank `⌈q·R⌉`
/// (at least 1) for each of `q_lo`, `q_hi`.
pub fn quantile_bands(samples: &[f64], q_lo: f64, q_hi: f64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::Empty("samples"));
    }
    for q in [q_lo, q_hi] {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("quantile {q} outside [0, 1]")));
        }
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let r = s.len();
    let at = |q: f64| {
        // absorb representation error such as 0.025 * 1000 = 25.000000000000004
        let rank = (q * r as f64 - 1e-9).ceil().max(1.0) as usize;
        s[rank.min(r) - 1]
    };
    Ok((at(q_lo), at(q_hi)))
}

fn summarize(metric: &str, values: &[Option<f64>]) -> Option<Summary> {
    let v: Vec<f64> = values.iter().flatten().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    let mut s = v.clone();
    s.sort_by(f64::total_cmp);
    let m = s.len();
    let median = if m % 2 == 1 { s[m / 2] } else { 0.5 * (s[m / 2 - 1] + s[m / 2]) };
    let (lo, hi) = quantile_bands(&v, 0.025, 0.975).ok()?;
    Some(Summary {
        metric: metric.to_string(),
        count: m,
        mean: v.iter().sum::<f64>() / m as f64,
        median,
        lo,
        hi,
    })
}

/// Runs `f` on replications `0..r` in parallel and returns results in
/// replication order; the first failing replication (by index) wins.
fn replicate<R: Send>(r: usize, cell_seed: u64, f: impl Fn(u64) -> Result<R> + Sync) -> Result<Vec<R>> {
    let out: Vec<Result<R>> = (0..r)
        .into_par_iter()
        .map(|i| f(derive_seed(cell_seed, i as u64)))
        .collect();
    out.into_iter().collect()
}

fn default_k(model: &Model<f64>, n: usize) -> Result<usize> {
    Ok(match model {
        Model::Csbm { params, .. } => params.k,
        Model::Graphon(g) => graphon_k_select(n, g.alpha)?,
        _ => 1,
    })
}

struct CellOutput {
    index: Vec<usize>,
    rows: Vec<Vec<Option<f64>>>,
    stats: BTreeMap<String, f64>,
    histogram: Option<HistogramTable>,
}

fn plain(rows: Vec<Vec<Option<f64>>>) -> CellOutput {
    CellOutput {
        index: (0..rows.len()).collect(),
        rows,
        stats: BTreeMap::new(),
        histogram: None,
    }
}

fn run_cell(cfg: &ExperimentConfig, key: &CellKey, cell_seed: u64) -> Result<CellOutput> {
    let spec = &cfg
        .models
        .iter()
        .find(|m| m.name == key.model)
        .expect("cell model comes from the config")
        .spec;
    let n = key.n;
    let model = spec.resolve(n)?;
    let ordering = Arc::new(Ordering::new(key.ordering, n)?);
    let r = cfg.replications;
    match cfg.kind {
        ExperimentKind::Misclustering => {
            let k = match cfg.k {
                Some(k) => k,
                None => default_k(&model, n)?,
            };
            let rows = replicate(r, cell_seed, |seed| {
                let g = model.generate(n, &ordering, seed)?;
                let c = spectral_cluster(&g, k, derive_seed(seed, SOLVER_STREAM))?;
                let m = c.misclustered.ok_or_else(|| {
                    Error::InvalidParameter("misclustering needs a model with planted groups".into())
                })?;
                Ok(vec![
                    Some(m as f64),
                    Some(m as f64 / n as f64),
                    Some(c.max_group_size as f64),
                    Some(c.isolated.len() as f64),
                ])
            })?;
            Ok(plain(rows))
        }
        ExperimentKind::Mse => {
            let k = match cfg.k {
                Some(k) => k,
                None => default_k(&model, n)?,
            };
            let restarts = cfg.restarts.unwrap_or(5);
            let rows = replicate(r, cell_seed, |seed| {
                let g = model.generate(n, &ordering, seed)?;
                let theta = g.theta().ok_or(Error::Empty("true edge probabilities"))?;
                let est = cls_heuristic(&g.adjacency(), k, restarts, DEFAULT_MAX_ITERS, derive_seed(seed, SOLVER_STREAM))?;
                Ok(vec![Some(mse(&est.theta_hat, theta)?), Some(est.loss)])
            })?;
            Ok(plain(rows))
        }
        ExperimentKind::Phase => {
            let rows = replicate(r, cell_seed, |seed| {
                let g = model.generate(n, &ordering, seed)?;
                let c = components(&g);
                Ok(vec![
                    Some(if c.connected { 1.0 } else { 0.0 }),
                    Some(c.sizes.len() as f64),
                    Some(c.sizes[0] as f64),
                ])
            })?;
            let connected = rows.iter().filter(|row| row[0] == Some(1.0)).count();
            let mut out = plain(rows);
            out.stats.insert("connected_fraction".into(), connected as f64 / r as f64);
            Ok(out)
        }
        ExperimentKind::Degree => degree_cell(&model, &ordering, n, r, cell_seed),
        ExperimentKind::Dependence => {
            let lags = cfg.lags.clone().unwrap_or_else(|| vec![1, 2, 3]);
            let len = pair_count(n);
            let mut rows = Vec::new();
            for &lag in &lags {
                let positions = match &cfg.positions {
                    Some(p) => p.clone(),
                    None => {
                        let mut p = vec![lag + 1, (len / 2).max(lag + 1), len];
                        p.sort_unstable();
                        p.dedup();
                        p
                    }
                };
                let est = delta_empirical(&model, &ordering, lag, &positions, r, derive_seed(cell_seed, lag as u64))?;
                let closed = match &model {
                    Model::Mecltg(p) => delta_closed_form(p.p0, p.p1, lag).ok(),
                    Model::ErdosRenyi(_) => Some(0.0),
                    _ => None,
                };
                rows.push(vec![
                    Some(est.delta),
                    Some(est.se),
                    closed,
                    Some(est.undefined_cells as f64),
                ]);
            }
            Ok(CellOutput {
                index: lags,
                rows,
                stats: BTreeMap::new(),
                histogram: None,
            })
        }
    }
}

fn degree_cell(model: &Model<f64>, ordering: &Ordering, n: usize, r: usize, cell_seed: u64) -> Result<CellOutput> {
    let lambda_of = |h: &DegreeHistogram| match model.constant_marginal() {
        Some(p) => n as f64 * p,
        None => h.mean_degree(),
    };
    let per: Vec<(DegreeHistogram, Vec<Option<f64>>)> = replicate(r, cell_seed, |seed| {
        let chain = model.sample_chain(ordering, seed)?;
        let h = DegreeHistogram::from_degrees(n, &degrees_from_chain(&chain, ordering)?)?;
        let fit = powerlaw_fit(&h).ok();
        let row = vec![
            fit.as_ref().map(|f| f.gamma0),
            fit.as_ref().map(|f| f.gamma1),
            fit.as_ref().map(|f| f.k_lo as f64),
            fit.as_ref().map(|f| f.k_hi as f64),
            Some(h.mean_degree()),
            Some(poisson_tv(&h, lambda_of(&h))?),
        ];
        Ok((h, row))
    })?;
    let pooled = DegreeHistogram::pool(per.iter().map(|p| &p.0))?;
    let mut stats = BTreeMap::new();
    if let Ok(PowerLawFit {
        gamma0,
        gamma1,
        k_lo,
        k_hi,
        points_used,
    }) = powerlaw_fit(&pooled)
    {
        stats.insert("pooled_gamma0".into(), gamma0);
        stats.insert("pooled_gamma1".into(), gamma1);
        stats.insert("pooled_k_lo".into(), k_lo as f64);
        stats.insert("pooled_k_hi".into(), k_hi as f64);
        stats.insert("pooled_points_used".into(), points_used as f64);
    }
    stats.insert("pooled_poisson_tv".into(), poisson_tv(&pooled, lambda_of(&pooled))?);
    stats.insert("poisson_lambda".into(), lambda_of(&pooled));
    let fitted = per.iter().filter(|p| p.1[1].is_some()).count();
    stats.insert("fitted_fraction".into(), fitted as f64 / r as f64);

    let top = pooled.max_degree().unwrap_or(0);
    let mut table = HistogramTable {
        k: Vec::new(),
        count: Vec::new(),
        freq: Vec::new(),
        lo: Vec::new(),
        hi: Vec::new(),
    };
    for k in 0..=top {
        let f: Vec<f64> = per.iter().map(|p| p.0.freq(k)).collect();
        let (lo, hi) = quantile_bands(&f, 0.025, 0.975)?;
        table.k.push(k);
        table.count.push(pooled.count(k));
        table.freq.push(pooled.freq(k));
        table.lo.push(lo);
        table.hi.push(hi);
    }
    let rows = per.into_iter().map(|p| p.1).collect();
    let mut out = plain(rows);
    out.stats = stats;
    out.histogram = Some(table);
    Ok(out)
}

/// Runs every cell. Cell failures are recorded in the report rather than
/// aborting the run; only an invalid config is an error.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let kind = config.kind;
    let mut cells = Vec::new();
    for (c, key) in config.cells().into_iter().enumerate() {
        let seed = derive_seed(config.seed, c as u64);
        let mut report = CellReport {
            name: key.name(),
            key: key.clone(),
            seed,
            index_column: kind.index_column().into(),
            columns: kind.columns().iter().map(|s| s.to_string()).collect(),
            index: Vec::new(),
            rows: Vec::new(),
            summaries: Vec::new(),
            stats: BTreeMap::new(),
            histogram: None,
            error: None,
        };
        match run_cell(config, &key, seed) {
            Ok(out) => {
                report.summaries = report
                    .columns
                    .iter()
                    .enumerate()
                    .filter_map(|(i, m)| summarize(m, &out.rows.iter().map(|r| r[i]).collect::<Vec<_>>()))
                    .collect();
                report.index = out.index;
                report.rows = out.rows;
                report.stats = out.stats;
                report.histogram = out.histogram;
            }
            Err(e) => report.error = Some(e.to_string()),
        }
        cells.push(report);
    }
    let failed_cells = cells.iter().filter(|c| c.error.is_some()).count();
    Ok(ExperimentReport {
        config: config.clone(),
        cells,
        failed_cells,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn cell_csv(cell: &CellReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{},{}", cell.index_column, cell.columns.join(","));
    for (idx, row) in cell.index.iter().zip(&cell.rows) {
        let vals: Vec<String> = row.iter().map(|v| fmt_opt(*v)).collect();
        let _ = writeln!(s, "{idx},{}", vals.join(","));
    }
    s
}

pub fn histogram_csv(h: &HistogramTable) -> String {
    let mut s = String::from("k,count,freq,lo,hi\n");
    for i in 0..h.k.len() {
        let _ = writeln!(s, "{},{},{},{},{}", h.k[i], h.count[i], h.freq[i], h.lo[i], h.hi[i]);
    }
    s
}

/// One row per cell and metric.
pub fn summary_csv(report: &ExperimentReport) -> String {
    let mut s = String::from("cell,model,n,ordering,metric,count,mean,median,lo,hi\n");
    for c in &report.cells {
        for m in &c.summaries {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                c.name, c.key.model, c.key.n, c.key.ordering, m.metric, m.count, m.mean, m.median, m.lo, m.hi
            );
        }
    }
    s
}

fn cell_svg(kind: ExperimentKind, cell: &CellReport) -> String {
    match kind {
        ExperimentKind::Degree => {
            let h = cell.histogram.as_ref();
            let pts: Vec<(f64, f64)> = h
                .map(|h| h.k.iter().zip(&h.freq).filter(|(&k, _)| k > 0).map(|(&k, &f)| (k as f64, f)).collect())
                .unwrap_or_default();
            let band = h
                .map(|h| (0..h.k.len()).filter(|&i| h.k[i] > 0).map(|i| (h.k[i] as f64, h.lo[i], h.hi[i])).collect())
                .unwrap_or_default();
            let mut series = vec![Series {
                name: "degree distribution".into(),
                points: pts.clone(),
                band,
                ..Default::default()
            }];
            let g0 = cell.summary("gamma0").map(|s| s.mean);
            let g1 = cell.summary("gamma1").map(|s| s.mean);
            if let (Some(g0), Some(g1), Some(h)) = (g0, g1, h) {
                let lo = cell.summary("k_lo").map_or(1.0, |s| s.mean.max(1.0));
                let hi = h.k.last().copied().unwrap_or(1) as f64;
                let line = |k: f64| (g0 + g1 * k.ln()).exp() / cell.key.n as f64;
                series.push(Series {
                    name: format!("power law {g1:.2}"),
                    points: vec![(lo, line(lo)), (hi, line(hi))],
                    dashed: true,
                    colour: 1,
                    ..Default::default()
                });
            }
            LinePlot {
                title: cell.name.clone(),
                x_label: "degree k".into(),
                y_label: "frequency".into(),
                log_x: true,
                log_y: true,
                series,
            }
            .render()
        }
        ExperimentKind::Dependence => {
            let col = |m: &str| cell.column(m).unwrap_or_default();
            let (d, se, closed) = (col("delta_hat"), col("se"), col("delta_closed"));
            let lags: Vec<f64> = cell.index.iter().map(|&l| l as f64).collect();
            let mut series = vec![Series {
                name: "empirical".into(),
                points: lags.iter().zip(&d).filter_map(|(&l, v)| Some((l, (*v)?))).collect(),
                band: lags
                    .iter()
                    .zip(d.iter().zip(&se))
                    .filter_map(|(&l, (v, s))| Some((l, (*v)? - 2.0 * (*s)?, (*v)? + 2.0 * (*s)?)))
                    .collect(),
                ..Default::default()
            }];
            let exact: Vec<(f64, f64)> = lags.iter().zip(&closed).filter_map(|(&l, v)| Some((l, (*v)?))).collect();
            if !exact.is_empty() {
                series.push(Series {
                    name: "closed form".into(),
                    points: exact,
                    dashed: true,
                    colour: 1,
                    ..Default::default()
                });
            }
            LinePlot {
                title: cell.name.clone(),
                x_label: "lag k".into(),
                y_label: "delta".into(),
                series,
                ..Default::default()
            }
            .render()
        }
        _ => {
            let metric = &cell.columns[0];
            let vals: Vec<f64> = cell.column(metric).unwrap_or_default().into_iter().flatten().collect();
            histogram(&cell.name, metric, &vals, 20)
        }
    }
}

/// Mean, median and band of the kind's headline metric against `n`, one
/// colour per `(model, ordering)`.
fn summary_svg(report: &ExperimentReport) -> String {
    let kind = report.config.kind;
    let metric = match kind {
        ExperimentKind::Dependence => "delta_hat",
        ExperimentKind::Degree => "gamma1",
        _ => kind.columns()[0],
    };
    let mut groups: Vec<(String, OrderingKind)> = Vec::new();
    for c in &report.cells {
        let g = (c.key.model.clone(), c.key.ordering);
        if !groups.contains(&g) {
            groups.push(g);
        }
    }
    let mut series = Vec::new();
    for (gi, (model, ordering)) in groups.iter().enumerate() {
        let cells: Vec<&CellReport> = report
            .cells
            .iter()
            .filter(|c| &c.key.model == model && &c.key.ordering == ordering)
            .collect();
        let stat = |f: &dyn Fn(&Summary) -> f64| -> Vec<(f64, f64)> {
            cells
                .iter()
                .filter_map(|c| Some((c.key.n as f64, f(c.summary(metric)?))))
                .collect()
        };
        series.push(Series {
            name: format!("{model} {ordering} mean"),
            points: stat(&|s| s.mean),
            band: cells
                .iter()
                .filter_map(|c| {
                    let s = c.summary(metric)?;
                    Some((c.key.n as f64, s.lo, s.hi))
                })
                .collect(),
            colour: gi,
            ..Default::default()
        });
        series.push(Series {
            name: format!("{model} {ordering} median"),
            points: stat(&|s| s.median),
            dashed: true,
            colour: gi,
            ..Default::default()
        });
    }
    LinePlot {
        title: format!("{} by n", kind.as_str()),
        x_label: "n".into(),
        y_label: metric.into(),
        series,
        ..Default::default()
    }
    .render()
}

/// Writes per-cell CSV and SVG files, the cross-cell summary and
/// `report.json` into `dir`.
pub fn write_outputs(report: &ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let kind = report.config.kind.as_str();
    for cell in report.cells.iter().filter(|c| c.error.is_none()) {
        fs::write(dir.join(format!("{kind}_{}.csv", cell.name)), cell_csv(cell))?;
        fs::write(dir.join(format!("{kind}_{}.svg", cell.name)), cell_svg(report.config.kind, cell))?;
        if let Some(h) = &cell.histogram {
            fs::write(dir.join(format!("{kind}_{}_hist.csv", cell.name)), histogram_csv(h))?;
        }
    }
    fs::write(dir.join(format!("{kind}_summary.csv")), summary_csv(report))?;
    fs::write(dir.join(format!("{kind}_summary.svg")), summary_svg(report))?;
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    fs::write(dir.join("report.json"), json)?;
    Ok(())
}
