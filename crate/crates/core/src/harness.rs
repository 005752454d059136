//! Ensembles of edge counts, summary statistics, Kolmogorov distance to the
//! standard normal and parameter sweeps with CSV/JSON output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{erdos_renyi, SimParams};
use crate::numeric::{compensated_sum, format_sig, round_sig};
use crate::parallel::Workers;
use crate::rng::{self, Purpose};
use crate::sep::count_edges_by_subgraphs;
use crate::stein::{estimate_stein_terms_with, SteinOptions};
use crate::tri::{count_tri_edges, random_arc_order, shuffled_order};
use crate::Model;

/// How triangulation arc orders are chosen. Ignored for the polytope.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    #[default]
    FreshPerReplicate,
    Fixed,
}

impl std::str::FromStr for OrderPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fresh" | "fresh_per_replicate" => Ok(OrderPolicy::FreshPerReplicate),
            "fixed" => Ok(OrderPolicy::Fixed),
            other => Err(format!("unknown order policy `{other}` (expected fresh|fixed)")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub threads: Option<usize>,
    pub retain_samples: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub replicates: u64,
    pub sample_mean: f64,
    /// Unbiased.
    pub sample_variance: f64,
    /// `m3 / m2^{3/2}` with central sample moments; 0 for constant samples.
    pub sample_skewness: f64,
    pub standard_error_mean: f64,
    pub samples: Option<Vec<f64>>,
}

impl EnsembleSummary {
    pub fn from_samples(samples: Vec<f64>, retain: bool) -> Result<Self> {
        let r = samples.len();
        if r < 2 {
            return Err(Error::TooFewReplicates { needed: 2, got: r });
        }
        let rf = r as f64;
        let mean = compensated_sum(samples.iter().copied()) / rf;
        let m2 = compensated_sum(samples.iter().map(|x| (x - mean).powi(2))) / rf;
        let m3 = compensated_sum(samples.iter().map(|x| (x - mean).powi(3))) / rf;
        let variance = m2 * rf / (rf - 1.0);
        let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
        Ok(EnsembleSummary {
            replicates: r as u64,
            sample_mean: mean,
            sample_variance: variance,
            sample_skewness: skewness,
            standard_error_mean: (variance / rf).sqrt(),
            samples: retain.then_some(samples),
        })
    }
}

/// Edge counts `K` of replicates `0..replicates`, in replicate order.
pub fn sample_counts(
    params: &SimParams,
    model: Model,
    replicates: u64,
    policy: OrderPolicy,
    workers: &Workers,
) -> Vec<u64> {
    let n = params.n();
    let fixed =
        (model == Model::Triangulation && policy == OrderPolicy::Fixed).then(|| random_arc_order(n, params.seed()));
    workers.map(replicates, |r| {
        let g = erdos_renyi(params, r);
        match model {
            Model::Polytope => count_edges_by_subgraphs(&g),
            Model::Triangulation => {
                let order = match &fixed {
                    Some(o) => o.clone(),
                    None => shuffled_order(n, &mut rng::stream(params.seed(), Purpose::Order, r)),
                };
                count_tri_edges(&g, &order).expect("order sized for the graph").total
            }
        }
    })
}

pub fn run_ensemble(params: &SimParams, model: Model, replicates: u64, policy: OrderPolicy) -> Result<EnsembleSummary> {
    run_ensemble_with(params, model, replicates, policy, &RunOptions::default())
}

pub fn run_ensemble_with(
    params: &SimParams,
    model: Model,
    replicates: u64,
    policy: OrderPolicy,
    options: &RunOptions,
) -> Result<EnsembleSummary> {
    if replicates < 2 {
        return Err(Error::TooFewReplicates { needed: 2, got: replicates as usize });
    }
    let workers = Workers::new(options.threads);
    let ks = sample_counts(params, model, replicates, policy, &workers);
    EnsembleSummary::from_samples(ks.into_iter().map(|k| k as f64).collect(), options.retain_samples)
}

/// Standard normal distribution function, `Φ(z) = erfc(−z/√2)/2`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Centering and scaling applied before comparing with `N(0, 1)`. Both use
/// the population (`1/R`) second moment about the chosen center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Standardization {
    SampleMoments,
    ExactMeanSampleVar { mean: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub distance: f64,
    pub standardization: Standardization,
}

pub fn standardize(samples: &[f64], standardization: Standardization) -> Result<Vec<f64>> {
    let r = samples.len();
    if r < 2 {
        return Err(Error::TooFewSamples(r));
    }
    let center = match standardization {
        Standardization::SampleMoments => compensated_sum(samples.iter().copied()) / r as f64,
        Standardization::ExactMeanSampleVar { mean } => mean,
    };
    let var = compensated_sum(samples.iter().map(|x| (x - center).powi(2))) / r as f64;
    if var.is_nan() || var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let sd = var.sqrt();
    Ok(samples.iter().map(|x| (x - center) / sd).collect())
}

/// `sup_z |F_R(z) − Φ(z)|` for the empirical distribution of the
/// standardized samples.
pub fn ks_distance_to_normal(samples: &[f64], standardization: Standardization) -> Result<KsReport> {
    let mut z = standardize(samples, standardization)?;
    z.sort_by(f64::total_cmp);
    let r = z.len() as f64;
    let distance = z
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let phi = normal_cdf(x);
            ((i + 1) as f64 / r - phi).abs().max((phi - i as f64 / r).abs())
        })
        .fold(0.0, f64::max);
    Ok(KsReport { distance, standardization })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub n: usize,
    pub model: Model,
    pub replicates: u64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    /// `None` when the counts are constant.
    pub ks_distance: Option<f64>,
    pub seed: u64,
    /// Estimated Kolmogorov bound, present in CLT runs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kolmogorov_bound: Option<f64>,
}

pub const CSV_HEADER: &str = "p,n,model,replicates,mean,variance,skewness,ks_distance,seed";

impl SweepRow {
    pub fn from_summary(params: &SimParams, model: Model, summary: &EnsembleSummary) -> Result<Self> {
        let ks_distance = match &summary.samples {
            Some(s) => match ks_distance_to_normal(s, Standardization::SampleMoments) {
                Ok(r) => Some(r.distance),
                Err(Error::ZeroVariance) => None,
                Err(e) => return Err(e),
            },
            None => None,
        };
        Ok(SweepRow {
            p: params.p(),
            n: params.n(),
            model,
            replicates: summary.replicates,
            mean: summary.sample_mean,
            variance: summary.sample_variance,
            skewness: summary.sample_skewness,
            ks_distance,
            seed: params.seed(),
            kolmogorov_bound: None,
        })
    }

    fn csv_line(&self, with_bound: bool) -> String {
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{}",
            format_sig(self.p, 12),
            self.n,
            self.model,
            self.replicates,
            format_sig(self.mean, 12),
            format_sig(self.variance, 12),
            format_sig(self.skewness, 12),
            self.ks_distance.map_or_else(|| "nan".to_string(), |d| format_sig(d, 12)),
            self.seed
        );
        if with_bound {
            line.push(',');
            line.push_str(&self.kolmogorov_bound.map_or_else(|| "nan".to_string(), |b| format_sig(b, 12)));
        }
        line
    }

    fn rounded(&self) -> Self {
        SweepRow {
            p: round_sig(self.p, 12),
            mean: round_sig(self.mean, 12),
            variance: round_sig(self.variance, 12),
            skewness: round_sig(self.skewness, 12),
            ks_distance: self.ks_distance.map(|d| round_sig(d, 12)),
            kolmogorov_bound: self.kolmogorov_bound.map(|b| round_sig(b, 12)),
            ..self.clone()
        }
    }
}

/// Grid `start, start + step, ...` up to `end` inclusive (within half a step).
pub fn p_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || end < start {
        return Err(Error::EmptyGrid);
    }
    let count = ((end - start) / step + 0.5).floor() as usize + 1;
    Ok((0..count).map(|i| round_sig(start + i as f64 * step, 12)).collect())
}

/// One summary row per grid point; every point reuses `seed`.
pub fn sweep(
    n: usize,
    grid: &[f64],
    model: Model,
    replicates: u64,
    policy: OrderPolicy,
    seed: u64,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let options = RunOptions { threads, retain_samples: true };
    grid.iter()
        .map(|&p| {
            let params = SimParams::new(n, p, seed)?;
            let summary = run_ensemble_with(&params, model, replicates, policy, &options)?;
            SweepRow::from_summary(&params, model, &summary)
        })
        .collect()
}

/// Ensembles along `ns` at fixed `p`: one row per `n` with the Kolmogorov
/// distance of the standardized counts and, if `stein_replicates > 0`, the
/// estimated Kolmogorov bound.
#[allow(clippy::too_many_arguments)]
pub fn clt(
    ns: &[usize],
    p: f64,
    model: Model,
    replicates: u64,
    policy: OrderPolicy,
    stein_replicates: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>> {
    if ns.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let options = RunOptions { threads, retain_samples: true };
    ns.iter()
        .map(|&n| {
            let params = SimParams::new(n, p, seed)?;
            let summary = run_ensemble_with(&params, model, replicates, policy, &options)?;
            let mut row = SweepRow::from_summary(&params, model, &summary)?;
            if stein_replicates > 0 {
                let opts = SteinOptions { threads, ..SteinOptions::default() };
                row.kolmogorov_bound =
                    Some(estimate_stein_terms_with(&params, model, stein_replicates, &opts)?.kolmogorov_bound);
            }
            Ok(row)
        })
        .collect()
}

/// CSV with the run configuration as a leading `# ` comment line. A trailing
/// `kolmogorov_bound` column is added when any row carries one.
pub fn to_csv(rows: &[SweepRow], config: &serde_json::Value) -> String {
    let with_bound = rows.iter().any(|r| r.kolmogorov_bound.is_some());
    let mut out = format!("# {config}\n{CSV_HEADER}");
    if with_bound {
        out.push_str(",kolmogorov_bound");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line(with_bound));
        out.push('\n');
    }
    out
}

pub fn to_json(rows: &[SweepRow], config: &serde_json::Value) -> String {
    let rows: Vec<SweepRow> = rows.iter().map(SweepRow::rounded).collect();
    let doc = serde_json::json!({ "config": config, "rows": rows });
    let mut s = serde_json::to_string_pretty(&doc).expect("rows serialize");
    s.push('\n');
    s
}
