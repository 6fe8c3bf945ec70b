//! The multi-size, multi-run measurement protocol with mean ±
//! population-standard-deviation aggregation.

use rayon::prelude::*;
use thiserror::Error;

use crate::config::DemographyConfig;
use crate::generate::generate;
use crate::graph::{level_view, EdgeLevel};
use crate::metrics::{
    average_histograms, fit_power_tail_averaged, measure_view, DistanceError, MetricsRecord,
    PowerFit,
};
use crate::population::SynthesisError;
use crate::rng::derive_run_seed;

pub const DEFAULT_ECCENTRICITY_CUTOFF: usize = 200_000;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("run failed at size {size}, seed {seed}: {source}")]
    Run {
        size: usize,
        seed: u64,
        source: RunFailure,
    },
}

#[derive(Debug, Error)]
pub enum RunFailure {
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

/// Sizes, repetition counts, and seeds of one experiment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentPlan {
    /// Ascending population sizes.
    pub sizes: Vec<usize>,
    /// Overrides the repetition schedule for every size when set.
    pub repetitions_override: Option<u32>,
    /// Sizes above this skip radius/diameter.
    pub eccentricity_cutoff: usize,
    pub base_seed: u64,
}

impl ExperimentPlan {
    pub fn new(sizes: Vec<usize>, base_seed: u64) -> ExperimentPlan {
        ExperimentPlan {
            sizes,
            repetitions_override: None,
            eccentricity_cutoff: DEFAULT_ECCENTRICITY_CUTOFF,
            base_seed,
        }
    }

    /// Ten sizes log-uniform between 10^3 and 10^6.
    pub fn default_sizes() -> Vec<usize> {
        (0..10)
            .map(|k| 10f64.powf(3.0 + k as f64 / 3.0).round() as usize)
            .collect()
    }

    /// Repetitions per size: 30 at 10^3 falling to 5 at 10^6, linear in
    /// log10 between the decade anchors {30, 20, 10, 5}, clamped outside.
    pub fn repetitions_for(n: usize) -> u32 {
        let anchors = [(3.0, 30.0), (4.0, 20.0), (5.0, 10.0), (6.0, 5.0)];
        let x = (n.max(1) as f64).log10();
        if x <= anchors[0].0 {
            return anchors[0].1 as u32;
        }
        for pair in anchors.windows(2) {
            let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
            if x <= x1 {
                let y = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
                return (y.round() as u32).max(1);
            }
        }
        anchors[anchors.len() - 1].1 as u32
    }

    pub fn repetitions(&self, n: usize) -> u32 {
        self.repetitions_override
            .unwrap_or_else(|| Self::repetitions_for(n))
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.sizes.is_empty() {
            return Err(ExperimentError::InvalidPlan("no sizes".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExperimentError::InvalidPlan(
                "sizes must be strictly ascending".into(),
            ));
        }
        if self.sizes.iter().any(|&s| s < 2) {
            return Err(ExperimentError::InvalidPlan(
                "every size must be at least 2".into(),
            ));
        }
        if self.repetitions_override == Some(0) {
            return Err(ExperimentError::InvalidPlan(
                "repetitions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Mean and population standard deviation of per-run values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

pub fn population_stat(values: &[f64]) -> Stat {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Stat {
        mean,
        std: variance.sqrt(),
    }
}

/// Aggregated results for one size.
#[derive(Debug, Clone)]
pub struct SizeSummary {
    pub n: usize,
    pub runs: u32,
    pub mean_degree: Stat,
    /// Per-run tail exponents (runs with a fit), when any.
    pub exponent: Option<Stat>,
    /// Fit of the run-averaged histogram.
    pub averaged_fit: Option<PowerFit>,
    pub radius: Option<Stat>,
    pub diameter: Option<Stat>,
    pub cc_local: Stat,
    pub cc_global: Stat,
    pub repair_edges_mean: f64,
    /// Per degree: mean and population std of the count across runs.
    pub histogram: Vec<(u32, f64, f64)>,
    /// The raw per-run records, in repetition order.
    pub records: Vec<MetricsRecord>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub rows: Vec<SizeSummary>,
}

/// Generate and measure every (size, repetition) cell of the plan.
///
/// Runs within a size execute in parallel; aggregation is ordered by
/// repetition index, so the output is independent of scheduling.
pub fn run_experiment(
    plan: &ExperimentPlan,
    config: &DemographyConfig,
) -> Result<ExperimentResults, ExperimentError> {
    plan.validate()?;
    let mut rows = Vec::with_capacity(plan.sizes.len());
    for &size in &plan.sizes {
        let reps = plan.repetitions(size);
        let eccentricity = size <= plan.eccentricity_cutoff;
        let outcomes: Vec<Result<MetricsRecord, ExperimentError>> = (0..reps)
            .into_par_iter()
            .map(|rep| {
                let seed = derive_run_seed(plan.base_seed, size as u64, rep as u64);
                let wrap = |source: RunFailure| ExperimentError::Run { size, seed, source };
                let generated =
                    generate(config, size, seed).map_err(|e| wrap(RunFailure::Synthesis(e)))?;
                let view = level_view(&generated.graph, &[EdgeLevel::I, EdgeLevel::II])
                    .expect("level set is non-empty");
                let mut record = measure_view(&view, seed, eccentricity)
                    .map_err(|e| wrap(RunFailure::Distance(e)))?;
                record.repair_edges = Some(generated.report.repair_edges);
                Ok(record)
            })
            .collect();
        let mut records = Vec::with_capacity(outcomes.len());
        for outcome in outcomes {
            records.push(outcome?);
        }
        rows.push(summarize(size, records));
    }
    Ok(ExperimentResults { rows })
}

fn optional_stat(values: Vec<f64>) -> Option<Stat> {
    if values.is_empty() {
        None
    } else {
        Some(population_stat(&values))
    }
}

fn summarize(n: usize, records: Vec<MetricsRecord>) -> SizeSummary {
    let runs = records.len() as u32;
    let mean_degree = population_stat(
        &records
            .iter()
            .map(|r| r.mean_degree)
            .collect::<Vec<f64>>(),
    );
    let exponent = optional_stat(
        records
            .iter()
            .filter_map(|r| r.tail.as_ref().map(|t| t.exponent))
            .collect(),
    );
    let radius = optional_stat(
        records
            .iter()
            .filter_map(|r| r.radius.map(f64::from))
            .collect(),
    );
    let diameter = optional_stat(
        records
            .iter()
            .filter_map(|r| r.diameter.map(f64::from))
            .collect(),
    );
    let cc_local = population_stat(
        &records
            .iter()
            .map(|r| r.avg_local_clustering)
            .collect::<Vec<f64>>(),
    );
    let cc_global = population_stat(
        &records
            .iter()
            .map(|r| r.global_transitivity)
            .collect::<Vec<f64>>(),
    );
    let repair_edges_mean = records
        .iter()
        .map(|r| r.repair_edges.unwrap_or(0) as f64)
        .sum::<f64>()
        / runs.max(1) as f64;

    let averaged = average_histograms(records.iter().map(|r| &r.histogram));
    let averaged_fit = fit_power_tail_averaged(&averaged).ok();
    let histogram = averaged
        .iter()
        .map(|&(degree, mean)| {
            let per_run: Vec<f64> = records
                .iter()
                .map(|r| r.histogram.counts().get(&degree).copied().unwrap_or(0) as f64)
                .collect();
            let stat = population_stat(&per_run);
            debug_assert!((stat.mean - mean).abs() < 1e-9);
            (degree, stat.mean, stat.std)
        })
        .collect();

    SizeSummary {
        n,
        runs,
        mean_degree,
        exponent,
        averaged_fit,
        radius,
        diameter,
        cc_local,
        cc_global,
        repair_edges_mean,
        histogram,
        records,
    }
}

pub const METRICS_CSV_HEADER: &str = "n,runs,mean_deg,std_deg,exponent,exponent_std,radius,radius_std,diameter,diameter_std,cc_local,cc_local_std,cc_global,cc_global_std,components_repaired";

fn push_stat(row: &mut String, stat: Option<Stat>) {
    match stat {
        Some(s) => row.push_str(&format!(",{},{}", s.mean, s.std)),
        None => row.push_str(",,"),
    }
}

impl ExperimentResults {
    /// The aggregated metrics table; empty fields for skipped
    /// eccentricities, `components_repaired` is the mean repair-edge
    /// count per run.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(METRICS_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let mut line = format!("{},{}", row.n, row.runs);
            push_stat(&mut line, Some(row.mean_degree));
            push_stat(&mut line, row.exponent);
            push_stat(&mut line, row.radius);
            push_stat(&mut line, row.diameter);
            push_stat(&mut line, Some(row.cc_local));
            push_stat(&mut line, Some(row.cc_global));
            line.push_str(&format!(",{}", row.repair_edges_mean));
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Plot-data files: `(file name, content)` pairs, one per figure
    /// series, each with x, y, y_err columns.
    pub fn plot_files(&self) -> Vec<(String, String)> {
        type Extract = Box<dyn Fn(&SizeSummary) -> Option<Stat>>;
        let mut files = Vec::new();
        for row in &self.rows {
            let mut content = String::from("degree,mean_count,std_count\n");
            for &(degree, mean, std) in &row.histogram {
                content.push_str(&format!("{degree},{mean},{std}\n"));
            }
            files.push((format!("links_histogram_n{}.csv", row.n), content));
        }
        let series: [(&str, Extract); 5] = [
            ("radius.csv", Box::new(|r| r.radius)),
            ("diameter.csv", Box::new(|r| r.diameter)),
            ("clustering_local.csv", Box::new(|r| Some(r.cc_local))),
            ("clustering_global.csv", Box::new(|r| Some(r.cc_global))),
            (
                "tail_exponent.csv",
                Box::new(|r| {
                    r.averaged_fit.as_ref().map(|fit| Stat {
                        mean: fit.exponent,
                        std: r.exponent.map(|e| e.std).unwrap_or(0.0),
                    })
                }),
            ),
        ];
        for (name, extract) in series {
            let mut content = String::from("n,mean,std\n");
            for row in &self.rows {
                if let Some(stat) = extract(row) {
                    content.push_str(&format!("{},{},{}\n", row.n, stat.mean, stat.std));
                }
            }
            files.push((name.to_string(), content));
        }
        files
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::load_config;
    use crate::config::tests::EXAMPLE_CITY;

    fn example_city() -> DemographyConfig {
        load_config(EXAMPLE_CITY).unwrap()
    }

    #[test]
    fn repetition_schedule_hits_the_anchors() {
        assert_eq!(ExperimentPlan::repetitions_for(1_000), 30);
        assert_eq!(ExperimentPlan::repetitions_for(10_000), 20);
        assert_eq!(ExperimentPlan::repetitions_for(100_000), 10);
        assert_eq!(ExperimentPlan::repetitions_for(1_000_000), 5);
        assert_eq!(ExperimentPlan::repetitions_for(100), 30);
        assert_eq!(ExperimentPlan::repetitions_for(10_000_000), 5);
        // Log-linear in between.
        assert_eq!(ExperimentPlan::repetitions_for(31_623), 15);
    }

    #[test]
    fn default_sizes_are_log_uniform() {
        let sizes = ExperimentPlan::default_sizes();
        assert_eq!(sizes.len(), 10);
        assert_eq!(sizes[0], 1_000);
        assert_eq!(*sizes.last().unwrap(), 1_000_000);
        assert!(sizes.windows(2).all(|w| w[0] < w[1]));
        // Consecutive ratios hover around 10^(1/3).
        for pair in sizes.windows(2) {
            let ratio = pair[1] as f64 / pair[0] as f64;
            assert!((2.0..=2.4).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn plan_validation_rejects_bad_inputs() {
        let config = example_city();
        let bad = ExperimentPlan::new(vec![], 1);
        assert!(run_experiment(&bad, &config).is_err());
        let bad = ExperimentPlan::new(vec![500, 500], 1);
        assert!(run_experiment(&bad, &config).is_err());
        let bad = ExperimentPlan::new(vec![1], 1);
        assert!(run_experiment(&bad, &config).is_err());
        let mut bad = ExperimentPlan::new(vec![100], 1);
        bad.repetitions_override = Some(0);
        assert!(run_experiment(&bad, &config).is_err());
    }

    #[test]
    fn experiment_output_is_deterministic() {
        let config = example_city();
        let mut plan = ExperimentPlan::new(vec![300], 42);
        plan.repetitions_override = Some(2);
        let a = run_experiment(&plan, &config).unwrap();
        let b = run_experiment(&plan, &config).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.plot_files(), b.plot_files());
    }

    #[test]
    fn cutoff_skips_eccentricities_above_it() {
        let config = example_city();
        let mut plan = ExperimentPlan::new(vec![200, 600], 7);
        plan.repetitions_override = Some(2);
        plan.eccentricity_cutoff = 500;
        let results = run_experiment(&plan, &config).unwrap();
        assert!(results.rows[0].radius.is_some());
        assert!(results.rows[0].diameter.is_some());
        assert!(results.rows[1].radius.is_none());
        assert!(results.rows[1].diameter.is_none());
        let csv = results.to_csv();
        let line = csv.lines().nth(2).unwrap();
        assert!(line.contains(",,,,"), "empty eccentricity fields: {line}");
    }

    #[test]
    fn reported_std_matches_direct_recomputation() {
        let config = example_city();
        let mut plan = ExperimentPlan::new(vec![400], 11);
        plan.repetitions_override = Some(4);
        let results = run_experiment(&plan, &config).unwrap();
        let row = &results.rows[0];
        let values: Vec<f64> = row.records.iter().map(|r| r.avg_local_clustering).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let std =
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64).sqrt();
        assert!((row.cc_local.mean - mean).abs() < 1e-12);
        assert!((row.cc_local.std - std).abs() < 1e-12);
    }

    #[test]
    fn seeds_differ_per_repetition() {
        let config = example_city();
        let mut plan = ExperimentPlan::new(vec![300], 5);
        plan.repetitions_override = Some(3);
        let results = run_experiment(&plan, &config).unwrap();
        let seeds: Vec<u64> = results.rows[0].records.iter().map(|r| r.seed).collect();
        let mut unique = seeds.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), seeds.len());
    }
}
