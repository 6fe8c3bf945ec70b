//! Release acceptance suite. Each test checks one criterion at its stated
//! tolerance and prints one PASS line; run with `--nocapture` to see them.
//!
//! All expensive run sets are built once and shared across criteria; the
//! runtime assertions charge each criterion the build time of every run
//! set it depends on.

use std::collections::VecDeque;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sociosynth::config::{load_config, DemographyConfig};
use sociosynth::dump::write_edge_list;
use sociosynth::generate::{generate, Generated};
use sociosynth::graph::{connected_components, level_view, EdgeLevel, GraphView};
use sociosynth::metrics::{
    average_histograms, clustering_coefficients, fit_power_tail_averaged, measure_view,
    radius_diameter, MetricsRecord,
};
use sociosynth::population::Sex;
use sociosynth::rng::derive_run_seed;

const BASE_SEED: u64 = 42;

const EXAMPLE_CITY: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/example-city.toml"));

fn config() -> &'static DemographyConfig {
    static CONFIG: OnceLock<DemographyConfig> = OnceLock::new();
    CONFIG.get_or_init(|| load_config(EXAMPLE_CITY).expect("example-city config is valid"))
}

struct Run {
    record: MetricsRecord,
    repairs: u64,
    connected: bool,
}

struct RunSet {
    runs: Vec<Run>,
    build_time: Duration,
}

fn build_runs(n: usize, reps: u64, eccentricity: bool) -> RunSet {
    let started = Instant::now();
    let runs: Vec<Run> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let seed = derive_run_seed(BASE_SEED, n as u64, rep);
            let generated = generate(config(), n, seed).expect("generation succeeds");
            let view = level_view(&generated.graph, &[EdgeLevel::I, EdgeLevel::II])
                .expect("non-empty level set");
            let connected = connected_components(&view).count() == 1;
            let record = measure_view(&view, seed, eccentricity && connected)
                .expect("connected view measures cleanly");
            Run {
                record,
                repairs: generated.report.repair_edges,
                connected,
            }
        })
        .collect();
    RunSet {
        runs,
        build_time: started.elapsed(),
    }
}

fn runs_1k() -> &'static RunSet {
    static RUNS: OnceLock<RunSet> = OnceLock::new();
    RUNS.get_or_init(|| build_runs(1_000, 100, true))
}

fn runs_10k() -> &'static RunSet {
    static RUNS: OnceLock<RunSet> = OnceLock::new();
    RUNS.get_or_init(|| build_runs(10_000, 20, true))
}

fn runs_100k() -> &'static RunSet {
    static RUNS: OnceLock<RunSet> = OnceLock::new();
    RUNS.get_or_init(|| build_runs(100_000, 10, false))
}

fn generated_100k() -> &'static Generated {
    static RUN: OnceLock<Generated> = OnceLock::new();
    RUN.get_or_init(|| {
        let seed = derive_run_seed(BASE_SEED, 100_000, 0);
        generate(config(), 100_000, seed).expect("generation succeeds")
    })
}

/// Criterion 1: the I∪II view is connected in 100% of runs (100 seeds at
/// 10^3, 10 at 10^5) and repair edges stay within 0.5% of n per run.
#[test]
fn criterion_1_connectivity_and_bounded_repairs() {
    for (set, n, cap) in [(runs_1k(), 1_000usize, 5u64), (runs_100k(), 100_000, 500)] {
        for (rep, run) in set.runs.iter().enumerate() {
            assert!(run.connected, "n={n} rep={rep}: view is disconnected");
            assert!(
                run.repairs <= cap,
                "n={n} rep={rep}: {} repair edges exceed 0.5% cap {cap}",
                run.repairs
            );
        }
    }
    let elapsed = runs_1k().build_time + runs_100k().build_time;
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!(
        "PASS criterion 1: connected in 110/110 runs, repairs within 0.5% of n ({:?})",
        elapsed
    );
}

/// Criterion 2: no hubs. Max I∪II degree ≤ 40 and 99th-percentile degree
/// ≤ 15 across every run of criterion 1.
#[test]
fn criterion_2_no_hubs() {
    let mut worst_max = 0;
    let mut worst_p99 = 0;
    for set in [runs_1k(), runs_100k()] {
        for run in &set.runs {
            worst_max = worst_max.max(run.record.histogram.max_degree());
            worst_p99 = worst_p99.max(run.record.histogram.quantile(0.99));
        }
    }
    assert!(worst_max <= 40, "max degree {worst_max} exceeds 40");
    assert!(worst_p99 <= 15, "p99 degree {worst_p99} exceeds 15");
    println!("PASS criterion 2: max degree {worst_max} ≤ 40, p99 {worst_p99} ≤ 15");
}

/// Criterion 3: power-law tail of the averaged histogram. Exponent in
/// [6, 10] with r² ≥ 0.9 at 10^3 (30 runs); exponent in [8, 13] at 10^5
/// (10 runs).
#[test]
fn criterion_3_power_law_tail() {
    let hist_1k = average_histograms(runs_1k().runs[..30].iter().map(|r| &r.record.histogram));
    let fit_1k = fit_power_tail_averaged(&hist_1k).expect("enough tail bins at 10^3");
    assert!(
        (6.0..=10.0).contains(&fit_1k.exponent),
        "10^3 exponent {} outside [6, 10]",
        fit_1k.exponent
    );
    assert!(
        fit_1k.r_squared >= 0.9,
        "10^3 r² {} below 0.9",
        fit_1k.r_squared
    );

    let hist_100k = average_histograms(runs_100k().runs.iter().map(|r| &r.record.histogram));
    let fit_100k = fit_power_tail_averaged(&hist_100k).expect("enough tail bins at 10^5");
    assert!(
        (8.0..=13.0).contains(&fit_100k.exponent),
        "10^5 exponent {} outside [8, 13]",
        fit_100k.exponent
    );

    let elapsed = runs_1k().build_time + runs_100k().build_time;
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    println!(
        "PASS criterion 3: exponent {:.2} (r² {:.3}) at 10^3, {:.2} at 10^5",
        fit_1k.exponent, fit_1k.r_squared, fit_100k.exponent
    );
}

/// Criterion 4: average-local clustering means at 10^3, 10^4, 10^5 differ
/// pairwise by at most 10% relative.
#[test]
fn criterion_4_clustering_constancy() {
    let mean_cc = |set: &RunSet, take: usize| {
        let values: Vec<f64> = set
            .runs
            .iter()
            .take(take)
            .map(|r| r.record.avg_local_clustering)
            .collect();
        values.iter().sum::<f64>() / values.len() as f64
    };
    let means = [
        mean_cc(runs_1k(), 30),
        mean_cc(runs_10k(), 20),
        mean_cc(runs_100k(), 10),
    ];
    for i in 0..means.len() {
        for j in (i + 1)..means.len() {
            let relative = (means[i] - means[j]).abs() / means[i].max(means[j]);
            assert!(
                relative <= 0.10,
                "clustering means {:?} differ by {:.1}%",
                means,
                relative * 100.0
            );
        }
    }
    let elapsed = runs_1k().build_time + runs_10k().build_time + runs_100k().build_time;
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    println!(
        "PASS criterion 4: clustering means {:.4}/{:.4}/{:.4} within 10% pairwise",
        means[0], means[1], means[2]
    );
}

/// Criterion 5: logarithmic distances. Mean diameter grows by at least
/// one hop from 10^3 to 10^4 but at most doubles, and radius ≤ diameter
/// ≤ 2·radius holds in every run.
#[test]
fn criterion_5_logarithmic_distances() {
    let mean_diameter = |set: &RunSet, take: usize| {
        let values: Vec<f64> = set
            .runs
            .iter()
            .take(take)
            .map(|r| f64::from(r.record.diameter.expect("eccentricities computed")))
            .collect();
        values.iter().sum::<f64>() / values.len() as f64
    };
    let d_1k = mean_diameter(runs_1k(), 30);
    let d_10k = mean_diameter(runs_10k(), 20);
    assert!(
        d_10k - d_1k >= 1.0,
        "diameter means {d_1k:.2} → {d_10k:.2} grew by less than 1"
    );
    assert!(
        d_10k <= 2.0 * d_1k,
        "diameter means {d_1k:.2} → {d_10k:.2} grew superlinearly"
    );
    for set in [runs_1k(), runs_10k()] {
        for run in &set.runs {
            let (radius, diameter) = (
                run.record.radius.expect("computed"),
                run.record.diameter.expect("computed"),
            );
            assert!(
                radius <= diameter && diameter <= 2 * radius,
                "radius {radius}, diameter {diameter} violate the eccentricity sandwich"
            );
        }
    }
    println!("PASS criterion 5: mean diameter {d_1k:.2} → {d_10k:.2}, sandwich holds per run");
}

fn total_variation(realized: &[f64], expected: &[f64]) -> f64 {
    realized
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0
}

/// Criterion 6: distribution conformance at n = 10^5. Men's marital
/// frequencies per age interval within TV 0.02 of the table, partner age
/// gaps within TV 0.05, company-group worker shares within TV 0.02.
#[test]
fn criterion_6_distribution_conformance() {
    let generated = generated_100k();
    let config = config();
    let population = &generated.population;

    // Men's marital status per marital-table interval.
    let table = &config.marital_men;
    let legal = config.rules.legal_marriage_age;
    let mut counts = vec![[0u64; 5]; table.borders.len()];
    let mut totals = vec![0u64; table.borders.len()];
    for person in &population.individuals {
        if person.sex != Sex::Male || person.age < legal {
            continue;
        }
        let interval = table.interval_of(person.age).expect("covered age");
        counts[interval][person.marital.index()] += 1;
        totals[interval] += 1;
    }
    let mut worst_marital_tv = 0.0f64;
    for i in 0..table.borders.len() {
        let (_, hi) = table.interval_bounds(i);
        if hi < legal || totals[i] == 0 {
            continue;
        }
        let realized: Vec<f64> = counts[i]
            .iter()
            .map(|&c| c as f64 / totals[i] as f64)
            .collect();
        let tv = total_variation(&realized, &table.probs[i]);
        worst_marital_tv = worst_marital_tv.max(tv);
        assert!(
            tv <= 0.02,
            "marital interval {i} (ages ≤ {hi}): TV {tv:.4} exceeds 0.02"
        );
    }

    // Realized partner age gaps against the configured gap table.
    let gap_table = &config.age_gap;
    let mut gap_counts = std::collections::BTreeMap::new();
    for &(man, woman) in &population.partnerships {
        let gap = population.individuals[man as usize].age as i64
            - population.individuals[woman as usize].age as i64;
        *gap_counts.entry(gap).or_insert(0u64) += 1;
    }
    let pairs: u64 = gap_counts.values().sum();
    let mut gap_tv = 0.0;
    for (&value, &prob) in gap_table.gap_values.iter().zip(&gap_table.gap_probs) {
        let realized = gap_counts.remove(&(value as i64)).unwrap_or(0) as f64 / pairs as f64;
        gap_tv += (realized - prob).abs();
    }
    // Gaps realized outside the table support (widened searches).
    gap_tv += gap_counts.values().map(|&c| c as f64 / pairs as f64).sum::<f64>();
    let gap_tv = gap_tv / 2.0;
    assert!(gap_tv <= 0.05, "partner age-gap TV {gap_tv:.4} exceeds 0.05");

    // Worker share per company group.
    let mut per_group = [0u64; 4];
    let mut workers = 0u64;
    for group in generated.graph.groups() {
        if let sociosynth::GroupKind::Company { group: kind } = group.kind {
            let index = sociosynth::config::CompanyKind::ALL
                .iter()
                .position(|k| *k == kind)
                .expect("known kind");
            per_group[index] += group.members.len() as u64;
            workers += group.members.len() as u64;
        }
    }
    let realized: Vec<f64> = per_group.iter().map(|&c| c as f64 / workers as f64).collect();
    let company_tv = total_variation(&realized, &config.companies.probs());
    assert!(company_tv <= 0.02, "company share TV {company_tv:.4} exceeds 0.02");

    println!(
        "PASS criterion 6: TV marital ≤ {worst_marital_tv:.4}, age-gap {gap_tv:.4}, company {company_tv:.4}"
    );
}

// ---------------------------------------------------------------------
// Criterion 7 oracles, implemented here, independent of the library path.
// ---------------------------------------------------------------------

fn oracle_clustering(view: &GraphView) -> (f64, f64) {
    let n = view.node_count();
    let mut adjacency = vec![false; n * n];
    for v in 0..n {
        for &w in view.neighbors(v) {
            adjacency[v * n + w as usize] = true;
        }
    }
    let mut triangles = vec![0u64; n];
    for a in 0..n {
        for b in (a + 1)..n {
            if !adjacency[a * n + b] {
                continue;
            }
            for c in (b + 1)..n {
                if adjacency[a * n + c] && adjacency[b * n + c] {
                    triangles[a] += 1;
                    triangles[b] += 1;
                    triangles[c] += 1;
                }
            }
        }
    }
    let mut local_sum = 0.0;
    let mut triangle_total = 0u64;
    let mut wedge_total = 0u64;
    for (v, &count) in triangles.iter().enumerate() {
        let d = view.degree(v) as u64;
        let wedges = d * d.saturating_sub(1) / 2;
        wedge_total += wedges;
        triangle_total += count;
        if wedges > 0 {
            local_sum += count as f64 / wedges as f64;
        }
    }
    (
        local_sum / n as f64,
        if wedge_total == 0 {
            0.0
        } else {
            triangle_total as f64 / wedge_total as f64
        },
    )
}

fn oracle_radius_diameter(view: &GraphView) -> (u32, u32) {
    let n = view.node_count();
    let mut radius = u32::MAX;
    let mut diameter = 0;
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for source in 0..n {
        dist.fill(u32::MAX);
        queue.clear();
        dist[source] = 0;
        queue.push_back(source as u32);
        let mut eccentricity = 0;
        while let Some(v) = queue.pop_front() {
            let next = dist[v as usize] + 1;
            for &w in view.neighbors(v as usize) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = next;
                    eccentricity = eccentricity.max(next);
                    queue.push_back(w);
                }
            }
        }
        radius = radius.min(eccentricity);
        diameter = diameter.max(eccentricity);
    }
    (radius, diameter)
}

fn random_connected_view(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> GraphView {
    let mut edges = Vec::new();
    for v in 1..n as u32 {
        edges.push((rng.random_range(0..v), v));
    }
    for _ in 0..extra {
        let a = rng.random_range(0..n as u32);
        let b = rng.random_range(0..n as u32);
        if a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    GraphView::from_edges(n, &edges)
}

/// Criterion 7: metric oracles. Clustering and radius/diameter agree with
/// brute force on 500 random connected graphs of ≤ 200 nodes; the tail
/// fit recovers γ ∈ {2, 3, 5, 8} within 0.05.
#[test]
fn criterion_7_metric_oracles() {
    let started = Instant::now();
    let failures: Vec<String> = (0..500u64)
        .into_par_iter()
        .filter_map(|round| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0000 + round);
            let n = rng.random_range(2..=200usize);
            let extra = rng.random_range(0..2 * n);
            let view = random_connected_view(n, extra, &mut rng);

            let fast = clustering_coefficients(&view);
            let (oracle_local, oracle_global) = oracle_clustering(&view);
            if (fast.avg_local - oracle_local).abs() > 1e-12
                || (fast.global - oracle_global).abs() > 1e-12
            {
                return Some(format!("round {round}: clustering mismatch"));
            }
            let fast_rd = radius_diameter(&view).expect("connected by construction");
            if fast_rd != oracle_radius_diameter(&view) {
                return Some(format!("round {round}: radius/diameter mismatch"));
            }
            None
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");

    for gamma in [2.0, 3.0, 5.0, 8.0] {
        let points: Vec<(u32, f64)> = (1..=40)
            .map(|k| (k, 1e9 * f64::from(k).powf(-gamma)))
            .collect();
        let fit = fit_power_tail_averaged(&points).expect("enough bins");
        assert!(
            (fit.exponent - gamma).abs() <= 0.05,
            "gamma {gamma} recovered as {}",
            fit.exponent
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("PASS criterion 7: 500 oracle graphs agree, γ recovery within 0.05 ({elapsed:?})");
}

/// Criterion 8: determinism and scale. Identical (config, n, seed) gives
/// byte-identical edge dumps; one full 10^6 generation plus I∪II metrics
/// (eccentricities excluded) finishes within the budget.
#[test]
fn criterion_8_determinism_and_scale() {
    let dump = |seed: u64| {
        let generated = generate(config(), 2_000, seed).expect("generation succeeds");
        let mut bytes = Vec::new();
        write_edge_list(&mut bytes, &generated.graph, seed, true).expect("in-memory write");
        bytes
    };
    assert_eq!(dump(7), dump(7), "same seed must dump identical bytes");
    assert_ne!(dump(7), dump(8), "different seeds must differ");

    let started = Instant::now();
    let seed = derive_run_seed(BASE_SEED, 1_000_000, 0);
    let generated = generate(config(), 1_000_000, seed).expect("generation succeeds");
    let view =
        level_view(&generated.graph, &[EdgeLevel::I, EdgeLevel::II]).expect("non-empty levels");
    let record = measure_view(&view, seed, false).expect("measurement succeeds");
    let elapsed = started.elapsed();
    assert_eq!(record.n, 1_000_000);
    assert!(
        connected_components(&view).count() == 1,
        "10^6 view disconnected"
    );
    assert!(
        elapsed < Duration::from_secs(300),
        "10^6 generation + metrics took {elapsed:?}, budget 5 min"
    );
    println!(
        "PASS criterion 8: byte-identical dumps; 10^6 run in {elapsed:?} (mean degree {:.2})",
        record.mean_degree
    );
}
