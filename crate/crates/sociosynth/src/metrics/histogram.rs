//! Exact degree counts over a simple-graph view.

use std::collections::BTreeMap;

use crate::graph::GraphView;

/// Mapping degree → node count; the counts always sum to the node count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    counts: BTreeMap<u32, u64>,
    n: u64,
}

impl DegreeHistogram {
    pub fn from_counts(counts: BTreeMap<u32, u64>) -> DegreeHistogram {
        let n = counts.values().sum();
        DegreeHistogram { counts, n }
    }

    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }

    pub fn node_count(&self) -> u64 {
        self.n
    }

    /// Smallest degree carrying the maximum count.
    pub fn mode(&self) -> Option<u32> {
        let max = self.counts.values().max()?;
        self.counts
            .iter()
            .find(|(_, count)| *count == max)
            .map(|(&degree, _)| degree)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let total: f64 = self
            .counts
            .iter()
            .map(|(&degree, &count)| degree as f64 * count as f64)
            .sum();
        total / self.n as f64
    }

    pub fn max_degree(&self) -> u32 {
        self.counts.keys().max().copied().unwrap_or(0)
    }

    /// Smallest degree `d` such that at least `q` of the probability mass
    /// lies at degrees ≤ `d`.
    pub fn quantile(&self, q: f64) -> u32 {
        let threshold = (self.n as f64 * q).ceil() as u64;
        let mut acc = 0;
        for (&degree, &count) in &self.counts {
            acc += count;
            if acc >= threshold {
                return degree;
            }
        }
        self.max_degree()
    }
}

/// Exact degree histogram of a view, including degree 0 when present.
pub fn degree_histogram(view: &GraphView) -> DegreeHistogram {
    let mut counts = BTreeMap::new();
    for v in 0..view.node_count() {
        *counts.entry(view.degree(v) as u32).or_insert(0u64) += 1;
    }
    DegreeHistogram {
        counts,
        n: view.node_count() as u64,
    }
}

/// Mean count per degree across runs; degrees missing from a run count
/// as zero there. Returned sorted by degree.
pub fn average_histograms<'a, I>(histograms: I) -> Vec<(u32, f64)>
where
    I: IntoIterator<Item = &'a DegreeHistogram>,
{
    let mut totals: BTreeMap<u32, f64> = BTreeMap::new();
    let mut runs = 0usize;
    for histogram in histograms {
        runs += 1;
        for (&degree, &count) in histogram.counts() {
            *totals.entry(degree).or_insert(0.0) += count as f64;
        }
    }
    if runs == 0 {
        return Vec::new();
    }
    totals
        .into_iter()
        .map(|(degree, total)| (degree, total / runs as f64))
        .collect()
}
