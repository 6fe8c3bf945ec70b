//! Structural graph measurements: degree histograms with power-law tail
//! fits, clustering coefficients, and exact radius/diameter.

mod clustering;
mod distance;
mod histogram;
mod power_fit;

pub use clustering::{clustering_coefficients, ClusteringCoefficients};
pub use distance::{radius_diameter, DistanceError};
pub use histogram::{average_histograms, degree_histogram, DegreeHistogram};
pub use power_fit::{fit_power_tail, fit_power_tail_averaged, FitError, PowerFit};

use crate::graph::GraphView;

/// Measured quantities of one generated graph (the I∪II view unless a
/// caller measures something else).
#[derive(Debug, Clone)]
pub struct MetricsRecord {
    pub n: usize,
    pub seed: u64,
    pub histogram: DegreeHistogram,
    pub mean_degree: f64,
    /// Absent when the histogram has too few tail bins to fit.
    pub tail: Option<PowerFit>,
    /// Absent above the eccentricity size cutoff.
    pub radius: Option<u32>,
    pub diameter: Option<u32>,
    pub avg_local_clustering: f64,
    pub global_transitivity: f64,
    /// Repair edges added at finalization; absent when analyzing a dump
    /// that carries no generation report.
    pub repair_edges: Option<u64>,
}

/// Measure a view. Eccentricities are computed only when `eccentricity`
/// is set; a disconnected view then surfaces as an error.
pub fn measure_view(
    view: &GraphView,
    seed: u64,
    eccentricity: bool,
) -> Result<MetricsRecord, DistanceError> {
    let histogram = degree_histogram(view);
    let mean_degree = histogram.mean_degree();
    let tail = fit_power_tail(&histogram).ok();
    let (radius, diameter) = if eccentricity {
        let (r, d) = radius_diameter(view)?;
        (Some(r), Some(d))
    } else {
        (None, None)
    };
    let coefficients = clustering_coefficients(view);
    Ok(MetricsRecord {
        n: view.node_count(),
        seed,
        histogram,
        mean_degree,
        tail,
        radius,
        diameter,
        avg_local_clustering: coefficients.avg_local,
        global_transitivity: coefficients.global,
        repair_edges: None,
    })
}
