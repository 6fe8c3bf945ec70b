//! Triangle-based clustering coefficients.

use rayon::prelude::*;

use crate::graph::GraphView;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringCoefficients {
    /// Mean over nodes of triangles(v) / C(deg v, 2), zero for deg < 2.
    pub avg_local: f64,
    /// 3 · triangles / wedges.
    pub global: f64,
}

fn sorted_intersection_size(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Triangles incident to each node: half the summed neighbor-list
/// intersections over incident edges.
fn per_node_triangles(view: &GraphView) -> Vec<u64> {
    (0..view.node_count())
        .into_par_iter()
        .map(|v| {
            let mine = view.neighbors(v);
            let paired: u64 = mine
                .iter()
                .map(|&u| sorted_intersection_size(mine, view.neighbors(u as usize)))
                .sum();
            paired / 2
        })
        .collect()
}

pub fn clustering_coefficients(view: &GraphView) -> ClusteringCoefficients {
    let n = view.node_count();
    if n == 0 {
        return ClusteringCoefficients {
            avg_local: 0.0,
            global: 0.0,
        };
    }
    let triangles = per_node_triangles(view);
    let mut local_sum = 0.0;
    let mut triangle_total: u64 = 0;
    let mut wedge_total: u64 = 0;
    for (v, &count) in triangles.iter().enumerate() {
        let degree = view.degree(v) as u64;
        let wedges = degree * degree.saturating_sub(1) / 2;
        wedge_total += wedges;
        triangle_total += count;
        if wedges > 0 {
            local_sum += count as f64 / wedges as f64;
        }
    }
    let global = if wedge_total == 0 {
        0.0
    } else {
        // Σ_v triangles(v) counts every triangle three times, once per
        // corner, which is exactly 3·T.
        triangle_total as f64 / wedge_total as f64
    };
    ClusteringCoefficients {
        avg_local: local_sum / n as f64,
        global,
    }
}
