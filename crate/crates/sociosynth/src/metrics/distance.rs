//! Exact radius and diameter via repeated BFS sweeps that refine
//! per-node eccentricity bounds, so small-world instances finish after a
//! handful of sweeps instead of an all-pairs traversal.
//!
//! After a sweep from `v` with exact eccentricity `e`, every node `u` at
//! distance `d` satisfies `max(d, e − d) ≤ ecc(u) ≤ e + d`. A node whose
//! bounds can no longer move the diameter lower bound or the radius upper
//! bound is dropped from the candidate set; the loop ends when the set is
//! empty, and both extremes are then exact.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::GraphView;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DistanceError {
    #[error("radius/diameter require a connected non-empty graph")]
    Disconnected,
}

/// BFS from `source`; fills `dist` and returns (eccentricity, visited).
fn bfs(view: &GraphView, source: usize, dist: &mut [u32], queue: &mut VecDeque<u32>) -> (u32, usize) {
    dist.fill(u32::MAX);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source as u32);
    let mut eccentricity = 0;
    let mut visited = 0;
    while let Some(v) = queue.pop_front() {
        visited += 1;
        let next = dist[v as usize] + 1;
        for &w in view.neighbors(v as usize) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = next;
                eccentricity = eccentricity.max(next);
                queue.push_back(w);
            }
        }
    }
    (eccentricity, visited)
}

/// Exact (radius, diameter) of a connected view.
pub fn radius_diameter(view: &GraphView) -> Result<(u32, u32), DistanceError> {
    let n = view.node_count();
    if n == 0 {
        return Err(DistanceError::Disconnected);
    }
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut lower = vec![0u32; n];
    let mut upper = vec![u32::MAX; n];
    let mut active = vec![true; n];
    let mut active_count = n;

    let mut diameter_low = 0u32;
    let mut radius_high = u32::MAX;
    let mut select_high = true;
    let mut current = (0..n).max_by_key(|&v| view.degree(v)).expect("n > 0");
    let mut first = true;

    while active_count > 0 {
        let (ecc, visited) = bfs(view, current, &mut dist, &mut queue);
        if first {
            if visited < n {
                return Err(DistanceError::Disconnected);
            }
            first = false;
        }
        diameter_low = diameter_low.max(ecc);
        radius_high = radius_high.min(ecc);
        if active[current] {
            active[current] = false;
            active_count -= 1;
        }
        for v in 0..n {
            if !active[v] {
                continue;
            }
            let d = dist[v];
            lower[v] = lower[v].max(d.max(ecc - d));
            upper[v] = upper[v].min(ecc + d);
            if lower[v] == upper[v] {
                diameter_low = diameter_low.max(lower[v]);
                radius_high = radius_high.min(lower[v]);
                active[v] = false;
                active_count -= 1;
            } else if upper[v] <= diameter_low && lower[v] >= radius_high {
                active[v] = false;
                active_count -= 1;
            }
        }
        if active_count == 0 {
            break;
        }
        // Alternate between chasing the diameter (largest upper bound)
        // and the radius (smallest lower bound); break ties by degree.
        current = if select_high {
            (0..n)
                .filter(|&v| active[v])
                .max_by_key(|&v| (upper[v], view.degree(v)))
                .expect("active set is non-empty")
        } else {
            (0..n)
                .filter(|&v| active[v])
                .min_by_key(|&v| (lower[v], std::cmp::Reverse(view.degree(v))))
                .expect("active set is non-empty")
        };
        select_high = !select_high;
    }
    Ok((radius_high, diameter_low))
}
