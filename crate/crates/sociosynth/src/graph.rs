//! Layered undirected graph assembly, finalization, and views.
//!
//! Level I materializes every household as a clique, level II every
//! sub-clique plus the caregiver and repair edges added at finalization.
//! Level III stays stored as group memberships and is only expanded to
//! cliques when a view asks for it, since one big company contributes
//! O(size^2) edges.

use std::collections::VecDeque;

use rand::Rng;
use thiserror::Error;

use crate::affiliation::AffiliationGroup;
use crate::config::DemographyConfig;
use crate::population::Population;
use crate::rng::RandomSource;
use crate::Subclique;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("level set must not be empty")]
    EmptyLevelSet,
}

/// Connection level, ordered by decreasing intimacy: I household,
/// II strong non-household, III institutional co-membership, IV accidental
/// contact (defined but never generated).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLevel {
    I,
    II,
    III,
    IV,
}

impl EdgeLevel {
    pub fn number(self) -> u8 {
        match self {
            EdgeLevel::I => 1,
            EdgeLevel::II => 2,
            EdgeLevel::III => 3,
            EdgeLevel::IV => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<EdgeLevel> {
        match n {
            1 => Some(EdgeLevel::I),
            2 => Some(EdgeLevel::II),
            3 => Some(EdgeLevel::III),
            4 => Some(EdgeLevel::IV),
            _ => None,
        }
    }
}

/// The layered graph: nodes are individual ids `0..n`, each level holds at
/// most one edge per unordered pair, no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialGraph {
    n: u32,
    level1: Vec<(u32, u32)>,
    level2: Vec<(u32, u32)>,
    groups: Vec<AffiliationGroup>,
}

impl SocialGraph {
    pub fn node_count(&self) -> usize {
        self.n as usize
    }

    /// Materialized edges of level I or II, sorted with `u < v`.
    pub fn level_edges(&self, level: EdgeLevel) -> &[(u32, u32)] {
        match level {
            EdgeLevel::I => &self.level1,
            EdgeLevel::II => &self.level2,
            _ => &[],
        }
    }

    pub fn groups(&self) -> &[AffiliationGroup] {
        &self.groups
    }

    /// Expand the level-III memberships into clique edges on demand.
    pub fn expand_level3(&self) -> Vec<(u32, u32)> {
        let mut edges = Vec::new();
        for group in &self.groups {
            push_clique(&mut edges, &group.members);
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

fn push_clique(edges: &mut Vec<(u32, u32)>, members: &[u32]) {
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            edges.push((a.min(b), a.max(b)));
        }
    }
}

/// Assemble the layered graph from the synthesis outputs.
///
/// A pure function of its inputs: level I is every household expanded to a
/// clique (partners, parent-child, and siblings all pairwise connected),
/// level II every sub-clique expanded, level III the group memberships.
pub fn assemble_graph(
    pop: &Population,
    subcliques: &[Subclique],
    groups: Vec<AffiliationGroup>,
) -> SocialGraph {
    let mut level1 = Vec::new();
    for household in &pop.households {
        push_clique(&mut level1, household);
    }
    level1.sort_unstable();
    level1.dedup();

    let mut level2 = Vec::new();
    for clique in subcliques {
        push_clique(&mut level2, &clique.members);
    }
    level2.sort_unstable();
    level2.dedup();

    SocialGraph {
        n: pop.len() as u32,
        level1,
        level2,
        groups,
    }
}

/// Outcome of graph finalization; after processing with repair enabled the
/// I∪II view has exactly one component.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentReport {
    /// Component count on I∪II after caregiver edges, before repair.
    pub components_before_repair: usize,
    /// Sizes of the non-giant components found before repair.
    pub non_giant_sizes: Vec<usize>,
    pub repair_edges_added: usize,
    pub caregiver_edges_added: usize,
    /// Caregiver or repair targets chosen outside the age window because
    /// no candidate existed even after widening.
    pub fallbacks: usize,
}

/// Uniform pick among all bucket members with age in `[lo, hi]`,
/// excluding `exclude`.
fn pick_in_age_window(
    by_age: &[Vec<u32>],
    lo: i64,
    hi: i64,
    exclude: u32,
    rng: &mut RandomSource,
) -> Option<u32> {
    let lo = lo.max(0) as usize;
    if hi < lo as i64 {
        return None;
    }
    let hi = (hi as usize).min(by_age.len() - 1);
    let range = &by_age[lo..=hi];
    let mut total: usize = range.iter().map(Vec::len).sum();
    let excluded = range.iter().flatten().any(|&id| id == exclude);
    if excluded {
        total -= 1;
    }
    if total == 0 {
        return None;
    }
    let mut pick = rng.rng().random_range(0..total);
    for bucket in range {
        for &id in bucket {
            if id == exclude {
                continue;
            }
            if pick == 0 {
                return Some(id);
            }
            pick -= 1;
        }
    }
    unreachable!("pick is bounded by the window total")
}

/// Caregiver-style target for `node`: someone younger by an amount in
/// `caregiver_gap`, widened once by ±5 years, then any adult. Returns the
/// target and whether the fallback fired.
fn caregiver_target(
    node: u32,
    age: u32,
    by_age: &[Vec<u32>],
    adults: &[u32],
    config: &DemographyConfig,
    rng: &mut RandomSource,
) -> Option<(u32, bool)> {
    let gap = config.rules.caregiver_gap;
    let (lo, hi) = (age as i64 - gap.max as i64, age as i64 - gap.min as i64);
    if let Some(target) = pick_in_age_window(by_age, lo, hi, node, rng) {
        return Some((target, false));
    }
    if let Some(target) = pick_in_age_window(by_age, lo - 5, hi + 5, node, rng) {
        return Some((target, false));
    }
    let eligible: Vec<u32> = adults.iter().copied().filter(|&a| a != node).collect();
    if eligible.is_empty() {
        return None;
    }
    let pick = rng.rng().random_range(0..eligible.len());
    Some((eligible[pick], true))
}

/// Finalization: attach a caregiver to every node isolated on I∪II, then
/// (when `repair_disconnected` is set) attach each remaining non-giant
/// component to the giant one by a caregiver-style edge from its oldest
/// member. All additions are level-II edges and are counted in the report.
pub fn finalize_caregivers(
    graph: &mut SocialGraph,
    pop: &Population,
    config: &DemographyConfig,
    rng: &mut RandomSource,
) -> ComponentReport {
    let n = graph.node_count();
    let mut report = ComponentReport::default();
    let max_age = config.pyramid.max_age() as usize;

    let mut by_age: Vec<Vec<u32>> = vec![Vec::new(); max_age + 1];
    let mut adults = Vec::new();
    for p in &pop.individuals {
        by_age[p.age as usize].push(p.id);
        if p.age >= config.rules.legal_marriage_age {
            adults.push(p.id);
        }
    }

    // Nodes isolated at entry each receive one caregiver edge.
    let mut degree = vec![0u32; n];
    for &(u, v) in graph.level1.iter().chain(graph.level2.iter()) {
        degree[u as usize] += 1;
        degree[v as usize] += 1;
    }
    let mut added = Vec::new();
    for id in 0..n as u32 {
        if degree[id as usize] > 0 {
            continue;
        }
        let age = pop.individuals[id as usize].age;
        if let Some((target, fallback)) = caregiver_target(id, age, &by_age, &adults, config, rng)
        {
            added.push((id.min(target), id.max(target)));
            report.caregiver_edges_added += 1;
            if fallback {
                report.fallbacks += 1;
            }
        }
    }
    graph.level2.extend(added.iter().copied());
    graph.level2.sort_unstable();
    graph.level2.dedup();

    // Components on I∪II after the caregiver pass.
    let view = level_view(graph, &[EdgeLevel::I, EdgeLevel::II]).expect("non-empty level set");
    let components = connected_components(&view);
    report.components_before_repair = components.count();
    if components.count() <= 1 {
        return report;
    }
    let giant = components.giant_label();
    report.non_giant_sizes = components
        .sizes
        .iter()
        .enumerate()
        .filter(|&(label, _)| label as u32 != giant)
        .map(|(_, &size)| size)
        .collect();

    if !config.rules.repair_disconnected {
        return report;
    }

    // Caregiver-style repair from each non-giant component's oldest member
    // into the giant component.
    let mut giant_by_age: Vec<Vec<u32>> = vec![Vec::new(); max_age + 1];
    let mut giant_adults = Vec::new();
    let mut giant_members = Vec::new();
    for p in &pop.individuals {
        if components.labels[p.id as usize] == giant {
            giant_by_age[p.age as usize].push(p.id);
            giant_members.push(p.id);
            if p.age >= config.rules.legal_marriage_age {
                giant_adults.push(p.id);
            }
        }
    }
    let mut oldest: Vec<Option<u32>> = vec![None; components.count()];
    for p in &pop.individuals {
        let label = components.labels[p.id as usize] as usize;
        if label as u32 == giant {
            continue;
        }
        let replace = match oldest[label] {
            None => true,
            Some(cur) => pop.individuals[cur as usize].age < p.age,
        };
        if replace {
            oldest[label] = Some(p.id);
        }
    }
    let mut repairs = Vec::new();
    for member in oldest.into_iter().flatten() {
        let age = pop.individuals[member as usize].age;
        let target =
            match caregiver_target(member, age, &giant_by_age, &giant_adults, config, rng) {
                Some((target, fallback)) => {
                    if fallback {
                        report.fallbacks += 1;
                    }
                    Some(target)
                }
                // Degenerate giant with no adults at all: link to any member.
                None => giant_members.first().copied(),
            };
        if let Some(target) = target {
            repairs.push((member.min(target), member.max(target)));
            report.repair_edges_added += 1;
        }
    }
    graph.level2.extend(repairs.iter().copied());
    graph.level2.sort_unstable();
    graph.level2.dedup();
    report
}

/// Simple undirected graph over dense node ids, CSR adjacency with every
/// neighbor list sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphView {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl GraphView {
    /// Build from deduplicated `u < v` edges.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> GraphView {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; acc];
        for &(u, v) in edges {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        GraphView { offsets, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// The simple graph whose edge set is the union of the requested levels,
/// duplicates collapsed. Level III expands memberships to cliques here.
pub fn level_view(graph: &SocialGraph, levels: &[EdgeLevel]) -> Result<GraphView, GraphError> {
    if levels.is_empty() {
        return Err(GraphError::EmptyLevelSet);
    }
    let mut edges = Vec::new();
    for level in levels {
        match level {
            EdgeLevel::I => edges.extend_from_slice(&graph.level1),
            EdgeLevel::II => edges.extend_from_slice(&graph.level2),
            EdgeLevel::III => edges.extend(graph.expand_level3()),
            EdgeLevel::IV => {}
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(GraphView::from_edges(graph.node_count(), &edges))
}

/// Connected-component labeling by breadth-first traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    /// Component label per node, labels dense in discovery order.
    pub labels: Vec<u32>,
    /// Size per label.
    pub sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Label of the largest component (smallest label on ties).
    pub fn giant_label(&self) -> u32 {
        self.sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(label, _)| label as u32)
            .unwrap_or(0)
    }
}

pub fn connected_components(view: &GraphView) -> ComponentLabeling {
    let n = view.node_count();
    let mut labels = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != u32::MAX {
            continue;
        }
        let label = sizes.len() as u32;
        let mut size = 0usize;
        labels[start] = label;
        queue.push_back(start as u32);
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &w in view.neighbors(v as usize) {
                if labels[w as usize] == u32::MAX {
                    labels[w as usize] = label;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    ComponentLabeling { labels, sizes }
}
