//! Affiliation synthesis: schools and companies as level-III groups,
//! then the level-II sub-cliques carved inside every group.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Poisson;
use rayon::prelude::*;

use crate::config::{CompanyKind, DemographyConfig};
use crate::population::{Population, Sex};
use crate::rng::RandomSource;

/// Substream domain tag for per-group sub-clique randomness.
const SUBCLIQUE_STREAM: u64 = 0x5343_4c51;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    School { band: u32 },
    Company { group: CompanyKind },
}

impl GroupKind {
    pub fn label(&self) -> &'static str {
        match self {
            GroupKind::School { .. } => "school",
            GroupKind::Company { .. } => "company",
        }
    }
}

/// A level-III clique context: one school or one company.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffiliationGroup {
    pub id: u32,
    pub kind: GroupKind,
    pub members: Vec<u32>,
}

/// A small fully-connected subset carved from one level-III group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subclique {
    pub parent_group: u32,
    pub members: Vec<u32>,
}

/// Step 5: attach every individual aged 0..=17 to one school of their band.
///
/// Per band, the school count is `max(1, round(cohort / mean_size))` and
/// each cohort member picks a school uniformly at random. Schools that end
/// up empty are dropped.
pub fn assign_schools(
    pop: &Population,
    config: &DemographyConfig,
    rng: &mut RandomSource,
) -> Vec<AffiliationGroup> {
    let mut groups = Vec::new();
    for (band_idx, band) in config.schools.bands.iter().enumerate() {
        let cohort: Vec<u32> = pop
            .individuals
            .iter()
            .filter(|p| band.age_lo <= p.age && p.age <= band.age_hi)
            .map(|p| p.id)
            .collect();
        if cohort.is_empty() {
            continue;
        }
        let school_count = ((cohort.len() as f64 / band.mean_size).round() as usize).max(1);
        let mut schools: Vec<Vec<u32>> = vec![Vec::new(); school_count];
        for &child in &cohort {
            let pick = rng.rng().random_range(0..school_count);
            schools[pick].push(child);
        }
        for members in schools.into_iter().filter(|s| !s.is_empty()) {
            groups.push(AffiliationGroup {
                id: groups.len() as u32,
                kind: GroupKind::School {
                    band: band_idx as u32,
                },
                members,
            });
        }
    }
    groups
}

fn retirement_age(config: &DemographyConfig, sex: Sex) -> u32 {
    match sex {
        Sex::Male => config.companies.retirement_age_men,
        Sex::Female => config.companies.retirement_age_women,
    }
}

/// Step 6: assign each working-age individual a company group by the
/// configured probabilities, then pack every group's workers into
/// companies of sizes drawn uniformly from the group's range.
///
/// The last company of a group may be smaller than the range minimum
/// (the remainder); no company ever exceeds the maximum.
pub fn assign_workplaces(
    pop: &Population,
    config: &DemographyConfig,
    rng: &mut RandomSource,
) -> Vec<AffiliationGroup> {
    let companies = &config.companies;
    let group_dist = WeightedIndex::new(companies.probs()).expect("validated probs sum to one");
    let mut by_kind: [Vec<u32>; 4] = Default::default();
    for p in &pop.individuals {
        if p.age < companies.working_age_min || p.age >= retirement_age(config, p.sex) {
            continue;
        }
        if companies.employment_rate < 1.0 && !rng.rng().random_bool(companies.employment_rate) {
            continue;
        }
        by_kind[group_dist.sample(rng.rng())].push(p.id);
    }

    let mut groups = Vec::new();
    for (kind_idx, kind) in CompanyKind::ALL.iter().enumerate() {
        let spec = companies.group(*kind);
        let mut workers = std::mem::take(&mut by_kind[kind_idx]);
        workers.shuffle(rng.rng());
        let mut start = 0;
        while start < workers.len() {
            let target = rng.rng().random_range(spec.size_lo..=spec.size_hi) as usize;
            let end = (start + target).min(workers.len());
            groups.push(AffiliationGroup {
                id: groups.len() as u32,
                kind: GroupKind::Company { group: *kind },
                members: workers[start..end].to_vec(),
            });
            start = end;
        }
    }
    groups
}

/// Sample from Poisson(mean) conditioned on the result being at least 2.
fn truncated_poisson_at_least_two(dist: &Poisson<f64>, rng: &mut RandomSource) -> usize {
    for _ in 0..64 {
        let draw = dist.sample(rng.rng()) as usize;
        if draw >= 2 {
            return draw;
        }
    }
    2
}

/// Step 7: partition the members of each group into level-II sub-cliques
/// with sizes drawn from Poisson(`rules.subclique_mean`) truncated to ≥ 2.
///
/// A trailing remainder of size 1 merges into the previously carved
/// sub-clique; a group of size 1 keeps its singleton (which contributes
/// no edges). Each group draws from its own substream keyed by group id,
/// so the partition is independent of scheduling and groups can be
/// processed in parallel.
pub fn carve_subcliques(
    groups: &[AffiliationGroup],
    config: &DemographyConfig,
    rng: &RandomSource,
) -> Vec<Subclique> {
    let mean = config.rules.subclique_mean;
    groups
        .par_iter()
        .map(|group| {
            let mut stream = rng.substream(SUBCLIQUE_STREAM, group.id as u64);
            carve_one_group(group, mean, &mut stream)
        })
        .flatten_iter()
        .collect()
}

fn carve_one_group(group: &AffiliationGroup, mean: f64, rng: &mut RandomSource) -> Vec<Subclique> {
    let dist = Poisson::new(mean).expect("validated subclique mean is positive");
    let mut members = group.members.clone();
    members.shuffle(rng.rng());
    let mut cliques: Vec<Vec<u32>> = Vec::new();
    let mut start = 0;
    while start < members.len() {
        let size = truncated_poisson_at_least_two(&dist, rng);
        let end = (start + size).min(members.len());
        cliques.push(members[start..end].to_vec());
        start = end;
    }
    if cliques.len() >= 2 && cliques.last().is_some_and(|c| c.len() == 1) {
        let leftover = cliques.pop().expect("checked non-empty");
        cliques
            .last_mut()
            .expect("len was at least 2")
            .extend(leftover);
    }
    cliques
        .into_iter()
        .map(|members| Subclique {
            parent_group: group.id,
            members,
        })
        .collect()
}
