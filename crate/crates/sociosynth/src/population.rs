//! Population synthesis: sample individuals by age and sex, assign
//! marital status men-first, pair partners, attach children.
//!
//! The four operations run in order on one [`Population`] and one
//! [`RandomSource`]; a run is strictly sequential, so identical
//! `(config, n, seed)` yields a bitwise-identical population.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::config::{DemographyConfig, KidsRates};
use crate::rng::RandomSource;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("population size must be at least 2, got {0}")]
    PopulationTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sex {
    Male,
    Female,
}

/// Marital status; the female analogues (single woman, widow) share the
/// same five slots and the same table row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaritalStatus {
    Single,
    Married,
    Cohabiting,
    Divorced,
    Widowed,
}

impl MaritalStatus {
    pub const ALL: [MaritalStatus; 5] = [
        MaritalStatus::Single,
        MaritalStatus::Married,
        MaritalStatus::Cohabiting,
        MaritalStatus::Divorced,
        MaritalStatus::Widowed,
    ];

    pub fn index(self) -> usize {
        match self {
            MaritalStatus::Single => 0,
            MaritalStatus::Married => 1,
            MaritalStatus::Cohabiting => 2,
            MaritalStatus::Divorced => 3,
            MaritalStatus::Widowed => 4,
        }
    }

    pub fn from_index(i: usize) -> MaritalStatus {
        Self::ALL[i]
    }

    /// True for the two statuses that imply a living partner.
    pub fn is_partnered(self) -> bool {
        matches!(self, MaritalStatus::Married | MaritalStatus::Cohabiting)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub id: u32,
    pub age: u32,
    pub sex: Sex,
    pub marital: MaritalStatus,
    pub household: Option<u32>,
}

/// The synthesized population before graph assembly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    pub individuals: Vec<Individual>,
    /// (man id, woman id) per partnership; each id appears at most once.
    pub partnerships: Vec<(u32, u32)>,
    pub parent_child: Vec<(u32, u32)>,
    /// Household id → member ids, in attachment order.
    pub households: Vec<Vec<u32>>,
    /// Ids not yet placed in any household, in id order.
    pub unassigned_child_pool: Vec<u32>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    fn rebuild_pool(&mut self) {
        self.unassigned_child_pool = self
            .individuals
            .iter()
            .filter(|p| p.household.is_none())
            .map(|p| p.id)
            .collect();
    }
}

/// Step 1: draw `n` individuals from the age pyramid.
///
/// Each individual independently samples an interval by share, an age
/// uniformly within the interval, and a sex by the interval's female
/// fraction, so interval occupancies are multinomial in the shares.
pub fn synthesize_ages(
    config: &DemographyConfig,
    n: usize,
    rng: &mut RandomSource,
) -> Result<Population, SynthesisError> {
    if n < 2 {
        return Err(SynthesisError::PopulationTooSmall(n));
    }
    let pyramid = &config.pyramid;
    let interval_dist =
        WeightedIndex::new(&pyramid.share).expect("validated shares sum to one");
    let mut individuals = Vec::with_capacity(n);
    for id in 0..n {
        let interval = interval_dist.sample(rng.rng());
        let (lo, hi) = pyramid.interval_bounds(interval);
        let age = rng.rng().random_range(lo..=hi);
        let sex = if rng.rng().random_bool(pyramid.female_fraction[interval]) {
            Sex::Female
        } else {
            Sex::Male
        };
        individuals.push(Individual {
            id: id as u32,
            age,
            sex,
            marital: MaritalStatus::Single,
            household: None,
        });
    }
    let mut pop = Population {
        individuals,
        partnerships: Vec::new(),
        parent_child: Vec::new(),
        households: Vec::new(),
        unassigned_child_pool: Vec::new(),
    };
    pop.rebuild_pool();
    Ok(pop)
}

fn status_samplers(probs: &[Vec<f64>]) -> Vec<WeightedIndex<f64>> {
    probs
        .iter()
        .map(|row| WeightedIndex::new(row).expect("validated row sums to one"))
        .collect()
}

/// Step 2: sample every man's marital status from his age interval's row.
/// Men below the legal marriage age stay single regardless of the table.
pub fn assign_marital_men(pop: &mut Population, config: &DemographyConfig, rng: &mut RandomSource) {
    let samplers = status_samplers(&config.marital_men.probs);
    let legal = config.rules.legal_marriage_age;
    for person in &mut pop.individuals {
        if person.sex != Sex::Male {
            continue;
        }
        person.marital = if person.age < legal {
            MaritalStatus::Single
        } else {
            match config.marital_men.interval_of(person.age) {
                Some(i) => MaritalStatus::from_index(samplers[i].sample(rng.rng())),
                None => MaritalStatus::Single,
            }
        };
    }
}

/// How far the partner search widens around the drawn target age before
/// the man's status is downgraded.
const PARTNER_SEARCH_WIDENING: u32 = 5;

/// Step 3: pair every married or cohabiting man with a woman whose age
/// matches a drawn gap, then give the remaining women their own statuses.
///
/// Returns the number of men downgraded to single because no eligible
/// woman existed within the widening window.
pub fn form_partnerships(
    pop: &mut Population,
    config: &DemographyConfig,
    rng: &mut RandomSource,
) -> u64 {
    let legal = config.rules.legal_marriage_age;
    let max_age = config.pyramid.max_age();
    let gap_dist =
        WeightedIndex::new(&config.age_gap.gap_probs).expect("validated probs sum to one");

    // Unpaired marriage-eligible women bucketed by age.
    let mut women_by_age: Vec<Vec<u32>> = vec![Vec::new(); max_age as usize + 1];
    for person in &pop.individuals {
        if person.sex == Sex::Female && person.age >= legal {
            women_by_age[person.age as usize].push(person.id);
        }
    }

    let mut men: Vec<u32> = pop
        .individuals
        .iter()
        .filter(|p| p.sex == Sex::Male && p.marital.is_partnered())
        .map(|p| p.id)
        .collect();
    men.shuffle(rng.rng());

    let mut downgrades = 0u64;
    for man in men {
        let man_age = pop.individuals[man as usize].age;
        let gap = config.age_gap.gap_values[gap_dist.sample(rng.rng())];
        let target = man_age as i64 - gap as i64;
        let mut matched = None;
        'widen: for delta in 0..=PARTNER_SEARCH_WIDENING as i64 {
            let candidates: &[i64] = if delta == 0 {
                &[target]
            } else {
                &[target - delta, target + delta]
            };
            let mut total = 0usize;
            for &age in candidates {
                if age >= legal as i64 && age <= max_age as i64 {
                    total += women_by_age[age as usize].len();
                }
            }
            if total == 0 {
                continue;
            }
            let mut pick = rng.rng().random_range(0..total);
            for &age in candidates {
                if age < legal as i64 || age > max_age as i64 {
                    continue;
                }
                let bucket = &mut women_by_age[age as usize];
                if pick < bucket.len() {
                    matched = Some(bucket.swap_remove(pick));
                    break 'widen;
                }
                pick -= bucket.len();
            }
        }
        match matched {
            Some(woman) => {
                let status = pop.individuals[man as usize].marital;
                pop.individuals[woman as usize].marital = status;
                let household = pop.households.len() as u32;
                pop.individuals[man as usize].household = Some(household);
                pop.individuals[woman as usize].household = Some(household);
                pop.households.push(vec![man, woman]);
                pop.partnerships.push((man, woman));
            }
            None => {
                pop.individuals[man as usize].marital = MaritalStatus::Single;
                downgrades += 1;
            }
        }
    }

    // Remaining women draw from the women's table restricted to the
    // unpartnered statuses (the partnered mass is already realized by the
    // pairing above, and an unpaired woman cannot be married/cohabiting).
    let unpartnered_samplers: Vec<Option<(WeightedIndex<f64>, [usize; 3])>> = config
        .marital_women
        .probs
        .iter()
        .map(|row| {
            let statuses = [
                MaritalStatus::Single.index(),
                MaritalStatus::Divorced.index(),
                MaritalStatus::Widowed.index(),
            ];
            let weights: Vec<f64> = statuses.iter().map(|&s| row[s]).collect();
            WeightedIndex::new(&weights).ok().map(|w| (w, statuses))
        })
        .collect();
    let paired: std::collections::HashSet<u32> =
        pop.partnerships.iter().map(|&(_, w)| w).collect();
    for person in &mut pop.individuals {
        if person.sex != Sex::Female || paired.contains(&person.id) {
            continue;
        }
        person.marital = if person.age < legal {
            MaritalStatus::Single
        } else {
            match config.marital_women.interval_of(person.age) {
                Some(i) => match &unpartnered_samplers[i] {
                    Some((sampler, statuses)) => {
                        MaritalStatus::from_index(statuses[sampler.sample(rng.rng())])
                    }
                    // Row places all mass on partnered statuses.
                    None => MaritalStatus::Single,
                },
                None => MaritalStatus::Single,
            }
        };
    }
    pop.rebuild_pool();
    downgrades
}

/// Pool of not-yet-placed individuals, bucketed by age for windowed
/// uniform draws.
struct AgePool {
    by_age: Vec<Vec<u32>>,
}

impl AgePool {
    fn new(pop: &Population, max_age: u32) -> Self {
        let mut by_age: Vec<Vec<u32>> = vec![Vec::new(); max_age as usize + 1];
        for person in &pop.individuals {
            if person.household.is_none() {
                by_age[person.age as usize].push(person.id);
            }
        }
        AgePool { by_age }
    }

    /// Draw one id uniformly among pool members with age in `[lo, hi]`.
    fn draw_in_window(&mut self, lo: i64, hi: i64, rng: &mut RandomSource) -> Option<u32> {
        let lo = lo.max(0) as usize;
        if hi < lo as i64 {
            return None;
        }
        let hi = (hi as usize).min(self.by_age.len() - 1);
        let total: usize = self.by_age[lo..=hi].iter().map(Vec::len).sum();
        if total == 0 {
            return None;
        }
        let mut pick = rng.rng().random_range(0..total);
        for age in lo..=hi {
            let bucket = &mut self.by_age[age];
            if pick < bucket.len() {
                return Some(bucket.swap_remove(pick));
            }
            pick -= bucket.len();
        }
        unreachable!("pick is bounded by the bucket total")
    }

    /// Remove a specific id (used when a pool member becomes a parent).
    fn remove(&mut self, id: u32, age: u32) {
        let bucket = &mut self.by_age[age as usize];
        if let Some(pos) = bucket.iter().position(|&x| x == id) {
            bucket.swap_remove(pos);
        }
    }
}

fn sample_kid_count(
    rates: &KidsRates,
    samplers: &[WeightedIndex<f64>],
    age: u32,
    rng: &mut RandomSource,
) -> usize {
    match rates.interval_of(age) {
        Some(i) => samplers[i].sample(rng.rng()),
        None => 0,
    }
}

/// Step 4: draw a kid count per family unit and pull matching-age
/// individuals from the unassigned pool into the household.
///
/// Pairs are processed first (keyed by the woman's age), then every
/// unpartnered adult as a potential single parent, in random order. An
/// adult consumed as someone's child earlier can no longer head a family.
/// Returns the total shortfall: drawn kid slots that found no pool member
/// inside the parent−child age window.
pub fn attach_children(
    pop: &mut Population,
    config: &DemographyConfig,
    rng: &mut RandomSource,
) -> u64 {
    let gap = config.kids.parent_kid_gap;
    let max_age = config.pyramid.max_age();
    let legal = config.rules.legal_marriage_age;
    let pair_samplers = status_samplers(&config.kids.pair.probs);
    let single_man_samplers = status_samplers(&config.kids.single_man.probs);
    let single_woman_samplers = status_samplers(&config.kids.single_woman.probs);

    let mut pool = AgePool::new(pop, max_age);
    let mut shortfall = 0u64;

    let attach = |pop: &mut Population,
                      pool: &mut AgePool,
                      rng: &mut RandomSource,
                      household: u32,
                      parents: &[u32],
                      ref_age: u32,
                      count: usize|
     -> usize {
        let lo = ref_age as i64 - gap.max as i64;
        let hi = ref_age as i64 - gap.min as i64;
        let mut attached = 0;
        for _ in 0..count {
            match pool.draw_in_window(lo, hi, rng) {
                Some(child) => {
                    pop.individuals[child as usize].household = Some(household);
                    pop.households[household as usize].push(child);
                    for &parent in parents {
                        pop.parent_child.push((parent, child));
                    }
                    attached += 1;
                }
                None => break,
            }
        }
        attached
    };

    // Pairs, in formation order (already random from the pairing step).
    let partnerships = pop.partnerships.clone();
    for (man, woman) in partnerships {
        let ref_age = pop.individuals[woman as usize].age;
        let count = sample_kid_count(&config.kids.pair, &pair_samplers, ref_age, rng);
        if count == 0 {
            continue;
        }
        let household = pop.individuals[man as usize]
            .household
            .expect("partners always share a household");
        let attached = attach(
            pop,
            &mut pool,
            rng,
            household,
            &[man, woman],
            ref_age,
            count,
        );
        shortfall += (count - attached) as u64;
    }

    // Unpartnered adults as potential single parents.
    let mut singles: Vec<u32> = pop
        .individuals
        .iter()
        .filter(|p| p.household.is_none() && p.age >= legal)
        .map(|p| p.id)
        .collect();
    singles.shuffle(rng.rng());
    for single in singles {
        if pop.individuals[single as usize].household.is_some() {
            continue; // consumed as someone's child meanwhile
        }
        let (age, sex) = {
            let p = &pop.individuals[single as usize];
            (p.age, p.sex)
        };
        let (rates, samplers) = match sex {
            Sex::Male => (&config.kids.single_man, &single_man_samplers),
            Sex::Female => (&config.kids.single_woman, &single_woman_samplers),
        };
        let count = sample_kid_count(rates, samplers, age, rng);
        if count == 0 {
            continue;
        }
        let household = pop.households.len() as u32;
        pop.households.push(vec![single]);
        let attached = attach(pop, &mut pool, rng, household, &[single], age, count);
        if attached == 0 {
            // No household forms; the adult stays in the pool.
            pop.households.pop();
        } else {
            pop.individuals[single as usize].household = Some(household);
            pool.remove(single, age);
        }
        shortfall += (count - attached) as u64;
    }

    pop.rebuild_pool();
    shortfall
}
