//! Invariant checks over a loaded config. Violations are data, not errors.

use std::fmt;

use super::{DemographyConfig, KidsRates, MaritalTable, MARITAL_STATUS_COUNT};

const SUM_TOLERANCE: f64 = 1e-9;

/// One invariant violation, with the path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Check every table invariant; an empty report means the config is valid.
pub fn validate(config: &DemographyConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    check_pyramid(config, &mut out);
    check_marital(&config.marital_men, "marital_men", config, &mut out);
    check_marital(&config.marital_women, "marital_women", config, &mut out);
    check_age_gap(config, &mut out);
    check_kids(config, &mut out);
    check_schools(config, &mut out);
    check_companies(config, &mut out);
    check_rules(config, &mut out);
    out
}

fn check_strictly_increasing(borders: &[u32], path: &str, out: &mut Vec<Violation>) {
    if borders.is_empty() {
        out.push(Violation::new(path, "must not be empty"));
        return;
    }
    if borders.windows(2).any(|w| w[0] >= w[1]) {
        out.push(Violation::new(path, "borders must be strictly increasing"));
    }
}

fn check_prob_vector(probs: &[f64], path: &str, out: &mut Vec<Violation>) {
    if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
        out.push(Violation::new(path, "probabilities must be finite and non-negative"));
        return;
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        out.push(Violation::new(
            path,
            format!("probabilities sum to {sum}, expected 1"),
        ));
    }
}

fn check_pyramid(config: &DemographyConfig, out: &mut Vec<Violation>) {
    let p = &config.pyramid;
    check_strictly_increasing(&p.borders, "pyramid.borders", out);
    if p.share.len() != p.borders.len() {
        out.push(Violation::new(
            "pyramid.share",
            format!(
                "expected {} entries (one per interval), found {}",
                p.borders.len(),
                p.share.len()
            ),
        ));
    }
    if p.female_fraction.len() != p.borders.len() {
        out.push(Violation::new(
            "pyramid.female_fraction",
            format!(
                "expected {} entries (one per interval), found {}",
                p.borders.len(),
                p.female_fraction.len()
            ),
        ));
    }
    check_prob_vector(&p.share, "pyramid.share", out);
    if p.female_fraction
        .iter()
        .any(|&f| !(0.0..=1.0).contains(&f))
    {
        out.push(Violation::new(
            "pyramid.female_fraction",
            "entries must lie in [0, 1]",
        ));
    }
}

fn check_marital(
    table: &MaritalTable,
    path: &str,
    config: &DemographyConfig,
    out: &mut Vec<Violation>,
) {
    check_strictly_increasing(&table.borders, &format!("{path}.borders"), out);
    if table.probs.len() != table.borders.len() {
        out.push(Violation::new(
            format!("{path}.probs"),
            format!(
                "expected {} rows (one per interval), found {}",
                table.borders.len(),
                table.probs.len()
            ),
        ));
        return;
    }
    let legal = config.rules.legal_marriage_age;
    for (i, row) in table.probs.iter().enumerate() {
        let row_path = format!("{path}.probs[{i}]");
        if row.len() != MARITAL_STATUS_COUNT {
            out.push(Violation::new(
                &row_path,
                format!("expected {MARITAL_STATUS_COUNT} entries, found {}", row.len()),
            ));
            continue;
        }
        check_prob_vector(row, &row_path, out);
        let (_, hi) = table.interval_bounds(i);
        if hi < legal && (row[0] - 1.0).abs() > SUM_TOLERANCE {
            out.push(Violation::new(
                &row_path,
                format!(
                    "interval ends at age {hi}, below the legal marriage age {legal}; \
                     all probability mass must be on the single status"
                ),
            ));
        }
    }
    if table.borders.last().copied().unwrap_or(0) < config.pyramid.max_age() {
        out.push(Violation::new(
            format!("{path}.borders"),
            format!(
                "must cover every pyramid age (last border {} < pyramid max {})",
                table.borders.last().copied().unwrap_or(0),
                config.pyramid.max_age()
            ),
        ));
    }
}

fn check_age_gap(config: &DemographyConfig, out: &mut Vec<Violation>) {
    let t = &config.age_gap;
    if t.gap_values.is_empty() {
        out.push(Violation::new("age_gap.values", "must not be empty"));
        return;
    }
    let mut sorted = t.gap_values.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        out.push(Violation::new("age_gap.values", "values must be distinct"));
    }
    if t.gap_probs.len() != t.gap_values.len() {
        out.push(Violation::new(
            "age_gap.probs",
            format!(
                "expected {} entries, found {}",
                t.gap_values.len(),
                t.gap_probs.len()
            ),
        ));
        return;
    }
    check_prob_vector(&t.gap_probs, "age_gap.probs", out);
}

fn check_kids_rates(
    rates: &KidsRates,
    path: &str,
    max_kids: u32,
    pyramid_max: u32,
    out: &mut Vec<Violation>,
) {
    check_strictly_increasing(&rates.borders, &format!("{path}.borders"), out);
    if rates.probs.len() != rates.borders.len() {
        out.push(Violation::new(
            format!("{path}.probs"),
            format!(
                "expected {} rows (one per interval), found {}",
                rates.borders.len(),
                rates.probs.len()
            ),
        ));
        return;
    }
    let want = max_kids as usize + 1;
    for (i, row) in rates.probs.iter().enumerate() {
        let row_path = format!("{path}.probs[{i}]");
        if row.len() != want {
            out.push(Violation::new(
                &row_path,
                format!("expected {want} entries (counts 0..={max_kids}), found {}", row.len()),
            ));
            continue;
        }
        check_prob_vector(row, &row_path, out);
    }
    if rates.borders.last().copied().unwrap_or(0) < pyramid_max {
        out.push(Violation::new(
            format!("{path}.borders"),
            format!(
                "must cover every pyramid age (last border {} < pyramid max {})",
                rates.borders.last().copied().unwrap_or(0),
                pyramid_max
            ),
        ));
    }
}

fn check_kids(config: &DemographyConfig, out: &mut Vec<Violation>) {
    let k = &config.kids;
    if k.parent_kid_gap.is_empty() {
        out.push(Violation::new("kids.parent_kid_gap", "empty interval"));
    }
    if k.parent_kid_gap.min < 16 {
        out.push(Violation::new(
            "kids.parent_kid_gap",
            format!("minimum gap {} is below 16 years", k.parent_kid_gap.min),
        ));
    }
    let pyramid_max = config.pyramid.max_age();
    check_kids_rates(&k.pair, "kids.pair", k.max_kids, pyramid_max, out);
    check_kids_rates(&k.single_man, "kids.single_man", k.max_kids, pyramid_max, out);
    check_kids_rates(
        &k.single_woman,
        "kids.single_woman",
        k.max_kids,
        pyramid_max,
        out,
    );
}

fn check_schools(config: &DemographyConfig, out: &mut Vec<Violation>) {
    let bands = &config.schools.bands;
    if bands.is_empty() {
        out.push(Violation::new("schools.bands", "must not be empty"));
        return;
    }
    let mut expected_lo = 0;
    for (i, band) in bands.iter().enumerate() {
        let path = format!("schools.bands[{i}]");
        if band.age_lo > band.age_hi {
            out.push(Violation::new(&path, "age_lo exceeds age_hi"));
            return;
        }
        if band.age_lo != expected_lo {
            out.push(Violation::new(
                &path,
                format!("bands must tile 0..=17; expected age_lo {expected_lo}, found {}", band.age_lo),
            ));
            return;
        }
        if band.mean_size < 2.0 {
            out.push(Violation::new(
                format!("{path}.mean_size"),
                "mean school size must be at least 2",
            ));
        }
        expected_lo = band.age_hi + 1;
    }
    if expected_lo != 18 {
        out.push(Violation::new(
            "schools.bands",
            format!("bands must cover ages 0..=17; coverage ends at {}", expected_lo as i64 - 1),
        ));
    }
}

fn check_companies(config: &DemographyConfig, out: &mut Vec<Violation>) {
    let c = &config.companies;
    check_prob_vector(&c.probs(), "companies", out);
    let mut ranges = Vec::new();
    for kind in super::CompanyKind::ALL {
        let g = c.group(kind);
        let path = format!("companies.{}.size_range", kind.name());
        if g.size_lo < 1 {
            out.push(Violation::new(&path, "lower bound must be at least 1"));
        }
        if g.size_lo > g.size_hi {
            out.push(Violation::new(&path, "empty interval"));
        }
        ranges.push((g.size_lo, g.size_hi, kind.name()));
    }
    for i in 0..ranges.len() {
        for j in (i + 1)..ranges.len() {
            let (alo, ahi, aname) = ranges[i];
            let (blo, bhi, bname) = ranges[j];
            if alo <= bhi && blo <= ahi {
                out.push(Violation::new(
                    format!("companies.{bname}.size_range"),
                    format!("overlaps companies.{aname}.size_range"),
                ));
            }
        }
    }
    if c.retirement_age_men <= c.working_age_min {
        out.push(Violation::new(
            "companies.retirement_age_men",
            "must exceed working_age_min",
        ));
    }
    if c.retirement_age_women <= c.working_age_min {
        out.push(Violation::new(
            "companies.retirement_age_women",
            "must exceed working_age_min",
        ));
    }
    if !(0.0..=1.0).contains(&c.employment_rate) {
        out.push(Violation::new(
            "companies.employment_rate",
            "must lie in [0, 1]",
        ));
    }
}

fn check_rules(config: &DemographyConfig, out: &mut Vec<Violation>) {
    let r = &config.rules;
    if !r.subclique_mean.is_finite() || r.subclique_mean <= 0.0 {
        out.push(Violation::new("rules.subclique_mean", "must be positive"));
    }
    if r.caregiver_gap.is_empty() {
        out.push(Violation::new("rules.caregiver_gap", "empty interval"));
    }
    if r.caregiver_gap.min < 18 {
        out.push(Violation::new(
            "rules.caregiver_gap",
            format!("minimum gap {} is below 18 years", r.caregiver_gap.min),
        ));
    }
}
