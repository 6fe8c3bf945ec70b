//! Statistical input tables that parameterize graph generation.
//!
//! All tables are external inputs loaded from a single TOML document
//! (see `docs/config-schema.md` for the schema reference). A loaded
//! [`DemographyConfig`] is immutable and safe to share across concurrent
//! generation runs.

mod raw;
mod validate;

pub use validate::{validate, Violation};

use thiserror::Error;

/// Number of marital statuses: single, married, cohabiting, divorced, widowed.
pub const MARITAL_STATUS_COUNT: usize = 5;

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Malformed document or missing/mistyped field; message carries the field path.
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("unsupported schema_version {0} (expected 1)")]
    SchemaVersion(u64),
    /// The document parsed but one or more table invariants do not hold.
    #[error("invalid config: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Closed integer interval, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgeSpan {
    pub min: u32,
    pub max: u32,
}

impl AgeSpan {
    pub fn contains(&self, value: u32) -> bool {
        self.min <= value && value <= self.max
    }

    pub fn is_empty(&self) -> bool {
        self.min > self.max
    }
}

/// Index of the age interval containing `age`, for interval borders
/// `[b0, b1, ..]` meaning `[0, b0], (b0, b1], ..`.
pub(crate) fn interval_index(borders: &[u32], age: u32) -> Option<usize> {
    let idx = borders.partition_point(|&b| b < age);
    (idx < borders.len()).then_some(idx)
}

/// Inclusive `(lo, hi)` age bounds of interval `i`.
pub(crate) fn interval_bounds(borders: &[u32], i: usize) -> (u32, u32) {
    let lo = if i == 0 { 0 } else { borders[i - 1] + 1 };
    (lo, borders[i])
}

/// Per-age-interval population shares and female fractions.
///
/// Interval `i` covers ages `(borders[i-1], borders[i]]`; the first
/// interval starts at age 0. Loading merges the last two raw intervals
/// (shares added, female fraction mass-weighted) unless the document
/// sets `pyramid.merge_last_two = false`.
#[derive(Debug, Clone, PartialEq)]
pub struct AgePyramid {
    pub borders: Vec<u32>,
    pub share: Vec<f64>,
    pub female_fraction: Vec<f64>,
}

impl AgePyramid {
    pub fn interval_count(&self) -> usize {
        self.borders.len()
    }

    pub fn interval_of(&self, age: u32) -> Option<usize> {
        interval_index(&self.borders, age)
    }

    pub fn interval_bounds(&self, i: usize) -> (u32, u32) {
        interval_bounds(&self.borders, i)
    }

    pub fn max_age(&self) -> u32 {
        self.borders.last().copied().unwrap_or(0)
    }

    pub(crate) fn merge_last_two(&mut self) {
        let k = self.borders.len();
        if k < 2 || self.share.len() != k || self.female_fraction.len() != k {
            return;
        }
        let (s_a, s_b) = (self.share[k - 2], self.share[k - 1]);
        let (f_a, f_b) = (self.female_fraction[k - 2], self.female_fraction[k - 1]);
        let s = s_a + s_b;
        let f = if s > 0.0 {
            (f_a * s_a + f_b * s_b) / s
        } else {
            0.5 * (f_a + f_b)
        };
        self.borders.remove(k - 2);
        self.share.truncate(k - 2);
        self.share.push(s);
        self.female_fraction.truncate(k - 2);
        self.female_fraction.push(f);
    }
}

/// Per-age-interval probability rows over the five marital statuses,
/// in order `[single, married, cohabiting, divorced, widowed]`.
/// Borders are independent of the age pyramid's.
#[derive(Debug, Clone, PartialEq)]
pub struct MaritalTable {
    pub borders: Vec<u32>,
    pub probs: Vec<Vec<f64>>,
}

impl MaritalTable {
    pub fn interval_of(&self, age: u32) -> Option<usize> {
        interval_index(&self.borders, age)
    }

    pub fn interval_bounds(&self, i: usize) -> (u32, u32) {
        interval_bounds(&self.borders, i)
    }
}

/// Distribution of signed partner age differences (man age − woman age).
#[derive(Debug, Clone, PartialEq)]
pub struct AgeGapTable {
    pub gap_values: Vec<i32>,
    pub gap_probs: Vec<f64>,
}

/// Family kind a kids row applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Pair,
    SingleMan,
    SingleWoman,
}

/// Kid-count probability rows for one family kind, keyed by the
/// reference parent's age interval. Each row has `max_kids + 1` entries
/// for counts `0..=max_kids`.
#[derive(Debug, Clone, PartialEq)]
pub struct KidsRates {
    pub borders: Vec<u32>,
    pub probs: Vec<Vec<f64>>,
}

impl KidsRates {
    pub fn interval_of(&self, age: u32) -> Option<usize> {
        interval_index(&self.borders, age)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KidsTable {
    pub max_kids: u32,
    /// Allowed parent−child age difference, default `[18, 40]`.
    pub parent_kid_gap: AgeSpan,
    pub pair: KidsRates,
    pub single_man: KidsRates,
    pub single_woman: KidsRates,
}

impl KidsTable {
    pub fn rates(&self, kind: FamilyKind) -> &KidsRates {
        match kind {
            FamilyKind::Pair => &self.pair,
            FamilyKind::SingleMan => &self.single_man,
            FamilyKind::SingleWoman => &self.single_woman,
        }
    }
}

/// One school age band with its mean school size.
#[derive(Debug, Clone, PartialEq)]
pub struct SchoolBand {
    pub age_lo: u32,
    pub age_hi: u32,
    pub mean_size: f64,
}

/// School bands covering ages 0..=17 without gaps or overlaps.
#[derive(Debug, Clone, PartialEq)]
pub struct SchoolBands {
    pub bands: Vec<SchoolBand>,
}

impl SchoolBands {
    pub fn band_of(&self, age: u32) -> Option<usize> {
        self.bands
            .iter()
            .position(|b| b.age_lo <= age && age <= b.age_hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompanyKind {
    Micro,
    Small,
    Average,
    Big,
}

impl CompanyKind {
    pub const ALL: [CompanyKind; 4] = [
        CompanyKind::Micro,
        CompanyKind::Small,
        CompanyKind::Average,
        CompanyKind::Big,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CompanyKind::Micro => "micro",
            CompanyKind::Small => "small",
            CompanyKind::Average => "average",
            CompanyKind::Big => "big",
        }
    }
}

/// Employee-count interval and assignment probability for one company group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompanyGroup {
    pub size_lo: u32,
    pub size_hi: u32,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompanyGroups {
    pub micro: CompanyGroup,
    pub small: CompanyGroup,
    pub average: CompanyGroup,
    pub big: CompanyGroup,
    pub retirement_age_men: u32,
    pub retirement_age_women: u32,
    pub working_age_min: u32,
    /// Fraction of the working-age population that is employed. Default 1.0.
    pub employment_rate: f64,
}

impl CompanyGroups {
    pub fn group(&self, kind: CompanyKind) -> &CompanyGroup {
        match kind {
            CompanyKind::Micro => &self.micro,
            CompanyKind::Small => &self.small,
            CompanyKind::Average => &self.average,
            CompanyKind::Big => &self.big,
        }
    }

    pub fn probs(&self) -> [f64; 4] {
        [
            self.micro.prob,
            self.small.prob,
            self.average.prob,
            self.big.prob,
        ]
    }
}

/// Knobs for sub-clique carving and graph finalization.
#[derive(Debug, Clone, PartialEq)]
pub struct GenRules {
    /// Mean of the Poisson sub-clique size distribution, default 3.0.
    pub subclique_mean: f64,
    /// Age range a caregiver must be younger by, default `[20, 40]`.
    pub caregiver_gap: AgeSpan,
    /// Attach remaining non-giant components to the giant one, default true.
    pub repair_disconnected: bool,
    /// Minimum age for marriage/cohabitation, default 18.
    pub legal_marriage_age: u32,
}

impl Default for GenRules {
    fn default() -> Self {
        GenRules {
            subclique_mean: 3.0,
            caregiver_gap: AgeSpan { min: 20, max: 40 },
            repair_disconnected: true,
            legal_marriage_age: 18,
        }
    }
}

/// The complete, validated bundle of statistical input tables.
#[derive(Debug, Clone, PartialEq)]
pub struct DemographyConfig {
    pub pyramid: AgePyramid,
    pub marital_men: MaritalTable,
    pub marital_women: MaritalTable,
    pub age_gap: AgeGapTable,
    pub kids: KidsTable,
    pub schools: SchoolBands,
    pub companies: CompanyGroups,
    pub rules: GenRules,
}

/// Parse, merge, and validate a configuration document.
///
/// The returned config already has the last-two-interval pyramid merge
/// applied. Documents that parse but violate a table invariant are
/// rejected with [`ConfigError::Invalid`] carrying every violation.
pub fn load_config(text: &str) -> Result<DemographyConfig, ConfigError> {
    let raw = raw::parse(text)?;
    if raw.schema_version != 1 {
        return Err(ConfigError::SchemaVersion(raw.schema_version));
    }
    let mut config = raw::into_domain(raw);
    if config.merge_pyramid {
        config.config.pyramid.merge_last_two();
    }
    let config = config.config;
    let violations = validate(&config);
    if violations.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError::Invalid(violations))
    }
}

/// Serialize a config back to a TOML document.
///
/// The emitted document sets `pyramid.merge_last_two = false` because the
/// merge has already been applied, so `load_config(serialize_config(c)) == c`.
pub fn serialize_config(config: &DemographyConfig) -> String {
    raw::to_document(config)
}

#[cfg(test)]
pub(crate) mod tests;
