//! Serde document schema and its mapping onto the domain types.

use serde::{Deserialize, Serialize};

use super::{
    AgeGapTable, AgePyramid, AgeSpan, CompanyGroup, CompanyGroups, ConfigError, DemographyConfig,
    GenRules, KidsRates, KidsTable, MaritalTable, SchoolBand, SchoolBands,
};

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawConfig {
    pub schema_version: u64,
    pub pyramid: RawPyramid,
    pub marital_men: RawMarital,
    pub marital_women: RawMarital,
    pub age_gap: RawAgeGap,
    pub kids: RawKids,
    pub schools: RawSchools,
    pub companies: RawCompanies,
    pub rules: RawRules,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawPyramid {
    pub borders: Vec<u32>,
    pub share: Vec<f64>,
    pub female_fraction: Vec<f64>,
    #[serde(default = "default_true")]
    pub merge_last_two: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawMarital {
    pub borders: Vec<u32>,
    pub probs: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawAgeGap {
    pub values: Vec<i32>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawKids {
    #[serde(default = "default_max_kids")]
    pub max_kids: u32,
    #[serde(default = "default_parent_kid_gap")]
    pub parent_kid_gap: [u32; 2],
    pub pair: RawKidsRates,
    pub single_man: RawKidsRates,
    pub single_woman: RawKidsRates,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawKidsRates {
    pub borders: Vec<u32>,
    pub probs: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawSchools {
    pub bands: Vec<RawBand>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawBand {
    pub age_lo: u32,
    pub age_hi: u32,
    pub mean_size: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawCompanies {
    pub micro: RawGroup,
    pub small: RawGroup,
    pub average: RawGroup,
    pub big: RawGroup,
    pub retirement_age_men: u32,
    pub retirement_age_women: u32,
    pub working_age_min: u32,
    #[serde(default = "default_employment_rate")]
    pub employment_rate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawGroup {
    pub size_range: [u32; 2],
    pub prob: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct RawRules {
    #[serde(default = "default_subclique_mean")]
    pub subclique_mean: f64,
    #[serde(default = "default_caregiver_gap")]
    pub caregiver_gap: [u32; 2],
    #[serde(default = "default_true")]
    pub repair_disconnected: bool,
    #[serde(default = "default_legal_marriage_age")]
    pub legal_marriage_age: u32,
}

fn default_true() -> bool {
    true
}

fn default_parent_kid_gap() -> [u32; 2] {
    [18, 40]
}

fn default_max_kids() -> u32 {
    6
}

fn default_caregiver_gap() -> [u32; 2] {
    [20, 40]
}

fn default_subclique_mean() -> f64 {
    3.0
}

fn default_legal_marriage_age() -> u32 {
    18
}

fn default_employment_rate() -> f64 {
    1.0
}

/// Parse the TOML text, reporting the path of the offending field on error.
pub(super) fn parse(text: &str) -> Result<RawConfig, ConfigError> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let msg = e.into_inner().message().to_string();
        if path.is_empty() || path == "." {
            ConfigError::Parse(msg)
        } else {
            ConfigError::Parse(format!("{path}: {msg}"))
        }
    })
}

pub(super) struct Loaded {
    pub config: DemographyConfig,
    pub merge_pyramid: bool,
}

pub(super) fn into_domain(raw: RawConfig) -> Loaded {
    let span = |pair: [u32; 2]| AgeSpan {
        min: pair[0],
        max: pair[1],
    };
    let marital = |m: RawMarital| MaritalTable {
        borders: m.borders,
        probs: m.probs,
    };
    let kids_rates = |r: RawKidsRates| KidsRates {
        borders: r.borders,
        probs: r.probs,
    };
    let group = |g: RawGroup| CompanyGroup {
        size_lo: g.size_range[0],
        size_hi: g.size_range[1],
        prob: g.prob,
    };
    Loaded {
        merge_pyramid: raw.pyramid.merge_last_two,
        config: DemographyConfig {
            pyramid: AgePyramid {
                borders: raw.pyramid.borders,
                share: raw.pyramid.share,
                female_fraction: raw.pyramid.female_fraction,
            },
            marital_men: marital(raw.marital_men),
            marital_women: marital(raw.marital_women),
            age_gap: AgeGapTable {
                gap_values: raw.age_gap.values,
                gap_probs: raw.age_gap.probs,
            },
            kids: KidsTable {
                max_kids: raw.kids.max_kids,
                parent_kid_gap: span(raw.kids.parent_kid_gap),
                pair: kids_rates(raw.kids.pair),
                single_man: kids_rates(raw.kids.single_man),
                single_woman: kids_rates(raw.kids.single_woman),
            },
            schools: SchoolBands {
                bands: raw
                    .schools
                    .bands
                    .into_iter()
                    .map(|b| SchoolBand {
                        age_lo: b.age_lo,
                        age_hi: b.age_hi,
                        mean_size: b.mean_size,
                    })
                    .collect(),
            },
            companies: CompanyGroups {
                micro: group(raw.companies.micro),
                small: group(raw.companies.small),
                average: group(raw.companies.average),
                big: group(raw.companies.big),
                retirement_age_men: raw.companies.retirement_age_men,
                retirement_age_women: raw.companies.retirement_age_women,
                working_age_min: raw.companies.working_age_min,
                employment_rate: raw.companies.employment_rate,
            },
            rules: GenRules {
                subclique_mean: raw.rules.subclique_mean,
                caregiver_gap: span(raw.rules.caregiver_gap),
                repair_disconnected: raw.rules.repair_disconnected,
                legal_marriage_age: raw.rules.legal_marriage_age,
            },
        },
    }
}

pub(super) fn to_document(config: &DemographyConfig) -> String {
    let span = |s: AgeSpan| [s.min, s.max];
    let marital = |m: &MaritalTable| RawMarital {
        borders: m.borders.clone(),
        probs: m.probs.clone(),
    };
    let kids_rates = |r: &KidsRates| RawKidsRates {
        borders: r.borders.clone(),
        probs: r.probs.clone(),
    };
    let group = |g: &CompanyGroup| RawGroup {
        size_range: [g.size_lo, g.size_hi],
        prob: g.prob,
    };
    let raw = RawConfig {
        schema_version: 1,
        pyramid: RawPyramid {
            borders: config.pyramid.borders.clone(),
            share: config.pyramid.share.clone(),
            female_fraction: config.pyramid.female_fraction.clone(),
            // The merge is already applied; re-loading must not merge again.
            merge_last_two: false,
        },
        marital_men: marital(&config.marital_men),
        marital_women: marital(&config.marital_women),
        age_gap: RawAgeGap {
            values: config.age_gap.gap_values.clone(),
            probs: config.age_gap.gap_probs.clone(),
        },
        kids: RawKids {
            max_kids: config.kids.max_kids,
            parent_kid_gap: span(config.kids.parent_kid_gap),
            pair: kids_rates(&config.kids.pair),
            single_man: kids_rates(&config.kids.single_man),
            single_woman: kids_rates(&config.kids.single_woman),
        },
        schools: RawSchools {
            bands: config
                .schools
                .bands
                .iter()
                .map(|b| RawBand {
                    age_lo: b.age_lo,
                    age_hi: b.age_hi,
                    mean_size: b.mean_size,
                })
                .collect(),
        },
        companies: RawCompanies {
            micro: group(&config.companies.micro),
            small: group(&config.companies.small),
            average: group(&config.companies.average),
            big: group(&config.companies.big),
            retirement_age_men: config.companies.retirement_age_men,
            retirement_age_women: config.companies.retirement_age_women,
            working_age_min: config.companies.working_age_min,
            employment_rate: config.companies.employment_rate,
        },
        rules: RawRules {
            subclique_mean: config.rules.subclique_mean,
            caregiver_gap: span(config.rules.caregiver_gap),
            repair_disconnected: config.rules.repair_disconnected,
            legal_marriage_age: config.rules.legal_marriage_age,
        },
    };
    toml::to_string(&raw).expect("config document is always serializable")
}
