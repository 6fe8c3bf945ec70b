use super::*;

pub(crate) const EXAMPLE_CITY: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/example-city.toml"));

/// A degenerate but valid document: one pyramid interval, everyone single.
pub(crate) fn minimal_document() -> String {
    r#"
schema_version = 1

[pyramid]
borders = [95]
share = [1.0]
female_fraction = [0.5]

[marital_men]
borders = [95]
probs = [[1.0, 0.0, 0.0, 0.0, 0.0]]

[marital_women]
borders = [95]
probs = [[1.0, 0.0, 0.0, 0.0, 0.0]]

[age_gap]
values = [0]
probs = [1.0]

[kids]
max_kids = 0

[kids.pair]
borders = [95]
probs = [[1.0]]

[kids.single_man]
borders = [95]
probs = [[1.0]]

[kids.single_woman]
borders = [95]
probs = [[1.0]]

[schools]
bands = [{ age_lo = 0, age_hi = 17, mean_size = 30.0 }]

[companies]
retirement_age_men = 65
retirement_age_women = 60
working_age_min = 18

[companies.micro]
size_range = [1, 9]
prob = 1.0

[companies.small]
size_range = [10, 49]
prob = 0.0

[companies.average]
size_range = [50, 249]
prob = 0.0

[companies.big]
size_range = [250, 1000]
prob = 0.0

[rules]
"#
    .to_string()
}

#[test]
fn example_city_loads_and_merges_pyramid() {
    let config = load_config(EXAMPLE_CITY).unwrap();
    // 13 raw intervals merge down to 12; the merged one spans (75, 95].
    assert_eq!(config.pyramid.interval_count(), 12);
    let last = config.pyramid.interval_count() - 1;
    assert_eq!(config.pyramid.interval_bounds(last), (76, 95));
    let share_sum: f64 = config.pyramid.share.iter().sum();
    assert!((share_sum - 1.0).abs() < 1e-9);
    // Mass-weighted female fraction of the merged (75,85] + (85,95] pair.
    let expected = (0.615 * 0.050 + 0.680 * 0.015) / 0.065;
    assert!((config.pyramid.female_fraction[last] - expected).abs() < 1e-12);
}

#[test]
fn twelve_border_pyramid_merges_to_eleven_intervals() {
    // Borders straight from the reference interval list.
    let doc = minimal_document().replace(
        "borders = [95]\nshare = [1.0]\nfemale_fraction = [0.5]",
        "borders = [2, 6, 12, 15, 18, 24, 34, 44, 54, 64, 75, 95]\n\
         share = [0.02, 0.04, 0.06, 0.03, 0.03, 0.08, 0.16, 0.15, 0.12, 0.13, 0.12, 0.06]\n\
         female_fraction = [0.49, 0.49, 0.49, 0.49, 0.49, 0.50, 0.50, 0.50, 0.52, 0.53, 0.57, 0.64]",
    );
    let config = load_config(&doc).unwrap();
    assert_eq!(config.pyramid.interval_count(), 11);
    let last = config.pyramid.interval_count() - 1;
    assert_eq!(config.pyramid.interval_bounds(last), (65, 95));
    assert!((config.pyramid.share[last] - 0.18).abs() < 1e-12);
    let share_sum: f64 = config.pyramid.share.iter().sum();
    assert!((share_sum - 1.0).abs() < 1e-9);
}

#[test]
fn merge_preserves_total_mass() {
    let mut pyramid = AgePyramid {
        borders: vec![10, 20, 30],
        share: vec![0.5, 0.3, 0.2],
        female_fraction: vec![0.4, 0.5, 0.6],
    };
    pyramid.merge_last_two();
    assert_eq!(pyramid.borders, vec![10, 30]);
    let sum: f64 = pyramid.share.iter().sum();
    assert!((sum - 1.0).abs() < 1e-9);
    assert!((pyramid.share[1] - 0.5).abs() < 1e-12);
}

#[test]
fn shares_not_summing_to_one_name_the_field() {
    let doc = EXAMPLE_CITY.replace(
        "share = [0.025, 0.035, 0.055, 0.030, 0.030, 0.070, 0.165, 0.160, 0.120, 0.140, 0.105, 0.050, 0.015]",
        "share = [0.025, 0.035, 0.055, 0.030, 0.030, 0.070, 0.165, 0.160, 0.120, 0.140, 0.105, 0.050, 0.045]",
    );
    match load_config(&doc) {
        Err(ConfigError::Invalid(violations)) => {
            assert!(violations.iter().any(|v| v.path == "pyramid.share"), "{violations:?}");
        }
        other => panic!("expected validation failure, got {other:?}"),
    }
}

#[test]
fn minimal_document_is_valid() {
    let config = load_config(&minimal_document()).unwrap();
    assert_eq!(config.pyramid.interval_count(), 1);
    assert_eq!(config.pyramid.interval_bounds(0), (0, 95));
    assert!(validate(&config).is_empty());
}

#[test]
fn missing_table_reports_path() {
    let doc = minimal_document().replace("[age_gap]\nvalues = [0]\nprobs = [1.0]\n", "");
    match load_config(&doc) {
        Err(ConfigError::Parse(msg)) => assert!(msg.contains("age_gap"), "{msg}"),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn missing_field_reports_path() {
    let doc = minimal_document().replace("female_fraction = [0.5]\n", "");
    match load_config(&doc) {
        Err(ConfigError::Parse(msg)) => assert!(msg.contains("female_fraction") || msg.contains("pyramid"), "{msg}"),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn schema_version_is_mandatory() {
    let doc = minimal_document().replace("schema_version = 1", "");
    assert!(matches!(load_config(&doc), Err(ConfigError::Parse(_))));
    let doc = minimal_document().replace("schema_version = 1", "schema_version = 2");
    assert!(matches!(load_config(&doc), Err(ConfigError::SchemaVersion(2))));
}

#[test]
fn inverted_parent_kid_gap_is_flagged() {
    let doc = minimal_document().replace("max_kids = 0", "max_kids = 0\nparent_kid_gap = [40, 18]");
    match load_config(&doc) {
        Err(ConfigError::Invalid(violations)) => {
            assert!(violations
                .iter()
                .any(|v| v.path == "kids.parent_kid_gap" && v.message.contains("empty")));
        }
        other => panic!("expected validation failure, got {other:?}"),
    }
}

#[test]
fn company_probs_summing_to_one_pass() {
    let doc = minimal_document()
        .replace("size_range = [1, 9]\nprob = 1.0", "size_range = [1, 9]\nprob = 0.5")
        .replace("size_range = [10, 49]\nprob = 0.0", "size_range = [10, 49]\nprob = 0.2")
        .replace("size_range = [50, 249]\nprob = 0.0", "size_range = [50, 249]\nprob = 0.2")
        .replace("size_range = [250, 1000]\nprob = 0.0", "size_range = [250, 1000]\nprob = 0.1");
    let config = load_config(&doc).unwrap();
    assert!(validate(&config).is_empty());
}

#[test]
fn underage_marriage_mass_is_flagged() {
    // Ages 0..=15 with married probability 0.3 violate the legal-age rule.
    let doc = minimal_document().replace(
        "[marital_men]\nborders = [95]\nprobs = [[1.0, 0.0, 0.0, 0.0, 0.0]]",
        "[marital_men]\nborders = [15, 95]\nprobs = [[0.7, 0.3, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0, 0.0]]",
    );
    match load_config(&doc) {
        Err(ConfigError::Invalid(violations)) => {
            assert!(violations.iter().any(|v| v.path.starts_with("marital_men")), "{violations:?}");
        }
        other => panic!("expected validation failure, got {other:?}"),
    }
}

#[test]
fn overlapping_company_ranges_are_flagged() {
    let doc = minimal_document().replace("size_range = [10, 49]", "size_range = [5, 49]");
    match load_config(&doc) {
        Err(ConfigError::Invalid(violations)) => {
            assert!(violations.iter().any(|v| v.message.contains("overlaps")), "{violations:?}");
        }
        other => panic!("expected validation failure, got {other:?}"),
    }
}

#[test]
fn roundtrip_is_identity() {
    for doc in [EXAMPLE_CITY.to_string(), minimal_document()] {
        let config = load_config(&doc).unwrap();
        let reloaded = load_config(&serialize_config(&config)).unwrap();
        assert_eq!(config, reloaded);
    }
}

#[test]
fn loaded_configs_validate_clean() {
    for doc in [EXAMPLE_CITY.to_string(), minimal_document()] {
        let config = load_config(&doc).unwrap();
        assert!(validate(&config).is_empty());
    }
}

#[test]
fn interval_lookups() {
    let config = load_config(EXAMPLE_CITY).unwrap();
    assert_eq!(config.pyramid.interval_of(0), Some(0));
    assert_eq!(config.pyramid.interval_of(2), Some(0));
    assert_eq!(config.pyramid.interval_of(3), Some(1));
    assert_eq!(config.pyramid.interval_of(95), Some(11));
    assert_eq!(config.pyramid.interval_of(96), None);
    assert_eq!(config.marital_men.interval_of(17), Some(0));
    assert_eq!(config.marital_men.interval_of(18), Some(1));
}
