//! Edge-list dumps are read back by the analyze command; parsing
//! arbitrary bytes must never panic, and accepted dumps must satisfy the
//! format invariants the rest of the pipeline relies on.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sociosynth::graph::EdgeLevel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(dump) = sociosynth::dump::parse_edge_list(text) {
        for &(u, v, level) in &dump.edges {
            assert!(u < v && v < dump.n);
            assert!(level != EdgeLevel::IV);
        }
        // Level selection must stay deduplicated and canonical.
        let union = dump.level_edges(&[EdgeLevel::I, EdgeLevel::II, EdgeLevel::III]);
        assert!(union.windows(2).all(|w| w[0] < w[1]));
    }
});
