//! Config documents come from users; parsing and validation must never
//! panic, and any accepted document must survive a serialize/reload
//! round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = sociosynth::load_config(text) {
        let reloaded = sociosynth::load_config(&sociosynth::serialize_config(&config))
            .expect("serialized config must reload");
        assert_eq!(config, reloaded);
    }
});
