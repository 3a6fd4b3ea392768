#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use vsrq_core::codemetrics::{scan_source, LanguageProfile};
use vsrq_core::config::{C_PROFILE, PYTHON_PROFILE};

static PROFILES: OnceLock<[LanguageProfile; 2]> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let profiles = PROFILES.get_or_init(|| {
        [C_PROFILE, PYTHON_PROFILE].map(|p| LanguageProfile::from_json(p).unwrap())
    });
    let text = String::from_utf8_lossy(data);
    for p in profiles {
        let m = scan_source(&text, p);
        assert!(m.halstead.n1 <= m.halstead.big_n1 && m.halstead.n2 <= m.halstead.big_n2);
    }
});
