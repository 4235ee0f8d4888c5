#![no_main]

use libfuzzer_sys::fuzz_target;
use wiretap_core::config::EnsembleConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = EnsembleConfig::from_json_str(s);
});
