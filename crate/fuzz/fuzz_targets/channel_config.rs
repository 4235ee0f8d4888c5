#![no_main]

use libfuzzer_sys::fuzz_target;
use wiretap_core::config::ChannelConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ChannelConfig::from_json_str(s) {
        // a document that parses must also build its query or fail cleanly
        let _ = cfg.query();
    }
});
