#![no_main]

use libfuzzer_sys::fuzz_target;
use ptmoment_cli::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = RunConfig::from_json(text) else { return };
    let again = RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).expect("serialised config parses");
    assert_eq!(serde_json::to_string(&again).unwrap(), serde_json::to_string(&cfg).unwrap());
});
