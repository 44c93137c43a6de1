#![no_main]

use libfuzzer_sys::fuzz_target;
use ptmoment::criteria::{all_reports, PtMomentVector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(moments) = text.parse::<PtMomentVector>() else { return };
    let listed: Vec<String> = moments.moments().iter().map(f64::to_string).collect();
    let again: PtMomentVector = listed.join(", ").parse().expect("listed moments parse");
    assert_eq!(again.moments(), moments.moments());
    let _ = all_reports(&moments);
});
