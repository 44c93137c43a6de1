#![no_main]

use libfuzzer_sys::fuzz_target;
use ptmoment::records::OutputRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(rec) = OutputRecord::from_json(text) else { return };
    let rendered = rec.to_json().expect("parsed record renders");
    let again = OutputRecord::from_json(&rendered).expect("rendered JSON parses");
    assert_eq!(again.to_json().unwrap(), rendered);
});
