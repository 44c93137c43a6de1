#![no_main]

use libfuzzer_sys::fuzz_target;
use ptmoment::records::OutputRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(rec) = OutputRecord::from_csv(text) else { return };
    let Ok(rendered) = rec.to_csv() else { return };
    let again = OutputRecord::from_csv(&rendered).expect("rendered CSV parses");
    assert_eq!(again.to_csv().unwrap(), rendered);
});
