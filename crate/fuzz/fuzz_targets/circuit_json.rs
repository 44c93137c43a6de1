#![no_main]

use libfuzzer_sys::fuzz_target;
use ptmoment::circuits::{compose, parse_circuit, to_json, CircuitElement};

const MAX_MODES: usize = 16;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(elements) = parse_circuit(text) else { return };
    let again = parse_circuit(&to_json(&elements)).expect("serialised circuit parses");
    assert_eq!(again, elements);
    let n = elements
        .iter()
        .map(|e| match *e {
            CircuitElement::BeamSplitter { modes: (a, b), .. } => a.max(b) + 1,
            CircuitElement::Phase { mode, .. } => mode + 1,
        })
        .max()
        .unwrap_or(1);
    if n <= MAX_MODES {
        compose(&elements, n).expect("valid elements compose to a unitary");
    }
});
