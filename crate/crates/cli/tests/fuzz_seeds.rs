use std::path::Path;

use ptmoment::circuits::{parse_circuit, to_json};
use ptmoment::criteria::PtMomentVector;
use ptmoment::records::OutputRecord;
use ptmoment_cli::config::RunConfig;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn circuit_seeds_parse_and_round_trip() {
    for (name, text) in seeds("circuit_json") {
        let e = parse_circuit(&text).unwrap_or_else(|err| panic!("{name}: {err}"));
        assert_eq!(parse_circuit(&to_json(&e)).unwrap(), e, "{name}");
    }
}

#[test]
fn run_config_seeds_parse_and_round_trip() {
    for (name, text) in seeds("run_config_json") {
        let cfg = RunConfig::from_json(&text).unwrap_or_else(|err| panic!("{name}: {err:#}"));
        assert_eq!(RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap(), cfg, "{name}");
    }
}

#[test]
fn record_seeds_parse_and_round_trip() {
    for (name, text) in seeds("record_csv") {
        let rendered = OutputRecord::from_csv(&text).unwrap_or_else(|err| panic!("{name}: {err}")).to_csv().unwrap();
        assert_eq!(OutputRecord::from_csv(&rendered).unwrap().to_csv().unwrap(), rendered, "{name}");
    }
    for (name, text) in seeds("record_json") {
        let rendered = OutputRecord::from_json(&text).unwrap_or_else(|err| panic!("{name}: {err}")).to_json().unwrap();
        assert_eq!(OutputRecord::from_json(&rendered).unwrap().to_json().unwrap(), rendered, "{name}");
    }
}

#[test]
fn moment_seeds_parse() {
    for (name, text) in seeds("moment_list") {
        let m: PtMomentVector = text.parse().unwrap_or_else(|err| panic!("{name}: {err}"));
        assert_eq!(m.get(1), Some(1.0), "{name}");
    }
}
