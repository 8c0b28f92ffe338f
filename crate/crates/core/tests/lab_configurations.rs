use std::path::PathBuf;

use testkg::rdf::BaseIri;
use testkg::scm::{diff_configurations, from_rdf, parse_config, to_rdf, validate_configuration, AttrValue, Role};

fn fixture(path: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn ucd_setup_has_the_reported_devices() {
    let cfg = parse_config(&fixture("ucd/config.toml")).unwrap();
    let mut types: Vec<_> = cfg.systems.iter().map(|s| s.system_type.as_str()).collect();
    types.sort();
    assert_eq!(types, ["DCAmplifier", "GridSimulator", "PVInverter", "RealTimeComputer", "SensorSystem"]);
    let sut: Vec<_> = cfg.systems.iter().filter(|s| s.role == Some(Role::SuT)).map(|s| s.id.as_str()).collect();
    assert_eq!(sut, ["inverter"]);
    assert!(validate_configuration(&cfg).is_empty(), "{:?}", validate_configuration(&cfg));
}

#[test]
fn lab_setups_round_trip() {
    for lab in ["ucd", "zhaw"] {
        let cfg = parse_config(&fixture(&format!("{lab}/config.toml"))).unwrap();
        let g = to_rdf(&cfg, &BaseIri::default()).unwrap();
        let ttl = testkg::turtle::serialize_turtle(&g);
        let back = from_rdf(&testkg::turtle::parse_turtle(&ttl).unwrap()).unwrap();
        assert_eq!(back, cfg.canonical(), "{lab}");
    }
}

#[test]
fn ucd_and_zhaw_differ_only_in_the_inverter() {
    let ucd = parse_config(&fixture("ucd/config.toml")).unwrap();
    let zhaw = parse_config(&fixture("zhaw/config.toml")).unwrap();
    let d = diff_configurations(&ucd, &zhaw);
    assert!(d.added_systems.is_empty() && d.removed_systems.is_empty());
    assert!(d.added_connections.is_empty() && d.removed_connections.is_empty());
    let changes: Vec<_> = d
        .changed_attributes
        .iter()
        .map(|c| (c.system_a.as_str(), c.attribute.as_str(), c.value_a.clone(), c.value_b.clone()))
        .collect();
    assert_eq!(
        changes,
        [
            ("inverter", "operatingPoint", Some(AttrValue::Number(0.62)), Some(AttrValue::Number(0.92))),
            ("inverter", "phases", Some(AttrValue::Number(1.0)), Some(AttrValue::Number(3.0))),
        ]
    );
}
