use proptest::prelude::*;

use super::*;
use crate::ns::scm;
use crate::rdf::{BaseIri, Graph, Iri, Term};
use crate::report::Finding;

const BENCH: &str = r#"
id = "bench"
test_setup = true

[[system]]
id = "grid"
type = "GridSimulator"
role = "TestEquipment"
point = [{ id = "ac", domain = "ElectricalAC" }]

[[system]]
id = "inv"
type = "PVInverter"
role = "SuT"
label = "inverter"
point = [
    { id = "ac", domain = "ElectricalAC" },
    { id = "ctl", domain = "ICT", label = "modbus" },
]
attribute = [
    { name = "phases", value = 1 },
    { name = "operatingPoint", value = 0.62, unit = "pu" },
    { name = "vendor", value = "acme" },
]

[[system]]
id = "pc"
type = "RealTimeComputer"
point = [{ id = "ctl", domain = "ICT" }]

[[connection]]
id = "ac1"
from = "inv.ac"
to = "grid.ac"
domain = "ElectricalAC"

[[connection]]
id = "ctl1"
from = "pc.ctl"
to = "inv.ctl"
domain = "ICT"
"#;

fn bench() -> SystemConfiguration {
    parse_config(BENCH).unwrap()
}

fn codes(findings: &[Finding]) -> Vec<&str> {
    findings.iter().map(|f| f.code.as_str()).collect()
}

fn violations(cfg: &SystemConfiguration) -> Vec<Finding> {
    validate_configuration(cfg).into_iter().filter(Finding::is_violation).collect()
}

#[test]
fn bench_validates_clean() {
    let cfg = bench();
    assert_eq!(cfg.domains.len(), 2);
    assert!(validate_configuration(&cfg).is_empty(), "{:?}", validate_configuration(&cfg));
}

#[test]
fn ac_to_ict_edge_is_a_domain_mismatch() {
    let mut cfg = bench();
    cfg.connections.push(ConnectionEdge {
        id: "bad".into(),
        a: Endpoint::new("grid", "ac"),
        b: Endpoint::new("pc", "ctl"),
        domain: "ElectricalAC".into(),
    });
    let v = violations(&cfg);
    assert_eq!(codes(&v), ["scm-domain-mismatch"]);
    assert!(v[0].message.contains("pc.ctl"));
}

#[test]
fn empty_configuration_has_no_findings() {
    let cfg = SystemConfiguration::new("empty");
    assert!(validate_configuration(&cfg).is_empty());
    let mut tagged = cfg.clone();
    tagged.is_test_setup = true;
    assert!(validate_configuration(&tagged).is_empty());
}

#[test]
fn structural_problems_are_reported() {
    let mut cfg = bench();
    cfg.systems.push(cfg.systems[2].clone());
    cfg.systems.push(SystemNode {
        id: "lonely".into(),
        system_type: "SensorSystem".into(),
        role: None,
        label: None,
        connection_points: vec![],
        attributes: vec![],
    });
    cfg.connections.push(ConnectionEdge {
        id: "loop".into(),
        a: Endpoint::new("inv", "ac"),
        b: Endpoint::new("inv", "ac"),
        domain: "ElectricalAC".into(),
    });
    cfg.connections.push(ConnectionEdge {
        id: "ghost".into(),
        a: Endpoint::new("inv", "dc"),
        b: Endpoint::new("grid", "ac"),
        domain: "ElectricalAC".into(),
    });
    for s in &mut cfg.systems {
        s.role = None;
    }
    let found = validate_configuration(&cfg);
    let c = codes(&found);
    for code in ["scm-duplicate-id", "scm-self-connection", "scm-dangling-endpoint", "scm-isolated-system", "scm-missing-sut"] {
        assert!(c.contains(&code), "{code} missing from {c:?}");
    }
    let warnings: Vec<_> = found.iter().filter(|f| !f.is_violation()).map(|f| f.code.as_str()).collect();
    assert_eq!(warnings, ["scm-isolated-system", "scm-missing-sut"]);
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_config("id = \"x\"\n[[system]]\nid = \"a\"\ncolour = 1\n").unwrap_err();
    match err {
        ScmError::Parse { line, .. } => assert!(line >= 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_config("id = \"x\"\n[[connection]]\nid = \"c\"\nfrom = \"a\"\nto = \"b.p\"\ndomain = \"ICT\"\n"),
        Err(ScmError::Malformed(_))
    ));
    assert!(matches!(
        parse_config("id = \"x\"\n[[system]]\nid = \"a\"\ntype = \"T\"\nrole = \"boss\"\n"),
        Err(ScmError::Malformed(_))
    ));
}

#[test]
fn empty_configuration_exports_only_its_node() {
    let g = to_rdf(&SystemConfiguration::new("empty"), &BaseIri::default()).unwrap();
    assert_eq!(g.len(), 3);
    assert!(g.iter().all(|t| t.subject().as_iri().is_some_and(|i| i.as_str().ends_with("/config/empty"))));
}

#[test]
fn one_system_one_point_triple_count() {
    let mut cfg = SystemConfiguration::new("one");
    cfg.domains.insert("ICT".into());
    cfg.systems.push(SystemNode {
        id: "s".into(),
        system_type: "Network".into(),
        role: None,
        label: None,
        connection_points: vec![ConnectionPoint { id: "p".into(), domain: "ICT".into(), label: None }],
        attributes: vec![],
    });
    let g = to_rdf(&cfg, &BaseIri::default()).unwrap();
    // configuration: type, identifier, isTestSetup, usesDomain, hasSystem
    // system: type, identifier, hasType, hasConnectionPoint
    // point: type, identifier, inDomain
    assert_eq!(g.len(), 5 + 4 + 3);
    let point = Term::Iri(BaseIri::default().mint(&["config", "one", "system", "s", "cp", "p"]));
    assert!(g.iter().any(|t| t.subject() == &point
        && t.predicate().as_str() == scm::IN_DOMAIN
        && t.object().as_iri().is_some_and(|i| i.as_str() == format!("{}ICT", scm::NS))));
}

#[test]
fn invalid_configurations_are_not_exported() {
    let mut cfg = bench();
    cfg.connections[0].b = Endpoint::new("grid", "nope");
    assert!(matches!(to_rdf(&cfg, &BaseIri::default()), Err(ScmError::InvalidConfiguration(v)) if v.len() == 1));
}

#[test]
fn round_trip_restores_the_configuration() {
    let cfg = bench();
    let g = to_rdf(&cfg, &BaseIri::default()).unwrap();
    assert_eq!(from_rdf(&g).unwrap(), cfg.canonical());

    let ttl = crate::turtle::serialize_turtle(&g);
    let reparsed = crate::turtle::parse_turtle(&ttl).unwrap();
    assert_eq!(from_rdf(&reparsed).unwrap(), cfg.canonical());
}

#[test]
fn missing_in_domain_is_a_shape_violation() {
    let mut g = to_rdf(&bench(), &BaseIri::default()).unwrap();
    let in_domain = Iri::new(scm::IN_DOMAIN).unwrap();
    let victim = g.iter().find(|t| t.predicate() == &in_domain).unwrap().clone();
    g.remove(&victim);
    match from_rdf(&g) {
        Err(ScmError::ShapeViolation(v)) => {
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].rule_id, "scm-point-domain");
            assert_eq!(&v[0].focus_node, victim.subject());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_graph_has_no_configuration() {
    assert_eq!(from_rdf(&Graph::new()), Err(ScmError::EmptyConfiguration));
    let mut g = to_rdf(&bench(), &BaseIri::default()).unwrap();
    g.extend_from(&to_rdf(&SystemConfiguration::new("other"), &BaseIri::default()).unwrap());
    assert_eq!(from_rdf(&g), Err(ScmError::MultipleConfigurations(2)));
}

#[test]
fn diff_of_identical_configurations_is_empty() {
    let cfg = bench();
    assert!(diff_configurations(&cfg, &cfg).is_empty());
}

#[test]
fn added_sensor_is_reported() {
    let a = bench();
    let mut b = a.clone();
    b.systems.push(SystemNode {
        id: "sensor".into(),
        system_type: "SensorSystem".into(),
        role: Some(Role::TestEquipment),
        label: None,
        connection_points: vec![ConnectionPoint { id: "out".into(), domain: "ICT".into(), label: None }],
        attributes: vec![],
    });
    let d = diff_configurations(&a, &b);
    assert_eq!(d.added_systems, ["sensor"]);
    assert!(d.removed_systems.is_empty() && d.changed_attributes.is_empty());
    assert!(d.added_connections.is_empty() && d.removed_connections.is_empty());
}

#[test]
fn renamed_system_matches_on_type() {
    let a = bench();
    let mut b = a.clone();
    b.systems[1].id = "inverter".into();
    for c in &mut b.connections {
        for e in [&mut c.a, &mut c.b] {
            if e.system == "inv" {
                e.system = "inverter".into();
            }
        }
    }
    b.systems[1].attributes[0].value = AttrValue::Number(3.0);
    let d = diff_configurations(&a, &b);
    assert!(d.added_systems.is_empty() && d.added_connections.is_empty(), "{d:?}");
    assert_eq!(d.changed_attributes.len(), 1);
    let c = &d.changed_attributes[0];
    assert_eq!((c.system_a.as_str(), c.system_b.as_str(), c.attribute.as_str()), ("inv", "inverter", "phases"));
}

#[test]
fn ambiguous_type_matches_stay_unmatched() {
    let mut a = SystemConfiguration::new("a");
    let node = |id: &str| SystemNode {
        id: id.into(),
        system_type: "SensorSystem".into(),
        role: None,
        label: None,
        connection_points: vec![],
        attributes: vec![],
    };
    a.systems = vec![node("s1"), node("s2")];
    let mut b = SystemConfiguration::new("b");
    b.systems = vec![node("t1"), node("t2")];
    let d = diff_configurations(&a, &b);
    assert_eq!(d.removed_systems, ["s1", "s2"]);
    assert_eq!(d.added_systems, ["t1", "t2"]);
}

#[test]
fn diff_report_field_names() {
    let a = bench();
    let mut b = a.clone();
    b.systems[1].attributes[1].value = AttrValue::Number(0.92);
    let v = serde_json::to_value(diff_configurations(&a, &b)).unwrap();
    let change = &v["matchedSystemsWithChangedAttributes"][0];
    assert_eq!(change["id"], "inv");
    assert_eq!(change["valueA"], 0.62);
    assert_eq!(change["valueB"], 0.92);
    assert!(v["addedSystems"].as_array().unwrap().is_empty());
}

fn arb_config() -> impl Strategy<Value = SystemConfiguration> {
    let domains = ["ElectricalAC", "ElectricalDC", "ICT"];
    let types = ["PVInverter", "SensorSystem", "Busbar"];
    let system = (
        0usize..3,
        prop::option::of(prop_oneof![Just(Role::SuT), Just(Role::TestEquipment), Just(Role::Infrastructure)]),
        prop::collection::btree_set(0usize..3, 1..3),
        prop::collection::btree_map(0usize..3, prop_oneof![(-1e3f64..1e3).prop_map(AttrValue::Number), "[a-z ]{0,6}".prop_map(AttrValue::Text)], 0..3),
    );
    (prop::collection::vec(system, 0..5), prop::collection::vec((0usize..32, 0usize..32), 0..6), any::<bool>()).prop_map(
        move |(systems, edges, setup)| {
            let mut cfg = SystemConfiguration::new("gen");
            cfg.is_test_setup = setup;
            for (i, (t, role, points, attrs)) in systems.into_iter().enumerate() {
                cfg.systems.push(SystemNode {
                    id: format!("s{i}"),
                    system_type: types[t].into(),
                    role,
                    label: (i % 2 == 0).then(|| format!("system {i}")),
                    connection_points: points
                        .into_iter()
                        .map(|d| ConnectionPoint { id: format!("p{d}"), domain: domains[d].into(), label: None })
                        .collect(),
                    attributes: attrs
                        .into_iter()
                        .map(|(k, value)| Attribute { name: format!("a{k}"), value, unit: (k == 1).then(|| "V".into()) })
                        .collect(),
                });
            }
            let points: Vec<(Endpoint, String)> = cfg
                .systems
                .iter()
                .flat_map(|s| s.connection_points.iter().map(|p| (Endpoint::new(&s.id, &p.id), p.domain.clone())))
                .collect();
            for (n, (x, y)) in edges.into_iter().enumerate() {
                if points.is_empty() {
                    break;
                }
                let (a, da) = &points[x % points.len()];
                let same: Vec<_> = points.iter().filter(|(e, d)| d == da && e != a).collect();
                if let Some((b, _)) = same.get(y % same.len().max(1)) {
                    cfg.connections.push(ConnectionEdge { id: format!("c{n}"), a: a.clone(), b: b.clone(), domain: da.clone() });
                }
            }
            cfg.domains = cfg.used_domains();
            cfg
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_configurations_round_trip(cfg in arb_config()) {
        prop_assert!(violations(&cfg).is_empty());
        let g = to_rdf(&cfg, &BaseIri::default()).unwrap();
        prop_assert_eq!(from_rdf(&g).unwrap(), cfg.canonical());
    }

    #[test]
    fn diff_is_mirrored(a in arb_config(), b in arb_config()) {
        prop_assert_eq!(diff_configurations(&b, &a), diff_configurations(&a, &b).mirrored());
        prop_assert!(diff_configurations(&a, &a).is_empty());
    }

    #[test]
    fn validation_ignores_input_order(cfg in arb_config(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = cfg.clone();
        shuffled.systems.shuffle(&mut rng);
        shuffled.connections.shuffle(&mut rng);
        for s in &mut shuffled.systems {
            s.connection_points.shuffle(&mut rng);
            s.attributes.shuffle(&mut rng);
        }
        prop_assert_eq!(validate_configuration(&shuffled), validate_configuration(&cfg));
    }
}
