use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::ns::{annot, prov, provx, scm, xsd};
use crate::rdf::isomorphic;
use crate::store::Store;
use crate::turtle::{parse_turtle, serialize_turtle};

fn locals(v: &Vocabulary) -> BTreeSet<&str> {
    v.classes.iter().map(|c| c.local_name.as_str()).collect()
}

fn property<'a>(v: &'a Vocabulary, name: &str) -> &'a PropertyDecl {
    v.properties.iter().find(|p| p.local_name == name).unwrap()
}

#[test]
fn htd_has_layered_classes() {
    let v = htd_vocabulary();
    let names = locals(&v);
    for c in [
        "TestCase",
        "TestSpecification",
        "ExperimentSpecification",
        "ObjectUnderInvestigation",
        "SystemUnderTest",
        "FunctionUnderTest",
        "PurposeOfInvestigation",
        "TestCriteria",
        "TestSystem",
    ] {
        assert!(names.contains(c), "{c}");
    }
    for p in ["hasSpecification", "hasExperiment", "investigates", "appliesCriteria", "usesSystemConfiguration"] {
        property(&v, p);
    }
}

#[test]
fn all_vocabularies_validate() {
    for v in all_vocabularies() {
        v.validate().unwrap_or_else(|e| panic!("{e}"));
    }
}

#[test]
fn emission_counts_follow_rules() {
    for v in all_vocabularies() {
        let g = emit_vocabulary(&v).unwrap();
        let expected = v.classes.len() * 2 + v.properties.len() * 4 + v.individuals.len() * 2;
        assert_eq!(g.len(), expected, "{}", v.name);
    }
    let htd = htd_vocabulary();
    assert!(htd.individuals.is_empty());
    assert_eq!(emit_vocabulary(&htd).unwrap().len(), htd.classes.len() * 2 + htd.properties.len() * 4);
}

#[test]
fn empty_and_single_class() {
    let mut v = Vocabulary::new("t", "http://ex.org/t#");
    assert_eq!(emit_vocabulary(&v).unwrap().len(), 0);
    v.class("A", "A", "");
    assert_eq!(emit_vocabulary(&v).unwrap().len(), 2);
}

#[test]
fn dangling_reference_is_inconsistent() {
    let mut v = Vocabulary::new("t", "http://ex.org/t#");
    v.class("A", "A", "").property("p", TermRef::Local("A".into()), TermRef::Local("B".into()), "p");
    assert!(matches!(emit_vocabulary(&v), Err(VocabError::InconsistentVocabulary { .. })));

    let mut v = Vocabulary::new("t", "http://ex.org/t#");
    v.class("A", "A", "").class("A", "again", "");
    assert!(v.validate().is_err());
}

#[test]
fn emissions_round_trip_through_turtle() {
    for v in all_vocabularies() {
        let g = emit_vocabulary(&v).unwrap();
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text).unwrap();
        assert!(isomorphic(&g, &back).unwrap(), "{}", v.name);
        assert_eq!(serialize_turtle(&back), text);
    }
}

#[test]
fn declarations_self_conform() {
    let mut store = Store::new();
    for v in all_vocabularies() {
        store.load(&emit_vocabulary(&v).unwrap());
    }
    assert!(check_shapes(&store, &all_rules()).is_empty());
}

#[test]
fn scm_terms() {
    let v = scm_vocabulary();
    for c in ["System", "Component", "ConnectionPoint", "Connection", "Domain", "Attribute", "SystemConfiguration"] {
        assert!(locals(&v).contains(c), "{c}");
    }
    let individuals: BTreeSet<&str> = v.individuals.iter().map(|i| i.local_name.as_str()).collect();
    for i in ["ElectricalAC", "ElectricalDC", "ICT", "PVSystem", "Switchboard", "ACPowerGrid"] {
        assert!(individuals.contains(i), "{i}");
    }
    let arity: Vec<&Constraint> = v
        .rules
        .iter()
        .filter(|r| r.constraint.property().as_str() == scm::CONNECTS)
        .map(|r| &r.constraint)
        .collect();
    assert!(arity.iter().any(|c| matches!(c, Constraint::MinCount { n: 2, .. })));
    assert!(arity.iter().any(|c| matches!(c, Constraint::MaxCount { n: 2, .. })));
}

#[test]
fn prov_terms() {
    let v = prov_vocabulary();
    let prov_classes: BTreeSet<&str> = v
        .classes
        .iter()
        .filter(|c| c.namespace == prov::NS)
        .map(|c| c.local_name.as_str())
        .collect();
    assert_eq!(prov_classes, BTreeSet::from(["Entity", "Activity", "Agent"]));
    assert!(locals(&v).contains("WorkflowTemplate"));
    assert!(locals(&v).contains("TemplateProcess"));
    let link = property(&v, "correspondsToTemplate");
    assert_eq!(link.namespace, provx::NS);
    assert_eq!(link.domain, TermRef::Local("WorkflowExecutionAccount".into()));
    assert_eq!(link.range, TermRef::Local("WorkflowTemplate".into()));
}

#[test]
fn annotation_terms() {
    let v = annotation_vocabulary();
    let phenomena: BTreeSet<&str> = v.individuals.iter().map(|i| i.local_name.as_str()).collect();
    assert_eq!(phenomena, BTreeSet::from(["Voltage", "Current", "ActivePower", "ReactivePower"]));
    // Organization -> Dataset -> LogFile -> Measurement -> Phenomenon
    let chain = ["Organization", "Dataset", "LogFile", "Measurement", "Phenomenon"];
    for (prop, pair) in ["owns", "containsLogFile", "storesMeasurement", "recordsPhenomenon"].iter().zip(chain.windows(2)) {
        let p = property(&v, prop);
        assert_eq!(p.domain, TermRef::Local(pair[0].into()), "{prop}");
        assert_eq!(p.range, TermRef::Local(pair[1].into()), "{prop}");
    }
    assert!(v.rules.iter().any(|r| r.target_class.as_str() == annot::MEASUREMENT
        && r.constraint
            == Constraint::DatatypeIs {
                property: Iri::new(annot::HAS_VALUE).unwrap(),
                datatype: Iri::new(xsd::DECIMAL).unwrap(),
            }));
}

const PREFIXES: &str = "@prefix scm: <https://example.org/cpes/scm#> .\n\
                        @prefix annot: <https://example.org/cpes/annot#> .\n\
                        @prefix ex: <http://ex.org/> .\n";

fn store(ttl: &str) -> Store {
    Store::from_graph(&parse_turtle(&format!("{PREFIXES}{ttl}")).unwrap())
}

#[test]
fn connection_with_one_endpoint() {
    let s = store(
        "ex:c a scm:Connection ; scm:identifier \"c\" ; scm:connects ex:p1 .\n\
         ex:p1 a scm:ConnectionPoint ; scm:identifier \"p1\" ; scm:inDomain scm:ICT .",
    );
    let v = check_shapes(&s, &scm_vocabulary().rules);
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].rule_id, "scm-connects-min");
}

#[test]
fn measurement_without_phenomenon() {
    let s = store("ex:m a annot:Measurement ; annot:hasUnit ex:V ; annot:hasValue \"1\" .");
    let v = check_shapes(&s, &annotation_vocabulary().rules);
    let ids: Vec<&str> = v.iter().map(|x| x.rule_id.as_str()).collect();
    assert_eq!(ids, vec!["annot-measurement-phenomenon", "annot-measurement-value-datatype"]);
    assert_eq!(v[0].message, "measurement lacks phenomenon");
    assert_eq!(v[0].focus_node, Term::iri("http://ex.org/m").unwrap());
}

#[test]
fn value_in_rejects_literals_and_unknown_iris() {
    let s = store("ex:s a scm:System ; scm:identifier \"s\" ; scm:hasType scm:PVSystem ; scm:hasRole ex:Boss .");
    let v = check_shapes(&s, &scm_vocabulary().rules);
    assert_eq!(v.iter().map(|x| x.rule_id.as_str()).collect::<Vec<_>>(), vec!["scm-system-role"]);
}

fn random_store() -> impl Strategy<Value = Store> {
    let subjects = prop::sample::select(vec!["ex:a", "ex:b", "ex:c"]);
    let class = prop::sample::select(vec!["scm:Connection", "scm:System", "annot:Measurement", "scm:ConnectionPoint"]);
    let prop_ = prop::sample::select(vec!["scm:connects", "scm:hasType", "scm:inDomain", "annot:recordsPhenomenon", "scm:identifier"]);
    let obj = prop::sample::select(vec!["ex:a", "scm:ICT", "scm:PVSystem", "\"x\"", "1.5"]);
    (
        prop::collection::vec((subjects.clone(), class), 0..6),
        prop::collection::vec((subjects, prop_, obj), 0..12),
    )
        .prop_map(|(types, edges)| {
            let mut ttl = String::new();
            for (s, c) in types {
                ttl.push_str(&format!("{s} a {c} .\n"));
            }
            for (s, p, o) in edges {
                ttl.push_str(&format!("{s} {p} {o} .\n"));
            }
            store(&ttl)
        })
}

proptest! {
    #[test]
    fn shape_checking_is_monotone_in_rules(s in random_store(), mask in prop::collection::vec(any::<bool>(), 64)) {
        let rules = all_rules();
        let subset: Vec<ShapeRule> = rules.iter().zip(mask.iter().cycle()).filter(|(_, m)| **m).map(|(r, _)| r.clone()).collect();
        let small: BTreeSet<Violation> = check_shapes(&s, &subset).into_iter().collect();
        let large: BTreeSet<Violation> = check_shapes(&s, &rules).into_iter().collect();
        prop_assert!(small.is_subset(&large));
    }
}
