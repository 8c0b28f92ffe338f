use std::collections::{BTreeMap, BTreeSet};

use super::{
    term_id, term_iri, validate_configuration, AttrValue, Attribute, ConnectionEdge, ConnectionPoint, Endpoint, Role,
    ScmError, SystemConfiguration, SystemNode,
};
use crate::ns::{rdf, rdfs, scm, xsd};
use crate::rdf::{BaseIri, Graph, Iri, Literal, Term};
use crate::store::Store;
use crate::vocab::{check_shapes, scm_vocabulary, Severity};

fn p(iri: &str) -> Iri {
    Iri::from_static(iri)
}

fn s(text: &str) -> Term {
    Term::Literal(Literal::string(text))
}

pub fn config_iri(base: &BaseIri, id: &str) -> Iri {
    base.mint(&["config", id])
}

fn system_iri(base: &BaseIri, cfg: &str, sys: &str) -> Iri {
    base.mint(&["config", cfg, "system", sys])
}

fn point_iri(base: &BaseIri, cfg: &str, e: &Endpoint) -> Iri {
    base.mint(&["config", cfg, "system", &e.system, "cp", &e.point])
}

/// Exports a configuration with no violation-severity findings.
pub fn to_rdf(cfg: &SystemConfiguration, base: &BaseIri) -> Result<Graph, ScmError> {
    let violations: Vec<_> = validate_configuration(cfg).into_iter().filter(|f| f.is_violation()).collect();
    if !violations.is_empty() {
        return Err(ScmError::InvalidConfiguration(violations));
    }
    let mut g = Graph::with_standard_prefixes();
    let rdf_type = p(rdf::TYPE);
    let c = config_iri(base, &cfg.id);
    g.add(c.clone(), &rdf_type, p(scm::SYSTEM_CONFIGURATION));
    g.add(c.clone(), &p(scm::IDENTIFIER), s(&cfg.id));
    g.add(c.clone(), &p(scm::IS_TEST_SETUP), Literal::boolean(cfg.is_test_setup));
    for d in &cfg.domains {
        g.add(c.clone(), &p(scm::USES_DOMAIN), term_iri(d));
    }
    for sys in &cfg.systems {
        let si = system_iri(base, &cfg.id, &sys.id);
        g.add(c.clone(), &p(scm::HAS_SYSTEM), si.clone());
        g.add(si.clone(), &rdf_type, p(scm::SYSTEM));
        g.add(si.clone(), &p(scm::IDENTIFIER), s(&sys.id));
        g.add(si.clone(), &p(scm::HAS_TYPE), term_iri(&sys.system_type));
        if let Some(role) = sys.role {
            g.add(si.clone(), &p(scm::HAS_ROLE), role.iri());
        }
        if let Some(label) = &sys.label {
            g.add(si.clone(), &p(rdfs::LABEL), s(label));
        }
        for cp in &sys.connection_points {
            let pi = point_iri(base, &cfg.id, &Endpoint::new(&sys.id, &cp.id));
            g.add(si.clone(), &p(scm::HAS_CONNECTION_POINT), pi.clone());
            g.add(pi.clone(), &rdf_type, p(scm::CONNECTION_POINT));
            g.add(pi.clone(), &p(scm::IDENTIFIER), s(&cp.id));
            g.add(pi.clone(), &p(scm::IN_DOMAIN), term_iri(&cp.domain));
            if let Some(label) = &cp.label {
                g.add(pi, &p(rdfs::LABEL), s(label));
            }
        }
        for a in &sys.attributes {
            let ai = base.mint(&["config", &cfg.id, "system", &sys.id, "attr", &a.name]);
            g.add(si.clone(), &p(scm::HAS_ATTRIBUTE), ai.clone());
            g.add(ai.clone(), &rdf_type, p(scm::ATTRIBUTE));
            g.add(ai.clone(), &p(scm::ATTRIBUTE_NAME), s(&a.name));
            let value = match &a.value {
                AttrValue::Number(n) => Term::Literal(Literal::decimal(*n)),
                AttrValue::Text(t) => s(t),
            };
            g.add(ai.clone(), &p(scm::ATTRIBUTE_VALUE), value);
            if let Some(unit) = &a.unit {
                g.add(ai, &p(scm::ATTRIBUTE_UNIT), s(unit));
            }
        }
    }
    for e in &cfg.connections {
        let ci = base.mint(&["config", &cfg.id, "connection", &e.id]);
        g.add(c.clone(), &p(scm::HAS_CONNECTION), ci.clone());
        g.add(ci.clone(), &rdf_type, p(scm::CONNECTION));
        g.add(ci.clone(), &p(scm::IDENTIFIER), s(&e.id));
        g.add(ci.clone(), &p(scm::CONNECTS), point_iri(base, &cfg.id, &e.a));
        g.add(ci, &p(scm::CONNECTS), point_iri(base, &cfg.id, &e.b));
    }
    Ok(g)
}

struct Reader<'a> {
    store: &'a Store,
}

impl Reader<'_> {
    fn objects(&self, subject: &Term, property: &str) -> Vec<Term> {
        let mut v = self.store.objects(subject, &p(property));
        v.sort();
        v
    }

    fn one(&self, subject: &Term, property: &str) -> Result<Term, ScmError> {
        let mut v = self.objects(subject, property);
        match v.len() {
            1 => Ok(v.remove(0)),
            n => Err(ScmError::Malformed(format!("{subject} has {n} values for <{property}>, expected one"))),
        }
    }

    fn optional(&self, subject: &Term, property: &str) -> Result<Option<Term>, ScmError> {
        let mut v = self.objects(subject, property);
        match v.len() {
            0 => Ok(None),
            1 => Ok(Some(v.remove(0))),
            n => Err(ScmError::Malformed(format!("{subject} has {n} values for <{property}>"))),
        }
    }

    fn text(&self, subject: &Term, property: &str) -> Result<String, ScmError> {
        let t = self.one(subject, property)?;
        t.as_literal()
            .map(|l| l.lexical().to_owned())
            .ok_or_else(|| ScmError::Malformed(format!("{subject} <{property}> is not a literal")))
    }

    fn optional_text(&self, subject: &Term, property: &str) -> Result<Option<String>, ScmError> {
        Ok(self.optional(subject, property)?.and_then(|t| t.as_literal().map(|l| l.lexical().to_owned())))
    }

    fn iri(&self, subject: &Term, property: &str) -> Result<Iri, ScmError> {
        match self.one(subject, property)? {
            Term::Iri(i) => Ok(i),
            other => Err(ScmError::Malformed(format!("{subject} <{property}> has non-IRI value {other}"))),
        }
    }
}

/// Rebuilds a configuration from its RDF form, in canonical order.
pub fn from_rdf(graph: &Graph) -> Result<SystemConfiguration, ScmError> {
    let store = Store::from_graph(graph);
    let configs = store.instances_of(&p(scm::SYSTEM_CONFIGURATION));
    let node = match configs.len() {
        0 => return Err(ScmError::EmptyConfiguration),
        1 => configs[0].clone(),
        n => return Err(ScmError::MultipleConfigurations(n)),
    };
    let violations: Vec<_> = check_shapes(&store, &scm_vocabulary().rules)
        .into_iter()
        .filter(|v| v.severity == Severity::Violation)
        .collect();
    if !violations.is_empty() {
        return Err(ScmError::ShapeViolation(violations));
    }

    let r = Reader { store: &store };
    let mut cfg = SystemConfiguration::new(&r.text(&node, scm::IDENTIFIER)?);
    cfg.is_test_setup = match r.optional(&node, scm::IS_TEST_SETUP)? {
        Some(t) => t.as_literal().is_some_and(|l| l.lexical() == "true" || l.lexical() == "1"),
        None => false,
    };
    cfg.domains = r
        .objects(&node, scm::USES_DOMAIN)
        .iter()
        .filter_map(Term::as_iri)
        .map(term_id)
        .collect();

    let mut owner: BTreeMap<Term, Endpoint> = BTreeMap::new();
    for sys_node in r.objects(&node, scm::HAS_SYSTEM) {
        let id = r.text(&sys_node, scm::IDENTIFIER)?;
        let role = match r.optional(&sys_node, scm::HAS_ROLE)? {
            Some(Term::Iri(i)) => Some(
                Role::from_name(&term_id(&i))
                    .ok_or_else(|| ScmError::Malformed(format!("unknown role {i}")))?,
            ),
            Some(other) => return Err(ScmError::Malformed(format!("role {other} is not an IRI"))),
            None => None,
        };
        let mut sys = SystemNode {
            id: id.clone(),
            system_type: term_id(&r.iri(&sys_node, scm::HAS_TYPE)?),
            role,
            label: r.optional_text(&sys_node, rdfs::LABEL)?,
            connection_points: Vec::new(),
            attributes: Vec::new(),
        };
        for cp in r.objects(&sys_node, scm::HAS_CONNECTION_POINT) {
            let pid = r.text(&cp, scm::IDENTIFIER)?;
            let endpoint = Endpoint::new(&id, &pid);
            if owner.insert(cp.clone(), endpoint).is_some() {
                return Err(ScmError::Malformed(format!("connection point {cp} belongs to several systems")));
            }
            sys.connection_points.push(ConnectionPoint {
                id: pid,
                domain: term_id(&r.iri(&cp, scm::IN_DOMAIN)?),
                label: r.optional_text(&cp, rdfs::LABEL)?,
            });
        }
        for a in r.objects(&sys_node, scm::HAS_ATTRIBUTE) {
            let value = r.one(&a, scm::ATTRIBUTE_VALUE)?;
            let value = match value.as_literal() {
                Some(l) if [xsd::DECIMAL, xsd::INTEGER, xsd::DOUBLE].contains(&l.datatype().as_str()) => {
                    AttrValue::Number(l.as_f64().ok_or_else(|| ScmError::Malformed(format!("bad number {value}")))?)
                }
                Some(l) => AttrValue::Text(l.lexical().to_owned()),
                None => return Err(ScmError::Malformed(format!("attribute value {value} is not a literal"))),
            };
            sys.attributes.push(Attribute {
                name: r.text(&a, scm::ATTRIBUTE_NAME)?,
                value,
                unit: r.optional_text(&a, scm::ATTRIBUTE_UNIT)?,
            });
        }
        cfg.systems.push(sys);
    }

    for c in r.objects(&node, scm::HAS_CONNECTION) {
        let id = r.text(&c, scm::IDENTIFIER)?;
        let mut ends: Vec<Endpoint> = Vec::new();
        for cp in r.objects(&c, scm::CONNECTS) {
            let e = owner
                .get(&cp)
                .ok_or_else(|| ScmError::Malformed(format!("connection {id} endpoint {cp} belongs to no system")))?;
            ends.push(e.clone());
        }
        ends.sort();
        let [a, b]: [Endpoint; 2] = ends
            .try_into()
            .map_err(|_| ScmError::Malformed(format!("connection {id} does not have two endpoints")))?;
        let domain = cfg.endpoint_domain(&a).unwrap_or_default().to_owned();
        cfg.connections.push(ConnectionEdge { id, a, b, domain });
    }

    let declared: BTreeSet<String> = cfg.used_domains();
    if !declared.is_subset(&cfg.domains) {
        return Err(ScmError::Malformed("configuration uses domains it does not declare".into()));
    }
    Ok(cfg.canonical())
}
