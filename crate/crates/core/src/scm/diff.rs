use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{AttrValue, SystemConfiguration, SystemNode};
use crate::report::{Finding, Report};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AttributeChange {
    #[serde(rename = "id")]
    pub system_a: String,
    #[serde(rename = "idB")]
    pub system_b: String,
    pub attribute: String,
    pub value_a: Option<AttrValue>,
    pub value_b: Option<AttrValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigDiff {
    pub id_a: String,
    pub id_b: String,
    pub added_systems: Vec<String>,
    pub removed_systems: Vec<String>,
    #[serde(rename = "matchedSystemsWithChangedAttributes")]
    pub changed_attributes: Vec<AttributeChange>,
    pub added_connections: Vec<String>,
    pub removed_connections: Vec<String>,
}

impl ConfigDiff {
    pub fn is_empty(&self) -> bool {
        self.added_systems.is_empty()
            && self.removed_systems.is_empty()
            && self.changed_attributes.is_empty()
            && self.added_connections.is_empty()
            && self.removed_connections.is_empty()
    }

    /// The same diff seen from the other side.
    pub fn mirrored(&self) -> Self {
        let mut changed_attributes: Vec<AttributeChange> = self
            .changed_attributes
            .iter()
            .map(|c| AttributeChange {
                system_a: c.system_b.clone(),
                system_b: c.system_a.clone(),
                attribute: c.attribute.clone(),
                value_a: c.value_b.clone(),
                value_b: c.value_a.clone(),
            })
            .collect();
        changed_attributes.sort_by(|x, y| change_key(x).cmp(&change_key(y)));
        ConfigDiff {
            id_a: self.id_b.clone(),
            id_b: self.id_a.clone(),
            added_systems: self.removed_systems.clone(),
            removed_systems: self.added_systems.clone(),
            changed_attributes,
            added_connections: self.removed_connections.clone(),
            removed_connections: self.added_connections.clone(),
        }
    }

    /// One warning-level finding per difference; the status stays `pass`.
    pub fn to_report(&self) -> Report {
        let mut findings = Vec::new();
        for s in &self.added_systems {
            findings.push(Finding::warning("system-added", format!("system {s}"), "only in B"));
        }
        for s in &self.removed_systems {
            findings.push(Finding::warning("system-removed", format!("system {s}"), "only in A"));
        }
        for c in &self.changed_attributes {
            let show = |v: &Option<AttrValue>| v.as_ref().map_or_else(|| "(unset)".to_owned(), AttrValue::to_string);
            findings.push(Finding::warning(
                "attribute-changed",
                format!("system {}", c.system_a),
                format!("{}: {} -> {}", c.attribute, show(&c.value_a), show(&c.value_b)),
            ));
        }
        for k in &self.added_connections {
            findings.push(Finding::warning("connection-added", k.clone(), "only in B"));
        }
        for k in &self.removed_connections {
            findings.push(Finding::warning("connection-removed", k.clone(), "only in A"));
        }
        Report::new("diff")
            .with_summary("idA", self.id_a.clone())
            .with_summary("idB", self.id_b.clone())
            .with_summary("differences", findings.len())
            .with_findings(findings)
    }
}

fn change_key(c: &AttributeChange) -> (&str, &str, &str) {
    (&c.system_a, &c.system_b, &c.attribute)
}

/// Pairs systems of `a` and `b`: exact (type, id) first, then by type alone
/// when exactly one candidate is left on each side.
fn match_systems<'a>(a: &'a [SystemNode], b: &'a [SystemNode]) -> Vec<(&'a SystemNode, &'a SystemNode)> {
    let mut pairs = Vec::new();
    let mut used_a = BTreeSet::new();
    let mut used_b = BTreeSet::new();
    for (i, sa) in a.iter().enumerate() {
        if let Some(j) = b
            .iter()
            .enumerate()
            .position(|(j, sb)| !used_b.contains(&j) && sb.id == sa.id && sb.system_type == sa.system_type)
        {
            pairs.push((sa, &b[j]));
            used_a.insert(i);
            used_b.insert(j);
        }
    }
    let mut by_type: BTreeMap<&str, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, s) in a.iter().enumerate().filter(|(i, _)| !used_a.contains(i)) {
        by_type.entry(&s.system_type).or_default().0.push(i);
    }
    for (j, s) in b.iter().enumerate().filter(|(j, _)| !used_b.contains(j)) {
        by_type.entry(&s.system_type).or_default().1.push(j);
    }
    for (ia, ib) in by_type.values() {
        if let ([i], [j]) = (ia.as_slice(), ib.as_slice()) {
            pairs.push((&a[*i], &b[*j]));
        }
    }
    pairs.sort_by(|x, y| (&x.0.id, &x.1.id).cmp(&(&y.0.id, &y.1.id)));
    pairs
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum NodeKey {
    Matched(usize),
    Unmatched(bool, String),
}

type ConnectionKey = (String, (NodeKey, String), (NodeKey, String));

fn connection_keys(
    cfg: &SystemConfiguration,
    side: bool,
    matched: &BTreeMap<&str, usize>,
) -> BTreeMap<ConnectionKey, Vec<String>> {
    let key = |system: &str| match matched.get(system) {
        Some(i) => NodeKey::Matched(*i),
        None => NodeKey::Unmatched(side, system.to_owned()),
    };
    let mut out: BTreeMap<ConnectionKey, Vec<String>> = BTreeMap::new();
    for c in &cfg.connections {
        let mut ends = [(key(&c.a.system), c.a.point.clone()), (key(&c.b.system), c.b.point.clone())];
        ends.sort();
        let [x, y] = ends;
        out.entry((c.domain.clone(), x, y)).or_default().push(c.id.clone());
    }
    for ids in out.values_mut() {
        ids.sort();
    }
    out
}

fn attribute_changes(sa: &SystemNode, sb: &SystemNode) -> Vec<AttributeChange> {
    let names: BTreeSet<&str> = sa.attributes.iter().chain(&sb.attributes).map(|a| a.name.as_str()).collect();
    names
        .into_iter()
        .filter_map(|name| {
            let va = sa.attribute(name);
            let vb = sb.attribute(name);
            let same = match (va, vb) {
                (Some(x), Some(y)) => x.value == y.value && x.unit == y.unit,
                _ => false,
            };
            (!same).then(|| AttributeChange {
                system_a: sa.id.clone(),
                system_b: sb.id.clone(),
                attribute: name.to_owned(),
                value_a: va.map(|a| a.value.clone()),
                value_b: vb.map(|a| a.value.clone()),
            })
        })
        .collect()
}

pub fn diff_configurations(a: &SystemConfiguration, b: &SystemConfiguration) -> ConfigDiff {
    let pairs = match_systems(&a.systems, &b.systems);
    let matched_a: BTreeMap<&str, usize> = pairs.iter().enumerate().map(|(i, (x, _))| (x.id.as_str(), i)).collect();
    let matched_b: BTreeMap<&str, usize> = pairs.iter().enumerate().map(|(i, (_, y))| (y.id.as_str(), i)).collect();

    let mut removed_systems: Vec<String> =
        a.systems.iter().filter(|s| !matched_a.contains_key(s.id.as_str())).map(|s| s.id.clone()).collect();
    let mut added_systems: Vec<String> =
        b.systems.iter().filter(|s| !matched_b.contains_key(s.id.as_str())).map(|s| s.id.clone()).collect();
    removed_systems.sort();
    added_systems.sort();

    let changed_attributes = pairs.iter().flat_map(|(x, y)| attribute_changes(x, y)).collect();

    let ka = connection_keys(a, false, &matched_a);
    let kb = connection_keys(b, true, &matched_b);
    let mut removed_connections = Vec::new();
    let mut added_connections = Vec::new();
    for (k, ids) in &ka {
        let other = kb.get(k).map_or(0, Vec::len);
        removed_connections.extend(ids.iter().skip(other).cloned());
    }
    for (k, ids) in &kb {
        let other = ka.get(k).map_or(0, Vec::len);
        added_connections.extend(ids.iter().skip(other).cloned());
    }
    removed_connections.sort();
    added_connections.sort();

    ConfigDiff {
        id_a: a.id.clone(),
        id_b: b.id.clone(),
        added_systems,
        removed_systems,
        changed_attributes,
        added_connections,
        removed_connections,
    }
}
