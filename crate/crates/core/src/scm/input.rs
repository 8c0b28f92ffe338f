use std::collections::BTreeSet;

use serde::Deserialize;

use super::{AttrValue, Attribute, ConnectionEdge, ConnectionPoint, Endpoint, Role, ScmError, SystemConfiguration, SystemNode};
use crate::report::line_column;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    id: String,
    #[serde(default)]
    test_setup: bool,
    #[serde(default)]
    domains: Vec<String>,
    #[serde(default)]
    system: Vec<SystemDoc>,
    #[serde(default)]
    connection: Vec<ConnectionDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    id: String,
    #[serde(rename = "type")]
    system_type: String,
    role: Option<String>,
    label: Option<String>,
    #[serde(default)]
    point: Vec<PointDoc>,
    #[serde(default)]
    attribute: Vec<AttributeDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    id: String,
    domain: String,
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ValueDoc {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AttributeDoc {
    name: String,
    value: ValueDoc,
    unit: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConnectionDoc {
    id: String,
    from: String,
    to: String,
    domain: String,
}

fn endpoint(text: &str, connection: &str) -> Result<Endpoint, ScmError> {
    match text.split_once('.') {
        Some((s, p)) if !s.is_empty() && !p.is_empty() => Ok(Endpoint::new(s, p)),
        _ => Err(ScmError::Malformed(format!(
            "connection {connection}: endpoint {text:?} is not of the form system.point"
        ))),
    }
}

/// Parses the TOML configuration format. When `domains` is omitted it is
/// the set of domains used by points and connections.
pub fn parse_config(text: &str) -> Result<SystemConfiguration, ScmError> {
    let doc: ConfigDoc = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        ScmError::Parse {
            line,
            column,
            message: e.message().to_owned(),
        }
    })?;
    let mut cfg = SystemConfiguration::new(&doc.id);
    cfg.is_test_setup = doc.test_setup;
    for s in doc.system {
        let role = match &s.role {
            Some(r) => Some(Role::from_name(r).ok_or_else(|| {
                ScmError::Malformed(format!(
                    "system {}: unknown role {r:?}, expected SuT, TestEquipment or Infrastructure",
                    s.id
                ))
            })?),
            None => None,
        };
        cfg.systems.push(SystemNode {
            id: s.id,
            system_type: s.system_type,
            role,
            label: s.label,
            connection_points: s
                .point
                .into_iter()
                .map(|p| ConnectionPoint { id: p.id, domain: p.domain, label: p.label })
                .collect(),
            attributes: s
                .attribute
                .into_iter()
                .map(|a| Attribute {
                    name: a.name,
                    value: match a.value {
                        ValueDoc::Int(i) => AttrValue::Number(i as f64),
                        ValueDoc::Float(f) => AttrValue::Number(f),
                        ValueDoc::Text(t) => AttrValue::Text(t),
                    },
                    unit: a.unit,
                })
                .collect(),
        });
    }
    for c in doc.connection {
        cfg.connections.push(ConnectionEdge {
            a: endpoint(&c.from, &c.id)?,
            b: endpoint(&c.to, &c.id)?,
            id: c.id,
            domain: c.domain,
        });
    }
    cfg.domains = if doc.domains.is_empty() {
        cfg.used_domains()
    } else {
        doc.domains.into_iter().collect::<BTreeSet<_>>()
    };
    Ok(cfg)
}
