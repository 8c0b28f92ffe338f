use std::collections::BTreeMap;

use serde::Serialize;

use super::{ExecutionAccount, ProvError, WorkflowTemplate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundProcess {
    pub process: String,
    pub activity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Binding {
    /// In template order.
    pub bound_processes: Vec<BoundProcess>,
    pub unbound_template_processes: Vec<String>,
    pub extra_activities: Vec<String>,
}

/// Pairs template processes with the activities that claim them. When
/// several activities claim one process the first binds and the rest are
/// extra, so both sides stay partitioned.
pub fn bind_execution(template: &WorkflowTemplate, exec: &ExecutionAccount) -> Result<Binding, ProvError> {
    if exec.template.as_deref() != Some(template.id.as_str()) {
        return Err(ProvError::TemplateMismatch {
            template: template.id.clone(),
            account: exec.template.clone(),
        });
    }
    let mut claimed: BTreeMap<&str, &str> = BTreeMap::new();
    let mut extra_activities = Vec::new();
    for a in &exec.activities {
        match a.template_process.as_deref() {
            Some(p) if template.process(p).is_some() && !claimed.contains_key(p) => {
                claimed.insert(p, &a.id);
            }
            _ => extra_activities.push(a.id.clone()),
        }
    }
    let mut bound_processes = Vec::new();
    let mut unbound_template_processes = Vec::new();
    for p in &template.processes {
        match claimed.get(p.id.as_str()) {
            Some(a) => bound_processes.push(BoundProcess {
                process: p.id.clone(),
                activity: (*a).to_owned(),
            }),
            None => unbound_template_processes.push(p.id.clone()),
        }
    }
    Ok(Binding {
        bound_processes,
        unbound_template_processes,
        extra_activities,
    })
}
