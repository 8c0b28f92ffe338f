use std::collections::BTreeMap;

use serde::Serialize;

use super::derivation_cycles;
use crate::ns::{annot, htd, prov, provx, scm, standard_prefixes};
use crate::rdf::{shrink_with, Iri, Term};
use crate::report::{Finding, Report, Status};
use crate::store::Store;
use crate::vocab::{Severity, ShapeRule};

/// One rule of a reproducibility profile. R1 to R7 are built in; any shape
/// rule can be added to a profile as well.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileRule {
    /// R1: every dataset and log file has a generating activity.
    ResultGenerated,
    /// R2: every activity is associated with an agent.
    ActivityAssociated,
    /// R3: every activity has start and end times.
    ActivityTimed,
    /// R4: every test execution references a test specification.
    ExecutionSpecification,
    /// R5: every test execution references a system configuration.
    ExecutionConfiguration,
    /// R6: activities of a templated account correspond to processes of
    /// that template, and every template process has such an activity.
    TemplateCorrespondence,
    /// R7: every phenomenon required by an executed specification is
    /// recorded in a log of that execution.
    PhenomenaRecorded,
    Shape(ShapeRule),
}

pub fn default_profile() -> Vec<ProfileRule> {
    use ProfileRule::*;
    vec![
        ResultGenerated,
        ActivityAssociated,
        ActivityTimed,
        ExecutionSpecification,
        ExecutionConfiguration,
        TemplateCorrespondence,
        PhenomenaRecorded,
    ]
}

impl ProfileRule {
    pub fn id(&self) -> &str {
        match self {
            ProfileRule::ResultGenerated => "R1",
            ProfileRule::ActivityAssociated => "R2",
            ProfileRule::ActivityTimed => "R3",
            ProfileRule::ExecutionSpecification => "R4",
            ProfileRule::ExecutionConfiguration => "R5",
            ProfileRule::TemplateCorrespondence => "R6",
            ProfileRule::PhenomenaRecorded => "R7",
            ProfileRule::Shape(r) => &r.id,
        }
    }

    /// Built-in rule by id (`R1` to `R7`).
    pub fn builtin(id: &str) -> Option<Self> {
        default_profile().into_iter().find(|r| r.id().eq_ignore_ascii_case(id))
    }

    fn severity(&self) -> Severity {
        match self {
            ProfileRule::Shape(r) => r.severity,
            _ => Severity::Violation,
        }
    }

    /// Every target of the rule with `None` when satisfied or the failure
    /// message otherwise.
    fn evaluate(&self, store: &Store) -> Vec<(Term, Option<String>)> {
        let ctx = Ctx { store, prefixes: standard_prefixes().into_iter().map(|(a, b)| (a.to_owned(), b.to_owned())).collect() };
        match self {
            ProfileRule::ResultGenerated => {
                let mut targets = ctx.instances(annot::DATASET);
                targets.extend(ctx.instances(annot::LOG_FILE));
                targets.sort();
                targets.dedup();
                targets
                    .into_iter()
                    .map(|e| {
                        let ok = !ctx.objects(&e, prov::WAS_GENERATED_BY).is_empty();
                        (e, (!ok).then(|| "result entity has no generating activity".to_owned()))
                    })
                    .collect()
            }
            ProfileRule::ActivityAssociated => ctx
                .instances(prov::ACTIVITY)
                .into_iter()
                .map(|a| {
                    let ok = !ctx.objects(&a, prov::WAS_ASSOCIATED_WITH).is_empty();
                    (a, (!ok).then(|| "activity is not associated with an agent".to_owned()))
                })
                .collect(),
            ProfileRule::ActivityTimed => ctx
                .instances(prov::ACTIVITY)
                .into_iter()
                .map(|a| {
                    let missing: Vec<&str> = [(prov::STARTED_AT_TIME, "start"), (prov::ENDED_AT_TIME, "end")]
                        .into_iter()
                        .filter(|(p, _)| ctx.objects(&a, p).is_empty())
                        .map(|(_, n)| n)
                        .collect();
                    let msg = (!missing.is_empty()).then(|| format!("activity lacks {} time", missing.join(" and ")));
                    (a, msg)
                })
                .collect(),
            ProfileRule::ExecutionSpecification => {
                ctx.linked(htd::EXECUTES_SPECIFICATION, htd::TEST_SPECIFICATION, "test execution references no test specification")
            }
            ProfileRule::ExecutionConfiguration => ctx.linked(
                htd::EXECUTED_ON_CONFIGURATION,
                scm::SYSTEM_CONFIGURATION,
                "test execution references no system configuration",
            ),
            ProfileRule::TemplateCorrespondence => ctx.template_correspondence(),
            ProfileRule::PhenomenaRecorded => ctx.phenomena_recorded(),
            ProfileRule::Shape(rule) => ctx
                .store
                .instances_of(&rule.target_class)
                .into_iter()
                .map(|f| {
                    let ok = rule.holds_for(store, &f);
                    (f, (!ok).then(|| rule.message.clone()))
                })
                .collect(),
        }
    }
}

struct Ctx<'a> {
    store: &'a Store,
    prefixes: BTreeMap<String, String>,
}

impl Ctx<'_> {
    fn instances(&self, class: &str) -> Vec<Term> {
        self.store.instances_of(&Iri::from_static(class))
    }

    fn objects(&self, s: &Term, p: &str) -> Vec<Term> {
        let mut v = self.store.objects(s, &Iri::from_static(p));
        v.sort();
        v
    }

    fn subjects(&self, p: &str, o: &Term) -> Vec<Term> {
        let mut v = self.store.subjects(&Iri::from_static(p), o);
        v.sort();
        v
    }

    fn is(&self, s: &Term, class: &str) -> bool {
        self.store.has_type(s, &Iri::from_static(class))
    }

    fn show(&self, t: &Term) -> String {
        match t.as_iri().and_then(|i| shrink_with(&self.prefixes, i.as_str())) {
            Some(short) => short,
            None => t.to_string(),
        }
    }

    fn linked(&self, property: &str, class: &str, message: &str) -> Vec<(Term, Option<String>)> {
        self.instances(htd::TEST_EXECUTION)
            .into_iter()
            .map(|e| {
                let ok = self.objects(&e, property).iter().any(|o| self.is(o, class));
                (e, (!ok).then(|| message.to_owned()))
            })
            .collect()
    }

    fn template_correspondence(&self) -> Vec<(Term, Option<String>)> {
        let mut out = Vec::new();
        for account in self.instances(provx::WORKFLOW_EXECUTION_ACCOUNT) {
            let templates = self.objects(&account, provx::CORRESPONDS_TO_TEMPLATE);
            if templates.is_empty() {
                continue;
            }
            let processes: Vec<Term> =
                templates.iter().flat_map(|t| self.objects(t, provx::HAS_PROCESS)).collect();
            let activities: Vec<Term> = self
                .subjects(provx::IS_PART_OF_ACCOUNT, &account)
                .into_iter()
                .filter(|m| self.is(m, prov::ACTIVITY))
                .collect();
            for a in &activities {
                let ok = self
                    .objects(a, provx::CORRESPONDS_TO_TEMPLATE_PROCESS)
                    .iter()
                    .any(|p| processes.contains(p));
                out.push((a.clone(), (!ok).then(|| "activity corresponds to no process of the account's template".to_owned())));
            }
            for p in &processes {
                let ok = activities
                    .iter()
                    .any(|a| self.objects(a, provx::CORRESPONDS_TO_TEMPLATE_PROCESS).contains(p));
                let msg = (!ok).then(|| format!("template process {} has no executing activity", self.show(p)));
                out.push((account.clone(), msg));
            }
        }
        out
    }

    fn phenomena_recorded(&self) -> Vec<(Term, Option<String>)> {
        let mut out = Vec::new();
        for e in self.instances(htd::TEST_EXECUTION) {
            let mut recorded: Vec<Term> = self
                .objects(&e, htd::RECORDED_IN)
                .iter()
                .flat_map(|log| self.objects(log, annot::STORES_MEASUREMENT))
                .flat_map(|m| self.objects(&m, annot::RECORDS_PHENOMENON))
                .collect();
            recorded.sort();
            let mut required: Vec<Term> = self
                .objects(&e, htd::EXECUTES_SPECIFICATION)
                .iter()
                .flat_map(|s| self.objects(s, htd::REQUIRES_PHENOMENON))
                .collect();
            required.sort();
            required.dedup();
            for ph in required {
                let ok = recorded.binary_search(&ph).is_ok();
                let msg = (!ok).then(|| format!("required phenomenon {} is not recorded", self.show(&ph)));
                out.push((e.clone(), msg));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RuleTally {
    pub instances: usize,
    pub satisfied: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompletenessReport {
    /// Weighted fraction of satisfied rule instances; 1.0 when there are none.
    pub score: f64,
    pub instances: usize,
    pub satisfied: usize,
    pub per_rule: BTreeMap<String, RuleTally>,
    pub findings: Vec<Finding>,
}

impl CompletenessReport {
    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.is_violation())
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("completeness")
            .with_summary("score", self.score)
            .with_summary("instances", self.instances)
            .with_summary("satisfied", self.satisfied)
            .with_findings(self.findings.iter().cloned())
            .status_from_findings();
        if r.status == Status::Pass && self.satisfied < self.instances {
            r.status = Status::Fail;
        }
        r
    }
}

pub fn check_completeness(store: &Store, profile: &[ProfileRule]) -> CompletenessReport {
    check_completeness_weighted(store, profile, &BTreeMap::new())
}

/// Rule ids missing from `weights` weigh 1.
pub fn check_completeness_weighted(
    store: &Store,
    profile: &[ProfileRule],
    weights: &BTreeMap<String, f64>,
) -> CompletenessReport {
    let mut per_rule: BTreeMap<String, RuleTally> = BTreeMap::new();
    let mut findings = Vec::new();
    let (mut num, mut den) = (0.0, 0.0);
    for rule in profile {
        let results = rule.evaluate(store);
        let tally = per_rule.entry(rule.id().to_owned()).or_default();
        let w = weights.get(rule.id()).copied().unwrap_or(1.0);
        for (focus, failure) in results {
            tally.instances += 1;
            den += w;
            match failure {
                None => {
                    tally.satisfied += 1;
                    num += w;
                }
                Some(message) => findings.push(Finding {
                    code: rule.id().to_owned(),
                    severity: rule.severity(),
                    subject: focus.to_string(),
                    message,
                }),
            }
        }
    }
    let instances = per_rule.values().map(|t| t.instances).sum();
    let satisfied = per_rule.values().map(|t| t.satisfied).sum();
    if instances == 0 {
        findings.push(Finding::warning("no-targets", "store", "no targets"));
    }
    for e in derivation_cycles(store) {
        findings.push(Finding::warning("prov-derivation-cycle", e.to_string(), "entity is its own ancestor"));
    }
    findings.sort();
    findings.dedup();
    CompletenessReport {
        score: if den > 0.0 { num / den } else { 1.0 },
        instances,
        satisfied,
        per_rule,
        findings,
    }
}
