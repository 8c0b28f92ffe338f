use super::{
    format_timestamp, parse_timestamp, Activity, Agent, AgentKind, Entity, EntityKind, ExecutionAccount, ProvError,
    TemplateProcess, TemplateVariable, VariableKind, WorkflowTemplate,
};
use crate::ns::{annot, prov, provx, rdf, rdfs, xsd};
use crate::rdf::{BaseIri, Graph, Iri, Literal, Term};
use crate::store::Store;

fn p(iri: &str) -> Iri {
    Iri::from_static(iri)
}

fn template_iri(base: &BaseIri, id: &str) -> Iri {
    base.mint(&["template", id])
}

fn process_iri(base: &BaseIri, template: &str, id: &str) -> Iri {
    base.mint(&["template", template, "process", id])
}

fn variable_iri(base: &BaseIri, template: &str, id: &str) -> Iri {
    base.mint(&["template", template, "variable", id])
}

/// Template triples: processes carry their position as `processIndex`.
pub fn template_to_rdf(t: &WorkflowTemplate, base: &BaseIri) -> Result<Graph, ProvError> {
    t.validate()?;
    let mut g = Graph::with_standard_prefixes();
    let ty = p(rdf::TYPE);
    let ti = template_iri(base, &t.id);
    g.add(ti.clone(), &ty, p(provx::WORKFLOW_TEMPLATE));
    if let Some(l) = &t.label {
        g.add(ti.clone(), &p(rdfs::LABEL), Literal::string(l));
    }
    for v in &t.variables {
        let vi = variable_iri(base, &t.id, &v.id);
        g.add(ti.clone(), &p(provx::HAS_VARIABLE), vi.clone());
        let class = match v.kind {
            VariableKind::Data => provx::DATA_VARIABLE,
            VariableKind::Parameter => provx::PARAMETER_VARIABLE,
        };
        g.add(vi.clone(), &ty, p(class));
        if let Some(l) = &v.label {
            g.add(vi, &p(rdfs::LABEL), Literal::string(l));
        }
    }
    for (i, proc) in t.processes.iter().enumerate() {
        let pi = process_iri(base, &t.id, &proc.id);
        g.add(ti.clone(), &p(provx::HAS_PROCESS), pi.clone());
        g.add(pi.clone(), &ty, p(provx::TEMPLATE_PROCESS));
        g.add(pi.clone(), &p(provx::PROCESS_INDEX), Literal::integer(i as i64));
        if let Some(l) = &proc.label {
            g.add(pi.clone(), &p(rdfs::LABEL), Literal::string(l));
        }
        for v in &proc.consumes_variables {
            g.add(pi.clone(), &p(provx::CONSUMES_VARIABLE), variable_iri(base, &t.id, v));
        }
        for v in &proc.produces_variables {
            g.add(pi.clone(), &p(provx::PRODUCES_VARIABLE), variable_iri(base, &t.id, v));
        }
    }
    Ok(g)
}

/// Account triples. Template links are minted from the account's template
/// id; passing the template additionally checks that they resolve.
pub fn to_prov_rdf(
    exec: &ExecutionAccount,
    template: Option<&WorkflowTemplate>,
    base: &BaseIri,
) -> Result<Graph, ProvError> {
    exec.validate(template)?;
    let mut g = Graph::with_standard_prefixes();
    let ty = p(rdf::TYPE);
    let label = p(rdfs::LABEL);
    let part_of = p(provx::IS_PART_OF_ACCOUNT);
    let ai = base.mint(&["account", &exec.id]);
    g.add(ai.clone(), &ty, p(provx::WORKFLOW_EXECUTION_ACCOUNT));
    if let Some(l) = &exec.label {
        g.add(ai.clone(), &label, Literal::string(l));
    }
    if let Some(t) = &exec.template {
        g.add(ai.clone(), &p(provx::CORRESPONDS_TO_TEMPLATE), template_iri(base, t));
    }
    let entity = |id: &str| base.mint(&["entity", id]);
    let agent = |id: &str| base.mint(&["agent", id]);

    for a in &exec.agents {
        let n = agent(&a.id);
        g.add(n.clone(), &ty, p(prov::AGENT));
        g.add(n.clone(), &part_of, ai.clone());
        g.add(n.clone(), &p(provx::AGENT_KIND), Literal::string(a.kind.name()));
        if let Some(l) = &a.label {
            g.add(n, &label, Literal::string(l));
        }
    }
    for e in &exec.entities {
        let n = entity(&e.id);
        g.add(n.clone(), &ty, p(prov::ENTITY));
        match e.kind {
            EntityKind::Entity => 0,
            EntityKind::Dataset => g.add(n.clone(), &ty, p(annot::DATASET)),
            EntityKind::LogFile => g.add(n.clone(), &ty, p(annot::LOG_FILE)),
        };
        g.add(n.clone(), &part_of, ai.clone());
        if let Some(l) = &e.label {
            g.add(n.clone(), &label, Literal::string(l));
        }
        if let (Some(v), Some(t)) = (&e.variable, &exec.template) {
            g.add(n.clone(), &p(provx::CORRESPONDS_TO_TEMPLATE_ARTIFACT), variable_iri(base, t, v));
        }
        for d in &e.derived_from {
            g.add(n.clone(), &p(prov::WAS_DERIVED_FROM), entity(d));
        }
    }
    let dt = |t| Literal::typed(format_timestamp(t), p(xsd::DATE_TIME));
    for a in &exec.activities {
        let n = base.mint(&["activity", &a.id]);
        g.add(n.clone(), &ty, p(prov::ACTIVITY));
        g.add(n.clone(), &part_of, ai.clone());
        if let Some(l) = &a.label {
            g.add(n.clone(), &label, Literal::string(l));
        }
        g.add(n.clone(), &p(prov::WAS_ASSOCIATED_WITH), agent(&a.agent));
        g.add(n.clone(), &p(prov::STARTED_AT_TIME), dt(&a.start));
        g.add(n.clone(), &p(prov::ENDED_AT_TIME), dt(&a.end));
        if let (Some(proc), Some(t)) = (&a.template_process, &exec.template) {
            g.add(n.clone(), &p(provx::CORRESPONDS_TO_TEMPLATE_PROCESS), process_iri(base, t, proc));
        }
        for e in &a.used {
            g.add(n.clone(), &p(prov::USED), entity(e));
        }
        for e in &a.generated {
            g.add(entity(e), &p(prov::WAS_GENERATED_BY), n.clone());
        }
    }
    Ok(g)
}

/// Last path or fragment segment of an IRI, percent-decoded.
fn local_id(term: &Term) -> Result<String, ProvError> {
    let iri = term
        .as_iri()
        .ok_or_else(|| ProvError::Malformed(format!("{term} is not an IRI")))?
        .as_str();
    let last = iri.rsplit(['/', '#']).next().unwrap_or(iri);
    percent_encoding::percent_decode_str(last)
        .decode_utf8()
        .map(|s| s.into_owned())
        .map_err(|_| ProvError::Malformed(format!("{term} has an undecodable local part")))
}

fn sorted_ids(terms: Vec<Term>) -> Result<Vec<String>, ProvError> {
    let mut ids = terms.iter().map(local_id).collect::<Result<Vec<_>, _>>()?;
    ids.sort();
    Ok(ids)
}

struct Reader<'a>(&'a Store);

impl Reader<'_> {
    fn objects(&self, s: &Term, prop: &str) -> Vec<Term> {
        let mut v = self.0.objects(s, &p(prop));
        v.sort();
        v
    }

    fn optional(&self, s: &Term, prop: &str) -> Result<Option<Term>, ProvError> {
        let mut v = self.objects(s, prop);
        match v.len() {
            0 => Ok(None),
            1 => Ok(Some(v.remove(0))),
            n => Err(ProvError::Malformed(format!("{s} has {n} values for <{prop}>"))),
        }
    }

    fn one(&self, s: &Term, prop: &str) -> Result<Term, ProvError> {
        self.optional(s, prop)?
            .ok_or_else(|| ProvError::Malformed(format!("{s} has no value for <{prop}>")))
    }

    fn label(&self, s: &Term) -> Result<Option<String>, ProvError> {
        Ok(self.optional(s, rdfs::LABEL)?.and_then(|t| t.as_literal().map(|l| l.lexical().to_owned())))
    }

    fn time(&self, s: &Term, prop: &str) -> Result<chrono::DateTime<chrono::Utc>, ProvError> {
        let t = self.one(s, prop)?;
        let lit = t
            .as_literal()
            .ok_or_else(|| ProvError::Malformed(format!("{s} <{prop}> is not a literal")))?;
        parse_timestamp(lit.lexical())
    }

    fn is(&self, s: &Term, class: &str) -> bool {
        self.0.has_type(s, &p(class))
    }
}

/// Every workflow template in the graph, processes in `processIndex` order.
pub fn templates_from_rdf(graph: &Graph) -> Result<Vec<WorkflowTemplate>, ProvError> {
    let store = Store::from_graph(graph);
    let r = Reader(&store);
    let mut out = Vec::new();
    for node in store.instances_of(&p(provx::WORKFLOW_TEMPLATE)) {
        let mut t = WorkflowTemplate::new(&local_id(&node)?);
        t.label = r.label(&node)?;
        for v in r.objects(&node, provx::HAS_VARIABLE) {
            let kind = if r.is(&v, provx::PARAMETER_VARIABLE) {
                VariableKind::Parameter
            } else {
                VariableKind::Data
            };
            t.variables.push(TemplateVariable { id: local_id(&v)?, kind, label: r.label(&v)? });
        }
        let mut procs = Vec::new();
        for pn in r.objects(&node, provx::HAS_PROCESS) {
            let index = r
                .one(&pn, provx::PROCESS_INDEX)?
                .as_literal()
                .and_then(|l| l.lexical().parse::<i64>().ok())
                .ok_or_else(|| ProvError::Malformed(format!("{pn} has a non-integer process index")))?;
            procs.push((
                index,
                TemplateProcess {
                    id: local_id(&pn)?,
                    label: r.label(&pn)?,
                    consumes_variables: sorted_ids(r.objects(&pn, provx::CONSUMES_VARIABLE))?,
                    produces_variables: sorted_ids(r.objects(&pn, provx::PRODUCES_VARIABLE))?,
                },
            ));
        }
        procs.sort_by(|a, b| (a.0, &a.1.id).cmp(&(b.0, &b.1.id)));
        t.processes = procs.into_iter().map(|(_, p)| p).collect();
        t.validate()?;
        out.push(t);
    }
    Ok(out)
}

/// Every execution account in the graph. Members are the nodes declaring
/// `isPartOfAccount`; lists come back sorted by id.
pub fn accounts_from_rdf(graph: &Graph) -> Result<Vec<ExecutionAccount>, ProvError> {
    let store = Store::from_graph(graph);
    let r = Reader(&store);
    let mut out = Vec::new();
    for node in store.instances_of(&p(provx::WORKFLOW_EXECUTION_ACCOUNT)) {
        let mut acc = ExecutionAccount::new(&local_id(&node)?);
        acc.label = r.label(&node)?;
        acc.template = r.optional(&node, provx::CORRESPONDS_TO_TEMPLATE)?.map(|t| local_id(&t)).transpose()?;
        let mut members = store.subjects(&p(provx::IS_PART_OF_ACCOUNT), &node);
        members.sort();
        for m in &members {
            if r.is(m, prov::AGENT) {
                let kind = r
                    .one(m, provx::AGENT_KIND)?
                    .as_literal()
                    .and_then(|l| AgentKind::from_name(l.lexical()))
                    .ok_or_else(|| ProvError::Malformed(format!("{m} has an unknown agent kind")))?;
                acc.agents.push(Agent { id: local_id(m)?, label: r.label(m)?, kind });
            }
            if r.is(m, prov::ENTITY) {
                let kind = if r.is(m, annot::DATASET) {
                    EntityKind::Dataset
                } else if r.is(m, annot::LOG_FILE) {
                    EntityKind::LogFile
                } else {
                    EntityKind::Entity
                };
                acc.entities.push(Entity {
                    id: local_id(m)?,
                    label: r.label(m)?,
                    kind,
                    variable: r.optional(m, provx::CORRESPONDS_TO_TEMPLATE_ARTIFACT)?.map(|v| local_id(&v)).transpose()?,
                    derived_from: sorted_ids(r.objects(m, prov::WAS_DERIVED_FROM))?,
                });
            }
            if r.is(m, prov::ACTIVITY) {
                acc.activities.push(Activity {
                    id: local_id(m)?,
                    label: r.label(m)?,
                    template_process: r
                        .optional(m, provx::CORRESPONDS_TO_TEMPLATE_PROCESS)?
                        .map(|t| local_id(&t))
                        .transpose()?,
                    agent: local_id(&r.one(m, prov::WAS_ASSOCIATED_WITH)?)?,
                    start: r.time(m, prov::STARTED_AT_TIME)?,
                    end: r.time(m, prov::ENDED_AT_TIME)?,
                    used: sorted_ids(r.objects(m, prov::USED))?,
                    generated: sorted_ids(store.subjects(&p(prov::WAS_GENERATED_BY), m))?,
                });
            }
        }
        acc.validate(None)?;
        out.push(acc);
    }
    Ok(out)
}
