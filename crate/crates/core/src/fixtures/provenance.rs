//! Provenance fixtures: the digital-twin workflow, the generic testing
//! process, and the power-reduction procedure with and without its ramp
//! steps recorded.

use crate::prov::{
    parse_timestamp, Activity, Agent, AgentKind, Entity, EntityKind, ExecutionAccount, TemplateProcess,
    TemplateVariable, VariableKind, WorkflowTemplate,
};

fn agent(id: &str, label: &str, kind: AgentKind) -> Agent {
    Agent { id: id.into(), label: Some(label.into()), kind }
}

fn entity(id: &str, label: &str, kind: EntityKind, variable: Option<&str>) -> Entity {
    Entity {
        id: id.into(),
        label: Some(label.into()),
        kind,
        variable: variable.map(Into::into),
        derived_from: Vec::new(),
    }
}

fn activity(
    id: &str,
    process: Option<&str>,
    agent: &str,
    span: (&str, &str),
    used: &[&str],
    generated: &[&str],
) -> Activity {
    let ts = |t: &str| parse_timestamp(t).expect("fixture timestamp");
    Activity {
        id: id.into(),
        label: None,
        template_process: process.map(Into::into),
        agent: agent.into(),
        start: ts(span.0),
        end: ts(span.1),
        used: used.iter().map(|s| s.to_string()).collect(),
        generated: generated.iter().map(|s| s.to_string()).collect(),
    }
}

fn process(id: &str, label: &str, consumes: &[&str], produces: &[&str]) -> TemplateProcess {
    TemplateProcess {
        id: id.into(),
        label: Some(label.into()),
        consumes_variables: consumes.iter().map(|s| s.to_string()).collect(),
        produces_variables: produces.iter().map(|s| s.to_string()).collect(),
    }
}

fn variable(id: &str, kind: VariableKind, label: &str) -> TemplateVariable {
    TemplateVariable { id: id.into(), kind, label: Some(label.into()) }
}

/// Twin trained on DS1 with a model configuration and code, then applied to
/// DS2 to produce DS3.
pub fn digital_twin_account() -> ExecutionAccount {
    let mut a = ExecutionAccount::new("digital-twin");
    a.label = Some("PV digital twin training and application".into());
    a.agents = vec![agent("analyst", "PV analyst", AgentKind::Person)];
    a.entities = vec![
        entity("DS1", "reference dataset with irradiance, measured power and system metadata", EntityKind::Dataset, None),
        entity("modelConfig", "twin model configuration", EntityKind::Entity, None),
        entity("code", "twin training and inference code", EntityKind::Entity, None),
        entity("twinModel", "trained PV digital twin", EntityKind::Entity, None),
        entity("DS2", "site dataset with irradiation and basic parameters", EntityKind::Dataset, None),
        entity("DS3", "enriched output dataset with predicted PV power", EntityKind::Dataset, None),
    ];
    a.activities = vec![
        activity(
            "trainTwin",
            None,
            "analyst",
            ("2025-03-03T09:00:00Z", "2025-03-03T11:30:00Z"),
            &["DS1", "modelConfig", "code"],
            &["twinModel"],
        ),
        activity(
            "applyTwin",
            None,
            "analyst",
            ("2025-03-04T10:00:00Z", "2025-03-04T10:20:00Z"),
            &["twinModel", "DS2"],
            &["DS3"],
        ),
    ];
    a
}

/// Specify, configure the lab, execute, evaluate.
pub fn testing_process_template() -> WorkflowTemplate {
    use VariableKind::*;
    let mut t = WorkflowTemplate::new("testing-process");
    t.label = Some("Test specification to verdict".into());
    t.variables = vec![
        variable("standardParameters", Parameter, "parameters of the applied standard"),
        variable("testSpecification", Data, "test specification"),
        variable("labConfiguration", Data, "lab system configuration"),
        variable("testLog", Data, "measurement log"),
        variable("verdict", Data, "test verdict"),
    ];
    t.processes = vec![
        process("specifyTest", "specify test", &["standardParameters"], &["testSpecification"]),
        process("configureLab", "configure lab", &["testSpecification"], &["labConfiguration"]),
        process("executeTest", "execute test", &["testSpecification", "labConfiguration"], &["testLog"]),
        process("evaluateTest", "evaluate test", &["testSpecification", "testLog"], &["verdict"]),
    ];
    t
}

pub fn testing_process_account() -> ExecutionAccount {
    let mut a = ExecutionAccount::new("testing-process-run");
    a.label = Some("One run of the testing process".into());
    a.template = Some("testing-process".into());
    a.agents = vec![
        agent("engineer", "test engineer", AgentKind::Person),
        agent("lab", "test laboratory", AgentKind::Organization),
        agent("evaluator", "evaluation script", AgentKind::SoftwareAgent),
    ];
    a.entities = vec![
        entity("standard", "EN 50549-10 parameters", EntityKind::Entity, Some("standardParameters")),
        entity("spec", "power reduction test specification", EntityKind::Entity, Some("testSpecification")),
        entity("labConfig", "inverter test setup", EntityKind::Entity, Some("labConfiguration")),
        entity("log", "measurement log", EntityKind::LogFile, Some("testLog")),
        entity("verdict", "verdict", EntityKind::Entity, Some("verdict")),
    ];
    a.activities = vec![
        activity(
            "specify",
            Some("specifyTest"),
            "engineer",
            ("2025-02-10T08:00:00Z", "2025-02-10T12:00:00Z"),
            &["standard"],
            &["spec"],
        ),
        activity(
            "configure",
            Some("configureLab"),
            "lab",
            ("2025-02-11T08:00:00Z", "2025-02-11T10:00:00Z"),
            &["spec"],
            &["labConfig"],
        ),
        activity(
            "execute",
            Some("executeTest"),
            "lab",
            ("2025-02-11T10:30:00Z", "2025-02-11T11:00:00Z"),
            &["spec", "labConfig"],
            &["log"],
        ),
        activity(
            "evaluate",
            Some("evaluateTest"),
            "evaluator",
            ("2025-02-11T11:05:00Z", "2025-02-11T11:06:00Z"),
            &["spec", "log"],
            &["verdict"],
        ),
    ];
    a
}

/// Active power reduction procedure with separate ramp-down and ramp-up steps.
pub fn apr_procedure_template() -> WorkflowTemplate {
    use VariableKind::*;
    let mut t = WorkflowTemplate::new("apr-procedure");
    t.label = Some("Active power reduction procedure".into());
    t.variables = vec![
        variable("labConfiguration", Data, "prepared test setup"),
        variable("rampDownLog", Data, "log of the 0.9 to 0.1 pu steps"),
        variable("rampUpLog", Data, "log of the 0.3, 0.6 and 1.0 pu steps"),
        variable("verdict", Data, "test verdict"),
    ];
    t.processes = vec![
        process("prepareSetup", "prepare setup at nominal power", &[], &["labConfiguration"]),
        process("rampDown", "reduce setpoint in 0.1 pu steps", &["labConfiguration"], &["rampDownLog"]),
        process("rampUp", "restore setpoint in three steps", &["labConfiguration"], &["rampUpLog"]),
        process("evaluateLevels", "evaluate one-minute level means", &["rampDownLog", "rampUpLog"], &["verdict"]),
    ];
    t
}

fn apr_agents() -> Vec<Agent> {
    vec![
        agent("ucd", "University College Dublin", AgentKind::Organization),
        agent("evaluator", "testkg evaluate", AgentKind::SoftwareAgent),
    ]
}

/// Every template process has a recorded activity.
pub fn apr_complete_account() -> ExecutionAccount {
    let mut a = ExecutionAccount::new("ucd-apr-run");
    a.template = Some("apr-procedure".into());
    a.agents = apr_agents();
    a.entities = vec![
        entity("setup", "UCD inverter setup", EntityKind::Entity, Some("labConfiguration")),
        entity("rampDownLog", "ramp-down log", EntityKind::LogFile, Some("rampDownLog")),
        entity("rampUpLog", "ramp-up log", EntityKind::LogFile, Some("rampUpLog")),
        entity("aprVerdict", "power reduction verdict", EntityKind::Entity, Some("verdict")),
    ];
    a.activities = vec![
        activity("prepare", Some("prepareSetup"), "ucd", ("2025-01-20T09:00:00Z", "2025-01-20T09:40:00Z"), &[], &["setup"]),
        activity(
            "rampDown",
            Some("rampDown"),
            "ucd",
            ("2025-01-20T10:00:00Z", "2025-01-20T10:18:00Z"),
            &["setup"],
            &["rampDownLog"],
        ),
        activity(
            "rampUp",
            Some("rampUp"),
            "ucd",
            ("2025-01-20T10:18:00Z", "2025-01-20T10:24:00Z"),
            &["setup"],
            &["rampUpLog"],
        ),
        activity(
            "evaluate",
            Some("evaluateLevels"),
            "evaluator",
            ("2025-01-21T08:00:00Z", "2025-01-21T08:00:05Z"),
            &["rampDownLog", "rampUpLog"],
            &["aprVerdict"],
        ),
    ];
    a
}

/// The run as the lab log records it: one undifferentiated sequence
/// activity instead of the ramp-down and ramp-up steps.
pub fn apr_ramping_gap_account() -> ExecutionAccount {
    let mut a = ExecutionAccount::new("ucd-apr-run-logged");
    a.template = Some("apr-procedure".into());
    a.agents = apr_agents();
    a.entities = vec![
        entity("setup", "UCD inverter setup", EntityKind::Entity, Some("labConfiguration")),
        entity("sequenceLog", "power reduction log", EntityKind::LogFile, None),
        entity("aprVerdict", "power reduction verdict", EntityKind::Entity, Some("verdict")),
    ];
    a.activities = vec![
        activity("prepare", Some("prepareSetup"), "ucd", ("2025-01-20T09:00:00Z", "2025-01-20T09:40:00Z"), &[], &["setup"]),
        activity(
            "runSequence",
            None,
            "ucd",
            ("2025-01-20T10:00:00Z", "2025-01-20T10:24:00Z"),
            &["setup"],
            &["sequenceLog"],
        ),
        activity(
            "evaluate",
            Some("evaluateLevels"),
            "evaluator",
            ("2025-01-21T08:00:00Z", "2025-01-21T08:00:05Z"),
            &["sequenceLog"],
            &["aprVerdict"],
        ),
    ];
    a
}
