use super::{ShapeRule, TermRef, Vocabulary};
use crate::ns::{annot, htd, prov, provx, rdfs, scm, xsd};
use crate::rdf::Iri;

fn local(name: &str) -> TermRef {
    TermRef::Local(name.to_owned())
}

fn dt(iri: &str) -> TermRef {
    TermRef::Datatype(Iri::from_static(iri))
}

fn ext(iri: &str) -> TermRef {
    TermRef::External(Iri::from_static(iri))
}

/// Holistic test description terms: test case, specification and
/// experiment layers, plus execution and verdict records.
pub fn htd_vocabulary() -> Vocabulary {
    let mut v = Vocabulary::new("htd", htd::NS);
    v.class("TestCase", "Test case", "Why a test is run and what it investigates.")
        .class("TestSpecification", "Test specification", "How a test case is carried out, independent of a lab.")
        .class("ExperimentSpecification", "Experiment specification", "A test specification bound to a lab setup.")
        .class("ObjectUnderInvestigation", "Object under investigation", "The object whose behaviour is examined.")
        .class("SystemUnderTest", "System under test", "The system exercised by the test.")
        .class("FunctionUnderTest", "Function under test", "The function of the system that is assessed.")
        .class("PurposeOfInvestigation", "Purpose of investigation", "The test objective.")
        .class("TestCriteria", "Test criteria", "Pass/fail criteria and target metrics.")
        .class("TestSystem", "Test system", "Lab infrastructure used to run the test.")
        .class("TestExecution", "Test execution", "One recorded run of a test specification.")
        .class("TestParameter", "Test parameter", "A named parameter value of a specification.")
        .class("TestVerdict", "Test verdict", "The evaluated outcome of an execution.")
        .class("LevelResult", "Level result", "Per-level outcome inside a verdict.");

    v.property("hasSpecification", local("TestCase"), local("TestSpecification"), "has specification")
        .property("hasExperiment", local("TestSpecification"), local("ExperimentSpecification"), "has experiment")
        .property("investigates", local("TestCase"), local("ObjectUnderInvestigation"), "investigates")
        .property("appliesCriteria", local("TestSpecification"), local("TestCriteria"), "applies criteria")
        .property(
            "usesSystemConfiguration",
            local("ExperimentSpecification"),
            ext(scm::SYSTEM_CONFIGURATION),
            "uses system configuration",
        )
        .property("hasPurpose", local("TestCase"), local("PurposeOfInvestigation"), "has purpose")
        .property("includesSuite", local("TestCase"), local("TestCase"), "includes suite")
        .property("standardRef", local("TestSpecification"), dt(xsd::STRING), "standard reference")
        .property("scriptRef", local("TestSpecification"), dt(xsd::STRING), "script reference")
        .property("hasParameter", local("TestSpecification"), local("TestParameter"), "has parameter")
        .property("parameterName", local("TestParameter"), dt(xsd::STRING), "parameter name")
        .property("parameterValue", local("TestParameter"), dt(rdfs::LITERAL), "parameter value")
        .property(
            "executesSpecification",
            local("TestExecution"),
            local("TestSpecification"),
            "executes specification",
        )
        .property(
            "executedOnConfiguration",
            local("TestExecution"),
            ext(scm::SYSTEM_CONFIGURATION),
            "executed on configuration",
        )
        .property("requiresPhenomenon", local("TestSpecification"), ext(annot::PHENOMENON), "requires phenomenon")
        .property("recordedIn", local("TestExecution"), ext(annot::LOG_FILE), "recorded in")
        .property("assessesExecution", local("TestVerdict"), local("TestExecution"), "assesses execution")
        .property(
            "evaluatesSpecification",
            local("TestVerdict"),
            local("TestSpecification"),
            "evaluates specification",
        )
        .property("outcome", local("TestVerdict"), dt(xsd::STRING), "outcome")
        .property("reason", local("TestVerdict"), dt(xsd::STRING), "reason")
        .property("hasLevelResult", local("TestVerdict"), local("LevelResult"), "has level result")
        .property("levelIndex", local("LevelResult"), dt(xsd::INTEGER), "level index")
        .property("expectedLevel", local("LevelResult"), dt(xsd::DECIMAL), "expected level")
        .property("observedMean", local("LevelResult"), dt(xsd::DECIMAL), "observed mean")
        .property("withinTolerance", local("LevelResult"), dt(xsd::BOOLEAN), "within tolerance")
        .property("connected", local("LevelResult"), dt(xsd::BOOLEAN), "connected");

    v.rule(ShapeRule::min_count(
        "htd-test-case-specification",
        htd::TEST_CASE,
        htd::HAS_SPECIFICATION,
        1,
        "test case has no test specification",
    ))
    .rule(ShapeRule::max_count(
        "htd-verdict-outcome-single",
        htd::TEST_VERDICT,
        htd::OUTCOME,
        1,
        "verdict has more than one outcome",
    ))
    .rule(ShapeRule::min_count(
        "htd-verdict-outcome",
        htd::TEST_VERDICT,
        htd::OUTCOME,
        1,
        "verdict has no outcome",
    ))
    .rule(ShapeRule::min_count(
        "htd-verdict-execution",
        htd::TEST_VERDICT,
        htd::ASSESSES_EXECUTION,
        1,
        "verdict is not linked to an execution",
    ))
    .rule(ShapeRule::datatype_is(
        "htd-level-mean-datatype",
        htd::LEVEL_RESULT,
        htd::OBSERVED_MEAN,
        xsd::DECIMAL,
        "observed mean is not a decimal",
    ));
    v
}

pub const DOMAINS: &[(&str, &str)] = &[
    ("ElectricalAC", "Electrical AC"),
    ("ElectricalDC", "Electrical DC"),
    ("ICT", "Information and communication"),
];

pub const SYSTEM_TYPES: &[(&str, &str)] = &[
    ("PVSystem", "PV system"),
    ("PVInverter", "PV inverter"),
    ("Switchboard", "Switchboard"),
    ("ACPowerGrid", "AC power grid"),
    ("GridSimulator", "Grid simulator"),
    ("DCAmplifier", "DC amplifier"),
    ("RealTimeComputer", "Real-time computer"),
    ("SensorSystem", "Sensor system"),
    ("Busbar", "Busbar"),
    ("Network", "Network"),
];

pub const ROLES: &[(&str, &str)] = &[
    ("SuT", "System under test"),
    ("TestEquipment", "Test equipment"),
    ("Infrastructure", "Infrastructure"),
];

/// System configuration terms: typed systems with connection points joined
/// by binary connections in a domain.
pub fn scm_vocabulary() -> Vocabulary {
    let mut v = Vocabulary::new("scm", scm::NS);
    v.class("System", "System", "A device or subsystem in a lab setup.")
        .class("Component", "Component", "A part of a system without its own connection points.")
        .class("ConnectionPoint", "Connection point", "A terminal of a system in one domain.")
        .class("Connection", "Connection", "A link between exactly two connection points.")
        .class("Domain", "Domain", "Physical or communication domain of a connection.")
        .class("Attribute", "Attribute", "A named value with optional unit.")
        .class("SystemConfiguration", "System configuration", "A complete lab topology.")
        .class("SystemType", "System type", "Kind of system.")
        .class("Role", "Role", "Role of a system in a test setup.");

    let resource = || ext(rdfs::RESOURCE);
    v.property("hasSubsystem", local("System"), local("System"), "has subsystem")
        .property("hasConnectionPoint", local("System"), local("ConnectionPoint"), "has connection point")
        .property("connects", local("Connection"), local("ConnectionPoint"), "connects")
        .property("inDomain", local("ConnectionPoint"), local("Domain"), "in domain")
        .property("hasAttribute", local("System"), local("Attribute"), "has attribute")
        .property("hasType", local("System"), local("SystemType"), "has type")
        .property("hasRole", local("System"), local("Role"), "has role")
        .property("identifier", resource(), dt(xsd::STRING), "identifier")
        .property("hasSystem", local("SystemConfiguration"), local("System"), "has system")
        .property("hasConnection", local("SystemConfiguration"), local("Connection"), "has connection")
        .property("usesDomain", local("SystemConfiguration"), local("Domain"), "uses domain")
        .property("isTestSetup", local("SystemConfiguration"), dt(xsd::BOOLEAN), "is test setup")
        .property("attributeName", local("Attribute"), dt(xsd::STRING), "attribute name")
        .property("attributeValue", local("Attribute"), dt(rdfs::LITERAL), "attribute value")
        .property("attributeUnit", local("Attribute"), dt(xsd::STRING), "attribute unit");

    for (name, label) in DOMAINS {
        v.individual(name, local("Domain"), label);
    }
    for (name, label) in SYSTEM_TYPES {
        v.individual(name, local("SystemType"), label);
    }
    for (name, label) in ROLES {
        v.individual(name, local("Role"), label);
    }

    let role_iris: Vec<String> = ROLES.iter().map(|(n, _)| format!("{}{n}", scm::NS)).collect();
    let role_refs: Vec<&str> = role_iris.iter().map(String::as_str).collect();
    v.rule(ShapeRule::min_count(
        "scm-connects-min",
        scm::CONNECTION,
        scm::CONNECTS,
        2,
        "connection has fewer than two endpoints",
    ))
    .rule(ShapeRule::max_count(
        "scm-connects-max",
        scm::CONNECTION,
        scm::CONNECTS,
        2,
        "connection has more than two endpoints",
    ))
    .rule(ShapeRule::min_count(
        "scm-point-domain",
        scm::CONNECTION_POINT,
        scm::IN_DOMAIN,
        1,
        "connection point has no domain",
    ))
    .rule(ShapeRule::max_count(
        "scm-point-domain-single",
        scm::CONNECTION_POINT,
        scm::IN_DOMAIN,
        1,
        "connection point has more than one domain",
    ))
    .rule(ShapeRule::min_count("scm-system-type", scm::SYSTEM, scm::HAS_TYPE, 1, "system has no type"))
    .rule(ShapeRule::max_count(
        "scm-system-type-single",
        scm::SYSTEM,
        scm::HAS_TYPE,
        1,
        "system has more than one type",
    ))
    .rule(ShapeRule::max_count(
        "scm-system-role-single",
        scm::SYSTEM,
        scm::HAS_ROLE,
        1,
        "system has more than one role",
    ))
    .rule(ShapeRule::value_in(
        "scm-system-role",
        scm::SYSTEM,
        scm::HAS_ROLE,
        &role_refs,
        "system role is not a known role",
    ));
    for (class, short) in [
        (scm::SYSTEM_CONFIGURATION, "configuration"),
        (scm::SYSTEM, "system"),
        (scm::CONNECTION_POINT, "point"),
        (scm::CONNECTION, "connection"),
    ] {
        v.rule(ShapeRule::min_count(
            &format!("scm-{short}-identifier"),
            class,
            scm::IDENTIFIER,
            1,
            &format!("{short} has no identifier"),
        ))
        .rule(ShapeRule::max_count(
            &format!("scm-{short}-identifier-single"),
            class,
            scm::IDENTIFIER,
            1,
            &format!("{short} has more than one identifier"),
        ));
    }
    v.rule(ShapeRule::min_count(
        "scm-attribute-name",
        scm::ATTRIBUTE,
        scm::ATTRIBUTE_NAME,
        1,
        "attribute has no name",
    ))
    .rule(ShapeRule::min_count(
        "scm-attribute-value",
        scm::ATTRIBUTE,
        scm::ATTRIBUTE_VALUE,
        1,
        "attribute has no value",
    ));
    v
}

/// PROV core subset plus the workflow template extension.
pub fn prov_vocabulary() -> Vocabulary {
    let mut v = Vocabulary::new("provx", provx::NS);
    v.class_in(prov::NS, "Entity", "Entity", "A physical, digital or conceptual thing.")
        .class_in(prov::NS, "Activity", "Activity", "Something that occurs over time and acts on entities.")
        .class_in(prov::NS, "Agent", "Agent", "Something bearing responsibility for an activity.")
        .class("WorkflowTemplate", "Workflow template", "A planned workflow.")
        .class("TemplateProcess", "Template process", "A planned step of a workflow template.")
        .class("ParameterVariable", "Parameter variable", "A planned parameter input.")
        .class("DataVariable", "Data variable", "A planned data input or output.")
        .class("WorkflowExecutionAccount", "Workflow execution account", "A record of one workflow run.");

    let p = prov::NS;
    v.property_in(p, "wasGeneratedBy", local("Entity"), local("Activity"), "was generated by")
        .property_in(p, "used", local("Activity"), local("Entity"), "used")
        .property_in(p, "wasAssociatedWith", local("Activity"), local("Agent"), "was associated with")
        .property_in(p, "wasDerivedFrom", local("Entity"), local("Entity"), "was derived from")
        .property_in(p, "wasAttributedTo", local("Entity"), local("Agent"), "was attributed to")
        .property_in(p, "startedAtTime", local("Activity"), dt(xsd::DATE_TIME), "started at time")
        .property_in(p, "endedAtTime", local("Activity"), dt(xsd::DATE_TIME), "ended at time")
        .property(
            "correspondsToTemplate",
            local("WorkflowExecutionAccount"),
            local("WorkflowTemplate"),
            "corresponds to template",
        )
        .property(
            "correspondsToTemplateProcess",
            local("Activity"),
            local("TemplateProcess"),
            "corresponds to template process",
        )
        .property(
            "correspondsToTemplateArtifact",
            local("Entity"),
            local("DataVariable"),
            "corresponds to template artifact",
        )
        .property(
            "isPartOfAccount",
            ext(rdfs::RESOURCE),
            local("WorkflowExecutionAccount"),
            "is part of account",
        )
        .property("hasProcess", local("WorkflowTemplate"), local("TemplateProcess"), "has process")
        .property("hasVariable", local("WorkflowTemplate"), local("DataVariable"), "has variable")
        .property("consumesVariable", local("TemplateProcess"), local("DataVariable"), "consumes variable")
        .property("producesVariable", local("TemplateProcess"), local("DataVariable"), "produces variable")
        .property("processIndex", local("TemplateProcess"), dt(xsd::INTEGER), "process index")
        .property("agentKind", local("Agent"), dt(xsd::STRING), "agent kind");

    v.rule(ShapeRule::max_count(
        "prov-generation-unique",
        prov::ENTITY,
        prov::WAS_GENERATED_BY,
        1,
        "entity is generated by more than one activity",
    ))
    .rule(ShapeRule::min_count(
        "prov-activity-association",
        prov::ACTIVITY,
        prov::WAS_ASSOCIATED_WITH,
        1,
        "activity has no associated agent",
    ))
    .rule(ShapeRule::max_count(
        "prov-activity-start-single",
        prov::ACTIVITY,
        prov::STARTED_AT_TIME,
        1,
        "activity has more than one start time",
    ))
    .rule(ShapeRule::max_count(
        "prov-activity-end-single",
        prov::ACTIVITY,
        prov::ENDED_AT_TIME,
        1,
        "activity has more than one end time",
    ))
    .rule(ShapeRule::datatype_is(
        "prov-activity-start-datatype",
        prov::ACTIVITY,
        prov::STARTED_AT_TIME,
        xsd::DATE_TIME,
        "start time is not an xsd:dateTime",
    ))
    .rule(ShapeRule::datatype_is(
        "prov-activity-end-datatype",
        prov::ACTIVITY,
        prov::ENDED_AT_TIME,
        xsd::DATE_TIME,
        "end time is not an xsd:dateTime",
    ))
    .rule(ShapeRule::max_count(
        "provx-account-template-single",
        provx::WORKFLOW_EXECUTION_ACCOUNT,
        provx::CORRESPONDS_TO_TEMPLATE,
        1,
        "account corresponds to more than one template",
    ));
    v
}

pub const PHENOMENA: &[(&str, &str)] = &[
    ("Voltage", "AC voltage"),
    ("Current", "AC current"),
    ("ActivePower", "Active power"),
    ("ReactivePower", "Reactive power"),
];

/// Measurement annotation terms: organisations, datasets, log files and
/// the phenomena their channels record.
pub fn annotation_vocabulary() -> Vocabulary {
    let mut v = Vocabulary::new("annot", annot::NS);
    v.class("Organization", "Organization", "A lab or institution owning data.")
        .class("Dataset", "Dataset", "A published collection of log files.")
        .class("LogFile", "Log file", "One recorded measurement file.")
        .class("Measurement", "Measurement", "One channel of a log file.")
        .class("Phenomenon", "Phenomenon", "The physical quantity a measurement records.")
        .class("Unit", "Unit", "Unit of measure.");

    v.property("owns", local("Organization"), local("Dataset"), "owns")
        .property("provides", local("Organization"), local("Dataset"), "provides")
        .property("containsLogFile", local("Dataset"), local("LogFile"), "contains log file")
        .property("storesMeasurement", local("LogFile"), local("Measurement"), "stores measurement")
        .property("recordsPhenomenon", local("Measurement"), local("Phenomenon"), "records phenomenon")
        .property("hasUnit", local("Measurement"), local("Unit"), "has unit")
        .property("hasTimestamp", local("Measurement"), dt(xsd::DATE_TIME), "has timestamp")
        .property("hasValue", local("Measurement"), dt(xsd::DECIMAL), "has value")
        .property("channelName", local("Measurement"), dt(xsd::STRING), "channel name")
        .property("aggregationWindow", local("Measurement"), dt(xsd::DECIMAL), "aggregation window in seconds")
        .property("filePath", local("LogFile"), dt(xsd::STRING), "file path")
        .property("sha256", local("LogFile"), dt(xsd::STRING), "SHA-256 checksum")
        .property("sampleCount", local("LogFile"), dt(xsd::INTEGER), "sample count");

    for (name, label) in PHENOMENA {
        v.individual(name, local("Phenomenon"), label);
    }

    v.rule(ShapeRule::min_count(
        "annot-measurement-phenomenon",
        annot::MEASUREMENT,
        annot::RECORDS_PHENOMENON,
        1,
        "measurement lacks phenomenon",
    ))
    .rule(ShapeRule::max_count(
        "annot-measurement-phenomenon-single",
        annot::MEASUREMENT,
        annot::RECORDS_PHENOMENON,
        1,
        "measurement records more than one phenomenon",
    ))
    .rule(ShapeRule::min_count(
        "annot-measurement-unit",
        annot::MEASUREMENT,
        annot::HAS_UNIT,
        1,
        "measurement lacks unit",
    ))
    .rule(ShapeRule::datatype_is(
        "annot-measurement-value-datatype",
        annot::MEASUREMENT,
        annot::HAS_VALUE,
        xsd::DECIMAL,
        "measurement value is not a decimal",
    ))
    .rule(ShapeRule::min_count(
        "annot-logfile-measurement",
        annot::LOG_FILE,
        annot::STORES_MEASUREMENT,
        1,
        "log file stores no measurement",
    ))
    .rule(ShapeRule::min_count(
        "annot-logfile-checksum",
        annot::LOG_FILE,
        annot::SHA256,
        1,
        "log file lacks a checksum",
    ))
    .rule(ShapeRule::min_count(
        "annot-logfile-path",
        annot::LOG_FILE,
        annot::FILE_PATH,
        1,
        "log file lacks a file path",
    ));
    v
}

/// The four vocabularies in file-name order: annot, htd, provx, scm.
pub fn all_vocabularies() -> Vec<Vocabulary> {
    vec![annotation_vocabulary(), htd_vocabulary(), prov_vocabulary(), scm_vocabulary()]
}
