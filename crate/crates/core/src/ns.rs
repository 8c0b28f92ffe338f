//! Namespace constants.
//!
//! The test-description, system-configuration, annotation and workflow
//! extension vocabularies have no published namespaces, so they are minted
//! under [`PROJECT_BASE`].

pub const PROJECT_BASE: &str = "https://example.org/cpes/";

/// Default base for minted instance IRIs.
pub const DEFAULT_DATA_BASE: &str = "https://example.org/cpes/data";

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
    pub const LITERAL: &str = "http://www.w3.org/2000/01/rdf-schema#Literal";
    pub const RESOURCE: &str = "http://www.w3.org/2000/01/rdf-schema#Resource";
}

pub mod owl {
    pub const NS: &str = "http://www.w3.org/2002/07/owl#";
    pub const CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
    pub const DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
    pub const NAMED_INDIVIDUAL: &str = "http://www.w3.org/2002/07/owl#NamedIndividual";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

macro_rules! terms {
    ($ns:literal; $($name:ident = $local:literal),* $(,)?) => {
        pub const NS: &str = $ns;
        $(pub const $name: &str = concat!($ns, $local);)*
    };
}

pub mod prov {
    terms! { "http://www.w3.org/ns/prov#";
        ENTITY = "Entity", ACTIVITY = "Activity", AGENT = "Agent",
        WAS_GENERATED_BY = "wasGeneratedBy", USED = "used", WAS_ASSOCIATED_WITH = "wasAssociatedWith",
        WAS_DERIVED_FROM = "wasDerivedFrom", WAS_ATTRIBUTED_TO = "wasAttributedTo",
        STARTED_AT_TIME = "startedAtTime", ENDED_AT_TIME = "endedAtTime",
    }
}

pub mod htd {
    terms! { "https://example.org/cpes/htd#";
        TEST_CASE = "TestCase", TEST_SPECIFICATION = "TestSpecification",
        EXPERIMENT_SPECIFICATION = "ExperimentSpecification", OBJECT_UNDER_INVESTIGATION = "ObjectUnderInvestigation",
        SYSTEM_UNDER_TEST = "SystemUnderTest", FUNCTION_UNDER_TEST = "FunctionUnderTest",
        PURPOSE_OF_INVESTIGATION = "PurposeOfInvestigation", TEST_CRITERIA = "TestCriteria", TEST_SYSTEM = "TestSystem",
        TEST_EXECUTION = "TestExecution", TEST_PARAMETER = "TestParameter", TEST_VERDICT = "TestVerdict",
        LEVEL_RESULT = "LevelResult",
        HAS_SPECIFICATION = "hasSpecification", HAS_EXPERIMENT = "hasExperiment", INVESTIGATES = "investigates",
        APPLIES_CRITERIA = "appliesCriteria", USES_SYSTEM_CONFIGURATION = "usesSystemConfiguration",
        HAS_PURPOSE = "hasPurpose", INCLUDES_SUITE = "includesSuite", STANDARD_REF = "standardRef",
        SCRIPT_REF = "scriptRef", HAS_PARAMETER = "hasParameter", PARAMETER_NAME = "parameterName",
        PARAMETER_VALUE = "parameterValue", EXECUTES_SPECIFICATION = "executesSpecification",
        EXECUTED_ON_CONFIGURATION = "executedOnConfiguration", REQUIRES_PHENOMENON = "requiresPhenomenon",
        RECORDED_IN = "recordedIn", ASSESSES_EXECUTION = "assessesExecution",
        EVALUATES_SPECIFICATION = "evaluatesSpecification", OUTCOME = "outcome", REASON = "reason",
        HAS_LEVEL_RESULT = "hasLevelResult", LEVEL_INDEX = "levelIndex", EXPECTED_LEVEL = "expectedLevel",
        OBSERVED_MEAN = "observedMean", WITHIN_TOLERANCE = "withinTolerance", CONNECTED = "connected",
    }
}

pub mod scm {
    terms! { "https://example.org/cpes/scm#";
        SYSTEM = "System", COMPONENT = "Component", CONNECTION_POINT = "ConnectionPoint", CONNECTION = "Connection",
        DOMAIN = "Domain", ATTRIBUTE = "Attribute", SYSTEM_CONFIGURATION = "SystemConfiguration",
        SYSTEM_TYPE = "SystemType", ROLE = "Role",
        HAS_SUBSYSTEM = "hasSubsystem", HAS_CONNECTION_POINT = "hasConnectionPoint", CONNECTS = "connects",
        IN_DOMAIN = "inDomain", HAS_ATTRIBUTE = "hasAttribute", HAS_TYPE = "hasType", HAS_ROLE = "hasRole",
        IDENTIFIER = "identifier", HAS_SYSTEM = "hasSystem", HAS_CONNECTION = "hasConnection",
        USES_DOMAIN = "usesDomain", IS_TEST_SETUP = "isTestSetup", ATTRIBUTE_NAME = "attributeName",
        ATTRIBUTE_VALUE = "attributeValue", ATTRIBUTE_UNIT = "attributeUnit",
    }
}

pub mod provx {
    terms! { "https://example.org/cpes/provx#";
        WORKFLOW_TEMPLATE = "WorkflowTemplate", TEMPLATE_PROCESS = "TemplateProcess",
        PARAMETER_VARIABLE = "ParameterVariable", DATA_VARIABLE = "DataVariable",
        WORKFLOW_EXECUTION_ACCOUNT = "WorkflowExecutionAccount",
        CORRESPONDS_TO_TEMPLATE = "correspondsToTemplate", CORRESPONDS_TO_TEMPLATE_PROCESS = "correspondsToTemplateProcess",
        CORRESPONDS_TO_TEMPLATE_ARTIFACT = "correspondsToTemplateArtifact", IS_PART_OF_ACCOUNT = "isPartOfAccount",
        HAS_PROCESS = "hasProcess", HAS_VARIABLE = "hasVariable", CONSUMES_VARIABLE = "consumesVariable",
        PRODUCES_VARIABLE = "producesVariable", PROCESS_INDEX = "processIndex", AGENT_KIND = "agentKind",
    }
}

pub mod annot {
    terms! { "https://example.org/cpes/annot#";
        ORGANIZATION = "Organization", DATASET = "Dataset", LOG_FILE = "LogFile", MEASUREMENT = "Measurement",
        PHENOMENON = "Phenomenon", UNIT = "Unit",
        OWNS = "owns", PROVIDES = "provides", CONTAINS_LOG_FILE = "containsLogFile",
        STORES_MEASUREMENT = "storesMeasurement", RECORDS_PHENOMENON = "recordsPhenomenon", HAS_UNIT = "hasUnit",
        HAS_TIMESTAMP = "hasTimestamp", HAS_VALUE = "hasValue", CHANNEL_NAME = "channelName",
        FILE_PATH = "filePath", SHA256 = "sha256", SAMPLE_COUNT = "sampleCount", AGGREGATION_WINDOW = "aggregationWindow",
        VOLTAGE = "Voltage", CURRENT = "Current", ACTIVE_POWER = "ActivePower", REACTIVE_POWER = "ReactivePower",
    }
}

pub const HTD: &str = htd::NS;
pub const SCM: &str = scm::NS;
pub const PROVX: &str = provx::NS;
pub const ANNOT: &str = annot::NS;

/// Prefix map used by generated documents and as the default query prefixes.
pub fn standard_prefixes() -> Vec<(&'static str, &'static str)> {
    vec![
        ("annot", ANNOT),
        ("htd", HTD),
        ("owl", owl::NS),
        ("prov", prov::NS),
        ("provx", PROVX),
        ("rdf", rdf::NS),
        ("rdfs", rdfs::NS),
        ("scm", SCM),
        ("xsd", xsd::NS),
    ]
}
