use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use testkg::prov::{default_profile, ProfileRule};
use testkg::rdf::BaseIri;

use crate::error::CliError;

pub const CONFIG_FILE: &str = "testkg.toml";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    base: Option<String>,
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    profile: RawProfile,
}

/// Per-unit evaluation tolerances; unset values fall back to the defaults
/// of the evaluator.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub nor: Option<f64>,
    pub apr: Option<f64>,
    pub deadband: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    rules: Option<Vec<String>>,
    #[serde(default)]
    weights: BTreeMap<String, f64>,
}

/// Workspace root plus the settings of its `testkg.toml`.
#[derive(Debug)]
pub struct Workspace {
    pub root: PathBuf,
    pub base: BaseIri,
    pub prefixes: BTreeMap<String, String>,
    pub tolerances: Tolerances,
    pub rules: Vec<ProfileRule>,
    pub weights: BTreeMap<String, f64>,
}

pub fn parse_rules(ids: &[String]) -> Result<Vec<ProfileRule>, CliError> {
    ids.iter()
        .map(|id| ProfileRule::builtin(id.trim()).ok_or_else(|| CliError::Input(format!("unknown rule {id:?}, expected R1 to R7"))))
        .collect()
}

impl Workspace {
    pub fn open(root: &Path) -> Result<Self, CliError> {
        let path = root.join(CONFIG_FILE);
        let raw: RawConfig = match fs::read_to_string(&path) {
            Ok(text) => toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e.message())))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => RawConfig::default(),
            Err(e) => return Err(CliError::io(&path, e)),
        };
        let base = match &raw.base {
            Some(b) => BaseIri::new(b).map_err(|e| CliError::Input(format!("{}: base: {e}", path.display())))?,
            None => BaseIri::default(),
        };
        let rules = match &raw.profile.rules {
            Some(ids) => parse_rules(ids)?,
            None => default_profile(),
        };
        Ok(Workspace {
            root: root.to_owned(),
            base,
            prefixes: raw.prefixes,
            tolerances: raw.tolerances,
            rules,
            weights: raw.profile.weights,
        })
    }
}
