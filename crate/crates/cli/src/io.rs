use std::fs;
use std::path::Path;

use testkg::rdf::Graph;
use testkg::store::Store;
use testkg::turtle::parse_turtle;

use crate::error::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_turtle(&read_text(path)?).map_err(|e| CliError::input(path.display(), e))
}

pub fn load_store(paths: &[impl AsRef<Path>]) -> Result<Store, CliError> {
    let mut store = Store::new();
    for p in paths {
        store.load(&load_graph(p.as_ref())?);
    }
    Ok(store)
}

/// Writes `contents` unless the file already holds exactly those bytes.
pub fn write_if_changed(path: &Path, contents: &str) -> Result<bool, CliError> {
    if fs::read(path).ok().as_deref() == Some(contents.as_bytes()) {
        return Ok(false);
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
    Ok(true)
}

/// `/`-separated form of a relative path.
pub fn slash_path(path: &Path) -> String {
    path.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/")
}
