//! File-tree dataset catalog: published artifacts are copied under
//! `datasets/<id>/` and listed with SHA-256 checksums in `catalog.json`.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const CATALOG_FILE: &str = "catalog.json";
pub const CATALOG_SCHEMA_VERSION: u32 = 1;
pub const LOCK_FILE: &str = ".testkg.lock";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: checksum {actual} does not match catalog entry {expected}")]
    ChecksumMismatch { path: String, expected: String, actual: String },
    #[error("{0}: file does not exist")]
    MissingFile(PathBuf),
    #[error("{0}: unsupported media kind, expected .ttl, .csv or .json")]
    UnsupportedMedia(PathBuf),
    #[error("invalid dataset id {0:?}")]
    InvalidId(String),
    #[error("two files named {0} in one dataset")]
    DuplicateFile(String),
    #[error("workspace is locked by another process ({0} exists)")]
    Locked(PathBuf),
    #[error("malformed catalog: {0}")]
    Malformed(String),
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CatalogError + '_ {
    move |source| CatalogError::Io { path: path.to_owned(), source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MediaKind {
    Turtle,
    Csv,
    Report,
}

impl MediaKind {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "ttl" => Some(MediaKind::Turtle),
            "csv" => Some(MediaKind::Csv),
            "json" => Some(MediaKind::Report),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FileEntry {
    /// Relative to the workspace root, `/`-separated.
    pub relative_path: String,
    pub media_kind: MediaKind,
    /// Lowercase hex.
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DatasetDescriptor {
    pub id: String,
    pub title: String,
    pub publisher: String,
    pub files: Vec<FileEntry>,
    pub conforms_to: Vec<String>,
    pub created_at: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Catalog {
    pub schema_version: u32,
    pub datasets: Vec<DatasetDescriptor>,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog { schema_version: CATALOG_SCHEMA_VERSION, datasets: Vec::new() }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String, CatalogError> {
    Ok(sha256_hex(&fs::read(path).map_err(io(path))?))
}

impl Catalog {
    /// Reads `catalog.json` under `root`; a missing file is an empty catalog.
    pub fn load(root: &Path) -> Result<Self, CatalogError> {
        let path = root.join(CATALOG_FILE);
        match fs::read_to_string(&path) {
            Ok(text) => Self::from_json(&text),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(Catalog::default()),
            Err(e) => Err(io(&path)(e)),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let c: Catalog = serde_json::from_str(text).map_err(|e| CatalogError::Malformed(e.to_string()))?;
        if c.schema_version != CATALOG_SCHEMA_VERSION {
            return Err(CatalogError::Malformed(format!("unsupported schema version {}", c.schema_version)));
        }
        let mut ids: Vec<&str> = c.datasets.iter().map(|d| d.id.as_str()).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(CatalogError::Malformed(format!("dataset {} listed twice", w[0])));
        }
        Ok(c)
    }

    /// Pretty JSON with datasets sorted by id and files by path.
    pub fn to_json(&self) -> String {
        let mut c = self.clone();
        c.datasets.sort_by(|a, b| a.id.cmp(&b.id));
        for d in &mut c.datasets {
            d.files.sort_by(|a, b| a.relative_path.cmp(&b.relative_path));
        }
        let mut s = serde_json::to_string_pretty(&c).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, root: &Path) -> Result<(), CatalogError> {
        let path = root.join(CATALOG_FILE);
        fs::write(&path, self.to_json()).map_err(io(&path))
    }

    pub fn dataset(&self, id: &str) -> Option<&DatasetDescriptor> {
        self.datasets.iter().find(|d| d.id == id)
    }
}

/// Exclusive workspace lock, released on drop.
#[derive(Debug)]
pub struct WorkspaceLock(PathBuf);

impl WorkspaceLock {
    pub fn acquire(root: &Path) -> Result<Self, CatalogError> {
        let path = root.join(LOCK_FILE);
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(WorkspaceLock(path)),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(CatalogError::Locked(path)),
            Err(e) => Err(io(&path)(e)),
        }
    }
}

impl Drop for WorkspaceLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

pub struct PublishRequest<'a> {
    pub dataset_id: &'a str,
    pub title: &'a str,
    pub publisher: &'a str,
    pub files: &'a [PathBuf],
    pub conforms_to: &'a [String],
    /// Used only when the dataset is new.
    pub created_at: DateTime<Utc>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.')) && !id.starts_with('.')
}

/// Checks every file of every dataset against its recorded checksum.
pub fn verify(root: &Path, catalog: &Catalog) -> Result<(), CatalogError> {
    for d in &catalog.datasets {
        verify_dataset(root, d)?;
    }
    Ok(())
}

fn verify_dataset(root: &Path, d: &DatasetDescriptor) -> Result<(), CatalogError> {
    for f in &d.files {
        let path = root.join(&f.relative_path);
        if !path.exists() {
            return Err(CatalogError::MissingFile(path));
        }
        let actual = sha256_file(&path)?;
        if actual != f.sha256 {
            return Err(CatalogError::ChecksumMismatch {
                path: f.relative_path.clone(),
                expected: f.sha256.clone(),
                actual,
            });
        }
    }
    Ok(())
}

/// Copies `files` into `datasets/<id>/` and records them. An existing
/// entry must still verify before it is replaced; its creation time is
/// kept, so re-publishing unchanged files leaves the catalog byte-identical.
pub fn publish(root: &Path, req: &PublishRequest<'_>) -> Result<Catalog, CatalogError> {
    if !valid_id(req.dataset_id) {
        return Err(CatalogError::InvalidId(req.dataset_id.to_owned()));
    }
    let _lock = WorkspaceLock::acquire(root)?;
    let mut catalog = Catalog::load(root)?;
    let previous = catalog.dataset(req.dataset_id).cloned();
    if let Some(d) = &previous {
        verify_dataset(root, d)?;
    }

    let dir = root.join("datasets").join(req.dataset_id);
    let mut staged = Vec::new();
    for src in req.files {
        if !src.is_file() {
            return Err(CatalogError::MissingFile(src.clone()));
        }
        let kind = MediaKind::from_path(src).ok_or_else(|| CatalogError::UnsupportedMedia(src.clone()))?;
        let name = src
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| CatalogError::UnsupportedMedia(src.clone()))?
            .to_owned();
        if staged.iter().any(|(n, _, _): &(String, _, _)| *n == name) {
            return Err(CatalogError::DuplicateFile(name));
        }
        let bytes = fs::read(src).map_err(io(src))?;
        staged.push((name, kind, bytes));
    }
    fs::create_dir_all(&dir).map_err(io(&dir))?;
    let mut files = Vec::new();
    for (name, kind, bytes) in staged {
        let dest = dir.join(&name);
        if fs::read(&dest).ok().as_deref() != Some(bytes.as_slice()) {
            fs::write(&dest, &bytes).map_err(io(&dest))?;
        }
        files.push(FileEntry {
            relative_path: format!("datasets/{}/{name}", req.dataset_id),
            media_kind: kind,
            sha256: sha256_hex(&bytes),
        });
    }
    let mut conforms_to = req.conforms_to.to_vec();
    conforms_to.sort();
    conforms_to.dedup();
    let descriptor = DatasetDescriptor {
        id: req.dataset_id.to_owned(),
        title: req.title.to_owned(),
        publisher: req.publisher.to_owned(),
        files,
        conforms_to,
        created_at: previous
            .map(|d| d.created_at)
            .unwrap_or_else(|| crate::prov::format_timestamp(&req.created_at)),
    };
    catalog.datasets.retain(|d| d.id != req.dataset_id);
    catalog.datasets.push(descriptor);
    let text = catalog.to_json();
    let path = root.join(CATALOG_FILE);
    if fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
        fs::write(&path, text).map_err(io(&path))?;
    }
    Catalog::from_json(&catalog.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at() -> DateTime<Utc> {
        crate::prov::parse_timestamp("2024-01-02T03:04:05Z").unwrap()
    }

    struct Tmp(PathBuf);

    impl Tmp {
        fn new(tag: &str) -> Self {
            let p = std::env::temp_dir().join(format!("testkg-catalog-{tag}-{}", std::process::id()));
            let _ = fs::remove_dir_all(&p);
            fs::create_dir_all(&p).unwrap();
            Tmp(p)
        }
    }

    impl Drop for Tmp {
        fn drop(&mut self) {
            let _ = fs::remove_dir_all(&self.0);
        }
    }

    fn inputs(dir: &Path) -> Vec<PathBuf> {
        let src = dir.join("src");
        fs::create_dir_all(&src).unwrap();
        fs::write(src.join("a.ttl"), "<urn:a> <urn:b> <urn:c> .\n").unwrap();
        fs::write(src.join("log.csv"), "time,P\n0,1\n").unwrap();
        vec![src.join("a.ttl"), src.join("log.csv")]
    }

    fn request<'a>(files: &'a [PathBuf], conforms: &'a [String]) -> PublishRequest<'a> {
        PublishRequest {
            dataset_id: "ucd-inverter",
            title: "UCD inverter tests",
            publisher: "ucd",
            files,
            conforms_to: conforms,
            created_at: at(),
        }
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn publish_lists_two_files_with_checksums() {
        let tmp = Tmp::new("two");
        let files = inputs(&tmp.0);
        let c = publish(&tmp.0, &request(&files, &[])).unwrap();
        let d = c.dataset("ucd-inverter").unwrap();
        assert_eq!(d.files.len(), 2);
        assert_eq!(d.files[0].relative_path, "datasets/ucd-inverter/a.ttl");
        assert_eq!(d.files[0].media_kind, MediaKind::Turtle);
        assert_eq!(d.files[1].sha256, sha256_hex(b"time,P\n0,1\n"));
        assert_eq!(d.created_at, "2024-01-02T03:04:05Z");
        verify(&tmp.0, &Catalog::load(&tmp.0).unwrap()).unwrap();
        assert!(!tmp.0.join(LOCK_FILE).exists());
    }

    #[test]
    fn republishing_unchanged_files_is_byte_identical() {
        let tmp = Tmp::new("idem");
        let files = inputs(&tmp.0);
        publish(&tmp.0, &request(&files, &[])).unwrap();
        let first = fs::read(tmp.0.join(CATALOG_FILE)).unwrap();
        let later = PublishRequest { created_at: Utc::now(), ..request(&files, &[]) };
        publish(&tmp.0, &later).unwrap();
        assert_eq!(fs::read(tmp.0.join(CATALOG_FILE)).unwrap(), first);
    }

    #[test]
    fn tampering_is_detected() {
        let tmp = Tmp::new("tamper");
        let files = inputs(&tmp.0);
        publish(&tmp.0, &request(&files, &[])).unwrap();
        fs::write(tmp.0.join("datasets/ucd-inverter/log.csv"), "time,P\n0,2\n").unwrap();
        let c = Catalog::load(&tmp.0).unwrap();
        assert!(matches!(verify(&tmp.0, &c), Err(CatalogError::ChecksumMismatch { .. })));
        assert!(matches!(publish(&tmp.0, &request(&files, &[])), Err(CatalogError::ChecksumMismatch { .. })));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let tmp = Tmp::new("bad");
        let missing = vec![tmp.0.join("nope.ttl")];
        assert!(matches!(publish(&tmp.0, &request(&missing, &[])), Err(CatalogError::MissingFile(_))));
        fs::write(tmp.0.join("x.bin"), "x").unwrap();
        let odd = vec![tmp.0.join("x.bin")];
        assert!(matches!(publish(&tmp.0, &request(&odd, &[])), Err(CatalogError::UnsupportedMedia(_))));
        let files = inputs(&tmp.0);
        let r = PublishRequest { dataset_id: "../up", ..request(&files, &[]) };
        assert!(matches!(publish(&tmp.0, &r), Err(CatalogError::InvalidId(_))));
    }

    #[test]
    fn held_lock_blocks_publish() {
        let tmp = Tmp::new("lock");
        let files = inputs(&tmp.0);
        let held = WorkspaceLock::acquire(&tmp.0).unwrap();
        assert!(matches!(publish(&tmp.0, &request(&files, &[])), Err(CatalogError::Locked(_))));
        drop(held);
        publish(&tmp.0, &request(&files, &[])).unwrap();
    }

    #[test]
    fn catalog_json_round_trips_sorted() {
        let mut c = Catalog::default();
        for id in ["b", "a"] {
            c.datasets.push(DatasetDescriptor {
                id: id.into(),
                title: id.into(),
                publisher: "p".into(),
                files: vec![],
                conforms_to: vec![],
                created_at: "2024-01-01T00:00:00Z".into(),
            });
        }
        let back = Catalog::from_json(&c.to_json()).unwrap();
        assert_eq!(back.datasets[0].id, "a");
        assert!(Catalog::from_json("{\"schemaVersion\":2,\"datasets\":[]}").is_err());
    }
}
