use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use testkg::catalog::{self, Catalog, CatalogError, PublishRequest, CATALOG_FILE};
use testkg::en50549::{apr_spec, evaluate as run_evaluation, nor_spec, normalized_series, plot_csv, verdict_to_rdf};
use testkg::en50549::{EvalOptions, Outcome, SpecKind, TestSequenceSpec};
use testkg::fixtures::generated_fixtures;
use testkg::opensvp::{annotate_sources, parse_channel_map, parse_context, parse_log, AnnotationSources, LogSource};
use testkg::prov::{check_completeness_weighted, parse_timestamp};
use testkg::rdf::{isomorphic, Graph, Iri, Term};
use testkg::report::{Finding, Report, Status};
use testkg::scm::{diff_configurations, from_rdf, parse_config, validate_configuration, ScmError, SystemConfiguration};
use testkg::store::Store;
use testkg::turtle::{parse_turtle, serialize_turtle};
use testkg::vocab::{all_rules, all_vocabularies, check_shapes, emit_vocabulary};

use crate::error::CliError;
use crate::io::{load_graph, load_store, read_text, slash_path, write_if_changed};
use crate::workspace::{parse_rules, Workspace};
use crate::{Format, Out, EXIT_OK, EXIT_VIOLATION};

fn exit_for(report: &Report) -> u8 {
    if report.status == Status::Pass {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn with_prefixes(mut g: Graph, ws: &Workspace) -> Result<Graph, CliError> {
    for (label, ns) in &ws.prefixes {
        g.set_prefix(label, ns).map_err(|e| CliError::input("testkg.toml: prefixes", e))?;
    }
    Ok(g)
}

// ---- annotate --------------------------------------------------------------

#[derive(Debug, Args)]
pub struct AnnotateArgs {
    /// Suite file (STE). Repeat for nested suites; the first one is the root.
    #[arg(long = "suite", required = true)]
    suites: Vec<PathBuf>,
    /// Test file (TST), repeatable.
    #[arg(long = "test")]
    tests: Vec<PathBuf>,
    /// Measurement log, `TEST=PATH` or `PATH` whose stem names the test.
    #[arg(long = "log", value_name = "[TEST=]PATH")]
    logs: Vec<String>,
    /// Channel map.
    #[arg(long)]
    channels: PathBuf,
    /// Campaign context.
    #[arg(long)]
    context: PathBuf,
    /// System configuration; defaults to the path named by the context.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; defaults to `annotations/<dataset>.ttl` in the workspace.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// Path recorded for a log: relative to the context directory when below it.
fn recorded_path(log: &Path, context_dir: &Path) -> String {
    if let Ok(rel) = log.strip_prefix(context_dir) {
        return slash_path(rel);
    }
    if let (Ok(l), Ok(c)) = (log.canonicalize(), context_dir.canonicalize()) {
        if let Ok(rel) = l.strip_prefix(&c) {
            return slash_path(rel);
        }
    }
    slash_path(log)
}

fn parse_log_arg(arg: &str) -> (String, PathBuf) {
    match arg.split_once('=') {
        Some((test, path)) if !test.is_empty() => (test.to_owned(), PathBuf::from(path)),
        _ => {
            let path = PathBuf::from(arg);
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (stem, path)
        }
    }
}

pub fn annotate(ws: &Workspace, out: &Out, a: AnnotateArgs) -> Result<u8, CliError> {
    let context = read_text(&a.context)?;
    let ctx = parse_context(&context).map_err(|e| CliError::input(a.context.display(), e))?;
    let context_dir = a.context.parent().unwrap_or(Path::new("")).to_owned();
    let config_path = a.config.clone().or_else(|| ctx.system_config_path.as_ref().map(|p| context_dir.join(p)));
    let logs = a
        .logs
        .iter()
        .map(|arg| {
            let (test, path) = parse_log_arg(arg);
            Ok(LogSource { test, path: recorded_path(&path, &context_dir), csv: read_text(&path)? })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let src = AnnotationSources {
        suites: a.suites.iter().map(|p| read_text(p)).collect::<Result<_, _>>()?,
        tests: a.tests.iter().map(|p| read_text(p)).collect::<Result<_, _>>()?,
        logs,
        channel_map: read_text(&a.channels)?,
        context,
        config: config_path.as_deref().map(read_text).transpose()?,
    };
    let graph = annotate_sources(&src, &ws.base).map_err(|e| CliError::Input(format!("annotate: {e}")))?;
    let graph = with_prefixes(graph, ws)?;
    let path = a.out.unwrap_or_else(|| ws.root.join("annotations").join(format!("{}.ttl", ctx.dataset_id)));
    write_if_changed(&path, &serialize_turtle(&graph))?;

    let violations = check_shapes(&Store::from_graph(&graph), &all_rules());
    let report = Report::new("annotation")
        .with_summary("output", path.display().to_string())
        .with_summary("triples", graph.len())
        .with_findings(violations.into_iter().map(Finding::from))
        .status_from_findings();
    out.report(&report);
    Ok(exit_for(&report))
}

// ---- validate --------------------------------------------------------------

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Restrict shape rules to these vocabularies (annot, htd, provx, scm).
    #[arg(long = "vocab", value_delimiter = ',')]
    vocabs: Vec<String>,
}

fn configuration_findings(path: &Path, g: &Graph) -> Vec<Finding> {
    match from_rdf(g) {
        Ok(cfg) => validate_configuration(&cfg),
        // Shape breaches are reported by the shape rules themselves.
        Err(ScmError::EmptyConfiguration | ScmError::ShapeViolation(_)) => Vec::new(),
        Err(e) => vec![Finding::violation("scm-graph", path.display().to_string(), e.to_string())],
    }
}

pub fn validate(out: &Out, a: ValidateArgs) -> Result<u8, CliError> {
    let vocabularies = all_vocabularies();
    if let Some(unknown) = a.vocabs.iter().find(|n| !vocabularies.iter().any(|v| &v.name == *n)) {
        return Err(CliError::Input(format!("unknown vocabulary {unknown:?}")));
    }
    let rules: Vec<_> = vocabularies
        .into_iter()
        .filter(|v| a.vocabs.is_empty() || a.vocabs.contains(&v.name))
        .flat_map(|v| v.rules)
        .collect();
    let mut store = Store::new();
    let mut findings = Vec::new();
    for path in &a.files {
        let g = load_graph(path)?;
        if a.vocabs.is_empty() || a.vocabs.iter().any(|v| v == "scm") {
            findings.extend(configuration_findings(path, &g));
        }
        store.load(&g);
    }
    findings.extend(check_shapes(&store, &rules).into_iter().map(Finding::from));
    let report = Report::new("validation")
        .with_summary("files", a.files.len())
        .with_summary("triples", store.len())
        .with_summary("rules", rules.len())
        .with_findings(findings)
        .status_from_findings();
    out.report(&report);
    Ok(exit_for(&report))
}

// ---- query -----------------------------------------------------------------

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Query text.
    #[arg(short = 'e', long = "query", conflicts_with = "file", required_unless_present = "file")]
    text: Option<String>,
    /// File holding the query.
    #[arg(short = 'f', long)]
    file: Option<PathBuf>,
    #[arg(required = true)]
    data: Vec<PathBuf>,
}

pub fn query(ws: &Workspace, out: &Out, a: QueryArgs) -> Result<u8, CliError> {
    let (text, source) = match (&a.text, &a.file) {
        (Some(t), _) => (t.clone(), "query".to_owned()),
        (None, Some(f)) => (read_text(f)?, f.display().to_string()),
        (None, None) => return Err(CliError::Input("no query given".into())),
    };
    let mut store = load_store(&a.data)?;
    for (label, ns) in &ws.prefixes {
        store.set_prefix(label, ns);
    }
    let result = store.query(&text).map_err(|e| CliError::input(source, e))?;
    match out.format {
        Format::Text => print!("{}", result.to_tsv()),
        Format::Structured => {
            let rows: Vec<Vec<String>> = result.rows.iter().map(|r| r.iter().map(Term::to_string).collect()).collect();
            let json = serde_json::json!({ "variables": result.variables, "rows": rows });
            println!("{}", serde_json::to_string_pretty(&json).map_err(|e| CliError::Internal(e.to_string()))?);
        }
    }
    Ok(EXIT_OK)
}

// ---- diff ------------------------------------------------------------------

#[derive(Debug, Args)]
pub struct DiffArgs {
    /// Configuration A (`.toml` or `.ttl`).
    a: PathBuf,
    /// Configuration B (`.toml` or `.ttl`).
    b: PathBuf,
}

fn load_configuration(path: &Path) -> Result<SystemConfiguration, CliError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("toml") => parse_config(&read_text(path)?).map_err(|e| CliError::input(path.display(), e)),
        Some("ttl") => from_rdf(&load_graph(path)?).map_err(|e| CliError::input(path.display(), e)),
        _ => Err(CliError::Input(format!("{}: expected a .toml or .ttl configuration", path.display()))),
    }
}

pub fn diff(out: &Out, a: DiffArgs) -> Result<u8, CliError> {
    let d = diff_configurations(&load_configuration(&a.a)?, &load_configuration(&a.b)?);
    out.report(&d.to_report());
    Ok(EXIT_OK)
}

// ---- check -----------------------------------------------------------------

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Rule profile, e.g. `R1,R7`; defaults to the workspace profile.
    #[arg(long, value_delimiter = ',')]
    rules: Vec<String>,
}

pub fn check(ws: &Workspace, out: &Out, a: CheckArgs) -> Result<u8, CliError> {
    let profile = if a.rules.is_empty() { ws.rules.clone() } else { parse_rules(&a.rules)? };
    let store = load_store(&a.files)?;
    let report = check_completeness_weighted(&store, &profile, &ws.weights).to_report();
    out.report(&report);
    Ok(exit_for(&report))
}

// ---- evaluate --------------------------------------------------------------

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Measurement log (CSV).
    trace: PathBuf,
    /// Channel map of the log.
    #[arg(long)]
    channels: PathBuf,
    /// Test sequence: `nor` or `apr`.
    #[arg(long)]
    kind: String,
    /// Nominal voltage in volts; required for `nor`.
    #[arg(long)]
    un: Option<f64>,
    /// Nominal active power in watts; required for `apr`.
    #[arg(long)]
    pn: Option<f64>,
    /// Per-unit tolerance on level means.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Per-unit deadband of step detection.
    #[arg(long)]
    deadband: Option<f64>,
    /// Breaker-state column; without it connectivity is inferred.
    #[arg(long)]
    breaker: Option<String>,
    /// Verdict identifier; defaults to the log file stem.
    #[arg(long)]
    id: Option<String>,
    /// Write the verdict graph here.
    #[arg(long)]
    verdict_out: Option<PathBuf>,
    /// Test execution IRI linked from the verdict graph.
    #[arg(long)]
    execution: Option<String>,
    /// Test specification IRI linked from the verdict graph.
    #[arg(long)]
    specification: Option<String>,
    /// Write observed and expected per-unit series as CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn sequence_spec(ws: &Workspace, a: &EvaluateArgs) -> Result<TestSequenceSpec, CliError> {
    let kind = SpecKind::from_short_name(&a.kind).map_err(|e| CliError::Input(e.to_string()))?;
    let bad = |e: testkg::en50549::EvalError| CliError::Input(e.to_string());
    let mut spec = match kind {
        SpecKind::NormalOperatingRange => {
            let un = a.un.ok_or_else(|| CliError::Input("nor needs --un".into()))?;
            let s = nor_spec(un).map_err(bad)?;
            match a.pn {
                Some(pn) => s.with_nominal_power(pn).map_err(bad)?,
                None => s,
            }
        }
        SpecKind::ActivePowerReduction => {
            let pn = a.pn.ok_or_else(|| CliError::Input("apr needs --pn".into()))?;
            let s = apr_spec(pn).map_err(bad)?;
            match a.un {
                Some(un) => s.with_nominal_voltage(un).map_err(bad)?,
                None => s,
            }
        }
    };
    let configured = match kind {
        SpecKind::NormalOperatingRange => ws.tolerances.nor,
        SpecKind::ActivePowerReduction => ws.tolerances.apr,
    };
    if let Some(t) = a.tolerance.or(configured) {
        spec = spec.with_tolerance(t);
    }
    spec.validate().map_err(bad)?;
    Ok(spec)
}

fn iri_arg(flag: &str, text: &Option<String>) -> Result<Option<Iri>, CliError> {
    text.as_deref().map(|t| Iri::new(t).map_err(|e| CliError::input(flag, e))).transpose()
}

pub fn evaluate(ws: &Workspace, out: &Out, a: EvaluateArgs) -> Result<u8, CliError> {
    let spec = sequence_spec(ws, &a)?;
    let map = parse_channel_map(&read_text(&a.channels)?).map_err(|e| CliError::input(a.channels.display(), e))?;
    let trace = parse_log(&read_text(&a.trace)?, &map).map_err(|e| CliError::input(a.trace.display(), e))?;
    let opts = EvalOptions {
        connectivity_channel: a.breaker.clone(),
        deadband: a.deadband.or(ws.tolerances.deadband),
        min_dwell: None,
    };
    let verdict = run_evaluation(&trace, &spec, &opts).map_err(|e| CliError::input(a.trace.display(), e))?;

    if let Some(path) = &a.verdict_out {
        let id = a
            .id
            .clone()
            .or_else(|| a.trace.file_stem().map(|s| s.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "verdict".into());
        let execution = iri_arg("--execution", &a.execution)?;
        let specification = iri_arg("--specification", &a.specification)?;
        let g = verdict_to_rdf(&verdict, &id, &ws.base, execution.as_ref(), specification.as_ref());
        write_if_changed(path, &serialize_turtle(&with_prefixes(g, ws)?))?;
    }
    if let Some(path) = &a.plot {
        let series = normalized_series(&trace, &spec).map_err(|e| CliError::input(a.trace.display(), e))?;
        write_if_changed(path, &plot_csv(&series, &verdict))?;
    }
    out.report(&verdict.to_report());
    Ok(if verdict.outcome == Outcome::Pass { EXIT_OK } else { EXIT_VIOLATION })
}

// ---- publish / verify ------------------------------------------------------

#[derive(Debug, Args)]
pub struct PublishArgs {
    /// Dataset identifier.
    #[arg(long)]
    dataset: String,
    /// Dataset title; defaults to the identifier.
    #[arg(long)]
    title: Option<String>,
    /// Publishing organization.
    #[arg(long)]
    publisher: String,
    /// Creation time recorded for a new dataset (RFC 3339); defaults to now.
    #[arg(long)]
    created_at: Option<String>,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

/// Vocabulary namespaces used by the Turtle files among `files`.
fn conformance(files: &[PathBuf]) -> Result<Vec<String>, CliError> {
    let namespaces: Vec<String> = all_vocabularies().into_iter().map(|v| v.namespace).collect();
    let mut used = Vec::new();
    for f in files.iter().filter(|f| f.extension().is_some_and(|e| e == "ttl")) {
        let g = load_graph(f)?;
        for t in g.iter() {
            let terms = [Some(t.subject().clone()), Some(Term::Iri(t.predicate().clone())), Some(t.object().clone())];
            for iri in terms.iter().flatten().filter_map(Term::as_iri) {
                used.extend(namespaces.iter().filter(|ns| iri.as_str().starts_with(ns.as_str())).cloned());
            }
        }
    }
    used.sort();
    used.dedup();
    Ok(used)
}

fn catalog_failure(e: CatalogError) -> Result<u8, CliError> {
    match e {
        CatalogError::Io { path, source } => Err(CliError::Io { path, source }),
        other => Err(CliError::Input(other.to_string())),
    }
}

fn integrity_report(kind: &str, e: &CatalogError) -> Report {
    let subject = match e {
        CatalogError::ChecksumMismatch { path, .. } => path.clone(),
        CatalogError::MissingFile(p) => p.display().to_string(),
        _ => CATALOG_FILE.to_owned(),
    };
    Report::new(kind).with_findings([Finding::violation("checksum", subject, e.to_string())]).status_from_findings()
}

pub fn publish(ws: &Workspace, out: &Out, a: PublishArgs) -> Result<u8, CliError> {
    let created_at = match &a.created_at {
        Some(t) => parse_timestamp(t).map_err(|e| CliError::input("--created-at", e))?,
        None => chrono::Utc::now(),
    };
    let conforms_to = conformance(&a.files)?;
    let req = PublishRequest {
        dataset_id: &a.dataset,
        title: a.title.as_deref().unwrap_or(&a.dataset),
        publisher: &a.publisher,
        files: &a.files,
        conforms_to: &conforms_to,
        created_at,
    };
    match catalog::publish(&ws.root, &req) {
        Ok(c) => {
            let d = c.dataset(&a.dataset).ok_or_else(|| CliError::Internal("published dataset missing".into()))?;
            let report = Report::new("publish")
                .with_summary("dataset", d.id.clone())
                .with_summary("files", d.files.len())
                .with_summary("conformsTo", d.conforms_to.clone());
            out.report(&report);
            Ok(EXIT_OK)
        }
        Err(e @ (CatalogError::ChecksumMismatch { .. } | CatalogError::MissingFile(_))) if e_is_catalog_entry(&e, &a.files) => {
            let report = integrity_report("publish", &e);
            out.report(&report);
            Ok(EXIT_VIOLATION)
        }
        Err(e) => catalog_failure(e),
    }
}

/// A missing input file is an input error; a missing published file is a
/// broken catalog.
fn e_is_catalog_entry(e: &CatalogError, inputs: &[PathBuf]) -> bool {
    match e {
        CatalogError::MissingFile(p) => !inputs.contains(p),
        _ => true,
    }
}

pub fn verify(ws: &Workspace, out: &Out) -> Result<u8, CliError> {
    let c = match Catalog::load(&ws.root) {
        Ok(c) => c,
        Err(e) => return catalog_failure(e),
    };
    let report = match catalog::verify(&ws.root, &c) {
        Ok(()) => Report::new("verification")
            .with_summary("datasets", c.datasets.len())
            .with_summary("files", c.datasets.iter().map(|d| d.files.len()).sum::<usize>()),
        Err(e @ (CatalogError::ChecksumMismatch { .. } | CatalogError::MissingFile(_))) => integrity_report("verification", &e),
        Err(e) => return catalog_failure(e),
    };
    out.report(&report);
    Ok(exit_for(&report))
}

// ---- vocab / fixtures ------------------------------------------------------

#[derive(Debug, Subcommand)]
pub enum VocabCommand {
    /// Write `<name>.ttl` for every vocabulary.
    Emit {
        /// Target directory; defaults to `vocab/` in the workspace.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Compare with the files on disk instead of writing.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesCommand {
    /// Rebuild every generated fixture file.
    Regenerate {
        /// Fixture root; defaults to `fixtures/` in the workspace.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Compare with the files on disk instead of writing.
        #[arg(long)]
        check: bool,
    },
}

/// Writes each `(path, contents)` pair, or in check mode reports every file
/// that is missing or differs.
fn sync_files(kind: &str, files: &[(PathBuf, String)], check: bool) -> Result<Report, CliError> {
    let mut findings = Vec::new();
    let mut written = 0usize;
    for (path, contents) in files {
        if check {
            let on_disk = std::fs::read(path).ok();
            if on_disk.as_deref() != Some(contents.as_bytes()) {
                let what = if on_disk.is_some() { "differs from the generated contents" } else { "is missing" };
                findings.push(Finding::violation("stale-file", path.display().to_string(), what));
            }
        } else if write_if_changed(path, contents)? {
            written += 1;
        }
    }
    let mut report = Report::new(kind).with_summary("files", files.len());
    if !check {
        report = report.with_summary("written", written);
    }
    Ok(report.with_findings(findings).status_from_findings())
}

pub fn vocab(ws: &Workspace, out: &Out, c: VocabCommand) -> Result<u8, CliError> {
    let VocabCommand::Emit { out_dir, check } = c;
    let dir = out_dir.unwrap_or_else(|| ws.root.join("vocab"));
    let rules = all_rules();
    let mut files = Vec::new();
    for v in all_vocabularies() {
        let g = emit_vocabulary(&v).map_err(|e| CliError::Internal(format!("{}: {e}", v.name)))?;
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text).map_err(|e| CliError::Internal(format!("{}: re-parse: {e}", v.name)))?;
        if !isomorphic(&g, &back).unwrap_or(false) || !check_shapes(&Store::from_graph(&back), &rules).is_empty() {
            return Err(CliError::Internal(format!("{} does not survive its own round trip", v.name)));
        }
        files.push((dir.join(format!("{}.ttl", v.name)), text));
    }
    let report = sync_files("vocabulary", &files, check)?;
    out.report(&report);
    Ok(exit_for(&report))
}

pub fn fixtures(ws: &Workspace, out: &Out, c: FixturesCommand) -> Result<u8, CliError> {
    let FixturesCommand::Regenerate { dir, check } = c;
    let dir = dir.unwrap_or_else(|| ws.root.join("fixtures"));
    let config = read_text(&dir.join("ucd").join("config.toml"))?;
    let generated = generated_fixtures(&config).map_err(|e| CliError::Internal(e.to_string()))?;
    let files: Vec<_> = generated.into_iter().map(|f| (dir.join(&f.path), f.contents)).collect();
    let report = sync_files("fixtures", &files, check)?;
    out.report(&report);
    Ok(exit_for(&report))
}
