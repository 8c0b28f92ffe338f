use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn testkg(workspace: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_testkg"))
        .current_dir(repo())
        .arg("--workspace")
        .arg(workspace)
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

const UCD_ANNOTATE: &[&str] = &[
    "annotate",
    "--suite",
    "fixtures/ucd/suite.toml",
    "--test",
    "fixtures/ucd/tests/nor.toml",
    "--test",
    "fixtures/ucd/tests/apr.toml",
    "--log",
    "fixtures/ucd/logs/nor.csv",
    "--log",
    "apr=fixtures/ucd/logs/apr.csv",
    "--channels",
    "fixtures/ucd/channels.toml",
    "--context",
    "fixtures/ucd/context.toml",
];

const GOLDEN: &str = "fixtures/ucd/expected/ucd-inverter.ttl";
const GAP: &str = "fixtures/ucd/expected/ucd-inverter-breaker-gap.ttl";

#[test]
fn annotate_reproduces_the_golden_graph_twice() {
    let ws = TempDir::new().unwrap();
    let r = testkg(ws.path(), UCD_ANNOTATE);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let out = ws.path().join("annotations/ucd-inverter.ttl");
    let first = fs::read(&out).unwrap();
    assert_eq!(first, fs::read(repo().join(GOLDEN)).unwrap());
    assert_eq!(testkg(ws.path(), UCD_ANNOTATE).code, 0);
    assert_eq!(fs::read(&out).unwrap(), first);
}

#[test]
fn annotate_rejects_a_log_column_missing_from_the_map() {
    let ws = TempDir::new().unwrap();
    let map = ws.path().join("channels.toml");
    let full = fs::read_to_string(repo().join("fixtures/ucd/channels.toml")).unwrap();
    let (head, _) = full.split_once("[[channel]]\ncolumn = \"Q\"").unwrap();
    fs::write(&map, head).unwrap();
    let mut args = UCD_ANNOTATE.to_vec();
    let i = args.iter().position(|a| *a == "fixtures/ucd/channels.toml").unwrap();
    let map_arg = map.to_str().unwrap().to_owned();
    args[i] = &map_arg;
    let r = testkg(ws.path(), &args);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("column \"Q\" is not bound in the channel map"), "{}", r.stderr);
    assert!(!ws.path().join("annotations").exists());
}

#[test]
fn validate_exit_codes() {
    let ws = TempDir::new().unwrap();
    let ok = testkg(ws.path(), &["validate", GOLDEN]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    assert!(ok.stdout.starts_with("validation: PASS"));

    let text = fs::read_to_string(repo().join(GOLDEN)).unwrap();
    let gridsim = "<https://example.org/cpes/data/config/ucd-pv-inverter-setup/system/gridsim/cp/ac>, ";
    assert!(text.contains(gridsim));
    let broken = ws.path().join("broken.ttl");
    fs::write(&broken, text.replacen(gridsim, "", 1)).unwrap();
    let bad = testkg(ws.path(), &["validate", broken.to_str().unwrap()]);
    assert_eq!(bad.code, 2);
    assert!(bad.stdout.contains("violation [scm-connects-min]"), "{}", bad.stdout);

    let garbage = ws.path().join("garbage.ttl");
    fs::write(&garbage, "<urn:a> <urn:b>\n  \"unterminated .\n").unwrap();
    let r = testkg(ws.path(), &["validate", garbage.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("garbage.ttl: 2:"), "{}", r.stderr);
}

#[test]
fn query_rows_limits_and_errors() {
    let ws = TempDir::new().unwrap();
    let q = "SELECT DISTINCT ?p WHERE { ?m annot:recordsPhenomenon ?p }";
    let r = testkg(ws.path(), &["query", "-e", q, GOLDEN]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 1 + 4, "{}", r.stdout);
    assert!(r.stdout.contains("annot#Voltage"));

    let r = testkg(ws.path(), &["query", "-e", "SELECT ?m WHERE { ?m a annot:Measurement } LIMIT 0", GOLDEN]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "?m\n"));

    let r = testkg(ws.path(), &["query", "-e", "SELECT ?m WHERE {\n  ?m a }", GOLDEN]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("2:"), "{}", r.stderr);

    let file = ws.path().join("q.rq");
    fs::write(&file, "SELECT ?m WHERE { ?m annot:channelName \"V\" }").unwrap();
    let r = testkg(ws.path(), &["--format", "structured", "query", "-f", file.to_str().unwrap(), GOLDEN]);
    let json: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn diff_of_the_two_labs() {
    let ws = TempDir::new().unwrap();
    let r = testkg(ws.path(), &["--format", "structured", "diff", "fixtures/ucd/config.toml", "fixtures/zhaw/config.toml"]);
    assert_eq!(r.code, 0);
    let json: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let messages: Vec<&str> = json["findings"].as_array().unwrap().iter().map(|f| f["message"].as_str().unwrap()).collect();
    assert_eq!(messages, ["operatingPoint: 0.62 -> 0.92", "phases: 1 -> 3"]);

    let same = testkg(ws.path(), &["diff", "fixtures/ucd/config.toml", "fixtures/ucd/config.toml"]);
    assert_eq!(same.code, 0);
    assert!(same.stdout.contains("differences: 0"));
    assert_eq!(testkg(ws.path(), &["diff", "fixtures/ucd/config.toml", "missing.toml"]).code, 1);
}

#[test]
fn check_scores() {
    let ws = TempDir::new().unwrap();
    let full = testkg(ws.path(), &["check", GOLDEN]);
    assert_eq!(full.code, 0);
    assert!(full.stdout.contains("score: 1.0"));

    let gap = testkg(ws.path(), &["check", GAP]);
    assert_eq!(gap.code, 2);
    assert!(gap.stdout.contains("[R7]") && gap.stdout.contains("annot:BreakerState"), "{}", gap.stdout);
    assert_eq!(testkg(ws.path(), &["check", "--rules", "R1,R2", GAP]).code, 0);
    assert_eq!(testkg(ws.path(), &["check", "--rules", "R9", GAP]).code, 1);

    let empty = ws.path().join("empty.ttl");
    fs::write(&empty, "").unwrap();
    let r = testkg(ws.path(), &["check", empty.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("no targets"));
}

#[test]
fn evaluate_verdicts() {
    let ws = TempDir::new().unwrap();
    let ch = "fixtures/synthetic/channels.toml";
    let plot = ws.path().join("plot.csv");
    let rdf = ws.path().join("verdict.ttl");
    let r = testkg(
        ws.path(),
        &[
            "evaluate",
            "fixtures/synthetic/nor-clean.csv",
            "--channels",
            ch,
            "--kind",
            "nor",
            "--un",
            "230",
            "--plot",
            plot.to_str().unwrap(),
            "--verdict-out",
            rdf.to_str().unwrap(),
        ],
    );
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("outcome: PASS"));
    assert_eq!(fs::read_to_string(&plot).unwrap().lines().count(), 1 + 1800);
    assert!(fs::read_to_string(&rdf).unwrap().contains("htd:TestVerdict"));

    let r = testkg(ws.path(), &["evaluate", "fixtures/synthetic/apr-disconnect.csv", "--channels", ch, "--kind", "apr", "--pn", "3000"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("disconnection detected"));

    let r = testkg(ws.path(), &["evaluate", "fixtures/synthetic/nor-clean.csv", "--channels", ch, "--kind", "lvrt", "--un", "230"]);
    assert_eq!(r.code, 1);
    let r = testkg(ws.path(), &["evaluate", "fixtures/synthetic/nor-clean.csv", "--channels", ch, "--kind", "nor"]);
    assert_eq!(r.code, 1);
}

#[test]
fn publish_is_idempotent_and_verify_catches_tampering() {
    let ws = TempDir::new().unwrap();
    let args = ["publish", "--dataset", "ucd", "--publisher", "ucd", "--created-at", "2024-01-01T00:00:00Z", GOLDEN, "fixtures/ucd/logs/nor.csv"];
    assert_eq!(testkg(ws.path(), &args).code, 0);
    let catalog = fs::read(ws.path().join("catalog.json")).unwrap();
    let json: serde_json::Value = serde_json::from_slice(&catalog).unwrap();
    assert_eq!(json["datasets"][0]["files"].as_array().unwrap().len(), 2);
    assert_eq!(testkg(ws.path(), &args).code, 0);
    assert_eq!(fs::read(ws.path().join("catalog.json")).unwrap(), catalog);
    assert_eq!(testkg(ws.path(), &["verify"]).code, 0);

    fs::write(ws.path().join("datasets/ucd/nor.csv"), "time,V\n0,1\n").unwrap();
    let r = testkg(ws.path(), &["verify"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("does not match"), "{}", r.stdout);
    assert_eq!(testkg(ws.path(), &args).code, 2);
}

#[test]
fn publish_input_errors() {
    let ws = TempDir::new().unwrap();
    let r = testkg(ws.path(), &["publish", "--dataset", "d", "--publisher", "p", "missing.ttl"]);
    assert_eq!(r.code, 1);
    fs::write(ws.path().join(".testkg.lock"), "").unwrap();
    let r = testkg(ws.path(), &["publish", "--dataset", "d", "--publisher", "p", GOLDEN]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("locked"));
}

#[test]
fn committed_vocabularies_and_fixtures_are_current() {
    let root = repo();
    let r = testkg(&root, &["vocab", "emit", "--check"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let r = testkg(&root, &["fixtures", "regenerate", "--check"]);
    assert_eq!(r.code, 0, "{}", r.stdout);

    let ws = TempDir::new().unwrap();
    let r = testkg(ws.path(), &["vocab", "emit", "--check"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("is missing"));
}

#[test]
fn workspace_config_sets_base_and_prefixes() {
    let ws = TempDir::new().unwrap();
    fs::write(
        ws.path().join("testkg.toml"),
        "base = \"https://lab.example.com/kg\"\n[prefixes]\nlab = \"https://lab.example.com/kg/\"\n[profile]\nrules = [\"R4\"]\n",
    )
    .unwrap();
    assert_eq!(testkg(ws.path(), UCD_ANNOTATE).code, 0);
    let text = fs::read_to_string(ws.path().join("annotations/ucd-inverter.ttl")).unwrap();
    assert!(text.contains("@prefix lab: <https://lab.example.com/kg/> ."));
    assert!(text.contains("<https://lab.example.com/kg/dataset/ucd-inverter>"));
    let r = testkg(ws.path(), &["check", GAP]);
    assert_eq!(r.code, 0, "{}", r.stdout);

    fs::write(ws.path().join("testkg.toml"), "bogus = 1\n").unwrap();
    assert_eq!(testkg(ws.path(), &["verify"]).code, 1);
}

#[test]
fn usage_errors_and_quiet() {
    let ws = TempDir::new().unwrap();
    assert_eq!(testkg(ws.path(), &["frobnicate"]).code, 1);
    assert_eq!(testkg(ws.path(), &["--help"]).code, 0);
    let r = testkg(ws.path(), &["--quiet", "check", GOLDEN]);
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
    let r = testkg(ws.path(), &["--format", "structured", "check", GOLDEN]);
    let json: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(json["schemaVersion"], 1);
    assert_eq!(json["summary"]["score"], 1.0);
}
