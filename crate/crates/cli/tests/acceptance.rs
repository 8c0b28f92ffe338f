//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use testkg::en50549::{apr_spec, evaluate, nor_spec, EvalOptions, Outcome, TestSequenceSpec, Verdict};
use testkg::fixtures::generate_synthetic_trace;
use testkg::ns::{prov, xsd};
use testkg::prov::{check_completeness, default_profile, upstream};
use testkg::rdf::{isomorphic, Graph, Iri, Literal, Term, Triple};
use testkg::scm::{diff_configurations, parse_config, AttrValue};
use testkg::store::Store;
use testkg::turtle::{parse_turtle, serialize_turtle};
use testkg::vocab::{all_rules, all_vocabularies, check_shapes, emit_vocabulary};

/// Per-unit tolerance on detected level means.
const LEVEL_TOLERANCE_PU: f64 = 0.01;
const NOR_RUNTIME: Duration = Duration::from_secs(1);
const LINEAGE_RUNTIME: Duration = Duration::from_millis(100);
const ROUND_TRIP_GRAPHS: usize = 1000;
const QUERY_CASES: usize = 500;
const MAX_STORE_TRIPLES: usize = 200;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn levels_within(v: &Verdict, spec: &TestSequenceSpec) -> Result<f64, String> {
    ensure(v.per_level.len() == spec.levels.len(), || format!("{} level verdicts for {} levels", v.per_level.len(), spec.levels.len()))?;
    let mut worst: f64 = 0.0;
    for (l, s) in v.per_level.iter().zip(&spec.levels) {
        worst = worst.max((l.observed_mean - s.setpoint).abs());
    }
    ensure(worst <= LEVEL_TOLERANCE_PU, || format!("level mean off by {worst:.4} pu"))?;
    Ok(worst)
}

// ---- 1 ---------------------------------------------------------------------

fn nor_sequence() -> Check {
    let spec = nor_spec(230.0).map_err(|e| e.to_string())?;
    let setpoints: Vec<f64> = spec.levels.iter().map(|l| l.setpoint).collect();
    ensure(setpoints == [0.85, 1.00, 1.10] && spec.levels.iter().all(|l| l.dwell == 600.0), || format!("levels {setpoints:?}"))?;
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for (noise, seed) in [(0.0, 0), (0.002, 17)] {
        let trace = generate_synthetic_trace(&spec, 1.0, noise, None, seed).map_err(|e| e.to_string())?;
        let t0 = Instant::now();
        let v = evaluate(&trace, &spec, &EvalOptions::default()).map_err(|e| e.to_string())?;
        slowest = slowest.max(t0.elapsed());
        ensure(v.segments.len() == 3, || format!("{} segments", v.segments.len()))?;
        ensure(v.outcome == Outcome::Pass, || format!("outcome {} ({:?})", v.outcome, v.reasons))?;
        worst = worst.max(levels_within(&v, &spec)?);
    }
    ensure(slowest < NOR_RUNTIME, || format!("took {slowest:?}"))?;
    Ok(format!("3 segments, max level error {worst:.4} pu, {slowest:?}"))
}

// ---- 2 ---------------------------------------------------------------------

fn apr_sequence() -> Check {
    let spec = apr_spec(3000.0).map_err(|e| e.to_string())?;
    let expected = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.3, 0.6, 1.0];
    let setpoints: Vec<f64> = spec.levels.iter().map(|l| l.setpoint).collect();
    ensure(setpoints.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12) && setpoints.len() == 12, || format!("levels {setpoints:?}"))?;
    ensure(spec.levels.iter().all(|l| l.dwell == 120.0) && spec.averaging_window == 60.0, || "dwell or window differs".into())?;
    let trace = generate_synthetic_trace(&spec, 1.0, 0.0, None, 0).map_err(|e| e.to_string())?;
    let v = evaluate(&trace, &spec, &EvalOptions::default()).map_err(|e| e.to_string())?;
    ensure(v.outcome == Outcome::Pass, || format!("clean trace: {} ({:?})", v.outcome, v.reasons))?;
    let worst = levels_within(&v, &spec)?;

    let total = spec.total_duration();
    let mut points: Vec<f64> = (0..).map(|k| k as f64 * 7.0).take_while(|t| *t < total).collect();
    points.push(total - 1.0);
    for &at in &points {
        let trace = generate_synthetic_trace(&spec, 1.0, 0.0, Some(at), 0).map_err(|e| e.to_string())?;
        let v = evaluate(&trace, &spec, &EvalOptions::default()).map_err(|e| format!("disconnect at {at}: {e}"))?;
        ensure(v.outcome == Outcome::Fail, || format!("disconnect at {at}: {}", v.outcome))?;
        ensure(v.reasons.iter().any(|r| r == "disconnection detected"), || format!("disconnect at {at}: reasons {:?}", v.reasons))?;
    }
    Ok(format!("12 levels, max level error {worst:.4} pu; {} forced disconnections all FAIL", points.len()))
}

// ---- 3 ---------------------------------------------------------------------

fn completeness_gap() -> Check {
    let load = |rel: &str| -> Result<Store, String> {
        let text = fs::read_to_string(repo().join(rel)).map_err(|e| format!("{rel}: {e}"))?;
        Ok(Store::from_graph(&parse_turtle(&text).map_err(|e| format!("{rel}: {e}"))?))
    };
    let full = check_completeness(&load("fixtures/ucd/expected/ucd-inverter.ttl")?, &default_profile());
    ensure(full.score == 1.0, || format!("complete fixture scores {}", full.score))?;
    let gap = check_completeness(&load("fixtures/ucd/expected/ucd-inverter-breaker-gap.ttl")?, &default_profile());
    let r7: Vec<_> = gap.violations().filter(|f| f.code == "R7").collect();
    ensure(r7.len() == 1 && r7[0].message.contains("annot:BreakerState"), || format!("R7 findings {r7:?}"))?;
    ensure(gap.violations().count() == 1 && gap.score < 1.0, || format!("score {}", gap.score))?;
    Ok(format!("complete 1.0, gap {:.4} with R7 on annot:BreakerState", gap.score))
}

// ---- 4 ---------------------------------------------------------------------

/// Transitive closure of the derivation relation by repeated relaxation.
fn reachability_oracle(g: &Graph, start: &Term) -> BTreeSet<Term> {
    let by = |p: &str| -> Vec<(Term, Term)> {
        g.iter().filter(|t| t.predicate().as_str() == p).map(|t| (t.subject().clone(), t.object().clone())).collect()
    };
    let (derived, generated, used) = (by(prov::WAS_DERIVED_FROM), by(prov::WAS_GENERATED_BY), by(prov::USED));
    let mut edges: BTreeSet<(Term, Term)> = derived.into_iter().collect();
    for (e, a) in &generated {
        for (a2, x) in &used {
            if a == a2 {
                edges.insert((e.clone(), x.clone()));
            }
        }
    }
    let mut reach: BTreeSet<Term> = BTreeSet::new();
    loop {
        let before = reach.len();
        for (from, to) in &edges {
            if from == start || reach.contains(from) {
                reach.insert(to.clone());
            }
        }
        if reach.len() == before {
            break;
        }
    }
    reach.remove(start);
    reach
}

fn lineage() -> Check {
    let text = fs::read_to_string(repo().join("fixtures/digital-twin/provenance.ttl")).map_err(|e| e.to_string())?;
    let g = parse_turtle(&text).map_err(|e| e.to_string())?;
    let store = Store::from_graph(&g);
    let entity = |id: &str| Term::iri(&format!("https://example.org/cpes/data/entity/{id}")).unwrap();
    let t0 = Instant::now();
    let got = upstream(&store, &entity("DS3"));
    let took = t0.elapsed();
    let want: BTreeSet<Term> = ["DS2", "twinModel", "DS1", "modelConfig", "code"].iter().map(|id| entity(id)).collect();
    ensure(got == want, || format!("upstream {got:?}"))?;
    ensure(got == reachability_oracle(&g, &entity("DS3")), || "differs from the reachability oracle".into())?;
    ensure(took < LINEAGE_RUNTIME, || format!("took {took:?}"))?;
    Ok(format!("5 ancestors, oracle agrees, {took:?}"))
}

// ---- 5 ---------------------------------------------------------------------

fn configuration_diff() -> Check {
    let read = |rel: &str| fs::read_to_string(repo().join(rel)).map_err(|e| e.to_string());
    let a = parse_config(&read("fixtures/ucd/config.toml")?).map_err(|e| e.to_string())?;
    let b = parse_config(&read("fixtures/zhaw/config.toml")?).map_err(|e| e.to_string())?;
    let d = diff_configurations(&a, &b);
    ensure(
        d.added_systems.is_empty() && d.removed_systems.is_empty() && d.added_connections.is_empty() && d.removed_connections.is_empty(),
        || format!("structural changes {d:?}"),
    )?;
    let show = |v: &Option<AttrValue>| v.as_ref().map(AttrValue::to_string);
    let got: BTreeSet<(&str, &str, Option<String>, Option<String>)> = d
        .changed_attributes
        .iter()
        .map(|c| (c.system_a.as_str(), c.attribute.as_str(), show(&c.value_a), show(&c.value_b)))
        .collect();
    let s = |v: &str| Some(v.to_owned());
    let want = BTreeSet::from([("inverter", "phases", s("1"), s("3")), ("inverter", "operatingPoint", s("0.62"), s("0.92"))]);
    ensure(got == want && d.changed_attributes.len() == 2, || format!("attribute changes {got:?}"))?;
    Ok("inverter phases 1->3, operatingPoint 0.62->0.92".into())
}

// ---- 6 ---------------------------------------------------------------------

const CHAR_POOL: &[char] = &['a', 'Z', '0', ' ', '"', '\'', '\\', '\n', '\r', '\t', '#', '@', '.', ';', ',', '<', '>', 'é', '日', '😀', '\u{7}', '\u{7f}', '_', ':'];

fn random_text(rng: &mut ChaCha8Rng, max: usize) -> String {
    let n = rng.random_range(0..=max);
    (0..n)
        .map(|_| {
            if rng.random_bool(0.2) {
                char::from_u32(rng.random_range(0x20..0x3000)).unwrap_or('x')
            } else {
                CHAR_POOL[rng.random_range(0..CHAR_POOL.len())]
            }
        })
        .collect()
}

fn random_iri(rng: &mut ChaCha8Rng) -> Iri {
    let local: String = (0..rng.random_range(0..6)).map(|_| (b'a' + rng.random_range(0..26)) as char).collect();
    let text = match rng.random_range(0..5) {
        0 => format!("http://example.org/{local}"),
        1 => format!("http://example.org/v#{local}"),
        2 => format!("urn:x:{local}-{}", rng.random_range(0..100)),
        3 => format!("http://other.org/{local}/{}", rng.random_range(0..5)),
        _ => format!("https://example.org/cpes/annot#{local}"),
    };
    Iri::new(text).unwrap()
}

fn random_literal(rng: &mut ChaCha8Rng) -> Term {
    let l = match rng.random_range(0..7) {
        0 => Literal::string(random_text(rng, 12)),
        1 => Literal::lang(random_text(rng, 6), ["en", "de", "en-GB", "fr-CA"][rng.random_range(0..4)]).unwrap(),
        2 => Literal::integer(rng.random_range(-1_000_000i64..1_000_000)),
        3 => Literal::decimal(rng.random_range(-1.0e6..1.0e6)),
        4 => Literal::boolean(rng.random()),
        5 => Literal::typed(format!("{}e{}", rng.random_range(0..999), rng.random_range(-9..9)), Iri::new(xsd::DOUBLE).unwrap()),
        _ => Literal::typed(random_text(rng, 5), random_iri(rng)),
    };
    Term::Literal(l)
}

fn random_node(rng: &mut ChaCha8Rng) -> Term {
    if rng.random_bool(0.25) {
        Term::Blank(format!("b{}", rng.random_range(0..6)))
    } else {
        Term::Iri(random_iri(rng))
    }
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new();
    for _ in 0..rng.random_range(0..16) {
        let o = if rng.random_bool(0.5) { random_literal(rng) } else { random_node(rng) };
        g.insert(Triple::new(random_node(rng), random_iri(rng), o).unwrap());
    }
    if rng.random_bool(0.5) {
        g.set_prefix("ex", "http://example.org/").unwrap();
        g.set_prefix("v", "http://example.org/v#").unwrap();
        g.set_prefix("annot", "https://example.org/cpes/annot#").unwrap();
    }
    g
}

fn turtle_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0006);
    let mut failures = Vec::new();
    let mut triples = 0;
    for i in 0..ROUND_TRIP_GRAPHS {
        let g = random_graph(&mut rng);
        triples += g.len();
        let text = serialize_turtle(&g);
        match parse_turtle(&text) {
            Ok(back) if isomorphic(&g, &back) == Ok(true) => {}
            Ok(_) => failures.push(format!("graph {i} not isomorphic")),
            Err(e) => failures.push(format!("graph {i}: {e}")),
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    Ok(format!("{ROUND_TRIP_GRAPHS} graphs ({triples} triples), 0 failures"))
}

// ---- 7 ---------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Slot {
    Var(&'static str),
    Const(Term),
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone)]
enum Filter {
    Compare(&'static str, Op, Term),
    Regex(&'static str, String),
}

#[derive(Debug, Clone)]
struct Case {
    patterns: Vec<[Slot; 3]>,
    filter: Option<Filter>,
    projection: Option<Vec<&'static str>>,
    distinct: bool,
}

const VARS: [&str; 4] = ["a", "b", "c", "d"];

fn q_subject(i: u32) -> Term {
    Term::iri(&format!("http://example.org/s{i}")).unwrap()
}

fn q_predicate(i: u32) -> Term {
    Term::iri(&format!("http://example.org/p{i}")).unwrap()
}

fn q_object(rng: &mut ChaCha8Rng) -> Term {
    match rng.random_range(0..3) {
        0 => q_subject(rng.random_range(0..8)),
        1 => Term::Literal(Literal::integer(rng.random_range(0..10))),
        _ => Term::string(["a", "b", "c"][rng.random_range(0..3)]),
    }
}

fn random_store(rng: &mut ChaCha8Rng) -> Vec<Triple> {
    let n = rng.random_range(0..=MAX_STORE_TRIPLES);
    let mut set = BTreeSet::new();
    for _ in 0..n {
        let p = q_predicate(rng.random_range(0..4));
        let Term::Iri(p) = p else { unreachable!() };
        set.insert(Triple::new(q_subject(rng.random_range(0..8)), p, q_object(rng)).unwrap());
    }
    set.into_iter().collect()
}

fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let slot = |rng: &mut ChaCha8Rng, constant: fn(&mut ChaCha8Rng) -> Term| {
        if rng.random_bool(0.7) {
            Slot::Var(VARS[rng.random_range(0..VARS.len())])
        } else {
            Slot::Const(constant(rng))
        }
    };
    let patterns: Vec<[Slot; 3]> = (0..rng.random_range(1..=3))
        .map(|_| {
            let s = slot(rng, |r| q_subject(r.random_range(0..8)));
            let p = if rng.random_bool(0.2) { Slot::Var(VARS[rng.random_range(0..4)]) } else { Slot::Const(q_predicate(rng.random_range(0..4))) };
            let o = slot(rng, q_object);
            [s, p, o]
        })
        .collect();
    let used: Vec<&'static str> = {
        let mut v: Vec<&'static str> = patterns.iter().flatten().filter_map(|s| if let Slot::Var(v) = s { Some(*v) } else { None }).collect();
        v.sort();
        v.dedup();
        v
    };
    let filter = if used.is_empty() || rng.random_bool(0.4) {
        None
    } else {
        let var = used[rng.random_range(0..used.len())];
        Some(match rng.random_range(0..4) {
            0 => Filter::Regex(var, ["s[0-3]", "^b$", "p2", "7"][rng.random_range(0..4)].to_owned()),
            1 => Filter::Compare(var, Op::Eq, q_object(rng)),
            _ => {
                let op = [Op::Eq, Op::Ne, Op::Lt, Op::Le, Op::Gt, Op::Ge][rng.random_range(0..6)];
                let operand = if rng.random_bool(0.7) { Term::Literal(Literal::integer(rng.random_range(0..10))) } else { q_object(rng) };
                Filter::Compare(var, op, operand)
            }
        })
    };
    let projection = if used.is_empty() || rng.random_bool(0.3) {
        None
    } else {
        let mut keep: Vec<&'static str> = used.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
        if keep.is_empty() {
            keep.push(used[0]);
        }
        Some(keep)
    };
    Case { patterns, filter, projection, distinct: rng.random_bool(0.5) }
}

fn render(case: &Case) -> String {
    let slot = |s: &Slot| match s {
        Slot::Var(v) => format!("?{v}"),
        Slot::Const(t) => t.to_string(),
    };
    let head = match &case.projection {
        None => "*".to_owned(),
        Some(vs) => vs.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join(" "),
    };
    let mut body: Vec<String> = case.patterns.iter().map(|p| format!("{} {} {} .", slot(&p[0]), slot(&p[1]), slot(&p[2]))).collect();
    if let Some(f) = &case.filter {
        body.push(match f {
            Filter::Regex(v, re) => format!("FILTER regex(?{v}, \"{re}\")"),
            Filter::Compare(v, op, t) => {
                let sym = match op {
                    Op::Eq => "=",
                    Op::Ne => "!=",
                    Op::Lt => "<",
                    Op::Le => "<=",
                    Op::Gt => ">",
                    Op::Ge => ">=",
                };
                format!("FILTER(?{v} {sym} {t})")
            }
        });
    }
    format!("SELECT {}{head} WHERE {{ {} }}", if case.distinct { "DISTINCT " } else { "" }, body.join(" "))
}

fn as_integer(t: &Term) -> Option<i64> {
    let l = t.as_literal()?;
    (l.datatype().as_str() == xsd::INTEGER).then(|| l.lexical().parse().ok()).flatten()
}

fn oracle_compare(value: &Term, op: Op, operand: &Term) -> bool {
    use std::cmp::Ordering::*;
    let holds = |o: std::cmp::Ordering| match op {
        Op::Eq => o == Equal,
        Op::Ne => o != Equal,
        Op::Lt => o == Less,
        Op::Le => o != Greater,
        Op::Gt => o == Greater,
        Op::Ge => o != Less,
    };
    if let (Some(a), Some(b)) = (as_integer(value), as_integer(operand)) {
        return holds(a.cmp(&b));
    }
    match op {
        Op::Eq => value == operand,
        Op::Ne => value != operand,
        _ => match (value.as_literal(), operand.as_literal()) {
            (Some(a), Some(b)) if a.datatype() == b.datatype() && a.language() == b.language() => holds(a.lexical().cmp(b.lexical())),
            _ => false,
        },
    }
}

type Row = BTreeMap<String, Term>;

/// Nested loops over every triple for every pattern, in query order.
fn brute_force(triples: &[Triple], case: &Case) -> Vec<Row> {
    let mut rows: Vec<BTreeMap<&str, Term>> = vec![BTreeMap::new()];
    for p in &case.patterns {
        let mut next = Vec::new();
        for row in &rows {
            for t in triples {
                let parts = [t.subject().clone(), Term::Iri(t.predicate().clone()), t.object().clone()];
                let mut b = row.clone();
                let ok = p.iter().zip(parts).all(|(slot, value)| match slot {
                    Slot::Const(c) => *c == value,
                    Slot::Var(v) => match b.get(v) {
                        Some(bound) => *bound == value,
                        None => {
                            b.insert(v, value);
                            true
                        }
                    },
                });
                if ok {
                    next.push(b);
                }
            }
        }
        rows = next;
    }
    if let Some(f) = &case.filter {
        rows.retain(|b| match f {
            Filter::Compare(v, op, t) => oracle_compare(&b[v], *op, t),
            Filter::Regex(v, re) => Regex::new(re).unwrap().is_match(&b[v].value_text()),
        });
    }
    let mut out: Vec<Row> = rows
        .into_iter()
        .map(|b| {
            b.into_iter()
                .filter(|(k, _)| case.projection.as_ref().is_none_or(|p| p.contains(k)))
                .map(|(k, v)| (k.to_owned(), v))
                .collect()
        })
        .collect();
    out.sort();
    if case.distinct {
        out.dedup();
    }
    out
}

fn query_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0007);
    let mut nonempty = 0;
    let mut filtered = 0;
    for i in 0..QUERY_CASES {
        let triples = random_store(&mut rng);
        let case = random_case(&mut rng);
        let text = render(&case);
        let graph: Graph = triples.iter().cloned().collect();
        let result = Store::from_graph(&graph).query(&text).map_err(|e| format!("case {i}: {e}\n{text}"))?;
        let mut got: Vec<Row> = result
            .rows
            .iter()
            .map(|r| result.variables.iter().cloned().zip(r.iter().cloned()).collect())
            .collect();
        got.sort();
        let want = brute_force(&triples, &case);
        ensure(got == want, || format!("case {i}: {} rows, oracle {}\n{text}", got.len(), want.len()))?;
        nonempty += usize::from(!want.is_empty());
        filtered += usize::from(case.filter.is_some());
    }
    Ok(format!("{QUERY_CASES} cases match ({nonempty} non-empty, {filtered} filtered)"))
}

// ---- 8 ---------------------------------------------------------------------

fn run(ws: &Path, args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_testkg"))
        .current_dir(repo())
        .arg("--workspace")
        .arg(ws)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    ensure(out.status.code() == Some(0), || {
        format!("`{}` exited {:?}: {}{}", args[0], out.status.code(), stdout, String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(stdout)
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_owned()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_owned(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn pipeline_once(ws: &Path) -> Result<Vec<String>, String> {
    let ann = ws.join("annotations/ucd-inverter.ttl");
    let ann = ann.to_str().unwrap();
    let verdict = |k: &str| ws.join(format!("verdicts/{k}.ttl")).to_str().unwrap().to_owned();
    let (nor_v, apr_v) = (verdict("nor"), verdict("apr"));
    let steps: Vec<Vec<&str>> = vec![
        vec![
            "annotate", "--suite", "fixtures/ucd/suite.toml", "--test", "fixtures/ucd/tests/nor.toml", "--test",
            "fixtures/ucd/tests/apr.toml", "--log", "fixtures/ucd/logs/nor.csv", "--log", "fixtures/ucd/logs/apr.csv",
            "--channels", "fixtures/ucd/channels.toml", "--context", "fixtures/ucd/context.toml",
        ],
        vec!["validate", ann],
        vec!["check", ann],
        vec!["evaluate", "fixtures/ucd/logs/nor.csv", "--channels", "fixtures/ucd/channels.toml", "--kind", "nor", "--un", "230", "--pn", "3000", "--verdict-out", &nor_v],
        vec!["evaluate", "fixtures/ucd/logs/apr.csv", "--channels", "fixtures/ucd/channels.toml", "--kind", "apr", "--un", "230", "--pn", "3000", "--verdict-out", &apr_v],
        vec![
            "publish", "--dataset", "ucd-inverter", "--publisher", "ucd", "--created-at", "2023-05-10T12:00:00Z", ann,
            "fixtures/ucd/logs/nor.csv", "fixtures/ucd/logs/apr.csv", &nor_v, &apr_v,
        ],
        vec!["verify"],
    ];
    steps.iter().map(|s| run(ws, s)).collect()
}

fn end_to_end() -> Check {
    let first = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let second = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let out1 = pipeline_once(first.path())?;
    let files1 = snapshot(first.path());
    let rerun = pipeline_once(first.path())?;
    ensure(snapshot(first.path()) == files1, || "re-run changed workspace files".into())?;
    ensure(rerun == out1, || "re-run changed reports".into())?;
    let out2 = pipeline_once(second.path())?;
    let strip = |outs: &[String], ws: &Path| outs.iter().map(|o| o.replace(ws.to_str().unwrap(), "<ws>")).collect::<Vec<_>>();
    ensure(snapshot(second.path()) == files1, || "fresh workspace differs".into())?;
    ensure(strip(&out2, second.path()) == strip(&out1, first.path()), || "fresh workspace reports differ".into())?;

    let catalog = testkg::catalog::Catalog::load(first.path()).map_err(|e| e.to_string())?;
    testkg::catalog::verify(first.path(), &catalog).map_err(|e| e.to_string())?;
    let d = catalog.dataset("ucd-inverter").ok_or("dataset not in catalog")?;
    for entry in &d.files {
        let actual = testkg::catalog::sha256_hex(&fs::read(first.path().join(&entry.relative_path)).map_err(|e| e.to_string())?);
        ensure(actual == entry.sha256, || format!("{} checksum", entry.relative_path))?;
    }
    Ok(format!("7 steps exit 0 twice, {} files byte-identical, {} checksums verify", files1.len(), d.files.len()))
}

// ---- 9 ---------------------------------------------------------------------

fn vocabulary_emission() -> Check {
    let rules = all_rules();
    let mut names = Vec::new();
    for v in all_vocabularies() {
        v.validate().map_err(|e| format!("{}: {e}", v.name))?;
        let g = emit_vocabulary(&v).map_err(|e| format!("{}: {e}", v.name))?;
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text).map_err(|e| format!("{}: {e}", v.name))?;
        ensure(isomorphic(&g, &back) == Ok(true), || format!("{} does not re-parse isomorphically", v.name))?;
        let violations = check_shapes(&Store::from_graph(&back), &rules);
        ensure(violations.is_empty(), || format!("{}: {} shape violations", v.name, violations.len()))?;
        let golden = repo().join("vocab").join(format!("{}.ttl", v.name));
        let committed = fs::read_to_string(&golden).map_err(|e| format!("{}: {e}", golden.display()))?;
        ensure(committed == text, || format!("{} differs from the generated text", golden.display()))?;
        names.push(v.name);
    }
    ensure(names.len() == 4, || format!("{} vocabularies", names.len()))?;
    Ok(format!("{} match their goldens", names.join(", ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("NOR sequence reproduction", nor_sequence),
        ("APR sequence reproduction", apr_sequence),
        ("completeness gap detection", completeness_gap),
        ("provenance lineage", lineage),
        ("configuration diff", configuration_diff),
        ("Turtle round trip", turtle_round_trip),
        ("query oracle equivalence", query_oracle),
        ("end-to-end pipeline", end_to_end),
        ("vocabulary emission", vocabulary_emission),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
