"""Smoke test of the testkg Python module over the committed fixtures.

Build and install the module first:

    pip install --no-build-isolation -e crates/python
    python3 python/smoke_test.py
"""

from pathlib import Path

import testkg

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"


def read(rel):
    return (FIX / rel).read_text()


def main():
    golden = testkg.parse_turtle(read("ucd/expected/ucd-inverter.ttl"))
    again = testkg.Graph(golden.to_turtle())
    assert golden.isomorphic(again) and len(golden) == len(again)

    store = testkg.Store(golden)
    rows = store.query("SELECT DISTINCT ?p WHERE { ?m annot:recordsPhenomenon ?p }")
    assert len(rows) == 4, rows
    assert store.validate()["status"] == "pass"
    assert store.check_completeness()["summary"]["score"] == 1.0

    gap = testkg.Store(testkg.parse_turtle(read("ucd/expected/ucd-inverter-breaker-gap.ttl")))
    report = gap.check_completeness()
    assert [f["code"] for f in report["findings"]] == ["R7"], report

    annotated = testkg.annotate(
        [read("ucd/suite.toml")],
        [read("ucd/tests/nor.toml"), read("ucd/tests/apr.toml")],
        [("nor", "logs/nor.csv", read("ucd/logs/nor.csv")), ("apr", "logs/apr.csv", read("ucd/logs/apr.csv"))],
        read("ucd/channels.toml"),
        read("ucd/context.toml"),
        config=read("ucd/config.toml"),
    )
    assert annotated.to_turtle() == read("ucd/expected/ucd-inverter.ttl")

    diff = testkg.diff_configs(read("ucd/config.toml"), read("zhaw/config.toml"))
    assert sorted(f["message"] for f in diff["findings"]) == ["operatingPoint: 0.62 -> 0.92", "phases: 1 -> 3"]

    twin = testkg.Store(testkg.parse_turtle(read("digital-twin/provenance.ttl")))
    up = twin.upstream("https://example.org/cpes/data/entity/DS3")
    assert sorted(u.rsplit("/", 1)[1] for u in up) == ["DS1", "DS2", "code", "modelConfig", "twinModel"]

    channels = read("synthetic/channels.toml")
    clean = testkg.generate_synthetic_trace("apr", 3000.0)
    assert clean == read("synthetic/apr-clean.csv")
    assert testkg.evaluate(clean, channels, "apr", pn=3000.0)["status"] == "pass"
    dropped = testkg.generate_synthetic_trace("apr", 3000.0, disconnect_at=700.0)
    verdict = testkg.evaluate(dropped, channels, "apr", pn=3000.0)
    assert verdict["summary"]["outcome"] == "FAIL", verdict

    vocabs = dict(testkg.emit_vocabularies())
    for name, text in vocabs.items():
        assert text == (ROOT / "vocab" / f"{name}.ttl").read_text(), name

    try:
        testkg.parse_turtle("<urn:a> <urn:b>")
    except testkg.TestkgError as e:
        assert "1:" in str(e)
    else:
        raise AssertionError("malformed Turtle was accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
