import io
import json
from importlib import resources

import jsonschema
import pytest

from special_monoid import cli
from special_monoid.lang import language_slice, parse_grammar
from special_monoid.presentation import parse_presentation

SCHEMA = json.loads(resources.files("special_monoid").joinpath("report.schema.json").read_text())


def run(argv, data_dir, fmt="text"):
    out = io.StringIO()
    argv = [a if not a.startswith("@") else str(data_dir / a[1:]) for a in argv]
    code = cli.run([*argv, "--format", fmt], out)
    text = out.getvalue()
    if fmt == "json":
        report = json.loads(text)
        jsonschema.validate(report, SCHEMA)
        assert report["exit_code"] == code
        return code, report
    return code, text


CASES = [
    (["validate", "@example1.smp"], 0),
    (["pieces", "@example1.smp"], 0),
    (["units", "@bicyclic.smp"], 0),
    (["decide", "@bicyclic.smp", "--units", "@trivial.us", "bbcc", ""], 0),
    (["decide", "@bicyclic.smp", "--units", "@trivial.us", "cb", ""], 1),
    (["decide", "@cyclic3.smp", "--units", "@z3.us", "aaaa", "a"], 0),
    (["decide", "@free1.smp", "--units", "@free1.us", "ab", "ba"], 0),
    (["decide", "@free1.smp", "--units", "@free1.us", "a", "b"], 1),
    (["decide", "@abc_b2.smp", "--units", "@z2_abc.us", "bbb", "b"], 0),
    (["invertible", "@bicyclic.smp", "--units", "@trivial.us", "bbcc"], 0),
    (["invertible", "@bicyclic.smp", "--units", "@trivial.us", "b"], 1),
    (["ratmem", "@bicyclic.smp", "--units", "@trivial.us", "bbcc", "--regex", "(bc)*"], 0),
    (["ratmem", "@bicyclic.smp", "--units", "@trivial.us", "b", "--regex", "(bc)*"], 1),
    (["class", "@bicyclic.smp", "--units", "trivial", "", "--maxlen", "6"], 0),
    (["oracle", "@bicyclic.smp", "bc", ""], 0),
    (["oracle", "@example1.smp", "ab", ""], 1),
    (["oracle", "@example1.smp", "ab", "", "--max-rules", "1", "--max-states", "10"], 2),
    (["classify", "@cyclic3.smp"], 0),
    (["classify", "@bicyclic.smp"], 1),
    (["decide", "@bicyclic.smp", "--units", "@trivial.us", "bx", ""], 3),
    (["decide", "@example1.smp", "--units", "@trivial.us", "ab", ""], 3),     # units spec contradicted
    (["decide", "@example1.smp", "--units", "@z_example.us", "acabab", ""], 0),
    (["decide", "@example1.smp", "--units", "@z_example.us", "ab", ""], 1),
    (["decide", "@nope.smp", "--units", "@trivial.us", "b", ""], 3),
]


@pytest.mark.parametrize("argv, code", CASES, ids=lambda x: " ".join(x) if isinstance(x, list) else str(x))
def test_exit_codes_and_schema(argv, code, data_dir):
    c_json, report = run(argv + ["--no-cache"] * (argv[0] in ("decide", "invertible", "ratmem", "class")),
                         data_dir, "json")
    assert c_json == code
    c_text, _ = run(argv, data_dir)
    assert c_text == code
    if "verdict" in report and code in (0, 1):
        assert report["verdict"] in (("equal", "yes") if code == 0 else ("not_equal", "no"))


def test_pieces_text(data_dir):
    code, text = run(["pieces", "@example1.smp"], data_dir)
    assert code == 0
    assert "Δ = {aabbacc, ab, ac}" in text


def test_normalize_writes_file(data_dir):
    out = data_dir / "n.smp"
    code, report = run(["normalize", "@example1.smp", "-o", str(out)], data_dir, "json")
    assert code == 0 and report["sigma"] == 6 and report["new_generators"] == ["_p0", "_p1"]
    p = parse_presentation(out.read_text())
    assert len(p.relators) == 6


def test_wp_grammar_and_cache(data_dir):
    g = data_dir / "wp.cfg"
    code, _ = run(["wp-grammar", "@bicyclic.smp", "--units", "@trivial.us", "-o", str(g)], data_dir)
    assert code == 0
    wp = parse_grammar(g.read_text())
    assert "bc#" in language_slice(wp, 3)
    cache = list((data_dir / ".smcache").glob("wp-*.cfg"))
    assert len(cache) == 1
    # second call is served from the cache
    code, report = run(["decide", "@bicyclic.smp", "--units", "@trivial.us", "bbcc", ""], data_dir, "json")
    assert code == 0 and report["equal"]


def test_ancestors(data_dir):
    out = data_dir / "anc.cfg"
    code, report = run(["ancestors", "@dyck.cfg", "@dyck.rules", "-o", str(out)], data_dir, "json")
    assert code == 0 and not report["empty"]
    got = language_slice(parse_grammar(out.read_text()), 6)
    assert "(())()" in got and ")(" not in got


def test_option_before_subcommand(data_dir):
    out = io.StringIO()
    assert cli.run(["--format", "json", "classify", str(data_dir / "cyclic3.smp")], out) == 0
    assert json.loads(out.getvalue())["classification"] == "FiniteGroup"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as ei:
        cli.run(["decide"])
    assert ei.value.code == 3
