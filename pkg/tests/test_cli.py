"""Drives the command line front end through run() and checks the JSON.

Covers the document parser, the output shape of every subcommand, the
exit code contract (0 ok, 1 domain failure, 2 bad usage), and that the
emitted text is deterministic.
"""

import io
import json
import sys

from critforge.arithstruct import laplacian
from critforge.cli import fixture_path, load_document, run

C4_DELTA = {"v1": 3, "v2": 1, "v3": -1, "v4": -2}


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def invoke_ok(capsys, *argv):
    """Run a subcommand expected to succeed and parse its stdout."""
    code, out, err = invoke(capsys, *argv)
    assert code == 0, err
    assert err == ""
    return json.loads(out)


def write_doc(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_fixture_path_appends_the_json_suffix():
    assert fixture_path("t1") == fixture_path("t1.json")


def test_group_reports_invariant_factors(capsys):
    got = invoke_ok(capsys, "group", "--input", fixture_path("fig3_broom"))
    assert got == {"invariant_factors": [3, 18], "order": 54}
    got = invoke_ok(capsys, "group", "--input", fixture_path("c4_example"))
    assert got == {"invariant_factors": [2], "order": 2}


def test_validate_accepts_the_cycle_fixture(capsys):
    got = invoke_ok(capsys, "validate", "--input", fixture_path("c4_example"))
    assert got == {"problems": [], "valid": True}


def test_validate_reports_problems(capsys, tmp_path):
    # With d present the balance check runs; vertex a is the offender.
    bad = write_doc(tmp_path, "bad.json", {
        "vertices": ["a", "b"],
        "edges": [["a", "b"]],
        "r": {"a": "1", "b": "1"},
        "d": {"a": "2", "b": "1"},
    })
    got = invoke_ok(capsys, "validate", "--input", bad)
    assert got["valid"] is False
    assert got["problems"]
    assert "a" in got["problems"][0]

    # Without d the divisibility route reports instead.
    bad = write_doc(tmp_path, "bad_r.json", {
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b"], ["b", "c"]],
        "r": {"a": "1", "b": "1", "c": "5"},
    })
    got = invoke_ok(capsys, "validate", "--input", bad)
    assert got["valid"] is False
    assert len(got["problems"]) == 1


def test_divisor_degree_accepts_mixed_integer_spellings(capsys):
    got = invoke_ok(
        capsys, "divisor", "--input", fixture_path("fig3_broom"),
        "--chips", json.dumps({"v2": 1, "v9": "-18"}), "--op", "degree",
    )
    assert got == {"degree": 0}


def test_divisor_order(capsys):
    got = invoke_ok(
        capsys, "divisor", "--input", fixture_path("c4_example"),
        "--chips", json.dumps(C4_DELTA), "--op", "order",
    )
    assert got == {"order": 2}


def test_divisor_equivalence_and_witness(capsys):
    path = fixture_path("c4_example")
    got = invoke_ok(
        capsys, "divisor", "--input", path,
        "--chips", json.dumps(C4_DELTA), "--op", "equivalent",
        "--other", json.dumps({}),
    )
    assert got == {"equivalent": False, "firing_vector": None}

    doubled = {v: 2 * c for v, c in C4_DELTA.items()}
    got = invoke_ok(
        capsys, "divisor", "--input", path,
        "--chips", json.dumps(doubled), "--op", "equivalent",
        "--other", json.dumps({}),
    )
    assert got["equivalent"] is True
    x = {v: int(s) for v, s in got["firing_vector"].items()}

    g, _, d = load_document(path)
    moved = laplacian(g, d).apply([x[v] for v in g.vertices])
    for i, v in enumerate(g.vertices):
        assert doubled.get(v, 0) - moved[i] == 0


def test_decompose_lists_pieces(capsys):
    got = invoke_ok(capsys, "decompose", "--input", fixture_path("t1"))
    assert got == {
        "iota": 1,
        "pieces": [
            {
                "center": "02",
                "leaves": 4,
                "merge_leaf": "02*",
                "regular": False,
                "target": "01",
                "vertices": ["02", "02*", "03", "04", "05"],
            },
            {
                "center": "06",
                "leaves": 3,
                "merge_leaf": None,
                "regular": None,
                "target": None,
                "vertices": ["01", "06", "07", "11", "13"],
            },
        ],
    }


def test_iota_and_nu2_reports(capsys):
    got = invoke_ok(capsys, "iota", "--input", fixture_path("t1"))
    assert got == {"bound": 3, "iota": 1, "leaves": 6}
    got = invoke_ok(capsys, "nu2", "--input", fixture_path("t1"))
    assert got == {"bound": 3, "edges": 8, "nu2": 5}
    got = invoke_ok(capsys, "iota", "--input", fixture_path("fig4_tree"))
    assert got == {"bound": 7, "iota": 3, "leaves": 12}
    got = invoke_ok(capsys, "nu2", "--input", fixture_path("fig4_tree"))
    assert got == {"bound": 7, "edges": 21, "nu2": 14}


def test_merge_rebuilds_the_merged_fixture(capsys):
    got = invoke_ok(
        capsys, "merge",
        "--left", fixture_path("fig1_star3"),
        "--right", fixture_path("fig1_star4"),
        "--left-vertex", "s0", "--right-vertex", "t1",
    )
    assert got == {
        "d": {"s0": "3", "s1": "4", "s2": "4", "s3": "2",
              "t0": "1", "t2": "6", "t3": "6", "t4": "6"},
        "edges": [["s0", "s1"], ["s0", "s2"], ["s0", "s3"], ["s0", "t0"],
                  ["t0", "t2"], ["t0", "t3"], ["t0", "t4"]],
        "merge_report": {
            "additive": True,
            "glued_gcd": 1,
            "left_group": {"invariant_factors": [2], "order": 2},
            "merged_group": {"invariant_factors": [2, 2, 6], "order": 24},
            "order_identity_holds": True,
            "right_group": {"invariant_factors": [2, 6], "order": 12},
        },
        "r": {"s0": "12", "s1": "3", "s2": "3", "s3": "6",
              "t0": "24", "t2": "4", "t3": "4", "t4": "4"},
        "vertices": ["s0", "s1", "s2", "s3", "t0", "t2", "t3", "t4"],
    }

    # The emitted document is exactly the shipped merged example.
    g, r, d = load_document(fixture_path("fig2_merged"))
    assert {v: int(s) for v, s in got["r"].items()} == r
    assert {v: int(s) for v, s in got["d"].items()} == d
    assert [tuple(e) for e in got["edges"]] == [(u, v) for u, v, _ in g.edges()]


def test_construct_builds_brooms_and_the_trivial_tree(capsys):
    got = invoke_ok(capsys, "construct", "--group", "3,18", "--prongs", "2")
    assert got["group"] == {"invariant_factors": [3, 18], "order": 54}
    assert got["r"]["c"] == "324"
    assert len(got["vertices"]) == 10

    got = invoke_ok(capsys, "construct", "--group", "1")
    assert got["vertices"] == ["a", "b"]
    assert got["group"] == {"invariant_factors": [], "order": 1}


def test_construct_realizes_on_a_subdivision(capsys, tmp_path):
    got = invoke_ok(
        capsys, "construct", "--group", "4,4,4,4,4,4,4",
        "--tree", fixture_path("fig4_tree"), "--beta", "3",
    )
    assert got["group"] == {"invariant_factors": [4] * 7, "order": 16384}
    assert len(got["vertices"]) == 36
    assert len(got["edges"]) == 35

    # Feed the emitted document straight back through the other commands.
    out = write_doc(tmp_path, "built.json", got)
    assert invoke_ok(capsys, "group", "--input", out) == got["group"]
    assert invoke_ok(capsys, "validate", "--input", out) == {
        "problems": [], "valid": True,
    }
    assert invoke_ok(capsys, "iota", "--input", out) == {
        "bound": 7, "iota": 3, "leaves": 12,
    }
    assert invoke_ok(capsys, "nu2", "--input", out) == {
        "bound": 7, "edges": 35, "nu2": 28,
    }


def test_enumerate_lists_structures(capsys, tmp_path):
    path = write_doc(tmp_path, "p3.json", {
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b"], ["b", "c"]],
    })
    got = invoke_ok(capsys, "enumerate", "--input", path)
    assert got == {
        "count": 2,
        "structures": [
            {"d": {"a": "1", "b": "2", "c": "1"},
             "r": {"a": "1", "b": "1", "c": "1"}},
            {"d": {"a": "2", "b": "1", "c": "2"},
             "r": {"a": "1", "b": "2", "c": "1"}},
        ],
    }
    got = invoke_ok(capsys, "enumerate", "--input", path, "--r-bound", "1")
    assert got["count"] == 1


def test_reads_documents_from_stdin(capsys, monkeypatch):
    with open(fixture_path("fig3_broom"), encoding="utf-8") as fh:
        text = fh.read()
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    got = invoke_ok(capsys, "group", "--input", "-")
    assert got == {"invariant_factors": [3, 18], "order": 54}


def test_reruns_emit_identical_text(capsys):
    argv = ("merge", "--left", fixture_path("fig1_star3"),
            "--right", fixture_path("fig1_star4"),
            "--left-vertex", "s0", "--right-vertex", "t1")
    _, first, _ = invoke(capsys, *argv)
    _, second, _ = invoke(capsys, *argv)
    assert first == second


def test_usage_errors_exit_two(capsys, tmp_path):
    cases = [
        ("group", "--input", str(tmp_path / "missing.json")),
        ("group", "--input", fixture_path("t1")),  # no r map in the document
        ("divisor", "--input", fixture_path("c4_example"),
         "--chips", json.dumps({"zz": 1}), "--op", "degree"),
        ("divisor", "--input", fixture_path("c4_example"),
         "--chips", json.dumps(C4_DELTA), "--op", "equivalent"),
        ("construct", "--group", "4,2"),
        ("construct", "--group", "abc"),
        ("construct", "--group", "4", "--beta", "1"),  # --beta without --tree
        ("enumerate", "--input", fixture_path("t1"), "--r-bound", "0"),
    ]
    for argv in cases:
        code, _, err = invoke(capsys, *argv)
        assert code == 2, argv
        assert err.startswith("usage error:"), argv

    garbled = tmp_path / "garbled.json"
    garbled.write_text("not json{{", encoding="utf-8")
    code, _, err = invoke(capsys, "group", "--input", str(garbled))
    assert code == 2
    assert err.startswith("usage error:")

    mismatched = write_doc(tmp_path, "mismatched.json", {
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b"]],
    })
    code, _, err = invoke(capsys, "iota", "--input", mismatched)
    assert code == 2
    assert err.startswith("usage error:")

    # argparse failures share the exit code.
    code, _, _ = invoke(capsys)
    assert code == 2
    code, _, _ = invoke(capsys, "frobnicate")
    assert code == 2


def test_domain_errors_exit_one(capsys, tmp_path):
    # A cycle is not a tree, so decompose refuses it.
    code, _, err = invoke(
        capsys, "decompose", "--input", fixture_path("c4_example"))
    assert code == 1
    assert err.startswith("error:")

    # Unsatisfiable construction targets fail the same way.
    code, _, err = invoke(
        capsys, "construct", "--group", ",".join(["4"] * 8),
        "--tree", fixture_path("t1"), "--beta", "1")
    assert code == 1
    assert err.startswith("error:")

    code, _, err = invoke(
        capsys, "construct", "--group", "4",
        "--tree", fixture_path("t1"), "--beta", "9")
    assert code == 1
    assert err.startswith("error:")

    # A document whose labellings disagree is a domain failure, not usage.
    bad = write_doc(tmp_path, "invalid.json", {
        "vertices": ["a", "b"],
        "edges": [["a", "b"]],
        "r": {"a": "1", "b": "1"},
        "d": {"a": "2", "b": "1"},
    })
    code, _, err = invoke(capsys, "group", "--input", bad)
    assert code == 1
    assert err.startswith("error: invalid structure")


def test_help_exits_zero(capsys):
    code, out, _ = invoke(capsys, "--help")
    assert code == 0
    assert "usage" in out
