#!/usr/bin/env python3
"""
Test the amin-rel command line.

Tests:
1. validate - exit codes 0 / 1 / 2
2. rel - engines, JSON report, multi-target buckets, cap exit code
3. gen - deterministic output, files that validate
4. bench - CSV output, bad ranges
5. --relabel and --list
6. bad flag values and node names exit 2

Usage:
    uv run python tests/test_cli.py
"""

import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout

import pytest

from amin_rel.cli import EXIT_CAP, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, main
from amin_rel.workbench import CSV_COLUMNS

from networks import FIXTURES


def run(*argv):
    """Run the CLI, return (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue(), err.getvalue()


def test_validate_exit_codes():
    print("\n=== Test 1: validate ===")

    assert run("validate", FIXTURES / "fig1.json")[0] == EXIT_OK

    code, out, _ = run("validate", FIXTURES / "cycle.json")
    assert code == EXIT_VIOLATION
    assert "arc from higher to lower label: 3->2" in out.splitlines()

    assert run("validate", FIXTURES / "malformed.json")[0] == EXIT_INPUT
    assert run("validate", FIXTURES / "missing.json")[0] == EXIT_INPUT

    print("✅ 0 valid, 1 violations, 2 unreadable")


def test_rel_single_engine_json():
    print("\n=== Test 2: rel --engine bat ===")

    code, out, _ = run("rel", FIXTURES / "fig1.json", "--engine", "bat", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    bat = doc["engines"]["bat"]
    assert bat["reliability"] == 0.46875
    assert bat["feasible"] == 11
    assert bat["visited"] == 45
    assert doc["buckets"] is None and doc["delta"] is None

    code, out, _ = run("rel", FIXTURES / "fig1.json", "--engine", "dfs", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "engine,reliability,feasible,visited,generated,elapsed_s"
    assert lines[1].startswith("dfs,0.46875,11,")

    print("✅ R = 0.468750, feasible = 11")


def test_rel_all_engines_and_cap():
    print("\n=== Test 3: rel --engine all / cap ===")

    with tempfile.TemporaryDirectory() as tmp:
        sc5 = os.path.join(tmp, "sc5.json")
        sc8 = os.path.join(tmp, "sc8.json")
        assert run("gen", "semi", 5, "-o", sc5)[0] == EXIT_OK
        assert run("gen", "semi", 8, "-o", sc8)[0] == EXIT_OK

        code, out, _ = run("rel", sc5, "--engine", "all", "--format", "json")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert set(doc["engines"]) == {"bat", "dfs", "ugfm", "oracle"}
        for result in doc["engines"].values():
            assert abs(result["reliability"] - 0.821289) <= 1e-6
        assert doc["delta"] <= 1e-9

        code, _, err = run("rel", sc8, "--engine", "ugfm", "--cap", 1_900_000)
        assert code == EXIT_CAP
        assert "cap" in err

    print("✅ Engines agree, n = 8 UGFM exits 3")


def test_rel_targets():
    print("\n=== Test 4: rel targets ===")

    code, out, _ = run("rel", FIXTURES / "flex5.json", "--engine", "dfs", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["engines"]["dfs"]["reliability"] == 3 / 32
    assert doc["buckets"] == {"-": 17 / 32, "4": 7 / 32, "4,5": 3 / 32, "5": 5 / 32}

    code, out, _ = run(
        "rel", FIXTURES / "flex5.json", "--targets", "5", "--engine", "ugfm", "--format", "json"
    )
    assert code == EXIT_OK
    assert json.loads(out)["engines"]["ugfm"]["reliability"] == 8 / 32

    assert run("rel", FIXTURES / "flex5.json", "--targets", "9")[0] == EXIT_INPUT
    assert run("rel", FIXTURES / "flex5.json", "--targets", "x")[0] == EXIT_INPUT
    assert run("rel", FIXTURES / "cycle.json")[0] == EXIT_VIOLATION

    print("✅ Buckets and target overrides")


def test_gen_is_deterministic():
    print("\n=== Test 5: gen ===")

    first = run("gen", "random", 6, "--seed", 42)
    second = run("gen", "random", 6, "--seed", 42)
    assert first[0] == EXIT_OK
    assert first[1] == second[1]
    assert json.loads(first[1])["nodes"] == 6

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "r.json")
        assert run("gen", "random", 7, "--seed", 3, "--dirichlet", "-o", path)[0] == EXIT_OK
        assert run("validate", path)[0] == EXIT_OK

    assert run("gen", "semi", 1)[0] == EXIT_INPUT

    print("✅ Same seed, same file")


def test_bench_csv():
    print("\n=== Test 6: bench ===")

    code, out, _ = run("bench", "5..6", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert [line.split(",")[:4] for line in lines[1:]] == [
        ["5", "10", "2295", "388"],
        ["6", "15", "75735", "11164"],
    ]

    assert run("bench", "five..7")[0] == EXIT_INPUT
    assert run("bench", "5", "--engine", "dfs")[0] == EXIT_INPUT

    print("✅ Golden columns in CSV")


def test_relabel_and_list():
    print("\n=== Test 7: --relabel and --list ===")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "named.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"arcs": [["s", "a"], ["a", "t"], ["s", "t"]], "targets": ["t"]}, f)

        code, out, _ = run("rel", path, "--relabel", "--engine", "oracle", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["engines"]["oracle"]["reliability"] == 0.625
        assert run("validate", path)[0] == EXIT_INPUT

        cyclic = os.path.join(tmp, "cyclic.json")
        with open(cyclic, "w", encoding="utf-8") as f:
            json.dump({"arcs": [["s", "a"], ["a", "b"], ["b", "a"]], "targets": ["b"]}, f)
        assert run("validate", cyclic, "--relabel")[0] == EXIT_VIOLATION

    code, out, _ = run("rel", FIXTURES / "fig1.json", "--list")
    assert code == EXIT_OK
    assert "Feasible state vectors" in out

    print("✅ Relabeled input and vector listing")


def test_bad_flag_values_are_input_errors():
    print("\n=== Test 8: bad flag values ===")

    for argv in (
        ("rel", FIXTURES / "fig1.json", "--engine", "ugfm", "--cap", -1),
        ("rel", FIXTURES / "fig1.json", "--engine", "oracle", "--budget", 0),
        ("bench", "5", "--cap", "many"),
    ):
        with pytest.raises(SystemExit) as exc:
            run(*argv)
        assert exc.value.code == EXIT_INPUT, argv

    code, _, _ = run(
        "rel", FIXTURES / "fig1.json", "--engine", "ugfm", "--cap", 5, "--format", "json"
    )
    assert code == EXIT_CAP

    code, _, err = run("validate", FIXTURES / "bad_endpoint.json", "--relabel")
    assert code == EXIT_INPUT
    assert "string or integer" in err

    print("✅ Exit 2 for non-positive caps and unhashable node names")


if __name__ == "__main__":
    print("=" * 60)
    print("Testing amin-rel CLI")
    print("=" * 60)

    tests = [
        test_validate_exit_codes,
        test_rel_single_engine_json,
        test_rel_all_engines_and_cap,
        test_rel_targets,
        test_gen_is_deterministic,
        test_bench_csv,
        test_relabel_and_list,
        test_bad_flag_values_are_input_errors,
    ]

    passed = 0
    failed = 0

    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            print(f"❌ Test failed with exception: {e}")
            import traceback

            traceback.print_exc()
            failed += 1

    print("=" * 60)
    print(f"Results: {passed} passed, {failed} failed")
    print("=" * 60)
