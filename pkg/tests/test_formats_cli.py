import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from hmag.cli import cmd_check, cmd_homology, cmd_magnitude, cmd_predicates, main, reconcile
from hmag.errors import DisconnectedGraph, InfiniteDistance, ParseError, TriangleViolation
from hmag.formats import guess_format, load_space, parse_dist_csv, parse_graph_edges, parse_metric_json
from hmag.space import graph_to_metric, validate


class TestFormats:
    def test_metric_json(self):
        X = parse_metric_json('{"points": ["a", "b"], "distances": [[0, 1.5], ["3/2", 0]]}')
        assert X.labels == ("a", "b") and X.d("a", "b") == Fraction(3, 2)

    def test_decimal_is_exact(self):
        X = parse_metric_json('{"distances": [[0, 0.1], [0.1, 0]]}')
        assert X.d(0, 1) == Fraction(1, 10)

    def test_metric_json_errors(self):
        with pytest.raises(ParseError) as exc:
            parse_metric_json('{"distances": [[0, 1],\n [1 0]]}', "m.json")
        assert exc.value.line == 2
        with pytest.raises(ParseError):
            parse_metric_json("[1, 2]")
        with pytest.raises(InfiniteDistance):
            parse_metric_json('{"distances": [[0, "inf"], [1, 0]]}')

    def test_csv(self):
        X = parse_dist_csv("a,b,c\n0,1,2\n1,0,1\n2,1,0\n")
        assert X == graph_to_metric([("a", "b"), ("b", "c")])
        Y = parse_dist_csv(",a,b\na,0,1/2\nb,1/2,0\n")
        assert Y.d("a", "b") == Fraction(1, 2)

    def test_csv_errors(self):
        with pytest.raises(ParseError) as exc:
            parse_dist_csv("a,b\n0,1\n1,x\n")
        assert exc.value.line == 3
        with pytest.raises(ParseError):
            parse_dist_csv("a,b\n0,1\n")
        with pytest.raises(TriangleViolation):
            parse_dist_csv("a,b,c\n0,3,5\n1,0,1\n1,1,0\n")

    def test_edges(self):
        X = parse_graph_edges("# triangle\na b\nb,c\nc a  # closing edge\n")
        assert X.labels == ("a", "b", "c")
        assert all(X.d(x, y) == 1 for x in "abc" for y in "abc" if x != y)
        assert parse_graph_edges("solo\n").n == 1

    def test_edge_errors(self):
        with pytest.raises(ParseError) as exc:
            parse_graph_edges("a b\nb c d\n")
        assert exc.value.line == 2
        with pytest.raises(DisconnectedGraph):
            parse_graph_edges("a b\nc\n")
        with pytest.raises(ParseError):
            parse_graph_edges("a a\n")

    def test_guess(self, tmp_path):
        assert guess_format("x.json") == "metric-json"
        assert guess_format("x.csv") == "dist-csv"
        assert guess_format("x.txt") == "graph-edges"
        p = tmp_path / "g.edges"
        p.write_text("a b\n")
        assert load_space(str(p)).n == 2


class TestReports:
    def test_magnitude(self):
        rep = cmd_magnitude(graph_to_metric([("a", "b")]), evaluate=[1.0])
        assert rep["magnitude"]["text"] == "2/(1 + q)"
        assert rep["series"][:2] == [["0", "2"], ["1", "-2"]]
        s = rep["samples"][0]
        assert abs(s["exact"] - s["float"]) < 1e-12

    def test_homology(self, two_point, path3, single_point):
        rep = cmd_homology(two_point, 3)
        assert [(g["degree"], g["grading"], g["rank"]) for g in rep["groups"]] == [
            (n, str(n), 2) for n in range(4)
        ]
        assert rep["oracle"]["all_agree"]
        rep = cmd_homology(path3, 2)
        ranks = {(g["degree"], g["grading"]): g["rank"] for g in rep["groups"]}
        assert ranks[(0, "0")] == 3 and ranks[(1, "1")] == 4
        assert cmd_homology(single_point, 2)["groups"] == [
            {"degree": 0, "grading": "0", "rank": 1, "torsion": []}
        ]

    def test_check(self, two_point, k3, single_point):
        rows = [r.to_json() for r in reconcile(two_point, 3)["rows"]]
        assert [(r["grading"], r["series"], r["chain_euler"], r["homology_euler"], r["match"]) for r in rows] == [
            ("0", "2", 2, 2, True),
            ("1", "-2", -2, -2, True),
            ("2", "2", 2, 2, True),
            ("3", "-2", -2, -2, True),
        ]
        rep = cmd_check(k3, 2)
        assert rep["passed"] and [r["series"] for r in rep["rows"]] == ["3", "-6", "12"]
        rep = cmd_check(single_point, 3)
        assert [(r["grading"], r["series"]) for r in rep["rows"]] == [("0", "1")]

    def test_check_quasi_metric(self):
        X = validate([[0, 0, 1], [1, 0, 1], [1, Fraction(1, 2), 0]])
        assert cmd_check(X, 3)["passed"]

    def test_check_pseudo_metric(self):
        X = validate([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        assert cmd_check(X, 3)["passed"]

    def test_predicates(self):
        C4 = graph_to_metric([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
        rep = cmd_predicates(C4)
        assert rep["no_4cuts"] is False and len(rep["4cut_witness"]) == 4
        assert rep["geodetic"] is False


@pytest.fixture
def files(tmp_path):
    (tmp_path / "edge.txt").write_text("a b\n")
    (tmp_path / "k3.txt").write_text("a b\nb c\nc a\n")
    (tmp_path / "bad.csv").write_text("a,b,c\n0,3,5\n1,0,1\n1,1,0\n")
    (tmp_path / "syntax.json").write_text('{"distances": [[0, 1],\n [1 0]]}')
    return tmp_path


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestMain:
    def test_magnitude_json(self, files, capsys):
        code, out, _ = run(["magnitude", "--input", str(files / "edge.txt"), "--json"], capsys)
        assert code == 0
        assert json.loads(out)["magnitude"]["text"] == "2/(1 + q)"

    def test_k3_text(self, files, capsys):
        code, out, _ = run(["magnitude", "--input", str(files / "k3.txt")], capsys)
        assert code == 0 and "3/(1 + 2*q)" in out

    def test_triangle_violation(self, files, capsys):
        code, _, err = run(["magnitude", "--input", str(files / "bad.csv")], capsys)
        assert code == 1 and "TriangleViolation" in err

    def test_parse_error_has_position(self, files, capsys):
        code, _, err = run(["predicates", "--input", str(files / "syntax.json")], capsys)
        assert code == 1 and "syntax.json:2:" in err

    def test_missing_file(self, files, capsys):
        code, _, _ = run(["magnitude", "--input", str(files / "nope.txt")], capsys)
        assert code == 1

    def test_budget(self, files, capsys):
        code, _, err = run(
            ["homology", "--input", str(files / "k3.txt"), "--max-grading", "8", "--budget", "100"], capsys
        )
        assert code == 3 and "lower the maximum grading" in err

    def test_check_pass(self, files, capsys):
        code, out, _ = run(["check", "--input", str(files / "k3.txt"), "--max-grading", "3"], capsys)
        assert code == 0 and out.strip().endswith("PASS")

    def test_check_failure_exit(self, files, capsys, monkeypatch):
        import hmag.cli as cli

        real = cli.reconcile

        def broken(*a, **k):
            rec = real(*a, **k)
            rec["checks"]["rows"] = False
            rec["passed"] = False
            return rec

        monkeypatch.setattr(cli, "reconcile", broken)
        code, out, _ = run(["check", "--input", str(files / "k3.txt"), "--max-grading", "1"], capsys)
        assert code == 2 and "FAIL" in out

    def test_dump_chains(self, files, capsys):
        code, out, _ = run(
            ["homology", "--input", str(files / "edge.txt"), "--max-grading", "2", "--dump-chains", "--json"],
            capsys,
        )
        chains = json.loads(out)["chains"]["chains"]
        assert code == 0
        assert {(c["degree"], c["grading"]) for c in chains} == {(0, "0"), (1, "1"), (2, "2")}

    def test_deterministic(self, files, capsys):
        argv = ["homology", "--input", str(files / "k3.txt"), "--max-grading", "3", "--json"]
        _, a, _ = run(argv, capsys)
        _, b, _ = run(argv, capsys)
        assert a == b
        argv = ["check", "--input", str(files / "k3.txt"), "--max-grading", "2", "--json"]
        _, a, _ = run(argv, capsys)
        _, b, _ = run(argv, capsys)
        assert a == b

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("x y\n"))
        code, out, _ = run(["predicates", "--input", "-"], capsys)
        assert code == 0 and "x->y" in out

    def test_module_entry_point(self, files):
        proc = subprocess.run(
            [sys.executable, "-m", "hmag", "magnitude", "--input", str(files / "edge.txt"), "--json"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["magnitude"]["text"] == "2/(1 + q)"
