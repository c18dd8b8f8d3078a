"""Command-line interface and the report builders behind it.

Subcommands: ``magnitude``, ``homology``, ``check`` and ``predicates``.
Every ``cmd_*`` function takes a :class:`FinMetric` and returns a plain,
JSON-ready dict; :func:`main` handles parsing, rendering and exit codes.

Exit codes: 0 success, 1 input error, 2 check failure, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from hmag.chains import DEFAULT_BUDGET, boundary_family, dump_chains, enumerate_generators
from hmag.errors import BudgetExceeded, HmagError, InputError, SingularEvaluation
from hmag.exact import evaluate_at, format_rat, parse_rat, series_expand
from hmag.formats import FORMATS, load_space
from hmag.homology import magnitude_homology
from hmag.magnitude import divergent_series_magnitude, magnitude, magnitude_at
from hmag.oracle import NOT_APPLICABLE, oracle_report
from hmag.space import (
    FinMetric,
    adjacent_pairs,
    ensure_skeletal,
    has_no_4cuts,
    is_geodetic,
    is_menger_convex,
)

__all__ = [
    "ReconciliationRow",
    "cmd_check",
    "cmd_homology",
    "cmd_magnitude",
    "cmd_predicates",
    "main",
    "reconcile",
]

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_BUDGET = 0, 1, 2, 3


def _series(value, L: Fraction) -> dict:
    coeffs = series_expand(value, math.floor(L * value.scale))
    return {Fraction(k, value.scale): c for k, c in enumerate(coeffs)}


def cmd_magnitude(X: FinMetric, max_grading=None, evaluate=()) -> dict:
    """Magnitude, weightings, series up to ``max_grading`` and numeric samples.

    Without ``max_grading`` the series runs to five times the smallest
    positive distance.
    """
    res = magnitude(X)
    Y = ensure_skeletal(X)
    if max_grading is None:
        eps = Y.epsilon
        L = 5 * eps if eps is not None else Fraction(0)
    else:
        L = parse_rat(max_grading) if isinstance(max_grading, str) else Fraction(max_grading)
    series = _series(res.value, L)
    report = res.to_json()
    report["series"] = [
        [format_rat(l), format_rat(c)] for l, c in sorted(series.items()) if c
    ]
    report["series_max_grading"] = format_rat(L)
    samples = []
    for t in evaluate:
        t = float(t)
        item = {"t": t}
        try:
            item["exact"] = evaluate_at(res.value, math.exp(-t))
        except (SingularEvaluation, ValueError) as exc:
            item["exact"] = None
            item["exact_error"] = str(exc)
        try:
            item["float"] = magnitude_at(Y, t)
        except (SingularEvaluation, ValueError) as exc:
            item["float"] = None
            item["float_error"] = str(exc)
        samples.append(item)
    if samples:
        report["samples"] = samples
    return report


def cmd_homology(
    X: FinMetric,
    max_grading,
    max_degree: int | None = None,
    budget: int = DEFAULT_BUDGET,
    dump: bool = False,
) -> dict:
    """Homology table for every grading up to ``max_grading``, with oracle columns."""
    Y = ensure_skeletal(X)
    L = Fraction(max_grading)
    cap = None if max_degree is None else max_degree + 1
    basis = enumerate_generators(Y, L, budget=budget, max_degree=cap)
    summary = magnitude_homology(Y, L, max_degree=max_degree, basis=basis)
    rep = oracle_report(Y, summary.gradings)
    report = summary.to_json()
    rows = []
    for l in summary.gradings:
        for n in range(3):
            pred = rep.predicted(n, l)
            if pred is NOT_APPLICABLE:
                continue
            if max_degree is not None and n > max_degree:
                continue
            got = summary.rank(n, l)
            rows.append(
                {
                    "degree": n,
                    "grading": format_rat(l),
                    "predicted": pred,
                    "computed": got,
                    "agree": pred == got and not summary.torsion(n, l),
                }
            )
    report["oracle"] = {
        "geodetic": rep.geodetic,
        "no_4cuts": rep.no_4cuts,
        "rows": rows,
        "all_agree": all(r["agree"] for r in rows),
    }
    report["_summary"] = summary
    if dump:
        report["chains"] = dump_chains(basis, boundary_family(Y, basis))
    return report


@dataclass(frozen=True)
class ReconciliationRow:
    grading: Fraction
    series: Fraction
    chain_euler: int
    homology_euler: int

    @property
    def match(self) -> bool:
        return self.series == self.chain_euler == self.homology_euler

    def to_json(self) -> dict:
        return {
            "grading": format_rat(self.grading),
            "series": format_rat(self.series),
            "chain_euler": self.chain_euler,
            "homology_euler": self.homology_euler,
            "match": self.match,
        }


def reconcile(X: FinMetric, max_grading, budget: int = DEFAULT_BUDGET) -> dict:
    """Compare magnitude series, chain Euler characteristic and homology ranks.

    Rows cover every realized grading up to ``max_grading``. The series must
    also vanish at every other grading in range, the divergent-series value
    must equal the magnitude, and weighting and coweighting sums must agree.
    """
    Y = ensure_skeletal(X)
    L = Fraction(max_grading)
    res = magnitude(Y)
    series = _series(res.value, L)
    summary = magnitude_homology(Y, L, budget=budget)
    rows = [
        ReconciliationRow(
            l, series.get(l, Fraction(0)), summary.chain_euler(l), summary.euler(l)
        )
        for l in summary.gradings
    ]
    realized = set(summary.gradings)
    stray = {l: c for l, c in series.items() if c and l not in realized}
    w_sum = sum(res.weighting, start=type(res.value)())
    v_sum = sum(res.coweighting, start=type(res.value)())
    checks = {
        "rows": all(r.match for r in rows),
        "series_vanishes_off_gradings": not stray,
        "divergent_series": divergent_series_magnitude(Y) == res.value,
        "weighting_sums": w_sum == v_sum == res.value,
    }
    return {
        "magnitude": res.value,
        "rows": rows,
        "stray": stray,
        "checks": checks,
        "passed": all(checks.values()),
        "summary": summary,
    }


def cmd_check(X: FinMetric, max_grading, budget: int = DEFAULT_BUDGET) -> dict:
    rec = reconcile(X, max_grading, budget)
    return {
        "magnitude": rec["magnitude"].to_json(),
        "max_grading": format_rat(Fraction(max_grading)),
        "rows": [r.to_json() for r in rec["rows"]],
        "stray_series_terms": [
            [format_rat(l), format_rat(c)] for l, c in sorted(rec["stray"].items())
        ],
        "checks": rec["checks"],
        "passed": rec["passed"],
    }


def cmd_predicates(X: FinMetric) -> dict:
    eps = X.epsilon
    Y = ensure_skeletal(X)
    cuts = has_no_4cuts(Y)
    geo = is_geodetic(Y)
    return {
        "points": list(X.labels),
        "symmetric": X.symmetric,
        "skeletal": X.skeletal,
        "epsilon": None if eps is None else format_rat(eps),
        "no_4cuts": cuts.holds,
        "4cut_witness": None if cuts.witness is None else list(cuts.witness),
        "geodetic": geo.holds,
        "geodetic_witness": None if geo.witness is None else list(geo.witness),
        "menger_convex": is_menger_convex(Y),
        "adjacent_pairs": [list(p) for p in adjacent_pairs(Y)],
    }


# -- rendering ------------------------------------------------------------------


def _text_magnitude(rep: dict) -> str:
    lines = [f"magnitude: {rep['magnitude']['text']}"]
    lines.append("weighting:")
    for p, w in zip(rep["points"], rep["weighting"]):
        lines.append(f"  {p}: {w['text']}")
    lines.append(f"series up to q^{rep['series_max_grading']}:")
    for l, c in rep["series"]:
        lines.append(f"  q^{l}: {c}")
    for s in rep.get("samples", []):
        lines.append(f"t = {s['t']}: exact {s['exact']}  float {s['float']}")
    return "\n".join(lines)


def _text_homology(rep: dict) -> str:
    lines = [rep["_summary"].to_text(), ""]
    o = rep["oracle"]
    lines.append(f"geodetic: {o['geodetic']}  no 4-cuts: {o['no_4cuts']}")
    for r in o["rows"]:
        mark = "agree" if r["agree"] else "DISAGREE"
        lines.append(
            f"  H_{r['degree']} at {r['grading']}: oracle {r['predicted']}, "
            f"SNF {r['computed']}  {mark}"
        )
    return "\n".join(lines)


def _text_check(rep: dict) -> str:
    lines = [f"magnitude: {rep['magnitude']['text']}"]
    head = f"{'grading':>8} {'series':>10} {'chains':>10} {'homology':>10}  match"
    lines.append(head)
    for r in rep["rows"]:
        lines.append(
            f"{r['grading']:>8} {r['series']:>10} {r['chain_euler']:>10} "
            f"{r['homology_euler']:>10}  {'ok' if r['match'] else 'FAIL'}"
        )
    for name, ok in rep["checks"].items():
        lines.append(f"{name}: {'ok' if ok else 'FAIL'}")
    lines.append("PASS" if rep["passed"] else "FAIL")
    return "\n".join(lines)


def _text_predicates(rep: dict) -> str:
    lines = [
        f"symmetric: {rep['symmetric']}",
        f"skeletal: {rep['skeletal']}",
        f"epsilon: {rep['epsilon']}",
        f"no 4-cuts: {rep['no_4cuts']}"
        + (f" (witness {rep['4cut_witness']})" if rep["4cut_witness"] else ""),
        f"geodetic: {rep['geodetic']}"
        + (f" (witness {rep['geodetic_witness']})" if rep["geodetic_witness"] else ""),
        f"menger convex: {rep['menger_convex']}",
        "adjacent pairs: " + ", ".join(f"{a}->{b}" for a, b in rep["adjacent_pairs"]),
    ]
    return "\n".join(lines)


def _grading_arg(text: str) -> Fraction:
    try:
        v = parse_rat(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if v < 0:
        raise argparse.ArgumentTypeError("grading must be nonnegative")
    return v


def _floats_arg(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("evaluation points must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmag",
        description="Magnitude and magnitude homology of finite metric spaces and graphs.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, metavar="PATH", help="input file, '-' for stdin")
        p.add_argument("--format", choices=FORMATS, help="input format (default: by extension)")
        p.add_argument("--json", action="store_true", help="emit JSON")

    p = sub.add_parser("magnitude", help="magnitude as a rational function of q")
    common(p)
    p.add_argument("--max-grading", type=_grading_arg, metavar="L")
    p.add_argument("--evaluate", type=_floats_arg, default=[], metavar="T1,T2,...",
                   help="also evaluate at q = exp(-t) for each t")

    for name, helptext in (("homology", "magnitude homology table"),
                           ("check", "Euler characteristic reconciliation")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--max-grading", type=_grading_arg, required=True, metavar="L")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, metavar="COUNT")
        if name == "homology":
            p.add_argument("--max-degree", type=int, metavar="N")
            p.add_argument("--dump-chains", action="store_true",
                           help="include generators and boundary matrices in the output")

    p = sub.add_parser("predicates", help="betweenness, 4-cuts and geodeticity")
    common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        X = load_space(args.input, args.format)
        if args.command == "magnitude":
            rep = cmd_magnitude(X, args.max_grading, args.evaluate)
            text = _text_magnitude
        elif args.command == "homology":
            if args.max_degree is not None and args.max_degree < 0:
                raise InputError("--max-degree must be nonnegative")
            rep = cmd_homology(X, args.max_grading, args.max_degree, args.budget, args.dump_chains)
            text = _text_homology
        elif args.command == "check":
            rep = cmd_check(X, args.max_grading, args.budget)
            text = _text_check
        else:
            rep = cmd_predicates(X)
            text = _text_predicates
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, HmagError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        out = {k: v for k, v in rep.items() if not k.startswith("_")}
        print(json.dumps(out, indent=2))
    else:
        print(text(rep))
        if args.command == "homology" and "chains" in rep:
            print(json.dumps(rep["chains"], indent=2))
    if args.command == "check" and not rep["passed"]:
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
