"""Command-line front end.

Usage:
    consensuskit analyze <input.json> [flags]
    consensuskit simulate <input.json> [--mode orthogonal|tilde] [flags]
    consensuskit verify [<input.json>] [--builtin] [--oracle-cap N] [flags]
    consensuskit export-dot <input.json> [flags]

Input is a JSON document: {"matrix": [[...]], "labels": [...],
"initial_opinions": [...], "tolerance": {"zero_tol": ..., "conv_tol": ...,
"max_iter": ...}}; only "matrix" is required. Reports are JSON with a fixed
key order and all numbers rounded to 12 significant digits, so identical
input and flags produce byte-identical output.

Exit codes: 0 success, 1 usage/parse/validation error, 2 improper influence
matrix (a periodic final class is named), 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import demo
from .consensus_region import dictatorial_matrix, membership, nonorthogonal_projection_tilde
from .digraph import build, decompose, export_dot
from .errors import ConsensusKitError, ImproperMatrixError, NoConvergenceError
from .limits import power_limit_iterative, power_limit_resolvent, resolvent
from .matrix_core import DEFAULT_TOL, ToleranceConfig, invert, validate_stochastic
from .projection_method import (
    ConsensusAnalysis,
    analyze,
    consensus_value,
    homogeneity_weights,
    simulate,
)
from .tree_oracle import (
    DEFAULT_CLASS_CAP,
    maximum_out_forest_matrix,
    stationary_via_trees,
    tree_weights,
)


class InputError(ConsensusKitError):
    """Malformed or invalid input document (CLI exit code 1)."""


@dataclass(frozen=True)
class InputDocument:
    matrix: list[list[float]]
    labels: list[str]
    initial_opinions: list[float] | None
    tol: ToleranceConfig
    name: str = ""


def load_input(path: str | Path, base_tol: ToleranceConfig = DEFAULT_TOL) -> InputDocument:
    """Parse and validate an input JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return _document_from_dict(raw, base_tol, name=str(path))


def _document_from_dict(raw, base_tol: ToleranceConfig, name: str = "") -> InputDocument:
    if not isinstance(raw, dict):
        raise InputError("input document must be a JSON object")
    if "matrix" not in raw:
        raise InputError("input document is missing the required 'matrix' field")
    matrix = raw["matrix"]
    if not isinstance(matrix, list) or not matrix or not all(isinstance(r, list) for r in matrix):
        raise InputError("'matrix' must be a nonempty array of arrays")
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise InputError(f"'matrix' must be square; got {n} rows of lengths {[len(r) for r in matrix]}")

    labels = raw.get("labels")
    if labels is None:
        labels = [str(i + 1) for i in range(n)]
    else:
        if not isinstance(labels, list) or len(labels) != n:
            raise InputError(f"'labels' must list exactly {n} names")
        labels = [str(x) for x in labels]

    opinions = raw.get("initial_opinions")
    if opinions is not None:
        if not isinstance(opinions, list) or len(opinions) != n:
            raise InputError(f"'initial_opinions' must list exactly {n} numbers")
        opinions = [float(x) for x in opinions]

    tol = base_tol
    overrides = raw.get("tolerance", {})
    if overrides:
        if not isinstance(overrides, dict):
            raise InputError("'tolerance' must be an object")
        known = {"zero_tol", "conv_tol", "max_iter"}
        unknown = set(overrides) - known
        if unknown:
            raise InputError(f"unknown tolerance fields: {sorted(unknown)}")
        try:
            tol = replace(
                tol,
                **{
                    k: (int(v) if k == "max_iter" else float(v))
                    for k, v in overrides.items()
                },
            )
        except ValueError as exc:
            raise InputError(f"bad tolerance override: {exc}") from exc

    return InputDocument(matrix=matrix, labels=labels, initial_opinions=opinions, tol=tol, name=name)


def _round_sig(x: float, digits: int = 12) -> float:
    if x == 0 or not np.isfinite(x):
        return 0.0 if x == 0 else float(x)
    return float(f"{x:.{digits}g}")


def _jsonable(obj):
    """Recursively convert arrays/tuples and round floats for stable output."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round_sig(float(obj))
    return obj


def _analysis_report(doc: InputDocument, analysis: ConsensusAnalysis) -> dict:
    d = analysis.decomposition
    classes = [
        {"agents": [doc.labels[v] for v in cls], "final": bool(d.is_basic[ci])}
        for ci, cls in enumerate(d.classes)
    ]
    return {
        "n": analysis.n,
        "labels": list(doc.labels),
        "spectral_class": analysis.spectral.kind.value,
        "final_class_periods": list(analysis.spectral.periods),
        "classes": classes,
        "num_final_classes": d.num_final_classes,
        "num_basic_agents": d.num_basic_agents,
        "frobenius_order": [doc.labels[v] for v in d.order],
        "power_limit": analysis.power_limit.matrix,
        "projection": analysis.projector.matrix,
        "rank_one_limit": analysis.rank_one_limit,
        "consensus_weights": analysis.weights,
        "class_homogeneity": list(analysis.homogeneity),
        "class_stationary": [vec for vec in analysis.stationary],
        "tolerance": {
            "zero_tol": analysis.tol.zero_tol,
            "conv_tol": analysis.tol.conv_tol,
            "max_iter": analysis.tol.max_iter,
        },
    }


def _trajectory_report(doc: InputDocument, analysis: ConsensusAnalysis, traj, mode: str) -> dict:
    d = analysis.decomposition
    nonbasic = sorted(d.nonbasic_vertices())
    return {
        "mode": mode,
        "initial_opinions": traj.initial,
        "preequalized_opinions": traj.preequalized,
        "consensus": traj.consensus,
        "converged_at_step": traj.converged_at,
        "steps_recorded": len(traj.states),
        "final_opinions": traj.states[-1],
        "ignored_initial_opinions": {
            doc.labels[v]: float(traj.initial[v]) for v in nonbasic
        },
    }


def _check(name: str, passed: bool, detail: str) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _fmt(x: float) -> str:
    return f"{_round_sig(float(x)):.6g}"


def _verify_checks(doc: InputDocument, analysis: ConsensusAnalysis, oracle_cap: int) -> list[dict]:
    """Cross-validation battery; every check is deterministic for a given input."""
    checks: list[dict] = []
    tol = analysis.tol
    p = analysis.influence
    l = analysis.kirchhoff
    d = analysis.decomposition
    g = analysis.digraph
    n = analysis.n
    s = analysis.projector.matrix
    limit = analysis.power_limit.matrix

    # Three power-limit routes, pairwise.
    lim_iter = power_limit_iterative(p, tol).matrix
    lim_res = power_limit_resolvent(l, 1.0, tol).matrix
    gaps = [
        float(np.max(np.abs(limit - lim_iter))),
        float(np.max(np.abs(limit - lim_res))),
        float(np.max(np.abs(lim_iter - lim_res))),
    ]
    checks.append(
        _check(
            "power_limit_routes_agree",
            max(gaps) <= 1e-6,
            f"recursive/iterative/resolvent pairwise gaps {[_fmt(x) for x in gaps]} (tol 1e-06)",
        )
    )

    # Two projector routes (already cross-checked in analyze; re-measure).
    from .consensus_region import orthogonal_projection_via_mixed_basis

    s_alt = orthogonal_projection_via_mixed_basis(analysis.mixed, tol).matrix
    gap = float(np.max(np.abs(s - s_alt)))
    checks.append(
        _check("projection_routes_agree", gap <= 1e-8, f"max gap {_fmt(gap)} (tol 1e-08)")
    )

    # Projector algebra.
    sym = float(np.max(np.abs(s - s.T)))
    idem = float(np.max(np.abs(s @ s - s)))
    ones_fix = float(np.max(np.abs(s @ np.ones(n) - np.ones(n))))
    sp = d.permute(s)
    b = d.num_basic_agents
    off = max(
        float(np.max(np.abs(sp[:b, b:]))) if b < n else 0.0,
        float(np.max(np.abs(sp[b:, :b]))) if b < n else 0.0,
        float(np.max(np.abs(sp[b:, b:] - np.eye(n - b)))) if b < n else 0.0,
    )
    checks.append(
        _check(
            "projector_properties",
            sym < 1e-10 and idem < 1e-9 and ones_fix < 1e-9 and off < 1e-9,
            f"symmetry {_fmt(sym)}, idempotency {_fmt(idem)}, ones fixed {_fmt(ones_fix)}, "
            f"block form {_fmt(off)}",
        )
    )

    # Kirchhoff structure.
    from .matrix_core import rank_with_tolerance

    lm = l.matrix
    rank_l = rank_with_tolerance(lm, tol)
    rank_l2 = rank_with_tolerance(lm @ lm, tol)
    rank_lim = rank_with_tolerance(limit, tol)
    zero_prod = max(float(np.max(np.abs(limit @ lm))), float(np.max(np.abs(lm @ limit))))
    stacked = np.hstack([limit, lm])
    rank_stacked = rank_with_tolerance(stacked, tol)
    ok = (
        rank_l == n - d.num_final_classes
        and rank_l2 == rank_l
        and rank_lim == d.num_final_classes
        and zero_prod < 1e-9
        and rank_stacked == n
    )
    checks.append(
        _check(
            "kirchhoff_structure",
            ok,
            f"rank L {rank_l} (expect {n - d.num_final_classes}), rank L^2 {rank_l2}, "
            f"rank limit {rank_lim} (expect {d.num_final_classes}), "
            f"limit*L gap {_fmt(zero_prod)}, kernel+range rank {rank_stacked} (expect {n})",
        )
    )

    # Oracle: forests vs recursion; per-class stationary rows; cofactors.
    forest = maximum_out_forest_matrix(g, d, max(oracle_cap, n))
    forest_gap = float(np.max(np.abs(forest.matrix - limit)))
    checks.append(
        _check(
            "oracle_forest_equals_limit",
            forest_gap <= 1e-8,
            f"max gap {_fmt(forest_gap)} over {n}x{n} entries (tol 1e-08)",
        )
    )

    stat_gap = 0.0
    for ci, cls in enumerate(d.basic_classes()):
        vec = stationary_via_trees(g, cls, max(oracle_cap, len(cls)))
        stat_gap = max(stat_gap, float(np.max(np.abs(vec - analysis.stationary[ci]))))
    checks.append(
        _check("oracle_stationary_rows", stat_gap <= 1e-8, f"max gap {_fmt(stat_gap)} (tol 1e-08)")
    )

    from .tree_oracle import _class_kirchhoff_block, enumerate_out_trees
    from .matrix_core import cofactor

    cof_gap = 0.0
    trees = tree_weights(g, d, max(oracle_cap, n))
    for ci, cls in enumerate(d.basic_classes()):
        verts = tuple(sorted(cls))
        block = _class_kirchhoff_block(g, verts)
        for k in range(len(verts)):
            rooted = trees.per_class[ci].per_root[k]
            for col in range(len(verts)):
                cof_gap = max(cof_gap, abs(cofactor(block, k, col) - rooted))
    checks.append(
        _check(
            "matrix_tree_cofactors",
            cof_gap <= 1e-9,
            f"max |cofactor - rooted total| {_fmt(cof_gap)} over all rows/columns (tol 1e-09)",
        )
    )

    # Weight-vector properties and the cross-class ratio law.
    w = analysis.weights
    sum_gap = abs(float(np.sum(w)) - 1.0)
    basic = set(d.basic_vertices())
    positivity = all(w[v] > 0 for v in basic) and all(
        abs(w[v]) <= 1e-12 for v in range(n) if v not in basic
    )
    stationary_gap = float(np.max(np.abs(w @ p.matrix - w)))
    checks.append(
        _check(
            "weight_vector_properties",
            sum_gap <= 1e-9 and positivity and stationary_gap <= 1e-9,
            f"sum gap {_fmt(sum_gap)}, positive on basic / zero on nonbasic {positivity}, "
            f"stationarity gap {_fmt(stationary_gap)}",
        )
    )

    homog = homogeneity_weights(trees)
    padded = analysis.mixed.padded_stationary
    ratio_gap = 0.0
    basic_sorted = sorted(basic)
    for gv in basic_sorted:
        for hv in basic_sorted:
            cg, ch = d.class_of[gv], d.class_of[hv]
            lhs = w[gv] * homog[ch] * padded[ch][hv]
            rhs = w[hv] * homog[cg] * padded[cg][gv]
            ratio_gap = max(ratio_gap, abs(lhs - rhs))
    checks.append(
        _check(
            "weight_ratio_law",
            ratio_gap <= 1e-8,
            f"max cross-multiplied gap {_fmt(ratio_gap)} (tol 1e-08)",
        )
    )

    # Basis-inverse row sums: first row sums to 1, rows 2..b sum to 0.
    zi = analysis.mixed.basis_inverse
    row_sums = zi.sum(axis=1)
    first_gap = abs(float(row_sums[0]) - 1.0)
    rest_gap = float(np.max(np.abs(row_sums[1:b]))) if b > 1 else 0.0
    checks.append(
        _check(
            "basis_inverse_row_sums",
            first_gap <= 1e-9 and rest_gap <= 1e-9,
            f"first row sum gap {_fmt(first_gap)}, rows 2..{b} max |sum| {_fmt(rest_gap)} (tol 1e-09)",
        )
    )

    # Stochastic preequalizer: same consensus, closer to P, range inside region.
    s_tilde = nonorthogonal_projection_tilde(p, analysis.projector, d)
    same_consensus = float(np.max(np.abs(limit @ s_tilde - limit @ s)))
    dist_tilde = float(np.linalg.norm(p.matrix - s_tilde))
    dist_s = float(np.linalg.norm(p.matrix - s))
    range_ok = all(
        membership(s_tilde[:, j], analysis.projector, replace(tol, conv_tol=1e-8))
        for j in range(n)
    )
    nonbasic_det = 1.0
    if b < n:
        from .matrix_core import determinant

        pp = d.permute(p.matrix)
        nonbasic_det = determinant(pp[b:, b:])
    checks.append(
        _check(
            "stochastic_preequalizer",
            same_consensus <= 1e-9 and dist_tilde <= dist_s + 1e-12 and range_ok,
            f"consensus gap {_fmt(same_consensus)}, distance to P {_fmt(dist_tilde)} <= "
            f"{_fmt(dist_s)}, range in region {range_ok}, "
            f"nonbasic block determinant {_fmt(nonbasic_det)}",
        )
    )

    # Dictatorial preequalizers on a deterministic opinion vector.
    sample = np.arange(1.0, n + 1.0)
    dict_gap = 0.0
    for agent in (0, n - 1):
        pre = dictatorial_matrix(l, agent) @ sample
        end = limit @ pre
        dict_gap = max(dict_gap, float(np.max(np.abs(end - sample[agent]))))
        pre2 = dictatorial_matrix(l, agent, 2.0) @ sample
        end2 = limit @ pre2
        dict_gap = max(dict_gap, float(np.max(np.abs(end2 - 2.0 * sample[agent]))))
    checks.append(
        _check(
            "dictatorial_preequalizers",
            dict_gap <= 1e-9,
            f"max |consensus - target| {_fmt(dict_gap)} (tol 1e-09)",
        )
    )

    # Inverses of ones-column / constant-column matrices (deterministic samples).
    rng = np.random.default_rng(20260810)
    inv_gap = 0.0
    for _ in range(25):
        size = int(rng.integers(2, 7))
        a = rng.uniform(-1.0, 1.0, size=(size, size))
        a[:, 0] = 1.0
        try:
            ai = invert(a, tol)
        except ConsensusKitError:
            continue
        target = np.zeros(size)
        target[0] = 1.0
        inv_gap = max(inv_gap, float(np.max(np.abs(ai.sum(axis=1) - target))))
        scale = float(rng.uniform(0.5, 2.0))
        k = int(rng.integers(0, size))
        c = rng.uniform(-1.0, 1.0, size=(size, size))
        c[:, k] = scale
        try:
            ci = invert(c, tol)
        except ConsensusKitError:
            continue
        target = np.zeros(size)
        target[k] = 1.0 / scale
        inv_gap = max(inv_gap, float(np.max(np.abs(ci.sum(axis=1) - target))))
    checks.append(
        _check(
            "constant_column_inverse_row_sums",
            inv_gap <= 1e-9,
            f"max row-sum pattern gap {_fmt(inv_gap)} over sampled matrices (tol 1e-09)",
        )
    )

    return checks


def _expected_weights_check(analysis: ConsensusAnalysis, expected: list[float]) -> dict:
    gap = float(np.max(np.abs(analysis.weights - np.asarray(expected))))
    return _check(
        "expected_weights_match",
        gap <= 1e-9,
        f"max |weights - reference| {_fmt(gap)} (tol 1e-09)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="consensuskit",
        description="Consensus analysis of row-stochastic influence networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, input_optional: bool = False):
        if input_optional:
            p.add_argument("input", nargs="?", help="input JSON file")
        else:
            p.add_argument("input", help="input JSON file")
        p.add_argument("--tolerance", type=float, help="convergence tolerance override (conv_tol)")
        p.add_argument("--max-iter", type=int, help="iteration cap override")
        p.add_argument("--output", help="write the report here instead of stdout")

    pa = sub.add_parser("analyze", help="full consensus analysis report")
    add_common(pa)
    pa.add_argument("--tau", type=float, help="also probe the resolvent at this parameter")

    ps = sub.add_parser("simulate", help="analysis plus a preequalized opinion trajectory")
    add_common(ps)
    ps.add_argument(
        "--mode",
        choices=("orthogonal", "tilde"),
        default="orthogonal",
        help="preequalization variant (default: orthogonal)",
    )

    pv = sub.add_parser("verify", help="run the cross-validation battery")
    add_common(pv, input_optional=True)
    pv.add_argument("--builtin", action="store_true", help="verify the built-in demo networks")
    pv.add_argument(
        "--oracle-cap",
        type=int,
        default=DEFAULT_CLASS_CAP,
        help=f"max agents for brute-force enumeration (default {DEFAULT_CLASS_CAP})",
    )

    pd = sub.add_parser("export-dot", help="emit the communication digraph as DOT text")
    add_common(pd)
    return parser


def _apply_flag_overrides(doc: InputDocument, args) -> InputDocument:
    tol = doc.tol
    if getattr(args, "tolerance", None) is not None:
        tol = replace(tol, conv_tol=float(args.tolerance))
    if getattr(args, "max_iter", None) is not None:
        tol = replace(tol, max_iter=int(args.max_iter))
    return replace(doc, tol=tol)


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _report_text(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2) + "\n"


def _run_analyze(args) -> int:
    doc = _apply_flag_overrides(load_input(args.input), args)
    analysis = analyze(doc.matrix, doc.tol)
    report = {"command": "analyze", "input": doc.name}
    report.update(_analysis_report(doc, analysis))
    if args.tau is not None:
        probe = resolvent(analysis.kirchhoff, float(args.tau), doc.tol)
        gap = float(np.max(np.abs(probe - analysis.power_limit.matrix)))
        report["resolvent_probe"] = {"tau": float(args.tau), "gap_to_limit": gap}
    _emit(_report_text(report), args.output)
    return 0


def _run_simulate(args) -> int:
    doc = _apply_flag_overrides(load_input(args.input), args)
    if doc.initial_opinions is None:
        raise InputError("simulate requires 'initial_opinions' in the input document")
    analysis = analyze(doc.matrix, doc.tol)
    traj = simulate(analysis.influence, analysis, doc.initial_opinions, doc.tol, mode=args.mode)
    expected = consensus_value(analysis, doc.initial_opinions)
    report = {"command": "simulate", "input": doc.name}
    report.update(_analysis_report(doc, analysis))
    report["trajectory"] = _trajectory_report(doc, analysis, traj, args.mode)
    report["trajectory"]["weighted_initial_opinions"] = expected
    _emit(_report_text(report), args.output)
    return 0


def _run_verify(args) -> int:
    docs: list[InputDocument] = []
    if args.builtin:
        for name, spec in demo.BUILTIN_NETWORKS.items():
            raw = {"matrix": spec["matrix"], "initial_opinions": spec["initial_opinions"]}
            docs.append(_document_from_dict(raw, DEFAULT_TOL, name=name))
    if args.input:
        docs.append(load_input(args.input))
    if not docs:
        raise InputError("verify needs an input file or --builtin")

    runs = []
    all_passed = True
    for doc in docs:
        doc = _apply_flag_overrides(doc, args)
        n = len(doc.matrix)
        if n > args.oracle_cap:
            raise InputError(
                f"verification of '{doc.name}' needs brute-force enumeration over {n} agents, "
                f"above the oracle cap {args.oracle_cap}; raise --oracle-cap if you accept the cost"
            )
        analysis = analyze(doc.matrix, doc.tol)
        checks = _verify_checks(doc, analysis, args.oracle_cap)
        if doc.name in demo.BUILTIN_NETWORKS:
            checks.append(
                _expected_weights_check(analysis, demo.BUILTIN_NETWORKS[doc.name]["expected_weights"])
            )
        passed = all(c["passed"] for c in checks)
        all_passed = all_passed and passed
        runs.append(
            {
                "input": doc.name,
                "n": n,
                "all_passed": passed,
                "checks": checks,
            }
        )
    report = {"command": "verify", "all_passed": all_passed, "runs": runs}
    _emit(_report_text(report), args.output)
    return 0 if all_passed else 3


def _run_export_dot(args) -> int:
    doc = _apply_flag_overrides(load_input(args.input), args)
    p = validate_stochastic(doc.matrix, doc.tol)
    g, _ = build(p, doc.tol)
    d = decompose(g)
    _emit(export_dot(g, d), args.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap to 1
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "analyze":
            return _run_analyze(args)
        if args.command == "simulate":
            return _run_simulate(args)
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "export-dot":
            return _run_export_dot(args)
        raise InputError(f"unknown command {args.command!r}")
    except ImproperMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        try:
            doc = load_input(args.input) if args.input else None
        except ConsensusKitError:
            doc = None
        if doc is not None:
            try:
                p = validate_stochastic(doc.matrix, doc.tol)
                power_limit_iterative(p, doc.tol)
            except NoConvergenceError as probe:
                print(f"iterative probe confirms: {probe}", file=sys.stderr)
            except ConsensusKitError:
                pass
        return 2
    except ConsensusKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
