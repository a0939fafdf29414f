"""Command-line front end.

Every subcommand writes a machine-readable JSON report to stdout and a
one-line human summary to stderr.  Exit codes: 0 when all asserted checks
pass, 1 on a check failure, 2 on usage errors.  Long suites accept
``--budget-seconds`` and report partial coverage instead of hanging; the
BLOWUP_THREADS environment variable caps worker threads for the
embarrassingly-parallel suites.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .blowcx import betti_numbers, build_blowup_complex
from .dof import dof_evaluate
from .flagcomb import Flag, enumerate_flags
from .hiord import (
    enumerate_experiments,
    face_vanishing_check,
    independence_rank,
    pr_containment,
    r1_reduction_check,
)
from .mcoracle import RNG_ALGORITHM, SimulationConfig, estimate_higher, estimate_pF
from .mesh import global_cohomology, write_samples
from .shadow import (
    basis_element,
    d_decomposition,
    poisson_probability,
    shadow_basis,
    whitney_containment,
)
from .symexpr import form_latex, form_to_json, rational_fn_latex, rational_fn_to_json

SCHEMA = "blowup-report/1"


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("BLOWUP_THREADS", "1")))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    workers = _thread_count()
    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class Budget:
    def __init__(self, seconds):
        self.start = time.monotonic()
        self.seconds = seconds

    def exhausted(self) -> bool:
        return self.seconds is not None and time.monotonic() - self.start > self.seconds


def _report(command: str, inputs: dict, results: dict, passed: bool, t0: float,
            latex_path=None, latex_text=None) -> int:
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "results": results,
        "pass": bool(passed),
        "timing_ms": int(1000 * (time.time() - t0)),
    }
    json.dump(report, sys.stdout, indent=1, default=str)
    sys.stdout.write("\n")
    if latex_path and latex_text is not None:
        with open(latex_path, "w", encoding="utf-8") as fh:
            fh.write(latex_text)
    print(f"[{command}] {'pass' if passed else 'FAIL'} ({report['timing_ms']} ms)",
          file=sys.stderr)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_basis(args) -> int:
    t0 = time.time()
    V = tuple(range(args.n + 1))
    ks = [args.k] if args.k is not None else list(range(args.n + 1))
    entries = []
    latex_rows = []
    for k in ks:
        for elem in shadow_basis(V, k):
            entry = {
                "k": k,
                "flag": str(elem.flag),
                "flag_compact": elem.flag.compact(),
                "probability": rational_fn_to_json(elem.probability),
                "psi": form_to_json(elem.form),
            }
            if args.eval_grid:
                entry["grid"] = _grid_values(elem, args.eval_grid)
            entries.append(entry)
            latex_rows.append(
                f"{k} & ${elem.flag.compact()}$ & ${form_latex(elem.form)}$ \\\\"
            )
    latex = ("\\begin{tabular}{c|c|c}\n$k$ & $F$ & $\\psi_F$ \\\\\n\\hline\n"
             + "\n".join(latex_rows) + "\n\\end{tabular}\n")
    return _report(
        "basis",
        {"n": args.n, "k": args.k},
        {"count": len(entries), "entries": entries},
        True,
        t0,
        latex_path=args.latex,
        latex_text=latex,
    )


def _grid_values(elem, m: int):
    """Coefficient samples of psi_F on a barycentric grid (CSV-ready rows)."""
    V = elem.flag.vertices
    rows = []
    from itertools import product

    for weights in product(range(1, m + 1), repeat=len(V)):
        total = sum(weights)
        point = {v: Fraction(w, total) for v, w in zip(V, weights)}
        vals = {
            ",".join(map(str, sorted(W))): float(f.evaluate(point))
            for W, f in elem.form.terms.items()
        }
        rows.append({"point": [str(point[v]) for v in V], "coefficients": vals})
    return rows


def _cmd_dof_matrix(args) -> int:
    t0 = time.time()
    V = tuple(range(args.n + 1))
    budget = Budget(args.budget_seconds)
    ks = [args.k] if args.k is not None else list(range(args.n + 1))
    results = {"matrices": [], "partial": False}
    ok = True
    for k in ks:
        flags = enumerate_flags(V, k)
        basis = shadow_basis(V, k)

        def pairing_row(row_flag):
            return [dof_evaluate(row_flag, elem.form) for elem in basis]

        entries = []
        for i, row_flag in enumerate(flags):
            if budget.exhausted():
                results["partial"] = True
                break
            entries.append(pairing_row(row_flag))
        identity = all(
            x == (1 if i == j else 0)
            for i, row in enumerate(entries)
            for j, x in enumerate(row)
        )
        ok = ok and identity
        entry = {
            "k": k,
            "size": len(flags),
            "rows_computed": len(entries),
            "flags": [str(F) for F in flags],
            "identity": identity,
        }
        if args.matrices:
            entry["entries"] = [[str(x) for x in row] for row in entries]
        results["matrices"].append(entry)
        if results["partial"]:
            break
    passed = ok or not args.assert_identity
    results["identity_all"] = ok
    return _report("dof-matrix", {"n": args.n, "k": args.k}, results, passed, t0)


def _check_one_flag_d(F: Flag):
    try:
        d_decomposition(F)
        dd = basis_element(F).form.exterior_derivative().exterior_derivative()
        if not dd.is_zero():
            return {"flag": str(F), "reason": "dd != 0"}
    except Exception as exc:  # DecompositionFailed and friends
        return {"flag": str(F), "reason": str(exc)}
    return None


def _cmd_d_check(args) -> int:
    t0 = time.time()
    V = tuple(range(args.n + 1))
    budget = Budget(args.budget_seconds)
    checked = 0
    failures = []
    partial = False
    for k in range(args.n + 1):
        flags = enumerate_flags(V, k)
        if budget.exhausted():
            partial = True
            break
        remaining = []
        for F in flags:
            if budget.exhausted():
                partial = True
                break
            remaining.append(F)
        for res in _parallel_map(_check_one_flag_d, remaining):
            if res is not None:
                failures.append(res)
        checked += len(remaining)
        if partial:
            break
    results = {"flags_checked": checked, "failures": failures, "partial": partial}
    return _report("d-check", {"n": args.n}, results, not failures, t0)


def _cmd_whitney_check(args) -> int:
    t0 = time.time()
    from itertools import combinations

    V = tuple(range(args.n + 1))
    checked = 0
    failures = []
    for size in range(1, len(V) + 1):
        for W in combinations(V, size):
            try:
                whitney_containment(W, V)
            except Exception as exc:
                failures.append({"W": list(W), "reason": str(exc)})
            checked += 1
    results = {"subsets_checked": checked, "failures": failures}
    return _report("whitney-check", {"n": args.n}, results, not failures, t0)


def _cmd_cohomology(args) -> int:
    t0 = time.time()
    if args.mode == "local":
        cx = build_blowup_complex(tuple(range(args.n + 1)))
        betti = betti_numbers(cx)
        expected = tuple([1] + [0] * args.n)
        results = {
            "f_vector": list(cx.f_vector),
            "betti": list(betti),
        }
        if args.matrices:
            results["coboundary"] = {
                str(k): [[str(x) for x in row] for row in m]
                for k, m in cx.coboundary.items()
            }
        if args.json_faces:
            results["faces"] = {
                str(k): [str(F) for F in cells] for k, cells in cx.cells.items()
            }
        return _report("cohomology-local", {"n": args.n}, results, betti == expected, t0)
    # global
    rep = global_cohomology(args.mesh, args.rule)
    passed = rep["dd_zero"] and rep["betti_blowup"][0] == rep["betti_simplicial"][0]
    return _report("cohomology-global", {"mesh": args.mesh, "rule": args.rule}, rep, passed, t0)


def _cmd_higher_order(args) -> int:
    t0 = time.time()
    V = tuple(range(args.n + 1))
    cands = enumerate_experiments(V, args.r)
    checks = args.check
    results: dict = {"count": len(cands)}
    passed = True
    rows = []
    latex_rows = []
    for c in cands:
        rows.append({
            "flag": str(c.flag),
            "flag_compact": c.flag.compact(),
            "sequence": c.sequence.compact(),
            "probability": rational_fn_to_json(c.probability),
        })
        latex_rows.append(
            f"${c.flag.compact()}$ & ${c.sequence.compact()}$ & "
            f"${rational_fn_latex(c.probability)}$ \\\\"
        )
    results["candidates"] = rows
    if checks in ("independence", "all"):
        rank = independence_rank(cands)
        results["independence_rank"] = rank
        results["independent"] = rank == len(cands)
    if checks in ("containment", "all"):
        try:
            results["containment"] = pr_containment(V, args.r)
        except Exception as exc:
            results["containment"] = False
            results["containment_error"] = str(exc)
            passed = False
    if checks in ("vanishing", "all"):
        faces = [F for k in range(args.n + 1) for F in enumerate_flags(V, k)]
        bad = []
        for c in cands:
            for F in faces:
                if not face_vanishing_check(c, F):
                    bad.append({"sequence": c.sequence.compact(), "face": str(F)})
        results["vanishing_failures"] = bad
        passed = passed and not bad
    if checks == "all":
        results["r1_reduction"] = r1_reduction_check(V)
        passed = passed and results["r1_reduction"]
    latex = ("\\begin{tabular}{c|c|c}\nflag & sequence & probability \\\\\n\\hline\n"
             + "\n".join(latex_rows) + "\n\\end{tabular}\n")
    return _report("higher-order", {"n": args.n, "r": args.r, "check": checks},
                   results, passed, t0, latex_path=args.latex, latex_text=latex)


def _random_rates(rng, V) -> dict[int, Fraction]:
    return {v: Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5))) for v in V}


def _cmd_mc_verify(args) -> int:
    import numpy as np

    t0 = time.time()
    budget = Budget(args.budget_seconds)
    rng = np.random.Generator(np.random.Philox(args.seed))
    pairs = []
    if args.target in ("pF", "all"):
        for nv in range(2, args.n + 2):
            V = tuple(range(nv))
            for k in range(nv):
                for F in enumerate_flags(V, k):
                    pairs.append(("pF", F, None))
    if args.target in ("higher", "all"):
        for nv in range(2, min(args.n, 2) + 2):
            V = tuple(range(nv))
            for r in range(1, args.r + 1):
                for c in enumerate_experiments(V, r):
                    pairs.append(("higher", c, None))
    if args.target == "dof":
        V = tuple(range(args.n + 1))
        for k in range(args.n + 1):
            for F in enumerate_flags(V, k):
                pairs.append(("dof", F, None))

    checked, escalated, failures, partial = 0, 0, [], False
    details = []
    for kind, obj, _ in pairs:
        if budget.exhausted():
            partial = True
            break
        for trial in range(args.rates):
            if kind == "dof":
                res = _mc_dof_case(obj, args, trial)
            else:
                V = obj.vertices if kind == "pF" else obj.flag.vertices
                rates = _random_rates(rng, V)
                res = _mc_prob_case(kind, obj, rates, args, trial)
            checked += 1
            if res["escalated"]:
                escalated += 1
            if not res["pass"]:
                failures.append(res)
            if args.verbose_cases:
                details.append(res)
    results = {
        "rng": RNG_ALGORITHM,
        "cases": checked,
        "escalated": escalated,
        "failures": failures,
        "partial": partial,
    }
    if args.verbose_cases:
        results["details"] = details
    passed = not failures and (checked == 0 or escalated <= max(1, checked) * 0.01)
    return _report(
        "mc-verify",
        {"target": args.target, "n": args.n, "r": args.r,
         "samples": args.samples, "seed": args.seed, "rates": args.rates},
        results, passed, t0,
    )


def _mc_prob_case(kind: str, obj, rates: dict[int, Fraction], args, trial: int) -> dict:
    if kind == "pF":
        exact = float(poisson_probability(obj).evaluate(rates))
        label = str(obj)
    else:
        exact = float(obj.probability.evaluate(rates))
        label = obj.sequence.compact()
    seed = args.seed + 7919 * trial + (hash(label) % 65536)

    def run(samples: int):
        cfg = SimulationConfig(rates=rates, samples=samples, seed=seed)
        if kind == "pF":
            return estimate_pF(obj, cfg)
        return estimate_higher(obj.sequence, cfg)

    est = run(args.samples)
    tol = 3 * _safe_stderr(est, exact)
    ok = abs(est.mean - exact) <= tol
    escalated = False
    if not ok:
        escalated = True
        est = run(10 * args.samples)
        tol = 3 * _safe_stderr(est, exact)
        ok = abs(est.mean - exact) <= tol
    return {
        "kind": kind, "case": label, "rates": {str(v): str(r) for v, r in rates.items()},
        "exact": exact, "estimate": est.mean, "stderr": est.stderr,
        "escalated": escalated, "pass": ok,
    }


def _safe_stderr(est, exact: float) -> float:
    # a run with zero observed spread still carries sampling noise: fall back
    # to the binomial error of the exact probability
    if est.stderr > 0:
        return est.stderr
    p = min(max(exact, 0.0), 1.0)
    return (p * (1 - p) / est.samples) ** 0.5 if 0 < p < 1 else 0.0


def _mc_dof_case(flag: Flag, args, trial: int) -> dict:
    from .mcoracle import estimate_face_integral

    elem = basis_element(flag)
    exact = 1.0
    cfg = SimulationConfig(rates={0: Fraction(1)},
                           samples=max(1000, args.samples // 10),
                           seed=args.seed + trial)
    est = estimate_face_integral(flag, elem.form, cfg)
    tol = max(3 * est.stderr, 1e-2)
    ok = abs(est.mean - exact) <= tol
    return {
        "kind": "dof", "case": str(flag), "exact": exact,
        "estimate": est.mean, "stderr": est.stderr, "escalated": False, "pass": ok,
    }


def _cmd_emit_samples(args) -> int:
    t0 = time.time()
    written = write_samples(args.outdir)
    return _report("emit-samples", {"outdir": args.outdir}, {"files": written}, True, t0)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="blowup",
        description="Exact blow-up Whitney form computations and verifications",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("basis", help="emit the psi_F basis for one simplex")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, default=None)
    b.add_argument("--latex", type=str, default=None)
    b.add_argument("--eval-grid", type=int, default=0)
    b.set_defaults(fn=_cmd_basis)

    d = sub.add_parser("dof-matrix", help="DOF/basis pairing matrices")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--k", type=int, default=None)
    d.add_argument("--matrices", action="store_true")
    d.add_argument("--assert-identity", action="store_true")
    d.add_argument("--budget-seconds", type=float, default=None)
    d.set_defaults(fn=_cmd_dof_matrix)

    dc = sub.add_parser("d-check", help="exterior derivative structure checks")
    dc.add_argument("--n", type=int, required=True)
    dc.add_argument("--budget-seconds", type=float, default=None)
    dc.set_defaults(fn=_cmd_d_check)

    w = sub.add_parser("whitney-check", help="classical Whitney containment checks")
    w.add_argument("--n", type=int, required=True)
    w.set_defaults(fn=_cmd_whitney_check)

    c = sub.add_parser("cohomology", help="local or global cohomology")
    c.add_argument("mode", choices=["local", "global"])
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--mesh", type=str, default=None)
    c.add_argument("--rule", type=str, default="general-continuity")
    c.add_argument("--matrices", action="store_true")
    c.add_argument("--json-faces", action="store_true")
    c.set_defaults(fn=_cmd_cohomology)

    h = sub.add_parser("higher-order", help="degree-r scalar candidates and checks")
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--r", type=int, required=True)
    h.add_argument("--check", choices=["independence", "containment", "vanishing", "all", "none"],
                   default="all")
    h.add_argument("--latex", type=str, default=None)
    h.set_defaults(fn=_cmd_higher_order)

    m = sub.add_parser("mc-verify", help="Monte Carlo concordance with exact values")
    m.add_argument("--target", choices=["pF", "higher", "dof", "all"], required=True)
    m.add_argument("--n", type=int, default=3)
    m.add_argument("--r", type=int, default=3)
    m.add_argument("--samples", type=int, default=100_000)
    m.add_argument("--seed", type=int, default=20240801)
    m.add_argument("--rates", type=int, default=5, help="random rate vectors per case")
    m.add_argument("--budget-seconds", type=float, default=None)
    m.add_argument("--verbose-cases", action="store_true")
    m.set_defaults(fn=_cmd_mc_verify)

    e = sub.add_parser("emit-samples", help="write the bundled sample meshes")
    e.add_argument("--outdir", type=str, required=True)
    e.set_defaults(fn=_cmd_emit_samples)
    return p


def run(argv) -> int:
    # tolerate --local/--global flag spellings for the cohomology subcommand
    argv = list(argv)
    if argv and argv[0] == "cohomology":
        argv = [argv[0]] + [
            a.lstrip("-") if a in ("--local", "--global") else a for a in argv[1:]
        ]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
