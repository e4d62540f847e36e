"""Command line entry point: ``loghh run <file>`` and the JSON report."""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .cyclic import adams_suite, build_cyclic, hc, hc_de_rham, sbi_sequence
from .errors import BudgetExceeded, InvalidSpec, LogHHError, NotFiniteDimensional, NotFramed, ParseError, SchemaError
from .grobner import Budget
from .hochschild import (
    check_symbolic_identities, connes_B, hh_bar, hh_koszul, hh_resolution, hh_theta, hkr_map,
)
from .logring import check_valid, de_rham_cohomology, log_de_rham, omega_hilbert
from .oracle import oracle as run_oracle
from .parallel import set_threads
from .problem import TaskSpec, input_digest, parse_problem, to_spec

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_CHECK = 0, 1, 2, 3


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    return str(x)


def _table(d):
    """Sort a degree-indexed mapping ascending (recursively)."""
    if isinstance(d, dict):
        return {k: _table(d[k]) for k in sorted(d)}
    return d


def _box(spec, t):
    box = t.degree_box or [0, 4]
    return list(range(box[0], box[1] + 1)) if spec.graded else [0]


def _finite(spec):
    return not spec.graded and spec.A.is_finite() and spec.G.is_finite()


# ---------------------------------------------------------------------------
# tasks

def task_hh(spec, t):
    N = 3 if t.N is None else t.N
    backend = t.backend or "resolution"
    if backend == "bar":
        r = hh_bar(spec, N)
    elif backend == "theta":
        r = hh_theta(spec, N)
    elif backend == "koszul":
        if not t.regular_sequence:
            raise SchemaError("the koszul backend needs a regular_sequence")
        r = hh_koszul(spec, t.regular_sequence, N, t.degree_box, t.cross_check)
    else:
        r = hh_resolution(spec, N, t.degree_box)
    checks = {k: v for k, v in r.checks.items() if isinstance(v, bool)}
    extra = {k: v for k, v in r.checks.items() if not isinstance(v, bool)}
    return {"backend": backend, "HH": _table(r.dims), **extra}, checks, list(r.notes), r.status


def task_hc(spec, t):
    m_max = 4 if t.m_max is None else t.m_max
    route = t.route or "bicomplex"
    if route == "de_rham":
        r = hc_de_rham(spec, m_max, _box(spec, t))
    else:
        r = hc(spec, m_max, t.W)
    res = {"route": route, "HC": _table(r.dims)}
    if route == "bicomplex":
        res["W"] = r.W
    return res, dict(r.checks), list(r.notes), r.status


def task_omega(spec, t):
    n = 1 if t.n is None else t.n
    return {"n": n, "dims": _table(omega_hilbert(spec, n, _box(spec, t)))}, {}, [], "ok"


def task_derham(spec, t):
    n = t.n if t.n is not None else (t.N if t.N is not None else 1)
    dr = log_de_rham(spec, n + 1)
    H = {m: _table(de_rham_cohomology(spec, m, _box(spec, t))) for m in range(n + 1)}
    if not spec.graded:
        H = {m: v[0] for m, v in H.items()}
    return {"H": H, "framing_rank": dr.framing.rank}, {"d_squared": dr.check_d_squared()}, [], "ok"


def task_hkr(spec, t):
    n = 1 if t.n is None else t.n
    r = hkr_map(spec, n, t.degree_box)
    res = {"n": n, "iso": r.iso, "injective": _table(r.injective), "surjective": _table(r.surjective),
           "omega": _table(r.omega_dims), "HH": _table(r.hh_dims)}
    notes = [] if n == 1 else ["for n >= 2 the verdict compares dimensions of Lambda^n Omega^1 and HH_n"]
    return res, {"well_defined": r.well_defined}, notes, "ok"


def task_sbi(spec, t):
    m_max = 4 if t.m_max is None else t.m_max
    r = sbi_sequence(spec, m_max)
    res = {"HH": _table(r.hh), "HC": _table(r.hc), "rank_I": _table(r.I), "rank_S": _table(r.S),
           "rank_B": _table(r.B), "exact_at": r.exact}
    checks = dict(r.checks)
    checks["exact"] = r.all_exact
    return res, checks, [], "ok"


def task_adams(spec, t):
    ks = t.k or [2, 3, 6]
    n = 3 if t.n is None else t.n
    results, comp = adams_suite(spec, ks, n)
    res = {"n": n, "eigen_dims": {k: _table(r.eigen_dims) for k, r in results.items()}}
    checks = dict(comp)
    for k, r in results.items():
        for name, v in r.checks.items():
            checks[f"psi{k}:{name}"] = v
        for m, v in r.hkr.items():
            checks[f"psi{k}:hkr_eigenvalue_k^{m}"] = v
    return res, checks, [], "ok"


def task_theta_complex(spec, t):
    n_max = 3 if t.n_max is None else t.n_max
    checks = {"symbolic_simplicial_identities": check_symbolic_identities(spec, n_max)}
    res = {"n_max": n_max}
    notes = []
    if _finite(spec):
        cm = build_cyclic(spec, n_max)
        res["level_dims"] = {n: cm.dim(n) for n in range(n_max + 1)}
        checks.update(cm.checks)
        _, _, bchecks = connes_B(spec, n_max)
        checks.update(bchecks)
    else:
        notes.append("levels are infinite-dimensional; only ring-map identities were checked")
    return res, checks, notes, "ok"


def task_oracle(spec, t):
    N = 3 if t.N is None else t.N
    if not _finite(spec):
        raise NotFiniteDimensional("the oracle needs a finite-dimensional ungraded problem")
    dense = run_oracle(spec, N)
    main_hh = hh_theta(spec, N).dims
    bar_hh = hh_bar(spec, N).dims
    main_hc = hc(spec, N).dims
    checks = {"hh_theta_matches_oracle": main_hh == dense["hh"], "hh_bar_matches_oracle": bar_hh == dense["hh"],
              "hc_matches_oracle": main_hc == dense["hc"]}
    notes = []
    if not spec.field.characteristic:
        try:
            checks["hc_de_rham_matches_oracle"] = hc_de_rham(spec, N).dims == dense["hc"]
        except NotFramed:
            notes.append("de Rham route not available (Omega^1 not free)")
    return {"HH": _table(dense["hh"]), "HC": _table(dense["hc"])}, checks, notes, "ok"


TASKS = {
    "hh": task_hh, "hc": task_hc, "omega": task_omega, "derham": task_derham, "hkr": task_hkr,
    "sbi": task_sbi, "adams": task_adams, "theta_complex": task_theta_complex, "oracle": task_oracle,
}


def _params(t):
    return {k: v for k, v in t.model_dump(exclude_defaults=True).items() if k != "task"}


def run_task(spec, t):
    start = time.perf_counter()
    entry = {"task": t.task, "params": _params(t)}
    try:
        res, checks, notes, status = TASKS[t.task](spec, t)
        if status == "ok" and not all(v for v in checks.values() if isinstance(v, bool)):
            status = "failed"
        entry.update(status=status, results=res, checks=checks, notes=notes)
    except BudgetExceeded as exc:
        entry.update(status="budget", error=f"BudgetExceeded: {exc}")
    except LogHHError as exc:
        entry.update(status="failed", error=f"{type(exc).__name__}: {exc}")
    entry["seconds"] = round(time.perf_counter() - start, 4)
    return entry


# ---------------------------------------------------------------------------
# whole problems

def _exit_code(statuses):
    if any(s in ("failed", "unverified") for s in statuses):
        return EXIT_CHECK
    if any(s == "budget" for s in statuses):
        return EXIT_BUDGET
    return EXIT_OK


def _overall(code):
    return {EXIT_OK: "ok", EXIT_INPUT: "input_error", EXIT_BUDGET: "budget", EXIT_CHECK: "failed"}[code]


def _base_report(text):
    return {"schema_version": SCHEMA_VERSION, "tool": {"name": "loghh", "version": __version__},
            "input_sha256": input_digest(text)}


def input_error_report(text, exc):
    rep = _base_report(text)
    rep.update(status="input_error", exit_code=EXIT_INPUT, error=f"{type(exc).__name__}: {exc}")
    if isinstance(exc, ParseError):
        rep["error_position"] = {"line": exc.line, "column": exc.column, "expected": list(exc.expected)}
    if isinstance(exc, InvalidSpec):
        rep["violations"] = exc.violations
    return rep


def run(text, budget_overrides=None, oracle=False):
    """Parse, validate and execute a problem; returns ``(report, exit code)``."""
    t0 = time.perf_counter()
    try:
        prob = parse_problem(text)
        budget = Budget()
        budget.update(**prob.budget)
        budget.update(**(budget_overrides or {}))
        spec = to_spec(prob, budget)
        check_valid(spec)
    except KeyError as exc:
        err = SchemaError(str(exc).strip("'\""))
        return input_error_report(text, err), EXIT_INPUT
    except (ParseError, SchemaError, InvalidSpec) as exc:
        return input_error_report(text, exc), EXIT_INPUT
    except BudgetExceeded as exc:
        rep = _base_report(text)
        rep.update(status="budget", exit_code=EXIT_BUDGET, error=f"BudgetExceeded: {exc}")
        return rep, EXIT_BUDGET
    tasks = list(prob.tasks)
    if oracle and not any(t.task == "oracle" for t in tasks):
        tasks.append(TaskSpec(task="oracle"))
    entries = [run_task(spec, t) for t in tasks]
    code = _exit_code([e["status"] for e in entries])
    rep = _base_report(text)
    rep.update(problem=prob.name, field_characteristic=prob.field.characteristic, graded=spec.graded,
               budget=budget.as_dict(), tasks=entries, status=_overall(code), exit_code=code,
               timings={"total_seconds": round(time.perf_counter() - t0, 4)})
    return _jsonable(rep), code


def dumps(report):
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _parse_budget(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise SchemaError(f"budget override {item!r} is not key=value")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError:
            raise SchemaError(f"budget value for {k!r} is not an integer") from None
    return out


def main(argv=None):
    ap = _Parser(prog="loghh", description="Exact log Hochschild and cyclic homology of charted log algebras.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="run the tasks of a problem file")
    r.add_argument("file")
    r.add_argument("--out", help="write the JSON report here (default: stdout)")
    r.add_argument("--oracle", action="store_true", help="add the dense oracle comparison")
    r.add_argument("--threads", type=int, default=1, help="worker threads for independent slices")
    r.add_argument("--budget", action="append", metavar="KEY=VALUE", help="override a budget cap")
    args = ap.parse_args(argv)
    set_threads(args.threads)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"loghh: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        overrides = _parse_budget(args.budget)
    except SchemaError as exc:
        report, code = input_error_report(text, exc), EXIT_INPUT
    else:
        report, code = run(text, overrides, args.oracle)
    out = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
        for e in report.get("tasks", []):
            print(f"[{e['status']}] {e['task']} {json.dumps(e['params'], sort_keys=True)}"
                  + (f" {e['error']}" if "error" in e else ""))
        print(f"status: {report['status']} (exit {code})")
    else:
        sys.stdout.write(out)
    if code == EXIT_INPUT and "error" in report:
        print(f"loghh: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
