"""Experiment runner: generate problems, run solver/diagnostic pipelines and
serialize CSV/JSON for downstream plotting.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import diagnostics, paramchoice, problems, solvers
from .numerics import NumericalError

SCHEMA_VERSION = problems.SCHEMA_VERSION
USAGE_ERROR, NUMERICAL_ERROR = 2, 3


def _max_workers() -> int:
    raw = os.environ.get("KRYLOVREG_THREADS", "")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".krylovreg-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def _load(path: str):
    with open(path) as fh:
        return problems.from_json_dict(json.load(fh))


def _as_instance(obj):
    if isinstance(obj, problems.NoisyInstance):
        return obj
    return problems.NoisyInstance(problem=obj, epsilon=0.0, seed=0,
                                  e=np.zeros_like(obj.b_exact), b=obj.b_exact.copy())


def trace_to_csv(trace: solvers.SolverTrace) -> str:
    lines = [f"# schema_version={SCHEMA_VERSION}", "k,residual_norm,atr_norm,solution_norm,rel_error,inner_trunc"]
    for i in range(len(trace)):
        rel = "" if trace.rel_error is None else _fmt(trace.rel_error[i])
        inner = "" if trace.inner_truncation is None else str(int(trace.inner_truncation[i]))
        lines.append(
            f"{int(trace.k[i])},{_fmt(trace.residual_norm[i])},{_fmt(trace.normal_residual_norm[i])},"
            f"{_fmt(trace.solution_norm[i])},{rel},{inner}"
        )
    return "\n".join(lines) + "\n"


def trace_from_csv(text: str) -> solvers.SolverTrace:
    rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = rows[0].split(",")
    expected = ["k", "residual_norm", "atr_norm", "solution_norm", "rel_error", "inner_trunc"]
    if header != expected:
        raise ValueError(f"bad CSV header {header}")
    cols = {name: [] for name in expected}
    for ln in rows[1:]:
        vals = ln.split(",")
        for name, v in zip(expected, vals):
            cols[name].append(v)
    k = np.array([int(v) for v in cols["k"]])
    as_f = lambda vs: np.array([float(v) for v in vs])
    rel = None if all(v == "" for v in cols["rel_error"]) else as_f(cols["rel_error"])
    inner = None if all(v == "" for v in cols["inner_trunc"]) else np.array(
        [int(v) for v in cols["inner_trunc"]])
    return solvers.SolverTrace(
        solver="", k=k, residual_norm=as_f(cols["residual_norm"]),
        normal_residual_norm=as_f(cols["atr_norm"]), solution_norm=as_f(cols["solution_norm"]),
        rel_error=rel, inner_truncation=inner,
    )


def _run_solver(name: str, inst, maxit: int, store=False):
    svd_needed = name in ("tsvd", "tikhonov")
    if svd_needed:
        triplet = inst.problem.svd()
    if name == "lsqr":
        return solvers.lsqr(inst, maxit, store_iterates=store)
    if name == "cgls":
        return solvers.cgls(inst, maxit, store_iterates=store)
    if name == "lsmr":
        return solvers.lsmr(inst, maxit, store_iterates=store)
    if name == "cgme":
        return solvers.cgme(inst, maxit, store_iterates=store)
    if name == "tsvd":
        return solvers.tsvd_family(inst, triplet, maxit, store_iterates=store)
    if name == "tikhonov":
        lam = np.logspace(0, -10, maxit) * float(inst.problem.svd().sigma[0])
        return solvers.tikhonov_family(inst, triplet, lam, store_iterates=store)
    if name == "hybrid_lsqr":
        return solvers.hybrid_lsqr(inst, maxit, inner_rule="lcurve", store_iterates=store)
    if name in ("gmres", "rrgmres"):
        return solvers.gmres(inst, maxit, variant=name, store_iterates=store)
    raise ValueError(f"unknown solver {name!r}")


def cmd_gen(args) -> int:
    problem = problems.generate(args.problem, args.n)
    obj = problem
    if args.noise is not None:
        obj = problems.add_noise(problem, args.noise, args.seed)
    payload = json.dumps(problems.to_json_dict(obj), separators=(",", ":"))
    _atomic_write(args.output, payload + "\n")
    return 0


def cmd_solve(args) -> int:
    inst = _as_instance(_load(args.input))
    maxit = min(args.maxit, min(inst.problem.A.shape))
    trace = _run_solver(args.solver, inst, maxit)
    _atomic_write(args.output, trace_to_csv(trace))
    return 0


def cmd_diagnose(args) -> int:
    metrics = tuple(args.metrics.split(","))
    inst = _as_instance(_load(args.input))
    triplet = inst.problem.svd()
    kmax = args.kmax or min(inst.problem.A.shape) - 1
    rep = diagnostics.build_report(
        inst.problem.A, inst.b, triplet, kmax, metrics=metrics,
        b_exact=inst.problem.b_exact, max_workers=_max_workers(),
    )
    out = {"schema_version": SCHEMA_VERSION, "problem": inst.problem.name, "kmax": rep.kmax}
    arr = lambda v: None if v is None else np.asarray(v).tolist()
    if "gamma" in metrics:
        out["gamma"] = arr(rep.gamma)
        out["sigma_next"] = arr(rep.gamma_lower)
    if "sintheta" in metrics:
        out["sin_theta"] = arr(rep.sin_theta)
        out["delta_norm"] = [(None if not np.isfinite(v) else v) for v in rep.delta_norm]
    if "ritz" in metrics:
        out["ritz"] = [r.tolist() for r in rep.ritz]
        out["ritz_bar"] = [r.tolist() for r in rep.ritz_bar]
    if "filters" in metrics:
        out["filters"] = [fk.tolist() for fk in rep.filters]
    if "lsmr" in metrics:
        out["lsmr_rank_error"] = arr(rep.lsmr_err)
    if "cgme" in metrics:
        out["cgme_rank_error"] = arr(rep.cgme_err)
    if "projected_picard" in metrics:
        out["projected_picard"] = arr(rep.projected_picard)
    if "nearbest" in metrics:
        out["near_best"] = [bool(v) for v in rep.near_best]
    if "classify" in metrics:
        out["classification"] = rep.decay.classification
        out["decay_rate"] = rep.decay.rate
        out["fit_window"] = list(rep.decay.fit_window)
        out["fit_residuals"] = list(rep.decay.residuals)
    _atomic_write(args.output, json.dumps(out, separators=(",", ":")) + "\n")
    return 0


def cmd_compare(args) -> int:
    inst = _as_instance(_load(args.input))
    names = args.solvers.split(",")
    maxit = min(args.maxit, min(inst.problem.A.shape))
    traces = {name: _run_solver(name, inst, maxit) for name in names}
    corners = {}
    for name, tr in traces.items():
        try:
            corners[name] = paramchoice.lcurve_corner(tr.residual_norm, tr.solution_norm).corner_index
        except ValueError:
            corners[name] = ""
    kmax = max(len(tr) for tr in traces.values())
    header = ["k"]
    for name in names:
        header += [f"{name}_rel_error", f"{name}_residual_norm", f"{name}_solution_norm"]
    lines = [f"# schema_version={SCHEMA_VERSION}",
             "# corner_index " + " ".join(f"{n}={corners[n]}" for n in names),
             ",".join(header)]
    for i in range(kmax):
        row = [str(i + 1)]
        for name in names:
            tr = traces[name]
            if i < len(tr):
                rel = "" if tr.rel_error is None else _fmt(tr.rel_error[i])
                row += [rel, _fmt(tr.residual_norm[i]), _fmt(tr.solution_norm[i])]
            else:
                row += ["", "", ""]
        lines.append(",".join(row))
    _atomic_write(args.output, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="krylovreg",
                                description="Krylov regularization experiment runner")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a test problem as JSON")
    g.add_argument("--problem", required=True, choices=sorted(problems._GENERATORS))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--noise", type=float, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("solve", help="run one solver, emit a trace CSV")
    s.add_argument("--solver", required=True, choices=sorted(solvers.SOLVER_NAMES))
    s.add_argument("--maxit", type=int, default=50)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(fn=cmd_solve)

    d = sub.add_parser("diagnose", help="emit a diagnostics report JSON")
    d.add_argument("--metrics", default="gamma,sintheta,ritz,filters,classify")
    d.add_argument("--kmax", type=int, default=None)
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("-o", "--output", required=True)
    d.set_defaults(fn=cmd_diagnose)

    c = sub.add_parser("compare", help="run several solvers, emit combined CSV")
    c.add_argument("--solvers", required=True)
    c.add_argument("--maxit", type=int, default=50)
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("-o", "--output", required=True)
    c.set_defaults(fn=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
