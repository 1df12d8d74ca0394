"""Command-line interface: JSON in, JSON out.

Exit codes: 0 success, 1 a checked property is false, 2 usage or input error
(with a JSON error object on stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import apxagree, iis
from .approx import DecisionMap, chromatic_approximation, verify_chromatic_approximation
from .chromap import PAMap, check_chromatic, evaluate, project_map
from .complex import Complex, simplex_complex
from .errors import ContaskError
from .geometry import Point
from .subdivision import barycentric, iterate_chromatic, mesh
from .task import Task, generate_failsafe_consensus, induced_task, search_decision_map, verify_solution


class UsageError(Exception):
    pass


def _load(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational: {s!r}") from None


def _color(c: int) -> int:
    if c < 1:
        raise UsageError("colors are numbered from 1")
    return c - 1


def _decision(data: dict, base: Complex, codomain: Complex) -> DecisionMap:
    S = iterate_chromatic(base, int(data["depth"]))
    images = {int(k): int(v) for k, v in data["map"].items()}
    if set(images) != set(S.complex.vertices):
        raise UsageError("decision map does not cover the subdivision's vertices")
    return DecisionMap(S, codomain, images)


# -- complex ------------------------------------------------------------------

def cmd_complex(a) -> int:
    K = Complex.from_json(_load(a.file))
    if a.action == "validate":
        _emit({"valid": True, "dim": K.dim, "pure": K.is_pure,
               "vertices": len(K.vertices), "facets": len(K.facets)}, a.out)
        return 0
    if a.action == "skeleton":
        if a.rank is None:
            raise UsageError("skeleton needs --rank")
        _emit(K.skeleton(a.rank).to_json(), a.out)
        return 0
    v = K.is_link_connected()
    out = {"link_connected": v.ok}
    if not v.ok:
        out.update(witness=list(v.witness), grade=v.grade)
    _emit(out, a.out)
    return 0 if v.ok else 1


def cmd_subdivide(a) -> int:
    K = Complex.from_json(_load(a.file))
    if a.method == "chromatic":
        S = iterate_chromatic(K, a.depth)
    elif a.depth == 1:
        S = barycentric(K)
    else:
        raise UsageError("barycentric subdivision is available at depth 1 only")
    if a.summary:
        _emit({"method": a.method, "depth": a.depth, "vertices": len(S.complex.vertices),
               "facets": len(S.complex.facets), "mesh": str(mesh(S))}, a.out)
    else:
        _emit(S.to_json(), a.out)
    if a.figure:
        from .plotting import plot_subdivision
        plot_subdivision(S, a.figure, f"{a.method} depth {a.depth}")
    return 0


# -- maps ---------------------------------------------------------------------

def cmd_map(a) -> int:
    f = PAMap.from_json(_load(a.file))
    if a.action == "check-chromatic":
        v = check_chromatic(f, samples=a.samples, seed=a.seed)
        _emit(v.to_json(), a.out)
        return 1 if v.kind == "violation" else 0
    if a.action == "evaluate":
        if not a.point:
            raise UsageError("evaluate needs --point")
        x = Point.from_json(json.loads(a.point), f.base)
        _emit(evaluate(f, x).to_json(), a.out)
        return 0
    if a.color is None:
        raise UsageError("project needs --color")
    _emit(project_map(f, _color(a.color)).to_json(), a.out)
    return 0


def cmd_approx(a) -> int:
    f = PAMap.from_json(_load(a.file))
    if a.action == "run":
        S, mu = chromatic_approximation(f, max_depth=a.max_depth)
        _emit(mu.to_json(), a.out)
        return 0
    if not a.decision:
        raise UsageError("verify needs --decision")
    mu = _decision(_load(a.decision), f.base, f.codomain)
    v = verify_chromatic_approximation(mu, f)
    _emit(v.to_json(), a.out)
    return 0 if v.ok else 1


# -- tasks --------------------------------------------------------------------

def cmd_task(a) -> int:
    if a.action == "gen-failsafe":
        if a.n is None or a.k is None:
            raise UsageError("gen-failsafe needs --n and --k")
        _emit(generate_failsafe_consensus(a.n, a.k).to_json(), a.out)
        return 0
    if not a.file:
        raise UsageError(f"{a.action} needs an input file")
    if a.action == "induce":
        _emit(induced_task(PAMap.from_json(_load(a.file))).to_json(), a.out)
        return 0
    T = Task.from_json(_load(a.file))
    if a.action == "verify":
        if not a.decision:
            raise UsageError("verify needs --decision")
        v = verify_solution(_decision(_load(a.decision), T.input, T.output), T)
        _emit(v.to_json(), a.out)
        return 0 if v.ok else 1
    S = iterate_chromatic(T.input, a.depth)
    mu = search_decision_map(S, T)
    if mu is None:
        _emit({"refuted_at_depth": a.depth}, a.out)
        return 1
    _emit(mu.to_json(), a.out)
    return 0


def cmd_iis(a) -> int:
    if a.action == "enumerate":
        I = simplex_complex(a.n - 1)
        S = iterate_chromatic(I, a.r)
        execs = list(iis.all_executions(I, a.r, cap=a.cap))
        hits = [iis.execution_to_facet(e, S) for e in execs]
        _emit({"n": a.n, "r": a.r, "executions": len(execs), "facets": len(S.complex.facets),
               "bijection": len(set(hits)) == len(hits) and set(hits) == set(S.complex.facets)},
              a.out)
        return 0
    if not (a.task and a.solution):
        raise UsageError("iis run needs --task and --solution")
    T = Task.from_json(_load(a.task))
    mu = _decision(_load(a.solution), T.input, T.output)
    table = iis.enumerate_outcomes(T.input, mu.domain.depth, mu, cap=a.cap)
    _emit(table.to_json(), a.report)
    return 0


def cmd_apxagree(a) -> int:
    p = apxagree.PreferenceParams(_rational(a.k), _rational(a.m1))
    mu, report = apxagree.solve(p, rounds=a.rounds)
    out = report.to_json()
    out["decision"] = mu.to_json()
    _emit(out, a.out)
    if a.figure:
        from .plotting import plot_density
        plot_density(report, a.figure)
    ok = (report.fraction >= p.K and report.within_third and report.solution_valid
          and report.approximation_valid)
    return 0 if ok else 1


def cmd_export(a) -> int:
    if a.format != "json":
        raise UsageError("only json export is supported")
    if a.what == "simplex":
        obj = simplex_complex(a.dim).to_json()
    elif a.what == "apxagree-io":
        I, O = apxagree.build_io()
        obj = {"input": I.to_json(), "output": O.to_json()}
    elif a.what == "preference-map":
        p = apxagree.PreferenceParams(_rational(a.k), _rational(a.m1))
        obj = apxagree.build_preference_map(p).to_json()
    else:
        obj = iterate_chromatic(simplex_complex(a.dim), a.depth).to_json()
    _emit(obj, a.out)
    return 0


# -- manifest -----------------------------------------------------------------

MANIFEST_FIELDS = {"command", "inputs", "params", "output", "seed"}


def manifest_argv(m: dict) -> list[str]:
    extra = set(m) - MANIFEST_FIELDS
    if extra:
        raise UsageError(f"unknown manifest fields: {sorted(extra)}")
    cmd = m.get("command")
    if not cmd:
        raise UsageError("manifest needs a command")
    argv = cmd.split() if isinstance(cmd, str) else list(cmd)
    argv += [str(x) for x in m.get("inputs", [])]
    for k, v in sorted(m.get("params", {}).items()):
        argv += [f"--{k}", str(v)]
    if m.get("output"):
        argv += ["--out", str(m["output"])]
    if "seed" in m and argv[:2] == ["map", "check-chromatic"]:
        argv += ["--seed", str(int(m["seed"]))]
    return argv


def cmd_manifest(a) -> int:
    return main(manifest_argv(_load(a.file)))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contask", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("complex", help="validate and inspect a complex")
    p.add_argument("action", choices=["validate", "skeleton", "link-connected"])
    p.add_argument("file")
    p.add_argument("--rank", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("subdivide", help="chromatic or barycentric subdivision")
    p.add_argument("file")
    p.add_argument("--method", choices=["chromatic", "barycentric"], default="chromatic")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--summary", action="store_true", help="print counts and mesh only")
    p.add_argument("--figure", help="also draw the subdivision to this image file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("map", help="piecewise-affine map operations")
    p.add_argument("action", choices=["check-chromatic", "evaluate", "project"])
    p.add_argument("file")
    p.add_argument("--point", help='JSON point, e.g. {"0":"1/2","1":"1/2"}')
    p.add_argument("--color", type=int, help="color to project away (1-indexed)")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("approx", help="chromatic simplicial approximation")
    p.add_argument("action", choices=["run", "verify"])
    p.add_argument("file", help="PAMap JSON")
    p.add_argument("--decision", help="decision map JSON (verify)")
    p.add_argument("--max-depth", type=int, default=6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("task", help="tasks and solvability at fixed depth")
    p.add_argument("action", choices=["induce", "verify", "search", "gen-failsafe"])
    p.add_argument("file", nargs="?")
    p.add_argument("--decision")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_task)

    p = sub.add_parser("iis", help="iterated immediate snapshot executions")
    p.add_argument("action", choices=["enumerate", "run"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--task")
    p.add_argument("--solution")
    p.add_argument("--report")
    p.add_argument("--cap", type=int, default=iis.DEFAULT_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_iis)

    p = sub.add_parser("apxagree", help="consensus-preferent approximate agreement")
    p.add_argument("action", choices=["solve"])
    p.add_argument("--k", default="1/2")
    p.add_argument("--m1", default="3/5")
    p.add_argument("--rounds", type=int)
    p.add_argument("--figure", help="also draw the per-edge outputs to this image file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_apxagree)

    p = sub.add_parser("export", help="built-in objects as JSON")
    p.add_argument("what", choices=["simplex", "chromatic", "apxagree-io", "preference-map"])
    p.add_argument("--format", default="json")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--k", default="1/2")
    p.add_argument("--m1", default="3/5")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("manifest", help="run a command described by a manifest file")
    p.add_argument("file")
    p.set_defaults(func=cmd_manifest)
    return ap


def _fail(exc: Exception) -> int:
    err = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(err), file=sys.stderr)
    return 2


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return a.func(a)
    except (ContaskError, UsageError, OSError, KeyError, ValueError, TypeError) as exc:
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())
