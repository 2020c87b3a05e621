"""Command-line interface.

Exit codes are the machine contract: 0 feasible/ok, 1 infeasible or failed
check, 2 input or usage error, 3 oracle budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from . import __version__
from .errors import (
    BudgetExceededError,
    InstanceFormatError,
    NormalizeError,
    PlanarMCFError,
    PreconditionViolatedError,
)
from .generators import gen_grid, gen_outer_boundary
from .instances import normalize
from .io import read_instance, read_solution, write_instance_file, write_solution
from .oracle import brute_force, uncross
from .schemes import SchemeSpace
from .solver import (
    Solution,
    solve,
    solve_outer_boundary,
    verify_solution,
)
from .viz import MissingCoordinatesError, emit_dot, emit_svg


def _err(msg: str) -> None:
    print(f"planarmcf: {msg}", file=sys.stderr)


def _write_solution_file(projected, path: Optional[str]) -> None:
    if path:
        with open(path, "wb") as f:
            f.write(write_solution(projected))


def _cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    if args.outer_boundary:
        result = solve_outer_boundary(inst)
    else:
        on_trial = None
        if args.trace:
            def on_trial(rank, scheme, outcome):
                status = "solution" if isinstance(outcome, Solution) else str(outcome)
                print(f"scheme {rank}: {scheme.to_text()} -> {status}")
        result = solve(inst, max_schemes=args.max_schemes,
                       parallel=args.parallel, on_trial=on_trial)
    if result.feasible:
        print(f"feasible ({result.trials} trials)")
        _write_solution_file(result.solution.projected, args.out)
        return 0
    scope = "exhaustive" if result.exhausted else f"first {result.trials} schemes only"
    print(f"infeasible ({scope})")
    return 1


def _cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    result = brute_force(inst, budget=args.budget)
    if result.feasible:
        print(f"feasible ({result.expansions} expansions)")
        _write_solution_file(result.paths, args.out)
        return 0
    print(f"infeasible ({result.expansions} expansions)")
    return 1


def _cmd_check(args) -> int:
    inst = read_instance(args.instance)
    solution = read_solution(args.solution)
    violation = verify_solution(inst, solution)
    if violation is None:
        print("ok")
        return 0
    print(f"violation: {violation}")
    return 1


def _cmd_gen(args) -> int:
    params = {}
    if args.params:
        for part in args.params.split(","):
            if "=" not in part:
                raise InstanceFormatError("--params", f"expected key=value, got {part!r}")
            key, val = part.split("=", 1)
            params[key.strip()] = int(val)
    if args.family == "grid":
        inst = gen_grid(params.get("width", 4), params.get("height", 4),
                        params.get("k", 1), params.get("r", 1), args.seed)
    else:
        inst = gen_outer_boundary(params.get("n", 8), params.get("k", 1),
                                  args.seed, rmax=params.get("r", 2))
    write_instance_file(inst, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_uncross(args) -> int:
    inst = read_instance(args.instance)
    projected = read_solution(args.solution)
    violation = verify_solution(inst, projected)
    if violation is not None:
        raise InstanceFormatError("solution", str(violation))
    norm = normalize(inst)
    lifted, layout = _lift_solution(norm, projected)
    outcome = uncross(norm.graph, norm.order, lifted)
    out = {did: [] for did in projected}
    for (did, _idx), arcs in zip(layout, outcome.paths):
        out[did].append(norm.project_path(arcs))
    _write_solution_file(out, args.out)
    print(f"uncrossed with {outcome.swaps} swaps; wrote {args.out}")
    return 0


def _lift_solution(norm, projected):
    """Embed an original-arc solution into the normalized graph."""
    g = norm.graph
    copies: dict = {}
    for a, o in norm.arc_origin.items():
        if o is not None:
            copies.setdefault(o, []).append(a)
    for o in copies:
        copies[o].sort()
    cursor = {o: 0 for o in copies}
    lifted = []
    layout = []
    for did in sorted(projected):
        s, t = norm.terminals[did]
        src_arcs = sorted(g.out_arcs(s))
        snk_arcs = sorted(g.in_arcs(t))
        for idx, path in enumerate(projected[did]):
            mid = []
            for a in path:
                mid.append(copies[a][cursor[a]])
                cursor[a] += 1
            lifted.append([src_arcs[idx]] + mid + [snk_arcs[idx]])
            layout.append((did, idx))
    return lifted, layout


def _cmd_bench(args) -> int:
    scales = [int(s) for s in args.scale.split(",")]
    print(f"family={args.family} k={args.k} r={args.r} seed={args.seed}")
    print("request scale: rows report R_max = max request; "
          "the scheme bound uses R_max + 1")
    print(f"{'n':>6} {'vertices':>9} {'arcs':>6} {'schemes':>12} {'trials':>8} {'time_s':>8}")
    for n in scales:
        if args.family != "grid":
            raise InstanceFormatError("--family", "only the grid family is benchable")
        width = max(args.k + 1, int(round(n ** 0.5)))
        height = max(2, (n + width - 1) // width)
        inst = gen_grid(width, height, args.k, args.r, args.seed)
        norm = normalize(inst)
        space = SchemeSpace({d.id: d.request for d in norm.instance.demands})
        t0 = time.perf_counter()
        result = solve(inst, max_schemes=args.max_schemes)
        dt = time.perf_counter() - t0
        print(f"{n:>6} {len(norm.graph.vertices):>9} {len(norm.graph.arc_tail):>6} "
              f"{space.count:>12} {result.trials:>8} {dt:>8.3f}")
    return 0


def _cmd_viz(args) -> int:
    inst = read_instance(args.instance)
    solution = read_solution(args.solution) if args.solution else None
    if solution is not None:
        violation = verify_solution(inst, solution)
        if violation is not None:
            raise InstanceFormatError("solution", str(violation))
    data = emit_dot(inst, solution) if args.format == "dot" else emit_svg(inst, solution)
    with open(args.out, "wb") as f:
        f.write(data)
    print(f"wrote {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="planarmcf",
        description="Integer multicommodity flow on planar acyclic digraphs "
                    "with the Eulerian balance condition.")
    top.add_argument("--version", action="version", version=f"planarmcf {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide an instance with the scheme solver")
    p.add_argument("instance")
    p.add_argument("--outer-boundary", action="store_true",
                   help="use the greedy peeling solver (needs an outer_face)")
    p.add_argument("--parallel", type=int, default=None, metavar="N")
    p.add_argument("--trace", action="store_true",
                   help="print every scheme and its failure mode")
    p.add_argument("--max-schemes", type=int, default=None, metavar="N",
                   help="cap the number of scheme trials; an infeasible answer "
                        "is then not exhaustive")
    p.add_argument("--out", metavar="sol.json")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("oracle", help="decide an instance by brute force")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--out", metavar="sol.json")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("check", help="verify a solution file against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("family", choices=["grid", "outer"])
    p.add_argument("--params", default="", metavar="k=v,...",
                   help="grid: width,height,k,r; outer: n,k,r")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("uncross", help="rewrite a solution into crossing normal form")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_uncross)

    p = sub.add_parser("bench", help="scaling table for the solver")
    p.add_argument("--family", default="grid")
    p.add_argument("--scale", required=True, metavar="n1,n2,...")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-schemes", type=int, default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("viz", help="render an instance (and solution) to DOT or SVG")
    p.add_argument("instance")
    p.add_argument("solution", nargs="?")
    p.add_argument("--format", choices=["dot", "svg"], default="dot")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_viz)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except BudgetExceededError as e:
        _err(str(e))
        return 3
    except (InstanceFormatError, NormalizeError, PreconditionViolatedError,
            MissingCoordinatesError) as e:
        _err(str(e))
        return 2
    except FileNotFoundError as e:
        _err(str(e))
        return 2
    except PlanarMCFError as e:
        _err(str(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
