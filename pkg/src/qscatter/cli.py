"""Command-line front end.

    qscatter scatter --m "1,0;0,1" --order 6 [--orbifold "1,1"] [--output FILE]
    qscatter bps     (--diagram FILE | --m ...) [--direction "x,y"] [--gw] [--genus G]
    qscatter check   NAME [--m ...] [--order N] [--seed S] [--max-ord K]

Exit codes: 0 success, 1 usage error, 2 failed check, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

from .classes import check_dim_lemma, curve_class, in_closed_half_plane
from .invariants import (
    bps_records,
    completed_standard,
    cross_check_tropical,
    degeneration_check,
    exponents,
    gw_series,
    multicover_coefficient,
    quadratic_refinement_holds,
    random_pairs,
    standard_diagram,
    twist_check,
)
from .qtorus import (
    Context,
    LatticeVec,
    TorusElement,
    is_primitive,
    pentagon_identity_holds,
    quantum_dilog_coeff,
    quantum_dilog_product_coeff,
)
from .scatter import ConsistencyError, ScatteringDiagram, complete, get_ray
from .tropical import ExtractionError, GenericityError

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_INTERNAL = 0, 1, 2, 3

CHECKS = ("pentagon", "propagation", "tropical", "degeneration", "twist", "dilog", "dimlemma")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    m_tuple: tuple[LatticeVec, ...] | None
    r_tuple: tuple[int, ...] | None
    order: int
    genus: int
    direction: LatticeVec | None
    seed: int
    output: str | None
    format: str


def parse_m(text: str) -> tuple[LatticeVec, ...]:
    vecs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise UsageError(f"cannot parse vector {chunk!r}; expected 'x,y'")
        try:
            v = LatticeVec(int(parts[0]), int(parts[1]))
        except ValueError:
            raise UsageError(f"cannot parse vector {chunk!r}") from None
        if not is_primitive(v):
            raise UsageError(f"vector {chunk!r} is not primitive")
        vecs.append(v)
    if not vecs:
        raise UsageError("empty vector tuple")
    return tuple(vecs)


def parse_ints(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None
    if not out or any(x < 1 for x in out):
        raise UsageError(f"expected positive integers, got {text!r}")
    return out


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QSCATTER_THREADS", "1")))
    except ValueError:
        return 1


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[list[str]]) -> str:
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


# ---------------------------------------------------------------------------
# scatter / bps


def _diagram_for(cfg: RunConfig) -> ScatteringDiagram:
    if cfg.m_tuple is None:
        raise UsageError("--m is required")
    if cfg.r_tuple is not None and len(cfg.r_tuple) != len(cfg.m_tuple):
        raise UsageError("--orbifold needs one entry per vector")
    return complete(standard_diagram(cfg.m_tuple, cfg.r_tuple, cfg.order))


def cmd_scatter(cfg: RunConfig) -> int:
    d = _diagram_for(cfg)
    if cfg.format == "json":
        _emit(json.dumps(d.to_json(), indent=2) + "\n", cfg.output)
    else:
        rows = [["dir", "kind", "p", "coefficient"]]
        for ray in d.rays:
            for p, c in ray.ham.sorted_terms():
                rows.append([str(tuple(ray.dir)), "in" if ray.ingoing else "out", str(p), str(c)])
        _emit(_table(rows), cfg.output)
    return EXIT_OK


def cmd_bps(cfg: RunConfig, diagram_path: str | None, with_gw: bool) -> int:
    if diagram_path:
        try:
            with open(diagram_path, encoding="utf-8") as fh:
                d = ScatteringDiagram.from_json(json.load(fh))
        except FileNotFoundError:
            print(f"error: diagram file {diagram_path!r} not found", file=sys.stderr)
            return EXIT_USAGE
    else:
        d = _diagram_for(cfg)
    records = bps_records(d, cfg.direction)
    gws = {r.p: gw_series(d, r.p, cfg.genus) for r in records} if with_gw else {}
    if cfg.format == "json":
        payload = [r.to_json(gws.get(r.p)) for r in records]
        _emit(json.dumps(payload, indent=2) + "\n", cfg.output)
    else:
        head = ["p", "omega_bar", "omega", "verdict"]
        if with_gw:
            head += [f"N_{g}" for g in range(cfg.genus + 1)]
        rows = [head]
        for r in records:
            row = [str(r.p), str(r.omega_bar), str(r.omega), "pass" if r.verdict.passed() else "FAIL"]
            if with_gw:
                row += [str(v) for v in gws[r.p].values]
            rows.append(row)
        _emit(_table(rows) if len(rows) > 1 else "", cfg.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# checks


def _check_pentagon(cfg: RunConfig, args) -> list[tuple[str, bool]]:
    N = cfg.order
    d = completed_standard(((1, 0), (0, 1)), None, N)
    ctx = d.ctx
    out = d.outgoing()
    dirs = sorted(tuple(r.dir) for r in out)
    diag = TorusElement(ctx, {(l, l): multicover_coefficient(l) for l in range(1, N // 2 + 1)})
    x = TorusElement(ctx, {(l, 0): multicover_coefficient(l) for l in range(1, N + 1)})
    y = TorusElement(ctx, {(0, l): multicover_coefficient(l) for l in range(1, N + 1)})
    return [
        ("three outgoing rays", dirs == [(0, 1), (1, 0), (1, 1)]),
        ("ray (1,0) propagates its input", get_ray(d, (1, 0)) == x),
        ("ray (0,1) propagates its input", get_ray(d, (0, 1)) == y),
        ("ray (1,1) closed form", get_ray(d, (1, 1)) == diag),
        ("dilogarithm pentagon, plain algebra", pentagon_identity_holds(N, twisted=False)),
        ("dilogarithm pentagon, twisted algebra", pentagon_identity_holds(N, twisted=True)),
    ]


def _check_propagation(cfg: RunConfig, args) -> list[tuple[str, bool]]:
    m = cfg.m_tuple or (LatticeVec(1, 0),)
    if len(m) != 1:
        raise UsageError("propagation takes a single vector")
    d0 = standard_diagram(m, cfg.r_tuple, cfg.order)
    d = complete(d0)
    out = d.outgoing()
    ok_rays = len(out) == 1 and out[0].dir == m[0]
    same = ok_rays and out[0].ham == d0.rays[0].ham
    return [("single outgoing ray", ok_rays), ("outgoing Hamiltonian equals input", same)]


def _seed_job(job):
    m, seed, N, G, kind = job
    ctx = Context.make(m, None, N)
    results = []
    for p in exponents(ctx):
        if kind == "tropical":
            results.append((p, cross_check_tropical(m, p, seed, N)))
        else:
            results.append((p, degeneration_check(m, p, G, seed)))
    return seed, results


def _check_seeded(cfg: RunConfig, args, kind: str) -> list[tuple[str, bool]]:
    m = cfg.m_tuple or (LatticeVec(1, 0), LatticeVec(0, 1))
    m = tuple(tuple(v) for v in m)
    if cfg.r_tuple and any(r != 1 for r in cfg.r_tuple):
        raise UsageError(f"{kind} check needs a non-orbifold context")
    jobs = [(m, cfg.seed + i, cfg.order, cfg.genus, kind) for i in range(args.seeds)]
    if _threads() > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(_threads(), len(jobs))) as pool:
            done = list(pool.map(_seed_job, jobs))
    else:
        done = [_seed_job(j) for j in jobs]
    lines = []
    for seed, results in done:
        for p, ok in results:
            if ok is None:
                lines.append((f"seed {seed} p={p} skipped (m_p opposite an initial ray)", True))
            else:
                lines.append((f"seed {seed} p={p}", ok))
    return lines


def _check_twist(cfg: RunConfig, args) -> list[tuple[str, bool]]:
    m = cfg.m_tuple or (LatticeVec(1, 0), LatticeVec(0, 1))
    pairs = random_pairs(100, cfg.seed)
    return [
        (f"completion commutes with twisting at order {cfg.order}", twist_check(m, cfg.order)),
        ("quadratic refinement on 100 random pairs", all(quadratic_refinement_holds(a, b) for a, b in pairs)),
    ]


def _check_dilog(cfg: RunConfig, args) -> list[tuple[str, bool]]:
    top = max(cfg.order, 8)
    return [
        (f"n={n}", quantum_dilog_coeff(n) == quantum_dilog_product_coeff(n))
        for n in range(1, top + 1)
    ]


def random_acyclic_tuple(rng: random.Random, bound: int = 4) -> tuple[LatticeVec, ...]:
    while True:
        n = rng.randint(1, 4)
        vecs = []
        while len(vecs) < n:
            v = LatticeVec(rng.randint(-bound, bound), rng.randint(-bound, bound))
            if v != (0, 0) and is_primitive(v):
                vecs.append(v)
        if in_closed_half_plane(vecs):
            return tuple(vecs)


def _dim_cases(m, max_ord: int):
    for p in product(range(max_ord + 1), repeat=len(m)):
        if 0 < sum(p) <= max_ord:
            ctx = Context.make(m, None, max_ord)
            if ctx.r_of(p) != (0, 0):
                yield p


def _check_dimlemma(cfg: RunConfig, args) -> list[tuple[str, bool]]:
    max_ord = args.max_ord
    if cfg.m_tuple is not None:
        return [
            (f"p={p}", check_dim_lemma(cfg.m_tuple, p))
            for p in _dim_cases(cfg.m_tuple, max_ord)
        ]
    rng = random.Random(cfg.seed)
    lines = []
    for i in range(args.configs):
        m = random_acyclic_tuple(rng)
        cases = list(_dim_cases(m, max_ord))
        ok = True
        for p in cases:
            data = curve_class(m, p)  # asserts the two beta^2 paths agree
            ok = ok and check_dim_lemma(m, p) and data.beta_sq == data.beta_sq_bilinear
        lines.append((f"config {i} m={[tuple(v) for v in m]} ({len(cases)} classes)", ok))
    return lines


def cmd_check(cfg: RunConfig, name: str, args) -> int:
    if name not in CHECKS:
        print(f"error: unknown check {name!r}; choose from {', '.join(CHECKS)}", file=sys.stderr)
        return EXIT_USAGE
    runners = {
        "pentagon": _check_pentagon,
        "propagation": _check_propagation,
        "tropical": lambda c, a: _check_seeded(c, a, "tropical"),
        "degeneration": lambda c, a: _check_seeded(c, a, "degeneration"),
        "twist": _check_twist,
        "dilog": _check_dilog,
        "dimlemma": _check_dimlemma,
    }
    lines = runners[name](cfg, args)
    ok = all(passed for _, passed in lines)
    if cfg.format == "json":
        payload = {"check": name, "passed": ok, "items": [{"name": n, "passed": p} for n, p in lines]}
        _emit(json.dumps(payload, indent=2) + "\n", cfg.output)
    else:
        text = "".join(f"{'PASS' if p else 'FAIL'}  {n}\n" for n, p in lines)
        text += f"{name}: {'pass' if ok else 'FAIL'}\n"
        _emit(text, cfg.output)
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qscatter", description="Exact quantum scattering diagrams and BPS invariants.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, order_default=6):
        p.add_argument("--m", help='vectors as "x1,y1;x2,y2;..."')
        p.add_argument("--orbifold", help='orbifold orders as "r1,r2,..."')
        p.add_argument("--order", type=int, default=order_default, help="truncation order N")
        p.add_argument("--genus", type=int, default=3, help="genus cutoff G")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--output", help="write to this file instead of stdout")
        p.add_argument("--format", choices=("json", "table"), default=None)

    sc = sub.add_parser("scatter", help="complete a standard diagram")
    common(sc)
    bp = sub.add_parser("bps", help="BPS invariants of a completed diagram")
    common(bp)
    bp.add_argument("--diagram", help="completed diagram JSON written by 'scatter'")
    bp.add_argument("--direction", help='only classes with m_p = "x,y"')
    bp.add_argument("--gw", action="store_true", help="add genus expansion columns")
    ck = sub.add_parser("check", help="run a named cross-check")
    ck.add_argument("name", help=f"one of: {', '.join(CHECKS)}")
    common(ck)
    ck.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    ck.add_argument("--max-ord", type=int, default=6, help="largest ord(p) for dimlemma")
    ck.add_argument("--configs", type=int, default=200, help="random configurations for dimlemma")
    return parser


def _config(args) -> RunConfig:
    m = parse_m(args.m) if args.m else None
    r = parse_ints(args.orbifold) if args.orbifold else None
    if args.order < 1:
        raise UsageError("--order must be at least 1")
    if args.genus < 0:
        raise UsageError("--genus must be nonnegative")
    direction = None
    if getattr(args, "direction", None):
        (direction,) = parse_m(args.direction)
    default_format = "json" if args.command == "scatter" else "table"
    return RunConfig(args.command, m, r, args.order, args.genus, direction, args.seed,
                     args.output, args.format or default_format)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        if args.command == "scatter":
            return cmd_scatter(cfg)
        if args.command == "bps":
            return cmd_bps(cfg, args.diagram, args.gw)
        return cmd_check(cfg, args.name, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConsistencyError, ExtractionError, GenericityError, AssertionError, ArithmeticError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
