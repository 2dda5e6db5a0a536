"""The wred command line: list, verify, squash, adversary, oracle."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .adversaries import (
    Delta2Approx,
    cm_coloring,
    delta2_diagonalizer,
    qwwkl_cutter,
    rainbow_measure_coloring,
    rrt_column_splitter,
    ts1_diagonalizer,
)
from .catalog import ENTRIES, SQUASH_CONFIGS
from .combinators import squash_forward, squash_markers
from .harness import (
    EXIT_INPUT,
    EXIT_PASS,
    EXIT_RESOURCE,
    SuiteConfig,
    load_instance,
    parse_document,
    run_suite,
)
from .kernel import InputError, Point, ResourceError, pointwise
from .oracle import (
    SearchBudget,
    enumerate_paths,
    find_homogeneous,
    find_min_homogeneous,
    find_rainbow,
    find_thin,
)

# toy functionals addressable from the adversary subcommand
TOY_FORWARD = {
    "identity": lambda: pointwise(1, lambda ctx, x: ctx.query(0, x), "identity",
                                  reads=lambda x: [(0, x)]),
    "ones": lambda: pointwise(1, lambda ctx, x: 1, "ones"),
    "single": lambda: pointwise(1, lambda ctx, x: 1 if x == 0 else 0, "single"),
    "embed23": lambda: pointwise(
        1, lambda ctx, x: ((ctx.query(0, x // 2) % 2) >> (x % 2)) & 1, "embed23"),
}

TOY_BACKWARD = {
    "zero": lambda: pointwise(1, lambda ctx, x: 0, "zero"),
    "echo": lambda: pointwise(1, lambda ctx, x: ctx.query(0, x), "echo"),
    "echo-shift": lambda: pointwise(1, lambda ctx, x: ctx.query(0, x + 1), "echo+1"),
    "spin": lambda: pointwise(1, _spin, "spin"),
}

TOY_GUESSERS = {
    "empty": lambda: Delta2Approx(rule=lambda e, i, b, s: 0, limit=lambda e, b: 0),
    "evens": lambda: Delta2Approx(
        rule=lambda e, i, b, s: 1 if (s >= 8 and b % 2 == 0) else 0,
        stabilization=8, limit=lambda e, b: 1 if b % 2 == 0 else 0),
}


def _spin(ctx, x):
    while True:
        ctx.tick()


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer, got {raw!r}")


def _write(path, text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_params(pairs) -> dict:
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise InputError(f"--param expects key=value, got {pair!r}")
        k, v = pair.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_list(args) -> int:
    for eid in sorted(ENTRIES):
        print(f"{eid:24s} {ENTRIES[eid].description}")
    print()
    print("squash configs: " + ", ".join(sorted(SQUASH_CONFIGS)))
    return EXIT_PASS


def cmd_verify(args) -> int:
    config = SuiteConfig(samples=args.samples, horizon=args.horizon, size=args.size,
                         fuel=args.fuel, seed=args.seed)
    report = run_suite(args.entry, config)
    _write(args.out, report.to_csv())
    counts = report.counts()
    print(f"# {args.entry}: " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())),
          file=sys.stderr)
    return report.exit_code()


def cmd_squash(args) -> int:
    name = args.config
    if os.path.exists(name):
        # a config document names a registered configuration
        with open(name) as fh:
            for ln in fh:
                ln = ln.strip()
                if ln.startswith("config:"):
                    name = ln.split(":", 1)[1].strip()
                    break
            else:
                raise InputError(f"{args.config}: no 'config:' line")
    if name not in SQUASH_CONFIGS:
        raise InputError(f"unknown squash config {name!r}; known: {sorted(SQUASH_CONFIGS)}")
    cfg = SQUASH_CONFIGS[name]()
    stages = args.stages if args.stages is not None else args.horizon + 6
    markers = squash_markers(cfg, stages)
    fam = Point.from_seed(args.seed)
    run = squash_forward(cfg, markers, fam, args.horizon, count=args.count)
    lines = ["marker: " + " ".join(str(m) for m in markers.markers)]
    for i, row in enumerate(run.table):
        lines.append(f"B_{i}: " + "".join(str(b) for b in row[: args.horizon]))
    lines.append("identity: checked exactly on the materialized rows")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_PASS


def cmd_adversary(args) -> int:
    params = _parse_params(args.param)
    name = args.name
    if name == "qwwkl-cutter":
        p = Fraction(params.get("p", "1/2"))
        q = Fraction(params.get("q", "3/4"))
        psi = TOY_BACKWARD[params.get("psi", "zero")]()
        phi = TOY_FORWARD[params.get("phi", "identity")]()
        fuel = int(params.get("fuel", 50_000))
        tree, log = qwwkl_cutter(phi, psi, p, q, stages=args.stages, fuel=fuel)
        _write(args.out, log.to_csv())
        print(f"# mu(T) = {tree.measure()}; digest {log.digest()}", file=sys.stderr)
        return EXIT_PASS
    if name == "ts1":
        j, k = int(params.get("j", 2)), int(params.get("k", 3))
        phi = TOY_FORWARD[params.get("phi", "embed23")]()
        psi = TOY_BACKWARD[params.get("psi", "echo")]()
        res = ts1_diagonalizer(phi, psi, j, k, stages=args.stages)
        _write(args.out, res.log.to_csv())
        print(f"# actions={len(res.log.action_stages())} colors[:16]={res.colors[:16]}",
              file=sys.stderr)
        return EXIT_PASS
    if name == "delta2":
        k = int(params.get("k", 3))
        guesser = TOY_GUESSERS[params.get("guesser", "evens")]()
        _, log = delta2_diagonalizer(k, guesser, stages=args.stages)
        _write(args.out, log.to_csv())
        return EXIT_PASS
    if name == "cm":
        phi = TOY_FORWARD[params.get("phi", "ones")]()
        res = cm_coloring(phi)
        lines = ["trigger: " + (str(res.trigger) if res.trigger else "none")]
        _write(args.out, "\n".join(lines) + "\n")
        return EXIT_PASS
    if name == "arb-bounds":
        phi = TOY_FORWARD[params.get("phi", "ones")]()
        q = Fraction(params.get("q", "1/2"))
        res = rainbow_measure_coloring(phi, q)
        lines = [f"cylinders: {len(res.cylinders)}", f"bound: {res.bound}"]
        for cyl in res.cylinders:
            lines.append(f"set: measure={cyl.measure} strings={len(cyl.strings)}")
        _write(args.out, "\n".join(lines) + "\n")
        return EXIT_PASS
    if name == "column-splitter":
        phi = TOY_FORWARD[params.get("phi", "ones")]()
        results = rrt_column_splitter(phi, columns=int(params.get("columns", 2)))
        lines = [f"column {j}: cylinders={len(r.cylinders)} bound={r.bound}"
                 for j, r in enumerate(results)]
        _write(args.out, "\n".join(lines) + "\n")
        return EXIT_PASS
    raise InputError(f"unknown adversary {name!r}")


def cmd_oracle(args) -> int:
    with open(args.input) as fh:
        doc = parse_document(fh.read())
    loaded = load_instance(doc)
    budget = SearchBudget(horizon=args.horizon, size=args.size)
    if args.task in ("homogeneous", "thin", "rainbow", "min-homogeneous"):
        f = loaded[0] if isinstance(loaded, tuple) else loaded
        if args.task == "homogeneous":
            res = find_homogeneous(f, budget)
        elif args.task == "thin":
            res = find_thin(f, budget)
        elif args.task == "rainbow":
            res = find_rainbow(f, budget)
        else:
            res = find_min_homogeneous(f, budget)
        if res.found:
            omit = "" if res.omitted is None else f" omitted={res.omitted}"
            print(f"found ({res.mode}): {' '.join(map(str, res.members))}{omit}")
            return EXIT_PASS
        print("inconclusive: node budget exhausted" if res.inconclusive
              else "none: absence certified")
        return EXIT_RESOURCE if res.inconclusive else EXIT_PASS
    if args.task == "paths":
        tree = loaded
        members = enumerate_paths(tree, args.depth)
        for m in members:
            print("".join(str(b) for b in m.bits))
        return EXIT_PASS
    raise InputError(f"unknown oracle task {args.task!r}")


def build_parser() -> argparse.ArgumentParser:
    fuel_default = _env_int("WRED_FUEL_DEFAULT", 4096)
    horizon_default = _env_int("WRED_HORIZON_DEFAULT", 16)
    top = argparse.ArgumentParser(prog="wred", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="catalog entries and squash configs").set_defaults(fn=cmd_list)

    v = sub.add_parser("verify", help="run the soundness suite for an entry")
    v.add_argument("entry")
    v.add_argument("--samples", type=int, default=25)
    v.add_argument("--horizon", type=int, default=horizon_default)
    v.add_argument("--size", type=int, default=4)
    v.add_argument("--fuel", type=int, default=fuel_default)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default="")
    v.set_defaults(fn=cmd_verify)

    s = sub.add_parser("squash", help="markers and the materialized instance table")
    s.add_argument("--config", required=True)
    s.add_argument("--stages", type=int, default=None)
    s.add_argument("--horizon", type=int, default=horizon_default)
    s.add_argument("--count", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="")
    s.set_defaults(fn=cmd_squash)

    a = sub.add_parser("adversary", help="run a stage-based construction")
    a.add_argument("name")
    a.add_argument("--param", action="append", default=[])
    a.add_argument("--stages", type=int, default=32)
    a.add_argument("--out", default="")
    a.set_defaults(fn=cmd_adversary)

    o = sub.add_parser("oracle", help="brute-force searches over a document")
    o.add_argument("task")
    o.add_argument("--input", required=True)
    o.add_argument("--horizon", type=int, default=horizon_default)
    o.add_argument("--size", type=int, default=4)
    o.add_argument("--depth", type=int, default=6)
    o.set_defaults(fn=cmd_oracle)
    return top


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as e:
        print(f"resource error: {e} {e.context}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
