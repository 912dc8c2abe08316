"""Command-line entry point: ``clusterlens <command> ...``."""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from .errors import InputError, InvariantError, ResourceLimitError, exit_code
from .evaluator import CacheStore, MonicInput, precompute
from .graphs import MAX_DEGREE, check_degree
from .recover import ClusterPicture, RecoveryResult, run
from .sympoly import digest, family
from .valfield import ValuedContext, fmt


def picture_document(res: RecoveryResult, prime: int, trace: bool = False) -> dict:
    doc = {
        "degree": res.picture.degree,
        "prime": prime,
        "ord_leading": res.ord_cf,
        "depths": [fmt(t) for t in res.profile.depths],
        "multiplicities": list(res.profile.mult),
        "tree": res.picture.to_dict(),
    }
    if trace:
        doc["trace"] = [s.to_dict() for s in res.trace]
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def reserialize(text: str) -> str:
    """Parse an emitted document, rebuild the picture from it and serialise again."""
    doc = json.loads(text)
    pic = ClusterPicture.from_dict(doc["degree"], doc["tree"])
    doc["tree"] = pic.to_dict()
    return dumps(doc)


def _cmd_recover(args, out):
    ctx = ValuedContext(args.prime)
    f = MonicInput.parse(ctx, args.coeffs)
    check_degree(f.d, args.max_degree)
    res = run(f, CacheStore.from_env(args.cache), shortcut=not args.no_shortcut)
    if args.json:
        out.append(dumps(picture_document(res, args.prime, args.trace)))
        return
    if args.ascii:
        out.append(res.picture.ascii() + "\n")
    else:
        out.append(f"picture: {res.picture.ascii()}\n")
        out.append("depths: " + " ".join(fmt(t) for t in res.profile.depths) + "\n")
        out.append("multiplicities: " + " ".join(map(str, res.profile.mult)) + "\n")
        out.append(f"ord_leading: {fmt(res.ord_cf)}\n")
    if args.trace:
        for s in res.trace:
            out.append(f"step {s.n}: selected {s.selected.to_text()} depth {fmt(s.depth)}\n")
            for c in s.candidates:
                tag = " (forced)" if c.forced else ""
                out.append(f"  {c.graph.to_text()}  ord_J={fmt(c.ord_j)}  A={fmt(c.value)}{tag}\n")


def _cmd_precompute(args, out):
    check_degree(args.degree, args.max_degree)
    if args.degree < 2:
        raise InputError("degree must be at least 2")
    cache = CacheStore.from_env(args.cache)
    t0 = time.perf_counter()
    invs = precompute(cache, args.degree, args.max_degree)
    out.append(f"precomputed {len(invs)} invariants for d={args.degree} "
               f"({cache.computed} new) in {time.perf_counter() - t0:.2f}s\n")


def _cmd_family(args, out):
    check_degree(args.degree, args.max_degree)
    if args.degree < 2:
        raise InputError("degree must be at least 2")
    cache = CacheStore.from_env(args.cache)
    fam = family(args.degree, cache.get_or_compute, args.max_degree)
    out.append(f"t={fam.t}\n")
    out.append(f"distinct J_G (with 1/Delta counted as Delta): {fam.distinct_functions}\n")
    members = sorted(fam.members, key=lambda g: (g.total_degree(), digest(g)))
    for g in members:
        out.append(f"{digest(g)}  terms={len(g)}  degree={g.total_degree()}\n")


def _cmd_oracle_check(args, out):
    from .oracle import cluster_from_valmatrix, random_split_poly

    check_degree(args.degree, args.max_degree)
    ctx = ValuedContext(args.prime)
    cache = CacheStore.from_env(args.cache)
    failures = 0
    for seed in range(args.seeds):
        f, m = random_split_poly(args.degree, ctx, seed)
        pic, prof = cluster_from_valmatrix(m)
        res = run(f, cache)
        if res.picture != pic or res.profile != prof:
            failures += 1
            out.append(f"seed {seed}: recovered {res.picture.ascii()} expected {pic.ascii()}\n")
    out.append(f"{args.seeds - failures}/{args.seeds} agree\n")
    if failures:
        raise InvariantError(f"{failures} oracle mismatches")


def bench_inputs(count: int, degree: int, ctx: ValuedContext, seed: int = 0, lo: int = 1, hi: int = 5):
    """Random separable monic polynomials with coefficients in lo..hi."""
    rng = random.Random(f"bench/{seed}")
    out = []
    while len(out) < count:
        a = tuple(Fraction(rng.randint(lo, hi)) for _ in range(degree))
        try:
            out.append(MonicInput(ctx, degree, a, 0))
        except InputError:
            continue
    return out


def run_bench(inputs, cache: CacheStore) -> float:
    t0 = time.perf_counter()
    for f in inputs:
        run(f, cache)
    return time.perf_counter() - t0


def _cmd_bench(args, out):
    check_degree(args.degree, args.max_degree)
    ctx = ValuedContext(args.prime)
    cache = CacheStore.from_env(args.cache)
    inputs = bench_inputs(args.count, args.degree, ctx, args.seed)
    precompute(cache, args.degree, args.max_degree)     # warm the cache first
    elapsed = run_bench(inputs, cache)
    out.append(f"recovered {len(inputs)} pictures (d={args.degree}, p={args.prime}) in {elapsed:.2f}s "
               f"({1000 * elapsed / len(inputs):.2f} ms each)\n")


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1); exit 2 is reserved for resource limits."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clusterlens", description="Cluster pictures from coefficient valuations.")
    parser.add_argument("--max-degree", type=int, default=MAX_DEGREE)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recover", help="recover the cluster picture of one polynomial")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--coeffs", required=True, help='"c_f; a_{d-1},...,a_0"')
    fmt_group = p.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true")
    fmt_group.add_argument("--ascii", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--cache")
    p.add_argument("--no-shortcut", action="store_true", help="always evaluate the final invariant")
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("precompute", help="materialise every invariant of one degree")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--cache")
    p.set_defaults(func=_cmd_precompute)

    p = sub.add_parser("family", help="size and digests of the polynomial family")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--cache")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("oracle-check", help="compare recovery with root-based ground truth")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--prime", type=int, default=7)
    p.add_argument("--cache")
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("bench", help="time batch recovery with a warm cache")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--prime", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out: list[str] = []
    try:
        args.func(args, out)
    except (InputError, ResourceLimitError, InvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code(exc)
    sys.stdout.write("".join(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
