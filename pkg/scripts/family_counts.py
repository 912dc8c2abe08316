"""Tabulate |G_d|, t_d and the number of distinct rational functions J_G per degree."""
import argparse
import time
from dataclasses import dataclass

from clusterlens import CacheStore
from clusterlens.evaluator import precompute
from clusterlens.sympoly import family


@dataclass
class Config:
    max_degree: int = 5
    cache: str | None = None


def main(cfg: Config) -> None:
    store = CacheStore.from_env(cfg.cache)
    print(f"{'d':>2} {'|G_d|':>6} {'t_d':>5} {'distinct J':>10} {'seconds':>8}")
    for d in range(2, cfg.max_degree + 1):
        t0 = time.perf_counter()
        precompute(store, d)
        fam = family(d, store.get_or_compute)
        print(f"{d:>2} {len(fam.invariants):>6} {fam.t:>5} {fam.distinct_functions:>10} "
              f"{time.perf_counter() - t0:>8.1f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=Config.max_degree)
    ap.add_argument("--cache")
    main(Config(**vars(ap.parse_args())))
