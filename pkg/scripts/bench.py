"""Time batch recovery of random separable polynomials with small coefficients."""
import argparse
import time
from dataclasses import dataclass

from clusterlens import CacheStore, ValuedContext
from clusterlens.cli import bench_inputs, run_bench
from clusterlens.evaluator import precompute


@dataclass
class Config:
    count: int = 500
    degree: int = 5
    prime: int = 7
    seed: int = 0
    cache: str | None = None


def main(cfg: Config) -> None:
    store = CacheStore.from_env(cfg.cache)
    t0 = time.perf_counter()
    precompute(store, cfg.degree)
    print(f"precompute d={cfg.degree}: {time.perf_counter() - t0:.2f}s ({store.computed} computed)")
    inputs = bench_inputs(cfg.count, cfg.degree, ValuedContext(cfg.prime), cfg.seed)
    elapsed = run_bench(inputs, store)
    print(f"{cfg.count} recoveries: {elapsed:.2f}s, {1000 * elapsed / cfg.count:.2f} ms each")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default) if default is not None else str,
                        default=default)
    main(Config(**vars(ap.parse_args())))
