"""Recover the degree-5 example over Q_7 and print every step of the search."""
import argparse
from dataclasses import dataclass

from clusterlens import CacheStore, MonicInput, ValuedContext, run
from clusterlens.valfield import fmt


@dataclass
class Config:
    prime: int = 7
    coeffs: str = "1; -8, -823538, 4941204, 6588464, 52706688"
    cache: str | None = None


def main(cfg: Config) -> None:
    f = MonicInput.parse(ValuedContext(cfg.prime), cfg.coeffs)
    res = run(f, CacheStore.from_env(cfg.cache), shortcut=False)
    for rec in res.trace:
        print(f"step {rec.n}: d_{rec.n} = {fmt(rec.depth)}, G_{rec.n} = {rec.selected.to_text()}")
        for c in sorted(rec.candidates, key=lambda c: (-c.value, -c.edges)):
            mark = "*" if c.graph == rec.selected else " "
            print(f"  {mark} A={fmt(c.value):>6}  ord J={fmt(c.ord_j):>6}  {c.graph.to_text()}")
    print(res.picture.ascii())


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime", type=int, default=Config.prime)
    ap.add_argument("--coeffs", default=Config.coeffs)
    ap.add_argument("--cache")
    main(Config(**vars(ap.parse_args())))
