"""ord(J_{G,f}) from the coefficients of f, with a persistent invariant cache."""
from __future__ import annotations

import json
import math
import os
import tempfile
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from filelock import FileLock

from .errors import InputError, InvariantError, SeparabilityError
from .graphs import WeightedGraph, canonical_graph, key_text
from .sympoly import ElemPoly, GraphInvariant, discriminant, graph_invariant
from .valfield import INF, ValuedContext, Valuation, ord_p, parse_rational

FORMAT_VERSION = 1
CACHE_ENV = "CLUSTERLENS_CACHE"


# -- discriminants ---------------------------------------------------------------

@lru_cache(maxsize=None)
def discriminant_poly(d: int) -> ElemPoly:
    return discriminant(d)


def _det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def sylvester_discriminant(a) -> Fraction:
    """Discriminant of monic x^d + sum a_i x^i as (-1)^(d(d-1)/2) Res(f, f')."""
    d = len(a)
    if d < 2:
        return Fraction(1)
    f = [Fraction(1)] + [Fraction(c) for c in reversed(a)]          # descending
    df = [Fraction(d - i) * f[i] for i in range(d)]                  # descending, degree d-1
    size = 2 * d - 1
    rows = []
    for i in range(d - 1):
        rows.append([0] * i + f + [0] * (size - i - len(f)))
    for i in range(d):
        rows.append([0] * i + df + [0] * (size - i - len(df)))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * _det(rows)


# -- inputs -------------------------------------------------------------------------

@dataclass(frozen=True)
class MonicInput:
    """f = c_f (x^d + a_{d-1} x^{d-1} + ... + a_0) over Q with the p-adic valuation."""

    ctx: ValuedContext
    d: int
    a: tuple          # a_0 .. a_{d-1}
    ord_cf: Valuation
    disc: Fraction = field(init=False, repr=False)
    scaled: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.d != len(self.a) or self.d < 1:
            raise InputError("coefficient count must equal the degree (at least 1)")
        a = tuple(Fraction(c) for c in self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "scaled", _scaled_depressed(a))
        disc = self._discriminant()
        if disc == 0:
            raise SeparabilityError("polynomial is not separable (discriminant is 0)")
        object.__setattr__(self, "disc", disc)

    def _discriminant(self) -> Fraction:
        d = self.d
        if d < 2:
            return Fraction(1)
        if d <= 6:
            n = d * (d - 1)
            val = Fraction(discriminant_poly(d).evaluate(self.scaled))
            return val / Fraction(d) ** n
        return sylvester_discriminant(self.a)

    @classmethod
    def from_coeffs(cls, ctx: ValuedContext, coeffs) -> "MonicInput":
        """From the full coefficient list [c_d, ..., c_0] of f (c_d nonzero)."""
        coeffs = [Fraction(c) for c in coeffs]
        if not coeffs or coeffs[0] == 0:
            raise InputError("leading coefficient must be nonzero")
        cf = coeffs[0]
        a = tuple(c / cf for c in reversed(coeffs[1:]))
        return cls(ctx, len(a), a, ord_p(cf, ctx))

    @classmethod
    def parse(cls, ctx: ValuedContext, text: str) -> "MonicInput":
        """Parse ``"c_f; a_{d-1}, ..., a_0"`` (already-monic coefficients after c_f)."""
        head, sep, body = text.partition(";")
        if not sep:
            raise InputError("expected 'c_f; a_{d-1},...,a_0'")
        cf = parse_rational(head)
        if cf == 0:
            raise InputError("c_f must be nonzero")
        items = [s for s in (t.strip() for t in body.split(",")) if s]
        if not items:
            raise InputError("no coefficients given")
        a = tuple(parse_rational(s) for s in reversed(items))
        return cls(ctx, len(a), a, ord_p(cf, ctx))

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def ord_disc(self) -> int:
        return ord_p(self.disc, self.ctx)

    @property
    def scale_ord(self) -> int:
        return ord_p(self.d, self.ctx)


def _scaled_depressed(a) -> tuple:
    """Coefficients B_0..B_{d-1} of d^d f((y - a_{d-1}) / d); B_{d-1} = 0.

    Its roots are d x_i + a_{d-1}, so root differences scale by exactly d.
    """
    d = len(a)
    if d == 0:
        return ()
    coeffs = list(a) + [Fraction(1)]
    s = -coeffs[d - 1]
    out = []
    for k in range(d):
        out.append(sum(coeffs[i] * d ** (d - i) * math.comb(i, k) * s ** (i - k) for i in range(k, d + 1)))
    # plain ints evaluate much faster than Fractions
    return tuple(int(x) if x.denominator == 1 else x for x in out)


def ord_J(inv: GraphInvariant, f: MonicInput) -> Valuation:
    """ord_p(g(a)) - k ord_p(Delta(a)); +inf when g(a) = 0."""
    if inv.d != f.d:
        raise ValueError(f"graph has {inv.d} vertices but f has degree {f.d}")
    value = inv.depressed.evaluate(f.scaled)
    if value == 0:
        return INF
    return ord_p(value, f.ctx) - inv.num_degree * f.scale_ord - inv.k * f.ord_disc


def ord_J_direct(inv: GraphInvariant, f: MonicInput) -> Valuation:
    """Same as :func:`ord_J` but evaluating the full g at a (slower; used as a check)."""
    value = inv.g.evaluate(f.a)
    if value == 0:
        return INF
    return ord_p(value, f.ctx) - inv.k * f.ord_disc


# -- cache -------------------------------------------------------------------------------

def _encode(inv: GraphInvariant | None, d: int, g: ElemPoly, k: int, num_degree: int) -> bytes:
    record = {
        "format_version": FORMAT_VERSION,
        "d": d,
        "graph": None if inv is None else [[i + 1, j + 1, w] for (i, j), w in sorted(inv.graph.edges().items())],
        "k": k,
        "num_degree": num_degree,
        "g": [[list(e), str(c)] for e, c in sorted(g.terms.items())],
    }
    return (json.dumps(record, separators=(",", ":")) + "\n").encode()


def _decode(data: bytes):
    record = json.loads(data)
    if record.get("format_version") != FORMAT_VERSION:
        return None
    d = record["d"]
    g = ElemPoly(d, {tuple(e): int(c) for e, c in record["g"]})
    graph = None
    if record["graph"] is not None:
        graph = WeightedGraph.from_edges(d, {(i - 1, j - 1): w for i, j, w in record["graph"]})
    return graph, g, record["k"], record["num_degree"]


class CacheStore:
    """Directory of JSON records, one per canonical graph, plus one discriminant per degree.

    ``directory=None`` keeps everything in memory only.
    """

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
        self._mem: dict = {}
        self._locks: dict = {}
        self._guard = threading.Lock()
        self.computed = 0     # number of invariants computed (cache misses)

    @classmethod
    def from_env(cls, override=None) -> "CacheStore":
        return cls(override if override is not None else os.environ.get(CACHE_ENV))

    def _path(self, key) -> Path:
        d, weights = key
        name = f"d{d}_" + "-".join(map(str, weights)) + ".json"
        return self.directory / name

    def _lock(self, key):
        with self._guard:
            if key not in self._locks:
                self._locks[key] = threading.Lock()
            return self._locks[key]

    def get(self, key) -> GraphInvariant | None:
        if key in self._mem:
            return self._mem[key]
        if self.directory is None:
            return None
        path = self._path(key)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise InputError(f"cannot read cache file {path}: {exc}") from exc
        decoded = _decode(data)
        if decoded is None:
            return None
        graph, g, k, num_degree = decoded
        inv = GraphInvariant(graph, g, k, num_degree)
        if inv.key != key:
            raise InvariantError(f"cache file {path} holds {key_text(inv.key)}")
        self._mem[key] = inv
        return inv

    def put(self, inv: GraphInvariant) -> None:
        self._mem[inv.key] = inv
        if self.directory is not None:
            self._write(self._path(inv.key), _encode(inv, inv.d, inv.g, inv.k, inv.num_degree))

    def _write(self, path: Path, data: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except OSError as exc:
            Path(tmp).unlink(missing_ok=True)
            raise InputError(f"cannot write cache file {path}: {exc}") from exc

    def file_bytes(self, key) -> bytes:
        return self._path(key).read_bytes()

    def get_or_compute(self, g: WeightedGraph, method: str = "auto") -> GraphInvariant:
        key = (g.d, canonical_graph(g).weights)
        inv = self.get(key)
        if inv is not None:
            return inv
        with self._lock(key):
            inv = self.get(key)
            if inv is not None:
                return inv
            if self.directory is not None:
                with FileLock(str(self._path(key)) + ".lock"):
                    inv = self.get(key)
                    if inv is None:
                        inv = self._compute(g, method)
            else:
                inv = self._compute(g, method)
            return inv

    def _compute(self, g, method):
        inv = graph_invariant(g, method)
        self.computed += 1
        self.put(inv)
        return inv

    def discriminant(self, d: int) -> ElemPoly:
        key = ("disc", d)
        if key in self._mem:
            return self._mem[key]
        path = self.directory / f"d{d}_discriminant.json" if self.directory is not None else None
        if path is not None and path.exists():
            decoded = _decode(path.read_bytes())
            if decoded is not None:
                self._mem[key] = decoded[1]
                return decoded[1]
        poly = discriminant_poly(d)
        self._mem[key] = poly
        if path is not None:
            self._write(path, _encode(None, d, poly, 0, d * (d - 1)))
        return poly


def get_or_compute(cache: CacheStore, g: WeightedGraph, method: str = "auto") -> GraphInvariant:
    return cache.get_or_compute(g, method)


def precompute(cache: CacheStore, d: int, max_degree: int = 8, progress=None) -> list[GraphInvariant]:
    from .graphs import enumerate_auxiliary

    out = []
    cache.discriminant(d)
    for g in enumerate_auxiliary(d, max_degree):
        inv = cache.get_or_compute(g)
        out.append(inv)
        if progress:
            progress(inv)
    return out

