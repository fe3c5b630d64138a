"""Exact partition functions: closed product form, recursions, translations.

The canonical partition function Z(n, m) sums the weights of all monotone
paths from the origin to (n, m).  It factors as q^(n(n+1)) times the Gaussian
binomial [n+m, n] in q^2, so its exponents live in [n(n+1), n(n+1) + 2nm] and
are all even.  Generalized (boxed) partition functions reduce to canonical
ones through a pure power-of-q prefactor, which is what makes every quantity
in this package computable without enumeration.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence

from .errors import DomainError, RangeError
from .paths import BoxSpec
from .qpoly import ModelParameters, QPoly

#: Exact-rational grid used by default for inequality checks.
DEFAULT_Q_GRID = (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5))


@dataclass(frozen=True)
class SectorSpec:
    """A chain sector: n down spins and m up spins on L = n + m sites."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError(f"sector ({self.n},{self.m}) has negative counts")

    @property
    def length(self) -> int:
        return self.n + self.m


class ZCache:
    """Memo table (n, m) -> Z(n, m) with hit/miss statistics.

    Concurrent readers are safe; insertion is serialized by a lock and a
    cached value, once visible, is never replaced.  ``max_entries`` bounds
    the table size (further values are computed but not stored).
    """

    def __init__(self, max_entries: Optional[int] = None):
        self._data: dict[tuple[int, int], QPoly] = {}
        self._lock = threading.Lock()
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._data)

    def get_or_compute(self, key: tuple[int, int], compute: Callable[[], QPoly]) -> QPoly:
        value = self._data.get(key)
        if value is not None:
            self.hits += 1
            return value
        self.misses += 1
        value = compute()
        with self._lock:
            if key not in self._data and (self.max_entries is None or len(self._data) < self.max_entries):
                self._data[key] = value
            return self._data.get(key, value)


_DEFAULT_CACHE = ZCache()


def _gauss_coeffs(a: int, b: int) -> list[int]:
    """Dense coefficient list (index = power of q^2) of the Gaussian binomial [a+b, a].

    Built by the telescoping product: multiply by (1 - p^(b+i)) then divide
    exactly by (1 - p^i) for i = 1..a.  Each division's remainder is checked
    to be zero, which catches any arithmetic slip immediately.
    """
    coeffs = [1]
    for i in range(1, a + 1):
        k = b + i
        n = len(coeffs)
        out = coeffs + [0] * k
        for j in range(n):
            out[j + k] -= coeffs[j]
        quo = [0] * (len(out) - i)
        for j in range(len(quo)):
            quo[j] = out[j] + (quo[j - i] if j >= i else 0)
        for j in range(len(quo), len(out)):
            if out[j] != -quo[j - i]:
                raise ArithmeticError(f"inexact division by (1 - q^{2 * i}) in closed form")
        coeffs = quo
    return coeffs


def z_closed(n: int, m: int) -> QPoly:
    """Closed-form Z(n, m) = q^(n(n+1)) * [n+m, n] in q^2, exactly."""
    if n < 0 or m < 0:
        raise ValueError(f"negative sector ({n},{m})")
    base = n * (n + 1)
    assert base % 2 == 0
    coeffs = _gauss_coeffs(min(n, m), max(n, m))
    return QPoly({base + 2 * j: c for j, c in enumerate(coeffs) if c})


def z_cached(n: int, m: int, cache: Optional[ZCache] = None) -> QPoly:
    """Z(n, m) through a cache (the shared module cache when none is given)."""
    cache = _DEFAULT_CACHE if cache is None else cache
    return cache.get_or_compute((n, m), lambda: z_closed(n, m))


def z_recursive(n: int, m: int, cache: Optional[ZCache] = None) -> QPoly:
    """Z(n, m) by the corner recursion Z(n,m) = Z(n,m-1) + q^(2(n+m)) Z(n-1,m).

    Base cases: Z(0, m) = 1 and Z(n, 0) = q^(n(n+1)).  Fills bottom-up to
    avoid deep recursion; the value is identical to ``z_closed``.  When a
    cache is given, every computed value is published into it.
    """
    if n < 0 or m < 0:
        raise ValueError(f"negative sector ({n},{m})")
    table: dict[tuple[int, int], QPoly] = {}
    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0:
                value = QPoly.one()
            elif j == 0:
                value = QPoly.monomial(i * (i + 1))
            else:
                value = table[(i, j - 1)] + table[(i - 1, j)].shift(2 * (i + j))
            table[(i, j)] = value
    if cache is not None:
        for key, value in table.items():
            cache.get_or_compute(key, lambda v=value: v)
    return table[(n, m)]


def z_generalized(box: BoxSpec, cache: Optional[ZCache] = None) -> QPoly:
    """Boxed partition function, reduced to a shifted canonical one.

    A translation of the whole box to the origin multiplies every path weight
    by the same power of q, so
    Z(n0,m0; n,m) = q^(2(n0+m0)(n-n0)) * Z(n-n0, m-m0).
    """
    shift = 2 * (box.n0 + box.m0) * box.width
    return z_cached(box.width, box.height, cache).shift(shift)


class MarkovTerm(NamedTuple):
    point: tuple[int, int]
    left: QPoly
    right: QPoly


def markov_decompose(box: BoxSpec, z: int, cache: Optional[ZCache] = None) -> list[MarkovTerm]:
    """Factor the box over the anti-diagonal cut x + y = z.

    Every path crosses the cut at exactly one lattice point, so
    Z(box) = sum over cut points (x, y) of Z(n0,m0; x,y) * Z(x,y; n,m).
    The returned terms' products sum to z_generalized(box) exactly.
    """
    if not box.n0 + box.m0 <= z <= box.n + box.m:
        raise RangeError(f"cut z={z} outside [{box.n0 + box.m0}, {box.n + box.m}]")
    terms = []
    for x in range(max(box.n0, z - box.m), min(box.n, z - box.m0) + 1):
        y = z - x
        left = z_generalized(BoxSpec(box.n0, box.m0, x, y), cache)
        right = z_generalized(BoxSpec(x, y, box.n, box.m), cache)
        terms.append(MarkovTerm((x, y), left, right))
    return terms


class RatioBoundResult(NamedTuple):
    lhs: QPoly
    rhs: QPoly
    holds_at: list


def ratio_bound_check(
    n: int,
    m: int,
    v: int,
    w: int,
    q_grid: Sequence[Fraction] = DEFAULT_Q_GRID,
    cache: Optional[ZCache] = None,
) -> RatioBoundResult:
    """Check Z(n-v, m-w) <= q^(-2nv + v(v-1)) * Z(n, m) on an exact q grid.

    Both sides are cleared of negative powers first:
    lhs = q^(2nv - v(v-1)) * Z(n-v, m-w), rhs = Z(n, m).  Violations are
    reported through the ``holds_at`` list, never raised.
    """
    if not (0 <= v <= n and 0 <= w <= m):
        raise RangeError(f"need 0 <= v <= n and 0 <= w <= m, got v={v}, w={w}")
    lhs = z_cached(n - v, m - w, cache).shift(2 * n * v - v * (v - 1))
    rhs = z_cached(n, m, cache)
    holds_at = [q for q in q_grid if lhs.evaluate(q) <= rhs.evaluate(q)]
    return RatioBoundResult(lhs, rhs, holds_at)


def parameters_roundtrip(params: ModelParameters) -> dict:
    """Report the parameter chain q -> delta -> boundary field -> beta.

    Includes the closure checks q^2 = exp(-beta) and the inversion
    delta -> q, both as absolute errors in float arithmetic.
    """
    if not 0 < params.q < 1:
        raise DomainError(f"q must lie strictly in (0, 1), got {params.q}")
    q = float(params.q)
    return {
        "q": q,
        "delta": float(params.delta),
        "delta_excess": float(params.delta) - 1.0,
        "boundary_field": params.boundary_field,
        "beta": params.beta,
        "q_squared_vs_exp_minus_beta": abs(q * q - math.exp(-params.beta)),
        "q_roundtrip_error": abs(params.q_from_delta() - q),
    }
