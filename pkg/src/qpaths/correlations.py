"""Exact spin correlation probabilities, their closed-form upper bounds, the
window fluctuation distribution, and an exact path sampler.

Spin configurations and paths are in bijection: site x of the chain carries a
down spin exactly when step x of the path is horizontal.  Every probability
here is therefore a ratio of weighted path sums and is returned as a
:class:`~qpaths.qpoly.QRational`, exact in q.  Joint probabilities are
computed by cutting the path on the anti-diagonal through each constrained
site and summing products of boxed partition functions over the admissible
crossing points; the cut factorization makes the nested sums unambiguous and
is tested against brute-force configuration sums.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DomainError, InconsistentQuery, RangeError
from .partition import SectorSpec, ZCache, z_cached, z_generalized
from .paths import DOWN, UP, BoxSpec, Path
from .qpoly import QPoly, QRational, Scalar

SPIN_DOWN = "down"
SPIN_UP = "up"


@dataclass(frozen=True)
class CorrelationQuery:
    """Spin assignments at strictly increasing sites inside a sector."""

    sector: SectorSpec
    sites: tuple[int, ...]
    spins: tuple[str, ...]

    def __post_init__(self):
        if len(self.sites) != len(self.spins) or not self.sites:
            raise ValueError("need one spin per site and at least one site")
        if any(s not in (SPIN_DOWN, SPIN_UP) for s in self.spins):
            raise ValueError(f"spins must be '{SPIN_DOWN}' or '{SPIN_UP}'")
        if any(b <= a for a, b in zip(self.sites, self.sites[1:])):
            raise ValueError("sites must be strictly increasing")
        if self.sites[0] < 1 or self.sites[-1] > self.sector.length:
            raise ValueError(f"sites must lie in [1, {self.sector.length}]")

    @classmethod
    def build(cls, n: int, m: int, assignments: Iterable[tuple[int, str]]) -> CorrelationQuery:
        pairs = sorted(assignments)
        sites = tuple(x for x, _ in pairs)
        spins = tuple(s for _, s in pairs)
        return cls(SectorSpec(n, m), sites, spins)

    @property
    def alphas(self) -> tuple[int, ...]:
        """1 for each constrained down spin, 0 for up."""
        return tuple(1 if s == SPIN_DOWN else 0 for s in self.spins)

    @property
    def down_count(self) -> int:
        return sum(self.alphas)

    def interface_distances(self) -> tuple[int, ...]:
        """(x_k - n) for each constrained *down* site, 0 for up sites."""
        n = self.sector.n
        return tuple((x - n) * a for x, a in zip(self.sites, self.alphas))


# -- single-point and few-point probabilities --------------------------------


def point_prob(n: int, m: int, x: int, y: int, cache: Optional[ZCache] = None) -> QRational:
    """Probability that a path from the origin to (n, m) passes through (x, y).

    Equals q^(2(x+y)(n-x)) * Z(x,y) * Z(n-x, m-y) / Z(n,m).
    """
    if not (0 <= x <= n and 0 <= y <= m):
        raise RangeError(f"point ({x},{y}) outside the box (0,0;{n},{m})")
    num = (z_cached(x, y, cache) * z_cached(n - x, m - y, cache)).shift(2 * (x + y) * (n - x))
    return QRational(num, z_cached(n, m, cache))


def _crossing_step(x: int, spin: str, j: int) -> tuple[tuple[int, int], tuple[int, int], int]:
    """Geometry of the constrained step at site x when j of the first x steps
    are horizontal: (start point, end point, weight exponent of the step)."""
    if spin == SPIN_DOWN:
        return (j - 1, x - j), (j, x - j), 2 * x
    return (j, x - j - 1), (j, x - j), 0


def spin_down_prob(n: int, m: int, x: int, cache: Optional[ZCache] = None) -> QRational:
    """Exact probability that the spin at site x is down.

    Sums, over all lattice points (j, x-j) on the diagonal through x, the
    weight of paths whose x-th step is the horizontal bond into (j, x-j).
    """
    if not 1 <= x <= n + m:
        raise RangeError(f"site {x} outside [1, {n + m}]")
    num = QPoly.zero()
    for j in range(max(1, x - m), min(n, x) + 1):
        head = z_cached(j - 1, x - j, cache)
        tail = z_generalized(BoxSpec(j, x - j, n, m), cache)
        num = num + (head * tail).shift(2 * x)
    return QRational(num, z_cached(n, m, cache))


def spin_up_prob(n: int, m: int, x: int, cache: Optional[ZCache] = None) -> QRational:
    """Exact probability that the spin at site x is up (1 - down)."""
    return spin_down_prob(n, m, x, cache).complement()


def spin_down_bound(n: int, m: int, x: int, q: Scalar) -> Scalar:
    """Upper bound q^(2(x-n)) (1-q^(2n)) / (1-q^(2(n+m))) on the down probability.

    Claimed for sites at or beyond the interface (see ``site_bound_regime``).
    """
    if n + m < 1:
        raise DomainError("bound needs a non-empty chain")
    return q ** (2 * (x - n)) * (1 - q ** (2 * n)) / (1 - q ** (2 * (n + m)))


def spin_up_bound(n: int, m: int, x: int, q: Scalar) -> Scalar:
    """Upper bound (1-q^(2m)) / (1-q^(2(n+m))) on the up probability."""
    if n + m < 1:
        raise DomainError("bound needs a non-empty chain")
    return (1 - q ** (2 * m)) / (1 - q ** (2 * (n + m)))


def pair_down_up_prob(n: int, m: int, x: int, cache: Optional[ZCache] = None) -> QRational:
    """Exact probability of a down spin at x followed by an up spin at x+1."""
    if not 1 <= x < n + m:
        raise RangeError(f"pair site {x} outside [1, {n + m - 1}]")
    num = QPoly.zero()
    for j in range(max(1, x + 1 - m), min(n, x) + 1):
        head = z_cached(j - 1, x - j, cache)
        tail = z_generalized(BoxSpec(j, x - j + 1, n, m), cache)
        num = num + (head * tail).shift(2 * x)
    return QRational(num, z_cached(n, m, cache))


def pair_down_up_bound(n: int, m: int, x: int, q: Scalar) -> Scalar:
    """Upper bound on the adjacent down-up probability:
    q^(2(x-n)) * (1-q^(2m))/(1-q^(2n)) * (1-q^(2L))/(1-q^(2(L-1)))."""
    if n < 1 or n + m < 2:
        raise DomainError("bound needs n >= 1 and at least two sites")
    ell = n + m
    return (
        q ** (2 * (x - n))
        * (1 - q ** (2 * m))
        / (1 - q ** (2 * n))
        * (1 - q ** (2 * ell))
        / (1 - q ** (2 * (ell - 1)))
    )


# -- multi-point probabilities ------------------------------------------------


def multipoint_prob(query: CorrelationQuery, cache: Optional[ZCache] = None) -> QRational:
    """Exact joint probability of the queried spin assignment.

    Cuts the path at the diagonal through each constrained site, constrains
    the crossing step's direction there, and sums products of boxed partition
    functions over all admissible crossing points.  Positional infeasibility
    yields an exact zero; impossible global counts raise InconsistentQuery.
    """
    n, m = query.sector.n, query.sector.m
    if query.down_count > n:
        raise InconsistentQuery(f"{query.down_count} down spins requested but sector has n={n}")
    if len(query.sites) - query.down_count > m:
        raise InconsistentQuery(
            f"{len(query.sites) - query.down_count} up spins requested but sector has m={m}"
        )
    states: dict[tuple[int, int], QPoly] = {}
    for k, (x, spin) in enumerate(zip(query.sites, query.spins)):
        new_states: dict[tuple[int, int], QPoly] = {}
        for j in range(n + 1):
            start, end, exp = _crossing_step(x, spin, j)
            if start[0] < 0 or start[1] < 0 or end[0] > n or end[1] > m:
                continue
            if k == 0:
                contrib = z_cached(start[0], start[1], cache).shift(exp)
            else:
                contrib = QPoly.zero()
                for prev, acc in states.items():
                    if prev[0] <= start[0] and prev[1] <= start[1]:
                        seg = z_generalized(BoxSpec(prev[0], prev[1], start[0], start[1]), cache)
                        contrib = contrib + acc * seg
                contrib = contrib.shift(exp)
            if not contrib.is_zero:
                new_states[end] = new_states.get(end, QPoly.zero()) + contrib
        states = new_states
    num = QPoly.zero()
    for end, acc in states.items():
        num = num + acc * z_generalized(BoxSpec(end[0], end[1], n, m), cache)
    return QRational(num, z_cached(n, m, cache))


def exp_bound(query: CorrelationQuery, q: Scalar) -> Scalar:
    """The exponential bound q^(v(v-1) + 2*sum of down-spin interface distances).

    v is the number of constrained down spins.  Claimed for sites strictly
    beyond the interface (see ``multipoint_bound_regime``).
    """
    v = query.down_count
    exponent = v * (v - 1) + 2 * sum(query.interface_distances())
    return q**exponent


def site_bound_regime(n: int, m: int, x: int) -> bool:
    """Where the single-site bounds are claimed: x >= n, x >= m."""
    return x >= n and x >= m and x <= n + m


def pair_bound_regime(n: int, m: int, x: int) -> bool:
    """Where the adjacent-pair bound is claimed: x >= n, x >= m, x < n + m."""
    return x >= n and x >= m and x < n + m


def multipoint_bound_regime(query: CorrelationQuery) -> bool:
    """Where the exponential bound is claimed: every site strictly beyond n and m."""
    n, m = query.sector.n, query.sector.m
    return all(x > n and x > m for x in query.sites)


# -- window fluctuations -------------------------------------------------------


@dataclass(frozen=True)
class FluctuationQuery:
    """Total spin over a centered window of even length L in the balanced
    sector of an even chain of length N."""

    N: int
    L: int

    def __post_init__(self):
        if self.N <= 0 or self.N % 2 or self.L <= 0 or self.L % 2 or self.L > self.N:
            raise ValueError(f"need even 0 < L <= N, got N={self.N}, L={self.L}")

    @property
    def sector(self) -> SectorSpec:
        return SectorSpec(self.N // 2, self.N // 2)

    @property
    def window(self) -> tuple[int, int]:
        """Inclusive site range [(N-L)/2 + 1, (N+L)/2]."""
        return ((self.N - self.L) // 2 + 1, (self.N + self.L) // 2)


def fluctuation_distribution(
    fq: FluctuationQuery, cache: Optional[ZCache] = None
) -> dict[int, QRational]:
    """Exact distribution of the window spin F = (#up - #down)/2.

    With d down spins in the window, F = L/2 - d.  The weight of {d downs in
    the window} factors over the two cuts at the window edges into a sum over
    the crossing points of products of three boxed partition functions.
    Covers every integer value in [-L/2, L/2]; impossible values get an exact
    zero numerator.
    """
    n = m = fq.N // 2
    t1 = (fq.N - fq.L) // 2
    t2 = (fq.N + fq.L) // 2
    den = z_cached(n, m, cache)
    dist: dict[int, QRational] = {}
    for d in range(fq.L + 1):
        num = QPoly.zero()
        for a in range(min(n, t1) + 1):
            mid_end = (a + d, t2 - a - d)
            if mid_end[0] > n or mid_end[1] > m:
                continue
            head = z_cached(a, t1 - a, cache)
            mid = z_generalized(BoxSpec(a, t1 - a, mid_end[0], mid_end[1]), cache)
            tail = z_generalized(BoxSpec(mid_end[0], mid_end[1], n, m), cache)
            num = num + head * mid * tail
        dist[fq.L // 2 - d] = QRational(num, den)
    return dict(sorted(dist.items()))


@dataclass(frozen=True)
class TailBound:
    """Closed-form tail bound on Prob(F = l) for l >= 1:

        q^(l(l-1)) * (1/l!) * [q^(L+1)/(1-q^2)]^l * exp[q^(L+3)/(1-q^2)]
    """

    q: Scalar
    L: int
    l: int

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise DomainError(f"q must lie strictly in (0, 1), got {self.q}")
        if self.l < 1:
            raise DomainError(f"tail bound needs l >= 1, got {self.l}")

    @property
    def value(self) -> float:
        q = float(self.q)
        bracket = q ** (self.L + 1) / (1 - q * q)
        return (
            q ** (self.l * (self.l - 1))
            / math.factorial(self.l)
            * bracket**self.l
            * math.exp(q ** (self.L + 3) / (1 - q * q))
        )

    def rational_lower(self, terms: int = 16) -> Fraction:
        """A certified rational lower bound (exp replaced by a truncated
        series), usable for exact <= comparisons against probabilities."""
        q = Fraction(self.q)
        bracket = q ** (self.L + 1) / (1 - q * q)
        t = q ** (self.L + 3) / (1 - q * q)
        exp_lower = sum(t**k / math.factorial(k) for k in range(terms))
        return q ** (self.l * (self.l - 1)) / math.factorial(self.l) * bracket**self.l * exp_lower


def tail_bound(q: Scalar, L: int, l: int) -> float:
    """Float value of :class:`TailBound`."""
    return TailBound(q, L, l).value


# -- exact sampling -------------------------------------------------------------


def _bernoulli_exact(rng: random.Random, p: Fraction, max_bits: int = 256) -> bool:
    """Exact Bernoulli(p) draw by lazy binary-digit comparison.

    Compares a uniform bit stream with the binary expansion of p, consuming
    an expected two bits.  The max_bits cutoff bounds the resolution at
    2^-max_bits, far below any statistical test's sensitivity.
    """
    num, den = p.numerator, p.denominator
    if num <= 0:
        return False
    if num >= den:
        return True
    for _ in range(max_bits):
        num *= 2
        digit, num = divmod(num, den)
        bit = rng.getrandbits(1)
        if bit != digit:
            return bit < digit
    return False


class PathSampler:
    """Draws monotone paths to (n, m) exactly from the weight distribution
    w(p)/Z(n, m).

    Walks backwards from (n, m): the last step was vertical with probability
    Z(n, m-1)/Z(n, m), horizontal with probability q^(2(n+m)) Z(n-1, m)/Z(n, m)
    (the two summands of the corner recursion).  Thresholds are exact
    rationals compared against a deterministic seeded bit stream, so the
    target distribution is exact and runs are reproducible.  Each sampler
    owns its random stream; concurrent sampling needs independent seeds.
    """

    def __init__(self, n: int, m: int, q: Fraction, seed: int, cache: Optional[ZCache] = None):
        if n < 0 or m < 0:
            raise ValueError(f"negative sector ({n},{m})")
        q = Fraction(q)
        if not 0 < q < 1:
            raise DomainError(f"q must lie strictly in (0, 1), got {q}")
        self.n = n
        self.m = m
        self.q = q
        self._rng = random.Random(seed)
        self._cache = cache
        self._zvals: dict[tuple[int, int], Fraction] = {}

    def _z_at(self, i: int, j: int) -> Fraction:
        val = self._zvals.get((i, j))
        if val is None:
            val = Fraction(z_cached(i, j, self._cache).evaluate(self.q))
            self._zvals[(i, j)] = val
        return val

    def draw(self) -> Path:
        i, j = self.n, self.m
        reversed_steps = []
        while i > 0 and j > 0:
            p_vertical = self._z_at(i, j - 1) / self._z_at(i, j)
            if _bernoulli_exact(self._rng, p_vertical):
                reversed_steps.append(UP)
                j -= 1
            else:
                reversed_steps.append(DOWN)
                i -= 1
        reversed_steps.extend(DOWN * i + UP * j)
        return Path((0, 0), "".join(reversed(reversed_steps)))


def sample_path(n: int, m: int, q: Fraction, seed: int, cache: Optional[ZCache] = None) -> Path:
    """One exact draw from w(p)/Z(n, m), deterministic in the seed."""
    return PathSampler(n, m, q, seed, cache).draw()
