"""Self-verification suites: every structural identity and inequality the
library relies on, run as exact checks with counterexample reporting.

Identities are checked as polynomial equalities (cross-multiplied where the
source relation is a ratio, so no division is ever needed); inequalities are
checked pointwise at exact rational q values.  Inequality checks distinguish
the regime where the bound is claimed (failures there are hard) from outside
it (failures are informational only).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InconsistentQuery
from .correlations import (
    SPIN_DOWN,
    SPIN_UP,
    CorrelationQuery,
    FluctuationQuery,
    TailBound,
    exp_bound,
    fluctuation_distribution,
    multipoint_bound_regime,
    multipoint_prob,
    pair_bound_regime,
    pair_down_up_bound,
    pair_down_up_prob,
    site_bound_regime,
    spin_down_bound,
    spin_down_prob,
    spin_up_bound,
    spin_up_prob,
)
from .partition import (
    DEFAULT_Q_GRID,
    SectorSpec,
    ZCache,
    markov_decompose,
    ratio_bound_check,
    z_cached,
    z_generalized,
)
from .paths import BoxSpec, enumerate_paths, oracle_partition
from .qpoly import QPoly

_MAX_REPORTED_FAILURES = 5


@dataclass
class IdentityRecord:
    """Outcome of one identity or bound check over many instances."""

    name: str
    detail: str
    instances: int = 0
    failures: list = field(default_factory=list)
    informational: bool = False

    def check(self, ok: bool, instance: dict):
        self.instances += 1
        if not ok:
            self.failures.append(instance)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "detail": self.detail,
            "instances": self.instances,
            "failure_count": len(self.failures),
            "failures": [
                {k: str(v) for k, v in f.items()} for f in self.failures[:_MAX_REPORTED_FAILURES]
            ],
            "informational": self.informational,
        }


@dataclass
class VerificationReport:
    records: list[IdentityRecord]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records if not r.informational)

    def to_json_obj(self) -> dict:
        return {
            "passed": self.passed,
            "records": [r.to_json_obj() for r in sorted(self.records, key=lambda r: r.name)],
        }


def _sectors(max_chain: int):
    for total in range(max_chain + 1):
        for n in range(total + 1):
            yield n, total - n


def _random_box(rng: random.Random, max_total: int) -> BoxSpec:
    n = rng.randint(0, max_total)
    m = rng.randint(0, max_total - n)
    return BoxSpec(rng.randint(0, n), rng.randint(0, m), n, m)


def run_identity_suite(
    max_nm: int = 12,
    enumeration_limit: int = 10,
    random_instances: int = 100,
    seed: int = 0,
    cache: Optional[ZCache] = None,
) -> VerificationReport:
    """Exact structural identities of the partition functions and path space."""
    rng = random.Random(seed)
    cache = ZCache() if cache is None else cache
    one = QPoly.one()

    def mono(k):
        return QPoly.monomial(k)

    closed_enum = IdentityRecord(
        "closed-form-vs-enumeration", "Z(n,m) equals the brute-force path sum"
    )
    for n, m in _sectors(enumeration_limit):
        closed_enum.check(
            z_cached(n, m, cache) == oracle_partition(BoxSpec.sector(n, m)), {"n": n, "m": m}
        )

    box_enum = IdentityRecord(
        "box-translation-vs-enumeration",
        "Z(n0,m0;n,m) = q^(2(n0+m0)(n-n0)) Z(n-n0,m-m0) equals the brute-force box sum",
    )
    for _ in range(random_instances):
        box = _random_box(rng, enumeration_limit)
        box_enum.check(
            z_generalized(box, cache) == oracle_partition(box),
            {"box": (box.n0, box.m0, box.n, box.m)},
        )

    pascal_upper = IdentityRecord(
        "pascal-upper-corner", "Z(n,m) = Z(n,m-1) + q^(2(n+m)) Z(n-1,m)"
    )
    pascal_lower = IdentityRecord(
        "pascal-lower-corner", "Z(n,m) = q^(2n) Z(n-1,m) + q^(2n) Z(n,m-1)"
    )
    for n in range(1, max_nm + 1):
        for m in range(1, max_nm + 1):
            z = z_cached(n, m, cache)
            left = z_cached(n, m - 1, cache)
            up = z_cached(n - 1, m, cache)
            pascal_upper.check(z == left + up.shift(2 * (n + m)), {"n": n, "m": m})
            pascal_lower.check(z == (up + left).shift(2 * n), {"n": n, "m": m})

    markov = IdentityRecord(
        "markov-cut-factorization",
        "Z(box) = sum over x+y=z of Z(n0,m0;x,y) Z(x,y;n,m) for any admissible cut z",
    )
    for _ in range(random_instances):
        box = _random_box(rng, max_nm)
        z = rng.randint(box.n0 + box.m0, box.n + box.m)
        total = QPoly.zero()
        for term in markov_decompose(box, z, cache):
            total = total + term.left * term.right
        markov.check(
            total == z_generalized(box, cache), {"box": (box.n0, box.m0, box.n, box.m), "z": z}
        )

    translation = IdentityRecord(
        "translation-shift",
        "Z(n0,m0;n,m) = q^(2(x+y)(n-n0)) Z(n0-x,m0-y;n-x,m-y) for shifts (x,y)",
    )
    for _ in range(random_instances):
        box = _random_box(rng, max_nm)
        x = rng.randint(0, box.n0)
        y = rng.randint(0, box.m0)
        shifted = BoxSpec(box.n0 - x, box.m0 - y, box.n - x, box.m - y)
        translation.check(
            z_generalized(box, cache)
            == z_generalized(shifted, cache).shift(2 * (x + y) * box.width),
            {"box": (box.n0, box.m0, box.n, box.m), "shift": (x, y)},
        )

    transpose = IdentityRecord(
        "transpose-symmetry", "q^(m(m+1)) Z(n,m) = q^(n(n+1)) Z(m,n)"
    )
    for n, m in _sectors(max_nm):
        transpose.check(
            z_cached(n, m, cache).shift(m * (m + 1)) == z_cached(m, n, cache).shift(n * (n + 1)),
            {"n": n, "m": m},
        )

    box_transpose = IdentityRecord(
        "box-transpose-symmetry",
        "q^((n0+m)(n0+m+1)) Z(n0,m0;n,m) = q^((n+m0)(n+m0+1)) Z(m0,n0;m,n)",
    )
    for _ in range(random_instances):
        box = _random_box(rng, max_nm)
        lhs = z_generalized(box, cache).shift((box.n0 + box.m) * (box.n0 + box.m + 1))
        rhs = z_generalized(BoxSpec(box.m0, box.n0, box.m, box.n), cache).shift(
            (box.n + box.m0) * (box.n + box.m0 + 1)
        )
        box_transpose.check(lhs == rhs, {"box": (box.n0, box.m0, box.n, box.m)})

    corner_split = IdentityRecord(
        "corner-split", "Z(n,m) = q^2 Z(1,0;n,m) + Z(0,1;n,m)"
    )
    for n in range(1, max_nm + 1):
        for m in range(1, max_nm + 1):
            lhs = z_cached(n, m, cache)
            rhs = z_generalized(BoxSpec(1, 0, n, m), cache).shift(2) + z_generalized(
                BoxSpec(0, 1, n, m), cache
            )
            corner_split.check(lhs == rhs, {"n": n, "m": m})

    neighbor = IdentityRecord(
        "neighbor-ratio",
        "q^(2n)(1-q^(2(n+m))) Z(n-1,m) = (1-q^(2n)) Z(n,m) and "
        "(1-q^(2(n+m))) Z(n,m-1) = (1-q^(2m)) Z(n,m)",
    )
    diagonal = IdentityRecord(
        "diagonal-ratio",
        "q^(2n)(1-q^(2(L-1)))(1-q^(2L)) Z(n-1,m-1) = (1-q^(2n))(1-q^(2m)) Z(n,m)",
    )
    for n in range(1, max_nm + 1):
        for m in range(1, max_nm + 1):
            z = z_cached(n, m, cache)
            ell = n + m
            horiz = (z_cached(n - 1, m, cache) * (one - mono(2 * ell))).shift(2 * n) == z * (
                one - mono(2 * n)
            )
            vert = z_cached(n, m - 1, cache) * (one - mono(2 * ell)) == z * (one - mono(2 * m))
            neighbor.check(horiz and vert, {"n": n, "m": m})
            diag = (
                z_cached(n - 1, m - 1, cache) * (one - mono(2 * (ell - 1))) * (one - mono(2 * ell))
            ).shift(2 * n) == z * (one - mono(2 * n)) * (one - mono(2 * m))
            diagonal.check(diag, {"n": n, "m": m})

    window = IdentityRecord(
        "degree-window",
        "Z(n,m) has positive coefficients, even exponents in [n(n+1), n(n+1)+2nm]",
    )
    for n, m in _sectors(max_nm):
        z = z_cached(n, m, cache)
        ok = (
            z.all_coefficients_positive()
            and z.has_even_exponents_only()
            and z.min_exponent() == n * (n + 1)
            and z.max_exponent() == n * (n + 1) + 2 * n * m
        )
        window.check(ok, {"n": n, "m": m})

    box_min = IdentityRecord(
        "box-min-exponent",
        "lowest power of Z(n0,m0;n,m) is (2(m0+1)+2n0)w + w(w-1) with w = n-n0",
    )
    for _ in range(random_instances):
        box = _random_box(rng, max_nm)
        w = box.width
        expected = (2 * (box.m0 + 1) + 2 * box.n0) * w + w * (w - 1)
        box_min.check(
            z_generalized(box, cache).min_exponent() == expected,
            {"box": (box.n0, box.m0, box.n, box.m)},
        )

    area_exp = IdentityRecord(
        "area-exponent", "weight exponent = n(n+1) + 2*area for every path from the origin"
    )
    area_sym = IdentityRecord(
        "area-complement-symmetry",
        "area(p) + area(parity(p)) = n*m = area(p) + area(reversed(p)); "
        "the combined map preserves the area and both maps are involutions",
    )
    for n, m in _sectors(min(enumeration_limit, max_nm)):
        for p in enumerate_paths(BoxSpec.sector(n, m)):
            area_exp.check(
                p.weight().min_exponent() == n * (n + 1) + 2 * p.area(),
                {"path": p.to_text()},
            )
            ft = p.parity().time_reversed()
            ok = (
                p.area() + p.parity().area() == n * m
                and p.area() + p.time_reversed().area() == n * m
                and ft.area() == p.area()
                and p.parity().parity() == p
                and p.time_reversed().time_reversed() == p
            )
            area_sym.check(ok, {"path": p.to_text()})

    return VerificationReport(
        [
            closed_enum,
            box_enum,
            pascal_upper,
            pascal_lower,
            markov,
            translation,
            transpose,
            box_transpose,
            corner_split,
            neighbor,
            diagonal,
            window,
            box_min,
            area_exp,
            area_sym,
        ]
    )


def run_bound_suite(
    max_chain: int = 8,
    q_grid: Sequence[Fraction] = DEFAULT_Q_GRID,
    seed: int = 0,
    out_of_regime_instances: int = 200,
    cache: Optional[ZCache] = None,
) -> VerificationReport:
    """Inequality checks at exact rational q: in-regime failures are hard,
    out-of-regime ones informational."""
    rng = random.Random(seed)
    cache = ZCache() if cache is None else cache
    q_grid = [Fraction(q) for q in q_grid]

    down_in = IdentityRecord(
        "down-spin-bound", "P(down at x) <= q^(2(x-n))(1-q^(2n))/(1-q^(2(n+m))) for x >= n, m"
    )
    down_out = IdentityRecord(
        "down-spin-bound-out-of-regime", down_in.detail + " (outside x >= n, m)",
        informational=True,
    )
    up_in = IdentityRecord(
        "up-spin-bound", "P(up at x) <= (1-q^(2m))/(1-q^(2(n+m))) for x >= n, m"
    )
    up_out = IdentityRecord(
        "up-spin-bound-out-of-regime", up_in.detail + " (outside x >= n, m)", informational=True
    )
    pair_in = IdentityRecord(
        "adjacent-pair-bound",
        "P(down at x, up at x+1) <= q^(2(x-n)) (1-q^(2m))/(1-q^(2n)) "
        "(1-q^(2L))/(1-q^(2(L-1))) for x >= n, m",
    )
    pair_out = IdentityRecord(
        "adjacent-pair-bound-out-of-regime", pair_in.detail + " (outside x >= n, m)",
        informational=True,
    )
    for n, m in _sectors(max_chain):
        if n + m < 1:
            continue
        for x in range(1, n + m + 1):
            down = spin_down_prob(n, m, x, cache)
            up = spin_up_prob(n, m, x, cache)
            rec_d = down_in if site_bound_regime(n, m, x) else down_out
            rec_u = up_in if site_bound_regime(n, m, x) else up_out
            for q in q_grid:
                rec_d.check(
                    down.evaluate(q) <= spin_down_bound(n, m, x, q), {"n": n, "m": m, "x": x, "q": q}
                )
                rec_u.check(
                    up.evaluate(q) <= spin_up_bound(n, m, x, q), {"n": n, "m": m, "x": x, "q": q}
                )
        if n < 1 or m < 1:
            continue
        for x in range(1, n + m):
            pair = pair_down_up_prob(n, m, x, cache)
            rec_p = pair_in if pair_bound_regime(n, m, x) else pair_out
            for q in q_grid:
                rec_p.check(
                    pair.evaluate(q) <= pair_down_up_bound(n, m, x, q),
                    {"n": n, "m": m, "x": x, "q": q},
                )

    multi_in = IdentityRecord(
        "multipoint-exponential-bound",
        "P(assignment with v downs) <= q^(v(v-1) + 2*sum of down distances to n) "
        "for all sites beyond n and m",
    )
    multi_out = IdentityRecord(
        "multipoint-exponential-bound-out-of-regime",
        multi_in.detail + " (sites anywhere, randomized)",
        informational=True,
    )
    for n, m in _sectors(max_chain):
        window = range(max(n, m) + 1, n + m + 1)
        for size in range(1, len(window) + 1):
            for sites in itertools.combinations(window, size):
                for spins in itertools.product((SPIN_DOWN, SPIN_UP), repeat=size):
                    query = CorrelationQuery(SectorSpec(n, m), sites, spins)
                    prob = multipoint_prob(query, cache)
                    for q in q_grid:
                        multi_in.check(
                            prob.evaluate(q) <= exp_bound(query, q),
                            {"n": n, "m": m, "sites": sites, "spins": spins, "q": q},
                        )
    for _ in range(out_of_regime_instances):
        n = rng.randint(0, max_chain)
        m = rng.randint(0, max_chain - n)
        if n + m < 1:
            continue
        size = rng.randint(1, min(3, n + m))
        sites = tuple(sorted(rng.sample(range(1, n + m + 1), size)))
        spins = tuple(rng.choice((SPIN_DOWN, SPIN_UP)) for _ in range(size))
        query = CorrelationQuery(SectorSpec(n, m), sites, spins)
        if multipoint_bound_regime(query):
            continue
        try:
            prob = multipoint_prob(query, cache)
        except InconsistentQuery:
            continue
        for q in q_grid:
            multi_out.check(
                prob.evaluate(q) <= exp_bound(query, q),
                {"n": n, "m": m, "sites": sites, "spins": spins, "q": q},
            )

    ratio = IdentityRecord(
        "partition-ratio-bound", "Z(n-v,m-w) <= q^(-2nv+v(v-1)) Z(n,m) on the q grid"
    )
    for n, m in _sectors(max_chain):
        for v in range(n + 1):
            for w in range(m + 1):
                result = ratio_bound_check(n, m, v, w, q_grid, cache)
                ratio.check(
                    len(result.holds_at) == len(q_grid), {"n": n, "m": m, "v": v, "w": w}
                )

    return VerificationReport(
        [down_in, down_out, up_in, up_out, pair_in, pair_out, multi_in, multi_out, ratio]
    )


def run_fluctuation_suite(
    max_N: int = 8,
    q_grid: Sequence[Fraction] = DEFAULT_Q_GRID,
    cache: Optional[ZCache] = None,
) -> VerificationReport:
    """Normalization, symmetry, zero mean, and the tail bound of the window
    spin distribution at desk scale."""
    cache = ZCache() if cache is None else cache
    q_grid = [Fraction(q) for q in q_grid]

    normalization = IdentityRecord(
        "fluctuation-normalization", "window spin probabilities sum to one exactly"
    )
    symmetry = IdentityRecord(
        "fluctuation-symmetry-mean", "P(F=l) = P(F=-l) and the mean is exactly zero"
    )
    tail = IdentityRecord(
        "fluctuation-tail-bound",
        "P(F=l) <= q^(l(l-1)) (1/l!) [q^(L+1)/(1-q^2)]^l exp[q^(L+3)/(1-q^2)] for l >= 1",
    )
    for N in range(2, max_N + 1, 2):
        for L in range(2, N + 1, 2):
            dist = fluctuation_distribution(FluctuationQuery(N, L), cache)
            den = next(iter(dist.values())).den
            total = QPoly.zero()
            mean = QPoly.zero()
            sym_ok = True
            for l, prob in dist.items():
                total = total + prob.num
                sym_ok = sym_ok and prob.num == dist[-l].num
                mean = mean + QPoly.monomial(0, l) * prob.num
            normalization.check(total == den, {"N": N, "L": L})
            symmetry.check(sym_ok and mean.is_zero, {"N": N, "L": L})
            for l, prob in dist.items():
                if l < 1:
                    continue
                for q in q_grid:
                    tail.check(
                        prob.evaluate(q) <= TailBound(q, L, l).rational_lower(),
                        {"N": N, "L": L, "l": l, "q": q},
                    )
    return VerificationReport([normalization, symmetry, tail])


def run_suites(
    suites: Sequence[str],
    max_nm: int = 12,
    enumeration_limit: int = 10,
    random_instances: int = 100,
    max_chain: int = 8,
    q_grid: Sequence[Fraction] = DEFAULT_Q_GRID,
    seed: int = 0,
    cache: Optional[ZCache] = None,
) -> VerificationReport:
    """Run the named suites ('identities', 'bounds', 'fluctuations', 'all')."""
    cache = ZCache() if cache is None else cache
    records: list[IdentityRecord] = []
    wanted = set(suites)
    if "all" in wanted:
        wanted = {"identities", "bounds", "fluctuations"}
    unknown = wanted - {"identities", "bounds", "fluctuations"}
    if unknown:
        raise ValueError(f"unknown suite(s): {sorted(unknown)}")
    if "identities" in wanted:
        records += run_identity_suite(max_nm, enumeration_limit, random_instances, seed, cache).records
    if "bounds" in wanted:
        records += run_bound_suite(max_chain, q_grid, seed, cache=cache).records
    if "fluctuations" in wanted:
        records += run_fluctuation_suite(min(max_chain, 8) * 2, q_grid, cache).records
    return VerificationReport(records)
