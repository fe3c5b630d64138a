"""Two-dimensional partition functions by reduction to the one-dimensional ones.

The 2D system places its N*M spins on M diagonals of N sites each; every
site on diagonal j (j = N .. N+M-1) carries occupation weight q^(2j).  The
grand-canonical generating function therefore factorizes,

    prod_{j=N}^{N+M-1} (1 + z q^(2j))^N = sum_k z^k Z2d(k, NM - k),

which yields three independent routes to Z2d: the multinomial reduction over
per-column down-spin counts, coefficient extraction from the product, and the
elementary symmetric polynomial of the site-weight multiset.  All three are
cross-checked exactly in the tests.
"""

from __future__ import annotations

import math
from typing import Optional

from .partition import ZCache, z_cached
from .qpoly import QPoly


def _check_shape(N: int, M: int):
    if N < 1 or M < 1:
        raise ValueError(f"need N, M >= 1, got N={N}, M={M}")


def compositions(N: int, M: int, k: int) -> list[tuple[int, ...]]:
    """All tuples (k_0, ..., k_M) with sum k_i = N and sum i*k_i = k.

    k_i counts the columns holding exactly i down spins.  The list is empty
    exactly when k is infeasible (k < 0 or k > N*M).
    """
    _check_shape(N, M)
    found: list[tuple[int, ...]] = []

    def descend(i: int, remaining_columns: int, remaining_weight: int, partial: list[int]):
        if i == 0:
            if remaining_weight == 0:
                found.append((remaining_columns, *reversed(partial)))
            return
        for k_i in range(min(remaining_columns, remaining_weight // i) + 1):
            partial.append(k_i)
            descend(i - 1, remaining_columns - k_i, remaining_weight - i * k_i, partial)
            partial.pop()

    if 0 <= k <= N * M:
        descend(M, N, k, [])
    return sorted(found, reverse=True)


def z2d_reduction(N: int, M: int, k: int, cache: Optional[ZCache] = None) -> QPoly:
    """Z2d(k, NM-k) as a multinomial sum of 1D partition function products:

        q^(2(N-1)k) * sum over compositions of N!/(k_0! ... k_M!) *
        prod_i Z(i, M-i)^(k_i)
    """
    _check_shape(N, M)
    if not 0 <= k <= N * M:
        raise ValueError(f"need 0 <= k <= {N * M}, got k={k}")
    total = QPoly.zero()
    for kj in compositions(N, M, k):
        coeff = math.factorial(N)
        for c in kj:
            coeff //= math.factorial(c)
        term = QPoly.monomial(0, coeff)
        for i, c in enumerate(kj):
            if c:
                term = term * z_cached(i, M - i, cache) ** c
        total = total + term
    return total.shift(2 * (N - 1) * k)


def z2d_product(N: int, M: int) -> list[QPoly]:
    """Coefficients (index k = total down spins) of the fugacity expansion of
    prod_{j=N}^{N+M-1} (1 + z q^(2j))^N.

    Each diagonal factor is expanded by the binomial theorem, then the M
    factors are convolved; entry k equals Z2d(k, NM-k).
    """
    _check_shape(N, M)
    coeffs = [QPoly.one()]
    for j in range(N, N + M):
        factor = [QPoly.monomial(2 * j * i, math.comb(N, i)) for i in range(N + 1)]
        new = [QPoly.zero()] * (len(coeffs) + N)
        for a, ca in enumerate(coeffs):
            if ca.is_zero:
                continue
            for b, cb in enumerate(factor):
                new[a + b] = new[a + b] + ca * cb
        coeffs = new
    return coeffs


def z2d_oracle(N: int, M: int, k: int) -> QPoly:
    """Independent check: Z2d(k, NM-k) is the k-th elementary symmetric
    polynomial of the NM site weights {q^(2j), multiplicity N each}."""
    _check_shape(N, M)
    if not 0 <= k <= N * M:
        raise ValueError(f"need 0 <= k <= {N * M}, got k={k}")
    esp = [QPoly.one()] + [QPoly.zero()] * k
    seen = 0
    for j in range(N, N + M):
        weight = QPoly.monomial(2 * j)
        for _ in range(N):
            seen += 1
            for i in range(min(seen, k), 0, -1):
                esp[i] = esp[i] + weight * esp[i - 1]
    return esp[k]
