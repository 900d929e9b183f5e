"""Exact counting tables and flux predictions.

The stationary flux of the stochastic rules depends on a sector (or on one
recurrent set) only through N(k1, k2), the number of raw configurations with
k1 windows 1110 and k2 windows 010. This module builds those tables three
ways (closed form, cyclic transfer-matrix DP, and per-set enumeration) and
evaluates the resulting flux predictions, including the deterministic limit.

Closed form: a configuration with at least one empty site decomposes into B
maximal particle blocks separated by B gaps. With d = m110 blocks of length
at least two, k1 of them of length at least three, and k2 = B - d isolated
particles, the raw count is

    N = L/B * C(B, k2) * C(d, k1) * C(A + k1 - 1, k1 - 1) * C(m0 - 1, B - 1)

where A = m1 - k2 - 2d - k1 is the particle surplus spread over the k1 long
blocks and m0 = L - m1 (the leading L/B counts anchor positions per marked
block arrangement; the ratio is always an integer).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .ensemble import OmegaSet, sector_is_feasible
from .errors import InfeasibleSectorError, InvalidArgumentError
from .markov import class_weight_exponents


@dataclass(frozen=True)
class PartitionTable:
    """Raw-configuration counts of a sector or set, indexed by (k1, k2)."""

    L: int
    m1: int
    m110: int
    scope: str
    counts: tuple[tuple[tuple[int, int], int], ...]

    @property
    def kmax(self) -> int:
        return kmax(self.L, self.m1, self.m110)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.counts)

    def total(self) -> int:
        return sum(count for _, count in self.counts)


@dataclass(frozen=True)
class FluxPoint:
    L: int
    m1: int
    m110: int
    alpha: object
    q_v: object
    q_u: object


@dataclass(frozen=True)
class LimitRow:
    alpha: float
    q_v: float
    flux_gap: float
    deterministic_flux: float
    deviation: float


@dataclass(frozen=True)
class LimitReport:
    L: int
    m1: int
    m110: int
    scope: str
    rows: tuple[LimitRow, ...]
    exact_limit_gap: Fraction


def kmax(L: int, m1: int, m110: int) -> int:
    """Largest k1 + k2 a configuration of the sector can carry."""
    if not (0 <= m1 <= L) or m110 < 0 or 2 * m110 > m1 or m1 > L - m110:
        if not (m110 == 0 and m1 in (0, L)):
            raise InfeasibleSectorError(
                f"sector ({L}, {m1}, {m110}) violates the block bound"
            )
    return min(L - m1, m1 - 2 * m110)


def _finish_table(L, m1, m110, scope, counts: dict[tuple[int, int], int]):
    bound = kmax(L, m1, m110)
    assert all(k1 + k2 <= bound for k1, k2 in counts), "count beyond the shell bound"
    ordered = tuple(sorted((key, counts[key]) for key in counts if counts[key]))
    return PartitionTable(L, m1, m110, scope, ordered)


def partition_omega(omega: OmegaSet) -> PartitionTable:
    """Counts over one recurrent set, classes weighted by orbit size."""
    counts: dict[tuple[int, int], int] = {}
    for cls in omega.members:
        key = class_weight_exponents(cls)
        counts[key] = counts.get(key, 0) + cls.orbit_size
    return _finish_table(omega.L, omega.m1, omega.m110, "omega", counts)


def partition_sector(L: int, m1: int, m110: int) -> PartitionTable:
    """Sector-wide counts by block/gap composition counting (closed form)."""
    if not sector_is_feasible(L, m1, m110):
        return PartitionTable(L, m1, m110, "sector", ())
    counts: dict[tuple[int, int], int] = {}
    if m1 == 0 or m1 == L:
        counts[(0, 0)] = 1
        return _finish_table(L, m1, m110, "sector", counts)
    zeros = L - m1
    d = m110
    for k2 in range(0, m1 - 2 * d + 1):
        blocks = d + k2
        if blocks < 1 or blocks > zeros:
            continue
        for k1 in range(0, d + 1):
            surplus = m1 - k2 - 2 * d - k1
            if surplus < 0:
                continue
            if k1 == 0:
                spread = 1 if surplus == 0 else 0
            else:
                spread = comb(surplus + k1 - 1, k1 - 1)
            if spread == 0:
                continue
            arrangements = (
                comb(blocks, k2) * comb(d, k1) * spread * comb(zeros - 1, blocks - 1)
            )
            if arrangements == 0:
                continue
            total = L * arrangements
            assert total % blocks == 0, "marked-block count must divide evenly"
            counts[(k1, k2)] = counts.get((k1, k2), 0) + total // blocks
    return _finish_table(L, m1, m110, "sector", counts)


_WINDOW_STATS = tuple(
    (
        (code >> 3) & 1,
        1 if (code >> 1) == 0b110 else 0,
        1 if code == 0b1110 else 0,
        1 if (code >> 1) == 0b010 else 0,
    )
    for code in range(16)
)


def partition_sector_dp(L: int, m1: int, m110: int) -> PartitionTable:
    """Sector-wide counts by cyclic transfer-matrix DP.

    State is the last three bits; each appended bit completes one 4-site
    window, and the three seam windows are closed against the fixed first
    three bits. Slower than the closed form but structurally independent
    of it, which is what makes the pair a useful cross-check.
    """
    if not sector_is_feasible(L, m1, m110):
        return PartitionTable(L, m1, m110, "sector", ())
    if L < 4:
        return _partition_by_scan(L, m1, m110)
    bound = kmax(L, m1, m110)
    counts: dict[tuple[int, int], int] = {}
    for context in range(8):
        # dp key: (last three bits, m1 so far, m110 so far, k1, k2)
        start = (context, (context >> 2) + ((context >> 1) & 1) + (context & 1), 0, 0, 0)
        dp = {start: 1}
        for position in range(3, L):
            remaining = L - position
            nxt: dict[tuple[int, int, int, int, int], int] = {}
            for (state, ones, pairs, k1, k2), ways in dp.items():
                for bit in (0, 1):
                    window = (state << 1) | bit
                    d1, d110, d1110, d010 = _WINDOW_STATS[window]
                    key = (
                        window & 0b111,
                        ones + bit,
                        pairs + d110,
                        k1 + d1110,
                        k2 + d010,
                    )
                    if key[1] > m1 or key[1] + remaining - 1 < m1:
                        continue
                    if key[2] > m110 or key[3] > m110 or key[3] + key[4] > bound:
                        continue
                    nxt[key] = nxt.get(key, 0) + ways
            dp = nxt
        for (state, ones, pairs, k1, k2), ways in dp.items():
            seam = (state << 3) | context
            for shift in (3, 2, 1):
                window = (seam >> (shift - 1)) & 0b1111
                _, d110, d1110, d010 = _WINDOW_STATS[window]
                pairs += d110
                k1 += d1110
                k2 += d010
            if ones == m1 and pairs == m110 and k1 + k2 <= bound:
                counts[(k1, k2)] = counts.get((k1, k2), 0) + ways
    return _finish_table(L, m1, m110, "sector", counts)


def _partition_by_scan(L: int, m1: int, m110: int) -> PartitionTable:
    from .ensemble import _ring_stats

    mask = (1 << L) - 1
    counts: dict[tuple[int, int], int] = {}
    for x in range(1 << L):
        ones, pairs, k1, k2 = _ring_stats(x, L, mask)
        if ones == m1 and pairs == m110:
            counts[(k1, k2)] = counts.get((k1, k2), 0) + 1
    return _finish_table(L, m1, m110, "sector", counts)


def q_theory(table: PartitionTable, alpha) -> FluxPoint:
    """Stationary flux prediction from a partition table.

    Weights are rescaled by (1-alpha)^kmax so the evaluation stays finite as
    alpha approaches one; exact for Fraction alpha.
    """
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie strictly between 0 and 1")
    if not table.counts:
        raise InfeasibleSectorError(
            f"sector ({table.L}, {table.m1}, {table.m110}) has no configurations"
        )
    bound = table.kmax
    numerator = 0 * alpha
    denominator = 0 * alpha
    for (k1, k2), count in sorted(
        table.counts, key=lambda item: -(item[0][0] + item[0][1])
    ):
        weight = count * alpha**k2 * (1 - alpha) ** (bound - k1 - k2)
        numerator = numerator + (alpha * k1 + k2) * weight
        denominator = denominator + weight
    q_v = numerator / (denominator * table.L)
    if isinstance(alpha, Fraction):
        q_u = Fraction(table.m1, table.L) - q_v
    else:
        q_u = table.m1 / table.L - q_v
    return FluxPoint(table.L, table.m1, table.m110, alpha, q_v, q_u)


def q_deterministic(rho1, rho110):
    """Deterministic-limit flux max(2*rho1 - 1, 2*rho110) on its domain."""
    if not 0 <= rho1 <= 1 or rho110 < 0:
        raise InvalidArgumentError("densities must lie in the unit interval")
    if 2 * rho110 > rho1 or rho1 > 1 - rho110:
        raise InvalidArgumentError(
            f"densities (rho1={rho1}, rho110={rho110}) violate the block bound"
        )
    return max(2 * rho1 - 1, 2 * rho110)


def dominant_flux_gap(table: PartitionTable) -> Fraction:
    """Exact alpha -> 1 limit of rho1 - Q using only the extremal shell.

    Restricting the table to k1 + k2 = kmax and sending alpha to one gives
    rho1 - kmax/L; the shell must be populated, otherwise the declared kmax
    is not attained and the limit formula would be wrong.
    """
    bound = table.kmax
    shell = [(key, count) for key, count in table.counts if sum(key) == bound]
    if not shell:
        raise InvalidArgumentError(
            f"no configuration attains kmax={bound} in this table"
        )
    moved = sum((k1 + k2) * count for (k1, k2), count in shell)
    weight = sum(count for _, count in shell)
    return Fraction(table.m1, table.L) - Fraction(moved, weight * table.L)


def limit_check(
    L: int,
    m1: int,
    m110: int,
    alphas=(0.9, 0.99, 0.999, 0.9999),
    table: PartitionTable | None = None,
) -> LimitReport:
    """Convergence of rho1 - Q toward the deterministic flux as alpha -> 1."""
    if table is None:
        table = partition_sector(L, m1, m110)
    target = q_deterministic(Fraction(m1, L), Fraction(m110, L))
    rows = []
    for alpha in alphas:
        point = q_theory(table, alpha)
        gap = point.q_u
        rows.append(
            LimitRow(
                alpha=alpha,
                q_v=float(point.q_v),
                flux_gap=float(gap),
                deterministic_flux=float(target),
                deviation=float(gap - target),
            )
        )
    return LimitReport(
        L, m1, m110, table.scope, tuple(rows), dominant_flux_gap(table)
    )


@lru_cache(maxsize=None)
def sector_table_cached(L: int, m1: int, m110: int) -> PartitionTable:
    return partition_sector(L, m1, m110)
