"""Sector enumeration and decomposition into recurrent class sets.

The two conserved quantities split configuration space into sectors indexed
by (L, m1, m110): ring length, particle count, and count of particle blocks
of length at least two. Within a sector the stochastic dynamics acts on
rotation classes; the closed strongly connected components of that class
graph are the recurrent sets, everything else is transient.

Enumeration is exhaustive over 2^L bit patterns and is therefore capped at a
configurable ring length; the packed-integer fast path keeps the scan cheap
for the sizes the cap allows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .dynamics import STOCHASTIC_V, FluxRule, class_outcomes
from .errors import EnumerationBoundError, InvalidArgumentError
from .ring import OrbitClass, Ring

ENUMERATION_BOUND = 20


@dataclass(frozen=True)
class Sector:
    """All rotation classes sharing (L, m1, m110), sorted by representative."""

    L: int
    m1: int
    m110: int
    classes: tuple[OrbitClass, ...]


@dataclass(frozen=True)
class OmegaSet:
    """One recurrent set of classes inside a sector."""

    L: int
    m1: int
    m110: int
    index: int
    members: tuple[OrbitClass, ...]


@dataclass(frozen=True)
class SectorDecomposition:
    sector: Sector
    recurrent: tuple[OmegaSet, ...]
    transient: tuple[OrbitClass, ...]


def sector_is_feasible(L: int, m1: int, m110: int) -> bool:
    """Whether any configuration realizes (L, m1, m110).

    The bound 2*m110 <= m1 <= L - m110 is necessary; for m110 = 0 it is not
    sufficient because isolated particles each need their own gap, so only
    2*m1 <= L works there (plus the empty and the full ring).
    """
    if L < 1 or m1 < 0 or m110 < 0 or m1 > L:
        return False
    if m110 == 0:
        return m1 == 0 or m1 == L or 2 * m1 <= L
    return 2 * m110 <= m1 and m1 <= L - m110


def feasible_pairs(L: int):
    """All nonempty (m1, m110) sectors, in scan order."""
    for m110 in range(0, L // 3 + 1):
        for m1 in range(2 * m110, L - m110 + 1):
            if sector_is_feasible(L, m1, m110):
                yield m1, m110


def _rotl(x: int, r: int, L: int, mask: int) -> int:
    r %= L
    return ((x << r) | (x >> (L - r))) & mask if r else x


def _ring_stats(x: int, L: int, mask: int) -> tuple[int, int, int, int]:
    """(m1, m110, m1110, m010) for a packed configuration.

    Bit L-1-j holds site j, so lexicographic order on strings is numeric
    order on the packed values.
    """
    a = x
    b = _rotl(x, 1, L, mask)
    c = _rotl(x, 2, L, mask)
    d = _rotl(x, 3, L, mask)
    m1 = x.bit_count()
    m110 = (a & b & ~c & mask).bit_count()
    m1110 = (a & b & c & ~d & mask).bit_count()
    m010 = (~a & b & ~c & mask).bit_count()
    return m1, m110, m1110, m010


@lru_cache(maxsize=8)
def _classes_by_sector(L: int) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
    """Map (m1, m110) -> sorted (packed representative, orbit size) tuples."""
    mask = (1 << L) - 1
    buckets: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for x in range(1 << L):
        period = 0
        is_canonical = True
        for r in range(1, L + 1):
            y = _rotl(x, r, L, mask)
            if y < x:
                is_canonical = False
                break
            if y == x:
                period = r
                break
        if not is_canonical:
            continue
        m1, m110, _, _ = _ring_stats(x, L, mask)
        buckets.setdefault((m1, m110), []).append((x, period))
    return {key: tuple(sorted(vals)) for key, vals in buckets.items()}


def _unpack(x: int, L: int) -> Ring:
    return Ring(tuple((x >> (L - 1 - j)) & 1 for j in range(L)))


def enumerate_sector(
    L: int, m1: int, m110: int, *, max_length: int = ENUMERATION_BOUND
) -> Sector:
    """All rotation classes of a sector, by exhaustive scan.

    Refuses rings longer than ``max_length``; sector-level counting at large
    L is available without enumeration through the partition table functions.
    """
    if L < 1:
        raise InvalidArgumentError("ring length must be at least 1")
    if not 0 <= m1 <= L or m110 < 0:
        raise InvalidArgumentError(f"no sector ({L}, {m1}, {m110}) exists")
    if L > max_length:
        raise EnumerationBoundError(
            f"L={L} exceeds the enumeration bound {max_length}; use the "
            "sector partition table for counting at this size"
        )
    packed = _classes_by_sector(L).get((m1, m110), ())
    classes = tuple(OrbitClass(_unpack(x, L), orbit) for x, orbit in packed)
    return Sector(L, m1, m110, classes)


def transition_graph(
    sector: Sector, rule: FluxRule = STOCHASTIC_V
) -> dict[int, tuple[int, ...]]:
    """Class-level adjacency: index -> indices reachable in one step.

    Every branch probability is strictly positive for alpha in (0, 1), so
    the edge set does not depend on alpha.
    """
    index_of = {cls.representative: i for i, cls in enumerate(sector.classes)}
    graph: dict[int, tuple[int, ...]] = {}
    for i, cls in enumerate(sector.classes):
        successors = class_outcomes(cls.representative, rule)
        targets = []
        for rep in successors:
            if rep not in index_of:
                raise InvalidArgumentError(
                    f"successor {rep} of {cls.representative} left the sector"
                )
            targets.append(index_of[rep])
        graph[i] = tuple(sorted(set(targets)))
    return graph


def _strongly_connected_components(graph: dict[int, tuple[int, ...]]):
    """Tarjan's algorithm, iterative to keep deep sectors off the C stack."""
    n = len(graph)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, child_pos = work[-1]
            if child_pos == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for pos in range(child_pos, len(graph[node])):
                child = graph[node][pos]
                if index[child] == -1:
                    work[-1] = (node, pos + 1)
                    work.append((child, 0))
                    advanced = True
                    break
                if on_stack[child]:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def recurrent_classes(
    sector: Sector, rule: FluxRule = STOCHASTIC_V
) -> SectorDecomposition:
    """Split a sector into closed recurrent sets and transient classes.

    A strongly connected component is recurrent exactly when no edge leaves
    it. Recurrent sets are ordered by their least member representative.
    """
    graph = transition_graph(sector, rule)
    components = _strongly_connected_components(graph)
    component_of = {}
    for comp_id, members in enumerate(components):
        for node in members:
            component_of[node] = comp_id
    closed = []
    transient_nodes = []
    for comp_id, members in enumerate(components):
        if all(
            component_of[target] == comp_id
            for node in members
            for target in graph[node]
        ):
            closed.append(members)
        else:
            transient_nodes.extend(members)
    closed_sorted = sorted(
        (sorted(members) for members in closed),
        key=lambda members: str(sector.classes[members[0]].representative),
    )
    omegas = tuple(
        OmegaSet(
            sector.L,
            sector.m1,
            sector.m110,
            index,
            tuple(sector.classes[i] for i in members),
        )
        for index, members in enumerate(closed_sorted)
    )
    transient = tuple(
        sector.classes[i]
        for i in sorted(
            transient_nodes, key=lambda i: str(sector.classes[i].representative)
        )
    )
    return SectorDecomposition(sector, omegas, transient)
