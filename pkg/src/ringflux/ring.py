"""Cyclic binary configurations and their pattern statistics.

A configuration is a ring of L sites, each either empty (0) or occupied by a
particle (1). Everything here is cyclic: site indices wrap modulo L, pattern
windows run across the seam, and two configurations related by rotation are
physically identical. The rotation class of a configuration is represented by
its lexicographically least rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import InvalidArgumentError

Bits = tuple[int, ...]
RingLike = Union["Ring", str, Iterable[int]]


def _as_bits(value: RingLike, what: str = "configuration") -> Bits:
    if isinstance(value, Ring):
        return value.sites
    if isinstance(value, str):
        raw: Iterable = value
    else:
        raw = value
    bits = []
    for item in raw:
        if item in (0, 1):
            bits.append(int(item))
        elif item in ("0", "1"):
            bits.append(int(item))
        else:
            raise InvalidArgumentError(
                f"{what} may contain only 0 and 1, got {item!r}"
            )
    if not bits:
        raise InvalidArgumentError(f"{what} must have at least one site")
    return tuple(bits)


@dataclass(frozen=True)
class Ring:
    """Immutable ring of 0/1 sites. Indexing wraps modulo the length."""

    sites: Bits

    def __post_init__(self):
        object.__setattr__(self, "sites", _as_bits(self.sites))

    @classmethod
    def from_string(cls, text: str) -> "Ring":
        return cls(_as_bits(text))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.sites)

    def __len__(self) -> int:
        return len(self.sites)

    def __getitem__(self, index: int) -> int:
        return self.sites[index % len(self.sites)]

    def __iter__(self) -> Iterator[int]:
        return iter(self.sites)


@dataclass(frozen=True)
class PatternCount:
    """Cyclic occurrence count of a fixed 0/1 word, with its site density."""

    pattern: str
    count: int
    density: Fraction


@dataclass(frozen=True)
class OrbitClass:
    """A rotation class: canonical representative plus orbit size."""

    representative: Ring
    orbit_size: int

    @classmethod
    def of(cls, config: RingLike) -> "OrbitClass":
        ring = as_ring(config)
        return cls(canonical_rotation(ring), orbit_size(ring))


def as_ring(config: RingLike) -> Ring:
    return config if isinstance(config, Ring) else Ring(_as_bits(config))


def rotate(config: RingLike, shift: int) -> Ring:
    """Rotate so that old site ``shift`` becomes new site 0."""
    s = _as_bits(config)
    k = shift % len(s)
    return Ring(s[k:] + s[:k])


def reflect(config: RingLike) -> Ring:
    """The ring read in reverse site order."""
    return Ring(_as_bits(config)[::-1])


def count_cyclic_pattern(config: RingLike, pattern: RingLike) -> PatternCount:
    """Count cyclic windows of ``config`` equal to ``pattern``.

    Each of the L anchor positions is inspected once; window sites are taken
    modulo L, so on rings shorter than the pattern a window revisits sites,
    matching how the update rules read their stencils.
    """
    s = _as_bits(config)
    word = _as_bits(pattern, what="pattern")
    n, m = len(s), len(word)
    count = 0
    for anchor in range(n):
        for offset in range(m):
            if s[(anchor + offset) % n] != word[offset]:
                break
        else:
            count += 1
    return PatternCount(
        pattern="".join(str(b) for b in word),
        count=count,
        density=Fraction(count, n),
    )


def conserved_pair(config: RingLike) -> tuple[int, int]:
    """(particle count, count of particle blocks of length >= 2).

    Both numbers are invariant under every update rule in this package; the
    second equals the cyclic occurrence count of the word 110 because each
    maximal block of two or more particles ends in exactly one such window.
    """
    s = _as_bits(config)
    ones = sum(s)
    n = len(s)
    blocks = sum(
        1
        for j in range(n)
        if s[j] == 1 and s[(j + 1) % n] == 1 and s[(j + 2) % n] == 0
    )
    return ones, blocks


def canonical_rotation(config: RingLike) -> Ring:
    """Lexicographically least rotation; the class representative."""
    s = _as_bits(config)
    n = len(s)
    best = s
    for k in range(1, n):
        cand = s[k:] + s[:k]
        if cand < best:
            best = cand
    return Ring(best)


def orbit_size(config: RingLike) -> int:
    """Number of distinct rotations (the least positive shift fixing it)."""
    s = _as_bits(config)
    n = len(s)
    for k in range(1, n):
        if n % k == 0 and s[k:] + s[:k] == s:
            return k
    return n
