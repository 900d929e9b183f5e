"""Exact probability algebra in the move parameter alpha.

Branch probabilities of one update step are products of independent Bernoulli
draws, so every transition probability is a sum of terms
c * alpha^i * (1-alpha)^k with nonnegative integer c. AlphaPoly stores that
sparse form exactly; equality and identity checks go through the expanded
coefficient vector in alpha, which is canonical.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Mapping

from .errors import InvalidArgumentError, NumericalFailureError

_TERM_RE = re.compile(
    r"^(?:(?P<coeff>\d+)\*?)?"
    r"(?:alpha(?:\^(?P<i>\d+))?\*?)?"
    r"(?:\(1-alpha\)(?:\^(?P<k>\d+))?)?$"
)


class AlphaPoly:
    """Exact sum of c * alpha^i * (1-alpha)^k terms with integer c."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        cleaned = {}
        if terms:
            for (i, k), c in terms.items():
                if i < 0 or k < 0:
                    raise InvalidArgumentError("exponents must be nonnegative")
                if c:
                    cleaned[(int(i), int(k))] = cleaned.get((int(i), int(k)), 0) + int(c)
        self.terms = {key: c for key, c in cleaned.items() if c}

    @classmethod
    def zero(cls) -> "AlphaPoly":
        return cls()

    @classmethod
    def one(cls) -> "AlphaPoly":
        return cls({(0, 0): 1})

    @classmethod
    def term(cls, alpha_power: int, comp_power: int, coeff: int = 1) -> "AlphaPoly":
        return cls({(alpha_power, comp_power): coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, int):
            other = AlphaPoly({(0, 0): other})
        if not isinstance(other, AlphaPoly):
            return NotImplemented
        merged = dict(self.terms)
        for key, c in other.terms.items():
            merged[key] = merged.get(key, 0) + c
        return AlphaPoly(merged)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            return AlphaPoly({key: c * other for key, c in self.terms.items()})
        if not isinstance(other, AlphaPoly):
            return NotImplemented
        product: dict[tuple[int, int], int] = {}
        for (i1, k1), c1 in self.terms.items():
            for (i2, k2), c2 in other.terms.items():
                key = (i1 + i2, k1 + k2)
                product[key] = product.get(key, 0) + c1 * c2
        return AlphaPoly(product)

    __rmul__ = __mul__

    def alpha_coefficients(self) -> tuple[int, ...]:
        """Dense coefficients of the expansion in powers of alpha (canonical)."""
        degree = max((i + k for i, k in self.terms), default=0)
        coeffs = [0] * (degree + 1)
        for (i, k), c in self.terms.items():
            for j in range(k + 1):
                coeffs[i + j] += c * comb(k, j) * (-1) ** j
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return tuple(coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = AlphaPoly({(0, 0): other})
        if not isinstance(other, AlphaPoly):
            return NotImplemented
        return self.alpha_coefficients() == other.alpha_coefficients()

    def __hash__(self) -> int:
        return hash(self.alpha_coefficients())

    def is_one(self) -> bool:
        return self.alpha_coefficients() == (1,)

    def __call__(self, alpha):
        """Evaluate; exact for Fraction alpha, float for float alpha."""
        total = 0 * alpha
        for (i, k), c in self.terms.items():
            total = total + c * alpha**i * (1 - alpha) ** k
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, k) in sorted(self.terms):
            c = self.terms[(i, k)]
            factors = []
            if c != 1 or (i == 0 and k == 0):
                factors.append(str(c))
            if i == 1:
                factors.append("alpha")
            elif i > 1:
                factors.append(f"alpha^{i}")
            if k == 1:
                factors.append("(1-alpha)")
            elif k > 1:
                factors.append(f"(1-alpha)^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "AlphaPoly":
        """Inverse of str() for the nonnegative term form emitted here."""
        text = text.strip()
        if text == "0":
            return cls.zero()
        terms: dict[tuple[int, int], int] = {}
        for chunk in text.split("+"):
            compact = chunk.strip().replace(" ", "")
            match = _TERM_RE.match(compact) if compact else None
            if not match:
                raise InvalidArgumentError(f"cannot parse probability term {chunk!r}")
            coeff = int(match.group("coeff") or 1)
            if match.group("i") is not None:
                i = int(match.group("i"))
            else:
                i = 1 if _mentions_alpha(compact) else 0
            if match.group("k") is not None:
                k = int(match.group("k"))
            else:
                k = 1 if "(1-alpha)" in compact else 0
            terms[(i, k)] = terms.get((i, k), 0) + coeff
        return cls(terms)


def _mentions_alpha(chunk: str) -> bool:
    bare = chunk.replace(" ", "").replace("(1-alpha)", "")
    return "alpha" in bare


def solve_stationary_exact(rows: list[list[Fraction]]) -> list[Fraction]:
    """Normalized left fixed vector of a row-stochastic rational matrix.

    Gaussian elimination over Fraction on (P^T - I) x = 0 with the last
    equation replaced by sum(x) = 1. Raises NumericalFailureError if the
    system is not uniquely solvable (reducible chain).
    """
    n = len(rows)
    aug = [
        [rows[j][i] - (1 if i == j else 0) for j in range(n)] + [Fraction(0)]
        for i in range(n)
    ]
    aug[n - 1] = [Fraction(1)] * n + [Fraction(1)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise NumericalFailureError(
                "stationary system is singular (chain not irreducible?)"
            )
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col]
        aug[col] = [v / inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    solution = [aug[i][n] for i in range(n)]
    if any(p < 0 for p in solution) or sum(solution) != 1:
        raise NumericalFailureError("exact stationary solve left the simplex")
    return solution
