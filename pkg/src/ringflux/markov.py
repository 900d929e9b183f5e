"""Class-level Markov chains on recurrent sets and their stationary laws.

The chain runs on rotation classes of one recurrent set. Transition entries
are exact AlphaPoly probabilities; the stationary distribution is obtained
numerically for float alpha (dense solve with iterative refinement, power
iteration as fallback) and exactly for Fraction alpha.

The product-form candidate for the stationary law weights a class by
orbit_size * alpha^m010 / (1-alpha)^(m1110 + m010), where m1110 and m010 are
cyclic window counts of the representative. verify_conjecture compares that
candidate against the solved distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dynamics import STOCHASTIC_V, FluxRule, class_outcomes
from .ensemble import OmegaSet
from .errors import InvalidArgumentError, NumericalFailureError
from .exact import AlphaPoly, solve_stationary_exact
from .ring import count_cyclic_pattern

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic class-level matrix with exact polynomial entries."""

    omega: OmegaSet
    entries: tuple[tuple[AlphaPoly, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def row_sums_are_one(self) -> bool:
        return all(sum(row, AlphaPoly.zero()).is_one() for row in self.entries)

    def evaluate(self, alpha):
        """Numeric matrix at float alpha, or exact rows at Fraction alpha."""
        if isinstance(alpha, Fraction):
            return [[entry(alpha) for entry in row] for row in self.entries]
        return np.array(
            [[float(entry(alpha)) for entry in row] for row in self.entries]
        )


@dataclass(frozen=True)
class StationaryDistribution:
    omega: OmegaSet
    alpha: float
    probabilities: tuple[float, ...]
    residual: float


@dataclass(frozen=True)
class ConjectureReport:
    omega: OmegaSet
    tol: float
    max_relative_error: dict[float, float]
    passed: bool


def build_matrix(omega: OmegaSet, rule: FluxRule = STOCHASTIC_V) -> TransitionMatrix:
    """Exact transition matrix of a recurrent set, rows in member order."""
    index_of = {cls.representative: i for i, cls in enumerate(omega.members)}
    rows = []
    for cls in omega.members:
        outcomes = class_outcomes(cls.representative, rule)
        row = [AlphaPoly.zero()] * len(omega.members)
        for rep, probability in outcomes.items():
            if rep not in index_of:
                raise InvalidArgumentError(
                    f"{cls.representative} leaves the set (to {rep}); "
                    "not a closed recurrent set under this rule"
                )
            row[index_of[rep]] = probability
        rows.append(tuple(row))
    matrix = TransitionMatrix(omega, tuple(rows))
    assert matrix.row_sums_are_one(), "branch probabilities must sum to one"
    return matrix


def _refined_solve(P: np.ndarray) -> np.ndarray:
    n = P.shape[0]
    A = P.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(A, b)
    for _ in range(2):
        pi = pi + np.linalg.solve(A, b - A @ pi)
    return pi


def _power_iteration(P: np.ndarray, tol: float, max_steps: int = 200_000):
    n = P.shape[0]
    pi = np.full(n, 1.0 / n)
    for _ in range(max_steps):
        nxt = pi @ P
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pi)) < 0.01 * tol:
            return nxt
        pi = nxt
    return pi


def stationary(
    matrix: TransitionMatrix,
    alpha: float,
    *,
    residual_tol: float = RESIDUAL_TOL,
) -> StationaryDistribution:
    """Stationary distribution at float alpha in (0, 1).

    Solves (P^T - I) pi = 0 with a normalization row and two rounds of
    iterative refinement; falls back to power iteration if the direct solve
    misses the residual target. Raises NumericalFailureError when neither
    route reaches it or the result leaves the simplex.
    """
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie strictly between 0 and 1")
    P = matrix.evaluate(alpha)
    try:
        pi = _refined_solve(P)
    except np.linalg.LinAlgError:
        pi = _power_iteration(P, residual_tol)
    residual = float(np.max(np.abs(pi @ P - pi)))
    if residual > residual_tol or pi.min() < -1e-13:
        pi = _power_iteration(P, residual_tol)
        residual = float(np.max(np.abs(pi @ P - pi)))
    if residual > residual_tol:
        raise NumericalFailureError(
            f"stationary solve residual {residual:.3e} above {residual_tol:.1e}",
            residual=residual,
        )
    if pi.min() < -1e-13 or abs(pi.sum() - 1.0) > 1e-10:
        raise NumericalFailureError(
            "stationary solve left the probability simplex", residual=residual
        )
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    return StationaryDistribution(matrix.omega, alpha, tuple(pi.tolist()), residual)


def stationary_exact(matrix: TransitionMatrix, alpha: Fraction) -> list[Fraction]:
    """Exact stationary distribution at rational alpha in (0, 1)."""
    if not isinstance(alpha, Fraction) or not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must be a Fraction strictly inside (0, 1)")
    return solve_stationary_exact(matrix.evaluate(alpha))


def class_weight_exponents(cls) -> tuple[int, int]:
    """(m1110, m010) window counts of a class representative."""
    rep = cls.representative
    return (
        count_cyclic_pattern(rep, "1110").count,
        count_cyclic_pattern(rep, "010").count,
    )


def conjecture_vector(omega: OmegaSet, alpha):
    """Product-form stationary candidate, normalized.

    Exact (Fractions) for Fraction alpha, floats otherwise. Each class gets
    weight orbit_size * alpha^m010 / (1-alpha)^(m1110+m010); the orbit factor
    accounts for the number of raw configurations the class contains.
    """
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie strictly between 0 and 1")
    weights = []
    for cls in omega.members:
        n_tail, n_isolated = class_weight_exponents(cls)
        weight = (
            cls.orbit_size
            * alpha**n_isolated
            / (1 - alpha) ** (n_tail + n_isolated)
        )
        weights.append(weight)
    total = sum(weights)
    return [w / total for w in weights]


def verify_conjecture(
    omega: OmegaSet,
    alphas=(0.1, 0.3, 0.5, 0.7, 0.9),
    tol: float = 1e-8,
    rule: FluxRule = STOCHASTIC_V,
) -> ConjectureReport:
    """Compare solved stationary laws against the product-form candidate."""
    matrix = build_matrix(omega, rule)
    errors: dict[float, float] = {}
    for alpha in alphas:
        solved = stationary(matrix, alpha).probabilities
        candidate = conjecture_vector(omega, alpha)
        worst = max(
            abs(s - c) / c for s, c in zip(solved, candidate)
        )
        errors[alpha] = worst
    return ConjectureReport(omega, tol, errors, max(errors.values()) <= tol)
