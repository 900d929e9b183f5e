"""One-step update rules for the ring particle system.

All three rules share one conservative shape. Each site j carries a window of
four consecutive sites, a flux table maps the window contents to 0 or 1 (or to
a Bernoulli draw), and the update is

    next[j] = current[j] + flux[j] - flux[j + 1]

so whatever one site loses its neighbour gains. The rules differ only in the
window stencil and in the table:

* ``det``      windows (j-2, j-1, j, j+1); every table entry certain.
* ``stoch-u``  same stencil; window 0111 emits 0 with probability alpha and
               1 otherwise; all other windows as in ``det``.
* ``stoch-v``  windows (j-3, j-2, j-1, j); window 1110 emits 1 with
               probability alpha and 0 otherwise; windows 1010 and 0010
               always emit 1; every other window emits 0.

In particle terms ``stoch-v`` moves each isolated particle one site to the
right, freezes adjacent pairs, and lets the rightmost particle of every block
of three or more hop right with probability alpha, independently per block.
The flux array is computed once per step and therefore shared by any
per-bond bookkeeping, which keeps the two conserved quantities exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import InvalidArgumentError
from .exact import AlphaPoly
from .ring import Ring, RingLike, as_ring, canonical_rotation, count_cyclic_pattern

RANDOM = -1


def _table(entries: dict[str, int]) -> tuple[int, ...]:
    values = [0] * 16
    for window, value in entries.items():
        values[int(window, 2)] = value
    return tuple(values)


@dataclass(frozen=True)
class FluxRule:
    """A window stencil plus a 16-entry flux table.

    ``alpha_flux`` is the flux emitted by a RANDOM table entry when the
    probability-alpha branch of its Bernoulli draw comes up; the other branch
    emits the complement.
    """

    name: str
    offsets: tuple[int, int, int, int]
    table: tuple[int, ...]
    alpha_flux: int | None = None

    @property
    def is_stochastic(self) -> bool:
        return RANDOM in self.table

    def specialize(self, flux_value: int) -> "FluxRule":
        """Replace every RANDOM entry by a fixed flux value."""
        if flux_value not in (0, 1):
            raise InvalidArgumentError("flux value must be 0 or 1")
        fixed = tuple(flux_value if t == RANDOM else t for t in self.table)
        return FluxRule(f"{self.name}[{flux_value}]", self.offsets, fixed, None)

    def deterministic_limit(self, alpha) -> "FluxRule":
        """The rule at alpha = 0 or alpha = 1, where no randomness remains."""
        if alpha == 1:
            return self.specialize(self.alpha_flux)
        if alpha == 0:
            return self.specialize(1 - self.alpha_flux)
        raise InvalidArgumentError("deterministic limit exists only at alpha 0 or 1")


DETERMINISTIC = FluxRule(
    "det",
    (-2, -1, 0, 1),
    _table(
        {
            "1111": 1,
            "1110": 1,
            "1101": 1,
            "1100": 1,
            "0110": 1,
        }
    ),
)

STOCHASTIC_U = FluxRule(
    "stoch-u",
    (-2, -1, 0, 1),
    _table(
        {
            "1111": 1,
            "1110": 1,
            "1101": 1,
            "1100": 1,
            "0110": 1,
            "0111": RANDOM,
        }
    ),
    alpha_flux=0,
)

STOCHASTIC_V = FluxRule(
    "stoch-v",
    (-3, -2, -1, 0),
    _table(
        {
            "1110": RANDOM,
            "1010": 1,
            "0010": 1,
        }
    ),
    alpha_flux=1,
)

RULES = {rule.name: rule for rule in (DETERMINISTIC, STOCHASTIC_U, STOCHASTIC_V)}


def rule_named(name: str) -> FluxRule:
    try:
        return RULES[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown rule {name!r}; choose from {sorted(RULES)}"
        ) from None


@dataclass(frozen=True)
class StepOutcome:
    """One possible successor configuration with its exact probability."""

    next: Ring
    probability: AlphaPoly


def window_code(config: Ring, anchor: int, offsets) -> int:
    code = 0
    for offset in offsets:
        code = (code << 1) | config[anchor + offset]
    return code


def stochastic_anchors(config: RingLike, rule: FluxRule) -> tuple[int, ...]:
    """Anchor sites whose window hits a RANDOM table entry."""
    ring = as_ring(config)
    return tuple(
        j
        for j in range(len(ring))
        if rule.table[window_code(ring, j, rule.offsets)] == RANDOM
    )


def _apply_flux(ring: Ring, flux: list[int]) -> Ring:
    n = len(ring)
    sites = tuple(
        ring.sites[j] + flux[j] - flux[(j + 1) % n] for j in range(n)
    )
    # A value outside {0,1} would mean the flux table violates conservation.
    assert all(s in (0, 1) for s in sites), "flux table produced an invalid site"
    return Ring(sites)


def step_deterministic(config: RingLike, rule: FluxRule = DETERMINISTIC) -> Ring:
    """Advance one step under a rule with no RANDOM entries."""
    ring = as_ring(config)
    if rule.is_stochastic:
        raise InvalidArgumentError(
            f"rule {rule.name!r} has random entries; use step_stochastic"
        )
    flux = [rule.table[window_code(ring, j, rule.offsets)] for j in range(len(ring))]
    return _apply_flux(ring, flux)


def step_stochastic(config: RingLike, rule: FluxRule, alpha: float, rng) -> Ring:
    """Advance one step, drawing each RANDOM window independently.

    ``rng`` is a numpy Generator; one uniform is consumed per site so the
    draw consumed by a window depends only on its anchor position.
    """
    ring = as_ring(config)
    if not rule.is_stochastic:
        return step_deterministic(ring, rule)
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie strictly between 0 and 1")
    uniforms = rng.random(len(ring))
    flux = []
    for j in range(len(ring)):
        entry = rule.table[window_code(ring, j, rule.offsets)]
        if entry == RANDOM:
            entry = rule.alpha_flux if uniforms[j] < alpha else 1 - rule.alpha_flux
        flux.append(entry)
    return _apply_flux(ring, flux)


def branch_outcomes(config: RingLike, rule: FluxRule) -> tuple[StepOutcome, ...]:
    """All successors of one step with exact probabilities.

    Enumerates the 2^s joint draw assignments over the s stochastic windows,
    merging assignments that land on the same successor configuration. The
    probabilities sum to one as polynomials.
    """
    ring = as_ring(config)
    n = len(ring)
    base_flux = [rule.table[window_code(ring, j, rule.offsets)] for j in range(n)]
    anchors = [j for j in range(n) if base_flux[j] == RANDOM]
    merged: dict[Ring, AlphaPoly] = {}
    for branches in product((0, 1), repeat=len(anchors)):
        flux = list(base_flux)
        alpha_count = 0
        for anchor, on_alpha_branch in zip(anchors, branches):
            if on_alpha_branch:
                flux[anchor] = rule.alpha_flux
                alpha_count += 1
            else:
                flux[anchor] = 1 - rule.alpha_flux
        successor = _apply_flux(ring, flux)
        weight = AlphaPoly.term(alpha_count, len(anchors) - alpha_count)
        merged[successor] = merged.get(successor, AlphaPoly.zero()) + weight
    return tuple(
        StepOutcome(ring_, poly)
        for ring_, poly in sorted(merged.items(), key=lambda item: str(item[0]))
    )


def class_outcomes(config: RingLike, rule: FluxRule) -> dict[Ring, AlphaPoly]:
    """Branch outcomes merged over rotation classes of the successors."""
    merged: dict[Ring, AlphaPoly] = {}
    for outcome in branch_outcomes(config, rule):
        rep = canonical_rotation(outcome.next)
        merged[rep] = merged.get(rep, AlphaPoly.zero()) + outcome.probability
    return merged


def expected_flux(config: RingLike, rule: FluxRule, alpha):
    """Mean of the per-step site-averaged flux, exact in alpha's arithmetic.

    Fraction alpha gives an exact Fraction; float gives float. For the
    deterministic rule the result does not depend on alpha.
    """
    ring = as_ring(config)
    n = len(ring)
    certain = 0
    random_windows = 0
    for j in range(n):
        entry = rule.table[window_code(ring, j, rule.offsets)]
        if entry == RANDOM:
            random_windows += 1
        else:
            certain += entry
    if random_windows == 0:
        return Fraction(certain, n) if not isinstance(alpha, float) else certain / n
    if rule.alpha_flux == 1:
        random_part = alpha * random_windows
    else:
        random_part = (1 - alpha) * random_windows
    return (certain + random_part) / n


def pattern_flux_estimate(config: RingLike, alpha):
    """The window-count form of the stoch-v mean flux.

    alpha * density(1110) + density(010); agrees with expected_flux under
    stoch-v because each block of three or more contributes one 1110 window
    and each isolated particle one 010 window.
    """
    ring = as_ring(config)
    n = len(ring)
    n_tail = count_cyclic_pattern(ring, "1110").count
    n_isolated = count_cyclic_pattern(ring, "010").count
    return (alpha * n_tail + n_isolated) / n
