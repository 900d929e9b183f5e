"""Monte Carlo simulation of the ring rules and flux estimation.

The kernel is vectorized over replicates: states live in an (R, L) integer
array, window codes come from axis rolls, and one uniform per (replicate,
site) is consumed per step whether or not the site's window is random, so a
draw is addressed purely by (seed, step, replicate, site). Randomness comes
from a counter-based Philox generator seeded per run; the uniform block is
laid out step-major in fixed-size chunks, which makes trajectories
reproducible bit for bit for a given spec.

At alpha = 0 or 1 the stochastic rules are routed to their deterministic
specializations. Deterministic runs report an exact flux by detecting the
cycle the trajectory enters and averaging over one full period.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .dynamics import FluxRule, RANDOM, rule_named
from .ensemble import sector_is_feasible
from .errors import InfeasibleSectorError, InvalidArgumentError
from .ring import Ring, RingLike, as_ring, conserved_pair

_CHUNK_STEPS = 256


@dataclass(frozen=True)
class SimulationSpec:
    """Everything a run depends on; two equal specs give equal results."""

    rule: str
    L: int
    alpha: float
    steps: int
    burn_in: int = 0
    seed: int = 0
    replicates: int = 1
    m1: int | None = None
    m110: int | None = None
    init: str | None = None

    def validated(self) -> "SimulationSpec":
        if self.rule not in ("det", "stoch-u", "stoch-v"):
            raise InvalidArgumentError(f"unknown rule {self.rule!r}")
        if self.L < 1:
            raise InvalidArgumentError("ring length must be at least 1")
        if not 0 <= self.alpha <= 1:
            raise InvalidArgumentError("alpha must lie in [0, 1]")
        if self.steps < 1:
            raise InvalidArgumentError("need at least one step")
        if not 0 <= self.burn_in < self.steps:
            raise InvalidArgumentError("burn-in must be smaller than the step count")
        if self.replicates < 1:
            raise InvalidArgumentError("need at least one replicate")
        if self.init is not None:
            ring = as_ring(self.init)
            if len(ring) != self.L:
                raise InvalidArgumentError("initial configuration length must equal L")
        elif self.m1 is None or self.m110 is None:
            raise InvalidArgumentError("give either init or both m1 and m110")
        elif not sector_is_feasible(self.L, self.m1, self.m110):
            raise InfeasibleSectorError(
                f"sector ({self.L}, {self.m1}, {self.m110}) has no configurations"
            )
        return self


@dataclass(frozen=True)
class FluxEstimate:
    spec: SimulationSpec
    flux_mean: float
    flux_stderr: float
    replicate_means: tuple[float, ...]
    pattern_mean: float | None = None
    pattern_stderr: float | None = None
    exact: bool = False


@dataclass(frozen=True)
class DiagramRow:
    L: int
    m1: int
    m110: int
    alpha: float
    feasible: bool
    rho1: float
    rho110: float
    q_u_hat: float | None
    stderr: float | None
    n_max: int
    n_burn: int
    replicates: int
    seed: int


def resolve_rule(name: str, alpha: float) -> FluxRule:
    """Named rule with alpha-endpoint routing to its deterministic limit."""
    rule = rule_named(name)
    if rule.is_stochastic and alpha in (0.0, 1.0):
        rule = rule.deterministic_limit(int(alpha))
    return rule


class _Kernel:
    """Resolved rule: stencil rolls, integer table, draw semantics."""

    def __init__(self, rule: FluxRule, alpha: float):
        self.offsets = rule.offsets
        self.alpha = float(alpha)
        self.table = np.array(
            [0 if t == RANDOM else t for t in rule.table], dtype=np.int8
        )
        if rule.is_stochastic:
            self.random_code = rule.table.index(RANDOM)
            self.move_below = rule.alpha_flux == 1
        else:
            self.random_code = None
            self.move_below = False

    @property
    def stochastic(self) -> bool:
        return self.random_code is not None

    def codes(self, states: np.ndarray) -> np.ndarray:
        code = np.zeros_like(states)
        for offset in self.offsets:
            code = (code << 1) | np.roll(states, -offset, axis=1)
        return code

    def step(self, states: np.ndarray, uniforms: np.ndarray | None):
        """Advance (R, L) states in place-free fashion; returns moves per row."""
        code = self.codes(states)
        flux = self.table[code]
        if self.stochastic:
            random_sites = code == self.random_code
            if self.move_below:
                drawn = (uniforms < self.alpha).astype(np.int8)
            else:
                drawn = (uniforms >= self.alpha).astype(np.int8)
            flux = np.where(random_sites, drawn, flux)
        nxt = states + flux - np.roll(flux, -1, axis=1)
        return nxt, flux.sum(axis=1)


def _pattern_counts(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row counts of windows 1110 and 010."""
    s0 = states
    s1 = np.roll(states, -1, axis=1)
    s2 = np.roll(states, -2, axis=1)
    s3 = np.roll(states, -3, axis=1)
    tails = ((s0 == 1) & (s1 == 1) & (s2 == 1) & (s3 == 0)).sum(axis=1)
    isolated = ((s0 == 0) & (s1 == 1) & (s2 == 0)).sum(axis=1)
    return tails, isolated


def generate_initial(L: int, m1: int, m110: int, seed: int = 0) -> Ring:
    """A random configuration of the sector.

    Builds m110 blocks of length at least two plus as many isolated
    particles as the gap budget allows, distributes the particle surplus
    over the blocks and the spare zeros over the gaps at random, then
    shuffles the block order. Not uniform over the sector; uniform sampling
    would require the partition table as a proposal.
    """
    if not sector_is_feasible(L, m1, m110):
        raise InfeasibleSectorError(
            f"sector ({L}, {m1}, {m110}) has no configurations"
        )
    if m1 == 0:
        return Ring((0,) * L)
    if m1 == L:
        return Ring((1,) * L)
    rng = np.random.default_rng(seed)
    isolated = min(m1 - 2 * m110, L - m1 - m110)
    blocks = [2] * m110 + [1] * isolated
    surplus = m1 - sum(blocks)
    for _ in range(surplus):
        blocks[rng.integers(0, m110)] += 1
    gaps = [1] * len(blocks)
    for _ in range(L - m1 - len(gaps)):
        gaps[rng.integers(0, len(gaps))] += 1
    order = rng.permutation(len(blocks))
    sites: list[int] = []
    for position, block_index in enumerate(order):
        sites.extend([1] * blocks[block_index])
        sites.extend([0] * gaps[position])
    ring = Ring(tuple(sites))
    assert conserved_pair(ring) == (m1, m110)
    return ring


def _initial_states(spec: SimulationSpec) -> np.ndarray:
    states = np.empty((spec.replicates, spec.L), dtype=np.int8)
    if spec.init is not None:
        row = np.array(as_ring(spec.init).sites, dtype=np.int8)
        states[:] = row
        return states
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.replicates)
    for r, child in enumerate(seeds):
        ring = generate_initial(spec.L, spec.m1, spec.m110, child)
        states[r] = np.array(ring.sites, dtype=np.int8)
    return states


def _uniform_chunks(spec: SimulationSpec):
    """Yield (chunk_start, uniforms) blocks from one counter-based stream."""
    rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence([spec.seed, spec.replicates]))
    )
    for start in range(0, spec.steps, _CHUNK_STEPS):
        size = min(_CHUNK_STEPS, spec.steps - start)
        yield start, rng.random((size, spec.replicates, spec.L))


def run_flux(spec: SimulationSpec, *, track_patterns: bool | None = None) -> FluxEstimate:
    """Mean site-averaged flux over [burn_in, steps), with replicate stderr.

    For effectively deterministic runs (det rule, or alpha at 0 or 1) the
    estimate comes from exact cycle averaging instead of time averaging and
    is flagged exact.
    """
    spec = spec.validated()
    rule = resolve_rule(spec.rule, spec.alpha)
    if not rule.is_stochastic:
        states = _initial_states(spec)
        values = [
            float(deterministic_cycle_flux(Ring(tuple(int(b) for b in row)), rule))
            for row in states
        ]
        mean = float(np.mean(values))
        stderr = _stderr(values)
        return FluxEstimate(spec, mean, stderr, tuple(values), exact=True)
    kernel = _Kernel(rule, spec.alpha)
    if track_patterns is None:
        track_patterns = spec.rule == "stoch-v"
    states = _initial_states(spec)
    flux_sums = np.zeros(spec.replicates)
    pattern_sums = np.zeros(spec.replicates)
    for start, uniforms in _uniform_chunks(spec):
        for offset in range(uniforms.shape[0]):
            step_index = start + offset
            if track_patterns and step_index >= spec.burn_in:
                tails, isolated = _pattern_counts(states)
                pattern_sums += spec.alpha * tails + isolated
            states, moves = kernel.step(states, uniforms[offset])
            if step_index >= spec.burn_in:
                flux_sums += moves
    steps_used = spec.steps - spec.burn_in
    per_replicate = flux_sums / (steps_used * spec.L)
    mean = float(per_replicate.mean())
    stderr = _stderr(per_replicate.tolist())
    if track_patterns:
        pattern_per_replicate = pattern_sums / (steps_used * spec.L)
        pattern_mean = float(pattern_per_replicate.mean())
        pattern_stderr = _stderr(pattern_per_replicate.tolist())
    else:
        pattern_mean = pattern_stderr = None
    return FluxEstimate(
        spec,
        mean,
        stderr,
        tuple(per_replicate.tolist()),
        pattern_mean,
        pattern_stderr,
    )


def _stderr(values) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / np.sqrt(len(values)))


def simulate_trajectory(spec: SimulationSpec):
    """Single-replicate trajectory: configuration strings and per-step moves.

    Returns (configs, moves) with len(configs) == steps + 1 including the
    initial state; moves[t] particles moved during step t.
    """
    spec = replace(spec, replicates=1).validated()
    rule = resolve_rule(spec.rule, spec.alpha)
    kernel = _Kernel(rule, spec.alpha)
    states = _initial_states(spec)
    configs = ["".join(str(int(b)) for b in states[0])]
    moves: list[int] = []
    if kernel.stochastic:
        for _, uniforms in _uniform_chunks(spec):
            for offset in range(uniforms.shape[0]):
                states, step_moves = kernel.step(states, uniforms[offset])
                configs.append("".join(str(int(b)) for b in states[0]))
                moves.append(int(step_moves[0]))
    else:
        for _ in range(spec.steps):
            states, step_moves = kernel.step(states, None)
            configs.append("".join(str(int(b)) for b in states[0]))
            moves.append(int(step_moves[0]))
    return configs, moves


def deterministic_cycle_flux(
    initial: RingLike, rule: FluxRule | None = None, max_steps: int = 200_000
) -> Fraction:
    """Exact long-run flux of a deterministic rule via cycle detection.

    Iterates until a configuration repeats, then averages the particle moves
    over one full period; the result is the exact limit of the time-averaged
    flux from this initial condition.
    """
    from .dynamics import DETERMINISTIC

    if rule is None:
        rule = DETERMINISTIC
    if rule.is_stochastic:
        raise InvalidArgumentError("cycle averaging needs a deterministic rule")
    kernel = _Kernel(rule, 0.0)
    ring = as_ring(initial)
    state = np.array([ring.sites], dtype=np.int8)
    seen: dict[bytes, int] = {}
    moves: list[int] = []
    for step in range(max_steps):
        key = state.tobytes()
        if key in seen:
            start = seen[key]
            period_moves = moves[start:]
            return Fraction(sum(period_moves), len(period_moves) * len(ring))
        seen[key] = step
        state, step_moves = kernel.step(state, None)
        moves.append(int(step_moves[0]))
    raise InvalidArgumentError(
        f"no cycle found within {max_steps} steps; raise max_steps"
    )


def sweep_diagram(
    L: int,
    alpha: float,
    rule: str = "stoch-u",
    steps: int = 1000,
    burn_in: int = 0,
    replicates: int = 8,
    seed: int = 0,
    m110_values=None,
) -> list[DiagramRow]:
    """Flux estimates over the whole (m1, m110) grid of one ring size.

    The grid runs over the coarse bound 2*m110 <= m1 <= L - m110; points
    whose sector turns out to be empty carry no estimate (warning rows).
    Each grid point gets a seed derived from (seed, m1, m110) so
    subsetting the grid does not change any point's result.
    """
    rows = []
    grid = [
        (m1, m110)
        for m110 in range(0, L // 3 + 1)
        for m1 in range(2 * m110, L - m110 + 1)
    ]
    for m1, m110 in grid:
        if m110_values is not None and m110 not in m110_values:
            continue
        feasible = sector_is_feasible(L, m1, m110)
        if not feasible:
            rows.append(
                DiagramRow(
                    L, m1, m110, alpha, False, m1 / L, m110 / L,
                    None, None, steps, burn_in, replicates, seed,
                )
            )
            continue
        point_seed = int(
            np.random.SeedSequence([seed, m1, m110]).generate_state(1)[0]
        )
        estimate = run_flux(
            SimulationSpec(
                rule=rule,
                L=L,
                alpha=alpha,
                steps=steps,
                burn_in=burn_in,
                seed=point_seed,
                replicates=replicates,
                m1=m1,
                m110=m110,
            ),
            track_patterns=False,
        )
        if rule == "stoch-v":
            q_u_hat = m1 / L - estimate.flux_mean
        else:
            q_u_hat = estimate.flux_mean
        rows.append(
            DiagramRow(
                L, m1, m110, alpha, True, m1 / L, m110 / L,
                q_u_hat, estimate.flux_stderr, steps, burn_in,
                replicates, point_seed,
            )
        )
    return rows
