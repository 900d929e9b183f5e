"""Independent oracles for the test suite.

Everything here works on plain strings with brute force so that expected
values never come from the code under test. Keep these slow and obvious.
"""

from fractions import Fraction
from itertools import product
from math import comb


def all_strings(L):
    for bits in product("01", repeat=L):
        yield "".join(bits)


def cyclic_count(s, pattern):
    L = len(s)
    # enough repetitions that every window, even on a ring shorter than
    # the pattern, is a plain substring
    extended = s * ((L - 1 + len(pattern)) // L + 1)
    return sum(1 for i in range(L) if extended[i:i + len(pattern)] == pattern)


def stats(s):
    """(m1, m110, m1110, m010) by direct cyclic pattern counting."""
    return (
        s.count("1"),
        cyclic_count(s, "110"),
        cyclic_count(s, "1110"),
        cyclic_count(s, "010"),
    )


def rotations(s):
    return [s[i:] + s[:i] for i in range(len(s))]


def brute_canonical(s):
    return min(rotations(s))


def brute_orbit_size(s):
    return len(set(rotations(s)))


def sector_strings(L, m1, m110):
    return [
        s for s in all_strings(L)
        if s.count("1") == m1 and cyclic_count(s, "110") == m110
    ]


def brute_partition(L, m1, m110):
    """Histogram of (m1110, m010) over every string of the sector."""
    table = {}
    for s in sector_strings(L, m1, m110):
        _, _, k1, k2 = stats(s)
        table[(k1, k2)] = table.get((k1, k2), 0) + 1
    return table


def brute_sector_partitions(L):
    """One scan of all 2^L strings, histogrammed per (m1, m110) sector."""
    sectors = {}
    for s in all_strings(L):
        m1, m110, k1, k2 = stats(s)
        table = sectors.setdefault((m1, m110), {})
        table[(k1, k2)] = table.get((k1, k2), 0) + 1
    return sectors


def poly_eval(expr, alpha):
    """Evaluate a probability expression like '2*alpha*(1-alpha)^2' exactly."""
    return eval(  # noqa: S307 - fixed test vocabulary, no user input
        expr.replace("^", "**"), {"__builtins__": {}}, {"alpha": alpha}
    )


def expand_exponents(exponent_map):
    """Dense alpha coefficients of sum of c * alpha^i * (1-alpha)^k terms.

    Trailing zeros are trimmed so the tuple is canonical.
    """
    degree = max((i + k for i, k in exponent_map), default=0)
    coeffs = [0] * (degree + 1)
    for (i, k), c in exponent_map.items():
        for j in range(k + 1):
            coeffs[i + j] += c * comb(k, j) * (-1) ** j
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


DET_FLUX_WINDOWS = {"1111", "1110", "1101", "1100", "0110"}


def det_step(s):
    """One deterministic update, straight from the flux table.

    flux[j] reads the window (s[j-2], s[j-1], s[j], s[j+1]) cyclically and
    the site update is s[j] + flux[j] - flux[j+1].
    """
    L = len(s)
    flux = [
        1 if "".join(s[(j + d) % L] for d in (-2, -1, 0, 1)) in DET_FLUX_WINDOWS
        else 0
        for j in range(L)
    ]
    out = [
        int(s[j]) + flux[j] - flux[(j + 1) % L]
        for j in range(L)
    ]
    assert all(bit in (0, 1) for bit in out)
    return "".join(str(bit) for bit in out)


def _maximal_blocks(s):
    """Cyclic maximal runs of 1s as (start, length); empty for 0^L and 1^L."""
    L = len(s)
    if "0" not in s or "1" not in s:
        return []
    blocks = []
    for i in range(L):
        if s[i] == "1" and s[i - 1] == "0":
            length = 1
            while s[(i + length) % L] == "1":
                length += 1
            blocks.append((i, length))
    return blocks


def motion_branches(s):
    """Distribution of one step of the particle-motion rules.

    Isolated particles hop right with probability one, blocks of two are
    frozen, and the rightmost particle of each block of three or more hops
    right independently with probability alpha. Returns a map from
    successor string to {(alpha_power, comp_power): multiplicity}.
    """
    L = len(s)
    blocks = _maximal_blocks(s)
    certain = [start for start, length in blocks if length == 1]
    optional = [(start + length - 1) % L for start, length in blocks if length >= 3]
    outcomes = {}
    for mask in range(1 << len(optional)):
        fired = [optional[b] for b in range(len(optional)) if mask >> b & 1]
        sites = list(s)
        for site in certain + fired:
            sites[site] = "0"
        for site in certain + fired:
            sites[(site + 1) % L] = "1"
        successor = "".join(sites)
        key = (len(fired), len(optional) - len(fired))
        per = outcomes.setdefault(successor, {})
        per[key] = per.get(key, 0) + 1
    return outcomes


def motion_distribution_coeffs(s):
    """Successor -> canonical dense alpha coefficients, via motion rules."""
    return {
        successor: expand_exponents(exponents)
        for successor, exponents in motion_branches(s).items()
    }


def stationary_flux_exact(members, probabilities, alpha):
    """Sum of pi(x) * (alpha * rho1110 + rho010) over class representatives."""
    total = Fraction(0)
    for member, probability in zip(members, probabilities):
        _, _, k1, k2 = stats(member)
        total += probability * (alpha * k1 + k2)
    return total / len(members[0])
