"""Frozen reference data for the reproduction tests.

Member lists are canonical representatives in lexicographic order. Matrix
entries are row-stochastic transition probabilities between those members,
written in the fixed vocabulary accepted by helpers.poly_eval. Weight
functions give the unnormalized stationary ratios; they take an exact
Fraction and return one Fraction per member, index-aligned with the lists.
"""

from fractions import Fraction

# sector L=10, m1=6, m110=2: first irreducible set, 8 rotation classes
OMEGA1_MEMBERS = (
    "0001101111",
    "0001110111",
    "0001111011",
    "0010110111",
    "0010111011",
    "0011011101",
    "0011101101",
    "0101011011",
)

OMEGA1_MATRIX = (
    ("(1-alpha)", "0", "0", "0", "0", "alpha", "0", "0"),
    ("alpha*(1-alpha)", "(1-alpha)^2", "0", "0", "0", "alpha^2",
     "alpha*(1-alpha)", "0"),
    ("0", "alpha", "(1-alpha)", "0", "0", "0", "0", "0"),
    ("0", "(1-alpha)", "0", "0", "0", "0", "alpha", "0"),
    ("0", "alpha", "(1-alpha)", "0", "0", "0", "0", "0"),
    ("0", "0", "0", "(1-alpha)", "0", "0", "0", "alpha"),
    ("0", "0", "0", "alpha", "(1-alpha)", "0", "0", "0"),
    ("0", "0", "0", "0", "1", "0", "0", "0"),
)


def omega1_weights(alpha):
    a, c = alpha, 1 - alpha
    one = Fraction(1) if isinstance(alpha, Fraction) else 1.0
    return [
        c / a ** 2,
        1 / a ** 2,
        c / a ** 2,
        1 / a,
        1 / a,
        1 / a,
        1 / a,
        one,
    ]


# sector L=10, m1=6, m110=2: second irreducible set, 5 rotation classes
OMEGA2_MEMBERS = (
    "0011001111",
    "0011010111",
    "0011100111",
    "0011101011",
    "0101101011",
)

OMEGA2_MATRIX = (
    ("(1-alpha)", "0", "0", "alpha", "0"),
    ("(1-alpha)", "0", "0", "alpha", "0"),
    ("0", "2*alpha*(1-alpha)", "(1-alpha)^2", "0", "alpha^2"),
    ("0", "alpha", "(1-alpha)", "0", "0"),
    ("0", "0", "1", "0", "0"),
)


def omega2_weights(alpha):
    a, c = alpha, 1 - alpha
    one = Fraction(1) if isinstance(alpha, Fraction) else 1.0
    return [
        2 * c / a ** 2,
        2 / a,
        1 / a ** 2,
        2 / a,
        one,
    ]


# sector L=16, m1=11, m110=4: single irreducible set, 30 rotation classes
L16_MEMBERS = (
    "0011011011011111",
    "0011011011101111",
    "0011011011110111",
    "0011011011111011",
    "0011011101101111",
    "0011011101110111",
    "0011011101111011",
    "0011011110110111",
    "0011011110111011",
    "0011011111011011",
    "0011101101101111",
    "0011101101110111",
    "0011101101111011",
    "0011101110110111",
    "0011101110111011",
    "0011101111011011",
    "0011110110110111",
    "0011110110111011",
    "0011110111011011",
    "0011111011011011",
    "0101101101101111",
    "0101101101110111",
    "0101101101111011",
    "0101101110110111",
    "0101101110111011",
    "0101101111011011",
    "0101110110110111",
    "0101110110111011",
    "0101110111011011",
    "0101111011011011",
)


def l16_weights(alpha):
    a, c = alpha, 1 - alpha
    one = Fraction(1) if isinstance(alpha, Fraction) else 1.0
    return [
        c / a, 1 / a, 1 / a, c / a, 1 / a,
        1 / (c * a), 1 / a, 1 / a, 1 / a, c / a,
        1 / a, 1 / (c * a), 1 / a, 1 / (c * a), 1 / (c * a),
        1 / a, 1 / a, 1 / a, 1 / a, c / a,
        one, 1 / c, one, 1 / c, 1 / c,
        one, 1 / c, 1 / c, 1 / c, one,
    ]


# counting table of the full (10, 6, 2) sector: (k1, k2) -> N
SECTOR_10_6_2_TABLE = {(1, 0): 30, (2, 0): 15, (1, 1): 60, (0, 2): 15}

# the same split by irreducible set (configurations, not classes)
OMEGA1_TABLE = {(1, 0): 20, (2, 0): 10, (1, 1): 40, (0, 2): 10}
OMEGA2_TABLE = {(1, 0): 10, (2, 0): 5, (1, 1): 20, (0, 2): 5}
