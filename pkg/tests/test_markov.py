from fractions import Fraction

import numpy as np
import pytest

import cases
import helpers
from ringflux import (
    NumericalFailureError,
    build_matrix,
    class_weight_exponents,
    conjecture_vector,
    enumerate_sector,
    recurrent_classes,
    stationary,
    stationary_exact,
    verify_conjecture,
)


@pytest.fixture(scope="module")
def reference_sets():
    decomposition = recurrent_classes(enumerate_sector(10, 6, 2))
    return decomposition.recurrent


def test_matrix_entries_match_reference(reference_sets):
    for omega, expected in zip(reference_sets,
                               (cases.OMEGA1_MATRIX, cases.OMEGA2_MATRIX)):
        matrix = build_matrix(omega)
        points = [Fraction(1, 5), Fraction(1, 3), Fraction(1, 2),
                  Fraction(2, 3), Fraction(6, 7)]
        for i, row in enumerate(matrix.entries):
            for j, entry in enumerate(row):
                for a in points:
                    assert entry(a) == helpers.poly_eval(expected[i][j], a), \
                        (omega.index, i, j)


def test_row_sums_are_one(reference_sets):
    for omega in reference_sets:
        assert build_matrix(omega).row_sums_are_one()


def test_matrix_evaluation_shapes(reference_sets):
    matrix = build_matrix(reference_sets[1])
    exact_rows = matrix.evaluate(Fraction(1, 3))
    assert all(sum(row) == 1 for row in exact_rows)
    dense = matrix.evaluate(0.3)
    assert isinstance(dense, np.ndarray)
    assert dense.shape == (5, 5)
    np.testing.assert_allclose(dense.sum(axis=1), 1.0)


def test_stationary_matches_frozen_eigenvectors(reference_sets):
    weight_funcs = (cases.omega1_weights, cases.omega2_weights)
    for omega, weights_of in zip(reference_sets, weight_funcs):
        matrix = build_matrix(omega)
        for a in (0.3, 0.5, 0.7):
            got = stationary(matrix, a)
            raw = weights_of(a)
            expected = [w / sum(raw) for w in raw]
            worst = max(abs(p - e) / e for p, e in zip(got.probabilities,
                                                       expected))
            assert worst <= 1e-10
            assert got.residual <= 1e-12


def test_stationary_exact_matches_conjecture(reference_sets):
    for omega in reference_sets:
        matrix = build_matrix(omega)
        for a in (Fraction(1, 3), Fraction(1, 2), Fraction(4, 5)):
            pi = stationary_exact(matrix, a)
            assert list(pi) == list(conjecture_vector(omega, a))


def test_conjecture_vector_uses_orbit_sizes(reference_sets):
    omega = reference_sets[1]
    a = Fraction(1, 2)
    weights = []
    for cls in omega.members:
        n_tail, n_isolated = class_weight_exponents(cls)
        weights.append(
            cls.orbit_size * a ** n_isolated / (1 - a) ** (n_tail + n_isolated)
        )
    expected = [w / sum(weights) for w in weights]
    assert list(conjecture_vector(omega, a)) == expected


def test_class_weight_exponents_match_pattern_counts(reference_sets):
    for omega in reference_sets:
        for cls in omega.members:
            _, _, k1, k2 = helpers.stats(str(cls.representative))
            assert class_weight_exponents(cls) == (k1, k2)


def test_verify_conjecture_reports(reference_sets):
    report = verify_conjecture(reference_sets[0], alphas=(0.2, 0.8), tol=1e-8)
    assert report.passed
    assert set(report.max_relative_error) == {0.2, 0.8}
    assert all(err <= 1e-8 for err in report.max_relative_error.values())


def test_stationary_rejects_degenerate_alpha(reference_sets):
    matrix = build_matrix(reference_sets[0])
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(Exception):
            stationary(matrix, bad)


def test_power_iteration_fallback_agrees(reference_sets):
    from ringflux import markov

    matrix = build_matrix(reference_sets[0])
    P = matrix.evaluate(0.45)
    direct = markov._refined_solve(P)
    iterated = markov._power_iteration(P, 1e-14)
    np.testing.assert_allclose(direct, iterated, atol=1e-10)
