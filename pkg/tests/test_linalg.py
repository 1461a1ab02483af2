import numpy as np
import pytest

from kreinsplit import (
    J4,
    QuarticPoly,
    charpoly_three_term,
    exterior_power,
    inner,
    is_symplectic,
    quartic_roots,
    symplectic_form,
)
from kreinsplit.errors import DegeneratePolynomialError

from oracles import best_match_distance, charpoly_by_sampling, det_cofactor

E = np.eye(4, dtype=complex)


def test_inner_examples():
    assert inner(E[0], E[0]) == 1
    assert inner(E[0], E[1]) == 0
    # conjugation sits on the second slot
    assert inner([1j, 0, 0, 0], E[0]) == 1j
    assert inner(E[0], [1j, 0, 0, 0]) == -1j


def test_symplectic_form_examples():
    assert symplectic_form(E[0], E[2]) == 1
    assert symplectic_form(E[0], E[0]) == 0


def test_symplectic_form_diagonal_purely_imaginary():
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        val = symplectic_form(x, x)
        assert abs(val.real) < 1e-12 * (1 + abs(val))


def test_symplectic_form_conjugate_antisymmetry():
    rng = np.random.default_rng(12)
    for _ in range(50):
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        y = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert abs(symplectic_form(x, y) + np.conj(symplectic_form(y, x))) < 1e-12


def test_is_symplectic():
    assert is_symplectic(np.eye(4), 1e-12)
    assert is_symplectic(J4, 1e-12)
    assert not is_symplectic(2 * np.eye(4), 1e-8)
    with pytest.raises(ValueError):
        is_symplectic(np.eye(4), 0.0)


def test_exterior_power_basic():
    rng = np.random.default_rng(13)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert exterior_power(0, 0, A) == 1
    assert abs(exterior_power(1, 0, A) - np.trace(A)) < 1e-12
    alpha = 0.7 - 0.3j
    assert abs(exterior_power(2, 0, alpha * np.eye(4)) - 6 * alpha ** 2) < 1e-12


def test_exterior_power_is_determinant():
    rng = np.random.default_rng(14)
    for _ in range(20):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        ref = det_cofactor(A)
        assert abs(exterior_power(4, 0, A) - ref) <= 1e-12 * abs(ref)


def test_exterior_power_binomial_identity():
    rng = np.random.default_rng(15)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    from math import comb
    for k1 in range(5):
        for k2 in range(5 - k1):
            lhs = exterior_power(k1, k2, A, A)
            rhs = comb(k1 + k2, k1) * exterior_power(k1 + k2, 0, A)
            assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


def test_exterior_power_preconditions():
    A = np.eye(4)
    with pytest.raises(ValueError):
        exterior_power(3, 2, A, A)
    with pytest.raises(ValueError):
        exterior_power(-1, 0, A)
    with pytest.raises(ValueError):
        exterior_power(0, 1, A)  # A2 missing


def test_charpoly_double_pair_coefficients():
    # J4 has eigenvalues {i, i, -i, -i}; recentring at i exposes the
    # double-pair structure of the low coefficients.
    p = charpoly_three_term(J4, J4, 1j)
    assert abs(p.coeffs[0]) < 1e-12
    assert abs(p.coeffs[1]) < 1e-12
    assert abs(p.coeffs[2] - (2j) ** 2) < 1e-12
    assert abs(p.coeffs[3] - 2 * 2j) < 1e-12
    assert p.coeffs[4] == 1


def test_charpoly_matches_sampled_determinant():
    rng = np.random.default_rng(16)
    for _ in range(10):
        M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        lam0 = rng.normal() + 1j * rng.normal()
        got = np.array(charpoly_three_term(M, M, lam0).coeffs)
        ref = charpoly_by_sampling(M, lam0)
        scale = np.max(np.abs(ref))
        assert np.max(np.abs(got - ref)) < 1e-10 * scale


def test_charpoly_zero_matrix():
    p = charpoly_three_term(np.zeros((4, 4)), np.zeros((4, 4)), 0.0)
    assert p.coeffs[:4] == (0, 0, 0, 0)
    assert p.coeffs[4] == 1


def test_charpoly_center_independence():
    rng = np.random.default_rng(17)
    for _ in range(10):
        M = rng.normal(size=(4, 4))
        pa = charpoly_three_term(M, M, 0.3 + 0.4j).to_absolute()
        pb = charpoly_three_term(M, M, -1.1 + 0.2j).to_absolute()
        scale = max(max(abs(c) for c in pa), 1.0)
        assert max(abs(a - b) for a, b in zip(pa, pb)) < 1e-12 * scale


def test_quartic_roots_simple():
    roots = quartic_roots(QuarticPoly((-1, 0, 0, 0, 1)))
    assert best_match_distance(roots, [1, -1, 1j, -1j]) < 1e-12


def test_quartic_roots_quadruple():
    roots = quartic_roots(QuarticPoly((16, -32, 24, -8, 1)))
    assert best_match_distance(roots, [2, 2, 2, 2]) < 1e-8


def test_quartic_roots_vs_companion():
    rng = np.random.default_rng(18)
    for _ in range(50):
        c = rng.normal(size=4) + 1j * rng.normal(size=4)
        p = QuarticPoly((*c, 1.0))
        companion = np.zeros((4, 4), dtype=complex)
        companion[1:, :3] = np.eye(3)
        companion[:, 3] = -c
        ref = np.linalg.eigvals(companion)
        assert best_match_distance(quartic_roots(p), ref) < 1e-9


def test_quartic_roots_coefficient_round_trip():
    rng = np.random.default_rng(19)
    for _ in range(50):
        c = rng.normal(size=4) + 1j * rng.normal(size=4)
        p = QuarticPoly((*c, 1.0))
        roots = quartic_roots(p)
        rebuilt = np.poly(roots)[::-1]  # ascending
        scale = 1 + np.max(np.abs(c))
        assert np.max(np.abs(rebuilt - np.array(p.coeffs))) < 1e-9 * scale


def test_quartic_roots_polish_criterion():
    rng = np.random.default_rng(20)
    for _ in range(50):
        c = rng.normal(size=4) + 1j * rng.normal(size=4)
        p = QuarticPoly((*c, 1.0), center=rng.normal() + 1j * rng.normal())
        bound = 1e-12 * (1 + p.magnitude())
        assert all(abs(p(r)) <= bound for r in quartic_roots(p))


def test_quartic_roots_rejects_degenerate():
    with pytest.raises(DegeneratePolynomialError):
        quartic_roots(QuarticPoly((1, 2, 3, 4, 0)))


def test_quartic_poly_recentring_evaluation():
    p = QuarticPoly((1, 2, 0, 0, 1), center=1 + 1j)
    lam = 2.5 - 0.5j
    x = lam - (1 + 1j)
    assert abs(p(lam) - (1 + 2 * x + x ** 4)) < 1e-12
