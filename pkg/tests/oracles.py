"""Independent reference implementations used only by tests.

These deliberately avoid the package's own code paths: determinants by
cofactor expansion, the matrix exponential by scaling and squaring, and
characteristic coefficients by sampling the determinant and solving a
Vandermonde system.
"""

from itertools import permutations

import numpy as np


def det_cofactor(A):
    """Determinant by recursive cofactor expansion along the first row."""
    A = np.asarray(A)
    n = A.shape[0]
    if n == 1:
        return A[0, 0]
    total = 0
    for j in range(n):
        minor = np.delete(np.delete(A, 0, axis=0), j, axis=1)
        total += (-1) ** j * A[0, j] * det_cofactor(minor)
    return total


def expm_taylor(X, order=30):
    """Matrix exponential by scaling and squaring with a Taylor core."""
    Y = np.asarray(X, dtype=float)
    squarings = 0
    while np.max(np.abs(Y)) > 0.25:
        Y = Y / 2.0
        squarings += 1
    E = np.eye(Y.shape[0])
    term = np.eye(Y.shape[0])
    for k in range(1, order):
        term = term @ Y / k
        E = E + term
    for _ in range(squarings):
        E = E @ E
    return E


def charpoly_by_sampling(M, center):
    """Coefficients of det(lambda I - M) in powers of (lambda - center),
    from five determinant samples and a Vandermonde solve."""
    M = np.asarray(M, dtype=complex)
    xs = np.array([0.6 + 0.2j, -0.8 + 0.5j, 1.1 - 0.4j, -0.3 - 0.9j, 0.15 + 1.2j])
    vand = np.vander(xs, 5, increasing=True)
    vals = np.array([det_cofactor((center + x) * np.eye(4) - M) for x in xs])
    return np.linalg.solve(vand, vals)


def best_match_distance(got, want):
    """Smallest max-distance over pairings of two equal-length complex
    multisets (brute force; fine for four values)."""
    got = list(got)
    want = list(want)
    best = np.inf
    for perm in permutations(range(len(want))):
        d = max(abs(got[i] - want[p]) for i, p in enumerate(perm))
        best = min(best, d)
    return best


def random_symmetric4(rng, scale=1.0):
    A = rng.normal(size=(4, 4)) * scale
    return (A + A.T) / 2.0


def random_symmetric2(rng, scale=1.0):
    A = rng.normal(size=(2, 2)) * scale
    return (A + A.T) / 2.0
