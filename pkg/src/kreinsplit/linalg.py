"""Fixed-shape complex linear algebra for dimension four.

Everything here is specialized to 4x4 matrices: the standard symplectic
form, mixed exterior powers of one or two linear maps, characteristic
polynomials written in three-term recentred form, and a closed-form
quartic solver with Newton polishing.  All scalars are double precision;
matrices are plain numpy arrays.
"""

import cmath
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import DegeneratePolynomialError

#: The standard symplectic form on R^4, block form [[0, I], [-I, 0]].
J4 = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])

_ID4 = np.eye(4)


def as_vec4(x):
    """Coerce to a complex 4-vector, rejecting non-finite entries."""
    v = np.asarray(x, dtype=complex).reshape(4)
    if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
        raise ValueError("vector has non-finite entries")
    return v


def as_mat4(m):
    """Coerce to a complex 4x4 matrix, rejecting non-finite entries."""
    a = np.asarray(m, dtype=complex).reshape(4, 4)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix has non-finite entries")
    return a


def inner(x, y):
    """Hermitian inner product sum_j x_j * conj(y_j).

    Conjugation sits on the *second* argument, so ``inner((i,0,0,0), e1)``
    is ``i`` and not ``-i``.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return complex(np.vdot(y, x))


def symplectic_form(x, y):
    """The pairing <x, J4 y>.  Antisymmetric under conjugated swap:
    symplectic_form(x, y) == -conj(symplectic_form(y, x)), hence purely
    imaginary on the diagonal."""
    return inner(x, J4 @ np.asarray(y, dtype=complex))


def max_abs(m):
    """Entrywise max-norm."""
    return float(np.max(np.abs(m)))


def is_symplectic(M, tol):
    """True iff M is real (imaginary parts below tol) and M^T J4 M = J4
    to entrywise tolerance tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = np.asarray(M, dtype=complex)
    if max_abs(M.imag) > tol:
        return False
    R = M.real
    return max_abs(R.T @ J4 @ R - J4) <= tol


def symplectic_inverse(M):
    """Inverse of a real symplectic matrix via -J4 M^T J4 (exact on the
    group, cheaper than LU, and self-correcting against drift)."""
    M = np.asarray(M)
    return -J4 @ M.T @ J4


def exterior_power(k1, k2, A1, A2=None):
    """Scaling factor of the mixed exterior power of two maps on C^4.

    Sums, over all assignments of {identity, A1, A2} to the four basis
    columns using A1 exactly ``k1`` times and A2 exactly ``k2`` times, the
    determinant of the resulting column matrix.  Special cases:
    ``exterior_power(0, 0, ...)`` is 1, ``exterior_power(1, 0, A)`` is
    trace(A) and ``exterior_power(4, 0, A)`` is det(A).

    Parameters
    ----------
    k1, k2 : int
        Occurrence counts, k1 >= 0, k2 >= 0, k1 + k2 <= 4.
    A1, A2 : 4x4 arrays
        The two maps.  A2 may be omitted when k2 == 0.

    Returns
    -------
    complex
    """
    if k1 < 0 or k2 < 0 or k1 + k2 > 4:
        raise ValueError(f"invalid occurrence counts k1={k1}, k2={k2}")
    A1 = as_mat4(A1) if A1 is not None else _ID4.astype(complex)
    if A2 is None:
        if k2 > 0:
            raise ValueError("A2 required when k2 > 0")
        A2 = _ID4.astype(complex)
    else:
        A2 = as_mat4(A2)

    total = 0.0 + 0.0j
    cols = np.empty((4, 4), dtype=complex)
    indices = range(4)
    for ones in combinations(indices, k1):
        rest = [i for i in indices if i not in ones]
        for twos in combinations(rest, k2):
            for i in indices:
                if i in ones:
                    cols[:, i] = A1[:, i]
                elif i in twos:
                    cols[:, i] = A2[:, i]
                else:
                    cols[:, i] = 0.0
                    cols[i, i] = 1.0
            total += np.linalg.det(cols)
    return complex(total)


@dataclass(frozen=True)
class QuarticPoly:
    """Quartic polynomial in powers of (lambda - center).

    ``coeffs`` are ordered by ascending power; characteristic polynomials
    produced by :func:`charpoly_three_term` are monic (coeffs[4] == 1).
    """

    coeffs: tuple
    center: complex = 0j

    def __post_init__(self):
        if len(self.coeffs) != 5:
            raise ValueError("need exactly five coefficients")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        object.__setattr__(self, "center", complex(self.center))

    def __call__(self, lam):
        x = complex(lam) - self.center
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self, lam):
        x = complex(lam) - self.center
        acc = 0j
        for k in range(4, 0, -1):
            acc = acc * x + k * self.coeffs[k]
        return acc

    def magnitude(self):
        """Coefficient max-norm, used to scale residual tolerances."""
        return max(abs(c) for c in self.coeffs)

    def to_absolute(self):
        """Coefficients of the same polynomial expanded about 0."""
        out = [0j] * 5
        for k, ck in enumerate(self.coeffs):
            for j in range(k + 1):
                out[j] += ck * comb(k, j) * (-self.center) ** (k - j)
        return tuple(out)


def charpoly_three_term(gamma0, gammat, lambda0):
    """Characteristic polynomial of ``gammat`` recentred at ``lambda0``.

    Expands det(lambda*I - gammat) through the splitting
    (lambda - lambda0)*I + (lambda0*I - gamma0) - (gammat - gamma0), so the
    coefficient of (lambda - lambda0)^k is a signed sum of mixed exterior
    powers of the two constant maps.  Recentring at a near-double root
    avoids catastrophic cancellation when the roots are later extracted.
    """
    gamma0 = as_mat4(gamma0)
    gammat = as_mat4(gammat)
    lambda0 = complex(lambda0)
    K = lambda0 * _ID4 - gamma0
    D = gammat - gamma0
    coeffs = []
    for k in range(5):
        ck = 0j
        for k2 in range(4 - k + 1):
            k1 = 4 - k - k2
            term = exterior_power(k1, k2, K, D)
            ck += term if k2 % 2 == 0 else -term
        coeffs.append(ck)
    return QuarticPoly(tuple(coeffs), center=lambda0)


def _quadratic_roots(b, c):
    # Monic y^2 + b y + c, numerically stable branch choice.
    disc = cmath.sqrt(b * b - 4.0 * c)
    if (b.conjugate() * disc).real < 0.0:
        disc = -disc
    q = -(b + disc) / 2.0
    if q == 0:
        return 0j, -b
    return q, c / q


def _cubic_roots(a2, a1, a0):
    # Monic z^3 + a2 z^2 + a1 z + a0 via Cardano, all three roots.
    shift = -a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = a0 - a2 * a1 / 3.0 + 2.0 * a2 ** 3 / 27.0
    disc = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    u1 = -q / 2.0 + disc
    u2 = -q / 2.0 - disc
    u = u1 if abs(u1) >= abs(u2) else u2
    if u == 0:
        return [shift, shift, shift]
    big = u ** (1.0 / 3.0)
    omega = complex(-0.5, 0.8660254037844386)
    roots = []
    for k in range(3):
        ck = big * omega ** k
        roots.append(ck - p / (3.0 * ck) + shift)
    return roots


def _polish(poly, x):
    # Newton iteration; evaluation goes through the centred Horner form,
    # which is what keeps near-double roots well conditioned.
    lam = poly.center + x
    best_lam = lam
    best_res = abs(poly(lam))
    for _ in range(40):
        f = poly(lam)
        if f == 0:
            return lam
        df = poly.derivative(lam)
        if df == 0:
            break
        step = f / df
        lam_new = lam - step
        res_new = abs(poly(lam_new))
        if not np.isfinite(res_new):
            break
        if res_new < best_res:
            best_res = res_new
            best_lam = lam_new
        if res_new >= abs(f) or abs(step) <= 1e-17 * (1.0 + abs(lam_new)):
            break
        lam = lam_new
    return best_lam


def quartic_roots(p):
    """All four roots of a quartic, in absolute coordinates.

    Primary path is the closed-form resolvent-cubic factorization of the
    depressed quartic, followed by Newton polishing on the recentred
    polynomial; companion-matrix eigenvalues are deliberately not used so
    eigenvalue extraction elsewhere can rest on this routine without
    circularity.  Clustered roots are reported individually; no
    multiplicity inference is attempted.

    Returns a numpy array of four complex numbers sorted by (real, imag).
    """
    c0, c1, c2, c3, c4 = p.coeffs
    if c4 == 0:
        raise DegeneratePolynomialError("leading coefficient is zero")
    b = c3 / c4
    c = c2 / c4
    d = c1 / c4
    e = c0 / c4
    # Depressed quartic y^4 + pp y^2 + qq y + rr with x = y - b/4.
    b2 = b * b
    pp = c - 3.0 * b2 / 8.0
    qq = d - b * c / 2.0 + b * b2 / 8.0
    rr = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0
    shift = -b / 4.0
    scale = 1.0 + max(abs(pp), abs(qq), abs(rr))
    if abs(qq) <= 1e-14 * scale:
        z1, z2 = _quadratic_roots(pp, rr)
        s1 = cmath.sqrt(z1)
        s2 = cmath.sqrt(z2)
        ys = [s1, -s1, s2, -s2]
    else:
        res = _cubic_roots(2.0 * pp, pp * pp - 4.0 * rr, -qq * qq)
        big = max(res, key=abs)
        u = cmath.sqrt(big)
        s = (pp + big - qq / u) / 2.0
        w = (pp + big + qq / u) / 2.0
        y1, y2 = _quadratic_roots(u, s)
        y3, y4 = _quadratic_roots(-u, w)
        ys = [y1, y2, y3, y4]
    roots = [_polish(p, y + shift) for y in ys]
    roots.sort(key=lambda z: (z.real, z.imag))
    return np.array(roots, dtype=complex)
