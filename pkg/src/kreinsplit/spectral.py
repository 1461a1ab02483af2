"""Degenerate unit-circle eigenvalues of real symplectic 4x4 matrices.

Detects a non-semisimple double multiplier pair {L, conj(L)} on the unit
circle and extracts the normalized eigenvector/generalized-eigenvector
pair (eta1, eta2) with

    M eta1 = L eta1,        M eta2 = L eta2 + L eta1,

note the superdiagonal entry L rather than the textbook 1: every closed
form downstream assumes this normalization.  Rank decisions come from an
in-module one-sided Jacobi SVD specialized to the complex 4x4 case.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateAngleError,
    DegeneratePairingError,
    ExcludedCaseError,
    InconsistentChainError,
    NotAJordanBlockError,
)
from .linalg import (
    J4,
    as_mat4,
    charpoly_three_term,
    inner,
    is_symplectic,
    quartic_roots,
    symplectic_form,
)

_RANK_RTOL = 1e-8  # sigma below this times sigma_max counts as zero


def eigenvalues(M, center=0j):
    """All four eigenvalues of M via the recentred characteristic quartic.

    Recentring at an approximate eigenvalue removes the catastrophic
    cancellation that plagues near-double roots extracted from the
    expansion about zero.
    """
    M = as_mat4(M)
    return quartic_roots(charpoly_three_term(M, M, center))


def svd4(A):
    """One-sided Jacobi SVD of a complex 4x4 matrix.

    Returns (U, s, V) with A = U @ diag(s) @ V.conj().T and s sorted
    descending.  Columns are rotated in place by complex plane rotations
    until all column pairs are orthogonal to working precision; a handful
    of sweeps suffices at this size.
    """
    B = as_mat4(A).copy()
    V = np.eye(4, dtype=complex)
    for _ in range(60):
        off = 0.0
        for p in range(3):
            for q in range(p + 1, 4):
                ap = B[:, p]
                aq = B[:, q]
                alpha = np.vdot(ap, ap).real
                beta = np.vdot(aq, aq).real
                gam = np.vdot(ap, aq)
                denom = np.sqrt(alpha * beta)
                if denom == 0.0 or abs(gam) <= 1e-16 * denom:
                    continue
                off = max(off, abs(gam) / denom)
                phase = gam / abs(gam)
                tau = (beta - alpha) / (2.0 * abs(gam))
                t = -(1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                new_p = c * ap + s * np.conj(phase) * aq
                new_q = -s * ap + c * np.conj(phase) * aq
                B[:, p] = new_p
                B[:, q] = new_q
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp + s * np.conj(phase) * vq
                V[:, q] = -s * vp + c * np.conj(phase) * vq
        if off <= 1e-15:
            break
    s = np.linalg.norm(B, axis=0)
    order = np.argsort(-s)
    s = s[order]
    B = B[:, order]
    V = V[:, order]
    U = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        if s[i] > 0.0:
            U[:, i] = B[:, i] / s[i]
    return U, s, V


def detect_double_unitary(M, tol_cluster=1e-6, tol_circle=1e-6):
    """Find a double unit-circle eigenvalue with positive imaginary part.

    Returns the cluster center L when the spectrum consists of exactly one
    conjugate pair of two-point clusters {L, L} and {conj L, conj L} with
    intra-cluster spread at most ``tol_cluster``, |.|L| - 1| at most
    ``tol_circle`` and L further than 10 * tol_cluster from both +1 and
    -1.  Returns None otherwise; absence is a value, not an error.
    """
    evs = eigenvalues(M)
    plus = [z for z in evs if z.imag > 0]
    minus = [z for z in evs if z.imag <= 0]
    if len(plus) != 2 or len(minus) != 2:
        return None
    if abs(plus[0] - plus[1]) > tol_cluster:
        return None
    if abs(minus[0] - minus[1]) > tol_cluster:
        return None
    lam = (plus[0] + plus[1]) / 2.0
    lam_conj = (minus[0] + minus[1]) / 2.0
    if abs(np.conj(lam) - lam_conj) > 2.0 * tol_cluster:
        return None
    if abs(abs(lam) - 1.0) > tol_circle:
        return None
    if abs(lam - 1.0) <= 10.0 * tol_cluster or abs(lam + 1.0) <= 10.0 * tol_cluster:
        return None
    # One recentred re-extraction: roots about 0 lose ~half the digits of a
    # near-double pair to cancellation, and downstream tracking measures
    # sums against this center, so it must come from the recentred path.
    refined = eigenvalues(M, center=lam)
    near = refined[np.argsort(np.abs(refined - lam))[:2]]
    lam = complex((near[0] + near[1]) / 2.0)
    if abs(abs(lam) - 1.0) > tol_circle:
        return None
    return lam


def make_jordan_symplectic(theta0, C):
    """Symplectic test matrix with a double multiplier exp(i*theta0).

    Block form [[R, R C], [0, R]] with R the rotation by theta0 and C real
    symmetric; block-triangular symplecticity needs exactly C = C^T.  The
    eigenvalues are exp(+-i*theta0), each of algebraic multiplicity two.
    The geometric multiplicity is one exactly when trace(C) != 0 (the
    chain obstruction <C v, v> against the rotation eigenvector v reduces
    to the trace); traceless C, including C = 0, gives the semisimple
    case.
    """
    theta0 = float(theta0)
    if abs(np.sin(theta0)) < 1e-12:
        raise DegenerateAngleError("theta0 is a multiple of pi; the multiplier would be +-1")
    C = np.asarray(C, dtype=float)
    if C.shape != (2, 2):
        raise ValueError("C must be 2x2")
    if C[0, 1] != C[1, 0]:
        raise ValueError("C must be symmetric")
    R = np.array([[np.cos(theta0), -np.sin(theta0)],
                  [np.sin(theta0), np.cos(theta0)]])
    M = np.zeros((4, 4))
    M[:2, :2] = R
    M[:2, 2:] = R @ C
    M[2:, 2:] = R
    return M


@dataclass(frozen=True)
class JordanPair:
    """Eigenvector eta1 and generalized eigenvector eta2 at multiplier
    lambda0, with the three symplectic pairings attached.

    For a genuine non-semisimple unit multiplier away from +-1 the
    pairings satisfy: form_21 real and nonzero, form_12 = -form_21, and
    form_22 purely imaginary; additionally eta1 pairs to zero with itself
    and with both conjugates, as does eta2 with the conjugates.  The
    residuals of all of these live in ``diagnostics``.
    """

    lambda0: complex
    eta1: np.ndarray
    eta2: np.ndarray
    form_21: complex
    form_12: complex
    form_22: complex
    diagnostics: dict = field(default_factory=dict, compare=False)

    def conjugated(self):
        """The pair at the conjugate multiplier (valid for real M)."""
        return JordanPair(
            lambda0=np.conj(self.lambda0),
            eta1=np.conj(self.eta1),
            eta2=np.conj(self.eta2),
            form_21=complex(symplectic_form(np.conj(self.eta2), np.conj(self.eta1))),
            form_12=complex(symplectic_form(np.conj(self.eta1), np.conj(self.eta2))),
            form_22=complex(symplectic_form(np.conj(self.eta2), np.conj(self.eta2))),
            diagnostics=dict(self.diagnostics),
        )


def pair_from_vectors(lambda0, eta1, eta2, diagnostics=None):
    """Assemble a JordanPair from given vectors, recomputing the forms."""
    eta1 = np.asarray(eta1, dtype=complex)
    eta2 = np.asarray(eta2, dtype=complex)
    return JordanPair(
        lambda0=complex(lambda0),
        eta1=eta1,
        eta2=eta2,
        form_21=complex(symplectic_form(eta2, eta1)),
        form_12=complex(symplectic_form(eta1, eta2)),
        form_22=complex(symplectic_form(eta2, eta2)),
        diagnostics=diagnostics or {},
    )


def jordan_pair(M, lambda0):
    """Extract the normalized chain at a detected double multiplier.

    eta1 spans the null space of K = lambda0 I - M (smallest singular
    direction); eta2 solves K eta2 = -lambda0 eta1 in least squares
    restricted to the orthogonal complement of the null space.  Gauge:
    eta1 is scaled so its largest entry is exactly 1, and eta2 carries no
    Euclidean component along eta1 (the minimum-norm solution already
    guarantees this).  All derived quantities are gauge-invariant; the
    gauge only makes runs reproducible.
    """
    M = as_mat4(M)
    lambda0 = complex(lambda0)
    if abs(abs(lambda0) - 1.0) > 1e-6:
        raise ExcludedCaseError(f"|lambda0| = {abs(lambda0):.12f} is not on the unit circle")
    if abs(lambda0 - 1.0) <= 1e-6 or abs(lambda0 + 1.0) <= 1e-6:
        raise ExcludedCaseError("multiplier at +-1 is outside the covered case")

    K = lambda0 * np.eye(4) - M
    U, s, V = svd4(K)
    null_mask = s <= _RANK_RTOL * s[0]
    ndim = int(np.count_nonzero(null_mask))
    if ndim == 0:
        raise NotAJordanBlockError(
            f"no null direction at lambda0 (smallest sigma {s[-1]:.3e}); "
            "lambda0 is not an eigenvalue to working precision")
    if ndim >= 2:
        raise NotAJordanBlockError(
            "geometric multiplicity exceeds one; the multiplier is semisimple")

    eta1 = V[:, 3]
    # Gauge: largest entry becomes exactly 1.
    idx = int(np.argmax(np.abs(eta1)))
    eta1 = eta1 / eta1[idx]

    b = -lambda0 * eta1
    coeffs = U.conj().T @ b
    w = np.zeros(4, dtype=complex)
    for i in range(3):
        w += (coeffs[i] / s[i]) * V[:, i]
    residual = float(np.linalg.norm(K @ w - b))
    scale = float(s[0] * np.linalg.norm(w) + np.linalg.norm(b) + 1.0)
    if residual > 1e-8 * scale:
        raise InconsistentChainError(
            f"chain equation residual {residual:.3e} exceeds tolerance; "
            "the Jordan structure is not consistent at this multiplier")
    eta2 = w

    f21 = complex(symplectic_form(eta2, eta1))
    f12 = complex(symplectic_form(eta1, eta2))
    f22 = complex(symplectic_form(eta2, eta2))
    if abs(f21) < 1e-10:
        raise DegeneratePairingError(
            f"|<eta2, J eta1>| = {abs(f21):.3e} is numerically zero")

    e1b = np.conj(eta1)
    e2b = np.conj(eta2)
    diagnostics = {
        "eigvec_residual": float(np.linalg.norm(M @ eta1 - lambda0 * eta1)),
        "chain_residual": residual,
        "null_sigma": float(s[3]),
        "sigma_max": float(s[0]),
        "pair_11": complex(symplectic_form(eta1, eta1)),
        "pair_1c1": complex(symplectic_form(eta1, e1b)),
        "pair_1c2": complex(symplectic_form(eta1, e2b)),
        "pair_2c1": complex(symplectic_form(eta2, e1b)),
        "pair_2c2": complex(symplectic_form(eta2, e2b)),
        "pair_c1c1": complex(symplectic_form(e1b, e1b)),
        "form_21_imag": f21.imag,
        "form_sum": abs(f12 + f21),
        "form_22_real": f22.real,
    }
    chain_res = float(np.linalg.norm(M @ eta2 - lambda0 * eta2 - lambda0 * eta1))
    diagnostics["normalization_residual"] = chain_res
    vec_scale = float(np.linalg.norm(eta1) + np.linalg.norm(eta2))
    if diagnostics["eigvec_residual"] > 1e-8 * vec_scale or chain_res > 1e-8 * vec_scale:
        raise InconsistentChainError(
            "extracted pair does not satisfy the normalization to 1e-8")

    return JordanPair(lambda0=lambda0, eta1=eta1, eta2=eta2,
                      form_21=f21, form_12=f12, form_22=f22,
                      diagnostics=diagnostics)


def krein_pairings_ok(pair, tol=1e-8):
    """True when all six orthogonality relations and the reality structure
    of the pairings hold within tol (diagnostic helper for callers and
    tests)."""
    d = pair.diagnostics
    keys = ("pair_11", "pair_1c1", "pair_1c2", "pair_2c1", "pair_2c2", "pair_c1c1")
    if any(abs(d[k]) > tol for k in keys if k in d):
        return False
    if abs(pair.form_21.imag) > tol or abs(pair.form_12 + pair.form_21) > tol:
        return False
    return abs(pair.form_22.real) <= tol
