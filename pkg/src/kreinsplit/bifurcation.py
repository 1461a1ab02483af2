"""Closed-form splitting asymptotics at a degenerate unit multiplier.

Let M(s) be a smooth symplectic family whose derivative at s = 0 is
J4 A M(0), and let (eta1, eta2) be the normalized chain at the double
multiplier L of M(0).  The two eigenvalues bifurcating from L behave as

    lambda_j(s) = L + (-1)^j * a * sqrt(s) + mu * s + o(s),    j = 1, 2,

where a^2 = L^2 * kappa with the first-order rate

    kappa = <A eta1, eta1> / <eta2, J eta1>        (real),

and mu is L/2 times the four-term bracket assembled below.  The same
algebra applies verbatim to the endpoint-in-eps family once A is replaced
by the effective perturbation generator, so there is a single code path.
Everything here is a pure function of the chain and of A; the coefficient
ladder offers an independent exterior-power route to the same numbers.
"""

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCaseError, ExcludedCaseError, InconclusiveError
from .linalg import as_mat4, exterior_power, inner

#: Verdict strings for the strong-stability dichotomy.
UNSTABLE_FORWARD = "unstable_forward_stable_backward"
STABLE_FORWARD = "stable_forward_unstable_backward"


@dataclass(frozen=True)
class CoefficientLadder:
    """Characteristic-coefficient data at the collision.

    ``c`` holds the five recentred characteristic coefficients of M(0) in
    ascending powers; for a genuine double pair c[0] = c[1] = 0,
    c[2] = (L - conj L)^2 and c[3] = 2 (L - conj L).  ``c31`` and ``c21``
    are the first-order mixed exterior powers driving the sqrt and linear
    terms, and a_squared = c31 / c[2].
    """

    c: tuple
    c31: complex
    c21: complex
    a_squared: complex
    lambda0: complex


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Evaluated splitting asymptotics at one collision.

    ``kappa`` is the real first-order rate; ``a`` is the principal square
    root of lambda0^2 * kappa (so for kappa > 0 branch 2 leaves along
    +a).  ``second_order`` is the coefficient mu of s in each branch and
    ``sum_derivative`` = 2 * mu is the derivative of the branch sum, whose
    product with conj(lambda0) has real part exactly kappa.
    ``kappa_imag_residual`` logs the imaginary part dropped from the
    kappa ratio rather than silently discarding it.
    """

    kappa: float
    a: complex
    second_order: complex
    sum_derivative: complex
    bracket: complex
    lambda0: complex
    kappa_imag_residual: float = field(default=0.0, compare=False)


def ladder(gamma0, gammadot0, lambda0):
    """Exterior-power route to the expansion coefficients.

    ``gammadot0`` is the derivative of the family at the collision, i.e.
    J4 A M(0) for a coefficient matrix A.  Raises when the recentred
    quadratic coefficient vanishes, which happens exactly when the
    multiplier sits at +-1.
    """
    gamma0 = as_mat4(gamma0)
    gammadot0 = as_mat4(gammadot0)
    lambda0 = complex(lambda0)
    K = lambda0 * np.eye(4) - gamma0
    c = tuple(exterior_power(4 - k, 0, K) for k in range(5))
    c31 = exterior_power(3, 1, K, gammadot0)
    c21 = exterior_power(2, 1, K, gammadot0)
    if abs(c[2]) < 1e-10:
        raise ExcludedCaseError(
            "quadratic coefficient vanishes; multiplier too close to +-1")
    return CoefficientLadder(c=c, c31=c31, c21=c21,
                             a_squared=c31 / c[2], lambda0=lambda0)


def ladder_closed_forms(pair, A0):
    """Inner-product closed forms for the two mixed coefficients.

    Independent of the exterior-power route: with d = L - conj(L),
    G1 = <A eta1, eta1>/<eta2, J eta1>, G2 = <A eta1, eta2>/<eta1, J eta2>,
    G3 = <A eta2, eta1>/<eta2, J eta1> and
    G4 = <A eta1, eta1><eta2, J eta2>/(<eta2, J eta1><eta1, J eta2>),

        c31 = L^2 d^2 G1,
        c21 = (2 L^2 d + L d^2) G1 + L d^2 (G2 + G3 - G4).

    Returns (c31, c21).
    """
    A0 = as_mat4(A0)
    lam = pair.lambda0
    d = lam - np.conj(lam)
    g1 = inner(A0 @ pair.eta1, pair.eta1) / pair.form_21
    g2 = inner(A0 @ pair.eta1, pair.eta2) / pair.form_12
    g3 = inner(A0 @ pair.eta2, pair.eta1) / pair.form_21
    g4 = (inner(A0 @ pair.eta1, pair.eta1) * pair.form_22
          / (pair.form_21 * pair.form_12))
    c31 = lam ** 2 * d ** 2 * g1
    c21 = (2.0 * lam ** 2 * d + lam * d ** 2) * g1 + lam * d ** 2 * (g2 + g3 - g4)
    return c31, c21


def expansion_t(pair, A0):
    """Splitting asymptotics for the time family driven by A0 = A(0).

    Requires |<A0 eta1, eta1>| > 1e-10; below that the square-root term
    degenerates and no verdict is possible at this order.
    """
    A0 = as_mat4(A0)
    lam = pair.lambda0
    num = inner(A0 @ pair.eta1, pair.eta1)
    if abs(num) <= 1e-10:
        raise DegenerateCaseError(num)
    ratio = num / pair.form_21
    kappa = float(ratio.real)
    g2 = inner(A0 @ pair.eta1, pair.eta2) / pair.form_12
    g3 = inner(A0 @ pair.eta2, pair.eta1) / pair.form_21
    g4 = num * pair.form_22 / (pair.form_21 * pair.form_12)
    bracket = ratio + g2 + g3 - g4
    sum_derivative = lam * bracket
    a = cmath.sqrt(lam * lam * kappa)
    return ExpansionCoefficients(
        kappa=kappa,
        a=a,
        second_order=sum_derivative / 2.0,
        sum_derivative=sum_derivative,
        bracket=bracket,
        lambda0=lam,
        kappa_imag_residual=abs(ratio.imag),
    )


def expansion_eps(pair, B):
    """Splitting asymptotics for the endpoint-in-eps family.

    The chain must come from the endpoint matrix at eps = 0 and B must be
    its effective perturbation generator; the algebra is then identical to
    the time case with A0 replaced by B, because the bilinear forms of B
    against the chain equal the corresponding time integrals of the
    transported vectors.
    """
    try:
        return expansion_t(pair, B)
    except DegenerateCaseError as exc:
        raise DegenerateCaseError(
            exc.measured,
            f"degenerate case: |<B eta1, eta1>| = {abs(exc.measured):.3e}") from None


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of the strong-stability dichotomy, with the rate that
    decided it."""

    verdict: str
    kappa: float

    @property
    def forward_unstable(self):
        return self.verdict == UNSTABLE_FORWARD


def classify_stability(coeffs, tol=1e-10):
    """Strong-stability dichotomy from the sign of kappa.

    kappa > 0: the family is unstable for small positive parameter and
    strongly stable for small negative parameter; kappa < 0 is the mirror
    image.  |kappa| <= tol is inconclusive at this order.
    """
    kappa = coeffs.kappa
    if abs(kappa) <= tol:
        raise InconclusiveError(
            f"first-order rate {kappa:.3e} is zero within {tol:.1e}; "
            "the dichotomy needs higher-order analysis")
    return StabilityVerdict(UNSTABLE_FORWARD if kappa > 0 else STABLE_FORWARD, kappa)


def predict_branches(coeffs, lambda0, s, allow_negative=False):
    """Two-term branch prediction lambda_j(s) = L + (-1)^j a sqrt(s) + mu s.

    Only s >= 0 is covered by the expansions; prediction for s < 0 (the
    square root rotated by i) is heuristic and must be opted into with
    ``allow_negative``.  Returns (lambda_1, lambda_2); the branch sum is
    2 L + 2 mu s exactly, independent of the square-root sheet.
    """
    lambda0 = complex(lambda0)
    if s < 0:
        if not allow_negative:
            raise ValueError("negative parameter prediction requires allow_negative=True")
        root = 1j * coeffs.a * np.sqrt(-s)
    else:
        root = coeffs.a * np.sqrt(s)
    mu = coeffs.second_order
    return (lambda0 - root + mu * s, lambda0 + root + mu * s)
