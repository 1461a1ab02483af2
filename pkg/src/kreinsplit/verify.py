"""Brute-force verification of the splitting predictions.

Tracks the two eigenvalues bifurcating from a double unit multiplier
across a parameter grid (time or perturbation strength), fits the
two-term Puiseux model, and compares the fitted first- and second-order
data against the closed forms.  Tracking rests on nothing but repeated
root extraction and nearest-neighbor continuation, so it is an
independent oracle for the whole prediction pipeline.
"""

from dataclasses import dataclass, field

import numpy as np

from .bifurcation import expansion_eps, expansion_t
from .errors import (
    IllConditionedFitError,
    InputError,
    NoDoubleMultiplierError,
    TrackingAmbiguityError,
)
from .flow import endpoint, integrate, perturbation_hamiltonian
from .linalg import charpoly_three_term, quartic_roots
from .spectral import detect_double_unitary, eigenvalues, jordan_pair


@dataclass(frozen=True)
class BranchTrack:
    """Continuously matched eigenvalue branches near the multiplier.

    At every grid point the two stored values are the two eigenvalues
    closest to the collision point, each closer to it than half the gap
    to the remaining spectrum; ``residuals[i]`` holds the characteristic
    polynomial magnitudes |p(branch)| as a root-quality record.
    """

    grid: np.ndarray
    branch1: np.ndarray
    branch2: np.ndarray
    residuals: np.ndarray

    def separations(self):
        """Pointwise distance between the two branches."""
        return np.abs(self.branch2 - self.branch1)


def track(matrix_family, lambda0, grid, a_seed=None):
    """Track the two near eigenvalues of ``matrix_family(s)`` over a grid.

    The characteristic quartic is recentred at ``lambda0`` before root
    extraction, which keeps the nearly-double roots well conditioned.
    Branch labels continue by nearest-neighbor matching from the previous
    grid point; at the first point, ``a_seed`` (the predicted square-root
    coefficient) orients branch 2 along +a_seed when given.  The grid must
    be strictly monotone and positive; a decreasing grid simply runs the
    continuation from the other end.

    Raises TrackingAmbiguityError when a third eigenvalue comes within
    twice the pair spread of the collision point.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < 1 or np.any(grid <= 0):
        raise ValueError("grid values must be positive")
    if grid.size > 1:
        d = np.diff(grid)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("grid must be strictly monotonic")
    lambda0 = complex(lambda0)

    b1 = np.empty(grid.size, dtype=complex)
    b2 = np.empty(grid.size, dtype=complex)
    res = np.empty((grid.size, 2))
    prev = None
    for n, s in enumerate(grid):
        M = matrix_family(float(s))
        poly = charpoly_three_term(M, M, lambda0)
        roots = quartic_roots(poly)
        dist = np.abs(roots - lambda0)
        order = np.argsort(dist)
        pair = [roots[order[0]], roots[order[1]]]
        if dist[order[2]] <= 2.0 * dist[order[1]]:
            raise TrackingAmbiguityError(
                float(s),
                f"third eigenvalue at distance {dist[order[2]]:.3e} crowds the "
                f"tracked pair (spread {dist[order[1]]:.3e}) at parameter {s!r}")
        if prev is None:
            if a_seed is not None and a_seed != 0:
                target2 = lambda0 + a_seed * np.sqrt(s)
                if abs(pair[0] - target2) < abs(pair[1] - target2):
                    pair.reverse()
        else:
            keep = abs(pair[0] - prev[0]) + abs(pair[1] - prev[1])
            swap = abs(pair[0] - prev[1]) + abs(pair[1] - prev[0])
            if swap < keep:
                pair.reverse()
        prev = pair
        b1[n] = pair[0]
        b2[n] = pair[1]
        res[n] = (abs(poly(pair[0])), abs(poly(pair[1])))
    return BranchTrack(grid=grid, branch1=b1, branch2=b2, residuals=res)


@dataclass(frozen=True)
class PuiseuxFit:
    """Result of fitting branch data to +-a sqrt(s) + mu s.

    ``a`` and ``mu`` come from the joint weighted least squares over both
    branches; ``mu_sum`` re-estimates mu from the branch sum alone,
    extrapolated to s = 0 over the three smallest parameters.  The odd
    powers of sqrt(s) cancel in the sum, so its quotient is mu + O(s) and
    the extrapolation is done against s, not sqrt(s); this is the sharper
    and more grid-stable second-order estimate.
    """

    a: complex
    mu: complex
    mu_sum: complex
    diagnostics: dict = field(default_factory=dict, compare=False)


def fit_puiseux(tr, lambda0):
    """Fit both branches jointly to lambda0 +- a sqrt(s) + mu s.

    Rows are weighted by 1/s so every grid point contributes at its
    relative accuracy; this keeps the o(s^{3/2}) contamination of the
    largest parameters from biasing ``a``.  ``a`` is reported with the
    sign matching branch 2 on the +a sheet.
    """
    if tr.grid.size < 4:
        raise IllConditionedFitError("need at least four grid points")
    lambda0 = complex(lambda0)
    order = np.argsort(tr.grid)
    s = tr.grid[order]
    y1 = tr.branch1[order] - lambda0
    y2 = tr.branch2[order] - lambda0

    roots = np.sqrt(s)
    w = 1.0 / s
    design = np.zeros((2 * s.size, 2), dtype=complex)
    rhs = np.empty(2 * s.size, dtype=complex)
    design[: s.size, 0] = roots * w
    design[: s.size, 1] = s * w
    rhs[: s.size] = y2 * w
    design[s.size:, 0] = -roots * w
    design[s.size:, 1] = s * w
    rhs[s.size:] = y1 * w
    coef, _, rank, _ = np.linalg.lstsq(design, rhs, rcond=None)
    if rank < 2:
        raise IllConditionedFitError("design matrix is rank deficient; widen the grid")
    a_fit, mu_fit = complex(coef[0]), complex(coef[1])

    # Sum-based slope: q(s) = (b1 + b2 - 2 L) / (2 s) = mu + O(s) since the
    # odd sqrt(s) powers cancel pointwise.  Intercept of the least-squares
    # line through the three smallest points; the two-point Richardson
    # values are kept as convergence diagnostics.
    q = (y1 + y2) / (2.0 * s)
    design3 = np.stack([np.ones(3), s[:3]], axis=1)
    line, _, rank3, _ = np.linalg.lstsq(design3, q[:3], rcond=None)
    if rank3 < 2:
        raise IllConditionedFitError("sum-slope extrapolation is rank deficient")
    mu_sum = complex(line[0])
    rich12 = (q[0] * s[1] - q[1] * s[0]) / (s[1] - s[0])
    rich23 = (q[1] * s[2] - q[2] * s[1]) / (s[2] - s[1])
    diagnostics = {
        "mu_fit": mu_fit,
        "richardson_12": complex(rich12),
        "richardson_23": complex(rich23),
        "richardson_spread": float(abs(rich12 - rich23)),
        "raw_quotient_smallest": complex(q[0]),
    }
    return PuiseuxFit(a=a_fit, mu=mu_fit, mu_sum=mu_sum, diagnostics=diagnostics)


# --- end-to-end comparison ---------------------------------------------------

@dataclass(frozen=True)
class ModeComparison:
    """Closed forms vs oracle for one parameter family."""

    mode: str
    lambda0: complex
    kappa_predicted: float
    kappa_empirical: float
    sum_derivative_predicted: complex
    sum_derivative_empirical: complex
    a_predicted: complex
    a_empirical: complex
    relative_errors: dict
    sqrt_ratio: float
    quotient_growth: float
    track: BranchTrack = field(compare=False)
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def max_relative_error(self):
        return max(self.relative_errors.values())


@dataclass(frozen=True)
class StabilityProbe:
    """Numerical check of the strong-stability dichotomy at +-probe.

    For positive first-order rate the forward side must have a multiplier
    off the unit circle while the backward side shows four distinct
    multipliers on it; a negative rate mirrors the two sides.
    """

    kappa: float
    probe: float
    forward_max_modulus: float
    forward_off_circle: bool
    backward_max_circle_deviation: float
    backward_min_separation: float
    backward_on_circle_distinct: bool
    passed: bool


def _relative_error(emp, pred):
    return abs(emp - pred) / max(abs(pred), 1e-12)


def _mode_comparison(mode, lam, coeffs, family, grid):
    tr = track(family, lam, grid, a_seed=coeffs.a)
    fit = fit_puiseux(tr, lam)
    kappa_emp = float((fit.a ** 2 / (lam * lam)).real)
    sumder_emp = 2.0 * fit.mu_sum
    rel = {
        "kappa": _relative_error(kappa_emp, coeffs.kappa),
        "sum_derivative": _relative_error(sumder_emp, coeffs.sum_derivative),
    }

    # Scaling probes at the foot of the grid: deviations should scale as
    # sqrt(s), so dev(s)/dev(4s) -> 1/2 and the one-sided difference
    # quotient grows by 2 when s shrinks by 4.
    s0 = float(np.min(tr.grid))
    probe = track(family, lam, np.array([s0, 4.0 * s0]), a_seed=coeffs.a)
    dev = 0.5 * (np.abs(probe.branch1 - lam) + np.abs(probe.branch2 - lam))
    sqrt_ratio = float(dev[0] / dev[1])
    quotient_growth = float((dev[0] / s0) / (dev[1] / (4.0 * s0)))

    return ModeComparison(
        mode=mode,
        lambda0=lam,
        kappa_predicted=coeffs.kappa,
        kappa_empirical=kappa_emp,
        sum_derivative_predicted=coeffs.sum_derivative,
        sum_derivative_empirical=sumder_emp,
        a_predicted=coeffs.a,
        a_empirical=fit.a,
        relative_errors=rel,
        sqrt_ratio=sqrt_ratio,
        quotient_growth=quotient_growth,
        track=tr,
        diagnostics=dict(fit.diagnostics),
    )


def _stability_probe(curve, gamma0, lam, kappa, probe, steps, drift_tol,
                     off_tol=1e-6, circle_tol=1e-6, sep_tol=1e-3):
    forward = endpoint(integrate(curve, gamma0, probe, steps, 0.0, drift_tol))
    backward = endpoint(integrate(curve, gamma0, -probe, steps, 0.0, drift_tol))
    if kappa < 0:
        forward, backward = backward, forward
    # "forward" now means the side the dichotomy claims unstable.
    evs_f = eigenvalues(forward, center=lam)
    evs_b = eigenvalues(backward, center=lam)
    fwd_max = float(np.max(np.abs(evs_f)))
    off_circle = fwd_max > 1.0 + off_tol
    bwd_dev = float(np.max(np.abs(np.abs(evs_b) - 1.0)))
    seps = [abs(evs_b[i] - evs_b[j]) for i in range(4) for j in range(i + 1, 4)]
    min_sep = float(min(seps))
    on_circle_distinct = bwd_dev <= circle_tol and min_sep > sep_tol
    return StabilityProbe(
        kappa=kappa,
        probe=probe,
        forward_max_modulus=fwd_max,
        forward_off_circle=off_circle,
        backward_max_circle_deviation=bwd_dev,
        backward_min_separation=min_sep,
        backward_on_circle_distinct=on_circle_distinct,
        passed=off_circle and on_circle_distinct,
    )


@dataclass(frozen=True)
class OracleReport:
    """Everything the verification run measured."""

    name: str
    t: ModeComparison | None
    eps: ModeComparison | None
    stability: StabilityProbe | None

    @property
    def max_relative_error(self):
        errors = []
        for part in (self.t, self.eps):
            if part is not None:
                errors.extend(part.relative_errors.values())
        if not errors:
            return float("inf")
        return max(errors)


def compare(scenario, mode="both", t_grid=None, eps_grid=None, stability=True):
    """Run predictions and the tracking oracle on a scenario.

    ``mode`` selects the time family ("t"), the endpoint-in-eps family
    ("eps"), or "both", where the eps family runs only when the curve
    mentions eps.  Returns an OracleReport; tolerance judgments belong to
    the caller.
    """
    if mode not in ("t", "eps", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    tol = scenario.tolerances
    curve = scenario.curve
    t_part = None
    eps_part = None
    probe_part = None

    if mode in ("t", "both"):
        gamma0 = scenario.initial_matrix()
        lam = detect_double_unitary(gamma0, tol.cluster, tol.circle)
        if lam is None:
            raise NoDoubleMultiplierError(
                "initial matrix has no double unit-circle multiplier pair")
        pair = jordan_pair(gamma0, lam)
        A0 = curve.eval_matrix(0.0, 0.0)
        coeffs = expansion_t(pair, A0)
        grid = np.asarray(t_grid if t_grid is not None else scenario.t_grid.points())

        def family_t(s):
            return endpoint(integrate(curve, gamma0, s, tol.steps_t, 0.0, tol.drift))

        t_part = _mode_comparison("t", lam, coeffs, family_t, grid)
        if stability:
            probe_part = _stability_probe(curve, gamma0, lam, coeffs.kappa,
                                          tol.probe, tol.steps_t, tol.drift)

    if mode == "eps" or (mode == "both" and curve.has_eps):
        if not curve.has_eps:
            raise InputError("scenario curve does not mention eps; eps mode unavailable")
        ident = np.eye(4)
        sol0 = integrate(curve, ident, scenario.T, tol.steps_eps, 0.0, tol.drift)
        G_T = endpoint(sol0)
        lam = detect_double_unitary(G_T, tol.cluster, tol.circle)
        if lam is None:
            raise NoDoubleMultiplierError(
                "endpoint at eps = 0 has no double unit-circle multiplier pair")
        pair = jordan_pair(G_T, lam)
        B = perturbation_hamiltonian(curve, sol0)
        coeffs = expansion_eps(pair, B)
        grid = np.asarray(eps_grid if eps_grid is not None else scenario.eps_grid.points())

        def family_eps(e):
            return endpoint(integrate(curve, ident, scenario.T, tol.steps_eps, e, tol.drift))

        eps_part = _mode_comparison("eps", lam, coeffs, family_eps, grid)

    return OracleReport(name=scenario.name, t=t_part, eps=eps_part, stability=probe_part)
