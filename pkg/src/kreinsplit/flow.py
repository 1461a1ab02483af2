"""Integration of the linear Hamiltonian system dG/dt = J4 A(t, eps) G.

Fixed-step classical Runge-Kutta on the 4x4 matrix unknown.  Uniform
grids keep the quadrature of the effective perturbation generator simple
and runs reproducible; there is no adaptivity and no dense output --
callers needing the flow at other times re-integrate.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CorruptedSolutionError, NonSymplecticError
from .linalg import J4, is_symplectic, max_abs, symplectic_inverse


@dataclass(frozen=True)
class FlowSolution:
    """Flow values on a uniform time grid.

    ``gammas[i]`` is the solution at ``ts[i]``; ``gammas[0]`` is the
    supplied initial condition, bit for bit.  ``drift`` is the largest
    entrywise deviation of G^T J4 G from J4 over the grid; solutions whose
    drift exceeds ``drift_tol`` are kept but flagged non-conforming.
    """

    ts: np.ndarray
    gammas: np.ndarray
    eps: float
    drift: float
    drift_tol: float

    @property
    def conforming(self):
        return self.drift <= self.drift_tol

    @property
    def T(self):
        return float(self.ts[-1])


def integrate(curve, gamma_init, T, steps, eps=0.0, drift_tol=1e-8):
    """Solve dG/dt = J4 A(t, eps) G over [0, T] from G(0) = gamma_init.

    Classical fourth-order Runge-Kutta with ``steps`` uniform steps;
    global error is O(h^4) for smooth curves.  ``T`` may be negative, in
    which case the system is integrated backward.  The initial condition
    must be symplectic to 1e-8.

    Real arithmetic throughout: every stored matrix has exactly zero
    imaginary part.
    """
    Ga = np.asarray(gamma_init)
    if Ga.shape != (4, 4):
        raise ValueError("gamma_init must be 4x4")
    if not is_symplectic(Ga.astype(complex), 1e-8):
        raise NonSymplecticError("initial condition is not symplectic within 1e-8")
    G = np.ascontiguousarray(Ga.real if np.iscomplexobj(Ga) else Ga, dtype=float)
    steps = int(steps)
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if T == 0:
        raise ValueError("T must be nonzero")

    ts = np.linspace(0.0, float(T), steps + 1)
    h = ts[1] - ts[0]
    mids = ts[:-1] + h / 2.0
    A_nodes = curve.eval_matrix_batch(ts, eps)
    A_mids = curve.eval_matrix_batch(mids, eps)

    gammas = np.empty((steps + 1, 4, 4))
    gammas[0] = G
    J = J4
    for i in range(steps):
        G = gammas[i]
        An, Am, An1 = A_nodes[i], A_mids[i], A_nodes[i + 1]
        k1 = J @ (An @ G)
        k2 = J @ (Am @ (G + (h / 2.0) * k1))
        k3 = J @ (Am @ (G + (h / 2.0) * k2))
        k4 = J @ (An1 @ (G + h * k3))
        gammas[i + 1] = G + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    residual = np.transpose(gammas, (0, 2, 1)) @ J @ gammas - J
    drift = float(np.max(np.abs(residual)))
    return FlowSolution(ts=ts, gammas=gammas, eps=float(eps),
                        drift=drift, drift_tol=float(drift_tol))


def endpoint(sol):
    """The final grid matrix G(T)."""
    return sol.gammas[-1].copy()


def perturbation_hamiltonian(curve, sol, T=None, h_eps=None):
    """Effective symmetric generator of the endpoint's eps-motion.

    For the flow started at the identity, the derivative of the endpoint
    with respect to eps equals J4 B G(T) where

        B = integral_0^T (G(T)^-1)^T G(t)^T dA/deps(t, eps) G(t) G(T)^-1 dt.

    Composite Simpson quadrature on the solution's grid (one trapezoid
    panel absorbs an odd step count).  The result is symmetrized; the
    asymmetry it removes measures quadrature error and triggers a warning
    above 1e-6.
    """
    if max_abs(sol.gammas[0] - np.eye(4)) > 1e-12:
        raise ValueError("perturbation generator needs a flow started at the identity")
    if T is not None and abs(sol.T - T) > 1e-12 * max(1.0, abs(T)):
        raise ValueError(f"solution covers [0, {sol.T}], not [0, {T}]")

    Gend = sol.gammas[-1]
    Ginv = symplectic_inverse(Gend)
    if max_abs(Gend @ Ginv - np.eye(4)) > 1e-6:
        raise CorruptedSolutionError("endpoint failed symplectic inversion sanity check")

    Aprime = curve.d_eps_matrix_batch(sol.ts, sol.eps, h=h_eps)
    W = sol.gammas @ Ginv
    integrand = np.transpose(W, (0, 2, 1)) @ Aprime @ W

    n = sol.ts.size - 1
    h = sol.ts[1] - sol.ts[0]
    if n % 2 == 0:
        m = n
        tail = 0.0
    else:
        m = n - 1
        tail = (h / 2.0) * (integrand[n - 1] + integrand[n])
    weights = np.ones(m + 1)
    weights[1:m:2] = 4.0
    weights[2:m:2] = 2.0
    body = (h / 3.0) * np.tensordot(weights, integrand[:m + 1], axes=(0, 0))
    B = body + tail

    asym = max_abs(B - B.T)
    if asym > 1e-6:
        warnings.warn(f"perturbation generator asymmetry {asym:.3e} exceeds 1e-6; "
                      "quadrature grid may be too coarse", RuntimeWarning)
    return (B + B.T) / 2.0
