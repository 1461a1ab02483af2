import numpy as np
import pytest

from kreinsplit import (
    compare,
    detect_double_unitary,
    expansion_t,
    fit_puiseux,
    jordan_pair,
    make_jordan_symplectic,
    predict_branches,
    track,
)
from kreinsplit.errors import (
    IllConditionedFitError,
    InputError,
    TrackingAmbiguityError,
)
from kreinsplit.verify import BranchTrack


def synthetic_track(lambda0, a, mu, grid, extra=None):
    grid = np.asarray(grid, dtype=float)
    roots = np.sqrt(grid)
    tail = extra(grid) if extra is not None else 0.0
    b2 = lambda0 + a * roots + mu * grid + tail
    b1 = lambda0 - a * roots + mu * grid - tail
    return BranchTrack(grid=grid, branch1=b1, branch2=b2,
                       residuals=np.zeros((grid.size, 2)))


def test_track_constant_family():
    M = make_jordan_symplectic(np.pi / 3, np.eye(2))
    lam = detect_double_unitary(M)
    tr = track(lambda s: M, lam, np.geomspace(1e-6, 1e-3, 6))
    assert np.max(np.abs(tr.branch1 - lam)) < 1e-7
    assert np.max(np.abs(tr.branch2 - lam)) < 1e-7


def test_track_requires_positive_monotone_grid():
    M = make_jordan_symplectic(np.pi / 3, np.eye(2))
    lam = detect_double_unitary(M)
    with pytest.raises(ValueError):
        track(lambda s: M, lam, [1e-3, 1e-6, 1e-4])
    with pytest.raises(ValueError):
        track(lambda s: M, lam, [-1e-3, 1e-6])


def test_track_ambiguity_detection():
    lam = np.exp(1j * np.pi / 3)

    def crowded(s):
        d = np.sqrt(s)
        return np.diag([lam + d, lam - d, lam + 1.9 * d, np.conj(lam)])

    with pytest.raises(TrackingAmbiguityError):
        track(crowded, lam, np.geomspace(1e-8, 1e-5, 5))


def test_track_continuity_and_reversal(pi3_scenario, pi3_report):
    report, _ = pi3_report
    tr = report.t.track
    seps = tr.separations()
    steps1 = np.abs(np.diff(tr.branch1))
    steps2 = np.abs(np.diff(tr.branch2))
    # matching is continuous: consecutive moves stay below the branch gap
    assert np.all(steps1 < seps[1:])
    assert np.all(steps2 < seps[1:])


def test_track_reversed_grid_matches():
    M0 = make_jordan_symplectic(np.pi / 3, np.eye(2))
    lam = detect_double_unitary(M0)

    def family(s):
        out = M0.copy()
        out[0, 2] += s
        out[2, 0] += s
        return out

    grid = np.geomspace(1e-7, 1e-4, 8)
    fwd = track(family, lam, grid)
    rev = track(family, lam, grid[::-1])
    same = max(np.max(np.abs(fwd.branch1 - rev.branch1[::-1])),
               np.max(np.abs(fwd.branch2 - rev.branch2[::-1])))
    swapped = max(np.max(np.abs(fwd.branch1 - rev.branch2[::-1])),
                  np.max(np.abs(fwd.branch2 - rev.branch1[::-1])))
    assert min(same, swapped) < 1e-12


def test_tracked_quartet_mirrors_conjugate_cluster(pi3_scenario):
    from kreinsplit import endpoint, integrate
    curve = pi3_scenario.curve
    g0 = pi3_scenario.initial_matrix()
    lam = detect_double_unitary(g0)

    def family(s):
        return endpoint(integrate(curve, g0, s, 2000, 0.0))

    grid = np.geomspace(1e-6, 1e-4, 5)
    up = track(family, lam, grid)
    down = track(family, np.conj(lam), grid)
    for i in range(grid.size):
        got = sorted([down.branch1[i], down.branch2[i]], key=lambda z: z.imag)
        want = sorted([np.conj(up.branch1[i]), np.conj(up.branch2[i])],
                      key=lambda z: z.imag)
        assert abs(got[0] - want[0]) < 1e-9
        assert abs(got[1] - want[1]) < 1e-9


def test_fit_recovers_exact_model():
    lam = np.exp(0.9j)
    tr = synthetic_track(lam, 1.0 + 0.0j, 0.5j, np.geomspace(1e-7, 1e-3, 12))
    fit = fit_puiseux(tr, lam)
    assert abs(fit.a - 1.0) < 1e-10
    assert abs(fit.mu - 0.5j) < 1e-10
    # the sum estimator divides an O(eps)-cancelled difference by 2e-7
    assert abs(fit.mu_sum - 0.5j) < 1e-9


def test_fit_bias_under_three_halves_contamination():
    lam = np.exp(0.9j)
    c = 0.8
    grid = np.geomspace(1e-7, 1e-3, 12)
    tr = synthetic_track(lam, 1.0 + 0.0j, 0.5j, grid,
                         extra=lambda s: c * s ** 1.5)
    fit = fit_puiseux(tr, lam)
    assert abs(fit.mu - 0.5j) <= c * np.sqrt(grid.max())
    assert abs(fit.a - 1.0) <= c * grid.max()


def test_fit_needs_four_points():
    lam = np.exp(0.9j)
    tr = synthetic_track(lam, 1.0, 0.5j, [1e-6, 1e-5, 1e-4])
    with pytest.raises(IllConditionedFitError):
        fit_puiseux(tr, lam)


def test_reference_scenario_oracle_agreement(pi3_report):
    report, elapsed = pi3_report
    part = report.t
    assert part.relative_errors["kappa"] <= 1e-5
    assert part.relative_errors["sum_derivative"] <= 1e-4
    assert abs(part.sqrt_ratio - 0.5) <= 0.025
    assert abs(part.quotient_growth - 2.0) <= 0.2
    assert report.stability is not None and report.stability.passed
    assert report.eps is None  # curve has no eps
    assert part.kappa_predicted < 0
    assert elapsed < 10.0


def test_flipped_scenario_positive_rate(pi3_neg_report):
    report, _ = pi3_neg_report
    assert report.t.kappa_predicted > 0
    assert report.t.relative_errors["kappa"] <= 1e-4
    assert report.stability.passed


def test_eps_scenario_oracle_agreement(resonant_report):
    report, elapsed = resonant_report
    part = report.eps
    assert part is not None
    assert part.relative_errors["kappa"] <= 1e-4
    assert part.relative_errors["sum_derivative"] <= 1e-4
    assert abs(part.sqrt_ratio - 0.5) <= 0.025
    assert report.t is None
    assert elapsed < 30.0


def test_eps_mode_requires_eps(pi3_scenario):
    with pytest.raises(InputError):
        compare(pi3_scenario, mode="eps")


def test_compare_rejects_unknown_mode(pi3_scenario):
    with pytest.raises(ValueError):
        compare(pi3_scenario, mode="sideways")


def test_predicted_branches_match_oracle(pi3_scenario, pi3_report):
    report, _ = pi3_report
    part = report.t
    g0 = pi3_scenario.initial_matrix()
    pair = jordan_pair(g0, part.lambda0)
    coeffs = expansion_t(pair, pi3_scenario.curve.eval_matrix(0.0, 0.0))
    grid = part.track.grid
    errors = []
    for i, s in enumerate(grid):
        p1, p2 = predict_branches(coeffs, part.lambda0, float(s))
        tracked = {part.track.branch1[i], part.track.branch2[i]}
        err = min(max(abs(p1 - x), abs(p2 - y))
                  for x in tracked for y in tracked if x != y or len(tracked) == 1)
        errors.append(err / s ** 1.5)
    # o(s) remainder: the error measured in units of s^{3/2} stays bounded
    assert max(errors) < 10 * np.median(errors) + 1e-6


def test_sum_slope_stable_under_grid_halving(pi3_report, pi3_halved_report):
    full, _ = pi3_report
    halved, _ = pi3_halved_report
    a = full.t.sum_derivative_empirical
    b = halved.t.sum_derivative_empirical
    assert abs(a - b) <= 1e-5 * abs(a)


def test_branch_quotient_diverges(pi3_report):
    report, _ = pi3_report
    # one-sided difference quotient doubles when s shrinks by four
    assert abs(report.t.quotient_growth - 2.0) <= 0.2
