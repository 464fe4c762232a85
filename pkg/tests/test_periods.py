import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import hyp2f1

from src.core import periods
from src.core.errors import ContinuationError, SingularFiberError
from src.core.lattice import IDENTITY, M_S, M_T, MINUS_IDENTITY
from src.core.periods import LAMBDA, OMEGA, U0


def quad_period(u, cycle, form):
    """Modulus of a real-root period from scipy's algebraic-weight quadrature."""
    r1, r2, r3 = sorted(np.roots([1.0, 0.0, -3.0, 4 * u - 2]).real)
    a, b, other = (r1, r2, r3) if cycle == "alpha" else (r2, r3, r1)
    power = -0.5 if form == OMEGA else 0.5
    value, _ = quad(lambda z: abs(z - other) ** power, a, b, weight="alg", wvar=(power, power), epsabs=1e-14, epsrel=1e-13)
    return 2 * value


@pytest.mark.parametrize("u", [0.25, 0.5, 0.8])
@pytest.mark.parametrize("cycle", ["alpha", "beta"])
@pytest.mark.parametrize("form", [OMEGA, LAMBDA])
def test_segment_periods_against_quadrature(u, cycle, form):
    assert abs(periods.period(u, cycle, form)) == pytest.approx(quad_period(u, cycle, form), rel=1e-10)


def test_roots_and_singular_fibres():
    roots = periods.cubic_roots(0.5)
    assert roots == pytest.approx((-math.sqrt(3), 0, math.sqrt(3)), abs=1e-12)
    for u in (0, 1):
        with pytest.raises(SingularFiberError):
            periods.cubic_roots(u)
    assert periods.EllipticPoint(0.5).j == pytest.approx(1)
    assert periods.EllipticPoint(0.25).J == pytest.approx(2304)


@pytest.mark.parametrize("form", [OMEGA, LAMBDA])
def test_ratio_at_half_is_plus_minus_i(form):
    ratio = periods.basis_periods(0.5, form).ratio
    assert min(abs(ratio - 1j), abs(ratio + 1j)) < 1e-10


@pytest.mark.parametrize("u", [0.3 + 0.4j, -0.2 + 0.8j])
def test_quadrature_self_convergence(u):
    coarse = periods.basis_periods(u, OMEGA, 256).as_array()
    fine = periods.basis_periods(u, OMEGA, 512).as_array()
    assert np.max(np.abs(coarse - fine) / np.abs(fine)) < 1e-10


def test_invalid_form():
    with pytest.raises(ValueError):
        periods.basis_periods(0.5, "eta")


def test_hypergeometric_parameters():
    assert [float(x) for x in periods.HypergeometricSpec.omega().parameters] == pytest.approx([5 / 12, 1 / 12, 1])
    assert [float(x) for x in periods.HypergeometricSpec.lambda_().parameters] == pytest.approx([-1 / 12, -5 / 12, 0])


def test_continuation_there_and_back(config):
    start = periods.basis_periods(U0, LAMBDA)
    there = periods.continue_periods(start, [U0, -0.3 + 0.9j], config)
    back = periods.continue_periods(there, [there.at.u, U0], config)
    assert back.as_array() == pytest.approx(start.as_array(), rel=1e-9)
    assert len(back.branch_log) > len(there.branch_log) > 0


def test_continuation_refuses_singular_fibres(config):
    start = periods.basis_periods(U0, OMEGA)
    with pytest.raises(ContinuationError):
        periods.continue_periods(start, [U0, 0.01], config)


def test_loop_validation(config):
    with pytest.raises(ValueError):
        periods.monodromy([U0, 0.6 + 0.5j], config)
    with pytest.raises(ValueError):
        periods.deck_transition([U0, 0.6 + 0.5j], config)


def test_monodromy_around_singular_fibres(config):
    loops = periods.standard_loops()
    m0 = periods.monodromy(loops["around_0"], config)
    m1 = periods.monodromy(loops["around_1"], config)
    big = periods.monodromy(loops["around_both"], config)
    for result in (m0, m1):
        assert result.trace == 2
        assert not result.matrix.is_identity()
        assert periods.kodaira_candidates(result.matrix) == ["I1"]
        assert result.residual < config.int_tol
    assert big.matrix.power(3) == MINUS_IDENTITY
    assert big.matrix.power(6) == IDENTITY
    assert big.matrix == m0.matrix @ m1.matrix
    assert ("I1", "I1", "II*") in periods.select_fibres([m0.matrix, m1.matrix, big.matrix])


def test_deck_transitions(config):
    paths = periods.deck_paths()
    x = periods.deck_transition(paths["x"], config)
    star = periods.deck_transition(paths["*"], config)
    assert x.trace == 0
    assert abs(star.trace) == 1


def test_kodaira_candidates():
    assert periods.kodaira_candidates(M_S) == ["I1"]
    assert periods.kodaira_candidates(M_S.power(3)) == ["I3"]
    assert periods.kodaira_candidates(-M_T) == ["I1*"]
    assert periods.kodaira_candidates(M_S @ M_T) == ["II", "II*"]
    assert periods.kodaira_candidates(MINUS_IDENTITY) == ["I0*"]
    assert periods.select_fibres([M_S, M_T, M_S @ M_T]) == [("I1", "I1", "II*")]


@pytest.mark.parametrize("form", [OMEGA, LAMBDA])
def test_hypergeometric_residual(form, config):
    assert periods.pf_residual(0.5 + 0.4j, form, config) < 1e-5


def test_constant_function_has_unit_residual():
    constant = lambda v: np.array([1.0])
    spec = periods.HypergeometricSpec.omega()
    assert periods.hypergeometric_residual(constant, 0.5 + 0.4j, spec) == pytest.approx(1.0)


@pytest.mark.parametrize("u", [0.01 + 0.01j, 0.4 + 0.3j])
def test_residual_of_gauss_series_close_to_special_fibres(u):
    spec = periods.HypergeometricSpec.omega()
    alpha, beta, gamma = (float(x) for x in spec.parameters)
    gauss = lambda v: np.array([hyp2f1(alpha, beta, gamma, 4 * v * (1 - v))])
    assert periods.hypergeometric_residual(gauss, u, spec) < 1e-6


def test_residual_refuses_points_near_special_fibres(config):
    with pytest.raises(ValueError):
        periods.pf_residual(0.5, OMEGA, config)


def test_lambda_derivative_is_twice_omega(config):
    assert periods.lambda_derivative_ratio(0.5 + 0.3j, config) == pytest.approx([2, 2], rel=1e-6)


def test_reduce_modular():
    assert periods.reduce_modular(3 + 1j) == pytest.approx(1j)
    tau = periods.reduce_modular(0.1 + 0.05j)
    assert abs(tau) >= 1 - 1e-9
    assert abs(tau.real) <= 0.5 + 1e-9


def test_period_map_and_sweep(config):
    zbar = periods.period_map(U0, config=config)
    vector = periods.basis_periods(U0, LAMBDA)
    assert zbar.ratio == pytest.approx(vector.ratio)
    rows = periods.sweep([U0, 0.2 + 0.6j], config)
    assert [row["error"] for row in rows] == ["", ""]
    assert rows[0]["ratio_re"] == pytest.approx(vector.ratio.real)


@pytest.mark.parametrize("u", [0.3 + 0.4j, 0.8 + 0.2j, -0.5 + 1j, 2 + 0.3j])
def test_period_map_commutes_with_conjugation(u, config):
    upper = periods.period_map(u, config=config)
    lower = periods.period_map(u.conjugate(), config=config)
    assert lower.ratio == pytest.approx(upper.ratio.conjugate(), abs=1e-12)
    below = periods.continued_vectors(u.conjugate(), config)[OMEGA]
    assert below.at.u == pytest.approx(u.conjugate())


def test_period_map_is_continuous_away_from_the_real_axis(config):
    here = periods.period_map(0.3 - 0.4j, config=config).ratio
    near = periods.period_map(0.3 - 0.401j, config=config).ratio
    assert abs(here - near) < 1e-2


def test_sweep_reports_the_reduced_lattice_modulus(config):
    rows = periods.sweep([0.5, 0.2 + 0.6j], config)
    assert complex(rows[0]["tau_re"], rows[0]["tau_im"]) == pytest.approx(1j, abs=1e-8)
    tau = complex(rows[1]["tau_re"], rows[1]["tau_im"])
    assert abs(tau) >= 1 - 1e-9
    assert abs(tau.real) <= 0.5 + 1e-9
    assert tau.imag > 0
