import cmath
import math

import pytest

from src.core.braid import DELTA, SIGMA, inverse, parse_word, reduce
from src.core.errors import (
    InadmissibleChargeError,
    MasslessClassError,
    PhaseRangeError,
    VanishingMassError,
)
from src.core.exchange import Heart, Role, Side, simple_tilt, standard_heart
from src.core.lattice import E_CLASS, S_CLASS, T_CLASS, X_CLASS
from src.core.stability import (
    CentralCharge,
    ProjectiveCharge,
    chamber_descent,
    ext_phase,
    fundamental_domain_test,
    heart_phases,
    orbifold_charges,
    phase,
    stable_set,
    sweep,
    translate_charge,
    wall_gap,
    width,
)

A0 = standard_heart()


def ratio(w):
    return ProjectiveCharge.from_ratio(w)


def test_phase():
    Z = CentralCharge(1j, -1)
    assert phase(Z, S_CLASS) == pytest.approx(0.5)
    assert phase(Z, T_CLASS) == 1.0
    assert phase(Z, E_CLASS) == pytest.approx(0.75)
    with pytest.raises(PhaseRangeError):
        phase(CentralCharge(1, 1), S_CLASS)
    with pytest.raises(PhaseRangeError):
        phase(CentralCharge(-1j, 1), S_CLASS)
    with pytest.raises(MasslessClassError):
        phase(CentralCharge(1, 1), X_CLASS)


def test_projective_charge_normalisation():
    zbar = ProjectiveCharge.of(2, 2j)
    assert zbar.ratio == pytest.approx(-1j)
    assert ProjectiveCharge.of(3, 0).ratio.real == math.inf
    assert ProjectiveCharge.of(1, 0).distance(ProjectiveCharge.of(0, 1)) == pytest.approx(1.0)
    assert zbar.distance(ProjectiveCharge.of(-5j, 5)) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        ProjectiveCharge.of(0, 0)


def test_interior_point():
    zbar = ratio(1j)
    assert heart_phases(zbar, A0) == pytest.approx((0.25, 0.75))
    assert width(zbar, A0) == pytest.approx(0.5)
    assert stable_set(zbar, A0).objects == {"s1", "s2", "ext"}
    assert ext_phase(zbar, A0) == pytest.approx(0.5)
    report = chamber_descent(zbar)
    assert report.heart == A0
    assert report.steps == 0
    assert report.wall_flags == ()
    assert fundamental_domain_test(zbar).kind == "interior"
    assert wall_gap(zbar, A0) == pytest.approx(0.25)


def test_only_simples_stable_when_s_is_lower():
    zbar = ratio(cmath.exp(-0.3j))
    assert stable_set(zbar, A0).objects == {"s1", "s2"}


def test_delta_wall():
    zbar = ratio(-1j)
    assert width(zbar, A0) == pytest.approx(0.5)
    verdict = fundamental_domain_test(zbar)
    assert verdict.kind == "wall"
    assert set(verdict.walls) == {"Delta", "Delta^-1"}
    assert wall_gap(zbar, A0) == pytest.approx(0.0, abs=1e-12)


def test_sigma_wall():
    zbar = ProjectiveCharge.of(-0.25 + 1j, 0.5)
    r_t = simple_tilt(A0, Role.T, Side.RIGHT)
    assert width(zbar, A0) == pytest.approx(width(zbar, r_t), abs=1e-12)
    verdict = fundamental_domain_test(zbar)
    assert verdict.kind == "wall"
    assert verdict.walls == ("Sigma",)


def test_order_three_point_ties_both_sigma_tilts():
    zbar = orbifold_charges()["*"]
    report = chamber_descent(zbar)
    assert report.heart == A0
    assert report.width == pytest.approx(2 / 3)
    assert set(report.wall_flags) == {"Sigma", "Sigma^-1"}
    assert report.stable_set.objects == {"s1", "s2", "ext"}


def test_order_two_point():
    zbar = orbifold_charges()["x"]
    assert zbar.ratio == pytest.approx(-1j)
    assert width(zbar, A0) == pytest.approx(0.5)


def test_descent_leaves_the_standard_chamber():
    zbar = ratio(cmath.exp(-2j * math.pi / 3))
    report = chamber_descent(zbar)
    assert report.width == pytest.approx(1 / 3)
    assert report.heart in (Heart(DELTA), Heart(inverse(DELTA)))
    assert report.steps == 1
    assert fundamental_domain_test(zbar).kind == "exterior"


def test_inadmissible_start_moves_to_a_neighbour():
    zbar = ratio(-1.0)
    report = chamber_descent(zbar)
    assert report.heart != A0
    assert report.width < 1
    with pytest.raises(InadmissibleChargeError):
        width(zbar, A0)


def test_vanishing_simple():
    with pytest.raises(VanishingMassError):
        width(ProjectiveCharge.of(0, 1), A0)


@pytest.mark.parametrize("w", [1j, 0.3 + 1.2j, -0.5 + 0.7j, 2 + 0.5j])
@pytest.mark.parametrize("step", [1e-4, 1e-4j])
def test_width_is_continuous(w, step):
    assert abs(width(ratio(w + step), A0) - width(ratio(w), A0)) < 1e-3


@pytest.mark.parametrize("word", ["Sigma", "Delta^-1", "S T^-1 [2]", "T^3 Sigma"])
def test_descent_is_equivariant(word):
    g = reduce(parse_word(word))
    zbar = ratio(0.3 + 1.1j)
    moved = translate_charge(zbar, g)
    assert width(moved, Heart(g)) == pytest.approx(width(zbar, A0))
    report = chamber_descent(moved, start=Heart(g))
    assert report.heart == Heart(g)


def test_translate_charge_by_sigma_cubed_is_projectively_trivial():
    zbar = ratio(0.7 + 0.2j)
    g = reduce(parse_word("Sigma^3"))
    assert translate_charge(zbar, g).distance(zbar) == pytest.approx(0.0, abs=1e-12)


def test_sweep_keeps_order_and_reports_failures():
    charges = [ratio(1j), ratio(cmath.exp(-2j * math.pi / 3)), ratio(2 + 0.1j)]
    rows = sweep(charges, workers=2)
    assert [row["ratio_im"] for row in rows] == [c.ratio.imag for c in charges]
    assert rows[0]["heart"] == A0.g.key()
    assert rows[0]["stable_count"] == 3
    assert all(row["error"] == "" for row in rows)


def test_report_to_dict():
    data = chamber_descent(ratio(1j)).to_dict()
    assert data["heart"]["label"] == "(T, S)_E"
    assert data["stable_set"] == ["ext", "s1", "s2"]
    assert data["phases"] == pytest.approx([0.25, 0.75])
