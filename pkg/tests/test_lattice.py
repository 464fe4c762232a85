import pytest

from src.core.lattice import (
    E_CLASS,
    IDENTITY,
    M_S,
    M_T,
    MINUS_IDENTITY,
    S_CLASS,
    T_CLASS,
    X_CLASS,
    KClass,
    LatticeAut,
    euler_pairing,
    projective_normal_form,
    shift_matrix,
    twist_matrix,
)


def test_twist_matrices():
    assert M_S.to_list() == [[1, 1], [0, 1]]
    assert M_T.to_list() == [[1, 0], [-1, 1]]


def test_euler_pairing_is_antisymmetric():
    assert euler_pairing(S_CLASS, T_CLASS) == -1
    assert euler_pairing(T_CLASS, S_CLASS) == 1
    for klass in (S_CLASS, T_CLASS, E_CLASS, X_CLASS):
        assert euler_pairing(klass, klass) == 0


GRID = [KClass(s, t) for s in range(-10, 11) for t in range(-10, 11)]
COARSE = [KClass(s, t) for s in range(-10, 11, 3) for t in range(-10, 11, 3)]


def test_euler_pairing_antisymmetric_on_grid():
    for a in GRID:
        assert euler_pairing(a, a) == 0
        for b in COARSE:
            assert euler_pairing(a, b) == -euler_pairing(b, a)


def test_euler_pairing_bilinear_on_grid():
    for a in COARSE:
        for b in COARSE:
            for c in COARSE:
                assert euler_pairing(a + b, c) == euler_pairing(a, c) + euler_pairing(b, c)
                assert euler_pairing(c, a + b) == euler_pairing(c, a) + euler_pairing(c, b)
            for k in (-3, 2, 7):
                assert euler_pairing(k * a, b) == k * euler_pairing(a, b)


def test_twist_fixes_its_own_class():
    for klass in (S_CLASS, T_CLASS, E_CLASS, X_CLASS):
        assert twist_matrix(klass).apply(klass) == klass


def test_braid_relation_and_center():
    assert M_S @ M_T @ M_S == M_T @ M_S @ M_T
    assert (M_S @ M_T).power(3) == MINUS_IDENTITY
    assert (M_S @ M_T).power(6) == IDENTITY


def test_power_and_inverse():
    assert M_S.power(-2) == M_S.inverse() @ M_S.inverse()
    assert (M_T @ M_T.inverse()).is_identity()
    assert M_S.power(0) == IDENTITY


def test_determinant_is_enforced():
    with pytest.raises(ValueError):
        LatticeAut(((2, 0), (0, 1)))


def test_shift_matrix_parity():
    assert shift_matrix(4) == IDENTITY
    assert shift_matrix(-3) == MINUS_IDENTITY


def test_columns_are_images_of_simples():
    image_s, image_t = M_S.columns()
    assert image_s == S_CLASS
    assert image_t == E_CLASS


@pytest.mark.parametrize("m", [M_S, M_T, -M_S, LatticeAut.of(0, -1, 1, 0), LatticeAut.of(0, 1, -1, 0)])
def test_projective_normal_form(m):
    normal = projective_normal_form(m)
    assert normal in (m, -m)
    assert projective_normal_form(-m) == normal
    lead = next(x for row in normal.entries for x in row if x != 0)
    assert lead > 0


def test_kclass_arithmetic():
    assert E_CLASS == KClass(1, 1)
    assert X_CLASS == KClass(-1, 1)
    assert 3 * S_CLASS - T_CLASS == KClass(3, -1)
    assert (-S_CLASS).is_positive() is False
    assert KClass(0, 2).is_positive()
