import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import componentwise_inner, quat_matmul

from morseflow.errors import DimensionError, PreconditionError, SingularityError
from morseflow.matrix_core import (
    Field,
    GroupSpec,
    Mat,
    Scalar,
    cayley,
    herm_eig,
    hermitian_residual,
    inner,
    mat_from_json,
    mat_func,
    mat_to_json,
    random_element,
    random_hermitian,
    random_matrix,
    unitarity_residual,
)

FIELDS = [Field.R, Field.C, Field.H]


def quat(*c):
    return Scalar(Field.H, c)


# --- scalars ---------------------------------------------------------------

def test_quaternion_units_multiply_like_hamilton():
    i, j, k = quat(0, 1, 0, 0), quat(0, 0, 1, 0), quat(0, 0, 0, 1)
    assert (i * j).parts == k.parts
    assert (j * i).parts == (0, 0, 0, -1)
    assert (i * i).parts == (-1, 0, 0, 0)


@given(st.lists(st.floats(-10, 10), min_size=8, max_size=8))
def test_quaternion_conjugation_reverses_products(v):
    p, q = quat(*v[:4]), quat(*v[4:])
    lhs = (p * q).conj().parts
    rhs = (q.conj() * p.conj()).parts
    assert np.allclose(lhs, rhs, atol=1e-9)
    assert abs(abs(p.conj()) - abs(p)) < 1e-12
    assert np.allclose(p.conj().conj().parts, p.parts)


# --- matrices --------------------------------------------------------------

@pytest.mark.parametrize("field", FIELDS)
def test_conj_transpose_is_an_involution(field):
    m = random_matrix(field, 3, 4, np.random.default_rng(0))
    assert m.ct.ct.allclose(m, 0.0)


def test_quaternion_matmul_matches_entrywise_hamilton_products():
    rng = np.random.default_rng(5)
    x, y = random_matrix("H", 3, 2, rng), random_matrix("H", 2, 4, rng)
    assert np.allclose((x @ y).data, quat_matmul(x.data, y.data), atol=1e-12)


def test_inner_of_identities_and_group_elements():
    assert inner(Mat.eye("R", 2), Mat.eye("R", 2)) == 2
    x = random_element(GroupSpec("O", 4), 3)
    assert abs(inner(x, x) - 4) < 1e-12


def test_inner_over_h_matches_componentwise_sum():
    rng = np.random.default_rng(11)
    x = Mat("H", rng.standard_normal((3, 3, 4)))
    y = Mat("H", rng.standard_normal((3, 3, 4)))
    # frozen from the component-wise oracle
    assert inner(x, y) == pytest.approx(-2.178402997757439, abs=1e-12)
    assert inner(x, y) == pytest.approx(componentwise_inner(x.data, y.data), abs=1e-12)


def test_inner_rejects_mismatched_operands():
    with pytest.raises(DimensionError):
        inner(Mat.eye("R", 2), Mat.eye("C", 2))
    with pytest.raises(DimensionError):
        inner(Mat.eye("R", 2), Mat.eye("R", 3))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**31))
def test_inner_is_symmetric_and_positive(field, r, c, seed):
    rng = np.random.default_rng(seed)
    x, y = random_matrix(field, r, c, rng), random_matrix(field, r, c, rng)
    assert inner(x, y) == pytest.approx(inner(y, x), abs=1e-12)
    assert inner(x, x) > 0
    assert inner(x, x) == pytest.approx(componentwise_inner(x.data, x.data), rel=1e-12)
    assert inner(Mat.zeros(field, r, c), Mat.zeros(field, r, c)) == 0


# --- eigensolver -----------------------------------------------------------

def test_herm_eig_small_cases():
    assert np.allclose(herm_eig(Mat.diag("R", [3, 1, 2])).eigenvalues, [1, 2, 3])
    assert np.allclose(herm_eig(Mat.from_real("R", [[0, 1], [1, 0]])).eigenvalues, [-1, 1])


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(PreconditionError):
        herm_eig(Mat.from_real("R", [[0, 1], [0, 0]]))


def test_herm_eig_residuals_on_1000_random_inputs():
    rng = np.random.default_rng(2024)
    worst_rec = worst_orth = 0.0
    for case in range(1000):
        field = FIELDS[case % 3]
        n = int(rng.integers(1, 9))
        s = random_hermitian(field, n, rng)
        eig = herm_eig(s)
        v = eig.vectors
        worst_rec = max(worst_rec, (eig.reconstruct() - s).norm() / s.norm())
        worst_orth = max(worst_orth, (v.ct @ v - Mat.eye(field, n)).norm())
        assert np.all(np.diff(eig.eigenvalues) >= 0)
        ref = np.linalg.eigvalsh(s.rep())
        ref = ref[::2] if field is Field.H else ref
        assert np.allclose(eig.eigenvalues, ref, atol=1e-9 * max(1.0, s.norm()))
    assert worst_rec < 1e-9
    assert worst_orth < 1e-9


def test_herm_eig_quaternionic_repeated_eigenvalue():
    u = random_element(GroupSpec("Sp", 3), 1)
    s = u @ Mat.diag("H", [-1, -1, 2]) @ u.ct
    eig = herm_eig(s)
    assert np.allclose(eig.eigenvalues, [-1, -1, 2], atol=1e-12)
    assert (eig.reconstruct() - s).norm() < 1e-12


# --- matrix functions and Cayley -------------------------------------------

@pytest.mark.parametrize("field", FIELDS)
def test_hyperbolic_identities(field):
    a = random_hermitian(field, 4, np.random.default_rng(9))
    c, s = mat_func(a, 0.7, "cosh"), mat_func(a, 0.7, "sinh")
    assert (c @ c - s @ s - Mat.eye(field, 4)).norm() < 1e-9
    assert (mat_func(a, 0.7, "exp") - c - s).norm() < 1e-9
    assert (mat_func(a, 0.0, "cosh") - Mat.eye(field, 4)).norm() < 1e-13


def test_mat_func_diagonal_exactness():
    a = Mat.diag("R", [0.5, -1.0, 2.0])
    got = mat_func(a, 1.3, "sinh")
    assert np.allclose(np.diag(got.data), np.sinh(1.3 * np.array([0.5, -1.0, 2.0])), rtol=1e-14)


def test_cayley_basics():
    assert cayley(Mat.eye("R", 3)).norm() == 0
    assert (cayley(Mat.zeros("C", 3)) - Mat.eye("C", 3)).norm() == 0
    with pytest.raises(SingularityError):
        cayley(Mat.diag("R", [1, -1]))


@pytest.mark.parametrize("seed", range(10))
def test_cayley_of_rotation_is_skew_and_involutive(seed):
    x = random_element(GroupSpec("O", 4), seed)
    if np.linalg.det(x.data) < 0:
        x = x @ Mat.diag("R", [-1, 1, 1, 1])
    y = cayley(x)
    assert (y + y.T).norm() < 1e-9
    assert (cayley(y) - x).norm() < 1e-9


# --- random elements and JSON ----------------------------------------------

def test_random_element_membership_and_determinism():
    x = random_element(GroupSpec("O", 3), 1)
    assert unitarity_residual(x) < 1e-10
    u = random_element(GroupSpec("U", 2), 7)
    assert abs(abs(np.linalg.det(u.data)) - 1) < 1e-10
    assert np.array_equal(random_element(GroupSpec("Sp", 3), 4).data,
                          random_element(GroupSpec("Sp", 3), 4).data)


@pytest.mark.parametrize("field", FIELDS)
def test_json_round_trip_is_exact(field):
    m = random_matrix(field, 2, 3, np.random.default_rng(1))
    back = mat_from_json(mat_to_json(m))
    assert np.array_equal(back.data, m.data)


@pytest.mark.parametrize("text", [
    '{"field": "R", "rows": 1, "cols": 1, "data": [[NaN]]}',
    '{"field": "R", "rows": 1, "cols": 1, "data": [[Infinity]]}',
    '{"field": "C", "rows": 1, "cols": 1, "data": [[1]]}',
    '{"field": "Q", "rows": 1, "cols": 1, "data": [[1]]}',
    '[1, 2]',
])
def test_json_rejects_bad_input(text):
    with pytest.raises(ValueError):
        mat_from_json(text)


def test_hermitian_residual_zero_for_symmetric():
    s = Mat.from_real("R", [[1, 2], [2, 3]])
    assert hermitian_residual(s) == 0
    assert json.loads(mat_to_json(s))["rows"] == 2
