import itertools

import numpy as np
import pytest
from oracles import diagonal_hessian_index

from morseflow.errors import PreconditionError
from morseflow.group_flow import height
from morseflow.matrix_core import Field, Mat
from morseflow.morse_analysis import (
    SignVector,
    critical_sweep,
    enumerate_critical,
    hessian_signature,
    index_census,
    index_generating_polynomial,
    lie_algebra_basis,
    morse_index,
    morse_smale_matrix,
    nearest_critical,
)
from morseflow.polynomial import IntPolynomial
from morseflow.symmetric_spaces import SpaceSpec

UNITS = {Field.R: 1, Field.C: 2, Field.H: 4}


def test_enumeration_order_and_count():
    vs = enumerate_critical(2)
    assert [v.eps for v in vs] == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    assert len(enumerate_critical(5)) == 32
    with pytest.raises(PreconditionError):
        enumerate_critical(0)
    with pytest.raises(PreconditionError):
        SignVector((1, 0))


def test_index_formula_examples():
    assert morse_index(SignVector((1, 1, 1)), "R") == 3
    assert morse_index(SignVector((-1, 1, 1)), "C") == 8
    assert morse_index(SignVector((1, -1)), "H") == 3
    assert morse_index(SignVector((-1, -1)), "H") == 0


@pytest.mark.parametrize("field", list(Field))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_index_formula_matches_exact_hessian(field, n):
    a = [float(v) for v in range(1, n + 1)]
    for eps in enumerate_critical(n):
        neg, zero = diagonal_hessian_index(a, list(eps.eps), UNITS[field])
        assert zero == 0
        assert neg == morse_index(eps, field)


@pytest.mark.parametrize("field", list(Field))
def test_numeric_signature_matches_exact_hessian_for_other_weights(field):
    a_vals = [0.3, 1.7, 2.2]
    a = Mat.diag(field, a_vals)
    for eps in enumerate_critical(3):
        sig = hessian_signature(a, eps.matrix(field))
        neg, _ = diagonal_hessian_index(a_vals, list(eps.eps), UNITS[field])
        assert sig.negative == neg
        assert sig.zero == 0
        assert sum(sig.as_tuple()) == len(lie_algebra_basis(field, 3))


@pytest.mark.parametrize("field", list(Field))
def test_lie_algebra_basis_is_orthonormal_and_skew(field):
    basis = lie_algebra_basis(field, 3)
    assert len(basis) == {Field.R: 3, Field.C: 9, Field.H: 21}[field]
    g = np.array([[np.real(np.trace(p.rep().conj().T @ q.rep())) for q in basis] for p in basis])
    scale = 2.0 if field is Field.H else 1.0
    assert np.allclose(g / scale, np.eye(len(basis)), atol=1e-12)
    for k in basis:
        assert (k + k.ct).norm() < 1e-15


@pytest.mark.parametrize("field", list(Field))
def test_sweep_agrees_everywhere(field):
    reports = critical_sweep(morse_smale_matrix(3, field))
    assert len(reports) == 8
    assert all(r.agrees for r in reports)


def test_morse_smale_matrix_values():
    assert np.allclose(np.diag(morse_smale_matrix(3, "C").data).real, [1, 3, 5])
    assert np.allclose(morse_smale_matrix(2, "H").data[[0, 1], [0, 1], 0], [3, 7])


@pytest.mark.parametrize("field", list(Field))
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_height_at_critical_points_is_minus_index_balance(field, n):
    # every critical value of the Morse-Smale height is n_minus - n_plus of the Hessian
    a = morse_smale_matrix(n, field)
    for eps in enumerate_critical(n):
        value = height(a, eps.matrix(field))
        m = morse_index(eps, field)
        dim = len(lie_algebra_basis(field, n))
        assert value == pytest.approx(m - (dim - m), abs=1e-12)


@pytest.mark.parametrize("field", list(Field))
def test_generating_polynomial_is_a_product(field):
    d = field.dim
    for n in range(1, 8):
        expect = IntPolynomial.one()
        for k in range(1, n + 1):
            expect = expect * (IntPolynomial.one() + IntPolynomial.monomial(d * k - 1))
        assert index_generating_polynomial(n, field) == expect
        assert index_generating_polynomial(n, field).is_palindromic()


def test_generating_polynomial_large_n_uses_product():
    p = index_generating_polynomial(15, "R")
    assert p(1) == 2 ** 15
    assert p.degree == sum(range(15))


def test_nearest_critical():
    x = Mat.diag("C", [1, -1, 1]) + Mat.from_real("C", np.full((3, 3), 1e-9))
    assert nearest_critical(x).eps == (1, -1, 1)
    assert nearest_critical(Mat.eye("R", 2) * 0.5) is None


@pytest.mark.parametrize("space, expect", [
    (SpaceSpec.laggrass(2), [1, 1, 1, 1]),
    (SpaceSpec.complex_struct(2), [2, 0, 2]),
    (SpaceSpec.quat_struct(2), [1, 1, 0, 0, 0, 1, 1]),
    (SpaceSpec.sp_mod_u(2), [1, 0, 1, 0, 1, 0, 1]),
])
def test_space_census(space, expect):
    rep = index_census(space)
    assert rep.degenerate == 0
    assert list(rep.polynomial.coeffs) == expect


def test_census_rejects_grassmannian():
    with pytest.raises(PreconditionError):
        index_census(SpaceSpec.grassmann(3, 1, "R"))


def test_exhaustive_small_signature_count():
    # n+ + n- equals the group dimension at every nondegenerate critical point
    for field, n in itertools.product(list(Field), [2]):
        a = morse_smale_matrix(n, field)
        for r in critical_sweep(a):
            pos, neg, zero = r.signature.as_tuple()
            assert pos + neg + zero == len(lie_algebra_basis(field, n))
