import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morseflow.betti_combinatorics import verify_group_decomposition
from morseflow.errors import IndeterminateError, PreconditionError
from morseflow.group_flow import closed_flow
from morseflow.matrix_core import Field, GroupSpec, Mat, random_element, random_matrix
from morseflow.morse_analysis import (
    SignVector,
    index_generating_polynomial,
    morse_index,
)
from morseflow.schubert_cells import (
    CellID,
    SchubertSymbol,
    cell_dimension,
    cell_polynomial,
    classify,
    enumerate_cells,
    flow_limit,
    group_cell_dimension,
    minus_one_complement,
    schubert_symbol,
    shared_decomposition_check,
)
from morseflow.symmetric_spaces import SubspaceBasis


def jumps_by_rank(z: Mat) -> tuple[int, ...]:
    """dim(V cap U_l) = m + l - rank[Z | e_1..e_l], via numpy's matrix_rank."""
    zr = z.rep()
    factor = 2 if z.field is Field.H else 1
    n, m = z.rows, z.cols
    jumps, prev = [], 0
    for l in range(1, n + 1):
        e = Mat.from_real(z.field, np.eye(n)[:, :l]).rep()
        dim = m + l - np.linalg.matrix_rank(np.hstack([zr, e]), tol=1e-8) // factor
        if dim > prev:
            jumps.append(l)
            prev = dim
    return tuple(jumps)


def test_symbol_validation_and_partitions():
    s = SchubertSymbol((2, 4), 5)
    assert s.to_partition() == (2, 1)
    assert SchubertSymbol.from_partition((2, 1), 2, 5) == s
    assert s.grassmann_dimension("C") == 6
    with pytest.raises(PreconditionError):
        SchubertSymbol((3, 2), 4)
    with pytest.raises(PreconditionError):
        SchubertSymbol.from_partition((4,), 1, 3)


@settings(max_examples=40)
@given(st.sampled_from(["R", "C", "H"]), st.integers(2, 6), st.integers(0, 10**6))
def test_symbol_of_generic_subspace_matches_rank_oracle(field, n, seed):
    m = 1 + seed % n
    z = random_matrix(field, n, m, np.random.default_rng(seed))
    sym = schubert_symbol(SubspaceBasis(z))
    assert sym.jumps == jumps_by_rank(z)
    # a generic m-plane lies in the top cell
    assert sym.jumps == tuple(range(n - m + 1, n + 1))


@pytest.mark.parametrize("field", ["R", "C", "H"])
def test_symbol_of_sparse_subspaces_matches_rank_oracle(field):
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(1, n + 1))
        z = random_matrix(field, n, m, rng)
        # zero out a random lower block so that the subspace meets the flag early
        cut = int(rng.integers(0, n))
        data = z.data.copy()
        data[cut:, : m // 2] = 0
        z = Mat(field, data)
        if np.linalg.matrix_rank(z.rep()) < m * (2 if field == "H" else 1):
            continue
        assert schubert_symbol(SubspaceBasis(z)).jumps == jumps_by_rank(z)


def test_coordinate_subspaces_have_their_positions_as_jumps():
    z = Mat.from_real("R", np.eye(5)[:, [1, 3]])
    assert schubert_symbol(SubspaceBasis(z)).jumps == (2, 4)


def test_cell_ids_and_critical_points_are_inverse():
    for cell in enumerate_cells(4):
        eps = cell.critical_point()
        assert CellID.of_critical_point(eps) == cell
        assert CellID.from_obj(cell.to_obj(), 4) == cell
    assert len(enumerate_cells(4)) == 16


@pytest.mark.parametrize("field", ["R", "C", "H"])
def test_cell_dimension_equals_index_of_top_point(field):
    for cell in enumerate_cells(4):
        assert group_cell_dimension(cell, field) == morse_index(cell.critical_point(), field)
    assert cell_dimension(SchubertSymbol((1, 2), 3), 3, field) == 0


@pytest.mark.parametrize("field", ["R", "C", "H"])
@pytest.mark.parametrize("n", range(1, 7))
def test_cell_polynomial_equals_index_polynomial(field, n):
    assert cell_polynomial(n, field) == index_generating_polynomial(n, field)
    assert cell_polynomial(n, field) == verify_group_decomposition(n, field).rhs


def test_minus_one_complement_and_band():
    x = Mat.diag("R", [1, -1, 1])
    w = minus_one_complement(x)
    assert w.cols == 2
    assert minus_one_complement(Mat.eye("C", 2) * -1.0) is None
    theta = np.pi - 1e-6
    rot = Mat.from_real("R", [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    with pytest.raises(IndeterminateError):
        minus_one_complement(rot)


def test_classify_critical_points_and_preconditions():
    a = Mat.diag("C", [1.0, 2.0, 3.0])
    for cell in enumerate_cells(3):
        assert classify(cell.critical_point().matrix("C"), a) == cell
    with pytest.raises(PreconditionError):
        classify(Mat.eye("C", 3) * 2.0, a)
    with pytest.raises(PreconditionError):
        classify(Mat.eye("C", 3), Mat.diag("C", [3.0, 2.0, 1.0]))


@pytest.mark.parametrize("field", ["R", "C", "H"])
def test_classification_is_constant_along_trajectories(field):
    # small weights keep lower-cell points far from their saddle limits
    a = Mat.diag(field, [0.3, 0.6, 0.9])
    for seed in range(15):
        x = random_element(GroupSpec.for_field(field, 3), seed)
        cell = classify(x, a)
        for t in (0.5, 1.0, 5.0):
            assert classify(closed_flow(a, x, t), a) == cell


def test_flow_limit_of_generic_point_is_identity():
    a = Mat.diag("R", [1.0, 2.0, 3.0])
    x = random_element(GroupSpec("O", 3), 5)
    lim = flow_limit(a, x)
    assert lim.eps is not None and lim.distance < 1e-6
    assert CellID.of_critical_point(lim.eps) == classify(x, a)


def test_shared_decomposition_and_negative_control():
    a1 = Mat.diag("C", [1.0, 2.0, 3.0])
    same = shared_decomposition_check(a1, Mat.diag("C", [1.0, 3.0, 5.0]), 40, seed=1)
    assert same.passed and same.matches == 40
    r1, r2 = Mat.diag("R", [1.0, 2.0, 3.0]), Mat.diag("R", [3.0, 1.0, 2.0])
    differ = shared_decomposition_check(r1, r2, 40, seed=1)
    assert differ.mismatches > 0
    with pytest.raises(PreconditionError):
        shared_decomposition_check(a1, Mat.diag("C", [1.0, 1.0, 2.0]), 1, 0)


def test_sign_vector_cell_round_trip_example():
    assert CellID.of_critical_point(SignVector((-1, 1, -1, 1))).symbol.jumps == (2, 4)


def test_worked_examples():
    e = np.eye(4)
    assert schubert_symbol(SubspaceBasis(Mat.from_real("R", e[:, [0, 2]]))).jumps == (1, 3)
    diag_plane = Mat.from_real("C", (e[:, 0] + e[:, 1])[:, None])
    assert schubert_symbol(SubspaceBasis(diag_plane)).jumps == (2,)
    a = Mat.diag("R", [1.0, 2.0, 3.0])
    assert classify(Mat.diag("R", [1, -1, 1]), a) == CellID(2, SchubertSymbol((1, 3), 3))
    assert classify(Mat.eye("R", 3) * -1.0, a) == CellID(0, SchubertSymbol((), 3))
