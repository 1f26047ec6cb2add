import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morseflow.errors import DimensionError, PreconditionError
from morseflow.group_flow import closed_flow
from morseflow.matrix_core import Field, Mat, random_hermitian, random_matrix
from morseflow.symmetric_spaces import (
    SpaceSpec,
    SubspaceBasis,
    check_invariance,
    grassmann_embed,
    grassmann_flow,
    grassmann_point,
    projector_distance,
    reflect,
)

SPACES = [
    SpaceSpec.group("R", 3),
    SpaceSpec.group("C", 2),
    SpaceSpec.group("H", 2),
    SpaceSpec.grassmann(4, 2, "R"),
    SpaceSpec.grassmann(3, 1, "C"),
    SpaceSpec.grassmann(3, 2, "H"),
    SpaceSpec.laggrass(3),
    SpaceSpec.complex_struct(2),
    SpaceSpec.quat_struct(2),
    SpaceSpec.sp_mod_u(2),
]


def matching_a(space, seed):
    """A random A in the symmetry class that preserves ``space``."""
    rng = np.random.default_rng(seed)
    k = space.size
    if space.kind in ("group", "grassmann"):
        return random_hermitian(space.field, k, rng)
    if space.kind == "laggrass":
        s = rng.standard_normal((k, k))
        return Mat.from_real("C", s + s.T)
    m = random_matrix(space.field, k, k, rng)
    if space.kind in ("complex_struct", "quat_struct"):
        return m - m.T
    return m - m.ct


@pytest.mark.parametrize("space", SPACES, ids=str)
def test_random_points_are_members(space):
    for seed in range(5):
        assert space.membership_residual(space.random_point(seed)) < 1e-10


@pytest.mark.parametrize("space", SPACES, ids=str)
def test_flow_preserves_the_space(space):
    rep = check_invariance(space, matching_a(space, 1), samples=5, t=3.0, seed=2)
    assert rep.passed, rep.to_obj()
    assert rep.constraint_residual < 1e-12


@pytest.mark.parametrize("space", SPACES, ids=str)
def test_reflection_is_an_involution_fixing_its_centre(space):
    x, y = space.random_point(3), space.random_point(4)
    assert (reflect(space, x, x) - x).norm() < 1e-9
    sy = reflect(space, x, y)
    assert space.membership_residual(sy) < 1e-9
    assert (reflect(space, x, sy) - y).norm() < 1e-9


def test_laggrass_flow_leaves_the_space_for_a_non_real_a():
    space = SpaceSpec.laggrass(3)
    a = random_hermitian("C", 3, np.random.default_rng(0))
    with pytest.raises(PreconditionError):
        check_invariance(space, a, 2, 1.0, 0)
    drift = check_invariance(space, a, 4, 2.0, 0, enforce_constraint=False)
    assert not drift.passed


def test_membership_rejects_wrong_shape():
    with pytest.raises(DimensionError):
        SpaceSpec.laggrass(2).membership_residual(Mat.eye("C", 3))


def test_dimensions():
    assert SpaceSpec.group("H", 2).dimension == 10
    assert SpaceSpec.grassmann(4, 2, "C").dimension == 8
    assert SpaceSpec.laggrass(3).dimension == 6
    assert SpaceSpec.complex_struct(3).dimension == 6
    assert SpaceSpec.quat_struct(2).dimension == 6
    assert SpaceSpec.sp_mod_u(2).dimension == 6


@settings(max_examples=30)
@given(st.sampled_from(["R", "C", "H"]), st.integers(2, 5), st.integers(0, 10**6))
def test_grassmann_embedding_round_trip(field, n, seed):
    m = 1 + seed % (n - 1)
    space = SpaceSpec.grassmann(n, m, field)
    z = SubspaceBasis(random_matrix(field, n, m, np.random.default_rng(seed)))
    x = grassmann_embed(z)
    assert space.membership_residual(x) < 1e-9
    assert projector_distance(grassmann_point(space, x), z) < 1e-9


@pytest.mark.parametrize("field", ["R", "C", "H"])
def test_grassmann_flow_matches_embedded_group_flow(field):
    n, m = 4, 2
    rng = np.random.default_rng(8)
    a = random_hermitian(field, n, rng)
    z = SubspaceBasis(random_matrix(field, n, m, rng))
    space = SpaceSpec.grassmann(n, m, field)
    x_t = closed_flow(a, grassmann_embed(z), 1.3)
    assert projector_distance(grassmann_point(space, x_t), grassmann_flow(z, a, 1.3)) < 1e-9


def test_grassmann_flow_limit_is_top_eigenspace():
    a = Mat.diag("R", [1.0, 2.0, 3.0, 4.0])
    z = SubspaceBasis(random_matrix("R", 4, 2, np.random.default_rng(0)))
    limit = grassmann_flow(z, a, 60.0)
    top = SubspaceBasis(Mat.from_real("R", np.eye(4)[:, 2:]))
    assert projector_distance(limit, top) < 1e-12


def test_subspace_basis_rejects_rank_deficient_input():
    with pytest.raises(PreconditionError):
        SubspaceBasis(Mat.from_real("R", [[1, 2], [2, 4], [0, 0]]))
    assert SubspaceBasis(Mat.eye(Field.R, 3)).dim == 3
