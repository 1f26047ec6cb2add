"""Symmetric embeddings: the group itself, Grassmannians, Lagrangian Grassmannian,
complex and quaternionic structures, and Sp(n)/U(n).

Each space is realised as a submanifold of an ambient classical group that is
mapped into itself by the point reflections S_X.  Height-function flows of the
ambient group keep these submanifolds invariant when A obeys the matching
symmetry constraint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PreconditionError
from .group_flow import closed_flow, height_flow
from .matrix_core import (
    Field,
    GroupSpec,
    Mat,
    SpectralCache,
    as_field,
    gram_schmidt,
    herm_eig,
    hermitian_residual,
    random_element,
    random_matrix,
    singular_values,
    unitarity_residual,
)
from .tolerances import DEFAULT_TOL, Tolerances

KINDS = ("group", "grassmann", "laggrass", "complex_struct", "quat_struct", "sp_mod_u")


def standard_complex_structure(n: int) -> np.ndarray:
    """Block diagonal J0 = diag([[0, 1], [-1, 0]], ...) of size 2n."""
    j = np.zeros((2 * n, 2 * n))
    for k in range(n):
        j[2 * k, 2 * k + 1] = 1.0
        j[2 * k + 1, 2 * k] = -1.0
    return j


@dataclass(frozen=True)
class SpaceSpec:
    """A symmetric space together with its embedding in an ambient group."""

    kind: str
    n: int
    m: int = 0
    field: Field = Field.R

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown space kind {self.kind!r}")
        if self.n < 1:
            raise PreconditionError("n must be positive")
        if self.kind == "grassmann" and not 0 <= self.m <= self.n:
            raise PreconditionError("Grassmannian needs 0 <= m <= n")
        object.__setattr__(self, "field", as_field(self.field))

    # factories ------------------------------------------------------------

    @classmethod
    def group(cls, field: Field | str, n: int) -> "SpaceSpec":
        return cls("group", n, field=as_field(field))

    @classmethod
    def grassmann(cls, n: int, m: int, field: Field | str) -> "SpaceSpec":
        return cls("grassmann", n, m, as_field(field))

    @classmethod
    def laggrass(cls, n: int) -> "SpaceSpec":
        """U(n)/O(n): complex symmetric unitary matrices."""
        return cls("laggrass", n, field=Field.C)

    @classmethod
    def complex_struct(cls, n: int) -> "SpaceSpec":
        """O(2n)/U(n): real skew-symmetric orthogonal 2n x 2n matrices."""
        return cls("complex_struct", n, field=Field.R)

    @classmethod
    def quat_struct(cls, n: int) -> "SpaceSpec":
        """U(2n)/Sp(n): complex skew-symmetric unitary 2n x 2n matrices."""
        return cls("quat_struct", n, field=Field.C)

    @classmethod
    def sp_mod_u(cls, n: int) -> "SpaceSpec":
        """Sp(n)/U(n): skew-Hermitian quaternionic unitary matrices."""
        return cls("sp_mod_u", n, field=Field.H)

    # geometry ---------------------------------------------------------------

    @property
    def size(self) -> int:
        """Side length of the ambient matrices."""
        return 2 * self.n if self.kind in ("complex_struct", "quat_struct") else self.n

    @property
    def ambient(self) -> GroupSpec:
        return GroupSpec.for_field(self.field, self.size)

    @property
    def dimension(self) -> int:
        n, d = self.n, self.field.dim
        return {
            "group": GroupSpec.for_field(self.field, n).dim,
            "grassmann": d * self.m * (n - self.m),
            "laggrass": n * (n + 1) // 2,
            "complex_struct": n * (n - 1),
            "quat_struct": 2 * n * n - n,
            "sp_mod_u": n * n + n,
        }[self.kind]

    def membership_residual(self, x: Mat) -> float:
        if x.field != self.field or x.shape != (self.size, self.size):
            raise DimensionError(f"{x!r} does not live in the ambient space of {self}")
        unit = unitarity_residual(x)
        if self.kind == "group":
            return unit
        if self.kind == "grassmann":
            eye = Mat.eye(self.field, self.n)
            trace_gap = abs(x.re_trace() - (2 * self.m - self.n))
            return max(hermitian_residual(x), (x @ x - eye).norm(), trace_gap)
        if self.kind == "laggrass":
            return max(unit, (x - x.T).norm())
        if self.kind in ("complex_struct", "quat_struct"):
            return max(unit, (x + x.T).norm())
        return max(unit, (x + x.ct).norm())

    def require_member(self, x: Mat, tol: float) -> None:
        r = self.membership_residual(x)
        if r > tol:
            raise PreconditionError(f"point is not on {self} (residual {r:.3e})")

    def constraint_residual(self, a: Mat) -> float:
        """How far A is from the symmetry class whose flows preserve the space."""
        if a.field != self.field or a.shape != (self.size, self.size):
            raise DimensionError(f"A has the wrong shape or field for {self}")
        if self.kind == "group":
            return 0.0
        if self.kind == "grassmann":
            return hermitian_residual(a)
        if self.kind == "laggrass":
            return max((a - a.T).norm(), hermitian_residual(a))
        if self.kind in ("complex_struct", "quat_struct"):
            return (a + a.T).norm()
        return (a + a.ct).norm()

    def random_point(self, seed: int) -> Mat:
        rng = np.random.default_rng(seed)
        if self.kind == "group":
            return random_element(self.ambient, seed)
        if self.kind == "grassmann":
            if self.m == 0:
                return Mat.eye(self.field, self.n) * -1.0
            return grassmann_embed(SubspaceBasis(random_matrix(self.field, self.n, self.m, rng)))
        g = random_element(self.ambient, int(rng.integers(2**62)))
        if self.kind == "laggrass":
            return g @ g.T
        if self.kind in ("complex_struct", "quat_struct"):
            return g @ Mat.from_real(self.field, standard_complex_structure(self.n)) @ g.T
        i_unit = np.zeros((self.n, self.n, 4))
        i_unit[np.arange(self.n), np.arange(self.n), 1] = 1.0
        return g @ Mat(Field.H, i_unit) @ g.ct

    def act(self, g: Mat, x: Mat) -> Mat:
        """Action of the isometry group on the space (right translation for groups)."""
        if self.kind == "group":
            return x @ g
        if self.kind in ("laggrass", "complex_struct", "quat_struct"):
            return g @ x @ g.T
        return g @ x @ g.ct

    def __str__(self) -> str:
        if self.kind == "group":
            return str(self.ambient)
        if self.kind == "grassmann":
            return f"G({self.n},{self.m};{self.field.value})"
        return f"{self.kind}({self.n})"


@dataclass(frozen=True)
class SubspaceBasis:
    """Columns of Z span a subspace V of k^n."""

    z: Mat

    def __post_init__(self) -> None:
        sv = singular_values(self.z)
        if self.z.cols > self.z.rows or sv[-1] <= 1e-10 * max(1.0, sv[0]):
            raise PreconditionError("basis matrix does not have full column rank")

    @property
    def n(self) -> int:
        return self.z.rows

    @property
    def dim(self) -> int:
        return self.z.cols

    @property
    def field(self) -> Field:
        return self.z.field

    def orthonormal(self) -> "SubspaceBasis":
        return SubspaceBasis(gram_schmidt(self.z))

    def projector(self) -> Mat:
        q = gram_schmidt(self.z)
        return q @ q.ct


def projector_distance(v: SubspaceBasis, w: SubspaceBasis) -> float:
    """||P_V - P_W||, a basis-independent distance between subspaces."""
    return (v.projector() - w.projector()).norm()


def _require_members(space: SpaceSpec, tol: float, *points: Mat) -> None:
    for p in points:
        space.require_member(p, tol)


def reflect(space: SpaceSpec, x: Mat, y: Mat, tol: Tolerances = DEFAULT_TOL) -> Mat:
    """The point reflection S_x applied to y."""
    _require_members(space, tol.membership, x, y)
    if space.kind == "group":
        return x @ y.ct @ x
    if space.kind == "grassmann":
        return x @ y @ x
    if space.kind == "laggrass":
        return x @ y.conj() @ x
    if space.kind == "complex_struct":
        return -(x @ y @ x)
    if space.kind == "quat_struct":
        return -(x @ y.conj() @ x)
    return -(x @ y @ x)


def grassmann_embed(z: SubspaceBasis) -> Mat:
    """Reflection in span(Z): 2 Z (Z*Z)^-1 Z* - I."""
    q = gram_schmidt(z.z)
    return (q @ q.ct) * 2.0 - Mat.eye(z.field, z.n)


def grassmann_point(space: SpaceSpec, x: Mat, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """The +1 eigenspace of an embedded Grassmannian point."""
    space.require_member(x, tol.membership)
    p = (x + Mat.eye(x.field, x.rows)) * 0.5
    eig = herm_eig(p, tol)
    return SubspaceBasis(eig.vectors.columns(slice(x.rows - space.m, x.rows)))


def grassmann_flow(z: SubspaceBasis, a: Mat, t: float,
                   tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """span(exp(At) Z), re-orthonormalized.

    exp(At) is applied in sub-steps of length at most 1/||A|| with a
    Gram-Schmidt pass after each, so that directions belonging to small
    eigenvalues of A are not swamped by rounding.
    """
    if a.field != z.field or a.shape != (z.n, z.n):
        raise DimensionError("A must be n x n over the subspace's field")
    cache = SpectralCache(a, tol)
    steps = max(1, math.ceil(abs(t) * cache.spectral_norm))
    e = cache.func("exp", t / steps)
    q = gram_schmidt(z.z)
    for _ in range(steps):
        q = gram_schmidt(e @ q)
    return SubspaceBasis(q)


@dataclass(frozen=True)
class InvarianceReport:
    space: str
    samples: int
    t: float
    max_residual: float
    threshold: float
    constraint_residual: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold

    def to_obj(self) -> dict:
        return {
            "space": self.space,
            "samples": self.samples,
            "t": self.t,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "constraint_residual": self.constraint_residual,
            "passed": self.passed,
        }


def check_invariance(space: SpaceSpec, a: Mat, samples: int, t: float, seed: int,
                     tol: Tolerances = DEFAULT_TOL,
                     enforce_constraint: bool = True) -> InvarianceReport:
    """Flow seeded points of ``space`` in the ambient group and measure drift.

    With ``enforce_constraint=False`` an A outside the symmetry class is
    accepted so that the drift it causes can be observed.
    """
    c = space.constraint_residual(a)
    if enforce_constraint and c > tol.hermitian * max(1.0, a.norm()):
        raise PreconditionError(f"A violates the symmetry constraint of {space} ({c:.3e})")
    hermitian = hermitian_residual(a) <= tol.hermitian * max(1.0, a.norm())
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x0 = space.random_point(int(rng.integers(2**62)))
        xt = closed_flow(a, x0, t, tol) if hermitian else height_flow(a, x0, t, tol)
        worst = max(worst, space.membership_residual(xt))
    return InvarianceReport(str(space), samples, t, worst, tol.post_flow, c)
