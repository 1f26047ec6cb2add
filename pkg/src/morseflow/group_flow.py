"""Gradient flows of height functions f_A(X) = Re Tr(AX) on O(n), U(n), Sp(n).

The flow is the matrix Riccati equation  dX/dt = A* - X A X.  Writing
X = P Q^-1 turns it into the linear system

    d/dt [P; Q] = [[0, A*], [A, 0]] [P; Q],

so X(t) is a linear-fractional function of X(0).  For Hermitian A the
propagator is [[cosh At, sinh At], [sinh At, cosh At]], which gives

    X(t) = (sinh At + cosh At X0)(cosh At + sinh At X0)^-1.

Evaluating this at large t in one shot loses accuracy (entries of the
intermediate matrices are scaled by cosh(a_i t)/cosh(a_j t)), so the
propagator is applied in equal sub-steps of length at most 1/||A||, each of
which is the exact closed form for that sub-interval.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import (
    ConditioningError,
    DimensionError,
    PreconditionError,
    SingularityError,
)
from .matrix_core import (
    Field,
    GroupSpec,
    Mat,
    SpectralCache,
    check_same,
    hermitian_residual,
    mat_func,
    polar_retract,
    restore_structure,
    singular_values,
    unitarity_residual,
)
from .tolerances import DEFAULT_TOL, Tolerances

__all__ = [
    "GroupSpec",
    "height",
    "grad_rhs",
    "closed_flow",
    "height_flow",
    "numeric_flow",
    "linearized_flow",
    "polar_via_flow",
    "bracket_residual",
    "critical_residual",
    "is_morse_diagonal",
]

# sub-step length times the spectral norm of the generator
_MAX_STEP = 1.0


def _square(a: Mat, x: Mat) -> None:
    check_same(a, x)
    if not a.is_square:
        raise DimensionError("height functions are defined on square matrices")


def height(a: Mat, x: Mat) -> float:
    """f_A(X) = Re Tr(AX)."""
    _square(a, x)
    return (a @ x).re_trace()


def is_morse_diagonal(a: Mat, ordered: bool = True) -> bool:
    """True for A = diag(a_1..a_n) real with 0 < a_1 < ... < a_n.

    With ``ordered=False`` any distinct positive diagonal entries qualify.
    """
    if not a.is_square:
        return False
    if a.field is Field.H:
        off = a.data.copy()
        diag = a.data[np.arange(a.rows), np.arange(a.rows), 0]
        off[np.arange(a.rows), np.arange(a.rows), 0] = 0.0
    else:
        diag = np.diag(a.data)
        off = a.data - np.diag(diag)
        if np.iscomplexobj(diag):
            if np.any(diag.imag != 0):
                return False
            diag = diag.real
    if not ordered:
        diag = np.sort(diag)
    return bool(np.all(off == 0) and diag[0] > 0 and np.all(np.diff(diag) > 0))


def _require_member(x: Mat, tol: float) -> None:
    if not x.is_square:
        raise DimensionError("group elements are square")
    r = unitarity_residual(x)
    if r > tol:
        raise PreconditionError(f"X is not in the group (||X*X - I|| = {r:.3e})")


def grad_rhs(a: Mat, x: Mat, tol: Tolerances = DEFAULT_TOL) -> Mat:
    """Gradient of f_A at X in the embedded metric: A* - XAX."""
    _square(a, x)
    _require_member(x, tol.membership)
    return a.ct - x @ a @ x


def critical_residual(a: Mat, x: Mat) -> float:
    """||AX - (AX)*||, zero exactly at critical points."""
    ax = a @ x
    return (ax - ax.ct).norm()


class _Propagator:
    """Sub-stepped action of the linear propagator on X = P Q^-1."""

    def __init__(self, blocks: tuple[np.ndarray, ...], field: Field, substeps: int):
        self.e11, self.e12, self.e21, self.e22 = blocks
        self.field = field
        self.substeps = substeps

    def apply(self, x: np.ndarray, tol: Tolerances, retract: bool = False) -> np.ndarray:
        eye = np.eye(x.shape[0])
        for _ in range(self.substeps):
            p = self.e11 @ x + self.e12
            q = self.e21 @ x + self.e22
            if singular_values_rep(q)[-1] <= tol.singular * max(1.0, np.linalg.norm(q)):
                raise SingularityError("resolvent (cosh At + sinh At X) is singular")
            x = np.linalg.solve(q.T, p.T).T
            if retract:
                # Off the lower critical points the group is normally repelling:
                # rounding errors orthogonal to G grow like exp(2 a t) unless removed.
                x = 0.5 * x @ (3.0 * eye - x.conj().T @ x)
            x = restore_structure(self.field, x)
        return x


def singular_values_rep(m: np.ndarray) -> np.ndarray:
    return np.linalg.svd(m, compute_uv=False)


def _substeps(norm: float, t: float) -> int:
    return max(1, math.ceil(abs(t) * norm / _MAX_STEP))


def _hermitian_propagator(cache: SpectralCache, t: float) -> _Propagator:
    k = _substeps(cache.spectral_norm, t)
    h = t / k
    c = cache.rep_func("cosh", h)
    s = cache.rep_func("sinh", h)
    return _Propagator((c, s, s, c), cache.field, k)


def _generator(a: Mat) -> Mat:
    n = a.rows
    zero = Mat.zeros(a.field, n)
    upper = np.concatenate([zero.data, a.ct.data], axis=1)
    lower = np.concatenate([a.data, zero.data], axis=1)
    return Mat(a.field, np.concatenate([upper, lower], axis=0))


def _general_propagator(a: Mat, t: float, tol: Tolerances) -> _Propagator:
    gen = SpectralCache(_generator(a), tol)
    k = _substeps(gen.spectral_norm, t)
    e = gen.func("exp", t / k)
    n = a.rows
    blocks = tuple(
        Mat(a.field, e.data[r:r + n, c:c + n]).rep()
        for r, c in ((0, 0), (0, n), (n, 0), (n, n))
    )
    return _Propagator(blocks, a.field, k)


def closed_flow(a: Mat, x0: Mat, t: float, tol: Tolerances = DEFAULT_TOL) -> Mat:
    """Explicit solution of dX/dt = A - XAX for Hermitian A.

    X(t) = (sinh At + cosh At X0)(cosh At + sinh At X0)^-1.  X0 may be any
    square matrix for which the resolvent stays invertible; for X0 in the
    group it always does, and each sub-step is then followed by one
    Newton-Schulz polar step to keep X(t) on the group.
    """
    _square(a, x0)
    if hermitian_residual(a) > tol.hermitian * max(1.0, a.norm()):
        raise PreconditionError("closed_flow needs a Hermitian A; use height_flow")
    if t == 0:
        return x0
    prop = _hermitian_propagator(SpectralCache(a, tol), t)
    on_group = unitarity_residual(x0) <= tol.membership
    return Mat.from_rep(a.field, prop.apply(x0.rep(), tol, retract=on_group))


def height_flow(a: Mat, x0: Mat, t: float, tol: Tolerances = DEFAULT_TOL) -> Mat:
    """Explicit solution of dX/dt = A* - XAX for an arbitrary square A."""
    _square(a, x0)
    if t == 0:
        return x0
    prop = _general_propagator(a, t, tol)
    on_group = unitarity_residual(x0) <= tol.membership
    return Mat.from_rep(a.field, prop.apply(x0.rep(), tol, retract=on_group))


def numeric_flow(a: Mat, x0: Mat, t: float, steps: int,
                 tol: Tolerances = DEFAULT_TOL) -> Mat:
    """Classical RK4 on dX/dt = A* - XAX with a polar retraction after each step."""
    _square(a, x0)
    if steps < 1:
        raise PreconditionError("steps must be >= 1")
    _require_member(x0, tol.membership)
    if t == 0:
        return x0
    ar, ah = a.rep(), a.ct.rep()
    eye = np.eye(ar.shape[0])

    def rhs(x: np.ndarray) -> np.ndarray:
        return ah - x @ ar @ x

    h = t / steps
    x = x0.rep()
    for _ in range(steps):
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h * k2)
        k4 = rhs(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        for _ in range(2):
            x = 0.5 * x @ (3.0 * eye - x.conj().T @ x)
        x = restore_structure(a.field, x)
    return Mat.from_rep(a.field, x)


def linearized_flow(a: Mat, y0: Mat, t: float, tol: Tolerances = DEFAULT_TOL) -> Mat:
    """Solution exp(-At) Y0 exp(-At) of dY/dt = -(AY + YA)."""
    _square(a, y0)
    e = mat_func(a, -t, "exp", tol)
    return e @ y0 @ e


def polar_via_flow(a: Mat, tol: Tolerances = DEFAULT_TOL) -> tuple[Mat, Mat]:
    """Polar decomposition A = JQ from the limit of the flow started at X0 = 0.

    The trajectory X(t) tends to Q*; it is followed for t = 1, 2, 4, ...
    until ||A* - XAX|| drops below ``tol.polar_residual``.
    """
    if not a.is_square:
        raise DimensionError("polar decomposition needs a square matrix")
    gap = float(singular_values(a)[-1])
    if gap <= tol.nondegenerate:
        raise ConditioningError(f"A is (numerically) degenerate: sigma_min = {gap:.3e}")
    t_max = 2.0 ** 16 / gap
    x = Mat.zeros(a.field, a.rows).rep()
    ar, ah = a.rep(), a.ct.rep()
    t_now, t_next = 0.0, 1.0
    while True:
        prop = _general_propagator(a, t_next - t_now, tol)
        x = prop.apply(x, tol)
        t_now = t_next
        if np.linalg.norm(ah - x @ ar @ x) / (2.0 if a.field is Field.H else 1.0) ** 0.5 \
                < tol.polar_residual:
            break
        t_next *= 2.0
        if t_next > t_max:
            raise ConditioningError("flow did not reach the polar factor; A is ill-conditioned")
    q = Mat.from_rep(a.field, x).ct
    j = a @ q.ct
    return j, q


def bracket_residual(a1: Mat, a2: Mat, x: Mat) -> float:
    """Norm of the Lie bracket of the two gradient fields at X."""
    _square(a1, x)
    _square(a2, x)
    comm = a2 @ a1 - a1 @ a2
    return (comm @ x - x @ comm).norm()


def retract(x: Mat) -> Mat:
    """Nearest group element (unitary polar factor) of a nearly unitary X."""
    return polar_retract(x)
