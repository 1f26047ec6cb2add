"""Critical points of height functions, their Morse indices and numerical Hessians.

For A = diag(a_1..a_n) with 0 < a_1 < ... < a_n the critical points of f_A on
O(n), U(n), Sp(n) are the 2^n sign matrices diag(eps), and the index of
diag(eps) is the sum of (d k - 1) over the k with eps_k = +1, where d is the
real dimension of the field.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import PreconditionError
from .group_flow import critical_residual, height
from .matrix_core import Field, Mat, as_field, inner
from .polynomial import IntPolynomial, product
from .symmetric_spaces import SpaceSpec, standard_complex_structure
from .tolerances import DEFAULT_TOL, Tolerances

MAX_N = 20


@dataclass(frozen=True)
class SignVector:
    """eps in {-1, +1}^n, naming the critical point diag(eps)."""

    eps: tuple[int, ...]

    def __post_init__(self) -> None:
        eps = tuple(int(e) for e in self.eps)
        if not eps or any(e not in (-1, 1) for e in eps):
            raise PreconditionError(f"not a sign vector: {self.eps!r}")
        object.__setattr__(self, "eps", eps)

    @property
    def n(self) -> int:
        return len(self.eps)

    def matrix(self, field: Field | str) -> Mat:
        return Mat.diag(field, self.eps)


@dataclass(frozen=True)
class Signature:
    positive: int
    negative: int
    zero: int

    def as_tuple(self) -> tuple[int, int, int]:
        return self.positive, self.negative, self.zero


@dataclass(frozen=True)
class IndexReport:
    eps: SignVector
    index_formula: int
    signature: Signature
    height_value: float

    @property
    def agrees(self) -> bool:
        return self.signature.zero == 0 and self.signature.negative == self.index_formula

    def to_obj(self) -> dict:
        return {
            "eps": list(self.eps.eps),
            "index_formula": self.index_formula,
            "signature": list(self.signature.as_tuple()),
            "height_value": self.height_value,
        }


def enumerate_critical(n: int) -> list[SignVector]:
    """All 2^n sign vectors, lexicographic with -1 before +1."""
    if not 1 <= n <= MAX_N:
        raise PreconditionError(f"n must lie in [1, {MAX_N}]")
    return [SignVector(e) for e in itertools.product((-1, 1), repeat=n)]


def morse_index(eps: SignVector, field: Field | str) -> int:
    d = as_field(field).dim
    return sum(d * k - 1 for k, e in enumerate(eps.eps, start=1) if e == 1)


def morse_smale_matrix(n: int, field: Field | str) -> Mat:
    """diag(d - 1, 2d - 1, ..., nd - 1)."""
    if n < 1:
        raise PreconditionError("n must be positive")
    d = as_field(field).dim
    return Mat.diag(field, [d * k - 1 for k in range(1, n + 1)])


def index_generating_polynomial(n: int, field: Field | str) -> IntPolynomial:
    """sum over all sign vectors of t^index."""
    if not 1 <= n <= MAX_N:
        raise PreconditionError(f"n must lie in [1, {MAX_N}]")
    d = as_field(field).dim
    # the sum factorizes coordinate by coordinate; enumerate anyway for small n
    if n <= 12:
        return IntPolynomial.from_exponents(morse_index(e, field) for e in enumerate_critical(n))
    return product([IntPolynomial.one() + IntPolynomial.monomial(d * k - 1)
                    for k in range(1, n + 1)])


# --------------------------------------------------------------------------
# numerical Hessians

def _imaginary_units(field: Field) -> list[np.ndarray]:
    return [np.eye(4)[i] for i in range(1, 4)] if field is Field.H else (
        [np.array([1j])] if field is Field.C else [])


def _all_units(field: Field) -> list[np.ndarray]:
    if field is Field.H:
        return [np.eye(4)[i] for i in range(4)]
    if field is Field.C:
        return [np.array([1.0 + 0j]), np.array([1j])]
    return [np.array([1.0])]


def lie_algebra_basis(field: Field | str, n: int) -> list[Mat]:
    """Orthonormal basis of the skew-Hermitian n x n matrices over the field."""
    field = as_field(field)
    shape = (n, n, 4) if field is Field.H else (n, n)
    dtype = np.complex128 if field is Field.C else np.float64
    basis: list[Mat] = []
    for i in range(n):
        for u in _imaginary_units(field):
            b = np.zeros(shape, dtype=dtype)
            b[i, i] = u if field is Field.H else u[0]
            basis.append(Mat(field, b))
    s = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            for u in _all_units(field):
                b = np.zeros(shape, dtype=dtype)
                if field is Field.H:
                    conj = u * np.array([1.0, -1.0, -1.0, -1.0])
                    b[i, j] = s * u
                    b[j, i] = -s * conj
                else:
                    b[i, j] = s * u[0]
                    b[j, i] = -s * np.conj(u[0])
                basis.append(Mat(field, b))
    return basis


def _tangent_chart(space: SpaceSpec, x: Mat, tol: Tolerances) -> list[Mat]:
    """Lie algebra elements K_j whose infinitesimal action at x is orthonormal."""
    if space.dimension == 0:
        return []
    gens = lie_algebra_basis(space.field, space.size)
    images = [_action_image(space, k, x) for k in gens]
    mat = np.stack([im.vec() for im in images], axis=1)
    u, s, vt = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > 1e-8 * s[0]))
    if rank != space.dimension:
        raise PreconditionError(
            f"tangent space at the point has rank {rank}, expected {space.dimension}")
    coeffs = vt[:rank].T / s[:rank]
    out = []
    for j in range(rank):
        acc = gens[0] * float(coeffs[0, j])
        for i in range(1, len(gens)):
            acc = acc + gens[i] * float(coeffs[i, j])
        out.append(acc)
    return out


def hessian_matrix(a: Mat, x: Mat, space: SpaceSpec | None = None,
                   tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hessian of f_A at a critical point in orthonormal exponential coordinates.

    Second-order central differences with step h and h/2, combined by one
    Richardson extrapolation.
    """
    if space is None:
        space = SpaceSpec.group(a.field, a.rows)
    space.require_member(x, tol.membership)
    r = critical_residual(a, x) if space.kind == "group" else _space_gradient_norm(a, x, space)
    if r > tol.critical * max(1.0, a.norm()):
        raise PreconditionError(f"point is not critical (gradient residual {r:.3e})")
    dirs = _tangent_chart(space, x, tol)
    dim = len(dirs)
    # work on working representations: Re Tr over H is half the complex trace
    scale = 0.5 if a.field is Field.H else 1.0
    ar, xr = a.rep(), x.rep()
    kr = [d.rep() for d in dirs]
    act = _rep_action(space.kind)
    f0 = scale * float(np.real(np.trace(ar @ xr)))

    def f(coords: dict[int, float]) -> float:
        k = sum(kr[i] * c for i, c in coords.items())
        return scale * float(np.real(np.trace(ar @ act(scipy.linalg.expm(k), xr)))) - f0

    def hess(h: float) -> np.ndarray:
        out = np.zeros((dim, dim))
        for i in range(dim):
            out[i, i] = (f({i: h}) + f({i: -h})) / h**2
            for j in range(i):
                v = (f({i: h, j: h}) - f({i: h, j: -h})
                     - f({i: -h, j: h}) + f({i: -h, j: -h})) / (4 * h**2)
                out[i, j] = out[j, i] = v
        return out

    h = tol.hessian_step
    return (4.0 * hess(h / 2) - hess(h)) / 3.0


def _space_gradient_norm(a: Mat, x: Mat, space: SpaceSpec) -> float:
    """Norm of the projection of A* onto the tangent space at x."""
    dirs = _tangent_chart(space, x, DEFAULT_TOL)
    ah = a.ct
    return float(np.sqrt(sum(inner(ah, _action_image(space, k, x)) ** 2 for k in dirs)))


def _rep_action(kind: str):
    if kind == "group":
        return lambda g, x: x @ g
    if kind in ("laggrass", "complex_struct", "quat_struct"):
        return lambda g, x: g @ x @ g.T
    return lambda g, x: g @ x @ g.conj().T


def _action_image(space: SpaceSpec, k: Mat, x: Mat) -> Mat:
    if space.kind == "group":
        return x @ k
    if space.kind in ("laggrass", "complex_struct", "quat_struct"):
        return k @ x + x @ k.T
    return k @ x - x @ k


def hessian_signature(a: Mat, x: Mat, space: SpaceSpec | None = None,
                      tol: Tolerances = DEFAULT_TOL) -> Signature:
    """(n+, n-, n0) of the Hessian, zero threshold ``tol.hessian_zero * ||A||``."""
    hmat = hessian_matrix(a, x, space, tol)
    if hmat.size == 0:
        return Signature(0, 0, 0)
    w = np.linalg.eigvalsh(hmat)
    thr = tol.hessian_zero * max(a.norm(), 1e-300)
    return Signature(int(np.sum(w > thr)), int(np.sum(w < -thr)), int(np.sum(np.abs(w) <= thr)))


def critical_sweep(a: Mat, tol: Tolerances = DEFAULT_TOL) -> list[IndexReport]:
    """Formula index, numeric signature and height at every diag(eps)."""
    out = []
    for eps in enumerate_critical(a.rows):
        x = eps.matrix(a.field)
        out.append(IndexReport(eps, morse_index(eps, a.field),
                               hessian_signature(a, x, None, tol), height(a, x)))
    return out


def nearest_critical(x: Mat, tol: float = 1e-6) -> SignVector | None:
    """The sign vector diag(eps) within ``tol`` of X, if any."""
    if x.field is Field.H:
        diag = x.data[np.arange(x.rows), np.arange(x.rows), 0]
    else:
        diag = np.real(np.diag(x.data))
    eps = SignVector(tuple(1 if v >= 0 else -1 for v in diag))
    if (x - eps.matrix(x.field)).norm() < tol:
        return eps
    return None


# --------------------------------------------------------------------------
# symmetric spaces

@dataclass(frozen=True)
class SpaceCriticalPoint:
    eps: SignVector
    x: Mat


def space_height_matrix(space: SpaceSpec, a_values: Sequence[float]) -> Mat:
    """A in the symmetry class of ``space`` built from positive weights a_k."""
    a_values = [float(v) for v in a_values]
    n = space.n
    if len(a_values) != n:
        raise PreconditionError(f"need {n} weights")
    if space.kind in ("group", "grassmann", "laggrass"):
        return Mat.diag(space.field, a_values)
    if space.kind in ("complex_struct", "quat_struct"):
        j = standard_complex_structure(n)
        return Mat.from_real(space.field, j * np.repeat(a_values, 2)[:, None])
    data = np.zeros((n, n, 4))
    data[np.arange(n), np.arange(n), 1] = a_values
    return Mat(Field.H, data)


def space_critical_points(space: SpaceSpec) -> list[SpaceCriticalPoint]:
    """The 2^n sign-type critical points of the height functions above."""
    if space.kind == "grassmann":
        raise PreconditionError("Grassmannian critical points are coordinate subspaces")
    pts = []
    for eps in enumerate_critical(space.n):
        if space.kind in ("group", "laggrass"):
            x = eps.matrix(space.field)
        elif space.kind in ("complex_struct", "quat_struct"):
            j = standard_complex_structure(space.n)
            x = Mat.from_real(space.field, j * np.repeat(eps.eps, 2)[:, None])
        else:
            data = np.zeros((space.n, space.n, 4))
            data[np.arange(space.n), np.arange(space.n), 1] = eps.eps
            x = Mat(Field.H, data)
        pts.append(SpaceCriticalPoint(eps, x))
    return pts


@dataclass(frozen=True)
class CensusReport:
    space: str
    polynomial: IntPolynomial
    degenerate: int
    signatures: tuple[tuple[tuple[int, ...], Signature], ...]


def index_census(space: SpaceSpec, a_values: Sequence[float] | None = None,
                 tol: Tolerances = DEFAULT_TOL) -> CensusReport:
    """Numerical Morse indices at every sign-type critical point of ``space``."""
    if a_values is None:
        a_values = range(1, space.n + 1)
    a = space_height_matrix(space, a_values)
    sigs = []
    for p in space_critical_points(space):
        sigs.append((p.eps.eps, hessian_signature(a, p.x, space, tol)))
    poly = IntPolynomial.from_exponents(s.negative for _, s in sigs)
    return CensusReport(str(space), poly, sum(1 for _, s in sigs if s.zero), tuple(sigs))

