"""Dense matrices over R, C and the quaternions H.

Quaternion matrices are stored component-wise: an ``(r, c, 4)`` float array
holding ``a + b i + c j + d k`` per entry.  Anything spectral (eigensolve,
inverse, matrix functions) goes through the complex ``2r x 2c`` representation

    q = z1 + z2 j  ->  [[z1, z2], [-conj(z2), conj(z1)]]

which is a ring homomorphism compatible with the conjugate transpose, and is
mapped back afterwards.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceError,
    DimensionError,
    PreconditionError,
    SingularityError,
)
from .tolerances import DEFAULT_TOL, Tolerances


class Field(str, enum.Enum):
    R = "R"
    C = "C"
    H = "H"

    @property
    def dim(self) -> int:
        """Real dimension of the field."""
        return {"R": 1, "C": 2, "H": 4}[self.value]


def as_field(field: Field | str) -> Field:
    try:
        return Field(field)
    except ValueError:
        raise PreconditionError(f"unknown field {field!r}; expected R, C or H") from None


# --------------------------------------------------------------------------
# scalars

def _hamilton(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    a1, b1, c1, d1 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    a2, b2, c2, d2 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], axis=-1)


@dataclass(frozen=True)
class Scalar:
    """An element of R, C or H given by its 1, 2 or 4 real components."""

    field: Field
    parts: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "field", as_field(self.field))
        object.__setattr__(self, "parts", tuple(float(p) for p in self.parts))
        if len(self.parts) != self.field.dim:
            raise DimensionError(f"{self.field.value} scalar needs {self.field.dim} components")

    def _check(self, other: "Scalar") -> None:
        if not isinstance(other, Scalar) or other.field != self.field:
            raise DimensionError("scalar field mismatch")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field, tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        if self.field is Field.R:
            return Scalar(Field.R, (self.parts[0] * other.parts[0],))
        if self.field is Field.C:
            z = complex(*self.parts) * complex(*other.parts)
            return Scalar(Field.C, (z.real, z.imag))
        return Scalar(Field.H, tuple(_hamilton(np.array(self.parts), np.array(other.parts))))

    def conj(self) -> "Scalar":
        return Scalar(self.field, (self.parts[0],) + tuple(-p for p in self.parts[1:]))

    def __abs__(self) -> float:
        return math.sqrt(sum(p * p for p in self.parts))

    @property
    def real(self) -> float:
        return self.parts[0]


# --------------------------------------------------------------------------
# matrices

def _to_rep_h(data: np.ndarray) -> np.ndarray:
    z1 = data[..., 0] + 1j * data[..., 1]
    z2 = data[..., 2] + 1j * data[..., 3]
    return np.block([[z1, z2], [-z2.conj(), z1.conj()]])


def restore_structure(field: "Field", rep: np.ndarray) -> np.ndarray:
    """Project a working representation back onto quaternionic form (no-op for R, C).

    Long iterations in the complex 2n representation can drift off the
    quaternionic subspace when it is dynamically unstable there.
    """
    if field is Field.H:
        return _to_rep_h(_from_rep_h(rep))
    return rep


def _from_rep_h(rep: np.ndarray) -> np.ndarray:
    r, c = rep.shape[0] // 2, rep.shape[1] // 2
    z1 = 0.5 * (rep[:r, :c] + rep[r:, c:].conj())
    z2 = 0.5 * (rep[:r, c:] - rep[r:, :c].conj())
    return np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)


@dataclass(frozen=True, eq=False)
class Mat:
    """An immutable dense matrix over one of the three fields.

    ``data`` is a float ``(r, c)`` array for R, complex ``(r, c)`` for C and a
    float ``(r, c, 4)`` component array for H.
    """

    field: Field
    data: np.ndarray

    def __post_init__(self) -> None:
        field = as_field(self.field)
        data = np.array(self.data, copy=True)
        if field is Field.R:
            if np.iscomplexobj(data):
                raise DimensionError("real matrix built from complex data")
            data = data.astype(np.float64)
            ok = data.ndim == 2
        elif field is Field.C:
            data = data.astype(np.complex128)
            ok = data.ndim == 2
        else:
            data = data.astype(np.float64)
            ok = data.ndim == 3 and data.shape[2] == 4
        if not ok or data.shape[0] < 1 or data.shape[1] < 1:
            raise DimensionError(f"bad data shape {data.shape} for field {field.value}")
        data.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", data)

    # construction -----------------------------------------------------

    @classmethod
    def from_rep(cls, field: Field | str, rep: np.ndarray) -> "Mat":
        """Inverse of :meth:`rep` (for H: orthogonal projection onto the image)."""
        field = as_field(field)
        rep = np.asarray(rep)
        if field is Field.R:
            return cls(field, np.real(rep))
        if field is Field.C:
            return cls(field, rep)
        if rep.shape[0] % 2 or rep.shape[1] % 2:
            raise DimensionError("quaternion representation must have even shape")
        return cls(field, _from_rep_h(rep))

    @classmethod
    def from_real(cls, field: Field | str, values: Any) -> "Mat":
        """Embed a real array into the given field."""
        field = as_field(field)
        values = np.asarray(values, dtype=np.float64)
        if field is Field.H:
            data = np.zeros(values.shape + (4,))
            data[..., 0] = values
            return cls(field, data)
        return cls(field, values)

    @classmethod
    def eye(cls, field: Field | str, n: int) -> "Mat":
        return cls.from_real(field, np.eye(n))

    @classmethod
    def zeros(cls, field: Field | str, rows: int, cols: int | None = None) -> "Mat":
        return cls.from_real(field, np.zeros((rows, rows if cols is None else cols)))

    @classmethod
    def diag(cls, field: Field | str, values: Sequence[float]) -> "Mat":
        return cls.from_real(field, np.diag(np.asarray(values, dtype=np.float64)))

    # shape ----------------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int) -> Scalar:
        v = self.data[i, j]
        if self.field is Field.C:
            return Scalar(Field.C, (v.real, v.imag))
        return Scalar(self.field, tuple(np.atleast_1d(v)))

    def columns(self, idx: Iterable[int] | slice) -> "Mat":
        return Mat(self.field, self.data[:, idx])

    def rows_of(self, idx: Iterable[int] | slice) -> "Mat":
        return Mat(self.field, self.data[idx])

    # algebra ----------------------------------------------------------------

    def rep(self) -> np.ndarray:
        """Working representation: the array itself for R/C, complex 2r x 2c for H."""
        if self.field is Field.H:
            return _to_rep_h(self.data)
        return self.data

    def _same(self, other: "Mat") -> None:
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.field != self.field:
            raise DimensionError(f"field mismatch: {self.field.value} vs {other.field.value}")

    def __add__(self, other: "Mat") -> "Mat":
        self._same(other)
        if other.shape != self.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")
        return Mat(self.field, self.data + other.data)

    def __sub__(self, other: "Mat") -> "Mat":
        self._same(other)
        if other.shape != self.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")
        return Mat(self.field, self.data - other.data)

    def __neg__(self) -> "Mat":
        return Mat(self.field, -self.data)

    def __mul__(self, s: float) -> "Mat":
        if isinstance(s, Mat):
            raise TypeError("use @ for matrix products")
        if self.field is not Field.C and isinstance(s, complex):
            raise DimensionError("complex scalar on a non-complex matrix")
        return Mat(self.field, self.data * s)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> "Mat":
        return self * (1.0 / s)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._same(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.field is Field.H:
            return Mat.from_rep(Field.H, self.rep() @ other.rep())
        return Mat(self.field, self.data @ other.data)

    @property
    def ct(self) -> "Mat":
        """Conjugate transpose X*."""
        return self.transpose().conj()

    def transpose(self) -> "Mat":
        if self.field is Field.H:
            return Mat(self.field, self.data.transpose(1, 0, 2))
        return Mat(self.field, self.data.T)

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def conj(self) -> "Mat":
        """Entrywise conjugate."""
        if self.field is Field.R:
            return self
        if self.field is Field.C:
            return Mat(self.field, self.data.conj())
        d = self.data.copy()
        d[..., 1:] *= -1
        return Mat(self.field, d)

    def re_trace(self) -> float:
        """Re Tr(X)."""
        if not self.is_square:
            raise DimensionError("trace of a non-square matrix")
        if self.field is Field.H:
            return 0.5 * float(np.trace(self.rep()).real)
        return float(np.trace(self.data).real)

    def norm(self) -> float:
        """Frobenius norm, sqrt(Re Tr(X*X))."""
        return float(np.sqrt(np.sum(np.abs(self.data) ** 2)))

    def vec(self) -> np.ndarray:
        """Real coordinate vector; its dot product is the inner product Re Tr(X*Y)."""
        if self.field is Field.C:
            return np.concatenate([self.data.real.ravel(), self.data.imag.ravel()])
        return self.data.ravel().copy()

    @classmethod
    def from_vec(cls, field: Field | str, rows: int, cols: int, v: np.ndarray) -> "Mat":
        field = as_field(field)
        if field is Field.C:
            k = rows * cols
            return cls(field, (v[:k] + 1j * v[k:]).reshape(rows, cols))
        if field is Field.H:
            return cls(field, np.asarray(v).reshape(rows, cols, 4))
        return cls(field, np.asarray(v).reshape(rows, cols))

    def inv(self, tol: Tolerances = DEFAULT_TOL) -> "Mat":
        if not self.is_square:
            raise DimensionError("inverse of a non-square matrix")
        rep = self.rep()
        if smallest_singular_value(self) <= tol.singular * max(1.0, self.norm()):
            raise SingularityError("matrix is numerically singular")
        return Mat.from_rep(self.field, np.linalg.inv(rep))

    def allclose(self, other: "Mat", atol: float) -> bool:
        return (self - other).norm() <= atol

    def __repr__(self) -> str:
        return f"Mat({self.field.value}, {self.rows}x{self.cols})"


def check_same(x: Mat, y: Mat) -> None:
    x._same(y)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch: {x.shape} vs {y.shape}")


def inner(x: Mat, y: Mat) -> float:
    """Ambient inner product Re Tr(X*Y)."""
    check_same(x, y)
    if x.field is Field.H:
        return 0.5 * float(np.trace(x.rep().conj().T @ y.rep()).real)
    return float(np.trace(x.data.conj().T @ y.data).real)


def singular_values(m: Mat) -> np.ndarray:
    """Singular values, descending; for H each quaternionic value once."""
    s = np.linalg.svd(m.rep(), compute_uv=False)
    return s[::2] if m.field is Field.H else s


def smallest_singular_value(m: Mat) -> float:
    return float(singular_values(m)[-1])


def hermitian_residual(s: Mat) -> float:
    return (s - s.ct).norm()


# --------------------------------------------------------------------------
# eigensolver

def jacobi_eigh(a: np.ndarray, rel_tol: float = 1e-12, max_sweeps: int = 60
                ) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a real symmetric or complex Hermitian array.

    Returns eigenvalues sorted nondecreasing (ties keep the column order of the
    rotated basis) and the matching orthonormal eigenvectors as columns.
    """
    a = np.array(a, copy=True)
    complex_case = np.iscomplexobj(a)
    a = a.astype(np.complex128 if complex_case else np.float64)
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    scale = np.linalg.norm(a)
    target = rel_tol * scale
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= target or scale == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag <= 1e-3 * target / n:
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                zeta = (aqq - app) / (2.0 * mag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phase = apq / mag if complex_case else (1.0 if apq > 0 else -1.0)
                # g = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=a.dtype)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    else:
        raise ConvergenceError("Jacobi eigensolver did not converge")
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


@dataclass(frozen=True, eq=False)
class HermEig:
    eigenvalues: np.ndarray
    vectors: Mat

    def reconstruct(self) -> Mat:
        v = self.vectors
        lam = Mat.diag(v.field, self.eigenvalues)
        return v @ lam @ v.ct


def _require_hermitian(s: Mat, tol: Tolerances) -> None:
    if not s.is_square:
        raise DimensionError("Hermitian input must be square")
    if hermitian_residual(s) > tol.hermitian * max(1.0, s.norm()):
        raise PreconditionError("matrix is not Hermitian")


def _quaternion_eigvecs(s: Mat, w: np.ndarray, vc: np.ndarray) -> tuple[np.ndarray, Mat]:
    # Complex eigenvectors of the representation come in j-related pairs;
    # pick a quaternion-orthonormal set greedily in eigenvalue order.
    n = s.rows
    srep = s.rep()
    chosen: list[np.ndarray] = []   # quaternion columns, component form (n, 4)
    reps: list[np.ndarray] = []     # their 2n x 2 representations
    values: list[float] = []
    for k in range(2 * n):
        if len(chosen) == n:
            break
        w1, w2 = vc[:n, k], vc[n:, k]
        z1, z2 = w1, -w2.conj()
        x = np.block([[z1[:, None], z2[:, None]], [-z2.conj()[:, None], z1.conj()[:, None]]])
        for _ in range(2):
            for r in reps:
                x = x - r @ (r.conj().T @ x)
        nrm = np.linalg.norm(x[:, 0])
        if nrm < 1e-6:
            continue
        x = x / nrm
        reps.append(x)
        values.append(float((x[:, 0].conj() @ srep @ x[:, 0]).real))
        chosen.append(x[:, 0])
    if len(chosen) != n:
        raise ConvergenceError("could not assemble quaternionic eigenbasis")
    rep = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for k, col in enumerate(chosen):
        rep[:, k] = col
        rep[:n, n + k] = -col[n:].conj()
        rep[n:, n + k] = col[:n].conj()
    vecs = Mat.from_rep(Field.H, rep)
    vals = np.array(values)
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs.columns(order)


def herm_eig(s: Mat, tol: Tolerances = DEFAULT_TOL) -> HermEig:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues nondecreasing."""
    _require_hermitian(s, tol)
    w, v = jacobi_eigh(s.rep(), rel_tol=tol.jacobi)
    if s.field is Field.H:
        vals, vecs = _quaternion_eigvecs(s, w, v)
        return HermEig(vals, vecs)
    return HermEig(w, Mat(s.field, v if s.field is Field.C else v.real))


_FUNCS = {"exp": np.exp, "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh}


def mat_func(a: Mat, t: float, kind: str, tol: Tolerances = DEFAULT_TOL) -> Mat:
    """f(A t) for Hermitian A and f in {exp, sinh, cosh, tanh}."""
    if kind not in _FUNCS:
        raise PreconditionError(f"unknown matrix function {kind!r}")
    _require_hermitian(a, tol)
    w, v = jacobi_eigh(a.rep(), rel_tol=tol.jacobi)
    return _apply_spectral(a.field, w, v, _FUNCS[kind](w * t))


def _apply_spectral(field: Field, w: np.ndarray, v: np.ndarray, fw: np.ndarray) -> Mat:
    rep = (v * fw) @ v.conj().T
    return Mat.from_rep(field, rep)


class SpectralCache:
    """One eigendecomposition of a Hermitian matrix, reused for many f(A t)."""

    def __init__(self, a: Mat, tol: Tolerances = DEFAULT_TOL):
        _require_hermitian(a, tol)
        self.field = a.field
        self.w, self.v = jacobi_eigh(a.rep(), rel_tol=tol.jacobi)

    @property
    def spectral_norm(self) -> float:
        return float(np.max(np.abs(self.w))) if self.w.size else 0.0

    def rep_func(self, kind: str, t: float) -> np.ndarray:
        fw = _FUNCS[kind](self.w * t)
        return (self.v * fw) @ self.v.conj().T

    def func(self, kind: str, t: float) -> Mat:
        return Mat.from_rep(self.field, self.rep_func(kind, t))


def cayley(x: Mat, tol: Tolerances = DEFAULT_TOL) -> Mat:
    """(I - X)(I + X)^-1."""
    if not x.is_square:
        raise DimensionError("Cayley transform needs a square matrix")
    eye = Mat.eye(x.field, x.rows)
    plus = eye + x
    if smallest_singular_value(plus) <= tol.singular:
        raise SingularityError("-1 is (numerically) an eigenvalue; Cayley transform undefined")
    return Mat.from_rep(x.field, np.linalg.solve(plus.rep().T, (eye - x).rep().T).T)


def expm(m: Mat) -> Mat:
    """General matrix exponential (used for exponential charts)."""
    return Mat.from_rep(m.field, scipy.linalg.expm(m.rep()))


# --------------------------------------------------------------------------
# groups, orthonormalization, random generation

_FAMILY_FIELD = {"O": Field.R, "U": Field.C, "Sp": Field.H}


@dataclass(frozen=True)
class GroupSpec:
    """One of O(n), U(n), Sp(n)."""

    family: str
    n: int

    def __post_init__(self) -> None:
        if self.family not in _FAMILY_FIELD:
            raise PreconditionError(f"unknown group family {self.family!r}")
        if int(self.n) < 1:
            raise PreconditionError("group size must be positive")

    @classmethod
    def for_field(cls, field: Field | str, n: int) -> "GroupSpec":
        field = as_field(field)
        return cls({Field.R: "O", Field.C: "U", Field.H: "Sp"}[field], n)

    @property
    def field(self) -> Field:
        return _FAMILY_FIELD[self.family]

    @property
    def dim(self) -> int:
        d = self.field.dim
        return sum(d * k - 1 for k in range(1, self.n + 1))

    def membership_residual(self, x: Mat) -> float:
        if x.field != self.field or x.shape != (self.n, self.n):
            raise DimensionError(f"{x!r} is not a {self.n}x{self.n} {self.field.value} matrix")
        return unitarity_residual(x)

    def __str__(self) -> str:
        return f"{self.family}({self.n})"


def unitarity_residual(x: Mat) -> float:
    """||X*X - I||."""
    return (x.ct @ x - Mat.eye(x.field, x.cols)).norm()


def gram_schmidt(z: Mat, tol: float = 1e-10) -> Mat:
    """Orthonormalize the columns of Z (modified Gram-Schmidt, two passes).

    Over H, coefficients multiply the basis vectors from the right.
    """
    rep = z.rep()
    m = z.cols
    h = z.field is Field.H
    scale = max(1.0, z.norm())
    out: list[np.ndarray] = []
    for k in range(m):
        x = rep[:, [k, m + k]] if h else rep[:, [k]]
        for _ in range(2):
            for q in out:
                x = x - q @ (q.conj().T @ x)
        nrm = np.linalg.norm(x[:, 0])
        if nrm <= tol * scale:
            raise PreconditionError("columns are (numerically) linearly dependent")
        out.append(x / nrm)
    if h:
        res = np.zeros_like(rep, dtype=np.complex128)
        for k, q in enumerate(out):
            res[:, k] = q[:, 0]
            res[:, m + k] = q[:, 1]
        return Mat.from_rep(Field.H, res)
    return Mat(z.field, np.hstack(out))


def polar_retract(x: Mat, iterations: int = 3) -> Mat:
    """Unitary polar factor of a nearly unitary X (Newton-Schulz iteration)."""
    rep = x.rep()
    eye = np.eye(rep.shape[1])
    for _ in range(iterations):
        rep = 0.5 * rep @ (3.0 * eye - rep.conj().T @ rep)
    return Mat.from_rep(x.field, rep)


def random_matrix(field: Field | str, rows: int, cols: int, rng: np.random.Generator) -> Mat:
    """Matrix with independent standard Gaussian real components."""
    field = as_field(field)
    if field is Field.R:
        return Mat(field, rng.standard_normal((rows, cols)))
    if field is Field.C:
        g = rng.standard_normal((rows, cols, 2))
        return Mat(field, g[..., 0] + 1j * g[..., 1])
    return Mat(field, rng.standard_normal((rows, cols, 4)))


def random_hermitian(field: Field | str, n: int, rng: np.random.Generator) -> Mat:
    g = random_matrix(field, n, n, rng)
    return (g + g.ct) * 0.5


def random_element(spec: GroupSpec, seed: int) -> Mat:
    """Seeded group element: Gram-Schmidt of a Gaussian matrix."""
    rng = np.random.default_rng(seed)
    return gram_schmidt(random_matrix(spec.field, spec.n, spec.n, rng))


# --------------------------------------------------------------------------
# JSON

def _reject_constant(name: str) -> float:
    raise ValueError(f"non-finite number {name} in matrix JSON")


def mat_to_obj(m: Mat) -> dict:
    if m.field is Field.R:
        data = [[float(v) for v in row] for row in m.data]
    elif m.field is Field.C:
        data = [[[float(v.real), float(v.imag)] for v in row] for row in m.data]
    else:
        data = [[[float(c) for c in v] for v in row] for row in m.data]
    return {"field": m.field.value, "rows": m.rows, "cols": m.cols, "data": data}


def mat_from_obj(obj: dict) -> Mat:
    try:
        field = Field(obj["field"])
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from None
    arr = np.asarray(data, dtype=np.float64)
    want = {Field.R: (rows, cols), Field.C: (rows, cols, 2), Field.H: (rows, cols, 4)}[field]
    if arr.shape != want:
        raise ValueError(f"matrix JSON data has shape {arr.shape}, expected {want}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix JSON contains NaN or Inf")
    if field is Field.C:
        return Mat(field, arr[..., 0] + 1j * arr[..., 1])
    return Mat(field, arr)


def mat_to_json(m: Mat) -> str:
    return json.dumps(mat_to_obj(m))


def mat_from_json(text: str) -> Mat:
    obj = json.loads(text, parse_constant=_reject_constant)
    if not isinstance(obj, dict):
        raise ValueError("matrix JSON must be an object")
    return mat_from_obj(obj)
