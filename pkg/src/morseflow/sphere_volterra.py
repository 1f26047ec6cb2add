"""The cubic flow on the sphere of traceless unit Hermitian matrices.

On S = {X = X*, Tr X = 0, Tr X^2 = 1} the gradient of f(X) = Tr(X^3)/3 is

    X' = X^2 - Tr(X^3) X - I/n.

X' commutes with X, so eigenvectors are frozen and only the spectrum moves.
The normalized spectral gaps a_i = (l_{i+1} - l_i)/(l_n - l_1) then obey a
Volterra-type chain in the time tau with d tau = (l_n - l_1) dt, and the partial
sums b_i = a_1 + ... + a_i solve db/dtau = b(b - 1) explicitly.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .matrix_core import (
    Field,
    Mat,
    as_field,
    gram_schmidt,
    herm_eig,
    hermitian_residual,
    random_hermitian,
    restore_structure,
)
from .symmetric_spaces import SubspaceBasis
from .tolerances import DEFAULT_TOL, Tolerances


def sphere_dimension(n: int, field: Field | str) -> int:
    """Dimension of the sphere of traceless unit Hermitian n x n matrices."""
    return n - 2 + as_field(field).dim * n * (n - 1) // 2


def _qtrace(field: Field, rep: np.ndarray) -> float:
    """Re Tr of the matrix whose working representation is ``rep``."""
    tr = float(np.real(np.trace(rep)))
    return 0.5 * tr if field is Field.H else tr


@dataclass(frozen=True)
class SpherePoint:
    x: Mat

    def __post_init__(self) -> None:
        validate_sphere_point(self.x, DEFAULT_TOL.sphere)

    @property
    def n(self) -> int:
        return self.x.rows

    @property
    def field(self) -> Field:
        return self.x.field


def validate_sphere_point(x: Mat, tol: float) -> None:
    if not x.is_square:
        raise PreconditionError("sphere points are square")
    if hermitian_residual(x) > tol:
        raise PreconditionError("sphere points are Hermitian")
    tr, tr2 = x.re_trace(), (x @ x).re_trace()
    if abs(tr) > tol or abs(tr2 - 1.0) > tol:
        raise PreconditionError(f"not on the sphere: Tr X = {tr:.3e}, Tr X^2 = {tr2:.12g}")


def project_to_sphere(x: Mat) -> Mat:
    """Remove the trace and rescale to unit Frobenius norm."""
    n = x.rows
    h = (x + x.ct) * 0.5
    h = h - Mat.eye(x.field, n) * (h.re_trace() / n)
    nrm = h.norm()
    if nrm == 0:
        raise PreconditionError("a multiple of the identity has no projection to the sphere")
    return h / nrm


def random_sphere_point(n: int, field: Field | str, seed: int) -> SpherePoint:
    rng = np.random.default_rng(seed)
    return SpherePoint(project_to_sphere(random_hermitian(field, n, rng)))


def f_cubic(p: SpherePoint) -> float:
    """Tr(X^3)/3."""
    x = p.x
    return (x @ x @ x).re_trace() / 3.0


def sphere_grad_rhs(p: SpherePoint) -> Mat:
    """X^2 - Tr(X^3) X - I/n."""
    x = p.x
    x2 = x @ x
    return x2 - x * (x2 @ x).re_trace() - Mat.eye(x.field, x.rows) * (1.0 / x.rows)


def eigenvalue_rhs(lam: np.ndarray) -> np.ndarray:
    """l_i' = l_i^2 - (sum l^3) l_i - 1/n."""
    lam = np.asarray(lam, dtype=float)
    return lam**2 - np.sum(lam**3) * lam - 1.0 / lam.size


def critical_values(n: int, m: int) -> tuple[float, float]:
    """The two eigenvalues (on V, on V-perp) of the critical point of an m-plane V."""
    if not 1 <= m <= n - 1:
        raise PreconditionError("need 1 <= m <= n - 1")
    return -math.sqrt((n - m) / (n * m)), math.sqrt(m / (n * (n - m)))


def critical_matrix(z: SubspaceBasis) -> SpherePoint:
    """-alpha on V = span(Z), +beta on its orthogonal complement."""
    n, m = z.n, z.dim
    lo, hi = critical_values(n, m)
    q = gram_schmidt(z.z)
    p = q @ q.ct
    eye = Mat.eye(z.field, n)
    return SpherePoint(p * lo + (eye - p) * hi)


# --------------------------------------------------------------------------
# eigenflags and barycentric coordinates

@dataclass(frozen=True)
class EigenflagState:
    """Eigenvalues (nondecreasing), an eigenbasis, and the cluster structure.

    ``dims`` lists dim U_1 < dim U_2 < ... = n, where U_k is the sum of the
    eigenspaces of the k lowest distinct eigenvalues.
    """

    eigenvalues: np.ndarray
    basis: Mat
    dims: tuple[int, ...]

    @property
    def complete(self) -> bool:
        return len(self.dims) == self.basis.rows

    def subspace(self, k: int) -> SubspaceBasis:
        """U_k for k = 1..len(dims)."""
        return SubspaceBasis(self.basis.columns(slice(0, self.dims[k - 1])))


def eigenflag(x: Mat, tol: float = DEFAULT_TOL.cluster_gap,
              tolerances: Tolerances = DEFAULT_TOL) -> EigenflagState:
    """Cluster eigenvalues whose gap is <= tol and build the nested flag."""
    eig = herm_eig(x, tolerances)
    w = eig.eigenvalues
    dims = [i + 1 for i in range(len(w) - 1) if w[i + 1] - w[i] > tol] + [len(w)]
    return EigenflagState(w, eig.vectors, tuple(dims))


@dataclass(frozen=True)
class BarycentricCoords:
    a: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 1 or np.any(a < -1e-12) or abs(a.sum() - 1.0) > 1e-9:
            raise PreconditionError("barycentric coordinates must be nonnegative and sum to 1")
        object.__setattr__(self, "a", a)


def gaps_from_eigenvalues(lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    return np.diff(lam) / (lam[-1] - lam[0])


def barycentric(p: SpherePoint, tol: Tolerances = DEFAULT_TOL) -> BarycentricCoords:
    """a_i = (l_{i+1} - l_i)/(l_n - l_1)."""
    lam = herm_eig(p.x, tol).eigenvalues
    if lam[-1] - lam[0] <= 0:
        raise PreconditionError("spectrum is a single point")
    return BarycentricCoords(gaps_from_eigenvalues(lam))


def eigenvalues_from_gaps(a: Sequence[float]) -> np.ndarray:
    """The unique nondecreasing spectrum with sum 0, sum of squares 1 and these gaps."""
    a = np.asarray(a, dtype=float)
    b = np.concatenate([[0.0], np.cumsum(a)])
    c = b - b.mean()
    return c / np.linalg.norm(c)


def flag_join_coords(p: SpherePoint, tol: Tolerances = DEFAULT_TOL
                     ) -> tuple[EigenflagState, BarycentricCoords]:
    flag = eigenflag(p.x, tol.cluster_gap, tol)
    return flag, BarycentricCoords(gaps_from_eigenvalues(flag.eigenvalues))


def reconstruct(flag: EigenflagState, coords: BarycentricCoords) -> SpherePoint:
    """Inverse of :func:`flag_join_coords`."""
    return SpherePoint(from_spectrum(flag.basis, eigenvalues_from_gaps(coords.a)))


def from_spectrum(v: Mat, lam: np.ndarray) -> Mat:
    """V diag(lam) V* for an orthonormal eigenbasis V."""
    lam_rep = np.concatenate([lam, lam]) if v.field is Field.H else lam
    vr = v.rep()
    x = Mat.from_rep(v.field, (vr * lam_rep) @ vr.conj().T)
    return (x + x.ct) * 0.5


def flag_vertices(flag: EigenflagState) -> list[SpherePoint]:
    """critical_matrix(U_k) for each proper flag member U_k."""
    return [critical_matrix(flag.subspace(k)) for k in range(1, len(flag.dims))]


# --------------------------------------------------------------------------
# integration

@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    points: tuple[Mat, ...]
    eigenvalues: np.ndarray

    @property
    def f(self) -> np.ndarray:
        return np.sum(self.eigenvalues**3, axis=1) / 3.0

    @property
    def gaps(self) -> np.ndarray:
        return np.array([gaps_from_eigenvalues(l) for l in self.eigenvalues])

    @property
    def min_gap(self) -> np.ndarray:
        return np.min(np.diff(self.eigenvalues, axis=1), axis=1)

    def degraded(self, tol: float = DEFAULT_TOL.cluster_gap) -> bool:
        """True when two eigenvalues came within ``tol`` somewhere along the way."""
        return bool(np.any(self.min_gap <= tol))

    def to_csv(self) -> str:
        n = self.eigenvalues.shape[1]
        tau = time_reparam(self)
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t", "tau"] + [f"lambda_{i}" for i in range(1, n + 1)]
                   + [f"a_{i}" for i in range(1, n)] + ["f"])
        for row in zip(self.times, tau, self.eigenvalues, self.gaps, self.f):
            t, ta, lam, a, f = row
            w.writerow([_g17(t), _g17(ta)] + [_g17(v) for v in lam]
                       + [_g17(v) for v in a] + [_g17(f)])
        return out.getvalue()


def _g17(v: float) -> str:
    return format(float(v), ".17g")


def _rk4_sphere_step(field: Field, x: np.ndarray, h: float) -> np.ndarray:
    n = x.shape[0] // (2 if field is Field.H else 1)
    eye = np.eye(x.shape[0])

    def rhs(y: np.ndarray) -> np.ndarray:
        y2 = y @ y
        return y2 - _qtrace(field, y2 @ y) * y - eye / n

    k1 = rhs(x)
    k2 = rhs(x + 0.5 * h * k1)
    k3 = rhs(x + 0.5 * h * k2)
    k4 = rhs(x + h * k3)
    y = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    y = restore_structure(field, 0.5 * (y + y.conj().T))
    y = y - eye * (_qtrace(field, y) / n)
    return y / math.sqrt(_qtrace(field, y @ y))


def integrate_sphere_flow(p0: SpherePoint, t: float, steps: int,
                          record_every: int = 1) -> Trajectory:
    """RK4 with projection back to Tr X = 0, Tr X^2 = 1 after every step."""
    if steps < 1 or record_every < 1:
        raise PreconditionError("steps and record_every must be >= 1")
    field = p0.field
    h = t / steps
    x = p0.x.rep()
    times, points = [0.0], [p0.x]
    for s in range(1, steps + 1):
        x = _rk4_sphere_step(field, x, h)
        if s % record_every == 0 or s == steps:
            times.append(s * h)
            points.append(Mat.from_rep(field, x))
    # eigenvalues only, so LAPACK on the working representation is enough here
    lam = np.array([_spectrum(field, p.rep()) for p in points])
    return Trajectory(np.array(times), tuple(points), lam)


def _spectrum(field: Field, rep: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(0.5 * (rep + rep.conj().T))
    # quaternionic eigenvalues appear twice in the complex representation
    return w[::2] if field is Field.H else w


def integrate_eigenvalues(lam0: np.ndarray, t: float, steps: int) -> np.ndarray:
    """RK4 for the spectral ODE, returning the final spectrum."""
    lam = np.asarray(lam0, dtype=float).copy()
    h = t / steps
    for _ in range(steps):
        k1 = eigenvalue_rhs(lam)
        k2 = eigenvalue_rhs(lam + 0.5 * h * k1)
        k3 = eigenvalue_rhs(lam + 0.5 * h * k2)
        k4 = eigenvalue_rhs(lam + h * k3)
        lam = lam + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return lam


def time_reparam(traj: Trajectory) -> np.ndarray:
    """tau(t) = integral of (l_n - l_1) dt, trapezoid rule on the recorded samples."""
    spread = traj.eigenvalues[:, -1] - traj.eigenvalues[:, 0]
    dt = np.diff(traj.times)
    return np.concatenate([[0.0], np.cumsum(0.5 * dt * (spread[1:] + spread[:-1]))])


# --------------------------------------------------------------------------
# the Volterra chain

def volterra_rhs(a: BarycentricCoords | Sequence[float]) -> np.ndarray:
    """a_i' = a_i (sum_{k<i} a_k - sum_{l>i} a_l)."""
    a = np.asarray(a.a if isinstance(a, BarycentricCoords) else a, dtype=float)
    before = np.concatenate([[0.0], np.cumsum(a)[:-1]])
    after = np.sum(a) - np.cumsum(a)
    return a * (before - after)


def closed_form_b(b0: Sequence[float], tau: float) -> np.ndarray:
    """b_i(tau) = 1/(1 - c_i e^tau), c_i = 1 - 1/b_i(0); b = 0 and b = 1 stay put."""
    b0 = np.asarray(b0, dtype=float)
    slack = 1e-12
    if np.any(b0 < -slack) or np.any(b0 > 1 + slack) or np.any(np.diff(b0) < -slack):
        raise PreconditionError("b(0) must be nondecreasing in [0, 1]")
    b0 = np.clip(b0, 0.0, 1.0)
    out = b0.copy()
    inner = (b0 > 0) & (b0 < 1)
    c = 1.0 - 1.0 / b0[inner]
    out[inner] = 1.0 / (1.0 - c * math.exp(tau))
    return out


def gaps_from_b(b: np.ndarray) -> np.ndarray:
    return np.diff(np.concatenate([[0.0], b]))


def cross_ratio(lam: Sequence[float], i: int, j: int, k: int, l: int) -> float:
    """(l_i - l_k)(l_j - l_l) / ((l_j - l_k)(l_i - l_l)), 0-based indices."""
    x = np.asarray(lam, dtype=float)
    return float((x[i] - x[k]) * (x[j] - x[l]) / ((x[j] - x[k]) * (x[i] - x[l])))


def critical_match(lam: np.ndarray, tol: float = 1e-6) -> int | None:
    """The m for which the spectrum equals the critical spectrum of an m-plane."""
    lam = np.sort(np.asarray(lam, dtype=float))
    n = lam.size
    for m in range(1, n):
        lo, hi = critical_values(n, m)
        target = np.array([lo] * m + [hi] * (n - m))
        if np.max(np.abs(lam - target)) < tol:
            return m
    return None
