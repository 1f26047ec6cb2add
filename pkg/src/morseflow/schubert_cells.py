"""Schubert symbols of subspaces and the cell decomposition of O(n), U(n), Sp(n)
cut out by a Morse height function.

For A = diag(a), 0 < a_1 < ... < a_n, a group element X flows to diag(eps)
where the +1 positions of eps are the Schubert jumps of W, the orthogonal
complement of the -1 eigenspace of X, against the coordinate flag
U_l = span(e_1, ..., e_l).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import IndeterminateError, PreconditionError
from .group_flow import closed_flow, is_morse_diagonal
from .matrix_core import (
    Field,
    GroupSpec,
    Mat,
    as_field,
    gram_schmidt,
    herm_eig,
    random_element,
    singular_values,
    unitarity_residual,
)
from .morse_analysis import SignVector, nearest_critical
from .polynomial import IntPolynomial
from .symmetric_spaces import SubspaceBasis
from .tolerances import DEFAULT_TOL, Tolerances


@dataclass(frozen=True)
class SchubertSymbol:
    """Strictly increasing jumps 1 <= j_1 < ... < j_m <= n."""

    jumps: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        j = tuple(int(v) for v in self.jumps)
        if any(b <= a for a, b in zip(j, j[1:])) or (j and (j[0] < 1 or j[-1] > self.n)):
            raise PreconditionError(f"invalid jump sequence {j} for n={self.n}")
        object.__setattr__(self, "jumps", j)

    @property
    def m(self) -> int:
        return len(self.jumps)

    def to_partition(self) -> tuple[int, ...]:
        """Partition lambda_k = j_{m+1-k} - (m+1-k), largest part first."""
        return tuple(j - k for k, j in reversed(list(enumerate(self.jumps, start=1))))

    @classmethod
    def from_partition(cls, parts: tuple[int, ...], m: int, n: int) -> "SchubertSymbol":
        """Inverse of :meth:`to_partition`; parts fit in an m x (n - m) box."""
        parts = tuple(parts) + (0,) * (m - len(parts))
        if len(parts) != m or any(p < 0 or p > n - m for p in parts) \
                or any(b > a for a, b in zip(parts, parts[1:])):
            raise PreconditionError(f"partition {parts} does not fit in a {m}x{n - m} box")
        return cls(tuple(parts[m - k] + k for k in range(1, m + 1)), n)

    def grassmann_dimension(self, field: Field | str) -> int:
        return as_field(field).dim * sum(j - k for k, j in enumerate(self.jumps, start=1))


@dataclass(frozen=True)
class CellID:
    """A cell of the group: m = dim W and the Schubert symbol of W."""

    m: int
    symbol: SchubertSymbol

    def __post_init__(self) -> None:
        if self.symbol.m != self.m:
            raise PreconditionError("symbol length must equal m")

    def critical_point(self) -> SignVector:
        eps = [-1] * self.symbol.n
        for j in self.symbol.jumps:
            eps[j - 1] = 1
        return SignVector(tuple(eps))

    @classmethod
    def of_critical_point(cls, eps: SignVector) -> "CellID":
        jumps = tuple(k for k, e in enumerate(eps.eps, start=1) if e == 1)
        return cls(len(jumps), SchubertSymbol(jumps, eps.n))

    def to_obj(self) -> dict:
        return {"m": self.m, "jumps": list(self.symbol.jumps)}

    @classmethod
    def from_obj(cls, obj: dict, n: int) -> "CellID":
        return cls(int(obj["m"]), SchubertSymbol(tuple(obj["jumps"]), n))


def _numerical_rank(m: Mat | None, tol: Tolerances) -> int:
    if m is None:
        return 0
    sv = singular_values(m)
    ambiguous = (sv > tol.rank_zero) & (sv < tol.rank_nonzero)
    if np.any(ambiguous):
        raise IndeterminateError(
            f"singular value {sv[ambiguous][0]:.3e} lies in the rank ambiguity band")
    return int(np.sum(sv >= tol.rank_nonzero))


def schubert_symbol(z: SubspaceBasis, tol: Tolerances = DEFAULT_TOL) -> SchubertSymbol:
    """Jumps of dim(V cap U_l), l = 1..n, from ranks of truncated bases.

    dim(V cap U_l) = m - rank(rows l+1..n of an orthonormal basis of V).
    """
    q = gram_schmidt(z.z)
    n, m = z.n, z.dim
    jumps = []
    prev = 0
    for l in range(1, n + 1):
        tail = q.rows_of(slice(l, n)) if l < n else None
        dim = m - _numerical_rank(tail, tol)
        if dim > prev:
            if dim != prev + 1:
                raise IndeterminateError("intersection dimension jumped by more than one")
            jumps.append(l)
            prev = dim
    return SchubertSymbol(tuple(jumps), n)


def cell_dimension(symbol: SchubertSymbol, n: int, field: Field | str) -> int:
    """Dimension of the Schubert cell in the Grassmannian of m-planes in k^n."""
    if symbol.n != n:
        raise PreconditionError("symbol belongs to a different n")
    return symbol.grassmann_dimension(field)


def group_cell_dimension(cell: CellID, field: Field | str) -> int:
    """Grassmannian part plus sum_{k<=m} (d k - 1).

    Equals the Morse index of the critical point at the top of the cell.
    """
    d = as_field(field).dim
    return cell_dimension(cell.symbol, cell.symbol.n, field) + sum(
        d * k - 1 for k in range(1, cell.m + 1))


def enumerate_cells(n: int) -> list[CellID]:
    out = []
    for m in range(n + 1):
        for jumps in itertools.combinations(range(1, n + 1), m):
            out.append(CellID(m, SchubertSymbol(jumps, n)))
    return out


def cell_polynomial(n: int, field: Field | str) -> IntPolynomial:
    """sum over all cells of t^(cell dimension)."""
    return IntPolynomial.from_exponents(group_cell_dimension(c, field) for c in enumerate_cells(n))


def minus_one_complement(x: Mat, tol: Tolerances = DEFAULT_TOL) -> Mat | None:
    """Orthonormal basis of the complement W of the -1 eigenspace of X.

    Uses the Hermitian matrix (X + I)*(X + I), whose eigenvalues are
    |lambda + 1|^2 for a unitary X.
    """
    eye = Mat.eye(x.field, x.rows)
    s = (x + eye).ct @ (x + eye)
    s = (s + s.ct) * 0.5
    eig = herm_eig(s, tol)
    dist = np.sqrt(np.clip(eig.eigenvalues, 0.0, None))
    band = (dist >= tol.minus_one) & (dist < tol.minus_one_band)
    if np.any(band):
        raise IndeterminateError(
            f"eigenvalue at distance {dist[band][0]:.3e} from -1 is inside the ambiguity band")
    keep = np.nonzero(dist >= tol.minus_one_band)[0]
    if keep.size == 0:
        return None
    return eig.vectors.columns(keep)


def classify(x: Mat, a: Mat, tol: Tolerances = DEFAULT_TOL) -> CellID:
    """Cell of X for the Morse height function f_A."""
    if not x.is_square or unitarity_residual(x) > tol.membership:
        raise PreconditionError("X must be a group element")
    if a.shape != x.shape or a.field != x.field or not is_morse_diagonal(a):
        raise PreconditionError("A must be diag(a) with 0 < a_1 < ... < a_n")
    w = minus_one_complement(x, tol)
    if w is None:
        return CellID(0, SchubertSymbol((), x.rows))
    sym = schubert_symbol(SubspaceBasis(w), tol)
    return CellID(sym.m, sym)


@dataclass(frozen=True)
class FlowLimit:
    eps: SignVector | None
    distance: float


def flow_limit(a: Mat, x: Mat, t: float = 60.0, tol: Tolerances = DEFAULT_TOL) -> FlowLimit:
    """Critical point reached by the flow of f_A from X at time t (None if not close)."""
    xt = closed_flow(a, x, t, tol)
    eps = nearest_critical(xt, 1e-6)
    if eps is None:
        return FlowLimit(None, float("inf"))
    return FlowLimit(eps, (xt - eps.matrix(x.field)).norm())


@dataclass(frozen=True)
class SharedDecompositionReport:
    samples: int
    matches: int
    mismatches: int
    unresolved: int

    @property
    def passed(self) -> bool:
        return self.mismatches == 0 and self.unresolved == 0

    def to_obj(self) -> dict:
        return {"samples": self.samples, "matches": self.matches,
                "mismatches": self.mismatches, "unresolved": self.unresolved,
                "passed": self.passed}


def shared_decomposition_check(a1: Mat, a2: Mat, samples: int, seed: int,
                               group: GroupSpec | None = None, t: float = 60.0,
                               tol: Tolerances = DEFAULT_TOL) -> SharedDecompositionReport:
    """Compare the flow limits under f_A1 and f_A2 from common random starts."""
    for a in (a1, a2):
        if not is_morse_diagonal(a, ordered=False):
            raise PreconditionError("A1, A2 must have distinct positive diagonal entries")
    if a1.shape != a2.shape or a1.field != a2.field:
        raise PreconditionError("A1 and A2 must have the same shape and field")
    group = group or GroupSpec.for_field(a1.field, a1.rows)
    if group.field != a1.field or group.n != a1.rows:
        raise PreconditionError("group does not match A")
    rng = np.random.default_rng(seed)
    matches = mismatches = unresolved = 0
    for _ in range(samples):
        x = random_element(group, int(rng.integers(2**62)))
        l1, l2 = flow_limit(a1, x, t, tol), flow_limit(a2, x, t, tol)
        if l1.eps is None or l2.eps is None:
            unresolved += 1
        elif l1.eps == l2.eps:
            matches += 1
        else:
            mismatches += 1
    return SharedDecompositionReport(samples, matches, mismatches, unresolved)
