"""Gaussian binomials, Grassmannian Poincare polynomials and the cell-count
identities relating Morse indices on groups and symmetric spaces to Schubert
cells of Grassmannians.

All checks are exact integer identities.  For the real field the polynomials
are Z/2 Betti generating functions.
"""
from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import lru_cache
from typing import Callable

from .errors import PreconditionError
from .matrix_core import Field, as_field
from .morse_analysis import index_generating_polynomial
from .polynomial import IntPolynomial, product

__all__ = [
    "IntPolynomial",
    "gaussian_binomial",
    "poincare_grassmannian",
    "group_shift",
    "DecompositionReport",
    "verify_group_decomposition",
    "SYMMETRIC_SPACES",
    "verify_symmetric_space_decompositions",
    "verify_grassmann_split",
]


@lru_cache(maxsize=None)
def _qbinom(n: int, k: int) -> IntPolynomial:
    if k == 0 or k == n:
        return IntPolynomial.one()
    return _qbinom(n - 1, k) + _qbinom(n - 1, k - 1).shift(n - k)


def gaussian_binomial(n: int, k: int, step: int = 1) -> IntPolynomial:
    """[n choose k]_q with q = t^step (Pascal recursion)."""
    if n < 0 or not 0 <= k <= n:
        raise PreconditionError(f"need 0 <= k <= n, got n={n}, k={k}")
    if step < 1:
        raise PreconditionError("step must be >= 1")
    return _qbinom(n, k).substitute_power(step)


def poincare_grassmannian(n: int, k: int, field: Field | str) -> IntPolynomial:
    """Poincare polynomial of the Grassmannian of k-planes in k^n."""
    return gaussian_binomial(n, k, as_field(field).dim)


def group_shift(k: int, field: Field | str) -> int:
    """Degree shift of the k-th Grassmannian summand for O(n), U(n), Sp(n)."""
    d = as_field(field).dim
    return {1: k * (k - 1) // 2, 2: k * k, 4: k * (2 * k + 1)}[d]


@dataclass(frozen=True)
class DecompositionReport:
    name: str
    lhs: IntPolynomial
    rhs: IntPolynomial
    shifts: tuple[int, ...] = dc_field(default=())

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def diff(self) -> IntPolynomial:
        return self.lhs - self.rhs

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "lhs": self.lhs.to_obj(),
            "rhs": self.rhs.to_obj(),
            "shifts": list(self.shifts),
        }


def _shifted_sum(n: int, shift: Callable[[int], int], step: int) -> IntPolynomial:
    acc = IntPolynomial()
    for k in range(n + 1):
        acc = acc + gaussian_binomial(n, k, step).shift(shift(k))
    return acc


def verify_group_decomposition(n: int, field: Field | str) -> DecompositionReport:
    """Morse count polynomial of O(n)/U(n)/Sp(n) against the shifted Grassmannian sum."""
    if not 1 <= n <= 12:
        raise PreconditionError("n must lie in [1, 12]")
    f = as_field(field)
    rhs = _shifted_sum(n, lambda k: group_shift(k, f), f.dim)
    name = {Field.R: "O", Field.C: "U", Field.H: "Sp"}[f] + f"({n})"
    return DecompositionReport(name, index_generating_polynomial(n, f), rhs,
                               tuple(group_shift(k, f) for k in range(n + 1)))


def _lhs_product(exponents: list[int]) -> IntPolynomial:
    return product([IntPolynomial.one() + IntPolynomial.monomial(e) for e in exponents])


@dataclass(frozen=True)
class SymmetricSpaceIdentity:
    """One line of the symmetric-space decomposition table.

    ``lhs_exponents(n)`` gives the exponents e_k of the Morse count
    polynomial prod (1 + t^e_k); these are the per-coordinate indices found
    by the Hessian census in :func:`morse_analysis.index_census`.
    """

    name: str
    space_kind: str
    grassmann_field: Field
    shift: Callable[[int], int]
    lhs_exponents: Callable[[int], list[int]]


SYMMETRIC_SPACES: tuple[SymmetricSpaceIdentity, ...] = (
    SymmetricSpaceIdentity("U(n)/O(n)", "laggrass", Field.R,
                           lambda k: k * (k + 1) // 2,
                           lambda n: list(range(1, n + 1))),
    SymmetricSpaceIdentity("O(2n)/U(n)", "complex_struct", Field.C,
                           lambda k: k * (k - 1),
                           lambda n: [2 * k for k in range(n)]),
    SymmetricSpaceIdentity("U(2n)/Sp(n)", "quat_struct", Field.H,
                           lambda k: 2 * k * k,
                           lambda n: [4 * k - 3 for k in range(1, n + 1)]),
    SymmetricSpaceIdentity("Sp(n)/U(n)", "sp_mod_u", Field.C,
                           lambda k: k * (k + 1),
                           lambda n: [2 * k for k in range(1, n + 1)]),
)


def symmetric_space_report(ident: SymmetricSpaceIdentity, n: int,
                           shift: Callable[[int], int] | None = None) -> DecompositionReport:
    shift = shift or ident.shift
    rhs = _shifted_sum(n, shift, ident.grassmann_field.dim)
    lhs = _lhs_product(ident.lhs_exponents(n))
    return DecompositionReport(f"{ident.name} n={n}",
                               lhs, rhs, tuple(shift(k) for k in range(n + 1)))


def verify_symmetric_space_decompositions(n: int) -> list[DecompositionReport]:
    """The four symmetric-space identities at size n, with the stated shifts."""
    if not 1 <= n <= 12:
        raise PreconditionError("n must lie in [1, 12]")
    return [symmetric_space_report(ident, n) for ident in SYMMETRIC_SPACES]


def verify_grassmann_split(n: int, n1: int, n2: int, k: int,
                           field: Field | str) -> DecompositionReport:
    """Poincare polynomial of G(n,k) against the split over n = n1 + n2."""
    if n1 < 0 or n2 < 0 or n1 + n2 != n:
        raise PreconditionError("need n = n1 + n2 with n1, n2 >= 0")
    if not 0 <= k <= n:
        raise PreconditionError("need 0 <= k <= n")
    f = as_field(field)
    d = f.dim
    rhs = IntPolynomial()
    for k1 in range(max(0, k - n2), min(k, n1) + 1):
        k2 = k - k1
        term = poincare_grassmannian(n1, k1, f) * poincare_grassmannian(n2, k2, f)
        rhs = rhs + term.shift(d * (n1 - k1) * k2)
    return DecompositionReport(f"G({n},{k};{f.value}) split {n1}+{n2}",
                               poincare_grassmannian(n, k, f), rhs)
