"""Exact polynomials in one variable with Python-int coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True, eq=True)
class IntPolynomial:
    """sum coeffs[i] t^i, with no trailing zeros (the zero polynomial is ())."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def of(cls, *coeffs: int) -> "IntPolynomial":
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        if degree < 0:
            raise ValueError("negative degree")
        return cls((0,) * degree + (coeff,))

    @classmethod
    def one(cls) -> "IntPolynomial":
        return cls((1,))

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "IntPolynomial":
        """sum of t^e over the given exponents (with multiplicity)."""
        counts: dict[int, int] = {}
        for e in exponents:
            counts[e] = counts.get(e, 0) + 1
        if not counts:
            return cls()
        out = [0] * (max(counts) + 1)
        for e, c in counts.items():
            out[e] = c
        return cls(tuple(out))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self.coeff(i) - other.coeff(i) for i in range(n)))

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by t^k."""
        if k < 0:
            raise ValueError("negative shift")
        if not self.coeffs:
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def substitute_power(self, step: int) -> "IntPolynomial":
        """p(t^step)."""
        if step < 1:
            raise ValueError("step must be >= 1")
        if not self.coeffs:
            return self
        out = [0] * (step * self.degree + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return IntPolynomial(tuple(out))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def to_obj(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_obj(cls, obj: dict) -> "IntPolynomial":
        return cls(tuple(int(c) for c in obj["coeffs"]))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            mono = "t" if i == 1 else f"t^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)


def product(factors: Sequence[IntPolynomial]) -> IntPolynomial:
    acc = IntPolynomial.one()
    for f in factors:
        acc = acc * f
    return acc
