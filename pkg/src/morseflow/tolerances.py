"""Named numerical tolerances.

Every routine that makes a numerical decision takes a ``tol`` argument holding
a :class:`Tolerances` instance; the defaults below are used otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Mapping


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10          # S = S* check before eigensolve
    jacobi: float = 1e-12             # off-diagonal stop, relative to ||S||
    singular: float = 1e-10           # smallest singular value of a resolvent
    membership: float = 1e-8          # group / space membership (inputs)
    post_flow: float = 1e-7           # membership after flowing
    nondegenerate: float = 1e-8       # sigma_min threshold for polar
    polar_residual: float = 1e-10     # gradient norm at which polar stops
    critical: float = 1e-8            # gradient norm of a critical point
    hessian_step: float = 1e-4        # finite-difference step
    hessian_zero: float = 1e-6        # zero eigenvalue threshold, times ||A||
    minus_one: float = 1e-7           # |lambda + 1| below this: eigenvalue -1
    minus_one_band: float = 1e-4      # upper end of the ambiguity band
    rank_zero: float = 1e-10          # singular value treated as zero
    rank_nonzero: float = 1e-6        # singular value treated as nonzero
    cluster_gap: float = 1e-7         # eigenvalue clustering for eigenflags
    sphere: float = 1e-10             # Tr X = 0, Tr X^2 = 1 check

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def with_overrides(self, overrides: Mapping[str, float]) -> "Tolerances":
        unknown = sorted(set(overrides) - set(self.names()))
        if unknown:
            raise KeyError(f"unknown tolerance name(s): {', '.join(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOL = Tolerances()
