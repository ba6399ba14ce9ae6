"""Infinite-product kernel K_a(z, w) on the basin of 0.

    K_a(z, w) = prod_{i >= 0} (1 + (R^i(z) * conj(R^i(w)))^alpha),  alpha = 2^n

The product index is ``i``; ``n`` is always the family index.  Orbits are
advanced numerically one step per factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    FamilyMember,
    Status,
    _orbit_m2,
    batch_series,
    series_verdict,
    trap_radius,
)


class NotConverged(ArithmeticError):
    """The truncated product did not certify within ``max_factors``."""


@dataclass(frozen=True)
class KernelConfig:
    max_factors: int = 256
    tail_eps: float = 1e-14
    # orbits beyond this radius are treated as divergent
    escape_radius: float = 1e6

    def __post_init__(self):
        if self.max_factors < 1:
            raise ValueError("max_factors must be positive")
        if not 0 < self.tail_eps < 1:
            raise ValueError("tail_eps must be in (0, 1)")


@dataclass(frozen=True)
class KernelValue:
    value: complex
    factors_used: int
    tail_bound: float
    converged: bool


def _pow2(z: complex, n: int) -> complex:
    for _ in range(n):
        z = z * z
    return z


def eval_kernel(fm: FamilyMember, z: complex, w: complex, cfg: KernelConfig | None = None) -> KernelValue:
    """Truncated product with a certified geometric tail.

    Stops once three consecutive factor deviations |factor - 1| have shrunk
    by more than half each and deviation/(1 - ratio) is below
    ``tail_eps * |value|``.  That quantity is reported as ``tail_bound``.
    A deviation of exactly 0 means one orbit sits at the fixed point 0 and
    every later factor is exactly 1.
    """
    cfg = cfg or KernelConfig()
    z, w = complex(z), complex(w)
    value = 1 + 0j
    prev = None
    run = 0
    ratio = 1.0
    tail = math.inf
    esc = cfg.escape_radius
    for i in range(cfg.max_factors):
        if not (abs(z) <= esc and abs(w) <= esc):
            return KernelValue(value, i, math.inf, False)
        t = _pow2(z * w.conjugate(), fm.n)
        value *= 1 + t
        dev = abs(t)
        if dev == 0.0:
            return KernelValue(value, i + 1, 0.0, True)
        if prev is not None:
            ratio = dev / prev
            run = run + 1 if ratio < 0.5 else 0
        prev = dev
        tail = dev / (1 - ratio) if run else math.inf
        if run >= 3 and tail < cfg.tail_eps * abs(value):
            return KernelValue(value, i + 1, tail, True)
        z, w = fm(z), fm(w)
    return KernelValue(value, cfg.max_factors, tail, False)


def kernel_factor(fm: FamilyMember, z: complex, w: complex) -> complex:
    """The one-step kernel 1 + (z conj(w))^alpha."""
    return 1 + _pow2(complex(z) * complex(w).conjugate(), fm.n)


def check_functional_eq(fm: FamilyMember, z: complex, w: complex, cfg: KernelConfig | None = None) -> float:
    """Relative residual of K(z,w) = k(z,w) K(R z, R w)."""
    lhs = eval_kernel(fm, z, w, cfg)
    rhs = eval_kernel(fm, fm(complex(z)), fm(complex(w)), cfg)
    if not (lhs.converged and rhs.converged):
        raise NotConverged(f"kernel product did not converge at z={z}, w={w}")
    return abs(lhs.value - kernel_factor(fm, z, w) * rhs.value) / abs(lhs.value)


@dataclass(frozen=True)
class OmegaResult:
    verdict: str  # "Converges" | "Diverges" | "Indeterminate"
    partial_sum: float
    terms_used: int


_OMEGA_NAMES = {
    Status.MEMBER: "Converges",
    Status.NON_MEMBER: "Diverges",
    Status.INDETERMINATE: "Indeterminate",
}


def omega_series(fm: FamilyMember, z: complex, cfg: KernelConfig | None = None) -> OmegaResult:
    """Sum of t(R^i z, R^i z) = |R^i(z)|^(2 alpha), with the same tail
    certificate as ``basin_member_series``."""
    cfg = cfg or KernelConfig()
    terms = ((m2, _pow2(m2, fm.n)) for _, _, m2 in _orbit_m2(fm, z, cfg.max_factors))
    status, i, _, total = series_verdict(
        terms, cfg.max_factors, cfg.tail_eps, trap_radius(fm), cfg.escape_radius**2
    )
    return OmegaResult(_OMEGA_NAMES[status], total, i + 1)


def omega_verdicts(fm: FamilyMember, points, cfg: KernelConfig | None = None):
    """Vectorized ``omega_series``; statuses use the ``Status`` codes
    (MEMBER = Converges, NON_MEMBER = Diverges)."""
    cfg = cfg or KernelConfig()
    return batch_series(fm, points, cfg.max_factors, cfg.tail_eps, cfg.escape_radius**2, 2 * fm.alpha)


def gram_matrix(fm: FamilyMember, points, cfg: KernelConfig | None = None) -> np.ndarray:
    pts = [complex(p) for p in points]
    k = len(pts)
    out = np.empty((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            kv = eval_kernel(fm, pts[i], pts[j], cfg)
            if not kv.converged:
                raise NotConverged(f"K({pts[i]}, {pts[j]}) did not converge")
            out[i, j] = kv.value
    return out
