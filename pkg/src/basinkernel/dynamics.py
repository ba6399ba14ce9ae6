"""Iteration of R_a(z) = a z^(2^(n+2)) - 2a z^(2^(n+1)) and basin membership.

Every numeric step of the map goes through the same sequence of real
float64 operations, whether it runs on a Python scalar or on a numpy
array.  The batch classifiers therefore reproduce the scalar verdicts
bit for bit, and raster output does not depend on how rows are chunked.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .poly import APoly, BiPolyZ

MAX_FAMILY_INDEX = 3


class Status(enum.IntEnum):
    NON_MEMBER = 0
    MEMBER = 1
    INDETERMINATE = 2


@dataclass(frozen=True)
class FamilyMember:
    """The map R_a for family index ``n`` and parameter ``a``."""

    n: int
    a: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise TypeError("n must be an integer")
        object.__setattr__(self, "n", int(self.n))
        if not 0 <= self.n <= MAX_FAMILY_INDEX:
            raise ValueError(f"n must be in 0..{MAX_FAMILY_INDEX}, got {self.n}")
        if self.a == 0:
            raise ValueError("a must be nonzero")
        if not (math.isfinite(self.a.real) and math.isfinite(self.a.imag)):
            raise ValueError("a must be finite")

    @property
    def alpha(self) -> int:
        return 2**self.n

    @property
    def degree(self) -> int:
        return 2 ** (self.n + 2)

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        x, y = _step(self.n, self.a.real, self.a.imag, z.real, z.imag)
        return complex(x, y)

    def derivative(self, z: complex) -> complex:
        d = self.degree
        return self.a * d * z ** (d // 2 - 1) * (z ** (d // 2) - 1)


@dataclass(frozen=True)
class IterConfig:
    max_iters: int = 512
    escape_radius: float = 1e6
    convergence_radius: float = 1e-8
    series_tail_eps: float = 1e-12

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if not 0 < self.convergence_radius < 1 < self.escape_radius:
            raise ValueError("need 0 < convergence_radius < 1 < escape_radius")
        if self.series_tail_eps <= 0:
            raise ValueError("series_tail_eps must be positive")


@dataclass(frozen=True)
class BasinVerdict:
    status: Status
    iterations_used: int
    final_magnitude: float
    partial_series_sum: float = 0.0


# -- the map itself ----------------------------------------------------------


def family_poly(fm: FamilyMember | int) -> BiPolyZ:
    """Symbolic R_a: ``a z^(2^(n+2)) - 2a z^(2^(n+1))`` over Z[a][z]."""
    n = fm.n if isinstance(fm, FamilyMember) else int(fm)
    return BiPolyZ({2 ** (n + 2): APoly({1: 1}), 2 ** (n + 1): APoly({1: -2})})


def _step(n, ar, ai, x, y):
    # s = z^(2^(n+1)) by repeated squaring, then a * s * (s - 2).
    # Works unchanged on floats and on numpy arrays.
    for _ in range(n + 1):
        x, y = x * x - y * y, x * y + y * x
    tr = x - 2.0
    px, py = x * tr - y * y, x * y + y * tr
    return ar * px - ai * py, ar * py + ai * px


def iterate_orbit(fm: FamilyMember, z0: complex, k: int, cfg: IterConfig | None = None) -> list[complex]:
    """Return ``[z0, R(z0), ..., R^k(z0)]`` by repeated numeric evaluation.

    Once the orbit overflows, the remaining entries are ``inf``.
    """
    cfg = cfg or IterConfig()
    if k > cfg.max_iters:
        raise ValueError(f"k={k} exceeds max_iters={cfg.max_iters}")
    if k < 0:
        raise ValueError("k must be non-negative")
    ar, ai = fm.a.real, fm.a.imag
    x, y = complex(z0).real, complex(z0).imag
    out = [complex(x, y)]
    blown = False
    for _ in range(k):
        if not blown:
            x, y = _step(fm.n, ar, ai, x, y)
            if not (math.isfinite(x) and math.isfinite(y)):
                blown = True
        out.append(complex(math.inf, 0.0) if blown else complex(x, y))
    return out


# -- derived constants -------------------------------------------------------


@lru_cache(maxsize=None)
def attracting_fixed_points(fm: FamilyMember) -> tuple[complex, ...]:
    """Nonzero fixed points with |R'| < 1, polished by Newton's method.

    Seeds come from the companion matrix of R(z)/z - 1, i.e.
    ``a z^(D-1) - 2a z^(D/2-1) - 1`` with D the degree.
    """
    d = fm.degree
    coeffs = np.zeros(d, dtype=complex)
    coeffs[0] = fm.a
    coeffs[d // 2] = -2 * fm.a
    coeffs[-1] = -1
    found = []
    for z in np.roots(coeffs):
        z = complex(z)
        for _ in range(50):
            step = (fm(z) - z) / (fm.derivative(z) - 1)
            z -= step
            if abs(step) <= 1e-15 * max(1.0, abs(z)):
                break
        if abs(z) > 1e-6 and abs(fm.derivative(z)) < 1:
            if all(abs(z - w) > 1e-9 for w in found):
                found.append(z)
    return tuple(sorted(found, key=lambda w: (w.real, w.imag)))


@lru_cache(maxsize=None)
def trap_radius(fm: FamilyMember) -> float:
    """Largest r with |R(z)| <= |z|/2 guaranteed for all |z| <= r.

    Uses |R(z)| <= |a| (r^D + 2 r^(D/2)).  Inside this disk the orbit
    decays at least geometrically with ratio 1/2.
    """
    d = fm.degree
    absa = abs(fm.a)

    def ok(r):
        return absa * (r ** (d - 1) + 2 * r ** (d // 2 - 1)) <= 0.5

    lo, hi = 0.0, 1.0
    if ok(hi):
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


# -- scalar membership tests ---------------------------------------------------


def basin_member_limit(fm: FamilyMember, z0: complex, cfg: IterConfig | None = None) -> BasinVerdict:
    """Decide membership from the orbit's limit.

    Member once an iterate enters the convergence disk about 0.  NonMember
    on escape, or on capture by another attracting fixed point.
    """
    cfg = cfg or IterConfig()
    conv2 = cfg.convergence_radius**2
    esc2 = cfg.escape_radius**2
    fixed = attracting_fixed_points(fm)
    ar, ai = fm.a.real, fm.a.imag
    z0 = complex(z0)
    x, y = z0.real, z0.imag
    total = 0.0
    for i in range(cfg.max_iters + 1):
        m2 = x * x + y * y
        if not m2 <= esc2:
            return BasinVerdict(Status.NON_MEMBER, i, math.sqrt(m2) if m2 == m2 else math.inf, total)
        total += math.sqrt(m2)
        if m2 < conv2:
            return BasinVerdict(Status.MEMBER, i, math.sqrt(m2), total)
        for w in fixed:
            dx, dy = x - w.real, y - w.imag
            if dx * dx + dy * dy < conv2:
                return BasinVerdict(Status.NON_MEMBER, i, math.sqrt(m2), total)
        if i < cfg.max_iters:
            x, y = _step(fm.n, ar, ai, x, y)
    return BasinVerdict(Status.INDETERMINATE, cfg.max_iters, math.sqrt(m2), total)


def series_verdict(terms_iter, max_terms: int, eps: float, trap: float, esc2: float):
    """Shared geometric-tail bookkeeping for orbit series.

    ``terms_iter`` yields ``(m2, term)`` pairs: squared orbit magnitude and
    the series term built from it.  Returns ``(status, index, m2, sum)``.
    Member when three consecutive term ratios are below 1/2 and the term is
    below ``eps`` (or the term is exactly 0, after which the orbit is fixed
    at 0).  NonMember on escape, or when the orbit never enters the trap
    disk, so every term stays bounded below and partial sums grow linearly.
    """
    trap2 = trap * trap
    total = 0.0
    prev = None
    run = 0
    trapped = False
    i = 0
    m2 = 0.0
    for i, (m2, t) in enumerate(terms_iter):
        if not m2 <= esc2:
            return Status.NON_MEMBER, i, m2, total
        total += t
        if t == 0.0:
            return Status.MEMBER, i, m2, total
        if prev is not None:
            run = run + 1 if t < 0.5 * prev else 0
        prev = t
        if m2 < trap2:
            trapped = True
        if run >= 3 and t < eps:
            return Status.MEMBER, i, m2, total
        if i >= max_terms:
            break
    return (Status.INDETERMINATE if trapped else Status.NON_MEMBER), i, m2, total


def _orbit_m2(fm: FamilyMember, z0: complex, steps: int):
    ar, ai = fm.a.real, fm.a.imag
    z0 = complex(z0)
    x, y = z0.real, z0.imag
    for i in range(steps + 1):
        yield x, y, x * x + y * y
        if i < steps:
            x, y = _step(fm.n, ar, ai, x, y)


def basin_member_series(fm: FamilyMember, z0: complex, cfg: IterConfig | None = None) -> BasinVerdict:
    """Decide membership from summability of sum_i |R^i(z0)|."""
    cfg = cfg or IterConfig()
    eps = min(cfg.series_tail_eps, cfg.convergence_radius)
    terms = ((m2, math.sqrt(m2)) for _, _, m2 in _orbit_m2(fm, z0, cfg.max_iters))
    status, i, m2, total = series_verdict(terms, cfg.max_iters, eps, trap_radius(fm), cfg.escape_radius**2)
    return BasinVerdict(status, i, math.sqrt(m2) if m2 == m2 else math.inf, total)


# -- batch versions ------------------------------------------------------------


def _as_xy(points):
    pts = np.asarray(points, dtype=complex).ravel()
    return pts.real.copy(), pts.imag.copy()


def limit_verdicts(fm: FamilyMember, points, cfg: IterConfig | None = None):
    """Vectorized ``basin_member_limit``: returns ``(status, iterations)`` arrays."""
    cfg = cfg or IterConfig()
    x, y = _as_xy(points)
    status = np.full(x.shape, Status.INDETERMINATE, dtype=np.int8)
    iters = np.full(x.shape, cfg.max_iters, dtype=np.int32)
    idx = np.arange(x.size)
    conv2 = cfg.convergence_radius**2
    esc2 = cfg.escape_radius**2
    fixed = attracting_fixed_points(fm)
    ar, ai = fm.a.real, fm.a.imag
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(cfg.max_iters + 1):
            if not idx.size:
                break
            m2 = x * x + y * y
            esc = ~(m2 <= esc2)
            mem = ~esc & (m2 < conv2)
            cap = np.zeros_like(esc)
            for w in fixed:
                dx, dy = x - w.real, y - w.imag
                cap |= dx * dx + dy * dy < conv2
            cap &= ~esc & ~mem
            status[idx[esc | cap]] = Status.NON_MEMBER
            status[idx[mem]] = Status.MEMBER
            done = esc | mem | cap
            iters[idx[done]] = i
            keep = ~done
            idx, x, y = idx[keep], x[keep], y[keep]
            if i < cfg.max_iters:
                x, y = _step(fm.n, ar, ai, x, y)
    return status, iters


def batch_series(fm: FamilyMember, points, max_terms: int, eps: float, esc2: float, power: int):
    """Vectorized ``series_verdict`` for terms ``(|z|^2)^(power/2)``.

    ``power`` is 1 for sum |z_i| and 2*alpha for sum |z_i|^(2 alpha).
    Returns ``(status, partial_sums)``.
    """
    x, y = _as_xy(points)
    n_pts = x.size
    status = np.full(n_pts, Status.INDETERMINATE, dtype=np.int8)
    sums = np.zeros(n_pts)
    idx = np.arange(n_pts)
    prev = np.full(n_pts, np.inf)
    run = np.zeros(n_pts, dtype=np.int32)
    trapped = np.zeros(n_pts, dtype=bool)
    trap2 = trap_radius(fm) ** 2
    ar, ai = fm.a.real, fm.a.imag
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(max_terms + 1):
            if not idx.size:
                break
            m2 = x * x + y * y
            t = _term(m2, power)
            esc = ~(m2 <= esc2)
            live = idx[~esc]
            sums[live] += t[~esc]
            if i:
                run = np.where(t < 0.5 * prev, run + 1, 0)
            prev = t
            trapped |= m2 < trap2
            mem = ~esc & ((t == 0.0) | ((run >= 3) & (t < eps)))
            status[idx[esc]] = Status.NON_MEMBER
            status[idx[mem]] = Status.MEMBER
            keep = ~(esc | mem)
            if i >= max_terms:
                status[idx[keep]] = np.where(trapped[keep], Status.INDETERMINATE, Status.NON_MEMBER)
                break
            idx, x, y = idx[keep], x[keep], y[keep]
            prev, run, trapped = prev[keep], run[keep], trapped[keep]
            x, y = _step(fm.n, ar, ai, x, y)
    return status, sums


def series_verdicts(fm: FamilyMember, points, cfg: IterConfig | None = None):
    """Vectorized ``basin_member_series``: returns ``(status, partial_sums)``."""
    cfg = cfg or IterConfig()
    eps = min(cfg.series_tail_eps, cfg.convergence_radius)
    return batch_series(fm, points, cfg.max_iters, eps, cfg.escape_radius**2, 1)


def _term(m2, power):
    if power == 1:
        return np.sqrt(m2)
    t = m2
    p = power // 2
    while p > 1:
        t = t * t
        p //= 2
    return t


# -- preimages -----------------------------------------------------------------


def preimages(fm: FamilyMember, w: complex, negate_branch: bool = False) -> list[complex]:
    """All 2^(n+2) solutions of R_a(zeta) = w, with multiplicity.

    zeta^(2^(n+1)) = u with u = 1 +- sqrt(a^2 + a w)/a (principal root).
    The '+' branch comes first; within a branch the 2^(n+1)-th roots are
    listed by ascending argument in [0, 2 pi).  ``negate_branch`` swaps
    the two branches, which only reorders the result.
    """
    a = fm.a
    m = 2 ** (fm.n + 1)
    r = cmath.sqrt(a * a + a * complex(w)) / a
    if negate_branch:
        r = -r
    out = []
    for u in (1 + r, 1 - r):
        out.extend(_roots_of(u, m))
    return out


def _roots_of(u: complex, m: int) -> list[complex]:
    if u == 0:
        return [0j] * m
    mod = abs(u) ** (1.0 / m)
    theta = cmath.phase(u)
    if theta < 0:
        theta += 2 * math.pi
    return [cmath.rect(mod, (theta + 2 * math.pi * k) / m) for k in range(m)]
