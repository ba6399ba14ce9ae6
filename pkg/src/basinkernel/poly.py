"""Exact sparse polynomials in z with integer-polynomial coefficients in a.

A ``BiPolyZ`` maps z-exponents to ``APoly`` coefficients, and an ``APoly``
maps a-exponents to Python integers.  Both are kept in canonical sparse
form: zero coefficients are never stored, so structural equality is
mathematical equality.

``CPoly`` is the numeric shadow of a ``BiPolyZ`` once a concrete value of
``a`` has been substituted.

Values are immutable after construction.  The internal dicts are never
mutated once an object has been handed out.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import flint

MAX_EXP = 2**63 - 1

# Rough cap on the number of (z, a) coefficient slots a single operation may
# produce.  Each slot can hold a multi-thousand-bit integer, so this keeps a
# single result within a few GB.
MAX_TERMS = 10_000_000


class ExponentOverflow(OverflowError):
    """A z-exponent would leave the signed 64-bit range."""


class ExpansionTooLarge(MemoryError):
    """The estimated size of an exact result exceeds ``MAX_TERMS``."""


def _check_exp(e: int) -> int:
    if e > MAX_EXP:
        raise ExponentOverflow(f"z-exponent {e} exceeds 2**63 - 1")
    return e


class APoly:
    """Integer polynomial in ``a``, stored sparsely as ``{exponent: coeff}``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for k, v in items:
            if k < 0:
                raise ValueError("a-exponents must be non-negative")
            v = int(v)
            if v:
                c[int(k)] = c.get(int(k), 0) + v
        self._c = {k: v for k, v in c.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "APoly":
        # caller guarantees canonical form and gives up ownership of c
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff: int, exp: int = 0) -> "APoly":
        return cls._raw({exp: coeff} if coeff else {})

    @property
    def coeffs(self) -> Mapping[int, int]:
        return MappingProxyType(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def constant_term(self) -> int:
        return self._c.get(0, 0)

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, APoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other: "APoly") -> "APoly":
        out = dict(self._c)
        for k, v in other._c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return APoly._raw(out)

    def __neg__(self) -> "APoly":
        return APoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "APoly") -> "APoly":
        return self + (-other)

    def __mul__(self, other: "APoly") -> "APoly":
        out: dict[int, int] = defaultdict(int)
        for i, x in self._c.items():
            for j, y in other._c.items():
                out[i + j] += x * y
        return APoly._raw({k: v for k, v in out.items() if v})

    def shifted(self, k: int, scale: int = 1) -> "APoly":
        """Return ``scale * a**k * self``."""
        if not scale:
            return APoly()
        return APoly._raw({e + k: v * scale for e, v in self._c.items()})

    def __call__(self, a) -> complex:
        """Evaluate at ``a``; exact up to one final rounding per component."""
        return _eval_exact(self._c, complex(a))

    def diff(self, a1, a0) -> complex:
        """``self(a1) - self(a0)`` with a single rounding."""
        if not self._c:
            return 0j
        r1, i1, s1 = _gauss_horner({e: (v, 0) for e, v in self._c.items()}, complex(a1))
        r0, i0, s0 = _gauss_horner({e: (v, 0) for e, v in self._c.items()}, complex(a0))
        s = max(s1, s0)
        return _round((r1 << (s - s1)) - (r0 << (s - s0)), (i1 << (s - s1)) - (i0 << (s - s0)), s)

    def __repr__(self) -> str:
        if not self._c:
            return "APoly(0)"
        parts = [f"{v}*a^{k}" if k else str(v) for k, v in sorted(self._c.items())]
        return "APoly(" + " + ".join(parts) + ")"

    def to_dense(self) -> list[int]:
        if not self._c:
            return []
        out = [0] * (max(self._c) + 1)
        for k, v in self._c.items():
            out[k] = v
        return out


def _horner_sparse(c: Mapping[int, object], x: complex) -> complex:
    exps = sorted(c, reverse=True)
    acc = complex(c[exps[0]])
    prev = exps[0]
    for e in exps[1:]:
        acc = acc * x ** (prev - e) + complex(c[e])
        prev = e
    return acc * x**prev if prev else acc


def _dyadic(x: float) -> tuple[int, int]:
    num, den = x.as_integer_ratio()
    return num, den.bit_length() - 1


def _dyadic_point(x: complex) -> tuple[int, int, int]:
    """``x = (X + iY) / 2**k`` exactly, as ``(X, Y, k)``."""
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise ValueError("evaluation point must be finite")
    (xr, kr), (xi, ki) = _dyadic(x.real), _dyadic(x.imag)
    k = max(kr, ki)
    return xr << (k - kr), xi << (k - ki), k


def _gauss_horner(c: Mapping[int, tuple[int, int]], x: complex) -> tuple[int, int, int]:
    # sum_e c_e x^e with Gaussian-integer c_e, as (re, im, shift) meaning
    # (re + i im) / 2**shift, computed without any rounding
    xr, xi, k = _dyadic_point(x)
    exps = sorted(c, reverse=True)
    d = exps[0]
    re, im = c[d]
    prev = d
    for e in exps[1:] + ([0] if exps[-1] else []):
        gap = prev - e
        if gap == 1:
            re, im = re * xr - im * xi, re * xi + im * xr
        else:
            pr, pi = _gauss_pow(xr, xi, gap)
            re, im = re * pr - im * pi, re * pi + im * pr
        if e in c:
            cr, ci = c[e]
            re += cr << (k * (d - e))
            im += ci << (k * (d - e))
        prev = e
    return re, im, k * d


def _gauss_pow(xr: int, xi: int, m: int) -> tuple[int, int]:
    rr, ri = 1, 0
    while m:
        if m & 1:
            rr, ri = rr * xr - ri * xi, rr * xi + ri * xr
        xr, xi = xr * xr - xi * xi, 2 * xr * xi
        m >>= 1
    return rr, ri


def _round(re: int, im: int, shift: int) -> complex:
    # int / int is correctly rounded in Python
    den = 1 << shift
    return complex(re / den, im / den)


def _eval_exact(c: Mapping[int, int], a: complex) -> complex:
    if not c:
        return 0j
    return _round(*_gauss_horner({e: (v, 0) for e, v in c.items()}, a))


class BiPolyZ:
    """Sparse polynomial in z with ``APoly`` coefficients."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[int, APoly] | Iterable[tuple[int, APoly]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        t: dict[int, APoly] = {}
        for e, p in items:
            if e < 0:
                raise ValueError("z-exponents must be non-negative")
            _check_exp(e)
            if not isinstance(p, APoly):
                p = APoly({0: p})
            t[e] = t[e] + p if e in t else p
        self._t = {e: p for e, p in t.items() if not p.is_zero()}

    @classmethod
    def _raw(cls, t: dict[int, APoly]) -> "BiPolyZ":
        obj = cls.__new__(cls)
        obj._t = t
        return obj

    @classmethod
    def one(cls) -> "BiPolyZ":
        return cls._raw({0: APoly.monomial(1)})

    @classmethod
    def zero(cls) -> "BiPolyZ":
        return cls._raw({})

    @classmethod
    def monomial(cls, z_exp: int, coeff: APoly | int = 1) -> "BiPolyZ":
        return cls({z_exp: coeff})

    @property
    def terms(self) -> Mapping[int, APoly]:
        return MappingProxyType(self._t)

    def items(self) -> Iterator[tuple[int, APoly]]:
        """Terms in ascending z-exponent order."""
        for e in sorted(self._t):
            yield e, self._t[e]

    def is_zero(self) -> bool:
        return not self._t

    def degree(self) -> int:
        return max(self._t) if self._t else -1

    def n_coeffs(self) -> int:
        """Total number of stored integer coefficients."""
        return sum(len(p) for p in self._t.values())

    def __len__(self) -> int:
        return len(self._t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiPolyZ):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        return hash(frozenset(self._t.items()))

    def __add__(self, other: "BiPolyZ") -> "BiPolyZ":
        return poly_add(self, other)

    def __mul__(self, other: "BiPolyZ") -> "BiPolyZ":
        return poly_mul(self, other)

    def __neg__(self) -> "BiPolyZ":
        return BiPolyZ._raw({e: -p for e, p in self._t.items()})

    def __sub__(self, other: "BiPolyZ") -> "BiPolyZ":
        return poly_add(self, -other)

    def shift(self, k: int) -> "BiPolyZ":
        """Multiply by ``z**k``."""
        if self._t:
            _check_exp(max(self._t) + k)
        return BiPolyZ._raw({e + k: p for e, p in self._t.items()})

    def __repr__(self) -> str:
        if not self._t:
            return "BiPolyZ(0)"
        return "BiPolyZ(" + ", ".join(f"z^{e}: {p!r}" for e, p in self.items()) + ")"

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> list[dict]:
        return [
            {"z_exp": e, "a_poly": [str(c) for c in p.to_dense()]}
            for e, p in self.items()
        ]

    @classmethod
    def from_json_obj(cls, obj: list[dict]) -> "BiPolyZ":
        terms = {}
        for entry in obj:
            e = int(entry["z_exp"])
            if e in terms:
                raise ValueError(f"duplicate z_exp {e}")
            terms[e] = APoly({k: int(s) for k, s in enumerate(entry["a_poly"])})
        return cls(terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "BiPolyZ":
        return cls.from_json_obj(json.loads(text))


class CPoly:
    """Sparse polynomial in z with complex double coefficients."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        t: dict[int, complex] = {}
        for e, c in items:
            t[int(e)] = t.get(int(e), 0j) + complex(c)
        self._t = {e: c for e, c in t.items() if c != 0}

    @property
    def terms(self) -> Mapping[int, complex]:
        return MappingProxyType(self._t)

    def items(self) -> Iterator[tuple[int, complex]]:
        for e in sorted(self._t):
            yield e, self._t[e]

    def degree(self) -> int:
        return max(self._t) if self._t else -1

    def __len__(self) -> int:
        return len(self._t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CPoly):
            return NotImplemented
        return self._t == other._t

    def __call__(self, z: complex) -> complex:
        return eval_at(self, z)

    def __repr__(self) -> str:
        return "CPoly(" + ", ".join(f"z^{e}: {c}" for e, c in self.items()) + ")"


# -- exact operations ----------------------------------------------------


def poly_add(f: BiPolyZ, g: BiPolyZ) -> BiPolyZ:
    out = dict(f._t)
    for e, p in g._t.items():
        if e in out:
            s = out[e] + p
            if s.is_zero():
                del out[e]
            else:
                out[e] = s
        else:
            out[e] = p
    return BiPolyZ._raw(out)


def poly_mul(f: BiPolyZ, g: BiPolyZ) -> BiPolyZ:
    if f.is_zero() or g.is_zero():
        return BiPolyZ.zero()
    _check_exp(f.degree() + g.degree())
    fa = max(p.degree() for p in f._t.values())
    ga = max(p.degree() for p in g._t.values())
    bound = min(len(f) * len(g), f.degree() + g.degree() + 1) * (fa + ga + 1)
    if min(bound, f.n_coeffs() * g.n_coeffs()) > MAX_TERMS:
        raise ExpansionTooLarge(f"product may produce up to {bound} coefficients")
    acc: dict[int, dict[int, int]] = {}
    for e1, p1 in f._t.items():
        for e2, p2 in g._t.items():
            slot = acc.setdefault(e1 + e2, {})
            for i, x in p1._c.items():
                for j, y in p2._c.items():
                    slot[i + j] = slot.get(i + j, 0) + x * y
    return _from_nested(acc)


def _from_nested(acc: Mapping[int, Mapping[int, int]]) -> BiPolyZ:
    out = {}
    for e, slot in acc.items():
        c = {k: v for k, v in slot.items() if v}
        if c:
            out[e] = APoly._raw(c)
    return BiPolyZ._raw(out)


def _pow_cache(g: BiPolyZ):
    cache = {1: g}

    def power(k: int) -> BiPolyZ:
        if k in cache:
            return cache[k]
        half = power(k // 2)
        r = poly_mul(half, half)
        if k % 2:
            r = poly_mul(r, g)
        cache[k] = r
        return r

    return power


def compose_size_bound(f: BiPolyZ, g: BiPolyZ) -> int:
    """Upper bound on the number of integer coefficients in ``f(g)``."""
    if f.is_zero():
        return 0
    zexps = list(g._t)
    h = 0
    for e in zexps:
        h = math.gcd(h, e)
    dg = g.degree()
    # z-support lies in multiples of h up to deg(f)*deg(g)
    z_slots = f.degree() * dg // h + 1 if h else 1
    a_lo = min(min(p._c) for p in f._t.values())
    a_hi = max(max(p._c) for p in f._t.values())
    ga_hi = max(max(p._c) for p in g._t.values()) if not g.is_zero() else 0
    a_slots = a_hi - a_lo + f.degree() * ga_hi + 1
    dense = z_slots * a_slots
    # each (term of f, term of g**e) pair lands in one slot
    t = len(g)
    comb = sum(math.comb(e + t - 1, t - 1) * len(p) for e, p in f._t.items()) if t else len(f)
    return min(dense, comb)


def poly_compose(f: BiPolyZ, g: BiPolyZ) -> BiPolyZ:
    """Return ``f(g(z))`` expanded exactly.

    Two-term ``g`` whose coefficients are the same power of ``a`` up to
    integer factors (the shape of every family member) takes a fast path
    that groups ``f`` by total a-degree and composes univariate integer
    polynomials.  Everything else uses sparse Horner with cached powers.
    """
    if f.is_zero():
        return BiPolyZ.zero()
    if f.degree() == 0:
        return f
    if g.is_zero():
        p = f._t.get(0)
        return BiPolyZ._raw({0: p}) if p is not None else BiPolyZ.zero()
    _check_exp(f.degree() * g.degree())
    bound = compose_size_bound(f, g)
    if bound > MAX_TERMS:
        raise ExpansionTooLarge(
            f"composition may produce up to {bound} coefficients (cap {MAX_TERMS})"
        )
    if _is_homogeneous_binomial(g):
        return _compose_binomial(f, g)
    return compose_horner(f, g)


def compose_horner(f: BiPolyZ, g: BiPolyZ) -> BiPolyZ:
    """Sparse Horner composition over descending exponents of ``f``."""
    if f.is_zero():
        return BiPolyZ.zero()
    power = _pow_cache(g)
    exps = sorted(f._t, reverse=True)
    acc = BiPolyZ._raw({0: f._t[exps[0]]})
    prev = exps[0]
    for e in exps[1:]:
        acc = poly_add(poly_mul(acc, power(prev - e)), BiPolyZ._raw({0: f._t[e]}))
        prev = e
    if prev:
        acc = poly_mul(acc, power(prev))
    return acc


def _is_homogeneous_binomial(g: BiPolyZ) -> bool:
    if len(g) != 2 or 0 in g._t:
        return False
    ps = list(g._t.values())
    return all(len(p) == 1 for p in ps) and next(iter(ps[0]._c)) == next(iter(ps[1]._c))


def _compose_binomial(f: BiPolyZ, g: BiPolyZ) -> BiPolyZ:
    # g = a^s (c1 z^p + c2 z^q); with U = z^h, h = gcd(p, q),
    # f(g) = sum_m a^m P_m(y(U)) where y = c1 U^(p/h) + c2 U^(q/h)
    (p, cp), (q, cq) = sorted(g._t.items(), reverse=True)
    s = next(iter(cp._c))
    h = math.gcd(p, q)
    y = [0] * (p // h + 1)
    y[p // h] = cp._c[s]
    y[q // h] = cq._c[s]
    y_poly = flint.fmpz_poly(y)

    grouped: dict[int, dict[int, int]] = defaultdict(dict)
    for e, fe in f._t.items():
        for l, c in fe._c.items():
            grouped[l + s * e][e] = c

    acc: dict[int, dict[int, int]] = defaultdict(dict)
    for m in sorted(grouped):
        coeffs = grouped[m]
        dense = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            dense[e] = c
        composed = flint.fmpz_poly(dense)(y_poly)
        for j, c in enumerate(composed.coeffs()):
            if c:
                acc[j][m] = int(c)
    return BiPolyZ._raw({_check_exp(j * h): APoly._raw(c) for j, c in acc.items()})


# -- numeric specialization ------------------------------------------------


def specialize(f: BiPolyZ, a_val: complex) -> CPoly:
    """Substitute a concrete ``a``; zero-magnitude coefficients are dropped."""
    out = {}
    for e, p in f._t.items():
        c = p(a_val)
        if c != 0:
            out[e] = c
    cp = CPoly.__new__(CPoly)
    cp._t = out
    return cp


def eval_at(f: CPoly, z: complex) -> complex:
    """Horner evaluation over the sorted exponents of ``f``.

    The operation order depends only on the exponent set, so repeated
    calls are bit-reproducible.
    """
    if not f._t:
        return 0j
    return _horner_sparse(f._t, complex(z))


def eval_exact(f: BiPolyZ, a: complex, z: complex) -> complex:
    """f(a, z) computed exactly in dyadic Gaussian integers, rounded once.

    Expanded basis vectors have coefficients far beyond float range whose
    contributions cancel; this path is immune to both problems.
    """
    if not f._t:
        return 0j
    parts = {e: _gauss_horner({k: (v, 0) for k, v in p._c.items()}, complex(a)) for e, p in f._t.items()}
    top = max(s for _, _, s in parts.values())
    c = {e: (r << (top - s), i << (top - s)) for e, (r, i, s) in parts.items()}
    re, im, shift = _gauss_horner(c, complex(z))
    return _round(re, im, shift + top)


def cpoly_mul(f: CPoly, g: CPoly) -> CPoly:
    acc: dict[int, complex] = defaultdict(complex)
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            acc[e1 + e2] += c1 * c2
    return CPoly(acc)


def cpoly_add(f: CPoly, g: CPoly) -> CPoly:
    acc = dict(f._t)
    for e, c in g._t.items():
        acc[e] = acc.get(e, 0j) + c
    return CPoly(acc)


def cpoly_compose(f: CPoly, g: CPoly) -> CPoly:
    """Numeric ``f(g(z))`` by sparse Horner, no exact arithmetic involved."""
    if not f._t:
        return CPoly()
    cache = {1: g}

    def power(k: int) -> CPoly:
        if k not in cache:
            half = power(k // 2)
            r = cpoly_mul(half, half)
            cache[k] = cpoly_mul(r, g) if k % 2 else r
        return cache[k]

    exps = sorted(f._t, reverse=True)
    acc = CPoly({0: f._t[exps[0]]})
    prev = exps[0]
    for e in exps[1:]:
        acc = cpoly_add(cpoly_mul(acc, power(prev - e)), CPoly({0: f._t[e]}))
        prev = e
    if prev:
        acc = cpoly_mul(acc, power(prev))
    return acc
