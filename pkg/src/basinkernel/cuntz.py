"""Cuntz operators S0, S1 over Z[a][z] and the basis vectors b_v = S_v 1.

    S0 f = f(R_a(z)),    S1 f = z^(2^n) f(R_a(z))

A word ``v = (j1, ..., jN)`` acts right to left: S_jN is applied to 1
first and S_j1 last.  Because S0 1 = 1, appending a 0 to a word never
changes its vector, so the duplicate-free family is the empty word plus
all words ending in 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .dynamics import FamilyMember, family_poly
from .poly import (
    MAX_EXP,
    APoly,
    BiPolyZ,
    CPoly,
    ExponentOverflow,
    cpoly_compose,
    cpoly_mul,
    poly_compose,
    specialize,
)

MAX_WORD_LEN = 12


class WordTooLong(ValueError):
    pass


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(c) for c in self.letters)
        if any(c not in (0, 1) for c in letters):
            raise ValueError(f"word letters must be 0 or 1, got {self.letters!r}")
        if len(letters) > MAX_WORD_LEN:
            raise WordTooLong(f"word length {len(letters)} exceeds {MAX_WORD_LEN}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if any(c not in "01" for c in text):
            raise ValueError(f"word must match [01]*, got {text!r}")
        return cls(tuple(int(c) for c in text))

    def __str__(self) -> str:
        return "".join(map(str, self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "Word | Sequence[int]") -> "Word":
        tail = other.letters if isinstance(other, Word) else tuple(other)
        return Word(self.letters + tail)

    def is_canonical(self) -> bool:
        return not self.letters or self.letters[-1] == 1


def as_word(v: "Word | str | Iterable[int]") -> Word:
    if isinstance(v, Word):
        return v
    if isinstance(v, str):
        return Word.parse(v)
    return Word(tuple(v))


@dataclass(frozen=True)
class BasisVector:
    word: Word
    n: int
    poly: BiPolyZ

    def to_json_obj(self) -> dict:
        return {
            "word": str(self.word),
            "n": self.n,
            "terms": self.poly.to_json_obj(),
            "good_form": good_form(self),
        }


@dataclass(frozen=True)
class CoefficientProfile:
    entries: tuple[tuple[int, APoly], ...]

    def as_dict(self) -> dict[int, APoly]:
        return dict(self.entries)


def _n_of(fm: FamilyMember | int) -> int:
    return fm.n if isinstance(fm, FamilyMember) else int(fm)


def apply_s0(fm: FamilyMember | int, f: BiPolyZ) -> BiPolyZ:
    return poly_compose(f, family_poly(_n_of(fm)))


def apply_s1(fm: FamilyMember | int, f: BiPolyZ) -> BiPolyZ:
    n = _n_of(fm)
    return apply_s0(n, f).shift(2**n)


def apply_letter(fm: FamilyMember | int, letter: int, f: BiPolyZ) -> BiPolyZ:
    return apply_s1(fm, f) if letter else apply_s0(fm, f)


def degree_bound(n: int, word: Word) -> int:
    """Exact z-degree of b_v, computed without expanding anything."""
    deg = 0
    for letter in reversed(word.letters):
        deg = deg * 2 ** (n + 2) + (2**n if letter else 0)
    return deg


def basis_vector(fm: FamilyMember | int, v: "Word | str | Iterable[int]") -> BasisVector:
    """b_v = S_{j1} ... S_{jN} 1, expanded exactly over Z[a][z]."""
    n = _n_of(fm)
    word = as_word(v)
    deg = degree_bound(n, word)
    if deg > MAX_EXP:
        raise ExponentOverflow(f"b_{word} has z-degree {deg} > 2**63 - 1")
    return BasisVector(word, n, _cached_poly(n, word.letters))


# memo for b_v; only vectors up to this many coefficients are retained
CACHE_MAX_COEFFS = 100_000
_cache: dict[tuple[int, tuple[int, ...]], BiPolyZ] = {}


def _cached_poly(n: int, letters: tuple[int, ...]) -> BiPolyZ:
    # b_(j1, rest) = S_j1 b_rest; suffixes are shared across an enumeration
    if not letters:
        return BiPolyZ.one()
    key = (n, letters)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    poly = apply_letter(n, letters[0], _cached_poly(n, letters[1:]))
    if poly.n_coeffs() <= CACHE_MAX_COEFFS:
        _cache[key] = poly
    return poly


def clear_cache() -> None:
    _cache.clear()


def enumerate_canonical(max_len: int) -> list[Word]:
    """Empty word, then words ending in 1 by length, then lexicographically."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if max_len > MAX_WORD_LEN:
        raise WordTooLong(f"max_len {max_len} exceeds {MAX_WORD_LEN}")
    out = [Word()]
    for length in range(1, max_len + 1):
        for head in itertools.product((0, 1), repeat=length - 1):
            out.append(Word(head + (1,)))
    return out


def good_form(bv: BasisVector | BiPolyZ) -> bool:
    """Every coefficient is an integer polynomial in a with zero constant term."""
    poly = bv.poly if isinstance(bv, BasisVector) else bv
    return all(p.constant_term() == 0 for p in poly.terms.values())


def coefficient_profile(bv: BasisVector) -> CoefficientProfile:
    return CoefficientProfile(tuple(bv.poly.items()))


def continuity_modulus(fm: FamilyMember | int, v, a_seq: Iterable[complex], a_lim: complex,
                       eval_disk_radius: float = 1.0) -> list[float]:
    """l1 distance between the coefficients of b_{v,a_k} and b_{v,a_lim}.

    On |z| <= r the sup-norm deviation is at most this distance times
    max(1, r)^deg, so the result is scaled by that factor for r > 1.
    """
    if eval_disk_radius <= 0:
        raise ValueError("eval_disk_radius must be positive")
    a_lim = complex(a_lim)
    a_seq = [complex(a) for a in a_seq]
    if a_lim == 0 or any(a == 0 for a in a_seq):
        raise ValueError("a-values must be nonzero")
    profile = coefficient_profile(basis_vector(fm, v)).entries
    deg = profile[-1][0] if profile else 0
    scale = max(1.0, eval_disk_radius) ** deg
    return [scale * sum(abs(beta.diff(a, a_lim)) for _, beta in profile) for a in a_seq]


def numeric_basis_vector(fm: FamilyMember, v) -> CPoly:
    """b_{v,a} built entirely in complex floating point at ``fm.a``."""
    word = as_word(v)
    r = specialize(family_poly(fm), fm.a)
    f = CPoly({0: 1})
    for letter in reversed(word.letters):
        f = cpoly_compose(f, r)
        if letter:
            f = cpoly_mul(CPoly({2**fm.n: 1}), f)
    return f


def alpha_coeff(n: int, k: int) -> APoly:
    """alpha_k(a) = (-2)^k binom(2^n, k) a^(2^n)."""
    return APoly({2**n: (-2) ** k * comb(2**n, k)})


def closed_form_s0s1(n: int) -> BiPolyZ:
    """sum_k alpha_k(a) z^(2^(2n+2) - 2^(n+1) k), k = 0..2^n."""
    return BiPolyZ({2 ** (2 * n + 2) - 2 ** (n + 1) * k: alpha_coeff(n, k) for k in range(2**n + 1)})


def closed_form_s1s1(n: int) -> BiPolyZ:
    return closed_form_s0s1(n).shift(2**n)
