import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basinkernel import cuntz
from basinkernel.cuntz import (
    BasisVector,
    Word,
    WordTooLong,
    apply_s0,
    apply_s1,
    basis_vector,
    closed_form_s0s1,
    closed_form_s1s1,
    coefficient_profile,
    continuity_modulus,
    degree_bound,
    enumerate_canonical,
    good_form,
    numeric_basis_vector,
)
from basinkernel.dynamics import FamilyMember
from basinkernel.poly import APoly, BiPolyZ, ExpansionTooLarge, poly_compose, poly_mul, specialize
from basinkernel.dynamics import family_poly


def a_(k=1, c=1):
    return APoly({k: c})


words = st.lists(st.integers(0, 1), max_size=4).map(lambda l: Word(tuple(l)))


class TestWord:
    def test_parse_and_str(self):
        assert str(Word.parse("0110")) == "0110"
        assert Word.parse("") == Word()

    @pytest.mark.parametrize("text", ["012", "a", "1 0"])
    def test_bad_letters(self, text):
        with pytest.raises(ValueError):
            Word.parse(text)

    def test_length_cap(self):
        Word((1,) * 12)
        with pytest.raises(WordTooLong):
            Word((1,) * 13)

    def test_canonical(self):
        assert Word().is_canonical()
        assert Word((0, 1)).is_canonical()
        assert not Word((1, 0)).is_canonical()


class TestOperators:
    def test_s0_of_one(self):
        assert apply_s0(0, BiPolyZ.one()) == BiPolyZ.one()

    def test_s1_of_one(self):
        for n in range(4):
            assert apply_s1(n, BiPolyZ.one()) == BiPolyZ.monomial(2**n)

    def test_s0_of_z(self):
        assert apply_s0(0, BiPolyZ.monomial(1)) == BiPolyZ({4: a_(), 2: a_(1, -2)})

    def test_s0_of_z2_n1(self):
        expect = BiPolyZ({16: a_(2), 12: a_(2, -4), 8: a_(2, 4)})
        assert apply_s0(1, BiPolyZ.monomial(2)) == expect

    def test_s1_s1_n0(self):
        assert apply_s1(0, BiPolyZ.monomial(1)) == BiPolyZ({5: a_(), 3: a_(1, -2)})

    def test_s1_linear(self):
        f = BiPolyZ({0: APoly({0: 1}), 1: APoly({0: 1})})
        expect = BiPolyZ({1: APoly({0: 1}), 5: a_(), 3: a_(1, -2)})
        assert apply_s1(0, f) == expect

    @settings(max_examples=30)
    @given(st.integers(0, 2), words)
    def test_factorization(self, n, v):
        if n == 2 and len(v) > 3:
            v = Word(v.letters[:3])
        # S1 f = z^(2^n) * f(R), with the composition done independently
        f = basis_vector(n, v).poly
        via_mul = poly_mul(BiPolyZ.monomial(2**n), poly_compose(f, family_poly(n)))
        assert apply_s1(n, f) == via_mul
        assert apply_s1(n, f) == apply_s0(n, f).shift(2**n)


class TestBasisVector:
    def test_small_words(self):
        assert basis_vector(0, "0").poly == BiPolyZ.one()
        assert basis_vector(0, "").poly == BiPolyZ.one()
        assert basis_vector(0, "01").poly == BiPolyZ({4: a_(), 2: a_(1, -2)})
        assert basis_vector(0, "11").poly == BiPolyZ({5: a_(), 3: a_(1, -2)})

    def test_word_acts_right_to_left(self):
        # b_10 = S1 S0 1 = S1 1 = z, while b_01 = S0 S1 1 = z(R)
        assert basis_vector(0, "10").poly == BiPolyZ.monomial(1)

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_closed_forms(self, n):
        assert basis_vector(n, "01").poly == closed_form_s0s1(n)
        assert basis_vector(n, "11").poly == closed_form_s1s1(n)

    def test_closed_form_n2_explicit(self):
        # alpha_k(a) = (-2)^k C(4,k) a^4
        cf = closed_form_s0s1(2)
        assert {e: p.coeffs[4] for e, p in cf.items()} == {64: 1, 56: -8, 48: 24, 40: -32, 32: 16}

    @given(st.integers(0, 3), st.lists(st.integers(0, 1), max_size=4))
    def test_degree_bound_exact(self, n, letters):
        w = Word(tuple(letters))
        if len(w) <= 3:
            assert basis_vector(n, w).poly.degree() == degree_bound(n, w)

    def test_caps_keep_degrees_in_range(self):
        assert degree_bound(3, Word((1,) * 12)) < 2**63 - 1

    def test_oversized_expansion_rejected(self):
        with pytest.raises(ExpansionTooLarge):
            basis_vector(2, "111111")

    @pytest.mark.parametrize("n, max_len", [(0, 5), (1, 3), (2, 2)])
    def test_duplicate_law(self, n, max_len):
        for length in range(max_len + 1):
            for letters in np.ndindex(*([2] * length)):
                v = Word(tuple(int(c) for c in letters))
                # build v0 letter by letter, bypassing the memo
                f = apply_s0(n, BiPolyZ.one())
                for letter in reversed(v.letters):
                    f = cuntz.apply_letter(n, letter, f)
                assert f == basis_vector(n, v).poly

    def test_json(self):
        obj = basis_vector(0, "01").to_json_obj()
        assert obj == {
            "word": "01",
            "n": 0,
            "terms": [{"z_exp": 2, "a_poly": ["0", "-2"]}, {"z_exp": 4, "a_poly": ["0", "1"]}],
            "good_form": True,
        }


class TestEnumeration:
    def test_counts(self):
        assert [str(w) for w in enumerate_canonical(1)] == ["", "1"]
        assert [str(w) for w in enumerate_canonical(2)] == ["", "1", "01", "11"]
        for m in range(7):
            assert len(enumerate_canonical(m)) == 2**m

    def test_duplicate_free(self):
        polys = [basis_vector(0, v).poly for v in enumerate_canonical(4)]
        assert len(set(polys)) == len(polys)

    def test_limits(self):
        with pytest.raises(ValueError):
            enumerate_canonical(-1)
        with pytest.raises(WordTooLong):
            enumerate_canonical(13)


class TestGoodForm:
    def test_examples(self):
        assert good_form(basis_vector(0, "01"))
        assert not good_form(basis_vector(0, "1"))
        assert not good_form(basis_vector(0, ""))

    @pytest.mark.parametrize("n, max_len", [(0, 5), (1, 4), (2, 3), (3, 3)])
    def test_universality(self, n, max_len):
        for v in enumerate_canonical(max_len):
            assert good_form(basis_vector(n, v)) == (str(v) not in ("", "1"))

    @pytest.mark.parametrize("n, max_len", [(0, 4), (1, 3), (2, 2)])
    def test_closure(self, n, max_len):
        for v in enumerate_canonical(max_len):
            f = basis_vector(n, v).poly
            if good_form(f):
                assert good_form(apply_s0(n, f)) and good_form(apply_s1(n, f))

    @given(st.dictionaries(st.integers(0, 6), st.dictionaries(st.integers(1, 3), st.integers(-4, 4))))
    def test_closure_on_arbitrary_good_polys(self, terms):
        f = BiPolyZ({e: APoly(c) for e, c in terms.items()})
        assert good_form(f)
        assert good_form(apply_s0(1, f)) and good_form(apply_s1(1, f))


class TestProfile:
    def test_examples(self):
        assert coefficient_profile(basis_vector(0, "01")).entries == ((2, a_(1, -2)), (4, a_()))
        assert coefficient_profile(basis_vector(1, "1")).entries == ((2, APoly({0: 1})),)
        assert coefficient_profile(basis_vector(0, "11")).entries == ((3, a_(1, -2)), (5, a_()))

    def test_mirrors_poly(self):
        bv = basis_vector(1, "011")
        assert dict(coefficient_profile(bv).entries) == dict(bv.poly.terms)


class TestContinuity:
    def test_harmonic_path(self):
        d = continuity_modulus(0, "01", [1 + 1 / k for k in range(1, 11)], 1)
        for k, dk in enumerate(d, start=1):
            assert abs(dk - 3 / k) < 1e-12

    def test_constant_path(self):
        assert continuity_modulus(1, "011", [0.7j] * 4, 0.7j) == [0.0] * 4

    @pytest.mark.parametrize("v", ["01", "11", "011", "0101", "111"])
    def test_decay(self, v):
        d = continuity_modulus(0, v, [1 + 10.0**-k for k in range(1, 8)], 1)
        assert d[-1] < 1e-3 * d[0]
        assert all(y < x for x, y in zip(d, d[1:]))

    def test_radius_scaling(self):
        base = continuity_modulus(0, "01", [2], 1)
        assert continuity_modulus(0, "01", [2], 1, eval_disk_radius=2.0) == [base[0] * 16]
        assert continuity_modulus(0, "01", [2], 1, eval_disk_radius=0.5) == base

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            continuity_modulus(0, "01", [0], 1)


class TestSpecialization:
    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 1), words, st.complex_numbers(min_magnitude=0.1, max_magnitude=2))
    def test_commutes(self, n, v, a0):
        fm = FamilyMember(n, a0)
        exact = specialize(basis_vector(fm, v).poly, a0)
        numeric = numeric_basis_vector(fm, v)
        scale = max(abs(c) for c in exact.terms.values())
        keys = set(exact.terms) | set(numeric.terms)
        for k in keys:
            assert abs(exact.terms.get(k, 0) - numeric.terms.get(k, 0)) <= 1e-10 * scale
