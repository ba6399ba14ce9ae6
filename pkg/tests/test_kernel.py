import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basinkernel.dynamics import FamilyMember, IterConfig, Status, basin_member_series
from basinkernel.kernel import (
    KernelConfig,
    NotConverged,
    check_functional_eq,
    eval_kernel,
    gram_matrix,
    kernel_factor,
    omega_series,
    omega_verdicts,
)
from basinkernel.verify import sample_basin

R0 = FamilyMember(0, 1)

# frozen from a 40-digit mpmath product over 60 factors
K_01_01 = 1.0104006036701518046
K_N1 = 0.99729999450254405601 - 0.0036000034587344459951j  # n=1, a=1, z=0.3, w=0.1+0.2i
# 40-digit mpmath sum of |R^i(0.1)|^2
OMEGA_01 = 0.010396637048862384

CORNERS = [FamilyMember(0, 1), FamilyMember(0, 0.5), FamilyMember(0, 1 + 0.3j), FamilyMember(1, 1), FamilyMember(2, 1)]


def basin_pairs(fm, seed, count):
    pts = sample_basin(fm, np.random.default_rng(seed), 2 * count)
    return list(zip(pts[:count], pts[count:]))


class TestEval:
    def test_origin(self):
        kv = eval_kernel(R0, 0, 0)
        assert kv.value == 1
        assert kv.converged and kv.factors_used == 1

    def test_orbit_of_zero_kills_cross_terms(self):
        assert eval_kernel(R0, 0.5, 0).value == 1

    def test_product_oracle(self):
        kv = eval_kernel(R0, 0.1, 0.1)
        assert kv.converged
        assert abs(kv.value - K_01_01) < 1e-15

    def test_product_oracle_n1(self):
        kv = eval_kernel(FamilyMember(1, 1), 0.3, 0.1 + 0.2j)
        assert abs(kv.value - K_N1) < 1e-15

    def test_tail_certificate(self):
        cfg = KernelConfig()
        kv = eval_kernel(R0, 0.4 + 0.2j, 0.2 - 0.3j, cfg)
        assert kv.converged
        assert kv.tail_bound < cfg.tail_eps * abs(kv.value)

    def test_escape_not_converged(self):
        kv = eval_kernel(R0, 5, 5)
        assert not kv.converged
        assert math.isinf(kv.tail_bound)

    def test_budget_not_converged(self):
        kv = eval_kernel(R0, 0.9, 0.9, KernelConfig(max_factors=2))
        assert not kv.converged and kv.factors_used == 2

    @pytest.mark.parametrize("kw", [dict(max_factors=0), dict(tail_eps=0), dict(tail_eps=1)])
    def test_config_validation(self, kw):
        with pytest.raises(ValueError):
            KernelConfig(**kw)

    def test_factor(self):
        assert kernel_factor(FamilyMember(1, 1), 1j, 1) == 0


class TestFunctionalEquation:
    def test_oracle_point(self):
        assert check_functional_eq(R0, 0.1, 0.1) < 1e-10

    def test_origin(self):
        assert check_functional_eq(R0, 0, 0) == 0

    def test_n1(self):
        assert check_functional_eq(FamilyMember(1, 0.5), 0.2, 0.1j) < 1e-10

    def test_not_converged_raises(self):
        with pytest.raises(NotConverged):
            check_functional_eq(R0, 5, 5)

    @pytest.mark.parametrize("fm", CORNERS, ids=str)
    def test_random_pairs(self, fm):
        for z, w in basin_pairs(fm, 7, 100):
            assert check_functional_eq(fm, z, w) < 1e-9


class TestStructure:
    @pytest.mark.parametrize("fm", CORNERS, ids=str)
    def test_hermitian(self, fm):
        for z, w in basin_pairs(fm, 11, 100):
            kzw = eval_kernel(fm, z, w).value
            kwz = eval_kernel(fm, w, z).value
            assert abs(kzw - kwz.conjugate()) <= 1e-12 * abs(kzw)

    @pytest.mark.parametrize("fm", CORNERS, ids=str)
    def test_diagonal(self, fm):
        for z in sample_basin(fm, np.random.default_rng(3), 100):
            k = eval_kernel(fm, z, z).value
            assert abs(k.imag) <= 1e-12 * abs(k)
            assert k.real >= 1 - 1e-12

    @pytest.mark.parametrize("fm", CORNERS, ids=str)
    def test_gram_psd(self, fm):
        pts = sample_basin(fm, np.random.default_rng(5), 60)
        for k in range(10):
            g = gram_matrix(fm, pts[6 * k:6 * k + 6])
            assert np.allclose(g, g.conj().T, rtol=1e-12, atol=0)
            assert np.linalg.eigvalsh(0.5 * (g + g.conj().T))[0] > -1e-9


class TestOmega:
    def test_origin(self):
        r = omega_series(R0, 0)
        assert (r.verdict, r.partial_sum) == ("Converges", 0)

    def test_sum_oracle(self):
        r = omega_series(R0, 0.1)
        assert r.verdict == "Converges"
        assert r.partial_sum == pytest.approx(OMEGA_01, rel=1e-13)

    def test_constant_orbit(self):
        assert omega_series(R0, -1).verdict == "Diverges"

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(CORNERS), st.integers(0, 2**32 - 1))
    def test_agrees_with_series_test(self, fm, seed):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-1.5, 1.5, 50) + 1j * rng.uniform(-1.5, 1.5, 50)
        icfg = IterConfig()
        kcfg = KernelConfig(max_factors=icfg.max_iters, escape_radius=icfg.escape_radius)
        status, sums = omega_verdicts(fm, pts, kcfg)
        for k, z in enumerate(pts):
            r = omega_series(fm, z, kcfg)
            assert status[k] == {"Converges": 1, "Diverges": 0, "Indeterminate": 2}[r.verdict]
            assert sums[k] == r.partial_sum
            s = basin_member_series(fm, z, icfg).status
            if Status.INDETERMINATE not in (s, status[k]):
                assert s == status[k]
