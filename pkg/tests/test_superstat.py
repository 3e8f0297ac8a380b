import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphene_landau import canonical as cn
from graphene_landau import superstat as ss
from graphene_landau.errors import ValidationError
from graphene_landau.numerics import derivative, stable_kernel_k2

from conftest import derived


def ln_zs(q, dp):
    return lambda beta: math.log(ss.partition_super_closed(beta, q, dp))


class TestBoltzmannFactor:
    @given(st.floats(0, 50), st.floats(1e-3, 50))
    def test_q_zero_is_boltzmann(self, e, beta):
        assert ss.boltzmann_factor_q(e, beta, 0.0) == pytest.approx(math.exp(-beta * e), rel=2.3e-16)

    @given(st.floats(1e-3, 50), st.floats(0, 5))
    def test_zero_energy(self, beta, q):
        assert ss.boltzmann_factor_q(0.0, beta, q) == 1.0

    def test_reference(self):
        assert ss.boltzmann_factor_q(1.0, 1.0, 1.0) == pytest.approx(1.5 / math.e, rel=1e-15)

    @given(st.floats(0, 100), st.floats(1e-3, 10), st.floats(0, 1))
    def test_positive(self, e, beta, q):
        assert ss.boltzmann_factor_q(e, beta, q) >= 0

    def test_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            ss.boltzmann_factor_q(1.0, 0.0, 0.5)
        with pytest.raises(ValidationError):
            ss.boltzmann_factor_q(1.0, 1.0, -0.5)

    @pytest.mark.parametrize("e, beta, q", [(1.0, 0.3, 0.5), (2.0, 1.5, 1.0), (0.5, 4.0, 0.2)])
    def test_slope(self, e, beta, q):
        numeric = derivative(lambda b: ss.boltzmann_factor_q(e, b, q), beta, 1, h=1e-3)
        assert ss.boltzmann_slope_q(e, beta, q) == pytest.approx(numeric, rel=1e-9)


class TestPartition:
    def test_closed_values(self):
        assert ss.partition_super_closed(2.0, 1.0, derived(0.5)) == 2.0
        dp = derived(1.0)  # a = sqrt(2)
        assert ss.partition_super_closed(1.0, 0.0, dp) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("q, expected", [(0.0, 1.0), (1.0, 4.0)])
    def test_integral_values(self, q, expected, dp_unit):
        assert ss.partition_super_integral(1.0, q, dp_unit).value == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("q", [0.0, 0.5, 1.0])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("d", [0.3, 1.0, 5.0])
    def test_integral_matches_gamma_formula(self, q, beta, d):
        dp = derived(d)
        value = ss.partition_super_integral(beta, q, dp).value
        assert value == pytest.approx(ss.partition_super_analytic(beta, q, dp), rel=1e-9)

    @pytest.mark.parametrize("lam", [1.0, 2.0, 100.0])
    def test_closed_and_integral_differ_by_lambda(self, lam):
        dp = derived(0.7, lam)
        for q in (0.0, 0.5, 1.0):
            closed = ss.partition_super_closed(1.3, q, dp)
            integral = ss.partition_super_integral(1.3, q, dp).value
            assert integral == pytest.approx(lam * closed, rel=1e-9)

    def test_q_zero_equals_canonical_continuum(self, dp_unit):
        for beta in (0.5, 1.0, 3.0):
            assert ss.partition_super_closed(beta, 0.0, dp_unit) == pytest.approx(1 / (dp_unit.b * beta**2), rel=1e-15)

    @given(st.floats(1e-3, 1e3), st.floats(0, 1))
    def test_beta_squared_scaling(self, beta, q):
        dp = derived(0.5)
        assert ss.partition_super_closed(beta, q, dp) * beta**2 == pytest.approx(2 + 6 * q, rel=1e-15)

    @given(st.floats(0.05, 50.0))
    def test_bridge_to_canonical(self, beta):
        dp = derived(0.9)  # lambda = 1
        zs = ss.partition_super_closed(beta, 0.0, dp)
        z = cn.partition_closed(beta, dp)
        t = beta * dp.a
        bound = math.exp(-t) * (1 + t) / stable_kernel_k2(t)
        assert abs(zs - z) / zs <= bound * (1 + 1e-12) + 4e-16


class TestDerived:
    @pytest.mark.parametrize("beta, expected", [(2.0, 1.0), (0.5, 4.0)])
    def test_mean_energy(self, beta, expected):
        assert ss.mean_energy_s(beta, 0.3) == expected

    @pytest.mark.parametrize("beta", [0.2, 1.0, 7.0])
    def test_mean_energy_q_independent(self, beta, dp_unit):
        values = {ss.mean_energy_s(beta, q) for q in (0.0, 0.5, 1.0)}
        assert len(values) == 1
        for q in (0.0, 0.5, 1.0):
            numeric = -derivative(ln_zs(q, dp_unit), beta, 1, h=0.01 * beta)
            assert numeric == pytest.approx(ss.mean_energy_s(beta, q), rel=1e-9)

    def test_free_energy_values(self):
        assert ss.free_energy_s(1.0, 0.0, derived(1.0)) == pytest.approx(0.0, abs=1e-15)
        assert ss.free_energy_s(2.0, 1.0, derived(0.5)) == pytest.approx(-math.log(2) / 2, rel=1e-14)

    def test_entropy_values(self):
        assert ss.entropy_s(1.0, 0.0, derived(1.0)) == pytest.approx(2.0, rel=1e-15)
        assert ss.entropy_s(1.0, 1.0, derived(0.5)) == pytest.approx(2 + math.log(8), rel=1e-15)

    @given(st.floats(1e-2, 1e2), st.floats(0, 0.99))
    def test_entropy_increases_with_q(self, beta, q):
        dp = derived(0.5)
        assert ss.entropy_s(beta, q + 0.01, dp) > ss.entropy_s(beta, q, dp)
        assert ss.entropy_s(beta, q + 0.01, dp) >= ss.entropy_s(beta, 0.0, dp)

    def test_heat_capacity(self):
        assert ss.heat_capacity_s(0.3) == 2.0
        assert ss.heat_capacity_s(0.3, k_boltz=1.380649e-23) == pytest.approx(2.761298e-23, rel=1e-15)

    @pytest.mark.parametrize("beta", [0.1, 1.0, 10.0])
    @pytest.mark.parametrize("q", [0.0, 0.5, 1.0])
    def test_heat_capacity_oracle(self, beta, q, dp_unit):
        numeric = beta**2 * derivative(ln_zs(q, dp_unit), beta, 2, h=0.01 * beta)
        assert numeric == pytest.approx(ss.heat_capacity_s(q), rel=1e-8)

    @given(st.floats(1e-2, 1e2), st.floats(0, 1))
    def test_identity(self, beta, q):
        dp = derived(0.5)
        f, u, s = ss.free_energy_s(beta, q, dp), ss.mean_energy_s(beta, q), ss.entropy_s(beta, q, dp)
        assert abs(f - (u - s / beta)) <= 1e-12 * max(abs(f), abs(u))


class TestConfigAndSweep:
    def test_q_range(self):
        ss.SuperstatConfig(0.0)
        ss.SuperstatConfig(1.0)
        with pytest.raises(ValidationError):
            ss.SuperstatConfig(1.5)
        assert ss.SuperstatConfig(1.5, permissive=True).q == 1.5
        with pytest.raises(ValidationError):
            ss.SuperstatConfig(-0.1, permissive=True)

    def test_single_point(self, dp_unit):
        (p,) = ss.superstat_sweep([1.0], 0.5, dp_unit)
        assert (p.z_s, p.u_s, p.c_s, p.s_s, p.f_s) == (
            ss.partition_super_closed(1.0, 0.5, dp_unit),
            ss.mean_energy_s(1.0, 0.5),
            ss.heat_capacity_s(0.5),
            ss.entropy_s(1.0, 0.5, dp_unit),
            ss.free_energy_s(1.0, 0.5, dp_unit),
        )

    def test_grid(self, dp_unit):
        points = ss.superstat_sweep(np.linspace(0.1, 10, 60), 0.5, dp_unit)
        for p in points:
            assert p.u_s * p.beta == pytest.approx(2.0, rel=2.3e-16)
            assert p.c_s == 2.0
            assert p.z_s > 0
        assert len({p.c_s for p in points}) == 1

    def test_permissive_flag(self, dp_unit):
        with pytest.raises(ValidationError):
            ss.superstat_sweep([1.0], 2.0, dp_unit)
        assert ss.superstat_sweep([1.0], 2.0, dp_unit, permissive_q=True)[0].q == 2.0

    def test_empty(self, dp_unit):
        with pytest.raises(ValidationError, match="empty-sweep"):
            ss.superstat_sweep([], 0.5, dp_unit)
