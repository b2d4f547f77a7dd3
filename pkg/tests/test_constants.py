"""
维度常数测试
"""

import math

import pytest
import sympy

from src.core.constants import (
    DimensionConstants, gamma_constant, lambda_exact, lambda_from_gamma, lambda_prime_exact,
    sphere_area, sphere_area_exact,
)
from src.core.errors import DimensionMismatchError


class TestDimensionConstants:
    """维度常数测试类"""

    def test_sphere_areas(self):
        """测试 ω_0 = 2, ω_1 = 2π, ω_2 = 4π"""
        assert sphere_area(0) == pytest.approx(2.0)
        assert sphere_area(1) == pytest.approx(2.0 * math.pi)
        assert sphere_area(2) == pytest.approx(4.0 * math.pi)
        assert sphere_area_exact(2) == 4 * sympy.pi

    def test_lambda_values(self):
        """测试 λ_3 = 4、λ_2 = π/2"""
        assert lambda_exact(3) == 4
        assert sympy.simplify(lambda_exact(2) - sympy.pi / 2) == 0
        assert DimensionConstants.for_dimension(3).lambda_n == pytest.approx(4.0)

    def test_lambda_prime(self):
        """测试 λ'_n = (-1)^{n-1} λ_n/(n-1)!"""
        assert lambda_prime_exact(3) == 2
        assert DimensionConstants.for_dimension(2).lambda_prime_n == pytest.approx(-math.pi / 2)

    def test_limit_constants(self):
        """测试 C_2 = 1/2、C_3 = 2/π"""
        assert DimensionConstants.for_dimension(2).C_n == pytest.approx(0.5)
        assert DimensionConstants.for_dimension(3).C_n == pytest.approx(2.0 / math.pi)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_limit_constant_is_sphere_ratio(self, n):
        """测试 C_n = ω_{n-1}/ω_n"""
        constants = DimensionConstants.for_dimension(n)
        assert constants.C_n == pytest.approx(sphere_area(n - 1) / sphere_area(n), rel=1e-14)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_exact_and_float_agree(self, n):
        """测试精确值与浮点值一致"""
        constants = DimensionConstants.for_dimension(n)
        assert float(constants.lambda_exact()) == pytest.approx(constants.lambda_n, rel=1e-14)
        assert float(constants.lambda_prime_exact()) == pytest.approx(constants.lambda_prime_n, rel=1e-14)
        assert float(sphere_area_exact(n)) == pytest.approx(constants.omega_n, rel=1e-14)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_lambda_from_gamma(self, n):
        """测试由 γ 常数重建 λ_n"""
        assert lambda_from_gamma(n) == pytest.approx(DimensionConstants.for_dimension(n).lambda_n, rel=1e-12)

    def test_gamma_phase(self):
        """测试 γ_{k,α} 的相位因子 i^k"""
        value = gamma_constant(1, 1.0, 3)
        assert value.real == pytest.approx(0.0, abs=1e-15)
        assert value.imag > 0.0
        assert gamma_constant(2, 1.0, 3).real < 0.0
        assert DimensionConstants.for_dimension(3).gamma(0, 1.0) == gamma_constant(0, 1.0, 3)

    def test_omega_n_minus_2(self):
        """测试 ω_{n-2}"""
        assert DimensionConstants.for_dimension(3).omega_n_minus_2 == pytest.approx(2.0 * math.pi)
        assert DimensionConstants.for_dimension(2).omega_n_minus_2 == pytest.approx(2.0)

    def test_out_of_range(self):
        """测试维度超出范围"""
        with pytest.raises(DimensionMismatchError):
            DimensionConstants.for_dimension(0)
        with pytest.raises(DimensionMismatchError):
            lambda_exact(21)
