#!/usr/bin/env python3
"""
核函数测试模块
测试 Gauss–Jacobi 求积、球面积分核 K±、intrinsic 核 P̃± 的两个级数分支与延拓，以及 β(P±) = K±
"""

import math

import numpy as np
import pytest

from src.axial_calculus import dirac_stencil
from src.core.clifford import Paravector
from src.core.constants import DimensionConstants
from src.core.errors import DomainError, RegionError
from src.intrinsic import ComplexPoint
from src.kernels import (
    K_minus, K_plus, P_minus_fn, P_plus_fn, P_tilde, P_tilde_continued, P_tilde_minus, P_tilde_plus,
    beta_P_minus, beta_P_plus, gauss_jacobi_rule, gauss_legendre_unit, jacobi_weight_integral,
    kernel_axial, kernel_integrand, kernel_limit_minus, kernel_limit_plus, select_regime,
    series_table, truncated_sum,
)
from src.validation import QuadratureSpec, SeriesTruncation
from tests.oracles import lattice_kernel, monte_carlo_kernel

KERNELS = {'plus': (K_plus, beta_P_plus), 'minus': (K_minus, beta_P_minus)}


def _points(rng, n, low, high, count=10):
    """|x| ∈ [low, high] 的随机点"""
    points = []
    for _ in range(count):
        raw = rng.normal(size=n + 1)
        raw *= rng.uniform(low, high) / np.linalg.norm(raw)
        points.append(Paravector.from_components(raw.tolist()))
    return points


def _relative_gap(value, reference):
    gap = np.subtract(value.components(), reference.components())
    return float(np.linalg.norm(gap) / np.linalg.norm(reference.components()))


class TestQuadrature:
    """求积规则测试类"""

    @pytest.mark.parametrize("alpha, expected", [
        (-0.5, math.pi), (0.0, 2.0), (0.5, math.pi / 2), (1.0, 4.0 / 3.0),
    ])
    def test_weight_integral(self, alpha, expected):
        """测试 ∫(1-ρ^2)^α dρ 的闭式与求积权重之和"""
        assert jacobi_weight_integral(alpha) == pytest.approx(expected, rel=1e-12)
        _, weights = gauss_jacobi_rule(alpha, 32)
        assert float(np.sum(weights)) == pytest.approx(expected, rel=1e-12)

    def test_rule_integrates_polynomials(self):
        """测试 N 点规则对 2N-1 次多项式精确"""
        nodes, weights = gauss_jacobi_rule(0.5, 8)
        # ∫ρ^2 (1-ρ^2)^{1/2} dρ = π/8
        assert float(np.sum(weights * nodes ** 2)) == pytest.approx(math.pi / 8, rel=1e-12)
        assert float(np.sum(weights * nodes ** 15)) == pytest.approx(0.0, abs=1e-14)

    def test_invalid_exponent(self):
        """测试 α <= -1 时报错"""
        with pytest.raises(DomainError):
            jacobi_weight_integral(-1.0)
        with pytest.raises(DomainError):
            gauss_jacobi_rule(-1.5, 8)

    def test_legendre_unit_interval(self):
        """测试 [0, 1] 上的 Gauss–Legendre 规则"""
        nodes, weights = gauss_legendre_unit(16)
        assert np.all((nodes > 0.0) & (nodes < 1.0))
        assert float(np.sum(weights)) == pytest.approx(1.0, rel=1e-14)
        assert float(np.sum(weights * nodes ** 3)) == pytest.approx(0.25, rel=1e-13)

    def test_rules_are_cached(self):
        """测试节点表只构造一次且只读"""
        first = gauss_jacobi_rule(0.0, 40)
        assert gauss_jacobi_rule(0.0, 40) is first
        assert not first[0].flags.writeable


class TestSphereKernels:
    """球面积分核测试类"""

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    @pytest.mark.parametrize("x0", [-2.0, -1.0, 0.5, 1.0, 3.0])
    def test_limits_on_axis(self, n, x0):
        """测试 r -> 0 时 K± 趋于闭式极限"""
        a_plus, b_plus = kernel_axial(n, 'plus', x0, 1e-4)
        a_minus, b_minus = kernel_axial(n, 'minus', x0, 1e-4)
        assert a_plus == pytest.approx(kernel_limit_plus(n, x0), abs=1e-6)
        assert a_minus == pytest.approx(kernel_limit_minus(n, x0), abs=1e-6)
        assert abs(b_plus) < 1e-3 and abs(b_minus) < 1e-3

    def test_limit_value(self):
        """测试 n=2, x0=1 时 K⁺ 的极限为 1/(4√2)"""
        assert kernel_limit_plus(2, 1.0) == pytest.approx(1.0 / (4.0 * math.sqrt(2.0)))
        assert kernel_limit_minus(3, 0.0) == pytest.approx(-2.0 / math.pi)

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("which", ['plus', 'minus'])
    @pytest.mark.parametrize("x0, r", [(0.3, 0.4), (1.2, 0.5), (-0.5, 1.6), (0.0, 2.5), (0.8, 0.0)])
    def test_matches_lattice_quadrature(self, n, which, x0, r):
        """测试与球面格点求积一致"""
        expected = lattice_kernel(n, which, x0, r)
        assert kernel_axial(n, which, x0, r) == pytest.approx(expected, abs=1e-4)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("which", ['plus', 'minus'])
    def test_matches_monte_carlo(self, n, which):
        """测试与蒙特卡罗积分一致"""
        for x0, r in [(0.2, 0.2), (-1.0, 1.8), (2.0, 0.5)]:
            expected = monte_carlo_kernel(n, which, x0, r)
            assert kernel_axial(n, which, x0, r) == pytest.approx(expected, abs=1e-2)

    def test_more_nodes_agree(self):
        """测试加密求积节点结果不变"""
        coarse = kernel_axial(4, 'minus', 0.2, 1.7, QuadratureSpec(node_count=64))
        fine = kernel_axial(4, 'minus', 0.2, 1.7, QuadratureSpec(node_count=256))
        assert coarse == pytest.approx(fine, rel=1e-12)

    def test_paravector_evaluation(self):
        """测试 K⁺ 的向量部分平行于 x̲"""
        x = Paravector(3, 0.3, (0.2, -0.4, 0.1))
        value = K_plus(3, x)
        a_val, b_val = kernel_axial(3, 'plus', 0.3, x.vector_norm())
        assert value.x0 == pytest.approx(a_val)
        assert value.vec[1] == pytest.approx(b_val * -0.4 / x.vector_norm())

    @pytest.mark.parametrize("which", ['plus', 'minus'])
    def test_kernels_are_monogenic(self, which):
        """测试 K± 的数值 Dirac 残差很小"""
        kernel, _ = KERNELS[which]
        for x in (Paravector(3, 0.2, (0.3, -0.1, 0.2)), Paravector(3, 1.1, (0.9, 0.6, -0.4))):
            residual, scale = dirac_stencil(lambda p: kernel(3, p), x)
            assert residual.norm() / scale < 1e-7

    def test_sphere_rejected(self):
        """测试单位球面上无定义"""
        with pytest.raises(DomainError):
            K_plus(3, Paravector(3, 0.0, (1.0, 0.0, 0.0)))
        with pytest.raises(DomainError):
            kernel_axial(2, 'minus', 0.0, 1.0)

    def test_invalid_arguments(self):
        """测试维度不一致与未知核类型"""
        with pytest.raises(DomainError):
            K_minus(3, Paravector(2, 0.5, (0.1, 0.1)))
        with pytest.raises(DomainError):
            kernel_axial(3, 'middle', 0.5, 0.5)


class TestSeriesTables:
    """级数系数表测试类"""

    def test_outer_plus_coefficients(self):
        """测试 P̃⁺ 外部系数 C_n b_k (-1)^{n-1} (2k)!/(2k+n-1)!"""
        table = series_table(3, 'plus', 'outer', 3)
        assert table.powers.tolist() == [-1, -3, -5]
        assert table.coeffs[0] == pytest.approx(1.0 / math.pi)
        # b_1 = -2：C_3 · (-2) · 2!/4!
        assert table.coeffs[1] == pytest.approx(-1.0 / (3.0 * math.pi))
        assert series_table(2, 'plus', 'outer', 1).coeffs[0] == pytest.approx(-0.5)

    def test_inner_minus_coefficients(self):
        """测试 P̃⁻ 内部首项 -C_n z^{n-1}/(n-1)!"""
        table = series_table(3, 'minus', 'inner', 2)
        assert table.powers.tolist() == [2, 4]
        assert table.coeffs[0] == pytest.approx(-1.0 / math.pi)
        # b_1 = -2：-C_3 · (-2) · 2!/4!
        assert table.coeffs[1] == pytest.approx(1.0 / (3.0 * math.pi))

    @pytest.mark.parametrize("n", [3, 5])
    @pytest.mark.parametrize("which", ['plus', 'minus'])
    @pytest.mark.parametrize("regime", ['inner', 'outer'])
    def test_odd_dimension_tables_are_finite(self, n, which, regime):
        """测试奇数 n（二项式上参数为负整数）时系数全部有限且符号交替"""
        table = series_table(n, which, regime, 50)
        assert np.all(np.isfinite(table.coeffs))
        assert np.all(table.coeffs != 0.0)
        signs = np.sign(table.coeffs)
        assert np.all(signs[1:] == -signs[:-1])

    def test_indices_follow_monomial_theorem(self):
        """测试内部指数映为 P^(m)，外部映为 P^(-k)"""
        inner = series_table(4, 'plus', 'inner', 3)
        outer = series_table(4, 'minus', 'outer', 3)
        assert inner.indices.tolist() == [1, 3, 5]
        assert outer.indices.tolist() == [-2, -4, -6]

    def test_tables_are_cached_and_frozen(self):
        """测试系数表缓存且只读"""
        table = series_table(5, 'minus', 'inner', 50)
        assert series_table(5, 'minus', 'inner', 50) is table
        assert not table.coeffs.flags.writeable

    def test_invalid_arguments(self):
        """测试未知的核类型或区域"""
        with pytest.raises(DomainError):
            series_table(3, 'both', 'inner', 5)
        with pytest.raises(DomainError):
            series_table(3, 'plus', 'middle', 5)


class TestSeriesEvaluation:
    """级数求值测试类"""

    def test_regime_selection(self):
        """测试 |z| 与拒绝环带"""
        assert select_regime(0.5, 1e-3) == 'inner'
        assert select_regime(1.5, 1e-3) == 'outer'
        with pytest.raises(RegionError):
            select_regime(1.0, 1e-3)
        with pytest.raises(RegionError):
            P_tilde_plus(3, ComplexPoint(1.0005, 0.0))

    def test_truncated_sum_geometric(self):
        """测试几何级数按容差截断"""
        truncation = SeriesTruncation(max_terms=500, tol=1e-14)
        total = truncated_sum(lambda a, b: 0.5 ** np.arange(a, b, dtype=float), truncation)
        assert float(total) == pytest.approx(2.0, rel=1e-13)

    def test_truncated_sum_divergent(self):
        """测试发散级数在 max_terms 内未收敛时报错"""
        with pytest.raises(RegionError):
            truncated_sum(lambda a, b: np.ones(b - a), SeriesTruncation(max_terms=300))

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    @pytest.mark.parametrize("which", ['plus', 'minus'])
    def test_derivative_recovers_integrand(self, n, which):
        """测试 P̃± 的 n-1 阶导数就是 h±（内部与外部，外部取 Re z > 0）"""
        for z in (ComplexPoint(0.3, 0.4), ComplexPoint(2.0, 0.0), ComplexPoint(1.5, 1.0)):
            value = complex(P_tilde(n, which, z, derivative=n - 1))
            expected = complex(kernel_integrand(n, which, np.array([complex(z)]))[0])
            assert value == pytest.approx(expected, rel=1e-10, abs=1e-14)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    @pytest.mark.parametrize("which", ['plus', 'minus'])
    def test_continuation_matches_inner_series(self, n, which):
        """测试 |z| < 1 时线段积分延拓与内部级数一致"""
        z = ComplexPoint(0.5, 0.3)
        for j in range(n):
            series = complex(P_tilde(n, which, z, derivative=j))
            continued = complex(P_tilde_continued(n, which, z, derivative=j))
            assert continued == pytest.approx(series, rel=1e-10, abs=1e-14)

    @pytest.mark.parametrize("n", [3, 5])
    def test_branches_differ_by_polynomial(self, n):
        """测试 |z| > 1 时延拓与外部级数相差次数不超过 n-2 的实多项式"""
        differences = []
        for z in (ComplexPoint(1.5, 0.0), ComplexPoint(2.0, 0.5), ComplexPoint(-1.8, 0.7)):
            continued = complex(P_tilde_continued(n, 'plus', z, derivative=n - 2))
            outer = complex(P_tilde(n, 'plus', z, derivative=n - 2))
            differences.append(continued - outer)
        assert differences[0].imag == pytest.approx(0.0, abs=1e-10)
        assert differences[1] == pytest.approx(differences[0], abs=1e-10)
        assert differences[2] == pytest.approx(differences[0], abs=1e-10)

    def test_continuation_derivative_range(self):
        """测试延拓只支持 0..n-1 阶导数"""
        with pytest.raises(DomainError):
            P_tilde_continued(3, 'plus', ComplexPoint(0.5, 0.0), derivative=3)
        with pytest.raises(DomainError):
            P_tilde(3, 'plus', ComplexPoint(0.5, 0.0), derivative=-1)

    @pytest.mark.parametrize("which", ['plus', 'minus'])
    def test_conjugate_symmetry(self, which):
        """测试 P̃(z̄) = conj(P̃(z))"""
        for z in (ComplexPoint(0.4, 0.3), ComplexPoint(-1.5, 2.0)):
            value = complex(P_tilde(3, which, z))
            mirrored = complex(P_tilde(3, which, z.conjugate()))
            assert mirrored == pytest.approx(value.conjugate(), rel=1e-13, abs=1e-15)

    def test_real_axis_values_are_real(self):
        """测试实轴上取实值"""
        assert P_tilde_minus(4, ComplexPoint(0.6, 0.0)).im == pytest.approx(0.0, abs=1e-15)

    def test_normalized_kernels(self):
        """测试 P± = P̃± / λ'_n"""
        z = ComplexPoint(0.2, 0.5)
        scale = DimensionConstants.for_dimension(3).lambda_prime_n
        assert complex(P_plus_fn(3, z)) * scale == pytest.approx(complex(P_tilde_plus(3, z)))
        assert complex(P_minus_fn(3, z)) * scale == pytest.approx(complex(P_tilde_minus(3, z)))

    def test_origin_of_inner_series(self):
        """测试 z = 0 处只保留常数项"""
        assert complex(P_tilde(3, 'minus', ComplexPoint(0, 0))) == 0.0
        # P̃⁻_3 = -C_3 z^2/2 + ...，二阶导数在 0 处为 -C_3
        value = complex(P_tilde(3, 'minus', ComplexPoint(0, 0), derivative=2))
        assert value == pytest.approx(-2.0 / math.pi)


class TestBetaOfKernels:
    """β(P±) = K± 测试类"""

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("which", ['plus', 'minus'])
    def test_outside_unit_sphere(self, n, which, rng):
        """测试 |x| ∈ [1.5, 3] 时 β(P±) 与 K± 一致"""
        kernel, beta = KERNELS[which]
        for x in _points(rng, n, 1.5, 3.0):
            assert _relative_gap(beta(n, x), kernel(n, x)) <= 1e-6

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("which", ['plus', 'minus'])
    def test_inside_unit_sphere(self, n, which, rng):
        """测试 |x| <= 0.7 时 β(P±) 与 K± 一致"""
        kernel, beta = KERNELS[which]
        for x in _points(rng, n, 0.1, 0.7):
            assert _relative_gap(beta(n, x), kernel(n, x)) <= 1e-6

    def test_annulus_rejected(self):
        """测试 |x| ≈ 1 时级数拒绝求值"""
        with pytest.raises(RegionError):
            beta_P_plus(3, Paravector(3, 0.0, (1.0002, 0.0, 0.0)))

    def test_dimension_mismatch(self):
        """测试点的维度与 n 不一致"""
        with pytest.raises(DomainError):
            beta_P_minus(3, Paravector(4, 0.1, (0.1, 0.1, 0.1, 0.1)))
