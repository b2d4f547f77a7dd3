#!/usr/bin/env python3
"""
逆Fueter映射测试模块
测试围道采样、逆积分器、Laurent 展开以及往返检验
"""

import logging
import math

import numpy as np
import pytest

from src.core.clifford import Paravector
from src.core.errors import ConfigError, DomainError, NonIntrinsicError, RegionError
from src.intrinsic import ComplexPoint, LaurentSeries
from src.inverse_fueter import (
    AxialSampler, InverseFueter, inverse_fueter, laurent_expand, roundtrip_check,
)
from src.validation import ContourSpec, InverseSettings, SeriesTruncation


def _test_points(n, count=8, spread=0.25):
    """围道圆心 (0, 2) 附近的测试点，方向各不相同"""
    points = []
    for k in range(count):
        phi = 2.0 * math.pi * k / count
        x0 = spread * math.cos(phi)
        r = 2.0 + spread * math.sin(phi)
        direction = (math.cos(phi), math.sin(phi)) + (0.0,) * (n - 2)
        points.append(Paravector(n, x0, tuple(r * d for d in direction)))
    return points


class TestAxialSampler:
    """围道采样器测试类"""

    def test_zero_sampler(self):
        """测试零采样器"""
        sampler = AxialSampler.zero(3)
        a_vals, b_vals = sampler.sample(np.array([0.0, 1.0]), np.array([1.0, 2.0]))
        assert sampler.is_zero
        assert not a_vals.any() and not b_vals.any()

    def test_kernel_series_gives_zero_sampler(self):
        """测试 f0 落在 β 的核中时得到零采样器"""
        sampler = AxialSampler.from_series(LaurentSeries(coeffs={0: 2.0, 1: -1.0}), 3)
        assert sampler.is_zero

    def test_series_sampler(self):
        """测试 β(z^3) 的采样值：n=3 时 A = 12 y0，B = 4 r"""
        sampler = AxialSampler.from_series(LaurentSeries.monomial(3), 3)
        a_vals, b_vals = sampler.sample(np.array([0.5, -0.2]), np.array([1.5, 2.0]))
        assert a_vals == pytest.approx(np.array([6.0, -2.4]))
        assert b_vals == pytest.approx(np.array([6.0, 8.0]))

    def test_non_finite_samples_rejected(self):
        """测试非有限采样值报错"""
        sampler = AxialSampler.from_function(lambda y0, r: (np.full(len(y0), np.nan), r), 3)
        with pytest.raises(DomainError):
            sampler.sample(np.array([0.0]), np.array([1.0]))


class TestInverseFueter:
    """逆积分器测试类"""

    def test_zero_function(self, roundtrip_contour):
        """测试零函数的逆映射为零"""
        solver = InverseFueter(AxialSampler.zero(3), roundtrip_contour, 3)
        assert complex(solver.evaluate(ComplexPoint(0.1, 2.0))) == 0.0

    def test_dimension_mismatch(self, roundtrip_contour):
        """测试采样器维度与 n 不一致"""
        with pytest.raises(DomainError):
            InverseFueter(AxialSampler.zero(3), roundtrip_contour, 5)

    def test_derivative_range(self, roundtrip_contour):
        """测试导数阶数超出 0..n-1"""
        solver = InverseFueter(AxialSampler.from_series(LaurentSeries.monomial(3), 3), roundtrip_contour, 3)
        with pytest.raises(DomainError):
            solver.evaluate(ComplexPoint(0.0, 2.0), derivative=3)

    def test_highest_derivative_is_proportional(self, roundtrip_contour):
        """测试重建函数的 n-1 阶导数与 f0 的导数成比例（f0 = z^3，n=3）"""
        solver = InverseFueter(AxialSampler.from_series(LaurentSeries.monomial(3), 3), roundtrip_contour, 3)
        ratios = []
        for z in (0.1 + 2.0j, -0.2 + 2.1j, 0.15 + 1.8j):
            value = complex(solver.evaluate(ComplexPoint.from_complex(z), derivative=2))
            ratios.append(value / (6.0 * z))
        assert ratios[1] == pytest.approx(ratios[0], rel=1e-8)
        assert ratios[2] == pytest.approx(ratios[0], rel=1e-8)

    def test_spectral_convergence(self):
        """测试 n-1 阶导数随采样点数的谱收敛（128 与 256 个点）"""
        f0 = LaurentSeries.monomial(-1, inner_radius=0.1)
        z = ComplexPoint(0.1, 2.05)
        values = []
        for samples in (128, 256):
            contour = ContourSpec(center=(0.0, 2.0), radius=0.5, samples=samples)
            values.append(complex(inverse_fueter(AxialSampler.from_series(f0, 3), contour, 3, z, derivative=2)))
        assert abs(values[0] - values[1]) <= 1e-9 * max(1.0, abs(values[1]))

    def test_jet_and_call(self, roundtrip_contour):
        """测试 jet 与单点调用一致"""
        solver = InverseFueter(AxialSampler.from_series(LaurentSeries.monomial(3), 3), roundtrip_contour, 3)
        jet = solver.jet(ComplexPoint(0.05, 2.1), 2)
        assert len(jet) == 3
        assert solver(0.05 + 2.1j) == pytest.approx(jet[0])

    def test_continuation_disabled(self, roundtrip_contour):
        """测试关闭延拓时节点落入拒绝环带报配置错误"""
        solver = InverseFueter(
            AxialSampler.from_series(LaurentSeries.monomial(3), 3), roundtrip_contour, 3,
            truncation=SeriesTruncation(delta=0.05),
            settings=InverseSettings(continuation=False),
        )
        with pytest.raises(ConfigError):
            solver.evaluate(ComplexPoint(0.0, 2.0))

    def test_annulus_nodes_logged(self, roundtrip_contour, caplog):
        """测试落入拒绝环带的节点被计数并记录警告"""
        solver = InverseFueter(
            AxialSampler.from_series(LaurentSeries.monomial(3), 3), roundtrip_contour, 3,
            truncation=SeriesTruncation(delta=0.05),
        )
        with caplog.at_level(logging.WARNING, logger='src.inverse_fueter'):
            _, stats = solver.evaluate_with_stats(ComplexPoint(0.0, 2.0))
        assert stats.annulus > 0
        assert stats.continued >= 2 * stats.annulus
        assert any('拒绝环带' in record.getMessage() for record in caplog.records)

    def test_node_stats_are_per_call(self, roundtrip_contour):
        """测试节点统计只属于单次调用，求值不修改积分器状态"""
        solver = InverseFueter(
            AxialSampler.from_series(LaurentSeries.monomial(3), 3), roundtrip_contour, 3,
            truncation=SeriesTruncation(delta=0.05),
        )
        _, first = solver.evaluate_with_stats(ComplexPoint(0.0, 2.0))
        _, second = solver.evaluate_with_stats(ComplexPoint(0.0, 2.0))
        assert first == second
        assert first is not second
        assert not hasattr(solver, 'annulus_nodes')

    def test_series_failure_is_not_continued(self, roundtrip_contour):
        """测试级数未收敛时直接报 RegionError，不转入延拓分支"""
        solver = InverseFueter(
            AxialSampler.from_series(LaurentSeries.monomial(3), 3), roundtrip_contour, 3,
            truncation=SeriesTruncation(max_terms=3),
        )
        with pytest.raises(RegionError):
            solver.evaluate(ComplexPoint(0.0, 2.0))

    def test_non_finite_series_is_not_continued(self, roundtrip_contour, mocker):
        """测试级数项非有限时直接报 RegionError"""
        solver = InverseFueter(
            AxialSampler.from_series(LaurentSeries.monomial(3), 3), roundtrip_contour, 3)
        mocker.patch('src.inverse_fueter.P_tilde', side_effect=RegionError("级数项不是有限数"))
        continued = mocker.spy(solver, '_continued')
        with pytest.raises(RegionError):
            solver.evaluate(ComplexPoint(0.0, 2.0))
        assert continued.call_count < 2 * roundtrip_contour.samples


class TestLaurentExpand:
    """Laurent展开测试类"""

    def test_square(self):
        """测试 z^2 的展开"""
        series = laurent_expand(lambda z: z * z, center=0.0, radius=1.0, l_range=(-2, 4), samples=64)
        assert series.coeffs[2] == pytest.approx(1.0)
        assert all(abs(c) < 1e-12 for l, c in series.coeffs.items() if l != 2)
        assert series.inner_radius == 1.0

    def test_reciprocal_with_shifted_center(self):
        """测试 1/(z-1) 在中心 1 处的展开"""
        series = laurent_expand(lambda z: 1.0 / (z - 1.0), center=1.0, radius=0.5, l_range=(-3, 3), samples=64)
        assert series.center == 1.0
        assert series.coeffs[-1] == pytest.approx(1.0)
        assert all(abs(c) < 1e-12 for l, c in series.coeffs.items() if l != -1)

    def test_non_intrinsic_rejected(self):
        """测试复系数函数报 NonIntrinsicError"""
        with pytest.raises(NonIntrinsicError):
            laurent_expand(lambda z: 1j * z, center=0.0, radius=1.0, l_range=(0, 3), samples=32)

    def test_invalid_arguments(self):
        """测试空指数范围与非正半径"""
        with pytest.raises(DomainError):
            laurent_expand(lambda z: z, center=0.0, radius=1.0, l_range=(3, 1))
        with pytest.raises(DomainError):
            laurent_expand(lambda z: z, center=0.0, radius=0.0, l_range=(0, 1))


class TestRoundtrip:
    """往返检验测试类"""

    @pytest.mark.parametrize("f0", [
        LaurentSeries.monomial(-1, inner_radius=0.1),
        LaurentSeries.monomial(3),
    ], ids=['reciprocal', 'cube'])
    def test_roundtrip_in_dimension_three(self, f0, roundtrip_contour):
        """测试 n=3 时 β(g0) = β(f0)：比例常数在 8 个测试点上都等于 1"""
        report = roundtrip_check(f0, 3, roundtrip_contour, _test_points(3))
        assert report.passed
        assert report.relative_spread < 1e-3
        assert report.mean_constant == pytest.approx(1.0, rel=1e-6)
        assert len(report.points) == 8

    def test_zero_function(self, roundtrip_contour):
        """测试 f0 在 β 的核中时报告零函数"""
        report = roundtrip_check(LaurentSeries(coeffs={1: 1.0}), 3, roundtrip_contour, _test_points(3, count=2))
        assert report.zero_function
        assert report.passed

    def test_even_dimension_rejected(self, roundtrip_contour):
        """测试偶数 n 报错"""
        with pytest.raises(DomainError):
            roundtrip_check(LaurentSeries.monomial(3), 4, roundtrip_contour, _test_points(4))

    def test_point_outside_contour(self, roundtrip_contour):
        """测试测试点不在围道内"""
        with pytest.raises(DomainError):
            roundtrip_check(LaurentSeries.monomial(3), 3, roundtrip_contour, [Paravector(3, 1.0, (2.0, 0.0, 0.0))])
