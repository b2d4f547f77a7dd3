# 逆Fueter映射模块
"""
由轴向单演函数 f = A + ωB 重建 holomorphic intrinsic 函数 f0：

f0(z) = ∮ P⁻((z-y0)/r) r^{n-2} [dy0 A - dr B] - ∮ P⁺((z-y0)/r) r^{n-2} [dy0 B + dr A]

围道是 (y0, r) 上半平面中的圆，按角度参数化后用周期梯形公式求积。
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.core.clifford import Paravector, check_dimension
from src.core.constants import DimensionConstants
from src.core.errors import ConfigError, DomainError, NonIntrinsicError, RegionError
from src.fueter_map import beta_from_jet, beta_series
from src.intrinsic import ComplexPoint, LaurentSeries
from src.kernels import P_tilde, P_tilde_continued, select_regime
from src.validation import ContourSpec, InverseSettings, SeriesTruncation

logger = logging.getLogger(__name__)

AxialFunction = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


class AxialSampler:
    """在围道节点上给出 (A(y0, r), B(y0, r)) 的采样器"""

    def __init__(self, func: AxialFunction, n: int, name: str = "callable", is_zero: bool = False):
        self.func = func
        self.n = n
        self.name = name
        self.is_zero = is_zero

    @classmethod
    def zero(cls, n: int) -> 'AxialSampler':
        def func(y0, r):
            return np.zeros_like(y0, dtype=float), np.zeros_like(r, dtype=float)
        return cls(func, n, name="zero", is_zero=True)

    @classmethod
    def from_series(cls, f: LaurentSeries, n: int,
                    truncation: Optional[SeriesTruncation] = None) -> 'AxialSampler':
        """采样 β(f0)；f0 全部落在 β 的核中时为零采样器"""
        if all(0 <= l <= n - 2 for l in f.coeffs):
            return cls.zero(n)
        truncation = truncation or SeriesTruncation()

        def func(y0, r):
            a_vals = np.empty(len(y0))
            b_vals = np.empty(len(y0))
            for i, (u, v) in enumerate(zip(y0, r)):
                x = Paravector(n, float(u), (float(v),) + (0.0,) * (n - 1))
                value = beta_series(f, n, x, truncation)
                a_vals[i] = value.x0
                b_vals[i] = value.vec[0]
            return a_vals, b_vals

        return cls(func, n, name="beta_series")

    @classmethod
    def from_function(cls, func: AxialFunction, n: int) -> 'AxialSampler':
        return cls(func, n)

    def sample(self, y0: np.ndarray, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        a_vals, b_vals = self.func(y0, r)
        a_vals = np.asarray(a_vals, dtype=float)
        b_vals = np.asarray(b_vals, dtype=float)
        if not (np.all(np.isfinite(a_vals)) and np.all(np.isfinite(b_vals))):
            raise DomainError(f"采样器 {self.name} 在围道上给出了非有限值")
        return a_vals, b_vals


class NodeStats(BaseModel):
    """单次求值的围道节点统计"""
    continued: int = 0
    annulus: int = 0


class InverseFueter:
    """
    逆 Fueter 积分器
    围道节点和采样值在构造时计算一次，之后可对多个 z 及各阶导数求值
    """

    def __init__(
        self,
        sampler: AxialSampler,
        contour: ContourSpec,
        n: int,
        truncation: Optional[SeriesTruncation] = None,
        settings: Optional[InverseSettings] = None,
    ):
        check_dimension(n, minimum=2)
        if sampler.n != n:
            raise DomainError(f"采样器维度 {sampler.n} 与 n={n} 不一致")
        self.n = n
        self.contour = contour
        self.truncation = truncation or SeriesTruncation()
        self.settings = settings or InverseSettings()
        self.logger = logging.getLogger(__name__)
        self.lambda_prime = DimensionConstants.for_dimension(n).lambda_prime_n

        samples = contour.samples
        theta = 2.0 * math.pi * np.arange(samples) / samples
        u0, r0 = contour.center
        radius = contour.radius
        self.y0 = u0 + radius * np.cos(theta)
        self.r = r0 + radius * np.sin(theta)
        step = 2.0 * math.pi / samples
        self.dy0 = -radius * np.sin(theta) * step
        self.dr = radius * np.cos(theta) * step

        self.is_zero = sampler.is_zero
        if self.is_zero:
            self.A = np.zeros(samples)
            self.B = np.zeros(samples)
        else:
            self.A, self.B = sampler.sample(self.y0, self.r)

    def _continued(self, which: str, w: complex, derivative: int) -> complex:
        return complex(P_tilde_continued(self.n, which, ComplexPoint.from_complex(w), derivative,
                                         self.settings.continuation_nodes))

    def _kernel(self, which: str, w: complex, derivative: int, stats: NodeStats) -> complex:
        """
        P̃^{(j)}(w)：|w| 接近 1 时用延拓分支，否则用级数

        各节点的分支选择只依赖 w，同一 z 的各阶导数因此使用同一分支；
        分支之间相差次数不超过 n-2 的多项式，β 作用后消失。
        只有级数区间的拒绝环带会转入延拓分支，级数本身的 RegionError 直接抛出
        """
        settings = self.settings
        modulus = abs(w)
        if settings.continuation and abs(modulus - 1.0) < settings.continuation_band:
            stats.continued += 1
            return self._continued(which, w, derivative)
        try:
            select_regime(modulus, self.truncation.delta)
        except RegionError as exc:
            if not settings.continuation:
                raise ConfigError(
                    f"围道节点映射到 |w| = {modulus:.6g}，落在级数拒绝环带内；"
                    f"请调整围道或启用 inverse.continuation",
                    details={"w": [w.real, w.imag]},
                ) from exc
            stats.continued += 1
            return self._continued(which, w, derivative)
        return complex(P_tilde(self.n, which, ComplexPoint.from_complex(w), self.truncation, derivative))

    def evaluate_with_stats(self, z: ComplexPoint, derivative: int = 0) -> Tuple[ComplexPoint, NodeStats]:
        """g0^{(j)}(z) 以及本次求值的节点统计；统计量只属于这一次调用"""
        if derivative < 0 or derivative > self.n - 1:
            raise DomainError(f"导数阶数必须在 0..{self.n - 1} 之间，收到 {derivative}")
        stats = NodeStats()
        if self.is_zero:
            return ComplexPoint(0.0, 0.0), stats
        z_value = complex(z)
        total = 0j
        for k in range(len(self.y0)):
            r_k = self.r[k]
            w = (z_value - self.y0[k]) / r_k
            if abs(abs(w) - 1.0) < self.truncation.delta:
                stats.annulus += 1
            weight = r_k ** (self.n - 2 - derivative)
            p_minus = self._kernel('minus', w, derivative, stats)
            p_plus = self._kernel('plus', w, derivative, stats)
            total += p_minus * weight * (self.dy0[k] * self.A[k] - self.dr[k] * self.B[k])
            total -= p_plus * weight * (self.dy0[k] * self.B[k] + self.dr[k] * self.A[k])
        if stats.continued:
            self.logger.debug(f"z={z_value}: {stats.continued} 次核求值使用了延拓分支")
        if stats.annulus:
            self.logger.warning(f"z={z_value}: {stats.annulus} 个节点落在级数拒绝环带内，已使用延拓分支")
        return ComplexPoint.from_complex(total / self.lambda_prime), stats

    def evaluate(self, z: ComplexPoint, derivative: int = 0) -> ComplexPoint:
        """g0^{(j)}(z)，j = derivative <= n-1"""
        value, _ = self.evaluate_with_stats(z, derivative)
        return value

    def jet(self, z: ComplexPoint, order: int) -> List[complex]:
        """g0 在 z 处的 0..order 阶导数"""
        return [complex(self.evaluate(z, j)) for j in range(order + 1)]

    def __call__(self, z: complex) -> complex:
        return complex(self.evaluate(ComplexPoint.from_complex(z)))


def inverse_fueter(
    f: AxialSampler,
    contour: ContourSpec,
    n: int,
    z: ComplexPoint,
    truncation: Optional[SeriesTruncation] = None,
    derivative: int = 0,
    settings: Optional[InverseSettings] = None,
) -> ComplexPoint:
    """单点求值的便捷入口"""
    return InverseFueter(f, contour, n, truncation, settings).evaluate(z, derivative)


def laurent_expand(
    g: Callable[[complex], complex],
    center: float,
    radius: float,
    l_range: Tuple[int, int],
    samples: int = 256,
    intrinsic_tol: float = 1e-8,
    inner_radius: Optional[float] = None,
    outer_radius: Optional[float] = None,
) -> LaurentSeries:
    """
    a_l = (2πi)^{-1} ∮ g(z) (z-a)^{-l-1} dz，在 |z-a| = radius 上用梯形公式

    系数虚部超过 intrinsic_tol（相对 max(1, max|a_l|)）时报 NonIntrinsicError
    """
    l_min, l_max = l_range
    if l_min > l_max:
        raise DomainError(f"指数范围为空: {l_range}")
    if radius <= 0.0:
        raise DomainError(f"展开半径必须为正: {radius}")
    theta = 2.0 * math.pi * np.arange(samples) / samples
    offsets = radius * np.exp(1j * theta)
    values = np.array([complex(g(center + offset)) for offset in offsets])
    if not np.all(np.isfinite(values)):
        raise DomainError("被展开函数在圆上给出了非有限值")

    exponents = np.arange(l_min, l_max + 1)
    coefficients = np.array([np.mean(values * offsets ** (-float(l))) for l in exponents])
    scale = max(1.0, float(np.max(np.abs(coefficients))))
    residue = float(np.max(np.abs(coefficients.imag)))
    if residue > intrinsic_tol * scale:
        raise NonIntrinsicError(
            f"Laurent 系数虚部 {residue:.3g} 超过容差，函数不是 intrinsic 的",
            details={"imaginary_residue": residue, "tolerance": intrinsic_tol},
        )
    coeffs = {int(l): float(c.real) for l, c in zip(exponents, coefficients)}
    if inner_radius is None:
        inner_radius = radius if l_min < 0 else 0.0
    logger.debug(f"laurent_expand: center={center}, radius={radius}, 虚部残差 {residue:.3g}")
    return LaurentSeries(center=center, coeffs=coeffs, inner_radius=inner_radius,
                         outer_radius=outer_radius)


class PointDeviation(BaseModel):
    x0: float
    r: float
    constant: Optional[float] = None
    deviation: float = 0.0


class RoundtripReport(BaseModel):
    """β(重建的 g0) 与 β(f0) 的比较结果"""
    n: int
    samples: int
    zero_function: bool = False
    points: List[PointDeviation] = Field(default_factory=list)
    mean_constant: Optional[float] = None
    relative_spread: float = 0.0
    max_relative_deviation: float = 0.0
    spread_tol: float = 1e-3
    passed: bool = True


def _axial_components(value: Paravector, x: Paravector) -> Tuple[float, float]:
    r = x.vector_norm()
    b_val = sum(float(v) * float(u) for v, u in zip(value.vec, x.vec)) / r
    return float(value.x0), b_val


def roundtrip_check(
    f0: LaurentSeries,
    n: int,
    contour: ContourSpec,
    test_points: Sequence[Paravector],
    truncation: Optional[SeriesTruncation] = None,
    settings: Optional[InverseSettings] = None,
    spread_tol: float = 1e-3,
) -> RoundtripReport:
    """
    f0 -> β(f0) 在围道上采样 -> 逆映射得到 g0 -> 在测试点比较 β(g0) 与 β(f0)

    β(g0) 由 g0 的 jet 逐点计算，只适用于奇数 n；每个点拟合比例常数
    c = <β(g0), β(f0)> / |β(f0)|²
    """
    check_dimension(n, minimum=2)
    if n % 2 == 0:
        raise DomainError(f"往返检验需要局部的 β，只支持奇数 n，收到 n={n}")
    truncation = truncation or SeriesTruncation()
    sampler = AxialSampler.from_series(f0, n, truncation)
    solver = InverseFueter(sampler, contour, n, truncation, settings)

    g_values = []
    f_values = []
    for x in test_points:
        if x.n != n:
            raise DomainError(f"测试点维度 {x.n} 与 n={n} 不一致")
        x = x.to_float()
        x0, r = x.x0, x.vector_norm()
        if r <= 0.0 or not contour.contains(x0, r):
            raise DomainError(f"测试点 (x0={x0}, r={r}) 不在围道所围区域内",
                              details={"x0": x0, "r": r})
        jet = solver.jet(ComplexPoint(x0, r), n - 1)
        g_values.append(beta_from_jet(jet, n, x0, r))
        if sampler.is_zero:
            f_values.append((0.0, 0.0))
        else:
            f_values.append(_axial_components(beta_series(f0, n, x, truncation), x))

    report = RoundtripReport(n=n, samples=contour.samples, spread_tol=spread_tol)
    g_arr = np.array(g_values)
    f_arr = np.array(f_values)
    f_norms = np.linalg.norm(f_arr, axis=1)
    coords = [(p.x0, p.vector_norm()) for p in (q.to_float() for q in test_points)]

    if np.all(f_norms == 0.0):
        deviations = np.linalg.norm(g_arr, axis=1)
        report.zero_function = True
        report.points = [PointDeviation(x0=x0, r=r, deviation=float(d))
                         for (x0, r), d in zip(coords, deviations)]
        report.max_relative_deviation = float(np.max(deviations))
        report.passed = report.max_relative_deviation <= spread_tol
        return report

    if np.any(f_norms == 0.0):
        raise DomainError("β(f0) 在部分测试点为零，无法拟合比例常数")
    constants = np.sum(g_arr * f_arr, axis=1) / f_norms ** 2
    mean = float(np.mean(constants))
    spread = float(np.std(constants) / abs(mean)) if mean != 0.0 else math.inf
    deviations = np.linalg.norm(g_arr - mean * f_arr, axis=1) / f_norms

    report.points = [PointDeviation(x0=x0, r=r, constant=float(c), deviation=float(d))
                     for (x0, r), c, d in zip(coords, constants, deviations)]
    report.mean_constant = mean
    report.relative_spread = spread
    report.max_relative_deviation = float(np.max(deviations))
    report.passed = spread < spread_tol
    if abs(mean - 1.0) > spread_tol:
        logger.warning(f"往返比例常数 {mean:.12g} 与 1 不一致")
    logger.info(f"往返检验 n={n}: 常数 {mean:.12g}, 相对离散度 {spread:.3g}")
    return report
