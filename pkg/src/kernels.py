# 核函数模块
"""
球面积分核 K±_n 与 intrinsic 核 P̃±_n / P±_n

K±_n 通过 ω̲ = ρ ω_x + sqrt(1-ρ^2) ω' 把 S^{n-1} 上的积分约化为 [-1, 1] 上带权
(1-ρ^2)^{(n-3)/2} 的一维积分，用 Gauss–Jacobi 求积计算；ω' 方向的分量在 S^{n-2} 上平均为零。

P̃±_n 是 h±(z) = ±C_n z^{0|1} / (1+z^2)^{(n+1)/2} 的 (n-1) 重原函数，
在 |z| < 1 与 |z| > 1 两个区域分别用幂级数表示，积分常数取零。
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import gammaln, roots_jacobi, roots_legendre
from scipy.special import gamma as gamma_fn

from src.core.cache_manager import TableCache
from src.core.clifford import Paravector, check_dimension
from src.core.constants import DimensionConstants
from src.core.errors import DomainError, RegionError
from src.fueter_map import axial_to_paravector, minus_axial, monomial_index, plus_axial
from src.intrinsic import ComplexPoint
from src.validation import QuadratureSpec, SeriesTruncation

logger = logging.getLogger(__name__)

SPHERE_TOLERANCE = 1e-9
CHUNK_SIZE = 128

_quadrature_cache = TableCache('quadrature_nodes')
_series_cache = TableCache('series_coefficients')


# 求积

def jacobi_weight_integral(alpha: float) -> float:
    """∫_{-1}^{1} (1-ρ^2)^α dρ = √π Γ(α+1) / Γ(α+3/2)"""
    if alpha <= -1:
        raise DomainError(f"权函数指数必须大于 -1，收到 α={alpha}")
    return math.sqrt(math.pi) * gamma_fn(alpha + 1.0) / gamma_fn(alpha + 1.5)


def gauss_jacobi_rule(alpha: float, node_count: int) -> Tuple[np.ndarray, np.ndarray]:
    """权函数 (1-ρ^2)^α 的 Gauss–Jacobi 节点和权重，按 (α, N) 缓存"""
    if alpha <= -1:
        raise DomainError(f"权函数指数必须大于 -1，收到 α={alpha}")

    def build():
        nodes, weights = roots_jacobi(node_count, alpha, alpha)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        return nodes, weights

    return _quadrature_cache.get_or_create(('jacobi', float(alpha), node_count), build)


def gauss_legendre_unit(node_count: int) -> Tuple[np.ndarray, np.ndarray]:
    """[0, 1] 上的 Gauss–Legendre 规则"""

    def build():
        nodes, weights = roots_legendre(node_count)
        nodes = 0.5 * (nodes + 1.0)
        weights = 0.5 * weights
        nodes.setflags(write=False)
        weights.setflags(write=False)
        return nodes, weights

    return _quadrature_cache.get_or_create(('legendre01', node_count), build)


# 球面积分核

def _kernel_setup(n: int, x: Paravector) -> Tuple[float, float]:
    check_dimension(n, minimum=2)
    if x.n != n:
        raise DomainError(f"点的维度 {x.n} 与 n={n} 不一致")
    x = x.to_float()
    x0, r = x.x0, x.vector_norm()
    distance = math.hypot(r - 1.0, x0)
    if distance < SPHERE_TOLERANCE:
        raise DomainError(f"点距单位球面 {distance:.3g}，K±_n 在球面上无定义",
                          details={"x0": x0, "r": r})
    return x0, r


def kernel_axial(n: int, which: str, x0: float, r: float,
                 quadrature: Optional[QuadratureSpec] = None) -> Tuple[float, float]:
    """
    K±_n 的轴向分量 (A, B)

    K⁺ = (ω_{n-2}/ω_n) ∫ [x0 - (r-ρ) ω] w(ρ) dρ / (x0²+1+r²-2rρ)^{(n+1)/2}
    K⁻ = (ω_{n-2}/ω_n) ∫ [x0 ρ ω + (rρ-1)] w(ρ) dρ / (同上)
    """
    quadrature = quadrature or QuadratureSpec()
    check_dimension(n, minimum=2)
    if math.hypot(r - 1.0, x0) < SPHERE_TOLERANCE:
        raise DomainError("K±_n 在单位球面上无定义", details={"x0": x0, "r": r})
    constants = DimensionConstants.for_dimension(n)
    nodes, weights = gauss_jacobi_rule((n - 3) / 2, quadrature.node_count)
    factor = constants.omega_n_minus_2 / constants.omega_n
    denominator = (x0 * x0 + 1.0 + r * r - 2.0 * r * nodes) ** ((n + 1) / 2)
    scaled = factor * weights / denominator
    if which == 'plus':
        return float(np.sum(scaled) * x0), float(-np.sum(scaled * (r - nodes)))
    if which == 'minus':
        return float(np.sum(scaled * (r * nodes - 1.0))), float(np.sum(scaled * nodes) * x0)
    raise DomainError(f"未知的核类型: {which!r}")


def K_plus(n: int, x: Paravector, quadrature: Optional[QuadratureSpec] = None) -> Paravector:
    """K⁺_n(x) = ∫_{S^{n-1}} E(x - ω̲) dS(ω̲)"""
    x0, r = _kernel_setup(n, x)
    a_val, b_val = kernel_axial(n, 'plus', x0, r, quadrature)
    return axial_to_paravector(x.to_float(), a_val, b_val)


def K_minus(n: int, x: Paravector, quadrature: Optional[QuadratureSpec] = None) -> Paravector:
    """K⁻_n(x) = ∫_{S^{n-1}} E(x - ω̲) ω̲ dS(ω̲)"""
    x0, r = _kernel_setup(n, x)
    a_val, b_val = kernel_axial(n, 'minus', x0, r, quadrature)
    return axial_to_paravector(x.to_float(), a_val, b_val)


def kernel_limit_plus(n: int, x0: float) -> float:
    """r -> 0 时 K⁺_n 的极限 C_n x0 / (x0²+1)^{(n+1)/2}"""
    c_n = DimensionConstants.for_dimension(n).C_n
    return c_n * x0 / (x0 * x0 + 1.0) ** ((n + 1) / 2)


def kernel_limit_minus(n: int, x0: float) -> float:
    """r -> 0 时 K⁻_n 的极限 -C_n / (x0²+1)^{(n+1)/2}"""
    c_n = DimensionConstants.for_dimension(n).C_n
    return -c_n / (x0 * x0 + 1.0) ** ((n + 1) / 2)


# intrinsic 核的级数

@dataclass(frozen=True)
class SeriesTable:
    """P̃±_n 在一个区域内的级数：Σ coeffs[k] z^{powers[k]}，β 将 z^{powers[k]} 映为 P^(indices[k])"""
    n: int
    which: str
    regime: str
    powers: np.ndarray
    coeffs: np.ndarray
    indices: np.ndarray


def _factorial_ratio(top: np.ndarray, bottom: np.ndarray) -> np.ndarray:
    """top! / bottom!"""
    return np.exp(gammaln(top + 1.0) - gammaln(bottom + 1.0))


def _binomial_negative_half(n: int, k: np.ndarray) -> np.ndarray:
    """
    binom(-(n+1)/2, k)，在对数空间中计算 (μ)_k / k!

    n 为奇数时上参数是负整数，广义二项式系数仍是有限数
    """
    mu = (n + 1) / 2.0
    magnitude = np.exp(gammaln(mu + k) - gammaln(mu) - gammaln(k + 1.0))
    return np.where(k % 2 == 0, 1.0, -1.0) * magnitude


def series_table(n: int, which: str, regime: str, max_terms: int) -> SeriesTable:
    """
    级数系数表，b_k = binom(-(n+1)/2, k) = (-1)^k (μ)_k / k!，μ = (n+1)/2：

    P̃⁺ 内部：C_n b_k (2k+1)!/(2k+n)! z^{2k+n}
    P̃⁺ 外部：C_n b_k (-1)^{n-1} (2k)!/(2k+n-1)! z^{-(2k+1)}
    P̃⁻ 内部：-C_n b_k (2k)!/(2k+n-1)! z^{2k+n-1}
    P̃⁻ 外部：-C_n b_k (-1)^{n-1} (2k+1)!/(2k+n)! z^{-(2k+2)}
    """
    check_dimension(n, minimum=2)
    if which not in ('plus', 'minus'):
        raise DomainError(f"未知的核类型: {which!r}")
    if regime not in ('inner', 'outer'):
        raise DomainError(f"未知的级数区域: {regime!r}")

    def build() -> SeriesTable:
        k = np.arange(max_terms, dtype=float)
        c_n = DimensionConstants.for_dimension(n).C_n
        b = _binomial_negative_half(n, k)
        sign = -1.0 if (n - 1) % 2 else 1.0
        if which == 'plus' and regime == 'inner':
            powers = 2 * k + n
            coeffs = c_n * b * _factorial_ratio(2 * k + 1, 2 * k + n)
        elif which == 'plus':
            powers = -(2 * k + 1)
            coeffs = c_n * b * sign * _factorial_ratio(2 * k, 2 * k + n - 1)
        elif regime == 'inner':
            powers = 2 * k + n - 1
            coeffs = -c_n * b * _factorial_ratio(2 * k, 2 * k + n - 1)
        else:
            powers = -(2 * k + 2)
            coeffs = -c_n * b * sign * _factorial_ratio(2 * k + 1, 2 * k + n)
        powers = powers.astype(int)
        indices = np.array([monomial_index(int(p), n) for p in powers], dtype=int)
        for array in (powers, coeffs, indices):
            array.setflags(write=False)
        return SeriesTable(n, which, regime, powers, coeffs, indices)

    return _series_cache.get_or_create((n, which, regime, max_terms), build)


def select_regime(modulus: float, delta: float) -> str:
    """|z| <= 1-δ 为内部，|z| >= 1+δ 为外部，其余拒绝"""
    if modulus <= 1.0 - delta:
        return 'inner'
    if modulus >= 1.0 + delta:
        return 'outer'
    raise RegionError(
        f"|z| = {modulus:.6g} 落在 |z| = 1 附近的拒绝环带内 (δ = {delta})",
        details={"modulus": modulus, "delta": delta},
    )


def truncated_sum(chunk_terms: Callable[[int, int], np.ndarray], truncation: SeriesTruncation,
                  label: str = "series") -> np.ndarray:
    """
    按块累加级数项；连续三项的范数不超过 tol·|部分和| 时停止

    chunk_terms(start, stop) 返回形如 (m,) 或 (m, d) 的项数组
    """
    total = None
    small_run = 0
    start = 0
    while start < truncation.max_terms:
        stop = min(start + CHUNK_SIZE, truncation.max_terms)
        terms = np.asarray(chunk_terms(start, stop))
        if not np.all(np.isfinite(terms)):
            raise RegionError(f"{label}: 级数项不是有限数，点可能在收敛区域之外")
        partial = np.cumsum(terms, axis=0)
        if total is not None:
            partial = partial + total
        if terms.ndim == 1:
            term_norm = np.abs(terms)
            partial_norm = np.abs(partial)
        else:
            term_norm = np.linalg.norm(terms, axis=1)
            partial_norm = np.linalg.norm(partial, axis=1)
        small = term_norm <= truncation.tol * partial_norm
        for offset, flag in enumerate(small):
            small_run = small_run + 1 if flag else 0
            if small_run >= 3:
                logger.debug(f"{label}: 在 {start + offset + 1} 项后截断")
                return partial[offset]
        total = partial[-1]
        start = stop
    raise RegionError(f"{label}: 级数在 {truncation.max_terms} 项内未收敛",
                      details={"max_terms": truncation.max_terms})


def _falling_factorial(powers: np.ndarray, order: int) -> np.ndarray:
    result = np.ones(powers.shape, dtype=float)
    for i in range(order):
        result = result * (powers - i)
    return result


def P_tilde(n: int, which: str, z: ComplexPoint, truncation: Optional[SeriesTruncation] = None,
            derivative: int = 0) -> ComplexPoint:
    """P̃±_n 及其 derivative 阶导数的级数值；|z| 在拒绝环带内时报错"""
    truncation = truncation or SeriesTruncation()
    if derivative < 0:
        raise DomainError(f"导数阶数必须非负: {derivative}")
    w = complex(z)
    regime = select_regime(abs(w), truncation.delta)
    table = series_table(n, which, regime, truncation.max_terms)

    def chunk(start: int, stop: int) -> np.ndarray:
        powers = table.powers[start:stop]
        coeffs = table.coeffs[start:stop] * _falling_factorial(powers, derivative)
        shifted = powers - derivative
        if w == 0:
            return np.where(shifted == 0, coeffs, 0.0).astype(complex)
        # 求导后指数为负的内部项系数为零
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            values = coeffs * np.power(w, shifted.astype(float))
        return np.where(coeffs == 0.0, 0.0, values)

    value = truncated_sum(chunk, truncation, label=f"P̃{'+' if which == 'plus' else '-'}_{n}")
    return ComplexPoint.from_complex(complex(value))


def P_tilde_plus(n: int, z: ComplexPoint, truncation: Optional[SeriesTruncation] = None) -> ComplexPoint:
    return P_tilde(n, 'plus', z, truncation)


def P_tilde_minus(n: int, z: ComplexPoint, truncation: Optional[SeriesTruncation] = None) -> ComplexPoint:
    return P_tilde(n, 'minus', z, truncation)


def P_plus_fn(n: int, z: ComplexPoint, truncation: Optional[SeriesTruncation] = None) -> ComplexPoint:
    """P⁺_n = P̃⁺_n / λ'_n"""
    value = complex(P_tilde_plus(n, z, truncation))
    return ComplexPoint.from_complex(value / DimensionConstants.for_dimension(n).lambda_prime_n)


def P_minus_fn(n: int, z: ComplexPoint, truncation: Optional[SeriesTruncation] = None) -> ComplexPoint:
    """P⁻_n = P̃⁻_n / λ'_n"""
    value = complex(P_tilde_minus(n, z, truncation))
    return ComplexPoint.from_complex(value / DimensionConstants.for_dimension(n).lambda_prime_n)


def kernel_integrand(n: int, which: str, w: np.ndarray) -> np.ndarray:
    """h⁺(w) = C_n w/(1+w²)^{(n+1)/2}，h⁻(w) = -C_n/(1+w²)^{(n+1)/2}（主值分支）"""
    c_n = DimensionConstants.for_dimension(n).C_n
    base = np.power(1.0 + w * w, -(n + 1) / 2)
    if which == 'plus':
        return c_n * w * base
    if which == 'minus':
        return -c_n * base
    raise DomainError(f"未知的核类型: {which!r}")


def P_tilde_continued(n: int, which: str, z: ComplexPoint, derivative: int = 0,
                      node_count: int = 64) -> ComplexPoint:
    """
    内部分支沿线段 [0, w] 的延拓

    P̃^{(j)}(w) = 1/m! ∫_0^w (w-s)^m h(s) ds，m = n-2-j；j = n-1 时就是 h(w)。
    与外部级数相差次数不超过 n-2 的实多项式
    """
    check_dimension(n, minimum=2)
    if derivative < 0 or derivative > n - 1:
        raise DomainError(f"延拓只支持 0..{n - 1} 阶导数，收到 {derivative}")
    w = complex(z)
    if derivative == n - 1:
        return ComplexPoint.from_complex(complex(kernel_integrand(n, which, np.array([w]))[0]))
    m = n - 2 - derivative
    nodes, weights = gauss_legendre_unit(node_count)
    values = kernel_integrand(n, which, w * nodes)
    integral = np.sum(weights * (1.0 - nodes) ** m * values)
    result = w ** (m + 1) * integral / math.factorial(m)
    return ComplexPoint.from_complex(complex(result))


# β(P±_n)

def _beta_kernel(n: int, which: str, x: Paravector, truncation: Optional[SeriesTruncation]) -> Paravector:
    truncation = truncation or SeriesTruncation()
    check_dimension(n, minimum=2)
    if x.n != n:
        raise DomainError(f"点的维度 {x.n} 与 n={n} 不一致")
    x = x.to_float()
    x0, r = x.x0, x.vector_norm()
    rho = math.hypot(x0, r)
    regime = select_regime(rho, truncation.delta)
    table = series_table(n, which, regime, truncation.max_terms)
    scale = 1.0 / DimensionConstants.for_dimension(n).lambda_prime_n

    def chunk(start: int, stop: int) -> np.ndarray:
        indices = table.indices[start:stop]
        coeffs = table.coeffs[start:stop] * scale
        if regime == 'outer':
            a_val, b_val = minus_axial(-indices, n, x0, r)
        else:
            a_val, b_val = plus_axial(indices, n, x0, r)
        return np.column_stack((coeffs * a_val, coeffs * b_val))

    a_sum, b_sum = truncated_sum(chunk, truncation, label=f"β(P{'+' if which == 'plus' else '-'}_{n})")
    return axial_to_paravector(x, float(a_sum), float(b_sum))


def beta_P_plus(n: int, x: Paravector, truncation: Optional[SeriesTruncation] = None) -> Paravector:
    """β(P⁺_n)(x)，逐项作用 β；应与 K⁺_n(x) 一致"""
    return _beta_kernel(n, 'plus', x, truncation)


def beta_P_minus(n: int, x: Paravector, truncation: Optional[SeriesTruncation] = None) -> Paravector:
    """β(P⁻_n)(x)，应与 K⁻_n(x) 一致"""
    return _beta_kernel(n, 'minus', x, truncation)
