# Fueter映射模块
"""
Fueter 映射的闭式实现

- Cauchy 核 E(x) = x̄ / (ω_n |x|^{n+1}) 及其 x0 方向导数
- 单演单项式 P^(-k)、P^(k-1) = I(P^(-k))，Kelvin 反演 I
- 单项式定理：β(z^l) = P^(l) (l<0)；0 (0<=l<=n-2)；P^(l+1-n) (l>=n-1)
- Laurent 级数上的 β

精确路径：系数拆成 λ_n（n 为偶数时含 π）乘以有理轴向对。
数值路径：Gegenbauer 多项式给出的单项式闭式，与精确表示交叉校验。
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy.special import eval_gegenbauer

from src.axial_calculus import (
    R, X0, AxialPair, AxialRational, exact_scalar, is_monogenic, pair_d_x0,
)
from src.core.clifford import Multivector, Paravector, check_dimension, paravector_inverse
from src.core.constants import DimensionConstants, lambda_exact, sphere_area_exact
from src.core.errors import AxialRepresentationError, DomainError, RegionError
from src.intrinsic import LaurentSeries
from src.validation import SeriesTruncation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScaledPair:
    """常数因子（精确 sympy 表达式）乘以有理轴向对"""
    coefficient: sympy.Expr
    unit: AxialPair

    @property
    def n(self) -> int:
        return self.unit.n

    def coefficient_float(self) -> float:
        return float(self.coefficient)

    def exact_pair(self) -> AxialPair:
        """把常数并入轴向对；常数为无理数时无法精确表示"""
        if not sympy.sympify(self.coefficient).is_rational:
            raise AxialRepresentationError(
                f"常数 {self.coefficient} 不是有理数（偶数维度含 π），只能数值求值"
            )
        return self.unit.scale(self.coefficient)

    def evaluate(self, x: Paravector) -> Paravector:
        return self.unit.evaluate(x.to_float()).scale(self.coefficient_float())

    def evaluate_axial(self, x0: float, r: float) -> Tuple[float, float]:
        a_val, b_val = self.unit.evaluate_axial(x0, r)
        c = self.coefficient_float()
        return c * float(a_val), c * float(b_val)

    def is_monogenic(self) -> bool:
        return is_monogenic(self.unit)


@dataclass(frozen=True)
class MonogenicMonomial(ScaledPair):
    """单演单项式 P^(m)：m <= -1 为 P^(-k)，m >= 0 为 P^(m)；系数恒为 λ_n"""
    index: int = 0

    def homogeneous_degree(self) -> Optional[Fraction]:
        degree = self.unit.A.homogeneous_degree()
        return degree if degree is not None else self.unit.B.homogeneous_degree()

    def axis_coefficient_exact(self) -> sympy.Expr:
        """轴上限制 P^(m)(x0) = c x0^deg（x0 > 0）中的 c"""
        value = self.unit.A.numerator.as_expr().subs({X0: 1, R: 0})
        return sympy.nsimplify(self.coefficient * value)

    def axis_coefficient(self) -> float:
        return float(self.axis_coefficient_exact())

    def evaluate(self, x: Paravector) -> Paravector:
        """数值求值走 Gegenbauer 闭式"""
        return evaluate_monomial(self.index, self.n, x)


def cauchy_unit(n: int) -> AxialPair:
    """x̄ / |x|^{n+1}（不含 1/ω_n）"""
    return AxialPair(AxialRational(X0, n + 1), AxialRational(-R, n + 1), n)


def cauchy_kernel(n: int) -> ScaledPair:
    """E(x) = x̄ / (ω_n |x|^{n+1})"""
    check_dimension(n)
    return ScaledPair(1 / sphere_area_exact(n), cauchy_unit(n))


def evaluate_cauchy(n: int, x: Paravector) -> Paravector:
    """E(x) 数值求值；原点处报错"""
    norm_sq = float(x.norm_squared())
    if norm_sq == 0.0:
        raise DomainError("Cauchy核在原点处无定义")
    constants = DimensionConstants.for_dimension(n)
    factor = 1.0 / (constants.omega_n * norm_sq ** ((n + 1) / 2))
    return x.to_float().conjugate().scale(factor)


@lru_cache(maxsize=None)
def _d0k_unit(n: int, k: int) -> AxialPair:
    if k == 0:
        return cauchy_unit(n)
    return pair_d_x0(_d0k_unit(n, k - 1))


def d0k_cauchy(n: int, k: int) -> ScaledPair:
    """∂0^k E 的精确表示"""
    check_dimension(n)
    if k < 0:
        raise DomainError(f"导数阶数必须非负: {k}")
    return ScaledPair(1 / sphere_area_exact(n), _d0k_unit(n, k))


@lru_cache(maxsize=None)
def P_minus(k: int, n: int) -> MonogenicMonomial:
    """
    P^(-k) = (-1)^{k-1} ω_n λ_n / (k-1)! · ∂0^{k-1} E

    ω_n 与 E 中的 1/ω_n 相消，单位对为 (-1)^{k-1}/(k-1)! · ∂0^{k-1}(x̄/|x|^{n+1})
    """
    check_dimension(n)
    if k < 1:
        raise DomainError(f"P^(-k) 要求 k >= 1，收到 k={k}")
    factor = sympy.Rational((-1) ** (k - 1), math.factorial(k - 1))
    unit = _d0k_unit(n, k - 1).scale(factor)
    return MonogenicMonomial(coefficient=lambda_exact(n), unit=unit, index=-k)


def kelvin_pair(f: AxialPair) -> AxialPair:
    """
    符号 Kelvin 反演：I(f)(x) = (-1)^{n-1} ω_n E(x) f(x^{-1})

    ω_n E = x̄/|x|^{n+1} 为有理轴向对，乘积顺序 E·f（轴向函数之间可交换）
    """
    n = f.n
    sign = 1 if (n - 1) % 2 == 0 else -1
    return (cauchy_unit(n) * f.invert_arguments()).scale(sign)


ParavectorFunction = Callable[[Paravector], Union[Paravector, Multivector]]


def kelvin(f: ParavectorFunction, x: Paravector) -> Multivector:
    """
    数值 Kelvin 反演 I(f)(x) = (-1)^{n-1} ω_n E(x) f(x^{-1})，按 E(x)·f(x^{-1}) 的顺序相乘

    n 为奇数且 x 为有理点时 |x|^{n+1} 是有理数，结果精确
    """
    n = x.n
    norm_sq = x.norm_squared()
    if norm_sq == 0:
        raise DomainError("Kelvin反演在原点处无定义")
    if (n + 1) % 2 == 0 and not isinstance(norm_sq, float):
        scale = 1 / Fraction(norm_sq) ** ((n + 1) // 2)
    else:
        scale = 1.0 / float(norm_sq) ** ((n + 1) / 2)
    if (n - 1) % 2:
        scale = -scale
    e_part = x.conjugate().to_multivector().scale(scale)
    value = f(paravector_inverse(x))
    if isinstance(value, Paravector):
        value = value.to_multivector()
    return e_part * value


@lru_cache(maxsize=None)
def P_plus(m: int, n: int) -> MonogenicMonomial:
    """P^(m) = I(P^(-(m+1)))，由精确 P^(-k) 做符号 Kelvin 反演得到，必须是多项式"""
    check_dimension(n)
    if m < 0:
        raise DomainError(f"P^(m) 要求 m >= 0，收到 m={m}")
    source = P_minus(m + 1, n)
    unit = kelvin_pair(source.unit)
    if unit.A.half_power != 0 or unit.B.half_power != 0:
        raise AxialRepresentationError(f"Kelvin反演后 P^({m}) 未化简为多项式: {unit!r}")
    return MonogenicMonomial(coefficient=source.coefficient, unit=unit, index=m)


def monomial_index(l: int, n: int) -> Optional[int]:
    """单项式定理：β(z^l) 对应的 P 指标；落在 β 的核中时返回 None"""
    if l < 0:
        return l
    if l <= n - 2:
        return None
    return l + 1 - n


def monomial(index: int, n: int) -> MonogenicMonomial:
    return P_minus(-index, n) if index < 0 else P_plus(index, n)


def beta_monomial(l: int, n: int) -> Optional[MonogenicMonomial]:
    """β(z^l) 的闭式；在核中时返回 None（零函数）"""
    check_dimension(n)
    index = monomial_index(l, n)
    if index is None:
        return None
    return monomial(index, n)


def beta_monomial_pair(l: int, n: int) -> AxialPair:
    """β(z^l) 的精确轴向对（只适用于常数为有理数的情形，即 n 为奇数）"""
    result = beta_monomial(l, n)
    if result is None:
        return AxialPair.zero(n)
    return result.exact_pair()


# 数值闭式

def _gegenbauer(degrees: np.ndarray, mu: float, t: float) -> np.ndarray:
    degrees = np.asarray(degrees)
    values = np.zeros(degrees.shape, dtype=float)
    valid = degrees >= 0
    if np.any(valid):
        values[valid] = eval_gegenbauer(degrees[valid], mu, t)
    return values


def minus_axial(ks: Sequence[int], n: int, x0: float, r: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    P^(-k) 的 (A, B)，k 可为数组

    A = λ_n (x0 C_{k-1}(t) - ρ C_{k-2}(t)) ρ^{-(n+k)}，B = -λ_n r C_{k-1}(t) ρ^{-(n+k)}，
    C = C^{(n+1)/2}，t = x0/ρ
    """
    ks = np.asarray(ks, dtype=int)
    rho = math.hypot(x0, r)
    if rho == 0.0:
        raise DomainError("P^(-k) 在原点处无定义")
    lam = DimensionConstants.for_dimension(n).lambda_n
    mu = (n + 1) / 2
    t = x0 / rho
    c1 = _gegenbauer(ks - 1, mu, t)
    c2 = _gegenbauer(ks - 2, mu, t)
    scale = lam * rho ** (-(n + ks).astype(float))
    return scale * (x0 * c1 - rho * c2), -scale * r * c1


def plus_axial(ms: Sequence[int], n: int, x0: float, r: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    P^(m) 的 (A, B)，m 可为数组

    A = (-1)^{n-1} λ_n ρ^m (C_m(t) - t C_{m-1}(t))，B = (-1)^{n-1} λ_n ρ^m s C_{m-1}(t)，s = r/ρ
    """
    ms = np.asarray(ms, dtype=int)
    lam = DimensionConstants.for_dimension(n).lambda_n
    sign = -1.0 if (n - 1) % 2 else 1.0
    rho = math.hypot(x0, r)
    if rho == 0.0:
        A = np.where(ms == 0, sign * lam, 0.0)
        return A, np.zeros(ms.shape, dtype=float)
    mu = (n + 1) / 2
    t = x0 / rho
    s = r / rho
    c0 = _gegenbauer(ms, mu, t)
    c1 = _gegenbauer(ms - 1, mu, t)
    scale = sign * lam * rho ** ms.astype(float)
    return scale * (c0 - t * c1), scale * s * c1


def monomial_axial(index: int, n: int, x0: float, r: float) -> Tuple[float, float]:
    if index < 0:
        A, B = minus_axial([-index], n, x0, r)
    else:
        A, B = plus_axial([index], n, x0, r)
    return float(A[0]), float(B[0])


def axial_to_paravector(x: Paravector, a_val: float, b_val: float) -> Paravector:
    """A + ω B，ω = x̲/|x̲|；轴上只保留 A"""
    r = x.vector_norm()
    if r == 0.0:
        return Paravector.real(x.n, a_val)
    factor = b_val / r
    return Paravector(x.n, a_val, tuple(factor * float(v) for v in x.vec))


def evaluate_monomial(index: int, n: int, x: Paravector) -> Paravector:
    x = x.to_float()
    a_val, b_val = monomial_axial(index, n, x.x0, x.vector_norm())
    return axial_to_paravector(x, a_val, b_val)


# Laurent 级数上的 β

def _is_small(term_norm: float, sum_norm: float, tol: float) -> bool:
    return term_norm <= tol * sum_norm


def beta_series(
    f: LaurentSeries,
    n: int,
    x: Paravector,
    truncation: Optional[SeriesTruncation] = None,
) -> Paravector:
    """
    β(f0)(x) = Σ a_l β(z_a^l)(x_a)，x_a = x - a

    按 |l| 升序求和；连续三项范数不超过 tol·|部分和| 时截断，最多 max_terms 项。
    位于 β 核中的项（0 <= l <= n-2）恒为零，不参与截断计数。
    """
    check_dimension(n)
    truncation = truncation or SeriesTruncation()
    x = x.to_float()
    if x.n != n:
        raise DomainError(f"点的维度 {x.n} 与 n={n} 不一致")
    x0 = x.x0 - f.center
    r = x.vector_norm()
    f.check_radius(math.hypot(x0, r))

    total_a = 0.0
    total_b = 0.0
    small_run = 0
    used = 0
    for l, c in f.ordered_terms():
        index = monomial_index(l, n)
        if index is None:
            continue
        a_val, b_val = monomial_axial(index, n, x0, r)
        term_a = float(c) * a_val
        term_b = float(c) * b_val
        if not (math.isfinite(term_a) and math.isfinite(term_b)):
            raise RegionError(f"级数项 l={l} 不是有限数，点可能在收敛区域之外",
                              details={"l": l})
        total_a += term_a
        total_b += term_b
        used += 1
        small_run = small_run + 1 if _is_small(math.hypot(term_a, term_b),
                                               math.hypot(total_a, total_b),
                                               truncation.tol) else 0
        if small_run >= 3:
            logger.debug(f"beta_series 在 {used} 项后截断")
            break
        if used >= truncation.max_terms:
            raise RegionError(f"级数在 {truncation.max_terms} 项内未收敛")

    return axial_to_paravector(x, total_a, total_b)


def beta_series_exact(f: LaurentSeries, n: int) -> List[Tuple[sympy.Rational, MonogenicMonomial]]:
    """有限级数的精确 β：返回 (a_l, β(z^l)) 列表（平移变量 x_a），核中的项省略"""
    terms = []
    for l, c in f.ordered_terms():
        image = beta_monomial(l, n)
        if image is not None:
            terms.append((exact_scalar(c), image))
    return terms


def combine_exact(terms: List[Tuple[sympy.Rational, MonogenicMonomial]], n: int) -> ScaledPair:
    """把精确项合并为 λ_n · (有理轴向对)；偶数维度下正负指数混合时无法合并"""
    unit = AxialPair.zero(n)
    for coefficient, image in terms:
        unit = unit + image.unit.scale(coefficient)
    return ScaledPair(lambda_exact(n), unit)


# 全纯 jet 上的逐点 β（奇数 n）

def _shift_down(coeffs: np.ndarray, axis: int) -> np.ndarray:
    """对 s^p t^q 系数数组求偏导"""
    size = coeffs.shape[axis]
    result = np.zeros_like(coeffs)
    factors = np.arange(1, size)
    if axis == 0:
        result[:-1, :] = coeffs[1:, :] * factors[:, None]
    else:
        result[:, :-1] = coeffs[:, 1:] * factors[None, :]
    return result


def _times_t_series(coeffs: np.ndarray, series: np.ndarray) -> np.ndarray:
    """乘以只含 t 的截断级数"""
    size = coeffs.shape[1]
    result = np.zeros_like(coeffs)
    for q in range(size):
        for k in range(size - q):
            result[:, q + k] += coeffs[:, q] * series[k]
    return result


def beta_from_jet(derivatives: Sequence[complex], n: int, x0: float, r: float) -> Tuple[float, float]:
    """
    由 g^{(j)}(x0 + i r)（j = 0..n-1）计算奇数 n 下 β(g) 在 (x0, r) 处的 (A, B)

    在 (s, t) = (x0' - x0, r' - r) 上做截断二元 Taylor 运算，
    1/(r + t) 展开为 t 的幂级数，施加 (n-1)/2 次轴向 Laplace 算子后取常数项
    """
    if n % 2 == 0:
        raise DomainError(f"jet 形式的逐点 β 只适用于奇数 n，收到 n={n}")
    if r <= 0.0:
        raise DomainError("jet 形式的逐点 β 要求 r > 0")
    order = n - 1
    if len(derivatives) < order + 1:
        raise DomainError(f"需要 {order + 1} 个导数值，收到 {len(derivatives)}")

    size = order + 1
    A = np.zeros((size, size))
    B = np.zeros((size, size))
    for j in range(size):
        base = complex(derivatives[j]) / math.factorial(j)
        for q in range(j + 1):
            value = base * math.comb(j, q) * (1j ** q)
            A[j - q, q] += value.real
            B[j - q, q] += value.imag

    inverse_r = np.array([(-1.0) ** k / r ** (k + 1) for k in range(size)])
    inverse_r_sq = np.convolve(inverse_r, inverse_r)[:size]
    for _ in range(order // 2):
        A_t = _shift_down(A, 1)
        B_t = _shift_down(B, 1)
        new_A = _shift_down(_shift_down(A, 0), 0) + _shift_down(A_t, 1) \
            + (n - 1) * _times_t_series(A_t, inverse_r)
        new_B = _shift_down(_shift_down(B, 0), 0) + _shift_down(B_t, 1) \
            + (n - 1) * _times_t_series(B_t, inverse_r) \
            - (n - 1) * _times_t_series(B, inverse_r_sq)
        A, B = new_A, new_B

    sign = -1.0 if (order // 2) % 2 else 1.0
    return sign * float(A[0, 0]), sign * float(B[0, 0])
