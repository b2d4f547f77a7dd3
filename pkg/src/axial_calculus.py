# 轴向微积分模块
"""
轴向对 (A, B) 上的精确有理函数微积分

A、B 表示为 N(x0, r) / (x0^2 + r^2)^{m/2}，N 为 QQ 上的二元多项式 (sympy.Poly)。
A 只含 r 的偶次幂，B 只含奇次幂，因此 Dirac 算子和 Laplace 算子中对 r、r^2 的除法
都是精确的多项式除法。
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Callable, Optional, Tuple, Union

import sympy
from sympy.polys.polyerrors import ExactQuotientFailed

from src.core.clifford import Multivector, Paravector, Scalar, basis_mask, check_dimension
from src.core.errors import AxialRepresentationError, DimensionMismatchError, DomainError

logger = logging.getLogger(__name__)

X0, R = sympy.symbols('x0 r')
_GENS = (X0, R)


def _as_poly(expr) -> sympy.Poly:
    return sympy.Poly(expr, *_GENS, domain='QQ')


_D = _as_poly(X0 ** 2 + R ** 2)
_ZERO = _as_poly(0)


def _to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def exact_scalar(value) -> sympy.Rational:
    """把 int / Fraction / float / sympy 有理数转换为精确有理数；float 按十进制表示解释"""
    if isinstance(value, bool):
        raise TypeError("布尔值不是有效的标量")
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"系数不是有限数: {value}")
        return sympy.Rational(repr(value))
    result = sympy.Rational(value) if not isinstance(value, sympy.Basic) else value
    if not result.is_rational:
        raise AxialRepresentationError(f"系数 {value} 不是有理数，无法进入精确表示")
    return result


class AxialRational:
    """
    N(x0, r) / (x0^2 + r^2)^{m/2}

    构造时规范化：m >= 2 时约去分子中所有 d = x0^2 + r^2 的因子；零函数的 m 取 0
    """

    __slots__ = ('_numerator', '_half_power', '_terms')

    def __init__(self, numerator=0, half_power: int = 0):
        poly = _as_poly(numerator)
        m = int(half_power)
        if m < 0:
            lift = (-m + 1) // 2
            poly = poly * _D ** lift
            m += 2 * lift

        if poly.is_zero:
            m = 0
        else:
            while m >= 2:
                quotient, remainder = poly.div(_D)
                if not remainder.is_zero:
                    break
                poly = quotient
                m -= 2

        object.__setattr__(self, '_numerator', poly)
        object.__setattr__(self, '_half_power', m)
        object.__setattr__(self, '_terms', None)

    def __setattr__(self, name, value):
        raise AttributeError("AxialRational是不可变的")

    @classmethod
    def constant(cls, value) -> 'AxialRational':
        return cls(exact_scalar(value))

    @property
    def numerator(self) -> sympy.Poly:
        return self._numerator

    @property
    def half_power(self) -> int:
        return self._half_power

    def is_zero(self) -> bool:
        return self._numerator.is_zero

    def as_expr(self) -> sympy.Expr:
        return self._numerator.as_expr() / (X0 ** 2 + R ** 2) ** sympy.Rational(self._half_power, 2)

    def r_parity(self) -> Optional[str]:
        """'even' / 'odd' / 'zero'，混合奇偶时返回 None"""
        if self.is_zero():
            return 'zero'
        parities = {j % 2 for _, j in self._numerator.monoms()}
        if parities == {0}:
            return 'even'
        if parities == {1}:
            return 'odd'
        return None

    def homogeneous_degree(self) -> Optional[Fraction]:
        """齐次次数；不齐次时返回 None"""
        if self.is_zero():
            return None
        degrees = {i + j for i, j in self._numerator.monoms()}
        if len(degrees) != 1:
            return None
        return Fraction(degrees.pop()) - Fraction(self._half_power)

    # 算术
    def _lift(self, target: int) -> sympy.Poly:
        return self._numerator * _D ** ((target - self._half_power) // 2)

    def __add__(self, other) -> 'AxialRational':
        if isinstance(other, Number) or isinstance(other, sympy.Basic):
            other = AxialRational.constant(other)
        if not isinstance(other, AxialRational):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if (self._half_power - other._half_power) % 2:
            raise AxialRepresentationError(
                "分母半整数幂的奇偶性不同，无法在该表示中精确相加",
                details={"left": self._half_power, "right": other._half_power},
            )
        target = max(self._half_power, other._half_power)
        return AxialRational(self._lift(target) + other._lift(target), target)

    __radd__ = __add__

    def __neg__(self) -> 'AxialRational':
        return AxialRational(-self._numerator, self._half_power)

    def __sub__(self, other) -> 'AxialRational':
        return self + (-other)

    def __mul__(self, other) -> 'AxialRational':
        if isinstance(other, AxialRational):
            return AxialRational(self._numerator * other._numerator,
                                 self._half_power + other._half_power)
        if isinstance(other, (Number, sympy.Basic)):
            return AxialRational(self._numerator * exact_scalar(other), self._half_power)
        return NotImplemented

    __rmul__ = __mul__

    def multiply_poly(self, expr) -> 'AxialRational':
        return AxialRational(self._numerator * _as_poly(expr), self._half_power)

    def divide_by_r(self) -> 'AxialRational':
        """精确除以 r；分子不被 r 整除时报错"""
        try:
            quotient = self._numerator.exquo(_as_poly(R))
        except ExactQuotientFailed as exc:
            raise AxialRepresentationError("分子不能被 r 整除（奇偶性被破坏）") from exc
        return AxialRational(quotient, self._half_power)

    def evaluate(self, x0: Scalar, r: Scalar) -> Scalar:
        """
        在 (x0, r) 处求值；m 为偶数且输入为有理数时结果精确

        奇数 m 需要开方，结果为 float
        """
        if self._terms is None:
            terms = [(i, j, _to_fraction(c)) for (i, j), c in self._numerator.terms()]
            object.__setattr__(self, '_terms', terms)
        value = sum((c * x0 ** i * r ** j for i, j, c in self._terms), 0)
        if self._half_power == 0:
            return value
        d = x0 * x0 + r * r
        if d == 0:
            raise DomainError("在原点处分母为零")
        if self._half_power % 2 == 0:
            return value / d ** (self._half_power // 2)
        return float(value) / float(d) ** (self._half_power / 2)

    def invert_arguments(self) -> 'AxialRational':
        """
        代入 x -> x^{-1}：(x0, r) -> (x0/d, r/d)，同时 d -> 1/d

        单项 c x0^i r^j 变为 c x0^i r^j d^{m/2-(i+j)}；结果化为公共分母 d^{K/2}
        """
        if self.is_zero():
            return self
        m = self._half_power
        monoms = self._numerator.terms()
        top = max(2 * (i + j) - m for (i, j), _ in monoms)
        target = max(top, 0)
        if (target - m) % 2:
            target += 1
        numerator = _ZERO
        for (i, j), c in monoms:
            lift = (target + m - 2 * (i + j)) // 2
            numerator = numerator + _as_poly(c * X0 ** i * R ** j) * _D ** lift
        return AxialRational(numerator, target)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Number, sympy.Basic)):
            other = AxialRational.constant(other)
        if not isinstance(other, AxialRational):
            return NotImplemented
        return self._half_power == other._half_power and self._numerator == other._numerator

    def __hash__(self) -> int:
        return hash((self._numerator.as_expr(), self._half_power))

    def __repr__(self) -> str:
        return f"AxialRational(({self._numerator.as_expr()}) / d^({self._half_power}/2))"


def d_x0(f: AxialRational) -> AxialRational:
    """∂/∂x0：(d ∂0 N - m x0 N) / d^{(m+2)/2}"""
    if f.is_zero():
        return f
    N, m = f.numerator, f.half_power
    if m == 0:
        return AxialRational(N.diff(X0), 0)
    return AxialRational(_D * N.diff(X0) - N * _as_poly(m * X0), m + 2)


def d_r(f: AxialRational) -> AxialRational:
    """∂/∂r：(d ∂r N - m r N) / d^{(m+2)/2}"""
    if f.is_zero():
        return f
    N, m = f.numerator, f.half_power
    if m == 0:
        return AxialRational(N.diff(R), 0)
    return AxialRational(_D * N.diff(R) - N * _as_poly(m * R), m + 2)


class AxialPair:
    """
    轴向函数 f(x) = A(x0, |x̲|) + (x̲/|x̲|) B(x0, |x̲|)

    A 关于 r 为偶函数，B 为奇函数；因此 r = 0 处 B = 0，函数在轴上有定义
    """

    __slots__ = ('_A', '_B', '_n')

    def __init__(self, A: AxialRational, B: AxialRational, n: int):
        check_dimension(n)
        if not isinstance(A, AxialRational):
            A = AxialRational(A)
        if not isinstance(B, AxialRational):
            B = AxialRational(B)
        if A.r_parity() not in ('even', 'zero'):
            raise AxialRepresentationError(f"A 分量必须是 r 的偶函数: {A!r}")
        if B.r_parity() not in ('odd', 'zero'):
            raise AxialRepresentationError(f"B 分量必须是 r 的奇函数: {B!r}")
        object.__setattr__(self, '_A', A)
        object.__setattr__(self, '_B', B)
        object.__setattr__(self, '_n', n)

    def __setattr__(self, name, value):
        raise AttributeError("AxialPair是不可变的")

    @classmethod
    def zero(cls, n: int) -> 'AxialPair':
        return cls(AxialRational(0), AxialRational(0), n)

    @classmethod
    def constant(cls, n: int, value) -> 'AxialPair':
        return cls(AxialRational.constant(value), AxialRational(0), n)

    @property
    def A(self) -> AxialRational:
        return self._A

    @property
    def B(self) -> AxialRational:
        return self._B

    @property
    def n(self) -> int:
        return self._n

    def is_zero(self) -> bool:
        return self._A.is_zero() and self._B.is_zero()

    def _check_same(self, other: 'AxialPair') -> None:
        if not isinstance(other, AxialPair):
            raise TypeError(f"不支持的操作数类型: {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatchError(f"维度不一致: {self.n} != {other.n}")

    def __add__(self, other: 'AxialPair') -> 'AxialPair':
        self._check_same(other)
        return AxialPair(self._A + other._A, self._B + other._B, self._n)

    def __neg__(self) -> 'AxialPair':
        return AxialPair(-self._A, -self._B, self._n)

    def __sub__(self, other: 'AxialPair') -> 'AxialPair':
        return self + (-other)

    def scale(self, factor) -> 'AxialPair':
        return AxialPair(self._A * factor, self._B * factor, self._n)

    def __mul__(self, other):
        """轴向乘积：同一 ω 上的函数可交换，ω^2 = -1"""
        if isinstance(other, (Number, sympy.Basic)):
            return self.scale(other)
        self._check_same(other)
        A = self._A * other._A - self._B * other._B
        B = self._A * other._B + self._B * other._A
        return AxialPair(A, B, self._n)

    __rmul__ = __mul__

    def invert_arguments(self) -> 'AxialPair':
        """f(x^{-1})：x^{-1} 的方向为 -ω，故 B 分量变号"""
        return AxialPair(self._A.invert_arguments(), -self._B.invert_arguments(), self._n)

    def evaluate_axial(self, x0: Scalar, r: Scalar) -> Tuple[Scalar, Scalar]:
        if r == 0:
            return self._A.evaluate(x0, 0), 0
        return self._A.evaluate(x0, r), self._B.evaluate(x0, r)

    def evaluate(self, x: Paravector) -> Paravector:
        """在仿向量 x 处求值"""
        if x.n != self._n:
            raise DimensionMismatchError(f"点的维度 {x.n} 与函数维度 {self._n} 不一致")
        r_sq = x.vector_norm_squared()
        if r_sq == 0:
            a_val, _ = self.evaluate_axial(x.x0, 0)
            return Paravector.real(self._n, a_val)
        r = math.sqrt(r_sq)
        a_val, b_val = self.evaluate_axial(x.x0, r)
        factor = float(b_val) / r
        return Paravector(self._n, a_val, tuple(factor * v for v in x.vec))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AxialPair):
            return NotImplemented
        return self._n == other._n and self._A == other._A and self._B == other._B

    def __hash__(self) -> int:
        return hash((self._A, self._B, self._n))

    def __repr__(self) -> str:
        return f"AxialPair(n={self._n}, A={self._A!r}, B={self._B!r})"


def pair_d_x0(f: AxialPair) -> AxialPair:
    return AxialPair(d_x0(f.A), d_x0(f.B), f.n)


def dirac_axial(f: AxialPair) -> AxialPair:
    """
    D f = (∂0A - ∂rB - (n-1)B/r) + ω(∂0B + ∂rA)

    结果恒为零当且仅当 f 满足 Vekua 方程组（轴向单演）
    """
    n = f.n
    scalar = d_x0(f.A) - d_r(f.B) - f.B.divide_by_r() * (n - 1)
    vector = d_x0(f.B) + d_r(f.A)
    return AxialPair(scalar, vector, n)


def dirac_conj_axial(f: AxialPair) -> AxialPair:
    """D̄ f = (∂0A + ∂rB + (n-1)B/r) + ω(∂0B - ∂rA)"""
    n = f.n
    scalar = d_x0(f.A) + d_r(f.B) + f.B.divide_by_r() * (n - 1)
    vector = d_x0(f.B) - d_r(f.A)
    return AxialPair(scalar, vector, n)


def laplacian_axial(f: AxialPair) -> AxialPair:
    """
    轴向 Laplace 算子
    A: ∂0² + ∂r² + (n-1)/r ∂r
    B: 同上再减 (n-1)/r² B，写成 (n-1)(r ∂rB - B)/r² 以保持精确整除
    """
    n = f.n
    A, B = f.A, f.B
    dA_r = d_r(A)
    lap_A = d_x0(d_x0(A)) + d_r(dA_r) + dA_r.divide_by_r() * (n - 1)
    dB_r = d_r(B)
    correction = (dB_r.multiply_poly(R) - B).divide_by_r().divide_by_r()
    lap_B = d_x0(d_x0(B)) + d_r(dB_r) + correction * (n - 1)
    return AxialPair(lap_A, lap_B, n)


def vekua_residual(f: AxialPair) -> AxialPair:
    """Vekua 方程组的残差 (∂0 A - ∂r B - (n-1)B/r, ∂0 B + ∂r A)，即 D f"""
    return dirac_axial(f)


def is_monogenic(f: AxialPair) -> bool:
    """符号判定：Vekua 残差是否恒为零"""
    return vekua_residual(f).is_zero()


@lru_cache(maxsize=256)
def axial_power(l: int, n: int) -> AxialPair:
    """
    x^l 的精确轴向对

    l >= 0：(x0 + ω r)^l 的二项展开；l < 0：x^l = x̄^k / d^k，k = -l
    """
    k = abs(l)
    re_terms = 0
    im_terms = 0
    for j in range(k + 1):
        term = sympy.binomial(k, j) * X0 ** (k - j) * R ** j
        if j % 2 == 0:
            re_terms += (-1) ** (j // 2) * term
        else:
            im_terms += (-1) ** ((j - 1) // 2) * term
    if l >= 0:
        return AxialPair(AxialRational(re_terms), AxialRational(im_terms), n)
    return AxialPair(AxialRational(re_terms, 2 * k), AxialRational(-im_terms, 2 * k), n)


def beta_pointwise_odd(l: int, n: int) -> AxialPair:
    """
    奇数维度下 β(z^l) 的逐点微分实现：(-1)^{(n-1)/2} Δ^{(n-1)/2} x^l
    """
    check_dimension(n)
    if n % 2 == 0:
        raise DomainError(f"逐点微分形式只适用于奇数 n，收到 n={n}")
    result = axial_power(l, n)
    half = (n - 1) // 2
    for _ in range(half):
        result = laplacian_axial(result)
        if result.is_zero():
            break
    if half % 2:
        result = -result
    logger.debug(f"beta_pointwise_odd(l={l}, n={n}) 完成")
    return result


ParavectorFunction = Callable[[Paravector], Union[Paravector, Multivector]]


def _as_multivector(value: Union[Paravector, Multivector]) -> Multivector:
    return value.to_multivector() if isinstance(value, Paravector) else value


def dirac_stencil(f: ParavectorFunction, x: Paravector, h: float = 1e-5) -> Tuple[Multivector, float]:
    """
    笛卡尔坐标下 D f = Σ_j e_j ∂_j f 的中心差分（e_0 = 1，左作用）

    返回 (残差多重向量, 偏导数范数之和)，后者用于相对残差
    """
    x = x.to_float()
    n = x.n
    components = list(x.components())
    residual = Multivector(n)
    scale = 0.0
    for j in range(n + 1):
        def shifted(step: float) -> Multivector:
            point = list(components)
            point[j] += step
            return _as_multivector(f(Paravector.from_components(point)))

        # 四阶中心差分 (-f(+2h) + 8f(+h) - 8f(-h) + f(-2h)) / 12h
        partial = (shifted(h).scale(8.0) - shifted(-h).scale(8.0)
                   - shifted(2.0 * h) + shifted(-2.0 * h)).scale(1.0 / (12.0 * h))
        scale += partial.norm()
        if j == 0:
            residual = residual + partial
        else:
            residual = residual + Multivector(n, {basis_mask(j): 1.0}) * partial
    return residual, scale


def relative_dirac_residual(f: ParavectorFunction, x: Paravector, h: float = 1e-5) -> float:
    residual, scale = dirac_stencil(f, x, h)
    if scale == 0.0:
        return residual.norm()
    return residual.norm() / scale
