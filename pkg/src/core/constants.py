# 维度常数模块
"""
与维度 n 有关的常数：ω_n, λ_n, λ'_n, C_n 以及 γ_{k,α}
浮点值由 scipy.special 计算，精确值（含 π 的符号表达式）由 sympy 给出
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import sympy
from scipy.special import gamma as gamma_fn

from .clifford import MAX_DIMENSION
from .errors import DimensionMismatchError

logger = logging.getLogger(__name__)


def _check_n(n: int, minimum: int) -> None:
    if not isinstance(n, int) or n < minimum or n > MAX_DIMENSION:
        raise DimensionMismatchError(f"维度 n={n!r} 超出范围 [{minimum}, {MAX_DIMENSION}]")


def sphere_area(n: int) -> float:
    """ω_n：R^{n+1} 中单位球面 S^n 的面积（n = 0 时为 2）"""
    _check_n(n, 0)
    return 2.0 * math.pi ** ((n + 1) / 2) / gamma_fn((n + 1) / 2)


def sphere_area_exact(n: int) -> sympy.Expr:
    _check_n(n, 0)
    half = sympy.Rational(n + 1, 2)
    return sympy.simplify(2 * sympy.pi ** half / sympy.gamma(half))


def lambda_exact(n: int) -> sympy.Expr:
    """λ_n = 2^{n-1} Γ((n+1)/2)^2；n 为奇数时是整数"""
    _check_n(n, 1)
    return sympy.Integer(2) ** (n - 1) * sympy.gamma(sympy.Rational(n + 1, 2)) ** 2


def lambda_prime_exact(n: int) -> sympy.Expr:
    """λ'_n = (-1)^{n-1} λ_n / (n-1)!"""
    return (-1) ** (n - 1) * lambda_exact(n) / sympy.factorial(n - 1)


def gamma_constant(k: int, alpha: float, n: int) -> complex:
    """γ_{k,α} = i^k π^{(n+1)/2-α} Γ(k/2+α/2) / Γ(k/2+(n+1)/2-α/2)"""
    _check_n(n, 1)
    phase = 1j ** (k % 4)
    magnitude = (
        math.pi ** ((n + 1) / 2 - alpha)
        * gamma_fn(k / 2 + alpha / 2)
        / gamma_fn(k / 2 + (n + 1) / 2 - alpha / 2)
    )
    return phase * magnitude


def lambda_from_gamma(n: int) -> float:
    """由 γ 常数重建 λ_n：(2π)^{n-1} γ_{1,n} / γ_{1,1}"""
    ratio = gamma_constant(1, n, n) / gamma_constant(1, 1, n)
    # 比值是实数，i^k 相消
    return (2 * math.pi) ** (n - 1) * ratio.real


@dataclass(frozen=True)
class DimensionConstants:
    """维度常数集合"""
    n: int
    omega_n: float
    lambda_n: float
    lambda_prime_n: float
    C_n: float

    @classmethod
    def for_dimension(cls, n: int) -> 'DimensionConstants':
        return _constants(n)

    @property
    def omega_n_minus_2(self) -> float:
        """ω_{n-2}，球面约化时 S^{n-2} 的面积"""
        return sphere_area(self.n - 2)

    def gamma(self, k: int, alpha: float) -> complex:
        return gamma_constant(k, alpha, self.n)

    def lambda_exact(self) -> sympy.Expr:
        return lambda_exact(self.n)

    def lambda_prime_exact(self) -> sympy.Expr:
        return lambda_prime_exact(self.n)


@lru_cache(maxsize=None)
def _constants(n: int) -> DimensionConstants:
    _check_n(n, 1)
    half = (n + 1) / 2
    lam = 2.0 ** (n - 1) * gamma_fn(half) ** 2
    constants = DimensionConstants(
        n=n,
        omega_n=sphere_area(n),
        lambda_n=lam,
        lambda_prime_n=(-1) ** (n - 1) * lam / math.factorial(n - 1),
        C_n=gamma_fn(half) / (math.sqrt(math.pi) * gamma_fn(n / 2)),
    )
    logger.debug(f"维度常数 n={n}: {constants}")
    return constants
