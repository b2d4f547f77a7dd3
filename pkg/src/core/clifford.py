# Clifford代数模块
"""
实Clifford代数 R_{0,n} 的精确/浮点运算
blade用位掩码表示：e_j 对应 1 << (j - 1)；e_j^2 = -1
标量类型是泛型的：Fraction/int 走精确路径，float 走数值路径
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Dict, Iterable, Iterator, Tuple, Union

from .errors import DimensionMismatchError, DomainError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction, float]

MAX_DIMENSION = 20


def check_dimension(n: int, minimum: int = 1) -> int:
    """检查维度索引 n 是否在允许范围内"""
    if not isinstance(n, int) or isinstance(n, bool):
        raise DimensionMismatchError(f"维度必须是整数: {n!r}")
    if n < minimum or n > MAX_DIMENSION:
        raise DimensionMismatchError(
            f"维度 n={n} 超出范围 [{minimum}, {MAX_DIMENSION}]",
            details={"n": n},
        )
    return n


def basis_mask(j: int) -> int:
    """生成元 e_j 的掩码"""
    return 1 << (j - 1)


def grade(mask: int) -> int:
    return mask.bit_count()


def reordering_sign(a_bits: int, b_bits: int) -> int:
    """把 e_{S_A} e_{S_B} 重排成规范顺序所需交换次数的符号"""
    a_bits = a_bits >> 1
    swaps = 0
    while a_bits:
        swaps += (a_bits & b_bits).bit_count()
        a_bits = a_bits >> 1
    return -1 if swaps & 1 else 1


def blade_mul(mask_a: int, mask_b: int) -> Tuple[int, int]:
    """
    基blade乘积 e_{S_A} e_{S_B} = sign * e_{S_A △ S_B}

    符号由反交换次数和每个相消的生成元 (e_i^2 = -1) 共同决定
    """
    sign = reordering_sign(mask_a, mask_b)
    if (mask_a & mask_b).bit_count() & 1:
        sign = -sign
    return sign, mask_a ^ mask_b


def _is_zero(value: Scalar) -> bool:
    return value == 0


class Multivector:
    """
    R_{0,n} 中的多重向量
    系数字典 mask -> 标量；构造后不可变，相等比较忽略显式的零系数
    """

    __slots__ = ('_n', '_coeffs')

    def __init__(self, n: int, coeffs: Dict[int, Scalar] = None):
        check_dimension(n)
        limit = 1 << n
        cleaned: Dict[int, Scalar] = {}
        for mask, value in (coeffs or {}).items():
            if not isinstance(mask, int) or mask < 0 or mask >= limit:
                raise DimensionMismatchError(f"blade掩码 {mask!r} 超出维度 n={n}")
            if not _is_zero(value):
                cleaned[mask] = value
        object.__setattr__(self, '_n', n)
        object.__setattr__(self, '_coeffs', cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector是不可变的")

    # 构造函数
    @classmethod
    def scalar(cls, n: int, value: Scalar) -> 'Multivector':
        return cls(n, {0: value})

    @classmethod
    def basis(cls, n: int, j: int) -> 'Multivector':
        """生成元 e_j"""
        if not 1 <= j <= n:
            raise DimensionMismatchError(f"生成元下标 {j} 超出 1..{n}")
        return cls(n, {basis_mask(j): 1})

    @classmethod
    def blade(cls, n: int, indices: Iterable[int], value: Scalar = 1) -> 'Multivector':
        """按给定顺序的生成元乘积 e_{i1} e_{i2} ... 乘以 value"""
        result = cls.scalar(n, value)
        for j in indices:
            result = result * cls.basis(n, j)
        return result

    @property
    def n(self) -> int:
        return self._n

    @property
    def coeffs(self) -> Dict[int, Scalar]:
        return dict(self._coeffs)

    def coefficient(self, mask: int) -> Scalar:
        return self._coeffs.get(mask, 0)

    def items(self) -> Iterator[Tuple[int, Scalar]]:
        return iter(sorted(self._coeffs.items()))

    def _check_same(self, other: 'Multivector') -> None:
        if not isinstance(other, Multivector):
            raise TypeError(f"不支持的操作数类型: {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatchError(
                f"维度不一致: {self.n} != {other.n}",
                details={"left": self.n, "right": other.n},
            )

    # 线性运算
    def __add__(self, other: 'Multivector') -> 'Multivector':
        self._check_same(other)
        coeffs = dict(self._coeffs)
        for mask, value in other._coeffs.items():
            coeffs[mask] = coeffs.get(mask, 0) + value
        return Multivector(self.n, coeffs)

    def __neg__(self) -> 'Multivector':
        return Multivector(self.n, {m: -v for m, v in self._coeffs.items()})

    def __sub__(self, other: 'Multivector') -> 'Multivector':
        return self + (-other)

    def scale(self, factor: Scalar) -> 'Multivector':
        return Multivector(self.n, {m: v * factor for m, v in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        self._check_same(other)
        product: Dict[int, Scalar] = {}
        for mask_a, value_a in self._coeffs.items():
            for mask_b, value_b in other._coeffs.items():
                sign, mask = blade_mul(mask_a, mask_b)
                term = value_a * value_b
                product[mask] = product.get(mask, 0) + (term if sign > 0 else -term)
        return Multivector(self.n, product)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    # 对合
    def _grade_map(self, sign_of_grade) -> 'Multivector':
        return Multivector(
            self.n,
            {m: (v if sign_of_grade(grade(m)) > 0 else -v) for m, v in self._coeffs.items()},
        )

    def main_involution(self) -> 'Multivector':
        """主对合：e_S -> (-1)^{|S|} e_S"""
        return self._grade_map(lambda k: -1 if k & 1 else 1)

    def reversion(self) -> 'Multivector':
        """反转：e_S -> (-1)^{|S|(|S|-1)/2} e_S"""
        return self._grade_map(lambda k: -1 if (k * (k - 1) // 2) & 1 else 1)

    def conjugation(self) -> 'Multivector':
        """共轭 = 反转 ∘ 主对合"""
        return self.main_involution().reversion()

    def scalar_part(self) -> Scalar:
        return self._coeffs.get(0, 0)

    def norm_squared(self) -> Scalar:
        return sum((v * v for v in self._coeffs.values()), 0)

    def norm(self) -> float:
        """|a| = ([a ā]_0)^{1/2}，等于系数平方和的平方根"""
        return math.sqrt(self.norm_squared())

    def is_paravector(self) -> bool:
        return all(m == 0 or m.bit_count() == 1 for m in self._coeffs)

    def max_abs_coefficient(self) -> float:
        return max((abs(float(v)) for v in self._coeffs.values()), default=0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"Multivector(n={self.n}, 0)"
        terms = []
        for mask, value in self.items():
            if mask == 0:
                terms.append(f"{value}")
            else:
                name = "e" + "".join(str(j + 1) for j in range(self.n) if mask >> j & 1)
                terms.append(f"{value}*{name}")
        return f"Multivector(n={self.n}, {' + '.join(terms)})"


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def mv_add(a: Multivector, b: Multivector) -> Multivector:
    return a + b


def mv_scale(a: Multivector, factor: Scalar) -> Multivector:
    return a.scale(factor)


def norm(a: Multivector) -> float:
    return a.norm()


@dataclass(frozen=True)
class Paravector:
    """仿向量 x = x0 + x̲，对应 R^{n+1} 中的点"""
    n: int
    x0: Scalar
    vec: Tuple[Scalar, ...]

    def __post_init__(self):
        check_dimension(self.n)
        vec = tuple(self.vec)
        if len(vec) != self.n:
            raise DimensionMismatchError(
                f"向量部分长度 {len(vec)} 与维度 n={self.n} 不一致"
            )
        object.__setattr__(self, 'vec', vec)

    @classmethod
    def from_components(cls, components: Iterable[Scalar]) -> 'Paravector':
        """由 (x0, x1, ..., xn) 构造"""
        values = tuple(components)
        if len(values) < 2:
            raise DimensionMismatchError("仿向量至少需要 x0 和 x1 两个分量")
        return cls(len(values) - 1, values[0], values[1:])

    @classmethod
    def real(cls, n: int, value: Scalar) -> 'Paravector':
        return cls(n, value, (0,) * n)

    @classmethod
    def from_multivector(cls, a: Multivector) -> 'Paravector':
        if not a.is_paravector():
            raise DomainError("多重向量含有高阶分量，不是仿向量")
        vec = tuple(a.coefficient(basis_mask(j)) for j in range(1, a.n + 1))
        return cls(a.n, a.coefficient(0), vec)

    def to_multivector(self) -> Multivector:
        coeffs = {0: self.x0}
        for j, value in enumerate(self.vec, start=1):
            coeffs[basis_mask(j)] = value
        return Multivector(self.n, coeffs)

    def components(self) -> Tuple[Scalar, ...]:
        return (self.x0,) + self.vec

    def vector_norm_squared(self) -> Scalar:
        return sum((v * v for v in self.vec), 0)

    def vector_norm(self) -> float:
        return math.sqrt(self.vector_norm_squared())

    def norm_squared(self) -> Scalar:
        return self.x0 * self.x0 + self.vector_norm_squared()

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def conjugate(self) -> 'Paravector':
        return Paravector(self.n, self.x0, tuple(-v for v in self.vec))

    def __add__(self, other: 'Paravector') -> 'Paravector':
        if other.n != self.n:
            raise DimensionMismatchError(f"维度不一致: {self.n} != {other.n}")
        return Paravector(self.n, self.x0 + other.x0, tuple(a + b for a, b in zip(self.vec, other.vec)))

    def __sub__(self, other: 'Paravector') -> 'Paravector':
        return self + other.scale(-1)

    def scale(self, factor: Scalar) -> 'Paravector':
        return Paravector(self.n, self.x0 * factor, tuple(v * factor for v in self.vec))

    def is_zero(self) -> bool:
        return self.x0 == 0 and all(v == 0 for v in self.vec)

    def to_float(self) -> 'Paravector':
        return Paravector(self.n, float(self.x0), tuple(float(v) for v in self.vec))


def paravector_inverse(x: Paravector) -> Paravector:
    """x^{-1} = x̄ / |x|^2"""
    norm_sq = x.norm_squared()
    if norm_sq == 0:
        raise DomainError("零仿向量不可逆", details={"point": list(map(float, x.components()))})
    if isinstance(norm_sq, int):
        norm_sq = Fraction(norm_sq)
    return x.conjugate().scale(1 / norm_sq)


def _axial_mul(p: Tuple[Scalar, Scalar], q: Tuple[Scalar, Scalar], s: Scalar) -> Tuple[Scalar, Scalar]:
    # (a + b x̲)(c + e x̲) with x̲^2 = -s
    a, b = p
    c, e = q
    return a * c - b * e * s, a * e + b * c


def paravector_pow(x: Paravector, l: int) -> Paravector:
    """
    整数幂 x^l

    x^l 是 z^l 的诱导函数：z = x0 + i|x̲| 时 x^l = Re(z^l) + ω Im(z^l)。
    这里在 span{1, x̲} 上做二进制幂运算（x̲^2 = -|x̲|^2 为标量），
    有理输入时结果精确，无需开方。
    """
    if l == 0:
        return Paravector.real(x.n, 1)
    base = x
    if l < 0:
        base = paravector_inverse(x)
        l = -l

    s = base.vector_norm_squared()
    result: Tuple[Scalar, Scalar] = (1, 0)
    square: Tuple[Scalar, Scalar] = (base.x0, 1)
    while l:
        if l & 1:
            result = _axial_mul(result, square, s)
        l >>= 1
        if l:
            square = _axial_mul(square, square, s)

    a, b = result
    return Paravector(base.n, a, tuple(b * v for v in base.vec))
