# intrinsic函数模块
"""
实中心处的实系数 Laurent 级数（holomorphic intrinsic 函数）
复数求值、到 R^{n+1} 的诱导函数，以及到精确轴向对的桥接
"""

import json
import logging
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.axial_calculus import AxialPair, axial_power
from src.core.clifford import Paravector, Scalar, paravector_pow
from src.core.errors import ConfigError, ParseError, RegionError

logger = logging.getLogger(__name__)

Coefficient = Union[int, Fraction, float]


@dataclass(frozen=True)
class ComplexPoint:
    """复数点 z = re + i im；分量可以是有理数以支持精确运算"""
    re: Scalar
    im: Scalar = 0

    @classmethod
    def from_complex(cls, value: complex) -> 'ComplexPoint':
        value = complex(value)
        return cls(value.real, value.imag)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> 'ComplexPoint':
        return ComplexPoint(self.re, -self.im)

    def abs(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def as_paravector(self) -> Paravector:
        """n = 1 时 R_{0,1} 同构于复数：i 对应 e_1"""
        return Paravector(1, self.re, (self.im,))


class LaurentSeries(BaseModel):
    """
    实中心 a 处的 Laurent 级数 Σ c_l (z - a)^l
    系数全为实数即是 intrinsic 条件；环域半径由调用方给出
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    center: float = 0.0
    coeffs: Dict[int, Coefficient] = Field(default_factory=dict)
    inner_radius: float = Field(0.0, ge=0.0)
    outer_radius: Optional[float] = Field(None, gt=0.0)

    @field_validator('center')
    @classmethod
    def validate_center(cls, v):
        """中心必须是有限实数"""
        if not math.isfinite(v):
            raise ValueError(f'级数中心必须是有限实数: {v}')
        return v

    @field_validator('coeffs', mode='before')
    @classmethod
    def reject_non_real(cls, v):
        """类型转换之前拒绝非实数系数"""
        if isinstance(v, dict):
            for exponent, value in v.items():
                if isinstance(value, numbers.Complex) and not isinstance(value, numbers.Real):
                    raise ValueError(f'系数 c_{exponent} 不是实数: {value}')
        return v

    @field_validator('coeffs')
    @classmethod
    def validate_coeffs(cls, v):
        """系数必须是有限数"""
        for exponent, value in v.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise ValueError(f'系数 c_{exponent} 不是有限数: {value}')
        return {l: c for l, c in v.items() if c != 0}

    @model_validator(mode='after')
    def validate_annulus(self):
        """外半径必须大于内半径"""
        if self.outer_radius is not None and self.outer_radius <= self.inner_radius:
            raise ValueError(f'外半径 {self.outer_radius} 必须大于内半径 {self.inner_radius}')
        return self

    @classmethod
    def monomial(cls, l: int, coefficient: Coefficient = 1, **kwargs) -> 'LaurentSeries':
        if l < 0:
            kwargs.setdefault('inner_radius', 1e-12)
        return cls(coeffs={l: coefficient}, **kwargs)

    @property
    def l_min(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    @property
    def l_max(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def ordered_terms(self):
        """按 |l| 升序（同 |l| 时负指数在前）排列的 (l, c_l)"""
        return sorted(self.coeffs.items(), key=lambda item: (abs(item[0]), item[0]))

    def check_radius(self, distance: float) -> None:
        """检查 |z - a| 是否落在环域内"""
        if self.l_min is not None and self.l_min < 0 and self.inner_radius <= 0.0:
            raise RegionError("含负指数的级数需要正的内半径才能求值",
                              details={"l_min": self.l_min})
        if distance < self.inner_radius or (self.outer_radius is not None and distance > self.outer_radius):
            raise RegionError(
                f"|z - a| = {distance:.6g} 不在环域 [{self.inner_radius}, {self.outer_radius}] 内",
                details={"distance": distance, "inner_radius": self.inner_radius,
                         "outer_radius": self.outer_radius},
            )

    def to_json_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "center": self.center,
            "coeffs": {str(l): float(c) for l, c in sorted(self.coeffs.items())},
            "inner_radius": self.inner_radius,
        }
        if self.outer_radius is not None:
            payload["outer_radius"] = self.outer_radius
        return payload


def _shift(x: Scalar, center: float) -> Scalar:
    if center == 0:
        return x
    if isinstance(x, (int, Fraction)):
        return x - Fraction(center)
    return x - center


def eval_holo(f: LaurentSeries, z: ComplexPoint) -> ComplexPoint:
    """
    f0(z) = u + i v
    复数运算借用 R_{0,1} 的仿向量幂，有理输入时结果精确
    """
    w = ComplexPoint(_shift(z.re, f.center), z.im)
    f.check_radius(w.abs())
    base = w.as_paravector()
    u: Scalar = 0
    v: Scalar = 0
    for l, c in f.ordered_terms():
        power = paravector_pow(base, l)
        u += c * power.x0
        v += c * power.vec[0]
    return ComplexPoint(u, v)


def induce(f: LaurentSeries, x: Paravector) -> Paravector:
    """
    诱导函数 f⃗0(x) = u(x0, |x̲|) + (x̲/|x̲|) v(x0, |x̲|)

    对 Σ c_l (z-a)^l 有 f⃗0(x) = Σ c_l (x-a)^l，故直接在 R_{0,n} 中求仿向量幂；
    结果的向量部分总平行于 x̲，|x̲| = 0 时为实数 u(x0, 0)
    """
    shifted = Paravector(x.n, _shift(x.x0, f.center), x.vec)
    f.check_radius(shifted.norm())
    result = Paravector.real(x.n, 0)
    for l, c in f.ordered_terms():
        result = result + paravector_pow(shifted, l).scale(c)
    return result


def axial_of_series(f: LaurentSeries, n: int) -> AxialPair:
    """
    有限 Laurent 和的精确轴向对，变量为平移后的 x_a = x - a

    A(x0, r) = u，B(x0, r) = v，由 (x0 + ω r)^l 的二项展开得到
    """
    result = AxialPair.zero(n)
    for l, c in f.ordered_terms():
        result = result + axial_power(l, n).scale(c)
    return result


def load_series(path: Union[str, Path]) -> LaurentSeries:
    """读取 JSON 级数文件"""
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"级数文件不存在: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"级数文件不是合法的JSON: {path}: {exc}") from exc
    return parse_series(data)


def parse_series(data: Dict[str, Any]) -> LaurentSeries:
    try:
        return LaurentSeries(**data)
    except ValidationError as exc:
        logger.warning(f"级数验证失败: {exc}")
        raise ConfigError(f"级数验证失败: {exc}") from exc
    except TypeError as exc:
        raise ParseError(f"级数格式错误: {exc}") from exc
