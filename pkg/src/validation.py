#!/usr/bin/env python3
"""
输入验证模块
配置各节、数值参数（求积、级数截断、积分围道）和命令行运行参数的 pydantic 模型
"""

import logging
import math
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.clifford import MAX_DIMENSION
from src.core.errors import ConfigError

logger = logging.getLogger(__name__)


class QuadratureSpec(BaseModel):
    """Gauss–Jacobi 求积规格，权函数 (1-ρ^2)^{(n-3)/2}"""
    model_config = ConfigDict(frozen=True)

    node_count: int = Field(64, ge=4, le=4096)
    scheme: Literal['gauss-jacobi'] = 'gauss-jacobi'


class SeriesTruncation(BaseModel):
    """级数截断参数；delta 为 |z| = 1 附近拒绝求值的环带半宽"""
    model_config = ConfigDict(frozen=True)

    max_terms: int = Field(10000, ge=1)
    tol: float = Field(1e-12, gt=0.0)
    delta: float = Field(1e-3, gt=0.0, lt=0.5)

    @field_validator('tol')
    @classmethod
    def validate_tol(cls, v):
        """容差必须是有限数"""
        if not math.isfinite(v):
            raise ValueError(f'容差必须是有限正数: {v}')
        return v


class ContourSpec(BaseModel):
    """(y0, r) 半平面中的圆形围道，逆时针方向"""
    model_config = ConfigDict(frozen=True)

    center: Tuple[float, float]
    radius: float = Field(..., gt=0.0)
    samples: int = Field(256, ge=16)

    @field_validator('center')
    @classmethod
    def validate_center(cls, v):
        """圆心必须在上半平面"""
        u0, r0 = v
        if not (math.isfinite(u0) and math.isfinite(r0)):
            raise ValueError(f'圆心坐标必须是有限数: {v}')
        if r0 <= 0.0:
            raise ValueError(f'圆心必须满足 r0 > 0: {v}')
        return v

    @model_validator(mode='after')
    def validate_half_plane(self):
        """围道必须严格位于 r > 0 内"""
        if self.center[1] - self.radius <= 0.0:
            raise ValueError(f'围道与实轴相交: r0 - radius = {self.center[1] - self.radius}')
        return self

    def contains(self, y0: float, r: float) -> bool:
        """点是否在围道所围的开圆盘内"""
        return math.hypot(y0 - self.center[0], r - self.center[1]) < self.radius


class LoggingSettings(BaseModel):
    level: Literal['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'] = 'INFO'
    file: Optional[str] = None
    max_bytes: int = Field(10 * 1024 * 1024, gt=0)
    backup_count: int = Field(5, ge=0)

    @field_validator('level', mode='before')
    @classmethod
    def normalize_level(cls, v):
        """日志级别不区分大小写"""
        return v.upper() if isinstance(v, str) else v


class ToleranceSettings(BaseModel):
    default: float = Field(1e-12, gt=0.0)


class InverseSettings(BaseModel):
    """逆 Fueter 映射参数"""
    samples: int = Field(256, ge=16)
    continuation: bool = True
    continuation_nodes: int = Field(64, ge=4)
    continuation_band: float = Field(0.1, gt=0.0, lt=1.0)
    intrinsic_tol: float = Field(1e-8, gt=0.0)


class VerifySettings(BaseModel):
    stencil_step: float = Field(1e-5, gt=0.0, lt=1.0)
    residual_tol: float = Field(1e-8, gt=0.0)
    sample_points: int = Field(20, ge=1)
    seed: int = 20240601


class OutputSettings(BaseModel):
    format: Literal['json', 'csv'] = 'json'
    digits: int = Field(17, ge=1, le=17)


class FueterConfig(BaseModel):
    """完整配置文件"""
    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    tolerance: ToleranceSettings = Field(default_factory=ToleranceSettings)
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    series: SeriesTruncation = Field(default_factory=SeriesTruncation)
    inverse: InverseSettings = Field(default_factory=InverseSettings)
    verify: VerifySettings = Field(default_factory=VerifySettings)
    output: OutputSettings = Field(default_factory=OutputSettings)

    def with_tolerance(self, tol: float) -> 'FueterConfig':
        """覆盖默认容差与级数容差"""
        return self.model_copy(update={
            'tolerance': ToleranceSettings(default=tol),
            'series': self.series.model_copy(update={'tol': tol}),
        })


class RunConfig(BaseModel):
    """一次命令行运行的参数"""
    command: Literal['eval', 'verify', 'table', 'kernel', 'inverse', 'roundtrip']
    n: int = Field(..., ge=1, le=MAX_DIMENSION)
    series: Optional[str] = None
    point: Optional[List[float]] = None
    l: Optional[int] = None
    l_min: Optional[int] = None
    l_max: Optional[int] = None
    which: Literal['plus', 'minus'] = 'plus'
    x0: Optional[float] = None
    r: Optional[float] = None
    nodes: Optional[int] = Field(None, ge=4, le=4096)
    config: Optional[str] = None
    out: Optional[str] = None
    format: Optional[Literal['json', 'csv']] = None

    @field_validator('point')
    @classmethod
    def validate_point(cls, v):
        """点的分量必须是有限数"""
        if v is not None and not all(math.isfinite(c) for c in v):
            raise ValueError(f'点的分量必须是有限数: {v}')
        return v

    @model_validator(mode='after')
    def validate_command_arguments(self):
        """按命令检查必需参数"""
        if self.command in ('kernel', 'inverse', 'roundtrip') and self.n < 2:
            raise ValueError(f'{self.command} 命令要求 n >= 2，收到 n={self.n}')
        if self.command == 'eval':
            if self.series is None or self.point is None:
                raise ValueError('eval 命令需要 --series 与 --point')
            if len(self.point) != self.n + 1:
                raise ValueError(f'点需要 {self.n + 1} 个分量，收到 {len(self.point)}')
        if self.command == 'verify' and self.l is None:
            raise ValueError('verify 命令需要 --l')
        if self.command == 'table':
            if self.l_min is None or self.l_max is None:
                raise ValueError('table 命令需要 --lmin 与 --lmax')
            if self.l_min > self.l_max:
                raise ValueError(f'lmin={self.l_min} 大于 lmax={self.l_max}')
        if self.command == 'kernel' and (self.x0 is None or self.r is None):
            raise ValueError('kernel 命令需要 --x0 与 --r')
        if self.command == 'kernel' and self.r < 0.0:
            raise ValueError(f'r 必须非负: {self.r}')
        if self.command in ('inverse', 'roundtrip') and self.config is None:
            raise ValueError(f'{self.command} 命令需要 --config')
        return self


class ExpansionSpec(BaseModel):
    """在实中心的圆上重新展开 Laurent 级数"""
    center: float = 0.0
    radius: float = Field(..., gt=0.0)
    l_min: int = 0
    l_max: int = 8
    samples: int = Field(256, ge=16)

    @model_validator(mode='after')
    def validate_range(self):
        if self.l_min > self.l_max:
            raise ValueError(f'l_min={self.l_min} 大于 l_max={self.l_max}')
        return self


class InverseJob(BaseModel):
    """inverse 命令的作业描述；function 为 f0 的 Laurent 级数，采样 β(f0)"""
    function: Dict[str, Any] = Field(default_factory=dict)
    contour: ContourSpec
    points: List[Tuple[float, float]] = Field(default_factory=list)
    expand: Optional[ExpansionSpec] = None


class RoundtripJob(BaseModel):
    """roundtrip 命令的作业描述；测试点为 (x0, r) 或完整的仿向量分量"""
    function: Dict[str, Any]
    contour: ContourSpec
    test_points: List[List[float]] = Field(..., min_length=1)
    spread_tol: float = Field(1e-3, gt=0.0)


def parse_point(text: str) -> List[float]:
    """解析 "x0,x1,...,xn" 形式的点"""
    try:
        return [float(part) for part in text.split(',')]
    except ValueError as exc:
        raise ValueError(f'无法解析点坐标: {text!r}') from exc


def validate_config_data(model_class: Any, data: Dict[str, Any]) -> Any:
    """验证配置数据"""
    try:
        return model_class(**data)
    except ValidationError as e:
        logger.warning(f"配置验证失败: {str(e)}")
        raise ConfigError(f"配置验证失败: {str(e)}", details={"model": model_class.__name__}) from e
    except TypeError as e:
        logger.warning(f"配置格式错误: {str(e)}")
        raise ConfigError(f"配置格式错误: {str(e)}", details={"model": model_class.__name__}) from e
