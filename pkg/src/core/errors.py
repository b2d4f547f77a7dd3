# 异常定义模块
"""
Fueter映射库异常层次
每个异常类携带error_code，由ErrorHandler映射到CLI退出码
"""

from typing import Any, Dict, Optional


class FueterError(Exception):
    """所有库异常的基类"""

    error_code = "INTERNAL_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ConfigError(FueterError):
    """配置或参数错误"""

    error_code = "CONFIG_ERROR"


class ParseError(FueterError):
    """输入文件或命令行数值解析失败"""

    error_code = "PARSE_ERROR"


class DimensionMismatchError(FueterError, ValueError):
    """维度不一致或超出允许范围的blade掩码"""

    error_code = "DIMENSION_ERROR"


class DomainError(FueterError):
    """定义域错误：零点求逆、单位球面上的点、n超出范围等"""

    error_code = "DOMAIN_ERROR"


class RegionError(FueterError):
    """收敛区域错误：环域之外、级数区间被拒绝、级数发散"""

    error_code = "REGION_ERROR"


class AxialRepresentationError(FueterError):
    """轴向表示错误：奇偶性破坏或半整数幂次不兼容"""

    error_code = "REPRESENTATION_ERROR"


class NonIntrinsicError(FueterError):
    """Laurent系数虚部超出容差，函数不是intrinsic的"""

    error_code = "NON_INTRINSIC"


class ToleranceViolation(FueterError):
    """验证失败：残差或偏差超出容差"""

    error_code = "TOLERANCE_VIOLATION"
