# 统一错误处理模块
"""
Fueter映射命令行统一错误处理模块
提供标准化的错误信封、退出码映射和成功响应
"""

import logging
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ValidationError

from .errors import FueterError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class ErrorResponse(BaseModel):
    """标准错误响应模型"""
    schema_version: int = SCHEMA_VERSION
    status: str = "error"
    error_code: str
    message: str
    exit_code: int
    details: Optional[Dict[str, Any]] = None

    def to_payload(self) -> Dict[str, Any]:
        """转换为输出字典（字段名使用schema）"""
        payload = self.model_dump()
        payload["schema"] = payload.pop("schema_version")
        return payload


class ErrorHandler:
    """统一错误处理器"""

    # 错误代码映射
    ERROR_CODES = {
        # 通用错误
        "INTERNAL_ERROR": {"exit_code": 1, "message": "内部错误"},
        "VALIDATION_ERROR": {"exit_code": 2, "message": "输入验证失败"},
        "CONFIG_ERROR": {"exit_code": 2, "message": "配置错误"},
        "PARSE_ERROR": {"exit_code": 2, "message": "输入解析失败"},
        "DIMENSION_ERROR": {"exit_code": 2, "message": "维度不一致"},

        # 数学定义域与区域错误
        "DOMAIN_ERROR": {"exit_code": 3, "message": "点不在定义域内"},
        "REGION_ERROR": {"exit_code": 3, "message": "点不在收敛区域内"},
        "REPRESENTATION_ERROR": {"exit_code": 3, "message": "轴向表示无效"},

        # 验证失败
        "NON_INTRINSIC": {"exit_code": 4, "message": "函数不是intrinsic的"},
        "TOLERANCE_VIOLATION": {"exit_code": 4, "message": "验证超出容差"},
    }

    @classmethod
    def exit_code_for(cls, error_code: str) -> int:
        """查询错误代码对应的退出码"""
        return cls.ERROR_CODES.get(error_code, cls.ERROR_CODES["INTERNAL_ERROR"])["exit_code"]

    @classmethod
    def create_error_response(
        cls,
        error_code: str,
        custom_message: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> ErrorResponse:
        """创建标准错误响应"""
        if error_code not in cls.ERROR_CODES:
            logger.warning(f"Unknown error code: {error_code}")
            error_code = "INTERNAL_ERROR"

        error_info = cls.ERROR_CODES[error_code]
        return ErrorResponse(
            error_code=error_code,
            message=custom_message or error_info["message"],
            exit_code=error_info["exit_code"],
            details=details,
        )

    @classmethod
    def handle_exception(cls, exc: Exception, command: str = "") -> Tuple[int, Dict[str, Any]]:
        """处理异常并返回 (退出码, 错误信封)"""
        # 根据异常类型确定错误代码
        if isinstance(exc, FueterError):
            error_code = exc.error_code
            details = dict(exc.details)
        elif isinstance(exc, ValidationError):
            error_code = "CONFIG_ERROR"
            details = {"validation_errors": [e.get("msg", "") for e in exc.errors()]}
        elif isinstance(exc, (ValueError, TypeError)):
            error_code = "VALIDATION_ERROR"
            details = {}
        elif isinstance(exc, (FileNotFoundError, IsADirectoryError, PermissionError)):
            error_code = "PARSE_ERROR"
            details = {}
        else:
            error_code = "INTERNAL_ERROR"
            details = {}

        if command:
            details["command"] = command

        response = cls.create_error_response(error_code, custom_message=str(exc), details=details)
        if response.exit_code == 1:
            logger.error(f"命令 {command} 内部错误: {exc}", exc_info=True)
        else:
            logger.error(f"命令 {command} 失败 [{error_code}] exit={response.exit_code}: {exc}")
        return response.exit_code, response.to_payload()


# 便捷函数
def create_success_response(command: str, data: Dict[str, Any]) -> Dict[str, Any]:
    """创建标准成功响应"""
    payload = {
        "schema": SCHEMA_VERSION,
        "status": "success",
        "command": command,
    }
    payload.update(data)
    return payload
