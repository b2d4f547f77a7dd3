# 应用初始化模块
"""
Fueter映射命令行初始化模块
负责配置加载、环境变量覆盖和日志配置
"""

import logging
import logging.handlers
import math
import os
import sys
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from src.core.errors import ConfigError, ParseError
from src.validation import FueterConfig, validate_config_data

logger = logging.getLogger(__name__)

TOLERANCE_ENV = 'FUETER_TOL'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def load_config_data(path: Union[str, Path]) -> Dict[str, Any]:
    """读取 YAML（或 JSON）配置文件"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as exc:
        raise ParseError(f"配置文件不存在: {path}") from exc
    except yaml.YAMLError as exc:
        raise ParseError(f"配置文件解析失败: {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"配置文件顶层必须是映射: {path}")
    return data


def tolerance_from_env(environ: Optional[Mapping[str, str]] = None) -> Optional[float]:
    """读取 FUETER_TOL；无法解析或非正数时报配置错误"""
    environ = os.environ if environ is None else environ
    raw = environ.get(TOLERANCE_ENV)
    if raw is None or raw.strip() == '':
        return None
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{TOLERANCE_ENV} 不是合法的数值: {raw!r}") from exc
    if not math.isfinite(value) or value <= 0.0:
        raise ConfigError(f"{TOLERANCE_ENV} 必须是有限正数: {raw!r}")
    return value


def load_config(path: Optional[Union[str, Path]] = None,
                environ: Optional[Mapping[str, str]] = None) -> FueterConfig:
    """加载配置：默认值 < 配置文件 < 环境变量"""
    data = load_config_data(path) if path is not None else {}
    config = validate_config_data(FueterConfig, data)
    tolerance = tolerance_from_env(environ)
    if tolerance is not None:
        logger.debug(f"{TOLERANCE_ENV} 覆盖容差为 {tolerance}")
        config = config.with_tolerance(tolerance)
    return config


def configure_logging(config: FueterConfig) -> None:
    """配置日志：stderr 输出，设置了 logging.file 时追加轮转文件"""
    settings = config.logging
    handlers = [logging.StreamHandler(sys.stderr)]
    if settings.file:
        log_path = Path(settings.file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(
            logging.handlers.RotatingFileHandler(
                log_path,
                maxBytes=settings.max_bytes,
                backupCount=settings.backup_count,
                encoding='utf-8'
            )
        )
    logging.basicConfig(
        level=getattr(logging, settings.level),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def initialize_application(config_path: Optional[Union[str, Path]] = None) -> FueterConfig:
    """加载配置并完成日志配置"""
    config = load_config(config_path)
    configure_logging(config)
    logger.debug(f"配置加载完成: {config.model_dump()}")
    return config
