"""
测试配置和fixtures
"""

import json

import numpy as np
import pytest
import yaml

from src.validation import ContourSpec, FueterConfig, InverseSettings, SeriesTruncation

SEED = 20240601


@pytest.fixture
def rng():
    """固定种子的随机数生成器"""
    return np.random.default_rng(SEED)


@pytest.fixture
def sample_config():
    """示例配置"""
    return {
        'logging': {'level': 'warning', 'file': None},
        'tolerance': {'default': 1e-12},
        'quadrature': {'node_count': 64},
        'series': {'max_terms': 10000, 'tol': 1e-12, 'delta': 1e-3},
        'inverse': {'samples': 256, 'continuation': True, 'continuation_nodes': 64},
        'verify': {'stencil_step': 1e-5, 'residual_tol': 1e-8, 'sample_points': 20, 'seed': SEED},
        'output': {'format': 'json', 'digits': 17},
    }


@pytest.fixture
def fueter_config(sample_config):
    """验证后的配置对象"""
    return FueterConfig(**sample_config)


@pytest.fixture
def truncation():
    """默认级数截断参数"""
    return SeriesTruncation()


@pytest.fixture
def roundtrip_contour():
    """往返检验用的围道：圆心 (0, 2)，半径 0.5，256 个采样点"""
    return ContourSpec(center=(0.0, 2.0), radius=0.5, samples=256)


@pytest.fixture
def inverse_settings():
    """逆映射参数"""
    return InverseSettings()


@pytest.fixture
def series_file(tmp_path):
    """把级数写成 JSON 文件，返回路径"""
    def write(coeffs, name='series.json', **extra):
        payload = {'center': 0.0, 'coeffs': {str(l): c for l, c in coeffs.items()}}
        if any(l < 0 for l in coeffs):
            payload['inner_radius'] = 1e-12
        payload.update(extra)
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding='utf-8')
        return str(path)
    return write


@pytest.fixture
def yaml_file(tmp_path):
    """把字典写成 YAML 文件，返回路径"""
    def write(data, name='config.yaml'):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data), encoding='utf-8')
        return str(path)
    return write


@pytest.fixture
def clean_env(monkeypatch):
    """移除可能影响容差的环境变量"""
    monkeypatch.delenv('FUETER_TOL', raising=False)
    return monkeypatch
