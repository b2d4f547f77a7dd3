#!/usr/bin/env python3
"""
Fueter映射命令行前端
子命令：eval, verify, table, kernel, inverse, roundtrip
结果写到 stdout 或 --out，日志写到 stderr
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.axial_calculus import is_monogenic, relative_dirac_residual
from src.core.clifford import Paravector
from src.core.error_handler import ErrorHandler, create_success_response
from src.core.errors import DimensionMismatchError, ToleranceViolation
from src.fueter_map import beta_monomial, beta_series, evaluate_monomial
from src.initialization import configure_logging, load_config, load_config_data
from src.intrinsic import ComplexPoint, load_series, parse_series
from src.inverse_fueter import AxialSampler, InverseFueter, laurent_expand, roundtrip_check
from src.kernels import kernel_axial, kernel_limit_minus, kernel_limit_plus
from src.validation import (
    FueterConfig, InverseJob, RoundtripJob, RunConfig, parse_point, validate_config_data,
)

logger = logging.getLogger(__name__)

SETTINGS_SECTIONS = ('logging', 'tolerance', 'quadrature', 'series', 'inverse', 'verify', 'output')


# 输出编码

def format_number(value: float, digits: int = 17) -> str:
    if not math.isfinite(value):
        return 'null'
    return format(value, f'.{digits}g')


def encode_json(obj: Any, digits: int = 17) -> str:
    """确定性 JSON：键排序，浮点数按固定有效数字输出"""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_number(float(obj), digits)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return '{' + ', '.join(f'{json.dumps(k, ensure_ascii=False)}: {encode_json(v, digits)}'
                               for k, v in items) + '}'
    if isinstance(obj, (list, tuple, np.ndarray)):
        return '[' + ', '.join(encode_json(v, digits) for v in obj) + ']'
    if isinstance(obj, Fraction):
        return format_number(float(obj), digits)
    return json.dumps(str(obj), ensure_ascii=False)


def encode_csv(rows: List[Dict[str, Any]], digits: int = 17) -> str:
    """CSV：首列 schema，其余列按首行键顺序"""
    buffer = io.StringIO()
    if not rows:
        return 'schema\n'
    columns = ['schema'] + [key for key in rows[0] if key != 'schema']
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        values = []
        for key in columns:
            value = 1 if key == 'schema' else row.get(key, '')
            if isinstance(value, (float, np.floating)):
                value = format_number(float(value), digits)
            elif value is None:
                value = ''
            values.append(value)
        writer.writerow(values)
    return buffer.getvalue()


def paravector_list(x: Paravector) -> List[float]:
    return [float(c) for c in x.to_float().components()]


# 子命令

def cmd_eval(run: RunConfig, config: FueterConfig) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """β(f0)(x)"""
    series = load_series(run.series)
    x = Paravector.from_components(run.point)
    value = beta_series(series, run.n, x, config.series)
    components = paravector_list(value)
    data = {"n": run.n, "point": list(run.point), "value": components}
    row = {"n": run.n}
    row.update({f"x{j}": c for j, c in enumerate(run.point)})
    row.update({f"v{j}": c for j, c in enumerate(components)})
    return data, [row]


def _sample_points(n: int, count: int, seed: int) -> List[Paravector]:
    """半径在 [0.5, 2] 之间的随机点"""
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        raw = rng.normal(size=n + 1)
        norm = float(np.linalg.norm(raw))
        if norm == 0.0:
            continue
        radius = rng.uniform(0.5, 2.0)
        points.append(Paravector.from_components((raw * radius / norm).tolist()))
    return points


def cmd_verify(run: RunConfig, config: FueterConfig) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """β(z^l) 的 Vekua 残差：符号判定加数值 Dirac 差分"""
    n, l = run.n, run.l
    image = beta_monomial(l, n)
    if image is None:
        data = {"n": n, "l": l, "classification": "zero", "in_kernel": True,
                "exact_zero": True, "max_numeric_residual": 0.0}
        return data, [dict(data)]

    exact_zero = is_monogenic(image.unit)
    settings = config.verify
    residual = 0.0
    for x in _sample_points(n, settings.sample_points, settings.seed):
        residual = max(residual, relative_dirac_residual(
            lambda p: evaluate_monomial(image.index, n, p), x, settings.stencil_step))

    data = {"n": n, "l": l, "classification": f"P^({image.index})", "in_kernel": False,
            "exact_zero": exact_zero, "max_numeric_residual": residual,
            "residual_tol": settings.residual_tol}
    if not exact_zero or residual > settings.residual_tol:
        raise ToleranceViolation(f"β(z^{l}) 的 Vekua 残差超出容差", details=data)
    return data, [dict(data)]


def cmd_table(run: RunConfig, config: FueterConfig) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """每个 l 一行：类别与轴上限制系数"""
    n = run.n
    rows = []
    for l in range(run.l_min, run.l_max + 1):
        image = beta_monomial(l, n)
        if image is None:
            rows.append({"n": n, "l": l, "class": "zero", "index": None,
                         "axis_degree": None, "axis_coefficient": 0.0})
            continue
        degree = image.index if image.index >= 0 else image.index - (n - 1)
        rows.append({"n": n, "l": l, "class": f"P^({image.index})", "index": image.index,
                     "axis_degree": degree, "axis_coefficient": image.axis_coefficient()})
    return {"n": n, "rows": rows}, rows


def cmd_kernel(run: RunConfig, config: FueterConfig) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """K±_n(x0 + r e1)"""
    n = run.n
    a_val, b_val = kernel_axial(n, run.which, run.x0, run.r, config.quadrature)
    limit = kernel_limit_plus(n, run.x0) if run.which == 'plus' else kernel_limit_minus(n, run.x0)
    value = [a_val, b_val] + [0.0] * (n - 1)
    data = {"n": n, "which": run.which, "x0": run.x0, "r": run.r,
            "nodes": config.quadrature.node_count, "A": a_val, "B": b_val,
            "value": value, "axis_limit": limit}
    row = {k: v for k, v in data.items() if k != "value"}
    return data, [row]


def _job_data(path: str, config: FueterConfig) -> Dict[str, Any]:
    data = load_config_data(path)
    job = {k: v for k, v in data.items() if k not in SETTINGS_SECTIONS}
    if 'contour' not in job and 'center' in job:
        job['contour'] = {k: job.pop(k) for k in ('center', 'radius', 'samples') if k in job}
    if isinstance(job.get('contour'), dict):
        job['contour'].setdefault('samples', config.inverse.samples)
    return job


def cmd_inverse(run: RunConfig, config: FueterConfig) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """由 β(f0) 在围道上的采样重建 g0，可选地在实中心重新展开"""
    job = validate_config_data(InverseJob, _job_data(run.config, config))
    series = parse_series(job.function)
    sampler = AxialSampler.from_series(series, run.n, config.series)
    solver = InverseFueter(sampler, job.contour, run.n, config.series, config.inverse)

    rows = []
    for re, im in job.points:
        value = complex(solver.evaluate(ComplexPoint(re, im)))
        rows.append({"re": re, "im": im, "value_re": value.real, "value_im": value.imag})
    data: Dict[str, Any] = {"n": run.n, "contour": job.contour.model_dump(), "points": rows}
    if job.expand is not None:
        expansion = laurent_expand(
            solver, job.expand.center, job.expand.radius,
            (job.expand.l_min, job.expand.l_max), job.expand.samples,
            config.inverse.intrinsic_tol,
        )
        data["series"] = expansion.to_json_dict()
    return data, rows


def _test_point(components: Sequence[float], n: int) -> Paravector:
    if len(components) == 2:
        return Paravector(n, float(components[0]), (float(components[1]),) + (0.0,) * (n - 1))
    if len(components) == n + 1:
        return Paravector.from_components([float(c) for c in components])
    raise DimensionMismatchError(f"测试点需要 2 或 {n + 1} 个分量，收到 {len(components)}")


def cmd_roundtrip(run: RunConfig, config: FueterConfig) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """f0 -> β -> 逆映射 -> β 的往返检验"""
    job = validate_config_data(RoundtripJob, _job_data(run.config, config))
    series = parse_series(job.function)
    points = [_test_point(p, run.n) for p in job.test_points]
    report = roundtrip_check(series, run.n, job.contour, points, config.series,
                             config.inverse, job.spread_tol)
    data = report.model_dump()
    if not report.passed:
        raise ToleranceViolation("往返检验的比例常数离散度超出容差", details=data)
    rows = [point.model_dump() for point in report.points]
    return data, rows


COMMAND_HANDLERS = {
    'eval': cmd_eval,
    'verify': cmd_verify,
    'table': cmd_table,
    'kernel': cmd_kernel,
    'inverse': cmd_inverse,
    'roundtrip': cmd_roundtrip,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='fueter', description='Fueter映射计算工具')
    subparsers = parser.add_subparsers(dest='command', required=True)

    def common(sub):
        sub.add_argument('--n', type=int, required=True, help='维度索引 n')
        sub.add_argument('--config', help='YAML/JSON 配置文件')
        sub.add_argument('--out', help='输出文件（默认 stdout）')
        sub.add_argument('--format', choices=['json', 'csv'], help='输出格式')
        return sub

    eval_parser = common(subparsers.add_parser('eval', help='计算 β(f0)(x)'))
    eval_parser.add_argument('--series', required=True, help='Laurent 级数 JSON 文件')
    eval_parser.add_argument('--point', required=True, help='x0,x1,...,xn')

    verify_parser = common(subparsers.add_parser('verify', help='验证 β(z^l) 的单演性'))
    verify_parser.add_argument('--l', type=int, required=True)

    table_parser = common(subparsers.add_parser('table', help='单项式分类表'))
    table_parser.add_argument('--lmin', type=int, required=True)
    table_parser.add_argument('--lmax', type=int, required=True)

    kernel_parser = common(subparsers.add_parser('kernel', help='计算 K±_n'))
    kernel_parser.add_argument('--which', choices=['plus', 'minus'], default='plus')
    kernel_parser.add_argument('--x0', type=float, required=True)
    kernel_parser.add_argument('--r', type=float, required=True)
    kernel_parser.add_argument('--quad', type=int, help='Gauss–Jacobi 节点数')

    common(subparsers.add_parser('inverse', help='逆 Fueter 映射'))
    common(subparsers.add_parser('roundtrip', help='往返检验'))
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields = {
        'command': args.command,
        'n': args.n,
        'config': args.config,
        'out': args.out,
        'format': args.format,
        'series': getattr(args, 'series', None),
        'point': parse_point(args.point) if getattr(args, 'point', None) else None,
        'l': getattr(args, 'l', None),
        'l_min': getattr(args, 'lmin', None),
        'l_max': getattr(args, 'lmax', None),
        'which': getattr(args, 'which', 'plus'),
        'x0': getattr(args, 'x0', None),
        'r': getattr(args, 'r', None),
        'nodes': getattr(args, 'quad', None),
    }
    return validate_config_data(RunConfig, fields)


def _apply_overrides(config: FueterConfig, run: RunConfig) -> FueterConfig:
    """命令行参数优先于配置文件"""
    if run.nodes is not None:
        config = config.model_copy(update={
            'quadrature': config.quadrature.model_copy(update={'node_count': run.nodes})})
    if run.format is not None:
        config = config.model_copy(update={
            'output': config.output.model_copy(update={'format': run.format})})
    return config


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行入口，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    digits = 17
    out = getattr(args, 'out', None)
    try:
        run = _run_config(args)
        config = _apply_overrides(load_config(run.config), run)
        configure_logging(config)
        digits = config.output.digits
        logger.info(f"开始执行命令 {command} (n={run.n})")
        data, rows = COMMAND_HANDLERS[command](run, config)
        if config.output.format == 'csv':
            text = encode_csv(rows, digits)
        else:
            text = encode_json(create_success_response(command, data), digits) + '\n'
        _write(text, run.out)
        logger.info(f"命令 {command} 完成")
        return 0
    except Exception as exc:
        exit_code, payload = ErrorHandler.handle_exception(exc, command)
        _write(encode_json(payload, digits) + '\n', out)
        return exit_code


if __name__ == '__main__':
    sys.exit(main())
