#!/usr/bin/env python3
"""
Fueter映射命令行主入口文件
用法: python main.py <eval|verify|table|kernel|inverse|roundtrip> --n N ...
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
