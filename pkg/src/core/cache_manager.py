#!/usr/bin/env python3
"""
缓存管理模块
为求积节点表、级数系数表等不可变数值表提供线程安全的内存缓存
"""

import logging
import threading
from typing import Any, Callable, Dict, Hashable


class TableCache:
    """
    表缓存管理器
    每个键只初始化一次；缓存的值在构造后视为不可变，读取不加锁
    """

    def __init__(self, name: str, max_entries: int = 256):
        self.name = name
        self.max_entries = max_entries
        self._tables: Dict[Hashable, Any] = {}
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0
        self.logger = logging.getLogger(__name__)

    def get_or_create(self, key: Hashable, factory: Callable[[], Any]) -> Any:
        """获取缓存表，不存在时调用factory构造"""
        table = self._tables.get(key)
        if table is not None:
            self._hits += 1
            return table

        with self._lock:
            # 双重检查：每个键只构造一次
            table = self._tables.get(key)
            if table is not None:
                self._hits += 1
                return table

            self._misses += 1
            self.logger.debug(f"[{self.name}] cache miss: {key}")
            table = factory()

            # 超出上限时清理最早的条目
            if len(self._tables) >= self.max_entries:
                oldest = next(iter(self._tables))
                del self._tables[oldest]
            self._tables[key] = table
            return table

    def clear(self) -> None:
        """清空缓存"""
        with self._lock:
            self._tables.clear()
            self._hits = 0
            self._misses = 0

    def get_stats(self) -> Dict[str, Any]:
        """获取缓存统计信息"""
        return {
            'name': self.name,
            'entries': len(self._tables),
            'hits': self._hits,
            'misses': self._misses,
            'max_entries': self.max_entries,
        }
