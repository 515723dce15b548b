from __future__ import annotations
from typing import Any, Dict, Hashable, Optional, Tuple
import threading
import time

from .logger import log


class MemoCache:
    """Bounded memo table: lock-free reads, inserts serialized by a lock."""

    def __init__(self, name: str, max_size: int = 4096, enabled: bool = True):
        self.name = name
        self.max_size = max_size
        self.enabled = enabled
        self.cache: Dict[Hashable, Tuple[Any, float]] = {}
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    def get(self, key: Hashable) -> Optional[Any]:
        if not self.enabled:
            return None
        entry = self.cache.get(key)
        if entry is None:
            self.misses += 1
            return None
        self.hits += 1
        return entry[0]

    def put(self, key: Hashable, value: Any) -> None:
        if not self.enabled:
            return
        with self._lock:
            self.cache[key] = (value, time.time())
            if len(self.cache) > self.max_size:
                items = sorted(self.cache.items(), key=lambda kv: kv[1][1], reverse=True)[: self.max_size // 2]
                self.cache = dict(items)
                log.debug("cache %s trimmed to %d entries", self.name, len(self.cache))

    def clear(self) -> None:
        with self._lock:
            self.cache = {}
            self.hits = self.misses = 0

    def stats(self) -> Dict[str, int]:
        return {"size": len(self.cache), "hits": self.hits, "misses": self.misses}
