"""
Per-degree cache of canonical subspaces.

One JSON file per (input hash, degree) holds named subspaces such as the
counital filtration layers ``layer:k`` and the primitives ``prim``. A file
recorded for a different hash is ignored and overwritten on the next save.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from .exactq import Subspace
from .formats import write_json

logger = logging.getLogger(__name__)


class LayerCache:
    """Stores canonical subspace bases under a cache directory."""

    def __init__(self, cache_dir: Optional[Path] = None):
        """Initialize the cache.

        Args:
            cache_dir: Directory for cache files. Defaults to ./data/cache/
        """
        if cache_dir is None:
            cache_dir = Path.cwd() / "data" / "cache"
        self.cache_dir = Path(cache_dir)
        self._entries: Dict[Tuple[str, int], Dict[str, Subspace]] = {}

    def path_for(self, input_hash: str, degree: int) -> Path:
        return self.cache_dir / f"{input_hash}-{degree}.json"

    def _read(self, input_hash: str, degree: int) -> Dict[str, Subspace]:
        key = (input_hash, degree)
        if key in self._entries:
            return self._entries[key]

        entries: Dict[str, Subspace] = {}
        path = self.path_for(input_hash, degree)
        if path.exists():
            try:
                with open(path, "r", encoding="utf-8") as f:
                    data: Dict[str, Any] = json.load(f)
                if data.get("input_hash") == input_hash and data.get("degree") == degree:
                    entries = {
                        name: Subspace.from_dict(space) for name, space in data.get("subspaces", {}).items()
                    }
                else:
                    logger.warning("Ignoring cache file %s recorded for another input", path)
            except Exception as e:
                logger.error("Error loading cache file %s: %s", path, e)
                entries = {}
        self._entries[key] = entries
        return entries

    def load(self, input_hash: str, degree: int, name: str) -> Optional[Subspace]:
        space = self._read(input_hash, degree).get(name)
        if space is not None:
            logger.debug("Cache hit for %s in degree %s", name, degree)
        return space

    def save(self, input_hash: str, degree: int, entries: Mapping[str, Subspace]) -> None:
        merged = dict(self._read(input_hash, degree))
        merged.update(entries)
        self._entries[(input_hash, degree)] = merged
        write_json(
            self.path_for(input_hash, degree),
            {
                "input_hash": input_hash,
                "degree": degree,
                "subspaces": {name: space.to_dict() for name, space in sorted(merged.items())},
            },
        )
