"""Environment-driven settings."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

DEFAULT_FQSYM_CAP = 5


def load_env_file(path: Path) -> None:
    """Export KEY=VALUE lines of ``path`` that are not already set in the environment."""
    if not path.exists():
        return
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#") and "=" in line:
            key, value = line.split("=", 1)
            os.environ.setdefault(key.strip(), value.strip())


@dataclass(frozen=True)
class Settings:
    """Process-wide defaults, overridable from the environment."""
    cache_dir: Path
    fqsym_cap: int = DEFAULT_FQSYM_CAP

    @classmethod
    def from_env(cls) -> "Settings":
        """Read FREEPRIM_CACHE_DIR and FREEPRIM_FQSYM_CAP."""
        env_dir = os.environ.get("FREEPRIM_CACHE_DIR")
        cache_dir = Path(env_dir) if env_dir else Path.cwd() / "data" / "cache"

        cap_text: Optional[str] = os.environ.get("FREEPRIM_FQSYM_CAP")
        try:
            cap = int(cap_text) if cap_text else DEFAULT_FQSYM_CAP
        except ValueError:
            cap = DEFAULT_FQSYM_CAP
        return cls(cache_dir=cache_dir, fqsym_cap=cap)
