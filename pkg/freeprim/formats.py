"""
On-disk formats: the presentation file schema and deterministic JSON output.

Rationals are always stored as integer [numerator, denominator] pairs; floats
never appear in any file this package reads or writes.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .bialg import Presentation
from .errors import PresentationInvalidError

logger = logging.getLogger(__name__)


# ------------------------------------------------------------------
# Presentation file schema
# ------------------------------------------------------------------
class ProductEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int = Field(ge=0)
    q: int = Field(ge=0)
    i: int = Field(ge=0)
    j: int = Field(ge=0)
    result: List[Tuple[int, int, int]]

    @field_validator("result")
    @classmethod
    def _denominators(cls, value: List[Tuple[int, int, int]]) -> List[Tuple[int, int, int]]:
        if any(den == 0 for _, den, _ in value):
            raise ValueError("zero denominator")
        return value


class CoproductEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=0)
    i: int = Field(ge=0)
    terms: List[Tuple[int, int, int, int, int]]

    @field_validator("terms")
    @classmethod
    def _denominators(cls, value: List[Tuple[int, int, int, int, int]]) -> List[Tuple[int, int, int, int, int]]:
        if any(term[1] == 0 for term in value):
            raise ValueError("zero denominator")
        return value


class PresentationFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    N: int = Field(ge=0)
    basis: List[List[str]]
    product: List[ProductEntry] = Field(default_factory=list)
    coproduct: List[CoproductEntry] = Field(default_factory=list)


def parse_presentation(text: str) -> Presentation:
    """Validate presentation JSON text and build the Presentation."""
    try:
        document = PresentationFile.model_validate_json(text)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
            for error in exc.errors()
        )
        raise PresentationInvalidError(f"Invalid presentation file: {problems}") from exc
    return Presentation.from_dict(document.model_dump())


def load_presentation(path: Path) -> Presentation:
    """Read and validate a presentation file; unreadable or non-UTF-8 files are input errors."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise PresentationInvalidError(f"Cannot read presentation file {path}: {exc}") from exc
    presentation = parse_presentation(text)
    logger.info("Loaded presentation '%s' up to degree %s from %s", presentation.name, presentation.N, path)
    return presentation


# ------------------------------------------------------------------
# JSON output
# ------------------------------------------------------------------
def render_json(data: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, data: Any) -> None:
    """Write ``data`` to ``path`` through a temporary file and an atomic rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    descriptor, temp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(descriptor, "w", encoding="utf-8") as handle:
            handle.write(render_json(data))
        os.replace(temp_name, target)
    except Exception as e:
        logger.error("Error writing %s: %s", target, e)
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise


def export_presentation(h: Presentation, path: Path) -> None:
    write_json(path, h.to_dict())
    logger.info("Exported presentation '%s' to %s", h.name, path)
