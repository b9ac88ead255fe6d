"""Bundled structure-constant files."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .liealg import LieAlgebra, algebra_from_dict

__all__ = ["bundled_names", "load_bundled", "resolve_algebra"]


def _dir():
    return resources.files("kirillov") / "corpus"


def bundled_names() -> list[str]:
    return sorted(p.name[:-5] for p in _dir().iterdir() if p.name.endswith(".json"))


def _build(data: dict, field) -> LieAlgebra:
    if field is not None:
        data = {**data, "field": field}
    return algebra_from_dict(data)


def load_bundled(name: str, field=None) -> LieAlgebra:
    name = name[:-5] if name.endswith(".json") else name
    return _build(json.loads((_dir() / f"{name}.json").read_text()), field)


def resolve_algebra(ref: str, field=None) -> LieAlgebra:
    """Load a file path, falling back to a bundled name (``corpus/n4_q.json`` or ``n4_q``).

    ``field`` ("Q" or ``{"Fp": p}``) reinterprets the structure constants.
    """
    path = Path(ref)
    if path.is_file():
        return _build(json.loads(path.read_text()), field)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in bundled_names():
        return load_bundled(stem, field)
    raise FileNotFoundError(f"no algebra file or bundled algebra named {ref!r}")
