"""Bundled benchmark configurations (every case study ships as a config)."""

from __future__ import annotations

import json
from importlib import resources

from ..config import RunConfig, load_config

_PACKAGE = "barriercert.benchmarks"


def list_examples() -> list[dict]:
    """Name + one-line description for every bundled config."""
    entries = []
    for name in example_names():
        config = load_example(name)
        entries.append({
            "name": name,
            "mode": config.mode,
            "dim": config.dim,
            "b_degree": config.b_degree,
            "description": config.description or "",
        })
    return entries


def example_names() -> list[str]:
    names = []
    for item in resources.files(_PACKAGE).iterdir():
        if item.name.endswith(".json"):
            names.append(item.name[: -len(".json")])
    return sorted(names)


def example_text(name: str) -> str:
    """The canonical config document, exactly as bundled."""
    path = resources.files(_PACKAGE) / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"no bundled example named {name!r}")
    return path.read_text(encoding="utf-8")


def load_example(name: str) -> RunConfig:
    return load_config(json.loads(example_text(name)))
