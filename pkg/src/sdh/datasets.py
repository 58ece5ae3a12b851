"""Bundled example data and a loader that also accepts files on disk.

Every JSON document carries a ``kind`` (graph, pair, actions or
certificate); files without one are classified by their keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .dimension import ShiftEquivalenceCertificate, load_actions
from .errors import InputError
from .graph import SignedGraph
from .putnam import SuPairPresentation

KINDS = ("graph", "pair", "actions", "certificate")


@dataclass(frozen=True)
class Dataset:
    name: str
    kind: str
    payload: Any
    description: str = ""


@dataclass(frozen=True)
class ActionData:
    """Graded actions on the signed homology and on the manifold's homology."""

    homology: dict
    manifold: dict
    q_parity: str | None = None


def _bundled_dir():
    return resources.files("sdh") / "examples"


def bundled_names() -> list[str]:
    return sorted(p.name[:-5] for p in _bundled_dir().iterdir() if p.name.endswith(".json"))


def _parse_text(text: str, origin: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{origin}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{origin}:1:1: expected a JSON object at top level")
    return obj


def classify(obj: dict) -> str:
    kind = obj.get("kind")
    if kind is not None:
        if kind not in KINDS:
            raise InputError(f"unknown dataset kind {kind!r}")
        return kind
    if "vertices" in obj and "edges" in obj:
        return "graph"
    if "Y" in obj and "Z" in obj:
        return "pair"
    if all(k in obj for k in "ABRS"):
        return "certificate"
    if "homology" in obj or "manifold" in obj:
        return "actions"
    raise InputError("cannot tell what kind of data this is; add a 'kind' field")


def _actions(obj: dict) -> ActionData:
    try:
        return ActionData(
            homology=load_actions(obj.get("homology", {})),
            manifold=load_actions(obj.get("manifold", {})),
            q_parity=obj.get("q_parity"),
        )
    except (TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed action data: {exc}") from exc


def build(obj: dict, name: str = "") -> Dataset:
    kind = classify(obj)
    if kind == "graph":
        payload = SignedGraph.from_json(obj)
    elif kind == "pair":
        payload = SuPairPresentation.from_json(obj)
    elif kind == "certificate":
        try:
            payload = ShiftEquivalenceCertificate.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc!r}") from exc
    else:
        payload = _actions(obj)
    return Dataset(name, kind, payload, obj.get("description", ""))


def read_json(ref: str) -> tuple[dict, str]:
    """Parse a file path, or a bundled dataset name (``fib``, ``examples/fib.json``)."""
    path = Path(ref)
    if path.is_file():
        return _parse_text(path.read_text(encoding="utf-8"), str(path)), path.stem
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if (not path.parent.parts or path.parent.parts == ("examples",)) and stem in bundled_names():
        text = (_bundled_dir() / f"{stem}.json").read_text(encoding="utf-8")
        return _parse_text(text, f"examples/{stem}.json"), stem
    raise InputError(f"{ref}: no such file or bundled dataset")


def load(ref: str) -> Dataset:
    obj, name = read_json(ref)
    return build(obj, name)


def load_bundled(name: str) -> Dataset:
    if name not in bundled_names():
        raise InputError(f"no bundled dataset named {name!r}")
    return load(name)
