"""Scenario files, run manifests and atomic output.

Scenario documents are UTF-8 JSON with a top-level ``kind``; each kind has a
closed schema (unknown fields are errors). Rationals travel as strings
``"p/q"`` and floats use Python's shortest round-trip repr.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import __version__
from .errors import ScenarioError

DATA_DIR = Path(__file__).parent / "data"

_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*-?\d+)?\s*$"}]}
_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_IVEC = {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}
_BOX = {"type": "array", "items": {"type": "number"}, "minItems": 4, "maxItems": 4}
_COMMON = {"kind": {"type": "string"}, "name": {"type": "string"}, "description": {"type": "string"}}


def _closed(props: dict, required=()) -> dict:
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


_LIFT_PRIMITIVE = {"oneOf": [
    _closed({"type": {"const": "translation"}, "vector": _POINT}, ["type", "vector"]),
    _closed({"type": {"enum": ["hshear", "vshear"]}, "profile": {"enum": ["sine", "raised-cosine"]},
             "amplitude": {"type": "number"}}, ["type", "amplitude"]),
]}

_PLANE_PRIMITIVE = {"oneOf": [
    _closed({"type": {"const": "translation"}, "vector": _POINT}, ["type", "vector"]),
    _closed({"type": {"const": "linear"},
             "matrix": {"type": "array", "items": _POINT, "minItems": 2, "maxItems": 2}}, ["type", "matrix"]),
    _closed({"type": {"enum": ["hshear", "vshear"]}, "profile": {"enum": ["sine", "raised-cosine", "bump", "tanh"]},
             "amplitude": {"type": "number"}, "scale": {"type": "number", "exclusiveMinimum": 0},
             "center": {"type": "number"}}, ["type", "amplitude"]),
]}

SCHEMAS = {
    "sft": _closed({**_COMMON,
                    "transition_matrix": {"type": "array", "minItems": 1,
                                          "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
                    "labels": {"type": "array", "items": {"type": ["integer", "string"]}}},
                   ["kind", "transition_matrix"]),
    "interval": _closed({**_COMMON,
                         "breakpoints": {"type": "array", "minItems": 2,
                                         "items": {"type": "array", "items": _RATIONAL, "minItems": 2, "maxItems": 2}},
                         "partition": {"type": "array", "items": _RATIONAL, "minItems": 2}},
                        ["kind", "breakpoints"]),
    "rotation": _closed({**_COMMON,
                         "composition": {"type": "array", "items": _LIFT_PRIMITIVE},
                         "frame": {"type": "array", "items": _IVEC, "minItems": 2, "maxItems": 2},
                         "measure": {"oneOf": [
                             _closed({"grid": {"type": "integer", "minimum": 1}}, ["grid"]),
                             _closed({"points": {"type": "array", "items": _POINT, "minItems": 1},
                                      "weights": {"type": "array", "items": {"type": "number", "minimum": 0}}},
                                     ["points", "weights"]),
                         ]}},
                        ["kind", "composition"]),
    "forcing": _closed({**_COMMON,
                        "model": {"enum": ["vertical"]},
                        "box": _BOX,
                        "check_box": _BOX,
                        "leaves": {"type": "array", "items": _closed(
                            {"label": {"type": "string"}, "vertices": {"type": "array", "items": _POINT, "minItems": 2}},
                            ["label", "vertices"])},
                        "paths": {"type": "array", "items": _closed(
                            {"name": {"type": "string"},
                             "vertices": {"type": "array", "items": _POINT, "minItems": 2},
                             "start_leaf": {"type": "string"}, "end_leaf": {"type": "string"},
                             "crossings": {"type": "array", "items": _closed(
                                 {"leaf": {"type": "string"}, "t": {"type": "number"}}, ["leaf"])}},
                            ["vertices", "start_leaf", "end_leaf"])},
                        "map": {"oneOf": [
                            _closed({"composition": {"type": "array", "items": _PLANE_PRIMITIVE}}, ["composition"]),
                            {"type": "array", "items": _PLANE_PRIMITIVE}]},
                        "facts": {"type": "array", "items": _closed(
                            {"id": {"type": "string"}, "path": {"type": "string"},
                             "order": {"type": "integer", "minimum": 1},
                             "provenance": {"enum": ["given", "geometric-check"]}, "deck": _IVEC},
                            ["path", "order"])},
                        "certify": _closed({"path": {"type": "string"}, "q": {"type": "integer", "minimum": 2},
                                            "T": _IVEC}, ["path"])},
                       ["kind"]),
}

KINDS = tuple(SCHEMAS)


# -- rationals and floats ------------------------------------------------------------

def parse_rational(v) -> Fraction:
    if isinstance(v, bool):
        raise ScenarioError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.replace(" ", ""))
        except (ValueError, ZeroDivisionError):
            pass
    raise ScenarioError(f"not a rational: {v!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def format_float(x: float) -> str:
    return repr(float(x))


# -- loading ---------------------------------------------------------------------------

def _located(message: str, path) -> ScenarioError:
    err = ScenarioError(message)
    err.path = tuple(path)
    return err


def _pointer(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate_document(doc, source: str = "<scenario>", kind: str | None = None) -> dict:
    if not isinstance(doc, dict):
        raise ScenarioError(f"{source}: top level must be a JSON object")
    k = doc.get("kind")
    if k not in SCHEMAS:
        raise _located(f"{source}: at $.kind: expected one of {list(KINDS)}, got {k!r}", ("kind",))
    if kind is not None and k != kind:
        raise _located(f"{source}: at $.kind: this command needs a {kind!r} scenario, got {k!r}", ("kind",))
    _check(SCHEMAS[k], doc, source)
    return doc


def load_json(path):
    """Parse a UTF-8 JSON file; decode errors carry line and column."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ScenarioError(f"{p}: no such file") from None
    except UnicodeDecodeError as e:
        raise ScenarioError(f"{p}: not UTF-8 ({e.reason})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{p}:{e.lineno}:{e.colno}: {e.msg}") from None
    return doc


def load_document(path, kind: str | None = None) -> dict:
    """Read and schema-check a scenario file; errors carry a line or field location."""
    return validate_document(load_json(path), str(path), kind)


def _check(schema, doc, source):
    errors = list(jsonschema.Draft202012Validator(schema).iter_errors(doc))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        path = tuple(best.absolute_path)
        raise _located(f"{source}: at {_pointer(path)}: {best.message}", path)


def validate_measure(doc, source: str = "<measure>") -> dict:
    """A standalone measure file: ``{"grid": m}`` or ``{"points": ..., "weights": ...}``."""
    _check(SCHEMAS["rotation"]["properties"]["measure"], doc, source)
    return doc


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def scenario_hash(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


def bundled(name: str) -> Path:
    """Path of a scenario file shipped with the package."""
    p = DATA_DIR / name
    if not p.suffix:
        p = p.with_suffix(".json")
    if not p.exists():
        raise ScenarioError(f"no bundled scenario {name!r}; have {sorted(q.stem for q in DATA_DIR.glob('*.json'))}")
    return p


# -- manifests and output ----------------------------------------------------------------

@dataclass
class RunManifest:
    command: str
    scenario_hash: str | None
    budgets: dict = field(default_factory=dict)
    wall_time_s: float = 0.0
    tool: str = "forcing-lab"
    version: str = __version__

    def to_dict(self) -> dict:
        return {"tool": self.tool, "version": self.version, "command": self.command,
                "scenario_hash": self.scenario_hash, "budgets": self.budgets, "wall_time_s": self.wall_time_s}


_FLAT_ARRAY = re.compile(r"\[([^\[\]{}]*)\]")


def dumps(obj) -> str:
    """Indented JSON with arrays of scalars kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    # JSON strings never hold raw newlines, so only layout whitespace is touched
    text = _FLAT_ARRAY.sub(lambda m: "[" + re.sub(r"\n\s*", " ", m.group(1)).strip() + "]", text)
    return text + "\n"


def atomic_write(path, text: str) -> None:
    """Write via a temporary file in the target directory and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
