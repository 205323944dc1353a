"""JSON group descriptions and the bundled corpus."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import poly as P
from .fields import (
    QQ,
    AlgFunctionField,
    Field,
    FieldError,
    FiniteExtension,
    FunctionField,
    NumberField,
    finite_field,
    parse_element,
)
from .matrix import Matrix

OVERRIDE_KEYS = ("prime", "point", "cap", "seed")


class SchemaError(ValueError):
    """Invalid group description; the message names the offending path."""


@dataclass
class GroupInput:
    field: Field
    n: int
    generators: list
    overrides: dict = field(default_factory=dict)
    name: str | None = None

    @property
    def r(self) -> int:
        return len(self.generators)


def _need(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{path}: missing key {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{path}.{key}: expected {kind.__name__ if isinstance(kind, type) else kind}")
    return v


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % d for d in range(2, int(p**0.5) + 1))


def field_from_json(d: dict, path: str = "field") -> Field:
    if not isinstance(d, dict):
        raise SchemaError(f"{path}: expected an object")
    t = _need(d, "type", path, str)
    try:
        if t == "rationals":
            return QQ
        if t == "number_field":
            poly = _need(d, "poly", path, list)
            return NumberField(poly, d.get("var", "a"))
        if t == "finite_field":
            if "base" in d:
                base = field_from_json(d["base"], path + ".base")
                mod = tuple(parse_element(base, s) for s in _need(d, "poly", path, list))
                return FiniteExtension(base, P.trim(base, mod), d.get("var", "z"))
            p = _need(d, "p", path, int)
            if not _is_prime(p):
                raise SchemaError(f"{path}.p: {p} is not prime")
            return finite_field(p, d.get("poly"), d.get("var", "z"))
        if t == "function_field":
            base = field_from_json(_need(d, "base", path, dict), path + ".base")
            if isinstance(base, (FunctionField, AlgFunctionField)):
                raise SchemaError(f"{path}.base: multivariate function fields are not supported")
            return FunctionField(base, d.get("var", "x"))
        if t == "alg_function_field":
            base = field_from_json(_need(d, "base", path, dict), path + ".base")
            if not isinstance(base, FunctionField):
                raise SchemaError(f"{path}.base: must be a function_field")
            mod = tuple(parse_element(base, str(s)) for s in _need(d, "poly", path, list))
            mod = P.trim(base, mod)
            if not mod or not base.eq(mod[-1], base.one):
                raise SchemaError(f"{path}.poly: minimal polynomial must be monic")
            return AlgFunctionField(base, mod, d.get("var", "b"))
        if t in ("multivariate_function_field", "function_field_multi"):
            raise SchemaError(f"{path}: multivariate function fields are not supported")
    except FieldError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    raise SchemaError(f"{path}.type: unknown field type {t!r}")


def group_from_json(data: dict, name: str | None = None) -> GroupInput:
    if not isinstance(data, dict):
        raise SchemaError("top level: expected an object")
    F = field_from_json(_need(data, "field", "top level", dict))
    n = _need(data, "n", "top level", int)
    if n < 1:
        raise SchemaError("n: must be at least 1")
    gens = _need(data, "generators", "top level", list)
    if not gens:
        raise SchemaError("generators: need at least one generator")
    mats = []
    for i, g in enumerate(gens):
        path = f"generators[{i}]"
        if not isinstance(g, list) or len(g) != n or any(not isinstance(r, list) or len(r) != n for r in g):
            raise SchemaError(f"{path}: expected an {n}x{n} matrix")
        try:
            m = Matrix(F, [[parse_element(F, str(e)) for e in r] for r in g])
        except FieldError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
        if F.is_zero(m.det()):
            raise SchemaError(f"singular generator at index {i}")
        mats.append(m)
    overrides = data.get("overrides", {}) or {}
    if not isinstance(overrides, dict):
        raise SchemaError("overrides: expected an object")
    for k, v in overrides.items():
        if k not in OVERRIDE_KEYS:
            raise SchemaError(f"overrides.{k}: unknown override")
        if k == "point":
            if not isinstance(v, str):
                raise SchemaError("overrides.point: expected a string")
        elif not isinstance(v, int) or isinstance(v, bool):
            raise SchemaError(f"overrides.{k}: expected an integer")
    return GroupInput(F, n, mats, dict(overrides), name)


def parse_group(path) -> GroupInput:
    """Read and validate a group description file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    return group_from_json(data, path.stem)


def serialize_group(G: GroupInput) -> dict:
    out = {"field": G.field.to_json(), "n": G.n, "generators": [g.to_strings() for g in G.generators]}
    if G.overrides:
        out["overrides"] = dict(G.overrides)
    return out


# ---------------------------------------------------------------------------
# corpus


def corpus_names() -> list[str]:
    root = resources.files("titsalt") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("titsalt") / "corpus" / f"{name}.json"))


def load_corpus(name: str) -> GroupInput:
    return parse_group(corpus_path(name))
