"""JSON documents: schemas, parsing and canonical output."""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from .abelian import FinAbGroup
from .classes import IncidenceEntry, OrbifoldDescription, SncOpenDescription, StabilizerComponentData
from .maps import CoverEntry, ModelDescription
from .symbols import BurnElement, FieldLabel, StackLabel, element_from_json
from .toric import StackyFan

_INT = {"type": "integer"}
_INT_LIST = {"type": "array", "items": _INT}
_MATRIX = {"type": "array", "items": _INT_LIST}

GROUP = {
    "type": "object",
    "properties": {"invariants": {"type": "array", "items": {"type": "integer", "minimum": 2}}},
    "required": ["invariants"],
}

FIELD = {
    "type": "object",
    "properties": {
        "base": {"type": "string"},
        "trdeg": {"type": "integer", "minimum": 0},
        "t": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

STACK = {
    "type": "object",
    "oneOf": [
        {"required": ["atomic", "dim"]},
        {"required": ["construct", "chars"]},
    ],
}

OSYMBOL = {
    "type": "object",
    "properties": {"field": FIELD, "A": GROUP, "S": _MATRIX, "n": _INT},
    "required": ["field", "A", "S"],
}

CSYMBOL = {
    "type": "object",
    "properties": {"stack": STACK, "alpha": _MATRIX, "n": _INT},
    "required": ["stack", "alpha"],
}

ELEMENT = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {"symbol": {"anyOf": [OSYMBOL, CSYMBOL]}, "coeff": _INT},
        "required": ["symbol"],
    },
}

FAN = {
    "type": "object",
    "properties": {
        "rank": {"type": "integer", "minimum": 0},
        "rays": _MATRIX,
        "cones": _MATRIX,
        "torsion": {"type": "array", "maxItems": 0},
    },
    "required": ["rank", "rays", "cones"],
}

COMPONENT = {
    "type": "object",
    "properties": {
        "field": FIELD,
        "stack": STACK,
        "A": GROUP,
        "beta": _MATRIX,
        "divisors": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["A", "beta"],
    "oneOf": [{"required": ["field"]}, {"required": ["stack"]}],
}

ORBIFOLD = {
    "type": "object",
    "properties": {"n": _INT, "components": {"type": "array", "items": COMPONENT}},
    "required": ["n", "components"],
}

SNC_OPEN = {
    "type": "object",
    "properties": {
        "ambient": ORBIFOLD,
        "divisors": {"type": "array", "items": {"type": "string"}},
        "strata": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "I": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "entries": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {"component": COMPONENT, "normal": _MATRIX},
                            "required": ["component", "normal"],
                        },
                    },
                },
                "required": ["I", "entries"],
            },
        },
    },
    "required": ["ambient", "divisors", "strata"],
}

MODEL = {
    "type": "object",
    "properties": {
        "n": _INT,
        "components": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"id": {"type": "string"}, "multiplicity": {"type": "integer", "minimum": 1}},
                "required": ["id", "multiplicity"],
            },
        },
        "incidences": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "I": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "entries": {"type": "array", "items": COMPONENT},
                },
                "required": ["I", "entries"],
            },
        },
    },
    "required": ["n", "components", "incidences"],
}

CERTIFICATE = {
    "type": "object",
    "properties": {
        "presentation": {"enum": ["obar", "oburn"]},
        "n": _INT,
        "element": ELEMENT,
        "certificate": {"type": "object", "additionalProperties": _INT},
    },
    "required": ["presentation", "n", "element", "certificate"],
}

SCHEMAS = {
    "group": GROUP,
    "symbol": OSYMBOL,
    "element": ELEMENT,
    "fan": FAN,
    "orbifold": ORBIFOLD,
    "snc_open": SNC_OPEN,
    "model": MODEL,
    "certificate": CERTIFICATE,
}


class SchemaError(ValueError):
    """Input document does not match its schema."""


def check(doc: Any, schema: dict, what: str = "document") -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise SchemaError(f"invalid {what} at {path}: {exc.message}") from None


def dumps(doc: Any) -> str:
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# documents -> objects


def parse_element(doc, n: int | None = None) -> BurnElement:
    check(doc, ELEMENT, "element")
    return element_from_json(doc, n)


def _label(doc):
    if "stack" in doc:
        return StackLabel.from_json(doc["stack"])
    return FieldLabel.from_json(doc["field"])


def parse_component(doc) -> StabilizerComponentData:
    a = FinAbGroup.from_json(doc["A"])
    divisors = frozenset(doc["divisors"]) if "divisors" in doc else None
    return StabilizerComponentData(_label(doc), a, tuple(tuple(c) for c in doc["beta"]), divisors)


def component_to_json(c: StabilizerComponentData) -> dict:
    out = {"A": c.A.to_json(), "beta": [list(x.coords) for x in c.beta]}
    if isinstance(c.label, FieldLabel):
        out["field"] = c.label.to_json()
    else:
        out["stack"] = c.label.to_json()
    if c.divisors is not None:
        out["divisors"] = sorted(map(str, c.divisors))
    return out


def parse_orbifold(doc) -> OrbifoldDescription:
    check(doc, ORBIFOLD, "orbifold description")
    return OrbifoldDescription(doc["n"], tuple(parse_component(c) for c in doc["components"]))


def orbifold_to_json(d: OrbifoldDescription) -> dict:
    return {"n": d.n, "components": [component_to_json(c) for c in d.components]}


def parse_snc_open(doc) -> SncOpenDescription:
    check(doc, SNC_OPEN, "snc-open description")
    ambient = parse_orbifold(doc["ambient"])
    per_i = {}
    for s in doc["strata"]:
        entries = tuple(IncidenceEntry(parse_component(e["component"]), tuple(tuple(x) for x in e["normal"]))
                        for e in s["entries"])
        per_i[frozenset(s["I"])] = entries
    return SncOpenDescription(ambient, tuple(doc["divisors"]), per_i)


def snc_open_to_json(d: SncOpenDescription) -> dict:
    strata = []
    for key in sorted(d.per_I, key=lambda s: (len(s), sorted(map(str, s)))):
        strata.append({
            "I": sorted(map(str, key)),
            "entries": [{"component": component_to_json(e.component),
                         "normal": [list(x.coords) for x in e.normal]} for e in d.per_I[key]],
        })
    return {"ambient": orbifold_to_json(d.ambient), "divisors": [str(x) for x in d.divisor_ids],
            "strata": strata}


def parse_model(doc) -> tuple[ModelDescription, int]:
    check(doc, MODEL, "model description")
    comps = {c["id"]: c["multiplicity"] for c in doc["components"]}
    inc = {}
    for s in doc["incidences"]:
        entries = []
        for e in s["entries"]:
            a = FinAbGroup.from_json(e["A"])
            entries.append(CoverEntry(_label(e), a, tuple(a.element(c) for c in e["beta"])))
        inc[frozenset(s["I"])] = tuple(entries)
    return ModelDescription(comps, inc), doc["n"]


def parse_fan(doc) -> StackyFan:
    check(doc, FAN, "fan")
    return StackyFan.from_json(doc)
