"""JSON schemas for every CLI payload (draft 2020-12)."""
from __future__ import annotations

RATIONAL = {"type": "string", "pattern": r"^-?\d+/\d+$"}
NUMBER = {"oneOf": [RATIONAL, {"type": "number"}]}


def _obj(props: dict, required=None) -> dict:
    return {"type": "object", "properties": props, "required": sorted(required or props),
            "additionalProperties": True}


_RATIO_MAP = {"type": "object", "additionalProperties": NUMBER}

SCHEMAS = {
    "error": _obj({"error": {"type": "string"}, "message": {"type": "string"},
                   "line": {"type": ["integer", "null"]}, "column": {"type": ["integer", "null"]},
                   "exit_code": {"type": "integer"}}),
    "validate": _obj({"ok": {"const": True}, "name": {"type": "string"},
                      "field": {"type": "array", "items": {"type": "integer"}},
                      "q": {"type": "integer"}, "dim": {"type": "integer"},
                      "basis": {"type": "array", "items": {"type": "string"}}}),
    "rank": _obj({"dim": {"type": "integer"},
                  "ranks": {"type": "array", "items": _obj({"matrix": {"type": "string"}, "rk": NUMBER})}}),
    "ppdim": _obj({"dim": {"type": "integer"}, "t": {"type": "integer"}, "D": NUMBER,
                   "count": {"type": "integer"}}),
    "stats": _obj({"radius": {"type": "integer"}, "vertices": {"type": "integer"}, "freqs": _RATIO_MAP}),
    "sample": _obj({"radius": {"type": "integer"}, "samples": {"type": "integer"}, "seed": {"type": "integer"},
                    "delta": {"type": "number"}, "epsilon": {"type": "number"}, "freqs": _RATIO_MAP}),
    "tile": _obj({"epsilon": NUMBER, "tilings": {"type": "array", "items": _obj(
        {"component": {"type": "string"}, "ok": {"type": "boolean"}, "pieces": {"type": "integer"},
         "coverage": NUMBER, "expansion": NUMBER, "bound": {"type": "integer"},
         "max_piece": {"type": "integer"}})}}),
    "epsiso": _obj({"certificate": {"type": "boolean"}, "epsilon": NUMBER, "uncovered_m": NUMBER,
                    "uncovered_n": NUMBER, "account": {"type": "object"}}),
    "catalog": _obj({"epsilon": NUMBER, "string_cap": {"type": "integer"}, "band_cap": {"type": "integer"},
                     "tiles": {"type": "array", "items": _obj(
                         {"id": {"type": "integer"}, "kind": {"enum": ["string", "band"]},
                          "label": {"type": "string"}, "dim": {"type": "integer"}})}}),
    "param": _obj({"parameter": {"type": "string"}, "dim": {"type": "integer"}, "value": NUMBER},
                  ["parameter", "dim", "value"]),
    "build-tester": _obj({"parameter": {"type": "string"}, "n": {"type": "integer"},
                          "tiles": {"type": "array"}, "values": {"type": "array", "items": NUMBER},
                          "suite": {"type": "array", "items": {"type": "string"}}}),
    "test": _obj({"value": NUMBER, "tile": {"type": "integer"}, "label": {"type": "string"},
                  "radius": NUMBER}),
}

for _name, _s in SCHEMAS.items():
    _s["$schema"] = "https://json-schema.org/draft/2020-12/schema"
    _s["title"] = _name
