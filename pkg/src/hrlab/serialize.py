"""JSON encodings of the library's values.

Complex numbers are ``{"re": x, "im": y}``, exact points are
``{"modulus": r, "turn": "a/b"}`` (``{"re", "im"}`` is accepted on input and
quantized), matrices are row-major nested lists. Every command input has a
field schema here so it can be parsed and written back in canonical form.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .choquet import AtomicMeasure, MonomialSpace
from .errors import InvalidPoint, ParseError
from .exponents import ExactPoint, ExponentSet
from .povm import Dilation, Povm


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


# --- scalars, points, matrices ----------------------------------------------

def complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": z.real + 0.0, "im": z.imag + 0.0}


def complex_from_json(obj) -> complex:
    if isinstance(obj, dict):
        try:
            return complex(float(obj["re"]), float(obj.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad complex number {obj!r}") from exc
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    raise ParseError(f"bad complex number {obj!r}")


def point_to_json(p: ExactPoint) -> dict:
    return {"modulus": p.modulus, "turn": f"{p.turn.numerator}/{p.turn.denominator}"}


def point_from_json(obj) -> ExactPoint:
    try:
        if isinstance(obj, dict) and "modulus" in obj:
            return ExactPoint(float(obj["modulus"]), Fraction(str(obj.get("turn", "0"))))
        return ExactPoint.from_complex(complex_from_json(obj))
    except (ValueError, ZeroDivisionError, InvalidPoint, TypeError) as exc:
        raise ParseError(f"bad point {obj!r}: {exc}") from exc


def matrix_to_json(m) -> list:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[complex_to_json(x) for x in row] for row in m]


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError("matrix must be a nonempty list of rows")
    width = len(obj[0])
    if any(len(r) != width for r in obj):
        raise ParseError("matrix rows differ in length")
    return np.array([[complex_from_json(x) for x in row] for row in obj], dtype=complex)


def pairs_to_json(pairs) -> list:
    return [[int(m), int(n)] for m, n in sorted(pairs)]


def pairs_from_json(obj) -> list[tuple[int, int]]:
    try:
        out = [(int(m), int(n)) for m, n in obj]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad exponent pairs {obj!r}") from exc
    if any(m < 0 or n < 0 for m, n in out):
        raise ParseError("exponents must be nonnegative")
    return out


def xi_from_json(obj) -> ExponentSet:
    pairs = pairs_from_json(obj)
    if not pairs:
        raise ParseError("exponent set must be nonempty")
    return ExponentSet(frozenset(pairs))


def measure_to_json(mu: AtomicMeasure) -> list:
    return [{"point": point_to_json(p), "weight": w} for p, w in mu.atoms]


def measure_from_json(obj) -> AtomicMeasure:
    try:
        return AtomicMeasure(tuple((point_from_json(a["point"]), float(a["weight"])) for a in obj))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad measure {obj!r}") from exc


def povm_to_json(f: Povm) -> dict:
    return {
        "support": [complex_to_json(z) for z in f.support],
        "effects": [matrix_to_json(e) for e in f.effects],
    }


def povm_from_json(obj) -> Povm:
    try:
        support = [complex_from_json(z) for z in obj["support"]]
        effects = [matrix_from_json(e) for e in obj["effects"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad POVM {obj!r}") from exc
    return Povm(tuple(support), tuple(effects))


def dilation_to_json(d: Dilation) -> dict:
    return {
        "big_dim": d.big_dim,
        "isometry": matrix_to_json(d.isometry),
        "normal": matrix_to_json(d.normal.matrix),
        "support": [complex_to_json(z) for z in d.support],
        "block_sizes": [int(round(np.trace(p).real)) for p in d.projections],
    }


# --- command input schemas --------------------------------------------------

def _rational_from_json(obj) -> Fraction:
    try:
        return Fraction(str(obj))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {obj!r}") from exc


def _typed(kind: type) -> Callable[[Any], Any]:
    def parse(obj):
        if kind is bool:
            if not isinstance(obj, bool):
                raise ParseError(f"expected a boolean, got {obj!r}")
            return obj
        if isinstance(obj, bool) or not isinstance(obj, (int, float)):
            raise ParseError(f"expected a number, got {obj!r}")
        if kind is int and int(obj) != obj:
            raise ParseError(f"expected an integer, got {obj!r}")
        return kind(obj)
    return parse


def _identity(x):
    return x


_KINDS: dict[str, tuple[Callable, Callable]] = {
    "points": (lambda o: [point_from_json(p) for p in o], lambda v: [point_to_json(p) for p in sorted(set(v))]),
    "point": (point_from_json, point_to_json),
    "pairs": (pairs_from_json, pairs_to_json),
    "xi": (xi_from_json, lambda v: pairs_to_json(v.pairs)),
    "space": (lambda o: MonomialSpace(frozenset(pairs_from_json(o))), lambda v: pairs_to_json(v.bidegrees)),
    "matrix": (matrix_from_json, matrix_to_json),
    "povm": (povm_from_json, povm_to_json),
    "measure": (measure_from_json, measure_to_json),
    "ints": (lambda o: [_typed(int)(x) for x in o], list),
    "int_pairs": (lambda o: [tuple(_typed(int)(x) for x in pair) for pair in o], lambda v: [list(p) for p in v]),
    "rationals": (lambda o: [_rational_from_json(x) for x in o], lambda v: [str(x) for x in v]),
    "int": (_typed(int), _identity),
    "float": (_typed(float), _identity),
    "bool": (_typed(bool), _identity),
}

_REQUIRED = object()

SCHEMAS: dict[str, dict[str, tuple[str, Any]]] = {
    "generates": {"xi": ("xi", _REQUIRED), "points": ("points", _REQUIRED)},
    "verdict": {"xi": ("xi", _REQUIRED), "points": ("points", _REQUIRED)},
    "spectrality": {"povm": ("povm", _REQUIRED), "operator": ("matrix", _REQUIRED), "xi": ("xi", _REQUIRED)},
    "dilate": {"povm": ("povm", _REQUIRED), "minimal": ("bool", False), "max_degree": ("int", 3)},
    "choquet": {"points": ("points", _REQUIRED), "space": ("space", _REQUIRED),
                "require_separation": ("bool", True)},
    "isnytos": {"d": ("ints", _REQUIRED), "pairs": ("int_pairs", _REQUIRED), "beta": ("rationals", _REQUIRED)},
    "converge": {"points": ("points", _REQUIRED), "space": ("space", _REQUIRED), "lambda0": ("point", _REQUIRED),
                 "lam": ("point", None), "h_dim": ("int", 1), "n_max": ("int", 6),
                 "max_probe_degree": ("int", 3), "padding": ("int", None),
                 "require_separation": ("bool", True)},
    "search-scalar": {"p": ("int", _REQUIRED), "q": ("int", _REQUIRED), "r": ("int", _REQUIRED),
                      "t": ("float", _REQUIRED), "budget": ("int", 5000)},
    "search-povm": {"xi": ("xi", _REQUIRED), "operator": ("matrix", None), "dim": ("int", 3),
                    "trials": ("int", 1), "budget": ("int", 10_000), "seed_measure": ("measure", None)},
    "inequalities-selftest": {"hansen_draws": ("int", 500), "lieb_ruskai_draws": ("int", 200),
                              "rudec_draws": ("int", 500), "npq_draws": ("int", 200),
                              "main1_draws": ("int", 100), "max_dim": ("int", 6)},
}


def parse_input(command: str, data: Any) -> dict:
    """Validate ``data`` against the command schema and return typed values."""
    if command not in SCHEMAS:
        raise ParseError(f"unknown command {command!r}")
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ParseError("command input must be a JSON object")
    schema = SCHEMAS[command]
    unknown = sorted(set(data) - set(schema))
    if unknown:
        raise ParseError(f"unknown fields for {command}: {', '.join(unknown)}")
    out = {}
    for name, (kind, default) in schema.items():
        if name not in data or data[name] is None:
            if default is _REQUIRED:
                raise ParseError(f"{command}: missing field {name!r}")
            out[name] = default
            continue
        try:
            out[name] = _KINDS[kind][0](data[name])
        except ParseError:
            raise
        except Exception as exc:  # malformed nesting, wrong container types
            raise ParseError(f"{command}: bad field {name!r}: {exc}") from exc
    return out


def dump_input(command: str, values: dict) -> dict:
    """Canonical JSON form of parsed command input; ``parse_input`` inverts it."""
    schema = SCHEMAS[command]
    out = {}
    for name, (kind, _) in schema.items():
        v = values.get(name)
        if v is not None:
            out[name] = _KINDS[kind][1](v)
    return out


def load_json(text: str) -> Any:
    try:
        return json.loads(text) if text.strip() else None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
