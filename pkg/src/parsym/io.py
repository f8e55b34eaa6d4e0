"""Reading and writing instance files.

A surface instance file looks like::

    {"model": "surface",
     "functions": [{"constant": "1", "xfactors": [["0", 1], ["1", -1]], "yfactors": []},
                   ...three entries...],
     "curve": {"orientation": "horizontal", "position": "0"}}

A curve instance uses ``"model": "tate"`` with two functions carrying a
``factors`` list.  ``"model": "corpus"`` wraps a list of instances under
``"instances"``.  Factors may also be written as ``{"root": "1/2",
"exponent": -1}``.  Rationals are strings ``"p/q"`` or integers; positions
may be ``"inf"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .curves import TateInstance
from .rational import FactoredFunction1D, P1Point, fmt_rat, parse_rat
from .surface import HORIZONTAL, VERTICAL, SurfaceComponent, SurfaceFunction, SurfaceInstance

Instance = Union[TateInstance, SurfaceInstance]


class InputError(ValueError):
    """Malformed or invalid instance data; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _rat(v: Any, field: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(field, f"expected a rational string or integer, got {v!r}")
    try:
        return Fraction(v) if isinstance(v, int) else parse_rat(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(field, f"bad rational {v!r} ({exc})") from None


def _point(v: Any, field: str) -> P1Point:
    if v is None or v == "inf":
        return P1Point(None)
    return P1Point(_rat(v, field))


def _factors(raw: Any, field: str) -> list[tuple[Fraction, int]]:
    if not isinstance(raw, list):
        raise InputError(field, "expected a list of factors")
    out = []
    seen: set[Fraction] = set()
    for i, item in enumerate(raw):
        f = f"{field}[{i}]"
        if isinstance(item, dict):
            if "root" not in item or "exponent" not in item:
                raise InputError(f, "factor needs 'root' and 'exponent'")
            root, exp = item["root"], item["exponent"]
        elif isinstance(item, list) and len(item) == 2:
            root, exp = item
        else:
            raise InputError(f, "factor must be [root, exponent] or {root, exponent}")
        r = _rat(root, f + ".root")
        if isinstance(exp, bool) or not isinstance(exp, int):
            raise InputError(f + ".exponent", f"exponent must be an integer, got {exp!r}")
        if exp == 0:
            raise InputError(f + ".exponent", "exponent must be nonzero")
        if r in seen:
            raise InputError(f + ".root", f"duplicate root {fmt_rat(r)}")
        seen.add(r)
        out.append((r, exp))
    return out


def _constant(raw: dict, field: str) -> Fraction:
    c = _rat(raw.get("constant", 1), field + ".constant")
    if c == 0:
        raise InputError(field + ".constant", "constant must be nonzero")
    return c


def _functions(doc: dict, field: str, count: int) -> list[dict]:
    fs = doc.get("functions")
    if not isinstance(fs, list) or len(fs) != count:
        raise InputError(field + ".functions", f"expected a list of {count} functions")
    for i, f in enumerate(fs):
        if not isinstance(f, dict):
            raise InputError(f"{field}.functions[{i}]", "function must be an object")
    return fs


def instance_from_dict(doc: Any, field: str = "$") -> Instance:
    if not isinstance(doc, dict):
        raise InputError(field, "instance must be an object")
    model = doc.get("model")
    if model == "tate":
        fs = _functions(doc, field, 2)
        parsed = []
        for i, f in enumerate(fs):
            fld = f"{field}.functions[{i}]"
            parsed.append(FactoredFunction1D.make(_constant(f, fld), _factors(f.get("factors", []), fld + ".factors")))
        return TateInstance(parsed[0], parsed[1])
    if model == "surface":
        fs = _functions(doc, field, 3)
        parsed = []
        for i, f in enumerate(fs):
            fld = f"{field}.functions[{i}]"
            parsed.append(
                SurfaceFunction.make(
                    _constant(f, fld),
                    _factors(f.get("xfactors", []), fld + ".xfactors"),
                    _factors(f.get("yfactors", []), fld + ".yfactors"),
                )
            )
        curve = doc.get("curve")
        if not isinstance(curve, dict):
            raise InputError(field + ".curve", "missing curve {orientation, position}")
        orient = curve.get("orientation")
        if orient not in (VERTICAL, HORIZONTAL):
            raise InputError(field + ".curve.orientation", f"expected 'vertical' or 'horizontal', got {orient!r}")
        pos = _point(curve.get("position"), field + ".curve.position")
        return SurfaceInstance(parsed[0], parsed[1], parsed[2], SurfaceComponent(orient, pos))
    raise InputError(field + ".model", f"unknown model {model!r}")


def load_document(path: str | Path) -> list[Instance]:
    """Parse a file holding one instance or a corpus of them."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(str(path), f"cannot read ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    if isinstance(doc, dict) and doc.get("model") == "corpus":
        items = doc.get("instances")
        if not isinstance(items, list) or not items:
            raise InputError("$.instances", "corpus needs a nonempty list of instances")
        return [instance_from_dict(it, f"$.instances[{i}]") for i, it in enumerate(items)]
    return [instance_from_dict(doc)]


def _factors_out(f: FactoredFunction1D) -> list[list]:
    return [[fmt_rat(r), e] for r, e in f.factors]


def instance_to_dict(inst: Instance) -> dict:
    if isinstance(inst, TateInstance):
        return {
            "model": "tate",
            "functions": [{"constant": fmt_rat(f.constant), "factors": _factors_out(f)} for f in (inst.f1, inst.f2)],
        }
    return {
        "model": "surface",
        "functions": [
            {"constant": fmt_rat(f.constant), "xfactors": _factors_out(f.x), "yfactors": _factors_out(f.y)}
            for f in inst.functions
        ],
        "curve": {"orientation": inst.C0.orientation, "position": str(inst.C0.position)},
    }


def corpus_to_dict(items: list[Instance]) -> dict:
    return {"model": "corpus", "instances": [instance_to_dict(i) for i in items]}


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
