"""JSON system and hidden-variable model files.

System file::

    {
      "contents": ["1", "2", "3"],
      "contexts": [
        {"label": "c1", "contents": ["1", "2"],
         "pmf": {"+1,+1": "1/2", "-1,-1": "1/2"}},
        ...
      ]
    }

Probabilities are rational strings (``"3/4"``, ``"1"``); decimals are
rejected.  A pmf key lists the values of the context's contents in the
declared order; absent keys have probability zero.  ``contents`` at the top
level is optional and, when present, is checked against the contexts.

Hidden-variable model file::

    {
      "kind": "hidden-variable-model",
      "support": ["+++", "---"],
      "probabilities": ["1/2", "1/2"],
      "responses": {"1": [1, -1], "2": [1, -1], "3": [1, -1]},
      "layout": [{"label": "c1", "contents": ["1", "2"]}, ...]
    }

``layout`` is optional.  Writers emit a canonical form (sorted keys and
labels, zero-probability entries dropped) so equal objects serialize to
identical bytes.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Optional

from .hidden import HiddenVariableModel
from .system import ContextDistribution, System

__all__ = [
    "ParseError",
    "canonical_json",
    "dump_hv_model",
    "dump_system",
    "format_rational",
    "format_values",
    "load_hv_model",
    "load_system",
    "parse_layout",
    "parse_rational",
]

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

SYSTEM_KEYS = {"kind", "contents", "contexts"}
CONTEXT_KEYS = {"label", "contents", "pmf"}
HV_KEYS = {"kind", "support", "probabilities", "responses", "layout"}
LAYOUT_KEYS = {"label", "contents"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def _locate(text: str, token: Any) -> tuple[int, int]:
    needle = json.dumps(token, ensure_ascii=False) if isinstance(token, str) else str(token)
    pos = text.find(needle)
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def parse_rational(s: str) -> Fraction:
    """``"3/4"`` -> Fraction(3, 4).  Raises ValueError for decimals or a zero denominator."""
    if not isinstance(s, str):
        raise ValueError(f"expected a rational string like \"1/2\", got {s!r}")
    m = _RATIONAL.match(s)
    if not m:
        raise ValueError(f"malformed rational {s!r} (expected \"num/den\")")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"malformed rational {s!r}: zero denominator")
    return Fraction(int(m.group(1)), den)


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_values(values) -> str:
    return ",".join("+1" if v == 1 else "-1" for v in values)


def _parse_values(key: str, width: int) -> tuple[int, ...]:
    parts = [p.strip() for p in key.split(",")] if key.strip() else []
    out = []
    for p in parts:
        if p in ("+1", "1"):
            out.append(1)
        elif p == "-1":
            out.append(-1)
        else:
            raise ValueError(
                f"assignment {key!r}: values must be +1 or -1 (dichotomize categorical variables first)"
            )
    if len(out) != width:
        raise ValueError(f"assignment {key!r} has {len(out)} values for {width} contents")
    return tuple(out)


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _fail(text: str, token: Any, message: str) -> ParseError:
    return ParseError(message, *_locate(text, token))


def _check_keys(text: str, obj: Any, allowed: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{where} must be a JSON object")
    for key in obj:
        if key not in allowed:
            raise _fail(text, key, f"unknown key {key!r} in {where}")


def _labels(text: str, value: Any, where: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise _fail(text, where, f"{where} must be a list of strings")
    return tuple(value)


def load_system(text: str) -> System:
    """Parse a system file.  Structural problems raise ParseError; call ``validate`` for the rest."""
    doc = _load_json(text)
    _check_keys(text, doc, SYSTEM_KEYS, "system file")
    if doc.get("kind", "system") != "system":
        raise _fail(text, "kind", f"expected kind 'system', got {doc['kind']!r}")
    declared = _labels(text, doc["contents"], "contents") if "contents" in doc else None
    raw_contexts = doc.get("contexts")
    if not isinstance(raw_contexts, list):
        raise _fail(text, "contexts", "'contexts' must be a list")
    contexts = []
    for raw in raw_contexts:
        _check_keys(text, raw, CONTEXT_KEYS, "context")
        for key in ("label", "contents", "pmf"):
            if key not in raw:
                raise _fail(text, "contexts", f"context is missing {key!r}")
        label = raw["label"]
        if not isinstance(label, str):
            raise _fail(text, "label", "context label must be a string")
        contents = _labels(text, raw["contents"], "contents")
        if not isinstance(raw["pmf"], dict):
            raise _fail(text, label, f"pmf of context {label!r} must be an object")
        pmf: dict[tuple[int, ...], Fraction] = {}
        for key, value in raw["pmf"].items():
            try:
                values = _parse_values(key, len(contents))
                p = parse_rational(value)
            except ValueError as exc:
                token = value if isinstance(value, str) and "assignment" not in str(exc) else key
                raise _fail(text, token, f"context {label!r}: {exc}") from None
            if values in pmf:
                raise _fail(text, key, f"context {label!r}: assignment {key!r} listed twice")
            pmf[values] = p
        contexts.append(ContextDistribution(label, contents, pmf))
    return System(tuple(contexts), declared_contents=declared)


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def system_document(system: System) -> dict:
    contexts = []
    for ctx in sorted(system.contexts, key=lambda c: c.context):
        order = sorted(range(len(ctx.contents)), key=lambda i: ctx.contents[i])
        pmf = {
            format_values(tuple(key[i] for i in order)): format_rational(p)
            for key, p in ctx.pmf.items()
            if p
        }
        contexts.append(
            {"label": ctx.context, "contents": [ctx.contents[i] for i in order], "pmf": pmf}
        )
    return {"contents": sorted(system.contents), "contexts": contexts}


def dump_system(system: System) -> str:
    return canonical_json(system_document(system))


def load_hv_model(text: str) -> HiddenVariableModel:
    doc = _load_json(text)
    _check_keys(text, doc, HV_KEYS, "hidden-variable model file")
    if doc.get("kind") != "hidden-variable-model":
        raise _fail(text, "kind", "expected kind 'hidden-variable-model'")
    for key in ("support", "probabilities", "responses"):
        if key not in doc:
            raise ParseError(f"hidden-variable model is missing {key!r}")
    support = _labels(text, doc["support"], "support")
    probs = []
    for value in doc["probabilities"] if isinstance(doc["probabilities"], list) else [None]:
        try:
            probs.append(parse_rational(value))
        except ValueError as exc:
            raise _fail(text, value, str(exc)) from None
    responses = doc["responses"]
    if not isinstance(responses, dict) or not all(isinstance(t, list) for t in responses.values()):
        raise _fail(text, "responses", "'responses' must map contents to lists of +1/-1")
    layout: Optional[list] = None
    if "layout" in doc:
        if not isinstance(doc["layout"], list):
            raise _fail(text, "layout", "'layout' must be a list")
        layout = []
        for entry in doc["layout"]:
            _check_keys(text, entry, LAYOUT_KEYS, "layout entry")
            if "label" not in entry or "contents" not in entry:
                raise _fail(text, "layout", "layout entries need 'label' and 'contents'")
            layout.append((entry["label"], _labels(text, entry["contents"], "contents")))
    try:
        return HiddenVariableModel(tuple(support), tuple(probs), responses, layout)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def hv_document(model: HiddenVariableModel) -> dict:
    doc = {
        "kind": "hidden-variable-model",
        "support": list(model.support),
        "probabilities": [format_rational(p) for p in model.probabilities],
        "responses": {q: list(t) for q, t in model.responses.items()},
    }
    if model.layout is not None:
        doc["layout"] = [{"label": c, "contents": list(qs)} for c, qs in model.layout]
    return doc


def dump_hv_model(model: HiddenVariableModel) -> str:
    return canonical_json(hv_document(model))


def parse_layout(spec: str) -> list[tuple[str, list[str]]]:
    """``"c1=1,2;c2=2,3"`` -> ``[("c1", ["1", "2"]), ("c2", ["2", "3"])]``."""
    out = []
    for part in spec.split(";"):
        if not part.strip():
            continue
        label, sep, contents = part.partition("=")
        if not sep or not label.strip():
            raise ValueError(f"layout entry {part!r} is not of the form label=content,content")
        out.append((label.strip(), [q.strip() for q in contents.split(",") if q.strip()]))
    if not out:
        raise ValueError("empty layout")
    return out
