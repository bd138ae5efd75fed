"""Text and JSON readers/writers for representations, differential modules
and raw module data.

Text files are line oriented: a `field` header, a `quiver` block (inline in
braces or `quiver file PATH`), then the data directives.  `#` starts a line
comment.  Matrix literals may span lines until their brackets balance.
Files whose first nonblank character is `{` are parsed as the JSON twin.

Rational entries are written as `p/q` strings (also in JSON); prime-field
entries as plain integers.
"""

from __future__ import annotations

import json
import os
import re

from .diffproj import DiffProj, RawModule, make_diffproj, make_raw
from .errors import ParseError
from .exactla import Mat, ScalarField, mat_is_zero
from .qrep import Rep, make_rep
from .quiver import Quiver, parse_quiver, quiver_from_json, quiver_to_json, quiver_to_text

_FIELD_RE = re.compile(r"^(Q|F\s*([0-9]+))$")


def parse_field(text: str) -> ScalarField:
    m = _FIELD_RE.match(text.strip())
    if not m:
        raise ParseError(f"bad field {text!r}, expected 'Q' or 'F <p>'")
    if m.group(1) == "Q":
        return ScalarField()
    try:
        return ScalarField(int(m.group(2)))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def field_to_text(field: ScalarField) -> str:
    return "Q" if not field.is_prime_field else f"F {field.p}"


def field_to_json(field: ScalarField) -> str:
    return str(field)


# --- matrix literals ---------------------------------------------------------

_ENTRY_RE = re.compile(r"-?[0-9]+(/[0-9]+)?")


def parse_matrix_literal(text: str, field: ScalarField, line: int = None):
    """Parse `[[a, b], [c, d]]` into a list of rows of field elements."""
    rows = []
    i = 0
    n = len(text)

    def skip_ws(i):
        while i < n and text[i] in " \t\r\n":
            i += 1
        return i

    i = skip_ws(i)
    if i >= n or text[i] != "[":
        raise ParseError("matrix literal must start with '['", line)
    i = skip_ws(i + 1)
    while i < n and text[i] != "]":
        if text[i] != "[":
            raise ParseError("expected '[' starting a row", line)
        i = skip_ws(i + 1)
        row = []
        while i < n and text[i] != "]":
            m = _ENTRY_RE.match(text, i)
            if not m:
                raise ParseError(f"bad matrix entry near {text[i:i+8]!r}", line)
            row.append(field.parse(m.group(0)))
            i = skip_ws(m.end())
            if i < n and text[i] == ",":
                i = skip_ws(i + 1)
        if i >= n:
            raise ParseError("unterminated matrix row", line)
        rows.append(row)
        i = skip_ws(i + 1)
        if i < n and text[i] == ",":
            i = skip_ws(i + 1)
    if i >= n:
        raise ParseError("unterminated matrix literal", line)
    if text[skip_ws(i + 1):].strip():
        raise ParseError("trailing text after matrix literal", line)
    return rows


def matrix_to_text(M: Mat) -> str:
    rows = ", ".join("[" + ", ".join(M.field.format(x) for x in row) + "]"
                     for row in M.to_lists())
    return f"[{rows}]"


def matrix_to_json(M: Mat) -> list:
    if M.field.is_prime_field:
        return M.to_lists()
    return [[str(x) for x in row] for row in M.to_lists()]


def matrix_from_json(data, field: ScalarField):
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        raise ParseError("matrix JSON must be a list of rows")
    return [[field.parse(str(x)) for x in row] for row in data]


# --- line-oriented reader ------------------------------------------------------

def _logical_lines(text: str):
    """Yield (line_number, content) with comments stripped and bracketed
    continuations joined."""
    pending = None
    pending_line = 0
    depth = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip() and pending is None:
            continue
        if pending is None:
            pending = body
            pending_line = lineno
        else:
            pending += " " + body.strip()
        depth = pending.count("[") - pending.count("]")
        if depth > 0:
            continue
        yield pending_line, pending.strip()
        pending = None
    if pending is not None:
        raise ParseError("unterminated matrix literal", pending_line)


class _Directives:
    """Split a data file into its header and directive lines."""

    def __init__(self, text: str, base_dir=None):
        self.field = None
        self.quiver = None
        self.assignments = []  # (keyword, name, literal_text, line)
        self.scalars = {}      # keyword -> {name: int}
        lines = list(_logical_lines(text))
        idx = 0
        while idx < len(lines):
            lineno, content = lines[idx]
            word, _, rest = content.partition(" ")
            if word == "field":
                self.field = parse_field(rest)
            elif word == "quiver":
                rest = rest.strip()
                if rest.startswith("file"):
                    path = rest[4:].strip()
                    if base_dir:
                        path = os.path.join(base_dir, path)
                    try:
                        with open(path, encoding="utf-8") as fh:
                            self.quiver = parse_quiver(fh.read())
                    except OSError as exc:
                        raise ParseError(f"cannot read quiver file: {exc}", lineno) from None
                elif rest.startswith("{"):
                    block = rest
                    while block.count("{") > block.count("}"):
                        idx += 1
                        if idx >= len(lines):
                            raise ParseError("unterminated quiver block", lineno)
                        block += "\n" + lines[idx][1]
                    inner = block[block.index("{") + 1:block.rindex("}")]
                    self.quiver = parse_quiver(inner)
                else:
                    raise ParseError("expected 'quiver { ... }' or 'quiver file PATH'", lineno)
            elif word in ("dims", "top"):
                pairs = self.scalars.setdefault(word, {})
                for item in rest.split():
                    name, eq, value = item.partition("=")
                    if not eq or not value.lstrip("-").isdigit():
                        raise ParseError(f"bad {word} item {item!r}", lineno)
                    pairs[name] = int(value)
            elif word in ("map", "g", "h", "endo"):
                name, eq, literal = rest.partition("=")
                if not eq:
                    raise ParseError(f"expected '{word} NAME = [[...]]'", lineno)
                self.assignments.append((word, name.strip(), literal.strip(), lineno))
            else:
                raise ParseError(f"unknown directive {word!r}", lineno)
            idx += 1

    def require(self, what, kinds):
        if self.field is None:
            raise ParseError(f"{what} file is missing its 'field' header")
        if self.quiver is None:
            raise ParseError(f"{what} file is missing its quiver")
        for kw, name, _, lineno in self.assignments:
            if kw not in kinds:
                raise ParseError(f"directive {kw!r} not allowed in a {what} file", lineno)

    def matrices(self, keyword):
        out = {}
        for kw, name, literal, lineno in self.assignments:
            if kw != keyword:
                continue
            if name in out:
                raise ParseError(f"duplicate {keyword} for {name!r}", lineno)
            out[name] = parse_matrix_literal(literal, self.field, lineno)
        return out


# --- representations -----------------------------------------------------------

def parse_rep(text: str, base_dir=None) -> Rep:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return rep_from_json(_load_json(text), base_dir)
    d = _Directives(text, base_dir)
    d.require("representation", {"map"})
    dims = d.scalars.get("dims")
    if dims is None:
        raise ParseError("representation file is missing 'dims'")
    try:
        return make_rep(d.quiver, d.field, dims, d.matrices("map"))
    except (ValueError, KeyError) as exc:
        raise ParseError(str(exc)) from None


def rep_to_text(X: Rep) -> str:
    lines = [f"field {field_to_text(X.field)}"]
    lines.append("quiver {")
    lines.extend("  " + ln for ln in quiver_to_text(X.quiver).splitlines())
    lines.append("}")
    lines.append("dims " + " ".join(f"{v}={d}" for v, d in zip(X.quiver.vertices, X.dims)))
    for a, M in zip(X.quiver.arrows, X.maps):
        lines.append(f"map {a.name} = {matrix_to_text(M)}")
    return "\n".join(lines) + "\n"


def rep_to_json(X: Rep) -> dict:
    return {
        "field": field_to_json(X.field),
        "quiver": quiver_to_json(X.quiver),
        "dims": {v: d for v, d in zip(X.quiver.vertices, X.dims)},
        "maps": {a.name: matrix_to_json(M) for a, M in zip(X.quiver.arrows, X.maps)},
    }


def rep_from_json(data: dict, base_dir=None) -> Rep:
    field, Q = _field_quiver_from_json(data, base_dir)
    try:
        maps = {k: matrix_from_json(v, field) for k, v in data.get("maps", {}).items()}
        return make_rep(Q, field, dict(data["dims"]), maps)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed representation JSON: {exc}") from None


# --- differential modules ---------------------------------------------------------

def parse_diffproj(text: str, base_dir=None) -> DiffProj:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return diffproj_from_json(_load_json(text), base_dir)
    d = _Directives(text, base_dir)
    d.require("differential module", {"g", "h"})
    top = d.scalars.get("top")
    if top is None:
        raise ParseError("differential module file is missing 'top'")
    try:
        return make_diffproj(d.quiver, d.field, top, d.matrices("g"), d.matrices("h"))
    except (ValueError, KeyError) as exc:
        raise ParseError(str(exc)) from None


def diffproj_to_text(M: DiffProj) -> str:
    lines = [f"field {field_to_text(M.field)}"]
    lines.append("quiver {")
    lines.extend("  " + ln for ln in quiver_to_text(M.quiver).splitlines())
    lines.append("}")
    lines.append("top " + " ".join(f"{v}={d}" for v, d in zip(M.quiver.vertices, M.m)))
    for v, G in zip(M.quiver.vertices, M.g):
        if not mat_is_zero(G):
            lines.append(f"g {v} = {matrix_to_text(G)}")
    for a, H in zip(M.quiver.arrows, M.h):
        if not mat_is_zero(H):
            lines.append(f"h {a.name} = {matrix_to_text(H)}")
    return "\n".join(lines) + "\n"


def diffproj_to_json(M: DiffProj) -> dict:
    return {
        "field": field_to_json(M.field),
        "quiver": quiver_to_json(M.quiver),
        "top": {v: d for v, d in zip(M.quiver.vertices, M.m)},
        "g": {v: matrix_to_json(G) for v, G in zip(M.quiver.vertices, M.g)},
        "h": {a.name: matrix_to_json(H) for a, H in zip(M.quiver.arrows, M.h)},
    }


def diffproj_from_json(data: dict, base_dir=None) -> DiffProj:
    field, Q = _field_quiver_from_json(data, base_dir)
    try:
        g = {k: matrix_from_json(v, field) for k, v in data.get("g", {}).items()}
        h = {k: matrix_from_json(v, field) for k, v in data.get("h", {}).items()}
        return make_diffproj(Q, field, dict(data["top"]), g, h)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed differential module JSON: {exc}") from None


# --- raw modules ---------------------------------------------------------------------

def parse_raw(text: str, base_dir=None) -> RawModule:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return raw_from_json(_load_json(text), base_dir)
    d = _Directives(text, base_dir)
    d.require("raw module", {"map", "endo"})
    dims = d.scalars.get("dims")
    if dims is None:
        raise ParseError("raw module file is missing 'dims'")
    try:
        return make_raw(d.quiver, d.field, dims, d.matrices("map"), d.matrices("endo"))
    except (ValueError, KeyError) as exc:
        raise ParseError(str(exc)) from None


def raw_to_text(R: RawModule) -> str:
    lines = [f"field {field_to_text(R.field)}"]
    lines.append("quiver {")
    lines.extend("  " + ln for ln in quiver_to_text(R.quiver).splitlines())
    lines.append("}")
    lines.append("dims " + " ".join(f"{v}={d}" for v, d in zip(R.quiver.vertices, R.dims)))
    for a, M in zip(R.quiver.arrows, R.actions):
        lines.append(f"map {a.name} = {matrix_to_text(M)}")
    for v, D in zip(R.quiver.vertices, R.endos):
        lines.append(f"endo {v} = {matrix_to_text(D)}")
    return "\n".join(lines) + "\n"


def raw_to_json(R: RawModule) -> dict:
    return {
        "field": field_to_json(R.field),
        "quiver": quiver_to_json(R.quiver),
        "dims": {v: d for v, d in zip(R.quiver.vertices, R.dims)},
        "maps": {a.name: matrix_to_json(M) for a, M in zip(R.quiver.arrows, R.actions)},
        "endo": {v: matrix_to_json(D) for v, D in zip(R.quiver.vertices, R.endos)},
    }


def raw_from_json(data: dict, base_dir=None) -> RawModule:
    field, Q = _field_quiver_from_json(data, base_dir)
    try:
        maps = {k: matrix_from_json(v, field) for k, v in data.get("maps", {}).items()}
        endos = {k: matrix_from_json(v, field) for k, v in data.get("endo", {}).items()}
        return make_raw(Q, field, dict(data["dims"]), maps, endos)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed raw module JSON: {exc}") from None


# --- shared helpers --------------------------------------------------------------------

def _load_json(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def _field_quiver_from_json(data: dict, base_dir=None):
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object")
    try:
        field = parse_field(str(data["field"]))
    except KeyError:
        raise ParseError("JSON is missing 'field'") from None
    qdata = data.get("quiver")
    if qdata is None:
        raise ParseError("JSON is missing 'quiver'")
    if isinstance(qdata, dict) and "file" in qdata:
        path = qdata["file"]
        if base_dir:
            path = os.path.join(base_dir, path)
        try:
            with open(path, encoding="utf-8") as fh:
                Q = parse_quiver(fh.read())
        except OSError as exc:
            raise ParseError(f"cannot read quiver file: {exc}") from None
    else:
        Q = quiver_from_json(qdata)
    return field, Q


def detect_kind(text: str) -> str:
    """Guess what a file holds: 'quiver', 'rep', 'diffproj' or 'raw'."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = _load_json(text)
        if "endo" in data:
            return "raw"
        if "top" in data:
            return "diffproj"
        if "dims" in data and "field" in data:
            return "rep"
        if "vertices" in data:
            return "quiver"
        raise ParseError("cannot tell what this JSON file holds")
    words = set()
    for _, content in _logical_lines(text):
        words.add(content.split(" ", 1)[0])
    if "endo" in words:
        return "raw"
    if "top" in words:
        return "diffproj"
    if "dims" in words:
        return "rep"
    if "vertices" in words:
        return "quiver"
    raise ParseError("cannot tell what this file holds")
