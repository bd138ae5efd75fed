"""Finite quivers: the text/JSON parser, structural predicates, the
opposite construction, and the shape-based algebra classification.

A quiver is a finite directed multigraph with named vertices and arrows;
loops and parallel arrows are allowed.  Declaration order is kept and used
for all serialization, so round trips are bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import EmptyQuiverError, ParseError

SHAPE_ACYCLIC = "acyclic"
SHAPE_BASIC_CYCLE = "basic cycle"
SHAPE_CYCLIC_NON_BASIC = "cyclic non-basic"

VERDICT_GORENSTEIN = "Gorenstein"
VERDICT_SELFINJECTIVE = "Selfinjective"
VERDICT_NOT_VIRTUALLY_GORENSTEIN = "NotVirtuallyGorenstein"


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise ValueError(f"duplicate vertex name {v!r}")
            seen.add(v)
        vset = set(self.vertices)
        seen = set()
        for a in self.arrows:
            if a.name in seen:
                raise ValueError(f"duplicate arrow name {a.name!r}")
            seen.add(a.name)
            for end in (a.src, a.tgt):
                if end not in vset:
                    raise ValueError(f"arrow {a.name!r} uses undeclared vertex {end!r}")

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_arrows(self):
        return len(self.arrows)

    def vertex_index(self, v: str) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise KeyError(f"unknown arrow {name!r}")

    def arrows_into(self, v: str) -> list:
        return [i for i, a in enumerate(self.arrows) if a.tgt == v]

    def arrows_out_of(self, v: str) -> list:
        return [i for i, a in enumerate(self.arrows) if a.src == v]

    def __repr__(self):
        arrows = ", ".join(f"{a.name}:{a.src}->{a.tgt}" for a in self.arrows)
        return f"Quiver([{', '.join(self.vertices)}], [{arrows}])"


def make_quiver(vertices, arrows) -> Quiver:
    """Friendly constructor: arrows as (name, src, tgt) triples."""
    return Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))


# --- parsing ----------------------------------------------------------------

_WORD_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_*.")


def tokenize_dsl(text: str):
    """Yield (kind, value, line, col); kinds 'word' and 'punct'."""
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "-" :
            if i + 1 < n and text[i + 1] == ">":
                yield ("punct", "->", line, col)
                i += 2
                col += 2
                continue
            raise ParseError("stray '-' (expected '->')", line, col)
        if ch in ";,:{}=":
            yield ("punct", ch, line, col)
            i += 1
            col += 1
            continue
        if ch in _WORD_CHARS:
            j = i
            while j < n and text[j] in _WORD_CHARS:
                j += 1
            yield ("word", text[i:j], line, col)
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)


def _parse_quiver_tokens(tokens) -> Quiver:
    tokens = list(tokens)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(kind=None, value=None, what=""):
        nonlocal pos
        tok = peek()
        if tok is None:
            last = tokens[-1] if tokens else ("", "", 1, 1)
            raise ParseError(f"unexpected end of input, expected {what}", last[2], last[3])
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {what or value}, got {tok[1]!r}", tok[2], tok[3])
        pos += 1
        return tok

    vertices = []
    arrows = []
    vertex_pos = {}
    arrow_pos = {}
    while peek() is not None:
        kw = take("word", what="'vertices' or 'arrows'")
        if kw[1] == "vertices":
            while peek() and peek()[0] == "word":
                tok = take("word")
                if tok[1] in vertex_pos:
                    raise ParseError(f"duplicate vertex name {tok[1]!r}", tok[2], tok[3])
                vertex_pos[tok[1]] = (tok[2], tok[3])
                vertices.append(tok[1])
            take("punct", ";", "';'")
        elif kw[1] == "arrows":
            while peek() and peek()[1] != ";":
                name = take("word", what="arrow name")
                if name[1] in arrow_pos:
                    raise ParseError(f"duplicate arrow name {name[1]!r}", name[2], name[3])
                take("punct", ":", "':'")
                src = take("word", what="source vertex")
                take("punct", "->", "'->'")
                tgt = take("word", what="target vertex")
                for end in (src, tgt):
                    if end[1] not in vertex_pos:
                        raise ParseError(f"unknown endpoint vertex {end[1]!r}", end[2], end[3])
                arrow_pos[name[1]] = (name[2], name[3])
                arrows.append(Arrow(name[1], src[1], tgt[1]))
                if peek() and peek()[1] == ",":
                    take("punct", ",")
            take("punct", ";", "';'")
        else:
            raise ParseError(f"expected 'vertices' or 'arrows', got {kw[1]!r}", kw[2], kw[3])
    return Quiver(tuple(vertices), tuple(arrows))


def quiver_from_json(data) -> Quiver:
    if not isinstance(data, dict):
        raise ParseError("quiver JSON must be an object")
    try:
        vertices = [str(v) for v in data["vertices"]]
        arrows = [Arrow(str(a["name"]), str(a["src"]), str(a["tgt"])) for a in data.get("arrows", [])]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed quiver JSON: {exc}") from None
    try:
        return Quiver(tuple(vertices), tuple(arrows))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_quiver(text: str) -> Quiver:
    """Parse the quiver DSL, or the JSON twin when the text starts with '{'."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        return quiver_from_json(data)
    return _parse_quiver_tokens(tokenize_dsl(text))


def quiver_to_text(Q: Quiver) -> str:
    lines = ["vertices " + " ".join(Q.vertices) + " ;"]
    if Q.arrows:
        body = ", ".join(f"{a.name}: {a.src} -> {a.tgt}" for a in Q.arrows)
        lines.append(f"arrows {body} ;")
    else:
        lines.append("arrows ;")
    return "\n".join(lines) + "\n"


def quiver_to_json(Q: Quiver) -> dict:
    return {
        "vertices": list(Q.vertices),
        "arrows": [{"name": a.name, "src": a.src, "tgt": a.tgt} for a in Q.arrows],
    }


# --- structure --------------------------------------------------------------

def star_name(name: str) -> str:
    """Involutive renaming for opposite arrows: a <-> a*."""
    return name[:-1] if name.endswith("*") else name + "*"


def opposite(Q: Quiver) -> Quiver:
    """Same vertices, every arrow reversed and star-renamed; an involution."""
    return Quiver(Q.vertices, tuple(Arrow(star_name(a.name), a.tgt, a.src) for a in Q.arrows))


def is_acyclic(Q: Quiver) -> bool:
    """Kahn's algorithm on the directed graph."""
    indeg = {v: 0 for v in Q.vertices}
    for a in Q.arrows:
        indeg[a.tgt] += 1
    queue = [v for v in Q.vertices if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for i in Q.arrows_out_of(v):
            w = Q.arrows[i].tgt
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(Q.vertices)


def _undirected_component(Q: Quiver, start: str) -> set:
    adj = {v: set() for v in Q.vertices}
    for a in Q.arrows:
        adj[a.src].add(a.tgt)
        adj[a.tgt].add(a.src)
    comp = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in comp:
                comp.add(w)
                stack.append(w)
    return comp


def is_connected(Q: Quiver) -> bool:
    """Connectivity of the underlying undirected graph; empty -> False."""
    if not Q.vertices:
        return False
    return len(_undirected_component(Q, Q.vertices[0])) == len(Q.vertices)


def connected_components(Q: Quiver) -> list:
    """Component subquivers, ordered by their first declared vertex."""
    remaining = list(Q.vertices)
    comps = []
    while remaining:
        comp = _undirected_component(Q, remaining[0])
        vertices = tuple(v for v in Q.vertices if v in comp)
        arrows = tuple(a for a in Q.arrows if a.src in comp)
        comps.append(Quiver(vertices, arrows))
        remaining = [v for v in remaining if v not in comp]
    return comps


def is_basic_cycle(Q: Quiver) -> bool:
    """Connected, as many arrows as vertices, in- and out-degree 1 everywhere."""
    if not Q.vertices or not is_connected(Q):
        return False
    if Q.n_arrows != Q.n_vertices:
        return False
    indeg = {v: 0 for v in Q.vertices}
    outdeg = {v: 0 for v in Q.vertices}
    for a in Q.arrows:
        outdeg[a.src] += 1
        indeg[a.tgt] += 1
    return all(indeg[v] == 1 and outdeg[v] == 1 for v in Q.vertices)


def component_shape(Q: Quiver) -> str:
    """Shape of a connected quiver; the three cases partition all of them."""
    if is_acyclic(Q):
        return SHAPE_ACYCLIC
    if is_basic_cycle(Q):
        return SHAPE_BASIC_CYCLE
    return SHAPE_CYCLIC_NON_BASIC


_SHAPE_VERDICT = {
    SHAPE_ACYCLIC: VERDICT_GORENSTEIN,
    SHAPE_BASIC_CYCLE: VERDICT_SELFINJECTIVE,
    SHAPE_CYCLIC_NON_BASIC: VERDICT_NOT_VIRTUALLY_GORENSTEIN,
}


@dataclass(frozen=True)
class ComponentVerdict:
    component: Quiver
    shape: str
    verdict: str


@dataclass(frozen=True)
class ClassificationVerdict:
    components: tuple

    def to_json(self) -> dict:
        return {
            "components": [
                {
                    "vertices": list(c.component.vertices),
                    "shape": c.shape,
                    "verdict": c.verdict,
                }
                for c in self.components
            ]
        }


def classify_algebra(Q: Quiver) -> ClassificationVerdict:
    """Homological type of the dual-numbers algebra over kQ/J^2, per component.

    Acyclic components give a Gorenstein algebra, basic cycles a
    selfinjective one, and any other shape with an oriented cycle one that
    is not virtually Gorenstein.  A disconnected quiver yields a product
    algebra, so each component is judged on its own.
    """
    if not Q.vertices:
        raise EmptyQuiverError("cannot classify the empty quiver")
    verdicts = []
    for comp in connected_components(Q):
        shape = component_shape(comp)
        verdicts.append(ComponentVerdict(comp, shape, _SHAPE_VERDICT[shape]))
    return ClassificationVerdict(tuple(verdicts))
