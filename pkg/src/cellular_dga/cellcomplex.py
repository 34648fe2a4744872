"""Transverse square decompositions and the combinatorics built on them.

Every cell carries its own sheet labels 1..n, ordered by height (1 is the top
sheet).  A vertex uses the order of sheets above it, an edge the order above
its interior (equal to the order at its head vertex), and a square the order
at its upper-right corner.  Each of the fourteen square types is described by
"listings": for every corner, the square's labels of the sheets present there,
top to bottom.  All other data (edge types, crossing arcs, gluing maps) is
derived from those listings.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict, deque
from dataclasses import dataclass, replace
from typing import Any, Iterable, Mapping, Optional, Sequence

__all__ = [
    "EdgeType",
    "Edge",
    "Square",
    "Split",
    "Decomposition",
    "SquareGeometry",
    "SigmaMaps",
    "Violation",
    "ArcInfo",
    "EdgeCell",
    "FaceCell",
    "CellModel",
    "SheetAtlas",
    "MaslovData",
    "DecompositionError",
    "ParseError",
    "MalformedSquare",
    "InconsistentGluing",
    "ValidationFailed",
    "square_geometry",
    "sigma_maps",
    "validate",
    "shift_singular",
    "to_parallel",
    "cell_model",
    "global_sheets",
    "maslov",
    "parse_decomposition",
    "load_decomposition",
    "SIDES",
    "CORNERS",
]

SIDES = ("L", "D", "R", "U")
CORNERS = ("UL", "LL", "LR", "UR")
# side -> (tail corner, head corner)
SIDE_ENDS = {"L": ("LL", "UL"), "D": ("LL", "LR"), "R": ("LR", "UR"), "U": ("UL", "UR")}
REFLECT = {"L": "D", "D": "L", "U": "R", "R": "U", "UL": "LR", "LR": "UL", "LL": "LL", "UR": "UR"}

TailMap = tuple[Optional[int], ...]


class DecompositionError(Exception):
    pass


class ParseError(DecompositionError, ValueError):
    pass


class MalformedSquare(DecompositionError, ValueError):
    pass


class InconsistentGluing(DecompositionError):
    pass


class ValidationFailed(DecompositionError):
    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations[:5]))


# ---------------------------------------------------------------- edge types

EDGE_TAGS = ("PV", "OneCr", "TwoCr", "Cu", "Perm")


@dataclass(frozen=True)
class EdgeType:
    """How the sheets over an edge continue to its tail vertex.

    ``n`` counts sheets at the head.  ``Perm`` is an explicit tail map used
    only for cells created by :func:`to_parallel`.
    """

    tag: str
    n: int
    k: Optional[int] = None
    map: Optional[TailMap] = None

    def __post_init__(self) -> None:
        if self.tag not in EDGE_TAGS:
            raise ParseError(f"unknown edge type tag {self.tag!r}")
        if self.n < 0:
            raise ParseError("edge sheet count must be non-negative")
        if self.tag == "PV":
            if self.k is not None:
                raise ParseError("PV edges take no k")
        elif self.tag == "Perm":
            if self.map is None or len(self.map) != self.n:
                raise ParseError("Perm edge needs a map of length n")
        else:
            need = 2 if self.tag == "TwoCr" else 1
            if self.k is None or self.k < 1 or self.k + need > self.n:
                raise ParseError(f"{self.tag} needs 1 <= k and k+{need} <= n, got k={self.k}, n={self.n}")

    def tail_map(self) -> TailMap:
        n, k = self.n, self.k
        if self.tag == "PV":
            return tuple(range(1, n + 1))
        if self.tag == "Perm":
            return tuple(self.map)  # type: ignore[arg-type]
        out: list[Optional[int]] = list(range(1, n + 1))
        assert k is not None
        if self.tag == "OneCr":
            out[k - 1], out[k] = k + 1, k
        elif self.tag == "TwoCr":
            out[k - 1], out[k], out[k + 1] = k + 1, k + 2, k
        else:
            out = [i if i < k else (None if i <= k + 1 else i - 2) for i in range(1, n + 1)]
        return tuple(out)

    @property
    def tail_n(self) -> int:
        return sum(1 for x in self.tail_map() if x is not None)

    def to_json(self) -> dict[str, Any]:
        d: dict[str, Any] = {"tag": self.tag, "n": self.n}
        if self.k is not None:
            d["k"] = self.k
        if self.map is not None:
            d["map"] = list(self.map)
        return d

    @staticmethod
    def classify(tail: TailMap) -> "EdgeType":
        """Name a tail map, falling back to an explicit ``Perm``."""
        n = len(tail)
        candidates = [EdgeType("PV", n)]
        for k in range(1, n):
            candidates.append(EdgeType("OneCr", n, k))
            candidates.append(EdgeType("Cu", n, k))
        for k in range(1, n - 1):
            candidates.append(EdgeType("TwoCr", n, k))
        for c in candidates:
            if c.tail_map() == tuple(tail):
                return c
        return EdgeType("Perm", n, None, tuple(tail))

    def __str__(self) -> str:
        if self.tag == "PV":
            return f"PV[n={self.n}]"
        if self.tag == "Perm":
            return f"Perm{list(self.map or ())}"
        return f"{self.tag}({self.k})[n={self.n}]"


def inverted_pairs(tail: TailMap) -> list[tuple[int, int]]:
    """Own pairs p<q whose images at the tail are both present but reversed."""
    out = []
    for p in range(1, len(tail) + 1):
        for q in range(p + 1, len(tail) + 1):
            a, b = tail[p - 1], tail[q - 1]
            if a is not None and b is not None and a > b:
                out.append((p, q))
    return out


def pair_up(labels: Iterable[int]) -> list[tuple[int, int]]:
    """Pair consecutive entries of a sorted label set: cusp pairs of absent sheets."""
    s = sorted(labels)
    if len(s) % 2:
        raise InconsistentGluing(f"odd number of vanishing sheets: {s}")
    return [(s[i], s[i + 1]) for i in range(0, len(s), 2)]


# ---------------------------------------------------------------- square types

@dataclass(frozen=True)
class ArcSpec:
    """A crossing arc of a square: the sheet pair and where it is shifted to."""

    pair: tuple[int, int]
    crossing_sides: tuple[str, ...]
    landing: str  # a side or a corner role


@dataclass(frozen=True)
class SquareGeometry:
    tag: int
    n: int
    reflected: bool
    listings: Mapping[str, tuple[int, ...]]
    aliases: Mapping[str, Mapping[int, int]]
    side_tails: Mapping[str, TailMap]
    side_types: Mapping[str, EdgeType]
    arcs: tuple[ArcSpec, ...]
    formula: str  # "std", "st13" or "st14"
    param: Optional[int]
    # roles (after reflection) of the two paths from LL to UR
    first_path: tuple[str, str]
    second_path: tuple[str, str]

    def role(self, unreflected: str) -> str:
        return REFLECT[unreflected] if self.reflected else unreflected


def _base(n: int) -> list[int]:
    return list(range(1, n + 1))


def _swap(lst: list[int], k: int) -> list[int]:
    """Exchange the sheets k and k+1 wherever they sit."""
    out = list(lst)
    i, j = out.index(k), out.index(k + 1)
    out[i], out[j] = out[j], out[i]
    return out


def _put(lst: list[int], k: int, block: Sequence[int]) -> list[int]:
    """Replace the run k, k+1, ... of base labels by ``block``."""
    out = list(lst)
    i = out.index(k)
    out[i:i + len(block)] = list(block)
    return out


def _drop(lst: list[int], *sheets: int) -> list[int]:
    return [x for x in lst if x not in sheets]


def _check_params(tag: int, n: int, k: Optional[int], l: Optional[int]) -> None:
    def need(cond: bool, msg: str) -> None:
        if not cond:
            raise MalformedSquare(f"type {tag}, n={n}, k={k}, l={l}: {msg}")

    need(1 <= tag <= 14, "square type must be 1..14")
    need(n >= 1, "n must be positive")
    if tag == 1:
        need(k is None and l is None, "type 1 takes no parameters")
    elif tag in (2, 3, 4, 9):
        need(k is not None and l is None and 1 <= k <= n - 1, "needs 1 <= k <= n-1")
    elif tag in (5, 6, 8, 12, 13):
        need(k is not None and l is None and 1 <= k <= n - 2, "needs 1 <= k <= n-2")
    elif tag in (7, 11):
        need(k is not None and l is not None and 1 <= k and k + 1 < l <= n - 1, "needs 1 <= k, k+1 < l <= n-1")
    elif tag == 10:
        need(k is not None and l is not None and 1 <= k <= n - 1 and 1 <= l <= n - 1 and abs(k - l) >= 2,
             "needs 1 <= k, l <= n-1 and |k-l| >= 2")
    elif tag == 14:
        need(k is None and l is not None and 3 <= l <= n, "needs 3 <= l <= n")


def _unreflected_listings(tag: int, n: int, k: Optional[int], l: Optional[int]) -> tuple[dict, dict]:
    b = _base(n)
    aliases: dict[str, dict[int, int]] = {}
    if tag == 1:
        ul, ll, lr = b, b, b
    elif tag == 2:
        ul, ll, lr = _swap(b, k), _swap(b, k), b
    elif tag == 3:
        ul, ll, lr = b, _swap(b, k), b
    elif tag == 4:
        ul, ll, lr = b, b, _swap(b, k)
    elif tag == 5:
        low = _put(b, k, [k + 2, k, k + 1])
        ul, ll, lr = b, low, low
    elif tag == 6:
        ul, ll, lr = b, _put(b, k, [k, k + 2, k + 1]), _put(b, k, [k + 2, k, k + 1])
    elif tag == 7:
        ul, ll, lr = _swap(b, k), _swap(_swap(b, k), l), _swap(b, l)
    elif tag == 8:
        ul = _put(b, k, [k + 1, k, k + 2])
        ll = _put(b, k, [k + 2, k + 1, k])
        lr = _put(b, k, [k + 2, k, k + 1])
    elif tag == 9:
        ul, ll, lr = _drop(b, k, k + 1), _drop(b, k, k + 1), b
    elif tag == 10:
        ul, ll, lr = _drop(b, k, k + 1), _drop(_swap(b, l), k, k + 1), _swap(b, l)
    elif tag == 11:
        ul, ll, lr = _drop(b, k, k + 1), _drop(b, k, k + 1, l, l + 1), _drop(b, l, l + 1)
    elif tag == 12:
        ul, ll, lr = _drop(b, k, k + 1), _drop(b, k, k + 1), _put(b, k, [k + 2, k, k + 1])
    elif tag == 13:
        # the surviving sheet left of the swallowtail is labelled k+2 at UL and k+1 at LL
        ul, ll, lr = _drop(b, k, k + 1), _drop(b, k, k + 2), _swap(b, k + 1)
        aliases["L"] = {k + 2: k + 1}
    else:
        ul, ll, lr = _drop(b, l - 1, l), _drop(b, l - 2, l), _swap(b, l - 2)
        aliases["L"] = {l - 2: l - 1}
    listings = {"UL": tuple(ul), "LL": tuple(ll), "LR": tuple(lr), "UR": tuple(b)}
    return listings, aliases


def _tail_from_listings(head: Sequence[int], tail: Sequence[int], alias: Mapping[int, int]) -> TailMap:
    pos = {s: i + 1 for i, s in enumerate(tail)}
    return tuple(pos.get(alias.get(s, s)) for s in head)


def _order_flips(a: Sequence[int], b: Sequence[int], i: int, j: int) -> bool:
    if i not in a or j not in a or i not in b or j not in b:
        return False
    return (a.index(i) < a.index(j)) != (b.index(i) < b.index(j))


def _derive_arcs(tag: int, listings: Mapping[str, Sequence[int]], n: int) -> tuple[ArcSpec, ...]:
    arcs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            sides = tuple(s for s in SIDES
                          if _order_flips(listings[SIDE_ENDS[s][0]], listings[SIDE_ENDS[s][1]], i, j))
            if not sides:
                continue
            ends = [SIDE_ENDS[s][0] for s in sides]
            if len(ends) == 1:
                if tag not in (12, 13, 14):
                    raise MalformedSquare(f"type {tag}: arc ({i},{j}) has a single boundary endpoint")
                ends.append("LL")
            if len(ends) != 2:
                raise MalformedSquare(f"type {tag}: arc ({i},{j}) meets {len(ends)} sides")
            if ends[0] == ends[1]:
                landing = ends[0]
            else:
                found = [s for s in SIDES if set(SIDE_ENDS[s]) == set(ends)]
                if len(found) != 1:
                    raise MalformedSquare(f"type {tag}: arc ({i},{j}) cannot be shifted to a side")
                landing = found[0]
            arcs.append(ArcSpec((i, j), sides, landing))
    return tuple(arcs)


def square_geometry(tag: int, n: int, k: Optional[int] = None, l: Optional[int] = None,
                    reflected: bool = False) -> SquareGeometry:
    """Listings, side types and shifted arcs of an elementary square."""
    _check_params(tag, n, k, l)
    listings, aliases = _unreflected_listings(tag, n, k, l)
    arcs = _derive_arcs(tag, listings, n)
    tails = {s: _tail_from_listings(listings[SIDE_ENDS[s][1]], listings[SIDE_ENDS[s][0]], aliases.get(s, {}))
             for s in SIDES}
    formula, param = "std", None
    if tag == 13:
        formula, param = "st13", k
    elif tag == 14:
        formula, param = "st14", l
    first, second = ("L", "U"), ("D", "R")
    if reflected:
        R = REFLECT
        listings = {R[c]: v for c, v in listings.items()}
        aliases = {R[s]: v for s, v in aliases.items()}
        tails = {R[s]: v for s, v in tails.items()}
        arcs = tuple(ArcSpec(a.pair, tuple(R[s] for s in a.crossing_sides), R[a.landing]) for a in arcs)
        first, second = ("D", "R"), ("L", "U")
    types = {s: EdgeType.classify(t) for s, t in tails.items()}
    return SquareGeometry(tag, n, reflected, listings, aliases, tails, types, arcs, formula, param, first, second)


@dataclass(frozen=True)
class SigmaMaps:
    """Doubled positions of each sheet above UL (sigma_L) and LR (sigma_D).

    A sheet at position p is stored as 2p; a vanishing cusp sheet sits between
    positions and is stored as an odd number (the half-integer position doubled).
    """

    sigma_L: tuple[int, ...]
    sigma_D: tuple[int, ...]
    edge_types: Mapping[str, EdgeType]


def _doubled_positions(listing: Sequence[int], n: int) -> tuple[int, ...]:
    out = []
    for s in range(1, n + 1):
        if s in listing:
            out.append(2 * (listing.index(s) + 1))
        else:
            out.append(2 * sum(1 for x in listing if x < s) + 1)
    return tuple(out)


def sigma_maps(tag: int, n: int, k: Optional[int] = None, l: Optional[int] = None,
               reflected: bool = False) -> SigmaMaps:
    g = square_geometry(tag, n, k, l, reflected)
    return SigmaMaps(_doubled_positions(g.listings["UL"], n), _doubled_positions(g.listings["LR"], n),
                     dict(g.side_types))


# ---------------------------------------------------------------- decomposition model

@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    type: EdgeType


@dataclass(frozen=True)
class Split:
    """Marks a square subdivided by :func:`to_parallel`."""

    diagonal: str
    lower: str


@dataclass(frozen=True)
class Square:
    id: str
    type: int
    n: int
    k: Optional[int]
    l: Optional[int]
    reflected: bool
    sides: Mapping[str, tuple[str, ...]]
    split: Optional[Split] = None

    def geometry(self) -> SquareGeometry:
        return square_geometry(self.type, self.n, self.k, self.l, self.reflected)


@dataclass(frozen=True)
class Decomposition:
    vertices: tuple[str, ...]
    edges: Mapping[str, Edge]
    squares: Mapping[str, Square]

    def to_json(self) -> dict[str, Any]:
        edges = [{"id": e.id, "tail": e.tail, "head": e.head, "type": e.type.to_json()}
                 for e in self.edges.values()]
        squares = []
        for s in self.squares.values():
            rec: dict[str, Any] = {"id": s.id, "type": s.type, "n": s.n, "k": s.k, "l": s.l,
                                   "reflected": s.reflected,
                                   "sides": {r: (p[0] if len(p) == 1 else list(p)) for r, p in s.sides.items()}}
            if s.split is not None:
                rec["split"] = {"diagonal": s.split.diagonal, "lower": s.split.lower}
            squares.append(rec)
        return {"vertices": list(self.vertices), "edges": edges, "squares": squares}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @property
    def is_parallel(self) -> bool:
        return any(s.split is not None for s in self.squares.values()) or any(
            len(p) > 1 for s in self.squares.values() for p in s.sides.values())


def _strict(obj: Any, allowed: set[str], required: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be an object")
    extra = set(obj) - allowed
    if extra:
        raise ParseError(f"{what}: unknown field(s) {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise ParseError(f"{what}: missing field(s) {sorted(missing)}")


def _opt_int(v: Any, what: str) -> Optional[int]:
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{what} must be an integer or null")
    return v


def _id(v: Any, what: str) -> str:
    if not isinstance(v, str) or not v:
        raise ParseError(f"{what} must be a non-empty string id")
    return v


def parse_decomposition(doc: Any) -> Decomposition:
    """Strictly parse the JSON form of a decomposition."""
    _strict(doc, {"vertices", "edges", "squares"}, {"vertices", "edges", "squares"}, "decomposition")
    if not isinstance(doc["vertices"], list):
        raise ParseError("vertices must be a list")
    vertices = tuple(_id(v, "vertex id") for v in doc["vertices"])
    if not isinstance(doc["edges"], list) or not isinstance(doc["squares"], list):
        raise ParseError("edges and squares must be lists")
    edges: dict[str, Edge] = {}
    for rec in doc["edges"]:
        _strict(rec, {"id", "tail", "head", "type"}, {"id", "tail", "head", "type"}, "edge")
        t = rec["type"]
        _strict(t, {"tag", "n", "k", "map"}, {"tag", "n"}, f"type of edge {rec.get('id')!r}")
        mp = t.get("map")
        if mp is not None:
            if not isinstance(mp, list):
                raise ParseError("edge map must be a list")
            mp = tuple(_opt_int(x, "edge map entry") for x in mp)
        n = _opt_int(t["n"], "edge n")
        if n is None:
            raise ParseError("edge n is required")
        et = EdgeType(str(t["tag"]), n, _opt_int(t.get("k"), "edge k"), mp)
        e = Edge(_id(rec["id"], "edge id"), _id(rec["tail"], "edge tail"), _id(rec["head"], "edge head"), et)
        if e.id in edges:
            raise ParseError(f"duplicate edge id {e.id!r}")
        edges[e.id] = e
    squares: dict[str, Square] = {}
    for rec in doc["squares"]:
        _strict(rec, {"id", "type", "n", "k", "l", "reflected", "sides", "split"},
                {"id", "type", "n", "sides"}, "square")
        sides_rec = rec["sides"]
        _strict(sides_rec, set(SIDES), set(SIDES), f"sides of square {rec.get('id')!r}")
        sides: dict[str, tuple[str, ...]] = {}
        for role in SIDES:
            v = sides_rec[role]
            if isinstance(v, list):
                if not v:
                    raise ParseError("empty side path")
                sides[role] = tuple(_id(x, "side edge") for x in v)
            else:
                sides[role] = (_id(v, "side edge"),)
        refl = rec.get("reflected", False)
        if not isinstance(refl, bool):
            raise ParseError("reflected must be a boolean")
        split = None
        if rec.get("split") is not None:
            sp = rec["split"]
            _strict(sp, {"diagonal", "lower"}, {"diagonal", "lower"}, "split")
            split = Split(_id(sp["diagonal"], "split diagonal"), _id(sp["lower"], "split lower"))
        tag = _opt_int(rec["type"], "square type")
        n = _opt_int(rec["n"], "square n")
        if tag is None or n is None:
            raise ParseError("square type and n are required")
        s = Square(_id(rec["id"], "square id"), tag, n, _opt_int(rec.get("k"), "k"),
                   _opt_int(rec.get("l"), "l"), refl, sides, split)
        if s.id in squares:
            raise ParseError(f"duplicate square id {s.id!r}")
        squares[s.id] = s
    ids = list(vertices) + list(edges) + list(squares) + [s.split.lower for s in squares.values() if s.split]
    if len(ids) != len(set(ids)):
        raise ParseError("cell ids must be unique across vertices, edges and squares")
    return Decomposition(vertices, edges, squares)


def load_decomposition(text: str) -> Decomposition:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_decomposition(doc)


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    rule: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.where}: {self.message}"

    def to_json(self) -> dict[str, str]:
        return {"rule": self.rule, "where": self.where, "message": self.message}


def _structural(d: Decomposition) -> list[Violation]:
    out: list[Violation] = []
    vset = set(d.vertices)
    if len(vset) != len(d.vertices):
        out.append(Violation("structure", "vertices", "duplicate vertex ids"))
    for e in d.edges.values():
        for end in (e.tail, e.head):
            if end not in vset:
                out.append(Violation("structure", e.id, f"unknown vertex {end!r}"))
    border: dict[str, list[str]] = defaultdict(list)
    for s in d.squares.values():
        try:
            s.geometry()
        except MalformedSquare as exc:
            out.append(Violation("square-type", s.id, str(exc)))
        for role, path in s.sides.items():
            for eid in path:
                if eid not in d.edges:
                    out.append(Violation("structure", s.id, f"side {role} uses unknown edge {eid!r}"))
                else:
                    border[eid].append(s.id)
    for eid, sqs in border.items():
        if len(sqs) > 2:
            out.append(Violation("structure", eid, f"edge borders {len(sqs)} squares"))
    if out:
        return out
    for s in d.squares.values():
        ends = {}
        for role, path in s.sides.items():
            es = [d.edges[x] for x in path]
            for a, b in zip(es, es[1:]):
                if a.head != b.tail:
                    out.append(Violation("A1", s.id, f"side {role} is not a path"))
            ends[role] = (es[0].tail, es[-1].head)
        corner = {"LL": {ends["L"][0], ends["D"][0]}, "UL": {ends["L"][1], ends["U"][0]},
                  "LR": {ends["D"][1], ends["R"][0]}, "UR": {ends["R"][1], ends["U"][1]}}
        for c, vs in corner.items():
            if len(vs) != 1:
                out.append(Violation("A1", s.id, f"sides disagree on corner {c}: {sorted(vs)}"))
    return out


def _sheet_counts(d: Decomposition) -> tuple[dict[str, int], list[Violation]]:
    counts: dict[str, set[int]] = defaultdict(set)
    for e in d.edges.values():
        counts[e.head].add(e.type.n)
        counts[e.tail].add(e.type.tail_n)
    out = []
    res = {}
    for v in d.vertices:
        c = counts.get(v, set())
        if len(c) > 1:
            out.append(Violation("sheets", v, f"incident edges disagree on sheet count {sorted(c)}"))
        res[v] = min(c) if c else 0
    return res, out


def validate(d: Decomposition) -> list[Violation]:
    """Every violation of the structural rules and of (A1)-(A4); empty means valid."""
    out = _structural(d)
    if out:
        return out
    _, sv = _sheet_counts(d)
    out.extend(sv)
    for s in d.squares.values():
        g = s.geometry()
        for role in SIDES:
            path = s.sides[role]
            if len(path) != 1:
                continue
            declared = d.edges[path[0]].type
            if declared != g.side_types[role]:
                out.append(Violation("edge-type", s.id,
                                     f"side {role} ({path[0]}) is {declared}, square induces {g.side_types[role]}"))
    if out:
        return out
    try:
        model = cell_model(d)
    except DecompositionError as exc:
        return [Violation("gluing", "model", str(exc))]
    if d.is_parallel:
        return out
    out.extend(_check_a2(d))
    out.extend(_check_a3(d))
    out.extend(_check_a4(d, model))
    return out


def _check_a2(d: Decomposition) -> list[Violation]:
    out = []
    T: dict[tuple[str, tuple[int, int]], list[str]] = defaultdict(list)
    for e in d.edges.values():
        tail = e.type.tail_map()
        for p, q in inverted_pairs(tail):
            a, b = sorted((tail[p - 1], tail[q - 1]))  # type: ignore[type-var]
            T[(e.tail, (a, b))].append(e.id)
    for (v, pair), es in sorted(T.items()):
        if len(es) > 2:
            out.append(Violation("A2", v, f"{len(es)} edges from {v} carry crossing {pair}"))
        elif len(es) == 2:
            ok = any(s.type == 3 and s.sides["L"][0] in es and s.sides["D"][0] in es
                     and d.edges[s.sides["L"][0]].tail == v for s in d.squares.values())
            if not ok:
                out.append(Violation("A2", v, f"edges {sorted(es)} share crossing {pair} outside a type 3 square"))
    return out


def _check_a3(d: Decomposition) -> list[Violation]:
    out = []
    t3 = [s for s in d.squares.values() if s.type == 3]

    def cells(s: Square) -> set[str]:
        es = {x for p in s.sides.values() for x in p}
        return es | {d.edges[x].tail for x in es} | {d.edges[x].head for x in es}

    for i, a in enumerate(t3):
        for b in t3[i + 1:]:
            common = cells(a) & cells(b)
            if common:
                out.append(Violation("A3", f"{a.id},{b.id}", f"type 3 squares share {sorted(common)}"))
    return out


def _check_a4(d: Decomposition, model: "CellModel") -> list[Violation]:
    out = []
    placement = shift_singular(d, model)
    on_edge: dict[str, list[ArcInfo]] = defaultdict(list)
    for arcs in placement.values():
        for a in arcs:
            if a.landing_cell in d.edges:
                on_edge[a.landing_cell].append(a)
    for eid, arcs in sorted(on_edge.items()):
        squares = {a.square for a in arcs}
        if len(squares) > 1:
            out.append(Violation("A4", eid, f"arcs from squares {sorted(squares)} are shifted onto the same edge"))
        elif len(arcs) > 1 and d.squares[arcs[0].square].type not in (5, 6, 8, 12):
            out.append(Violation("A4", eid, "two arcs of one square are shifted onto the same edge"))
    # closed crossing components that only pass through type 3 squares
    arcs_all = [a for arcs in placement.values() for a in arcs]
    parent = list(range(len(arcs_all)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seen: dict[tuple, list[int]] = defaultdict(list)
    for idx, a in enumerate(arcs_all):
        for key in a.boundary_points:
            seen[key].append(idx)
    for idxs in seen.values():
        for x in idxs[1:]:
            parent[find(x)] = find(idxs[0])
    comps: dict[int, list[int]] = defaultdict(list)
    for idx in range(len(arcs_all)):
        comps[find(idx)].append(idx)
    for members in comps.values():
        keys = [k for i in members for k in arcs_all[i].boundary_points]
        closed = all(len(arcs_all[i].boundary_points) == 2 for i in members) and all(
            len(seen[k]) == 2 for k in keys)
        if closed and all(d.squares[arcs_all[i].square].type == 3 for i in members):
            sq = sorted({arcs_all[i].square for i in members})
            out.append(Violation("A4", ",".join(sq), "closed crossing component is shrunk to a point"))
    return out


# ---------------------------------------------------------------- cell model

@dataclass(frozen=True)
class EdgeCell:
    id: str
    tail: str
    head: str
    n: int
    tail_map: TailMap
    b_consts: frozenset[tuple[int, int]] = frozenset()

    @property
    def tail_consts(self) -> list[tuple[int, int]]:
        return pair_up(p for p, x in enumerate(self.tail_map, 1) if x is None)


@dataclass(frozen=True)
class FaceCell:
    """A 2-cell with its two boundary paths from v0 to v1.

    ``path_maps[i]`` lists (edge id, face label -> edge label) for the edges of
    path i from v0 to v1; ``inner_vertices[i]`` likewise for the vertices strictly
    between.  ``path_v0[i]`` is the view of v0 reached along path i; the two
    agree except over a swallowtail, where ``v0_index`` picks the one used in
    the differential.
    """

    id: str
    n: int
    v0: str
    v1: str
    paths: tuple[tuple[str, ...], tuple[str, ...]]
    path_maps: tuple[tuple[tuple[str, TailMap], ...], tuple[tuple[str, TailMap], ...]]
    inner_vertices: tuple[tuple[tuple[str, TailMap], ...], tuple[tuple[str, TailMap], ...]]
    path_v0: tuple[TailMap, TailMap]
    v0_index: int = 0
    formula: str = "std"
    param: Optional[int] = None
    x_path: Optional[int] = None  # path carrying the swallowtail right factor
    m_path: Optional[int] = None  # path whose first edge carries the B(I+E) correction
    square: str = ""
    labels: tuple[int, ...] = ()  # the square's sheet label of each face label

    @property
    def v0_map(self) -> TailMap:
        return self.path_v0[self.v0_index]

    @property
    def v0_consts(self) -> list[tuple[int, int]]:
        return pair_up(i for i, x in enumerate(self.v0_map, 1) if x is None)


@dataclass(frozen=True)
class CellModel:
    vertices: Mapping[str, int]
    edges: Mapping[str, EdgeCell]
    faces: Mapping[str, FaceCell]
    kills: frozenset[tuple[str, int, int]]
    arcs: Mapping[str, tuple["ArcInfo", ...]]

    def sheet_count(self, cell: str) -> int:
        if cell in self.vertices:
            return self.vertices[cell]
        if cell in self.edges:
            return self.edges[cell].n
        return self.faces[cell].n

    def killed(self, cell: str, p: int, q: int) -> bool:
        return (cell, p, q) in self.kills

    def dimension(self, cell: str) -> int:
        return 0 if cell in self.vertices else 1 if cell in self.edges else 2


@dataclass(frozen=True)
class ArcInfo:
    square: str
    pair: tuple[int, int]
    landing_role: str
    landing_cell: str
    closed_cells: tuple[str, ...]
    # (edge id, own pair) for every boundary crossing of the arc
    boundary_points: tuple[tuple[str, tuple[int, int]], ...]


def _compose(m: TailMap, tail: TailMap) -> TailMap:
    return tuple(None if x is None else tail[x - 1] for x in m)


def _walk(face_n: int, v1_map: TailMap, path: Sequence[str], edges: Mapping[str, EdgeCell]):
    """Walk a boundary path from its head down to v0; returns edge maps and vertex maps."""
    m = v1_map
    emaps: list[tuple[str, TailMap]] = []
    vmaps: list[tuple[str, TailMap]] = []
    for eid in reversed(path):
        e = edges[eid]
        emaps.append((eid, m))
        m = _compose(m, e.tail_map)
        vmaps.append((e.tail, m))
    emaps.reverse()
    vmaps.reverse()
    # vmaps[0] is v0; the rest are the inner vertices in path order
    return tuple(emaps), tuple(vmaps[1:]), vmaps[0][1]


def _make_face(fid: str, n: int, v0: str, v1: str, p1: Sequence[str], p2: Sequence[str],
               edges: Mapping[str, EdgeCell], v1_map: TailMap, *, formula: str = "std",
               param: Optional[int] = None, x_path: Optional[int] = None, m_path: Optional[int] = None,
               v0_from: int = 0, strict: bool = True, square: str = "",
               labels: Sequence[int] = ()) -> FaceCell:
    e1, i1, w1 = _walk(n, v1_map, p1, edges)
    e2, i2, w2 = _walk(n, v1_map, p2, edges)
    if edges[p1[0]].tail != v0 or edges[p2[0]].tail != v0:
        raise InconsistentGluing(f"face {fid}: paths do not start at {v0}")
    if strict and w1 != w2:
        raise InconsistentGluing(f"face {fid}: boundary paths disagree on the sheets at {v0}: {w1} vs {w2}")
    return FaceCell(fid, n, v0, v1, (tuple(p1), tuple(p2)), (e1, e2), (i1, i2), (w1, w2), v0_from,
                    formula, param, x_path, m_path, square, tuple(labels) or tuple(range(1, n + 1)))


def _edge_cells(d: Decomposition) -> dict[str, EdgeCell]:
    return {e.id: EdgeCell(e.id, e.tail, e.head, e.type.n, e.type.tail_map()) for e in d.edges.values()}


def _between_listing(ur: Sequence[int], k: int) -> tuple[int, ...]:
    """Sheet order between the two crossings of a TwoCr(k) edge, given its head order."""
    out = list(ur)
    out[k], out[k + 1] = out[k + 1], out[k]
    return tuple(out)


def cell_model(d: Decomposition) -> CellModel:
    """Resolve every face's view of its boundary cells and the killed sheet pairs."""
    vcount, sv = _sheet_counts(d)
    if sv:
        raise InconsistentGluing(str(sv[0]))
    edges = _edge_cells(d)
    faces: dict[str, FaceCell] = {}
    arcs: dict[str, tuple[ArcInfo, ...]] = {}
    b_consts: dict[str, set[tuple[int, int]]] = defaultdict(set)
    kill_list: list[tuple[str, int, int]] = []
    for s in d.squares.values():
        g = s.geometry()
        ident = tuple(range(1, s.n + 1))
        if s.split is None:
            path1 = s.sides[g.first_path[0]] + s.sides[g.first_path[1]]
            path2 = s.sides[g.second_path[0]] + s.sides[g.second_path[1]]
            swallow = g.formula != "std"
            v0 = edges[path1[0]].tail
            v1 = edges[path1[-1]].head
            face = _make_face(s.id, s.n, v0, v1, path1, path2, edges, ident,
                              formula=g.formula, param=g.param,
                              x_path=0 if swallow else None, m_path=1 if swallow else None,
                              v0_from=1 if swallow else 0, strict=not swallow, square=s.id)
            faces[s.id] = face
            views = _role_views(s, g, face)
            lower_sheet = None
        else:
            upper, lower, views, lower_sheet = _split_faces(s, g, edges)
            faces[upper.id] = upper
            faces[lower.id] = lower
        info = []
        for a in g.arcs:
            role = a.landing
            if s.split is not None and role == g.role("D") and lower_sheet is not None and a.pair == lower_sheet[1]:
                role = "C"
            cells = views[role]
            closed = []
            for cell, mp in cells:
                p, q = mp[a.pair[0] - 1], mp[a.pair[1] - 1]
                if p is not None and q is not None:
                    closed.append(cell)
                    kill_list.append((cell, min(p, q), max(p, q)))
            points = []
            for side in a.crossing_sides:
                for cell, mp in views[side]:
                    if cell in edges:
                        p, q = mp[a.pair[0] - 1], mp[a.pair[1] - 1]
                        if p is not None and q is not None:
                            points.append((cell, (min(p, q), max(p, q))))
                        break
            landing_cell = cells[0][0] if len(cells) == 1 else next(c for c, _ in cells if c in edges)
            info.append(ArcInfo(s.id, a.pair, role, landing_cell, tuple(dict.fromkeys(closed)), tuple(points)))
            if g.formula != "std" and role == g.role("D"):
                for cell, mp in cells:
                    if cell in edges:
                        p, q = mp[a.pair[0] - 1], mp[a.pair[1] - 1]
                        b_consts[cell].add((min(p, q), max(p, q)))  # type: ignore[type-var]
        arcs[s.id] = tuple(info)
    kills = frozenset(kill_list)
    edges = {k: replace(e, b_consts=frozenset(b_consts.get(k, ()))) for k, e in edges.items()}
    model = CellModel(dict(vcount), edges, faces, kills, arcs)
    _check_kills(model)
    return model


def _role_views(s: Square, g: SquareGeometry, face: FaceCell) -> dict[str, list[tuple[str, TailMap]]]:
    """Face-label maps of every closed boundary piece, keyed by role."""
    views: dict[str, list[tuple[str, TailMap]]] = {}
    ident = tuple(range(1, s.n + 1))
    for pi, (a, b) in enumerate((g.first_path, g.second_path)):
        emaps = face.path_maps[pi]
        inner = face.inner_vertices[pi]
        v0m = face.path_v0[pi]
        na = len(s.sides[a])
        # vertex sequence along the path: v0, inner..., v1
        verts = [(face.v0, v0m)] + list(inner) + [(face.v1, ident)]
        corner = verts[na]
        views[a] = list(emaps[:na]) + verts[:na + 1]
        views[b] = list(emaps[na:]) + verts[na:]
        views[SIDE_ENDS[a][1]] = [corner]
    views["LL"] = [(face.v0, face.v0_map)]
    views["UR"] = [(face.v1, ident)]
    return views


def _split_faces(s: Square, g: SquareGeometry, edges: Mapping[str, EdgeCell]):
    """The two faces of a square subdivided by to_parallel, with role views."""
    assert s.split is not None
    R, L, D, U = (g.role(x) for x in ("R", "L", "D", "U"))
    rk = g.side_types[R].k
    assert rk is not None
    z = _between_listing(g.listings["UR"], rk)
    n = s.n
    ident = tuple(range(1, n + 1))
    zpos = {sheet: i + 1 for i, sheet in enumerate(z)}
    diag = s.split.diagonal
    rpath = s.sides[R]
    # the split vertex is the head of the last piece below it: the diagonal's head
    r0 = edges[diag].head
    cut = next(i for i, e in enumerate(rpath) if edges[e].head == r0)
    r_low, r_up = rpath[:cut + 1], rpath[cut + 1:]
    # upper-face labels are the square's sheets; lower-face labels follow z
    to_lower = tuple(zpos[x] for x in ident)
    lower_v1 = ident
    lower_id = s.split.lower
    if s.type == 6:
        lpath = s.sides[L]
        l0 = edges[diag].tail
        lcut = next(i for i, e in enumerate(lpath) if edges[e].head == l0)
        l_low, l_up = lpath[:lcut + 1], lpath[lcut + 1:]
        upper = _make_face(s.id, n, l0, edges[r_up[-1]].head, l_up + s.sides[U], (diag,) + r_up, edges, ident,
                           square=s.id)
        lower = _make_face(lower_id, n, edges[l_low[0]].tail, r0, l_low + (diag,), s.sides[D] + r_low,
                           edges, lower_v1, square=s.id, labels=z)
    else:
        upper = _make_face(s.id, n, edges[diag].tail, edges[r_up[-1]].head, s.sides[L] + s.sides[U],
                           (diag,) + r_up, edges, ident, square=s.id)
        lower = _make_face(lower_id, n, edges[diag].tail, r0, s.sides[D] + r_low, (diag,), edges, lower_v1,
                           square=s.id, labels=z)

    def via_lower(mp: TailMap) -> TailMap:
        return tuple(mp[to_lower[i] - 1] for i in range(n))

    views: dict[str, list[tuple[str, TailMap]]] = defaultdict(list)
    # upper face paths: first is the L side (or L+ then U), second is diag then R+
    up1, up2 = upper.path_maps
    ui1, ui2 = upper.inner_vertices
    lo1, lo2 = lower.path_maps
    li1, li2 = lower.inner_vertices
    everything: list[tuple[str, TailMap]] = []
    everything += list(up1) + list(up2) + list(ui1) + list(ui2)
    everything += [(upper.v0, upper.v0_map), (upper.v1, ident)]
    everything += [(c, via_lower(m)) for c, m in list(lo1) + list(lo2) + list(li1) + list(li2)]
    everything += [(lower.v0, via_lower(lower.v0_map)), (lower.v1, via_lower(ident))]
    seen: dict[str, TailMap] = {}
    for c, m in everything:
        seen.setdefault(c, m)

    def closed(path: Sequence[str]) -> list[tuple[str, TailMap]]:
        cells = list(path) + [edges[path[0]].tail] + [edges[e].head for e in path]
        return [(c, seen[c]) for c in dict.fromkeys(cells)]

    views[L] = closed(s.sides[L])
    views[U] = closed(s.sides[U])
    views[D] = closed(s.sides[D])
    views[R] = closed(rpath)
    views["C"] = closed((diag,))
    ll = edges[s.sides["D"][0]].tail
    ul = edges[s.sides["U"][0]].tail
    lr = edges[s.sides["R"][0]].tail
    ur = edges[s.sides["U"][-1]].head
    for name, v in (("LL", ll), ("UL", ul), ("LR", lr), ("UR", ur)):
        views[name] = [(v, seen[v])]
    # the crossing on the upper half of R moves to the diagonal
    upper_pair = next((a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)
                      if _order_flips(z, g.listings["UR"], a, b))
    return upper, lower, views, ("C", upper_pair)


def _check_kills(model: CellModel) -> None:
    """Every reversed pair along an edge must be killed at the tail."""
    for e in model.edges.values():
        for p, q in inverted_pairs(e.tail_map):
            a, b = sorted((e.tail_map[p - 1], e.tail_map[q - 1]))  # type: ignore[type-var]
            if not model.killed(e.tail, a, b):
                raise InconsistentGluing(f"edge {e.id}: sheets cross at {e.tail} but pair ({a},{b}) survives there")
    for f in model.faces.values():
        for pm in f.path_maps:
            for eid, mp in pm:
                _check_face_view(model, f, eid, mp)
        _check_face_view(model, f, f.v0, f.v0_map)


def _check_face_view(model: CellModel, f: FaceCell, cell: str, mp: TailMap) -> None:
    for i in range(1, f.n + 1):
        for j in range(i + 1, f.n + 1):
            p, q = mp[i - 1], mp[j - 1]
            if p is not None and q is not None and p > q and not model.killed(cell, q, p):
                raise InconsistentGluing(f"face {f.id}: sheets {i},{j} appear reversed over {cell} but are not killed")


def shift_singular(d: Decomposition, model: Optional[CellModel] = None) -> dict[str, tuple[ArcInfo, ...]]:
    """Where every crossing arc of every square sits after the homotopy into the 1-skeleton."""
    if model is None:
        model = cell_model(d)
    return {sid: model.arcs[sid] for sid in sorted(model.arcs)}


# ---------------------------------------------------------------- E_parallel

def to_parallel(d: Decomposition) -> Decomposition:
    """Subdivide squares of types 5, 6, 8 and 12 so no edge carries two arcs."""
    bad = validate(d)
    if bad:
        raise ValidationFailed(bad)
    vertices = list(d.vertices)
    edges = dict(d.edges)
    replaced: dict[str, tuple[str, ...]] = {}
    squares = dict(d.squares)
    taken = set(vertices) | set(edges) | set(squares)

    def fresh(name: str) -> str:
        base, i = name, 1
        while name in taken:
            i += 1
            name = f"{base}~{i}"
        taken.add(name)
        return name

    def split_edge(eid: str, between: tuple[int, ...], head_listing: tuple[int, ...],
                   tail_listing: tuple[int, ...]) -> tuple[str, str, str]:
        if eid in replaced:
            raise DecompositionError(f"edge {eid} would be subdivided twice")
        e = edges.pop(eid)
        mid = fresh(f"{eid}@0")
        lo, up = fresh(f"{eid}-"), fresh(f"{eid}+")
        vertices.append(mid)
        up_tail = _tail_from_listings(head_listing, between, {})
        lo_tail = _tail_from_listings(between, tail_listing, {})
        edges[lo] = Edge(lo, e.tail, mid, EdgeType.classify(lo_tail))
        edges[up] = Edge(up, mid, e.head, EdgeType.classify(up_tail))
        replaced[eid] = (lo, up)
        return mid, lo, up

    new_squares: dict[str, Square] = {}
    for s in d.squares.values():
        if s.type not in (5, 6, 8, 12):
            continue
        g = s.geometry()
        R, L = g.role("R"), g.role("L")
        rk = g.side_types[R].k
        assert rk is not None
        z = _between_listing(g.listings["UR"], rk)
        (r_e,) = s.sides[R]
        r0, _, _ = split_edge(r_e, z, g.listings["UR"], g.listings[SIDE_ENDS[R][0]])
        if s.type == 6:
            (l_e,) = s.sides[L]
            ll = g.listings["LL"]
            l0, _, _ = split_edge(l_e, ll, g.listings[SIDE_ENDS[L][1]], ll)
            start, start_listing = l0, ll
        else:
            start, start_listing = edges[s.sides[g.role("D")][0]].tail, g.listings["LL"]
        diag = fresh(f"{s.id}:C")
        edges[diag] = Edge(diag, start, r0, EdgeType.classify(_tail_from_listings(z, start_listing, {})))
        lower = fresh(f"{s.id}:lower")
        new_squares[s.id] = replace(s, split=Split(diag, lower))
    out_squares = {}
    for sid, s in d.squares.items():
        s = new_squares.get(sid, s)
        sides = {r: tuple(x for e in p for x in replaced.get(e, (e,))) for r, p in s.sides.items()}
        out_squares[sid] = replace(s, sides=sides)
    return Decomposition(tuple(vertices), edges, out_squares)


# ---------------------------------------------------------------- sheets and Maslov potential

Node = tuple[str, int]


@dataclass(frozen=True)
class SheetAtlas:
    regions: Mapping[str, tuple[Node, ...]]
    region_of: Mapping[Node, str]

    def __len__(self) -> int:
        return len(self.regions)


class _UF:
    def __init__(self) -> None:
        self.parent: dict[Any, Any] = {}

    def add(self, x: Any) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: Any) -> Any:
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: Any, b: Any) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _face_links(f: FaceCell) -> Iterable[tuple[str, TailMap]]:
    for pm in f.path_maps:
        yield from pm
    for iv in f.inner_vertices:
        yield from iv
    for mp in f.path_v0:
        yield f.v0, mp


def global_sheets(d: Decomposition, model: Optional[CellModel] = None) -> SheetAtlas:
    """Union-find closure of the sheet identifications along all incidences."""
    if model is None:
        model = cell_model(d)
    uf = _UF()
    for v, n in model.vertices.items():
        for i in range(1, n + 1):
            uf.add((v, i))
    for e in model.edges.values():
        for p in range(1, e.n + 1):
            uf.union((e.id, p), (e.head, p))
            t = e.tail_map[p - 1]
            if t is not None:
                uf.union((e.id, p), (e.tail, t))
    for f in model.faces.values():
        for i in range(1, f.n + 1):
            uf.add((f.id, i))
        ident = tuple(range(1, f.n + 1))
        for cell, mp in list(_face_links(f)) + [(f.v1, ident)]:
            for i, x in enumerate(mp, 1):
                if x is not None:
                    uf.union((f.id, i), (cell, x))
    groups: dict[Node, list[Node]] = defaultdict(list)
    for node in list(uf.parent):
        groups[uf.find(node)].append(node)
    regions: dict[str, tuple[Node, ...]] = {}
    region_of: dict[Node, str] = {}
    for root, nodes in groups.items():
        nodes.sort()
        name = f"{nodes[0][0]}#{nodes[0][1]}"
        regions[name] = tuple(nodes)
        for x in nodes:
            region_of[x] = name
    return SheetAtlas(dict(sorted(regions.items())), region_of)


@dataclass(frozen=True)
class MaslovData:
    m: int
    mu: Mapping[str, int]
    constraints: tuple[tuple[str, str, int], ...] = ()

    def reduce(self, x: int) -> int:
        return x % self.m if self.m > 0 else x


def _constraints(model: CellModel, atlas: SheetAtlas) -> list[tuple[str, str, int]]:
    """(upper region, lower region, mu(upper) - mu(lower)) for every constant entry."""
    R = atlas.region_of
    out = []
    for e in model.edges.values():
        for p, q in e.tail_consts:
            out.append((R[(e.id, p)], R[(e.id, q)], 1))
        for p, q in e.b_consts:
            out.append((R[(e.id, p)], R[(e.id, q)], 0))
    for f in model.faces.values():
        for i, j in f.v0_consts:
            out.append((R[(f.id, i)], R[(f.id, j)], 1))
    return out


def maslov(d: Decomposition, atlas: Optional[SheetAtlas] = None, model: Optional[CellModel] = None,
           base_mu: Optional[Mapping[str, int]] = None) -> MaslovData:
    """Maslov number and a potential: mu jumps by one across each cusp."""
    if model is None:
        model = cell_model(d)
    if atlas is None:
        atlas = global_sheets(d, model)
    cons = _constraints(model, atlas)
    adj: dict[str, list[tuple[str, int]]] = defaultdict(list)
    for u, v, w in cons:
        adj[u].append((v, -w))
        adj[v].append((u, w))
    pot: dict[str, int] = {}
    comp: dict[str, str] = {}
    base_mu = dict(base_mu or {})
    unknown = set(base_mu) - set(atlas.regions)
    if unknown:
        raise KeyError(f"unknown region(s) {sorted(unknown)}")
    for root in atlas.regions:
        if root in pot:
            continue
        pot[root] = 0
        comp[root] = root
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, w in adj[x]:
                # mu(y) = mu(x) + w
                if y not in pot:
                    pot[y] = pot[x] + w
                    comp[y] = root
                    queue.append(y)
    g = 0
    for u, v, w in cons:
        g = math.gcd(g, abs(pot[u] - pot[v] - w))
    shift: dict[str, int] = {}
    for region, value in base_mu.items():
        c = comp[region]
        s = value - pot[region]
        if c in shift and (shift[c] - s if g == 0 else (shift[c] - s) % g) != 0:
            raise ValueError(f"conflicting base values for the component of {region}")
        shift[c] = s
    mu = {}
    for r in atlas.regions:
        val = pot[r] + shift.get(comp[r], 0)
        mu[r] = val % g if g > 0 else val
    return MaslovData(g, mu, tuple(cons))
