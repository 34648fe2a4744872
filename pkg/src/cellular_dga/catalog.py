"""Built-in example decompositions."""

from __future__ import annotations

import itertools
from typing import Callable, Iterator, Optional

from .cellcomplex import (
    SIDE_ENDS,
    SIDES,
    Decomposition,
    Edge,
    EdgeType,
    Square,
    square_geometry,
)

__all__ = ["single_square", "square_params", "names", "get", "entries", "UnknownEntry"]


class UnknownEntry(KeyError):
    pass


def square_params(tag: int, n: int) -> list[tuple[Optional[int], Optional[int]]]:
    """Every valid (k, l) for a square type with n sheets at the upper right."""
    r = range(1, n + 1)
    if tag == 1:
        return [(None, None)]
    if tag in (2, 3, 4, 9):
        return [(k, None) for k in r if k <= n - 1]
    if tag in (5, 6, 8, 12, 13):
        return [(k, None) for k in r if k <= n - 2]
    if tag in (7, 11):
        return [(k, l) for k, l in itertools.product(r, r) if k + 1 < l <= n - 1]
    if tag == 10:
        return [(k, l) for k, l in itertools.product(r, r) if k <= n - 1 and l <= n - 1 and abs(k - l) >= 2]
    return [(None, l) for l in r if l >= 3]


def _square_name(tag: int, n: int, k: Optional[int], l: Optional[int], reflected: bool) -> str:
    name = f"square-{tag}-n{n}"
    if k is not None:
        name += f"-k{k}"
    if l is not None:
        name += f"-l{l}"
    return name + ("-r" if reflected else "")


def single_square(tag: int, n: int, k: Optional[int] = None, l: Optional[int] = None,
                  reflected: bool = False, sid: str = "sq") -> Decomposition:
    """One elementary square with its four sides and corners."""
    g = square_geometry(tag, n, k, l, reflected)
    corner = {c: f"{sid}.{c}" for c in ("LL", "UL", "LR", "UR")}
    edges = {}
    for role in SIDES:
        tail, head = SIDE_ENDS[role]
        eid = f"{sid}.{role}"
        edges[eid] = Edge(eid, corner[tail], corner[head], g.side_types[role])
    sq = Square(sid, tag, n, k, l, reflected, {r: (f"{sid}.{r}",) for r in SIDES})
    return Decomposition(tuple(corner[c] for c in ("LL", "UL", "LR", "UR")), edges, {sid: sq})


def _pv(eid: str, tail: str, head: str, n: int) -> Edge:
    return Edge(eid, tail, head, EdgeType("PV", n))


def torus_grid(size: int = 3, n: int = 2) -> Decomposition:
    """A size x size grid of Type 1 squares with opposite sides identified."""
    V = [f"v{i}{j}" for i in range(size) for j in range(size)]
    edges = {}
    squares = {}
    for i in range(size):
        for j in range(size):
            a, b, c = f"v{i}{j}", f"v{(i + 1) % size}{j}", f"v{i}{(j + 1) % size}"
            edges[f"h{i}{j}"] = _pv(f"h{i}{j}", a, b, n)
            edges[f"u{i}{j}"] = _pv(f"u{i}{j}", a, c, n)
    for i in range(size):
        for j in range(size):
            sides = {"D": (f"h{i}{j}",), "L": (f"u{i}{j}",), "R": (f"u{(i + 1) % size}{j}",),
                     "U": (f"h{i}{(j + 1) % size}",)}
            squares[f"s{i}{j}"] = Square(f"s{i}{j}", 1, n, None, None, False, sides)
    return Decomposition(tuple(V), edges, squares)


def sphere_cube(n: int = 2) -> Decomposition:
    """The surface of a cube, each face a Type 1 square.

    Vertices are 0/1 triples; edges point towards the coordinate that flips
    from 0 to 1, so every face has its lower-left corner at the minimum.
    """
    verts = ["".join(map(str, p)) for p in itertools.product((0, 1), repeat=3)]
    edges = {}
    for v in verts:
        for axis in range(3):
            if v[axis] == "0":
                w = v[:axis] + "1" + v[axis + 1:]
                eid = f"e{v}-{w}"
                edges[eid] = _pv(eid, f"p{v}", f"p{w}", n)
    squares = {}
    for axis in range(3):
        for val in "01":
            a1, a2 = [x for x in range(3) if x != axis]

            def pt(x: int, y: int) -> str:
                p = ["0"] * 3
                p[axis], p[a1], p[a2] = val, str(x), str(y)
                return "".join(p)

            def e(u: str, w: str) -> str:
                return f"e{u}-{w}"

            sid = f"f{axis}{val}"
            sides = {"D": (e(pt(0, 0), pt(1, 0)),), "L": (e(pt(0, 0), pt(0, 1)),),
                     "R": (e(pt(1, 0), pt(1, 1)),), "U": (e(pt(0, 1), pt(1, 1)),)}
            squares[sid] = Square(sid, 1, n, None, None, False, sides)
    return Decomposition(tuple(f"p{v}" for v in verts), edges, squares)


def _glued(base: Decomposition, tag: int, n: int, k: Optional[int], sid: str,
           shared: dict[str, str]) -> Decomposition:
    """Add a square whose sides in ``shared`` are existing edges."""
    g = square_geometry(tag, n, k)
    corner: dict[str, str] = {}
    for role, eid in shared.items():
        tail, head = SIDE_ENDS[role]
        corner[tail], corner[head] = base.edges[eid].tail, base.edges[eid].head
    verts = list(base.vertices)
    for c in ("LL", "UL", "LR", "UR"):
        if c not in corner:
            corner[c] = f"{sid}.{c}"
            verts.append(corner[c])
    edges = dict(base.edges)
    sides = {}
    for role in SIDES:
        if role in shared:
            sides[role] = (shared[role],)
            continue
        tail, head = SIDE_ENDS[role]
        eid = f"{sid}.{role}"
        edges[eid] = Edge(eid, corner[tail], corner[head], g.side_types[role])
        sides[role] = (eid,)
    squares = dict(base.squares)
    squares[sid] = Square(sid, tag, n, k, None, False, sides)
    return Decomposition(tuple(verts), edges, squares)


def cusp_strip() -> Decomposition:
    """Two Type 9 squares stacked vertically, the cusp edge running through both."""
    return _glued(single_square(9, 2, 1, sid="A"), 9, 2, 1, "B", {"D": "A.U"})


def swallowtail_st(n: int, k: int) -> Decomposition:
    """A Type 13 square S and a Type 9 square T sharing the lower side of S.

    T is turned upside down across the shared edge, so both squares list that
    edge as their D side and share its two corners.
    """
    return _glued(single_square(13, n, k, sid="S"), 9, n, k, "T", {"D": "S.D"})


def crossed_cusps() -> Decomposition:
    """Two cusp squares facing each other across a crossing; Maslov number 2."""
    d = single_square(9, 2, 1, sid="A")
    d = _glued(d, 2, 2, 1, "X", {"L": "A.R"})
    return _glued(d, 9, 2, 1, "B", {"R": "X.R"})


def _registry() -> dict[str, Callable[[], Decomposition]]:
    reg: dict[str, Callable[[], Decomposition]] = {}
    for tag in range(1, 15):
        for n in range(2, 7):
            for k, l in square_params(tag, n):
                for refl in (False, True):
                    reg[_square_name(tag, n, k, l, refl)] = (
                        lambda t=tag, n=n, k=k, l=l, r=refl: single_square(t, n, k, l, r))
    reg["torus-grid-3x3"] = lambda: torus_grid(3, 2)
    reg["sphere-cube"] = lambda: sphere_cube(2)
    reg["cusp-strip-2"] = cusp_strip
    reg["crossed-cusps"] = crossed_cusps
    reg["swallowtail-ST-n3"] = lambda: swallowtail_st(3, 1)
    reg["swallowtail-ST-n4"] = lambda: swallowtail_st(4, 2)
    reg["swallowtail-ST-n5"] = lambda: swallowtail_st(5, 2)
    return reg


_REGISTRY = _registry()


def names() -> list[str]:
    return sorted(_REGISTRY)


def get(name: str) -> Decomposition:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise UnknownEntry(name) from None


def entries() -> Iterator[tuple[str, Decomposition]]:
    for name in names():
        yield name, get(name)
