"""Generators, gradings and the matrix differential of the cellular DGA."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .cellcomplex import (
    CellModel,
    Decomposition,
    DecompositionError,
    FaceCell,
    MaslovData,
    SheetAtlas,
    TailMap,
    ValidationFailed,
    cell_model,
    global_sheets,
    maslov,
    validate,
)
from .freealg import GenMatrix, Generator, Grading, Polynomial, derive, word_degree

__all__ = [
    "Dga",
    "CellMatrices",
    "BuildError",
    "MissingDecoration",
    "UngradedRegion",
    "gen_id",
    "gradings",
    "enumerate_generators",
    "assemble_vertex",
    "assemble_edge",
    "assemble_square",
    "assemble_swallowtail",
    "assemble_subdivided",
    "build_dga",
    "d_squared",
    "st_pairs",
]

ZERO = Polynomial.zero()
ONE = Polynomial.one()
KIND_OF_DIM = {0: "a", 1: "b", 2: "c"}


class BuildError(DecompositionError):
    pass


class MissingDecoration(BuildError):
    pass


class UngradedRegion(BuildError, KeyError):
    pass


def gen_id(kind: str, cell: str, i: int, j: int) -> str:
    return f"{kind}[{cell};{i},{j}]"


@dataclass
class Dga:
    generators: dict[str, Generator]
    m: int
    diff: dict[str, Polynomial]
    d2_failures: list[tuple[str, Polynomial]] = field(default_factory=list)

    @property
    def grading(self) -> Grading:
        return Grading(self.m, {g.id: g.degree for g in self.generators.values()})

    @property
    def provenance(self) -> dict[str, str]:
        return {g.id: g.cell for g in self.generators.values()}

    def degree(self, gid: str) -> int:
        d = self.generators[gid].degree
        return d % self.m if self.m > 0 else d

    def reduce(self, x: int) -> int:
        return x % self.m if self.m > 0 else x

    def ordered(self) -> list[Generator]:
        return sorted(self.generators.values(), key=lambda g: (g.cell, g.kind, g.sheets[0], g.sheets[1], g.id))

    def to_json(self) -> dict[str, Any]:
        gens = self.ordered()
        return {
            "m": self.m,
            "generators": [{"id": g.id, "cell": g.cell, "kind": g.kind, "sheets": list(g.sheets),
                            "degree": self.degree(g.id)} for g in gens],
            "diff": {g.id: self.diff[g.id].render() for g in gens},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> "Dga":
        gens = {}
        for rec in doc["generators"]:
            gens[rec["id"]] = Generator(rec["id"], rec["cell"], rec["kind"], tuple(rec["sheets"]), rec["degree"])
        diff = {k: Polynomial.parse(v) for k, v in doc["diff"].items()}
        if set(diff) != set(gens):
            raise BuildError("diff must be defined exactly on the generators")
        return cls(gens, int(doc["m"]), diff)

    def copy(self) -> "Dga":
        return Dga(dict(self.generators), self.m, dict(self.diff))


@dataclass(frozen=True)
class CellMatrices:
    cell: str
    matrices: Mapping[str, GenMatrix]
    rows: Mapping[str, Polynomial]


# ---------------------------------------------------------------- gradings

def gradings(d: Decomposition, md: Optional[MaslovData] = None, model: Optional[CellModel] = None,
             atlas: Optional[SheetAtlas] = None) -> Grading:
    """Degrees of every potential generator from the Maslov potential."""
    model = model or cell_model(d)
    atlas = atlas or global_sheets(d, model)
    md = md or maslov(d, atlas, model)
    deg: dict[str, int] = {}
    shift = {0: -1, 1: 0, 2: 1}
    for cell, n in _all_cells(model):
        dim = model.dimension(cell)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                try:
                    ri, rj = atlas.region_of[(cell, i)], atlas.region_of[(cell, j)]
                except KeyError as exc:
                    raise UngradedRegion(str(exc)) from None
                deg[gen_id(KIND_OF_DIM[dim], cell, i, j)] = md.reduce(md.mu[ri] - md.mu[rj] + shift[dim])
    return Grading(md.m, deg)


def _all_cells(model: CellModel) -> list[tuple[str, int]]:
    out = [(v, n) for v, n in model.vertices.items()]
    out += [(e.id, e.n) for e in model.edges.values()]
    out += [(f.id, f.n) for f in model.faces.values()]
    return out


def _generators(model: CellModel, grading: Grading) -> dict[str, Generator]:
    gens: dict[str, Generator] = {}
    for cell, n in _all_cells(model):
        kind = KIND_OF_DIM[model.dimension(cell)]
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if model.killed(cell, i, j):
                    continue
                gid = gen_id(kind, cell, i, j)
                gens[gid] = Generator(gid, cell, kind, (i, j), grading.of(gid))
    return gens


def enumerate_generators(d: Decomposition) -> list[Generator]:
    model = cell_model(d)
    gens = _generators(model, gradings(d, model=model))
    return sorted(gens.values(), key=lambda g: (g.cell, g.kind, g.sheets))


# ---------------------------------------------------------------- matrices

def _own_entry(model: CellModel, cell: str, kind: str, p: int, q: int) -> Polynomial:
    if model.killed(cell, p, q):
        return ZERO
    return Polynomial.gen(gen_id(kind, cell, p, q))


def _own_matrix(model: CellModel, cell: str, kind: str, n: int) -> GenMatrix:
    return GenMatrix.build(n, lambda i, j: _own_entry(model, cell, kind, i, j) if i < j else ZERO)


def _view(model: CellModel, n: int, cell: str, kind: str, mp: TailMap,
          consts: Sequence[tuple[int, int]] = (), b_consts: frozenset = frozenset()) -> GenMatrix:
    """A cell's matrix seen in another cell's labels through ``mp``."""
    cset = set(consts)

    def entry(i: int, j: int) -> Polynomial:
        if i >= j:
            return ZERO
        if (i, j) in cset:
            return ONE
        p, q = mp[i - 1], mp[j - 1]
        if p is None or q is None or p > q:
            return ZERO
        if (p, q) in b_consts:
            return ONE
        return _own_entry(model, cell, kind, p, q)

    return GenMatrix.build(n, entry)


def _E(n: int, i: int, j: int) -> GenMatrix:
    return GenMatrix.elementary(n, i, j)


def _rows(model: CellModel, cell: str, kind: str, n: int, M: GenMatrix) -> dict[str, Polynomial]:
    out = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if not model.killed(cell, i, j):
                out[gen_id(kind, cell, i, j)] = M[i, j]
    return out


def assemble_vertex(model: CellModel, v: str) -> CellMatrices:
    """dA = A^2."""
    n = model.vertices[v]
    A = _own_matrix(model, v, "a", n)
    return CellMatrices(v, {"A": A}, _rows(model, v, "a", n, A * A))


def _t_edge_data(model: CellModel, eid: str) -> Optional[tuple[int, int]]:
    bc = model.edges[eid].b_consts
    if not bc:
        return None
    (pair,) = bc
    return pair


def assemble_edge(model: CellModel, eid: str, decorated: bool = False) -> CellMatrices:
    """dB = A+(I+B) + (I+B)A-, with A- read through the tail map."""
    e = model.edges[eid]
    n = e.n
    I = GenMatrix.identity(n)
    ident = tuple(range(1, n + 1))
    hide = decorated and bool(e.b_consts)
    B = _view(model, n, eid, "b", ident, b_consts=frozenset() if hide else e.b_consts)
    Ap = _view(model, n, e.head, "a", ident)
    Am = _view(model, n, e.tail, "a", e.tail_map, consts=e.tail_consts)
    if hide:
        p, q = _t_edge_data(model, eid)  # type: ignore[misc]
        T = I + _E(n, p, q)
        dB = Ap * (I + B) + (I + B) * T * Am * T
    else:
        dB = Ap * (I + B) + (I + B) * Am
    return CellMatrices(eid, {"B": B, "A+": Ap, "A-": Am}, _rows(model, eid, "b", n, dB))


def _face_formula(model: CellModel, f: FaceCell, decorated: bool = False,
                  t_edges: Mapping[str, str] = {}) -> CellMatrices:
    n = f.n
    I = GenMatrix.identity(n)
    ident = tuple(range(1, n + 1))
    C = _own_matrix(model, f.id, "c", n)
    App = _view(model, n, f.v1, "a", ident)
    Amm = _view(model, n, f.v0, "a", f.v0_map, consts=f.v0_consts)
    mats: dict[str, GenMatrix] = {"C": C, "A++": App, "A--": Amm}
    K = I
    X = I
    M = I
    if f.formula == "st13":
        k = f.param
        assert k is not None
        K = I + _E(n, k + 2, k + 1)
        X = I + Amm * _E(n, k + 1, k) + _E(n, k + 1, k + 2)
        M = I + _E(n, k + 2, k + 1)
        if decorated:
            M = I
    elif f.formula == "st14":
        l = f.param
        assert l is not None
        K = I + _E(n, l - 1, l - 2)
        X = I + _E(n, l, l - 1) * Amm + _E(n, l - 2, l - 1)
        M = I + _E(n, l - 1, l - 2)
        if decorated:
            raise MissingDecoration("decorated presentation is only defined for upward swallowtails")
    dC = App * C + C * K * Amm * K
    for pi, pm in enumerate(f.path_maps):
        prod = I
        for idx in range(len(pm) - 1, -1, -1):
            eid, mp = pm[idx]
            e = model.edges[eid]
            hidden = f.formula != "std" or (decorated and eid in t_edges)
            Bv = _view(model, n, eid, "b", mp, b_consts=frozenset() if hidden else e.b_consts)
            mats[f"B[{eid}]"] = Bv
            if f.m_path == pi and idx == 0:
                Bv = Bv * M
            prod = prod * (I + Bv)
        if f.x_path == pi:
            prod = prod * X
        if decorated and f.formula == "std":
            for eid, mp in pm:
                if eid in t_edges:
                    p, q = _t_edge_data(model, eid)  # type: ignore[misc]
                    i, j = mp.index(p) + 1, mp.index(q) + 1
                    prod = prod * (I + _E(n, i, j))
        dC = dC + prod
    return CellMatrices(f.id, mats, _rows(model, f.id, "c", n, dC))


def assemble_square(model: CellModel, fid: str) -> CellMatrices:
    """dC = A++ C + C A-- + (I+B_U)(I+B_L) + (I+B_R)(I+B_D)."""
    f = model.faces[fid]
    if f.formula != "std":
        raise BuildError(f"{fid} is a swallowtail square")
    return _face_formula(model, f)


def assemble_swallowtail(model: CellModel, fid: str) -> CellMatrices:
    f = model.faces[fid]
    if f.formula not in ("st13", "st14"):
        raise BuildError(f"{fid} is not a swallowtail square")
    return _face_formula(model, f)


def st_pairs(model: CellModel) -> list[tuple[str, str, str]]:
    """(swallowtail face, T face, T edge) for every T-edge bordering a second square."""
    out = []
    for f in model.faces.values():
        if f.formula not in ("st13", "st14"):
            continue
        for pm in f.path_maps:
            for eid, _ in pm:
                if not model.edges[eid].b_consts:
                    continue
                for g in model.faces.values():
                    if g.id != f.id and any(eid == x for p in g.path_maps for x, _ in p):
                        out.append((f.id, g.id, eid))
    return sorted(set(out))


def assemble_subdivided(model: CellModel, fid: str, decorated: bool = False) -> CellMatrices:
    """Differential of a face whose sides may contain several 1-cells.

    With ``decorated`` set, faces and edges carrying a swallowtail S/T
    decoration use the presentation without the T-edge constant.
    """
    f = model.faces[fid]
    t_edges = _t_edges(model) if decorated else {}
    if decorated and f.formula == "std" and not any(eid in t_edges for p in f.path_maps for eid, _ in p):
        decorated = False
    return _face_formula(model, f, decorated, t_edges)


def _t_edges(model: CellModel) -> dict[str, str]:
    pairs = st_pairs(model)
    out = {}
    for _, t, eid in pairs:
        out[eid] = t
    for eid, e in model.edges.items():
        if e.b_consts and eid not in out:
            raise MissingDecoration(f"T-edge {eid} has no T square")
    return out


# ---------------------------------------------------------------- whole DGA

def build_dga(d: Decomposition, *, decorated: bool = False, m_override: Optional[int] = None,
              base_mu: Optional[Mapping[str, int]] = None, check: bool = True,
              model: Optional[CellModel] = None) -> Dga:
    """Assemble the cellular DGA of a decomposition."""
    if model is None:
        if check:
            bad = validate(d)
            if bad:
                raise ValidationFailed(bad)
        model = cell_model(d)
    atlas = global_sheets(d, model)
    md = maslov(d, atlas, model, base_mu=base_mu)
    if m_override is not None:
        if m_override < 0 or (m_override == 0 and md.m != 0) or (m_override > 0 and md.m % m_override):
            raise BuildError(f"grading modulus {m_override} is not compatible with the Maslov number {md.m}")
        md = MaslovData(m_override, {r: (v % m_override if m_override else v) for r, v in md.mu.items()},
                        md.constraints)
    grading = gradings(d, md, model, atlas)
    gens = _generators(model, grading)
    diff: dict[str, Polynomial] = {}
    t_edges = _t_edges(model) if decorated else {}
    for v in model.vertices:
        diff.update(assemble_vertex(model, v).rows)
    for eid in model.edges:
        diff.update(assemble_edge(model, eid, decorated=decorated and eid in t_edges).rows)
    for fid, f in model.faces.items():
        if decorated:
            diff.update(assemble_subdivided(model, fid, decorated=True).rows)
        else:
            diff.update(_face_formula(model, f).rows)
    missing = set(gens) - set(diff)
    if missing:
        raise BuildError(f"no differential for {sorted(missing)[:3]}")
    dga = Dga(gens, md.m, {g: diff[g] for g in gens})
    dga.d2_failures = d_squared(dga)
    return dga


def d_squared(dga: Dga) -> list[tuple[str, Polynomial]]:
    """Generators whose differential does not square to zero, with the residue."""
    out = []
    for gid in sorted(dga.diff):
        r = derive(dga.diff, dga.diff[gid])
        if r:
            out.append((gid, r))
    return out


def degree_defects(dga: Dga) -> list[tuple[str, str]]:
    """Terms of a differential whose degree is not one less than the generator's."""
    g = dga.grading
    out = []
    for gid, p in dga.diff.items():
        want = g.reduce(dga.degree(gid) - 1)
        for w in p.terms:
            if word_degree(w, g) != want:
                out.append((gid, "·".join(w) if w else "1"))
    return out
