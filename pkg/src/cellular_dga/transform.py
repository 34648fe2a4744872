"""Stable tame moves on DGAs and chain-map verification."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .cellcomplex import Decomposition, cell_model
from .dgabuild import BuildError, Dga, MissingDecoration, build_dga, gen_id, st_pairs
from .freealg import Generator, Polynomial, derive, substitute, word_degree

__all__ = [
    "DgaMorphism",
    "CancelPair",
    "TransformError",
    "BadPair",
    "BadPairAt",
    "DegreeMismatch",
    "SelfReference",
    "InhomogeneousDifferential",
    "stabilize",
    "cancel",
    "make_pair",
    "valid_pairs",
    "elementary_iso",
    "swallowtail_phi",
    "verify_chain_map",
    "cancel_pipeline",
    "load_pipeline",
    "identity_morphism",
    "parallel_cancellations",
]


class TransformError(Exception):
    pass


class BadPair(TransformError, ValueError):
    pass


class BadPairAt(TransformError):
    def __init__(self, index: int, reason: str):
        self.index = index
        super().__init__(f"pair {index}: {reason}")


class DegreeMismatch(TransformError, ValueError):
    pass


class SelfReference(TransformError, ValueError):
    pass


class InhomogeneousDifferential(TransformError, ValueError):
    pass


@dataclass
class DgaMorphism:
    source: Dga
    target: Dga
    gen_images: dict[str, Polynomial]

    def __call__(self, p: Polynomial) -> Polynomial:
        return substitute(self.gen_images, p)

    def to_json(self) -> dict[str, str]:
        return {g: self.gen_images[g].render() for g in sorted(self.gen_images)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class CancelPair:
    x: Generator
    y: Generator
    v: Polynomial


def identity_morphism(dga: Dga) -> DgaMorphism:
    return DgaMorphism(dga, dga, {g: Polynomial.gen(g) for g in dga.generators})


def _check_homogeneous(dga: Dga, gid: str, p: Polynomial) -> None:
    g = dga.grading
    want = dga.reduce(dga.degree(gid) - 1)
    for w in p.terms:
        if word_degree(w, g) != want:
            raise InhomogeneousDifferential(f"d({gid}) has term {'·'.join(w) or '1'} of the wrong degree")


def _fresh_aux(dga: Dga) -> tuple[str, str]:
    i = 0
    while f"aux[{i}]" in dga.generators or f"aux[{i + 1}]" in dga.generators:
        i += 2
    return f"aux[{i}]", f"aux[{i + 1}]"


def stabilize(dga: Dga, deg: int) -> Dga:
    """Add a fresh pair x, y with |x| = deg, |y| = deg - 1 and dx = y."""
    xid, yid = _fresh_aux(dga)
    out = dga.copy()
    out.generators[xid] = Generator(xid, "aux", "aux", (0, 1), dga.reduce(deg))
    out.generators[yid] = Generator(yid, "aux", "aux", (1, 0), dga.reduce(deg - 1))
    out.diff[xid] = Polynomial.gen(yid)
    out.diff[yid] = Polynomial.zero()
    return out


def make_pair(dga: Dga, xid: str, yid: str) -> CancelPair:
    """Split dx = y + v, checking the cancellation preconditions."""
    if xid not in dga.generators or yid not in dga.generators:
        raise BadPair(f"unknown generator in ({xid}, {yid})")
    if xid == yid:
        raise BadPair("x and y must differ")
    dx = dga.diff[xid]
    if (yid,) not in dx.terms:
        raise BadPair(f"d({xid}) has no single-letter term {yid}")
    v = dx + Polynomial.gen(yid)
    if xid in v.generators() or yid in v.generators():
        raise BadPair(f"d({xid}) - {yid} still involves {xid} or {yid}")
    if dga.degree(xid) != dga.reduce(dga.degree(yid) + 1):
        raise BadPair(f"|{xid}| must be |{yid}| + 1")
    return CancelPair(dga.generators[xid], dga.generators[yid], v)


def cancel(dga: Dga, pair: CancelPair) -> Dga:
    """Quotient by x and dx: drop x, y and substitute x -> 0, y -> v."""
    x, y = pair.x.id, pair.y.id
    check = make_pair(dga, x, y)
    if check.v != pair.v:
        raise BadPair("pair.v does not match the current differential")
    h = {g: Polynomial.gen(g) for g in dga.generators}
    h[x] = Polynomial.zero()
    h[y] = pair.v
    gens = {g: dga.generators[g] for g in dga.generators if g not in (x, y)}
    diff = {g: substitute(h, dga.diff[g]) for g in gens}
    return Dga(gens, dga.m, diff)


def valid_pairs(dga: Dga) -> list[CancelPair]:
    """Every (x, y) that may currently be cancelled, in lexicographic order."""
    out = []
    for xid in sorted(dga.diff):
        for w in sorted(dga.diff[xid].terms):
            if len(w) == 1:
                try:
                    out.append(make_pair(dga, xid, w[0]))
                except BadPair:
                    pass
    return out


def cancel_pipeline(dga: Dga, pairs: Sequence[tuple[str, str] | CancelPair]) -> Dga:
    for i, p in enumerate(pairs):
        xid, yid = (p.x.id, p.y.id) if isinstance(p, CancelPair) else p
        try:
            dga = cancel(dga, make_pair(dga, xid, yid))
        except BadPair as exc:
            raise BadPairAt(i, str(exc)) from None
    return dga


def load_pipeline(text: str) -> list[tuple[str, str]]:
    doc = json.loads(text)
    if not isinstance(doc, list):
        raise ValueError("pipeline must be a JSON list")
    out = []
    for rec in doc:
        if not isinstance(rec, dict) or set(rec) != {"x", "y"}:
            raise ValueError("pipeline entries must be objects with exactly x and y")
        out.append((str(rec["x"]), str(rec["y"])))
    return out


def elementary_iso(dga: Dga, g: str, v: Polynomial) -> tuple[Dga, DgaMorphism]:
    """Conjugate the differential by the automorphism g -> g + v."""
    if g not in dga.generators:
        raise KeyError(g)
    if g in v.generators():
        raise SelfReference(f"{g} occurs in its own image")
    grading = dga.grading
    for w in v.terms:
        if word_degree(w, grading) != dga.degree(g):
            raise DegreeMismatch(f"term {'·'.join(w) or '1'} does not have degree |{g}|")
    phi = {x: Polynomial.gen(x) for x in dga.generators}
    phi[g] = Polynomial.gen(g) + v
    # phi is an involution, so phi^-1 d phi = phi d phi
    diff = {x: substitute(phi, derive(dga.diff, phi[x])) for x in dga.generators}
    new = Dga(dict(dga.generators), dga.m, diff)
    for x, p in diff.items():
        _check_homogeneous(new, x, p)
    return new, DgaMorphism(dga, new, phi)


def verify_chain_map(phi: DgaMorphism) -> list[tuple[str, Polynomial]]:
    """Source generators where phi(d1 g) differs from d2(phi g), with the difference."""
    out = []
    src, tgt = phi.source, phi.target
    for g in sorted(src.generators):
        lhs = substitute(phi.gen_images, src.diff[g])
        rhs = derive(tgt.diff, phi.gen_images[g])
        if lhs != rhs:
            out.append((g, lhs + rhs))
    return out


def swallowtail_phi(d: Decomposition, *, corrupt: bool = False) -> DgaMorphism:
    """The map from the swallowtail DGA to its decorated presentation.

    On the shared T-edge with constant pair (p, q), B0 -> B0 (I + E_{p,q}),
    so b0[i, q] -> b0[i, q] + b0[i, p].  Every other generator is fixed.
    ``corrupt`` drops the E factor; the result is then not a chain map.
    """
    model = cell_model(d)
    pairs = st_pairs(model)
    if not pairs:
        raise MissingDecoration("no swallowtail square shares its T-edge with a second square")
    source = build_dga(d, model=model)
    target = build_dga(d, decorated=True, model=model)
    if source.m != target.m:
        raise BuildError("gradings disagree")
    images = {g: Polynomial.gen(g) for g in source.generators}
    if not corrupt:
        for _, _, eid in pairs:
            e = model.edges[eid]
            ((p, q),) = e.b_consts
            for i in range(1, p):
                src = gen_id("b", eid, i, q)
                extra = gen_id("b", eid, i, p)
                if src in images and extra in source.generators:
                    images[src] = images[src] + Polynomial.gen(extra)
    return DgaMorphism(source, target, images)


def _span_key(g: Generator) -> tuple[int, int, int]:
    i, j = g.sheets
    return (j - i, i, j)


def _single_letters(p: Polynomial, prefix: str) -> list[str]:
    return sorted(w[0] for w in p.terms if len(w) == 1 and w[0].startswith(prefix))


def parallel_cancellations(dga: Dga, d: Decomposition, sid: str, *,
                           widest_first: bool = False) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    """Cancellation orders that collapse a subdivided square back to a single cell.

    The first list removes the lower halves of the split sides against
    their split vertices, narrowest pairs first (``widest_first`` reverses
    this); a pair with no partner at the split vertex goes first, against its
    tail-vertex term.  The second removes the lower face against the diagonal,
    narrowest first; a pair with no diagonal partner goes first, against the
    D side.

    Narrowest first makes every step eliminate y in favour of a single
    surviving generator or 0.  Both orders reach the same quotient.
    """
    s = d.squares[sid]
    if s.split is None:
        raise BadPair(f"square {sid} is not subdivided")
    g = s.geometry()
    diag = d.edges[s.split.diagonal]
    lows: list[str] = []
    for role, split_at in (("R", diag.head), ("L", diag.tail)):
        path = s.sides[g.role(role)]
        cut = next((i for i, e in enumerate(path) if d.edges[e].head == split_at), None)
        if cut is not None:
            lows.extend(path[:cut + 1])
    gens = dga.generators
    first: list[tuple[str, str]] = []
    rest: list[tuple[str, str]] = []
    for eid in lows:
        bs = sorted((x for x in gens.values() if x.cell == eid and x.kind == "b"), key=_span_key, reverse=True)
        for x in bs:
            partner = gen_id("a", d.edges[eid].head, *x.sheets)
            if partner in gens:
                rest.append((x.id, partner))
            else:
                tail = d.edges[eid].tail
                cands = _single_letters(dga.diff[x.id], f"a[{tail};")
                if len(cands) != 1:
                    raise BadPair(f"no unique tail partner for {x.id}")
                first.append((x.id, cands[0]))
    sign = -1 if widest_first else 1
    rest.sort(key=lambda p: (sign * _span_key(gens[p[0]])[0], _span_key(gens[p[0]])[1:]))
    c1 = first + rest
    first2: list[tuple[str, str]] = []
    rest2: list[tuple[str, str]] = []
    dside = s.sides[g.role("D")]
    for x in sorted((x for x in gens.values() if x.cell == s.split.lower and x.kind == "c"), key=_span_key):
        partner = gen_id("b", diag.id, *x.sheets)
        if partner in gens:
            rest2.append((x.id, partner))
        else:
            cands = sorted({y for e in dside for y in _single_letters(dga.diff[x.id], f"b[{e};")})
            if len(cands) != 1:
                raise BadPair(f"no unique D-side partner for {x.id}")
            first2.append((x.id, cands[0]))
    return c1, first2 + rest2
