from __future__ import annotations

from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cellular_dga import catalog
from cellular_dga.cellcomplex import (
    Decomposition,
    Edge,
    EdgeType,
    MalformedSquare,
    ParseError,
    Square,
    ValidationFailed,
    cell_model,
    global_sheets,
    load_decomposition,
    maslov,
    parse_decomposition,
    shift_singular,
    sigma_maps,
    square_geometry,
    to_parallel,
    validate,
)


# ---------------------------------------------------------------- edge types

def test_edge_tail_maps():
    assert EdgeType("PV", 3).tail_map() == (1, 2, 3)
    assert EdgeType("OneCr", 3, 2).tail_map() == (1, 3, 2)
    assert EdgeType("TwoCr", 4, 1).tail_map() == (2, 3, 1, 4)
    assert EdgeType("Cu", 4, 2).tail_map() == (1, None, None, 2)
    assert EdgeType("Cu", 4, 2).tail_n == 2


@pytest.mark.parametrize("args", [("OneCr", 3, 3), ("TwoCr", 3, 2), ("Cu", 2, 0), ("PV", 2, 1), ("Bogus", 2, None)])
def test_edge_type_rejects_bad_parameters(args):
    with pytest.raises(ParseError):
        EdgeType(*args)


edge_types = st.integers(2, 7).flatmap(lambda n: st.one_of(
    st.just(EdgeType("PV", n)),
    st.integers(1, n - 1).map(lambda k: EdgeType("OneCr", n, k)),
    st.integers(1, n - 1).map(lambda k: EdgeType("Cu", n, k)),
    st.integers(1, max(1, n - 2)).filter(lambda k: k + 2 <= n).map(lambda k: EdgeType("TwoCr", n, k)),
))


@given(edge_types)
def test_classify_inverts_tail_map(t):
    assert EdgeType.classify(t.tail_map()) == t


@given(edge_types)
def test_tail_map_is_injective_onto_tail_labels(t):
    present = [x for x in t.tail_map() if x is not None]
    assert sorted(present) == list(range(1, t.tail_n + 1))


def test_unknown_map_classifies_as_perm():
    t = EdgeType.classify((3, 1, 2))
    assert t.tag == "Perm" and t.tail_map() == (3, 1, 2)


# ---------------------------------------------------------------- square tables

def test_square_side_types_n3():
    def types(tag, n, k=None, l=None):
        g = square_geometry(tag, n, k, l)
        return {s: str(g.side_types[s]) for s in "LDRU"}

    assert types(1, 3) == dict.fromkeys("LDRU", "PV[n=3]")
    assert types(3, 3, 1) == {"L": "OneCr(1)[n=3]", "D": "OneCr(1)[n=3]", "R": "PV[n=3]", "U": "PV[n=3]"}
    assert types(8, 3, 1) == {"L": "TwoCr(1)[n=3]", "D": "OneCr(2)[n=3]", "R": "TwoCr(1)[n=3]",
                              "U": "OneCr(1)[n=3]"}
    assert types(9, 3, 1) == {"L": "PV[n=1]", "D": "Cu(1)[n=3]", "R": "PV[n=3]", "U": "Cu(1)[n=3]"}
    assert types(13, 3, 1) == {"L": "PV[n=1]", "D": "Cu(1)[n=3]", "R": "OneCr(2)[n=3]", "U": "Cu(1)[n=3]"}
    assert types(14, 3, None, 3) == {"L": "PV[n=1]", "D": "Cu(2)[n=3]", "R": "OneCr(1)[n=3]",
                                     "U": "Cu(2)[n=3]"}


def test_arc_landings():
    def arcs(tag, n, k=None, l=None):
        return [(a.pair, a.landing) for a in square_geometry(tag, n, k, l).arcs]

    assert arcs(1, 4) == []
    assert arcs(2, 3, 1) == [((1, 2), "L")]
    assert arcs(3, 3, 1) == [((1, 2), "LL")]
    assert arcs(4, 3, 1) == [((1, 2), "D")]
    assert arcs(5, 3, 1) == [((1, 3), "D"), ((2, 3), "D")]
    assert arcs(7, 4, 1, 3) == [((1, 2), "L"), ((3, 4), "D")]
    assert arcs(13, 3, 1) == [((2, 3), "D")]


def test_reflection_swaps_roles():
    g, r = square_geometry(4, 3, 1), square_geometry(4, 3, 1, reflected=True)
    assert r.side_types["L"] == g.side_types["D"] and r.side_types["U"] == g.side_types["R"]
    assert r.listings["UL"] == g.listings["LR"]
    assert [a.landing for a in r.arcs] == ["L"]


@pytest.mark.parametrize("args", [(1, 3, 1, None), (2, 3, 3, None), (5, 3, 2, None), (7, 4, 1, 2),
                                  (10, 4, 1, 2), (14, 3, 1, 3), (14, 3, None, 2), (15, 3, None, None)])
def test_malformed_squares(args):
    with pytest.raises(MalformedSquare):
        square_geometry(*args)


def test_sigma_maps():
    s = sigma_maps(13, 3, 1)
    # sheets 1, 2 vanish above UL, between nothing and sheet 3
    assert s.sigma_L == (1, 1, 2)
    assert s.sigma_D == (2, 6, 4)
    assert str(s.edge_types["R"]) == "OneCr(2)[n=3]"


# ---------------------------------------------------------------- parsing

def test_catalog_roundtrip():
    for name, d in catalog.entries():
        assert load_decomposition(d.dumps()) == d, name


def test_parse_is_strict():
    doc = catalog.get("square-1-n2").to_json()
    doc["extra"] = 1
    with pytest.raises(ParseError):
        parse_decomposition(doc)
    doc = catalog.get("square-1-n2").to_json()
    doc["edges"][0]["type"]["colour"] = "red"
    with pytest.raises(ParseError):
        parse_decomposition(doc)
    doc = catalog.get("square-1-n2").to_json()
    doc["squares"].append(dict(doc["squares"][0]))
    with pytest.raises(ParseError):
        parse_decomposition(doc)
    with pytest.raises(ParseError):
        load_decomposition("{not json")


def test_empty_decomposition():
    d = parse_decomposition({"vertices": [], "edges": [], "squares": []})
    assert validate(d) == []
    assert maslov(d).m == 0


# ---------------------------------------------------------------- validation

def _rules(d):
    return {v.rule for v in validate(d)}


def test_catalog_is_valid():
    for name, d in catalog.entries():
        assert validate(d) == [], name


def test_unknown_vertex_and_edge_type_mismatch():
    d = catalog.get("square-3-n3-k1")
    e = d.edges["sq.L"]
    bad = replace(d, edges={**d.edges, "sq.L": replace(e, tail="nowhere")})
    assert "structure" in _rules(bad)
    bad = replace(d, edges={**d.edges, "sq.L": replace(e, type=EdgeType("PV", 3))})
    assert "edge-type" in _rules(bad)


def test_two_squares_sharing_an_arc_edge_violate_a4():
    d = catalog.single_square(4, 3, 1, sid="A")
    b = Square("B", 4, 3, 1, None, False,
               {"L": ("B.L",), "D": ("A.D",), "R": ("B.R",), "U": ("B.U",)})
    g = square_geometry(4, 3, 1)
    edges = dict(d.edges)
    edges["B.L"] = Edge("B.L", "A.LL", "B.UL", g.side_types["L"])
    edges["B.R"] = Edge("B.R", "A.LR", "B.UR", g.side_types["R"])
    edges["B.U"] = Edge("B.U", "B.UL", "B.UR", g.side_types["U"])
    d2 = Decomposition(d.vertices + ("B.UL", "B.UR"), edges, {**d.squares, "B": b})
    assert "A4" in _rules(d2)


def test_crossings_leaving_one_vertex_violate_a2():
    a = catalog.single_square(4, 3, 1, sid="A")
    b = catalog.single_square(4, 3, 1, sid="B")
    ren = {"B.LL": "A.LL"}
    edges = dict(a.edges)
    for e in b.edges.values():
        edges[e.id] = replace(e, tail=ren.get(e.tail, e.tail), head=ren.get(e.head, e.head))
    d = Decomposition(a.vertices + tuple(v for v in b.vertices if v not in ren), edges,
                      {**a.squares, **b.squares})
    assert "A2" in _rules(d)


def test_type3_squares_sharing_cells():
    a = catalog.single_square(3, 3, 1, sid="A")
    b = catalog.single_square(3, 3, 1, sid="B")
    ren = {"B.UR": "A.UR"}
    edges = dict(a.edges)
    for e in b.edges.values():
        edges[e.id] = replace(e, head=ren.get(e.head, e.head))
    d = Decomposition(a.vertices + ("B.LL", "B.UL", "B.LR"), edges, {**a.squares, **b.squares})
    assert _rules(d) == {"A3"}


def test_closed_type3_crossing_circle():
    a = catalog.single_square(3, 2, 1, sid="A")
    g = square_geometry(3, 2, 1)
    edges = dict(a.edges)
    edges["B.R"] = Edge("B.R", "A.LR", "B.UR", g.side_types["R"])
    edges["B.U"] = Edge("B.U", "A.UL", "B.UR", g.side_types["U"])
    b = Square("B", 3, 2, 1, None, False, {"L": ("A.L",), "D": ("A.D",), "R": ("B.R",), "U": ("B.U",)})
    d = Decomposition(a.vertices + ("B.UR",), edges, {**a.squares, "B": b})
    rules = _rules(d)
    assert "A4" in rules and "A3" in rules


# ---------------------------------------------------------------- cell model

def test_kills_cover_crossings():
    m = cell_model(catalog.get("square-3-n3-k1"))
    assert m.killed("sq.LL", 1, 2)
    assert not m.killed("sq.UR", 1, 2)
    m = cell_model(catalog.get("square-4-n3-k1"))
    assert {(c, p, q) for c, p, q in m.kills} == {("sq.D", 1, 2), ("sq.LL", 1, 2), ("sq.LR", 1, 2)}


def test_swallowtail_t_edge_constant():
    m = cell_model(catalog.get("square-13-n3-k1"))
    assert m.edges["sq.D"].b_consts == frozenset({(2, 3)})
    assert m.faces["sq"].formula == "st13"


def test_shift_singular_reports_every_arc():
    d = catalog.get("square-8-n4-k2")
    arcs = shift_singular(d)["sq"]
    assert len(arcs) == len(square_geometry(8, 4, 2).arcs)
    assert {a.landing_cell for a in arcs} <= {"sq.L", "sq.D"}


# ---------------------------------------------------------------- sheets and Maslov potential

def test_torus_has_two_sheets():
    atlas = global_sheets(catalog.get("torus-grid-3x3"))
    assert len(atlas) == 2


def test_cusp_joins_sheets():
    d = catalog.get("square-9-n3-k1")
    atlas = global_sheets(d)
    # the two cusp sheets stay distinct regions; sheet 3 is a third
    assert len(atlas) == 3
    md = maslov(d, atlas)
    assert md.m == 0
    top, low = atlas.region_of[("sq.UR", 1)], atlas.region_of[("sq.UR", 2)]
    assert md.mu[top] - md.mu[low] == 1


def test_maslov_number_two():
    d = catalog.get("crossed-cusps")
    md = maslov(d)
    assert md.m == 2
    for u, v, w in md.constraints:
        assert (md.mu[u] - md.mu[v] - w) % 2 == 0


def test_base_mu_shifts_component():
    d = catalog.get("square-1-n2")
    atlas = global_sheets(d)
    r = sorted(atlas.regions)[0]
    assert maslov(d, atlas, base_mu={r: 5}).mu[r] == 5
    with pytest.raises(KeyError):
        maslov(d, atlas, base_mu={"nope": 1})


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(catalog.names()))
def test_maslov_solves_constraints(name):
    d = catalog.get(name)
    md = maslov(d)
    for u, v, w in md.constraints:
        assert md.reduce(md.mu[u] - md.mu[v] - w) == 0


# ---------------------------------------------------------------- parallel subdivision

def test_parallel_type8_shape():
    d = to_parallel(catalog.get("square-8-n3-k1"))
    assert validate(d) == []
    sq = d.squares["sq"]
    assert sq.split is not None and sq.sides["R"] == ("sq.R-", "sq.R+")
    assert d.edges["sq:C"].type.tag == "Perm"
    assert set(d.vertices) - set(catalog.get("square-8-n3-k1").vertices) == {"sq.R@0"}
    assert load_decomposition(d.dumps()) == d
    # one arc per edge afterwards
    arcs = shift_singular(d)["sq"]
    landing = [a.landing_cell for a in arcs]
    assert len(landing) == len(set(landing))


def test_parallel_leaves_other_types():
    d = catalog.get("square-7-n4-k1-l3")
    assert to_parallel(d) == d


def test_parallel_rejects_invalid():
    d = catalog.get("square-8-n3-k1")
    e = d.edges["sq.L"]
    bad = replace(d, edges={**d.edges, "sq.L": replace(e, type=EdgeType("PV", 3))})
    with pytest.raises(ValidationFailed):
        to_parallel(bad)
