from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cellular_dga import catalog
from cellular_dga.cellcomplex import to_parallel
from cellular_dga.dgabuild import Dga, build_dga, d_squared
from cellular_dga.freealg import Generator, Polynomial
from cellular_dga.transform import (
    BadPair,
    BadPairAt,
    DegreeMismatch,
    InhomogeneousDifferential,
    SelfReference,
    cancel,
    cancel_pipeline,
    elementary_iso,
    identity_morphism,
    load_pipeline,
    make_pair,
    parallel_cancellations,
    stabilize,
    swallowtail_phi,
    valid_pairs,
    verify_chain_map,
)

from conftest import catalog_dga, collapse_parallel


def P(text):
    return Polynomial.parse(text)


def toy() -> Dga:
    # |x| = 1, |y| = |z| = 0, dx = y + z·z
    gens = {
        "x": Generator("x", "t", "c", (1, 2), 1),
        "y": Generator("y", "t", "b", (1, 2), 0),
        "z": Generator("z", "t", "b", (2, 3), 0),
    }
    return Dga(gens, 0, {"x": P("y + z·z"), "y": Polynomial.zero(), "z": Polynomial.zero()})


def test_stabilize_adds_a_cancelling_pair():
    s = stabilize(toy(), 3)
    assert s.diff["aux[0]"] == P("aux[1]")
    assert s.degree("aux[0]") == 3 and s.degree("aux[1]") == 2
    s2 = stabilize(s, 0)
    assert "aux[2]" in s2.generators and "aux[3]" in s2.generators


def test_stabilize_then_cancel_is_identity():
    base = catalog_dga("square-9-n3-k1")
    s = stabilize(base, 1)
    back = cancel(s, make_pair(s, "aux[0]", "aux[1]"))
    assert back.dumps() == base.dumps()


def test_cancel_substitutes_v():
    # cancel dx = y + z·z: y -> z·z everywhere
    dga = toy()
    dga.generators["w"] = Generator("w", "t", "c", (1, 3), 1)
    dga.diff["w"] = P("y")
    out = cancel(dga, make_pair(dga, "x", "y"))
    assert set(out.generators) == {"z", "w"}
    assert out.diff["w"] == P("z·z")
    assert d_squared(out) == []


def test_bad_pairs():
    dga = toy()
    with pytest.raises(BadPair):
        make_pair(dga, "x", "z")  # only z·z, not a single letter
    with pytest.raises(BadPair):
        make_pair(dga, "x", "x")
    with pytest.raises(BadPair):
        make_pair(dga, "x", "nope")
    with pytest.raises(BadPair):
        make_pair(dga, "y", "x")
    dga.diff["x"] = P("y + y·z")
    with pytest.raises(BadPair):
        make_pair(dga, "x", "y")


def test_cusp_pair_with_constant():
    # db = 1 + a: cancelling (b, a) sends a to 1
    dga = catalog_dga("square-9-n3-k1")
    pair = make_pair(dga, "b[sq.D;1,2]", "a[sq.LR;1,2]")
    assert pair.v == Polynomial.one()
    out = cancel(dga, pair)
    assert d_squared(out) == []


def test_stale_pair_rejected():
    dga = toy()
    pair = make_pair(dga, "x", "y")
    dga.diff["x"] = P("y")
    with pytest.raises(BadPair):
        cancel(dga, pair)


def test_pipeline_reports_index():
    dga = toy()
    assert cancel_pipeline(dga, []).dumps() == dga.dumps()
    with pytest.raises(BadPairAt) as exc:
        cancel_pipeline(dga, [("x", "y"), ("x", "y")])
    assert exc.value.index == 1


def test_load_pipeline():
    assert load_pipeline('[{"x": "a", "y": "b"}]') == [("a", "b")]
    for bad in ['{"x": "a"}', '[{"x": "a"}]', '[{"x": "a", "y": "b", "v": "c"}]', "[1]"]:
        with pytest.raises(ValueError):
            load_pipeline(bad)


def test_valid_pairs():
    pairs = valid_pairs(toy())
    assert [(p.x.id, p.y.id) for p in pairs] == [("x", "y")]
    assert all(isinstance(p.v, Polynomial) for p in valid_pairs(catalog_dga("square-1-n2")))


def test_elementary_iso():
    dga = toy()
    new, phi = elementary_iso(dga, "y", P("z·z"))
    assert new.diff["x"] == P("y")
    assert verify_chain_map(phi) == []
    assert d_squared(new) == []
    # applying the same move again undoes it
    again, _ = elementary_iso(new, "y", P("z·z"))
    assert again.diff == dga.diff


def test_elementary_iso_errors():
    dga = toy()
    with pytest.raises(SelfReference):
        elementary_iso(dga, "y", P("y·z"))
    with pytest.raises(DegreeMismatch):
        elementary_iso(dga, "y", P("x"))
    with pytest.raises(KeyError):
        elementary_iso(dga, "q", P("z"))


def test_elementary_iso_inhomogeneous():
    gens = {
        "x": Generator("x", "t", "c", (1, 2), 1),
        "y": Generator("y", "t", "b", (1, 2), 0),
        "u": Generator("u", "t", "b", (1, 2), 2),
    }
    dga = Dga(gens, 0, {"x": P("y + u"), "y": Polynomial.zero(), "u": Polynomial.zero()})
    with pytest.raises(InhomogeneousDifferential):
        elementary_iso(dga, "y", P("1"))


def test_identity_is_a_chain_map():
    assert verify_chain_map(identity_morphism(catalog_dga("square-13-n4-k2"))) == []


@pytest.mark.parametrize("name", ["swallowtail-ST-n3", "swallowtail-ST-n4", "swallowtail-ST-n5"])
def test_swallowtail_map(name):
    d = catalog.get(name)
    phi = swallowtail_phi(d)
    assert phi.source.d2_failures == [] and phi.target.d2_failures == []
    assert verify_chain_map(phi) == []
    assert verify_chain_map(swallowtail_phi(d, corrupt=True)) != []
    # the map moves only T-edge b generators
    moved = [g for g, v in phi.gen_images.items() if v != Polynomial.gen(g)]
    assert moved and all(g.startswith("b[S.D;") for g in moved)


def test_swallowtail_map_needs_a_pair():
    from cellular_dga.dgabuild import MissingDecoration

    with pytest.raises(MissingDecoration):
        swallowtail_phi(catalog.get("square-13-n3-k1"))


def test_parallel_cancellations_need_a_split():
    with pytest.raises(BadPair):
        parallel_cancellations(catalog_dga("square-8-n3-k1"), catalog.get("square-8-n3-k1"), "sq")


@pytest.mark.parametrize("name", ["square-5-n3-k1", "square-6-n4-k2-r", "square-8-n5-k3", "square-12-n4-k1-r"])
def test_parallel_collapses_to_single_square(name):
    got, ref = collapse_parallel(catalog.get(name))
    assert got == ref


def _head_widths(dga, d, pairs):
    heads = [x for x, y in pairs if dga.generators[y].cell == d.edges[dga.generators[x].cell].head]
    return [dga.generators[x].sheets[1] - dga.generators[x].sheets[0] for x in heads]


def test_parallel_cancellation_order():
    d = to_parallel(catalog.get("square-8-n4-k1"))
    dga = build_dga(d)
    c1, c2 = parallel_cancellations(dga, d, "sq")
    widths = _head_widths(dga, d, c1)
    assert widths and widths == sorted(widths)
    wide, c2w = parallel_cancellations(dga, d, "sq", widest_first=True)
    assert _head_widths(dga, d, wide) == sorted(widths, reverse=True)
    assert c2w == c2
    assert c2 and all(dga.generators[x].kind == "c" for x, _ in c2)


@pytest.mark.parametrize("name", ["square-8-n5-k2", "square-6-n5-k1-r"])
def test_widest_first_reaches_the_same_quotient(name):
    d = to_parallel(catalog.get(name))
    dga = build_dga(d)
    outs = []
    for wide in (False, True):
        c1, c2 = parallel_cancellations(dga, d, "sq", widest_first=wide)
        outs.append(cancel_pipeline(cancel_pipeline(dga, c1), c2).dumps())
    assert outs[0] == outs[1]


SMALL = [n for n in catalog.names() if n.startswith("square-") and ("-n2" in n or "-n3" in n)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.integers(-2, 2))
def test_stabilize_cancel_roundtrip(name, deg):
    base = catalog_dga(name)
    s = stabilize(base, deg)
    assert cancel(s, make_pair(s, "aux[0]", "aux[1]")).dumps() == base.dumps()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_any_valid_cancellation_keeps_d_squared(name, data):
    dga = catalog_dga(name)
    pairs = valid_pairs(dga)
    if not pairs:
        return
    out = cancel(dga, data.draw(st.sampled_from(pairs)))
    assert d_squared(out) == []


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_elementary_iso_is_a_chain_iso(name, data):
    dga = catalog_dga(name)
    gens = sorted(dga.generators)
    g = data.draw(st.sampled_from(gens))
    same = [x for x in gens if x != g and dga.degree(x) == dga.degree(g)]
    if not same:
        return
    v = Polynomial.gen(data.draw(st.sampled_from(same)))
    new, phi = elementary_iso(dga, g, v)
    assert d_squared(new) == []
    assert verify_chain_map(phi) == []
    assert Polynomial.parse(json.loads(phi.dumps())[g]) == Polynomial.gen(g) + v
