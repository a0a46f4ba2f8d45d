import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import lower_set_lattice
from ordua.corpus import all_posets, all_posets_up_to
from ordua.errors import KindMismatch, NotPriestley
from ordua.dualities import (
    coherent_of_priestley,
    dlat_of_priestley,
    dual_morphism,
    extended_image_check,
    msl_spectrum,
    ordered_boolean_of,
    poset_spectrum,
    priestley_of_coherent,
    priestley_of_dlat,
    roundtrip_check,
    spectrum_for,
    stone_spectrum,
    upper_elements,
)
from ordua.spaces import FiniteSpace, Preorder, PreorderedSpace, priestley_check
from ordua.structures import (
    StructureMorphism,
    classify,
    validate_poset,
)
from ordua.structures import bits

posets_small = st.sampled_from(all_posets_up_to(4))
posets_5 = st.sampled_from(all_posets(5))


def chain(n: int):
    labels = [str(i) for i in range(n)]
    return classify(validate_poset(labels,
                                   [(str(i), str(i + 1)) for i in range(n - 1)]))


def discrete_ordered(p) -> PreorderedSpace:
    space = FiniteSpace(list(p.labels), range(1 << p.n))
    return PreorderedSpace(space, Preorder(list(p.labels), p.up))


# ----------------------------------------------------------------- spectra

def test_stone_spectrum_of_three_chain():
    sp = stone_spectrum(chain(3))
    assert sorted(sp.opens) == [0b00, 0b10, 0b11]


def test_priestley_of_three_chain_embedding():
    res = priestley_of_dlat(chain(3))
    assert res.n_points == 2
    assert res.embedding == (0b00, 0b10, 0b11)  # 0 -> {}, mid -> one point, 1 -> all
    assert priestley_check(res.space).ok


def test_spectra_carry_inclusion_order():
    for p in all_posets_up_to(3):
        c = classify(p)
        res = poset_spectrum(p)
        pts = res.point_filters.masks
        for i in range(len(pts)):
            for j in range(len(pts)):
                assert res.space.preorder.leq(i, j) == (not pts[i] & ~pts[j])


@given(posets_small)
@settings(max_examples=30)
def test_spectrum_space_is_priestley(p):
    res = poset_spectrum(p)
    assert priestley_check(res.space).ok


def test_embedding_reflects_order():
    # x <= y in the lattice iff the basic set of x is contained in that of y
    for p in all_posets_up_to(3):
        d = lower_set_lattice(p)
        res = priestley_of_dlat(d)
        for i in range(d.n):
            for j in range(d.n):
                inc = not res.embedding[i] & ~res.embedding[j]
                assert d.leq(i, j) == inc


# ------------------------------------------------------------ back and forth

def test_clopen_uppers_of_discrete_order_space():
    p = validate_poset(["0", "a", "b", "c", "1"],
                       [("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")])
    d = dlat_of_priestley(discrete_ordered(p))
    assert d.n == 8 and d.kind == "distributive-lattice"


def test_dlat_of_priestley_rejects_non_priestley():
    sierp = FiniteSpace(["0", "1"], [0b00, 0b10, 0b11])
    order = Preorder(["0", "1"], (0b11, 0b10))
    with pytest.raises(NotPriestley):
        dlat_of_priestley(PreorderedSpace(sierp, order))


@given(posets_small)
@settings(max_examples=25)
def test_roundtrip_recovers_the_lattice(p):
    d = lower_set_lattice(p)
    ok, result, iso = roundtrip_check(d)
    assert ok and iso is not None
    assert result.n == d.n
    # the witness really is an order isomorphism
    for i in range(d.n):
        for j in range(d.n):
            assert d.leq(i, j) == result.leq(iso[i], iso[j])


def test_coherent_reduct_recovers_stone_topology():
    d = chain(3)
    res = priestley_of_dlat(d)
    reduct = coherent_of_priestley(res.space)
    assert sorted(reduct.opens) == sorted(stone_spectrum(d).opens)


@given(posets_small)
@settings(max_examples=25)
def test_patch_of_coherent_reduct_is_identity(p):
    res = poset_spectrum(p)
    back = priestley_of_coherent(coherent_of_priestley(res.space))
    assert sorted(back.space.opens) == sorted(res.space.space.opens)
    assert back.preorder.up == res.space.preorder.up


# ------------------------------------------------------------- dual maps

def test_dual_morphism_of_chain_inclusion():
    f = StructureMorphism(chain(2), chain(3), (0, 2), "lattice-hom")
    dm = dual_morphism(f, "dlat")
    assert dm.continuous and dm.monotone
    assert dm.source.n == 2 and dm.target.n == 1


def test_dual_morphism_is_contravariant():
    f = StructureMorphism(chain(2), chain(3), (0, 2), "lattice-hom")
    g = StructureMorphism(chain(3), chain(4), (0, 2, 3), "lattice-hom")
    gf = StructureMorphism(chain(2), chain(4), (0, 3), "lattice-hom")
    df, dg, dgf = (dual_morphism(h, "dlat") for h in (f, g, gf))
    assert all(dgf.map[k] == df.map[dg.map[k]] for k in range(dgf.source.n))


def test_dual_morphism_checks_hom_kind():
    d4 = classify(validate_poset(["0", "a", "b", "1"],
                                 [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]))
    # joins are preserved but a ^ b = 0 is sent to 1: not a lattice hom
    f = StructureMorphism(d4, chain(2), (0, 1, 1, 1), "monotone")
    with pytest.raises(KindMismatch):
        dual_morphism(f, "dlat")


def test_dual_morphism_requires_flat_maps_for_posets():
    # x -> p is monotone but not flat: up(q) would pull back to the empty set
    point = classify(validate_poset(["x"], []))
    a2 = classify(validate_poset(["p", "q"], []))
    f = StructureMorphism(point, a2, (0,), "monotone")
    with pytest.raises(KindMismatch):
        dual_morphism(f, "poset")


def test_dual_morphism_of_flat_map():
    f = StructureMorphism(chain(3), chain(2), (0, 0, 1), "flat")
    dm = dual_morphism(f, "poset")
    assert dm.continuous and dm.monotone
    assert dm.source.n == 2 and dm.target.n == 3


# -------------------------------------------------------- extended image

def test_spectra_lie_in_their_extended_images():
    a2 = validate_poset(["p", "q"], [])
    ok, reason = extended_image_check(poset_spectrum(a2).space, "coherent-poset")
    assert ok and reason is None
    ok, reason = extended_image_check(msl_spectrum(chain(3).with_kind(
        "meet-semilattice")).space, "msl")
    assert ok and reason is None


def test_discrete_antichain_is_coherent_but_not_msl_image():
    p = validate_poset(["x0", "x1"], [])
    ps = discrete_ordered(p)
    ok, _ = extended_image_check(ps, "coherent-poset")
    assert ok
    ok, reason = extended_image_check(ps, "msl")
    assert not ok and reason["kind"] == "top-not-weakly-indecomposable"


def test_extended_image_check_requires_priestley():
    space = FiniteSpace(["x0", "x1"], [0b00, 0b11])
    ps = PreorderedSpace(space, Preorder(["x0", "x1"], (0b01, 0b10)))
    with pytest.raises(NotPriestley):
        extended_image_check(ps, "coherent-poset")


# ------------------------------------------------- ordered Boolean envelope

def test_ordered_boolean_of_chain_as_lattice():
    ob = ordered_boolean_of(chain(3), "dlat")
    assert ob.algebra.n == 4
    assert ob.algebra.kind == "boolean-algebra"
    assert ob.spec_order.up == (0b11, 0b10)  # two primes forming a chain
    assert upper_elements(ob).members() == (0, 2, 3)


def test_ordered_boolean_of_chain_as_msl():
    ob = ordered_boolean_of(chain(3).with_kind("meet-semilattice"), "msl")
    assert ob.algebra.n == 8
    assert ob.spec_order.up == (0b111, 0b110, 0b100)  # three filters, a chain
    assert upper_elements(ob).members() == (0, 4, 6, 7)


@given(st.sampled_from(all_posets_up_to(3)))
@settings(max_examples=20)
def test_upper_elements_against_definition(p):
    ob = ordered_boolean_of(classify(p), "poset-monotone")
    got = set(upper_elements(ob).members())
    for x in range(ob.algebra.n):
        expected = all(x >> k2 & 1
                       for k in bits(x) for k2 in bits(ob.spec_order.up[k]))
        assert (x in got) == expected


def test_ordered_boolean_traces_are_the_points():
    ob = ordered_boolean_of(chain(3), "dlat")
    assert ob.traces == ob.free.points.masks


def test_spectrum_for_dispatch():
    c = chain(3)
    assert spectrum_for(c, "dlat").n_points == 2
    assert spectrum_for(c.with_kind("meet-semilattice"), "msl").n_points == 3
    assert spectrum_for(c.with_kind("dd-lattice"), "ddlat").n_points == 2
    assert spectrum_for(c, "poset").n_points == 3


def test_poset_spectrum_auxiliary_open_space():
    a2 = validate_poset(["p", "q"], [])
    res = poset_spectrum(a2)
    # lower-set witnesses: {}, {p}, {q}, {p,q} give opens {}, {F_p}, {F_q}, all
    assert sorted(res.auxiliary["A"].opens) == [0b00, 0b01, 0b10, 0b11]
