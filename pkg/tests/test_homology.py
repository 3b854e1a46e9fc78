import pytest
from hypothesis import given, settings, strategies as st

from homalg.errors import NotAbelian, NotNormal, RingUnsupported
from homalg.exactla import GF, QQ, ZZ, FinAbGroup
from homalg.gmodule import permutation_module, trivial_module
from homalg.groupcore import (coset_action, cyclic, dihedral, direct_product, quaternion,
                              regular_action, subgroup, symmetric, trivial_group)
from homalg.homology import (clear_cache, conjugation_action_map, group_cohomology, group_homology,
                             homology_classes, pontryagin_product, quotient_action_on_homology,
                             shapiro_transport, uct_compare)
from homalg.verify import periodic_cyclic_homology


def strs(xs):
    return [str(x) for x in xs]


def test_z2_up_to_five():
    assert strs(group_homology(cyclic(2), N=5).degrees) == ["Z", "Z/2", "0", "Z/2", "0", "Z/2"]


@given(st.integers(1, 7), st.integers(0, 3))
@settings(max_examples=25, deadline=None)
def test_cyclic_groups_match_periodic_oracle(n, N):
    assert group_homology(cyclic(n), N=N).degrees == periodic_cyclic_homology(n, N)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cyclic_field_coefficients_match_oracle(p):
    for n in (2, 3, 4, 6):
        G = cyclic(n)
        assert group_homology(G, trivial_module(G, GF(p)), 3).degrees == periodic_cyclic_homology(n, 3, GF(p))


def test_h0_is_z_for_everything():
    for G in (trivial_group(), cyclic(5), symmetric(3), quaternion()):
        assert group_homology(G, N=0).degrees == [FinAbGroup(1)]


def test_klein_four_over_f2_kunneth():
    V = direct_product(cyclic(2), cyclic(2))
    assert group_homology(V, trivial_module(V, GF(2)), 4).degrees == [1, 2, 3, 4, 5]


def test_rational_homology_vanishes():
    G = symmetric(3)
    assert group_homology(G, trivial_module(G, QQ), 3).degrees == [1, 0, 0, 0]


def test_trivial_group_is_a_point():
    assert strs(group_homology(trivial_group(), N=3).degrees) == ["Z", "0", "0", "0"]
    assert strs(group_cohomology(trivial_group(), N=2).degrees) == ["Z", "0", "0"]


def test_cohomology_of_z2():
    assert strs(group_cohomology(cyclic(2), N=2).degrees) == ["Z", "0", "Z/2"]
    dims = group_cohomology(cyclic(2), trivial_module(cyclic(2), GF(2)), 2).degrees
    assert dims == [1, 1, 1]
    # |H^2(Z/2, F_2)| = 2 = number of groups of order 4 (Z/4 and Z/2 x Z/2),
    # both being central extensions of Z/2 by Z/2
    assert 2 ** dims[2] == 2


def test_cache_returns_same_result():
    clear_cache()
    a = group_homology(symmetric(3), N=3)
    b = group_homology(symmetric(3), N=3)
    assert a is b
    clear_cache()
    assert group_homology(symmetric(3), N=3).degrees == a.degrees


def test_result_json():
    j = group_homology(cyclic(6), N=3).to_json()
    assert j["ring"] == "Z"
    assert j["degrees"][1] == {"free_rank": 0, "torsion": [6]}
    jf = group_homology(cyclic(2), trivial_module(cyclic(2), GF(2)), 1).to_json()
    assert jf["degrees"] == [{"dimension": 1}, {"dimension": 1}]


# ---------------------------------------------------------------------------
# induced maps
# ---------------------------------------------------------------------------

def test_shapiro_z3_in_s3():
    G = symmetric(3)
    H_elems = [g for g in range(6) if G.element_order(g) in (1, 3)]
    H, _ = subgroup(G, H_elems)
    tr = shapiro_transport(G, H_elems, trivial_module(H), 3)
    for k in range(4):
        assert tr.source[k].group == tr.target[k].group
        assert tr.is_isomorphism(k)
    direct = group_homology(G, permutation_module(coset_action(G, H_elems)), 3).degrees
    assert strs(direct) == ["Z", "Z/3", "0", "Z/3"]


def test_shapiro_trivial_subgroup():
    G = cyclic(2)
    E, _ = subgroup(G, [0])
    tr = shapiro_transport(G, [0], trivial_module(E), 3)
    assert [strs([tr.target[k].group]) for k in range(4)] == [["Z"], ["0"], ["0"], ["0"]]
    assert all(tr.is_isomorphism(k) for k in range(4))


def test_shapiro_index_one():
    G = cyclic(3)
    full, _ = subgroup(G, range(3))
    tr = shapiro_transport(G, range(3), trivial_module(full), 2)
    assert all(tr.is_isomorphism(k) for k in range(3))


@pytest.mark.parametrize("G", [symmetric(3), dihedral(4), quaternion(), cyclic(4)], ids=lambda G: G.name)
@pytest.mark.parametrize("ring", [ZZ, GF(2)], ids=str)
def test_conjugation_is_identity(G, ring):
    M = trivial_module(G, ring)
    for g in range(G.order):
        m = conjugation_action_map(G, g, M, 2)
        assert all(m.is_identity(k) for k in range(3))


def test_conjugation_with_nontrivial_module():
    G = symmetric(3)
    M = permutation_module(regular_action(G))
    for g in range(G.order):
        m = conjugation_action_map(G, g, M, 1)
        assert m.is_identity(0) and m.is_identity(1)


def test_quotient_action_s3_on_h1_of_z3():
    G = symmetric(3)
    A3 = [g for g in range(6) if G.element_order(g) in (1, 3)]
    qa = quotient_action_on_homology(G, A3, trivial_module(G), 1)
    assert qa.presentation.group == FinAbGroup.cyclic(3)
    nontrivial = [c for c in range(qa.quotient.order) if c != qa.quotient.identity][0]
    assert qa.matrices[nontrivial] == [[2]]         # -1 mod 3
    assert qa.matrices[qa.quotient.identity] == [[1]]


def test_quotient_action_central_is_trivial():
    Z4 = cyclic(4)
    qa = quotient_action_on_homology(Z4, [0, 2], trivial_module(Z4, GF(2)), 1)
    assert all(A == [[1]] for A in qa.matrices)
    with pytest.raises(NotNormal):
        G = symmetric(3)
        t = [g for g in range(6) if G.element_order(g) == 2][0]
        quotient_action_on_homology(G, [0, t], trivial_module(G), 1)


# ---------------------------------------------------------------------------
# products and universal coefficients
# ---------------------------------------------------------------------------

def test_pontryagin_unit_and_square():
    G = cyclic(2)
    one = homology_classes(G, GF(2), 0, 3)[0]
    x = homology_classes(G, GF(2), 1, 3)[0]
    assert pontryagin_product(G, GF(2), one, x, 3).coords == x.coords
    assert pontryagin_product(G, GF(2), x, x, 3).coords == [0]


def test_pontryagin_over_f3_graded_commutative():
    G = cyclic(3)
    x = homology_classes(G, GF(3), 1, 3)[0]
    y = homology_classes(G, GF(3), 2, 3)[0]
    xy = pontryagin_product(G, GF(3), x, y, 3).coords
    yx = pontryagin_product(G, GF(3), y, x, 3).coords
    assert xy == yx
    # odd-degree class squares to zero in odd characteristic
    assert pontryagin_product(G, GF(3), x, x, 3).coords == [0]


def test_pontryagin_errors():
    G = symmetric(3)
    c = homology_classes(G, GF(2), 0, 1)[0]
    with pytest.raises(NotAbelian):
        pontryagin_product(G, GF(2), c, c)
    Z = cyclic(2)
    c = homology_classes(Z, ZZ, 0, 1)[0]
    with pytest.raises(RingUnsupported):
        pontryagin_product(Z, ZZ, c, c)


@pytest.mark.parametrize("G, p, N", [(cyclic(2), 2, 4), (cyclic(3), 2, 3), (trivial_group(), 3, 2),
                                     (symmetric(3), 3, 3)], ids=lambda x: getattr(x, "name", str(x)))
def test_uct(G, p, N):
    rows = uct_compare(G, p, N)
    assert all(r.passed for r in rows)
    if G.order == 3 and p == 2:
        assert [r.computed for r in rows] == [1, 0, 0, 0]
