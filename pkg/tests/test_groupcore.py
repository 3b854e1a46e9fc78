import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from homalg.errors import (InputError, LengthMismatch, NoIdentity, NotASubgroup, NotAssociative,
                           NotIndependent, NotLatinSquare, NotNormal, TooLarge)
from homalg.exactla import FinAbGroup
from homalg.groupcore import (FiniteGroup, VectorSpaceOverFq, abelianization, coset_action, cyclic,
                              dihedral, direct_product, find_isomorphism, general_linear_group,
                              gl_mapping_witness, is_homomorphism, left_cosets, orbit_decompose,
                              parse_group, parse_subgroup, quaternion, quotient_group,
                              regular_action, subgroup, symmetric, trivial_group, tuple_from_index,
                              tuple_index)

SMALL = [trivial_group(), cyclic(2), cyclic(5), symmetric(3), dihedral(4), quaternion(),
         direct_product(cyclic(2), cyclic(3)), general_linear_group(2, 2)]


def brute_orbits(action, length):
    seen, count = set(), 0
    for t in itertools.product(range(action.set_size), repeat=length):
        if t not in seen:
            count += 1
            seen.update(tuple(p[x] for x in t) for p in action.perm)
    return count


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_group_axioms(G):
    n, t, e = G.order, G.table, G.identity
    assert e == 0
    for a, b, c in itertools.product(range(n), repeat=3):
        assert t[t[a][b]][c] == t[a][t[b][c]]
    for a in range(n):
        assert t[a][G.inv(a)] == e == t[G.inv(a)][a]


def test_orders():
    assert [G.order for G in (cyclic(7), symmetric(4), dihedral(5), quaternion())] == [7, 24, 10, 8]
    assert general_linear_group(2, 3).order == 48
    assert general_linear_group(3, 2).order == 168
    with pytest.raises(TooLarge):
        general_linear_group(3, 3)


@pytest.mark.parametrize("G, expected", [
    (cyclic(6), FinAbGroup(0, (6,))),
    (symmetric(3), FinAbGroup(0, (2,))),
    (symmetric(4), FinAbGroup(0, (2,))),
    (dihedral(4), FinAbGroup(0, (2, 2))),
    (dihedral(3), FinAbGroup(0, (2,))),
    (quaternion(), FinAbGroup(0, (2, 2))),
    (direct_product(cyclic(2), cyclic(4)), FinAbGroup(0, (2, 4))),
    (general_linear_group(3, 2), FinAbGroup()),
    (trivial_group(), FinAbGroup()),
])
def test_abelianization(G, expected):
    assert abelianization(G) == expected


def test_gl22_is_s3():
    phi = find_isomorphism(general_linear_group(2, 2), symmetric(3))
    assert phi is not None
    assert is_homomorphism(general_linear_group(2, 2), symmetric(3), phi)
    assert find_isomorphism(cyclic(4), direct_product(cyclic(2), cyclic(2))) is None


def test_subgroups_and_quotients():
    G = symmetric(3)
    A3 = [g for g in range(6) if G.element_order(g) in (1, 3)]
    H, emb = subgroup(G, A3)
    assert H.order == 3 and emb[0] == G.identity
    Q, proj = quotient_group(G, A3)
    assert Q.order == 2 and is_homomorphism(G, Q, proj)
    t = [g for g in range(6) if G.element_order(g) == 2][0]
    with pytest.raises(NotNormal):
        quotient_group(G, [0, t])
    with pytest.raises(NotASubgroup):
        subgroup(G, [0, A3[1]])
    cos = left_cosets(G, [0, t])
    assert len(cos) == 3 and cos[0] == sorted([0, t])


def test_center_and_commutator():
    D4 = dihedral(4)
    assert len(D4.center()) == 2
    assert len(D4.commutator_subgroup()) == 2
    assert len(quaternion().center()) == 2


def test_validation_errors():
    with pytest.raises(NotLatinSquare):
        FiniteGroup([[0, 1], [0, 1]])
    with pytest.raises(NoIdentity):
        FiniteGroup([[0, 2, 1], [2, 1, 0], [1, 0, 2]])   # a*b = -a-b mod 3
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative):
        FiniteGroup(loop)


def test_json_roundtrip(tmp_path):
    G = dihedral(3)
    path = tmp_path / "g.json"
    path.write_text(json.dumps(G.to_json()))
    H = parse_group(f"file:{path}")
    assert H == G


def test_parse_group():
    assert parse_group("zmod:4").order == 4
    assert parse_group("sym:3").order == 6
    assert parse_group("dihedral:4").order == 8
    assert parse_group("gl:2,3").order == 48
    assert parse_group("product:zmod:2,zmod:3").order == 6
    assert parse_group("product:gl:2,2,zmod:2").order == 12
    assert parse_group("trivial").order == 1
    with pytest.raises(TooLarge):
        parse_group("sym:5")
    with pytest.raises(InputError):
        parse_group("foo:3")
    G = cyclic(6)
    assert parse_subgroup(G, "gen:2") == [0, 2, 4]
    assert parse_subgroup(G, "elems:0,3") == [0, 3]
    with pytest.raises(NotASubgroup):
        parse_subgroup(G, "elems:0,1")


def test_coset_action():
    G = symmetric(3)
    t = [g for g in range(6) if G.element_order(g) == 2][0]
    act = coset_action(G, [0, t])
    assert act.set_size == 3 and act.is_transitive()
    assert act.reps[0] == G.identity
    assert sorted(act.stabilizer(0)) == sorted([0, t])


@given(st.integers(0, 10 ** 6), st.integers(2, 7), st.integers(1, 5))
def test_tuple_index_roundtrip(k, size, length):
    k %= size ** length
    assert tuple_index(tuple_from_index(k, size, length), size) == k


@pytest.mark.parametrize("G", [cyclic(3), symmetric(3), dihedral(4)], ids=lambda G: G.name)
@pytest.mark.parametrize("length", [1, 2, 3])
def test_orbit_decompose_matches_brute_force(G, length):
    act = regular_action(G)
    dec = orbit_decompose(act, length - 1)
    assert len(dec.reps) == brute_orbits(act, length)
    assert sum(dec.sizes) == G.order ** length
    # representatives are lexicographically least in their orbits
    for r in dec.rep_tuples():
        assert all(tuple(p[x] for x in r) >= r for p in act.perm)


def test_gl_orbits_on_vectors():
    for q, expected in ((2, [1, 2]), (3, [1, 3])):
        act = VectorSpaceOverFq(q, 2).gl_action()
        assert [len(orbit_decompose(act, p).reps) for p in (0, 1)] == expected
        assert [brute_orbits(act, p + 1) for p in (0, 1)] == expected


@pytest.mark.parametrize("q", [2, 3])
def test_gl_mapping_witness(q):
    sp = VectorSpaceOverFq(q, 3)
    vecs = sp.nonzero
    for v, w in itertools.product(vecs[:5], vecs[-5:]):
        sigma, comp = gl_mapping_witness([v], [w], sp)
        assert sp.apply(sigma, v) == w
        for c in comp:
            assert sp.apply(sigma, c) == c
    v = [(1, 0, 0), (0, 1, 0)]
    w = [(1, 1, 0), (0, 0, 1)]
    sigma, _ = gl_mapping_witness(v, w, sp)
    assert [sp.apply(sigma, x) for x in v] == w
    with pytest.raises(LengthMismatch):
        gl_mapping_witness(v, w[:1], sp)
    with pytest.raises(NotIndependent):
        gl_mapping_witness([(1, 0, 0), (1, 0, 0)], w, sp)
