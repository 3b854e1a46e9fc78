import json

import pytest
from hypothesis import given, settings, strategies as st

from homalg.complexes import ChainComplex, ordered_simplicial
from homalg.errors import HypothesisFailed, NotCanonicallyBounded, RingUnsupported
from homalg.exactla import GF, ZZ, FinAbGroup, Matrix
from homalg.gmodule import trivial_module
from homalg.groupcore import cyclic, direct_product, regular_action, trivial_action
from homalg.spectral import (FilteredComplex, acyclic_coefficient_ss, check_acyclic, edge_maps,
                             filtered_from_pieces, infinity_page, lhs_e2, pages,
                             random_filtered_complex, spectral_sequence, triangle_check)


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5]))
@settings(max_examples=30, deadline=None)
def test_random_complexes_converge(seed, p):
    fc = random_filtered_complex(p, max_degree=4, max_rank=8, seed=seed)
    ss = spectral_sequence(fc)
    assert ss.stabilized()
    assert ss.convergence_audit()


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_scrambling_preserves_pages(seed):
    pieces = [("cycle", 0, 0), ("pair", 0, 1, 0), ("pair", 1, 2, 0), ("cycle", 2, 1)]
    plain = spectral_sequence(filtered_from_pieces(pieces, 3, 3, scramble=False))
    mixed = spectral_sequence(filtered_from_pieces(pieces, 3, 3, seed=seed))
    for a, b in zip(plain.pages, mixed.pages):
        assert a.entries == b.entries


def test_pair_dies_on_the_right_page():
    # y at level 2 with dy = x at level 0: both survive to E^2, die at E^3
    fc = filtered_from_pieces([("pair", 1, 2, 0)], 2, 2, seed=1)
    ss = spectral_sequence(fc, 4)
    assert ss.pages[2].dim(0, 1) == 1 and ss.pages[2].dim(2, 0) == 1
    assert ss.pages[3].dim(0, 1) == 0 and ss.pages[3].dim(2, 0) == 0
    d2 = ss.pages[2].differentials[(2, 0)]
    assert d2.shape == (1, 1) and d2[0, 0] % 2 == 1


def test_single_level_filtration_collapses():
    C = ChainComplex("F2", [2, 2, 1], [Matrix.from_dense([[1, 1], [0, 0]]),
                                       Matrix.from_dense([[1], [1]])])
    fc = FilteredComplex(C, [[0, 0], [0, 0], [0]])
    ss = spectral_sequence(fc)
    H = [C.homology(n) for n in range(fc.max_degree + 1)]
    for page in ss.pages[1:]:
        assert [page.dim(0, n) for n in range(len(H))] == H
        assert all(v == 0 for (p, q), v in page.entries.items() if p > 0)


def test_two_step_filtration_long_exact_sequence():
    # F^0 = subcomplex, E^1_(0,*) = H(F^0), E^1_(1,*) = H(C / F^0),
    # d^1 is the connecting map and E^2 = E^inf.
    fc = filtered_from_pieces([("pair", 0, 1, 0), ("cycle", 1, 0), ("cycle", 1, 1), ("cycle", 0, 0)],
                              2, 2, seed=4)
    ss = spectral_sequence(fc)
    E1, E2 = ss.pages[1], ss.pages[2]
    assert E1.dim(0, 0) == 2 and E1.dim(1, 0) == 2
    assert E2.dim(0, 0) == 1 and E2.dim(1, 0) == 1
    assert E2.entries == {k: ss.einf.entries[k] for k in E2.entries}
    assert ss.convergence_audit()


def test_integer_pages():
    C = ChainComplex(ZZ, [1, 1], [Matrix.from_dense([[2]])])
    fc = FilteredComplex(C, [[0], [1]])
    E0, E1 = pages(fc, 1)
    assert E1.dim(0, 0) == FinAbGroup(1) and E1.dim(1, 0) == FinAbGroup(1)
    with pytest.raises(RingUnsupported):
        pages(fc, 2)


def test_not_canonically_bounded():
    C = ChainComplex("F2", [1, 1], [Matrix.from_dense([[1]])])
    with pytest.raises(NotCanonicallyBounded):
        FilteredComplex(C, [[1], [1]])          # level exceeds degree
    with pytest.raises(NotCanonicallyBounded):
        FilteredComplex(C, [[0], [0, 0]])       # wrong length
    # a differential that lowers the level is fine, one that raises it is not
    FilteredComplex(C, [[0], [1]])
    D = ChainComplex("F2", [1, 2, 1], [Matrix.zeros(1, 2), Matrix.from_dense([[0], [1]])])
    with pytest.raises(NotCanonicallyBounded):
        FilteredComplex(D, [[0], [0, 1], [0]])


def test_filtered_json_roundtrip():
    fc = random_filtered_complex(3, max_degree=3, seed=11)
    again = FilteredComplex.from_json(json.loads(json.dumps(fc.to_json())))
    assert again.levels == fc.levels
    assert infinity_page(again).entries == infinity_page(fc).entries
    page = spectral_sequence(fc).pages[2].to_json()
    assert page["page"] == 2 and all({"p", "q", "value"} <= set(e) for e in page["entries"])


def test_grid_layout():
    fc = filtered_from_pieces([("cycle", 0, 0), ("cycle", 1, 1), ("cycle", 2, 0)], 2, 2, scramble=False)
    g = spectral_sequence(fc).pages[1].grid().splitlines()
    assert g[0].startswith("q=2") and g[-1].strip().startswith("p=0")


def test_triangle_and_edges():
    fc = filtered_from_pieces([("cycle", 0, 0), ("cycle", 1, 0), ("cycle", 2, 0),
                               ("pair", 2, 3, 0)], 2, 3, seed=7)
    ss = spectral_sequence(fc)
    em = edge_maps(ss)
    assert em.surjective == {q: True for q in em.surjective}
    assert em.injective == {a: True for a in em.injective}
    rep = triangle_check(ss, 2)
    assert rep.conclusion_holds and all(rep.abutment_agrees.values())
    # a nonzero cell in the triangle is reported with its coordinates
    bad = filtered_from_pieces([("cycle", 0, 0), ("cycle", 2, 2)], 2, 2, scramble=False)
    with pytest.raises(HypothesisFailed) as exc:
        triangle_check(spectral_sequence(bad), 2)
    assert exc.value.cell == (2, 0)


@pytest.mark.parametrize("n", [2, 3])
def test_acyclic_coefficients(n):
    G = cyclic(n)
    rep = acyclic_coefficient_ss(G, ordered_simplicial(regular_action(G), 3), 2, f"F{n}")
    assert rep.passed
    assert rep.total_dims == [1, 1, 1]


def test_ordered_simplices_are_acyclic():
    assert check_acyclic(ordered_simplicial(trivial_action(cyclic(2), 3), 3), 3)
    assert check_acyclic(ordered_simplicial(regular_action(cyclic(3)), 2), 2)


def test_lhs_klein_four():
    V = direct_product(cyclic(2), cyclic(2))
    r = lhs_e2(V, [0, 1], trivial_module(V, GF(2)), 3, 3)
    assert all(v == 1 for v in r.e2.values())
    assert r.sums == r.abutment[:4] == [1, 2, 3, 4]
    assert not any(r.flags)
    assert r.column_edge_ranks == [1, 1, 1, 1]


def test_lhs_cyclic_four_edge_ranks():
    Z4 = cyclic(4)
    r = lhs_e2(Z4, [0, 2], trivial_module(Z4, GF(2)), 3, 3)
    assert r.flags == [False, True, True, True]
    # pi_q has a kernel exactly for odd q
    assert r.column_edge_ranks == [1, 0, 1, 0]
    assert r.row_edge_ranks[0] == 1


def test_lhs_whole_group_and_trivial_subgroup():
    G = cyclic(3)
    M = trivial_module(G, GF(3))
    whole = lhs_e2(G, [0, 1, 2], M, 2, 2)
    assert [whole.e2[(0, q)] for q in range(3)] == [1, 1, 1]
    assert all(whole.e2[(p, q)] == 0 for p in (1, 2) for q in range(3))
    triv = lhs_e2(G, [0], M, 2, 2)
    assert [triv.e2[(p, 0)] for p in range(3)] == [1, 1, 1]
    assert all(triv.e2[(p, q)] == 0 for p in range(3) for q in (1, 2))
    with pytest.raises(RingUnsupported):
        lhs_e2(G, [0], trivial_module(G), 1, 1)
