import pytest
from hypothesis import given, settings, strategies as st

from homalg.errors import DegreeOverflow, NotIndependent, TooLarge
from homalg.exactla import FinAbGroup
from homalg.stabilitylab import (e1_structure_check, factor_boundary_check, filtration,
                                 filtration_levels, gl_h1_non_example, join_homotopy_check,
                                 min_weight_modular, orbit_row_complex, persistence_check,
                                 row_filtration_homology, same_gl_orbit, simplex_dimension,
                                 vector_orbit_complex)


def strs(xs):
    return [str(x) for x in xs]


@pytest.mark.parametrize("q, P, ranks", [(2, 2, [3, 9, 27]), (3, 1, [8, 64])])
def test_simplex_counts(q, P, ranks):
    cx = vector_orbit_complex(1, q, P)
    assert [cx.rank(p) for p in range(P + 1)] == ranks


def test_size_cap():
    with pytest.raises(TooLarge):
        vector_orbit_complex(2, 3, 4)


def test_join_identity_and_acyclicity():
    cx = vector_orbit_complex(1, 2, 2)
    checked, fails = join_homotopy_check(cx)
    assert checked == 3 * (3 + 9 + 27) and fails == 0
    assert strs(cx.underlying().homology_all()) == ["Z", "0"]


def test_simplex_dimension():
    cx = vector_orbit_complex(1, 3, 1)
    sp = cx.space
    v, w = (1, 0), (0, 1)
    assert simplex_dimension((v, v), sp) == 1
    assert simplex_dimension((v, (2, 0)), sp) == 1
    assert simplex_dimension((v, w), sp) == 2
    assert simplex_dimension({(v, v): 1, (v, w): 0}, sp) == 1


def test_dimension_filtration_is_compatible():
    cx = vector_orbit_complex(1, 2, 2)
    levels = filtration_levels(cx)
    assert levels[0] == [0, 0, 0]
    assert sorted(set(levels[1])) == [0, 1]
    fc = filtration(cx)          # constructor re-checks that d never raises the level
    assert fc.levels == levels


@pytest.mark.parametrize("q, counts, dims1", [(2, [1, 2, 5], [1, 2]), (3, [1, 3], [1, 1, 2])])
def test_orbit_counts(q, counts, dims1):
    orc = orbit_row_complex(1, q, len(counts) - 1)
    assert orc.orbit_counts() == counts
    assert orc.d1_squared_zero()
    assert sorted(orc.dims[1]) == dims1


def test_orbit_labels():
    orc = orbit_row_complex(1, 3, 1)
    sp = orc.simplicial.space
    idx = {v: i for i, v in enumerate(sp.nonzero)}
    v, w = idx[(1, 0)], idx[(0, 1)]
    # (v, v) and (v, 2v) are different orbits of dimension one, (v, w) has dimension two
    labels = {orc.label_of(1, t) for t in [(v, v), (idx[(0, 2)], idx[(0, 2)])]}
    assert len(labels) == 1
    assert orc.label_of(1, (v, idx[(2, 0)])) != orc.label_of(1, (v, v))
    assert orc.dims[1][orc.label_of(1, (v, w))] == 2


def test_trivial_group_diagnostic():
    plain = vector_orbit_complex(1, 2, 2)
    diag = orbit_row_complex(1, 2, 2, diagnostic_trivial=True)
    assert diag.orbit_counts() == [plain.rank(p) for p in range(3)]
    assert diag.complex.homology(0) == plain.underlying().homology(0)
    assert diag.complex.homology(1) == plain.underlying().homology(1)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("k", [0, 1])
def test_row_homology_matches_oracle(q, k):
    r = row_filtration_homology(1, q, k, 2)
    assert r.agrees
    assert r.homology[0] == FinAbGroup(1)


def test_row_homology_values():
    # F^0 over F_3: the only orbits are lines, and H_1 picks up Z/2
    assert strs(row_filtration_homology(1, 3, 0, 1).homology) == ["Z", "Z/2"]
    # k = n: the full bottom row is acyclic in the computed range
    full = row_filtration_homology(1, 2, 1, 2)
    assert strs(full.homology) == ["Z", "0", "0"] and full.k_acyclic


def test_e1_structure():
    rep = e1_structure_check(1, 2, 1, 2)
    assert all(r.agrees for r in rep.rows) and rep.sum_agrees
    assert sorted(r.stabilizer_order for r in rep.rows) == [1, 2]


@pytest.mark.parametrize("q, pairs", [(2, 2), (3, 3)])
def test_persistence(q, pairs):
    rep = persistence_check(1, q)
    assert rep.pairs == rep.witnessed == pairs
    assert rep.d1_zero


def test_same_gl_orbit():
    assert same_gl_orbit(((1, 0), (0, 1)), ((1, 1), (0, 1)), 2)
    assert not same_gl_orbit(((1, 0), (1, 0)), ((1, 0), (0, 1)), 2)
    assert not same_gl_orbit(((1, 0),), ((1, 0), (0, 1)), 2)
    assert not same_gl_orbit(((1, 0), (1, 0)), ((1, 0), (2, 0)), 3)


@pytest.mark.parametrize("vectors, q", [
    ([(1, 0), (0, 1)], 2),
    ([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3),
    ([(1, 2), (0, 1)], 3),
])
def test_factor_boundary(vectors, q):
    rep = factor_boundary_check(vectors, q)
    assert rep.identity_holds and rep.A_equals_B


def test_factor_boundary_errors():
    with pytest.raises(NotIndependent):
        factor_boundary_check([(1, 0), (1, 0)], 2)
    with pytest.raises(DegreeOverflow):
        factor_boundary_check([(1, 0)], 2)


@given(st.sampled_from([2, 3, 5]), st.integers(1, 3))
@settings(max_examples=15, deadline=None)
def test_min_weight(p, m):
    w, wit = min_weight_modular(p, m, return_witness=True)
    assert w == (p - 1) * m
    assert sum(wit) == w and sum(n * p ** j for j, n in enumerate(wit)) % (p ** m - 1) == 0


def test_min_weight_cap():
    with pytest.raises(TooLarge):
        min_weight_modular(7, 5)


def test_gl_non_example():
    ab = gl_h1_non_example()
    assert ab["GL_2(F_2)"] == FinAbGroup.cyclic(2)
    assert ab["GL_3(F_2)"].is_trivial
