import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.matrices import DomainMatrix

from homalg.errors import CompositionNotZero, NotACycle, NotInLattice, ShapeMismatch
from homalg.exactla import (GF, QQ, ZZ, FinAbGroup, HomologyPresentation, Matrix, direct_sum,
                            ext_pair, factorize, hstack, homology_at, invariant_factors,
                            kernel_basis, nullspace_mod, parse_ring, rank, rank_mod,
                            smith_normal_form, subquotient, tor_pair)


def int_matrices(max_rows=6, max_cols=6, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def sympy_invariants(rows):
    D = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    vals = [abs(int(D[i, i])) for i in range(min(D.shape))]
    return sorted(v for v in vals if v)


# ---------------------------------------------------------------------------
# rings and groups
# ---------------------------------------------------------------------------

def test_parse_ring():
    assert parse_ring("Z") is ZZ and parse_ring("Q") is QQ
    assert parse_ring("F5") == GF(5)
    assert parse_ring("Fp", 7) == GF(7)
    with pytest.raises(ValueError):
        GF(6)


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(97) == {97: 1}


def test_finabgroup_canonical_form():
    assert FinAbGroup.from_cyclic_orders([2, 3]) == FinAbGroup(0, (6,))
    assert FinAbGroup.from_cyclic_orders([4, 6, 0, 1]) == FinAbGroup(1, (2, 12))
    assert str(FinAbGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
    assert str(FinAbGroup()) == "0"
    with pytest.raises(ValueError):
        FinAbGroup(0, (4, 6))


def test_finabgroup_json_roundtrip():
    g = FinAbGroup(3, (2, 6))
    assert FinAbGroup.from_json(g.to_json()) == g


def test_tor_and_ext():
    assert tor_pair(FinAbGroup.cyclic(4), FinAbGroup.cyclic(6)) == FinAbGroup.cyclic(2)
    assert ext_pair(FinAbGroup.cyclic(3), FinAbGroup(1)) == FinAbGroup.cyclic(3)
    assert direct_sum([FinAbGroup.cyclic(2), FinAbGroup.cyclic(3), FinAbGroup(1)]) == FinAbGroup(1, (6,))


# ---------------------------------------------------------------------------
# Smith normal form against sympy
# ---------------------------------------------------------------------------

@given(int_matrices())
@settings(max_examples=150, deadline=None)
def test_snf_invariants_match_sympy(rows):
    A = Matrix.from_dense(rows)
    assert invariant_factors(A) == sympy_invariants(rows)


@given(int_matrices())
@settings(max_examples=100, deadline=None)
def test_snf_transforms(rows):
    A = Matrix.from_dense(rows)
    S = smith_normal_form(A)
    assert (S.U @ A @ S.V).to_dense() == S.D.to_dense()
    n, m = A.shape
    assert (S.U @ S.U_inv).to_dense() == Matrix.identity(n).to_dense()
    assert (S.V_inv @ S.V).to_dense() == Matrix.identity(m).to_dense()
    diag = S.diagonal
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert all(d > 0 for d in diag)


@given(int_matrices(), st.sampled_from([2, 3, 5]))
@settings(max_examples=80, deadline=None)
def test_rank_mod_p_matches_sympy(rows, p):
    A = Matrix.from_dense(rows)
    dm = DomainMatrix.from_list_sympy(len(rows), len(rows[0]), rows).convert_to(sympy.GF(p))
    expected = dm.rank()
    assert rank(A, GF(p)) == expected
    assert rank_mod(np.array(rows, dtype=np.int64), p) == expected


@given(int_matrices())
@settings(max_examples=80, deadline=None)
def test_kernel_basis_is_saturated(rows):
    A = Matrix.from_dense(rows)
    K = kernel_basis(A)
    assert A.matmul(K).is_zero()
    assert K.ncols == A.ncols - sympy.Matrix(rows).rank()
    if K.ncols:
        # a lattice basis of the full kernel has trivial invariant factors
        assert all(d == 1 for d in invariant_factors(K))


def test_rational_rank():
    A = Matrix.from_dense([[1, 2], [2, 4]])
    assert rank(A, QQ) == 1


# ---------------------------------------------------------------------------
# homology of a pair of maps
# ---------------------------------------------------------------------------

def test_homology_at_examples():
    two = Matrix.from_dense([[2]])
    zero = Matrix.from_dense([[0]])
    assert homology_at(two, zero) == FinAbGroup.cyclic(2)
    assert homology_at(zero, zero) == FinAbGroup(1)
    assert homology_at(two, zero, GF(2)) == 1
    assert homology_at(two, zero, GF(3)) == 0


def test_homology_at_errors():
    with pytest.raises(ShapeMismatch):
        homology_at(Matrix.zeros(2, 1), Matrix.zeros(1, 3))
    with pytest.raises(CompositionNotZero):
        homology_at(Matrix.identity(1), Matrix.identity(1))


@st.composite
def complexes_pair(draw):
    """d_out, d_in with d_out d_in = 0 built as d_out = B P, d_in = Q C with P Q = 0."""
    n = draw(st.integers(1, 5))
    k = draw(st.integers(0, n))
    vals = st.integers(-3, 3)
    # P projects onto the last n-k coordinates, Q includes the first k
    a, b = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    B = draw(st.lists(st.lists(vals, min_size=n - k, max_size=n - k), min_size=a, max_size=a))
    C = draw(st.lists(st.lists(vals, min_size=b, max_size=b), min_size=k, max_size=k))
    unimod = draw(st.lists(st.integers(-2, 2), min_size=n * n, max_size=n * n))
    T = [[int(i == j) + (unimod[i * n + j] if i < j else 0) for j in range(n)] for i in range(n)]
    Ts = sympy.Matrix(T)
    Tinv = Ts.inv()
    d_out = sympy.Matrix(a, n - k, sum(B, [])) if n - k else sympy.zeros(a, 0)
    P = sympy.zeros(n - k, n)
    for i in range(n - k):
        P[i, k + i] = 1
    Q = sympy.zeros(n, k)
    for i in range(k):
        Q[i, i] = 1
    Cs = sympy.Matrix(k, b, sum(C, [])) if k else sympy.zeros(0, b)
    dout = (d_out * P) * Tinv
    din = Ts * (Q * Cs)
    return dout.tolist(), din.tolist(), n, b


@given(complexes_pair())
@settings(max_examples=80, deadline=None)
def test_homology_matches_sympy_formula(data):
    dout, din, n, b = data
    A = Matrix.from_dense(dout, ncols=n)
    B = Matrix.from_dense(din, ncols=b) if n else Matrix.zeros(0, b)
    h = homology_at(B, A)
    r_out = sympy.Matrix(dout).rank() if dout and dout[0] else 0
    inv = sympy_invariants(din) if din and din[0] else []
    assert h.free_rank == n - r_out - len(inv)
    assert h.torsion == tuple(d for d in inv if d != 1)


@given(complexes_pair())
@settings(max_examples=60, deadline=None)
def test_presentation_coordinates(data):
    dout, din, n, b = data
    A = Matrix.from_dense(dout, ncols=n)
    B = Matrix.from_dense(din, ncols=b)
    pres = HomologyPresentation(B, A)
    assert pres.group == homology_at(B, A)
    # generators have unit coordinates, boundaries have zero coordinates
    for k, z in enumerate(pres.generators()):
        c = pres.coords(z)
        assert c == [int(i == k) for i in range(pres.dimension)]
    for j in range(b):
        c = pres.coords(dict(B.col(j)))
        assert all(x == 0 for x in c)


def test_presentation_not_a_cycle():
    pres = HomologyPresentation(Matrix.zeros(1, 0), Matrix.identity(1))
    with pytest.raises(NotACycle):
        pres.coords({0: 1})


def test_subquotient():
    num = Matrix.from_dense([[1, 0], [0, 1]])
    den = Matrix.from_dense([[2], [0]])
    assert subquotient(num, den) == FinAbGroup(1, (2,))
    assert subquotient(num, den, GF(3)) == 1
    with pytest.raises(NotInLattice):
        subquotient(Matrix.from_dense([[2], [0]]), Matrix.from_dense([[1], [0]]))


def test_nullspace_mod():
    M = np.array([[1, 1, 0], [0, 1, 1]])
    N = nullspace_mod(M, 2, 3)
    assert N.shape[0] == 1
    assert not ((M @ N.T) % 2).any()


def test_matrix_json_and_stacking():
    A = Matrix.from_dense([[1, 0, 2], [0, -1, 0]])
    assert Matrix.from_json(A.to_json()).to_dense() == A.to_dense()
    H = hstack([A, A])
    assert H.shape == (2, 6)
    assert A.transpose().transpose().to_dense() == A.to_dense()
