"""
Stability machinery replayed over finite vector spaces.

G = GL_(n+1)(F_q) acts on X = F_q^(n+1) minus zero, and C(X) is the ordered
simplicial complex of X.  This module builds C(X), its dimension filtration,
the bottom-row complex on G-orbits of simplices, and a few checks around
them.  Over finite fields the stability theorems themselves need not hold,
so results that depend on an infinite field are reported, not asserted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeOverflow, NotIndependent, TooLarge
from .exactla import FinAbGroup, Matrix, ZZ, hstack, kernel_basis, subquotient
from .complexes import ChainComplex, SimplicialGComplex, chain_boundary, join, ordered_simplicial
from .groupcore import (GroupAction, VectorSpaceOverFq, general_linear_group, gl_mapping_witness,
                        orbit_decompose, rank_mod_q, subgroup, trivial_action, trivial_group,
                        tuple_from_index, tuple_index)

TUPLE_CAP = 200_000


# ---------------------------------------------------------------------------
# the vector orbit complex
# ---------------------------------------------------------------------------

def vector_orbit_complex(n, q, P, cap=TUPLE_CAP) -> SimplicialGComplex:
    """C(X) for X = F_q^(n+1) minus zero with the GL_(n+1)(F_q) action."""
    space = VectorSpaceOverFq(q, n + 1)
    if len(space.nonzero) ** (P + 1) > cap:
        raise TooLarge(f"{len(space.nonzero)}^{P + 1} simplices exceed cap {cap}")
    action = space.gl_action()
    cx = ordered_simplicial(action, P, cap)
    cx.space = space
    return cx


def join_homotopy_check(cx: SimplicialGComplex, max_degree=None):
    """Count simplices where d(x#c) = c - x#(dc) (degree >= 1) or
    d(x#(y)) = (y) - (x) (degree 0) fails, over every point x.

    Returns ``(checked, failures)``.
    """
    top = cx.P if max_degree is None else min(max_degree, cx.P)
    checked = fails = 0
    for p in range(top + 1):
        for idx in range(cx.rank(p)):
            c = {cx.simplex(p, idx): 1}
            for x in range(cx.s):
                lhs = chain_boundary(join(x, c))
                if p == 0:
                    y = next(iter(c))
                    rhs = {}
                    rhs[y] = rhs.get(y, 0) + 1
                    rhs[(x,)] = rhs.get((x,), 0) - 1
                else:
                    rhs = dict(c)
                    for t, v in join(x, chain_boundary(c)).items():
                        rhs[t] = rhs.get(t, 0) - v
                rhs = {t: v for t, v in rhs.items() if v}
                checked += 1
                if lhs != rhs:
                    fails += 1
    return checked, fails


# ---------------------------------------------------------------------------
# dimension filtration
# ---------------------------------------------------------------------------

def simplex_dimension(chain, space: VectorSpaceOverFq):
    """|c|: the largest span dimension among the simplices of a chain.

    ``chain`` is a tuple of vectors or a ``{tuple of vectors: coef}`` dict.
    """
    if isinstance(chain, tuple):
        chain = {chain: 1}
    dims = [space.span_dim(t) for t, c in chain.items() if c]
    return max(dims, default=0)


def filtration_levels(cx: SimplicialGComplex):
    """Level |c| - 1 of every simplex, per degree (so F^l = {|c| <= l+1})."""
    space = cx.space
    vecs = space.nonzero
    out = []
    for p in range(cx.P + 1):
        out.append([space.span_dim([vecs[i] for i in cx.simplex(p, idx)]) - 1
                    for idx in range(cx.rank(p))])
    return out


def filtration(cx: SimplicialGComplex):
    """The dimension filtration as a FilteredComplex over Z."""
    from .spectral import FilteredComplex
    return FilteredComplex(cx.underlying(), filtration_levels(cx))


# ---------------------------------------------------------------------------
# bottom row: complex on orbit labels
# ---------------------------------------------------------------------------

@dataclass
class OrbitRowComplex:
    """Free abelian groups on orbits [c] with d1[c] = [d_C c]."""

    labels: list            # per degree: list of representative tuples (point indices)
    dims: list              # per degree: |[c]| for each label
    complex: ChainComplex
    decomps: list = field(repr=False, default=None)

    def orbit_counts(self):
        return [len(l) for l in self.labels]

    def d1_squared_zero(self):
        C = self.complex
        return all(C.d[k - 1].matmul(C.d[k]).is_zero() for k in range(2, C.N + 1))

    def label_of(self, p, t):
        dec = self.decomps[p]
        return int(dec.orbit_of[tuple_index(t, dec.set_size)])

    def truncated(self, k):
        """The subcomplex spanned by orbits with |[c]| <= k + 1."""
        keep = [[i for i, d in enumerate(ds) if d <= k + 1] for ds in self.dims]
        diffs = {}
        for p in range(1, self.complex.N + 1):
            diffs[p] = self.complex.d[p].select_rows(keep[p - 1]).select_columns(keep[p])
        return ChainComplex(ZZ, [len(x) for x in keep], diffs, bounded=False), keep


def orbit_row_complex(n, q, P, diagnostic_trivial=False, cap=TUPLE_CAP) -> OrbitRowComplex:
    """Bottom-row complex Z B_p for GL_(n+1)(F_q) acting on C(X), degrees 0..P.

    With ``diagnostic_trivial`` the trivial group acts instead, so the orbit
    complex is C(X) itself.
    """
    cx = vector_orbit_complex(n, q, P, cap)
    action = cx.action
    if diagnostic_trivial:
        action = trivial_action(trivial_group(), cx.s)
    space = cx.space
    decs = [orbit_decompose(action, p, cap=cap) for p in range(P + 1)]
    labels, dims = [], []
    for p, dec in enumerate(decs):
        reps = dec.rep_tuples()
        labels.append(reps)
        dims.append([space.span_dim([space.nonzero[i] for i in t]) for t in reps])
    diffs = {}
    for p in range(1, P + 1):
        dec_lo = decs[p - 1]
        cols = {}
        for j, t in enumerate(labels[p]):
            col = {}
            for f, c in cx.boundary_tuple(t).items():
                lab = int(dec_lo.orbit_of[tuple_index(f, cx.s)])
                col[lab] = col.get(lab, 0) + c
            col = {i: v for i, v in col.items() if v}
            if col:
                cols[j] = col
        diffs[p] = Matrix(len(labels[p - 1]), len(labels[p]), cols)
    C = ChainComplex(ZZ, [len(l) for l in labels], diffs, bounded=False)
    out = OrbitRowComplex(labels, dims, C, decs)
    out.simplicial = cx
    out.action = action
    return out


# ---------------------------------------------------------------------------
# homology of the dimension-filtered bottom row
# ---------------------------------------------------------------------------

@dataclass
class RowHomologyReport:
    n: int
    q: int
    k: int
    L: int
    homology: list
    oracle: list
    agrees: bool
    k_acyclic: bool


def _coinvariant_homology(cx: SimplicialGComplex, levels, k, L, gens):
    """Oracle: homology of (F^k C)_G computed inside F^k C itself.

    H_p = {x in F^k C_p : dx in I_(p-1)} / (I_p + d F^k C_(p+1)) with
    I = span(g c - c) over the given generators.
    """
    keep = [[i for i, lv in enumerate(levels[p]) if lv <= k] for p in range(L + 2)]
    pos = [{i: a for a, i in enumerate(kp)} for kp in keep]

    def I_gens(p):
        cols = []
        for i in keep[p]:
            t = cx.simplex(p, i)
            for g in gens:
                u = cx.act(g, t)
                j = cx.index(u)
                if j != i:
                    cols.append({pos[p][j]: 1, pos[p][i]: -1})
        return Matrix.from_columns(len(keep[p]), cols)

    def d(p):
        full = cx.boundary_matrix(p)
        return full.select_rows(keep[p - 1]).select_columns(keep[p])

    out = []
    for p in range(L + 1):
        Ip = I_gens(p)
        if p == 0:
            num = Matrix.identity(len(keep[0]))
        else:
            Dp = d(p)
            J = I_gens(p - 1)
            block = hstack([Dp, J.scale(-1)], nrows=Dp.nrows)
            K = kernel_basis(block)
            num = K.select_rows(list(range(Dp.ncols)))
        den = hstack([Ip, d(p + 1)], nrows=len(keep[p]))
        num = hstack([num, Ip], nrows=len(keep[p]))
        out.append(subquotient(num, den))
    return out


def row_filtration_homology(n, q, k, L) -> RowHomologyReport:
    """Homology of F^k of the bottom-row complex up to degree L, with an
    independent coinvariant oracle and the k-acyclicity verdict.

    The verdict means: H_0 = Z and H_i = 0 for 1 <= i <= min(k, L).  It is
    reported, never asserted.
    """
    orc = orbit_row_complex(n, q, L + 1)
    C, _ = orc.truncated(k)
    hom = [C.homology(p) for p in range(L + 1)]
    cx = orc.simplicial
    levels = filtration_levels(cx)
    G = cx.group
    gens = _generators(G)
    oracle = _coinvariant_homology(cx, levels, k, L, gens)
    verdict = hom[0] == FinAbGroup(1) and all(h.is_trivial for h in hom[1:min(k, L) + 1])
    return RowHomologyReport(n, q, k, L, hom, oracle, hom == oracle, verdict)


def _generators(G):
    gens = []
    span = [G.identity]
    for g in range(G.order):
        if len(span) == G.order:
            break
        if g not in set(span):
            gens.append(g)
            span = G.generated_subgroup(gens)
    return gens


# ---------------------------------------------------------------------------
# E^1 structure through stabilizers
# ---------------------------------------------------------------------------

@dataclass
class E1Row:
    orbit: tuple
    stabilizer_order: int
    stabilizer_homology: list
    shapiro_homology: list
    agrees: bool
    small_gl: str = ""
    small_gl_homology: list = None


@dataclass
class E1Report:
    rows: list
    direct_sum: list
    total: list
    sum_agrees: bool


def e1_structure_check(n, q, p_deg, q_deg) -> E1Report:
    """Compare H_j(G, Z[G c]) with H_j(G_c) for each orbit c in B_p, and
    H_j(G, C_p) with the direct sum over orbits, for j <= q_deg.

    The comparison with GL_(n+1-|c|) is informational only.
    """
    from .gmodule import permutation_module, trivial_module
    from .groupcore import coset_action
    from .homology import group_homology

    orc = orbit_row_complex(n, q, p_deg)
    cx = orc.simplicial
    G = cx.group
    rows = []
    total_sum = [FinAbGroup() for _ in range(q_deg + 1)]
    for t, dim in zip(orc.labels[p_deg], orc.dims[p_deg]):
        stab = [g for g in range(G.order) if cx.act(g, t) == t]
        S, emb = subgroup(G, stab)
        hs = group_homology(S, trivial_module(S), q_deg).degrees
        perm = coset_action(G, stab)
        hg = group_homology(G, permutation_module(perm), q_deg).degrees
        m = n + 1 - dim
        small, small_h = f"GL_{m}(F_{q})", None
        if m >= 1:
            try:
                Gm = general_linear_group(m, q)
                small_h = group_homology(Gm, trivial_module(Gm), q_deg).degrees
            except TooLarge:
                small_h = None
        rows.append(E1Row(t, len(stab), hs, hg, hs == hg, small, small_h))
        total_sum = [a + b for a, b in zip(total_sum, hs)]
    Cp = cx.module(p_deg)
    total = group_homology(G, Cp, q_deg).degrees
    return E1Report(rows, total_sum, total, total_sum == total)


# ---------------------------------------------------------------------------
# persistence and factor-complex checks
# ---------------------------------------------------------------------------

@dataclass
class PersistenceReport:
    pairs: int
    witnessed: int
    d1_zero: bool


def persistence_check(n, q) -> PersistenceReport:
    """d1 from the B_1 row into column 0 is zero at q = 0: for each orbit
    [(v, w)], a witness sigma with sigma v = w shows [w] - [v] = 0."""
    orc = orbit_row_complex(n, q, 1)
    space = orc.simplicial.space
    witnessed = 0
    for v_i, w_i in orc.labels[1]:
        v, w = space.nonzero[v_i], space.nonzero[w_i]
        sigma, _ = gl_mapping_witness([v], [w], space)
        if space.apply(sigma, v) == w:
            witnessed += 1
    d1 = orc.complex.d[1]
    return PersistenceReport(len(orc.labels[1]), witnessed, d1.is_zero())


def same_gl_orbit(t, u, q):
    """Tuples of vectors lie in one GL-orbit iff they satisfy the same linear relations."""
    if len(t) != len(u):
        return False
    rt = rank_mod_q(list(zip(*t)), q) if t else 0
    ru = rank_mod_q(list(zip(*u)), q) if u else 0
    both = rank_mod_q(list(zip(*t)) + list(zip(*u)), q) if t else 0
    return rt == ru == both


@dataclass
class FactorBoundaryReport:
    simplex: tuple
    surviving_faces: dict
    A: tuple
    B: tuple
    A_equals_B: bool
    identity_holds: bool


def factor_boundary_check(vectors, q) -> FactorBoundaryReport:
    """In F^k / F^(k-1), for independent c = (v_0..v_k):
    d[(v0+v1, v0, v1, .., vk)] = [c] - [A] + [B] with [A] = [B]."""
    vs = [tuple(x % q for x in v) for v in vectors]
    k = len(vs) - 1
    if k < 1:
        raise DegreeOverflow("need at least two vectors")
    if rank_mod_q(vs, q) != k + 1:
        raise NotIndependent("vectors are not linearly independent")
    s = tuple((a + b) % q for a, b in zip(vs[0], vs[1]))
    big = (s,) + tuple(vs)
    faces = {}
    for j in range(len(big)):
        f = big[:j] + big[j + 1:]
        if rank_mod_q(list(f), q) == k + 1:       # lower-dimensional faces vanish
            faces[f] = faces.get(f, 0) + (-1 if j % 2 else 1)
    A = (s,) + tuple(vs[1:])
    B = (s, vs[0]) + tuple(vs[2:])
    c = tuple(vs)
    expected = {c: 1, A: -1}
    expected[B] = expected.get(B, 0) + 1
    same = same_gl_orbit(A, B, q)
    if same:
        sigma, _ = gl_mapping_witness(list(A), list(B), VectorSpaceOverFq(q, len(vs[0])))
        sp = VectorSpaceOverFq(q, len(vs[0]))
        same = all(sp.apply(sigma, a) == b for a, b in zip(A, B))
    return FactorBoundaryReport(big, faces, A, B, same, faces == {x: v for x, v in expected.items() if v})


# ---------------------------------------------------------------------------
# counting sub-lemma
# ---------------------------------------------------------------------------

def min_weight_modular(p, m, return_witness=False):
    """Least sum of n_j over nonzero (n_0..n_(m-1)) with 0 <= n_j < p*m and
    sum n_j p^j divisible by p^m - 1."""
    if (p * m) ** m > 2_000_000:
        raise TooLarge(f"(p*m)^m = {(p * m) ** m} candidates is too many")
    mod = p ** m - 1
    best, wit = None, None
    for ns in itertools.product(range(p * m), repeat=m):
        if not any(ns):
            continue
        if sum(n * p ** j for j, n in enumerate(ns)) % mod:
            continue
        w = sum(ns)
        if best is None or w < best:
            best, wit = w, ns
    return (best, wit) if return_witness else best


# ---------------------------------------------------------------------------
# documented non-example
# ---------------------------------------------------------------------------

def gl_h1_non_example():
    """H_1(GL_2(F_2)) = Z/2 but H_1(GL_3(F_2)) = 0: the stabilization map in
    degree one is not an isomorphism over this finite field."""
    from .groupcore import abelianization
    return {"GL_2(F_2)": abelianization(general_linear_group(2, 2)),
            "GL_3(F_2)": abelianization(general_linear_group(3, 2))}
