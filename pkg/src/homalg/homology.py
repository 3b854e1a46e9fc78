"""
Group homology and cohomology through the bar resolution, with maps induced
on homology (Shapiro transport, conjugation, quotient actions), the
Pontryagin product for abelian groups and universal-coefficient checks.

Example
-------
>>> from homalg.groupcore import cyclic
>>> from homalg.gmodule import trivial_module
>>> [str(x) for x in group_homology(cyclic(2), trivial_module(cyclic(2)), 3).degrees]
['Z', 'Z/2', '0', 'Z/2']
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import (GroupMismatch, NotACycle, NotAbelian, NotNormal, RingUnsupported)
from .exactla import (FinAbGroup, HomologyPresentation, Matrix, ZZ, hstack,
                      invariant_factors, parse_ring, rank)
from .complexes import DEFAULT_CAP, apply_coefficients, apply_hom, bar_resolution
from .gmodule import GModule, induced_module, restrict_module, trivial_module
from .groupcore import FiniteGroup, quotient_group, subgroup, tuple_index


# ---------------------------------------------------------------------------
# results and caching
# ---------------------------------------------------------------------------

@dataclass
class HomologyResult:
    """Per-degree homology: FinAbGroup over Z, dimensions over a field."""

    group: FiniteGroup
    module: GModule
    degrees: list
    ring: object
    provenance: dict = field(default_factory=dict)

    def to_json(self):
        out = self.ring.to_json()
        if self.ring.is_field:
            out["degrees"] = [{"dimension": d} for d in self.degrees]
        else:
            out["degrees"] = [g.to_json() for g in self.degrees]
        out["provenance"] = self.provenance
        return out

    def __str__(self):
        return "[" + ", ".join(str(d) for d in self.degrees) + "]"


def _key(G, M, N, kind):
    blob = json.dumps({"t": G.table, "m": M.to_json(), "n": N, "k": kind}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


_CACHE: dict = {}


def clear_cache():
    _CACHE.clear()


class BarHomology:
    """F(G) (x)_G M truncated so that H_0 .. H_N are valid, with lazily built
    homology presentations for computing induced maps."""

    def __init__(self, G: FiniteGroup, M: GModule, N: int, cap=DEFAULT_CAP):
        if M.group != G:
            raise GroupMismatch("module is over a different group")
        self.G, self.M, self.N = G, M, N
        self.ring = M.ring
        self.F = bar_resolution(G, N + 1, cap)
        self.complex = apply_coefficients(self.F, M)
        self._pres = {}

    def presentation(self, k) -> HomologyPresentation:
        if k not in self._pres:
            C = self.complex
            self._pres[k] = HomologyPresentation(C.differential(k + 1), C.differential(k),
                                                 self.ring, check=False)
        return self._pres[k]

    def values(self):
        return [self.complex.homology(k) for k in range(self.N + 1)]

    def basis_index(self, gs, a=0):
        """Index of (1, g_1, ..., g_k) (x) m_a."""
        return tuple_index(gs, self.G.order) * self.M.rank + a


def bar_homology(G, M, N, cap=DEFAULT_CAP) -> BarHomology:
    key = ("bar",) + (_key(G, M, N, "bar"),)
    if key not in _CACHE:
        _CACHE[key] = BarHomology(G, M, N, cap)
    return _CACHE[key]


def group_homology(G: FiniteGroup, M: GModule = None, N: int = 0, cap=DEFAULT_CAP) -> HomologyResult:
    """H_0 .. H_N of G with coefficients in M (trivial Z by default)."""
    if M is None:
        M = trivial_module(G)
    key = ("h", _key(G, M, N, "h"))
    if key not in _CACHE:
        bh = BarHomology(G, M, N, cap)
        _CACHE[key] = HomologyResult(G, M, bh.values(), M.ring,
                                     {"resolution": "bar", "truncation": N + 1})
    return _CACHE[key]


def group_cohomology(G: FiniteGroup, M: GModule = None, N: int = 0, cap=DEFAULT_CAP) -> HomologyResult:
    """H^0 .. H^N via Hom_G(F(G), M)."""
    if M is None:
        M = trivial_module(G)
    key = ("c", _key(G, M, N, "c"))
    if key not in _CACHE:
        F = bar_resolution(G, N + 1, cap)
        cc = apply_hom(F, M)
        _CACHE[key] = HomologyResult(G, M, [cc.cohomology(k) for k in range(N + 1)], M.ring,
                                     {"resolution": "bar", "truncation": N + 1, "cochain": True})
    return _CACHE[key]


# ---------------------------------------------------------------------------
# induced maps
# ---------------------------------------------------------------------------

@dataclass
class HomologyClassMap:
    """Matrices of a chain map on homology coordinates, one per degree."""

    source: dict
    target: dict
    matrices: dict

    def is_identity(self, k):
        A = self.matrices[k]
        src = self.source[k]
        n = src.dimension
        mods = src.moduli
        for i in range(n):
            for j in range(n):
                want = int(i == j)
                x = A[i][j] - want
                m = mods[i]
                if (x % m if m > 1 else x):
                    return False
        return True

    def is_isomorphism(self, k):
        return _is_iso(self.matrices[k], self.source[k], self.target[k])


def _is_iso(A, src, tgt):
    """Iso test: equal group type and surjective (finitely generated abelian
    groups are Hopfian, so a surjection between equal types is bijective)."""
    if src.group != tgt.group:
        return False
    n = tgt.dimension
    if n == 0:
        return True
    ring = tgt.ring
    M = Matrix.from_dense([list(r) for r in A], ncols=src.dimension) if src.dimension else Matrix.zeros(n, 0)
    if ring.is_field:
        return rank(M, ring) == n
    rels = Matrix(n, n, {i: {i: m} for i, m in enumerate(tgt.moduli) if m > 1})
    inv = invariant_factors(hstack([M, rels], nrows=n))
    return len(inv) == n and all(d == 1 for d in inv)


def induced_matrix(chain_map, src: HomologyPresentation, tgt: HomologyPresentation,
                   src_d_in: Matrix = None):
    """Homology matrix of a chain map given as a function ``vec -> vec``.

    Raises NotACycle if a generator does not map to a cycle; if ``src_d_in``
    is given, also checks that boundaries map to boundaries.
    """
    cols = [tgt.coords(chain_map(z)) for z in src.generators()]
    A = [[cols[j][i] for j in range(len(cols))] for i in range(tgt.dimension)]
    if src_d_in is not None:
        for j in range(src_d_in.ncols):
            c = src_d_in.col(j)
            if c and any(tgt.coords(chain_map(dict(c)))):
                raise NotACycle("chain map does not send boundaries to boundaries")
    return A


def _linear(entries):
    """Chain map from ``{source index: {target index: value}}``."""
    def f(vec):
        out = {}
        for i, x in vec.items():
            for j, v in entries(i).items():
                out[j] = out.get(j, 0) + v * x
        return {j: v for j, v in out.items() if v}
    return f


def shapiro_transport(G: FiniteGroup, H_elems, M: GModule, N: int, verify=True):
    """H_*(H, M) -> H_*(G, ZG (x)_H M), (h (x)_H m) -> (h (x)_G (1 (x)_H m))."""
    H, emb = subgroup(G, H_elems)
    if M.group != H:
        raise GroupMismatch("module is not over the given subgroup")
    IM = induced_module(G, H_elems, M)
    src = bar_homology(H, M, N)
    tgt = bar_homology(G, IM, N)
    r = M.rank
    hs, gs = H.order, G.order

    mats, sp, tp = {}, {}, {}
    for k in range(N + 1):
        def entries(i, k=k):
            b, a = divmod(i, r)
            return {_reindex(b, k, hs, gs, emb) * IM.rank + a: 1}

        f = _linear(entries)
        sp[k], tp[k] = src.presentation(k), tgt.presentation(k)
        mats[k] = induced_matrix(f, sp[k], tp[k], src.complex.differential(k + 1) if verify else None)
    return HomologyClassMap(sp, tp, mats)


def _reindex(b, k, ns, nt, images):
    """Send the mixed-radix index of (x_1..x_k) (base ns) to that of
    (images[x_1]..images[x_k]) (base nt)."""
    out = 0
    mult = 1
    for _ in range(k):
        b, d = divmod(b, ns)
        out += images[d] * mult
        mult *= nt
    return out


def _conj_map(G, g, M, k, sub=None):
    """Degree-k chain map (1, h_1..h_k) (x) m -> (1, c_g h_1, ..) (x) g m.

    ``sub`` = (H, emb, pos, MG) restricts to the bar complex of a normal
    subgroup H, with g acting through the G-module MG.
    """
    r = M.rank
    if sub is not None:
        H, emb, pos, MG = sub
        A = MG.action[g]
        n = H.order
        cg = [pos[G.conj(g, emb[h])] for h in range(n)]
    else:
        A = M.action[g]
        n = G.order
        cg = [G.conj(g, h) for h in range(n)]

    def entries(i):
        b, a = divmod(i, r)
        out = _reindex(b, k, n, n, cg)
        return {out * r + c: v for c, v in A.col(a).items()}

    return _linear(entries)


def conjugation_action_map(G: FiniteGroup, g, M: GModule, N: int, verify=True):
    """Map on H_*(G, M) induced by f (x) m -> c_g(f) (x) g m."""
    bh = bar_homology(G, M, N)
    mats, pres = {}, {}
    for k in range(N + 1):
        f = _conj_map(G, g, M, k)
        pres[k] = bh.presentation(k)
        mats[k] = induced_matrix(f, pres[k], pres[k], bh.complex.differential(k + 1) if verify else None)
    return HomologyClassMap(pres, pres, mats)


@dataclass
class QuotientAction:
    """Action of G/H on H_q(H, M): ``matrices[c]`` for each coset index c."""

    quotient: FiniteGroup
    projection: list
    matrices: list
    presentation: HomologyPresentation
    degree: int

    def as_module(self):
        """The action as a GModule over G/H (field coefficients only)."""
        ring = self.presentation.ring
        if not ring.is_field:
            raise RingUnsupported("H_q(H, M) is a module only over a field here")
        n = self.presentation.dimension
        mats = [Matrix.from_dense(A, ncols=n) if n else Matrix.zeros(0, 0) for A in self.matrices]
        return GModule(self.quotient, ring, n, mats)


def quotient_action_on_homology(G: FiniteGroup, H_elems, M: GModule, q: int, verify=True):
    """(gH, f (x)_H m) -> c_g(f) (x)_H g m on H_q(H, Res M), for M a G-module.

    Checks that every element of a coset induces the same matrix, which
    includes H acting trivially.
    """
    if not G.is_normal(H_elems):
        raise NotNormal("subgroup is not normal")
    if M.group != G:
        raise GroupMismatch("module must be over G")
    H, emb = subgroup(G, H_elems)
    pos = {x: i for i, x in enumerate(emb)}
    MH = restrict_module(H, emb, M)
    bh = bar_homology(H, MH, q)
    pres = bh.presentation(q)
    Q, proj = quotient_group(G, H_elems)
    mats = [None] * Q.order
    for g in range(G.order):
        f = _conj_map(G, g, MH, q, sub=(H, emb, pos, M))
        A = induced_matrix(f, pres, pres, bh.complex.differential(q + 1) if verify else None)
        A = _reduce_coords(A, pres)
        c = proj[g]
        if mats[c] is None:
            mats[c] = A
        elif mats[c] != A:
            raise NotNormal("action is not constant on cosets")
    return QuotientAction(Q, proj, mats, pres, q)


def _reduce_coords(A, pres):
    mods = pres.moduli
    return [[(x % mods[i]) if mods[i] > 1 else x for x in row] for i, row in enumerate(A)]


# ---------------------------------------------------------------------------
# Pontryagin product
# ---------------------------------------------------------------------------

@dataclass
class HomologyClass:
    """A class in H_k(G, R) for trivial R, with a cycle in the bar complex."""

    degree: int
    cycle: dict
    coords: list = None


def _shuffles(p, q):
    """Lattice paths as step strings ('a' = first factor) with shuffle signs."""
    out = []

    def rec(i, j, path, inv):
        if i == p and j == q:
            out.append((path, -1 if inv % 2 else 1))
            return
        if i < p:
            # an 'a' placed after j 'b' steps gives j inversions
            rec(i + 1, j, path + "a", inv + j)
        if j < q:
            rec(i, j + 1, path + "b", inv)

    rec(0, 0, "", 0)
    return out


def eilenberg_zilber_product(G: FiniteGroup, x: tuple, y: tuple):
    """Shuffle map followed by multiplication on homogeneous bar tuples.

    ``x`` = (x_0..x_p), ``y`` = (y_0..y_q); returns ``{tuple: sign}``.
    """
    p, q = len(x) - 1, len(y) - 1
    out = {}
    t = G.table
    for path, sgn in _shuffles(p, q):
        i = j = 0
        simplex = [t[x[0]][y[0]]]
        for step in path:
            if step == "a":
                i += 1
            else:
                j += 1
            simplex.append(t[x[i]][y[j]])
        key = tuple(simplex)
        out[key] = out.get(key, 0) + sgn
    return {k: v for k, v in out.items() if v}


def homology_classes(G: FiniteGroup, ring, k: int, N=None):
    """Basis classes of H_k(G, R) for the trivial module R."""
    ring = parse_ring(ring)
    bh = bar_homology(G, trivial_module(G, ring), max(k, N or 0))
    pres = bh.presentation(k)
    return [HomologyClass(k, z, pres.coords(z)) for z in pres.generators()]


def pontryagin_product(G: FiniteGroup, ring, a: HomologyClass, b: HomologyClass, N=None):
    """Product of classes of H_*(G, R) for abelian G and a field R."""
    ring = parse_ring(ring)
    if not G.is_abelian:
        raise NotAbelian("Pontryagin product needs an abelian group")
    if not ring.is_field:
        raise RingUnsupported("Pontryagin product is implemented over fields")
    p, q = a.degree, b.degree
    n = p + q
    bh = bar_homology(G, trivial_module(G, ring), max(n, N or 0))
    s = G.order
    for cls in (a, b):
        pres = bh.presentation(cls.degree)
        if not pres.is_cycle(cls.cycle):
            raise NotACycle(f"degree-{cls.degree} representative is not a cycle")
    out = {}
    e = G.identity
    for i, u in a.cycle.items():
        xs = (e,) + _digits(i, s, p)
        for j, v in b.cycle.items():
            ys = (e,) + _digits(j, s, q)
            for simplex, sg in eilenberg_zilber_product(G, xs, ys).items():
                key = tuple_index(simplex[1:], s)
                out[key] = out.get(key, 0) + sg * u * v
    out = {k: ring.normalize(v) for k, v in out.items() if ring.normalize(v)}
    pres = bh.presentation(n)
    return HomologyClass(n, out, pres.coords(out))


def _digits(i, s, length):
    out = [0] * length
    for j in range(length - 1, -1, -1):
        i, out[j] = divmod(i, s)
    return tuple(out)


# ---------------------------------------------------------------------------
# universal coefficients
# ---------------------------------------------------------------------------

@dataclass
class UCTRow:
    degree: int
    integral: FinAbGroup
    expected: int
    computed: int

    @property
    def passed(self):
        return self.expected == self.computed


def uct_compare(G: FiniteGroup, p: int, N: int):
    """Compare dim H_q(G, F_p) with rank + t_p(H_q(G, Z)) + t_p(H_{q-1}(G, Z))."""
    hz = group_homology(G, trivial_module(G, ZZ), N).degrees
    hp = group_homology(G, trivial_module(G, parse_ring(f"F{p}")), N).degrees
    rows = []
    for q in range(N + 1):
        exp = hz[q].free_rank + hz[q].p_torsion_count(p)
        if q >= 1:
            exp += hz[q - 1].p_torsion_count(p)
        rows.append(UCTRow(q, hz[q], exp, hp[q]))
    return rows
