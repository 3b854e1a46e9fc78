"""
Chain complexes and the constructions built on them.

``SimplicialGComplex`` is the ordered simplicial chain complex of a finite
G-set X: degree p is free on X^(p+1) with the diagonal action and the
alternating face differential.  The bar resolution is the special case
X = G with the regular action, whose G-basis in degree k consists of the
tuples (1, g_1, ..., g_k).

Tensoring with coefficients happens eagerly: ``apply_coefficients`` returns
plain matrices, indexed lexicographically by G-basis tuple and then by
module coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (CompositionNotZero, DegreeOverflow, GroupMismatch, RingMismatch,
                     ShapeMismatch, SignCheckFailed, TooLarge)
from .exactla import Matrix, ZZ, homology_at, parse_ring
from .gmodule import GModule, permutation_module
from .groupcore import FiniteGroup, GroupAction, regular_action, tuple_from_index, tuple_index

DEFAULT_CAP = 2_000_000


class ChainComplex:
    """Ranks in degrees 0..N and differentials d_k: C_k -> C_{k-1} (k = 1..N).

    ``bounded`` means the complex is genuinely zero above N; otherwise N is a
    truncation and homology is only available below N.
    """

    def __init__(self, ring, ranks, differentials, labels=None, bounded=True, check=True):
        self.ring = parse_ring(ring)
        self.ranks = list(ranks)
        self.N = len(self.ranks) - 1
        self.d = {}
        for k in range(1, self.N + 1):
            m = differentials.get(k) if isinstance(differentials, dict) else differentials[k - 1]
            if m is None:
                m = Matrix.zeros(self.ranks[k - 1], self.ranks[k])
            if m.shape != (self.ranks[k - 1], self.ranks[k]):
                raise ShapeMismatch(f"d_{k} has shape {m.shape}, expected "
                                    f"{(self.ranks[k - 1], self.ranks[k])}")
            self.d[k] = m.reduce(self.ring)
        self.labels = labels
        self.bounded = bounded
        self.blocks = None
        if check:
            self.check()

    @property
    def truncation_degree(self):
        return self.N

    def check(self):
        for k in range(2, self.N + 1):
            if not self.d[k - 1].matmul(self.d[k], self.ring).is_zero():
                raise CompositionNotZero(f"d_{k - 1} d_{k} != 0")
        return True

    def differential(self, k):
        """d_k, with zero maps outside the stored range."""
        if 1 <= k <= self.N:
            return self.d[k]
        lo = self.ranks[k - 1] if 0 <= k - 1 <= self.N else 0
        hi = self.ranks[k] if 0 <= k <= self.N else 0
        return Matrix.zeros(lo, hi)

    def max_homology_degree(self):
        return self.N if self.bounded else self.N - 1

    def homology(self, k, ring=None):
        ring = self.ring if ring is None else parse_ring(ring)
        if k < 0:
            return homology_at(Matrix.zeros(0, 0), Matrix.zeros(0, 0), ring)
        if k > self.max_homology_degree():
            raise DegreeOverflow(f"H_{k} needs d_{k + 1}, beyond truncation {self.N}")
        return homology_at(self.differential(k + 1).reduce(ring),
                           self.differential(k).reduce(ring), ring)

    def homology_all(self, ring=None):
        return [self.homology(k, ring) for k in range(self.max_homology_degree() + 1)]

    def change_ring(self, ring):
        ring = parse_ring(ring)
        if ring == self.ring:
            return self
        if self.ring != ZZ:
            raise RingMismatch(f"cannot change ring from {self.ring} to {ring}")
        out = ChainComplex(ring, self.ranks, self.d, self.labels, self.bounded, check=False)
        out.blocks = self.blocks
        return out

    def to_json(self):
        out = self.ring.to_json()
        out["ranks"] = self.ranks
        out["differentials"] = [self.d[k].to_json() for k in range(1, self.N + 1)]
        out["bounded"] = self.bounded
        if self.labels is not None:
            out["labels"] = self.labels
        return out

    @classmethod
    def from_json(cls, obj):
        ring = parse_ring(obj.get("ring", "Z"), obj.get("p"))
        diffs = [Matrix.from_json(m) for m in obj["differentials"]]
        return cls(ring, obj["ranks"], diffs, obj.get("labels"), obj.get("bounded", True))

    def __repr__(self):
        return f"ChainComplex({self.ring}, ranks={self.ranks})"


class CochainComplex:
    """Ranks in degrees 0..N and coboundaries delta_k: C^k -> C^(k+1) (k < N)."""

    def __init__(self, ring, ranks, coboundaries, bounded=False, check=True):
        self.ring = parse_ring(ring)
        self.ranks = list(ranks)
        self.N = len(self.ranks) - 1
        self.delta = {k: coboundaries[k].reduce(self.ring) for k in range(self.N)}
        self.bounded = bounded
        if check:
            for k in range(1, self.N):
                if not self.delta[k].matmul(self.delta[k - 1], self.ring).is_zero():
                    raise CompositionNotZero(f"delta_{k} delta_{k - 1} != 0")

    def cohomology(self, k):
        if k >= self.N and not self.bounded:
            raise DegreeOverflow(f"H^{k} needs delta_{k}, beyond truncation {self.N}")
        d_in = self.delta[k - 1] if k >= 1 else Matrix.zeros(self.ranks[0], 0)
        d_out = self.delta[k] if k < self.N else Matrix.zeros(0, self.ranks[k])
        return homology_at(d_in, d_out, self.ring)


# ---------------------------------------------------------------------------
# simplicial G-complexes
# ---------------------------------------------------------------------------

class SimplicialGComplex:
    """Ordered simplicial complex of a G-set, truncated at degree P.

    Simplices of degree p are (p+1)-tuples, indexed in mixed radix.  When the
    action is free, ``free_basis`` and ``decompose`` expose a G-basis: the
    tuples whose first entry is an orbit representative of X.
    """

    def __init__(self, action: GroupAction, P: int, cap=DEFAULT_CAP):
        self.action = action
        self.group = action.group
        self.s = action.set_size
        self.P = P
        if self.s ** (P + 1) > cap:
            raise TooLarge(f"{self.s}^{P + 1} simplices exceed cap {cap}")
        G = self.group
        self.is_free = all(len(action.stabilizer(x)) == 1 for x in range(self.s))
        if self.is_free:
            self._orbit_reps = []
            self._carrier = [None] * self.s     # x = carrier[x] . rep
            self._rep_pos = [None] * self.s
            for x in range(self.s):
                if self._carrier[x] is not None:
                    continue
                k = len(self._orbit_reps)
                self._orbit_reps.append(x)
                for g in range(G.order):
                    y = action.perm[g][x]
                    self._carrier[y] = g
                    self._rep_pos[y] = k
        self._complex = None

    # underlying complex ----------------------------------------------------
    def rank(self, p):
        return self.s ** (p + 1)

    def simplex(self, p, idx):
        return tuple_from_index(idx, self.s, p + 1)

    def index(self, t):
        return tuple_index(t, self.s)

    def boundary_tuple(self, t):
        """Alternating face sum of a tuple as ``{tuple: coefficient}``."""
        out = {}
        for j in range(len(t)):
            f = t[:j] + t[j + 1:]
            c = out.get(f, 0) + (-1 if j % 2 else 1)
            if c:
                out[f] = c
            else:
                out.pop(f)
        return out

    def boundary_matrix(self, p):
        """d_p: C_p -> C_{p-1} on the underlying Z-module."""
        s = self.s
        cols = {}
        for idx in range(self.rank(p)):
            t = tuple_from_index(idx, s, p + 1)
            col = {tuple_index(f, s): c for f, c in self.boundary_tuple(t).items()}
            if col:
                cols[idx] = col
        return Matrix(self.rank(p - 1), self.rank(p), cols)

    def underlying(self):
        """The Z-complex C_0 <- C_1 <- ... <- C_P (truncated)."""
        if self._complex is None:
            self._complex = ChainComplex(ZZ, [self.rank(p) for p in range(self.P + 1)],
                                         {p: self.boundary_matrix(p) for p in range(1, self.P + 1)},
                                         bounded=False, check=False)
        return self._complex

    def augmentation(self):
        """epsilon: C_0 -> Z, every point to 1."""
        return Matrix(1, self.s, {x: {0: 1} for x in range(self.s)})

    def augmented(self):
        """Underlying complex with Z placed in degree -1 (shifted to degree 0)."""
        base = self.underlying()
        diffs = {1: self.augmentation()}
        for p in range(1, self.P + 1):
            diffs[p + 1] = base.d[p]
        return ChainComplex(ZZ, [1] + base.ranks, diffs, bounded=False, check=False)

    def act(self, g, t):
        pg = self.action.perm[g]
        return tuple(pg[x] for x in t)

    def module(self, p, ring=ZZ):
        """C_p as a permutation G-module."""
        s = self.s
        perms = []
        for g in range(self.group.order):
            pg = self.action.perm[g]
            perm = []
            for idx in range(self.rank(p)):
                t = tuple_from_index(idx, s, p + 1)
                perm.append(tuple_index(tuple(pg[x] for x in t), s))
            perms.append(perm)
        return permutation_module(GroupAction(self.group, self.rank(p), perms), ring)

    # free structure ----------------------------------------------------------
    def free_rank(self, p):
        self._need_free()
        return len(self._orbit_reps) * self.s ** p

    def free_basis(self, p):
        """G-basis tuples of degree p, in index order."""
        self._need_free()
        out = []
        for r in self._orbit_reps:
            for rest in range(self.s ** p):
                out.append((r,) + tuple_from_index(rest, self.s, p))
        return out

    def basis_index(self, t):
        """Position of a G-basis tuple among ``free_basis(len(t)-1)``."""
        p = len(t) - 1
        return self._rep_pos[t[0]] * self.s ** p + tuple_index(t[1:], self.s)

    def decompose(self, t):
        """Write a tuple as g . b with b a G-basis tuple; returns (g, index of b)."""
        self._need_free()
        g = self._carrier[t[0]]
        ginv = self.group.inverse[g]
        pg = self.action.perm[ginv]
        b = tuple(pg[x] for x in t)
        return g, self.basis_index(b)

    def face_terms(self, p):
        """For each G-basis element b of degree p: list of (coef, g, b') with
        d b = sum coef . g . b'."""
        self._need_free()
        out = []
        for t in self.free_basis(p):
            terms = []
            for j in range(p + 1):
                f = t[:j] + t[j + 1:]
                g, bi = self.decompose(f)
                terms.append((-1 if j % 2 else 1, g, bi))
            out.append(terms)
        return out

    def _need_free(self):
        if not self.is_free:
            raise GroupMismatch("operation needs a free G-action")


def bar_resolution(G: FiniteGroup, N: int, cap=DEFAULT_CAP) -> SimplicialGComplex:
    """Standard resolution F_k = Z[G^(k+1)], truncated at degree N."""
    if G.order ** (N + 1) > cap:
        raise TooLarge(f"|G|^{N + 1} = {G.order ** (N + 1)} exceeds cap {cap}")
    F = SimplicialGComplex(regular_action(G), N, cap=max(cap, G.order ** (N + 1)))
    # reorder orbit reps so that the basis starts with the identity
    F._orbit_reps = [G.identity]
    F._carrier = list(range(G.order))       # x = x . 1
    F._rep_pos = [0] * G.order
    return F


def ordered_simplicial(action: GroupAction, P: int, cap=DEFAULT_CAP) -> SimplicialGComplex:
    return SimplicialGComplex(action, P, cap)


def join(x, chain, P=None):
    """x # c: prepend ``x`` to every simplex of a chain ``{tuple: coef}``."""
    out = {}
    for t, c in chain.items():
        if P is not None and len(t) > P:
            raise DegreeOverflow(f"join would leave the truncation degree {P}")
        out[(x,) + tuple(t)] = c
    return out


def chain_boundary(chain):
    """Alternating face sum of a chain given as ``{tuple: coef}``."""
    out = {}
    for t, c in chain.items():
        if len(t) <= 1:
            continue
        for j in range(len(t)):
            f = t[:j] + t[j + 1:]
            out[f] = out.get(f, 0) + (-c if j % 2 else c)
    return {t: c for t, c in out.items() if c}


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------

def _tensor_boundary(F: SimplicialGComplex, k, M: GModule, terms=None):
    """Matrix of d_k (x) id on F_k (x)_G M with index b * rank(M) + a."""
    r = M.rank
    ring = M.ring
    if terms is None:
        terms = F.face_terms(k)
    inv = F.group.inverse
    # columns of g^-1 acting on M, cached per group element
    acol = [[M.action[inv[g]].col(a) for a in range(r)] for g in range(F.group.order)]
    cols = {}
    for b, tl in enumerate(terms):
        for a in range(r):
            col = {}
            for coef, g, bp in tl:
                base = bp * r
                for c, v in acol[g][a].items():
                    key = base + c
                    col[key] = col.get(key, 0) + coef * v
            col = {i: ring.normalize(v) for i, v in col.items() if ring.normalize(v)}
            if col:
                cols[b * r + a] = col
    return Matrix(F.free_rank(k - 1) * r, F.free_rank(k) * r, cols)


def apply_coefficients(F: SimplicialGComplex, M: GModule, N=None) -> ChainComplex:
    """F (x)_G M as a chain complex over M's ring, with m.g := g^-1 m."""
    if M.group != F.group:
        raise GroupMismatch("resolution and module are over different groups")
    N = F.P if N is None else min(N, F.P)
    ranks = [F.free_rank(k) * M.rank for k in range(N + 1)]
    diffs = {k: _tensor_boundary(F, k, M) for k in range(1, N + 1)}
    return ChainComplex(M.ring, ranks, diffs, bounded=False, check=False)


def apply_hom(F: SimplicialGComplex, M: GModule, N=None) -> CochainComplex:
    """Hom_G(F, M): a cochain is the list of values on the G-basis.

    (delta phi)(b) = phi(d b) = sum coef . g . phi(b') for d b = sum coef g b'.
    """
    if M.group != F.group:
        raise GroupMismatch("resolution and module are over different groups")
    N = F.P if N is None else min(N, F.P)
    r = M.rank
    ring = M.ring
    ranks = [F.free_rank(k) * r for k in range(N + 1)]
    cob = {}
    for k in range(N):
        terms = F.face_terms(k + 1)
        rows = {}
        # delta_k: C^k -> C^(k+1); column (b', a) of phi, row (b, c)
        cols = {}
        for b, tl in enumerate(terms):
            for coef, g, bp in tl:
                A = M.action[g]
                for a in range(r):
                    for c, v in A.col(a).items():
                        col = cols.setdefault(bp * r + a, {})
                        key = b * r + c
                        col[key] = col.get(key, 0) + coef * v
        cols = {j: {i: ring.normalize(v) for i, v in c.items() if ring.normalize(v)}
                for j, c in cols.items()}
        cob[k] = Matrix(ranks[k + 1], ranks[k], {j: c for j, c in cols.items() if c})
    return CochainComplex(ring, ranks, cob, bounded=False, check=False)


# ---------------------------------------------------------------------------
# tensor products of complexes
# ---------------------------------------------------------------------------

@dataclass
class BlockInfo:
    """Position of the (p, q) summand inside total degree p + q."""

    p: int
    q: int
    offset: int
    size: int


def _min_trunc(A_N, A_bounded, B_N, B_bounded):
    T = A_N + B_N
    if not A_bounded:
        T = min(T, A_N)
    if not B_bounded:
        T = min(T, B_N)
    return T


def total_tensor(F, C, over_G=None, ring=None, check=True) -> ChainComplex:
    """Total complex (F (x) C)_k = sum_{p+q=k} F_p (x) C_q.

    d(f (x) c) = d_F f (x) c + (-1)^p f (x) d_C c.  With ``over_G`` set, F must
    be a free ``SimplicialGComplex`` and C a ``SimplicialGComplex`` over the same
    group; the summands become F_p (x)_G C_q.  The block layout is stored on the
    result as ``blocks[k] = [BlockInfo, ...]``.
    """
    if over_G is not None:
        return _total_tensor_G(F, C, over_G, ring, check)
    if ring is None:
        ring = F.ring
    ring = parse_ring(ring)
    if F.ring != C.ring and ZZ not in (F.ring, C.ring):
        raise RingMismatch("complexes over different rings")
    T = _min_trunc(F.N, F.bounded, C.N, C.bounded)
    blocks, ranks = _layout(T, F.N, C.N, lambda p: F.ranks[p], lambda q: C.ranks[q])
    diffs = {}
    for k in range(1, T + 1):
        cols = {}
        for blk in blocks[k]:
            p, q = blk.p, blk.q
            rc = C.ranks[q]
            tgt = {(b.p, b.q): b for b in blocks[k - 1]}
            for i in range(F.ranks[p]):
                for j in range(rc):
                    col = {}
                    if p >= 1 and (p - 1, q) in tgt:
                        ob = tgt[(p - 1, q)]
                        for i2, v in F.d[p].col(i).items():
                            col[ob.offset + i2 * rc + j] = v
                    if q >= 1 and (p, q - 1) in tgt:
                        ob = tgt[(p, q - 1)]
                        rc2 = C.ranks[q - 1]
                        sgn = -1 if p % 2 else 1
                        for j2, v in C.d[q].col(j).items():
                            key = ob.offset + i * rc2 + j2
                            col[key] = col.get(key, 0) + sgn * v
                    col = {a: ring.normalize(v) for a, v in col.items() if ring.normalize(v)}
                    if col:
                        cols[blk.offset + i * rc + j] = col
        diffs[k] = Matrix(ranks[k - 1], ranks[k], cols)
    out = ChainComplex(ring, ranks, diffs, bounded=F.bounded and C.bounded and T == F.N + C.N,
                       check=False)
    out.blocks = blocks
    if check:
        _sign_check(out)
    return out


def _layout(T, NF, NC, rf, rc):
    blocks = []
    ranks = []
    for k in range(T + 1):
        off = 0
        bl = []
        for p in range(k + 1):
            q = k - p
            if p > NF or q > NC:
                continue
            size = rf(p) * rc(q)
            bl.append(BlockInfo(p, q, off, size))
            off += size
        blocks.append(bl)
        ranks.append(off)
    return blocks, ranks


def _sign_check(cx):
    try:
        cx.check()
    except CompositionNotZero as exc:
        raise SignCheckFailed(f"total complex fails d^2 = 0: {exc}") from exc


def _total_tensor_G(F: SimplicialGComplex, C: SimplicialGComplex, G, ring, check):
    if F.group != G or C.group != G:
        raise GroupMismatch("both complexes must be over the given group")
    ring = ZZ if ring is None else parse_ring(ring)
    T = min(F.P, C.P)
    mods = [C.module(q, ring) for q in range(T + 1)]
    Cd = {q: C.boundary_matrix(q) for q in range(1, T + 1)}
    blocks, ranks = _layout(T, F.P, C.P, F.free_rank, lambda q: mods[q].rank)
    fterms = {p: F.face_terms(p) for p in range(1, T + 1)}
    inv = G.inverse
    diffs = {}
    for k in range(1, T + 1):
        tgt = {(b.p, b.q): b for b in blocks[k - 1]}
        cols = {}
        for blk in blocks[k]:
            p, q = blk.p, blk.q
            rc = mods[q].rank
            hor = None
            if p >= 1:
                # d_F (x) id on F_p (x)_G C_q
                hor = _tensor_boundary(F, p, mods[q], fterms[p])
                ob_h = tgt[(p - 1, q)]
            ob_v = tgt.get((p, q - 1)) if q >= 1 else None
            sgn = -1 if p % 2 else 1
            for b in range(F.free_rank(p)):
                for j in range(rc):
                    src = b * rc + j
                    col = {}
                    if hor is not None:
                        for i, v in hor.col(src).items():
                            col[ob_h.offset + i] = v
                    if ob_v is not None:
                        rc2 = mods[q - 1].rank
                        for j2, v in Cd[q].col(j).items():
                            key = ob_v.offset + b * rc2 + j2
                            col[key] = col.get(key, 0) + sgn * v
                    col = {a: ring.normalize(v) for a, v in col.items() if ring.normalize(v)}
                    if col:
                        cols[blk.offset + src] = col
        diffs[k] = Matrix(ranks[k - 1], ranks[k], cols)
    out = ChainComplex(ring, ranks, diffs, bounded=False, check=False)
    out.blocks = blocks
    if check:
        _sign_check(out)
    return out


def point_complex(ring=ZZ):
    """Z (or the ring) concentrated in degree 0."""
    return ChainComplex(ring, [1], {}, bounded=True)
