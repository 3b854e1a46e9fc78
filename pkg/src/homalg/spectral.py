"""
Spectral sequences of filtered chain complexes.

A filtration is given by a level per basis vector, so F^p C_n is the span of
the basis vectors of level <= p.  Pages are computed from the approximation
spaces

    Z^r_p = {x in F^p C_n : dx in F^(p-r) C_(n-1)}
    E^r_p = Z^r_p / (Z^(r-1)_(p-1) + d Z^(r-1)_(p+r-1))

with mod-p linear algebra.  The Z^r description is the primary computation;
the fact that each page is the homology of the previous one is re-checked as
an audit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import (AuditFailed, HypothesisFailed, NotAcyclic, NotCanonicallyBounded, NotStabilized,
                     RingUnsupported)
from .exactla import (FinAbGroup, Matrix, ZZ, homology_at, nullspace_mod, parse_ring,
                      rank, rank_mod, rref_mod)
from .complexes import ChainComplex, SimplicialGComplex, total_tensor


# ---------------------------------------------------------------------------
# filtered complexes
# ---------------------------------------------------------------------------

class FilteredComplex:
    """A chain complex with a filtration level for every basis vector."""

    def __init__(self, complex_: ChainComplex, levels, check=True):
        self.complex = complex_
        self.levels = [list(map(int, lv)) for lv in levels]
        if len(self.levels) != len(complex_.ranks):
            raise NotCanonicallyBounded("need one level list per degree")
        for n, lv in enumerate(self.levels):
            if len(lv) != complex_.ranks[n]:
                raise NotCanonicallyBounded(f"degree {n}: level count != rank")
        if check:
            self.check()

    @property
    def ring(self):
        return self.complex.ring

    @property
    def max_degree(self):
        """Largest total degree whose pages are fully determined."""
        return self.complex.max_homology_degree()

    def check(self):
        for n, lv in enumerate(self.levels):
            for x in lv:
                if x < 0 or x > n:
                    raise NotCanonicallyBounded(f"level {x} in degree {n} is outside 0..{n}")
        for n in range(1, self.complex.N + 1):
            d = self.complex.d[n]
            for j, col in d._cols.items():
                for i in col:
                    if self.levels[n - 1][i] > self.levels[n][j]:
                        raise NotCanonicallyBounded(
                            f"d raises the filtration level in degree {n}")
        return True

    def to_json(self):
        out = self.complex.to_json()
        out["filtration"] = self.levels
        return out

    @classmethod
    def from_json(cls, obj):
        return cls(ChainComplex.from_json(obj), obj["filtration"])


def _dense(m: Matrix, p):
    out = np.zeros(m.shape, dtype=np.int64)
    for j, c in m._cols.items():
        for i, v in c.items():
            out[i, j] = v % p
    return out


class _Quotient:
    """span(numerator) / span(denominator) with chosen representatives."""

    def __init__(self, num, den, p, n):
        self.p = p
        self.n = n
        self.R, piv = rref_mod(den, p) if len(den) else (np.zeros((0, n), np.int64), [])
        self.R = self.R[: len(piv)]
        self.piv = piv
        res = self.reduce(num) if len(num) else np.zeros((0, n), np.int64)
        W, piv2 = rref_mod(res, p) if len(res) else (np.zeros((0, n), np.int64), [])
        self.reps = W[: len(piv2)]
        self.piv2 = piv2

    @property
    def dim(self):
        return len(self.reps)

    def reduce(self, V):
        V = np.array(V, dtype=np.int64).reshape(-1, self.n) % self.p
        for r, c in zip(self.R, self.piv):
            f = V[:, c].copy()
            nz = np.nonzero(f)[0]
            if nz.size:
                V[nz] = (V[nz] - np.outer(f[nz], r)) % self.p
        return V

    def coords(self, V):
        """Coordinates (rows) of vectors that lie in the numerator span."""
        V = self.reduce(V)
        if not self.piv2:
            if V.any():
                raise ValueError("vector is not in the numerator span")
            return np.zeros((len(V), 0), np.int64)
        A = V[:, self.piv2]
        back = (A @ self.reps) % self.p
        if not np.array_equal(back, V):
            raise ValueError("vector is not in the numerator span")
        return A


@dataclass
class SSPage:
    """Page r: dims (or groups) per (p, q) and d^r matrices (target x source)."""

    r: int
    entries: dict
    differentials: dict = field(default_factory=dict)
    quotients: dict = field(default_factory=dict, repr=False)

    def dim(self, p, q):
        v = self.entries.get((p, q), 0)
        return v

    def total(self, n):
        return sum(v for (p, q), v in self.entries.items() if p + q == n)

    def grid(self, pmax=None, qmax=None):
        """Text grid with p as columns and q as rows (q increasing upward)."""
        cells = self.entries
        if pmax is None:
            pmax = max((p for p, _ in cells), default=0)
        if qmax is None:
            qmax = max((q for _, q in cells), default=0)
        width = max([len(str(v)) for v in cells.values()] + [len(f"p={pmax}")])
        lines = []
        for q in range(qmax, -1, -1):
            row = " ".join(str(cells.get((p, q), 0)).rjust(width) for p in range(pmax + 1))
            lines.append(f"q={q:<2}| {row}")
        lines.append("    +" + "-" * (len(lines[0]) - 5))
        lines.append("      " + " ".join(f"p={p}".rjust(width) for p in range(pmax + 1)))
        return "\n".join(lines)

    def to_json(self):
        ents = []
        for (p, q), v in sorted(self.entries.items()):
            ents.append({"p": p, "q": q, "value": v.to_json() if isinstance(v, FinAbGroup) else v})
        return {"page": self.r, "entries": ents}


class _Engine:
    """Mod-p approximation spaces of a filtered complex."""

    def __init__(self, fc: FilteredComplex):
        self.fc = fc
        ring = fc.ring
        if ring.kind != "Fp":
            raise RingUnsupported("full pages need F_p coefficients")
        self.p = ring.p
        C = fc.complex
        self.ranks = C.ranks
        self.D = {n: _dense(C.d[n], self.p) for n in range(1, C.N + 1)}
        self.lv = [np.asarray(lv, dtype=np.int64) for lv in fc.levels]
        self.nmax = fc.max_degree

    def rank_at(self, n):
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    def Z(self, n, p, r):
        """Basis rows of Z^r_p in degree n."""
        size = self.rank_at(n)
        if size == 0:
            return np.zeros((0, size), np.int64)
        cols = np.nonzero(self.lv[n] <= p)[0]
        if cols.size == 0:
            return np.zeros((0, size), np.int64)
        if n == 0:
            basis = np.eye(cols.size, dtype=np.int64)
        else:
            bad = np.nonzero(self.lv[n - 1] > p - r)[0]
            if bad.size == 0:
                basis = np.eye(cols.size, dtype=np.int64)
            else:
                sub = self.D[n][np.ix_(bad, cols)]
                basis = nullspace_mod(sub, self.p, ncols=cols.size)
        out = np.zeros((len(basis), size), np.int64)
        out[:, cols] = basis
        return out

    def boundary_part(self, n, p, r):
        """d Z^(r-1)_(p+r-1) taken from degree n+1, as rows in degree n."""
        if n + 1 >= len(self.ranks):
            return np.zeros((0, self.rank_at(n)), np.int64)
        Y = self.Z_into(n + 1, p + r - 1, p)
        if len(Y) == 0:
            return np.zeros((0, self.rank_at(n)), np.int64)
        return (Y @ self.D[n + 1].T) % self.p

    def Z_into(self, n, p, target):
        """{y in F^p C_n : dy in F^target C_(n-1)}."""
        return self.Z(n, p, p - target)

    def quotient(self, n, p, r):
        num = self.Z(n, p, r)
        den = [self.Z(n, p - 1, r - 1), self.boundary_part(n, p, r)]
        den = np.vstack([x for x in den if len(x)]) if any(len(x) for x in den) else np.zeros((0, self.rank_at(n)), np.int64)
        return _Quotient(num, den, self.p, self.rank_at(n))

    def page(self, r):
        entries, quots, diffs = {}, {}, {}
        for n in range(self.nmax + 1):
            for p in range(n + 1):
                Q = self.quotient(n, p, r)
                quots[(p, n - p)] = Q
                entries[(p, n - p)] = Q.dim
        if r >= 0:
            for (p, q), Q in quots.items():
                n = p + q
                tgt = (p - r, q + r - 1)
                if Q.dim == 0 or n == 0:
                    continue
                if tgt not in quots:
                    continue
                T = quots[tgt]
                img = (Q.reps @ self.D[n].T) % self.p
                diffs[(p, q)] = T.coords(img).T % self.p if T.dim else np.zeros((0, Q.dim), np.int64)
        return SSPage(r, entries, diffs, quots)


def pages(fc: FilteredComplex, up_to_page: int, audit=True):
    """E^0 .. E^r_max.  Over Z only E^0 and E^1 are available."""
    ring = fc.ring
    if ring.kind != "Fp":
        if up_to_page > 1:
            raise RingUnsupported(f"pages beyond E^1 need F_p coefficients, got {ring}")
        return _low_pages(fc, up_to_page)
    eng = _Engine(fc)
    out = [eng.page(r) for r in range(up_to_page + 1)]
    if audit:
        for a, b in zip(out, out[1:]):
            audit_pages(a, b, eng.p)
    return out


def infinity_page(fc: FilteredComplex) -> SSPage:
    eng = _Engine(fc)
    return eng.page(eng.nmax + 2)


def _low_pages(fc, up_to_page):
    """E^0 and E^1 over Z or Q from the associated graded complex."""
    C = fc.complex
    ring = C.ring
    nmax = fc.max_degree
    e0, e1 = {}, {}
    for n in range(nmax + 1):
        for p in range(n + 1):
            cnt = sum(1 for x in fc.levels[n] if x == p)
            e0[(p, n - p)] = FinAbGroup(cnt) if ring == ZZ else cnt
            rows = [i for i, x in enumerate(fc.levels[n]) if x == p]

            def block(k, rows_k):
                if k < 1 or k > C.N:
                    return Matrix.zeros(len(rows_k[0]), len(rows_k[1]))
                return C.d[k].select_rows(rows_k[0]).select_columns(rows_k[1])

            above = [i for i, x in enumerate(fc.levels[n + 1]) if x == p] if n + 1 <= C.N else []
            below = [i for i, x in enumerate(fc.levels[n - 1]) if x == p] if n >= 1 else []
            d_in = block(n + 1, (rows, above)) if n + 1 <= C.N else Matrix.zeros(len(rows), 0)
            d_out = block(n, (below, rows)) if n >= 1 else Matrix.zeros(0, len(rows))
            e1[(p, n - p)] = homology_at(d_in, d_out, ring)
    out = [SSPage(0, e0)]
    if up_to_page >= 1:
        out.append(SSPage(1, e1))
    return out


def audit_pages(page, nxt, p):
    """d^r d^r = 0 and E^(r+1) = H(E^r, d^r) dimensionwise.

    Cells whose incoming differential starts beyond the computed total
    degree are skipped.
    """
    r = page.r
    nmax = max(a + b for a, b in page.entries)
    for (a, b), M in page.differentials.items():
        M2 = page.differentials.get((a - r, b + r - 1))
        if M2 is not None and M.size and M2.size and ((M2 @ M) % p).any():
            raise AuditFailed(f"d^{r} d^{r} != 0 at {(a, b)}")
    for (a, b), dim in page.entries.items():
        if a + b + 1 > nmax and (a + r, b - r + 1) != (a, b):
            continue
        out = page.differentials.get((a, b))
        inc = page.differentials.get((a + r, b - r + 1))
        rk_out = rank_mod(out, p) if out is not None and out.size else 0
        rk_in = rank_mod(inc, p) if inc is not None and inc.size else 0
        if nxt.entries[(a, b)] != dim - rk_out - rk_in:
            raise AuditFailed(f"E^{r + 1}_{(a, b)} = {nxt.entries[(a, b)]}, "
                                 f"homology of E^{r} gives {dim - rk_out - rk_in}")
    return True


# ---------------------------------------------------------------------------
# spectral sequence object, edge maps, convergence
# ---------------------------------------------------------------------------

@dataclass
class SpectralSequence:
    fc: FilteredComplex
    pages: list
    einf: SSPage

    def stabilized(self):
        last = self.pages[-1]
        return all(last.entries.get(k, 0) == v for k, v in self.einf.entries.items())

    def abutment_dims(self):
        C = self.fc.complex
        return [C.homology(n) for n in range(self.fc.max_degree + 1)]

    def convergence_audit(self):
        H = self.abutment_dims()
        return all(self.einf.total(n) == H[n] for n in range(len(H)))


def spectral_sequence(fc: FilteredComplex, up_to_page=None) -> SpectralSequence:
    eng = _Engine(fc)
    if up_to_page is None:
        up_to_page = eng.nmax + 2
    pg = pages(fc, up_to_page)
    return SpectralSequence(fc, pg, eng.page(eng.nmax + 2))


def _map_between(src: _Quotient, tgt: _Quotient, p):
    """Matrix of [x] -> [x] from one subquotient to another (target x source)."""
    if src.dim == 0:
        return np.zeros((tgt.dim, 0), np.int64)
    if tgt.dim == 0:
        tgt.coords(src.reps)      # raises if not in the numerator span
        return np.zeros((0, src.dim), np.int64)
    return tgt.coords(src.reps).T % p


@dataclass
class EdgeMaps:
    pi: dict
    iota: dict
    surjective: dict
    injective: dict


def edge_maps(ss: SpectralSequence) -> EdgeMaps:
    """pi_q: E^2_(0,q) -> E^inf_(0,q) and iota_p: E^inf_(p,0) -> E^2_(p,0)."""
    if len(ss.pages) < 3:
        raise NotStabilized("need pages up to E^2")
    if not ss.stabilized():
        raise NotStabilized("last computed page differs from E^infinity")
    p = ss.fc.ring.p
    E2 = ss.pages[2]
    pi, iota, surj, inj = {}, {}, {}, {}
    nmax = ss.fc.max_degree
    for q in range(nmax + 1):
        M = _map_between(E2.quotients[(0, q)], ss.einf.quotients[(0, q)], p)
        pi[q] = M
        surj[q] = (rank_mod(M, p) if M.size else 0) == ss.einf.entries[(0, q)]
    for a in range(nmax + 1):
        M = _map_between(ss.einf.quotients[(a, 0)], E2.quotients[(a, 0)], p)
        iota[a] = M
        inj[a] = (rank_mod(M, p) if M.size else 0) == ss.einf.entries[(a, 0)]
    return EdgeMaps(pi, iota, surj, inj)


@dataclass
class TriangleReport:
    hypothesis_met: bool
    verdicts: dict
    abutment_agrees: dict
    conclusion_holds: bool


def triangle_check(ss: SpectralSequence, n: int) -> TriangleReport:
    """Check the lower-triangle hypothesis on E^2 up to total degree n, then
    whether pi_q is an isomorphism for q < n and surjective at q = n.

    Raises HypothesisFailed at the first nonzero cell of the triangle.
    """
    E2 = ss.pages[2]
    for t in range(1, n + 1):
        for a in range(1, t + 1):
            if E2.entries.get((a, t - a), 0):
                raise HypothesisFailed(f"E^2_({a},{t - a}) is nonzero", cell=(a, t - a))
    em = edge_maps(ss)
    p = ss.fc.ring.p
    H = ss.abutment_dims()
    verdicts, agree = {}, {}
    for q in range(n + 1):
        M = em.pi[q]
        rk = rank_mod(M, p) if M.size else 0
        src, tgt = E2.entries[(0, q)], ss.einf.entries[(0, q)]
        if rk == src == tgt:
            verdicts[q] = "iso"
        elif rk == tgt:
            verdicts[q] = "surjective-only"
        else:
            verdicts[q] = "not-surjective"
        agree[q] = tgt == H[q]
    holds = (all(verdicts[q] == "iso" for q in range(n))
             and verdicts[n] != "not-surjective")
    return TriangleReport(True, verdicts, agree, holds)


# ---------------------------------------------------------------------------
# synthetic filtered complexes
# ---------------------------------------------------------------------------

def filtered_from_pieces(pieces, p, top, seed=None, scramble=True):
    """Filtered complex over F_p from elementary pieces.

    ``pieces`` holds ``("cycle", n, level)`` and ``("pair", n, level_y, level_x)``
    (y in degree n+1 with dy = x in degree n, level_x <= level_y).  The basis
    is then scrambled by a random filtration-preserving change of basis.
    """
    rng = random.Random(seed)
    ranks = [0] * (top + 1)
    levels = [[] for _ in range(top + 1)]
    edges = []
    for pc in pieces:
        if pc[0] == "cycle":
            _, n, lv = pc
            levels[n].append(lv)
            ranks[n] += 1
        else:
            _, n, ly, lx = pc
            levels[n + 1].append(ly)
            levels[n].append(lx)
            edges.append((n, ranks[n + 1], ranks[n]))
            ranks[n + 1] += 1
            ranks[n] += 1
    D = {n: np.zeros((ranks[n - 1], ranks[n]), np.int64) for n in range(1, top + 1)}
    for n, j, i in edges:
        D[n + 1][i, j] = 1
    if scramble:
        B = []
        for n in range(top + 1):
            m = ranks[n]
            T = np.eye(m, dtype=np.int64)
            for i in range(m):
                for j in range(m):
                    if i != j and levels[n][i] <= levels[n][j] and rng.random() < 0.5:
                        T[i, j] = rng.randrange(p)
            # T[i, j] != 0 only for level_i <= level_j; make it invertible by
            # ordering: the unipotent part w.r.t. (level, index) is triangular.
            order = sorted(range(m), key=lambda i: (levels[n][i], i))
            rank_of = {i: k for k, i in enumerate(order)}
            for i in range(m):
                for j in range(m):
                    if i != j and rank_of[i] > rank_of[j]:
                        T[i, j] = 0
            B.append(T % p)
        for n in range(1, top + 1):
            # new differential B_{n-1} D B_n^{-1}
            Binv = _inv_mod(B[n], p)
            D[n] = (B[n - 1] @ D[n] @ Binv) % p
    diffs = {n: Matrix.from_dense(D[n].tolist(), ncols=ranks[n]) for n in range(1, top + 1)}
    cx = ChainComplex(f"F{p}", ranks, diffs, bounded=True)
    return FilteredComplex(cx, levels)


def _inv_mod(T, p):
    m = len(T)
    if m == 0:
        return T
    A = np.hstack([T % p, np.eye(m, dtype=np.int64)])
    R, piv = rref_mod(A, p)
    if piv[:m] != list(range(m)):
        raise ValueError("singular change of basis")
    return R[:, m:]


def random_filtered_complex(p, max_degree=5, max_rank=12, seed=None):
    """A random canonically bounded filtered complex over F_p."""
    rng = random.Random(seed)
    pieces = []
    ranks = [0] * (max_degree + 1)
    for _ in range(rng.randrange(3, 3 * max_degree + 3)):
        if rng.random() < 0.35:
            n = rng.randrange(max_degree + 1)
            if ranks[n] + 1 > max_rank:
                continue
            pieces.append(("cycle", n, rng.randrange(n + 1)))
            ranks[n] += 1
        else:
            n = rng.randrange(max_degree)
            if ranks[n] + 1 > max_rank or ranks[n + 1] + 1 > max_rank:
                continue
            lx = rng.randrange(n + 1)
            ly = rng.randrange(lx, n + 2)
            pieces.append(("pair", n, ly, lx))
            ranks[n] += 1
            ranks[n + 1] += 1
    return filtered_from_pieces(pieces, p, max_degree, seed=rng.randrange(1 << 30))


# ---------------------------------------------------------------------------
# double complexes
# ---------------------------------------------------------------------------

def double_filtrations(F, C, over_G=None, ring=None):
    """The filtrations by F-degree ('F) and by C-degree (''F) on F (x) C."""
    T = total_tensor(F, C, over_G=over_G, ring=ring)
    lv1 = [[0] * r for r in T.ranks]
    lv2 = [[0] * r for r in T.ranks]
    for k, blocks in enumerate(T.blocks):
        for b in blocks:
            for i in range(b.offset, b.offset + b.size):
                lv1[k][i] = b.p
                lv2[k][i] = b.q
    return FilteredComplex(T, lv1), FilteredComplex(T, lv2)


@dataclass
class AcyclicReport:
    prime_ss: SpectralSequence
    double_prime_ss: SpectralSequence
    total_dims: list
    group_dims: list
    epsilon_iso: list
    collapses: bool

    @property
    def passed(self):
        return self.total_dims == self.group_dims and all(self.epsilon_iso) and self.collapses


def check_acyclic(C: SimplicialGComplex, N):
    """H_0 = Z through the augmentation and H_k = 0 for 1 <= k < N."""
    aug = C.augmented()
    for k in range(0, min(N, C.P)):
        h = aug.homology(k + 1)
        if not h.is_trivial:
            raise NotAcyclic(f"augmented complex has homology {h} in degree {k}")
    return True


def acyclic_coefficient_ss(G, C: SimplicialGComplex, N, ring="F2") -> AcyclicReport:
    """Spectral sequences of F(G) (x)_G C for an acyclic G-complex C.

    Checks that 'E collapses at E^2 on the q = 0 row, that H_p(G, C) has the
    dims of H_p(G), and that f (x) c -> f (x) eps(c) is an isomorphism.
    """
    from .complexes import bar_resolution
    from .gmodule import trivial_module
    from .homology import bar_homology, induced_matrix, _is_iso
    from .exactla import HomologyPresentation

    ring = parse_ring(ring)
    check_acyclic(C, N + 1)
    F = bar_resolution(G, N + 1)
    Cn = SimplicialGComplex(C.action, N + 1)
    f1, f2 = double_filtrations(F, Cn, over_G=G, ring=ring)
    ss1 = spectral_sequence(f1)
    ss2 = spectral_sequence(f2)
    T = f1.complex
    total = [T.homology(n) for n in range(N + 1)]
    bh = bar_homology(G, trivial_module(G, ring), N)
    group = bh.values()
    # epsilon map: block (p, 0) index b * |C_0| + x -> b
    s0 = Cn.rank(0)
    eps_iso = []
    for n in range(N + 1):
        blk = next(b for b in T.blocks[n] if b.q == 0)

        def f(vec, blk=blk):
            out = {}
            for i, v in vec.items():
                if blk.offset <= i < blk.offset + blk.size:
                    b = (i - blk.offset) // s0
                    out[b] = out.get(b, 0) + v
            return {k: ring.normalize(v) for k, v in out.items() if ring.normalize(v)}

        src = HomologyPresentation(T.differential(n + 1), T.differential(n), ring, check=False)
        tgt = bh.presentation(n)
        A = induced_matrix(f, src, tgt)
        eps_iso.append(_is_iso(A, src, tgt))
    E2 = ss1.pages[2].entries
    collapses = (all(v == 0 for (a, b), v in E2.items() if b > 0)
                 and all(ss1.einf.entries[k] == v for k, v in E2.items()))
    return AcyclicReport(ss1, ss2, total, group, eps_iso, collapses)


# ---------------------------------------------------------------------------
# Lyndon / Hochschild-Serre E^2
# ---------------------------------------------------------------------------

@dataclass
class LHSReport:
    e2: dict
    abutment: list
    sums: list
    flags: list
    column_edge_ranks: list
    row_edge_ranks: list

    def grid(self):
        return SSPage(2, self.e2).grid()


def lhs_e2(G, H_elems, M, P, Q) -> LHSReport:
    """E^2_(p,q) = H_p(G/H, H_q(H, M)) for p <= P, q <= Q (field coefficients).

    Also computes H_n(G, M) directly and the ranks of the two edge maps:
    H_q(H, M) -> H_q(G, M), whose image is E^inf_(0,q), and
    H_n(G, M) -> H_n(G/H, M_H), whose image is E^inf_(n,0).
    """
    from .gmodule import GModule
    from .groupcore import quotient_group, subgroup
    from .homology import (bar_homology, group_homology, induced_matrix,
                           quotient_action_on_homology)
    from .gmodule import restrict_module

    ring = M.ring
    if not ring.is_field:
        raise RingUnsupported("LHS E^2 is computed for field coefficients")
    Qg, proj = quotient_group(G, H_elems)
    e2 = {}
    for q in range(Q + 1):
        qa = quotient_action_on_homology(G, H_elems, M, q)
        Mq = qa.as_module()
        dims = group_homology(Qg, Mq, P).degrees
        for p in range(P + 1):
            e2[(p, q)] = dims[p]
    top = min(P, Q)
    hg = group_homology(G, M, max(P, Q)).degrees
    sums = [sum(e2[(p, n - p)] for p in range(n + 1)) for n in range(top + 1)]
    flags = [s > hg[n] for n, s in enumerate(sums)]
    # column edge: inclusion H -> G
    Hs, emb = subgroup(G, H_elems)
    MH = restrict_module(Hs, emb, M)
    bH = bar_homology(Hs, MH, Q)
    bG = bar_homology(G, M, max(P, Q))
    r = M.rank
    col_ranks = []
    for q in range(Q + 1):
        from .homology import _reindex, _linear

        def ent(i, q=q):
            b, a = divmod(i, r)
            return {_reindex(b, q, Hs.order, G.order, emb) * r + a: 1}

        A = induced_matrix(_linear(ent), bH.presentation(q), bG.presentation(q))
        col_ranks.append(rank_mod(np.array(A, dtype=np.int64), ring.p) if A and A[0] else 0)
    # row edge: G -> G/H with coefficients M -> M_H
    MH0, to_coinv = _coinvariant_module(Qg, proj, M)
    bQ = bar_homology(Qg, MH0, P)
    row_ranks = []
    for n in range(P + 1):
        def ent2(i, n=n):
            b, a = divmod(i, r)
            base = _reindex(b, n, G.order, Qg.order, proj) * MH0.rank
            return {base + c: v for c, v in to_coinv[a].items()}

        A = induced_matrix(_linear(ent2), bG.presentation(n), bQ.presentation(n))
        row_ranks.append(rank_mod(np.array(A, dtype=np.int64), ring.p) if A and A[0] else 0)
    return LHSReport(e2, hg, sums, flags, col_ranks, row_ranks)


def _coinvariant_module(Qg, proj, M):
    """M_H as a G/H-module over a field, with the projection M -> M_H."""
    from .gmodule import GModule
    ring = M.ring
    p = ring.p
    G_order = len(proj)
    r = M.rank
    # relations h m - m for h in H (elements projecting to the identity coset)
    rels = []
    for g in range(G_order):
        if proj[g] == Qg.identity:
            A = _dense(M.action[g], p)
            rels.append((A - np.eye(r, dtype=np.int64)) % p)
    R = np.hstack(rels).T if rels else np.zeros((0, r), np.int64)
    Qt = _Quotient(np.eye(r, dtype=np.int64), R, p, r)
    k = Qt.dim
    to_coinv = []
    for a in range(r):
        e = np.zeros(r, np.int64)
        e[a] = 1
        c = Qt.coords(e)[0] if k else []
        to_coinv.append({i: int(v) for i, v in enumerate(c) if v})
    mats = []
    reps = {}
    for g in range(G_order):
        reps.setdefault(proj[g], g)
    for c in range(Qg.order):
        A = _dense(M.action[reps[c]], p)
        img = (Qt.reps @ A.T) % p if k else np.zeros((0, r), np.int64)
        cols = Qt.coords(img) if k else np.zeros((0, 0), np.int64)
        mats.append(Matrix.from_dense(cols.T.tolist(), ncols=k) if k else Matrix.zeros(0, 0))
    return GModule(Qg, ring, k, mats), to_coinv
