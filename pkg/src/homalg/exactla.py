"""
Exact linear algebra over Z, F_p and Q.

Matrices are stored sparsely as ``{column: {row: value}}`` with Python
integers (or ``Fraction`` over Q), so entries never overflow.  The central
routine is a sparse Smith reduction: unit pivots are eliminated first with a
Markowitz-style choice, and whatever is left over Z goes through a dense
Smith normal form with minimal-magnitude pivoting.

Example
-------
>>> A = Matrix.from_dense([[2, 4], [6, 8]])
>>> smith_normal_form(A).diagonal
[2, 4]
>>> homology_at(Matrix.from_dense([[2]]), Matrix.zeros(0, 1), ZZ)
FinAbGroup(free_rank=0, torsion=(2,))
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import CompositionNotZero, NotInLattice, ShapeMismatch


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ring:
    """One of the coefficient rings Z, F_p (p prime) or Q."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Fp", "Q"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp" and not _is_prime(self.p):
            raise ValueError(f"F_p needs a prime, got {self.p}")

    @property
    def is_field(self):
        return self.kind != "Z"

    def normalize(self, v):
        if self.kind == "Fp":
            return v % self.p
        if self.kind == "Q" and not isinstance(v, Fraction):
            return Fraction(v)
        return v

    def is_unit(self, v):
        if self.kind == "Z":
            return v == 1 or v == -1
        return v != 0

    def inv(self, v):
        if self.kind == "Z":
            if v not in (1, -1):
                raise ZeroDivisionError(f"{v} is not a unit in Z")
            return v
        if self.kind == "Fp":
            return pow(v, -1, self.p)
        return 1 / Fraction(v)

    def __str__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    def to_json(self):
        d = {"ring": "Fp" if self.kind == "Fp" else self.kind}
        if self.kind == "Fp":
            d["p"] = self.p
        return d


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p):
    return Ring("Fp", p)


def parse_ring(spec, p=None):
    """Accepts ``"Z"``, ``"Q"``, ``"F3"``, ``"Fp"`` (with ``p``) or a Ring."""
    if isinstance(spec, Ring):
        return spec
    s = str(spec).strip()
    if s in ("Z", "ZZ"):
        return ZZ
    if s in ("Q", "QQ"):
        return QQ
    if s == "Fp":
        return GF(int(p))
    if s.startswith("F"):
        return GF(int(s[1:]))
    raise ValueError(f"cannot parse ring {spec!r}")


def _is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def factorize(n):
    """Prime factorisation by trial division; returns ``{prime: exponent}``."""
    out = {}
    k = 2
    while k * k <= n:
        while n % k == 0:
            out[k] = out.get(k, 0) + 1
            n //= k
        k += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# sparse matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Sparse matrix with arbitrary-precision entries.

    Treat instances as immutable; every operation returns a new matrix.
    """

    __slots__ = ("nrows", "ncols", "_cols")

    def __init__(self, nrows, ncols, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self._cols = {} if cols is None else cols

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {j: {j: 1} for j in range(n)})

    @classmethod
    def from_dense(cls, rows, ncols=None):
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        cols = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ShapeMismatch("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    cols.setdefault(j, {})[i] = v
        return cls(nrows, ncols, cols)

    @classmethod
    def from_columns(cls, nrows, columns):
        """``columns`` is a sequence of ``{row: value}`` dicts."""
        cols = {}
        for j, c in enumerate(columns):
            c = {i: v for i, v in c.items() if v}
            if c:
                cols[j] = c
        return cls(nrows, len(columns), cols)

    @classmethod
    def from_rows(cls, ncols, rows):
        cols = {}
        for i, r in enumerate(rows):
            for j, v in r.items():
                if v:
                    cols.setdefault(j, {})[i] = v
        return cls(len(rows), ncols, cols)

    @classmethod
    def from_triplets(cls, nrows, ncols, triplets):
        cols = {}
        for i, j, v in triplets:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise ShapeMismatch(f"entry ({i},{j}) outside {nrows}x{ncols}")
            c = cols.setdefault(j, {})
            if i in c:
                raise ValueError(f"duplicate coordinate ({i},{j})")
            if v:
                c[i] = v
        return cls(nrows, ncols, {j: c for j, c in cols.items() if c})

    # access -------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def col(self, j):
        return self._cols.get(j, {})

    def columns(self):
        return [dict(self._cols.get(j, {})) for j in range(self.ncols)]

    def entries(self):
        for j in sorted(self._cols):
            c = self._cols[j]
            for i in sorted(c):
                yield i, j, c[i]

    def __getitem__(self, ij):
        i, j = ij
        return self._cols.get(j, {}).get(i, 0)

    @property
    def nnz(self):
        return sum(len(c) for c in self._cols.values())

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in self._cols.items():
            for i, v in c.items():
                out[i][j] = v
        return out

    def is_zero(self):
        return not any(self._cols.values())

    def __eq__(self, other):
        if not isinstance(other, Matrix) or self.shape != other.shape:
            return NotImplemented if not isinstance(other, Matrix) else False
        a = {j: c for j, c in self._cols.items() if c}
        b = {j: c for j, c in other._cols.items() if c}
        return a == b

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    # algebra ------------------------------------------------------------
    def reduce(self, ring):
        cols = {}
        for j, c in self._cols.items():
            cc = {}
            for i, v in c.items():
                v = ring.normalize(v)
                if v:
                    cc[i] = v
            if cc:
                cols[j] = cc
        return Matrix(self.nrows, self.ncols, cols)

    def transpose(self):
        cols = {}
        for j, c in self._cols.items():
            for i, v in c.items():
                cols.setdefault(i, {})[j] = v
        return Matrix(self.ncols, self.nrows, cols)

    def apply(self, vec, ring=None):
        """Matrix times a sparse vector ``{index: value}``."""
        out = {}
        for k, x in vec.items():
            if not x:
                continue
            for i, v in self._cols.get(k, {}).items():
                out[i] = out.get(i, 0) + v * x
        if ring is not None:
            out = {i: ring.normalize(v) for i, v in out.items()}
        return {i: v for i, v in out.items() if v}

    def matmul(self, other, ring=None):
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = {}
        for j, c in other._cols.items():
            r = self.apply(c, ring)
            if r:
                cols[j] = r
        return Matrix(self.nrows, other.ncols, cols)

    __matmul__ = matmul

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch("shape mismatch in subtraction")
        cols = {j: dict(c) for j, c in self._cols.items()}
        for j, c in other._cols.items():
            t = cols.setdefault(j, {})
            for i, v in c.items():
                w = t.get(i, 0) - v
                if w:
                    t[i] = w
                else:
                    t.pop(i, None)
        return Matrix(self.nrows, self.ncols, {j: c for j, c in cols.items() if c})

    def select_columns(self, idx):
        return Matrix(self.nrows, len(idx),
                      {k: dict(self._cols[j]) for k, j in enumerate(idx) if self._cols.get(j)})

    def select_rows(self, idx):
        pos = {i: k for k, i in enumerate(idx)}
        cols = {}
        for j, c in self._cols.items():
            cc = {pos[i]: v for i, v in c.items() if i in pos}
            if cc:
                cols[j] = cc
        return Matrix(len(idx), self.ncols, cols)

    def scale(self, s, ring=None):
        cols = {}
        for j, c in self._cols.items():
            cc = {}
            for i, v in c.items():
                w = v * s if ring is None else ring.normalize(v * s)
                if w:
                    cc[i] = w
            if cc:
                cols[j] = cc
        return Matrix(self.nrows, self.ncols, cols)

    # json ---------------------------------------------------------------
    def to_json(self):
        return {"rows": self.nrows, "cols": self.ncols,
                "entries": [[i, j, str(v)] for i, j, v in self.entries()]}

    @classmethod
    def from_json(cls, obj):
        def conv(s):
            s = str(s)
            return Fraction(s) if "/" in s else int(s)
        return cls.from_triplets(int(obj["rows"]), int(obj["cols"]),
                                 [(int(i), int(j), conv(v)) for i, j, v in obj["entries"]])


IntMatrix = Matrix


def hstack(mats, nrows=None):
    if nrows is None:
        nrows = mats[0].nrows
    cols = {}
    off = 0
    for m in mats:
        if m.nrows != nrows:
            raise ShapeMismatch("hstack row mismatch")
        for j, c in m._cols.items():
            if c:
                cols[off + j] = dict(c)
        off += m.ncols
    return Matrix(nrows, off, cols)


def vstack(mats, ncols=None):
    if ncols is None:
        ncols = mats[0].ncols
    cols = {}
    off = 0
    for m in mats:
        if m.ncols != ncols:
            raise ShapeMismatch("vstack column mismatch")
        for j, c in m._cols.items():
            t = cols.setdefault(j, {})
            for i, v in c.items():
                t[off + i] = v
        off += m.nrows
    return Matrix(off, ncols, {j: c for j, c in cols.items() if c})


def block_diagonal(mats):
    cols = {}
    r0 = c0 = 0
    for m in mats:
        for j, c in m._cols.items():
            cols[c0 + j] = {r0 + i: v for i, v in c.items()}
        r0 += m.nrows
        c0 += m.ncols
    return Matrix(r0, c0, cols)


# ---------------------------------------------------------------------------
# finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinAbGroup:
    """Z^free_rank + Z/t_1 + ... + Z/t_k with t_1 | t_2 | ... and each t_i >= 2."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(t, t[1:]):
            if b % a:
                raise ValueError(f"torsion {t} is not a divisibility chain")
        if any(x < 2 for x in t):
            raise ValueError(f"invariant factors must be >= 2: {t}")

    @classmethod
    def from_cyclic_orders(cls, orders, free_rank=0):
        """Canonical form of a direct sum of cyclic groups Z/n (n = 0 means Z)."""
        free = free_rank
        by_prime = {}
        for n in orders:
            n = abs(int(n))
            if n == 0:
                free += 1
                continue
            for p, e in factorize(n).items():
                by_prime.setdefault(p, []).append(p ** e)
        length = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * length
        for p, powers in by_prime.items():
            powers.sort(reverse=True)
            for k, q in enumerate(powers):
                factors[length - 1 - k] *= q
        return cls(free, tuple(f for f in factors if f > 1))

    @classmethod
    def cyclic(cls, n):
        return cls.from_cyclic_orders([n])

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self):
        return self.free_rank == 0

    @property
    def order(self):
        if self.free_rank:
            return 0
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def p_torsion_count(self, p):
        """Number of invariant factors divisible by ``p``."""
        return sum(1 for t in self.torsion if t % p == 0)

    def __add__(self, other):
        return FinAbGroup.from_cyclic_orders(list(self.torsion) + list(other.torsion),
                                             self.free_rank + other.free_rank)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["free_rank"]), tuple(obj["torsion"]))


def direct_sum(groups):
    out = FinAbGroup()
    for g in groups:
        out = out + g
    return out


def tor_pair(A: FinAbGroup, B: FinAbGroup) -> FinAbGroup:
    """Tor(A, B); free summands contribute nothing."""
    return FinAbGroup.from_cyclic_orders([gcd(a, b) for a in A.torsion for b in B.torsion])


def ext_pair(A: FinAbGroup, B: FinAbGroup) -> FinAbGroup:
    """Ext(A, B) = Ext^1_Z(A, B)."""
    orders = []
    for a in A.torsion:
        orders += [a] * B.free_rank
        orders += [gcd(a, b) for b in B.torsion]
    return FinAbGroup.from_cyclic_orders(orders)


# ---------------------------------------------------------------------------
# sparse Smith reduction
# ---------------------------------------------------------------------------

def _row_axpy(store, i, f, r, ring):
    """store[i] -= f * store[r] for row- or column-keyed dict storage."""
    src = store[r]
    dst = store[i]
    for k, v in src.items():
        w = ring.normalize(dst.get(k, 0) - f * v)
        if w:
            dst[k] = w
        else:
            dst.pop(k, None)


class _Reducer:
    """Unimodular (or invertible) reduction of a sparse matrix to diagonal form.

    Transforms are kept in the orientation their updates touch: U and V^-1 by
    rows, U^-1 and V by columns.
    """

    def __init__(self, A, ring, want_u=False, want_v=False):
        self.ring = ring
        self.m, self.n = A.shape
        self.rows = {}
        self.cols = {}
        for j, col in A._cols.items():
            c = {}
            for i, v in col.items():
                v = ring.normalize(v)
                if v:
                    c[i] = v
                    self.rows.setdefault(i, {})[j] = v
            if c:
                self.cols[j] = c
        self.want_u = want_u
        self.want_v = want_v
        if want_u:
            self.U = {i: {i: 1} for i in range(self.m)}
            self.Uinv = {i: {i: 1} for i in range(self.m)}
        if want_v:
            self.V = {j: {j: 1} for j in range(self.n)}
            self.Vinv = {j: {j: 1} for j in range(self.n)}
        self.pivots = []       # (row, col, value)
        self._run()

    # --- elementary operations --------------------------------------------
    def _pivot(self, r, c):
        ring = self.ring
        u = self.cols[c][r]
        uinv = ring.inv(u)
        prow = self.rows[r]
        pcol = self.cols[c]
        for j in [j for j in prow if j != c]:
            f = ring.normalize(prow[j] * uinv)
            colj = self.cols[j]
            for i, b in pcol.items():
                if i == r:
                    continue
                rowi = self.rows[i]
                w = ring.normalize(colj.get(i, 0) - f * b)
                if w:
                    colj[i] = w
                    rowi[j] = w
                elif i in colj:
                    del colj[i]
                    del rowi[j]
            del colj[r]
            if not colj:
                del self.cols[j]
            if self.want_v:
                _row_axpy(self.V, j, f, c, ring)
                _row_axpy(self.Vinv, c, -f, j, ring)
        for i, b in pcol.items():
            if i == r:
                continue
            if self.want_u:
                f = ring.normalize(b * uinv)
                _row_axpy(self.U, i, f, r, ring)
                _row_axpy(self.Uinv, r, -f, i, ring)
            rowi = self.rows[i]
            del rowi[c]
            if not rowi:
                del self.rows[i]
        del self.rows[r]
        del self.cols[c]
        if u != 1:
            # scale pivot row so the diagonal entry is 1
            if self.want_u:
                for k in self.U[r]:
                    self.U[r][k] = ring.normalize(self.U[r][k] * uinv)
                for k in self.Uinv[r]:
                    self.Uinv[r][k] = ring.normalize(self.Uinv[r][k] * u)
        self.pivots.append((r, c, 1))

    def _unit_phase(self):
        ring = self.ring
        heap = [(len(c), j) for j, c in self.cols.items()]
        heapq.heapify(heap)
        stuck = []
        while True:
            while heap:
                ln, j = heapq.heappop(heap)
                col = self.cols.get(j)
                if col is None:
                    continue
                if len(col) != ln:
                    heapq.heappush(heap, (len(col), j))
                    continue
                best = None
                bestlen = 0
                for i, v in col.items():
                    if ring.is_unit(v):
                        rl = len(self.rows[i])
                        if best is None or rl < bestlen:
                            best, bestlen = i, rl
                            if rl == 1:
                                break
                if best is None:
                    stuck.append(j)
                    continue
                self._pivot(best, j)
            retry = [j for j in stuck if j in self.cols
                     and any(ring.is_unit(v) for v in self.cols[j].values())]
            if not retry:
                break
            stuck = [j for j in stuck if j in self.cols and j not in set(retry)]
            heap = [(len(self.cols[j]), j) for j in retry]
            heapq.heapify(heap)

    def _dense_phase(self):
        R = sorted(self.rows)
        C = sorted(self.cols)
        if not R:
            return
        rpos = {i: k for k, i in enumerate(R)}
        M = [[0] * len(C) for _ in R]
        for k, j in enumerate(C):
            for i, v in self.cols[j].items():
                M[rpos[i]][k] = v
        diag, u, uinv, v, vinv = _dense_snf(M, self.want_u, self.want_v)
        ring = self.ring
        if self.want_u:
            newU = {}
            for a, i in enumerate(R):
                acc = {}
                for b, x in enumerate(u[a]):
                    if x:
                        for k, w in self.U[R[b]].items():
                            acc[k] = acc.get(k, 0) + x * w
                newU[i] = {k: w for k, w in acc.items() if w}
            newUinv = {}
            for b, i in enumerate(R):
                acc = {}
                for a in range(len(R)):
                    x = uinv[a][b]
                    if x:
                        for k, w in self.Uinv[R[a]].items():
                            acc[k] = acc.get(k, 0) + x * w
                newUinv[i] = {k: w for k, w in acc.items() if w}
            self.U.update(newU)
            self.Uinv.update(newUinv)
        if self.want_v:
            newV = {}
            for b, j in enumerate(C):
                acc = {}
                for a in range(len(C)):
                    x = v[a][b]
                    if x:
                        for k, w in self.V[C[a]].items():
                            acc[k] = acc.get(k, 0) + x * w
                newV[j] = {k: w for k, w in acc.items() if w}
            newVinv = {}
            for a, j in enumerate(C):
                acc = {}
                for b, x in enumerate(vinv[a]):
                    if x:
                        for k, w in self.Vinv[C[b]].items():
                            acc[k] = acc.get(k, 0) + x * w
                newVinv[j] = {k: w for k, w in acc.items() if w}
            self.V.update(newV)
            self.Vinv.update(newVinv)
        for t, d in enumerate(diag):
            self.pivots.append((R[t], C[t], ring.normalize(d)))
        self.rows = {}
        self.cols = {}

    def _run(self):
        self._unit_phase()
        if self.cols:
            if self.ring.is_field:
                raise AssertionError("field reduction left a nonzero remainder")
            self._dense_phase()

    # --- results ----------------------------------------------------------
    @property
    def rank(self):
        return len(self.pivots)

    @property
    def diagonal(self):
        return [d for _, _, d in self.pivots]

    def row_order(self):
        used = [r for r, _, _ in self.pivots]
        s = set(used)
        return used + [i for i in range(self.m) if i not in s]

    def col_order(self):
        used = [c for _, c, _ in self.pivots]
        s = set(used)
        return used + [j for j in range(self.n) if j not in s]


def _dense_snf(M, want_u, want_v):
    """Dense Smith normal form over Z with minimal-magnitude pivoting.

    Returns ``(diag, u, uinv, v, vinv)`` with ``u M v`` diagonal.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [row[:] for row in M]

    def eye(k):
        return [[int(a == b) for b in range(k)] for a in range(k)]

    u = eye(m) if want_u else None
    uinv = eye(m) if want_u else None
    v = eye(n) if want_v else None
    vinv = eye(n) if want_v else None

    def row_op(i, t, q):            # row_i -= q row_t
        Ai, At = A[i], A[t]
        for k in range(n):
            if At[k]:
                Ai[k] -= q * At[k]
        if want_u:
            ui, ut = u[i], u[t]
            for k in range(m):
                if ut[k]:
                    ui[k] -= q * ut[k]
            for row in uinv:
                if row[i]:
                    row[t] += q * row[i]

    def col_op(j, t, q):            # col_j -= q col_t
        for row in A:
            if row[t]:
                row[j] -= q * row[t]
        if want_v:
            for row in v:
                if row[t]:
                    row[j] -= q * row[t]
            vj, vt = vinv[j], vinv[t]
            for k in range(n):
                if vj[k]:
                    vt[k] += q * vj[k]

    def swap_rows(a, b):
        A[a], A[b] = A[b], A[a]
        if want_u:
            u[a], u[b] = u[b], u[a]
            for row in uinv:
                row[a], row[b] = row[b], row[a]

    def swap_cols(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        if want_v:
            for row in v:
                row[a], row[b] = row[b], row[a]
            vinv[a], vinv[b] = vinv[b], vinv[a]

    diag = []
    t = 0
    while t < min(m, n):
        piv = None
        best = 0
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (piv is None or abs(x) < best):
                    piv, best = (i, j), abs(x)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        swap_rows(t, i)
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        swap_cols(t, j)
                        clean = False
            if not clean:
                continue
            p = A[t][t]
            bad = None
            if abs(p) != 1:
                for i in range(t + 1, m):
                    if any(x % p for x in A[i][t + 1:]):
                        bad = i
                        break
            if bad is None:
                break
            row_op(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if want_u:
                u[t] = [-x for x in u[t]]
                for row in uinv:
                    row[t] = -row[t]
        diag.append(A[t][t])
        t += 1
    return diag, u, uinv, v, vinv


def _rows_to_matrix(store, order, ncols):
    """Matrix whose k-th row is ``store[order[k]]`` (row-keyed storage)."""
    cols = {}
    for k, key in enumerate(order):
        for j, v in store[key].items():
            cols.setdefault(j, {})[k] = v
    return Matrix(len(order), ncols, cols)


def _cols_to_matrix(store, order, nrows):
    return Matrix(nrows, len(order), {k: dict(store[key]) for k, key in enumerate(order) if store[key]})


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

@dataclass
class SmithForm:
    """``U @ A @ V == D`` with D diagonal; ``diagonal`` lists the nonzero part."""

    D: Matrix
    U: Matrix
    V: Matrix
    diagonal: list
    U_inv: Matrix = None
    V_inv: Matrix = None

    @property
    def rank(self):
        return len(self.diagonal)

    @property
    def invariant_factors(self):
        return [d for d in self.diagonal if d != 1]


def smith_normal_form(A: Matrix, ring=ZZ) -> SmithForm:
    """Smith normal form with unimodular transforms (invertible over a field)."""
    ring = parse_ring(ring)
    red = _Reducer(A, ring, want_u=True, want_v=True)
    ro, co = red.row_order(), red.col_order()
    # unit pivots come first, so sorting by size keeps the divisibility chain
    # only if dense-phase diagonals follow; they do by construction.
    diag = red.diagonal
    D = Matrix(A.nrows, A.ncols, {t: {t: d} for t, d in enumerate(diag)})
    U = _rows_to_matrix(red.U, ro, A.nrows)
    V = _cols_to_matrix(red.V, co, A.ncols)
    U_inv = _cols_to_matrix(red.Uinv, ro, A.nrows)
    V_inv = _rows_to_matrix(red.Vinv, co, A.ncols)
    return SmithForm(D, U, V, diag, U_inv, V_inv)


def invariant_factors(A: Matrix) -> list:
    """Nonzero Smith diagonal of an integer matrix, in divisibility order."""
    return _Reducer(A, ZZ).diagonal


def rank(A: Matrix, ring=ZZ) -> int:
    """Rank over the field of fractions (Q for Z) or over F_p."""
    ring = parse_ring(ring)
    if A.is_zero():
        return 0
    return _Reducer(A, ring).rank


def kernel_basis(A: Matrix, ring=ZZ) -> Matrix:
    """Columns form a basis of ker A (over Z: of the full kernel lattice)."""
    ring = parse_ring(ring)
    red = _Reducer(A, ring, want_v=True)
    used = {c for _, c, _ in red.pivots}
    cols = []
    for j in range(A.ncols):
        if j in used:
            continue
        vec = dict(red.V[j])
        lead = vec[min(vec)]
        if ring.kind == "Z":
            if lead < 0:
                vec = {i: -x for i, x in vec.items()}
        else:
            s = ring.inv(lead)
            vec = {i: ring.normalize(x * s) for i, x in vec.items()}
        cols.append(vec)
    cols.sort(key=lambda c: sorted(c.items()))
    return Matrix.from_columns(A.ncols, cols)


def _check_pair(d_in, d_out, ring):
    if d_out.ncols != d_in.nrows:
        raise ShapeMismatch(f"d_out is {d_out.shape}, d_in is {d_in.shape}")
    if not d_out.matmul(d_in, ring).is_zero():
        raise CompositionNotZero("d_out . d_in != 0")


def homology_at(d_in: Matrix, d_out: Matrix, ring=ZZ):
    """ker(d_out) / im(d_in).

    Over Z returns a FinAbGroup; over a field returns the dimension.
    """
    ring = parse_ring(ring)
    _check_pair(d_in, d_out, ring)
    n = d_in.nrows
    r_out = rank(d_out, ring)
    if ring.is_field:
        return n - r_out - rank(d_in, ring)
    diag = invariant_factors(d_in)
    return FinAbGroup(n - r_out - len(diag), tuple(d for d in diag if d != 1))


class HomologyPresentation:
    """ker(d_out)/im(d_in) with canonical coordinates and cycle generators.

    Coordinates are listed torsion-first (ascending invariant factors) then
    free; over a field every coordinate is free.
    """

    def __init__(self, d_in: Matrix, d_out: Matrix, ring=ZZ, check=True):
        ring = parse_ring(ring)
        self.ring = ring
        if check:
            _check_pair(d_in, d_out, ring)
        self.d_out = d_out
        n = d_in.nrows
        self.n = n
        red = _Reducer(d_out, ring, want_v=True)
        used = {c for _, c, _ in red.pivots}
        kern = [j for j in range(n) if j not in used]
        self._K = {k: red.V[j] for k, j in enumerate(kern)}            # columns of kernel basis
        self._L = {k: red.Vinv[j] for k, j in enumerate(kern)}         # rows of left inverse
        r = len(kern)
        self.cycle_rank = r
        # X = L d_in, column by column
        Xcols = {}
        for j, c in d_in._cols.items():
            x = self._left(c)
            if x:
                Xcols[j] = x
        X = Matrix(r, d_in.ncols, Xcols)
        redx = _Reducer(X, ring, want_u=True)
        ro = redx.row_order()
        self._U = [redx.U[i] for i in ro]
        self._Uinv = [redx.Uinv[i] for i in ro]
        diag = redx.diagonal
        self._moduli = list(diag) + [0] * (r - len(diag))
        self._slots = [t for t, d in enumerate(self._moduli) if d != 1]
        if ring.is_field:
            self.group = FinAbGroup(len(self._slots))
        else:
            self.group = FinAbGroup(r - len(diag), tuple(d for d in diag if d != 1))

    @property
    def dimension(self):
        return len(self._slots)

    @property
    def moduli(self):
        """Per coordinate: invariant factor for torsion, 0 for free."""
        return [self._moduli[t] for t in self._slots]

    def _left(self, vec):
        ring = self.ring
        out = {}
        for k, row in self._L.items():
            s = 0
            for i, v in row.items():
                x = vec.get(i)
                if x:
                    s += v * x
            s = ring.normalize(s)
            if s:
                out[k] = s
        return out

    def is_cycle(self, vec):
        return not self.d_out.apply(vec, self.ring)

    def coords(self, vec):
        """Homology coordinates of a cycle given as ``{index: value}``."""
        ring = self.ring
        vec = {i: ring.normalize(v) for i, v in vec.items() if ring.normalize(v)}
        if not self.is_cycle(vec):
            from .errors import NotACycle
            raise NotACycle("vector is not a cycle")
        x = self._left(vec)
        out = []
        for t in self._slots:
            s = 0
            for k, v in self._U[t].items():
                if k in x:
                    s += v * x[k]
            s = ring.normalize(s)
            mod = self._moduli[t]
            if mod > 1:
                s %= mod
            out.append(s)
        return out

    def generator(self, k):
        """Cycle representing the k-th coordinate vector."""
        t = self._slots[k]
        ring = self.ring
        out = {}
        for a, w in self._Uinv[t].items():
            for i, v in self._K[a].items():
                out[i] = out.get(i, 0) + w * v
        return {i: ring.normalize(v) for i, v in out.items() if ring.normalize(v)}

    def generators(self):
        return [self.generator(k) for k in range(self.dimension)]


def subquotient(numerator: Matrix, denominator: Matrix, ring=ZZ):
    """span(numerator) / span(denominator), both given by generating columns.

    Raises NotInLattice unless the denominator lies in the numerator span.
    Returns a FinAbGroup over Z, a dimension over a field.
    """
    ring = parse_ring(ring)
    if numerator.nrows != denominator.nrows:
        raise ShapeMismatch("ambient dimensions differ")
    if ring.is_field:
        rn = rank(numerator, ring)
        if rank(hstack([numerator, denominator]), ring) != rn:
            raise NotInLattice("denominator not contained in numerator")
        return rn - rank(denominator, ring)
    red = _Reducer(numerator, ZZ, want_u=True)
    ro = red.row_order()
    diag = red.diagonal
    r = len(diag)
    U = [red.U[i] for i in ro]
    Ycols = {}
    for j, c in denominator._cols.items():
        y = {}
        for t in range(len(ro)):
            s = 0
            for k, v in U[t].items():
                x = c.get(k)
                if x:
                    s += v * x
            if t < r:
                if s % diag[t]:
                    raise NotInLattice("denominator not contained in numerator")
                s //= diag[t]
                if s:
                    y[t] = s
            elif s:
                raise NotInLattice("denominator not contained in numerator")
        if y:
            Ycols[j] = y
    Y = Matrix(r, denominator.ncols, Ycols)
    inv = invariant_factors(Y)
    return FinAbGroup(r - len(inv), tuple(d for d in inv if d != 1))


# ---------------------------------------------------------------------------
# dense mod-p routines (numpy), used by the spectral-sequence engine
# ---------------------------------------------------------------------------

def rref_mod(M, p):
    """Reduced row echelon form of an integer array modulo p.

    Returns ``(R, pivots)``; R has ``len(pivots)`` nonzero rows first.
    """
    A = np.array(M, dtype=np.int64) % p
    if A.ndim != 2:
        A = A.reshape(0, 0)
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank_mod(M, p):
    A = np.asarray(M)
    if A.size == 0:
        return 0
    return len(rref_mod(A, p)[1])


def row_basis_mod(M, p):
    """Basis (as rows) of the row space of M modulo p."""
    A = np.asarray(M, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    R, piv = rref_mod(A, p)
    return R[:len(piv)]


def nullspace_mod(M, p, ncols=None):
    """Rows spanning {x : M x = 0} modulo p."""
    A = np.asarray(M, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] == 0:
        n = ncols if ncols is not None else (A.shape[1] if A.ndim == 2 else 0)
        return np.eye(n, dtype=np.int64)
    n = A.shape[1]
    R, piv = rref_mod(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for r, c in enumerate(piv):
            out[k, c] = (-R[r, f]) % p
    return out
