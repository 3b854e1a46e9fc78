"""
Finite groups given by multiplication tables, group actions, and the
standard constructors (cyclic, symmetric, dihedral, GL_n(F_q), products).

Elements are the integers ``0 .. order-1``; ``table[a][b]`` is the index of
the product ``ab``.  All built-in constructors put the identity at index 0,
but nothing downstream relies on that.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import (InputError, LengthMismatch, NoIdentity, NotAHomomorphism,
                     NotASubgroup, NotAssociative, NotIndependent, NotLatinSquare,
                     NotNormal, TooLarge)
from .exactla import FinAbGroup, factorize

GL_ORDER_CAP = 200
ORBIT_TUPLE_CAP = 2_000_000


class FiniteGroup:
    """A finite group stored as a validated multiplication table."""

    def __init__(self, table, labels=None, name=None, check=True):
        table = [list(map(int, row)) for row in table]
        n = len(table)
        if n == 0 or any(len(r) != n for r in table):
            raise NotLatinSquare("table must be a non-empty square")
        self.order = n
        self.table = table
        self.name = name or f"group of order {n}"
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise InputError("label count does not match the order")
        if check:
            self._validate()
        self.identity = next(e for e in range(n) if table[e] == list(range(n)))
        e = self.identity
        self.inverse = [0] * n
        for a in range(n):
            self.inverse[a] = table[a].index(e)

    def _validate(self):
        n, t = self.order, self.table
        full = set(range(n))
        for r in t:
            if set(r) != full:
                raise NotLatinSquare("a row is not a permutation of the elements")
        for b in range(n):
            if {t[a][b] for a in range(n)} != full:
                raise NotLatinSquare("a column is not a permutation of the elements")
        ids = [e for e in range(n) if t[e] == list(range(n))
               and all(t[a][e] == a for a in range(n))]
        if not ids:
            raise NoIdentity("no two-sided identity")
        if n <= 64:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(20000))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise NotAssociative(f"({a}{b}){c} != {a}({b}{c})")

    # basic arithmetic ----------------------------------------------------
    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def conj(self, g, h):
        """c_g(h) = g h g^-1."""
        t = self.table
        return t[t[g][h]][self.inverse[g]]

    def power(self, a, k):
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    @property
    def elements(self):
        return range(self.order)

    @property
    def is_abelian(self):
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def generated_subgroup(self, gens):
        """Sorted list of the elements of the subgroup generated by ``gens``."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def commutator_subgroup(self):
        t, inv = self.table, self.inverse
        comms = {t[t[a][b]][t[inv[a]][inv[b]]] for a in range(self.order) for b in range(self.order)}
        return self.generated_subgroup(comms)

    def is_subgroup(self, elems):
        s = set(elems)
        return (self.identity in s
                and all(self.table[a][b] in s for a in s for b in s))

    def is_normal(self, elems):
        s = set(elems)
        return all(self.conj(g, h) in s for g in range(self.order) for h in s)

    def center(self):
        t = self.table
        return [a for a in range(self.order) if all(t[a][b] == t[b][a] for b in range(self.order))]

    # serialisation -------------------------------------------------------
    def to_json(self):
        return {"order": self.order, "identity": self.identity,
                "table": self.table, "labels": self.labels}

    @classmethod
    def from_json(cls, obj):
        g = cls(obj["table"], obj.get("labels"))
        if "identity" in obj and int(obj["identity"]) != g.identity:
            raise NoIdentity(f"declared identity {obj['identity']} is not the identity")
        return g

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(tuple(map(tuple, self.table)))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def group_from_table(table, labels=None):
    return FiniteGroup(table, labels)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _from_elements(elems, mul, name, label=str):
    """Table for a group given as a list of hashable elements and a product."""
    index = {x: i for i, x in enumerate(elems)}
    table = [[index[mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, [label(x) for x in elems], name=name, check=False)


def trivial_group():
    return FiniteGroup([[0]], ["e"], name="1", check=False)


def cyclic(n):
    if n < 1:
        raise InputError("cyclic group needs n >= 1")
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)],
                       [str(i) for i in range(n)], name=f"Z/{n}", check=False)


def symmetric(n):
    """S_n on {0..n-1}; permutations in lexicographic order (identity first)."""
    if n < 1 or n > 5:
        raise TooLarge("symmetric groups are limited to n <= 5")
    perms = list(itertools.permutations(range(n)))
    return _from_elements(perms, lambda a, b: tuple(a[b[i]] for i in range(n)),
                          f"S_{n}", lambda p: "".join(map(str, p)))


def dihedral(n):
    """Dihedral group of order 2n; element (k, s) stands for r^k s^s."""
    if n < 1:
        raise InputError("dihedral group needs n >= 1")
    elems = [(k, s) for s in (0, 1) for k in range(n)]

    def mul(a, b):
        (k1, s1), (k2, s2) = a, b
        return ((k1 + (-k2 if s1 else k2)) % n, (s1 + s2) % 2)

    return _from_elements(elems, mul, f"D_{n}", lambda x: f"r{x[0]}" + ("s" if x[1] else ""))


def quaternion():
    """Q_8 as unit quaternions {±1, ±i, ±j, ±k}."""
    basis = ["1", "i", "j", "k"]
    mult = {("1", x): (1, x) for x in basis}
    mult.update({(x, "1"): (1, x) for x in basis})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, b) for s in (1, -1) for b in basis]

    def mul(a, b):
        s, c = mult[(a[1], b[1])]
        return (a[0] * b[0] * s, c)

    return _from_elements(elems, mul, "Q_8", lambda x: ("" if x[0] > 0 else "-") + x[1])


def direct_product(G: FiniteGroup, H: FiniteGroup):
    """G x H with element (g, h) at index g*|H| + h."""
    m = H.order
    table = [[G.table[a // m][b // m] * m + H.table[a % m][b % m]
              for b in range(G.order * m)] for a in range(G.order * m)]
    labels = [f"({G.labels[a // m]},{H.labels[a % m]})" for a in range(G.order * m)]
    return FiniteGroup(table, labels, name=f"{G.name} x {H.name}", check=False)


def _mat_mul_mod(A, B, q):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) % q for j in range(n))
                 for i in range(n))


def rank_mod_q(vectors, q):
    """Rank of a list of vectors over F_q (q prime)."""
    rows = [list(v) for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % q), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = pow(rows[r][c], -1, q)
        rows[r] = [x * s % q for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % q:
                f = rows[i][c]
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def inverse_mod_q(M, q):
    n = len(M)
    A = [list(M[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] % q), None)
        if piv is None:
            raise NotIndependent("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        s = pow(A[c][c], -1, q)
        A[c] = [x * s % q for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % q for x, y in zip(A[i], A[c])]
    return tuple(tuple(row[n:]) for row in A)


def general_linear_group(n, q, cap=GL_ORDER_CAP):
    """GL_n(F_q) for prime q; labels are the matrices, identity first."""
    if not (q >= 2 and all(q % k for k in range(2, q))):
        raise InputError(f"q must be prime, got {q}")
    order = 1
    for i in range(n):
        order *= q ** n - q ** i
    if order > cap:
        raise TooLarge(f"|GL_{n}(F_{q})| = {order} exceeds cap {cap}")
    mats = []
    for flat in itertools.product(range(q), repeat=n * n):
        M = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        if rank_mod_q(M, q) == n:
            mats.append(M)
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    mats.sort(key=lambda M: (M != ident, M))
    G = _from_elements(mats, lambda a, b: _mat_mul_mod(a, b, q), f"GL_{n}(F_{q})",
                       lambda M: "[" + ";".join(" ".join(map(str, r)) for r in M) + "]")
    G.matrices = mats
    G.field_order = q
    return G


gl = general_linear_group


# ---------------------------------------------------------------------------
# subgroups, quotients, homomorphisms
# ---------------------------------------------------------------------------

def subgroup(G: FiniteGroup, elems):
    """Return ``(H, embedding)`` with H a FiniteGroup and embedding[i] in G."""
    elems = sorted(set(elems))
    if not G.is_subgroup(elems):
        raise NotASubgroup("element list is not closed under the table")
    elems.remove(G.identity)
    elems = [G.identity] + elems
    pos = {x: i for i, x in enumerate(elems)}
    table = [[pos[G.table[a][b]] for b in elems] for a in elems]
    H = FiniteGroup(table, [G.labels[x] for x in elems], name=f"subgroup of {G.name}", check=False)
    return H, elems


def left_cosets(G: FiniteGroup, H_elems):
    """Left cosets gH ordered by their least element; H itself comes first."""
    H_elems = sorted(set(H_elems))
    if not G.is_subgroup(H_elems):
        raise NotASubgroup("element list is not closed under the table")
    seen = set()
    cosets = [list(H_elems)]
    seen.update(H_elems)
    for g in range(G.order):
        if g in seen:
            continue
        c = sorted(G.table[g][h] for h in H_elems)
        cosets.append(c)
        seen.update(c)
    return cosets


def quotient_group(G: FiniteGroup, N_elems):
    """``(G/N, projection)`` with projection[g] the coset index of g."""
    if not G.is_subgroup(N_elems):
        raise NotASubgroup("element list is not closed under the table")
    if not G.is_normal(N_elems):
        raise NotNormal("subgroup is not normal")
    cosets = left_cosets(G, N_elems)
    proj = [0] * G.order
    for i, c in enumerate(cosets):
        for g in c:
            proj[g] = i
    reps = [c[0] for c in cosets]
    table = [[proj[G.table[a][b]] for b in reps] for a in reps]
    Q = FiniteGroup(table, [G.labels[r] + "N" for r in reps], name=f"{G.name}/N", check=False)
    return Q, proj


def is_homomorphism(G: FiniteGroup, H: FiniteGroup, phi):
    return len(phi) == G.order and all(
        phi[G.table[a][b]] == H.table[phi[a]][phi[b]]
        for a in range(G.order) for b in range(G.order))


def check_homomorphism(G, H, phi):
    if not is_homomorphism(G, H, phi):
        raise NotAHomomorphism("map does not respect the multiplication tables")


def abelian_invariants(G: FiniteGroup) -> FinAbGroup:
    """Invariant factors of an abelian group, from p-power torsion counts."""
    n = G.order
    orders = []
    for p, e in factorize(n).items():
        # count_k = #{x : x^(p^k) = 1} = p^(sum_i min(lambda_i, k))
        logs = [0]
        k = 1
        while logs[-1] < e:
            c = sum(1 for x in range(n) if G.power(x, p ** k) == G.identity)
            lg = 0
            while c > 1:
                c //= p
                lg += 1
            logs.append(lg)
            k += 1
        parts_at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        parts_at_least.append(0)
        for k in range(1, len(parts_at_least)):
            orders += [p ** k] * (parts_at_least[k - 1] - parts_at_least[k])
    return FinAbGroup.from_cyclic_orders(orders)


def abelianization(G: FiniteGroup) -> FinAbGroup:
    """G / [G, G] in canonical invariant-factor form."""
    Q, _ = quotient_group(G, G.commutator_subgroup())
    return abelian_invariants(Q)


def find_isomorphism(G: FiniteGroup, H: FiniteGroup):
    """Brute-force isomorphism search (small groups); returns a map or None."""
    if G.order != H.order:
        return None
    n = G.order
    gens = []
    span = [G.identity]
    while len(span) < n:
        g = next(x for x in range(n) if x not in set(span))
        gens.append(g)
        span = G.generated_subgroup(gens)
    # express every element of G as a word in gens
    words = {G.identity: []}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = G.table[x][g]
                if y not in words:
                    words[y] = words[x] + [i]
                    nxt.append(y)
        frontier = nxt
    gord = [G.element_order(g) for g in gens]
    cands = [[h for h in range(n) if H.element_order(h) == o] for o in gord]
    for images in itertools.product(*cands):
        phi = [0] * n
        for x, w in words.items():
            y = H.identity
            for i in w:
                y = H.table[y][images[i]]
            phi[x] = y
        if len(set(phi)) == n and is_homomorphism(G, H, phi):
            return phi
    return None


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------

@dataclass
class GroupAction:
    """Left action of ``group`` on ``{0..set_size-1}``; perm[g][x] = g.x."""

    group: FiniteGroup
    set_size: int
    perm: list
    labels: list = None
    cosets: list = None

    def __post_init__(self):
        self.perm = [tuple(p) for p in self.perm]
        G = self.group
        if len(self.perm) != G.order:
            raise InputError("need one permutation per group element")
        for p in self.perm:
            if sorted(p) != list(range(self.set_size)):
                raise InputError("action entry is not a permutation")
        if self.perm[G.identity] != tuple(range(self.set_size)):
            raise InputError("identity does not act trivially")
        for a in range(G.order):
            for b in range(G.order):
                pa, pb, pab = self.perm[a], self.perm[b], self.perm[G.table[a][b]]
                if any(pab[x] != pa[pb[x]] for x in range(self.set_size)):
                    raise NotAHomomorphism("perm(gh) != perm(g) perm(h)")

    def act(self, g, x):
        return self.perm[g][x]

    def orbit(self, x):
        return sorted({p[x] for p in self.perm})

    def stabilizer(self, x):
        return [g for g, p in enumerate(self.perm) if p[x] == x]

    def is_transitive(self):
        return self.set_size == 0 or len(self.orbit(0)) == self.set_size


def regular_action(G: FiniteGroup):
    return GroupAction(G, G.order, [tuple(G.table[g]) for g in range(G.order)])


def trivial_action(G: FiniteGroup, size):
    return GroupAction(G, size, [tuple(range(size))] * G.order)


def coset_action(G: FiniteGroup, H_elems):
    """Left multiplication on G/H; coset 0 is H, reps[0] is the identity."""
    cosets = left_cosets(G, H_elems)
    where = {}
    for i, c in enumerate(cosets):
        for g in c:
            where[g] = i
    reps = [G.identity] + [c[0] for c in cosets[1:]]
    perm = [tuple(where[G.table[g][r]] for r in reps) for g in range(G.order)]
    act = GroupAction(G, len(cosets), perm, cosets=cosets)
    act.reps = reps
    return act


def tuple_index(t, size):
    k = 0
    for x in t:
        k = k * size + x
    return k


def tuple_from_index(k, size, length):
    out = [0] * length
    for j in range(length - 1, -1, -1):
        k, out[j] = divmod(k, size)
    return tuple(out)


@dataclass
class OrbitDecomposition:
    """Orbits of the diagonal action on X^(p+1).

    ``reps`` holds lexicographically least tuple indices; ``orbit_of[t]`` is the
    position in ``reps`` of the orbit containing tuple ``t``.
    """

    reps: list
    orbit_of: np.ndarray
    sizes: list
    length: int
    set_size: int

    def rep_tuples(self):
        return [tuple_from_index(r, self.set_size, self.length) for r in self.reps]


def orbit_decompose(action: GroupAction, p, cap=ORBIT_TUPLE_CAP) -> OrbitDecomposition:
    """Orbit representatives of (p+1)-tuples under the diagonal action."""
    s = action.set_size
    length = p + 1
    total = s ** length
    if total * action.group.order > cap * 8 or total > cap:
        raise TooLarge(f"{total} tuples exceed cap {cap}")
    digits = np.indices((s,) * length).reshape(length, -1) if total else np.zeros((length, 0), int)
    best = np.full(total, total, dtype=np.int64)
    for perm in action.perm:
        pa = np.asarray(perm, dtype=np.int64)
        img = np.zeros(total, dtype=np.int64)
        for j in range(length):
            img = img * s + pa[digits[j]]
        np.minimum(best, img, out=best)
    reps, orbit_of, sizes = np.unique(best, return_inverse=True, return_counts=True)
    return OrbitDecomposition([int(r) for r in reps], orbit_of.astype(np.int64),
                              [int(c) for c in sizes], length, s)


# ---------------------------------------------------------------------------
# finite vector spaces
# ---------------------------------------------------------------------------

@dataclass
class VectorSpaceOverFq:
    """F_q^n with q prime; ``nonzero`` lists the nonzero vectors lexicographically."""

    q: int
    n: int
    nonzero: list = field(init=False)

    def __post_init__(self):
        if not (self.q >= 2 and all(self.q % k for k in range(2, self.q))):
            raise InputError("q must be prime")
        self.nonzero = [v for v in itertools.product(range(self.q), repeat=self.n) if any(v)]
        self.index = {v: i for i, v in enumerate(self.nonzero)}

    @property
    def size(self):
        return self.q ** self.n

    def span_dim(self, vectors):
        vs = list(vectors)
        return rank_mod_q(vs, self.q) if vs else 0

    def apply(self, M, v):
        return tuple(sum(M[i][k] * v[k] for k in range(self.n)) % self.q for i in range(self.n))

    def gl_action(self, G=None):
        """Action of GL_n(F_q) on the nonzero vectors."""
        if G is None:
            G = general_linear_group(self.n, self.q)
        perm = [tuple(self.index[self.apply(M, v)] for v in self.nonzero) for M in G.matrices]
        return GroupAction(G, len(self.nonzero), perm, labels=self.nonzero)


def gl_mapping_witness(v_tuple, w_tuple, space: VectorSpaceOverFq):
    """Invertible sigma with sigma v_i = w_i fixing a complement of span(v)+span(w).

    The complement is chosen greedily from standard basis vectors; on
    span(v)+span(w) the v's are extended by w's and the w's by v's.
    """
    q, n = space.q, space.n
    v = [tuple(x % q for x in t) for t in v_tuple]
    w = [tuple(x % q for x in t) for t in w_tuple]
    if len(v) != len(w):
        raise LengthMismatch("tuples have different lengths")
    if len(v) > n:
        raise NotIndependent("more vectors than the dimension")
    if v and (rank_mod_q(v, q) != len(v) or rank_mod_q(w, q) != len(w)):
        raise NotIndependent("tuple is not linearly independent")

    def extend(base, pool):
        out = list(base)
        for x in pool:
            if rank_mod_q(out + [x], q) > len(out):
                out.append(x)
        return out

    src = extend(v, w)
    dst = extend(w, v)
    std = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    comp = []
    for e in std:
        if rank_mod_q(src + comp + [e], q) > len(src) + len(comp):
            comp.append(e)
    src_cols = src + comp
    dst_cols = dst + comp
    S = tuple(tuple(c[i] for c in src_cols) for i in range(n))
    T = tuple(tuple(c[i] for c in dst_cols) for i in range(n))
    sigma = _mat_mul_mod(T, inverse_mod_q(S, q), q)
    return sigma, comp


# ---------------------------------------------------------------------------
# specifiers
# ---------------------------------------------------------------------------

def _split_product_args(arg):
    specs = []
    for tok in arg.split(","):
        if ":" in tok or not specs:
            specs.append(tok)
        else:
            specs[-1] += "," + tok
    return specs


def parse_group(spec: str) -> FiniteGroup:
    """Build a group from ``zmod:n``, ``sym:n``, ``dihedral:n``, ``gl:n,q``,
    ``product:a,b`` (nested specs allowed) or ``file:path``."""
    spec = spec.strip()
    if ":" not in spec:
        if spec in ("trivial", "1"):
            return trivial_group()
        if spec == "quaternion":
            return quaternion()
        raise InputError(f"unknown group specifier {spec!r}")
    kind, arg = spec.split(":", 1)
    try:
        if kind == "zmod":
            return cyclic(int(arg))
        if kind == "sym":
            n = int(arg)
            if n > 4:
                raise TooLarge("sym:n is limited to n <= 4")
            return symmetric(n)
        if kind == "dihedral":
            return dihedral(int(arg))
        if kind == "gl":
            n, q = (int(x) for x in arg.split(","))
            return general_linear_group(n, q)
        if kind == "product":
            parts = _split_product_args(arg)
            if len(parts) < 2:
                raise InputError("product needs two factors")
            out = parse_group(parts[0])
            for p in parts[1:]:
                out = direct_product(out, parse_group(p))
            return out
        if kind == "file":
            with open(arg) as fh:
                return FiniteGroup.from_json(json.load(fh))
    except ValueError as exc:
        raise InputError(f"bad group specifier {spec!r}: {exc}") from exc
    raise InputError(f"unknown group specifier {spec!r}")


def parse_subgroup(G: FiniteGroup, spec):
    """Subgroup elements from ``gen:a,b`` (generators) or ``elems:a,b``."""
    kind, _, arg = spec.partition(":")
    nums = [int(x) for x in arg.split(",") if x != ""]
    if kind == "gen":
        return G.generated_subgroup(nums)
    if kind == "elems":
        if not G.is_subgroup(nums):
            raise NotASubgroup("listed elements do not form a subgroup")
        return sorted(nums)
    raise InputError(f"unknown subgroup specifier {spec!r}")
