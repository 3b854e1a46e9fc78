"""
Graded algebras on a free module of rank d: tensor, exterior, symmetric and
shuffle algebras, given by explicit word bases.

Words are tuples over ``1..d``.  The shuffle algebra uses the orbit-sum basis
``e_w`` = sum of the distinct rearrangements of the sorted word ``w``, so
``e_1 * e_1 = 2 e_11`` and ``e_1 * e_2 = e_12``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactla import ZZ, parse_ring

KINDS = ("tensor", "exterior", "symmetric", "shuffle")


@dataclass
class GradedBasis:
    kind: str
    d: int
    k: int
    words: list

    def __len__(self):
        return len(self.words)


def graded_basis(kind, d, k) -> GradedBasis:
    """Basis words of the degree-k component (generators in degree one)."""
    if kind not in KINDS:
        raise ValueError(f"unknown algebra kind {kind!r}")
    letters = range(1, d + 1)
    if kind == "tensor":
        words = list(itertools.product(letters, repeat=k))
    elif kind == "exterior":
        words = list(itertools.combinations(letters, k))
    else:
        words = list(itertools.combinations_with_replacement(letters, k))
    return GradedBasis(kind, d, k, words)


class PowerSeries:
    """Truncated power series with exact coefficients in degrees 0..N."""

    def __init__(self, coeffs, N=None):
        coeffs = list(coeffs)
        self.N = len(coeffs) - 1 if N is None else N
        coeffs = coeffs[: self.N + 1]
        self.coeffs = coeffs + [0] * (self.N + 1 - len(coeffs))

    @classmethod
    def one(cls, N):
        return cls([1], N)

    def __mul__(self, other):
        N = min(self.N, other.N)
        out = [0] * (N + 1)
        for i, a in enumerate(self.coeffs[: N + 1]):
            if a:
                for j, b in enumerate(other.coeffs[: N + 1 - i]):
                    out[i + j] += a * b
        return PowerSeries(out, N)

    def __pow__(self, n):
        out = PowerSeries.one(self.N)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self):
        """1 / f for f with invertible constant term."""
        a0 = self.coeffs[0]
        if a0 == 0:
            raise ZeroDivisionError("constant term is zero")
        out = [Fraction(1) / a0]
        for n in range(1, self.N + 1):
            s = sum(self.coeffs[k] * out[n - k] for k in range(1, n + 1))
            out.append(-s / a0)
        return PowerSeries([int(x) if x.denominator == 1 else x for x in out], self.N)

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and self.coeffs == other.coeffs

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        return f"PowerSeries({self.coeffs})"


def hilbert_series(kind, d, N, generator_degree=1) -> PowerSeries:
    """Dimension of each degree, counted from the word bases."""
    out = [0] * (N + 1)
    k = 0
    while k * generator_degree <= N:
        n = len(graded_basis(kind, d, k))
        if kind == "exterior" and n == 0:
            break
        out[k * generator_degree] += n
        k += 1
        if generator_degree == 0:
            break
    return PowerSeries(out, N)


# ---------------------------------------------------------------------------
# shuffle algebra
# ---------------------------------------------------------------------------

def _shuffles(u, v):
    """All interleavings of u and v, with multiplicity."""
    if not u:
        yield tuple(v)
        return
    if not v:
        yield tuple(u)
        return
    for rest in _shuffles(u[1:], v):
        yield (u[0],) + rest
    for rest in _shuffles(u, v[1:]):
        yield (v[0],) + rest


def _orbit_sum(word):
    """e_w as a tensor: each distinct rearrangement with coefficient one."""
    return {p: 1 for p in set(itertools.permutations(word))}


def shuffle_tensors(x, y, ring=ZZ):
    """Shuffle product of two tensors given as ``{word: coefficient}``."""
    ring = parse_ring(ring)
    out = {}
    for u, a in x.items():
        for v, b in y.items():
            for w in _shuffles(u, v):
                out[w] = out.get(w, 0) + a * b
    return {w: ring.normalize(c) for w, c in out.items() if ring.normalize(c)}


def to_shuffle_basis(tensor, ring=ZZ):
    """Coordinates of a symmetric tensor in the orbit-sum basis."""
    ring = parse_ring(ring)
    out = {}
    for w, c in tensor.items():
        key = tuple(sorted(w))
        if key in out and out[key] != c:
            raise ValueError("tensor is not symmetric")
        out[key] = c
    for key, c in out.items():
        for p in set(itertools.permutations(key)):
            if ring.normalize(tensor.get(p, 0)) != ring.normalize(c):
                raise ValueError("tensor is not symmetric")
    return {k: c for k, c in out.items() if c}


def shuffle_product(u, v, ring=ZZ):
    """e_u * e_v in the orbit-sum basis of the shuffle algebra."""
    ring = parse_ring(ring)
    return to_shuffle_basis(shuffle_tensors(_orbit_sum(tuple(u)), _orbit_sum(tuple(v)), ring), ring)


def shuffle_multiply(x, y, ring=ZZ):
    """Product of two shuffle-algebra elements ``{sorted word: coefficient}``."""
    ring = parse_ring(ring)
    out = {}
    for u, a in x.items():
        for v, b in y.items():
            for w, c in shuffle_product(u, v, ring).items():
                out[w] = out.get(w, 0) + a * b * c
    return {w: ring.normalize(c) for w, c in out.items() if ring.normalize(c)}


def symm_shuffle_iso(d, k):
    """The basis bijection e_i1 ... e_ik (symmetric) <-> e_{i1..ik} (shuffle).

    This is an isomorphism of graded modules only: e_1 e_1 is a basis vector
    of S(M) while e_1 * e_1 = 2 e_11 in the shuffle algebra.
    """
    sym = graded_basis("symmetric", d, k).words
    shu = graded_basis("shuffle", d, k).words
    return list(zip(sym, shu))


# ---------------------------------------------------------------------------
# dimension oracles for elementary abelian groups
# ---------------------------------------------------------------------------

def cartan_expected_dims(p, d, N) -> PowerSeries:
    """Expected dims of H_*((Z/p)^d, k): Lambda(V) (x) S(V) with generators in
    degrees one and two for odd p, S(V) for p = 2, Lambda(V) over Q."""
    ext = PowerSeries([1, 1], N) ** d
    if p in ("Q", "q", 0):
        return ext
    p = int(p)
    if p == 2:
        return PowerSeries([1, -1], N).inverse() ** d
    sym2 = PowerSeries([1, 0, -1], N).inverse() ** d
    return ext * sym2


@dataclass
class CartanRow:
    degree: int
    expected: int
    computed: int

    @property
    def passed(self):
        return self.expected == self.computed


def cartan_verify(p, d, N):
    """Compare the expected series with group homology of (Z/p)^d."""
    from .gmodule import trivial_module
    from .groupcore import cyclic, direct_product, trivial_group
    from .homology import group_homology

    if p in ("Q", "q", 0):
        raise ValueError("cartan_verify needs a prime p")
    p = int(p)
    G = trivial_group() if d == 0 else cyclic(p)
    for _ in range(d - 1):
        G = direct_product(G, cyclic(p))
    res = group_homology(G, trivial_module(G, parse_ring(f"F{p}")), N)
    exp = cartan_expected_dims(p, d, N)
    return [CartanRow(k, exp[k], res.degrees[k]) for k in range(N + 1)]
