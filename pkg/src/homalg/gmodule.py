"""
Coefficient modules: free R-modules with a left G-action.

A module of rank ``r`` stores one invertible ``r x r`` sparse matrix per group
element.  Tensor products over G use the right structure ``m.g := g^-1 . m``
throughout; nothing else in the package ever builds a right module.
"""

from __future__ import annotations

from .errors import GroupMismatch, InputError, NotAHomomorphism, RingMismatch
from .exactla import (FinAbGroup, Matrix, ZZ, block_diagonal, hstack,
                      invariant_factors, parse_ring, rank)
from .groupcore import FiniteGroup, GroupAction, check_homomorphism, coset_action, subgroup


class GModule:
    """Free module over ``ring`` with ``action[g]`` the matrix of ``g``."""

    def __init__(self, group: FiniteGroup, ring, rank_: int, action, check=True):
        self.group = group
        self.ring = parse_ring(ring)
        self.rank = rank_
        self.action = [a.reduce(self.ring) for a in action]
        if len(self.action) != group.order:
            raise InputError("need one action matrix per group element")
        for a in self.action:
            if a.shape != (rank_, rank_):
                raise InputError("action matrix has the wrong shape")
        if check:
            self.check(exhaustive=group.order <= 24)

    def check(self, exhaustive=True):
        G = self.group
        if self.action[G.identity] != Matrix.identity(self.rank).reduce(self.ring):
            raise NotAHomomorphism("identity does not act as the identity")
        pairs = [(a, b) for a in range(G.order) for b in range(G.order)]
        if not exhaustive:
            pairs = pairs[:: max(1, len(pairs) // 500)]
        for a, b in pairs:
            lhs = self.action[G.table[a][b]]
            rhs = self.action[a].matmul(self.action[b], self.ring)
            if lhs != rhs:
                raise NotAHomomorphism(f"action({a}*{b}) != action({a}) action({b})")
        return True

    def act(self, g, vec):
        """g . vec for a sparse vector ``{coordinate: value}``."""
        return self.action[g].apply(vec, self.ring)

    def change_ring(self, ring):
        ring = parse_ring(ring)
        if ring == self.ring:
            return self
        if self.ring != ZZ:
            raise RingMismatch(f"cannot change ring from {self.ring} to {ring}")
        return GModule(self.group, ring, self.rank, self.action, check=False)

    @property
    def is_trivial(self):
        ident = Matrix.identity(self.rank).reduce(self.ring)
        return all(a == ident for a in self.action)

    def to_json(self):
        out = self.ring.to_json()
        out["rank"] = self.rank
        ident = Matrix.identity(self.rank).reduce(self.ring)
        out["action"] = {str(g): a.to_json() for g, a in enumerate(self.action) if a != ident}
        return out

    @classmethod
    def from_json(cls, group, obj):
        ring = parse_ring(obj["ring"], obj.get("p"))
        r = int(obj["rank"])
        action = [Matrix.identity(r)] * group.order
        for g, m in obj.get("action", {}).items():
            action[int(g)] = Matrix.from_json(m)
        return cls(group, ring, r, action)

    def __repr__(self):
        return f"GModule({self.group.name}, {self.ring}, rank={self.rank})"


def trivial_module(G: FiniteGroup, ring=ZZ, rank=1) -> GModule:
    ident = Matrix.identity(rank)
    return GModule(G, ring, rank, [ident] * G.order, check=False)


def permutation_module(action: GroupAction, ring=ZZ) -> GModule:
    n = action.set_size
    mats = [Matrix(n, n, {x: {p[x]: 1} for x in range(n)}) for p in action.perm]
    return GModule(action.group, ring, n, mats, check=False)


def sign_module(G: FiniteGroup, signs, ring=ZZ) -> GModule:
    """Rank-one module where g acts by ``signs[g]`` (a homomorphism to +-1)."""
    mats = [Matrix(1, 1, {0: {0: int(s)}}) for s in signs]
    return GModule(G, ring, 1, mats)


def induced_module(G: FiniteGroup, H_elems, M: GModule) -> GModule:
    """ZG (x)_H M with basis t_i (x) m_a at index ``i * rank(M) + a``.

    The transversal t_i is the coset representative list of ``coset_action``
    (t_0 = 1).  If g t_i = t_j h with h in H, then g acts on block i by
    sending it to block j through action_M(h).
    """
    H, emb = subgroup(G, H_elems)
    if M.group != H:
        raise GroupMismatch("module is not over the given subgroup (in embedding order)")
    pos = {x: k for k, x in enumerate(emb)}
    act = coset_action(G, H_elems)
    reps = act.reps
    r = M.rank
    n = len(reps)
    mats = []
    for g in range(G.order):
        cols = {}
        for i, t in enumerate(reps):
            j = act.perm[g][i]
            h = G.table[G.inverse[reps[j]]][G.table[g][t]]
            block = M.action[pos[h]]
            for a in range(r):
                c = block.col(a)
                if c:
                    cols[i * r + a] = {j * r + b: v for b, v in c.items()}
        mats.append(Matrix(n * r, n * r, cols))
    out = GModule(G, M.ring, n * r, mats, check=False)
    out.coset_action = act
    return out


def restrict_module(G: FiniteGroup, phi, M: GModule) -> GModule:
    """Pull back M along a homomorphism ``phi: G -> M.group`` (list of images)."""
    check_homomorphism(G, M.group, phi)
    return GModule(G, M.ring, M.rank, [M.action[phi[g]] for g in range(G.order)], check=False)


def module_direct_sum(M: GModule, N: GModule) -> GModule:
    if M.group != N.group:
        raise GroupMismatch("modules over different groups")
    if M.ring != N.ring:
        raise RingMismatch("modules over different rings")
    mats = [block_diagonal([a, b]) for a, b in zip(M.action, N.action)]
    return GModule(M.group, M.ring, M.rank + N.rank, mats, check=False)


def coinvariants(M: GModule):
    """M / <gm - m>; a FinAbGroup over Z, a dimension over a field."""
    ident = Matrix.identity(M.rank)
    rels = hstack([a - ident for a in M.action], nrows=M.rank).reduce(M.ring)
    if M.ring.is_field:
        return M.rank - rank(rels, M.ring)
    inv = invariant_factors(rels)
    return FinAbGroup(M.rank - len(inv), tuple(d for d in inv if d != 1))
