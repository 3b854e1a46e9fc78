"""
Registry of acceptance checks.

Each check computes its values, compares them with an independent oracle or
a tabulated value, and returns a ``CheckResult``.  The CLI ``verify`` command
and the test suite both run checks from this table.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import HypothesisFailed
from .exactla import FinAbGroup, GF, ZZ, Matrix, homology_at, parse_ring

SUITES = ("all", "ch1", "ch2", "ch3", "ch5")


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    lines: list = field(default_factory=list)

    @property
    def in_time(self):
        return self.seconds <= self.limit

    @property
    def ok(self):
        return self.passed and self.in_time

    def summary(self):
        status = "PASS" if self.ok else "FAIL"
        extra = "" if self.in_time else f" (over the {self.limit:.0f}s limit)"
        return f"[{status}] {self.number:>2}. {self.title} ({self.seconds:.1f}s){extra}"


@dataclass
class Check:
    number: int
    title: str
    suite: str
    limit: float
    func: object

    def run(self) -> CheckResult:
        lines = []
        t0 = time.perf_counter()
        passed = bool(self.func(lines))
        dt = time.perf_counter() - t0
        return CheckResult(self.number, self.title, passed, dt, self.limit, lines)


REGISTRY: dict = {}


def check(number, title, suite, limit):
    def deco(fn):
        REGISTRY[number] = Check(number, title, suite, limit, fn)
        return fn
    return deco


def _row(lines, label, expected, computed):
    ok = expected == computed
    lines.append(f"  {'ok ' if ok else 'BAD'} {label}: expected {expected}, computed {computed}")
    return ok


def _strs(groups):
    return [str(g) for g in groups]


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def periodic_cyclic_homology(n, N, ring=ZZ):
    """H_0..H_N(Z/n, R) from the periodic resolution
    ... -> ZG -(N)-> ZG -(t-1)-> ZG -> Z with trivial coefficients, where the
    maps become multiplication by 0 and by n."""
    ring = parse_ring(ring)
    mult = lambda k: Matrix.from_dense([[0 if k % 2 else n]]) if k >= 1 else Matrix.zeros(0, 1)
    out = []
    for k in range(N + 1):
        d_out = mult(k) if k >= 1 else Matrix.zeros(0, 1)
        d_in = mult(k + 1)
        out.append(homology_at(d_in.reduce(ring), d_out.reduce(ring), ring))
    return out


def brute_force_orbit_count(action, length):
    """Orbits of the diagonal action on tuples, by explicit orbit closure."""
    import itertools
    seen = set()
    count = 0
    for t in itertools.product(range(action.set_size), repeat=length):
        if t in seen:
            continue
        count += 1
        for perm in action.perm:
            seen.add(tuple(perm[x] for x in t))
    return count


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------

@check(1, "H0 = Z and H1 = abelianization", "ch1", 60)
def _c1(lines):
    from .groupcore import abelianization, cyclic, dihedral, direct_product, general_linear_group, symmetric
    from .homology import group_homology
    groups = [cyclic(n) for n in range(2, 7)] + [
        symmetric(3), dihedral(4), direct_product(cyclic(2), cyclic(2)),
        direct_product(cyclic(2), cyclic(4)), general_linear_group(2, 2)]
    ok = True
    for G in groups:
        h = group_homology(G, N=1).degrees
        ok &= _row(lines, f"{G.name} H0, H1", ["Z", str(abelianization(G))], _strs(h))
    return ok


@check(2, "cyclic pattern against the periodic resolution", "ch1", 120)
def _c2(lines):
    from .groupcore import cyclic
    from .homology import group_homology
    ok = True
    for n in (2, 3, 4, 6):
        h = group_homology(cyclic(n), N=5).degrees
        oracle = periodic_cyclic_homology(n, 5)
        pattern = [FinAbGroup(1)] + [FinAbGroup.cyclic(n) if k % 2 else FinAbGroup() for k in range(1, 6)]
        ok &= _row(lines, f"Z/{n} oracle", _strs(oracle), _strs(h))
        ok &= oracle == pattern
    return ok


@check(3, "Cartan dimensions of elementary abelian groups", "ch2", 180)
def _c3(lines):
    from .gradedalg import cartan_verify
    ok = True
    for p, d, N in ((2, 1, 5), (3, 1, 4), (2, 2, 4), (3, 2, 3)):
        rows = cartan_verify(p, d, N)
        ok &= _row(lines, f"(Z/{p})^{d} over F{p}",
                   [r.expected for r in rows], [r.computed for r in rows])
    return ok


@check(4, "Shapiro transport for Z/3 in S3", "ch1", 120)
def _c4(lines):
    from .gmodule import permutation_module, trivial_module
    from .groupcore import coset_action, subgroup, symmetric
    from .homology import group_homology, shapiro_transport
    G = symmetric(3)
    H_elems = [g for g in range(G.order) if G.element_order(g) in (1, 3)]
    H, _ = subgroup(G, H_elems)
    oracle = periodic_cyclic_homology(3, 3)
    direct = group_homology(G, permutation_module(coset_action(G, H_elems)), 3).degrees
    ok = _row(lines, "H_k(Z/3) by periodic oracle vs H_k(S3, Z[S3/H])", _strs(oracle), _strs(direct))
    tr = shapiro_transport(G, H_elems, trivial_module(H), 3)
    isos = [tr.is_isomorphism(k) for k in range(4)]
    ok &= _row(lines, "transport invertible on homology", [True] * 4, isos)
    return ok


@check(5, "conjugation acts trivially on homology", "ch1", 120)
def _c5(lines):
    from .gmodule import trivial_module
    from .groupcore import cyclic, dihedral, symmetric
    from .homology import conjugation_action_map
    ok = True
    for G in (symmetric(3), dihedral(4), cyclic(4)):
        for R in (ZZ, GF(2)):
            M = trivial_module(G, R)
            bad = [(g, k) for g in range(G.order)
                   for k, good in enumerate(conjugation_action_map(G, g, M, 2).is_identity(k)
                                            for k in range(3)) if not good]
            ok &= _row(lines, f"{G.name} over {R}: non-identity (g, k)", [], bad)
    return ok


@check(6, "spectral engine on 50 random filtered complexes", "ch3", 120)
def _c6(lines):
    from .spectral import random_filtered_complex, spectral_sequence
    bad = []
    for seed in range(50):
        p = (2, 3)[seed % 2]
        fc = random_filtered_complex(p, max_degree=5, max_rank=12, seed=seed)
        ss = spectral_sequence(fc)       # audits every page against the next
        if not (ss.convergence_audit() and ss.stabilized()):
            bad.append(seed)
    return _row(lines, "seeds failing convergence", [], bad)


@check(7, "acyclic coefficients: collapse and H_p(G, C) = H_p(G)", "ch3", 120)
def _c7(lines):
    from .complexes import ordered_simplicial
    from .groupcore import cyclic, regular_action
    from .spectral import acyclic_coefficient_ss
    ok = True
    for n in (2, 3):
        G = cyclic(n)
        rep = acyclic_coefficient_ss(G, ordered_simplicial(regular_action(G), 3), 2, f"F{n}")
        upper = [k for k, v in rep.prime_ss.pages[2].entries.items() if k[1] > 0 and v]
        ok &= _row(lines, f"Z/{n}: nonzero E^2 cells above q = 0", [], upper)
        ok &= _row(lines, f"Z/{n}: collapse at E^2", True, rep.collapses)
        ok &= _row(lines, f"Z/{n}: dims H_p(G, C) vs H_p(G)", rep.group_dims, rep.total_dims)
        ok &= _row(lines, f"Z/{n}: epsilon isomorphisms", [True] * 3, rep.epsilon_iso)
    return ok


@check(8, "LHS E^2 audits", "ch3", 120)
def _c8(lines):
    from .gmodule import trivial_module
    from .groupcore import cyclic, direct_product
    from .spectral import lhs_e2
    V = direct_product(cyclic(2), cyclic(2))
    r = lhs_e2(V, [0, 1], trivial_module(V, GF(2)), 3, 3)
    ok = _row(lines, "V4, H = factor: sum of E^2 per n", [1, 2, 3, 4], r.sums)
    ok &= _row(lines, "V4: dim H_n(G)", [1, 2, 3, 4], r.abutment[:4])
    Z4 = cyclic(4)
    r = lhs_e2(Z4, [0, 2], trivial_module(Z4, GF(2)), 3, 3)
    ok &= _row(lines, "Z/4, H = Z/2: E^2 dims", [1] * 16, [r.e2[(p, q)] for q in range(4) for p in range(4)])
    ok &= _row(lines, "Z/4: strict inequality flags", [False, True, True, True], r.flags)
    lines.append("  Z/4 E^2 grid:")
    lines.extend("    " + ln for ln in r.grid().splitlines())
    return ok


@check(9, "triangle lemma on synthetic pages", "ch3", 60)
def _c9(lines):
    from .spectral import filtered_from_pieces, spectral_sequence, triangle_check
    good = filtered_from_pieces([("cycle", 0, 0), ("cycle", 1, 0), ("cycle", 2, 0),
                                 ("pair", 2, 3, 0)], 2, 3, seed=7)
    rep = triangle_check(spectral_sequence(good), 2)
    ok = _row(lines, "pi_q verdicts", {0: "iso", 1: "iso", 2: "surjective-only"}, rep.verdicts)
    ok &= _row(lines, "conclusion holds", True, rep.conclusion_holds)
    bad = filtered_from_pieces([("cycle", 0, 0), ("cycle", 1, 0), ("cycle", 2, 1),
                                ("cycle", 1, 1)], 3, 2, seed=3)
    try:
        triangle_check(spectral_sequence(bad), 2)
        cell = None
    except HypothesisFailed as exc:
        cell = exc.cell
    ok &= _row(lines, "first offending cell of a violating page", (1, 0), cell)
    return ok


@check(10, "orbit machinery over F2 and F3", "ch5", 180)
def _c10(lines):
    from .stabilitylab import join_homotopy_check, orbit_row_complex, row_filtration_homology, vector_orbit_complex
    ok = True
    for q, expected in ((2, [1, 2]), (3, [1, 3])):
        cx = vector_orbit_complex(1, q, 2)
        checked, fails = join_homotopy_check(cx, 2)
        ok &= _row(lines, f"q={q}: join identity failures of {checked}", 0, fails)
        orc = orbit_row_complex(1, q, 2)
        brute = [brute_force_orbit_count(cx.action, p + 1) for p in range(2)]
        ok &= _row(lines, f"q={q}: B0, B1 brute force vs engine", brute, orc.orbit_counts()[:2])
        ok &= _row(lines, f"q={q}: B0, B1 tabulated", expected, brute)
        ok &= _row(lines, f"q={q}: d1 d1 = 0", True, orc.d1_squared_zero())
        for k in (0, 1):
            for L in (1, 2):
                r = row_filtration_homology(1, q, k, L)
                ok &= _row(lines, f"q={q} k={k} L={L}: orbit SNF vs coinvariant oracle",
                           _strs(r.oracle), _strs(r.homology))
                lines.append(f"      k-acyclic verdict (reported): {r.k_acyclic}")
    return ok


@check(11, "counting sub-lemma min weight = (p-1)m", "ch5", 30)
def _c11(lines):
    from .stabilitylab import min_weight_modular
    ok = True
    for p, m in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1)):
        ok &= _row(lines, f"(p, m) = ({p}, {m})", (p - 1) * m, min_weight_modular(p, m))
    return ok


@check(12, "Pontryagin product laws", "ch2", 120)
def _c12(lines):
    from .groupcore import cyclic, direct_product
    from .homology import homology_classes, pontryagin_product
    ok = True
    R = GF(2)
    for G in (cyclic(2), direct_product(cyclic(2), cyclic(2))):
        basis = {k: homology_classes(G, R, k, 3) for k in range(4)}
        one = basis[0][0]
        mul = lambda a, b: pontryagin_product(G, R, a, b, 3).coords
        fails = {"unit": 0, "assoc": 0, "comm": 0}
        for k in range(4):
            for a in basis[k]:
                if not (mul(one, a) == a.coords == mul(a, one)):
                    fails["unit"] += 1
        for i in range(4):
            for j in range(4 - i):
                for a in basis[i]:
                    for b in basis[j]:
                        ab, ba = mul(a, b), mul(b, a)
                        sign = (-1) ** (i * j)
                        if [x % 2 for x in ab] != [(sign * x) % 2 for x in ba]:
                            fails["comm"] += 1
                        for k in range(4 - i - j):
                            for c in basis[k]:
                                ab_c = pontryagin_product(G, R, pontryagin_product(G, R, a, b, 3), c, 3)
                                a_bc = pontryagin_product(G, R, a, pontryagin_product(G, R, b, c, 3), 3)
                                if ab_c.coords != a_bc.coords:
                                    fails["assoc"] += 1
        ok &= _row(lines, f"{G.name}: law failures", {"unit": 0, "assoc": 0, "comm": 0}, fails)
    G = cyclic(2)
    x = homology_classes(G, R, 1, 3)[0]
    ok &= _row(lines, "Z/2: x * x", [0], pontryagin_product(G, R, x, x, 3).coords)
    # divided powers: x_1 * x_2 = 3 x_3, which is nonzero mod 2
    x2 = homology_classes(G, R, 2, 3)[0]
    ok &= _row(lines, "Z/2: x_1 * x_2 (non-vacuity)", [1], pontryagin_product(G, R, x, x2, 3).coords)
    return ok


def groups_up_to_order_8():
    from .groupcore import cyclic, dihedral, direct_product, quaternion, symmetric, trivial_group
    c = cyclic
    return ([trivial_group()] + [c(n) for n in range(2, 9)]
            + [direct_product(c(2), c(2)), direct_product(c(2), c(4)),
               direct_product(direct_product(c(2), c(2)), c(2)),
               symmetric(3), dihedral(4), quaternion()])


@check(13, "universal coefficients for groups of order <= 8", "ch5", 300)
def _c13(lines):
    from .homology import uct_compare
    ok = True
    for G in groups_up_to_order_8():
        for p in (2, 3):
            rows = uct_compare(G, p, 3)
            ok &= _row(lines, f"{G.name} p={p}", [r.expected for r in rows], [r.computed for r in rows])
    return ok


@check(14, "non-example: H1 of GL2(F2) and GL3(F2)", "ch5", 30)
def _c14(lines):
    from .stabilitylab import gl_h1_non_example
    vals = {k: str(v) for k, v in gl_h1_non_example().items()}
    lines.append("  reported: stabilization in degree one fails over F2, so the"
                 " infinite-field hypothesis cannot be dropped")
    return _row(lines, "H1 values", {"GL_2(F_2)": "Z/2", "GL_3(F_2)": "0"}, vals)


# ---------------------------------------------------------------------------

def run_suite(suite="all", out=None, verbose=True):
    """Run the checks of a suite; returns the list of results."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    results = []
    for num in sorted(REGISTRY):
        c = REGISTRY[num]
        if suite != "all" and c.suite != suite:
            continue
        res = c.run()
        results.append(res)
        if out is not None:
            out.write(res.summary() + "\n")
            if verbose or not res.ok:
                for ln in res.lines:
                    out.write(ln + "\n")
            out.flush()
    return results
