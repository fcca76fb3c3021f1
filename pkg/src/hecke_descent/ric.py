"""RIC functors realized on finite groups.

For a finite group G and a subgroup J, M(K) is the module of functions on
J\\G that are invariant under right translation by K.  Functions are stored as
tuples indexed by the elements of G (constant on left J-cosets).  Pullback
along an inclusion is the identity on functions, pushforward is the trace over
K/L, and g acts by right translation, (g.f)(x) = f(xg).

The source functor N lives on a subgroup H containing J, with J = ker(nu)
normal in H.  Its functions are supported on H, so extension by zero into
J\\G is the identity on tuples and the pushforward iota is a plain trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class RicInstance:
    def __init__(self, G, J, support=None, mutation=None, name=""):
        self.G = G
        self.J = frozenset(J)
        self.support = frozenset(range(G.order)) if support is None else frozenset(support)
        self.mutation = mutation
        self.name = name
        self._basis = {}

    # -- functions ---------------------------------------------------------------
    def zero(self):
        return (0,) * self.G.order

    def act(self, g, f):
        t = self.G.table
        return tuple(f[t[x][g]] for x in range(self.G.order))

    def add(self, f, h):
        return tuple(a + b for a, b in zip(f, h))

    def scale(self, c, f):
        return tuple(c * a for a in f)

    def indicator(self, S):
        S = set(S)
        return tuple(1 if x in S else 0 for x in range(self.G.order))

    def is_invariant(self, f, K):
        t = self.G.table
        return all(f[t[x][k]] == f[x] for k in K for x in range(self.G.order))

    def double_cosets(self, K):
        """Blocks J x K inside the support, ordered by least element."""
        if K not in self._basis:
            G = self.G
            reps, seen = [], set()
            for x in sorted(self.support):
                if x in seen:
                    continue
                dc = G.double_coset(self.J, x, K)
                seen |= dc
                reps.append(dc)
            self._basis[K] = reps
        return self._basis[K]

    def basis(self, K):
        return [self.indicator(dc) for dc in self.double_cosets(K)]

    def coordinates(self, f, K):
        return [f[min(dc)] for dc in self.double_cosets(K)]

    # -- functor data -----------------------------------------------------------------
    def morphism_ok(self, g, L, K):
        """[g]_{L,K} exists iff g^-1 L g lies in K."""
        return self.G.conj(self.G.inv[g], L) <= K

    def pull(self, g, L, K, f):
        """[g]^*: M(K) -> M(L)."""
        return self.act(g, f)

    def push(self, g, L, K, f):
        """[g]_*: M(L) -> M(K), trace over K / g^-1 L g of g^-1 . f."""
        G = self.G
        gi = G.inv[g]
        src = G.conj(gi, L)
        h = self.act(gi, f)
        if self.mutation == "unnormalized_trace" and g == G.identity and L != K:
            reps = sorted(K)
        else:
            reps = G.left_cosets(K, src)
        out = self.zero()
        for r in reps:
            out = self.add(out, self.act(r, h))
        return out

    def pr_pull(self, L, K, f):
        return self.pull(self.G.identity, L, K, f)

    def pr_push(self, L, K, f):
        return self.push(self.G.identity, L, K, f)


@dataclass
class MackeyPushforward:
    """iota_*: N -> M for H <= G, both built on the same J."""

    N: RicInstance
    M: RicInstance
    H: frozenset

    def apply(self, U, K, f):
        """iota_{U,K,*}: extend by zero (implicit) then trace over K/U."""
        if not U <= K:
            raise ValueError("incompatible levels")
        G = self.M.G
        out = self.M.zero()
        for r in G.left_cosets(K, U):
            out = self.M.add(out, self.M.act(r, f))
        return out


def build_finite_model(G, H, J, name=""):
    """Return (N, M, iota) for H <= G and J normal in H with H/J abelian."""
    H, J = frozenset(H), frozenset(J)
    if not J <= H or not G.is_normal(J, H):
        raise ValueError("J must be a normal subgroup of H")
    t = G.table
    for a in H:
        for b in H:
            comm = t[t[a][b]][t[G.inv[a]][G.inv[b]]]
            if comm not in J:
                raise ValueError("H/J must be abelian")
    M = RicInstance(G, J, name=name + ":M")
    N = RicInstance(G, J, support=H, name=name + ":N")
    return N, M, MackeyPushforward(N, M, H)


# -- Hecke operators and special classes -----------------------------------------

def hecke_apply(M, sigma, K, Kp, f):
    """[K sigma K']_*: M(K) -> M(K')."""
    G = M.G
    sKs = G.conj(sigma, Kp)
    V = K & sKs
    f1 = M.pr_pull(V, K, f)
    f2 = M.pr_push(V, sKs, f1)
    return M.push(sigma, sKs, Kp, f2)


def mixed_hecke_apply(iota, U, sigma, K, x):
    """[U sigma K]_*: N(U) -> M(K)."""
    G = iota.M.G
    sKs = G.conj(sigma, K)
    V = U & sKs
    x1 = iota.N.pr_pull(V, U, x)
    x2 = iota.apply(V, sKs, x1)
    return iota.M.push(sigma, sKs, K, x2)


def identity_component(N, V):
    """Characteristic function of J V, the component over the identity."""
    G = N.G
    return N.indicator(G.double_coset(N.J, G.identity, V))


def fundamental_class(N):
    return N.indicator(N.support)


def y_class(iota, g, K):
    G = iota.M.G
    gKg = G.conj(g, K)
    V = iota.H & gKg
    x = identity_component(iota.N, V)
    return iota.M.push(g, gKg, K, iota.apply(V, gKg, x))


def x_class(iota, g, K):
    G = iota.M.G
    gKg = G.conj(g, K)
    V = iota.H & gKg
    x = fundamental_class(iota.N)
    return iota.M.push(g, gKg, K, iota.apply(V, gKg, x))


def component_reps(G, H, J, V):
    """Representatives h in H of H / JV, i.e. of the component group at level V."""
    JV = frozenset(G.table[j][v] for j in J for v in V)
    reps, seen = [], set()
    for h in sorted(H):
        if h in seen:
            continue
        coset = {G.table[h][x] for x in JV}
        seen |= coset
        reps.append(h)
    return reps


# -- weighted cycle lists ------------------------------------------------------------

@dataclass
class WeightedCycleList:
    """Formal combination of labelled classes at a fixed level."""

    level: object
    entries: dict = field(default_factory=dict)  # label -> Fraction

    def add(self, label, coeff):
        c = self.entries.get(label, Fraction(0)) + Fraction(coeff)
        if c == 0:
            self.entries.pop(label, None)
        else:
            self.entries[label] = c

    def total(self):
        return sum(self.entries.values(), Fraction(0))

    def items(self):
        return sorted(self.entries.items(), key=lambda kv: _label_sort(kv[0]))

    def is_integral(self):
        return all(c.denominator == 1 for c in self.entries.values())

    def __eq__(self, other):
        return isinstance(other, WeightedCycleList) and self.entries == other.entries

    def __len__(self):
        return len(self.entries)


def _label_sort(label):
    return label.sort_key() if hasattr(label, "sort_key") else label


def finite_label(M, g, K):
    """Canonical key of the double coset J g K: its least element."""
    return min(M.G.double_coset(M.J, g, K))


def evaluate_y_list(iota, wl, K):
    M = iota.M
    out = tuple(Fraction(0) for _ in range(M.G.order))
    for label, c in wl.items():
        out = M.add(out, M.scale(c, y_class(iota, label, K)))
    return out


# -- axiom suite ------------------------------------------------------------------------

AXIOMS = ("C1", "C2", "C3", "Galois", "Cohomological", "Mackey")


@dataclass
class AxiomResult:
    name: str
    checked: int = 0
    failures: int = 0
    first_failure: str = ""

    @property
    def passed(self):
        return self.failures == 0

    def record(self, ok, where):
        self.checked += 1
        if not ok:
            self.failures += 1
            if not self.first_failure:
                self.first_failure = where


def check_axioms(M, levels=None):
    """Exhaustively test the RIC axioms over all given levels."""
    G = M.G
    levels = G.subgroups() if levels is None else levels
    res = {a: AxiomResult(a) for a in AXIOMS}
    ident = G.identity

    for K in levels:
        B = M.basis(K)
        # C1: the same module carries both functors; identities and composition laws
        for f in B:
            res["C1"].record(M.pr_pull(K, K, f) == f and M.pr_push(K, K, f) == f, f"K={sorted(K)}")
        for L in levels:
            if not L <= K:
                continue
            for Lp in levels:
                if not Lp <= L:
                    continue
                for f in B:
                    two = M.pr_pull(Lp, L, M.pr_pull(L, K, f))
                    res["C1"].record(two == M.pr_pull(Lp, K, f), "pullback composition")
                for f in M.basis(Lp):
                    two = M.pr_push(L, K, M.pr_push(Lp, L, f))
                    res["C1"].record(two == M.pr_push(Lp, K, f), "pushforward composition")
        # C2 and C3
        for g in range(G.order):
            gKg = G.conj(g, K)
            for f in B:
                lhs = M.pull(g, gKg, K, f)
                rhs = M.push(G.inv[g], K, gKg, f)
                res["C2"].record(lhs == rhs, f"K={sorted(K)} g={g}")
        for k in sorted(K):
            for f in B:
                res["C3"].record(M.push(k, K, K, f) == f, f"K={sorted(K)} gamma={k}")

    for K in levels:
        for L in levels:
            if not L <= K:
                continue
            idx = len(K) // len(L)
            for f in M.basis(K):
                res["Cohomological"].record(
                    M.pr_push(L, K, M.pr_pull(L, K, f)) == M.scale(idx, f),
                    f"L={sorted(L)} K={sorted(K)}")
            if G.is_normal(L, K):
                res["Galois"].record(_galois_ok(M, L, K), f"L={sorted(L)} K={sorted(K)}")
            for Lp in levels:
                if not Lp <= K:
                    continue
                for f in M.basis(Lp):
                    res["Mackey"].record(_mackey_ok(M, K, L, Lp, f), f"K={sorted(K)} L={sorted(L)} L'={sorted(Lp)}")
    return res


def _galois_ok(M, L, K):
    """pr^* maps M(K) injectively onto the K/L-invariants of M(L)."""
    G = M.G
    images = [M.pr_pull(L, K, f) for f in M.basis(K)]
    # independence: nonzero with disjoint supports
    supports = [frozenset(i for i, v in enumerate(f) if v) for f in images]
    if any(not s for s in supports):
        return False
    if sum(len(s) for s in supports) != len(frozenset().union(*supports)):
        return False
    # invariants of the permutation module M(L) under K: orbit sums of basis blocks
    blocks = M.double_cosets(L)
    where = {}
    for i, dc in enumerate(blocks):
        for x in dc:
            where[x] = i
    parent = list(range(len(blocks)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, dc in enumerate(blocks):
        x = min(dc)
        for k in K:
            y = G.table[x][G.inv[k]]
            a, b = find(i), find(where[y])
            if a != b:
                parent[a] = b
    groups = {}
    for i, dc in enumerate(blocks):
        groups.setdefault(find(i), set()).update(dc)
    orbit_sums = {frozenset(s) for s in groups.values()}
    return orbit_sums == set(supports)


def _mackey_ok(M, K, L, Lp, f):
    G = M.G
    lhs = M.pr_pull(L, K, M.pr_push(Lp, K, f))
    rhs = M.zero()
    for d in G.double_cosets(Lp, K, L):
        Ld = Lp & G.conj(d, L)
        part = M.push(d, Ld, L, M.pr_pull(Ld, Lp, f))
        rhs = M.add(rhs, part)
    return lhs == rhs


def check_pushforward(iota, levels=None):
    """Compatibility with twists and the Mackey property for iota."""
    G = iota.M.G
    H = iota.H
    levels = G.subgroups() if levels is None else levels
    compat = AxiomResult("pushforward")
    mackey = AxiomResult("Mackey pushforward")
    N, M = iota.N, iota.M
    for K in levels:
        U = H & K
        for L in levels:
            V = H & L
            for h in sorted(H):
                if not M.morphism_ok(h, L, K):
                    continue
                for x in N.basis(V):
                    lhs = M.push(h, L, K, iota.apply(V, L, x))
                    rhs = iota.apply(U, K, N.push(h, V, U, x))
                    compat.record(lhs == rhs, f"h={h} L={sorted(L)} K={sorted(K)}")
    for K in levels:
        for L in levels:
            if not L <= K:
                continue
            for V in levels:
                if not V <= K or not V <= H:
                    continue
                for x in N.basis(V):
                    lhs = M.pr_pull(L, K, iota.apply(V, K, x))
                    rhs = M.zero()
                    for gamma in G.double_cosets(V, K, L):
                        rhs = M.add(rhs, mixed_hecke_apply(iota, V, gamma, L, x))
                    mackey.record(lhs == rhs, f"V={sorted(V)} L={sorted(L)} K={sorted(K)}")
    return {"pushforward": compat, "Mackey pushforward": mackey}


__all__ = [
    "RicInstance", "MackeyPushforward", "WeightedCycleList", "AxiomResult", "AXIOMS",
    "build_finite_model", "hecke_apply", "mixed_hecke_apply", "y_class", "x_class",
    "identity_component", "fundamental_class", "component_reps", "check_axioms",
    "check_pushforward", "finite_label", "evaluate_y_list",
]
