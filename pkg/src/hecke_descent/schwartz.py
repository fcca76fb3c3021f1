"""Integer-valued K-invariant functions on J\\G for a finite group G.

A function is stored as a map from block keys to integers, where a block is a
double coset J x K and its key is its least element.  Two Hecke-type
operators act on these functions: T(sigma) pushes each block along the
cosets of K sigma K / K, while the covariant operator translates on the right
by K \\ K sigma K.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ric import RicInstance, hecke_apply


class SchwartzSpace:
    def __init__(self, G, J, K):
        self.G = G
        self.J = frozenset(J)
        self.K = frozenset(K)
        self.M = RicInstance(G, self.J)
        self.blocks = self.M.double_cosets(self.K)
        self._key = {}
        for dc in self.blocks:
            k = min(dc)
            for x in dc:
                self._key[x] = k
        self.keys = sorted(self._key[min(dc)] for dc in self.blocks)
        self._block = {min(dc): dc for dc in self.blocks}

    def key(self, x):
        return self._key[x]

    def block(self, key):
        return self._block[key]

    def ch(self, x):
        return SchwartzFunction(self, {self.key(x): 1})

    def from_values(self, vec):
        """Read a K-invariant function on G (indexed by elements) as block data."""
        if not self.M.is_invariant(tuple(vec), self.K):
            raise ValueError("function is not K-invariant")
        for dc in self.blocks:
            vals = {vec[x] for x in dc}
            if len(vals) != 1:
                raise ValueError("function is not left J-invariant")
        return SchwartzFunction(self, {k: vec[k] for k in self.keys if vec[k]})

    def basis(self):
        return [SchwartzFunction(self, {k: 1}) for k in self.keys]


@dataclass
class SchwartzFunction:
    space: SchwartzSpace
    values: dict

    def __post_init__(self):
        self.values = {k: v for k, v in sorted(self.values.items()) if v}

    def __add__(self, other):
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return SchwartzFunction(self.space, out)

    def scale(self, c):
        return SchwartzFunction(self.space, {k: c * v for k, v in self.values.items()})

    def __eq__(self, other):
        return isinstance(other, SchwartzFunction) and self.values == other.values

    def to_vector(self):
        vec = [0] * self.space.G.order
        for k, v in self.values.items():
            for x in self.space.block(k):
                vec[x] = v
        return tuple(vec)

    def items(self):
        return list(self.values.items())


def op_T(sigma, f, rep=None):
    """ch(J g K) -> sum over gamma in K sigma K / K of ch(J g gamma K).

    ``rep`` optionally picks the representative g of each block (a callable
    from block key to an element of the block).
    """
    S = f.space
    G, t = S.G, S.G.table
    gammas = G.left_cosets(G.double_coset(S.K, sigma, S.K), S.K)
    out = {}
    for k, c in f.values.items():
        g = k if rep is None else rep(k)
        for gamma in gammas:
            key = S.key(t[g][gamma])
            out[key] = out.get(key, 0) + c
    return SchwartzFunction(S, out)


def op_cov(sigma, f, rep=None):
    """ch(J g K) -> sum over delta in K \\ K sigma K of ch(J g K delta)."""
    S = f.space
    G, t = S.G, S.G.table
    deltas = G.right_cosets(S.K, G.double_coset(S.K, sigma, S.K))
    vec = [0] * G.order
    for k, c in f.values.items():
        g = k if rep is None else rep(k)
        block = G.double_coset(S.J, g, S.K)
        for d in deltas:
            for x in block:
                vec[t[x][d]] += c
    return S.from_values(vec)


def op_cov_functorial(sigma, f):
    """The covariant operator through pullback, trace and twist on the function module."""
    S = f.space
    vec = hecke_apply(S.M, sigma, S.K, S.K, f.to_vector())
    return S.from_values(vec)


def ind(f):
    """Sum of f over G/K; requires J = K."""
    S = f.space
    if S.J != S.K:
        raise ValueError("ind is defined for J = K")
    return sum(c * (len(S.block(k)) // len(S.K)) for k, c in f.values.items())


def convolution(f, h):
    """(f*h)(x) = sum over y in G/K of f(y) h(y^-1 x); requires J = K."""
    S = f.space
    if S.J != S.K or h.space is not S:
        raise ValueError("convolution is defined for J = K on one space")
    G, t = S.G, S.G.table
    fv, hv = f.to_vector(), h.to_vector()
    reps = G.left_cosets(G.whole(), S.K)
    out = {}
    for x in S.keys:
        s = sum(fv[y] * hv[t[G.inv[y]][x]] for y in reps if fv[y])
        if s:
            out[x] = s
    return SchwartzFunction(S, out)


def compare_operators(G, J, K, sigma):
    """Check whether J cap gKg^-1 is constant and whether T(sigma) equals the covariant operator."""
    J, K = frozenset(J), frozenset(K)
    inters = {J & G.conj(x, K) for x in range(G.order)}
    holds = len(inters) == 1
    S = SchwartzSpace(G, J, K)
    equal = all(op_T(sigma, b) == op_cov(sigma, b) for b in S.basis())
    return {"condition_holds": holds, "operators_equal": equal,
            "implication_ok": (not holds) or equal}


def enumeration_identity(G, K, sigma):
    """Both coset lists from the comparison argument cover K sigma K / L exactly once.

    L is K intersected with every delta^-1 K delta for delta in K \\ K sigma K.
    """
    t = G.table
    K = frozenset(K)
    KsK = G.double_coset(K, sigma, K)
    deltas = G.right_cosets(K, KsK)
    L = K
    for d in deltas:
        L = L & G.conj(G.inv[d], K)
    target = sorted(frozenset(t[x][l] for l in L) for x in G.left_cosets(KsK, L))
    target_set = set(target)

    def cosets(pairs):
        out = [frozenset(t[t[a][b]][l] for l in L) for a, b in pairs]
        return len(out) == len(set(out)) and set(out) == target_set

    first = [(g, m) for g in G.left_cosets(KsK, K) for m in G.left_cosets(K, L)]
    second = [(d, n) for d in deltas for n in G.left_cosets(G.conj(G.inv[d], K), L)]
    return cosets(first) and cosets(second)


def random_function(S, rng, lo=-3, hi=3):
    return SchwartzFunction(S, {k: rng.randint(lo, hi) for k in S.keys})


def find_instances(G, size, limit=1):
    """(K, sigma) pairs with |K sigma K / K| equal to ``size``."""
    out = []
    for K in G.subgroups():
        for s in range(G.order):
            if len(G.double_coset(K, s, K)) // len(K) == size:
                out.append((K, s))
                break
        if len(out) >= limit:
            break
    return out


__all__ = [
    "SchwartzSpace", "SchwartzFunction", "op_T", "op_cov", "op_cov_functorial", "ind",
    "convolution", "compare_operators", "enumeration_identity", "random_function",
    "find_instances",
]
