"""Small finite groups given by permutations.

Elements are indexed 0..|G|-1 after closing the generators; products and
inverses come from tables.  Subgroups are frozensets of indices.
"""

from __future__ import annotations

import json
from itertools import product


def _compose(p, q):
    """(p*q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


class FiniteGroup:
    def __init__(self, generators, name="G", degree=None):
        gens = [tuple(g) for g in generators]
        if degree is None:
            degree = len(gens[0]) if gens else 1
        ident = tuple(range(degree))
        elems = [ident]
        seen = {ident}
        head = 0
        while head < len(elems):
            x = elems[head]
            for g in gens:
                y = _compose(g, x)
                if y not in seen:
                    seen.add(y)
                    elems.append(y)
            head += 1
        elems.sort()
        self.name = name
        self.perms = elems
        self.index = {p: i for i, p in enumerate(elems)}
        n = len(elems)
        self.order = n
        self.identity = self.index[ident]
        self.table = [[self.index[_compose(elems[a], elems[b])] for b in range(n)] for a in range(n)]
        self.inv = [0] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == self.identity:
                    self.inv[a] = b
                    break
        self.gen_idx = [self.index[g] for g in gens]
        self._subgroups = None

    def mul(self, a, b):
        return self.table[a][b]

    def elem(self, perm):
        return self.index[tuple(perm)]

    def conj(self, g, S):
        """g S g^-1."""
        gi = self.inv[g]
        return frozenset(self.table[self.table[g][s]][gi] for s in S)

    def generate(self, gens):
        elems = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[g][x]
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(elems)

    def whole(self):
        return frozenset(range(self.order))

    def trivial(self):
        return frozenset([self.identity])

    def subgroups(self):
        """Every subgroup, by joining cyclic subgroups to a fixed point."""
        if self._subgroups is None:
            cyclic = {self.generate([x]) for x in range(self.order)}
            subs = set(cyclic)
            frontier = set(cyclic)
            while frontier:
                new = set()
                for A in frontier:
                    for C in cyclic:
                        if not C <= A:
                            B = self.generate(list(A | C))
                            if B not in subs:
                                new.add(B)
                subs |= new
                frontier = new
            self._subgroups = sorted(subs, key=lambda S: (len(S), sorted(S)))
        return self._subgroups

    def left_cosets(self, K, L):
        """Representatives of K/L (cosets gamma L), least element of each."""
        reps, seen = [], set()
        for k in sorted(K):
            if k in seen:
                continue
            coset = {self.table[k][l] for l in L}
            seen |= coset
            reps.append(min(coset))
        return reps

    def right_cosets(self, L, K):
        """Representatives of L\\K (cosets L gamma)."""
        reps, seen = [], set()
        for k in sorted(K):
            if k in seen:
                continue
            coset = {self.table[l][k] for l in L}
            seen |= coset
            reps.append(min(coset))
        return reps

    def double_coset(self, A, g, B):
        return frozenset(self.table[self.table[a][g]][b] for a in A for b in B)

    def double_cosets(self, A, S, B):
        """Representatives (least elements) of A \\ S / B for a set S closed under both."""
        reps, seen = [], set()
        for x in sorted(S):
            if x in seen:
                continue
            dc = self.double_coset(A, x, B)
            seen |= dc
            reps.append(min(dc))
        return reps

    def is_normal(self, N, G=None):
        G = self.whole() if G is None else G
        return all(self.conj(g, N) == N for g in G)


def symmetric_group(n):
    if n == 1:
        return FiniteGroup([(0,)], "S1")
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return FiniteGroup(gens, f"S{n}")


def alternating_group(n):
    gens = []
    for i in range(n - 2):
        p = list(range(n))
        p[i], p[i + 1], p[i + 2] = p[i + 1], p[i + 2], p[i]
        gens.append(tuple(p))
    return FiniteGroup(gens or [tuple(range(n))], f"A{n}")


def cyclic_group(n):
    return FiniteGroup([tuple(list(range(1, n)) + [0])], f"C{n}")


def dihedral_group(n):
    r = tuple(list(range(1, n)) + [0])
    s = tuple((-i) % n for i in range(n))
    return FiniteGroup([r, s], f"D{n}")


def gl2_group(p):
    """GL2(F_p) acting on the nonzero vectors of F_p^2."""
    vecs = [v for v in product(range(p), repeat=2) if v != (0, 0)]
    idx = {v: i for i, v in enumerate(vecs)}

    def perm(m):
        a, b, c, d = m
        return tuple(idx[((a * x + b * y) % p, (c * x + d * y) % p)] for x, y in vecs)

    gens = [perm((1, 1, 0, 1)), perm((0, 1, 1, 0))]
    for u in range(2, p):
        gens.append(perm((u, 0, 0, 1)))
    G = FiniteGroup(gens, f"GL2(F{p})")
    G.matrix_of = {}
    for a, b, c, d in product(range(p), repeat=4):
        if (a * d - b * c) % p:
            G.matrix_of[G.elem(perm((a, b, c, d)))] = (a, b, c, d)
    return G


def direct_product(A, B):
    da = len(A.perms[0])
    db = len(B.perms[0])
    gens = []
    for g in A.gen_idx:
        gens.append(tuple(A.perms[g]) + tuple(range(da, da + db)))
    for g in B.gen_idx:
        gens.append(tuple(range(da)) + tuple(da + x for x in B.perms[g]))
    return FiniteGroup(gens, f"{A.name}x{B.name}")


def load_group_file(path):
    """Load a finite model description (JSON)."""
    with open(path) as fh:
        return json.load(fh)


__all__ = [
    "FiniteGroup", "symmetric_group", "alternating_group", "cyclic_group", "dihedral_group",
    "gl2_group", "direct_product", "load_group_file",
]
