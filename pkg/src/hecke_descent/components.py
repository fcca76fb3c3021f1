"""Finite abelian groups for component data: nu-images and the descent constants.

The component group at level V is modelled as T / nu(V) where T is a product
of unit groups modulo l^m.  Subgroups are lattices in Z^r containing the
relation lattice, stored by their column Hermite normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .ladic import col_hnf


class FiniteAbelianGroup:
    """Z/n_1 x ... x Z/n_r with elements as exponent vectors."""

    def __init__(self, orders):
        self.orders = tuple(int(n) for n in orders)

    @property
    def rank(self):
        return len(self.orders)

    def order(self):
        return prod(self.orders)

    def normalize(self, v):
        return tuple(x % n for x, n in zip(v, self.orders))

    def add(self, a, b):
        return self.normalize(x + y for x, y in zip(a, b))

    def neg(self, a):
        return self.normalize(-x for x in a)

    def zero(self):
        return tuple(0 for _ in self.orders)

    def elements(self):
        from itertools import product as iproduct
        return [tuple(v) for v in iproduct(*(range(n) for n in self.orders))]

    def subgroup(self, gens):
        return Subgroup(self, [self.normalize(g) for g in gens])

    def whole(self):
        r = self.rank
        return self.subgroup([tuple(int(i == j) for j in range(r)) for i in range(r)])

    def trivial(self):
        return self.subgroup([])

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.orders == other.orders

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.orders)})"


class Subgroup:
    def __init__(self, ambient, gens):
        self.ambient = ambient
        self.gens = list(gens)
        r = ambient.rank
        cols = list(self.gens) + [tuple(n if i == j else 0 for j in range(r)) for i, n in enumerate(ambient.orders)]
        if r:
            rows = [[c[i] for c in cols] for i in range(r)]
            self.basis = col_hnf(rows)
        else:
            self.basis = []

    def _pivots(self):
        r = self.ambient.rank
        return [self.basis[i][i] for i in range(r)]

    def index(self):
        return prod(self._pivots()) if self.ambient.rank else 1

    def order(self):
        return self.ambient.order() // self.index()

    def reduce(self, v):
        """Canonical representative of v + S in the quotient."""
        r = self.ambient.rank
        v = list(v)
        for j in range(r):
            piv = self.basis[j][j]
            q = v[j] // piv
            if q:
                v = [x - q * self.basis[i][j] for i, x in enumerate(v)]
        return tuple(v)

    def contains(self, v):
        return all(x == 0 for x in self.reduce(v))

    def contains_subgroup(self, other):
        return all(self.contains(g) for g in other.gens)

    def join(self, other):
        return Subgroup(self.ambient, self.gens + other.gens)

    def intersection_order(self, other):
        return self.order() * other.order() // self.join(other).order()

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.basis == other.basis

    def __repr__(self):
        return f"Subgroup(order={self.order()} of {self.ambient.order()})"


class UnitGroupModel:
    """(Z/l^m)^x with a discrete-log table, as a FiniteAbelianGroup."""

    def __init__(self, ell, m):
        self.ell, self.m = ell, m
        self.mod = ell ** m
        mod = self.mod
        if ell == 2:
            if m == 1:
                self.group = FiniteAbelianGroup([])
                self._log = {1: ()}
            elif m == 2:
                self.group = FiniteAbelianGroup([2])
                self._log = {1: (0,), 3: (1,)}
            else:
                n = 2 ** (m - 2)
                self.group = FiniteAbelianGroup([2, n])
                self._log = {}
                for s in range(2):
                    for b in range(n):
                        self._log[(-1) ** s * pow(5, b, mod) % mod] = (s, b)
        else:
            from .groups import unit_generators
            r = unit_generators(ell, m)[0]
            n = (ell - 1) * ell ** (m - 1)
            self.group = FiniteAbelianGroup([n])
            self._log = {}
            x = 1
            for k in range(n):
                self._log[x] = (k,)
                x = x * r % mod

    def log(self, u):
        return self._log[u % self.mod]


class TorusModel:
    """Product of ``factors`` copies of (Z/l^m)^x."""

    def __init__(self, ell, m, factors):
        self.unit = UnitGroupModel(ell, m)
        self.factors = factors
        self.group = FiniteAbelianGroup(self.unit.group.orders * factors)
        self.mod = self.unit.mod

    def log(self, values):
        out = ()
        for u in values:
            out += self.unit.log(u)
        return out


def nu_image(torus, nu, gens):
    """Subgroup of T generated by nu of the given integral elements."""
    return torus.group.subgroup([torus.log(nu(g, torus.mod)) for g in gens])


@dataclass
class ComponentData:
    card_A: int
    card_B: int
    c: int
    e: int
    nu_U: Subgroup
    nu_Ui: Subgroup
    nu_Hi: Subgroup

    def weight_factor(self):
        return Fraction(self.c, self.e)


class ModelMismatch(RuntimeError):
    pass


def kernel_constants(nu_Ui, nu_U, nu_Hi):
    """|A_i|, |B_i|, c_i, e_i from the nu-images of U_i, U and H_i."""
    if not nu_U.contains_subgroup(nu_Ui) or not nu_Hi.contains_subgroup(nu_Ui):
        raise ModelMismatch("nu(U_i) must lie in both nu(U) and nu(H_i)")
    e = nu_Hi.order() // nu_Ui.order()
    card_A = nu_U.order() // nu_Ui.order()
    card_B = nu_U.join(nu_Hi).order() // nu_Hi.order()
    if card_A % card_B:
        raise ModelMismatch("|B_i| must divide |A_i|")
    c = card_A // card_B
    return ComponentData(card_A, card_B, c, e, nu_U, nu_Ui, nu_Hi)


def shortcut_check(nu_U, nu_Hi):
    contains = nu_U.contains_subgroup(nu_Hi)
    return {"shortcut_applies": contains,
            "B_singleton": contains and nu_Hi.contains_subgroup(nu_U)}


__all__ = [
    "FiniteAbelianGroup", "Subgroup", "UnitGroupModel", "TorusModel", "ComponentData",
    "ModelMismatch", "nu_image", "kernel_constants", "shortcut_check",
]
