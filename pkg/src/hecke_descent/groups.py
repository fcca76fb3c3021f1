"""Concrete groups: GSp4 and the split unitary model GL1 x GL4.

Integral group elements are l-adic and are carried as integer matrices modulo
``l**m`` together with a scalar unit (the similitude for GSp4, the GL1 factor
for the unitary model).  Elements with denominators, such as the scenario
matrices, are ``ExactMatrix`` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .ladic import (
    ExactMatrix,
    ExactScalar,
    hensel_sqrt,
    in_gl_zl,
    integrality,
    int_mat_inverse_mod,
    int_mat_mul_mod,
    mat_mul,
    unit_residue,
    vl,
)

GSP4 = "GSp4"
GL1GL4 = "GL1xGL4"
FINITE = "FiniteTable"


def symplectic_form(ell=2):
    return ExactMatrix([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], 0, ell)


def unit_generators(ell, m):
    """Generators of (Z/l^m)^x: a primitive root for odd l, {-1, 5} for l = 2."""
    mod = ell ** m
    if ell == 2:
        gens = [mod - 1, 5 % mod]
        return sorted({g for g in gens if g != 1 % mod}) or []
    for r in range(2, mod):
        if r % ell == 0:
            continue
        if pow(r, ell - 1, ell * ell) == 1 and ell ** 2 <= mod:
            continue
        if all(pow(r, (ell - 1) // q, ell) != 1 for q in _prime_factors(ell - 1)):
            return [r]
    return []


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class Elem:
    """An integral element: scalar unit ``c`` and matrix ``mat``, both modulo l^m."""

    c: int
    mat: tuple

    def key(self):
        return (self.c, self.mat)


def elem_mul(a, b, mod):
    return Elem(a.c * b.c % mod, int_mat_mul_mod(a.mat, b.mat, mod))


def elem_inv(a, mod):
    return Elem(pow(a.c, -1, mod), int_mat_inverse_mod(a.mat, mod))


def _eye(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _emat(n, entries):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for (i, j), x in entries.items():
        m[i][j] = x
    return tuple(tuple(r) for r in m)


@dataclass
class GroupSpec:
    kind: str
    dim: int
    ell: int | None
    form_matrix: ExactMatrix | None = None


@dataclass
class SubgroupSpec:
    ambient: GroupSpec
    description: str
    generators: list
    membership: object = None

    def check_generators(self, precision):
        if self.membership is None:
            return True
        return all(self.membership(g, precision) for g in self.generators)


@dataclass
class NuMap:
    """nu on H-shaped integral elements, valued in a product of unit groups mod l^m."""

    factors: int
    rule: str
    fn: object

    def __call__(self, e, mod):
        return self.fn(e, mod)


class GroupModel:
    """The integral model at l: K, the H-blocks, U = H cap K and nu."""

    def __init__(self, kind, ell):
        self.kind = kind
        self.ell = ell
        self.dim = 4
        if kind == GSP4:
            self.blocks = ((0, 2), (1, 3))
            self.form = symplectic_form(ell)
            self.nu = NuMap(1, "common determinant", self._nu_gsp4)
        elif kind == GL1GL4:
            self.blocks = ((0, 1), (2, 3))
            self.form = None
            self.nu = NuMap(3, "(c/det h1, c, c/det h2)", self._nu_gu)
        else:
            raise ValueError(f"unknown group kind {kind!r}")
        self.spec = GroupSpec(kind, 4, ell, self.form)

    # -- nu ------------------------------------------------------------------
    def _block_det(self, mat, b, mod):
        i, j = self.blocks[b]
        return (mat[i][i] * mat[j][j] - mat[i][j] * mat[j][i]) % mod

    def _nu_gsp4(self, e, mod):
        return (self._block_det(e.mat, 0, mod),)

    def _nu_gu(self, e, mod):
        d1 = self._block_det(e.mat, 0, mod)
        d2 = self._block_det(e.mat, 1, mod)
        return (e.c * pow(d1, -1, mod) % mod, e.c % mod, e.c * pow(d2, -1, mod) % mod)

    # -- shapes ---------------------------------------------------------------
    def is_h_shaped(self, mat):
        """True when ``mat`` preserves the two coordinate blocks."""
        b0, b1 = self.blocks
        return all(mat[i][j] == 0 for i in b0 for j in b1) and all(mat[i][j] == 0 for i in b1 for j in b0)

    def similitude(self, g):
        """For GSp4: c with g^T J g = c J, or None."""
        if self.form is None:
            return None
        lhs = mat_mul(mat_mul(g.transpose(), self.form), g)
        c = lhs.entry(0, 2)
        target = self.form.scale(c)
        return c if lhs == target else None

    def in_g(self, g):
        if self.kind == GSP4:
            return g.det() != 0 and self.similitude(g) is not None
        return g.det() != 0

    def in_k(self, g):
        """Membership of an exact matrix in K = G(Z_l)."""
        if not self.in_g(g):
            return False
        return in_gl_zl(g)

    def in_h(self, g):
        if not self.in_g(g) or not self.is_h_shaped(g.num):
            return False
        if self.kind == GSP4:
            i, j = self.blocks[0]
            p, q = self.blocks[1]
            f = g.to_fractions()
            return f[i][i] * f[j][j] - f[i][j] * f[j][i] == f[p][p] * f[q][q] - f[p][q] * f[q][p]
        return True

    def mod_member_k(self, e, mod):
        """Membership of a truncated element in G(Z/l^m)."""
        if self.kind == GSP4:
            J = self.form.num
            m = e.mat
            mt = tuple(zip(*m))
            lhs = int_mat_mul_mod(int_mat_mul_mod(mt, J, mod), m, mod)
            return lhs == tuple(tuple(e.c * x % mod for x in r) for r in J) and e.c % self.ell != 0
        try:
            int_mat_inverse_mod(e.mat, mod)
        except ZeroDivisionError:
            return False
        return e.c % self.ell != 0

    def mod_member_u(self, e, mod):
        if not self.mod_member_k(e, mod) or not self.is_h_shaped(e.mat):
            return False
        if self.kind == GSP4:
            return self._block_det(e.mat, 0, mod) == self._block_det(e.mat, 1, mod) == e.c % mod
        return True

    # -- generators ---------------------------------------------------------------
    def k_generators(self, m):
        """Topological generators of K, truncated modulo l^m."""
        mod = self.ell ** m
        units = unit_generators(self.ell, m)
        n = 4
        gens = []
        if self.kind == GSP4:
            # root elements [[A,0],[0,A^-T]], [[I,S],[0,I]], [[I,0],[S,I]]
            gens.append(Elem(1, _emat(n, {(0, 1): 1, (3, 2): mod - 1})))
            gens.append(Elem(1, _emat(n, {(1, 0): 1, (2, 3): mod - 1})))
            for s in ({(0, 2): 1}, {(1, 3): 1}, {(0, 3): 1, (1, 2): 1}):
                gens.append(Elem(1, _emat(n, s)))
                gens.append(Elem(1, _emat(n, {(j, i): x for (i, j), x in s.items()})))
            for u in units:
                gens.append(Elem(u, _emat(n, {(2, 2): u, (3, 3): u})))
                gens.append(Elem(1, _emat(n, {(0, 0): u, (2, 2): pow(u, -1, mod)})))
            # Weyl element: the form itself
            gens.append(Elem(1, tuple(tuple(x % mod for x in r) for r in self.form.num)))
        else:
            for i in range(n):
                for j in range(n):
                    if i != j:
                        gens.append(Elem(1, _emat(n, {(i, j): 1})))
            for u in units:
                gens.append(Elem(1, _emat(n, {(0, 0): u})))
                gens.append(Elem(u, _eye(n)))
        return _dedupe(gens, mod)

    def u_generators(self, m):
        """Topological generators of U = H cap K, truncated modulo l^m."""
        mod = self.ell ** m
        units = unit_generators(self.ell, m)
        n = 4
        gens = []
        for (i, j) in self.blocks:
            gens.append(Elem(1, _emat(n, {(i, j): 1})))
            gens.append(Elem(1, _emat(n, {(j, i): 1})))
            gens.append(Elem(1, _emat(n, {(i, i): 0, (j, j): 0, (i, j): 1, (j, i): mod - 1})))
        (a, _), (b, _) = self.blocks
        for u in units:
            if self.kind == GSP4:
                gens.append(Elem(u, _emat(n, {(a, a): u, (b, b): u})))
            else:
                gens.append(Elem(1, _emat(n, {(a, a): u})))
                gens.append(Elem(1, _emat(n, {(b, b): u})))
                gens.append(Elem(u, _eye(n)))
        return _dedupe(gens, mod)

    def k_subgroup(self, m):
        return SubgroupSpec(self.spec, "K = G(Z_l)", self.k_generators(m),
                            lambda e, p: self.mod_member_k(e, self.ell ** p))

    def u_subgroup(self, m):
        return SubgroupSpec(self.spec, "U = H cap K", self.u_generators(m),
                            lambda e, p: self.mod_member_u(e, self.ell ** p))


def _dedupe(gens, mod):
    seen, out = set(), []
    for g in gens:
        g = Elem(g.c % mod, tuple(tuple(x % mod for x in r) for r in g.mat))
        if g.key() not in seen and g.key() != (1 % mod, _eye(len(g.mat))):
            seen.add(g.key())
            out.append(g)
    return out


# -- scenarios -------------------------------------------------------------------

@dataclass
class ScenarioSpec:
    name: str
    model: GroupModel
    ell: int
    precision: int
    sigma: ExactMatrix
    tau: ExactMatrix
    w: ExactMatrix
    printed_reps: dict
    params: dict = field(default_factory=dict)

    @property
    def K(self):
        return self.model.k_subgroup(self.precision)

    @property
    def U(self):
        return self.model.u_subgroup(self.precision)


def gsp4_matrices(ell):
    sigma = ExactMatrix.diag([ell, ell, 1, 1], ell)
    tau = ExactMatrix.from_values(
        [[1, 0, 0, Fraction(1, ell)], [0, 1, Fraction(1, ell), 0], [0, 0, 1, 0], [0, 0, 0, 1]], ell)
    w = ExactMatrix.diag([1, -1, 1, -1], ell)
    return sigma, tau, w


def gamma_ell(ell):
    """tau^-1 w tau for the GSp4 scenario."""
    _, tau, w = gsp4_matrices(ell)
    return mat_mul(mat_mul(tau.inverse(), w), tau)


def gu22_matrices(ell):
    sigma = ExactMatrix.diag([ell, 1, 1, 1], ell)
    sigma_p = ExactMatrix.diag([1, 1, ell, 1], ell)
    tau = ExactMatrix.from_values(
        [[1, 0, Fraction(1, ell), 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], ell)
    return sigma, sigma_p, tau


def build_scenario(name, ell, precision, d=1, m_index=1):
    if not _is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if name == "gsp4":
        model = GroupModel(GSP4, ell)
        sigma, tau, w = gsp4_matrices(ell)
        reps = {"sigma": sigma, "sigma*tau": mat_mul(sigma, tau)}
        return ScenarioSpec("gsp4", model, ell, precision, sigma, tau, w, reps)
    if name == "gu22":
        if ell == 2 or (2 * d) % ell == 0:
            raise ValueError(f"the unitary scenario needs l not dividing 2d (l={ell}, d={d})")
        alpha = hensel_sqrt(-d % ell ** precision, ell, precision)
        if alpha is None:
            raise ValueError(f"{ell} is not split in Q(sqrt(-{d}))")
        model = GroupModel(GL1GL4, ell)
        sigma, sigma_p, tau = gu22_matrices(ell)
        xi, inv = xi_generator(d, m_index, ell, precision)
        w = w_xi_matrix(xi, ell, precision, alpha)
        reps = {"sigma": sigma, "sigma'": sigma_p, "sigma*tau": mat_mul(sigma, tau)}
        return ScenarioSpec("gu22", model, ell, precision, sigma, tau, w, reps,
                            {"d": d, "m_index": m_index, "alpha": alpha, "xi": xi,
                             "xi_ell_invertible": inv})
    raise ValueError(f"unknown scenario {name!r}")


def _is_prime(n):
    return n >= 2 and all(n % p for p in range(2, int(n ** 0.5) + 1))


def xi_generator(d, m_index, ell, precision):
    """The norm-one element x + y sqrt(-d) and whether it is l-invertible.

    l-invertible means its image under sqrt(-d) -> alpha (alpha^2 = -d in Z_l)
    is congruent to 1 modulo l.
    """
    if ell == 2 or (2 * d) % ell == 0:
        raise ValueError("need l not dividing 2d")
    if m_index < 1:
        raise ValueError("m_index must be positive")
    den = 1 + d * m_index ** 2 * ell ** 2
    x = Fraction(1 - d * m_index ** 2 * ell ** 2, den)
    y = Fraction(2 * m_index * ell, den)
    if x * x + d * y * y != 1:
        raise ArithmeticError("norm is not one")
    alpha = hensel_sqrt(-d % ell ** precision, ell, precision)
    if alpha is None:
        return (x, y), False
    img = xi_embedding((x, y), alpha, ell, precision)
    return (x, y), img % ell == 1


def xi_norm(xi, d):
    x, y = xi
    return x * x + d * y * y


def xi_embedding(xi, alpha, ell, precision):
    mod = ell ** precision
    x, y = xi
    return (unit_residue(x, ell, precision) + _residue(y, ell, precision) * alpha) % mod


def _residue(q, ell, precision):
    q = Fraction(q)
    mod = ell ** precision
    if vl(q.denominator, ell) if q.denominator != 1 else 0:
        raise ValueError("not l-integral")
    return q.numerator * pow(q.denominator, -1, mod) % mod


def w_xi_matrix(xi, ell, precision, alpha):
    """diag(1, 1, j(xi), j(xi)) with j(xi) truncated modulo l^m (an integer matrix)."""
    j = xi_embedding(xi, alpha, ell, precision)
    return ExactMatrix.diag([1, 1, j, j], ell)


def membership(model, g, subgroup="K"):
    """Exact membership test for an ExactMatrix (GSp4) or matrix part (GL1 x GL4)."""
    if subgroup == "K":
        return model.in_k(g)
    if subgroup == "U":
        return model.in_k(g) and model.in_h(g)
    if subgroup == "H":
        return model.in_h(g)
    raise ValueError(subgroup)


def brute_force_order_f_ell(model, which="K"):
    """Count G(F_l) (or U(F_l)) by listing every 4x4 matrix over F_l; only l = 2 is practical."""
    ell = model.ell
    n = 4
    count = 0
    cs = range(1, ell)
    for flat in product(range(ell), repeat=n * n):
        mat = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        for c in (cs if model.kind == GL1GL4 else [None]):
            if model.kind == GSP4:
                J = model.form.num
                mt = tuple(zip(*mat))
                lhs = int_mat_mul_mod(int_mat_mul_mod(mt, J, ell), mat, ell)
                cands = [c2 for c2 in cs if lhs == tuple(tuple(c2 * x % ell for x in r) for r in J)]
                for c2 in cands:
                    e = Elem(c2, mat)
                    if which == "K" or model.mod_member_u(e, ell):
                        count += 1
            else:
                e = Elem(c, mat)
                if (model.mod_member_k(e, ell) if which == "K" else model.mod_member_u(e, ell)):
                    count += 1
    return count


def closure_order(model, gens, m):
    """Order of the subgroup of G(Z/l^m) generated by ``gens``.

    Uses a faithful permutation action (vectors of (Z/l^m)^4 plus a copy of the
    scalar units) and Schreier-Sims from sympy.
    """
    from sympy.combinatorics import Permutation, PermutationGroup

    ell = model.ell
    mod = ell ** m
    vecs = list(product(range(mod), repeat=4))
    index = {v: i for i, v in enumerate(vecs)}
    units = [u for u in range(mod) if u % ell]
    uindex = {u: len(vecs) + i for i, u in enumerate(units)}
    perms = []
    for g in gens:
        img = [0] * (len(vecs) + len(units))
        for v, i in index.items():
            w = tuple(sum(g.mat[r][t] * v[t] for t in range(4)) % mod for r in range(4))
            img[i] = index[w]
        for u, i in uindex.items():
            img[i] = uindex[g.c * u % mod]
        perms.append(Permutation(img))
    if not perms:
        return 1
    return PermutationGroup(perms).order()


def expected_order(kind, ell, m):
    """|G(F_l)| * l^(dim (m-1)) for the integral models."""
    if kind == GSP4:
        q = ell
        sp4 = q ** 4 * (q ** 2 - 1) * (q ** 4 - 1)
        return sp4 * (q - 1) * ell ** (11 * (m - 1))
    q = ell
    gl4 = 1
    for i in range(4):
        gl4 *= q ** 4 - q ** i
    return (q - 1) * gl4 * ell ** (17 * (m - 1))


def expected_u_order(kind, ell, m):
    q = ell
    gl2 = (q ** 2 - 1) * (q ** 2 - q)
    if kind == GSP4:
        return gl2 * gl2 // (q - 1) * ell ** (7 * (m - 1))
    return (q - 1) * gl2 * gl2 * ell ** (9 * (m - 1))


def exact_to_elem(model, g, m):
    """Truncate an exact element of K to an Elem modulo l^m."""
    if not model.in_k(g):
        raise ValueError("element is not in K")
    mod = model.ell ** m
    f = g.to_fractions()
    mat = tuple(tuple(_residue(x, model.ell, m) if x else 0 for x in r) for r in f)
    if model.kind == GSP4:
        c = model.similitude(g)
        cval = _residue(c.to_fraction(), model.ell, m)
    else:
        cval = 1
    return Elem(cval % mod, mat)


__all__ = [
    "GSP4", "GL1GL4", "FINITE", "Elem", "GroupModel", "GroupSpec", "SubgroupSpec", "NuMap",
    "ScenarioSpec", "build_scenario", "xi_generator", "xi_norm", "gamma_ell", "gsp4_matrices",
    "gu22_matrices", "membership", "closure_order", "expected_order", "expected_u_order",
    "brute_force_order_f_ell", "unit_generators", "elem_mul", "elem_inv", "integrality",
    "exact_to_elem", "ExactScalar",
]
