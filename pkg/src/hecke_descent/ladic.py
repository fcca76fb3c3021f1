"""Exact arithmetic over Z[1/l].

Scalars are ``num / l**v`` with ``v >= 0`` and the numerator not divisible by
``l`` unless ``v == 0``.  Matrices share one denominator exponent, which keeps
products cheap.  Lattices in Q_l^n are identified by a column Hermite normal
form computed inside a symmetric window ``l^-a Z^n .. l^a Z^n``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd


class WindowEscape(ValueError):
    """A lattice does not fit in the requested window; precision must grow."""


def vl(x, ell):
    """l-adic valuation of a nonzero integer or Fraction."""
    if x == 0:
        raise ValueError("valuation of zero")
    if isinstance(x, Fraction):
        return vl(x.numerator, ell) - vl(x.denominator, ell)
    x = abs(x)
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


class ExactScalar:
    __slots__ = ("num", "v", "ell")

    def __init__(self, num, v=0, ell=2):
        num = int(num)
        v = int(v)
        if v < 0:
            num *= ell ** (-v)
            v = 0
        while v > 0 and num % ell == 0:
            num //= ell
            v -= 1
        if num == 0:
            v = 0
        self.num, self.v, self.ell = num, v, ell

    @classmethod
    def from_value(cls, x, ell):
        x = Fraction(x)
        d = x.denominator
        v = 0
        while d % ell == 0:
            d //= ell
            v += 1
        if d != 1:
            raise ValueError(f"{x} is not in Z[1/{ell}]")
        return cls(x.numerator, v, ell)

    def to_fraction(self):
        return Fraction(self.num, self.ell ** self.v)

    def valuation(self):
        if self.num == 0:
            return None
        return vl(self.num, self.ell) - self.v

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            if other.ell != self.ell:
                raise ValueError("mixed primes")
            return other
        return ExactScalar.from_value(other, self.ell)

    def __add__(self, other):
        o = self._coerce(other)
        v = max(self.v, o.v)
        e = self.ell
        return ExactScalar(self.num * e ** (v - self.v) + o.num * e ** (v - o.v), v, e)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.num, self.v, self.ell)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return ExactScalar(self.num * o.num, self.v + o.v, self.ell)

    __rmul__ = __mul__

    def is_unit(self):
        """Units of Z[1/l] are exactly +-l^k."""
        n = abs(self.num)
        while n > 1 and n % self.ell == 0:
            n //= self.ell
        return n == 1

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not invertible in Z[1/{self.ell}]")
        return ExactScalar.from_value(1 / self.to_fraction(), self.ell)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return (self.num, self.v) == (o.num, o.v)

    def __hash__(self):
        return hash((self.num, self.v, self.ell))

    def serialize(self):
        return f"{self.num}/{self.ell}^{self.v}"

    @classmethod
    def parse(cls, text, ell):
        text = text.strip()
        if "^" in text:
            num, rest = text.split("/")
            base, v = rest.split("^")
            if int(base) != ell:
                raise ValueError(f"prime mismatch in {text!r}")
            return cls(int(num), int(v), ell)
        return cls.from_value(Fraction(text), ell)

    def __repr__(self):
        return self.serialize()


class ExactMatrix:
    """Square matrix ``num / l**v`` with integer entries ``num``."""

    __slots__ = ("num", "v", "ell", "dim")

    def __init__(self, rows, v=0, ell=2):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        v = int(v)
        if v < 0:
            f = ell ** (-v)
            rows = tuple(tuple(x * f for x in r) for r in rows)
            v = 0
        while v > 0 and all(x % ell == 0 for r in rows for x in r):
            rows = tuple(tuple(x // ell for x in r) for r in rows)
            v -= 1
        self.num, self.v, self.ell, self.dim = rows, v, ell, n

    @classmethod
    def from_values(cls, rows, ell):
        fr = [[Fraction(x) for x in r] for r in rows]
        v = 0
        for r in fr:
            for x in r:
                if x:
                    d = x.denominator
                    k = 0
                    while d % ell == 0:
                        d //= ell
                        k += 1
                    if d != 1:
                        raise ValueError(f"{x} is not in Z[1/{ell}]")
                    v = max(v, k)
        s = ell ** v
        return cls([[int(x * s) for x in r] for r in fr], v, ell)

    @classmethod
    def identity(cls, n, ell):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], 0, ell)

    @classmethod
    def diag(cls, entries, ell):
        n = len(entries)
        return cls.from_values([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], ell)

    def entry(self, i, j):
        return ExactScalar(self.num[i][j], self.v, self.ell)

    def to_fractions(self):
        s = self.ell ** self.v
        return [[Fraction(x, s) for x in r] for r in self.num]

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.num, self.v, self.ell) == (other.num, other.v, other.ell)

    def __hash__(self):
        return hash((self.num, self.v, self.ell))

    def valuation(self):
        vals = [vl(x, self.ell) for r in self.num for x in r if x]
        if not vals:
            return None
        return min(vals) - self.v

    def det(self):
        return _det_fraction(self.to_fractions())

    def inverse(self):
        """Exact inverse; requires the determinant to be +-l^k."""
        inv = _inverse_fraction(self.to_fractions())
        return ExactMatrix.from_values(inv, self.ell)

    def transpose(self):
        n = self.dim
        return ExactMatrix([[self.num[j][i] for j in range(n)] for i in range(n)], self.v, self.ell)

    def scale(self, c):
        c = ExactScalar.from_value(c, self.ell) if not isinstance(c, ExactScalar) else c
        return ExactMatrix([[x * c.num for x in r] for r in self.num], self.v + c.v, self.ell)

    def serialize(self):
        return [[self.entry(i, j).serialize() for j in range(self.dim)] for i in range(self.dim)]

    @classmethod
    def parse(cls, rows, ell):
        vals = [[ExactScalar.parse(x, ell).to_fraction() if isinstance(x, str) else Fraction(x)
                 for x in r] for r in rows]
        return cls.from_values(vals, ell)

    def __repr__(self):
        return f"ExactMatrix({self.serialize()})"


def mat_mul(a, b):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.ell != b.ell:
        raise ValueError("mixed primes")
    n = a.dim
    bt = list(zip(*b.num))
    rows = [[sum(x * y for x, y in zip(ra, cb)) for cb in bt] for ra in a.num]
    return ExactMatrix(rows, a.v + b.v, a.ell)


def integrality(m):
    """Return ``(is_integral, valuation)``; the zero matrix counts as integral."""
    v = m.valuation()
    if v is None:
        return True, 0
    return v >= 0, v


def in_gl_zl(m):
    """Integral with integral inverse, i.e. the determinant is an l-adic unit."""
    ok, _ = integrality(m)
    if not ok:
        return False
    d = m.det()
    return d != 0 and vl(d, m.ell) == 0


def _det_fraction(a):
    a = [r[:] for r in a]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _inverse_fraction(a):
    n = len(a)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [r[n:] for r in m]


# -- integer Hermite normal form ------------------------------------------------

def col_hnf(rows, order=None):
    """Column Hermite normal form of the lattice spanned by the columns.

    ``rows`` is a list of integer rows (n x k).  Pivots are taken in the row
    order ``order`` (default top to bottom).  Returns the n x r basis (list of
    rows) whose j-th column has its pivot in row ``order[j]``; pivots are
    positive and entries to the left of a pivot are reduced modulo it.
    """
    n = len(rows)
    if order is None:
        order = list(range(n))
    cols = [list(c) for c in zip(*rows)]
    cols = [c for c in cols if any(c)]
    out = []
    for r in order:
        live = [c for c in cols if c[r] != 0]
        rest = [c for c in cols if c[r] == 0]
        if not live:
            cols = rest
            continue
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[r]))
            p = live[0]
            nxt = [p]
            for c in live[1:]:
                q = c[r] // p[r]
                c = [x - q * y for x, y in zip(c, p)]
                if c[r] != 0:
                    nxt.append(c)
                elif any(c):
                    rest.append(c)
            live = nxt
        p = live[0]
        if p[r] < 0:
            p = [-x for x in p]
        out.append(p)
        cols = rest
    # reduce entries to the left of each pivot
    for j, r in enumerate(order[:len(out)]):
        piv = out[j][r]
        for i in range(j):
            q = out[i][r] // piv
            if q:
                out[i] = [x - q * y for x, y in zip(out[i], out[j])]
    return [list(row) for row in zip(*out)] if out else [[] for _ in range(n)]


class LatticeKey:
    """Canonical label of a full-rank lattice ``L`` with ``l^a Z^n <= L <= l^-a Z^n``.

    ``hnf`` is the column HNF of ``l^a L`` (an integer matrix, rows as tuples).
    """

    __slots__ = ("window", "hnf", "ell", "dim")

    def __init__(self, window, hnf, ell):
        self.window, self.hnf, self.ell = window, hnf, ell
        self.dim = len(hnf)

    def _t(self):
        return (self.window, self.hnf)

    def __eq__(self, other):
        return isinstance(other, LatticeKey) and self._t() == other._t()

    def __hash__(self):
        return hash(self._t())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return tuple(x for r in self.hnf for x in r)

    def basis(self):
        """Exact basis matrix of the lattice itself."""
        return ExactMatrix(self.hnf, self.window, self.ell)

    def serialize(self):
        return ";".join(",".join(str(x) for x in r) for r in self.hnf) + f"@{self.window}"

    def __repr__(self):
        return f"LatticeKey({self.serialize()})"


def _key_from_integral(rows, window, ell):
    """Key of the lattice spanned by the integer columns ``rows`` scaled by l^-a."""
    n = len(rows)
    mod = ell ** (2 * window)
    aug = [[x % mod for x in r] + [mod if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    h = col_hnf(aug)
    if len(h[0]) != n:
        raise WindowEscape("degenerate lattice")
    h = tuple(tuple(x % mod if i != j else x for j, x in enumerate(r)) for i, r in enumerate(h))
    return LatticeKey(window, h, ell)


def lattice_key(basis, window):
    """Canonical key of the lattice spanned by the columns of ``basis``.

    Raises WindowEscape when the lattice is not between ``l^a Z^n`` and
    ``l^-a Z^n``.
    """
    ell = basis.ell
    if basis.v > window:
        raise WindowEscape(f"denominator l^{basis.v} exceeds window {window}")
    f = ell ** (window - basis.v)
    rows = [[x * f for x in r] for r in basis.num]
    d = _det_fraction([[Fraction(x) for x in r] for r in rows])
    if d == 0:
        raise ValueError("basis is not invertible")
    key = _key_from_integral(rows, window, ell)
    prod = 1
    for i in range(len(rows)):
        prod *= key.hnf[i][i]
    if vl(d, ell) != vl(prod, ell):
        raise WindowEscape(f"lattice leaves the window l^±{window}")
    return key


def act_integral(mat_mod, key):
    """Key of ``k L`` for ``k`` an integral matrix given modulo at least l^(2a)."""
    n = key.dim
    mod = key.ell ** (2 * key.window)
    h = key.hnf
    rows = [[sum(mat_mod[i][t] * h[t][j] for t in range(n)) % mod for j in range(n)] for i in range(n)]
    return _key_from_integral(rows, key.window, key.ell)


def act_exact(g, key, window=None):
    """Key of ``g L`` for an exact matrix ``g``."""
    window = key.window if window is None else window
    return lattice_key(mat_mul(g, key.basis()), window)


def rewindow(key, window):
    return lattice_key(key.basis(), window)


def standard_key(n, ell, window):
    mod = ell ** window
    return LatticeKey(window, tuple(tuple(mod if i == j else 0 for j in range(n)) for i in range(n)), ell)


def sublattice_on_coordinates(key, coords):
    """Basis (exact n x n, zero outside ``coords``) of ``L`` intersected with span(e_i, i in coords)."""
    n = key.dim
    others = [i for i in range(n) if i not in coords]
    h = col_hnf([list(r) for r in key.hnf], order=others + list(coords))
    k = len(others)
    cols = [[h[i][j] for i in range(n)] for j in range(k, n)]
    return cols, key.window


# -- l-adic square roots --------------------------------------------------------

def hensel_sqrt(a, ell, m):
    """A square root of ``a`` modulo ``ell**m``, or None when ``a`` is a non-residue.

    Only odd ``ell`` and ``a`` prime to ``ell`` are supported.
    """
    if ell == 2:
        raise ValueError("square roots at l = 2 are not supported")
    if a % ell == 0:
        raise ValueError("a must be a unit")
    if pow(a % ell, (ell - 1) // 2, ell) != 1:
        return None
    r = next(x for x in range(1, ell) if (x * x - a) % ell == 0)
    mod = ell
    for _ in range(1, m):
        mod *= ell
        # Newton step: r <- r - (r^2 - a) / (2r)
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r % ell ** m


def unit_residue(x, ell, m):
    """Residue of an l-adic unit given as an int or Fraction, modulo ell**m."""
    x = Fraction(x)
    mod = ell ** m
    if x.numerator % ell == 0 or x.denominator % ell == 0:
        raise ValueError(f"{x} is not an l-adic unit")
    return x.numerator * pow(x.denominator, -1, mod) % mod


def int_mat_inverse_mod(a, mod):
    """Inverse of an integer matrix modulo ``mod`` (determinant must be a unit)."""
    n = len(a)
    m = [[x % mod for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if gcd(m[r][c], mod) == 1), None)
        if p is None:
            raise ZeroDivisionError("matrix not invertible modulo l")
        m[c], m[p] = m[p], m[c]
        inv = pow(m[c][c], -1, mod)
        m[c] = [x * inv % mod for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % mod for x, y in zip(m[r], m[c])]
    return tuple(tuple(r[n:]) for r in m)


def int_mat_mul_mod(a, b, mod):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) % mod for c in bt) for r in a)


def content_gcd(values):
    return reduce(gcd, values, 0)
