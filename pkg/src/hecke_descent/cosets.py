"""Coset spaces K sigma K / K, their U-orbits, and mixed degrees.

Cosets gK of K = G(Z_l) are lattices g Z_l^4, so all enumeration happens on
``LatticeKey`` values.  Integral elements act through truncated integer
matrices; only keys are compared, never matrices.

Stabilizers inside H are handled through the block hull: if Lam is a lattice,
then Stab_H(Lam) sits inside Stab_H(M) with M the direct sum of the
intersections of Lam with the two coordinate blocks, and Stab_H(M) is
``c U c^-1`` for the block matrix ``c`` whose columns span M.  Working in
the coordinates ``c^-1 Lam`` turns every stabilizer into a stabilizer inside U,
reachable by Schreier generators from a finite orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groups import Elem, elem_inv, elem_mul
from .ladic import (
    ExactMatrix,
    WindowEscape,
    act_exact,
    act_integral,
    lattice_key,
    mat_mul,
    standard_key,
    sublattice_on_coordinates,
)


class InstabilityError(RuntimeError):
    """Results differ between precision m and m+1."""


class DegreeMismatch(RuntimeError):
    """The two degree computations disagree."""


def _identity_elem(n=4):
    return Elem(1, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def act_point(e, point):
    if isinstance(point, tuple):
        return tuple(act_integral(e.mat, p) for p in point)
    return act_integral(e.mat, point)


@dataclass
class Orbit:
    points: list
    index: dict
    transversal: list

    @property
    def size(self):
        return len(self.points)


def orbit(gens, start, want_transversal=True, mod=None, limit=None):
    """BFS orbit of ``start`` under the monoid generated by ``gens``.

    For a finite orbit this is the group orbit.  ``transversal[i]`` maps the
    start point to ``points[i]``.
    """
    points = [start]
    index = {start: 0}
    trans = [_identity_elem()] if want_transversal else None
    head = 0
    while head < len(points):
        p = points[head]
        for s in gens:
            q = act_point(s, p)
            if q not in index:
                index[q] = len(points)
                points.append(q)
                if want_transversal:
                    trans.append(elem_mul(s, trans[head], mod))
                if limit is not None and len(points) > limit:
                    raise RuntimeError(f"orbit exceeds {limit} points")
        head += 1
    return Orbit(points, index, trans)


def schreier_generators(gens, orb, mod):
    """Generators of the stabilizer of the orbit's start point."""
    out, seen = [], set()
    ident = _identity_elem().key()
    inv_cache = {}
    for i, p in enumerate(orb.points):
        t = orb.transversal[i]
        for s in gens:
            j = orb.index[act_point(s, p)]
            if j not in inv_cache:
                inv_cache[j] = elem_inv(orb.transversal[j], mod)
            g = elem_mul(inv_cache[j], elem_mul(s, t, mod), mod)
            k = g.key()
            if k != ident and k not in seen:
                seen.add(k)
                out.append(g)
    return out


# -- block hull -----------------------------------------------------------------

def block_hull(model, key):
    """Block matrix c with c Z^4 = (Lam cap V1) + (Lam cap V2)."""
    n = model.dim
    cols = [None] * n
    den = key.window
    for block in model.blocks:
        vecs, _ = sublattice_on_coordinates(key, block)
        for pos, vec in zip(block, vecs):
            cols[pos] = vec
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    return ExactMatrix(rows, den, model.ell)


@dataclass
class HullFrame:
    """Coordinates in which Stab_H(Lam) becomes a stabilizer inside U."""

    hull: ExactMatrix
    hull_inv: ExactMatrix
    local: object  # key of hull^-1 Lam


def hull_frame(model, key, window):
    c = block_hull(model, key)
    ci = c.inverse()
    return HullFrame(c, ci, act_exact(ci, key, window))


# -- coset spaces -----------------------------------------------------------------

@dataclass
class CosetSpace:
    sigma: ExactMatrix
    g: ExactMatrix
    window: int
    keys: list  # keys of g gamma sigma Z^4
    base_keys: list  # keys of gamma sigma Z^4

    @property
    def size(self):
        return len(self.keys)


def enumerate_cosets(model, sigma, precision, window, g=None):
    """All cosets g gamma sigma K for gamma in K, as lattice keys."""
    mod = model.ell ** precision
    gens = model.k_generators(precision)
    start = lattice_key(sigma, window)
    orb = orbit(gens, start, want_transversal=False, mod=mod)
    base = orb.points
    if g is None:
        g = ExactMatrix.identity(model.dim, model.ell)
        keys = list(base)
    else:
        keys = [act_exact(g, k, window) for k in base]
    return CosetSpace(sigma, g, window, keys, base)


@dataclass
class DoubleCosetClass:
    rep_key: object
    members: list
    size: int
    contains: list = field(default_factory=list)


@dataclass
class DoubleCosetDecomposition:
    classes: list
    frame_g: HullFrame
    u_gens: list  # generators of Stab_U(frame local point), i.e. U_g in hull coordinates

    @property
    def index_set(self):
        return list(range(len(self.classes)))


def u_level_generators(model, g_key, precision, window):
    """Hull frame of g Z^4 and generators of U_g = H cap gKg^-1 in that frame."""
    mod = model.ell ** precision
    frame = hull_frame(model, g_key, window)
    u0 = model.u_generators(precision)
    orb = orbit(u0, frame.local, mod=mod)
    if orb.size == 1:
        return frame, u0
    return frame, schreier_generators(u0, orb, mod)


def double_coset_partition(model, cs, precision, printed=None):
    """Orbits of U_g = H cap gKg^-1 on the coset space."""
    mod = model.ell ** precision
    w = cs.window
    g_key = lattice_key(cs.g, w)
    frame, gens = u_level_generators(model, g_key, precision, w)
    local = {k: act_exact(frame.hull_inv, k, w) for k in cs.keys}
    back = {v: k for k, v in local.items()}
    remaining = set(local.values())
    classes = []
    for lk in sorted(local.values(), key=lambda k: _global_sort(back[k])):
        if lk not in remaining:
            continue
        orb = orbit(gens, lk, want_transversal=False, mod=mod)
        pts = set(orb.points)
        if not pts <= remaining:
            raise RuntimeError("U-generators do not stabilize the coset space")
        remaining -= pts
        members = sorted((back[p] for p in pts), key=_global_sort)
        classes.append(DoubleCosetClass(members[0], members, len(members)))
    classes.sort(key=lambda c: _global_sort(c.rep_key))
    if printed:
        for name, mat in printed.items():
            k = lattice_key(mat, w)
            hits = [c for c in classes if k in c.members]
            if len(hits) != 1:
                raise RuntimeError(f"printed representative {name} not found in the coset space")
            hits[0].contains.append(name)
        seen = [c for c in classes if c.contains]
        if any(len(c.contains) > 1 for c in seen):
            raise RuntimeError("printed representatives share a class")
    return DoubleCosetDecomposition(classes, frame, gens)


def _global_sort(key):
    return key.sort_key()


# -- mixed degree -------------------------------------------------------------------

@dataclass
class DegreeRecord:
    sigma_key: object
    deg: int
    method_a_value: int
    method_b_value: int
    precision_used: int
    h_gens: list = field(default_factory=list)  # H_i in hull coordinates
    ui_gens: list = field(default_factory=list)  # U_i in hull coordinates


def mixed_degree(model, sigma_key, g_key, precision, window):
    """[H_i : U_i] for H_i = Stab_H(sigma_i Z^4), U_i = H_i cap Stab_H(g Z^4).

    (a) orbit of the g-lattice under Schreier generators of H_i;
    (b) ratio of U-orbit sizes of the pair and of the sigma_i-lattice.
    """
    mod = model.ell ** precision
    frame = hull_frame(model, sigma_key, window)
    loc_g = act_exact(frame.hull_inv, g_key, window)
    u0 = model.u_generators(precision)

    single = orbit(u0, frame.local, mod=mod)
    pair = orbit(u0, (frame.local, loc_g), want_transversal=False, mod=mod)
    if pair.size % single.size:
        raise DegreeMismatch("pair orbit is not a multiple of the single orbit")
    b_val = pair.size // single.size

    h_gens = u0 if single.size == 1 else schreier_generators(u0, single, mod)
    a_orb = orbit(h_gens, loc_g, mod=mod)
    a_val = a_orb.size
    ui = h_gens if a_val == 1 else schreier_generators(h_gens, a_orb, mod)
    if a_val != b_val:
        raise DegreeMismatch(f"degree methods disagree: {a_val} vs {b_val}")
    return DegreeRecord(sigma_key, a_val, a_val, b_val, precision, h_gens, ui)


def subgroup_index_by_orbit(gens, point, mod):
    """Index of the stabilizer of ``point`` in the group generated by ``gens``."""
    return orbit(gens, point, want_transversal=False, mod=mod).size


def coset_count(model, sigma, precision, window):
    return enumerate_cosets(model, sigma, precision, window).size


def spread(*mats):
    """Largest denominator exponent among the given matrices and their inverses."""
    s = 0
    for m in mats:
        for x in (m, m.inverse()):
            v = x.valuation()
            if v is not None:
                s = max(s, -v)
    return s


def window_for(precision, spread_):
    return max(1, (precision - spread_) // 2)


__all__ = [
    "CosetSpace", "DoubleCosetDecomposition", "DoubleCosetClass", "DegreeRecord",
    "InstabilityError", "DegreeMismatch", "WindowEscape", "enumerate_cosets",
    "double_coset_partition", "mixed_degree", "orbit", "schreier_generators",
    "block_hull", "hull_frame", "u_level_generators", "spread", "window_for",
    "coset_count", "subgroup_index_by_orbit", "standard_key", "mat_mul",
]
