"""Catalog of small finite models (G, H, J) and a loader for model files.

A model file is JSON with ``generators`` (permutations of 0..n-1 generating
G), ``H`` (permutations generating H) and ``J`` (permutations generating the
kernel of nu inside H).  Optional ``name`` and ``levels`` (lists of generator
lists) may be given.
"""

from __future__ import annotations

import json

from .descent import FiniteModel
from .finite import (
    FiniteGroup,
    alternating_group,
    dihedral_group,
    gl2_group,
    symmetric_group,
)


def _sub(G, perms):
    return G.generate([G.elem(p) for p in perms])


def s3_a3():
    """S3 with H = A3 and nu the identity on A3 (J trivial)."""
    G = symmetric_group(3)
    H = _sub(G, [(1, 2, 0)])
    return FiniteModel("S3/A3", G, H, G.trivial())


def s3_whole():
    """H = G = S3 with trivial nu."""
    G = symmetric_group(3)
    return FiniteModel("S3/S3", G, G.whole(), G.whole())


def s4_whole():
    """H = G = S4 with trivial nu."""
    G = symmetric_group(4)
    return FiniteModel("S4/S4", G, G.whole(), G.whole())


def s3_sign():
    """H = G = S3 with nu the sign character."""
    G = symmetric_group(3)
    return FiniteModel("S3/sign", G, G.whole(), _sub(G, [(1, 2, 0)]))


def a4_v4():
    """A4 with H = A4 and J = V4, so H/J is cyclic of order 3."""
    G = alternating_group(4)
    J = _sub(G, [(1, 0, 3, 2), (2, 3, 0, 1)])
    return FiniteModel("A4/V4", G, G.whole(), J)


def d4_center():
    """Dihedral group of order 8 with H = G and J its centre."""
    G = dihedral_group(4)
    J = _sub(G, [(2, 3, 0, 1)])
    return FiniteModel("D4/Z", G, G.whole(), J)


def s4_d4():
    """S4 with H a dihedral Sylow 2-subgroup and J its centre."""
    G = symmetric_group(4)
    H = _sub(G, [(1, 2, 3, 0), (0, 3, 2, 1)])
    J = _sub(G, [(2, 3, 0, 1)])
    return FiniteModel("S4/D4", G, H, J)


def s4_s3():
    """S4 with H the point stabilizer S3 and J = A3."""
    G = symmetric_group(4)
    H = _sub(G, [(1, 0, 2, 3), (1, 2, 0, 3)])
    J = _sub(G, [(1, 2, 0, 3)])
    return FiniteModel("S4/S3", G, H, J)


def s4_torus():
    """S4 with H = <(0123)> abelian and J trivial."""
    G = symmetric_group(4)
    H = _sub(G, [(1, 2, 3, 0)])
    return FiniteModel("S4/C4", G, H, G.trivial())


def gl2f3_det():
    """GL2(F3) with H = G and nu = det, so J = SL2(F3)."""
    G = gl2_group(3)
    J = frozenset(x for x, m in G.matrix_of.items() if (m[0] * m[3] - m[1] * m[2]) % 3 == 1)
    return FiniteModel("GL2(F3)/det", G, G.whole(), J)


def gl2f3_torus():
    """GL2(F3) with H the diagonal torus and J trivial."""
    G = gl2_group(3)
    H = frozenset(x for x, m in G.matrix_of.items() if m[1] == 0 and m[2] == 0)
    return FiniteModel("GL2(F3)/T", G, H, G.trivial())


def gl2f3_borel():
    """GL2(F3) with H the upper Borel and J its unipotent radical."""
    G = gl2_group(3)
    H = frozenset(x for x, m in G.matrix_of.items() if m[2] == 0)
    J = frozenset(x for x, m in G.matrix_of.items() if m[2] == 0 and m[0] == 1 and m[3] == 1)
    return FiniteModel("GL2(F3)/B", G, H, J)


CATALOG = {
    "S3/A3": s3_a3,
    "S3/S3": s3_whole,
    "S3/sign": s3_sign,
    "S4/S4": s4_whole,
    "A4/V4": a4_v4,
    "D4/Z": d4_center,
    "S4/D4": s4_d4,
    "S4/S3": s4_s3,
    "S4/C4": s4_torus,
    "GL2(F3)/det": gl2f3_det,
    "GL2(F3)/T": gl2f3_torus,
    "GL2(F3)/B": gl2f3_borel,
}

# models small enough for the exhaustive axiom suite
AXIOM_MODELS = ("S3/A3", "S3/sign", "A4/V4", "D4/Z", "S4/S3")
TORUS_MODELS = ("S3/A3", "S4/C4", "GL2(F3)/T")
WHOLE_MODELS = ("S3/S3", "S4/S4")


def get_model(name):
    try:
        return CATALOG[name]()
    except KeyError:
        raise ValueError(f"unknown finite model {name!r}; known: {', '.join(CATALOG)}") from None


def load_model_file(path):
    with open(path) as fh:
        data = json.load(fh)
    return model_from_dict(data)


def model_from_dict(data):
    gens = [tuple(p) for p in data["generators"]]
    G = FiniteGroup(gens, data.get("name", "G"))
    H = G.generate([G.elem(p) for p in data["H"]])
    J = G.generate([G.elem(p) for p in data.get("J", [])])
    fm = FiniteModel(data.get("name", "file"), G, H, J)
    if "levels" in data:
        fm.levels = [G.generate([G.elem(p) for p in lv]) for lv in data["levels"]]
    return fm


__all__ = ["CATALOG", "AXIOM_MODELS", "TORUS_MODELS", "WHOLE_MODELS", "get_model",
           "load_model_file", "model_from_dict"]
