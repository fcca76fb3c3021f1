"""Descent formula versus the naive coset sum.

Two back ends share one report type.  The l-adic back end runs the coset
engine and the component model for a named scenario and certifies every
integer at two consecutive precisions.  The finite back end works inside an
explicit finite group and checks its answer against the function-space
evaluation of [K sigma K]_* y_K(g), which must agree exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .components import TorusModel, shortcut_check, kernel_constants, nu_image
from .cosets import (
    DegreeMismatch,
    InstabilityError,
    double_coset_partition,
    enumerate_cosets,
    mixed_degree,
    orbit,
    spread,
    window_for,
)
from .groups import Elem, build_scenario, elem_mul
from .ladic import ExactMatrix, WindowEscape, act_exact, lattice_key, mat_mul
from .ric import (
    WeightedCycleList,
    build_finite_model,
    finite_label,
    hecke_apply,
    x_class,
    y_class,
)


class OracleMismatch(RuntimeError):
    """Descent output differs from the direct function-space evaluation."""


@dataclass
class ClassRecord:
    rep: str  # serialized representative
    names: list
    size: int  # [U : U_i]
    deg: int
    c: int
    e: int
    card_A: int
    card_B: int
    d: int = 1
    method_a: int = 0
    method_b: int = 0
    shortcut: dict = field(default_factory=dict)

    @property
    def weight(self):
        return Fraction(self.c * self.deg, self.e * self.d)


@dataclass
class DescentReport:
    scenario: str
    ell: int | None
    precision: int | None
    classes: list
    descent_list: WeightedCycleList
    a_variant_list: WeightedCycleList
    naive_list: WeightedCycleList
    x_list: WeightedCycleList | None
    naive_count: int
    descent_count: Fraction
    equal: bool
    certificate: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def signature(self):
        """Every reported integer, for the stability comparison."""
        return (self.naive_count, self.descent_count,
                tuple((c.size, c.deg, c.c, c.e, c.card_A, c.card_B) for c in self.classes),
                tuple(self.descent_list.items()), tuple(self.naive_list.items()))


def _weight_sum(wl):
    return wl.total()


def compare(descent, naive):
    return descent == naive


# -- l-adic back end -------------------------------------------------------------

_FACTORS = {"gsp4": 1, "gu22": 3}


def _adelic_once(name, ell, m, d, m_index, g, sigma, window_extra=0):
    sc = build_scenario(name, ell, m, d=d, m_index=m_index)
    model = sc.model
    mod = ell ** m
    sig = sigma if sigma is not None else sc.sigma
    gg = g if g is not None else ExactMatrix.identity(4, ell)
    mats = [sig, gg, mat_mul(gg, sig)]
    if sigma is None:
        mats.append(sc.tau)
    s = spread(*mats)
    w = window_for(m, s) + window_extra
    if 2 * w > m:
        raise WindowEscape("window exceeds precision")
    if sig.det() == 0 or not model.in_g(sig) or not model.in_g(gg):
        raise ValueError("g and sigma must lie in the group")

    cs = enumerate_cosets(model, sig, m, w, g=gg if g is not None else None)
    printed = None
    if sigma is None and g is None:
        printed = sc.printed_reps
    dec = double_coset_partition(model, cs, m, printed)
    g_key = lattice_key(gg, w)
    frame = dec.frame_g
    torus = TorusModel(ell, m, _FACTORS[name])
    nu_U = nu_image(torus, model.nu, dec.u_gens)

    classes, descent, a_var, naive, x_list = [], WeightedCycleList(None), WeightedCycleList(None), \
        WeightedCycleList(None), WeightedCycleList(None)
    for i, cl in enumerate(dec.classes):
        rec = mixed_degree(model, cl.rep_key, g_key, m, w)
        nu_H = nu_image(torus, model.nu, rec.h_gens)
        nu_Ui = nu_image(torus, model.nu, rec.ui_gens)
        data = kernel_constants(nu_Ui, nu_U, nu_H)
        if printed and cl.contains:
            rep = printed[cl.contains[0]].serialize()
        else:
            rep = cl.rep_key.basis().serialize()
        rec_out = ClassRecord(rep=_rep_text(rep), names=list(cl.contains), size=cl.size, deg=rec.deg,
                              c=data.c, e=data.e, card_A=data.card_A, card_B=data.card_B,
                              method_a=rec.method_a_value, method_b=rec.method_b_value,
                              shortcut=shortcut_check(nu_U, nu_H))
        classes.append(rec_out)
        tag = cl.contains[0] if cl.contains else f"class{i}"

        def label(vec, tag=tag, nu_H=nu_H):
            comp = nu_H.reduce(vec)
            return f"{tag}|{','.join(str(x) for x in comp)}"

        # representatives of A_i = nu(U)/nu(U_i), walked inside U_g
        a_reps = _quotient_reps(dec.u_gens, torus, model, nu_Ui, mod)
        b_seen = {}
        for vec, _h in a_reps:
            a_var.add(label(vec), Fraction(rec.deg, data.e))
            lab = label(vec)
            b_seen.setdefault(lab, vec)
        if len(b_seen) != data.card_B or len(a_reps) != data.card_A:
            raise DegreeMismatch("component representatives do not match the constants")
        for lab in b_seen:
            descent.add(lab, rec_out.weight)
        x_list.add(label(torus.group.zero()), rec.deg)
        # naive: each coset u sigma_i K in the class, labelled by nu(u) mod nu(H_i)
        loc = act_exact(frame.hull_inv, cl.rep_key, w)
        orb = orbit(dec.u_gens, loc, mod=mod)
        for u in orb.transversal:
            naive.add(label(torus.log(model.nu(u, mod))), 1)

    report = DescentReport(
        scenario=name, ell=ell, precision=m, classes=classes,
        descent_list=descent, a_variant_list=a_var, naive_list=naive, x_list=x_list,
        naive_count=cs.size, descent_count=_weight_sum(descent),
        equal=compare(descent, naive),
        params={"window": w, "spread": s, **_scenario_params(sc)})
    if descent != a_var:
        raise DegreeMismatch("A-variant and B-variant disagree after merging labels")
    if sum(c.size for c in classes) != cs.size:
        raise DegreeMismatch("class sizes do not partition the coset space")
    return report


def _rep_text(rows):
    return "[" + "; ".join(" ".join(r) for r in rows) + "]"


def _scenario_params(sc):
    out = {}
    for k, v in sc.params.items():
        if k == "xi":
            out["xi"] = [str(v[0]), str(v[1])]
        elif k != "alpha":
            out[k] = v
    return out


def _quotient_reps(gens, torus, model, sub, mod):
    """Pairs (nu-vector, element) with one element of <gens> per class of nu(<gens>)/sub."""
    ident = Elem(1, tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))
    start = sub.reduce(torus.group.zero())
    found = {start: (torus.group.zero(), ident)}
    frontier = [start]
    while frontier:
        nxt = []
        for cls in sorted(frontier):
            vec, h = found[cls]
            for s in gens:
                v2 = torus.group.add(vec, torus.log(model.nu(s, mod)))
                c2 = sub.reduce(v2)
                if c2 not in found:
                    found[c2] = (v2, elem_mul(s, h, mod))
                    nxt.append(c2)
        frontier = nxt
    return [found[k] for k in sorted(found)]


def adelic_descent(name, ell, precision=None, d=1, m_index=1, g=None, sigma=None,
                   max_precision=8, timings=False):
    """Run a scenario at precision m and m+1, growing m until both agree."""
    t0 = time.perf_counter()
    if precision is None:
        sc = build_scenario(name, ell, 1, d=d, m_index=m_index)
        mats = [sigma or sc.sigma, sc.tau] + ([g] if g is not None else [])
        precision = 2 * spread(*mats) + 2
    if precision >= max_precision:
        raise ValueError(f"starting precision {precision} leaves no room below the ceiling {max_precision}")
    m = precision
    history = []
    prev = None
    while m <= max_precision:
        try:
            cur = _adelic_once(name, ell, m, d, m_index, g, sigma)
        except WindowEscape as exc:
            history.append({"precision": m, "status": f"window escape: {exc}"})
            prev = None
            m += 1
            continue
        history.append({"precision": m, "naive_count": cur.naive_count,
                        "descent_count": str(cur.descent_count),
                        "degrees": [c.deg for c in cur.classes]})
        if prev is not None and prev.signature() == cur.signature():
            prev.certificate = {"checked_at": [prev.precision, cur.precision], "history": history}
            if timings:
                prev.timings = {"total_seconds": round(time.perf_counter() - t0, 3)}
            prev.notes.append("labels are J-double-coset classes within each U-class; "
                              "counts of distinct cycles are upper bounds")
            return prev
        if prev is not None:
            history[-1]["status"] = "unstable"
        prev = cur
        m += 1
    raise InstabilityError(f"no two consecutive precisions agreed up to {max_precision}: {history}")


# -- finite back end ---------------------------------------------------------------

@dataclass
class FiniteModel:
    """A finite group G with subgroups H and J, J normal in H, H/J abelian."""

    name: str
    G: object
    H: frozenset
    J: frozenset
    levels: list = field(default_factory=list)

    def __post_init__(self):
        self.N, self.M, self.iota = build_finite_model(self.G, self.H, self.J, self.name)

    def jset(self, V):
        t = self.G.table
        return frozenset(t[j][v] for j in self.J for v in V)


def _coset_reps(G, big, small_set):
    """Elements of ``big`` giving distinct cosets x*small_set, least first."""
    reps, seen = [], set()
    for x in sorted(big):
        if x in seen:
            continue
        cos = frozenset(G.table[x][y] for y in small_set)
        seen |= cos
        reps.append(x)
    return reps


def finite_class_data(fm, K, g, sigma):
    """Per-class (sigma_i, U_i, H_i, deg, A reps, B reps, c, e) for [K'(g sigma)K] with K' = gKg^-1."""
    G, H = fm.G, fm.H
    t = G.table
    Kp = G.conj(g, K)
    U = H & Kp
    vs = t[g][sigma]
    S = G.double_coset(Kp, vs, K)
    out = []
    JU = fm.jset(U)
    for s_i in G.double_cosets(U, S, K):
        sK = G.conj(s_i, K)
        Ui, Hi = U & sK, H & sK
        JUi, JHi = fm.jset(Ui), fm.jset(Hi)
        deg = len(Hi) // len(Ui)
        a_classes = _coset_reps(G, U, JUi)
        if len(a_classes) != len(JU) // len(JUi):
            raise OracleMismatch("A_i representative count")
        b_reps, seen_b = [], set()
        for h in a_classes:
            cos = frozenset(t[h][x] for x in JHi)
            if cos not in seen_b:
                seen_b.add(cos)
                b_reps.append(h)
        e = len(JHi) // len(JUi)
        card_B = len(b_reps)
        if len(a_classes) % card_B:
            raise OracleMismatch("|B_i| does not divide |A_i|")
        out.append({"sigma_i": s_i, "U_i": Ui, "H_i": Hi, "deg": deg, "A": a_classes, "B": b_reps,
                    "card_A": len(a_classes), "card_B": card_B, "c": len(a_classes) // card_B, "e": e,
                    "size": len(U) // len(Ui)})
    return U, out


def finite_descent(fm, K, g, sigma, d=1):
    """Descent report for a finite model, checked against the direct evaluation."""
    G, M, iota = fm.G, fm.M, fm.iota
    t = G.table
    U, data = finite_class_data(fm, K, g, sigma)
    descent, a_var, x_list = WeightedCycleList(K), WeightedCycleList(K), WeightedCycleList(K)
    classes = []
    for row in data:
        s_i = row["sigma_i"]
        w = Fraction(row["c"] * row["deg"], row["e"] * d)
        for h in row["B"]:
            descent.add(finite_label(M, t[h][s_i], K), w)
        for h in row["A"]:
            a_var.add(finite_label(M, t[h][s_i], K), Fraction(row["deg"], row["e"] * d))
        x_list.add(s_i, row["deg"])
        classes.append(ClassRecord(rep=str(s_i), names=[], size=row["size"], deg=row["deg"],
                                   c=row["c"], e=row["e"], card_A=row["card_A"], card_B=row["card_B"],
                                   d=d, method_a=row["deg"], method_b=len(row["H_i"]) // len(row["U_i"])))
    naive = WeightedCycleList(K)
    kσk = G.double_coset(K, sigma, K)
    for gamma in G.left_cosets(kσk, K):
        naive.add(finite_label(M, t[g][gamma], K), 1)

    direct = hecke_apply(M, sigma, K, K, y_class(iota, g, K))
    got = _evaluate(fm, descent, K)
    if tuple(Fraction(x) for x in direct) != tuple(Fraction(x) * d for x in got):
        raise OracleMismatch(f"descent formula differs from the direct evaluation (g={g}, sigma={sigma})")
    if _evaluate(fm, a_var, K) != got:
        raise OracleMismatch("A-variant differs from the B-variant")
    direct_x = hecke_apply(M, sigma, K, K, x_class(iota, g, K))
    got_x = _evaluate(fm, x_list, K, kind="x")
    if tuple(Fraction(x) for x in direct_x) != got_x:
        raise OracleMismatch("x-class descent differs from the direct evaluation")
    return DescentReport(
        scenario=f"finite:{fm.name}", ell=None, precision=None, classes=classes,
        descent_list=descent, a_variant_list=a_var, naive_list=naive, x_list=x_list,
        naive_count=len(G.left_cosets(kσk, K)), descent_count=descent.total(),
        equal=compare(descent, naive), params={"g": g, "sigma": sigma, "K": sorted(K)})


def _evaluate(fm, wl, K, kind="y"):
    M, iota = fm.M, fm.iota
    fn = y_class if kind == "y" else x_class
    out = tuple(Fraction(0) for _ in range(M.G.order))
    for label, c in wl.items():
        out = M.add(out, M.scale(c, fn(iota, label, K)))
    return out


def direct_evaluation(fm, K, g, sigma):
    return hecke_apply(fm.M, sigma, K, K, y_class(fm.iota, g, K))


__all__ = [
    "ClassRecord", "DescentReport", "FiniteModel", "OracleMismatch", "InstabilityError",
    "adelic_descent", "finite_descent", "finite_class_data", "direct_evaluation", "compare",
]
