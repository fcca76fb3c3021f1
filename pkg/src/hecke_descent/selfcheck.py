"""Finite-model suites: axioms, descent oracle, specializations and lemma-level identities.

Each suite returns a list of ``Check`` rows; nothing here raises on a failed
identity, so a caller can print a complete table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .descent import OracleMismatch, finite_class_data, finite_descent
from .models import AXIOM_MODELS, CATALOG, TORUS_MODELS, WHOLE_MODELS, get_model
from .ric import (
    RicInstance,
    check_axioms,
    check_pushforward,
    component_reps,
    finite_label,
    hecke_apply,
    identity_component,
    mixed_hecke_apply,
    x_class,
    y_class,
)
from .schwartz import (
    SchwartzSpace,
    convolution,
    enumeration_identity,
    find_instances,
    compare_operators,
    ind,
    op_cov,
    op_T,
    random_function,
)


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""


def axiom_suite(models=AXIOM_MODELS):
    rows = []
    for name in models:
        fm = get_model(name)
        res = check_axioms(fm.M, fm.levels or None)
        res.update(check_pushforward(fm.iota, fm.levels or None))
        for ax, r in res.items():
            rows.append(Check("axioms", f"{name}:{ax}", r.passed,
                              f"{r.checked} checked, {r.failures} failed {r.first_failure}".strip()))
    return rows


def mutation_suite(model="S3/A3"):
    fm = get_model(model)
    bad = RicInstance(fm.G, fm.J, mutation="unnormalized_trace")
    res = check_axioms(bad)
    co = res["Cohomological"]
    return [Check("mutation", f"{model}:unnormalized trace breaks Cohomological", not co.passed,
                  f"{co.failures} of {co.checked} failed")]


def random_triples(fm, count, rng):
    subs = fm.levels or fm.G.subgroups()
    return [(rng.choice(subs), rng.randrange(fm.G.order), rng.randrange(fm.G.order)) for _ in range(count)]


def descent_suite(models=None, count=20, seed=0):
    rows = []
    rng = random.Random(seed)
    for name in models or CATALOG:
        fm = get_model(name)
        bad = 0
        detail = ""
        for K, g, s in random_triples(fm, count, rng):
            try:
                finite_descent(fm, K, g, s)
            except OracleMismatch as exc:
                bad += 1
                detail = detail or str(exc)
        rows.append(Check("descent oracle", f"{name}", bad == 0, detail or f"{count} triples"))
    return rows


def specialization_suite(count=20, seed=1):
    rows = []
    rng = random.Random(seed)
    for name in TORUS_MODELS:
        fm = get_model(name)
        ok = all(finite_descent(fm, K, g, s).equal for K, g, s in random_triples(fm, count, rng))
        rows.append(Check("specialization", f"{name}: torus model equals naive", ok))
    for name in WHOLE_MODELS:
        fm = get_model(name)
        G = fm.G
        ok = True
        for K, g, s in random_triples(fm, count, rng):
            rep = finite_descent(fm, K, g, s)
            inv_count = len(G.double_coset(K, G.inv[s], K)) // len(K)
            items = rep.descent_list.items()
            if len(items) != 1 or items[0][1] != inv_count:
                ok = False
            if items[0][0] != finite_label(fm.M, G.table[g][s], K):
                ok = False
        rows.append(Check("specialization", f"{name}: single term of weight |K s^-1 K/K|", ok))
    return rows


def lemma_suite(models=("S3/A3", "A4/V4", "S4/D4", "S4/S3", "GL2(F3)/B"), count=12, seed=2):
    """Function-level identities behind the descent argument."""
    rows = []
    rng = random.Random(seed)
    for name in models:
        fm = get_model(name)
        G, H, M, N, iota = fm.G, fm.H, fm.M, fm.N, fm.iota
        t = G.table
        ok = {"twist": True, "coset split": True, "x decomposition": True,
              "component pullback": True, "uniform fibres": True, "degree": True}
        for K, g, s in random_triples(fm, count, rng):
            Kp = G.conj(g, K)
            vs = t[g][s]
            # twist: [K s K] y_K(g) = [K' (g s) K] y_K'(1)
            lhs = hecke_apply(M, s, K, K, y_class(iota, g, K))
            rhs = hecke_apply(M, vs, Kp, K, y_class(iota, G.identity, Kp))
            ok["twist"] &= lhs == rhs
            # double coset split on every basis vector of N(U)
            U, data = finite_class_data(fm, K, g, s)
            for x in N.basis(U):
                left = hecke_apply(M, vs, Kp, K, iota.apply(U, Kp, x))
                right = M.zero()
                for row in data:
                    right = M.add(right, mixed_hecke_apply(iota, U, row["sigma_i"], K, x))
                ok["coset split"] &= left == right
            # mixed degree against the pushforward of the fundamental class
            for row in data:
                fund = N.indicator(H)
                pushed = mixed_hecke_apply(iota, U, row["sigma_i"], K, fund)
                ok["degree"] &= pushed == M.scale(row["deg"], x_class(iota, row["sigma_i"], K))
            # x_K(g) as a sum of y_K(h g) over components of H cap gKg^-1
            V = H & Kp
            total = M.zero()
            for h in component_reps(G, H, fm.J, V):
                total = M.add(total, y_class(iota, t[h][g], K))
            ok["x decomposition"] &= total == x_class(iota, g, K)
        for V1 in G.subgroups():
            if not V1 <= H:
                continue
            JV1 = fm.jset(V1)
            for V2 in G.subgroups():
                if not V2 <= V1:
                    continue
                JV2 = fm.jset(V2)
                pulled = N.pr_pull(V2, V1, identity_component(N, V1))
                parts = N.zero()
                seen = set()
                for h in sorted(JV1):
                    comp = frozenset(t[h][x] for x in JV2)
                    if comp in seen:
                        continue
                    seen.add(comp)
                    parts = N.add(parts, N.indicator(comp))
                ok["component pullback"] &= pulled == parts
                e = len(JV1) // len(JV2)
                counts = {}
                for x in G.left_cosets(V1, V2):
                    comp = frozenset(t[x][y] for y in JV2)
                    counts[comp] = counts.get(comp, 0) + 1
                want = (len(V1) // len(V2)) // e
                ok["uniform fibres"] &= len(counts) == e and set(counts.values()) == {want}
        for k, v in ok.items():
            rows.append(Check("lemmas", f"{name}:{k}", v))
    return rows


def shortcut_counter_instance():
    """Search the catalog for a class with nu(H_i) not inside nu(U)."""
    for name in CATALOG:
        fm = get_model(name)
        G = fm.G
        for K in G.subgroups():
            for s in range(G.order):
                U, data = finite_class_data(fm, K, G.identity, s)
                JU = fm.jset(U)
                for row in data:
                    if not fm.jset(row["H_i"]) <= JU:
                        return {"model": name, "K": sorted(K), "sigma": s, "sigma_i": row["sigma_i"],
                                "c": row["c"], "e": row["e"]}
    return None


def schwartz_suite(seed=3, pairs=50):
    from .finite import gl2_group, symmetric_group
    rows = []
    rng = random.Random(seed)
    groups = [symmetric_group(3), symmetric_group(4), gl2_group(3)]
    ok_impl = True
    ok_enum = True
    tested = 0
    for G in groups:
        subs = G.subgroups()
        for _ in range(40):
            J, K, s = rng.choice(subs), rng.choice(subs), rng.randrange(G.order)
            r = compare_operators(G, J, K, s)
            ok_impl &= r["implication_ok"]
            ok_enum &= enumeration_identity(G, K, s)
            tested += 1
    rows.append(Check("schwartz", "condition implies equal operators", ok_impl, f"{tested} cases"))
    rows.append(Check("schwartz", "coset lists enumerate K s K / L once", ok_enum, f"{tested} cases"))
    G3 = symmetric_group(3)
    J = G3.generate([G3.elem((1, 2, 0))])
    K = G3.generate([G3.elem((1, 0, 2))])
    r = compare_operators(G3, J, K, G3.elem((0, 2, 1)))
    rows.append(Check("schwartz", "trivial intersections give equal operators",
                      r["condition_holds"] and r["operators_equal"]))
    for size, G in ((3, gl2_group(3)), (4, symmetric_group(4))):
        K, s = find_instances(G, size)[0]
        S = SchwartzSpace(G, K, K)
        one = S.ch(G.identity)
        lhs, rhs = ind(op_T(s, one)), ind(op_cov(s, one))
        conv = convolution(one, S.ch(s)) == op_cov(s, one)
        rows.append(Check("schwartz", f"J=K counterexample, |KsK/K|={size}",
                          lhs == size * size and rhs == size and conv, f"{lhs} vs {rhs}"))
    G = gl2_group(3)
    mult = True
    for _ in range(pairs):
        K = rng.choice(G.subgroups())
        S = SchwartzSpace(G, K, K)
        f, h = random_function(S, rng), random_function(S, rng)
        mult &= ind(convolution(f, h)) == ind(f) * ind(h)
    rows.append(Check("schwartz", f"ind multiplicative on {pairs} pairs", mult))
    return rows


def run_all(seed=0):
    rows = []
    rows += axiom_suite()
    rows += mutation_suite()
    rows += descent_suite(seed=seed)
    rows += specialization_suite()
    rows += lemma_suite()
    rows += schwartz_suite()
    inst = shortcut_counter_instance()
    rows.append(Check("components", "finite instance with nu(H_i) outside nu(U)", inst is not None, str(inst)))
    return rows


__all__ = ["Check", "axiom_suite", "mutation_suite", "descent_suite", "specialization_suite",
           "lemma_suite", "schwartz_suite", "shortcut_counter_instance", "run_all"]
