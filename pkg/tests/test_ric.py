from fractions import Fraction

import pytest

from hecke_descent.finite import symmetric_group
from hecke_descent.models import AXIOM_MODELS, get_model
from hecke_descent.ric import (
    AXIOMS,
    RicInstance,
    WeightedCycleList,
    build_finite_model,
    check_axioms,
    check_pushforward,
    hecke_apply,
    identity_component,
    mixed_hecke_apply,
    x_class,
    y_class,
)
from hecke_descent.selfcheck import lemma_suite, mutation_suite


@pytest.mark.parametrize("name", list(AXIOM_MODELS) + ["S4/D4", "GL2(F3)/B"])
def test_axioms_hold_exhaustively(name):
    fm = get_model(name)
    assert fm.G.order <= 48
    res = check_axioms(fm.M, fm.levels or None)
    res.update(check_pushforward(fm.iota, fm.levels or None))
    for ax in AXIOMS + ("pushforward", "Mackey pushforward"):
        assert res[ax].checked > 0 or ax == "Galois", ax
        assert res[ax].passed, (ax, res[ax].first_failure)


def test_unnormalized_trace_breaks_cohomological():
    fm = get_model("S3/A3")
    bad = RicInstance(fm.G, fm.J, mutation="unnormalized_trace")
    res = check_axioms(bad)
    assert not res["Cohomological"].passed
    assert res["C2"].passed and res["C3"].passed
    assert all(r.ok for r in mutation_suite())


def test_s3_component_basis_sizes():
    fm = get_model("S3/A3")
    for V in fm.G.subgroups():
        if V <= fm.H:
            assert len(fm.N.basis(V)) in {1, 3}


def test_mackey_square_on_s3():
    G = symmetric_group(3)
    K = frozenset(range(G.order))
    A3 = G.generate([G.elem((1, 2, 0))])
    assert len(G.double_cosets(A3, K, A3)) == 2
    M = get_model("S3/A3").M
    for f in M.basis(A3):
        lhs = M.pr_pull(A3, K, M.pr_push(A3, K, f))
        rhs = M.zero()
        for d in G.double_cosets(A3, K, A3):
            Ld = A3 & G.conj(d, A3)
            rhs = M.add(rhs, M.push(d, Ld, A3, M.pr_pull(Ld, A3, f)))
        assert lhs == rhs


def test_build_rejects_non_normal_or_nonabelian():
    G = symmetric_group(3)
    K = frozenset(range(6))
    transposition = G.generate([G.elem((1, 0, 2))])
    with pytest.raises(ValueError):
        build_finite_model(G, K, transposition)
    with pytest.raises(ValueError):
        build_finite_model(G, K, frozenset([G.identity]))


def test_y_equals_x_when_h_is_g():
    fm = get_model("S4/S4")
    G = fm.G
    for K in G.subgroups()[::5]:
        for g in range(0, G.order, 7):
            assert y_class(fm.iota, g, K) == x_class(fm.iota, g, K)


def test_mixed_hecke_with_identity_is_pushforward():
    fm = get_model("A4/V4")
    G = fm.G
    for K in G.subgroups():
        U = fm.H & K
        for x in fm.N.basis(U):
            assert mixed_hecke_apply(fm.iota, U, G.identity, K, x) == fm.iota.apply(U, K, x)


def test_hecke_identity_double_coset_is_identity():
    fm = get_model("S4/D4")
    G = fm.G
    for K in G.subgroups()[::4]:
        for f in fm.M.basis(K):
            assert hecke_apply(fm.M, G.identity, K, K, f) == f


def test_identity_component_support():
    fm = get_model("S3/A3")
    V = frozenset([fm.G.identity])
    comp = identity_component(fm.N, V)
    assert sum(comp) == len(fm.J)


@pytest.mark.parametrize("name", ["S3/A3", "A4/V4", "S4/D4", "GL2(F3)/B"])
def test_lemma_identities(name):
    rows = lemma_suite(models=(name,), count=8)
    assert rows and all(r.ok for r in rows), [r.name for r in rows if not r.ok]


def test_weighted_cycle_list():
    a = WeightedCycleList(None)
    a.add("x", Fraction(1, 2))
    a.add("y", 1)
    a.add("x", Fraction(-1, 2))
    assert a.items() == [("y", 1)]
    assert a.total() == 1 and a.is_integral() and len(a) == 1
    b = WeightedCycleList(None)
    b.add("y", Fraction(2, 2))
    assert a == b
    b.add("z", Fraction(1, 3))
    assert not b.is_integral() and a != b
