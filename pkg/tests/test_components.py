import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hecke_descent.components import (
    FiniteAbelianGroup,
    ModelMismatch,
    TorusModel,
    UnitGroupModel,
    shortcut_check,
    kernel_constants,
    nu_image,
)
from hecke_descent.descent import adelic_descent, finite_class_data
from hecke_descent.groups import GL1GL4, GSP4, GroupModel
from hecke_descent.models import get_model
from hecke_descent.selfcheck import shortcut_counter_instance

ORDERS = st.lists(st.integers(1, 12), min_size=1, max_size=3)


@given(ORDERS, st.data())
def test_group_axioms(orders, data):
    A = FiniteAbelianGroup(orders)
    el = st.tuples(*(st.integers(0, n - 1) for n in A.orders))
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert A.add(a, b) == A.add(b, a)
    assert A.add(A.add(a, b), c) == A.add(a, A.add(b, c))
    assert A.add(a, A.neg(a)) == A.zero()
    assert A.order() == len(A.elements())


@given(ORDERS, st.data())
def test_subgroup_order_matches_enumeration(orders, data):
    A = FiniteAbelianGroup(orders)
    el = st.tuples(*(st.integers(0, n - 1) for n in A.orders))
    gens = data.draw(st.lists(el, max_size=3))
    S = A.subgroup(gens)
    span = {A.zero()}
    frontier = [A.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = A.add(x, g)
            if y not in span:
                span.add(y)
                frontier.append(y)
    assert S.order() == len(span)
    assert all(S.contains(x) for x in span)
    assert S.index() * S.order() == A.order()
    assert len({S.reduce(x) for x in A.elements()}) == S.index()


def test_unit_group_models():
    assert UnitGroupModel(2, 1).group.order() == 1
    assert UnitGroupModel(2, 2).group.orders == (2,)
    assert UnitGroupModel(2, 4).group.orders == (2, 4)
    u = UnitGroupModel(5, 2)
    assert u.group.order() == 20
    assert len({u.log(x) for x in range(25) if x % 5}) == 20


@pytest.mark.parametrize("kind,ell,factors", [(GSP4, 2, 1), (GSP4, 3, 1), (GL1GL4, 5, 3)])
def test_nu_of_u_is_everything(kind, ell, factors):
    model = GroupModel(kind, ell)
    m = 4
    torus = TorusModel(ell, m, factors)
    nu_U = nu_image(torus, model.nu, model.u_generators(m))
    assert nu_U.order() == torus.group.order()
    trivial = nu_image(torus, model.nu, [])
    assert trivial.order() == 1


def test_kernel_constants_trivial_case():
    A = FiniteAbelianGroup([4])
    S = A.subgroup([(1,)])
    data = kernel_constants(S, S, S)
    assert (data.card_A, data.card_B, data.c, data.e) == (1, 1, 1, 1)


def test_kernel_constants_general():
    A = FiniteAbelianGroup([2, 2])
    Ui = A.trivial()
    U = A.subgroup([(1, 0)])
    Hi = A.subgroup([(0, 1)])
    d = kernel_constants(Ui, U, Hi)
    assert (d.card_A, d.card_B, d.c, d.e) == (2, 2, 1, 2)
    assert d.card_A == d.c * d.card_B
    assert shortcut_check(U, Hi) == {"shortcut_applies": False, "B_singleton": False}


def test_kernel_constants_rejects_bad_nesting():
    A = FiniteAbelianGroup([4])
    with pytest.raises(ModelMismatch):
        kernel_constants(A.whole(), A.trivial(), A.whole())


@pytest.mark.parametrize("name,ell", [("gsp4", 2), ("gu22", 5)])
def test_shortcut_in_scenarios(name, ell):
    rep = adelic_descent(name, ell)
    for c in rep.classes:
        assert c.shortcut == {"shortcut_applies": True, "B_singleton": True}
        assert c.c == c.e and c.card_B == 1


def test_counter_instance_exists():
    inst = shortcut_counter_instance()
    assert inst is not None
    fm = get_model(inst["model"])
    K = frozenset(inst["K"])
    U, data = finite_class_data(fm, K, fm.G.identity, inst["sigma"])
    row = next(r for r in data if r["sigma_i"] == inst["sigma_i"])
    assert not fm.jset(row["H_i"]) <= fm.jset(U)


def test_kernel_sizes_multiply_along_chains():
    """|ker(pi0(V3) -> pi0(V1))| = |ker(V3 -> V2)| * |ker(V2 -> V1)| in finite models."""
    rng = random.Random(5)
    for name in ("S4/D4", "A4/V4", "GL2(F3)/B"):
        fm = get_model(name)
        subs = [S for S in fm.G.subgroups() if S <= fm.H]
        for _ in range(40):
            V1 = rng.choice(subs)
            inside = [S for S in subs if S <= V1]
            V2 = rng.choice(inside)
            V3 = rng.choice([S for S in inside if S <= V2])
            k = lambda a, b: len(fm.jset(a)) // len(fm.jset(b))  # noqa: E731
            assert k(V1, V3) == k(V1, V2) * k(V2, V3)
            # pi0 sizes: |ker| * |pi0(V1)| = |pi0(V3)|
            pi0 = lambda V: len(fm.H) // len(fm.jset(V))  # noqa: E731
            assert k(V1, V3) * pi0(V1) == pi0(V3)
