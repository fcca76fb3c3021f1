import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecke_descent.finite import gl2_group, symmetric_group
from hecke_descent.schwartz import (
    SchwartzSpace,
    convolution,
    enumeration_identity,
    find_instances,
    compare_operators,
    ind,
    op_cov,
    op_cov_functorial,
    op_T,
    random_function,
)

S3, S4, GL23 = symmetric_group(3), symmetric_group(4), gl2_group(3)
GROUPS = {"S3": S3, "S4": S4, "GL2(F3)": GL23}


@settings(max_examples=40)
@given(st.sampled_from(sorted(GROUPS)), st.integers(0, 10 ** 6))
def test_condition_implies_equal_operators(gname, seed):
    G = GROUPS[gname]
    rng = random.Random(seed)
    subs = G.subgroups()
    J, K, s = rng.choice(subs), rng.choice(subs), rng.randrange(G.order)
    r = compare_operators(G, J, K, s)
    assert r["implication_ok"]


def test_trivial_intersections_give_equality():
    J = S3.generate([S3.elem((1, 2, 0))])
    K = S3.generate([S3.elem((1, 0, 2))])
    r = compare_operators(S3, J, K, S3.elem((0, 2, 1)))
    assert r["condition_holds"] and r["operators_equal"]


def test_normal_j_and_k_satisfy_condition():
    J = S4.generate([S4.elem((1, 0, 3, 2)), S4.elem((2, 3, 0, 1))])
    normal = [K for K in S4.subgroups() if S4.is_normal(K, S4.whole())]
    assert len(normal) == 4
    for K in normal:
        for s in range(0, S4.order, 5):
            r = compare_operators(S4, J, K, s)
            assert r["condition_holds"] and r["operators_equal"]


@pytest.mark.parametrize("G,size", [(GL23, 3), (S4, 4)])
def test_j_equals_k_counterexample(G, size):
    K, s = find_instances(G, size)[0]
    assert len(G.double_coset(K, s, K)) // len(K) == size
    S = SchwartzSpace(G, K, K)
    one = S.ch(G.identity)
    assert ind(op_T(s, one)) == size * size
    assert ind(op_cov(s, one)) == size
    assert op_T(s, one) != op_cov(s, one)
    assert convolution(one, S.ch(s)) == op_cov(s, one)


@pytest.mark.parametrize("G", [S3, S4, GL23], ids=["S3", "S4", "GL2(F3)"])
def test_covariant_operator_is_the_functorial_one(G):
    rng = random.Random(1)
    subs = G.subgroups()
    for _ in range(15):
        J, K, s = rng.choice(subs), rng.choice(subs), rng.randrange(G.order)
        S = SchwartzSpace(G, J, K)
        for b in S.basis():
            assert op_cov(s, b) == op_cov_functorial(s, b)


def test_ind_is_multiplicative():
    rng = random.Random(3)
    for _ in range(50):
        K = rng.choice(GL23.subgroups())
        S = SchwartzSpace(GL23, K, K)
        f, h = random_function(S, rng), random_function(S, rng)
        assert ind(convolution(f, h)) == ind(f) * ind(h)


def test_ind_requires_j_equals_k():
    K = S3.generate([S3.elem((1, 0, 2))])
    S = SchwartzSpace(S3, frozenset([S3.identity]), K)
    with pytest.raises(ValueError):
        ind(S.ch(0))


@pytest.mark.parametrize("G", [S3, S4, GL23], ids=["S3", "S4", "GL2(F3)"])
def test_enumeration_identity(G):
    rng = random.Random(9)
    for _ in range(30):
        assert enumeration_identity(G, rng.choice(G.subgroups()), rng.randrange(G.order))


def test_from_values_rejects_non_invariant():
    K = S3.generate([S3.elem((1, 0, 2))])
    S = SchwartzSpace(S3, K, K)
    bad = [0] * S3.order
    bad[S3.elem((0, 2, 1))] = 1
    with pytest.raises(ValueError):
        S.from_values(bad)


def test_function_arithmetic():
    K = S3.generate([S3.elem((1, 0, 2))])
    S = SchwartzSpace(S3, K, K)
    a, b = S.basis()[:2]
    assert (a + b).to_vector() == tuple(x + y for x, y in zip(a.to_vector(), b.to_vector()))
    assert (a + a.scale(-1)).items() == []
    assert S.from_values(a.to_vector()) == a
