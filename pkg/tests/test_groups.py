import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hecke_descent.groups import (
    GL1GL4,
    GSP4,
    GroupModel,
    brute_force_order_f_ell,
    build_scenario,
    closure_order,
    elem_inv,
    elem_mul,
    exact_to_elem,
    expected_order,
    expected_u_order,
    gamma_ell,
    membership,
    unit_generators,
    xi_generator,
    xi_norm,
)
from hecke_descent.ladic import ExactMatrix, integrality, mat_mul


def test_unit_generators_generate():
    for ell, m in [(2, 1), (2, 2), (2, 4), (3, 3), (5, 2), (7, 1)]:
        mod = ell ** m
        gens = unit_generators(ell, m)
        seen, frontier = {1 % mod}, [1 % mod]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = x * g % mod
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        assert len(seen) == (ell - 1) * ell ** (m - 1)


@pytest.mark.parametrize("kind", [GSP4, GL1GL4])
def test_generators_are_members(kind):
    for ell in (2, 3):
        model = GroupModel(kind, ell)
        mod = ell ** 3
        assert all(model.mod_member_k(g, mod) for g in model.k_generators(3))
        assert all(model.mod_member_u(g, mod) for g in model.u_generators(3))


def test_orders_over_f2_by_brute_force():
    # frozen after listing every 4x4 matrix over F_2
    model = GroupModel(GSP4, 2)
    assert brute_force_order_f_ell(model, "K") == 720
    assert brute_force_order_f_ell(model, "U") == 36


def test_closure_orders_match_formulas():
    model = GroupModel(GSP4, 2)
    assert closure_order(model, model.k_generators(1), 1) == 720
    assert closure_order(model, model.k_generators(2), 2) == expected_order(GSP4, 2, 2) == 720 * 2 ** 11
    assert closure_order(model, model.u_generators(2), 2) == expected_u_order(GSP4, 2, 2)
    gu = GroupModel(GL1GL4, 2)
    assert closure_order(gu, gu.k_generators(2), 2) == expected_order(GL1GL4, 2, 2) == 2 * 20160 * 2 ** 16
    assert closure_order(gu, gu.u_generators(2), 2) == expected_u_order(GL1GL4, 2, 2)


def test_closure_order_odd_prime_reduction():
    model = GroupModel(GSP4, 3)
    assert closure_order(model, model.k_generators(1), 1) == expected_order(GSP4, 3, 1)


def _random_word(model, gens, rng, mod, length=10):
    e = gens[0]
    for _ in range(length):
        e = elem_mul(e, rng.choice(gens), mod)
    return e


@given(st.integers(0, 10 ** 6), st.sampled_from([GSP4, GL1GL4]), st.sampled_from([2, 3, 5]))
def test_nu_is_multiplicative(seed, kind, ell):
    rng = random.Random(seed)
    model = GroupModel(kind, ell)
    m = 3
    mod = ell ** m
    gens = model.u_generators(m)
    a = _random_word(model, gens, rng, mod)
    b = _random_word(model, gens, rng, mod)
    ab = model.nu(elem_mul(a, b, mod), mod)
    na, nb = model.nu(a, mod), model.nu(b, mod)
    assert ab == tuple(x * y % mod for x, y in zip(na, nb))
    inv = model.nu(elem_inv(a, mod), mod)
    assert all(x * y % mod == 1 for x, y in zip(na, inv))


def test_gamma_ell_integrality():
    ok2, _ = integrality(gamma_ell(2))
    ok3, val3 = integrality(gamma_ell(3))
    assert ok2 is True
    assert ok3 is False and val3 == -1
    entries = {x for r in gamma_ell(3).to_fractions() for x in r if x.denominator != 1}
    assert entries == {Fraction(2, 3), Fraction(-2, 3)}


def test_gamma_ell_lies_in_k_for_two():
    g = gamma_ell(2)
    model = GroupModel(GSP4, 2)
    assert membership(model, g, "K")
    assert model.mod_member_k(exact_to_elem(model, g, 3), 8)


@pytest.mark.parametrize("d,ell,m", [(1, 5, 1), (1, 5, 2), (3, 7, 1)])
def test_xi_units(d, ell, m):
    verdicts = set()
    for precision in range(1, 7):
        xi, inv = xi_generator(d, m, ell, precision)
        assert xi_norm(xi, d) == 1
        verdicts.add(inv)
    assert len(verdicts) == 1


def test_xi_rejects_bad_prime():
    with pytest.raises(ValueError):
        xi_generator(1, 1, 2, 3)
    with pytest.raises(ValueError):
        xi_generator(3, 1, 3, 3)


def test_build_scenario_validation():
    with pytest.raises(ValueError):
        build_scenario("gsp4", 4, 3)
    with pytest.raises(ValueError):
        build_scenario("gu22", 3, 3, d=1)  # inert
    with pytest.raises(ValueError):
        build_scenario("gu22", 5, 3, d=5)
    with pytest.raises(ValueError):
        build_scenario("nope", 5, 3)


def test_scenario_matrices_lie_in_the_group():
    sc = build_scenario("gsp4", 3, 4)
    model = sc.model
    assert model.in_g(sc.sigma) and model.in_g(mat_mul(sc.sigma, sc.tau))
    assert model.similitude(sc.sigma) == 3
    assert model.in_h(sc.sigma) and not model.in_h(mat_mul(sc.sigma, sc.tau))
    gu = build_scenario("gu22", 5, 4)
    assert gu.params["xi_ell_invertible"] is True
    assert all(gu.model.in_g(m) for m in gu.printed_reps.values())


def test_w_xi_is_block_scalar():
    sc = build_scenario("gu22", 5, 3)
    w = sc.w.to_fractions()
    assert w[0][0] == w[1][1] == 1 and w[2][2] == w[3][3]
    assert int(w[2][2]) % 5 == 1


def test_identity_is_in_k_and_u():
    model = GroupModel(GSP4, 5)
    eye = ExactMatrix.identity(4, 5)
    assert membership(model, eye, "K") and membership(model, eye, "U")
