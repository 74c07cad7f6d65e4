"""Tests for tensor products and the page-wise product formula checks."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcx.engine import collapse_page, pages
from fcx.invariants import euler_number
from fcx.kunneth import kunneth_check, power_poincare_check, tensor_product
from fcx.model import (
    DifferentialEntry,
    FcxError,
    FloerComplexData,
    LiftedGenerator,
    MonotoneParams,
    SizeGuardError,
    validate,
)
from fcx.synth import NormalFormSpec, build_from_normal_form, random_complex

P4 = MonotoneParams(4, 0.5)
P4_ALG = MonotoneParams(4, 0.0)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
periods = st.sampled_from([3, 4, 6])


def complex_of(params, gens, delta=()):
    return FloerComplexData(
        params,
        tuple(LiftedGenerator(u, n) for u, n in gens),
        tuple(DifferentialEntry(s, t) for s, t in delta),
    )


DIPOLE = complex_of(P4_ALG, [("x", 0), ("y", 5)], [("x", "y")])
FREE_Z = complex_of(P4_ALG, [("z", 2)])


def test_tensor_of_two_free_generators():
    a = complex_of(P4_ALG, [("x", 2)])
    b = complex_of(P4_ALG, [("z", 3)])
    t = tensor_product(a, b)
    assert [(g.uid, g.degree) for g in t.complex.generators] == [("x*z", 5)]
    assert t.complex.delta == ()
    assert t.factor_ids == (("x*z", "x", "z"),)


def test_tensor_square_of_dipole_follows_leibniz():
    t = tensor_product(DIPOLE, DIPOLE).complex
    assert sorted(g.degree for g in t.generators) == [0, 5, 5, 10]
    arrows = {}
    for e in t.delta:
        arrows.setdefault(e.src, set()).add(e.dst)
    assert arrows == {
        "x*x": {"y*x", "x*y"},
        "x*y": {"y*y"},
        "y*x": {"y*y"},
    }
    assert validate(t).ok


def test_tensor_dipole_with_free_generator():
    t = tensor_product(DIPOLE, FREE_Z).complex
    assert {(g.uid, g.degree) for g in t.generators} == {("x*z", 2), ("y*z", 7)}
    assert [(e.src, e.dst) for e in t.delta] == [("x*z", "y*z")]


def test_tensor_drops_actions():
    a = FloerComplexData(P4, (LiftedGenerator("x", 0, 0.25),), ())
    t = tensor_product(a, a).complex
    assert all(g.action is None for g in t.generators)
    assert t.params.window_base == 0.0


def test_tensor_rejects_mismatched_parameters():
    other_period = complex_of(MonotoneParams(3, 0.0), [("z", 0)])
    with pytest.raises(FcxError, match="share the period"):
        tensor_product(DIPOLE, other_period)
    other_lambda = complex_of(MonotoneParams(4, 1.0), [("z", 0)])
    with pytest.raises(FcxError, match="monotonicity"):
        tensor_product(DIPOLE, other_lambda)


def test_kunneth_free_times_free_passes():
    a = complex_of(P4_ALG, [("x", 2)])
    report = kunneth_check(a, a)
    assert report.passed
    assert report.cells == ((1, 4, 0, 1, 1),)


def test_kunneth_dipole_squared():
    report = kunneth_check(DIPOLE, DIPOLE)
    assert report.passed
    assert report.max_page_checked == 2
    page1 = {(n, j): (got, want) for k, n, j, got, want in report.cells if k == 1}
    assert page1 == {(0, 0): (1, 1), (5, 1): (2, 2), (10, 2): (1, 1)}
    assert all(got == 0 for k, n, j, got, _ in report.cells if k == 2)


def test_kunneth_dipole_times_free():
    report = kunneth_check(DIPOLE, FREE_Z)
    assert report.passed
    page1 = {(n, j): got for k, n, j, got, _ in report.cells if k == 1}
    assert page1 == {(2, 2): 1, (7, 3): 1}


def test_kunneth_upto_caps_the_page_range():
    report = kunneth_check(DIPOLE, DIPOLE, upto=1)
    assert report.max_page_checked == 1


def test_power_of_free_generator():
    a = complex_of(P4_ALG, [("x", 2)])
    report = power_poincare_check(a, 3, 1)
    assert report.passed
    assert report.product_poly.as_dict() == {6: 1}


def test_power_of_dipole_page_one_and_two():
    r1 = power_poincare_check(DIPOLE, 2, 1)
    assert r1.passed
    assert r1.product_poly.as_dict() == {0: 1, 5: 2, 10: 1}
    r2 = power_poincare_check(DIPOLE, 2, 2)
    assert r2.passed
    assert r2.product_poly.is_zero and r2.factor_poly_power.is_zero


def test_power_guards():
    with pytest.raises(SizeGuardError):
        power_poincare_check(DIPOLE, 5, 1)
    with pytest.raises(FcxError, match="at least 2"):
        power_poincare_check(DIPOLE, 1, 1)
    with pytest.raises(FcxError, match="indexed from 1"):
        power_poincare_check(DIPOLE, 2, 0)
    big = build_from_normal_form(
        NormalFormSpec(P4_ALG, free=tuple(range(-16, 17)))
    )
    assert big.count == 33
    with pytest.raises(SizeGuardError):
        power_poincare_check(big, 2, 1)


@given(seeds, seeds, periods)
@settings(max_examples=25, deadline=None)
def test_kunneth_passes_on_random_pairs(seed_a, seed_b, period):
    params = MonotoneParams(period, 0.5)
    a, _ = random_complex(seed_a, params, max_gens=6)
    b, _ = random_complex(seed_b, params, max_gens=6)
    report = kunneth_check(a, b)
    assert report.passed


@given(seeds, seeds, periods)
@settings(max_examples=25, deadline=None)
def test_product_collapse_is_max_when_both_limits_survive(seed_a, seed_b, period):
    # a factor with zero stable page annihilates every page of the product,
    # so the max rule needs both limits nonzero; one free generator per
    # factor guarantees that
    params = MonotoneParams(period, 0.5)
    _, spec_a = random_complex(seed_a, params, max_gens=6, max_jump=3)
    _, spec_b = random_complex(seed_b, params, max_gens=6, max_jump=3)
    a = build_from_normal_form(
        NormalFormSpec(params, spec_a.free + (0,), spec_a.dipoles)
    )
    b = build_from_normal_form(
        NormalFormSpec(params, spec_b.free + (0,), spec_b.dipoles)
    )
    product = tensor_product(a, b).complex
    assert collapse_page(product) == max(collapse_page(a), collapse_page(b))


def test_product_collapse_can_drop_below_max_for_acyclic_factors():
    killed = build_from_normal_form(NormalFormSpec(P4_ALG, dipoles=((0, 0),)))
    slow = build_from_normal_form(NormalFormSpec(P4_ALG, dipoles=((0, 2),)))
    assert collapse_page(killed) == 1
    assert collapse_page(slow) == 3
    product = tensor_product(killed, slow).complex
    # the degree-graded cohomology of the product is already zero, so the
    # product collapses immediately despite the slow factor
    assert collapse_page(product) == 1
    assert kunneth_check(killed, slow).passed


@given(seeds, seeds, st.sampled_from([4, 6]))
@settings(max_examples=20, deadline=None)
def test_euler_multiplicativity_for_even_periods(seed_a, seed_b, period):
    params = MonotoneParams(period, 0.5)
    a, _ = random_complex(seed_a, params, max_gens=6)
    b, _ = random_complex(seed_b, params, max_gens=6)
    product = tensor_product(a, b).complex
    ta, tb, tp = pages(a), pages(b), pages(product)
    for k in (1, tp.collapse_page):
        chi_a = euler_number(ta, min(k, ta.collapse_page)).chi
        chi_b = euler_number(tb, min(k, tb.collapse_page)).chi
        chi_p = euler_number(tp, min(k, tp.collapse_page)).chi
        assert chi_p == chi_a * chi_b
