"""Unit tests for the complex data model, validation, and base cohomologies."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcx.model import (
    DifferentialEntry,
    FloerComplexData,
    InvalidComplexError,
    LiftedGenerator,
    MonotoneParams,
    degree_decompose,
    periodic_cohomology,
    require_valid,
    validate,
    z_graded_cohomology,
)
from fcx.synth import NormalFormSpec, build_from_normal_form, random_complex

P4 = MonotoneParams(maslov_period=4, monotonicity=0.5)
P4_ALG = MonotoneParams(maslov_period=4, monotonicity=0.0)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
periods = st.sampled_from([3, 4, 6])


def complex_of(params, gens, delta=()):
    """Build a complex from (uid, degree[, action]) tuples and (src, dst) pairs."""
    lifted = tuple(
        LiftedGenerator(g[0], g[1], g[2] if len(g) > 2 else None) for g in gens
    )
    return FloerComplexData(
        params, lifted, tuple(DifferentialEntry(s, t) for s, t in delta)
    )


def test_params_derived_quantities():
    assert P4.action_period == 2.0
    assert P4.action_tolerance == pytest.approx(2e-9)
    assert P4.residue(5) == 1
    assert P4.residue(-1) == 3
    assert P4.residue(8) == 0
    # tolerance floor: small action periods still get the absolute floor
    tiny = MonotoneParams(3, 0.1)
    assert tiny.action_tolerance == pytest.approx(1e-9)


def test_canonical_ordering_of_generators_and_delta():
    c = complex_of(
        P4_ALG,
        [("b", 5), ("a", 5), ("z", 0)],
        [("z", "b"), ("a", "b")],
    )
    assert [g.uid for g in c.generators] == ["z", "a", "b"]
    assert [(e.src, e.dst) for e in c.delta] == [("a", "b"), ("z", "b")]
    assert c.index_of("z") == 0 and c.degree_of("b") == 5


def test_validate_minimal_dipole_is_valid():
    c = complex_of(P4_ALG, [("x", 0), ("y", 1)], [("x", "y")])
    report = validate(c)
    assert report.ok and not report.warnings


def test_validate_rejects_jump_not_of_required_form():
    c = complex_of(P4_ALG, [("x", 0), ("y", 2)], [("x", "y")])
    report = validate(c)
    assert not report.ok
    assert any("x -> y" in e and "jump 2" in e for e in report.errors)


def test_validate_rejects_nonpositive_degree_jump():
    c = complex_of(P4_ALG, [("x", 5), ("y", 0)], [("x", "y")])
    report = validate(c)
    assert any("jump -5" in e for e in report.errors)


def test_validate_accepts_consistent_action_linkage():
    # odd jump index: the in-window action difference is period - monotonicity
    params = MonotoneParams(4, 0.5, window_base=0.75)
    c = complex_of(params, [("x", 0, 1.0), ("y", 5, 2.5)], [("x", "y")])
    assert validate(c).ok


def test_validate_rejects_inconsistent_action_linkage():
    c = complex_of(P4, [("x", 0, 0.25), ("y", 5, 0.75)], [("x", "y")])
    report = validate(c)
    assert any("inconsistent with jump index 1" in e for e in report.errors)


def test_validate_even_jump_action_linkage():
    # jump index 0: difference must be exactly -monotonicity
    ok = complex_of(P4, [("x", 0, 1.0), ("y", 1, 0.5)], [("x", "y")])
    assert validate(ok).ok
    bad = complex_of(P4, [("x", 0, 1.0), ("y", 1, 1.5)], [("x", "y")])
    assert any("inconsistent with jump index 0" in e for e in validate(bad).errors)


def test_validate_small_period_needs_override():
    small = MonotoneParams(2, 0.0)
    c = complex_of(small, [("x", 0)])
    report = validate(c)
    assert any("below 3" in e for e in report.errors)

    allowed = MonotoneParams(2, 0.0, allow_small_period=True)
    c2 = complex_of(allowed, [("x", 0)])
    report2 = validate(c2)
    assert report2.ok
    assert any("below 3" in w for w in report2.warnings)


def test_validate_rejects_nonpositive_period():
    c = complex_of(MonotoneParams(0, 0.0), [("x", 0)])
    assert any("positive integer" in e for e in validate(c).errors)


def test_validate_rejects_negative_monotonicity():
    c = complex_of(MonotoneParams(4, -0.5), [("x", 0)])
    assert any("nonnegative" in e for e in validate(c).errors)


def test_validate_rejects_duplicate_ids():
    c = complex_of(P4_ALG, [("x", 0), ("x", 1)])
    assert any("duplicate generator id 'x'" in e for e in validate(c).errors)


def test_validate_rejects_actions_in_algebraic_mode():
    c = complex_of(P4_ALG, [("x", 0, 0.5)])
    assert any("algebraic mode" in e for e in validate(c).errors)


def test_validate_rejects_action_outside_window():
    c = complex_of(P4, [("x", 0, 2.5)])
    assert any("outside the open window" in e for e in validate(c).errors)
    # the window is open: the endpoints themselves are rejected
    at_base = complex_of(P4, [("x", 0, 0.0)])
    assert any("outside the open window" in e for e in validate(at_base).errors)
    at_top = complex_of(P4, [("x", 0, 2.0)])
    assert any("outside the open window" in e for e in validate(at_top).errors)


def test_validate_rejects_unknown_references():
    c = complex_of(P4_ALG, [("x", 0)], [("x", "ghost")])
    assert any("unknown target 'ghost'" in e for e in validate(c).errors)
    c2 = complex_of(P4_ALG, [("y", 1)], [("ghost", "y")])
    assert any("unknown source 'ghost'" in e for e in validate(c2).errors)


def test_validate_rejects_duplicate_entries():
    c = FloerComplexData(
        P4_ALG,
        (LiftedGenerator("x", 0), LiftedGenerator("y", 1)),
        (DifferentialEntry("x", "y"), DifferentialEntry("x", "y")),
    )
    assert any("duplicate differential entry" in e for e in validate(c).errors)


def test_validate_rejects_nonzero_delta_square():
    c = complex_of(
        P4_ALG,
        [("a", 0), ("b", 1), ("c", 2)],
        [("a", "b"), ("b", "c")],
    )
    report = validate(c)
    assert any("does not square to zero" in e and "'a'" in e for e in report.errors)


def test_delta_square_zero_by_cancellation_is_accepted():
    # two paths a -> c cancel mod 2
    c = complex_of(
        P4_ALG,
        [("a", 0), ("b1", 1), ("b2", 1), ("c", 2)],
        [("a", "b1"), ("a", "b2"), ("b1", "c"), ("b2", "c")],
    )
    assert validate(c).ok


def test_require_valid_raises_with_report():
    c = complex_of(P4_ALG, [("x", 0), ("y", 2)], [("x", "y")])
    with pytest.raises(InvalidComplexError) as exc:
        require_valid(c)
    assert not exc.value.report.ok


def test_jump_index_of_entries():
    c = complex_of(P4_ALG, [("x", 0), ("y", 5)], [("x", "y")])
    assert c.jump_index(c.delta[0]) == 1


def test_z_graded_single_free_generator():
    c = complex_of(P4_ALG, [("x", 2)])
    table = z_graded_cohomology(c)
    assert table.as_dict() == {2: 1}
    assert table.kind == "z_graded"
    assert table.total_dim == 1


def test_z_graded_acyclic_dipole():
    c = complex_of(P4_ALG, [("x", 0), ("y", 1)], [("x", "y")])
    assert z_graded_cohomology(c).as_dict() == {}


def test_z_graded_ignores_higher_jump_entries():
    c = complex_of(P4_ALG, [("x", 0), ("y", 5)], [("x", "y")])
    table = z_graded_cohomology(c)
    assert table.as_dict() == {0: 1, 5: 1}
    reps = dict(table.representatives)
    assert reps[0] == (1 << c.index_of("x"),)
    assert reps[5] == (1 << c.index_of("y"),)


def test_periodic_single_free_generator():
    c = complex_of(P4_ALG, [("x", 2)])
    assert periodic_cohomology(c).as_dict() == {2: 1}


def test_periodic_sees_higher_jump_entries():
    c = complex_of(P4_ALG, [("x", 0), ("y", 5)], [("x", "y")])
    assert periodic_cohomology(c).as_dict() == {}


def test_periodic_survivor_in_three_generator_complex():
    c = complex_of(P4_ALG, [("x", 0), ("xp", 4), ("y", 5)], [("x", "y")])
    table = periodic_cohomology(c)
    assert table.as_dict() == {0: 1}
    # the surviving class is representable by the generator untouched by delta
    (rep,) = dict(table.representatives)[0]
    assert rep in (1 << c.index_of("xp"), (1 << c.index_of("xp")) ^ (1 << c.index_of("x")))


def test_degree_decompose_examples():
    dip0 = complex_of(P4_ALG, [("x", 0), ("y", 1)], [("x", "y")])
    parts = degree_decompose(dip0)
    assert set(parts) == {0}
    assert parts[0].entry(dip0.index_of("y"), dip0.index_of("x")) == 1
    assert parts[0].rank() == 1

    dip1 = complex_of(P4_ALG, [("x", 0), ("y", 5)], [("x", "y")])
    parts1 = degree_decompose(dip1)
    assert set(parts1) == {1}
    assert parts1[1].rank() == 1

    mixed = complex_of(
        P4_ALG,
        [("a", 0), ("b", 1), ("u", 2), ("v", 11)],
        [("a", "b"), ("u", "v")],
    )
    assert set(degree_decompose(mixed)) == {0, 2}


def test_degree_decompose_parts_sum_to_delta():
    c, _ = random_complex(7, MonotoneParams(4, 0.5))
    parts = degree_decompose(c)
    cols = c.delta_columns()
    summed = [0] * c.count
    for mat in parts.values():
        for j in range(c.count):
            summed[j] ^= mat.column(j)
    assert summed == cols


@given(seeds, periods)
@settings(max_examples=40, deadline=None)
def test_z_graded_dominates_periodic(seed, period):
    c, _ = random_complex(seed, MonotoneParams(period, 0.5))
    z = z_graded_cohomology(c)
    hf = periodic_cohomology(c)
    assert z.total_dim >= hf.total_dim


@given(seeds, periods)
@settings(max_examples=40, deadline=None)
def test_euler_count_matches_generators(seed, period):
    c, _ = random_complex(seed, MonotoneParams(period, 0.5))
    z = z_graded_cohomology(c)
    from_gens = sum((-1) ** g.degree for g in c.generators)
    from_cohomology = sum((-1) ** n * d for n, d in z.dims)
    assert from_gens == from_cohomology


@given(seeds, periods)
@settings(max_examples=40, deadline=None)
def test_periodic_total_matches_rank_count(seed, period):
    c, _ = random_complex(seed, MonotoneParams(period, 0.5))
    from fcx.gf2 import Gf2Subspace

    rank = Gf2Subspace.from_vectors(c.count, c.delta_columns()).dim
    assert periodic_cohomology(c).total_dim == c.count - 2 * rank


@given(seeds, periods, st.integers(min_value=1, max_value=6))
@settings(max_examples=30, deadline=None)
def test_periodic_of_delta_free_complex_counts_generators(seed, period, n_free):
    import random as _random

    rng = _random.Random(seed)
    params = MonotoneParams(period, 0.5)
    free = tuple(rng.randint(-6, 6) for _ in range(n_free))
    c = build_from_normal_form(NormalFormSpec(params, free=free))
    expected: dict[int, int] = {}
    for n in free:
        expected[n % period] = expected.get(n % period, 0) + 1
    assert periodic_cohomology(c).as_dict() == expected


def test_validation_report_is_cached_per_object():
    c = complex_of(P4_ALG, [("x", 0), ("y", 1)], [("x", "y")])
    assert validate(c) is validate(c)
