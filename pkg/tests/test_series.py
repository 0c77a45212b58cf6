from fractions import Fraction

import pytest

from freelap.algebra import parse_tensor, simple_tensor
from freelap.radial import RadialCoeffs, radial_norm_squared
from freelap.series import (
    cancellation_table,
    interaction_horizon,
    radial_pair_product,
    rows_to_csv,
    rows_to_json,
    series_partial_sums,
    series_term,
    short_factor_report,
    term_bound,
    verify_depth_invariance,
    verify_table_reconstruction,
)
from freelap.words import parse_word

F = Fraction


def W(text, rank=2):
    return parse_word(text, rank)


def T(text, rank=2):
    return parse_tensor(text, rank)


# values frozen from an independent enumeration oracle (raw-string
# filtering plus full-scan reduction, no shared code with the package)
ORACLE_TABLE = {
    (0, 0): 61, (0, 1): 13, (0, 2): 7,
    (1, 0): 13, (1, 1): 4, (1, 2): 1,
    (2, 0): 7, (2, 1): 1, (2, 2): 1,
}
ORACLE_PROJ_NORM = F(47713, 8748)
ORACLE_MIXED_NORM = F(961, 192)
ORACLE_CROSS = F(247, 48)
ORACLE_DIFF_NORM = F(23473, 139968)


# -- cancellation tables --------------------------------------------------------

def test_table_matches_oracle():
    t = cancellation_table(W("1,1"), W("2,2"), 4)
    assert t.counts == ORACLE_TABLE
    assert t.total() == 108


def test_table_partitions_sphere():
    t = cancellation_table(W("1,2"), W("2,1"), 5)
    assert t.total() == radial_norm_squared(2, 5)
    assert all(r <= 2 and s <= 2 for (r, s) in t.counts)


def test_table_preconditions():
    with pytest.raises(ValueError):
        cancellation_table(W("1,1"), W("2,2"), 3)  # n < |x|+|y|
    with pytest.raises(ValueError):
        cancellation_table(W(""), W("2"), 4)


def test_table_reconstruction_matches_expectation():
    t = cancellation_table(W("1,1"), W("2,2"), 4)
    assert verify_table_reconstruction(t, 1)
    assert verify_table_reconstruction(t, 2)
    t2 = cancellation_table(W("1,2"), W("2,-1"), 5)
    assert verify_table_reconstruction(t2, 3)


# -- products of two basis elements ----------------------------------------------

def test_pair_product_is_radial_and_depth_independent():
    for depth in (1, 2):
        rc = radial_pair_product(2, depth, 2, 2)
        got = {j: c for j, c in enumerate(rc.coeffs) if c}
        assert got == {0: F(12), 2: F(2), 4: F(1)}


# -- depth invariance -------------------------------------------------------------

def test_depth_invariance_frozen_instance():
    rep = verify_depth_invariance(W("1,1"), W("2,2"), 2, 4)
    assert rep.at_one.proj_norm == ORACLE_PROJ_NORM
    assert rep.at_one.mixed_norm == ORACLE_MIXED_NORM
    assert rep.at_one.cross == ORACLE_CROSS
    assert rep.at_one.diff_norm == ORACLE_DIFF_NORM
    assert rep.holds


def test_depth_invariance_other_instance():
    rep = verify_depth_invariance(W("1,2"), W("2,1"), 3, 5)
    assert rep.holds


def test_depth_one_sides_identical():
    rep = verify_depth_invariance(W("1,1"), W("2,2"), 1, 4)
    assert rep.at_depth == rep.at_one
    assert rep.holds


def test_depth_invariance_preconditions():
    with pytest.raises(ValueError):
        verify_depth_invariance(W("1"), W("2,2"), 2, 4)
    with pytest.raises(ValueError):
        verify_depth_invariance(W("1,1"), W("2,2"), 2, 3)


# -- series terms -------------------------------------------------------------------

def test_series_term_single_factor_matches_defect_norm():
    row = series_term(T("1,1"), T("2,2"), 4)
    assert row.term == ORACLE_DIFF_NORM / radial_norm_squared(2, 4)
    assert row.term == F(23473, 15116544)


def test_series_term_split_radius_zero():
    row = series_term(T("1;2"), T("2;1"), 0)
    assert row.term == 0
    assert row.solution_count == 0
    assert row.cross_check_ok is True


def test_series_term_census_counts_sphere_for_equal_entries():
    row = series_term(T("1;1"), T("2;2"), 2)
    assert row.solution_count == radial_norm_squared(2, 2)


def test_series_term_shape_checks():
    with pytest.raises(Exception):
        series_term(T("1;2"), T("1"), 1)


# -- partial sums and the decay certificate -----------------------------------------

def test_partial_sums_on_interleaved_instance():
    xs, ys = T("-2;1,1"), T("1,1;-2")
    rep = series_partial_sums(xs, ys, 8)
    assert rep.horizon == 4
    assert rep.split_case and rep.pattern_consistent
    assert [r.solution_count for r in rep.rows] == [0, 1, 1, 0, 1, 1, 0, 1, 1]
    assert rep.unique_beyond_horizon
    assert rep.partial_bound_ok
    sums = [r.partial_sum for r in rep.rows]
    assert all(sums[i] <= sums[i + 1] for i in range(len(sums) - 1))
    for row in rep.rows:
        if row.term_bound is not None:
            assert row.term <= row.term_bound
        if row.cross_check_ok is not None:
            assert row.cross_check_ok
    assert rep.tail_bound_beyond == term_bound(2, 9, 4) * F(9, 8)


def test_partial_sums_flag_census_violations():
    # conjugate pair with symmetric coset lengths: two solutions per
    # radius beyond the horizon, which the report must flag
    xs, ys = T("1;-1"), T("-1;1")
    rep = series_partial_sums(xs, ys, 6)
    assert rep.split_case
    assert rep.bound_violations != ()
    assert not rep.unique_beyond_horizon
    assert max(r.solution_count for r in rep.rows) == 2


def test_partial_sums_all_equal_case_has_no_certificate():
    rep = series_partial_sums(T("1"), T("1"), 3)
    assert not rep.split_case
    assert rep.partial_bound_ok is None
    assert rep.rows[1].term == F(5, 128)  # frozen from the oracle


def test_horizon_definition():
    assert interaction_horizon(T("1;1,1"), T("2,2;1")) == 4


def test_identity_tensors_single_zero_row():
    rep = series_partial_sums(T(";"), T(";"), 0)
    assert len(rep.rows) == 1
    assert rep.rows[0].term == 0
    assert not rep.split_case


# -- short-left-factor report ---------------------------------------------------------

def test_short_factor_terms_frozen_values():
    rep = short_factor_report(W("1"), W("1"), 1, range(0, 3))
    terms = [r.term_direct for r in rep.rows]
    assert terms == [F(13, 192), F(5, 128), F(145, 20736)]
    assert rep.internally_consistent
    assert not rep.all_vanish
    for row in rep.rows:
        assert row.dropped_x_value == 0
        assert not row.equals_dropped


def test_short_factor_terms_depth_independent():
    for depth in (1, 2, 3):
        rep = short_factor_report(W("1"), W("1"), depth, [1])
        assert rep.rows[0].term_direct == F(5, 128)


def test_short_factor_requires_length_one():
    with pytest.raises(ValueError):
        short_factor_report(W("1,2"), W("1"), 1, [0])


# -- emitters ---------------------------------------------------------------------------

def test_csv_and_json_rows():
    rep = series_partial_sums(T("-2;1,1"), T("1,1;-2"), 2)
    csv_text = rows_to_csv(rep.rows)
    lines = csv_text.splitlines()
    assert lines[0] == "n,term,term_float,solution_count,partial_sum"
    assert lines[1] == "0,0,0,0,0"
    assert lines[2].startswith("1,1/48,0.0208333333333333")
    import json
    data = json.loads(rows_to_json(rep.rows))
    assert data[1] == {
        "n": 1, "term": "1/48", "term_float": "0.0208333333333333",
        "solution_count": 1, "partial_sum": "1/48",
    }


def test_emitters_are_deterministic():
    rep1 = series_partial_sums(T("1;2"), T("1;2"), 4)
    rep2 = series_partial_sums(T("1;2"), T("1;2"), 4)
    assert rows_to_csv(rep1.rows) == rows_to_csv(rep2.rows)
    assert rows_to_json(rep1.rows) == rows_to_json(rep2.rows)
