import random

import pytest

from freelap.conjugacy import (
    MODE_GENERAL,
    MODE_NO_CANCEL,
    CertificationSweep,
    ConjugacyProblem,
    SolutionReport,
    count_solutions_per_length,
    general_split_decompositions,
    solve_brute,
    solve_structural,
)
from freelap.words import Word, enumerate_words, parse_word


def W(text, rank=2):
    return parse_word(text, rank)


def texts(report):
    return [w.text() for w in report.solutions]


# -- worked examples ------------------------------------------------------------

def test_no_cancel_suffix_prefix_example():
    p = ConjugacyProblem(W("2,1"), W("1,2"), 1, MODE_NO_CANCEL)
    assert texts(solve_structural(p)) == ["1"]
    assert texts(solve_brute(p)) == ["1"]


def test_no_cancel_power_example():
    p = ConjugacyProblem(W("1"), W("1"), 3, MODE_NO_CANCEL)
    assert texts(solve_structural(p)) == ["1,1,1"]


def test_no_cancel_no_solution():
    p = ConjugacyProblem(W("1"), W("2"), 5, MODE_NO_CANCEL)
    assert texts(solve_brute(p)) == []
    assert texts(solve_structural(p)) == []


def test_counts_per_length_examples():
    assert count_solutions_per_length(W("1"), W("1"), 5, MODE_NO_CANCEL) \
        == [1, 1, 1, 1, 1]
    assert count_solutions_per_length(W("1"), W("2"), 5, MODE_GENERAL) \
        == [0, 0, 0, 0, 0]


def test_general_power_instance_contains_square():
    p = ConjugacyProblem(W("1,2"), W("1,2"), 4, MODE_GENERAL)
    rep = solve_brute(p)
    assert "1,2,1,2" in texts(rep)
    # substitution check on everything reported
    for x in rep.solutions:
        assert (x * p.a) == (p.b * x)


def test_general_mode_two_solutions_documented():
    # xa = bx is a conjugation equation; for a = b the solutions form the
    # centralizer, which meets each length in two points (both signs of
    # the generating power), so uniqueness fails beyond |a|+|b|
    p = ConjugacyProblem(W("1"), W("1"), 3, MODE_GENERAL)
    brute = solve_brute(p)
    structural = solve_structural(p)
    assert sorted(texts(brute)) == sorted(["1,1,1", "-1,-1,-1"])
    assert structural.solutions == brute.solutions
    # same phenomenon with a conjugate pair and nontrivial conjugator
    p = ConjugacyProblem(W("1"), W("2,1,-2"), 5, MODE_GENERAL)
    assert len(solve_brute(p).solutions) == 2


def test_regime_labels():
    assert ConjugacyProblem(W("1"), W("1"), 1, MODE_NO_CANCEL).regime() \
        == "guaranteed-unique"
    assert ConjugacyProblem(W("1"), W("1"), 3, MODE_GENERAL).regime() \
        == "guaranteed-unique"
    assert ConjugacyProblem(W("1"), W("1"), 2, MODE_GENERAL).regime() \
        == "unconstrained"


def test_solution_report_json_shape():
    p = ConjugacyProblem(W("2,1"), W("1,2"), 1, MODE_NO_CANCEL)
    data = solve_structural(p).to_json_dict()
    assert data == {
        "a": "2,1", "b": "1,2", "l": 1, "mode": "no-cancel",
        "solutions": ["1"], "regime": "guaranteed-unique",
    }


# -- validation -------------------------------------------------------------------

def test_problem_validation():
    with pytest.raises(ValueError):
        ConjugacyProblem(W(""), W("1"), 1, MODE_NO_CANCEL)
    with pytest.raises(ValueError):
        ConjugacyProblem(W("1"), W("1"), 0, MODE_NO_CANCEL)
    with pytest.raises(ValueError):
        ConjugacyProblem(W("1"), W("1"), 1, "sideways")


# -- oracle agreement --------------------------------------------------------------

def test_structural_agrees_with_brute_exhaustively():
    words = [w for n in (1, 2) for w in enumerate_words(2, n)]
    for a in words:
        for b in words:
            for l in range(1, 6):
                for mode in (MODE_NO_CANCEL, MODE_GENERAL):
                    p = ConjugacyProblem(a, b, l, mode)
                    sb = solve_brute(p)
                    ss = solve_structural(p)
                    assert ss.solutions == sb.solutions, (a, b, l, mode)
                    for x in sb.solutions:
                        if mode == MODE_GENERAL:
                            assert (x * a) == (b * x)


def test_no_cancel_solutions_require_equal_lengths():
    words = [w for n in (1, 2, 3) for w in enumerate_words(2, n)]
    rng = random.Random(47)
    for _ in range(200):
        a, b = rng.choice(words), rng.choice(words)
        if len(a) == len(b):
            continue
        l = rng.randint(1, 5)
        p = ConjugacyProblem(a, b, l, MODE_NO_CANCEL)
        assert solve_brute(p).solutions == ()


def test_general_solutions_admit_balanced_split():
    instances = [
        (W("1"), W("2,1,-2"), 5),
        (W("1,2"), W("1,2"), 5),
        (W("2,1"), W("1,2"), 5),
    ]
    for a, b, l in instances:
        p = ConjugacyProblem(a, b, l, MODE_GENERAL)
        for x in solve_brute(p).solutions:
            assert general_split_decompositions(a, b, x), (a, b, x)


# -- certification sweep -------------------------------------------------------------

def test_sweep_matches_literal_brute():
    sweep = CertificationSweep(2, 2, 4)
    words = [w for n in (1, 2) for w in enumerate_words(2, n)]
    for a in words:
        for b in words:
            for l in range(1, 5):
                for mode in (MODE_NO_CANCEL, MODE_GENERAL):
                    p = ConjugacyProblem(a, b, l, mode)
                    got = sorted(sweep.solutions(a.letters, b.letters, l,
                                                 mode))
                    want = sorted(w.letters
                                  for w in solve_brute(p).solutions)
                    assert got == want, (a, b, l, mode)


def test_sweep_violation_scan():
    sweep = CertificationSweep(2, 1, 4)
    assert sweep.no_cancel_violations() == []
    gen = sweep.general_violations_beyond_bound()
    assert any(v.a.text() == "1" and v.b.text() == "1" and v.length == 3
               for v in gen)
    for v in gen:
        assert len(v.solutions) > 1
        assert v.length > len(v.a) + len(v.b)
