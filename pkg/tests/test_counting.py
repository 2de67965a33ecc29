"""Counting, minimal forbidden words, growth rates, families, exhaustion."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordavoid import (AvoidanceSpec, FactorAutomaton, build_automaton,
                       count_avoiding, exhaust_max_length, growth_rate,
                       lower_bound_family, minimal_forbidden, satisfies_spec,
                       word_from_text, word_to_text)

from conftest import all_words, naive_count, naive_satisfies

G_TABLE = (1, 2, 4, 6, 10, 16, 24, 36, 52, 72, 90, 116, 142, 178, 220, 264,
           332, 414)
H_TABLE = (1, 2, 4, 8, 13, 22, 31, 46, 58, 78, 99, 124, 144, 176, 198, 234,
           262, 300, 351)


def test_count_tables_match_frozen_values(registry):
    assert count_avoiding(registry.dekking_binary, 17).counts == G_TABLE
    assert count_avoiding(registry.fs_binary, 18).counts == H_TABLE


def test_count_csv_layout(registry):
    csv = count_avoiding(registry.dekking_binary, 3).to_csv()
    assert csv == "n,count\n0,1\n1,2\n2,4\n3,6\n"


def test_count_workers_agree(registry):
    seq = count_avoiding(registry.fs_binary, 12)
    par = count_avoiding(registry.fs_binary, 12, workers=2)
    assert seq.counts == par.counts


@given(st.integers(0, 7))
@settings(max_examples=8, deadline=None)
def test_counts_match_naive_filter(n):
    spec = AvoidanceSpec(2, square_min_root=2)
    assert count_avoiding(spec, n).counts[n] == naive_count(spec, n)


def test_counts_match_naive_on_registry_specs(registry):
    for name in ("dekking_binary", "fs_binary", "ejs2"):
        spec = getattr(registry, name)
        table = count_avoiding(spec, 8)
        for n in range(9):
            assert table.counts[n] == naive_count(spec, n), (name, n)


# ---------------------------------------------------------------------------
# Minimal forbidden words.

def test_minimal_forbidden_binary_runs():
    spec = AvoidanceSpec(2, (word_from_text("000"), word_from_text("111")))
    derived = minimal_forbidden(spec, 4)
    assert derived.words == {word_from_text("000"), word_from_text("111")}


def test_minimal_forbidden_definition_holds(registry):
    derived = minimal_forbidden(registry.dekking_binary, 12)
    for word in derived.words:
        assert not satisfies_spec(word, registry.dekking_binary).ok
        assert satisfies_spec(word[1:], registry.dekking_binary).ok
        assert satisfies_spec(word[:-1], registry.dekking_binary).ok


def test_minimal_forbidden_sizes_and_members(registry):
    dek = minimal_forbidden(registry.dekking_binary, 20)
    assert len(dek.words) == 90
    assert word_from_text("000") in dek.words
    assert word_from_text("11011001001101100100") in dek.words
    fs = minimal_forbidden(registry.fs_binary, 20)
    assert len(fs.words) == 65
    assert word_from_text("0000") in fs.words
    assert word_from_text("1010") in fs.words
    assert word_from_text("1110001011100010") in fs.words


def test_minimal_forbidden_lines_are_sorted(registry):
    lines = minimal_forbidden(registry.fs_binary, 8).to_lines().splitlines()
    assert lines == sorted(lines, key=lambda t: (len(t), t))


# ---------------------------------------------------------------------------
# Factor automaton and growth rates.

def test_automaton_counts_equal_dfs_counts(registry):
    for spec, n_max in ((registry.dekking_binary, 14),
                        (registry.fs_binary, 14)):
        derived = minimal_forbidden(spec, 20)
        auto = build_automaton(derived)
        table = count_avoiding(spec, n_max)
        counted = auto.count_words(n_max)
        # equal while the forbidden list is long enough to be exact
        assert counted[:n_max + 1] == table.counts


def test_automaton_dominates_beyond_its_window(registry):
    derived = minimal_forbidden(registry.dekking_binary, 12)
    auto = build_automaton(derived)
    table = count_avoiding(registry.dekking_binary, 16)
    counted = auto.count_words(16)
    assert all(a >= t for a, t in zip(counted, table.counts))
    assert counted[16] > table.counts[16]


def test_automaton_without_constraints_counts_everything():
    auto = FactorAutomaton(2, frozenset())
    assert auto.count_words(10) == tuple(2 ** n for n in range(11))


def test_single_factor_automaton_gives_fibonacci():
    auto = FactorAutomaton(2, frozenset({word_from_text("00")}))
    counts = auto.count_words(10)
    for i in range(2, 11):
        assert counts[i] == counts[i - 1] + counts[i - 2]


def test_growth_golden_ratio():
    spec = AvoidanceSpec(2, (word_from_text("000"), word_from_text("111")))
    est = growth_rate(build_automaton(minimal_forbidden(spec, 3)))
    assert est.eigenvalue == pytest.approx(1.6180339887, abs=1e-5)


def test_growth_rates_on_derived_sets(registry):
    dek = growth_rate(build_automaton(
        minimal_forbidden(registry.dekking_binary, 20)))
    assert dek.eigenvalue == pytest.approx(1.178, abs=0.005)
    fs = growth_rate(build_automaton(
        minimal_forbidden(registry.fs_binary, 20)))
    assert fs.eigenvalue == pytest.approx(1.135, abs=0.005)


def test_growth_of_dead_language_is_zero():
    auto = FactorAutomaton(2, frozenset({b"\x00", b"\x01"}))
    est = growth_rate(auto)
    assert est.eigenvalue == 0.0


def test_growth_estimate_serializes():
    auto = FactorAutomaton(2, frozenset({word_from_text("00")}))
    d = growth_rate(auto).to_dict()
    assert set(d) == {"eigenvalue", "states", "iterations", "residual"}


# ---------------------------------------------------------------------------
# Lower-bound families.

def test_dekking_family(registry):
    report = lower_bound_family(registry.dekking_sub, registry.dekking_g,
                                registry.dekking_h.image(0),
                                registry.dekking_binary,
                                exponent_denominator=300)
    assert report.family_size == 4
    assert report.word_length == 600
    assert report.verified_count == 4
    assert report.exponent_check
    assert report.enumerated


def test_fs_family(registry):
    report = lower_bound_family(registry.fs_sub, registry.fs_g,
                                registry.fs_h.image(0), registry.fs_binary,
                                exponent_denominator=1152)
    assert report.family_size == 16
    assert report.word_length == 3456
    assert report.verified_count == 16
    assert report.exponent_check
    assert report.enumerated


def test_family_sampling_path_is_deterministic(registry):
    kwargs = dict(exponent_denominator=1152, enumeration_cap=4, samples=6)
    a = lower_bound_family(registry.fs_sub, registry.fs_g,
                           registry.fs_h.image(0), registry.fs_binary,
                           seed=3, **kwargs)
    b = lower_bound_family(registry.fs_sub, registry.fs_g,
                           registry.fs_h.image(0), registry.fs_binary,
                           seed=3, **kwargs)
    assert not a.enumerated
    assert a == b
    assert a.verified_count == 6


# ---------------------------------------------------------------------------
# Exhaustion of finite avoidance languages.

def test_every_length4_binary_word_has_a_square():
    for word in all_words(2, 4):
        assert not naive_satisfies(word, AvoidanceSpec(2, square_min_root=1))
    report = exhaust_max_length(AvoidanceSpec(2, square_min_root=1), 10)
    assert report.max_length == 3
    assert not report.exceeded
    assert word_to_text(report.witness) == "010"


def test_exhaust_root2_language(registry):
    report = exhaust_max_length(registry.ejs2, 40)
    assert not report.exceeded
    assert report.max_length == 18
    assert len(report.witness) == 18
    assert naive_satisfies(report.witness, registry.ejs2)


def test_exhaust_root3_cubefree_language(registry):
    report = exhaust_max_length(registry.ejs3, 60)
    assert not report.exceeded
    assert report.max_length == 29
    assert naive_satisfies(report.witness, registry.ejs3)


def test_exhaust_reports_open_ended_languages(registry):
    report = exhaust_max_length(registry.dekking_binary, 40)
    assert report.exceeded
    assert report.max_length is None and report.witness is None
