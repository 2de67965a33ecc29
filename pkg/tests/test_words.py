"""Word-level scanners against brute-force oracles."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordavoid import (AvoidanceSpec, GapPattern, ParseError, contains_factor,
                       contains_gap_pattern, factor_set, find_cube_at_least,
                       find_cubes, find_gap_occurrences, find_square_at_least,
                       find_squares, format_spec, max_square_root, parse_spec,
                       perfect_shuffle, satisfies_spec, scan_forbidden,
                       suffix_legal, word_from_text, word_to_text)

from conftest import (naive_cubes, naive_gap_occurrences, naive_satisfies,
                      naive_squares)

words2 = st.binary(max_size=40).map(lambda b: bytes(x & 1 for x in b))
words3 = st.binary(max_size=36).map(lambda b: bytes(x % 3 for x in b))


def test_word_text_round_trip():
    assert word_from_text("0102 31") == bytes([0, 1, 0, 2, 3, 1])
    assert word_to_text(bytes([0, 1, 0, 2])) == "0102"
    with pytest.raises(ParseError):
        word_from_text("01a2")


def test_perfect_shuffle_interleaves():
    assert perfect_shuffle(b"\x00\x01\x00", b"\x00\x00\x01") == \
        bytes([0, 0, 1, 0, 0, 1])
    with pytest.raises(ValueError):
        perfect_shuffle(b"\x00", b"\x00\x01")


def test_factor_set_and_contains():
    word = word_from_text("010011")
    assert factor_set(word, 2) == {word_from_text(t)
                                   for t in ("01", "10", "00", "11")}
    assert contains_factor(word, word_from_text("100"))
    assert not contains_factor(word, word_from_text("111"))


@given(words2)
@settings(max_examples=150)
def test_find_squares_matches_naive(word):
    assert find_squares(word, 1) == naive_squares(word, 1)
    assert find_squares(word, 2) == naive_squares(word, 2)


@given(words3)
@settings(max_examples=100)
def test_find_cubes_matches_naive(word):
    assert find_cubes(word, 1) == naive_cubes(word, 1)


@given(words2)
@settings(max_examples=100)
def test_first_hits_agree_with_full_scans(word):
    sq = naive_squares(word, 2)
    assert find_square_at_least(word, 2) == (min(sq) if sq else None)
    cu = naive_cubes(word, 1)
    assert find_cube_at_least(word, 1) == (min(cu) if cu else None)


@given(words2)
@settings(max_examples=100)
def test_max_square_root_matches_naive(word):
    occ = naive_squares(word, 1)
    expected = max((root for _, root in occ), default=0)
    assert max_square_root(word) == expected


@given(words3, st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
@settings(max_examples=150)
def test_gap_occurrences_match_naive(word, first, middle, last):
    pattern = GapPattern(first, middle, last)
    got = find_gap_occurrences(word, pattern)
    expected = naive_gap_occurrences(word, pattern)
    assert sorted(got) == expected
    assert contains_gap_pattern(word, pattern) == bool(expected)


def test_gap_pattern_word_builder():
    pattern = GapPattern(1, 3, 2)
    assert pattern.word(word_from_text("00")) == word_from_text("1003002")
    assert pattern.letters() == (1, 3, 2)


def test_scan_forbidden_reports_first_hit():
    word = word_from_text("0102010")
    assert scan_forbidden(word, (word_from_text("20"),)) == \
        (3, word_from_text("20"))
    assert scan_forbidden(word, (word_from_text("22"),)) is None


SPECS = [
    AvoidanceSpec(2, square_min_root=2),
    AvoidanceSpec(2, square_min_root=4, cubefree=True),
    AvoidanceSpec(2, square_whitelist=(word_from_text("00"),
                                       word_from_text("11"),
                                       word_from_text("0101"))),
    AvoidanceSpec(3, square_min_root=1),
    AvoidanceSpec(2, forbidden=(word_from_text("000"), word_from_text("111"))),
]


@pytest.mark.parametrize("spec", SPECS, ids=range(len(SPECS)))
@given(word=words2)
@settings(max_examples=80)
def test_satisfies_spec_matches_naive(spec, word):
    assert satisfies_spec(word, spec).ok == naive_satisfies(word, spec)


@given(words2)
@settings(max_examples=80)
def test_violation_is_reported_with_its_window(word):
    spec = AvoidanceSpec(2, square_min_root=2)
    check = satisfies_spec(word, spec)
    if not check.ok:
        v = check.violation
        assert v.kind == "square"
        root = v.root_length
        assert word[v.position:v.position + 2 * root] == v.factor
        assert v.factor[:root] == v.factor[root:]


@pytest.mark.parametrize("spec", SPECS, ids=range(len(SPECS)))
@given(word=words2)
@settings(max_examples=80)
def test_suffix_legal_builds_exactly_the_legal_words(spec, word):
    """A word is legal iff every step of appending its letters stays legal."""
    incremental = all(suffix_legal(word[:i + 1], spec)
                      for i in range(len(word)))
    assert incremental == satisfies_spec(word, spec).ok


def test_spec_text_round_trip(registry):
    for name in ("dekking_binary", "fs_binary", "pu_source", "ejs3"):
        spec = getattr(registry, name)
        assert parse_spec(format_spec(spec)) == spec


def test_spec_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 2"):
        parse_spec("alphabet 2\nsquares min-root x\n")
    with pytest.raises(ParseError, match="alphabet"):
        parse_spec("forbid 00\n")
