"""Exact counting of avoiding words and growth-rate estimates.

Counting is a pruned depth-first search: a word is extended letter by letter
and a branch dies as soon as the new suffix breaks the spec, which is the only
place a fresh violation can appear.  Minimal forbidden words (both one-letter
truncations legal) feed an Aho-Corasick factor automaton whose live part
counts and bounds the language; its Perron root comes from power iteration,
standing in for the symbolic characteristic polynomials.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass

import numpy as np

from .morphisms import Morphism, Substitution
from .words import AvoidanceSpec, satisfies_spec, suffix_legal, word_to_text


@dataclass(frozen=True)
class CountTable:
    """Exact number of legal words at each length from 0 up."""

    spec: AvoidanceSpec
    counts: tuple[int, ...]

    def to_csv(self) -> str:
        lines = ["n,count"]
        lines += [f"{n},{c}" for n, c in enumerate(self.counts)]
        return "\n".join(lines) + "\n"


def _subtree_counts(prefix: bytes, spec: AvoidanceSpec, n_max: int) -> list[int]:
    """Counts by length of legal words extending one legal prefix."""
    counts = [0] * (n_max + 1)
    stack = [prefix]
    while stack:
        word = stack.pop()
        counts[len(word)] += 1
        if len(word) == n_max:
            continue
        for letter in range(spec.alphabet_size - 1, -1, -1):
            ext = word + bytes([letter])
            if suffix_legal(ext, spec):
                stack.append(ext)
    return counts


def _subtree_job(args: tuple[bytes, AvoidanceSpec, int]) -> list[int]:
    return _subtree_counts(*args)


def count_avoiding(spec: AvoidanceSpec, n_max: int,
                   workers: int = 1) -> CountTable:
    """Count legal words of each length 0..n_max by pruned DFS.

    With workers > 1 the subtrees below a fixed split depth are counted in
    parallel processes; counts merge by addition, so the result does not
    depend on scheduling.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    split = min(6, n_max)
    frontier = [b""]
    counts = [0] * (n_max + 1)
    for depth in range(split):
        counts[depth] += len(frontier)
        frontier = [w + bytes([x]) for w in frontier
                    for x in range(spec.alphabet_size)
                    if suffix_legal(w + bytes([x]), spec)]
    if workers > 1 and frontier:
        with multiprocessing.Pool(workers) as pool:
            parts = pool.map(_subtree_job,
                             [(w, spec, n_max) for w in frontier])
    else:
        parts = [_subtree_counts(w, spec, n_max) for w in frontier]
    for part in parts:
        for n, c in enumerate(part):
            counts[n] += c
    return CountTable(spec, tuple(counts))


@dataclass(frozen=True)
class MinimalForbiddenSet:
    """Spec-violating words whose one-letter truncations are both legal."""

    spec: AvoidanceSpec
    max_length: int
    words: frozenset[bytes]

    def to_lines(self) -> str:
        ordered = sorted(self.words, key=lambda w: (len(w), w))
        return "\n".join(word_to_text(w) for w in ordered) + "\n"


def minimal_forbidden(spec: AvoidanceSpec, max_length: int) -> MinimalForbiddenSet:
    """All minimal forbidden words of length <= max_length.

    Every proper factor of a candidate is a factor of one of its two
    truncations, so legality of both truncations is the whole minimality
    condition.  Candidates are one-letter extensions of legal words, which
    keeps the left truncation legal by construction.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    found = set()
    stack = [b""]
    while stack:
        word = stack.pop()
        if len(word) == max_length:
            continue
        for letter in range(spec.alphabet_size):
            ext = word + bytes([letter])
            if suffix_legal(ext, spec):
                stack.append(ext)
            elif satisfies_spec(ext[1:], spec).ok:
                found.add(ext)
    return MinimalForbiddenSet(spec, max_length, frozenset(found))


class FactorAutomaton:
    """Deterministic complete automaton tracking forbidden-factor progress.

    States are the trie nodes of the forbidden words with Aho-Corasick
    failure transitions filled in; a state is dead once any forbidden word
    has been completed.  Words avoiding the whole set correspond to paths
    from the root through live states.
    """

    def __init__(self, alphabet_size: int, forbidden: frozenset[bytes]):
        if alphabet_size < 1:
            raise ValueError("alphabet must be nonempty")
        self.alphabet_size = alphabet_size
        children: list[dict[int, int]] = [{}]
        dead = [False]
        for word in sorted(forbidden, key=lambda w: (len(w), w)):
            node = 0
            for letter in word:
                if letter not in children[node]:
                    children.append({})
                    dead.append(False)
                    children[node][letter] = len(children) - 1
                node = children[node][letter]
            dead[node] = True

        size = len(children)
        goto = [[0] * alphabet_size for _ in range(size)]
        fail = [0] * size
        queue = list(children[0].values())
        for letter in range(alphabet_size):
            goto[0][letter] = children[0].get(letter, 0)
        head = 0
        while head < len(queue):
            node = queue[head]
            head += 1
            dead[node] = dead[node] or dead[fail[node]]
            for letter in range(alphabet_size):
                child = children[node].get(letter)
                if child is None:
                    goto[node][letter] = goto[fail[node]][letter]
                else:
                    fail[child] = goto[fail[node]][letter]
                    goto[node][letter] = child
                    queue.append(child)

        self.transitions = tuple(tuple(row) for row in goto)
        self.dead = tuple(dead)
        self.live_states = sum(1 for d in dead if not d)

    def count_words(self, n_max: int) -> tuple[int, ...]:
        """Exact path counts through live states, one per length."""
        weight = {0: 1} if not self.dead[0] else {}
        counts = [sum(weight.values())]
        for _ in range(n_max):
            nxt: dict[int, int] = {}
            for state, w in weight.items():
                for letter in range(self.alphabet_size):
                    succ = self.transitions[state][letter]
                    if not self.dead[succ]:
                        nxt[succ] = nxt.get(succ, 0) + w
            weight = nxt
            counts.append(sum(weight.values()))
        return tuple(counts)

    def transition_matrix(self) -> tuple[np.ndarray, tuple[int, ...]]:
        """Adjacency counts between live states, with the state relabeling."""
        live = tuple(s for s in range(len(self.dead)) if not self.dead[s])
        index = {s: i for i, s in enumerate(live)}
        matrix = np.zeros((len(live), len(live)))
        for s in live:
            for letter in range(self.alphabet_size):
                succ = self.transitions[s][letter]
                if not self.dead[succ]:
                    matrix[index[s], index[succ]] += 1.0
        return matrix, live


def build_automaton(forbidden_set: MinimalForbiddenSet) -> FactorAutomaton:
    return FactorAutomaton(forbidden_set.spec.alphabet_size, forbidden_set.words)


@dataclass(frozen=True)
class GrowthEstimate:
    """Dominant eigenvalue of the live transition matrix."""

    eigenvalue: float
    states: int
    iterations: int
    residual: float

    def to_dict(self) -> dict:
        return {"eigenvalue": self.eigenvalue, "states": self.states,
                "iterations": self.iterations, "residual": self.residual}


def growth_rate(automaton: FactorAutomaton, tol: float = 1e-9,
                max_iterations: int = 200_000) -> GrowthEstimate:
    """Perron root of the live part by power iteration.

    Iteration runs on M + I, whose spectrum is the shifted one but which is
    aperiodic whenever the live part is nonempty, so the Rayleigh quotient
    settles even on periodic languages.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    matrix, live = automaton.transition_matrix()
    n = len(live)
    if n == 0 or not matrix.any():
        return GrowthEstimate(0.0, n, 0, 0.0)
    shifted = matrix + np.eye(n)
    vec = np.full(n, 1.0 / math.sqrt(n))
    previous = 0.0
    for iteration in range(1, max_iterations + 1):
        nxt = shifted @ vec
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            return GrowthEstimate(0.0, n, iteration, 0.0)
        vec = nxt / norm
        rayleigh = float(vec @ (shifted @ vec))
        residual = abs(rayleigh - previous)
        if residual < tol:
            return GrowthEstimate(rayleigh - 1.0, n, iteration, residual)
        previous = rayleigh
    return GrowthEstimate(previous - 1.0, n, max_iterations, residual)


@dataclass(frozen=True)
class FamilyReport:
    """Outcome of enumerating one substitution image family."""

    word_length: int
    family_size: int
    verified_count: int
    exponent_check: bool
    enumerated: bool

    def to_dict(self) -> dict:
        return {"word_length": self.word_length,
                "family_size": self.family_size,
                "verified_count": self.verified_count,
                "exponent_check": self.exponent_check,
                "enumerated": self.enumerated}


def lower_bound_family(sub: Substitution, outer: Morphism, seed_word: bytes,
                       target: AvoidanceSpec, *,
                       exponent_denominator: int | None = None,
                       enumeration_cap: int = 1 << 16,
                       samples: int = 64, seed: int = 0) -> FamilyReport:
    """Check every word of outer(sub(seed_word)) against the target spec.

    The family size is exact regardless of size; beyond the enumeration cap
    only a deterministic sample is verified.  The exponent check compares
    family_size against 2^(word_length / denominator) in exact integers.
    """
    family_size = sub.count_images(seed_word)
    first = outer.apply(next(iter(sub.iter_images(seed_word))))
    length = len(first)
    verified = 0
    enumerated = family_size <= enumeration_cap
    if enumerated:
        for image in sub.iter_images(seed_word):
            word = outer.apply(image)
            if len(word) == length and satisfies_spec(word, target).ok:
                verified += 1
    else:
        for i in range(samples):
            word = outer.apply(sub.sample_image(seed_word, seed + i))
            if len(word) == length and satisfies_spec(word, target).ok:
                verified += 1
    check = True
    if exponent_denominator is not None:
        check = family_size ** exponent_denominator >= 2 ** length
    return FamilyReport(length, family_size, verified, check, enumerated)


@dataclass(frozen=True)
class ExhaustReport:
    """Longest legal word when the whole search tree is finite."""

    max_length: int | None
    witness: bytes | None
    exceeded: bool

    def to_dict(self) -> dict:
        return {"max_length": self.max_length,
                "witness": None if self.witness is None
                else word_to_text(self.witness),
                "exceeded": self.exceeded}


def exhaust_max_length(spec: AvoidanceSpec, hard_cap: int) -> ExhaustReport:
    """Longest legal word, or a cap report when the DFS still has room.

    Hitting a legal word of length hard_cap means the language may well be
    infinite, so the search stops and says so rather than pretending the cap
    is an answer.
    """
    if hard_cap < 1:
        raise ValueError("hard_cap must be >= 1")
    best = b""
    stack = [b""]
    while stack:
        word = stack.pop()
        if len(word) > len(best):
            best = word
        if len(word) == hard_cap:
            return ExhaustReport(None, None, True)
        for letter in range(spec.alphabet_size - 1, -1, -1):
            ext = word + bytes([letter])
            if suffix_legal(ext, spec):
                stack.append(ext)
    return ExhaustReport(len(best), best, False)
