"""Shared fixtures and brute-force oracles.

The oracles restate the definitions with plain loops so the fast paths in
the package are checked against something that cannot share their bugs.
"""

import itertools

import pytest

from wordavoid import AvoidanceSpec, load_registry


@pytest.fixture(scope="session")
def registry():
    return load_registry()


# ---------------------------------------------------------------------------
# Definitional oracles.

def naive_squares(word, min_root=1, max_root=None):
    """All (position, root) square occurrences, by the definition."""
    out = []
    top = len(word) // 2 if max_root is None else max_root
    for pos in range(len(word)):
        for root in range(min_root, top + 1):
            if pos + 2 * root > len(word):
                break
            if word[pos:pos + root] == word[pos + root:pos + 2 * root]:
                out.append((pos, root))
    return out


def naive_cubes(word, min_root=1):
    out = []
    for pos in range(len(word)):
        for root in range(min_root, len(word) // 3 + 1):
            if pos + 3 * root > len(word):
                break
            if (word[pos:pos + root] == word[pos + root:pos + 2 * root]
                    == word[pos + 2 * root:pos + 3 * root]):
                out.append((pos, root))
    return out


def naive_gap_occurrences(word, pattern):
    """All (position, gap) occurrences of first+alpha+middle+alpha+last."""
    out = []
    for gap in range(0, (len(word) - 3) // 2 + 1):
        span = 2 * gap + 3
        for pos in range(len(word) - span + 1):
            if (word[pos] == pattern.first
                    and word[pos + gap + 1] == pattern.middle
                    and word[pos + span - 1] == pattern.last
                    and word[pos + 1:pos + gap + 1]
                    == word[pos + gap + 2:pos + span - 1]):
                out.append((pos, gap))
    return sorted(out)


def naive_satisfies(word, spec: AvoidanceSpec) -> bool:
    if any(letter >= spec.alphabet_size for letter in word):
        return False
    for factor in spec.forbidden:
        if factor and factor in word:
            return False
    if spec.square_min_root is not None:
        if naive_squares(word, spec.square_min_root):
            return False
    if spec.square_whitelist is not None:
        allowed = set(spec.square_whitelist)
        for pos, root in naive_squares(word):
            if word[pos:pos + 2 * root] not in allowed:
                return False
    if spec.cubefree and naive_cubes(word):
        return False
    return True


def naive_count(spec: AvoidanceSpec, n: int) -> int:
    total = 0
    for tup in itertools.product(range(spec.alphabet_size), repeat=n):
        if naive_satisfies(bytes(tup), spec):
            total += 1
    return total


def all_words(alphabet_size, length):
    for tup in itertools.product(range(alphabet_size), repeat=length):
        yield bytes(tup)


def naive_inclusions(morphism):
    """Brute interior occurrences of image(c) inside image(a)+image(b)."""
    out = []
    for a in range(morphism.source_size):
        for b in range(morphism.source_size):
            combined = morphism.image(a) + morphism.image(b)
            for c in range(morphism.source_size):
                img = morphism.image(c)
                for off in range(1, len(combined) - len(img)):
                    if combined[off:off + len(img)] == img:
                        out.append((a, b, c, off))
    return out


def naive_interchanges(morphism):
    """Brute splits image(c) = prefix of image(a) + suffix of image(b)."""
    width = morphism.uniform_width
    found = {}
    for a in range(morphism.source_size):
        for b in range(morphism.source_size):
            for c in range(morphism.source_size):
                if c == a or c == b:
                    continue
                ia, ib, ic = (morphism.image(x) for x in (a, b, c))
                splits = [k for k in range(1, width)
                          if ia[:k] == ic[:k] and ib[k:] == ic[k:]]
                if splits:
                    found[(a, b, c)] = splits
    return found
