"""Square, cube, and gap scanning over words stored as bytes of small letters.

A word is a ``bytes`` object whose values are letters 0, 1, 2, ... of a small
alphabet.  Scanners are exact and deterministic; results are sorted by
(position, size).  Shift sweeps run in numpy for small shifts, and an anchored
block search covers large shifts, so scanning a clean word of length n costs
roughly n log n byte operations.  Worst-case output size is quadratic on
highly repetitive input, which the intended avoidance words never are.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Shifts up to this bound are swept directly; larger shifts go through the
# anchored block search.
_SWEEP_CUT = 128
_CHUNK = 256


class ParseError(ValueError):
    """Raised when a word, morphism, or spec text is malformed."""


def word_from_text(text: str) -> bytes:
    """Parse a word written as decimal digits.  Whitespace is ignored."""
    out = bytearray()
    for ch in text:
        if ch.isspace():
            continue
        if not ch.isdigit():
            raise ParseError(f"bad letter {ch!r} in word")
        out.append(int(ch))
    return bytes(out)


def word_to_text(word: bytes) -> str:
    return "".join(str(b) for b in word)


def perfect_shuffle(even: bytes, odd: bytes) -> bytes:
    """Interleave two equal-length words, `even` supplying position 0."""
    if len(even) != len(odd):
        raise ValueError("perfect shuffle needs words of equal length")
    out = bytearray(2 * len(even))
    out[0::2] = even
    out[1::2] = odd
    return bytes(out)


def factor_set(word: bytes, length: int) -> set[bytes]:
    """All factors of the given length."""
    return {word[i:i + length] for i in range(len(word) - length + 1)}


def contains_factor(word: bytes, factor: bytes) -> bool:
    return word.find(factor) != -1


def _equal_runs(arr: np.ndarray, shift: int) -> np.ndarray | None:
    """runs[i] = length of the arr[j] == arr[j+shift] run ending at j = i."""
    if shift <= 0 or shift >= arr.size:
        return None
    eq = arr[:-shift] == arr[shift:]
    idx = np.arange(eq.size)
    last_bad = np.maximum.accumulate(np.where(eq, -1, idx))
    return idx - last_bad


def _extend_left(arr: np.ndarray, shift: int, left: int) -> int:
    while left > 0:
        c = min(_CHUNK, left)
        bad = np.nonzero(arr[left - c:left] != arr[left - c + shift:left + shift])[0]
        if bad.size:
            return left - c + int(bad[-1]) + 1
        left -= c
    return left


def _extend_right(arr: np.ndarray, shift: int, right: int) -> int:
    limit = arr.size - shift
    while right < limit:
        c = min(_CHUNK, limit - right)
        bad = np.nonzero(arr[right:right + c] != arr[right + shift:right + shift + c])[0]
        if bad.size:
            return right + int(bad[0])
        right += c
    return right


def _long_runs(arr, word, lo, hi, need):
    """Maximal equal runs (shift, left, right) with lo <= shift <= hi.

    Only runs with right - left >= need(shift) are returned.  Completeness
    relies on any window of length >= 2*(lo//2) - 1 containing a block that
    starts on a multiple of lo//2, so need(shift) must be at least lo - 1.
    """
    n = len(word)
    s = lo // 2
    out = []
    if s == 0 or n < lo + s:
        return out
    visited = set()
    emitted = set()
    for js in range(0, n - s + 1, s):
        if js - lo < 0:
            continue
        pat = word[js:js + s]
        wlo = max(0, js - hi)
        whi = js - lo + s
        pos = word.find(pat, wlo, whi)
        while pos != -1:
            shift = js - pos
            if (shift, pos) not in visited:
                left = _extend_left(arr, shift, pos)
                right = _extend_right(arr, shift, pos + s)
                # Mark the run start so later anchors skip the extension.
                visited.add((shift, pos))
                visited.add((shift, left))
                if right - left >= need(shift) and (shift, left) not in emitted:
                    emitted.add((shift, left))
                    out.append((shift, left, right))
            pos = word.find(pat, pos + 1, whi)
    return out


def _shift_classes(lo: int, hi: int):
    """Doubling ranges [lo, 2lo) clipped to [lo, hi], for the anchored search."""
    while lo <= hi:
        yield lo, min(2 * lo - 1, hi)
        lo *= 2


def find_squares(word: bytes, min_root: int = 1, max_root: int | None = None) -> list[tuple[int, int]]:
    """All square occurrences as (position, root length), sorted.

    A square of root d at position p means word[p:p+d] == word[p+d:p+2d].
    """
    n = len(word)
    hi = n // 2 if max_root is None else min(max_root, n // 2)
    if min_root < 1:
        raise ValueError("min_root must be >= 1")
    if hi < min_root:
        return []
    arr = np.frombuffer(word, dtype=np.uint8)
    out = []
    for d in range(min_root, min(hi, _SWEEP_CUT) + 1):
        runs = _equal_runs(arr, d)
        if runs is None:
            break
        starts = np.nonzero(runs[d - 1:] >= d)[0]
        out.extend((int(p), d) for p in starts)
    for clo, chi in _shift_classes(max(min_root, _SWEEP_CUT + 1), hi):
        for d, left, right in _long_runs(arr, word, clo, chi, lambda d: d):
            out.extend((p, d) for p in range(left, right - d + 1))
    out.sort()
    return out


def find_cubes(word: bytes, min_root: int = 1, max_root: int | None = None) -> list[tuple[int, int]]:
    """All cube occurrences as (position, root length), sorted."""
    n = len(word)
    hi = n // 3 if max_root is None else min(max_root, n // 3)
    if min_root < 1:
        raise ValueError("min_root must be >= 1")
    if hi < min_root:
        return []
    arr = np.frombuffer(word, dtype=np.uint8)
    out = []
    for d in range(min_root, min(hi, _SWEEP_CUT) + 1):
        runs = _equal_runs(arr, d)
        if runs is None or runs.size < 2 * d:
            break
        starts = np.nonzero(runs[2 * d - 1:] >= 2 * d)[0]
        out.extend((int(p), d) for p in starts)
    for clo, chi in _shift_classes(max(min_root, _SWEEP_CUT + 1), hi):
        for d, left, right in _long_runs(arr, word, clo, chi, lambda d: 2 * d):
            out.extend((p, d) for p in range(left, right - 2 * d + 1))
    out.sort()
    return out


def find_square_at_least(word: bytes, min_root: int) -> tuple[int, int] | None:
    """First (position, root) square with root >= min_root, or None."""
    occ = find_squares(word, min_root=min_root)
    return occ[0] if occ else None


def find_cube_at_least(word: bytes, min_root: int = 1) -> tuple[int, int] | None:
    occ = find_cubes(word, min_root=min_root)
    return occ[0] if occ else None


def max_square_root(word: bytes) -> int:
    """Largest root length of any square in the word, 0 if square free."""
    n = len(word)
    arr = np.frombuffer(word, dtype=np.uint8)
    classes = list(_shift_classes(_SWEEP_CUT + 1, n // 2))
    for clo, chi in reversed(classes):
        found = [d for d, _, _ in _long_runs(arr, word, clo, chi, lambda d: d)]
        if found:
            return max(found)
    for d in range(min(_SWEEP_CUT, n // 2), 0, -1):
        runs = _equal_runs(arr, d)
        if runs is None or runs.size < d:
            continue
        if int(runs[d - 1:].max()) >= d:
            return d
    return 0


@dataclass(frozen=True)
class GapPattern:
    """Letters flanking a repeated gap: first + alpha + middle + alpha + last."""

    first: int
    middle: int
    last: int

    def word(self, alpha: bytes) -> bytes:
        return bytes([self.first]) + alpha + bytes([self.middle]) + alpha + bytes([self.last])

    def letters(self) -> tuple[int, int, int]:
        return (self.first, self.middle, self.last)


def find_gap_occurrences(word: bytes, pattern: GapPattern,
                         max_gap: int | None = None) -> list[tuple[int, int]]:
    """Occurrences of pattern.word(alpha) as (position, len(alpha)), sorted.

    The gap may be empty; position is where the first letter sits.
    """
    n = len(word)
    gmax = (n - 3) // 2
    if max_gap is not None:
        gmax = min(gmax, max_gap)
    if gmax < 0:
        return []
    arr = np.frombuffer(word, dtype=np.uint8)
    first, middle, last = pattern.letters()
    out = []
    for g in range(0, min(gmax, _SWEEP_CUT - 1) + 1):
        d = g + 1
        m = n - 2 * d
        if m <= 0:
            break
        ok = (arr[:m] == first) & (arr[d:d + m] == middle) & (arr[2 * d:] == last)
        if g > 0:
            runs = _equal_runs(arr, d)
            ok &= runs[g:g + m] >= g
        out.extend((int(i), g) for i in np.nonzero(ok)[0])
    for clo, chi in _shift_classes(_SWEEP_CUT + 1, gmax + 1):
        for d, left, right in _long_runs(arr, word, clo, chi, lambda d: d - 1):
            g = d - 1
            ilo = max(left - 1, 0)
            ihi = min(right - d, n - 1 - 2 * d)
            if ihi < ilo:
                continue
            m = ihi - ilo + 1
            ok = ((arr[ilo:ilo + m] == first)
                  & (arr[ilo + d:ilo + d + m] == middle)
                  & (arr[ilo + 2 * d:ilo + 2 * d + m] == last))
            out.extend((ilo + int(k), g) for k in np.nonzero(ok)[0])
    out.sort()
    return out


def first_gap_occurrence(word: bytes, pattern: GapPattern) -> tuple[int, int] | None:
    occ = find_gap_occurrences(word, pattern)
    return occ[0] if occ else None


def contains_gap_pattern(word: bytes, pattern: GapPattern) -> bool:
    return bool(find_gap_occurrences(word, pattern))


def scan_forbidden(word: bytes, forbidden) -> tuple[int, bytes] | None:
    """Leftmost occurrence of any forbidden factor, ties to the shortest."""
    best = None
    for f in forbidden:
        p = word.find(f)
        if p != -1:
            key = (p, len(f), f)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return best[0], best[2]


@dataclass(frozen=True)
class Violation:
    """One reason a word fails a spec."""

    kind: str                  # "letter" | "forbidden" | "square" | "cube"
    position: int
    factor: bytes
    root_length: int | None = None

    def describe(self) -> str:
        if self.kind in ("square", "cube"):
            return (f"{self.kind} of root {self.root_length} at {self.position}: "
                    f"{word_to_text(self.factor)}")
        return f"{self.kind} at {self.position}: {word_to_text(self.factor)}"


@dataclass(frozen=True)
class SpecCheck:
    ok: bool
    violation: Violation | None = None


@dataclass(frozen=True)
class AvoidanceSpec:
    """What a word must avoid.

    square_min_root forbids squares whose root is at least that long;
    square_whitelist instead allows only the listed squares and forbids every
    other square.  The two square policies are mutually exclusive.
    """

    alphabet_size: int
    forbidden: tuple[bytes, ...] = ()
    square_min_root: int | None = None
    square_whitelist: tuple[bytes, ...] | None = None
    cubefree: bool = False

    def __post_init__(self):
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")
        if self.square_min_root is not None and self.square_whitelist is not None:
            raise ValueError("choose one square policy")
        if self.square_min_root is not None and self.square_min_root < 1:
            raise ValueError("square_min_root must be >= 1")
        for w in self.square_whitelist or ():
            h = len(w) // 2
            if len(w) == 0 or len(w) % 2 or w[:h] != w[h:]:
                raise ValueError(f"whitelist entry {word_to_text(w)} is not a square")

    def max_forbidden_length(self) -> int:
        return max((len(f) for f in self.forbidden), default=0)


def satisfies_spec(word: bytes, spec: AvoidanceSpec) -> SpecCheck:
    """Check a word against a spec, reporting the leftmost smallest violation."""
    if word:
        arr = np.frombuffer(word, dtype=np.uint8)
        if int(arr.max()) >= spec.alphabet_size:
            p = int(np.argmax(arr >= spec.alphabet_size))
            return SpecCheck(False, Violation("letter", p, word[p:p + 1]))
    hit = scan_forbidden(word, spec.forbidden)
    if hit is not None:
        return SpecCheck(False, Violation("forbidden", hit[0], hit[1]))
    if spec.square_min_root is not None:
        occ = find_square_at_least(word, spec.square_min_root)
        if occ is not None:
            p, d = occ
            return SpecCheck(False, Violation("square", p, word[p:p + 2 * d], d))
    if spec.square_whitelist is not None:
        allowed = set(spec.square_whitelist)
        for p, d in find_squares(word):
            if word[p:p + 2 * d] not in allowed:
                return SpecCheck(False, Violation("square", p, word[p:p + 2 * d], d))
    if spec.cubefree:
        occ = find_cube_at_least(word)
        if occ is not None:
            p, d = occ
            return SpecCheck(False, Violation("cube", p, word[p:p + 3 * d], d))
    return SpecCheck(True, None)


def suffix_legal(word: bytes, spec: AvoidanceSpec) -> bool:
    """Check only the constraints that end at the last letter.

    Sound for incremental search: if every proper prefix passed this check,
    the word satisfies the spec exactly when this check passes.  Pure python,
    meant for the short words a depth-first enumeration visits.
    """
    n = len(word)
    if n == 0:
        return True
    if word[-1] >= spec.alphabet_size:
        return False
    for f in spec.forbidden:
        if n >= len(f) and word.endswith(f):
            return False
    if spec.square_min_root is not None:
        for d in range(spec.square_min_root, n // 2 + 1):
            if word[n - 2 * d:n - d] == word[n - d:]:
                return False
    if spec.square_whitelist is not None:
        allowed = set(spec.square_whitelist)
        for d in range(1, n // 2 + 1):
            if word[n - 2 * d:n - d] == word[n - d:] and word[n - 2 * d:] not in allowed:
                return False
    if spec.cubefree:
        for d in range(1, n // 3 + 1):
            if word[n - 3 * d:n - 2 * d] == word[n - 2 * d:n - d] == word[n - d:]:
                return False
    return True


def parse_spec(text: str) -> AvoidanceSpec:
    """Read a spec from its text form.

    Lines are `alphabet N`, `squares min-root N | whitelist W... | all-forbidden`,
    `cubes forbidden`, and `forbid W...`; # starts a comment.
    """
    alphabet = None
    forbidden: list[bytes] = []
    min_root = None
    whitelist = None
    cubefree = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        key, args = fields[0], fields[1:]
        try:
            if key == "alphabet":
                alphabet = int(args[0])
            elif key == "squares":
                if args[0] == "min-root":
                    min_root = int(args[1])
                elif args[0] == "all-forbidden":
                    min_root = 1
                elif args[0] == "whitelist":
                    whitelist = tuple(word_from_text(a) for a in args[1:])
                elif args[0] != "any":
                    raise ParseError(f"unknown square policy {args[0]!r}")
            elif key == "cubes":
                if args[0] == "forbidden":
                    cubefree = True
                elif args[0] != "any":
                    raise ParseError(f"unknown cube policy {args[0]!r}")
            elif key == "forbid":
                forbidden.extend(word_from_text(a) for a in args)
            else:
                raise ParseError(f"unknown key {key!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise ParseError(f"line {lineno}: {exc}") from None
            raise ParseError(f"line {lineno}: cannot parse {line!r}") from None
    if alphabet is None:
        raise ParseError("spec is missing an alphabet line")
    return AvoidanceSpec(alphabet_size=alphabet, forbidden=tuple(forbidden),
                         square_min_root=min_root, square_whitelist=whitelist,
                         cubefree=cubefree)


def format_spec(spec: AvoidanceSpec) -> str:
    lines = [f"alphabet {spec.alphabet_size}"]
    if spec.square_min_root is not None:
        lines.append(f"squares min-root {spec.square_min_root}")
    if spec.square_whitelist is not None:
        entries = " ".join(word_to_text(w) for w in spec.square_whitelist)
        lines.append(f"squares whitelist {entries}")
    if spec.cubefree:
        lines.append("cubes forbidden")
    if spec.forbidden:
        lines.append("forbid " + " ".join(word_to_text(f) for f in spec.forbidden))
    return "\n".join(lines) + "\n"
