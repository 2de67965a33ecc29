"""Transfer verification for uniform morphisms.

Proves statements of the form "if a word satisfies the source spec, its image
satisfies the target spec" by splitting any would-be violation into three
exhaustive channels:

* short violations, inside the image of a bounded source word (checked by
  enumeration up to the root cap);
* inclusions, where one image sits inside the image of a pair with offcut
  affixes on both sides (refuted case by case through context letters and
  forced pullbacks);
* interchanges, where two images share a prefix/suffix splitting of a third
  (refuted by proving a three-letter gap pattern absent from the source
  language).

A `TransferCertificate` collects the witnesses, their refutations, and any
residual obligations; it is complete when nothing is left open.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .morphisms import Morphism, Substitution, fixed_point_prefix
from .words import (AvoidanceSpec, GapPattern, Violation, find_cubes,
                    find_gap_occurrences, find_squares, format_spec,
                    satisfies_spec, scan_forbidden, suffix_legal, word_to_text)

FixedPoint = tuple[Morphism, int]


def _pattern_key(pattern: GapPattern) -> tuple[int, int, int]:
    return (pattern.first, pattern.middle, pattern.last)


def _project(word: bytes, classes: tuple[int, ...] | None) -> bytes:
    if classes is None:
        return word
    return bytes(classes[b] for b in word)


def _legal(word: bytes, spec: AvoidanceSpec) -> bool:
    return satisfies_spec(word, spec).ok


def _find_all(hay: bytes, needle: bytes):
    i = hay.find(needle)
    while i != -1:
        yield i
        i = hay.find(needle, i + 1)


# ---------------------------------------------------------------------------
# Exact factors of a fixed point.

@lru_cache(maxsize=None)
def letter_closure(morphism: Morphism, seed: int) -> frozenset[int]:
    """Letters occurring in the fixed point of `morphism` at `seed`."""
    seen = {seed}
    frontier = [seed]
    while frontier:
        a = frontier.pop()
        for b in morphism.image(a):
            if b not in seen:
                seen.add(b)
                frontier.append(b)
    return frozenset(seen)


@lru_cache(maxsize=None)
def pair_closure(morphism: Morphism, seed: int) -> frozenset[bytes]:
    """Two-letter factors of the fixed point.

    Least fixpoint: pairs interior to an image all occur, and every occurring
    pair of blocks contributes its boundary pair.  Interior pairs seed the
    iteration because each image is itself a factor.
    """
    letters = letter_closure(morphism, seed)
    pairs: set[bytes] = set()
    for a in sorted(letters):
        img = morphism.image(a)
        for i in range(len(img) - 1):
            pairs.add(img[i:i + 2])
    changed = True
    while changed:
        changed = False
        for p in sorted(pairs):
            boundary = bytes([morphism.image(p[0])[-1], morphism.image(p[1])[0]])
            if boundary not in pairs:
                pairs.add(boundary)
                changed = True
    return frozenset(pairs)


@lru_cache(maxsize=None)
def exact_factors(morphism: Morphism, seed: int, length: int) -> frozenset[bytes]:
    """All factors of the given length of the fixed point, computed exactly.

    A factor of length k starts inside the first block of a window of
    j = 1 + ceil((k-1)/W) consecutive blocks, and the block word of a window
    is itself a factor of the fixed point, so the recursion bottoms out at
    the letter and pair closures.
    """
    if morphism.source_size != morphism.target_size:
        raise ValueError("exact factors need an endomorphism")
    width = morphism.uniform_width
    if width is None or width < 2:
        raise ValueError("exact factors need uniform width >= 2")
    if length < 1:
        raise ValueError("length must be positive")
    if length == 1:
        return frozenset(bytes([a]) for a in letter_closure(morphism, seed))
    if length == 2:
        return pair_closure(morphism, seed)
    blocks = 1 + -(-(length - 1) // width)
    out: set[bytes] = set()
    for source in exact_factors(morphism, seed, blocks):
        window = morphism.apply(source)
        for i in range(width):
            if i + length <= len(window):
                out.add(window[i:i + length])
    return frozenset(out)


def _fixed_point_phases(morphism: Morphism, seed: int, word: bytes) -> set[int]:
    """Positions mod width at which `word` can start in the fixed point."""
    width = morphism.uniform_width
    phases: set[int] = set()
    for pair in pair_closure(morphism, seed):
        window = morphism.apply(pair)
        for i in _find_all(window, word):
            if i < width:
                phases.add(i)
    return phases


# ---------------------------------------------------------------------------
# Witnesses.

@dataclass(frozen=True)
class InclusionWitness:
    """image(a) + image(b) contains image(c) at `offset`, flanked by t and u."""

    a: int
    b: int
    c: int
    offset: int
    t: bytes
    u: bytes

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "offset": self.offset,
                "t": word_to_text(self.t), "u": word_to_text(self.u)}


@dataclass(frozen=True)
class InterchangeWitness:
    """image(a) = s+t, image(b) = u+v, image(c) = s+v at the recorded split.

    `splits` lists every split position that works; `split` is the smallest.
    """

    a: int
    b: int
    c: int
    split: int
    s: bytes
    t: bytes
    u: bytes
    v: bytes
    splits: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "split": self.split,
                "s": word_to_text(self.s), "t": word_to_text(self.t),
                "u": word_to_text(self.u), "v": word_to_text(self.v),
                "splits": list(self.splits)}


@dataclass(frozen=True)
class EmbeddingCase:
    """One choice of context letters around an inclusion, and its outcome."""

    pred: int
    succ: int
    case: str
    detail: str

    def to_dict(self) -> dict:
        return {"pred": self.pred, "succ": self.succ, "case": self.case,
                "detail": self.detail}


@dataclass(frozen=True)
class Refutation:
    method: str
    detail: str
    embeddings: tuple[EmbeddingCase, ...] = ()

    _CLOSED = ("pair-illegal", "no-right-extension", "no-left-extension",
               "no-embedding", "trivial", "gap-pattern-absent")

    @property
    def ok(self) -> bool:
        if self.method == "embeddings":
            return all(e.case != "open" for e in self.embeddings)
        return self.method in self._CLOSED

    def to_dict(self) -> dict:
        out = {"method": self.method, "detail": self.detail}
        if self.embeddings:
            out["embeddings"] = [e.to_dict() for e in self.embeddings]
        return out


@dataclass(frozen=True)
class GapEvidence:
    """Why a pattern first..middle..last with equal gaps cannot occur.

    kind is one of trivial, follower, descent, exhaustive, scan, present;
    scope says whether the argument covers every word of the source spec or
    only the fixed point named in the proof.  Only complete evidence makes a
    certificate complete; scan evidence is empirical.
    """

    pattern: GapPattern
    kind: str
    scope: str
    complete: bool
    detail: str

    def to_dict(self) -> dict:
        return {"pattern": word_to_text(bytes([self.pattern.first,
                                                self.pattern.middle,
                                                self.pattern.last])),
                "kind": self.kind, "scope": self.scope,
                "complete": self.complete, "detail": self.detail}


@dataclass(frozen=True)
class BoundedCaseReport:
    max_source_length: int
    words_checked: int
    legal_counts: tuple[int, ...]
    violations: tuple[tuple[bytes, Violation], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"max_source_length": self.max_source_length,
                "words_checked": self.words_checked,
                "legal_counts": list(self.legal_counts),
                "violations": [{"source": word_to_text(w),
                                "violation": v.describe()}
                               for w, v in self.violations]}


# ---------------------------------------------------------------------------
# Witness search.

def find_inclusions(morphism: Morphism, classes: tuple[int, ...] | None = None,
                    pairs: str = "distinct",
                    source: AvoidanceSpec | None = None) -> list[InclusionWitness]:
    """All ways an image sits strictly inside the image of a two-letter word.

    `pairs` selects which (a, b) to scan: "distinct" keeps pairs whose
    letters differ (as classes, when given), "equal" keeps the rest, "all"
    keeps everything.  When `source` is given, pairs whose two-letter word
    already violates it are skipped: such pairs never occur in a conforming
    word, so their inclusions threaten nothing.  Offsets 0 and W would make
    c a copy of a or b and are not inclusions.
    """
    width = morphism.uniform_width
    if width is None:
        raise ValueError("inclusion search needs a uniform morphism")
    if pairs not in ("distinct", "equal", "all"):
        raise ValueError(f"bad pairs selector {pairs!r}")
    cls = classes or tuple(range(morphism.source_size))
    out = []
    for a in range(morphism.source_size):
        for b in range(morphism.source_size):
            if pairs == "distinct" and cls[a] == cls[b]:
                continue
            if pairs == "equal" and cls[a] != cls[b]:
                continue
            if source is not None and not _legal(bytes((cls[a], cls[b])), source):
                continue
            combined = morphism.image(a) + morphism.image(b)
            for offset in range(1, width):
                segment = combined[offset:offset + width]
                for c in range(morphism.source_size):
                    if morphism.image(c) == segment:
                        out.append(InclusionWitness(
                            a, b, c, offset,
                            combined[:offset], combined[offset + width:]))
    return out


def find_interchanges(morphism: Morphism,
                      classes: tuple[int, ...] | None = None
                      ) -> list[InterchangeWitness]:
    """Triples where image(c) recombines a prefix of image(a) with a suffix
    of image(b).  Only triples with c distinct from both a and b (as classes)
    threaten a square, so only those are reported.
    """
    width = morphism.uniform_width
    if width is None:
        raise ValueError("interchange search needs a uniform morphism")
    cls = classes or tuple(range(morphism.source_size))
    out = []
    for a in range(morphism.source_size):
        for b in range(morphism.source_size):
            for c in range(morphism.source_size):
                if cls[a] == cls[c] or cls[b] == cls[c]:
                    continue
                ia, ib, ic = morphism.image(a), morphism.image(b), morphism.image(c)
                splits = tuple(k for k in range(1, width)
                               if ia[:k] == ic[:k] and ib[k:] == ic[k:])
                if splits:
                    k = splits[0]
                    out.append(InterchangeWitness(
                        a, b, c, k, ia[:k], ia[k:], ib[:k], ib[k:], splits))
    return out


# ---------------------------------------------------------------------------
# Inclusion refutation.

def refute_inclusion(morphism: Morphism, witness: InclusionWitness,
                     source: AvoidanceSpec, depth: int = 2,
                     classes: tuple[int, ...] | None = None) -> Refutation:
    """Refute one inclusion against the source spec.

    Depth 0 uses only the pair itself and the two affix extension checks.
    Depth 1 adds the embedding analysis through context letters, and depth 2
    adds the forced-pullback cases, which look one source letter further.
    """
    width = morphism.uniform_width
    a, b, c, offset = witness.a, witness.b, witness.c, witness.offset
    t, u = witness.t, witness.u

    pair = _project(bytes([a, b]), classes)
    check = satisfies_spec(pair, source)
    if not check.ok:
        return Refutation("pair-illegal",
                          f"source forbids {word_to_text(pair)}"
                          f" ({check.violation.kind})")
    preds = [e for e in range(morphism.source_size)
             if morphism.image(e).endswith(t)]
    succs = [d for d in range(morphism.source_size)
             if morphism.image(d).startswith(u)]
    if not succs:
        return Refutation("no-right-extension",
                          f"{word_to_text(u)} is not a prefix of any image")
    if not preds:
        return Refutation("no-left-extension",
                          f"{word_to_text(t)} is not a suffix of any image")
    if depth < 1:
        return Refutation("open", "embedding analysis needs depth >= 1")

    embeddings = []
    for e in preds:
        for d in succs:
            embeddings.append(_embedding_case(
                morphism, source, classes, a, b, c, offset, e, d, depth))
    if not embeddings:
        # unreachable while the extension checks run first; kept for safety
        return Refutation("no-embedding", "no context letters fit (vacuous)")
    open_count = sum(1 for e in embeddings if e.case == "open")
    detail = (f"{len(embeddings)} embeddings, all refuted" if open_count == 0
              else f"{open_count} of {len(embeddings)} embeddings open")
    return Refutation("embeddings", detail, tuple(embeddings))


def _embedding_case(morphism, source, classes, a, b, c, offset, e, d,
                    depth) -> EmbeddingCase:
    width = morphism.uniform_width
    left_pair = _project(bytes([e, c]), classes)
    right_pair = _project(bytes([c, d]), classes)
    for p in (left_pair, right_pair):
        check = satisfies_spec(p, source)
        if not check.ok:
            return EmbeddingCase(e, d, "context-pair",
                                 f"source forbids {word_to_text(p)}"
                                 f" ({check.violation.kind})")
    triple = _project(bytes([e, c, d]), classes)
    check = satisfies_spec(triple, source)
    if not check.ok:
        return EmbeddingCase(e, d, "context-triple",
                             f"source forbids {word_to_text(triple)}"
                             f" ({check.violation.kind})")

    # v·image(ab)·w = image(ecd) leaves v = image(e)[:W-o] hanging on the
    # left and w = image(d)[W-o:] on the right; both are nonempty for any
    # inclusion, so the trivial case cannot arise here.
    v = morphism.image(e)[:width - offset]
    w = morphism.image(d)[width - offset:]
    k_right = [k for k in range(morphism.source_size)
               if morphism.image(k).startswith(w)]
    k_left = [k for k in range(morphism.source_size)
              if morphism.image(k).endswith(v)]

    if depth >= 2:
        if offset == 1:
            case = _forced_case(source, classes, k_left, (a, b), "left")
            if case is not None:
                return EmbeddingCase(e, d, "left-pullback-forced", case)
        if width - offset == 1:
            case = _forced_case(source, classes, k_right, (a, b), "right")
            if case is not None:
                return EmbeddingCase(e, d, "right-pullback-forced", case)
    if not k_right:
        return EmbeddingCase(e, d, "no-right-pullback",
                             f"{word_to_text(w)} is not a prefix of any image")
    if not k_left:
        return EmbeddingCase(e, d, "no-left-pullback",
                             f"{word_to_text(v)} is not a suffix of any image")
    if depth >= 2:
        case = _forced_case(source, classes, k_left, (a, b), "left")
        if case is not None:
            return EmbeddingCase(e, d, "left-pullback-forced-general", case)
        case = _forced_case(source, classes, k_right, (a, b), "right")
        if case is not None:
            return EmbeddingCase(e, d, "right-pullback-forced-general", case)
    return EmbeddingCase(e, d, "open", "no case applies")


def _forced_case(source, classes, candidates, pair, side) -> str | None:
    """Every pullback candidate must make the extended triple illegal."""
    if not candidates:
        return None
    reasons = []
    for k in candidates:
        if side == "left":
            triple = _project(bytes([k, *pair]), classes)
        else:
            triple = _project(bytes([*pair, k]), classes)
        check = satisfies_spec(triple, source)
        if check.ok:
            return None
        reasons.append(f"{word_to_text(triple)} ({check.violation.kind})")
    return f"forced {side} letter in {{{','.join(str(k) for k in candidates)}}}: " \
           + "; ".join(reasons)


# ---------------------------------------------------------------------------
# Gap patterns.

def first_legal_gap_word(pattern: GapPattern, spec: AvoidanceSpec,
                         max_gap: int) -> bytes | None:
    """Smallest spec-legal instance of the pattern with gap <= max_gap.

    Prunes on the legality of the leading letter plus gap prefix, which is
    sound because a violation inside a prefix survives every extension.
    """
    lead = bytes([pattern.first])

    def rec(alpha: bytes) -> bytes | None:
        word = pattern.word(alpha)
        if _legal(word, spec):
            return word
        if len(alpha) == max_gap:
            return None
        for x in range(spec.alphabet_size):
            ext = alpha + bytes([x])
            if suffix_legal(lead + ext, spec):
                hit = rec(ext)
                if hit is not None:
                    return hit
        return None

    return rec(b"")


def _exhaustive_viability(pattern: GapPattern, spec: AvoidanceSpec,
                          max_gap: int):
    """(complete, legal_instance): complete means every branch died early."""
    lead = bytes([pattern.first])
    complete = True
    instance = None

    def rec(alpha: bytes):
        nonlocal complete, instance
        if instance is not None:
            return
        word = pattern.word(alpha)
        if _legal(word, spec):
            instance = word
            return
        if len(alpha) == max_gap:
            complete = False
            return
        for x in range(spec.alphabet_size):
            ext = alpha + bytes([x])
            if suffix_legal(lead + ext, spec):
                rec(ext)

    rec(b"")
    return complete, instance


def _follower_proof_spec(pattern: GapPattern, spec: AvoidanceSpec) -> str | None:
    b, c, a = pattern.first, pattern.middle, pattern.last
    if _legal(bytes([b, c, a]), spec):
        return None
    followers = [d for d in range(spec.alphabet_size)
                 if _legal(bytes([c, d]), spec)]
    for d in followers:
        if _legal(bytes([b, d]), spec):
            return None
    return (f"{b}{c}{a} illegal; followers of {c} are "
            f"{{{','.join(str(d) for d in followers)}}} and none may follow {b}")


def _follower_proof_fixed_point(pattern: GapPattern,
                                fixed_point: FixedPoint) -> str | None:
    m, seed = fixed_point
    b, c, a = pattern.first, pattern.middle, pattern.last
    if bytes([b, c, a]) in exact_factors(m, seed, 3):
        return None
    pairs = pair_closure(m, seed)
    followers = [d for d in sorted(letter_closure(m, seed))
                 if bytes([c, d]) in pairs]
    for d in followers:
        if bytes([b, d]) in pairs:
            return None
    return (f"{b}{c}{a} not a factor; factor followers of {c} are "
            f"{{{','.join(str(d) for d in followers)}}} and none follows {b}")


def _pattern_in_exact_factors(pattern: GapPattern, fixed_point: FixedPoint,
                              gap: int) -> bool:
    m, seed = fixed_point
    n = 2 * gap + 3
    for f in exact_factors(m, seed, n):
        if (f[0] == pattern.first and f[gap + 1] == pattern.middle
                and f[n - 1] == pattern.last
                and f[1:gap + 1] == f[gap + 2:n - 1]):
            return True
    return False


def _descent_proof(pattern: GapPattern, spec: AvoidanceSpec,
                   fixed_point: FixedPoint, base_bound: int) -> str | None:
    """Prove the pattern absent from the fixed point by block descent.

    For a large-gap occurrence, the middle letter sits at some phase i of
    some block x.  The gap then starts with the rest of that block and ends
    with the start of the next copy's block, so the words built from those
    affixes must be factors; when their phases are pinned, both copies of
    the gap parse into whole blocks and the occurrence pulls back to a
    strictly smaller occurrence of a (possibly different) pattern.  Small
    gaps are checked against the exact factor sets.
    """
    m, seed = fixed_point
    width = m.uniform_width
    if (width is None or width < 2 or m.source_size != m.target_size
            or not m.injective_on_letters):
        return None
    base = max(base_bound, width - 1)
    letters = sorted(letter_closure(m, seed))

    todo = [pattern]
    resolved: dict[GapPattern, list[str]] = {}
    while todo:
        pat = todo.pop()
        if pat in resolved:
            continue
        cases: list[str] = []
        resolved[pat] = cases
        for x in letters:
            img = m.image(x)
            for i in _find_all(img, bytes([pat.middle])):
                tag = f"(x={x},i={i})"
                before, after = img[:i], img[i + 1:]
                lead = bytes([pat.first]) + after
                trail = before + bytes([pat.last])
                if (not _legal(lead, spec)
                        or lead not in exact_factors(m, seed, len(lead))):
                    cases.append(f"{tag} lead {word_to_text(lead)} impossible")
                    continue
                if (not _legal(trail, spec)
                        or trail not in exact_factors(m, seed, len(trail))):
                    cases.append(f"{tag} trail {word_to_text(trail)} impossible")
                    continue
                if (_fixed_point_phases(m, seed, lead) != {i}
                        or _fixed_point_phases(m, seed, trail) != {0}):
                    return None
                ys = [y for y in letters if m.image(y)[i:] == lead]
                zs = [z for z in letters if m.image(z)[:i + 1] == trail]
                nxt = sorted((GapPattern(y, x, z) for y in ys for z in zs),
                             key=_pattern_key)
                for q in nxt:
                    todo.append(q)
                names = ",".join(
                    word_to_text(bytes([q.first, q.middle, q.last])) for q in nxt)
                cases.append(f"{tag} descends to {names or 'nothing'}")

    for pat in resolved:
        for gap in range(base):
            if _pattern_in_exact_factors(pat, fixed_point, gap):
                return None

    parts = []
    for pat in sorted(resolved, key=_pattern_key):
        name = word_to_text(bytes([pat.first, pat.middle, pat.last]))
        parts.append(f"{name}: " + "; ".join(resolved[pat]))
    return f"gaps < {base} absent by exact factors; " + " | ".join(parts)


def prove_gap_pattern_absence(pattern: GapPattern, spec: AvoidanceSpec,
                              fixed_point: FixedPoint | None = None,
                              base_bound: int = 12, exhaust_gap: int = 8,
                              scan_length: int = 100_000) -> GapEvidence:
    """Best available evidence that the pattern cannot occur.

    Tries, in order: a trivial square, the follower argument at spec level,
    the follower argument and block descent over the fixed point, a bounded
    exhaustive search (complete only when every branch dies early), and
    finally an empirical scan of a fixed point prefix.
    """
    if (spec.square_min_root == 1
            and (pattern.first == pattern.middle
                 or pattern.middle == pattern.last)):
        return GapEvidence(pattern, "trivial", "spec", True,
                           "pattern repeats a letter, forcing a square")
    detail = _follower_proof_spec(pattern, spec)
    if detail is not None:
        return GapEvidence(pattern, "follower", "spec", True, detail)
    if fixed_point is not None:
        detail = _follower_proof_fixed_point(pattern, fixed_point)
        if detail is not None:
            return GapEvidence(pattern, "follower", "fixed-point", True, detail)
        detail = _descent_proof(pattern, spec, fixed_point, base_bound)
        if detail is not None:
            return GapEvidence(pattern, "descent", "fixed-point", True, detail)
    complete, instance = _exhaustive_viability(pattern, spec, exhaust_gap)
    if instance is None and complete:
        return GapEvidence(pattern, "exhaustive", "spec", True,
                           f"every branch dies within gap {exhaust_gap}")
    if fixed_point is not None:
        m, seed = fixed_point
        prefix = fixed_point_prefix(m, seed, scan_length)
        occ = find_gap_occurrences(prefix, pattern)
        if occ:
            pos, gap = occ[0]
            return GapEvidence(pattern, "present", "fixed-point", False,
                               f"occurs at position {pos} with gap {gap}")
        return GapEvidence(pattern, "scan", "fixed-point", False,
                           f"absent from the first {len(prefix)} letters")
    return GapEvidence(pattern, "exhaustive", "spec", False,
                       f"only gaps <= {exhaust_gap} checked")


def refute_interchange(witness: InterchangeWitness, source: AvoidanceSpec,
                       gap_evidence: dict[GapPattern, GapEvidence],
                       classes: tuple[int, ...] | None = None) -> Refutation:
    """An interchange forces b..c..a with equal gaps in the source word, so
    evidence that the gap pattern is absent refutes it."""
    cls = classes or None
    a = _project(bytes([witness.a]), cls)[0]
    b = _project(bytes([witness.b]), cls)[0]
    c = _project(bytes([witness.c]), cls)[0]
    if a == c or b == c:
        return Refutation("trivial", "interchange letters collapse")
    pattern = GapPattern(b, c, a)
    evidence = gap_evidence.get(pattern)
    if evidence is not None and evidence.kind != "present":
        return Refutation(
            "gap-pattern-absent",
            f"pattern {b}{c}{a} ruled out by {evidence.kind}"
            f" ({evidence.scope} scope)")
    return Refutation("open", f"no evidence against pattern {b}{c}{a}")


# ---------------------------------------------------------------------------
# Bounded case and certificates.

def _image_violation(image: bytes, target: AvoidanceSpec,
                     root_cap: int) -> Violation | None:
    """First target violation with root at most root_cap.

    Longer roots are exactly what the inclusion and interchange analysis
    covers, so the bounded channel must not report them.
    """
    hit = scan_forbidden(image, target.forbidden)
    if hit is not None:
        return Violation("forbidden", hit[0], hit[1])
    if target.square_min_root is not None:
        occ = find_squares(image, target.square_min_root, root_cap)
        if occ:
            p, d = occ[0]
            return Violation("square", p, image[p:p + 2 * d], d)
    if target.square_whitelist is not None:
        allowed = set(target.square_whitelist)
        for p, d in find_squares(image, 1, root_cap):
            if image[p:p + 2 * d] not in allowed:
                return Violation("square", p, image[p:p + 2 * d], d)
    if target.cubefree:
        occ = find_cubes(image, 1, root_cap)
        if occ:
            p, d = occ[0]
            return Violation("cube", p, image[p:p + 3 * d], d)
    return None


def bounded_case_check(morphism: Morphism, source: AvoidanceSpec,
                       target: AvoidanceSpec, root_cap: int,
                       classes: tuple[int, ...] | None = None
                       ) -> BoundedCaseReport:
    """Check images of every legal source word long enough to contain any
    target violation of root at most root_cap."""
    width = morphism.uniform_width
    if width is None:
        raise ValueError("bounded case needs a uniform morphism")
    max_len = (2 * root_cap) // width + 2
    counts = [0] * (max_len + 1)
    violations: list[tuple[bytes, Violation]] = []
    checked = 0

    def rec(word: bytearray, projected: bytearray):
        nonlocal checked
        if word:
            counts[len(word)] += 1
            checked += 1
            bad = _image_violation(morphism.apply(bytes(word)), target, root_cap)
            if bad is not None:
                violations.append((bytes(word), bad))
                return
        if len(word) == max_len:
            return
        for letter in range(morphism.source_size):
            cls = letter if classes is None else classes[letter]
            projected.append(cls)
            if suffix_legal(bytes(projected), source):
                word.append(letter)
                rec(word, projected)
                word.pop()
            projected.pop()

    rec(bytearray(), bytearray())
    return BoundedCaseReport(max_len, checked, tuple(counts), tuple(violations))


@dataclass(frozen=True)
class TransferCertificate:
    """Everything checked while verifying one transfer statement."""

    name: str
    width: int
    depth: int
    root_cap: int
    source: AvoidanceSpec
    target: AvoidanceSpec
    classes: tuple[int, ...] | None
    bounded: BoundedCaseReport
    inclusions: tuple[tuple[InclusionWitness, Refutation], ...]
    equal_pair_inclusions: tuple[tuple[InclusionWitness, Refutation], ...]
    interchanges: tuple[tuple[InterchangeWitness, Refutation], ...]
    gap_evidence: tuple[GapEvidence, ...]
    residual: tuple[str, ...]
    notes: tuple[str, ...] = ()

    @property
    def complete(self) -> bool:
        return not self.residual

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "width": self.width,
            "depth": self.depth,
            "root_cap": self.root_cap,
            "source": format_spec(self.source),
            "target": format_spec(self.target),
            "classes": list(self.classes) if self.classes else None,
            "bounded": self.bounded.to_dict(),
            "inclusions": [{"witness": w.to_dict(), **r.to_dict()}
                           for w, r in self.inclusions],
            "equal_pair_inclusions": [{"witness": w.to_dict(), **r.to_dict()}
                                      for w, r in self.equal_pair_inclusions],
            "interchanges": [{"witness": w.to_dict(), **r.to_dict()}
                             for w, r in self.interchanges],
            "gap_evidence": [e.to_dict() for e in self.gap_evidence],
            "residual": list(self.residual),
            "notes": list(self.notes),
            "complete": self.complete,
        }


def verify_square_transfer(morphism: Morphism, source: AvoidanceSpec,
                           target: AvoidanceSpec, depth: int = 2,
                           root_cap: int | None = None,
                           fixed_point: FixedPoint | None = None,
                           name: str = "",
                           classes: tuple[int, ...] | None = None
                           ) -> TransferCertificate:
    """Verify that images of source-legal words satisfy the target spec."""
    width = morphism.uniform_width
    if width is None:
        raise ValueError("transfer verification needs a uniform morphism")
    if not morphism.injective_on_letters:
        raise ValueError("transfer verification needs distinct images")
    cap = 2 * width if root_cap is None else root_cap
    bounded = bounded_case_check(morphism, source, target, cap, classes)

    residual: list[str] = []
    notes: list[str] = []
    for w, v in bounded.violations:
        residual.append(f"bounded case: image of {word_to_text(w)}"
                        f" has {v.describe()}")

    def refuted(witnesses):
        out = []
        for wit in witnesses:
            r = refute_inclusion(morphism, wit, source, depth, classes)
            if r.method == "no-embedding":
                notes.append(f"inclusion ({wit.a},{wit.b})->{wit.c}"
                             f"@{wit.offset} refuted vacuously")
            if not r.ok:
                residual.append(f"inclusion ({wit.a},{wit.b})->{wit.c}"
                                f"@{wit.offset} unresolved")
            out.append((wit, r))
        return tuple(out)

    # The equal-pair channel stays unfiltered: those rows are refuted by the
    # pair check itself, which keeps the reason visible in the certificate.
    inclusions = refuted(find_inclusions(morphism, classes, "distinct", source))
    equal_pair = refuted(find_inclusions(morphism, classes, "equal"))

    interchanges = find_interchanges(morphism, classes)
    cls = classes or tuple(range(morphism.source_size))
    patterns = sorted({GapPattern(cls[w.b], cls[w.c], cls[w.a])
                       for w in interchanges}, key=_pattern_key)
    evidence = {p: prove_gap_pattern_absence(p, source, fixed_point)
                for p in patterns}
    checked = []
    for wit in interchanges:
        r = refute_interchange(wit, source, evidence, classes)
        if not r.ok:
            residual.append(f"interchange ({wit.a},{wit.b},{wit.c}) unresolved")
        checked.append((wit, r))
    for p in patterns:
        ev = evidence[p]
        if not ev.complete and ev.kind != "present":
            residual.append(f"gap pattern {word_to_text(bytes([p.first, p.middle, p.last]))}"
                            f" absence is empirical ({ev.kind})")

    return TransferCertificate(
        name=name, width=width, depth=depth, root_cap=cap,
        source=source, target=target, classes=classes,
        bounded=bounded, inclusions=inclusions,
        equal_pair_inclusions=equal_pair, interchanges=tuple(checked),
        gap_evidence=tuple(evidence[p] for p in patterns),
        residual=tuple(residual), notes=tuple(notes))


def verify_substitution_transfer(sub: Substitution, source: AvoidanceSpec,
                                 target: AvoidanceSpec, depth: int = 2,
                                 root_cap: int | None = None,
                                 fixed_point: FixedPoint | None = None,
                                 name: str = "") -> TransferCertificate:
    """Verify a substitution by flattening alternate images to fresh letters
    that share their original letter's legality class."""
    annotated, classes = sub.to_annotated()
    return verify_square_transfer(annotated, source, target, depth=depth,
                                  root_cap=root_cap, fixed_point=fixed_point,
                                  name=name, classes=classes)
