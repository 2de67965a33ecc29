"""Uniform morphisms, fixed points, and substitutions with alternate images."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .words import ParseError, word_from_text, word_to_text


@dataclass(frozen=True)
class Morphism:
    """Letter-to-word map, applied by concatenating images."""

    source_size: int
    target_size: int
    images: tuple[bytes, ...]

    def __post_init__(self):
        if len(self.images) != self.source_size:
            raise ValueError("one image per source letter")
        for img in self.images:
            if any(b >= self.target_size for b in img):
                raise ValueError("image letter outside target alphabet")

    @property
    def uniform_width(self) -> int | None:
        widths = {len(img) for img in self.images}
        return widths.pop() if len(widths) == 1 else None

    @property
    def injective_on_letters(self) -> bool:
        return len(set(self.images)) == self.source_size

    def image(self, letter: int) -> bytes:
        return self.images[letter]

    def apply(self, word: bytes) -> bytes:
        try:
            return b"".join(self.images[a] for a in word)
        except IndexError:
            raise ValueError("word uses letters outside the source alphabet"
                             ) from None

    def is_prolongable(self, letter: int) -> bool:
        if not 0 <= letter < self.source_size:
            return False
        img = self.images[letter]
        return len(img) > 1 and img[0] == letter


def power(morphism: Morphism, n: int, word: bytes) -> bytes:
    """Apply a morphism from an alphabet to itself n times."""
    if morphism.source_size != morphism.target_size:
        raise ValueError("powers need matching alphabets")
    if n < 0:
        raise ValueError("negative power")
    for _ in range(n):
        word = morphism.apply(word)
    return word


class FixedPointStream:
    """Growing prefix of the fixed point of a morphism prolongable at `seed`.

    Each request extends an internal buffer by re-expanding only the source
    letters not yet covered, so successive prefixes cost amortized linear
    time.  Streams are memoized per (morphism, seed); use `fixed_point_prefix`
    unless you need to hold the stream itself.
    """

    def __init__(self, morphism: Morphism, seed: int):
        if morphism.source_size != morphism.target_size:
            raise ValueError("fixed points need matching alphabets")
        if not morphism.is_prolongable(seed):
            raise ValueError(f"morphism is not prolongable at {seed}")
        self.morphism = morphism
        self.seed = seed
        self._buf = bytearray(morphism.image(seed))
        self._expanded = 1  # letters of the buffer already pushed through

    def prefix(self, length: int) -> bytes:
        while len(self._buf) < length:
            if self._expanded >= len(self._buf):
                raise ValueError("morphism erases letters; fixed point is finite")
            a = self._buf[self._expanded]
            self._expanded += 1
            self._buf.extend(self.morphism.image(a))
        return bytes(self._buf[:length])


_streams: dict[tuple[Morphism, int], FixedPointStream] = {}


def fixed_point_prefix(morphism: Morphism, seed: int, length: int) -> bytes:
    """First `length` letters of the fixed point starting at `seed`."""
    key = (morphism, seed)
    stream = _streams.get(key)
    if stream is None:
        stream = _streams[key] = FixedPointStream(morphism, seed)
    return stream.prefix(length)


@dataclass(frozen=True)
class Substitution:
    """Morphism whose letters may each carry several alternate images."""

    source_size: int
    target_size: int
    image_sets: tuple[tuple[bytes, ...], ...]

    def __post_init__(self):
        if len(self.image_sets) != self.source_size:
            raise ValueError("one image set per source letter")
        for choices in self.image_sets:
            if not choices:
                raise ValueError("every letter needs at least one image")
            for img in choices:
                if any(b >= self.target_size for b in img):
                    raise ValueError("image letter outside target alphabet")

    @property
    def uniform_width(self) -> int | None:
        widths = {len(img) for choices in self.image_sets for img in choices}
        return widths.pop() if len(widths) == 1 else None

    def base_morphism(self) -> Morphism:
        """The morphism taking the first listed image of every letter."""
        return Morphism(self.source_size, self.target_size,
                        tuple(choices[0] for choices in self.image_sets))

    def count_images(self, word: bytes) -> int:
        count = 1
        for a in word:
            count *= len(self.image_sets[a])
        return count

    def iter_images(self, word: bytes, cap: int = 1 << 20):
        """All images of `word`, in lexicographic choice order."""
        if self.count_images(word) > cap:
            raise ValueError("image family larger than cap")
        pools = [self.image_sets[a] for a in word]
        for picks in itertools.product(*pools):
            yield b"".join(picks)

    def sample_image(self, word: bytes, seed: int) -> bytes:
        """One image of `word`, choices drawn from a fresh seeded generator."""
        rng = random.Random(seed)
        return b"".join(rng.choice(self.image_sets[a]) for a in word)

    def to_annotated(self) -> tuple[Morphism, tuple[int, ...]]:
        """Flatten to a plain morphism over an alphabet of (letter, choice) ids.

        Ids 0..source_size-1 keep each letter's first image; extra choices get
        fresh ids in (letter, choice) order.  Returns the morphism and the map
        from new id back to the underlying letter.
        """
        images = [choices[0] for choices in self.image_sets]
        classes = list(range(self.source_size))
        for letter, choices in enumerate(self.image_sets):
            for img in choices[1:]:
                images.append(img)
                classes.append(letter)
        return (Morphism(len(images), self.target_size, tuple(images)),
                tuple(classes))


def parse_morphism(text: str) -> Morphism:
    images = _parse_image_lines(text, allow_choices=False)
    flat = tuple(choices[0] for choices in images)
    target = max((max(img) for img in flat if img), default=-1) + 1
    return Morphism(len(flat), target, flat)


def parse_substitution(text: str) -> Substitution:
    images = _parse_image_lines(text, allow_choices=True)
    target = max((max(img) for choices in images for img in choices if img),
                 default=-1) + 1
    return Substitution(len(images), target, tuple(images))


def _parse_image_lines(text: str, allow_choices: bool) -> list[tuple[bytes, ...]]:
    entries: dict[int, tuple[bytes, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError(f"line {lineno}: expected `letter -> image`")
        lhs, rhs = line.split("->", 1)
        try:
            letter = int(lhs.strip())
        except ValueError:
            raise ParseError(f"line {lineno}: bad letter {lhs.strip()!r}") from None
        choices = tuple(word_from_text(part) for part in rhs.split(","))
        if len(choices) > 1 and not allow_choices:
            raise ParseError(f"line {lineno}: alternate images not allowed here")
        if letter in entries:
            raise ParseError(f"line {lineno}: duplicate letter {letter}")
        entries[letter] = choices
    if sorted(entries) != list(range(len(entries))):
        raise ParseError("letters must cover 0..k-1")
    return [entries[a] for a in range(len(entries))]


def format_morphism(morphism: Morphism) -> str:
    lines = [f"{a} -> {word_to_text(img)}" for a, img in enumerate(morphism.images)]
    return "\n".join(lines) + "\n"


def format_substitution(sub: Substitution) -> str:
    lines = []
    for a, choices in enumerate(sub.image_sets):
        lines.append(f"{a} -> " + ", ".join(word_to_text(img) for img in choices))
    return "\n".join(lines) + "\n"
