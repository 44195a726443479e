"""Words in a free group of rank r.

A word is a tuple of nonzero signed generator indices; ``-i`` is the
inverse of generator ``i``.  Text form uses ``a, b, c, ...`` for the
generators and upper case for their inverses, so ``"aBA"`` is
``(1, -2, -1)``.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Word = tuple[int, ...]


def letters(rank: int) -> tuple[int, ...]:
    """All signed letters in the fixed label order ``1, -1, 2, -2, ...``."""
    return tuple(x for i in range(1, rank + 1) for x in (i, -i))


def free_reduce(w: Iterable[int]) -> Word:
    stack: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("0 is not a letter")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*ws: Sequence[int]) -> Word:
    return free_reduce(x for w in ws for x in w)


def conjugate(w: Sequence[int], g: Sequence[int]) -> Word:
    """``g w g^-1``, freely reduced."""
    return multiply(g, w, inverse(g))


def is_reduced(w: Sequence[int]) -> bool:
    return all(a != -b for a, b in zip(w, w[1:]))


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Split a reduced word as ``c . core . c^-1`` with ``core`` cyclically reduced.

    Returns ``(core, c)``.
    """
    w = free_reduce(w)
    k = 0
    while 2 * k + 1 < len(w) and w[k] == -w[len(w) - 1 - k]:
        k += 1
    return w[k : len(w) - k], w[:k]


def parse_word(text: str, rank: int = 2) -> Word:
    if rank < 1 or rank > 26:
        raise ValueError(f"rank {rank} out of range")
    out = []
    for ch in text.strip():
        if ch == "1" or ch.isspace():
            continue
        idx = string.ascii_lowercase.find(ch.lower())
        if idx < 0 or ch not in string.ascii_letters:
            raise ValueError(f"bad letter {ch!r} in {text!r}")
        if idx >= rank:
            raise ValueError(f"letter {ch!r} out of range for rank {rank}")
        out.append(idx + 1 if ch.islower() else -(idx + 1))
    return free_reduce(out)


def parse_words(text: str, rank: int = 2) -> list[Word]:
    """Comma separated list; empty entries are dropped."""
    return [parse_word(t, rank) for t in text.split(",") if t.strip()]


def format_word(w: Sequence[int]) -> str:
    return "".join(
        string.ascii_lowercase[x - 1] if x > 0 else string.ascii_uppercase[-x - 1] for x in w
    )


def check_letters(w: Sequence[int], rank: int) -> None:
    for x in w:
        if x == 0 or abs(x) > rank:
            raise ValueError(f"letter {x} out of range for rank {rank}")


def random_word(rng: random.Random, rank: int, length: int) -> Word:
    """Uniform reduced word of the given length."""
    alphabet = letters(rank)
    w: list[int] = []
    for _ in range(length):
        choices = [x for x in alphabet if not w or x != -w[-1]]
        w.append(rng.choice(choices))
    return tuple(w)


def reduced_words(rank: int, max_len: int) -> Iterator[Word]:
    """All reduced words up to ``max_len``, in shortlex order."""
    alphabet = letters(rank)
    level: list[Word] = [()]
    yield ()
    for _ in range(max_len):
        nxt = [w + (x,) for w in level for x in alphabet if not w or x != -w[-1]]
        yield from nxt
        level = nxt


@dataclass(frozen=True)
class Substitution:
    """Endomorphism of the free group given by the images of its generators."""

    images: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(free_reduce(w) for w in self.images))

    @classmethod
    def identity(cls, rank: int) -> Substitution:
        return cls(tuple((i,) for i in range(1, rank + 1)))

    @classmethod
    def parse(cls, text: str, rank: int = 2) -> Substitution:
        parts = text.split(",")
        if len(parts) != rank:
            raise ValueError(f"substitution needs {rank} images, got {len(parts)}")
        return cls(tuple(parse_word(p, rank) for p in parts))

    @property
    def rank(self) -> int:
        return len(self.images)

    def __call__(self, w: Sequence[int]) -> Word:
        out: list[int] = []
        for x in w:
            if abs(x) > self.rank:
                raise ValueError(f"letter {x} outside the substitution's domain")
            img = self.images[abs(x) - 1]
            out.extend(img if x > 0 else inverse(img))
        return free_reduce(out)

    def compose(self, other: Substitution) -> Substitution:
        """``self o other``: apply ``other`` first."""
        return Substitution(tuple(self(w) for w in other.images))

    def __str__(self) -> str:
        return ",".join(format_word(w) or "1" for w in self.images)


def apply_substitution(gens: Sequence[Sequence[int]], s: Substitution) -> list[Word]:
    return [s(w) for w in gens]
