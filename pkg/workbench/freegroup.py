"""Reduced words in the free group F_m over the symmetric alphabet X.

Letters are ordered a_1 < a_1^-1 < a_2 < a_2^-1 < ... and words shortlex in
that order, so every set of words the workbench emits has one canonical
enumeration order.
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, NamedTuple

from .conf import resolve_cap
from .exceptions import AlphabetMismatch, ParseError, ResourceCapExceeded

logger = logging.getLogger(__name__)

ALPHABET = 'abcdefghijklmnopqrstuvwxyz'
MAX_RANK = len(ALPHABET)


class Letter(NamedTuple):
    generator_index: int
    inverted: bool = False

    def inverse(self):
        return Letter(self.generator_index, not self.inverted)

    @property
    def symbol(self):
        char = ALPHABET[self.generator_index]
        return char.upper() if self.inverted else char

    def __str__(self):
        return self.symbol


def alphabet(rank):
    """The symmetric generating set X of F_rank in canonical order."""
    _check_rank(rank)
    return tuple(Letter(i, inverted) for i in range(rank) for inverted in (False, True))


def _check_rank(rank):
    if not 1 <= rank <= MAX_RANK:
        raise AlphabetMismatch(f"rank must be between 1 and {MAX_RANK}, got {rank}")


@total_ordering
@dataclass(frozen=True)
class FreeWord:
    rank: int
    letters: tuple = ()

    def __post_init__(self):
        _check_rank(self.rank)
        letters = tuple(Letter(*letter) for letter in self.letters)
        object.__setattr__(self, 'letters', letters)
        for position, letter in enumerate(letters):
            if not 0 <= letter.generator_index < self.rank:
                raise AlphabetMismatch(
                    f"letter {letter.generator_index} outside alphabet of rank {self.rank}")
            if position and letters[position - 1] == letter.inverse():
                raise ValueError(f"word is not freely reduced at position {position}")

    @classmethod
    def _reduced(cls, rank, letters):
        # Callers guarantee letters are in range and freely reduced.
        word = object.__new__(cls)
        object.__setattr__(word, 'rank', rank)
        object.__setattr__(word, 'letters', letters)
        return word

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __lt__(self, other):
        if not isinstance(other, FreeWord):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __mul__(self, other):
        return multiply(self, other)

    def __invert__(self):
        return invert(self)

    @property
    def sort_key(self):
        return (len(self.letters), self.letters)

    @property
    def is_identity(self):
        return not self.letters

    @property
    def text(self):
        """Compact syntax: lowercase generator, uppercase inverse, '1' for the identity."""
        if not self.letters:
            return '1'
        return ''.join(letter.symbol for letter in self.letters)

    @property
    def pretty(self):
        if not self.letters:
            return 'ε'
        chunks = []
        run = ''
        for letter in self.letters:
            if letter.inverted:
                if run:
                    chunks.append(run)
                    run = ''
                chunks.append(ALPHABET[letter.generator_index] + '⁻¹')
            else:
                run += letter.symbol
        if run:
            chunks.append(run)
        return ' '.join(chunks)

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"FreeWord({self.text!r}, rank={self.rank})"


def identity(rank):
    _check_rank(rank)
    return FreeWord._reduced(rank, ())


def reduce(letters: Iterable, rank):
    """Freely reduce a letter sequence with a single stack pass."""
    _check_rank(rank)
    stack = []
    for raw in letters:
        letter = Letter(*raw)
        if not 0 <= letter.generator_index < rank:
            raise AlphabetMismatch(
                f"letter {letter.generator_index} outside alphabet of rank {rank}")
        if stack and stack[-1] == letter.inverse():
            stack.pop()
        else:
            stack.append(letter)
    return FreeWord._reduced(rank, tuple(stack))


def _same_alphabet(u, v):
    if u.rank != v.rank:
        raise AlphabetMismatch(f"words over F_{u.rank} and F_{v.rank} cannot be combined")


def multiply(u, v):
    _same_alphabet(u, v)
    left = u.letters
    right = v.letters
    # Only the seam between two reduced words can cancel.
    cancelled = 0
    limit = min(len(left), len(right))
    while cancelled < limit and left[-1 - cancelled] == right[cancelled].inverse():
        cancelled += 1
    return FreeWord._reduced(u.rank, left[:len(left) - cancelled] + right[cancelled:])


def multiply_all(words, rank):
    result = identity(rank)
    for word in words:
        result = multiply(result, word)
    return result


def invert(w):
    return FreeWord._reduced(w.rank, tuple(letter.inverse() for letter in reversed(w.letters)))


def generator_word(letter, rank):
    return FreeWord._reduced(rank, (Letter(*letter),))


def parse_word(text, rank=None):
    """Parse "abA" style text; rank defaults to the largest generator used."""
    text = text.strip()
    if text in ('', '1', 'e', 'ε'):
        if rank is None:
            rank = 1
        return identity(rank)
    letters = []
    for offset, char in enumerate(text):
        lowered = char.lower()
        if lowered not in ALPHABET or not char.isalpha() or not char.isascii():
            raise ParseError(f"unexpected character {char!r} in word {text!r}", offset)
        letters.append(Letter(ALPHABET.index(lowered), char.isupper()))
    needed = max(letter.generator_index for letter in letters) + 1
    if rank is None:
        rank = needed
    elif needed > rank:
        raise AlphabetMismatch(f"word {text!r} uses generator {ALPHABET[needed - 1]} beyond rank {rank}")
    return reduce(letters, rank)


# Balls

@dataclass(frozen=True)
class Ball:
    rank: int
    radius: int
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, '_members', frozenset(self.elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, word):
        return word in self._members

    def punctured(self):
        """The elements other than the identity, in enumeration order."""
        return tuple(word for word in self.elements if word.letters)


def ball_size(rank, radius):
    """|B_r| in F_rank: 1 + 2m * sum_{k<r} (2m-1)^k."""
    if radius <= 0:
        return 1
    branching = 2 * rank - 1
    return 1 + 2 * rank * sum(branching ** k for k in range(radius))


def ball(rank, radius, cap=None):
    """All reduced words of length <= radius, in shortlex order.

    Extensions never append the inverse of the last letter, so every word
    is generated reduced and exactly once.
    """
    _check_rank(rank)
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    cap = resolve_cap(cap, 'BALL_CAP')
    size = ball_size(rank, radius)
    if size > cap:
        raise ResourceCapExceeded('BALL_CAP', cap, size)

    letters = alphabet(rank)
    elements = [identity(rank)]
    frontier = deque(elements)
    while frontier:
        word = frontier.popleft()
        if len(word) == radius:
            continue
        last = word.letters[-1] if word.letters else None
        for letter in letters:
            if last is not None and letter == last.inverse():
                continue
            extended = FreeWord._reduced(rank, word.letters + (letter,))
            elements.append(extended)
            frontier.append(extended)
    logger.debug("enumerated ball of radius %d in F_%d: %d words", radius, rank, len(elements))
    return Ball(rank, radius, tuple(elements))
