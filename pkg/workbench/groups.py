"""Finite quotients of free groups given by generator images in Sym(d).

A word x_1...x_k maps to the sympy product sigma_{x_1} * ... * sigma_{x_k}
(sympy multiplies left to right: p*q applies p first), so permutations act
on points from the right. Finite-index subgroups are preimages: the kernel,
a point stabilizer, or the preimage of a subgroup of the image.
"""
import logging
from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache

from sympy.combinatorics import Permutation

from .conf import resolve_cap
from .exceptions import AlphabetMismatch, ResourceCapExceeded, UnknownName
from .freegroup import (
    FreeWord, alphabet, ball, generator_word, identity, invert, multiply, multiply_all,
)

logger = logging.getLogger(__name__)


def identity_permutation(degree):
    return Permutation(list(range(degree)))


def make_permutation(images):
    images = [int(point) for point in images]
    if sorted(images) != list(range(len(images))):
        raise ValueError(f"{images} is not a permutation of 0..{len(images) - 1}")
    return Permutation(images)


def cycle_permutation(degree, *cycles):
    """Permutation of the given degree from disjoint cycles, e.g. (0, 1, 2)."""
    images = list(range(degree))
    for cycle in cycles:
        for position, point in enumerate(cycle):
            images[point] = cycle[(position + 1) % len(cycle)]
    return make_permutation(images)


@dataclass(frozen=True)
class GroupHom:
    rank: int
    degree: int
    generator_images: tuple
    name: str = ''

    def __post_init__(self):
        images = tuple(self.generator_images)
        object.__setattr__(self, 'generator_images', images)
        if len(images) != self.rank:
            raise AlphabetMismatch(f"{len(images)} generator images given for rank {self.rank}")
        for image in images:
            if image.size != self.degree:
                raise ValueError(f"generator image {image.array_form} does not have degree {self.degree}")
        letter_images = {}
        for letter in alphabet(self.rank):
            image = images[letter.generator_index]
            letter_images[letter] = ~image if letter.inverted else image
        object.__setattr__(self, '_letter_images', letter_images)

    def letter_image(self, letter):
        return self._letter_images[letter]

    @property
    def identity(self):
        return identity_permutation(self.degree)

    def __str__(self):
        return self.name or f"F_{self.rank} -> Sym({self.degree})"


def apply_hom(hom, word):
    """Evaluate the homomorphism on a free word."""
    if word.rank != hom.rank:
        raise AlphabetMismatch(f"word over F_{word.rank} given to a hom from F_{hom.rank}")
    image = hom.identity
    for letter in word.letters:
        image = image * hom.letter_image(letter)
    return image


# Subgroup modes

@dataclass(frozen=True)
class Kernel:
    """H = ker q; always normal."""

    kind = 'kernel'

    def contains(self, image):
        return image.is_Identity

    def label(self, image):
        return image

    def describe(self):
        return 'kernel'


@dataclass(frozen=True)
class Stabilizer:
    """H = { w : point^q(w) = point }."""

    point: int
    kind = 'stabilizer'

    def contains(self, image):
        return image.array_form[self.point] == self.point

    def label(self, image):
        # tH is determined by point^(q(t)^-1)
        return image.array_form.index(self.point)

    def describe(self):
        return {'stabilizer': self.point}


@dataclass(frozen=True)
class Preimage:
    """H = q^-1(S) for a subgroup S of the image, stored as its element set."""

    generators: tuple
    elements: frozenset = field(default=frozenset(), compare=False)
    kind = 'preimage'

    def contains(self, image):
        return image in self.elements

    def label(self, image):
        return frozenset(image * element for element in self.elements)

    def describe(self):
        return {'preimage': [list(generator.array_form) for generator in self.generators]}


def preimage_mode(generators, degree, cap=None):
    """Close the given permutations into a subgroup of Sym(degree)."""
    cap = resolve_cap(cap, 'ORDER_CAP')
    generators = tuple(generators)
    start = identity_permutation(degree)
    seen = {start}
    frontier = deque([start])
    steps = [g for g in generators] + [~g for g in generators]
    while frontier:
        element = frontier.popleft()
        for step in steps:
            product = element * step
            if product not in seen:
                seen.add(product)
                if len(seen) > cap:
                    raise ResourceCapExceeded('ORDER_CAP', cap)
                frontier.append(product)
    return Preimage(generators, frozenset(seen))


@dataclass(frozen=True)
class FiniteIndexSubgroup:
    hom: GroupHom
    mode: object
    transversal: tuple
    labels: dict = field(compare=False, repr=False)
    schreier_gens: tuple = ()
    radius: int = None
    Y: tuple = ()

    @property
    def rank(self):
        return self.hom.rank

    @property
    def index(self):
        return len(self.transversal)

    def contains(self, word):
        return self.mode.contains(apply_hom(self.hom, word))

    def coset_index(self, word):
        """Position in the transversal of the left coset word*H."""
        return self.labels[self.mode.label(apply_hom(self.hom, word))]

    def representative(self, word):
        return self.transversal[self.coset_index(word)]

    @property
    def is_normal(self):
        if isinstance(self.mode, Kernel):
            return True
        gens = self.schreier_gens or schreier_generators(self)
        for letter in alphabet(self.rank):
            x = generator_word(letter, self.rank)
            for s in gens:
                if not self.contains(multiply_all((x, s, invert(x)), self.rank)):
                    return False
        return True

    def __str__(self):
        return f"index-{self.index} subgroup ({self.mode.kind}) of {self.hom}"


def subgroup_contains(sub, word):
    if word.rank != sub.rank:
        raise AlphabetMismatch(f"word over F_{word.rank} tested against a subgroup of F_{sub.rank}")
    return sub.contains(word)


def coset_transversal(hom, mode, cap=None):
    """Minimal-length left transversal by BFS over the coset graph.

    Neighbours are visited in canonical letter order, so ties go to the
    shortlex-least word. Returns a subgroup with only index and transversal
    populated.
    """
    cap = resolve_cap(cap, 'ORDER_CAP')
    start = identity(hom.rank)
    labels = {mode.label(hom.identity): 0}
    transversal = [start]
    frontier = deque([(start, hom.identity)])
    letters = alphabet(hom.rank)
    while frontier:
        word, image = frontier.popleft()
        for letter in letters:
            if word.letters and letter == word.letters[-1].inverse():
                continue
            extended_image = image * hom.letter_image(letter)
            label = mode.label(extended_image)
            if label in labels:
                continue
            if len(transversal) >= cap:
                raise ResourceCapExceeded('ORDER_CAP', cap)
            labels[label] = len(transversal)
            extended = multiply(word, generator_word(letter, hom.rank))
            transversal.append(extended)
            frontier.append((extended, extended_image))
    logger.debug("transversal for %s (%s): index %d", hom, mode.kind, len(transversal))
    return FiniteIndexSubgroup(hom=hom, mode=mode, transversal=tuple(transversal), labels=labels)


def schreier_generators(sub):
    """{ t x rep(tx)^-1 } minus the identity, reduced, in shortlex order."""
    gens = set()
    for t in sub.transversal:
        for letter in alphabet(sub.rank):
            tx = multiply(t, generator_word(letter, sub.rank))
            candidate = multiply(tx, invert(sub.representative(tx)))
            if candidate.letters:
                gens.add(candidate)
    return tuple(sorted(gens))


def ball_generating_set(sub, radius='auto', cap=None):
    """Y = punctured ball of the given radius intersected with H.

    'auto' takes the longest Schreier generator, so Y contains them all and
    therefore generates H.
    """
    if radius == 'auto':
        gens = sub.schreier_gens or schreier_generators(sub)
        radius = max((len(g) for g in gens), default=0)
    Y = tuple(w for w in ball(sub.rank, radius, cap).punctured() if sub.contains(w))
    return radius, Y


def build_subgroup(hom, mode=None, radius='auto', ball_cap=None, order_cap=None):
    """Transversal, Schreier generators and Y in one go."""
    sub = coset_transversal(hom, mode or Kernel(), cap=order_cap)
    sub = replace(sub, schreier_gens=schreier_generators(sub))
    radius, Y = ball_generating_set(sub, radius, cap=ball_cap)
    sub = replace(sub, radius=radius, Y=Y)
    logger.debug("subgroup %s: %d Schreier generators, |Y| = %d at r = %d",
                 sub, len(sub.schreier_gens), len(Y), radius)
    return sub


# Quotient tables

@dataclass(frozen=True)
class FiniteGroupTable:
    hom: GroupHom
    elements: tuple
    index: dict = field(compare=False, repr=False)
    lengths: tuple = ()
    words: tuple = ()
    neighbors: tuple = ()

    @property
    def order(self):
        return len(self.elements)

    @property
    def identity(self):
        return self.elements[0]

    def index_of(self, element):
        return self.index[element]

    def length_of(self, element):
        return self.lengths[self.index[element]]

    def word_of(self, element):
        """A minimal-length preimage (the BFS tree word)."""
        return self.words[self.index[element]]

    def __contains__(self, element):
        return element in self.index

    def __len__(self):
        return len(self.elements)


def quotient_table(hom, cap=None):
    """Closure of the generator images with word lengths from BFS.

    lengths[i] is the graph distance from the identity in the Cayley graph
    of the image with respect to the images of X.
    """
    cap = resolve_cap(cap, 'ORDER_CAP')
    letters = alphabet(hom.rank)
    start = hom.identity
    elements = [start]
    index = {start: 0}
    lengths = [0]
    words = [identity(hom.rank)]
    neighbors = []
    position = 0
    while position < len(elements):
        element = elements[position]
        row = []
        for letter in letters:
            product = element * hom.letter_image(letter)
            if product not in index:
                if len(elements) >= cap:
                    raise ResourceCapExceeded('ORDER_CAP', cap)
                index[product] = len(elements)
                elements.append(product)
                lengths.append(lengths[position] + 1)
                words.append(multiply(words[position], generator_word(letter, hom.rank)))
            row.append(index[product])
        neighbors.append(tuple(row))
        position += 1
    logger.debug("quotient table of %s: order %d", hom, len(elements))
    return FiniteGroupTable(
        hom=hom,
        elements=tuple(elements),
        index=index,
        lengths=tuple(lengths),
        words=tuple(words),
        neighbors=tuple(neighbors),
    )


# Grigorchuk group

GRIGORCHUK_STATES = ('a', 'b', 'c', 'd')

# state -> (swaps at the root, section on the 0-subtree, section on the 1-subtree)
GRIGORCHUK_RECURSION = {
    'a': (True, None, None),
    'b': (False, 'a', 'c'),
    'c': (False, 'a', 'd'),
    'd': (False, None, 'b'),
}


def _grigorchuk_level_arrays(level):
    # Leaves are L-bit integers, most significant bit at the top of the tree.
    arrays = {state: [0] for state in GRIGORCHUK_STATES}
    for depth in range(1, level + 1):
        half = 1 << (depth - 1)
        expanded = {}
        for state, (swaps, left, right) in GRIGORCHUK_RECURSION.items():
            images = []
            for leaf in range(2 * half):
                top, rest = divmod(leaf, half)
                section = right if top else left
                moved = arrays[section][rest] if section else rest
                new_top = 1 - top if swaps else top
                images.append(new_top * half + moved)
            expanded[state] = images
        arrays = expanded
    return arrays


def grigorchuk_level_hom(level, cap=None):
    """F_4 -> Sym(2^level): the action of a, b, c, d on the level-L leaves."""
    if level < 1:
        raise ValueError(f"level must be at least 1, got {level}")
    cap = resolve_cap(cap, 'ORDER_CAP')
    if 2 ** level > cap:
        raise ResourceCapExceeded('ORDER_CAP', cap, 2 ** level)
    return _grigorchuk_level_hom(level)


@lru_cache(maxsize=None)
def _grigorchuk_level_hom(level):
    arrays = _grigorchuk_level_arrays(level)
    images = tuple(make_permutation(arrays[state]) for state in GRIGORCHUK_STATES)
    return GroupHom(rank=4, degree=2 ** level, generator_images=images, name=f"grigorchuk:{level}")


QUOTIENT_FAMILIES = {
    'grigorchuk': grigorchuk_level_hom,
}


def quotient_family(name):
    try:
        return QUOTIENT_FAMILIES[name]
    except KeyError:
        raise UnknownName(f"unknown quotient family {name!r}; known: {sorted(QUOTIENT_FAMILIES)}") from None


def builtin_hom(name):
    """Named homomorphisms used by the CLI, the suites and the tests.

    even2        a, b -> (0 1)                 kernel = even-length words
    sym3         a -> (0 1), b -> (0 1 2)
    klein        a -> (0 1)(2 3), b -> (0 2)(1 3)
    cycle3       a -> (0 1 2), b -> id
    cyclic:n     a -> n-cycle (rank 1)
    trivial:m    F_m -> Sym(1)
    grigorchuk:L level-L action
    """
    family, _, argument = name.partition(':')
    if family == 'even2':
        swap = cycle_permutation(2, (0, 1))
        return GroupHom(2, 2, (swap, swap), name='even2')
    if family == 'sym3':
        return GroupHom(2, 3, (cycle_permutation(3, (0, 1)), cycle_permutation(3, (0, 1, 2))), name='sym3')
    if family == 'klein':
        return GroupHom(2, 4, (cycle_permutation(4, (0, 1), (2, 3)),
                               cycle_permutation(4, (0, 2), (1, 3))), name='klein')
    if family == 'cycle3':
        return GroupHom(2, 3, (cycle_permutation(3, (0, 1, 2)), identity_permutation(3)), name='cycle3')
    if family == 'cyclic' and argument.isdigit():
        n = int(argument)
        return GroupHom(1, n, (cycle_permutation(n, tuple(range(n))),), name=name)
    if family == 'trivial' and argument.isdigit():
        m = int(argument)
        return GroupHom(m, 1, tuple(identity_permutation(1) for _ in range(m)), name=name)
    if family in QUOTIENT_FAMILIES and argument.isdigit():
        return quotient_family(family)(int(argument))
    raise UnknownName(f"unknown group {name!r}")
