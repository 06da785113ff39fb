"""Finitely supported elements of the group algebra, with exact coefficients.

Coefficients are Gaussian rationals a + bi. An element is a sparse map from
group elements (free words, or permutations in a finite quotient) to
nonzero coefficients; zero coefficients are never stored.
"""
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from sympy.combinatorics import Permutation

from . import freegroup
from .exceptions import AlphabetMismatch, ParseError
from .freegroup import FreeWord
from .groups import apply_hom, identity_permutation

logger = logging.getLogger(__name__)


# Coefficients

_COEFFICIENT = re.compile(
    r"""^\s*(?:
        \(\s*(?P<re>[-+]?\d+(?:/\d+)?)\s*(?P<sign>[-+])\s*(?P<im>\d+(?:/\d+)?)?\s*i\s*\)
      | (?P<imag>[-+]?(?:\d+(?:/\d+)?)?)\s*i
      | (?P<real>[-+]?\d+(?:/\d+)?)
    )\s*$""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Coefficient:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 're', Fraction(self.re))
        object.__setattr__(self, 'im', Fraction(self.im))

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, complex):
            raise TypeError("complex floats are not exact; pass Fractions")
        return cls(Fraction(value))

    @classmethod
    def parse(cls, text):
        match = _COEFFICIENT.match(text)
        if not match:
            raise ParseError(f"cannot read coefficient {text!r}", 0)
        if match.group('real') is not None:
            return cls(Fraction(match.group('real')))
        if match.group('imag') is not None:
            imag = match.group('imag')
            if imag in ('', '+'):
                imag = '1'
            elif imag == '-':
                imag = '-1'
            return cls(0, Fraction(imag))
        imag = Fraction(match.group('im') or 1)
        if match.group('sign') == '-':
            imag = -imag
        return cls(Fraction(match.group('re')), imag)

    @property
    def is_zero(self):
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero

    def __add__(self, other):
        other = Coefficient.coerce(other)
        return Coefficient(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = Coefficient.coerce(other)
        return Coefficient(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Coefficient.coerce(other) - self

    def __mul__(self, other):
        other = Coefficient.coerce(other)
        return Coefficient(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __neg__(self):
        return Coefficient(-self.re, -self.im)

    def conjugate(self):
        return Coefficient(self.re, -self.im)

    def norm_squared(self):
        return self.re * self.re + self.im * self.im

    def l1(self):
        """|a| + |b|, an upper bound for the modulus."""
        return abs(self.re) + abs(self.im)

    def modulus_bounds(self):
        """(lower, upper) with lower <= |a+bi| <= upper; equal whenever the modulus is rational."""
        if not self.im:
            return abs(self.re), abs(self.re)
        if not self.re:
            return abs(self.im), abs(self.im)
        exact = _rational_sqrt(self.norm_squared())
        if exact is not None:
            return exact, exact
        return max(abs(self.re), abs(self.im)), self.l1()

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = '+' if self.im > 0 else '-'
        return f"({self.re}{sign}{abs(self.im)}i)"

    def as_dict(self):
        return {'re': str(self.re), 'im': str(self.im)}


def _rational_sqrt(value):
    numerator = math.isqrt(value.numerator)
    denominator = math.isqrt(value.denominator)
    if numerator * numerator == value.numerator and denominator * denominator == value.denominator:
        return Fraction(numerator, denominator)
    return None


ZERO = Coefficient()
ONE = Coefficient(1)


# Group contexts

@dataclass(frozen=True)
class FreeContext:
    rank: int
    kind = 'free'

    @property
    def identity(self):
        return freegroup.identity(self.rank)

    def multiply(self, a, b):
        return freegroup.multiply(a, b)

    def invert(self, a):
        return freegroup.invert(a)

    def validate(self, element):
        if not isinstance(element, FreeWord):
            raise TypeError(f"{element!r} is not a free word")
        if element.rank != self.rank:
            raise AlphabetMismatch(f"word over F_{element.rank} in an element of ℂF_{self.rank}")

    def sort_key(self, element):
        return element.sort_key

    def show(self, element):
        return element.text


@dataclass(frozen=True)
class PermutationContext:
    degree: int
    kind = 'quotient'

    @property
    def identity(self):
        return identity_permutation(self.degree)

    def multiply(self, a, b):
        return a * b

    def invert(self, a):
        return ~a

    def validate(self, element):
        if not isinstance(element, Permutation):
            raise TypeError(f"{element!r} is not a permutation")
        if element.size != self.degree:
            raise AlphabetMismatch(f"permutation of degree {element.size} in a degree-{self.degree} context")

    def sort_key(self, element):
        return tuple(element.array_form)

    def show(self, element):
        return str(list(element.array_form))


def context_of(element):
    """The context a bare group element naturally lives in."""
    if isinstance(element, FreeWord):
        return FreeContext(element.rank)
    return PermutationContext(element.size)


# Elements

class AlgebraElement:
    __slots__ = ('context', '_terms', '_hash')

    def __init__(self, context, terms=()):
        self.context = context
        accumulated = {}
        items = terms.items() if hasattr(terms, 'items') else terms
        for element, value in items:
            context.validate(element)
            value = Coefficient.coerce(value)
            if value.is_zero:
                continue
            total = accumulated.get(element, ZERO) + value
            if total.is_zero:
                accumulated.pop(element, None)
            else:
                accumulated[element] = total
        self._terms = accumulated
        self._hash = None

    @classmethod
    def _trusted(cls, context, terms):
        element = object.__new__(cls)
        element.context = context
        element._terms = terms
        element._hash = None
        return element

    @classmethod
    def delta(cls, context, group_element, coefficient=ONE):
        return cls(context, {group_element: coefficient})

    @classmethod
    def zero(cls, context):
        return cls._trusted(context, {})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        """Terms in canonical order of the group elements."""
        return sorted(self._terms.items(), key=lambda item: self.context.sort_key(item[0]))

    @property
    def support(self):
        return tuple(element for element, _ in self.items())

    def __getitem__(self, group_element):
        return self._terms.get(group_element, ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self):
        return not self._terms

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.context != self.context:
            raise AlphabetMismatch(f"elements of different algebras: {self.context} and {other.context}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        _accumulate(terms, other._terms.items(), ONE)
        return AlgebraElement._trusted(self.context, terms)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        _accumulate(terms, other._terms.items(), -ONE)
        return AlgebraElement._trusted(self.context, terms)

    def __neg__(self):
        return AlgebraElement._trusted(self.context, {g: -c for g, c in self._terms.items()})

    def scale(self, coefficient):
        coefficient = Coefficient.coerce(coefficient)
        if coefficient.is_zero:
            return AlgebraElement.zero(self.context)
        return AlgebraElement._trusted(self.context, {g: c * coefficient for g, c in self._terms.items()})

    def __mul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.context == other.context and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.context, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        if not self._terms:
            return '0'
        parts = []
        for element, coefficient in self.items():
            parts.append(f"{coefficient}*δ[{self.context.show(element)}]")
        return ' + '.join(parts)

    def __repr__(self):
        return f"AlgebraElement({self})"


def _accumulate(terms, items, factor):
    for element, value in items:
        total = terms.get(element, ZERO) + value * factor
        if total.is_zero:
            terms.pop(element, None)
        else:
            terms[element] = total


def delta(group_element, coefficient=ONE, context=None):
    """Point mass at a group element, in its natural context unless given."""
    context = context or context_of(group_element)
    return AlgebraElement.delta(context, group_element, coefficient)


def element_sum(elements, context):
    terms = {}
    for element in elements:
        if element.context != context:
            raise AlphabetMismatch(f"elements of different algebras: {element.context} and {context}")
        _accumulate(terms, element._terms.items(), ONE)
    return AlgebraElement._trusted(context, terms)


def convolve(f, g):
    """(f*g)(t) = sum over uv = t of f(u) g(v)."""
    if not isinstance(g, AlgebraElement):
        return NotImplemented
    if f.context != g.context:
        raise AlphabetMismatch(f"cannot convolve elements of {f.context} and {g.context}")
    multiply = f.context.multiply
    terms = {}
    for u, a in f._terms.items():
        for v, b in g._terms.items():
            product = multiply(u, v)
            total = terms.get(product, ZERO) + a * b
            if total.is_zero:
                terms.pop(product, None)
            else:
                terms[product] = total
    return AlgebraElement._trusted(f.context, terms)


def left_translate(group_element, f):
    """delta_t * f."""
    multiply = f.context.multiply
    return AlgebraElement._trusted(f.context, {multiply(group_element, s): c for s, c in f._terms.items()})


def conjugate(f, t):
    """f^t = delta_t * f * delta_{t^-1}: support moved by s -> t s t^-1."""
    context = f.context
    context.validate(t)
    t_inverse = context.invert(t)
    return AlgebraElement._trusted(
        context, {context.multiply(context.multiply(t, s), t_inverse): c for s, c in f._terms.items()})


def augmentation(f):
    total = ZERO
    for value in f._terms.values():
        total = total + value
    return total


@dataclass(frozen=True)
class NormBound:
    lower: Fraction
    upper: Fraction

    @property
    def is_exact(self):
        return self.lower == self.upper

    def __str__(self):
        if self.is_exact:
            return str(self.lower)
        return f"[{self.lower}, {self.upper}]"

    def as_dict(self):
        return {'lower': str(self.lower), 'upper': str(self.upper), 'exact': self.is_exact}


def weighted_norm(f, weight):
    """||f||_omega = sum |f(t)| omega(t), bracketed when a modulus is irrational."""
    lower = Fraction(0)
    upper = Fraction(0)
    for element, coefficient in f._terms.items():
        value = weight(element)
        low, high = coefficient.modulus_bounds()
        lower += low * value
        upper += high * value
    return NormBound(lower, upper)


def l1_weighted_norm(f, weight):
    """sum (|a|+|b|) omega(t); a rational upper bound that is subadditive term by term."""
    return sum((c.l1() * weight(g) for g, c in f._terms.items()), Fraction(0))


def coset_sums(f, sub):
    """Sums of f over each left coset tH, keyed by transversal position."""
    if not isinstance(f.context, FreeContext) or f.context.rank != sub.rank:
        raise AlphabetMismatch(f"element of {f.context} cannot be summed over cosets in F_{sub.rank}")
    sums = {position: ZERO for position in range(sub.index)}
    for element, coefficient in f._terms.items():
        position = sub.coset_index(element)
        sums[position] = sums[position] + coefficient
    return sums


def push_forward(f, hom):
    """q(f)(x) = sum of f(s) over q(s) = x."""
    if not isinstance(f.context, FreeContext) or f.context.rank != hom.rank:
        raise AlphabetMismatch(f"element of {f.context} cannot be pushed along a hom from F_{hom.rank}")
    target = PermutationContext(hom.degree)
    terms = {}
    _accumulate(terms, ((apply_hom(hom, s), c) for s, c in f._terms.items()), ONE)
    return AlgebraElement._trusted(target, terms)
