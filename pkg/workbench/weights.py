"""Weights omega: G -> Q, omega >= 1, omega(e) = 1, omega(st) <= omega(s) omega(t).

Values are exact rationals. Radial weights c^|t| work on free words and,
given a quotient table, on quotient elements; induced weights implement the
infimum over a coset only where it is computable.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from sympy.combinatorics import Permutation

from .conf import get_setting
from .exceptions import UncomputableInfimum, WeightError
from .freegroup import FreeWord, alphabet, multiply
from .groups import FiniteGroupTable, apply_hom, quotient_table

logger = logging.getLogger(__name__)


def parse_base(value):
    """Exact rational base > 1 from an int, Fraction or text like '3/2'."""
    if isinstance(value, float):
        raise WeightError(f"base {value!r} must be given exactly, not as a float")
    try:
        base = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise WeightError(f"base {value!r} is not an exact rational") from None
    if base <= 1:
        raise WeightError(f"radial base must exceed 1, got {base}")
    return base


def radial_eval(base, element, table=None):
    """c^length, where length is an int, a free word's length or a quotient length."""
    base = parse_base(base)
    if isinstance(element, int):
        length = element
    elif isinstance(element, FreeWord):
        length = len(element)
    elif isinstance(element, Permutation):
        if table is None:
            raise WeightError("a quotient element needs its table to have a word length")
        if element not in table:
            raise WeightError(f"{element.array_form} is not in the quotient {table.hom}")
        length = table.length_of(element)
    else:
        raise WeightError(f"cannot take the word length of {element!r}")
    return base ** length


class Weight:
    kind = 'weight'

    def __call__(self, element):
        raise NotImplementedError

    def describe(self):
        return {'kind': self.kind}


class RadialWeight(Weight):
    kind = 'radial'

    def __init__(self, base=None, table=None):
        self.base = parse_base(get_setting('DEFAULT_BASE') if base is None else base)
        self.table = table
        self._powers = {}

    def power(self, length):
        value = self._powers.get(length)
        if value is None:
            value = self._powers[length] = self.base ** length
        return value

    def __call__(self, element):
        if isinstance(element, FreeWord):
            return self.power(len(element))
        return radial_eval(self.base, element, self.table)

    def on_quotient(self, table):
        return RadialWeight(self.base, table)

    def describe(self):
        return {'kind': self.kind, 'base': str(self.base)}

    def __repr__(self):
        return f"RadialWeight(base={self.base})"


class TableWeight(Weight):
    """A weight given by its values on a finite group (or finite set of words)."""

    kind = 'table'

    def __init__(self, values, table=None):
        self.values = {element: Fraction(value) for element, value in values.items()}
        self.table = table

    def __call__(self, element):
        try:
            return self.values[element]
        except KeyError:
            raise WeightError(f"table weight has no value at {_show(element)}") from None

    def describe(self):
        return {'kind': self.kind, 'values': {_show(k): str(v) for k, v in self.values.items()}}


class RestrictedWeight(Weight):
    """gamma = omega|_H."""

    kind = 'restricted'

    def __init__(self, parent, sub):
        self.parent = parent
        self.sub = sub

    def __call__(self, element):
        if not self.sub.contains(element):
            raise WeightError(f"{_show(element)} is outside the subgroup {self.sub}")
        return self.parent(element)

    def describe(self):
        return {'kind': self.kind, 'parent': self.parent.describe(), 'subgroup': str(self.sub)}


class InducedWeight(Weight):
    """omega~(Nt) = inf { omega(st) : s in N } on the image of hom."""

    kind = 'induced'

    def __init__(self, parent, hom, table=None):
        self.parent = parent
        self.hom = hom
        self.table = table if table is not None else quotient_table(hom)
        if not isinstance(parent, (RadialWeight, TableWeight)):
            raise UncomputableInfimum(
                f"the infimum over a coset is not computable for a {parent.kind} weight")
        self._cache = {}

    def __call__(self, element):
        value = self._cache.get(element)
        if value is None:
            value = self._cache[element] = induced_eval(self.parent, self.hom, element, self.table)
        return value

    def describe(self):
        return {'kind': self.kind, 'parent': self.parent.describe(), 'group': str(self.hom)}


def induced_eval(parent, hom, coset_element, table=None):
    """Exact value of the induced weight at a quotient element.

    A radial parent attains the infimum at a minimal-length preimage, so the
    value is c^(quotient length). A table parent on a finite quotient through
    which hom factors gives a finite minimum over the fibre.
    """
    if isinstance(parent, RadialWeight):
        table = table if table is not None else quotient_table(hom)
        if coset_element not in table:
            raise WeightError(f"{coset_element.array_form} is not in the image of {hom}")
        return parent.power(table.length_of(coset_element))
    if isinstance(parent, TableWeight) and isinstance(parent.table, FiniteGroupTable):
        source = parent.table
        _check_factors(source, hom)
        fibre = [parent(element) for element, word in zip(source.elements, source.words)
                 if apply_hom(hom, word) == coset_element]
        if not fibre:
            raise WeightError(f"{coset_element.array_form} is not in the image of {hom}")
        return min(fibre)
    raise UncomputableInfimum(
        f"the infimum over a coset is not computable for a {parent.kind} weight; "
        "only radial parents and table weights on finite quotients are supported")


def _check_factors(source, hom):
    if source.hom.rank != hom.rank:
        raise WeightError(f"cannot induce from {source.hom} along {hom}: ranks differ")
    images = [apply_hom(hom, word) for word in source.words]
    letters = alphabet(hom.rank)
    for position, row in enumerate(source.neighbors):
        for letter, target in zip(letters, row):
            if images[target] != images[position] * hom.letter_image(letter):
                raise WeightError(f"{hom} does not factor through {source.hom}")


@dataclass
class WeightCheckReport:
    checked_pairs: int = 0
    violations: list = field(default_factory=list)
    axiom_failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations and not self.axiom_failures

    def as_dict(self):
        return {
            'checked_pairs': self.checked_pairs,
            'passed': self.passed,
            'axiom_failures': list(self.axiom_failures),
            'violations': [
                {'s': _show(s), 't': _show(t), 'omega_st': str(st), 'product': str(bound)}
                for s, t, st, bound in self.violations
            ],
        }


def check_submultiplicative(weight, domain):
    """Test omega(st) <= omega(s) omega(t) on every ordered pair of the domain.

    Symmetry omega(t) = omega(t^-1) is not an axiom and is not checked.
    """
    report = WeightCheckReport()
    if isinstance(domain, FiniteGroupTable):
        elements = domain.elements
        identity_element = domain.identity

        def product(s, t):
            return s * t
    else:
        elements = tuple(domain)
        identity_element = next((w for w in elements if not w.letters), None)
        product = multiply

    values = {element: weight(element) for element in elements}
    if identity_element is not None and values[identity_element] != 1:
        report.axiom_failures.append(f"omega(e) = {values[identity_element]}, not 1")
    for element, value in values.items():
        if value < 1:
            report.axiom_failures.append(f"omega({_show(element)}) = {value} < 1")

    for s in elements:
        ws = values[s]
        for t in elements:
            st = product(s, t)
            wst = values.get(st)
            if wst is None:
                wst = weight(st)
            bound = ws * values[t]
            report.checked_pairs += 1
            if wst > bound:
                report.violations.append((s, t, wst, bound))
    logger.debug("submultiplicativity: %d pairs, %d violations",
                 report.checked_pairs, len(report.violations))
    return report


def _show(element):
    if isinstance(element, Permutation):
        return str(list(element.array_form))
    return str(element)
