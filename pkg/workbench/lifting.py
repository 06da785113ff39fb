"""Lifting left ideals from a normal subgroup to the whole group, on finite models.

For a finite group G, a normal subgroup H with left transversal t_1, ..., t_n
and a left ideal I of CH, the family { delta_{t_i} * b : b in I } spans a left
ideal J of CG with codim J = [G:H] codim I. Everything is checked by exact
rank computations over Q(i).
"""
import logging
from dataclasses import dataclass

from . import linalg
from .algebra import AlgebraElement, PermutationContext, conjugate, convolve, element_sum
from .exceptions import NotNormal, SupportEscapesSubgroup, UnknownName, VerificationError
from .freegroup import alphabet
from .groups import Kernel, builtin_hom, preimage_mode, quotient_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteModel:
    table: object
    subgroup: tuple
    transversal: tuple
    name: str = ''

    @property
    def context(self):
        return PermutationContext(self.table.hom.degree)

    @property
    def order(self):
        return self.table.order

    @property
    def index(self):
        return len(self.transversal)

    @property
    def elements(self):
        return self.table.elements

    def in_subgroup(self, g):
        return g in self._members

    def __post_init__(self):
        object.__setattr__(self, '_members', frozenset(self.subgroup))

    def coset_of(self, g):
        """Position i with g in t_i H."""
        for position, t in enumerate(self.transversal):
            if (~t) * g in self._members:
                return position
        raise VerificationError(f"{g.array_form} lies in no listed coset")

    @property
    def is_normal(self):
        generators = [self.table.hom.letter_image(letter) for letter in alphabet(self.table.hom.rank)]
        return all(x * h * ~x in self._members for x in generators for h in self.subgroup)

    def __str__(self):
        return self.name or f"finite model of order {self.order}, index {self.index}"


def finite_model(hom, mode=None, name='', order_cap=None):
    """G = image of hom, H = { g : mode.contains(g) }, transversal of shortest coset members."""
    mode = mode or Kernel()
    table = quotient_table(hom, order_cap)
    subgroup = tuple(g for g in table.elements if mode.contains(g))
    members = frozenset(subgroup)
    transversal = []
    for g in table.elements:
        if not any((~t) * g in members for t in transversal):
            transversal.append(g)
    return FiniteModel(table=table, subgroup=subgroup, transversal=tuple(transversal),
                       name=name or str(hom))


def builtin_model(name):
    """z4 (Z/4 over its Z/2), z6 (Z/6 over its Z/3) and sym3 (Sym(3) over Alt(3))."""
    if name == 'z4':
        hom = builtin_hom('cyclic:4')
        return finite_model(hom, preimage_mode([hom.generator_images[0] ** 2], 4), name='z4')
    if name == 'z6':
        hom = builtin_hom('cyclic:6')
        return finite_model(hom, preimage_mode([hom.generator_images[0] ** 2], 6), name='z6')
    if name == 'sym3':
        hom = builtin_hom('sym3')
        return finite_model(hom, preimage_mode([hom.generator_images[1]], 3), name='sym3')
    raise UnknownName(f"unknown finite model {name!r}; known: sym3, z4, z6")


FINITE_MODELS = ('z4', 'z6', 'sym3')


def _check_supported_on_subgroup(model, element):
    for g in element.support:
        if not model.in_subgroup(g):
            raise SupportEscapesSubgroup(f"{g.array_form} is in the support but not in H")


def left_ideal_basis(model, generators):
    """A basis of the left ideal of CH generated by the given elements."""
    spanning = [convolve(AlgebraElement.delta(model.context, h), b)
                for b in generators for h in model.subgroup]
    spanning = [element for element in spanning if element]
    return linalg.span_basis(spanning, model.subgroup)


@dataclass(frozen=True)
class LiftedIdeal:
    model: FiniteModel
    ideal_basis: tuple
    generators: tuple
    dim_I: int
    dim_J: int
    codim_I: int
    codim_J: int
    witnesses_checked: int
    witnesses_hold: bool
    quotient_basis: tuple
    quotient_basis_completes: bool

    @property
    def codimension_holds(self):
        return self.codim_J == self.model.index * self.codim_I

    @property
    def verified(self):
        return self.codimension_holds and self.witnesses_hold and self.quotient_basis_completes

    @property
    def elements(self):
        return tuple(element for _, _, element in self.generators)


def lift_ideal(model, ideal_generators):
    """J = span { delta_{t_i} * b : b in a basis of I }, with its left-ideal witnesses.

    For each generator image x and each i, x t_i = t_j v with v in H, and
    delta_x * delta_{t_i} * b is checked to equal delta_{t_j} * (delta_v * b)
    with delta_v * b back in I.
    """
    if not model.is_normal:
        raise NotNormal(f"H is not normal in {model}")
    for element in ideal_generators:
        _check_supported_on_subgroup(model, element)
    context = model.context
    basis = tuple(left_ideal_basis(model, ideal_generators))

    generators = tuple((position, b, convolve(AlgebraElement.delta(context, t), b))
                       for position, t in enumerate(model.transversal) for b in basis)
    elements = [element for _, _, element in generators]
    dim_I = len(basis)
    dim_J = linalg.rank(elements, model.elements)

    letters = alphabet(model.table.hom.rank)
    checked = 0
    hold = True
    for letter in letters:
        x = model.table.hom.letter_image(letter)
        for position, t in enumerate(model.transversal):
            target = model.coset_of(x * t)
            v = (~model.transversal[target]) * x * t
            for b in basis:
                checked += 1
                moved = convolve(AlgebraElement.delta(context, v), b)
                left = convolve(AlgebraElement.delta(context, x),
                                convolve(AlgebraElement.delta(context, t), b))
                right = convolve(AlgebraElement.delta(context, model.transversal[target]), moved)
                in_ideal = linalg.solve_in_span(basis, moved, model.subgroup) is not None
                if left != right or not in_ideal:
                    hold = False

    # complete a basis of I to one of CH with point masses
    quotient_basis = []
    current = list(basis)
    for h in model.subgroup:
        candidate = AlgebraElement.delta(context, h)
        if linalg.rank(current + [candidate], model.subgroup) > len(current):
            current.append(candidate)
            quotient_basis.append(candidate)
    lifted = [convolve(AlgebraElement.delta(context, t), g)
              for t in model.transversal for g in quotient_basis]
    completes = (len(lifted) == model.index * len(quotient_basis)
                 and linalg.rank(elements + lifted, model.elements) == model.order)

    logger.debug("lifted ideal in %s: dim I = %d, dim J = %d", model, dim_I, dim_J)
    return LiftedIdeal(
        model=model,
        ideal_basis=basis,
        generators=generators,
        dim_I=dim_I,
        dim_J=dim_J,
        codim_I=len(model.subgroup) - dim_I,
        codim_J=model.order - dim_J,
        witnesses_checked=checked,
        witnesses_hold=hold,
        quotient_basis=tuple(quotient_basis),
        quotient_basis_completes=completes,
    )


def components(model, element):
    """a^(k) on H with a = sum_k delta_{t_k} * a^(k)."""
    parts = {position: [] for position in range(model.index)}
    for g, coefficient in element.terms.items():
        position = model.coset_of(g)
        parts[position].append(((~model.transversal[position]) * g, coefficient))
    return {position: AlgebraElement(model.context, terms) for position, terms in parts.items()}


@dataclass(frozen=True)
class SubgroupExpression:
    g: AlgebraElement
    terms: tuple
    identity_checked: bool = False


def extract_subgroup_expression(model, g, expression):
    """Rewrite g = sum_i h_i * f_i (f_i in J, g on H) over the components f_i^(k).

    For each k, k' is the coset with t_k^-1 H = t_k' H, and
    g = sum_k sum_i delta_{t_k' t_k} * (h_i^(k'))^(t_k^-1) * f_i^(k),
    where every coefficient is supported on H.
    """
    if not model.is_normal:
        raise NotNormal(f"H is not normal in {model}")
    _check_supported_on_subgroup(model, g)
    context = model.context
    given = element_sum((convolve(h, f) for h, f in expression), context)
    if given != g:
        raise VerificationError("the given expression does not reproduce g")

    split = [(components(model, h), components(model, f)) for h, f in expression]
    terms = []
    for k, t in enumerate(model.transversal):
        k_prime = model.coset_of(~t)
        shift = AlgebraElement.delta(context, model.transversal[k_prime] * t)
        for i, (h_parts, f_parts) in enumerate(split):
            h_part = h_parts[k_prime]
            f_part = f_parts[k]
            if not h_part or not f_part:
                continue
            coefficient = convolve(shift, conjugate(h_part, ~t))
            _check_supported_on_subgroup(model, coefficient)
            terms.append((k, i, coefficient, f_part))

    rebuilt = element_sum((convolve(c, f) for _, _, c, f in terms), context)
    if rebuilt != g:
        raise VerificationError("extracted expression does not reproduce g")
    return SubgroupExpression(g=g, terms=tuple(terms), identity_checked=True)
