"""Generation certificates for coset-sum ideals, and separation by finite quotients.

Every construction here checks its defining identity by exact convolution
before returning, and raises VerificationError if it does not hold.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import (
    ONE, ZERO, AlgebraElement, Coefficient, FreeContext, PermutationContext, augmentation,
    coset_sums, delta, element_sum, l1_weighted_norm, left_translate, push_forward, weighted_norm,
)
from .conf import get_setting
from .exceptions import (
    AlphabetMismatch, AugmentationNonzero, CosetSumNonzero, NoSeparatingQuotient,
    NotInSubgroup, SupportEscapesSubgroup, VerificationError, ZeroElement,
)
from .factorization import y_geodesic_factorization
from .freegroup import identity, invert, multiply
from .groups import apply_hom, build_subgroup, quotient_family, quotient_table
from .weights import RadialWeight, RestrictedWeight

logger = logging.getLogger(__name__)


def prefix_norm_bound(base, length):
    """Upper bound for a sum of c^l over distinct l < length.

    For c >= 2 the sum stays below c^length; otherwise the geometric sum is
    the best uniform bound.
    """
    if base >= 2:
        return base ** length
    return (base ** length - 1) / (base - 1)


def _subgroup_weight(sub, base):
    return RestrictedWeight(RadialWeight(base), sub)


def _generator_differences(sub):
    context = FreeContext(sub.rank)
    e = identity(sub.rank)
    return {y: AlgebraElement(context, {e: ONE, y: -ONE}) for y in sub.Y}


def _recombine(coefficients, differences, context):
    return element_sum((coefficients[y] * differences[y] for y in coefficients), context)


# Telescoping certificates

@dataclass(frozen=True)
class PrefixNormBound:
    """Norm evidence for a certificate under the radial weight of the given base."""

    base: Fraction
    bound: Fraction
    norms: dict
    summand_norms: dict
    strictly_increasing: bool

    @property
    def holds(self):
        return self.strictly_increasing and all(norm <= self.bound for norm in self.norms.values())

    @property
    def largest_norm(self):
        return max(self.norms.values(), default=Fraction(0))


@dataclass(frozen=True)
class TelescopeCertificate:
    u: object
    factorization: object
    gens: dict
    summands: dict
    identity_checked: bool = False
    norm_bound: PrefixNormBound = None

    def g(self, y):
        return self.gens.get(y, AlgebraElement.zero(FreeContext(self.u.rank)))

    @property
    def used_generators(self):
        return tuple(sorted(self.gens))


def telescope_certificate(sub, u, factorization=None, base=None, cap=None):
    """delta_e - delta_u = sum_y g_y * (delta_e - delta_y) along a Y-factorization of u.

    g_y is the sum of the prefix point masses delta_{y_1...y_j} over the
    positions j with y_{j+1} = y. The norm bound is only recorded for a
    geodesic factorization.
    """
    if u.rank != sub.rank:
        raise AlphabetMismatch(f"{u.text} is a word over F_{u.rank}, not F_{sub.rank}")
    if not sub.contains(u):
        raise NotInSubgroup(f"{u.text} is not in {sub}")
    if factorization is None:
        factorization = y_geodesic_factorization(sub, u, cap)
    elif factorization.u != u:
        raise VerificationError(f"factorization is of {factorization.u.text}, not {u.text}")

    context = FreeContext(sub.rank)
    prefixes = factorization.prefixes()
    summands = {}
    for j, y in enumerate(factorization.factors):
        summands.setdefault(y, []).append(prefixes[j])
    # a non-geodesic factorization may revisit a prefix, so terms accumulate
    gens = {y: AlgebraElement(context, [(p, ONE) for p in words]) for y, words in summands.items()}

    differences = _generator_differences(sub)
    total = _recombine(gens, differences, context)
    target = AlgebraElement(context, {identity(sub.rank): ONE}) - delta(u)
    if total != target:
        raise VerificationError(f"telescoping identity fails for {u.text}")

    norm_bound = None
    if factorization.geodesic:
        base = RadialWeight(base).base
        weight = _subgroup_weight(sub, base)
        lengths = [len(p) for p in prefixes[:-1]]
        norm_bound = PrefixNormBound(
            base=base,
            bound=prefix_norm_bound(base, len(u)),
            norms={y: weighted_norm(g, weight).upper for y, g in gens.items()},
            summand_norms={y: tuple(weight(p) for p in words) for y, words in summands.items()},
            strictly_increasing=all(a < b for a, b in zip(lengths, lengths[1:])),
        )
    logger.debug("certificate for %s: %d factors, %d generators used",
                 u.text, factorization.n, len(gens))
    return TelescopeCertificate(
        u=u,
        factorization=factorization,
        gens={y: gens[y] for y in sorted(gens)},
        summands={y: tuple(summands[y]) for y in sorted(summands)},
        identity_checked=True,
        norm_bound=norm_bound,
    )


# Augmentation-zero elements on H

@dataclass(frozen=True)
class AugmentationDecomposition:
    f: AlgebraElement
    phi: dict
    certificates: tuple
    identity_checked: bool = False
    norms: dict = field(default_factory=dict)
    norm_bound: Fraction = None

    @property
    def bound_holds(self):
        if self.norm_bound is None:
            return None
        return all(norm <= self.norm_bound for norm in self.norms.values())


def _check_on_subgroup(sub, f):
    if not isinstance(f.context, FreeContext) or f.context.rank != sub.rank:
        raise AlphabetMismatch(f"element of {f.context} given for a subgroup of F_{sub.rank}")
    for s in f.support:
        if not sub.contains(s):
            raise SupportEscapesSubgroup(f"{s.text} is in the support but not in {sub}")


def decompose_augmentation(sub, f, base=None, cap=None):
    """f = sum_y phi_y * (delta_e - delta_y) for f on H with zero augmentation.

    Writing f = sum alpha_i delta_{u_i}, phi_y = -sum alpha_i g_y^(i) with the
    telescoping coefficients of each u_i. The recorded norms are the
    |re|+|im| weighted norms, which bound the true norms from above and are
    subadditive; the bound is the same quantity for f, scaled term by term
    when the base is below 2.
    """
    _check_on_subgroup(sub, f)
    total = augmentation(f)
    if total:
        raise AugmentationNonzero(f"augmentation is {total}, not 0")

    context = f.context
    base = RadialWeight(base).base
    weight = _subgroup_weight(sub, base)
    phi = {}
    certificates = []
    norm_bound = Fraction(0)
    for u, alpha in f.items():
        norm_bound += alpha.l1() * prefix_norm_bound(base, len(u))
        if u.is_identity:
            continue
        certificate = telescope_certificate(sub, u, base=base, cap=cap)
        certificates.append(certificate)
        for y, g in certificate.gens.items():
            term = g.scale(-alpha)
            phi[y] = phi[y] + term if y in phi else term
    phi = {y: phi[y] for y in sorted(phi) if phi[y]}

    differences = _generator_differences(sub)
    if _recombine(phi, differences, context) != f:
        raise VerificationError("augmentation decomposition does not reproduce f")
    geodesic = all(c.factorization.geodesic for c in certificates)
    logger.debug("decomposed element with %d terms over %d generators", len(f), len(phi))
    return AugmentationDecomposition(
        f=f,
        phi=phi,
        certificates=tuple(certificates),
        identity_checked=True,
        norms={y: l1_weighted_norm(element, weight) for y, element in phi.items()},
        norm_bound=norm_bound if geodesic else None,
    )


# Elements of J(G, H)

@dataclass(frozen=True)
class JExpression:
    f: AlgebraElement
    components: dict
    decompositions: dict
    psi: dict
    identity_checked: bool = False


def coset_components(sub, f):
    """f^(i) on H with f = sum_i delta_{t_i} * f^(i)."""
    terms = {}
    for s, coefficient in f.terms.items():
        position = sub.coset_index(s)
        h = multiply(invert(sub.transversal[position]), s)
        terms.setdefault(position, []).append((h, coefficient))
    return {position: AlgebraElement(f.context, terms[position]) for position in sorted(terms)}


def express_in_J_generators(sub, f, base=None, cap=None):
    """psi_y with f = sum_y psi_y * (delta_e - delta_y), for f with vanishing left-coset sums."""
    for position, value in coset_sums(f, sub).items():
        if value:
            raise CosetSumNonzero(position, value)
    context = f.context
    components = {i: part for i, part in coset_components(sub, f).items() if part}
    decompositions = {}
    psi = {}
    for position, part in components.items():
        decomposition = decompose_augmentation(sub, part, base=base, cap=cap)
        decompositions[position] = decomposition
        t = sub.transversal[position]
        for y, phi in decomposition.phi.items():
            term = left_translate(t, phi)
            psi[y] = psi[y] + term if y in psi else term
    psi = {y: psi[y] for y in sorted(psi) if psi[y]}

    differences = _generator_differences(sub)
    if _recombine(psi, differences, context) != f:
        raise VerificationError("J-generator expression does not reproduce f")
    return JExpression(f=f, components=components, decompositions=decompositions,
                       psi=psi, identity_checked=True)


# Generators pulled back to a finite quotient

@dataclass(frozen=True)
class PulledBackGenerators:
    sub: object
    generators: tuple
    degenerate: tuple
    spans_ideal: bool = None

    @property
    def elements(self):
        return tuple(element for _, element in self.generators)


def pull_back_generators(hom, mode=None, check_span=True, ball_cap=None, order_cap=None):
    """q(delta_e - delta_y) = delta_e - delta_{q(y)} for y in Y_K, K = q^-1(H).

    Zero images (q(y) the identity) are listed as degenerate; the others are
    kept once per image. With check_span the left ideal they generate in the
    quotient algebra is compared by rank with the coset-sum ideal.
    """
    sub = build_subgroup(hom, mode, ball_cap=ball_cap, order_cap=order_cap)
    context = PermutationContext(hom.degree)
    e = hom.identity
    generators = []
    degenerate = []
    seen = set()
    for y in sub.Y:
        image = apply_hom(hom, y)
        if image == e:
            degenerate.append(y)
            continue
        if image in seen:
            continue
        seen.add(image)
        generators.append((y, AlgebraElement(context, {e: ONE, image: -ONE})))

    spans = None
    if check_span:
        table = quotient_table(hom, order_cap)
        spanning = [left_translate(g, element) for g in table.elements for _, element in generators]
        spans = linalg.rank(spanning, table.elements) == table.order - sub.index
    logger.debug("pulled back %d generators (%d degenerate) for %s",
                 len(generators), len(degenerate), sub)
    return PulledBackGenerators(sub=sub, generators=tuple(generators),
                                degenerate=tuple(degenerate), spans_ideal=spans)


@dataclass(frozen=True)
class IdealLift:
    sub: object
    kernel_generators: tuple
    lifts: tuple
    norms: tuple


def ideal_above_kernel(hom, mode, quotient_elements, base=None, order_cap=None, ball_cap=None):
    """Generators in the free group for the pullback of a left ideal of the quotient algebra.

    The pullback of an ideal spanned by the given quotient elements is
    generated by the J generators delta_e - delta_y (y in Y_K) together with
    minimal-length lifts of the spanning elements. Each lift is checked to
    push forward to its quotient element; norms are reported as (free,
    induced) pairs, which agree for minimal-length lifts of a radial weight.
    """
    sub = build_subgroup(hom, mode, ball_cap=ball_cap, order_cap=order_cap)
    table = quotient_table(hom, order_cap)
    context = FreeContext(hom.rank)
    weight = RadialWeight(base)
    induced = weight.on_quotient(table)
    lifts = []
    norms = []
    for element in quotient_elements:
        if element.context != PermutationContext(hom.degree):
            raise AlphabetMismatch(f"quotient element of {element.context} given for {hom}")
        lift = AlgebraElement(context, [(table.word_of(x), c) for x, c in element.terms.items()])
        if push_forward(lift, hom) != element:
            raise VerificationError("lift does not push forward to the given element")
        lifts.append(lift)
        norms.append((weighted_norm(lift, weight), weighted_norm(element, induced)))
    differences = _generator_differences(sub)
    return IdealLift(sub=sub, kernel_generators=tuple(differences[y] for y in sub.Y),
                     lifts=tuple(lifts), norms=tuple(norms))


# Separation

@dataclass(frozen=True)
class SeparationResult:
    f: AlgebraElement
    translated_by: object
    normalized: AlgebraElement
    finite_set: tuple
    family: str
    level: int = None
    hom: object = None
    value: Coefficient = None
    tried: tuple = ()
    tail: Fraction = Fraction(0)
    weighted_tail: Fraction = Fraction(0)
    meets_trivially: bool = None
    certified: bool = None

    @property
    def separated(self):
        return self.level is not None


def certify_lower_bound(value, leading, tail):
    """Exact check of |value| >= |leading| - tail, or None when |leading| <= tail."""
    a2 = leading.norm_squared()
    if a2 <= tail * tail:
        return None
    # |value| >= |leading| - tail  <=>  2 tail |leading| >= |leading|^2 + tail^2 - |value|^2
    slack = a2 + tail * tail - value.norm_squared()
    if slack <= 0:
        return True
    return 4 * tail * tail * a2 >= slack * slack


def identity_coset_sum(f, hom):
    """q(f)(e): the sum of f over the kernel of hom."""
    total = ZERO
    for s, coefficient in f.terms.items():
        if apply_hom(hom, s).is_Identity:
            total = total + coefficient
    return total


def separate(f, family='grigorchuk', max_level=None, finite_set=None, base=None):
    """Find the first level whose kernel has a nonzero identity-coset sum for f.

    f is first left-translated so that f(e) != 0. The finite set F defaults to
    {e}; the tail is the sum of |f(t)| upper bounds for t outside F.
    """
    if not f:
        raise ZeroElement("the zero element cannot be separated")
    if not isinstance(f.context, FreeContext):
        raise AlphabetMismatch("separation works on elements of a free group algebra")
    levels = quotient_family(family)
    max_level = get_setting('MAX_LEVEL') if max_level is None else max_level
    rank = f.context.rank
    e = identity(rank)

    translated_by = e
    normalized = f
    if not f[e]:
        translated_by = f.support[0]
        normalized = left_translate(invert(translated_by), f)
    finite_set = tuple(sorted(set(finite_set or ()) | {e}))
    outside = [(s, c) for s, c in normalized.terms.items() if s not in finite_set]
    tail = sum((c.modulus_bounds()[1] for _, c in outside), Fraction(0))
    weight = RadialWeight(base)
    weighted_tail = sum((c.modulus_bounds()[1] * weight(s) for s, c in outside), Fraction(0))
    leading = normalized[e]

    tried = []
    for level in range(1, max_level + 1):
        hom = levels(level)
        if hom.rank != rank:
            raise AlphabetMismatch(f"{hom} is defined on F_{hom.rank}, the element on F_{rank}")
        value = identity_coset_sum(normalized, hom)
        tried.append((level, value))
        logger.debug("separation at level %d: q(f)(e) = %s", level, value)
        if not value:
            continue
        meets_trivially = all(not apply_hom(hom, s).is_Identity for s in finite_set if s != e)
        certified = certify_lower_bound(value, leading, tail) if meets_trivially else None
        return SeparationResult(
            f=f, translated_by=translated_by, normalized=normalized, finite_set=finite_set,
            family=family, level=level, hom=hom, value=value, tried=tuple(tried), tail=tail,
            weighted_tail=weighted_tail, meets_trivially=meets_trivially, certified=certified,
        )
    result = SeparationResult(
        f=f, translated_by=translated_by, normalized=normalized, finite_set=finite_set,
        family=family, tried=tuple(tried), tail=tail, weighted_tail=weighted_tail,
    )
    raise NoSeparatingQuotient(f"no {family} level up to {max_level} separates the element", result)
