"""Seeded property suites.

Each suite draws all of its randomness from one random.Random(seed), so a
seed reproduces a run exactly. Sizes default to the acceptance runs; the
keyword arguments exist so tests can run the same checks smaller.
"""
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    ONE, AlgebraElement, Coefficient, FreeContext, PermutationContext, augmentation, conjugate,
    convolve, coset_sums, l1_weighted_norm, left_translate, push_forward, weighted_norm,
)
from .cancellation import check_lemma_2_3
from .conf import get_setting
from .exceptions import NoSeparatingQuotient, NonGeodesicFactorization, UnknownName, WorkbenchError
from .factorization import all_geodesic_factorizations, factorization_from_factors, y_ball
from .freegroup import Letter, alphabet, ball, identity, invert, multiply, parse_word, reduce
from .groups import (
    Kernel, Stabilizer, apply_hom, build_subgroup, builtin_hom, grigorchuk_level_hom,
    preimage_mode, quotient_table,
)
from .ideals import (
    decompose_augmentation, express_in_J_generators, ideal_above_kernel, identity_coset_sum,
    pull_back_generators, separate, telescope_certificate,
)
from .lifting import FINITE_MODELS, builtin_model, extract_subgroup_expression, lift_ideal
from .weights import (
    InducedWeight, RadialWeight, RestrictedWeight, TableWeight, check_submultiplicative,
)

logger = logging.getLogger(__name__)


@dataclass
class SuiteReport:
    name: str
    seed: int
    instances: list = field(default_factory=list)

    def record(self, check, label, passed, detail=None):
        self.instances.append((check, str(label), bool(passed), detail))
        if not passed:
            logger.warning("%s/%s failed on %s: %s", self.name, check, label, detail)
        return passed

    @property
    def checked(self):
        return len(self.instances)

    @property
    def failed(self):
        return sum(1 for _, _, passed, _ in self.instances if not passed)

    @property
    def passed(self):
        return self.failed == 0

    def counts(self):
        checked = Counter(check for check, _, _, _ in self.instances)
        failed = Counter(check for check, _, passed, _ in self.instances if not passed)
        return {check: {'checked': checked[check], 'failed': failed[check]} for check in checked}

    def as_dict(self, instances=True):
        data = {
            'suite': self.name,
            'seed': self.seed,
            'checked': self.checked,
            'failed': self.failed,
            'passed': self.passed,
            'checks': self.counts(),
            'failures': [
                {'check': check, 'instance': label, 'detail': detail}
                for check, label, passed, detail in self.instances if not passed
            ],
        }
        if instances:
            data['instances'] = [
                {'check': check, 'instance': label, 'passed': passed}
                for check, label, passed, _ in self.instances
            ]
        return data


# Random inputs

def naive_reduce(letters):
    """Repeatedly delete the first adjacent inverse pair; quadratic."""
    letters = [Letter(*letter) for letter in letters]
    changed = True
    while changed:
        changed = False
        for position in range(len(letters) - 1):
            if letters[position + 1] == letters[position].inverse():
                del letters[position:position + 2]
                changed = True
                break
    return tuple(letters)


def random_letters(rng, rank, length):
    return [Letter(rng.randrange(rank), rng.random() < 0.5) for _ in range(length)]


def random_coefficient(rng, gaussian=True, size=3):
    while True:
        re = Fraction(rng.randint(-size, size), rng.choice((1, 1, 2)))
        im = Fraction(rng.randint(-size, size), rng.choice((1, 1, 2))) if gaussian and rng.random() < 0.4 else 0
        value = Coefficient(re, im)
        if value:
            return value


def random_element(rng, context, support_pool, max_terms=4, gaussian=True):
    count = rng.randint(1, max_terms)
    return AlgebraElement(context, [(rng.choice(support_pool), random_coefficient(rng, gaussian))
                                    for _ in range(count)])


def random_y_word(rng, sub, max_factors):
    factors = [rng.choice(sub.Y) for _ in range(rng.randint(0, max_factors))]
    word = identity(sub.rank)
    for y in factors:
        word = multiply(word, y)
    return word


def random_coset_zero(rng, sub, pool, max_terms=4):
    """A random element with every left-coset sum equal to zero."""
    context = FreeContext(sub.rank)
    f = random_element(rng, context, pool, max_terms)
    correction = []
    for position, value in coset_sums(f, sub).items():
        if value:
            correction.append((sub.transversal[position], -value))
    return f + AlgebraElement(context, correction)


# Suites

def reduction_oracle_suite(seed, count=10000, max_length=64, ranks=(2, 3)):
    report = SuiteReport('reduction-oracle', seed)
    rng = random.Random(seed)
    for i in range(count):
        rank = ranks[i % len(ranks)]
        letters = random_letters(rng, rank, rng.randint(0, max_length))
        word = reduce(letters, rank)
        label = word.text if len(letters) < 16 else f"sequence {i}"
        report.record('oracle', label, word.letters == naive_reduce(letters))
        report.record('idempotent', label, reduce(word.letters, rank) == word)
    return report


def _quotient_test_set():
    homs = [builtin_hom(name) for name in ('even2', 'sym3', 'klein', 'cycle3', 'cyclic:5')]
    homs.extend(grigorchuk_level_hom(level) for level in (1, 2, 3))
    return homs


def _shortest_preimage_weights(hom, reach, weight):
    """min omega over every reduced word of length <= reach, per image.

    Each layer holds the distinct (last letter, image) pairs reached by the
    reduced words of that length, which is all the minimum depends on.
    """
    letters = alphabet(hom.rank)
    best = {hom.identity: weight.power(0)}
    layer = {(None, hom.identity)}
    for length in range(1, reach + 1):
        value = weight.power(length)
        extended = set()
        for last, image in layer:
            for letter in letters:
                if last is not None and letter == last.inverse():
                    continue
                moved = image * hom.letter_image(letter)
                best.setdefault(moved, value)
                extended.add((letter, moved))
        layer = extended
    return best


def weights_suite(seed, radius=6, bases=('2', '3/2'), quotients=None):
    report = SuiteReport('weights', seed)
    rng = random.Random(seed)
    domain = ball(2, radius)
    for base in bases:
        result = check_submultiplicative(RadialWeight(base), domain)
        report.record('radial-submultiplicative', f"base {base} on B_{radius}", result.passed,
                      f"{len(result.violations)} violations in {result.checked_pairs} pairs")

    for hom in quotients or _quotient_test_set():
        table = quotient_table(hom)
        weight = RadialWeight(2)
        induced = InducedWeight(weight, hom, table)
        reach = max(table.lengths) + 2
        shortest = _shortest_preimage_weights(hom, reach, weight)
        for element, length in zip(table.elements, table.lengths):
            value = induced(element)
            label = f"{hom} {list(element.array_form)}"
            report.record('induced-radial', label, value == 2 ** length)
            report.record('induced-brute-force', label, shortest.get(element) == value,
                          f"preimages up to length {reach}")
        result = check_submultiplicative(induced, table)
        report.record('induced-submultiplicative', str(hom), result.passed)
        for base in bases:
            values = {g: RadialWeight(base).power(length) for g, length in zip(table.elements, table.lengths)}
            result = check_submultiplicative(TableWeight(values, table), table)
            report.record('table-submultiplicative', f"{hom} base {base}", result.passed)

    # omega(a) = 1, omega(a^2) = 5 on Z/4 is not submultiplicative
    z4 = builtin_hom('cyclic:4')
    table = quotient_table(z4)
    a = z4.generator_images[0]
    broken = TableWeight({table.identity: 1, a: 1, a ** 2: 5, a ** 3: 1}, table)
    result = check_submultiplicative(broken, table)
    flagged = any(s == a and t == a for s, t, _, _ in result.violations)
    report.record('broken-table-flagged', 'Z/4 with omega(a^2) = 5', flagged,
                  f"{len(result.violations)} violations")

    sub = build_subgroup(builtin_hom('sym3'), Stabilizer(0))
    restricted = RestrictedWeight(RadialWeight(2), sub)
    for _ in range(50):
        h = random_y_word(rng, sub, 3)
        report.record('restricted', h.text, restricted(h) == RadialWeight(2)(h))
    return report


def algebra_axioms_suite(seed, count=200, kernel_count=500):
    report = SuiteReport('algebra-axioms', seed)
    rng = random.Random(seed)
    context = FreeContext(2)
    pool = list(ball(2, 3))
    weight = RadialWeight(2)
    hom = builtin_hom('even2')
    induced = weight.on_quotient(quotient_table(hom))
    for i in range(count):
        f, g, h = (random_element(rng, context, pool) for _ in range(3))
        report.record('associative', i, (f * g) * h == f * (g * h))
        report.record('distributive', i, f * (g + h) == f * g + f * h and (g + h) * f == g * f + h * f)
        report.record('augmentation-multiplicative', i, augmentation(f * g) == augmentation(f) * augmentation(g))
        product = weighted_norm(f * g, weight)
        report.record('norm-submultiplicative', i,
                      product.lower <= weighted_norm(f, weight).upper * weighted_norm(g, weight).upper
                      and l1_weighted_norm(f * g, weight) <= l1_weighted_norm(f, weight) * l1_weighted_norm(g, weight))
        report.record('push-forward-multiplicative', i,
                      push_forward(f * g, hom) == push_forward(f, hom) * push_forward(g, hom))
        report.record('push-forward-contractive', i,
                      weighted_norm(push_forward(f, hom), induced).lower <= weighted_norm(f, weight).upper)
        t = rng.choice(pool)
        conjugated = conjugate(f, t)
        report.record('conjugate-inverse', i, conjugate(conjugated, invert(t)) == f)
        report.record('conjugate-norm', i,
                      weighted_norm(conjugated, weight).lower
                      <= weight(t) * weight(invert(t)) * weighted_norm(f, weight).upper)

    kernel_sub = build_subgroup(hom)
    stabilizer_sub = build_subgroup(builtin_hom('sym3'), Stabilizer(0))
    pool = list(ball(2, 4))
    for i in range(kernel_count):
        if i % 2:
            f = random_coset_zero(rng, kernel_sub, pool)
        else:
            f = random_element(rng, context, pool)
        vanishing = all(not value for value in coset_sums(f, kernel_sub).values())
        report.record('kernel-characterization', i, (not push_forward(f, hom)) == vanishing)

    for i in range(count):
        f = random_element(rng, context, pool)
        u = rng.choice(pool)
        for sub in (kernel_sub, stabilizer_sub):
            before = Counter(coset_sums(f, sub).values())
            after = Counter(coset_sums(left_translate(u, f), sub).values())
            report.record(f"left-translation-{sub.mode.kind}", i, before == after)
    return report


def _random_ideal_generators(rng, model):
    context = model.context
    return [AlgebraElement(context, [(h, rng.randint(-2, 2)) for h in model.subgroup])
            for _ in range(rng.randint(1, 2))]


def lemma21_suite(seed, ideals_per_model=20, models=FINITE_MODELS):
    report = SuiteReport('lemma21', seed)
    rng = random.Random(seed)
    for name in models:
        model = builtin_model(name)
        context = model.context
        for i in range(ideals_per_model):
            label = f"{name} #{i}"
            lifted = lift_ideal(model, _random_ideal_generators(rng, model))
            report.record('codimension', label, lifted.codimension_holds,
                          f"codim I = {lifted.codim_I}, codim J = {lifted.codim_J}")
            report.record('left-ideal-witnesses', label, lifted.witnesses_hold)
            report.record('quotient-basis', label, lifted.quotient_basis_completes)
            if not lifted.ideal_basis:
                continue
            g = AlgebraElement(context, [])
            expression = []
            for b in lifted.ideal_basis:
                c = rng.randint(-2, 2) or 1
                g = g + b.scale(c)
                t = rng.choice(model.transversal)
                # delta_{t^-1} * (delta_t * b) = b, with delta_t * b a generator of J
                expression.append((AlgebraElement.delta(context, ~t, Coefficient(c)),
                                   convolve(AlgebraElement.delta(context, t), b)))
            try:
                extracted = extract_subgroup_expression(model, g, expression)
                report.record('extraction', label, extracted.identity_checked)
            except WorkbenchError as error:
                report.record('extraction', label, False, str(error))
    return report


def _lemma23_check(report, sub, u, cap):
    factorizations, truncated = all_geodesic_factorizations(sub, u, cap=cap)
    for number, factorization in enumerate(factorizations):
        result = check_lemma_2_3(sub, factorization)
        report.record('geodesic', f"{u.text} #{number}", result.passed, '; '.join(result.violations))
    if truncated:
        report.record('enumeration', u.text, True, f"truncated at {cap}")


def lemma23_suite(seed, radius=4, samples=50, sample_radius=3, cap=None):
    report = SuiteReport('lemma23', seed)
    rng = random.Random(seed)
    cap = cap or get_setting('FACTORIZATION_CAP')

    even = build_subgroup(builtin_hom('even2'), radius=2)
    for u in y_ball(even, radius):
        _lemma23_check(report, even, u, cap)

    for hom_name, mode in (('sym3', Stabilizer(0)), ('cycle3', Stabilizer(0))):
        sub = build_subgroup(builtin_hom(hom_name), mode)
        for _ in range(samples):
            _lemma23_check(report, sub, random_y_word(rng, sub, sample_radius), cap)

    # (ab)(Ba) multiplies to aa, which is itself in Y
    shortcut = factorization_from_factors(even, [parse_word('ab', 2), parse_word('Ba', 2)])
    try:
        check_lemma_2_3(even, shortcut)
        report.record('non-geodesic-rejected', 'aa = (ab)(Ba)', False)
    except NonGeodesicFactorization:
        report.record('non-geodesic-rejected', 'aa = (ab)(Ba)', True)
    return report


def lemma24_subgroups():
    return (
        build_subgroup(builtin_hom('even2')),
        build_subgroup(builtin_hom('sym3'), Stabilizer(0)),
        build_subgroup(builtin_hom('klein')),
    )


def lemma24_suite(seed, count=200, max_factors=6, decompositions=20):
    report = SuiteReport('lemma24', seed)
    rng = random.Random(seed)
    subgroups = lemma24_subgroups()
    for i in range(count):
        sub = subgroups[i % len(subgroups)]
        u = random_y_word(rng, sub, max_factors)
        label = f"{sub.hom}: {u.text}"
        try:
            certificate = telescope_certificate(sub, u, base=2)
        except WorkbenchError as error:
            report.record('identity', label, False, str(error))
            continue
        report.record('identity', label, certificate.identity_checked)
        bound = certificate.norm_bound
        report.record('norm-bound', label, bound is not None and bound.holds,
                      None if bound is None else f"{bound.largest_norm} <= {bound.bound}")
        report.record('powers-increasing', label, bound is not None and bound.strictly_increasing)

    for i in range(decompositions):
        sub = subgroups[i % len(subgroups)]
        members = [random_y_word(rng, sub, 3) for _ in range(4)]
        context = FreeContext(sub.rank)
        f = AlgebraElement(context, [(w, random_coefficient(rng)) for w in members])
        f = f - AlgebraElement.delta(context, identity(sub.rank), augmentation(f))
        decomposition = decompose_augmentation(sub, f, base=2)
        report.record('decomposition', f"{sub.hom} #{i}",
                      decomposition.identity_checked and decomposition.bound_holds is not False)
        pool = list(ball(sub.rank, 3))
        expression = express_in_J_generators(sub, random_coset_zero(rng, sub, pool), base=2)
        report.record('J-expression', f"{sub.hom} #{i}", expression.identity_checked)
    return report


def lemma25_suite(seed, quotient_count=8):
    report = SuiteReport('lemma25', seed)
    rng = random.Random(seed)
    sym3 = builtin_hom('sym3')
    klein = builtin_hom('klein')
    cases = [
        (builtin_hom('even2'), Kernel()),
        (sym3, Kernel()),
        (sym3, preimage_mode([sym3.generator_images[1]], 3)),
        (sym3, Stabilizer(0)),
        (klein, preimage_mode([klein.generator_images[0]], 4)),
        (grigorchuk_level_hom(1), Kernel()),
        (klein, Kernel()),
        (grigorchuk_level_hom(2), Stabilizer(0)),
    ]
    for hom, mode in cases:
        label = f"{hom} {mode.kind}"
        result = pull_back_generators(hom, mode)
        report.record('generates-coset-ideal', label, result.spans_ideal)
        form = all(
            len(element) == 2 and element[hom.identity] == ONE
            and all(mode.contains(g) for g in element.support)
            for element in result.elements
        )
        report.record('generator-form', label, form)
        if isinstance(mode, Kernel):
            report.record('kernel-degenerate', label, not result.generators)

        table = quotient_table(hom)
        radial = RadialWeight(2)
        induced = InducedWeight(radial, hom, table)
        on_quotient = radial.on_quotient(table)
        report.record('induced-equals-radial', str(hom),
                      all(induced(g) == on_quotient(g) for g in table.elements))

        context = PermutationContext(hom.degree)
        elements = [random_element(rng, context, list(table.elements), gaussian=False)
                    for _ in range(quotient_count)]
        lift = ideal_above_kernel(hom, mode, elements, base=2)
        report.record('lift-norms', label, all(free == quotient for free, quotient in lift.norms))
    return report


def _distinct_image_element(rng, pool, hom, max_terms):
    context = FreeContext(hom.rank)
    while True:
        chosen = {}
        for _ in range(rng.randint(1, max_terms)):
            word = rng.choice(pool)
            image = apply_hom(hom, word)
            if image not in chosen:
                chosen[image] = word
        f = AlgebraElement(context, [(word, random_coefficient(rng)) for word in chosen.values()])
        if f:
            return f


# delta_e - delta_w for words that are trivial in the Grigorchuk group
TRIVIAL_RELATIONS = ('aa', 'bb', 'bcd')


def separation_suite(seed, count=100, max_level=None, radius=4, max_terms=4, control_count=20):
    """Separate elements by Grigorchuk levels.

    The main batch keeps the terms of each element in distinct top-level
    images. A plain random control batch is reported apart, and the
    delta_e - delta_w elements for trivial relations w must stay unseparated.
    """
    report = SuiteReport('separation', seed)
    rng = random.Random(seed)
    max_level = max_level or get_setting('MAX_LEVEL')
    pool = list(ball(4, radius))
    top = grigorchuk_level_hom(max_level)
    for i in range(count):
        f = _distinct_image_element(rng, pool, top, max_terms)
        try:
            result = separate(f, 'grigorchuk', max_level)
        except WorkbenchError as error:
            report.record('separated', i, False, str(error))
            continue
        report.record('separated', i, result.separated, f"level {result.level}")
        pushed = push_forward(result.normalized, result.hom)[result.hom.identity]
        report.record('identity-coset-sum', i,
                      pushed == result.value == identity_coset_sum(result.normalized, result.hom))
        if result.certified is not None:
            report.record('certified-bound', i, result.certified)

    context = FreeContext(4)
    for i in range(control_count):
        f = random_element(rng, context, pool, max_terms)
        if not f:
            continue
        try:
            result = separate(f, 'grigorchuk', max_level)
        except NoSeparatingQuotient:
            report.record('control-unseparated', i, True, str(f))
            continue
        report.record('control-separated', i, True, f"level {result.level}")

    e = identity(4)
    for text in TRIVIAL_RELATIONS:
        f = AlgebraElement(context, [(e, ONE), (parse_word(text, 4), -ONE)])
        try:
            result = separate(f, 'grigorchuk', max_level)
        except NoSeparatingQuotient:
            report.record('relation-unseparated', text, True)
            continue
        report.record('relation-unseparated', text, False, f"separated at level {result.level}")
    return report


SUITES = {
    'reduction-oracle': reduction_oracle_suite,
    'weights': weights_suite,
    'algebra-axioms': algebra_axioms_suite,
    'lemma21': lemma21_suite,
    'lemma23': lemma23_suite,
    'lemma24': lemma24_suite,
    'lemma25': lemma25_suite,
    'separation': separation_suite,
}


def run_suite(name, seed=None, **options):
    try:
        suite = SUITES[name]
    except KeyError:
        raise UnknownName(f"unknown suite {name!r}; known: {', '.join(SUITES)}") from None
    seed = get_setting('DEFAULT_SEED') if seed is None else seed
    logger.info("running suite %s with seed %s", name, seed)
    report = suite(seed, **options)
    logger.debug("suite %s: %d checked, %d failed", name, report.checked, report.failed)
    return report
