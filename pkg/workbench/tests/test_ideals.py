from fractions import Fraction

from django.test import SimpleTestCase

from workbench.algebra import (
    AlgebraElement, Coefficient, FreeContext, PermutationContext, coset_sums, delta,
)
from workbench.exceptions import (
    AugmentationNonzero, CosetSumNonzero, NoSeparatingQuotient, NotInSubgroup,
    SupportEscapesSubgroup, ZeroElement,
)
from workbench.factorization import factorization_from_factors
from workbench.freegroup import parse_word
from workbench.groups import Kernel, Stabilizer, build_subgroup, builtin_hom
from workbench.ideals import (
    certify_lower_bound, decompose_augmentation, express_in_J_generators, ideal_above_kernel,
    prefix_norm_bound, pull_back_generators, separate, telescope_certificate,
)

F2 = FreeContext(2)
F4 = FreeContext(4)


def w(text, rank=2):
    return parse_word(text, rank)


class CertificateTestCase(SimpleTestCase):

    def setUp(self):
        """Set up the even-length kernel"""
        self.sub = build_subgroup(builtin_hom('even2'))

    def test_abab(self):
        """Test delta_e - delta_abab = (delta_e + delta_ab) * (delta_e - delta_ab)"""
        certificate = telescope_certificate(self.sub, w('abab'))
        self.assertTrue(certificate.identity_checked)
        self.assertEqual([y.text for y in certificate.used_generators], ['ab'])
        self.assertEqual(certificate.g(w('ab')), AlgebraElement(F2, {w('1'): 1, w('ab'): 1}))
        self.assertTrue(certificate.g(w('ba')).is_zero)

    def test_prefix_norm_bound(self):
        """Test ||g_ab|| = 5 stays below 2^4"""
        bound = telescope_certificate(self.sub, w('abab')).norm_bound
        self.assertEqual(bound.largest_norm, 5)
        self.assertEqual(bound.bound, 16)
        self.assertTrue(bound.strictly_increasing)
        self.assertTrue(bound.holds)

    def test_bound_below_base_two(self):
        """Test the geometric sum is used for bases below 2"""
        self.assertEqual(prefix_norm_bound(Fraction(3), 2), 9)
        self.assertEqual(prefix_norm_bound(Fraction(3, 2), 2), Fraction(5, 2))

    def test_non_geodesic_factorization(self):
        """Test a longer factorization still telescopes but carries no norm bound"""
        factorization = factorization_from_factors(self.sub, [w('ab'), w('Ba')])
        certificate = telescope_certificate(self.sub, w('aa'), factorization)
        self.assertTrue(certificate.identity_checked)
        self.assertIsNone(certificate.norm_bound)

    def test_word_outside_subgroup(self):
        """Test odd words have no certificate"""
        with self.assertRaises(NotInSubgroup):
            telescope_certificate(self.sub, w('a'))


class DecompositionTestCase(SimpleTestCase):

    def setUp(self):
        """Set up the even-length kernel"""
        self.sub = build_subgroup(builtin_hom('even2'))

    def test_decompose(self):
        """Test an augmentation-zero element decomposes over the generators"""
        f = AlgebraElement(F2, {w('ab'): 1, w('abab'): -1})
        decomposition = decompose_augmentation(self.sub, f)
        self.assertTrue(decomposition.identity_checked)
        self.assertEqual(decomposition.phi, {w('ab'): delta(w('ab'))})
        self.assertEqual(decomposition.norm_bound, 4 + 16)
        self.assertTrue(decomposition.bound_holds)

    def test_gaussian_coefficients(self):
        """Test complex coefficients decompose exactly"""
        i = Coefficient(0, 1)
        f = AlgebraElement(F2, {w('1'): i, w('bA'): -i})
        decomposition = decompose_augmentation(self.sub, f)
        self.assertEqual(decomposition.phi, {w('bA'): AlgebraElement(F2, {w('1'): i})})

    def test_nonzero_augmentation(self):
        """Test elements with nonzero augmentation are refused"""
        with self.assertRaises(AugmentationNonzero):
            decompose_augmentation(self.sub, delta(w('ab')))

    def test_support_outside_subgroup(self):
        """Test elements supported off H are refused"""
        with self.assertRaises(SupportEscapesSubgroup):
            decompose_augmentation(self.sub, AlgebraElement(F2, {w('a'): 1, w('1'): -1}))


class ExpressionTestCase(SimpleTestCase):

    def test_express_coset_zero(self):
        """Test an element with vanishing coset sums lies in J"""
        sub = build_subgroup(builtin_hom('even2'))
        f = AlgebraElement(F2, {w('a'): 1, w('b'): -1})
        expression = express_in_J_generators(sub, f)
        self.assertTrue(expression.identity_checked)
        self.assertEqual(list(expression.components), [1])
        self.assertEqual(expression.components[1], AlgebraElement(F2, {w('1'): 1, w('Ab'): -1}))

    def test_stabilizer_cosets(self):
        """Test expression over the index-3 stabilizer in Sym(3)"""
        sub = build_subgroup(builtin_hom('sym3'), Stabilizer(0))
        f = AlgebraElement(F2, {w('a'): 2, w('ab'): -1, w('bb'): 3, w('1'): -3, w('b'): 0})
        f = f - AlgebraElement(F2, [(sub.transversal[position], value)
                                    for position, value in coset_sums(f, sub).items()])
        expression = express_in_J_generators(sub, f)
        self.assertTrue(expression.identity_checked)

    def test_nonzero_coset_sum(self):
        """Test the offending coset is named"""
        sub = build_subgroup(builtin_hom('even2'))
        with self.assertRaises(CosetSumNonzero) as caught:
            express_in_J_generators(sub, delta(w('a')))
        self.assertEqual(caught.exception.coset_index, 1)


class PullbackTestCase(SimpleTestCase):

    def test_stabilizer_generators_span(self):
        """Test the pulled back generators span the coset-sum ideal of C[Sym(3)]"""
        result = pull_back_generators(builtin_hom('sym3'), Stabilizer(0))
        self.assertEqual(len(result.generators), 1)
        self.assertTrue(result.degenerate)
        self.assertTrue(result.spans_ideal)

    def test_kernel_generators_degenerate(self):
        """Test every generator of a kernel pulls back to zero"""
        result = pull_back_generators(builtin_hom('even2'), Kernel())
        self.assertEqual(result.generators, ())
        self.assertEqual(len(result.degenerate), 12)
        self.assertTrue(result.spans_ideal)

    def test_ideal_above_kernel(self):
        """Test minimal lifts push forward and keep their norms"""
        hom = builtin_hom('sym3')
        context = PermutationContext(3)
        element = AlgebraElement(context, {hom.identity: 1, hom.generator_images[0]: -1})
        lift = ideal_above_kernel(hom, Kernel(), [element])
        self.assertEqual(lift.lifts[0], AlgebraElement(F2, {w('1'): 1, w('a'): -1}))
        free_norm, induced_norm = lift.norms[0]
        self.assertEqual(free_norm, induced_norm)
        self.assertEqual(free_norm.lower, 3)
        self.assertEqual(len(lift.kernel_generators), len(lift.sub.Y))


class SeparationTestCase(SimpleTestCase):

    def test_small_tail_certified(self):
        """Test delta_e + 1/4 delta_a separates at level 1 with value 1"""
        f = AlgebraElement(F4, {w('1', 4): 1, w('a', 4): Fraction(1, 4)})
        result = separate(f)
        self.assertTrue(result.separated)
        self.assertEqual(result.level, 1)
        self.assertEqual(result.value, Coefficient(1))
        self.assertEqual(result.tail, Fraction(1, 4))
        self.assertTrue(result.meets_trivially)
        self.assertTrue(result.certified)

    def test_translation_when_identity_coefficient_vanishes(self):
        """Test f is translated to have a nonzero identity coefficient"""
        f = AlgebraElement(F4, {w('b', 4): 2})
        result = separate(f)
        self.assertEqual(result.translated_by.text, 'b')
        self.assertEqual(result.normalized, AlgebraElement(F4, {w('1', 4): 2}))
        self.assertEqual(result.value, Coefficient(2))

    def test_relation_never_separates(self):
        """Test delta_e - delta_bcd vanishes in every level quotient"""
        f = AlgebraElement(F4, {w('1', 4): 1, w('bcd', 4): -1})
        with self.assertRaises(NoSeparatingQuotient) as caught:
            separate(f, max_level=3)
        self.assertEqual(len(caught.exception.result.tried), 3)
        self.assertFalse(caught.exception.result.separated)

    def test_zero_element(self):
        """Test the zero element is refused"""
        with self.assertRaises(ZeroElement):
            separate(AlgebraElement.zero(F4))

    def test_certify_lower_bound(self):
        """Test the exact comparison |value| >= |leading| - tail"""
        self.assertTrue(certify_lower_bound(Coefficient(1), Coefficient(1), Fraction(1, 4)))
        self.assertTrue(certify_lower_bound(Coefficient(3, 4), Coefficient(5), Fraction(1)))
        self.assertFalse(certify_lower_bound(Coefficient(1), Coefficient(3), Fraction(1)))
        self.assertIsNone(certify_lower_bound(Coefficient(1), Coefficient(1), Fraction(2)))
