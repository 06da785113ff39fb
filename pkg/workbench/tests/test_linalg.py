from django.test import SimpleTestCase

from workbench import linalg
from workbench.algebra import AlgebraElement, Coefficient, PermutationContext
from workbench.groups import builtin_hom, quotient_table


class LinearAlgebraTestCase(SimpleTestCase):

    def setUp(self):
        """Set up the algebra of Z/4"""
        hom = builtin_hom('cyclic:4')
        self.table = quotient_table(hom)
        self.context = PermutationContext(4)
        self.e = hom.identity
        self.a = hom.generator_images[0]

    def element(self, terms):
        return AlgebraElement(self.context, terms)

    def test_round_trip_through_domain(self):
        """Test Gaussian rationals survive conversion to QQ_I"""
        value = Coefficient('-3/4', '5/2')
        self.assertEqual(linalg.from_domain(linalg.to_domain(value)), value)

    def test_rank_of_dependent_family(self):
        """Test the rank counts independent elements only"""
        f = self.element({self.e: 1, self.a: -1})
        g = self.element({self.a: 1, self.a ** 2: -1})
        self.assertEqual(linalg.rank([f, g, f + g], self.table.elements), 2)
        self.assertEqual(linalg.rank([], self.table.elements), 0)

    def test_solve_in_span(self):
        """Test coefficients are recovered when the target is in the span"""
        f = self.element({self.e: 1, self.a: -1})
        g = self.element({self.a: Coefficient(0, 1)})
        target = self.element({self.e: 2, self.a: Coefficient(-2, 3)})
        solution = linalg.solve_in_span([f, g], target, self.table.elements)
        self.assertEqual(solution, [Coefficient(2), Coefficient(3)])
        outside = self.element({self.a ** 3: 1})
        self.assertIsNone(linalg.solve_in_span([f, g], outside, self.table.elements))

    def test_span_basis_keeps_earliest(self):
        """Test the basis keeps the first independent elements"""
        f = self.element({self.e: 1})
        g = self.element({self.e: 2})
        h = self.element({self.a: 1})
        self.assertEqual(linalg.span_basis([f, g, h], self.table.elements), [f, h])

    def test_outside_basis(self):
        """Test an element supported off the basis is refused"""
        with self.assertRaises(ValueError):
            linalg.rank([self.element({self.a: 1})], [self.e])
