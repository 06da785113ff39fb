import json
from fractions import Fraction

from django.test import SimpleTestCase

from workbench import serialization
from workbench.algebra import AlgebraElement, Coefficient, FreeContext, PermutationContext
from workbench.exceptions import AlphabetMismatch, ParseError, UnknownName, WeightError
from workbench.freegroup import parse_word
from workbench.groups import Kernel, Stabilizer, build_subgroup, builtin_hom
from workbench.ideals import telescope_certificate
from workbench.weights import InducedWeight, RadialWeight, TableWeight, check_submultiplicative

F2 = FreeContext(2)


def w(text):
    return parse_word(text, 2)


class ElementSyntaxTestCase(SimpleTestCase):

    def test_term_syntax(self):
        """Test reading coefficients and words in the term syntax"""
        f = serialization.parse_element('1 - t:ab + (1/2+3i)*t:bA', F2)
        self.assertEqual(f, AlgebraElement(F2, {
            w('1'): 1, w('ab'): -1, w('bA'): Coefficient(Fraction(1, 2), 3),
        }))

    def test_imaginary_and_identity(self):
        """Test bare i coefficients and the identity atom"""
        f = serialization.parse_element('i*e - 2i*t:a', F2)
        self.assertEqual(f, AlgebraElement(F2, {w('1'): Coefficient(0, 1), w('a'): Coefficient(0, -2)}))
        self.assertTrue(serialization.parse_element('0', F2).is_zero)

    def test_json_form(self):
        """Test the JSON element form"""
        text = json.dumps({'terms': [{'word': 'ab', 'coeff': {'re': '1/2', 'im': '-1'}},
                                     {'word': '1', 'coeff': 3}]})
        f = serialization.parse_element(text, F2)
        self.assertEqual(f[w('ab')], Coefficient(Fraction(1, 2), -1))
        self.assertEqual(serialization.element_from_json(serialization.element_to_json(f), F2), f)

    def test_format_reads_back(self):
        """Test the formatted text parses to the same element"""
        f = AlgebraElement(F2, {w('1'): -1, w('ab'): Coefficient(0, -3), w('B'): Coefficient(2, 1)})
        self.assertEqual(serialization.parse_element(serialization.format_element(f), F2), f)
        self.assertEqual(serialization.format_element(AlgebraElement.zero(F2)), '0')

    def test_quotient_terms(self):
        """Test permutation atoms and words pushed into a quotient"""
        hom = builtin_hom('sym3')
        context = PermutationContext(3)
        f = serialization.parse_element('p:1,0,2 + t:a', context, hom)
        self.assertEqual(len(f), 1)
        self.assertEqual(f[hom.generator_images[0]], Coefficient(2))

    def test_parse_errors_carry_offsets(self):
        """Test malformed input reports where it went wrong"""
        with self.assertRaises(ParseError) as caught:
            serialization.parse_element('1 + t:ab ? 2', F2)
        self.assertEqual(caught.exception.offset, 9)
        with self.assertRaises(ParseError):
            serialization.parse_element('{"terms": [', F2)
        with self.assertRaises(ParseError):
            serialization.parse_element('', F2)
        with self.assertRaises(ParseError):
            serialization.element_from_json({'terms': [{'word': 'a', 'coeff': 0.5}]}, F2)

    def test_wrong_rank(self):
        """Test a word beyond the element's rank is refused"""
        with self.assertRaises(AlphabetMismatch):
            serialization.parse_element('t:c', F2)


class GroupSpecTestCase(SimpleTestCase):

    def test_sample_files(self):
        """Test the shipped group samples load"""
        hom, mode = serialization.load_group('even2.json')
        self.assertEqual((hom.rank, hom.degree), (2, 2))
        self.assertEqual(mode, Kernel())
        hom, mode = serialization.load_group('sym3-stabilizer.json')
        self.assertEqual(mode, Stabilizer(0))
        self.assertEqual(hom.generator_images, builtin_hom('sym3').generator_images)

    def test_inline_and_builtin(self):
        """Test inline JSON and bare builtin names"""
        hom, mode = serialization.load_group('{"builtin": "cycle3", "mode": {"stabilizer": 0}}')
        self.assertEqual(str(hom), 'cycle3')
        self.assertEqual(mode, Stabilizer(0))
        hom, mode = serialization.load_group('klein')
        self.assertEqual(hom.degree, 4)
        with self.assertRaises(UnknownName):
            serialization.load_group('nonsense')

    def test_bad_specs(self):
        """Test malformed group specs are parse errors"""
        with self.assertRaises(ParseError):
            serialization.load_group('{"rank": 2, "degree": 2}')
        with self.assertRaises(ParseError):
            serialization.load_group('{"builtin": "sym3", "mode": {"stabilizer": 7}}')

    def test_group_round_trip(self):
        """Test group_to_json output is a valid group spec"""
        data = serialization.group_to_json(builtin_hom('sym3'), Stabilizer(1))
        hom, mode = serialization.group_from_json(data)
        self.assertEqual(hom.generator_images, builtin_hom('sym3').generator_images)
        self.assertEqual(mode, Stabilizer(1))


class WeightSpecTestCase(SimpleTestCase):

    def test_default_and_shorthand(self):
        """Test the default radial weight and the radial:c shorthand"""
        self.assertEqual(serialization.load_weight(None).base, 2)
        self.assertEqual(serialization.load_weight('radial:3/2').base, Fraction(3, 2))
        self.assertEqual(serialization.load_weight('radial-3-2.json').base, Fraction(3, 2))

    def test_broken_sample_weight(self):
        """Test the broken Z/4 sample fails the check"""
        weight = serialization.load_weight('broken-z4.json')
        self.assertIsInstance(weight, TableWeight)
        self.assertFalse(check_submultiplicative(weight, weight.table).passed)

    def test_induced_spec(self):
        """Test an induced weight spec"""
        weight = serialization.load_weight('{"kind": "induced", "group": "sym3", "parent": {"kind": "radial"}}')
        self.assertIsInstance(weight, InducedWeight)
        self.assertIsInstance(weight.parent, RadialWeight)

    def test_bad_weights(self):
        """Test invalid weight specs"""
        with self.assertRaises(WeightError):
            serialization.load_weight('{"kind": "radial", "base": "1/2"}')
        with self.assertRaises(WeightError):
            serialization.load_weight('{"kind": "table", "values": {"a": 1.5}}')
        with self.assertRaises(UnknownName):
            serialization.load_weight('{"kind": "exotic"}')


class ReportTestCase(SimpleTestCase):

    def test_certificate_json(self):
        """Test the certificate report for abab"""
        certificate = telescope_certificate(build_subgroup(builtin_hom('even2')), w('abab'))
        data = serialization.certificate_to_json(certificate)
        self.assertTrue(data['identity_checked'])
        self.assertEqual(data['factors'], ['ab', 'ab'])
        self.assertEqual(data['gens'][0]['summands'], ['1', 'ab'])
        self.assertEqual(data['norm_bound']['norm'], '5')
        json.loads(serialization.dump_json(data))

    def test_render_text(self):
        """Test the indented text rendering"""
        text = serialization.render_text({'passed': True, 'items': ['a', 'b'], 'empty': []})
        self.assertEqual(text.splitlines(), ['passed: yes', 'items:', '  - a', '  - b', 'empty: (none)'])
