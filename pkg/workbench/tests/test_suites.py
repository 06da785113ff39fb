from django.test import SimpleTestCase

from workbench.exceptions import UnknownName
from workbench.groups import builtin_hom, grigorchuk_level_hom
from workbench.suites import (
    SUITES, SuiteReport, algebra_axioms_suite, lemma21_suite, lemma23_suite, lemma24_suite,
    lemma25_suite, reduction_oracle_suite, run_suite, separation_suite, weights_suite,
)


class SuiteReportTestCase(SimpleTestCase):

    def test_counts(self):
        """Test per-check counts and the failure listing"""
        report = SuiteReport('demo', 3)
        report.record('first', 'x', True)
        report.record('first', 'y', False, 'off by one')
        report.record('second', 'z', True)
        self.assertEqual((report.checked, report.failed, report.passed), (3, 1, False))
        self.assertEqual(report.counts(), {'first': {'checked': 2, 'failed': 1},
                                           'second': {'checked': 1, 'failed': 0}})
        data = report.as_dict(instances=False)
        self.assertEqual(data['failures'], [{'check': 'first', 'instance': 'y', 'detail': 'off by one'}])
        self.assertNotIn('instances', data)


class SuiteTestCase(SimpleTestCase):
    """Each suite at a reduced size; all of them must pass."""

    def assertSuitePasses(self, report):
        self.assertTrue(report.checked)
        self.assertTrue(report.passed, report.as_dict(instances=False)['failures'])

    def test_reduction_oracle(self):
        """Test free reduction against the quadratic oracle"""
        report = reduction_oracle_suite(0, count=200, max_length=24)
        self.assertSuitePasses(report)
        self.assertEqual(report.counts()['oracle']['checked'], 200)

    def test_weights(self):
        """Test the weight checks on two small quotients"""
        report = weights_suite(0, radius=2, quotients=[builtin_hom('sym3'), builtin_hom('cyclic:5')])
        self.assertSuitePasses(report)
        self.assertIn('broken-table-flagged', report.counts())

    def test_weights_brute_force_covers_every_element(self):
        """Test every level-3 element is checked against preimages of length up to its length + 2"""
        report = weights_suite(0, radius=1, bases=('2',), quotients=[grigorchuk_level_hom(3)])
        self.assertSuitePasses(report)
        counts = report.counts()
        self.assertEqual(counts['induced-brute-force'], {'checked': 128, 'failed': 0})
        self.assertNotIn('induced-bounded', counts)

    def test_algebra_axioms(self):
        """Test ring axioms, norms and coset sums on random elements"""
        self.assertSuitePasses(algebra_axioms_suite(0, count=8, kernel_count=20))

    def test_lemma21(self):
        """Test lifting random ideals on every finite model"""
        self.assertSuitePasses(lemma21_suite(0, ideals_per_model=2))

    def test_lemma23(self):
        """Test the cancellation properties on short geodesics"""
        self.assertSuitePasses(lemma23_suite(0, radius=2, samples=4, sample_radius=2))

    def test_lemma24(self):
        """Test certificates, decompositions and J expressions"""
        self.assertSuitePasses(lemma24_suite(0, count=9, max_factors=3, decompositions=3))

    def test_lemma25(self):
        """Test pulled back generators and minimal lifts"""
        self.assertSuitePasses(lemma25_suite(0, quotient_count=2))

    def test_separation(self):
        """Test elements with distinct images separate by the top level"""
        report = separation_suite(0, count=6, max_level=4, radius=2)
        self.assertSuitePasses(report)
        self.assertEqual(report.counts()['separated']['checked'], 6)

    def test_separation_reports_controls_and_relations(self):
        """Test random controls and trivial relations are counted apart"""
        report = separation_suite(0, count=2, max_level=4, radius=2, control_count=5)
        self.assertSuitePasses(report)
        counts = report.counts()
        self.assertEqual(counts['relation-unseparated'], {'checked': 3, 'failed': 0})
        controls = sum(counts.get(check, {}).get('checked', 0)
                       for check in ('control-separated', 'control-unseparated'))
        self.assertTrue(1 <= controls <= 5)


class RunSuiteTestCase(SimpleTestCase):

    def test_seed_reproduces(self):
        """Test a seed reproduces the same report"""
        first = run_suite('reduction-oracle', seed=11, count=30, max_length=12)
        second = run_suite('reduction-oracle', seed=11, count=30, max_length=12)
        self.assertEqual(first.as_dict(), second.as_dict())
        self.assertEqual(first.seed, 11)

    def test_default_seed(self):
        """Test the configured seed is used when none is given"""
        with self.settings(WORKBENCH={'DEFAULT_SEED': 5}):
            self.assertEqual(run_suite('reduction-oracle', count=2).seed, 5)

    def test_unknown_suite(self):
        """Test unknown suite names are reported"""
        with self.assertRaises(UnknownName):
            run_suite('lemma99')
        self.assertIn('lemma21', SUITES)
