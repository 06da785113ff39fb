from django.test import TestCase

from workbench.models import SuiteRun
from workbench.suites import SuiteReport


class SuiteRunTestCase(TestCase):

    def setUp(self):
        """Set up a finished report with one failure"""
        self.report = SuiteReport('lemma24', 7)
        self.report.record('identity', 'abab', True)
        self.report.record('norm-bound', 'abab', True)
        self.report.record('norm-bound', 'baba', False, '17 <= 16')

    def test_record(self):
        """Test recording a report and its string representation"""
        run = SuiteRun.record(self.report)
        self.assertEqual((run.checked, run.failed, run.passed), (3, 1, False))
        self.assertEqual(str(run), "lemma24 seed=7: 2/3")
        self.assertIsNotNone(run.created_at)

    def test_stored_report(self):
        """Test the stored report keeps counts and failures but not instances"""
        run = SuiteRun.objects.get(pk=SuiteRun.record(self.report).pk)
        self.assertEqual(run.report['checks']['norm-bound'], {'checked': 2, 'failed': 1})
        self.assertEqual(run.report['failures'][0]['detail'], '17 <= 16')
        self.assertNotIn('instances', run.report)

    def test_newest_first(self):
        """Test runs are listed newest first"""
        first = SuiteRun.record(self.report)
        second = SuiteRun.record(SuiteReport('weights', 1))
        self.assertEqual(list(SuiteRun.objects.all()), [second, first])

    def test_summary(self):
        """Test the summary used by the history listing"""
        run = SuiteRun.record(SuiteReport('weights', 1))
        summary = run.summary()
        self.assertEqual(summary['name'], 'weights')
        self.assertTrue(summary['passed'])
        self.assertEqual(summary['checked'], 0)
