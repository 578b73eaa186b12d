import json
import os
import tempfile
from fractions import Fraction
from io import StringIO
from unittest import mock

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from toricstab.exceptions import UnknownFixture, VerificationFailed

from obstruction.q import CHOW_UNSTABLE

from .fixtures import FIXTURES, fixture_names, load_fixture
from .forms import DivisorForm, JobOptionsForm, PolytopeFileForm
from .reports import RESULT_SCHEMA, validate_report
from .runner import run
from .serializers import inputs_digest, polytope_from_document, polytope_to_document

F = Fraction

UNBALANCED = '[{"facet_index": 0, "beta": "1"}, {"facet_index": 1, "beta": "1/2"}]'


def invoke(*argv):
    """Run a command line; return ``(exit_code, stdout, stderr)``."""
    out, err = StringIO(), StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class CliTestMixin:
    def setUp(self):
        """Set up a scratch directory for input files."""
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, data):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(data if isinstance(data, str) else json.dumps(data))
        return path


class FormsTestCase(SimpleTestCase):
    """Test cases for the input forms."""

    def test_divisor_form(self):
        """Test that beta is parsed exactly and range-checked."""
        form = DivisorForm(data={'facet_index': 1, 'beta': '13/14'})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data['beta'], F(13, 14))
        for beta in ('0', '3/2', '0.5', 'half'):
            self.assertFalse(DivisorForm(data={'facet_index': 1, 'beta': beta}).is_valid())
        self.assertFalse(DivisorForm(data={'facet_index': -1, 'beta': '1'}).is_valid())

    def test_polytope_form(self):
        """Test that exactly one representation is required."""
        both = {'halfspaces': [{'normal': [1], 'offset': 0}], 'vertices': [[0], [1]]}
        self.assertFalse(PolytopeFileForm(data=both).is_valid())
        self.assertFalse(PolytopeFileForm(data={'dim': 1}).is_valid())
        ragged = {'vertices': [[0, 0], [1]]}
        self.assertFalse(PolytopeFileForm(data=ragged).is_valid())
        form = PolytopeFileForm(data={'vertices': [[0, 0], [1, 0], [0, 1]]})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data['dim'], 2)

    def test_job_options_defaults(self):
        """Test the linear mode and text format defaults."""
        form = JobOptionsForm(data={})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data['mode'], 'linear')
        self.assertEqual(form.cleaned_data['format'], 'text')
        self.assertFalse(JobOptionsForm(data={'i': 0}).is_valid())
        self.assertFalse(JobOptionsForm(data={'mode': 'vertex'}).is_valid())


class FixtureTestCase(SimpleTestCase):
    """Test cases for the built-in fixtures."""

    def test_names(self):
        """Test the five fixture names."""
        self.assertEqual(fixture_names(), ['cp1-sym', 'cp1-unit', 'hirzebruch1', 'simplex2', 'square-sym'])

    def test_hirzebruch_angles(self):
        """Test the cone angles on D_1, D_2 and D_inf."""
        P, divisors = load_fixture('hirzebruch1')
        self.assertEqual([(d.facet_index, d.beta) for d in divisors],
                         [(1, F(13, 14)), (3, F(13, 14)), (0, F(5, 7))])
        self.assertEqual(P.vertices, ((-1, 0), (-1, 2), (0, -1), (2, -1)))

    def test_cp1_sym(self):
        """Test [-1, 1] with both endpoint divisors."""
        P, divisors = load_fixture('cp1-sym')
        self.assertEqual(P.vertices, ((-1,), (1,)))
        self.assertEqual(len(divisors), 2)

    def test_square(self):
        """Test [-1, 1]^2 without divisors."""
        P, divisors = load_fixture('square-sym')
        self.assertEqual(len(P.vertices), 4)
        self.assertEqual(divisors, [])

    def test_unknown(self):
        """Test UnknownFixture."""
        with self.assertRaises(UnknownFixture):
            load_fixture('cp2')

    def test_document_round_trip(self):
        """Test that re-serializing a fixture reproduces it."""
        for name in fixture_names():
            P, divisors = load_fixture(name)
            self.assertEqual(polytope_from_document(polytope_to_document(P, divisors)), (P, divisors))


class ExamplesCommandTestCase(SimpleTestCase):
    """Test cases for the examples command."""

    def test_cp1_unit(self):
        """Test that the unit interval is emitted with both angles 13/14."""
        code, out, _ = invoke('examples', 'cp1-unit')
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(document, FIXTURES['cp1-unit'])
        self.assertEqual([d['beta'] for d in document['divisors']], ['13/14', '13/14'])

    def test_listing(self):
        """Test the name listing without an argument."""
        code, out, _ = invoke('examples')
        self.assertEqual(code, 0)
        self.assertEqual(out.split(), fixture_names())

    def test_unknown(self):
        """Test exit code 2 for an unknown fixture."""
        code, _, err = invoke('examples', 'cp2')
        self.assertEqual(code, 2)
        self.assertIn('cp2', err)


class AnalysisCommandTestCase(CliTestMixin, SimpleTestCase):
    """Test cases for validate, count, measures and q."""

    def test_validate(self):
        """Test the Delzant and reflexive flags of the Hirzebruch surface."""
        code, out, _ = invoke('validate', '--fixture', 'hirzebruch1', '--format', 'json')
        self.assertEqual(code, 0)
        results = json.loads(out)['results']
        self.assertTrue(results['delzant'])
        self.assertTrue(results['reflexive'])
        self.assertEqual(results['lattice_points'], 9)

    def test_non_delzant_warning(self):
        """Test that a singular triangle is reported with a warning."""
        path = self.write('triangle.json', {'vertices': [[-1, -1], [1, 0], [0, 1]]})
        code, out, _ = invoke('validate', '--polytope', path, '--format', 'json')
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertFalse(report['results']['delzant'])
        self.assertEqual(len(report['warnings']), 1)

    def test_count(self):
        """Test E(2) = 25 on the Hirzebruch fixture."""
        code, out, _ = invoke('count', '--fixture', 'hirzebruch1', '--i', '2', '--format', 'json')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['results']['count'], 25)

    def test_measures(self):
        """Test the exact volume and barycenter."""
        code, out, _ = invoke('measures', '--fixture', 'hirzebruch1', '--format', 'json')
        results = json.loads(out)['results']
        self.assertEqual(results['volume'], '4')
        self.assertEqual(results['barycenter'], ['1/12', '1/12'])
        self.assertEqual(results['boundary_volume'], '8')

    def test_q_poly_hirzebruch(self):
        """Test equal components and the unstable verdict line."""
        code, out, _ = invoke('q', '--fixture', 'hirzebruch1', '--poly')
        self.assertEqual(code, 0)
        self.assertIn('Q_i = (10/21, 10/21)·i + (5/21, 5/21)', out)
        self.assertIn(f'verdict: {CHOW_UNSTABLE}', out)
        self.assertIn('oracle: agrees', out)
        code, out, _ = invoke('q', '--fixture', 'hirzebruch1', '--poly', '--format', 'json')
        results = json.loads(out)['results']
        self.assertEqual(results['coefficients'], [['5/21', '5/21'], ['10/21', '10/21']])
        self.assertEqual(results['printed_comparison'][0]['printed'], '137/70')
        self.assertTrue(results['printed_verdict_reproduced'])

    def test_q_at_one_scale(self):
        """Test Q_1 = (5/7, 5/7)."""
        code, out, _ = invoke('q', '--fixture', 'hirzebruch1', '--i', '1', '--format', 'json')
        self.assertEqual(json.loads(out)['results']['q'], ['5/7', '5/7'])

    def test_q_interval_note(self):
        """Test that interval reports carry the convention audit."""
        code, out, _ = invoke('q', '--fixture', 'cp1-unit', '--poly')
        self.assertEqual(code, 0)
        self.assertIn('Q vanishes identically', out)
        self.assertIn('reproduced on [0,1]', out)

    def test_q_needs_one_of_i_and_poly(self):
        """Test exit code 2 when both or neither are given."""
        self.assertEqual(invoke('q', '--fixture', 'cp1-unit')[0], 2)
        self.assertEqual(invoke('q', '--fixture', 'cp1-unit', '--i', '1', '--poly')[0], 2)


class DecideCommandTestCase(CliTestMixin, SimpleTestCase):
    """Test cases for the decide command."""

    def test_exact_semistable(self):
        """Test Semistable with an exact zero minimum on the balanced interval."""
        code, out, _ = invoke('decide', '--fixture', 'cp1-unit', '--i', '2', '--mode', 'exact')
        self.assertEqual(code, 0)
        self.assertIn('Semistable (mode Exact, i = 2)', out)
        self.assertIn('margin minimum: 0', out)

    def test_linear_witness(self):
        """Test an Unstable verdict with its witness file on unequal angles."""
        code, out, _ = invoke('decide', '--fixture', 'cp1-unit', '--divisors', UNBALANCED,
                              '--i', '3', '--format', 'json')
        self.assertEqual(code, 0)
        results = json.loads(out)['results']
        self.assertEqual(results['decision'], 'Unstable')
        self.assertEqual(results['mode'], 'LinearOnly')
        self.assertEqual(results['q'], ['1'])
        self.assertEqual(results['minimum'], '-1')
        self.assertEqual(results['witness']['scale'], 3)

    def test_witness_file_round_trip(self):
        """Test that the witness, read back with --g, has the reported margin."""
        _, out, _ = invoke('decide', '--fixture', 'cp1-unit', '--divisors', UNBALANCED,
                           '--i', '3', '--format', 'json')
        witness = self.write('g.json', json.loads(out)['results']['witness'])
        _, out, _ = invoke('decide', '--fixture', 'cp1-unit', '--divisors', UNBALANCED,
                           '--i', '3', '--g', witness, '--format', 'json')
        self.assertEqual(json.loads(out)['results']['margin_of_g'], '-1')

    def test_linear_inconclusive_warns(self):
        """Test the escalation hint and the non-certificate warning."""
        code, out, _ = invoke('decide', '--fixture', 'cp1-unit', '--format', 'json')
        report = json.loads(out)
        self.assertEqual(report['results']['decision'], 'Inconclusive')
        self.assertEqual(report['results']['hint'], 'escalate to --mode exact or --mode sampled')
        self.assertEqual(len(report['warnings']), 1)

    def test_caps_exit_code(self):
        """Test exit code 3 with a partial report."""
        code, out, _ = invoke('decide', '--fixture', 'square-sym', '--mode', 'exact',
                              '--max-constraints', '1', '--samples', '3', '--format', 'json')
        self.assertEqual(code, 3)
        report = json.loads(out)
        self.assertTrue(report['results']['partial'])
        self.assertEqual(report['results']['mode'], 'Sampled')

    def test_deterministic_output(self):
        """Test byte-identical reports for identical jobs."""
        argv = ('decide', '--fixture', 'hirzebruch1', '--mode', 'sampled', '--samples', '10',
                '--seed', '4', '--format', 'json')
        self.assertEqual(invoke(*argv)[1], invoke(*argv)[1])

    def test_fixture_file_round_trip(self):
        """Test that a dumped fixture gives the same report as the built-in one."""
        _, document, _ = invoke('examples', 'hirzebruch1')
        path = self.write('hirzebruch1.json', document)
        for argv in (('q', '--poly'), ('decide', '--i', '1'), ('measures',)):
            self.assertEqual(invoke(*argv, '--polytope', path)[1],
                             invoke(*argv, '--fixture', 'hirzebruch1')[1])


class ErrorTestCase(CliTestMixin, SimpleTestCase):
    """Test cases for exit codes and error messages."""

    def test_bad_beta(self):
        """Test that an out-of-range beta names the field."""
        code, _, err = invoke('q', '--fixture', 'cp1-unit', '--i', '1',
                              '--divisors', '[{"facet_index": 0, "beta": "3/2"}]')
        self.assertEqual(code, 2)
        self.assertIn('divisors[0].beta', err)

    def test_bad_facet_index(self):
        """Test exit code 2 for a divisor on a missing facet."""
        code, _, err = invoke('q', '--fixture', 'cp1-unit', '--i', '1',
                              '--divisors', '[{"facet_index": 5, "beta": "1/2"}]')
        self.assertEqual(code, 2)
        self.assertIn('facet_index', err)

    def test_missing_file(self):
        """Test exit code 2 for an unreadable polytope file."""
        code, _, err = invoke('validate', '--polytope', os.path.join(self.tmp.name, 'none.json'))
        self.assertEqual(code, 2)
        self.assertIn('none.json', err)

    def test_unbounded(self):
        """Test exit code 2 for a halfspace system with no upper bound."""
        path = self.write('ray.json', {'halfspaces': [{'normal': [1], 'offset': 0}]})
        self.assertEqual(invoke('validate', '--polytope', path)[0], 2)

    def test_unknown_command_and_option(self):
        """Test exit code 2 for an unknown subcommand or flag."""
        self.assertEqual(invoke('plot')[0], 2)
        self.assertEqual(invoke('count', '--fixture', 'cp1-unit', '--colour', 'red')[0], 2)

    def test_verification_failure(self):
        """Test exit code 4 when an internal check fails."""
        with mock.patch('cli.management.commands.count.lattice_count',
                        side_effect=VerificationFailed('enumeration mismatch')):
            code, _, err = invoke('count', '--fixture', 'cp1-unit')
        self.assertEqual(code, 4)
        self.assertIn('enumeration mismatch', err)


class FutakiCommandTestCase(CliTestMixin, SimpleTestCase):
    """Test cases for the futaki and futaki-consistency commands."""

    def setUp(self):
        """Set up the file for h(x) = x on [0, 1]."""
        super().setUp()
        self.h = self.write('h.json', {'scale': 1, 'values': [[['0'], '0'], [['1'], '1']]})
        self.divisor = '[{"facet_index": 1, "beta": "1/2"}]'

    def test_futaki(self):
        """Test log_futaki_toric(x) = 1/4 with the divisor at 1."""
        code, out, _ = invoke('futaki', '--fixture', 'cp1-unit', '--divisors', self.divisor,
                              '--h', self.h, '--format', 'json')
        self.assertEqual(code, 0)
        results = json.loads(out)['results']
        self.assertEqual(results['log_futaki_toric'], '1/4')
        self.assertEqual(results['from_expansions'], '-1/4')
        self.assertTrue(results['identity_holds'])

    def test_consistency(self):
        """Test PASS with the extracted coefficient -1/4."""
        code, out, _ = invoke('futaki-consistency', '--fixture', 'cp1-unit',
                              '--divisors', self.divisor, '--h', self.h, '--imax', '5')
        self.assertEqual(code, 0)
        self.assertIn('m^n coefficient / Vol(P) = -1/4', out)
        self.assertIn('PASS', out)

    def test_not_convex(self):
        """Test exit code 2 for a concave h."""
        tent = self.write('tent.json', {'scale': 2, 'values': [[['0'], '0'], [['1/2'], '1'], [['1'], '0']]})
        code, _, _ = invoke('futaki', '--fixture', 'cp1-unit', '--h', tent)
        self.assertEqual(code, 2)

    def test_missing_h(self):
        """Test that --h is required."""
        self.assertEqual(invoke('futaki', '--fixture', 'cp1-unit')[0], 2)


class DigestTestCase(SimpleTestCase):
    """Test cases for the inputs digest."""

    def test_canonical(self):
        """Test that key order and Fraction formatting do not change the digest."""
        self.assertEqual(inputs_digest({'a': F(1, 2), 'b': [1, 2]}),
                         inputs_digest({'b': [1, 2], 'a': '1/2'}))


class ReportSchemaTestCase(CliTestMixin, SimpleTestCase):
    """Test cases for the published JSON report schema."""

    def test_every_command_follows_the_schema(self):
        """Test the JSON output of every report command against the schema."""
        h = self.write('h.json', {'scale': 1, 'values': [[['0'], '0'], [['1'], '1']]})
        divisor = '[{"facet_index": 1, "beta": "1/2"}]'
        runs = [
            ('validate', '--fixture', 'hirzebruch1'),
            ('count', '--fixture', 'hirzebruch1', '--i', '2'),
            ('measures', '--fixture', 'hirzebruch1'),
            ('q', '--fixture', 'hirzebruch1', '--i', '1'),
            ('q', '--fixture', 'hirzebruch1', '--poly'),
            ('decide', '--fixture', 'cp1-unit', '--i', '3', '--mode', 'exact'),
            ('decide', '--fixture', 'hirzebruch1', '--i', '1'),
            ('futaki', '--fixture', 'cp1-unit', '--divisors', divisor, '--h', h),
            ('futaki-consistency', '--fixture', 'cp1-unit', '--divisors', divisor, '--h', h,
             '--imax', '5'),
        ]
        commands = set()
        for argv in runs:
            code, out, err = invoke(*argv, '--format', 'json')
            self.assertEqual(code, 0, err)
            report = json.loads(out)
            validate_report(report)
            commands.add(report['command'])
        self.assertEqual(commands, set(RESULT_SCHEMA))

    def test_partial_report_follows_the_schema(self):
        """Test that the report printed with exit code 3 is still valid."""
        code, out, _ = invoke('decide', '--fixture', 'square-sym', '--mode', 'exact',
                              '--max-constraints', '1', '--samples', '3', '--format', 'json')
        self.assertEqual(code, 3)
        report = json.loads(out)
        validate_report(report)
        self.assertTrue(report['results']['partial'])

    def test_malformed_reports_are_rejected(self):
        """Test missing keys, non-canonical rationals and booleans posing as integers."""
        code, out, _ = invoke('count', '--fixture', 'simplex2', '--i', '2', '--format', 'json')
        report = json.loads(out)
        validate_report(report)
        broken = [
            {k: v for k, v in report.items() if k != 'warnings'},
            dict(report, results={'i': 2}),
            dict(report, results={'i': True, 'count': 6}),
            dict(report, command='plot'),
            dict(report, inputs_digest='abc'),
        ]
        for data in broken:
            with self.assertRaises(ValidationError):
                validate_report(data)
        measures = json.loads(invoke('measures', '--fixture', 'simplex2', '--format', 'json')[1])
        validate_report(measures)
        for bad in ('0.5', '1/1', '2/-3', ''):
            with self.assertRaises(ValidationError):
                validate_report(dict(measures, results=dict(measures['results'], volume=bad)))
