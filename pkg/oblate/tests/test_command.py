import csv
import io
import json
import math
import shutil
import tempfile
from pathlib import Path

from django.conf import settings
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase

from oblate.config import SweepRange, parse_config_text
from oblate.exceptions import ConfigError
from oblate.renderers import CSVRenderer

HEKTOR_CONFIG = Path(settings.BASE_DIR) / 'configs' / 'hektor.cfg'


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def run_command(self, *args):
        stdout, stderr = io.StringIO(), io.StringIO()
        call_command('hill4body', *args, stdout=stdout, stderr=stderr)
        return stdout.getvalue(), stderr.getvalue()

    def read_table(self, *args):
        out, _ = self.run_command(*args)
        return list(csv.DictReader(io.StringIO(out)))

    def write_config(self, text):
        path = self.tmp / 'system.cfg'
        path.write_text(text, encoding='utf-8')
        return str(path)

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(*args)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


class HarmonicsCommandTests(CommandTestCase):
    def test_default_table(self):
        out, _ = self.run_command('harmonics')
        lines = out.splitlines()
        self.assertEqual(lines[0], 'n,m,C_nm')
        self.assertEqual(len(lines), 11)
        self.assertTrue(lines[1].startswith('0,0,'))

    def test_odd_degree_rejected(self):
        error = self.assertExitCode(2, 'harmonics', '--max-degree', '5')
        self.assertIn('invalid-degree', str(error))

    def test_json_output(self):
        out, _ = self.run_command('harmonics', '--max-degree', '2', '--format', 'json')
        rows = json.loads(out)
        self.assertEqual([(row['n'], row['m']) for row in rows], [(0, 0), (2, 0), (2, 2)])


class SystemCommandTests(CommandTestCase):
    def test_central_config(self):
        out, err = self.run_command('central-config', '--config', str(HEKTOR_CONFIG))
        rows = list(csv.DictReader(io.StringIO(out)))
        self.assertEqual([row['body'] for row in rows], ['1', '2', '3'])
        self.assertIn('max residual', err)

    def test_equilibria(self):
        rows = self.read_table('equilibria', '--config', str(HEKTOR_CONFIG))
        self.assertEqual(len(rows), 6)
        self.assertEqual([row['axis'] for row in rows], ['x', 'x', 'y', 'y', 'z', 'z'])
        self.assertAlmostEqual(float(rows[0]['r_star']), 0.6935267570, delta=1e-9)
        self.assertAlmostEqual(float(rows[1]['x']), -0.6935267570, delta=1e-9)
        self.assertAlmostEqual(float(rows[4]['r_km']), 110.028, delta=0.01)

    def test_non_oblate_equilibria(self):
        rows = self.read_table('equilibria', '--non-oblate', '--config', str(HEKTOR_CONFIG))
        self.assertEqual(len(rows), 4)
        self.assertAlmostEqual(float(rows[2]['r_star']), 7.7545747024, delta=1e-9)

    def test_stability(self):
        out, _ = self.run_command('stability', '--config', str(HEKTOR_CONFIG))
        reader = csv.DictReader(io.StringIO(out))
        self.assertEqual(reader.fieldnames[:11], ['axis', 'r_star', 'x', 'y', 'z', 'Oxx', 'Oyy', 'Ozz', 'A', 'B', 'D'])
        self.assertEqual(reader.fieldnames[-1], 'class')
        classes = {row['axis']: row['class'] for row in reader}
        self.assertEqual(classes, {
            'x': 'center x center x saddle',
            'y': 'center x center x center',
            'z': 'center x complex-saddle',
        })

    def test_stability_without_oblateness_skips_z_axis(self):
        path = self.write_config(HEKTOR_CONFIG.read_text(encoding='utf-8').replace('c20 = -0.476775', 'c20 = 0'))
        rows = self.read_table('stability', '--config', path)
        self.assertEqual([row['axis'] for row in rows], ['x', 'y'])

    def test_output_is_deterministic(self):
        first, second = self.tmp / 'first.csv', self.tmp / 'second.csv'
        _, err = self.run_command('equilibria', '--config', str(HEKTOR_CONFIG), '--out', str(first))
        self.run_command('equilibria', '--config', str(HEKTOR_CONFIG), '--out', str(second))
        self.assertIn('Wrote 6 rows', err)
        self.assertEqual(first.read_bytes(), second.read_bytes())


class ConfigErrorTests(CommandTestCase):
    def config_without(self, key):
        lines = HEKTOR_CONFIG.read_text(encoding='utf-8').splitlines()
        return self.write_config('\n'.join(line for line in lines if not line.startswith(key)))

    def test_missing_key(self):
        error = self.assertExitCode(2, 'equilibria', '--config', self.config_without('c20'))
        self.assertIn('c20', str(error))

    def test_unknown_key(self):
        path = self.write_config(HEKTOR_CONFIG.read_text(encoding='utf-8') + 'albedo = 0.1\n')
        error = self.assertExitCode(2, 'equilibria', '--config', path)
        self.assertIn('albedo', str(error))

    def test_prolate_tertiary(self):
        path = self.write_config(HEKTOR_CONFIG.read_text(encoding='utf-8').replace('c20 = -0.476775', 'c20 = 0.2'))
        self.assertExitCode(2, 'equilibria', '--config', path)

    def test_missing_file(self):
        self.assertExitCode(2, 'equilibria', '--config', str(self.tmp / 'absent.cfg'))

    def test_empty_range(self):
        self.assertExitCode(2, 'sweep-z', '--count', '1')

    def test_range_outside_domain(self):
        self.assertExitCode(2, 'sweep-z', '--start', '-0.5', '--stop', '0.1')
        self.assertExitCode(2, 'classify', '--start', '0.1', '--stop', '0.9', '--spacing', 'linear')
        self.assertExitCode(2, 'forces', '--start', '10', '--stop', '1000')


class SweepCommandTests(CommandTestCase):
    def test_forces_include_moonlet(self):
        rows = self.read_table('forces', '--config', str(HEKTOR_CONFIG))
        self.assertEqual(len(rows), 51)
        moonlet = [row for row in rows if row['moonlet'] == 'true']
        self.assertEqual(len(moonlet), 1)
        self.assertEqual(float(moonlet[0]['r_km']), 957.5)
        j2_over_monopole = float(moonlet[0]['log10_j2']) - float(moonlet[0]['log10_monopole'])
        self.assertAlmostEqual(j2_over_monopole, math.log10(1.5 * (92.0 / 957.5) ** 2 * 0.476775), delta=1e-12)
        self.assertLess(j2_over_monopole, 0.0)
        self.assertNotIn('log10_sun_tidal', rows[0])

    def test_forces_tidal_columns(self):
        rows = self.read_table('forces', '--tidal', '--count', '3', '--config', str(HEKTOR_CONFIG))
        self.assertEqual(len(rows), 4)
        self.assertLess(float(rows[0]['log10_sun_tidal']), float(rows[0]['log10_sun']))

    def test_sweep_z(self):
        rows = self.read_table('sweep-z', '--start', '-0.476775', '--stop', '-0.15', '--count', '2',
                               '--config', str(HEKTOR_CONFIG))
        self.assertAlmostEqual(float(rows[0]['r_z_km']), 110.028, delta=0.01)
        self.assertAlmostEqual(float(rows[1]['r_z_km']), 62.0, delta=1.0)
        self.assertAlmostEqual(float(rows[1]['r_hat_z_km']), 61.716, delta=0.01)
        for row in rows:
            self.assertLess(abs(float(row['r_z_km']) / float(row['r_hat_z_km']) - 1.0), 1e-3)

    def test_sweep_krein(self):
        out, _ = self.run_command('sweep-krein', '--count', '5', '--config', str(HEKTOR_CONFIG))
        lines = out.splitlines()
        self.assertEqual(lines[0], 'r_z,c,a,abs_b,imag_gap')
        self.assertEqual(len(lines), 6)

    def test_classify_reports_transition(self):
        out, err = self.run_command('classify', '--axis', 'y', '--count', '5', '--config', str(HEKTOR_CONFIG))
        rows = list(csv.DictReader(io.StringIO(out)))
        self.assertEqual(len(rows), 5)
        self.assertIn('mu* = 0.01', err)

    def test_integrate(self):
        rows = self.read_table('integrate', '--state', '0.3', '0', '0.05', '0', '1.5', '0',
                               '--t-end', '1', '--samples', '11', '--config', str(HEKTOR_CONFIG))
        self.assertEqual(len(rows), 11)
        self.assertEqual(list(rows[0]), ['t', 'x', 'y', 'z', 'vx', 'vy', 'vz', 'H'])
        self.assertEqual(float(rows[-1]['t']), 1.0)

    def test_integrate_rejects_loose_tolerance(self):
        self.assertExitCode(2, 'integrate', '--state', '0.3', '0', '0', '0', '1.5', '0', '--rel-tol', '0.1')

    def test_integrate_rejects_canonical_hill_state(self):
        error = self.assertExitCode(2, 'integrate', '--state', '0.3', '0', '0', '0', '1.5', '0',
                                    '--frame', 'hill-shifted', '--representation', 'canonical-momentum')
        self.assertIn('frame-mismatch', str(error))

    def test_canonical_run_names_momenta(self):
        rows = self.read_table('integrate', '--model', '4bp', '--representation', 'canonical-momentum',
                               '--state', '0.2', '0.3', '0.1', '-0.3', '0.2', '0',
                               '--t-end', '0.1', '--samples', '3', '--config', str(HEKTOR_CONFIG))
        self.assertEqual(len(rows), 3)
        self.assertEqual(list(rows[0]), ['t', 'x', 'y', 'z', 'px', 'py', 'pz', 'H'])


class RendererTests(SimpleTestCase):
    def test_round_trip_precision(self):
        content = CSVRenderer().render([{'a': 0.1, 'b': True, 'c': None}])
        self.assertEqual(content, b'a,b,c\n0.10000000000000001,true,\n')

    def test_header_without_rows(self):
        content = CSVRenderer().render([], renderer_context={'header': ['x', 'y']})
        self.assertEqual(content, b'x,y\n')


class ConfigParsingTests(SimpleTestCase):
    def test_comments_and_blank_lines(self):
        values = parse_config_text('# system\n\nc20 = -0.4  # zonal\nradius_km=92\n')
        self.assertEqual(values, {'c20': '-0.4', 'radius_km': '92'})

    def test_malformed_lines(self):
        for text in ('c20 -0.4\n', 'c20 = 1\nc20 = 2\n', ' = 3\n'):
            with self.subTest(text=text):
                with self.assertRaises(ConfigError):
                    parse_config_text(text)

    def test_sweep_range(self):
        self.assertEqual(len(SweepRange.from_values(start=1.0, stop=10.0, count=4, spacing='log').grid()), 4)
        with self.assertRaises(ConfigError):
            SweepRange.from_values(start=-1.0, stop=10.0, count=4, spacing='log')
        with self.assertRaises(ConfigError):
            SweepRange.from_values(start=1.0, stop=1.0, count=4)
