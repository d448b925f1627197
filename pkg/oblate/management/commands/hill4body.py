import argparse
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework.renderers import JSONRenderer

from oblate.config import RunConfig, SweepRange, load_physical_inputs, table_columns
from oblate.core_types import normalize_system
from oblate.equilibria import Axis
from oblate.exceptions import CONFIG_EXIT_CODE, HillFourBodyError
from oblate.harmonics import HEKTOR_SHAPE, EllipsoidShape
from oblate.propagate import Model
from oblate.renderers import CSVRenderer
from oblate.serializers import (
    CanonicalTrajectoryRowSerializer,
    ClassificationRowSerializer,
    EquilibriumReportSerializer,
    EquilibriumRowSerializer,
    ForcesRowSerializer,
    HarmonicRowSerializer,
    KreinRowSerializer,
    SweepZRowSerializer,
    TrajectoryRowSerializer,
    VertexRowSerializer,
)
from oblate.states import Frame, PhaseState, Representation
from oblate.sweep_service import SweepService

logger = logging.getLogger(__name__)


def _add_range(parser, start, stop, count, spacing='linear'):
    parser.add_argument('--start', type=float, default=start)
    parser.add_argument('--stop', type=float, default=stop)
    parser.add_argument('--count', type=int, default=count)
    parser.add_argument('--spacing', choices=['linear', 'log'], default=spacing)


class Command(BaseCommand):
    help = 'Hill four-body problem with an oblate tertiary: tables for harmonics, equilibria, stability and sweeps'

    def add_arguments(self, parser):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--config', help='System config file (key = value)')
        common.add_argument('--format', choices=['csv', 'json'], default='csv')
        common.add_argument('--out', help='Output file; standard output when omitted')

        subparsers = parser.add_subparsers(dest='subcommand', required=True)

        harmonics = subparsers.add_parser(
            'harmonics', parents=[common], help='Ellipsoid harmonic coefficients C_nm'
        )
        harmonics.add_argument(
            '--semi-axes', type=float, nargs=3, metavar=('A', 'B', 'C'),
            default=[HEKTOR_SHAPE.a, HEKTOR_SHAPE.b, HEKTOR_SHAPE.c],
        )
        harmonics.add_argument('--reference-radius', type=float, default=HEKTOR_SHAPE.reference_radius)
        harmonics.add_argument('--max-degree', type=int, default=6)

        subparsers.add_parser('central-config', parents=[common], help='Central configuration vertices')

        equilibria = subparsers.add_parser('equilibria', parents=[common], help='Axis equilibria')
        equilibria.add_argument(
            '--non-oblate', action='store_true', help='Evaluate the c = 0 continuation'
        )

        subparsers.add_parser('stability', parents=[common], help='Stability spectra of the axis equilibria')

        forces = subparsers.add_parser('forces', parents=[common], help='Perturbation magnitudes near the tertiary')
        _add_range(forces, 100.0, 1e6, 50, 'log')
        forces.add_argument('--tidal', action='store_true', help='Add differential solar and Jovian terms')

        sweep_z = subparsers.add_parser('sweep-z', parents=[common], help='z-axis equilibrium against C20')
        _add_range(sweep_z, -0.95, -0.001, 100)

        sweep_krein = subparsers.add_parser(
            'sweep-krein', parents=[common], help='Krein quartet along the z-axis family'
        )
        _add_range(sweep_krein, 0.000892354498497342, 0.01, 100)

        classify = subparsers.add_parser(
            'classify', parents=[common], help='Stability type of one axis equilibrium against mu'
        )
        classify.add_argument('--axis', choices=Axis.values, default=Axis.Y)
        _add_range(classify, 1e-4, 0.5, 50, 'log')

        integrate = subparsers.add_parser('integrate', parents=[common], help='Propagate a trajectory')
        integrate.add_argument('--model', choices=Model.values, default=Model.HILL)
        integrate.add_argument(
            '--state', type=float, nargs=6, required=True, metavar=('X', 'Y', 'Z', 'VX', 'VY', 'VZ'),
        )
        integrate.add_argument('--frame', choices=Frame.values, help='Defaults to the model\'s natural frame')
        integrate.add_argument('--representation', choices=Representation.values, default=Representation.VELOCITY)
        integrate.add_argument('--t-end', type=float, default=10.0)
        integrate.add_argument('--samples', type=int, default=101)
        integrate.add_argument('--rel-tol', type=float, default=settings.HILL4BODY['REL_TOL'])
        integrate.add_argument('--abs-tol', type=float, default=settings.HILL4BODY['ABS_TOL'])

    def handle(self, *args, **options):
        subcommand = options['subcommand']
        handler = getattr(self, f"handle_{subcommand.replace('-', '_')}")
        try:
            run = self.run_config(options)
            rows, columns = handler(run, options)
        except HillFourBodyError as e:
            logger.error(f"{subcommand} failed: {e}")
            raise CommandError(str(e), returncode=e.exit_code) from e

        self.emit(run, rows, columns)

    def run_config(self, options) -> RunConfig:
        sweep = None
        if options.get('count') is not None:
            sweep = SweepRange.from_values(
                start=options['start'], stop=options['stop'],
                count=options['count'], spacing=options['spacing'],
            )
        return RunConfig(
            subcommand=options['subcommand'],
            input_path=options.get('config'),
            output_format=options.get('format') or 'csv',
            output_path=options.get('out'),
            sweep=sweep,
        )

    def emit(self, run: RunConfig, rows, columns):
        if run.output_format == 'json':
            content = JSONRenderer().render(rows) + b'\n'
        else:
            content = CSVRenderer().render(rows, renderer_context={'header': columns})

        if run.writes_to_stdout:
            self.stdout.write(content.decode('utf-8'), ending='')
            return
        try:
            Path(run.output_path).write_bytes(content)
        except OSError as e:
            raise CommandError(f'cannot write {run.output_path}: {e.strerror or e}', returncode=CONFIG_EXIT_CODE)
        self.stderr.write(self.style.SUCCESS(f'Wrote {len(rows)} rows to {run.output_path}'))

    def _system(self, run: RunConfig):
        inputs = load_physical_inputs(run.input_path)
        return inputs, normalize_system(inputs)

    # Subcommands

    def handle_harmonics(self, run, options):
        a, b, c = options['semi_axes']
        shape = EllipsoidShape(a=a, b=b, c=c, reference_radius=options['reference_radius'])
        rows = SweepService.harmonics(shape, options['max_degree'])
        return HarmonicRowSerializer(rows, many=True).data, table_columns(HarmonicRowSerializer)

    def handle_central_config(self, run, options):
        _, params = self._system(run)
        result = SweepService.central_config(params)
        triangle = result['triangle']
        self.stderr.write(self.style.SUCCESS(
            f"v = {triangle.v:.17g}, omega = {triangle.omega:.17g}, "
            f"max residual {result['max_residual']:.3e}, r12 shift {result['r12_shift_km']:.6g} km"
        ))
        return VertexRowSerializer(result['rows'], many=True).data, table_columns(VertexRowSerializer)

    def handle_equilibria(self, run, options):
        _, params = self._system(run)
        rows = SweepService.equilibria(params, non_oblate=options['non_oblate'])
        return EquilibriumRowSerializer(rows, many=True).data, table_columns(EquilibriumRowSerializer)

    def handle_stability(self, run, options):
        _, params = self._system(run)
        reports = SweepService.stability(params)
        return EquilibriumReportSerializer(reports, many=True).data, EquilibriumReportSerializer.columns()

    def handle_forces(self, run, options):
        inputs, params = self._system(run)
        rows = SweepService.forces(inputs, params, run.sweep.grid(), tidal=options['tidal'])
        columns = table_columns(ForcesRowSerializer)
        if not options['tidal']:
            columns = [column for column in columns if not column.endswith('_tidal')]
        return ForcesRowSerializer(rows, many=True).data, columns

    def handle_sweep_z(self, run, options):
        _, params = self._system(run)
        rows = SweepService.sweep_z(params, run.sweep.grid())
        return SweepZRowSerializer(rows, many=True).data, table_columns(SweepZRowSerializer)

    def handle_sweep_krein(self, run, options):
        _, params = self._system(run)
        check = SweepService.sweep_krein(params, run.sweep.grid())
        return KreinRowSerializer(check.rows, many=True).data, table_columns(KreinRowSerializer)

    def handle_classify(self, run, options):
        _, params = self._system(run)
        sweep = SweepService.classify(params, Axis(options['axis']), run.sweep.grid())
        for below, above, mu_star in sweep.sign_changes:
            self.stderr.write(self.style.SUCCESS(
                f'D changes sign in [{below:.10g}, {above:.10g}]: mu* = {mu_star:.10f}'
            ))
        if sweep.note:
            self.stderr.write(self.style.WARNING(sweep.note))
        return ClassificationRowSerializer(sweep.rows, many=True).data, table_columns(ClassificationRowSerializer)

    def handle_integrate(self, run, options):
        _, params = self._system(run)
        model = Model(options['model'])
        frame = options['frame'] or (Frame.SYNODIC_4BP if model == Model.FOUR_BODY else Frame.HILL_ROTATED)
        initial = PhaseState.from_vector(Frame(frame), options['state'], Representation(options['representation']))
        trajectory = SweepService.integrate(
            params, initial, options['t_end'], options['samples'], model,
            options['rel_tol'], options['abs_tol'],
        )
        self.stderr.write(self.style.SUCCESS(
            f'{len(trajectory.states)} samples, max energy drift {trajectory.max_energy_drift:.3e}'
        ))
        serializer_class = TrajectoryRowSerializer
        if trajectory.representation == Representation.CANONICAL:
            serializer_class = CanonicalTrajectoryRowSerializer
        return serializer_class(trajectory.rows(), many=True).data, table_columns(serializer_class)
