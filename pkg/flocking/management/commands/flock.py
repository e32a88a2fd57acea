from decouple import Csv
from django.core.management.base import BaseCommand, CommandError

from flocking.exceptions import FlockingError
from flocking.services.command_service import CliCommand, CommandService
from flocking.utils.constants import AnalysisConfig, Modes


class Command(BaseCommand):
    help = 'Run optic-flow flocking scenarios, sweeps and analyses'

    def add_arguments(self, parser):
        parser.add_argument(
            'verb',
            choices=Modes.VERBS,
            help='What to do: run, sweep, analyze, flowfield or noisebound',
        )
        parser.add_argument(
            '--config',
            help='Scenario document (key = value lines); defaults apply when omitted',
        )
        parser.add_argument(
            '--out',
            help='Output directory (default: FLOCK_OUTPUT_DIR)',
        )
        parser.add_argument(
            '--set',
            action='append',
            default=[],
            dest='overrides',
            metavar='KEY=VALUE',
            help='Override one scenario key; repeatable',
        )
        parser.add_argument(
            '--jobs',
            type=int,
            help='Parallel runs for sweep (default: FLOCK_SWEEP_JOBS)',
        )
        parser.add_argument(
            '--seed',
            type=int,
            help='Override the scenario seed',
        )
        parser.add_argument(
            '--axis',
            choices=Modes.SWEEP_AXES,
            help='Parameter to sweep',
        )
        parser.add_argument(
            '--values',
            type=Csv(cast=float),
            default=[],
            help='Comma-separated sweep values',
        )
        parser.add_argument(
            '--log',
            dest='log_path',
            help='Trajectory CSV to analyze instead of running the scenario',
        )
        parser.add_argument(
            '--agent',
            type=int,
            default=AnalysisConfig.OSCILLATION_AGENT,
            help='Agent index for analyze and flowfield (default: 0)',
        )
        parser.add_argument(
            '--field',
            dest='field_name',
            default=AnalysisConfig.OSCILLATION_FIELD,
            help='State variable to analyze (default: theta)',
        )
        parser.add_argument(
            '--asymptote',
            type=float,
            help='Settled value for analyze (default: mean of the last 10%% of samples)',
        )
        parser.add_argument(
            '--resolution',
            type=float,
            default=AnalysisConfig.FLOW_RESOLUTION,
            help='Flow profile bin width in radians (default: one degree)',
        )
        parser.add_argument(
            '--time',
            type=float,
            help='Time of the state to profile (default: initial state)',
        )
        parser.add_argument('--n-bar', dest='n_bar', type=float, help='Sensor noise bound')
        parser.add_argument('--gamma', type=float, help='Occlusion half-angle, radians')
        parser.add_argument('--rho', type=float, help='Relative-velocity scale')

    def handle(self, *args, **options):
        cmd = CliCommand(
            verb=options['verb'],
            config_path=options['config'],
            output_dir=options['out'],
            overrides=options['overrides'],
            jobs=options['jobs'],
            seed=options['seed'],
            axis=options['axis'],
            values=options['values'],
            log_path=options['log_path'],
            agent=options['agent'],
            field_name=options['field_name'],
            asymptote=options['asymptote'],
            resolution=options['resolution'],
            time=options['time'],
            n_bar=options['n_bar'],
            gamma=options['gamma'],
            rho=options['rho'],
        )

        try:
            result = CommandService(stdout=self.stdout).execute(cmd)
        except (FlockingError, OSError) as e:
            raise CommandError(f"{cmd.verb} failed: {e}")

        for path in result.outputs:
            self.stdout.write(self.style.SUCCESS(f"Wrote {path}"))
