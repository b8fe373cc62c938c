import logging
from pathlib import Path

from lmap.cli.deps import EXIT_ERROR, EXIT_OK, CommandError, get_config
from lmap.schemas.bench import FailureMode, ScenarioSpec, Task
from lmap.services.bench import generate
from lmap.services.dataset import write_dataset
from pydantic import ValidationError

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser('generate', help='write a synthetic labeled dataset')
    parser.add_argument('--task', type=Task, choices=list(Task), default=Task.SNAPFIT,
                        metavar='{' + ','.join(t.value for t in Task) + '}')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--reps', type=int, default=20, help='number of reproductions')
    parser.add_argument('--failures', type=int, default=None, help='failed reproductions (default: half)')
    parser.add_argument('--samples', type=int, default=None, help='samples per trajectory (default: per task)')
    parser.add_argument('--start-jitter', type=float, default=0.01, help='std of start offsets in meters')
    parser.add_argument('--phase-shift', type=float, default=0.0, help='shift of the contact onset')
    parser.add_argument('--failure-mode', type=FailureMode, choices=list(FailureMode), default=None,
                        metavar='{' + ','.join(m.value for m in FailureMode) + '}')
    parser.add_argument('--dataset', type=Path, required=True, help='output directory')
    parser.add_argument('--force', action='store_true', help='overwrite a non-empty output directory')
    parser.set_defaults(handler=run)
    return parser


def run(args) -> int:
    """Generate a dataset and print its directory."""
    config = get_config(args)
    try:
        spec = ScenarioSpec(
            task=args.task,
            seed=config.seed,
            n_reps=args.reps,
            n_failures=args.failures,
            n_samples=args.samples,
            start_jitter=args.start_jitter,
            phase_shift=args.phase_shift,
            failure_mode=args.failure_mode,
        )
    except ValidationError as e:
        raise CommandError(EXIT_ERROR, f'invalid scenario: {e}')

    dataset = generate(spec)
    try:
        path = write_dataset(dataset, config.dataset_dir, force=args.force)
    except FileExistsError as e:
        raise CommandError(EXIT_ERROR, str(e))
    print(path)
    return EXIT_OK
