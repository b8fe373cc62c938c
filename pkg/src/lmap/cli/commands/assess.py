import logging
from pathlib import Path

from lmap.cli.deps import EXIT_ERROR, EXIT_FAILURE_PREDICTED, EXIT_OK, CommandError, get_config
from lmap.cli.deps import get_dataset, get_trained_model
from lmap.schemas.trajectory import Outcome
from lmap.services.pipeline import assess_reproduction
from lmap.services.trajectory import IngestError, load_trajectory
from lmap.utils.metrics import StageTimer

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser('assess', help='assess one reproduction with a trained model')
    parser.add_argument('--dataset', type=Path, required=True, action='append',
                        help='dataset directory holding the demonstration')
    parser.add_argument('--model', type=Path, required=True, help='trained model directory')
    parser.add_argument('--serial', action='store_true', help='fit wrench components one at a time')
    parser.add_argument('trajectory', type=Path, help='reproduction CSV or JSON')
    parser.set_defaults(handler=run)
    return parser


def format_assessment(assessment) -> str:
    line = f'{assessment.trajectory_id} {assessment.p_success:.6f} {assessment.predicted.value}'
    return line + ' degenerate' if assessment.features.degenerate else line


def run(args) -> int:
    """Print `id p_success predicted`; exit 0 when success is predicted, 1 otherwise."""
    config = get_config(args)
    timer = StageTimer()
    dataset = get_dataset(config.dataset_dir, timer)
    classifier, demo, info = get_trained_model(config, dataset, timer)
    config = config.model_copy(update={'dtw_enabled': info.dtw_enabled})

    with timer.stage('load'):
        try:
            rep = load_trajectory(args.trajectory)
        except IngestError as e:
            raise CommandError(EXIT_ERROR, str(e))

    assessment = assess_reproduction(classifier, demo, rep, config, timer)
    print(format_assessment(assessment))
    return EXIT_OK if assessment.predicted is Outcome.SUCCESS else EXIT_FAILURE_PREDICTED
