import json
import logging
from pathlib import Path

from lmap.cli.deps import CLASSIFIER_FILE, DEMO_MODELS_FILE, EXIT_ERROR, EXIT_OK, EXIT_SINGLE_CLASS
from lmap.cli.deps import FEATURES_FILE, MODEL_INFO_FILE, TIMING_FILE, CommandError, get_config
from lmap.cli.deps import get_dataset
from lmap.schemas.report import ModelInfo
from lmap.services.classifier import TrainingError, save_classifier
from lmap.services.gp import save_model_set
from lmap.services.pipeline import train_map
from lmap.services.similarity import write_features_csv
from lmap.utils.metrics import StageTimer

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser('train', help='train a movement assessment primitive on a labeled dataset')
    parser.add_argument('--dataset', type=Path, required=True, action='append', help='dataset directory')
    parser.add_argument('--model', type=Path, required=True, help='output model directory')
    parser.add_argument('--no-dtw', action='store_true', help='pair samples by index instead of DTW')
    parser.add_argument('--serial', action='store_true', help='fit wrench components one at a time')
    parser.add_argument('--variance-floor', type=float, default=None)
    parser.set_defaults(handler=run)
    return parser


def run(args) -> int:
    """Run the training branch and persist classifier, demo models, features and timing."""
    config = get_config(args)
    if len(config.dataset_dirs) != 1:
        raise CommandError(EXIT_ERROR, 'train takes exactly one --dataset')
    timer = StageTimer()
    dataset = get_dataset(config.dataset_dir, timer)
    if len(dataset.labeled) < 2:
        raise CommandError(EXIT_ERROR, f'{config.dataset_dir}: need at least 2 labeled reproductions, '
                                       f'found {len(dataset.labeled)}')
    missing = [o.value for o, count in dataset.label_counts().items() if count == 0]
    if missing:
        raise CommandError(EXIT_SINGLE_CLASS, f'{config.dataset_dir}: no reproductions labeled {missing[0]}')
    try:
        trained = train_map(dataset, config, timer)
    except TrainingError as e:
        raise CommandError(EXIT_SINGLE_CLASS, str(e))

    model_dir = config.model_out
    model_dir.mkdir(parents=True, exist_ok=True)
    save_classifier(trained.classifier, model_dir / CLASSIFIER_FILE)
    save_model_set(trained.demo.models, model_dir / DEMO_MODELS_FILE)
    write_features_csv(trained.rows, model_dir / FEATURES_FILE)
    info = ModelInfo(
        demo_id=trained.demo.demo.id,
        n_samples=trained.demo.demo.n,
        n_reproductions=len(trained.rows),
        dtw_enabled=config.dtw_enabled,
        variance_floor=config.variance_floor,
    )
    (model_dir / MODEL_INFO_FILE).write_text(info.model_dump_json(indent=2) + '\n', encoding='utf-8')
    (model_dir / TIMING_FILE).write_text(json.dumps(timer.get_metrics(), indent=2) + '\n', encoding='utf-8')
    logger.info(f'Model written to {model_dir}')
    print(model_dir)
    return EXIT_OK
