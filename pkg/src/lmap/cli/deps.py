from pathlib import Path

from lmap.schemas.report import ModelInfo, PipelineConfig
from lmap.services.alignment import trajectory_inputs
from lmap.services.classifier import NaiveBayesModel, load_classifier
from lmap.services.dataset import Dataset, load_dataset
from lmap.services.gp import load_model_set
from lmap.services.pipeline import DemoModel, prepare_demo
from lmap.services.trajectory import IngestError, relativize_to_goal
from lmap.utils.metrics import StageTimer
from pydantic import ValidationError

CLASSIFIER_FILE = 'classifier.json'
DEMO_MODELS_FILE = 'demo_models.json'
FEATURES_FILE = 'features.csv'
MODEL_INFO_FILE = 'model.json'
TIMING_FILE = 'timing.json'

EXIT_OK = 0
EXIT_FAILURE_PREDICTED = 1
EXIT_ERROR = 2
EXIT_SINGLE_CLASS = 3


class CommandError(Exception):
    """Raised by commands to end the run with a given exit code."""

    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail


def get_config(args) -> PipelineConfig:
    """Dependency to build the pipeline options from parsed arguments"""
    dataset = args.dataset
    options = {
        'dataset_dirs': dataset if isinstance(dataset, list) else [dataset],
        'model_out': getattr(args, 'model', None),
        'dtw_enabled': not getattr(args, 'no_dtw', False),
        'parallel_fits': not getattr(args, 'serial', False),
        'seed': getattr(args, 'seed', None),
    }
    if getattr(args, 'variance_floor', None) is not None:
        options['variance_floor'] = args.variance_floor
    try:
        return PipelineConfig(**options)
    except ValidationError as e:
        raise CommandError(EXIT_ERROR, f'invalid options: {e}')


def get_dataset(path: Path, timer: StageTimer) -> Dataset:
    """Dependency to load a dataset directory"""
    with timer.stage('load'):
        try:
            return load_dataset(path)
        except IngestError as e:
            raise CommandError(EXIT_ERROR, str(e))


def get_trained_model(config: PipelineConfig, dataset: Dataset,
                      timer: StageTimer) -> tuple[NaiveBayesModel, DemoModel, ModelInfo]:
    """Dependency to restore a trained classifier and the demonstration's model set"""
    model_dir = config.model_out
    if model_dir is None or not (model_dir / CLASSIFIER_FILE).exists():
        raise CommandError(EXIT_ERROR, f'no trained model in {model_dir} (run `map train` first)')
    with timer.stage('load'):
        try:
            info = ModelInfo.model_validate_json((model_dir / MODEL_INFO_FILE).read_text(encoding='utf-8'))
            classifier = load_classifier(model_dir / CLASSIFIER_FILE)
        except (OSError, ValueError) as e:
            raise CommandError(EXIT_ERROR, f'{model_dir}: unreadable model files: {e}')

    demo = relativize_to_goal(dataset.demo)
    if demo.id != info.demo_id:
        raise CommandError(EXIT_ERROR, f'model was trained on demonstration {info.demo_id}, dataset has {demo.id}')
    with timer.stage('load'):
        try:
            models = load_model_set(model_dir / DEMO_MODELS_FILE, trajectory_inputs(demo), demo.wrenches)
        except (OSError, ValueError) as e:
            raise CommandError(EXIT_ERROR, f'{model_dir / DEMO_MODELS_FILE}: {e}')
    return classifier, prepare_demo(dataset.demo, config, timer, models=models), info
