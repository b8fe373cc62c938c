"""Training and application of movement assessment primitives.

Training: relativize the demonstration to its goal pose and fit its six wrench
models once; for every labeled reproduction relativize, align onto the
demonstration grid, fit the reproduction's models and extract the similarity
features; train the Naive Bayes classifier on the labeled features.

Application runs the same per-reproduction steps and classifies the features.
"""

import logging
from dataclasses import dataclass

import numpy as np
from lmap.schemas.report import AssessmentRecord, EvalMode, EvaluationReport, PipelineConfig
from lmap.services.alignment import align_pair, trajectory_inputs
from lmap.services.classifier import Assessment, ConfusionMatrix, Evaluation, NaiveBayesModel
from lmap.services.classifier import classify, evaluate_cross, evaluate_loocv, train_classifier
from lmap.services.dataset import Dataset
from lmap.services.gp import WrenchModelSet, fit_model_set
from lmap.services.similarity import FeatureRow, FeatureVector, extract_features
from lmap.services.trajectory import Trajectory, relativize_to_goal
from lmap.utils.metrics import StageTimer

logger = logging.getLogger(__name__)

__all__ = [
    'DemoModel',
    'TrainedMap',
    'prepare_demo',
    'reproduction_features',
    'dataset_features',
    'train_map',
    'assess_reproduction',
    'evaluate_datasets',
]


@dataclass(frozen=True, eq=False)
class DemoModel:
    """Goal-relative demonstration with its fitted wrench models."""
    demo: Trajectory
    models: WrenchModelSet

    @property
    def inputs(self) -> np.ndarray:
        return self.models.inputs


@dataclass(frozen=True, eq=False)
class TrainedMap:
    classifier: NaiveBayesModel
    demo: DemoModel
    rows: list[FeatureRow]


def prepare_demo(demo: Trajectory, config: PipelineConfig, timer: StageTimer | None = None,
                 models: WrenchModelSet | None = None) -> DemoModel:
    """Relativize the demonstration and fit its model set, unless `models` is given."""
    timer = timer or StageTimer()
    with timer.stage('relativize'):
        demo = relativize_to_goal(demo)
    if models is None:
        with timer.stage('gp_fit'):
            models = fit_model_set(trajectory_inputs(demo), demo.wrenches, parallel=config.parallel_fits)
    logger.info(f'Demonstration {demo.id}: {demo.n} samples')
    return DemoModel(demo, models)


def reproduction_features(demo: DemoModel, rep: Trajectory, config: PipelineConfig,
                          timer: StageTimer | None = None) -> FeatureVector:
    timer = timer or StageTimer()
    with timer.stage('relativize'):
        rep = relativize_to_goal(rep)
    with timer.stage('align'):
        pair = align_pair(demo.demo, rep, use_dtw=config.dtw_enabled)
    with timer.stage('gp_fit'):
        rep_models = fit_model_set(pair.rep_inputs, pair.rep_wrench, parallel=config.parallel_fits)
    with timer.stage('features'):
        features = extract_features(demo.models, rep_models)
    logger.debug(f'{rep.id}: m = {np.round(features.m, 4).tolist()}')
    return features


def dataset_features(dataset: Dataset, config: PipelineConfig, timer: StageTimer | None = None,
                     labeled_only: bool = True) -> tuple[DemoModel, list[FeatureRow]]:
    """Feature rows of a dataset's reproductions, in file order."""
    timer = timer or StageTimer()
    demo = prepare_demo(dataset.demo, config, timer)
    reps = dataset.labeled if labeled_only else dataset.reps
    if labeled_only and len(reps) < len(dataset.reps):
        logger.warning(f'{dataset.name}: skipping {len(dataset.reps) - len(reps)} unlabeled reproductions')
    rows = [FeatureRow(rep.id, reproduction_features(demo, rep, config, timer), rep.label) for rep in reps]
    return demo, rows


def train_map(dataset: Dataset, config: PipelineConfig, timer: StageTimer | None = None) -> TrainedMap:
    """Fit the demonstration, featurize every labeled reproduction and train the classifier.

    Raises:
        TrainingError when the labels do not cover both outcomes
    """
    timer = timer or StageTimer()
    demo, rows = dataset_features(dataset, config, timer)
    with timer.stage('classify'):
        model = train_classifier([r.features for r in rows], [r.label for r in rows], config.variance_floor)
    logger.info(f'Trained on {len(rows)} reproductions: {model.success.count} successes, '
                f'{model.failure.count} failures')
    return TrainedMap(model, demo, rows)


def assess_reproduction(classifier: NaiveBayesModel, demo: DemoModel, rep: Trajectory,
                        config: PipelineConfig, timer: StageTimer | None = None) -> Assessment:
    timer = timer or StageTimer()
    features = reproduction_features(demo, rep, config, timer)
    with timer.stage('classify'):
        return classify(classifier, features, rep.id)


def _records(name: str, evaluation: Evaluation) -> list[AssessmentRecord]:
    return [
        AssessmentRecord(
            dataset=name,
            trajectory_id=a.trajectory_id,
            actual=actual,
            predicted=a.predicted,
            p_success=a.p_success,
            degenerate=a.features.degenerate,
            m=a.features.m.tolist(),
        )
        for a, actual in zip(evaluation.assessments, evaluation.actual)
    ]


def evaluate_datasets(datasets: list[Dataset], mode: EvalMode, config: PipelineConfig,
                      timer: StageTimer | None = None) -> EvaluationReport:
    """LOOCV on one dataset, or cross-demonstration rotation over several.

    In cross-demo mode every dataset is classified by a model trained on the
    features of all other datasets; the confusion matrices are summed.
    """
    timer = timer or StageTimer()
    mode = EvalMode(mode)
    if mode is EvalMode.CROSS_DEMO and len(datasets) < 2:
        raise ValueError('cross-demo evaluation needs at least two datasets')
    if mode is EvalMode.LOOCV and len(datasets) != 1:
        raise ValueError(f'loocv evaluation takes one dataset, got {len(datasets)}')

    names = [d.name for d in datasets]
    if len(set(names)) != len(names):
        raise ValueError(f'dataset directory basenames must be unique, got {names}')
    rows = {d.name: dataset_features(d, config, timer)[1] for d in datasets}

    per_trajectory, confusion = [], ConfusionMatrix()
    with timer.stage('classify'):
        if mode is EvalMode.LOOCV:
            r = rows[names[0]]
            evaluations = [(names[0], evaluate_loocv([x.features for x in r], [x.label for x in r],
                                                     [x.trajectory_id for x in r], config.variance_floor))]
        else:
            evaluations = []
            for name in names:
                train = [x for other in names if other != name for x in rows[other]]
                test = rows[name]
                evaluations.append((name, evaluate_cross(
                    [x.features for x in train], [x.label for x in train],
                    [x.features for x in test], [x.label for x in test],
                    [x.trajectory_id for x in test], config.variance_floor,
                )))
                logger.info(f'Cross-demo fold {name}: accuracy {evaluations[-1][1].accuracy:.4f}')

    for name, evaluation in evaluations:
        per_trajectory += _records(name, evaluation)
        confusion = confusion + evaluation.confusion

    timing = {m['stage']: m['total_time'] for m in timer.get_metrics()['stages']}
    return EvaluationReport(
        mode=mode,
        datasets=names,
        per_trajectory=per_trajectory,
        confusion=[list(row) for row in confusion.counts],
        accuracy=confusion.accuracy,
        timing=timing,
    )
