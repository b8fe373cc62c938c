import json
import logging
from pathlib import Path

from lmap.cli.deps import EXIT_ERROR, EXIT_OK, EXIT_SINGLE_CLASS, TIMING_FILE, CommandError, get_config
from lmap.cli.deps import get_dataset
from lmap.schemas.report import EvalMode
from lmap.services.classifier import TrainingError
from lmap.services.pipeline import evaluate_datasets
from lmap.utils.metrics import StageTimer
from lmap.utils.templates import render_confusion_csv, render_csv, render_report, render_timing

logger = logging.getLogger(__name__)

OUT_FORMATS = ('text', 'csv', 'json')


def add_parser(subparsers):
    parser = subparsers.add_parser('eval', help='LOOCV or cross-demonstration evaluation')
    parser.add_argument('--dataset', type=Path, required=True, action='append',
                        help='dataset directory, repeat for cross-demo')
    parser.add_argument('--mode', type=EvalMode, choices=list(EvalMode), default=EvalMode.LOOCV,
                        metavar='{' + ','.join(m.value for m in EvalMode) + '}')
    parser.add_argument('--out', type=Path, default=None, help='directory for report files')
    parser.add_argument('--out-format', choices=OUT_FORMATS, default='text', help='format printed to stdout')
    parser.add_argument('--no-dtw', action='store_true', help='pair samples by index instead of DTW')
    parser.add_argument('--serial', action='store_true', help='fit wrench components one at a time')
    parser.add_argument('--variance-floor', type=float, default=None)
    parser.set_defaults(handler=run)
    return parser


def run(args) -> int:
    """Evaluate, write report.{txt,csv,json}, confusion.csv and timing.json, print the chosen format.

    Without --out nothing is written and the stage timing goes to the log.
    """
    config = get_config(args)
    if args.mode is EvalMode.CROSS_DEMO and len(config.dataset_dirs) < 2:
        raise CommandError(EXIT_ERROR, 'cross-demo evaluation needs at least two --dataset directories')
    if args.mode is EvalMode.LOOCV and len(config.dataset_dirs) != 1:
        raise CommandError(EXIT_ERROR, 'loocv evaluation takes exactly one --dataset')

    timer = StageTimer()
    datasets = [get_dataset(path, timer) for path in config.dataset_dirs]
    try:
        report = evaluate_datasets(datasets, args.mode, config, timer)
    except TrainingError as e:
        raise CommandError(EXIT_SINGLE_CLASS, str(e))

    outputs = {
        'text': render_report(report),
        'csv': render_csv(report),
        'json': report.model_dump_json(indent=2, exclude={'timing'}) + '\n',
    }
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for fmt, suffix in (('text', 'txt'), ('csv', 'csv'), ('json', 'json')):
            (args.out / f'report.{suffix}').write_text(outputs[fmt], encoding='utf-8')
        (args.out / 'confusion.csv').write_text(render_confusion_csv(report.confusion), encoding='utf-8')
        (args.out / TIMING_FILE).write_text(json.dumps(timer.get_metrics(), indent=2) + '\n', encoding='utf-8')
        logger.info(f'Reports written to {args.out}')
    else:
        logger.info(f'Stage timing (no --out, timing.json not written):\n{render_timing(report.timing)}')

    print(outputs[args.out_format], end='')
    return EXIT_OK
