import pandas as pd
from lmap.schemas.report import EvaluationReport

LABELS = ('success', 'failure')


def render_confusion(confusion: list[list[int]]) -> str:
    """Aligned 2×2 table, rows actual, columns predicted.

    >>> print(render_confusion([[9, 1], [0, 10]]))
    actual \\ predicted  success  failure
    success                   9        1
    failure                   0       10
    """
    head = 'actual \\ predicted'
    width = max(len(head), *(len(label) for label in LABELS))
    lines = [f'{head:<{width}}' + ''.join(f'  {label:>7}' for label in LABELS)]
    for label, row in zip(LABELS, confusion):
        lines.append(f'{label:<{width}}' + ''.join(f'  {count:>7}' for count in row))
    return '\n'.join(lines)


def render_assessments(report: EvaluationReport) -> str:
    rows = [('dataset', 'trajectory', 'actual', 'predicted', 'p_success', '')]
    for r in report.per_trajectory:
        rows.append((r.dataset, r.trajectory_id, r.actual.value if r.actual else '-', r.predicted.value,
                     f'{r.p_success:.4f}', 'degenerate' if r.degenerate else ''))
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return '\n'.join('  '.join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)


def render_timing(timing: dict[str, float]) -> str:
    if not timing:
        return 'no timing recorded'
    width = max(len(stage) for stage in timing)
    return '\n'.join(f'{stage:<{width}}  {seconds:10.3f} s' for stage, seconds in timing.items())


def render_report(report: EvaluationReport, with_timing: bool = False) -> str:
    """Plain-text evaluation report: summary, confusion matrix, per-trajectory table."""
    total = sum(sum(row) for row in report.confusion)
    parts = [
        f'mode: {report.mode.value}',
        f'datasets: {", ".join(report.datasets)}',
        f'accuracy: {report.accuracy:.4f} ({report.confusion[0][0] + report.confusion[1][1]}/{total})',
        '',
        render_confusion(report.confusion),
        '',
        render_assessments(report),
    ]
    if with_timing:
        parts += ['', render_timing(report.timing)]
    return '\n'.join(parts) + '\n'


def report_frame(report: EvaluationReport) -> pd.DataFrame:
    frame = pd.DataFrame([
        {
            'dataset': r.dataset,
            'trajectory_id': r.trajectory_id,
            'actual': r.actual.value if r.actual else '',
            'predicted': r.predicted.value,
            'p_success': r.p_success,
            'degenerate': r.degenerate,
            **{f'm{k + 1}': v for k, v in enumerate(r.m)},
        }
        for r in report.per_trajectory
    ])
    return frame


def render_csv(report: EvaluationReport) -> str:
    return report_frame(report).to_csv(index=False, float_format='%.17g', lineterminator='\n')


def render_confusion_csv(confusion: list[list[int]]) -> str:
    frame = pd.DataFrame(confusion, index=[f'actual_{c}' for c in LABELS], columns=[f'predicted_{c}' for c in LABELS])
    return frame.to_csv(index_label='', lineterminator='\n')
