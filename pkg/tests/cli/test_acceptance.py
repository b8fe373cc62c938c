"""Synthetic end-to-end runs; the snap-fit and screwing LOOCV runs use the default trajectory lengths."""
import json

import pytest

pytestmark = pytest.mark.slow


def generate(map_cli, target, *options):
    code, _, _ = map_cli('generate', '--dataset', target, *options)
    assert code == 0
    return target


def loocv_accuracy(map_cli, dataset, out):
    code, _, _ = map_cli('eval', '--dataset', dataset, '--out', out)
    assert code == 0
    return json.loads((out / 'report.json').read_text())['accuracy']


def test_snapfit_loocv(map_cli, tmp_path):
    dataset = generate(map_cli, tmp_path / 'snapfit', '--seed', 1)
    assert loocv_accuracy(map_cli, dataset, tmp_path / 'out') >= 0.90


def test_screwing_loocv(map_cli, tmp_path):
    dataset = generate(map_cli, tmp_path / 'screwing', '--task', 'screwing', '--seed', 1)
    assert loocv_accuracy(map_cli, dataset, tmp_path / 'out') >= 0.85


def test_round_snapfit_loocv(map_cli, tmp_path):
    dataset = generate(map_cli, tmp_path / 'round', '--task', 'round-snapfit', '--seed', 1, '--samples', 72)
    assert loocv_accuracy(map_cli, dataset, tmp_path / 'out') >= 0.85


def test_cross_demo_with_phase_shift(map_cli, tmp_path):
    a = generate(map_cli, tmp_path / 'a', '--seed', 1, '--samples', 60)
    b = generate(map_cli, tmp_path / 'b', '--seed', 2, '--samples', 60, '--phase-shift', 0.1)

    code, _, _ = map_cli('eval', '--mode', 'cross-demo', '--dataset', a, '--dataset', b, '--out', tmp_path / 'out')
    assert code == 0
    assert json.loads((tmp_path / 'out' / 'report.json').read_text())['accuracy'] >= 0.80


def test_unbalanced_training_detects_held_out_jam(map_cli, tmp_path):
    """Test a model trained on 13 successes and 2 failures against a jam it has not seen."""
    dataset = generate(map_cli, tmp_path / 'train', '--seed', 3, '--reps', 15, '--failures', 2, '--samples', 60)
    held_out = generate(map_cli, tmp_path / 'held-out', '--seed', 3, '--reps', 1, '--failures', 1,
                        '--samples', 60, '--failure-mode', 'jam')
    model = tmp_path / 'model'
    assert map_cli('train', '--dataset', dataset, '--model', model)[0] == 0

    code, out, _ = map_cli('assess', '--dataset', dataset, '--model', model, held_out / 'reps' / 'rep_000.csv')
    assert out.split()[2] == 'failure'
    assert code == 1


if __name__ == '__main__':
    __import__('pytest').main([__file__])
