"""Command tests for `map assess`."""
import os

from lmap.cli.deps import get_trained_model
from lmap.schemas.report import PipelineConfig
from lmap.services.dataset import load_dataset
from lmap.utils.metrics import StageTimer


def test_assess_success(map_cli, small_snapfit_dir, trained_model_dir):
    code, out, _ = map_cli('assess', '--dataset', small_snapfit_dir, '--model', trained_model_dir,
                           small_snapfit_dir / 'reps' / 'rep_000.csv')

    trajectory_id, p_success, predicted = out.split()[:3]
    assert trajectory_id == 'rep_000'
    assert predicted == 'success'
    assert float(p_success) >= 0.5
    assert code == 0


def test_assess_jam(map_cli, small_snapfit_dir, trained_model_dir):
    """Test that a jammed reproduction (rep_004) is reported with exit code 1."""
    code, out, _ = map_cli('assess', '--dataset', small_snapfit_dir, '--model', trained_model_dir,
                           small_snapfit_dir / 'reps' / 'rep_004.csv')

    assert out.split()[2] == 'failure'
    assert code == 1


def test_assess_demonstration_is_degenerate(map_cli, small_snapfit_dir, trained_model_dir):
    code, out, _ = map_cli('assess', '--dataset', small_snapfit_dir, '--model', trained_model_dir,
                           small_snapfit_dir / 'demo' / 'demo.csv')

    assert out.split()[0] == 'demo'
    assert out.strip().endswith('degenerate')
    assert code in (0, 1)


def test_assess_without_model(map_cli, small_snapfit_dir, tmp_path):
    code, _, err = map_cli('assess', '--dataset', small_snapfit_dir, '--model', tmp_path,
                           small_snapfit_dir / 'reps' / 'rep_000.csv')
    assert code == 2
    assert 'map train' in err


def test_assess_malformed_trajectory(map_cli, small_snapfit_dir, trained_model_dir, test_data_dir):
    code, _, err = map_cli('assess', '--dataset', small_snapfit_dir, '--model', trained_model_dir,
                           os.path.join(test_data_dir, 'malformed.csv'))
    assert code == 2
    assert 'malformed row' in err


def test_assess_missing_trajectory(map_cli, small_snapfit_dir, trained_model_dir, tmp_path):
    code, _, err = map_cli('assess', '--dataset', small_snapfit_dir, '--model', trained_model_dir,
                           tmp_path / 'absent.csv')
    assert code == 2
    assert 'no such file' in err


def test_assess_with_other_demonstration(map_cli, trained_model_dir, tmp_path):
    """Test that stored demo models are refused for a dataset with another demonstration."""
    other = tmp_path / 'other'
    map_cli('generate', '--seed', 99, '--reps', 2, '--samples', 30, '--dataset', other)

    code, _, err = map_cli('assess', '--dataset', other, '--model', trained_model_dir,
                           other / 'reps' / 'rep_000.csv')
    assert code == 2
    assert 'do not match' in err


def test_stored_models_are_loaded_not_fitted(small_snapfit_dir, trained_model_dir):
    """Test that restoring the demonstration models is timed as loading, not as a GP fit."""
    config = PipelineConfig(dataset_dirs=[small_snapfit_dir], model_out=trained_model_dir, parallel_fits=False)
    timer = StageTimer()
    get_trained_model(config, load_dataset(small_snapfit_dir), timer)

    stages = {s['stage'] for s in timer.get_metrics()['stages']}
    assert 'load' in stages
    assert 'gp_fit' not in stages


if __name__ == '__main__':
    __import__('pytest').main([__file__])
