"""Settings and pipeline option tests."""
import pytest
from lmap.config import Settings, get_settings
from lmap.main import main
from lmap.schemas.report import PipelineConfig
from pydantic import ValidationError


def test_settings_defaults(monkeypatch):
    """Test default configuration values."""
    for name in ('MAP_THREADS', 'MAP_VARIANCE_FLOOR', 'MAP_LOG_LEVEL', 'MAP_GOAL_TOLERANCE'):
        monkeypatch.delenv(name, raising=False)

    settings = Settings()

    assert settings.map_threads >= 1
    assert settings.variance_floor == 1e-4
    assert settings.log_level == 'INFO'
    assert settings.goal_tolerance == 1e-3


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv('MAP_THREADS', '2')
    monkeypatch.setenv('MAP_VARIANCE_FLOOR', '0.01')
    monkeypatch.setenv('MAP_LOG_LEVEL', 'DEBUG')
    monkeypatch.setenv('MAP_GOAL_TOLERANCE', '0.005')

    settings = get_settings()

    assert settings.map_threads == 2
    assert settings.variance_floor == 0.01
    assert settings.log_level == 'DEBUG'
    assert settings.goal_tolerance == 0.005


@pytest.mark.parametrize('threads', ['0', '-4'])
def test_threads_at_least_one(monkeypatch, threads):
    monkeypatch.setenv('MAP_THREADS', threads)
    assert Settings().map_threads == 1


def test_variance_floor_positive(monkeypatch):
    monkeypatch.setenv('MAP_VARIANCE_FLOOR', '0')
    with pytest.raises(ValidationError):
        Settings()


def test_pipeline_config_rejects_floor_from_environment(monkeypatch):
    monkeypatch.setenv('MAP_VARIANCE_FLOOR', '-1e-4')
    with pytest.raises(ValidationError):
        PipelineConfig(dataset_dirs=['.'])


def test_pipeline_config_rejects_zero_floor():
    with pytest.raises(ValidationError):
        PipelineConfig(dataset_dirs=['.'], variance_floor=0.0)


def test_pipeline_config_floor_from_settings(monkeypatch):
    monkeypatch.setenv('MAP_VARIANCE_FLOOR', '0.002')
    assert PipelineConfig(dataset_dirs=['.']).variance_floor == 0.002


def test_settings_cached():
    assert get_settings() is get_settings()


def test_main_reports_invalid_settings(monkeypatch, capsys):
    monkeypatch.setenv('MAP_VARIANCE_FLOOR', '0')
    monkeypatch.setattr('sys.argv', ['map', 'generate', '--dataset', 'unused'])

    with pytest.raises(SystemExit) as exc:
        main()

    assert exc.value.code == 2
    assert 'error: invalid MAP_' in capsys.readouterr().err
