"""Test configuration.

Test structure:
- tests/local/ - unit and property tests of the services, no files outside tmp
- tests/cli/ - command tests driving `lmap.cli.app.run` in-process

Run only local tests: pytest tests/local/
Skip the full-scale synthetic acceptance runs: pytest -m "not slow"
Run all tests: pytest
"""
import logging
import os
import pathlib

import pytest
from lmap.config import get_settings
from lmap.schemas.bench import ScenarioSpec, Task
from lmap.services.bench import generate
from lmap.services.dataset import write_dataset

logger = logging.getLogger(__name__)

pytest_plugins = ['tests.fixtures.cli']


@pytest.fixture(scope='session')
def test_data_dir():
    """Return the directory containing test data files
    """
    return os.path.join(pathlib.Path(__file__).parent, 'data')


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings so monkeypatched environment variables take effect"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope='session')
def small_snapfit():
    """Short snap-fit dataset: 30 samples, 4 successes and 4 failures (jam, miss, loose, jam)"""
    return generate(ScenarioSpec(task=Task.SNAPFIT, seed=11, n_samples=30, n_reps=8))


@pytest.fixture(scope='session')
def small_screwing():
    return generate(ScenarioSpec(task=Task.SCREWING, seed=5, n_samples=40, n_reps=6))


@pytest.fixture(scope='session')
def small_snapfit_dir(tmp_path_factory, small_snapfit):
    """The small snap-fit dataset written to disk"""
    return write_dataset(small_snapfit, tmp_path_factory.mktemp('datasets') / 'snapfit-11')
