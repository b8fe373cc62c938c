"""Command tests for `map generate`."""
import json

from lmap.services.dataset import load_dataset


def test_generate_defaults(map_cli, tmp_path):
    target = tmp_path / 'snapfit'
    code, out, _ = map_cli('generate', '--dataset', target)

    assert code == 0
    assert out.strip() == str(target)
    dataset = load_dataset(target)
    assert len(dataset.reps) == 20
    assert dataset.demo.n == 97
    assert sum(r.label == 'failure' for r in dataset.reps) == 10


def test_generate_counts_and_task(map_cli, tmp_path):
    target = tmp_path / 'screwing'
    code, _, _ = map_cli('generate', '--task', 'screwing', '--reps', 15, '--samples', 25, '--seed', 4,
                         '--dataset', target)

    assert code == 0
    manifest = json.loads((target / 'manifest.json').read_text())
    assert manifest['spec']['task'] == 'screwing'
    assert manifest['n_samples'] == 25
    assert len(manifest['reps']) == 15
    assert len(list((target / 'reps').glob('*.csv'))) == 15


def test_generate_refuses_non_empty_directory(map_cli, tmp_path):
    assert map_cli('generate', '--reps', 2, '--samples', 12, '--dataset', tmp_path)[0] == 0

    code, _, err = map_cli('generate', '--reps', 2, '--samples', 12, '--dataset', tmp_path)
    assert code == 2
    assert '--force' in err

    assert map_cli('generate', '--reps', 2, '--samples', 12, '--dataset', tmp_path, '--force')[0] == 0


def test_generate_is_reproducible(map_cli, tmp_path):
    for name in ('a', 'b'):
        map_cli('generate', '--reps', 4, '--samples', 15, '--seed', 9, '--dataset', tmp_path / name)

    for path in sorted((tmp_path / 'a').rglob('*.*')):
        assert path.read_bytes() == (tmp_path / 'b' / path.relative_to(tmp_path / 'a')).read_bytes()


def test_generate_invalid_scenario(map_cli, tmp_path):
    code, _, err = map_cli('generate', '--reps', 4, '--failures', 6, '--dataset', tmp_path)
    assert code == 2
    assert 'invalid scenario' in err


def test_generate_negative_seed(map_cli, tmp_path):
    code, _, err = map_cli('generate', '--seed', -1, '--dataset', tmp_path)
    assert code == 2
    assert 'invalid options' in err


def test_generate_seed_recorded_in_manifest(map_cli, tmp_path):
    map_cli('generate', '--reps', 2, '--samples', 12, '--seed', 17, '--dataset', tmp_path / 'd')
    manifest = json.loads((tmp_path / 'd' / 'manifest.json').read_text())
    assert manifest['spec']['seed'] == 17


def test_usage_errors(map_cli):
    assert map_cli()[0] == 2
    assert map_cli('generate')[0] == 2
    assert map_cli('generate', '--task', 'welding', '--dataset', 'x')[0] == 2
    assert map_cli('--help')[0] == 0


if __name__ == '__main__':
    __import__('pytest').main([__file__])
