import logging
import shutil
from dataclasses import dataclass
from pathlib import Path

from lmap.schemas.bench import Manifest
from lmap.schemas.trajectory import Outcome
from lmap.services.trajectory import IngestError, Trajectory, load_trajectory, save_trajectory

logger = logging.getLogger(__name__)

__all__ = ['Dataset', 'load_dataset', 'write_dataset']

DEMO_DIR = 'demo'
REPS_DIR = 'reps'
MANIFEST = 'manifest.json'


@dataclass(frozen=True, eq=False)
class Dataset:
    """One demonstration and its reproductions, as laid out under a dataset directory:

        <dir>/demo/<id>.csv (+ <id>.json sidecar)
        <dir>/reps/<id>.csv (+ <id>.json sidecar)
        <dir>/manifest.json (synthetic datasets only)
    """
    demo: Trajectory
    reps: list[Trajectory]
    manifest: Manifest | None = None
    name: str = ''

    @property
    def labeled(self) -> list[Trajectory]:
        return [r for r in self.reps if r.label is not None]

    def label_counts(self) -> dict[Outcome, int]:
        return {o: sum(r.label is o for r in self.reps) for o in Outcome}


def _trajectory_files(directory: Path) -> list[Path]:
    csvs = sorted(directory.glob('*.csv'))
    return csvs or sorted(directory.glob('*.json'))


def load_dataset(directory: str | Path) -> Dataset:
    """Read a dataset directory; exactly one demonstration is required.

    Raises:
        IngestError when the layout is incomplete or a trajectory is invalid
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise IngestError(f'{directory}: dataset directory not found')

    demo_files = _trajectory_files(directory / DEMO_DIR) if (directory / DEMO_DIR).is_dir() else []
    if not demo_files:
        raise IngestError(f'{directory}: missing demonstration under {DEMO_DIR}/')
    if len(demo_files) > 1:
        raise IngestError(f'{directory}: expected one demonstration, found {len(demo_files)}')

    rep_files = _trajectory_files(directory / REPS_DIR) if (directory / REPS_DIR).is_dir() else []
    manifest = None
    if (directory / MANIFEST).exists():
        try:
            manifest = Manifest.model_validate_json((directory / MANIFEST).read_text(encoding='utf-8'))
        except ValueError as e:
            raise IngestError(f'{directory / MANIFEST}: {e}') from e

    dataset = Dataset(
        demo=load_trajectory(demo_files[0]),
        reps=[load_trajectory(p) for p in rep_files],
        manifest=manifest,
        name=directory.name,
    )
    logger.info(f'Loaded dataset {directory}: demo {dataset.demo.id}, {len(dataset.reps)} reproductions')
    return dataset


def write_dataset(dataset: Dataset, directory: str | Path, force: bool = False) -> Path:
    """Write a dataset in the directory layout above.

    Raises:
        FileExistsError when the directory is not empty and force is not set
    """
    directory = Path(directory)
    if directory.exists() and any(directory.iterdir()):
        if not force:
            raise FileExistsError(f'{directory} is not empty (use --force to overwrite)')
        for sub in (DEMO_DIR, REPS_DIR):
            shutil.rmtree(directory / sub, ignore_errors=True)

    save_trajectory(dataset.demo, directory / DEMO_DIR / f'{dataset.demo.id}.csv')
    for rep in dataset.reps:
        save_trajectory(rep, directory / REPS_DIR / f'{rep.id}.csv')
    if dataset.manifest is not None:
        (directory / MANIFEST).write_text(dataset.manifest.model_dump_json(indent=2) + '\n', encoding='utf-8')
    logger.info(f'Wrote {len(dataset.reps)} reproductions and demo {dataset.demo.id} to {directory}')
    return directory
