import time
from contextlib import contextmanager
from dataclasses import dataclass
from threading import Lock

import pendulum
import psutil

STAGES = ('load', 'relativize', 'align', 'gp_fit', 'features', 'classify')


@dataclass
class StageMetric:
    stage: str
    count: int = 0
    total_time: float = 0.0
    first_used: str = ''

    @property
    def avg_time(self) -> float:
        return self.total_time / self.count if self.count > 0 else 0


class StageTimer:
    """Accumulates wall-clock time per pipeline stage.

    Safe to share between the threads of one run.
    """

    def __init__(self):
        self._stages = {}
        self._lock = Lock()
        self._start_time = pendulum.now('UTC')

    def track(self, stage: str, duration: float):
        """Add one timed call of `stage`"""
        with self._lock:
            if stage not in self._stages:
                self._stages[stage] = StageMetric(stage, first_used=pendulum.now('UTC').to_iso8601_string())
            metric = self._stages[stage]
            metric.count += 1
            metric.total_time += max(duration, 0.0)

    @contextmanager
    def stage(self, stage: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.track(stage, time.perf_counter() - start)

    def seconds(self, stage: str) -> float:
        with self._lock:
            return self._stages[stage].total_time if stage in self._stages else 0.0

    def get_metrics(self) -> dict:
        """Per-stage totals in pipeline order, followed by any other stages."""
        with self._lock:
            order = [s for s in STAGES if s in self._stages]
            order += sorted(s for s in self._stages if s not in STAGES)
            return {
                'started': self._start_time.to_iso8601_string(),
                'elapsed': (pendulum.now('UTC') - self._start_time).total_seconds(),
                'memory_rss_mb': psutil.Process().memory_info().rss / 2 ** 20,
                'stages': [
                    {
                        'stage': m.stage,
                        'count': m.count,
                        'total_time': m.total_time,
                        'avg_time': m.avg_time,
                        'first_used': m.first_used,
                    }
                    for m in (self._stages[s] for s in order)
                ],
            }
