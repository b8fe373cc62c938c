"""Stage timer tests."""
import threading
import time

from lmap.utils.metrics import StageMetric, StageTimer


def test_stage_metric_initialization():
    """Test StageMetric initialization and properties."""
    metric = StageMetric(stage='gp_fit')

    assert metric.stage == 'gp_fit'
    assert metric.count == 0
    assert metric.total_time == 0.0
    assert metric.avg_time == 0


def test_stage_metric_avg_time():
    metric = StageMetric(stage='align', count=3, total_time=6.0)
    assert metric.avg_time == 2.0


def test_track():
    """Test accumulating calls per stage."""
    timer = StageTimer()

    timer.track('gp_fit', 0.5)
    timer.track('gp_fit', 1.5)
    timer.track('align', 0.3)

    stages = {m['stage']: m for m in timer.get_metrics()['stages']}
    assert stages['gp_fit']['count'] == 2
    assert stages['gp_fit']['total_time'] == 2.0
    assert stages['gp_fit']['avg_time'] == 1.0
    assert stages['align']['count'] == 1
    assert timer.seconds('gp_fit') == 2.0
    assert timer.seconds('load') == 0.0


def test_negative_duration_clamped():
    timer = StageTimer()
    timer.track('load', -1.0)
    assert timer.seconds('load') == 0.0


def test_stage_context_manager():
    timer = StageTimer()
    with timer.stage('features'):
        time.sleep(0.01)
    assert timer.seconds('features') >= 0.005


def test_stage_recorded_on_error():
    timer = StageTimer()
    try:
        with timer.stage('classify'):
            raise RuntimeError('boom')
    except RuntimeError:
        pass
    assert timer.get_metrics()['stages'][0]['count'] == 1


def test_pipeline_order():
    """Test that known stages come first in pipeline order, others after them alphabetically."""
    timer = StageTimer()
    for stage in ('classify', 'zeta', 'load', 'alpha', 'gp_fit'):
        timer.track(stage, 0.1)

    assert [m['stage'] for m in timer.get_metrics()['stages']] == ['load', 'gp_fit', 'classify', 'alpha', 'zeta']


def test_thread_safe_counts():
    timer = StageTimer()

    def work():
        for _ in range(200):
            timer.track('gp_fit', 0.001)

    threads = [threading.Thread(target=work) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    assert timer.get_metrics()['stages'][0]['count'] == 1200


def test_process_metrics():
    metrics = StageTimer().get_metrics()

    assert metrics['elapsed'] >= 0
    assert metrics['memory_rss_mb'] > 0
    assert metrics['started'].endswith('Z') or '+00:00' in metrics['started']


if __name__ == '__main__':
    __import__('pytest').main([__file__, '-v'])
