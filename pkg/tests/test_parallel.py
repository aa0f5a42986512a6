import pytest

from conebeta.parallel import ordered_map, worker_count


def square(x):
    return x * x


def test_worker_count_from_environment(monkeypatch):
    monkeypatch.delenv("CONEBETA_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("CONEBETA_THREADS", "0")
    assert worker_count() == 1
    monkeypatch.setenv("CONEBETA_THREADS", "10000")
    assert 1 <= worker_count() <= 10000
    monkeypatch.setenv("CONEBETA_THREADS", "two")
    with pytest.raises(ValueError):
        worker_count()


@pytest.mark.parametrize("workers", [1, 2])
def test_ordered_map_keeps_input_order(workers):
    items = list(range(37))[::-1]
    assert ordered_map(square, items, workers) == [x * x for x in items]


def test_initializer_runs_in_serial_mode():
    seen = []
    assert ordered_map(square, [3], 1, seen.append, ("ready",)) == [9]
    assert seen == ["ready"]
