import time

import pytest

from ccqmkp.budget import CHECK_EVERY, Budget, chunk_size


def test_grant_and_charge():
    b = Budget(2500, None)
    assert b.grant() == CHECK_EVERY
    b.charge(2000)
    assert b.grant() == 500 and b.remaining == 500
    b.charge(500)
    assert b.exhausted and b.grant() == 0
    with pytest.raises(RuntimeError):
        b.charge(1)


def test_slices_propagate():
    parent = Budget(1200, None)
    child = parent.slice(500)
    assert child.max_evaluations == 500
    child.charge(300)
    assert parent.used_evaluations == 300
    assert parent.slice(5000).max_evaluations == 900


def test_wall_time():
    b = Budget(10, 0.01)
    time.sleep(0.02)
    assert b.time_up and b.exhausted and b.grant() == 0
    assert not Budget(10, None).time_up


def test_chunk_size():
    assert chunk_size(1) == 1000 and chunk_size(10) == 1000
    assert chunk_size(7) == 994 and chunk_size(3000) == 3000


def test_validation():
    with pytest.raises(ValueError):
        Budget(-1)
    with pytest.raises(ValueError):
        Budget(1, -2.0)
