import pytest

from lottery_ricker import LotteryRicker, StockingRicker, interior_2cycle


@pytest.fixture(scope="session")
def running_example():
    """The well-studied parameter set r1=2, r2=2.2, a=0."""
    return LotteryRicker(2.0, 2.2)


@pytest.fixture(scope="session")
def running_orbit(running_example):
    return interior_2cycle(running_example)


@pytest.fixture(scope="session")
def shifted_example():
    """The a > 0 companion example r1=2.1, a=0.1, r2=2.5."""
    return LotteryRicker(2.1, 2.5, 0.1)


@pytest.fixture(scope="session")
def stocking_example():
    return StockingRicker(s1=0.5, q1=1.5, q2=2.2, p1=1.0, p2=1.0)
