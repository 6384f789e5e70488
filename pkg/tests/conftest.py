import numpy as np
import pytest

from primeud.primes import arith_tables, sieve


@pytest.fixture(scope="session")
def table2m():
    return sieve(2_000_000)


@pytest.fixture(scope="session")
def table100k():
    return sieve(100_000)


@pytest.fixture(scope="session")
def arith10k():
    return arith_tables(10_000)


@pytest.fixture(scope="session")
def arith100k():
    return arith_tables(100_000)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260808)
