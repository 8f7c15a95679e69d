import functools
from itertools import product

import pytest

from fqbasis import field as fc
from fqbasis.field import make_field
from fqbasis.subsets import FqSubset

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


class Naive:
    """Set algebra on frozensets via the polynomial element arithmetic."""

    def __init__(self, f):
        self.f = f
        self.q = f.q
        els = [fc.FieldElement(f, i) for i in range(f.q)]
        self.add = [[fc.add(x, y).index for y in els] for x in els]
        self.mul = [[fc.mul(x, y).index for y in els] for x in els]
        self.neg = [fc.neg(x).index for x in els]

    def sumset(self, X, Y):
        return frozenset(self.add[x][y] for x in X for y in Y)

    def prodset(self, X, Y):
        return frozenset(self.mul[x][y] for x in X for y in Y)

    def kfold(self, k, X):
        acc = frozenset(X)
        for _ in range(k - 1):
            acc = self.sumset(acc, X)
        return acc

    def full(self):
        return frozenset(range(self.q))


@functools.lru_cache(maxsize=None)
def naive(p, m):
    return Naive(make_field(p, m))


def subset(f, *indices):
    return FqSubset.from_indices(f, indices)


def all_nonempty(f):
    return [FqSubset(f, mask) for mask in range(1, 1 << f.q)]


@pytest.fixture(params=SMALL_FIELDS, ids=lambda pm: f"GF({pm[0]}^{pm[1]})")
def small_field(request):
    return make_field(*request.param)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
