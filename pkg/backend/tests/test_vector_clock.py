import itertools

import numpy as np
import pytest

from app.exceptions import ClockError
from app.services.clock import (
    VectorClock,
    antichain,
    concurrent,
    happened_before,
    leq,
    vc_increment,
    vc_merge,
    vc_new,
)
from conftest import VC


def random_clocks(count: int, width: int, seed: int):
    rng = np.random.default_rng(seed)
    return [VectorClock.of(rng.integers(0, 3, size=width)) for _ in range(count)]


class TestConstruction:
    def test_vc_new_is_zero(self):
        assert vc_new(4).to_list() == [0, 0, 0, 0]
        assert vc_new(1).to_list() == [0]

    def test_vc_new_rejects_empty_system(self):
        with pytest.raises(ClockError):
            vc_new(0)

    def test_negative_entries_rejected(self):
        with pytest.raises(ClockError):
            VC(1, -1)

    def test_str(self):
        assert str(VC(2, 1, 0, 0)) == "[2,1,0,0]"


class TestArithmetic:
    def test_increment(self):
        assert vc_increment(vc_new(4), 1) == VC(1, 0, 0, 0)
        assert vc_increment(VC(2, 1, 0, 0), 2) == VC(2, 2, 0, 0)

    def test_increment_out_of_range(self):
        with pytest.raises(ClockError):
            vc_increment(VC(5), 2)

    def test_merge(self):
        assert vc_merge(VC(2, 1, 0, 0), VC(1, 3, 0, 0)) == VC(2, 3, 0, 0)
        assert vc_merge(VC(0, 0), VC(0, 0)) == VC(0, 0)

    def test_merge_width_mismatch(self):
        with pytest.raises(ClockError):
            vc_merge(VC(1, 2), VC(1, 2, 3))


class TestPredicates:
    @pytest.mark.parametrize("a,b,expected", [
        (VC(1, 0, 0, 0), VC(2, 1, 0, 0), True),
        (VC(2, 0), VC(0, 2), False),
        (VC(1, 1), VC(1, 1), False),
    ])
    def test_happened_before(self, a, b, expected):
        assert happened_before(a, b) is expected

    @pytest.mark.parametrize("a,b,expected", [
        (VC(2, 1, 0, 0), VC(2, 1, 1, 1), True),
        (VC(1, 1), VC(1, 1), True),
        (VC(2, 0), VC(1, 5), False),
    ])
    def test_leq(self, a, b, expected):
        assert leq(a, b) is expected

    @pytest.mark.parametrize("a,b,expected", [
        (VC(2, 0), VC(0, 2), True),
        (VC(1, 0), VC(2, 0), False),
        (VC(1, 1), VC(1, 1), False),
    ])
    def test_concurrent(self, a, b, expected):
        assert concurrent(a, b) is expected

    def test_width_mismatch(self):
        with pytest.raises(ClockError):
            happened_before(VC(1), VC(1, 2))


class TestPartialOrderLaws:
    clocks = random_clocks(40, 3, seed=11)

    def test_irreflexive(self):
        assert not any(happened_before(a, a) for a in self.clocks)

    def test_antisymmetric_and_transitive(self):
        for a, b, c in itertools.product(self.clocks[:15], repeat=3):
            assert not (happened_before(a, b) and happened_before(b, a))
            if happened_before(a, b) and happened_before(b, c):
                assert happened_before(a, c)

    def test_trichotomy_on_distinct_clocks(self):
        for a, b in itertools.combinations(self.clocks, 2):
            if a == b:
                continue
            outcomes = [happened_before(a, b), happened_before(b, a), concurrent(a, b)]
            assert outcomes.count(True) == 1

    def test_merge_is_least_upper_bound(self):
        for a, b in itertools.product(self.clocks[:20], repeat=2):
            m = vc_merge(a, b)
            assert leq(a, m) and leq(b, m)
            assert m == vc_merge(b, a)
            assert vc_merge(a, a) == a
            for c in self.clocks[:10]:
                assert vc_merge(vc_merge(a, b), c) == vc_merge(a, vc_merge(b, c))
                if leq(a, c) and leq(b, c):
                    assert leq(m, c)


class TestAntichain:
    def test_concurrent_set(self):
        assert antichain([VC(2, 0, 0), VC(0, 2, 0), VC(0, 0, 2)])

    def test_ordered_pair_breaks_antichain(self):
        assert not antichain([VC(1, 0), VC(2, 0)])

    def test_trivial_sets(self):
        assert antichain([])
        assert antichain([VC(1, 1)])
