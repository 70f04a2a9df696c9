from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from slalomkit import generate as gen
from slalomkit.codec import decode_seq, encode_point
from slalomkit.core import InvalidInput, InvalidPartition, InvalidTarget, NotDominated
from slalomkit.pipelines import (
    Miss,
    capture_failure_correspondence,
    clip_to_bound,
    dominate_family,
    encode_family,
    pair_union_bound,
    partreal,
    pull_capture_through_encoding,
    sigma_union_parts,
    sigma_union_witness,
    slalom_catalog,
)
from slalomkit.slalom import FLOOR_SQRT, IDENTITY, BinarySlalom, Slalom, goes_through_seq


def test_partreal_examples():
    assert partreal([4, 2, 3, 5, 1, 3]).points == (0, 4, 6, 9, 14, 15, 18)
    assert partreal([1, 1, 1, 1]).points == (0, 1, 2, 3, 4)
    with pytest.raises(InvalidPartition):
        partreal([3, 0, 2])


def test_clip_examples():
    c = clip_to_bound([1, 2, 3], [4, 4, 4])
    assert (c.values, c.threshold) == ((1, 2, 3), 0)
    c = clip_to_bound([5, 1, 7], [3, 2, 9])
    assert (c.values, c.threshold) == ((0, 1, 7), 1)
    with pytest.raises(NotDominated):
        clip_to_bound([1, 5], [3, 2])
    with pytest.raises(InvalidInput):
        clip_to_bound([1], [3, 2])


def test_clip_keeps_small_entries_before_threshold():
    c = clip_to_bound([1, 9, 2], [3, 2, 5])
    assert c.values == (1, 0, 2) and c.threshold == 2


def test_dominate_examples():
    assert dominate_family([(3, 0, 7)]) == (4, 1, 8)
    assert dominate_family([(0, 1), (2, 0)]) == (3, 2)
    assert dominate_family([(0, 0, 0), (0, 0, 0)]) == (1, 1, 1)
    with pytest.raises(InvalidInput):
        dominate_family([])
    with pytest.raises(InvalidInput):
        dominate_family([(1,), (1, 2)])


def test_encode_family_examples():
    enc = encode_family([(3, 1)])
    assert len(enc.image) == 1 and enc.collisions == 0
    F = [(5, 1, 7), (6, 1, 7), (0, 2, 3)]
    enc = encode_family(F)
    assert enc.collisions == 0 and len(enc.image) == 3
    for c, y in zip(enc.clipped, enc.points):
        assert encode_point(y, enc.partition) == c.values


def test_encode_family_reports_collisions_under_external_bound():
    # both members exceed the bound only at index 0 and agree afterwards
    enc = encode_family([(5, 1, 7), (6, 1, 7)], bound=(3, 2, 9))
    assert enc.collisions == 1 and len(enc.image) == 1


def test_pull_capture_examples():
    F = [(5, 1, 7), (0, 2, 3)]
    enc = encode_family(F)
    exact = Slalom(tuple(frozenset(col) for col in zip(*(c.values for c in enc.clipped))))
    report = pull_capture_through_encoding(F, exact)
    assert report.ok and all(k == 0 for k in report.thresholds.values())

    # drop (5,1,7)'s value at index 1
    cells = list(exact.cells)
    cells[1] = frozenset({2})
    report = pull_capture_through_encoding(F, Slalom(tuple(cells)))
    assert report.thresholds[(5, 1, 7)] == 2 and report.thresholds[(0, 2, 3)] == 0

    report = pull_capture_through_encoding(F, Slalom((frozenset(),) * 3))
    assert not report and set(report.failures) == set(F)


def test_pull_threshold_includes_clip_threshold():
    F = [(9, 1, 7), (0, 1, 2)]
    bound = (3, 2, 9)
    enc = encode_family(F, bound)
    S = Slalom(tuple(frozenset(col) for col in zip(*(c.values for c in enc.clipped))))
    report = pull_capture_through_encoding(F, S, bound)
    assert report.thresholds[(9, 1, 7)] == 1 and report.thresholds[(0, 1, 2)] == 0


def _self_catalog(f):
    d = dominate_family([f])
    part = partreal(d)
    y = decode_seq(clip_to_bound(f, d).values, part)
    B = BinarySlalom(part, tuple({s} for s in part.slices(y)))
    return slalom_catalog([({y}, B)], [d])


def test_catalog_self_lookup():
    f = (3, 0, 5, 2)
    catalog = _self_catalog(f)
    hit = catalog.lookup(f)
    assert hit and hit.threshold == 0 and hit.d_index == 0
    cert = goes_through_seq(f, catalog.entries[hit.entry].slalom)
    assert cert is not None and cert.threshold <= hit.threshold


def test_catalog_miss():
    catalog = _self_catalog((3, 0, 5, 2))
    miss = catalog.lookup((3, 0, 5, 99))
    assert isinstance(miss, Miss) and "not dominated" in miss.reason
    assert isinstance(catalog.lookup((1, 2)), Miss)


def test_catalog_deduplicates_shared_slaloms():
    d = (2, 2)
    part = partreal(d)
    B = BinarySlalom(part, ({"01"}, {"10"}))
    catalog = slalom_catalog([({"0110"}, B), ({"0110"}, B)], [d, (3, 3)])
    assert len(catalog.entries) == 1 and catalog.duplicates == 1
    B2 = BinarySlalom(part, ({"01"}, {"11"}))
    catalog = slalom_catalog([({"0110"}, B), ({"0111"}, B2)], [d])
    assert len(catalog.entries) == 2 and catalog.duplicates == 0


def test_catalog_rejects_uncaptured_family():
    part = partreal((2, 2))
    with pytest.raises(InvalidInput):
        slalom_catalog([({"0000"}, BinarySlalom.empty(part))], [(2, 2)])
    with pytest.raises(InvalidInput):
        slalom_catalog([({"0000"}, BinarySlalom.empty(part))], [(1, 3)])


def test_sigma_union_examples():
    assert sigma_union_witness([set(), set()], [1, 3]) == frozenset()
    parts = sigma_union_parts([{0, 1}, {0, 5}, set()], [2, 4, 8])
    assert parts == [frozenset(), {5}, frozenset()]
    b = sigma_union_witness([{0, 1}, {0, 5}, set()], [2, 4, 8])
    assert b == {5} and oracles.count_below(b, 4) <= 4
    assert sigma_union_witness([{1, 4, 9}], [3]) == {4, 9}


def test_sigma_union_errors():
    with pytest.raises(InvalidTarget):
        sigma_union_witness([set(), set()], [3, 3])
    with pytest.raises(InvalidInput):
        sigma_union_witness([set()], [1, 2])


def test_pair_union_examples():
    f = (1, 3, 6, 10)
    a = {1, 3, 6}
    v = pair_union_bound(a, a, f)
    assert v.applicable and v.ok and v.counts == (0, 1, 2, 3)
    a, b = {1, 4, 7}, {2, 5, 8}
    v = pair_union_bound(a, b, f)
    assert v.ok and v.counts == tuple(2 * n for n in range(4))
    v = pair_union_bound(set(), {1, 4}, f)
    assert v.ok and v.counts == (0, 1, 2, 2)


def test_pair_union_not_applicable():
    v = pair_union_bound({0, 1, 2}, set(), (3, 5))
    assert not v.applicable and v.ok and v.index == 0


@given(st.integers(0, 2**32))
def test_sigma_union_bounds(seed):
    rng = random.Random(seed)
    f = gen.increasing_target(rng, rng.randint(1, 12))
    witnesses = [gen.boundary_witness(rng, f) for _ in f]
    parts = sigma_union_parts(witnesses, f)
    b = sigma_union_witness(witnesses, f)
    assert b == set().union(*({k for k in a if k >= bound} for a, bound in zip(witnesses, f)))
    for n in range(len(f)):
        assert oracles.count_below(b, f[n]) <= n * n
        assert oracles.count_below(b, f[n]) <= sum(oracles.count_below(witnesses[m], f[n]) for m in range(n))
        for m in range(n, len(f)):
            assert oracles.count_below(parts[m], f[n]) == 0


@given(st.integers(0, 2**32), st.sampled_from([IDENTITY, FLOOR_SQRT]))
def test_pair_union_bound_property(seed, phi):
    rng = random.Random(seed)
    f = gen.increasing_target(rng, rng.randint(1, 12))
    if phi is IDENTITY:
        a, b = gen.boundary_witness(rng, f), gen.boundary_witness(rng, f)
    else:
        a, b = (frozenset(k for k in range(f[-1]) if rng.random() < 0.1) for _ in range(2))
    v = pair_union_bound(a, b, f, phi)
    assert v.ok
    if v.applicable:
        assert all(oracles.count_below(a | b, f[n]) <= 2 * phi(n) for n in range(len(f)))


@given(st.integers(0, 2**32))
def test_encode_family_injective(seed):
    rng = random.Random(seed)
    M = rng.randint(1, 10)
    F = {tuple(rng.randint(0, 30) for _ in range(M)) for _ in range(rng.randint(1, 10))}
    enc = encode_family(F)
    assert len(enc.image) == len(F) and enc.collisions == 0
    report = pull_capture_through_encoding(
        F, Slalom(tuple(frozenset(col) for col in zip(*(c.values for c in enc.clipped))))
    )
    assert report.ok


@given(st.integers(0, 2**32))
def test_pull_threshold_is_exact(seed):
    rng = random.Random(seed)
    M = rng.randint(1, 8)
    F = {tuple(rng.randint(0, 12) for _ in range(M)) for _ in range(rng.randint(1, 6))}
    bound = tuple(rng.randint(1, 10) for _ in range(M - 1)) + (13,)
    enc = encode_family(F, bound)
    cells = [set() for _ in range(M)]
    for c in enc.clipped:
        for n, v in enumerate(c.values):
            if rng.random() < 0.8:
                cells[n].add(v)
    S = Slalom(tuple(frozenset(c) for c in cells))
    report = pull_capture_through_encoding(F, S, bound)
    for f, c in zip(enc.family, enc.clipped):
        k = oracles.least_threshold([c.values[n] in cells[n] for n in range(M)])
        expected = None if k is None else max(k, c.threshold)
        if expected is not None and expected < M:
            assert report.thresholds[f] == expected
            assert all(f[n] in cells[n] for n in range(expected, M))
        else:
            assert f in report.failures


@given(st.integers(0, 2**32))
def test_failure_correspondence(seed):
    rng = random.Random(seed)
    d = gen.random_partition(rng, rng.randint(1, 6), 3)
    X = {gen.random_word(rng, d.horizon) for _ in range(rng.randint(1, 6))}
    pool = [BinarySlalom(d, tuple(gen.random_binary_cells(rng, d, width=lambda n: 4))) for _ in range(3)]
    corr = capture_failure_correspondence(X, pool)
    assert corr.matches(d)
