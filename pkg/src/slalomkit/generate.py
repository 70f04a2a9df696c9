"""Seeded random instances that satisfy each construction's hypotheses.

Every generator takes a ``random.Random`` so callers control reproducibility.
"""

from __future__ import annotations

import random
from collections.abc import Sequence

from .core import Partition, Word, make_partition
from .rapidity import chi, counts_below


def random_word(rng: random.Random, length: int) -> Word:
    return format(rng.getrandbits(length), f"0{length}b") if length else ""


def random_partition(rng: random.Random, n_intervals: int, max_len: int = 4) -> Partition:
    return make_partition([rng.randint(1, max_len) for _ in range(n_intervals)])


def random_natset(rng: random.Random, bound: int, density: float = 0.3) -> frozenset[int]:
    return frozenset(k for k in range(bound) if rng.random() < density)


def chi_witness(rng: random.Random, d: Partition, attempts: int | None = None) -> frozenset[int]:
    """A random set meeting ``[0, d(n))`` in at most ``chi(n)`` points for all ``n``."""
    L = d.horizon
    if L == 0:
        return frozenset()
    a: set[int] = set()
    for _ in range(attempts if attempts is not None else 4 * chi(d.n_intervals) + 4):
        p = rng.randrange(L)
        if p in a:
            continue
        counts = counts_below(a | {p}, d.points)
        if all(c <= chi(n) for n, c in enumerate(counts)):
            a.add(p)
    return frozenset(a)


def points_splitting_in(rng: random.Random, a: Sequence[int], L: int, size: int, base: Word | None = None) -> frozenset[Word]:
    """Up to ``size`` words of length ``L`` that differ from a common base only inside ``a``."""
    base = list(base if base is not None else random_word(rng, L))
    free = sorted(k for k in set(a) if k < L)
    out = set()
    for _ in range(size):
        w = base[:]
        for k in free:
            w[k] = rng.choice("01")
        out.add("".join(w))
    return frozenset(out)


def random_cover(
    rng: random.Random, a: Sequence[int], L: int, n_pieces: int, max_points: int
) -> list[frozenset[Word]]:
    """Pieces whose splitting points all lie in ``a``."""
    return [points_splitting_in(rng, a, L, rng.randint(1, max_points)) for _ in range(n_pieces)]


def random_binary_cells(
    rng: random.Random, d: Partition, fill: float = 1.0, width=lambda n: n
) -> list[frozenset[Word]]:
    """Random cells of random size up to ``width(n)`` (scaled by ``fill``)."""
    cells = []
    for m, k in enumerate(d.lengths):
        cap = min(int(width(m) * fill), 1 << k)
        size = rng.randint(0, cap) if cap > 0 else 0
        cells.append(frozenset(random_word(rng, k) for _ in range(size)))
    return cells


def boundary_witness(rng: random.Random, f: Sequence[int]) -> frozenset[int]:
    """A set meeting ``[0, f(n))`` in at most ``n`` points, with as many as fit."""
    a: set[int] = set()
    for n in range(1, len(f)):
        lo = f[n - 1]
        room = n - len(a)
        pool = list(range(lo, f[n]))
        rng.shuffle(pool)
        a.update(pool[: max(room, 0)])
    return frozenset(a)


def increasing_target(rng: random.Random, length: int, max_step: int = 6) -> tuple[int, ...]:
    out, v = [], rng.randint(0, 2)
    for _ in range(length):
        out.append(v)
        v += rng.randint(1, max_step)
    return tuple(out)
