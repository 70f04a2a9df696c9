"""Random instance families shared by the property and acceptance tests."""

from __future__ import annotations

import itertools
import random

from slalomkit import generate as gen


def diagonal_instance(rng: random.Random, max_len: int = 14):
    """``(a, aprime, pieces)`` where no piece splits anywhere in ``aprime``."""
    L = rng.randint(2, max_len)
    a = gen.random_word(rng, L)
    support = [k for k, b in enumerate(a) if b == "1"]
    aprime = sorted(k for k in support if rng.random() < 0.6)
    free = [k for k in range(L) if k not in aprime]
    pieces = [
        gen.points_splitting_in(rng, rng.sample(free, min(len(free), rng.randint(0, 3))), L, rng.randint(0, 5))
        for _ in range(len(aprime) + rng.randint(0, 2))
    ]
    return a, aprime, pieces


def blocked_instance(rng: random.Random, max_len: int = 12):
    """``(a, aprime, pieces, n0)`` where piece ``n0`` is the first to split at its enumeration point.

    Pieces before ``n0`` avoid ``aprime``; piece ``n0`` realizes every bit pattern
    on the support of ``a`` up to ``aprime[n0]``, so two of its members extend
    whatever prefix the construction has built and disagree there.
    """
    while True:
        L = rng.randint(2, max_len)
        a = gen.random_word(rng, L)
        support = [k for k, b in enumerate(a) if b == "1"]
        if support:
            break
    aprime = sorted({rng.choice(support), *(k for k in support if rng.random() < 0.5)})
    n0 = rng.randrange(len(aprime))
    pos = aprime[n0]
    free = [k for k in range(L) if k not in aprime]
    pieces = [
        gen.points_splitting_in(rng, rng.sample(free, min(len(free), rng.randint(0, 3))), L, rng.randint(0, 5))
        for _ in range(n0)
    ]
    head = [k for k in support if k <= pos]
    blocking = set()
    for pattern in itertools.product("01", repeat=len(head)):
        bits = ["0"] * (pos + 1)
        for k, bit in zip(head, pattern):
            bits[k] = bit
        blocking.add("".join(bits) + gen.random_word(rng, L - pos - 1))
    pieces.append(frozenset(blocking))
    for _ in range(rng.randint(0, 2)):
        pieces.append(frozenset(gen.random_word(rng, L) for _ in range(rng.randint(0, 4))))
    return a, aprime, pieces, n0
