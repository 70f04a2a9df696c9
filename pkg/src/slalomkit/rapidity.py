"""Rapidity witnesses and the two constructions linking covers to binary slaloms.

``slalom_from_cover`` turns a cover whose splitting points are sparse into a
binary slalom capturing every covered point.  ``witness_from_binary_slalom``
goes the other way: from a binary slalom it produces a sparse set of naturals
together with a cover of the captured points whose splitting points it contains.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, replace
from math import isqrt

from .core import (
    AlignmentError,
    HypothesisFailure,
    InvalidInput,
    Partition,
    ResourceLimit,
    WidthViolation,
    Word,
    check_increasing,
    shift_set,
    split_set,
)
from .slalom import IDENTITY, BinarySlalom, WidthFunction, check_width

CoverFamily = Sequence[frozenset[Word]]


@dataclass(frozen=True)
class RapidityVerdict:
    ok: bool
    index: int | None
    counts: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok


def counts_below(a: Iterable[int], f: Sequence[int]) -> tuple[int, ...]:
    """``|a ∩ [0, f(n))|`` for every ``n``."""
    ordered = sorted(a)
    return tuple(bisect_left(ordered, bound) for bound in f)


def check_rapidity_witness(
    a: Iterable[int], f: Sequence[int], phi: WidthFunction = IDENTITY
) -> RapidityVerdict:
    check_increasing(f)
    counts = counts_below(a, f)
    for n, c in enumerate(counts):
        if c > phi(n):
            return RapidityVerdict(False, n, counts)
    return RapidityVerdict(True, None, counts)


def reparam_target(f: Sequence[int], phi: WidthFunction, M: int) -> tuple[int, ...]:
    """``g(m) = f(max{k : phi(k) <= m})`` for ``m <= M``.

    Any set meeting ``[0, g(m))`` in at most ``m`` points meets ``[0, f(n))``
    in at most ``phi(n)`` points whenever ``f(n) <= g(M)``.
    """
    check_increasing(f)
    if phi(0) != 0:
        raise InvalidInput(f"width function must vanish at 0, got {phi(0)}")
    values = [phi(k) for k in range(len(f) + 1)]
    for k, (lo, hi) in enumerate(zip(values, values[1:])):
        if hi < lo:
            raise InvalidInput(f"width function decreases at {k + 1}")
    g = []
    k = 0
    for m in range(M + 1):
        while k < len(values) and values[k] <= m:
            k += 1
        if k == len(values):
            raise InvalidInput(
                f"width function stays <= {m} on all of f's domain (bounded, or f too short)"
            )
        g.append(f[k - 1])
    return tuple(g)


def chi(n: int) -> int:
    """0 for ``n <= 1``, else ``floor(log2(floor(sqrt(n - 1))))``."""
    if n <= 1:
        return 0
    return isqrt(n - 1).bit_length() - 1


def pieces_in_cell(m: int, schedule: str = "ceil") -> int:
    """How many cover pieces feed cell ``m``.

    ``"ceil"`` takes every piece ``n`` with ``n < sqrt(m)`` (``n*n < m``), so
    piece ``n`` is captured from ``n*n + 1`` on.  ``"floor"`` takes ``n <
    floor(sqrt(m))``: capture starts at ``(n+1)**2`` but ``|B(m)| <= m`` is
    guaranteed.
    """
    if m == 0:
        return 0
    if schedule == "ceil":
        return isqrt(m - 1) + 1
    if schedule == "floor":
        return isqrt(m)
    raise InvalidInput(f"unknown schedule {schedule!r}")


def check_cover_hypotheses(cover: CoverFamily, a: Iterable[int], d: Partition) -> None:
    a = frozenset(a)
    for n, piece in enumerate(cover):
        for x in piece:
            d.check_aligned(x)
        missing = split_set(piece) - a
        if missing:
            raise HypothesisFailure(
                f"splitting point {min(missing)} of piece {n} is not in the witness", index=n
            )
    counts = counts_below(a, d.points)
    for n, c in enumerate(counts):
        if c > chi(n):
            raise HypothesisFailure(f"|a ∩ d({n})| = {c} > chi({n}) = {chi(n)}", index=n)


def slalom_from_cover(
    cover: CoverFamily, a: Iterable[int], d: Partition, schedule: str = "ceil"
) -> BinarySlalom:
    cover = [frozenset(p) for p in cover]
    check_cover_hypotheses(cover, a, d)
    # per piece, the distinct slices on each interval
    slices = [[set() for _ in range(d.n_intervals)] for _ in cover]
    for n, piece in enumerate(cover):
        for x in piece:
            for m, s in enumerate(d.slices(x)):
                slices[n][m].add(s)
    cells = []
    for m in range(d.n_intervals):
        cell = set()
        for n in range(min(pieces_in_cell(m, schedule), len(cover))):
            cell |= slices[n][m]
        cells.append(frozenset(cell))
    return BinarySlalom(d, tuple(cells), IDENTITY)


@dataclass(frozen=True)
class SlalomPiece:
    """Points extending ``prefix`` (of length ``d(k)``) whose slices lie in the cells from ``k`` on."""

    slalom: BinarySlalom
    k: int
    prefix: Word

    def __contains__(self, x: Word) -> bool:
        d = self.slalom.partition
        if len(x) != d.horizon or not x.startswith(self.prefix):
            return False
        return all(d.slice(x, n) in self.slalom.cells[n] for n in range(self.k, d.n_intervals))

    def size(self) -> int:
        total = 1
        for n in range(self.k, self.slalom.partition.n_intervals):
            total *= len(self.slalom.cells[n])
        return total

    def __iter__(self) -> Iterator[Word]:
        cells = [sorted(self.slalom.cells[n]) for n in range(self.k, self.slalom.partition.n_intervals)]
        for tail in itertools.product(*cells):
            yield self.prefix + "".join(tail)

    def enumerate(self, limit: int = 1 << 16) -> frozenset[Word]:
        if self.size() > limit:
            raise ResourceLimit(f"piece has {self.size()} points, limit {limit}")
        return frozenset(self)


@dataclass(frozen=True)
class SlalomWitness:
    """Sparse witness derived from a binary slalom, plus its cover recipe."""

    slalom: BinarySlalom
    a: frozenset[int]

    @property
    def partition(self) -> Partition:
        return self.slalom.partition

    def counts(self) -> tuple[int, ...]:
        return counts_below(self.a, self.partition.points)

    def bound(self, n: int) -> int:
        """``sum_{m<n} max(|B(m)| - 1, 0)``."""
        return sum(max(len(self.slalom.cells[m]) - 1, 0) for m in range(n))

    def piece(self, k: int, prefix: Word) -> SlalomPiece:
        d = self.partition
        if not 0 <= k <= d.n_intervals or len(prefix) != d.points[k]:
            raise AlignmentError(f"prefix of length {len(prefix)} does not end at d({k})")
        return SlalomPiece(self.slalom, k, prefix)

    def piece_for(self, x: Word, k: int) -> SlalomPiece:
        return self.piece(k, x[: self.partition.points[k]])


def witness_from_binary_slalom(B: BinarySlalom) -> SlalomWitness:
    verdict = check_width(replace(B, width=IDENTITY))
    if not verdict:
        raise WidthViolation(verdict.reason)
    d = B.partition
    a = frozenset().union(
        *(shift_set(split_set(B.cells[m]), d.points[m]) for m in range(d.n_intervals))
    )
    return SlalomWitness(B, a)
