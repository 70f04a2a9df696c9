"""Words, interval partitions, splitting points and finite-horizon eventual relations.

A point of the Cantor space is handled through a finite prefix, a plain ``str``
over ``'0'``/``'1'``.  Position ``k`` of a word holds the value ``x(k)``, so a
word doubles as the characteristic vector of a finite set of naturals.

Sets of naturals are ``frozenset[int]``; they serialize as sorted lists.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

Word = str
NatSet = frozenset


class SlalomError(ValueError):
    """Base class for every error raised by this package."""


class InvalidPartition(SlalomError):
    pass


class NoSplit(SlalomError):
    pass


class InvalidInput(SlalomError):
    pass


class InvalidTarget(InvalidInput):
    pass


class AlignmentError(SlalomError):
    pass


class HypothesisFailure(SlalomError):
    """A construction's hypothesis does not hold; ``index`` names where."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class WidthViolation(SlalomError):
    pass


class NotDominated(SlalomError):
    pass


class ResourceLimit(SlalomError):
    pass


_BITS = frozenset("01")


def check_word(x: str) -> Word:
    if not isinstance(x, str) or not _BITS.issuperset(x):
        raise InvalidInput(f"not a binary word: {x!r}")
    return x


def natset(values: Iterable[int]) -> frozenset[int]:
    out = frozenset(values)
    for v in out:
        if not isinstance(v, int) or v < 0:
            raise InvalidInput(f"not a natural number: {v!r}")
    return out


def word_to_set(x: Word) -> frozenset[int]:
    """Positions holding a 1."""
    return frozenset(i for i, bit in enumerate(x) if bit == "1")


def set_to_word(a: Iterable[int], length: int) -> Word:
    bits = ["0"] * length
    for k in a:
        if k >= length:
            raise InvalidInput(f"element {k} does not fit in a word of length {length}")
        bits[k] = "1"
    return "".join(bits)


@dataclass(frozen=True)
class Partition:
    """Finite prefix ``d(0) < d(1) < ... < d(N)`` of a partitioning real.

    Interval ``n`` is ``[d(n), d(n+1))`` and the horizon in bits is ``d(N)``.
    """

    points: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not pts or pts[0] != 0:
            raise InvalidPartition(f"partition must start at 0: {pts}")
        for lo, hi in zip(pts, pts[1:]):
            if hi <= lo:
                raise InvalidPartition(f"partition not strictly increasing: {pts}")

    @property
    def n_intervals(self) -> int:
        return len(self.points) - 1

    @property
    def horizon(self) -> int:
        return self.points[-1]

    @cached_property
    def lengths(self) -> tuple[int, ...]:
        return tuple(hi - lo for lo, hi in zip(self.points, self.points[1:]))

    def interval(self, n: int) -> tuple[int, int]:
        return self.points[n], self.points[n + 1]

    def slice(self, x: Word, n: int) -> Word:
        return x[self.points[n] : self.points[n + 1]]

    def slices(self, x: Word) -> list[Word]:
        self.check_aligned(x)
        pts = self.points
        return [x[lo:hi] for lo, hi in zip(pts, pts[1:])]

    def check_aligned(self, x: Word) -> None:
        if len(x) != self.horizon:
            raise AlignmentError(
                f"word of length {len(x)} does not match partition horizon {self.horizon}"
            )

    def truncate(self, n_intervals: int) -> Partition:
        return Partition(self.points[: n_intervals + 1])

    def to_json(self) -> list[int]:
        return list(self.points)


def make_partition(deltas: Iterable[int]) -> Partition:
    """Partition whose ``n``-th interval has length ``deltas[n]``."""
    points = [0]
    for delta in deltas:
        if not isinstance(delta, int) or delta <= 0:
            raise InvalidPartition(f"interval lengths must be positive, got {delta!r}")
        points.append(points[-1] + delta)
    return Partition(tuple(points))


def split_point(x: Word, y: Word) -> int:
    """Least index at which ``x`` and ``y`` differ."""
    for i, (p, q) in enumerate(zip(x, y)):
        if p != q:
            return i
    raise NoSplit(f"no splitting point: {x!r} vs {y!r}")


def split_set(X: Iterable[Word]) -> frozenset[int]:
    """All splitting points of pairs of distinct words in ``X``.

    The splitting point of any pair equals the least adjacent splitting point
    between them in lexicographic order, so adjacent pairs suffice.
    """
    words = sorted(set(X))
    if words and len({len(w) for w in words}) > 1:
        raise InvalidInput("split_set needs words of equal length")
    return frozenset(split_point(u, v) for u, v in zip(words, words[1:]))


@dataclass(frozen=True)
class EventualCertificate:
    """``a ∩ [threshold, horizon)`` is contained in the target set.

    ``excess`` is ``|a \\ b|``.  The relation is certified only when the
    threshold leaves a non-empty tail or nothing is in excess.
    """

    threshold: int
    horizon: int
    excess: int

    @property
    def holds(self) -> bool:
        return self.excess == 0 or self.threshold < self.horizon

    def __bool__(self) -> bool:
        return self.holds


def eventually_subset(a: Iterable[int], b: Iterable[int], horizon: int) -> EventualCertificate:
    a, b = frozenset(a), frozenset(b)
    if any(k >= horizon for k in a | b):
        raise InvalidInput(f"elements must lie below the horizon {horizon}")
    missing = a - b
    threshold = max(missing) + 1 if missing else 0
    return EventualCertificate(threshold, horizon, len(missing))


def shift_set(a: Iterable[int], n: int) -> frozenset[int]:
    return frozenset(k + n for k in a)


def count_below(a: Iterable[int], bound: int) -> int:
    """``|a ∩ [0, bound)|``."""
    return sum(1 for k in a if k < bound)


def check_increasing(f: Sequence[int], what: str = "target") -> None:
    for lo, hi in zip(f, f[1:]):
        if hi <= lo:
            raise InvalidTarget(f"{what} must be strictly increasing: {list(f)}")
