"""Width-bounded slaloms, binary slaloms over a partition, and capture certificates."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from math import isqrt

from .core import AlignmentError, InvalidInput, Partition, Word


@dataclass(frozen=True)
class WidthFunction:
    """A named map from cell index to the largest allowed cell size."""

    name: str
    fn: Callable[[int], int] = field(compare=False, repr=False)

    def __call__(self, n: int) -> int:
        return self.fn(n)


IDENTITY = WidthFunction("identity", lambda n: n)
FLOOR_SQRT = WidthFunction("floor-sqrt", isqrt)
TRIANGULAR = WidthFunction("triangular", lambda n: n * (n - 1) // 2)
SQUARE = WidthFunction("square", lambda n: n * n)


def constant(c: int) -> WidthFunction:
    return WidthFunction(f"const:{c}", lambda n: c)


def scaled(k: int, base: WidthFunction) -> WidthFunction:
    return WidthFunction(f"{k}*{base.name}", lambda n: k * base(n))


def tabulated(head: Sequence[int], then: WidthFunction = IDENTITY) -> WidthFunction:
    """Explicit values for the first indices, ``then`` afterwards."""
    head = tuple(head)
    name = "table:" + ",".join(map(str, head)) + "+" + then.name
    return WidthFunction(name, lambda n: head[n] if n < len(head) else then(n))


def width_by_name(name: str) -> WidthFunction:
    """Parse the names produced by the constructors above (except ``scaled``)."""
    builtin = {w.name: w for w in (IDENTITY, FLOOR_SQRT, TRIANGULAR, SQUARE)}
    if name in builtin:
        return builtin[name]
    if name.startswith("const:"):
        return constant(int(name[6:]))
    if name.startswith("table:"):
        head, _, rest = name[6:].partition("+")
        values = [int(v) for v in head.split(",") if v]
        return tabulated(values, width_by_name(rest or "identity"))
    raise InvalidInput(f"unknown width function {name!r}")


@dataclass(frozen=True)
class Slalom:
    """Finite sequence of finite sets of naturals.

    The width bound is not enforced on construction; ``check_width`` reports
    violations.
    """

    cells: tuple[frozenset[int], ...]
    width: WidthFunction = IDENTITY

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(frozenset(c) for c in self.cells))

    def __len__(self) -> int:
        return len(self.cells)

    def to_json(self) -> list[list[int]]:
        return [sorted(c) for c in self.cells]


@dataclass(frozen=True)
class BinarySlalom:
    """Cell ``n`` is a set of words of length ``|I_n|`` for the given partition."""

    partition: Partition
    cells: tuple[frozenset[Word], ...]
    width: WidthFunction = IDENTITY

    def __post_init__(self):
        cells = tuple(frozenset(c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        if len(cells) < self.partition.n_intervals:
            raise AlignmentError(
                f"{len(cells)} cells for a partition of {self.partition.n_intervals} intervals"
            )

    @classmethod
    def empty(cls, partition: Partition, width: WidthFunction = IDENTITY) -> BinarySlalom:
        return cls(partition, tuple(frozenset() for _ in range(partition.n_intervals)), width)

    def __len__(self) -> int:
        return len(self.cells)

    def to_json(self) -> list[list[str]]:
        return [sorted(c) for c in self.cells]


@dataclass(frozen=True)
class WidthVerdict:
    ok: bool
    index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_width(s: Slalom | BinarySlalom) -> WidthVerdict:
    lengths = s.partition.lengths if isinstance(s, BinarySlalom) else None
    for n, cell in enumerate(s.cells):
        if len(cell) > s.width(n):
            return WidthVerdict(False, n, f"|cell {n}| = {len(cell)} > {s.width(n)}")
        if lengths is not None and n < len(lengths):
            bad = [w for w in cell if len(w) != lengths[n]]
            if bad:
                return WidthVerdict(False, n, f"word {min(bad)!r} in cell {n} is not of length {lengths[n]}")
    return WidthVerdict(True)


@dataclass(frozen=True)
class CaptureCertificate:
    """Entries at every index in ``[threshold, horizon)`` land in their cells."""

    threshold: int
    horizon: int


def _least_threshold(hits: Sequence[bool]) -> CaptureCertificate | None:
    horizon = len(hits)
    k = horizon
    while k > 0 and hits[k - 1]:
        k -= 1
    return CaptureCertificate(k, horizon) if k < horizon else None


def goes_through_seq(f: Sequence[int], S: Slalom) -> CaptureCertificate | None:
    """Least threshold from which ``f`` goes through ``S``; ``None`` if only the horizon works."""
    if len(S.cells) < len(f):
        raise AlignmentError(f"slalom has {len(S.cells)} cells, sequence has {len(f)} entries")
    return _least_threshold([v in cell for v, cell in zip(f, S.cells)])


def goes_through_point(x: Word, B: BinarySlalom) -> CaptureCertificate | None:
    d = B.partition
    return _least_threshold([piece in cell for piece, cell in zip(d.slices(x), B.cells)])


@dataclass(frozen=True)
class SetCapture:
    certificates: dict[Word, CaptureCertificate]
    failures: tuple[Word, ...]
    horizon: int

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "thresholds": {x: c.threshold for x, c in self.certificates.items()},
            "horizon": self.horizon,
            "failures": list(self.failures),
        }


def capture_set(X: Iterable[Word], B: BinarySlalom) -> SetCapture:
    certificates, failures = {}, []
    for x in sorted(set(X)):
        cert = goes_through_point(x, B)
        if cert is None:
            failures.append(x)
        else:
            certificates[x] = cert
    return SetCapture(certificates, tuple(failures), B.partition.n_intervals)
