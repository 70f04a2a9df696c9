"""Witness transformations behind the domination and slalom-catalog arguments.

Finite families of sequences are dominated, clipped under the bound, and
encoded as binary words over the partition whose interval lengths are the
bound.  Capture of the encoded words then pulls back to capture of the
original sequences.  Also here: the counting that makes rapid-filter sets
closed under finite and countable unions.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .codec import binary_to_slalom, decode_seq, encode_point
from .core import InvalidInput, InvalidPartition, NotDominated, Partition, Word, check_increasing
from .rapidity import check_rapidity_witness, counts_below
from .slalom import IDENTITY, BinarySlalom, Slalom, WidthFunction, capture_set, goes_through_seq


def partreal(d: Sequence[int]) -> Partition:
    """Partition whose ``n``-th interval has length ``d(n)``."""
    points = [0]
    for v in d:
        if v <= 0:
            raise InvalidPartition(f"entries must be positive, got {v}")
        points.append(points[-1] + v)
    return Partition(tuple(points))


@dataclass(frozen=True)
class Clipped:
    """``values`` is below the bound everywhere and equals the input from ``threshold`` on."""

    values: tuple[int, ...]
    threshold: int


def clip_to_bound(f: Sequence[int], d: Sequence[int]) -> Clipped:
    if len(f) != len(d):
        raise InvalidInput(f"lengths differ: {len(f)} vs {len(d)}")
    over = [n for n, (u, v) in enumerate(zip(f, d)) if u > v]
    j = over[-1] + 1 if over else 0
    if over and j == len(f):
        raise NotDominated(f"sequence exceeds the bound at the last index {j - 1}")
    values = tuple(0 if (n < j and u > v) else u for n, (u, v) in enumerate(zip(f, d)))
    return Clipped(values, j)


def _family(F: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    family = list(dict.fromkeys(tuple(f) for f in F))
    if len({len(f) for f in family}) > 1:
        raise InvalidInput("family members must have equal length")
    return family


def dominate_family(F: Iterable[Sequence[int]]) -> tuple[int, ...]:
    family = _family(F)
    if not family:
        raise InvalidInput("cannot dominate an empty family")
    return tuple(1 + max(column) for column in zip(*family))


@dataclass(frozen=True)
class EncodedFamily:
    family: tuple[tuple[int, ...], ...]
    bound: tuple[int, ...]
    partition: Partition
    clipped: tuple[Clipped, ...]
    points: tuple[Word, ...]

    @property
    def image(self) -> frozenset[Word]:
        return frozenset(self.points)

    @property
    def collisions(self) -> int:
        return len(self.points) - len(self.image)

    def to_json(self) -> dict:
        return {
            "bound": list(self.bound),
            "partition": self.partition.to_json(),
            "clipped": [list(c.values) for c in self.clipped],
            "clip_thresholds": [c.threshold for c in self.clipped],
            "points": list(self.points),
            "collisions": self.collisions,
        }


def encode_family(F: Iterable[Sequence[int]], bound: Sequence[int] | None = None) -> EncodedFamily:
    """Clip every member under ``bound`` (default: pointwise max + 1) and write it in binary.

    Clipped entries are at most ``bound(n) < 2**bound(n)``, so the encoding is
    injective on distinct clipped sequences.
    """
    family = _family(F)
    if not family:
        raise InvalidInput("cannot encode an empty family")
    d = tuple(bound) if bound is not None else dominate_family(family)
    partition = partreal(d)
    clipped = tuple(clip_to_bound(f, d) for f in family)
    points = tuple(decode_seq(c.values, partition) for c in clipped)
    return EncodedFamily(tuple(family), d, partition, clipped, points)


@dataclass(frozen=True)
class PullReport:
    thresholds: dict[tuple[int, ...], int]
    failures: tuple[tuple[int, ...], ...]
    encoded: EncodedFamily

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "thresholds": [[list(f), k] for f, k in self.thresholds.items()],
            "failures": [list(f) for f in self.failures],
        }


def pull_capture_through_encoding(
    F: Iterable[Sequence[int]], S: Slalom, bound: Sequence[int] | None = None
) -> PullReport:
    """Certify ``f ∈* S`` for each member from capture of its decoded clipped image.

    The certified threshold is the larger of the clip threshold and the
    threshold at which the image's numeric slices enter ``S``.
    """
    enc = encode_family(F, bound)
    horizon = len(enc.bound)
    thresholds, failures = {}, []
    for f, clip, y in zip(enc.family, enc.clipped, enc.points):
        g = encode_point(y, enc.partition)
        cert = goes_through_seq(g, S)
        k = max(clip.threshold, cert.threshold) if cert else horizon
        if k < horizon and all(f[n] in S.cells[n] for n in range(k, horizon)):
            thresholds[f] = k
        else:
            failures.append(f)
    return PullReport(thresholds, tuple(failures), enc)


@dataclass(frozen=True)
class CatalogEntry:
    slalom: Slalom
    x_index: int
    d_index: int


@dataclass(frozen=True)
class Lookup:
    """Certificate chain for ``f`` going through ``catalog.entries[entry]``."""

    d_index: int
    clip_threshold: int
    x_index: int
    entry: int
    point: Word
    capture_threshold: int
    threshold: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class Miss:
    reason: str

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"miss": self.reason}


@dataclass
class Catalog:
    """Numeric slaloms obtained from binary slaloms capturing the given point sets.

    ``entries`` holds one slalom per distinct cell sequence (first occurrence
    kept); ``duplicates`` counts the dropped ones.
    """

    bounds: tuple[tuple[int, ...], ...]
    families: tuple[tuple[frozenset[Word], BinarySlalom], ...]
    entries: list[CatalogEntry]
    duplicates: int
    _family_d: tuple[int, ...]
    _family_entry: tuple[int, ...]

    def lookup(self, f: Sequence[int]) -> Lookup | Miss:
        """Try bounds in index order and return the first complete chain."""
        f = tuple(f)
        reasons = []
        for di, d in enumerate(self.bounds):
            if len(d) != len(f):
                reasons.append(f"bound {di}: length mismatch")
                continue
            try:
                clip = clip_to_bound(f, d)
            except NotDominated:
                reasons.append(f"bound {di}: not dominated")
                continue
            y = decode_seq(clip.values, partreal(d))
            for xi, (X, B) in enumerate(self.families):
                if self._family_d[xi] != di or y not in X:
                    continue
                entry = self._family_entry[xi]
                cert = goes_through_seq(encode_point(y, B.partition), self.entries[entry].slalom)
                if cert is None:
                    continue
                k = max(clip.threshold, cert.threshold)
                if k < len(f):
                    return Lookup(di, clip.threshold, xi, entry, y, cert.threshold, k)
            reasons.append(f"bound {di}: decoded point in no family")
        return Miss("; ".join(reasons) or "empty catalog")

    def to_json(self) -> dict:
        return {
            "slaloms": [
                {"cells": e.slalom.to_json(), "x_index": e.x_index, "d_index": e.d_index}
                for e in self.entries
            ],
            "duplicates": self.duplicates,
        }


def slalom_catalog(
    families: Sequence[tuple[Iterable[Word], BinarySlalom]], D: Sequence[Sequence[int]]
) -> Catalog:
    """Each family is a point set with a binary slalom over ``partreal(d)`` for some ``d`` in ``D``."""
    bounds = tuple(tuple(d) for d in D)
    partitions = [partreal(d) for d in bounds]
    fams, family_d, family_entry = [], [], []
    entries: list[CatalogEntry] = []
    seen: dict[tuple, int] = {}
    for xi, (X, B) in enumerate(families):
        X = frozenset(X)
        matches = [di for di, p in enumerate(partitions) if p == B.partition]
        if not matches:
            raise InvalidInput(f"family {xi}: binary slalom is over no partition in D")
        report = capture_set(X, B)
        if not report:
            raise InvalidInput(f"family {xi}: slalom does not capture {report.failures[0]!r}")
        S = binary_to_slalom(B)
        key = (matches[0], S.cells)
        if key not in seen:
            seen[key] = len(entries)
            entries.append(CatalogEntry(S, xi, matches[0]))
        fams.append((X, B))
        family_d.append(matches[0])
        family_entry.append(seen[key])
    return Catalog(bounds, tuple(fams), entries, len(fams) - len(entries), tuple(family_d), tuple(family_entry))


def sigma_union_parts(witnesses: Sequence[Iterable[int]], f: Sequence[int]) -> list[frozenset[int]]:
    """``b_n``: the elements of the ``n``-th witness at or above ``f(n)``."""
    check_increasing(f)
    if len(witnesses) < len(f):
        raise InvalidInput(f"{len(witnesses)} witnesses for {len(f)} target entries")
    return [frozenset(k for k in a if k >= bound) for a, bound in zip(witnesses, f)]


def sigma_union_witness(witnesses: Sequence[Iterable[int]], f: Sequence[int]) -> frozenset[int]:
    """Union of the tails ``b_n``; meets ``[0, f(n))`` in at most ``n**2`` points
    when every witness meets it in at most ``n``."""
    witnesses = [frozenset(a) for a in witnesses]
    b = frozenset().union(*sigma_union_parts(witnesses, f))
    used = witnesses[: len(f)]
    if used and all(check_rapidity_witness(a, f, IDENTITY) for a in used):
        for n, c in enumerate(counts_below(b, f)):
            if c > n * n:
                raise RuntimeError(f"|b ∩ f({n})| = {c} exceeds {n * n}")
    return b


@dataclass(frozen=True)
class PairBound:
    applicable: bool  # both inputs pass the width bound
    ok: bool
    index: int | None
    counts: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok


def pair_union_bound(
    a: Iterable[int], b: Iterable[int], f: Sequence[int], phi: WidthFunction = IDENTITY
) -> PairBound:
    a, b = frozenset(a), frozenset(b)
    applicable = bool(check_rapidity_witness(a, f, phi)) and bool(check_rapidity_witness(b, f, phi))
    counts = counts_below(a | b, f)
    for n, c in enumerate(counts):
        if c > 2 * phi(n):
            return PairBound(applicable, not applicable, n, counts)
    return PairBound(applicable, True, None, counts)


@dataclass(frozen=True)
class FailureCorrespondence:
    """Per candidate: the points a binary slalom misses and the sequences its numeric image misses."""

    binary: tuple[frozenset[Word], ...]
    numeric: tuple[frozenset[tuple[int, ...]], ...]

    def matches(self, d: Partition) -> bool:
        return all(
            frozenset(encode_point(x, d) for x in xs) == fs
            for xs, fs in zip(self.binary, self.numeric)
        )


def capture_failure_correspondence(
    X: Iterable[Word], pool: Sequence[BinarySlalom]
) -> FailureCorrespondence:
    X = frozenset(X)
    binary, numeric = [], []
    for B in pool:
        binary.append(frozenset(capture_set(X, B).failures))
        S = binary_to_slalom(B)
        images = {encode_point(x, B.partition) for x in X}
        numeric.append(frozenset(g for g in images if goes_through_seq(g, S) is None))
    return FailureCorrespondence(tuple(binary), tuple(numeric))
