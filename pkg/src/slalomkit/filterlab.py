"""Explicit membership certificates for the splitting-point filter of a finite point set.

A set ``a`` belongs to the filter of ``X`` when some cover of ``X`` has all of
its splitting points inside ``a``.  The filter itself quantifies over every
cover and is never computed; this module builds and checks the covers.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .core import (
    AlignmentError,
    InvalidInput,
    ResourceLimit,
    Word,
    check_word,
    shift_set,
    split_set,
    word_to_set,
)

POWERSET_CAP = 20


def _common_length(words: Iterable[Word]) -> int | None:
    lengths = {len(w) for w in words}
    if len(lengths) > 1:
        raise AlignmentError(f"words of mixed lengths {sorted(lengths)}")
    return lengths.pop() if lengths else None


@dataclass(frozen=True)
class FilterCertificate:
    """``subject`` is covered by ``pieces`` and ``witness`` contains every piece's splitting points."""

    subject: frozenset[Word]
    pieces: tuple[frozenset[Word], ...]
    witness: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "subject", frozenset(self.subject))
        object.__setattr__(self, "pieces", tuple(frozenset(p) for p in self.pieces))
        object.__setattr__(self, "witness", frozenset(self.witness))
        _common_length(itertools.chain(self.subject, *self.pieces))

    @property
    def length(self) -> int | None:
        return _common_length(itertools.chain(self.subject, *self.pieces))

    def to_json(self) -> dict:
        return {
            "subject": sorted(self.subject),
            "pieces": [sorted(p) for p in self.pieces],
            "witness": sorted(self.witness),
        }

    @classmethod
    def from_json(cls, data: dict) -> FilterCertificate:
        return cls(
            frozenset(map(check_word, data["subject"])),
            tuple(frozenset(map(check_word, p)) for p in data["pieces"]),
            frozenset(data["witness"]),
        )


def witness_of_cover(cover: Sequence[Iterable[Word]]) -> frozenset[int]:
    """Least witness for a cover: the union of its pieces' splitting points."""
    cover = [frozenset(p) for p in cover]
    _common_length(itertools.chain(*cover))
    return frozenset().union(*(split_set(p) for p in cover))


def certificate_for(subject: Iterable[Word], pieces: Sequence[Iterable[Word]]) -> FilterCertificate:
    pieces = tuple(frozenset(p) for p in pieces)
    return FilterCertificate(frozenset(subject), pieces, witness_of_cover(pieces))


@dataclass(frozen=True)
class CertificateVerdict:
    ok: bool
    failure: str | None = None  # "coverage" or "containment"
    point: Word | None = None
    splitting_point: int | None = None
    piece: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_certificate(c: FilterCertificate) -> CertificateVerdict:
    covered = frozenset().union(*c.pieces)
    for x in sorted(c.subject):
        if x not in covered:
            return CertificateVerdict(False, "coverage", point=x)
    for n, piece in enumerate(c.pieces):
        missing = split_set(piece) - c.witness
        if missing:
            return CertificateVerdict(False, "containment", splitting_point=min(missing), piece=n)
    return CertificateVerdict(True)


def union_certificate(cs: Sequence[FilterCertificate]) -> FilterCertificate:
    return FilterCertificate(
        frozenset().union(*(c.subject for c in cs)),
        tuple(p for c in cs for p in c.pieces),
        frozenset().union(*(c.witness for c in cs)),
    )


def powerset_points(a: Iterable[int], L: int, cap: int = POWERSET_CAP) -> frozenset[Word]:
    """Every word of length ``L`` that is 0 outside ``a``."""
    a = sorted(set(a))
    if a and (a[0] < 0 or a[-1] >= L):
        raise InvalidInput(f"{a} is not a subset of [0, {L})")
    if len(a) > cap:
        raise ResourceLimit(f"2^{len(a)} points exceeds the enumeration cap 2^{cap}")
    out = set()
    for choice in itertools.product("01", repeat=len(a)):
        bits = ["0"] * L
        for k, bit in zip(a, choice):
            bits[k] = bit
        out.add("".join(bits))
    return frozenset(out)


@dataclass(frozen=True)
class Stage:
    n: int
    position: int
    case: int
    bit: str | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "position": self.position, "case": self.case, "bit": self.bit}


@dataclass(frozen=True)
class Blocked:
    """Two members of piece ``n`` extend the current prefix and split at ``position``."""

    n: int
    position: int
    prefix: Word
    pair: tuple[Word, Word]

    def to_json(self) -> dict:
        return {"n": self.n, "position": self.position, "prefix": self.prefix, "pair": list(self.pair)}


@dataclass(frozen=True)
class Diagonalization:
    x: Word | None
    trace: tuple[Stage, ...]
    blocked: Blocked | None = None
    exhausted: bool = False  # fewer enumeration points than requested stages
    positions: tuple[int, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.blocked is None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "trace": [s.to_json() for s in self.trace],
            "blocked": self.blocked.to_json() if self.blocked else None,
            "exhausted": self.exhausted,
        }


def escapes(x: Word, a: Word, pieces: Sequence[Iterable[Word]], positions: Sequence[int]) -> bool:
    """``x`` lies below ``a`` bitwise and, for each handled stage ``n``, its prefix
    through ``positions[n]`` matches no member of piece ``n``."""
    if any(p == "1" and q == "0" for p, q in zip(x, a)):
        return False
    for n, pos in enumerate(positions):
        piece = pieces[n] if n < len(pieces) else ()
        head = x[: pos + 1]
        if any(z[: pos + 1] == head for z in piece):
            return False
    return True


def diagonalize(
    a: Word, aprime: Iterable[int], pieces: Sequence[Iterable[Word]], steps: int
) -> Diagonalization:
    """Build a point below ``a`` that escapes pieces ``0 .. steps-1``.

    Stage ``n`` decides the bit at the ``n``-th element of ``aprime``: 0 when no
    member of piece ``n`` extends the current prefix, the opposite of their
    common bit when they agree, and a ``Blocked`` report when they disagree.
    Other bits are 0 before the first enumeration point and copy ``a`` after it.
    """
    check_word(a)
    L = len(a)
    support = word_to_set(a)
    positions = sorted(set(aprime))
    if not support.issuperset(positions):
        raise InvalidInput(f"aprime {sorted(set(positions) - support)} is outside the support of a")
    pieces = [frozenset(p) for p in pieces]
    for piece in pieces:
        for z in piece:
            if len(z) != L:
                raise AlignmentError(f"piece member of length {len(z)} for a of length {L}")
    stages = min(steps, len(positions))
    positions = positions[:stages]

    x = ["0"] * (positions[0] if positions else 0)
    trace = []
    for n, pos in enumerate(positions):
        prefix = "".join(x)
        piece = pieces[n] if n < len(pieces) else frozenset()
        ext = [z for z in piece if z.startswith(prefix)]
        seen = {z[pos] for z in ext}
        if not ext:
            stage = Stage(n, pos, 1, "0")
        elif len(seen) == 1:
            stage = Stage(n, pos, 2, "1" if "0" in seen else "0")
        else:
            pair = (min(z for z in ext if z[pos] == "0"), min(z for z in ext if z[pos] == "1"))
            trace.append(Stage(n, pos, 3))
            return Diagonalization(None, tuple(trace), Blocked(n, pos, prefix, pair), positions=tuple(positions))
        trace.append(stage)
        x.append(stage.bit)
        stop = positions[n + 1] if n + 1 < stages else L
        x.extend(a[pos + 1 : stop])
    if not positions:
        x = list(a)
    word = "".join(x)
    if not escapes(word, a, pieces, positions):
        raise RuntimeError("diagonalization produced a point that does not escape its pieces")
    return Diagonalization(word, tuple(trace), None, stages < steps, tuple(positions))


def eventual_closure_cover(
    cover: Sequence[Iterable[Word]], n: int, s: Word, t: Word, L: int
) -> frozenset[Word]:
    """Points starting with ``s`` that agree from ``|t|`` on with a member of piece ``n`` starting with ``t``."""
    if len(s) != len(t):
        raise InvalidInput(f"|s| = {len(s)} differs from |t| = {len(t)}")
    if len(s) > L:
        raise InvalidInput(f"prefixes longer than the horizon {L}")
    piece = frozenset(cover[n])
    for y in piece:
        if len(y) != L:
            raise AlignmentError(f"piece member of length {len(y)} for horizon {L}")
    return frozenset(s + y[len(t) :] for y in piece if y.startswith(t))


def prepend_cover_transport(c: FilterCertificate, s: Word) -> FilterCertificate:
    check_word(s)
    return FilterCertificate(
        frozenset(s + x for x in c.subject),
        tuple(frozenset(s + y for y in p) for p in c.pieces),
        shift_set(c.witness, len(s)),
    )


def unprepend_cover_transport(c: FilterCertificate, s: Word) -> FilterCertificate:
    """Certificate for the tails after ``s``; members of a piece not extending ``s`` drop out."""
    check_word(s)
    length = c.length
    if length is not None and len(s) > length:
        raise InvalidInput(f"prefix of length {len(s)} exceeds the horizon {length}")
    strays = sorted(x for x in c.subject if not x.startswith(s))
    if strays:
        raise InvalidInput(f"subject word {strays[0]!r} does not extend {s!r}")
    k = len(s)
    return FilterCertificate(
        frozenset(x[k:] for x in c.subject),
        tuple(frozenset(y[k:] for y in p if y.startswith(s)) for p in c.pieces),
        frozenset(m - k for m in c.witness if m >= k),
    )


def shift_decomposition(X: Iterable[Word], n: int) -> dict[Word, frozenset[Word]]:
    classes: dict[Word, set[Word]] = {}
    for x in X:
        if len(x) < n:
            raise InvalidInput(f"word {x!r} shorter than {n}")
        classes.setdefault(x[:n], set()).add(x[n:])
    return {s: frozenset(tails) for s, tails in sorted(classes.items())}


def reassemble(classes: dict[Word, Iterable[Word]]) -> frozenset[Word]:
    return frozenset(s + t for s, tails in classes.items() for t in tails)


def shift_closure(c: FilterCertificate, n: int, cap: int = POWERSET_CAP) -> FilterCertificate:
    """Certificate for every length-``n`` prefix followed by a point of ``c.subject``."""
    if n > cap:
        raise ResourceLimit(f"2^{n} prefixes exceeds the enumeration cap 2^{cap}")
    prefixes = ("".join(bits) for bits in itertools.product("01", repeat=n))
    return union_certificate([prepend_cover_transport(c, s) for s in prefixes])
