"""Coding maps between binary words and sequences of naturals relative to a partition.

``encode_point`` reads each interval slice of a word as a big-endian binary
numeral; ``decode_seq`` writes each entry back as the low-order ``|I_n|`` bits.
The two are mutually inverse on aligned words and on range-bounded sequences
(``f(n) < 2**|I_n|``).

``encode_points`` / ``decode_seqs`` are numpy batch versions for large
round-trip sweeps; they agree with the scalar functions on every input.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .core import AlignmentError, InvalidInput, Partition, Word
from .slalom import BinarySlalom, Slalom

# Widest interval handled in uint64 arithmetic; wider ones fall back to Python ints.
_NARROW = 64


def nat_of_word(s: Word) -> int:
    return int(s, 2) if s else 0


def word_of_nat(m: int, k: int) -> Word:
    """The last ``k`` binary digits of ``m``, zero-padded on the left."""
    if m < 0 or k < 0:
        raise InvalidInput(f"word_of_nat needs naturals, got m={m}, k={k}")
    if k == 0:
        return ""
    return format(m & ((1 << k) - 1), f"0{k}b")


def encode_point(x: Word, d: Partition) -> tuple[int, ...]:
    return tuple(int(s, 2) for s in d.slices(x))


def decode_seq(f: Sequence[int], d: Partition) -> Word:
    if len(f) != d.n_intervals:
        raise AlignmentError(f"sequence of length {len(f)} for {d.n_intervals} intervals")
    return "".join(word_of_nat(v, k) for v, k in zip(f, d.lengths))


def in_range(f: Sequence[int], d: Partition) -> bool:
    """Whether every entry fits its interval without truncation."""
    return all(0 <= v < (1 << k) for v, k in zip(f, d.lengths))


def slalom_to_binary(S: Slalom, d: Partition) -> BinarySlalom:
    """Cellwise image under truncating binary expansion; colliding images merge."""
    if len(S.cells) < d.n_intervals:
        raise AlignmentError(f"slalom has {len(S.cells)} cells for {d.n_intervals} intervals")
    cells = tuple(
        frozenset(word_of_nat(v, k) for v in cell) for cell, k in zip(S.cells, d.lengths)
    )
    return BinarySlalom(d, cells, S.width)


def binary_to_slalom(B: BinarySlalom) -> Slalom:
    return Slalom(tuple(frozenset(nat_of_word(w) for w in cell) for cell in B.cells), B.width)


def _slots(d: Partition) -> list[tuple[int, int, int]]:
    """``(lo, hi, col)`` per narrow interval: its bits go right-aligned into 64-bit slot ``col // 64``."""
    return [
        (lo, hi, 64 * n + 64 - (hi - lo))
        for n, (lo, hi) in enumerate(zip(d.points, d.points[1:]))
        if hi - lo <= _NARROW
    ]


def _bit_matrix(words: Sequence[Word], L: int) -> np.ndarray:
    for w in words:
        if len(w) != L:
            raise AlignmentError(f"word of length {len(w)} does not match partition horizon {L}")
    raw = np.frombuffer("".join(words).encode("ascii"), dtype=np.uint8).reshape(len(words), L)
    bits = raw - np.uint8(48)
    if bits.size and bits.max() > 1:
        raise InvalidInput("words must be over '0' and '1'")
    return bits


def encode_points(words: Sequence[Word], d: Partition) -> list[tuple[int, ...]]:
    words = list(words)
    if not words or d.n_intervals == 0:
        for w in words:
            d.check_aligned(w)
        return [() for _ in words]
    N = d.n_intervals
    bits = _bit_matrix(words, d.horizon)
    narrow = np.asarray(d.lengths) <= _NARROW
    slots = np.zeros((len(words), N * 64), dtype=np.uint8)
    for lo, hi, col in _slots(d):
        slots[:, col : col + hi - lo] = bits[:, lo:hi]
    values = np.packbits(slots, axis=1).view(">u8").astype(np.uint64)
    if narrow.all():
        return [tuple(row) for row in values.tolist()]
    out = values.astype(object)
    for j in np.flatnonzero(~narrow):
        lo, hi = d.interval(int(j))
        out[:, j] = [int(w[lo:hi], 2) for w in words]
    return [tuple(row) for row in out.tolist()]


def decode_seqs(seqs: Sequence[Sequence[int]], d: Partition) -> list[Word]:
    seqs = list(seqs)
    L, N = d.horizon, d.n_intervals
    for f in seqs:
        if len(f) != N:
            raise AlignmentError(f"sequence of length {len(f)} for {N} intervals")
    if not seqs or N == 0:
        return ["" for _ in seqs]
    narrow = np.asarray(d.lengths) <= _NARROW
    table = np.array(seqs, dtype=object).reshape(len(seqs), N)
    if (table < 0).any():
        raise InvalidInput("sequences must be natural-valued")
    masks = np.array([(1 << int(k)) - 1 if ok else 0 for k, ok in zip(d.lengths, narrow)], dtype=object)
    values = (table & masks).astype(np.uint64).astype(">u8")
    slots = np.unpackbits(values.view(np.uint8), axis=1)
    bits = np.empty((len(seqs), L), dtype=np.uint8)
    for lo, hi, col in _slots(d):
        bits[:, lo:hi] = slots[:, col : col + hi - lo]
    for j in np.flatnonzero(~narrow):
        lo, hi = d.interval(int(j))
        k = hi - lo
        column = "".join(word_of_nat(int(v), k) for v in table[:, j])
        bits[:, lo:hi] = (np.frombuffer(column.encode("ascii"), dtype=np.uint8) - 48).reshape(-1, k)
    rows = (bits + np.uint8(48)).tobytes().decode("ascii")
    return [rows[i * L : (i + 1) * L] for i in range(len(seqs))]
