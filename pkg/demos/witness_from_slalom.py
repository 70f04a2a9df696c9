"""Splitting witness of a binary slalom and the pieces it names."""

from __future__ import annotations

from slalomkit import BinarySlalom, goes_through_point, make_partition, witness_from_binary_slalom

d = make_partition([2, 2, 2])
B = BinarySlalom(d, (set(), {"01"}, {"00", "11"}))
w = witness_from_binary_slalom(B)
print("witness", sorted(w.a), "counts", w.counts())

x = "100100"
cert = goes_through_point(x, B)
print("captured from", cert.threshold)
for k in range(cert.threshold, d.n_intervals + 1):
    piece = w.piece_for(x, k)
    print(k, sorted(piece.enumerate()))
