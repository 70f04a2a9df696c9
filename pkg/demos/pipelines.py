"""Encoding a family of sequences and combining sparse sets."""

from __future__ import annotations

from slalomkit import Slalom, encode_family, pull_capture_through_encoding, sigma_union_witness

F = [(5, 1, 7), (6, 1, 7), (0, 2, 3)]
enc = encode_family(F)
print("bound", enc.bound, "collisions", enc.collisions)

# a slalom holding exactly the clipped values captures every member
S = Slalom(tuple(frozenset(col) for col in zip(*(c.values for c in enc.clipped))))
print(pull_capture_through_encoding(F, S).thresholds)

# keep each set only above its own bound
print("union", sorted(sigma_union_witness([{0, 1}, {0, 5}, set()], [2, 4, 8])))
