"""Interval codec on the worked partition (4, 2, 3, 5, 1, 3)."""

from __future__ import annotations

from slalomkit import decode_seq, encode_point, encode_points, decode_seqs, make_partition

d = make_partition([4, 2, 3, 5, 1, 3])
print("points", d.points)

x = "110001001101110010"
f = encode_point(x, d)  # each slice read as a binary number
print("slices", d.slices(x), "->", f)

# values wider than an interval keep only their low bits
y = decode_seq((12, 5, 5, 15, 42, 2), d)
print("decoded", y, d.slices(y))

# the batch path agrees with the scalar one
words = [x, y, "0" * 18, "1" * 18]
assert decode_seqs(encode_points(words, d), d) == words
print("batch round trip ok")
