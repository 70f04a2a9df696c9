"""A binary slalom captures a point exactly when its slalom image captures the code."""

from __future__ import annotations

from slalomkit import BinarySlalom, binary_to_slalom, encode_point, goes_through_point, goes_through_seq, make_partition

d = make_partition([2, 2, 2, 2])
B = BinarySlalom(d, (set(), {"10"}, {"01", "11"}, {"00", "11"}))
for x in ["00100100", "11100111", "00000000"]:
    a = goes_through_point(x, B)
    b = goes_through_seq(encode_point(x, d), binary_to_slalom(B))
    print(x, "binary:", a and a.threshold, "coded:", b and b.threshold)
