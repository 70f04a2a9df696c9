"""Turning a cover with a sparse witness into a binary slalom, and where the width bound breaks."""

from __future__ import annotations

from slalomkit import check_width, make_partition, slalom_from_cover, split_set

d = make_partition([1, 1, 1, 1, 1, 3, 1])
pieces = [
    {"00000" + "000" + "0", "00000" + "100" + "0"},
    {"00000" + "001" + "0", "00000" + "101" + "0"},
    {"00000" + "010" + "0", "00000" + "110" + "0"},
]
print("split sets", [sorted(split_set(p)) for p in pieces])

# pieces 0, 1, 2 all feed cell 5 (n*n < 5), two slices each
B = slalom_from_cover(pieces, {5}, d)
print("cell 5 size", len(B.cells[5]), "->", check_width(B))

# feeding piece n only from (n+1)^2 keeps every cell within its width
B = slalom_from_cover(pieces, {5}, d, "floor")
print("floor schedule ->", check_width(B))
