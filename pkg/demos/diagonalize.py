"""Escaping a cover by choosing bits at enumeration points, and getting blocked."""

from __future__ import annotations

from slalomkit import diagonalize

r = diagonalize("11", {0, 1}, [{"00"}, {"00"}], 2)
print("escape", r.x, [(s.case, s.bit) for s in r.trace])

r = diagonalize("1111", {0}, [{"0000", "1000"}], 1)
print("blocked at stage", r.blocked.n, "position", r.blocked.position, sorted(r.blocked.pair))
