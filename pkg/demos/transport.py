"""Moving a cover certificate along a prefix and back."""

from __future__ import annotations

from slalomkit import certificate_for, check_certificate, prepend_cover_transport, unprepend_cover_transport

c = certificate_for({"000", "011", "110"}, [{"000", "011"}, {"110", "111"}])
print("witness", sorted(c.witness), check_certificate(c).ok)

moved = prepend_cover_transport(c, "10")
print("after prefix 10", sorted(moved.witness), check_certificate(moved).ok)
assert unprepend_cover_transport(moved, "10") == c
print("round trip ok")
