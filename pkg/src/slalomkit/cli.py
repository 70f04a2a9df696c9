"""Scenario runner.

Input is line-delimited JSON, one scenario per line::

    {"kind": "roundtrip", "payload": {"deltas": [4, 2], "word": "110001"}}

A line without a payload but with a seed is generated on the fly.  Exit codes:
0 when every verdict holds, 1 when some verdict fails, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import jsonschema

from . import generate as gen
from .codec import (
    binary_to_slalom,
    decode_seq,
    encode_point,
    in_range,
)
from .core import (
    HypothesisFailure,
    Partition,
    SlalomError,
    make_partition,
    split_set,
)
from .filterlab import (
    FilterCertificate,
    certificate_for,
    check_certificate,
    diagonalize,
    eventual_closure_cover,
    prepend_cover_transport,
    unprepend_cover_transport,
)
from .pipelines import (
    encode_family,
    pair_union_bound,
    partreal,
    pull_capture_through_encoding,
    sigma_union_parts,
    sigma_union_witness,
    slalom_catalog,
)
from .rapidity import (
    check_rapidity_witness,
    counts_below,
    reparam_target,
    slalom_from_cover,
    witness_from_binary_slalom,
)
from .slalom import (
    TRIANGULAR,
    BinarySlalom,
    Slalom,
    capture_set,
    check_width,
    goes_through_seq,
    width_by_name,
)

KINDS = (
    "roundtrip",
    "capture",
    "rapidity",
    "build-slalom",
    "witness-from-slalom",
    "certificate",
    "diagonalize",
    "closure",
    "transport",
    "pipeline",
    "sigma-union",
    "catalog",
)


class SchemaError(SlalomError):
    pass


# -- schemas ---------------------------------------------------------------

_WORD = {"type": "string", "pattern": "^[01]*$"}
_NAT = {"type": "integer", "minimum": 0}
_POS = {"type": "integer", "minimum": 1}
_NATS = {"type": "array", "items": _NAT}
_WORDS = {"type": "array", "items": _WORD}
_PIECES = {"type": "array", "items": _WORDS}
_PARTITION = {
    "oneOf": [
        {"required": ["partition"], "not": {"required": ["deltas"]}},
        {"required": ["deltas"], "not": {"required": ["partition"]}},
    ]
}
_PARTITION_PROPS = {"partition": _NATS, "deltas": {"type": "array", "items": _POS}}


def _obj(required: list[str], props: dict, extra: dict | None = None) -> dict:
    schema = {"type": "object", "required": required, "properties": props, "additionalProperties": False}
    schema.update(extra or {})
    return schema


SCHEMAS = {
    "roundtrip": _obj(
        [], {**_PARTITION_PROPS, "word": _WORD, "seq": _NATS},
        {"allOf": [_PARTITION, {"anyOf": [{"required": ["word"]}, {"required": ["seq"]}]}]},
    ),
    "capture": _obj(["cells", "points"], {**_PARTITION_PROPS, "cells": _PIECES, "points": _WORDS}, _PARTITION),
    "rapidity": _obj(
        ["witness", "target"],
        {"witness": _NATS, "target": _NATS, "width": {"type": "string"}, "reparam": _NAT},
    ),
    "build-slalom": _obj(
        ["pieces", "witness"],
        {**_PARTITION_PROPS, "pieces": _PIECES, "witness": _NATS, "schedule": {"enum": ["ceil", "floor"]}},
        _PARTITION,
    ),
    "witness-from-slalom": _obj(["cells"], {**_PARTITION_PROPS, "cells": _PIECES}, _PARTITION),
    "certificate": _obj(["subject", "pieces", "witness"], {"subject": _WORDS, "pieces": _PIECES, "witness": _NATS}),
    "diagonalize": _obj(["a", "aprime", "pieces"], {"a": _WORD, "aprime": _NATS, "pieces": _PIECES, "steps": _NAT}),
    "closure": _obj(["pieces", "index", "s", "t"], {"pieces": _PIECES, "index": _NAT, "s": _WORD, "t": _WORD}),
    "transport": _obj(
        ["subject", "pieces", "witness", "prefix"],
        {"subject": _WORDS, "pieces": _PIECES, "witness": _NATS, "prefix": _WORD},
    ),
    "pipeline": _obj(
        ["family"],
        {"family": {"type": "array", "items": _NATS, "minItems": 1}, "bound": {"type": "array", "items": _POS}, "slalom": {"type": "array", "items": _NATS}},
    ),
    "sigma-union": _obj(["witnesses", "target"], {"witnesses": {"type": "array", "items": _NATS}, "target": _NATS}),
    "catalog": _obj(
        ["bounds", "families", "queries"],
        {
            "bounds": {"type": "array", "items": {"type": "array", "items": _POS}},
            "families": {
                "type": "array",
                "items": _obj(["points", "cells", "bound"], {"points": _WORDS, "cells": _PIECES, "bound": _NAT}),
            },
            "queries": {"type": "array", "items": _NATS},
        },
    ),
}

_RECORD = _obj(
    ["kind"],
    {"kind": {"enum": list(KINDS)}, "payload": {"type": "object"}, "seed": _NAT, "horizon": _NAT, "size": _NAT},
)


@dataclass
class Scenario:
    kind: str
    payload: dict
    seed: int | None = None
    horizon: int | None = None

    def to_record(self) -> dict:
        record = {"kind": self.kind, "payload": self.payload}
        if self.seed is not None:
            record["seed"] = self.seed
        if self.horizon is not None:
            record["horizon"] = self.horizon
        return record

    def validate(self) -> None:
        try:
            jsonschema.validate(self.payload, SCHEMAS[self.kind])
        except jsonschema.ValidationError as exc:
            raise SchemaError(f"{self.kind}: {exc.message}") from None
        if self.horizon is not None:
            longest = _longest(self.payload)
            if longest > self.horizon:
                raise SchemaError(f"payload reaches length {longest}, beyond horizon {self.horizon}")


def _longest(value) -> int:
    """Longest word or integer sequence anywhere in a payload."""
    if isinstance(value, str):
        return len(value)
    if isinstance(value, dict):
        return max((_longest(v) for v in value.values()), default=0)
    if isinstance(value, list):
        own = len(value) if value and all(isinstance(v, int) for v in value) else 0
        return max([own, *(_longest(v) for v in value)])
    return 0


def parse_record(record, default_seed: int | None = None, horizon: int | None = None) -> Scenario:
    if not isinstance(record, dict):
        raise SchemaError("scenario must be a JSON object")
    try:
        jsonschema.validate(record, _RECORD)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from None
    seed = record.get("seed", default_seed)
    h = horizon if horizon is not None else record.get("horizon")
    if "payload" not in record:
        if seed is None:
            raise SchemaError("scenario needs a payload or a seed")
        scenario = generate_instance(record["kind"], seed, record.get("size", 8), h)
    else:
        scenario = Scenario(record["kind"], record["payload"], seed, h)
    scenario.horizon = h
    scenario.validate()
    return scenario


@dataclass
class Report:
    kind: str
    ok: bool
    result: dict = field(default_factory=dict)
    error: str | None = None
    schema_error: bool = False

    @property
    def exit_code(self) -> int:
        return 2 if self.schema_error else (0 if self.ok else 1)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "ok": self.ok, "result": self.result}
        if self.error:
            out["error"] = self.error
        return out

    def to_text(self) -> str:
        status = "ERROR" if self.schema_error else ("PASS" if self.ok else "FAIL")
        line = f"{self.kind:<20} {status}"
        if self.error:
            line += f"  {self.error}"
        return line


# -- runners ---------------------------------------------------------------


def _partition(p: dict) -> Partition:
    if "deltas" in p:
        return make_partition(p["deltas"])
    return Partition(tuple(p["partition"]))


def _cells(raw: list[list[str]]) -> tuple[frozenset[str], ...]:
    return tuple(frozenset(c) for c in raw)


def _run_roundtrip(p: dict) -> tuple[bool, dict]:
    d = _partition(p)
    out, ok = {"partition": d.to_json()}, True
    if "word" in p:
        encoded = encode_point(p["word"], d)
        back = decode_seq(encoded, d)
        out.update(encoded=list(encoded), word_roundtrip=back == p["word"])
        ok &= back == p["word"]
    if "seq" in p:
        decoded = decode_seq(p["seq"], d)
        back = list(encode_point(decoded, d))
        bounded = in_range(p["seq"], d)
        out.update(decoded=decoded, in_range=bounded, seq_roundtrip=back == p["seq"])
        ok &= back == p["seq"] or not bounded
    return ok, out


def _run_capture(p: dict) -> tuple[bool, dict]:
    d = _partition(p)
    B = BinarySlalom(d, _cells(p["cells"]))
    report = capture_set(p["points"], B)
    S = binary_to_slalom(B)
    numeric = {}
    for x in sorted(set(p["points"])):
        cert = goes_through_seq(encode_point(x, d), S)
        numeric[x] = cert.threshold if cert else None
    agree = all(numeric[x] == (report.certificates[x].threshold if x in report.certificates else None) for x in numeric)
    width = check_width(B)
    out = {**report.to_json(), "numeric_thresholds": numeric, "correspondence": agree,
           "width_ok": width.ok, "width_index": width.index}
    return report.ok and agree, out


def _run_rapidity(p: dict) -> tuple[bool, dict]:
    phi = width_by_name(p.get("width", "identity"))
    verdict = check_rapidity_witness(p["witness"], p["target"], phi)
    out = {"counts": list(verdict.counts), "violation": verdict.index, "width": phi.name}
    if "reparam" in p:
        out["reparam_target"] = list(reparam_target(p["target"], phi, p["reparam"]))
    return verdict.ok, out


def _run_build_slalom(p: dict) -> tuple[bool, dict]:
    d = _partition(p)
    pieces = [frozenset(q) for q in p["pieces"]]
    schedule = p.get("schedule", "ceil")
    try:
        B = slalom_from_cover(pieces, p["witness"], d, schedule)
    except HypothesisFailure as exc:
        return False, {"hypothesis_failure": str(exc), "index": exc.index}
    width = check_width(B)
    report = capture_set(frozenset().union(*pieces), B)
    late = []
    for n, piece in enumerate(pieces):
        bound = n * n + 1 if schedule == "ceil" else (n + 1) ** 2
        if bound >= d.n_intervals:
            continue
        for x in piece:
            cert = report.certificates.get(x)
            if cert is None or cert.threshold > bound:
                late.append(x)
    out = {"cells": B.to_json(), "width_ok": width.ok, "width_index": width.index,
           **report.to_json(), "late": sorted(late)}
    return width.ok and not late, out


def _run_witness_from_slalom(p: dict) -> tuple[bool, dict]:
    d = _partition(p)
    w = witness_from_binary_slalom(BinarySlalom(d, _cells(p["cells"])))
    verdict = check_rapidity_witness(w.a, d.points, TRIANGULAR)
    return verdict.ok, {"witness": sorted(w.a), "counts": list(w.counts()), "violation": verdict.index}


def _certificate(p: dict) -> FilterCertificate:
    return FilterCertificate(frozenset(p["subject"]), _cells(p["pieces"]), frozenset(p["witness"]))


def _run_certificate(p: dict) -> tuple[bool, dict]:
    verdict = check_certificate(_certificate(p))
    return verdict.ok, {k: v for k, v in verdict.__dict__.items() if k != "ok"}


def _run_diagonalize(p: dict) -> tuple[bool, dict]:
    steps = p.get("steps", len(set(p["aprime"])))
    result = diagonalize(p["a"], p["aprime"], [frozenset(q) for q in p["pieces"]], steps)
    return result.ok, result.to_json()


def _run_closure(p: dict) -> tuple[bool, dict]:
    pieces = _cells(p["pieces"])
    if p["index"] >= len(pieces):
        raise SchemaError(f"piece {p['index']} does not exist")
    members = pieces[p["index"]]
    L = len(next(iter(members))) if members else max(len(p["s"]), len(p["t"]))
    Z = eventual_closure_cover(pieces, p["index"], p["s"], p["t"], L)
    contained = split_set(Z) <= split_set(members)
    return contained, {"closure": sorted(Z), "split_set": sorted(split_set(Z)), "contained": contained}


def _run_transport(p: dict) -> tuple[bool, dict]:
    c = _certificate(p)
    moved = prepend_cover_transport(c, p["prefix"])
    back = unprepend_cover_transport(moved, p["prefix"])
    valid = bool(check_certificate(moved)) and bool(check_certificate(back))
    roundtrip = back == c
    out = {"prepended": moved.to_json(), "unprepended": back.to_json(), "valid": valid, "roundtrip": roundtrip}
    return (valid or not check_certificate(c)) and roundtrip, out


def _run_pipeline(p: dict) -> tuple[bool, dict]:
    enc = encode_family(p["family"], p.get("bound"))
    if "slalom" in p:
        S = Slalom(tuple(frozenset(c) for c in p["slalom"]))
    else:
        S = Slalom(tuple(frozenset(col) for col in zip(*(c.values for c in enc.clipped))))
    pulled = pull_capture_through_encoding(p["family"], S, p.get("bound"))
    return pulled.ok, {**enc.to_json(), **pulled.to_json()}


def _run_sigma_union(p: dict) -> tuple[bool, dict]:
    f = p["target"]
    b = sigma_union_witness(p["witnesses"], f)
    parts = sigma_union_parts(p["witnesses"], f)
    counts = counts_below(b, f)
    rapid = all(check_rapidity_witness(a, f) for a in p["witnesses"][: len(f)])
    square_ok = all(c <= n * n for n, c in enumerate(counts)) or not rapid
    empty_ok = all(not any(k < f[n] for k in parts[m]) for n in range(len(f)) for m in range(n, len(parts)))
    out = {"union": sorted(b), "parts": [sorted(q) for q in parts], "counts": list(counts),
           "hypothesis": rapid, "square_bound": square_ok, "tails_empty": empty_ok}
    ok = square_ok and empty_ok
    if len(p["witnesses"]) >= 2:
        pair = pair_union_bound(p["witnesses"][0], p["witnesses"][1], f)
        out["pair_bound"] = {"applicable": pair.applicable, "ok": pair.ok, "index": pair.index}
        ok &= pair.ok
    return ok, out


def _run_catalog(p: dict) -> tuple[bool, dict]:
    bounds = p["bounds"]
    families = []
    for fam in p["families"]:
        if fam["bound"] >= len(bounds):
            raise SchemaError(f"bound index {fam['bound']} out of range")
        B = BinarySlalom(partreal(bounds[fam["bound"]]), _cells(fam["cells"]))
        families.append((frozenset(fam["points"]), B))
    catalog = slalom_catalog(families, bounds)
    lookups = [catalog.lookup(q) for q in p["queries"]]
    return all(lookups), {**catalog.to_json(), "lookups": [r.to_json() for r in lookups]}


RUNNERS: dict[str, Callable[[dict], tuple[bool, dict]]] = {
    "roundtrip": _run_roundtrip,
    "capture": _run_capture,
    "rapidity": _run_rapidity,
    "build-slalom": _run_build_slalom,
    "witness-from-slalom": _run_witness_from_slalom,
    "certificate": _run_certificate,
    "diagonalize": _run_diagonalize,
    "closure": _run_closure,
    "transport": _run_transport,
    "pipeline": _run_pipeline,
    "sigma-union": _run_sigma_union,
    "catalog": _run_catalog,
}


def run_scenario(s: Scenario) -> Report:
    try:
        s.validate()
        ok, result = RUNNERS[s.kind](s.payload)
    except SchemaError as exc:
        return Report(s.kind, False, error=str(exc), schema_error=True)
    except SlalomError as exc:
        # well-formed input that violates a mathematical precondition
        return Report(s.kind, False, error=f"{type(exc).__name__}: {exc}")
    return Report(s.kind, bool(ok), result)


# -- generation ------------------------------------------------------------


def _gen_roundtrip(rng, size):
    d = gen.random_partition(rng, size)
    seq = [rng.randrange(1 << k) for k in d.lengths]
    return {"partition": d.to_json(), "word": gen.random_word(rng, d.horizon), "seq": seq}


def _gen_capture(rng, size):
    d = gen.random_partition(rng, size)
    cells = gen.random_binary_cells(rng, d)
    start = size // 2
    # the tail cells must be non-empty for anything to be captured
    cells = [c or frozenset({gen.random_word(rng, k)}) if m >= start else c
             for m, (c, k) in enumerate(zip(cells, d.lengths))]
    points = set()
    for _ in range(max(size // 2, 0)):
        points.add("".join(rng.choice(sorted(c)) if c and (m >= start or rng.random() < 0.5) else gen.random_word(rng, k)
                           for m, (c, k) in enumerate(zip(cells, d.lengths))))
    return {"partition": d.to_json(), "cells": [sorted(c) for c in cells], "points": sorted(points)}


def _gen_rapidity(rng, size):
    f = gen.increasing_target(rng, size + 1)
    return {"witness": sorted(gen.boundary_witness(rng, f)), "target": list(f), "width": "identity"}


def _gen_build_slalom(rng, size):
    if size == 0:
        return {"partition": [0], "pieces": [], "witness": []}
    n_pieces = min(16, max(1, size // 4))
    d = gen.random_partition(rng, max(size, (n_pieces - 1) ** 2 + 2))
    a = gen.chi_witness(rng, d)
    pieces = gen.random_cover(rng, sorted(a), d.horizon, n_pieces, 4)
    return {"partition": d.to_json(), "pieces": [sorted(q) for q in pieces], "witness": sorted(a)}


def _gen_witness_from_slalom(rng, size):
    d = gen.random_partition(rng, size)
    return {"partition": d.to_json(), "cells": [sorted(c) for c in gen.random_binary_cells(rng, d)]}


def _gen_certificate(rng, size):
    subject = sorted({gen.random_word(rng, size) for _ in range(size)})
    groups = [subject[i : i + 3] for i in range(0, len(subject), 3)]
    c = certificate_for(subject, groups)
    return c.to_json()


def _gen_diagonalize(rng, size):
    L = size + 1
    a = gen.random_word(rng, L)
    support = [k for k, bit in enumerate(a) if bit == "1"]
    aprime = sorted(k for k in support if rng.random() < 0.5)
    free = [k for k in range(L) if k not in set(aprime)]
    pieces = [
        sorted(gen.points_splitting_in(rng, rng.sample(free, min(len(free), 3)), L, 4))
        for _ in aprime
    ]
    return {"a": a, "aprime": aprime, "pieces": pieces, "steps": len(aprime)}


def _gen_closure(rng, size):
    L = size
    piece = sorted({gen.random_word(rng, L) for _ in range(max(size, 1))})
    k = rng.randint(0, L)
    t = rng.choice(piece)[:k]
    return {"pieces": [piece], "index": 0, "s": gen.random_word(rng, k), "t": t}


def _gen_transport(rng, size):
    payload = _gen_certificate(rng, size)
    payload["prefix"] = gen.random_word(rng, rng.randint(0, 3))
    return payload


def _gen_pipeline(rng, size):
    family = [[rng.randint(0, 20) for _ in range(max(size, 1))] for _ in range(max(size, 1))]
    return {"family": family}


def _gen_sigma_union(rng, size):
    f = gen.increasing_target(rng, size)
    return {"witnesses": [sorted(gen.boundary_witness(rng, f)) for _ in range(size)], "target": list(f)}


def _gen_catalog(rng, size):
    M = size + 2
    bounds, families, queries = [], [], []
    for di in range(2):
        d = [rng.randint(1, 6) for _ in range(M)]
        part = partreal(d)
        # entry 0 is left at 0 so that a query overshooting there clips back to the member
        members = {(0, *(rng.randint(0, v) for v in d[1:])) for _ in range(rng.randint(1, M - 1))}
        points = sorted(decode_seq(g, part) for g in members)
        cells = [sorted({part.slice(x, m) for x in points}) if m >= len(points) else [] for m in range(M)]
        bounds.append(d)
        families.append({"points": points, "cells": cells, "bound": di})
        for g in sorted(members):
            f = list(g)
            f[0] = rng.choice([0, d[0] + rng.randint(1, 50)])
            queries.append(f)
    return {"bounds": bounds, "families": families, "queries": queries}


GENERATORS = {
    "roundtrip": _gen_roundtrip,
    "capture": _gen_capture,
    "rapidity": _gen_rapidity,
    "build-slalom": _gen_build_slalom,
    "witness-from-slalom": _gen_witness_from_slalom,
    "certificate": _gen_certificate,
    "diagonalize": _gen_diagonalize,
    "closure": _gen_closure,
    "transport": _gen_transport,
    "pipeline": _gen_pipeline,
    "sigma-union": _gen_sigma_union,
    "catalog": _gen_catalog,
}


def generate_instance(kind: str, seed: int, size: int, horizon: int | None = None) -> Scenario:
    if kind not in GENERATORS:
        raise SchemaError(f"unknown kind {kind!r}")
    rng = random.Random(f"{kind}:{seed}:{size}")
    return Scenario(kind, GENERATORS[kind](rng, size), seed, horizon)


# -- entry point -----------------------------------------------------------


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _execute(lines: Iterable[str], args) -> list[Report]:
    def one(line: str) -> Report:
        record = None
        try:
            record = json.loads(line)
            scenario = parse_record(record, args.seed, args.horizon)
        except (json.JSONDecodeError, SchemaError) as exc:
            kind = record.get("kind", "?") if isinstance(record, dict) else "?"
            return Report(str(kind), False, error=str(exc), schema_error=True)
        return run_scenario(scenario)

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        return list(pool.map(one, lines))


def _emit(reports: list[Report], args) -> None:
    if args.format == "json":
        text = "\n".join(json.dumps(r.to_json(), sort_keys=True) for r in reports)
    else:
        text = "\n".join(r.to_text() for r in reports)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _exit_code(reports: list[Report]) -> int:
    if not reports:
        return 2
    return max(r.exit_code for r in reports)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slalomkit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", default=None)
    common.add_argument("--jobs", type=int, default=1)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run scenarios from a file ('-' for stdin)")
    run.add_argument("file")

    g = sub.add_parser("gen", parents=[common], help="generate one scenario")
    g.add_argument("kind")
    g.add_argument("--size", type=int, default=8)

    suite = sub.add_parser("suite", parents=[common], help="generate and run every kind")
    suite.add_argument("--size", type=int, default=8)
    suite.add_argument("--count", type=int, default=3)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gen":
        try:
            scenario = generate_instance(args.kind, args.seed or 0, args.size, args.horizon)
        except SchemaError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        text = json.dumps(scenario.to_record(), sort_keys=True)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return 0
    if args.command == "run":
        lines = [ln for ln in _read_lines(args.file) if ln.strip()]
    else:
        base = args.seed or 0
        lines = [
            json.dumps(generate_instance(kind, base + i, args.size).to_record())
            for kind in KINDS
            for i in range(args.count)
        ]
    reports = _execute(lines, args)
    _emit(reports, args)
    return _exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
