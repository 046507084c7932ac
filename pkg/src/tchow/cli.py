"""Command-line surface: JSON input/output and human-readable tables.

Commands
--------
``validate``   check a marked fansy divisor against every defining condition
``chow``       k-cycle class group presentations (one k or all)
``eff``        effective-cone generator classes for one k
``counts``     generator counts (r, v, t) for every k
``oracle``     toric presentation of a complete fan (the independent check)
``fixture``    emit a named worked example as an input document
``crosscheck`` downgrade pipeline vs toric oracle for every k

Inputs are JSON documents with exact rational coordinates: integers, or
strings like ``"-3/2"``.  Floating point is never read or written.  Exit
codes: 0 success, 1 validation failure or crosscheck mismatch, 2 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .build import (
    FIXTURE_NAMES,
    DowngradeInput,
    IncompleteFanError,
    KlyachkoBundle,
    RayFiltration,
    bundle_rank2,
    downgrade,
    fixture,
)
from .chow import presentation, toric_chow_presentation
from .effcone import eff_generators
from .exactlin import ivec
from .fansy import (
    MarkedFansyDivisor,
    enumerate_generators,
    make_divisor,
    validate,
)
from .polyhedra import Fan, GeometryError, make_complex, make_cone, make_fan, make_polyhedron

SCHEMA_VERSION = 1


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact JSON coordinates


def _rat(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"coordinates must be integers or 'a/b' strings, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {value!r}") from exc
    raise ParseError(f"bad rational {value!r}")


def _rat_str(f: Fraction) -> str:
    return str(f)


def _int(value) -> int:
    f = _rat(value)
    if f.denominator != 1:
        raise ParseError(f"expected an integer, got {value!r}")
    return int(f)


# ---------------------------------------------------------------------------
# documents


def parse_fan(doc) -> Fan:
    try:
        rank = int(doc["rank"])
        cones = doc["maximal_cones"]
    except (KeyError, TypeError) as exc:
        raise ParseError("fan documents need 'rank' and 'maximal_cones'") from exc
    return make_fan(
        [make_cone([ivec(map(_int, g)) for g in c], rank) for c in cones], rank
    )


def fan_document(fan: Fan) -> dict:
    return {
        "rank": fan.ambient_rank,
        "maximal_cones": [
            [list(g) for g in c.generators] for c in fan.maximal_cones
        ],
    }


def parse_input(doc) -> MarkedFansyDivisor:
    """Build a divisor from an explicit document or a constructor stanza."""
    if not isinstance(doc, dict):
        raise ParseError("input document must be a JSON object")
    if doc.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc.get('schema_version')!r}")
    stanzas = [key for key in ("downgrade", "bundle") if key in doc]
    explicit = "complexes" in doc
    if explicit + len(stanzas) != 1:
        raise ParseError(
            "exactly one of explicit data or a downgrade/bundle stanza is required"
        )
    if stanzas == ["downgrade"]:
        stanza = doc["downgrade"]
        fan = parse_fan(stanza["fan"])
        change = stanza.get("basis_change")
        if change is not None:
            change = tuple(ivec(map(_int, row)) for row in change)
        return downgrade(DowngradeInput(fan, change))
    if stanzas == ["bundle"]:
        stanza = doc["bundle"]
        fan = parse_fan(stanza["fan"])
        filts = []
        for entry in stanza["filtrations"]:
            ray = ivec(map(_int, entry["ray"]))
            filts.append(
                (
                    ray,
                    RayFiltration(
                        _int(entry["full_until"]),
                        entry.get("line"),
                        _int(entry["line_until"]) if entry.get("line") is not None else None,
                    ),
                )
            )
        return bundle_rank2(KlyachkoBundle(fan, tuple(filts)))
    try:
        rank = int(doc["rank"])
        points = [str(p) for p in doc["points"]]
        complexes = doc["complexes"]
        marked_doc = doc["marked"]
    except (KeyError, TypeError) as exc:
        raise ParseError("explicit documents need rank, points, complexes, marked") from exc
    labeled = []
    for p in points:
        if p not in complexes:
            raise ParseError(f"missing subdivision for point {p!r}")
        cells = []
        for cell in complexes[p]:
            verts = [[_rat(c) for c in v] for v in cell.get("vertices", [])]
            rays = [ivec(map(_int, r)) for r in cell.get("rays", [])]
            cells.append(make_polyhedron(verts, rays, rank))
        labeled.append((p, make_complex(cells, rank)))
    marked = [make_cone([ivec(map(_int, g)) for g in c], rank) for c in marked_doc]
    return make_divisor(rank, labeled, marked)


def divisor_document(x: MarkedFansyDivisor) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "rank": x.rank,
        "points": list(x.points),
        "complexes": {
            p: [
                {
                    "vertices": [[_rat_str(c) for c in v] for v in cell.vertices],
                    "rays": [list(g) for g in cell.tail.generators],
                }
                for cell in x.complex_at(p).maximal_cells
            ]
            for p in x.points
        },
        "marked": sorted(
            [list(g) for g in c.generators] for c in x.marked
        ),
    }


def _presentation_document(pres) -> dict:
    kinds = [g.kind for g in pres.generators]
    return {
        "k": pres.k,
        "counts": {
            "r": kinds.count("R"),
            "v": kinds.count("V"),
            "t": kinds.count("T"),
        },
        "generators": [g.label() for g in pres.generators],
        "relations": [list(r) for r in pres.relations],
        "smith": {"free_rank": pres.free_rank, "torsion": list(pres.torsion)},
    }


def _counts_entry(x, k) -> dict:
    r, v, t = enumerate_generators(x, k).counts
    return {"k": k, "r": r, "v": v, "t": t}


# ---------------------------------------------------------------------------
# command implementations


def _emit(args, doc: dict, text: str) -> None:
    payload = (
        json.dumps(doc, sort_keys=True, indent=2) + "\n" if args.json else text
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _read_json(path: str):
    data = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def _load_divisor(path: str) -> MarkedFansyDivisor:
    return parse_input(_read_json(path))


def cmd_validate(args) -> int:
    x = _load_divisor(args.file)
    report = validate(x)
    doc = {
        "command": "validate",
        "valid": report.ok,
        "violations": [
            {"code": v.code, "message": v.message} for v in report.violations
        ],
    }
    _emit(args, doc, ("valid\n" if report.ok else f"{report}\n"))
    return 0 if report.ok else 1


def _require_valid(x: MarkedFansyDivisor) -> None:
    report = validate(x)
    if not report.ok:
        raise InvalidDivisor(str(report))


class InvalidDivisor(ValueError):
    pass


def cmd_chow(args) -> int:
    x = _load_divisor(args.file)
    _require_valid(x)
    ks = range(x.rank + 2) if args.k is None else [args.k]
    results = [_presentation_document(presentation(x, k)) for k in ks]
    doc = {"command": "chow", "results": results}
    lines = ["  k  generators  relations  free_rank  torsion"]
    for res in results:
        smith = res["smith"]
        lines.append(
            f"{res['k']:>3}  {len(res['generators']):>10}  "
            f"{len(res['relations']):>9}  {smith['free_rank']:>9}  "
            f"{smith['torsion'] or '-'}"
        )
    _emit(args, doc, "\n".join(lines) + "\n")
    return 0


def cmd_eff(args) -> int:
    x = _load_divisor(args.file)
    _require_valid(x)
    report = eff_generators(x, args.k)
    doc = {
        "command": "eff",
        "k": args.k,
        "smith": {
            "free_rank": report.presentation.free_rank,
            "torsion": list(report.presentation.torsion),
        },
        "generators": [
            {"generator": g.label(), "class": list(cls)} for g, cls in report.entries
        ],
        "distinct_classes": [
            {"class": list(cls), "generators": [g.label() for g in gens]}
            for cls, gens in report.distinct_classes
        ],
    }
    lines = [f"effective {args.k}-cycle generators ({report.generator_count}):"]
    for cls, gens in report.distinct_classes:
        lines.append(f"  class {list(cls)}  <-  {', '.join(g.label() for g in gens)}")
    _emit(args, doc, "\n".join(lines) + "\n")
    return 0


def cmd_counts(args) -> int:
    x = _load_divisor(args.file)
    _require_valid(x)
    entries = [_counts_entry(x, k) for k in range(x.rank + 2)]
    doc = {"command": "counts", "results": entries}
    lines = ["  k    r    v    t  total"]
    for e in entries:
        lines.append(
            f"{e['k']:>3}  {e['r']:>3}  {e['v']:>3}  {e['t']:>3}  {e['r']+e['v']+e['t']:>5}"
        )
    _emit(args, doc, "\n".join(lines) + "\n")
    return 0


def cmd_oracle(args) -> int:
    fan = parse_fan(_read_json(args.fanfile))
    ks = range(fan.ambient_rank + 1) if args.k is None else [args.k]
    results = [_presentation_document(toric_chow_presentation(fan, k)) for k in ks]
    doc = {"command": "oracle", "results": results}
    lines = ["  k  generators  relations  free_rank  torsion"]
    for res in results:
        smith = res["smith"]
        lines.append(
            f"{res['k']:>3}  {len(res['generators']):>10}  "
            f"{len(res['relations']):>9}  {smith['free_rank']:>9}  "
            f"{smith['torsion'] or '-'}"
        )
    _emit(args, doc, "\n".join(lines) + "\n")
    return 0


def cmd_fixture(args) -> int:
    x = fixture(args.name)
    doc = divisor_document(x)
    _emit(args, doc, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_crosscheck(args) -> int:
    fan = parse_fan(_read_json(args.fanfile))
    x = downgrade(DowngradeInput(fan))
    _require_valid(x)
    results = []
    all_match = True
    for k in range(fan.ambient_rank + 1):
        mine = presentation(x, k)
        oracle = toric_chow_presentation(fan, k)
        match = mine.smith == oracle.smith
        all_match = all_match and match
        results.append(
            {
                "k": k,
                "pipeline": {"free_rank": mine.free_rank, "torsion": list(mine.torsion)},
                "oracle": {"free_rank": oracle.free_rank, "torsion": list(oracle.torsion)},
                "match": match,
            }
        )
    doc = {"command": "crosscheck", "match": all_match, "results": results}
    lines = ["  k  pipeline           oracle             match"]
    for res in results:
        p, o = res["pipeline"], res["oracle"]
        lines.append(
            f"{res['k']:>3}  rank {p['free_rank']} tors {p['torsion'] or '-':<8}"
            f"  rank {o['free_rank']} tors {o['torsion'] or '-':<8}  {res['match']}"
        )
    _emit(args, doc, "\n".join(lines) + "\n")
    return 0 if all_match else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tchow",
        description="Chow presentations of complete rational complexity-one torus varieties",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--json", action="store_true", help="emit the JSON document")
        p.add_argument("--out", help="write the output to this path")

    p = sub.add_parser("validate", help="validate an input document")
    p.add_argument("file", nargs="?", default="-")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("chow", help="class-group presentations")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--all", action="store_true", help="all k (the default)")
    add_common(p)
    p.set_defaults(func=cmd_chow)

    p = sub.add_parser("eff", help="effective-cone generator classes")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--k", type=int, required=True)
    add_common(p)
    p.set_defaults(func=cmd_eff)

    p = sub.add_parser("counts", help="generator counts per k")
    p.add_argument("file", nargs="?", default="-")
    add_common(p)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("oracle", help="toric presentation of a complete fan")
    p.add_argument("fanfile", nargs="?", default="-")
    p.add_argument("--k", type=int, default=None)
    add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fixture", help="emit a worked example as an input document")
    p.add_argument("name", choices=FIXTURE_NAMES)
    add_common(p)
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("crosscheck", help="downgrade pipeline vs toric oracle")
    p.add_argument("fanfile", nargs="?", default="-")
    add_common(p)
    p.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, KeyError, TypeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except InvalidDivisor as exc:
        print(f"validation failure:\n{exc}", file=sys.stderr)
        return 1
    except (GeometryError, IncompleteFanError, ValueError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
