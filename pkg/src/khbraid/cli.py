"""Command-line driver: compute, oracle, compare, arc-dump, verify.

Exit codes: 0 success / verified, 1 verification or comparison failure,
2 input error.  The KH_COEFFS environment variable overrides the default
integer coefficients ("Z", "Q", or "Fp").
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .arcalg import multiplication_table, verify_positivity
from .homalg import BigradedGroup
from .linkinv import BraidWord, compute, verify_markov, verify_skein
from .oracle import braid_to_pd, cube_homology, format_pd, parse_pd
from .planar import parse_matching
from .tangle import verify_braid_relations


class InputError(Exception):
    pass


def _braid_from_args(args) -> BraidWord:
    if args.braid is None:
        raise InputError("--braid is required")
    try:
        return BraidWord.parse(args.braid, strands=args.n)
    except ValueError as e:
        raise InputError(str(e)) from e


def _coeffs(args) -> str:
    c = args.coeffs or os.environ.get("KH_COEFFS") or "Z"
    if c not in ("Z", "Q") and not (c.startswith("F") and c[1:].isdigit()):
        raise InputError(f"bad coefficients {c!r} (use Z, Q, or Fp)")
    return c


def emit(record: dict, path: str | None) -> str:
    """Serialize with stable key order; identical runs emit identical bytes."""
    text = json.dumps(record, sort_keys=True, indent=2) + "\n"
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def parse_result(text: str) -> dict:
    return json.loads(text)


def groups_table(groups: list[dict]) -> str:
    """Bigraded grid, i across and j down, as in the knot homology tables."""
    if not groups:
        return "(trivial)\n"
    is_ = sorted({g["i"] for g in groups})
    js = sorted({g["j"] for g in groups}, reverse=True)
    cell = {}
    for g in groups:
        parts = []
        if g["rank"]:
            parts.append(str(g["rank"]))
        parts.extend(f"Z/{t}" for t in g["torsion"])
        cell[(g["i"], g["j"])] = "+".join(parts) if parts else "."
    width = max(5, max(len(v) for v in cell.values()) + 1)
    head = "j\\i".rjust(6) + "".join(str(i).rjust(width) for i in is_)
    lines = [head]
    for j in js:
        row = str(j).rjust(6)
        for i in is_:
            row += cell.get((i, j), ".").rjust(width)
        lines.append(row)
    return "\n".join(lines) + "\n"


def cmd_compute(args) -> int:
    b = _braid_from_args(args)
    res = compute(b, _coeffs(args))
    if args.table:
        sys.stdout.write(groups_table(res.bigraded.to_json()))
        return 0
    emit(res.to_json(), args.output)
    return 0


def cmd_oracle(args) -> int:
    coeffs = _coeffs(args)
    if args.pd:
        try:
            text = sys.stdin.read() if args.pd == "-" else open(args.pd).read()
            diagram = parse_pd(text)
        except (OSError, ValueError) as e:
            raise InputError(str(e)) from e
        link = "pd"
    else:
        b = _braid_from_args(args)
        diagram = braid_to_pd(b)
        link = b.format()
    H = cube_homology(diagram, coeffs)
    record = {
        "link": link,
        "pd": format_pd(diagram).strip().split("\n") if diagram.crossings or diagram.free_loops else [],
        "n_plus": diagram.n_plus,
        "n_minus": diagram.n_minus,
        "coefficients": coeffs,
        "groups": H.to_json(),
    }
    if args.table:
        sys.stdout.write(groups_table(record["groups"]))
        return 0
    emit(record, args.output)
    return 0


def cmd_compare(args) -> int:
    b = _braid_from_args(args)
    coeffs = _coeffs(args)
    arc = compute(b, coeffs).bigraded
    orc = cube_homology(braid_to_pd(b), coeffs)
    equal = arc == orc
    record = {
        "link": b.format(),
        "coefficients": coeffs,
        "equal": equal,
        "arc_groups": arc.to_json(),
        "oracle_groups": orc.to_json(),
    }
    if not equal:
        record["diff"] = _diff_table(arc, orc)
    emit(record, args.output)
    return 0 if equal else 1


def _diff_table(a: BigradedGroup, b: BigradedGroup) -> list[dict]:
    out = []
    for key in sorted(set(a.entries) | set(b.entries)):
        ra, ta = a.entries.get(key, (0, ()))
        rb, tb = b.entries.get(key, (0, ()))
        if (ra, tuple(sorted(ta))) != (rb, tuple(sorted(tb))):
            out.append(
                {
                    "i": key[0],
                    "j": key[1],
                    "arc": {"rank": ra, "torsion": list(ta)},
                    "oracle": {"rank": rb, "torsion": list(tb)},
                }
            )
    return out


def cmd_arc_dump(args) -> int:
    if args.n is None or args.n < 1:
        raise InputError("-n is required and must be >= 1")
    if args.n > 3:
        raise InputError("arc-dump emits the full multiplication table only for n <= 3")
    table = multiplication_table(args.n)
    if args.source or args.target:
        # restrict to products landing in the block (source, target)
        try:
            src = str(parse_matching(args.source)) if args.source else None
            tgt = str(parse_matching(args.target)) if args.target else None
        except ValueError as e:
            raise InputError(str(e)) from e
        table["blocks"] = [
            b
            for b in table["blocks"]
            if (src is None or b["source"] == src) and (tgt is None or b["target"] == tgt)
        ]
        table["products"] = [
            p
            for p in table["products"]
            if (src is None or p["right"]["source"] == src)
            and (tgt is None or p["left"]["target"] == tgt)
        ]
    emit(table, args.output)
    return 0


def cmd_verify(args) -> int:
    kind = args.what
    if kind == "markov":
        report = verify_markov(_braid_from_args(args), coefficients=_coeffs(args))
    elif kind == "skein":
        b = _braid_from_args(args)
        if not b.letters:
            raise InputError("skein verification needs at least one crossing")
        crossings = [args.crossing] if args.crossing is not None else range(len(b.letters))
        subs = [verify_skein(b, c) for c in crossings]
        report = {"word": b.format(), "crossings": subs, "ok": all(s["ok"] for s in subs)}
    elif kind == "braid-relations":
        if args.n is None:
            raise InputError("-n is required")
        report = verify_braid_relations(args.n)
    elif kind == "positivity":
        if args.n is None:
            raise InputError("-n is required")
        report = verify_positivity(args.n)
        tail = "PASS" if report["ok"] else "FAIL"
        print(f"all structure constants >= 0: {tail}")
        if args.output:
            emit(report, args.output)
        return 0 if report["ok"] else 1
    else:  # unreachable through argparse
        raise InputError(f"unknown verify target {kind}")
    emit(report, args.output)
    return 0 if report["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="khbraid",
        description="Khovanov homology of braid closures, via the arc algebra and via the resolution cube",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, braid=True):
        if braid:
            p.add_argument("--braid", help='braid word, e.g. "1 1 1" or "n=2 1 1 1"')
            p.add_argument("-n", type=int, help="number of strands (alternative to the n= header)")
        p.add_argument("--coeffs", help="Z (default), Q, or Fp such as F2")
        p.add_argument("-o", "--output", help="output path (default stdout)")

    p = sub.add_parser("compute", help="arc-algebra pipeline invariant")
    common(p)
    p.add_argument("--table", action="store_true", help="human-readable bigraded grid")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("oracle", help="cube-of-resolutions invariant")
    common(p)
    p.add_argument("--pd", help="PD code file ('-' for stdin) instead of a braid")
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="run both pipelines; exit 0 iff equal")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("arc-dump", help="basis sizes and multiplication table of H_n")
    p.add_argument("-n", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--source", help='restrict to products from this matching, e.g. "(1 2)(3 4)"')
    p.add_argument("--target", help="restrict to products into this matching")
    p.set_defaults(func=cmd_arc_dump)

    p = sub.add_parser("verify", help="structural verification suites")
    p.add_argument("what", choices=["markov", "skein", "braid-relations", "positivity"])
    common(p)
    p.add_argument("--crossing", type=int, help="skein: single crossing index (default all)")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
