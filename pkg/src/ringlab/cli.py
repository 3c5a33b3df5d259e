"""Command-line front end: ``ringlab analyze | element | corpus``.

Exit codes: 0 success, 1 a corpus check failed, 2 bad input (parse error,
unknown property, unreadable file), 3 an order cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import polarity as pol
from . import structure as st
from . import theorems as th
from .dsl import eval_ring_expr, parse_element
from .errors import CapExceededError, DSLSemanticError, DSLSyntaxError, ElementParseError
from .rings import MatrixRing
from .verify import BUILTIN_CORPUS, any_failed, read_corpus_file, rows_to_csv, rows_to_json, verify_corpus

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _flag(value):
    return "true" if value else "false"


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _table(rows):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [c.ljust(w) for c, w in zip(r, widths)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


# -- analyze ----------------------------------------------------------------------

def _selected(names):
    if not names:
        return list(pol.PROPERTY_ORDER)
    wanted = [n.strip() for n in names.split(",") if n.strip()]
    unknown = [n for n in wanted if n not in pol.PROPERTY_ORDER]
    if unknown:
        raise UsageError(f"unknown properties: {', '.join(unknown)}; "
                         f"choose from {', '.join(pol.PROPERTY_ORDER)}")
    return [n for n in pol.PROPERTY_ORDER if n in wanted]


def cmd_analyze(args):
    R = eval_ring_expr(args.ring, max_order=args.max_order)
    report = pol.classify_ring(R, max_order=args.max_order)
    names = _selected(args.properties)
    if args.json:
        data = report.to_json(include_members=args.witnesses)
        data["properties"] = [p for p in data["properties"] if p["name"] in names]
        if not args.witnesses:
            for p in data["properties"]:
                p["witness"] = None
        return _dump(data)
    header = ("property", "verdict", "witness") if args.witnesses else ("property", "verdict")
    rows = [header]
    for n in names:
        row = (n, _flag(report[n]))
        if args.witnesses:
            row += (report.witness(n) or "",)
        rows.append(row)
    out = [f"ring: {R.expr}", f"order: {R.order}", ""]
    text = "\n".join(out) + "\n" + _table(rows) + "\n"
    sets = []
    for s in st.structural_sets(R):
        line = f"{s.name}: {len(s)}"
        if args.witnesses:
            line += " {" + ", ".join(R.literal(m) for m in s.members) + "}"
        sets.append(line)
    text += "\n".join(sets) + "\n"
    text += f"gate six_in_j: {_flag(report['six_in_j'])}\n"
    text += f"gate j_equals_j_sharp: {_flag(report['j_equals_j_sharp'])}\n"
    text += f"elapsed_ms: {report.elapsed_ms}\n"
    return text


# -- element ----------------------------------------------------------------------

def _cert_json(name, cert, R, a):
    if cert is None:
        out = {"class": name, "holds": False}
        if name == "uniquely_clean":
            out["count"] = pol.clean_idempotent_count(R, a)
        return out
    return {"holds": True, **cert.to_json()}


def _cert_text(entry):
    if not entry["holds"]:
        extra = f" (clean idempotents: {entry['count']})" if "count" in entry else ""
        return f"{entry['class']}: none{extra}"
    polar = entry["class"] in ("weakly_j_quasipolar", "j_quasipolar", "quasipolar")
    parts = [f"{'p' if polar else 'e'}={entry['idempotent']}"]
    if entry["sign"] is not None:
        parts.append(f"sign={entry['sign']}")
    key = "j" if entry["class"] in ("weakly_j_quasipolar", "j_quasipolar", "strongly_j_clean") else "u"
    parts.append(f"{key}={entry['witness']}")
    if entry["both_signs"]:
        parts.append("both signs")
    return f"{entry['class']}: " + " ".join(parts)


def _fast_path(R, a):
    if not isinstance(R, MatrixRing) or R.n != 2 or not st.is_commutative_local(R.base):
        return None
    found = th.applicable_fast_paths(R, a)
    brute = pol.weakly_jqp_element(R, a) is not None
    paths = [{"path": name, "verdict": v.verdict, "case": v.case_tag} for name, v in found.items()]
    return {"brute_force": brute, "paths": paths,
            "agreement": all(p["verdict"] == brute for p in paths)}


def cmd_element(args):
    t0 = time.perf_counter()
    R = eval_ring_expr(args.ring, max_order=args.max_order)
    cap = args.max_order if args.max_order is not None else pol.DEFAULT_CLASSIFY_MAX_ORDER
    if R.order > cap:
        raise CapExceededError(f"analyze elements of {R.expr}", R.order, cap)
    a = parse_element(args.element, R).index
    comm = st.commutant(R, a)
    data = {
        "ring": R.expr,
        "element": R.literal(a),
        "membership": {"radical": st.in_radical(R, a),
                       "j_sharp": bool(st.j_sharp_mask(R)[a]),
                       "unit": bool(st.unit_mask(R)[a]),
                       "qnil": st.is_qnil(R, a)},
        "comm_size": int(len(comm)),
        "comm2_size": int(len(st.double_commutant(R, a))),
        "spectral_idempotents": pol.spectral_idempotent_uniqueness(R, a),
        "certificates": [_cert_json(n, pol.ELEMENT_DECIDERS[n](R, a), R, a)
                         for n in pol.CLASS_NAMES],
    }
    if args.fast_path:
        data["fast_path"] = _fast_path(R, a)
    data["elapsed_ms"] = int((time.perf_counter() - t0) * 1000)
    if args.json:
        return _dump(data)
    m = data["membership"]
    lines = [f"ring: {data['ring']}", f"element: {data['element']}",
             f"in J: {_flag(m['radical'])}", f"in J#: {_flag(m['j_sharp'])}",
             f"unit: {_flag(m['unit'])}", f"quasinilpotent: {_flag(m['qnil'])}",
             f"|comm|: {data['comm_size']}", f"|comm2|: {data['comm2_size']}",
             f"spectral idempotents: {data['spectral_idempotents']}", ""]
    lines += [_cert_text(c) for c in data["certificates"]]
    if args.fast_path:
        fp = data["fast_path"]
        lines.append("")
        if fp is None:
            lines.append("fast path: not applicable (needs T(2,R) or M(2,R), R commutative local)")
        else:
            lines.append(f"brute force: {_flag(fp['brute_force'])}")
            if not fp["paths"]:
                lines.append("fast path: no criterion applies")
            for p in fp["paths"]:
                lines.append(f"fast path {p['path']}: {_flag(p['verdict'])} ({p['case']})")
            lines.append(f"agreement: {_flag(fp['agreement'])}")
    lines.append(f"elapsed_ms: {data['elapsed_ms']}")
    return "\n".join(lines) + "\n"


# -- corpus -----------------------------------------------------------------------

def cmd_corpus(args):
    if args.builtin == bool(args.file):
        raise UsageError("give exactly one of a corpus file or --builtin")
    if args.builtin:
        corpus = list(BUILTIN_CORPUS)
    else:
        try:
            corpus = read_corpus_file(args.file)
        except (OSError, UnicodeDecodeError) as exc:
            raise UsageError(f"cannot read corpus file {args.file}: {exc}") from exc
    rows = verify_corpus(corpus, max_order=args.max_order, workers=args.workers)
    text = rows_to_json(rows) if args.json else rows_to_csv(rows)
    return text, (EXIT_FAIL if any_failed(rows) else EXIT_OK), rows


# -- entry point ------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="emit JSON instead of text/CSV")
    p.add_argument("--max-order", type=int, default=argparse.SUPPRESS,
                   help="override the order cap for construction and classification")
    p.add_argument("--out", default=argparse.SUPPRESS, help="write the report to this path")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                   help="print nothing on success")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="ringlab", parents=[common],
                                     description="Finite ring polarity and cleanness analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="classify a ring")
    a.add_argument("ring", help='ring expression, e.g. "T(2,Z4)"')
    a.add_argument("--properties", help="comma-separated subset of properties")
    a.add_argument("--witnesses", action="store_true",
                   help="include witness elements and structural set members")

    e = sub.add_parser("element", parents=[common], help="certificates for one element")
    e.add_argument("ring")
    e.add_argument("element", help='element literal, e.g. 4, "(1,0)", "[[1,1],[0,2]]"')
    e.add_argument("--fast-path", action="store_true",
                   help="also run the 2x2 matrix criteria and compare")

    c = sub.add_parser("corpus", parents=[common], help="run the verification suite")
    c.add_argument("file", nargs="?", help="corpus file, one ring expression per line")
    c.add_argument("--builtin", action="store_true", help="use the built-in corpus")
    c.add_argument("--workers", type=int, default=1)
    return parser


def _finish(args):
    for name, default in (("json", False), ("max_order", None), ("out", None), ("quiet", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _finish(parser.parse_args(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    code = EXIT_OK
    try:
        if args.command == "analyze":
            text = cmd_analyze(args)
        elif args.command == "element":
            text = cmd_element(args)
        else:
            text, code, _ = cmd_corpus(args)
    except (DSLSyntaxError, DSLSemanticError, ElementParseError, UsageError) as exc:
        sys.stderr.write(f"ringlab: error: {exc}\n")
        return EXIT_INPUT
    except CapExceededError as exc:
        where = f" (at {exc.span[0]}..{exc.span[1]})" if exc.span else ""
        sys.stderr.write(f"ringlab: cap exceeded: {exc}{where}\n")
        return EXIT_CAP
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            sys.stderr.write(f"ringlab: error: cannot write {args.out}: {exc}\n")
            return EXIT_INPUT
    elif not args.quiet:
        sys.stdout.write(text)
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
