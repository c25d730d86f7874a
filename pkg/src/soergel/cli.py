"""Command-line surface: reproducible runs with deterministic JSON output.

Exit codes: 0 all expectations met, 1 a mathematical expectation failed
(positivity violation, unexpected Lefschetz failure), 2 internal or usage
error.  Non-dominant coweights are exploratory and must be acknowledged
with --allow-nondominant so verification runs are never silently weakened.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import hodge, p1sheaf
from .bimodule import BottSamelson
from .coxeter import CoxeterGroup
from .errors import ExactAlgebraError
from .jantzen import jantzen_report
from .nilhecke import NilHecke

SCHEMA = "v1"

EXIT_OK = 0
EXIT_EXPECTATION = 1
EXIT_INTERNAL = 2


def _parse_fractions(text):
    return tuple(Fraction(part) for part in text.split(","))


def _fail_usage(msg):
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(EXIT_INTERNAL)


def _emit(payload, args):
    payload = {"schema": SCHEMA, **payload}
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True, default=str)
    else:
        lines = []
        for row in payload.get("rows", []):
            lines.append("\t".join(str(c) for c in row))
        text = "\n".join(lines) if lines else json.dumps(payload, sort_keys=True,
                                                         default=str)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _coweight(args, group):
    cw = _parse_fractions(args.coweight) if args.coweight else \
        group.realisation.default_coweight()
    if len(cw) != group.rank:
        _fail_usage(f"coweight needs {group.rank} entries")
    if not group.is_regular_coweight(cw):
        _fail_usage("coweight is not regular")
    dominant = group.is_dominant_coweight(cw)
    if not dominant and not args.allow_nondominant:
        _fail_usage("non-dominant coweight requires --allow-nondominant")
    if args.verbose:
        kind = "dominant regular" if dominant else "regular (exploratory)"
        print(f"# coweight {tuple(map(str, cw))} [{kind}]", file=sys.stderr)
    return cw, dominant


def cmd_em_table(args):
    group = CoxeterGroup(args.type)
    cw, dominant = _coweight(args, group)
    scan = NilHecke(group).positivity_scan(cw)
    names = group.realisation.gen_names
    rows = [(x.name, y.name, e.text(names), str(val),
             {1: "+", 0: "0", -1: "-"}[sign])
            for x, y, e, val, sign in scan["rows"]]
    payload = {"type": args.type, "coweight": [str(c) for c in cw],
               "rows": rows, "clean": scan["clean"],
               "zeros": [(x.name, y.name) for x, y in scan["zeros"]],
               "negatives": [(x.name, y.name) for x, y in scan["negatives"]]}
    _emit(payload, args)
    return EXIT_OK if scan["clean"] else EXIT_EXPECTATION


def cmd_local_form(args):
    group = CoxeterGroup(args.type)
    cw, dominant = _coweight(args, group)
    word = group.parse_word(args.word)
    x = group.element_from_word(group.parse_word(args.x))
    bs = BottSamelson(group, word)
    names = group.realisation.gen_names
    st = bs.stalk(x)
    if st is None or st.rank == 0:
        payload = {"type": args.type, "word": args.word, "x": args.x,
                   "rank": 0, "verdict": "empty"}
        _emit(payload, args)
        return EXIT_OK
    lat = hodge.specialize_stalk(st, cw)
    rep = hodge.hodge_riemann_report(lat, x.length)
    bottom = bs.bottom_self_pairing(x)
    nh = NilHecke(group)
    e_val = nh.d_element(group.element_from_word(word)).coefficient(x) \
        if group.is_reduced(word) else None
    payload = {
        "type": args.type, "word": args.word, "x": args.x,
        "coweight": [str(c) for c in cw],
        "rank": st.rank,
        "degrees": list(st.degrees),
        "gram": [[entry.text(names) for entry in row] for row in st.gram],
        "bottom_pairing": bottom.text(names),
        "bottom_equals_equivariant_multiplicity":
            None if e_val is None else bottom == e_val,
        "det_signs": {str(k): v for k, v in rep.det_signs.items()},
        "hl": rep.hl_holds,
        "hr": rep.hr_holds,
        "standard_signs": rep.standard_signs,
        "epsilon": rep.epsilon,
        "signatures": [list(s) for s in rep.signatures],
    }
    _emit(payload, args)
    ok = rep.hl_holds and rep.hr_holds and (not dominant or rep.standard_signs)
    if e_val is not None and payload["bottom_equals_equivariant_multiplicity"] is False:
        ok = False
    return EXIT_OK if ok or not dominant else EXIT_EXPECTATION


def verify_hodge_sweep(group, max_length, coweight, dominant, with_p1=True):
    """Reduced-word sweep of local and edge checks; returns a summary."""
    passes = 0
    failures = []
    for length in range(0, max_length + 1):
        for word in group.reduced_words_of_length(length):
            bs = BottSamelson(group, word)
            for x, st in sorted(bs.stalks().items(),
                                key=lambda kv: (kv[0].length, kv[0].word)):
                if st.rank == 0:
                    continue
                lat = hodge.specialize_stalk(st, coweight)
                try:
                    rep = hodge.hodge_riemann_report(lat, x.length)
                    ok = rep.hl_holds and rep.hr_holds and rep.standard_signs
                except ExactAlgebraError:
                    ok = False
                if ok:
                    passes += 1
                else:
                    failures.append(("stalk", _word_name(group, word), x.name))
            if not with_p1:
                continue
            for s_letter in range(group.rank):
                s = group.simple(s_letter)
                for x in group.elements:
                    if group.length_of(x * s) <= group.length_of(x):
                        continue
                    if (bs.stalk(x) is None and bs.stalk(x * s) is None):
                        continue
                    try:
                        m = p1sheaf.sheaf_from_bimodule(bs, x, s_letter, coweight)
                        ok = p1sheaf.hl_ample_report(m)["holds"] and \
                            p1sheaf.hr_ample_report(m)["holds"]
                    except ExactAlgebraError:
                        ok = False
                    if ok:
                        passes += 1
                    else:
                        failures.append(("edge", _word_name(group, word),
                                         x.name, group.realisation.names[s_letter]))
    return {"passes": passes, "failures": failures}


def _word_name(group, word):
    return "".join(group.realisation.names[i] for i in word) or "id"


def cmd_verify_hodge(args):
    group = CoxeterGroup(args.type)
    cw, dominant = _coweight(args, group)
    summary = verify_hodge_sweep(group, args.max_length, cw, dominant)
    payload = {"type": args.type, "max_length": args.max_length,
               "coweight": [str(c) for c in cw],
               "passes": summary["passes"],
               "failures": summary["failures"],
               "all_pass": not summary["failures"]}
    _emit(payload, args)
    if summary["failures"]:
        return EXIT_EXPECTATION
    return EXIT_OK


def cmd_p1(args):
    group = CoxeterGroup(args.type)
    cw, dominant = _coweight(args, group)
    word = group.parse_word(args.word)
    x = group.element_from_word(group.parse_word(args.x))
    s_letter = group.realisation.index_of(args.s)
    bs = BottSamelson(group, word)
    m = p1sheaf.sheaf_from_bimodule(bs, x, s_letter, cw)
    hl = p1sheaf.hl_ample_report(m)
    hr = p1sheaf.hr_ample_report(m)
    opp = p1sheaf.opposite_signs_report(m)
    payload = {
        "type": args.type, "word": args.word, "x": args.x, "s": args.s,
        "coweight": [str(c) for c in cw],
        "ranks": {"m0": list(m.m0_degrees), "minf": list(m.minf_degrees),
                  "sections": list(m.sec_degrees)},
        "rank_law": p1sheaf.section_rank_law(m),
        "hl_ample": hl["holds"],
        "hr_ample": hr["holds"],
        "opposite_signs": opp["holds"],
        "per_degree": [{"d": entry["degree"],
                        "det_poly_in_c": entry["det"].text("c"),
                        "roots_gt1": entry["roots_gt1"]}
                       for entry in hl["per_degree"]],
    }
    if opp["holds"]:
        scan = p1sheaf.limit_scan(m)
        payload["c0"] = str(scan["c0"])
        payload["limit_signs_match"] = scan["signs_match"]
    _emit(payload, args)
    ok = hl["holds"] and hr["holds"]
    return EXIT_OK if ok or not dominant else EXIT_EXPECTATION


def cmd_jantzen(args):
    n = int(args.type[1:]) + 1 if args.type.startswith("A") else None
    if n is None:
        _fail_usage("jantzen runs on type A only")
    from .jantzen import SlnRootData
    rd = SlnRootData(n)
    w_word = rd.group.parse_word(args.w)
    nu = tuple(int(c) for c in args.nu.split(","))
    gamma = None
    if args.gamma and args.gamma != "rho":
        gamma = _parse_fractions(args.gamma)
    rep = jantzen_report(n, w_word, nu, gamma_values=gamma)
    payload = {"type": args.type, "w": args.w, "nu": list(nu),
               "gamma": "rho" if gamma is None else [str(g) for g in gamma],
               "dim": rep["dim"],
               "valuations": rep["valuations"],
               "layers": rep["layers"]}
    _emit(payload, args)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="soergel",
        description="exact nil Hecke, local-form, Lefschetz and Jantzen runs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--type", default="A3")
        p.add_argument("--coweight", default=None,
                       help="comma-separated rationals; default all ones")
        p.add_argument("--allow-nondominant", action="store_true")
        p.add_argument("--format", choices=("json", "tsv"), default="json")
        p.add_argument("--out", default=None)
        p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("em-table", help="equivariant multiplicity sign table")
    common(p)
    p.set_defaults(func=cmd_em_table)

    p = sub.add_parser("local-form", help="stalk basis, Gram and verdicts")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--x", required=True)
    p.set_defaults(func=cmd_local_form)

    p = sub.add_parser("verify-hodge", help="reduced-word sweep of all checks")
    common(p)
    p.add_argument("--max-length", type=int, default=3)
    p.set_defaults(func=cmd_verify_hodge)

    p = sub.add_parser("p1", help="moment-graph sheaf verdicts for one edge")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--s", required=True)
    p.set_defaults(func=cmd_p1)

    p = sub.add_parser("jantzen", help="Shapovalov layer dimensions")
    common(p)
    p.add_argument("--w", required=True, help="Weyl word for the dot-action weight")
    p.add_argument("--nu", required=True, help="weight drop, simple-root coords")
    p.add_argument("--gamma", default="rho",
                   help="'rho' or comma-separated simple-coroot values")
    p.set_defaults(func=cmd_jantzen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except ExactAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
