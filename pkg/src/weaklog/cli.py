"""Command line entry point.

Exit codes: 0 the property holds (entailment true, check passed), 1 refuted
(a witness is printed), 2 usage or resource error."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CapExceeded, ParseError, SignatureError, WeaklogError

EXIT_OK, EXIT_REFUTED, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read_lines(path) -> list[str]:
    """Non-empty lines without ``#`` comments."""
    out = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _emit(args, report: dict, text: str) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(text)


def _sig(name: str):
    from .syntax import L_INQ, L_INT

    return {"int": L_INT, "inq": L_INQ}[name]


# ------------------------------------------------------------------ commands

def cmd_parse(args) -> int:
    from .syntax import to_text, parse

    f = parse(args.formula, _sig(args.sig))
    report = {"formula": to_text(f), "size": f.size, "height": f.height, "atoms": sorted(f.atoms()),
              "standard": f.standard}
    _emit(args, report, f"{to_text(f)}\nsize {f.size}, height {f.height}, atoms {sorted(f.atoms())}"
                        f"{', standard' if f.standard else ''}")
    return EXIT_OK


def _logic_sig(logic: str):
    from .syntax import L_INQ, L_INT

    return L_INQ if logic.endswith("t") else L_INT


def cmd_entail(args) -> int:
    from .syntax import parse, to_text
    from .team import inqb_entails, inqi_entails_bounded

    sig = _logic_sig(args.logic)
    gamma = [parse(t, sig) for t in (_read_lines(args.gamma) if args.gamma else [])]
    phi = parse(args.phi, sig)
    report = {"logic": args.logic, "gamma": [to_text(g) for g in gamma], "phi": to_text(phi)}
    if args.logic in ("inqb", "inqbt"):
        v = inqb_entails(gamma, phi, tensor=args.logic == "inqbt")
        report["holds"] = v.holds
        if v.witness is not None:
            w = v.witness
            report["witness"] = {"atoms": [f"p{a}" for a in w.atoms], "team": w.bitstring(),
                                 "worlds": w.world_list()}
            text = f"refuted: counter-{w.describe()}"
        else:
            text = "holds"
    else:
        cm = inqi_entails_bounded(gamma, phi, args.frame_size)
        report["holds"] = cm is None
        report["frame_size"] = args.frame_size
        if cm is not None:
            report["witness"] = {"points": cm.model.poset.size,
                                 "order": [[i, j] for i in range(cm.model.poset.size)
                                           for j in range(cm.model.poset.size)
                                           if i != j and cm.model.poset.leq[i, j]],
                                 "valuation": {f"p{a}": [i for i in range(cm.model.poset.size) if m >> i & 1]
                                               for a, m in cm.model.valuation},
                                 "team": [i for i in range(cm.model.poset.size) if cm.team >> i & 1]}
            text = f"refuted: {cm.describe()}"
        else:
            text = f"holds (no countermodel up to {args.frame_size} points)"
    _emit(args, report, text)
    return EXIT_OK if report["holds"] else EXIT_REFUTED


def _load_members(where: str):
    """A JSON algebra file or a directory of them (sorted by file name)."""
    from .algebra import algebra_from_json

    p = Path(where)
    files = sorted(p.glob("*.json")) if p.is_dir() else [p]
    if not files:
        raise UsageError(f"no algebra files in {where}")
    out = []
    for f in files:
        raw = json.loads(f.read_text(encoding="utf-8"))
        alg, extra = algebra_from_json(raw)
        out.append((f.name, raw, alg, extra))
    return out


def _expanded(members, sigma_path):
    from .expanded import ExpandedAlgebra, parse_sigma, sigma_core

    sigma = parse_sigma(_read_lines(sigma_path)) if sigma_path else None
    K = []
    for name, raw, alg, extra in members:
        if sigma is not None:
            core = sigma_core(alg, sigma)
        elif "core" in extra:
            core = extra["core"]
        else:
            core = frozenset(range(alg.size))
        K.append(ExpandedAlgebra(alg, core, extra.get("provenance", "")))
    return K


def _element(raw: dict, a: int):
    names = raw.get("elements")
    return {"index": a, "name": names[a]} if names else {"index": a}


def cmd_entail_core(args) -> int:
    from .expanded import core_entails
    from .syntax import parse_equation

    members = _load_members(args.algebras)
    K = _expanded(members, args.sigma)
    theta = [parse_equation(t) for t in (_read_lines(args.theta) if args.theta else [])]
    concl = parse_equation(args.concl)
    res = core_entails(K, theta, concl)
    report = {"holds": res.holds, "theta": [str(e) for e in theta], "conclusion": str(concl),
              "algebras": [m[0] for m in members]}
    if res.holds:
        text = "holds"
    else:
        w = res.witness
        name, raw, _, extra = members[w.algebra]
        report["witness"] = {"algebra": name, "provenance": extra.get("provenance", ""),
                             "assignment": {f"p{a}": _element(raw, v) for a, v in sorted(w.assignment.items())}}
        asg = ", ".join(f"p{a}={v}" for a, v in sorted(w.assignment.items()))
        text = f"refuted in {name}" + (f" ({extra['provenance']})" if extra.get("provenance") else "") + f": {asg}"
    _emit(args, report, text)
    return EXIT_OK if res.holds else EXIT_REFUTED


def cmd_check_proof(args) -> int:
    from .proofsys import check_derivation, parse_derivation, system
    from .syntax import parse

    sysm = system(args.system)
    premises = [parse(t, sysm.sig) for t in (_read_lines(args.premises) if args.premises else [])]
    d = parse_derivation(Path(args.proof).read_text(encoding="utf-8"), sysm.sig)
    concl = parse(args.conclusion, sysm.sig) if args.conclusion else None
    res = check_derivation(sysm, premises, d, concl)
    report = {"ok": res.ok, "system": sysm.name, "lines": len(d.lines), "bad_line": res.bad_line,
              "reason": res.reason}
    text = f"valid {sysm.name} derivation of {len(d.lines)} lines" if res.ok else \
        f"invalid at line {res.bad_line}: {res.reason}"
    _emit(args, report, text)
    return EXIT_OK if res.ok else EXIT_REFUTED


def cmd_nf(args) -> int:
    from .proofsys import dnf
    from .syntax import parse, to_text

    f = parse(args.formula, _sig(args.sig))
    ds = dnf(f, args.sig, cap=args.cap)
    report = {"formula": to_text(f), "disjuncts": [to_text(d) for d in ds]}
    _emit(args, report, "\n".join(to_text(d) for d in ds))
    return EXIT_OK


def cmd_gen_medvedev(args) -> int:
    from .heyting import medvedev_algebra

    h = medvedev_algebra(args.s, tensor=args.tensor)
    core = h.regular_elements()
    d = h.alg.to_json(core=core, provenance=h.provenance)
    d["name"] = h.alg.name
    d["elements"] = [h.describe(i) for i in range(h.size)]
    text = json.dumps(d, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    report = {"size": h.size, "core_size": len(core), "out": args.out}
    if args.out or args.json:
        _emit(args, report, f"Medvedev algebra on {args.s} points: {h.size} elements, {len(core)} regular")
    else:
        print(text)
    return EXIT_OK


def cmd_check_alg(args) -> int:
    from .algz import check_alg3, check_alg4, load_pair
    from .corpus import by_height
    from .syntax import parse, to_text
    from .team import logic_oracle

    pair = load_pair(args.pair)
    members = _load_members(args.algebras)
    sigma_path = args.sigma
    K = _expanded(members, sigma_path)
    sig = _logic_sig(args.logic)
    if args.corpus:
        corpus = [parse(t, sig) for t in _read_lines(args.corpus)]
    else:
        corpus = by_height((0, 1), sig, args.height)
    a4 = check_alg4(K, pair)
    a3 = check_alg3(logic_oracle(args.logic, args.frame_size), pair, corpus)
    report = {"alg4": a4.holds, "alg3": a3.ok, "corpus": len(corpus), "algebras": len(K)}
    lines = [f"alg4 {'holds' if a4.holds else 'fails'} on {len(K)} algebras",
             f"alg3 {'holds' if a3.ok else 'fails'} on {len(corpus)} formulas"]
    if not a4.holds:
        i, a, b = a4.witness
        report["alg4_witness"] = {"algebra": members[i][0], "a": _element(members[i][1], a),
                                  "b": _element(members[i][1], b)}
        lines.append(f"  alg4 witness: {members[i][0]} elements {a}, {b}")
    bad = a3.failures()
    if bad:
        report["alg3_failures"] = [to_text(r.phi) for r in bad[:20]]
        lines.append("  alg3 fails for: " + ", ".join(report["alg3_failures"]))
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if a4.holds and a3.ok else EXIT_REFUTED


def cmd_reduce(args) -> int:
    from .bimatrix import leibniz_reduce, load_bimatrix

    m = load_bimatrix(args.matrix)
    red = leibniz_reduce(m)
    if args.out:
        Path(args.out).write_text(json.dumps(red.matrix.to_json(), indent=1) + "\n", encoding="utf-8")
    report = {"size": m.size, "reduced_size": red.matrix.size, "projection": list(red.projection),
              "blocks": [sorted(b) for b in red.partition.blocks()]}
    _emit(args, report, f"{m.size} -> {red.matrix.size} elements; blocks {report['blocks']}")
    return EXIT_OK


def cmd_export_horn(args) -> int:
    from .bimatrix import export_horn, parse_pairs

    pairs = parse_pairs(Path(args.logic_pairs).read_text(encoding="utf-8"))
    text = export_horn(pairs, weak=args.weak)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        if args.json:
            _emit(args, {"sentences": len(pairs), "out": args.out}, "")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_suite(args) -> int:
    from .suite import CRITERIA, run_all

    selected = None
    if args.only:
        selected = sorted({int(x) for x in args.only.split(",")})
        unknown = [n for n in selected if n not in CRITERIA]
        if unknown:
            raise UsageError(f"unknown criteria {unknown}")
    results = run_all(selected, threads=args.threads, seed=args.seed)
    report = {"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}
    lines = []
    for r in results:
        lines.append(r.line())
        lines.extend(f"    {f}" for f in r.failures[:5])
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if report["passed"] else EXIT_REFUTED


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    def global_flags(p, suppress: bool):
        # accepted before or after the command; only the top level sets defaults
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        p.add_argument("--json", action="store_true", help="machine-readable report", **kw)
        p.add_argument("--threads", type=int, help="worker processes (suite only)",
                       **(kw or {"default": 1}))

    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, True)

    ap = argparse.ArgumentParser(prog="weaklog", description="Finite tools for weak and inquisitive logics.")
    global_flags(ap, False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    p.add_argument("formula")
    p.add_argument("--sig", choices=("int", "inq"), default="inq")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("entail", parents=[common], help="decide Gamma |= phi in a team semantics")
    p.add_argument("--logic", choices=("inqb", "inqbt", "inqi", "inqit"), required=True)
    p.add_argument("--gamma", help="file with one premise per line")
    p.add_argument("--phi", required=True)
    p.add_argument("--frame-size", type=int, default=3, help="Kripke search bound (intuitionistic logics)")
    p.set_defaults(func=cmd_entail)

    p = sub.add_parser("entail-core", parents=[common], help="core consequence over finite expanded algebras")
    p.add_argument("--algebras", required=True, help="JSON algebra file or directory")
    p.add_argument("--theta", help="file with one premise equation per line")
    p.add_argument("--concl", required=True, help="conclusion equation, e.g. 'p0 ~ ~~p0'")
    p.add_argument("--sigma", help="file of equations in p0 defining the core (overrides stored cores)")
    p.set_defaults(func=cmd_entail_core)

    p = sub.add_parser("check-proof", parents=[common], help="check a Hilbert derivation")
    p.add_argument("--system", required=True, choices=("inqi", "inqb", "inqit", "inqbt"))
    p.add_argument("--premises", help="file with one premise per line")
    p.add_argument("--proof", required=True)
    p.add_argument("--conclusion")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("nf", parents=[common], help="disjunctive normal form")
    p.add_argument("formula")
    p.add_argument("--sig", choices=("int", "inq"), default="inq")
    p.add_argument("--cap", type=int, default=12, help="largest allowed |I|*|J| at an implication")
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("gen-medvedev", parents=[common], help="write the Medvedev upset algebra as JSON")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--tensor", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_medvedev)

    p = sub.add_parser("check-alg", parents=[common], help="finite algebraizability checks for a pair")
    p.add_argument("--pair", required=True, help="JSON with 'tau' and 'delta' templates")
    p.add_argument("--algebras", required=True)
    p.add_argument("--logic", choices=("inqb", "inqbt", "inqi", "inqit"), required=True)
    p.add_argument("--corpus", help="file of formulas (default: two atoms, height 3)")
    p.add_argument("--height", type=int, default=3)
    p.add_argument("--sigma")
    p.add_argument("--frame-size", type=int, default=3)
    p.set_defaults(func=cmd_check_alg)

    p = sub.add_parser("reduce", parents=[common], help="Leibniz reduction of a bimatrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("export-horn", parents=[common], help="consequence pairs as Horn sentences")
    p.add_argument("--logic-pairs", required=True, help="lines 'g1, g2 |- phi'")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--weak", dest="weak", action="store_true", default=True)
    mode.add_argument("--standard", dest="weak", action="store_false")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_horn)

    p = sub.add_parser("suite", parents=[common], help="run the acceptance batteries")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (ParseError, SignatureError, CapExceeded, UsageError, OSError, ValueError, KeyError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except WeaklogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
