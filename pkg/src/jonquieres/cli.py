"""Command-line front end (``jonq``).

Exit codes: 0 success, 1 domain error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .centralizer import (
    additive_telescope_split,
    cent_membership,
    delta,
    diagonalize_over_Kx,
    elliptic_normal_form_recognize,
    involution_curve,
    is_elliptic,
    telescope_split,
)
from .cremona import CremonaMap, classify_growth, degree_csv, degree_sequence, jonq_to_cremona
from .errors import CremonaError, MapSyntaxError, UsageError
from .fields import QQ, field_from_string, format_scalar, parse_scalar
from .formal import LocalModel, solve_efgh
from .grouplab import (
    classify_pair,
    degree_profile,
    example_centb,
    example_deserti,
    example_torsion_additive,
    example_torsion_multiplicative,
)
from .jonq import JonqMap, centralizer_persistence_report, fiber_events
from .mobius import Mobius
from .parser import parse_map, parse_ratfunc
from .poly import format_factored


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(text: str) -> str:
    """Inline text, or the contents of a file when prefixed with '@'."""
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                return fh.read().strip()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc}") from exc
    return text


def _jonq(text, K) -> JonqMap:
    m = parse_map(_read(text), K)
    if not isinstance(m, JonqMap):
        raise UsageError("expected a Jonquieres map (eta(x), (A*y + B)/(C*y + D))")
    return m


def _mobius(text, K) -> Mobius:
    m = parse_map(_read(text), K)
    if not isinstance(m, Mobius):
        raise UsageError("expected a Moebius transformation of x")
    return m


def _emit(args, text, data=None):
    if args.json and data is not None:
        print(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


# ---------------------------------------------------------------- commands


def cmd_classify(args, K):
    m = parse_map(_read(args.map), K)
    if isinstance(m, Mobius):
        raise UsageError("classify needs a map of the plane")
    cm = m if isinstance(m, CremonaMap) else jonq_to_cremona(m)
    seq = degree_sequence(cm, args.n_max)
    if args.csv:
        sys.stdout.write(degree_csv(seq))
        return
    g = classify_growth(seq, window=args.window)
    _emit(args, g.summary(), {"growth": g.kind.value, "note": g.note, "degrees": list(seq)})


def cmd_delta(args, K):
    d = delta(_jonq(args.map, K))
    _emit(args, format_factored(d), {"delta": d.format(), "constant": d.is_constant()})


def cmd_elliptic(args, K):
    ok, note, exact = is_elliptic(_jonq(args.map, K), n_max=args.n_max)
    text = f"{'elliptic' if ok else 'not elliptic'}\n  method: {note}"
    if not exact:
        text += "\n  (heuristic)"
    _emit(args, text, {"elliptic": ok, "method": note, "exact": exact})


def cmd_telescope(args, K):
    eta = _mobius(args.eta, K)
    R = parse_ratfunc(_read(args.R), K)
    if args.additive:
        c, S = additive_telescope_split(eta, R)
        _emit(args, f"C = {format_scalar(c)}\nS = {S.format()}", {"C": format_scalar(c), "S": S.format()})
        return
    dec = telescope_split(eta, R)
    d = dec.as_dict()
    _emit(args, f"r = {d['r']}\nS = {d['S']}\nverified: {d['verified']}", d)


def cmd_diag(args, K):
    dg = diagonalize_over_Kx(_jonq(args.map, K))
    _emit(args, dg.describe(), {"kind": dg.kind, "description": dg.describe(), "verified": dg.verified})


def cmd_involution(args, K):
    ic = involution_curve(_jonq(args.map, K))
    _emit(
        args,
        ic.describe(),
        {"a": ic.a.format(), "squarefree": ic.squarefree.format(), "verified": ic.verified},
    )


def cmd_formal(args, K):
    alpha = parse_scalar(args.alpha, K)
    polys = []
    for t in (args.A, args.B, args.C, args.D):
        r = parse_ratfunc(_read(t), K)
        if not r.is_polynomial():
            raise UsageError(f"{t!r} is not a polynomial")
        polys.append(r.num * (1 / r.den.lc()))
    fc = solve_efgh(LocalModel(alpha, *polys, N=args.order), pinning=args.pinning)
    _emit(args, fc.certificate_text(), fc.as_dict())


def cmd_persist(args, K):
    f = _jonq(args.map, K)
    events = [e.as_dict() for e in fiber_events(f)]
    rep = centralizer_persistence_report(f)
    if args.json:
        data = rep.as_dict()
        data["events"] = events
        _emit(args, "", data)
        return
    print(rep.to_text())


def cmd_cent_test(args, K):
    nf = elliptic_normal_form_recognize(_jonq(args.normal, K))
    ok, clause = cent_membership(nf, _jonq(args.g, K))
    _emit(
        args,
        f"{'member' if ok else 'not a member'}\n  normal form: {nf.describe()}\n  {clause}",
        {"member": ok, "normal_form": nf.describe(), "clause": clause},
    )


def cmd_pair(args, K):
    pc = classify_pair(_jonq(args.f, K), _jonq(args.g, K), bound=args.bound)
    _emit(args, pc.describe(), pc.as_dict())


def cmd_profile(args, K):
    prof = degree_profile(_jonq(args.f, K), _jonq(args.g, K), window=args.window)
    if args.json:
        _emit(args, "", {"fit": prof.fit, "rows": prof.rows})
        return
    sys.stdout.write(prof.to_csv())
    if not args.csv:
        print(f"# fit: {prof.fit}")


def cmd_examples(args, K):
    name = args.name
    if name == "deserti":
        maps = [example_deserti(parse_scalar(args.alpha, K), parse_scalar(args.beta, K), K)]
    elif name == "centb":
        maps = list(example_centb(args.k, parse_scalar(args.alpha, QQ)))
    elif name in ("torsion-mult", "torsion-add"):
        Rs = [parse_ratfunc(r) for r in (args.R or ["x + 1"])] * max(1, args.depth)
        make = example_torsion_multiplicative if name == "torsion-mult" else example_torsion_additive
        maps = make(args.q, args.depth, Rs)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown example {name}")
    _emit(args, "\n".join(m.format() for m in maps), {"maps": [m.format() for m in maps]})


COMMANDS = {
    "classify": cmd_classify,
    "delta": cmd_delta,
    "elliptic": cmd_elliptic,
    "telescope": cmd_telescope,
    "diag": cmd_diag,
    "involution": cmd_involution,
    "formal": cmd_formal,
    "persist": cmd_persist,
    "cent-test": cmd_cent_test,
    "pair": cmd_pair,
    "profile": cmd_profile,
    "examples": cmd_examples,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", default="Q", help="Q, Qzeta:n or Fp:p")
    common.add_argument("--n-max", type=int, default=16)
    common.add_argument("--order", type=int, default=8, help="truncation order N")
    common.add_argument("--window", type=int, default=4)
    common.add_argument("--bound", type=int, default=12)
    common.add_argument("--csv", action="store_true")
    common.add_argument("--json", action="store_true")
    common.add_argument("--seed", type=int, default=None, help="accepted for reproducible scripts; unused")

    p = _Parser(prog="jonq", description="Jonquieres maps, Cremona degrees and centralizers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_, *pos):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for a in pos:
            sp.add_argument(a)
        return sp

    add("classify", "growth type from the degree sequence", "map")
    add("delta", "Trace^2/det of a fiberwise map", "map")
    add("elliptic", "ellipticity test with method note", "map")
    sp = add("telescope", "split R = r S/S(eta)", "eta", "R")
    sp.add_argument("--additive", action="store_true", help="additive version R = S(eta) - S + C/d")
    add("diag", "diagonalize the fiber matrix over K(x)", "map")
    add("involution", "hyperelliptic curve of a fiberwise involution", "map")
    sp = add("formal", "formal diagonalization at an invariant fiber", "alpha", "A", "B", "C", "D")
    sp.add_argument("--pinning", choices=("zero", "unit"), default="zero")
    add("persist", "fiber events and base centralizer report", "map")
    add("cent-test", "centralizer membership against a normal form", "normal", "g")
    add("pair", "classify a commuting pair", "f", "g")
    sp = add("profile", "degree profile CSV of a commuting pair", "f", "g")
    sp.set_defaults(window=3)
    sp = sub.add_parser("examples", parents=[common], help="example factories")
    sp.add_argument("name", choices=("deserti", "centb", "torsion-mult", "torsion-add"))
    sp.add_argument("--alpha", default="2")
    sp.add_argument("--beta", default="3")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--R", action="append", help="rational function R_j (repeatable)")
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        try:
            K = field_from_string(args.field)
        except (ValueError, KeyError) as exc:
            if isinstance(exc, CremonaError):
                raise
            raise UsageError(f"bad field spec {args.field!r}") from exc
        COMMANDS[args.command](args, K)
    except (MapSyntaxError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CremonaError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
