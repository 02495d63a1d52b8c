"""Command-line front end: ``soergel <command> [options]``.

Exit status is 0 when everything requested succeeded and every check
passed, 1 when a verification failed, and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import bimlab
from .cache import KLCache, attach_cache, default_cache_path
from .chars import (
    BSObject,
    PositivityFailure,
    bs_character,
    decompose_bs,
    express_in_bwords,
    hom_rank,
)
from .coxeter import (
    BadWordError,
    CoxeterMatrix,
    as_system,
    build_geometric_rep,
    build_reflection_faithful_rep,
    permutation_rep,
)
from .hecke import format_qpoly, hecke_algebra
from .laurent import LaurentPoly
from .verify import SUITES, run_suite

log = logging.getLogger("soergel")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _parse_m(text: str):
    t = text.strip().lower()
    if t in ("inf", "infinity", "0", "∞"):
        return float("inf")
    try:
        m = int(t)
    except ValueError:
        raise UsageError(f"--m expects an integer >= 2 or 'inf', got {text!r}") from None
    if m < 2:
        raise UsageError(f"--m expects an integer >= 2 or 'inf', got {text!r}")
    return m


def _matrix(args) -> CoxeterMatrix:
    if getattr(args, "matrix", None) and getattr(args, "m", None):
        raise UsageError("give either --matrix or --m, not both")
    if getattr(args, "matrix", None):
        try:
            return CoxeterMatrix.load(args.matrix)
        except OSError as exc:
            raise UsageError(f"cannot read {args.matrix}: {exc.strerror}") from None
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad Coxeter matrix in {args.matrix}: {exc}") from None
    if getattr(args, "m", None):
        return CoxeterMatrix.dihedral(_parse_m(args.m))
    raise UsageError("a Coxeter system is required: pass --matrix FILE or --m M")


def _system(args):
    W = as_system(_matrix(args))
    H = hecke_algebra(W)
    attach_cache(H, None if args.no_cache else KLCache(args.cache or default_cache_path()))
    return W, H


def _rep(W, name: str):
    if name == "geometric":
        return build_geometric_rep(W)
    if name == "minimal":
        return build_reflection_faithful_rep(W)
    if name == "permutation":
        return permutation_rep(W)
    raise UsageError(f"unknown representation {name!r}")


def _elt_arg(H, text: str):
    """A Hecke element: a word (meaning T~_x) or JSON [[word, laurent], ...] in the T~ basis."""
    text = text.strip()
    if text.startswith("["):
        try:
            pairs = json.loads(text)
            return H.elt({H.system.element(w): LaurentPoly.parse(c) for w, c in pairs})
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad Hecke element {text!r}: {exc}") from None
    return H.ttilde(H.system.element(text))


# ---------------------------------------------------------------------------
# commands; each returns (exit code, json payload, text)


def cmd_kl(args):
    W, H = _system(args)
    x, y = W.element(args.x), W.element(args.y)
    P = H.kl_polynomial(y, x)
    return EXIT_OK, {"x": x.word_str, "y": y.word_str, "P": list(P), "text": format_qpoly(P)}, \
        f"P_({y.word_str or 'e'},{x.word_str or 'e'}) = {format_qpoly(P)}"


def cmd_cprime(args):
    W, H = _system(args)
    x = W.element(args.x)
    pairs = H.kl_basis(x).to_pairs(args.basis)
    sym = "T" if args.basis == "t" else "T~"
    text = " + ".join(f"({c}) {sym}_{{{w or 'e'}}}" for w, c in pairs)
    return EXIT_OK, {"x": x.word_str, "basis": args.basis, "cprime": pairs}, f"C'_{{{x.word_str or 'e'}}} = {text}"


def cmd_mu(args):
    W, H = _system(args)
    x, y = W.element(args.x), W.element(args.y)
    mu = H.mu(y, x)
    return EXIT_OK, {"x": x.word_str, "y": y.word_str, "mu": mu}, str(mu)


def cmd_bs_char(args):
    W, H = _system(args)
    h = bs_character(W, BSObject(tuple(args.word.split()), args.shift))
    return EXIT_OK, {"word": args.word.split(), "shift": args.shift, "character": h.to_pairs()}, str(h)


def cmd_bs_decompose(args):
    W, H = _system(args)
    b = BSObject(tuple(args.word.split()), args.shift)
    try:
        cls = decompose_bs(W, b)
    except PositivityFailure as exc:
        return EXIT_FAIL, {"word": list(b.word), "shift": b.shift, "pass": False, "failure": str(exc)}, str(exc)
    parts = []
    for x, p in cls.summands():
        name = f"B_{{{x.word_str or 'e'}}}"
        parts.append(name if p == LaurentPoly.const(1) else f"({p.pretty()}) {name}")
    return EXIT_OK, {"word": list(b.word), "shift": b.shift, "summands": cls.to_json()}, " ⊕ ".join(parts) or "0"


def cmd_hom_rank(args):
    W, H = _system(args)
    hM = bs_character(W, BSObject(tuple(args.left.split()), args.left_shift))
    hN = bs_character(W, BSObject(tuple(args.right.split()), args.right_shift))
    r = hom_rank(hM, hN)
    return EXIT_OK, {"left": args.left.split(), "left_shift": args.left_shift, "right": args.right.split(),
                     "right_shift": args.right_shift, "hom_rank": str(r)}, str(r)


def cmd_express(args):
    W, H = _system(args)
    h = _elt_arg(H, args.elt)
    terms = express_in_bwords(h)
    rows = [{"n": n, "word": list(w), "coeff": c} for n, w, c in terms]
    text = "\n".join(f"{c:+d} v^{n} b({' '.join(w)})" for n, w, c in terms) or "0"
    return EXIT_OK, {"elt": h.to_pairs(), "bwords": rows}, text


def cmd_verify(args):
    system = None
    m = None
    if args.suite != "s4":
        if args.matrix:
            system = as_system(_matrix(args))
        elif args.m:
            m = _parse_m(args.m)
    try:
        res = run_suite(args.suite, m=m, system=system, workers=args.workers,
                        count=args.count, seed=args.seed, maxlen=args.maxlen)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = res.to_json()
    text = f"{args.suite}: {'pass' if res.passed else 'FAIL'} ({res.checked} checks)"
    if not res.passed:
        text += "\n" + "\n".join(f"  {w}" for w in payload["failures"])
    return (EXIT_OK if res.passed else EXIT_FAIL), payload, text


def cmd_lab(args):
    W = as_system(_matrix(args))
    rep = _rep(W, args.rep)
    D = args.maxdeg
    if D < 0 or D % 2:
        raise UsageError("--maxdeg must be a nonnegative even integer")
    try:
        if args.check == "er":
            rpt = bimlab.check_er(args.s or W.generators[0], rep, D)
        elif args.check == "midi":
            rpt = bimlab.check_mi_di(W.element(_need(args, "x")), args.s or W.generators[0], rep, D)
        elif args.check == "ip":
            rpt = bimlab.check_ip(W.element(_need(args, "x")), W.element(_need(args, "y")), rep, D)
        else:
            rpt = bimlab.check_homtrunc(W.element(_need(args, "x")), W.element(_need(args, "y")), rep, D)
    except bimlab.InconclusiveTruncation as exc:
        payload = exc.report.to_json() if exc.report else {"check": args.check, "pass": False}
        payload["error"] = str(exc)
        return EXIT_FAIL, payload, str(exc)
    except bimlab.NoSuchBeta as exc:
        return EXIT_FAIL, {"check": args.check, "pass": False, "error": str(exc)}, str(exc)
    except bimlab.PreconditionError as exc:
        raise UsageError(str(exc)) from None
    payload = rpt.to_json()
    text = f"lab {args.check}: {'pass' if rpt.passed else 'FAIL'}"
    if rpt.failure:
        text += f" at {rpt.failure}"
    for note in rpt.notes:
        text += f"\nnote: {note}"
    return (EXIT_OK if rpt.passed else EXIT_FAIL), payload, text


def _need(args, name):
    val = getattr(args, name)
    if val is None:
        raise UsageError(f"--{name} is required for lab {args.check}")
    return val


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--matrix", help="Coxeter matrix JSON file")
    common.add_argument("--m", help="dihedral shortcut I_2(m); 'inf' for the infinite dihedral group")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cache", help="KL cache file (default: $SOERGEL_CACHE or a per-user data file)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the KL cache")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="soergel", description="Hecke algebra and Soergel bimodule calculus.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("kl", parents=[common], help="Kazhdan-Lusztig polynomial P_{y,x}")
    q.add_argument("--x", required=True)
    q.add_argument("--y", required=True)
    q.set_defaults(func=cmd_kl)

    q = sub.add_parser("cprime", parents=[common], help="C'_x in the T or T~ basis")
    q.add_argument("--x", required=True)
    q.add_argument("--basis", choices=("t", "ttilde"), default="t")
    q.set_defaults(func=cmd_cprime)

    q = sub.add_parser("mu", parents=[common], help="mu(y, x)")
    q.add_argument("--x", required=True)
    q.add_argument("--y", required=True)
    q.set_defaults(func=cmd_mu)

    for name, func in (("bs-char", cmd_bs_char), ("bs-decompose", cmd_bs_decompose)):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--word", required=True)
        q.add_argument("--shift", type=int, default=0)
        q.set_defaults(func=func)

    q = sub.add_parser("hom-rank", parents=[common], help="graded rank of Hom between Bott-Samelson objects")
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--left-shift", type=int, default=0)
    q.add_argument("--right-shift", type=int, default=0)
    q.set_defaults(func=cmd_hom_rank)

    q = sub.add_parser("express-bwords", parents=[common], help="write a Hecke element in b-words")
    q.add_argument("--elt", required=True, help="a word (T~_x) or JSON [[word, laurent], ...]")
    q.set_defaults(func=cmd_express)

    q = sub.add_parser("verify", parents=[common], help="run a verification suite")
    q.add_argument("suite", choices=SUITES)
    q.add_argument("--count", type=int)
    q.add_argument("--seed", type=int)
    q.add_argument("--maxlen", type=int)
    q.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("lab", parents=[common], help="degreewise bimodule checks")
    q.add_argument("check", choices=("er", "midi", "ip", "homtrunc"))
    q.add_argument("--x")
    q.add_argument("--y")
    q.add_argument("--s")
    q.add_argument("--maxdeg", type=int, default=12)
    q.add_argument("--rep", choices=("geometric", "minimal", "permutation"), default="geometric")
    q.set_defaults(func=cmd_lab)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code, payload, text = args.func(args)
    except (UsageError, BadWordError, ValueError) as exc:
        code, payload, text = EXIT_USAGE, {"error": str(exc), "pass": False}, f"error: {exc}"
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        stream = sys.stderr if code == EXIT_USAGE else sys.stdout
        stream.write(text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
