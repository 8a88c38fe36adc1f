"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from math import comb

from .context import GroupContext, is_prime

DEFAULT_DIM_CAP = 300_000
# peak usage of the dense elimination is roughly this many bytes per dim^2
BYTES_PER_ENTRY = 48


def memory_dim_limit() -> int:
    try:
        mem = os.sysconf("SC_PHYS_PAGES") * os.sysconf("SC_PAGE_SIZE")
    except (ValueError, OSError, AttributeError):
        return DEFAULT_DIM_CAP
    return int((0.8 * mem / BYTES_PER_ENTRY) ** 0.5)


class UsageError(Exception):
    pass


def _degrees(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {part}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError("need a non-empty set of non-negative degrees")
    return sorted(set(out))


def _common() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--p", type=int, required=True, help="the prime p")
    g.add_argument("--r", type=int, default=2, help="group order p^r (default 2)")
    g.add_argument("--n", type=int, default=None, help="dimension of V_n (default p+1)")
    g.add_argument("--format", choices=("tsv", "json"), default="tsv")
    g.add_argument("--jobs", type=int, default=1, help="worker processes")
    g.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    g.add_argument("--max-dim", type=int, default=None,
                   help="refuse graded components larger than this "
                        "(default: 300000 or what fits in memory, whichever is smaller)")
    g.add_argument("--allow-large", action="store_true", help="lift the dimension cap")
    return g


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cycinv",
        description="Symmetric powers and invariants of Z/p^r acting on a Jordan block.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    d = sub.add_parser("decompose", parents=[common], help="decompose graded components")
    d.add_argument("--degrees", type=_degrees, required=True, help="e.g. 0..17 or 3,5,8")
    d.add_argument("--flat", action="store_true", help="decompose the flat part only")
    d.add_argument("--oracle", action="store_true", help="cross-check with the rank oracle")

    g = sub.add_parser("generators", parents=[common], help="list the generating set")
    g.add_argument("--json", action="store_true", help="same as --format json")

    nt = sub.add_parser("noether", parents=[common], help="Noether number and witness")
    nt.add_argument("--certify", action="store_true",
                    help="allow the expensive certification for p >= 5")

    h = sub.add_parser("hilbert", parents=[common], help="Hilbert series of the invariants")
    h.add_argument("--terms", type=int, default=20)
    h.add_argument("--closed-form", action="store_true")

    s = sub.add_parser("series", parents=[common], help="d(n), a_i(n), b_i(n) table")
    s.add_argument("--terms", type=int, default=20)

    v = sub.add_parser("verify", parents=[common], help="run the verification suites")
    v.add_argument("--max-degree", type=int, default=8)

    c = sub.add_parser("conjecture", parents=[common], help="search for counterexamples")
    c.add_argument("--max-degree", type=int, default=12)
    return parser


def _context(args) -> GroupContext:
    if not is_prime(args.p):
        raise UsageError(f"--p must be prime, got {args.p}")
    try:
        return GroupContext(args.p, args.r, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _require_ring(ctx: GroupContext, what: str) -> None:
    if ctx.r != 2 or ctx.n != ctx.p + 1:
        raise UsageError(f"{what} is only available for r = 2, n = p + 1")


def _dim(ctx: GroupContext, d: int, flat: bool = False) -> int:
    if not flat:
        return comb(ctx.n - 1 + d, d)
    # x_n exponent below p^2
    return sum(comb(ctx.n - 2 + d - e, d - e) for e in range(min(d, ctx.p ** 2 - 1) + 1))


def _check_cap(args, ctx: GroupContext, degrees, flat: bool = False) -> None:
    if args.allow_large:
        return
    cap = args.max_dim
    if cap is None:
        cap = min(DEFAULT_DIM_CAP, memory_dim_limit())
    for d in degrees:
        dim = _dim(ctx, d, flat)
        if dim > cap:
            raise UsageError(f"degree {d} has dimension {dim} > {cap}; "
                             "raise --max-dim or pass --allow-large")


def _emit(args, rows_tsv, obj) -> None:
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        for line in rows_tsv:
            print(line)


# --- decompose ------------------------------------------------------------


def _decompose_one(task):
    p, r, n, d, flat, oracle = task
    from .module_decomp import decompose_flat, decompose_graded, decompose_graded_oracle
    ctx = GroupContext(p, r, n)
    dec = decompose_flat(ctx, d) if flat else decompose_graded(ctx, d)
    agree = None
    if oracle and not flat:
        agree = decompose_graded_oracle(ctx, [d])[d] == dec
    return d, dec.to_pairs(), agree


def cmd_decompose(args) -> int:
    ctx = _context(args)
    if args.flat:
        _require_ring(ctx, "--flat")
    _check_cap(args, ctx, args.degrees, args.flat)
    tasks = [(ctx.p, ctx.r, ctx.n, d, args.flat, args.oracle) for d in args.degrees]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_decompose_one, tasks))
    elif args.oracle and not args.flat:
        # one pass of the symmetric-power recursion covers every degree
        from .module_decomp import decompose_graded, decompose_graded_oracle
        oracle = decompose_graded_oracle(ctx, args.degrees)
        results = []
        for d in args.degrees:
            dec = decompose_graded(ctx, d)
            results.append((d, dec.to_pairs(), oracle[d] == dec))
    else:
        results = [_decompose_one(t) for t in tasks]
    results.sort(key=lambda t: t[0])
    lines, objs, failed = [], [], []
    for d, pairs, agree in results:
        lines.append(f"{d}\t" + ",".join(f"{m}:{k}" for m, k in pairs))
        obj = {"degree": d, "summands": pairs}
        if agree is not None:
            obj["oracle_agrees"] = agree
            if not agree:
                failed.append(d)
        objs.append(obj)
    _emit(args, lines, objs)
    if failed:
        print(f"oracle disagreement in degrees {failed}", file=sys.stderr)
        return 1
    return 0


# --- generators / noether -------------------------------------------------


def cmd_generators(args) -> int:
    ctx = _context(args)
    _require_ring(ctx, "generators")
    from .invariant_ring import build_generators
    gens = build_generators(ctx.p)
    rows = [(label, f.degree(), f.to_text()) for label, f in gens.labelled()]
    fmt = "json" if args.json else args.format
    if fmt == "json":
        print(json.dumps([{"label": lab, "degree": d, "polynomial": t} for lab, d, t in rows],
                         sort_keys=True))
    else:
        for lab, d, t in rows:
            print(f"{lab}\t{d}\t{t}")
    return 0


def cmd_noether(args) -> int:
    ctx = _context(args)
    _require_ring(ctx, "noether")
    from .invariant_ring import noether_number
    if ctx.p >= 5 and not args.certify:
        raise UsageError("certification for p >= 5 is expensive; pass --certify")
    _check_cap(args, ctx, range(ctx.p * ctx.p + ctx.p))
    rep = noether_number(ctx.p, certify=True)
    wit = rep.witness.to_text() if rep.witness is not None else None
    ledger = [{"degree": d, "invariants": inv, "decomposables": dec, "new": new}
              for d, inv, dec, new in rep.ledger.rows]
    lines = [f"noether\t{rep.number}", f"witness\t{wit if wit else 'none'}"]
    lines += [f"ledger\t{r['degree']}\t{r['invariants']}\t{r['decomposables']}\t{r['new']}"
              for r in ledger]
    _emit(args, lines, {"noether": rep.number, "witness": wit, "ledger": ledger})
    return 0


# --- series ---------------------------------------------------------------


def cmd_hilbert(args) -> int:
    ctx = _context(args)
    _require_ring(ctx, "hilbert")
    from .gen_series import hilbert_closed
    H = hilbert_closed(ctx.p)
    if args.closed_form:
        R = H.reduced()
        _emit(args, ["num\t" + " ".join(map(str, R.num)), "den\t" + " ".join(map(str, R.den))],
              {"numerator": list(R.num), "denominator": list(R.den)})
    else:
        coeffs = H.series(args.terms)
        _emit(args, [str(c) for c in coeffs], {"coefficients": coeffs})
    return 0


def cmd_series(args) -> int:
    ctx = _context(args)
    _require_ring(ctx, "series")
    from .gen_series import ai_closed, bi_closed, d_closed, hilbert_closed
    p, T = ctx.p, args.terms
    cols = {"d": d_closed(p).series(T)}
    for i in range(1, p + 1):
        cols[f"a{i}"] = ai_closed(p, i).series(T)
    for i in range(1, p + 1):
        cols[f"b{i}"] = bi_closed(p, i).series(T)
    cols["H"] = hilbert_closed(p).series(T)
    names = list(cols)
    lines = ["n\t" + "\t".join(names)]
    lines += [f"{k}\t" + "\t".join(str(cols[c][k]) for c in names) for k in range(T)]
    _emit(args, lines, {"columns": names, "rows": [[k] + [cols[c][k] for c in names] for k in range(T)]})
    return 0


# --- verify / conjecture --------------------------------------------------


def cmd_verify(args) -> int:
    ctx = _context(args)
    _check_cap(args, ctx, range(args.max_degree + 1))
    from .verify import run_all
    results = run_all(ctx, args.max_degree, args.seed)
    lines = [r.line() for r in results]
    ok = all(r.ok for r in results)
    lines.append("ALL PASS" if ok else "FAILED")
    _emit(args, lines, {"ok": ok, "suites": [
        {"name": r.name, "ok": r.ok, "checks": r.checks, "failures": r.failures}
        for r in results]})
    return 0 if ok else 1


def cmd_conjecture(args) -> int:
    ctx = _context(args)
    _check_cap(args, ctx, range(args.max_degree + 1))
    from .verify import conjecture_search
    rep = conjecture_search(ctx, args.max_degree)
    d = rep.to_dict()
    lines = [f"pairs_checked\t{d['pairs_checked']}",
             f"monotonicity_failures\t{d['monotonicity_failures']}",
             f"counterexamples\t{len(d['counterexamples'])}"]
    for c in d["counterexamples"]:
        lines.append("counterexample\t" + "\t".join(f"{k}={c[k]}" for k in sorted(c)))
    lines.append(f"status\t{d['status']}")
    _emit(args, lines, d)
    return 0


COMMANDS = {
    "decompose": cmd_decompose,
    "generators": cmd_generators,
    "noether": cmd_noether,
    "hilbert": cmd_hilbert,
    "series": cmd_series,
    "verify": cmd_verify,
    "conjecture": cmd_conjecture,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cycinv {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
