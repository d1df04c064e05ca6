"""Command line entry point: ``qlap spectrum|verify|certificate|weyl``.

Exit codes: 0 success / no violations, 1 violations or no certificate,
2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import exact_linalg as xl
from . import theorems as th
from .graph_core import (
    Graph, Graph6Error, GraphError, complement, construct_family, parse_family, parse_graph6,
)
from .harness import ConfigError, RunError, SearchConfig, emit_report, run_verification
from .spectra import NumericEqualityUndecidable, q_spectrum, weyl_check

FAMILY_HELP = ('family spec: "K:n", "E:n", "Km:a,b,c", "K1t:t,r", "star:n", "path:n", '
               '"cycle:n", "union:SPEC+SPEC"')
THEOREM_SUITES = {"1": "th1", "2": "th2", "3": "th3", "4": "th4",
                  "weyl": "weyl", "das": "das", "k1t": "k1t"}


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    s = f"{round(float(x), 9) + 0.0:.10g}"
    return "0" if s == "-0" else s


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _graphs(args, stdin) -> list[Graph]:
    try:
        if getattr(args, "family", None):
            if args.graph6:
                raise UsageError("give either --graph6 or --family, not both")
            return [construct_family(parse_family(args.family))]
        if args.graph6:
            return [parse_graph6(args.graph6)]
        lines = [ln.strip() for ln in stdin if ln.strip() and not ln.startswith(">>")]
        if not lines:
            raise UsageError("no graph given (use --graph6, --family or stdin)")
        return [parse_graph6(s) for s in lines]
    except (Graph6Error, GraphError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_spectrum(args, out, stdin) -> int:
    for g in _graphs(args, stdin):
        rep = q_spectrum(g)
        print(" ".join(_fmt(v) for v in rep.values), file=out)
        if args.exact:
            q = xl.q_matrix(g)
            p = xl.char_poly(q)
            print(f"charpoly: {p}", file=out)
            print(f"factored: {p.factored()}", file=out)
            mults = []
            for lam in range(2 * g.n - 2, -1, -1):
                k = xl.int_eigen_multiplicity(q, lam)
                if k:
                    mults.append(f"{lam}^{k}")
            print("integer eigenvalues: " + (" ".join(mults) or "none"), file=out)
            if g.n >= 2:
                sic = th.spectral_index_count(g)
                print(f"a={sic.a} m={sic.m} m2={sic.m2}", file=out)
    return 0


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise UsageError(f"bad vertex range {text!r}; expected A..B") from None


def cmd_verify(args, out, stdin) -> int:
    suites = []
    for item in args.theorem:
        for t in item.split(","):
            if t not in THEOREM_SUITES:
                raise UsageError(f"unknown theorem {t!r}; choose from {sorted(THEOREM_SUITES)}")
            suites.append(THEOREM_SUITES[t])
    n_min, n_max = _parse_range(args.n)
    if args.input:
        source = args.input
    elif args.random:
        source = "random"
    else:
        source = "labeled"
    jobs = args.jobs if args.jobs is not None else int(os.environ.get("QLAP_JOBS", "1"))
    fmt = args.format or ("json" if args.out else "text")
    try:
        cfg = SearchConfig(n_min=n_min, n_max=n_max, source=source, dedupe=args.dedupe,
                           suites=tuple(dict.fromkeys(suites)), jobs=jobs, output=args.out,
                           fmt=fmt, random_count=args.random or 0, seed=args.seed)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    graphs = None
    if source == "-":
        from .harness import read_graph6_stream
        try:
            graphs = [g for _, g in read_graph6_stream(stdin) if n_min <= g.n <= n_max]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    rep = run_verification(cfg, graphs)
    text = emit_report(rep, fmt, args.out, timing=args.timing)
    if args.out:
        print(emit_report(rep, "text", timing=args.timing), end="", file=out)
    else:
        print(text, end="", file=out)
    return 1 if rep.violations else 0


def cmd_certificate(args, out, stdin) -> int:
    status = 0
    for g in _graphs(args, stdin):
        if g.n < 2:
            raise UsageError("certificates need n >= 2")
        try:
            vecs = th.certificate_vectors(g)
        except th.NoCertificateError as exc:
            print(f"no certificate: {exc}", file=out)
            status = 1
            continue
        for y in vecs:
            print(_vec(y), file=out)
        ok = not th.verify_certificates(g, vecs)
        print("Q·y = (n−2)·y exact: " + ("OK" if ok else "FAILED"), file=out)
        if not ok:
            status = 1
    return status


def cmd_weyl(args, out, stdin) -> int:
    for g in _graphs(args, stdin):
        a, b = xl.q_matrix(g), xl.q_matrix(complement(g))
        try:
            verdicts = weyl_check(a, b, args.i, args.j)
        except IndexError as exc:
            raise UsageError(str(exc)) from exc
        except NumericEqualityUndecidable as exc:
            print(f"undecidable: {exc}", file=out)
            continue
        for v in verdicts:
            rel = "<=" if v.side == "Wein1" else ">="
            kind = "exact" if v.exact else "numeric"
            print(f"{v.side}: lambda_{v.i}(A) + lambda_{v.j}(B) {rel} lambda_{v.k}(A+B): "
                  f"{v.lhs} {rel} {v.rhs} [{kind}]", file=out)
            state = "equality" if v.equality else ("holds" if v.holds else "VIOLATED")
            print(f"  {state}", file=out)
            if v.certificate:
                print(f"  common eigenvector {_vec(v.certificate)}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qlap", description="Signless Laplacian eigenvalue checks.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("spectrum", help="print the Q-spectrum of a graph",
                       epilog=FAMILY_HELP)
    p.add_argument("--graph6")
    p.add_argument("--family", help=FAMILY_HELP)
    p.add_argument("--exact", action="store_true",
                   help="also print the characteristic polynomial and exact counts")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run theorem suites over a graph corpus")
    p.add_argument("--theorem", action="append", required=True,
                   help="1, 2, 3, 4, weyl, das or k1t; repeat or comma-separate")
    p.add_argument("--n", default="2..6", help="vertex range A..B (default 2..6)")
    p.add_argument("--input", help="graph6 file instead of labeled enumeration ('-' = stdin)")
    p.add_argument("--random", type=int, metavar="COUNT", help="random G(n,1/2) corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dedupe", action="store_true", help="drop isomorphic duplicates")
    p.add_argument("--jobs", type=int, help="worker processes (default $QLAP_JOBS or 1)")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv", "text"))
    p.add_argument("--timing", action="store_true", help="record wall time in the report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certificate", help="print Q y = (n-2) y certificates")
    p.add_argument("--graph6")
    p.set_defaults(func=cmd_certificate)

    p = sub.add_parser("weyl", help="Weyl inequality for A = Q(G), B = Q(complement)")
    p.add_argument("--graph6")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(func=cmd_weyl)
    return ap


def main(argv=None, out=None, stdin=None) -> int:
    out = out or sys.stdout
    stdin = stdin if stdin is not None else sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args, out, stdin)
    except UsageError as exc:
        print(f"qlap: error: {exc}", file=sys.stderr)
        return 2
    except RunError as exc:
        print(f"qlap: run failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
