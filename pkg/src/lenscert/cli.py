"""Command-line driver.

Exit codes: 0 when every requested certificate is Proven, 2 when any is
Undecided, 1 on errors (including any Failed certificate).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, certify as certify_mod
from .errors import LensCertError


def _parse_range(spec: str) -> list[int]:
    if ".." in spec:
        lo, _, hi = spec.partition("..")
        lo_i, hi_i = int(lo), int(hi)
        if hi_i < lo_i:
            raise ValueError("empty range %r" % spec)
        return list(range(lo_i, hi_i + 1))
    return [int(spec)]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lenscert",
        description="Certified enclosures and inequality certificates for the "
        "renormalized lens energy versus cone-competitor energies.",
    )
    p.add_argument("--version", action="version", version="lenscert " + __version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="emit inequality certificates over a range of dimensions")
    c.add_argument("--n", required=True, help="dimension or range, e.g. 8 or 8..16")
    c.add_argument("--pairs", default="default", choices=["default", "all"])
    c.add_argument("--width", type=float, default=certify_mod.DEFAULT_TARGET_WIDTH)
    c.add_argument("--prec-start", type=int, default=certify_mod.DEFAULT_PREC_START)
    c.add_argument("--prec-max", type=int, default=certify_mod.DEFAULT_PREC_MAX)
    c.add_argument("--jobs", type=int, default=None)
    c.add_argument("--long-run", action="store_true",
                   help="allow dimensions above the default desk-scale cap of 200 (up to 2700)")
    c.add_argument("--out", default=None, help="write the JSON certificates here")

    t = sub.add_parser("table", help="reproduce the reference energy table")
    t.add_argument("--n", required=True)
    t.add_argument("--digits", type=int, default=8)
    t.add_argument("--format", default="csv", choices=["csv", "json", "markdown"])
    t.add_argument("--out", default=None)

    g = sub.add_parser("plot", help="gap data (lens energy minus competitor energy) per dimension")
    g.add_argument("--n", required=True)
    g.add_argument("--out", default=None)

    e = sub.add_parser("exact", help="exact symbolic components with a numeric cross-check")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--mode", required=True, choices=["lens", "simons"])
    return p


DESK_SCALE_CAP = 200
LONG_RUN_CAP = 2700


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "certify":
            ns = _parse_range(args.n)
            cap = LONG_RUN_CAP if args.long_run else DESK_SCALE_CAP
            if max(ns) > cap:
                raise LensCertError(
                    "dimension %d above cap %d (use --long-run for up to %d)"
                    % (max(ns), cap, LONG_RUN_CAP)
                )
            certs = certify_mod.certify(
                ns,
                pairs=args.pairs,
                target_width=args.width,
                prec_start=args.prec_start,
                prec_max=args.prec_max,
                jobs=args.jobs,
                out=args.out,
            )
            for c in certs:
                print("n=%d verdict=%s precision=%d" % (c.n, c.verdict, c.precision_bits))
            if any(c.verdict == "Failed" for c in certs):
                return 1
            if any(c.verdict == "Undecided" for c in certs):
                return 2
            return 0
        if args.command == "table":
            rows = certify_mod.table_rows(_parse_range(args.n), digits=args.digits)
            _write_or_print(certify_mod.render_table(rows, args.format), args.out)
            return 0
        if args.command == "plot":
            rows = certify_mod.plot_rows(_parse_range(args.n))
            _write_or_print(certify_mod.render_plot_csv(rows), args.out)
            return 0
        if args.command == "exact":
            report = certify_mod.exact_report(args.n, args.mode)
            print(json.dumps(report, indent=1))
            return 0
    except LensCertError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
