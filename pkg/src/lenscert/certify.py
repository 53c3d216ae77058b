"""Certification driver: precision escalation, inequality certificates,
table and plot-data reproduction, and the exact-value reports.

Strictness verdicts are decided on the *serialized* enclosures (serialize,
re-parse, compare), so an independent replay of a certificate file by
parsing its ball strings reproduces every verdict bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__, geom, oracle
from .ball import (
    Ball,
    TriBool,
    ball_from_str,
    ball_sub,
    ball_to_str,
    certainly_less,
    intersects,
)
from .bigfloat import bf_cmp, bf_from_float, bf_to_fraction
from .errors import (
    InvalidGeometry,
    NoValidPair,
    PrecisionExhausted,
    UnsupportedDimension,
)

__all__ = [
    "CertEntry",
    "Certificate",
    "certify_dimension",
    "certify",
    "replay_certificate",
    "TableRow",
    "table_rows",
    "render_table",
    "PlotRow",
    "plot_rows",
    "render_plot_csv",
    "exact_report",
    "DEFAULT_TARGET_WIDTH",
    "DEFAULT_PREC_START",
    "DEFAULT_PREC_MAX",
    "QUADRATURE_MAX_N",
]

DEFAULT_TARGET_WIDTH = 1e-12
DEFAULT_PREC_START = 128
DEFAULT_PREC_MAX = 1 << 16
QUADRATURE_MAX_N = 24
AGREEMENT_WIDTH = 1e-6


@dataclass
class CertEntry:
    k: int
    l: int
    m_value: str
    path_agreement: bool | None
    strict: str


@dataclass
class Certificate:
    n: int
    precision_bits: int
    lambda_plane: str
    entries: list[CertEntry]
    verdict: str
    tool_version: str = __version__
    timestamp: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _resolve_pairs(n: int, pairs) -> list[tuple[int, int]]:
    if pairs == "default":
        return geom.default_pairs(n)
    if pairs == "all":
        return geom.all_pairs(n)
    return [tuple(p) for p in pairs]


def certify_dimension(
    n: int,
    pairs="default",
    target_width: float = DEFAULT_TARGET_WIDTH,
    prec_start: int = DEFAULT_PREC_START,
    prec_max: int = DEFAULT_PREC_MAX,
    quadrature_max_n: int = QUADRATURE_MAX_N,
    lens_eval=None,
    specfun_eval=None,
    quadrature_eval=None,
    polynomial_eval=None,
) -> Certificate:
    """Certify the strict inequality at one dimension, escalating precision.

    The evaluator arguments exist for fault-injection tests; the defaults are
    the library paths.
    """
    lens_eval = lens_eval or geom.lens_quantities
    specfun_eval = specfun_eval or geom.competitor_energy_specfun
    quadrature_eval = quadrature_eval or geom.competitor_energy_quadrature
    polynomial_eval = polynomial_eval or oracle.polynomial_m_value

    pair_list = _resolve_pairs(n, pairs)
    tw = bf_from_float(target_width)
    prec = prec_start
    exhausted = False
    while True:
        lens = lens_eval(n, prec)
        energies = []
        invalid = 0
        for k, l in pair_list:
            try:
                energies.append(specfun_eval(k, l, prec))
            except InvalidGeometry:
                if pairs == "all":
                    invalid += 1
                    continue
                raise
        if not energies:
            raise NoValidPair("no geometrically valid pair at dimension %d" % n)

        lam_str = ball_to_str(lens.lambda_plane)
        lam_parsed = ball_from_str(lam_str, prec)
        entries = []
        undecided = False
        for en in energies:
            m_str = ball_to_str(en.m_value)
            strict = certainly_less(ball_from_str(m_str, prec), lam_parsed)
            if strict is TriBool.UNKNOWN:
                undecided = True
            entries.append(
                CertEntry(en.k, en.l, m_str, None, strict.value)
            )

        widths_ok = bf_cmp(lens.lambda_plane.width(), tw) <= 0 and all(
            bf_cmp(en.m_value.width(), tw) <= 0 for en in energies
        )
        if widths_ok and not undecided:
            break
        if prec * 2 > prec_max:
            exhausted = True
            break
        prec *= 2

    # independent-path agreement below the quadrature ceiling
    agreement_ok = True
    if n <= quadrature_max_n:
        for entry, en in zip(entries, energies):
            ok = True
            quad = quadrature_eval(entry.k, entry.l, 64, target_width=AGREEMENT_WIDTH)
            ok = ok and intersects(en.m_value, quad.m_value)
            if entry.k % 2 == 1 and entry.l % 2 == 1:
                poly = polynomial_eval(entry.k, entry.l, prec)
                ok = ok and intersects(en.m_value, poly.m_value)
            entry.path_agreement = ok
            if not ok:
                agreement_ok = False

    if not agreement_ok or any(e.strict == TriBool.CERTAINLY_FALSE.value for e in entries):
        verdict = "Failed"
    elif exhausted or any(e.strict != TriBool.CERTAINLY_TRUE.value for e in entries):
        verdict = "Undecided"
    else:
        verdict = "Proven"

    return Certificate(
        n=n,
        precision_bits=prec,
        lambda_plane=lam_str,
        entries=entries,
        verdict=verdict,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def _certify_one(args):
    n, kwargs = args
    return certify_dimension(n, **kwargs)


def certify(
    n_range,
    pairs="default",
    target_width: float = DEFAULT_TARGET_WIDTH,
    prec_start: int = DEFAULT_PREC_START,
    prec_max: int = DEFAULT_PREC_MAX,
    jobs: int | None = None,
    out: str | None = None,
) -> list[Certificate]:
    """Certify a range of dimensions; optionally write the JSON certificates."""
    ns = sorted(n_range)
    kwargs = dict(
        pairs=pairs,
        target_width=target_width,
        prec_start=prec_start,
        prec_max=prec_max,
    )
    if jobs and jobs > 1 and len(ns) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            certs = list(pool.map(_certify_one, [(n, kwargs) for n in ns], chunksize=4))
    else:
        certs = [certify_dimension(n, **kwargs) for n in ns]
    certs.sort(key=lambda c: c.n)
    if out:
        with open(out, "w") as fh:
            json.dump([c.to_dict() for c in certs], fh, indent=1)
            fh.write("\n")
    return certs


def replay_certificate(cert: dict, prec: int | None = None) -> str:
    """Recompute a certificate's verdict purely from its serialized balls."""
    prec = prec or cert["precision_bits"]
    lam = ball_from_str(cert["lambda_plane"], prec)
    any_unknown = False
    any_false = False
    agreement_ok = all(
        e["path_agreement"] is not False for e in cert["entries"]
    )
    for e in cert["entries"]:
        strict = certainly_less(ball_from_str(e["m_value"], prec), lam)
        if strict is TriBool.UNKNOWN:
            any_unknown = True
        elif strict is TriBool.CERTAINLY_FALSE:
            any_false = True
    if not agreement_ok or any_false:
        return "Failed"
    if any_unknown:
        return "Undecided"
    return "Proven"


# ---------------------------------------------------------------------------
# table reproduction
# ---------------------------------------------------------------------------


@dataclass
class TableRow:
    n: int
    k: int
    l: int
    lambda_plane_8dp: str | None
    m_8dp: str


def _round_fixed(fr: Fraction, digits: int) -> str:
    scale = 10**digits
    num = fr * scale
    q = num.numerator // num.denominator
    rem = num - q
    if rem >= Fraction(1, 2):
        q += 1
    sign = "-" if q < 0 else ""
    q = abs(q)
    return "%s%d.%0*d" % (sign, q // scale, digits, q % scale)


def certified_decimal(b: Ball, digits: int) -> str | None:
    """Fixed-point string with `digits` decimals, or None when the enclosure
    does not pin the rounding (endpoints round differently)."""
    lo = _round_fixed(bf_to_fraction(b.inf()), digits)
    hi = _round_fixed(bf_to_fraction(b.sup()), digits)
    return lo if lo == hi else None


def table_rows(
    n_range,
    digits: int = 8,
    prec_start: int = DEFAULT_PREC_START,
    prec_max: int = DEFAULT_PREC_MAX,
) -> list[TableRow]:
    rows = []
    width_cap = bf_from_float(0.5 * 10.0 ** (-digits))
    for n in sorted(n_range):
        pair_list = geom.table_pairs(n)
        prec = prec_start
        while True:
            lens = geom.lens_quantities(n, prec)
            energies = [geom.competitor_energy_specfun(k, l, prec) for k, l in pair_list]
            lam_str = certified_decimal(lens.lambda_plane, digits)
            m_strs = [certified_decimal(e.m_value, digits) for e in energies]
            widths_ok = bf_cmp(lens.lambda_plane.width(), width_cap) < 0 and all(
                bf_cmp(e.m_value.width(), width_cap) < 0 for e in energies
            )
            if lam_str is not None and all(s is not None for s in m_strs) and widths_ok:
                break
            if prec * 2 > prec_max:
                raise PrecisionExhausted(
                    "cannot certify %d decimals at dimension %d" % (digits, n)
                )
            prec *= 2
        for i, (en, ms) in enumerate(zip(energies, m_strs)):
            rows.append(TableRow(n, en.k, en.l, lam_str if i == 0 else None, ms))
    return rows


def render_table(rows: list[TableRow], fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps(
            [
                {
                    "n": r.n,
                    "k": r.k,
                    "l": r.l,
                    "lambda_plane_8dp": r.lambda_plane_8dp,
                    "m_8dp": r.m_8dp,
                }
                for r in rows
            ],
            indent=1,
        )
    lam = lambda r: r.lambda_plane_8dp if r.lambda_plane_8dp is not None else "---"
    if fmt == "csv":
        lines = ["n,k,l,lambda_plane,m"]
        lines += ["%d,%d,%d,%s,%s" % (r.n, r.k, r.l, lam(r), r.m_8dp) for r in rows]
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = ["| n | k | l | lambda_plane | M(k,l) |", "|---|---|---|---|---|"]
        lines += [
            "| %d | %d | %d | %s | %s |" % (r.n, r.k, r.l, lam(r), r.m_8dp)
            for r in rows
        ]
        return "\n".join(lines) + "\n"
    raise ValueError("unknown table format %r" % fmt)


# ---------------------------------------------------------------------------
# gap plot data
# ---------------------------------------------------------------------------


@dataclass
class PlotRow:
    n: int
    k: int
    l: int
    gap: str


def plot_rows(
    n_range,
    prec_start: int = DEFAULT_PREC_START,
    prec_max: int = DEFAULT_PREC_MAX,
    target_width: float = DEFAULT_TARGET_WIDTH,
) -> list[PlotRow]:
    rows = []
    tw = bf_from_float(target_width)
    for n in sorted(n_range):
        k, l = geom.plot_pair(n)
        prec = prec_start
        while True:
            lens = geom.lens_quantities(n, prec)
            en = geom.competitor_energy_specfun(k, l, prec)
            gap = ball_sub(lens.lambda_plane, en.m_value)
            if bf_cmp(gap.width(), tw) <= 0:
                break
            if prec * 2 > prec_max:
                raise PrecisionExhausted("gap width target unreachable at n=%d" % n)
            prec *= 2
        rows.append(PlotRow(n, k, l, ball_to_str(gap)))
    return rows


def render_plot_csv(rows: list[PlotRow]) -> str:
    lines = ["n,k,l,gap"]
    lines += ['%d,%d,%d,"%s"' % (r.n, r.k, r.l, r.gap) for r in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# exact-value reports
# ---------------------------------------------------------------------------


def exact_report(n: int, mode: str, prec: int = 128) -> dict:
    """Symbolic components plus a certified numeric cross-check."""
    if mode == "lens":
        if n < 3 or n > 40:
            raise UnsupportedDimension("exact lens mode supports 3 <= n <= 40")
        cap, vol = oracle.lens_exact_wallis(n)
        exact_ball = oracle.lambda_plane_exact_ball(n, prec)
        general = geom.lens_quantities(n, prec).lambda_plane
        return {
            "mode": "lens",
            "n": n,
            "cap_over_omega": _lens_exact_dict(cap),
            "volume_over_omega": _lens_exact_dict(vol),
            "lambda_plane_exact_path": ball_to_str(exact_ball),
            "lambda_plane_general_path": ball_to_str(general),
            "paths_intersect": intersects(exact_ball, general),
        }
    if mode == "simons":
        if n < 4 or n % 4 != 0:
            raise UnsupportedDimension(
                "exact balanced mode needs n = 2k+2 with k odd (n divisible by 4)"
            )
        k = (n - 2) // 2
        ex = oracle.exact_simons_m(k, prec)
        general = geom.competitor_energy_specfun(k, k, prec).m_value
        return {
            "mode": "simons",
            "n": n,
            "k": k,
            "numerator": _q23_dict(ex.num),
            "denominator": _q23_dict(ex.den),
            "numerator_scale": str(ex.num_scale),
            "denominator_scale": str(ex.den_scale),
            "m_exact_path": ball_to_str(ex.assembled),
            "m_general_path": ball_to_str(general),
            "paths_intersect": intersects(ex.assembled, general),
        }
    raise ValueError("unknown exact mode %r" % mode)


def _lens_exact_dict(x: oracle.LensExact) -> dict:
    return {"rational": str(x.a), "sqrt3": str(x.b), "pi": str(x.c)}


def _q23_dict(x: oracle.QSqrt23) -> dict:
    return {"1": str(x.a), "sqrt2": str(x.b), "sqrt3": str(x.c), "sqrt6": str(x.d)}
