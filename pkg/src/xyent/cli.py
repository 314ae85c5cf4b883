"""Command-line interface.

    xyent classify --h 1.6 --gamma 0.6
    xyent entropy  --h 0 --gamma 1 --method oracle --L 2
    xyent scan     --gamma 0.5 --h-range 0 3 301 --format csv
    xyent contour  --h-range 1.5 2.5 41 --gamma-range 0 0.5 21 --sidecar kappa.json
    xyent curve    --kappa 0.6 --branch Case1b --samples 50

Exit status: 0 on success, 2 on domain errors, 3 on numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .entropy import (
    EntropyValue,
    Method,
    asymptotic_near_h2_above,
    asymptotic_near_h2_below,
    asymptotic_near_XX,
    entropy_closed_form,
    entropy_from_kappa,
    entropy_series,
    parse_branch,
)
from .errors import DomainError, NumericalFailure
from .finite_oracle import block_entropy_value
from .iso_curves import DEFAULT_H_MAX, IsoCurve, kappa_of_point, sample_curve
from .phase_diagram import (
    CRITICAL_REGIONS,
    ModelPoint,
    Region,
    classify,
    elliptic_parameter,
    staggered_to_uniform,
)

CSV_COLUMNS = ("h", "gamma", "region", "k", "kappa", "entropy", "divergent")
METHODS = {
    "closed": Method.CLOSED_FORM,
    "series": Method.SERIES,
    "kappa": Method.KAPPA,
    "oracle": Method.ORACLE,
    "asymptotic": Method.ASYMPTOTIC,
}
DEFAULT_L = 100


def _num(x):
    """Round to 12 significant digits; None and non-finite values become None."""
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def evaluate_entropy(
    p: ModelPoint, method: Method = Method.CLOSED_FORM, L: int = DEFAULT_L
) -> EntropyValue:
    """Entropy at `p` by the requested route; critical points give markers."""
    region = classify(p)
    if region in CRITICAL_REGIONS:
        return EntropyValue.marker(region, method)
    if method is Method.CLOSED_FORM:
        return entropy_closed_form(p)
    if method is Method.SERIES:
        return entropy_series(p)
    if method is Method.KAPPA:
        if region is Region.ISOTROPIC_FREE:
            return entropy_from_kappa(0.0, Region.CASE2)
        return entropy_from_kappa(kappa_of_point(p), region)
    if method is Method.ORACLE:
        return block_entropy_value(p, L)
    if method is Method.ASYMPTOTIC:
        expansion = {
            Region.CASE1B: asymptotic_near_XX,
            Region.CASE1A: asymptotic_near_h2_below,
            Region.CASE2: asymptotic_near_h2_above,
        }.get(region)
        if expansion is None:
            raise DomainError(f"no near-critical expansion applies in {region}")
        return expansion(p)
    raise DomainError(f"unknown method {method}")


def _image(p: ModelPoint) -> ModelPoint:
    return staggered_to_uniform(p)[0] if p.staggered else p


def _kappa_or_none(p: ModelPoint, region: Region):
    if region in CRITICAL_REGIONS:
        return None
    return kappa_of_point(p)


def point_row(
    p: ModelPoint, method: Method = Method.CLOSED_FORM, L: int = DEFAULT_L, bits: bool = False
) -> dict:
    """One output row in the fixed CSV/JSON schema."""
    region = classify(p)
    k = None if region in CRITICAL_REGIONS else elliptic_parameter(p).k
    ev = evaluate_entropy(p, method, L)
    if bits:
        ev = ev.in_bits()
    return {
        "h": _num(p.h),
        "gamma": _num(p.gamma),
        "region": region.value,
        "k": _num(k),
        "kappa": _num(_kappa_or_none(p, region)),
        "entropy": _num(ev.value),
        "divergent": ev.divergent,
    }


def classify_record(p: ModelPoint) -> dict:
    region = classify(p)
    rec = {"h": _num(p.h), "gamma": _num(p.gamma), "staggered": p.staggered}
    if p.staggered:
        img, J = staggered_to_uniform(p)
        rec["image"] = {"h": _num(img.h), "gamma": _num(img.gamma)}
        rec["J"] = _num(J)
    rec["region"] = region.value
    if region is Region.ESSENTIAL_CRITICAL_POINT:
        rec.update(k=None, k_prime=None, tau0=None, kappa=None)
    elif region in CRITICAL_REGIONS:
        rec.update(k=1.0, k_prime=0.0, tau0=0.0, kappa=None)
    else:
        ed = elliptic_parameter(p)
        rec.update(
            k=_num(ed.k),
            k_prime=_num(ed.k_prime),
            tau0=_num(ed.tau0),
            kappa=_num(kappa_of_point(p)),
        )
    return rec


def entropy_record(
    p: ModelPoint, method: Method, L: int = DEFAULT_L, bits: bool = False
) -> dict:
    region = classify(p)
    ev = evaluate_entropy(p, method, L)
    if bits:
        ev = ev.in_bits()
    rec = {"h": _num(p.h), "gamma": _num(p.gamma), "staggered": p.staggered}
    if p.staggered:
        img = _image(p)
        rec["image"] = {"h": _num(img.h), "gamma": _num(img.gamma)}
    rec.update(
        region=region.value,
        method=ev.method.value,
        entropy=_num(ev.value),
        divergent=ev.divergent,
        undefined=ev.undefined,
        err_estimate=_num(ev.err_estimate),
        units="bits" if bits else "nats",
    )
    if method is Method.ORACLE:
        rec["L"] = L
    return rec


def axis_values(start: float, stop: float, count: int) -> list[float]:
    """``count`` evenly spaced values, endpoints included and exact."""
    if count < 2:
        raise DomainError("an axis needs count >= 2")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise DomainError("axis range must be finite")
    return [start + (stop - start) * i / (count - 1) for i in range(count)]


@dataclass(frozen=True)
class ScanRequest:
    """Grid specification; an axis is a fixed value or ``(start, stop, count)``."""

    h: float | tuple[float, float, int]
    gamma: float | tuple[float, float, int]
    method: Method = Method.CLOSED_FORM
    staggered: bool = False
    fmt: str = "csv"
    L: int = DEFAULT_L
    bits: bool = False

    @staticmethod
    def _axis(spec) -> list[float]:
        if isinstance(spec, tuple):
            start, stop, count = spec
            return axis_values(float(start), float(stop), int(count))
        if not math.isfinite(spec):
            raise DomainError("axis value must be finite")
        return [float(spec)]

    def points(self) -> list[ModelPoint]:
        """Grid points in h-major order."""
        return [
            ModelPoint(h, g, self.staggered)
            for h in self._axis(self.h)
            for g in self._axis(self.gamma)
        ]


def scan_rows(req: ScanRequest) -> list[dict]:
    return [point_row(p, req.method, req.L, req.bits) for p in req.points()]


def write_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row) + "\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in CSV_COLUMNS])


def contour_grid(
    h_axis: tuple[float, float, int],
    gamma_axis: tuple[float, float, int],
    method: Method = Method.CLOSED_FORM,
    bits: bool = False,
    staggered: bool = False,
) -> tuple[list[float], list[float], np.ndarray, np.ndarray]:
    """Entropy on a grid: ``(hs, gammas, S[gamma, h], divergent[gamma, h])``.

    Marker cells hold NaN in ``S``.
    """
    hs = axis_values(*h_axis)
    gs = axis_values(*gamma_axis)
    S = np.full((len(gs), len(hs)), np.nan)
    div = np.zeros((len(gs), len(hs)), dtype=bool)
    for i, g in enumerate(gs):
        for j, h in enumerate(hs):
            ev = evaluate_entropy(ModelPoint(h, g, staggered), method)
            if bits:
                ev = ev.in_bits()
            if ev.is_finite:
                S[i, j] = ev.value
            div[i, j] = ev.divergent
    return hs, gs, S, div


def contour_sidecar(
    hs: list[float], gs: list[float], staggered: bool = False, levels: int = 6
) -> dict:
    """kappa ranges of the iso-curves crossing the window, per branch."""
    by_branch: dict[Region, list[float]] = {}
    for h in hs:
        for g in gs:
            p = ModelPoint(h, g, staggered)
            region = classify(p)
            if region in CRITICAL_REGIONS or region is Region.ISOTROPIC_FREE:
                continue
            by_branch.setdefault(region, []).append(kappa_of_point(p))
    branches = {}
    for region in (Region.CASE2, Region.CASE1A, Region.CASE1B, Region.FACTORIZATION_BOUNDARY):
        ks = by_branch.get(region)
        if not ks:
            continue
        lo, hi = min(ks), max(ks)
        if region is Region.FACTORIZATION_BOUNDARY:
            grid = [1.0]
        elif lo == hi:
            grid = [lo]
        else:
            grid = list(np.geomspace(lo, hi, levels))
        branches[region.value] = {
            "kappa_min": _num(lo),
            "kappa_max": _num(hi),
            "levels": [
                {"kappa": _num(k), "entropy": _num(entropy_from_kappa(k, region).value)}
                for k in grid
            ],
        }
    return {"h": [_num(h) for h in hs], "gamma": [_num(g) for g in gs], "branches": branches}


def curve_rows(
    kappa: float, branch, samples: int, h_max: float = DEFAULT_H_MAX, bits: bool = False
) -> list[dict]:
    c = IsoCurve(kappa, parse_branch(branch), h_max)
    S = c.entropy()
    if bits:
        S = S.in_bits()
    ed = c.modulus()
    return [
        {
            "h": _num(p.h),
            "gamma": _num(p.gamma),
            "region": c.branch.value,
            "k": _num(ed.k),
            "kappa": _num(c.kappa),
            "entropy": _num(S.value),
            "divergent": False,
        }
        for p in sample_curve(c, samples)
    ]


def _axis_arg(s: list[str]) -> tuple[float, float, int]:
    return float(s[0]), float(s[1]), int(s[2])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xyent",
        description="Limiting block entanglement entropy of the XY spin chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def point_args(sp, required=True):
        sp.add_argument("--h", type=float, required=required, help="magnetic field")
        sp.add_argument("--gamma", type=float, required=required, help="anisotropy")
        sp.add_argument("--staggered", action="store_true",
                        help="read --h/--gamma as staggered-field h', gamma'")

    def method_args(sp):
        sp.add_argument("--method", choices=sorted(METHODS), default="closed")
        sp.add_argument("--L", type=int, default=DEFAULT_L, help="block size for --method oracle")
        sp.add_argument("--bits", action="store_true", help="report entropy in bits")

    sp = sub.add_parser("classify", help="region, modulus and kappa of a point")
    point_args(sp)

    sp = sub.add_parser("entropy", help="entropy at a point")
    point_args(sp)
    method_args(sp)

    sp = sub.add_parser("scan", help="entropy along a line or over a grid")
    point_args(sp, required=False)
    sp.add_argument("--h-range", nargs=3, metavar=("START", "STOP", "COUNT"))
    sp.add_argument("--gamma-range", nargs=3, metavar=("START", "STOP", "COUNT"))
    method_args(sp)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("contour", help="entropy grid for contour plots")
    sp.add_argument("--h-range", nargs=3, metavar=("START", "STOP", "COUNT"), required=True)
    sp.add_argument("--gamma-range", nargs=3, metavar=("START", "STOP", "COUNT"), required=True)
    sp.add_argument("--staggered", action="store_true")
    sp.add_argument("--method", choices=("closed", "series", "kappa"), default="closed")
    sp.add_argument("--bits", action="store_true")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--matrix", action="store_true",
                    help="CSV as a gamma-by-h matrix instead of one row per point")
    sp.add_argument("--sidecar", metavar="PATH", help="write iso-curve kappa data as JSON")
    sp.add_argument("--levels", type=int, default=6, help="kappa levels per branch in the sidecar")

    sp = sub.add_parser("curve", help="sample an iso-entropy curve")
    sp.add_argument("--kappa", type=float, required=True)
    sp.add_argument("--branch", required=True,
                    help="Case2, Case1a, Case1b or Boundary")
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--h-max", type=float, default=DEFAULT_H_MAX)
    sp.add_argument("--bits", action="store_true")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _scan_axis(fixed, rng, name):
    if rng is not None:
        if fixed is not None:
            raise DomainError(f"give either --{name} or --{name}-range, not both")
        return _axis_arg(rng)
    if fixed is None:
        raise DomainError(f"scan needs --{name} or --{name}-range")
    return fixed


def _write_matrix(hs, gs, S, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["gamma\\h"] + [_cell(_num(h)) for h in hs])
    for g, row in zip(gs, S):
        writer.writerow([_cell(_num(g))] + [_cell(_num(v)) for v in row])


def run(args, out) -> None:
    if args.command == "classify":
        out.write(json.dumps(classify_record(ModelPoint(args.h, args.gamma, args.staggered))) + "\n")
    elif args.command == "entropy":
        p = ModelPoint(args.h, args.gamma, args.staggered)
        rec = entropy_record(p, METHODS[args.method], args.L, args.bits)
        out.write(json.dumps(rec) + "\n")
    elif args.command == "scan":
        req = ScanRequest(
            h=_scan_axis(args.h, args.h_range, "h"),
            gamma=_scan_axis(args.gamma, args.gamma_range, "gamma"),
            method=METHODS[args.method],
            staggered=args.staggered,
            fmt=args.format,
            L=args.L,
            bits=args.bits,
        )
        write_rows(scan_rows(req), req.fmt, out)
    elif args.command == "contour":
        h_axis, g_axis = _axis_arg(args.h_range), _axis_arg(args.gamma_range)
        method = METHODS[args.method]
        if args.matrix and args.format == "csv":
            hs, gs, S, _ = contour_grid(h_axis, g_axis, method, args.bits, args.staggered)
            _write_matrix(hs, gs, S, out)
        else:
            req = ScanRequest(h_axis, g_axis, method, args.staggered, args.format, bits=args.bits)
            write_rows(scan_rows(req), args.format, out)
            hs, gs = axis_values(*h_axis), axis_values(*g_axis)
        if args.sidecar:
            side = contour_sidecar(hs, gs, args.staggered, args.levels)
            with open(args.sidecar, "w", encoding="utf-8", newline="\n") as f:
                json.dump(side, f, indent=2)
                f.write("\n")
    elif args.command == "curve":
        rows = curve_rows(args.kappa, args.branch, args.samples, args.h_max, args.bits)
        write_rows(rows, args.format, out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        run(args, buf)
    except DomainError as exc:
        print(f"xyent: error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"xyent: numerical failure: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
