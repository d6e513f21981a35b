"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input/validation error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import oracle
from .analysis import Peak, sweep_e, threshold_report, uniform_grid
from .errors import SingleCrossingViolation, ValidationError
from .index import POINTS, band, concentration_report, hhi, to_points
from .ingest import InputError, load_budgets
from .model import EvenTopK, General, WeightedTopK
from .rules import apply, classify_delta

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2
SWEEP_HEADER = ["E", "hhi_points", "band", "delta"]


def parse_grid(spec: str) -> list[float]:
    """``min:max:steps`` (steps equal intervals) or an explicit comma list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise InputError(f"--grid: expected min:max:steps, got {spec!r}")
        try:
            lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise InputError(f"--grid: cannot parse {spec!r}") from None
        return uniform_grid(lo, hi, steps)
    try:
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"--grid: cannot parse {spec!r}") from None


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(v) for v in text.replace("\n", ",").split(",") if v.strip()]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated numbers") from None


def _rule_from_args(args):
    given = [a for a in ("k", "weights", "amounts") if getattr(args, a) is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --k, --weights, --amounts")
    if args.k is not None:
        return EvenTopK(args.k)
    if args.weights is not None:
        return WeightedTopK(tuple(_floats(args.weights, "--weights")))
    path = Path(args.amounts)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror or exc}") from None
    if text.lstrip().startswith("["):
        try:
            values = [float(v) for v in json.loads(text)]
        except (ValueError, TypeError):
            raise InputError(f"{path}: expected a JSON array of numbers") from None
    else:
        values = _floats(text, str(path))
    return General(tuple(values))


def _emit_csv(rows, header, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, Peak):
        return v.value
    return f"{v:.4f}".rstrip("0").rstrip(".") if isinstance(v, float) else str(v)


def cmd_index(args, out) -> int:
    X = load_budgets(args.input)
    rep = concentration_report(X, args.cr)
    if args.format == "json":
        json.dump(rep.as_dict(), out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        header = ["hhi_raw", "hhi_points", "band"] + (["cr_m", "cr"] if rep.cr else [])
        row = [repr(rep.hhi_raw), repr(rep.hhi_points), rep.band.value]
        if rep.cr:
            row += [rep.cr[0], repr(rep.cr[1])]
        _emit_csv([row], header, out)
    else:
        line = f"HHI {rep.hhi_points:.1f}, {rep.band.value}"
        if rep.cr:
            line += f"; CR{rep.cr[0]} {rep.cr[1]:.4f}"
        print(line, file=out)
    return EXIT_OK


def cmd_apply(args, out) -> int:
    X = load_budgets(args.input)
    post = apply(X, _rule_from_args(args), args.endowment)
    before, after = hhi(X), hhi(post.awarded)
    delta = after - before
    shown_delta = to_points(delta) if args.points else delta
    effect = classify_delta(delta, before)
    if args.format == "json":
        json.dump({
            "rule": type(post.rule).__name__,
            "E": post.E,
            "awarded": [{"club": c, "budget": b} for c, b in post.awarded.clubs],
            "hhi_before": before, "hhi_after": after,
            "points_before": to_points(before), "points_after": to_points(after),
            "band_before": band(to_points(before)).value, "band_after": band(to_points(after)).value,
            "delta": shown_delta, "effect": effect.value,
        }, out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        _emit_csv([[c, repr(b)] for c, b in post.awarded.clubs], ["club", "budget"], out)
    else:
        for c, b in post.awarded.clubs:
            print(f"{c:<24} {b:>14.4f}", file=out)
        print(f"HHI {to_points(before):.1f} -> {to_points(after):.1f} "
              f"({band(to_points(after)).value}); delta {shown_delta:+.6g}, {effect.value}", file=out)
    return EXIT_OK


def cmd_thresholds(args, out) -> int:
    X = load_budgets(args.input)
    rep = threshold_report(X, args.endowment)
    if args.format == "json":
        json.dump(rep.as_dict(), out, indent=2)
        out.write("\n")
        return EXIT_OK
    rows = [
        [c.k, c.kind.value, c.e_hat, peak, imp]
        for c, (_, peak), imp in zip(rep.classifications, rep.e_star, rep.improves)
    ]
    if args.format == "csv":
        _emit_csv([[k, kind, "" if eh is None else repr(eh),
                    p.value if isinstance(p, Peak) else repr(p), imp] for k, kind, eh, p, imp in rows],
                  ["k", "classification", "e_hat", "e_star", "improves"], out)
        return EXIT_OK
    print(f"{'k':>3}  {'classification':<15} {'E_hat':>14} {'E_star':>16}  improves@E", file=out)
    for k, kind, eh, p, imp in rows:
        print(f"{k:>3}  {kind:<15} {_fmt(eh):>14} {_fmt(p):>16}  {'yes' if imp else 'no'}", file=out)
    print(f"k* = {rep.k_star} at E = {_fmt(rep.E)}", file=out)
    return EXIT_OK


def sweep_rows(result, points: bool = False) -> list[list[str]]:
    scale = POINTS if points else 1.0
    return [[repr(r.E), repr(r.hhi_points), r.band.value, repr(r.delta * scale)] for r in result.rows]


def cmd_sweep(args, out) -> int:
    X = load_budgets(args.input)
    if args.k is None:
        raise InputError("sweep needs --k")
    if args.grid is None:
        raise InputError("sweep needs --grid min:max:steps")
    result = sweep_e(X, args.k, parse_grid(args.grid))
    rows = sweep_rows(result, args.points)
    if args.out:
        try:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                _emit_csv(rows, SWEEP_HEADER, fh)
        except OSError as exc:
            raise InputError(f"{args.out}: cannot write: {exc.strerror or exc}") from None
        print(f"wrote {len(rows)} rows to {args.out}", file=out)
    else:
        _emit_csv(rows, SWEEP_HEADER, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        spec = oracle.RandomInstanceSpec(n_range=(args.n_min, args.n_max), seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.instances < 1:
        raise InputError("--instances must be >= 1")
    rep = oracle.verify(spec, args.instances, peak_steps=args.peak_steps)
    for name, t in rep.tallies.items():
        print(f"{name:<26} checked {t.checked:>6}  failures {t.failures:>3}  "
              f"max deviation {t.max_deviation:.3g}", file=out)
        if t.first_failure:
            print(f"  first failure: {t.first_failure}", file=out)
    print(rep.summary(), file=out)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prizebalance",
                                description="Competitive balance (HHI) of league budgets under prize-sharing rules")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, rule=False, endowment=False):
        sp.add_argument("--input", "-i", required=True, help="budget file (CSV club,budget or JSON)")
        sp.add_argument("--format", choices=("table", "csv", "json"), default="table", help="output format")
        if rule:
            sp.add_argument("--k", type=int, help="even top-k rule")
            sp.add_argument("--weights", help="weighted top-k rule, e.g. 0.6,0.4")
            sp.add_argument("--amounts", help="file with explicit per-rank amounts")
        if endowment:
            sp.add_argument("--endowment", "-E", type=float, required=True, help="prize endowment E")
        sp.add_argument("--points", action="store_true", help="report HHI changes on the 10000-point scale")

    sp = sub.add_parser("index", help="HHI, DOJ band and optional concentration ratio")
    common(sp)
    sp.add_argument("--cr", type=int, metavar="M", help="also report the top-M concentration ratio")
    sp.set_defaults(func=cmd_index)

    sp = sub.add_parser("apply", help="apply a sharing rule and compare HHI")
    common(sp, rule=True, endowment=True)
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("thresholds", help="per-k classification, E_hat, E_star and k*")
    common(sp, endowment=True)
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("sweep", help="post-award HHI over an endowment grid (CSV)")
    common(sp)
    sp.add_argument("--k", type=int, help="even top-k rule")
    sp.add_argument("--grid", help="min:max:steps or explicit list 0,10,20")
    sp.add_argument("--out", "-o", help="output CSV path (default stdout)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="check closed forms against brute force on random leagues")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--instances", type=int, default=10000)
    sp.add_argument("--n-min", type=int, default=2)
    sp.add_argument("--n-max", type=int, default=30)
    sp.add_argument("--peak-steps", type=int, default=10000)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SingleCrossingViolation as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
