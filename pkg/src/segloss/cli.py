"""Command-line entry point: ``segloss {eval,compare,gradcheck,fit,dt}``.

Exit codes: 0 success, 1 a data or check failure, 2 a usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import EmptySource, SegLossError
from .evaluation import default_specs, evaluate_files, evaluate_manifest
from .formats import build_manifest, read_mask, report_json, write_float_grid
from .geometry import edt_exact, extract_boundary
from .gradients import fit_logits, gradcheck
from .losses import LOSS_NAMES, evaluate, parse_loss_spec
from .metrics import evaluate_metrics

TVERSKY_NOTE = "Tversky convention: alpha weights false positives, beta false negatives."


class UsageError(Exception):
    pass


def split_specs(items) -> list[str]:
    """Split ``--losses`` arguments into individual spec strings.

    Specs may be separated by spaces or commas; a comma-separated token of
    the form ``key=value`` continues the parameter list of the previous spec.
    """
    out = []
    for item in items:
        for token in item.split(","):
            token = token.strip()
            if not token:
                continue
            if "=" in token and ":" not in token and out:
                out[-1] += "," + token
            else:
                out.append(token)
    return out


def parse_specs(items):
    try:
        return [parse_loss_spec(s) for s in split_specs(items)]
    except SegLossError as exc:
        raise UsageError(str(exc)) from None


def _threshold(value):
    t = float(value)
    if not 0.0 < t < 1.0:
        raise argparse.ArgumentTypeError(f"threshold must lie in (0, 1), got {value}")
    return t


def _size(value):
    try:
        h, w = (int(v) for v in value.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must look like 8x8, got {value!r}") from None
    if h < 1 or w < 1:
        raise argparse.ArgumentTypeError(f"size must be positive, got {value!r}")
    return h, w


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def hard_dice(p, y, threshold=0.5):
    return evaluate_metrics(p, y, threshold).dice


def cmd_eval(args) -> int:
    specs = parse_specs(args.losses) if args.losses else default_specs()
    if os.path.isdir(args.pred) and os.path.isdir(args.truth):
        report = evaluate_manifest(build_manifest(args.pred, args.truth), specs, args.threshold)
    elif os.path.isfile(args.pred) and os.path.isfile(args.truth):
        report = evaluate_files([(args.pred, args.truth)], specs, args.threshold)
    else:
        raise UsageError("--pred and --truth must both be existing files or both be directories")
    _emit(report_json(report), args.out)
    for err in report.errors:
        print(f"error: {err.pred} vs {err.truth}: {err.error_type}: {err.error}", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_gradcheck(args) -> int:
    if args.all:
        specs = [parse_loss_spec(n) for n in LOSS_NAMES]
    elif args.loss:
        specs = parse_specs(args.loss)
    else:
        raise UsageError("give --loss SPEC or --all")
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    ok = True
    for spec in specs:
        err = gradcheck(spec, seeds=args.seeds, shape=args.size)
        passed = err < args.tol
        ok &= passed
        print(f"{spec.label:<24} max_rel_err={err:.3e} {'PASS' if passed else 'FAIL'}")
    return 0 if ok else 1


def _load_truth(path):
    if not os.path.isfile(path):
        raise UsageError(f"truth file {path} does not exist")
    return read_mask(path)


def _check_fit_args(args):
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if not args.lr > 0:
        raise UsageError("--lr must be > 0")


def cmd_fit(args) -> int:
    _check_fit_args(args)
    specs = parse_specs([args.loss])
    if len(specs) != 1:
        raise UsageError("--loss takes exactly one loss spec")
    spec = specs[0]
    y = _load_truth(args.truth)
    result = fit_logits(y, spec, steps=args.steps, lr=args.lr, seed=args.seed)
    final = evaluate(spec, result.final_p, y).value
    print(f"loss={spec.label} steps={result.steps_taken}")
    print(f"final_loss={float(final):.17g}")
    dice = hard_dice(result.final_p, y)
    print(f"final_hard_dice={'undefined' if dice is None else format(dice, '.17g')}")
    if args.trace:
        rows = "".join(f"{i},{v:.17g}\n" for i, v in enumerate(result.loss_trace))
        _emit(rows, args.trace)
    return 0


def loss_floor(spec) -> float:
    """Lowest attainable value; only combo goes below zero."""
    return -(1.0 - spec.params["alpha"]) if spec.name == "combo" else 0.0


def cmd_compare(args) -> int:
    _check_fit_args(args)
    if not 0.0 < args.fraction < 1.0:
        raise UsageError("--fraction must lie in (0, 1)")
    y = _load_truth(args.truth)
    specs = parse_specs(args.losses) if args.losses else default_specs()
    print(f"{'loss':<24} {'first_loss':>12} {'final_loss':>12} {'hard_dice':>10} {'steps_to_fraction':>18}")
    for spec in specs:
        result = fit_logits(y, spec, steps=args.steps, lr=args.lr, seed=args.seed)
        floor = loss_floor(spec)
        gap0 = result.loss_trace[0] - floor
        steps = next(
            (i + 1 for i, v in enumerate(result.loss_trace) if v - floor <= args.fraction * gap0), None
        )
        final = float(evaluate(spec, result.final_p, y).value)
        dice = hard_dice(result.final_p, y)
        dice_s = "n/a" if dice is None else f"{dice:.4f}"
        print(
            f"{spec.label:<24} {result.loss_trace[0]:>12.6g} {final:>12.6g} {dice_s:>10} "
            f"{steps if steps else '-':>18}"
        )
    return 0


def cmd_dt(args) -> int:
    if not os.path.isfile(args.input):
        raise UsageError(f"input file {args.input} does not exist")
    mask = read_mask(args.input)
    source = extract_boundary(mask) if args.of == "boundary" else mask
    try:
        dist = edt_exact(source)
    except EmptySource as exc:
        print(f"error: EmptySource: {exc}", file=sys.stderr)
        return 1
    write_float_grid(dist, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segloss",
        description="Segmentation losses, metrics and distance transforms.",
        epilog=f"Loss specs look like 'name' or 'name:key=val,key=val'. {TVERSKY_NOTE}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate losses and metrics over prediction/truth pairs",
                       epilog=TVERSKY_NOTE)
    p.add_argument("--pred", required=True, help="prediction file (.csv/.slf/.pgm) or directory")
    p.add_argument("--truth", required=True, help="truth mask file (.pgm) or directory")
    p.add_argument("--losses", nargs="+", help=f"loss specs (default: all {len(LOSS_NAMES)})")
    p.add_argument("--threshold", type=_threshold, default=0.5, help="metric threshold (default 0.5)")
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="fit each loss to a truth mask and compare convergence",
                       epilog=TVERSKY_NOTE)
    p.add_argument("--truth", required=True)
    p.add_argument("--losses", nargs="+")
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--lr", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--fraction", type=float, default=0.1,
                   help="report steps until the loss's gap to its minimum falls to this fraction")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gradcheck", help="compare analytic and finite-difference gradients")
    p.add_argument("--loss", nargs="+")
    p.add_argument("--all", action="store_true")
    p.add_argument("--size", type=_size, default=(8, 8))
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("fit", help="gradient-descent demo on logits toward a truth mask")
    p.add_argument("--truth", required=True)
    p.add_argument("--loss", required=True)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--lr", type=float, default=1.0, help="per-pixel step size")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--trace", help="write per-step loss as CSV rows 'step,loss'")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("dt", help="exact Euclidean distance transform of a mask")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="output grid (.csv or .slf)")
    p.add_argument("--of", choices=("region", "boundary"), default="region")
    p.set_defaults(func=cmd_dt)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except SegLossError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
