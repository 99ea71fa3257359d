"""Command line front end.

Subcommands mirror the service endpoints: depth, median, region, center,
bound, jensen.  Output is JSON by default; floats are rendered with
format(x, '.17g') so repeated runs are byte-identical.  Exit codes: 0 on
success, 2 for input errors, 3 when a computation exceeds its size budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction

import numpy as np

from . import reports
from .errors import BudgetError, DepthKitError
from .measure import WeightedSample, load_csv
from .order import ConeOrder


def _parse_matrix(text: str, what: str) -> np.ndarray:
    try:
        rows = [[float(cell) for cell in row.split(",")]
                for row in text.split(";") if row.strip()]
        arr = np.array(rows, dtype=float)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse {what}: {exc}") from None
    if arr.ndim != 2:
        raise argparse.ArgumentTypeError(f"{what} rows have unequal lengths")
    return arr


def _parse_points(text: str) -> np.ndarray:
    return _parse_matrix(text, "points")


def _parse_order(text: str) -> ConeOrder:
    return ConeOrder(_parse_matrix(text, "order matrix"))


def _parse_weights(text: str) -> list[float]:
    try:
        return [float(cell) for cell in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse weights: {exc}") from None


def _parse_point(text: str) -> list[float]:
    try:
        return [float(cell) for cell in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse point: {exc}") from None


def _parse_alpha(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(float(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"cannot parse level: {exc}") from None


def _parse_fn_params(text: str) -> dict:
    params: dict = {}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise argparse.ArgumentTypeError(
                f"function parameter {item!r} is not key=value")
        key, _, value = item.partition("=")
        try:
            if ":" in value:
                params[key.strip()] = [float(v) for v in value.split(":")]
            else:
                params[key.strip()] = float(value)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(
                f"cannot parse function parameter {item!r}: {exc}") from None
    return params


def _add_sample_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", metavar="CSV",
                   help="CSV file of sample points, optional w/weight column")
    p.add_argument("--points", type=_parse_points, metavar="X,Y;X,Y",
                   help="inline sample points, rows separated by ';'")
    p.add_argument("--weights", type=_parse_weights, metavar="W,W,...",
                   help="positive weights matching the inline points")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=reports.FAMILY_NAMES, default="halfspace")
    p.add_argument("--order", type=_parse_order, metavar="G11,G12;G21,G22",
                   help="cone generator matrix, row-major (default identity)")
    p.add_argument("--radius-cap", type=float,
                   help="radius cap for the ball family")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depthkit",
        description="Depth statistics for weighted point samples.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_depth = sub.add_parser("depth", help="depth of a point")
    _add_sample_args(p_depth)
    _add_family_args(p_depth)
    p_depth.add_argument("--at", type=_parse_point, required=True,
                         metavar="X,Y", help="query point")
    p_depth.add_argument("--n-dirs", type=int, default=1024,
                         help="directions for the Monte Carlo fallback")
    p_depth.add_argument("--seed", type=int, default=0)

    p_median = sub.add_parser("median", help="median box of a cone order")
    _add_sample_args(p_median)
    p_median.add_argument("--order", type=_parse_order,
                          metavar="G11,G12;G21,G22",
                          help="cone generator matrix (default identity)")

    p_region = sub.add_parser("region", help="depth region at a level")
    _add_sample_args(p_region)
    _add_family_args(p_region)
    p_region.add_argument("--alpha", type=_parse_alpha, required=True,
                          metavar="A", help="level in (0, 1], e.g. 0.25 or 1/3")

    p_center = sub.add_parser("center", help="deepest region and its level")
    _add_sample_args(p_center)
    _add_family_args(p_center)

    p_bound = sub.add_parser("bound", help="check the 1/(dim+1) depth floor")
    _add_sample_args(p_bound)

    p_jensen = sub.add_parser("jensen", help="region-vs-pushforward inequality")
    _add_sample_args(p_jensen)
    _add_family_args(p_jensen)
    p_jensen.add_argument("--fn", required=True, metavar="NAME",
                          help="builtin check function, e.g. paper-exp-line")
    p_jensen.add_argument("--mode", choices=("median", "center"),
                          default="center")
    p_jensen.add_argument("--fn-params", type=_parse_fn_params, default={},
                          metavar="K=V,K=V",
                          help="function parameters; lists use ':' separators")

    return parser


def _sample_from_args(args: argparse.Namespace) -> WeightedSample:
    if args.input is not None and args.points is not None:
        raise DepthKitError("give either --input or --points, not both")
    if args.input is not None:
        if args.weights is not None:
            raise DepthKitError("--weights applies to --points; put a "
                                "'w' column in the CSV instead")
        return load_csv(args.input)
    if args.points is not None:
        return WeightedSample(args.points, args.weights)
    raise DepthKitError("a sample is required: --input CSV or --points")


def _order_from_args(args: argparse.Namespace, dim: int) -> ConeOrder:
    order = getattr(args, "order", None)
    return order if order is not None else ConeOrder.identity(dim)


def _family_from_args(args: argparse.Namespace, dim: int):
    return reports.family_from_name(
        args.family,
        order=_order_from_args(args, dim) if args.family in ("axis", "interval")
        else None,
        radius_cap=args.radius_cap)


def render_json(value, indent: int = 0) -> str:
    """JSON with deterministic float formatting (format(x, '.17g'))."""
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{key}": {render_json(val, indent + 1)}'
            for key, val in value.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        return "[" + ", ".join(render_json(v, indent) for v in value) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if value is None:
        return "null"
    raise TypeError(f"cannot render {type(value).__name__} as JSON")


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_rows(payload: dict, prefix: str = ""):
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _csv_rows(value, f"{name}.")
        elif key == "vertices":
            for vertex in value:
                yield [f"{prefix}vertex", *vertex]
        elif isinstance(value, (list, tuple)):
            flat: list = []
            stack = list(value)[::-1]
            while stack:
                item = stack.pop()
                if isinstance(item, (list, tuple)):
                    stack.extend(list(item)[::-1])
                else:
                    flat.append(item)
            yield [name, *flat]
        else:
            yield [name, value]


def render_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in _csv_rows(payload):
        writer.writerow([_format_cell(cell) for cell in row])
    return buf.getvalue()


def _run(args: argparse.Namespace) -> dict:
    sample = _sample_from_args(args)
    if args.command == "depth":
        family = _family_from_args(args, sample.dim)
        return reports.depth_report(sample, args.at, family,
                                    n_dirs=args.n_dirs, seed=args.seed)
    if args.command == "median":
        return reports.median_report(sample, _order_from_args(args, sample.dim))
    if args.command == "region":
        family = _family_from_args(args, sample.dim)
        return reports.region_report(sample, args.alpha, family)
    if args.command == "center":
        family = _family_from_args(args, sample.dim)
        return reports.center_report(sample, family)
    if args.command == "bound":
        return reports.bound_report(sample)
    if args.command == "jensen":
        family = _family_from_args(args, sample.dim)
        return reports.jensen_report(sample, args.fn, args.mode, family,
                                     params=args.fn_params, order=args.order)
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = _run(args)
    except BudgetError as exc:
        print(f"depthkit: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except DepthKitError as exc:
        print(f"depthkit: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"depthkit: {exc}", file=sys.stderr)
        return 2
    if args.format == "csv":
        sys.stdout.write(render_csv(payload))
    else:
        sys.stdout.write(render_json(payload) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
