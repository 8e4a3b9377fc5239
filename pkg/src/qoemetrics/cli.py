"""Command-line front end.

Exit codes: 0 success, 1 domain or validation error, 2 I/O, parse or
usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import emodel
from .analysis import analyze_dataset, parse_quantile
from .dataset_io import load_dataset, render_report, round_sig, write_dataset
from .errors import ParseError, QoEError
from .sos import LinearTransform, fit_dataset, transform_dataset
from .types import RatingScale

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


def _scale_arg(text):
    try:
        return RatingScale.parse(text)
    except QoEError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _quantile_arg(text):
    try:
        parse_quantile(text)
    except QoEError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _thresholds_arg(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("thresholds are gb,pw,te")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"thresholds must be numbers: {text!r}") from None


def _emit(text: str, output) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8", newline="")


def _dataset_args(p):
    p.add_argument("ratings", help="ratings CSV (subject_id,condition_id,rating)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--metadata", help="JSON metadata sidecar")
    g.add_argument("--scale", type=_scale_arg, help="rating scale lo:hi[:discrete] (default 1:5:discrete)")


def _output_args(p, formats=("json", "csv"), default="json"):
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.add_argument("--format", choices=formats, default=default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qoemetrics", description="QoE metrics from subjective rating studies.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="per-condition MOS, SOS, quantiles, acceptability, GoB/PoW/TME")
    _dataset_args(p)
    _output_args(p)
    p.add_argument("--quantiles", nargs="+", type=_quantile_arg, default=[], metavar="N/Q")
    p.add_argument("--theta", nargs="+", type=float, default=[], metavar="THETA")
    p.add_argument("--thresholds", type=_thresholds_arg, metavar="GB,PW,TE")
    p.add_argument("--gob-pow-tme", action="store_true",
                   help="estimate GoB/PoW/TME with E-model default thresholds")
    p.add_argument("--variance", choices=("population", "sample"), default="population",
                   help="variance estimator feeding the SOS fit")

    p = sub.add_parser("fit-sos", help="fit the SOS parameter")
    _dataset_args(p)
    _output_args(p)
    p.add_argument("--variance", choices=("population", "sample"), default="population")

    p = sub.add_parser("emodel-table", help="MOS -> R, PoW, GoB, TME table")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--mos", nargs="+", type=float)
    g.add_argument("--default-rows", action="store_true")
    _output_args(p, ("csv", "json"), "csv")

    p = sub.add_parser("emodel-convert", help="convert between R and MOS")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--r", nargs="+", type=float)
    g.add_argument("--mos", nargs="+", type=float)
    _output_args(p, ("csv", "json"), "csv")

    p = sub.add_parser("transform", help="linearly map ratings onto another scale")
    p.add_argument("ratings")
    p.add_argument("--metadata")
    p.add_argument("--from", dest="source", type=_scale_arg, required=True)
    p.add_argument("--to", dest="target", type=_scale_arg, required=True)
    p.add_argument("--output", "-o", required=True, help="transformed ratings CSV")
    p.add_argument("--metadata-output", help="rewritten metadata (default: OUTPUT with .json suffix)")
    p.add_argument("--verify", action="store_true", help="report the SOS parameter before and after")
    p.add_argument("--variance", choices=("population", "sample"), default="population")

    p = sub.add_parser("curve-data", help="GoB/PoW/neutral curve over MOS")
    p.add_argument("--mos-min", type=float, default=emodel.MOS_MIN)
    p.add_argument("--mos-max", type=float, default=emodel.MOS_MAX)
    p.add_argument("--steps", type=int, default=36)
    p.add_argument("--output", "-o")
    return ap


def _load(args):
    return load_dataset(args.ratings, args.metadata, args.scale)


def cmd_analyze(args):
    report = analyze_dataset(
        _load(args),
        quantiles=args.quantiles,
        thetas=args.theta,
        thresholds=args.thresholds,
        gob_pow_tme=args.gob_pow_tme,
        variance=args.variance,
    )
    _emit(render_report(report, args.format), args.output)


def cmd_fit_sos(args):
    dataset = _load(args)
    fit = fit_dataset(dataset, 1 if args.variance == "sample" else 0)
    if args.format == "json":
        doc = {
            "a": round_sig(fit.a),
            "raw_a": round_sig(fit.raw_a),
            "residual": round_sig(fit.residual),
            "variance": args.variance,
            "points": [
                {"z": round_sig(p.z), "variance": round_sig(p.variance), "count": p.count,
                 "degenerate": p.degenerate}
                for p in fit.points
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("a", "raw_a", "residual", "variance"))
        w.writerow((f"{round_sig(fit.a):.6g}", f"{round_sig(fit.raw_a):.6g}",
                    f"{round_sig(fit.residual):.6g}", args.variance))
        text = buf.getvalue()
    _emit(text, args.output)


def _table_text(rows, fmt):
    if fmt == "json":
        doc = [
            {"mos": round(p.mos, 5), "r": None if p.r is None else round(p.r, 2),
             "pow": round(p.pow_pct, 3), "gob": round(p.gob_pct, 3), "tme": round(p.tme_pct, 3)}
            for p in rows
        ]
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("mos", "r", "pow", "gob", "tme"))
    for p in rows:
        r = "undefined" if p.r is None else f"{p.r:.2f}"
        w.writerow((f"{p.mos:.5f}", r, f"{p.pow_pct:.3f}", f"{p.gob_pct:.3f}", f"{p.tme_pct:.3f}"))
    return buf.getvalue()


def cmd_emodel_table(args):
    values = emodel.DEFAULT_TABLE_MOS if args.default_rows else args.mos
    _emit(_table_text(emodel.emodel_table(values), args.format), args.output)


def cmd_emodel_convert(args):
    if args.r is not None:
        rows = [emodel.emodel_point(r) for r in args.r]
    else:
        rows = emodel.emodel_table(args.mos)
    _emit(_table_text(rows, args.format), args.output)


def cmd_transform(args):
    dataset = load_dataset(args.ratings, args.metadata, None if args.metadata else args.source)
    t = LinearTransform(args.source, args.target)
    out = transform_dataset(dataset, t)
    meta_out = args.metadata_output or str(Path(args.output).with_suffix(".json"))
    write_dataset(out, args.output, meta_out)
    if args.verify:
        ddof = 1 if args.variance == "sample" else 0
        before, after = fit_dataset(dataset, ddof).a, fit_dataset(out, ddof).a
        doc = {"a_original": before, "a_transformed": after, "difference": abs(before - after)}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def cmd_curve_data(args):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("mos", "gob_pct", "pow_pct", "neutral_pct"))
    for p in emodel.curve_data(args.mos_min, args.mos_max, args.steps):
        w.writerow((f"{p.mos:.5f}", f"{p.gob_pct:.3f}", f"{p.pow_pct:.3f}", f"{p.neutral_pct:.3f}"))
    _emit(buf.getvalue(), args.output)


COMMANDS = {
    "analyze": cmd_analyze,
    "fit-sos": cmd_fit_sos,
    "emodel-table": cmd_emodel_table,
    "emodel-convert": cmd_emodel_convert,
    "transform": cmd_transform,
    "curve-data": cmd_curve_data,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QoEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        violations = getattr(exc, "violations", ())
        for v in violations[1:]:
            print(f"  {v}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
