"""Command-line entry point.

Exit codes: 0 on success, 2 on invalid input, 1 on an internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import ValidationError
from .io import (
    GENERATOR_SCHEMA,
    REPORT_SCHEMA,
    decode_point,
    dumps,
    encode_point,
    encode_value,
    points_to_json,
    read_json,
    read_points,
    validate,
)
from .numbers import ZERO, parse_rational

__all__ = ["main", "build_parser"]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_shift(text: str | None):
    if text is None:
        return ZERO
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError(f"--shift expects x,y, got {text!r}")
    try:
        return decode_point([parse_rational(p) for p in parts], "--shift")
    except ValueError as exc:
        raise ValidationError(f"--shift: {exc}") from None


def _load_config(path: str | None):
    from .pipeline import AnalysisConfig

    if path is None:
        return AnalysisConfig()
    return AnalysisConfig.from_mapping(read_json(path, what="config"))


def cmd_gen(args) -> None:
    from .generators import from_spec

    spec = read_json(args.spec, GENERATOR_SCHEMA, "generator spec")
    _emit(dumps(points_to_json(from_spec(spec))), args.output)


def cmd_analyze(args) -> None:
    from .pipeline import analyze

    P = read_points(args.points)
    cfg = _load_config(args.config)
    report = analyze(P, cfg)
    validate(report, REPORT_SCHEMA, "report")
    _emit(dumps(report), args.output)
    figure = args.figure
    if figure is None and cfg.emit_svg and args.output:
        figure = str(Path(args.output).with_suffix(".svg"))
    if figure:
        from .plotting import render_report

        render_report(report, figure)


def cmd_spectrum(args) -> None:
    from .motions import guth_katz_ratio, spectrum

    spec = spectrum(read_points(args.points))
    rows = ["k\texactly_k\tat_least_k"]
    rows += [f"{k}\t{e}\t{c}" for k, e, c in spec.rows()]
    rows.append(f"# C_emp\t{encode_value(guth_katz_ratio(spec))}")
    _emit("\n".join(rows) + "\n", args.output)


def cmd_energy(args) -> None:
    from .energies import additive_energy, multiplicative_energy, sumset_size

    P = read_points(args.points)
    shift = _parse_shift(args.shift)
    rows = ["quantity\tvalue", f"n\t{len(P)}"]
    if args.mult:
        Q = P.translate(shift)
        rows.append(f"multiplicative_energy\t{multiplicative_energy(Q)}")
        rows.append(f"shift\t{','.join(encode_point(shift))}")
    else:
        rows.append(f"additive_energy\t{additive_energy(P)}")
        rows.append(f"sumset_size\t{sumset_size(P)}")
    _emit("\n".join(rows) + "\n", args.output)


def _rich_set(P, k: int | None):
    from .geometry import class_table
    from .motions import good_ks, guth_katz_ratio, motion_table, spectrum
    from .numbers import Fraction

    table = motion_table(P)
    if k is None:
        n = len(P)
        spec = spectrum(table)
        ks = good_ks(spec, Fraction(len(class_table(P)), n * n), guth_katz_ratio(spec))
        if not ks:
            raise ValidationError("no good k; pass --k explicitly")
        k = ks[-1]
    if k < 2:
        raise ValidationError("--k must be at least 2")
    return k, table.motions_at_least(k)


def _tau(text: str):
    if text == "auto":
        return "auto"
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError("threshold must be at least 2")
    return v


def cmd_detect(args) -> None:
    from .cosets import detect
    from .pipeline import _detection_dict

    P = read_points(args.points)
    k, S = _rich_set(P, args.k)
    rep = detect(S, args.tau_vertical, args.tau_torus)
    _emit(dumps({"k": k, "S_size": len(S), **_detection_dict(rep)}), args.output)


def cmd_extract(args) -> None:
    from .cosets import detect
    from .pipeline import _circle_dict, _lines_dict
    from .structure import extract_circle, parallel_line_cover

    P = read_points(args.points)
    if len(P) < 2:
        raise ValidationError("extraction needs at least 2 points")
    out = {"lines": _lines_dict(parallel_line_cover(P, parse_rational(args.C3)))}
    circles = []
    if len(P) >= 3:
        k, S = _rich_set(P, args.k)
        out["k"] = k
        for coset in detect(S).torus:
            try:
                circles.append(_circle_dict(extract_circle(coset, S, P)))
            except ValidationError:
                continue
    out["circles"] = circles
    _emit(dumps(out), args.output)


def cmd_svg(args) -> None:
    from .plotting import render_report

    report = read_json(args.report, what="report", exact_decimals=False)
    validate(report, REPORT_SCHEMA, "report")
    render_report(report, args.output)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trimotion", description="Rigid-motion structure of planar point sets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="build a point set from a generator spec")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="full analysis report")
    p.add_argument("points")
    p.add_argument("--config")
    p.add_argument("-o", "--output")
    p.add_argument("--figure", help="also write an SVG figure here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("spectrum", help="richness spectrum as TSV")
    p.add_argument("points")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("energy", help="additive or multiplicative energy as TSV")
    p.add_argument("points")
    p.add_argument("--mult", action="store_true", help="multiplicative energy of P - shift")
    p.add_argument("--shift", help="translation x,y (exact rationals)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("detect", help="rich cosets of S_>=k")
    p.add_argument("points")
    p.add_argument("--k", type=int, help="richness level (default: largest good k)")
    p.add_argument("--tau-vertical", type=_tau, default="auto")
    p.add_argument("--tau-torus", type=_tau, default="auto")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("extract", help="parallel line family and rich circles")
    p.add_argument("points")
    p.add_argument("--k", type=int)
    p.add_argument("--C3", default="2")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("svg", help="render a report as SVG")
    p.add_argument("report")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_svg)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
