"""Command-line front end.

Exit status: 0 on success, 1 if any identity check fails, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import identities, means, sublinear
from .errors import AsymptoticMeansError
from .fnspec import load
from .identities import Settings, analogues
from .means import Criterion
from .sublinear import SweepParams

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

MEAN_KINDS = {"M": "P", "R": "K", "Md": "Pd"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _sweep_flags(p):
    p.add_argument("--x-max", type=float, help="upper end of the sample range (continuous kinds)")
    p.add_argument("--n-max", type=_positive_int, help="upper end of the sample range (discrete kinds)")
    p.add_argument("--theta-steps", type=_positive_int, default=sublinear.DEFAULT_STEPS,
                   help="last j of the schedule theta_j (default %(default)s)")
    p.add_argument("--anchors", type=_positive_int, default=sublinear.DEFAULT_ANCHORS,
                   help="minimum anchors per theta (default %(default)s)")
    p.add_argument("--stride-fraction", type=float, default=sublinear.DEFAULT_STRIDE_FRACTION,
                   help="anchor stride as a fraction of the window (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="asymptotic-means", description="Asymptotic means and Pólya-type functionals.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mean", help="Cesàro (M), exponential (R) or discrete (Md) mean")
    p.add_argument("spec")
    p.add_argument("--kind", choices=sorted(MEAN_KINDS), default="M")
    p.add_argument("--x-max", type=float)
    p.add_argument("--n-max", type=_positive_int)
    p.add_argument("--band-tol", type=float, default=means.DEFAULT_BAND_TOL)

    for name, text in (("upper", "upper functional sweep"), ("range", "lower and upper functional"),
                       ("sweep", "per-theta table of an upper sweep as CSV")):
        p = sub.add_parser(name, help=text)
        p.add_argument("spec")
        p.add_argument("--kind", choices=sublinear.KINDS, default="P")
        _sweep_flags(p)
        p.add_argument("--csv", metavar="PATH", help="write the per-theta table as CSV")

    p = sub.add_parser("density", help="natural and Pólya densities of an indicator sequence")
    p.add_argument("spec")
    _sweep_flags(p)
    p.add_argument("--band-tol", type=float, default=means.DEFAULT_BAND_TOL)

    p = sub.add_parser("verify", help="run the identity suite over a directory of spec files")
    p.add_argument("corpus")
    p.add_argument("--params-file", metavar="PATH", help="JSON object of grid settings")
    return parser


def _sweep_params(args, kind: str) -> SweepParams:
    x_max = args.n_max if kind in sublinear.DISCRETE_KINDS else args.x_max
    return SweepParams.default(
        kind,
        x_max=None if x_max is None else float(x_max),
        theta_steps=args.theta_steps,
        anchors=args.anchors,
        stride_fraction=args.stride_fraction,
    )


def _operand(obj, kind: str):
    table = analogues(obj)
    if kind not in table:
        raise AsymptoticMeansError(f"a {type(obj).__name__} has no {kind} interpretation")
    return table[kind]


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_mean(args):
    obj = _operand(load(args.spec), MEAN_KINDS[args.kind])
    base = Criterion(band_tol=args.band_tol)
    if args.kind == "M":
        crit = base if args.x_max is None else Criterion(base.x_min, args.x_max, base.n_samples, base.band_tol)
        est = means.cesaro_mean(obj, crit)
    elif args.kind == "R":
        crit = base.additive()
        if args.x_max is not None:
            crit = Criterion(crit.x_min, args.x_max, crit.n_samples, crit.band_tol)
        est = means.exp_mean(obj, crit)
    else:
        est = means.cesaro_mean_seq(obj, args.n_max, base)
    _emit(est.to_json())
    return EXIT_OK


def _write_csv(path, report):
    Path(path).write_text(report.to_csv(), encoding="utf-8")


def _cmd_upper(args):
    rep = sublinear.upper(args.kind, _operand(load(args.spec), args.kind), _sweep_params(args, args.kind))
    if args.csv:
        _write_csv(args.csv, rep)
    _emit(rep.to_json())
    return EXIT_OK


def _cmd_sweep(args):
    rep = sublinear.upper(args.kind, _operand(load(args.spec), args.kind), _sweep_params(args, args.kind))
    if args.csv:
        _write_csv(args.csv, rep)
    else:
        sys.stdout.write(rep.to_csv())
    return EXIT_OK


def _cmd_range(args):
    obj = _operand(load(args.spec), args.kind)
    lo, hi = sublinear.functional_range_reports(obj, args.kind, _sweep_params(args, args.kind))
    if args.csv:
        _write_csv(args.csv, hi)
    _emit({"kind": args.kind, "lower": lo.value, "upper": hi.value, "lower_report": lo.to_json(), "upper_report": hi.to_json()})
    return EXIT_OK


def _cmd_density(args):
    seq = _operand(load(args.spec), "Pd")
    est = means.cesaro_mean_seq(seq, args.n_max, Criterion(band_tol=args.band_tol))
    out = {
        "natural_density": est.value if est.converged else None,
        "natural_band": [est.lo, est.hi],
        "converged": est.converged,
    }
    for kind, label in (("Pd", "polya"), ("Qd", "log_polya")):
        lo, hi = sublinear.functional_range_reports(seq, kind, _sweep_params(args, kind))
        out[f"{label}_upper"] = hi.value
        out[f"{label}_lower"] = lo.value
    _emit(out)
    return EXIT_OK


def _cmd_verify(args):
    settings = identities.DEFAULT_SETTINGS
    if args.params_file:
        try:
            raw = json.loads(Path(args.params_file).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise AsymptoticMeansError(f"{args.params_file}: invalid JSON ({exc.msg})") from None
        settings = Settings.from_json(raw)
    folder = Path(args.corpus)
    if not folder.is_dir():
        raise AsymptoticMeansError(f"{folder}: not a directory")
    files = sorted(folder.glob("*.json"))
    reports = identities.run_suite([f.read_text(encoding="utf-8") for f in files], settings)
    summary = identities.summarize(reports)
    _emit({
        "summary": summary,
        "sources": [str(f) for f in files],
        "reports": [r.to_json() for r in reports],
    })
    for r in reports:
        if r.failed:
            where = files[r.index] if r.index < len(files) else "?"
            print(f"{r.status}: {r.name} on {where}: {r.diagnostics.get('message', '')}".rstrip(": "), file=sys.stderr)
    if summary["fail"]:
        return EXIT_FAIL
    return EXIT_INPUT if summary["error"] else EXIT_OK


COMMANDS = {
    "mean": _cmd_mean,
    "upper": _cmd_upper,
    "range": _cmd_range,
    "sweep": _cmd_sweep,
    "density": _cmd_density,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (AsymptoticMeansError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
