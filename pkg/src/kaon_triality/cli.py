"""Command-line front end: ``scan``, ``verify`` and ``figure``.

Settings resolve as flags > ``--config`` file > defaults. The config file is
plain ``key = value`` lines; ``#`` starts a comment.
"""
import argparse
import math
import sys

from . import model as km
from . import verification as vf
from .measures import MeasureBundle

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "gamma_s": 1.0,
    "gamma_l": 1.0 / km.GAMMA_RATIO,
    "delta_m": km.DEFAULT_DELTA_M,
    "alpha_re": 1 / math.sqrt(2),
    "alpha_im": 0.0,
    "beta_re": 1 / math.sqrt(2),
    "beta_im": 0.0,
    "tau_min": 0.0,
    "tau_max": km.TAU_0,
    "steps": 1000,
    "workers": 1,
}
INT_KEYS = {"steps", "workers"}

SCAN_HEADER = [
    "tau", "x", "S", "D", "V", "V0", "pKbar", "V2", "D2", "S2", "sum",
    "slack_triality", "slack_fvg", "ratio_appendix",
]
FIGURE_HEADERS = {
    1: ["tau", "D2_plus_S2", "V2", "D", "S"],
    2: ["tau", "sum", "bound"],
    3: ["tau", "V2", "one_minus_D2", "one_minus_D2_minus_S2"],
}


class UsageError(Exception):
    pass


def fmt(v):
    if math.isnan(v):
        return "nan"
    s = f"{v:.12f}"
    return s[1:] if s.startswith("-") and float(s) == 0.0 else s


def read_config(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _coerce(key, value, f"{path}:{lineno}")
    return values


def _coerce(key, value, where):
    try:
        return int(value) if key in INT_KEYS else float(value)
    except ValueError:
        raise UsageError(f"{where}: bad value for {key}: {value!r}") from None


def resolve(args):
    """Merge defaults, config file and explicit flags, in that order."""
    settings = dict(DEFAULTS)
    if args.config:
        settings.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def build_config(settings, *, entropy_base=None):
    try:
        params = km.ModelParams.with_delta_m(
            settings["delta_m"],
            gamma_s=settings["gamma_s"],
            gamma_l=settings["gamma_l"],
            alpha=complex(settings["alpha_re"], settings["alpha_im"]),
            beta=complex(settings["beta_re"], settings["beta_im"]),
            tau_max=settings["tau_max"],
        )
        return vf.ScanConfig(
            params=params,
            tau_min=settings["tau_min"],
            tau_max=settings["tau_max"],
            steps=settings["steps"],
            entropy_base=entropy_base,
            workers=settings["workers"],
        )
    except (km.ModelError, vf.ConfigError) as exc:
        raise UsageError(str(exc)) from None


def scan_rows(records):
    for r in records:
        b = r.bundle
        v2, d2, s2 = b.visibility_V ** 2, b.disting_D ** 2, b.entropy_S ** 2
        yield [
            b.tau, b.x, b.entropy_S, b.disting_D, b.visibility_V, b.strangeness_V0,
            b.antikaon_prob, v2, d2, s2, b.triality_sum,
            r.slack_triality, r.slack_fvg, r.ratio_appendix,
        ]


def figure_rows(records, which):
    for r in records:
        b = r.bundle
        v2, d2, s2 = b.visibility_V ** 2, b.disting_D ** 2, b.entropy_S ** 2
        if which == 1:
            yield [b.tau, d2 + s2, v2, b.disting_D, b.entropy_S]
        elif which == 2:
            yield [b.tau, b.triality_sum, 1.0]
        else:
            yield [b.tau, v2, 1.0 - d2, 1.0 - d2 - s2]


def render_csv(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _add_common(parser):
    g = parser.add_argument_group("model and grid")
    for flag, typ in (
        ("--gamma-s", float), ("--gamma-l", float), ("--delta-m", float),
        ("--alpha-re", float), ("--alpha-im", float),
        ("--beta-re", float), ("--beta-im", float),
        ("--tau-min", float), ("--tau-max", float),
        ("--steps", int), ("--workers", int),
    ):
        g.add_argument(flag, type=typ, default=None)
    parser.add_argument("--config", help="key = value settings file")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument(
        "--debug-entropy-base2", action="store_true",
        help="use log2 entropy; non-physical, makes the triality check fail",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kaon-triality",
        description="Scan and verify the visibility / distinguishability / entanglement "
                    "relation for neutral kaon decay.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="CSV of every measure on the proper-time grid")
    _add_common(p_scan)
    p_scan.add_argument("--path", choices=["closed", "matrix"], default="closed")

    p_verify = sub.add_parser("verify", help="run all checks; exit 1 if any fails")
    _add_common(p_verify)
    p_verify.add_argument("--format", choices=["report", "kv"], default="report")

    p_fig = sub.add_parser("figure", help="CSV data for figure 1, 2 or 3")
    _add_common(p_fig)
    p_fig.add_argument("--which", type=int, choices=[1, 2, 3], required=True)
    return parser


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


def run(args):
    settings = resolve(args)
    base = 2 if args.debug_entropy_base2 else None
    cfg = build_config(settings, entropy_base=base)
    try:
        if args.command == "verify":
            report = vf.run_all(cfg)
            text = report.to_text() if args.format == "report" else report.to_keyvalue()
            _write(text, args.out)
            return EXIT_OK if report.passed else EXIT_FAIL
        if args.command == "scan":
            records = vf.scan(cfg, path=args.path)
            _write(render_csv(SCAN_HEADER, scan_rows(records)), args.out)
            return EXIT_OK
        records = vf.scan(cfg)
        _write(render_csv(FIGURE_HEADERS[args.which], figure_rows(records, args.which)), args.out)
        return EXIT_OK
    except km.ModelError as exc:
        raise UsageError(str(exc)) from None


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
