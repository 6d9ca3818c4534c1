"""Command-line front door.

Subcommands:
    test      score a data file and apply the step-up rule at a given level
    study1    ranking-comparison study, writes R vs missed-severity curves
    study2    closed-form oracle comparison over a pi11 grid
    simulate  draw replicates from a configured model
    verify    run the cross-module verification suite

File formats
------------
Data files: CSV with a single header line ``x`` and one observation per row;
lines starting with ``#`` are ignored.

Config files: flat ``key = value`` lines (``#`` comments allowed) with keys
model.pi0, model.alt (two_point | gaussian_mixture), model.pi11,
model.mu_minus, model.mu_plus, model.tau (mixtures only), severity.kind
(power | constant), severity.power.

All floats are written with 12 significant digits; re-parsing a written file
and re-writing it is byte-stable. Exit codes: 0 ok, 1 usage, 2 data error,
3 config error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .error_rates import posterior_mfdr_star
from .experiments import (
    DEFAULT_SEED,
    VerifyReport,
    run_study1,
    run_study2,
    verify_suite,
)
from .model import (
    CONSTANT,
    GAUSSIAN_MIXTURE,
    POWER,
    TWO_POINT,
    AlternativeSpec,
    SeveritySpec,
    TwoGroupsModel,
    sample,
)
from .numerics import NumericalError
from .posterior import posterior_scores
from .procedures import stepup

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4


class DataError(Exception):
    pass


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    """Canonical cell format: ints verbatim, floats at 12 significant digits."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def write_csv(path: str, header: list[str], rows, preamble: list[str] = ()):
    lines = list(preamble)
    lines.append(",".join(header))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_config(path: str) -> tuple[TwoGroupsModel, SeveritySpec]:
    entries: dict[str, str] = {}
    try:
        with open(path) as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()

    known = {"model.pi0", "model.alt", "model.pi11", "model.mu_minus",
             "model.mu_plus", "model.tau", "severity.kind", "severity.power"}
    unknown = set(entries) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")

    def need(key):
        if key not in entries:
            raise ConfigError(f"{path}: missing required key {key}")
        return entries[key]

    def as_float(key, value):
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{path}: {key} must be a number, got {value!r}")

    alt_kind = need("model.alt")
    if alt_kind not in (TWO_POINT, GAUSSIAN_MIXTURE):
        raise ConfigError(
            f"{path}: model.alt must be {TWO_POINT} or {GAUSSIAN_MIXTURE}")
    try:
        pi11 = as_float("model.pi11", need("model.pi11"))
        mu_minus = as_float("model.mu_minus", need("model.mu_minus"))
        mu_plus = as_float("model.mu_plus", need("model.mu_plus"))
        if alt_kind == TWO_POINT:
            alt = AlternativeSpec.two_point(pi11, mu_minus, mu_plus)
        else:
            tau = as_float("model.tau", need("model.tau"))
            alt = AlternativeSpec.gaussian_mixture(pi11, mu_minus, mu_plus, tau)
        model = TwoGroupsModel(as_float("model.pi0", need("model.pi0")), alt)

        kind = need("severity.kind")
        if kind == CONSTANT:
            spec = SeveritySpec.constant()
        elif kind == POWER:
            power = as_float("severity.power", entries.get("severity.power", "2"))
            spec = SeveritySpec.power_law(power)
        else:
            raise ConfigError(f"{path}: severity.kind must be {POWER} or {CONSTANT}")
    except ValueError as exc:  # domain violations from the model types
        raise ConfigError(f"{path}: {exc}")
    return model, spec


def read_data(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise DataError(f"cannot read data {path}: {exc}")
    header = None
    values = []
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            if line != "x":
                raise DataError(f"{path}:{lineno}: expected header 'x', got {line!r}")
            header = line
            continue
        try:
            value = float(line)
        except ValueError:
            raise DataError(f"{path}:{lineno}: not a number: {line!r}")
        if not np.isfinite(value):
            raise DataError(f"{path}:{lineno}: observations must be finite")
        values.append(value)
    if header is None:
        raise DataError(f"{path}: empty data file (missing 'x' header)")
    if not values:
        raise DataError(f"{path}: no observations after the header")
    return np.array(values)


def _cmd_test(args) -> int:
    model, spec = parse_config(args.config)
    x = read_data(args.data)
    scores = posterior_scores(model, spec, x)
    k, decisions, threshold = stepup(scores, args.alpha)
    rate = posterior_mfdr_star(scores, threshold) if k > 0 else 0.0
    summary = (f"# k={k} threshold={fmt(threshold)} mfdr_star={fmt(rate)} "
               f"alpha={fmt(args.alpha)} m={x.size}")
    rows = [(i, x[i], scores.fdr[i], scores.w[i], scores.T[i], scores.d[i],
             int(decisions.delta[i])) for i in range(x.size)]
    write_csv(args.out, ["index", "x", "fdr", "w", "T", "d", "rejected"], rows,
              preamble=[summary])
    print(summary.lstrip("# "))
    return EXIT_OK


def _cmd_study1(args) -> int:
    results = run_study1(m=args.m, n_reps=args.reps, seed=args.seed)
    rows = [(r.R, r.beta_star_glfdr, r.beta_star_lfdr) for r in results]
    write_csv(args.out, ["R", "beta_star_glfdr", "beta_star_lfdr"], rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        grid = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ValueError(f"--grid must be comma-separated numbers, got {text!r}")
    if not grid or any(not 0.0 < v < 1.0 for v in grid):
        raise ValueError("--grid values must lie strictly inside (0, 1)")
    return grid


def _cmd_study2(args) -> int:
    grid = _parse_grid(args.grid) if args.grid else None
    rows = run_study2(alpha=args.alpha, pi11_grid=grid)
    write_csv(args.out,
              ["pi11", "procedure", "c_l", "c_u", "mfdr_star", "mfnr", "mfnr_star"],
              [(r.pi11, r.procedure, r.c_l, r.c_u, r.mfdr_star, r.mfnr, r.mfnr_star)
               for r in rows])
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    model, _ = parse_config(args.config)
    rows = []
    for rep in range(args.reps):
        smp = sample(model, args.m, args.seed, rep)
        rows.extend((rep, i, smp.x[i], smp.mu[i], int(smp.theta[i]))
                    for i in range(args.m))
    write_csv(args.out, ["rep", "index", "x", "mu", "theta"], rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _print_report(report: VerifyReport):
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}: value={check.value:.6g} "
              f"tolerance={check.tolerance:.6g} ({check.detail})")


def _cmd_verify(args) -> int:
    report = verify_suite(budget=args.budget, seed=args.seed)
    _print_report(report)
    if args.out:
        write_csv(args.out, ["check", "passed", "value", "tolerance"],
                  [(c.name, int(c.passed), c.value, c.tolerance)
                   for c in report.checks])
    return EXIT_OK if report.all_passed else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sevfdr",
                     description="Severity-weighted multiple hypothesis testing")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="score a data file and apply the step-up rule")
    p.add_argument("--data", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_test)

    p = sub.add_parser("study1", help="ranking comparison study")
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_study1)

    p = sub.add_parser("study2", help="closed-form oracle comparison study")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--grid", default=None,
                   help="comma-separated pi11 values in (0, 1)")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_study2)

    p = sub.add_parser("simulate", help="draw replicates from a configured model")
    p.add_argument("--config", required=True)
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--budget", choices=["small", "full"], default="small")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("test", "study1", "study2", "simulate"):
            # flag-domain problems are usage errors
            for name in ("alpha",):
                if hasattr(args, name) and not 0.0 < getattr(args, name) < 1.0:
                    parser.error(f"--{name} must lie in (0, 1)")
            for name in ("m", "reps"):
                if hasattr(args, name) and getattr(args, name) < 1:
                    parser.error(f"--{name} must be >= 1")
        return args.fn(args)
    except ConfigError as exc:
        print(f"sevfdr: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"sevfdr: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"sevfdr: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"sevfdr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
