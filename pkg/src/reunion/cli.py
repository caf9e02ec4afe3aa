"""Command line batch interface.

Every command writes one or more CSV files plus a JSON manifest into
``--out``.  Exit status: 0 success, 2 invalid input, 3 numerical-quality
failure (precision loss, solver tolerance, truncation).

The default working precision of the exact sums can be set with the
environment variable ``REUNION_DIGITS``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import NumericalQualityError, StateSpaceError

DIGITS_ENV = "REUNION_DIGITS"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    v = float(v)
    return f"{v:.15g}" if math.isfinite(v) else ""


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_manifest(out: Path, command: str, params: dict, outputs: list, started: float) -> Path:
    manifest = {
        "command": command,
        "parameters": params,
        "tool_version": __version__,
        "wall_time": round(time.perf_counter() - started, 6),
        "outputs": [str(p) for p in outputs],
    }
    path = out / f"manifest_{command}.json"
    write_atomic(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def parse_grid(flag: str, text: str) -> list:
    """``start:stop:step`` inclusive of stop, or a comma list."""
    try:
        if ":" in text:
            a, b, h = (float(x) for x in text.split(":"))
            if h <= 0 or b < a:
                raise ValueError
            n = int(math.floor((b - a) / h + 1e-9))
            return [round(a + i * h, 12) for i in range(n + 1)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(flag, f"cannot parse grid {text!r}; use start:stop:step or a,b,c") from None


def parse_int_list(flag: str, text: str) -> list:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise UsageError(flag, "empty list")
    return vals


def default_digits_from_env() -> Optional[int]:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None or raw == "":
        return None
    try:
        d = int(raw)
    except ValueError:
        raise UsageError(DIGITS_ENV, f"not an integer: {raw!r}") from None
    if d < 15:
        raise UsageError(DIGITS_ENV, "must be >= 15")
    return d


def _need(cond: bool, flag: str, message: str) -> None:
    if not cond:
        raise UsageError(flag, message)


# ------------------------------------------------------------------ commands


def cmd_reunion(args, out: Path, started: float) -> list:
    from .exact_sums import ReunionQuery, hankel_reunion

    model = _model(args.model)
    _need(args.n >= 1, "--n", f"number of walkers must be >= 1, got {args.n}")
    if args.grid is not None:
        lengths = parse_grid("--grid", args.grid)
    elif args.length is not None:
        lengths = [args.length]
    else:
        raise UsageError("--length", "give --length or --grid")
    for L in lengths:
        _need(L > 0 and math.isfinite(L), "--length" if args.grid is None else "--grid",
              f"lengths must be positive, got {L}")
    if args.n_max is not None:
        _need(args.n_max >= args.n, "--n-max", f"must be >= N={args.n}")
    digits = args.digits if args.digits is not None else default_digits_from_env()
    if digits is not None:
        _need(digits >= 15, "--digits", "must be >= 15")
    rows = []
    for L in lengths:
        r = hankel_reunion(ReunionQuery(model, args.n, L, args.n_max, digits))
        rows.append((L, float(r.value), r.truncation_error_estimate, r.method.value))
    path = out / f"reunion_{model.value}_N{args.n}.csv"
    write_atomic(path, csv_text(["L", "value", "error_estimate", "method"], rows))
    params = {"model": model.value, "n": args.n, "lengths": lengths, "n_max": args.n_max,
              "digits": digits}
    return [path, write_manifest(out, "reunion", params, [path], started)]


def cmd_tw(args, out: Path, started: float) -> list:
    from .painleve_tw import solve_hastings_mcleod, tw_cdf

    _need(args.beta in (1, 2), "--beta", f"must be 1 or 2, got {args.beta}")
    _need(args.t_left <= -10, "--t-left", f"must be <= -10, got {args.t_left}")
    _need(args.t_right >= 6, "--t-right", f"must be >= 6, got {args.t_right}")
    _need(0 < args.step_tol <= 1e-8, "--step-tol", "must lie in (0, 1e-8]")
    sol = solve_hastings_mcleod(args.t_left, args.t_right, args.step_tol)
    table = tw_cdf(sol, args.beta)
    path = out / f"tw_beta{args.beta}.csv"
    write_atomic(path, table.to_csv())
    params = {"beta": args.beta, "t_left": args.t_left, "t_right": args.t_right,
              "step_tol": args.step_tol, "digits": sol.digits, "achieved_tol": sol.tol}
    return [path, write_manifest(out, "tw", params, [path], started)]


def cmd_ldf(args, out: Path, started: float) -> list:
    from .large_dev import ldf_curve

    _need(args.points >= 2, "--points", f"need at least 2 points, got {args.points}")
    _need(args.min > 0, "--min", f"coupling must be positive, got {args.min}")
    _need(args.max > args.min, "--max", "must exceed --min")
    grid = np.linspace(args.min, args.max, args.points)
    curve = ldf_curve(grid)
    path = out / "ldf.csv"
    write_atomic(path, curve.to_csv())
    params = {"min": args.min, "max": args.max, "points": args.points}
    return [path, write_manifest(out, "ldf", params, [path], started)]


def cmd_scalecheck(args, out: Path, started: float) -> list:
    from .exact_sums import ModelKind
    from .painleve_tw import solve_hastings_mcleod, tw_cdf
    from .scaling_limits import scaling_curve

    model = _model(args.model)
    if model is ModelKind.REFLECTING:
        raise UsageError("--model", "reflecting walls have no double-scaling map here; their "
                         "analysis parallels the absorbing case and is deferred")
    ns = parse_int_list("--n", args.n)
    for N in ns:
        _need(N >= 1, "--n", f"walker counts must be >= 1, got {N}")
    ts = parse_grid("--t-grid", args.t_grid)
    t_right = max(8.0, max(ts) + 0.5)
    t_left = min(-10.0, min(ts) - 0.5)
    sol = solve_hastings_mcleod(t_left, t_right)
    tw = tw_cdf(sol, 2 if model is ModelKind.PERIODIC else 1)
    outputs, summary = [], []
    for N in ns:
        try:
            curve = scaling_curve(model, N, ts, tw)
        except ValueError as exc:
            raise UsageError("--t-grid", str(exc)) from None
        p = out / f"scaling_{model.value}_N{N}.csv"
        write_atomic(p, curve.to_csv())
        outputs.append(p)
        summary.append((N, curve.sup_distance))
    p = out / f"scaling_{model.value}_summary.csv"
    write_atomic(p, csv_text(["N", "sup_distance"], summary))
    outputs.append(p)
    params = {"model": model.value, "n": ns, "t_grid": ts, "tw_range": [t_left, t_right]}
    return outputs + [write_manifest(out, "scalecheck", params, outputs, started)]


def cmd_oracle(args, out: Path, started: float) -> list:
    from .exact_sums import ReunionQuery, hankel_reunion
    from .oracles import LatticeConfig, dp_reunion

    model = _model(args.model)
    _need(args.n >= 1, "--n", f"must be >= 1, got {args.n}")
    _need(args.length > 0, "--length", f"must be positive, got {args.length}")
    _need(args.sites >= 2, "--sites", f"need at least 2 sites, got {args.sites}")
    try:
        cfg = LatticeConfig(model, args.n, args.length, args.sites, args.steps)
    except StateSpaceError as exc:
        raise UsageError("--sites", str(exc)) from None
    except ValueError as exc:
        raise UsageError("--steps", str(exc)) from None
    res = dp_reunion(cfg)
    exact = float(hankel_reunion(ReunionQuery(model, args.n, cfg.effective_length,
                                              digits=default_digits_from_env())).value)
    row = (model.value, args.n, args.length, args.sites, cfg.steps, cfg.effective_length,
           res.ratio, exact, res.ratio / exact - 1.0, res.leakage)
    path = out / f"oracle_{model.value}_N{args.n}.csv"
    write_atomic(path, csv_text(["model", "N", "L", "sites", "steps", "effective_length",
                                 "dp_value", "exact_value", "relative_difference", "leakage"],
                                [row]))
    params = {"model": model.value, "n": args.n, "length": args.length, "sites": args.sites,
              "steps": cfg.steps}
    return [path, write_manifest(out, "oracle", params, [path], started)]


def cmd_mc(args, out: Path, started: float) -> list:
    from .oracles import mc_excursion_max

    _need(args.samples >= 10**4, "--samples", f"need at least 10000, got {args.samples}")
    _need(args.time_steps >= 10**3, "--time-steps", f"need at least 1000, got {args.time_steps}")
    _need(args.seed >= 0, "--seed", "must be nonnegative")
    _need(args.workers >= 1, "--workers", "must be >= 1")
    emp = mc_excursion_max(args.samples, args.time_steps, args.seed, workers=args.workers)
    path = out / f"mc_excursion_seed{args.seed}.csv"
    write_atomic(path, emp.to_csv())
    params = {"samples": args.samples, "time_steps": args.time_steps, "seed": args.seed}
    return [path, write_manifest(out, "mc", params, [path], started)]


def _model(name: str):
    from .exact_sums import ModelKind

    try:
        return ModelKind.parse(name)
    except ValueError as exc:
        raise UsageError("--model", str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="reunion", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", default=".", help="output directory (default: current)")

    sp = sub.add_parser("reunion", help="exact normalized reunion probability")
    sp.add_argument("--model", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--length", type=float)
    sp.add_argument("--grid", help="start:stop:step (inclusive) or comma list of lengths")
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--digits", type=int)
    common(sp)
    sp.set_defaults(func=cmd_reunion)

    sp = sub.add_parser("tw", help="Tracy-Widom table from Painleve II")
    sp.add_argument("--beta", type=int, required=True)
    sp.add_argument("--t-left", type=float, default=-10.0)
    sp.add_argument("--t-right", type=float, default=8.0)
    sp.add_argument("--step-tol", type=float, default=1e-10)
    common(sp)
    sp.set_defaults(func=cmd_tw)

    sp = sub.add_parser("ldf", help="large-deviation free energies on a coupling grid")
    sp.add_argument("--min", type=float, default=math.pi**2)
    sp.add_argument("--max", type=float, default=4 * math.pi**2)
    sp.add_argument("--points", type=int, default=50)
    common(sp)
    sp.set_defaults(func=cmd_ldf)

    sp = sub.add_parser("scalecheck", help="exact values against Tracy-Widom in the scaling window")
    sp.add_argument("--model", required=True)
    sp.add_argument("--n", default="8,16,32")
    sp.add_argument("--t-grid", default="-4:3:0.25")
    common(sp)
    sp.set_defaults(func=cmd_scalecheck)

    sp = sub.add_parser("oracle", help="lattice dynamic-programming reunion ratio")
    sp.add_argument("--model", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--length", type=float, default=1.0)
    sp.add_argument("--sites", type=int, required=True)
    sp.add_argument("--steps", type=int)
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("mc", help="Monte Carlo law of the Brownian excursion maximum")
    sp.add_argument("--samples", type=int, default=100000)
    sp.add_argument("--time-steps", type=int, default=1000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_mc)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(args.out)
    started = time.perf_counter()
    try:
        written = args.func(args, out, started)
    except UsageError as exc:
        print(f"reunion {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalQualityError as exc:
        print(f"reunion {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"reunion {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for p in written:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
