"""Command line front end emitting CSV/JSON artifacts.

Subcommands: simulate | verify | limit | converge | closedform.  Numeric CSV
fields carry 17 significant digits so every value round-trips to the exact
double that was computed.  Exit codes: 0 ok, 1 verification failure, 2 bad
flags, 3 I/O error, 4 degenerate-angle rejection.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import tempfile
from pathlib import Path

import numpy as np

from .closedform import closedform_distribution, folding_relation_sweep
from .core import (
    Protocol,
    evolve,
    iterate_steps,
    make_delocalized_initial,
    make_line_localized_initial,
    make_localized_initial,
)
from .correspond import max_imaginary_drift, verify_amplitude_correspondence
from .errors import DegenerateAngle
from .measure import (
    COMPONENTS,
    distribution,
    kolmogorov_distance,
    rescaled_cdf,
    total_variation,
)
from .weak_limit import (
    finite_time_approximation,
    halfline_limit_density,
    limit_cdf,
    limit_cdf_fn,
    line_limit_density,
    eta_slope_localized,
    make_limit_spec,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DEGENERATE = 4

DEFAULT_ALPHA = "0.7071067811865476,0"
DEFAULT_BETA = "0,0.7071067811865476"
DEFAULT_TIMES = "125,250,500,1000,2000"

VERIFY_THRESHOLDS = {
    "amp": 1e-11,
    "prob": 1e-12,
    "reality": 1e-13,
    "folding": 1e-12,
    "closedform": 1e-9,
}


class UsageError(Exception):
    """Bad flag combination detected after parsing."""


_ANGLE_RE = re.compile(
    r"^\s*(?:(?P<k>[+-]?\d+(?:\.\d+)?)\s*\*\s*)?pi\s*(?:/\s*(?P<n>[+-]?\d+(?:\.\d+)?))?\s*$",
    re.IGNORECASE,
)


def parse_angle(text: str) -> float:
    """Angle in radians, given as a decimal or as pi/N or K*pi/N."""
    m = _ANGLE_RE.match(text)
    if m:
        k = float(m.group("k")) if m.group("k") else 1.0
        n = float(m.group("n")) if m.group("n") else 1.0
        if n == 0.0:
            raise argparse.ArgumentTypeError(f"zero denominator in angle {text!r}")
        return k * math.pi / n
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected radians or 'pi/N' or 'K*pi/N', got {text!r}"
        ) from None


def parse_complex(text: str) -> complex:
    """Complex number given as 're,im'."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None


def parse_times(text: str) -> tuple[int, ...]:
    """Comma-separated list of strictly positive integer times."""
    try:
        times = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not times or any(t < 1 for t in times):
        raise argparse.ArgumentTypeError(f"times must be >= 1, got {text!r}")
    return times


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _fmt_complex(z: complex) -> str:
    return f"{format(z.real, '.17g')},{format(z.imag, '.17g')}"


def _write_text(path: str | None, text: str) -> None:
    """Write atomically (temp file + rename); '-' or None means stdout."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent) if str(target.parent) else ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit_table(args, header: list[str], rows: list[tuple]) -> None:
    if getattr(args, "json", False):
        payload = {
            "command": args.command,
            "columns": header,
            "rows": [[v if isinstance(v, str) else _json_number(v) for v in row] for row in rows],
        }
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
        return
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _write_text(args.out, "\n".join(lines) + "\n")


def _json_number(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def _require_angle_range(name: str, value: float) -> None:
    if not 0.0 <= value < 2.0 * math.pi:
        raise UsageError(f"{name}: angle must lie in [0, 2*pi), got {value!r}")


def _initial_state(args) -> tuple[complex, complex]:
    """Validate and renormalize the --alpha/--beta pair (CLI tolerance 1e-9)."""
    a, b = args.alpha, args.beta
    mass = abs(a) ** 2 + abs(b) ** 2
    if abs(mass - 1.0) > 1e-9:
        raise UsageError(f"--alpha/--beta: |alpha|^2 + |beta|^2 = {mass!r}, expected 1 within 1e-9")
    if abs(mass - 1.0) > 4e-16:
        scale = 1.0 / math.sqrt(mass)
        print(f"note: initial state renormalized by factor {format(scale, '.17g')}", file=sys.stderr)
        a, b = a * scale, b * scale
    return a, b


def cmd_simulate(args) -> int:
    _require_angle_range("--theta1", args.theta1)
    _require_angle_range("--theta2", args.theta2)
    if args.t < 0:
        raise UsageError(f"--t: must be nonnegative, got {args.t}")
    if args.every is not None and args.every < 1:
        raise UsageError(f"--every: must be >= 1, got {args.every}")
    proto = Protocol(args.theta1, args.theta2)
    alpha, beta = _initial_state(args)
    if args.walk == "halfline":
        state = make_localized_initial(alpha, beta)
    else:
        state = make_delocalized_initial(alpha, beta)
    if args.every is not None:
        rows: list[tuple] = []

        def record(st) -> None:
            d = distribution(st)
            rows.extend((st.t, x, p) for x, p in zip(d.positions, d.p_total))

        record(state)
        for st in iterate_steps(proto, state, args.t):
            if st.t % args.every == 0 or st.t == args.t:
                record(st)
        _emit_table(args, ["t", "x", "p_total"], rows)
        return EXIT_OK
    final = evolve(proto, state, args.t)
    d = distribution(final)
    out_rows = [
        (x, p0, p1, pt) for x, p0, p1, pt in zip(d.positions, d.p0, d.p1, d.p_total)
    ]
    _emit_table(args, ["x", "p0", "p1", "p_total"], out_rows)
    return EXIT_OK


def _random_setup(seed: int) -> tuple[float, float, complex, complex]:
    rng = np.random.default_rng(seed)
    theta1, theta2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
    raw = rng.standard_normal(4)
    a = complex(raw[0], raw[1])
    b = complex(raw[2], raw[3])
    scale = 1.0 / math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    return float(theta1), float(theta2), a * scale, b * scale


def cmd_verify(args) -> int:
    _require_angle_range("--theta1", args.theta1)
    _require_angle_range("--theta2", args.theta2)
    if args.t < 0:
        raise UsageError(f"--t: must be nonnegative, got {args.t}")
    proto = Protocol(args.theta1, args.theta2)
    alpha, beta = _initial_state(args)
    report = verify_amplitude_correspondence(proto, alpha, beta, args.t)
    reality = max_imaginary_drift(proto, alpha, beta, args.t)

    same_coin = args.theta1 == args.theta2
    degenerate = min(
        abs(math.cos(args.theta1)), abs(math.sin(args.theta1))
    ) < 1e-12
    result: dict = {
        "theta1": args.theta1,
        "theta2": args.theta2,
        "alpha": _fmt_complex(alpha),
        "beta": _fmt_complex(beta),
        "T": args.t,
        "amp_correspondence_max_residual": report.max_amp_residual,
        "prob_reproduction_max_residual": report.max_prob_residual,
        "line_reality_max_imag": reality,
    }
    checks = [
        ("amp_correspondence_max_residual", args.amp_threshold),
        ("prob_reproduction_max_residual", args.prob_threshold),
        ("line_reality_max_imag", VERIFY_THRESHOLDS["reality"]),
    ]
    if same_coin and args.t >= 1:
        fold = folding_relation_sweep(args.theta1, alpha, beta, args.t)
        result["folding_max_residual"] = fold.max_residual
        result["folding_parity_ok"] = fold.parity_ok
        checks.append(("folding_max_residual", VERIFY_THRESHOLDS["folding"]))
    else:
        result["folding_max_residual"] = "NA"
        result["folding_parity_ok"] = "NA"
    if same_coin and not degenerate and args.t >= 1:
        t_cf = min(args.t, 30)
        cf = closedform_distribution(args.theta1, alpha, beta, t_cf)
        sim = distribution(evolve(proto, make_localized_initial(alpha, beta), t_cf))
        diff = float(np.max(np.abs(cf.p_total - sim.p_total)))
        result["closedform_t"] = t_cf
        result["closedform_max_abs_diff"] = diff
        checks.append(("closedform_max_abs_diff", VERIFY_THRESHOLDS["closedform"]))
    else:
        result["closedform_t"] = "NA"
        result["closedform_max_abs_diff"] = "NA"
    if args.sweep > 0:
        sweep_amp = 0.0
        sweep_prob = 0.0
        for seed in range(args.sweep):
            th1, th2, a, b = _random_setup(seed)
            rep = verify_amplitude_correspondence(Protocol(th1, th2), a, b, args.t)
            sweep_amp = max(sweep_amp, rep.max_amp_residual)
            sweep_prob = max(sweep_prob, rep.max_prob_residual)
        result["sweep_runs"] = args.sweep
        result["sweep_max_amp_residual"] = sweep_amp
        result["sweep_max_prob_residual"] = sweep_prob
        checks.append(("sweep_max_amp_residual", args.amp_threshold))
        checks.append(("sweep_max_prob_residual", args.prob_threshold))
    else:
        result["sweep_runs"] = 0
        result["sweep_max_amp_residual"] = "NA"
        result["sweep_max_prob_residual"] = "NA"

    failed = [name for name, limit in checks if result[name] > limit]
    result["thresholds"] = {name: limit for name, limit in checks}
    result["failed_checks"] = failed
    result["pass"] = not failed
    if result["folding_parity_ok"] is False:
        result["pass"] = False
        result["failed_checks"].append("folding_parity_ok")
    result["series"] = report.to_dict()["series"]
    _write_text(args.out, json.dumps(result, indent=2) + "\n")
    return EXIT_OK if result["pass"] else EXIT_VERIFY_FAIL


def cmd_limit(args) -> int:
    _require_angle_range("--theta1", args.theta1)
    _require_angle_range("--theta2", args.theta2)
    slope = 0.0
    alpha, beta = _initial_state(args)
    if args.which == "line":
        slope = eta_slope_localized(alpha, beta, args.theta1)
    spec = make_limit_spec(args.theta1, args.theta2, eta_slope=slope)
    if args.approx:
        if args.which != "halfline":
            raise UsageError("--approx: finite-time approximation exists for the half-line walk only")
        if args.t < 1:
            raise UsageError(f"--t: must be >= 1 with --approx, got {args.t}")
        xs = np.arange(args.t + 1)
        f0 = finite_time_approximation(xs, args.t, "inner0", spec)
        f1 = finite_time_approximation(xs, args.t, "inner1", spec)
        ft = finite_time_approximation(xs, args.t, "total", spec)
        rows = list(zip(xs, f0, f1, ft))
        _emit_table(args, ["x", "f0", "f1", "f_total"], rows)
        return EXIT_OK
    pad = 0.05
    if args.which == "halfline":
        lo, hi = -pad, spec.edge + pad
        density = halfline_limit_density
    else:
        lo, hi = -spec.edge - pad, spec.edge + pad
        density = line_limit_density
    ys = np.linspace(lo, hi, args.grid)
    f0 = density(ys, "inner0", spec)
    f1 = density(ys, "inner1", spec)
    ft = density(ys, "total", spec)
    cdf = [limit_cdf(float(y), "total", spec, args.which) for y in ys]
    rows = list(zip(ys, f0, f1, ft, cdf))
    _emit_table(args, ["y", "f0", "f1", "f_total", "F_total"], rows)
    return EXIT_OK


_CANONICAL_STATES = (
    ("plus_i", complex(1 / math.sqrt(2), 0.0), complex(0.0, 1 / math.sqrt(2))),
    ("coin0", complex(1.0, 0.0), complex(0.0, 0.0)),
    ("coin1", complex(0.0, 0.0), complex(1.0, 0.0)),
)


def cmd_converge(args) -> int:
    _require_angle_range("--theta1", args.theta1)
    _require_angle_range("--theta2", args.theta2)
    spec = make_limit_spec(args.theta1, args.theta2)
    proto = Protocol(args.theta1, args.theta2)
    alpha, beta = _initial_state(args)
    times = tuple(sorted(set(args.times)))
    t_max = times[-1]

    def snapshots(a: complex, b: complex) -> dict[int, object]:
        state = make_localized_initial(a, b)
        wanted = set(times)
        snaps: dict[int, object] = {}
        if 0 in wanted:
            snaps[0] = distribution(state)
        for st in iterate_steps(proto, state, t_max):
            if st.t in wanted:
                snaps[st.t] = distribution(st)
        return snaps

    main_snaps = snapshots(alpha, beta)
    canon_snaps = [snapshots(a, b) for _, a, b in _CANONICAL_STATES]
    rows = []
    cdf_fns = {comp: limit_cdf_fn(comp, spec, "halfline") for comp in COMPONENTS}
    for t in times:
        tv = max(
            total_variation(canon_snaps[i][t], canon_snaps[j][t])
            for i in range(len(canon_snaps))
            for j in range(i + 1, len(canon_snaps))
        )
        for comp in COMPONENTS:
            ks = kolmogorov_distance(rescaled_cdf(main_snaps[t], comp), cdf_fns[comp])
            rows.append((t, comp, ks, tv))
    _emit_table(args, ["t", "component", "kolmogorov", "init_pair_tv"], rows)
    return EXIT_OK


def _branch_label(t: int, x: int) -> str:
    gap = t - x
    if gap == 0:
        return "boundary_top"
    if gap == 1:
        return "boundary_next"
    return "interior_even_gap" if gap % 2 == 0 else "interior_odd_gap"


def cmd_closedform(args) -> int:
    _require_angle_range("--theta", args.theta)
    if args.t < 1:
        raise UsageError(f"--t: must be >= 1, got {args.t}")
    alpha, beta = _initial_state(args)
    cf = closedform_distribution(args.theta, alpha, beta, args.t)
    proto = Protocol(args.theta, args.theta)
    sim = distribution(evolve(proto, make_localized_initial(alpha, beta), args.t))
    rows = []
    for x, pc, ps in zip(cf.positions, cf.p_total, sim.p_total):
        row = (x, pc, ps, abs(pc - ps))
        if args.annotate_branches:
            row = row + (_branch_label(args.t, int(x)),)
        rows.append(row)
    header = ["x", "p_closedform", "p_simulated", "abs_diff"]
    if args.annotate_branches:
        header.append("branch")
    _emit_table(args, header, rows)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--config", default=None, help="JSON config file supplying defaults")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.add_argument("--dump-config", default=None, metavar="PATH", help="write the resolved config to PATH")


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=parse_complex, default=DEFAULT_ALPHA, help="coin-0 amplitude 're,im'")
    p.add_argument("--beta", type=parse_complex, default=DEFAULT_BETA, help="coin-1 amplitude 're,im'")


def _build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Simulate 2-period coined walks and check their analytic descriptions.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}

    p = subs.add_parser("simulate", help="evolve a walk and emit its distribution")
    p.add_argument("--walk", choices=("halfline", "line"), default="halfline")
    p.add_argument("--theta1", type=parse_angle, default="pi/3")
    p.add_argument("--theta2", type=parse_angle, default="pi/4")
    _add_state_flags(p)
    p.add_argument("--t", type=int, default=500, help="number of steps")
    p.add_argument("--every", type=int, default=None, metavar="K", help="emit a t,x,p_total series every K steps")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)
    registry["simulate"] = p

    p = subs.add_parser("verify", help="run the correspondence and closed-form checks")
    p.add_argument("--theta1", type=parse_angle, default="pi/3")
    p.add_argument("--theta2", type=parse_angle, default="pi/4")
    _add_state_flags(p)
    p.add_argument("--t", type=int, default=100, help="verification horizon")
    p.add_argument("--sweep", type=int, default=0, metavar="N", help="additionally verify N seeded random setups")
    p.add_argument("--amp-threshold", type=float, default=VERIFY_THRESHOLDS["amp"])
    p.add_argument("--prob-threshold", type=float, default=VERIFY_THRESHOLDS["prob"])
    _add_common(p)
    p.set_defaults(func=cmd_verify)
    registry["verify"] = p

    p = subs.add_parser("limit", help="tabulate limit densities and CDFs")
    p.add_argument("--which", choices=("halfline", "line"), default="halfline")
    p.add_argument("--theta1", type=parse_angle, default="pi/3")
    p.add_argument("--theta2", type=parse_angle, default="pi/4")
    _add_state_flags(p)
    p.add_argument("--grid", type=int, default=512, help="number of grid points")
    p.add_argument("--approx", action="store_true", help="emit the finite-time approximation instead")
    p.add_argument("--t", type=int, default=500, help="time for --approx")
    _add_common(p)
    p.set_defaults(func=cmd_limit)
    registry["limit"] = p

    p = subs.add_parser("converge", help="distance from the rescaled CDF to the limit CDF over time")
    p.add_argument("--theta1", type=parse_angle, default="pi/3")
    p.add_argument("--theta2", type=parse_angle, default="pi/4")
    _add_state_flags(p)
    p.add_argument("--times", type=parse_times, default=DEFAULT_TIMES)
    _add_common(p)
    p.set_defaults(func=cmd_converge)
    registry["converge"] = p

    p = subs.add_parser("closedform", help="closed-form distribution vs simulation (single coin)")
    p.add_argument("--theta", type=parse_angle, default="pi/4")
    _add_state_flags(p)
    p.add_argument("--t", type=int, default=20)
    p.add_argument("--annotate-branches", action="store_true", help="add a column naming the formula branch")
    _add_common(p)
    p.set_defaults(func=cmd_closedform)
    registry["closedform"] = p

    return parser, registry


_CONFIG_SKIP = {"config", "dump_config", "func", "command"}


def _config_dict(args) -> dict:
    out: dict = {"command": args.command}
    for dest, value in sorted(vars(args).items()):
        if dest in _CONFIG_SKIP:
            continue
        if callable(value):
            continue
        if isinstance(value, complex):
            out[dest] = _fmt_complex(value)
        elif isinstance(value, float):
            out[dest] = format(value, ".17g")
        elif isinstance(value, tuple):
            out[dest] = ",".join(str(v) for v in value)
        else:
            out[dest] = value
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, registry = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
            command = cfg.pop("command", None)
            if command != args.command:
                parser.error(f"--config: file is for command {command!r}, not {args.command!r}")
            sub = registry[args.command]
            known = {a.dest for a in sub._actions}
            unknown = set(cfg) - known
            if unknown:
                parser.error(f"--config: unknown keys {sorted(unknown)}")
            sub.set_defaults(**cfg)
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.dump_config:
            _write_text(args.dump_config, json.dumps(_config_dict(args), indent=2) + "\n")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateAngle as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
