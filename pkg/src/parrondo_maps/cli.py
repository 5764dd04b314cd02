"""Command-line front end: verify the construction, run orbits and experiments.

Commands
--------
verify   check the profile conditions, the certified composition gains and
         (for k >= 3) the cone condition; exit 0 only if everything passes
orbit    iterate a named map or a word and write the trace (CSV or JSON)
ifs      run the randomized-composition Monte Carlo and write statistics
sweep    tabulate admissibility and empirical growth over (p, a) grids

Exit codes: 0 success / checks passed, 1 a verification check failed,
2 malformed configuration, 3 output could not be written.

Flags override values from an optional JSON config file (--config); every
output embeds the fully resolved configuration and the library version, and
rerunning an echoed configuration reproduces the output byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circle import Angle, CircleInterval
from .dynamics import classify_orbit, iterate
from .errors import ParrondoError, WindowTooLargeError
from .highdim import apply_h, apply_h_k, apply_j_k, check_cone_condition
from .ifs import (
    IfsConfig,
    expectation_recurrence_check,
    monte_carlo,
    theoretical_bounds,
)
from .planar import (
    CylPoint,
    MapWord,
    apply_f0,
    apply_f1,
    polynomial_demo_step,
    composition_radial_gain,
    word_step,
)
from .profiles import (
    AngularProfile,
    RadialProfile,
    default_profiles,
    trapping_interval,
    validate_profiles,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_WRITE_FAILED = 3


class ConfigError(Exception):
    pass


_COMMON = {"a": 5.0, "w": 0.125, "d": 0.25, "seed": 0, "out": None, "format": None}

_DEFAULTS = {
    "verify": {**_COMMON, "k": 2, "grid": 100_000, "samples": 100_000},
    "orbit": {
        **_COMMON,
        "map": "f0",
        "word": None,
        "start": "0,0.25",
        "start_cart": None,
        "steps": 1000,
        "k": 3,
        "window": 100,
        "tol": 1e-3,
    },
    "ifs": {
        **_COMMON,
        "p": 0.5,
        "horizon": 2000,
        "sequences": 1000,
        "escape_threshold": 100.0,
        "start": "0,0.25",
    },
    "sweep": {
        **_COMMON,
        "p_grid": None,
        "a_grid": None,
        "horizon": 400,
        "sequences": 100,
    },
}

_FORMAT_DEFAULT = {"verify": "json", "orbit": "csv", "ifs": "json", "sweep": "csv"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parrondo",
        description="Attracting map pairs with repelling compositions: verification and experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--a", type=float, help="radial expansion parameter (default 5)")
        p.add_argument("--w", type=float, help="slow-arc half width in turns (default 1/8)")
        p.add_argument("--d", type=float, help="angular drift amplitude in turns (default 1/4)")
        p.add_argument("--seed", type=int, help="root seed for seeded sampling (default 0)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], help="output format")
        p.add_argument("--config", help="JSON config file; flags override its values")

    pv = sub.add_parser("verify", help="run the structural checks and certified gain bounds")
    add_common(pv)
    pv.add_argument("--k", type=int, help="dimension; k >= 3 adds the cone condition check")
    pv.add_argument("--grid", type=int, help="grid size for the gain certificates")
    pv.add_argument("--samples", type=int, help="sample count for the cone check")
    pv.set_defaults(handler=cmd_verify)

    po = sub.add_parser("orbit", help="iterate a map and write the trace")
    add_common(po)
    po.add_argument(
        "--map",
        choices=["f0", "f1", "h", "hk", "jk", "polyf", "polyg"],
        help="named map to iterate (default f0)",
    )
    po.add_argument("--word", help="composition word such as 'f0,f1' or '01'; overrides --map")
    po.add_argument("--start", help="cylinder start 'r,theta' (default '0,0.25')")
    po.add_argument("--start-cart", dest="start_cart", help="Cartesian start 'x1,x2,...' for hk/jk/cgm18 maps")
    po.add_argument("--steps", type=int, help="number of iterations (default 1000)")
    po.add_argument("--k", type=int, help="dimension for hk/jk (default 3)")
    po.add_argument("--window", type=int, help="classification window (default 100)")
    po.add_argument("--tol", type=float, help="classification tolerance (default 1e-3)")
    po.set_defaults(handler=cmd_orbit)

    pi = sub.add_parser("ifs", help="randomized-composition Monte Carlo")
    add_common(pi)
    pi.add_argument("--p", type=float, help="probability of the first map (default 0.5)")
    pi.add_argument(
        "--horizon",
        "--steps",
        dest="horizon",
        type=int,
        help="steps per sequence, even (default 2000)",
    )
    pi.add_argument("--sequences", type=int, help="number of sequences (default 1000)")
    pi.add_argument("--escape-threshold", dest="escape_threshold", type=float,
                    help="terminal gain counted as escape (default 100)")
    pi.add_argument("--start", help="cylinder start 'r,theta' (default '0,0.25')")
    pi.set_defaults(handler=cmd_ifs)

    ps = sub.add_parser("sweep", help="admissibility and growth over (p, a) grids")
    add_common(ps)
    ps.add_argument("--p-grid", dest="p_grid", help="comma list '0.1,0.5' or range 'start:stop:count'")
    ps.add_argument("--a-grid", dest="a_grid", help="comma list or range of expansion values")
    ps.add_argument("--horizon", type=int, help="steps per sequence in each cell (default 400)")
    ps.add_argument("--sequences", type=int, help="sequences per cell (default 100)")
    ps.set_defaults(handler=cmd_sweep)

    return parser


def _load_file_config(path: str) -> dict:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("config file must hold a JSON object")
    return obj


def _resolve(args: argparse.Namespace) -> dict:
    defaults = _DEFAULTS[args.command]
    file_cfg = _load_file_config(args.config) if args.config else {}
    unknown = set(file_cfg) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    params = {"command": args.command}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            params[key] = flag
        elif key in file_cfg:
            params[key] = file_cfg[key]
        else:
            params[key] = default
    if params["format"] is None:
        params["format"] = _FORMAT_DEFAULT[args.command]
    return params


def _echo_config(params: dict) -> dict:
    """The reproducibility record: everything except the output destination."""
    return {k: v for k, v in params.items() if k not in ("out", "config")}


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(part) for part in str(text).split(",") if part != ""]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def _parse_grid(text) -> list[float]:
    if text is None:
        raise ConfigError("missing grid specification")
    text = str(text)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range grids use 'start:stop:count', got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad range grid {text!r}") from exc
        if count < 1:
            raise ConfigError("grid count must be positive")
        return [float(x) for x in np.linspace(start, stop, count)]
    values = _parse_floats(text)
    if not values:
        raise ConfigError(f"empty grid {text!r}")
    return values


def _write(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    Path(out).write_text(text)


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_header(config: dict, columns: str) -> list[str]:
    return [
        f"# version: {__version__}",
        f"# config: {json.dumps(config, sort_keys=True)}",
        columns,
    ]


def cmd_verify(params: dict) -> int:
    a, w, d, k = float(params["a"]), float(params["w"]), float(params["d"]), int(params["k"])
    if not 0.0 < w < 0.5:
        raise ConfigError(f"w must lie in (0, 1/2) to describe an arc, got {w}")
    # Raw profiles on purpose: out-of-range parameters must surface as failed
    # checks with witnesses, not as exceptions.
    rp = RadialProfile(a, w)
    ap = AngularProfile(d, w)
    report = validate_profiles(rp, ap, require_even=k >= 3)
    grid = int(params["grid"])
    gain_01 = composition_radial_gain(MapWord.parse("f0,f1"), rp, ap, grid_n=grid)
    gain_10 = composition_radial_gain(MapWord.parse("f1,f0"), rp, ap, grid_n=grid)
    cone = None
    if k >= 3:
        cone = check_cone_condition(rp, ap, k, n_samples=int(params["samples"]), seed=int(params["seed"]))
    passed = (
        report.passed
        and gain_01.certified
        and gain_10.certified
        and gain_01.min_gain > 0.0
        and gain_10.min_gain > 0.0
        and (cone is None or cone.holds)
    )
    payload = {
        "version": __version__,
        "config": _echo_config(params),
        "profile_checks": report.to_dict()["checks"],
        "compositions": {"f0,f1": gain_01.to_dict(), "f1,f0": gain_10.to_dict()},
        "cone": None if cone is None else cone.to_dict(),
        "passed": passed,
    }
    _write(params["out"], _dump_json(payload))
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _parse_cyl_start(text) -> CylPoint:
    values = _parse_floats(text)
    if len(values) != 2:
        raise ConfigError(f"cylinder start needs 'r,theta', got {text!r}")
    return CylPoint(values[0], Angle(values[1]))


def _build_orbit(params: dict):
    """Resolve (step function, start point, trapping arc) from orbit parameters."""
    rp, ap = default_profiles(float(params["a"]), float(params["w"]), float(params["d"]))
    name = params["map"]
    if params["word"]:
        word = MapWord.parse(str(params["word"]))
        return word_step(word, rp, ap), _parse_cyl_start(params["start"]), None
    if name == "f0":
        return (lambda p: apply_f0(rp, ap, p)), _parse_cyl_start(params["start"]), trapping_interval(rp)
    if name == "f1":
        trap = trapping_interval(rp).translate(0.5)
        return (lambda p: apply_f1(rp, ap, p)), _parse_cyl_start(params["start"]), trap
    if name == "h":
        trap = CircleInterval(Angle(0.5), rp.w / (2.0 * rp.a))
        return (lambda p: apply_h(rp, ap, p)), _parse_cyl_start(params["start"]), trap
    if name in ("hk", "jk"):
        k = int(params["k"])
        if params["start_cart"] is not None:
            start = np.asarray(_parse_floats(params["start_cart"]), dtype=float)
            if start.shape[0] != k:
                raise ConfigError(f"--start-cart has {start.shape[0]} coordinates but k = {k}")
        else:
            start = np.ones(k)
        fn = apply_h_k if name == "hk" else apply_j_k
        return (lambda x: fn(rp, ap, x)), start, None
    if name in ("polyf", "polyg"):
        which = "f" if name.endswith("f") else "g"
        if params["start_cart"] is not None:
            start = np.asarray(_parse_floats(params["start_cart"]), dtype=float)
        else:
            start = np.array([0.1, 0.0])
        if start.shape[0] != 2:
            raise ConfigError("the polynomial demo maps are planar; --start-cart needs 'x,y'")

        def step(xy):
            return np.asarray(polynomial_demo_step(float(xy[0]), float(xy[1]), which))

        return step, start, None
    raise ConfigError(f"unknown map {name!r}")


def _trace_rows(trace) -> list[str]:
    rows = []
    for i, (r, t) in enumerate(zip(trace.rs, trace.thetas)):
        gain = "" if i == 0 else repr(float(trace.gains[i - 1]))
        rows.append(f"{i},{float(r)!r},{float(t)!r},{gain}")
    return rows


def cmd_orbit(params: dict) -> int:
    step, start, trap = _build_orbit(params)
    trace = iterate(step, start, int(params["steps"]), trap=trap)
    try:
        label, rate = classify_orbit(trace, int(params["window"]), float(params["tol"]))
    except WindowTooLargeError as exc:
        raise ConfigError(str(exc)) from exc
    print(
        f"classification={label.value} rate={rate:.6g} "
        f"steps={trace.n_steps} trap_entry={trace.entered_trap_at}"
    )
    config = _echo_config(params)
    if params["format"] == "json":
        payload = {
            "version": __version__,
            "config": config,
            "points": [
                [i, float(r), float(t)]
                for i, (r, t) in enumerate(zip(trace.rs, trace.thetas))
            ],
            "gains": [float(g) for g in trace.gains],
            "classification": label.value,
            "rate": rate,
        }
        _write(params["out"], _dump_json(payload))
    else:
        lines = _csv_header(config, "step,r,theta,gain") + _trace_rows(trace)
        _write(params["out"], "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ifs(params: dict) -> int:
    try:
        config = IfsConfig(
            p=float(params["p"]),
            a=float(params["a"]),
            seed=int(params["seed"]),
            horizon=int(params["horizon"]),
            n_sequences=int(params["sequences"]),
            w=float(params["w"]),
            d=float(params["d"]),
            escape_threshold=float(params["escape_threshold"]),
        )
    except (ValueError, ParrondoError) as exc:
        raise ConfigError(str(exc)) from exc
    start = _parse_cyl_start(params["start"])
    stats = monte_carlo(config, start)
    bounds = theoretical_bounds(config.p, config.a)
    recurrence = expectation_recurrence_check(config, stats=stats)
    echo = _echo_config(params)
    if params["format"] == "csv":
        lines = _csv_header(echo, "sequence_id,m,k_m,delta_2m")
        for i, (k_m, delta) in enumerate(zip(stats.k_counts, stats.deltas)):
            lines.append(f"{i},{stats.m},{int(k_m)},{float(delta)!r}")
        _write(params["out"], "\n".join(lines) + "\n")
        return EXIT_OK
    payload = {
        "version": __version__,
        "config": echo,
        "bounds": bounds.to_dict(),
        "admissible": config.admissible,
        "label": "ADMISSIBLE" if config.admissible else "INADMISSIBLE",
        "stats": stats.to_dict(),
        "recurrence": recurrence.to_dict(),
    }
    _write(params["out"], _dump_json(payload))
    return EXIT_OK


def _admissibility_label(p: float, a: float) -> str:
    margin = a * p * (1.0 - p) - 1.0
    if abs(margin) <= 1e-12:
        return "boundary"
    return "admissible" if margin > 0.0 else "inadmissible"


def cmd_sweep(params: dict) -> int:
    ps = _parse_grid(params["p_grid"])
    a_values = _parse_grid(params["a_grid"])
    for p in ps:
        if not 0.0 < p < 1.0:
            raise ConfigError(f"grid probability {p} outside (0, 1)")
    echo = _echo_config(params)
    lines = _csv_header(
        echo, "p,a,a_min,K,pair_slope_lb,empirical_slope,escape_fraction,admissibility"
    )
    for p in ps:
        for a in a_values:
            bounds = theoretical_bounds(p, a)
            try:
                config = IfsConfig(
                    p=p,
                    a=a,
                    seed=int(params["seed"]),
                    horizon=int(params["horizon"]),
                    n_sequences=int(params["sequences"]),
                    w=float(params["w"]),
                    d=float(params["d"]),
                )
            except (ValueError, ParrondoError) as exc:
                raise ConfigError(str(exc)) from exc
            stats = monte_carlo(config)
            lines.append(
                f"{p!r},{a!r},{bounds.a_min!r},{bounds.K!r},{bounds.pair_slope_lb!r},"
                f"{stats.mean_pair_gain!r},{stats.escape_fraction!r},"
                f"{_admissibility_label(p, a)}"
            )
    _write(params["out"], "\n".join(lines) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = _resolve(args)
        return args.handler(params)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except (ValueError, ParrondoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_WRITE_FAILED


if __name__ == "__main__":
    sys.exit(main())
