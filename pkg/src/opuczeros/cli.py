"""Command-line front end.

    opuczeros COMMAND [--config run.json] [--set key=value ...] [--output PATH]

COMMAND is one of basis, grid, expect, mc, converge, selftest, or ``run`` to
take it from the config's ``command`` field.  ``--set`` values are parsed as
JSON when possible (``--set n=5 --set region='{"region":"disk","radius":1}'``).
Outputs go under $OPUCZEROS_OUTPUT_DIR (default: current directory) unless an
absolute path is given.

Exit status: 0 success, 1 selftest failure, 2 invalid config, 3 numerical error.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import math
import os
import sys
import traceback
from pathlib import Path

from . import weights as W
from .errors import OpucError
from .intensity import DEFAULT_BAND, METHODS, convergence_profile, intensity_grid, limit_intensity
from .opuc import OpucBasis, build_basis
from .randompoly import monte_carlo_expected_zeros
from .regions import integrate_intensity, region_from_dict, region_to_dict
from .selftest import run_selftest

COMMANDS = ("basis", "grid", "expect", "mc", "converge", "selftest")
OUTPUT_ENV = "OPUCZEROS_OUTPUT_DIR"

COMMON = {
    "weight": {"family": "uniform"},
    "N": None,
    "moment_tol": 1e-13,
    "band": None,
    "cache": True,
}

DEFAULTS = {
    "basis": {"N": 20, "output": "basis.json"},
    "grid": {"n": 5, "x_range": [-2.0, 2.0], "y_range": [-2.0, 2.0], "steps": [81, 81],
             "method": "auto", "output": "grid.csv"},
    "expect": {"n": 5, "region": {"region": "disk", "center": [0, 0], "radius": 1.0},
               "resolution": 16, "tol": 1e-3, "max_resolution": 2048,
               "output": "expect.json"},
    "mc": {"n": 5, "region": {"region": "disk", "center": [0, 0], "radius": 1.0},
           "trials": 20000, "seed": 0, "quadrature": True, "resolution": 16, "tol": 1e-3,
           "max_resolution": 2048, "output": "mc.json"},
    "converge": {"points": [[0.5, 0.0], [2.0, 0.0]], "n_list": [1, 5, 10, 20, 40],
                 "output": "converge.csv"},
    "selftest": {},
}


class ConfigError(ValueError):
    pass


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def resolve_config(command: str | None, raw: dict, overrides=()) -> dict:
    cfg = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        cfg[key.strip()] = _parse_value(val)
    cmd = command if command not in (None, "run") else cfg.get("command")
    if cmd not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {cmd!r}")
    if command not in (None, "run") and cfg.get("command", cmd) != cmd:
        raise ConfigError(f"config is for command {cfg['command']!r}, not {cmd!r}")
    allowed = set(COMMON) | set(DEFAULTS[cmd]) | {"command"}
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys for {cmd}: {sorted(unknown)}")
    out = {"command": cmd, **copy.deepcopy(COMMON), **copy.deepcopy(DEFAULTS[cmd])}
    out.update({k: v for k, v in cfg.items() if k != "command"})
    _validate(out)
    return out


def _need_int(cfg, key, lo=0):
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        raise ConfigError(f"{key} must be an integer >= {lo}, got {v!r}")


def _validate(cfg):
    try:
        W.WeightSpec.from_dict(cfg["weight"])
    except (TypeError, ValueError, AttributeError) as e:
        raise ConfigError(f"invalid weight: {e}") from None
    cmd = cfg["command"]
    need = {
        "basis": cfg.get("N") or 0,
        "grid": cfg.get("n", 0) + 1,
        "expect": cfg.get("n", 0) + 1,
        "mc": cfg.get("n", 0) + 1,
        "converge": max(cfg.get("n_list") or [0]) + 1,
        "selftest": 0,
    }[cmd]
    if cfg["N"] is None:
        cfg["N"] = need
    _need_int(cfg, "N")
    if cfg["N"] < need:
        raise ConfigError(f"N={cfg['N']} is below the degree this command needs ({need})")
    if cfg["band"] is not None and not (isinstance(cfg["band"], (int, float)) and cfg["band"] > 0):
        raise ConfigError("band must be a positive number")
    if not (isinstance(cfg["moment_tol"], (int, float)) and cfg["moment_tol"] > 0):
        raise ConfigError("moment_tol must be positive")
    if "n" in cfg:
        _need_int(cfg, "n", 1 if cmd == "mc" else 0)
    if "region" in cfg:
        try:
            region_from_dict(cfg["region"])
        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigError(f"invalid region: {e}") from None
    if cmd == "grid":
        if cfg["method"] not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        try:
            nx, ny = cfg["steps"]
            lo_x, hi_x = cfg["x_range"]
            lo_y, hi_y = cfg["y_range"]
        except (TypeError, ValueError):
            raise ConfigError("x_range, y_range and steps must be pairs") from None
        if not (isinstance(nx, int) and isinstance(ny, int) and nx > 0 and ny > 0):
            raise ConfigError("steps must be positive integers")
    if cmd in ("expect", "mc"):
        _need_int(cfg, "resolution", 16)
        _need_int(cfg, "max_resolution", 16)
    if cmd == "mc":
        _need_int(cfg, "trials", 100)
        _need_int(cfg, "seed", 0)
    if cmd == "converge":
        if not cfg["n_list"] or not all(isinstance(k, int) and k >= 0 for k in cfg["n_list"]):
            raise ConfigError("n_list must be a nonempty list of nonnegative integers")
        try:
            pts = [complex(x, y) for x, y in cfg["points"]]
        except (TypeError, ValueError):
            raise ConfigError("points must be a list of [x, y] pairs") from None
        if any(abs(abs(p) - 1) < 1e-9 for p in pts):
            raise ConfigError("convergence points must avoid |z| = 1")


def _out_path(name: str) -> Path:
    p = Path(name)
    if not p.is_absolute():
        p = Path(os.environ.get(OUTPUT_ENV, ".")) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _finite(obj):
    # strict JSON has no inf/nan; an unbounded tail or z-score is written as null
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _dump(obj) -> str:
    return json.dumps(_finite(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _cache_key(cfg) -> str:
    ident = {"weight": cfg["weight"], "N": cfg["N"], "moment_tol": cfg["moment_tol"]}
    return hashlib.sha256(json.dumps(ident, sort_keys=True).encode()).hexdigest()[:16]


def load_basis(cfg) -> OpucBasis:
    cache = _out_path(".opuczeros-cache") if cfg["cache"] else None
    if cache is not None:
        path = cache / f"basis-{_cache_key(cfg)}.json"
        if path.exists():
            return OpucBasis.loads(path.read_text())
    spec = W.WeightSpec.from_dict(cfg["weight"])
    basis = build_basis(W.compute_moments(spec, cfg["N"], cfg["moment_tol"]))
    if cache is not None:
        cache.mkdir(parents=True, exist_ok=True)
        path.write_text(basis.dumps())
    return basis


def cmd_basis(cfg):
    basis = load_basis(cfg)
    path = _out_path(cfg["output"])
    path.write_text(_dump({"config": cfg, "basis": basis.to_dict()}))
    return [path]


def cmd_grid(cfg):
    basis = load_basis(cfg)
    grid = intensity_grid(basis, cfg["n"], cfg["x_range"], cfg["y_range"], cfg["steps"],
                          cfg["method"], cfg["band"], cfg["weight"])
    path = _out_path(cfg["output"])
    path.write_text(grid.to_csv())
    side = path.with_suffix(".json")
    side.write_text(_dump({**grid.sidecar(), "config": cfg}))
    return [path, side]


def _expect(basis, cfg):
    region = region_from_dict(cfg["region"])
    res = integrate_intensity(basis, cfg["n"], region, cfg["resolution"], cfg["tol"],
                              cfg["max_resolution"])
    return region, res


def cmd_expect(cfg):
    basis = load_basis(cfg)
    region, res = _expect(basis, cfg)
    path = _out_path(cfg["output"])
    path.write_text(_dump({
        "config": cfg,
        "n": cfg["n"],
        "region": region_to_dict(region),
        "expected_zeros": res.value,
        "residual": res.residual,
        "resolution": res.resolution,
        "tail_bound": res.tail_bound,
    }))
    return [path]


def cmd_mc(cfg):
    basis = load_basis(cfg)
    region = region_from_dict(cfg["region"])
    ref = _expect(basis, cfg)[1].value if cfg["quadrature"] else None
    rep = monte_carlo_expected_zeros(basis, cfg["n"], region, cfg["trials"], cfg["seed"], ref)
    path = _out_path(cfg["output"])
    path.write_text(_dump({**rep.to_dict(), "config": cfg}))
    return [path]


def cmd_converge(cfg):
    basis = load_basis(cfg)
    band = DEFAULT_BAND if cfg["band"] is None else cfg["band"]
    lines = ["x,y,n,h,limit,rel_dev"]
    for x, y in cfg["points"]:
        z = complex(x, y)
        lim = limit_intensity(z)
        for n, h, dev in convergence_profile(basis, z, cfg["n_list"], band):
            lines.append(",".join([repr(float(x)), repr(float(y)), str(n),
                                   repr(h), repr(lim), repr(dev)]))
    path = _out_path(cfg["output"])
    path.write_text("\n".join(lines) + "\n")
    side = path.with_suffix(".json")
    side.write_text(_dump({"config": cfg}))
    return [path, side]


HANDLERS = {
    "basis": cmd_basis,
    "grid": cmd_grid,
    "expect": cmd_expect,
    "mc": cmd_mc,
    "converge": cmd_converge,
}


def _origin(exc) -> str:
    """Name of the innermost package module in the traceback."""
    pkg = Path(__file__).parent
    name = "opuczeros"
    for frame in traceback.extract_tb(exc.__traceback__):
        p = Path(frame.filename)
        if p.parent == pkg:
            name = p.stem
    return name


def run(command: str | None, config: dict, overrides=(), out=print) -> int:
    try:
        cfg = resolve_config(command, config, overrides)
    except ConfigError as e:
        print(f"error: invalid config: {e}", file=sys.stderr)
        return 2
    if cfg["command"] == "selftest":
        return 0 if run_selftest(out) else 1
    try:
        paths = HANDLERS[cfg["command"]](cfg)
    except OpucError as e:
        print(f"error: numerical failure in {_origin(e)}: {type(e).__name__}: {e}",
              file=sys.stderr)
        return 3
    for p in paths:
        out(f"wrote {p}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="opuczeros", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS + ("run",))
    ap.add_argument("-c", "--config", help="JSON config file")
    ap.add_argument("--set", dest="overrides", action="append", default=[],
                    metavar="KEY=VALUE", help="override a top-level config field")
    ap.add_argument("-o", "--output", help="output path (shortcut for --set output=...)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    raw = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            print(f"error: cannot read config: {e}", file=sys.stderr)
            return 2
        if not isinstance(raw, dict):
            print("error: config must be a JSON object", file=sys.stderr)
            return 2
    overrides = list(args.overrides)
    if args.output:
        overrides.append(f"output={json.dumps(args.output)}")
    return run(args.command, raw, overrides)


if __name__ == "__main__":
    sys.exit(main())
