"""Command line interface.

Exit codes: 0 success (or the inequality holds), 1 input or configuration
error, 2 the checked inequality is violated.

Scan CSV columns, in this order: t, beta, closed_form_gap, matrix_gap, holds.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import inequality_lab as lab
from .jsonfmt import csv_text, dumps, fmt_float
from .linalg_core import (
    DEFAULT_FLOOR,
    InvariantError,
    dump_matrix,
    load_density,
    load_observable,
)
from .monotone_metrics import parse_spec, upf_bound

EXIT_OK, EXIT_INPUT, EXIT_VIOLATED = 0, 1, 2

SCAN_HEADER = ["t", "beta", "closed_form_gap", "matrix_gap", "holds"]

COMMANDS = ("verify", "scan", "counterexample", "explore", "probe-g", "metric", "dump")

DEFAULTS = {
    "format": "text",
    "out": None,
    "floor": DEFAULT_FLOOR,
    "tolerance": lab.DEFAULT_TOL,
    "dims": "2,3,4",
    "trials": 1000,
    "seed": 0,
    "steps": 200,
    "t_max": 0.49,
    "log": False,
    "sampler": "random",
    "family": "ce",
    "t": 0.1,
    "dim": 3,
}
# scan starts where violations are visible for beta = -1; the search goes deeper
T_MIN_DEFAULT = {"scan": 1e-4, "counterexample": 1e-7}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    metric_spec: str | None = None
    metric_a: str | None = None
    metric_b: str | None = None
    state: str | None = None
    obs_a: str | None = None
    obs_b: str | None = None
    beta: list[float] = field(default_factory=list)
    t_min: float | None = None
    t_max: float = 0.49
    steps: int = 200
    log: bool = False
    trials: int = 1000
    dims: list[int] = field(default_factory=lambda: [2, 3, 4])
    seed: int = 0
    sampler: str = "random"
    tolerance: float = lab.DEFAULT_TOL
    floor: float = DEFAULT_FLOOR
    format: str = "text"
    out: str | None = None
    family: str = "ce"
    t: float = 0.1
    dim: int = 3
    dir: str | None = None

    def validate(self) -> None:
        c = self.command
        if self.format not in ("text", "json", "csv"):
            raise ConfigError(f"unknown output format {self.format!r}")
        if not self.floor > 0:
            raise ConfigError("floor must be positive")
        if not self.tolerance >= 0:
            raise ConfigError("tolerance must be nonnegative")
        for s in (self.metric_spec, self.metric_a, self.metric_b):
            if s is not None:
                parse_spec(s)
        if c in ("verify", "metric"):
            _need(self, "metric_spec", "state", "obs_a", "obs_b")
        if c in ("scan", "counterexample"):
            if not self.beta:
                raise ConfigError("--beta is required")
            if not 0 < self.t_min < self.t_max < 0.5:
                raise ConfigError(f"need 0 < t-min < t-max < 1/2, got {self.t_min}, {self.t_max}")
            if self.steps < 2:
                raise ConfigError(f"steps must be >= 2, got {self.steps}")
        if c == "counterexample" and any(not -1 <= b < 0 for b in self.beta):
            raise ConfigError("counterexample needs beta in [-1, 0)")
        if c in ("explore", "probe-g"):
            if self.trials < 1:
                raise ConfigError(f"trials must be >= 1, got {self.trials}")
            if not self.dims or min(self.dims) < 2:
                raise ConfigError("dims must be integers >= 2")
        if c == "explore":
            _need(self, "metric_spec")
            if self.sampler not in ("random", "ce"):
                raise ConfigError(f"unknown sampler {self.sampler!r}")
        if c == "probe-g":
            _need(self, "metric_a", "metric_b")
        if c == "dump":
            _need(self, "dir")
            if self.family not in ("ce", "remark", "random"):
                raise ConfigError(f"unknown family {self.family!r}")


def _need(cfg, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _floats(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def _ints(text) -> list[int]:
    if isinstance(text, list):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--out", default=argparse.SUPPRESS, help="write the report to PATH instead of stdout")
    g.add_argument("--format", choices=["text", "json", "csv"], default=argparse.SUPPRESS)
    g.add_argument("--config", default=argparse.SUPPRESS, help="JSON file of option defaults")
    g.add_argument("--floor", type=float, default=argparse.SUPPRESS, help="minimum admitted eigenvalue")

    parser = argparse.ArgumentParser(
        prog="qfi-uncertainty",
        description="Check uncertainty-principle inequalities against monotone-metric bounds.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    def io_args(p):
        p.add_argument("--state", help="density matrix JSON file")
        p.add_argument("--obs-a", dest="obs_a", help="observable A JSON file")
        p.add_argument("--obs-b", dest="obs_b", help="observable B JSON file")
        p.add_argument("--metric", dest="metric_spec", help="wyd:<beta>, bkm, hgamma:<gamma>, rld, wy, sld, bures")

    p = add("verify", "check S >= bound for one (rho, A, B)")
    io_args(p)
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)

    p = add("metric", "print g(A_rho, A_rho), g(B_rho, B_rho), g(A_rho, B_rho), area and bound")
    io_args(p)

    p = add("scan", "tabulate the counterexample-family gap over a t grid")
    p.add_argument("--beta", help="beta value(s), comma separated")
    p.add_argument("--t-min", dest="t_min", type=float, default=argparse.SUPPRESS)
    p.add_argument("--t-max", dest="t_max", type=float, default=argparse.SUPPRESS)
    p.add_argument("--steps", type=int, default=argparse.SUPPRESS)
    p.add_argument("--log", action="store_true", default=argparse.SUPPRESS, help="log-spaced t grid")
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)

    p = add("counterexample", "locate t with S < T_beta for beta in [-1, 0)")
    p.add_argument("--beta", help="beta value(s), comma separated")
    p.add_argument("--t-min", dest="t_min", type=float, default=argparse.SUPPRESS)
    p.add_argument("--t-max", dest="t_max", type=float, default=argparse.SUPPRESS)
    p.add_argument("--steps", type=int, default=argparse.SUPPRESS)

    p = add("explore", "sample instances and report the smallest gap (no verdict)")
    p.add_argument("--metric", dest="metric_spec")
    p.add_argument("--trials", type=int, default=argparse.SUPPRESS)
    p.add_argument("--dims", default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--sampler", choices=["random", "ce"], default=argparse.SUPPRESS)
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)

    p = add("probe-g", "compare G(f) for two catalog functions on sampled instances")
    p.add_argument("--metric-a", dest="metric_a")
    p.add_argument("--metric-b", dest="metric_b")
    p.add_argument("--trials", type=int, default=argparse.SUPPRESS)
    p.add_argument("--dims", default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)

    p = add("dump", "write rho.json, a.json, b.json for a named family")
    p.add_argument("--family", choices=["ce", "remark", "random"], default=argparse.SUPPRESS)
    p.add_argument("--t", type=float, default=argparse.SUPPRESS)
    p.add_argument("--dim", type=int, default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--dir", help="output directory")
    return parser


def _join_negative_values(argv):
    # argparse refuses "--beta -1,-0.5" because the value looks like an option
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--beta", "--t-min", "--t-max"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def make_config(argv=None) -> RunConfig:
    """Parse argv; flags override the optional --config file, which overrides defaults."""
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = vars(build_parser().parse_args(argv))
    except SystemExit as exc:
        if not exc.code:
            raise
        raise ConfigError("invalid command line") from None
    merged = dict(DEFAULTS)
    merged["t_min"] = T_MIN_DEFAULT.get(ns["command"])
    if "config" in ns:
        try:
            file_cfg = json.loads(Path(ns.pop("config")).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        merged.update({k.replace("-", "_"): v for k, v in file_cfg.items()})
    merged.update({k: v for k, v in ns.items() if v is not None})
    if "metric" in merged and merged.get("metric_spec") is None:
        merged["metric_spec"] = merged.pop("metric")
    merged.pop("metric", None)
    try:
        merged["beta"] = _floats(merged["beta"]) if merged.get("beta") is not None else []
        merged["dims"] = _ints(merged["dims"])
        known = RunConfig.__dataclass_fields__.keys()
        unknown = set(merged) - set(known)
        if unknown:
            raise ConfigError(f"unknown option(s): {', '.join(sorted(unknown))}")
        cfg = RunConfig(**merged)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _load_inputs(cfg):
    return (load_density(cfg.state, cfg.floor), load_observable(cfg.obs_a), load_observable(cfg.obs_b))


def cmd_verify(cfg):
    rho, a, b = _load_inputs(cfg)
    rep = lab.check(rho, a, b, parse_spec(cfg.metric_spec), cfg.tolerance)
    return rep.as_dict(), (EXIT_OK if rep.holds else EXIT_VIOLATED)


def cmd_metric(cfg):
    rho, a, b = _load_inputs(cfg)
    return upf_bound(parse_spec(cfg.metric_spec), rho, a, b).as_dict(), EXIT_OK


def scan_rows(betas, t_min, t_max, steps, log, tolerance, floor):
    grid = np.geomspace(t_min, t_max, steps) if log else np.linspace(t_min, t_max, steps)
    rows = []
    for beta in betas:
        for t in grid:
            t = float(t)
            closed = lab.ce_closed_form_gap(t, beta)
            mgap = lab.matrix_gap(t, beta, floor)
            rows.append([t, float(beta), closed, mgap, bool(mgap >= -tolerance)])
    return rows


def cmd_scan(cfg):
    rows = scan_rows(cfg.beta, cfg.t_min, cfg.t_max, cfg.steps, cfg.log, cfg.tolerance, cfg.floor)
    return {"header": SCAN_HEADER, "rows": rows}, EXIT_OK


def cmd_counterexample(cfg):
    recs = [lab.find_violation(b, cfg.t_min, cfg.t_max, cfg.steps, cfg.floor).as_dict() for b in cfg.beta]
    return (recs[0] if len(recs) == 1 else {"records": recs}), EXIT_OK


def cmd_explore(cfg):
    summ = lab.explore(parse_spec(cfg.metric_spec), cfg.dims, cfg.trials, cfg.seed,
                       cfg.sampler, cfg.tolerance, cfg.floor)
    return summ.as_dict(), EXIT_OK


def cmd_probe_g(cfg):
    rep = lab.g_monotonicity_probe(parse_spec(cfg.metric_a), parse_spec(cfg.metric_b), cfg.dims,
                                   cfg.trials, cfg.seed, cfg.tolerance, cfg.floor)
    return rep.as_dict(), EXIT_OK


def cmd_dump(cfg):
    if cfg.family == "ce":
        inst = lab.ce_family(cfg.t, cfg.floor)
    elif cfg.family == "remark":
        inst = lab.remark_family(cfg.t, cfg.floor)
    else:
        inst = lab.sample_instance(cfg.dim, cfg.seed, 0, cfg.floor)
    d = Path(cfg.dir)
    d.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, m in zip(("rho", "a", "b"), inst):
        paths[name] = str(d / f"{name}.json")
        dump_matrix(m, paths[name])
    return paths, EXIT_OK


HANDLERS = {
    "verify": cmd_verify,
    "metric": cmd_metric,
    "scan": cmd_scan,
    "counterexample": cmd_counterexample,
    "explore": cmd_explore,
    "probe-g": cmd_probe_g,
    "dump": cmd_dump,
}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _scalar_items(d, prefix=""):
    for k, v in d.items():
        if isinstance(v, dict):
            if k == "argmin":
                continue
            yield from _scalar_items(v, f"{prefix}{k}.")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            continue
        else:
            yield prefix + k, v


def render(command: str, result: dict, fmt: str) -> str:
    if fmt == "json":
        if command == "scan":
            result = {"columns": result["header"],
                      "rows": [dict(zip(result["header"], r)) for r in result["rows"]]}
        return dumps(result) + "\n"
    if fmt == "csv":
        if command == "scan":
            return csv_text(result["header"], result["rows"])
        if "records" in result:
            recs = result["records"]
            return csv_text(list(recs[0]), [list(r.values()) for r in recs])
        items = list(_scalar_items(result))
        return csv_text([k for k, _ in items], [[v for _, v in items]])
    # text
    if command == "scan":
        lines = ["  ".join(f"{h:>24}" for h in result["header"])]
        for r in result["rows"]:
            lines.append("  ".join(f"{(fmt_float(v) if isinstance(v, float) else str(v)):>24}" for v in r))
        return "\n".join(lines) + "\n"
    if "records" in result:
        return "\n".join(render(command, r, fmt) for r in result["records"])
    lines = []
    for k, v in _scalar_items(result):
        if isinstance(v, float):
            v = fmt_float(v)
        elif isinstance(v, list):
            v = ",".join(str(x) for x in v)
        lines.append(f"{k:<20} {v}")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> tuple[str, int]:
    result, code = HANDLERS[cfg.command](cfg)
    return render(cfg.command, result, cfg.format), code


def main(argv=None) -> int:
    try:
        cfg = make_config(argv)
        text, code = run(cfg)
    except (ConfigError, InvariantError, lab.NoViolationFound, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except lab.TheoremViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATED
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
