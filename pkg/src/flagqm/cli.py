"""Command-line front end.

    flagqm bellswap --backend both --out report.json
    flagqm map-state psi.txt --out psi_real.txt
    flagqm map-operator A.txt --out A_real.txt
    flagqm verify --trials 200 --seed 7
    flagqm --config run.cfg

Exit status: 0 all checks pass, 1 a check failed, 2 malformed config or
arguments, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, fields, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, bellswap, verify
from .complexqm import ComplexOperator, ComplexState
from .fileio import (
    FileFormatError,
    dumps,
    format_compact,
    format_complex,
    read_payload,
    to_object,
)
from .realmap import RealOperator, RealState, canonicalize, s_inv, s_map, t_inv_left, t_map
from .tensor_core import ATOL, max_abs

COMMANDS = ("bellswap", "map-state", "map-operator", "verify")
BACKEND_CHOICES = ("complex", "real", "both")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line, self.key, self.message = line, key, message
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(key)
        super().__init__(": ".join(where + [message]))


@dataclass
class RunConfig:
    command: str = "verify"
    backend: str = "both"
    input: str | None = None
    output: str | None = None
    seed: int = 0
    trials: int = 200
    tolerance: float = ATOL
    suites: list[str] | None = None

    def backends(self) -> list[str]:
        return list(bellswap.BACKENDS) if self.backend == "both" else [self.backend]

    def validate(self, lines: dict | None = None) -> "RunConfig":
        lines = lines or {}

        def fail(key, msg):
            raise ConfigError(msg, lines.get(key), key)

        if self.command not in COMMANDS:
            fail("command", f"command must be one of {', '.join(COMMANDS)}")
        if self.backend not in BACKEND_CHOICES:
            fail("backend", f"backend must be one of {', '.join(BACKEND_CHOICES)}")
        if not self.tolerance > 0:
            fail("tolerance", "tolerance must be positive")
        if self.trials < 1:
            fail("trials", "trials must be at least 1")
        if self.seed < 0:
            fail("seed", "seed must be a non-negative integer")
        known = [name for name, *_ in verify.SUITES]
        for s in self.suites or []:
            if s not in known:
                fail("suites", f"unknown suite {s!r}")
        if self.command.startswith("map-"):
            if not self.input:
                fail("input", f"{self.command} needs an input file")
            if not self.output:
                fail("output", f"{self.command} needs an output file")
        return self


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str, lineno: int):
    kind = _TYPES[key]
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if "list" in kind:
            if not (raw.startswith("[") and raw.endswith("]")):
                raise ValueError("expected a [a, b, ...] list")
            inner = raw[1:-1].strip()
            return [item.strip().strip("\"'") for item in inner.split(",")] if inner else []
    except ValueError as exc:
        raise ConfigError(str(exc), lineno, key) from None
    return raw.strip("\"'")


def parse_config(text: str) -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment; unknown keys are errors.

    ``backend`` also accepts a list, ``[complex, real]`` meaning ``both``.
    """
    values, lines = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError("expected 'key = value'", lineno)
        if key == "tol":
            key = "tolerance"
        if key not in _TYPES:
            raise ConfigError(f"unknown key {key!r}", lineno, key)
        if key in values:
            raise ConfigError("duplicate key", lineno, key)
        if key == "backend" and raw.strip().startswith("["):
            items = sorted(_parse_value("suites", raw, lineno))
            if items == ["complex", "real"]:
                values[key] = "both"
            elif len(items) == 1:
                values[key] = items[0]
            else:
                raise ConfigError(f"backend must be one of {', '.join(BACKEND_CHOICES)}", lineno, key)
        else:
            values[key] = _parse_value(key, raw, lineno)
        lines[key] = lineno
    return RunConfig(**values).validate(lines)


# --------------------------------------------------------------- commands

def _check(name, value, reference, tol, provenance, residual=None) -> dict:
    residual = abs(value - reference) if residual is None else residual
    return {
        "name": name,
        "value": value,
        "reference": reference,
        "provenance": provenance,
        "max_residual": residual,
        "passed": bool(residual <= tol),
    }


def cmd_bellswap(cfg: RunConfig) -> tuple[list, dict]:
    checks, results, tables = [], {}, {}
    tol = cfg.tolerance
    for backend in cfg.backends():
        table, rep = bellswap.run(backend)
        tables[backend] = table
        results[backend] = rep.to_dict()
        checks.append(_check(f"{backend}.T", rep.total, bellswap.QUANTUM_VALUE, tol, "published: T = 6 sqrt 2"))
        for b, v in rep.t_b.items():
            checks.append(_check(f"{backend}.T_{b}", v, bellswap.QUANTUM_VALUE, tol, "published: T_b = 6 sqrt 2"))
        for b, v in rep.p_b.items():
            checks.append(_check(f"{backend}.P_{b}", v, 0.25, tol, "published: P(b) = 1/4"))
        for (x, z), sign in bellswap.REFERENCE_S00.items():
            v = rep.s_conditional["00"][x, z]
            checks.append(_check(f"{backend}.S00_{x}{z}", v, sign / np.sqrt(2), tol, "published: S-value table"))
        norm = table.normalization()
        checks.append(_check(f"{backend}.normalization", float(norm.mean()), 1.0, tol, "trivial",
                             residual=max_abs(norm - 1)))
        marg = table.marginal_b()
        checks.append(_check(f"{backend}.no_signalling_P_b", 0.25, 0.25, tol, "published",
                             residual=max_abs(marg - 0.25)))
    if len(tables) == 2:
        diff = max_abs(tables["complex"].p - tables["real"].p)
        results["differential"] = {"max_abs_entry_difference": diff, "entries": int(tables["real"].p.size)}
        checks.append(_check("differential.tables", diff, 0.0, tol, "derived", residual=diff))
    if "real" in tables:
        res = max_abs(bellswap.conditional_state_ac() - bellswap.expected_conditional_state_ac())
        checks.append(_check("real.conditional_state_AC_b00", res, 0.0, tol, "published: post-measurement state",
                             residual=res))
    return checks, results


def cmd_verify(cfg: RunConfig) -> tuple[list, dict]:
    names = cfg.suites or [name for name, *_ in verify.SUITES]
    checks = []
    for name in names:
        c = verify.run_suite(name, cfg.seed, cfg.trials, cfg.tolerance)
        checks.append({
            "name": c.name,
            "value": c.residual,
            "reference": c.reference,
            "provenance": c.provenance,
            "max_residual": c.residual,
            "trials": c.trials,
            "passed": c.passed,
        })
    return checks, {"suites": len(checks), "generator": "numpy PCG64 via SeedSequence(seed, spawn_key=(suite,))"}


def cmd_map_state(cfg: RunConfig) -> tuple[list, dict]:
    payload = read_payload(cfg.input)
    if payload.obj != "state":
        raise FileFormatError("map-state expects a state file")
    obj = to_object(payload)
    tol = cfg.tolerance
    checks = []
    if isinstance(obj, ComplexState):
        out = s_map(obj)
        text = format_compact(out)
        checks.append(_check("input_normalized", obj.norm(), 1.0, tol, "trivial"))
        checks.append(_check("round_trip", 0.0, 0.0, tol, "trivial",
                             residual=max_abs(s_inv(out).amplitudes - obj.amplitudes)))
        direction = "complex -> compact-real"
    elif isinstance(obj, RealState):
        out = s_inv(obj)
        text = format_complex(out)
        checks.append(_check("input_normalized", obj.norm(), 1.0, tol, "trivial"))
        direction = "compact-real -> complex"
    else:
        out = canonicalize(obj, payload.shape, tol)
        text = format_compact(out)
        direction = "real (expanded) -> compact-real canonical"
    _write(cfg.output, text)
    return checks, {"direction": direction, "output": cfg.output}


def cmd_map_operator(cfg: RunConfig) -> tuple[list, dict]:
    payload = read_payload(cfg.input)
    if payload.obj != "operator":
        raise FileFormatError("map-operator expects an operator file")
    obj = to_object(payload)
    tol = cfg.tolerance
    checks = []
    if isinstance(obj, ComplexOperator):
        out = t_map(obj)
        text = format_compact(out)
        checks.append(_check("left_inverse", 0.0, 0.0, tol, "trivial",
                             residual=max_abs(t_inv_left(out).matrix - obj.matrix)))
        direction = "complex -> compact-real"
    elif isinstance(obj, RealOperator):
        text = format_complex(t_inv_left(obj))
        direction = "compact-real -> complex"
    else:
        text = format_complex(t_inv_left(obj, payload.shape, tol))
        direction = "real (expanded) -> complex"
    _write(cfg.output, text)
    return checks, {"direction": direction, "output": cfg.output}


def _write(path, text: str) -> None:
    Path(path).write_text(text)


HANDLERS = {
    "bellswap": cmd_bellswap,
    "verify": cmd_verify,
    "map-state": cmd_map_state,
    "map-operator": cmd_map_operator,
}


def build_report(cfg: RunConfig, checks: list, results: dict) -> dict:
    return {
        "tool": f"flagqm {__version__}",
        "command": cfg.command,
        "config": asdict(cfg),
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
        "results": results,
        "reference_constants": {
            "quantum_value_6sqrt2": bellswap.QUANTUM_VALUE,
            "real_tensor_product_bound": bellswap.REAL_TENSOR_BOUND,
        },
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def run(cfg: RunConfig) -> tuple[int, dict]:
    checks, results = HANDLERS[cfg.command](cfg)
    report = build_report(cfg, checks, results)
    return (EXIT_OK if report["passed"] else EXIT_FAIL), report


# --------------------------------------------------------------- entry point

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flagqm", description="Real-valued QM with flag qubits.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="input file for map-state / map-operator")
    p.add_argument("--backend", choices=BACKEND_CHOICES)
    p.add_argument("--config", help="flat key = value run configuration")
    p.add_argument("--out", help="report path (bellswap, verify) or mapped file (map-*)")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--tol", type=float)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = RunConfig()
        if args.config:
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return EXIT_IO
            cfg = parse_config(text)
        overrides = {
            "command": args.command, "input": args.input, "backend": args.backend,
            "output": args.out, "seed": args.seed, "trials": args.trials, "tolerance": args.tol,
        }
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None}).validate()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        status, report = run(cfg)
        text = dumps(report) + "\n"
        if cfg.output and not cfg.command.startswith("map-"):
            _write(cfg.output, text)
        else:
            sys.stdout.write(text)
    except (OSError, FileFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
