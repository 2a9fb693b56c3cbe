"""``jth`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error.
Flags fall back to the environment variables JTH_MODE, JTH_TOL, JTH_N and
JTH_SEED; explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .classifier import classify_G, classify_spectral
from .core import (
    DomainError,
    Potential,
    c_n,
    is_exact,
    jost_eval,
    theta_of_z,
    to_exact,
)
from .oracle import (
    PoleError,
    jost_via_linear_system,
    perturbation_det,
    spectrum_inertia,
    spectrum_sturm,
    threshold_scaled_det,
)
from .sampler import (
    DEFAULT_STEPS,
    region_census,
    sample_variety,
    write_census_csv,
    write_variety_csv,
)
from .verify import SUITES, run_suites

log = logging.getLogger("jacobi_threshold")

# options whose values may start with '-' (negative numbers, ranges)
_VALUE_OPTS = ("--mu", "--theta", "--z", "--grid", "--box")


@dataclass(frozen=True)
class RunConfig:
    mode: str = "exact"
    tol: float = 1e-12
    N: int = 3000
    delta: float = 1e-8
    seed: int = 0
    fmt: str = "json"

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise ValueError(f"mode must be exact or float, not {self.mode!r}")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.N < 500:
            raise ValueError("N must be at least 500")
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    def scalar(self, text: str):
        value = to_exact(text)
        return value if self.mode == "exact" else float(value)


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return _jsonable(x.item())
    return x


def _emit(doc: dict, cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    doc = _jsonable(doc)
    if cfg.fmt == "plain":
        for key, value in doc.items():
            out.write(f"{key}: {json.dumps(value) if isinstance(value, (dict, list)) else value}\n")
    else:
        json.dump(doc, out, indent=2)
        out.write("\n")


def parse_mu(text: str, cfg: RunConfig) -> Potential:
    parts = [p for p in text.replace(" ", "").split(",")]
    if not parts or any(p == "" for p in parts):
        raise UsageError(f"malformed --mu {text!r}")
    try:
        return Potential(cfg.scalar(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed --mu {text!r}: {exc}") from exc


def _parse_range(text: str, with_steps: bool):
    parts = text.split(":")
    try:
        if with_steps:
            lo, hi, steps = parts
            return float(lo), float(hi), int(steps)
        lo, hi = parts
        return float(lo), float(hi)
    except ValueError as exc:
        raise UsageError(f"malformed range {text!r}") from exc


# -- commands ----------------------------------------------------------------

def cmd_classify(args, cfg: RunConfig) -> int:
    mu = parse_mu(args.mu, cfg)
    spec = classify_spectral(mu, cfg.tol)
    doc = {
        "mu": list(mu.mu),
        "n": mu.n,
        "mode": cfg.mode,
        "spectral": spec.as_dict(),
        "region_left": classify_G(mu, cfg.tol).as_dict(),
        "region_right": classify_G(-mu, cfg.tol).as_dict(),
        "jost_left": c_n(mu),
        "jost_right": jost_eval(mu, -1 if cfg.mode == "exact" else -1.0),
    }
    _emit(doc, cfg)
    return 0


def cmd_spectrum(args, cfg: RunConfig) -> int:
    mu = parse_mu(args.mu, cfg)
    if args.method == "inertia":
        report = spectrum_inertia(mu.as_float(), max(cfg.N, mu.n + 2), cfg.delta)
    else:
        report = spectrum_sturm(mu)
        if args.method == "linsys-check" and mu.n >= 1:
            worst = 0.0
            for i in range(1, 40):
                theta = -1 + i / 20
                if theta == 0:
                    continue
                a = jost_via_linear_system(mu.as_float(), theta)
                b = float(jost_eval(mu.as_exact(), to_exact(theta)))
                worst = max(worst, abs(a - b))
            report.method = "linear-system"
            report.residuals["jost_linear_system_max_abs_diff"] = worst
            report.residuals["within_tolerance"] = worst <= 1e-10
    doc = {"mu": list(mu.mu), "n": mu.n, **report.as_dict()}
    _emit(doc, cfg)
    if args.method == "linsys-check" and not report.residuals.get("within_tolerance", True):
        return 1
    return 0


def cmd_det(args, cfg: RunConfig) -> int:
    mu = parse_mu(args.mu, cfg)
    doc = {"mu": list(mu.mu), "n": mu.n}
    if args.scaled_limit:
        edge = args.scaled_limit
        target = c_n(mu) if edge == "left" else jost_eval(mu, -1)
        ladder = []
        for m in range(1, 6):
            eps = 10.0 ** (-2 * m)
            z = -eps if edge == "left" else 4 + eps
            ladder.append({"z": z, "scaled_det": threshold_scaled_det(mu, z, edge)})
        doc.update(edge=edge, limit=target, ladder=ladder)
    else:
        if (args.theta is None) == (args.z is None):
            raise UsageError("give exactly one of --theta, --z, or --scaled-limit")
        if args.theta is not None:
            theta = cfg.scalar(args.theta)
        else:
            z = cfg.scalar(args.z)
            theta = theta_of_z(z)
            doc["z"] = z
        doc["theta"] = theta
        try:
            doc["det"] = perturbation_det(mu, theta)
        except PoleError as exc:
            raise UsageError(str(exc)) from exc
        if not is_exact(doc["det"]):
            doc["det"] = doc["det"] if isinstance(doc["det"], complex) else float(doc["det"])
    _emit(doc, cfg)
    return 0


def _write_out(path, writer, *writer_args) -> None:
    if path in (None, "-"):
        writer(*writer_args, sys.stdout)
    else:
        with open(path, "w", newline="") as fh:
            writer(*writer_args, fh)


def cmd_variety(args, cfg: RunConfig) -> int:
    n = args.n
    if args.grid:
        grid = [_parse_range(g, True) for g in args.grid]
        if len(grid) == 1 and n > 2:
            grid = grid * (n - 1)
    else:
        grid = [(-4.0, 2.0, DEFAULT_STEPS.get(n, 32))] * (n - 1)
    try:
        samples, skipped = sample_variety(n, args.family, grid, cfg.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    log.info("variety n=%d family=%s: %d samples, %d prefixes skipped", n, args.family,
             len(samples), skipped)
    _write_out(args.out, write_variety_csv, samples, n)
    return 0


def cmd_census(args, cfg: RunConfig) -> int:
    box = [_parse_range(b, False) for b in (args.box or ["-20:20"])]
    try:
        report = region_census(args.n, box, args.samples, cfg.seed, args.family, cfg.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if cfg.fmt == "json":
        _emit(report.as_dict(), cfg)
    else:
        _write_out(args.out, write_census_csv, report)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    try:
        results = run_suites(args.suite, seed=cfg.seed)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    for r in results:
        log.info(r.line())
    doc = {
        "passed": all(r.passed for r in results),
        "seed": cfg.seed,
        "suites": [r.as_dict() for r in results],
    }
    _emit(doc, cfg)
    return 0 if doc["passed"] else 1


# -- parser ------------------------------------------------------------------

def _env(name, default, cast=str):
    raw = os.environ.get(name)
    return default if raw is None else cast(raw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default=None,
                        help="scalar arithmetic (env JTH_MODE, default exact)")
    common.add_argument("--tol", type=float, default=None,
                        help="float zero-test tolerance (env JTH_TOL, default 1e-12)")
    common.add_argument("--N", dest="N", type=int, default=None,
                        help="truncation size (env JTH_N, default 3000)")
    common.add_argument("--delta", type=float, default=1e-8, help="edge margin for inertia counts")
    common.add_argument("--seed", type=int, default=None, help="random seed (env JTH_SEED, default 0)")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "plain"), default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="jth", description=(
        "Threshold Jost polynomials, critical varieties and eigenvalue counts for "
        "finite-rank diagonal perturbations of the half-line Jacobi operator."))
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="component and eigenvalue-count classification")
    c.add_argument("--mu", required=True, help="comma-separated mu_1..mu_n (p/q or decimals)")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues outside [0, 4]")
    s.add_argument("--mu", required=True)
    s.add_argument("--method", choices=("sturm", "inertia", "linsys-check"), default="sturm")
    s.set_defaults(func=cmd_spectrum)

    d = sub.add_parser("det", parents=[common], help="perturbation determinant")
    d.add_argument("--mu", required=True)
    d.add_argument("--theta")
    d.add_argument("--z")
    d.add_argument("--scaled-limit", choices=("left", "right"))
    d.set_defaults(func=cmd_det)

    v = sub.add_parser("variety", parents=[common], help="sample V(Q_n) or V(C_n) as CSV")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--family", choices=("Q", "C"), default="C")
    v.add_argument("--grid", action="append", help="min:max:steps, once per prefix axis")
    v.add_argument("--out", help="output file (default stdout)")
    v.set_defaults(func=cmd_variety)

    k = sub.add_parser("census", parents=[common], help="histogram of components over a box")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--box", action="append", help="min:max, once or once per axis")
    k.add_argument("--samples", type=int, default=10_000)
    k.add_argument("--family", choices=("G", "D"), default="G")
    k.add_argument("--out", help="output file (default stdout)")
    k.set_defaults(func=cmd_census)

    w = sub.add_parser("verify", parents=[common], help="run the cross-oracle verification suites")
    w.add_argument("--suite", action="append", choices=sorted(SUITES))
    w.set_defaults(func=cmd_verify)
    return p


def _join_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _config(args) -> RunConfig:
    default_fmt = "csv" if args.command in ("variety", "census") else "json"
    return RunConfig(
        mode=args.mode or _env("JTH_MODE", "exact"),
        tol=args.tol if args.tol is not None else _env("JTH_TOL", 1e-12, float),
        N=args.N if args.N is not None else _env("JTH_N", 3000, int),
        delta=args.delta,
        seed=args.seed if args.seed is not None else _env("JTH_SEED", 0, int),
        fmt=args.fmt or default_fmt,
    )


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_join_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except (UsageError, DomainError, ValueError) as exc:
        parser.exit(2, f"jth {args.command}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
