"""Command-line front end.

Subcommands: zeff, sweep, harmonic, measure, lyapunov, verify.  Flags
override a flat key=value config file; every command honors --format, --out,
--tol and --seed.  Exit codes: 0 success, 1 numerical failure, 2 requested
operation needs an in-band (dissipative) frequency but got one outside.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import acceptance, harmonic, ladder, measure, singularity
from .complexnet import SingularInteriorError
from .harmonic import HarmonicFunction, compute_extension_matrices, spectral_report
from .ladder import ConvergenceError, OutOfBandError, omega_from_t
from .words import word_from_str, word_to_str

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_OUT_OF_BAND = 2


@dataclass(frozen=True)
class RunConfig:
    omega: float | None = None
    t: float | None = None
    L: float = 1.0
    C: float = 1.0
    eps: tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    level: int = 4
    alpha: float = 0.5
    seed: int = 42
    tol: float = 1e-7
    fmt: str = "csv"
    out: str | None = None
    quick: bool = False

    def resolved_omega(self) -> float:
        if self.omega is not None:
            return self.omega
        t = self.t if self.t is not None else 8.0
        return omega_from_t(t, self.L, self.C)

    def validate(self) -> None:
        if self.omega is not None and not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.t is not None and not self.t > 0:
            raise ValueError("t must be positive")
        if not (self.L > 0 and self.C > 0):
            raise ValueError("L and C must be positive")
        if not (0 <= self.level <= 8):
            raise ValueError("level must be in [0, 8]")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must be in (0, 1)")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if any(not e > 0 for e in self.eps):
            raise ValueError("eps values must be positive")


_CONFIG_KEYS = {
    "omega": float,
    "t": float,
    "L": float,
    "C": float,
    "level": int,
    "alpha": float,
    "seed": int,
    "tol": float,
    "format": str,
    "out": str,
    "quick": lambda s: s.strip().lower() in ("1", "true", "yes"),
    "eps": lambda s: tuple(float(x) for x in s.split(",") if x.strip()),
}


def load_config_file(path: str) -> dict:
    """Flat key=value file, '#' comments; same keys as the flags."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _CONFIG_KEYS[key](val)
    return values


def _build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        file_vals = load_config_file(args.config)
        mapped = {("fmt" if k == "format" else k): v for k, v in file_vals.items()}
        cfg = replace(cfg, **mapped)
    overrides = {}
    for flag, attr in (
        ("omega", "omega"),
        ("t", "t"),
        ("L", "L"),
        ("C", "C"),
        ("level", "level"),
        ("alpha", "alpha"),
        ("seed", "seed"),
        ("tol", "tol"),
        ("format", "fmt"),
        ("out", "out"),
    ):
        v = getattr(args, flag, None)
        if v is not None:
            overrides[attr] = v
    if getattr(args, "eps", None):
        overrides["eps"] = tuple(float(x) for x in args.eps.split(","))
    if getattr(args, "quick", False):
        overrides["quick"] = True
    cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_boundary(spec: str) -> np.ndarray:
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) != 3:
        raise ValueError("boundary data needs three comma-separated complex values")
    return np.array([complex(p) for p in parts])


# ---------------------------------------------------------------------------
# subcommands


def cmd_zeff(args) -> int:
    cfg = _build_config(args)
    omega = cfg.resolved_omega()
    fs = ladder.filter_condition(omega, cfg.L, cfg.C)
    res = ladder.effective_impedance(omega, cfg.L, cfg.C, tol=cfg.tol)
    record = {
        "omega": omega,
        "t": fs.t,
        "in_band": fs.in_band,
        "band_margin_t": fs.margin,
        "status": res.status,
        "zeff_re": res.zeff.real,
        "zeff_im": res.zeff.imag,
        "fixed_point_residual": res.residual,
        "route_gap": abs(res.path_a - res.path_b),
        "eps_path": [[e, z.real, z.imag] for e, z in res.eps_path],
    }
    if cfg.fmt == "json":
        _emit(json.dumps(record, indent=2, sort_keys=True) + "\n", cfg)
    else:
        lines = [
            f"omega = {omega!r}  (t = {fs.t!r})",
            f"band: {'inside' if fs.in_band else 'outside'} (margin {fs.margin!r} in t)",
            f"status: {res.status}",
            f"Zeff = {res.zeff.real!r} + {res.zeff.imag!r} i",
            f"fixed-point residual = {res.residual!r}",
            f"route gap |a-b| = {abs(res.path_a - res.path_b)!r}",
            "eps path:",
        ]
        for e, z in res.eps_path:
            lines.append(f"  eps={e!r}: {z.real!r} + {z.imag!r} i")
        _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK if res.dissipative else EXIT_OUT_OF_BAND


def cmd_sweep(args) -> int:
    cfg = _build_config(args)
    if args.t_min >= args.t_max:
        raise ValueError("sweep range needs t-min < t-max")
    if args.points < 1:
        raise ValueError("sweep needs at least one point")
    ts = np.linspace(args.t_min, args.t_max, args.points)
    rows = ladder.frequency_sweep(
        [omega_from_t(t, cfg.L, cfg.C) for t in ts], cfg.L, cfg.C
    )
    text = ladder.sweep_to_csv(rows) if cfg.fmt == "csv" else ladder.sweep_to_json(rows)
    _emit(text, cfg)
    return EXIT_OK


def _matrices_or_exit(cfg: RunConfig):
    omega = cfg.resolved_omega()
    res = ladder.effective_impedance(omega, cfg.L, cfg.C, tol=cfg.tol)
    if not res.dissipative:
        raise OutOfBandError(
            f"frequency omega={omega} (t={res.t}) is outside the filter band; "
            "harmonic analysis needs a dissipative effective impedance"
        )
    return compute_extension_matrices(res.zeff, omega, cfg.L, cfg.C)


def cmd_harmonic(args) -> int:
    cfg = _build_config(args)
    m = _matrices_or_exit(cfg)
    u = _parse_boundary(args.u)
    h = HarmonicFunction(u, m)
    words = [word_from_str(w) for w in args.words.split(",")] if args.words else [()]
    rep = spectral_report(m)
    rows = harmonic.level_invariance_report(h, min(cfg.level, 4), eps_list=cfg.eps)
    if cfg.fmt == "json":
        record = {
            "zeff": [m.zeff.real, m.zeff.imag],
            "eigenvalues": [[z.real, z.imag] for z in (rep.lam1, rep.lam2, rep.lam3)],
            "contraction": rep.contraction,
            "dissipation": h.dissipation(),
            "cells": {
                word_to_str(w): [[float(z.real), float(z.imag)] for z in h.extend_to_cell(w)]
                for w in words
            },
            "level_invariance": [
                {
                    "n": r.n,
                    "p_zn": r.p_zn,
                    "p_eps": {repr(e): v for e, v in r.p_eps.items()},
                    "p_eps_truncated": {repr(e): v for e, v in r.p_eps_truncated.items()},
                }
                for r in rows
            ],
        }
        _emit(json.dumps(record, indent=2, sort_keys=True) + "\n", cfg)
    else:
        lines = [
            f"Zeff = {m.zeff.real!r} + {m.zeff.imag!r} i",
            f"eigenvalues: lam1={rep.lam1!r} lam2={rep.lam2!r} lam3={rep.lam3!r}",
            f"contraction r = |lam2| = {rep.contraction!r}",
            f"dissipation P[h] = {h.dissipation()!r}",
        ]
        for j, Aj in enumerate(m.A, start=1):
            lines.append(f"A{j}:")
            for row in Aj:
                lines.append(
                    "  " + "  ".join(f"{z.real:+.12f}{z.imag:+.12f}i" for z in row)
                )
        lines.append("cell values (word: corners):")
        for w in words:
            vals = h.extend_to_cell(w)
            lines.append(
                f"  {word_to_str(w) or '-'}: "
                + ", ".join(f"{float(z.real)!r}+{float(z.imag)!r}i" for z in vals)
            )
        lines.append("level invariance (n, P_Zn, then eps columns):")
        for r in rows:
            eps_part = "  ".join(f"{e:g}:{r.p_eps[e]!r}" for e in sorted(r.p_eps))
            lines.append(f"  n={r.n}  P_Zn={r.p_zn!r}  {eps_part}")
        _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK


def cmd_measure(args) -> int:
    cfg = _build_config(args)
    m = _matrices_or_exit(cfg)
    u = _parse_boundary(args.u)
    h = HarmonicFunction(u, m)
    cm = measure.CellMeasure(h)
    bm = measure.BernoulliMeasure()
    n = args.n if args.n is not None else cfg.level
    rows = measure.measure_table(cm, bm, n)
    total = sum(r[1] for r in rows)
    if cfg.fmt == "json":
        record = {
            "rows": [
                {"word": w, "nu": nu, "mu": mu, "ratio_nu_over_mu": q, "osc": o}
                for w, nu, mu, q, o in rows
            ],
            "nu_total": total,
            "dissipation": h.dissipation(),
        }
        _emit(json.dumps(record, indent=2, sort_keys=True) + "\n", cfg)
    else:
        text = measure.measure_table_csv(rows)
        text += f"# nu total = {total!r}, dissipation = {h.dissipation()!r}\n"
        _emit(text, cfg)
    return EXIT_OK


def cmd_lyapunov(args) -> int:
    cfg = _build_config(args)
    m = _matrices_or_exit(cfg)
    u = _parse_boundary(args.u)
    h = HarmonicFunction(u, m)
    n_steps = args.steps if args.steps else (2000 if cfg.quick else 10_000)
    n_samples = args.samples if args.samples else (30 if cfg.quick else 100)
    nc_ok, spread = singularity.nonconstancy_check(h, 1)
    beta = singularity.beta_estimate(
        m, 1, n_random_h=8 if cfg.quick else 32, seed=cfg.seed,
        grid=12 if cfg.quick else 24,
    )
    est = singularity.lyapunov_exponent(h, n_steps, n_samples, seed=cfg.seed)
    record = {
        "omega": cfg.resolved_omega(),
        "L": cfg.L,
        "C": cfg.C,
        "n_steps": est.n_steps,
        "n_samples": est.n_samples,
        "seed": est.seed,
        "mean": est.mean,
        "std_error": est.std_error,
        "bound": -singularity.LOG3_HALF,
        "nonconstancy_spread_m1": spread,
        "beta_m1": beta.value,
        "pass": bool(est.passes and nc_ok and beta.value < beta.bound),
    }
    _emit(json.dumps(record, indent=2, sort_keys=True) + "\n", cfg)
    return EXIT_OK if record["pass"] else EXIT_NUMERIC


def cmd_verify(args) -> int:
    cfg = _build_config(args)
    vcfg = acceptance.VerifyConfig(seed=cfg.seed, quick=cfg.quick, L=cfg.L, C=cfg.C)
    results = acceptance.run_all(vcfg)
    _emit(acceptance.render_report(results), cfg)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; flags override it")
    p.add_argument("--omega", type=float, help="angular frequency (rad/s)")
    p.add_argument("--t", type=float, help="shorthand: sets omega via t = 2 omega^2 L C")
    p.add_argument("--L", type=float, help="inductance (henries)")
    p.add_argument("--C", type=float, help="capacitance (farads)")
    p.add_argument("--eps", help="comma-separated series resistances")
    p.add_argument("--level", type=int, help="recursion level (<= 8)")
    p.add_argument("--alpha", type=float, help="contraction parameter in (0, 1)")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--tol", type=float, help="route-agreement tolerance")
    p.add_argument("--format", choices=("csv", "json"), help="output format")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--quick", action="store_true", help="reduced sample counts")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fsladder",
        description="Power dissipation on the Feynman-Sierpinski ladder",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeff", help="effective impedance at one frequency")
    _add_common(p)
    p.set_defaults(func=cmd_zeff)

    p = sub.add_parser("sweep", help="frequency sweep over a t-range")
    _add_common(p)
    p.add_argument("--t-min", type=float, default=0.5)
    p.add_argument("--t-max", type=float, default=80.0)
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("harmonic", help="extension matrices, spectra, cell values")
    _add_common(p)
    p.add_argument("--u", default="1,0,0", help="three complex boundary values")
    p.add_argument("--words", default="", help="comma-separated cell words, e.g. 1,12")
    p.set_defaults(func=cmd_harmonic)

    p = sub.add_parser("measure", help="per-cell dissipation measure table")
    _add_common(p)
    p.add_argument("--u", default="1,0,0", help="three complex boundary values")
    p.add_argument("--n", type=int, help="cell level of the table (default --level)")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("lyapunov", help="singularity certificate (JSON report)")
    _add_common(p)
    p.add_argument("--u", default="1,0,0", help="three complex boundary values")
    p.add_argument("--steps", type=int, help="steps per sample")
    p.add_argument("--samples", type=int, help="number of samples")
    p.set_defaults(func=cmd_lyapunov)

    p = sub.add_parser("verify", help="run the acceptance checks")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except OutOfBandError as exc:
        print(f"out of band: {exc}", file=sys.stderr)
        return EXIT_OUT_OF_BAND
    except (ConvergenceError, SingularInteriorError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
