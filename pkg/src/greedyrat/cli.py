"""Command-line entry point.

Subcommands:

  greedyrat run <config>                 adaptive sampling; writes
                                         samples.csv, ledger.csv, surrogate.json
  greedyrat validate <config> <surrogate.json>
                                         dense ground-truth sweep; writes
                                         validation.csv (expensive: one
                                         high-fidelity solve per grid point)
  greedyrat verify <config>              runs the intrusive residual/error
                                         identity checks; writes verify.csv

Config files are flat ``key = value`` text; see ``CONFIG_KEYS`` for the
accepted keys. Frequencies are serialized as the positive real f of
z = i*f.
"""
import argparse
import csv
import math
import os
import sys as _sys
from datetime import datetime, timezone

import numpy as np

from . import verify as verify_mod
from .barycentric import BarycentricSurrogate, load_surrogate_metadata
from .errors import GreedyratError, ResonanceError
from .greedy import (
    GreedyConfig,
    TerminationRule,
    build_test_grid,
    adjusted_relative_error,
    estimator_curve,
    run_greedy,
)
from .system_model import load_matrix_market

CONFIG_KEYS = {
    "system": str,
    "f_min": float,
    "f_max": float,
    "grid_size": int,
    "tol": float,
    "delta": float,
    "fitter": str,
    "termination": str,
    "n_memory": int,
    "n_batch": int,
    "n_random": int,
    "min_gap": float,
    "max_samples": int,
    "seed": int,
    "output_dir": str,
}


class ConfigError(GreedyratError):
    pass


def parse_config(path):
    raw = {}
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                raw[key] = CONFIG_KEYS[key](value)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    for key in ("system", "f_min", "f_max"):
        if key not in raw:
            raise ConfigError(f"{path}: missing required key {key!r}")
    return raw


def build_greedy_config(raw):
    rule_kwargs = {}
    for src, dst in (
        ("n_memory", "n_memory"),
        ("n_batch", "n_batch"),
        ("n_random", "n_random"),
        ("min_gap", "min_gap"),
    ):
        if src in raw:
            rule_kwargs[dst] = raw[src]
    try:
        rule = TerminationRule(kind=raw.get("termination", "lookahead"), **rule_kwargs)
        return GreedyConfig(
            f_min=raw["f_min"],
            f_max=raw["f_max"],
            grid_size=raw.get("grid_size", 10_000),
            tol=raw.get("tol", 1e-3),
            delta=raw.get("delta", 1e-8),
            fitter=raw.get("fitter", "loewner"),
            termination=rule,
            max_samples=raw.get("max_samples", 200),
            seed=raw.get("seed", 0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _timestamp_lines():
    return [f"generated {datetime.now(timezone.utc).isoformat()}", "frequencies are f in z = i*f"]


def _open_csv(path):
    f = open(path, "w", newline="")
    for line in _timestamp_lines():
        f.write(f"# {line}\n")
    return f


def write_run_artifacts(trace, cfg, outdir):
    os.makedirs(outdir, exist_ok=True)
    with _open_csv(os.path.join(outdir, "samples.csv")) as f:
        w = csv.writer(f)
        w.writerow(["iteration", "f", "anchor_re", "anchor_im", "estimator", "flag"])
        for rec in trace.records:
            fval = rec.chosen.imag if not math.isnan(rec.chosen.imag) else rec.anchor.imag
            w.writerow(
                [
                    rec.iteration,
                    fval,
                    rec.anchor.real,
                    rec.anchor.imag,
                    rec.estimator,
                    int(rec.flag),
                ]
            )
    with _open_csv(os.path.join(outdir, "ledger.csv")) as f:
        w = csv.writer(f)
        w.writerow(["iteration", "samples", "test_calls", "cumulative_oracle_calls"])
        for rec in trace.records:
            w.writerow([rec.iteration, rec.n_samples, rec.test_calls, rec.oracle_calls])
    last = trace.records[-1]
    extra = {
        "termination_reason": trace.termination_reason,
        "estimator_anchor": [last.anchor.real, last.anchor.imag],
        "estimator_value": last.estimator,
        "sampled_f": [z.imag for z in trace.sampled_frequencies],
    }
    trace.surrogate.save(os.path.join(outdir, "surrogate.json"), extra=extra)


def cmd_run(args):
    raw = parse_config(args.config)
    cfg = build_greedy_config(raw)
    system = load_matrix_market(raw["system"])
    trace = run_greedy(system, cfg)
    outdir = raw.get("output_dir", os.path.dirname(os.path.abspath(args.config)))
    write_run_artifacts(trace, cfg, outdir)
    print(
        f"terminated: {trace.termination_reason} after {trace.n_iterations} iterations, "
        f"{len(trace.samples)} samples, {trace.oracle_calls} oracle calls"
    )
    return 2 if trace.hit_safety_cap else 0


def cmd_validate(args):
    raw = parse_config(args.config)
    cfg = build_greedy_config(raw)
    system = load_matrix_market(raw["system"])
    sur = BarycentricSurrogate.load(args.surrogate)
    meta = load_surrogate_metadata(args.surrogate)
    grid = build_test_grid(cfg)
    approx = sur.eval_grid(grid)
    eta = np.full(grid.size, math.nan)
    if "estimator_anchor" in meta and math.isfinite(meta.get("estimator_value", math.nan)):
        anchor = complex(*meta["estimator_anchor"])
        eta = estimator_curve(sur, meta["estimator_value"], anchor, grid)
    p, m = sur.output_shape
    outdir = raw.get("output_dir", os.path.dirname(os.path.abspath(args.config)))
    os.makedirs(outdir, exist_ok=True)
    max_eps = 0.0
    with _open_csv(os.path.join(outdir, "validation.csv")) as f:
        w = csv.writer(f)
        entry_cols = [f"absH_{i}_{j}" for i in range(p) for j in range(m)]
        entry_cols += [f"absHs_{i}_{j}" for i in range(p) for j in range(m)]
        w.writerow(["f", "eps", "eta", "resonance", "H_norm"] + entry_cols)
        for k, z in enumerate(grid):
            try:
                H = system.eval_transfer(z)
            except ResonanceError:
                w.writerow([z.imag, math.nan, eta[k], 1, math.nan] + [math.nan] * 2 * p * m)
                continue
            eps = adjusted_relative_error(H, approx[k], cfg.delta)
            max_eps = max(max_eps, eps)
            row = [z.imag, eps, eta[k], 0, float(np.linalg.norm(H))]
            row += [abs(x) for x in H.ravel()]
            row += [abs(x) for x in approx[k].ravel()]
            w.writerow(row)
    print(f"max adjusted relative error over the grid: {max_eps:.6e}")
    return 0


def cmd_verify(args):
    raw = parse_config(args.config)
    cfg = build_greedy_config(raw)
    system = load_matrix_market(raw["system"])
    trace = run_greedy(system, cfg)
    sur = trace.surrogate
    zs = verify_mod.draw_probe_points(sur, cfg.f_min, cfg.f_max, 100, seed=cfg.seed)
    outdir = raw.get("output_dir", os.path.dirname(os.path.abspath(args.config)))
    os.makedirs(outdir, exist_ok=True)
    p1, p2 = verify_mod.write_report_csv(
        os.path.join(outdir, "verify.csv"),
        system,
        sur,
        zs,
        cfg.delta,
        header_lines=_timestamp_lines(),
    )
    print(
        f"gamma = {p1.gamma_estimate:.6e} (formula {p1.gamma_formula:.6e}), "
        f"rho*|Q| relative spread = {p1.max_relative_spread:.3e}"
    )
    print(
        f"max |eps*|Q| - Delta| / Delta = {max(p2.identity_residuals):.3e}, "
        f"Delta_max = {p2.delta_max:.6e}"
    )
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="greedyrat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the adaptive sampling loop")
    p_run.add_argument("config")
    p_val = sub.add_parser("validate", help="dense exact sweep against a saved surrogate")
    p_val.add_argument("config")
    p_val.add_argument("surrogate")
    p_ver = sub.add_parser("verify", help="intrusive residual/error identity checks")
    p_ver.add_argument("config")
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "validate": cmd_validate, "verify": cmd_verify}
    try:
        return handlers[args.command](args)
    except (ConfigError, FileNotFoundError, GreedyratError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
