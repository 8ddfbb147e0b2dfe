"""Command-line entry point.

    polariguide <spectrum|respond|dispersion|ensemble|validate> --config FILE --out DIR
                [--seed U64] [--threads N]

Each subcommand writes CSV tables into ``--out``; see the README for the
exact column layout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .ensemble import density_sweep, run_ensemble
from .errors import ConfigError, EigenConvergenceError, PolariguideError
from .green import Variant
from .oracles import mean_field_wavenumber, near_field_shift
from .output import write_table
from .solver import dispersion_map, response_spectrum
from .spectrum import classify_modes, collective_spectrum
from .system import generate_chain
from .validate import run_checks

SUBCOMMANDS = ("spectrum", "respond", "dispersion", "ensemble", "validate")


def _meta(cfg: RunConfig, command: str):
    return {
        "polariguide": __version__,
        "command": command,
        "config_sha256": cfg.digest(),
        "seed": cfg.seed,
        "model": cfg.model,
        "units": "lengths in lambda, rates and detunings in gamma0, q in k",
    }


def cmd_spectrum(cfg: RunConfig, out: str, threads: int = 1):
    chain = generate_chain(cfg.chain_spec(), cfg.seed)
    modes = collective_spectrum(chain, cfg.green_model())
    fits = classify_modes(modes, chain)
    rows = [(j, m.shift, m.linewidth, m.participation, f.classification.value, f.xi, f.r_squared)
            for j, (m, f) in enumerate(zip(modes, fits))]
    meta = _meta(cfg, "spectrum")
    write_table(os.path.join(out, "spectrum.csv"),
                ["mode", "delta[gamma0]", "gamma[gamma0]", "participation[1]", "classification",
                 "xi[lambda]", "r_squared[1]"], rows, meta)
    gam = np.array([m.linewidth for m in modes])
    p = np.array([m.participation for m in modes])
    flagged = sorted({int(np.argmax(gam)), int(np.argmin(gam)), int(np.argmax(p)), int(np.argmin(p))})
    cols = ["site", "z[lambda]"]
    for j in flagged:
        cols += [f"psi{j}_re[1]", f"psi{j}_im[1]"]
    mode_rows = []
    for n, z in enumerate(chain.positions):
        row = [n, z]
        for j in flagged:
            row += [modes[j].mode_function[n].real, modes[j].mode_function[n].imag]
        mode_rows.append(row)
    write_table(os.path.join(out, "modes.csv"), cols, mode_rows, meta)


def cmd_respond(cfg: RunConfig, out: str, threads: int = 1):
    meta = _meta(cfg, "respond")
    deltas = cfg.deltas()
    if cfg.sweep_N:
        sweep = density_sweep(cfg.chain_spec(), cfg.sweep_N, deltas, Variant(cfg.model), cfg.sweep_hold, cfg.seed)
        rows = [(s["N"], s["L"], d, T, R, loss, a, s["near_field_shift"])
                for s in sweep
                for d, T, R, loss, a in zip(s["delta"], s["T"], s["R"], s["loss"], s["absorption"])]
        cols = ["N", "L[lambda]", "delta[gamma0]", "T[1]", "R[1]", "loss[1]", "absorption[1]",
                "near_field_shift[gamma0]"]
    else:
        chain = generate_chain(cfg.chain_spec(), cfg.seed)
        res = response_spectrum(chain, cfg.green_model(), deltas)
        rows = zip(res["delta"], res["T"], res["R"], res["loss"], res["absorption"])
        cols = ["delta[gamma0]", "T[1]", "R[1]", "loss[1]", "absorption[1]"]
    write_table(os.path.join(out, "response.csv"), cols, rows, meta)


def mean_field_overlay(cfg: RunConfig, deltas):
    """Re q(Delta)/k from the mean-field dispersion; shifted for the composite model."""
    spec = cfg.chain_spec()
    model = cfg.green_model()
    shift = near_field_shift(spec.L, model) if model.variant is Variant.COMPOSITE else 0.0
    mf = mean_field_wavenumber(deltas, spec.N, spec.length, spec.beta, spec.gamma0, spec.gamma_deph,
                               spec.k, shift)
    return mf.q / spec.k


def cmd_dispersion(cfg: RunConfig, out: str, threads: int = 1):
    chain = generate_chain(cfg.chain_spec(), cfg.seed)
    deltas, qs = cfg.deltas(), cfg.qs()
    amap = dispersion_map(chain, cfg.green_model(), qs, deltas)
    overlay = mean_field_overlay(cfg, deltas)
    rows = [(d, q, amap[i, j], overlay[i].real)
            for i, d in enumerate(deltas) for j, q in enumerate(qs)]
    write_table(os.path.join(out, "dispersion.csv"),
                ["delta[gamma0]", "q[k]", "absorption[1]", "mean_field_re_q[k]"], rows, _meta(cfg, "dispersion"))


def cmd_ensemble(cfg: RunConfig, out: str, threads: int = 1):
    stats = run_ensemble(cfg.ensemble_spec(), threads=threads)
    meta = _meta(cfg, "ensemble")
    meta["realizations"] = cfg.realizations
    meta["failed"] = len(stats.failures)
    keys = [k for k in ("T", "R", "loss", "absorption") if k in stats.mean]
    if keys:
        cols = ["delta[gamma0]"]
        for k in keys:
            cols += [f"mean_{k}[1]", f"var_{k}[1]"]
        rows = []
        for i, d in enumerate(stats.deltas):
            row = [d]
            for k in keys:
                row += [stats.mean[k][i], stats.var[k][i]]
            rows.append(row)
        write_table(os.path.join(out, "ensemble_response.csv"), cols, rows, meta)
    if "dispersion" in stats.mean:
        rows = [(d, q, stats.mean["dispersion"][i, j], stats.var["dispersion"][i, j])
                for i, d in enumerate(stats.deltas) for j, q in enumerate(stats.qs)]
        write_table(os.path.join(out, "ensemble_dispersion.csv"),
                    ["delta[gamma0]", "q[k]", "mean_absorption[1]", "var_absorption[1]"], rows, meta)
    if len(stats.cloud):
        names = {-1: "", 0: "extended", 1: "localized", 2: "pair"}
        rows = [(int(r[0]), r[1], r[2], r[3], names[int(r[4])], r[5], r[6]) for r in stats.cloud]
        write_table(os.path.join(out, "ensemble_modes.csv"),
                    ["realization", "delta[gamma0]", "gamma[gamma0]", "participation[1]", "classification",
                     "xi[lambda]", "r_squared[1]"],
                    rows, meta)
        e = stats.histogram_edges
        write_table(os.path.join(out, "participation_hist.csv"), ["p_low[1]", "p_high[1]", "count"],
                    zip(e[:-1], e[1:], stats.histogram_counts), meta)
    failed = {f[0]: f[2] for f in stats.failures}
    write_table(os.path.join(out, "seeds.csv"), ["realization", "seed", "status"],
                [(i, s, failed.get(i, "ok")) for i, s in enumerate(stats.seeds)], meta)


def cmd_validate(cfg, out: str, threads: int = 1):
    t0 = time.perf_counter()
    checks = run_checks()
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name:34s} value={c.value:.3e} tol={c.tolerance:.1e} {c.detail}")
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed in {time.perf_counter() - t0:.1f} s")
    write_table(os.path.join(out, "validate.csv"), ["check", "status", "value", "tolerance", "detail"],
                [(c.name, "PASS" if c.passed else "FAIL", float(c.value), float(c.tolerance), c.detail)
                 for c in checks], {"polariguide": __version__, "command": "validate"})
    return 0 if all(c.passed for c in checks) else 1


COMMANDS = {
    "spectrum": cmd_spectrum,
    "respond": cmd_respond,
    "dispersion": cmd_dispersion,
    "ensemble": cmd_ensemble,
    "validate": cmd_validate,
}


def run_subcommand(name: str, cfg: RunConfig | None, out: str, threads: int = 1) -> int:
    if name not in COMMANDS:
        raise ValueError(f"unknown subcommand {name!r}")
    if name != "validate" and cfg is None:
        raise ConfigError(f"subcommand '{name}' needs --config")
    os.makedirs(out, exist_ok=True)
    rc = COMMANDS[name](cfg, out, threads)
    return 0 if rc is None else rc


def _error_record(exc, out):
    record = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("key", "line", "index", "seed"):
        if getattr(exc, attr, None) is not None:
            record[attr] = getattr(exc, attr)
    if isinstance(exc, EigenConvergenceError) and exc.matrix is not None and out:
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "eigen_failure_matrix.npy")
        np.save(path, exc.matrix)
        record["matrix_dump"] = path
    return record


def build_parser():
    parser = argparse.ArgumentParser(prog="polariguide", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="run configuration file (TOML key = value)")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, help="override the configuration seed")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for ensembles")
    parser.add_argument("--version", action="version", version=f"polariguide {__version__}")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else None
        if cfg is not None and args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("seed must be an unsigned 64-bit integer", "seed")
            cfg = cfg.with_seed(args.seed)
        return run_subcommand(args.subcommand, cfg, args.out, max(1, args.threads))
    except (PolariguideError, OSError) as exc:
        print(json.dumps(_error_record(exc, args.out), sort_keys=True), file=sys.stderr)
        return 2 if isinstance(exc, ConfigError) else 1


if __name__ == "__main__":
    sys.exit(main())
