"""Command-line interface: reproducible runs and plot-ready artifacts.

Subcommands

    bifurcate   tabulate candidate bifurcation speeds (k, c_k, simple, transversal)
    branch      trace an m-fold wave branch; writes branch.csv/.json + profiles.csv
    evolve      time-integrate a branch profile (or zero data); writes
                trajectory.csv + manifest.json with conservation diagnostics
    verify      run the invariant families and the commutator-bound sweep;
                one PASS/FAIL line per family, report.json + sweep CSVs
    selftest    quick, file-free subset of verify

Exit codes: 0 success, 2 configuration error, 3 numerical failure.

Every output embeds the resolved run configuration and a sha256 of its own
data section; a fixed seed and configuration reproduce files byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigurationError, NumericalError
from . import spectral
from .spectral import (
    CosineSeries,
    SineSeries,
    SpectralField,
    commutator_h,
    derivative,
    hilbert,
    hilbert_by_quadrature,
    multiply,
    zygmund,
    zygmund_by_quadrature,
)
from .model import (
    ModelParams,
    critical_speed,
    d_c_symbol,
    gateaux,
    residual,
    symbol_at,
)
from .bifurcation import (
    DEFAULT_MAX_ITER,
    DEFAULT_STEP,
    DEFAULT_TOL,
    DEFAULT_TRUNCATION,
    branch_to_csv,
    branch_to_json,
    continue_branch,
    detect_bifurcations,
    transversality,
)
from .evolution import EvolutionConfig, evolve, stable_dt, traveling_error, traveling_error_orders
from .holder import SWEEP_GRID, commutator_sweep

DEFAULTS = {
    "epsilon": 0.5,
    "alpha0": 1.0,
    "beta": 0.5,
    "fold": 1,
    "modes": DEFAULT_TRUNCATION,
    "smax": 0.05,
    "ds": DEFAULT_STEP,
    "tol": DEFAULT_TOL,
    "max_iter": DEFAULT_MAX_ITER,
    "dt": 2e-4,
    "tfinal": 1.0,
    "s": 0.02,
    "kmax": 10,
    "ensemble": 200,
    "degrees": "20,40",
    "alpha": 0.5,
    "holder_grid": SWEEP_GRID,
    "seed": 1234,
    "out": "oddwaves-out",
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one CLI invocation (defaults < config file < flags)."""

    command: str
    epsilon: float
    alpha0: float
    beta: float
    fold: int
    modes: int
    smax: float
    ds: float
    tol: float
    max_iter: int
    dt: float
    tfinal: float
    s: float
    kmax: int
    ensemble: int
    degrees: tuple
    alpha: float
    holder_grid: int
    seed: int
    out: str
    dt_halving: bool = False
    inject_fault: bool = False

    def model_params(self):
        return ModelParams(self.epsilon, self.alpha0, self.beta)


def _parse_config_file(path):
    """Plain ``key = value`` lines; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val
    return values


_FLAG_TYPES = {
    "epsilon": float, "alpha0": float, "beta": float, "fold": int,
    "modes": int, "smax": float, "ds": float, "tol": float, "max_iter": int,
    "dt": float, "tfinal": float, "s": float, "kmax": int, "ensemble": int,
    "degrees": str, "alpha": float, "holder_grid": int, "seed": int, "out": str,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    for name, typ in _FLAG_TYPES.items():
        common.add_argument(f"--{name.replace('_', '-')}", dest=name,
                            type=typ, default=None)
    common.add_argument("--config", default=None,
                        help="key = value file; flags override it")

    parser = argparse.ArgumentParser(
        prog="oddwaves",
        description="Traveling waves of an odd-viscosity surface-wave model")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bifurcate", parents=[common],
                   help="tabulate critical speeds up to --kmax")
    sub.add_parser("branch", parents=[common],
                   help="continue the --fold branch up to --smax")
    pev = sub.add_parser("evolve", parents=[common],
                         help="integrate a branch profile (amplitude --s)")
    pev.add_argument("--dt-halving", action="store_true",
                     help="also run at dt/2 and report the convergence order")
    pver = sub.add_parser("verify", parents=[common],
                          help="invariant families + commutator-bound sweep")
    pver.add_argument("--inject-fault", action="store_true",
                      help="testing hook: flip a sign inside the Hilbert "
                           "transform; the parity family must catch it")
    sub.add_parser("selftest", parents=[common],
                   help="fast file-free invariant subset")
    return parser


def resolve_config(args):
    file_values = _parse_config_file(args.config) if args.config else {}
    merged = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in file_values:
            merged[key] = _FLAG_TYPES[key](file_values[key])
        else:
            merged[key] = default
    try:
        degrees = tuple(int(part) for part in str(merged["degrees"]).split(",") if part)
    except ValueError:
        raise ConfigurationError(f"--degrees must be integers, got {merged['degrees']!r}")
    if not degrees or any(d < 1 for d in degrees):
        raise ConfigurationError("--degrees needs positive integers")
    cfg = RunConfig(command=args.command,
                    degrees=degrees,
                    dt_halving=getattr(args, "dt_halving", False),
                    inject_fault=getattr(args, "inject_fault", False),
                    **{k: v for k, v in merged.items() if k != "degrees"})
    # re-validate the numeric contracts of the underlying modules now
    cfg.model_params()
    EvolutionConfig(dt=cfg.dt, t_final=cfg.tfinal, n_modes=cfg.modes)
    if cfg.fold < 1:
        raise ConfigurationError("--fold must be >= 1")
    if cfg.modes < 2:
        raise ConfigurationError("--modes must be >= 2")
    if cfg.kmax < 1:
        raise ConfigurationError("--kmax must be >= 1")
    if cfg.ensemble < 1:
        raise ConfigurationError("--ensemble must be >= 1")
    if cfg.smax < 0:
        raise ConfigurationError("--smax must be >= 0")
    if cfg.s < 0:
        raise ConfigurationError("--s must be >= 0")
    return cfg


# -- deterministic artifact writers -------------------------------------------


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _csv_body(header, rows):
    lines = [",".join(header)]
    lines += [",".join(_fmt(cell) for cell in row) for row in rows]
    return "\n".join(lines) + "\n"


def _write_csv(path, cfg, body):
    digest = hashlib.sha256(body.encode()).hexdigest()
    meta = json.dumps(asdict(cfg), sort_keys=True)
    path.write_text(f"# config: {meta}\n# sha256: {digest}\n{body}")


def _write_json(path, cfg, payload):
    canonical = json.dumps(payload, sort_keys=True)
    doc = {
        "config": asdict(cfg),
        "content_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "payload": payload,
    }
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _outdir(cfg):
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


# -- subcommands ---------------------------------------------------------------


def cmd_bifurcate(cfg):
    p = cfg.model_params()
    points = detect_bifurcations(p, cfg.kmax, n_scan=cfg.modes)
    rows = [(pt.k, pt.speed, pt.simple, transversality(pt.k, p)) for pt in points]
    print(f"{'k':>4} {'c_k':>22} {'simple':>7} {'transversal':>12}")
    for k, ck, simple, trans in rows:
        print(f"{k:>4} {ck:>22.15g} {str(simple):>7} {str(trans):>12}")
    out = _outdir(cfg)
    _write_csv(out / "bifurcation_points.csv", cfg,
               _csv_body(["k", "speed", "simple", "transversal"], rows))
    _write_json(out / "bifurcation_report.json", cfg, {
        "version": __version__,
        "points": [{"k": k, "speed": ck, "simple": simple, "transversal": trans}
                   for k, ck, simple, trans in rows],
    })
    print(f"wrote {out / 'bifurcation_points.csv'}")
    return 0


def cmd_branch(cfg):
    p = cfg.model_params()
    branch = continue_branch(cfg.fold, p, cfg.smax, ds=cfg.ds, n=cfg.modes,
                             tol=cfg.tol, max_iter=cfg.max_iter)
    out = _outdir(cfg)
    _write_csv(out / "branch.csv", cfg, branch_to_csv(branch))
    _write_json(out / "branch.json", cfg, branch_to_json(branch))
    grid = branch.points[0].phi.grid_size
    profile_rows = [[pt.s] + pt.phi.values(grid).tolist() for pt in branch.points]
    _write_csv(out / "profiles.csv", cfg,
               _csv_body(["s"] + [f"x_{j}" for j in range(grid)], profile_rows))
    last = branch.points[-1]
    print(f"fold {branch.m}: {len(branch.points)} points, "
          f"|s| up to {abs(last.s):.6g}, c = {last.c:.12g}")
    print(f"wrote {out / 'branch.csv'}, branch.json, profiles.csv")
    if branch.truncated:
        print(f"WARNING: {branch.failure}", file=sys.stderr)
        return 3
    return 0


def cmd_evolve(cfg):
    p = cfg.model_params()
    ecfg = EvolutionConfig(dt=cfg.dt, t_final=cfg.tfinal, n_modes=cfg.modes)
    manifest = {"version": __version__, "dt_stable": stable_dt(cfg.modes, p)}
    if cfg.s == 0:
        f0 = CosineSeries(np.zeros(cfg.modes + 1))
        manifest["initial"] = "zero"
    else:
        branch = continue_branch(cfg.fold, p, cfg.s, ds=cfg.ds, n=cfg.modes,
                                 tol=cfg.tol, max_iter=cfg.max_iter)
        if branch.truncated:
            raise NumericalError(f"branch continuation failed: {branch.failure}")
        point = branch.points[-1]
        f0 = point.phi
        manifest["initial"] = "branch-point"
        manifest["branch_point"] = {"s": point.s, "c": point.c,
                                    "residual_norm": point.residual_norm}
    traj = evolve(f0, p, ecfg)
    manifest["dt_effective"] = traj.dt_effective
    manifest["mass_drift"] = traj.mass_drift
    manifest["save_times"] = traj.times.tolist()
    if cfg.s != 0:
        err = traveling_error(point, p, ecfg)
        manifest["traveling_error"] = err
        print(f"traveling error over t <= {cfg.tfinal:g}: {err:.6e}")
        if cfg.dt_halving:
            errs, rates = traveling_error_orders(point, p, ecfg, halvings=1)
            manifest["dt_halving"] = {"dts": [ecfg.dt, ecfg.dt / 2],
                                      "errors": errs, "order": rates[0]}
            print(f"dt halving: errors {errs[0]:.3e} -> {errs[1]:.3e}, "
                  f"order {rates[0]:.2f}")
    print(f"mass drift {traj.mass_drift:.3e}; effective dt {traj.dt_effective:g}")
    out = _outdir(cfg)
    grid = traj.states[0].grid_size
    rows = [[t] + st.values(grid).tolist() for t, st in zip(traj.times, traj.states)]
    _write_csv(out / "trajectory.csv", cfg,
               _csv_body(["t"] + [f"x_{j}" for j in range(grid)], rows))
    _write_json(out / "evolution_manifest.json", cfg, manifest)
    print(f"wrote {out / 'trajectory.csv'}, evolution_manifest.json")
    return 0


# -- verification families -----------------------------------------------------


def _family_hilbert_parity(rng, n):
    """H must send cos(kx) -> sin(kx), sin(kx) -> -cos(kx), constants -> 0,
    and swap the even/odd classes exactly."""
    worst = 0.0
    for k in range(1, n + 1):
        e = np.zeros(n + 1)
        e[k] = 1.0
        hc = hilbert(CosineSeries(e))
        worst = max(worst, abs(hc.b[k] - 1.0), float(np.abs(hc.a).max()))
        if not hc.is_odd:
            worst = max(worst, 1.0)
        hs = hilbert(SineSeries(e))
        worst = max(worst, abs(hs.a[k] + 1.0), float(np.abs(hs.b).max()))
        if not hs.is_even:
            worst = max(worst, 1.0)
    worst = max(worst, hilbert(CosineSeries([3.0])).sup_norm())
    return worst


def _family_operator_identities(rng, n):
    """H² = -Id on mean-zero fields; Λ = H ∘ d/dx; products commute and are
    bilinear; the commutator matches its definition term by term."""
    worst = 0.0
    for _ in range(5):
        f = _random_field(rng, n, mean_zero=True)
        g = _random_field(rng, n)
        hh = hilbert(hilbert(f)) + f
        worst = max(worst, float(np.abs(hh.a).max()), float(np.abs(hh.b).max()))
        lam = zygmund(f) - hilbert(derivative(f, 1))
        worst = max(worst, float(np.abs(lam.a).max()), float(np.abs(lam.b).max()))
        comm = multiply(f, g) - multiply(g, f)
        worst = max(worst, float(np.abs(comm.a).max()), float(np.abs(comm.b).max()))
        direct = commutator_h(f, g) - (hilbert(multiply(f, g)) - multiply(f, hilbert(g)))
        worst = max(worst, float(np.abs(direct.a).max()), float(np.abs(direct.b).max()))
    return worst


def _family_quadrature(rng, n):
    """The singular-integral quadratures must reproduce the mode maps."""
    worst = 0.0
    f = _random_field(rng, min(n, 16))
    hv = hilbert_by_quadrature(f, quad_points=4096)
    worst = max(worst, float(np.abs(hv - hilbert(f).values(f.grid_size)).max()))
    lv = zygmund_by_quadrature(f, quad_points=4096)
    worst = max(worst, float(np.abs(lv - zygmund(f).values(f.grid_size)).max()))
    return worst


def _family_trivial(p):
    worst = 0.0
    for c in (-1.0, 0.0, 2.0):
        for a0 in (0.0, -3.0, 1.0, 7.0):
            coeffs = np.zeros(9)
            coeffs[0] = a0
            worst = max(worst, residual(c, CosineSeries(coeffs), p).sup_norm())
    return worst


def _family_residual_parity(rng, p, n):
    """Cosine leakage of the residual, relative to its size."""
    worst = 0.0
    for _ in range(5):
        phi = _random_field(rng, n, even=True)
        full = residual(0.3, phi, p)
        scale = max(1.0, float(np.abs(full.b).max()))
        worst = max(worst, float(np.abs(full.a).max()) / scale)
    return worst


def _family_mfold(rng, p, n):
    """Support of the residual of an m-fold profile stays on the lattice."""
    worst = 0.0
    for m in (2, 3):
        a = np.zeros(n + 1)
        idx = m * np.arange(1, n // m + 1)
        a[idx] = 0.3 * rng.standard_normal(idx.size)
        res = residual(-0.2, CosineSeries(a), p)
        mask = np.ones(res.n_modes + 1, dtype=bool)
        mask[::m] = False
        scale = max(1.0, float(np.abs(res.b).max()))
        worst = max(worst, float(np.abs(res.b[mask]).max()) / scale)
    return worst


def _family_linearization(rng, p, n):
    """Flat-state linearization is the diagonal multiplier; at a generic
    profile it matches central finite differences."""
    worst = 0.0
    flat = CosineSeries(np.zeros(n + 1))
    for k in (1, 2, min(5, n)):
        e = np.zeros(n + 1)
        e[k] = 1.0
        img = gateaux(0.7, flat, CosineSeries(e), p)
        expect = np.zeros(img.n_modes + 1)
        expect[k] = symbol_at(k, 0.7, p)
        worst = max(worst, float(np.abs(img.b - expect).max()))
    phi = _random_field(rng, n, even=True)
    h = _random_field(rng, n, even=True)
    delta = 1e-5
    fd = (1.0 / (2 * delta)) * (residual(0.1, _shift(phi, h, delta), p)
                                - residual(0.1, _shift(phi, h, -delta), p))
    gx = gateaux(0.1, phi, h, p)
    rel = (fd - gx).sup_norm() / max(gx.sup_norm(), 1e-30)
    return worst, rel


def _family_symbol_roots(p, kmax):
    worst = 0.0
    for k in range(1, kmax + 1):
        ck = critical_speed(k, p)
        worst = max(worst, abs(symbol_at(k, ck, p)) / (1.0 + abs(ck) * k * k))
        if d_c_symbol(k, p) >= 0:
            worst = max(worst, 1.0)
    return worst


def _shift(phi, h, delta):
    return CosineSeries(phi.a + delta * h.a)


def _random_field(rng, n, even=False, mean_zero=False):
    a = np.zeros(n + 1)
    b = np.zeros(n + 1)
    a[1:] = rng.standard_normal(n) / np.arange(1, n + 1)
    if not even:
        b[1:] = rng.standard_normal(n) / np.arange(1, n + 1)
    if not mean_zero:
        a[0] = rng.standard_normal()
    if even:
        return CosineSeries(a)
    return SpectralField(a, b)


def _run_families(cfg, *, quick=False, sweep=True):
    p = cfg.model_params()
    rng = np.random.default_rng(cfg.seed)
    n = 16 if quick else 32
    checks = []

    def add(name, measured, threshold):
        checks.append({"family": name, "measured": measured,
                       "threshold": threshold, "passed": bool(measured <= threshold)})

    add("hilbert-parity-action", _family_hilbert_parity(rng, n), 1e-12)
    add("operator-identities", _family_operator_identities(rng, n), 1e-12)
    if not quick:
        add("quadrature-oracle", _family_quadrature(rng, n), 1e-6)
    add("trivial-solutions", _family_trivial(p), 1e-13)
    add("residual-parity", _family_residual_parity(rng, p, n), 1e-12)
    add("mfold-closure", _family_mfold(rng, p, n), 1e-12)
    diag, fd = _family_linearization(rng, p, n)
    add("linearization-diagonal", diag, 1e-12)
    add("linearization-fd", fd, 1e-6)
    add("symbol-roots", _family_symbol_roots(p, 50), 1e-12)

    sweeps = None
    if sweep:
        sweeps = [commutator_sweep(cfg.ensemble, deg, alpha=cfg.alpha,
                                   seed=cfg.seed, grid_size=cfg.holder_grid)
                  for deg in cfg.degrees]
        maxima = [s.summary()["max_ratio"] for s in sweeps]
        finite = all(np.isfinite(s.ratios).all() for s in sweeps)
        growth = max(
            (maxima[i + 1] / maxima[i] for i in range(len(maxima) - 1)),
            default=1.0)
        checks.append({"family": "commutator-bound",
                       "measured": growth if finite else float("inf"),
                       "threshold": 1.25,
                       "passed": bool(finite and growth <= 1.25),
                       "max_ratios": maxima})
    return checks, sweeps


def _print_checks(checks):
    ok = True
    for chk in checks:
        status = "PASS" if chk["passed"] else "FAIL"
        ok = ok and chk["passed"]
        print(f"{status} {chk['family']:<24} measured {chk['measured']:.3e} "
              f"(threshold {chk['threshold']:.3e})")
    return ok


def cmd_verify(cfg):
    if cfg.inject_fault:
        spectral.set_hilbert_sign_fault(True)
        print("fault injection active: Hilbert sine branch sign flipped")
    try:
        checks, sweeps = _run_families(cfg)
    finally:
        spectral.set_hilbert_sign_fault(False)
    ok = _print_checks(checks)
    out = _outdir(cfg)
    for sweep_result in sweeps or []:
        path = out / f"commutator_sweep_deg{sweep_result.max_degree}.csv"
        _write_csv(path, cfg, sweep_result.to_csv())
    _write_json(out / "verification_report.json", cfg, {
        "version": __version__,
        "checks": checks,
        "sweep_summaries": [s.summary() for s in sweeps or []],
    })
    print(f"wrote {out / 'verification_report.json'}")
    return 0 if ok else 3


def cmd_selftest(cfg):
    checks, _ = _run_families(cfg, quick=True, sweep=False)
    ok = _print_checks(checks)
    print("selftest", "passed" if ok else "FAILED")
    return 0 if ok else 3


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        handler = {
            "bifurcate": cmd_bifurcate,
            "branch": cmd_branch,
            "evolve": cmd_evolve,
            "verify": cmd_verify,
            "selftest": cmd_selftest,
        }[args.command]
        return handler(cfg)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
