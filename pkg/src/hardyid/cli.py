"""Command-line front end: experiment sweeps emitting deterministic CSV/JSON.

Subcommands: mu-h2, identify, mu-da, estimate, kappa, oracle.  Exit codes:
0 ok, 2 config error, 3 ill-conditioned configuration, 4 solver
non-convergence, 5 oracle failure, 1 internal bound violation.

CSV dialect: comma-separated, mandatory header, UTF-8, LF line endings,
complex values split into _re/_im columns, reals printed with 17 significant
digits so files round-trip bit-exactly.  Rows are emitted in sorted order and
runs with identical configuration (seeds included) are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from .core import ModelSetParams, PointConfiguration, eval_series, sample_model_function
from .disc import kappa_shape_sweep, optimal_weights
from .errors import EmptyFeasibleSetError, IllConditionedConfigurationError, SolverConvergenceError
from .h2 import build_gram_pair, compatibility_indicator, equispaced_mu_closed_form, h2_error, optimal_identify
from .l1 import SolverConfig
from . import oracle as fd_oracle

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_CONDITIONING = 3
EXIT_SOLVER = 4
EXIT_ORACLE = 5

# Relative slack applied when enforcing error <= mu * eps at emit time; the
# Gramian error formula carries O(sqrt(eps_machine)) cancellation noise and
# the inequality is attained up to rounding at n = m.
_BOUND_SLACK = 1e-4


class ConfigError(ValueError):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: str, header: Sequence[str], rows: List[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_n_range(text: str, m: int) -> List[int]:
    """Either a single integer or an inclusive range a:b."""
    if ":" in text:
        lo_s, hi_s = text.split(":", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(text)
    if not (1 <= lo <= hi <= m):
        raise ConfigError(f"--n must satisfy 1 <= a <= b <= m, got '{text}' with m={m}")
    return list(range(lo, hi + 1))


_FLAG_SPEC = {
    "m": int,
    "n": str,
    "r": float,
    "scheme": str,
    "seed": int,
    "zeta0-angle": float,
    "grid-size": int,
    "tol-feas": float,
    "tol-gap": float,
    "rho": float,
    "M": float,
    "out": str,
    "instances": int,
}


def _merge_config(args: argparse.Namespace, defaults: Dict) -> Dict:
    """defaults < JSON config file < explicit flags."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read --config file: {exc}")
        if not isinstance(loaded, dict):
            raise ConfigError("--config JSON must be a flat object")
        for key, value in loaded.items():
            if key not in _FLAG_SPEC:
                raise ConfigError(f"unknown key '{key}' in --config")
            if key not in merged:
                raise ConfigError(f"key '{key}' not accepted by this subcommand")
            merged[key] = _FLAG_SPEC[key](value)
    for key in merged:
        flag_value = getattr(args, key.replace("-", "_"), None)
        if flag_value is not None:
            merged[key] = flag_value
    return merged


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _schemes(value: str) -> List[str]:
    _require(value in ("equi", "random", "both"), "--scheme must be equi, random, or both")
    return ["equi", "random"] if value == "both" else [value]


def _circle_config(scheme: str, m: int, r: float, seed: int) -> PointConfiguration:
    if scheme == "equi":
        return PointConfiguration.equispaced_circle(m, r)
    return PointConfiguration.random_circle(m, r, seed)


def _torus_config(scheme: str, m: int, seed: int) -> PointConfiguration:
    if scheme == "equi":
        return PointConfiguration.equispaced_torus(m)
    return PointConfiguration.random_torus(m, seed)


def cmd_mu_h2(cfg: Dict) -> int:
    _require(cfg["m"] >= 1, "--m must be >= 1")
    _require(0.0 < cfg["r"] < 1.0, "--r must lie in (0, 1) for circle sampling")
    n_list = _parse_n_range(cfg["n"], cfg["m"])
    rows, code = [], EXIT_OK
    for scheme in _schemes(cfg["scheme"]):
        config = _circle_config(scheme, cfg["m"], cfg["r"], cfg["seed"])
        closed = equispaced_mu_closed_form(cfg["r"], cfg["m"]) if scheme == "equi" else None
        seed = cfg["seed"] if scheme == "random" else None
        for n in n_list:
            try:
                mu = compatibility_indicator(build_gram_pair(config, n))
                status = "ok"
            except IllConditionedConfigurationError:
                mu, status, code = None, "ill-conditioned", EXIT_CONDITIONING
            rows.append(["mu-h2", scheme, cfg["m"], n, cfg["r"], seed, mu, closed, status])
    header = ["experiment", "point_scheme", "m", "n", "r", "seed", "mu", "mu_closed_form", "status"]
    _write_csv(cfg["out"], header, rows)
    return code


def cmd_identify(cfg: Dict) -> int:
    _require(cfg["m"] >= 1, "--m must be >= 1")
    _require(0.0 < cfg["r"] < 1.0, "--r must lie in (0, 1) for circle sampling")
    _require(cfg["rho"] > 1.0, "--rho must be > 1")
    _require(cfg["M"] > 0.0, "--M must be > 0")
    n_list = _parse_n_range(cfg["n"], cfg["m"])
    params = ModelSetParams(n=1, rho=cfg["rho"], scale=cfg["M"])
    length = max(params.default_truncation(), cfg["m"])
    truth = sample_model_function(params, length, cfg["seed"])
    rows, code = [], EXIT_OK
    for scheme in _schemes(cfg["scheme"]):
        config = _circle_config(scheme, cfg["m"], cfg["r"], cfg["seed"])
        y = np.array([eval_series(truth, z) for z in config.points])
        seed = cfg["seed"]
        for n in n_list:
            try:
                gram = build_gram_pair(config, n)
                mu = compatibility_indicator(gram)
                err = h2_error(truth, optimal_identify(gram, y))
                status = "ok"
            except IllConditionedConfigurationError:
                mu, err, status, code = None, None, "ill-conditioned", EXIT_CONDITIONING
            eps_n = truth.tail_norm(n)
            bound = None if mu is None else mu * eps_n
            if err is not None and err > bound * (1.0 + _BOUND_SLACK) + 1e-12:
                print(
                    f"identify: h2_error {err:.6e} exceeds bound {bound:.6e} at n={n} ({scheme})",
                    file=sys.stderr,
                )
                return EXIT_BOUND_VIOLATION
            rows.append(
                ["identify", scheme, cfg["m"], n, cfg["r"], seed, mu, err, eps_n, bound,
                 cfg["rho"], cfg["M"], length, status]
            )
    header = ["experiment", "point_scheme", "m", "n", "r", "seed", "mu", "h2_error", "eps_n",
              "bound", "model_rho", "model_scale", "trunc_len", "status"]
    _write_csv(cfg["out"], header, rows)
    return code


def _solver_config(cfg: Dict) -> SolverConfig:
    return SolverConfig(tol_feas=cfg["tol-feas"], tol_gap=cfg["tol-gap"])


def _zeta0(cfg: Dict) -> complex:
    angle = cfg["zeta0-angle"]
    if angle is None:
        angle = math.pi / cfg["m"]
    return complex(np.exp(1j * angle))


def cmd_mu_da(cfg: Dict) -> int:
    _require(cfg["m"] >= 1, "--m must be >= 1")
    n_list = _parse_n_range(cfg["n"], cfg["m"])
    zeta0 = _zeta0(cfg)
    solver = _solver_config(cfg)
    rows, code = [], EXIT_OK
    for scheme in _schemes(cfg["scheme"]):
        config = _torus_config(scheme, cfg["m"], cfg["seed"])
        seed = cfg["seed"] if scheme == "random" else None
        for n in n_list:
            try:
                w = optimal_weights(config, zeta0, n, solver)
                mu, gap, status = w.mu, w.certificate.duality_gap, "ok"
            except SolverConvergenceError:
                mu, gap, status, code = None, None, "non-converged", EXIT_SOLVER
            rows.append(["mu-da", scheme, cfg["m"], n, zeta0.real, zeta0.imag, seed, mu, gap,
                         cfg["tol-feas"], cfg["tol-gap"], status])
    header = ["experiment", "point_scheme", "m", "n", "zeta0_re", "zeta0_im", "seed", "mu",
              "gap", "tol_feas", "tol_gap", "status"]
    _write_csv(cfg["out"], header, rows)
    return code


def cmd_estimate(cfg: Dict) -> int:
    _require(cfg["m"] >= 1, "--m must be >= 1")
    _require(cfg["rho"] > 1.0, "--rho must be > 1")
    _require(cfg["M"] > 0.0, "--M must be > 0")
    n_list = _parse_n_range(cfg["n"], cfg["m"])
    zeta0 = _zeta0(cfg)
    solver = _solver_config(cfg)
    params = ModelSetParams(n=1, rho=cfg["rho"], scale=cfg["M"])
    length = max(params.default_truncation(), cfg["m"])
    truth = sample_model_function(params, length, cfg["seed"])
    truth_at_zeta0 = eval_series(truth, zeta0)
    rows, code = [], EXIT_OK
    for scheme in _schemes(cfg["scheme"]):
        config = _torus_config(scheme, cfg["m"], cfg["seed"])
        y = np.array([eval_series(truth, z) for z in config.points])
        seed = cfg["seed"]
        for n in n_list:
            try:
                w = optimal_weights(config, zeta0, n, solver)
                mu, gap, status = w.mu, w.certificate.duality_gap, "ok"
                est_error = abs(truth_at_zeta0 - complex(np.sum(w.a * y)))
            except SolverConvergenceError:
                mu, gap, est_error, status, code = None, None, None, "non-converged", EXIT_SOLVER
            eps_n = truth.tail_l1(n)
            bound = None if mu is None else mu * eps_n
            if est_error is not None and est_error > bound * (1.0 + 1e-6) + 1e-9:
                print(
                    f"estimate: error {est_error:.6e} exceeds bound {bound:.6e} at n={n} ({scheme})",
                    file=sys.stderr,
                )
                return EXIT_BOUND_VIOLATION
            rows.append(["estimate", scheme, cfg["m"], n, zeta0.real, zeta0.imag, seed, mu, gap,
                         est_error, bound, eps_n, cfg["rho"], cfg["M"], length,
                         cfg["tol-feas"], cfg["tol-gap"], status])
    header = ["experiment", "point_scheme", "m", "n", "zeta0_re", "zeta0_im", "seed", "mu", "gap",
              "est_error", "bound", "eps_n", "model_rho", "model_scale", "trunc_len",
              "tol_feas", "tol_gap", "status"]
    _write_csv(cfg["out"], header, rows)
    return code


def cmd_kappa(cfg: Dict) -> int:
    _require(cfg["m"] >= 1, "--m must be >= 1")
    n_list = _parse_n_range(cfg["n"], cfg["m"])
    grid_size = cfg["grid-size"] if cfg["grid-size"] is not None else 8 * cfg["m"]
    _require(grid_size >= 8 * cfg["m"], f"--grid-size must be >= 8 m = {8 * cfg['m']}")
    solver = _solver_config(cfg)
    try:
        table = kappa_shape_sweep(cfg["m"], n_list, grid_size, solver)
    except SolverConvergenceError as exc:
        print(f"kappa: {exc} (zeta0 = {exc.zeta0})", file=sys.stderr)
        return EXIT_SOLVER
    rows = []
    for row in table:
        ratio = row.kappa / row.reference if row.reference > 0 else None
        rows.append(["kappa", cfg["m"], row.n, row.mu_sup, row.kappa, row.reference, ratio,
                     grid_size, cfg["tol-feas"], cfg["tol-gap"], "ok"])
    header = ["experiment", "m", "n", "mu_sup", "kappa", "reference", "ratio", "grid_size",
              "tol_feas", "tol_gap", "status"]
    _write_csv(cfg["out"], header, rows)
    return EXIT_OK


def _oracle_instance_checks(d: int, m: int, n: int, seed: int) -> List[Dict]:
    inst = fd_oracle.random_instance(d, m, n, seed)
    checks = []
    f_star = fd_oracle.constrained_min_dist(inst)
    resid_v = f_star - inst.v_basis @ (inst.v_basis.conj().T @ f_star) if n else f_star
    ortho_v = float(np.max(np.abs(inst.v_basis.conj().T @ resid_v))) if n else 0.0
    kernel = fd_oracle._kernel_basis(inst)
    ortho_k = float(np.max(np.abs(kernel.conj().T @ resid_v))) if kernel.shape[1] else 0.0
    data_fit = float(np.linalg.norm(inst.l_map @ f_star - inst.data))
    checks.append({"name": f"orthogonality_d{d}_m{m}_n{n}_s{seed}",
                   "residual": max(ortho_v, ortho_k, data_fit), "tolerance": 1e-9})
    radius = fd_oracle.local_radius(inst)
    f_plus, f_minus = fd_oracle.extremal_pair(inst)
    attain = abs(0.5 * float(np.linalg.norm(f_plus - f_minus)) - radius)
    checks.append({"name": f"attainment_d{d}_m{m}_n{n}_s{seed}", "residual": attain, "tolerance": 1e-8})
    samples = fd_oracle.sample_feasible(inst, 200, seed + 1)
    mc_sup = float(np.max(np.linalg.norm(samples - f_star[None, :], axis=1)))
    checks.append({"name": f"mc_radius_d{d}_m{m}_n{n}_s{seed}", "residual": max(mc_sup - radius, 0.0),
                   "tolerance": 1e-8})
    return checks


def cmd_oracle(cfg: Dict) -> int:
    _require(cfg["instances"] >= 1, "--instances must be >= 1")
    dims = [(6, 2, 1), (8, 3, 2), (12, 5, 3), (16, 8, 4), (20, 8, 4)]
    _require(all(d <= 64 for d, _, _ in dims), "oracle dimensions must stay <= 64")
    checks: List[Dict] = []
    for k in range(cfg["instances"]):
        d, m, n = dims[k % len(dims)]
        checks.extend(_oracle_instance_checks(d, m, n, cfg["seed"] + k))

    # Structural conventions and error surfacing.
    rng = np.random.default_rng(cfg["seed"])
    eye_inst = fd_oracle.FiniteRecoveryInstance(
        np.zeros((3, 0), dtype=complex), np.eye(3, dtype=complex),
        rng.standard_normal(3) + 0j, 1.0,
    )
    checks.append({"name": "trivial_kernel_mu_zero", "residual": abs(fd_oracle.finite_mu(eye_inst)),
                   "tolerance": 0.0})
    zero_v = fd_oracle.FiniteRecoveryInstance(
        np.zeros((2, 0), dtype=complex), np.array([[1.0, 1.0 + 0j]]), np.zeros(1, dtype=complex), 0.7,
    )
    checks.append({"name": "zero_data_radius_mu_eps",
                   "residual": abs(fd_oracle.local_radius(zero_v) - 0.7), "tolerance": 1e-12})
    tight = fd_oracle.random_instance(8, 3, 2, cfg["seed"] + 991)
    starved = fd_oracle.FiniteRecoveryInstance(
        tight.v_basis, tight.l_map, tight.data,
        max(fd_oracle._min_dist_value(tight) - 0.1, 0.0),
    )
    try:
        fd_oracle.local_radius(starved)
        checks.append({"name": "empty_feasible_set_error", "residual": 1.0, "tolerance": 0.0,
                       "detail": "expected EmptyFeasibleSetError was not raised"})
    except EmptyFeasibleSetError as exc:
        checks.append({"name": "empty_feasible_set_error", "residual": 0.0, "tolerance": 0.0,
                       "detail": str(exc)})

    for check in checks:
        check["pass"] = bool(check["residual"] <= check["tolerance"] + 1e-300)
    report = {
        "experiment": "oracle",
        "seed": cfg["seed"],
        "instances": cfg["instances"],
        "checks": checks,
        "all_pass": bool(all(c["pass"] for c in checks)),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK if report["all_pass"] else EXIT_ORACLE


_DEFAULTS = {
    "mu-h2": {"m": 64, "n": None, "r": 0.5, "scheme": "both", "seed": 0, "out": None},
    "identify": {"m": 64, "n": None, "r": 0.5, "scheme": "both", "seed": 0, "rho": 2.0,
                 "M": 1.0, "out": None},
    "mu-da": {"m": 64, "n": None, "scheme": "both", "seed": 0, "zeta0-angle": None,
              "tol-feas": 1e-9, "tol-gap": 1e-8, "out": None},
    "estimate": {"m": 64, "n": None, "scheme": "both", "seed": 0, "zeta0-angle": None,
                 "rho": 2.0, "M": 1.0, "tol-feas": 1e-9, "tol-gap": 1e-8, "out": None},
    "kappa": {"m": 64, "n": None, "grid-size": None, "tol-feas": 1e-9, "tol-gap": 1e-6,
              "out": None},
    "oracle": {"seed": 0, "instances": 20, "out": None},
}

_HANDLERS = {
    "mu-h2": cmd_mu_h2,
    "identify": cmd_identify,
    "mu-da": cmd_mu_da,
    "estimate": cmd_estimate,
    "kappa": cmd_kappa,
    "oracle": cmd_oracle,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sysid", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, defaults in _DEFAULTS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="JSON file with flag defaults")
        for key in defaults:
            flag = f"--{key}"
            p.add_argument(flag, dest=key.replace("-", "_"), type=_FLAG_SPEC[key], default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    defaults = dict(_DEFAULTS[args.command])
    try:
        cfg = _merge_config(args, defaults)
        if "n" in cfg and cfg["n"] is None:
            cfg["n"] = f"1:{cfg['m']}"
        if "out" in cfg and not cfg["out"]:
            raise ConfigError("--out is required")
        return _HANDLERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
