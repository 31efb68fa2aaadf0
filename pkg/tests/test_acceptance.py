"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Where a bound is attained up to rounding (the optimal-error bound at n = m is
an equality to ~1e-19 relative), assertions carry explicitly documented
floating-point headroom; every slack is orders of magnitude below anything an
algorithmic defect would produce.
"""

import json
import time

import numpy as np
import pytest

from hardyid.cli import main
from hardyid.core import ModelSetParams, PointConfiguration, TaylorSeries, eval_series, sample_model_function
from hardyid.disc import kappa_shape_sweep, optimal_weights
from hardyid.h2 import (
    build_gram_pair,
    compatibility_indicator,
    equispaced_circulant_eig,
    equispaced_mu_closed_form,
    gram_product,
    h2_error,
    interpolate_equispaced,
    optimal_identify,
    recovery_error_coefficients,
)
from hardyid.l1 import ComplexL1Problem, SolveStatus, SolverConfig, solve
from hardyid.oracle import (
    FiniteRecoveryInstance,
    constrained_min_dist,
    extremal_pair,
    finite_mu,
    local_radius,
    random_instance,
    sample_feasible,
)
from oracles import brute_force_l1, complex_gaussian, lagrange_weights

R_GRID = (0.3, 0.5, 0.9)
M_GRID = (4, 8, 16, 32)


def report(name: str, ok: bool, detail: str = "") -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"{name}: {detail}"


def test_prop2_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for r in R_GRID:
        for m in M_GRID:
            cfg = PointConfiguration.equispaced_circle(m, r)
            ref = equispaced_mu_closed_form(r, m)
            for n in range(1, m + 1):
                mu = compatibility_indicator(build_gram_pair(cfg, n))
                worst = max(worst, abs(mu - ref))
    elapsed = time.perf_counter() - t0
    report(
        "prop2-closed-form",
        worst <= 1e-10 and elapsed < 5.0,
        f"(worst dev {worst:.2e}, {elapsed:.2f}s)",
    )


def test_diag_form_identity():
    worst = 0.0
    for r in R_GRID:
        for m in M_GRID:
            cfg = PointConfiguration.equispaced_circle(m, r)
            target = 1.0 - r ** (2 * m)
            for n in range(1, m + 1):
                P = gram_product(build_gram_pair(cfg, n))
                worst = max(worst, float(np.max(np.abs(P - target * np.eye(n)))))
    report("diag-form-identity", worst <= 1e-10, f"(worst dev {worst:.2e})")


def test_circulant_eigendecomposition():
    worst = 0.0
    r = 0.5
    for m in (2, 4, 8, 16):
        gram = build_gram_pair(PointConfiguration.equispaced_circle(m, r), m)
        U, d = equispaced_circulant_eig(r, m)
        expected_d = m * r ** (2 * np.arange(m)) / (1 - r ** (2 * m))
        assert np.allclose(d, expected_d, atol=0)
        worst = max(worst, float(np.max(np.abs(U @ np.diag(d) @ U.conj().T - gram.H))))
    report("circulant-eig", worst <= 1e-10, f"(worst reconstruction {worst:.2e})")


def test_theorem1_optimal_error_bound():
    m, r = 16, 0.5
    params = ModelSetParams(n=1, rho=2.0, scale=1.0)
    length = params.default_truncation()
    cfg = PointConfiguration.equispaced_circle(m, r)
    mu = equispaced_mu_closed_form(r, m)
    grams = {n: build_gram_pair(cfg, n) for n in range(1, m + 1)}

    violations = 0
    worst_poly = 0.0
    for seed in range(200):
        truth = sample_model_function(params, length, seed)
        y = np.array([eval_series(truth, z) for z in cfg.points])
        for n in range(1, m + 1):
            rec = optimal_identify(grams[n], y)
            bound = mu * truth.tail_norm(n)
            # The bound is an equality up to ~1e-19 relative at n = m; the two
            # error routes carry documented rounding headroom (Gramian route
            # cancels at sqrt(eps), the coefficient route at ~1e-13).
            if h2_error(truth, rec) > bound * (1 + 2e-4):
                violations += 1
            if recovery_error_coefficients(truth, rec) > bound * (1 + 1e-11):
                violations += 1
            # exact recovery of polynomial truths
            poly = TaylorSeries(truth.coeffs[:n].copy())
            y_poly = np.array([eval_series(poly, z) for z in cfg.points])
            rec_poly = optimal_identify(grams[n], y_poly)
            worst_poly = max(worst_poly, recovery_error_coefficients(poly, rec_poly))
    report(
        "theorem1-error-bound",
        violations == 0 and worst_poly <= 1e-9,
        f"(violations {violations}, worst polynomial recovery {worst_poly:.2e})",
    )


def test_remark_interpolation_equivalence():
    m, r = 16, 0.5
    params = ModelSetParams(n=1, rho=2.0, scale=1.0)
    length = params.default_truncation()
    cfg = PointConfiguration.equispaced_circle(m, r)
    gram = build_gram_pair(cfg, m)
    factor = 1.0 / np.sqrt(1 - r ** (2 * m))

    worst_coeff = 0.0
    min_slack = np.inf
    for seed in range(100):
        truth = sample_model_function(params, length, seed)
        y = np.array([eval_series(truth, z) for z in cfg.points])
        rec = optimal_identify(gram, y)
        interp = interpolate_equispaced(truth, r, m)
        worst_coeff = max(worst_coeff, float(np.max(np.abs(rec.c - interp.coeffs))))
        worst_coeff = max(worst_coeff, float(np.max(np.abs(rec.d))))
        min_slack = min(min_slack, factor * truth.h2_norm() - interp.h2_norm())
    report(
        "remark-near-best-interpolation",
        worst_coeff <= 1e-8 and min_slack >= 0.0,
        f"(coeff dev {worst_coeff:.2e}, min norm-bound slack {min_slack:.2e})",
    )


def test_theorem2_desk_instances():
    solver = SolverConfig(tol_feas=1e-11, tol_gap=1e-9, max_iter=200_000)
    gaps = []

    w = optimal_weights(PointConfiguration.equispaced_torus(5), np.exp(0.4j), 1, solver)
    ok_const = abs(w.mu - 2.0) <= 1e-6
    gaps.append(w.certificate.duality_gap)

    w = optimal_weights(PointConfiguration.equispaced_torus(2), 1j, 2, solver)
    ok_hand = abs(w.mu - (1 + np.sqrt(2))) <= 1e-6
    gaps.append(w.certificate.duality_gap)

    ok_lagrange = True
    for m in (4, 8):
        cfg = PointConfiguration.equispaced_torus(m)
        z0 = np.exp(1j * np.pi / m)
        w = optimal_weights(cfg, z0, m, solver)
        ref = 1.0 + float(np.sum(np.abs(lagrange_weights(cfg.points, z0))))
        ok_lagrange &= abs(w.mu - ref) <= 1e-6
        gaps.append(w.certificate.duality_gap)

    ok_gaps = max(gaps) <= 1e-8
    report(
        "theorem2-desk-instances",
        ok_const and ok_hand and ok_lagrange and ok_gaps,
        f"(max gap {max(gaps):.2e})",
    )


def test_solver_matches_brute_force_oracle():
    tight = SolverConfig(tol_feas=1e-11, tol_gap=1e-10, max_iter=200_000)
    worst = 0.0
    for m in range(1, 5):
        for n in range(1, min(m, 2) + 1):
            for seed in range(50):
                rng = np.random.default_rng(1000 * m + 100 * n + seed)
                A = complex_gaussian(rng, n, m)
                b = complex_gaussian(rng, n)
                sol = solve(ComplexL1Problem(A, b), tight)
                assert sol.status is SolveStatus.OPTIMAL
                worst = max(worst, abs(sol.objective - brute_force_l1(A, b)))

    rng = np.random.default_rng(77)
    A = complex_gaussian(rng, 2, 4)
    b = complex_gaussian(rng, 2)
    base = solve(ComplexL1Problem(A, b), tight).objective
    worst_scale = max(
        abs(solve(ComplexL1Problem(A, t * b), tight).objective - t * base) for t in (0.5, 2.0, 10.0)
    )
    worst_phase = max(
        abs(solve(ComplexL1Problem(A, np.exp(1j * th) * b), tight).objective - base)
        for th in (0.3, 1.2, 2.5)
    )
    report(
        "solver-brute-force-oracle",
        worst <= 1e-4 and worst_scale <= 1e-8 * 11 and worst_phase <= 1e-8,
        f"(worst oracle dev {worst:.2e}, scale {worst_scale:.2e}, phase {worst_phase:.2e})",
    )


def test_prop3_shape_sweep():
    t0 = time.perf_counter()
    solver = SolverConfig(tol_feas=1e-9, tol_gap=1e-6, max_iter=60_000)
    n_list = [1, 8, 16, 32, 48, 56, 60, 63, 64]
    rows = kappa_shape_sweep(64, n_list, 512, solver)
    elapsed = time.perf_counter() - t0

    kappas = [row.kappa for row in rows]
    nonneg = all(k >= 0.0 for k in kappas)
    nondecr = all(b >= a for a, b in zip(kappas, kappas[1:]))
    small_start = rows[0].kappa <= 0.05
    ratios = [row.kappa / row.reference for row in rows if row.n >= 8]
    band_ok = min(ratios) >= max(ratios) / 10.0
    report(
        "prop3-shape",
        nonneg and nondecr and small_start and band_ok and elapsed < 120.0,
        f"(kappa(1) {rows[0].kappa:.2e}, ratio band [{min(ratios):.3f}, {max(ratios):.3f}], {elapsed:.1f}s)",
    )


def test_appendix_oracle():
    dims = [(8, 3, 2), (12, 5, 3), (16, 8, 4), (20, 8, 4), (10, 4, 1), (20, 6, 4), (6, 2, 1), (14, 7, 2)]
    worst_attain = worst_mc = worst_ortho = 0.0
    for k in range(100):
        d, m, n = dims[k % len(dims)]
        inst = random_instance(d, m, n, seed=k)
        f_star = constrained_min_dist(inst)
        resid = f_star - inst.v_basis @ (inst.v_basis.conj().T @ f_star)
        worst_ortho = max(worst_ortho, float(np.max(np.abs(inst.v_basis.conj().T @ resid))))
        kernel = np.linalg.svd(inst.l_map)[2][m:].conj().T
        if kernel.size:
            worst_ortho = max(worst_ortho, float(np.max(np.abs(kernel.conj().T @ resid))))
        radius = local_radius(inst)
        f_plus, f_minus = extremal_pair(inst)
        worst_attain = max(worst_attain, abs(0.5 * float(np.linalg.norm(f_plus - f_minus)) - radius))
        samples = sample_feasible(inst, 1000, seed=10_000 + k)
        sup = float(np.max(np.linalg.norm(samples - f_star[None, :], axis=1)))
        worst_mc = max(worst_mc, sup - radius)
    report(
        "appendix-oracle",
        worst_attain <= 1e-8 and worst_mc <= 1e-8 and worst_ortho <= 1e-9,
        f"(attainment {worst_attain:.2e}, mc excess {worst_mc:.2e}, orthogonality {worst_ortho:.2e})",
    )


def test_truncation_cross_check():
    r, m, N = 0.5, 8, 40  # 0.5**40 ~ 9e-13
    cfg = PointConfiguration.equispaced_circle(m, r)
    powers = np.vstack([np.array([z**j for j in range(N)]) for z in cfg.points])
    worst = 0.0
    for n in (1, 4, 8):
        basis = np.eye(N, dtype=complex)[:, :n]
        inst = FiniteRecoveryInstance(basis, powers, np.zeros(m, dtype=complex), 1.0)
        mu_fd = finite_mu(inst)
        mu_h2 = compatibility_indicator(build_gram_pair(cfg, n))
        worst = max(worst, abs(mu_fd - mu_h2))
    report("truncation-cross-check", worst <= 1e-6, f"(worst dev {worst:.2e})")


def test_figure1_qualitative_reproduction():
    m, r = 8, 0.5
    cfg = PointConfiguration.equispaced_circle(m, r)
    mus = [compatibility_indicator(build_gram_pair(cfg, n)) for n in range(1, m + 1)]
    flat = max(mus) - min(mus)

    increases = 0
    for seed in range(10):
        rnd = PointConfiguration.random_circle(m, r, seed)
        mu1 = compatibility_indicator(build_gram_pair(rnd, 1))
        mum = compatibility_indicator(build_gram_pair(rnd, m))
        increases += mum > mu1
    report(
        "figure1-qualitative",
        flat <= 1e-8 and increases >= 9,
        f"(equispaced spread {flat:.2e}, random increases {increases}/10)",
    )


def test_cli_determinism(tmp_path):
    commands = {
        "mu-h2": ["mu-h2", "--m", "8", "--r", "0.5", "--seed", "3", "--out", None],
        "identify": ["identify", "--m", "8", "--r", "0.5", "--seed", "3", "--out", None],
        "mu-da": ["mu-da", "--m", "4", "--seed", "3", "--out", None],
        "estimate": ["estimate", "--m", "4", "--seed", "3", "--out", None],
        "kappa": ["kappa", "--m", "8", "--out", None],
        "oracle": ["oracle", "--seed", "1", "--instances", "5", "--out", None],
    }
    all_ok = True
    for name, args in commands.items():
        out = tmp_path / f"{name}.out"
        args = args[:-1] + [str(out)]
        code1 = main(args)
        first = out.read_bytes()
        code2 = main(args)
        all_ok &= code1 == 0 and code2 == 0 and first == out.read_bytes()
    report("cli-determinism", all_ok)
