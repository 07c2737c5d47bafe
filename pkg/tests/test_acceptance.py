"""Acceptance gate: one test per stated criterion, each printing a PASS line.

Three asserts are expected to fail on mathematical grounds and are kept
as stated rather than loosened; see notes in the individual tests.  The
quadratic-form and trace objectives have even pullbacks at their critical
points, so every order->=2 retraction produces third-order (not
second-order) residual decay and cubic (not quadratic) Newton contraction.
Both behaviors satisfy the underlying inequalities with room to spare; the
two-sided "slope ~= 2" bands do not describe them.

Run with: pytest tests/test_acceptance.py -v -s
"""

import time

import numpy as np

import geonewton as gn
from geonewton import cli

EXP = gn.RetractionSpec("exp")
PROJ = gn.RetractionSpec("projection")
PERT = gn.RetractionSpec("perturbed")
CAY = gn.RetractionSpec("cayley")

SPHERE = gn.Sphere(3)
ROTATIONS = gn.Rotations3()


def ok(criterion, message):
    print(f"[criterion {criterion}] PASS - {message}")


# ---------------------------------------------------------------------------
# 1. retraction order estimates


def test_c1_retraction_orders():
    sweep_s = gn.make_sweep(gn.random_point(SPHERE, gn.rng_for(1)), 5, seed=2)
    sweep_r = gn.make_sweep(gn.random_point(ROTATIONS, gn.rng_for(3)), 5, seed=4)
    results = {}
    for name, spec, sweep in [
        ("projection", PROJ, sweep_s),
        ("perturbed", PERT, sweep_s),
        ("exp", EXP, sweep_s),
        ("cayley", CAY, sweep_r),
    ]:
        start = time.perf_counter()
        results[name] = gn.estimate_retraction_order(spec, sweep)
        assert time.perf_counter() - start < 1.0, f"{name} sweep exceeded 1 s"
    assert 2.8 <= results["projection"].slope <= 3.2
    assert 1.8 <= results["perturbed"].slope <= 2.2
    assert results["exp"].saturated
    assert 2.8 <= results["cayley"].slope <= 3.2
    ok(1, "orders: projection %.2f, perturbed %.2f, cayley %.2f, exp saturated"
       % (results["projection"].slope, results["perturbed"].slope, results["cayley"].slope))


# ---------------------------------------------------------------------------
# 2. gradient/Hessian extraction vs analytic oracles, 50 seeded instances


def test_c2_derivative_extraction():
    for seed in range(50):
        n = 3 + seed % 4
        objective = gn.seeded_instance(seed, "rayleigh", n)
        sphere = gn.Sphere(n)
        p = gn.random_point(sphere, gn.rng_for(10_000 + seed))
        basis = sphere.tangent_basis(p)
        exact_grad = objective.analytic_gradient(p)
        exact_hess = objective.analytic_hessian_matrix(basis)
        for spec in (EXP, PROJ):
            fd_grad = gn.gradient_fd(objective, spec, p, basis=basis).vector
            assert np.linalg.norm(fd_grad.coords - exact_grad.coords) <= 1e-6 * (
                1.0 + exact_grad.norm()
            )
            fd_hess = gn.hessian_fd(objective, spec, p, basis=basis)
            assert np.linalg.norm(fd_hess.matrix - exact_hess, "fro") <= 1e-4 * (
                1.0 + np.linalg.norm(exact_hess, "fro")
            )
    ok(2, "50 seeded instances: gradient within 1e-6, Hessian within 1e-4, exp and projection")


# ---------------------------------------------------------------------------
# 3. Hessian retraction-dependence


def test_c3_hessian_retraction_dependence():
    checked = 0
    seed = 0
    while checked < 20:
        seed += 1
        objective = gn.seeded_instance(seed, "rayleigh", 3)
        p = gn.random_point(SPHERE, gn.rng_for(20_000 + seed))
        grad = objective.analytic_gradient(p)
        if grad.norm() < 0.1:
            continue
        basis = SPHERE.tangent_basis(p)
        h_exp = gn.hessian_fd(objective, EXP, p, basis=basis)
        h_pert = gn.hessian_fd(objective, PERT, p, basis=basis)
        shift = 2.0 * np.dot(grad.coords, gn.perturbation_direction(p).coords)
        gap = h_pert.matrix - h_exp.matrix - shift * np.eye(2)
        assert np.linalg.norm(gap, "fro") <= 1e-3
        checked += 1
    for seed in range(3):
        objective = gn.seeded_instance(seed, "rayleigh", 3)
        _, vecs = np.linalg.eigh(objective.matrix)
        for idx in range(3):
            p = SPHERE.point(vecs[:, idx])
            basis = SPHERE.tangent_basis(p)
            h_exp = gn.hessian_fd(objective, EXP, p, basis=basis)
            h_pert = gn.hessian_fd(objective, PERT, p, basis=basis)
            assert np.linalg.norm(h_pert.matrix - h_exp.matrix, "fro") <= 1e-4
    ok(3, "20 non-critical points match 2<grad,u>I within 1e-3; critical points within 1e-4")


# ---------------------------------------------------------------------------
# 4. residual decay toward a critical point


def _residual_estimate(spec):
    objective = gn.Rayleigh(np.diag([3.0, 2.0, 1.0]))
    sweep = gn.make_sweep(SPHERE.point([1, 0, 0]), 3, seed=30)
    return gn.critical_residual_slope(objective, spec, sweep)


def test_c4_residual_slope_perturbed_order1():
    est = _residual_estimate(PERT)
    assert est.r_squared >= 0.98
    assert 1.8 <= est.slope <= 2.2
    ok(4, f"perturbed residual slope {est.slope:.3f}, R^2 {est.r_squared:.4f}")


def test_c4_residual_slope_exponential():
    est = _residual_estimate(EXP)
    assert est.r_squared >= 0.98
    # Stated band [1.9, 2.1].  The measurement is ~3.0: the quadratic form's
    # pullback has no cubic term at critical points, so |grad + Hess v|
    # decays one order faster than the guaranteed |v|^2.  The inequality the
    # band was meant to check therefore holds, but the band itself cannot:
    # see the residual-decay note in the project decision log.
    assert 1.9 <= est.slope <= 2.1, (
        f"measured residual slope {est.slope:.3f} under the exponential retraction; "
        "the quadratic-form objective decays cubically at critical anchors, so the "
        "two-sided band [1.9, 2.1] is unattainable (the underlying bound "
        "|grad + Hess v| <~ |v|^2 is satisfied with room to spare)"
    )
    ok(4, f"exponential residual slope {est.slope:.3f}")


# ---------------------------------------------------------------------------
# 5. distance deviation


def test_c5_distance_deviation():
    cases = [(SPHERE, (EXP, PROJ, PERT), 40), (ROTATIONS, (EXP, CAY), 50)]
    for manifold, specs, seed_base in cases:
        p = gn.random_point(manifold, gn.rng_for(seed_base))
        rng = gn.rng_for(seed_base + 1)
        pairs = [(gn.random_tangent(p, rng), gn.random_tangent(p, rng)) for _ in range(5)]
        for spec in specs:
            for v, w in pairs:
                est = gn.distance_deviation_slope(spec, v, w)
                assert est.saturated or est.slope >= 1.9
    ok(5, "deviation slope >= 1.9 for every family on both manifolds, 5 pairs each")


# ---------------------------------------------------------------------------
# 6. cubic Taylor remainder


def test_c6_taylor_remainder():
    p = gn.random_point(SPHERE, gn.rng_for(60))
    sweep = gn.make_sweep(p, 3, seed=61)
    rayleigh = gn.seeded_instance(0, "rayleigh", 3)
    for spec in (EXP, PROJ, PERT):
        est = gn.taylor_remainder_slope(rayleigh, spec, sweep)
        assert est.saturated or 2.7 <= est.slope <= 3.3
    q = gn.random_point(ROTATIONS, gn.rng_for(62))
    sweep_r = gn.make_sweep(q, 3, seed=63)
    procrustes = gn.seeded_instance(0, "procrustes")
    for spec in (EXP, CAY):
        est = gn.taylor_remainder_slope(procrustes, spec, sweep_r)
        assert est.saturated or 2.7 <= est.slope <= 3.3
    ok(6, "Taylor remainder slope within [2.7, 3.3] for both objectives, all families")


# ---------------------------------------------------------------------------
# 7. local contraction rate of the Newton iteration


def _newton_sweep(objective, p_star, manifold, spec, seed):
    """20 starts at seeded distances in [1e-3, 1e-1]; returns the pooled pair
    fit, the worst per-pair contraction constant, and the worst single-step
    constant over the starts.

    The stop tolerance 1e-9 keeps every recorded pair above the
    finite-difference distance floor; the 1e-9 pair floor discards the one
    terminal measurement that lands on it.
    """
    config = gn.NewtonConfig(retraction=spec, tol=1e-9, max_iter=20)
    rng = gn.rng_for(seed)
    e_from, e_to = [], []
    first_step_ratios = []
    for _ in range(20):
        d0 = 10.0 ** rng.uniform(-3.0, -1.0)
        p0 = manifold.exp_map(gn.random_tangent(p_star, rng).scaled(d0))
        trace = gn.newton_run(objective, config, p0)
        assert trace.status == gn.NewtonStatus.CONVERGED
        errors = [manifold.geodesic_distance(q, p_star) for q in trace.points]
        first_step_ratios.append(errors[1] / errors[0] ** 2)
        for a, b in zip(errors, errors[1:]):
            if a > 1e-9 and b > 1e-9:
                e_from.append(a)
                e_to.append(b)
    est = gn.fit_loglog(e_from, e_to, floor=1e-9)
    pair_ratios = [b / a**2 for a, b in zip(e_from, e_to)]
    return est, max(pair_ratios + first_step_ratios)


def test_c7_rate_perturbed_order1():
    objective = gn.seeded_instance(42, "rayleigh", 3)
    p_star = gn.rayleigh_top_eigenvector(objective)
    est, worst = _newton_sweep(objective, p_star, SPHERE, PERT, seed=70)
    assert worst <= 100.0
    assert 1.8 <= est.slope <= 2.2
    ok(7, f"order-1 retraction: rate {est.slope:.3f} over {est.points_used} pairs, "
          f"worst step constant {worst:.2f}; quadratic convergence with an order-1 retraction")


def test_c7_rate_exponential():
    objective = gn.seeded_instance(42, "rayleigh", 3)
    p_star = gn.rayleigh_top_eigenvector(objective)
    est, worst = _newton_sweep(objective, p_star, SPHERE, EXP, seed=70)
    assert worst <= 100.0
    # Stated band [1.8, 2.2].  Measured ~3.0: with an order-2 retraction the
    # pullback's cubic coefficient vanishes at the eigenvector, so the error
    # recursion is e' ~= C e^3, faster than the guaranteed quadratic rate.
    # See the decision log.
    assert 1.8 <= est.slope <= 2.2, (
        f"measured contraction rate {est.slope:.3f} under the exponential retraction; "
        "the quadratic-form objective yields cubic one-step contraction under any "
        "order-2 retraction, so the two-sided band [1.8, 2.2] is unattainable "
        "(d(step(p), p*) <= 100 d(p, p*)^2 itself holds: worst constant "
        f"{worst:.3f})"
    )
    ok(7, f"exponential: rate {est.slope:.3f}")


def test_c7_rate_cayley_procrustes():
    objective = gn.seeded_instance(42, "procrustes")
    p_star = objective.polar_factor()
    est, worst = _newton_sweep(objective, p_star, ROTATIONS, CAY, seed=71)
    assert worst <= 100.0
    # Stated band [1.8, 2.2]; measured ~2.9 for the same reason as the
    # exponential case (the trace objective's pullback is even at the polar
    # factor).  See the decision log.
    assert 1.8 <= est.slope <= 2.2, (
        f"measured contraction rate {est.slope:.3f} under the Cayley retraction; "
        "superquadratic for the trace objective (worst step constant "
        f"{worst:.3f} <= 100 holds)"
    )
    ok(7, f"cayley: rate {est.slope:.3f}")


# ---------------------------------------------------------------------------
# 8. practicality of the reference run


def test_c8_newton_practicality():
    objective = gn.Rayleigh(np.diag([3.0, 2.0, 1.0]))
    p0 = SPHERE.point(np.array([0.1, 0.1, 1.0]) / np.linalg.norm([0.1, 0.1, 1.0]))
    trace = gn.newton_run(objective, gn.NewtonConfig(retraction=EXP), p0)
    assert trace.status == gn.NewtonStatus.CONVERGED
    assert trace.grad_norms[-1] <= 1e-12
    assert trace.iterations <= 6
    ok(8, f"converged in {trace.iterations} iterations with gradient norm "
          f"{trace.grad_norms[-1]:.2e} <= 1e-12")


# ---------------------------------------------------------------------------
# 9. CLI determinism


def test_c9_cli_determinism(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    trace_path = tmp_path / "trace.json"
    assert cli.main(["newton", "--seed", "11", "--tol", "1e-9", "--format", "json",
                     "--output", str(trace_path)]) == 0
    commands = [
        ["order", "--retraction", "projection", "--seed", "11"],
        ["newton", "--seed", "11", "--tol", "1e-9"],
        ["lemma1", "--retraction", "perturbed", "--seed", "11"],
        ["lemma2", "--retraction", "exp", "--seed", "11"],
        ["taylor", "--retraction", "exp", "--seed", "11"],
        ["rate", str(trace_path)],
    ]
    for argv in commands:
        for fmt in ("csv", "json"):
            out = tmp_path / f"{argv[0]}.{fmt}"
            code = cli.main(argv + ["--format", fmt, "--output", str(out)])
            assert code == 0, argv
            first = out.read_bytes()
            assert cli.main(argv + ["--format", fmt, "--output", str(out)]) == code
            assert out.read_bytes() == first, argv
    ok(9, "all six commands byte-identical across reruns, csv and json")


# ---------------------------------------------------------------------------
# 10. degenerate Hessians surface instead of failing silently


def test_c10_singular_hessian_surfaced():
    # Repeated eigenvalue 2: the whole circle through e2 and e3 is critical,
    # so the tangent Hessian at the target has a zero eigenvalue.  The FD
    # Hessian floors that zero near 1e-8, hence the guard cap is set to 1e6
    # (below 2/1e-8) for the degeneracy to be detectable at all; with the cap
    # at its 1e12 default the zero hides inside finite-difference noise.
    objective = gn.Rayleigh(np.diag([3.0, 2.0, 2.0]))
    start = np.array([0.01, 1.0, 0.015])
    p0 = SPHERE.point(start / np.linalg.norm(start))
    trace = gn.newton_run(objective, gn.NewtonConfig(retraction=EXP, cond_cap=1e6), p0)
    assert trace.status == gn.NewtonStatus.SINGULAR_HESSIAN
    ok(10, f"degenerate instance reported singular_hessian after {trace.iterations} iterations")
