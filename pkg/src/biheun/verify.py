"""Acceptance checks: every claim the library makes, tested against independent routes.

Each criterion function returns a CriterionResult; run_acceptance prints one
pass/fail line per criterion. The finite-difference oracle (module
``oracle``) and the power-matching series oracle (below) are deliberately
separate implementations from the production code paths they check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .heun import (
    TERMINATION_RTOL,
    HeunParameters,
    coefficient_sequence,
    horner,
    to_heun_params,
)
from .model import PhysicalSystem, turning_points, vieta_residuals
from .oracle import (
    RadialGrid,
    fd_eigensolve,
    fd_eigenvalues_richardson,
    match_energy,
)
from .quantize import (
    QuasiExactSolution,
    closed_form_n0,
    closed_form_n1,
    constraint_polynomial,
    solve_b_roots,
    solve_family,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str


def power_matching_coefficients(
    a: float, b: float, c: float, d: float, n_coeffs: int
) -> np.ndarray:
    """Series coefficients of the Heun equation by direct operator assembly.

    Multiplies the ODE by z, assembles the banded linear operator acting on
    truncated power series, and solves the triangular system order by order.
    Shares no code with the recurrence in ``heun.coefficient_sequence``.
    """
    D = -b * (a + 1.0) / 2.0 - d / 2.0
    m = n_coeffs + 1
    # op[N, j] = coefficient of z^N in (z * ODE) applied to the monomial z^j
    op = np.zeros((m + 2, m))
    for j in range(m):
        # ((-2 - a + c) z + D) * z^j
        op[j + 1, j] += -2.0 - a + c
        op[j, j] += D
        if j >= 1:
            # (-2 z^2 - b z + (1 + a)) * j z^{j-1}
            op[j + 1, j] += -2.0 * j
            op[j, j] += -b * j
            op[j - 1, j] += (1.0 + a) * j
        if j >= 2:
            # z * j (j-1) z^{j-2}
            op[j - 1, j] += j * (j - 1.0)
    cs = np.zeros(m)
    cs[0] = 1.0
    for N in range(m - 1):
        known = op[N, : N + 1] @ cs[: N + 1]
        cs[N + 1] = -known / op[N, N + 1]
    return cs


def termination_residual(sol: QuasiExactSolution, beta_override: float | None = None) -> float:
    """max(|c_{n+1}|, |c_{n+2}|) relative to max_{j<=n} |c_j| for the solution's
    parameters (optionally with a perturbed beta, holding epsilon fixed)."""
    sys = sol.system()
    if beta_override is not None:
        sys = PhysicalSystem(alpha=sys.alpha, beta=beta_override, k=sys.k, l=sys.l)
    hp = to_heun_params(sys, sol.epsilon)
    a, b, c, D = hp.a, hp.b, hp.c, hp.D
    n = sol.n
    cs = np.zeros(n + 3)
    cs[0] = 1.0
    if n + 2 >= 1:
        cs[1] = -D / (1.0 + a)
    for j in range(1, n + 2):
        cs[j + 1] = ((2.0 * j + a - c) * cs[j - 1] + (j * b - D) * cs[j]) / (
            (j + 1.0) * (a + j + 1.0)
        )
    scale = np.max(np.abs(cs[: n + 1]))
    return float(max(abs(cs[n + 1]), abs(cs[n + 2])) / scale)


def relative_ode_residual_sup(sol: QuasiExactSolution, n_samples: int = 50) -> float:
    """ODE residual / local solution scale, sup over 50 points z in (0, 2 K r4].

    The local scale is the absolute-value (backward-error) evaluation scale:
    every monomial and ODE coefficient enters with |.|, so cancellation in
    H(z) itself does not shrink the denominator below the rounding floor of
    the evaluation.
    """
    hp = sol.heun_parameters()
    cs = sol.heun_coefficients
    j = np.arange(len(cs))
    d1 = cs[1:] * j[1:]
    d2 = d1[1:] * j[1 : len(d1)] if len(d1) > 1 else np.zeros(0)

    sys = sol.system()
    tp = turning_points(sys, sol.epsilon)
    r4 = max((abs(z) for z in tp.roots), default=1.0)
    z_hi = 2.0 * sol.K * max(r4, 1.0)
    worst = 0.0
    for z in np.linspace(z_hi / n_samples, z_hi, n_samples):
        h = horner(cs, z)
        h1 = horner(d1, z) if len(d1) else 0.0
        h2 = horner(d2, z) if len(d2) else 0.0
        coef1 = -2.0 * z - hp.b + (1.0 + hp.a) / z
        coef0 = -2.0 - hp.a + hp.c + hp.D / z
        residual = abs(h2 + coef1 * h1 + coef0 * h)
        scale = max(
            horner(np.abs(d2), z)
            + abs(coef1) * horner(np.abs(d1), z)
            + abs(coef0) * horner(np.abs(cs), z),
            1.0,
        )
        worst = max(worst, residual / scale)
    return worst


def _oracle_gap(
    sol: QuasiExactSolution,
    rel_tol: float,
    points: int = 6000,
    richardson: bool = False,
) -> tuple[float | None, int]:
    """Gap between the solution energy and the closest oracle eigenvalue."""
    sys = sol.system()
    grid = RadialGrid.auto(sys, epsilon_hint=sol.epsilon, points=points)
    count = 2 * sol.n + sol.l + 8
    for _ in range(4):
        if richardson:
            energies = fd_eigenvalues_richardson(sys, grid, count)
        else:
            energies = fd_eigensolve(sys, grid, count).energies
        gaps = np.abs(energies - sol.epsilon)
        i = int(np.argmin(gaps))
        if i < len(energies) - 1 or sol.epsilon <= energies[-1]:
            gap = float(gaps[i])
            return (gap if gap <= rel_tol * max(1.0, abs(sol.epsilon)) else None), i
        count *= 2  # target sits above the computed window
    return None, -1


def criterion_1() -> CriterionResult:
    """n=0 closed form energies appear in the oracle spectrum."""
    t0 = time.perf_counter()
    worst_plain = worst_rich = 0.0
    ok = True
    for l in (0, 1, 2, 3):
        for alpha in (0.5, 1.0, 2.0):
            sol = closed_form_n0(l, alpha, 1.0)
            sys = sol.system()
            grid = RadialGrid.auto(sys, epsilon_hint=sol.epsilon)
            res = fd_eigensolve(sys, grid, 4)
            m = match_energy(res, sol.epsilon, 1e-5)
            if m is None:
                ok = False
                continue
            worst_plain = max(worst_plain, m[1] / max(1.0, abs(sol.epsilon)))
            rich = fd_eigenvalues_richardson(sys, grid, 4)
            gap_r = float(np.min(np.abs(rich - sol.epsilon)))
            rel_r = gap_r / max(1.0, abs(sol.epsilon))
            worst_rich = max(worst_rich, rel_r)
            if rel_r > 1e-6:
                ok = False
    elapsed = time.perf_counter() - t0
    if elapsed > 10.0:
        ok = False
    return CriterionResult(
        1,
        "n=0 closed form vs oracle (1e-5 plain / 1e-6 Richardson, <10 s)",
        ok,
        f"worst rel gap plain={worst_plain:.2e}, richardson={worst_rich:.2e}, "
        f"elapsed={elapsed:.1f}s",
    )


def criterion_2() -> CriterionResult:
    """n=1 closed form vs companion-matrix roots and the oracle."""
    worst_root = worst_gap = 0.0
    ok = True
    for l in (0, 1, 2):
        for alpha in (0.0, 1.0):
            sols = closed_form_n1(l, alpha, 1.0)
            roots, _ = solve_b_roots(constraint_polynomial(1, l, alpha))
            if len(roots) != 2:
                ok = False
                continue
            for sol, root in zip(sols, roots):
                err = abs(sol.b_root - root) / max(1.0, abs(root))
                worst_root = max(worst_root, err)
                if err > 1e-12:
                    ok = False
                gap, _ = _oracle_gap(sol, 1e-5)
                if gap is None:
                    ok = False
                else:
                    worst_gap = max(worst_gap, gap / max(1.0, abs(sol.epsilon)))
    return CriterionResult(
        2,
        "n=1 closed form vs quadratic roots (1e-12) and oracle (1e-5)",
        ok,
        f"worst root mismatch={worst_root:.2e}, worst oracle gap={worst_gap:.2e}",
    )


def criterion_3() -> CriterionResult:
    """General n: termination, ODE residual, oracle confirmation."""
    worst_term = worst_ode = worst_gap = 0.0
    n_solutions = 0
    ok = True
    for n in range(0, 9):
        for l in range(0, 4):
            for alpha in (0.0, 1.0):
                for sol in solve_family(n, l, alpha, 1.0):
                    n_solutions += 1
                    term = termination_residual(sol)
                    worst_term = max(worst_term, term)
                    if term > 1e-10:
                        ok = False
                    ode = relative_ode_residual_sup(sol)
                    worst_ode = max(worst_ode, ode)
                    if ode > 1e-9:
                        ok = False
                    gap, _ = _oracle_gap(sol, 1e-5, richardson=True)
                    if gap is None:
                        ok = False
                    else:
                        worst_gap = max(worst_gap, gap / max(1.0, abs(sol.epsilon)))
    return CriterionResult(
        3,
        "general n<=8: termination 1e-10, ODE residual 1e-9, oracle 1e-5",
        ok,
        f"{n_solutions} solutions; worst termination={worst_term:.2e}, "
        f"ode={worst_ode:.2e}, oracle gap={worst_gap:.2e}",
    )


def criterion_4() -> CriterionResult:
    """Recurrence vs power-matching oracle on 100 random parameter sets."""
    rng = np.random.default_rng(20260826)
    worst = 0.0
    ok = True
    for _ in range(100):
        l = int(rng.integers(0, 6))
        a = 2.0 * l + 1.0
        b, c, d = rng.uniform(-3.0, 3.0, size=3)
        rec = coefficient_sequence(HeunParameters(a=a, b=b, c=c, d=d), 14).coefficients
        ora = power_matching_coefficients(a, b, c, d, 14)
        denom = np.maximum(np.abs(ora), 1e-12 * max(np.max(np.abs(ora)), 1.0))
        err = float(np.max(np.abs(rec - ora) / denom))
        worst = max(worst, err)
        if err > 1e-12:
            ok = False
    return CriterionResult(
        4,
        "recurrence matches power-matching oracle (100 random sets, 1e-12)",
        ok,
        f"worst relative mismatch={worst:.2e}",
    )


def criterion_5() -> CriterionResult:
    """Oscillator limit: eps = 2 n_r + l + 3/2 within 1e-5."""
    worst = 0.0
    ok = True
    for l in (0, 1, 2):
        sys = PhysicalSystem(alpha=0.0, beta=0.0, k=1.0, l=l)
        grid = RadialGrid.auto(sys, epsilon_hint=l + 5.5)
        energies = fd_eigenvalues_richardson(sys, grid, 3)
        exact = np.array([2.0 * nr + l + 1.5 for nr in range(3)])
        err = float(np.max(np.abs(energies - exact)))
        worst = max(worst, err)
        if err > 1e-5:
            ok = False
    return CriterionResult(
        5, "oscillator limit levels within 1e-5", ok, f"worst abs error={worst:.2e}"
    )


def criterion_6() -> CriterionResult:
    """Spectrum scaling: (alpha, beta, k) output = K^2 x (alpha/K, beta/K^3, 1) output."""
    rng = np.random.default_rng(42)
    worst = 0.0
    ok = True
    for _ in range(10):
        alpha = float(rng.uniform(0.0, 2.0))
        k = float(rng.uniform(0.3, 4.0))
        n = int(rng.integers(0, 5))
        l = int(rng.integers(0, 3))
        K = k ** 0.25
        sols = solve_family(n, l, alpha, k)
        sols_scaled = solve_family(n, l, alpha / K, 1.0)
        if len(sols) != len(sols_scaled):
            ok = False
            continue
        for s, ss in zip(sols, sols_scaled):
            err = abs(s.epsilon - K * K * ss.epsilon) / max(1.0, abs(s.epsilon))
            worst = max(worst, err)
            if err > 1e-8:
                ok = False
        # finite-difference side, on correspondingly scaled grids
        beta = float(rng.uniform(-1.5, 1.5))
        sys = PhysicalSystem(alpha=alpha, beta=abs(beta), k=k, l=l)
        sys_s = PhysicalSystem(alpha=alpha / K, beta=abs(beta) / K**3, k=1.0, l=l)
        grid = RadialGrid.auto(sys, points=2000)
        h_s = grid.spacing * K
        grid_s = RadialGrid(r_min=h_s, r_max=grid.points * h_s, points=grid.points)
        e1 = fd_eigensolve(sys, grid, 3).energies
        e2 = fd_eigensolve(sys_s, grid_s, 3).energies
        err = float(np.max(np.abs(e1 - K * K * e2) / np.maximum(1.0, np.abs(e1))))
        worst = max(worst, err)
        if err > 1e-8:
            ok = False
    return CriterionResult(
        6, "K-scaling invariance within 1e-8 (10 random sets)", ok,
        f"worst relative defect={worst:.2e}",
    )


def criterion_7() -> CriterionResult:
    """Vieta residuals below 1e-9 for 20 random (system, epsilon) pairs."""
    rng = np.random.default_rng(7)
    worst = 0.0
    ok = True
    for _ in range(20):
        sys = PhysicalSystem(
            alpha=float(rng.uniform(0.0, 3.0)),
            beta=float(rng.uniform(-3.0, 3.0)),
            k=float(rng.uniform(0.2, 5.0)),
            l=int(rng.integers(0, 4)),
        )
        eps = float(rng.uniform(-5.0, 10.0))
        tp = turning_points(sys, eps)
        res = max(vieta_residuals(tp, sys, eps))
        worst = max(worst, res)
        if res > 1e-9:
            ok = False
    return CriterionResult(
        7, "Vieta residuals < 1e-9 (20 random pairs)", ok, f"worst residual={worst:.2e}"
    )


def criterion_8() -> CriterionResult:
    """Perturbing beta off-manifold breaks termination by >= 10x tolerance."""
    worst_ratio = np.inf
    ok = True
    checked = 0
    for n in (1, 2, 3, 5):
        for l in (0, 1):
            for sol in solve_family(n, l, 1.0, 1.0):
                checked += 1
                perturbed = termination_residual(sol, beta_override=sol.beta + 1e-3)
                ratio = perturbed / TERMINATION_RTOL
                worst_ratio = min(worst_ratio, ratio)
                if ratio < 10.0:
                    ok = False
    return CriterionResult(
        8,
        "off-manifold beta perturbation breaks termination by >= 10x",
        ok and checked > 0,
        f"{checked} solutions; smallest residual/tolerance ratio={worst_ratio:.1e}",
    )


ALL_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
)


def run_acceptance(echo=print) -> list[CriterionResult]:
    results = []
    for fn in ALL_CRITERIA:
        res = fn()
        results.append(res)
        status = "PASS" if res.passed else "FAIL"
        echo(f"[{status}] criterion {res.number}: {res.name} -- {res.detail}")
    return results
