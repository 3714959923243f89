import numpy as np
import pytest

from biheun.heun import coefficient_sequence
from biheun.model import PhysicalSystem
from biheun.oracle import RadialGrid, fd_eigensolve, match_energy
from biheun.quantize import (
    closed_form_n0,
    closed_form_n1,
    constraint_polynomial,
    energy_from_termination,
    normalize,
    solve_b_roots,
    solve_family,
    wavefunction,
)


class TestEnergyFromTermination:
    def test_pure_oscillator_ground(self):
        assert energy_from_termination(0, 0, 1.0, 0.0) == 1.5

    def test_n0_with_b_one(self):
        assert energy_from_termination(0, 0, 1.0, 1.0) == 1.375

    def test_k_scaling(self):
        assert energy_from_termination(1, 0, 2.0, 0.0) == 10.0

    def test_rejects_nonpositive_k_scale(self):
        with pytest.raises(ValueError):
            energy_from_termination(0, 0, 0.0, 1.0)


class TestConstraintPolynomial:
    def test_n0_linear(self):
        poly = constraint_polynomial(0, 2, 3.0)
        assert np.allclose(poly.coeffs, [-3.0, 3.0])  # 3b - 3

    def test_n1_quadratic_shape(self):
        # proportional to {aK^2 - 2(2l+2), -aK(2l+3), (l+1)(l+2)} ascending
        for l in (0, 1, 3):
            for aK in (0.0, 0.5, 2.0):
                poly = constraint_polynomial(1, l, aK)
                want = np.array(
                    [aK * aK - 2.0 * (2 * l + 2), -aK * (2 * l + 3), (l + 1) * (l + 2)]
                )
                ratio = poly.coeffs[2] / want[2]
                assert np.allclose(poly.coeffs, ratio * want, atol=1e-13)

    def test_degree_is_n_plus_one(self):
        for n in range(7):
            poly = constraint_polynomial(n, 1, 1.0)
            assert poly.degree == n + 1
            assert poly.coeffs[-1] != 0.0

    def test_evaluates_recurrence_combination(self):
        # P(b) == -2 c_{n-1}(b) + (n b - D) c_n(b) at sample b values
        n, l, aK = 3, 1, 1.0
        poly = constraint_polynomial(n, l, aK)
        a = 2.0 * l + 1.0
        c = 2.0 * (n + l + 1) + 1.0
        for b in (-1.7, 0.0, 0.4, 2.2):
            D = -b * (l + 1.0) + aK
            cs = np.zeros(n + 1)
            cs[0] = 1.0
            cs[1] = -D / (1.0 + a)
            for j in range(1, n):
                cs[j + 1] = ((2 * j + a - c) * cs[j - 1] + (j * b - D) * cs[j]) / (
                    (j + 1) * (a + j + 1)
                )
            want = -2.0 * cs[n - 1] + (n * b - D) * cs[n]
            assert poly(b) == pytest.approx(want, rel=1e-12, abs=1e-14)

    def test_n2_roots_terminate(self):
        poly = constraint_polynomial(2, 0, 1.0)
        roots, _ = solve_b_roots(poly)
        assert roots
        scale = np.max(np.abs(poly.coeffs))
        for b in roots:
            assert abs(poly(b)) < 1e-10 * scale
            eps = energy_from_termination(2, 0, 1.0, b)
            sys = PhysicalSystem(alpha=1.0, beta=b, k=1.0, l=0)
            from biheun.heun import to_heun_params

            seq = coefficient_sequence(to_heun_params(sys, eps), 8)
            assert seq.terminated_at == 2

    def test_degree_cap_warning(self):
        with pytest.warns(UserWarning):
            constraint_polynomial(33, 0, 1.0)


class TestSolveBRoots:
    def test_linear_root(self):
        poly = constraint_polynomial(0, 0, 1.0)
        roots, discarded = solve_b_roots(poly)
        assert roots == [1.0]
        assert discarded == 0

    def test_n1_alpha_zero(self):
        poly = constraint_polynomial(1, 0, 0.0)
        roots, _ = solve_b_roots(poly)
        assert np.allclose(roots, [-np.sqrt(2.0), np.sqrt(2.0)], rtol=1e-14)

    def test_n1_matches_closed_form(self):
        poly = constraint_polynomial(1, 0, 1.0)
        roots, _ = solve_b_roots(poly)
        sols = closed_form_n1(0, 1.0, 1.0)
        assert len(roots) == 2
        for root, sol in zip(roots, sols):
            assert abs(root - sol.b_root) < 1e-12

    def test_rejects_degree_zero(self):
        from biheun.quantize import ConstraintPolynomial

        with pytest.raises(ValueError):
            solve_b_roots(
                ConstraintPolynomial(n=0, l=0, alpha_over_K=0.0, coeffs=np.array([1.0]))
            )


class TestClosedForms:
    def test_n0_coulomb(self):
        sol = closed_form_n0(0, 1.0, 1.0)
        assert sol.b_root == 1.0
        assert sol.beta == 1.0
        assert sol.epsilon == 1.375
        assert np.allclose(sol.heun_coefficients, [1.0])

    def test_n0_oscillator(self):
        sol = closed_form_n0(0, 0.0, 1.0)
        assert sol.b_root == 0.0
        assert sol.epsilon == 1.5

    def test_n0_l1(self):
        sol = closed_form_n0(1, 2.0, 1.0)
        assert sol.b_root == 1.0
        assert sol.epsilon == 2.375

    def test_n1_alpha_zero_branches(self):
        sols = closed_form_n1(0, 0.0, 1.0)
        assert np.allclose([s.b_root for s in sols], [-np.sqrt(2), np.sqrt(2)])
        for s in sols:
            assert s.epsilon == pytest.approx(2.25)

    def test_n1_roots_satisfy_quadratic(self):
        for l in (0, 1, 2):
            for alpha in (0.0, 0.5, 1.0, 2.0):
                poly = constraint_polynomial(1, l, alpha)
                for sol in closed_form_n1(l, alpha, 1.0):
                    scale = np.max(np.abs(poly.coeffs))
                    assert abs(poly(sol.b_root)) < 1e-12 * scale


class TestSolveFamily:
    @pytest.mark.parametrize("l", range(6))
    @pytest.mark.parametrize("aK", [0.0, 0.5, 1.0, 2.0])
    def test_agrees_with_closed_forms(self, l, aK):
        sols0 = solve_family(0, l, aK, 1.0)
        ref0 = closed_form_n0(l, aK, 1.0)
        assert len(sols0) == 1
        assert abs(sols0[0].b_root - ref0.b_root) < 1e-12
        assert abs(sols0[0].epsilon - ref0.epsilon) < 1e-12

        sols1 = solve_family(1, l, aK, 1.0)
        refs1 = closed_form_n1(l, aK, 1.0)
        assert len(sols1) == 2
        for got, ref in zip(sols1, refs1):
            assert abs(got.b_root - ref.b_root) < 1e-12
            assert abs(got.epsilon - ref.epsilon) < 1e-12

    def test_energy_b_consistency(self):
        for sol in solve_family(3, 1, 1.0, 2.0):
            K2 = sol.k**0.5
            assert sol.epsilon + K2 * sol.b_root**2 / 8.0 == pytest.approx(
                K2 * (sol.n + sol.l + 1.5), rel=1e-14
            )

    def test_termination_of_every_root(self):
        for n in (2, 4, 6):
            for sol in solve_family(n, 0, 1.0, 1.0):
                seq = coefficient_sequence(sol.heun_parameters(), n + 6)
                assert seq.terminated_at == n

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            solve_family(1, 0, 1.0, 0.0)


class TestWavefunction:
    def test_n0_envelope(self):
        sol = closed_form_n0(0, 1.0, 1.0)  # H == 1, beta = 1, K = 1
        r = np.linspace(0.01, 6.0, 200)
        got = wavefunction(sol, r)
        want = np.exp(-r / 2.0 - r * r / 2.0)
        assert np.allclose(got, want, rtol=1e-14)
        assert np.all(np.diff(got) < 0)

    def test_small_r_power_law(self):
        sol = closed_form_n0(2, 1.0, 1.0)
        r = np.array([1e-6, 1e-5, 1e-4])
        ratio = wavefunction(sol, r) / r**2
        assert np.allclose(ratio, 1.0, atol=1e-3)

    def test_overlap_with_oracle(self):
        sol = closed_form_n0(0, 1.0, 1.0)
        sys = sol.system()
        grid = RadialGrid.auto(sys, epsilon_hint=sol.epsilon, points=4000)
        res = fd_eigensolve(sys, grid, 2)
        idx, _ = match_energy(res, sol.epsilon, 1e-4)
        r = grid.nodes()
        r_poly = normalize(r, wavefunction(sol, r))
        r_orac = normalize(r, res.vectors[idx] / r)
        overlap = abs(np.trapezoid(r_poly * r_orac * r * r, r))
        assert overlap >= 0.99999


class TestNormalize:
    def test_unit_norm(self):
        r = np.linspace(1e-4, 12.0, 4000)
        sol = closed_form_n0(0, 1.0, 1.0)
        v = normalize(r, wavefunction(sol, r))
        assert np.trapezoid(v * v * r * r, r) == pytest.approx(1.0, abs=1e-10)

    def test_idempotent(self):
        r = np.linspace(1e-4, 12.0, 1000)
        v = normalize(r, np.exp(-r))
        assert np.allclose(normalize(r, v), v, atol=1e-12)

    def test_scale_invariant(self):
        r = np.linspace(1e-4, 12.0, 1000)
        v = np.exp(-r) * (1 - r)
        assert np.allclose(normalize(r, 7.0 * v), normalize(r, v), atol=1e-13)

    def test_sign_convention(self):
        r = np.linspace(1e-4, 12.0, 1000)
        v = normalize(r, -np.exp(-r))
        assert v[0] > 0

    def test_rejects_zero_input(self):
        r = np.linspace(1e-4, 1.0, 100)
        with pytest.raises(ValueError):
            normalize(r, np.zeros_like(r))

    def test_rejects_short_grid(self):
        with pytest.raises(ValueError):
            normalize(np.array([1.0, 2.0]), np.array([1.0, 1.0]))
