"""Manufactured-solution module tests (the full study runs in the acceptance suite)."""

import numpy as np
import pytest

from arcsim import mms
from arcsim.grid import GridSpec, ScalarField, cell_centers
from arcsim.stepper import RunConfig, run


class TestForcingConsistency:
    def test_forced_run_tracks_exact_solution(self):
        # one moderately fine grid: the discrete solution should stay within
        # the expected truncation distance of the analytic triplet
        params = mms.default_params()
        solution = mms.cosine_solution(params)
        spec = GridSpec.interval(100)
        x = cell_centers(spec)[0]
        config = RunConfig(
            grid=spec,
            params=params,
            u0=ScalarField(spec, solution.u(x, 0.0)),
            v0=ScalarField(spec, solution.v(x, 0.0)),
            t_end=0.05,
            output_interval=0.05,
        )
        _, final, termination = run(config, forcing=solution.forcing)
        assert termination == "completed"
        h = spec.spacing[0]
        tol = 5.0 * h * h  # generous multiple of the h^2 truncation error
        assert np.max(np.abs(final.u.values - solution.u(x, final.t))) <= tol
        assert np.max(np.abs(final.v.values - solution.v(x, final.t))) <= tol
        assert np.max(np.abs(final.w.values - solution.w(x, final.t))) <= tol

    def test_initial_repellent_matches_exact(self):
        params = mms.default_params()
        solution = mms.cosine_solution(params)
        spec = GridSpec.interval(200)
        x = cell_centers(spec)[0]
        config = RunConfig(
            grid=spec,
            params=params,
            u0=ScalarField(spec, solution.u(x, 0.0)),
            v0=ScalarField(spec, solution.v(x, 0.0)),
            t_end=1.0,
        )
        from arcsim.stepper import initial_state

        state = initial_state(config, solution.forcing)
        assert np.max(np.abs(state.w.values - solution.w(x, 0.0))) <= 1e-4


class TestConvergence:
    def test_cosine_second_order(self):
        result = mms.run_convergence(3, base_cells=20, t_end=0.05)
        assert not result.skipped
        assert result.passed
        assert 1.8 <= result.observed_order <= 2.2
        assert result.errors[0] > result.errors[-1]

    def test_constant_variant_exact(self):
        result = mms.run_convergence(3, base_cells=8, t_end=0.01, variant="constant")
        assert result.skipped
        assert result.passed
        assert max(result.errors) < 1e-12

    def test_refinement_guard(self):
        with pytest.raises(ValueError):
            mms.run_convergence(2)

    def test_report_lines(self):
        result = mms.run_convergence(3, base_cells=10, t_end=0.02)
        text = "\n".join(result.lines())
        assert "N =" in text and "order" in text
