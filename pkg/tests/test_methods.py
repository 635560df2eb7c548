import json
import math

import numpy as np
import pytest

from oracle import sin_p_half
from sinp import (DomainError, NonConvergenceError, RootError, arcsin_p, compare_methods,
                  inverse_power_iterates, inverse_power_step, make_context, make_grid,
                  phi_1_closed_form, run_inverse_power, run_method, run_ode, run_zeta_inverse)

SIX_P = [1.1, 1.5, 2.0, 2.5, 3.0, 3.5]


@pytest.fixture(scope="module")
def ip_tables():
    return {p: run_inverse_power(make_context(p)) for p in SIX_P}


class TestInversePowerStep:
    @pytest.mark.parametrize("p", SIX_P + [1.05, 6.0])
    def test_first_iterate_matches_closed_form(self, p):
        ctx = make_context(p)
        phi1 = inverse_power_step(ctx, make_grid(ctx, 101, 1.0))
        assert np.max(np.abs(phi1.values - phi_1_closed_form(ctx, phi1.nodes))) < 1e-8

    @pytest.mark.parametrize("p", [1.1, 2.0, 3.5])
    def test_output_shape(self, p):
        ctx = make_context(p)
        for phi in inverse_power_iterates(ctx, 101, 4)[1:]:
            v = phi.values
            assert v[0] == 0.0
            assert np.all(v >= 0) and np.all(np.diff(v) >= 0)
            assert v[-1] == v.max()
            assert phi.slope0 > 0

    @pytest.mark.parametrize("p", SIX_P)
    def test_bound_by_first_norm(self, p):
        it = inverse_power_iterates(make_context(p), 101, 10)
        n1 = np.max(it[1].values)
        for a, b in zip(it[:-1], it[1:]):
            assert np.all(b.values <= n1 * a.values + 1e-10)

    def test_true_eigenfunction_is_a_fixed_point(self):
        # sin_p itself is mapped to itself up to discretisation error
        for p in (1.1, 2.0, 3.5):
            ctx = make_context(p)
            g = make_grid(ctx, 101)
            exact = sin_p_half(p, g.nodes)
            out = inverse_power_step(ctx, g.with_values(exact, slope0=1.0)).values
            assert np.max(np.abs(out - exact)) < 1e-7

    def test_missing_slope_is_extrapolated(self):
        ctx = make_context(1.5)
        g = make_grid(ctx, 101)
        exact = sin_p_half(1.5, g.nodes)
        a = inverse_power_step(ctx, g.with_values(exact, slope0=1.0)).values
        b = inverse_power_step(ctx, g.with_values(exact)).values
        assert np.max(np.abs(a - b)) < 1e-7

    def test_degenerate_inputs(self):
        ctx = make_context(2.0)
        with pytest.raises(DomainError, match="sup norm 0"):
            inverse_power_step(ctx, make_grid(ctx, 11))
        with pytest.raises(DomainError):
            inverse_power_step(ctx, make_grid(ctx, 11, -1.0))


class TestRunInversePower:
    def test_classical_endpoint(self, ip_tables):
        assert abs(ip_tables[2.0].values[-1] - 1.0) < 1e-6

    def test_p_two_and_a_half_endpoint(self, ip_tables):
        assert abs(ip_tables[2.5].values[-1] - 1.17608) < 5e-6

    def test_iteration_count_one_and_a_half(self, ip_tables):
        assert 5 <= ip_tables[1.5].iterations_or_steps <= 15

    @pytest.mark.parametrize("p", SIX_P + [1.05, 1.2, 6.0, 10.0])
    def test_against_oracle(self, p):
        t = run_inverse_power(make_context(p))
        assert np.max(np.abs(t.values - sin_p_half(p, t.nodes))) < 1e-6

    @pytest.mark.parametrize("p", SIX_P)
    def test_trace(self, ip_tables, p):
        trace = ip_tables[p].trace
        assert len(trace) == ip_tables[p].iterations_or_steps
        assert all(t.sup_norm_phi > 0 and t.gamma > 0 for t in trace)
        assert abs(trace[-1].gamma - 1) < abs(trace[0].gamma - 1)
        assert trace[-1].sup_diff < 1e-8

    @pytest.mark.parametrize("p", SIX_P)
    def test_table_invariants(self, ip_tables, p):
        t = ip_tables[p]
        assert t.values[0] == 0.0 and t.derivs[0] == 1.0
        assert abs(t.derivs[-1]) < 1e-6
        assert np.all(np.diff(t.values) >= 0)
        assert np.max(np.abs(t.pythagorean_residual())) <= 1e-6

    @pytest.mark.parametrize("p", [1.1, 2.0, 3.5])
    def test_normalised_iterates_decrease(self, p):
        it = inverse_power_iterates(make_context(p), 101, 10)
        u = [g.values / g.values.max() for g in it]
        for a, b in zip(u[:-1], u[1:]):
            assert np.all(b <= a + 1e-12)

    def test_nonconvergence_carries_trace(self):
        with pytest.raises(NonConvergenceError) as err:
            run_inverse_power(make_context(2.0), max_iter=2)
        assert len(err.value.trace) == 2

    def test_validation(self):
        ctx = make_context(2.0)
        with pytest.raises(DomainError):
            run_inverse_power(ctx, tol=0.0)
        with pytest.raises(DomainError):
            run_inverse_power(ctx, max_iter=0)
        with pytest.raises(ValueError):
            run_inverse_power(ctx, n_nodes=100)

    def test_deterministic(self):
        a = run_inverse_power(make_context(2.5))
        b = run_inverse_power(make_context(2.5))
        assert np.array_equal(a.values, b.values)

    @pytest.mark.parametrize("n", [3, 5, 21])
    def test_small_grids(self, n):
        t = run_inverse_power(make_context(3.0), n_nodes=n)
        assert abs(t.values[-1] - t.ctx.m_p) < 1e-12
        assert np.max(np.abs(t.values - sin_p_half(3.0, t.nodes))) < 0.05


class TestOde:
    def test_classical(self):
        t = run_ode(make_context(2.0))
        assert np.max(np.abs(t.values - np.sin(t.nodes))) <= 1e-4
        assert t.values[0] == 0.0 and t.derivs[0] == 1.0

    def test_p_three_endpoint(self):
        t = run_ode(make_context(3.0))
        assert abs(t.values[-1] - 1.25992) < 6e-4

    @pytest.mark.parametrize("p", SIX_P)
    def test_residual(self, p):
        assert np.max(np.abs(run_ode(make_context(p)).pythagorean_residual())) <= 1e-3

    def test_overshoot_is_kept(self):
        # stored values are not clamped, so the endpoint error stays visible
        t = run_ode(make_context(2.0))
        assert t.values[-1] > 1.0


class TestArcsinP:
    def test_zero(self):
        assert arcsin_p(make_context(2.5), 0.0) == 0.0

    def test_classical(self):
        assert abs(arcsin_p(make_context(2.0), 1.0) - math.pi / 2) < 1e-10

    @pytest.mark.parametrize("p", SIX_P)
    def test_top_is_half_period(self, p):
        ctx = make_context(p)
        assert abs(arcsin_p(ctx, ctx.m_p, 1e-10) - ctx.half_period) < 1e-10

    def test_increasing(self):
        ctx = make_context(3.0)
        z = np.linspace(0, ctx.m_p, 50)
        vals = [arcsin_p(ctx, v) for v in z]
        assert np.all(np.diff(vals) > 0)

    def test_domain(self):
        ctx = make_context(2.0)
        with pytest.raises(DomainError):
            arcsin_p(ctx, 1.5)
        with pytest.raises(DomainError):
            arcsin_p(ctx, -0.1)


class TestZetaInverse:
    def test_classical(self):
        t = run_zeta_inverse(make_context(2.0), tol=1e-10)
        assert t.values[0] == 0.0
        assert np.max(np.abs(t.values - np.sin(t.nodes))) <= 1e-8

    def test_top(self):
        t = run_zeta_inverse(make_context(3.5))
        assert abs(t.values[-1] - 1.29926) < 1e-5

    @pytest.mark.parametrize("p", SIX_P)
    def test_against_oracle(self, p):
        t = run_zeta_inverse(make_context(p))
        assert np.max(np.abs(t.values - sin_p_half(p, t.nodes))) < 1e-8

    def test_root_failure_names_node(self):
        with pytest.raises(RootError) as err:
            run_zeta_inverse(make_context(3.0), max_iter=1)
        assert err.value.node == 1


class TestCompare:
    def test_classical_spread(self):
        r = compare_methods(make_context(2.0))
        assert not r.failures
        assert max(r.discrepancies.values()) <= 2e-4

    def test_endpoint_errors(self):
        r = compare_methods(make_context(2.5))
        assert r.endpoint_errors["inverse-power"] <= 5e-6
        assert r.endpoint_errors["ode"] <= 5e-4

    def test_count_near_one(self):
        r = compare_methods(make_context(1.1))
        assert 4 <= r.counts["inverse-power"] <= 10

    def test_failures_do_not_abort(self):
        r = compare_methods(make_context(2.0), max_iter=1)
        assert "inverse-power" in r.failures
        assert set(r.tables) == {"ode", "zeta-inverse"}
        assert set(r.relative_times) == {"ode", "zeta-inverse"}

    def test_to_dict_is_json(self):
        d = compare_methods(make_context(3.0)).to_dict()
        assert json.loads(json.dumps(d))["count"]["ode"] == 100

    def test_ode_fastest(self):
        r = compare_methods(make_context(2.0))
        assert min(r.seconds, key=r.seconds.get) == "ode"

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            run_method(make_context(2.0), "series")
