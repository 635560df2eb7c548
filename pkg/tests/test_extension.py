import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import cos_p_half, sin_p_half, sin_p_line
from sinp import (DomainError, PTrig, cos_p, make_context, reduce_argument, run_inverse_power,
                  run_ode, run_zeta_inverse)
from sinp import sin_p as sin

SIX_P = [1.1, 1.5, 2.0, 2.5, 3.0, 3.5]


@pytest.fixture(scope="module")
def trigs():
    return {p: PTrig(run_inverse_power(make_context(p))) for p in SIX_P}


class TestReduce:
    def test_reflection(self):
        ctx = make_context(3.0)
        t = 0.4
        y, s, d = reduce_argument(ctx, ctx.pi_p - t)
        assert y == pytest.approx(t, abs=1e-15) and s == 1.0 and d == -1.0

    def test_oddness(self):
        assert reduce_argument(make_context(2.5), -0.3) == (0.3, -1.0, 1.0)

    def test_periodicity(self):
        ctx = make_context(2.5)
        y, s, d = reduce_argument(ctx, 0.3 + 2 * ctx.pi_p)
        assert y == pytest.approx(0.3, abs=1e-15) and (s, d) == (1.0, 1.0)

    def test_range_and_arrays(self):
        ctx = make_context(1.7)
        x = np.random.default_rng(3).uniform(-50, 50, 1000)
        y, s, d = reduce_argument(ctx, x)
        assert np.all((0 <= y) & (y <= ctx.half_period))
        assert set(np.unique(s)) <= {-1.0, 1.0} and set(np.unique(d)) <= {-1.0, 1.0}

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            reduce_argument(make_context(2.0), np.inf)


class TestSinCos:
    @pytest.mark.parametrize("p", SIX_P)
    def test_special_points(self, trigs, p):
        tr = trigs[p]
        ctx = tr.ctx
        assert abs(sin(tr, ctx.half_period) - ctx.m_p) < 5e-6
        assert abs(sin(tr, ctx.pi_p)) < 1e-8
        assert sin(tr, 0.0) == 0.0
        assert cos_p(tr, 0.0) == 1.0
        assert abs(cos_p(tr, ctx.half_period)) < 1e-6

    def test_classical(self, trigs):
        tr = trigs[2.0]
        x = np.random.default_rng(11).uniform(-10, 10, 1000)
        assert np.max(np.abs(sin(tr, x) - np.sin(x))) < 1e-5
        assert np.max(np.abs(cos_p(tr, x) - np.cos(x))) < 1e-5

    @pytest.mark.parametrize("p", SIX_P)
    def test_against_oracle_off_node(self, trigs, p):
        tr = trigs[p]
        x = np.random.default_rng(5).uniform(0, tr.ctx.half_period, 500)
        assert np.max(np.abs(sin(tr, x) - sin_p_half(p, x))) <= 1e-6

    @pytest.mark.parametrize("p", SIX_P)
    def test_against_zeta_inverse_table(self, p):
        # the finished product from the quadrature method
        ctx = make_context(p)
        tr = PTrig(run_inverse_power(ctx))
        x = np.random.default_rng(9).uniform(0, ctx.half_period, 500)
        ref = PTrig(run_zeta_inverse(ctx))
        assert np.max(np.abs(sin(tr, x) - sin(ref, x))) <= 1e-6

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.5])
    def test_cos_against_oracle(self, trigs, p):
        tr = trigs[p]
        x = np.random.default_rng(2).uniform(0, tr.ctx.half_period, 300)
        assert np.max(np.abs(cos_p(tr, x) - cos_p_half(p, x))) < 1e-6

    @pytest.mark.parametrize("p", SIX_P)
    def test_full_line(self, trigs, p):
        tr = trigs[p]
        ctx = tr.ctx
        x = np.random.default_rng(13).uniform(-3 * ctx.pi_p, 3 * ctx.pi_p, 1000)
        s, c = sin(tr, x), cos_p(tr, x)
        assert np.max(np.abs(sin(tr, -x) + s)) <= 1e-12
        assert np.max(np.abs(sin(tr, x + 2 * ctx.pi_p) - s)) <= 1e-12
        assert np.max(np.abs(sin(tr, ctx.pi_p - x) - s)) <= 1e-12
        assert np.max(np.abs(np.abs(c) ** p + np.abs(s) ** p / (p - 1) - 1)) <= 1e-6
        assert np.max(np.abs(s - sin_p_line(p, x))) <= 1e-6

    @pytest.mark.parametrize("p", SIX_P)
    def test_nodes_reproduced(self, trigs, p):
        tr = trigs[p]
        t = tr.table
        assert np.max(np.abs(sin(tr, t.nodes) - t.values)) < 1e-14
        assert np.max(np.abs(cos_p(tr, t.nodes) - t.derivs)) < 1e-12

    @pytest.mark.parametrize("p", SIX_P)
    def test_monotone_between_nodes(self, trigs, p):
        tr = trigs[p]
        x = tr.table.nodes
        grid = np.sort(np.concatenate([x, 0.5 * (x[1:] + x[:-1])]))
        v = sin(tr, grid)
        assert np.all(v >= 0) and np.all(v <= tr.ctx.m_p)
        # strictly increasing wherever the true increments are resolvable
        exact = sin_p_half(p, grid)
        resolvable = np.diff(exact) > 1e-14
        assert np.all(np.diff(v)[resolvable] > 0)
        assert np.all(np.diff(v) >= -4 * np.finfo(float).eps)

    @settings(max_examples=100, deadline=None)
    @given(x=st.floats(-1e3, 1e3))
    def test_oddness_property(self, trigs, x):
        tr = trigs[2.5]
        assert sin(tr, -x) == -sin(tr, x)
        assert cos_p(tr, -x) == cos_p(tr, x)

    def test_scalar_and_array(self, trigs):
        tr = trigs[3.0]
        assert isinstance(sin(tr, 0.7), float)
        assert sin(tr, np.array([0.7]))[0] == sin(tr, 0.7)


class TestConstruction:
    def test_ode_table_accepted(self):
        ctx = make_context(3.0)
        tr = PTrig(run_ode(ctx))
        assert abs(sin(tr, 1.0) - sin_p_half(3.0, [1.0])[0]) < 1e-4
        # overshooting nodes are clipped to the maximum
        assert sin(tr, ctx.half_period) <= ctx.m_p

    def test_rejects_non_monotone(self):
        t = run_inverse_power(make_context(2.0), n_nodes=11)
        vals = t.values.copy()
        vals[5] = vals[6] + 0.1
        bad = type(t)(t.ctx, t.grid.with_values(vals), t.derivs, t.method, t.iterations_or_steps)
        with pytest.raises(DomainError):
            PTrig(bad)
