import json

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from qpvi import qseries
from qpvi.errors import ConvergenceError, DomainError, PoleError, PrecisionError


def mpc_close(x, y, tol):
    return abs(x - y) <= tol


class TestQPochhammer:
    @given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.floats(0.05, 0.9))
    @settings(max_examples=60, deadline=None)
    def test_product_law(self, re, im, q):
        # (z; q)_inf = (1 - z) (qz; q)_inf
        z = mp.mpc(re, im)
        lhs = qseries.qpoch_inf(z, q)
        rhs = (1 - z) * qseries.qpoch_inf(q * z, q)
        assert mpc_close(lhs, rhs, 1e-12 * (1 + abs(lhs)))

    def test_empty_product_at_zero(self):
        assert qseries.qpoch_inf(mp.mpc(0), mp.mpf("0.5")) == 1

    def test_divergence_guard(self):
        with pytest.raises(ConvergenceError):
            qseries.qpoch_inf(mp.mpc(1), mp.mpf("1.0"))


class TestWeight:
    def test_param_validation(self):
        with pytest.raises(DomainError):
            qseries.QWeightParams(a=mp.mpc("1.2"), b=mp.mpc("0.5"), q=mp.mpf("0.5"))
        with pytest.raises(DomainError):
            qseries.QWeightParams(a=mp.mpc("0.3"), b=mp.mpc("0.5"), q=mp.mpf("1.5"))
        with pytest.raises(DomainError):
            qseries.QWeightParams(a=mp.mpc("0.3"), b=mp.mpc("0.5"), q=mp.mpf("0"))

    def test_positive_on_circle(self, ref_params, prec192):
        for j in range(7):
            z = mp.exp(1j * mp.mpf(2 * j + 1) / 7)
            w = qseries.weight_eval(ref_params, z)
            assert abs(mp.im(w)) < 1e-40
            assert mp.re(w) > 0

    def test_zero_argument_rejected(self, ref_params):
        with pytest.raises(DomainError):
            qseries.weight_eval(ref_params, mp.mpc(0))

    def test_szego_function_factorization(self, ref_params, prec192):
        # w(theta) |f_plus(theta)|^2 == 1
        for j in range(9):
            theta = mp.mpf(2 * j + 1) / 9
            r = qseries.unit_modulus_residual(ref_params, theta)
            assert r < 1e-40

    def test_functional_equation(self, ref_params, prec192):
        # W(z) w(qz) = -V(z) w(z) away from poles and zeros
        for z in (mp.mpc("0.9", "0.2"), mp.mpc("-0.4", "1.1"), mp.mpc("1.3", "-0.7")):
            r = qseries.weight_feq_residual(ref_params, z)
            assert r < 1e-40

    def test_vw_degrees(self, ref_params):
        V, W = qseries.vw_polys(ref_params)
        assert len(V) == 3 and len(W) == 3
        # V(z) = (qz - conj(a)) (bz - 1), W(z) = (qz - conj(b)) (1 - az)
        assert mpc_close(V[2], ref_params.q * ref_params.b, 1e-30)
        assert mpc_close(W[2], -ref_params.q * ref_params.a, 1e-30)


class TestMoments:
    def test_normalization_and_symmetry(self, table, prec192):
        assert table.cmom(0) == 1
        assert table.hermitian_residual() < 1e-45

    def test_index_range(self, table):
        with pytest.raises(DomainError):
            table.cmom(table.K + 1)

    def test_grid_too_small(self, ref_params):
        with pytest.raises(DomainError):
            qseries.moments(ref_params, K=40, N=64)

    def test_aliasing_guard(self, ref_params):
        # N just above 2K but far too small for the precision: the tail
        # estimate r^(N-K) must trip the guard
        with mp.workprec(192):
            with pytest.raises(PrecisionError):
                qseries.moments(ref_params, K=30, N=62)

    def test_json_round_trip(self, table):
        d = table.to_json_dict()
        s = json.dumps(d, sort_keys=True)
        back = json.loads(s)
        assert back["K"] == table.K
        assert len(back["c"]) == 2 * table.K + 1
        assert back["c"][table.K] == [1.0, 0.0]


class TestCaratheodory:
    def test_series_matches_quadrature(self, ref_params, table, prec192):
        # radii small enough that the crude tail bound 2 |z|^(K+1) / (1 - |z|)
        # clears the guard at K = 48
        for z in (mp.mpc("0.2", "0.1"), mp.mpc("-0.15", "0.12"), mp.mpc("0.05", "-0.18")):
            fs = qseries.caratheodory_series(table, z)
            fq = qseries.caratheodory_quad(ref_params, z)
            assert abs(fs - fq) < 1e-30

    def test_unit_circle_rejected(self, ref_params):
        with pytest.raises(DomainError):
            qseries.caratheodory_quad(ref_params, mp.exp(1j * mp.mpf("0.3")))

    def test_tail_guard(self, table):
        with pytest.raises(PrecisionError):
            qseries.caratheodory_series(table, mp.mpc("0.97"))

    def test_u_fit(self, ref_params, prec192):
        # W(z) F(qz) + V(z) F(z) is a polynomial of degree two
        U, resid = qseries.fit_caratheodory_u(ref_params)
        assert len(U) == 3
        assert resid < 1e-40
