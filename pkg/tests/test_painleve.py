import mpmath as mp
import pytest

from qpvi import laxpair, painleve
from qpvi.errors import ConstraintError, IndeterminacyError
from qpvi.polys import mat_det, padd, pmax, pscale


def coords_at(ref_params, ctx, n):
    sp = painleve.params_from_weight(ref_params, n)
    co = painleve.extract_coords(ctx.fits()[n].matrix, sp)
    return sp, co


class TestSurfaceParams:
    def test_constraint_enforced(self):
        with mp.workprec(128):
            c = (mp.mpc("0.4"), mp.mpc("0.7"), mp.mpc("1.3"), mp.mpc("0.9"))
            with pytest.raises(ConstraintError):
                painleve.SurfaceParams(k1=mp.mpc("0.2"), k2=mp.mpc("0.3"),
                                       t1=mp.mpc("0.11"), t2=mp.mpc("0.5"),
                                       c=c, q=mp.mpf("0.5"))

    def test_weight_dictionary(self, ref_params, prec192):
        n = 4
        sp = painleve.params_from_weight(ref_params, n)
        a, b, q = ref_params.a, ref_params.b, ref_params.q
        assert abs(sp.k1 - b * q**(n + 1)) < 1e-50
        assert abs(sp.k2 - a * q) < 1e-50
        assert abs(sp.t1 - mp.conj(b) * q**n) < 1e-50
        assert abs(sp.t2 - mp.conj(a)) < 1e-50
        assert sp.constraint_residual() < 1e-50

    def test_step_flow(self, ref_params, prec192):
        sp = painleve.params_from_weight(ref_params, 2)
        sp2 = sp.step()
        assert abs(sp2.k1 - sp.q * sp.k1) < 1e-50
        assert abs(sp2.t1 - sp.q * sp.t1) < 1e-50
        assert sp2.k2 == sp.k2 and sp2.t2 == sp.t2 and sp2.c == sp.c
        # stepped parameters match the dictionary at n + 1
        sp3 = painleve.params_from_weight(ref_params, 3)
        assert abs(sp2.k1 - sp3.k1) < 1e-50 and abs(sp2.t1 - sp3.t1) < 1e-50

    def test_blown_up_points(self, ref_params, prec192):
        sp = painleve.params_from_weight(ref_params, 3)
        pts = painleve.blown_up_points(sp)
        assert len(pts) == 8
        ys = [p[1] for p in pts]
        xis = [p[2] for p in pts]
        assert sum(1 for y in ys if y == mp.inf) == 2
        assert sum(1 for y in ys if y == 0) == 2
        assert sum(1 for x in xis if x == mp.inf) == 2
        assert sum(1 for x in xis if x == 0) == 2


class TestCoordinates:
    def test_y_closed_form(self, ref_params, ctx, prec192):
        for n in (2, 5, 8):
            sp, co = coords_at(ref_params, ctx, n)
            yc = painleve.y_closed(ref_params, ctx.vt(), n)
            assert abs(co.y - yc) < 1e-40 * (1 + abs(yc))

    def test_gauge_invariance(self, ref_params, ctx, prec192):
        # conjugating A by a constant diagonal rescales e12/e21 but leaves
        # (y, xi) unchanged
        n = 3
        sp, co = coords_at(ref_params, ctx, n)
        A = ctx.fits()[n].matrix
        lam = mp.mpc("1.7", "-0.4")
        B = [A[0], pscale(A[1], lam), pscale(A[2], 1 / lam), A[3]]
        co2 = painleve.extract_coords(B, sp)
        assert abs(co.y - co2.y) < 1e-40
        assert abs(co.xi - co2.xi) < 1e-40 * (1 + abs(co.xi))


class TestStep:
    def test_three_routes_agree(self, ref_params, ctx, prec192):
        for n in (2, 3, 7):
            sp, co = coords_at(ref_params, ctx, n)
            # route one: extraction at n + 1 from the recursion chain
            spn, con = coords_at(ref_params, ctx, n + 1)
            # route two: rational step on (y, xi)
            co2, sp2 = painleve.phi_step(co, sp)
            # route three: matrix step then extraction
            At, sp3 = painleve.matrix_step(ctx.fits()[n].matrix, sp)
            co3 = painleve.extract_coords(At, sp3)
            for other in (co2, co3):
                assert abs(other.y - con.y) < 1e-35 * (1 + abs(con.y))
                assert abs(other.xi - con.xi) < 1e-35 * (1 + abs(con.xi))
            assert sp2.constraint_residual() < 1e-40

    def test_matrix_step_invariants(self, ref_params, ctx, prec192):
        n = 3
        sp = painleve.params_from_weight(ref_params, n)
        A = ctx.fits()[n].matrix
        At, sp2 = painleve.matrix_step(A, sp)
        q = ref_params.q
        # det gains one factor of q
        d, dt = mat_det(A), mat_det(At)
        assert pmax(padd(dt, pscale(d, q), -1)) < 1e-40 * pmax(d)
        # normalized gauge: e12 = w z - q, so w ytilde = q
        assert abs(At[1][0] + q) < 1e-40
        co2 = painleve.extract_coords(At, sp2)
        assert abs(At[1][1] * co2.y - q) < 1e-40
        # corner spectra move from (k1, t1 | k2, t2) to (q k1, q t1 | k2, t2)
        assert abs(At[0][-1] - q * sp.k1) < 1e-40
        assert abs(At[0][0] - q * sp.t1) < 1e-40
        assert abs(At[3][-1] - sp.k2) < 1e-40
        assert abs(At[3][0] - sp.t2) < 1e-40

    def test_base_point_guard(self, ref_params, prec192):
        sp = painleve.params_from_weight(ref_params, 3)
        co = painleve.SurfaceCoords(y=sp.c[0], xi=mp.mpc(0))
        with pytest.raises(IndeterminacyError):
            painleve.phi_step(co, sp)


class TestFactorizations:
    def test_on_constraint(self, ref_params, ctx, prec192):
        for n in (2, 5):
            sp, co = coords_at(ref_params, ctx, n)
            for r in painleve.factorization_residuals(co, sp):
                assert r < 1e-40

    def test_generic_coordinates(self, ref_params, prec192):
        # the identities hold for any (y, xi), not only on the orbit
        sp = painleve.params_from_weight(ref_params, 4)
        co = painleve.SurfaceCoords(y=mp.mpc("0.37", "0.21"), xi=mp.mpc("-0.9", "0.55"))
        for r in painleve.factorization_residuals(co, sp):
            assert r < 1e-40
