import mpmath as mp
import pytest

from qpvi import laxpair, opuc, qseries
from qpvi.errors import DegreeError, FitError
from qpvi.polys import padd, pmax


class TestFit:
    def test_residual_gate(self, fits):
        for fit in fits.values():
            assert fit.residual < 1e-45

    def test_theta_closed_forms(self, ref_params, vt, fits, prec192):
        for n in (1, 2, 5, 9):
            fit = fits[n]
            th = laxpair.theta_closed(ref_params, vt, n)
            ts = laxpair.theta_star_closed(ref_params, vt, n)
            assert pmax(padd(fit.theta, th, -1)) < 1e-40
            assert pmax(padd(fit.theta_star, ts, -1)) < 1e-40

    def test_corner_entries(self, ref_params, vt, fits, prec192):
        a, b, q = ref_params.a, ref_params.b, ref_params.q
        for n in (1, 3, 7):
            fit = fits[n]
            assert abs(fit.e11[-1] - b * q**(n + 1)) < 1e-40
            assert abs(fit.e11[0] - mp.conj(b) * q**n) < 1e-40
            assert abs(fit.e22[-1] - a * q) < 1e-40
            assert abs(fit.e22[0] - mp.conj(a)) < 1e-40

    def test_offdiagonal_structure(self, vt, fits, prec192):
        for n in (2, 6):
            fit = fits[n]
            # e12 = -alpha_{n+1} Theta_n, e21 = -z conj(alpha_{n+1}) Theta*_n
            assert abs(fit.e12[0] + vt.alpha[n + 1] * fit.theta[0]) < 1e-40
            assert fit.e21[0] == 0
            assert abs(fit.e21[1] + mp.conj(vt.alpha[n + 1]) * fit.theta_star[0]) < 1e-40

    def test_index_range(self, ref_params, vt):
        with pytest.raises(DegreeError):
            laxpair.fit_spectral_matrix(ref_params, vt, 0)
        with pytest.raises(DegreeError):
            laxpair.fit_spectral_matrix(ref_params, vt, vt.N)

    def test_unattainable_tolerance(self, ref_params, vt, prec192):
        with pytest.raises(FitError):
            laxpair.fit_spectral_matrix(ref_params, vt, 3, tol=mp.mpf(10) ** -200)

    def test_epsilon_columns(self, ref_params, vt, fits, prec192):
        for n in (1, 5):
            assert laxpair.epsilon_column_residuals(ref_params, vt, fits[n]) < 1e-40


class TestCompatibility:
    def test_fundamental_relation(self, ref_params, vt, fits, prec192):
        for n in (1, 2, 6):
            B = laxpair.build_B(vt, n)
            r = laxpair.check_fundamental(fits[n], fits[n + 1], B, ref_params.q)
            assert r < 1e-40

    def test_determinant(self, ref_params, fits, prec192):
        q = ref_params.q
        for n in (1, 4, 8):
            const, spread = laxpair.det_ratio_constant(fits[n], ref_params)
            assert spread < 1e-40
            # det A_n = -q^n V W
            assert abs(const + q**n) < 1e-40
