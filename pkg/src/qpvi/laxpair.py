"""Spectral matrices for the q-difference equation of the orthogonal family.

The column vector (phi_n, phi*_n) is carried from z to qz by a 2x2
polynomial matrix: with V, W the weight polynomials,

    V(z) phi_n(qz)  = P(z) phi_n(z)  + Q(z)  phi*_n(z),   deg P <= 2, deg Q <= 1,
    V(z) phi*_n(qz) = Ps(z) phi*_n(z) + Qs(z) phi_n(z),   Qs = z * (linear),

and the same matrix moves the second-kind column with a sign twist,

    -W(z) eps_n(qz)  = P(z) eps_n(z)  - Q(z)  eps*_n(z),
    -W(z) eps*_n(qz) = Ps(z) eps*_n(z) - Qs(z) eps_n(z).

Both rows are overdetermined linear systems in the five unknown
coefficients and are solved by least squares on the polynomial
coefficients; the n = 1 system is rank-deficient on coefficients alone
and is augmented with pointwise samples of the eps identities.

Writing Q = -alpha_{n+1} Theta_n and Qs = -z conj(alpha_{n+1}) Theta*_n,
the linear factors admit closed forms in the Verblunsky data:

    Theta_n  = (a - b q^{n+1}) z + (conj(b) q^n - conj(a)) alpha_n / alpha_{n+1},
    Theta*_n = (a q - b q^{n+1}) (conj(alpha_n)/conj(alpha_{n+1})) z
               + (b q^{n+1} - conj(a)),

while P has corner coefficients (b q^{n+1}, conj(b) q^n) and Ps has
(a q, conj(a)).  A_n = [[P, Q], [Qs, Ps]] together with

    B_n = [[z, alpha_{n+1}], [conj(alpha_{n+1}) z, 1]]

satisfies the compatibility identity A_{n+1}(z) B_n(z) = B_n(qz) A_n(z),
and det A_n is the fixed multiple -q^n of V(z) W(z).
"""

from dataclasses import dataclass

import mpmath as mp

from .errors import DegenerateError, DegreeError, FitError
from .opuc import epsilon_eval, epsilon_star_eval
from .polys import (mat_max, mat_mul, mat_q, padd, pdeg, peval, pmax, pmul,
                    pscale, pstar)
from .qseries import vw_polys

__all__ = [
    "SpectralFit", "theta_closed", "theta_star_closed", "fit_spectral_matrix",
    "build_B", "check_fundamental", "det_ratio_constant",
    "epsilon_column_residuals", "fits_to_json_dict",
]

# sample points inside the unit disk for the rank-deficient n = 1 system
_EPS_NODES = (mp.mpc("0.31", "0.17"), mp.mpc("-0.22", "0.4"), mp.mpc("0.1", "-0.45"))


@dataclass(frozen=True)
class SpectralFit:
    """Fitted A_n with the extracted linear factors and fit residual."""

    n: int
    e11: tuple
    e12: tuple
    e21: tuple
    e22: tuple
    theta: tuple
    theta_star: tuple
    residual: mp.mpf

    @property
    def matrix(self):
        return [list(self.e11), list(self.e12), list(self.e21), list(self.e22)]

    def to_json_dict(self):
        def poly(p):
            return [[float(x.real), float(x.imag)] for x in p]
        return {"n": self.n, "e11": poly(self.e11), "e12": poly(self.e12),
                "e21": poly(self.e21), "e22": poly(self.e22),
                "theta": poly(self.theta), "theta_star": poly(self.theta_star),
                "residual": float(self.residual)}


def _alpha_ratio(vt, n):
    if abs(vt.alpha[n + 1]) < mp.mpf(2) ** (-(mp.mp.prec // 2)):
        raise DegenerateError(f"alpha_{n + 1} vanishes; linear factors degenerate")
    return vt.alpha[n] / vt.alpha[n + 1]


def theta_closed(p, vt, n):
    """Closed form of Theta_n."""
    lam = p.a - p.b * p.q ** (n + 1)
    mu = (-mp.conj(p.a) + mp.conj(p.b) * p.q ** n) * _alpha_ratio(vt, n)
    return [mu, lam]


def theta_star_closed(p, vt, n):
    """Closed form of Theta*_n."""
    lam = (p.a * p.q - p.b * p.q ** (n + 1)) * mp.conj(_alpha_ratio(vt, n))
    mu = p.b * p.q ** (n + 1) - mp.conj(p.a)
    return [mu, lam]


def _coeff_rows(target, lhs, first, second, first_degs, second_degs):
    """Coefficient-matching rows: lhs_i = sum over shifted copies of the bases."""
    rows, rhs = [], []
    for i in range(target + 1):
        row = []
        for k in first_degs:
            row.append(first[i - k] if 0 <= i - k < len(first) else mp.mpc(0))
        for k in second_degs:
            row.append(second[i - k] if 0 <= i - k < len(second) else mp.mpc(0))
        rows.append(row)
        rhs.append(lhs[i] if i < len(lhs) else mp.mpc(0))
    return rows, rhs


def fit_spectral_matrix(p, vt, n, tol=None):
    """Least-squares fit of A_n from the phi-row identities.

    Returns a SpectralFit; raises FitError if either row misses its
    identity by more than `tol` relative to the coefficient scale.
    """
    if n < 1 or n + 1 > vt.N:
        raise DegreeError(f"fit needs 1 <= n <= {vt.N - 1}, got {n}")
    if tol is None:
        tol = mp.mpf(2) ** (-(mp.mp.prec // 3))
    V, W = vw_polys(p)
    q = p.q
    ph = list(vt.phi[n])
    st = vt.phi_star(n)

    # first row: V(z) phi(qz) = P phi + Q phi*
    lhs1 = pmul(V, [x * q ** i for i, x in enumerate(ph)])
    rows1, rhs1 = _coeff_rows(n + 2, lhs1, ph, st, range(3), range(2))
    # second row: V(z) phi*(qz) = Ps phi* + Qs phi, Qs = z*(linear)
    lhs2 = pmul(V, [x * q ** i for i, x in enumerate(st)])
    rows2, rhs2 = _coeff_rows(n + 2, lhs2, st, ph, range(3), range(1, 3))

    if n < 2:
        # augment with the eps identities; coefficients alone are rank-deficient
        for z in _EPS_NODES:
            e = epsilon_eval(p, vt, n, z)
            es = epsilon_star_eval(p, vt, n, z)
            eq = epsilon_eval(p, vt, n, q * z)
            esq = epsilon_star_eval(p, vt, n, q * z)
            wz = peval(W, z)
            rows1.append([e, z * e, z ** 2 * e, -es, -z * es])
            rhs1.append(-wz * eq)
            rows2.append([es, z * es, z ** 2 * es, -z * e, -z ** 2 * e])
            rhs2.append(-wz * esq)

    sol1, _ = mp.qr_solve(mp.matrix(rows1), mp.matrix(rhs1))
    sol2, _ = mp.qr_solve(mp.matrix(rows2), mp.matrix(rhs2))
    P = [sol1[0], sol1[1], sol1[2]]
    Q = [sol1[3], sol1[4]]
    Ps = [sol2[0], sol2[1], sol2[2]]
    Qs = [mp.mpc(0), sol2[3], sol2[4]]

    r1 = pmax(padd(lhs1, padd(pmul(P, ph), pmul(Q, st)), -1)) / (1 + pmax(lhs1))
    r2 = pmax(padd(lhs2, padd(pmul(Ps, st), pmul(Qs, ph)), -1)) / (1 + pmax(lhs2))
    resid = max(r1, r2)
    if resid > tol:
        raise FitError(f"A_{n} fit residual {mp.nstr(resid, 5)} exceeds {mp.nstr(tol, 5)}")

    a1 = vt.alpha[n + 1]
    if abs(a1) < mp.mpf(2) ** (-(mp.mp.prec // 2)):
        raise DegenerateError(f"alpha_{n + 1} vanishes; cannot normalize Theta_{n}")
    theta = pscale(Q, -1 / a1)
    theta_star = pscale(Qs[1:], -1 / mp.conj(a1))
    return SpectralFit(n=n, e11=tuple(P), e12=tuple(Q), e21=tuple(Qs),
                       e22=tuple(Ps), theta=tuple(theta),
                       theta_star=tuple(theta_star), residual=resid)


def build_B(vt, n):
    """B_n carrying (phi_n, phi*_n) to order n + 1."""
    a = vt.alpha[n + 1]
    return [[mp.mpc(0), mp.mpc(1)], [a], [mp.mpc(0), mp.conj(a)], [mp.mpc(1)]]


def check_fundamental(fit_n, fit_next, Bn, q):
    """Relative coefficient residual of A_{n+1}(z) B_n(z) = B_n(qz) A_n(z)."""
    L = mat_mul(fit_next.matrix, Bn)
    R = mat_mul(mat_q(Bn, q), fit_n.matrix)
    diff = max(pmax(padd(L[i], R[i], -1)) for i in range(4))
    return diff / max(mat_max(L), mat_max(R))


def det_ratio_constant(fit, p):
    """(constant, spread) of det A_n / (V W), which must be z-independent."""
    det = padd(pmul(fit.matrix[0], fit.matrix[3]),
               pmul(fit.matrix[1], fit.matrix[2]), -1)
    VW = pmul(*vw_polys(p))
    scale = pmax(VW)
    idx = [i for i in range(len(VW)) if abs(VW[i]) > scale * mp.mpf(2) ** -40]
    consts = [det[i] / VW[i] for i in idx if i < len(det)]
    if not consts:
        raise DegreeError("V W has no usable coefficients")
    spread = max(abs(x - consts[0]) for x in consts) / abs(consts[0])
    extra = pmax([det[i] for i in range(len(det))
                  if i >= len(VW) or i not in idx]) / (abs(consts[0]) * scale)
    return consts[0], max(spread, extra)


def epsilon_column_residuals(p, vt, fit, zs=None):
    """Pointwise residuals of the eps-column identities for a fitted A_n."""
    if zs is None:
        zs = [mp.mpf("0.28") * mp.e ** (2j * mp.pi * k / 5 + 0.3j) for k in range(5)]
    V, W = vw_polys(p)
    n, q = fit.n, p.q
    worst = mp.mpf(0)
    for z in zs:
        e = epsilon_eval(p, vt, n, z)
        es = epsilon_star_eval(p, vt, n, z)
        wz = peval(W, z)
        lhs1 = -wz * epsilon_eval(p, vt, n, q * z)
        rhs1 = peval(fit.matrix[0], z) * e - peval(fit.matrix[1], z) * es
        lhs2 = -wz * epsilon_star_eval(p, vt, n, q * z)
        rhs2 = peval(fit.matrix[3], z) * es - peval(fit.matrix[2], z) * e
        worst = max(worst,
                    abs(lhs1 - rhs1) / max(abs(lhs1), abs(rhs1)),
                    abs(lhs2 - rhs2) / max(abs(lhs2), abs(rhs2)))
    return worst


def fits_to_json_dict(fits):
    """JSON object keyed by the string order n."""
    return {str(f.n): f.to_json_dict() for f in fits}
