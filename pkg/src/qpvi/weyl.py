"""Picard-lattice arithmetic and the birational realization of the step.

The lattice side is exact integer linear algebra on Z^10 with the
Lorentzian pairing <u, v> = u0 v0 - sum_{i>=1} ui vi.  The anticanonical
class delta = 3 E0 - sum E_i splits into four components D0..D3, and the
orthogonal complement of their span contains an affine D5 root basis
alpha_0..alpha_5 with delta = alpha0 + alpha1 + 2 alpha2 + 2 alpha3 +
alpha4 + alpha5.  The 10x10 matrix `phi_pic` (columns are the images of
E0..E9) is an isometry fixing delta and alpha0..alpha3, permuting the D_i
in two 2-cycles, and translating alpha4 -> alpha4 - delta,
alpha5 -> alpha5 + delta: a lattice translation.

The geometric side realizes that translation as a composition of
involutions acting on eight parameters b1..b8 and a point (f, g) of the
surface.  w1, w4, w5 permute parameters; w2, w3 are de Jonquieres moves in
f resp. g; w0 acts in a P^2 chart reached through f = y/(x - a1 z),
g = z/x; sigma is the inversion exchanging the two rulings.  The reduced
word

    phi = sigma w4 w3 w2 w0 w1 w2 w3 w4     (rightmost factor first)

reproduces the Painleve step of `painleve.phi_step` under the dictionary
b_i = c_i (i <= 4), b5 = c1 c2/theta1, b6 = c1 c2/theta2, b7 = 1/kappa1,
b8 = q/kappa2, f = xi, g = y.  Note the lattice/point-configuration
convention q = b3 b4 b5 b6/(b1 b2 b7 b8) is the reciprocal of the weight
convention used elsewhere.
"""

from dataclasses import dataclass

import mpmath as mp

from .errors import ChartError, DegenerateError, DomainError, IndeterminacyError

__all__ = [
    "ip", "pic_constants", "phi_pic", "apply_pic", "is_isometry",
    "check_translation", "BPoint", "elementary", "sigma_inversion",
    "composite_map", "composite_closed", "bpoint_from_surface",
    "surface_from_bpoint",
]


# ---------------------------------------------------------------------------
# integer lattice


def _E(i):
    v = [0] * 10
    v[i] = 1
    return tuple(v)


def _lin(*terms):
    out = [0] * 10
    for k, v in terms:
        for i in range(10):
            out[i] += k * v[i]
    return tuple(out)


def ip(u, v):
    """Lorentzian intersection pairing on Z^10."""
    return u[0] * v[0] - sum(u[i] * v[i] for i in range(1, 10))


def pic_constants():
    """delta, the D-components, the root basis, and the F-divisor dictionary."""
    delta = _lin((3, _E(0)), *[(-1, _E(i)) for i in range(1, 10)])
    D = (_lin((1, _E(8)), (-1, _E(9))),
         _lin((1, _E(0)), (-1, _E(6)), (-1, _E(7)), (-1, _E(8))),
         _lin((1, _E(0)), (-1, _E(1)), (-1, _E(2)), (-1, _E(3))),
         _lin((1, _E(0)), (-1, _E(4)), (-1, _E(5)), (-1, _E(8))))
    alpha = (_lin((1, _E(0)), (-1, _E(1)), (-1, _E(8)), (-1, _E(9))),
             _lin((1, _E(2)), (-1, _E(3))),
             _lin((1, _E(1)), (-1, _E(2))),
             _lin((1, _E(0)), (-1, _E(1)), (-1, _E(4)), (-1, _E(6))),
             _lin((1, _E(6)), (-1, _E(7))),
             _lin((1, _E(4)), (-1, _E(5))))
    F = (_E(2), _E(3), _lin((1, _E(0)), (-1, _E(1)), (-1, _E(8))), _E(9),
         _E(4), _E(5), _E(6), _E(7))
    return {"delta": delta, "D": D, "alpha": alpha, "F": F}


def phi_pic():
    """The translation matrix; column j is the image of E_j."""
    return ((6, 2, 2, 2, 3, 0, 0, 3, 2, 1),
            (-2, 0, -1, -1, -1, 0, 0, -1, -1, 0),
            (-2, -1, 0, -1, -1, 0, 0, -1, -1, 0),
            (-2, -1, -1, 0, -1, 0, 0, -1, -1, 0),
            (0, 0, 0, 0, 0, 0, 1, 0, 0, 0),
            (-3, -1, -1, -1, -2, 0, 0, -1, -1, -1),
            (-3, -1, -1, -1, -1, 0, 0, -2, -1, -1),
            (0, 0, 0, 0, 0, 1, 0, 0, 0, 0),
            (-2, -1, -1, -1, -1, 0, 0, -1, 0, 0),
            (-1, 0, 0, 0, -1, 0, 0, -1, 0, 0))


def apply_pic(M, v):
    return tuple(sum(M[i][j] * v[j] for j in range(10)) for i in range(10))


def is_isometry(M):
    im = [apply_pic(M, _E(j)) for j in range(10)]
    return all(ip(im[i], im[j]) == ip(_E(i), _E(j))
               for i in range(10) for j in range(10))


def check_translation(M=None):
    """Exact integer verification that M acts as the lattice translation.

    Returns a dict of named boolean checks; `all` aggregates them.
    """
    M = phi_pic() if M is None else M
    k = pic_constants()
    delta, D, al = k["delta"], k["D"], k["alpha"]
    sub = lambda u, v: tuple(a - b for a, b in zip(u, v))
    add = lambda u, v: tuple(a + b for a, b in zip(u, v))
    adjacent = {(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)}
    checks = {
        "isometry": is_isometry(M),
        "fixes_delta": apply_pic(M, delta) == delta,
        "fixes_alpha_0_3": all(apply_pic(M, al[i]) == al[i] for i in range(4)),
        "alpha4_minus_delta": apply_pic(M, al[4]) == sub(al[4], delta),
        "alpha5_plus_delta": apply_pic(M, al[5]) == add(al[5], delta),
        "d_two_cycles": (apply_pic(M, D[0]) == D[2] and apply_pic(M, D[1]) == D[3]
                         and apply_pic(M, D[2]) == D[0] and apply_pic(M, D[3]) == D[1]),
        "image_of_E2": apply_pic(M, _E(2)) == _lin(
            (2, _E(0)), (-1, _E(1)), (-1, _E(3)), (-1, _E(5)), (-1, _E(6)),
            (-1, _E(8))),
        "delta_null": ip(delta, delta) == 0,
        "delta_root_sum": delta == _lin((1, al[0]), (1, al[1]), (2, al[2]),
                                        (2, al[3]), (1, al[4]), (1, al[5])),
        "root_norms": all(ip(a, a) == -2 for a in al),
        "dynkin_d5": all(
            (ip(al[i], al[j]) == (1 if (i, j) in adjacent else 0))
            for i in range(6) for j in range(i + 1, 6)),
        "delta_orthogonal_to_D": all(ip(delta, d) == 0 for d in D),
    }
    checks["all"] = all(checks.values())
    return checks


# ---------------------------------------------------------------------------
# birational realization


def _near_zero(x, scale=1):
    return abs(x) < mp.mpf(2) ** (-(mp.mp.prec // 2)) * (abs(scale) + 1)


@dataclass(frozen=True)
class BPoint:
    """Parameters b1..b8 and a point (f, g) of the family of surfaces."""

    b: tuple
    f: mp.mpc
    g: mp.mpc

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(mp.mpc(x) for x in self.b))
        object.__setattr__(self, "f", mp.mpc(self.f))
        object.__setattr__(self, "g", mp.mpc(self.g))
        if len(self.b) != 8 or any(x == 0 for x in self.b):
            raise DomainError("need eight nonzero parameters b1..b8")

    @property
    def q(self):
        b = self.b
        return (b[2] * b[3] * b[4] * b[5]) / (b[0] * b[1] * b[6] * b[7])


def _w1(pt):
    b = pt.b
    return BPoint(b=(b[1], b[0]) + b[2:], f=pt.f, g=pt.g)


def _w4(pt):
    b = pt.b
    return BPoint(b=b[:6] + (b[7], b[6]), f=pt.f, g=pt.g)


def _w5(pt):
    b = pt.b
    return BPoint(b=b[:4] + (b[5], b[4]) + b[6:], f=pt.f, g=pt.g)


def _w2(pt):
    b1, b2, b3, b4, b5, b6, b7, b8 = pt.b
    if _near_zero(pt.g - b1, pt.g):
        raise IndeterminacyError("w2 is indeterminate on g = b1")
    return BPoint(b=(b3, b2, b1, b4, b5 * b3 / b1, b6 * b3 / b1, b7, b8),
                  f=pt.f * (pt.g - b3) / (pt.g - b1), g=pt.g)


def _w3(pt):
    b1, b2, b3, b4, b5, b6, b7, b8 = pt.b
    if _near_zero(pt.f - b5, pt.f):
        raise IndeterminacyError("w3 is indeterminate on f = b5")
    return BPoint(b=(b1, b2, b3 * b5 / b7, b4 * b5 / b7, b7, b6, b5, b8),
                  f=pt.f, g=(b5 / b7) * pt.g * (pt.f - b7) / (pt.f - b5))


def _w0(pt):
    """Quadratic involution in the P^2 chart f = y/(x - a1 z), g = z/x."""
    b1, b2, b3, b4, b5, b6, b7, b8 = pt.b
    a1, a2, a3, a8 = 1 / b3, 1 / b1, 1 / b2, b4
    a4, a5 = -b3 / b7, -b3 / b8
    x, z = mp.mpc(1), pt.g
    if _near_zero(x - a1 * z, z):
        raise ChartError("point sits on the line x = a1 z of the chart")
    y = pt.f * (x - a1 * z)
    xp = x * (x - a1 * z)
    yp = y * (x - z / a8)
    zp = z * (x - a1 * z)
    na1, na8 = 1 / a8, 1 / a1
    na4, na5 = a1 * a8 * a4, a1 * a8 * a5
    nb3 = 1 / na1
    nb = (1 / a2, 1 / a3, nb3, na8, b5, b6, -nb3 / na4, -nb3 / na5)
    if _near_zero(xp, 1) or _near_zero(xp - na1 * zp, zp):
        raise ChartError("image leaves the chart of the quadratic involution")
    return BPoint(b=nb, f=yp / (xp - na1 * zp), g=zp / xp)


def sigma_inversion(pt):
    """The inversion swapping the two rulings of the quadric."""
    b1, b2, b3, b4, b5, b6, b7, b8 = pt.b
    if _near_zero(pt.f) or _near_zero(pt.g):
        raise IndeterminacyError("inversion is indeterminate on f g = 0")
    cg = b3 * b4 * b5 / b8
    cf = b3 * b4 * b5 ** 2 * b6 / (b1 * b2 * b8)
    nb = (cg / b3, cg / b4, cg / b1, cg / b2,
          cf / b7, cf / b8, cf / b5, cf / b6)
    return BPoint(b=nb, f=cf / pt.f, g=cg / pt.g)


_GENERATORS = (_w0, _w1, _w2, _w3, _w4, _w5)


def elementary(i, pt):
    """Apply the reflection w_i, i = 0..5."""
    if not 0 <= i <= 5:
        raise DomainError(f"reflection index must be 0..5, got {i}")
    return _GENERATORS[i](pt)


def composite_map(pt):
    """phi = sigma w4 w3 w2 w0 w1 w2 w3 w4, rightmost factor applied first."""
    for step in (_w4, _w3, _w2, _w1, _w0, _w2, _w3, _w4, sigma_inversion):
        pt = step(pt)
    return pt


def composite_closed(pt):
    """Closed forms (fbar, gbar) of the composite's action on the point."""
    b1, b2, b3, b4, b5, b6, b7, b8 = pt.b
    f, g = pt.f, pt.g
    if _near_zero(f) or _near_zero(g):
        raise IndeterminacyError("closed forms are indeterminate on f g = 0")
    den = ((f * (g - b3) - b8 * (g - b3 * b5 / b8))
           * (f * (g - b4) - b8 * (g - b4 * b5 / b8)))
    if _near_zero(den, f * g):
        raise IndeterminacyError("fbar denominator vanishes")
    fbar = (b3 * b4 * b5 ** 2 * b6 / (b1 * b2 * b8) / f
            * ((f * (g - b1 * b8 / b5) - b8 * (g - b1))
               * (f * (g - b2 * b8 / b5) - b8 * (g - b2))) / den)
    if _near_zero(f - b5, f):
        raise IndeterminacyError("gbar is indeterminate on f = b5")
    G = g * (f - b8) / (f - b5)
    for v in (G - b1 * b8 / b5, G - b2 * b8 / b5):
        if _near_zero(v, G):
            raise IndeterminacyError("gbar hits a parameter line")
    P = ((G - b3) / (G - b1 * b8 / b5)) * ((G - b4) / (G - b2 * b8 / b5))
    if _near_zero(f * P - b5, f):
        raise IndeterminacyError("gbar denominator vanishes")
    gbar = (b1 * b2 * b8 / (b5 * g)) * ((f - b5) / (f - b8)) \
        * (f * P - b3 * b4 * b5 ** 2 / (b1 * b2 * b8)) / (f * P - b5)
    return fbar, gbar


def bpoint_from_surface(sp, coords):
    """Dictionary from surface parameters/coordinates to the b-chart."""
    c1, c2, c3, c4 = sp.c
    if abs(sp.t1) == 0 or abs(sp.t2) == 0 or abs(sp.k1) == 0 or abs(sp.k2) == 0:
        raise DegenerateError("dictionary needs nonzero kappa, theta")
    b = (c1, c2, c3, c4, c1 * c2 / sp.t1, c1 * c2 / sp.t2, 1 / sp.k1,
         sp.q / sp.k2)
    return BPoint(b=b, f=coords.xi, g=coords.y)


def surface_from_bpoint(pt):
    """Inverse dictionary; imports locally to avoid a module cycle."""
    from .painleve import SurfaceCoords, SurfaceParams
    b1, b2, b3, b4, b5, b6, b7, b8 = pt.b
    q = (b1 * b2 * b7 * b8) / (b3 * b4 * b5 * b6)
    sp = SurfaceParams(k1=1 / b7, k2=q / b8, t1=b1 * b2 / b5, t2=b1 * b2 / b6,
                       c=(b1, b2, b3, b4), q=q)
    return sp, SurfaceCoords(y=pt.g, xi=pt.f)
