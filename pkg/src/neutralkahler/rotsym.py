"""Rotationally symmetric graphs and their stationarity ODEs.

Over a rotationally symmetric base (``u = u(R)``), a rotationally
symmetric graph has the form ``F = G(R) e^{i theta}`` and splits into a
real part ``H(R)`` and an imaginary part ``+- sqrt(Psi(R))``. Requiring
area-stationarity turns into a pair of coupled second-order ODEs,

    Psi'' + p1 Psi' + q1 Psi = L1        Psi'' + p2 Psi' + q2 Psi = L2,

where dots are R-derivatives and (with ``D = 1 + R u'``)

    p1 = -(1 + R^2 (u'' - 2 u'^2)) / (R D)
    q1 = -2 (u' - R (u'' - 2 u'^2)) / (R D)
    L1 = (R H' - H) / (R^2 D^2) * [ R^2 D H'' - (1 + 2 R u' + R^2 u'') (R H' - H) ]
    p2 = -2 R H'' / (R H' - H) - (3 + 4 R u' - R^2 (u'' - 2 u'^2)) / (R D)
    q2 = -4 R u' H'' / (R H' - H)
         - 2 (3 u' + R (6 u'^2 - u'') - 2 R^2 (u'' - 2 u'^2) u') / (R D)
    L2 = -2 (R H' - H)^2 / R^2.

The homogeneous solutions of the first equation are ``R^2`` and
``e^{-2u}``; reduction of order recovers the second from the first.
Variation of parameters yields the closed-form solution

    Psi = A2 R^2 + B2 e^{-2u} + e^{-2u} * int (R H' - H)^2 e^{2u} / (2 R D) dR,

and the companion H-equation then forces ``H = A1 R + B1 e^{-2u} / R``,
with the integral collapsing to ``-B1^2 e^{-4u} / R^2``. The resulting
four-parameter family (``A2 != 0``) exhausts the rotationally symmetric
area-stationary graphs; its slope determinant is ``A2 (1 + R u')^2``
pointwise, so the sign of ``A2`` fixes the causal class of the whole
surface. For ``A2 = 0`` the same integral formula produces graphs whose
induced metric is degenerate everywhere (``lam^2 = sigma sigmabar``).

All indefinite integrals are cumulative quadratures anchored at the left
end of the declared domain; the resulting constant shifts are absorbed
into ``B2`` (or the homogeneous multiple, for reduction of order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .ambient import ConformalGeometry
from .errors import (
    DegenerateFamilyRedirect,
    DomainError,
    EmptyDomainError,
    SingularCoefficientError,
)
from .graphs import GraphSection
from .numerics import ComplexField, CumulativeIntegral, RadialFunction

__all__ = [
    "FamilyParams",
    "OdeCoefficients",
    "RotSymProfile",
    "ode_coefficients",
    "reduction_of_order",
    "psi_closed_form",
    "stationary_family",
    "degenerate_family",
    "ode_residuals",
    "sphere_shorthand_params",
    "rotsym_section",
]

#: threshold on |1 + R u'| below which the ODE coefficients are singular
COEFF_SINGULAR_ATOL = 1e-10
#: threshold on |R H' - H| below which p2, q2 are undefined
SOURCE_SINGULAR_ATOL = 1e-12


@dataclass(frozen=True)
class FamilyParams:
    """Constants of the closed-form stationary family."""

    a1: float = 0.0
    b1: float = 0.0
    a2: float = 1.0
    b2: float = 0.0


def sphere_shorthand_params(b2: float, c2: float) -> FamilyParams:
    """Convert the round-sphere torus constants ``(B2, C2)``.

    On the sphere the closed family is usually written with the factor
    ``(1 + R^2)^2`` instead of ``e^{-2u} = (1 + R^2)^2 / 4``; absorbing
    the 4 gives ``a2 = C2 - 2 B2`` and ``b2 = 4 B2``.
    """
    return FamilyParams(a1=0.0, b1=0.0, a2=c2 - 2.0 * b2, b2=4.0 * b2)


@dataclass(frozen=True)
class OdeCoefficients:
    """Values of the six ODE coefficient functions at one radius.

    ``p2`` and ``q2`` are ``nan`` where ``R H' - H = 0`` (the second
    equation degenerates there; both sources still vanish).
    """

    p1: float
    q1: float
    L1: float
    p2: float
    q2: float
    L2: float


def _as_radial(h: Union[RadialFunction, Callable[[float], float]]) -> RadialFunction:
    return h if isinstance(h, RadialFunction) else RadialFunction(h)


def ode_coefficients(
    geom: ConformalGeometry, H: Union[RadialFunction, Callable[[float], float]], r: float
) -> OdeCoefficients:
    """Evaluate the coefficient functions of both stationarity ODEs at ``r``."""
    geom.require_radial()
    if r <= 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    H = _as_radial(H)
    ud = geom.radial_du(r)
    udd = geom.radial_ddu(r)
    d = 1.0 + r * ud
    if abs(d) <= COEFF_SINGULAR_ATOL:
        raise SingularCoefficientError(f"1 + R u'(R) = {d:.3e} at R = {r}")

    k = udd - 2.0 * ud * ud
    p1 = -(1.0 + r * r * k) / (r * d)
    q1 = -2.0 * (ud - r * k) / (r * d)

    hd = H.deriv(r, 1)
    hdd = H.deriv(r, 2)
    g = r * hd - H(r)
    L1 = g / (r * r * d * d) * (r * r * d * hdd - (1.0 + 2.0 * r * ud + r * r * udd) * g)
    L2 = -2.0 * g * g / (r * r)

    if abs(g) <= SOURCE_SINGULAR_ATOL * max(1.0, abs(r * hd), abs(H(r))):
        p2 = q2 = float("nan")
    else:
        p2 = -2.0 * r * hdd / g - (3.0 + 4.0 * r * ud - r * r * k) / (r * d)
        q2 = -4.0 * r * ud * hdd / g - 2.0 * (
            3.0 * ud + r * (6.0 * ud * ud - udd) - 2.0 * r * r * k * ud
        ) / (r * d)
    return OdeCoefficients(p1=p1, q1=q1, L1=L1, p2=p2, q2=q2, L2=L2)


def reduction_of_order(
    p: Callable[[float], float],
    psi1: Union[RadialFunction, Callable[[float], float]],
    r_range: tuple[float, float],
    n_quad: int = 256,
) -> RadialFunction:
    """Second homogeneous solution from a known one.

    Given a solution ``psi1`` of ``psi'' + p psi' + q psi = 0``, returns

        psi2(R) = psi1(R) * int_a^R psi1^{-2} e^{-P},   P(R) = int_a^R p,

    with both integrals anchored at the left end of ``r_range`` (so the
    answer is normalised by ``e^{-P(a)} = 1`` and defined up to adding a
    multiple of ``psi1``). The Wronskian ``psi1 psi2' - psi2 psi1'``
    equals ``e^{-P}`` identically.
    """
    a, b = r_range
    psi1 = _as_radial(psi1)
    samples = np.linspace(a, b, 101)
    vals = np.array([psi1(r) for r in samples])
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.min(np.abs(vals)) < 1e-12 * scale or np.any(np.sign(vals[:-1]) != np.sign(vals[1:])):
        raise DomainError("psi1 vanishes inside the reduction range")

    P = CumulativeIntegral(p, a, b, n_quad)

    def integrand(r: float) -> float:
        return math.exp(-P(r)) / psi1(r) ** 2

    Q = CumulativeIntegral(integrand, a, b, n_quad)

    def f(r: float) -> float:
        return psi1(r) * Q(r)

    def df(r: float) -> float:
        return psi1.deriv(r, 1) * Q(r) + psi1(r) * integrand(r)

    return RadialFunction(f, df)


def _radial_v(geom: ConformalGeometry) -> Callable[[float], float]:
    return lambda r: math.exp(-2.0 * geom.radial_u(r))


def _source_J(geom: ConformalGeometry, H: RadialFunction) -> Callable[[float], float]:
    """The inhomogeneous integrand ``(R H' - H)^2 e^{2u} / (2 R (1 + R u'))``."""

    def J(r: float) -> float:
        d = 1.0 + r * geom.radial_du(r)
        if abs(d) <= COEFF_SINGULAR_ATOL:
            raise SingularCoefficientError(f"1 + R u' vanishes on the integration path at R={r}")
        g = r * H.deriv(r, 1) - H(r)
        return g * g * math.exp(2.0 * geom.radial_u(r)) / (2.0 * r * d)

    return J


def _psi_with_integral(
    geom: ConformalGeometry,
    H: RadialFunction,
    a2: float,
    b2: float,
    r_range: tuple[float, float],
    n_quad: int,
) -> RadialFunction:
    """``Psi = a2 R^2 + e^{-2u} (b2 + I)`` with cumulative ``I' = J``.

    First and second derivatives are assembled from the analytic pieces,
    so they are exact functions of the (quadrature-valued) integral.
    """
    a, b = r_range
    J = _source_J(geom, H)
    # probe the path now so singular geometry fails at construction
    for r in np.linspace(a, b, 257):
        J(r)
    I = CumulativeIntegral(J, a, b, n_quad)
    v = _radial_v(geom)

    def f(r: float) -> float:
        return a2 * r * r + v(r) * (b2 + I(r))

    def df(r: float) -> float:
        ud = geom.radial_du(r)
        return 2.0 * a2 * r - 2.0 * ud * v(r) * (b2 + I(r)) + v(r) * J(r)

    def d2f(r: float) -> float:
        ud = geom.radial_du(r)
        udd = geom.radial_ddu(r)
        g = r * H.deriv(r, 1) - H(r)
        jv = J(r)
        if abs(g) > 0.0:
            d = 1.0 + r * ud
            dj = jv * (
                2.0 * r * H.deriv(r, 2) / g
                + 2.0 * ud
                - (1.0 + 2.0 * r * ud + r * r * udd) / (r * d)
            )
        else:
            dj = 0.0
        return (
            2.0 * a2
            + 2.0 * v(r) * (2.0 * ud * ud - udd) * (b2 + I(r))
            - 4.0 * ud * v(r) * jv
            + v(r) * dj
        )

    return RadialFunction(f, df, d2f)


def psi_closed_form(
    geom: ConformalGeometry,
    H: Union[RadialFunction, Callable[[float], float]],
    a2: float,
    b2: float,
    r_range: tuple[float, float],
    n_quad: int = 256,
) -> RadialFunction:
    """The squared imaginary part solving the first stationarity ODE.

    The integral term is a cumulative quadrature from the left end of
    ``r_range``; the constant ambiguity this introduces is a shift of
    ``b2``. Comparisons with closed forms must be made modulo that shift.
    """
    geom.require_radial()
    return _psi_with_integral(geom, _as_radial(H), a2, b2, r_range, n_quad)


@dataclass(frozen=True)
class RotSymProfile:
    """A rotationally symmetric graph ``F = (H + branch * i sqrt(Psi)) e^{i theta}``."""

    geometry: ConformalGeometry
    H: RadialFunction
    psi: RadialFunction
    branch: int
    domain: tuple[float, float]

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise DomainError(f"branch must be +1 or -1, got {self.branch}")
        lo, hi = self.domain
        if not 0.0 < lo < hi:
            raise DomainError(f"invalid radial domain {self.domain}")
        worst = min(self.psi(r) for r in np.linspace(lo, hi, 101))
        if worst < -1e-12 * max(1.0, abs(worst)):
            raise DomainError(f"Psi < 0 inside the declared domain (min {worst:.3e})")

    def W(self, r: float) -> float:
        return math.sqrt(max(self.psi(r), 0.0))

    def G(self, r: float) -> complex:
        return complex(self.H(r), self.branch * self.W(r))

    def dG(self, r: float) -> complex:
        w = self.W(r)
        if w == 0.0:
            raise DomainError(f"profile derivative undefined where Psi = 0 (R = {r})")
        return complex(self.H.deriv(r, 1), self.branch * self.psi.deriv(r, 1) / (2.0 * w))

    def section(self) -> GraphSection:
        return rotsym_section(self.geometry, self.G, self.dG)

    def ode_residuals_at(self, r: float) -> tuple[float, float]:
        return ode_residuals(self.geometry, self.H, self.psi, r)


def rotsym_section(
    geom: ConformalGeometry, G: Callable[[float], complex], dG: Callable[[float], complex]
) -> GraphSection:
    """Graph section ``F = G(R) e^{i theta}`` with exact Wirtinger derivatives.

    For this ansatz ``d F = (G' + G/R)/2`` (independent of theta) and
    ``dbar F = e^{2 i theta} (G' - G/R)/2``.
    """

    def ev(xi: complex) -> complex:
        r = abs(xi)
        if r == 0.0:
            raise DomainError("rotationally symmetric section undefined at xi = 0")
        return G(r) * xi / r

    def d(xi: complex) -> complex:
        r = abs(xi)
        return 0.5 * (dG(r) + G(r) / r)

    def dbar(xi: complex) -> complex:
        r = abs(xi)
        phase = xi / r
        return 0.5 * phase * phase * (dG(r) - G(r) / r)

    return GraphSection(ComplexField(ev, d=d, dbar=dbar), geom)


def _closed_family_profiles(
    geom: ConformalGeometry, params: FamilyParams
) -> tuple[RadialFunction, RadialFunction]:
    """Closed-form ``H`` and ``Psi`` (with derivatives) of the stationary family."""
    a1, b1, a2, b2 = params.a1, params.b1, params.a2, params.b2
    v = _radial_v(geom)

    def H(r: float) -> float:
        return a1 * r + b1 * v(r) / r

    def dH(r: float) -> float:
        ud = geom.radial_du(r)
        return a1 - b1 * v(r) * (1.0 + 2.0 * r * ud) / (r * r)

    def d2H(r: float) -> float:
        ud = geom.radial_du(r)
        udd = geom.radial_ddu(r)
        return (
            2.0
            * b1
            * v(r)
            * ((1.0 + 2.0 * r * ud) / r**3 + (2.0 * ud * ud - udd) / r)
        )

    def psi(r: float) -> float:
        vr = v(r)
        return a2 * r * r + b2 * vr - b1 * b1 * vr * vr / (r * r)

    def dpsi(r: float) -> float:
        ud = geom.radial_du(r)
        vr = v(r)
        return (
            2.0 * a2 * r
            - 2.0 * b2 * ud * vr
            + 2.0 * b1 * b1 * vr * vr * (1.0 + 2.0 * r * ud) / r**3
        )

    def d2psi(r: float) -> float:
        ud = geom.radial_du(r)
        udd = geom.radial_ddu(r)
        vr = v(r)
        return (
            2.0 * a2
            - 2.0 * b2 * vr * (udd - 2.0 * ud * ud)
            + 2.0
            * b1
            * b1
            * vr
            * vr
            * (
                (2.0 * r * udd - 8.0 * r * ud * ud - 2.0 * ud) / r**3
                - (3.0 + 6.0 * r * ud) / r**4
            )
        )

    return RadialFunction(H, dH, d2H), RadialFunction(psi, dpsi, d2psi)


def _trim_domain(
    geom: ConformalGeometry,
    psi: RadialFunction,
    r_range: tuple[float, float],
    n_scan: int = 2001,
) -> tuple[float, float]:
    """Largest subinterval of ``r_range`` with ``Psi >= 0`` and ``1 + R u' != 0``."""
    lo, hi = r_range
    if not 0.0 < lo < hi:
        raise DomainError(f"invalid requested range {r_range}")
    rs = np.linspace(lo, hi, n_scan)
    ok = np.array(
        [psi(r) >= 0.0 and abs(1.0 + r * geom.radial_du(r)) > COEFF_SINGULAR_ATOL for r in rs]
    )
    best_len, best = 0, None
    start = None
    for i, good in enumerate(list(ok) + [False]):
        if good and start is None:
            start = i
        elif not good and start is not None:
            if i - start > best_len:
                best_len, best = i - start, (start, i - 1)
            start = None
    if best is None or best_len < 2:
        raise EmptyDomainError(f"no admissible subinterval of {r_range}")
    return float(rs[best[0]]), float(rs[best[1]])


def stationary_family(
    geom: ConformalGeometry,
    params: FamilyParams,
    branch: int = 1,
    r_range: tuple[float, float] = (0.1, 10.0),
) -> RotSymProfile:
    """The closed-form rotationally symmetric area-stationary family.

    The declared domain is the largest subinterval of ``r_range`` on which
    ``Psi >= 0`` and the coefficient factor ``1 + R u'`` does not vanish
    (on the round sphere that factor has a zero at ``R = 1``, splitting
    every requested range).
    """
    geom.require_radial()
    if params.a2 == 0.0:
        raise DegenerateFamilyRedirect(
            "a2 = 0 produces a degenerate surface; use degenerate_family"
        )
    H, psi = _closed_family_profiles(geom, params)
    domain = _trim_domain(geom, psi, r_range)
    return RotSymProfile(geometry=geom, H=H, psi=psi, branch=branch, domain=domain)


def degenerate_family(
    geom: ConformalGeometry,
    H: Union[RadialFunction, Callable[[float], float]],
    b2: float,
    branch: int = 1,
    r_range: tuple[float, float] = (0.1, 10.0),
    n_quad: int = 512,
) -> RotSymProfile:
    """Graphs with everywhere-degenerate induced metric, one per profile ``H``.

    ``Psi = e^{-2u} (b2 + int (R H' - H)^2 e^{2u} / (2 R (1 + R u')))``;
    the slope determinant then cancels identically, for any differentiable
    ``H``.
    """
    geom.require_radial()
    H = _as_radial(H)
    psi = _psi_with_integral(geom, H, 0.0, b2, r_range, n_quad)
    domain = _trim_domain(geom, psi, r_range)
    return RotSymProfile(geometry=geom, H=H, psi=psi, branch=branch, domain=domain)


def comfortable_range(profile: RotSymProfile, rel_floor: float = 0.1) -> tuple[float, float]:
    """Sub-interval of the profile domain clear of its degenerate edges.

    Where ``Psi`` runs into a zero at a domain endpoint the slope fields
    blow up like an inverse square root, which ruins finite-difference
    residuals; this walks inward to the ``Psi >= rel_floor * max Psi``
    contour (falling back to a 6 percent trim when that empties the
    interval).
    """
    lo, hi = profile.domain
    rs = np.linspace(lo, hi, 513)
    vals = np.array([profile.psi(float(r)) for r in rs])
    floor = rel_floor * float(np.max(vals))
    good = np.nonzero(vals >= floor)[0]
    if good.size >= 2:
        new_lo, new_hi = float(rs[good[0]]), float(rs[good[-1]])
        if new_hi - new_lo >= 0.15 * (hi - lo):
            return new_lo, new_hi
    pad = 0.06 * (hi - lo)
    return lo + pad, hi - pad


def ode_residuals(
    geom: ConformalGeometry,
    H: Union[RadialFunction, Callable[[float], float]],
    psi: Union[RadialFunction, Callable[[float], float]],
    r: float,
) -> tuple[float, float]:
    """Residuals of both stationarity ODEs at ``r`` for given profiles.

    The second residual is ``nan`` where its coefficients are undefined
    (``R H' - H = 0``).
    """
    psi = _as_radial(psi)
    co = ode_coefficients(geom, H, r)
    val = psi(r)
    dval = psi.deriv(r, 1)
    d2val = psi.deriv(r, 2)
    r1 = d2val + co.p1 * dval + co.q1 * val - co.L1
    if math.isnan(co.p2):
        r2 = float("nan")
    else:
        r2 = d2val + co.p2 * dval + co.q2 * val - co.L2
    return float(r1), float(r2)
