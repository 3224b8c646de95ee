"""Complex-analytic calculus and quadrature on annuli.

Conventions, fixed once for the whole library:

* ``xi = x + i y`` and the Wirtinger operators are

      d    = (d/dx - i d/dy) / 2        (holomorphic derivative)
      dbar = (d/dx + i d/dy) / 2        (anti-holomorphic derivative)

  so that ``d(xi) = 1``, ``d(conj xi) = 0``.
* Quadrature on an annulus ``[r_min, r_max] x [0, 2pi)`` is composite
  Gauss-Legendre in the radius (4 points per cell) and a uniform trapezoid
  rule in the angle, which is spectrally accurate for periodic integrands.
  The polar Jacobian ``R dR dtheta`` is included by ``integrate_annulus``.
* Exclusion bands remove neighbourhoods of singular radii (null circles,
  coefficient singularities) from every grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import roots_legendre

from .errors import DerivativeUnavailableError, DomainError, QuadratureError

__all__ = [
    "ComplexField",
    "RadialFunction",
    "AnnulusGrid",
    "wirtinger_d",
    "wirtinger_dbar",
    "radial_derivative",
    "integrate_annulus",
    "integrate_circle",
    "CumulativeIntegral",
]

#: default relative step for complex finite differences
DEFAULT_FD_STEP = 1e-6
#: default half-width of an exclusion band when none is given
DEFAULT_BAND_HALF_WIDTH = 1e-3


def _fd_scale(xi: complex, h: float) -> float:
    return h * max(1.0, abs(xi))


@dataclass(frozen=True)
class ComplexField:
    """A complex-valued function of one complex variable (and its conjugate).

    The field carries its own derivative policy: if closed forms for the
    Wirtinger derivatives ``d`` and ``dbar`` are supplied the policy is
    *analytic*, otherwise derivatives fall back to central finite
    differences with step ``fd_step * max(1, |xi|)``.
    """

    evaluator: Callable[[complex], complex]
    d: Optional[Callable[[complex], complex]] = None
    dbar: Optional[Callable[[complex], complex]] = None
    fd_step: float = DEFAULT_FD_STEP

    @property
    def analytic(self) -> bool:
        return self.d is not None and self.dbar is not None

    def __call__(self, xi: complex) -> complex:
        return complex(self.evaluator(xi))

    def _fd_pair(self, xi: complex) -> tuple[complex, complex]:
        """Central-difference d/dx and d/dy at ``xi``."""
        h = _fd_scale(xi, self.fd_step)
        try:
            fx = (self(xi + h) - self(xi - h)) / (2.0 * h)
            fy = (self(xi + 1j * h) - self(xi - 1j * h)) / (2.0 * h)
        except Exception as exc:  # evaluation failure at a stencil point
            raise DerivativeUnavailableError(
                f"field evaluation failed on the stencil at xi={xi}: {exc}"
            ) from exc
        if not (np.isfinite(fx) and np.isfinite(fy)):
            raise DerivativeUnavailableError(f"non-finite stencil values at xi={xi}")
        return fx, fy

    def wirtinger_d(self, xi: complex) -> complex:
        if self.d is not None:
            return complex(self.d(xi))
        fx, fy = self._fd_pair(xi)
        return 0.5 * (fx - 1j * fy)

    def wirtinger_dbar(self, xi: complex) -> complex:
        if self.dbar is not None:
            return complex(self.dbar(xi))
        fx, fy = self._fd_pair(xi)
        return 0.5 * (fx + 1j * fy)

    @staticmethod
    def combination(terms: Sequence[tuple[complex, "ComplexField"]]) -> "ComplexField":
        """Pointwise linear combination ``sum c_k f_k``.

        Closed-form derivatives are combined when every term has them;
        otherwise the result is a finite-difference field.
        """
        terms = [(complex(c), f) for c, f in terms]

        def ev(xi: complex) -> complex:
            return sum(c * f(xi) for c, f in terms)

        if all(f.analytic for _, f in terms):
            return ComplexField(
                ev,
                d=lambda xi: sum(c * f.d(xi) for c, f in terms),
                dbar=lambda xi: sum(c * f.dbar(xi) for c, f in terms),
            )
        step = min(f.fd_step for _, f in terms)
        return ComplexField(ev, fd_step=step)


def wirtinger_d(f: ComplexField, xi: complex) -> complex:
    """Holomorphic Wirtinger derivative ``(f_x - i f_y)/2`` of a field."""
    return f.wirtinger_d(xi)


def wirtinger_dbar(f: ComplexField, xi: complex) -> complex:
    """Anti-holomorphic Wirtinger derivative ``(f_x + i f_y)/2`` of a field."""
    return f.wirtinger_dbar(xi)


@dataclass(frozen=True)
class RadialFunction:
    """A real function of the radius with optional closed-form derivatives."""

    f: Callable[[float], float]
    df: Optional[Callable[[float], float]] = None
    d2f: Optional[Callable[[float], float]] = None

    def __call__(self, r: float) -> float:
        return float(self.f(r))

    def deriv(self, r: float, order: int = 1) -> float:
        if order == 1 and self.df is not None:
            return float(self.df(r))
        if order == 2 and self.d2f is not None:
            return float(self.d2f(r))
        return radial_derivative(self.f, r, order)

    @staticmethod
    def constant(value: float) -> "RadialFunction":
        return RadialFunction(lambda r: value, lambda r: 0.0, lambda r: 0.0)


def radial_derivative(
    g: Callable[[float], float],
    r: float,
    order: int = 1,
    dg: Optional[Callable[[float], float]] = None,
    d2g: Optional[Callable[[float], float]] = None,
    h: Optional[float] = None,
) -> float:
    """First or second derivative of ``g`` at radius ``r > 0``.

    Uses the supplied closed form when available, otherwise Richardson-
    extrapolated central differences.
    """
    if r <= 0.0:
        raise DomainError(f"radial derivative requested at non-positive radius {r}")
    if order == 1 and dg is not None:
        return float(dg(r))
    if order == 2 and d2g is not None:
        return float(d2g(r))
    if order not in (1, 2):
        raise DomainError(f"derivative order must be 1 or 2, got {order}")

    if h is None:
        h = (1e-5 if order == 1 else 1e-4) * max(1.0, abs(r))
    h = min(h, 0.49 * r)  # keep the full stencil at positive radii

    def central(step: float) -> float:
        if order == 1:
            return (g(r + step) - g(r - step)) / (2.0 * step)
        return (g(r + step) - 2.0 * g(r) + g(r - step)) / step**2

    coarse, fine = central(h), central(h / 2.0)
    return (4.0 * fine - coarse) / 3.0


class CumulativeIntegral:
    """Cumulative quadrature ``I(r) = int_a^r f`` on ``[a, b]``.

    Prefix sums over composite Gauss-Legendre cells are precomputed once;
    evaluation at an arbitrary radius adds the partial cell by a local
    Gauss rule. The table is read-only after construction.
    """

    _NODES, _WEIGHTS = roots_legendre(8)

    def __init__(self, f: Callable[[float], float], a: float, b: float, n_cells: int = 256):
        if not b > a:
            raise DomainError(f"empty integration range [{a}, {b}]")
        self.f = f
        self.a = float(a)
        self.b = float(b)
        self.edges = np.linspace(a, b, n_cells + 1)
        cells = np.array([self._cell(self.edges[i], self.edges[i + 1]) for i in range(n_cells)])
        self.prefix = np.concatenate([[0.0], np.cumsum(cells)])

    def _cell(self, lo: float, hi: float) -> float:
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        return half * sum(w * self.f(mid + half * t) for t, w in zip(self._NODES, self._WEIGHTS))

    def __call__(self, r: float) -> float:
        if r < self.a - 1e-12 or r > self.b + 1e-12:
            raise DomainError(f"radius {r} outside integration range [{self.a}, {self.b}]")
        r = min(max(r, self.a), self.b)
        k = int(np.searchsorted(self.edges, r, side="right")) - 1
        k = min(max(k, 0), len(self.edges) - 2)
        partial = self._cell(self.edges[k], r) if r > self.edges[k] else 0.0
        return float(self.prefix[k] + partial)


def _kept_segments(
    r_min: float, r_max: float, bands: Sequence[tuple[float, float]]
) -> list[tuple[float, float]]:
    """Subtract open exclusion intervals from ``[r_min, r_max]``."""
    segments = [(r_min, r_max)]
    for center, half_width in bands:
        lo, hi = center - half_width, center + half_width
        nxt = []
        for a, b in segments:
            if hi <= a or lo >= b:
                nxt.append((a, b))
                continue
            if lo > a:
                nxt.append((a, lo))
            if hi < b:
                nxt.append((hi, b))
        segments = nxt
    segments = [(a, b) for a, b in segments if b - a > 1e-12]
    if not segments:
        raise DomainError("exclusion bands cover the whole radial range")
    return segments


@dataclass(frozen=True)
class AnnulusGrid:
    """Tensor-product grid on an annulus with optional radial exclusion bands.

    ``n_r`` counts radial quadrature cells (4 Gauss points each) and
    ``n_theta`` equally spaced angles. ``exclusion_bands`` is a sequence of
    ``(center, half_width)`` pairs; no node is placed inside a band.
    """

    r_min: float
    r_max: float
    n_r: int = 32
    n_theta: int = 32
    exclusion_bands: tuple[tuple[float, float], ...] = ()

    # derived node tables, filled in __post_init__
    radial_nodes: np.ndarray = field(init=False, repr=False, compare=False)
    radial_weights: np.ndarray = field(init=False, repr=False, compare=False)
    theta_nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.r_min <= 0.0:
            raise DomainError(f"r_min must be positive, got {self.r_min}")
        if self.r_max <= self.r_min:
            raise DomainError(f"need r_max > r_min, got [{self.r_min}, {self.r_max}]")
        if self.n_r < 2:
            raise DomainError(f"need n_r >= 2, got {self.n_r}")
        if self.n_theta < 4:
            raise DomainError(f"need n_theta >= 4, got {self.n_theta}")
        bands = tuple((float(c), float(h)) for c, h in self.exclusion_bands)
        object.__setattr__(self, "exclusion_bands", bands)

        segments = _kept_segments(self.r_min, self.r_max, bands)
        total = sum(b - a for a, b in segments)
        nodes, weights = [], []
        gl_t, gl_w = roots_legendre(4)
        remaining = self.n_r
        for idx, (a, b) in enumerate(segments):
            if idx == len(segments) - 1:
                cells = remaining
            else:
                cells = max(1, round(self.n_r * (b - a) / total))
                cells = min(cells, remaining - (len(segments) - 1 - idx))
            remaining -= cells
            edges = np.linspace(a, b, cells + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
                nodes.extend(mid + half * gl_t)
                weights.extend(half * gl_w)
        object.__setattr__(self, "radial_nodes", np.asarray(nodes))
        object.__setattr__(self, "radial_weights", np.asarray(weights))
        object.__setattr__(
            self, "theta_nodes", np.arange(self.n_theta) * (2.0 * np.pi / self.n_theta)
        )

    @property
    def theta_weight(self) -> float:
        return 2.0 * np.pi / self.n_theta

    def excluded(self, r: float) -> bool:
        return any(abs(r - c) < h for c, h in self.exclusion_bands)

    def with_bands(self, extra: Sequence[tuple[float, float]]) -> "AnnulusGrid":
        return AnnulusGrid(
            self.r_min, self.r_max, self.n_r, self.n_theta, self.exclusion_bands + tuple(extra)
        )

    def mesh_nodes(self) -> list[tuple[float, float]]:
        """Uniform ``n_r x n_theta`` lattice (inclusive in R), bands removed.

        Used for mesh export and classification maps, where evenly spaced
        nodes read better than Gauss points.
        """
        rs = np.linspace(self.r_min, self.r_max, self.n_r)
        return [(float(r), float(t)) for r in rs if not self.excluded(r) for t in self.theta_nodes]

    def complex_nodes(self) -> list[complex]:
        return [r * np.exp(1j * t) for r, t in self.mesh_nodes()]


def integrate_annulus(integrand: Callable[[float, float], float], grid: AnnulusGrid) -> float:
    """Quadrature of ``∫∫ integrand(R, theta) R dR dtheta`` over the grid."""
    total = 0.0
    wt = grid.theta_weight
    for r, wr in zip(grid.radial_nodes, grid.radial_weights):
        for t in grid.theta_nodes:
            v = integrand(r, t)
            if not np.isfinite(v):
                raise QuadratureError(f"non-finite integrand at node (R={r:.6g}, theta={t:.6g})")
            total += wr * wt * v * r
    return total


def integrate_circle(f: Callable[[float], float], n_theta: int = 256) -> float:
    """Trapezoid rule for ``∮ f(theta) dtheta`` over one period."""
    thetas = np.arange(n_theta) * (2.0 * np.pi / n_theta)
    vals = np.array([f(t) for t in thetas], dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = thetas[~np.isfinite(vals)][0]
        raise QuadratureError(f"non-finite boundary integrand at theta={bad:.6g}")
    return float(vals.sum() * (2.0 * np.pi / n_theta))
