"""Seeded random data for verification sweeps.

Everything here is driven by an explicit counter-based generator
(`numpy`'s Philox), so a seed fully determines every sweep; the CLI and
the test-suite share these constructors.
"""

from __future__ import annotations

import math
import numpy as np

from .ambient import ConformalGeometry, J4_MATRIX, flat_geometry, radial_geometry, sphere_geometry
from .errors import DomainError
from .graphs import GraphSection, lagrangian_section, polynomial_section, slopes
from .numerics import RadialFunction
from .rotsym import RotSymProfile

__all__ = [
    "rng_from_seed",
    "random_tangent_coords",
    "random_plane",
    "j_invariant_plane",
    "random_polynomial_section",
    "random_holomorphic_section",
    "random_lagrangian_section",
    "random_radial_geometry",
    "off_family_profile",
    "geometry_by_name",
]


def rng_from_seed(seed: int) -> np.random.Generator:
    """Philox (counter-based) generator; one seed, one reproducible stream."""
    return np.random.Generator(np.random.Philox(int(seed)))


def geometry_by_name(name: str) -> ConformalGeometry:
    if name == "flat":
        return flat_geometry()
    if name == "sphere":
        return sphere_geometry()
    raise DomainError(f"unknown geometry '{name}'")


def random_tangent_coords(
    rng: np.random.Generator, xi_scale: float = 2.0, eta_scale: float = 3.0
) -> tuple[complex, complex]:
    xr, xi_, er, ei = rng.normal(size=4)
    return complex(xr, xi_) * xi_scale / 2.0, complex(er, ei) * eta_scale / 2.0


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def random_plane(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Two independent unit 4-vectors."""
    while True:
        v1 = rng.normal(size=4)
        v2 = rng.normal(size=4)
        sv = np.linalg.svd(np.stack([v1, v2]), compute_uv=False)
        if sv[-1] > 1e-3 * sv[0]:
            return _unit(v1), _unit(v2)


def j_invariant_plane(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """A plane spanned by ``v1`` and ``a v1 + b J v1`` (complex line)."""
    v1 = _unit(rng.normal(size=4))
    a = rng.normal()
    b = rng.normal()
    if abs(b) < 1e-2:
        b = math.copysign(1.0, b if b != 0.0 else 1.0)
    return v1, _unit(a * v1 + b * (J4_MATRIX @ v1))


def random_polynomial_section(
    rng: np.random.Generator,
    geometry: ConformalGeometry,
    degree: int = 3,
    scale: float = 0.5,
) -> GraphSection:
    """Random smooth section: complex polynomial in ``xi`` and ``xibar``."""
    coeffs = {}
    for m in range(degree + 1):
        for n in range(degree + 1 - m):
            c = complex(*rng.normal(size=2)) * scale / (1.0 + m + n)
            coeffs[(m, n)] = c
    return polynomial_section(geometry, coeffs)


def random_holomorphic_section(
    rng: np.random.Generator,
    geometry: ConformalGeometry,
    r_range: tuple[float, float],
    max_tries: int = 64,
) -> GraphSection:
    """Holomorphic section (``F`` a polynomial in ``xi`` only) whose ``lam``
    keeps one sign over the annulus ``r_range``."""
    lo, hi = r_range
    probes = [
        r * complex(math.cos(t), math.sin(t))
        for r in np.linspace(lo, hi, 13)
        for t in np.linspace(0.0, 2.0 * math.pi, 9, endpoint=False)
    ]
    for _ in range(max_tries):
        c0 = 0.5 + rng.uniform(0.0, 1.5)
        perturb = {
            (k, 0): complex(*rng.normal(size=2)) * 0.05 / k for k in range(2, 5)
        }
        coeffs = {(1, 0): 1j * c0, **{k: 1j * c0 * v for k, v in perturb.items()}}
        section = polynomial_section(geometry, coeffs)
        lams = [slopes(section, z).lam for z in probes]
        bound = min(abs(l) for l in lams)
        if bound > 0.05 and len({math.copysign(1.0, l) for l in lams}) == 1:
            return section
    raise DomainError("could not draw a sign-definite holomorphic section")


def random_lagrangian_section(
    rng: np.random.Generator, geometry: ConformalGeometry, degree: int = 3, scale: float = 0.4
) -> GraphSection:
    """Gradient section of a random real potential (``lam = 0`` identically)."""
    potential = {}
    for m in range(1, degree + 1):
        for n in range(m + 1):
            c = complex(*rng.normal(size=2)) * scale / (1.0 + m + n)
            potential[(m, n)] = c
    return lagrangian_section(geometry, potential)


def random_radial_geometry(rng: np.random.Generator) -> ConformalGeometry:
    """A rotationally symmetric geometry with a Gaussian conformal bump."""
    a = rng.uniform(-0.4, 0.4)
    s2 = rng.uniform(1.0, 4.0)

    def u(r: float) -> float:
        return a * math.exp(-r * r / s2)

    def du(r: float) -> float:
        return -2.0 * a * r / s2 * math.exp(-r * r / s2)

    def d2u(r: float) -> float:
        return (-2.0 * a / s2 + 4.0 * a * r * r / s2**2) * math.exp(-r * r / s2)

    return radial_geometry(
        f"radial-bump(a={a:.3f},s2={s2:.3f})",
        RadialFunction(u, du, d2u),
        RadialFunction(du, d2u),
        RadialFunction(d2u),
    )


def off_family_profile(
    rng: np.random.Generator,
    geometry: ConformalGeometry,
    r_range: tuple[float, float],
) -> RotSymProfile:
    """A rotationally symmetric graph that is *not* area-stationary.

    ``Psi`` is a positive even polynomial chosen outside the stationary
    family (the quartic coefficient breaks the closed form on both the
    flat and the round geometries).
    """
    c0 = rng.uniform(0.5, 1.5)
    c1 = rng.uniform(0.2, 1.0)
    c2 = rng.uniform(0.5, 1.5)
    if geometry.name == "sphere" and abs(c2 - c0) < 0.3 * c0:
        c2 = c0 * 1.8  # keep clear of the symmetric torus pattern
    psi = RadialFunction(
        lambda r: c0 + c1 * r * r + c2 * r**4,
        lambda r: 2.0 * c1 * r + 4.0 * c2 * r**3,
        lambda r: 2.0 * c1 + 12.0 * c2 * r * r,
    )
    return RotSymProfile(
        geometry=geometry,
        H=RadialFunction.constant(0.0),
        psi=psi,
        branch=1,
        domain=r_range,
    )
