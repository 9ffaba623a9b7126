"""Jordan regions and expected zero counts E[N_n(region)] = int h_n dA."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError
from .intensity import AUTO_BAND, intensity_auto_array
from .opuc import OpucBasis

MAX_RESOLUTION = 2**11


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")


@dataclass(frozen=True)
class Annulus:
    center: complex
    r_inner: float
    r_outer: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not 0 <= self.r_inner < self.r_outer:
            raise ValueError("annulus needs 0 <= r_inner < r_outer")


@dataclass(frozen=True)
class Rectangle:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("rectangle extents must be strictly ordered")


@dataclass(frozen=True)
class AnnularSector:
    center: complex
    r_inner: float
    r_outer: float
    theta_min: float
    theta_max: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not 0 <= self.r_inner < self.r_outer:
            raise ValueError("annular sector needs 0 <= r_inner < r_outer")
        width = self.theta_max - self.theta_min
        if not 0 < width <= 2 * math.pi:
            raise ValueError("annular sector needs 0 < theta_max - theta_min <= 2pi")


Region = Disk | Annulus | Rectangle | AnnularSector


def contains(region: Region, z):
    """Strict-interior membership; boundary points are outside. Vectorized."""
    z = np.asarray(z, dtype=complex)
    if isinstance(region, Rectangle):
        out = ((z.real > region.x_min) & (z.real < region.x_max)
               & (z.imag > region.y_min) & (z.imag < region.y_max))
    else:
        r = np.abs(z - region.center)
        if isinstance(region, Disk):
            out = r < region.radius
        else:
            out = (r > region.r_inner) & (r < region.r_outer)
            if isinstance(region, AnnularSector):
                t = np.angle(z - region.center)
                rel = np.mod(t - region.theta_min, 2 * math.pi)
                width = region.theta_max - region.theta_min
                if width < 2 * math.pi:
                    out &= (rel > 0) & (rel < width)
                else:
                    # full turn: only the cut ray theta_min is boundary
                    out &= rel > 0
    return bool(out) if out.ndim == 0 else out


def region_to_dict(region: Region) -> dict:
    def c(v):
        return [v.real, v.imag]

    if isinstance(region, Disk):
        return {"region": "disk", "center": c(region.center), "radius": region.radius}
    if isinstance(region, Annulus):
        return {"region": "annulus", "center": c(region.center),
                "r_inner": region.r_inner, "r_outer": region.r_outer}
    if isinstance(region, Rectangle):
        return {"region": "rectangle", "x_min": region.x_min, "x_max": region.x_max,
                "y_min": region.y_min, "y_max": region.y_max}
    return {"region": "annular_sector", "center": c(region.center),
            "r_inner": region.r_inner, "r_outer": region.r_outer,
            "theta_min": region.theta_min, "theta_max": region.theta_max}


def region_from_dict(d: dict) -> Region:
    kind = d.get("region")
    center = complex(*d.get("center", (0.0, 0.0)))
    try:
        if kind == "disk":
            return Disk(center, float(d["radius"]))
        if kind == "annulus":
            return Annulus(center, float(d["r_inner"]), float(d["r_outer"]))
        if kind == "rectangle":
            return Rectangle(float(d["x_min"]), float(d["x_max"]),
                             float(d["y_min"]), float(d["y_max"]))
        if kind == "annular_sector":
            return AnnularSector(center, float(d["r_inner"]), float(d["r_outer"]),
                                 float(d["theta_min"]), float(d["theta_max"]))
    except KeyError as e:
        raise ValueError(f"region {kind!r} is missing field {e.args[0]!r}") from None
    raise ValueError(f"unknown region kind {kind!r}")


def tail_bound(R: float) -> float:
    """int_{|z|>R} 1/(pi (1-|z|^2)^2) dA = 1/(R^2 - 1); bounds the mass outside disk(0, R)."""
    if not R > 1:
        return math.inf
    return 1.0 / (R * R - 1.0)


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    residual: float
    resolution: int
    tail_bound: float | None = None


def _midpoints(lo, hi, m):
    return lo + (hi - lo) * (np.arange(m) + 0.5) / m


def _estimate(basis, n, region, m, band):
    if isinstance(region, Rectangle):
        x = _midpoints(region.x_min, region.x_max, m)
        y = _midpoints(region.y_min, region.y_max, m)
        Z = x[None, :] + 1j * y[:, None]
        h, _ = intensity_auto_array(basis, n, Z, band)
        cell = (region.x_max - region.x_min) * (region.y_max - region.y_min) / (m * m)
        return math.fsum(h.ravel()) * cell
    if isinstance(region, Disk):
        r0, r1, t0, t1 = 0.0, region.radius, 0.0, 2 * math.pi
    elif isinstance(region, Annulus):
        r0, r1, t0, t1 = region.r_inner, region.r_outer, 0.0, 2 * math.pi
    else:
        r0, r1 = region.r_inner, region.r_outer
        t0, t1 = region.theta_min, region.theta_max
    r = _midpoints(r0, r1, m)
    t = _midpoints(t0, t1, m)
    Z = region.center + r[:, None] * np.exp(1j * t)[None, :]
    h, _ = intensity_auto_array(basis, n, Z, band)
    # sum over angle first, then weight by the polar Jacobian r
    ring = np.array([math.fsum(row) for row in h])
    return math.fsum(ring * r) * (r1 - r0) * (t1 - t0) / (m * m)


def integrate_intensity(basis: OpucBasis, n: int, region: Region, resolution: int = 16,
                        tol: float = 1e-3, max_resolution: int = MAX_RESOLUTION,
                        band: float = AUTO_BAND) -> IntegrationResult:
    """Expected number of zeros in ``region`` by composite midpoint quadrature.

    Polar cells for disks, annuli and sectors; cartesian cells for rectangles.
    Resolution (cells per axis) doubles until two estimates agree within ``tol``.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16 cells per axis")
    tb = None
    if isinstance(region, Disk) and region.center == 0:
        tb = tail_bound(region.radius)
    if n == 0:
        return IntegrationResult(0.0, 0.0, resolution, tb)
    m = resolution
    prev = _estimate(basis, n, region, m, band)
    estimates = [prev]
    while 2 * m <= max_resolution:
        m *= 2
        cur = _estimate(basis, n, region, m, band)
        estimates.append(cur)
        res = abs(cur - prev)
        if res < tol:
            return IntegrationResult(cur, res, m, tb)
        prev = cur
    raise IntegrationError(
        f"expected-count quadrature did not reach {tol!r} by {max_resolution} cells per axis",
        estimates=estimates[-2:],
    )
