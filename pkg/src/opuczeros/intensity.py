"""Density of the expected number of complex zeros of sum_j eta_j phi_j.

For iid complex Gaussian eta_j the intensity is

    h_n(z) = (K11 K - |K01|^2) / (pi K^2)

with the diagonal kernels of ``kernels``.  For even weights and |z| != 1 the
Christoffel-Darboux identities collapse this to an expression in phi_{n+1}:

    h_n(z) = 1/(pi (1-|z|^2)^2) * [1 - (1-|z|^2)^2 |phi* phi' - phi*' phi|^2
                                         / (|phi*|^2 - |phi|^2)^2]

and h_n(z) -> 1/(pi (1-|z|^2)^2) as n -> infinity for Szego-class weights.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, DomainError, NearCircleError
from .kernels import DEFAULT_BAND, in_band, kernel_arrays_direct
from .opuc import OpucBasis, evaluate

NEG_TOL = 1e-12
LIMIT_GUARD = 1e-9
# Outside this band the closed form loses at most ~1e-16/(pi d^3) to
# cancellation in |phi*|^2 - |phi|^2, so `auto` switches to direct sums inside it.
AUTO_BAND = 1e-3
METHODS = ("general", "cd", "auto")


def _clamp(h, floor, what):
    worst = np.min(h - floor) if np.size(h) else 0.0
    if worst < 0:
        raise ConsistencyError(f"{what} is negative beyond rounding ({float(worst)!r})")
    return np.maximum(h, 0.0)


def intensity_general_array(basis: OpucBasis, n: int, z):
    k, k01, k11 = kernel_arrays_direct(basis, n, z)
    if np.any(~(k > 0)):
        raise ConsistencyError("K_n(z,z) vanished; the j=0 term alone keeps it positive")
    kk = k11 * k
    num = kk - (k01.real**2 + k01.imag**2)
    num = _clamp(num, -NEG_TOL * kk, "K11*K - |K01|^2")
    return num / (np.pi * k * k)


def limit_intensity_array(z):
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if np.any(np.abs(r - 1.0) < LIMIT_GUARD):
        raise DomainError("limiting intensity is infinite on |z| = 1")
    d = 1.0 - (z.real**2 + z.imag**2)
    return 1.0 / (np.pi * d * d)


def intensity_cd_array(basis: OpucBasis, n: int, z, band: float = DEFAULT_BAND):
    if not 0 <= n < basis.N:
        raise IndexError(f"closed form needs degree n+1 <= N; n={n}, N={basis.N}")
    z = np.asarray(z, dtype=complex)
    if np.any(in_band(z, band)):
        raise NearCircleError(
            f"|1 - |z|^2| < {band!r}: use intensity_general near the unit circle"
        )
    phi, dphi, ps, dps = evaluate(basis, n + 1, z)
    d = 1.0 - (z.real**2 + z.imag**2)
    wron = ps * dphi - dps * phi
    gap = ps.real**2 + ps.imag**2 - (phi.real**2 + phi.imag**2)
    bracket = 1.0 - d * d * (wron.real**2 + wron.imag**2) / (gap * gap)
    bracket = _clamp(bracket, -NEG_TOL, "closed-form bracket")
    return limit_intensity_array(z) * bracket


def intensity_auto_array(basis: OpucBasis, n: int, z, band: float = AUTO_BAND):
    """Closed form off the band, direct sums on it; never raises for |z| = 1."""
    z = np.asarray(z, dtype=complex)
    mask = in_band(z, band) if n < basis.N else np.ones(z.shape, dtype=bool)
    h = np.empty(z.shape)
    if np.any(mask):
        h[mask] = intensity_general_array(basis, n, z[mask])
    if np.any(~mask):
        h[~mask] = intensity_cd_array(basis, n, z[~mask], band=min(band, DEFAULT_BAND))
    return h, mask


def intensity(basis: OpucBasis, n: int, z, method: str = "auto", band: float | None = None):
    """Vectorized h_n(z) with method in {'general', 'cd', 'auto'}."""
    if method == "general":
        return intensity_general_array(basis, n, z)
    if method == "cd":
        return intensity_cd_array(basis, n, z, DEFAULT_BAND if band is None else band)
    if method == "auto":
        return intensity_auto_array(basis, n, z, AUTO_BAND if band is None else band)[0]
    raise ValueError(f"method must be one of {METHODS}, got {method!r}")


def intensity_general(basis: OpucBasis, n: int, z: complex) -> float:
    return float(intensity_general_array(basis, n, complex(z)))


def intensity_cd(basis: OpucBasis, n: int, z: complex, band: float = DEFAULT_BAND) -> float:
    return float(intensity_cd_array(basis, n, complex(z), band))


def limit_intensity(z: complex) -> float:
    return float(limit_intensity_array(complex(z)))


@dataclass
class IntensityGrid:
    """h_n sampled on a rectangular lattice; ``values[iy, ix]`` is h(x[ix] + i y[iy])."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    mask: np.ndarray
    n: int
    method: str
    band: float
    weight: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def x_range(self):
        return float(self.x[0]), float(self.x[-1])

    @property
    def y_range(self):
        return float(self.y[0]), float(self.y[-1])

    @property
    def steps(self):
        return len(self.x), len(self.y)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "h", "masked"])
        for iy, yv in enumerate(self.y):
            for ix, xv in enumerate(self.x):
                w.writerow([repr(float(xv)), repr(float(yv)),
                            repr(float(self.values[iy, ix])), int(self.mask[iy, ix])])
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {
            "weight": self.weight,
            "n": self.n,
            "method": self.method,
            "band_threshold": self.band,
            "x_range": list(self.x_range),
            "y_range": list(self.y_range),
            "steps": list(self.steps),
            "order": "row-major, y outer, x inner",
            **self.extra,
        }


def _axis(lo, hi, count):
    if count < 1:
        raise ValueError("step counts must be positive")
    if count == 1:
        return np.array([0.5 * (lo + hi)])
    return np.linspace(lo, hi, count)


def intensity_grid(basis: OpucBasis, n: int, x_range, y_range, steps, method: str = "auto",
                   band: float | None = None, weight: dict | None = None) -> IntensityGrid:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    nx, ny = steps
    x = _axis(*x_range, nx)
    y = _axis(*y_range, ny)
    Z = x[None, :] + 1j * y[:, None]
    if method == "auto":
        band = AUTO_BAND if band is None else band
        vals, mask = intensity_auto_array(basis, n, Z, band)
    else:
        band = DEFAULT_BAND if band is None else band
        mask = in_band(Z, band)
        if method == "cd" and np.any(mask):
            bad = [complex(p) for p in Z[mask]]
            err = NearCircleError(
                f"{len(bad)} grid nodes lie in the near-circle band; use method='auto'"
            )
            err.points = bad
            raise err
        vals = intensity(basis, n, Z, method, band)
    return IntensityGrid(x, y, vals, mask, n, method, band, weight)


def convergence_profile(basis: OpucBasis, z: complex, n_list, band: float = DEFAULT_BAND):
    """[(n, h_n(z), |h_n(z) - limit| / limit)] using the closed form."""
    lim = limit_intensity(z)
    out = []
    for n in n_list:
        h = intensity_cd(basis, n, z, band)
        out.append((n, h, abs(h - lim) / lim))
    return out
