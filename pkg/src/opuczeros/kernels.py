"""Diagonal reproducing kernels of the OPUC basis.

    K_n(z,z)       = sum_{j<=n} |phi_j(z)|^2
    K_n^{(0,1)}(z,z) = sum_{j<=n} phi_j(z) conj(phi_j'(z))
    K_n^{(1,1)}(z,z) = sum_{j<=n} |phi_j'(z)|^2

Two routes: direct summation, and the Christoffel-Darboux closed forms that
only need phi_{n+1} and its reversal.  The closed forms divide by 1 - |z|^2,
so they refuse points inside a band around the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NearCircleError
from .opuc import OpucBasis, evaluate, evaluate_rows

DEFAULT_BAND = 1e-6
CHUNK = 1 << 15


@dataclass(frozen=True)
class KernelTriple:
    k: float
    k01: complex
    k11: float
    n: int
    z: complex
    method: str


def _kahan_rows(terms: np.ndarray) -> np.ndarray:
    """Compensated sum over axis 0."""
    s = np.zeros(terms.shape[1:], dtype=terms.dtype)
    comp = np.zeros_like(s)
    for t in terms:
        y = t - comp
        tot = s + y
        comp = (tot - s) - y
        s = tot
    return s


def kernel_arrays_direct(basis: OpucBasis, n: int, z):
    """(k, k01, k11) by direct summation, vectorized over ``z``."""
    if not 0 <= n <= basis.N:
        raise IndexError(f"degree {n} outside 0..{basis.N}")
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    k = np.empty(flat.shape)
    k01 = np.empty(flat.shape, dtype=complex)
    k11 = np.empty(flat.shape)
    for s in range(0, flat.size, CHUNK):
        p, dp = evaluate_rows(basis, n, flat[s:s + CHUNK])
        k[s:s + CHUNK] = _kahan_rows(p.real**2 + p.imag**2)
        k01[s:s + CHUNK] = _kahan_rows(p * dp.conj())
        k11[s:s + CHUNK] = _kahan_rows(dp.real**2 + dp.imag**2)
    return k.reshape(z.shape), k01.reshape(z.shape), k11.reshape(z.shape)


def in_band(z, band: float = DEFAULT_BAND):
    z = np.asarray(z, dtype=complex)
    return np.abs(1.0 - (z.real**2 + z.imag**2)) < band


def kernel_arrays_cd(basis: OpucBasis, n: int, z, band: float = DEFAULT_BAND):
    """(k, k01, k11) from phi_{n+1}, phi_{n+1}^* and their derivatives."""
    if not 0 <= n < basis.N:
        raise IndexError(f"closed form needs degree n+1 <= N; n={n}, N={basis.N}")
    z = np.asarray(z, dtype=complex)
    if np.any(in_band(z, band)):
        raise NearCircleError(
            f"|1 - |z|^2| < {band!r}: closed-form kernels are singular near the "
            "unit circle, use kernel_direct"
        )
    phi, dphi, ps, dps = evaluate(basis, n + 1, z)
    d = 1.0 - (z.real**2 + z.imag**2)
    k = (np.abs(ps)**2 - np.abs(phi)**2) / d
    k01 = (dps.conj() * ps - dphi.conj() * phi) / d + z * k / d
    k11 = (np.abs(dps)**2 - np.abs(dphi)**2) / d + (
        (z.conj() * k01).real * 2 + k
    ) / d
    return k, k01, k11


def kernel_direct(basis: OpucBasis, n: int, z: complex) -> KernelTriple:
    k, k01, k11 = kernel_arrays_direct(basis, n, complex(z))
    return KernelTriple(float(k), complex(k01), float(k11), n, complex(z), "direct")


def kernel_cd(basis: OpucBasis, n: int, z: complex, band: float = DEFAULT_BAND) -> KernelTriple:
    k, k01, k11 = kernel_arrays_cd(basis, n, complex(z), band)
    return KernelTriple(float(k), complex(k01), float(k11), n, complex(z), "christoffel_darboux")
