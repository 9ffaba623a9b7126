"""Orthonormal polynomials on the unit circle for an even weight.

Sign convention for the recursion (Verblunsky) coefficients:

    Phi_{j+1}(z) = z Phi_j(z) - alpha_j Phi_j^*(z),    alpha_j = -Phi_{j+1}(0)

for the monic polynomials Phi_j, and for the orthonormal ones

    phi_{j+1} = (z phi_j - alpha_j phi_j^*) / sqrt(1 - alpha_j^2).

With this convention the Bernstein-Szego weight with parameter a has
alpha_0 = a and alpha_j = 0 for j >= 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import MomentDegeneracyError
from .weights import MomentSequence, evaluate_weight, periodic_nodes


@dataclass(frozen=True, eq=False)
class OpucBasis:
    """phi_0..phi_N as a dense lower-triangular coefficient matrix.

    ``coeffs[j, :j+1]`` holds the monomial coefficients of phi_j in ascending
    powers; ``coeffs[j, j] == kappa[j]``.
    """

    N: int
    coeffs: np.ndarray
    kappa: np.ndarray
    alpha: np.ndarray
    moments: MomentSequence | None = None

    def row(self, j: int) -> np.ndarray:
        if not 0 <= j <= self.N:
            raise IndexError(f"degree {j} outside 0..{self.N}")
        return self.coeffs[j, : j + 1]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "kappa": [float(k) for k in self.kappa],
            "alpha": [float(a) for a in self.alpha],
            "coeffs": [[float(c) for c in self.row(j)] for j in range(self.N + 1)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OpucBasis":
        N = int(d["N"])
        coeffs = np.zeros((N + 1, N + 1))
        for j, row in enumerate(d["coeffs"]):
            if len(row) != j + 1:
                raise ValueError(f"coefficient row {j} has length {len(row)}, expected {j + 1}")
            coeffs[j, : j + 1] = row
        kappa = np.asarray(d["kappa"], dtype=float)
        alpha = np.asarray(d["alpha"], dtype=float)
        if kappa.shape != (N + 1,) or alpha.shape != (N,):
            raise ValueError("kappa/alpha lengths do not match N")
        if not np.array_equal(kappa, np.diag(coeffs)):
            raise ValueError("kappa must equal the leading coefficients")
        return cls(N, coeffs, kappa, alpha)

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, s: str) -> "OpucBasis":
        return cls.from_dict(json.loads(s))


@dataclass(frozen=True)
class PointEval:
    phi: complex
    dphi: complex
    phistar: complex
    dphistar: complex
    degree: int
    z: complex


def build_basis(moments: MomentSequence, N: int | None = None) -> OpucBasis:
    """Levinson recursion on the Toeplitz matrix (c_{|j-k|}).

    Works on the monic polynomials; the prediction-error variance
    E_j = ||Phi_j||^2 must stay positive or the moments are degenerate.
    """
    c = np.asarray(moments.c, dtype=float)
    if N is None:
        N = len(c) - 1
    if N < 0 or len(c) < N + 1:
        raise ValueError(f"need moments c_0..c_{N}, have {len(c)}")
    if not c[0] > 0:
        raise MomentDegeneracyError(0, float(c[0]))

    monic = np.zeros((N + 1, N + 1))
    monic[0, 0] = 1.0
    E = np.empty(N + 1)
    E[0] = c[0]
    alpha = np.zeros(N)
    for j in range(N):
        p = monic[j, : j + 1]
        # <z Phi_j, 1>_W = sum_m p_m c_{m+1};  <Phi_j^*, 1>_W = E_j
        a = math.fsum(p * c[1 : j + 2]) / E[j]
        E[j + 1] = E[j] * (1.0 - a * a)
        if not (abs(a) < 1 and E[j + 1] > 0):
            raise MomentDegeneracyError(j + 1, float(E[j + 1]))
        alpha[j] = a
        nxt = monic[j + 1]
        nxt[1 : j + 2] = p
        nxt[: j + 1] -= a * p[::-1]

    kappa = 1.0 / np.sqrt(E)
    coeffs = monic * kappa[:, None]
    # make kappa bit-identical to the stored leading entries
    kappa = np.diag(coeffs).copy()
    return OpucBasis(N, coeffs, kappa, alpha, moments)


def verblunsky(basis: OpucBasis) -> list[float]:
    return [float(a) for a in basis.alpha]


def horner(row: np.ndarray, z):
    """Value and derivative of sum_k row[k] z^k by Horner's rule."""
    z = np.asarray(z, dtype=complex)
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for coef in row[::-1]:
        dp = dp * z + p
        p = p * z + coef
    return p, dp


def evaluate(basis: OpucBasis, j: int, z):
    """Vectorized (phi_j, phi_j', phi_j^*, phi_j^*') at points ``z``.

    Real coefficients make phi_j^* the coefficient-reversed polynomial.
    """
    row = basis.row(j)
    phi, dphi = horner(row, z)
    phistar, dphistar = horner(row[::-1], z)
    return phi, dphi, phistar, dphistar


def eval_all(basis: OpucBasis, j: int, z: complex) -> PointEval:
    phi, dphi, ps, dps = evaluate(basis, j, complex(z))
    return PointEval(complex(phi), complex(dphi), complex(ps), complex(dps), j, complex(z))


def evaluate_rows(basis: OpucBasis, n: int, z: np.ndarray):
    """phi_j(z) and phi_j'(z) for all j <= n at once, shape (n+1, *z.shape).

    Rows are zero-padded above their degree, so one Horner sweep over the
    columns evaluates every row.
    """
    z = np.asarray(z, dtype=complex)
    C = basis.coeffs[: n + 1, : n + 1]
    shape = (n + 1,) + z.shape
    p = np.zeros(shape, dtype=complex)
    dp = np.zeros(shape, dtype=complex)
    zb = z[None, ...]
    extra = (None,) * z.ndim
    for k in range(n, -1, -1):
        dp = dp * zb + p
        p = p * zb + C[(slice(None), k) + extra]
    return p, dp


def inner_products(basis: OpucBasis, spec, nodes: int = 4096) -> np.ndarray:
    """Gram matrix (1/2pi) int W phi_n conj(phi_m) by the periodic trapezoid rule."""
    theta = periodic_nodes(nodes)
    w = evaluate_weight(spec, theta)
    vals, _ = evaluate_rows(basis, basis.N, np.exp(1j * theta))
    return (vals * w) @ vals.conj().T / nodes
