"""Random OPUC combinations, their zeros, and Monte Carlo zero counts.

Coefficients are eta_j = alpha_j + i beta_j with alpha_j, beta_j iid N(0, 1).
Trial ``t`` under seed ``s`` draws from a Philox-4x64 stream keyed by (s, t);
index j consumes counter positions 2j and 2j+1, and the pair of uniforms
(u1, u2) becomes (alpha_j, beta_j) by the Box-Muller transform

    alpha = sqrt(-2 log(1 - u1)) cos(2 pi u2)
    beta  = sqrt(-2 log(1 - u1)) sin(2 pi u2).

No state is shared between trials, so any subset can be regenerated alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePolynomialError, RootFindingError
from .opuc import OpucBasis
from .regions import Region, contains, region_to_dict

DEGREE_TOL = 1e-14
MAX_ITER = 500
BACKWARD_TOL = 1e-8
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CoefficientSample:
    eta: np.ndarray
    seed: int
    trial: int


def _stream(seed: int, trial: int) -> np.random.Generator:
    if seed < 0 or trial < 0:
        raise ValueError("seed and trial must be nonnegative")
    return np.random.Generator(np.random.Philox(key=[seed, trial]))


def sample_coefficients(seed: int, trial: int, n: int) -> CoefficientSample:
    if n < 0:
        raise ValueError("n must be >= 0")
    u = _stream(seed, trial).random(2 * (n + 1)).reshape(n + 1, 2)
    rad = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    ang = 2.0 * np.pi * u[:, 1]
    eta = rad * np.cos(ang) + 1j * rad * np.sin(ang)
    return CoefficientSample(eta, seed, trial)


def to_monomial(basis: OpucBasis, eta) -> np.ndarray:
    """Monomial coefficients (ascending) of sum_j eta_j phi_j."""
    e = np.asarray(getattr(eta, "eta", eta), dtype=complex)
    n = e.shape[-1] - 1
    if n > basis.N:
        raise IndexError(f"{n + 1} coefficients but basis only has degree {basis.N}")
    return e @ basis.coeffs[: n + 1, : n + 1]


def _horner(c, z):
    """Batched p(z), p'(z) and sum |c_j||z|^j; c is (B, d+1) ascending, z is (B, m)."""
    p = np.zeros(z.shape, dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    scale = np.zeros(z.shape)
    az = np.abs(z)
    ac = np.abs(c)
    for k in range(c.shape[1] - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k:k + 1]
        scale = scale * az + ac[:, k:k + 1]
    return p, dp, scale


def backward_error(coeffs, roots) -> np.ndarray:
    """|p(r)| / sum_j |c_j| |r|^j for each root r."""
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    r = np.atleast_2d(np.asarray(roots, dtype=complex))
    p, _, scale = _horner(c, r)
    return (np.abs(p) / scale).reshape(np.shape(roots))


def _initial_guesses(c):
    B, d1 = c.shape
    d = d1 - 1
    ac = np.abs(c)
    lead = ac[:, -1:]
    # upper bound on root moduli: 2 * max_j |c_j / c_d|^{1/(d-j)}
    expo = 1.0 / (d - np.arange(d))
    with np.errstate(divide="ignore"):
        upper = 2 * np.max((ac[:, :d] / lead) ** expo[None, :], axis=1)
        gm = (ac[:, 0] / lead[:, 0]) ** (1.0 / d)
    rad = np.where(gm > 0, gm, 0.5 * upper)
    rad = np.where(rad > 0, rad, 1.0)
    ang = 2 * np.pi * np.arange(d) / d + 0.4
    return rad[:, None] * np.exp(1j * ang)[None, :]


def aberth_batch(coeffs: np.ndarray, max_iter: int = MAX_ITER):
    """Aberth-Ehrlich on a batch of polynomials sharing one exact degree.

    ``coeffs`` is (B, d+1) ascending with nonzero last column.  Returns roots
    (B, d) and the per-polynomial worst backward error after Newton polishing.
    Raises RootFindingError (``trial`` = row index) if a row fails to converge.
    """
    c = np.asarray(coeffs, dtype=complex)
    B, d1 = c.shape
    d = d1 - 1
    if d < 1:
        return np.empty((B, 0), dtype=complex), np.zeros(B)
    if d == 1:
        z = (-c[:, 0] / c[:, 1])[:, None]
        return z, backward_error(c, z).max(axis=1)
    z = _initial_guesses(c)
    done = np.zeros(z.shape, dtype=bool)
    eye = np.eye(d, dtype=bool)[None, :, :]
    for _ in range(max_iter):
        p, dp, scale = _horner(c, z)
        small = np.abs(p) <= 4 * d * EPS * scale
        done |= small
        if done.all():
            break
        diff = z[:, :, None] - z[:, None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(eye, 0, 1.0 / np.where(eye, 1, diff))
            S = inv.sum(axis=2)
            ratio = p / dp
            w = ratio / (1.0 - ratio * S)
        w = np.where(np.isfinite(w), w, 1e-3 * (np.abs(z) + 1))
        w = np.where(done, 0, w)
        z = z - w
        done |= np.abs(w) <= 2 * EPS * np.abs(z)
    else:
        p, dp, scale = _horner(c, z)
        done |= np.abs(p) <= 4 * d * EPS * scale
    # Newton polish: keep a step only where it lowers the backward error
    for _ in range(2):
        p, dp, scale = _horner(c, z)
        err = np.abs(p) / scale
        with np.errstate(divide="ignore", invalid="ignore"):
            zn = z - p / dp
        zn = np.where(np.isfinite(zn), zn, z)
        pn, _, sn = _horner(c, zn)
        better = np.abs(pn) / sn < err
        z = np.where(better, zn, z)
    berr = backward_error(c, z).max(axis=1)
    bad = np.flatnonzero(~(berr <= BACKWARD_TOL) | (~done.all(axis=1) & (berr > 1e-12)))
    if bad.size:
        i = int(bad[0])
        raise RootFindingError(
            f"Aberth iteration did not converge in {max_iter} steps "
            f"(worst backward error {float(berr[i])!r})",
            residual=float(berr[i]), trial=i,
        )
    return z, berr


def effective_degree(coeffs) -> int:
    c = np.abs(np.asarray(coeffs, dtype=complex))
    top = c.max() if c.size else 0.0
    if not top > 0:
        raise DegeneratePolynomialError("all coefficients are zero")
    return int(np.flatnonzero(c > DEGREE_TOL * top)[-1])


def find_roots(coeffs) -> np.ndarray:
    """All roots of sum_j coeffs[j] z^j (ascending order).

    Coefficients above the last one exceeding 1e-14 * max|c| are treated as
    zero.  Returns exactly that many roots.
    """
    c = np.asarray(coeffs, dtype=complex)
    d = effective_degree(c)
    roots, _ = aberth_batch(c[None, : d + 1])
    return roots[0]


@dataclass
class MonteCarloReport:
    n: int
    trials: int
    seed: int
    region: dict
    counts: np.ndarray
    mean: float
    stderr: float
    degree_reductions: int = 0
    max_backward_error: float = 0.0
    quadrature_ref: float | None = None
    z_score: float | None = None
    config: dict = field(default_factory=dict)

    @property
    def counts_histogram(self) -> list[int]:
        return np.bincount(self.counts, minlength=self.n + 1).tolist()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "region": self.region,
            "mean": self.mean,
            "stderr": self.stderr,
            "quadrature_ref": self.quadrature_ref,
            "z_score": self.z_score,
            "counts_histogram": self.counts_histogram,
            "degree_reductions": self.degree_reductions,
            "max_backward_error": self.max_backward_error,
        }


def sample_roots(basis: OpucBasis, n: int, trials: int, seed: int, first_trial: int = 0,
                 chunk: int = 4096):
    """Yield (trial, roots) for trials in order; degree-reduced trials are flagged.

    Yields tuples (trial index, roots array, reduced flag, worst backward error).
    """
    for start in range(first_trial, first_trial + trials, chunk):
        stop = min(start + chunk, first_trial + trials)
        eta = np.stack([sample_coefficients(seed, t, n).eta for t in range(start, stop)])
        C = to_monomial(basis, eta)
        top = np.abs(C).max(axis=1)
        reduced = np.abs(C[:, -1]) <= DEGREE_TOL * top
        full = np.flatnonzero(~reduced)
        roots_full = berr_full = None
        if full.size:
            try:
                roots_full, berr_full = aberth_batch(C[full])
            except RootFindingError as e:
                t = start + int(full[e.trial])
                raise RootFindingError(f"trial {t}: {e}", e.residual, t) from None
        pos = {int(i): k for k, i in enumerate(full)}
        for i in range(stop - start):
            t = start + i
            if reduced[i]:
                try:
                    r = find_roots(C[i])
                except RootFindingError as e:
                    raise RootFindingError(f"trial {t}: {e}", e.residual, t) from None
                be = float(backward_error(C[i][: len(r) + 1], r).max()) if len(r) else 0.0
                yield t, r, True, be
            else:
                k = pos[i]
                yield t, roots_full[k], False, float(berr_full[k])


def monte_carlo_expected_zeros(basis: OpucBasis, n: int, region: Region, trials: int,
                               seed: int, reference: float | None = None) -> MonteCarloReport:
    """Monte Carlo estimate of E[N_n(region)].

    ``reference`` (e.g. from ``integrate_intensity``) adds a z-score
    (mean - reference) / stderr to the report.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    if n < 1:
        raise ValueError("need n >= 1")
    counts = np.empty(trials, dtype=np.int64)
    reductions = 0
    worst = 0.0
    for t, roots, reduced, be in sample_roots(basis, n, trials, seed):
        reductions += int(reduced)
        worst = max(worst, be)
        counts[t] = int(np.count_nonzero(contains(region, roots)))
    mean = float(np.mean(counts))
    stderr = float(np.std(counts, ddof=1) / math.sqrt(trials))
    z = None
    if reference is not None:
        z = (mean - reference) / stderr if stderr > 0 else (0.0 if mean == reference else math.inf)
    return MonteCarloReport(n, trials, seed, region_to_dict(region), counts, mean, stderr,
                            reductions, worst, reference, z)
