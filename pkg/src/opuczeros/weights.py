"""Even weight functions on the unit circle.

A weight W(theta) defines the inner product

    <f, g>_W = (1/2pi) * integral_{-pi}^{pi} W(theta) f(e^{i theta}) conj(g(e^{i theta})) dtheta

on polynomials.  Everything here is computed with the composite trapezoid rule
on uniform periodic nodes, doubling the node count until two successive
results agree.  For smooth periodic integrands this converges geometrically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidWeightError, QuadratureError, SzegoClassError

FAMILIES = ("uniform", "bernstein_szego", "trig_poly", "table")

MIN_NODES = 64
MAX_NODES = 2**20
NEGATIVE_SLACK = 1e-12
LOG_FLOOR = 1e-300
XI_GUARD = 1e-6


@dataclass(frozen=True)
class WeightSpec:
    """An even, nonnegative, 2pi-periodic weight.

    family
        ``uniform``: W = 1.
        ``bernstein_szego``: W = (1 - a^2) / |1 - a e^{i theta}|^2, |a| < 1.
        ``trig_poly``: W = coeffs[0] + sum_k coeffs[k] cos(k theta).
        ``table``: samples ``values[m]`` at ``theta = m * theta_step`` over one
        period, linearly interpolated and symmetrized as (W(t) + W(-t)) / 2.
    """

    family: str = "uniform"
    a: float = 0.0
    coeffs: tuple = ()
    theta_step: float = 0.0
    values: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidWeightError(f"unknown weight family {self.family!r}")
        if self.family == "bernstein_szego":
            if not (math.isfinite(self.a) and abs(self.a) < 1):
                raise InvalidWeightError(f"bernstein_szego needs |a| < 1, got {self.a!r}")
        elif self.family == "trig_poly":
            if len(self.coeffs) == 0:
                raise InvalidWeightError("trig_poly needs at least one coefficient")
            object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        elif self.family == "table":
            vals = tuple(float(v) for v in self.values)
            if len(vals) < 2:
                raise InvalidWeightError("table weight needs at least two samples")
            if not all(math.isfinite(v) for v in vals):
                raise InvalidWeightError("table weight has non-finite samples")
            step = float(self.theta_step) if self.theta_step else 2 * math.pi / len(vals)
            if abs(step * len(vals) - 2 * math.pi) > 1e-9:
                raise InvalidWeightError(
                    "table samples must cover exactly one period: "
                    f"{len(vals)} * {step!r} != 2pi"
                )
            object.__setattr__(self, "values", vals)
            object.__setattr__(self, "theta_step", step)

    def to_dict(self) -> dict:
        d = {"family": self.family}
        if self.family == "bernstein_szego":
            d["a"] = self.a
        elif self.family == "trig_poly":
            d["coeffs"] = list(self.coeffs)
        elif self.family == "table":
            d["theta_step"] = self.theta_step
            d["values"] = list(self.values)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "WeightSpec":
        d = dict(d)
        family = d.pop("family", None)
        if family is None:
            raise InvalidWeightError("weight spec needs a 'family' field")
        allowed = {
            "uniform": set(),
            "bernstein_szego": {"a"},
            "trig_poly": {"coeffs"},
            "table": {"theta_step", "values"},
        }.get(family)
        if allowed is None:
            raise InvalidWeightError(f"unknown weight family {family!r}")
        extra = set(d) - allowed
        if extra:
            raise InvalidWeightError(f"unexpected fields for {family}: {sorted(extra)}")
        if family == "bernstein_szego":
            return cls(family, a=float(d.get("a", 0.0)))
        if family == "trig_poly":
            return cls(family, coeffs=tuple(d.get("coeffs", ())))
        if family == "table":
            return cls(family, theta_step=float(d.get("theta_step", 0.0)),
                       values=tuple(d.get("values", ())))
        return cls(family)


def uniform() -> WeightSpec:
    return WeightSpec("uniform")


def bernstein_szego(a: float) -> WeightSpec:
    return WeightSpec("bernstein_szego", a=float(a))


def trig_poly(coeffs) -> WeightSpec:
    return WeightSpec("trig_poly", coeffs=tuple(coeffs))


def table(values, theta_step: float | None = None) -> WeightSpec:
    return WeightSpec("table", theta_step=theta_step or 0.0, values=tuple(values))


def _interp_table(spec: WeightSpec, theta: np.ndarray) -> np.ndarray:
    vals = np.asarray(spec.values)
    m = len(vals)
    # reduce to [0, 2pi) in units of the grid step
    u = np.mod(theta, 2 * np.pi) / spec.theta_step
    i0 = np.floor(u).astype(np.int64) % m
    frac = u - np.floor(u)
    i1 = (i0 + 1) % m
    return (1 - frac) * vals[i0] + frac * vals[i1]


def _raw_weight(spec: WeightSpec, theta: np.ndarray) -> np.ndarray:
    if spec.family == "uniform":
        return np.ones_like(theta)
    if spec.family == "bernstein_szego":
        a = spec.a
        # |1 - a e^{it}|^2 = 1 - 2a cos t + a^2
        return (1 - a * a) / (1 - 2 * a * np.cos(theta) + a * a)
    if spec.family == "trig_poly":
        c = spec.coeffs
        out = np.full_like(theta, c[0])
        for k in range(1, len(c)):
            out = out + c[k] * np.cos(k * theta)
        return out
    return 0.5 * (_interp_table(spec, theta) + _interp_table(spec, -theta))


def evaluate_weight(spec: WeightSpec, theta):
    """W(theta) for scalar or array ``theta``; tiny negative rounding clamps to 0."""
    t = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError("theta must be finite")
    w = _raw_weight(spec, t)
    if np.any(w < -NEGATIVE_SLACK):
        raise InvalidWeightError(
            f"weight is negative (min {float(np.min(w))!r}); not a valid weight"
        )
    w = np.maximum(w, 0.0)
    return float(w) if w.ndim == 0 else w


def _next_pow2(m: int) -> int:
    return 1 << max(0, (m - 1).bit_length())


def _min_nodes(spec: WeightSpec) -> int:
    # coarser node sets would skip table samples and can agree with each other by accident
    if spec.family == "table":
        return _next_pow2(max(MIN_NODES, 2 * len(spec.values)))
    return MIN_NODES


def periodic_nodes(m: int, offset: bool = False) -> np.ndarray:
    """m uniform nodes on [-pi, pi); ``offset`` shifts them by half a step.

    Both node sets are symmetric under theta -> -theta (mod 2pi), which keeps
    quadratures of even integrands exactly real.
    """
    shift = 0.5 if offset else 0.0
    return -np.pi + 2 * np.pi * (np.arange(m) + shift) / m


@dataclass(frozen=True)
class MomentSequence:
    """Trigonometric moments c_k = (1/2pi) int W e^{-ik theta} dtheta, k = 0..N."""

    c: np.ndarray
    resolution: int
    tolerance: float
    residuals: tuple = field(default=(), compare=False)
    weight: WeightSpec | None = None

    @property
    def N(self) -> int:
        return len(self.c) - 1


def _raw_moments(spec: WeightSpec, N: int, m: int):
    theta = 2 * np.pi * np.arange(m) / m
    w = evaluate_weight(spec, theta)
    full = np.fft.fft(w) / m
    return full[: N + 1]


def compute_moments(spec: WeightSpec, N: int, tol: float = 1e-13,
                    max_nodes: int = MAX_NODES) -> MomentSequence:
    """Moments c_0..c_N by node doubling until successive sets differ by < tol."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if not tol > 0:
        raise ValueError("tol must be positive")
    m = _next_pow2(max(_min_nodes(spec), 8 * (N + 1)))
    prev = None
    residuals = []
    while True:
        raw = _raw_moments(spec, N, m)
        c0 = raw[0].real
        if not c0 > 0:
            raise InvalidWeightError("weight has zero total mass")
        imag = float(np.max(np.abs(raw.imag)))
        if imag > 1e-12 * c0:
            raise InvalidWeightError(
                f"moments have imaginary residue {imag!r}; weight is not even"
            )
        cur = raw.real.copy()
        if prev is not None:
            res = float(np.max(np.abs(cur - prev)))
            residuals.append(res)
            if res < tol:
                return MomentSequence(cur, m, res, tuple(residuals), spec)
        if 2 * m > max_nodes:
            raise QuadratureError(
                f"moments did not converge to {tol!r} within {max_nodes} nodes",
                residual=residuals[-1] if residuals else None,
            )
        prev = cur
        m *= 2


def _check_szego_class(spec: WeightSpec) -> None:
    if spec.family == "table":
        nodes = spec.theta_step * np.arange(len(spec.values))
        w = evaluate_weight(spec, nodes)
        if np.any(w < LOG_FLOOR):
            bad = float(nodes[np.argmin(w)])
            raise SzegoClassError(f"table weight vanishes at theta={bad!r}")


def _log_weight(spec: WeightSpec, m: int) -> tuple[np.ndarray, np.ndarray]:
    theta = periodic_nodes(m, offset=True)
    w = evaluate_weight(spec, theta)
    if np.any(w < LOG_FLOOR):
        bad = float(theta[np.argmin(w)])
        raise SzegoClassError(
            f"weight vanishes at theta={bad!r}; log W is not integrable on this grid"
        )
    return theta, np.log(w)


def log_mean(spec: WeightSpec, tol: float = 1e-13, max_nodes: int = MAX_NODES) -> float:
    """(1/2pi) int log W dtheta on half-step-offset nodes."""
    _check_szego_class(spec)
    m = _min_nodes(spec)
    prev = None
    while True:
        _, lw = _log_weight(spec, m)
        cur = math.fsum(lw) / m
        if prev is not None and abs(cur - prev) < tol:
            return cur
        if 2 * m > max_nodes:
            raise QuadratureError(
                f"log-mean did not converge to {tol!r} within {max_nodes} nodes",
                residual=None if prev is None else abs(cur - prev),
            )
        prev = cur
        m *= 2


def geometric_mean(spec: WeightSpec, tol: float = 1e-13, max_nodes: int = MAX_NODES) -> float:
    """exp of the mean of log W.

    Weights with isolated zeros (e.g. 2 + 2cos theta) have a log singularity
    and converge only like 1/nodes; pass a looser ``tol`` for those.
    """
    return math.exp(log_mean(spec, tol, max_nodes))


def szego_function(spec: WeightSpec, xi, tol: float = 1e-13, max_nodes: int = MAX_NODES):
    """Outer function D(xi) with |D|^2 = W on the circle and D(0) > 0.

    D(xi) = exp{ (1/4pi) int log W(t) (1 + xi e^{-it}) / (1 - xi e^{-it}) dt }

    ``xi`` may be scalar or array; all points need |xi| <= 1 - 1e-6.
    """
    x = np.asarray(xi, dtype=complex)
    scalar = x.ndim == 0
    x = np.atleast_1d(x).ravel()
    if np.any(np.abs(x) > 1 - XI_GUARD):
        raise DomainError("szego_function needs |xi| <= 1 - 1e-6")
    _check_szego_class(spec)
    m = _min_nodes(spec)
    prev = None
    while True:
        theta, lw = _log_weight(spec, m)
        e = np.exp(-1j * theta)
        cur = np.empty(x.shape, dtype=complex)
        for s in range(0, len(x), 256):
            xs = x[s:s + 256, None] * e[None, :]
            cur[s:s + 256] = 0.5 * np.mean(lw[None, :] * (1 + xs) / (1 - xs), axis=1)
        if prev is not None:
            res = float(np.max(np.abs(cur - prev)))
            if res < tol:
                break
        if 2 * m > max_nodes:
            raise QuadratureError(
                f"szego_function did not converge to {tol!r} within {max_nodes} nodes",
                residual=None if prev is None else float(np.max(np.abs(cur - prev))),
            )
        prev = cur
        m *= 2
    d = np.exp(cur)
    return complex(d[0]) if scalar else d.reshape(np.shape(xi))
