"""Fast oracle and invariant checks, runnable without pytest (``opuczeros selftest``)."""

from __future__ import annotations

import math

import numpy as np

from . import weights as W
from .intensity import intensity_cd_array, intensity_general, intensity_general_array
from .kernels import kernel_arrays_cd, kernel_arrays_direct
from .opuc import build_basis, eval_all, inner_products
from .randompoly import backward_error, find_roots, sample_coefficients, to_monomial
from .regions import Disk, integrate_intensity


def _bases(N):
    return {
        "uniform": (W.uniform(), build_basis(W.compute_moments(W.uniform(), N))),
        "bernstein_szego(0.5)": (
            W.bernstein_szego(0.5),
            build_basis(W.compute_moments(W.bernstein_szego(0.5), N)),
        ),
    }


def _points(rng, count):
    r = np.concatenate([rng.uniform(0.05, 0.95, count // 2),
                        rng.uniform(1.05, 5.0, count - count // 2)])
    return r * np.exp(2j * np.pi * rng.uniform(size=count))


def check_moments():
    c = W.compute_moments(W.bernstein_szego(0.5), 3).c
    err = float(np.max(np.abs(c - [1, 0.5, 0.25, 0.125])))
    return err < 1e-13, f"max error {err:.2e}"


def check_szego_function():
    spec = W.bernstein_szego(0.5)
    got = W.szego_function(spec, 0.5)
    want = math.sqrt(0.75) / 0.75
    return abs(got - want) < 1e-12, f"D(0.5) = {got.real!r}"


def check_orthonormality():
    worst = 0.0
    for spec, basis in _bases(20).values():
        G = inner_products(basis, spec)
        worst = max(worst, float(np.max(np.abs(G - np.eye(21)))))
    return worst <= 1e-8, f"max |<phi_n, phi_m> - delta| = {worst:.2e}"


def check_basis_anchor():
    basis = build_basis(W.compute_moments(W.bernstein_szego(0.5), 1))
    p = eval_all(basis, 1, 0.0)
    ok = abs(p.phi + 0.5 / math.sqrt(0.75)) < 1e-14 and abs(p.phistar - 1 / math.sqrt(0.75)) < 1e-14
    return ok, f"phi_1(0) = {p.phi.real!r}"


def check_kernel_equivalence():
    rng = np.random.default_rng(2024)
    z = _points(rng, 200)
    worst = 0.0
    for _, basis in _bases(21).values():
        for n in (1, 5, 20):
            for a, b in zip(kernel_arrays_direct(basis, n, z), kernel_arrays_cd(basis, n, z)):
                rel = np.abs(a - b) / (np.abs(a) + 1e-3)
                worst = max(worst, float(np.max(rel)))
    return worst <= 1e-9, f"max relative deviation {worst:.2e}"


def check_intensity_equivalence():
    rng = np.random.default_rng(2025)
    z = _points(rng, 200)
    worst = 0.0
    for _, basis in _bases(21).values():
        for n in (1, 5, 20):
            g = intensity_general_array(basis, n, z)
            c = intensity_cd_array(basis, n, z)
            worst = max(worst, float(np.max(np.abs(g - c) / np.maximum(1.0, g))))
    return worst <= 1e-9, f"max deviation {worst:.2e}"


def check_anchors():
    basis = _bases(2)["uniform"][1]
    a = intensity_general(basis, 1, 0.0)
    b = intensity_general(basis, 1, 0.5)
    ok = abs(a - 1 / math.pi) < 1e-12 and abs(b - 0.64 / math.pi) < 1e-12
    return ok, f"h_1(0) = {a!r}, h_1(0.5) = {b!r}"


def check_expected_count():
    basis = _bases(2)["uniform"][1]
    res = integrate_intensity(basis, 1, Disk(0, 1))
    return abs(res.value - 0.5) < 2e-3, f"E N_1(D) = {res.value!r}"


def check_roots():
    basis = _bases(10)["bernstein_szego(0.5)"][1]
    worst = 0.0
    for t in range(50):
        c = to_monomial(basis, sample_coefficients(11, t, 10))
        r = find_roots(c)
        if len(r) != 10:
            return False, f"trial {t}: {len(r)} roots"
        worst = max(worst, float(np.max(backward_error(c, r))))
    return worst <= 1e-8, f"max backward error {worst:.2e}"


CHECKS = [
    ("moments: Bernstein-Szego closed form", check_moments),
    ("weights: Szego function closed form", check_szego_function),
    ("opuc: orthonormality N=20", check_orthonormality),
    ("opuc: degree-1 closed form", check_basis_anchor),
    ("kernels: Christoffel-Darboux vs direct", check_kernel_equivalence),
    ("intensity: closed form vs general", check_intensity_equivalence),
    ("intensity: uniform anchors", check_anchors),
    ("regions: E N_1(unit disk) = 1/2", check_expected_count),
    ("randompoly: Aberth backward error", check_roots),
]


def run_selftest(out=print) -> bool:
    ok_all = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as e:  # report and keep going
            ok, detail = False, f"{type(e).__name__}: {e}"
        ok_all &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
    return ok_all
