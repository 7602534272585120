"""Kernel-decay diagnostics for operators on F^2_n.

The integral kernel of an operator A is read off from <A k_{x,n}, k_{y,n}>;
localized operators have kernels that decay in |x - y|.  Decay profiles are
summarized by a Gaussian fit log v(d) ~ log C - rate * d^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import operators as op
from .operators import TruncatedOperator
from .qha import heat_smooth
from .fock_basis import basis_values
from .special_functions import LaguerreParams, gauss_laguerre, laguerre

TRUSTED_RADIUS = 2.0
FIT_RANGE = (0.5, 2.5)


@dataclass
class DecayProfile:
    separations: np.ndarray
    values: np.ndarray
    fit: tuple = (math.nan, math.nan)
    flagged: list = field(default_factory=list)

    def __post_init__(self):
        self.separations = np.asarray(self.separations, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if np.any(np.diff(self.separations) <= 0):
            raise ValueError("separations must be increasing")
        if np.any(self.values < 0):
            raise ValueError("profile values must be nonnegative")

    @property
    def rate(self) -> float:
        return self.fit[1]

    def to_rows(self):
        return [{"separation": float(d), "value": float(v)} for d, v in zip(self.separations, self.values)]


def kernel_tail_norm(n: int, R: float) -> float:
    """||(1 - chi_{B(0,R)}) k_{0,n}||, the kernel mass outside the disk of radius R.

    In s = r^2 the squared norm is (1/n) int_{R^2}^inf L^1_{n-1}(s)^2 e^{-s} ds,
    a polynomial against a shifted exponential weight; Gauss-Laguerre with n
    nodes integrates it exactly.
    """
    if R < 0:
        raise ValueError("R must be nonnegative")
    if n < 1:
        raise ValueError("n must be >= 1")
    x, w, _ = gauss_laguerre(n)
    s = R * R + x
    p = laguerre(LaguerreParams(n - 1, 1), s)
    return math.sqrt(math.exp(-R * R) * float(np.sum(w * p**2)) / n)


def gaussian_fit(separations, values, fit_range=FIT_RANGE, poly_degree: int = 0):
    """(C, rate) from least squares of log(envelope) against d^2 on ``fit_range``.

    Values are first divided by (1 + d^2)^poly_degree, the polynomial
    prefactor allowed in front of the Gaussian (degree n - 1 in d^2 on
    F^2_n).  The envelope is the running maximum from the right, so isolated
    kernel zeros do not drag the fit.
    """
    d = np.asarray(separations, dtype=float)
    v = np.asarray(values, dtype=float) / (1 + d**2) ** poly_degree
    env = np.maximum.accumulate(v[::-1])[::-1]
    sel = (d >= fit_range[0]) & (d <= fit_range[1]) & (env > 0)
    if sel.sum() < 2:
        return math.nan, math.nan
    slope, intercept = np.polyfit(d[sel] ** 2, np.log(env[sel]), 1)
    return float(math.exp(intercept)), float(-slope)


def kernel_value(A: TruncatedOperator, x: complex, y: complex) -> complex:
    """<A k_x, k_y> with the normalized kernels of A's space."""
    kx = op.kernel_vector(A.domain, x)
    ky = op.kernel_vector(A.codomain, y)
    return complex(np.vdot(ky, A.matrix @ kx))


def offdiag_kernel_map(A: TruncatedOperator, pairs, trusted_radius: float = TRUSTED_RADIUS,
                       fit_range=FIT_RANGE) -> DecayProfile:
    """Profile d -> max |<A k_x, k_y>| over pairs with |x - y| = d.

    Pairs with a point outside ``trusted_radius`` are not evaluated; they are
    returned in ``flagged``.
    """
    by_sep: dict[float, float] = {}
    flagged = []
    for x, y in pairs:
        x, y = complex(x), complex(y)
        if abs(x) > trusted_radius + 1e-12 or abs(y) > trusted_radius + 1e-12:
            flagged.append((x, y))
            continue
        d = round(abs(x - y), 9)
        by_sep[d] = max(by_sep.get(d, 0.0), abs(kernel_value(A, x, y)))
    seps = np.array(sorted(by_sep))
    vals = np.array([by_sep[d] for d in seps])
    deg = len(A.domain.components) - 1 if A.domain.kind == "full" else 0
    return DecayProfile(seps, vals, gaussian_fit(seps, vals, fit_range, deg), flagged)


def separation_pairs(separations, trusted_radius: float = TRUSTED_RADIUS, n_dirs: int = 8,
                     centers=(0, 0.5, -0.5, 0.5j, -0.5j)) -> list:
    """Pairs x = c + d e^{i theta}/2, y = c - d e^{i theta}/2 inside the trusted disk."""
    out = []
    dirs = np.exp(1j * np.pi * np.arange(n_dirs) / n_dirs)
    for d in separations:
        for c in centers:
            for u in dirs:
                x, y = c + d * u / 2, c - d * u / 2
                if abs(x) <= trusted_radius and abs(y) <= trusted_radius:
                    out.append((x, y))
    return out


def default_separations() -> np.ndarray:
    return np.round(np.linspace(0.0, 3.0, 31), 10)


def heat_smoothed_decay(A: TruncatedOperator, t: float, separations=None,
                        trusted_radius: float = TRUSTED_RADIUS, fit_range=FIT_RANGE) -> DecayProfile:
    """Decay profile of g_t * A; the expected Gaussian rate is at least t / (2t + 1)."""
    if not t > 0:
        raise ValueError("t must be positive")
    seps = default_separations() if separations is None else separations
    S = heat_smooth(A, t)
    return offdiag_kernel_map(S, separation_pairs(seps, trusted_radius), trusted_radius, fit_range)


def expected_rate(t: float) -> float:
    return t / (2 * t + 1)


def weak_localization_integral(A: TruncatedOperator, z: complex, radius: float,
                               radial_order: int = 40, angular_order: int = 48) -> float:
    """int_{|w - z| <= radius} |<A k_z, k_w>| dw by a polar product rule."""
    x, wx = np.polynomial.legendre.leggauss(radial_order)
    r = 0.5 * radius * (x + 1)
    wr = 0.5 * radius * wx * r
    th = 2 * np.pi * np.arange(angular_order) / angular_order
    pts = (complex(z) + r[:, None] * np.exp(1j * th)[None, :]).ravel()
    comps = A.codomain.components
    K = np.concatenate([basis_values(k, pts, A.codomain.N) for k in comps], axis=1) / math.sqrt(len(comps))
    # rows of K are conj(k_w), so K @ v = <v, k_w>
    vals = np.abs(K @ (A.matrix @ op.kernel_vector(A.domain, z))).reshape(radial_order, angular_order)
    return float(np.sum(wr[:, None] * vals) * 2 * np.pi / angular_order)


def weak_localization_sup(A: TruncatedOperator, grid_radius: float, radius: float = 3.0,
                          n_radii: int = 6, n_angles: int = 8) -> float:
    """max of weak_localization_integral over a polar z-grid of the given radius."""
    zs = [0j] + [r * np.exp(2j * np.pi * a / n_angles)
                 for r in grid_radius * np.arange(1, n_radii) / (n_radii - 1) for a in range(n_angles)]
    return max(weak_localization_integral(A, z, radius) for z in zs)
