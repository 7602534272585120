"""Laguerre polynomials, their zeros, and quadrature rules on the complex plane.

Everything here is plain float64 numerics.  Quadrature rules come in two
flavours: a polar rule for the Gaussian measure ``dmu = exp(-|z|^2) dz / pi``
and a tensor Gauss-Hermite rule for Lebesgue measure on C = R^2.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

MAX_ORDER = 512
SUM_CUTOFF = 12


@dataclass(frozen=True)
class LaguerreParams:
    degree: int
    order: int = 0

    def __post_init__(self):
        if self.degree < 0 or self.order < 0:
            raise ValueError(f"invalid Laguerre parameters {self}")


class Measure(enum.Enum):
    GAUSSIAN_MU = "gaussian_mu"
    LEBESGUE = "lebesgue"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights approximating an integral over C.

    ``damped_weights`` is only set for Gaussian-measure rules; it holds
    ``weights * exp(|z|^2)`` so integrands can be supplied with their
    Gaussian factor already folded in (avoids overflow at large nodes).
    """

    nodes: np.ndarray
    weights: np.ndarray
    measure: Measure
    exactness_degree: int
    radial_order: int = 0
    angular_order: int = 0
    damped_weights: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights must have equal length")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def __len__(self):
        return self.nodes.size

    def integrate(self, values) -> complex:
        return complex(np.sum(self.weights * np.asarray(values)))


def laguerre_sum(params: LaguerreParams, x):
    """Defining alternating sum; accurate only for small degree."""
    k, a = params.degree, params.order
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for j in range(k + 1):
        out = out + (-1) ** j * math.comb(k + a, k - j) * x**j / math.factorial(j)
    return out


def laguerre_recurrence(degree: int, order, x):
    """Three-term recurrence, broadcasting over ``order`` and ``x``."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(order, dtype=float)
    prev = np.ones(np.broadcast(x, a).shape)
    if degree == 0:
        return prev
    cur = 1.0 + a - x
    for n in range(1, degree):
        prev, cur = cur, ((2 * n + 1 + a - x) * cur - (n + a) * prev) / (n + 1)
    return cur * np.ones_like(prev)


def laguerre(params: LaguerreParams, x):
    """Generalized Laguerre polynomial L_k^alpha(x)."""
    if params.degree <= SUM_CUTOFF:
        out = laguerre_sum(params, x)
    else:
        out = laguerre_recurrence(params.degree, params.order, x)
    return float(out) if np.ndim(out) == 0 else out


def _laguerre_pair_scaled(degree: int, x: np.ndarray):
    """(L_degree, L_{degree-1}) of order 0, sharing a scale factor exp(logscale).

    Rescaling keeps the recurrence finite for x in the thousands.
    """
    prev = np.ones_like(x)
    cur = 1.0 - x
    logscale = np.zeros_like(x)
    for n in range(1, degree):
        prev, cur = cur, ((2 * n + 1 - x) * cur - n * prev) / (n + 1)
        big = np.maximum(np.abs(cur), np.abs(prev))
        rescale = big > 1e100
        if np.any(rescale):
            s = np.where(rescale, big, 1.0)
            prev, cur = prev / s, cur / s
            logscale += np.log(s)
    return cur, prev, logscale


def _jacobi_laguerre(n: int, alpha: float = 0.0) -> np.ndarray:
    i = np.arange(n)
    diag = 2 * i + 1 + alpha
    off = np.sqrt(np.arange(1, n) * (np.arange(1, n) + alpha))
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def _laguerre_roots(n: int, newton_steps: int = 1) -> np.ndarray:
    """Roots of L_n^0: Jacobi-matrix eigenvalues polished by Newton steps."""
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return np.array([1.0])
    x = np.linalg.eigvalsh(_jacobi_laguerre(n))
    for _ in range(newton_steps):
        # x L_n' = n (L_n - L_{n-1}); the shared scale cancels in the ratio
        cur, prev, _ = _laguerre_pair_scaled(n, x)
        x = x - x * cur / (n * (cur - prev))
    return np.sort(x)


def laguerre_zeros(k: int) -> list[float]:
    """Sorted positive roots of L_{k-1}^0 (empty for k = 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return [float(r) for r in _laguerre_roots(k - 1)]


def gauss_laguerre(order: int):
    """Nodes, weights and damped weights ``w*exp(x)`` for weight exp(-x) on [0, inf)."""
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [1, {MAX_ORDER}]")
    x = _laguerre_roots(order, newton_steps=2)
    # w_i = x_i / ((n+1) L_{n+1}(x_i))^2
    cur, _, logscale = _laguerre_pair_scaled(order + 1, x)
    log_w = np.log(x) - 2 * math.log(order + 1) - 2 * (np.log(np.abs(cur)) + logscale)
    # total mass is exactly 1; renormalizing removes the O(1e-12) drift
    log_w -= np.log(np.sum(np.exp(log_w)))
    return x, np.exp(log_w), np.exp(log_w + x)


def build_gaussian_quadrature(radial_order: int, angular_order: int) -> QuadratureRule:
    """Polar product rule for integrals against the Gaussian measure mu.

    In s = r^2 the measure becomes exp(-s) ds * dtheta / (2 pi); Gauss-Laguerre
    handles s, equispaced angles handle theta.  Exact for z^p zbar^q with
    (p+q)/2 <= 2*radial_order - 1 and |p - q| < angular_order.
    """
    if radial_order < 1 or angular_order < 4:
        raise ValueError("need radial_order >= 1 and angular_order >= 4")
    if radial_order > MAX_ORDER or angular_order > 4 * MAX_ORDER:
        raise ValueError("quadrature order exceeds cap")
    s, w, wd = gauss_laguerre(radial_order)
    keep = w > 0
    s, w, wd = s[keep], w[keep], wd[keep]
    theta = 2 * np.pi * np.arange(angular_order) / angular_order
    nodes = (np.sqrt(s)[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(w / angular_order, angular_order)
    damped = np.repeat(wd / angular_order, angular_order)
    return QuadratureRule(
        nodes=nodes,
        weights=weights,
        measure=Measure.GAUSSIAN_MU,
        exactness_degree=min(4 * radial_order - 2, angular_order - 1),
        radial_order=radial_order,
        angular_order=angular_order,
        damped_weights=damped,
    )


def build_lebesgue_quadrature(scale: float, order: int, center: complex = 0.0) -> QuadratureRule:
    """Tensor Gauss-Hermite rule on R^2 reweighted to Lebesgue measure.

    Suited to integrands decaying like exp(-|z - center|^2 / scale^2).
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [1, {MAX_ORDER}]")
    x, w = np.polynomial.hermite.hermgauss(order)
    keep = w > 0
    x, w = x[keep], w[keep]
    lw = np.exp(np.log(w) + x**2) * scale
    nodes = (center + scale * (x[:, None] + 1j * x[None, :])).ravel()
    weights = (lw[:, None] * lw[None, :]).ravel()
    return QuadratureRule(
        nodes=nodes,
        weights=weights,
        measure=Measure.LEBESGUE,
        exactness_degree=2 * order - 1,
        radial_order=order,
    )


def gaussian_moment(p: int, q: int, a: complex, b: complex, c: float) -> complex:
    """int z^p zbar^q exp(a z + b zbar - c |z|^2) dz, as p(d_a, d_b) (pi/c) e^{ab/c}."""
    total = 0j
    for j in range(min(p, q) + 1):
        total += (
            math.comb(p, j)
            * (math.factorial(q) // math.factorial(q - j))
            * a ** (q - j)
            * b ** (p - j)
            / c ** (p + q - j)
        )
    return math.pi / c * total * np.exp(a * b / c)


def gaussian_polynomial_integral(p, a: complex, b: complex, c: float) -> complex:
    """Closed-form int p(z, zbar) exp(a z + b zbar - c|z|^2) dz for a polynomial p.

    ``p`` is anything with a 2-D ``coeffs`` array (entry (i, j) multiplies
    z^i zbar^j) or such an array itself.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    coeffs = np.asarray(getattr(p, "coeffs", p), dtype=complex)
    total = 0j
    for (i, j), cij in np.ndenumerate(coeffs):
        if cij != 0:
            total += cij * gaussian_moment(i, j, a, b, c)
    return complex(total)


def normalized_moment_table(P: int, Q: int, a: complex, b: complex, c: float) -> np.ndarray:
    """Table of int z^p zbar^q e^{az + b zbar - c|z|^2} dz / (pi sqrt(p! q!)) for p < P, q < Q.

    Terms are combined in log space so degrees in the hundreds stay finite.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    p = np.arange(P)[:, None, None]
    q = np.arange(Q)[None, :, None]
    j = np.arange(min(P, Q))[None, None, :]
    valid = (j <= p) & (j <= q)
    jj = np.where(valid, j, 0)
    from scipy.special import gammaln

    logmag = (
        0.5 * (gammaln(p + 1) + gammaln(q + 1))
        - gammaln(jj + 1)
        - gammaln(p - jj + 1)
        - gammaln(q - jj + 1)
        - (p + q - jj) * math.log(c)
    )
    ea, eb = q - jj, p - jj

    def powlog(base, e):
        if base == 0:
            return np.where(e == 0, 0.0, -np.inf), np.zeros(e.shape)
        return e * math.log(abs(base)), e * np.angle(base)

    la, pa = powlog(a, ea)
    lb, pb = powlog(b, eb)
    with np.errstate(invalid="ignore"):
        terms = np.where(valid, np.exp(logmag + la + lb + 1j * (pa + pb)), 0)
    return terms.sum(axis=2) * np.exp(a * b / c) / c
