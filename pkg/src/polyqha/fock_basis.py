"""Orthonormal bases of the true polyanalytic Fock spaces and their kernels.

The basis of F^2_(k) used throughout is

    e_{k,m} = (a^dag)^{k-1} (z^m / sqrt(m!)) / sqrt((k-1)!),   a^dag = -d/dz + zbar,

i.e. the analytic monomial basis pushed through the unitary intertwiner.
In these coordinates every intertwiner is the identity matrix and the Weyl
operators act identically on every F^2_(k).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .special_functions import LaguerreParams, Measure, QuadratureRule, laguerre


class BivariatePolynomial:
    """sum_{p,q} coeffs[p, q] z^p zbar^q with trailing zero rows/columns trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        rows = np.flatnonzero(np.any(c != 0, axis=1))
        cols = np.flatnonzero(np.any(c != 0, axis=0))
        if rows.size == 0:
            c = np.zeros((1, 1), dtype=complex)
        else:
            c = c[: rows[-1] + 1, : cols[-1] + 1]
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def monomial(cls, p: int, q: int, coeff: complex = 1.0):
        c = np.zeros((p + 1, q + 1), dtype=complex)
        c[p, q] = coeff
        return cls(c)

    @property
    def deg_z(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def deg_zbar(self) -> int:
        return self.coeffs.shape[1] - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def _padded(self, other):
        shape = (
            max(self.coeffs.shape[0], other.coeffs.shape[0]),
            max(self.coeffs.shape[1], other.coeffs.shape[1]),
        )
        a = np.zeros(shape, dtype=complex)
        b = np.zeros(shape, dtype=complex)
        a[: self.coeffs.shape[0], : self.coeffs.shape[1]] = self.coeffs
        b[: other.coeffs.shape[0], : other.coeffs.shape[1]] = other.coeffs
        return a, b

    def __add__(self, other):
        a, b = self._padded(other)
        return BivariatePolynomial(a + b)

    def __sub__(self, other):
        a, b = self._padded(other)
        return BivariatePolynomial(a - b)

    def __mul__(self, other):
        if isinstance(other, BivariatePolynomial):
            a, b = self.coeffs, other.coeffs
            out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
            for (i, j), v in np.ndenumerate(a):
                if v != 0:
                    out[i : i + b.shape[0], j : j + b.shape[1]] += v * b
            return BivariatePolynomial(out)
        return BivariatePolynomial(self.coeffs * other)

    __rmul__ = __mul__

    def conj(self):
        """Polynomial of conj(p(z)), i.e. coefficients transposed and conjugated."""
        return BivariatePolynomial(self.coeffs.T.conj())

    def allclose(self, other, atol=1e-12) -> bool:
        a, b = self._padded(other)
        return np.allclose(a, b, rtol=0, atol=atol)

    def __call__(self, z):
        return eval_poly(self, z)

    def __repr__(self):
        terms = [f"({v:.6g}) z^{i} zb^{j}" for (i, j), v in np.ndenumerate(self.coeffs) if v != 0]
        return "BivariatePolynomial(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class BasisIndex:
    k: int
    m: int

    def __post_init__(self):
        if self.k < 1 or self.m < 0:
            raise ValueError(f"invalid basis index {self}")


def raising_apply(p: BivariatePolynomial) -> BivariatePolynomial:
    """(-d/dz + zbar) p."""
    c = p.coeffs
    out = np.zeros((c.shape[0], c.shape[1] + 1), dtype=complex)
    out[:, 1:] += c
    out[:-1, :-1] -= c[1:, :] * np.arange(1, c.shape[0])[:, None]
    return BivariatePolynomial(out)


def lowering_apply(p: BivariatePolynomial) -> BivariatePolynomial:
    """d/dzbar p."""
    c = p.coeffs
    if c.shape[1] == 1:
        return BivariatePolynomial(np.zeros((1, 1)))
    return BivariatePolynomial(c[:, 1:] * np.arange(1, c.shape[1])[None, :])


@lru_cache(maxsize=None)
def _raw_basis(k: int, m: int) -> BivariatePolynomial:
    # (a^dag)^{k-1} z^m with integer coefficients
    if k == 1:
        return BivariatePolynomial.monomial(m, 0)
    return raising_apply(_raw_basis(k - 1, m))


@lru_cache(maxsize=None)
def _basis(k: int, m: int) -> BivariatePolynomial:
    norm = math.exp(-0.5 * (math.lgamma(m + 1) + math.lgamma(k)))
    return BivariatePolynomial(_raw_basis(k, m).coeffs * norm)


def basis_function(idx: BasisIndex | tuple[int, int]) -> BivariatePolynomial:
    """Polynomial of e_{k,m}; cached per (k, m)."""
    if not isinstance(idx, BasisIndex):
        idx = BasisIndex(*idx)
    return _basis(idx.k, idx.m)


def eval_poly(p: BivariatePolynomial, z):
    """Horner evaluation of p at complex z (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    out = np.polynomial.polynomial.polyval2d(z, z.conj(), p.coeffs)
    return complex(out) if out.ndim == 0 else out


def basis_values(k: int, z, N: int, damped: bool = True) -> np.ndarray:
    """Values e_{k,m}(z) for m < N, shape ``z.shape + (N,)``.

    With ``damped`` the values carry the factor exp(-|z|^2/2), which keeps
    them bounded for large |z| and large m.  Uses the explicit form

        e_{k,m} = sum_j (-1)^j C(k-1, j) sqrt(m!/(m-j)!) zbar^{k-1-j} u_{m-j} / sqrt((k-1)!)

    with u_m = z^m / sqrt(m!) generated by a stable ratio recurrence.
    """
    z = np.asarray(z, dtype=complex)
    u = np.empty(z.shape + (N,), dtype=complex)
    u[..., 0] = np.exp(-0.5 * np.abs(z) ** 2) if damped else 1.0
    for m in range(1, N):
        u[..., m] = u[..., m - 1] * z / math.sqrt(m)
    if k == 1:
        return u
    ms = np.arange(N)
    out = np.zeros_like(u)
    zb = z.conj()[..., None]
    for j in range(k):
        if j >= N:
            break
        # sqrt(m!/(m-j)!) for m >= j
        fall = np.exp(0.5 * (np.array([math.lgamma(m + 1) - math.lgamma(m - j + 1) for m in ms[j:]])))
        term = np.zeros_like(u)
        term[..., j:] = u[..., : N - j] * fall
        out += (-1) ** j * math.comb(k - 1, j) * zb ** (k - 1 - j) * term
    return out / math.sqrt(math.factorial(k - 1))


def reproducing_kernel(space, z: complex, w: complex, normalized: bool = False) -> complex:
    """K_(k)(z, w) for ``space = ("true", k)`` or K_n(z, w) for ``("full", n)``.

    A bare int is read as a true-poly index.  ``normalized`` returns the
    normalized kernel k_w(z).
    """
    kind, idx = _parse_space(space)
    d = abs(z - w) ** 2
    if kind == "true":
        val = laguerre(LaguerreParams(idx - 1, 0), d) * np.exp(z * np.conj(w))
        if normalized:
            val = val * np.exp(-abs(w) ** 2 / 2)
    else:
        val = laguerre(LaguerreParams(idx - 1, 1), d) * np.exp(z * np.conj(w))
        if normalized:
            val = val * np.exp(-abs(w) ** 2 / 2) / math.sqrt(idx)
    return complex(val)


def _parse_space(space):
    if isinstance(space, (int, np.integer)):
        return "true", int(space)
    if hasattr(space, "kind"):
        return ("true" if space.kind == "true" else "full"), space.index
    kind, idx = space
    if kind not in ("true", "full"):
        raise ValueError(f"unknown space kind {kind!r}")
    return kind, int(idx)


def normalized_kernel_coeffs(k: int, z: complex, N: int) -> np.ndarray:
    """Coefficients of k_{z,(k)} in the basis e_{k,0..N-1}."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return basis_values(k, complex(z), N).conj()


def kernel_tail(coeffs: np.ndarray) -> float:
    """1 - ||coeffs||^2: the norm mass lost to truncation."""
    return float(1.0 - np.vdot(coeffs, coeffs).real)


def _samples(f, rule: QuadratureRule):
    if isinstance(f, BivariatePolynomial):
        return eval_poly(f, rule.nodes)
    f = np.asarray(f)
    if f.shape != rule.nodes.shape:
        raise ValueError("grid samples do not match the quadrature nodes")
    return f


def inner_product_mu(f, g, rule: QuadratureRule) -> complex:
    """<f, g> in L^2(mu) by quadrature: sum w f conj(g)."""
    if rule.measure is not Measure.GAUSSIAN_MU:
        raise ValueError("inner_product_mu needs a Gaussian-measure rule")
    return complex(np.sum(rule.weights * _samples(f, rule) * np.conj(_samples(g, rule))))
