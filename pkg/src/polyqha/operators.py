"""Truncated matrix representations of operators on F^2_(k) and F^2_n.

Matrices act on coefficient vectors in the canonical basis e_{k,m}, m < N.
On the full polyanalytic space F^2_n = F^2_(1) + ... + F^2_(n) the basis is
ordered block by block, so block (k, j) = P_(k) A |F^2_(j) sits at rows
(k-1)N..kN and columns (j-1)N..jN.

Truncation corrupts the outer band of most operators (W_z spreads degree m
over a band of width ~|z| sqrt(N)); identity-type checks therefore look at
the inner half of each block only.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from . import fock_basis as fb
from .special_functions import (
    Measure,
    QuadratureRule,
    build_gaussian_quadrature,
    normalized_moment_table,
)

DEFAULT_N = 64
SVD_LIMIT = 256


class QuadratureInsufficient(ValueError):
    """The quadrature rule cannot integrate the requested entries exactly."""


@dataclass(frozen=True)
class SpaceTag:
    kind: str  # "true" or "full"
    index: int  # k for true-poly, n for full-poly
    N: int = DEFAULT_N

    def __post_init__(self):
        if self.kind not in ("true", "full"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.index < 1 or self.N < 1:
            raise ValueError(f"invalid space {self}")

    @property
    def components(self) -> list[int]:
        return [self.index] if self.kind == "true" else list(range(1, self.index + 1))

    @property
    def dim(self) -> int:
        return self.N * len(self.components)

    def to_dict(self):
        return {"kind": self.kind, "index": self.index, "N": self.N}


def true_poly(k: int, N: int = DEFAULT_N) -> SpaceTag:
    return SpaceTag("true", k, N)


def full_poly(n: int, N: int = DEFAULT_N) -> SpaceTag:
    return SpaceTag("full", n, N)


def as_space(space, N: int | None = None) -> SpaceTag:
    if isinstance(space, SpaceTag):
        if N is not None and N != space.N:
            return SpaceTag(space.kind, space.index, N)
        return space
    return true_poly(int(space), DEFAULT_N if N is None else N)


@dataclass(frozen=True)
class TruncatedOperator:
    domain: SpaceTag
    codomain: SpaceTag
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.codomain.dim}x{self.domain.dim}"
            )

    @property
    def H(self) -> "TruncatedOperator":
        return TruncatedOperator(self.codomain, self.domain, self.matrix.conj().T)

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator(other.domain, self.codomain, self.matrix @ other.matrix)

    def __add__(self, other):
        return TruncatedOperator(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other):
        return TruncatedOperator(self.domain, self.codomain, self.matrix - other.matrix)

    def __mul__(self, c):
        return TruncatedOperator(self.domain, self.codomain, self.matrix * c)

    __rmul__ = __mul__

    def inner(self, frac: float = 0.5) -> np.ndarray:
        """Matrix restricted to the first ``frac*N`` basis vectors of each component."""
        return self.matrix[np.ix_(inner_indices(self.codomain, frac), inner_indices(self.domain, frac))]


def inner_indices(space: SpaceTag, frac: float = 0.5) -> np.ndarray:
    keep = max(1, int(round(space.N * frac)))
    return np.concatenate([np.arange(keep) + c * space.N for c in range(len(space.components))])


def identity(space, N: int | None = None) -> TruncatedOperator:
    s = as_space(space, N)
    return TruncatedOperator(s, s, np.eye(s.dim, dtype=complex))


def zero(space, N: int | None = None) -> TruncatedOperator:
    s = as_space(space, N)
    return TruncatedOperator(s, s, np.zeros((s.dim, s.dim), dtype=complex))


# ---------------------------------------------------------------- Weyl operators


def _laguerre_table(N: int, x: np.ndarray) -> np.ndarray:
    """L_n^{(d)}(x) for n + d < N, shape ``x.shape + (N, N)`` indexed [n, d].

    Forward recurrence in the degree for every order at once.
    """
    d = np.arange(N, dtype=float)
    xx = x[..., None]
    out = np.zeros(x.shape + (N, N))
    prev = np.ones(x.shape + (N,))
    out[..., 0, :] = prev
    if N > 1:
        cur = 1.0 + d - xx
        out[..., 1, :] = cur
        for n in range(1, N - 1):
            prev, cur = cur, ((2 * n + 1 + d - xx) * cur - (n + d) * prev) / (n + 1)
            out[..., n + 1, :] = cur
    return out


def _weyl_magnitude(x: np.ndarray, N: int):
    """Signed real part sqrt(q!/p!) r^{p-q} e^{-r^2/2} L_q^{(p-q)}(r^2), r^2 = x, for p >= q.

    Returns the values and the order index p - q (zero above the diagonal).
    Magnitudes are combined in log space so huge Laguerre values and tiny
    prefactors never meet in floating point.
    """
    L = _laguerre_table(N, x)
    p, q = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    lower = p >= q
    dd = np.where(lower, p - q, 0)
    Lv = L[..., q, dd]
    with np.errstate(divide="ignore"):
        # floor keeps 0 * log(0) finite at r = 0
        logr = np.maximum(0.5 * np.log(x), -1e300)[..., None, None]
    logmag = 0.5 * (gammaln(q + 1) - gammaln(p + 1)) - 0.5 * x[..., None, None]
    logmag = logmag + np.where(dd > 0, dd * logr, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        mag = np.nan_to_num(np.exp(logmag + np.log(np.abs(Lv)))) * np.sign(Lv)
    return np.where(lower, mag, 0.0), dd


def _phase_powers(u: np.ndarray, dd: np.ndarray, N: int) -> np.ndarray:
    """u^{dd} for unit-modulus u, gathered from the table u^0 .. u^{N-1}."""
    pw = u[..., None] ** np.arange(N)
    return pw[..., dd]


def weyl_block(z, N: int) -> np.ndarray:
    """Entries <W_z e_n, e_m> for m, n < N (the same for every k).

    W_z is the displacement operator with parameter alpha = conj(z), whose
    entries are generalized Laguerre polynomials:

        <W_z e_n, e_m> = sqrt(n!/m!) alpha^{m-n} e^{-|z|^2/2} L_n^{(m-n)}(|z|^2),  m >= n,

    and the mirrored formula with -conj(alpha) above the diagonal.  Both
    triangles share the same magnitudes, only the phases differ.  Entries are
    those of the untruncated operator; only the truncation itself is
    approximate.  Accepts an array of z and returns shape ``z.shape + (N, N)``.
    """
    z = np.asarray(z, dtype=complex)
    mag, dd = _weyl_magnitude(np.abs(z) ** 2, N)
    unit = np.exp(1j * np.angle(z))
    low = mag * _phase_powers(unit.conj(), dd, N)
    up = np.swapaxes(mag * _phase_powers(-unit, dd, N), -1, -2)
    # gathers leave the batch axis innermost; batched matmul wants it outermost
    return np.ascontiguousarray(low + np.triu(up, 1))


def _block_diag(block: np.ndarray, copies: int) -> np.ndarray:
    if copies == 1:
        return block
    N = block.shape[-1]
    out = np.zeros(block.shape[:-2] + (copies * N, copies * N), dtype=block.dtype)
    for c in range(copies):
        out[..., c * N : (c + 1) * N, c * N : (c + 1) * N] = block
    return out


def weyl_matrix(space, z: complex, N: int | None = None, method: str = "recurrence") -> TruncatedOperator:
    """Truncated W_z on a true- or full-polyanalytic space.

    ``method="quadrature"`` projects the pointwise formula
    W_z f(w) = exp(w zbar - |z|^2/2) f(w - z) onto the basis instead; it is
    slower and serves as an independent cross-check.
    """
    s = as_space(space, N)
    if method == "recurrence":
        block = weyl_block(complex(z), s.N)
    elif method == "quadrature":
        block = _weyl_block_quadrature(s.components[0], complex(z), s.N)
    else:
        raise ValueError(f"unknown method {method!r}")
    return TruncatedOperator(s, s, _block_diag(block, len(s.components)))


def _weyl_block_quadrature(k: int, z: complex, N: int, rule: QuadratureRule | None = None) -> np.ndarray:
    if rule is None:
        rule = build_gaussian_quadrature(max(80, N + 40), max(160, 2 * N + 40))
    w = rule.nodes
    # (W_z e_m)(w) exp(-|w|^2/2) written with damped basis values at w - z
    shifted = fb.basis_values(k, w - z, N, damped=True)
    phase = np.exp(w * np.conj(z) - abs(z) ** 2 / 2 + 0.5 * np.abs(w - z) ** 2 - 0.5 * np.abs(w) ** 2)
    target = fb.basis_values(k, w, N, damped=True)
    return (target.conj().T * rule.damped_weights) @ (shifted * phase[:, None])


def parity_matrix(space, N: int | None = None) -> TruncatedOperator:
    """U f(z) = f(-z): diagonal (-1)^{m+k-1} on e_{k,m}."""
    s = as_space(space, N)
    diag = np.concatenate([(-1.0) ** (np.arange(s.N) + k - 1) for k in s.components])
    return TruncatedOperator(s, s, np.diag(diag).astype(complex))


def kernel_vector(space, z: complex, N: int | None = None) -> np.ndarray:
    """Coefficients of the normalized reproducing kernel k_z of the space."""
    s = as_space(space, N)
    parts = [fb.normalized_kernel_coeffs(k, z, s.N) for k in s.components]
    return np.concatenate(parts) / math.sqrt(len(parts))


def l_vector(space, z: complex, k: int, N: int | None = None) -> np.ndarray:
    """Coefficients of l_{z,k} = A_{k,1} k_{z,(1)} placed in component k."""
    s = as_space(space, N)
    if k not in s.components:
        raise ValueError(f"component {k} not in {s}")
    v = np.zeros(s.dim, dtype=complex)
    c = s.components.index(k)
    v[c * s.N : (c + 1) * s.N] = fb.normalized_kernel_coeffs(1, z, s.N)
    return v


def rank_one(space, z: complex, w: complex, N: int | None = None) -> TruncatedOperator:
    """k_z (x) k_w : phi -> <phi, k_w> k_z."""
    s = as_space(space, N)
    return TruncatedOperator(s, s, np.outer(kernel_vector(s, z), kernel_vector(s, w).conj()))


def outer(u: np.ndarray, v: np.ndarray, domain: SpaceTag, codomain: SpaceTag | None = None) -> TruncatedOperator:
    """u (x) v as an operator from ``domain`` to ``codomain``."""
    return TruncatedOperator(domain, codomain or domain, np.outer(u, v.conj()))


# ---------------------------------------------------------------- symbols


class SymbolFamily(enum.Enum):
    CHARACTER = "character"
    CONSTANT = "constant"
    GAUSSIAN = "gaussian"
    DISK_INDICATOR = "disk_indicator"
    RADIAL_POLY = "radial_poly"
    GRID = "grid"


@dataclass(frozen=True)
class SymbolSpec:
    """A bounded function on C, always multiplied by ``scale``.

    CHARACTER(xi) is exp(i sigma(xi, z)) with sigma(xi, z) = 2 Im(xi zbar).
    GAUSSIAN(t) is g_t(z) = exp(-|z|^2/t) / (pi t).
    RADIAL_POLY(c) is sum_j c_j |z|^{2j}.
    """

    family: SymbolFamily
    param: object = None
    scale: complex = 1.0

    def __post_init__(self):
        if self.family is SymbolFamily.GAUSSIAN and not self.param > 0:
            raise ValueError("Gaussian parameter t must be positive")
        if self.family is SymbolFamily.DISK_INDICATOR and not self.param > 0:
            raise ValueError("disk radius must be positive")
        if self.family in (SymbolFamily.CHARACTER, SymbolFamily.CONSTANT) and not np.isfinite(self.param):
            raise ValueError("symbol parameter must be finite")

    @classmethod
    def character(cls, xi: complex, scale: complex = 1.0):
        return cls(SymbolFamily.CHARACTER, complex(xi), scale)

    @classmethod
    def constant(cls, c: complex):
        return cls(SymbolFamily.CONSTANT, complex(c))

    @classmethod
    def gaussian(cls, t: float):
        return cls(SymbolFamily.GAUSSIAN, float(t))

    @classmethod
    def disk(cls, R: float):
        return cls(SymbolFamily.DISK_INDICATOR, float(R))

    @classmethod
    def radial_poly(cls, coeffs):
        return cls(SymbolFamily.RADIAL_POLY, tuple(complex(c) for c in coeffs))

    @classmethod
    def grid(cls, samples):
        return cls(SymbolFamily.GRID, np.asarray(samples, dtype=complex))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        f, p = self.family, self.param
        if f is SymbolFamily.CHARACTER:
            val = np.exp(2j * np.imag(p * np.conj(z)))
        elif f is SymbolFamily.CONSTANT:
            val = np.full(z.shape, p, dtype=complex)
        elif f is SymbolFamily.GAUSSIAN:
            val = np.exp(-np.abs(z) ** 2 / p) / (np.pi * p)
        elif f is SymbolFamily.DISK_INDICATOR:
            val = (np.abs(z) <= p).astype(complex)
        elif f is SymbolFamily.RADIAL_POLY:
            val = np.polynomial.polynomial.polyval(np.abs(z) ** 2, np.asarray(p))
        else:
            if p.shape != z.shape:
                raise ValueError("grid symbol sampled on an incompatible grid")
            val = p
        return self.scale * val

    @property
    def poly_degree(self) -> int:
        if self.family is SymbolFamily.RADIAL_POLY:
            return 2 * (len(self.param) - 1)
        return 0

    def is_real(self) -> bool:
        if np.imag(self.scale) != 0:
            return False
        if self.family is SymbolFamily.CHARACTER:
            return self.param == 0
        if self.family is SymbolFamily.CONSTANT:
            return np.imag(self.param) == 0
        if self.family is SymbolFamily.RADIAL_POLY:
            return all(np.imag(c) == 0 for c in self.param)
        if self.family is SymbolFamily.GRID:
            return bool(np.all(np.imag(self.param) == 0))
        return True

    def sup_norm(self) -> float:
        f, p = self.family, self.param
        if f is SymbolFamily.CHARACTER:
            val = 1.0
        elif f is SymbolFamily.CONSTANT:
            val = abs(p)
        elif f is SymbolFamily.GAUSSIAN:
            val = 1 / (np.pi * p)
        elif f is SymbolFamily.DISK_INDICATOR:
            val = 1.0
        elif f is SymbolFamily.GRID:
            val = float(np.max(np.abs(p)))
        else:
            val = np.inf if len(p) > 1 else abs(p[0])
        return abs(self.scale) * val

    def exp_form(self):
        """(coef, radial coeffs, a, b, c) with f = coef * poly(|z|^2) * exp(a z + b zbar - c|z|^2).

        None for families without such a closed form.
        """
        f, p = self.family, self.param
        if f is SymbolFamily.CHARACTER:
            return self.scale, (1.0,), -np.conj(p), p, 0.0
        if f is SymbolFamily.CONSTANT:
            return self.scale * p, (1.0,), 0.0, 0.0, 0.0
        if f is SymbolFamily.GAUSSIAN:
            return self.scale / (np.pi * p), (1.0,), 0.0, 0.0, 1.0 / p
        if f is SymbolFamily.RADIAL_POLY:
            return self.scale, p, 0.0, 0.0, 0.0
        return None


# ---------------------------------------------------------------- Toeplitz


def _basis_coefficients(k: int, N: int):
    """beta[m, j]: coefficient of z^{m-j} zbar^{k-1-j} in e_{k,m}, via log-magnitudes."""
    logb = np.full((N, k), -np.inf)
    sign = np.zeros((N, k))
    for m in range(N):
        for j in range(min(k, m + 1)):
            logb[m, j] = (
                math.log(math.comb(k - 1, j))
                + 0.5 * math.lgamma(m + 1)
                - math.lgamma(m - j + 1)
                - 0.5 * math.lgamma(k)
            )
            sign[m, j] = (-1) ** j
    return logb, sign


def _toeplitz_block_exact(k_out: int, k_in: int, f: SymbolSpec, N: int) -> np.ndarray:
    """<f e_{k_in,m}, e_{k_out,m'}>_mu in closed form via Gaussian moment integrals."""
    form = f.exp_form()
    if form is None:
        raise ValueError(f"no closed form for {f.family}")
    coef, radial, a, b, c = form
    from scipy.special import gammaln

    lb_in, s_in = _basis_coefficients(k_in, N)
    lb_out, s_out = _basis_coefficients(k_out, N)
    L = len(radial)
    P = N + k_in + k_out + L
    # (1/pi) int z^p zbar^q e^{az + b zbar - (1+c)|z|^2} dz / sqrt(p! q!)
    table = normalized_moment_table(P, P, a, b, 1.0 + c)
    out = np.zeros((N, N), dtype=complex)
    m = np.arange(N)
    for j in range(k_in):
        for i in range(k_out):
            for l, cl in enumerate(radial):
                if cl == 0:
                    continue
                # e_{k_in,m} conj(e_{k_out,m'}) |z|^{2l}:  z^p zbar^q
                p = m[None, :] - j + k_out - 1 - i + l
                q = m[:, None] - i + k_in - 1 - j + l
                valid = (m[None, :] >= j) & (m[:, None] >= i)
                pc, qc = np.where(valid, p, 0), np.where(valid, q, 0)
                logw = lb_in[m, j][None, :] + lb_out[m, i][:, None] + 0.5 * (gammaln(pc + 1) + gammaln(qc + 1))
                with np.errstate(invalid="ignore"):
                    term = np.where(valid, s_in[m, j][None, :] * s_out[m, i][:, None] * np.exp(logw) * table[pc, qc], 0)
                out += cl * term
    return coef * out


def _disk_rule(R: float, angular_order: int, radial_order: int) -> QuadratureRule:
    # Gauss-Legendre on s in [0, R^2], integrand exp(-s) folded into the weights
    x, w = np.polynomial.legendre.leggauss(radial_order)
    s = 0.5 * R**2 * (x + 1)
    ws = 0.5 * R**2 * w * np.exp(-s)
    theta = 2 * np.pi * np.arange(angular_order) / angular_order
    nodes = (np.sqrt(s)[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(ws / angular_order, angular_order)
    return QuadratureRule(
        nodes=nodes,
        weights=weights,
        measure=Measure.GAUSSIAN_MU,
        exactness_degree=angular_order - 1,
        radial_order=radial_order,
        angular_order=angular_order,
        damped_weights=np.repeat(0.5 * R**2 * w / angular_order, angular_order),
    )


def required_exactness(space: SpaceTag, f: SymbolSpec) -> int:
    kmax = max(space.components)
    return 2 * (space.N - 1 + kmax - 1) + f.poly_degree


def toeplitz_matrix(
    space,
    f: SymbolSpec,
    N: int | None = None,
    rule: QuadratureRule | None = None,
    method: str = "quadrature",
) -> TruncatedOperator:
    """T_f = P M_f P on F^2_(k) (int ``space``) or F^2_n, entries <f e_j, e_k>_mu.

    ``method="exact"`` evaluates the entries in closed form for symbols of the
    type poly(|z|^2) exp(az + b zbar - c|z|^2); it is the cross-check for the
    default quadrature route.
    """
    s = as_space(space, N)
    n_comp = len(s.components)
    if method == "exact":
        blocks = {
            (ko, ki): _toeplitz_block_exact(ko, ki, f, s.N) for ko in s.components for ki in s.components
        }
        return assemble_blocks(blocks, s)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    if rule is None:
        rule = default_gaussian_rule(s.N)
    if rule.measure is not Measure.GAUSSIAN_MU or rule.damped_weights is None:
        raise ValueError("Toeplitz entries need a Gaussian-measure polar rule")
    if f.family is SymbolFamily.DISK_INDICATOR:
        # the symbol vanishes outside the disk, so only the disk is sampled
        r = _disk_rule(f.param, rule.angular_order, max(rule.radial_order, s.N + 20))
        rules, values = [r], [np.full(r.nodes.shape, f.scale, dtype=complex)]
    else:
        if f.family is not SymbolFamily.GRID and required_exactness(s, f) > rule.exactness_degree:
            raise QuadratureInsufficient(
                f"rule exact to degree {rule.exactness_degree}, entries need {required_exactness(s, f)}"
            )
        rules, values = [rule], [f(rule.nodes)]
    M = np.zeros((s.dim, s.dim), dtype=complex)
    for r, vals in zip(rules, values):
        V = np.concatenate([fb.basis_values(k, r.nodes, s.N, damped=True) for k in s.components], axis=1)
        M += (V.conj().T * (r.damped_weights * vals)) @ V
    if n_comp == 1 and f.is_real():
        M = 0.5 * (M + M.conj().T)
    return TruncatedOperator(s, s, M)


def default_gaussian_rule(N: int) -> QuadratureRule:
    radial = max(80, N + 16)
    angular = max(160, 2 * N + 8)
    return _cached_rule(radial, angular)


_RULES: dict = {}


def _cached_rule(radial: int, angular: int) -> QuadratureRule:
    key = (radial, angular)
    if key not in _RULES:
        _RULES[key] = build_gaussian_quadrature(radial, angular)
    return _RULES[key]


# ---------------------------------------------------------------- intertwiners


def intertwiner_matrix(j: int, k: int, N: int = DEFAULT_N, method: str = "canonical") -> TruncatedOperator:
    """A_{k,j}: F^2_(j) -> F^2_(k).  Identity in canonical coordinates.

    ``method="quadrature"`` applies the ladder operators to the basis
    polynomials (a^dag / sqrt(i) upward, a / sqrt(i) downward) and projects
    back by quadrature.
    """
    if j < 1 or k < 1:
        raise ValueError("space indices must be >= 1")
    dom, cod = true_poly(j, N), true_poly(k, N)
    if method == "canonical":
        return TruncatedOperator(dom, cod, np.eye(N, dtype=complex))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    rule = _cached_rule(max(80, N + 16), max(160, 2 * N + 2 * max(j, k) + 8))
    target = fb.basis_values(k, rule.nodes, N, damped=True)
    images = []
    for m in range(N):
        p = fb.basis_function((j, m))
        for i in range(j, k):
            p = fb.raising_apply(p) * (1 / math.sqrt(i))
        for i in range(j - 1, k - 1, -1):
            p = fb.lowering_apply(p) * (1 / math.sqrt(i))
        images.append(fb.eval_poly(p, rule.nodes) * np.exp(-0.5 * np.abs(rule.nodes) ** 2))
    img = np.stack(images, axis=1)
    return TruncatedOperator(dom, cod, (target.conj().T * rule.damped_weights) @ img)


# ---------------------------------------------------------------- norms


def _mat(A) -> np.ndarray:
    return A.matrix if isinstance(A, TruncatedOperator) else np.asarray(A)


def singular_values(A) -> np.ndarray:
    """Singular values, largest first."""
    return np.linalg.svd(_mat(A), compute_uv=False)


def operator_norm(A, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    M = _mat(A)
    if M.size == 0:
        return 0.0
    if max(M.shape) <= SVD_LIMIT:
        return float(singular_values(M)[0])
    # power iteration on M^H M, deterministic start
    v = np.ones(M.shape[1], dtype=complex) / math.sqrt(M.shape[1])
    est = 0.0
    for _ in range(max_iter):
        w = M.conj().T @ (M @ v)
        nrm = np.linalg.norm(w)
        if nrm == 0:
            return 0.0
        v = w / nrm
        new = math.sqrt(nrm)
        if abs(new - est) <= tol * max(new, 1.0):
            return new
        est = new
    return est


def trace(A) -> complex:
    return complex(np.trace(_mat(A)))


def trace_norm(A) -> float:
    return float(np.sum(singular_values(A)))


def inner_norm(A, frac: float = 0.5) -> float:
    """Operator norm of the inner block of a TruncatedOperator."""
    return operator_norm(A.inner(frac))


# ---------------------------------------------------------------- blocks


def assemble_blocks(blocks: dict, space) -> TruncatedOperator:
    """Operator on F^2_n from a map (k, j) -> block; missing blocks are zero."""
    s = space if isinstance(space, SpaceTag) else full_poly(int(space))
    N = s.N
    M = np.zeros((s.dim, s.dim), dtype=complex)
    comps = s.components
    for (k, j), blk in blocks.items():
        B = _mat(blk)
        if B.shape != (N, N):
            raise ValueError(f"block ({k},{j}) has shape {B.shape}, expected {(N, N)}")
        if k not in comps or j not in comps:
            raise ValueError(f"block index ({k},{j}) outside {s}")
        ck, cj = comps.index(k), comps.index(j)
        M[ck * N : (ck + 1) * N, cj * N : (cj + 1) * N] = B
    return TruncatedOperator(s, s, M)


def extract_block(A: TruncatedOperator, k: int, j: int) -> TruncatedOperator:
    """P_(k) A restricted to F^2_(j)."""
    N = A.domain.N
    ck, cj = A.codomain.components.index(k), A.domain.components.index(j)
    M = A.matrix[ck * N : (ck + 1) * N, cj * N : (cj + 1) * N].copy()
    return TruncatedOperator(true_poly(j, N), true_poly(k, N), M)


# ---------------------------------------------------------------- serialization


def save_operator(A: TruncatedOperator, csv_path, json_path=None) -> None:
    """Write the matrix as CSV rows of ``re,im`` pairs plus a JSON metadata file."""
    csv_path = Path(csv_path)
    json_path = Path(json_path) if json_path else csv_path.with_suffix(".json")
    M = A.matrix
    with csv_path.open("w") as fh:
        for row in M:
            fh.write(",".join(f"{float(v.real)!r},{float(v.imag)!r}" for v in row) + "\n")
    meta = {
        "format": "polyqha-operator",
        "version": 1,
        "domain": A.domain.to_dict(),
        "codomain": A.codomain.to_dict(),
        "shape": list(M.shape),
    }
    json_path.write_text(json.dumps(meta, indent=2))


def load_operator(csv_path, json_path=None) -> TruncatedOperator:
    csv_path = Path(csv_path)
    json_path = Path(json_path) if json_path else csv_path.with_suffix(".json")
    meta = json.loads(json_path.read_text())
    raw = np.loadtxt(csv_path, delimiter=",", ndmin=2)
    M = raw[:, 0::2] + 1j * raw[:, 1::2]
    if list(M.shape) != meta["shape"]:
        raise ValueError("CSV shape does not match metadata")
    return TruncatedOperator(SpaceTag(**meta["domain"]), SpaceTag(**meta["codomain"]), M)
