"""Quantum harmonic analysis on a single true-poly space (and blockwise on F^2_n).

Shifts, the function/operator convolutions, Fourier transforms, Berezin
transforms, heat smoothing and the continuity modulus of the shift action.
Integrals over C use tensor Gauss-Hermite rules in Lebesgue measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import operators as op
from .operators import QuadratureInsufficient, SymbolFamily, SymbolSpec, TruncatedOperator
from .special_functions import LaguerreParams, Measure, QuadratureRule, build_lebesgue_quadrature, laguerre

LEBESGUE_ORDER = 40
CHUNK = 128


def sigma(z, w):
    """Symplectic form 2 Im(z conj(w))."""
    return 2 * np.imag(np.asarray(z) * np.conj(w))


@dataclass(frozen=True)
class PhaseFunction:
    """A function on C together with the length scale of its Gaussian decay.

    ``scale`` is the width used to place Gauss-Hermite nodes; ``integrable``
    is False for bounded but non-decaying functions (characters, constants),
    whose convolutions only converge against decaying operators.
    """

    func: Callable = field(repr=False)
    scale: float = 1.0
    integrable: bool = True
    label: str = "f"
    l1_norm: float | None = None

    def __call__(self, z):
        return np.asarray(self.func(np.asarray(z, dtype=complex)), dtype=complex)

    @classmethod
    def gaussian(cls, t: float):
        if not t > 0:
            raise ValueError("t must be positive")
        spec = SymbolSpec.gaussian(t)
        return cls(spec, scale=math.sqrt(t), label=f"g_{t:g}", l1_norm=1.0)

    @classmethod
    def from_symbol(cls, spec: SymbolSpec):
        if spec.family is SymbolFamily.GAUSSIAN:
            return cls(spec, scale=math.sqrt(spec.param), label=str(spec.family.value),
                       l1_norm=abs(spec.scale))
        integrable = spec.family is SymbolFamily.DISK_INDICATOR
        l1 = abs(spec.scale) * math.pi * spec.param**2 if integrable else None
        return cls(spec, scale=1.0, integrable=integrable, label=str(spec.family.value), l1_norm=l1)


def _as_phase(f) -> PhaseFunction:
    if isinstance(f, PhaseFunction):
        return f
    if isinstance(f, SymbolSpec):
        return PhaseFunction.from_symbol(f)
    if callable(f):
        return PhaseFunction(f)
    raise TypeError(f"cannot interpret {type(f).__name__} as a phase-space function")


def heat_kernel(t: float) -> PhaseFunction:
    return PhaseFunction.gaussian(t)


# ---------------------------------------------------------------- shifts


def _conjugate_batch(A: TruncatedOperator, W: np.ndarray) -> np.ndarray:
    """W A W^H for a batch of Weyl blocks W (B, N, N), blockwise on F^2_n."""
    N = A.domain.N
    nc, nd = len(A.codomain.components), len(A.domain.components)
    A4 = A.matrix.reshape(nc, N, nd, N).transpose(0, 2, 1, 3)
    out = W[:, None, None] @ A4[None] @ W.conj().transpose(0, 2, 1)[:, None, None]
    return out.transpose(0, 1, 3, 2, 4).reshape(W.shape[0], nc * N, nd * N)


def shift(A: TruncatedOperator, z: complex) -> TruncatedOperator:
    """alpha_z(A) = W_z A W_{-z}."""
    W = op.weyl_block(np.array([complex(z)]), A.domain.N)
    return TruncatedOperator(A.domain, A.codomain, _conjugate_batch(A, W)[0])


# ---------------------------------------------------------------- convolutions


def lebesgue_rule_for(f, order: int = LEBESGUE_ORDER) -> QuadratureRule:
    return build_lebesgue_quadrature(_as_phase(f).scale, order)


def convolve_fn_op(f, A: TruncatedOperator, rule: QuadratureRule | None = None,
                   order: int | None = None, tail_tol: float | None = 1e-6) -> TruncatedOperator:
    """f * A = int f(z) alpha_z(A) dz by quadrature.

    For bounded non-decaying f the integral converges only through the decay
    of alpha_z(A), so the default order rises from 40 to 64 per axis.  With ``tail_tol`` set, the contribution of the outermost nodes is checked
    against the result; a large share means the rule does not capture the
    decay of the integrand and QuadratureInsufficient is raised.
    """
    f = _as_phase(f)
    if rule is None:
        if order is None:
            order = LEBESGUE_ORDER if f.integrable else 64
        rule = build_lebesgue_quadrature(f.scale, order)
    if rule.measure is not Measure.LEBESGUE:
        raise ValueError("function-operator convolution needs a Lebesgue rule")
    fw = rule.weights * f(rule.nodes)
    radius = np.abs(rule.nodes)
    outer = radius >= 0.8 * radius.max()
    total = np.zeros_like(A.matrix)
    edge = np.zeros_like(A.matrix)
    live = np.flatnonzero(np.abs(fw) > 0)
    for start in range(0, live.size, CHUNK):
        idx = live[start : start + CHUNK]
        W = op.weyl_block(rule.nodes[idx], A.domain.N)
        terms = _conjugate_batch(A, W) * fw[idx, None, None]
        total += terms.sum(axis=0)
        edge += terms[outer[idx]].sum(axis=0) if np.any(outer[idx]) else 0
    if tail_tol is not None:
        scale = max(np.abs(total).max(), 1e-300)
        if np.abs(edge).max() > tail_tol * max(scale, 1.0):
            raise QuadratureInsufficient(
                f"outer nodes contribute {np.abs(edge).max():.2e}; integrand not captured by the rule"
            )
    return TruncatedOperator(A.domain, A.codomain, total)


def convolution_error_estimate(f, A: TruncatedOperator, order: int = LEBESGUE_ORDER) -> float:
    """Max entry difference of f * A between Gauss-Hermite orders ``order`` and 1.5 * order."""
    a = convolve_fn_op(f, A, order=order, tail_tol=None)
    b = convolve_fn_op(f, A, order=int(1.5 * order), tail_tol=None)
    return float(np.abs(a.matrix - b.matrix).max())


def heat_smooth(A: TruncatedOperator, t: float, rule: QuadratureRule | None = None,
                order: int | None = None) -> TruncatedOperator:
    """g_t * A with g_t(z) = exp(-|z|^2/t) / (pi t)."""
    if not t > 0:
        raise ValueError("t must be positive")
    return convolve_fn_op(PhaseFunction.gaussian(t), A, rule=rule, order=order)


def _qha_parity(space) -> np.ndarray:
    # (-1)^m on every component: differs from f(z) -> f(-z) by (-1)^{k-1} per
    # component, which keeps A_{k,j} U_j = U_k A_{k,j} with identity intertwiners
    return np.tile((-1.0) ** np.arange(space.N), len(space.components))


def convolve_op_op(A: TruncatedOperator, B: TruncatedOperator, z) -> complex | np.ndarray:
    """A * B(z) = tr(A W_z U B U W_{-z}); vectorized over ``z``."""
    if A.matrix.shape != B.matrix.shape[::-1]:
        raise ValueError(f"shape mismatch {A.matrix.shape} vs {B.matrix.shape}")
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    uc, ud = _qha_parity(B.codomain), _qha_parity(B.domain)
    UBU = TruncatedOperator(B.domain, B.codomain, uc[:, None] * B.matrix * ud[None, :])
    out = np.empty(zs.shape, dtype=complex)
    flat = zs.ravel()
    res = out.ravel()
    for start in range(0, flat.size, CHUNK):
        W = op.weyl_block(flat[start : start + CHUNK], A.domain.N)
        S = _conjugate_batch(UBU, W)
        res[start : start + CHUNK] = np.einsum("ij,bji->b", A.matrix, S)
    out = res.reshape(zs.shape)
    return complex(out[0]) if np.ndim(z) == 0 else out


# ---------------------------------------------------------------- Fourier transforms


def fourier_weyl(A: TruncatedOperator, xi) -> complex | np.ndarray:
    """F_W(A)(xi) = tr(A W_xi); vectorized over ``xi``."""
    xs = np.atleast_1d(np.asarray(xi, dtype=complex))
    N = A.domain.N
    flat = xs.ravel()
    res = np.empty(flat.shape, dtype=complex)
    if A.domain.kind == "full":
        comps = [c for c in A.domain.components if c in A.codomain.components]
        blocks = [op.extract_block(A, c, c).matrix for c in comps]
    else:
        # between true-poly spaces the intertwiner is the identity matrix
        blocks = [A.matrix]
    for start in range(0, flat.size, CHUNK):
        W = op.weyl_block(flat[start : start + CHUNK], N)
        res[start : start + CHUNK] = sum(np.einsum("ij,bji->b", blk, W) for blk in blocks)
    out = res.reshape(xs.shape)
    return complex(out[0]) if np.ndim(xi) == 0 else out


def symplectic_fourier(f, xi, rule: QuadratureRule | None = None, order: int = 60) -> complex | np.ndarray:
    """F_sigma(f)(xi) = (1/pi) int exp(-i sigma(xi, z)) f(z) dz."""
    f = _as_phase(f)
    if not f.integrable:
        raise QuadratureInsufficient("symplectic Fourier transform needs an integrable function")
    if rule is None:
        rule = build_lebesgue_quadrature(f.scale, order)
    if rule.measure is not Measure.LEBESGUE:
        raise ValueError("symplectic Fourier transform needs a Lebesgue rule")
    xs = np.atleast_1d(np.asarray(xi, dtype=complex))
    fw = rule.weights * f(rule.nodes)
    phase = np.exp(-1j * sigma(xs.ravel()[:, None], rule.nodes[None, :]))
    out = (phase @ fw / math.pi).reshape(xs.shape)
    return complex(out[0]) if np.ndim(xi) == 0 else out


# ---------------------------------------------------------------- Berezin transforms


def berezin(A: TruncatedOperator, z) -> complex | np.ndarray:
    """<A k_z, k_z> with the normalized kernel of A's space; vectorized over ``z``."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    K = np.stack([op.kernel_vector(A.domain, zz) for zz in zs.ravel()], axis=1)
    vals = np.einsum("ib,ij,jb->b", K.conj(), A.matrix, K).reshape(zs.shape)
    return complex(vals[0]) if np.ndim(z) == 0 else vals


def generalized_berezin(A: TruncatedOperator, j: int, k: int, z) -> complex | np.ndarray:
    """<A l_{z,j}, l_{z,k}> with l_{z,k} = A_{k,1} k_{z,(1)}.

    ``A`` acts on F^2_n (components j and k are picked out) or maps F^2_(j)
    to F^2_(k) directly.
    """
    if A.domain.kind == "full":
        if j not in A.domain.components or k not in A.codomain.components:
            raise ValueError(f"component indices ({j},{k}) out of range for {A.domain}")
        M = op.extract_block(A, k, j).matrix
    else:
        if (A.domain.index, A.codomain.index) != (j, k):
            raise ValueError(f"operator maps F({A.domain.index}) -> F({A.codomain.index}), not F({j}) -> F({k})")
        M = A.matrix
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    from .fock_basis import normalized_kernel_coeffs

    L = np.stack([normalized_kernel_coeffs(1, zz, A.domain.N) for zz in zs.ravel()], axis=1)
    vals = np.einsum("ib,ij,jb->b", L.conj(), M, L).reshape(zs.shape)
    return complex(vals[0]) if np.ndim(z) == 0 else vals


# ---------------------------------------------------------------- continuity modulus


@dataclass(frozen=True)
class C1Report:
    deltas: list
    moduli: list
    sample_count: int

    def to_dict(self):
        return {"deltas": list(self.deltas), "moduli": list(self.moduli), "sample_count": self.sample_count}


def c1_modulus(A: TruncatedOperator, deltas, samples_per_circle: int = 16, frac: float = 0.5) -> C1Report:
    """omega(delta) ~ sup_{|z| <= delta} ||alpha_z(A) - A|| on the inner block.

    Each circle |z| = delta gets equispaced deterministic samples; moduli are
    cumulative maxima over the sampled circles, i.e. sups over a sampled disk.
    """
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas):
        raise ValueError("deltas must be positive")
    order = np.argsort(deltas)
    angles = np.exp(2j * np.pi * np.arange(samples_per_circle) / samples_per_circle)
    per_circle = {}
    for d in deltas:
        W = op.weyl_block(d * angles, A.domain.N)
        shifted = _conjugate_batch(A, W)
        rows, cols = op.inner_indices(A.codomain, frac), op.inner_indices(A.domain, frac)
        per_circle[d] = max(
            op.operator_norm((S - A.matrix)[np.ix_(rows, cols)]) for S in shifted
        )
    moduli = [0.0] * len(deltas)
    running = 0.0
    for i in order:
        running = max(running, per_circle[deltas[i]])
        moduli[i] = running
    return C1Report(deltas, moduli, samples_per_circle)


# ---------------------------------------------------------------- closed forms


def _lag(k, x):
    return laguerre(LaguerreParams(k - 1, 0), x)


def _out(v):
    v = np.asarray(v, dtype=complex)
    return complex(v) if v.ndim == 0 else v


def pairing_closed_form(k: int, z, w):
    """<k_{z,(k)}, k_{w,(k)}>."""
    z, w = np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    return _out(np.exp(-(np.abs(z) ** 2 + np.abs(w) ** 2) / 2 + w * np.conj(z)) * _lag(k, np.abs(w - z) ** 2))


def fourier_weyl_rank_one(k: int, z, w, xi):
    """F_W(k_z (x) k_w)(xi) in closed form."""
    z, w, xi = (np.asarray(a, dtype=complex) for a in (z, w, xi))
    d = np.abs(w - xi - z) ** 2
    ph = np.imag(z * np.conj(xi)) + np.imag(w * (np.conj(xi) + np.conj(z)))
    return _out(_lag(k, d) * np.exp(-d / 2 + 1j * ph))


def convolution_rank_one(k: int, z, w, u):
    """(k_z (x) k_w) * (k_z (x) k_w)(u) in closed form."""
    z, w, u = (np.asarray(a, dtype=complex) for a in (z, w, u))
    d = np.abs(w + z - u) ** 2
    ph = np.imag(z * np.conj(u)) + np.imag(u * np.conj(w)) + np.imag(w * np.conj(z))
    return _out(_lag(k, d) ** 2 * np.exp(-d - 2j * ph))


def symplectic_rank_one(k: int, z, w, xi):
    """F_sigma of the previous function, which equals F_W(k_z (x) k_w)(xi)^2."""
    z, w, xi = (np.asarray(a, dtype=complex) for a in (z, w, xi))
    d = np.abs(w - z - xi) ** 2
    ph = np.imag(z * np.conj(xi) + w * np.conj(xi) + w * np.conj(z))
    return _out(_lag(k, d) ** 2 * np.exp(-d + 2j * ph))
