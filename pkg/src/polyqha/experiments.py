"""Registered numerical checks with JSON/CSV reports.

Each check computes a handful of metrics, each compared against a tolerance.
Setting ``perturb`` in the config runs the check's negative control: one
input of the identity is moved by that amount, and a sound check must then
report FAIL.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import fock_basis as fb
from . import localization as lc
from . import operators as op
from . import qha
from . import regularity as rg
from .operators import SymbolSpec
from .special_functions import (
    LaguerreParams,
    build_gaussian_quadrature,
    build_lebesgue_quadrature,
    laguerre,
)

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    check_name: str
    k: int | None = None
    n: int | None = None
    N: int = op.DEFAULT_N
    xi: complex | None = None
    t: float | None = None
    grid_radial: int = 80
    grid_angular: int = 160
    lebesgue_order: int = 40
    tol: float | None = None
    seed: int = 0
    perturb: float = 0.0

    def validate(self):
        if self.check_name not in REGISTRY:
            raise ConfigError(f"unknown check {self.check_name!r}; see `polyqha list`")
        for name in ("k", "n", "N", "grid_radial", "grid_angular", "lebesgue_order"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be positive, got {v}")
        if self.t is not None and not self.t > 0:
            raise ConfigError("t must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.perturb < 0:
            raise ConfigError("perturb must be nonnegative")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.xi is not None and not np.isfinite(self.xi):
            raise ConfigError("xi must be finite")
        return self

    def params(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "check_name" or v is None:
                continue
            out[f.name] = [v.real, v.imag] if isinstance(v, complex) else v
        return out


@dataclass
class Metric:
    name: str
    value: float
    tolerance: float
    passed: bool

    def to_dict(self):
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class Report:
    check_name: str
    params: dict
    metrics: list
    runtime_ms: float
    series: dict = field(default_factory=dict)

    @property
    def overall_pass(self) -> bool:
        return all(m.passed for m in self.metrics)

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "check_name": self.check_name,
            "params": self.params,
            "metrics": [m.to_dict() for m in self.metrics],
            "overall_pass": self.overall_pass,
            "runtime_ms": self.runtime_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _Recorder:
    """Collects metrics; ``--tol`` overrides the tolerance of primary metrics."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.metrics: list[Metric] = []
        self.series: dict[str, list] = {}

    def at_most(self, name, value, tol, primary=True):
        tol = self.cfg.tol if (primary and self.cfg.tol is not None) else tol
        value = float(value)
        self.metrics.append(Metric(name, value, float(tol), bool(value <= tol)))

    def at_least(self, name, value, bound):
        value = float(value)
        self.metrics.append(Metric(name, value, float(bound), bool(value >= bound)))

    def add_series(self, name, xs, ys):
        self.series[name] = [(float(x), float(y)) for x, y in zip(xs, ys)]


@dataclass(frozen=True)
class Check:
    name: str
    description: str
    anchor: str
    control: str
    func: Callable = field(repr=False)


REGISTRY: dict[str, Check] = {}


def register(name, description, anchor, control):
    def deco(func):
        REGISTRY[name] = Check(name, description, anchor, control, func)
        return func

    return deco


def _lag(k, x):
    return laguerre(LaguerreParams(k - 1, 0), x)


def _points(rng, count, radius):
    r = radius * np.sqrt(rng.uniform(size=count))
    return r * np.exp(2j * np.pi * rng.uniform(size=count))


def _nine_point_grid(radius=2.0):
    pts = [0j] + [radius * np.exp(2j * np.pi * a / 8) * s for a, s in zip(range(8), [1, 0.5] * 4)]
    return np.array(pts)


def _gauss_rule(cfg):
    return build_gaussian_quadrature(cfg.grid_radial, cfg.grid_angular)


def _ks(cfg, default):
    return [cfg.k] if cfg.k is not None else list(default)


# ---------------------------------------------------------------- checks


@register("pairing", "kernel pairing formula and basis integrity",
          "normalized kernel pairing identity", "closed form evaluated at z + perturb")
def _pairing(cfg, rec):
    eps = cfg.perturb
    rule = _gauss_rule(cfg)
    ks = _ks(cfg, (1, 2, 3))
    pts = _nine_point_grid()
    coeff_err = quad_err = recon_err = gram_err = 0.0
    for k in ks:
        V = fb.basis_values(k, rule.nodes, 17)
        gram = (V.conj().T * rule.damped_weights) @ V
        gram_err = max(gram_err, np.abs(gram - np.eye(17)).max())
        # kernels sampled pointwise from the closed form, Gaussian factor folded in
        nodes = rule.nodes[:, None]
        Kq = _lag(k, np.abs(nodes - pts) ** 2) * np.exp(
            nodes * np.conj(pts) - 0.5 * np.abs(nodes) ** 2 - 0.5 * np.abs(pts) ** 2
        )
        for a, z in enumerate(pts):
            cz = fb.normalized_kernel_coeffs(k, z, cfg.N)
            for b, w in enumerate(pts):
                ref = qha.pairing_closed_form(k, z + eps, w)
                cw = fb.normalized_kernel_coeffs(k, w, cfg.N)
                coeff_err = max(coeff_err, abs(np.vdot(cw, cz) - ref))
                quad = np.sum(rule.damped_weights * Kq[:, a] * np.conj(Kq[:, b]))
                quad_err = max(quad_err, abs(quad - ref))
                full = fb.basis_values(k, z, cfg.N, damped=False) @ fb.basis_values(k, w, cfg.N, damped=False).conj()
                recon_err = max(recon_err, abs(full - fb.reproducing_kernel(k, z + eps, w)))
    rec.at_most("coefficient_pairing_error", coeff_err, 1e-9)
    rec.at_most("quadrature_pairing_error", quad_err, 1e-9)
    rec.at_most("kernel_reconstruction_error", recon_err, 1e-6, primary=False)
    rec.at_most("gram_deviation", gram_err, 1e-9, primary=False)


@register("shifted-kernel", "Weyl shifts of kernels, parity, and the CCR",
          "shifted kernel identity", "reference kernel and phase at z + perturb")
def _shifted_kernel(cfg, rec):
    eps = cfg.perturb
    rng = np.random.default_rng(cfg.seed)
    ks = _ks(cfg, (1, 2, 3))
    shift_err = parity_err = ccr_err = 0.0
    zs, ws = _points(rng, 5, 1.5), _points(rng, 5, 1.5)
    for k in ks:
        space = op.true_poly(k, cfg.N)
        U = op.parity_matrix(space).matrix
        for z, w in zip(zs, ws):
            W = op.weyl_matrix(space, z).matrix
            lhs = W @ op.kernel_vector(space, w)
            ze = z + eps
            rhs = np.exp(-1j * np.imag(ze * np.conj(w))) * op.kernel_vector(space, ze + w)
            shift_err = max(shift_err, np.abs(lhs - rhs).max())
            parity_err = max(parity_err, np.abs(U @ op.kernel_vector(space, z) - op.kernel_vector(space, -z - eps)).max())
    h = cfg.N // 2
    for z, w in zip(zs, ws):
        Wz, Ww = op.weyl_block(z, cfg.N), op.weyl_block(w, cfg.N)
        Wzw = op.weyl_block(z + w + eps, cfg.N)
        diff = (Wz @ Ww - np.exp(-1j * qha.sigma(z, w) / 2) * Wzw)[:h, :h]
        ccr_err = max(ccr_err, op.operator_norm(diff))
    rec.at_most("shifted_kernel_error", shift_err, 1e-7)
    rec.at_most("parity_kernel_error", parity_err, 1e-10, primary=False)
    rec.at_most("ccr_inner_block_error", ccr_err, 1e-6)


@register("prop-identities", "Fourier-Weyl, convolution and symplectic transforms of rank-one kernels",
          "rank-one convolution identities (a)-(c)", "closed forms evaluated at z + perturb")
def _prop_identities(cfg, rec):
    eps = cfg.perturb
    rng = np.random.default_rng(cfg.seed)
    ks = _ks(cfg, (1, 2, 3))
    ea = eb = ec = 0.0
    for k in ks:
        zs, ws, xs = _points(rng, 6, 1.5), _points(rng, 6, 1.5), _points(rng, 6, 1.5)
        for z, w, xi in zip(zs, ws, xs):
            A = op.rank_one(op.true_poly(k, cfg.N), z, w)
            ea = max(ea, abs(qha.fourier_weyl(A, xi) - qha.fourier_weyl_rank_one(k, z + eps, w, xi)))
            eb = max(eb, abs(qha.convolve_op_op(A, A, xi) - qha.convolution_rank_one(k, z + eps, w, xi)))
        for z, w, xi in zip(zs[:3], ws[:3], xs[:3]):
            rule = build_lebesgue_quadrature(1.0, max(cfg.lebesgue_order, 60), center=z + w)
            f = qha.PhaseFunction(lambda u, z=z, w=w: qha.convolution_rank_one(k, z, w, u))
            val = qha.symplectic_fourier(f, xi, rule=rule)
            ec = max(ec, abs(val - qha.symplectic_rank_one(k, z + eps, w, xi)))
    rec.at_most("fourier_weyl_error", ea, 1e-6)
    rec.at_most("convolution_error", eb, 1e-6)
    rec.at_most("symplectic_fourier_error", ec, 1e-4, primary=False)


@register("toeplitz-character", "Toeplitz operators of characters are multiples of Weyl operators",
          "Weyl operators as Toeplitz operators", "reference Weyl operator at -xi + perturb")
def _toeplitz_character(cfg, rec):
    eps = cfg.perturb
    ks = _ks(cfg, (1, 2, 3))
    if cfg.xi is not None:
        xis = [cfg.xi]
    else:
        xis = [r * np.exp(1j * a) for r, a in zip(np.linspace(0.2, 2.0, 10), np.linspace(0, 2 * np.pi, 10, endpoint=False))]
    rule = _gauss_rule(cfg)
    err = 0.0
    for k in ks:
        for xi in xis:
            T = op.toeplitz_matrix(k, SymbolSpec.character(xi), cfg.N, rule=rule)
            r2 = abs(xi) ** 2
            ref = _lag(k, r2) * math.exp(-r2 / 2) * op.weyl_matrix(k, -xi + eps, cfg.N)
            err = max(err, op.operator_norm((T - ref).inner()))
            rec.series.setdefault("error_vs_abs_xi", []).append((abs(xi), err))
    rec.at_most("toeplitz_weyl_error", err, 1e-5)


@register("vanishing-toeplitz", "a nonzero symbol whose Toeplitz operator vanishes on F(k)",
          "vanishing Toeplitz operators for k > 1", "symbol built at xi + perturb")
def _vanishing(cfg, rec):
    k = cfg.k or 2
    if k < 2 and cfg.xi is None:
        raise ConfigError("vanishing-toeplitz needs k >= 2 or an explicit --xi")
    xis = [cfg.xi] if cfg.xi is not None else list(rg.sigma_set(k).radii)
    rule = _gauss_rule(cfg)
    for i, xi in enumerate(xis):
        f = rg.witness_symbol(xi + cfg.perturb)
        T = op.toeplitz_matrix(k, f, cfg.N, rule=rule)
        T1 = op.toeplitz_matrix(1, f, cfg.N, rule=rule)
        W = op.weyl_matrix(1, xi, cfg.N)
        sfx = "" if len(xis) == 1 else f"_{i}"
        rec.at_most("toeplitz_norm" + sfx, op.operator_norm(T.inner()), 1e-6)
        rec.at_most("weyl_check_k1" + sfx, op.operator_norm((T1 - W).inner()), 1e-6)


@register("berezin-kernel", "Berezin transform of Weyl operators vanishes exactly on Sigma_k",
          "kernel of the Berezin transform", "Weyl parameter moved to |xi| + perturb")
def _berezin_kernel(cfg, rec):
    eps = cfg.perturb
    k = cfg.k or 2
    sig = rg.sigma_set(k)
    zs = np.concatenate([[0j], (np.linspace(0.25, 2, 8)[:, None] * np.exp(2j * np.pi * np.arange(8) / 8)).ravel()])
    space = op.true_poly(k, cfg.N)

    def berezin_abs(xi):
        return np.abs(qha.berezin(op.weyl_matrix(space, xi), zs))

    if cfg.xi is not None:
        xi = cfg.xi + eps
        vals = berezin_abs(xi)
        ref = abs(_lag(k, abs(cfg.xi) ** 2)) * math.exp(-abs(cfg.xi) ** 2 / 2)
        tails = np.array([op.kernel_vector(space, z) for z in zs])
        tail = float(np.max(1 - np.sum(np.abs(tails) ** 2, axis=1)))
        rec.at_most("closed_form_modulus_error", np.abs(vals - ref).max(), 1e-6 + tail)
        if sig.distance(abs(cfg.xi)) <= 1e-6:
            rec.at_most("max_abs_berezin", vals.max(), 1e-6)
        else:
            rec.at_least("min_abs_berezin", vals.min(), 1e-3)
        return
    if not sig.radii:
        raise ConfigError("Sigma_1 is empty; pass --k >= 2 or an explicit --xi")
    worst_on = 0.0
    worst_off = math.inf
    for r in sig.radii:
        for ang in (0.0, 0.9, 2.3):
            worst_on = max(worst_on, berezin_abs((r + eps) * np.exp(1j * ang)).max())
        for off in (r - 0.2, r + 0.2):
            if off > 0 and sig.distance(off) >= 0.2 - 1e-12:
                worst_off = min(worst_off, berezin_abs(off + eps).min())
    rec.at_most("max_abs_on_sigma", worst_on, 1e-6)
    rec.at_least("min_abs_off_sigma", worst_off, 1e-3)


@register("berezin-toeplitz-chain", "(k0 x k0) * f equals pi times the Toeplitz operator of f",
          "Toeplitz operators as convolutions", "Toeplitz symbol parameter moved by perturb")
def _chain(cfg, rec):
    eps = cfg.perturb
    ks = _ks(cfg, (1, 2))
    symbols = [
        (SymbolSpec.gaussian(1.0), SymbolSpec.gaussian(1.0 + eps)),
        (SymbolSpec.gaussian(0.3), SymbolSpec.gaussian(0.3 + eps)),
        (SymbolSpec.character(0.7 + 0.2j), SymbolSpec.character(0.7 + 0.2j + eps)),
    ]
    if cfg.xi is not None:
        symbols.append((SymbolSpec.character(cfg.xi), SymbolSpec.character(cfg.xi + eps)))
    rule = _gauss_rule(cfg)
    err = 0.0
    for k in ks:
        P = op.rank_one(op.true_poly(k, cfg.N), 0, 0)
        for f, g in symbols:
            order = cfg.lebesgue_order if f.family is op.SymbolFamily.GAUSSIAN else max(cfg.lebesgue_order, 64)
            C = qha.convolve_fn_op(f, P, order=order)
            T = op.toeplitz_matrix(k, g, cfg.N, rule=rule)
            err = max(err, op.operator_norm((C - math.pi * T).inner()))
    rec.at_most("chain_error", err, 1e-5)


HEAT_TS = (0.8, 0.4, 0.2, 0.1, 0.05)


@register("heat-approximation", "g_t * A converges to A as t -> 0",
          "heat-kernel approximation", "closed forms evaluated at t + perturb")
def _heat(cfg, rec):
    eps = cfg.perturb
    k = cfg.k or 1
    space = op.true_poly(k, cfg.N)
    w = 0.3
    ops = {
        "weyl": op.weyl_matrix(space, w),
        "rank_one": op.rank_one(space, 0, 0),
        "toeplitz_gaussian": op.toeplitz_matrix(k, SymbolSpec.gaussian(1.0), cfg.N),
    }
    ts = (cfg.t,) if cfg.t is not None else HEAT_TS
    closed_err = 0.0
    for name, A in ops.items():
        dists = []
        for t in ts:
            S = qha.heat_smooth(A, t, order=cfg.lebesgue_order)
            dists.append(op.operator_norm((S - A).inner()))
            if name == "weyl":
                # quarter block: at t = 0.8 the half block already feels the truncation
                closed_err = max(closed_err, np.abs((S - A * math.exp(-(t + eps) * w * w)).inner(0.25)).max())
            if name == "rank_one" and k == 1:
                closed_err = max(closed_err, abs(dists[-1] - (t + eps) / (1 + t + eps)))
        rec.add_series(f"distance_{name}", ts, dists)
        increases = sum(b > a + 1e-12 for a, b in zip(dists, dists[1:]))
        rec.at_most(f"{name}_nonmonotone_steps", increases, 0, primary=False)
        rec.at_most(f"{name}_distance_at_smallest_t", dists[-1], 0.1, primary=False)
    rec.at_most("closed_form_error", closed_err, 1e-8)


@register("regularity-scan", "zeros of the Fourier-Weyl transform of k0 x k0 sit on Sigma_k",
          "regularity of k0 x k0", "expected zero radii moved by perturb")
def _regularity(cfg, rec):
    eps = cfg.perturb
    k = cfg.k or 2
    space = op.true_poly(k, cfg.N)
    A = op.rank_one(space, 0, 0)
    grid = rg.PolarGrid()
    res = rg.regularity_scan(A, grid)
    sig = rg.sigma_set(k)
    if k == 1:
        rec.at_least("min_abs_fourier_weyl", res.min_abs, math.exp(-4.5) * (1 - 1e-6) + eps)
    # sign changes along the positive ray, then bisection
    radii = np.concatenate([[0.0], grid.radii])
    vals = np.real(qha.fourier_weyl(A, radii.astype(complex)))
    roots = []
    for a, b, fa, fb_ in zip(radii, radii[1:], vals, vals[1:]):
        if fa == 0:
            roots.append(a)
        elif fa * fb_ < 0:
            lo, hi, flo = a, b, fa
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                fm = qha.fourier_weyl(A, complex(mid)).real
                if fm * flo <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
    if vals[-1] == 0:
        roots.append(radii[-1])
    rec.at_most("root_count_mismatch", abs(len(roots) - len(sig.radii)), 0, primary=False)
    root_err = max((abs(a - (b + eps)) for a, b in zip(roots, sig.radii)), default=0.0)
    rec.at_most("root_radius_error", root_err, 1e-4)
    proxy = rg.infty_regularity_scan(A, grid)
    rec.at_least("infty_regular_proxy", float(proxy.complement_dense_proxy), 1.0)
    # heat-smoothed operator with Gaussian Fourier-Weyl transform, squared
    G = qha.heat_smooth(op.rank_one(op.true_poly(1, cfg.N), 0, 0), cfg.t or 0.1)
    G2 = G @ G
    r2 = rg.regularity_scan(G2, grid)
    rec.at_least("smoothed_square_min_margin", r2.min_abs / r2.tol, 1.0)


LOC_TS = (0.5, 1.0, 2.0)


@register("localization", "kernel tail bound shape and Gaussian decay of heat-smoothed kernels",
          "kernel localization and sufficient localization", "smoothing parameter scaled by perturb")
def _localization(cfg, rec):
    n = cfg.n or 1
    Rs = np.linspace(0, 4, 21)
    fine = np.linspace(0, 4, 81)
    shape = np.array([math.log(lc.kernel_tail_norm(n, R)) + R * R / 4 for R in Rs])
    C = shape.max()
    fine_shape = np.array([math.log(lc.kernel_tail_norm(n, R)) + R * R / 4 for R in fine])
    rec.add_series("tail_shape", fine, fine_shape)
    rec.at_most("tail_shape_excess", fine_shape.max() - C, 0.05, primary=False)
    space = op.full_poly(n, cfg.N)
    ops = {
        "identity": op.identity(space),
        "parity": op.parity_matrix(space),
        "weyl": op.weyl_matrix(space, 0.3),
        "rank_one": op.rank_one(space, 0, 0),
    }
    ts = (cfg.t,) if cfg.t is not None else LOC_TS
    worst = math.inf
    for t in ts:
        t_used = t * cfg.perturb if cfg.perturb > 0 else t
        for name, A in ops.items():
            prof = lc.heat_smoothed_decay(A, t_used)
            worst = min(worst, prof.rate - (lc.expected_rate(t) - 0.05))
            rec.add_series(f"profile_{name}_t{t:g}", prof.separations, prof.values)
    rec.at_least("decay_rate_margin", worst, 0.0)


@register("partition-demo", "block diagnostics on F^2_2: M_max regularity and partition classes",
          "compactness on F^2_n via block regularity", "one block of the regular operator moved by perturb")
def _partition(cfg, rec):
    n = cfg.n or 2
    Mmax, Mmin = rg.Partition.maximal(n), rg.Partition.minimal(n)
    L = rg.kernel_block_operator(n, cfg.N, "l")
    if cfg.perturb:
        M = L.matrix.copy()
        M[cfg.N, 0] += cfg.perturb  # block (2,1), entry (0,0)
        L = op.TruncatedOperator(L.domain, L.codomain, M)
    K = rg.kernel_block_operator(n, cfg.N, "k")
    grid = rg.PolarGrid()
    rl = rg.m_regularity_scan(L, Mmax, grid)
    rk = rg.m_regularity_scan(K, Mmax, grid)
    rec.at_least("l_blocks_m_max_regular", float(rl.passed), 1.0)
    rec.at_least("l_blocks_respect_m_min", float(rg.respects_partition(L, Mmin)), 1.0)
    rec.at_least("k_blocks_not_m_max_regular", float(not rk.passed), 1.0)
    on_circle = [p for p in rk.zero_points() if abs(abs(p) - 1.0) < 1e-9]
    rec.at_least("k_block_zero_points_on_unit_circle", len(on_circle), 1)
    # Toeplitz operator on F^2_n versus the operator built from its (1,1) block
    T = op.toeplitz_matrix(op.full_poly(n, cfg.N), SymbolSpec.gaussian(1.0))
    B = op.extract_block(T, 1, 1).matrix
    S = op.assemble_blocks({(k, j): B for k in range(1, n + 1) for j in range(1, n + 1)}, op.full_poly(n, cfg.N))
    rec.at_least("toeplitz_differs_from_m_min_structure", float(not rg.respects_partition(T, Mmin, 1e-6)), 1.0)
    rec.at_least("transported_block_respects_m_min", float(rg.respects_partition(S, Mmin)), 1.0)


@register("berezin-decay", "generalized Berezin transform of a compact operator decays",
          "compactness via generalized Berezin decay", "identity times perturb added to the operator")
def _berezin_decay(cfg, rec):
    k = cfg.k or 2
    space = op.true_poly(k, cfg.N)
    A = op.rank_one(space, 0.5, -0.3j)
    if cfg.perturb:
        A = A + op.identity(space) * cfg.perturb
    Rs = np.linspace(0, 4, 17)
    ang = np.exp(2j * np.pi * np.arange(16) / 16)
    sup = [np.abs(qha.generalized_berezin(A, k, k, R * ang)).max() for R in Rs]
    rec.add_series("sup_abs_vs_R", Rs, sup)
    C, rate = lc.gaussian_fit(Rs, sup, fit_range=(1.0, 4.0))
    rec.at_most("sup_at_R4", sup[-1], 1e-4)
    rec.at_least("fitted_gaussian_rate", rate, 0.0)
    W = op.weyl_matrix(space, 0.5)
    contrast = np.abs(qha.generalized_berezin(W, k, k, 4 * ang)).min()
    rec.at_least("noncompact_contrast_at_R4", contrast, 1e-2)


# ---------------------------------------------------------------- running and output


def run(check_name: str, config: ExperimentConfig | None = None) -> Report:
    cfg = config or ExperimentConfig(check_name)
    cfg.check_name = check_name
    cfg.validate()
    rec = _Recorder(cfg)
    start = time.perf_counter()
    REGISTRY[check_name].func(cfg, rec)
    runtime = (time.perf_counter() - start) * 1e3
    return Report(check_name, cfg.params(), rec.metrics, round(runtime, 3), rec.series)


def write_json(report: Report, path) -> None:
    Path(path).write_text(report.to_json() + "\n")


def write_csv(report: Report, path) -> Path | None:
    """Metrics table at ``path``; series (if any) at ``<stem>_series.csv``."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "value", "tolerance", "pass"])
        for m in report.metrics:
            w.writerow([m.name, repr(m.value), repr(m.tolerance), int(m.passed)])
    if not report.series:
        return None
    spath = path.with_name(path.stem + "_series.csv")
    with spath.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["series", "x", "y"])
        for name, pts in report.series.items():
            for x, y in pts:
                w.writerow([name, repr(x), repr(y)])
    return spath


def write_plot_script(report: Report, csv_path, script_path) -> None:
    """A gnuplot script plotting each series (or the metric table) from the CSV files."""
    csv_path = Path(csv_path)
    lines = ["set datafile separator ','", "set key outside", f"set title '{report.check_name}'"]
    if report.series:
        spath = csv_path.with_name(csv_path.stem + "_series.csv")
        lines.append("set logscale y")
        plots = [
            f"'{spath.name}' using 2:(strcol(1) eq '{name}' ? abs($3) : 1/0) with linespoints title '{name}'"
            for name in report.series
        ]
        lines.append("plot " + ", \\\n     ".join(plots))
    else:
        lines += ["set logscale y", "set style data histograms",
                  f"plot '{csv_path.name}' using (abs($2)):xtic(1) skip 1 title 'value', "
                  f"'' using (abs($3)) skip 1 title 'tolerance'"]
    Path(script_path).write_text("\n".join(lines) + "\n")
