import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyqha import operators as op
from polyqha import qha
from polyqha.fock_basis import BivariatePolynomial
from polyqha.operators import QuadratureInsufficient, SymbolSpec
from polyqha.qha import PhaseFunction, sigma
from polyqha.special_functions import LaguerreParams, build_lebesgue_quadrature, gaussian_polynomial_integral, laguerre

from conftest import inner_err


def complexes(radius):
    return st.builds(
        lambda r, a: complex(r * np.exp(1j * a)),
        st.floats(0, radius, allow_nan=False),
        st.floats(0, 2 * math.pi, allow_nan=False),
    )


def grid(radius, n=4):
    r = np.linspace(0, radius, n)
    return [complex(x * np.exp(1j * a)) for x in r for a in (0.3, 2.1, 4.4)]


# ---------------------------------------------------------------- shifts


def test_shift_identity():
    I = op.identity(2)
    assert np.abs(qha.shift(I, 0.8 - 0.4j).inner() - np.eye(32)).max() <= 1e-8


@given(complexes(1.5), st.integers(1, 3))
def test_shift_rank_one(z, k):
    S = qha.shift(op.rank_one(k, 0, 0), z)
    assert np.abs(S.matrix - op.rank_one(k, z, z).matrix).max() <= 1e-7


@given(complexes(1.5))
def test_shift_group_action(z):
    A = op.toeplitz_matrix(1, SymbolSpec.gaussian(0.5))
    back = qha.shift(qha.shift(A, z), -z)
    assert inner_err(back, A) <= 1e-7
    assert op.inner_norm(qha.shift(A, z)) == pytest.approx(op.inner_norm(A), abs=1e-6)


# ---------------------------------------------------------------- function-operator convolution


def test_gaussian_convolved_with_identity():
    # nodes out to |z| ~ 4 push the truncation band into the N/2 block, so
    # compare on the inner quarter
    out = qha.convolve_fn_op(SymbolSpec.gaussian(1.0), op.identity(1))
    assert np.abs(out.inner(0.25) - np.eye(16)).max() <= 1e-6


def test_heat_preserves_trace_of_rank_one():
    A = op.rank_one(2, 0, 0)
    out = qha.heat_smooth(A, 1.0)
    assert op.trace(out) == pytest.approx(1.0, abs=1e-6)
    assert op.trace_norm(out) <= 1.0 * op.trace_norm(A) * 1.05


def test_heat_smooth_identity():
    out = qha.heat_smooth(op.identity(3), 0.3)
    assert np.abs(out.inner() - np.eye(32)).max() <= 1e-8


def test_heat_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        qha.heat_smooth(op.identity(1, 8), 0.0)
    with pytest.raises(ValueError):
        PhaseFunction.gaussian(-1.0)


def test_heat_on_weyl_closed_form():
    w, t = 0.7 - 0.2j, 0.4
    out = qha.heat_smooth(op.weyl_matrix(1, w), t)
    assert inner_err(out, op.weyl_matrix(1, w) * math.exp(-t * abs(w) ** 2), frac=0.25) <= 1e-8


@pytest.mark.parametrize("A", [op.weyl_matrix(1, 0.3), op.rank_one(1, 0, 0)], ids=["weyl", "rank_one"])
def test_heat_approximation_monotone(A):
    dist = [op.inner_norm(qha.heat_smooth(A, t) - A) for t in (0.8, 0.4, 0.2, 0.1, 0.05)]
    assert all(b <= a for a, b in zip(dist, dist[1:]))
    assert dist[-1] <= 0.1


def test_character_convolution_needs_more_nodes():
    with pytest.raises(QuadratureInsufficient):
        qha.convolve_fn_op(SymbolSpec.character(1.0), op.rank_one(1, 0, 0), order=40)


def test_convolution_error_estimate_is_small_for_heat_kernel():
    assert qha.convolution_error_estimate(PhaseFunction.gaussian(1.0), op.rank_one(1, 0, 0, 32)) <= 1e-8


def test_young_bound_operator_norm():
    A = op.weyl_matrix(1, 0.5 + 0.5j)
    out = qha.convolve_fn_op(PhaseFunction.gaussian(0.5), A)
    assert op.inner_norm(out) <= 1.0 * op.inner_norm(A) * 1.05


@pytest.mark.parametrize(
    "A", [op.rank_one(1, 0.2, -0.3j, 96), op.weyl_matrix(1, 0.4 + 0.1j, 96)], ids=["rank_one", "weyl"]
)
def test_shift_covariance(A):
    f = PhaseFunction.gaussian(0.6)
    for z in (0.5, -0.7 + 0.7j):
        lhs = qha.shift(qha.convolve_fn_op(f, A), z)
        rhs = qha.convolve_fn_op(f, qha.shift(A, z))
        assert inner_err(lhs, rhs) <= 1e-6


# ---------------------------------------------------------------- operator-operator convolution


def test_convolve_op_op_examples():
    zs = np.array(grid(1.5))
    R1 = op.rank_one(1, 0, 0)
    assert np.abs(qha.convolve_op_op(R1, R1, zs) - np.exp(-np.abs(zs) ** 2)).max() <= 1e-12
    R2 = op.rank_one(2, 0, 0)
    ref = (1 - np.abs(zs) ** 2) ** 2 * np.exp(-np.abs(zs) ** 2)
    assert np.abs(qha.convolve_op_op(R2, R2, zs) - ref).max() <= 1e-7


@settings(max_examples=15, deadline=None)
@given(complexes(1.5), complexes(1.5), complexes(1.5), st.integers(1, 3))
def test_convolution_closed_form(z, w, u, k):
    A = op.rank_one(k, z, w)
    assert abs(qha.convolve_op_op(A, A, u) - qha.convolution_rank_one(k, z, w, u)) <= 1e-6


@settings(max_examples=10, deadline=None)
@given(complexes(1.0), complexes(1.0), complexes(1.5))
def test_convolution_commutes(z, w, u):
    A = op.rank_one(2, z, w)
    B = op.toeplitz_matrix(2, SymbolSpec.gaussian(0.8))
    assert abs(qha.convolve_op_op(A, B, u) - qha.convolve_op_op(B, A, u)) <= 1e-9


def test_convolve_op_op_shape_mismatch():
    with pytest.raises(ValueError):
        qha.convolve_op_op(op.identity(1, 8), op.identity(1, 6), 0)


def integrate_convolution(A, B):
    rule = build_lebesgue_quadrature(1.0, 40)
    vals = qha.convolve_op_op(A, B, rule.nodes)
    return rule, vals


@pytest.mark.parametrize("k", [1, 2])
def test_convolution_integral_identity(k):
    A, B = op.rank_one(k, 0.3, 0.3), op.rank_one(k, -0.2j, 0.1 - 0.2j)
    rule, vals = integrate_convolution(A, B)
    assert abs(rule.integrate(vals) - math.pi * op.trace(A) * op.trace(B)) <= 1e-4
    # Young-type bound for the L^1 norm of A * B
    assert rule.integrate(np.abs(vals)).real <= math.pi * op.trace_norm(A) * op.trace_norm(B) * 1.05


# ---------------------------------------------------------------- Fourier transforms


def test_fourier_weyl_examples():
    assert qha.fourier_weyl(op.rank_one(1, 0, 0), 0) == pytest.approx(1)
    assert abs(qha.fourier_weyl(op.rank_one(2, 0, 0), np.exp(0.4j))) <= 1e-7


@given(complexes(1.5), complexes(1.5), complexes(1.5), st.integers(1, 3))
def test_fourier_weyl_closed_form(z, w, xi, k):
    val = qha.fourier_weyl(op.rank_one(k, z, w), xi)
    assert abs(val - qha.fourier_weyl_rank_one(k, z, w, xi)) <= 1e-6


def test_fourier_weyl_independent_of_k():
    A1 = op.toeplitz_matrix(1, SymbolSpec.gaussian(0.9))
    xs = np.array(grid(2.0))
    ref = qha.fourier_weyl(A1, xs)
    for k in (2, 3):
        Ak = op.intertwiner_matrix(1, k) @ A1 @ op.intertwiner_matrix(k, 1)
        assert np.abs(qha.fourier_weyl(Ak, xs) - ref).max() <= 1e-8


def test_symplectic_fourier_of_gaussian():
    one = BivariatePolynomial([[1.0]])
    for t in (0.5, 1.0, 2.0):
        for xi in (0, 0.4 - 0.9j, 1.3):
            oracle = gaussian_polynomial_integral(one, np.conj(xi), -xi, 1 / t) / (math.pi * t) / math.pi
            assert qha.symplectic_fourier(PhaseFunction.gaussian(t), xi) == pytest.approx(oracle, abs=1e-12)
            assert oracle == pytest.approx(math.exp(-t * abs(xi) ** 2) / math.pi, abs=1e-14)


def test_symplectic_fourier_is_involution():
    f = PhaseFunction(lambda z: np.exp(-np.abs(z - 0.3) ** 2) * (1 + 0.5 * z.real), scale=1.0)
    # the inner transform must resolve oscillations up to |xi| ~ 8, the outer nodes
    Ff = PhaseFunction(lambda xi: qha.symplectic_fourier(f, xi, order=120), scale=1.0)
    for z in (0, 0.5 - 0.2j, -1.0j):
        assert abs(qha.symplectic_fourier(Ff, z, order=40) - f(z)) <= 1e-5


def test_symplectic_fourier_rejects_bounded_functions():
    with pytest.raises(QuadratureInsufficient):
        qha.symplectic_fourier(SymbolSpec.character(1.0), 0.5)


@settings(max_examples=10, deadline=None)
@given(complexes(1.0), complexes(1.0), complexes(1.0), st.integers(1, 3))
def test_symplectic_fourier_closed_form(z, w, xi, k):
    f = PhaseFunction(lambda u: qha.convolution_rank_one(k, z, w, u), scale=1.0)
    rule = build_lebesgue_quadrature(1.0, 60, center=z + w)
    assert abs(qha.symplectic_fourier(f, xi, rule=rule) - qha.symplectic_rank_one(k, z, w, xi)) <= 1e-4


def test_convolution_theorem():
    A = op.rank_one(2, 0.2 + 0.1j, -0.3)
    rule = build_lebesgue_quadrature(1.0, 40, center=(0.2 + 0.1j) + (-0.3))
    vals = qha.convolve_op_op(A, A, rule.nodes)
    for xi in (0, 0.7, -0.5 + 1.2j, 1.5j):
        lhs = np.sum(rule.weights * np.exp(-1j * sigma(xi, rule.nodes)) * vals) / math.pi
        assert abs(lhs - qha.fourier_weyl(A, xi) ** 2) <= 1e-5


# ---------------------------------------------------------------- Berezin transforms


def test_berezin_identity():
    zs = np.array(grid(2.0))
    b = qha.berezin(op.identity(2), zs)
    assert np.all(b.real >= 1 - 1e-8) and np.all(b.real <= 1 + 1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_berezin_of_weyl_modulus(k):
    xi = 0.8 - 0.5j
    b = qha.berezin(op.weyl_matrix(k, xi), np.array(grid(2.0)))
    expected = abs(laguerre(LaguerreParams(k - 1, 0), abs(xi) ** 2)) * math.exp(-abs(xi) ** 2 / 2)
    assert np.abs(np.abs(b) - expected).max() <= 1e-6


def test_berezin_vanishes_on_sigma():
    b = qha.berezin(op.weyl_matrix(2, np.exp(1.1j)), np.array(grid(2.0)))
    assert np.abs(b).max() <= 1e-6


def test_generalized_berezin():
    I = op.identity(op.full_poly(3))
    zs = np.array(grid(2.0))
    assert np.all(qha.generalized_berezin(I, 2, 2, zs).real >= 1 - 1e-8)
    assert np.abs(qha.generalized_berezin(I, 1, 3, zs)).max() <= 1e-10
    with pytest.raises(ValueError):
        qha.generalized_berezin(I, 1, 4, 0)
    with pytest.raises(ValueError):
        qha.generalized_berezin(op.identity(2), 1, 2, 0)


def test_generalized_berezin_decay():
    A = op.rank_one(2, 0, 0)
    ring = 4.0 * np.exp(2j * np.pi * np.arange(32) / 32)
    assert np.abs(qha.generalized_berezin(A, 2, 2, ring)).max() <= 1e-4


# ---------------------------------------------------------------- C1 modulus


def test_c1_identity():
    rep = qha.c1_modulus(op.identity(1), [0.05, 0.1, 0.5])
    assert max(rep.moduli) <= 1e-8
    assert rep.sample_count == 16


def test_c1_weyl_matches_scalar_oracle():
    w = 0.6 + 0.2j
    deltas = [0.2, 0.05, 0.1]
    rep = qha.c1_modulus(op.weyl_matrix(1, w), deltas)
    ang = np.exp(2j * np.pi * np.arange(16) / 16)
    per = {d: np.abs(np.exp(-1j * sigma(d * ang, w)) - 1).max() for d in deltas}
    for d, m in zip(rep.deltas, rep.moduli):
        oracle = max(per[e] for e in deltas if e <= d)
        assert abs(m - oracle) <= 1e-6
    assert rep.moduli[1] <= rep.moduli[2] <= rep.moduli[0]


def test_c1_parity_is_not_continuous():
    rep = qha.c1_modulus(op.parity_matrix(1), [0.1])
    assert rep.moduli[0] >= 0.5


def test_c1_rejects_nonpositive_deltas():
    with pytest.raises(ValueError):
        qha.c1_modulus(op.identity(1, 8), [0.0])
