import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from polyqha import fock_basis as fb
from polyqha import operators as op
from polyqha.operators import QuadratureInsufficient, SymbolSpec
from polyqha.qha import sigma
from polyqha.special_functions import LaguerreParams, build_gaussian_quadrature, laguerre

from conftest import inner_err


def complexes(radius):
    return st.builds(
        lambda r, a: complex(r * np.exp(1j * a)),
        st.floats(0, radius, allow_nan=False),
        st.floats(0, 2 * math.pi, allow_nan=False),
    )


def lag(k, x):
    return laguerre(LaguerreParams(k - 1, 0), x)


def displacement_entry_mp(alpha, m, n):
    """<m| exp(alpha a^dag - conj(alpha) a) |n> from the normal-ordered series, 50 digits."""
    with mpmath.workdps(50):
        a = mpmath.mpc(alpha.real, alpha.imag)
        s = mpmath.mpf(0)
        for j in range(min(m, n) + 1):
            s += a ** (m - j) * (-mpmath.conj(a)) ** (n - j) / (
                mpmath.factorial(j) * mpmath.factorial(m - j) * mpmath.factorial(n - j)
            )
        val = mpmath.exp(-abs(a) ** 2 / 2) * mpmath.sqrt(mpmath.factorial(m) * mpmath.factorial(n)) * s
        return complex(val)


# ---------------------------------------------------------------- spaces


def test_space_tags():
    assert op.true_poly(3, 8).components == [3]
    assert op.full_poly(3, 8).components == [1, 2, 3]
    assert op.full_poly(3, 8).dim == 24
    with pytest.raises(ValueError):
        op.SpaceTag("true", 0, 8)
    with pytest.raises(ValueError):
        op.SpaceTag("half", 1, 8)
    with pytest.raises(ValueError):
        op.TruncatedOperator(op.true_poly(1, 4), op.true_poly(1, 4), np.eye(3))


# ---------------------------------------------------------------- Weyl operators


def test_weyl_at_origin_is_identity():
    assert np.array_equal(op.weyl_matrix(2, 0, 16).matrix, np.eye(16))


@pytest.mark.parametrize("z", [0.3 - 0.2j, 1.1 + 0.5j, -2.0j])
def test_weyl_vacuum_entry(z, mu_rule):
    W = op.weyl_matrix(1, z, 16)
    assert W.matrix[0, 0] == pytest.approx(math.exp(-abs(z) ** 2 / 2), abs=1e-14)
    # oracle: project the pointwise formula W_z 1 (w) = exp(w zbar - |z|^2/2)
    w = mu_rule.nodes
    img = np.exp(w * np.conj(z) - abs(z) ** 2 / 2)
    assert fb.inner_product_mu(img, np.ones_like(w), mu_rule) == pytest.approx(W.matrix[0, 0], abs=1e-12)


@pytest.mark.parametrize("z", [0.7 + 0.1j, -1.5 + 2.0j, 4.0 - 3.0j])
def test_weyl_entries_against_mpmath(z):
    W = op.weyl_matrix(1, z, 40).matrix
    alpha = np.conj(z)
    for m in (0, 3, 11, 25, 39):
        for n in (0, 5, 17, 39):
            assert abs(W[m, n] - displacement_entry_mp(alpha, m, n)) <= 1e-12


@pytest.mark.parametrize("k", [1, 2, 3])
def test_weyl_closed_form_matches_quadrature_projection(k):
    z = 0.9 - 0.6j
    A = op.weyl_matrix(k, z, 24)
    B = op.weyl_matrix(k, z, 24, method="quadrature")
    assert inner_err(A, B) <= 1e-10


@given(complexes(1.5), complexes(1.5), st.integers(1, 3))
def test_shifted_kernels(z, w, k):
    W = op.weyl_matrix(k, z, 64).matrix
    lhs = W @ op.kernel_vector(op.true_poly(k, 64), w)
    rhs = np.exp(-1j * np.imag(z * np.conj(w))) * op.kernel_vector(op.true_poly(k, 64), z + w)
    assert np.abs(lhs - rhs).max() <= 1e-7


@given(complexes(1.5), complexes(1.5))
def test_ccr(z, w):
    lhs = op.weyl_matrix(1, z) @ op.weyl_matrix(1, w)
    rhs = op.weyl_matrix(1, z + w) * np.exp(-0.5j * sigma(z, w))
    assert inner_err(lhs, rhs) <= 1e-6


@given(complexes(2.0), st.integers(2, 4))
def test_weyl_is_independent_of_k(z, k):
    assert np.abs(op.weyl_matrix(k, z).matrix - op.weyl_matrix(1, z).matrix).max() <= 1e-8


@given(complexes(2.0))
def test_weyl_adjoint(z):
    assert np.abs(op.weyl_matrix(1, z).H.matrix - op.weyl_matrix(1, -z).matrix).max() <= 1e-10


@given(complexes(2.0))
def test_weyl_inner_block_unitary(z):
    s = op.singular_values(op.weyl_matrix(1, z).inner())
    # the inner block of a unitary is a contraction; its top singular values are 1
    assert s.max() <= 1 + 1e-10
    assert np.all(np.abs(s[:16] - 1) <= 1e-6)


def test_weyl_full_space_is_block_diagonal():
    W = op.weyl_matrix(op.full_poly(3, 12), 0.4 + 0.3j)
    blk = op.weyl_matrix(1, 0.4 + 0.3j, 12).matrix
    for k in (1, 2, 3):
        for j in (1, 2, 3):
            B = op.extract_block(W, k, j).matrix
            assert np.array_equal(B, blk if k == j else np.zeros_like(blk))


def test_intertwining_relation():
    z = 1.2 - 0.4j
    for j, k in [(1, 2), (2, 3), (3, 1)]:
        Akj = op.intertwiner_matrix(j, k, 64)
        lhs = Akj @ op.weyl_matrix(j, z)
        rhs = op.weyl_matrix(k, z) @ Akj
        assert np.abs(lhs.matrix - rhs.matrix).max() <= 1e-8


# ---------------------------------------------------------------- parity, kernels


def test_parity_examples():
    assert np.array_equal(np.diag(op.parity_matrix(1, 4).matrix), [1, -1, 1, -1])
    assert np.array_equal(np.diag(op.parity_matrix(2, 4).matrix), [-1, 1, -1, 1])


@given(complexes(2.0), st.integers(1, 4))
def test_parity_on_kernels(z, k):
    s = op.true_poly(k)
    U = op.parity_matrix(s).matrix
    assert np.abs(U @ op.kernel_vector(s, z) - op.kernel_vector(s, -z)).max() <= 1e-10


def test_rank_one_examples():
    R = op.rank_one(1, 0, 0, 8)
    assert np.array_equal(R.matrix, np.outer(np.eye(8)[0], np.eye(8)[0]))
    for z in (0, 1.3j, 2.0, -1.4 + 1.4j):
        assert op.trace(op.rank_one(2, z, z)).real >= 1 - 1e-8


@pytest.mark.parametrize("k", [1, 2, 3])
def test_rank_one_fourier_weyl(k):
    R = op.rank_one(k, 0, 0)
    for xi in np.linspace(0, 3, 13) * np.exp(0.7j):
        val = op.trace(R @ op.weyl_matrix(k, xi))
        assert abs(val - lag(k, abs(xi) ** 2) * math.exp(-abs(xi) ** 2 / 2)) <= 1e-7


@given(complexes(2.0), complexes(2.0))
def test_rank_one_trace_convention(z, w):
    s = op.true_poly(2)
    # tr(k_z (x) k_w) = <k_z, k_w>
    assert abs(op.trace(op.rank_one(s, z, w)) - np.vdot(op.kernel_vector(s, w), op.kernel_vector(s, z))) <= 1e-12


def test_l_vector_is_transported_kernel():
    s = op.full_poly(3, 32)
    z = 0.5 - 0.8j
    v = op.l_vector(s, z, 2)
    assert np.abs(v[32:64] - fb.normalized_kernel_coeffs(1, z, 32)).max() == 0
    assert not np.any(v[:32]) and not np.any(v[64:])
    with pytest.raises(ValueError):
        op.l_vector(op.true_poly(1, 8), 0, 2)


# ---------------------------------------------------------------- Toeplitz


def test_toeplitz_constant_is_identity():
    T = op.toeplitz_matrix(2, SymbolSpec.constant(1.0), 32)
    assert np.abs(T.matrix - np.eye(32)).max() <= 1e-12


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("xi", [0.5, 1.0 - 0.7j, -1.8j])
def test_toeplitz_character(k, xi):
    T = op.toeplitz_matrix(k, SymbolSpec.character(xi))
    expected = op.weyl_matrix(k, -xi) * (lag(k, abs(xi) ** 2) * math.exp(-abs(xi) ** 2 / 2))
    assert inner_err(T, expected) <= 1e-6


def test_toeplitz_vanishes_on_sigma():
    f = SymbolSpec.character(1.0, scale=math.exp(0.5))
    assert op.inner_norm(op.toeplitz_matrix(2, f)) <= 1e-6


@pytest.mark.parametrize(
    "f",
    [SymbolSpec.gaussian(0.7), SymbolSpec.disk(1.3), SymbolSpec.radial_poly([1.0, -0.5, 0.1]), SymbolSpec.constant(2.0)],
    ids=["gaussian", "disk", "radial_poly", "constant"],
)
def test_toeplitz_real_symbols(f):
    T = op.toeplitz_matrix(2, f, 32).matrix
    assert np.abs(T - T.conj().T).max() <= 1e-12
    assert op.operator_norm(T) <= f.sup_norm() * (1 + 1e-8)


@pytest.mark.parametrize(
    "f", [SymbolSpec.gaussian(0.4), SymbolSpec.disk(0.8)], ids=["gaussian", "disk"]
)
def test_toeplitz_positivity(f):
    T = op.toeplitz_matrix(3, f, 32).matrix
    assert np.linalg.eigvalsh(0.5 * (T + T.conj().T)).min() >= -1e-10


def test_toeplitz_exact_route_agrees():
    for k in (1, 2):
        for f in (SymbolSpec.gaussian(0.6), SymbolSpec.character(0.8 + 0.3j)):
            A = op.toeplitz_matrix(k, f, 24)
            B = op.toeplitz_matrix(k, f, 24, method="exact")
            assert inner_err(A, B) <= 1e-8


def test_toeplitz_rejects_low_order_rule():
    with pytest.raises(QuadratureInsufficient):
        op.toeplitz_matrix(2, SymbolSpec.character(1.0), 64, rule=build_gaussian_quadrature(40, 40))
    with pytest.raises(ValueError):
        op.toeplitz_matrix(2, SymbolSpec.character(1.0), 8, method="bogus")


def test_toeplitz_full_space_blocks_against_direct_quadrature(mu_rule):
    f = SymbolSpec.gaussian(1.5)
    N = 12
    T = op.toeplitz_matrix(op.full_poly(2, N), f)
    vals = f(mu_rule.nodes)
    for k in (1, 2):
        for j in (1, 2):
            blk = op.extract_block(T, k, j).matrix
            for m in (0, 3, 7):
                for mp in (0, 5, 11):
                    ref = fb.inner_product_mu(
                        vals * fb.eval_poly(fb.basis_function((j, m)), mu_rule.nodes), fb.basis_function((k, mp)), mu_rule
                    )
                    assert abs(blk[mp, m] - ref) <= 1e-8


def test_symbol_validation():
    with pytest.raises(ValueError):
        SymbolSpec.gaussian(0.0)
    with pytest.raises(ValueError):
        SymbolSpec.disk(-1.0)


# ---------------------------------------------------------------- intertwiners


def test_intertwiner_canonical():
    assert np.array_equal(op.intertwiner_matrix(2, 2, 8).matrix, np.eye(8))
    with pytest.raises(ValueError):
        op.intertwiner_matrix(0, 1)


@pytest.mark.parametrize("j, k", [(1, 2), (2, 1), (1, 3), (3, 2)])
def test_intertwiner_quadrature_variant(j, k):
    A = op.intertwiner_matrix(j, k, 48, method="quadrature")
    assert op.inner_norm(A - op.intertwiner_matrix(j, k, 48)) <= 1e-8


def test_intertwiner_maps_kernel_to_l_vector():
    z = 0.6 + 1.1j
    A21 = op.intertwiner_matrix(1, 2, 64)
    kz = fb.normalized_kernel_coeffs(1, z, 64)
    l = op.l_vector(op.true_poly(2, 64), z, 2)
    assert np.abs(A21.matrix @ kz - l).max() <= 1e-15
    assert abs(np.vdot(l, l) - (1 - fb.kernel_tail(kz))) <= 1e-14


# ---------------------------------------------------------------- norms


def test_norm_examples():
    I = op.identity(1, 8)
    assert (op.operator_norm(I), op.trace(I), op.trace_norm(I)) == (pytest.approx(1), 8, pytest.approx(8))
    R = op.rank_one(1, 0, 0, 8)
    assert op.operator_norm(R) == pytest.approx(1)
    assert op.trace(R) == pytest.approx(1)
    assert op.trace_norm(R) == pytest.approx(1)


def test_power_iteration_branch(rng):
    M = rng.normal(size=(300, 300)) + 1j * rng.normal(size=(300, 300))
    assert op.operator_norm(M) == pytest.approx(np.linalg.norm(M, 2), rel=1e-6)
    assert np.all(np.diff(op.singular_values(M)) <= 0)


# ---------------------------------------------------------------- blocks


def test_assemble_identity_blocks():
    blocks = {(k, k): np.eye(8) for k in (1, 2)}
    A = op.assemble_blocks(blocks, op.full_poly(2, 8))
    assert np.array_equal(A.matrix, np.eye(16))
    with pytest.raises(ValueError):
        op.assemble_blocks({(1, 1): np.eye(4)}, op.full_poly(2, 8))
    with pytest.raises(ValueError):
        op.assemble_blocks({(3, 1): np.eye(8)}, op.full_poly(2, 8))


def test_block_round_trip_and_norm_bounds(rng):
    n, N = 3, 8
    blocks = {(k, j): rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N)) for k in range(1, n + 1) for j in range(1, n + 1)}
    A = op.assemble_blocks(blocks, op.full_poly(n, N))
    norms = []
    for (k, j), B in blocks.items():
        blk = op.extract_block(A, k, j)
        assert np.array_equal(blk.matrix, B)
        assert (blk.domain.index, blk.codomain.index) == (j, k)
        norms.append(op.operator_norm(B))
    total = op.operator_norm(A)
    assert max(norms) <= total + 1e-12
    assert total <= n * max(norms) + 1e-12


# ---------------------------------------------------------------- serialization


def test_serialization_round_trip(tmp_path):
    A = op.toeplitz_matrix(op.full_poly(2, 10), SymbolSpec.character(0.3 - 1.2j))
    op.save_operator(A, tmp_path / "a.csv")
    B = op.load_operator(tmp_path / "a.csv")
    assert B.domain == A.domain and B.codomain == A.codomain
    assert np.all(np.abs(B.matrix - A.matrix) <= 1e-15 * np.maximum(1, np.abs(A.matrix)))
