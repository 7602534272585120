"""Zero sets of Laguerre transforms, regularity scans and block partitions.

An operator is regular when its Fourier-Weyl transform has no zeros.  On
F^2_(k) the transform of k_0 (x) k_0 is L_{k-1}(|xi|^2) exp(-|xi|^2/2), so
its zero set Sigma_k is a union of circles whose radii are square roots of
Laguerre zeros.  Regularity is only ever tested on a finite polar grid.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import operators as op
from .operators import SymbolSpec, TruncatedOperator
from .qha import fourier_weyl
from .special_functions import laguerre_zeros

GRID_RADII = 60
GRID_ANGLES = 32
GRID_RMAX = 3.0


@dataclass(frozen=True)
class SigmaSet:
    k: int
    radii: tuple

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")

    def __len__(self):
        return len(self.radii)

    def distance(self, r: float) -> float:
        """Distance from |xi| = r to the nearest circle (inf when empty)."""
        return min((abs(r - s) for s in self.radii), default=math.inf)


def sigma_set(k: int) -> SigmaSet:
    return SigmaSet(k, tuple(math.sqrt(x) for x in laguerre_zeros(k)))


@dataclass(frozen=True)
class PolarGrid:
    """Origin plus ``n_radii`` rings at r_max * i / n_radii, ``n_angles`` points each."""

    r_max: float = GRID_RMAX
    n_radii: int = GRID_RADII
    n_angles: int = GRID_ANGLES

    @property
    def radii(self) -> np.ndarray:
        return self.r_max * np.arange(1, self.n_radii + 1) / self.n_radii

    @property
    def points(self) -> np.ndarray:
        ang = np.exp(2j * np.pi * np.arange(self.n_angles) / self.n_angles)
        return np.concatenate([[0j], (self.radii[:, None] * ang[None, :]).ravel()])

    def neighbors(self, i: int, steps: int = 2) -> list[int]:
        """Indices within ``steps`` grid steps radially and angularly."""
        if i == 0:
            return list(range(1, 1 + min(steps, self.n_radii) * self.n_angles))
        ring, a = divmod(i - 1, self.n_angles)
        out = []
        for dr in range(-steps, steps + 1):
            r = ring + dr
            if r < -1 or r >= self.n_radii:
                continue
            if r == -1:
                out.append(0)
                continue
            for da in range(-steps, steps + 1):
                j = 1 + r * self.n_angles + (a + da) % self.n_angles
                if j != i:
                    out.append(j)
        return sorted(set(out))


def _grid_points(grid) -> np.ndarray:
    if grid is None:
        return PolarGrid().points
    if isinstance(grid, PolarGrid):
        return grid.points
    return np.asarray(grid, dtype=complex).ravel()


def default_tol(A: TruncatedOperator) -> float:
    return 1e-7 * (1 + op.trace_norm(A))


@dataclass
class RegularityResult:
    is_regular_on_grid: bool
    min_abs: float
    zero_points: list
    values: np.ndarray = field(repr=False)
    tol: float = 0.0


def regularity_scan(A: TruncatedOperator, grid=None, tol: float | None = None) -> RegularityResult:
    """|F_W(A)| on the grid; regular when the minimum exceeds ``tol``."""
    pts = _grid_points(grid)
    tol = default_tol(A) if tol is None else tol
    vals = np.abs(fourier_weyl(A, pts))
    zeros = [complex(p) for p in pts[vals <= tol]]
    return RegularityResult(bool(vals.min() > tol), float(vals.min()), zeros, vals, tol)


@dataclass
class InftyRegularityResult:
    zero_fraction: float
    complement_dense_proxy: bool


def infty_regularity_scan(A: TruncatedOperator, grid: PolarGrid | None = None,
                          tol: float | None = None) -> InftyRegularityResult:
    """Proxy for a zero set with dense complement.

    Passes when every grid point has a neighbour within two grid steps where
    |F_W(A)| exceeds ``tol``, i.e. zeros sit on thin curves, not on patches.
    """
    grid = grid or PolarGrid()
    res = regularity_scan(A, grid.points, tol)
    above = res.values > res.tol
    proxy = bool(all(above[i] or np.any(above[grid.neighbors(i)]) for i in range(above.size)))
    return InftyRegularityResult(float(np.mean(~above)), proxy)


@dataclass
class WitnessResult:
    symbol: SymbolSpec
    toeplitz_norm: float
    weyl_check_k1: float


def witness_symbol(xi: complex) -> SymbolSpec:
    """f(z) = exp(i sigma(z, xi) + |xi|^2/2), a character rescaled so T_{f,(1)} = W_xi."""
    return SymbolSpec.character(-complex(xi), scale=math.exp(abs(xi) ** 2 / 2))


def toeplitz_kernel_witness(k: int, xi: complex, N: int = op.DEFAULT_N, rule=None) -> WitnessResult:
    """Inner-block ||T_{f,(k)}|| and ||T_{f,(1)} - W_xi|| for the rescaled character f."""
    f = witness_symbol(xi)
    T = op.toeplitz_matrix(k, f, N, rule=rule)
    T1 = T if k == 1 else op.toeplitz_matrix(1, f, N, rule=rule)
    W = op.weyl_matrix(1, xi, N)
    return WitnessResult(f, op.operator_norm(T.inner()), op.operator_norm((T1 - W).inner()))


# ---------------------------------------------------------------- partitions


@dataclass(frozen=True)
class Partition:
    n: int
    classes: tuple

    def __post_init__(self):
        seen = set()
        for cls in self.classes:
            if not cls or seen & set(cls):
                raise ValueError("partition classes must be nonempty and disjoint")
            seen |= set(cls)
        expected = set(itertools.product(range(1, self.n + 1), repeat=2))
        if seen != expected:
            raise ValueError("partition classes must cover {1..n}^2")

    @classmethod
    def from_classes(cls, n: int, classes):
        return cls(n, tuple(frozenset(tuple(p) for p in c) for c in classes))

    @classmethod
    def minimal(cls, n: int):
        """M_min: a single class."""
        return cls.from_classes(n, [itertools.product(range(1, n + 1), repeat=2)])

    @classmethod
    def maximal(cls, n: int):
        """M_max: n^2 singletons."""
        return cls.from_classes(n, [[p] for p in itertools.product(range(1, n + 1), repeat=2)])


def respects_partition(A: TruncatedOperator, M: Partition, tol: float = 1e-10) -> bool:
    """Blocks within each class agree entrywise (intertwiners are identity matrices)."""
    if A.domain.kind != "full" or A.domain.index != M.n:
        raise ValueError("partition size does not match the operator's space")
    for cls in M.classes:
        blocks = [op.extract_block(A, k, j).matrix for k, j in sorted(cls)]
        if any(np.abs(b - blocks[0]).max() > tol for b in blocks[1:]):
            return False
    return True


@dataclass
class MRegularityResult:
    passed: bool
    respects: bool
    blocks: dict = field(repr=False)

    def __bool__(self):
        return self.passed

    def zero_points(self) -> list:
        return [p for r in self.blocks.values() for p in r.zero_points]


def m_regularity_scan(A: TruncatedOperator, M: Partition, grid=None, tol: float | None = None) -> MRegularityResult:
    """Every block regular on the grid and the class equalities satisfied."""
    respects = respects_partition(A, M)
    tol = default_tol(A) if tol is None else tol
    blocks = {}
    for k, j in itertools.product(A.domain.components, repeat=2):
        blocks[(k, j)] = regularity_scan(op.extract_block(A, k, j), grid, tol)
    passed = respects and all(r.is_regular_on_grid for r in blocks.values())
    return MRegularityResult(passed, respects, blocks)


def kernel_block_operator(n: int, N: int = op.DEFAULT_N, kind: str = "l") -> TruncatedOperator:
    """Operator on F^2_n with block (k, j) = u_k (x) u_j at the origin.

    ``kind="l"`` uses l_{0,k} (the transported analytic kernel), ``kind="k"``
    the true-poly kernels k_{0,(k)}.
    """
    space = op.full_poly(n, N)
    blocks = {}
    for k, j in itertools.product(range(1, n + 1), repeat=2):
        if kind == "l":
            u, v = op.l_vector(op.true_poly(k, N), 0, k), op.l_vector(op.true_poly(j, N), 0, j)
        elif kind == "k":
            u, v = op.kernel_vector(op.true_poly(k, N), 0), op.kernel_vector(op.true_poly(j, N), 0)
        else:
            raise ValueError(f"unknown kind {kind!r}")
        blocks[(k, j)] = np.outer(u, v.conj())
    return op.assemble_blocks(blocks, space)
