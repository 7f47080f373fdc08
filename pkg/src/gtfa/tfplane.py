"""The time-frequency plane G x G^ and the ambiguity plane G^ x G.

A TFFunction assigns a d_eta x d_eta matrix to each (x, eta); an
AmbiguityFunction assigns a d_xi x d_xi matrix to each (xi, y), where y is the
lag variable and xi the Doppler variable.  The symplectic Fourier transform F
maps one plane to the other:

    Fa(xi, y) = (1/|G|) sum_x xi(x)^* s(x, y),
    s(x, y)   = sum_eta d_eta tr(eta(y) a(x, eta)).

The inner noncommutative integral is evaluated first, then the matrix-valued
transform in x; the two nesting orders agree, but one is pinned here for
reproducibility.  The time-lag kernel is the scalar table obtained by
inverse-transforming an ambiguity function in its first variable.

Blocks are stored per irrep as arrays of shape (|G|, d, d): TFFunction block
lists are indexed [eta][x], AmbiguityFunction block lists [xi][y].  For
all-scalar duals every operation collapses to dense matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, UnitaryDual

__all__ = [
    "TFFunction",
    "AmbiguityFunction",
    "TimeLagKernel",
    "symplectic_fourier",
    "inverse_symplectic_fourier",
    "tf_inner",
    "amb_inner",
    "tf_norm",
    "tf_convolve",
    "ambiguity_to_timelag",
    "timelag_to_ambiguity",
]


def _check_blocks(blocks, dual, n):
    blocks = [np.asarray(b, dtype=complex) for b in blocks]
    if len(blocks) != len(dual.irreps):
        raise ValueError(f"{len(blocks)} blocks for {len(dual.irreps)} irreps")
    for b, eta in zip(blocks, dual.irreps):
        if b.shape != (n, eta.dim, eta.dim):
            raise ValueError(
                f"block shape {b.shape} != ({n},{eta.dim},{eta.dim})"
            )
    return blocks


@dataclass
class TFFunction:
    """Matrix-valued function on the time-frequency plane G x G^."""

    group: FiniteGroup
    dual: UnitaryDual
    blocks: list[np.ndarray]  # blocks[k][x] = a(x, eta_k)

    def __post_init__(self):
        self.blocks = _check_blocks(self.blocks, self.dual, self.group.order)

    def scalar_table(self) -> np.ndarray:
        """(n_irreps, |G|) table for all-scalar duals: table[k, x] = a(x, eta_k)."""
        return np.stack([b[:, 0, 0] for b in self.blocks])

    @classmethod
    def from_scalar_table(cls, group, dual, table) -> "TFFunction":
        return cls(group, dual, [row[:, None, None] for row in np.asarray(table, dtype=complex)])


@dataclass
class AmbiguityFunction:
    """Matrix-valued function on the ambiguity plane G^ x G."""

    group: FiniteGroup
    dual: UnitaryDual
    blocks: list[np.ndarray]  # blocks[k][y] = A(xi_k, y)

    def __post_init__(self):
        self.blocks = _check_blocks(self.blocks, self.dual, self.group.order)

    def scalar_table(self) -> np.ndarray:
        return np.stack([b[:, 0, 0] for b in self.blocks])

    @classmethod
    def from_scalar_table(cls, group, dual, table) -> "AmbiguityFunction":
        return cls(group, dual, [row[:, None, None] for row in np.asarray(table, dtype=complex)])


@dataclass
class TimeLagKernel:
    """Scalar kernel on G x G; values[x, y] with x time and y lag."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        n = self.group.order
        if self.values.shape != (n, n):
            raise ValueError(f"time-lag table shape {self.values.shape} != ({n},{n})")


# ---------------------------------------------------------------------------
# The symplectic Fourier transform and its inverse
# ---------------------------------------------------------------------------


def _nc_contract(blocks, dual):
    """s(x, y) = sum_eta d_eta tr(eta(y) blocks[eta][x])  as an (n, n) array."""
    n = blocks[0].shape[0]
    s = np.zeros((n, n), dtype=complex)
    for eta, b in zip(dual.irreps, blocks):
        s += eta.dim * np.einsum("yab,xba->xy", eta.matrices, b)
    return s


def symplectic_fourier(a: TFFunction) -> AmbiguityFunction:
    group, dual = a.group, a.dual
    n = group.order
    if dual.is_commutative:
        ch = dual.char_matrix
        s = a.scalar_table().T @ ch          # s[x, y] = sum_eta a(x,eta) eta(y)
        out = ch.conj() @ s / n              # out[xi, y]
        return AmbiguityFunction.from_scalar_table(group, dual, out)
    s = _nc_contract(a.blocks, dual)
    blocks = [np.einsum("xy,xab->yab", s, xi.star) / n for xi in dual.irreps]
    return AmbiguityFunction(group, dual, blocks)


def inverse_symplectic_fourier(A: AmbiguityFunction) -> TFFunction:
    group, dual = A.group, A.dual
    n = group.order
    if dual.is_commutative:
        ch = dual.char_matrix
        t = ch.T @ A.scalar_table()          # t[x, y] = sum_xi xi(x) A(xi,y)
        out = (t @ ch.conj().T) / n          # out[x, eta]
        return TFFunction.from_scalar_table(group, dual, out.T)
    # t(x, y) = sum_xi d_xi tr(xi(x) A(xi, y))
    t = np.zeros((n, n), dtype=complex)
    for xi, b in zip(dual.irreps, A.blocks):
        t += xi.dim * np.einsum("xab,yba->xy", xi.matrices, b)
    blocks = [np.einsum("xy,yab->xab", t, eta.star) / n for eta in dual.irreps]
    return TFFunction(group, dual, blocks)


# ---------------------------------------------------------------------------
# Inner products and TF-plane convolution
# ---------------------------------------------------------------------------


def _plane_inner(b_blocks, a_blocks, dual, n) -> complex:
    acc = 0.0 + 0.0j
    for eta, bb, ab in zip(dual.irreps, b_blocks, a_blocks):
        acc += eta.dim * np.einsum("xab,xab->", bb, ab.conj())
    return complex(acc / n)


def tf_inner(b: TFFunction, a: TFFunction) -> complex:
    """<b,a> = (1/|G|) sum_x sum_eta d_eta tr(b(x,eta) a(x,eta)^*)."""
    return _plane_inner(b.blocks, a.blocks, b.dual, b.group.order)


def amb_inner(b: AmbiguityFunction, a: AmbiguityFunction) -> complex:
    return _plane_inner(b.blocks, a.blocks, b.dual, b.group.order)


def tf_norm(a: TFFunction) -> float:
    return float(np.sqrt(max(tf_inner(a, a).real, 0.0)))


def tf_convolve(a: TFFunction, b: TFFunction) -> TFFunction:
    """a * b = F^{-1}((Fb)(Fa)), with the pointwise matrix product in that order."""
    Fa = symplectic_fourier(a)
    Fb = symplectic_fourier(b)
    prod = [fb @ fa for fa, fb in zip(Fa.blocks, Fb.blocks)]
    return inverse_symplectic_fourier(AmbiguityFunction(a.group, a.dual, prod))


# ---------------------------------------------------------------------------
# Ambiguity <-> time-lag conversions
# ---------------------------------------------------------------------------


def ambiguity_to_timelag(phi: AmbiguityFunction) -> TimeLagKernel:
    """varphi(x, y) = sum_xi d_xi tr(xi(x) phi(xi, y))."""
    group, dual = phi.group, phi.dual
    if dual.is_commutative:
        vals = dual.char_matrix.T @ phi.scalar_table()
        return TimeLagKernel(group, vals)
    n = group.order
    vals = np.zeros((n, n), dtype=complex)
    for xi, b in zip(dual.irreps, phi.blocks):
        vals += xi.dim * np.einsum("xab,yba->xy", xi.matrices, b)
    return TimeLagKernel(group, vals)


def timelag_to_ambiguity(k: TimeLagKernel, dual: UnitaryDual | None = None) -> AmbiguityFunction:
    """phi(xi, y) = (1/|G|) sum_x xi(x)^* varphi(x, y)."""
    group = k.group
    dual = group.dual if dual is None else dual
    n = group.order
    if dual.is_commutative:
        out = dual.char_matrix.conj() @ k.values / n
        return AmbiguityFunction.from_scalar_table(group, dual, out)
    blocks = [np.einsum("xy,xab->yab", k.values, xi.star) / n for xi in dual.irreps]
    return AmbiguityFunction(group, dual, blocks)
