"""Large-N limits of the cyclic Born-Jordan transform.

As N grows, the cyclic kernel tends to two limiting kernels: one on the
circle group (frequency variable an integer, lag variable a point of the
circle) and one on the integers (frequency in [0,1), integer lag).  Both are
evaluated through their finite geometric-sum forms, never through the
0/0-prone quotient.

The integer-side transform is what the nonperiodic distribution pictures use:
for a finitely supported signal u on Z, with counting measure,

    Q_Z[u](x, theta) = sum_{y != 0} e^{-i 2 pi y theta}
                         sum_t varphi_Z(x - t, y) u(t) u(t - y)^*
                       [ + |u(x)|^2  with the margin axis fix ],

where varphi_Z(x, y) = 1/|y| on the one-sided window -y < x <= 0 (y > 0)
resp. 0 < x <= -y (y < 0), and zero otherwise.  The kernel's y = 0 axis is
zero; the optional axis fix adds the frequency-flat term |u(x)|^2, the
integer-side analogue of the margin-repair kernel, so that margins and total
energy come out right.  It is on by default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import build_cyclic
from .harmonic import Signal
from .tfplane import TimeLagKernel, timelag_to_ambiguity
from .transforms import CohenKernel, born_jordan_cyclic_kernel, cohen_transform

__all__ = [
    "ZSignal",
    "ZTFGrid",
    "ComparisonReport",
    "phi_DT",
    "phi_DZ",
    "varphi_DZ",
    "q_z_distribution",
    "sampled_z_kernel",
    "cyclic_vs_z_comparison",
]


@dataclass
class ZSignal:
    """Finitely supported signal on the integers: values[i] = u(offset + i)."""

    offset: int
    values: np.ndarray
    sample_rate: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        if len(self.values) == 0:
            raise ValueError("ZSignal needs at least one sample")

    def __len__(self) -> int:
        return len(self.values)

    def at(self, t: int) -> complex:
        i = t - self.offset
        return self.values[i] if 0 <= i < len(self.values) else 0.0

    def energy(self) -> float:
        """Counting-measure energy sum |u(t)|^2."""
        return float(np.sum(np.abs(self.values) ** 2))


@dataclass
class ZTFGrid:
    """Time-frequency grid for integer-side distributions.

    values[k, i] is the distribution at time t_start + i and frequency k / M;
    row 0 is the lowest frequency.  Values of a symmetric kernel are real up
    to rounding; the residual imaginary part is kept for reporting.
    """

    t_start: int
    freq_bins: int
    values: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.t_start + np.arange(self.values.shape[1])

    @property
    def imag_residue(self) -> float:
        return float(np.abs(self.values.imag).max(initial=0.0))

    def real_grid(self) -> np.ndarray:
        return np.ascontiguousarray(self.values.real)


# ---------------------------------------------------------------------------
# Limit kernels, geometric-sum evaluation
# ---------------------------------------------------------------------------


def phi_DT(xi: int, y: float) -> complex:
    """Circle-group limit kernel; xi integer frequency lag, y a point of T.

    Evaluated as (1/|xi|) sum of |xi| unimodular terms, so |phi| <= 1 and the
    value at y = 0 is exactly 1 for xi != 0; zero when xi = 0.
    """
    if xi == 0:
        return 0.0
    y = y % 1.0
    if xi > 0:
        ks = np.arange(1, xi + 1)
        return complex(np.exp(2j * np.pi * y * ks).sum() / xi)
    ks = np.arange(0, -xi)
    return complex(np.exp(-2j * np.pi * y * ks).sum() / (-xi))


def phi_DZ(xi: float, y: int) -> complex:
    """Integer-side limit kernel; xi in [0, 1), y an integer lag.

    (1/|y|) times a geometric sum of |y| unimodular terms; zero on y = 0,
    exactly 1 at xi = 0 for y != 0.
    """
    if y == 0:
        return 0.0
    xi = xi % 1.0
    if y > 0:
        ks = np.arange(0, y)
    else:
        ks = np.arange(y, 0)
    return complex(np.exp(2j * np.pi * xi * ks).sum() / abs(y))


def varphi_DZ(x: int, y: int) -> float:
    """Integer-side time-lag kernel: 1/|y| on -y < x <= 0 or 0 < x <= -y."""
    if y == 0:
        return 0.0
    if (-y < x <= 0) or (0 < x <= -y):
        return 1.0 / abs(y)
    return 0.0


# ---------------------------------------------------------------------------
# The nonperiodic distribution
# ---------------------------------------------------------------------------


def _lag_sums(u: ZSignal, t_start: int, t_count: int) -> tuple[np.ndarray, np.ndarray]:
    """h[i, j] = sum_t varphi_Z(x_i - t, y_j) u(t) u(t - y_j)^*  and the lags y_j.

    For y > 0 the window collapses to t = x .. x + y - 1; for y < 0 to
    t = x - |y| .. x - 1.
    """
    L = len(u)
    ys = np.concatenate([np.arange(-(L - 1), 0), np.arange(1, L)])
    lo = min(t_start, u.offset) - 2 * L  # padding keeps windows and rolls in bounds
    hi = max(t_start + t_count, u.offset + L) + 2 * L
    full = np.zeros(hi - lo, dtype=complex)
    full[u.offset - lo : u.offset - lo + L] = u.values
    xs = np.arange(t_start, t_start + t_count)
    h = np.zeros((t_count, len(ys)), dtype=complex)
    for j, y in enumerate(ys):
        g = full * np.conj(np.roll(full, y))  # g[t] = u(t) u(t-y)^*
        c = np.concatenate([[0.0], np.cumsum(g)])
        if y > 0:
            # sum over t in [x, x+y-1]
            a = xs - lo
            h[:, j] = (c[a + y] - c[a]) / y
        else:
            m = -y
            a = xs - lo - m
            h[:, j] = (c[a + m] - c[a]) / m
    return h, ys


def q_z_distribution(
    u: ZSignal,
    M: int,
    t_start: int | None = None,
    t_count: int | None = None,
    axis_fix: bool = True,
) -> ZTFGrid:
    """Nonperiodic Born-Jordan distribution of u on an M-bin frequency grid.

    The default time window is the support of u, which carries all of the
    margin mass: summing the grid over frequencies (weight 1/M) returns
    |u(x)|^2 exactly whenever M exceeds the largest contributing lag.
    """
    if M < 1:
        raise ValueError("frequency grid size must be >= 1")
    if t_start is None:
        t_start = u.offset
    if t_count is None:
        t_count = len(u)
    h, ys = _lag_sums(u, t_start, t_count)
    ph = np.exp(-2j * np.pi * np.outer(ys, np.arange(M)) / M)
    vals = (h @ ph).T  # vals[k, i]
    if axis_fix:
        uvals = np.array([u.at(int(t)) for t in range(t_start, t_start + t_count)])
        vals += (np.abs(uvals) ** 2)[None, :]
    return ZTFGrid(t_start, M, vals)


# ---------------------------------------------------------------------------
# Cyclic comparison
# ---------------------------------------------------------------------------


def sampled_z_kernel(N: int, axis_fix: bool = True) -> CohenKernel:
    """The integer-side Born-Jordan kernel carried onto Z/NZ.

    Time-lag entries are N * varphi_Z at minimal residues (the factor N
    converts counting measure to the probability Haar weight).  For even N
    the boundary lag class N/2 has two minimal lifts; both are taken at half
    weight, and both lifts of the boundary time class are summed, so the
    margins of the sampled kernel stay exact.  The axis fix plants the
    margin-repairing delta at (0, 0).

    Lags shorter than N/2 are untouched by the lift bookkeeping, so cyclic
    transforms with this kernel reproduce `q_z_distribution` exactly for
    signals supported on less than a third of the period.
    """
    group, dual = build_cyclic(N)
    rep = ((np.arange(N) + N // 2) % N) - N // 2
    lag = np.zeros((N, N))
    for iy, ry in enumerate(rep):
        lifts_y = [(int(ry), 1.0)]
        if N % 2 == 0 and ry == -(N // 2):
            lifts_y = [(-(N // 2), 0.5), (N // 2, 0.5)]
        for ix, rx in enumerate(rep):
            lifts_x = [int(rx)]
            if N % 2 == 0 and rx == -(N // 2):
                lifts_x.append(N // 2)
            lag[ix, iy] = N * sum(
                wy * varphi_DZ(x, y) for y, wy in lifts_y for x in lifts_x
            )
    if axis_fix:
        lag[0, 0] += N
    phi = timelag_to_ambiguity(TimeLagKernel(group, lag.astype(complex)), dual)
    return CohenKernel(f"sampled-z:{N}", phi)


@dataclass
class ComparisonReport:
    order: int
    residual: float
    compared_cells: int
    kernel: str


def cyclic_vs_z_comparison(u: ZSignal, N: int, kernel: str = "sampled") -> ComparisonReport:
    """Compare the nonperiodic distribution with a cyclic computation on Z/N.

    The signal is embedded at offset N//3 (N >= 3 * support) and the cyclic
    transform is evaluated on the same grid; the residual is the maximum
    absolute difference over the central third of the period, away from the
    wrap-around boundary.

    kernel="sampled" runs the cyclic side with the periodized integer kernel
    (`sampled_z_kernel`); the two routes then compute identical sums and the
    residual is at rounding level.  kernel="born-jordan" uses the genuine
    cyclic Born-Jordan kernel, which differs from the integer kernel at order
    O(1/N); the residual it reports is that model difference, not an error.
    """
    L = len(u)
    if N < 3 * L:
        raise ValueError(f"period N = {N} must be at least 3 * support = {3 * L}")
    group, _ = build_cyclic(N)
    ofs = N // 3
    emb = np.zeros(N, dtype=complex)
    emb[ofs : ofs + L] = u.values
    sig = Signal(group, emb)
    if kernel == "sampled":
        k = sampled_z_kernel(N)
    elif kernel == "born-jordan":
        k = born_jordan_cyclic_kernel(N)
    else:
        raise ValueError(f"unknown comparison kernel {kernel!r}")
    D = cohen_transform(k, sig, sig)
    cyc = N * D.scalar_table()  # [eta, x], counting-measure scale

    zu = ZSignal(ofs, u.values)
    lo, hi = N // 3, 2 * N // 3
    grid = q_z_distribution(zu, N, t_start=lo, t_count=hi - lo)
    resid = float(np.abs(cyc[:, lo:hi] - grid.values).max())
    return ComparisonReport(N, resid, grid.values.size, kernel)
