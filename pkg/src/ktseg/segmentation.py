"""Kernel change-point detection solved exactly by dynamic programming.

The pipeline: feature matrix -> Gram matrix under a chosen kernel ->
within-segment scatter table (integral-image backed, O(1) per window) ->
globally optimal change points, either for a fixed segment count or for an
automatically chosen count under a parsimony penalty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    IndexOutOfRangeError,
    InfeasibleSegmentCountError,
    InvariantViolationError,
    NonPositivePenaltyWeightError,
    TooManyCandidatesError,
    ZeroNormRowError,
)

#: Default maximum number of candidate frames. The scatter table keeps an
#: (n+1) x (n+1) integral image of doubles, ~134 MB at this cap.
DEFAULT_CANDIDATE_CAP = 4096

_KERNEL_KINDS = ("dot", "cosine", "rbf")


@dataclass(frozen=True)
class FeatureSequence:
    """n frame descriptors of dimension d, optionally timestamped in seconds.

    Values are held as a read-only float64 matrix; timestamps, when given,
    must be strictly increasing with one entry per frame.
    """

    values: np.ndarray
    timestamps: np.ndarray | None = None

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise InvariantViolationError(
                f"feature matrix must be n x d with n, d >= 1, got shape {values.shape}"
            )
        if not np.isfinite(values).all():
            raise InvariantViolationError("feature values must all be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.timestamps is not None:
            ts = np.asarray(self.timestamps, dtype=np.float64)
            if ts.shape != (values.shape[0],):
                raise InvariantViolationError("timestamps must have one entry per frame")
            if not np.isfinite(ts).all() or (np.diff(ts) <= 0.0).any():
                raise InvariantViolationError("timestamps must be finite and strictly increasing")
            ts.setflags(write=False)
            object.__setattr__(self, "timestamps", ts)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice: "dot" (default), "cosine", or "rbf" with a bandwidth.

    The dot product on raw features is the default; cosine is the dot
    product on L2-normalized rows, and rbf is exp(-||x-y||^2 / (2*bw^2)).
    """

    kind: str = "dot"
    bandwidth: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KERNEL_KINDS:
            raise InvariantViolationError(
                f"unknown kernel {self.kind!r}; expected one of {_KERNEL_KINDS}"
            )
        if self.kind == "rbf":
            if self.bandwidth is None or not math.isfinite(self.bandwidth) or self.bandwidth <= 0:
                raise InvariantViolationError("rbf kernel requires a positive finite bandwidth")
        elif self.bandwidth is not None:
            raise InvariantViolationError(f"{self.kind} kernel takes no bandwidth")

    @classmethod
    def from_tag(cls, tag: str) -> "KernelSpec":
        """Parse a compact tag: "dot", "cosine", or "rbf:<bandwidth>"."""
        if tag in ("dot", "cosine"):
            return cls(kind=tag)
        if tag.startswith("rbf:"):
            try:
                bw = float(tag[4:])
            except ValueError:
                raise InvariantViolationError(f"bad rbf bandwidth in kernel tag {tag!r}") from None
            return cls(kind="rbf", bandwidth=bw)
        raise InvariantViolationError(f"unknown kernel tag {tag!r}")

    @property
    def tag(self) -> str:
        if self.kind == "rbf":
            return f"rbf:{self.bandwidth!r}"
        return self.kind


@dataclass(frozen=True)
class GramMatrix:
    """Pairwise kernel values between all candidate frames; exactly symmetric."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.entries, dtype=np.float64)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
            raise InvariantViolationError(f"Gram matrix must be square and nonempty, got {g.shape}")
        if not np.isfinite(g).all():
            raise InvariantViolationError("Gram matrix entries must be finite")
        if not np.array_equal(g, g.T):
            raise InvariantViolationError("Gram matrix must be exactly symmetric")
        g.setflags(write=False)
        object.__setattr__(self, "entries", g)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class VarianceTable:
    """O(1) within-segment scatter queries over every half-open window.

    diag_prefix[i] holds the running sum of Gram diagonal entries and
    block_prefix is the 2-D integral image of the Gram matrix, so the
    scatter of window [a, b) is

        (diag_prefix[b] - diag_prefix[a]) - block(a, b) / (b - a)

    with block(a, b) the Gram mass of the window. var_matrix caches the
    clamped value for every window; single-frame windows are exactly zero.
    """

    diag_prefix: np.ndarray
    block_prefix: np.ndarray
    var_matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.diag_prefix.shape[0] - 1

    def var(self, a: int, b: int) -> float:
        """Clamped scatter of candidate window [a, b)."""
        if not (0 <= a < b <= self.n):
            raise IndexOutOfRangeError(f"window [{a}, {b}) out of range for n={self.n}")
        return float(self.var_matrix[a, b])


@dataclass(frozen=True)
class Segmentation:
    """Split of n candidates into m half-open segments.

    change_points holds the m-1 interior boundaries t_1 < ... < t_(m-1);
    segment i spans [t_(i-1), t_i) with t_0 = 0 and t_m = n. objective is
    the total within-segment scatter; penalty is nonzero only when the
    segment count was chosen automatically.
    """

    n: int
    m: int
    change_points: tuple[int, ...]
    objective: float
    penalty: float = 0.0
    penalty_weight: float = 0.0
    min_segment_length: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "change_points", tuple(int(t) for t in self.change_points))
        if self.n < 1 or self.m < 1:
            raise InvariantViolationError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.min_segment_length < 1:
            raise InvariantViolationError("minimum segment length must be >= 1")
        if len(self.change_points) != self.m - 1:
            raise InvariantViolationError(
                f"expected {self.m - 1} change points for m={self.m}, got {len(self.change_points)}"
            )
        bounds = (0, *self.change_points, self.n)
        for a, b in zip(bounds[:-1], bounds[1:]):
            if b - a < self.min_segment_length:
                raise InvariantViolationError(
                    f"segment [{a}, {b}) shorter than minimum length {self.min_segment_length}"
                )
        for t in self.change_points:
            if not (1 <= t <= self.n - 1):
                raise InvariantViolationError(f"change point {t} outside [1, {self.n - 1}]")
        if not math.isfinite(self.objective) or self.objective < 0:
            raise InvariantViolationError("objective must be finite and nonnegative")
        if not math.isfinite(self.penalty) or self.penalty < 0:
            raise InvariantViolationError("penalty must be finite and nonnegative")
        if not math.isfinite(self.penalty_weight) or self.penalty_weight < 0:
            raise InvariantViolationError("penalty weight must be finite and nonnegative")

    def segment_bounds(self) -> tuple[tuple[int, int], ...]:
        """Half-open (start, end) pairs covering [0, n)."""
        bounds = (0, *self.change_points, self.n)
        return tuple(zip(bounds[:-1], bounds[1:]))


def compute_gram(
    features: FeatureSequence,
    kernel: KernelSpec | None = None,
    max_candidates: int = DEFAULT_CANDIDATE_CAP,
) -> GramMatrix:
    """Kernel values for every frame pair, accumulated in float64.

    Raises TooManyCandidatesError above ``max_candidates`` frames and
    ZeroNormRowError when the cosine kernel meets an all-zero row.
    """
    kernel = kernel if kernel is not None else KernelSpec()
    if features.n > max_candidates:
        raise TooManyCandidatesError(
            f"{features.n} candidate frames exceed the cap of {max_candidates}; "
            "the scatter table needs O(n^2) memory (raise the cap explicitly to proceed)"
        )
    x = features.values
    if kernel.kind == "dot":
        g = x @ x.T
    elif kernel.kind == "cosine":
        norms = np.linalg.norm(x, axis=1)
        zero = np.flatnonzero(norms == 0.0)
        if zero.size:
            raise ZeroNormRowError(f"cosine kernel requires nonzero rows; row {zero[0]} is all zero")
        xn = x / norms[:, None]
        g = xn @ xn.T
    else:
        sq = np.einsum("ij,ij->i", x, x)
        d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (x @ x.T), 0.0)
        g = np.exp(-d2 / (2.0 * kernel.bandwidth**2))
    # Mirror the upper triangle so symmetry holds bit-for-bit.
    g = np.triu(g) + np.triu(g, 1).T
    if kernel.kind != "dot":
        np.fill_diagonal(g, 1.0)
    return GramMatrix(entries=g)


def build_variance_table(gram: GramMatrix) -> VarianceTable:
    """Precompute prefix sums and the clamped scatter of every window.

    O(n^2) time and memory. Raw scatters may dip a hair below zero from
    cancellation in the prefix sums; anything below -1e-9 means the input
    scale has destroyed the table's precision and is rejected outright.
    """
    g = gram.entries
    n = gram.n
    diag_prefix = np.zeros(n + 1)
    diag_prefix[1:] = np.cumsum(np.diagonal(g))
    block_prefix = np.zeros((n + 1, n + 1))
    block_prefix[1:, 1:] = g.cumsum(axis=0).cumsum(axis=1)

    bpd = np.ascontiguousarray(np.diagonal(block_prefix))
    block = ((bpd[None, :] - block_prefix) - block_prefix.T) + bpd[:, None]
    idx = np.arange(n + 1)
    length = idx[None, :] - idx[:, None]
    valid = length >= 1
    raw = np.where(
        valid,
        (diag_prefix[None, :] - diag_prefix[:, None]) - block / np.where(valid, length, 1),
        0.0,
    )
    worst = raw.min()
    if worst < -1e-9:
        raise FloatingPointError(
            f"scatter table lost precision (raw minimum {worst:.3e}); "
            "rescale the features closer to unit magnitude"
        )
    var_matrix = np.maximum(raw, 0.0)
    # A single frame has zero scatter by definition; pin it exactly.
    var_matrix[length == 1] = 0.0
    for arr in (diag_prefix, block_prefix, var_matrix):
        arr.setflags(write=False)
    return VarianceTable(diag_prefix=diag_prefix, block_prefix=block_prefix, var_matrix=var_matrix)


def placement_objective(table: VarianceTable, change_points: Sequence[int]) -> float:
    """Total scatter of an explicit placement, accumulated left to right.

    Uses the exact same addition order as the DP solvers so equal
    placements produce bit-identical totals.
    """
    bounds = (0, *change_points, table.n)
    total = 0.0
    for a, b in zip(bounds[:-1], bounds[1:]):
        total += table.var(a, b)
    return total


def segment_count_penalty(m: int, n: int, weight: float = 1.0) -> float:
    """Parsimony penalty weight * m * ln(m/n + 1) charged against m segments."""
    return weight * m * math.log(m / n + 1.0)


def _check_feasible(n: int, m: int, min_len: int) -> None:
    if min_len < 1:
        raise InfeasibleSegmentCountError(f"minimum segment length must be >= 1, got {min_len}")
    if m < 1 or m * min_len > n:
        raise InfeasibleSegmentCountError(
            f"cannot cut {n} candidates into {m} segments of length >= {min_len}"
        )


def _solve_rows(table: VarianceTable, m_max: int, min_len: int):
    """Fill DP rows 1..m_max of best-cost prefixes plus argmin backpointers.

    cost[i][j] is the optimal scatter of splitting [0, j) into i segments
    of length >= min_len (inf when infeasible); back[i][j] the leftmost
    argmin start of the last segment. Window costs are laid out with j as
    the leading axis so every reduction streams over contiguous memory.
    """
    n = table.n
    idx = np.arange(n + 1)
    allowed = (idx[:, None] - idx[None, :]) >= min_len
    masked = np.where(allowed, table.var_matrix.T, np.inf)  # [j, t] -> var(t, j)

    cost = np.full((m_max + 1, n + 1), np.inf)
    back = np.zeros((m_max + 1, n + 1), dtype=np.int32)
    cost[1] = masked[:, 0]
    # Work in j-blocks small enough to stay cache-resident; the add/argmin
    # pair then streams masked exactly once per DP row.
    block = max(4 * 2**20 // (8 * (n + 1)), 1)
    cand = np.empty((block, n + 1))
    for i in range(2, m_max + 1):
        prev = cost[i - 1][None, :]
        for j0 in range(0, n + 1, block):
            j1 = min(j0 + block, n + 1)
            width = j1 - j0
            np.add(prev, masked[j0:j1], out=cand[:width])
            best = np.argmin(cand[:width], axis=1)
            back[i, j0:j1] = best
            cost[i, j0:j1] = cand[np.arange(width), best]
    return cost, back


def _backtrack(back: np.ndarray, m: int, n: int) -> tuple[int, ...]:
    cps = []
    j = n
    for i in range(m, 1, -1):
        j = int(back[i, j])
        cps.append(j)
    cps.reverse()
    return tuple(cps)


def solve_fixed(table: VarianceTable, m: int, min_segment_length: int = 1) -> Segmentation:
    """Globally optimal segmentation into exactly m segments.

    Exact dynamic program over cost[i][j] = min_t cost[i-1][t] + var(t, j),
    O(m n^2) time; ties take the smallest t at every cell, which makes the
    result deterministic and comparable against exhaustive enumeration.
    """
    _check_feasible(table.n, m, min_segment_length)
    cost, back = _solve_rows(table, m, min_segment_length)
    cps = _backtrack(back, m, table.n)
    return Segmentation(
        n=table.n,
        m=m,
        change_points=cps,
        objective=float(cost[m, table.n]),
        min_segment_length=min_segment_length,
    )


def solve_auto(
    table: VarianceTable,
    m_max: int,
    penalty_weight: float = 1.0,
    min_segment_length: int = 1,
) -> Segmentation:
    """Segmentation with the segment count chosen by penalized selection.

    Shares one DP sweep up to m_max, then picks the m in [1, m_max]
    minimizing objective(m) + weight * m * ln(m/n + 1); equal totals go to
    the smaller m. The returned objective excludes the penalty, which is
    reported separately.
    """
    if not (penalty_weight > 0) or not math.isfinite(penalty_weight):
        raise NonPositivePenaltyWeightError(f"penalty weight must be positive, got {penalty_weight}")
    _check_feasible(table.n, m_max, min_segment_length)
    n = table.n
    cost, back = _solve_rows(table, m_max, min_segment_length)
    best_m = 1
    best_total = math.inf
    for m in range(1, m_max + 1):
        total = float(cost[m, n]) + segment_count_penalty(m, n, penalty_weight)
        if total < best_total:
            best_total = total
            best_m = m
    return Segmentation(
        n=n,
        m=best_m,
        change_points=_backtrack(back, best_m, n),
        objective=float(cost[best_m, n]),
        penalty=segment_count_penalty(best_m, n, penalty_weight),
        penalty_weight=penalty_weight,
        min_segment_length=min_segment_length,
    )


def solve_range(
    table: VarianceTable,
    m_values: Iterable[int],
    min_segment_length: int = 1,
) -> list[Segmentation]:
    """solve_fixed for several segment counts off a single DP sweep."""
    ms = [int(m) for m in m_values]
    if not ms:
        return []
    for m in ms:
        _check_feasible(table.n, m, min_segment_length)
    cost, back = _solve_rows(table, max(ms), min_segment_length)
    return [
        Segmentation(
            n=table.n,
            m=m,
            change_points=_backtrack(back, m, table.n),
            objective=float(cost[m, table.n]),
            min_segment_length=min_segment_length,
        )
        for m in ms
    ]
