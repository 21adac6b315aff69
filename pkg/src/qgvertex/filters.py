"""Uniform-block couplings and spectral branching filters.

A vertex of degree n with ranks (r_a, r_b) splits its edges into three
blocks of sizes m = r_a + r_b - n, n - r_a and n - r_b (labels 1, 2, 3).
Filling each PQRS block with a single real constant,

    P = p F,   Q = q F,   R = r F,   S = s F,

with F the all-ones matrix of the appropriate size, gives a coupling whose
block-to-block scattering amplitudes have closed forms at both momentum
limits.  Tuning p, q, r routes low-k and high-k particles into different
blocks, which is the spectral-branching-filter design reproduced by the
``fig1`` and ``fig2`` presets.

For m > 1 the block S = s F is rank one, hence singular, while the unique
PQRS decomposition assumes a regular S.  Such couplings are accepted here:
scattering and the high-k limit never need S^{-1}, and the exact low-k
limit is obtained from the singular-aware limit routine.  The closed-form
low-k amplitudes correspond to the regular-S limit expression; they still
agree with the exact limit on all cross-block entries (the correction is
confined to the diagonal block of the first edge block), and any
disagreement with the matrix limits is reported, never reconciled
silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidShape, SingularShift, SingularSBlock
from .forms import PQRSForm
from .scattering import limit_high_k, limit_low_k, smatrix_pqrs

#: default dominance ratio of probabilities used to read ">>" in a design
DEFAULT_DOMINANCE = 3.0

#: tolerance for closed-form vs matrix-limit agreement reports
CLOSED_FORM_TOL = 1e-6


@dataclass(frozen=True)
class FilterParams:
    """Uniform-block design parameters (all block constants real)."""

    n: int
    r_a: int
    r_b: int
    p: float
    q: float
    r: float
    s: float

    def __post_init__(self):
        m = self.r_a + self.r_b - self.n
        if self.n < 1 or not (0 <= self.r_a <= self.n and 0 <= self.r_b <= self.n) or m < 0:
            raise InvalidShape(
                f"block sizes ({m}, {self.n - self.r_a}, {self.n - self.r_b}) "
                f"are not admissible for n = {self.n}"
            )
        if m > 0 and self.s == 0.0:
            raise SingularSBlock("s must be nonzero when the S block is nonempty")

    @property
    def block_sizes(self) -> tuple[int, int, int]:
        return (self.r_a + self.r_b - self.n, self.n - self.r_a, self.n - self.r_b)


FIG1_PARAMS = FilterParams(n=5, r_a=3, r_b=4, p=2.5, q=1.2, r=0.0, s=3.0)
FIG2_PARAMS = FilterParams(n=5, r_a=3, r_b=4, p=0.0, q=1.2, r=2.1, s=0.2)
PRESETS = {"fig1": FIG1_PARAMS, "fig2": FIG2_PARAMS}

DELTA_DELTA_DELTAPRIME = "delta-delta-deltaprime"
DELTA_DELTAPRIME_DELTAPRIME = "delta-deltaprime-deltaprime"
NO_BRANCHING = "none"


def ones_block(rows: int, cols: int) -> np.ndarray:
    """All-ones matrix of the given size."""
    if rows < 0 or cols < 0:
        raise InvalidShape(f"negative block shape ({rows}, {cols})")
    return np.ones((rows, cols), dtype=complex)


def rank_one_inverse(m: int, alpha: float) -> np.ndarray:
    """(I + alpha F)^{-1} = I - alpha/(1 + alpha m) F, for the m x m all-ones F."""
    if m < 0:
        raise InvalidShape(f"negative size {m}")
    denom = 1.0 + alpha * m
    if abs(denom) <= 1e-14 * max(1.0, abs(alpha * m)):
        raise SingularShift(f"1 + alpha*m = {denom:g} vanishes for m={m}, alpha={alpha:g}")
    return np.eye(m, dtype=complex) - (alpha / denom) * ones_block(m, m)


def uniform_block_pqrs(fp: FilterParams) -> PQRSForm:
    """PQRS form with constant blocks and the identity edge numbering."""
    m, na, nb = fp.block_sizes
    return PQRSForm(
        n=fp.n,
        r_a=fp.r_a,
        r_b=fp.r_b,
        perm=tuple(range(fp.n)),
        P=linalg.frozen(fp.p * ones_block(m, nb)),
        Q=linalg.frozen(fp.q * ones_block(na, nb)),
        R=linalg.frozen(fp.r * ones_block(na, m)),
        S=linalg.frozen(fp.s * ones_block(m, m)),
    )


def _block_slices(sizes: tuple[int, int, int]) -> dict[int, slice]:
    m, na, nb = sizes
    return {1: slice(0, m), 2: slice(m, m + na), 3: slice(m + na, m + na + nb)}


@dataclass(frozen=True)
class LimitMismatch:
    """Closed-form value disagreeing with the matrix limit for one block pair."""

    side: str  # "high-k" or "low-k"
    pair: tuple[int, int]
    closed_form: float
    matrix_limit: float


@dataclass(frozen=True)
class AmplitudeLimits:
    """Block-to-block amplitude magnitudes of both momentum limits.

    ``high_k`` / ``low_k`` hold the cross-block values |S_{mu nu}| taken
    from the matrix limits; ``*_reflection`` the diagonal magnitudes and
    ``*_intra`` the within-block off-diagonal ones (blocks of size >= 2).
    ``closed_form_high`` / ``closed_form_low`` are the closed-form
    expressions for the pairs (1,2), (2,3), (3,1); entries disagreeing
    with the matrix limits beyond tolerance are listed in ``mismatches``.
    """

    l_p: int
    l_q: int
    l_r: int
    high_k: dict[tuple[int, int], float]
    low_k: dict[tuple[int, int], float]
    high_k_reflection: dict[int, float]
    low_k_reflection: dict[int, float]
    high_k_intra: dict[int, float]
    low_k_intra: dict[int, float]
    closed_form_high: dict[tuple[int, int], float]
    closed_form_low: dict[tuple[int, int], float]
    mismatches: tuple[LimitMismatch, ...]


def amplitude_limits(fp: FilterParams, tol: float = CLOSED_FORM_TOL) -> AmplitudeLimits:
    """Evaluate both limit tables and check the closed forms against them."""
    m, na, nb = fp.block_sizes
    form = uniform_block_pqrs(fp)
    hi = np.abs(np.asarray(limit_high_k(form).entries))
    lo = np.abs(np.asarray(limit_low_k(form, allow_singular=True).entries))
    sizes = {1: m, 2: na, 3: nb}
    sl = _block_slices((m, na, nb))

    l_p = nb * m
    l_q = nb * na
    l_r = na * m
    g = fp.q - m * fp.r * fp.p
    denom_hi = 1.0 + l_p * fp.p**2 + l_q * g**2
    denom_lo = 1.0 + l_r * fp.r**2 + l_q * fp.q**2
    closed_candidates_high = {
        (1, 2): 2.0 * nb * abs(fp.p) * abs(g) / denom_hi,
        (2, 3): 2.0 * abs(g) / denom_hi,
        (3, 1): 2.0 * abs(fp.p) / denom_hi,
    }
    closed_candidates_low = {
        (1, 2): 2.0 * abs(fp.r) / denom_lo,
        (2, 3): 2.0 * abs(fp.q) / denom_lo,
        (3, 1): 2.0 * na * abs(fp.r) * abs(fp.q) / denom_lo,
    }

    high_k, low_k = {}, {}
    high_refl, low_refl = {}, {}
    high_intra, low_intra = {}, {}
    for mu in (1, 2, 3):
        if sizes[mu] == 0:
            continue
        for nu in (1, 2, 3):
            if sizes[nu] == 0:
                continue
            hi_blk = hi[sl[mu], sl[nu]]
            lo_blk = lo[sl[mu], sl[nu]]
            if mu == nu:
                high_refl[mu] = float(np.mean(np.diagonal(hi_blk)))
                low_refl[mu] = float(np.mean(np.diagonal(lo_blk)))
                if sizes[mu] > 1:
                    off = ~np.eye(sizes[mu], dtype=bool)
                    high_intra[mu] = float(np.mean(hi_blk[off]))
                    low_intra[mu] = float(np.mean(lo_blk[off]))
            else:
                high_k[(mu, nu)] = float(np.mean(hi_blk))
                low_k[(mu, nu)] = float(np.mean(lo_blk))

    closed_high = {p: v for p, v in closed_candidates_high.items() if p in high_k}
    closed_low = {p: v for p, v in closed_candidates_low.items() if p in low_k}
    mismatches = [
        LimitMismatch("high-k", pair, value, high_k[pair])
        for pair, value in closed_high.items() if abs(value - high_k[pair]) > tol
    ] + [
        LimitMismatch("low-k", pair, value, low_k[pair])
        for pair, value in closed_low.items() if abs(value - low_k[pair]) > tol
    ]
    return AmplitudeLimits(
        l_p=l_p, l_q=l_q, l_r=l_r,
        high_k=high_k, low_k=low_k,
        high_k_reflection=high_refl, low_k_reflection=low_refl,
        high_k_intra=high_intra, low_k_intra=low_intra,
        closed_form_high=closed_high, closed_form_low=closed_low,
        mismatches=tuple(mismatches),
    )


def classify_branching(fp: FilterParams, threshold: float = DEFAULT_DOMINANCE) -> str:
    """Branching label from the dominance pattern of the limit amplitudes.

    ``threshold`` is the required ratio of probabilities (squared
    amplitudes) for reading one channel as dominating another.  Couplings
    whose three blocks are not all nonempty carry no tripartite label.
    """
    if threshold <= 1.0:
        raise ValueError("dominance threshold must exceed 1")
    if any(size == 0 for size in fp.block_sizes):
        return NO_BRANCHING
    limits = amplitude_limits(fp)
    hi12, hi23, hi31 = (limits.high_k[p] ** 2 for p in ((1, 2), (2, 3), (3, 1)))
    lo12, lo23, lo31 = (limits.low_k[p] ** 2 for p in ((1, 2), (2, 3), (3, 1)))
    floor = 1e-24  # a dominant channel must carry actual probability
    if (min(hi31, hi12) >= max(threshold * hi23, floor)
            and lo23 >= max(threshold * max(lo31, lo12), floor)):
        return DELTA_DELTA_DELTAPRIME
    if (hi23 >= max(threshold * max(hi12, hi31), floor)
            and min(lo12, lo31) >= max(threshold * lo23, floor)):
        return DELTA_DELTAPRIME_DELTAPRIME
    return NO_BRANCHING


# ---------------------------------------------------------------------------
# Momentum sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SweepTable:
    """Transmission probabilities |S_ij(k)|^2 on a momentum grid.

    When ``block_sizes`` is set, rows also carry block-pair aggregates:
    the mean probability over each cross pair, plus per-block reflection
    (diagonal) and intra-block (off-diagonal) means.
    """

    n: int
    ks: np.ndarray
    probabilities: np.ndarray  # (len(ks), n, n), real
    block_sizes: tuple[int, int, int] | None = None

    def header(self) -> list[str]:
        cols = ["k"]
        cols += [f"S{i + 1}{j + 1}" for i in range(self.n) for j in range(self.n)]
        cols += self._block_names()
        return cols

    def _block_names(self) -> list[str]:
        if self.block_sizes is None:
            return []
        sizes = {1: self.block_sizes[0], 2: self.block_sizes[1], 3: self.block_sizes[2]}
        names = []
        for mu in (1, 2, 3):
            if sizes[mu] == 0:
                continue
            for nu in (1, 2, 3):
                if sizes[nu] == 0:
                    continue
                if mu == nu:
                    names.append(f"b{mu}{mu}_refl")
                    if sizes[mu] > 1:
                        names.append(f"b{mu}{mu}_intra")
                else:
                    names.append(f"b{mu}{nu}")
        return names

    def _block_values(self, prob: np.ndarray) -> list[float]:
        if self.block_sizes is None:
            return []
        sizes = {1: self.block_sizes[0], 2: self.block_sizes[1], 3: self.block_sizes[2]}
        sl = _block_slices(self.block_sizes)
        values = []
        for mu in (1, 2, 3):
            if sizes[mu] == 0:
                continue
            for nu in (1, 2, 3):
                if sizes[nu] == 0:
                    continue
                blk = prob[sl[mu], sl[nu]]
                if mu == nu:
                    values.append(float(np.mean(np.diagonal(blk))))
                    if sizes[mu] > 1:
                        off = ~np.eye(sizes[mu], dtype=bool)
                        values.append(float(np.mean(blk[off])))
                else:
                    values.append(float(np.mean(blk)))
        return values

    def rows(self):
        """Yield one list of floats per momentum, matching ``header()``."""
        for idx, k in enumerate(self.ks):
            prob = self.probabilities[idx]
            yield [float(k)] + [float(x) for x in prob.reshape(-1)] + self._block_values(prob)


def probability_sweep(fp: FilterParams, k_grid) -> SweepTable:
    """Evaluate |S(k)|^2 of the uniform-block coupling over ``k_grid``."""
    ks = np.asarray(k_grid, dtype=float)
    if ks.ndim != 1 or ks.size < 1:
        raise ValueError("k_grid must be a non-empty 1-d array")
    if np.any(ks <= 0.0) or np.any(np.diff(ks) <= 0.0):
        raise ValueError("k_grid must be strictly positive and ascending")
    form = uniform_block_pqrs(fp)
    probs = np.empty((ks.size, fp.n, fp.n), dtype=float)
    for i, k in enumerate(ks):
        probs[i] = np.abs(np.asarray(smatrix_pqrs(form, float(k)).entries)) ** 2
    return SweepTable(n=fp.n, ks=ks, probabilities=probs, block_sizes=fp.block_sizes)
