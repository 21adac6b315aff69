"""Vertex scattering matrices, their limits and momentum expansions.

The on-shell scattering matrix of a coupling (A, B) at momentum k > 0 is

    S(k) = -(A + ikB)^{-1} (A - ikB),

an n x n unitary matrix.  ``smatrix_direct`` evaluates this definition and
serves as the reference oracle; the ST, reverse-ST, PQRS and projector
routes compute the same matrix while inverting only blocks of the sizes
fixed by the ranks (r_b, r_a, and n - r_a with r_a + r_b - n
respectively).  Form-based routes work in permuted coordinates and are
conjugated back, so every function here returns S(k) in the original edge
numbering.

k = 0 and k = infinity are never substituted into the definition; the
closed-form limit matrices are used instead.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .coupling import VertexCoupling
from .errors import SeriesDivergence, SingularSBlock
from .forms import PQRSForm, ProjectorForm, ReverseSTForm, STForm, _pqrs_stacks, build_x

#: momenta used when deciding whether two couplings describe the same vertex
EQUIVALENCE_GRID = (0.1, 1.0, 10.0)


@dataclass(frozen=True, eq=False)
class SMatrix:
    """Scattering matrix at momentum ``k`` (math.inf and 0.0 mark limits)."""

    n: int
    k: float
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class ScatteringSolution:
    """Boundary data of the scattering solution for one incoming edge.

    psi = (I + S) e_j and dpsi = ik (S - I) e_j satisfy A psi + B dpsi = 0
    for the coupling the matrix was computed from.
    """

    edge: int
    k: float
    psi: np.ndarray
    dpsi: np.ndarray


@dataclass(frozen=True, eq=False)
class SeriesExpansion:
    """Truncated momentum expansion of S(k).

    ``kind`` is "high-k" (S(k) = sum_j C_j (1/ik)^j) or "low-k"
    (S(k) = sum_j C_j (ik)^j).  ``coefficients[0]`` equals the matching
    limit matrix.  ``spectral_radius`` bounds the geometric-series region:
    the series converges for k > spectral_radius (high-k) respectively
    k < 1/spectral_radius (low-k); nothing is claimed outside it.
    """

    n: int
    kind: str
    order: int
    coefficients: tuple[np.ndarray, ...]
    spectral_radius: float

    @property
    def limit(self) -> np.ndarray:
        return self.coefficients[0]

    def converges_at(self, k: float) -> bool:
        if self.kind == "high-k":
            return k > self.spectral_radius
        return k * self.spectral_radius < 1.0

    def evaluate(self, k: float) -> np.ndarray:
        """Sum the truncated series at k; warns outside the convergence region."""
        _require_momentum(k)
        if not self.converges_at(k):
            warnings.warn(
                f"{self.kind} series evaluated at k={k:g} outside its convergence "
                f"region (spectral radius {self.spectral_radius:g}); the expansion "
                "is asymptotic and the result is the caller's risk",
                SeriesDivergence,
                stacklevel=2,
            )
        base = 1.0 / (1j * k) if self.kind == "high-k" else 1j * k
        total = np.zeros((self.n, self.n), dtype=complex)
        for j, c in enumerate(self.coefficients):
            total += c * base**j
        return total


def _require_momentum(k: float) -> None:
    if not (k > 0.0 and math.isfinite(k)):
        raise ValueError(f"momentum k must be positive and finite, got {k!r}")


def _unpermute(s: np.ndarray, perm) -> np.ndarray:
    pmat = linalg.permutation_matrix(perm)
    return pmat.T @ s @ pmat


# ---------------------------------------------------------------------------
# The four scattering routes
# ---------------------------------------------------------------------------

def smatrix_direct(c: VertexCoupling, k: float) -> SMatrix:
    """S(k) from the defining pair; inverts the full n x n matrix A + ikB."""
    _require_momentum(k)
    s = -np.linalg.solve(np.asarray(c.A) + 1j * k * np.asarray(c.B),
                         np.asarray(c.A) - 1j * k * np.asarray(c.B))
    return SMatrix(n=c.n, k=k, entries=linalg.frozen(s))


def smatrix_st(f: STForm, k: float) -> SMatrix:
    """S(k) from the ST form; inverts only an r_b x r_b matrix."""
    _require_momentum(k)
    n, r_b = f.n, f.r_b
    left = np.zeros((n, r_b), dtype=complex)
    left[:r_b] = np.eye(r_b)
    left[r_b:] = f.T.conj().T
    mid = np.eye(r_b) + f.T @ f.T.conj().T - np.asarray(f.S) / (1j * k)
    s = -np.eye(n, dtype=complex) + 2.0 * left @ np.linalg.solve(mid, left.conj().T)
    return SMatrix(n=n, k=k, entries=linalg.frozen(_unpermute(s, f.perm)))


def smatrix_reverse_st(f: ReverseSTForm, k: float) -> SMatrix:
    """S(k) from the reverse ST form; inverts only an r_a x r_a matrix."""
    _require_momentum(k)
    n, r_a = f.n, f.r_a
    left = np.zeros((n, r_a), dtype=complex)
    left[:r_a] = np.eye(r_a)
    left[r_a:] = f.T.conj().T
    mid = np.eye(r_a) + f.T @ f.T.conj().T - 1j * k * np.asarray(f.S)
    s = np.eye(n, dtype=complex) - 2.0 * left @ np.linalg.solve(mid, left.conj().T)
    return SMatrix(n=n, k=k, entries=linalg.frozen(_unpermute(s, f.perm)))


def smatrix_pqrs(f: PQRSForm, k: float) -> SMatrix:
    """S(k) from the PQRS form.

    Inverts one (n - r_a) block and one (r_a + r_b - n) block.  The
    momentum-dependent term reads 2 X (X*X - S/ik)^{-1} X*; it is well
    defined for every Hermitian S at k > 0, including singular S, and is
    absent for scale-invariant couplings (empty S block).
    """
    _require_momentum(k)
    m, na, _ = f.block_sizes
    n = f.n
    _, Z = _pqrs_stacks(f)
    core = np.eye(na) + f.R @ f.R.conj().T + f.Q @ f.Q.conj().T
    s = -np.eye(n, dtype=complex) + 2.0 * Z @ np.linalg.solve(core, Z.conj().T)
    if m > 0:
        X = build_x(f)
        mid = X.conj().T @ X - np.asarray(f.S) / (1j * k)
        s = s + 2.0 * X @ np.linalg.solve(mid, X.conj().T)
    return SMatrix(n=n, k=k, entries=linalg.frozen(_unpermute(s, f.perm)))


def smatrix_projector(p: ProjectorForm, k: float) -> SMatrix:
    """S(k) = -proj_p + proj_q - (lam - ik)^{-1} (lam + ik) proj_c.

    The resolvent is inverted on range(proj_c) only, through an
    orthonormal eigenbasis of the projector.
    """
    _require_momentum(k)
    n = p.n
    w, v = np.linalg.eigh(np.asarray(p.projector_c))
    qc = v[:, w > 0.5]
    mc = qc.shape[1]
    s = -np.asarray(p.projector_p) + np.asarray(p.projector_q)
    if mc > 0:
        lam_c = qc.conj().T @ np.asarray(p.lam) @ qc
        resolvent = np.linalg.solve(lam_c - 1j * k * np.eye(mc),
                                    (lam_c + 1j * k * np.eye(mc)) @ qc.conj().T)
        s = s - qc @ resolvent
    return SMatrix(n=n, k=k, entries=linalg.frozen(s))


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------

def _high_k_matrix(f: PQRSForm) -> np.ndarray:
    """Scale-invariant limit in permuted coordinates: I - 2 Y (Y*Y)^{-1} Y*."""
    Y, _ = _pqrs_stacks(f)
    gram = Y.conj().T @ Y  # = I + P*P + (RP-Q)*(RP-Q)
    return np.eye(f.n, dtype=complex) - 2.0 * Y @ np.linalg.solve(gram, Y.conj().T)


def _low_k_matrix(f: PQRSForm) -> np.ndarray:
    """Reverse scale-invariant limit in permuted coordinates: -I + 2 Z (Z*Z)^{-1} Z*."""
    _, Z = _pqrs_stacks(f)
    gram = Z.conj().T @ Z  # = I + RR* + QQ*
    return -np.eye(f.n, dtype=complex) + 2.0 * Z @ np.linalg.solve(gram, Z.conj().T)


def _s_block_is_singular(f: PQRSForm, tol: float) -> bool:
    m = f.block_sizes[0]
    return m > 0 and linalg.rank(np.asarray(f.S), tol) < m


def limit_high_k(f: PQRSForm) -> SMatrix:
    """k -> infinity limit of S(k); k-independent, needs no condition on S."""
    return SMatrix(n=f.n, k=math.inf,
                   entries=linalg.frozen(_unpermute(_high_k_matrix(f), f.perm)))


def limit_low_k(f: PQRSForm, allow_singular: bool = False,
                tol: float = linalg.DEFAULT_RTOL) -> SMatrix:
    """k -> 0 limit of S(k).

    For an empty or regular S block this is -I + 2 Z (Z*Z)^{-1} Z*.  When
    S is present but singular that expression is not the limit any more: a
    SingularSBlock is raised unless ``allow_singular`` is set, in which
    case the exact limit is returned, i.e. the expression above plus twice
    the projector onto the part of range(X) on which S acts as zero.
    """
    m = f.block_sizes[0]
    base = _low_k_matrix(f)
    if m > 0 and _s_block_is_singular(f, tol):
        if not allow_singular:
            raise SingularSBlock(
                "the S block is numerically singular; the closed-form k -> 0 "
                "limit does not apply (pass allow_singular=True for the exact limit)"
            )
        X = build_x(f)
        qx, rx = np.linalg.qr(X)
        lam_c = np.linalg.solve(rx.conj().T, np.asarray(f.S)) @ np.linalg.inv(rx)
        lam_c = linalg.hermitian_part(lam_c)
        w, v = np.linalg.eigh(lam_c)
        scale = max(float(np.max(np.abs(w))), 1.0) if w.size else 1.0
        kernel = v[:, np.abs(w) <= tol * scale]
        wk = qx @ kernel
        base = base + 2.0 * wk @ wk.conj().T
    return SMatrix(n=f.n, k=0.0, entries=linalg.frozen(_unpermute(base, f.perm)))


# ---------------------------------------------------------------------------
# Momentum expansions
# ---------------------------------------------------------------------------

def _spectral_radius(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def expand(f: PQRSForm | STForm, kind: str, order: int,
           tol: float = linalg.DEFAULT_RTOL) -> SeriesExpansion:
    """Truncated geometric expansion of S(k) around k = infinity or k = 0.

    high-k:  C_0 is the scale-invariant limit and, for j >= 1,
             C_j = 2 X [(X*X)^{-1} S]^j (X*X)^{-1} X*          (PQRS form)
             C_j = 2 L [(I + TT*)^{-1} S]^j (I + TT*)^{-1} L*  (ST form)
    low-k:   C_0 is the reverse limit and, for j >= 1,
             C_j = -2 X (S^{-1} X*X)^{j-1} S^{-1} X*; this needs a regular
             S and is only available for the PQRS form.

    Coefficients are returned in the original edge numbering.
    """
    if order < 0:
        raise ValueError("expansion order must be non-negative")
    if kind not in ("high-k", "low-k"):
        raise ValueError(f"kind must be 'high-k' or 'low-k', got {kind!r}")

    if isinstance(f, STForm):
        if kind != "high-k":
            raise ValueError("the low-k expansion requires the PQRS form")
        n, r_b = f.n, f.r_b
        left = np.zeros((n, r_b), dtype=complex)
        left[:r_b] = np.eye(r_b)
        left[r_b:] = f.T.conj().T
        gram = np.eye(r_b) + f.T @ f.T.conj().T
        limit = -np.eye(n, dtype=complex) + 2.0 * left @ np.linalg.solve(gram, left.conj().T)
        step = np.linalg.solve(gram, np.asarray(f.S))
        coeffs = [limit]
        for j in range(1, order + 1):
            coeffs.append(2.0 * left @ np.linalg.matrix_power(step, j)
                          @ np.linalg.solve(gram, left.conj().T))
        radius = _spectral_radius(step)
        perm = f.perm
    else:
        m = f.block_sizes[0]
        n = f.n
        X = build_x(f)
        xtx = X.conj().T @ X
        if kind == "high-k":
            limit = _high_k_matrix(f)
            step = np.linalg.solve(xtx, np.asarray(f.S)) if m else np.zeros((0, 0), complex)
            coeffs = [limit]
            for j in range(1, order + 1):
                coeffs.append(2.0 * X @ np.linalg.matrix_power(step, j)
                              @ np.linalg.solve(xtx, X.conj().T))
            radius = _spectral_radius(step)
        else:
            if _s_block_is_singular(f, tol):
                raise SingularSBlock("the low-k expansion requires a regular S block")
            limit = _low_k_matrix(f)
            s_inv = linalg.inverse(np.asarray(f.S), tol)
            step = s_inv @ xtx
            coeffs = [limit]
            for j in range(1, order + 1):
                coeffs.append(-2.0 * X @ np.linalg.matrix_power(step, j - 1)
                              @ s_inv @ X.conj().T)
            radius = _spectral_radius(step)
        perm = f.perm

    coeffs = tuple(linalg.frozen(_unpermute(c, perm)) for c in coeffs)
    return SeriesExpansion(n=n, kind=kind, order=order,
                           coefficients=coeffs, spectral_radius=radius)


# ---------------------------------------------------------------------------
# Physical consistency
# ---------------------------------------------------------------------------

def scattering_solution(s: SMatrix, edge: int) -> ScatteringSolution:
    """Boundary data for a wave entering on ``edge`` (0-based)."""
    _require_momentum(s.k)
    if not (0 <= edge < s.n):
        raise ValueError(f"edge index {edge} out of range for degree {s.n}")
    e = np.zeros(s.n, dtype=complex)
    e[edge] = 1.0
    entries = np.asarray(s.entries)
    psi = (np.eye(s.n) + entries) @ e
    dpsi = 1j * s.k * (entries - np.eye(s.n)) @ e
    return ScatteringSolution(edge=edge, k=s.k, psi=psi, dpsi=dpsi)


def bc_residual(c: VertexCoupling, s: SMatrix) -> float:
    """max-norm of A (I + S) + ik B (S - I); ~0 when S solves the coupling."""
    _require_momentum(s.k)
    entries = np.asarray(s.entries)
    eye = np.eye(c.n)
    res = np.asarray(c.A) @ (eye + entries) + 1j * s.k * np.asarray(c.B) @ (entries - eye)
    return linalg.max_norm(res)


def smatrix_distance(c1: VertexCoupling, c2: VertexCoupling,
                     ks=EQUIVALENCE_GRID) -> float:
    """Largest max-norm gap between the two scattering matrices over ``ks``."""
    return max(
        linalg.max_norm(np.asarray(smatrix_direct(c1, k).entries)
                        - np.asarray(smatrix_direct(c2, k).entries))
        for k in ks
    )


def couplings_equivalent(c1: VertexCoupling, c2: VertexCoupling,
                         ks=EQUIVALENCE_GRID, tol: float = 1e-9) -> bool:
    """Extensional equality: same S(k) on a momentum grid within ``tol``."""
    if c1.n != c2.n:
        return False
    return smatrix_distance(c1, c2, ks) <= tol
