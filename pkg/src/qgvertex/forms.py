"""Canonical descriptions of a vertex coupling and parameter counting.

Every admissible pair (A, B) can be rewritten, after renumbering the edges
by a permutation Pi and multiplying the system from the left by an
invertible matrix, in one of several unique shapes:

* ST form, organized by r_b = rank(B):

      ( I  T )            ( S    0 )
      (      ) Psi'  =    (        ) Psi ,      S Hermitian (r_b x r_b)
      ( 0  0 )            ( -T*  I )

* reverse ST form, the same shape with the roles of Psi and Psi'
  exchanged and r_a = rank(A) in place of r_b;

* PQRS form, organized by both ranks, with blocks of sizes
  m = r_a + r_b - n, n - r_a, n - r_b:

      ( I  0  P )          ( S    -SR*      0 )
      ( R  I  Q ) Psi'  =  ( 0     0        0 ) Psi ,
      ( 0  0  0 )          ( -P*  (RP-Q)*   I )

  where S is Hermitian (and invertible whenever the construction below
  produced it from a coupling);

* projector form: orthogonal projectors (proj_p, proj_q, proj_c) summing
  to the identity plus a Hermitian lam supported on range(proj_c), with
  boundary conditions  proj_p Psi = 0,  proj_q Psi' = 0,
  proj_c Psi' = lam Psi.

Permutations are stored explicitly (``perm[i]`` is the original edge index
sitting at permuted slot i) and applied on reconstruction, so callers
always see matrices in their original edge numbering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .coupling import VertexCoupling, validate
from .errors import InvalidRankPair, ShapeMismatch, SingularMatrix, SingularSBlock


@dataclass(frozen=True, eq=False)
class STForm:
    n: int
    r_b: int
    perm: tuple[int, ...]
    S: np.ndarray  # r_b x r_b, Hermitian
    T: np.ndarray  # r_b x (n - r_b)


@dataclass(frozen=True, eq=False)
class ReverseSTForm:
    n: int
    r_a: int
    perm: tuple[int, ...]
    S: np.ndarray  # r_a x r_a, Hermitian
    T: np.ndarray  # r_a x (n - r_a)


@dataclass(frozen=True, eq=False)
class PQRSForm:
    n: int
    r_a: int
    r_b: int
    perm: tuple[int, ...]
    P: np.ndarray  # m x (n - r_b)
    Q: np.ndarray  # (n - r_a) x (n - r_b)
    R: np.ndarray  # (n - r_a) x m
    S: np.ndarray  # m x m, Hermitian

    @property
    def block_sizes(self) -> tuple[int, int, int]:
        """(m, n - r_a, n - r_b) with m = r_a + r_b - n."""
        return (self.r_a + self.r_b - self.n, self.n - self.r_a, self.n - self.r_b)


@dataclass(frozen=True, eq=False)
class ProjectorForm:
    """Projector description; all matrices act in the original numbering."""

    n: int
    projector_p: np.ndarray  # annihilates Psi
    projector_q: np.ndarray  # annihilates Psi'
    projector_c: np.ndarray  # I - projector_p - projector_q
    lam: np.ndarray          # Hermitian, lam = projector_c lam projector_c


# ---------------------------------------------------------------------------
# ST reduction
# ---------------------------------------------------------------------------

def _greedy_independent_columns(M: np.ndarray, count: int, tol: float) -> list[int]:
    """Lexicographically smallest set of ``count`` independent columns of M."""
    picked: list[int] = []
    for j in range(M.shape[1]):
        if len(picked) == count:
            break
        if linalg.rank(M[:, picked + [j]], tol) == len(picked) + 1:
            picked.append(j)
    if len(picked) != count:
        raise SingularMatrix(
            f"found only {len(picked)} independent columns where {count} were expected"
        )
    return picked


def _st_reduce(A: np.ndarray, B: np.ndarray, r_b: int, tol: float):
    """Reduce the pair (A, B) to ST shape; returns (perm, S, T).

    The permutation moves the lexicographically earliest independent
    columns of B to the front.  An invertible left factor M with
    M B_perm = (I T; 0 0) is built from a basis completion of those
    columns; admissibility then forces -M A_perm into the shape
    (S 0; -T* I) after eliminating its lower-right block, and S is
    obtained as the corresponding Schur complement.
    """
    n = A.shape[0]
    picked = _greedy_independent_columns(B, r_b, tol)
    rest = [j for j in range(n) if j not in picked]
    perm = tuple(picked + rest)
    pmat = linalg.permutation_matrix(perm)
    At = A @ pmat.T
    Bt = B @ pmat.T

    B1 = Bt[:, :r_b]
    T = np.linalg.lstsq(B1, Bt[:, r_b:], rcond=None)[0]
    q, _ = np.linalg.qr(B1, mode="complete")
    W = np.concatenate([B1, q[:, r_b:]], axis=1)
    Ap = -np.linalg.solve(W, At)

    A12 = Ap[:r_b, r_b:]
    A21 = Ap[r_b:, :r_b]
    A22 = Ap[r_b:, r_b:]
    if r_b < n and linalg.rank(A22, tol) < n - r_b:
        raise SingularMatrix("lower-right block of the reduced pair is singular; "
                             "the input pair is numerically inadmissible")
    S = linalg.hermitian_part(Ap[:r_b, :r_b] - A12 @ np.linalg.solve(A22, A21))
    return perm, S, T


def to_st_form(c: VertexCoupling) -> STForm:
    """Unique ST form of a coupling, organized by r_b = rank(B)."""
    perm, S, T = _st_reduce(np.asarray(c.A), np.asarray(c.B), c.r_b, c.tol)
    return STForm(n=c.n, r_b=c.r_b, perm=perm, S=linalg.frozen(S), T=linalg.frozen(T))


def to_reverse_st_form(c: VertexCoupling) -> ReverseSTForm:
    """Unique reverse ST form, organized by r_a = rank(A).

    The reduction is the ST reduction applied to the swapped pair (B, A),
    which is admissible exactly when (A, B) is.
    """
    perm, S, T = _st_reduce(np.asarray(c.B), np.asarray(c.A), c.r_a, c.tol)
    return ReverseSTForm(n=c.n, r_a=c.r_a, perm=perm, S=linalg.frozen(S), T=linalg.frozen(T))


def st_to_matrices(f: STForm, tol: float = linalg.DEFAULT_RTOL) -> VertexCoupling:
    """Assemble (A, B) from an ST form and validate, in original numbering."""
    n, r_b = f.n, f.r_b
    pmat = linalg.permutation_matrix(f.perm)
    Bh = np.zeros((n, n), dtype=complex)
    Bh[:r_b, :r_b] = np.eye(r_b)
    Bh[:r_b, r_b:] = f.T
    Ah = np.zeros((n, n), dtype=complex)
    Ah[:r_b, :r_b] = f.S
    Ah[r_b:, :r_b] = -f.T.conj().T
    Ah[r_b:, r_b:] = np.eye(n - r_b)
    return validate(-Ah @ pmat, Bh @ pmat, tol)


def reverse_st_to_matrices(f: ReverseSTForm, tol: float = linalg.DEFAULT_RTOL) -> VertexCoupling:
    """Assemble (A, B) from a reverse ST form and validate."""
    n, r_a = f.n, f.r_a
    pmat = linalg.permutation_matrix(f.perm)
    Ah = np.zeros((n, n), dtype=complex)
    Ah[:r_a, :r_a] = np.eye(r_a)
    Ah[:r_a, r_a:] = f.T
    Bh = np.zeros((n, n), dtype=complex)
    Bh[:r_a, :r_a] = f.S
    Bh[r_a:, :r_a] = -f.T.conj().T
    Bh[r_a:, r_a:] = np.eye(n - r_a)
    return validate(Ah @ pmat, -Bh @ pmat, tol)


# ---------------------------------------------------------------------------
# PQRS form
# ---------------------------------------------------------------------------

def to_pqrs_form(c: VertexCoupling) -> PQRSForm:
    """Unique PQRS form of a coupling.

    Built from the ST form: the m = r_a + r_b - n lexicographically
    earliest independent rows of S are permuted to the top (a secondary
    renumbering of the first r_b edges), the dependent rows are expressed
    through them by a unique matrix R, and one more left multiplication
    clears them.  The extracted diagonal block S11 is Hermitian and
    invertible whenever the edge renumbering above succeeded.
    """
    st = to_st_form(c)
    n, r_b = c.n, c.r_b
    m = c.r_a + c.r_b - n

    S_st = np.asarray(st.S)
    T_st = np.asarray(st.T)
    try:
        picked = _greedy_independent_columns(S_st.conj().T, m, c.tol)
    except SingularMatrix as exc:
        raise SingularSBlock(
            "the Hermitian block of the ST form is numerically rank-deficient "
            f"(expected rank {m}); the PQRS reduction would not be unique"
        ) from exc
    rest = [i for i in range(r_b) if i not in picked]
    sigma = picked + rest
    Sp = S_st[np.ix_(sigma, sigma)]
    Tp = T_st[sigma, :]
    perm = tuple(st.perm[i] for i in sigma) + st.perm[r_b:]

    top = Sp[:m, :]   # (S11 S21*), independent rows
    bot = Sp[m:, :]   # (S21 S22), their linear combinations
    # unique R with bot = -R top, solved in the least-squares sense
    R = -np.linalg.lstsq(top.conj().T, bot.conj().T, rcond=None)[0].conj().T
    T1 = Tp[:m, :]
    T2 = Tp[m:, :]
    return PQRSForm(
        n=n,
        r_a=c.r_a,
        r_b=c.r_b,
        perm=perm,
        P=linalg.frozen(T1),
        Q=linalg.frozen(T2 + R @ T1),
        R=linalg.frozen(R),
        S=linalg.frozen(linalg.hermitian_part(Sp[:m, :m])),
    )


def _check_pqrs_shapes(f: PQRSForm) -> tuple[int, int, int]:
    m, na, nb = f.block_sizes
    if m < 0:
        raise InvalidRankPair(f"r_a + r_b - n = {m} is negative")
    expected = {"P": (m, nb), "Q": (na, nb), "R": (na, m), "S": (m, m)}
    for name, shape in expected.items():
        got = getattr(f, name).shape
        if got != shape:
            raise ShapeMismatch(f"block {name} has shape {got}, expected {shape}")
    return m, na, nb


def pqrs_to_matrices(f: PQRSForm, tol: float = linalg.DEFAULT_RTOL) -> VertexCoupling:
    """Assemble (A, B) from PQRS blocks, undo the permutation, validate.

    S only needs to be Hermitian here; with a singular S the assembled
    pair is still admissible, but its actual rank of A drops below the
    declared r_a, so the declared ranks match the validated ones only for
    regular S.
    """
    m, na, nb = _check_pqrs_shapes(f)
    n = f.n
    Bh = np.zeros((n, n), dtype=complex)
    Bh[:m, :m] = np.eye(m)
    Bh[:m, m + na:] = f.P
    Bh[m:m + na, :m] = f.R
    Bh[m:m + na, m:m + na] = np.eye(na)
    Bh[m:m + na, m + na:] = f.Q
    Rh = np.zeros((n, n), dtype=complex)
    Rh[:m, :m] = f.S
    Rh[:m, m:m + na] = -f.S @ f.R.conj().T
    Rh[m + na:, :m] = -f.P.conj().T
    Rh[m + na:, m:m + na] = (f.R @ f.P - f.Q).conj().T
    Rh[m + na:, m + na:] = np.eye(nb)
    pmat = linalg.permutation_matrix(f.perm)
    return validate(-Rh @ pmat, Bh @ pmat, tol)


# ---------------------------------------------------------------------------
# Projector form
# ---------------------------------------------------------------------------

def _pqrs_stacks(f: PQRSForm) -> tuple[np.ndarray, np.ndarray]:
    """Column stacks spanning ker(Psi conditions) and ker(Psi' conditions).

    Y = (-P; RP - Q; I) spans the subspace on which Psi is annihilated,
    Z = (R*; I; Q*) the one on which Psi' is annihilated; both are in
    permuted coordinates and have full column rank thanks to the identity
    blocks.
    """
    m, na, nb = f.block_sizes
    n = f.n
    Y = np.zeros((n, nb), dtype=complex)
    Y[:m] = -f.P
    Y[m:m + na] = f.R @ f.P - f.Q
    Y[m + na:] = np.eye(nb)
    Z = np.zeros((n, na), dtype=complex)
    Z[:m] = f.R.conj().T
    Z[m:m + na] = np.eye(na)
    Z[m + na:] = f.Q.conj().T
    return Y, Z


def build_x(f: PQRSForm) -> np.ndarray:
    """Auxiliary n x m matrix spanning the momentum-dependent subspace.

    X = (I; 0; P*) - (R*; I; Q*) (I + RR* + QQ*)^{-1} (R + QP*), in
    permuted coordinates; its columns are orthogonal to both stacks of
    ``_pqrs_stacks`` and it has full column rank m.
    """
    m, na, nb = f.block_sizes
    n = f.n
    first = np.zeros((n, m), dtype=complex)
    first[:m] = np.eye(m)
    first[m + na:] = f.P.conj().T
    _, Z = _pqrs_stacks(f)
    core = np.eye(na) + f.R @ f.R.conj().T + f.Q @ f.Q.conj().T
    return first - Z @ np.linalg.solve(core, f.R + f.Q @ f.P.conj().T)


def _orth_columns(M: np.ndarray) -> np.ndarray:
    if M.shape[1] == 0:
        return M
    q, _ = np.linalg.qr(M)
    return q


def to_projector_form(c: VertexCoupling) -> ProjectorForm:
    """Projector description (proj_p, proj_q, proj_c, lam) of a coupling.

    proj_p and proj_q project onto the column spaces of the two PQRS
    stacks; proj_c is their complement.  lam is assembled from X and S as
    X (X*X)^{-1} S (X*X)^{-1} X*, which reproduces the scattering matrix
    through the projector formula (verified property, not assumed).
    """
    f = to_pqrs_form(c)
    m, _, _ = f.block_sizes
    n = f.n
    Y, Z = _pqrs_stacks(f)
    qy = _orth_columns(Y)
    qz = _orth_columns(Z)
    proj_p = qy @ qy.conj().T
    proj_q = qz @ qz.conj().T
    proj_c = np.eye(n) - proj_p - proj_q
    if m > 0:
        X = build_x(f)
        xtx = X.conj().T @ X
        lam = X @ np.linalg.solve(xtx, np.asarray(f.S)) @ np.linalg.solve(xtx, X.conj().T)
        lam = linalg.hermitian_part(lam)
    else:
        lam = np.zeros((n, n), dtype=complex)
    pmat = linalg.permutation_matrix(f.perm)
    return ProjectorForm(
        n=n,
        projector_p=linalg.frozen(pmat.T @ proj_p @ pmat),
        projector_q=linalg.frozen(pmat.T @ proj_q @ pmat),
        projector_c=linalg.frozen(pmat.T @ proj_c @ pmat),
        lam=linalg.frozen(pmat.T @ lam @ pmat),
    )


def projector_to_matrices(p: ProjectorForm, tol: float = linalg.DEFAULT_RTOL) -> VertexCoupling:
    """Coupling pair (proj_p - lam, proj_q + proj_c) realizing the projector form."""
    return validate(p.projector_p - p.lam, p.projector_q + p.projector_c, tol)


# ---------------------------------------------------------------------------
# Parameter counting
# ---------------------------------------------------------------------------

def _check_rank_pair(n: int, r_a: int, r_b: int) -> None:
    if not (0 <= r_a <= n and 0 <= r_b <= n):
        raise InvalidRankPair(f"ranks must lie in 0..{n}, got ({r_a}, {r_b})")
    if r_a + r_b < n:
        raise InvalidRankPair(f"(r_a, r_b) = ({r_a}, {r_b}) violates r_a + r_b >= n = {n}")


def parameter_count(n: int, r_a: int, r_b: int) -> int:
    """Real parameters of the coupling family with both ranks fixed:
    n^2 - (n - r_a)^2 - (n - r_b)^2."""
    _check_rank_pair(n, r_a, r_b)
    return n * n - (n - r_a) ** 2 - (n - r_b) ** 2


def delta_parameters(n: int, r_a: int, r_b: int) -> int:
    """Parameter surplus of the block description over the projector one.

    Delta = 2 [r_a r_b - (r_a + r_b - n)^2]; it equals the count of real
    parameters needed to fix the ranges of the two projectors, which the
    subspace-dimension formula 2 r_a (n - r_a) + 2 (n - r_b)(r_a + r_b - n)
    expresses directly.  Both expressions are evaluated and must agree.
    """
    _check_rank_pair(n, r_a, r_b)
    delta = 2 * (r_a * r_b - (r_a + r_b - n) ** 2)
    by_subspaces = 2 * r_a * (n - r_a) + 2 * (n - r_b) * (r_a + r_b - n)
    if delta != by_subspaces:
        raise AssertionError(f"parameter-count identity broken: {delta} != {by_subspaces}")
    return delta


def subfamily_count(n: int) -> int:
    """Number of admissible rank pairs (r_a, r_b): (n+1)(n+2)/2."""
    if n < 1:
        raise InvalidRankPair(f"vertex degree must be positive, got {n}")
    return (n + 1) * (n + 2) // 2
