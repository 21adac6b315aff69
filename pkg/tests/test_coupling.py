"""Tests for coupling validation and the unitary description."""

import numpy as np
import pytest

from qgvertex import (
    from_unitary,
    haar_unitary,
    random_coupling,
    smatrix_distance,
    to_unitary,
    unitary_eigensplit,
    validate,
)
from qgvertex.errors import NotSelfAdjoint, NotUnitary, RankDeficient, ShapeMismatch

KIRCHHOFF2_A = np.array([[1.0, -1.0], [0.0, 0.0]])
KIRCHHOFF2_B = np.array([[0.0, 0.0], [1.0, 1.0]])
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def delta_pair(alpha, n=2):
    """Continuity of psi plus sum of derivatives equal to alpha * psi_1."""
    a = np.zeros((n, n), dtype=complex)
    b = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        a[i, i], a[i, i + 1] = 1.0, -1.0
    a[n - 1, 0] = -alpha
    b[n - 1, :] = 1.0
    return a, b


class TestValidate:
    def test_dirichlet(self):
        c = validate(np.eye(2), np.zeros((2, 2)))
        assert (c.n, c.r_a, c.r_b) == (2, 2, 0)

    def test_neumann(self):
        c = validate(np.zeros((2, 2)), np.eye(2))
        assert (c.n, c.r_a, c.r_b) == (2, 0, 2)

    def test_not_self_adjoint(self):
        with pytest.raises(NotSelfAdjoint):
            validate(np.array([[1.0, 1.0], [0.0, 1.0]]), np.eye(2))

    def test_rank_deficient(self):
        m = np.array([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(RankDeficient):
            validate(m, m)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            validate(np.eye(2), np.eye(3))
        with pytest.raises(ShapeMismatch):
            validate(np.zeros((2, 3)), np.zeros((2, 3)))

    def test_delta_coupling_ranks(self):
        c = validate(*delta_pair(2.0))
        assert (c.r_a, c.r_b) == (2, 1)

    def test_matrices_are_read_only(self):
        c = validate(np.eye(2), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            c.A[0, 0] = 2.0


class TestUnitary:
    def test_dirichlet_gives_minus_identity(self):
        c = validate(np.eye(3), np.zeros((3, 3)))
        assert np.allclose(to_unitary(c).U, -np.eye(3))

    def test_neumann_gives_identity(self):
        c = validate(np.zeros((3, 3)), np.eye(3))
        assert np.allclose(to_unitary(c).U, np.eye(3))

    def test_kirchhoff_two_edges(self):
        # evaluating -(A+iB)^{-1}(A-iB) by hand gives the swap matrix
        c = validate(KIRCHHOFF2_A, KIRCHHOFF2_B)
        assert np.allclose(to_unitary(c).U, SWAP, atol=1e-14)

    def test_from_unitary_dirichlet_class(self):
        c = from_unitary(-np.eye(2))
        assert np.allclose(c.A, -2.0 * np.eye(2))
        assert np.allclose(c.B, np.zeros((2, 2)))
        assert c.r_b == 0

    def test_from_unitary_neumann_class(self):
        c = from_unitary(np.eye(2))
        assert np.allclose(c.A, np.zeros((2, 2)))
        assert np.allclose(c.B, 2j * np.eye(2))
        assert c.r_a == 0

    def test_swap_matches_kirchhoff_on_k_grid(self):
        c1 = from_unitary(SWAP)
        c2 = validate(KIRCHHOFF2_A, KIRCHHOFF2_B)
        assert smatrix_distance(c1, c2) < 1e-12

    def test_not_unitary_rejected(self):
        with pytest.raises(NotUnitary):
            from_unitary(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_roundtrip_preserves_scattering(self, rng):
        for _ in range(10):
            c = random_coupling(int(rng.integers(1, 6)), rng=rng)
            back = from_unitary(to_unitary(c))
            assert smatrix_distance(c, back) < 1e-10

    def test_validate_accepts_every_unitary(self, rng):
        for n in (1, 2, 3, 5):
            for _ in range(5):
                from_unitary(haar_unitary(n, rng))  # must not raise


class TestEquivalenceInvariance:
    def test_scalar_rescaling(self, rng):
        c = random_coupling(4, rng=rng)
        z = 0.7 - 1.3j
        scaled = validate(z * np.asarray(c.A), z * np.asarray(c.B))
        assert smatrix_distance(c, scaled) < 1e-10

    def test_left_multiplication(self, rng):
        c = random_coupling(4, rng=rng)
        g = np.eye(4) + 0.3 * (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        moved = validate(g @ np.asarray(c.A), g @ np.asarray(c.B))
        assert smatrix_distance(c, moved) < 1e-9

    def test_a_plus_ikb_invertible(self, rng):
        for _ in range(10):
            c = random_coupling(int(rng.integers(1, 6)), rng=rng)
            for k in (1e-3, 0.1, 1.0, 10.0, 1e3):
                m = np.asarray(c.A) + 1j * k * np.asarray(c.B)
                s = np.linalg.svd(m, compute_uv=False)
                assert s[-1] > 1e-12 * s[0]


class TestEigensplit:
    def test_multiplicities_match_ranks(self, rng):
        c = random_coupling(5, 3, 4, rng)
        u = to_unitary(c).U
        minus, plus, rest, vals = unitary_eigensplit(u)
        assert minus.shape[1] == c.n - c.r_b
        assert plus.shape[1] == c.n - c.r_a
        assert rest.shape[1] == c.r_a + c.r_b - c.n
        assert np.all(np.abs(np.abs(vals) - 1.0) < 1e-10)
