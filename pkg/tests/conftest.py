"""Shared fixtures: seeded RNGs and the random-coupling corpus."""

import numpy as np
import pytest

from qgvertex import admissible_rank_pairs, random_coupling

CORPUS_SEED = 20260809
CORPUS_SIZE = 100


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# Free eigenvalue phases stay at least this far from 0 and pi.  The limit
# criteria compare S(10^-6) and S(10^6) against the limit matrices at 1e-5,
# and the approach rate scales with the extreme coupling eigenvalues
# (tan of the half-phase); 0.8 keeps those within [0.42, 2.36] and the
# approach error near 4e-6, while still spanning phases of 46..134 degrees.
CORPUS_PHASE_MARGIN = 0.8


def build_corpus(size=CORPUS_SIZE, max_degree=5, seed=CORPUS_SEED):
    """Deterministic corpus covering every admissible rank pair for n <= 5."""
    gen = np.random.default_rng(seed)
    couplings = []
    for n in range(1, max_degree + 1):
        for r_a, r_b in admissible_rank_pairs(n):
            couplings.append(random_coupling(n, r_a, r_b, gen, margin=CORPUS_PHASE_MARGIN))
    while len(couplings) < size:
        n = int(gen.integers(1, max_degree + 1))
        couplings.append(random_coupling(n, rng=gen, margin=CORPUS_PHASE_MARGIN))
    return couplings[:size] if len(couplings) > size else couplings


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


def unitarity_defect(entries) -> float:
    entries = np.asarray(entries)
    n = entries.shape[0]
    return float(np.max(np.abs(entries @ entries.conj().T - np.eye(n))))
