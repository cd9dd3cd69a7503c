from __future__ import annotations

import numpy as np

from ..bitstring import Population
from .base import Solver
from .selection import tournament_select


def marginal_frequencies(genomes: np.ndarray) -> np.ndarray:
    """Frequency of allele 1 at each position."""
    return genomes.mean(axis=0)


class UMDASolver(Solver):
    """Univariate marginal distribution algorithm.

    Tournament-selects ``selected_set_fraction * N`` members and samples N
    offspring with each bit drawn independently from the selected set's
    per-position frequency of ones.
    """

    name = "UMDA"

    def breed(self) -> Population:
        selected = tournament_select(
            self.population, self.config.tournament_size, self.selected_count(), self.rng
        )
        p = marginal_frequencies(selected.genomes)
        draws = self.rng.random((self.pop_size, self.population.string_size))
        return Population((draws < p).astype(np.uint8))
