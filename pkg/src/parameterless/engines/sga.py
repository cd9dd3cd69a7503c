from __future__ import annotations

import numpy as np

from ..bitstring import Population
from .base import Solver
from .selection import tournament_winners


class SGASolver(Solver):
    """Simple GA: tournament selection, pairwise crossover, no mutation.

    Parents are paired in selection order.  A pair that skips crossover is
    copied, fitness cache included; crossed children start unevaluated.  An
    odd last parent is copied through.
    """

    name = "SGA"

    def breed(self) -> Population:
        pop, cfg, rng = self.population, self.config, self.rng
        n, length = pop.size, pop.string_size
        parents = pop.take(tournament_winners(pop.fitness, cfg.tournament_size, n, rng))
        pairs = n // 2
        crossed = rng.random(pairs) < cfg.crossover_probability
        rows = np.flatnonzero(crossed)
        if rows.size == 0:
            return parents
        first, second = 2 * rows, 2 * rows + 1
        a, b = parents.genomes[first], parents.genomes[second]
        if cfg.crossover_kind == "uniform":
            swap = rng.random((rows.size, length)) < 0.5
        else:
            cut = rng.integers(1, length, size=rows.size) if length > 1 else np.ones(rows.size, dtype=np.intp)
            swap = np.arange(length)[None, :] >= cut[:, None]
        child_a = np.where(swap, b, a)
        child_b = np.where(swap, a, b)
        children = parents.genomes.copy()
        children[first], children[second] = child_a, child_b
        evaluated = parents.evaluated.copy()
        evaluated[first] = evaluated[second] = False
        return Population(children, parents.fitness.copy(), parents.noiseless.copy(), evaluated)
