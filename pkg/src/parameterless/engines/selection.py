from __future__ import annotations

import numpy as np

from ..bitstring import Population, SelectedSet
from ..errors import ConfigurationError


def tournament_winners(fitness: np.ndarray, s: int, count: int,
                       rng: np.random.Generator) -> np.ndarray:
    """Indices of ``count`` tournament winners, without replacement.

    Each round shuffles the population and splits it into ``N // s``
    disjoint tournaments; leftover members sit the round out.  Rounds repeat
    until ``count`` winners exist.  Ties go to the earliest entrant in the
    shuffled order.
    """
    n = fitness.shape[0]
    if not 1 <= s <= n:
        raise ConfigurationError(f"tournament size must lie in [1, {n}], got {s}")
    per_round = n // s
    rounds = -(-count // per_round)
    winners = []
    for _ in range(rounds):
        entrants = rng.permutation(n)[: per_round * s].reshape(per_round, s)
        best = np.argmax(fitness[entrants], axis=1)
        winners.append(entrants[np.arange(per_round), best])
    return np.concatenate(winners)[:count]


def tournament_select(pop: Population, s: int, count: int,
                      rng: np.random.Generator) -> SelectedSet:
    chosen = tournament_winners(pop.fitness, s, count, rng)
    return SelectedSet(
        pop.genomes[chosen], pop.fitness[chosen], pop.noiseless[chosen], pop.evaluated[chosen]
    )
