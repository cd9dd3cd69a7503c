"""Extended compact GA: marginal product models chosen by combined complexity.

A model partitions the bit positions into groups; each group keeps the
empirical joint distribution of its configurations over the selected set.
Model search is greedy: starting from singletons, apply the pairwise merge
that lowers

    CC = log2(M + 1) * sum_g (2**|g| - 1)  +  M * sum_g H(g)

the most (``H`` in bits, ``M`` the selected-set size), until no merge lowers
it or every lowering merge would exceed ``max_group``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bitstring import Population, SelectedSet
from ..errors import ConfigurationError
from .base import Solver
from .selection import tournament_select


@dataclass
class MpmModel:
    groups: list[tuple[int, ...]]
    distributions: list[np.ndarray]
    combined_complexity: float = math.nan

    def sample(self, n: int, length: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``n`` genomes, each group's configuration independently."""
        out = np.empty((n, length), dtype=np.uint8)
        for group, table in zip(self.groups, self.distributions):
            codes = rng.choice(table.shape[0], size=n, p=table)
            out[:, list(group)] = decode(codes, len(group))
        return out


def encode(genomes: np.ndarray, group) -> np.ndarray:
    """Configuration code of ``group`` per row; the first position is the high bit."""
    weights = 1 << np.arange(len(group) - 1, -1, -1, dtype=np.int64)
    return genomes[:, list(group)].astype(np.int64) @ weights


def decode(codes: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(codes, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.uint8)


def group_distribution(genomes: np.ndarray, group) -> np.ndarray:
    counts = np.bincount(encode(genomes, group), minlength=1 << len(group))
    return counts / genomes.shape[0]


def entropy_bits(table: np.ndarray) -> float:
    p = table[table > 0]
    return float(-(p * np.log2(p)).sum())


def combined_complexity(genomes: np.ndarray, groups) -> float:
    m = genomes.shape[0]
    model = math.log2(m + 1) * sum((1 << len(g)) - 1 for g in groups)
    data = m * sum(entropy_bits(group_distribution(genomes, g)) for g in groups)
    return model + data


def build_model(selected: Population, max_group: int) -> MpmModel:
    genomes = selected.genomes
    m, length = genomes.shape
    if m == 0:
        raise ConfigurationError("cannot build a model from an empty selected set")
    log_m = math.log2(m + 1)

    def cost(group):
        return log_m * ((1 << len(group)) - 1) + m * entropy_bits(group_distribution(genomes, group))

    groups = {i: (i,) for i in range(length)}  # keyed by smallest member
    costs = {i: cost(g) for i, g in groups.items()}
    deltas = {}

    def consider(a, b):
        if len(groups[a]) + len(groups[b]) <= max_group:
            merged = tuple(sorted(groups[a] + groups[b]))
            deltas[(a, b)] = (cost(merged) - costs[a] - costs[b], merged)

    keys = sorted(groups)
    for x, a in enumerate(keys):
        for b in keys[x + 1:]:
            consider(a, b)

    while deltas:
        best_pair, (best_delta, merged) = min(
            deltas.items(), key=lambda item: (item[1][0], item[0])
        )
        if not best_delta < 0:
            break
        a, b = best_pair
        for pair in [p for p in deltas if a in p or b in p]:
            del deltas[pair]
        costs[a] += costs.pop(b) + best_delta
        del groups[b]
        groups[a] = merged
        for other in sorted(groups):
            if other != a:
                consider(min(a, other), max(a, other))

    ordered = [groups[k] for k in sorted(groups)]
    return MpmModel(
        groups=ordered,
        distributions=[group_distribution(genomes, g) for g in ordered],
        combined_complexity=sum(costs.values()),
    )


class ECGASolver(Solver):
    name = "ECGA"

    def __init__(self, *args, **kwargs):
        self.model: MpmModel | None = None
        super().__init__(*args, **kwargs)

    def breed(self) -> Population:
        selected: SelectedSet = tournament_select(
            self.population, self.config.tournament_size, self.selected_count(), self.rng
        )
        self.model = build_model(selected, self.config.max_ecga_group_size)
        return Population(self.model.sample(self.pop_size, self.population.string_size, self.rng))
