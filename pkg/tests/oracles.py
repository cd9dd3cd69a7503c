"""Slow, loop-based reference definitions used to check the vectorised code."""

from itertools import product

DEC3 = {0: 0.9, 1: 0.8, 2: 0.0, 3: 1.0}


def unitation(bits):
    return sum(bits)


def chunks(bits, k):
    return [bits[i:i + k] for i in range(0, len(bits), k)]


def onemax(bits):
    return float(sum(bits))


def quadratic_block(b):
    if b == (1, 1):
        return 1.0
    if b == (0, 0):
        return 0.9
    return 0.0


def deceptive3_block(b):
    return DEC3[unitation(b)]


def bipolar_block(b):
    return DEC3[abs(3 - unitation(b))]


def trap_block(b, k):
    u = unitation(b)
    return 1.0 if u == k else 0.9 * (k - 1 - u) / (k - 1)


def uniform6_block(b):
    return 1.0 if all(x == 1 for x in b) else 0.0


def block_sum(bits, k, fn):
    return sum(fn(tuple(c)) for c in chunks(list(bits), k))


def overlapping(bits):
    bits = list(bits)
    return sum(DEC3[sum(bits[j:j + 3])] for j in range(0, len(bits) - 2, 2))


def htrap(bits, biased):
    """Recursive hierarchical trap over ternary symbols ('0', '1', None)."""
    symbols = list(bits)
    n = len(symbols)
    height = 0
    while 3 ** height < n:
        height += 1
    total = 0.0
    for level in range(1, height + 1):
        parents = []
        for j in range(0, len(symbols), 3):
            t = symbols[j:j + 3]
            if None in t:
                parents.append(None)
                continue
            u = sum(t)
            if level == height:
                high, low = 1.0, 0.9
            else:
                high, low = 1.0, (1.0 + 0.1 / height) if biased else 1.0
            total += 3 ** level * (high if u == 3 else low * (2 - u) / 2)
            parents.append(0 if u == 0 else 1 if u == 3 else None)
        symbols = parents
    return total


def one_fitness(problem_id, bits, k=4):
    """ONE-problem (or hierarchical) fitness by id."""
    bits = tuple(int(b) for b in bits)
    table = {
        10: lambda: onemax(bits),
        11: lambda: block_sum(bits, 2, quadratic_block),
        12: lambda: block_sum(bits, 3, deceptive3_block),
        13: lambda: block_sum(bits, 6, bipolar_block),
        14: lambda: overlapping(bits),
        15: lambda: block_sum(bits, k, lambda b: trap_block(b, k)),
        16: lambda: block_sum(bits, 6, uniform6_block),
        21: lambda: htrap(bits, False),
        22: lambda: htrap(bits, True),
    }
    return table[problem_id]()


def fitness(problem_id, bits, k=4):
    if problem_id < 10:
        return one_fitness(problem_id + 10, tuple(1 - int(b) for b in bits), k)
    return one_fitness(problem_id, bits, k)


def all_strings(length):
    return list(product((0, 1), repeat=length))
