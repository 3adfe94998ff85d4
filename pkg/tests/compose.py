"""Random compositions of catalog UPBs and complete bases, shared by tests."""

import random

from upbforge.catalog import CompleteBasis, tiles_3x3, tiles_3x3_right_block
from upbforge.combinators import direct_sum_a, direct_sum_b, four_square, lift


def _leaf(rng):
    return rng.choice([tiles_3x3, tiles_3x3_right_block])(), 4


def _filler(rng, m, n):
    """A block of shape m x n: a catalog UPB when it fits, else a complete basis."""
    if (m, n) == (3, 3) and rng.random() < 0.5:
        return _leaf(rng)
    return CompleteBasis((m, n)), 0


def _pair(rng, a, b):
    return (a, b) if rng.random() < 0.5 else (b, a)


def random_bipartite(rng, depth):
    if depth == 0:
        return _leaf(rng)
    (s, k) = random_bipartite(rng, depth - 1)
    m, n = s.dims.dims
    op = rng.choice(["dsum_a", "dsum_b", "foursq"])
    if op == "dsum_b":
        other, k2 = _filler(rng, m, rng.choice([1, 2, 3]))
        x, y = _pair(rng, s, other)
        return direct_sum_b(x, y), k + k2
    if op == "dsum_a":
        other, k2 = _filler(rng, rng.choice([1, 2, 3]), n)
        x, y = _pair(rng, s, other)
        return direct_sum_a(x, y), k + k2
    h, w = rng.choice([1, 3]), rng.choice([1, 3])
    blocks = [(s, k), _filler(rng, m, w), _filler(rng, h, n), _filler(rng, h, w)]
    # keep the genuine operand in a random corner by mirroring the layout
    corner = rng.randrange(4)
    if corner == 1:
        blocks = [blocks[1], blocks[0], blocks[3], blocks[2]]
    elif corner == 2:
        blocks = [blocks[2], blocks[3], blocks[0], blocks[1]]
    elif corner == 3:
        blocks = blocks[::-1]
    return four_square(*(b for b, _ in blocks)), sum(k for _, k in blocks)


def random_composition(seed):
    """Returns ``(upb, expected_missing)`` built by one random tree."""
    rng = random.Random(seed)
    s, k = random_bipartite(rng, rng.choice([0, 1, 1, 2]))
    if rng.random() < 0.3:
        K = rng.choice([2, 3])
        parts = [(s, k)]
        for _ in range(K - 1):
            if rng.random() < 0.5:
                parts.append((s, k))
            else:
                parts.append((CompleteBasis(s.dims.dims), 0))
        rng.shuffle(parts)
        return lift([p for p, _ in parts]), sum(x for _, x in parts)
    return s, k
