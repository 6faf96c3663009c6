"""Frozen expected matrices and orbit listings for the worked examples.

Where a tabulated matrix failed an exactness check (unitarity, or agreement
with two independent reconstructions), the corrected entries are frozen here
under the plain name and the uncorrected variant is kept so tests can assert
exactly what disqualified it.
"""

import numpy as np

S22 = 2.0 * np.sqrt(2.0) / 3.0

GROVER3 = np.array(
    [[-1, 2, 2], [2, -1, 2], [2, 2, -1]], dtype=float
) / 3.0

# 2x2 restriction of the 3-direction Grover coin to (single color, paired colors)
C_PRIME = np.array([[-1.0 / 3.0, S22], [S22, 1.0 / 3.0]])
# Same block with the basis order reversed (paired colors first)
C_PRIME_REV = np.array([[1.0 / 3.0, S22], [S22, -1.0 / 3.0]])

# Two-generator S3 graph, direction-swap subgroup: quotient step operator in
# the listed orbit order (a 6-cycle permutation).
EX1_UH = np.array(
    [
        [0, 0, 1, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0],
    ],
    dtype=float,
)

# Listed orbit order for the two-generator S3 graph (vertex word, 1-based color).
EX1_ORBIT_LISTING = [
    [("e", 1), ("e", 2)],
    [("t1", 1), ("t2", 2)],
    [("t1", 2), ("t2", 1)],
    [("t1t2", 2), ("t2t1", 1)],
    [("t1t2", 1), ("t2t1", 2)],
    [("t1t2t1", 1), ("t1t2t1", 2)],
]

# Three-generator S3 graph, cyclic direction subgroup: quotient step operator
# in the listed orbit order.
EX2_UH1 = np.array(
    [
        [0, -1 / 3, 2 / 3, 2 / 3, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 0],
        [0, 2 / 3, 2 / 3, -1 / 3, 0, 0],
        [0, 2 / 3, -1 / 3, 2 / 3, 0, 0],
    ],
    dtype=float,
)

EX2_H1_ORBIT_LISTING = [
    [("e", 1), ("e", 2), ("e", 3)],
    [("t1", 1), ("t2", 2), ("t3", 3)],
    [("t1", 3), ("t2", 1), ("t3", 2)],
    [("t1", 2), ("t2", 3), ("t3", 1)],
    [("t1t2", 1), ("t1t2", 2), ("t1t2", 3)],
    [("t2t1", 1), ("t2t1", 2), ("t2t1", 3)],
]

# Full direction-permutation subgroup of the three-generator S3 graph.  The
# tabulated 4x4 carries -S22 at (3,1) (0-based), which breaks unitarity; the
# corrected sign is frozen, and the canonical orbit order matches the listing.
EX2_UH2 = np.array(
    [
        [0, -1 / 3, S22, 0],
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, S22, 1 / 3, 0],
    ],
    dtype=float,
)
EX2_UH2_UNCORRECTED = EX2_UH2.copy()
EX2_UH2_UNCORRECTED[3, 1] = -S22

# n=3 hypercube, full direction-permutation subgroup: the line walk.  The
# tabulated matrix reuses the weight-1 coin block at weight 2, where the
# set/unset direction counts flip its diagonal; corrected entries (2,3) and
# (5,4) are frozen.  An independent combinatorial oracle rebuilds this matrix
# in the tests.
EX4_UH1 = np.array(
    [
        [0, -1 / 3, S22, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1 / 3, S22, 0],
        [0, S22, 1 / 3, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, S22, -1 / 3, 0],
    ],
    dtype=float,
)
EX4_UH1_UNCORRECTED = EX4_UH1.copy()
EX4_UH1_UNCORRECTED[2, 3] = -1 / 3
EX4_UH1_UNCORRECTED[5, 4] = 1 / 3


def hypercube_line_walk(n: int) -> np.ndarray:
    """Independent construction of the full-direction-subgroup quotient walk.

    States ordered (0,R), (1,L), (1,R), ..., (n,L).  Coin entries follow from
    counting set and unset directions at Hamming weight x under the Grover
    reshuffle; the shift swaps (x,R) with (x+1,L).
    """
    states = [(0, "R")] + [(x, s) for x in range(1, n) for s in ("L", "R")] + [(n, "L")]
    idx = {st: i for i, st in enumerate(states)}
    m = len(states)
    coin = np.zeros((m, m))
    for x in range(n + 1):
        has_l, has_r = x > 0, x < n
        if has_l:
            coin[idx[(x, "L")], idx[(x, "L")]] = 2.0 * x / n - 1.0
        if has_r:
            coin[idx[(x, "R")], idx[(x, "R")]] = 2.0 * (n - x) / n - 1.0
        if has_l and has_r:
            off = 2.0 * np.sqrt(x * (n - x)) / n
            coin[idx[(x, "L")], idx[(x, "R")]] = off
            coin[idx[(x, "R")], idx[(x, "L")]] = off
    shift = np.zeros((m, m))
    for x in range(n):
        shift[idx[(x + 1, "L")], idx[(x, "R")]] = 1.0
        shift[idx[(x, "R")], idx[(x + 1, "L")]] = 1.0
    return shift @ coin
