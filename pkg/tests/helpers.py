"""Shared fixtures: golden matrices for the demo networks and random generators.

Golden values marked "exact" were derived independently: stationary vectors
by solving the per-class balance equations by hand, the limit's follower
rows from absorption probabilities (16/55 etc.), tree weights by exhaustive
manual enumeration of the class arborescences, and the projector / weight
vector from rational Gauss-Jordan elimination on the mixed basis. Printed
3-decimal values are kept only where a test checks display-precision data.
"""

from __future__ import annotations

import numpy as np

from consensuskit.demo import TWO_BLOC_CORE, TWO_BLOC_NETWORK

DEMO7 = TWO_BLOC_NETWORK
DEMO5 = TWO_BLOC_CORE

# I - P for the seven-agent network.
L7 = [
    [0.3, 0.0, -0.3, 0.0, 0.0, 0.0, 0.0],
    [-0.1, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-0.4, -0.2, 0.6, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.3, -0.3, 0.0, 0.0],
    [0.0, 0.0, 0.0, -0.2, 0.2, 0.0, 0.0],
    [0.0, -0.1, -0.3, 0.0, 0.0, 0.7, -0.3],
    [0.0, 0.0, 0.0, -0.2, 0.0, -0.2, 0.4],
]

# Region basis: ones column plus the Kirchhoff columns of agents 2,3,5,6,7.
U7 = [
    [1.0, 0.0, -0.3, 0.0, 0.0, 0.0],
    [1.0, 0.1, 0.0, 0.0, 0.0, 0.0],
    [1.0, -0.2, 0.6, 0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, -0.3, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.2, 0.0, 0.0],
    [1.0, -0.1, -0.3, 0.0, 0.7, -0.3],
    [1.0, 0.0, 0.0, 0.0, -0.2, 0.4],
]

# Exact power limit: bloc rows are the stationary vectors, follower rows are
# absorption-weighted mixtures (absorption probabilities 8/11 and 4/11).
PINF7_EXACT = np.array(
    [
        [0.4, 0.4, 0.2, 0.0, 0.0, 0.0, 0.0],
        [0.4, 0.4, 0.2, 0.0, 0.0, 0.0, 0.0],
        [0.4, 0.4, 0.2, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.4, 0.6, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.4, 0.6, 0.0, 0.0],
        [16 / 55, 16 / 55, 8 / 55, 6 / 55, 9 / 55, 0.0, 0.0],
        [8 / 55, 8 / 55, 4 / 55, 14 / 55, 21 / 55, 0.0, 0.0],
    ]
)

# Follower rows at 3-decimal display precision (correctly rounded).
PINF7_TAIL_3DP = np.array(
    [
        [0.291, 0.291, 0.145, 0.109, 0.164, 0.0, 0.0],
        [0.145, 0.145, 0.073, 0.255, 0.382, 0.0, 0.0],
    ]
)

# Exact orthogonal projector: 1/22 times an integer matrix.
S7_EXACT = (
    np.array(
        [
            [18, -4, -2, 4, 6, 0, 0],
            [-4, 18, -2, 4, 6, 0, 0],
            [-2, -2, 21, 2, 3, 0, 0],
            [4, 4, 2, 18, -6, 0, 0],
            [6, 6, 3, -6, 13, 0, 0],
            [0, 0, 0, 0, 0, 22, 0],
            [0, 0, 0, 0, 0, 0, 22],
        ],
        dtype=float,
    )
    / 22.0
)

WEIGHTS7_EXACT = np.array([26, 26, 13, 18, 27, 0, 0], dtype=float) / 110.0

# Mixed basis pair of the five-agent core (all agents basic).
X5 = [
    [1.0, 0.0, -0.3, 0.0, 0.0],
    [1.0, 0.1, 0.0, 0.0, 0.0],
    [1.0, -0.2, 0.6, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0, -0.3],
    [1.0, 0.0, 0.0, 0.0, 0.2],
]
Z5 = [
    [1.0, 0.0, -0.3, 0.4, 0.0],
    [1.0, 0.1, 0.0, 0.4, 0.0],
    [1.0, -0.2, 0.6, 0.2, 0.0],
    [1.0, 0.0, 0.0, -0.4, -0.3],
    [1.0, 0.0, 0.0, -0.6, 0.2],
]

# Inverse of Z5 at 3-decimal display precision (exact values are rational:
# first row is (26 26 13 18 27)/110, etc.).
Z5_INV_3DP = np.array(
    [
        [0.236, 0.236, 0.118, 0.164, 0.245],
        [-4.182, 5.818, -2.091, 0.182, 0.273],
        [-1.939, 1.394, 0.697, -0.061, -0.091],
        [0.455, 0.455, 0.227, -0.455, -0.682],
        [0.182, 0.182, 0.091, -2.182, 1.727],
    ]
)

SB5_EXACT = S7_EXACT[:5, :5]

# Exact per-class tree weights of the demo blocs (manual enumeration).
TREES_BLOC1 = {0: 0.06, 1: 0.06, 2: 0.03}
TREES_BLOC2 = {3: 0.2, 4: 0.3}
HOMOGENEITY_EXACT = (25 / 9, 25 / 13)


def random_proper_matrix(rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """Random proper influence matrix with random class structure.

    Every class carries a directed ring (strong connectivity) and a loop on
    each agent (aperiodicity); classes beyond a random cutoff additionally
    listen to earlier classes, making them nonbasic. Entries are either zero
    or at least ~0.01 after normalization, far above the zero threshold.
    """
    if n is None:
        n = int(rng.integers(2, 9))
    sizes = []
    remaining = n
    while remaining:
        s = int(rng.integers(1, remaining + 1))
        sizes.append(s)
        remaining -= s
    k = len(sizes)
    num_final = int(rng.integers(1, k + 1))
    labels = [int(v) for v in rng.permutation(n)]
    classes = []
    pos = 0
    for s in sizes:
        classes.append(labels[pos : pos + s])
        pos += s

    p = np.zeros((n, n))
    for ci, cls in enumerate(classes):
        m = len(cls)
        for idx, v in enumerate(cls):
            weights = {v: float(rng.uniform(0.2, 1.0))}
            if m > 1:
                weights[cls[(idx - 1) % m]] = float(rng.uniform(0.1, 1.0))
            for u in cls:
                if u != v and u not in weights and rng.random() < 0.35:
                    weights[u] = float(rng.uniform(0.1, 1.0))
            if ci >= num_final:
                earlier = [u for cj in range(ci) for u in classes[cj]]
                pick = earlier[int(rng.integers(0, len(earlier)))]
                weights[pick] = float(rng.uniform(0.1, 1.0))
                for u in earlier:
                    if u not in weights and rng.random() < 0.15:
                        weights[u] = float(rng.uniform(0.1, 1.0))
            total = sum(weights.values())
            for u, w in weights.items():
                p[v, u] = w / total
    return p


def random_periodic_matrix(
    rng: np.random.Generator, n: int | None = None
) -> tuple[np.ndarray, tuple[int, ...], int]:
    """Improper matrix: one loop-free ring class plus nonbasic followers.

    Returns (matrix, periodic class as sorted agent tuple, period).
    """
    if n is None:
        n = int(rng.integers(2, 8))
    period = int(rng.integers(2, n + 1))
    labels = [int(v) for v in rng.permutation(n)]
    ring = labels[:period]
    rest = labels[period:]
    p = np.zeros((n, n))
    for idx, v in enumerate(ring):
        p[v, ring[(idx - 1) % period]] = 1.0
    for j, v in enumerate(rest):
        sources = ring + rest[:j]
        weights = {v: float(rng.uniform(0.2, 1.0))}
        pick = sources[int(rng.integers(0, len(sources)))]
        weights[pick] = float(rng.uniform(0.1, 1.0))
        total = sum(weights.values())
        for u, w in weights.items():
            p[v, u] = w / total
    return p, tuple(sorted(ring)), period


def has_spanning_out_tree(n: int, arcs) -> bool:
    """True iff some agent reaches every agent along influence arcs."""
    succ = [[] for _ in range(n)]
    for u, v, _ in arcs:
        succ[u].append(v)
    for root in range(n):
        seen = {root}
        frontier = [root]
        while frontier:
            x = frontier.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        if len(seen) == n:
            return True
    return False
