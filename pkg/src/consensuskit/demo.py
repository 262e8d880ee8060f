"""Built-in demonstration networks for the CLI verify command and the docs.

``TWO_BLOC_NETWORK`` has seven agents: two tightly knit influence blocs
(agents 1-3 and 4-5) that ignore everyone outside their bloc, plus two
follower agents (6-7) who listen across blocs but influence nobody
upstream. Plain iterative adjustment splits into two local consensuses;
the projection procedure merges them with known weights.

``TWO_BLOC_CORE`` is the same network restricted to the blocs. Its weight
vector must coincide with the first five weights of the full network,
since followers neither carry weight nor shift anyone else's.
"""

TWO_BLOC_NETWORK = [
    [0.7, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0],
    [0.1, 0.9, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.4, 0.2, 0.4, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.7, 0.3, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.2, 0.8, 0.0, 0.0],
    [0.0, 0.1, 0.3, 0.0, 0.0, 0.3, 0.3],
    [0.0, 0.0, 0.0, 0.2, 0.0, 0.2, 0.6],
]

TWO_BLOC_CORE = [row[:5] for row in TWO_BLOC_NETWORK[:5]]

# Exact consensus weights of the two networks (rational values 26/110 etc.).
TWO_BLOC_NETWORK_WEIGHTS = [26 / 110, 26 / 110, 13 / 110, 18 / 110, 27 / 110, 0.0, 0.0]
TWO_BLOC_CORE_WEIGHTS = TWO_BLOC_NETWORK_WEIGHTS[:5]

BUILTIN_NETWORKS = {
    "two-bloc-network": {
        "matrix": TWO_BLOC_NETWORK,
        "expected_weights": TWO_BLOC_NETWORK_WEIGHTS,
        "initial_opinions": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0],
    },
    "two-bloc-core": {
        "matrix": TWO_BLOC_CORE,
        "expected_weights": TWO_BLOC_CORE_WEIGHTS,
        "initial_opinions": [1.0, 2.0, 3.0, 4.0, 5.0],
    },
}
