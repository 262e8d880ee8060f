"""Brute-force spanning-tree and out-forest enumeration for small digraphs.

Ground truth for everything the rest of the package computes by linear
algebra: total out-tree weights per class and per root, stationary vectors
as tree-weight fractions, and the normalized matrix of maximum out-forests,
which equals the power limit of the influence matrix. Loops never take part
in a tree or forest (a loop is a cycle); an out-tree's weight is the product
of its arc weights, a single vertex counting as weight 1 (empty product).

This module is deliberately exhaustive and capped; it exists to validate
the fast routes, not to scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import BicomponentDecomposition, CommunicationDigraph
from .errors import EnumerationCapError, NotStronglyConnectedError
from .matrix_core import _frozen, as_matrix, cofactor, determinant

DEFAULT_CLASS_CAP = 8
DEFAULT_FOREST_CAP = 10


@dataclass(frozen=True)
class ClassTreeWeights:
    """Out-tree weight data of one final class.

    total: combined weight of all spanning out-trees of the class.
    per_root: the rooted totals, aligned with ``vertices`` (ascending).
    stationary_column_det: determinant of the class Kirchhoff block with its
    first column replaced by the stationary vector; equals the sum of
    squared rooted totals divided by the total.
    """

    vertices: tuple[int, ...]
    total: float
    per_root: tuple[float, ...]
    stationary_column_det: float


@dataclass(frozen=True)
class TreeWeights:
    per_class: tuple[ClassTreeWeights, ...]


@dataclass(frozen=True)
class ForestMatrix:
    """Row-stochastic matrix of maximum out-forest weights.

    Entry (i, j): weight of maximum out-forests in which j is a root and i
    belongs to the tree rooted at j, normalized by the total weight of all
    maximum out-forests.
    """

    matrix: np.ndarray
    total_weight: float


def _in_arc_table(
    g: CommunicationDigraph, vertices: set[int]
) -> dict[int, list[tuple[int, float]]]:
    table: dict[int, list[tuple[int, float]]] = {v: [] for v in vertices}
    for u, v, w in g.arcs:
        if u != v and u in vertices and v in vertices:
            table[v].append((u, w))
    return table


def enumerate_out_trees(
    g: CommunicationDigraph, vertices, root: int, cap: int = DEFAULT_CLASS_CAP
) -> float:
    """Total weight of spanning out-trees of ``vertices`` diverging from ``root``.

    Every non-root vertex picks exactly one in-arc from inside the set;
    assignments containing a cycle are pruned during the search.
    """
    verts = sorted(set(int(v) for v in vertices))
    if len(verts) > cap:
        raise EnumerationCapError(len(verts), cap)
    if root not in verts:
        raise ValueError(f"root {root} is not in the vertex set")
    in_arcs = _in_arc_table(g, set(verts))
    non_roots = [v for v in verts if v != root]
    parent: dict[int, int] = {}

    def closes_cycle(v: int, u: int) -> bool:
        cur = u
        while True:
            if cur == v:
                return True
            nxt = parent.get(cur)
            if nxt is None:
                return False
            cur = nxt

    def assign(idx: int, weight: float) -> float:
        if idx == len(non_roots):
            return weight
        v = non_roots[idx]
        total = 0.0
        for u, w in in_arcs[v]:
            if closes_cycle(v, u):
                continue
            parent[v] = u
            total += assign(idx + 1, weight * w)
            del parent[v]
        return total

    return assign(0, 1.0)


def stationary_via_trees(
    g: CommunicationDigraph, vertices, cap: int = DEFAULT_CLASS_CAP
) -> np.ndarray:
    """Stationary vector of a strongly connected class as rooted-tree fractions."""
    verts = sorted(set(int(v) for v in vertices))
    per_root = [enumerate_out_trees(g, verts, r, cap) for r in verts]
    total = sum(per_root)
    if total <= 0.0:
        raise NotStronglyConnectedError(
            f"vertex set {verts} has no spanning out-tree; it is not strongly connected"
        )
    return np.asarray(per_root) / total


def maximum_out_forest_matrix(
    g: CommunicationDigraph,
    d: BicomponentDecomposition,
    cap: int = DEFAULT_FOREST_CAP,
) -> ForestMatrix:
    """Enumerate all maximum out-forests and normalize their root attribution.

    A maximum out-forest has one tree per final class (roots take no in-arc,
    every other vertex exactly one, no cycles). Root tuples therefore range
    over one choice of root per final class; nonbasic vertices are never
    roots because arcs into a final class only exist inside it.
    """
    n = g.n
    if n > cap:
        raise EnumerationCapError(n, cap)
    in_arcs_all = _in_arc_table(g, set(range(n)))
    acc = np.zeros((n, n))
    total_weight = 0.0

    def enumerate_with_roots(roots: list[int]):
        nonlocal total_weight
        root_set = set(roots)
        non_roots = [v for v in range(n) if v not in root_set]
        parent: dict[int, int] = {}

        def closes_cycle(v: int, u: int) -> bool:
            cur = u
            while True:
                if cur == v:
                    return True
                nxt = parent.get(cur)
                if nxt is None:
                    return False
                cur = nxt

        def root_of(v: int) -> int:
            cur = v
            while cur not in root_set:
                cur = parent[cur]
            return cur

        def assign(idx: int, weight: float):
            nonlocal total_weight
            if idx == len(non_roots):
                total_weight += weight
                for v in range(n):
                    acc[v, root_of(v)] += weight
                return
            v = non_roots[idx]
            for u, w in in_arcs_all[v]:
                if closes_cycle(v, u):
                    continue
                parent[v] = u
                assign(idx + 1, weight * w)
                del parent[v]

        assign(0, 1.0)

    def choose_roots(ci: int, chosen: list[int]):
        basic = d.basic_classes()
        if ci == len(basic):
            enumerate_with_roots(chosen)
            return
        for r in basic[ci]:
            chosen.append(r)
            choose_roots(ci + 1, chosen)
            chosen.pop()

    choose_roots(0, [])
    if total_weight <= 0.0:
        raise NotStronglyConnectedError("no maximum out-forest found; inconsistent structure")
    return ForestMatrix(matrix=_frozen(acc / total_weight), total_weight=total_weight)


def stationary_column_determinant(l_block, stationary) -> float:
    """Determinant of a class Kirchhoff block with first column set to ``stationary``."""
    a = as_matrix(l_block).copy()
    a[:, 0] = np.asarray(stationary, dtype=float)
    return determinant(a)


def tree_weights_from_cofactors(l_block) -> tuple[float, tuple[float, ...]]:
    """Rooted tree totals of one class from its Kirchhoff block.

    The rooted total for row k equals the cofactor of any entry in row k
    (matrix-tree theorem); column 0 is used.
    """
    a = as_matrix(l_block)
    per_root = tuple(cofactor(a, k, 0) for k in range(a.shape[0]))
    return float(sum(per_root)), per_root


def tree_weights(
    g: CommunicationDigraph,
    d: BicomponentDecomposition,
    cap: int = DEFAULT_CLASS_CAP,
) -> TreeWeights:
    """Enumerated tree-weight data for every final class."""
    out = []
    for cls in d.basic_classes():
        verts = tuple(sorted(cls))
        per_root = tuple(enumerate_out_trees(g, verts, r, cap) for r in verts)
        total = float(sum(per_root))
        if total <= 0.0:
            raise NotStronglyConnectedError(f"final class {verts} has no spanning out-tree")
        pi = np.asarray(per_root) / total
        l_block = _class_kirchhoff_block(g, verts)
        out.append(
            ClassTreeWeights(
                vertices=verts,
                total=total,
                per_root=per_root,
                stationary_column_det=stationary_column_determinant(l_block, pi),
            )
        )
    return TreeWeights(per_class=tuple(out))


def _class_kirchhoff_block(g: CommunicationDigraph, verts: tuple[int, ...]) -> np.ndarray:
    index = {v: k for k, v in enumerate(verts)}
    m = len(verts)
    block = np.zeros((m, m))
    for u, v, w in g.arcs:
        if u in index and v in index and u != v:
            block[index[v], index[u]] -= w
    for k in range(m):
        block[k, k] = -float(np.sum(block[k]))  # zero row sums
    return block
