"""Communication digraph of an influence matrix and its combinatorial structure.

The digraph has an arc (j, i) of weight p_ij whenever agent j influences
agent i, i.e. arcs point in the direction of influence. Its Kirchhoff
matrix is I - P: zero row sums, nonpositive off-diagonal entries.

Strong components are called classes here. A class with no incoming arcs
from outside is final (its agents are basic); all agents of other classes
are nonbasic. Reordering agents final-classes-first makes P and I - P
lower block-triangular, and whether the powers of P converge is decided
combinatorially from the periods of the final classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

import numpy as np

from .errors import NotStronglyConnectedError
from .matrix_core import DEFAULT_TOL, StochasticMatrix, ToleranceConfig, _frozen


@dataclass(frozen=True)
class CommunicationDigraph:
    """Weighted digraph on agents 0..n-1, arcs oriented influencer -> influenced."""

    n: int
    arcs: tuple[tuple[int, int, float], ...]

    def out_lists(self) -> list[list[tuple[int, float]]]:
        out: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for u, v, w in self.arcs:
            out[u].append((v, w))
        return out

    def in_lists(self) -> list[list[tuple[int, float]]]:
        inc: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for u, v, w in self.arcs:
            inc[v].append((u, w))
        return inc


@dataclass(frozen=True)
class KirchhoffMatrix:
    """I - P for a validated influence matrix P."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BicomponentDecomposition:
    """Classes of the digraph in Frobenius order: final classes first.

    classes[i] lists the agents of class i in ascending original index;
    order concatenates the classes and maps Frobenius position -> original
    agent; class_of / index_in_class invert that mapping per agent.
    """

    classes: tuple[tuple[int, ...], ...]
    is_basic: tuple[bool, ...]
    num_final_classes: int
    num_basic_agents: int
    order: tuple[int, ...]
    class_of: tuple[int, ...]
    index_in_class: tuple[int, ...]
    sizes: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.order)

    def basic_classes(self) -> tuple[tuple[int, ...], ...]:
        return self.classes[: self.num_final_classes]

    def basic_vertices(self) -> tuple[int, ...]:
        return self.order[: self.num_basic_agents]

    def nonbasic_vertices(self) -> tuple[int, ...]:
        return self.order[self.num_basic_agents :]

    def permute(self, a: np.ndarray) -> np.ndarray:
        """Reindex a square matrix into Frobenius (lower block-triangular) form."""
        idx = np.asarray(self.order)
        return np.asarray(a)[np.ix_(idx, idx)]

    def unpermute(self, a: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`permute`."""
        a = np.asarray(a)
        out = np.empty_like(a)
        idx = np.asarray(self.order)
        out[np.ix_(idx, idx)] = a
        return out

    def class_offsets(self) -> tuple[int, ...]:
        """Frobenius position of each class's first agent."""
        offsets = []
        pos = 0
        for size in self.sizes:
            offsets.append(pos)
            pos += size
        return tuple(offsets)


class SpectralKind(Enum):
    """Convergence class of a stochastic matrix.

    REGULAR: powers converge to a rank-one matrix (single aperiodic final
    class), so plain iteration reaches consensus from any start.
    PROPER_NOT_REGULAR: powers converge but to a higher-rank limit (several
    aperiodic final classes).
    IMPROPER: some final class is periodic and the powers do not converge.
    """

    REGULAR = "regular"
    PROPER_NOT_REGULAR = "proper_not_regular"
    IMPROPER = "improper"


@dataclass(frozen=True)
class SpectralClass:
    kind: SpectralKind
    periods: tuple[int, ...]

    @property
    def is_proper(self) -> bool:
        return self.kind is not SpectralKind.IMPROPER


def build(
    p: StochasticMatrix, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[CommunicationDigraph, KirchhoffMatrix]:
    """Build the communication digraph and Kirchhoff matrix of ``p``.

    Entries at or below ``zero_tol`` are treated as absent arcs so the
    combinatorial structure matches the numeric one.
    """
    a = p.matrix
    n = p.n
    arcs = []
    for i in range(n):
        for j in range(n):
            w = float(a[i, j])
            if w > tol.zero_tol:
                arcs.append((j, i, w))
    kirchhoff = np.eye(n) - a
    return CommunicationDigraph(n, tuple(arcs)), KirchhoffMatrix(_frozen(kirchhoff))


def _reachable(start: int, adj: list[list[int]]) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def _strong_components(n: int, succ: list[list[int]], pred: list[list[int]]) -> list[tuple[int, ...]]:
    # Forward/backward reachability intersection; fine at this scale.
    assigned = [False] * n
    comps = []
    for v in range(n):
        if assigned[v]:
            continue
        comp = sorted(_reachable(v, succ) & _reachable(v, pred))
        for u in comp:
            assigned[u] = True
        comps.append(tuple(comp))
    return comps


def decompose(g: CommunicationDigraph) -> BicomponentDecomposition:
    """Split into classes, classify final/nonbasic, fix the Frobenius order.

    Final classes come first, sorted by their smallest agent; the remaining
    classes follow in a topological order of the condensation (influencing
    classes before influenced ones), smallest-agent first among the ready
    ones. The resulting agent order makes P lower block-triangular.
    """
    n = g.n
    succ: list[list[int]] = [[] for _ in range(n)]
    pred: list[list[int]] = [[] for _ in range(n)]
    for u, v, _ in g.arcs:
        if u != v:
            succ[u].append(v)
            pred[v].append(u)
    comps = _strong_components(n, succ, pred)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci

    k = len(comps)
    cond_succ: list[set[int]] = [set() for _ in range(k)]
    indeg = [0] * k
    seen_pairs = set()
    for u, v, _ in g.arcs:
        cu, cv = comp_of[u], comp_of[v]
        if cu != cv and (cu, cv) not in seen_pairs:
            seen_pairs.add((cu, cv))
            cond_succ[cu].add(cv)
            indeg[cv] += 1

    basic_ids = sorted((ci for ci in range(k) if indeg[ci] == 0), key=lambda ci: comps[ci][0])
    ordered = list(basic_ids)
    remaining = indeg[:]
    for ci in basic_ids:
        for cj in cond_succ[ci]:
            remaining[cj] -= 1
    placed = set(basic_ids)
    while len(ordered) < k:
        ready = [ci for ci in range(k) if ci not in placed and remaining[ci] == 0]
        nxt = min(ready, key=lambda ci: comps[ci][0])
        ordered.append(nxt)
        placed.add(nxt)
        for cj in cond_succ[nxt]:
            remaining[cj] -= 1

    classes = tuple(comps[ci] for ci in ordered)
    is_basic = tuple(ci in basic_ids for ci in ordered)
    num_final = len(basic_ids)
    num_basic = sum(len(c) for c, flag in zip(classes, is_basic) if flag)
    order = tuple(v for c in classes for v in c)
    class_of = [0] * n
    index_in_class = [0] * n
    for ci, comp in enumerate(classes):
        for pos, v in enumerate(comp):
            class_of[v] = ci
            index_in_class[v] = pos
    return BicomponentDecomposition(
        classes=classes,
        is_basic=is_basic,
        num_final_classes=num_final,
        num_basic_agents=num_basic,
        order=order,
        class_of=tuple(class_of),
        index_in_class=tuple(index_in_class),
        sizes=tuple(len(c) for c in classes),
    )


def class_period(g: CommunicationDigraph, vertices) -> int:
    """Period of a strongly connected class: gcd of its closed-walk lengths.

    Computed from BFS levels: every in-class arc (u, v) contributes
    level(u) + 1 - level(v). A single vertex without a loop has no closed
    walk; it is treated as aperiodic (period 1).
    """
    verts = sorted(set(int(v) for v in vertices))
    vset = set(verts)
    adj: dict[int, list[int]] = {v: [] for v in verts}
    arcs_within = []
    for u, v, _ in g.arcs:
        if u in vset and v in vset:
            arcs_within.append((u, v))
            if u != v:
                adj[u].append(v)
    radj: dict[int, list[int]] = {v: [] for v in verts}
    for u, v in arcs_within:
        if u != v:
            radj[v].append(u)

    start = verts[0]
    fwd = _reach_dict(start, adj)
    bwd = _reach_dict(start, radj)
    if not (vset <= fwd and vset <= bwd):
        raise NotStronglyConnectedError(f"vertex set {verts} is not strongly connected")
    if not arcs_within:
        return 1

    level = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    period = 0
    for u, v in arcs_within:
        period = gcd(period, level[u] + 1 - level[v])
    return period if period else 1


def _reach_dict(start: int, adj: dict[int, list[int]]) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def spectral_class(
    p: StochasticMatrix,
    d: BicomponentDecomposition,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> SpectralClass:
    """Classify ``p`` as regular, proper-not-regular, or improper.

    Eigenvalues of modulus one other than one arise exactly from periodic
    final classes, so properness is read off the class periods; no
    eigensolver is involved.
    """
    g, _ = build(p, tol)
    periods = tuple(class_period(g, cls) for cls in d.basic_classes())
    if any(per >= 2 for per in periods):
        kind = SpectralKind.IMPROPER
    elif d.num_final_classes == 1:
        kind = SpectralKind.REGULAR
    else:
        kind = SpectralKind.PROPER_NOT_REGULAR
    return SpectralClass(kind=kind, periods=periods)


def export_dot(g: CommunicationDigraph, d: BicomponentDecomposition) -> str:
    """Deterministic DOT rendering: one cluster per class, arc labels = weights.

    Agents are shown 1-based. Final-class clusters are solid, others dashed.
    """
    lines = ["digraph influence {", "  rankdir=LR;", "  node [shape=circle];"]
    for ci, cls in enumerate(d.classes):
        style = "solid" if d.is_basic[ci] else "dashed"
        tag = "final" if d.is_basic[ci] else "nonbasic"
        lines.append(f"  subgraph cluster_{ci} {{")
        lines.append(f'    label="class {ci + 1} ({tag})";')
        lines.append(f"    style={style};")
        for v in cls:
            lines.append(f'    "{v + 1}";')
        lines.append("  }")
    for u, v, w in sorted(g.arcs):
        lines.append(f'  "{u + 1}" -> "{v + 1}" [label="{w:g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
