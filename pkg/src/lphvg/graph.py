"""LPHVG construction: optimized scan builder plus an exhaustive pairwise oracle.

Two series points i < j are linked when at most rho of the intermediate
values x_q (i < q < j) satisfy x_q >= min(x_i, x_j); values exactly equal
to the smaller endpoint count as blocking.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .series import as_values, validate_rho

ADJACENCY_EXPORT_MAX_NODES = 2000


@dataclass(frozen=True, eq=False)
class VisibilityGraph:
    """Immutable undirected simple graph over series indices 0..n-1."""

    n: int
    rho: int
    neighbors: tuple[tuple[int, ...], ...]

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(nb) for nb in self.neighbors)

    @cached_property
    def edge_codes(self) -> np.ndarray:
        """Sorted int64 codes i*n+j (i<j) of all edges; used for fast set algebra."""
        codes = [
            i * self.n + j
            for i, nb in enumerate(self.neighbors)
            for j in nb
            if j > i
        ]
        return np.array(sorted(codes), dtype=np.int64)

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def edges(self):
        """Yield edges (i, j) with i < j in lexicographic order."""
        for i, nb in enumerate(self.neighbors):
            for j in nb:
                if j > i:
                    yield (i, j)

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.neighbor_sets[i]

    def degrees(self) -> np.ndarray:
        return np.array([len(nb) for nb in self.neighbors], dtype=np.int64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VisibilityGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.rho == other.rho
            and self.neighbors == other.neighbors
        )


def penetrable_visible(series, i: int, j: int, rho: int) -> bool:
    """Direct test of the link rule for one pair (0 <= i < j < n)."""
    x = as_values(series)
    rho = validate_rho(rho)
    n = x.size
    if not (0 <= i < j < n):
        raise IndexError(f"need 0 <= i < j < n, got i={i}, j={j}, n={n}")
    blockers = int(np.count_nonzero(x[i + 1 : j] >= min(x[i], x[j])))
    return blockers <= rho


def build_lphvg(series, rho: int) -> VisibilityGraph:
    """Build the LPHVG of a series with penetrability rho.

    Rightward scan per node i holding the rho+1 largest intermediates seen so
    far in a min-heap. A later j links to i iff fewer than rho+1 intermediates
    exist or the (rho+1)-th largest of them lies strictly below both
    endpoints. Once rho+1 intermediates >= x_i have accumulated, no later j
    can link (they face >= rho+1 blockers) and the scan stops; expected scan
    length is O(rho * log n) per node for i.i.d. input, worst case O(n).
    """
    x = as_values(series)
    rho = validate_rho(rho)
    n = x.size
    if n < 2:
        raise ValueError(f"series must have at least 2 points, got {n}")
    vals = x.tolist()
    nbrs: list[list[int]] = [[] for _ in range(n)]
    cap = rho + 1
    push, replace = heapq.heappush, heapq.heapreplace
    for i in range(n - 1):
        xi = vals[i]
        nbrs_i = nbrs[i]
        top: list[float] = []  # min-heap of the cap largest intermediates
        for j in range(i + 1, n):
            xj = vals[j]
            if len(top) < cap:
                # fewer than rho+1 intermediates: always linked
                nbrs_i.append(j)
                nbrs[j].append(i)
                push(top, xj)
                if len(top) == cap and top[0] >= xi:
                    break
            else:
                t = top[0]
                if t < xi and t < xj:
                    nbrs_i.append(j)
                    nbrs[j].append(i)
                if xj > t:
                    replace(top, xj)
                    if top[0] >= xi:
                        break
    return VisibilityGraph(n=n, rho=rho, neighbors=tuple(tuple(nb) for nb in nbrs))


def build_lphvg_naive(series, rho: int) -> VisibilityGraph:
    """Oracle builder: count blockers of every pair directly.

    Sums, for each intermediate q, its blocking indicator over all pairs
    (i < q < j); no code is shared with the scan builder's decision path.
    Quadratic in memory, intended for cross-checking on small inputs.
    """
    x = as_values(series)
    rho = validate_rho(rho)
    n = x.size
    if n < 2:
        raise ValueError(f"series must have at least 2 points, got {n}")
    mins = np.minimum.outer(x, x)
    blockers = np.zeros((n, n), dtype=np.int64)
    for q in range(1, n - 1):
        blockers[:q, q + 1 :] += x[q] >= mins[:q, q + 1 :]
    linked = np.triu(blockers <= rho, k=1)
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for i, j in zip(*np.nonzero(linked)):
        nbrs[int(i)].append(int(j))
        nbrs[int(j)].append(int(i))
    return VisibilityGraph(
        n=n, rho=rho, neighbors=tuple(tuple(sorted(nb)) for nb in nbrs)
    )


def write_edge_list(graph: VisibilityGraph, path) -> None:
    """Write edges as lines "i j" (i < j, zero-based, lexicographic order)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for i, j in graph.edges():
            fh.write(f"{i} {j}\n")


def write_adjacency_csv(graph: VisibilityGraph, path) -> None:
    """Write the dense 0/1 adjacency matrix as CSV; refused for large graphs."""
    if graph.n > ADJACENCY_EXPORT_MAX_NODES:
        raise ValueError(
            f"adjacency export limited to n <= {ADJACENCY_EXPORT_MAX_NODES} "
            f"(got n={graph.n}); use the edge-list format"
        )
    adj = np.zeros((graph.n, graph.n), dtype=np.int8)
    for i, nb in enumerate(graph.neighbors):
        adj[i, list(nb)] = 1
    with Path(path).open("w", encoding="utf-8") as fh:
        for row in adj:
            fh.write(",".join(map(str, row)))
            fh.write("\n")
