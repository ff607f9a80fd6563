"""Independent reference implementations used as test oracles."""
from __future__ import annotations


def hvg_reference_edges(values) -> set[tuple[int, int]]:
    """Textbook horizontal visibility graph: all intermediates strictly below
    the smaller endpoint. Written independently of the package builders."""
    x = list(map(float, values))
    n = len(x)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            lo = min(x[i], x[j])
            if all(x[q] < lo for q in range(i + 1, j)):
                edges.add((i, j))
    return edges


def lphvg_reference_edges(values, rho: int) -> set[tuple[int, int]]:
    """Pair-by-pair blocker count, plain Python loops."""
    x = list(map(float, values))
    n = len(x)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            lo = min(x[i], x[j])
            blockers = sum(1 for q in range(i + 1, j) if x[q] >= lo)
            if blockers <= rho:
                edges.add((i, j))
    return edges


def edge_set(graph) -> set[tuple[int, int]]:
    return set(graph.edges())


def geometric_pmf_series_mean(rho: int, tail_mass: float = 1e-14) -> float:
    """Mean degree by summing k * P(k) until the geometric tail is negligible."""
    ratio = (2 * rho + 2) / (2 * rho + 3)
    k = 2 * (rho + 1)
    p = 1.0 / (2 * rho + 3)
    total = 0.0
    while p > tail_mass:
        total += k * p
        k += 1
        p *= ratio
    return total
