"""Sliding-window evolution pipeline: per-window graphs, pairwise graph
distances, a random-reference threshold, correlation index, and recurrence."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import VisibilityGraph, build_lphvg
from .metrics import mean_clustering, mean_degree_empirical, mean_path_length
from .series import RngConfig, as_values, validate_rho

DEFAULT_ENSEMBLE = 10
_THRESHOLD_STREAM_TAG = 0x7468  # namespaces the reference-series substreams


def thread_count() -> int:
    """Worker cap from LPHVG_THREADS; defaults to 1 (results never depend on it)."""
    raw = os.environ.get("LPHVG_THREADS", "")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def _map_ordered(fn, items):
    workers = thread_count()
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class WindowConfig:
    window_len: int
    step: int

    def __post_init__(self):
        if self.window_len < 2:
            raise ValueError(f"window_len must be >= 2, got {self.window_len}")
        if not 0 < self.step < self.window_len:
            raise ValueError(
                f"need 0 < step < window_len, got step={self.step}, "
                f"window_len={self.window_len}"
            )


def make_windows(n: int, cfg: WindowConfig) -> list[tuple[int, int]]:
    """Half-open ranges [i*step, i*step + window_len), i = 0..T-1."""
    if n < cfg.window_len:
        raise ValueError(f"series length {n} shorter than window {cfg.window_len}")
    count = (n - cfg.window_len) // cfg.step + 1
    return [(i * cfg.step, i * cfg.step + cfg.window_len) for i in range(count)]


def graph_distance(g1: VisibilityGraph, g2: VisibilityGraph) -> float:
    """sqrt(# differing ordered adjacency entries) between equal-size graphs."""
    if g1.n != g2.n:
        raise ValueError(f"node counts differ: {g1.n} vs {g2.n}")
    common = np.intersect1d(g1.edge_codes, g2.edge_codes, assume_unique=True).size
    sym_diff = g1.edge_codes.size + g2.edge_codes.size - 2 * common
    return math.sqrt(2.0 * sym_diff)


def distance_matrix(graphs: list[VisibilityGraph]) -> np.ndarray:
    count = len(graphs)
    dist = np.zeros((count, count))
    pairs = [(m, n) for m in range(count) for n in range(m + 1, count)]
    values = _map_ordered(lambda p: graph_distance(graphs[p[0]], graphs[p[1]]), pairs)
    for (m, n), d in zip(pairs, values):
        dist[m, n] = dist[n, m] = d
    return dist


def _window_graphs(values: np.ndarray, rho: int, cfg: WindowConfig) -> list[VisibilityGraph]:
    windows = make_windows(values.size, cfg)
    return _map_ordered(lambda w: build_lphvg(values[w[0] : w[1]], rho), windows)


def threshold_from_random(
    cfg: WindowConfig,
    series_len: int,
    rho: int,
    rng: RngConfig,
    ensemble: int = DEFAULT_ENSEMBLE,
) -> float:
    """Minimum off-diagonal window distance over an i.i.d.-uniform reference ensemble.

    Each member is an independent uniform series of the target's length run
    through the same window pipeline.
    """
    rho = validate_rho(rho)
    if ensemble < 1:
        raise ValueError(f"ensemble must be >= 1, got {ensemble}")
    if series_len < cfg.window_len:
        raise ValueError(
            f"series_len {series_len} shorter than window {cfg.window_len}"
        )
    best = math.inf
    for member in range(ensemble):
        g = rng.generator(_THRESHOLD_STREAM_TAG, member)
        values = g.random(series_len)
        graphs = _window_graphs(values, rho, cfg)
        dist = distance_matrix(graphs)
        if dist.shape[0] < 2:
            raise ValueError("need at least two windows to form a reference distance")
        off = dist[np.triu_indices(dist.shape[0], k=1)]
        best = min(best, float(off.min()))
    if not best > 0:
        raise ValueError("degenerate reference ensemble: zero minimum distance")
    return best


def correlation_index(distances: np.ndarray, theta: float) -> np.ndarray:
    """Entrywise 1 - d/theta where d < theta, else 0."""
    if not theta > 0:
        raise ValueError(f"theta must be > 0, got {theta}")
    d = np.asarray(distances, dtype=np.float64)
    return np.where(d < theta, 1.0 - d / theta, 0.0)


def recurrence_matrix(distances: np.ndarray, theta: float) -> np.ndarray:
    """Binary matrix, entry 1 iff d < theta (step function with Theta(0) = 0)."""
    if not theta > 0:
        raise ValueError(f"theta must be > 0, got {theta}")
    d = np.asarray(distances, dtype=np.float64)
    return (d < theta).astype(np.int8)


@dataclass(frozen=True)
class WindowMetrics:
    start: int
    stop: int
    mean_degree: float
    mean_clustering: float
    mean_path_length: float


@dataclass(frozen=True)
class EvolutionResult:
    window_count: int
    windows: tuple[tuple[int, int], ...]
    per_window: tuple[WindowMetrics, ...]
    distances: np.ndarray
    theta: float
    gamma: np.ndarray
    recurrence: np.ndarray


def evolve(
    series,
    rho: int,
    cfg: WindowConfig,
    rng: RngConfig,
    ensemble: int = DEFAULT_ENSEMBLE,
) -> EvolutionResult:
    """Run the full window pipeline; deterministic given (series, rho, cfg, rng)."""
    values = as_values(series)
    rho = validate_rho(rho)
    windows = make_windows(values.size, cfg)
    graphs = _window_graphs(values, rho, cfg)
    per_window = tuple(
        WindowMetrics(
            start=w[0],
            stop=w[1],
            mean_degree=mean_degree_empirical(g),
            mean_clustering=mean_clustering(g),
            mean_path_length=mean_path_length(g),
        )
        for w, g in zip(windows, graphs)
    )
    dist = distance_matrix(graphs)
    theta = threshold_from_random(cfg, values.size, rho, rng, ensemble)
    gamma = correlation_index(dist, theta)
    rec = recurrence_matrix(dist, theta)
    return EvolutionResult(
        window_count=len(windows),
        windows=tuple(windows),
        per_window=per_window,
        distances=dist,
        theta=theta,
        gamma=gamma,
        recurrence=rec,
    )
