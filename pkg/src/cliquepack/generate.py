"""Watts-Strogatz small-world graphs as deterministic edge lists."""

from __future__ import annotations

import random
from typing import Iterable


def watts_strogatz_edges(
    n: int, mean_degree: int, rewire_prob: float, seed: int
) -> list[tuple[int, int]]:
    """Ring lattice of degree ``mean_degree`` with per-edge rewiring.

    Each node starts connected to its ``mean_degree / 2`` nearest neighbors on
    each side; every lattice edge is then rewired with probability
    ``rewire_prob`` to a uniform random endpoint, skipping self-loops and
    duplicates, so the edge count stays exactly ``n * mean_degree / 2``.
    Output is a sorted list of ``(u, v)`` pairs with ``u < v`` and is fully
    determined by the seed.
    """
    if mean_degree % 2 != 0:
        raise ValueError(f"mean degree must be even, got {mean_degree}")
    if not 0 < mean_degree < n:
        raise ValueError(f"mean degree must be in (0, n), got {mean_degree} with n={n}")
    if not 0.0 <= rewire_prob <= 1.0:
        raise ValueError(f"rewire probability must be in [0, 1], got {rewire_prob}")

    rng = random.Random(seed)
    half = mean_degree // 2
    # Edges packed as a*n+b with a < b; per-node degrees for saturation checks.
    edges: set[int] = set()
    deg = [mean_degree] * n
    for j in range(1, half + 1):
        for u in range(n):
            v = (u + j) % n
            a, b = (u, v) if u < v else (v, u)
            edges.add(a * n + b)

    if rewire_prob > 0.0:
        for j in range(1, half + 1):
            for u in range(n):
                if rng.random() >= rewire_prob:
                    continue
                if deg[u] >= n - 1:
                    continue  # u already sees everyone; keep the lattice edge
                v = (u + j) % n
                w = rng.randrange(n)
                a, b = (u, w) if u < w else (w, u)
                while w == u or a * n + b in edges:
                    w = rng.randrange(n)
                    a, b = (u, w) if u < w else (w, u)
                oa, ob = (u, v) if u < v else (v, u)
                edges.remove(oa * n + ob)
                edges.add(a * n + b)
                deg[v] -= 1
                deg[w] += 1

    out = [divmod(code, n) for code in edges]
    out.sort()
    return out


def write_edge_list(edges: Iterable[tuple[int, int]], fp) -> None:
    for u, v in edges:
        fp.write(f"{u} {v}\n")
