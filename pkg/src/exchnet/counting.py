"""Injective homomorphism and subgraph counting, and degree-based shortcuts.

Conventions: the empty graph maps into anything in exactly one way, so
``inj(empty, G) = 1`` and every sigma vector carries a 1 for the empty class.
A pattern larger than its target yields 0.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .graphs import (
    DegreeDistribution,
    LabeledNetwork,
    UnlabeledClass,
    class_aut,
    enumerate_classes,
)


def _falling_factorial(n: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= n - t
    return out


def _pattern_order(adj: list, k: int) -> list:
    """Vertex order for backtracking: highest degree first, then neighbors of
    already-placed vertices, so edge constraints bite as early as possible."""
    deg = [bin(a).count("1") for a in adj]
    order: list = []
    placed = 0
    while len(order) < k:
        best_v, best_key = -1, None
        for v in range(k):
            if placed >> v & 1:
                continue
            anchored = bin(adj[v] & placed).count("1")
            key = (anchored, deg[v])
            if best_key is None or key > best_key:
                best_key, best_v = key, v
        order.append(best_v)
        placed |= 1 << best_v
    return order


def _inj_masks(f_adj: list, k: int, g_adj: list, m: int) -> int:
    """Count injective maps {0..k-1} -> {0..m-1} preserving f's edges."""
    if k > m:
        return 0
    if k == 0:
        return 1
    order = _pattern_order(f_adj, k)
    pos_of = {v: p for p, v in enumerate(order)}
    # earlier_nbrs[p] = positions (already assigned) adjacent to order[p]
    earlier_nbrs = []
    for p, v in enumerate(order):
        earlier_nbrs.append(
            [pos_of[u] for u in range(k) if (f_adj[v] >> u) & 1 and pos_of[u] < p]
        )
    image = [0] * k
    count = 0

    def rec(p: int, used: int):
        nonlocal count
        if p == k:
            count += 1
            return
        req = earlier_nbrs[p]
        for w in range(m):
            if used >> w & 1:
                continue
            ok = True
            for q in req:
                if not (g_adj[image[q]] >> w) & 1:
                    ok = False
                    break
            if ok:
                image[p] = w
                rec(p + 1, used | (1 << w))

    rec(0, 0)
    return count


@lru_cache(maxsize=500000)
def _inj_cached(fn: int, fmask: int, gn: int, gmask: int) -> int:
    f = LabeledNetwork.from_mask(fn, fmask)
    g = LabeledNetwork.from_mask(gn, gmask)
    return _inj_masks(f.adjacency_bitsets(), f.n, g.adjacency_bitsets(), g.n)


def inj(f: LabeledNetwork, g: LabeledNetwork) -> int:
    """Number of injective homomorphisms from f (on its non-isolated support)
    into g.  Edges must map to edges; non-edges are unconstrained."""
    fs = f.restrict_to_support() if f.edges else LabeledNetwork.empty(0)
    if fs.n > g.n:
        return 0
    return _inj_cached(fs.n, fs.mask, g.n, g.mask)


def sub(f: LabeledNetwork, g: LabeledNetwork) -> int:
    """Number of subgraphs of g isomorphic to f: inj(f,g) / aut(f)."""
    fs = f.restrict_to_support() if f.edges else LabeledNetwork.empty(0)
    a = aut_of_support(fs)
    num = inj(fs, g)
    q, r = divmod(num, a)
    assert r == 0, "inj not divisible by aut"
    return q


def aut_of_support(f: LabeledNetwork) -> int:
    from .graphs import aut_count

    fs = f.restrict_to_support() if f.edges else LabeledNetwork.empty(0)
    if fs.n == 0:
        return 1
    return aut_count(fs)


def t_inj(f: LabeledNetwork, g: LabeledNetwork) -> Fraction:
    """Injective homomorphism density: inj(f,g) over all injective maps."""
    fs = f.restrict_to_support() if f.edges else LabeledNetwork.empty(0)
    denom = _falling_factorial(g.n, fs.n)
    return Fraction(inj(fs, g), denom)


def sigma(u: UnlabeledClass, x: LabeledNetwork) -> int:
    """Number of labeled members of the class that are subgraphs of x."""
    if u.is_empty:
        return 1
    if u.n_vertices > x.n:
        return 0
    return sub(u.representative(), x)


def sigma_vector(x: LabeledNetwork, n: int | None = None) -> dict:
    """sigma over every class at n (default: x's node count), empty included."""
    n = x.n if n is None else n
    return {u: sigma(u, x) for u in enumerate_classes(n, True)}


@lru_cache(maxsize=500000)
def _r_count_cached(u: UnlabeledClass, n: int, xn: int, xmask: int) -> int:
    x = LabeledNetwork.from_mask(xn, xmask)
    xs = x.restrict_to_support() if x.edges else LabeledNetwork.empty(0)
    k = xs.n
    uv = u.n_vertices
    if uv > n:
        return 0
    padded = u.padded(n)
    num = inj(xs, padded) * math.factorial(n - k)
    den = class_aut(u) * math.factorial(n - uv)
    q, r = divmod(num, den)
    assert r == 0, "labeled supergraph count not integral"
    return q


def r_count(u: UnlabeledClass, x: LabeledNetwork) -> int:
    """Number of labeled graphs on x's node set in class u that contain x.

    Counted via orbit arithmetic: permutations embedding x into the padded
    representative of u, divided by the padded automorphism count.  Equivalent
    to enumerating the labeled members of the class and testing containment.
    """
    return _r_count_cached(u, x.n, x.n, x.mask)


def sub_in_complete(u: UnlabeledClass, n: int) -> int:
    """sub(u, K_n): copies of the class inside the complete graph."""
    if u.is_empty:
        return 1
    return sub(u.representative(), LabeledNetwork.complete(n))


def star_count_from_degrees(dd: DegreeDistribution, k: int) -> int:
    """k-star count as a degree-distribution functional.

    For k >= 2 every hub of degree j contributes C(j, k); for k = 1 this
    counts edges (half the total degree).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        total = sum(j * c for j, c in enumerate(dd.counts))
        assert total % 2 == 0
        return total // 2
    return sum(math.comb(j, k) * c for j, c in enumerate(dd.counts))


def two_disjoint_edges_from_degrees(dd: DegreeDistribution) -> int:
    """Count of two-disjoint-edge subgraphs: C(|E|, 2) minus the 2-star count."""
    e = star_count_from_degrees(dd, 1)
    return math.comb(e, 2) - star_count_from_degrees(dd, 2)


# Named small classes used throughout.


def edge_class() -> UnlabeledClass:
    return UnlabeledClass.of(LabeledNetwork.from_edges(2, [(1, 2)]))


def star_class(k: int) -> UnlabeledClass:
    """The k-star (hub plus k leaves); the 1-star is a single edge."""
    return UnlabeledClass.of(LabeledNetwork.star(k + 1))


def triangle_class() -> UnlabeledClass:
    return UnlabeledClass.of(LabeledNetwork.complete(3))


def two_disjoint_edges_class() -> UnlabeledClass:
    return UnlabeledClass.of(LabeledNetwork.from_edges(4, [(1, 2), (3, 4)]))


def matching_class(k: int) -> UnlabeledClass:
    """k pairwise disjoint edges."""
    edges = [(2 * t + 1, 2 * t + 2) for t in range(k)]
    return UnlabeledClass.of(LabeledNetwork.from_edges(2 * k, edges))


def path_class(n_vertices: int) -> UnlabeledClass:
    return UnlabeledClass.of(LabeledNetwork.path(n_vertices))


def cycle_class(n_vertices: int) -> UnlabeledClass:
    return UnlabeledClass.of(LabeledNetwork.cycle(n_vertices))


def complete_class(n_vertices: int) -> UnlabeledClass:
    return UnlabeledClass.of(LabeledNetwork.complete(n_vertices))
