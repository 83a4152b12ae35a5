"""Labeled networks, canonical forms, and unlabeled-class enumeration.

A network on nodes ``{1..n}`` is a simple undirected graph.  Its dyads (the
unordered node pairs) are indexed in colex order, so the dyads of ``{1..k}``
always occupy the first ``k(k-1)/2`` indices.  That makes bitmask encodings of
networks stable under restriction to an initial node segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

MAX_NODES = 8


class SizeCapError(ValueError):
    """An operation was requested beyond the supported node-count cap."""


class InvalidNetworkError(ValueError):
    """An edge list violates the simple-graph invariants."""


def dyad_index(i: int, j: int) -> int:
    """Colex index of dyad {i, j}, 1-based nodes, i != j."""
    if i == j:
        raise InvalidNetworkError(f"loop at node {i}")
    if i > j:
        i, j = j, i
    return (j - 1) * (j - 2) // 2 + (i - 1)


@lru_cache(maxsize=None)
def dyads(n: int) -> tuple[tuple[int, int], ...]:
    """All dyads of {1..n} in colex order: (1,2), (1,3), (2,3), (1,4), ..."""
    out = []
    for j in range(2, n + 1):
        for i in range(1, j):
            out.append((i, j))
    return tuple(out)


def num_dyads(n: int) -> int:
    return n * (n - 1) // 2


def dyad_label(d: tuple[int, int]) -> str:
    return f"{d[0]}-{d[1]}"


def parse_dyad_label(s: str) -> tuple[int, int]:
    a, b = s.split("-")
    i, j = int(a), int(b)
    if i > j:
        i, j = j, i
    return (i, j)


@dataclass(frozen=True)
class LabeledNetwork:
    """A simple labeled graph on node set {1..n}.

    ``edges`` holds unordered pairs (i, j) with 1 <= i < j <= n.  The same
    object doubles as an observed network and as a dyad subset viewed as an
    edge-induced subgraph.
    """

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise InvalidNetworkError("node count must be nonnegative")
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.n):
                raise InvalidNetworkError(f"edge {e} out of range for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "LabeledNetwork":
        norm = set()
        for i, j in edges:
            if i == j:
                raise InvalidNetworkError(f"loop at node {i}")
            norm.add((min(i, j), max(i, j)))
        return cls(n, frozenset(norm))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "LabeledNetwork":
        ds = dyads(n)
        return cls(n, frozenset(ds[k] for k in range(len(ds)) if mask >> k & 1))

    @classmethod
    def empty(cls, n: int) -> "LabeledNetwork":
        return cls(n, frozenset())

    @classmethod
    def complete(cls, n: int) -> "LabeledNetwork":
        return cls(n, frozenset(dyads(n)))

    @classmethod
    def path(cls, n: int) -> "LabeledNetwork":
        return cls.from_edges(n, [(i, i + 1) for i in range(1, n)])

    @classmethod
    def star(cls, n: int, hub: int = 1) -> "LabeledNetwork":
        return cls.from_edges(n, [(hub, v) for v in range(1, n + 1) if v != hub])

    @classmethod
    def cycle(cls, n: int) -> "LabeledNetwork":
        es = [(i, i + 1) for i in range(1, n)] + [(1, n)]
        return cls.from_edges(n, es)

    @property
    def mask(self) -> int:
        m = 0
        for i, j in self.edges:
            m |= 1 << dyad_index(i, j)
        return m

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.n
        for i, j in self.edges:
            d[i - 1] += 1
            d[j - 1] += 1
        return tuple(d)

    def support(self) -> tuple[int, ...]:
        """Non-isolated vertices, ascending."""
        s = set()
        for i, j in self.edges:
            s.add(i)
            s.add(j)
        return tuple(sorted(s))

    def restrict_to_support(self) -> "LabeledNetwork":
        """Relabel the non-isolated vertices to {1..k}, dropping isolated ones."""
        sup = self.support()
        relab = {v: k + 1 for k, v in enumerate(sup)}
        return LabeledNetwork.from_edges(
            len(sup), [(relab[i], relab[j]) for i, j in self.edges]
        )

    def induced(self, keep: Sequence[int]) -> "LabeledNetwork":
        """Subnetwork induced by ``keep``, relabeled to {1..len(keep)}."""
        keep = sorted(keep)
        relab = {v: k + 1 for k, v in enumerate(keep)}
        kept = set(keep)
        es = [
            (relab[i], relab[j]) for i, j in self.edges if i in kept and j in kept
        ]
        return LabeledNetwork.from_edges(len(keep), es)

    def with_nodes(self, n: int) -> "LabeledNetwork":
        """Same edges on a node set padded (or trimmed, if isolated) to n."""
        sup = self.support()
        if sup and sup[-1] > n:
            raise InvalidNetworkError(f"cannot fit support {sup} in n={n}")
        return LabeledNetwork(n, self.edges)

    def permute(self, perm: dict) -> "LabeledNetwork":
        """Relabel nodes by ``perm`` (a dict {old: new} over 1..n)."""
        return LabeledNetwork.from_edges(
            self.n, [(perm[i], perm[j]) for i, j in self.edges]
        )

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_subgraph_of(self, other: "LabeledNetwork") -> bool:
        return self.edges <= other.edges

    def adjacency_bitsets(self) -> list[int]:
        """adj[v] has bit w set iff nodes v+1 and w+1 are adjacent (0-based)."""
        adj = [0] * self.n
        for i, j in self.edges:
            adj[i - 1] |= 1 << (j - 1)
            adj[j - 1] |= 1 << (i - 1)
        return adj

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __str__(self) -> str:
        es = ",".join(f"{i}-{j}" for i, j in self.sorted_edges())
        return f"LabeledNetwork(n={self.n}, [{es}])"


@dataclass(frozen=True)
class CanonicalForm:
    """Lexicographically minimal upper-triangular adjacency bitstring.

    Bits follow the colex dyad order of :func:`dyads`.  Two labeled networks
    on the same node count share a CanonicalForm iff they are isomorphic.
    """

    n_vertices: int
    bits: tuple

    @property
    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    def to_network(self) -> LabeledNetwork:
        ds = dyads(self.n_vertices)
        return LabeledNetwork(
            self.n_vertices,
            frozenset(ds[k] for k, b in enumerate(self.bits) if b),
        )

    def sort_key(self):
        return (self.n_vertices, self.bits)


def _min_colex_bits(adj: list, n: int) -> tuple:
    """Minimal colex adjacency bitstring over all vertex orderings.

    Branch and bound: positions are filled left to right; a partial ordering
    is abandoned as soon as its determined bit prefix exceeds the best known
    complete bitstring.  The result equals full enumeration over all n!
    orderings.
    """
    if n <= 1:
        return ()
    best: list | None = None
    perm: list = []
    prefix: list = []
    used = [False] * n

    def rec():
        nonlocal best
        p = len(perm)
        if p == n:
            if best is None or prefix < best:
                best = list(prefix)
            return
        cands = []
        for v in range(n):
            if used[v]:
                continue
            row = tuple((adj[v] >> perm[q]) & 1 for q in range(p))
            cands.append((row, v))
        cands.sort()
        base = len(prefix)
        for row, v in cands:
            prefix.extend(row)
            if best is not None and prefix > best[: len(prefix)]:
                del prefix[base:]
                break  # candidates are sorted, later ones are no better
            used[v] = True
            perm.append(v)
            rec()
            perm.pop()
            used[v] = False
            del prefix[base:]

    rec()
    assert best is not None
    return tuple(best)


@lru_cache(maxsize=500000)
def _canon_bits(n: int, mask: int) -> tuple:
    net = LabeledNetwork.from_mask(n, mask)
    return _min_colex_bits(net.adjacency_bitsets(), n)


def canonical_form(g: LabeledNetwork) -> CanonicalForm:
    """Canonical form of g on all of its n vertices (isolated ones included)."""
    if g.n > MAX_NODES:
        raise SizeCapError(f"canonical_form supports n <= {MAX_NODES}, got {g.n}")
    return CanonicalForm(g.n, _canon_bits(g.n, g.mask))


def are_isomorphic(g: LabeledNetwork, h: LabeledNetwork) -> bool:
    if g.n != h.n:
        return False
    return canonical_form(g) == canonical_form(h)


@dataclass(frozen=True)
class UnlabeledClass:
    """An isomorphism class, keyed by the canonical form of its edge-induced
    representative (no isolated vertices).  The empty graph gets its own flag.
    """

    canon: CanonicalForm
    is_empty: bool

    @classmethod
    def empty(cls) -> "UnlabeledClass":
        return cls(CanonicalForm(0, ()), True)

    @classmethod
    def of(cls, g: LabeledNetwork) -> "UnlabeledClass":
        """The class of g, after restriction to its non-isolated vertices."""
        if not g.edges:
            return cls.empty()
        return cls(canonical_form(g.restrict_to_support()), False)

    @property
    def n_vertices(self) -> int:
        return self.canon.n_vertices

    @property
    def edge_count(self) -> int:
        return sum(self.canon.bits)

    def representative(self) -> LabeledNetwork:
        """The canonical labeled representative on exactly n_vertices nodes."""
        return self.canon.to_network()

    def padded(self, n: int) -> LabeledNetwork:
        """The representative padded with isolated vertices up to n nodes."""
        if self.n_vertices > n:
            raise InvalidNetworkError(
                f"class on {self.n_vertices} vertices does not fit in n={n}"
            )
        return LabeledNetwork(n, self.representative().edges)

    def sort_key(self):
        return (self.edge_count, self.n_vertices, self.canon.bits)

    def key(self) -> str:
        """Serialization key: sorted i-j pairs of the representative."""
        if self.is_empty:
            return "EMPTY"
        return ",".join(
            dyad_label(e) for e in self.representative().sorted_edges()
        )

    def __str__(self) -> str:
        return self.key()


def class_from_key(key: str) -> UnlabeledClass:
    if key == "EMPTY":
        return UnlabeledClass.empty()
    edges = [parse_dyad_label(tok) for tok in key.split(",")]
    n = max(max(e) for e in edges)
    return UnlabeledClass.of(LabeledNetwork.from_edges(n, edges))


@lru_cache(maxsize=None)
def _enumerate_classes_tuple(n: int) -> tuple:
    """All classes of edge-induced subgraphs of K_n, the empty class first.

    Grown breadth-first by single-edge additions from smaller classes, with
    canonical deduplication.  Deterministic order: edge count, then vertex
    count, then canonical bits.
    """
    if not (1 <= n <= MAX_NODES):
        raise SizeCapError(f"class enumeration supports 1 <= n <= {MAX_NODES}")
    empty = UnlabeledClass.empty()
    seen = {empty}
    frontier = [empty]
    while frontier:
        new_frontier = []
        for cls_ in frontier:
            k = cls_.n_vertices
            rep = cls_.representative()
            cand_edges = []
            for i, j in combinations(range(1, k + 1), 2):
                if not rep.has_edge(i, j):
                    cand_edges.append((i, j))
            if k + 1 <= n:
                cand_edges.extend((i, k + 1) for i in range(1, k + 1))
            if k + 2 <= n:
                cand_edges.append((k + 1, k + 2))
            for e in cand_edges:
                nn = max(k, e[1])
                child = LabeledNetwork(nn, rep.edges | {e})
                ccls = UnlabeledClass.of(child)
                if ccls not in seen:
                    seen.add(ccls)
                    new_frontier.append(ccls)
        frontier = new_frontier
    return tuple(sorted(seen, key=UnlabeledClass.sort_key))


def enumerate_classes(n: int, include_empty: bool = True) -> list:
    """Isomorphism classes of graphs without isolated vertices on <= n nodes."""
    classes = list(_enumerate_classes_tuple(n))
    if not include_empty:
        classes = [c for c in classes if not c.is_empty]
    return classes


def class_index(n: int) -> dict:
    """Map class -> position in the deterministic order at n."""
    return {c: k for k, c in enumerate(enumerate_classes(n, True))}


def aut_count(g: LabeledNetwork) -> int:
    """Number of permutations of all n vertices preserving edges and non-edges."""
    n = g.n
    if n <= 1:
        return 1
    adj = g.adjacency_bitsets()
    deg = [bin(a).count("1") for a in adj]
    image = [-1] * n
    used = [False] * n
    count = 0

    def rec(v: int):
        nonlocal count
        if v == n:
            count += 1
            return
        for w in range(n):
            if used[w] or deg[w] != deg[v]:
                continue
            ok = True
            for q in range(v):
                if ((adj[v] >> q) & 1) != ((adj[w] >> image[q]) & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                rec(v + 1)
                used[w] = False
                image[v] = -1

    rec(0)
    return count


@lru_cache(maxsize=None)
def _class_aut(cls_: UnlabeledClass) -> int:
    if cls_.is_empty:
        return 1
    return aut_count(cls_.representative())


def class_aut(cls_: UnlabeledClass) -> int:
    """Automorphism count of the class representative on its support."""
    return _class_aut(cls_)


def class_size(cls_: UnlabeledClass, n: int) -> int:
    """Number of labeled graphs on {1..n} in the class (isolated nodes allowed)."""
    k = cls_.n_vertices
    if k > n:
        return 0
    aut_padded = class_aut(cls_) * math.factorial(n - k)
    size, rem = divmod(math.factorial(n), aut_padded)
    assert rem == 0
    return size


@dataclass(frozen=True)
class DegreeDistribution:
    """counts[j] = number of nodes of degree j, for j = 0..n-1."""

    counts: tuple

    def __post_init__(self):
        if sum(j * c for j, c in enumerate(self.counts)) % 2 != 0:
            raise InvalidNetworkError("odd total degree")

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def edge_total(self) -> int:
        return sum(j * c for j, c in enumerate(self.counts)) // 2


def degree_distribution(g: LabeledNetwork) -> DegreeDistribution:
    counts = [0] * g.n
    for d in g.degrees():
        counts[d] += 1
    return DegreeDistribution(tuple(counts))


def connected_components(g: LabeledNetwork) -> list:
    """Partition of the non-isolated vertices into edge-connected components."""
    nbrs: dict = {}
    for i, j in g.edges:
        nbrs.setdefault(i, set()).add(j)
        nbrs.setdefault(j, set()).add(i)
    seen: set = set()
    comps = []
    for v in sorted(nbrs):
        if v in seen:
            continue
        stack = [v]
        comp = []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def component_classes(cls_: UnlabeledClass) -> list:
    """Classes of the connected components of a class representative."""
    if cls_.is_empty:
        return []
    rep = cls_.representative()
    out = []
    for comp in connected_components(rep):
        keep = set(comp)
        sub = LabeledNetwork.from_edges(
            rep.n, [e for e in rep.edges if e[0] in keep and e[1] in keep]
        )
        out.append(UnlabeledClass.of(sub))
    return sorted(out, key=UnlabeledClass.sort_key)


def is_connected_class(cls_: UnlabeledClass) -> bool:
    if cls_.is_empty:
        return False
    return len(component_classes(cls_)) == 1


# --- edge-list text format -------------------------------------------------


def parse_edge_list(text: str) -> LabeledNetwork:
    """Parse the edge-list format: first line ``n <count>``, then ``i j`` lines.

    Blank lines and ``#`` comments are ignored.
    """
    n = None
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise InvalidNetworkError(
                    f"expected header 'n <count>', got {raw!r}"
                )
            n = int(parts[1])
            if n < 1:
                raise InvalidNetworkError("node count must be positive")
            continue
        if len(parts) != 2:
            raise InvalidNetworkError(f"expected 'i j' pair, got {raw!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise InvalidNetworkError("missing 'n <count>' header")
    return LabeledNetwork.from_edges(n, edges)


def format_edge_list(g: LabeledNetwork) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{i} {j}" for i, j in g.sorted_edges())
    return "\n".join(lines) + "\n"
