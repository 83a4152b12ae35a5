"""Dyad-level dependence structures and exact conditional-independence tests.

Vertices of a dependence graph are the dyads of the node set.  Two standard
structures recur: the incidence graph (dyads adjacent iff they share a node,
the line graph of the complete graph) and its complement, the Kneser graph of
2-subsets (dyads adjacent iff disjoint).  Either can carry undirected or
bidirected edges; the two readings have dual separation rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .graphs import (
    LabeledNetwork,
    SizeCapError,
    UnlabeledClass,
    connected_components,
    dyad_label,
    dyads,
    num_dyads,
)
from .mobius import JointTable, LabeledMobius

UNDIRECTED = "undirected"
BIDIRECTED = "bidirected"

CI_REL_TOL = 1e-10
DISSOC_TOL = 1e-9

MAX_MARKOV_DYADS = 6  # exhaustive triple enumeration cap
MAX_CONNECTED_SET_DYADS = 15


@dataclass(frozen=True)
class DependenceGraph:
    """A graph over the dyads of {1..n}.

    ``adjacency[k]`` is the neighbor bitset of dyad k (colex dyad order);
    ``kind`` selects the undirected or bidirected separation rule.
    """

    n: int
    kind: str
    adjacency: tuple

    def __post_init__(self):
        if self.kind not in (UNDIRECTED, BIDIRECTED):
            raise ValueError(f"unknown edge kind {self.kind!r}")
        if len(self.adjacency) != num_dyads(self.n):
            raise ValueError("adjacency size does not match dyad count")
        for k, bits in enumerate(self.adjacency):
            if bits >> k & 1:
                raise ValueError(f"self-adjacency at dyad {k}")

    @property
    def m(self) -> int:
        return num_dyads(self.n)

    @property
    def vertices(self) -> tuple:
        return dyads(self.n)

    def edge_pairs(self) -> list:
        out = []
        for a in range(self.m):
            for b in range(a + 1, self.m):
                if self.adjacency[a] >> b & 1:
                    out.append((a, b))
        return out

    def edge_count(self) -> int:
        return len(self.edge_pairs())

    def degree(self, k: int) -> int:
        return bin(self.adjacency[k]).count("1")

    def with_kind(self, kind: str) -> "DependenceGraph":
        return DependenceGraph(self.n, kind, self.adjacency)

    def complement(self) -> "DependenceGraph":
        full = (1 << self.m) - 1
        adj = tuple(
            (full & ~self.adjacency[k]) & ~(1 << k) for k in range(self.m)
        )
        return DependenceGraph(self.n, self.kind, adj)

    def induced_on_nodes(self, keep: Iterable[int]) -> "DependenceGraph":
        """Restriction to dyads within a node subset, relabeled to {1..n'}."""
        keep = sorted(keep)
        relab = {v: t + 1 for t, v in enumerate(keep)}
        kept = set(keep)
        old = dyads(self.n)
        new_index = {}
        for k, (i, j) in enumerate(old):
            if i in kept and j in kept:
                from .graphs import dyad_index

                new_index[k] = dyad_index(relab[i], relab[j])
        m2 = num_dyads(len(keep))
        adj = [0] * m2
        for k, nk in new_index.items():
            bits = self.adjacency[k]
            for k2, nk2 in new_index.items():
                if bits >> k2 & 1:
                    adj[nk] |= 1 << nk2
        return DependenceGraph(len(keep), self.kind, tuple(adj))


def dependence_graph_from_edges(
    n: int, kind: str, edges: Iterable
) -> DependenceGraph:
    """Build from dyad pairs, each dyad given as a (i, j) tuple or "i-j" label."""
    from .graphs import dyad_index, parse_dyad_label

    m = num_dyads(n)
    adj = [0] * m
    for d1, d2 in edges:
        k1 = dyad_index(*(parse_dyad_label(d1) if isinstance(d1, str) else d1))
        k2 = dyad_index(*(parse_dyad_label(d2) if isinstance(d2, str) else d2))
        if k1 == k2:
            raise ValueError(f"self-adjacency at dyad {d1}")
        adj[k1] |= 1 << k2
        adj[k2] |= 1 << k1
    return DependenceGraph(n, kind, tuple(adj))


@lru_cache(maxsize=None)
def incidence_graph(n: int, kind: str = UNDIRECTED) -> DependenceGraph:
    """Dyads adjacent iff they share a node (line graph of the complete graph)."""
    if n < 3:
        raise ValueError("incidence graph needs n >= 3")
    ds = dyads(n)
    m = len(ds)
    adj = [0] * m
    for a in range(m):
        for b in range(a + 1, m):
            if set(ds[a]) & set(ds[b]):
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return DependenceGraph(n, kind, tuple(adj))


@lru_cache(maxsize=None)
def kneser_graph(n: int, kind: str = UNDIRECTED) -> DependenceGraph:
    """Dyads adjacent iff disjoint; the complement of the incidence graph."""
    if n < 3:
        raise ValueError("kneser graph needs n >= 3")
    return incidence_graph(n, kind).complement()


def empty_dependence_graph(n: int, kind: str = UNDIRECTED) -> DependenceGraph:
    return DependenceGraph(n, kind, tuple([0] * num_dyads(n)))


def complete_dependence_graph(n: int, kind: str = UNDIRECTED) -> DependenceGraph:
    return empty_dependence_graph(n, kind).complement()


# --- cliques of the incidence graph ------------------------------------------


@dataclass(frozen=True)
class IncidenceClique:
    dyad_indices: tuple
    shape: str  # "triangle" | "star" | "other"
    star_size: int | None = None


def incidence_cliques(n: int) -> list:
    """Every clique (maximal or not) of the incidence graph, classified.

    A clique of pairwise-incident dyads is either a set of dyads through one
    common node (a k-star subnetwork) or three dyads on three nodes (a
    triangle).  Anything else is reported as "other".
    """
    dep = incidence_graph(n, UNDIRECTED)
    m = dep.m
    ds = dep.vertices
    cliques = []
    for mask in range(1, 1 << m):
        members = [k for k in range(m) if mask >> k & 1]
        ok = all(
            dep.adjacency[a] >> b & 1
            for i, a in enumerate(members)
            for b in members[i + 1 :]
        )
        if not ok:
            continue
        common = set(ds[members[0]])
        nodes = set()
        for k in members:
            common &= set(ds[k])
            nodes |= set(ds[k])
        if common:
            shape = IncidenceClique(tuple(members), "star", len(members))
        elif len(members) == 3 and len(nodes) == 3:
            shape = IncidenceClique(tuple(members), "triangle")
        else:
            shape = IncidenceClique(tuple(members), "other")
        cliques.append(shape)
    return cliques


def connected_sets(dep: DependenceGraph) -> list:
    """All non-empty connected vertex subsets, as bitmasks."""
    if dep.m > MAX_CONNECTED_SET_DYADS:
        raise SizeCapError(
            f"connected-set enumeration supports at most "
            f"{MAX_CONNECTED_SET_DYADS} dyads"
        )
    from .mobius import _components_of_mask

    adj = tuple(dep.adjacency)
    out = []
    for mask in range(1, 1 << dep.m):
        comps = _components_of_mask(adj, mask)
        if len(comps) == 1:
            out.append(mask)
    return out


# --- separation --------------------------------------------------------------


def _reachable(adj: tuple, allowed: int, start: int) -> int:
    seen = start & allowed
    frontier = seen
    while frontier:
        grow = 0
        f = frontier
        while f:
            bit = f & -f
            v = bit.bit_length() - 1
            f ^= bit
            grow |= adj[v] & allowed & ~seen
        seen |= grow
        frontier = grow
    return seen


def separates(dep: DependenceGraph, a_mask: int, b_mask: int, s_mask: int) -> bool:
    """Separation of A from B given S under dep's edge kind.

    Undirected: every path from A to B meets S.  Bidirected: every path from
    A to B leaves the union of A, B, and S.
    """
    adj = tuple(dep.adjacency)
    full = (1 << dep.m) - 1
    if dep.kind == UNDIRECTED:
        allowed = full & ~s_mask
    else:
        allowed = a_mask | b_mask | s_mask
    return not (_reachable(adj, allowed, a_mask) & b_mask)


# --- conditional independence on joint tables --------------------------------


def _marginal_over(jt: JointTable, dyad_mask: int) -> dict:
    """Marginal table over a dyad subset: projected mask -> probability."""
    out: dict = {}
    for mask, p in enumerate(jt.probs):
        if not p:
            continue
        key = mask & dyad_mask
        if key in out:
            out[key] = out[key] + p
        else:
            out[key] = p
    return out


def _close(a, b, exact: bool) -> bool:
    if exact:
        return a == b
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) <= CI_REL_TOL * scale


def ci_test(jt: JointTable, a_mask: int, b_mask: int, s_mask: int) -> bool:
    """Does X_A and X_B factorize given X_S, for every positive S config?

    Cross-multiplied form P(abs) P(s) = P(as) P(bs) avoids division; exact in
    rational mode, relative tolerance in float mode.
    """
    if not a_mask or not b_mask:
        raise ValueError("A and B must be non-empty")
    if a_mask & b_mask or a_mask & s_mask or b_mask & s_mask:
        raise ValueError("A, B, S must be pairwise disjoint")
    exact = jt.is_exact
    abs_mask = a_mask | b_mask | s_mask
    joint = _marginal_over(jt, abs_mask)
    p_s: dict = {}
    p_as: dict = {}
    p_bs: dict = {}
    for key, p in joint.items():
        ks = key & s_mask
        kas = key & (a_mask | s_mask)
        kbs = key & (b_mask | s_mask)
        p_s[ks] = p_s.get(ks, 0) + p
        p_as[kas] = p_as.get(kas, 0) + p
        p_bs[kbs] = p_bs.get(kbs, 0) + p
    # every (a, b, s) cell must factorize, including zero cells
    a_bits = [k for k in range(jt.n * (jt.n - 1) // 2) if a_mask >> k & 1]
    b_bits = [k for k in range(jt.n * (jt.n - 1) // 2) if b_mask >> k & 1]
    s_bits = [k for k in range(jt.n * (jt.n - 1) // 2) if s_mask >> k & 1]

    def sub_masks(bits):
        for pick in range(1 << len(bits)):
            mm = 0
            for t, bb in enumerate(bits):
                if pick >> t & 1:
                    mm |= 1 << bb
            yield mm

    for s_val in sub_masks(s_bits):
        ps = p_s.get(s_val, 0)
        if not ps:
            continue
        for a_val in sub_masks(a_bits):
            pas = p_as.get(a_val | s_val, 0)
            for b_val in sub_masks(b_bits):
                pbs = p_bs.get(b_val | s_val, 0)
                pabs = joint.get(a_val | b_val | s_val, 0)
                if not _close(pabs * ps, pas * pbs, exact):
                    return False
    return True


def _triples(m: int):
    """All (A, B, S) disjoint with A, B non-empty, smallest first, A before B."""
    out = []
    for assign in range(4**m):
        a = b = s = 0
        t = assign
        for k in range(m):
            c = t % 4
            t //= 4
            if c == 1:
                a |= 1 << k
            elif c == 2:
                b |= 1 << k
            elif c == 3:
                s |= 1 << k
        if not a or not b:
            continue
        if (a & -a) > (b & -b):
            continue  # unordered pair {A, B}: keep one orientation
        out.append((a, b, s))
    out.sort(
        key=lambda t: (
            bin(t[0]).count("1") + bin(t[1]).count("1") + bin(t[2]).count("1"),
            t[0],
            t[1],
            t[2],
        )
    )
    return out


@dataclass
class MarkovCheckResult:
    holds: bool
    counterexample: tuple | None = None  # (a_mask, b_mask, s_mask)


def global_markov_check(jt: JointTable, dep: DependenceGraph) -> MarkovCheckResult:
    """Verify every separation-implied independence statement against jt."""
    m = num_dyads(jt.n)
    if m > MAX_MARKOV_DYADS:
        raise SizeCapError(
            f"global Markov check supports at most {MAX_MARKOV_DYADS} dyads"
        )
    if dep.n != jt.n:
        raise ValueError("joint and dependence graph node counts differ")
    for a, b, s in _triples(m):
        if separates(dep, a, b, s) and not ci_test(jt, a, b, s):
            return MarkovCheckResult(False, (a, b, s))
    return MarkovCheckResult(True)


def skeleton(jt: JointTable) -> DependenceGraph:
    """Undirected graph with u ~ v unless some conditioning set splits them."""
    m = num_dyads(jt.n)
    if m > MAX_MARKOV_DYADS:
        raise SizeCapError(
            f"skeleton search supports at most {MAX_MARKOV_DYADS} dyads"
        )
    adj = [0] * m
    rest_bits = list(range(m))
    for u in range(m):
        for v in range(u + 1, m):
            others = [k for k in rest_bits if k not in (u, v)]
            found = False
            for pick in range(1 << len(others)):
                s = 0
                for t, k in enumerate(others):
                    if pick >> t & 1:
                        s |= 1 << k
                if ci_test(jt, 1 << u, 1 << v, s):
                    found = True
                    break
            if not found:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return DependenceGraph(jt.n, UNDIRECTED, tuple(adj))


SKELETON_EMPTY = "empty"
SKELETON_INCIDENCE = "incidence"
SKELETON_KNESER = "kneser"
SKELETON_COMPLETE = "complete"
SKELETON_OTHER = "other"


def classify_skeleton(sk: DependenceGraph) -> str:
    """Match against the four reference structures on the same node count."""
    if all(bits == 0 for bits in sk.adjacency):
        return SKELETON_EMPTY
    full = (1 << sk.m) - 1
    if all(sk.adjacency[k] == full & ~(1 << k) for k in range(sk.m)):
        return SKELETON_COMPLETE
    if sk.n >= 3:
        if sk.adjacency == incidence_graph(sk.n).adjacency:
            return SKELETON_INCIDENCE
        if sk.adjacency == kneser_graph(sk.n).adjacency:
            return SKELETON_KNESER
    return SKELETON_OTHER


@dataclass
class DissociatedCheckResult:
    holds: bool
    violating_mask: int | None = None


def dissociated_check(lm: LabeledMobius) -> DissociatedCheckResult:
    """Does z factor over node-connected components for every dyad subset?

    The components of a dyad subset are those of the edge-induced subgraph of
    the complete graph, equivalently the connected parts in the bidirected
    incidence structure.
    """
    n = lm.n
    ds = dyads(n)
    exact = lm.is_exact
    for mask in range(1, 1 << len(ds)):
        net = LabeledNetwork.from_mask(n, mask)
        comps = connected_components(net)
        if len(comps) <= 1:
            continue
        prod = None
        for comp in comps:
            keep = set(comp)
            sub_mask = 0
            for k, (i, j) in enumerate(ds):
                if mask >> k & 1 and i in keep and j in keep:
                    sub_mask |= 1 << k
            prod = lm.z[sub_mask] if prod is None else prod * lm.z[sub_mask]
        if exact:
            if lm.z[mask] != prod:
                return DissociatedCheckResult(False, mask)
        elif abs(lm.z[mask] - prod) > DISSOC_TOL:
            return DissociatedCheckResult(False, mask)
    return DissociatedCheckResult(True)


def masks_from_dyads(n: int, pairs: Iterable) -> int:
    from .graphs import dyad_index

    m = 0
    for i, j in pairs:
        m |= 1 << dyad_index(i, j)
    return m
