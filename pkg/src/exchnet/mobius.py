"""Subset-occurrence parametrization of dyad-array distributions.

A distribution over networks on n nodes is equivalently described by the
joint table P(X = x) over all 2^(n(n-1)/2) configurations, or by the vector
z_B = P(B is a subgraph of X) over dyad subsets B.  The two are related by an
invertible pair of lattice transforms (superset sums and inclusion-exclusion).
Under exchangeability z depends on B only through its isomorphism class, which
collapses the parametrization to one value per unlabeled class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .counting import r_count, sigma, sub_in_complete
from .graphs import (
    LabeledNetwork,
    SizeCapError,
    UnlabeledClass,
    class_size,
    connected_components,
    enumerate_classes,
    num_dyads,
)

MAX_LATTICE_NODES = 6  # full 2^m work stops at m = 15

FLOAT_SUM_TOL = 1e-12
FLOAT_NEG_TOL = 1e-12


class InvalidParametersError(ValueError):
    """A parameter vector implies a negative configuration probability."""

    def __init__(self, message: str, config: int | None = None):
        super().__init__(message)
        self.config = config


def _check_lattice_size(n: int, what: str):
    if n > MAX_LATTICE_NODES:
        raise SizeCapError(
            f"{what} enumerates the full dyad lattice and supports "
            f"n <= {MAX_LATTICE_NODES}, got {n}"
        )


def _is_exact_seq(values) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


@dataclass(frozen=True)
class JointTable:
    """Exact probability table over all labeled networks on n nodes.

    ``probs[mask]`` is P(X = network with that dyad bitmask).  Entries are
    Fractions (exact mode) or floats; the two modes are not mixed.
    """

    n: int
    probs: tuple
    mc_std_error: float | None = None

    def __post_init__(self):
        _check_lattice_size(self.n, "JointTable")
        m = num_dyads(self.n)
        if len(self.probs) != 1 << m:
            raise ValueError(
                f"need {1 << m} entries for n={self.n}, got {len(self.probs)}"
            )
        total = sum(self.probs)
        if self.is_exact:
            if any(p < 0 for p in self.probs):
                raise InvalidParametersError("negative probability entry")
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, not 1")
        else:
            if any(p < -FLOAT_NEG_TOL for p in self.probs):
                raise InvalidParametersError("negative probability entry")
            if abs(total - 1.0) > FLOAT_SUM_TOL:
                raise ValueError(f"probabilities sum to {total}, not 1")

    @property
    def is_exact(self) -> bool:
        return _is_exact_seq(self.probs)

    def prob(self, x: LabeledNetwork):
        return self.probs[x.mask]

    def to_float(self) -> "JointTable":
        return JointTable(self.n, tuple(float(p) for p in self.probs))

    @classmethod
    def from_function(cls, n: int, fn) -> "JointTable":
        _check_lattice_size(n, "JointTable")
        m = num_dyads(n)
        return cls(
            n, tuple(fn(LabeledNetwork.from_mask(n, s)) for s in range(1 << m))
        )


@dataclass(frozen=True)
class LabeledMobius:
    """Subset-occurrence probabilities z_B = P(B subgraph of X), indexed by
    dyad bitmask; z of the empty mask is 1."""

    n: int
    z: tuple

    def __post_init__(self):
        _check_lattice_size(self.n, "LabeledMobius")
        m = num_dyads(self.n)
        if len(self.z) != 1 << m:
            raise ValueError(
                f"need {1 << m} entries for n={self.n}, got {len(self.z)}"
            )
        z0 = self.z[0]
        exact = isinstance(z0, (int, Fraction))
        if (exact and z0 != 1) or (not exact and abs(z0 - 1.0) > FLOAT_SUM_TOL):
            raise ValueError("z of the empty dyad set must be 1")

    @property
    def is_exact(self) -> bool:
        return _is_exact_seq(self.z)

    def value(self, mask: int):
        return self.z[mask]


def _superset_zeta(values: list, m: int) -> list:
    """In place: out[S] = sum over T >= S (supersets) of in[T]."""
    f = list(values)
    for b in range(m):
        bit = 1 << b
        for s in range(1 << m):
            if not s & bit:
                f[s] = f[s] + f[s | bit]
    return f


def _superset_mobius(values: list, m: int) -> list:
    """Inverse of :func:`_superset_zeta`."""
    f = list(values)
    for b in range(m):
        bit = 1 << b
        for s in range(1 << m):
            if not s & bit:
                f[s] = f[s] - f[s | bit]
    return f


def labeled_mobius_from_joint(jt: JointTable) -> LabeledMobius:
    """z_B = P(B subgraph of X) = sum of P over supersets of B."""
    m = num_dyads(jt.n)
    z = _superset_zeta(list(jt.probs), m)
    # the empty-set entry is the total mass; snap float rounding to exactly 1
    if not isinstance(z[0], (int, Fraction)) and abs(z[0] - 1.0) <= FLOAT_SUM_TOL:
        z[0] = 1.0
    return LabeledMobius(jt.n, tuple(z))


def joint_from_labeled_mobius(lm: LabeledMobius) -> JointTable:
    """Invert by inclusion-exclusion; raise if any configuration goes negative."""
    m = num_dyads(lm.n)
    probs = _superset_mobius(list(lm.z), m)
    exact = lm.is_exact
    cleaned = []
    for mask, p in enumerate(probs):
        if exact:
            if p < 0:
                raise InvalidParametersError(
                    f"configuration {mask:b} has probability {p}", config=mask
                )
        else:
            if p < -FLOAT_NEG_TOL:
                raise InvalidParametersError(
                    f"configuration {mask:b} has probability {p}", config=mask
                )
            p = max(p, 0.0)
        cleaned.append(p)
    return JointTable(lm.n, tuple(cleaned))


@dataclass(frozen=True)
class MobiusVector:
    """Class-indexed subset-occurrence probabilities of an exchangeable
    distribution: one z value per unlabeled class, z of the empty class 1."""

    n: int
    z: Mapping

    def __post_init__(self):
        classes = set(enumerate_classes(self.n, True))
        missing = classes - set(self.z)
        extra = set(self.z) - classes
        if missing or extra:
            raise ValueError(
                f"class set mismatch at n={self.n}: "
                f"missing={sorted(c.key() for c in missing)[:3]} "
                f"extra={sorted(c.key() for c in extra)[:3]}"
            )
        z0 = self.z[UnlabeledClass.empty()]
        exact = isinstance(z0, (int, Fraction))
        if (exact and z0 != 1) or (not exact and abs(z0 - 1.0) > FLOAT_SUM_TOL):
            raise ValueError("z of the empty class must be 1")

    @classmethod
    def from_values(cls, n: int, values: Mapping, fill=None) -> "MobiusVector":
        """Build from a partial mapping; missing classes get ``fill`` if given."""
        z = dict(values)
        empty = UnlabeledClass.empty()
        if empty not in z:
            z[empty] = 1.0 if isinstance(fill, float) else Fraction(1)
        if fill is not None:
            for c in enumerate_classes(n, True):
                z.setdefault(c, fill)
        return cls(n, z)

    @property
    def is_exact(self) -> bool:
        return _is_exact_seq(self.z.values())

    def value(self, u: UnlabeledClass):
        return self.z[u]

    def in_order(self) -> list:
        return [(u, self.z[u]) for u in enumerate_classes(self.n, True)]

    def to_float(self) -> "MobiusVector":
        return MobiusVector(self.n, {u: float(v) for u, v in self.z.items()})

    def restrict(self, n2: int) -> "MobiusVector":
        if n2 > self.n:
            raise ValueError("can only restrict to fewer nodes")
        keep = {
            u: v for u, v in self.z.items() if u.n_vertices <= n2
        }
        return MobiusVector(n2, keep)


def labeled_from_exchangeable(mv: MobiusVector) -> LabeledMobius:
    """Expand class-indexed z to the full dyad lattice (n small)."""
    _check_lattice_size(mv.n, "labeled_from_exchangeable")
    m = num_dyads(mv.n)
    z = []
    for mask in range(1 << m):
        u = UnlabeledClass.of(LabeledNetwork.from_mask(mv.n, mask))
        z.append(mv.z[u])
    return LabeledMobius(mv.n, tuple(z))


def exchangeable_from_labeled(lm: LabeledMobius) -> MobiusVector:
    z = {}
    m = num_dyads(lm.n)
    for mask in range(1 << m):
        u = UnlabeledClass.of(LabeledNetwork.from_mask(lm.n, mask))
        z.setdefault(u, lm.z[mask])
    return MobiusVector(lm.n, z)


def exch_joint_from_mobius(mv: MobiusVector, x: LabeledNetwork):
    """P(X = x) for the exchangeable distribution with class moments mv.

    Inclusion-exclusion over classes: the sign alternates with the edge-count
    gap and each class is weighted by the number of its labeled members that
    contain x.
    """
    if x.n != mv.n:
        raise ValueError(f"network on {x.n} nodes, moments for n={mv.n}")
    ex = x.edge_count
    total = None
    for u in enumerate_classes(mv.n, True):
        eu = u.edge_count
        if eu < ex:
            continue
        r = r_count(u, x)
        if r == 0:
            continue
        term = mv.z[u] * r
        if (eu - ex) % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        total = Fraction(0) if mv.is_exact else 0.0
    if isinstance(total, (Fraction, int)):
        if total < 0:
            raise InvalidParametersError(
                f"P({x}) = {total} < 0", config=x.mask
            )
    elif total < -1e-9:
        raise InvalidParametersError(f"P({x}) = {total} < 0", config=x.mask)
    return total


def mobius_from_class_distribution(cd) -> MobiusVector:
    """Class moments of a distribution given per-class probabilities.

    z_U = E[sigma_U(X)] / sub(U, K_n); the expectation is a single sigma value
    per class because sigma is isomorphism-invariant.
    """
    n = cd.n
    z = {}
    for u in enumerate_classes(n, True):
        if u.is_empty:
            z[u] = Fraction(1) if cd.is_exact else 1.0
            continue
        acc = None
        for w, q in cd.q.items():
            if not q:
                continue
            s = sigma(u, w.padded(n))
            if s:
                acc = q * s if acc is None else acc + q * s
        if acc is None:
            acc = Fraction(0) if cd.is_exact else 0.0
        denom = sub_in_complete(u, n)
        z[u] = Fraction(acc, denom) if isinstance(acc, (int, Fraction)) else acc / denom
    return MobiusVector(n, z)


# --- bidirected factorized evaluation ---------------------------------------


@lru_cache(maxsize=200000)
def _components_of_mask(adj: tuple, mask: int) -> tuple:
    """Inclusion-maximal connected subsets of ``mask`` under adjacency ``adj``."""
    comps = []
    rem = mask
    while rem:
        seed = rem & -rem
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            f = frontier
            while f:
                bit = f & -f
                v = bit.bit_length() - 1
                f ^= bit
                grow |= adj[v] & mask & ~comp
            comp |= grow
            frontier = grow
        comps.append(comp)
        rem &= ~comp
    return tuple(comps)


def bidirected_joint(dep, z_conn: Mapping, h_mask: int):
    """P(X_H = 1, rest = 0) under a bidirected dependence structure.

    ``z_conn`` maps each connected dyad-subset mask of ``dep`` to its z value;
    disconnected subsets factor into products over their maximal connected
    parts.  Inclusion-exclusion runs over all supersets of H.
    """
    if dep.kind != "bidirected":
        raise ValueError("factorized evaluation needs a bidirected structure")
    m = dep.m
    adj = tuple(dep.adjacency)
    rest_bits = [b for b in range(m) if not h_mask >> b & 1]
    total = None
    for extra in range(1 << len(rest_bits)):
        b_mask = h_mask
        nbits = 0
        for t, b in enumerate(rest_bits):
            if extra >> t & 1:
                b_mask |= 1 << b
                nbits += 1
        prod = None
        for comp in _components_of_mask(adj, b_mask):
            zc = z_conn[comp] if comp in z_conn else z_conn[frozenset_of(comp)]
            prod = zc if prod is None else prod * zc
        if prod is None:
            prod = 1
        term = -prod if nbits % 2 else prod
        total = term if total is None else total + term
    if total is None:
        total = 1
    if isinstance(total, (Fraction, int)):
        if total < 0:
            raise InvalidParametersError(
                f"configuration {h_mask:b} has probability {total}",
                config=h_mask,
            )
    elif total < -1e-9:
        raise InvalidParametersError(
            f"configuration {h_mask:b} has probability {total}", config=h_mask
        )
    return total


def frozenset_of(mask: int) -> frozenset:
    out = set()
    while mask:
        bit = mask & -mask
        out.add(bit.bit_length() - 1)
        mask ^= bit
    return frozenset(out)


def mask_of(indices) -> int:
    m = 0
    for k in indices:
        m |= 1 << k
    return m


def bidirected_joint_table(dep, z_conn: Mapping) -> JointTable:
    """Full joint table induced by a bidirected dependence structure."""
    probs = [bidirected_joint(dep, z_conn, h) for h in range(1 << dep.m)]
    return JointTable(dep.n, tuple(probs))


# --- validation --------------------------------------------------------------


@dataclass
class MobiusValidation:
    ok: bool
    violations: list = field(default_factory=list)

    def first(self):
        return self.violations[0] if self.violations else None


def validate_mobius(mv: MobiusVector) -> MobiusValidation:
    """Check z feasibility at mv's own node count.

    Verifies the unit empty-class value, the [0,1] range, and nonnegativity
    of every implied configuration probability (one representative per class
    suffices, by exchangeability).  Returns a report instead of raising.
    """
    report = MobiusValidation(ok=True)
    empty = UnlabeledClass.empty()
    if mv.z[empty] != 1:
        report.ok = False
        report.violations.append(("empty_class", "z of the empty class is not 1"))
    exact = mv.is_exact
    for u, v in mv.in_order():
        if exact:
            bad = v < 0 or v > 1
        else:
            bad = v < -1e-9 or v > 1 + 1e-9
        if bad:
            report.ok = False
            report.violations.append(("range", f"z[{u.key()}] = {v} outside [0,1]"))
    if not report.ok:
        return report
    _check_lattice_size(mv.n, "validate_mobius")
    total = None
    for u in enumerate_classes(mv.n, True):
        x = u.padded(mv.n)
        try:
            p = exch_joint_from_mobius(mv, x)
        except InvalidParametersError as err:
            report.ok = False
            report.violations.append(("negative_config", str(err)))
            continue
        w = class_size(u, mv.n)
        contrib = p * w
        total = contrib if total is None else total + contrib
    if report.ok and total is not None:
        drift = total - 1
        tol = 0 if exact else 1e-9
        if drift < -tol or drift > tol:
            report.ok = False
            report.violations.append(
                ("normalization", f"implied probabilities sum to {total}")
            )
    return report


def dissociated_product_value(mv: MobiusVector, u: UnlabeledClass):
    """Product of z over the connected components of a class representative."""
    from .graphs import component_classes

    if u.is_empty:
        return mv.z[UnlabeledClass.empty()]
    prod = None
    for c in component_classes(u):
        prod = mv.z[c] if prod is None else prod * mv.z[c]
    return prod
