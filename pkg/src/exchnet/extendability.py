"""Marginalization operators and extendability feasibility checks.

An exchangeable distribution on n nodes extends to m > n nodes iff some
class distribution on m nodes reproduces all of its class moments.  That is
a linear feasibility problem over the m-node class simplex, solved exactly
by rational pivoting when the input moments are rational.  The dissociated
variant adds product constraints on the extension and is handled by
restarted constrained optimization (no longer a linear program); its
negative verdicts are best-effort, positive certificates are validated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .counting import sigma, sub_in_complete
from .estimation import ClassDistribution
from .graphs import (
    LabeledNetwork,
    SizeCapError,
    component_classes,
    enumerate_classes,
    is_connected_class,
    num_dyads,
)
from .lp import solve_feasibility
from .mobius import JointTable, MobiusVector
from .optimize import (
    LinearConstraint,
    ProductConstraint,
    dirichlet_starts,
    minimize_violation_on_simplex,
)

MAX_EXTEND_NODES = 7


def marginalize_joint(jt: JointTable, keep) -> JointTable:
    """Distribution of the subnetwork induced by ``keep`` (relabeled 1..n')."""
    keep = sorted(keep)
    if not keep:
        raise ValueError("keep must be non-empty")
    n2 = len(keep)
    acc: dict = {}
    for mask in range(len(jt.probs)):
        p = jt.probs[mask]
        if not p:
            continue
        sub = LabeledNetwork.from_mask(jt.n, mask).induced(keep).mask
        acc[sub] = acc.get(sub, 0) + p
    zero = Fraction(0) if jt.is_exact else 0.0
    probs = [acc.get(s, zero) for s in range(1 << num_dyads(n2))]
    return JointTable(n2, tuple(probs))


def marginalize_mobius(mv: MobiusVector, n2: int) -> MobiusVector:
    """Moments restrict without change: drop classes needing more vertices."""
    return mv.restrict(n2)


@dataclass
class ExtendabilityReport:
    feasible: bool
    m: int
    certificate: ClassDistribution | None
    infeasibility_margin: object | None  # total violation when infeasible
    worst_constraint: str | None = None
    method: str = "lp"

    def summary(self) -> str:
        if self.feasible:
            return f"feasible at m={self.m} ({self.method})"
        return (
            f"infeasible at m={self.m} ({self.method}), "
            f"margin {self.infeasibility_margin}, worst {self.worst_constraint}"
        )


@lru_cache(maxsize=64)
def _sigma_rows(m: int, n: int) -> tuple:
    """For each non-empty class U at n: the row of sigma_U over classes at m,
    scaled so that row . q = z_U for a class distribution q."""
    classes_m = enumerate_classes(m, True)
    targets = [u for u in enumerate_classes(n, True) if not u.is_empty]
    rows = []
    for u in targets:
        denom = sub_in_complete(u, m)
        row = tuple(
            Fraction(sigma(u, w.padded(m)), denom) for w in classes_m
        )
        rows.append(row)
    return tuple(targets), tuple(classes_m), tuple(rows)


def _certificate_valid(
    mv: MobiusVector, cert: ClassDistribution, tol: float
) -> bool:
    targets, classes_m, rows = _sigma_rows(cert.n, mv.n)
    qv = [cert.value(w) for w in classes_m]
    for u, row in zip(targets, rows):
        got = sum(r * q for r, q in zip(row, qv) if q)
        want = mv.z[u]
        if isinstance(got, Fraction) and isinstance(want, (int, Fraction)):
            if got != want:
                return False
        elif abs(float(got) - float(want)) > tol:
            return False
    return True


def extendable_check(mv: MobiusVector, m: int) -> ExtendabilityReport:
    """Can mv arise as the margin of an exchangeable distribution on m nodes?

    Feasibility over the m-node class simplex: q >= 0, sums to one, and all
    class moments up to n match.  Exact rational pivoting when mv is exact.
    """
    n = mv.n
    if not (n <= m <= MAX_EXTEND_NODES):
        raise SizeCapError(
            f"extendability supports n <= m <= {MAX_EXTEND_NODES}"
        )
    targets, classes_m, rows = _sigma_rows(m, n)
    exact = mv.is_exact
    a_rows = [list(row) for row in rows]
    b = [mv.z[u] for u in targets]
    a_rows.append([Fraction(1)] * len(classes_m))  # normalization
    b.append(Fraction(1) if exact else 1.0)
    if not exact:
        a_rows = [[float(v) for v in row] for row in a_rows]
        b = [float(v) for v in b]
    res = solve_feasibility(a_rows, b, exact=exact)
    if res.feasible:
        q = {w: v for w, v in zip(classes_m, res.x) if v}
        cert = ClassDistribution(m, q)
        assert _certificate_valid(mv, cert, 1e-9), "certificate failed to round-trip"
        return ExtendabilityReport(True, m, cert, None)
    worst = None
    if res.worst_row is not None and res.worst_row < len(targets):
        worst = targets[res.worst_row].key()
    elif res.worst_row is not None:
        worst = "normalization"
    return ExtendabilityReport(False, m, None, res.residual, worst)


def dissociated_extendable_check(
    mv: MobiusVector,
    m: int,
    *,
    restarts: int = 8,
    seed: int = 7,
    tol: float = 1e-7,
) -> ExtendabilityReport:
    """Extendability with product constraints imposed on the extension.

    Tries the independent-ties candidate first (it certifies exactly when it
    fits); otherwise minimizes the total squared violation of the moment and
    product constraints over the m-node class simplex from several starts.
    A feasible verdict is backed by a validated certificate; an infeasible
    verdict is the best violation found, not a proof.
    """
    n = mv.n
    if not (n <= m <= MAX_EXTEND_NODES):
        raise SizeCapError(
            f"extendability supports n <= m <= {MAX_EXTEND_NODES}"
        )
    from .counting import edge_class
    from .genmodels import er_class_distribution

    # shortcut: independent ties at the observed edge moment
    p = mv.z[edge_class()]
    if 0 <= p <= 1:
        cand = er_class_distribution(m, p)
        if _certificate_valid(mv, cand, 1e-12):
            return ExtendabilityReport(True, m, cand, None, method="er-candidate")

    targets, classes_m, rows = _sigma_rows(m, n)
    a = np.array([[float(v) for v in row] for row in rows])
    idx = {w: k for k, w in enumerate(classes_m)}
    cons = [
        LinearConstraint(a[i], float(mv.z[u])) for i, u in enumerate(targets)
    ]
    # product constraints for every disconnected class at m
    full_targets = [w for w in classes_m if not w.is_empty]
    denom_cache = {}

    def row_of(u):
        if u not in denom_cache:
            denom = sub_in_complete(u, m)
            denom_cache[u] = np.array(
                [sigma(u, w.padded(m)) / denom for w in classes_m]
            )
        return denom_cache[u]

    for w in full_targets:
        if is_connected_class(w):
            continue
        comps = component_classes(w)
        cons.append(ProductConstraint(row_of(w), [row_of(c) for c in comps]))

    rng = np.random.default_rng(seed)
    dim = len(classes_m)
    starts = [np.full(dim, 1.0 / dim)]
    er_q = np.array([float(er_class_distribution(m, float(p)).value(w)) for w in classes_m]) if 0 <= p <= 1 else None
    if er_q is not None:
        starts.append(er_q)
    starts.extend(dirichlet_starts(rng, dim, restarts))
    best = None
    for q0 in starts:
        res = minimize_violation_on_simplex(cons, q0)
        if best is None or res.max_violation < best.max_violation:
            best = res
        if best.max_violation < tol / 10:
            break
    if best.max_violation <= tol:
        q = {w: float(best.q[idx[w]]) for w in classes_m}
        total = sum(q.values())
        q = {w: v / total for w, v in q.items() if v > 0}
        cert = ClassDistribution(m, q)
        if _certificate_valid(mv, cert, max(tol, 1e-7)):
            return ExtendabilityReport(
                True, m, cert, None, method="optimizer"
            )
    worst_i = None
    worst_v = -1.0
    for i, c in enumerate(cons):
        v = abs(c.value(best.q))
        if v > worst_v:
            worst_v = v
            worst_i = i
    worst = (
        targets[worst_i].key()
        if worst_i is not None and worst_i < len(targets)
        else "product-constraint"
    )
    return ExtendabilityReport(
        False, m, None, best.max_violation, worst, method="optimizer"
    )
