"""Maximum-likelihood estimation for exchangeable network models.

Covers the unconstrained exchangeable MLE (subgraph densities), the
dissociated MLE (likelihood maximization over per-class probabilities under
product constraints on disconnected classes), small exponential-family fits
for several statistic families, and degree-distribution diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .counting import (
    matching_class,
    r_count,
    sigma,
    star_class,
    sub_in_complete,
    t_inj,
    triangle_class,
    two_disjoint_edges_class,
)
from .graphs import (
    LabeledNetwork,
    SizeCapError,
    UnlabeledClass,
    class_size,
    component_classes,
    degree_distribution,
    enumerate_classes,
    is_connected_class,
)
from .mobius import JointTable, MobiusVector
from .optimize import (
    ProductConstraint,
    dirichlet_starts,
    maximize_on_simplex,
    project_to_simplex,
)

MAX_FIT_NODES = 6

STATUS_OPTIMAL = "optimal"
STATUS_BOUNDARY = "boundary"
STATUS_NON_UNIQUE = "non_unique"
STATUS_FAILED = "failed"

FAMILIES = (
    "full_exchangeable",
    "frank_strauss",
    "se_star",
    "kneser",
    "sem",
    "edges",
)


@dataclass(frozen=True)
class ClassDistribution:
    """Exchangeable distribution in compressed form: probability per class.

    The implied labeled distribution is uniform within each class, so the
    probability of a particular network x is q[class of x] / |class|.
    """

    n: int
    q: Mapping

    def __post_init__(self):
        classes = set(enumerate_classes(self.n, True))
        extra = set(self.q) - classes
        if extra:
            raise ValueError(f"unknown classes for n={self.n}: {sorted(c.key() for c in extra)[:3]}")
        total = sum(self.q.values())
        if self.is_exact:
            if any(v < 0 for v in self.q.values()):
                raise ValueError("negative class probability")
            if total != 1:
                raise ValueError(f"class probabilities sum to {total}")
        else:
            if any(v < -1e-12 for v in self.q.values()):
                raise ValueError("negative class probability")
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"class probabilities sum to {total}")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, (Fraction, int)) for v in self.q.values())

    @classmethod
    def point_mass(cls, u: UnlabeledClass, n: int) -> "ClassDistribution":
        return cls(n, {u: Fraction(1)})

    @classmethod
    def from_weights(cls, n: int, weights: Mapping) -> "ClassDistribution":
        total = sum(weights.values())
        q = {}
        for u, w in weights.items():
            if not w:
                continue
            if isinstance(w, (int, Fraction)) and isinstance(total, (int, Fraction)):
                q[u] = Fraction(w) / Fraction(total)
            else:
                q[u] = w / total
        return cls(n, q)

    def value(self, u: UnlabeledClass):
        zero = Fraction(0) if self.is_exact else 0.0
        return self.q.get(u, zero)

    def labeled_prob(self, x: LabeledNetwork):
        u = UnlabeledClass.of(x)
        return self.value(u) / class_size(u, self.n)

    def in_order(self) -> list:
        return [(u, self.value(u)) for u in enumerate_classes(self.n, True)]

    def to_joint(self) -> JointTable:
        from .graphs import num_dyads

        if self.n > MAX_FIT_NODES:
            raise SizeCapError("joint expansion supports n <= 6")
        probs = []
        for mask in range(1 << num_dyads(self.n)):
            probs.append(self.labeled_prob(LabeledNetwork.from_mask(self.n, mask)))
        return JointTable(self.n, tuple(probs))

    def to_float(self) -> "ClassDistribution":
        return ClassDistribution(self.n, {u: float(v) for u, v in self.q.items()})

    def mix(self, other: "ClassDistribution", w_self) -> "ClassDistribution":
        if other.n != self.n:
            raise ValueError("node counts differ")
        q = {}
        for u in set(self.q) | set(other.q):
            q[u] = w_self * self.value(u) + (1 - w_self) * other.value(u)
        return ClassDistribution(self.n, q)


@dataclass(frozen=True)
class CanonicalParams:
    """Canonical parameters of the full exchangeable family.

    One real weight per non-empty class; labeled dyad-subset weights are
    carried implicitly, each equal to its class weight.  The log-partition
    value is derived by full class enumeration and is always finite.
    """

    n: int
    nu: Mapping  # class -> real, non-empty classes only

    def __post_init__(self):
        classes = set(enumerate_classes(self.n, False))
        extra = set(self.nu) - classes
        if extra:
            raise ValueError(
                f"unknown classes: {sorted(c.key() for c in extra)[:3]}"
            )

    def nu_by_key(self) -> dict:
        return {u.key(): float(v) for u, v in self.nu.items()}

    @property
    def psi(self) -> float:
        """Log of the normalizing sum over all labeled networks."""
        spec = ErgmSpec("full_exchangeable", self.n)
        classes, stats, sizes = _class_stat_table(spec)
        vec = _nu_vector(spec, self.nu_by_key())
        return _log_partition(stats, sizes, vec)

    def probability(self, x: LabeledNetwork) -> float:
        return ergm_eval(
            ErgmSpec("full_exchangeable", self.n), self.nu_by_key(), x
        )


@dataclass
class FitReport:
    """Outcome of a likelihood fit."""

    family: str
    status: str
    log_likelihood: float
    z: MobiusVector | None = None
    q: ClassDistribution | None = None
    nu: dict | None = None
    constraint_residual: float = 0.0
    iterations: int = 0
    restarts_used: int = 0
    alternates: list = field(default_factory=list)

    @property
    def likelihood(self) -> float:
        return math.exp(self.log_likelihood)


def exch_mle(x: LabeledNetwork) -> MobiusVector:
    """Exchangeable MLE of the class moments: the observed subgraph densities."""
    z = {}
    for u in enumerate_classes(x.n, True):
        if u.is_empty:
            z[u] = Fraction(1)
        else:
            z[u] = t_inj(u.representative(), x)
    return MobiusVector(x.n, z)


def exch_mle_distribution(x: LabeledNetwork) -> ClassDistribution:
    """The fitted exchangeable distribution: all mass on the observed class."""
    return ClassDistribution.point_mass(UnlabeledClass.of(x), x.n)


# --- dissociated MLE ----------------------------------------------------------


def _moment_matrix(n: int) -> tuple:
    """Rows: classes; columns: classes; entry = sigma_U(W) / sub(U, K_n)."""
    classes = enumerate_classes(n, True)
    rows = []
    for u in classes:
        denom = sub_in_complete(u, n)
        row = np.array(
            [sigma(u, w.padded(n)) / denom for w in classes], dtype=float
        )
        rows.append(row)
    return classes, np.vstack(rows)


def _dissociated_constraints(n: int, classes, a_matrix) -> list:
    idx = {u: k for k, u in enumerate(classes)}
    cons = []
    for u in classes:
        if u.is_empty or is_connected_class(u):
            continue
        comps = component_classes(u)
        cons.append(
            ProductConstraint(
                a_matrix[idx[u]], [a_matrix[idx[c]] for c in comps]
            )
        )
    return cons


def dissociated_mle(
    x: LabeledNetwork,
    *,
    restarts: int = 32,
    seed: int = 20240,
    feas_tol: float = 1e-8,
    kkt_tol: float = 1e-6,
    lik_tie_tol: float = 1e-7,
    distinct_tol: float = 1e-4,
    probe_flat: bool | None = None,
) -> FitReport:
    """Maximize P(X = x) over exchangeable dissociated distributions.

    Optimizes per-class probabilities (so nonnegativity and normalization are
    structural) under product constraints for every disconnected class, via an
    augmented Lagrangian with projected-gradient inner steps and multi-start.

    A flat optimum is common here: after the best likelihood is found, each
    coordinate is re-maximized subject to optimality, which maps out the
    optimal set.  Maximizers tied within ``lik_tie_tol`` whose q vectors
    differ by more than ``distinct_tol`` trigger a non-unique status; the
    reported representative is the lexicographically largest q in class order
    among the candidates found.
    """
    n = x.n
    if n > MAX_FIT_NODES:
        raise SizeCapError(f"dissociated MLE supports n <= {MAX_FIT_NODES}")
    classes, a_matrix = _moment_matrix(n)
    idx = {u: k for k, u in enumerate(classes)}
    x_cls = UnlabeledClass.of(x)
    x_idx = idx[x_cls]
    cons = _dissociated_constraints(n, classes, a_matrix)
    dim = len(classes)
    c_lin = np.zeros(dim)
    c_lin[x_idx] = 1.0
    obj_tie_tol = lik_tie_tol * class_size(x_cls, n)

    rng = np.random.default_rng(seed)
    starts = []
    point = np.zeros(dim)
    point[x_idx] = 1.0
    starts.append(point)
    starts.append(np.full(dim, 1.0 / dim))
    starts.extend(dirichlet_starts(rng, dim, restarts))

    runs = []
    for q0 in starts:
        res = maximize_on_simplex(c_lin, cons, q0)
        runs.append(res)

    feasible = [r for r in runs if r.max_violation <= feas_tol]
    usable = [r for r in feasible if r.kkt_residual <= kkt_tol]
    if not usable:
        best = min(runs, key=lambda r: (r.max_violation, -r.objective))
        return FitReport(
            family="dissociated",
            status=STATUS_FAILED,
            log_likelihood=float("-inf"),
            constraint_residual=best.max_violation,
            iterations=best.outer_iters,
            restarts_used=len(starts),
        )

    best_obj = max(r.objective for r in usable)
    near = [r for r in usable if r.objective >= best_obj - obj_tie_tol]
    candidates = [(r.q, r.max_violation, r.outer_iters) for r in near]

    if probe_flat is None:
        probe_flat = dim <= 40
    if probe_flat:
        from .optimize import LinearConstraint

        probe_cons = cons + [LinearConstraint(c_lin, best_obj)]
        warm = near[0].q
        for k in range(dim):
            if k == x_idx:
                continue
            ck = np.zeros(dim)
            ck[k] = 1.0
            # light budget: probes only need to locate distinct maximizers
            pres = maximize_on_simplex(
                ck, probe_cons, warm, max_outer=14, inner_iters=700
            )
            if (
                pres.max_violation <= feas_tol
                and float(c_lin @ pres.q) >= best_obj - obj_tie_tol
            ):
                candidates.append(
                    (pres.q, pres.max_violation, pres.outer_iters)
                )

    distinct: list = []
    for q_arr, _, _ in candidates:
        if all(
            float(np.max(np.abs(q_arr - d))) > distinct_tol for d in distinct
        ):
            distinct.append(q_arr)
    status = STATUS_NON_UNIQUE if len(distinct) > 1 else STATUS_OPTIMAL
    # canonical representative: lexicographically largest q in class order
    chosen_q, chosen_viol, chosen_iters = max(
        candidates, key=lambda c: tuple(c[0])
    )

    q_arr = project_to_simplex(chosen_q)
    q_arr = q_arr / q_arr.sum()
    q_map = {u: float(q_arr[idx[u]]) for u in classes}
    cd = ClassDistribution(n, q_map)
    z_map = {u: float(a_matrix[idx[u]] @ q_arr) for u in classes}
    z_map[UnlabeledClass.empty()] = 1.0
    mv = MobiusVector(n, z_map)
    lik = q_arr[x_idx] / class_size(x_cls, n)
    alternates = [
        {u: float(qa[idx[u]]) for u in classes} for qa in distinct[:8]
    ]
    return FitReport(
        family="dissociated",
        status=status,
        log_likelihood=float(np.log(lik)) if lik > 0 else float("-inf"),
        z=mv,
        q=cd,
        constraint_residual=chosen_viol,
        iterations=chosen_iters,
        restarts_used=len(starts),
        alternates=alternates,
    )


# --- exponential-family statistics and fitting --------------------------------


@dataclass(frozen=True)
class ErgmSpec:
    """A named statistic family at a fixed node count."""

    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def stat_names(self) -> list:
        n = self.n
        if self.family == "edges":
            return ["star1"]
        if self.family == "frank_strauss":
            return [f"star{k}" for k in range(1, n)] + ["triangle"]
        if self.family == "se_star":
            return [f"star{k}" for k in range(1, n)] + ["two_disjoint_edges"]
        if self.family == "kneser":
            return [f"matching{k}" for k in range(1, n // 2 + 1)]
        if self.family == "sem":
            return [f"deg{j}" for j in range(1, n)]
        # full_exchangeable
        return [u.key() for u in enumerate_classes(n, False)]

    def stat_classes(self) -> list | None:
        """Classes whose sigma counts are the statistics; None for sem."""
        n = self.n
        if self.family == "edges":
            return [star_class(1)]
        if self.family == "frank_strauss":
            return [star_class(k) for k in range(1, n)] + [triangle_class()]
        if self.family == "se_star":
            return [star_class(k) for k in range(1, n)] + [
                two_disjoint_edges_class()
            ]
        if self.family == "kneser":
            return [matching_class(k) for k in range(1, n // 2 + 1)]
        if self.family == "full_exchangeable":
            return enumerate_classes(n, False)
        return None


def ergm_stats(spec: ErgmSpec, x: LabeledNetwork) -> tuple:
    """Exact integer statistic vector for the family."""
    if x.n != spec.n:
        raise ValueError(f"network on {x.n} nodes, family at n={spec.n}")
    if spec.family == "sem":
        dd = degree_distribution(x)
        return tuple(dd.counts[1:])
    return tuple(sigma(u, x) for u in spec.stat_classes())


def _nu_vector(spec: ErgmSpec, nu) -> np.ndarray:
    names = spec.stat_names()
    if isinstance(nu, Mapping):
        unknown = set(nu) - set(names)
        if unknown:
            raise ValueError(f"unknown statistic names: {sorted(unknown)}")
        return np.array([float(nu.get(name, 0.0)) for name in names])
    arr = np.asarray(list(nu), dtype=float)
    if arr.size != len(names):
        raise ValueError(f"need {len(names)} values, got {arr.size}")
    return arr


def _class_stat_table(spec: ErgmSpec) -> tuple:
    classes = enumerate_classes(spec.n, True)
    stats = np.array(
        [ergm_stats(spec, u.padded(spec.n)) for u in classes], dtype=float
    )
    sizes = np.array([class_size(u, spec.n) for u in classes], dtype=float)
    return classes, stats, sizes


def _log_partition(stats, sizes, nu):
    expo = stats @ nu + np.log(sizes)
    shift = float(np.max(expo))
    return shift + math.log(float(np.sum(np.exp(expo - shift))))


def ergm_eval(spec: ErgmSpec, nu, x: LabeledNetwork) -> float:
    """Normalized probability of x under the family with parameters nu."""
    if spec.n > MAX_FIT_NODES:
        raise SizeCapError(f"ergm evaluation supports n <= {MAX_FIT_NODES}")
    vec = _nu_vector(spec, nu)
    _, stats, sizes = _class_stat_table(spec)
    psi = _log_partition(stats, sizes, vec)
    s_x = np.array(ergm_stats(spec, x), dtype=float)
    return math.exp(float(s_x @ vec) - psi)


def ergm_fitted_distribution(spec: ErgmSpec, nu) -> ClassDistribution:
    vec = _nu_vector(spec, nu)
    classes, stats, sizes = _class_stat_table(spec)
    expo = stats @ vec + np.log(sizes)
    shift = float(np.max(expo))
    w = np.exp(expo - shift)
    w /= w.sum()
    return ClassDistribution(spec.n, {u: float(p) for u, p in zip(classes, w)})


def ergm_fit(
    spec: ErgmSpec,
    x: LabeledNetwork,
    *,
    tol: float = 1e-10,
    max_iter: int = 200,
    boundary_norm: float = 1e3,
) -> FitReport:
    """Newton iteration on the exact mean-value map.

    Matches observed statistics to their expectation over the full class
    enumeration.  Divergence of the parameter norm past ``boundary_norm``
    while the moment gap keeps shrinking signals that the observed statistics
    sit on the boundary of their convex support, so no finite MLE exists;
    status "boundary" is reported.
    """
    if spec.n > MAX_FIT_NODES:
        raise SizeCapError(f"ergm fitting supports n <= {MAX_FIT_NODES}")
    classes, stats, sizes = _class_stat_table(spec)
    target = np.array(ergm_stats(spec, x), dtype=float)
    dim = stats.shape[1]
    nu = np.zeros(dim)

    def moments(nu_vec):
        expo = stats @ nu_vec + np.log(sizes)
        shift = float(np.max(expo))
        w = np.exp(expo - shift)
        w /= w.sum()
        mean = stats.T @ w
        centered = stats - mean
        cov = (centered * w[:, None]).T @ centered
        return w, mean, cov

    def is_separating(direction) -> bool:
        """A direction certifies MLE nonexistence when it supports the
        observed statistics: no class scores higher, some class scores
        strictly lower.  Verified against every class, so a positive answer
        cannot be a numerical artifact."""
        norm = float(np.max(np.abs(direction)))
        if norm < 1e-6:
            return False
        gaps = (stats - target) @ (direction / norm)
        return float(np.max(gaps)) <= 1e-7 and float(np.min(gaps)) < -1e-4

    def boundary_detected(nu_vec, snapshot) -> bool:
        # candidates for the diverging direction: the iterate itself and its
        # movement since the moment gap first collapsed (which cancels the
        # finite, face-tangential part)
        if is_separating(nu_vec):
            return True
        return snapshot is not None and is_separating(nu_vec - snapshot)

    status = STATUS_FAILED
    iters = 0
    resid = np.inf
    step_norm = np.inf
    nu_snapshot = None
    for it in range(max_iter):
        iters = it + 1
        _, mean, cov = moments(nu)
        r = target - mean
        resid = float(np.max(np.abs(r)))
        if nu_snapshot is None and resid < 1e-8:
            nu_snapshot = nu.copy()
        # interior optima stop with a matched moment and a collapsed step;
        # at the boundary the residual underflows while the parameter keeps
        # marching along a separating direction
        if resid < tol and step_norm < 1e-6:
            status = (
                STATUS_BOUNDARY
                if boundary_detected(nu, nu_snapshot)
                else STATUS_OPTIMAL
            )
            break
        if float(np.max(np.abs(nu))) > boundary_norm:
            status = STATUS_BOUNDARY
            break
        try:
            step = np.linalg.solve(
                cov + 1e-14 * np.eye(dim) * max(1.0, float(np.trace(cov))), r
            )
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(cov, r, rcond=None)[0]
        # damped Newton: halve until the moment gap does not grow
        t = 1.0
        for _bt in range(60):
            cand = nu + t * step
            _, mean_c, _ = moments(cand)
            if float(np.max(np.abs(target - mean_c))) <= resid * (1 + 1e-12):
                break
            t *= 0.5
        nu = nu + t * step
        step_norm = float(np.max(np.abs(t * step)))
    else:
        status = STATUS_FAILED
    if status == STATUS_FAILED and (
        float(np.max(np.abs(nu))) > boundary_norm
        or boundary_detected(nu, nu_snapshot)
    ):
        status = STATUS_BOUNDARY

    names = spec.stat_names()
    nu_map = {name: float(v) for name, v in zip(names, nu)}
    # the fitted distribution at the final parameters; for a boundary status
    # this is the last iterate, an almost-degenerate approximation of the
    # likelihood supremum
    cd = ergm_fitted_distribution(spec, nu_map)
    from .mobius import mobius_from_class_distribution

    mv = mobius_from_class_distribution(cd)
    lp = cd.labeled_prob(x)
    loglik = math.log(lp) if lp > 0 else float("-inf")
    return FitReport(
        family=spec.family,
        status=status,
        log_likelihood=loglik,
        z=mv,
        q=cd,
        nu=nu_map,
        constraint_residual=resid,
        iterations=iters,
    )


# --- degree-distribution structure --------------------------------------------


def degree_collision_classes(n: int) -> list:
    """Groups (size >= 2) of classes on n nodes sharing a degree distribution.

    Classes are padded with isolated vertices to exactly n nodes, so the
    degree counts include degree-zero entries.
    """
    if n > 7:
        raise SizeCapError("degree collision scan supports n <= 7")
    groups: dict = {}
    for u in enumerate_classes(n, True):
        dd = degree_distribution(u.padded(n))
        groups.setdefault(dd.counts, []).append(u)
    out = [
        sorted(g, key=UnlabeledClass.sort_key)
        for g in groups.values()
        if len(g) >= 2
    ]
    out.sort(key=lambda g: g[0].sort_key())
    return out


@dataclass
class SummarizedCheckResult:
    holds: bool
    witness: tuple | None = None  # pair of configurations or classes


def summarized_check(obj, tol: float = 1e-10) -> SummarizedCheckResult:
    """Is the probability of a configuration a function of its degree counts?"""
    if isinstance(obj, JointTable):
        first: dict = {}
        for mask in range(len(obj.probs)):
            x = LabeledNetwork.from_mask(obj.n, mask)
            key = degree_distribution(x).counts
            p = obj.probs[mask]
            if key in first:
                mask0, p0 = first[key]
                same = (p0 == p) if obj.is_exact else abs(float(p0 - p)) <= tol
                if not same:
                    return SummarizedCheckResult(False, (mask0, mask))
            else:
                first[key] = (mask, p)
        return SummarizedCheckResult(True)
    if isinstance(obj, ClassDistribution):
        for group in degree_collision_classes(obj.n):
            p0 = obj.labeled_prob(group[0].padded(obj.n))
            for u in group[1:]:
                p = obj.labeled_prob(u.padded(obj.n))
                same = (p0 == p) if obj.is_exact else abs(float(p0 - p)) <= tol
                if not same:
                    return SummarizedCheckResult(False, (group[0], u))
        return SummarizedCheckResult(True)
    raise TypeError("expected JointTable or ClassDistribution")


def sigma_is_degree_function(u: UnlabeledClass, n: int) -> tuple:
    """Is sigma_U constant across equal-degree-distribution graphs on n nodes?

    Returns (answer, witness) where the witness is a pair of padded
    representatives with equal degree counts and different counts of u.
    """
    if n > 7:
        raise SizeCapError("degree-function scan supports n <= 7")
    for group in degree_collision_classes(n):
        reps = [w.padded(n) for w in group]
        vals = [sigma(u, rep) for rep in reps]
        for k in range(1, len(vals)):
            if vals[k] != vals[0]:
                return False, (reps[0], reps[k])
    return True, None


@dataclass(frozen=True)
class SummarizedConstraint:
    """Linear functional of the class moments that summarizedness forces to 0.

    Built from a pair of equal-degree-distribution classes: the difference of
    their configuration probabilities, expanded by inclusion-exclusion.
    """

    pair: tuple
    coefficients: Mapping  # class -> integer coefficient

    def evaluate(self, mv: MobiusVector):
        total = None
        for u, c in self.coefficients.items():
            term = mv.z[u] * c
            total = term if total is None else total + term
        return total if total is not None else 0

    def evaluate_distribution(self, cd: ClassDistribution):
        x1, x2 = self.pair
        return cd.labeled_prob(x1.padded(cd.n)) - cd.labeled_prob(
            x2.padded(cd.n)
        )


def summarized_constraints(n: int) -> list:
    """One linear z constraint per degree-distribution collision pair."""
    if n > MAX_FIT_NODES:
        raise SizeCapError("constraint construction supports n <= 6")
    out = []
    for group in degree_collision_classes(n):
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                u1, u2 = group[a], group[b]
                x1 = u1.padded(n)
                x2 = u2.padded(n)
                ex = x1.edge_count
                coeffs = {}
                for u in enumerate_classes(n, True):
                    if u.edge_count < ex:
                        continue
                    diff = r_count(u, x1) - r_count(u, x2)
                    if diff:
                        sign = -1 if (u.edge_count - ex) % 2 else 1
                        coeffs[u] = sign * diff
                out.append(SummarizedConstraint((u1, u2), coeffs))
    return out
