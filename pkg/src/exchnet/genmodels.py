"""Generative network models: independent ties, node propensities, their
mixtures, and symmetric-kernel (graphon-style) models.

Exact joint tables are produced wherever the mixing structure is finite; the
Gaussian mixing kind and kernel sampling are seeded Monte Carlo.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import Callable, Sequence

import numpy as np

from .estimation import ClassDistribution
from .graphs import (
    LabeledNetwork,
    SizeCapError,
    UnlabeledClass,
    class_size,
    dyads,
    enumerate_classes,
    num_dyads,
)
from .mobius import JointTable, MobiusVector

MAX_JOINT_NODES = 6
MAX_EXACT_MIX_NODES = 5


def _sigmoid(t: float) -> float:
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


# --- independent ties ---------------------------------------------------------


def er_joint(n: int, p) -> JointTable:
    """All dyads independent with tie probability p (exact if p is rational).

    The float path multiplies dyad factors in colex order, so it agrees
    bit-for-bit with a per-dyad product model evaluated at a constant tie
    probability.
    """
    if n > MAX_JOINT_NODES:
        raise SizeCapError(f"joint tables support n <= {MAX_JOINT_NODES}")
    m = num_dyads(n)
    exact = isinstance(p, (Fraction, int))
    one = Fraction(1) if exact else 1.0
    probs = []
    for mask in range(1 << m):
        if exact:
            k = bin(mask).count("1")
            probs.append(p**k * (one - p) ** (m - k))
        else:
            prod = 1.0
            for b in range(m):
                prod *= p if mask >> b & 1 else 1.0 - p
            probs.append(prod)
    return JointTable(n, tuple(probs))


def er_mobius(n: int, p) -> MobiusVector:
    """Class moments of independent ties: z depends only on the edge count."""
    z = {}
    for u in enumerate_classes(n, True):
        if u.is_empty:
            z[u] = Fraction(1) if isinstance(p, (Fraction, int)) else 1.0
        else:
            z[u] = p**u.edge_count
    return MobiusVector(n, z)


def er_class_distribution(n: int, p) -> ClassDistribution:
    m = num_dyads(n)
    one = Fraction(1) if isinstance(p, (Fraction, int)) else 1.0
    q = {}
    for u in enumerate_classes(n, True):
        e = u.edge_count
        q[u] = class_size(u, n) * p**e * (one - p) ** (m - e)
    return ClassDistribution(n, q)


# --- node-propensity model ----------------------------------------------------


@dataclass(frozen=True)
class BetaSpec:
    """Per-node tie propensities; the tie probability for i~j is the logistic
    of beta_i + beta_j."""

    beta: tuple

    def __post_init__(self):
        if not all(math.isfinite(b) for b in self.beta):
            raise ValueError("propensities must be finite")

    @property
    def n(self) -> int:
        return len(self.beta)

    def tie_prob(self, i: int, j: int) -> float:
        return _sigmoid(self.beta[i - 1] + self.beta[j - 1])


def beta_joint(spec: BetaSpec) -> JointTable:
    """Exact product over dyads of independent, node-driven tie probabilities."""
    n = spec.n
    if n > MAX_JOINT_NODES:
        raise SizeCapError(f"joint tables support n <= {MAX_JOINT_NODES}")
    ds = dyads(n)
    pv = [spec.tie_prob(i, j) for i, j in ds]
    probs = []
    for mask in range(1 << len(ds)):
        p = 1.0
        for k, pk in enumerate(pv):
            p *= pk if mask >> k & 1 else 1.0 - pk
        probs.append(p)
    return JointTable(n, tuple(probs))


# --- marginal mixture over propensities ----------------------------------------


@dataclass(frozen=True)
class MixingSpec:
    """Distribution of the i.i.d. node propensities.

    kinds: ``point_mass(beta)``, ``two_point(beta_a, beta_b, w)`` with w the
    weight of beta_a, and ``gaussian(mu, sigma, mc_samples, seed)``.  Only
    kinds with finite logistic moments are supported; arbitrary mixing
    distributions are not.
    """

    kind: str
    params: tuple

    @classmethod
    def point_mass(cls, beta: float) -> "MixingSpec":
        return cls("point_mass", (float(beta),))

    @classmethod
    def two_point(cls, beta_a: float, beta_b: float, w: float) -> "MixingSpec":
        if not 0 <= w <= 1:
            raise ValueError("mixture weight must be in [0, 1]")
        return cls("two_point", (float(beta_a), float(beta_b), float(w)))

    @classmethod
    def gaussian(
        cls, mu: float, sigma: float, mc_samples: int, seed: int
    ) -> "MixingSpec":
        if sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        return cls("gaussian", (float(mu), float(sigma), int(mc_samples), int(seed)))

    def atoms(self) -> list:
        """(value, weight) support points for the exactly mixable kinds."""
        if self.kind == "point_mass":
            return [(self.params[0], 1.0)]
        if self.kind == "two_point":
            ba, bb, w = self.params
            return [(ba, w), (bb, 1.0 - w)]
        raise ValueError(f"kind {self.kind!r} has no finite atom list")


def marginal_beta_joint(n: int, mix: MixingSpec) -> JointTable:
    """Mixture of node-propensity models over i.i.d. propensities.

    Exact atom sums for point and two-point kinds; the Gaussian kind uses
    seeded Monte Carlo and reports the largest per-configuration standard
    error on the resulting table.
    """
    if mix.kind in ("point_mass", "two_point"):
        if n > MAX_EXACT_MIX_NODES:
            raise SizeCapError(
                f"exact mixing supports n <= {MAX_EXACT_MIX_NODES}"
            )
        atoms = mix.atoms()
        m = num_dyads(n)
        acc = np.zeros(1 << m)
        for assign in range(len(atoms) ** n):
            t = assign
            betas = []
            weight = 1.0
            for _ in range(n):
                val, w = atoms[t % len(atoms)]
                t //= len(atoms)
                betas.append(val)
                weight *= w
            if weight == 0.0:
                continue
            jt = beta_joint(BetaSpec(tuple(betas)))
            acc += weight * np.asarray(jt.probs)
        acc /= acc.sum()
        return JointTable(n, tuple(float(v) for v in acc))
    if mix.kind == "gaussian":
        if n > MAX_EXACT_MIX_NODES:
            raise SizeCapError(
                f"mixing joints support n <= {MAX_EXACT_MIX_NODES}"
            )
        mu, sigma, samples, seed = mix.params
        rng = random.Random(seed)
        m = num_dyads(n)
        acc = np.zeros(1 << m)
        sq = np.zeros(1 << m)
        for _ in range(samples):
            betas = tuple(rng.gauss(mu, sigma) for _ in range(n))
            row = np.asarray(beta_joint(BetaSpec(betas)).probs)
            acc += row
            sq += row * row
        mean = acc / samples
        var = np.maximum(sq / samples - mean * mean, 0.0)
        se = float(np.max(np.sqrt(var / samples)))
        mean /= mean.sum()
        return JointTable(n, tuple(float(v) for v in mean), mc_std_error=se)
    raise ValueError(f"unknown mixing kind {mix.kind!r}")


# --- symmetric-kernel models ----------------------------------------------------


SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Graphon:
    """A symmetric kernel on the unit square with values in [0, 1].

    Either a named closed form (constant, or the logistic product form driven
    by a Gaussian propensity quantile) or a grid with bilinear interpolation.
    """

    fn: Callable
    description: str

    def __post_init__(self):
        # spot-check symmetry and range on a coarse lattice
        pts = [k / 7 for k in range(8)]
        for u in pts:
            for v in pts:
                a = self.fn(u, v)
                b = self.fn(v, u)
                if abs(a - b) > SYMMETRY_TOL:
                    raise ValueError(f"kernel not symmetric at ({u}, {v})")
                if not -1e-12 <= a <= 1 + 1e-12:
                    raise ValueError(f"kernel value {a} outside [0, 1]")

    def __call__(self, u: float, v: float) -> float:
        return min(1.0, max(0.0, self.fn(u, v)))

    @classmethod
    def constant(cls, eta: float) -> "Graphon":
        if not 0 <= eta <= 1:
            raise ValueError("constant level must be in [0, 1]")
        return cls(lambda u, v: eta, f"const:{eta}")

    @classmethod
    def product_logistic(cls, mu: float, sigma: float) -> "Graphon":
        """Logistic of the sum of two Gaussian propensities, fed by uniform
        coordinates through the normal quantile."""
        nd = NormalDist(mu, sigma) if sigma > 0 else None

        def beta_of(u: float) -> float:
            if nd is None:
                return mu
            u = min(max(u, 1e-12), 1 - 1e-12)
            return nd.inv_cdf(u)

        return cls(
            lambda u, v: _sigmoid(beta_of(u) + beta_of(v)),
            f"product:logistic:{mu},{sigma}",
        )

    @classmethod
    def from_grid(cls, values: Sequence) -> "Graphon":
        grid = np.asarray(values, dtype=float)
        if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
            raise ValueError("grid must be square")
        if np.max(np.abs(grid - grid.T)) > SYMMETRY_TOL:
            raise ValueError("grid must be symmetric")
        if grid.min() < 0 or grid.max() > 1:
            raise ValueError("grid values must lie in [0, 1]")
        r = grid.shape[0]

        def interp(u: float, v: float) -> float:
            if r == 1:
                return float(grid[0, 0])
            x = min(max(u, 0.0), 1.0) * (r - 1)
            y = min(max(v, 0.0), 1.0) * (r - 1)
            x0, y0 = int(x), int(y)
            x1, y1 = min(x0 + 1, r - 1), min(y0 + 1, r - 1)
            fx, fy = x - x0, y - y0
            return float(
                grid[x0, y0] * (1 - fx) * (1 - fy)
                + grid[x1, y0] * fx * (1 - fy)
                + grid[x0, y1] * (1 - fx) * fy
                + grid[x1, y1] * fx * fy
            )

        return cls(interp, f"grid:{r}")

    @classmethod
    def from_callable(cls, fn: Callable, description: str = "custom") -> "Graphon":
        return cls(fn, description)


@dataclass(frozen=True)
class MixtureOfGraphons:
    """Finite mixture over kernels; moments are the weighted component moments."""

    components: tuple  # of (weight, Graphon)

    def __post_init__(self):
        total = sum(w for w, _ in self.components)
        if abs(total - 1.0) > 1e-12:
            raise ValueError("mixture weights must sum to 1")


def parse_graphon_text(text: str) -> Graphon:
    """Parse the grid file format: first line r, then r rows of r floats."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    r = int(lines[0].strip())
    rows = [[float(tok) for tok in ln.split()] for ln in lines[1 : r + 1]]
    if len(rows) != r or any(len(row) != r for row in rows):
        raise ValueError(f"grid file must contain {r} rows of {r} values")
    return Graphon.from_grid(rows)


def parse_graphon_name(spec: str) -> Graphon:
    """Named kernels: ``const:eta`` or ``product:logistic:mu,sigma``."""
    if spec.startswith("const:"):
        return Graphon.constant(float(spec.split(":", 1)[1]))
    if spec.startswith("product:logistic:"):
        args = spec.split(":", 2)[2]
        mu_s, sigma_s = args.split(",")
        return Graphon.product_logistic(float(mu_s), float(sigma_s))
    raise ValueError(f"unknown kernel spec {spec!r}")


def graphon_sample(phi: Graphon, n: int, seed: int) -> LabeledNetwork:
    """One network: uniform node coordinates, independent ties through phi."""
    rng = random.Random(seed)
    u = [rng.random() for _ in range(n)]
    edges = []
    for i, j in dyads(n):
        if rng.random() < phi(u[i - 1], u[j - 1]):
            edges.append((i, j))
    return LabeledNetwork.from_edges(n, edges)


def beta_sample(spec: BetaSpec, seed: int) -> LabeledNetwork:
    rng = random.Random(seed)
    edges = [
        (i, j) for i, j in dyads(spec.n) if rng.random() < spec.tie_prob(i, j)
    ]
    return LabeledNetwork.from_edges(spec.n, edges)


def marginal_beta_sample(n: int, mix: MixingSpec, seed: int) -> LabeledNetwork:
    rng = random.Random(seed)
    if mix.kind == "gaussian":
        mu, sigma, _, _ = mix.params
        betas = tuple(rng.gauss(mu, sigma) for _ in range(n))
    else:
        atoms = mix.atoms()
        vals = [a[0] for a in atoms]
        ws = [a[1] for a in atoms]
        betas = tuple(rng.choices(vals, weights=ws)[0] for _ in range(n))
    spec = BetaSpec(betas)
    edges = [(i, j) for i, j in dyads(n) if rng.random() < spec.tie_prob(i, j)]
    return LabeledNetwork.from_edges(n, edges)


# --- kernel moments ---------------------------------------------------------


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    error: float  # quadrature gap or Monte Carlo standard error
    method: str


MAX_MOMENT_VERTICES = 6


def _eliminate(phi_grid: np.ndarray, w: np.ndarray, edges, k: int) -> float:
    """Integrate the product of edge kernels by summing out one vertex at a
    time (min-degree order), contracting only the factors that touch it."""
    import string

    tensors = [(tuple(sorted((a, b))), phi_grid) for a, b in edges]
    scalar = 1.0
    remaining = set(range(k))
    while remaining:
        v = min(
            remaining,
            key=lambda t: (sum(1 for vars_, _ in tensors if t in vars_), t),
        )
        touching = [(vars_, arr) for vars_, arr in tensors if v in vars_]
        tensors = [(vars_, arr) for vars_, arr in tensors if v not in vars_]
        remaining.remove(v)
        if not touching:
            scalar *= float(np.sum(w))
            continue
        union = sorted(set().union(*(set(vars_) for vars_, _ in touching)))
        if len(union) > 5:
            raise SizeCapError(
                "quadrature intermediate too large; lower the resolution"
            )
        letters = {var: string.ascii_lowercase[i] for i, var in enumerate(union)}
        subs = [
            "".join(letters[var] for var in vars_) for vars_, _ in touching
        ]
        subs.append(letters[v])  # the weight vector sums v out
        out_vars = tuple(var for var in union if var != v)
        out = "".join(letters[var] for var in out_vars)
        reduced = np.einsum(
            ",".join(subs) + "->" + out,
            *[arr for _, arr in touching],
            w,
            optimize=True,
        )
        if out_vars:
            tensors.append((out_vars, reduced))
        else:
            scalar *= float(reduced)
    return scalar


def _quadrature_value(phi: Graphon, u: UnlabeledClass, r: int) -> float:
    pts = (np.arange(r) + 0.5) / r
    w = np.full(r, 1.0 / r)
    grid = np.empty((r, r))
    for i in range(r):
        for j in range(i, r):
            val = phi(float(pts[i]), float(pts[j]))
            grid[i, j] = val
            grid[j, i] = val
    rep = u.representative()
    edges = [(i - 1, j - 1) for i, j in rep.sorted_edges()]
    c = float(grid[0, 0])
    if np.all(grid == c):
        # constant integrand: the quadrature sum collapses in closed form,
        # keeping constant kernels bit-exact
        return c ** len(edges) * float(np.sum(w)) ** rep.n
    return _eliminate(grid, w, edges, rep.n)


def graphon_z(
    phi: Graphon,
    u: UnlabeledClass,
    *,
    method: str = "quadrature",
    r: int = 64,
    samples: int = 10000,
    seed: int = 0,
) -> MomentEstimate:
    """The class moment of a kernel model: the integral over independent
    uniform coordinates of the product of edge kernels.

    Midpoint quadrature at resolution r (a power of two keeps constant
    kernels exact); the reported error is the gap to the half-resolution
    value.  Monte Carlo reports the standard error of the mean.
    """
    if u.is_empty:
        return MomentEstimate(1.0, 0.0, method)
    if u.n_vertices > MAX_MOMENT_VERTICES:
        raise SizeCapError(
            f"kernel moments support classes on <= {MAX_MOMENT_VERTICES} vertices"
        )
    if method == "quadrature":
        if r < 2:
            raise ValueError("resolution must be >= 2")
        val = _quadrature_value(phi, u, r)
        coarse = _quadrature_value(phi, u, max(r // 2, 1))
        return MomentEstimate(val, abs(val - coarse), f"quadrature:{r}")
    if method == "mc":
        rng = random.Random(seed)
        rep = u.representative()
        k = rep.n
        edges = [(i - 1, j - 1) for i, j in rep.sorted_edges()]
        total = 0.0
        total_sq = 0.0
        for _ in range(samples):
            us = [rng.random() for _ in range(k)]
            prod = 1.0
            for a, b in edges:
                prod *= phi(us[a], us[b])
            total += prod
            total_sq += prod * prod
        mean = total / samples
        var = max(total_sq / samples - mean * mean, 0.0)
        return MomentEstimate(mean, math.sqrt(var / samples), f"mc:{samples}")
    raise ValueError(f"unknown method {method!r}")


def mixture_graphon_z(
    mix: MixtureOfGraphons, u: UnlabeledClass, **kwargs
) -> MomentEstimate:
    value = 0.0
    error = 0.0
    for wgt, phi in mix.components:
        est = graphon_z(phi, u, **kwargs)
        value += wgt * est.value
        error += wgt * est.error
    return MomentEstimate(value, error, "mixture")


def graphon_mobius(phi: Graphon, n: int, **kwargs) -> MobiusVector:
    """Class moments for every class at n, as floats."""
    z = {}
    for u in enumerate_classes(n, True):
        z[u] = 1.0 if u.is_empty else graphon_z(phi, u, **kwargs).value
    return MobiusVector(n, z)


# --- independence characterization diagnostic -----------------------------------


@dataclass(frozen=True)
class ErDiagnostic:
    """Moment deviations from an independent-ties model at level eta.

    ``max_deviation`` ranges over all supplied classes with at most four
    edges; the two named residuals isolate the hypothesis moments (the 2-star
    and the 4-cycle).  This is a reporter of finite moment deviations, not a
    proof of independence.
    """

    eta: float
    max_deviation: float
    worst_class: UnlabeledClass | None
    residual_two_star: float
    residual_four_cycle: float

    def flags_dependence(self, tol: float = 1e-12) -> bool:
        return self.max_deviation > tol


def er_characterization_diagnostic(z, eta: float) -> ErDiagnostic:
    """Compare class moments against powers of eta.

    ``z`` may be a MobiusVector or a mapping from classes to values; classes
    with more than four edges are ignored.
    """
    from .counting import cycle_class, star_class

    values = z.z if isinstance(z, MobiusVector) else z
    worst = None
    worst_dev = 0.0
    for u, v in values.items():
        if u.is_empty or u.edge_count > 4:
            continue
        dev = abs(float(v) - eta**u.edge_count)
        if dev > worst_dev:
            worst_dev = dev
            worst = u
    s2 = star_class(2)
    c4 = cycle_class(4)
    r2 = abs(float(values[s2]) - eta**2) if s2 in values else float("nan")
    r4 = abs(float(values[c4]) - eta**4) if c4 in values else float("nan")
    return ErDiagnostic(eta, worst_dev, worst, r2, r4)
