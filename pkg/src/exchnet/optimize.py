"""Projected-gradient and augmented-Lagrangian solvers over the simplex.

These power the constrained likelihood fits: variables are per-class
probabilities q (nonnegative, summing to one), objectives are linear, and the
constraints are polynomial (products of linear moment maps).  Problems are
tiny (tens to ~1000 variables), so plain first-order methods with a
Barzilai-Borwein step and an Armijo safeguard are accurate and fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {q >= 0, sum q = 1}."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, v.size + 1)
    cond = u * idx > (css - 1.0)
    rho = np.nonzero(cond)[0][-1]
    theta = (css[rho] - 1.0) / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


@dataclass
class ProductConstraint:
    """Equality g(q) = L(q) - prod_i M_i(q) = 0 with linear L and M_i.

    ``target_row`` and each row of ``factor_rows`` are coefficient vectors of
    the linear maps.
    """

    target_row: np.ndarray
    factor_rows: Sequence

    def value(self, q: np.ndarray) -> float:
        prod = 1.0
        for row in self.factor_rows:
            prod *= float(row @ q)
        return float(self.target_row @ q) - prod

    def grad(self, q: np.ndarray) -> np.ndarray:
        vals = [float(row @ q) for row in self.factor_rows]
        g = self.target_row.astype(float).copy()
        for i, row in enumerate(self.factor_rows):
            coef = 1.0
            for jj, v in enumerate(vals):
                if jj != i:
                    coef *= v
            g -= coef * row
        return g


@dataclass
class LinearConstraint:
    """Equality a @ q - b = 0."""

    row: np.ndarray
    rhs: float

    def value(self, q: np.ndarray) -> float:
        return float(self.row @ q) - self.rhs

    def grad(self, q: np.ndarray) -> np.ndarray:
        return self.row.astype(float)


def _constraint_values(constraints, q):
    return np.array([c.value(q) for c in constraints])


def _penalized_grad(c_lin: np.ndarray, constraints, lam, rho, q):
    g = -c_lin.astype(float).copy()
    if constraints:
        vals = _constraint_values(constraints, q)
        w = lam + rho * vals
        for cw, con in zip(w, constraints):
            if cw:
                g += cw * con.grad(q)
    return g


def _penalized_value(c_lin, constraints, lam, rho, q):
    val = -float(c_lin @ q)
    if constraints:
        vals = _constraint_values(constraints, q)
        val += float(lam @ vals) + 0.5 * rho * float(vals @ vals)
    return val


def _inner_solve(c_lin, constraints, lam, rho, q0, iters, gtol):
    """Projected gradient with BB step and Armijo backtracking."""
    q = q0.copy()
    f = _penalized_value(c_lin, constraints, lam, rho, q)
    g = _penalized_grad(c_lin, constraints, lam, rho, q)
    step = 1.0
    prev_q = None
    prev_g = None
    for _ in range(iters):
        if prev_q is not None:
            dq = q - prev_q
            dg = g - prev_g
            denom = float(dq @ dg)
            step = float(dq @ dq) / denom if denom > 1e-18 else 1.0
            step = min(max(step, 1e-10), 1e6)
        accepted = False
        t = step
        for _bt in range(40):
            q_new = project_to_simplex(q - t * g)
            f_new = _penalized_value(c_lin, constraints, lam, rho, q_new)
            decrease = float(g @ (q - q_new))
            if f_new <= f - 1e-4 * decrease + 1e-16:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        prev_q, prev_g = q, g
        q, f = q_new, f_new
        g = _penalized_grad(c_lin, constraints, lam, rho, q)
        res = float(np.max(np.abs(q - project_to_simplex(q - g))))
        if res < gtol:
            break
    return q


@dataclass
class AugLagResult:
    q: np.ndarray
    objective: float
    max_violation: float
    kkt_residual: float
    outer_iters: int


def maximize_on_simplex(
    c_lin: np.ndarray,
    constraints,
    q0: np.ndarray,
    *,
    max_outer: int = 40,
    inner_iters: int = 3000,
    ctol: float = 1e-11,
    gtol: float = 1e-12,
) -> AugLagResult:
    """Maximize c @ q over the simplex subject to equality constraints.

    Classic augmented Lagrangian: inner projected-gradient solves, multiplier
    updates, penalty growth when the violation stalls.
    """
    constraints = list(constraints)
    lam = np.zeros(len(constraints))
    rho = 10.0
    q = project_to_simplex(q0.astype(float))
    prev_viol = np.inf
    outer_done = 0
    for outer in range(max_outer):
        outer_done = outer + 1
        q = _inner_solve(c_lin, constraints, lam, rho, q, inner_iters, gtol)
        if constraints:
            vals = _constraint_values(constraints, q)
            viol = float(np.max(np.abs(vals)))
        else:
            vals = np.zeros(0)
            viol = 0.0
        g_lag = -c_lin.astype(float).copy()
        for lv, con in zip(lam + rho * vals, constraints):
            g_lag += lv * con.grad(q)
        kkt = float(np.max(np.abs(q - project_to_simplex(q - g_lag))))
        if viol < ctol and kkt < 1e-9:
            break
        lam = lam + rho * vals
        if viol > 0.25 * prev_viol:
            rho = min(rho * 10.0, 1e12)
        prev_viol = viol
    vals = _constraint_values(constraints, q) if constraints else np.zeros(0)
    viol = float(np.max(np.abs(vals))) if len(vals) else 0.0
    g_lag = -c_lin.astype(float).copy()
    for lv, con in zip(lam + rho * vals, constraints):
        g_lag += lv * con.grad(q)
    kkt = float(np.max(np.abs(q - project_to_simplex(q - g_lag))))
    return AugLagResult(q, float(c_lin @ q), viol, kkt, outer_done)


def minimize_violation_on_simplex(
    constraints,
    q0: np.ndarray,
    *,
    iters: int = 4000,
) -> AugLagResult:
    """Minimize the sum of squared constraint violations over the simplex."""
    constraints = list(constraints)

    def value(q):
        vals = _constraint_values(constraints, q)
        return 0.5 * float(vals @ vals)

    def grad(q):
        vals = _constraint_values(constraints, q)
        g = np.zeros_like(q)
        for v, con in zip(vals, constraints):
            if v:
                g += v * con.grad(q)
        return g

    q = project_to_simplex(q0.astype(float))
    f = value(q)
    g = grad(q)
    step = 1.0
    prev_q = prev_g = None
    for _ in range(iters):
        if prev_q is not None:
            dq = q - prev_q
            dg = g - prev_g
            denom = float(dq @ dg)
            step = float(dq @ dq) / denom if denom > 1e-18 else 1.0
            step = min(max(step, 1e-10), 1e6)
        t = step
        accepted = False
        for _bt in range(40):
            q_new = project_to_simplex(q - t * g)
            f_new = value(q_new)
            decrease = float(g @ (q - q_new))
            if f_new <= f - 1e-4 * decrease + 1e-18:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        prev_q, prev_g = q, g
        q, f = q_new, f_new
        g = grad(q)
        if f < 1e-26:
            break
    vals = _constraint_values(constraints, q)
    viol = float(np.max(np.abs(vals))) if len(vals) else 0.0
    return AugLagResult(q, -f, viol, float("nan"), 0)


def dirichlet_starts(
    rng: np.random.Generator, dim: int, count: int
) -> list:
    return [rng.dirichlet(np.ones(dim)) for _ in range(count)]
