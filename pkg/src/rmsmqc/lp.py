"""Dense two-phase primal simplex with bounded variables.

Problems are stated as::

    minimize    c @ x
    subject to  A[r] @ x  (<=, >=, =)  rhs[r]
                lb <= x <= ub

Variables are shifted onto ``[0, u]`` (free variables are split), every
row gets a slack, and rows with negative right-hand side are negated.
Phase 1 minimizes the sum of artificial variables; phase 2 the original
objective.  Nonbasic variables sit at either bound, so binaries never need
explicit ``x <= 1`` rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

EPS_FEAS = 1e-7
EPS_PIVOT = 1e-9
EPS_COST = 1e-9
DEGENERATE_STREAK = 50


class NumericalFailure(RuntimeError):
    """Pivoting did not terminate within the iteration cap."""


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


SENSES = ("<=", ">=", "=")


@dataclass
class LpModel:
    """``min c @ x`` subject to row constraints and variable bounds."""

    c: np.ndarray
    A: np.ndarray
    senses: list[str]
    rhs: np.ndarray
    lb: np.ndarray
    ub: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = self.c.shape[0]
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        self.lb = np.asarray(self.lb, dtype=float).reshape(-1)
        self.ub = np.asarray(self.ub, dtype=float).reshape(-1)
        self.senses = list(self.senses)
        m = self.A.shape[0]
        if len(self.senses) != m or self.rhs.shape[0] != m:
            raise ValueError("row data has inconsistent lengths")
        if self.lb.shape[0] != n or self.ub.shape[0] != n:
            raise ValueError("bounds have the wrong length")
        if any(s not in SENSES for s in self.senses):
            raise ValueError(f"row senses must be one of {SENSES}")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.c))
                and np.all(np.isfinite(self.rhs))):
            raise ValueError("coefficients must be finite")
        if np.any(self.lb > self.ub):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def with_bounds(self, lb: np.ndarray, ub: np.ndarray) -> "LpModel":
        """Shallow copy with replaced bounds (used by branch-and-bound).

        Skips validation; the caller keeps ``lb <= ub`` or expects an
        infeasible outcome.
        """
        m = object.__new__(LpModel)
        m.__dict__.update(self.__dict__)
        m.lb, m.ub = np.asarray(lb, dtype=float), np.asarray(ub, dtype=float)
        return m

    def _sense_masks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        masks = self.__dict__.get("_masks")
        if masks is None:
            s = np.array(self.senses, dtype=object)
            masks = (s == "<=", s == ">=", s == "=")
            self.__dict__["_masks"] = masks
        return masks

    def row_violation(self, x: np.ndarray) -> float:
        """Largest violation of any row or bound at ``x``."""
        worst = 0.0
        if self.n_rows:
            le, ge, eq = self._sense_masks()
            gap = self.A @ x - self.rhs
            worst = max(0.0, float(np.max(np.where(le, gap, np.where(ge, -gap, np.abs(gap))))))
        if x.size:
            worst = max(worst, float(np.max(self.lb - x)), float(np.max(x - self.ub)))
        return worst


@dataclass
class LpOutcome:
    status: LpStatus
    objective: float = math.nan
    x: np.ndarray = field(default_factory=lambda: np.zeros(0))
    duals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    iterations: int = 0
    state: "WarmStart | None" = field(default=None, repr=False)


class ModelBuilder:
    """Incremental construction of an :class:`LpModel` by named columns."""

    def __init__(self):
        self.names: list[str] = []
        self.c: list[float] = []
        self.lb: list[float] = []
        self.ub: list[float] = []
        self.integer: list[bool] = []
        self.rows: list[dict[int, float]] = []
        self.senses: list[str] = []
        self.rhs: list[float] = []

    def add_var(self, name: str, cost: float = 0.0, lb: float = 0.0,
                ub: float = math.inf, integer: bool = False) -> int:
        self.names.append(name)
        self.c.append(cost)
        self.lb.append(lb)
        self.ub.append(ub)
        self.integer.append(integer)
        return len(self.names) - 1

    def add_row(self, coeffs: dict[int, float], sense: str, rhs: float) -> int:
        self.rows.append(dict(coeffs))
        self.senses.append(sense)
        self.rhs.append(rhs)
        return len(self.rows) - 1

    def lp(self) -> LpModel:
        A = np.zeros((len(self.rows), len(self.names)))
        for r, row in enumerate(self.rows):
            for k, v in row.items():
                A[r, k] += v
        return LpModel(np.array(self.c, dtype=float), A, self.senses,
                       np.array(self.rhs, dtype=float), np.array(self.lb, dtype=float),
                       np.array(self.ub, dtype=float))


class _Tableau:
    """Bounded-variable simplex state for ``A z = b, 0 <= z <= u``."""

    def __init__(self, A: np.ndarray, b: np.ndarray, u: np.ndarray, basis: list[int]):
        self.T = A.copy()
        self.beta = b.copy()
        self.u = u.copy()
        self.basis = list(basis)
        self.at_upper = np.zeros(A.shape[1], dtype=bool)
        self.blocked = np.zeros(A.shape[1], dtype=bool)
        self.drop_on_leave = np.zeros(A.shape[1], dtype=bool)
        self.iterations = 0

    def values(self) -> np.ndarray:
        z = np.where(self.at_upper, self.u, 0.0)
        z[self.basis] = self.beta
        return z

    def pivot(self, r: int, q: int) -> None:
        T = self.T
        T[r] /= T[r, q]
        col = T[:, q].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = q

    def run(self, cost: np.ndarray, max_iter: int) -> str:
        """Optimize ``cost @ z`` from the current basic feasible point."""
        T, n = self.T, self.T.shape[1]
        d = cost - cost[self.basis] @ T if T.shape[0] else cost.copy()
        is_basic = np.zeros(n, dtype=bool)
        is_basic[self.basis] = True
        streak = 0
        while True:
            if self.iterations >= max_iter:
                raise NumericalFailure(f"simplex exceeded {max_iter} iterations")
            gain = np.where(self.at_upper, d, -d)
            gain[is_basic | self.blocked] = 0.0
            candidates = np.flatnonzero(gain > EPS_COST)
            if candidates.size == 0:
                return "optimal"
            bland = streak >= DEGENERATE_STREAK
            q = int(candidates[0]) if bland else int(candidates[np.argmax(gain[candidates])])
            delta = -1.0 if self.at_upper[q] else 1.0
            alpha = T[:, q] * delta
            theta = self.u[q]
            leave, to_upper = -1, False
            for r in np.flatnonzero(np.abs(alpha) > EPS_PIVOT):
                a = alpha[r]
                if a > 0:
                    lim = max(self.beta[r], 0.0) / a
                    upper_hit = False
                else:
                    ub = self.u[self.basis[r]]
                    if math.isinf(ub):
                        continue
                    lim = max(ub - self.beta[r], 0.0) / -a
                    upper_hit = True
                if lim < theta - 1e-12 or (
                        lim <= theta + 1e-12 and leave >= 0
                        and (self.basis[r] < self.basis[leave] if bland
                             else abs(a) > abs(alpha[leave]))):
                    theta, leave, to_upper = lim, int(r), upper_hit
            if math.isinf(theta):
                return "unbounded"
            self.iterations += 1
            streak = streak + 1 if theta <= 1e-12 else 0
            self.beta -= theta * alpha
            if leave < 0:
                self.at_upper[q] = not self.at_upper[q]
                continue
            entering_value = (self.u[q] if self.at_upper[q] else 0.0) + delta * theta
            out = self.basis[leave]
            self.pivot(leave, q)
            self.beta[leave] = entering_value
            is_basic[out], is_basic[q] = False, True
            self.at_upper[q] = False
            self.at_upper[out] = to_upper
            if self.drop_on_leave[out]:
                self.blocked[out] = True
            d -= d[q] * T[leave]
            np.clip(self.beta, 0.0, None, out=self.beta)

    def copy(self) -> "_Tableau":
        tab = _Tableau.__new__(_Tableau)
        tab.T = self.T.copy()
        tab.beta = self.beta.copy()
        tab.u = self.u.copy()
        tab.basis = list(self.basis)
        tab.at_upper = self.at_upper.copy()
        tab.blocked = self.blocked
        tab.drop_on_leave = self.drop_on_leave
        tab.iterations = 0
        return tab

    def dual_run(self, cost: np.ndarray, max_iter: int) -> str:
        """Dual simplex from a dual feasible basis whose basic values may
        be out of bounds."""
        T, n = self.T, self.T.shape[1]
        d = cost - cost[self.basis] @ T if T.shape[0] else cost.copy()
        is_basic = np.zeros(n, dtype=bool)
        is_basic[self.basis] = True
        ub_basic = self.u[self.basis]
        while True:
            below = -self.beta
            above = self.beta - ub_basic
            infeas = np.maximum(below, above)
            r = int(np.argmax(infeas)) if infeas.size else 0
            if not infeas.size or infeas[r] <= EPS_FEAS:
                return "optimal"
            if self.iterations >= max_iter:
                raise NumericalFailure(f"dual simplex exceeded {max_iter} iterations")
            raise_out = below[r] > 0
            row = T[r]
            # entering candidates move the leaving variable towards its bound
            sign = np.where(self.at_upper, 1.0, -1.0) * (1.0 if raise_out else -1.0)
            ok = (sign * row > EPS_PIVOT) & ~is_basic & ~self.blocked
            cand = np.flatnonzero(ok)
            if cand.size == 0:
                return "infeasible"
            ratios = np.abs(d[cand]) / np.abs(row[cand])
            best = ratios.min()
            near = cand[ratios <= best + 1e-12]
            q = int(near[np.argmax(np.abs(row[near]))])
            out = self.basis[r]
            target = 0.0 if raise_out else self.u[out]
            step = (self.beta[r] - target) / row[q]
            self.iterations += 1
            self.beta -= step * T[:, q]
            start = self.u[q] if self.at_upper[q] else 0.0
            self.pivot(r, q)
            self.beta[r] = start + step
            is_basic[out], is_basic[q] = False, True
            self.at_upper[q] = False
            self.at_upper[out] = not raise_out
            ub_basic[r] = self.u[q]
            d -= d[q] * T[r]


@dataclass
class WarmStart:
    """Final tableau of a solve plus the column map, for re-solving after
    bound changes."""

    model: LpModel
    tab: _Tableau
    col_of: list[int]  # tableau column of every variable, -1 if not shifted by lb
    cost: np.ndarray
    n_struct: int
    S: np.ndarray
    shift: np.ndarray


def solve_lp(model: LpModel, max_iter: int | None = None, keep_state: bool = False) -> LpOutcome:
    """Solve ``model``; deterministic for identical input.

    With ``keep_state`` an optimal outcome carries a :class:`WarmStart`
    for :func:`reoptimize`.
    """
    m, n = model.n_rows, model.n_vars
    lb, ub = model.lb, model.ub

    # column transform: x = shift + sign * z[col] (- z[neg] for free vars)
    cols: list[tuple[int, float, float]] = []  # (var, sign, shift)
    u_list: list[float] = []
    for k in range(n):
        if math.isfinite(lb[k]):
            cols.append((k, 1.0, lb[k]))
            u_list.append(ub[k] - lb[k])
        elif math.isfinite(ub[k]):
            cols.append((k, -1.0, ub[k]))
            u_list.append(math.inf)
        else:
            cols.append((k, 1.0, 0.0))
            cols.append((k, -1.0, 0.0))
            u_list += [math.inf, math.inf]
    n_struct = len(cols)
    shift = np.zeros(n)
    for k, _, s in cols:
        shift[k] = s
    S = np.zeros((n, n_struct))
    for col, (k, sign, _) in enumerate(cols):
        S[k, col] = sign

    A = model.A @ S if m else np.zeros((0, n_struct))
    b = model.rhs - (model.A @ shift if m else 0.0)
    c_struct = model.c @ S

    n_slack = sum(1 for s in model.senses if s != "=")
    width = n_struct + n_slack + m
    A_std = np.zeros((m, width))
    A_std[:, :n_struct] = A
    row_sign = np.ones(m)
    u = np.concatenate([np.array(u_list, dtype=float), np.full(n_slack + m, math.inf)])
    slack_col = {}
    col = n_struct
    for r, s in enumerate(model.senses):
        if s != "=":
            A_std[r, col] = 1.0 if s == "<=" else -1.0
            slack_col[r] = col
            col += 1
    for r in range(m):
        if b[r] < 0:
            A_std[r] *= -1
            b[r] *= -1
            row_sign[r] = -1.0
    basis = []
    art_start = n_struct + n_slack
    n_art = 0
    for r in range(m):
        sc = slack_col.get(r)
        if sc is not None and A_std[r, sc] > 0:
            basis.append(sc)
        else:
            A_std[r, art_start + r] = 1.0
            basis.append(art_start + r)
            n_art += 1
    is_art = np.zeros(width, dtype=bool)
    is_art[art_start:] = True

    if max_iter is None:
        max_iter = 50 * (m + width) + 1000
    tab = _Tableau(A_std, b, u, basis)
    # unused artificial columns never enter; used ones leave for good
    tab.blocked[art_start:] = True
    tab.blocked[[k for k in basis if is_art[k]]] = False
    tab.drop_on_leave[:] = is_art

    if n_art:
        tab.run(is_art.astype(float), max_iter)
        if float(np.sum(tab.values()[is_art])) > EPS_FEAS:
            return LpOutcome(LpStatus.INFEASIBLE, iterations=tab.iterations)
        keep = []
        for r in range(len(tab.basis)):
            if not is_art[tab.basis[r]]:
                keep.append(r)
                continue
            row = np.abs(tab.T[r])
            row[is_art] = 0.0
            row[tab.basis] = 0.0
            cand = np.flatnonzero(row > EPS_PIVOT)
            if cand.size == 0:
                continue  # redundant row
            q = int(cand[np.argmax(row[cand])])
            value = tab.u[q] if tab.at_upper[q] else 0.0
            tab.pivot(r, q)
            tab.beta[r] = value
            tab.at_upper[q] = False
            keep.append(r)
        tab.T = tab.T[keep]
        tab.beta = tab.beta[keep]
        tab.basis = [tab.basis[r] for r in keep]
        kept_rows = keep
    else:
        kept_rows = list(range(m))
    # artificials are all nonbasic now; drop their columns
    width = art_start
    tab.T = tab.T[:, :width]
    tab.u = tab.u[:width]
    tab.at_upper = tab.at_upper[:width]
    tab.blocked = np.zeros(width, dtype=bool)
    tab.drop_on_leave = np.zeros(width, dtype=bool)

    cost = np.zeros(width)
    cost[:n_struct] = c_struct
    if tab.run(cost, max_iter) == "unbounded":
        return LpOutcome(LpStatus.UNBOUNDED, iterations=tab.iterations)

    z = tab.values()
    x = shift + S @ z[:n_struct]
    duals = np.zeros(m)
    if tab.basis:
        B = A_std[np.ix_(kept_rows, tab.basis)]
        y, *_ = np.linalg.lstsq(B.T, cost[tab.basis], rcond=None)
        duals[kept_rows] = y * row_sign[kept_rows]
    state = None
    if keep_state:
        col_of = [-1] * n
        for col, (k, sign, _) in enumerate(cols):
            if sign > 0 and math.isfinite(lb[k]):
                col_of[k] = col
        state = WarmStart(model, tab, col_of, cost, n_struct, S, shift)
    return LpOutcome(LpStatus.OPTIMAL, float(model.c @ x), x, duals, tab.iterations, state)


def reoptimize(state: WarmStart, lb: np.ndarray, ub: np.ndarray,
               max_iter: int | None = None) -> LpOutcome:
    """Re-solve the model of ``state`` under new variable bounds.

    Bound changes keep the old basis dual feasible, so a few dual simplex
    pivots usually suffice.  Falls back to a cold solve when a changed
    variable is not stored as a shifted column or the result fails a
    feasibility check.  Duals are not computed.
    """
    model = state.model.with_bounds(lb, ub)
    changed = np.flatnonzero((lb != state.model.lb) | (ub != state.model.ub))
    if any(state.col_of[k] < 0 or not math.isfinite(lb[k]) for k in changed):
        return solve_lp(model, max_iter, keep_state=True)
    if np.any(lb > ub):
        return LpOutcome(LpStatus.INFEASIBLE)
    tab = state.tab.copy()
    tab.u = tab.u.copy()
    shift = state.shift.copy()
    for k in changed:
        col = state.col_of[k]
        T_col = tab.T[:, col].copy()
        tab.beta -= (lb[k] - shift[k]) * T_col
        shift[k] = lb[k]
        new_u = ub[k] - lb[k]
        if tab.at_upper[col]:
            tab.beta -= (new_u - tab.u[col]) * T_col
        tab.u[col] = new_u
    if max_iter is None:
        max_iter = 10 * (tab.T.shape[0] + tab.T.shape[1]) + 100
    try:
        status = tab.dual_run(state.cost, max_iter)
    except NumericalFailure:
        return solve_lp(model, keep_state=True)
    if status == "infeasible":
        return LpOutcome(LpStatus.INFEASIBLE, iterations=tab.iterations)
    z = tab.values()
    x = shift + state.S @ z[:state.n_struct]
    if model.row_violation(x) > 1e-6:
        return solve_lp(model, keep_state=True)
    warm = WarmStart(model, tab, state.col_of, state.cost, state.n_struct, state.S, shift)
    return LpOutcome(LpStatus.OPTIMAL, float(model.c @ x), x, np.zeros(0), tab.iterations, warm)


def dual_objective(model: LpModel, duals: Sequence[float]) -> float:
    """Lagrangian dual value for row multipliers ``duals``.

    Reduced costs are paired with whichever variable bound makes the
    bound term finite; an unpairable sign yields ``-inf``.
    """
    y = np.asarray(duals, dtype=float)
    red = model.c - (model.A.T @ y if model.n_rows else 0.0)
    total = float(y @ model.rhs) if model.n_rows else 0.0
    for k, r in enumerate(np.atleast_1d(red)):
        if r > 0:
            total += r * model.lb[k] if math.isfinite(model.lb[k]) else -math.inf
        elif r < 0:
            total += r * model.ub[k] if math.isfinite(model.ub[k]) else -math.inf
    return total
