"""Exact rational linear programming.

A small dense two-phase simplex over exact rationals, with Bland's rule for
termination and certificates for every outcome:

* ``Optimal``    — the point satisfies every constraint exactly and the
                   objective value is exact;
* ``Infeasible`` — a Farkas certificate ``y >= 0`` with ``y^T A = 0`` and
                   ``y . b > 0`` over the canonical row system (see
                   :meth:`LinearProgram.canonical_system`);
* ``Unbounded``  — a recession direction that preserves feasibility and
                   strictly improves the objective.

Certificates are re-verified in exact arithmetic before being returned, so a
bug in the pivoting machinery surfaces as a hard error rather than a wrong
verdict.  Everything is deterministic: identical inputs produce identical
outcomes.

Strict inequalities are intentionally not representable.  Callers encode
strictness as "maximise a slack and test the sign of the optimum", which is
how the equilibrium modules use this kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .rationals import ONE, ZERO, rat

LESS_EQ = "<="
EQUAL = "="
GREATER_EQ = ">="
_RELATIONS = (LESS_EQ, EQUAL, GREATER_EQ)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    bound: object

    def satisfied_by(self, point: Sequence) -> bool:
        lhs = sum((c * x for c, x in zip(self.coeffs, point)), ZERO)
        if self.relation == LESS_EQ:
            return lhs <= self.bound
        if self.relation == GREATER_EQ:
            return lhs >= self.bound
        return lhs == self.bound


class LinearProgram:
    """maximise ``objective . x`` subject to linear constraints and
    per-variable lower bounds (``None`` marks a free variable)."""

    __slots__ = ("variable_count", "objective", "constraints", "lower_bounds")

    def __init__(self, objective, constraints, lower_bounds=None):
        self.objective = tuple(rat(c) for c in objective)
        self.variable_count = len(self.objective)
        if self.variable_count == 0:
            raise ValueError("a linear program needs at least one variable")
        rows = []
        for coeffs, relation, bound in constraints:
            coeffs = tuple(rat(c) for c in coeffs)
            if len(coeffs) != self.variable_count:
                raise ValueError(
                    f"constraint has {len(coeffs)} coefficients, expected {self.variable_count}"
                )
            if relation not in _RELATIONS:
                raise ValueError(f"unknown relation {relation!r}")
            rows.append(Constraint(coeffs, relation, rat(bound)))
        self.constraints = tuple(rows)
        if lower_bounds is None:
            lower_bounds = [ZERO] * self.variable_count
        bounds = []
        for lb in lower_bounds:
            bounds.append(None if lb is None else rat(lb))
        if len(bounds) != self.variable_count:
            raise ValueError("lower_bounds length must match variable count")
        self.lower_bounds = tuple(bounds)

    def canonical_system(self):
        """The program's constraint set as a single system ``A x >= b``.

        Row order: constraints in declaration order, with each equality
        contributing two rows (``a.x >= b`` then ``-a.x >= -b``) and each
        ``<=`` row negated; then one row ``x_j >= lb_j`` per lower-bounded
        variable, in variable order.  Infeasibility certificates index into
        exactly this system.
        """
        rows = []
        rhs = []
        for con in self.constraints:
            if con.relation in (GREATER_EQ, EQUAL):
                rows.append(con.coeffs)
                rhs.append(con.bound)
            if con.relation in (LESS_EQ, EQUAL):
                rows.append(tuple(-c for c in con.coeffs))
                rhs.append(-con.bound)
        for j, lb in enumerate(self.lower_bounds):
            if lb is not None:
                unit = [ZERO] * self.variable_count
                unit[j] = ONE
                rows.append(tuple(unit))
                rhs.append(lb)
        return rows, rhs

    def is_feasible_point(self, point: Sequence) -> bool:
        if len(point) != self.variable_count:
            return False
        for con in self.constraints:
            if not con.satisfied_by(point):
                return False
        for x, lb in zip(point, self.lower_bounds):
            if lb is not None and x < lb:
                return False
        return True


@dataclass(frozen=True)
class Optimal:
    value: object
    point: tuple


@dataclass(frozen=True)
class Infeasible:
    farkas_certificate: tuple


@dataclass(frozen=True)
class Unbounded:
    ray: tuple


LpOutcome = Union[Optimal, Infeasible, Unbounded]


def verify_farkas_certificate(lp: LinearProgram, certificate: Sequence) -> bool:
    """Exact check of ``y >= 0``, ``y^T A = 0`` and ``y . b > 0``."""
    rows, rhs = lp.canonical_system()
    if len(certificate) != len(rows):
        return False
    if any(y < 0 for y in certificate):
        return False
    for j in range(lp.variable_count):
        total = sum((y * row[j] for y, row in zip(certificate, rows)), ZERO)
        if total != 0:
            return False
    value = sum((y * b for y, b in zip(certificate, rhs)), ZERO)
    return value > 0


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve to proven optimality, infeasibility or unboundedness."""
    tableau = _Tableau(lp)
    infeasible = tableau.phase_one()
    if infeasible is not None:
        return infeasible
    return tableau.phase_two()


def feasible_point(lp: LinearProgram):
    """A point satisfying all constraints exactly, or an ``Infeasible``
    certificate.  The objective is ignored."""
    tableau = _Tableau(lp)
    infeasible = tableau.phase_one()
    if infeasible is not None:
        return infeasible
    point = tableau.current_point()
    if not lp.is_feasible_point(point):
        raise RuntimeError("internal simplex error: phase-1 point fails exact recheck")
    return point


class _Tableau:
    """Dense simplex tableau for the standardised form of a LinearProgram.

    Lower-bounded variables are shifted to zero, free variables split into
    nonnegative pairs, inequalities receive slack/surplus columns, rows are
    sign-normalised to a nonnegative right-hand side, and artificial columns
    are added wherever no unit column is available for the initial basis.
    """

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.variable_count
        m = len(lp.constraints)

        # Structural columns: ("shift", col) or ("split", pos_col, neg_col).
        self.var_cols = []
        col = 0
        for lb in lp.lower_bounds:
            if lb is None:
                self.var_cols.append(("split", col, col + 1))
                col += 2
            else:
                self.var_cols.append(("shift", col))
                col += 1
        n_struct = col

        shifted_bounds = []
        for con in lp.constraints:
            shift = ZERO
            for a, lb in zip(con.coeffs, lp.lower_bounds):
                if lb is not None and a and lb:
                    shift += a * lb
            shifted_bounds.append(con.bound - shift)

        # Sign normalisation sigma and slack/surplus column bookkeeping.
        self.sigma = []
        slack_cols = [None] * m
        need_artificial = []
        for r, con in enumerate(lp.constraints):
            b = shifted_bounds[r]
            if con.relation == LESS_EQ:
                sigma = ONE if b >= 0 else -ONE
                slack_cols[r] = col
                col += 1
                need_artificial.append(b < 0)
            elif con.relation == GREATER_EQ:
                sigma = -ONE if b <= 0 else ONE
                slack_cols[r] = col
                col += 1
                need_artificial.append(b > 0)
            else:
                sigma = ONE if b >= 0 else -ONE
                need_artificial.append(True)
            self.sigma.append(sigma)

        self.artificial_cols = []
        art_of_row = [None] * m
        for r in range(m):
            if need_artificial[r]:
                art_of_row[r] = col
                self.artificial_cols.append(col)
                col += 1

        self.ncols = col
        self.nrows = m
        self.is_artificial = [False] * col
        for c in self.artificial_cols:
            self.is_artificial[c] = True

        self.T = []
        self.rhs = []
        self.basis = []
        self.unit_col = []
        for r, con in enumerate(lp.constraints):
            row = [ZERO] * col
            sigma = self.sigma[r]
            for j, a in enumerate(con.coeffs):
                if not a:
                    continue
                layout = self.var_cols[j]
                if layout[0] == "shift":
                    row[layout[1]] = sigma * a
                else:
                    row[layout[1]] = sigma * a
                    row[layout[2]] = -sigma * a
            if slack_cols[r] is not None:
                unit = ONE if con.relation == LESS_EQ else -ONE
                row[slack_cols[r]] = sigma * unit
            art = art_of_row[r]
            if art is not None:
                row[art] = ONE
                self.unit_col.append(art)
                self.basis.append(art)
            else:
                # slack/surplus column has coefficient +1 after normalisation
                self.unit_col.append(slack_cols[r])
                self.basis.append(slack_cols[r])
            self.T.append(row)
            self.rhs.append(sigma * shifted_bounds[r])

        self.red = [ZERO] * col
        self.objval = ZERO
        self._forbid_none = [False] * col

    # -- simplex machinery -------------------------------------------------

    def _price_out(self, costs):
        red = list(costs)
        objval = ZERO
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if cb:
                row = self.T[i]
                for j, v in enumerate(row):
                    if v:
                        red[j] -= cb * v
                objval += cb * self.rhs[i]
        self.red = red
        self.objval = objval

    def _pivot(self, r, c):
        prow = self.T[r]
        piv = prow[c]
        if piv != 1:
            prow = [v / piv for v in prow]
            self.T[r] = prow
            self.rhs[r] = self.rhs[r] / piv
        nz = [j for j, v in enumerate(prow) if v]
        prhs = self.rhs[r]
        for i in range(self.nrows):
            if i == r:
                continue
            f = self.T[i][c]
            if f:
                row = self.T[i]
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[i] -= f * prhs
        f = self.red[c]
        if f:
            red = self.red
            for j in nz:
                red[j] -= f * prow[j]
            self.objval += f * prhs
        self.basis[r] = c

    def _run(self, forbidden):
        """Bland's rule: enter at the smallest improving column, leave at the
        smallest-index basic variable among minimum ratios."""
        while True:
            enter = -1
            red = self.red
            for j in range(self.ncols):
                if red[j] > 0 and not forbidden[j]:
                    enter = j
                    break
            if enter < 0:
                return None
            best = None
            leave_row = -1
            leave_col = -1
            for i in range(self.nrows):
                a = self.T[i][enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < leave_col)
                    ):
                        best = ratio
                        leave_row = i
                        leave_col = self.basis[i]
            if leave_row < 0:
                return enter
            self._pivot(leave_row, enter)

    def phase_one(self) -> Optional[Infeasible]:
        if not self.artificial_cols:
            return None
        costs = [ZERO] * self.ncols
        for c in self.artificial_cols:
            costs[c] = -ONE
        self._price_out(costs)
        unbounded = self._run(self._forbid_none)
        if unbounded is not None:
            raise RuntimeError("internal simplex error: phase 1 cannot be unbounded")
        if self.objval < 0:
            return self._extract_infeasibility()
        self._drive_out_artificials()
        return None

    def _drive_out_artificials(self):
        for i in range(self.nrows):
            if not self.is_artificial[self.basis[i]]:
                continue
            row = self.T[i]
            for j in range(self.ncols):
                if not self.is_artificial[j] and row[j]:
                    self._pivot(i, j)
                    break
            # Rows left basic in an artificial are redundant 0 = 0 rows: all
            # non-artificial coefficients are zero and stay so under pivots.

    def phase_two(self) -> LpOutcome:
        costs = [ZERO] * self.ncols
        for j, c in enumerate(self.lp.objective):
            if not c:
                continue
            layout = self.var_cols[j]
            if layout[0] == "shift":
                costs[layout[1]] += c
            else:
                costs[layout[1]] += c
                costs[layout[2]] -= c
        self._price_out(costs)
        enter = self._run(self.is_artificial)
        if enter is not None:
            return self._extract_ray(enter)
        point = self.current_point()
        if not self.lp.is_feasible_point(point):
            raise RuntimeError("internal simplex error: optimal point fails exact recheck")
        value = sum((c * x for c, x in zip(self.lp.objective, point)), ZERO)
        return Optimal(value=value, point=tuple(point))

    # -- outcome extraction ------------------------------------------------

    def current_point(self):
        col_val = [ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            col_val[b] = self.rhs[i]
        point = []
        for j, layout in enumerate(self.var_cols):
            if layout[0] == "shift":
                point.append(self.lp.lower_bounds[j] + col_val[layout[1]])
            else:
                point.append(col_val[layout[1]] - col_val[layout[2]])
        return point

    def _extract_ray(self, enter) -> Unbounded:
        dcol = [ZERO] * self.ncols
        dcol[enter] = ONE
        for i, b in enumerate(self.basis):
            dcol[b] = -self.T[i][enter]
        ray = []
        for layout in self.var_cols:
            if layout[0] == "shift":
                ray.append(dcol[layout[1]])
            else:
                ray.append(dcol[layout[1]] - dcol[layout[2]])
        lp = self.lp
        gain = sum((c * d for c, d in zip(lp.objective, ray)), ZERO)
        ok = gain > 0
        for con in lp.constraints:
            drift = sum((a * d for a, d in zip(con.coeffs, ray)), ZERO)
            if con.relation == LESS_EQ:
                ok = ok and drift <= 0
            elif con.relation == GREATER_EQ:
                ok = ok and drift >= 0
            else:
                ok = ok and drift == 0
        for d, lb in zip(ray, lp.lower_bounds):
            if lb is not None:
                ok = ok and d >= 0
        if not ok:
            raise RuntimeError("internal simplex error: unbounded ray fails exact recheck")
        return Unbounded(ray=tuple(ray))

    def _extract_infeasibility(self) -> Infeasible:
        # Phase-1 duals, recovered from the reduced costs of the unit column
        # recorded for each row, then mapped back through sign normalisation.
        w = []
        for r in range(self.nrows):
            u = self.unit_col[r]
            phase1_cost = -ONE if self.is_artificial[u] else ZERO
            y_std = self.red[u] - phase1_cost
            w.append(self.sigma[r] * y_std)

        lp = self.lp
        cert = []
        for wr, con in zip(w, lp.constraints):
            if con.relation == GREATER_EQ:
                if wr < 0:
                    raise RuntimeError("internal simplex error: certificate sign (>=)")
                cert.append(wr)
            elif con.relation == LESS_EQ:
                if wr > 0:
                    raise RuntimeError("internal simplex error: certificate sign (<=)")
                cert.append(-wr)
            else:
                cert.append(wr if wr > 0 else ZERO)
                cert.append(-wr if wr < 0 else ZERO)
        for j, lb in enumerate(lp.lower_bounds):
            aggregated = sum(
                (wr * con.coeffs[j] for wr, con in zip(w, lp.constraints)),
                ZERO,
            )
            if lb is None:
                if aggregated != 0:
                    raise RuntimeError("internal simplex error: free-variable certificate")
            else:
                if aggregated > 0:
                    raise RuntimeError("internal simplex error: certificate sign (bound)")
                cert.append(-aggregated)
        outcome = Infeasible(farkas_certificate=tuple(cert))
        if not verify_farkas_certificate(lp, outcome.farkas_certificate):
            raise RuntimeError("internal simplex error: Farkas certificate fails exact recheck")
        return outcome
