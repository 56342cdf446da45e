"""Exact linear programming over the rationals.

Solves ``maximize c.x subject to A x = b, x >= 0`` with a dense two-phase
primal simplex.  Arithmetic is exact (integer rows over per-row
denominators, results as :class:`fractions.Fraction`), so the optimum, the
solution vector and the feasibility verdict are exact.  Leaving variables
are chosen by minimum ratio with least-index tie breaking; entering
variables fall back to Bland's least-index rule on long degenerate runs, so
the method terminates on degenerate problems.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

__all__ = [
    "LinearProgram",
    "LpResult",
    "LpStructureError",
    "Status",
    "check_solution",
    "solve",
]


class LpStructureError(ValueError):
    """Raised for malformed programs (dimension mismatches), never for infeasibility."""


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _frac_vector(values: Sequence, what: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise LpStructureError(f"{what}: non-rational entry ({exc})") from None


@dataclass(frozen=True)
class LinearProgram:
    """``maximize objective . x`` s.t. ``constraints @ x == rhs`` and ``x >= 0``.

    Entries may be given as ints, strings or Fractions; they are stored as
    Fractions.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        objective = _frac_vector(self.objective, "objective")
        rows = tuple(_frac_vector(row, f"constraint row {i}") for i, row in enumerate(self.constraints))
        rhs = _frac_vector(self.rhs, "rhs")
        n = len(objective)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise LpStructureError(f"constraint row {i} has {len(row)} entries, expected {n}")
        if len(rhs) != len(rows):
            raise LpStructureError(f"rhs has {len(rhs)} entries for {len(rows)} constraint rows")
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "constraints", rows)
        object.__setattr__(self, "rhs", rhs)

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpResult:
    status: Status
    optimum: Optional[Fraction] = None
    solution: Optional[tuple[Fraction, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def check_solution(lp: LinearProgram, x: Sequence) -> bool:
    """True iff ``x >= 0`` and ``A x == b`` hold exactly."""
    if len(x) != lp.num_vars:
        raise LpStructureError(f"solution has {len(x)} entries, program has {lp.num_vars} variables")
    xs = [Fraction(v) for v in x]
    if any(v < 0 for v in xs):
        return False
    for row, b in zip(lp.constraints, lp.rhs):
        if sum((a * v for a, v in zip(row, xs) if a and v), Fraction(0)) != b:
            return False
    return True


DEGENERATE_STREAK = 50


class _Tableau:
    """Fraction-free simplex tableau.

    Row ``i`` is stored as integers ``rows[i]`` over a positive denominator
    ``dens[i]`` and reads ``x[basis[i]] + sum(rows[i][j] / dens[i] * x_j) =
    rows[i][-1] / dens[i]``.  The reduced-cost row is ``cost / cost_den``
    with ``cost[-1]`` holding minus the current objective value.
    """

    def __init__(self, rows: list[list[int]], dens: list[int], basis: list[int]):
        self.rows = rows
        self.dens = dens
        self.basis = basis
        self.cost: list[int] = []
        self.cost_den = 1

    def set_objective(self, c: Sequence[Fraction]) -> None:
        width = len(self.rows[0])
        cb = [c[b] if b < len(c) else Fraction(0) for b in self.basis]
        den = 1
        for v in c:
            den = lcm(den, v.denominator)
        for v, d in zip(cb, self.dens):
            if v:
                den = lcm(den, v.denominator * d)
        cost = [int(v * den) for v in c] + [0] * (width - len(c))
        for v, d, row in zip(cb, self.dens, self.rows):
            if v:
                k = v.numerator * (den // (v.denominator * d))
                cost = [a - k * b for a, b in zip(cost, row)]
        self.cost, self.cost_den = _reduce(cost, den)

    def pivot(self, r: int, col: int) -> None:
        prow = self.rows[r]
        p = prow[col]
        if p < 0:
            prow = [-a for a in prow]
            p = -p
        prow, pden = _reduce(prow, p)
        self.rows[r], self.dens[r] = prow, pden
        for i, row in enumerate(self.rows):
            f = row[col]
            if i == r or not f:
                continue
            self.rows[i], self.dens[i] = _reduce(
                [a * pden - f * b for a, b in zip(row, prow)], self.dens[i] * pden
            )
        f = self.cost[col]
        if f:
            self.cost, self.cost_den = _reduce(
                [a * pden - f * b for a, b in zip(self.cost, prow)], self.cost_den * pden
            )
        self.basis[r] = col

    def run(self, allowed: int) -> bool:
        """Iterate to optimality over columns ``< allowed``; False if unbounded.

        Entering columns follow the largest-coefficient rule until
        ``DEGENERATE_STREAK`` consecutive degenerate pivots occur; from then
        on Bland's least-index rule is used, which cannot cycle.  Cycling
        needs an unbroken run of degenerate pivots, so the switch guarantees
        termination.
        """
        bland = False
        streak = 0
        while True:
            cost = self.cost
            if bland:
                col = next((j for j in range(allowed) if cost[j] > 0), None)
            else:
                top = max(cost[:allowed], default=0)
                col = cost.index(top) if top > 0 else None
            if col is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    key = (Fraction(row[-1], a), self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            if best[0][0] == 0:
                streak += 1
                if streak >= DEGENERATE_STREAK:
                    bland = True
            else:
                streak = 0
            self.pivot(best[1], col)


def _reduce(row: list[int], den: int) -> tuple[list[int], int]:
    g = gcd(den, *row)
    if g > 1:
        return [a // g for a in row], den // g
    return row, den


def _forced_zero(lp: LinearProgram) -> set[int]:
    """Columns that every feasible point sets to zero.

    A row ``sum(a_j x_j) = 0`` whose nonzero coefficients share one sign
    forces each of those ``x_j`` to zero under ``x >= 0``.  Removing them can
    expose further such rows, so iterate to a fixed point.
    """
    fixed: set[int] = set()
    changed = True
    while changed:
        changed = False
        for row, b in zip(lp.constraints, lp.rhs):
            if b:
                continue
            live = [j for j, a in enumerate(row) if a and j not in fixed]
            if live and (all(row[j] > 0 for j in live) or all(row[j] < 0 for j in live)):
                fixed.update(live)
                changed = True
    return fixed


def solve(lp: LinearProgram) -> LpResult:
    """Exact optimum of ``lp``.

    Columns forced to zero by sign-definite zero rows are removed first.
    Phase one minimises the sum of artificial variables; a positive minimum
    proves infeasibility.  Artificials left in the basis at zero are pivoted
    out, and rows where that is impossible are dropped as redundant.
    """
    zero = Fraction(0)
    fixed = _forced_zero(lp)
    keep = [j for j in range(lp.num_vars) if j not in fixed]
    if fixed:
        reduced = LinearProgram(
            tuple(lp.objective[j] for j in keep),
            tuple(tuple(row[j] for j in keep) for row in lp.constraints),
            lp.rhs,
        )
        res = _simplex(reduced)
        if res.status is not Status.OPTIMAL:
            return res
        x = [zero] * lp.num_vars
        for j, v in zip(keep, res.solution):
            x[j] = v
        return LpResult(Status.OPTIMAL, res.optimum, tuple(x))
    return _simplex(lp)


def _simplex(lp: LinearProgram) -> LpResult:
    zero = Fraction(0)
    n = lp.num_vars
    m = len(lp.constraints)

    rows: list[list[int]] = []
    dens: list[int] = []
    for i, (row, b) in enumerate(zip(lp.constraints, lp.rhs)):
        # scale to integers; the artificial column carries the scale so it reads 1
        s = 1
        for v in row:
            s = lcm(s, v.denominator)
        s = lcm(s, b.denominator)
        if b < 0:
            s = -s
        art = [0] * m
        art[i] = abs(s)
        rows.append([int(a * s) for a in row] + art + [int(b * s)])
        dens.append(abs(s))
    tab = _Tableau(rows, dens, [n + i for i in range(m)])

    if m:
        tab.set_objective([zero] * n + [Fraction(-1)] * m)
        tab.run(n + m)
        if tab.cost[-1] != 0:
            return LpResult(Status.INFEASIBLE)
        # drive zero-level artificials out of the basis
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] >= n:
                row = tab.rows[r]
                col = next((j for j in range(n) if row[j]), None)
                if col is None:
                    del tab.rows[r]
                    del tab.dens[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, col)
            r += 1
        for i, row in enumerate(tab.rows):
            tab.rows[i] = row[:n] + [row[-1]]

    if not tab.rows:
        # no constraints left: x = 0 is the only vertex candidate
        if any(c > 0 for c in lp.objective):
            return LpResult(Status.UNBOUNDED)
        return LpResult(Status.OPTIMAL, zero, tuple([zero] * n))

    tab.set_objective(lp.objective)
    if not tab.run(n):
        return LpResult(Status.UNBOUNDED)
    x = [zero] * n
    for i, b in enumerate(tab.basis):
        x[b] = Fraction(tab.rows[i][-1], tab.dens[i])
    optimum = sum((c * v for c, v in zip(lp.objective, x) if c and v), zero)
    return LpResult(Status.OPTIMAL, optimum, tuple(x))
