"""Independent reference computations used to freeze and cross-check expected values.

Nothing here imports the solver or the coupling LP builder: vertex
enumeration walks every column subset directly, and the coupling polytope is
rebuilt from first principles.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional, Sequence


def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    """Gauss-Jordan on a square system; None if singular."""
    n = len(a)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[-1] for row in m]


def independent_rows(a: list[list[Fraction]], b: list[Fraction]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """A maximal linearly independent subset of the rows of [a | b] restricted to a.

    Raises if a dropped row is inconsistent (then the system has no solution).
    """
    basis: list[list[Fraction]] = []  # echelon copies
    keep = []
    for i, row in enumerate(a):
        vec = list(row) + [b[i]]
        for e in basis:
            lead = next(j for j, v in enumerate(e) if v != 0)
            if vec[lead] != 0:
                f = vec[lead] / e[lead]
                vec = [x - f * y for x, y in zip(vec, e)]
        if any(v != 0 for v in vec[:-1]):
            basis.append(vec)
            keep.append(i)
        elif vec[-1] != 0:
            raise ValueError("inconsistent equality system")
    return [list(a[i]) for i in keep], [b[i] for i in keep]


def vertex_enumeration_max(
    a: Sequence[Sequence], b: Sequence, c: Sequence
) -> tuple[Optional[Fraction], int]:
    """Max of c.x over {x >= 0 : a x = b} by enumerating every basic feasible solution.

    Returns ``(optimum, number_of_vertices)``; optimum is None when the set is
    empty.  Assumes the feasible set is bounded.  Columns that appear with a
    positive coefficient in a zero-rhs row of a nonnegative matrix are dropped
    first (they vanish at every feasible point), which keeps coupling
    polytopes with sparse supports enumerable.
    """
    a = [[Fraction(v) for v in row] for row in a]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    n = len(c)
    dead = set()
    for row, rhs in zip(a, b):
        if rhs == 0 and all(v >= 0 for v in row):
            dead.update(j for j, v in enumerate(row) if v > 0)
    cols = [j for j in range(n) if j not in dead]
    sub = [[row[j] for j in cols] for row in a]
    try:
        sub, rhs = independent_rows(sub, b)
    except ValueError:
        return None, 0
    r = len(sub)
    best: Optional[Fraction] = None
    vertices = set()
    if r == 0:
        return (Fraction(0), 1) if all(v == 0 for v in b) else (None, 0)
    for subset in itertools.combinations(range(len(cols)), r):
        mat = [[row[k] for k in subset] for row in sub]
        x = _solve_square(mat, rhs)
        if x is None or any(v < 0 for v in x):
            continue
        full = [Fraction(0)] * n
        for k, v in zip(subset, x):
            full[cols[k]] = v
        vertices.add(tuple(full))
        val = sum(ci * xi for ci, xi in zip(c, full))
        if best is None or val > best:
            best = val
    return best, len(vertices)


def coupling_polytope(contexts: Sequence[tuple[str, Sequence[str], dict]]):
    """Rows/rhs/agreement-count objective of the coupling polytope, built from scratch.

    ``contexts`` is ``[(label, contents, pmf)]`` with pmf keyed by +1/-1 tuples.
    Slots are ordered by first appearance, not canonically, so the column
    order differs from the library's.
    """
    slots = [(q, c) for c, qs, _ in contexts for q in qs]
    atoms = list(itertools.product((1, -1), repeat=len(slots)))
    rows, rhs = [], []
    for c, qs, pmf in contexts:
        idx = [slots.index((q, c)) for q in qs]
        for key in itertools.product((1, -1), repeat=len(qs)):
            rows.append([1 if tuple(atom[i] for i in idx) == key else 0 for atom in atoms])
            rhs.append(Fraction(pmf.get(key, 0)))
    rows.append([1] * len(atoms))
    rhs.append(Fraction(1))
    pairs = [
        (slots.index((q, c1)), slots.index((q, c2)))
        for (c1, qs1, _), (c2, qs2, _) in itertools.combinations(contexts, 2)
        for q in qs1
        if q in qs2
    ]
    obj = [sum(1 for i, j in pairs if atom[i] == atom[j]) for atom in atoms]
    return rows, rhs, obj


def pair_coupling_max(p1, p2) -> Fraction:
    """Max Pr[X = Y] over the 4-atom coupling polytope of two +1/-1 variables."""
    p1, p2 = Fraction(p1), Fraction(p2)
    # atoms ++, +-, -+, --
    rows = [[1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]
    best, _ = vertex_enumeration_max(rows, [p1, p2, 1], [1, 0, 0, 1])
    return best


def sz_brute(e1, e2, e3) -> Fraction:
    """Odd-minus maximum written out term by term."""
    return max(-e1 + e2 + e3, e1 - e2 + e3, e1 + e2 - e3, -e1 - e2 - e3)
