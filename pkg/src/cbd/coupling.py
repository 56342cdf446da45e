"""Couplings of a system and the linear programs over them.

A coupling assigns one joint distribution to every (content, context) slot
of a system such that each context's own joint distribution is reproduced
by marginalization.  With K slots the couplings form a polytope inside the
simplex over the 2^K global +1/-1 assignments, so the contextuality
questions reduce to exact LPs over that polytope:

* ``max_delta``: the largest achievable sum, over connection pairs, of the
  probability that the two same-content slots agree;
* ``delta0``: the sum of the pairwise maxima achievable one pair at a time;
* the system is noncontextual iff both coincide, and ``delta0 - max_delta``
  measures how far it is from that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .lp import LinearProgram, Status, solve
from .system import VALUES, ConnectionPair, System, is_consistently_connected, plus_probability

__all__ = [
    "DEFAULT_MAX_SLOTS",
    "AnalysisResult",
    "CapacityError",
    "Coupling",
    "CouplingStructureError",
    "analyze",
    "build_coupling_lp",
    "canonical_slots",
    "connection_equality_probs",
    "coupling_delta",
    "delta0",
    "enumerate_assignments",
    "identically_connected_coupling",
    "independent_coupling",
    "max_delta",
    "max_pair_equal_prob",
    "verify_coupling",
]

DEFAULT_MAX_SLOTS = 16

Slot = tuple[str, str]
GlobalAssignment = tuple[int, ...]


class CapacityError(ValueError):
    def __init__(self, slots: int, cap: int):
        self.slots = slots
        self.cap = cap
        super().__init__(f"system has K={slots} slots, above the cap of {cap} (2^K coupling atoms)")


class CouplingStructureError(ValueError):
    pass


def canonical_slots(system: System) -> tuple[Slot, ...]:
    """Slots sorted by (content, context) label."""
    return tuple(sorted(system.slots))


@dataclass(frozen=True)
class Coupling:
    """Joint pmf over global assignments; ``pmf`` keys are value tuples aligned with ``slots``.

    Only atoms with positive probability need to be present.
    """

    system: System
    slots: tuple[Slot, ...]
    pmf: Mapping[GlobalAssignment, Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "slots", tuple(tuple(s) for s in self.slots))
        pmf = {tuple(k): Fraction(v) for k, v in dict(self.pmf).items()}
        object.__setattr__(self, "pmf", MappingProxyType(pmf))

    def atoms(self) -> list[tuple[GlobalAssignment, Fraction]]:
        """Positive-probability atoms in lexicographic order."""
        return sorted((a, p) for a, p in self.pmf.items() if p)

    def values(self, atom: GlobalAssignment) -> dict[Slot, int]:
        return dict(zip(self.slots, atom))

    def marginal(self, slots: Sequence[Slot]) -> dict[tuple[int, ...], Fraction]:
        pos = [self.slots.index(tuple(s)) for s in slots]
        out = {a: Fraction(0) for a in itertools.product(VALUES, repeat=len(pos))}
        for atom, p in self.pmf.items():
            if p:
                out[tuple(atom[i] for i in pos)] += p
        return out

    def equal_probability(self, pair: ConnectionPair) -> Fraction:
        i = self.slots.index((pair.content, pair.context_a))
        j = self.slots.index((pair.content, pair.context_b))
        return sum((p for a, p in self.pmf.items() if a[i] == a[j]), Fraction(0))


@dataclass(frozen=True)
class AnalysisResult:
    delta_max: Fraction
    delta0: Fraction
    measure: Fraction
    noncontextual: bool
    witness: Coupling


def _check_capacity(system: System, max_slots: int) -> int:
    system.require_valid()
    k = len(system.slots)
    if k > max_slots:
        raise CapacityError(k, max_slots)
    return k


def enumerate_assignments(system: System, max_slots: int = DEFAULT_MAX_SLOTS) -> list[GlobalAssignment]:
    """All 2^K global assignments over :func:`canonical_slots`, lexicographic with -1 first."""
    k = _check_capacity(system, max_slots)
    return list(itertools.product(VALUES, repeat=k))


def _program(system: System, objective: str, max_slots: int):
    if objective not in ("delta", "feasibility"):
        raise ValueError(f"objective must be 'delta' or 'feasibility', got {objective!r}")
    atoms = enumerate_assignments(system, max_slots)
    slots = canonical_slots(system)
    where = {s: i for i, s in enumerate(slots)}

    rows: list[list[int]] = []
    rhs: list[Fraction] = []
    for ctx in system.contexts:
        pos = [where[(q, ctx.context)] for q in ctx.contents]
        keys = list(itertools.product(VALUES, repeat=len(pos)))
        row_of = {key: len(rows) + i for i, key in enumerate(keys)}
        block = [[0] * len(atoms) for _ in keys]
        for j, atom in enumerate(atoms):
            block[row_of[tuple(atom[i] for i in pos)] - len(rows)][j] = 1
        rows.extend(block)
        rhs.extend(ctx.prob(key) for key in keys)
    rows.append([1] * len(atoms))
    rhs.append(Fraction(1))

    if objective == "delta":
        pairs = [
            (where[(p.content, p.context_a)], where[(p.content, p.context_b)])
            for p in system.connection_pairs
        ]
        cost = [sum(1 for i, j in pairs if atom[i] == atom[j]) for atom in atoms]
    else:
        cost = [0] * len(atoms)
    return atoms, slots, LinearProgram(tuple(cost), tuple(map(tuple, rows)), tuple(rhs))


def build_coupling_lp(
    system: System, objective: str = "delta", max_slots: int = DEFAULT_MAX_SLOTS
) -> LinearProgram:
    """LP whose variables are the probabilities of the global assignments.

    Rows: for each context (declaration order) one equality per value tuple
    of its contents, then the normalization row.  With ``objective="delta"``
    an atom's cost is the number of connection pairs whose slots agree in it.
    """
    return _program(system, objective, max_slots)[2]


def max_delta(system: System, max_slots: int = DEFAULT_MAX_SLOTS) -> tuple[Fraction, Coupling]:
    """Maximal connection-agreement sum over all couplings, with a coupling attaining it."""
    atoms, slots, lp = _program(system, "delta", max_slots)
    res = solve(lp)
    if res.status is not Status.OPTIMAL:
        # a valid system always has its independent coupling, and the objective is bounded by N
        raise RuntimeError(f"coupling LP unexpectedly {res.status.value}")
    pmf = {atom: x for atom, x in zip(atoms, res.solution) if x}
    return res.optimum, Coupling(system, slots, pmf)


def max_pair_equal_prob(p1, p2) -> Fraction:
    """Largest Pr[X = Y] over couplings of two +1/-1 variables with Pr[X=+1]=p1, Pr[Y=+1]=p2."""
    p1, p2 = Fraction(p1), Fraction(p2)
    for p in (p1, p2):
        if not 0 <= p <= 1:
            raise ValueError(f"probability {p} is outside [0, 1]")
    return 1 - abs(p1 - p2)


def delta0(system: System) -> Fraction:
    total = Fraction(0)
    for pair in system.connection_pairs:
        total += max_pair_equal_prob(
            plus_probability(system, pair.context_a, pair.content),
            plus_probability(system, pair.context_b, pair.content),
        )
    return total


def analyze(system: System, max_slots: int = DEFAULT_MAX_SLOTS) -> AnalysisResult:
    best, witness = max_delta(system, max_slots)
    d0 = delta0(system)
    measure = d0 - best
    return AnalysisResult(best, d0, measure, measure == 0, witness)


def identically_connected_coupling(
    system: System, max_slots: int = DEFAULT_MAX_SLOTS
) -> Optional[Coupling]:
    """A coupling in which every connection pair agrees with probability 1, or None."""
    _check_capacity(system, max_slots)
    if not is_consistently_connected(system)[0]:
        return None
    best, witness = max_delta(system, max_slots)
    if best != len(system.connection_pairs):
        return None
    return witness


def independent_coupling(system: System, max_slots: int = DEFAULT_MAX_SLOTS) -> Coupling:
    """Product coupling: contexts mutually independent, each keeping its own distribution."""
    _check_capacity(system, max_slots)
    slots = canonical_slots(system)
    where = {s: i for i, s in enumerate(slots)}
    pmf: dict[GlobalAssignment, Fraction] = {}
    supports = [[(key, ctx.prob(key)) for key in ctx.support()] for ctx in system.contexts]
    for combo in itertools.product(*supports):
        atom = [0] * len(slots)
        p = Fraction(1)
        for ctx, (key, pk) in zip(system.contexts, combo):
            p *= pk
            for q, v in zip(ctx.contents, key):
                atom[where[(q, ctx.context)]] = v
        pmf[tuple(atom)] = p
    return Coupling(system, slots, pmf)


def verify_coupling(system: System, coupling: Coupling) -> bool:
    """True iff ``coupling`` is a distribution whose per-context marginals match ``system`` exactly."""
    if sorted(coupling.slots) != sorted(system.slots) or len(set(coupling.slots)) != len(coupling.slots):
        raise CouplingStructureError("coupling slots do not match the system's slots")
    for atom in coupling.pmf:
        if len(atom) != len(coupling.slots) or any(v not in VALUES for v in atom):
            raise CouplingStructureError(f"malformed atom {atom!r}")
    if any(p < 0 for p in coupling.pmf.values()):
        return False
    if sum(coupling.pmf.values(), Fraction(0)) != 1:
        return False
    for ctx in system.contexts:
        marg = coupling.marginal([(q, ctx.context) for q in ctx.contents])
        for key, p in marg.items():
            if p != ctx.prob(key):
                return False
    return True


def connection_equality_probs(coupling: Coupling) -> dict[ConnectionPair, Fraction]:
    return {pair: coupling.equal_probability(pair) for pair in coupling.system.connection_pairs}


def coupling_delta(coupling: Coupling) -> Fraction:
    return sum(connection_equality_probs(coupling).values(), Fraction(0))
