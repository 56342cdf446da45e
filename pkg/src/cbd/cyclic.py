"""Closed-form criterion for rank-3 cyclic systems.

A consistently connected system of three +1/-1 contents measured pairwise in
three contexts (each content in exactly two of them) is contextual iff

    max over sign patterns with an odd number of minuses of
        (+/- e1 +/- e2 +/- e3)  >  1,

where e1, e2, e3 are the within-context product expectations.  Higher-rank
cyclic systems are left to the general LP in :mod:`cbd.coupling`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .system import System, context_graph, correlation, is_consistently_connected

__all__ = [
    "ODD_SIGN_PATTERNS",
    "Cyclic3View",
    "CyclicPreconditionError",
    "cyclic3_contextual",
    "is_cyclic3",
    "suppes_zanotti_value",
]

ODD_SIGN_PATTERNS = ((-1, 1, 1), (1, -1, 1), (1, 1, -1), (-1, -1, -1))


class CyclicPreconditionError(ValueError):
    """The system is not a consistently connected rank-3 cyclic system; use ``analyze`` instead."""


@dataclass(frozen=True)
class Cyclic3View:
    """Product expectations of the three contexts, in context declaration order."""

    contexts: tuple[str, str, str]
    correlations: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self) -> None:
        corr = tuple(Fraction(e) for e in self.correlations)
        if len(corr) != 3 or any(not -1 <= e <= 1 for e in corr):
            raise ValueError(f"need three correlations in [-1, 1], got {self.correlations!r}")
        object.__setattr__(self, "correlations", corr)


def is_cyclic3(system: System) -> Optional[Cyclic3View]:
    """The correlation view if ``system`` has the rank-3 cyclic shape, else None.

    Detection is structural: labels are irrelevant, only the incidence
    pattern of contents and contexts matters.
    """
    if len(system.contexts) != 3 or len(system.contents) != 3:
        return None
    if any(len(ctx.contents) != 2 for ctx in system.contexts):
        return None
    if any(len(cs) != 2 for cs in system.connections.values()):
        return None
    graph = context_graph(system)
    if any(len(nb) != 2 for nb in graph.values()):
        return None
    corr = tuple(correlation(system, ctx.context, *ctx.contents) for ctx in system.contexts)
    return Cyclic3View(system.context_ids, corr)


def suppes_zanotti_value(view: Cyclic3View) -> Fraction:
    e = view.correlations
    return max(sum(s * x for s, x in zip(signs, e)) for signs in ODD_SIGN_PATTERNS)


def cyclic3_contextual(system: System) -> bool:
    view = is_cyclic3(system)
    if view is None:
        raise CyclicPreconditionError("system is not rank-3 cyclic; use analyze for the general LP test")
    consistent, violations = is_consistently_connected(system)
    if not consistent:
        v = violations[0]
        raise CyclicPreconditionError(
            f"system is not consistently connected (content {v.content!r}: "
            f"Pr[+1] is {v.plus_a} in {v.context_a!r} but {v.plus_b} in {v.context_b!r}); "
            "use analyze for the general LP test"
        )
    return suppes_zanotti_value(view) > 1
