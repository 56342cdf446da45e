"""Systems of dichotomous random variables labelled by content and context.

A system is a list of contexts.  Each context names an ordered list of
contents and gives the joint distribution of the corresponding +1/-1
variables as a map from value tuples (in the declared content order) to
exact probabilities.  Missing tuples have probability zero.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

__all__ = [
    "VALUES",
    "ConnectionPair",
    "ConsistencyViolation",
    "ContextDistribution",
    "InvalidSystemError",
    "System",
    "connected_components",
    "context_graph",
    "correlation",
    "is_consistently_connected",
    "marginal",
    "plus_probability",
    "validate",
]

VALUES = (-1, 1)

Assignment = tuple[int, ...]


class InvalidSystemError(ValueError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("invalid system: " + "; ".join(self.violations))


@dataclass(frozen=True)
class ContextDistribution:
    context: str
    contents: tuple[str, ...]
    pmf: Mapping[Assignment, Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "contents", tuple(self.contents))
        pmf = {tuple(k): Fraction(v) for k, v in dict(self.pmf).items()}
        object.__setattr__(self, "pmf", MappingProxyType(pmf))

    def prob(self, values: Assignment) -> Fraction:
        return self.pmf.get(tuple(values), Fraction(0))

    def support(self) -> list[Assignment]:
        """Assignments with positive probability, in canonical order (-1 before +1)."""
        return [a for a in itertools.product(VALUES, repeat=len(self.contents)) if self.prob(a) > 0]

    def index(self, content: str) -> int:
        try:
            return self.contents.index(content)
        except ValueError:
            raise KeyError(f"content {content!r} is not in context {self.context!r}") from None


class ConnectionPair(NamedTuple):
    """Two contexts sharing a content; ``context_a`` precedes ``context_b`` in declaration order."""

    content: str
    context_a: str
    context_b: str


class ConsistencyViolation(NamedTuple):
    content: str
    context_a: str
    context_b: str
    plus_a: Fraction
    plus_b: Fraction


@dataclass(frozen=True)
class System:
    """Contexts in declaration order.

    ``declared_contents`` is the content set as written in a system file, if
    any; :func:`validate` checks it against the contents actually used.
    """

    contexts: tuple[ContextDistribution, ...]
    declared_contents: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "contexts", tuple(self.contexts))
        if self.declared_contents is not None:
            object.__setattr__(self, "declared_contents", tuple(self.declared_contents))

    @classmethod
    def from_dict(cls, spec: Mapping[str, tuple[Sequence[str], Mapping]]) -> "System":
        """Build from ``{context: (contents, pmf)}``; pmf values may be strings like ``"1/4"``."""
        return cls(tuple(ContextDistribution(c, tuple(qs), pmf) for c, (qs, pmf) in spec.items()))

    @cached_property
    def contents(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for ctx in self.contexts:
            for q in ctx.contents:
                seen.setdefault(q, None)
        return tuple(seen)

    @cached_property
    def context_ids(self) -> tuple[str, ...]:
        return tuple(ctx.context for ctx in self.contexts)

    @cached_property
    def connections(self) -> dict[str, tuple[str, ...]]:
        conn: dict[str, list[str]] = defaultdict(list)
        for ctx in self.contexts:
            for q in ctx.contents:
                conn[q].append(ctx.context)
        return {q: tuple(conn[q]) for q in self.contents}

    @cached_property
    def slots(self) -> tuple[tuple[str, str], ...]:
        return tuple((q, ctx.context) for ctx in self.contexts for q in ctx.contents)

    @cached_property
    def connection_pairs(self) -> tuple[ConnectionPair, ...]:
        return tuple(
            ConnectionPair(q, a, b)
            for q in self.contents
            for a, b in itertools.combinations(self.connections[q], 2)
        )

    def context(self, label: str) -> ContextDistribution:
        for ctx in self.contexts:
            if ctx.context == label:
                return ctx
        raise KeyError(f"unknown context {label!r}")

    def require_valid(self) -> "System":
        problems = validate(self)
        if problems:
            raise InvalidSystemError(problems)
        return self


def validate(system: System) -> list[str]:
    """Every invariant violation as a message; an empty list means valid."""
    out: list[str] = []
    if not system.contexts:
        out.append("system has no contexts")
    labels = [ctx.context for ctx in system.contexts]
    for label in sorted({l for l in labels if labels.count(l) > 1}):
        out.append(f"context {label!r} is declared more than once")
    for ctx in system.contexts:
        name = f"context {ctx.context!r}"
        if not isinstance(ctx.context, str) or not ctx.context:
            out.append(f"{name}: label must be a nonempty string")
        if not ctx.contents:
            out.append(f"{name}: has no contents")
        for q in ctx.contents:
            if not isinstance(q, str) or not q:
                out.append(f"{name}: content labels must be nonempty strings, got {q!r}")
        for q in sorted({q for q in ctx.contents if ctx.contents.count(q) > 1}):
            out.append(f"{name}: content {q!r} appears more than once")
        bad_keys = False
        for key, p in ctx.pmf.items():
            if len(key) != len(ctx.contents) or any(v not in VALUES for v in key):
                bad_keys = True
                out.append(
                    f"{name}: assignment {key!r} is not a +1/-1 tuple of length {len(ctx.contents)}"
                    " (categorical variables must be dichotomized first)"
                )
            if p < 0:
                out.append(f"{name}: negative probability {p} for assignment {key!r}")
        total = sum(ctx.pmf.values(), Fraction(0))
        if not bad_keys and total != 1:
            out.append(f"{name}: probabilities sum to {total}, not 1")
    if system.declared_contents is not None:
        declared = system.declared_contents
        for q in sorted({q for q in declared if declared.count(q) > 1}):
            out.append(f"content {q!r} is declared more than once")
        used = set(system.contents)
        for q in declared:
            if q not in used:
                out.append(f"content {q!r} appears in no context")
        for q in system.contents:
            if q not in declared:
                out.append(f"content {q!r} is used but not declared")
    return out


def marginal(system: System, context: str, contents: Sequence[str]) -> dict[Assignment, Fraction]:
    """Joint distribution of ``contents`` within ``context``, over all of {-1,+1}^|contents|."""
    ctx = system.context(context)
    if not contents:
        raise ValueError("marginal needs at least one content")
    idx = [ctx.index(q) for q in contents]
    out = {a: Fraction(0) for a in itertools.product(VALUES, repeat=len(idx))}
    for key, p in ctx.pmf.items():
        if p:
            out[tuple(key[i] for i in idx)] += p
    return out


def plus_probability(system: System, context: str, content: str) -> Fraction:
    """Pr[R_q^c = +1]."""
    return marginal(system, context, [content])[(1,)]


def correlation(system: System, context: str, q1: str, q2: str) -> Fraction:
    """Product expectation <R_q1^c R_q2^c>."""
    if q1 == q2:
        raise ValueError("correlation needs two distinct contents")
    ctx = system.context(context)
    i, j = ctx.index(q1), ctx.index(q2)
    return sum((p * key[i] * key[j] for key, p in ctx.pmf.items()), Fraction(0))


def is_consistently_connected(system: System) -> tuple[bool, list[ConsistencyViolation]]:
    violations = []
    for pair in system.connection_pairs:
        pa = plus_probability(system, pair.context_a, pair.content)
        pb = plus_probability(system, pair.context_b, pair.content)
        if pa != pb:
            violations.append(ConsistencyViolation(pair.content, pair.context_a, pair.context_b, pa, pb))
    return not violations, violations


def context_graph(system: System) -> dict[str, set[str]]:
    """Adjacency sets: two contexts are adjacent iff they share a content."""
    graph: dict[str, set[str]] = {c: set() for c in system.context_ids}
    for pair in system.connection_pairs:
        graph[pair.context_a].add(pair.context_b)
        graph[pair.context_b].add(pair.context_a)
    return graph


def _components(graph: Mapping[str, Iterable[str]], order: Sequence[str]) -> list[list[str]]:
    seen: set[str] = set()
    comps = []
    for start in order:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            node = stack.pop()
            comp.append(node)
            for nb in graph[node]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        comps.append(comp)
    return comps


def connected_components(system: System) -> list[System]:
    """Subsystems induced by the components of the context graph, in declaration order."""
    order = system.context_ids
    comps = _components(context_graph(system), order)
    out = []
    for comp in comps:
        members = set(comp)
        out.append(System(tuple(ctx for ctx in system.contexts if ctx.context in members)))
    return out
