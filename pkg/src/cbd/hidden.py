"""Hidden-variable representations with context-independent response functions.

A model is a finite random variable H (the *support*, with probabilities)
plus one response table per content, ``f_q: support -> {-1, +1}``.  Because
the tables carry no context index, every system realized from a model is
consistently connected and noncontextual.  Conversely, an identically
connected coupling yields such a model whose hidden values are simply the
content-value profiles of its atoms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .coupling import Coupling
from .system import VALUES, ConnectionPair, ContextDistribution, System

__all__ = [
    "ContextHvModel",
    "HiddenVariableModel",
    "NotIdenticallyConnectedError",
    "context_specific_hv",
    "extract",
    "profile_label",
    "realize",
]

Layout = Sequence[tuple[str, Sequence[str]]]


class NotIdenticallyConnectedError(ValueError):
    def __init__(self, pair: ConnectionPair, probability: Fraction):
        self.pair = pair
        self.probability = probability
        super().__init__(
            f"coupling is not identically connected: content {pair.content!r} agrees between "
            f"{pair.context_a!r} and {pair.context_b!r} with probability {probability}, not 1"
        )


def profile_label(values: Sequence[int]) -> str:
    """``(1, -1, 1)`` -> ``"+-+"``."""
    return "".join("+" if v == 1 else "-" for v in values)


def _check_tables(support, probabilities, responses) -> None:
    if len(support) != len(probabilities):
        raise ValueError("support and probabilities differ in length")
    if len(set(support)) != len(support):
        raise ValueError("hidden values must be distinct")
    if any(p < 0 for p in probabilities):
        raise ValueError("negative hidden-variable probability")
    if sum(probabilities, Fraction(0)) != 1:
        raise ValueError(f"hidden-variable probabilities sum to {sum(probabilities, Fraction(0))}, not 1")
    for q, table in responses.items():
        if len(table) != len(support):
            raise ValueError(f"response table for {q!r} has {len(table)} entries for {len(support)} hidden values")
        if any(v not in VALUES for v in table):
            raise ValueError(f"response table for {q!r} has values outside {{-1, +1}}")


def _pushforward(probabilities, responses, context: str, contents: Sequence[str]) -> ContextDistribution:
    pmf: dict[tuple[int, ...], Fraction] = {}
    for i, p in enumerate(probabilities):
        if p:
            key = tuple(responses[q][i] for q in contents)
            pmf[key] = pmf.get(key, Fraction(0)) + p
    return ContextDistribution(context, tuple(contents), pmf)


@dataclass(frozen=True)
class HiddenVariableModel:
    """Hidden values ``support`` with ``probabilities``; ``responses[q][i]`` is f_q(support[i]).

    ``layout`` optionally records the contexts the model was extracted from,
    so it can be realized again without restating them.
    """

    support: tuple[str, ...]
    probabilities: tuple[Fraction, ...]
    responses: Mapping[str, tuple[int, ...]]
    layout: Optional[tuple[tuple[str, tuple[str, ...]], ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "probabilities", tuple(Fraction(p) for p in self.probabilities))
        tables = {q: tuple(t) for q, t in dict(self.responses).items()}
        object.__setattr__(self, "responses", MappingProxyType(tables))
        if self.layout is not None:
            object.__setattr__(self, "layout", tuple((c, tuple(qs)) for c, qs in self.layout))
        _check_tables(self.support, self.probabilities, self.responses)

    @property
    def contents(self) -> tuple[str, ...]:
        return tuple(self.responses)


@dataclass(frozen=True)
class ContextHvModel:
    """Per-context hidden variable H_c with projections f_q^c for q in that context."""

    context: str
    support: tuple[tuple[int, ...], ...]
    probabilities: tuple[Fraction, ...]
    responses: Mapping[str, tuple[int, ...]]

    def __post_init__(self) -> None:
        _check_tables(self.support, self.probabilities, self.responses)

    def distribution(self) -> ContextDistribution:
        return _pushforward(self.probabilities, self.responses, self.context, tuple(self.responses))


def extract(coupling: Coupling) -> HiddenVariableModel:
    """Read a hidden-variable model off an identically connected coupling.

    Every positive atom assigns one value per content, so the atoms are
    content-value profiles; these become the hidden values and each f_q is
    the projection onto content q.
    """
    system = coupling.system
    for pair in system.connection_pairs:
        p = coupling.equal_probability(pair)
        if p != 1:
            raise NotIdenticallyConnectedError(pair, p)
    contents = tuple(sorted(system.contents))
    first_slot = {q: coupling.slots.index((q, system.connections[q][0])) for q in contents}
    mass: dict[tuple[int, ...], Fraction] = {}
    for atom, p in coupling.pmf.items():
        if p:
            profile = tuple(atom[first_slot[q]] for q in contents)
            mass[profile] = mass.get(profile, Fraction(0)) + p
    profiles = sorted(mass)
    return HiddenVariableModel(
        support=tuple(profile_label(pr) for pr in profiles),
        probabilities=tuple(mass[pr] for pr in profiles),
        responses={q: tuple(pr[k] for pr in profiles) for k, q in enumerate(contents)},
        layout=tuple((ctx.context, ctx.contents) for ctx in system.contexts),
    )


def realize(model: HiddenVariableModel, layout: Optional[Layout] = None) -> System:
    """System whose context c is the joint law of (f_q(H))_{q in c}."""
    if layout is None:
        if model.layout is None:
            raise ValueError("model carries no layout; pass one explicitly")
        layout = model.layout
    contexts = []
    for context, contents in layout:
        for q in contents:
            if q not in model.responses:
                raise KeyError(f"content {q!r} in context {context!r} has no response function")
        contexts.append(_pushforward(model.probabilities, model.responses, context, contents))
    return System(tuple(contexts))


def context_specific_hv(dist: ContextDistribution) -> ContextHvModel:
    """H_c taken as the context's own value tuple; f_q^c are the coordinate projections."""
    support = tuple(
        key for key in itertools.product(VALUES, repeat=len(dist.contents)) if dist.prob(key) > 0
    )
    return ContextHvModel(
        context=dist.context,
        support=support,
        probabilities=tuple(dist.prob(key) for key in support),
        responses={q: tuple(key[i] for key in support) for i, q in enumerate(dist.contents)},
    )
