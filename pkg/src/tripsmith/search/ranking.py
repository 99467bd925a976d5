"""Candidate ranking.

A ranker permutes (never filters) the candidate list for one expansion step.
The built-in heuristic mirrors how a frugal traveller would choose: anything
matching a term the query asked for comes first, and when a budget is in play
cheaper options are tried before expensive ones. All sorts are stable, so a
run is reproducible from (query, database) alone.
"""

from __future__ import annotations

from decimal import Decimal
from typing import Protocol

from ..sandbox import IntercityRoute
from .context import QueryContext
from .state import SearchState


class Ranker(Protocol):
    def rank(self, candidates: list, state: SearchState, context: QueryContext) -> list:
        ...


def _candidate_terms(candidate) -> list[str]:
    if isinstance(candidate, IntercityRoute):
        return [candidate.id, candidate.kind]
    terms = [candidate.get("name", "")]
    for key in ("cuisinetype", "type", "featurehoteltype", "recommendedfood"):
        if key in candidate:
            terms.append(str(candidate[key]))
    return terms


def _candidate_price(candidate) -> Decimal:
    if isinstance(candidate, IntercityRoute):
        return candidate.cost
    return candidate.get("price", Decimal("0"))


class HeuristicRanker:
    """Filter by required query terms, then price-ascending under a budget."""

    def rank(self, candidates: list, state: SearchState, context: QueryContext) -> list:
        required = context.required_terms()
        if required:
            matching, rest = [], []
            for candidate in candidates:
                terms = _candidate_terms(candidate)
                if any(req in term for req in required for term in terms):
                    matching.append(candidate)
                else:
                    rest.append(candidate)
            ordered = matching + rest
        else:
            ordered = list(candidates)
        if context.budget_limit is not None:
            ordered = sorted(ordered, key=_candidate_price)
        return ordered
