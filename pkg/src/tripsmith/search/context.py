"""Query context: the trip header plus whatever the constraints tell us.

The planner and the rankers never re-parse constraint programs during search;
everything they may exploit (required cuisine/type/feature terms, a budget
bound, a forced transport mode) is collected here once. Contexts normally come
straight from a query skeleton; `context_from_sources` is a best-effort
fallback that mines the same hints out of bare DSL text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal

from ..sandbox import Dataset


@dataclass
class QueryContext:
    origin: str
    target: str
    days: int
    people: int
    raw_text: str = ""
    required_intercity_kind: str | None = None    # train | airplane
    required_innercity_mode: str | None = None    # walk | metro | taxi
    required_cuisines: list[str] = field(default_factory=list)
    required_attraction_types: list[str] = field(default_factory=list)
    required_hotel_features: list[str] = field(default_factory=list)
    required_pois: list[str] = field(default_factory=list)
    required_rooms: int | None = None
    required_room_type: int | None = None
    budget_limit: Decimal | None = None

    def required_terms(self) -> list[str]:
        return (
            self.required_cuisines
            + self.required_attraction_types
            + self.required_hotel_features
            + self.required_pois
        )


_BUDGET_RE = re.compile(r"<=\s*(\d+(?:\.\d+)?)")
_STRING_RE = re.compile(r"""["']([^"']+)["']""")


def context_from_sources(
    sources: list[str],
    dataset: Dataset,
    origin: str,
    target: str,
    days: int,
    people: int,
) -> QueryContext:
    """Mine ranking hints from constraint text; unknown literals are ignored."""
    ctx = QueryContext(origin=origin, target=target, days=days, people=people,
                       raw_text="\n".join(sources))
    db = dataset[target] if target in dataset else None
    cuisines = {row["cuisinetype"] for row in db.restaurants} if db else set()
    attr_types = {row["type"] for row in db.attractions} if db else set()
    features = {row["featurehoteltype"] for row in db.hotels} if db else set()
    poi_names = set(db.poi_coordinates) if db else set()

    for source in sources:
        if "activity_cost" in source:
            match = _BUDGET_RE.search(source)
            if match:
                bound = Decimal(match.group(1))
                if ctx.budget_limit is None or bound < ctx.budget_limit:
                    ctx.budget_limit = bound
        for literal in _STRING_RE.findall(source):
            if literal in ("train", "airplane") and "intercity_transport_type" in source:
                ctx.required_intercity_kind = literal
            elif literal in ("walk", "metro", "taxi") and "innercity_transport_type" in source:
                ctx.required_innercity_mode = literal
            elif literal in cuisines and literal not in ctx.required_cuisines:
                ctx.required_cuisines.append(literal)
            elif literal in attr_types and literal not in ctx.required_attraction_types:
                ctx.required_attraction_types.append(literal)
            elif literal in features and literal not in ctx.required_hotel_features:
                ctx.required_hotel_features.append(literal)
            elif literal in poi_names and literal not in ctx.required_pois:
                ctx.required_pois.append(literal)
    return ctx
