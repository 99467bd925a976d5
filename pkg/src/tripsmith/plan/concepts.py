"""Built-in concept functions over plans and sandbox data.

These are the only primitives constraint programs may call. They are total:
absent optional fields fall back to 0, "", [] or -1 instead of raising, so a
malformed plan yields a failed comparison rather than a crashed validator.

Numbers are Decimals throughout; times are "HH:MM" strings.
"""

from __future__ import annotations

from decimal import Decimal
from typing import Callable

from ..errors import DslEvalError, NotFoundError
from ..sandbox import Dataset, goto
from ..timeutil import is_hhmm, to_minutes
from .model import Plan

ZERO = Decimal("0")
MINUS_ONE = Decimal("-1")


class ConceptContext:
    """Everything a concept call may consult besides its arguments."""

    def __init__(self, plan: Plan, dataset: Dataset | None):
        self.plan = plan
        self.dataset = dataset

    @property
    def city_list(self) -> list[str]:
        return self.dataset.city_names if self.dataset else []

    def city(self, name: str):
        if self.dataset is None or name not in self.dataset:
            raise DslEvalError(f"city {name!r} is not loaded")
        return self.dataset[name]


def _num(value) -> Decimal:
    return value if isinstance(value, Decimal) else Decimal(str(value))


def _plan_of(value) -> Plan:
    if not isinstance(value, Plan):
        raise DslEvalError("expected the plan as argument")
    return value


def _record_of(value) -> dict:
    if not isinstance(value, dict):
        raise DslEvalError("expected an activity record as argument")
    return value


def _legs_of(value) -> list:
    if not isinstance(value, list):
        raise DslEvalError("expected a transport-leg list as argument")
    return value


def _minutes_between(start: str, end: str) -> Decimal:
    return Decimal(to_minutes(end) - to_minutes(start))


# -- plan-level accessors ----------------------------------------------------

def day_count(ctx, plan):
    return Decimal(len(_plan_of(plan).itinerary))


def people_count(ctx, plan):
    return Decimal(_plan_of(plan).people_number)


def start_city(ctx, plan):
    return _plan_of(plan).start_city


def target_city(ctx, plan):
    return _plan_of(plan).target_city


def allactivities(ctx, plan):
    return _plan_of(plan).all_activities()


def allactivities_count(ctx, plan):
    return Decimal(sum(len(day.activities) for day in _plan_of(plan).itinerary))


def dayactivities(ctx, plan, day):
    days = _plan_of(plan).itinerary
    index = int(_num(day))
    if not 1 <= index <= len(days):
        return []
    return list(days[index - 1].activities)


# -- activity accessors ------------------------------------------------------

def activity_cost(ctx, activity):
    return _num(_record_of(activity).get("cost", 0))


def activity_position(ctx, activity):
    return _record_of(activity).get("position", "")


def activity_price(ctx, activity):
    return _num(_record_of(activity).get("price", 0))


def activity_type(ctx, activity):
    return _record_of(activity).get("type", "")


def activity_tickets(ctx, activity):
    return _num(_record_of(activity).get("tickets", 0))


def activity_transports(ctx, activity):
    return list(_record_of(activity).get("transports", []))


def activity_start_time(ctx, activity):
    return _record_of(activity).get("start_time", "") or ""


def activity_end_time(ctx, activity):
    return _record_of(activity).get("end_time", "") or ""


def activity_time(ctx, activity):
    act = _record_of(activity)
    start, end = act.get("start_time"), act.get("end_time")
    if start and end and is_hhmm(start) and is_hhmm(end):
        return _minutes_between(start, end)
    return MINUS_ONE


def room_count(ctx, activity):
    return _num(_record_of(activity).get("rooms", 0))


def room_type(ctx, activity):
    return _num(_record_of(activity).get("room_type", 0))


def intercity_transport_type(ctx, activity):
    return _record_of(activity).get("type", "")


def intercity_transport_origin(ctx, activity):
    act = _record_of(activity)
    if "start" in act:
        for city in ctx.city_list:
            if city in act["start"]:
                return city
    return ""


def intercity_transport_destination(ctx, activity):
    act = _record_of(activity)
    if "end" in act:
        for city in ctx.city_list:
            if city in act["end"]:
                return city
    return ""


# -- sandbox-backed lookups --------------------------------------------------

def poi_recommend_time(ctx, city, poi):
    db = ctx.city(str(city))
    for row in db.attractions:
        if row["name"] == poi:
            return _num(row["recommendmintime"]) * 60
    return MINUS_ONE


def poi_distance(ctx, city, poi1, poi2):
    db = ctx.city(str(city))
    try:
        option = goto(db, str(poi1), str(poi2), "00:00", "walk")
    except NotFoundError as exc:
        raise DslEvalError(str(exc)) from None
    return option.distance


def _poi_attribute(ctx, activity, city, table, column):
    db = ctx.city(str(city))
    position = _record_of(activity).get("position", "")
    for row in db.table(table):
        if row["name"] == position:
            return row[column]
    return ""


def restaurant_type(ctx, activity, city):
    return _poi_attribute(ctx, activity, city, "restaurants", "cuisinetype")


def attraction_type(ctx, activity, city):
    return _poi_attribute(ctx, activity, city, "attractions", "type")


def accommodation_type(ctx, activity, city):
    return _poi_attribute(ctx, activity, city, "hotels", "featurehoteltype")


# -- transport-leg accessors -------------------------------------------------

def innercity_transport_cost(ctx, transports, mode=None):
    total = ZERO
    for leg in _legs_of(transports):
        if mode is None or leg.get("mode", leg.get("type", "")) == mode:
            total += _num(leg.get("cost", 0))
    return total


def innercity_transport_price(ctx, transports):
    total = ZERO
    for leg in _legs_of(transports):
        total += _num(leg.get("price", 0))
    return total


def innercity_transport_distance(ctx, transports, mode=None):
    total = ZERO
    for leg in _legs_of(transports):
        if mode is None or leg.get("mode", leg.get("type", "")) == mode:
            total += _num(leg.get("distance", 0))
    return total


def innercity_transport_time(ctx, transports):
    legs = _legs_of(transports)
    if not legs:
        return ZERO
    start = legs[0].get("start_time", "")
    end = legs[-1].get("end_time", "")
    if not (is_hhmm(start) and is_hhmm(end)):
        return MINUS_ONE
    return _minutes_between(start, end)


def innercity_transport_type(ctx, transports):
    legs = _legs_of(transports)
    if len(legs) == 3:
        return legs[1].get("mode", "")
    if len(legs) == 1:
        return legs[0].get("mode", "")
    return ""


def innercity_transport_start_time(ctx, transports):
    legs = _legs_of(transports)
    return legs[0].get("start_time", "") if legs else ""


def innercity_transport_end_time(ctx, transports):
    legs = _legs_of(transports)
    return legs[-1].get("end_time", "") if legs else ""


def metro_tickets(ctx, transports):
    legs = _legs_of(transports)
    if len(legs) >= 2:
        return _num(legs[1].get("tickets", 0))
    return ZERO


def taxi_cars(ctx, transports):
    legs = _legs_of(transports)
    if legs:
        return _num(legs[0].get("cars", 0))
    return ZERO


# name -> (implementation, min arity, max arity)
CONCEPT_REGISTRY: dict[str, tuple[Callable, int, int]] = {
    "day_count": (day_count, 1, 1),
    "people_count": (people_count, 1, 1),
    "start_city": (start_city, 1, 1),
    "target_city": (target_city, 1, 1),
    "allactivities": (allactivities, 1, 1),
    "allactivities_count": (allactivities_count, 1, 1),
    "dayactivities": (dayactivities, 2, 2),
    "activity_cost": (activity_cost, 1, 1),
    "activity_position": (activity_position, 1, 1),
    "activity_price": (activity_price, 1, 1),
    "activity_type": (activity_type, 1, 1),
    "activity_tickets": (activity_tickets, 1, 1),
    "activity_transports": (activity_transports, 1, 1),
    "activity_start_time": (activity_start_time, 1, 1),
    "activity_end_time": (activity_end_time, 1, 1),
    "activity_time": (activity_time, 1, 1),
    "poi_recommend_time": (poi_recommend_time, 2, 2),
    "poi_distance": (poi_distance, 3, 3),
    "innercity_transport_cost": (innercity_transport_cost, 1, 2),
    "innercity_transport_price": (innercity_transport_price, 1, 1),
    "innercity_transport_distance": (innercity_transport_distance, 1, 2),
    "innercity_transport_time": (innercity_transport_time, 1, 1),
    "metro_tickets": (metro_tickets, 1, 1),
    "taxi_cars": (taxi_cars, 1, 1),
    "room_count": (room_count, 1, 1),
    "room_type": (room_type, 1, 1),
    "restaurant_type": (restaurant_type, 2, 2),
    "attraction_type": (attraction_type, 2, 2),
    "accommodation_type": (accommodation_type, 2, 2),
    "innercity_transport_type": (innercity_transport_type, 1, 1),
    "intercity_transport_type": (intercity_transport_type, 1, 1),
    "innercity_transport_start_time": (innercity_transport_start_time, 1, 1),
    "innercity_transport_end_time": (innercity_transport_end_time, 1, 1),
    "intercity_transport_origin": (intercity_transport_origin, 1, 1),
    "intercity_transport_destination": (intercity_transport_destination, 1, 1),
}

# spelling used by several published constraint programs
CONCEPT_ALIASES = {"all_activities": "allactivities"}


def resolve_concept(name: str):
    """Return (canonical name, impl, min arity, max arity) or None."""
    canonical = CONCEPT_ALIASES.get(name, name)
    entry = CONCEPT_REGISTRY.get(canonical)
    if entry is None:
        return None
    return (canonical, *entry)


def concept(name: str, args: list, ctx: ConceptContext):
    """Dispatch one concept call; unknown names and bad arity raise."""
    resolved = resolve_concept(name)
    if resolved is None:
        raise DslEvalError(f"unknown concept function {name!r}")
    _, impl, lo, hi = resolved
    if not lo <= len(args) <= hi:
        expected = str(lo) if lo == hi else f"{lo}..{hi}"
        raise DslEvalError(f"{name} expects {expected} arguments, got {len(args)}")
    return impl(ctx, *args)
