"""Turn a feasible assignment back into a plan document.

The decoder reconstructs visit segments from the occupancy matrix and the
chosen intercity rides, producing a structurally valid plan that the regular
evaluator can score. Costs use the slice prices for one ticket per traveler.
"""

from __future__ import annotations

from ..plan.model import DayPlan, Plan
from ..timeutil import to_hhmm
from .build import MilpModel
from .params import MilpParams, MilpSlice


def _slot_time(params: MilpParams, t: int, end: bool = False) -> str:
    minutes = (t % params.slots_per_day) * params.slot_minutes
    if end:
        minutes = min(minutes + params.slot_minutes, 24 * 60 - 1)
    return to_hhmm(minutes)


def decode_assignment(
    model: MilpModel,
    assignment: dict[str, int],
    slice_: MilpSlice,
    origin: str,
    target: str,
    people: int = 1,
) -> Plan:
    params = model.params
    names = slice_.location_names()
    kinds: list[tuple[str, dict | None]] = []
    for row in slice_.hotels:
        kinds.append(("accommodation", row))
    for row in slice_.attractions:
        kinds.append(("attraction", row))
    for row in slice_.restaurants:
        kinds.append(("meal", row))
    for station in slice_.stations:
        kinds.append(("station", None))

    occupied: list[int | None] = []
    for t in range(params.time_step):
        where = None
        for i in range(len(names)):
            if assignment.get(f"u_{i}_{t}", 0):
                where = i
                break
        occupied.append(where)

    days = [DayPlan(day=d + 1, activities=[]) for d in range(params.days)]

    go = next((g for g in range(params.go_num) if assignment.get(f"intergo_{g}", 0)), None)
    if go is not None:
        route = slice_.go_routes[go]
        days[0].activities.append({
            "type": route.kind,
            "start": route.from_station, "end": route.to_station,
            "TrainID" if route.kind == "train" else "FlightID": route.id,
            "start_time": route.begin, "end_time": route.end,
            "price": route.cost, "tickets": people, "cost": route.cost * people,
        })

    meal_names = ("breakfast", "lunch", "dinner")
    t = 0
    while t < params.time_step:
        idx = occupied[t]
        if idx is None or kinds[idx][0] == "station":
            t += 1
            continue
        end = t
        while end + 1 < params.time_step and occupied[end + 1] == idx:
            end += 1
        kind, row = kinds[idx]
        day = min(t // params.slots_per_day, params.days - 1)
        if kind == "meal":
            hour = (t % params.slots_per_day) * params.slot_minutes // 60
            kind = meal_names[0 if hour < 11 else 1 if hour < 17 else 2]
        activity = {
            "type": kind,
            "position": row["name"],
            "start_time": _slot_time(params, t),
            "end_time": _slot_time(params, end, end=True),
            "price": row["price"],
        }
        if kind == "accommodation":
            activity["rooms"] = 1
            activity["room_type"] = row.get("numbed", 1)
            activity["cost"] = row["price"]
        else:
            activity["tickets"] = people
            activity["cost"] = row["price"] * people
        days[day].activities.append(activity)
        t = end + 1

    back = next((b for b in range(params.back_num) if assignment.get(f"interback_{b}", 0)), None)
    if back is not None:
        route = slice_.back_routes[back]
        days[-1].activities.append({
            "type": route.kind,
            "start": route.from_station, "end": route.to_station,
            "TrainID" if route.kind == "train" else "FlightID": route.id,
            "start_time": route.begin, "end_time": route.end,
            "price": route.cost, "tickets": people, "cost": route.cost * people,
        })

    return Plan(people_number=people, start_city=origin, target_city=target,
                itinerary=days)
