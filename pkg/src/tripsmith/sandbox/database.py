"""File-backed city database with the tool-style query surface.

Layout on disk, one directory per city::

    <root>/<city>/attractions.csv
    <root>/<city>/restaurants.csv
    <root>/<city>/hotels.csv
    <root>/<city>/intercity.csv
    <root>/<city>/poi.csv
    <root>/fares.cfg            (optional, shared tariffs)

Column headers are matched case-insensitively. Every loaded table is indexed
by name; the coordinate map covers all POIs plus stations. Databases are
immutable after load and safe to share between threads; query sessions are
single-owner.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path

from ..errors import IntegrityError, LoadError, NotFoundError, StateError
from ..geo import distance_km
from ..timeutil import is_hhmm, to_minutes
from .fares import FareConfig, load_fare_config

PAGE_SIZE = 10

POI_TABLES = ("attractions", "restaurants", "hotels")

# required columns per table, in canonical lower-case form
_TABLE_COLUMNS = {
    "attractions": (
        "name", "type", "latitude", "longitude", "opentime", "endtime",
        "price", "recommendmintime", "recommendmaxtime",
    ),
    "restaurants": (
        "name", "latitude", "longitude", "price", "cuisinetype",
        "opentime", "endtime", "recommendedfood",
    ),
    "hotels": (
        "name", "featurehoteltype", "latitude", "longitude", "price", "numbed",
    ),
}
_INTERCITY_COLUMNS = ("id", "kind", "from", "to", "begintime", "endtime", "duration", "cost")
_POI_COLUMNS = ("name", "latitude", "longitude")

_DECIMAL_COLUMNS = {"price", "cost", "latitude", "longitude", "recommendmintime", "recommendmaxtime"}
_INT_COLUMNS = {"numbed", "duration"}
_TIME_COLUMNS = {"opentime", "endtime", "begintime"}


@dataclass(frozen=True)
class IntercityRoute:
    """One train or airplane connection between two cities."""

    id: str
    kind: str                # "train" | "airplane"
    from_station: str
    to_station: str
    from_city: str
    to_city: str
    begin: str               # HH:MM
    end: str                 # HH:MM
    duration: int            # minutes
    cost: Decimal            # per ticket


@dataclass
class QuerySession:
    """Single-owner cursor over one select() result, paged by 10 rows."""

    rows: list[dict]
    cursor: int = 0

    @property
    def first_page(self) -> list[dict]:
        return self.rows[:PAGE_SIZE]

    @property
    def page_count(self) -> int:
        return math.ceil(len(self.rows) / PAGE_SIZE)


@dataclass
class CityDatabase:
    """All sandbox records for one city, indexed for the query APIs."""

    city_name: str
    attractions: list[dict]
    restaurants: list[dict]
    hotels: list[dict]
    intercity_routes: list[IntercityRoute]
    poi_coordinates: dict[str, tuple[Decimal, Decimal]]
    fares: FareConfig = field(default_factory=FareConfig)

    def table(self, name: str) -> list[dict]:
        if name not in POI_TABLES:
            raise NotFoundError(f"unknown table {name!r}; expected one of {POI_TABLES}")
        return getattr(self, name)

    def record(self, table: str, name: str) -> dict:
        for row in self.table(table):
            if row["name"] == name:
                return row
        raise NotFoundError(f"no {table[:-1]} named {name!r} in {self.city_name}")

    def find_poi(self, name: str) -> dict | None:
        """Look a name up across all three POI tables; None when absent."""
        for table in POI_TABLES:
            for row in getattr(self, table):
                if row["name"] == name:
                    return row
        return None

    def coordinates(self, name: str) -> tuple[Decimal, Decimal]:
        try:
            return self.poi_coordinates[name]
        except KeyError:
            raise NotFoundError(f"unknown position {name!r} in {self.city_name}") from None

    def stations(self, kind: str | None = None) -> list[str]:
        """Names of intercity departure stations in this city."""
        names = []
        for route in self.intercity_routes:
            if route.from_city == self.city_name and (kind is None or route.kind == kind):
                if route.from_station not in names:
                    names.append(route.from_station)
        return names


def _convert(column: str, raw: str, where: str):
    raw = raw.strip()
    if column in _DECIMAL_COLUMNS:
        try:
            return Decimal(raw)
        except InvalidOperation:
            raise LoadError(f"{where}: bad number {raw!r} in column {column!r}") from None
    if column in _INT_COLUMNS:
        try:
            return int(raw)
        except ValueError:
            raise LoadError(f"{where}: bad integer {raw!r} in column {column!r}") from None
    if column in _TIME_COLUMNS or (column == "endtime" and raw):
        if not is_hhmm(raw):
            raise LoadError(f"{where}: bad clock time {raw!r} in column {column!r}")
        return raw
    return raw


def _read_csv(path: Path, required: tuple[str, ...], table: str) -> list[dict]:
    if not path.exists():
        raise LoadError(f"missing table {table!r}: expected file {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise LoadError(f"{path}: empty file for table {table!r}")
        canon = {name: name.strip().lower() for name in reader.fieldnames}
        have = set(canon.values())
        missing = [col for col in required if col not in have]
        if missing:
            raise LoadError(f"{path}: table {table!r} misses columns {missing}")
        rows = []
        for idx, raw_row in enumerate(reader, 2):
            row = {}
            for raw_key, value in raw_row.items():
                if raw_key is None:
                    continue
                key = canon[raw_key]
                row[key] = _convert(key, value or "", f"{path}:{idx}")
            rows.append(row)
    return rows


def load_city_data(root_path: Path | str, city: str) -> CityDatabase:
    """Load one city from `<root>/<city>/`, validating structural invariants."""
    root = Path(root_path)
    city_dir = root / city
    if not city_dir.is_dir():
        raise LoadError(f"no data directory for city {city!r} under {root}")

    tables = {}
    coords: dict[str, tuple[Decimal, Decimal]] = {}
    for table, required in _TABLE_COLUMNS.items():
        rows = _read_csv(city_dir / f"{table}.csv", required, table)
        seen = set()
        for row in rows:
            name = row["name"]
            if name in seen:
                raise IntegrityError(f"duplicate {table[:-1]} name {name!r} in {city}")
            seen.add(name)
            if "opentime" in row and "endtime" in row:
                if to_minutes(row["opentime"]) > to_minutes(row["endtime"]):
                    raise IntegrityError(
                        f"{city}/{table}: {name!r} has overnight hours "
                        f"({row['opentime']}-{row['endtime']}), not supported"
                    )
            point = (row["latitude"], row["longitude"])
            if name in coords and coords[name] != point:
                raise IntegrityError(f"{city}: {name!r} has conflicting coordinates")
            coords[name] = point
        tables[table] = rows

    for row in _read_csv(city_dir / "poi.csv", _POI_COLUMNS, "poi"):
        point = (row["latitude"], row["longitude"])
        if row["name"] in coords and coords[row["name"]] != point:
            raise IntegrityError(f"{city}: {row['name']!r} has conflicting coordinates")
        coords[row["name"]] = point

    routes = []
    for row in _read_csv(city_dir / "intercity.csv", _INTERCITY_COLUMNS, "intercity"):
        kind = row["kind"].strip().lower()
        if kind not in ("train", "airplane"):
            raise IntegrityError(f"{city}/intercity: unknown kind {row['kind']!r}")
        if (kind == "airplane") != row["id"].startswith("F"):
            raise IntegrityError(
                f"{city}/intercity: id {row['id']!r} prefix does not match kind {kind!r}"
            )
        if to_minutes(row["endtime"]) <= to_minutes(row["begintime"]):
            raise IntegrityError(f"{city}/intercity: {row['id']!r} must end after it begins")
        if row["cost"] <= 0:
            raise IntegrityError(f"{city}/intercity: {row['id']!r} has non-positive cost")
        routes.append(
            IntercityRoute(
                id=row["id"],
                kind=kind,
                from_station=row["from"],
                to_station=row["to"],
                from_city=row.get("fromcity", "") or _city_of_station(row["from"], city),
                to_city=row.get("tocity", "") or _city_of_station(row["to"], city),
                begin=row["begintime"],
                end=row["endtime"],
                duration=row["duration"],
                cost=row["cost"],
            )
        )

    fare_path = root / "fares.cfg"
    fares = load_fare_config(fare_path) if fare_path.exists() else FareConfig()

    return CityDatabase(
        city_name=city,
        attractions=tables["attractions"],
        restaurants=tables["restaurants"],
        hotels=tables["hotels"],
        intercity_routes=routes,
        poi_coordinates=coords,
        fares=fares,
    )


def _city_of_station(station: str, default_city: str) -> str:
    # Station names embed their city ("Alpha Station", "Beta Airport").
    return station.split(" ")[0] if " " in station else default_city


def select(db: CityDatabase, table: str, key: str, predicate) -> QuerySession:
    """Filter a POI table by predicate over one column, newest session."""
    rows = db.table(table)
    valid = set(_TABLE_COLUMNS[table])
    if key not in valid:
        raise NotFoundError(
            f"unknown key {key!r} for table {table!r}; valid keys: {sorted(valid)}"
        )
    matched = [row for row in rows if predicate(row[key])]
    return QuerySession(rows=matched)


def next_page(session: QuerySession | None) -> list[dict]:
    """Serve the page at the session cursor and advance; [] past the end."""
    if session is None:
        raise StateError("next_page called with no prior select result")
    start = session.cursor * PAGE_SIZE
    page = session.rows[start:start + PAGE_SIZE]
    if session.cursor < session.page_count:
        session.cursor += 1
    return page


def nearby(db: CityDatabase, table: str, point: tuple, topk: int, dist) -> list[dict]:
    """Top-k records of a table within `dist` km of point, nearest first."""
    if topk < 1:
        raise NotFoundError(f"topk must be >= 1, got {topk}")
    dist = Decimal(str(dist))
    if dist <= 0:
        raise NotFoundError(f"dist must be > 0, got {dist}")
    lat, lon = (Decimal(str(point[0])), Decimal(str(point[1])))
    scored = []
    for row in db.table(table):
        d = distance_km(float(lat), float(lon), float(row["latitude"]), float(row["longitude"]))
        if d <= dist:
            scored.append((d, row["name"], row))
    scored.sort(key=lambda item: (item[0], item[1]))
    return [row for _, _, row in scored[:topk]]


def is_open(db: CityDatabase, table: str, poi_id: str, time: str) -> bool:
    """Whether the named POI is open at HH:MM; bounds inclusive."""
    row = db.record(table, poi_id)
    if "opentime" not in row or "endtime" not in row:
        return True  # hotels carry no visiting hours
    t = to_minutes(time)
    return to_minutes(row["opentime"]) <= t <= to_minutes(row["endtime"])


def intercity_select(
    dbs: dict[str, CityDatabase] | CityDatabase,
    from_city: str,
    to_city: str,
    kind: str | None = None,
    earliest_leave: str = "00:00",
) -> list[IntercityRoute]:
    """Routes from one city to another departing at or after `earliest_leave`."""
    if isinstance(dbs, CityDatabase):
        source = dbs
    else:
        try:
            source = dbs[from_city]
        except KeyError:
            raise NotFoundError(f"city {from_city!r} is not loaded") from None
    earliest = to_minutes(earliest_leave)
    found = [
        route
        for route in source.intercity_routes
        if route.from_city == from_city
        and route.to_city == to_city
        and (kind is None or route.kind == kind)
        and to_minutes(route.begin) >= earliest
    ]
    found.sort(key=lambda r: (to_minutes(r.begin), r.id))
    return found
