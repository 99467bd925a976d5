import csv
from decimal import Decimal
from pathlib import Path

import pytest

from tripsmith.errors import IntegrityError, LoadError, NotFoundError, StateError
from tripsmith.sandbox import (
    PAGE_SIZE,
    goto,
    intercity_select,
    is_open,
    load_city_data,
    load_dataset,
    nearby,
    next_page,
    select,
)

from .conftest import FIXTURES
from .oracles import haversine_reference, nearby_reference


def test_load_mini_city(beta):
    assert beta.city_name == "Beta"
    assert len(beta.attractions) == 4
    assert len(beta.hotels) == 2
    assert "Beta Station" in beta.poi_coordinates
    assert "Lakeview Tower" in beta.poi_coordinates


def test_load_missing_table(tmp_path):
    (tmp_path / "Empty").mkdir()
    with pytest.raises(LoadError, match="attractions"):
        load_city_data(tmp_path, "Empty")


def _write_city(root: Path, attractions_rows):
    city = root / "Dup"
    city.mkdir()
    with (city / "attractions.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Name", "Type", "Latitude", "Longitude", "Opentime",
                         "Endtime", "Price", "Recommendmintime", "Recommendmaxtime"])
        writer.writerows(attractions_rows)
    for name, header in (
        ("restaurants", "Name,Latitude,Longitude,Price,Cuisinetype,Opentime,Endtime,Recommendedfood"),
        ("hotels", "Name,Featurehoteltype,Latitude,Longitude,Price,Numbed"),
        ("intercity", "ID,Kind,From,To,BeginTime,EndTime,Duration,Cost"),
        ("poi", "Name,Latitude,Longitude"),
    ):
        (city / f"{name}.csv").write_text(header + "\n")


def test_duplicate_poi_name_rejected(tmp_path):
    _write_city(tmp_path, [
        ["Twin", "park", "31.0", "121.0", "08:00", "18:00", "10", "1", "2"],
        ["Twin", "park", "31.1", "121.1", "08:00", "18:00", "10", "1", "2"],
    ])
    with pytest.raises(IntegrityError, match="duplicate"):
        load_city_data(tmp_path, "Dup")


def test_overnight_hours_rejected(tmp_path):
    _write_city(tmp_path, [
        ["Night Spot", "bar", "31.0", "121.0", "22:00", "02:00", "10", "1", "2"],
    ])
    with pytest.raises(IntegrityError, match="overnight"):
        load_city_data(tmp_path, "Dup")


def test_select_by_name(beta):
    session = select(beta, "attractions", "name", lambda v: v == "Lakeview Tower")
    assert [r["name"] for r in session.first_page] == ["Lakeview Tower"]


def test_select_unknown_key(beta):
    with pytest.raises(NotFoundError, match="bus"):
        select(beta, "attractions", "bus", lambda v: True)


def test_select_every_record_by_name(beta):
    for table in ("attractions", "restaurants", "hotels"):
        for row in beta.table(table):
            session = select(beta, table, "name", lambda v, n=row["name"]: v == n)
            assert session.rows == [row]


def _paged_city(tmp_path) -> object:
    """A city whose restaurant table holds 23 Hotpot rows."""
    city = tmp_path / "Paged"
    city.mkdir()
    rows = ["Name,Latitude,Longitude,Price,Cuisinetype,Opentime,Endtime,Recommendedfood"]
    for i in range(23):
        rows.append(f"Pot {i:02d},31.{i:02d},121.0,50,Hotpot,06:00,22:00,stew")
    (city / "restaurants.csv").write_text("\n".join(rows) + "\n")
    (city / "attractions.csv").write_text(
        "Name,Type,Latitude,Longitude,Opentime,Endtime,Price,Recommendmintime,Recommendmaxtime\n"
    )
    (city / "hotels.csv").write_text("Name,Featurehoteltype,Latitude,Longitude,Price,Numbed\n")
    (city / "intercity.csv").write_text("ID,Kind,From,To,BeginTime,EndTime,Duration,Cost\n")
    (city / "poi.csv").write_text("Name,Latitude,Longitude\n")
    return load_city_data(tmp_path, "Paged")


def test_pagination(tmp_path):
    db = _paged_city(tmp_path)
    session = select(db, "restaurants", "cuisinetype", lambda v: v == "Hotpot")
    assert len(session.rows) == 23
    assert session.page_count == 3
    pages = [next_page(session) for _ in range(4)]
    assert [len(p) for p in pages] == [10, 10, 3, 0]
    flattened = [row for page in pages for row in page]
    assert flattened == session.rows


def test_pagination_exact_multiple(tmp_path):
    db = _paged_city(tmp_path)
    session = select(db, "restaurants", "name", lambda v: v < "Pot 10")
    assert len(session.rows) == PAGE_SIZE
    assert len(next_page(session)) == 10
    assert next_page(session) == []


def test_next_page_without_select():
    with pytest.raises(StateError):
        next_page(None)


def test_nearby_identity(beta):
    point = beta.coordinates("Old Town Wall")
    rows = nearby(beta, "attractions", point, topk=1, dist=1)
    assert [r["name"] for r in rows] == ["Old Town Wall"]


def test_nearby_empty(beta):
    rows = nearby(beta, "attractions", (0.0, 0.0), topk=5, dist=1)
    assert rows == []


def test_nearby_matches_brute_force(beta):
    point = (31.2000, 121.4000)
    got = [r["name"] for r in nearby(beta, "attractions", point, topk=3, dist=5)]
    want = nearby_reference(beta.attractions, point, topk=3, dist=5)
    assert got == want


def test_nearby_subset_and_sorted(beta):
    point = (31.2050, 121.4050)
    rows = nearby(beta, "restaurants", point, topk=10, dist=2)
    names = {r["name"] for r in beta.restaurants}
    dists = []
    for row in rows:
        assert row["name"] in names
        dists.append(haversine_reference(point[0], point[1],
                                         float(row["latitude"]), float(row["longitude"])))
        assert dists[-1] <= 2 + 1e-9
    assert dists == sorted(dists)


def test_is_open_bounds(beta):
    assert is_open(beta, "attractions", "Lakeview Tower", "09:00")
    assert is_open(beta, "attractions", "Lakeview Tower", "17:30")   # inclusive
    assert not is_open(beta, "attractions", "Lakeview Tower", "17:31")
    assert not is_open(beta, "attractions", "Lakeview Tower", "07:59")


def test_is_open_unknown_poi(beta):
    with pytest.raises(NotFoundError):
        is_open(beta, "attractions", "Ghost Tower", "09:00")


def test_goto_identity(beta):
    option = goto(beta, "Beta Station", "Beta Station", "09:00", "walk")
    assert option.distance == Decimal("0.000")
    assert option.time_minutes == 0
    assert option.price == 0
    assert len(option.legs) == 1


def test_goto_walk_time_matches_haversine(beta):
    lat1, lon1 = beta.coordinates("Beta Station")
    lat2, lon2 = beta.coordinates("Old Town Wall")
    km = haversine_reference(float(lat1), float(lon1), float(lat2), float(lon2))
    option = goto(beta, "Beta Station", "Old Town Wall", "09:00", "walk")
    assert abs(float(option.distance) - km) < 1e-3
    # 5 km/h, whole minutes rounded up
    import math
    assert option.time_minutes == math.ceil(float(option.distance) * 12)


def test_goto_two_km_walk_is_24_minutes(tmp_path):
    # pin a pair exactly 2.0 km apart (1 km per 0.008993 degrees of latitude)
    city = tmp_path / "Flat"
    city.mkdir()
    (city / "attractions.csv").write_text(
        "Name,Type,Latitude,Longitude,Opentime,Endtime,Price,Recommendmintime,Recommendmaxtime\n"
        "A,park,30.000000,120.0,08:00,18:00,10,1,2\n"
        "B,park,30.017986,120.0,08:00,18:00,10,1,2\n"
    )
    (city / "restaurants.csv").write_text(
        "Name,Latitude,Longitude,Price,Cuisinetype,Opentime,Endtime,Recommendedfood\n")
    (city / "hotels.csv").write_text("Name,Featurehoteltype,Latitude,Longitude,Price,Numbed\n")
    (city / "intercity.csv").write_text("ID,Kind,From,To,BeginTime,EndTime,Duration,Cost\n")
    (city / "poi.csv").write_text("Name,Latitude,Longitude\n")
    db = load_city_data(tmp_path, "Flat")
    option = goto(db, "A", "B", "09:00", "walk")
    assert option.distance == Decimal("2.000")
    assert option.time_minutes == 24
    assert option.legs[0].end_time == "09:24"


def test_goto_metro_has_three_legs(beta):
    option = goto(beta, "Beta Station", "Old Town Wall", "09:00", "metro")
    assert option.mode == "metro"
    assert [leg.mode for leg in option.legs] == ["walk", "metro", "walk"]
    for earlier, later in zip(option.legs, option.legs[1:]):
        assert earlier.end_time == later.start_time
    assert option.price == Decimal("3.00")   # one 6 km band


def test_goto_deterministic(beta):
    first = goto(beta, "Beta Station", "City Museum", "10:15", "taxi")
    second = goto(beta, "Beta Station", "City Museum", "10:15", "taxi")
    assert first == second


def test_goto_unknown_position(beta):
    with pytest.raises(NotFoundError):
        goto(beta, "Beta Station", "Nowhere", "09:00", "walk")


def test_intercity_select_filters_and_sorts(mini_dataset):
    routes = intercity_select(mini_dataset.cities, "Alpha", "Beta", "train", "07:00")
    assert [r.id for r in routes] == ["G103", "G105"]
    assert intercity_select(mini_dataset.cities, "Alpha", "Beta", "train", "23:59") == []
    everything = intercity_select(mini_dataset.cities, "Alpha", "Beta")
    begins = [r.begin for r in everything]
    assert begins == sorted(begins)


def test_dataset_loads_both_cities():
    ds = load_dataset(FIXTURES / "mini")
    assert ds.city_names == ["Alpha", "Beta"]
    assert "Alpha" in ds and "Beta" in ds
