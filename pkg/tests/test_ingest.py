import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coachnet.ingest import (Division, SchemaError, Sport, parse_ap_polls, parse_coach_records,
                             parse_school_table)

COACH_HEADER = "coach_id,name,alma_mater,grad_year,school,start_year,end_year\n"
SCHOOL_HEADER = "school,display_name,latitude,longitude,division_basketball,division_football\n"
POLL_HEADER = "sport,year,rank,school\n"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_missing_alma_mater_dropped(tmp_path):
    p = write(tmp_path, "c.csv", COACH_HEADER + "c1,A,,1980,B,1990,1995\nc2,B,X,1980,Y,1990,1991\n")
    records, report = parse_coach_records(p)
    assert [r.coach_id for r in records] == ["c2"]
    assert report.missing_alma_mater == 1
    assert report.total == 1


def test_empty_file_with_header(tmp_path):
    records, report = parse_coach_records(write(tmp_path, "c.csv", COACH_HEADER))
    assert records == []
    assert report.total == 0 and report.n_rows == 0


def test_ten_rows_two_invalid(tmp_path):
    rows = [f"c{i},N{i},S{i % 3},1980,T{i},1985,1990" for i in range(8)]
    rows.append("c8,N8,S1,,T8,1985,1990")  # missing grad year
    rows.append("c9,N9,S1,1980,T9,1975,1978")  # stint before graduation
    records, report = parse_coach_records(write(tmp_path, "c.csv", COACH_HEADER + "\n".join(rows) + "\n"))
    assert len(records) == 8
    assert report.total == 2
    assert report.missing_grad_year == 1 and report.stint_before_graduation == 1


def test_multi_stint_coach_sorted(tmp_path):
    text = COACH_HEADER + "c1,A,X,1980,C,1995,1999\nc1,A,X,1980,B,1986,1990\n"
    (rec,), _ = parse_coach_records(write(tmp_path, "c.csv", text))
    assert [s.school for s in rec.stints] == ["B", "C"]


def test_malformed_rows(tmp_path):
    text = COACH_HEADER + ("c1,A,X,19x0,B,1986,1990\n"   # bad year
                           "c2,A,X,1980,B,1990,1986\n"   # ends before start
                           "c3,A,X,1980,B,1986\n"        # short row
                           "c4,A,X,1980,B,1986,1990\n"
                           "c4,A,Y,1980,C,1991,1992\n")  # conflicting alma mater
    records, report = parse_coach_records(write(tmp_path, "c.csv", text))
    assert [r.coach_id for r in records] == ["c4"]
    assert report.malformed_row == 4


def test_missing_column_named(tmp_path):
    p = write(tmp_path, "c.csv", "coach_id,name,grad_year,school,start_year,end_year\n")
    with pytest.raises(SchemaError, match="alma_mater"):
        parse_coach_records(p)


def test_unreadable_file(tmp_path):
    with pytest.raises(OSError):
        parse_coach_records(tmp_path / "nope.csv")


def test_school_row_mapping(tmp_path):
    p = write(tmp_path, "s.csv", SCHOOL_HEADER + 'yale,"Yale",41.3,-72.9,DivI,FCS\n')
    table = parse_school_table(p, "football")
    info = table["yale"]
    assert info.division is Division.FCS
    assert (info.latitude, info.longitude, info.display_name) == (41.3, -72.9, "Yale")
    assert parse_school_table(p, Sport.BASKETBALL)["yale"].division is Division.DIV_I


def test_school_duplicate_last_wins(tmp_path):
    p = write(tmp_path, "s.csv", SCHOOL_HEADER + "a,A1,1,1,DivI,FBS\na,A2,2,2,DivII,DivII\n")
    table = parse_school_table(p, "basketball")
    assert len(table) == 1 and table["a"].display_name == "A2"
    assert table.warnings == 1


@pytest.mark.parametrize("lat,lon", [("100.0", "0"), ("-91", "0"), ("0", "181")])
def test_school_out_of_range_rejected(tmp_path, lat, lon):
    p = write(tmp_path, "s.csv", SCHOOL_HEADER + f"a,A,{lat},{lon},DivI,FBS\n")
    table = parse_school_table(p, "football")
    assert "a" not in table and table.warnings == 1


def test_school_without_coordinates(tmp_path):
    p = write(tmp_path, "s.csv", SCHOOL_HEADER + "a,A,,,,\n")
    info = parse_school_table(p, "football")["a"]
    assert not info.has_coordinates and info.division is Division.UNKNOWN


def test_football_label_rejected_for_basketball(tmp_path):
    p = write(tmp_path, "s.csv", SCHOOL_HEADER + "a,A,1,1,FBS,FBS\n")
    assert parse_school_table(p, "basketball").warnings == 1


def test_polls_two_entries(tmp_path):
    p = write(tmp_path, "p.csv", POLL_HEADER + "football,1950,1,A\nfootball,1950,2,B\n")
    table = parse_ap_polls(p)
    assert len(table.entries) == 2
    assert table.by_year() == {1950: ["A", "B"]}


def test_polls_duplicate_rank(tmp_path):
    p = write(tmp_path, "p.csv", POLL_HEADER + "football,1950,1,A\nfootball,1950,1,B\n")
    with pytest.raises(SchemaError, match="duplicate rank"):
        parse_ap_polls(p)


def test_polls_duplicate_school(tmp_path):
    p = write(tmp_path, "p.csv", POLL_HEADER + "football,1950,1,A\nfootball,1950,2,A\n")
    with pytest.raises(SchemaError, match="twice"):
        parse_ap_polls(p)


def test_polls_gap(tmp_path):
    p = write(tmp_path, "p.csv", POLL_HEADER + "football,1950,1,A\nfootball,1950,3,B\n")
    with pytest.raises(SchemaError, match="gaps"):
        parse_ap_polls(p)


def test_polls_twenty_years(tmp_path):
    rows = [f"basketball,{1950 + y},{r},S{(r + y) % 40}" for y in range(20) for r in range(1, 26)]
    table = parse_ap_polls(write(tmp_path, "p.csv", POLL_HEADER + "\n".join(rows) + "\n"))
    assert len(table.entries) == 500
    assert len(table.years) == 20


def test_polls_sport_filter(tmp_path, data_dir):
    table = parse_ap_polls(data_dir / "ap_polls.csv", "football")
    assert table.sport is Sport.FOOTBALL and len(table.entries) == 20
    with pytest.raises(SchemaError):
        parse_ap_polls(data_dir / "ap_polls.csv")


row_strategy = st.tuples(
    st.sampled_from(["c1", "c2", "c3", "c4"]),
    st.sampled_from(["", "A", "B"]),
    st.one_of(st.just(""), st.integers(1950, 1960).map(str)),
    st.sampled_from(["", "X", "Y"]),
    st.integers(1940, 1970),
    st.integers(0, 5),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(row_strategy, max_size=15))
def test_records_always_valid(tmp_path_factory, rows):
    lines = [f"{cid},name,{alma},{grad},{school},{start},{start + dur}"
             for cid, alma, grad, school, start, dur in rows]
    p = tmp_path_factory.mktemp("h") / "c.csv"
    p.write_text(COACH_HEADER + "".join(line + "\n" for line in lines), encoding="utf-8")
    records, report = parse_coach_records(p)
    kept = sum(len(r.stints) for r in records)
    assert kept + report.total == len(rows) == report.n_rows
    for r in records:
        assert r.alma_mater and r.stints
        assert all(s.start_year >= r.grad_year and s.end_year >= s.start_year for s in r.stints)
        assert [s.start_year for s in r.stints] == sorted(s.start_year for s in r.stints)
    # determinism
    assert parse_coach_records(p) == (records, report)


def test_one_row_per_coach_conservation(tmp_path):
    rnd = random.Random(3)
    lines = []
    for i in range(40):
        alma = rnd.choice(["", "A", "B"])
        grad = rnd.choice(["", "1980"])
        start = rnd.choice([1975, 1985])
        lines.append(f"c{i},n,{alma},{grad},S,{start},{start + 2}")
    records, report = parse_coach_records(write(tmp_path, "c.csv", COACH_HEADER + "\n".join(lines) + "\n"))
    assert len(records) + report.total == 40
