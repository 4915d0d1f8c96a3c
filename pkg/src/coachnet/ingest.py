"""Readers for the three CSV inputs: coach stints, school attributes, AP polls.

All readers take already-canonicalized school ids. Rows that fail the
cleaning rules are dropped and counted, never repaired.
"""

from __future__ import annotations

import csv
import enum
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

COACH_COLUMNS = ("coach_id", "name", "alma_mater", "grad_year", "school", "start_year", "end_year")
SCHOOL_COLUMNS = ("school", "display_name", "latitude", "longitude",
                  "division_basketball", "division_football")
POLL_COLUMNS = ("sport", "year", "rank", "school")


class SchemaError(ValueError):
    """Input file does not follow the documented CSV layout."""


class Sport(str, enum.Enum):
    BASKETBALL = "basketball"
    FOOTBALL = "football"

    @classmethod
    def parse(cls, value: "str | Sport") -> "Sport":
        if isinstance(value, Sport):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ValueError(f"unknown sport {value!r}; expected basketball or football") from None


class Division(str, enum.Enum):
    DIV_I = "DivI"
    FBS = "FBS"
    FCS = "FCS"
    DIV_II = "DivII"
    DIV_III = "DivIII"
    UNKNOWN = "Unknown"


# Labels each sport may carry; football splits Division I into FBS/FCS.
SPORT_DIVISIONS = {
    Sport.BASKETBALL: (Division.DIV_I, Division.DIV_II, Division.DIV_III),
    Sport.FOOTBALL: (Division.FBS, Division.FCS, Division.DIV_II, Division.DIV_III),
}

_DIVISION_ALIASES = {
    "divi": Division.DIV_I, "i": Division.DIV_I, "d1": Division.DIV_I, "division i": Division.DIV_I,
    "fbs": Division.FBS, "i-a": Division.FBS,
    "fcs": Division.FCS, "i-aa": Division.FCS,
    "divii": Division.DIV_II, "ii": Division.DIV_II, "d2": Division.DIV_II, "division ii": Division.DIV_II,
    "diviii": Division.DIV_III, "iii": Division.DIV_III, "d3": Division.DIV_III,
    "division iii": Division.DIV_III,
    "unknown": Division.UNKNOWN, "": Division.UNKNOWN,
}


def parse_division(label: str, sport: Sport) -> Division:
    div = _DIVISION_ALIASES.get(label.strip().lower().replace("div ", "div"))
    if div is None:
        raise ValueError(f"unknown division label {label!r}")
    if div is not Division.UNKNOWN and div not in SPORT_DIVISIONS[sport]:
        raise ValueError(f"division {div.value} is not used in {sport.value}")
    return div


@dataclass(frozen=True)
class Stint:
    school: str
    start_year: int
    end_year: int

    def __post_init__(self):
        if self.end_year < self.start_year:
            raise ValueError(f"stint at {self.school} ends ({self.end_year}) before it starts ({self.start_year})")


@dataclass(frozen=True)
class CoachRecord:
    coach_id: str
    name: str
    alma_mater: str
    grad_year: int
    stints: tuple[Stint, ...]

    def __post_init__(self):
        if not self.alma_mater:
            raise ValueError(f"coach {self.coach_id}: empty alma mater")
        if not self.stints:
            raise ValueError(f"coach {self.coach_id}: no stints")
        starts = [s.start_year for s in self.stints]
        if starts != sorted(starts):
            raise ValueError(f"coach {self.coach_id}: stints not sorted by start year")
        if starts[0] < self.grad_year:
            raise ValueError(f"coach {self.coach_id}: stint starts before graduation")


@dataclass(frozen=True)
class SchoolInfo:
    school: str
    display_name: str = ""
    latitude: float | None = None
    longitude: float | None = None
    division: Division = Division.UNKNOWN

    @property
    def has_coordinates(self) -> bool:
        return self.latitude is not None and self.longitude is not None


@dataclass
class DropReport:
    """Per-reason counts of coach-file rows that were discarded."""

    missing_alma_mater: int = 0
    missing_grad_year: int = 0
    stint_before_graduation: int = 0
    malformed_row: int = 0
    n_rows: int = 0

    @property
    def total(self) -> int:
        return (self.missing_alma_mater + self.missing_grad_year
                + self.stint_before_graduation + self.malformed_row)

    def as_dict(self) -> dict:
        return {
            "missing_alma_mater": self.missing_alma_mater,
            "missing_grad_year": self.missing_grad_year,
            "stint_before_graduation": self.stint_before_graduation,
            "malformed_row": self.malformed_row,
            "total": self.total,
            "n_rows": self.n_rows,
        }


class SchoolTable(dict):
    """Mapping school id -> SchoolInfo, plus the count of rejected/duplicate rows."""

    def __init__(self, *args, warnings: int = 0, sport: Sport | None = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.warnings = warnings
        self.sport = sport


@dataclass(frozen=True)
class PollEntry:
    year: int
    rank: int
    school: str


@dataclass(frozen=True)
class PollTable:
    sport: Sport
    entries: tuple[PollEntry, ...]

    @property
    def years(self) -> list[int]:
        return sorted({e.year for e in self.entries})

    def by_year(self) -> dict[int, list[str]]:
        """Ranked school list (best first) for every poll year."""
        out: dict[int, list[PollEntry]] = defaultdict(list)
        for e in self.entries:
            out[e.year].append(e)
        return {y: [e.school for e in sorted(out[y], key=lambda e: e.rank)] for y in sorted(out)}


def _open_csv(path, required):
    path = Path(path)
    fh = path.open(newline="", encoding="utf-8")
    reader = csv.DictReader(fh)
    header = reader.fieldnames
    if header is None:
        fh.close()
        raise SchemaError(f"{path}: empty file, expected header with columns {', '.join(required)}")
    missing = [c for c in required if c not in header]
    if missing:
        fh.close()
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
    return fh, reader


def _int_or_none(text):
    text = (text or "").strip()
    if not text:
        return None
    return int(text)


def parse_coach_records(path) -> tuple[list[CoachRecord], DropReport]:
    """Read ``coaches.csv`` (one row per head-coach stint).

    Rows with an empty alma mater or graduation year are dropped, as are
    stints starting before graduation and rows that cannot be parsed.
    A coach whose rows are all dropped is not returned.

    Returns
    -------
    records : list of CoachRecord
        In order of first appearance of each ``coach_id``.
    report : DropReport
        Dropped-row counts per reason. Every data row is either kept as a
        stint or counted here exactly once.
    """
    report = DropReport()
    coaches: dict[str, dict] = {}
    fh, reader = _open_csv(path, COACH_COLUMNS)
    with fh:
        for row in reader:
            report.n_rows += 1
            if None in row or any(row.get(c) is None for c in COACH_COLUMNS):
                report.malformed_row += 1
                continue
            cid = row["coach_id"].strip()
            alma = row["alma_mater"].strip()
            school = row["school"].strip()
            if not alma:
                report.missing_alma_mater += 1
                continue
            try:
                grad = _int_or_none(row["grad_year"])
            except ValueError:
                report.malformed_row += 1
                continue
            if grad is None:
                report.missing_grad_year += 1
                continue
            try:
                start = int(row["start_year"])
                end = int(row["end_year"])
            except ValueError:
                report.malformed_row += 1
                continue
            if not cid or not school or end < start:
                report.malformed_row += 1
                continue
            prev = coaches.get(cid)
            if prev is not None and (prev["alma_mater"], prev["grad_year"]) != (alma, grad):
                # rows of one coach must agree on the coach-level fields
                report.malformed_row += 1
                continue
            if start < grad:
                report.stint_before_graduation += 1
                continue
            if prev is None:
                prev = coaches[cid] = {"name": row["name"].strip(), "alma_mater": alma,
                                       "grad_year": grad, "stints": []}
            prev["stints"].append(Stint(school, start, end))

    records = []
    for cid, c in coaches.items():
        stints = tuple(sorted(c["stints"], key=lambda s: (s.start_year, s.end_year, s.school)))
        records.append(CoachRecord(cid, c["name"], c["alma_mater"], c["grad_year"], stints))
    return records, report


def parse_school_table(path, sport: Sport | str) -> SchoolTable:
    """Read ``schools.csv`` keeping the division column for ``sport``.

    Rows with out-of-range coordinates or an unusable division label are
    rejected; duplicate ids keep the last row. Both cases increment
    ``table.warnings``. Empty coordinates are allowed and stored as None.
    """
    sport = Sport.parse(sport)
    div_col = f"division_{sport.value}"
    table = SchoolTable(sport=sport)
    fh, reader = _open_csv(path, SCHOOL_COLUMNS)
    with fh:
        for row in reader:
            school = (row.get("school") or "").strip()
            if not school:
                table.warnings += 1
                continue
            try:
                lat = _float_or_none(row["latitude"])
                lon = _float_or_none(row["longitude"])
                if (lat is None) != (lon is None):
                    raise ValueError("only one coordinate given")
                if lat is not None and not -90.0 <= lat <= 90.0:
                    raise ValueError(f"latitude {lat} out of range")
                if lon is not None and not -180.0 <= lon <= 180.0:
                    raise ValueError(f"longitude {lon} out of range")
                division = parse_division(row[div_col] or "", sport)
            except (ValueError, TypeError):
                table.warnings += 1
                continue
            if school in table:
                table.warnings += 1
            table[school] = SchoolInfo(school, (row["display_name"] or "").strip(), lat, lon, division)
    return table


def _float_or_none(text):
    text = (text or "").strip()
    return float(text) if text else None


def parse_ap_polls(path, sport: Sport | str | None = None) -> PollTable:
    """Read ``ap_polls.csv`` for one sport.

    ``sport`` may be omitted when the file holds a single sport. Within a
    year, ranks must run 1..m without gaps or repeats and a school may be
    ranked once; violations raise SchemaError.
    """
    rows = []
    fh, reader = _open_csv(path, POLL_COLUMNS)
    with fh:
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append((Sport.parse(row["sport"]), int(row["year"]), int(row["rank"]),
                             row["school"].strip()))
            except (ValueError, AttributeError) as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None

    if sport is None:
        sports = {r[0] for r in rows}
        if len(sports) > 1:
            raise SchemaError(f"{path}: holds several sports; pass sport explicitly")
        sport = sports.pop() if sports else Sport.BASKETBALL
    sport = Sport.parse(sport)

    seen_rank: set[tuple[int, int]] = set()
    seen_school: set[tuple[int, str]] = set()
    ranks_per_year: dict[int, list[int]] = defaultdict(list)
    entries = []
    for s, year, rank, school in rows:
        if s is not sport:
            continue
        if rank < 1 or not school:
            raise SchemaError(f"{path}: invalid entry ({year}, {rank}, {school!r})")
        if (year, rank) in seen_rank:
            raise SchemaError(f"{path}: duplicate rank {rank} in {year}")
        if (year, school) in seen_school:
            raise SchemaError(f"{path}: school {school} ranked twice in {year}")
        seen_rank.add((year, rank))
        seen_school.add((year, school))
        ranks_per_year[year].append(rank)
        entries.append(PollEntry(year, rank, school))
    for year, ranks in ranks_per_year.items():
        if max(ranks) != len(ranks):
            raise SchemaError(f"{path}: ranks in {year} have gaps (max {max(ranks)}, count {len(ranks)})")
    entries.sort(key=lambda e: (e.year, e.rank))
    return PollTable(sport, tuple(entries))
