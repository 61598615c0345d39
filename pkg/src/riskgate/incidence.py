"""Weekly incidence ingestion and lookup.

Reads `region,date,weekly_incidence` CSV files, JSON files, or any HTTP
endpoint returning `[{"region": ..., "date": ..., "weekly_incidence": ...}]`,
and resolves (region, date) to the W parameter. No provider-specific
clients: national dashboards differ, so exports are converted offline into
this minimal shape.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path

import requests

from .model import ValidationError, score_w

#: A weekly metric plus one missed publication cycle: records older than
#: this many days before the requested date are flagged stale.
STALENESS_DAYS = 14

_CSV_COLUMNS = ["region", "date", "weekly_incidence"]


class IncidenceFormatError(ValidationError):
    """A source that does not parse into valid incidence records."""


class IncidenceTransportError(Exception):
    """A remote source that cannot be reached (distinct from bad data)."""


class IncidenceLookupError(LookupError):
    """No usable record for the requested region and date."""


@dataclass(frozen=True, order=True)
class IncidenceRecord:
    region: str
    date: dt.date
    weekly_incidence: float


@dataclass(frozen=True)
class WResolution:
    """A resolved W score plus the record it came from and a staleness flag."""

    record: IncidenceRecord
    w: int
    stale: bool


@dataclass(frozen=True)
class IncidenceTable:
    """Immutable lookup table; a reload builds a whole new table, so
    concurrent readers never see a half-updated one."""

    records: tuple[IncidenceRecord, ...]
    warnings: tuple[str, ...] = ()
    source: str = ""
    from_cache: bool = False
    _by_region: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_region: dict[str, list[IncidenceRecord]] = {}
        for record in self.records:
            by_region.setdefault(record.region, []).append(record)
        for rows in by_region.values():
            rows.sort(key=lambda r: r.date)
        object.__setattr__(self, "_by_region", by_region)

    def regions(self) -> list[str]:
        return sorted(self._by_region)

    def resolve(self, region: str, date: dt.date) -> WResolution:
        """Latest record at or before `date` for the region, scored through
        the weekly-incidence bands."""
        rows = self._by_region.get(region)
        if rows is None:
            raise IncidenceLookupError(f"unknown region {region!r}")
        index = bisect_right([r.date for r in rows], date)
        if index == 0:
            raise IncidenceLookupError(
                f"no incidence record for {region!r} at or before {date.isoformat()}"
            )
        record = rows[index - 1]
        stale = (date - record.date).days > STALENESS_DAYS
        return WResolution(record=record, w=score_w(record.weekly_incidence), stale=stale)


def resolve_w(table: IncidenceTable, region: str, date: dt.date) -> WResolution:
    """Module-level spelling of IncidenceTable.resolve."""
    return table.resolve(region, date)


def _make_record(region, date_text, incidence, where: str) -> IncidenceRecord:
    if not isinstance(region, str) or not region.strip():
        raise IncidenceFormatError(f"{where}: region must be a non-empty string")
    if isinstance(date_text, str):
        try:
            date = dt.date.fromisoformat(date_text.strip())
        except ValueError:
            raise IncidenceFormatError(f"{where}: not an ISO date: {date_text!r}") from None
    else:
        raise IncidenceFormatError(f"{where}: date must be an ISO date string")
    if isinstance(incidence, str):
        try:
            incidence = float(incidence)
        except ValueError:
            raise IncidenceFormatError(
                f"{where}: weekly_incidence is not a number: {incidence!r}"
            ) from None
    if isinstance(incidence, bool) or not isinstance(incidence, (int, float)):
        raise IncidenceFormatError(f"{where}: weekly_incidence must be a number")
    if incidence < 0:
        raise IncidenceFormatError(f"{where}: weekly_incidence must be >= 0")
    return IncidenceRecord(region.strip(), date, float(incidence))


def _deduplicate(
    records: list[IncidenceRecord], source: str
) -> tuple[tuple[IncidenceRecord, ...], tuple[str, ...]]:
    seen: dict[tuple[str, dt.date], IncidenceRecord] = {}
    warnings: list[str] = []
    for record in records:
        key = (record.region, record.date)
        if key in seen:
            warnings.append(
                f"{source}: duplicate record for {record.region!r} on "
                f"{record.date.isoformat()}; keeping the later one"
            )
        seen[key] = record  # latest occurrence wins
    ordered = tuple(sorted(seen.values()))
    return ordered, tuple(warnings)


def parse_csv(text: str, source: str = "csv") -> IncidenceTable:
    """Parse `region,date,weekly_incidence` rows; a single header row and
    `#` comment lines are tolerated."""
    records: list[IncidenceRecord] = []
    data_seen = False
    for rowno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        if not data_seen and [column.strip().lower() for column in row] == _CSV_COLUMNS:
            continue  # optional header
        data_seen = True
        if len(row) != 3:
            raise IncidenceFormatError(
                f"{source}:{rowno}: expected 3 columns (region,date,weekly_incidence), "
                f"got {len(row)}"
            )
        records.append(_make_record(row[0], row[1].strip(), row[2].strip(), f"{source}:{rowno}"))
    ordered, warnings = _deduplicate(records, source)
    return IncidenceTable(records=ordered, warnings=warnings, source=source)


def _table_from_json(doc, source: str) -> IncidenceTable:
    if not isinstance(doc, list):
        raise IncidenceFormatError(f"{source}: expected a JSON array of records")
    records: list[IncidenceRecord] = []
    for index, item in enumerate(doc):
        where = f"{source}[{index}]"
        if not isinstance(item, dict):
            raise IncidenceFormatError(f"{where}: expected an object")
        unknown = set(item) - set(_CSV_COLUMNS)
        if unknown:
            raise IncidenceFormatError(f"{where}: unknown keys {sorted(unknown)}")
        for key in _CSV_COLUMNS:
            if key not in item:
                raise IncidenceFormatError(f"{where}: missing key {key!r}")
        records.append(_make_record(item["region"], item["date"], item["weekly_incidence"], where))
    ordered, warnings = _deduplicate(records, source)
    return IncidenceTable(records=ordered, warnings=warnings, source=source)


def _write_cache(path: Path, table: IncidenceTable) -> None:
    payload = [
        {
            "region": record.region,
            "date": record.date.isoformat(),
            "weekly_incidence": record.weekly_incidence,
        }
        for record in table.records
    ]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload))


def load_incidence(source: str | Path, cache_path: str | Path | None = None) -> IncidenceTable:
    """Load incidence data from a CSV file, a JSON file or an HTTP endpoint.

    Remote fetches are written to `cache_path` when given; when the
    endpoint is unreachable and a cache exists, the cache is served
    instead, marked `from_cache` and with a warning attached. An
    unreachable endpoint without a cache raises IncidenceTransportError,
    which is distinct from any data-format error.
    """
    text_source = str(source)
    if text_source.startswith(("http://", "https://")):
        try:
            response = requests.get(text_source, timeout=10)
            response.raise_for_status()
        except requests.RequestException as exc:
            if cache_path is not None and Path(cache_path).exists():
                cached = load_incidence(Path(cache_path))
                warning = f"using cached data; {text_source} unreachable ({exc})"
                return IncidenceTable(
                    records=cached.records,
                    warnings=cached.warnings + (warning,),
                    source=text_source,
                    from_cache=True,
                )
            raise IncidenceTransportError(f"cannot reach {text_source}: {exc}") from exc
        try:
            doc = response.json()
        except ValueError:
            raise IncidenceFormatError(f"{text_source}: response is not JSON") from None
        table = _table_from_json(doc, source=text_source)
        if cache_path is not None:
            _write_cache(Path(cache_path), table)
        return table

    path = Path(source)
    text = path.read_text()  # missing files raise FileNotFoundError as-is
    if path.suffix.lower() == ".json":
        return _table_from_json(json.loads(text), source=str(path))
    return parse_csv(text, source=str(path))
