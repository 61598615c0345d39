"""Scenario and profile parsing, assessment, what-if mitigation search and
per-entry schedule assessment: the decision loop behind the CLI, the HTTP
service and the UI.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from . import model
from .model import (
    DEFAULT_MAX_PERSONS,
    ActivityRefused,
    Mask,
    MedicalCondition,
    NoExposure,
    OccupationalExposure,
    PersonProfile,
    RiskClass,
    ScoredScenario,
    Severity,
    ValidationError,
    Ventilation,
)

if TYPE_CHECKING:
    from .incidence import IncidenceTable
    from .matrix import RiskMatrix


class ParseError(ValidationError):
    """A document does not match the scenario, profile or schedule schema."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.reason = message


@dataclass(frozen=True)
class RawScenario:
    """Measurable quantities of one planned activity.

    `persons` counts untested persons external to the own household;
    household members and currently negative-tested or fully vaccinated
    persons are not counted. That rule is a documented contract for the
    person entering the number, not something the engine can check.
    """

    persons: int
    weekly_incidence: float
    exposures_per_week: float
    duration_minutes: float
    distance_meters: float = 0.0
    mask: Mask = Mask.NONE
    ventilation: Ventilation = Ventilation.NONE
    label: str = ""
    region: str | None = None


@dataclass(frozen=True)
class Assessment:
    """Result of assessing one scenario for one person.

    Exactly one of three shapes: scored (scores and risk set), refused
    (person count above the threshold, nothing scored), or no-exposure
    (zero persons met, trivially no risk).
    """

    scenario: RawScenario
    severity: Severity
    scored: ScoredScenario | None
    risk: RiskClass | None
    refused: bool
    notes: tuple[str, ...] = ()

    @property
    def no_exposure(self) -> bool:
        return self.scored is None and not self.refused


@dataclass(frozen=True)
class FieldChange:
    """A single-field move of a scenario to a better score band.

    `to` is the value written into the scenario field (a band's canonical
    raw value for numeric fields, the option value for enums); `band` is
    the human label of the target band, which is what gets displayed, since
    the band, not a fabricated exact number, is what drives the score.
    """

    field: str
    to: object
    band: str
    score: int


@dataclass(frozen=True)
class Mitigation:
    """One or two combined field changes and the score they lead to."""

    changes: tuple[FieldChange, ...]
    new_f: int
    new_risk: RiskClass


@dataclass(frozen=True)
class Schedule:
    """An ordered list of planned activities, assessed per entry."""

    entries: tuple[RawScenario, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValidationError("schedule must contain at least one entry")


@dataclass(frozen=True)
class ScheduleAssessment:
    entries: tuple[Assessment, ...]
    headline: RiskClass | None  # worst class over the scoreable entries
    any_refused: bool
    warning: str


MASK_ADVICE = (
    "the advice to wear masks should still be followed even though the "
    "assessed risk is green"
)

JOINT_EFFECT_WARNING = (
    "entries are assessed independently; the joint cumulative effect of "
    "combining them is not modeled, so the true overall risk may be higher"
)

_SCENARIO_KEYS = {
    "persons",
    "weekly_incidence",
    "region",
    "date",
    "exposures_per_week",
    "duration_minutes",
    "distance_meters",
    "mask",
    "ventilation",
    "label",
}

_PROFILE_KEYS = {
    "age",
    "care_home_resident",
    "occupational_exposure",
    "medical_condition",
    "system_relevant_job",
    "teacher",
}


def _require_mapping(document, location: str) -> Mapping:
    if not isinstance(document, Mapping):
        raise ParseError(location, "expected a JSON object")
    return document


def _get_int(doc: Mapping, key: str, location: str, minimum: int | None = None) -> int:
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{location}.{key}", "must be an integer")
    if minimum is not None and value < minimum:
        raise ParseError(f"{location}.{key}", f"must be >= {minimum}")
    return value


def _get_number(doc: Mapping, key: str, location: str, minimum: float = 0.0,
                exclusive: bool = False) -> float:
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{location}.{key}", "must be a number")
    if exclusive and not value > minimum:
        raise ParseError(f"{location}.{key}", f"must be > {minimum:g}")
    if not exclusive and value < minimum:
        raise ParseError(f"{location}.{key}", f"must be >= {minimum:g}")
    return float(value)


def _get_bool(doc: Mapping, key: str, location: str) -> bool:
    value = doc[key]
    if not isinstance(value, bool):
        raise ParseError(f"{location}.{key}", "must be true or false")
    return value


def _get_date(doc: Mapping, key: str, location: str) -> dt.date:
    value = doc[key]
    if not isinstance(value, str):
        raise ParseError(f"{location}.{key}", "must be an ISO date string")
    try:
        return dt.date.fromisoformat(value)
    except ValueError:
        raise ParseError(f"{location}.{key}", f"not an ISO date: {value!r}") from None


def parse_scenario(
    document,
    *,
    incidence: "IncidenceTable | None" = None,
    on_date: dt.date | None = None,
    location: str = "scenario",
) -> RawScenario:
    """Build a RawScenario from a JSON-compatible mapping.

    Required: `persons`, `exposures_per_week`, `duration_minutes`, and
    either `weekly_incidence` or `region` (resolved through a loaded
    incidence table, optionally at the document's `date`). Missing barrier
    fields default to no barrier at all: distance under 2 m, no mask, no
    ventilation.
    """
    doc = _require_mapping(document, location)
    unknown = set(doc) - _SCENARIO_KEYS
    if unknown:
        raise ParseError(location, f"unknown fields {sorted(unknown)}")
    for key in ("persons", "exposures_per_week", "duration_minutes"):
        if key not in doc:
            raise ParseError(location, f"missing required field {key!r}")

    persons = _get_int(doc, "persons", location, minimum=0)
    exposures = _get_number(doc, "exposures_per_week", location)
    duration = _get_number(doc, "duration_minutes", location, exclusive=True)

    has_incidence = "weekly_incidence" in doc
    has_region = "region" in doc
    if has_incidence and has_region:
        raise ParseError(location, "give either weekly_incidence or region, not both")
    if not has_incidence and not has_region:
        raise ParseError(location, "missing required field 'weekly_incidence' (or 'region')")

    region = None
    if has_incidence:
        weekly_incidence = _get_number(doc, "weekly_incidence", location)
    else:
        region = doc["region"]
        if not isinstance(region, str) or not region.strip():
            raise ParseError(f"{location}.region", "must be a non-empty string")
        region = region.strip()
        if incidence is None:
            raise ParseError(
                f"{location}.region", "no incidence data loaded to resolve a region"
            )
        date = _get_date(doc, "date", location) if "date" in doc else (on_date or dt.date.today())
        from .incidence import IncidenceLookupError

        try:
            weekly_incidence = incidence.resolve(region, date).record.weekly_incidence
        except IncidenceLookupError as exc:
            raise ParseError(f"{location}.region", str(exc)) from None

    distance = (
        _get_number(doc, "distance_meters", location) if "distance_meters" in doc else 0.0
    )
    mask = Mask.NONE
    if "mask" in doc:
        try:
            mask = Mask(doc["mask"])
        except ValueError:
            raise ParseError(f"{location}.mask", f"unknown mask type {doc['mask']!r}") from None
    ventilation = Ventilation.NONE
    if "ventilation" in doc:
        try:
            ventilation = Ventilation(doc["ventilation"])
        except ValueError:
            raise ParseError(
                f"{location}.ventilation", f"unknown ventilation type {doc['ventilation']!r}"
            ) from None
    label = ""
    if "label" in doc:
        if not isinstance(doc["label"], str):
            raise ParseError(f"{location}.label", "must be a string")
        label = doc["label"]

    return RawScenario(
        persons=persons,
        weekly_incidence=weekly_incidence,
        exposures_per_week=exposures,
        duration_minutes=duration,
        distance_meters=distance,
        mask=mask,
        ventilation=ventilation,
        label=label,
        region=region,
    )


def parse_profile(document, *, location: str = "profile") -> PersonProfile:
    """Build a PersonProfile from a JSON-compatible mapping; only `age` is
    required, everything else defaults to the unremarkable case."""
    doc = _require_mapping(document, location)
    unknown = set(doc) - _PROFILE_KEYS
    if unknown:
        raise ParseError(location, f"unknown fields {sorted(unknown)}")
    if "age" not in doc:
        raise ParseError(location, "missing required field 'age'")
    age = _get_int(doc, "age", location, minimum=0)
    if age > 150:
        raise ParseError(f"{location}.age", "must be <= 150")

    exposure = OccupationalExposure.NONE
    if "occupational_exposure" in doc:
        try:
            exposure = OccupationalExposure(doc["occupational_exposure"])
        except ValueError:
            raise ParseError(
                f"{location}.occupational_exposure",
                f"unknown value {doc['occupational_exposure']!r}",
            ) from None
    condition = MedicalCondition.NONE
    if "medical_condition" in doc:
        try:
            condition = MedicalCondition(doc["medical_condition"])
        except ValueError:
            raise ParseError(
                f"{location}.medical_condition",
                f"unknown value {doc['medical_condition']!r}",
            ) from None

    return PersonProfile(
        age=age,
        care_home_resident=_get_bool(doc, "care_home_resident", location)
        if "care_home_resident" in doc else False,
        occupational_exposure=exposure,
        medical_condition=condition,
        system_relevant_job=_get_bool(doc, "system_relevant_job", location)
        if "system_relevant_job" in doc else False,
        teacher=_get_bool(doc, "teacher", location) if "teacher" in doc else False,
    )


def parse_schedule(
    document,
    *,
    incidence: "IncidenceTable | None" = None,
    on_date: dt.date | None = None,
    location: str = "schedule",
) -> Schedule:
    """Accept either a bare JSON array of scenarios or `{"entries": [...]}`."""
    if isinstance(document, Mapping):
        unknown = set(document) - {"entries"}
        if unknown:
            raise ParseError(location, f"unknown fields {sorted(unknown)}")
        entries_doc = document.get("entries")
    else:
        entries_doc = document
    if not isinstance(entries_doc, Sequence) or isinstance(entries_doc, (str, bytes)):
        raise ParseError(location, "expected a list of scenarios under 'entries'")
    if not entries_doc:
        raise ParseError(location, "schedule must contain at least one entry")
    entries = tuple(
        parse_scenario(
            entry, incidence=incidence, on_date=on_date, location=f"{location}.entries[{i}]"
        )
        for i, entry in enumerate(entries_doc)
    )
    return Schedule(entries)


def assess(
    scenario: RawScenario,
    profile: PersonProfile,
    matrix: "RiskMatrix",
    *,
    max_persons: int = DEFAULT_MAX_PERSONS,
) -> Assessment:
    """Score a scenario for a person and look the result up in the matrix.

    A person count above the threshold yields a refused assessment; a
    scenario that meets nobody yields a no-exposure assessment. Both carry
    an explanatory note instead of scores.
    """
    severity = model.classify_severity(profile)
    try:
        n = model.score_n(scenario.persons, max_persons)
    except ActivityRefused as refusal:
        return Assessment(scenario, severity, None, None, True, (str(refusal),))
    except NoExposure as reason:
        return Assessment(
            scenario, severity, None, None, False, (f"{reason}; the risk is trivially nil",)
        )
    scored = ScoredScenario(
        n=n,
        w=model.score_w(scenario.weekly_incidence),
        c=model.score_c(scenario.exposures_per_week),
        t=model.score_t(scenario.duration_minutes),
        d=model.score_d(scenario.distance_meters),
        m=model.score_m(scenario.mask),
        v=model.score_v(scenario.ventilation),
    )
    risk = model.lookup_risk(matrix, severity, scored.f)
    notes = []
    if risk is RiskClass.GREEN and scenario.mask is Mask.NONE:
        notes.append(MASK_ADVICE)
    return Assessment(scenario, severity, scored, risk, False, tuple(notes))


# What-if field priority for rank ties: barriers first, behavior changes
# after, so the cheapest adjustments surface on top.
_PRIORITY = {
    "ventilation": 0,
    "distance_meters": 1,
    "mask": 2,
    "duration_minutes": 3,
    "exposures_per_week": 4,
    "persons": 5,
}

_PARAM_FOR_FIELD = {
    "persons": "n",
    "exposures_per_week": "c",
    "duration_minutes": "t",
    "distance_meters": "d",
    "mask": "m",
    "ventilation": "v",
}


def _component_scores(scenario: RawScenario, max_persons: int) -> dict[str, int | None]:
    try:
        n = model.score_n(scenario.persons, max_persons)
    except ActivityRefused:
        n = None  # refused scenarios have every other component scoreable
    return {
        "n": n,
        "w": model.score_w(scenario.weekly_incidence),
        "c": model.score_c(scenario.exposures_per_week),
        "t": model.score_t(scenario.duration_minutes),
        "d": model.score_d(scenario.distance_meters),
        "m": model.score_m(scenario.mask),
        "v": model.score_v(scenario.ventilation),
    }


def _single_improvements(
    current: dict[str, int | None], max_persons: int
) -> list[FieldChange]:
    """Every single-field move to a strictly better score band."""
    out: list[FieldChange] = []
    for option in model.VENTILATION_OPTIONS:
        if option.score > current["v"]:
            out.append(FieldChange("ventilation", option.value, option.label, option.score))
    for band in model.D_BANDS:
        if band.score > current["d"]:
            out.append(FieldChange("distance_meters", band.value, band.label, band.score))
    for option in model.MASK_OPTIONS:
        if option.score > current["m"]:
            out.append(FieldChange("mask", option.value, option.label, option.score))
    for band in model.T_BANDS:
        if band.score < current["t"]:
            out.append(FieldChange("duration_minutes", band.value, band.label, band.score))
    for band in model.C_BANDS:
        if band.score < current["c"]:
            out.append(FieldChange("exposures_per_week", band.value, band.label, band.score))
    for band in model.n_bands(max_persons):
        if current["n"] is None or band.score < current["n"]:
            out.append(FieldChange("persons", band.value, band.label, band.score))
    return out


def _rank_key(mitigation: Mitigation):
    return (
        mitigation.new_risk,
        mitigation.new_f,
        tuple(_PRIORITY[change.field] for change in mitigation.changes),
        tuple(str(change.to) for change in mitigation.changes),
    )


def what_if(
    scenario: RawScenario,
    profile: PersonProfile,
    matrix: "RiskMatrix",
    *,
    max_persons: int = DEFAULT_MAX_PERSONS,
) -> list[Mitigation]:
    """Ranked single and paired field changes that lower the risk.

    Enumerates every move of one raw field to a better score band plus all
    pairs of such moves on distinct fields (depth two, which is what a
    mask-plus-shorter-visit style combination needs). Ranks by resulting
    class, then resulting F, then barrier-before-behavior field priority.
    The weekly incidence is not a choice, so it is never varied.
    """
    original = assess(scenario, profile, matrix, max_persons=max_persons)
    if original.no_exposure:
        return []
    current = _component_scores(scenario, max_persons)
    refused = current["n"] is None

    singles = _single_improvements(current, max_persons)
    combos: list[tuple[FieldChange, ...]] = [(change,) for change in singles]
    for i, first in enumerate(singles):
        for second in singles[i + 1:]:
            if first.field != second.field:
                combos.append((first, second))

    mitigations: list[Mitigation] = []
    for changes in combos:
        if refused and all(change.field != "persons" for change in changes):
            continue  # still above the threshold, not a mitigation
        components = dict(current)
        for change in changes:
            components[_PARAM_FOR_FIELD[change.field]] = change.score
        new_f = model.frequency_score(**components)
        new_risk = model.lookup_risk(matrix, original.severity, new_f)
        if original.risk is not None and new_risk > original.risk:
            continue
        ordered = tuple(sorted(changes, key=lambda change: _PRIORITY[change.field]))
        mitigations.append(Mitigation(ordered, new_f, new_risk))
    mitigations.sort(key=_rank_key)
    return mitigations


def apply_changes(scenario: RawScenario, changes: Iterable[FieldChange]) -> RawScenario:
    """Mutated copy of the scenario with each change's band value written in."""
    updates: dict[str, object] = {}
    for change in changes:
        value = change.to
        if change.field == "mask":
            value = Mask(value)
        elif change.field == "ventilation":
            value = Ventilation(value)
        elif change.field == "persons":
            value = int(value)  # band values for persons are counts
        updates[change.field] = value
    return replace(scenario, **updates)


def assess_schedule(
    schedule: Schedule,
    profile: PersonProfile,
    matrix: "RiskMatrix",
    *,
    max_persons: int = DEFAULT_MAX_PERSONS,
) -> ScheduleAssessment:
    """Assess every entry independently and report the worst class.

    The fixed warning is always attached: this model cannot add up the
    doses of separate activities, so a schedule of individually green
    entries is not proven green overall.
    """
    results = []
    for index, entry in enumerate(schedule.entries):
        try:
            results.append(assess(entry, profile, matrix, max_persons=max_persons))
        except ValidationError as exc:
            raise ValidationError(f"entries[{index}]: {exc}") from None
    classes = [a.risk for a in results if a.risk is not None]
    return ScheduleAssessment(
        entries=tuple(results),
        headline=max(classes) if classes else None,
        any_refused=any(a.refused for a in results),
        warning=JOINT_EFFECT_WARNING,
    )
