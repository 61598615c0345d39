"""Pure scoring kernel for the activity risk model.

Maps the raw quantities of a planned activity (people met, local weekly
incidence, repetition, duration, and the barriers distance, mask and
ventilation) onto small integer scores on a logarithmic scale, combines
them into the frequency score F, and classifies the pair (severity, F)
through a risk score matrix. The scale is calibrated so that one score
unit corresponds to a factor of sqrt(10) in cumulative virus dose, which
is why multiplicative risk factors become additive scores.

Everything here is a pure function over immutable values; no I/O.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import lru_cache
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .matrix import RiskMatrix

#: Default superspreader threshold: activities meeting more untested people
#: than this are refused outright instead of scored, since crowd dynamics
#: may turn exponential and the additive score model no longer applies.
DEFAULT_MAX_PERSONS = 100

#: Row range of the risk score matrix. F is clamped into this window only
#: at lookup time so the raw sum stays reportable for what-if deltas.
F_MIN = 3
F_MAX = 15


class ValidationError(ValueError):
    """An input violates a documented range or enumeration."""


class NoExposure(Exception):
    """The activity meets no untested external person; nothing to score."""


class ActivityRefused(Exception):
    """The person count exceeds the threshold; the activity should not be
    performed at all rather than scored."""

    def __init__(self, persons: int, max_persons: int):
        super().__init__(
            f"{persons} untested external persons exceed the limit of "
            f"{max_persons}; this activity should not be performed"
        )
        self.persons = persons
        self.max_persons = max_persons


class Severity(IntEnum):
    """Individual impact category; I is the most severe, VI the least."""

    I = 1
    II = 2
    III = 3
    IV = 4
    V = 5
    VI = 6

    @classmethod
    def from_label(cls, label: str) -> "Severity":
        try:
            return cls[str(label).strip().upper()]
        except KeyError:
            raise ValidationError(f"unknown severity class {label!r}") from None


class RiskClass(IntEnum):
    """Color-coded verdict, ordered from acceptable to not acceptable."""

    GREEN = 0
    YELLOW = 1
    ORANGE = 2
    RED = 3

    @property
    def recommendation(self) -> str:
        return _RECOMMENDATIONS[self]

    @property
    def wire(self) -> str:
        return self.name.lower()

    @classmethod
    def from_wire(cls, text: str) -> "RiskClass":
        try:
            return cls[str(text).strip().upper()]
        except KeyError:
            raise ValidationError(f"unknown risk class {text!r}") from None


_RECOMMENDATIONS = {
    RiskClass.GREEN: (
        "risk may be accepted if all other recommended measures are "
        "carefully implemented"
    ),
    RiskClass.YELLOW: "risk should be avoided if alternatives exist",
    RiskClass.ORANGE: (
        "risk should be taken only if it is unavoidable, e.g. as part of "
        "necessary work"
    ),
    RiskClass.RED: (
        "risk should be taken only in exceptional circumstances, "
        "e.g. an emergency"
    ),
}


class OccupationalExposure(str, Enum):
    """Work-related contact to vulnerable or potentially infectious persons."""

    VERY_HIGH = "very_high"
    HIGH = "high"
    MODERATE = "moderate"
    LOW = "low"
    NONE = "none"


class MedicalCondition(str, Enum):
    DEMENTIA_OR_MENTAL_HANDICAP = "dementia_or_mental_handicap"
    SEVERE = "severe"
    MODERATE = "moderate"
    NONE = "none"


class Mask(str, Enum):
    NONE = "none"
    EVERYDAY = "everyday"
    FFP2 = "ffp2"
    BETTER = "better"

    @classmethod
    def _missing_(cls, value):
        # accepted long form of the FFP2 option
        if value == "medical_ffp2":
            return cls.FFP2
        return None


class Ventilation(str, Enum):
    NONE = "none"
    OPEN_WINDOWS = "open_windows"
    FILTERED_AC = "filtered_ac"
    OUTDOOR = "outdoor"


class DecayModel(IntEnum):
    """How virus concentration falls with distance; the value is the decay
    exponent of 1/D."""

    ROOM_UNIFORM = 0  # fully mixed room, distancing does not help
    CYLINDRICAL = 1  # cylindrical wave, concentration ~ 1/D
    SPHERICAL = 2  # spherical wave, concentration ~ 1/D^2
    VOLUME = 3  # free dilution into a volume, concentration ~ 1/D^3


@dataclass(frozen=True)
class PersonProfile:
    """Inputs for the severity classification. `age` in whole years."""

    age: int
    care_home_resident: bool = False
    occupational_exposure: OccupationalExposure = OccupationalExposure.NONE
    medical_condition: MedicalCondition = MedicalCondition.NONE
    system_relevant_job: bool = False
    teacher: bool = False

    def __post_init__(self):
        if isinstance(self.age, bool) or not isinstance(self.age, int):
            raise ValidationError("age must be an integer")
        if not 0 <= self.age <= 150:
            raise ValidationError(f"age {self.age} outside 0..150")


def classify_severity(profile: PersonProfile) -> Severity:
    """Most severe class whose rule matches the profile (I wins over VI)."""
    exposure = OccupationalExposure(profile.occupational_exposure)
    condition = MedicalCondition(profile.medical_condition)
    if (
        profile.age > 80
        or profile.care_home_resident
        or exposure is OccupationalExposure.VERY_HIGH
    ):
        return Severity.I
    if (
        profile.age > 75
        or condition is MedicalCondition.DEMENTIA_OR_MENTAL_HANDICAP
        or exposure is OccupationalExposure.HIGH
    ):
        return Severity.II
    if (
        profile.age > 70
        or condition is MedicalCondition.SEVERE
        or exposure is OccupationalExposure.MODERATE
    ):
        return Severity.III
    if (
        profile.age > 65
        or condition is MedicalCondition.MODERATE
        or exposure is OccupationalExposure.LOW
        or profile.teacher
    ):
        return Severity.IV
    if profile.age > 60 or profile.system_relevant_job:
        return Severity.V
    return Severity.VI


@dataclass(frozen=True)
class Band:
    """One row of a parameter score table.

    Bands are checked in order; a value belongs to the first band whose
    upper bound it does not reach (strictly below `hi`, or `<= hi` when
    `hi_inclusive`). `value` is the canonical raw value used when a
    what-if move targets this band, chosen near the band's upper edge.
    """

    score: int
    label: str
    lo: float
    hi: float | None  # None: unbounded above
    value: float
    hi_inclusive: bool = False


@dataclass(frozen=True)
class Option:
    """One row of an enumerated score table (masks, ventilation)."""

    score: int
    label: str
    value: str


W_BANDS: tuple[Band, ...] = (
    Band(1, "very low (below 10)", 0, 10, 5),
    Band(2, "low (10 to 35)", 10, 35, 20),
    Band(3, "moderate (35 to 100)", 35, 100, 80),
    Band(4, "high (100 to 300)", 100, 300, 200),
    Band(5, "very high (300 and above)", 300, None, 400),
)

C_BANDS: tuple[Band, ...] = (
    Band(0, "once per week or less", 0, 1, 1, hi_inclusive=True),
    Band(1, "several times per week", 1, 7, 3),
    Band(2, "daily or more often", 7, None, 7),
)

T_BANDS: tuple[Band, ...] = (
    Band(1, "very short (under 1 min)", 0, 1, 0.5),
    Band(2, "short (under 5 min)", 1, 5, 4),
    Band(3, "medium (under 10 min)", 5, 10, 9),
    Band(4, "long (under 30 min)", 10, 30, 25),
    Band(5, "very long (under 90 min)", 30, 90, 60),
    Band(6, "90 min and above", 90, None, 120),
)

D_BANDS: tuple[Band, ...] = (
    Band(0, "under 2 m", 0, 2, 1),
    Band(1, "2 m to under 5 m", 2, 5, 2),
    Band(2, "5 m and more", 5, None, 5),
)

MASK_OPTIONS: tuple[Option, ...] = (
    Option(0, "no mask", Mask.NONE.value),
    Option(1, "simple everyday mask", Mask.EVERYDAY.value),
    Option(2, "medical mask (FFP2 or similar)", Mask.FFP2.value),
    Option(3, "better than FFP2", Mask.BETTER.value),
)

VENTILATION_OPTIONS: tuple[Option, ...] = (
    Option(0, "no ventilation", Ventilation.NONE.value),
    Option(1, "frequent airing (open windows)", Ventilation.OPEN_WINDOWS.value),
    Option(2, "air conditioning with filters", Ventilation.FILTERED_AC.value),
    Option(3, "outdoor", Ventilation.OUTDOOR.value),
)

_MASK_SCORES = {Mask(option.value): option.score for option in MASK_OPTIONS}
_VENT_SCORES = {Ventilation(option.value): option.score for option in VENTILATION_OPTIONS}


@lru_cache(maxsize=16)
def n_bands(max_persons: int = DEFAULT_MAX_PERSONS) -> tuple[Band, ...]:
    """Person-count bands, the top band capped at the refusal threshold."""
    if isinstance(max_persons, bool) or not isinstance(max_persons, int):
        raise ValidationError("max_persons must be an integer")
    if max_persons < 1:
        raise ValidationError("max_persons must be >= 1")
    template = (
        (1, 1, "a single person"),
        (2, 5, "a couple or small group"),
        (3, 15, "a large group"),
        (4, 50, "many people"),
        (5, None, "very many people"),
    )
    bands: list[Band] = []
    lo = 1
    for score, hi, text in template:
        if lo > max_persons:
            break
        top = max_persons if hi is None else min(hi, max_persons)
        label = text if lo == top == 1 else f"{text} ({lo} to {top})"
        bands.append(Band(score, label, lo, top, top, hi_inclusive=True))
        lo = top + 1
        if top == max_persons:
            break
    return tuple(bands)


def _band_for(bands: tuple[Band, ...], x: float) -> Band | None:
    for band in bands:
        if band.hi is None:
            return band
        if x < band.hi or (band.hi_inclusive and x <= band.hi):
            return band
    return None  # beyond a bounded top band (person counts only)


def _require_number(name: str, value, minimum: float = 0.0):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number")
    if not math.isfinite(value) or value < minimum:
        raise ValidationError(f"{name} must be a finite number >= {minimum:g}")


def score_n(persons: int, max_persons: int = DEFAULT_MAX_PERSONS) -> int:
    """Score for the count of untested external persons met.

    Raises NoExposure for zero persons (there is nothing to assess) and
    ActivityRefused above the threshold; both are outcomes for the caller
    to report, not scores.
    """
    if isinstance(persons, bool) or not isinstance(persons, int):
        raise ValidationError("persons must be an integer")
    if persons < 0:
        raise ValidationError("persons must be >= 0")
    if persons == 0:
        raise NoExposure("no untested external persons are met")
    band = _band_for(n_bands(max_persons), persons)
    if band is None:
        raise ActivityRefused(persons, max_persons)
    return band.score


def score_w(weekly_incidence: float) -> int:
    """Score for the weekly incidence per 100,000 inhabitants."""
    _require_number("weekly_incidence", weekly_incidence)
    return _band_for(W_BANDS, weekly_incidence).score


def score_c(exposures_per_week: float) -> int:
    """Score for how often the exposure repeats within a week."""
    _require_number("exposures_per_week", exposures_per_week)
    return _band_for(C_BANDS, exposures_per_week).score


def score_t(duration_minutes: float) -> int:
    """Score for the duration of a single exposure."""
    if isinstance(duration_minutes, bool) or not isinstance(duration_minutes, (int, float)):
        raise ValidationError("duration_minutes must be a number")
    if not math.isfinite(duration_minutes) or duration_minutes <= 0:
        raise ValidationError("duration_minutes must be a finite number > 0")
    return _band_for(T_BANDS, duration_minutes).score


def score_d(distance_meters: float) -> int:
    """Barrier score for the average distance kept."""
    _require_number("distance_meters", distance_meters)
    return _band_for(D_BANDS, distance_meters).score


def score_m(mask: Mask | str) -> int:
    """Barrier score for the type of mask worn."""
    try:
        return _MASK_SCORES[Mask(mask)]
    except ValueError:
        raise ValidationError(f"unknown mask type {mask!r}") from None


def score_v(ventilation: Ventilation | str) -> int:
    """Barrier score for the ventilation of the location."""
    try:
        return _VENT_SCORES[Ventilation(ventilation)]
    except ValueError:
        raise ValidationError(f"unknown ventilation type {ventilation!r}") from None


_SCORE_RANGES = {
    "n": (1, 5),
    "w": (1, 5),
    "c": (0, 2),
    "t": (1, 6),
    "d": (0, 2),
    "m": (0, 3),
    "v": (0, 3),
}


def frequency_score(n: int, w: int, c: int, t: int, d: int = 0, m: int = 0, v: int = 0) -> int:
    """Combined frequency score: additive sources minus barriers.

    The result is deliberately not clamped; clamping happens only at matrix
    lookup so what-if comparisons can work on the raw value.
    """
    for name, value in (("n", n), ("w", w), ("c", c), ("t", t), ("d", d), ("m", m), ("v", v)):
        lo, hi = _SCORE_RANGES[name]
        if isinstance(value, bool) or not isinstance(value, int) or not lo <= value <= hi:
            raise ValidationError(f"score {name}={value!r} outside {lo}..{hi}")
    return n + w + c + t - d - m - v


@dataclass(frozen=True)
class ScoredScenario:
    """The seven component scores of a scenario plus the derived F."""

    n: int
    w: int
    c: int
    t: int
    d: int = 0
    m: int = 0
    v: int = 0
    f: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "f", frequency_score(self.n, self.w, self.c, self.t, self.d, self.m, self.v)
        )


def lookup_risk(matrix: "RiskMatrix", severity: Severity, f: int) -> RiskClass:
    """Risk class for (severity, F). F beyond the matrix clamps to its edge
    rows: anything below the lowest row cannot be worse than it, anything
    above the highest row cannot be better."""
    if isinstance(f, bool) or not isinstance(f, int):
        raise ValidationError("f must be an integer")
    clamped = min(max(f, F_MIN), F_MAX)
    return matrix.at(clamped, Severity(severity))


def factor_to_score(ratio: float) -> float:
    """Log of a multiplicative risk factor in base sqrt(10), the width of
    one score unit. Doubling a dose is worth about 0.6 score points."""
    if isinstance(ratio, bool) or not isinstance(ratio, (int, float)):
        raise ValidationError("ratio must be a number")
    if not math.isfinite(ratio) or ratio <= 0:
        raise ValidationError("ratio must be finite and > 0")
    return 2.0 * math.log10(ratio)


def concentration_ratio(model: DecayModel, d_ref: float, d: float) -> float:
    """Concentration at distance `d` relative to the reference distance
    under a decay model; the fully mixed room gives 1 everywhere."""
    for name, value in (("d_ref", d_ref), ("d", d)):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"{name} must be a number")
        if not math.isfinite(value) or value <= 0:
            raise ValidationError(f"{name} must be finite and > 0")
    return (d_ref / d) ** DecayModel(model).value
