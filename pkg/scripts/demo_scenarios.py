#!/usr/bin/env python3
"""Walk the reference scenarios through the engine and print the verdicts,
the nurse's what-if options, and the calibration check of the shipped
matrix. Run from the repository root: `python scripts/demo_scenarios.py`.
"""

from riskgate import (
    CalibrationPoint,
    Mask,
    OccupationalExposure,
    PersonProfile,
    RawScenario,
    Schedule,
    Severity,
    Ventilation,
    assess,
    assess_schedule,
    check_points,
    default_matrix,
    detect_conflicts,
    validate_matrix,
    what_if,
)

EVERYMAN = PersonProfile(age=55)
NURSE = PersonProfile(age=55, occupational_exposure=OccupationalExposure.VERY_HIGH)

SHOPPING = RawScenario(
    persons=30, weekly_incidence=80, exposures_per_week=3,
    duration_minutes=4, label="click&meet shopping",
)
METRO = RawScenario(
    persons=30, weekly_incidence=20, exposures_per_week=7,
    duration_minutes=7, mask=Mask.FFP2, label="crowded metro commute",
)
SCHOOL_BARE = RawScenario(
    persons=12, weekly_incidence=50, exposures_per_week=3,
    duration_minutes=300, label="school day, half classes, no barriers",
)
SCHOOL_GUARDED = RawScenario(
    persons=12, weekly_incidence=50, exposures_per_week=3,
    duration_minutes=300, mask=Mask.EVERYDAY, ventilation=Ventilation.OPEN_WINDOWS,
    label="school day, half classes, windows open, masks",
)


def show(scenario, profile, matrix, who):
    result = assess(scenario, profile, matrix)
    print(f"  {scenario.label} / {who}: "
          f"f={result.scored.f} {result.risk.name} (severity {result.severity.name})")


def main():
    matrix = default_matrix()

    print("verdicts")
    show(SHOPPING, EVERYMAN, matrix, "55-year-old, no preconditions")
    show(SHOPPING, NURSE, matrix, "nurse in contact with vulnerable persons")
    show(METRO, NURSE, matrix, "nurse")
    show(SCHOOL_BARE, EVERYMAN, matrix, "student")
    show(SCHOOL_GUARDED, EVERYMAN, matrix, "student")

    print("\nwhat-if for the nurse's shopping errand (top 5)")
    for rank, option in enumerate(what_if(SHOPPING, NURSE, matrix)[:5], start=1):
        moves = "; ".join(f"{c.field} -> {c.band}" for c in option.changes)
        print(f"  {rank}. {moves}  =>  f={option.new_f} {option.new_risk.name}")

    print("\nschedule: shopping plus metro, for the nurse")
    day = assess_schedule(Schedule(entries=(SHOPPING, METRO)), NURSE, matrix)
    for entry in day.entries:
        print(f"  {entry.scenario.label}: f={entry.scored.f} {entry.risk.name}")
    print(f"  headline: {day.headline.name}")
    print(f"  ({day.warning})")

    print("\nmatrix validation")
    report = validate_matrix(matrix)
    print(f"  {len(report.errors)} errors, {len(report.warnings)} row-jump warnings "
          f"at rows {sorted({w.f for w in report.warnings})}")

    print("\ncalibration points")
    anchors = [
        CalibrationPoint(Severity.I, 6, "acceptable", "short infrequent encounter"),
        CalibrationPoint(Severity.VI, 11, "acceptable", "household meets one person"),
    ]
    ban = CalibrationPoint(Severity.IV, 3, "forbidden", "nursing home visiting ban")
    print(f"  anchors satisfied: {check_points(matrix, anchors).ok}")
    for p, q in detect_conflicts(anchors + [ban]):
        print(f"  conflict: {p.describe()} vs {q.describe()}")
        print("  (the ban cannot be explained by individual risk; it needs other reasons)")


if __name__ == "__main__":
    main()
