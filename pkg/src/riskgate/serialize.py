"""JSON payload builders shared by the CLI and the HTTP service.

Both surfaces emit the exact same documents for the same inputs; nothing
else in the package builds response dictionaries.
"""

from __future__ import annotations

from . import model
from .incidence import WResolution
from .matrix import CalibrationPoint, Finding, RiskMatrix, ValidationReport
from .model import F_MAX, F_MIN, Band, Option, PersonProfile, RiskClass, Severity
from .scenario import Assessment, Mitigation, ScheduleAssessment


def risk_wire(risk: RiskClass | None) -> str | None:
    return None if risk is None else risk.wire


def assessment_payload(assessment: Assessment) -> dict:
    scored = assessment.scored
    scores = None
    if scored is not None:
        scores = {
            "n": scored.n,
            "w": scored.w,
            "c": scored.c,
            "t": scored.t,
            "d": scored.d,
            "m": scored.m,
            "v": scored.v,
        }
    risk = assessment.risk
    return {
        "label": assessment.scenario.label,
        "severity": assessment.severity.name,
        "refused": assessment.refused,
        "no_exposure": assessment.no_exposure,
        "scores": scores,
        "f": scored.f if scored is not None else None,
        "risk": risk_wire(risk),
        "recommendation": risk.recommendation if risk is not None else None,
        "notes": list(assessment.notes),
    }


def mitigation_payload(mitigation: Mitigation) -> dict:
    return {
        "changes": [
            {
                "field": change.field,
                "to": change.to,
                "band": change.band,
                "score": change.score,
            }
            for change in mitigation.changes
        ],
        "new_f": mitigation.new_f,
        "new_risk": mitigation.new_risk.wire,
        "recommendation": mitigation.new_risk.recommendation,
    }


def whatif_payload(original: Assessment, mitigations: list[Mitigation]) -> dict:
    return {
        "original": assessment_payload(original),
        "mitigations": [mitigation_payload(m) for m in mitigations],
    }


def schedule_payload(assessed: ScheduleAssessment) -> dict:
    return {
        "warning": assessed.warning,
        "headline": risk_wire(assessed.headline),
        "any_refused": assessed.any_refused,
        "entries": [assessment_payload(entry) for entry in assessed.entries],
    }


def matrix_payload(matrix: RiskMatrix) -> dict:
    return {
        "name": matrix.name,
        "version": matrix.version,
        "f_min": F_MIN,
        "f_max": F_MAX,
        "severities": [s.name for s in Severity],
        "classes": [
            {"class": risk.wire, "recommendation": risk.recommendation}
            for risk in RiskClass
        ],
        "rows": [
            {
                "f": f,
                "cells": {s.name: matrix.at(f, s).wire for s in Severity},
            }
            for f in range(F_MIN, F_MAX + 1)
        ],
    }


def _band_option(band: Band) -> dict:
    return {
        "score": band.score,
        "label": band.label,
        "min": band.lo,
        "max": band.hi,
        "value": band.value,
    }


def _enum_option(option: Option) -> dict:
    return {"score": option.score, "label": option.label, "value": option.value}


def tables_payload(max_persons: int = model.DEFAULT_MAX_PERSONS) -> dict:
    """All seven parameter band tables, exactly as the scoring kernel
    defines them; UIs build their selectors from this and hold no band
    constants of their own."""
    persons = [_band_option(band) for band in model.n_bands(max_persons)]
    # deliberate overflow choice so a UI can demonstrate the refusal path
    persons.append({
        "score": None,
        "label": f"more than {max_persons} (the activity will be refused)",
        "min": max_persons + 1,
        "max": None,
        "value": max_persons * 5,
    })
    return {
        "max_persons": max_persons,
        "parameters": [
            {
                "field": "persons",
                "symbol": "n",
                "title": "Untested people met",
                "kind": "count",
                "options": persons,
            },
            {
                "field": "weekly_incidence",
                "symbol": "w",
                "title": "Weekly incidence per 100,000",
                "kind": "number",
                "options": [_band_option(band) for band in model.W_BANDS],
            },
            {
                "field": "exposures_per_week",
                "symbol": "c",
                "title": "Repetition per week",
                "kind": "number",
                "options": [_band_option(band) for band in model.C_BANDS],
            },
            {
                "field": "duration_minutes",
                "symbol": "t",
                "title": "Duration of one exposure",
                "kind": "number",
                "options": [_band_option(band) for band in model.T_BANDS],
            },
            {
                "field": "distance_meters",
                "symbol": "d",
                "title": "Average distance kept",
                "kind": "number",
                "options": [_band_option(band) for band in model.D_BANDS],
            },
            {
                "field": "mask",
                "symbol": "m",
                "title": "Mask worn",
                "kind": "enum",
                "options": [_enum_option(option) for option in model.MASK_OPTIONS],
            },
            {
                "field": "ventilation",
                "symbol": "v",
                "title": "Ventilation",
                "kind": "enum",
                "options": [_enum_option(option) for option in model.VENTILATION_OPTIONS],
            },
        ],
    }


def finding_payload(finding: Finding) -> dict:
    return {
        "rule": finding.rule,
        "message": finding.message,
        "f": finding.f,
        "severity": finding.severity,
    }


def validation_payload(report: ValidationReport) -> dict:
    return {
        "ok": report.ok,
        "errors": [finding_payload(finding) for finding in report.errors],
        "warnings": [finding_payload(finding) for finding in report.warnings],
    }


def point_payload(point: CalibrationPoint) -> dict:
    return {
        "severity": point.severity.name,
        "f": point.f,
        "expectation": point.expectation,
        "note": point.note,
    }


def calibration_payload(
    conflicts: list[tuple[CalibrationPoint, CalibrationPoint]],
    report: ValidationReport,
) -> dict:
    return {
        "ok": not conflicts and report.ok,
        "conflicts": [
            {"a": point_payload(p), "b": point_payload(q)} for p, q in conflicts
        ],
        "violations": [finding_payload(finding) for finding in report.errors],
    }


def incidence_payload(resolution: WResolution) -> dict:
    record = resolution.record
    return {
        "region": record.region,
        "date": record.date.isoformat(),
        "weekly_incidence": record.weekly_incidence,
        "w": resolution.w,
        "stale": resolution.stale,
    }


def profile_payload(profile: PersonProfile) -> dict:
    return {
        "age": profile.age,
        "care_home_resident": profile.care_home_resident,
        "occupational_exposure": profile.occupational_exposure.value,
        "medical_condition": profile.medical_condition.value,
        "system_relevant_job": profile.system_relevant_job,
        "teacher": profile.teacher,
    }
