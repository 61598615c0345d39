"""riskgate: a-priori infection risk scoring for planned activities.

The engine turns a planned activity into seven small integer scores, adds
the sources and subtracts the barriers into a frequency score F, and
classifies (severity, F) through a calibrated risk score matrix. On top
of that sit a what-if mitigation search, calibration-point validation for
the matrix itself, incidence ingestion, a local JSON service and a CLI.
"""

from .incidence import (
    IncidenceFormatError,
    IncidenceLookupError,
    IncidenceRecord,
    IncidenceTable,
    IncidenceTransportError,
    WResolution,
    load_incidence,
    resolve_w,
)
from .matrix import (
    CalibrationPoint,
    Finding,
    MatrixFormatError,
    RiskMatrix,
    ValidationReport,
    check_points,
    default_matrix,
    detect_conflicts,
    format_matrix,
    parse_matrix,
    parse_points,
    validate_matrix,
)
from .model import (
    DEFAULT_MAX_PERSONS,
    F_MAX,
    F_MIN,
    ActivityRefused,
    DecayModel,
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
    classify_severity,
    concentration_ratio,
    factor_to_score,
    frequency_score,
    lookup_risk,
    score_c,
    score_d,
    score_m,
    score_n,
    score_t,
    score_v,
    score_w,
)
from .scenario import (
    Assessment,
    FieldChange,
    Mitigation,
    ParseError,
    RawScenario,
    Schedule,
    ScheduleAssessment,
    apply_changes,
    assess,
    assess_schedule,
    parse_profile,
    parse_scenario,
    parse_schedule,
    what_if,
)

__version__ = "0.1.0"
