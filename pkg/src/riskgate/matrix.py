"""Risk score matrices: construction, plain-text file format, validation,
and the calibration-point machinery used to accept or refute a matrix.

A matrix maps every (F row, severity column) pair to a risk class. The
file format is a human-diffable text grid because recalibrating a matrix
is a governance act that people review, not a machine artifact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import F_MAX, F_MIN, RiskClass, Severity, ValidationError

_CELL_CODES = {
    "G": RiskClass.GREEN,
    "Y": RiskClass.YELLOW,
    "O": RiskClass.ORANGE,
    "R": RiskClass.RED,
}
_CODE_FOR = {cls: code for code, cls in _CELL_CODES.items()}


class MatrixFormatError(ValidationError):
    """Matrix text that cannot be parsed into a complete grid."""


@dataclass(frozen=True)
class RiskMatrix:
    """Complete mapping (F in 3..15, severity I..VI) -> risk class."""

    cells: dict[tuple[int, Severity], RiskClass]
    name: str = "default"
    version: str = "1"

    def __post_init__(self):
        missing = [
            (f, s.name)
            for f in range(F_MIN, F_MAX + 1)
            for s in Severity
            if (f, s) not in self.cells
        ]
        if missing:
            raise MatrixFormatError(
                f"matrix incomplete: {len(missing)} missing cells, first {missing[:4]}"
            )

    def at(self, f: int, severity: Severity) -> RiskClass:
        try:
            return self.cells[(f, Severity(severity))]
        except KeyError:
            raise ValidationError(f"no matrix cell for F={f}, S={severity}") from None


#: The shipped matrix. The published grid colors only the risk frontier;
#: its blank upper-left region is filled green here, which the green
#: calibration anchor at (I, 6) forces anyway under monotonicity.
DEFAULT_MATRIX_TEXT = """\
# name: default
# version: 1.0
F   I  II III IV  V  VI
3   G  G  G   G  G  G
4   G  G  G   G  G  G
5   G  G  G   G  G  G
6   G  G  G   G  G  G
7   Y  G  G   G  G  G
8   O  Y  Y   G  G  G
9   R  O  O   G  G  G
10  R  R  R   Y  Y  G
11  R  R  R   O  O  G
12  R  R  R   R  R  Y
13  R  R  R   R  R  O
14  R  R  R   R  R  R
15  R  R  R   R  R  R
"""


def parse_matrix(text: str) -> RiskMatrix:
    """Parse the line-oriented grid format.

    Header `F I II III IV V VI`, one row per F value 3..15, cells in
    {G, Y, O, R}. Lines starting with `#` are comments; `# name:` and
    `# version:` comments carry metadata so a matrix round-trips whole.
    """
    name, version = "default", "1"
    header_seen = False
    data_rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("name:"):
                name = body[len("name:"):].strip()
            elif body.startswith("version:"):
                version = body[len("version:"):].strip()
            continue
        columns = line.split()
        if not header_seen:
            expected = ["F"] + [s.name for s in Severity]
            if columns != expected:
                raise MatrixFormatError(
                    f"line {lineno}: header must be {' '.join(expected)!r}"
                )
            header_seen = True
            continue
        data_rows.append((lineno, columns))
    if not header_seen:
        raise MatrixFormatError("missing header line")

    cells: dict[tuple[int, Severity], RiskClass] = {}
    for lineno, columns in data_rows:
        if len(columns) != 1 + len(Severity):
            raise MatrixFormatError(
                f"line {lineno}: expected an F value followed by {len(Severity)} cells"
            )
        try:
            f = int(columns[0])
        except ValueError:
            raise MatrixFormatError(f"line {lineno}: bad F value {columns[0]!r}") from None
        if not F_MIN <= f <= F_MAX:
            raise MatrixFormatError(f"line {lineno}: F={f} outside {F_MIN}..{F_MAX}")
        if (f, Severity.I) in cells:
            raise MatrixFormatError(f"line {lineno}: duplicate row for F={f}")
        for severity, code in zip(Severity, columns[1:]):
            if code not in _CELL_CODES:
                raise MatrixFormatError(f"line {lineno}: unknown cell code {code!r}")
            cells[(f, severity)] = _CELL_CODES[code]
    return RiskMatrix(cells=cells, name=name, version=version)


def format_matrix(matrix: RiskMatrix) -> str:
    """Emit the text grid; parse(format(m)) reproduces m exactly."""
    lines = [f"# name: {matrix.name}", f"# version: {matrix.version}"]
    lines.append("F " + " ".join(s.name for s in Severity))
    for f in range(F_MIN, F_MAX + 1):
        row = " ".join(_CODE_FOR[matrix.at(f, s)] for s in Severity)
        lines.append(f"{f} {row}")
    return "\n".join(lines) + "\n"


def default_matrix() -> RiskMatrix:
    """The shipped risk score matrix."""
    return parse_matrix(DEFAULT_MATRIX_TEXT)


@dataclass(frozen=True)
class Finding:
    """One validation finding, anchored to a matrix cell when applicable."""

    rule: str
    message: str
    f: int | None = None
    severity: str | None = None

    def location(self) -> str:
        parts = []
        if self.f is not None:
            parts.append(f"F={self.f}")
        if self.severity is not None:
            parts.append(f"S={self.severity}")
        return ",".join(parts) or "-"


@dataclass
class ValidationReport:
    errors: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_matrix(matrix: RiskMatrix) -> ValidationReport:
    """Check the elementary-logic rules on a matrix.

    Risk must not fall as F grows nor as severity worsens (errors), and
    adjacent cells must not jump by more than one class. Column jumps are
    errors; row jumps are only warnings, because the shipped matrix itself
    contains row jumps (orange next to green in row 9, for instance) and
    would otherwise refute itself.
    """
    report = ValidationReport()
    severities = list(Severity)
    for s in severities:
        for f in range(F_MIN, F_MAX):
            low, high = matrix.at(f, s), matrix.at(f + 1, s)
            if high < low:
                report.errors.append(Finding(
                    "column-monotonic",
                    f"risk falls from {low.name} to {high.name} as F rises "
                    f"{f} -> {f + 1} at S={s.name}",
                    f=f + 1, severity=s.name,
                ))
            elif high - low > 1:
                report.errors.append(Finding(
                    "column-jump",
                    f"risk jumps from {low.name} to {high.name} between "
                    f"F={f} and F={f + 1} at S={s.name}",
                    f=f + 1, severity=s.name,
                ))
    for f in range(F_MIN, F_MAX + 1):
        for more, less in zip(severities, severities[1:]):
            a, b = matrix.at(f, more), matrix.at(f, less)
            if b > a:
                report.errors.append(Finding(
                    "row-monotonic",
                    f"risk rises from {a.name} at S={more.name} to {b.name} "
                    f"at S={less.name} in row F={f}",
                    f=f, severity=less.name,
                ))
            elif a - b > 1:
                report.warnings.append(Finding(
                    "row-jump",
                    f"{a.name} at S={more.name} next to {b.name} at "
                    f"S={less.name} in row F={f}",
                    f=f, severity=less.name,
                ))
    return report


@dataclass(frozen=True)
class CalibrationPoint:
    """An externally asserted acceptability judgment for one (S, F) cell.

    `expectation` is one of "acceptable" (the cell must be green),
    "forbidden" (the cell must be red) or "at_most:<class>" (an upper
    bound, encoding judgments like "undesirable but tolerable").
    """

    severity: Severity
    f: int
    expectation: str
    note: str = ""

    def __post_init__(self):
        self.bounds()  # validates the expectation string

    def clamped_f(self) -> int:
        return min(max(self.f, F_MIN), F_MAX)

    def bounds(self) -> tuple[RiskClass | None, RiskClass | None]:
        """The (upper, lower) class bounds this point imposes on its cell."""
        kind, _, argument = self.expectation.partition(":")
        if kind == "acceptable" and not argument:
            return RiskClass.GREEN, None
        if kind == "forbidden" and not argument:
            return None, RiskClass.RED
        if kind == "at_most" and argument:
            return RiskClass.from_wire(argument), None
        raise ValidationError(f"unknown expectation {self.expectation!r}")

    def describe(self) -> str:
        text = f"(S={self.severity.name}, F={self.f}, {self.expectation})"
        return f"{text} {self.note!r}" if self.note else text


def check_points(matrix: RiskMatrix, points: Sequence[CalibrationPoint]) -> ValidationReport:
    """Check every calibration point against its matrix cell."""
    if not validate_matrix(matrix).ok:
        raise ValidationError("matrix fails validation; fix it before checking points")
    report = ValidationReport()
    for point in points:
        cell = matrix.at(point.clamped_f(), point.severity)
        upper, lower = point.bounds()
        if lower is not None:
            ok = cell is RiskClass.RED
        elif point.expectation == "acceptable":
            ok = cell is RiskClass.GREEN
        else:
            ok = cell <= upper
        if not ok:
            report.errors.append(Finding(
                "calibration-point",
                f"cell is {cell.name} but point {point.describe()} expects "
                f"{point.expectation}",
                f=point.clamped_f(), severity=point.severity.name,
            ))
    return report


def detect_conflicts(
    points: Sequence[CalibrationPoint],
) -> list[tuple[CalibrationPoint, CalibrationPoint]]:
    """Pairs of points that no monotone matrix can satisfy together.

    A point capping its cell at some class also caps every cell at lower F
    and no-more-severe S, because risk only grows toward higher F and
    worse severity. A conflict is a second point demanding a higher class
    somewhere inside that capped region. Pairwise checking is complete
    here: every expectation is a one-sided bound, so an infeasible set
    always contains an infeasible pair.
    """
    conflicts: list[tuple[CalibrationPoint, CalibrationPoint]] = []
    for i, p in enumerate(points):
        upper_p, _ = p.bounds()
        if upper_p is None:
            continue
        for j, q in enumerate(points):
            if i == j:
                continue
            _, lower_q = q.bounds()
            if lower_q is None or lower_q <= upper_p:
                continue
            dominated = q.clamped_f() <= p.clamped_f() and q.severity >= p.severity
            if dominated:
                pair = (p, q) if i < j else (q, p)
                if pair not in conflicts:
                    conflicts.append(pair)
    return conflicts


def parse_points(text: str) -> list[CalibrationPoint]:
    """Parse a calibration points file: one JSON object per line with keys
    `severity`, `f`, `expectation` and optional `note`; `#` comments."""
    points: list[CalibrationPoint] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"line {lineno}: not valid JSON ({exc.msg})") from None
        if not isinstance(doc, dict):
            raise ValidationError(f"line {lineno}: expected a JSON object")
        unknown = set(doc) - {"severity", "f", "expectation", "note"}
        if unknown:
            raise ValidationError(f"line {lineno}: unknown keys {sorted(unknown)}")
        for key in ("severity", "f", "expectation"):
            if key not in doc:
                raise ValidationError(f"line {lineno}: missing key {key!r}")
        if isinstance(doc["f"], bool) or not isinstance(doc["f"], int):
            raise ValidationError(f"line {lineno}: f must be an integer")
        try:
            points.append(CalibrationPoint(
                severity=Severity.from_label(doc["severity"]),
                f=doc["f"],
                expectation=str(doc["expectation"]),
                note=str(doc.get("note", "")),
            ))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    return points


def format_points(points: Iterable[CalibrationPoint]) -> str:
    lines = [
        json.dumps({
            "severity": p.severity.name,
            "f": p.f,
            "expectation": p.expectation,
            "note": p.note,
        })
        for p in points
    ]
    return "\n".join(lines) + ("\n" if lines else "")
