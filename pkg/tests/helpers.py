"""Shared test fixtures: the reference matrix cells, a random generator
for monotone matrices, and an implementation-independent brute-force
oracle for calibration-point feasibility on a reduced grid."""

from __future__ import annotations

import itertools
from random import Random

from riskgate import F_MAX, F_MIN, RiskClass, RiskMatrix, Severity

# Explicitly colored cells of the reference grid. Everything not listed is
# blank there and filled green by convention. Rows 7..13 carry 34 colored
# cells; with row 6 and the all-red rows 14..15 the total is 47.
G, Y, O, R = "G", "Y", "O", "R"
EXPLICIT_CELLS: dict[tuple[int, str], str] = {
    (6, "I"): G,
    (7, "I"): Y, (7, "II"): G, (7, "III"): G,
    (8, "I"): O, (8, "II"): Y, (8, "III"): Y,
    (9, "I"): R, (9, "II"): O, (9, "III"): O, (9, "IV"): G, (9, "V"): G,
    (10, "I"): R, (10, "II"): R, (10, "III"): R, (10, "IV"): Y, (10, "V"): Y,
    (11, "I"): R, (11, "II"): R, (11, "III"): R, (11, "IV"): O, (11, "V"): O, (11, "VI"): G,
    (12, "I"): R, (12, "II"): R, (12, "III"): R, (12, "IV"): R, (12, "V"): R, (12, "VI"): Y,
    (13, "I"): R, (13, "II"): R, (13, "III"): R, (13, "IV"): R, (13, "V"): R, (13, "VI"): O,
    (14, "I"): R, (14, "II"): R, (14, "III"): R, (14, "IV"): R, (14, "V"): R, (14, "VI"): R,
    (15, "I"): R, (15, "II"): R, (15, "III"): R, (15, "IV"): R, (15, "V"): R, (15, "VI"): R,
}

CODE_TO_CLASS = {
    "G": RiskClass.GREEN,
    "Y": RiskClass.YELLOW,
    "O": RiskClass.ORANGE,
    "R": RiskClass.RED,
}


def random_monotone_matrix(rng: Random) -> RiskMatrix:
    """A random matrix that is monotone along both axes.

    Built from per-column class thresholds: t_k(s) is the lowest F at which
    the class reaches at least k. Thresholds are sorted within a column and
    never decrease from severity I toward VI, which is exactly the monotone
    order (jumps are allowed; only monotonicity is guaranteed).
    """
    columns: dict[Severity, tuple[int, int, int]] = {}
    previous: tuple[int, int, int] | None = None
    for s in Severity:
        raw = [rng.randint(F_MIN, F_MAX + 2) for _ in range(3)]
        if previous is not None:
            raw = [max(r, p) for r, p in zip(raw, previous)]
        t1 = raw[0]
        t2 = max(raw[1], t1)
        t3 = max(raw[2], t2)
        columns[s] = (t1, t2, t3)
        previous = (t1, t2, t3)
    cells = {
        (f, s): RiskClass(sum(f >= t for t in columns[s]))
        for f in range(F_MIN, F_MAX + 1)
        for s in Severity
    }
    return RiskMatrix(cells=cells, name="random", version="test")


# ---------------------------------------------------------------------------
# Brute-force feasibility oracle on a reduced grid.
#
# Grids are tuples of rows indexed by F (ascending); each row is a tuple of
# integer class levels indexed by severity position (0 = most severe).
# Monotone means levels never fall as F rises and never rise toward less
# severe positions. A point is (f_index, s_index, kind).

POINT_KINDS = ("acceptable", "at_most:yellow", "at_most:orange", "forbidden")


def monotone_grids(n_f: int = 4, n_s: int = 4, levels: int = 4) -> list[tuple]:
    rows = [
        row
        for row in itertools.product(range(levels), repeat=n_s)
        if all(row[i] >= row[i + 1] for i in range(n_s - 1))
    ]
    grids: list[tuple] = []
    stack: list[tuple] = []

    def extend(depth: int) -> None:
        if depth == n_f:
            grids.append(tuple(stack))
            return
        for row in rows:
            if not stack or all(a <= b for a, b in zip(stack[-1], row)):
                stack.append(row)
                extend(depth + 1)
                stack.pop()

    extend(0)
    return grids


def grid_satisfies(grid: tuple, point: tuple[int, int, str]) -> bool:
    f_index, s_index, kind = point
    level = grid[f_index][s_index]
    if kind == "acceptable":
        return level == 0
    if kind == "at_most:yellow":
        return level <= 1
    if kind == "at_most:orange":
        return level <= 2
    if kind == "forbidden":
        return level == 3
    raise ValueError(kind)


def point_bitmasks(grids: list[tuple], points: list[tuple[int, int, str]]) -> list[int]:
    """For each point, a bitmask of the grids satisfying it, so feasibility
    of a point set is one AND over big integers."""
    masks = []
    size = (len(grids) + 7) // 8
    for point in points:
        bits = bytearray(size)
        for index, grid in enumerate(grids):
            if grid_satisfies(grid, point):
                bits[index >> 3] |= 1 << (index & 7)
        masks.append(int.from_bytes(bits, "little"))
    return masks
