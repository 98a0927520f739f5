"""Scheduler-to-architecture mapping matrices and their aggregate scores.

Each published scheduler is rated per stage as a full (100), partial (50) or
no (0) match. Scores are arithmetic means of those ratings, kept as exact
fractions and rounded half-up only for display.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from importlib import resources
from math import floor
from typing import Callable

from .pipeline import STAGE_GROUPS, StageId

ALL_STAGES = [s for group in STAGE_GROUPS.values() for s in group]
FEATURE_COLUMNS = ["origin", "era", "deployment"]
MAPPING_HEADER = ["scheduler", *FEATURE_COLUMNS, *(s.value for s in ALL_STAGES)]


class MappingParseError(ValueError):
    pass


class MatchLevel(IntEnum):
    FULL = 100
    PARTIAL = 50
    NONE = 0

    @classmethod
    def from_code(cls, code: str) -> MatchLevel:
        try:
            return _CODES[code]
        except KeyError:
            raise MappingParseError(f"unknown match code {code!r}; expected F, P or N") from None

    @property
    def code(self) -> str:
        return self.name[0]


_CODES = {"F": MatchLevel.FULL, "P": MatchLevel.PARTIAL, "N": MatchLevel.NONE}


class Origin(str, Enum):
    ACADEMIA = "A"
    INDUSTRY = "I"


class Era(str, Enum):
    PRE2010 = "O"
    POST2010 = "N"


class Deployment(str, Enum):
    SINGLE = "S"
    MULTI = "M"


@dataclass(frozen=True)
class SchedulerFeatures:
    origin: Origin
    era: Era
    deployment: Deployment


@dataclass
class MappingMatrix:
    schedulers: list  # [(name, SchedulerFeatures)]
    cells: dict  # (name, StageId) -> MatchLevel

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.schedulers]

    def features(self, name: str) -> SchedulerFeatures:
        for n, f in self.schedulers:
            if n == name:
                return f
        raise KeyError(name)


def round_half_up(value) -> int:
    return floor(Fraction(value) + Fraction(1, 2))


def parse_mapping(text: str) -> MappingMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and not r[0].startswith("#")]
    if not rows:
        raise MappingParseError("empty mapping file")
    header = [h.strip() for h in rows[0]]
    if header[: len(FEATURE_COLUMNS) + 1] != ["scheduler", *FEATURE_COLUMNS]:
        raise MappingParseError(f"header must start with scheduler,{','.join(FEATURE_COLUMNS)}")
    stage_cols = header[len(FEATURE_COLUMNS) + 1 :]
    try:
        stages = [StageId(s) for s in stage_cols]
    except ValueError as exc:
        raise MappingParseError(f"unknown stage in header: {exc}") from None
    missing = [s.value for s in ALL_STAGES if s not in stages]
    if missing:
        raise MappingParseError(f"header lacks stages {missing}")

    schedulers, cells = [], {}
    for lineno, row in enumerate(rows[1:], start=2):
        row = [c.strip() for c in row]
        if len(row) != len(header):
            raise MappingParseError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        name = row[0]
        try:
            feats = SchedulerFeatures(Origin(row[1]), Era(row[2]), Deployment(row[3]))
        except ValueError as exc:
            raise MappingParseError(f"row {lineno}: unknown feature code ({exc})") from None
        if any(n == name for n, _ in schedulers):
            raise MappingParseError(f"row {lineno}: duplicate scheduler {name!r}")
        schedulers.append((name, feats))
        for stage, code in zip(stages, row[4:]):
            try:
                cells[(name, stage)] = MatchLevel.from_code(code)
            except MappingParseError as exc:
                raise MappingParseError(f"row {lineno}, {stage.value}: {exc}") from None
    return MappingMatrix(schedulers, cells)


def load_bundled_mapping() -> MappingMatrix:
    """The fourteen schedulers of the published mapping study."""
    text = resources.files("dcsched").joinpath("data/mapping_sc18.csv").read_text("utf-8")
    return parse_mapping(text)


def group_mean(matrix: MappingMatrix, scheduler: str, group: str) -> Fraction:
    stages = STAGE_GROUPS[group]
    return Fraction(sum(int(matrix.cells[(scheduler, s)]) for s in stages), len(stages))


def group_score(matrix: MappingMatrix, scheduler: str, group: str) -> int:
    return round_half_up(group_mean(matrix, scheduler, group))


def stage_mean(
    matrix: MappingMatrix, stage: StageId | str, predicate: Callable[[SchedulerFeatures], bool]
) -> Fraction:
    stage = StageId(stage)
    selected = [name for name, feats in matrix.schedulers if predicate(feats)]
    if not selected:
        raise ValueError("predicate selects no scheduler")
    return Fraction(sum(int(matrix.cells[(n, stage)]) for n in selected), len(selected))


def feature_mean(matrix, stage, predicate) -> int:
    return round_half_up(stage_mean(matrix, stage, predicate))


PARTITIONS = {
    "origin": (lambda f: f.origin is Origin.ACADEMIA, lambda f: f.origin is Origin.INDUSTRY),
    "era": (lambda f: f.era is Era.PRE2010, lambda f: f.era is Era.POST2010),
}
PARTITION_LABELS = {"origin": ("A", "I"), "era": ("O", "N")}


def top_k_diff(matrix: MappingMatrix, partition: str, k: int) -> list[tuple[StageId, int, int]]:
    """Stages with the largest gap between the two halves of a partition.

    Ordered by the exact (unrounded) absolute difference, ties in stage order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    pred_a, pred_b = PARTITIONS[partition]
    stages = sorted({s for (_, s) in matrix.cells}, key=ALL_STAGES.index)
    scored = []
    for pos, stage in enumerate(stages):
        a = stage_mean(matrix, stage, pred_a)
        b = stage_mean(matrix, stage, pred_b)
        scored.append((-abs(a - b), pos, stage, a, b))
    scored.sort(key=lambda x: (x[0], x[1]))
    return [(stage, round_half_up(a), round_half_up(b)) for _, _, stage, a, b in scored[:k]]


def bucketize(percent: float) -> int:
    """Heatmap bucket: [0,25) -> 0, [25,50) -> 1, [50,75) -> 2, [75,100] -> 3."""
    if not 0 <= percent <= 100:
        raise ValueError(f"percent out of range: {percent}")
    return min(int(percent // 25), 3)


def groups_report(matrix: MappingMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scheduler", *FEATURE_COLUMNS, *STAGE_GROUPS])
    for name, feats in matrix.schedulers:
        w.writerow([name, feats.origin.value, feats.era.value, feats.deployment.value,
                    *(group_score(matrix, name, g) for g in STAGE_GROUPS)])
    return buf.getvalue()


def diff_report(matrix: MappingMatrix, partition: str, k: int = 10) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["stage", *PARTITION_LABELS[partition]])
    for stage, a, b in top_k_diff(matrix, partition, k):
        w.writerow([stage.value, a, b])
    return buf.getvalue()
