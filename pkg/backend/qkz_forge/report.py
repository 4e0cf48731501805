"""Verification reports: lists of (relation id, holds) pairs."""
from typing import Iterable, List, Tuple, Type

from .errors import CheckFailed
from .schemas import CheckModel

Report = List[Tuple[str, bool]]

# Entries under this prefix are recorded for comparison and never fail a run.
INFO_PREFIX = "info:"


def failures(report: Report) -> List[str]:
    return [relation for relation, holds in report if not holds and not relation.startswith(INFO_PREFIX)]


def ensure(report: Report, error: Type[CheckFailed]) -> Report:
    """Raise ``error`` for the first failing required entry; return the report otherwise."""
    failing = failures(report)
    if failing:
        raise error(failing[0], f"{len(failing)} of {len(report)} checks failed")
    return report


def as_models(report: Iterable[Tuple[str, bool]]) -> List[CheckModel]:
    return [CheckModel(relation=relation, holds=holds) for relation, holds in report]
