"""Reports, covariance-matrix documents and CSV output shared by the CLI and the API."""

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from pydantic import BaseModel, Field

from gaussent.phasespace.schemas import CovarianceDocument, CovarianceMatrix


class AnalysisReport(BaseModel):
    """Machine-readable result of one command.

    Floats are written with ``repr``, the shortest string that reads back to
    the same double (at most 17 significant digits).
    """

    input_digest: str | None = None
    command: str
    results: dict[str, Any] = Field(default_factory=dict)
    warnings: list[str] = Field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.model_validate_json(text)


# ==================== Covariance documents ====================

def cm_to_json(cm: CovarianceMatrix) -> str:
    return json.dumps(cm.to_document(), indent=2) + "\n"


def parse_cm(text: str) -> CovarianceMatrix:
    return CovarianceMatrix.from_document(CovarianceDocument.model_validate_json(text))


def read_cm(path: str | Path) -> CovarianceMatrix:
    return parse_cm(Path(path).read_text(encoding="utf-8"))


def cm_digest(cm: CovarianceMatrix) -> str:
    """sha256 of the canonical JSON form of the matrix."""
    canonical = json.dumps(cm.to_document(), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# ==================== CSV ====================

def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()
