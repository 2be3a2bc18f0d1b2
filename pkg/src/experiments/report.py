"""
Émission des rapports CSV et JSON
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Optional, Tuple, Union

from src.core.exceptions import ReportWriteError
from src.core.logging import get_logger

from .base import ExperimentResult

logger = get_logger(__name__)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_safe(value: Any) -> Any:
    """NaN et infinis ne sont pas du JSON valide: ils deviennent null"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def render_csv(result: ExperimentResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_cell(row.get(column, "")) for column in result.columns])
    return buffer.getvalue()


def render_summary(result: ExperimentResult) -> str:
    summary = {
        "experiment": result.experiment,
        "config": result.config,
        "passed": result.passed,
        "rows": len(result.rows),
        "metrics": result.metrics,
        "checks": [check.model_dump() for check in result.checks],
    }
    return json.dumps(_json_safe(summary), indent=2, sort_keys=True, allow_nan=False) + "\n"


def report_emit(result: ExperimentResult, out_dir: Optional[Union[str, Path]] = None) -> Tuple[Path, Path]:
    """Écrit <out>/<expérience>.csv et <out>/<expérience>.json"""
    directory = Path(out_dir if out_dir is not None else result.config.get("out", "reports"))
    csv_path = directory / f"{result.experiment}.csv"
    json_path = directory / f"{result.experiment}.json"
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for path, content in ((csv_path, render_csv(result)), (json_path, render_summary(result))):
            with open(path, "w", encoding="utf-8", newline="") as stream:
                stream.write(content)
    except OSError as e:
        raise ReportWriteError(f"cannot write reports to {directory}: {e}") from e
    logger.info("reports_written", csv=str(csv_path), json=str(json_path), rows=len(result.rows))
    return csv_path, json_path
