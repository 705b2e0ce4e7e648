"""JSON and CSV writers for experiment reports."""

import csv
import json
from pathlib import Path
from typing import Iterable, Optional

from pydantic import BaseModel


def report_json(report: BaseModel) -> str:
    """Deterministic JSON: sorted keys, fixed indent, trailing newline."""
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def write_report(report: BaseModel, path: Optional[str] = None) -> str:
    """Write the report to ``path`` when given; return its JSON text either way."""
    text = report_json(report)
    if path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
    return text


def write_csv(path: str, header: Iterable[str], rows: Iterable[Iterable]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(list(header))
        writer.writerows(rows)
    return target


def write_trail_csv(path: str, trail) -> Path:
    """Doubling trail as ``n,mean`` for plotting."""
    return write_csv(path, ("n", "mean"), ((point.n, repr(point.mean)) for point in trail))


def write_samples_csv(path: str, observable: str, rows) -> Path:
    """Sample dump ``trial_id,observable,value``."""
    return write_csv(path, ("trial_id", "observable", "value"), ((tid, observable, repr(v)) for tid, v in rows))


def write_trial_log_csv(path: str, rows) -> Path:
    """Per-trial coordinates ``trial_id,context,generator,value``."""
    return write_csv(
        path, ("trial_id", "context", "generator", "value"), ((tid, ctx, name, repr(v)) for tid, ctx, name, v in rows)
    )
