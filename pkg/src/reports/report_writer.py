"""
Report writer

JSON payloads for every CLI result (optionally saved with a timestamp) and
the CSV format for circle traces.

Trace CSV format:
    header "theta,re,im", "\n" line endings, up to 17 significant digits.
"""

import io
import json
import os
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["theta", "re", "im"]


def _json_default(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_json(payload: Dict[str, Any]) -> str:
    """Deterministic JSON text for a result payload."""
    return json.dumps(payload, indent=2, ensure_ascii=False, default=_json_default)


def save_json_report(
    command: str,
    payload: Dict[str, Any],
    output_dir: str = "reports"
) -> str:
    """
    Save a result payload as JSON.

    Args:
        command: CLI command name, used in the file name
        payload: Complete result payload
        output_dir: Directory to save the report

    Returns:
        Path to saved report
    """
    os.makedirs(output_dir, exist_ok=True)

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    safe_name = command.lower().replace("-", "_").replace(" ", "_")
    filename = f"{safe_name}_report_{timestamp}.json"
    filepath = os.path.join(output_dir, filename)

    with open(filepath, "w", encoding="utf-8") as f:
        f.write(to_json(payload))

    logger.info(f"✅ Report saved to {filepath}")
    return filepath


def list_saved_reports(output_dir: str = "reports") -> List[str]:
    """Saved report file names, newest first."""
    if not os.path.exists(output_dir):
        return []
    reports = [f for f in os.listdir(output_dir) if f.endswith(".json")]
    return sorted(reports, reverse=True)


# ============ TRACE CSV ============

def trace_to_dataframe(rows: Sequence[Tuple[float, float, float]]) -> pd.DataFrame:
    return pd.DataFrame(list(rows), columns=TRACE_COLUMNS)


def emit_trace_csv(
    rows: Sequence[Tuple[float, float, float]],
    path: Optional[str] = None
) -> str:
    """
    Write trace rows as CSV.

    Args:
        rows: (theta, re, im) tuples
        path: Output file; when omitted the CSV text is returned instead

    Returns:
        The path written, or the CSV text
    """
    if len(rows) == 0:
        raise ValueError("trace has no rows")
    df = trace_to_dataframe(rows)
    options = dict(index=False, float_format="%.17g", lineterminator="\n")

    if path is None:
        buffer = io.StringIO()
        df.to_csv(buffer, **options)
        return buffer.getvalue()

    output_file = Path(path)
    output_file.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(output_file, encoding="utf-8", **options)
    logger.info(f"✅ Saved {len(df)} trace rows to {path}")
    return str(output_file)
