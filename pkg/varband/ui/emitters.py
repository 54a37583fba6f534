"""
Report Emitters
===============

CSV and JSON writers shared by the command line.

CSV uses '.' as decimal separator and a fixed number of significant
digits; JSON reports are key-sorted and carry the tool version and a hash
of the run configuration, so identical runs produce identical bytes.
"""

import hashlib
import io
import json
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from varband import __version__
from varband.config import settings


def format_csv(header: Sequence[str], columns: Sequence[np.ndarray], digits: Optional[int] = None) -> str:
    """
    Render columns as CSV text.

    Args:
        header: Column names
        columns: Equal-length arrays
        digits: Significant digits; default settings.csv_digits

    Returns:
        CSV text with a header line
    """
    digits = digits if digits is not None else settings.csv_digits
    data = np.column_stack([np.asarray(c, dtype=float).ravel() for c in columns]) if columns else np.empty((0, 0))
    buffer = io.StringIO()
    np.savetxt(buffer, data, fmt=f"%.{digits}g", delimiter=",", header=",".join(header), comments="")
    return buffer.getvalue()


def config_hash(config: Dict[str, Any]) -> str:
    payload = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def format_json(report: Dict[str, Any], config: Dict[str, Any]) -> str:
    """Render a report with version and configuration hash embedded."""
    document = {**report, "version": __version__, "config_hash": config_hash(config)}
    return json.dumps(_plain(document), sort_keys=True, indent=2) + "\n"


def write_text(text: str, out: Optional[Union[str, Path]]) -> Optional[Path]:
    """Write text to out, creating parent folders. Returns the path or None."""
    if out is None:
        return None
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value
