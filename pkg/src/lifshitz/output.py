"""CSV/JSON emission for sweeps and reports.

Every output file starts with comment lines recording the tool version, a
hash of the resolved configuration, and the numerical tolerances, so a file
identifies the run that produced it.  Numbers are written in scientific
notation with 12 significant digits; reruns of the same configuration are
byte-identical (no timestamps).
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

__all__ = ["SweepResult", "format_value", "config_hash", "csv_text", "json_text"]


def format_value(x):
    """12-significant-digit scientific notation; non-floats pass through."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "%.11e" % x
    if isinstance(x, int):
        return str(x)
    return str(x)


def config_hash(config: dict) -> str:
    """Stable short hash of a resolved configuration mapping."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


@dataclass
class SweepResult:
    """Ordered sweep rows with per-row convergence diagnostics."""

    columns: List[str]
    rows: List[Tuple]
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        return csv_text(self.columns, self.rows, self.meta)

    def to_json(self) -> str:
        return json_text(self.columns, self.rows, self.meta)


def _header_lines(meta: dict) -> List[str]:
    lines = [f"# lifshitz {meta.get('version', 'unknown')}"]
    lines.append(f"# config-hash: {meta.get('config_hash', 'unset')}")
    if "tolerances" in meta:
        lines.append(f"# tolerances: {meta['tolerances']}")
    for key in sorted(meta):
        if key in ("version", "config_hash", "tolerances"):
            continue
        lines.append(f"# {key}: {format_value(meta[key])}")
    return lines


def csv_text(columns: Sequence[str], rows: Sequence[Tuple], meta: dict) -> str:
    lines = _header_lines(meta)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def json_text(columns: Sequence[str], rows: Sequence[Tuple], meta: dict) -> str:
    payload = {
        "meta": meta,
        "columns": list(columns),
        "rows": [[v if not isinstance(v, float) else float(format_value(v))
                  for v in row] for row in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
