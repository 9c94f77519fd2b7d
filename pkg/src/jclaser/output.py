"""Deterministic CSV/JSON writers with self-describing config headers.

Every file carries the complete run configuration in a ``# config:`` comment
so that re-running from the header reproduces the file byte for byte.
Numbers are written with ``repr``, the shortest round-trip decimal form.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return repr(v)
    if v is None:
        return ""
    return str(v)


def config_line(config: dict) -> str:
    parts = [f"{k}={format_value(config[k])}" for k in sorted(config)]
    return "# config: " + "; ".join(parts)


def parse_config_header(path: str | Path) -> dict[str, str]:
    """Recover the config mapping from a file's ``# config:`` line."""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("# config: "):
                body = line[len("# config: ") :].strip()
                out = {}
                for item in body.split("; "):
                    if "=" in item:
                        k, _, v = item.partition("=")
                        out[k] = v
                return out
            if not line.startswith("#"):
                break
    raise ValueError(f"no config header in {path}")


def write_csv(path: str | Path, columns: list[str], rows: list[list], config: dict) -> None:
    lines = [config_line(config), "# units: g=1", ",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _plain(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def write_json(path: str | Path, payload: dict, config: dict) -> None:
    doc = {"config": {k: format_value(v) for k, v in sorted(config.items())}, **_plain(payload)}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
