import csv
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

HASH_COMMENT_PREFIX = "# config_hash:"


def to_jsonable(obj: Any) -> Any:
    """
    Converts numpy values nested in dicts, lists and tuples into plain Python values.
    Non-finite floats are written as strings ("inf", "-inf", "nan").
    Args:
        obj: The object to convert.
    Returns:
        Any: An object json.dumps accepts.
    """
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, list | tuple):
        return [to_jsonable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, float | np.floating):
        value = float(obj)
        if np.isfinite(value):
            return value
        return str(value)
    return obj


def write_json(path: Path, payload: dict[str, Any], config_hash: str) -> Path:
    """Write a JSON result file that carries the config hash."""
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"config_hash": config_hash, **to_jsonable(payload)}
    path.write_text(json.dumps(document, indent=2, sort_keys=False) + "\n")
    return path


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]], config_hash: str) -> Path:
    """Write a CSV result file whose first line is a config hash comment."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as file:
        file.write(f"{HASH_COMMENT_PREFIX} {config_hash}\n")
        writer = csv.writer(file)
        writer.writerow(header)
        for row in rows:
            writer.writerow([to_jsonable(value) for value in row])
    return path

