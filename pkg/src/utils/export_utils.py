"""
Export utilities for reports and tables
"""

import dataclasses
import json
import math
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd


def to_jsonable(value: Any) -> Any:
    """Convert elements, reports and numpy values into plain JSON values."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (frozenset, set)):
        return sorted((to_jsonable(v) for v in value), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if dataclasses.is_dataclass(value):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    return repr(value)


class ExportUtils:
    """Utilities for writing JSON reports and CSV tables."""

    @staticmethod
    def dumps(data: Any) -> str:
        """Deterministic JSON text (sorted keys, fixed separators)."""
        return json.dumps(to_jsonable(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def records_to_frame(records: Union[pd.DataFrame, Sequence[Dict[str, Any]]]) -> pd.DataFrame:
        """Flatten a list of row dicts into a DataFrame with JSON-safe cells."""
        if isinstance(records, pd.DataFrame):
            return records
        rows = []
        for record in records:
            row = {}
            for key, cell in record.items():
                cell = to_jsonable(cell)
                row[key] = json.dumps(cell, sort_keys=True) if isinstance(cell, (list, dict)) else cell
            rows.append(row)
        return pd.DataFrame(rows)

    @staticmethod
    def table_to_csv(records: Union[pd.DataFrame, Sequence[Dict[str, Any]]]) -> str:
        frame = ExportUtils.records_to_frame(records)
        return frame.to_csv(index=False, lineterminator="\n")

    @staticmethod
    def write_text(text: str, file_path: Optional[str]) -> Optional[str]:
        """Write to a file, or return the text when no path is given."""
        if file_path is None:
            return text
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(file_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        return None

    @staticmethod
    def save_json(data: Any, file_path: Optional[str]) -> Optional[str]:
        return ExportUtils.write_text(ExportUtils.dumps(data), file_path)

    @staticmethod
    def save_csv(records: Union[pd.DataFrame, List[Dict[str, Any]]], file_path: Optional[str]) -> Optional[str]:
        return ExportUtils.write_text(ExportUtils.table_to_csv(records), file_path)
