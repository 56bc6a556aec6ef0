"""Column-oriented time series and its CSV form.

CSV contract: first line is the header; floats are written with 17
significant digits so identical runs produce byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass
class TimeSeries:
    columns: list[str]
    data: np.ndarray        # shape (n_rows, n_columns); data[:, 0] is t
    monotonic: bool = True  # False for summary tables keyed by a sweep axis

    def __post_init__(self):
        self.data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if self.data.size == 0:
            self.data = self.data.reshape(0, len(self.columns))
        if self.data.shape[1] != len(self.columns):
            raise ValidationError("column count does not match data width")
        t = self.t
        if self.monotonic and len(t) > 1 and not np.all(np.diff(t) > 0):
            raise ValidationError("time column must be strictly increasing")

    @property
    def t(self) -> np.ndarray:
        return self.data[:, 0] if self.data.size else np.empty(0)

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise ValidationError(f"series has no column {name!r}") from None
        return self.data[:, idx]

    def has_column(self, name: str) -> bool:
        return name in self.columns

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.data:
            lines.append(",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "TimeSeries":
        lines = [ln for ln in text.strip().splitlines() if ln]
        if not lines:
            raise ValidationError("empty CSV document")
        columns = lines[0].split(",")
        rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
        data = np.array(rows, dtype=float) if rows else np.empty((0, len(columns)))
        return cls(columns=columns, data=data)
