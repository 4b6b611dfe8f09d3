"""CSV loading for the simulator's stable output schema."""

from __future__ import annotations

import re
import warnings

import numpy as np


class MissingColumn(ValueError):
    """A required column is absent from the CSV header."""


class BadInput(ValueError):
    """The input file does not parse as a timeseries CSV."""


class Table:
    """A parsed CSV: ordered column names mapped to float arrays."""

    def __init__(self, names, data):
        self.names = list(names)
        self._cols = {name: data[:, k] for k, name in enumerate(self.names)}

    def __getitem__(self, name) -> np.ndarray:
        if name not in self._cols:
            raise MissingColumn(f"column {name!r} not found (have {self.names})")
        return self._cols[name]

    def __contains__(self, name) -> bool:
        return name in self._cols

    @property
    def n_wells(self) -> int:
        """Number of wells, counted from the N_j population columns."""
        count = sum(1 for n in self.names if re.fullmatch(r"N_\d+", n))
        if count == 0:
            raise MissingColumn("no N_j population columns found")
        return count

    def zeta_columns(self):
        """(chain length, column name) pairs from an entropy sweep CSV."""
        out = []
        for name in self.names:
            m = re.fullmatch(r"zeta_(\d+)", name)
            if m:
                out.append((int(m.group(1)), name))
        if not out:
            raise MissingColumn("no zeta_<n> columns found")
        return out


def load_table(path) -> Table:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header:
            raise MissingColumn(f"{path}: empty file, no header")
        names = header.split(",")
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise BadInput(f"{path}: {exc}") from None
    if data.size == 0:
        raise BadInput(f"{path}: no data rows")
    if data.shape[1] != len(names):
        raise BadInput(
            f"{path}: {data.shape[1]} data columns for {len(names)} header names"
        )
    return Table(names, data)
