"""Plain-text tensor files.

Format::

    TNS <d> <n>
    <n**d reals, whitespace separated, first index fastest>

Values are written with 17 significant digits so a round trip is exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .tensor import DenseTensor

__all__ = ["write_tns", "read_tns", "format_real"]

_PER_LINE = 8


def format_real(x: float) -> str:
    return format(float(x), ".17g")


def write_tns(path, T: DenseTensor) -> None:
    flat = T.flat()
    lines = [f"TNS {T.order} {T.dim}"]
    for k in range(0, flat.size, _PER_LINE):
        lines.append(" ".join(format_real(x) for x in flat[k : k + _PER_LINE]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_tns(path) -> DenseTensor:
    text = Path(path).read_text()
    tokens = text.split()
    if len(tokens) < 3 or tokens[0] != "TNS":
        raise ValueError(f"{path}: not a TNS file (missing 'TNS <d> <n>' header)")
    try:
        d, n = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed header") from exc
    values = np.array([float(x) for x in tokens[3:]])
    if values.size != n**d:
        raise ValueError(f"{path}: expected {n**d} values, found {values.size}")
    return DenseTensor.from_flat(d, n, values)
