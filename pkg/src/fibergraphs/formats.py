"""Reading and writing matrices, right-hand sides and fibers."""
from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path

from .errors import DimensionMismatch
from .lattice import Fiber, IntMatrix, as_intvec


def data_path(name: str) -> Path:
    """Path of a fixture shipped with the package."""
    return Path(str(resources.files("fibergraphs") / "data" / name))


def resolve(path) -> Path:
    """``path`` itself if it exists, otherwise the packaged fixture of that name."""
    p = Path(path)
    if p.exists():
        return p
    alt = data_path(p.name)
    if alt.exists():
        return alt
    raise FileNotFoundError(f"no such file: {path}")


def matrix_from_json(data) -> IntMatrix:
    if isinstance(data, list):
        return IntMatrix.from_rows(data)
    try:
        rows, cols, entries = data["rows"], data["cols"], data["entries"]
    except (TypeError, KeyError) as exc:
        raise ValueError("matrix JSON needs 'rows', 'cols' and 'entries'") from exc
    if entries and isinstance(entries[0], list):
        A = IntMatrix.from_rows(entries)
    else:
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        A = IntMatrix.from_rows([entries[i * cols:(i + 1) * cols] for i in range(rows)])
    if A.shape != (rows, cols):
        raise DimensionMismatch(f"declared shape {rows}x{cols}, got {A.rows}x{A.cols}")
    return A


def matrix_to_json(A: IntMatrix) -> dict:
    return {"rows": A.rows, "cols": A.cols, "entries": [x for row in A.entries for x in row]}


def parse_matrix_text(text: str) -> IntMatrix:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    try:
        return IntMatrix.from_rows([[int(x) for x in r] for r in rows])
    except ValueError as exc:
        raise ValueError(f"cannot parse matrix text: {exc}") from exc


def read_matrix(path) -> IntMatrix:
    p = resolve(path)
    text = p.read_text()
    if p.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{p}: invalid JSON ({exc})") from exc
        return matrix_from_json(data)
    return parse_matrix_text(text)


_UNIT = re.compile(r"^(-?\d+)?e(\d+)$")


def parse_rhs(text: str, length: int) -> tuple[int, ...]:
    """``"3"``, ``"0,0,1"`` or ``"e3"`` / ``"2e3"`` (scaled unit vector, 1-based)."""
    text = text.strip().replace(" ", "")
    m = _UNIT.match(text)
    if m:
        scale = int(m.group(1)) if m.group(1) else 1
        i = int(m.group(2))
        if not 1 <= i <= length:
            raise DimensionMismatch(f"unit vector e{i} out of range for length {length}")
        return tuple(scale if j == i - 1 else 0 for j in range(length))
    try:
        values = [int(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise ValueError(f"cannot parse right-hand side {text!r}") from exc
    return as_intvec(values, length)


def fiber_csv(fiber: Fiber) -> str:
    return "".join(",".join(map(str, p)) + "\n" for p in fiber.points.tolist())


def fiber_json(fiber: Fiber) -> dict:
    return {
        "matrix": matrix_to_json(fiber.matrix),
        "rhs": list(fiber.rhs),
        "size": len(fiber),
        "points": fiber.points.tolist(),
    }


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
