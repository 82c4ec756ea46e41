"""Uniform 1-D grids, sampled functions and the window (discrete cube) family.

A window ``(i, j)`` is the contiguous index range ``i..j`` and stands for the
interval made of the cells of those sample points.  Every operator in the
package takes its suprema over *all* windows inside the grid; functions are
never extended past ``[a, b]``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

import numpy as np


class GridMismatchError(ValueError):
    """Two sampled functions live on different grids."""


@dataclass(frozen=True)
class Grid1D:
    """Midpoint grid with ``n`` cells on ``[a, b]``."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"grid endpoints must be finite, got a={self.a}, b={self.b}")
        if not self.b > self.a:
            raise ValueError(f"grid needs b > a, got a={self.a}, b={self.b}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"grid cell count n must be a positive integer, got {self.n}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def points(self) -> np.ndarray:
        return self.a + (np.arange(self.n) + 0.5) * self.h

    @property
    def length(self) -> float:
        return self.b - self.a

    def nearest_index(self, x: float) -> int:
        """Index of the sample point closest to ``x`` (clipped to the grid)."""
        k = int(math.floor((x - self.a) / self.h))
        return min(max(k, 0), self.n - 1)

    def refine(self, factor: int = 2) -> "Grid1D":
        return Grid1D(self.a, self.b, self.n * factor)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "n": self.n}

    @classmethod
    def from_spec(cls, text: str) -> "Grid1D":
        """Parse ``"a,b,n"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"grid spec must be 'a,b,n', got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))


@dataclass(frozen=True)
class Window:
    """Contiguous index range ``i..j`` (inclusive)."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 0 or self.j < self.i:
            raise ValueError(f"invalid window ({self.i}, {self.j})")

    @property
    def count(self) -> int:
        return self.j - self.i + 1

    def measure(self, h: float) -> float:
        return self.count * h

    def contains(self, k: int) -> bool:
        return self.i <= k <= self.j

    def check(self, n: int) -> None:
        if self.j >= n:
            raise ValueError(f"window ({self.i}, {self.j}) exceeds grid with n={n}")

    @classmethod
    def full(cls, n: int) -> "Window":
        return cls(0, n - 1)


def all_windows(n: int) -> Iterator[Window]:
    for i in range(n):
        for j in range(i, n):
            yield Window(i, j)


@dataclass(frozen=True, eq=False)
class SampledFn:
    """Real function sampled at the midpoints of ``grid``.

    ``values`` is stored as a read-only float64 copy.
    """

    grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if v.shape[0] != self.grid.n:
            raise ValueError(f"expected {self.grid.n} values, got {v.shape[0]}")
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            k = int(bad[0])
            raise ValueError(f"non-finite value {v[k]} at x_{k} = {self.grid.points[k]!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def with_values(self, values) -> "SampledFn":
        return SampledFn(self.grid, values)

    def _other(self, other):
        if isinstance(other, SampledFn):
            check_same_grid(self, other)
            return other.values
        return other

    def __add__(self, other):
        return self.with_values(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.with_values(self.values - self._other(other))

    def __rsub__(self, other):
        return self.with_values(self._other(other) - self.values)

    def __mul__(self, other):
        return self.with_values(self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def __abs__(self):
        return self.with_values(np.abs(self.values))

    def power(self, p: float) -> "SampledFn":
        """``|f|**p`` with the convention ``0**p = 0``."""
        return self.with_values(np.abs(self.values) ** p)

    def value_at(self, x: float) -> float:
        return float(self.values[self.grid.nearest_index(x)])

    def lp_norm(self, p: float) -> float:
        return float((self.h * np.sum(np.abs(self.values) ** p)) ** (1.0 / p))

    def to_dict(self) -> dict:
        return {"grid": self.grid.to_dict(), "values": [float(v) for v in self.values]}


def check_same_grid(*fns: SampledFn) -> Grid1D:
    grid = fns[0].grid
    for g in fns[1:]:
        if g.grid != grid:
            raise GridMismatchError(f"grid mismatch: {grid} vs {g.grid}")
    return grid


# -- closed forms -----------------------------------------------------------

def _const(x, c=1.0):
    return np.full_like(x, float(c))


def _indicator(x, u=0.0, v=1.0):
    return ((x > u) & (x < v)).astype(np.float64)


def _log_shift(x):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(1.0 + x))


def _log_sing(x, c=0.0):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(x - c))


def _gauss(x, center=0.0, width=1.0):
    if width <= 0:
        raise ValueError(f"gauss width must be positive, got {width}")
    return np.exp(-0.5 * ((x - center) / width) ** 2)


CLOSED_FORMS: dict[str, Callable[..., np.ndarray]] = {
    "const": _const,
    "indicator": _indicator,
    "log_shift": _log_shift,
    "log_sing": _log_sing,
    "gauss": _gauss,
}


def parse_expr(text: str) -> tuple[str, tuple[float, ...]]:
    """Split ``"name:p1,p2"`` into ``("name", (p1, p2))``."""
    name, _, rest = text.partition(":")
    params = tuple(float(p) for p in rest.split(",") if p.strip()) if rest else ()
    return name.strip(), params


def sample(expr, grid: Grid1D) -> SampledFn:
    """Evaluate a built-in closed form at the grid midpoints.

    ``expr`` is either a mini-syntax string such as ``"indicator:0,1"`` or a
    ``(name, params)`` pair.

    >>> sample("const:3", Grid1D(0, 1, 4)).values.tolist()
    [3.0, 3.0, 3.0, 3.0]
    """
    name, params = parse_expr(expr) if isinstance(expr, str) else (expr[0], tuple(expr[1]))
    try:
        fn = CLOSED_FORMS[name]
    except KeyError:
        raise ValueError(f"unknown closed form {name!r}; known: {sorted(CLOSED_FORMS)}") from None
    x = grid.points
    return SampledFn(grid, fn(x, *params))


# -- prefix sums and averages -------------------------------------------------

def prefix_sums(f: SampledFn) -> np.ndarray:
    """``P[k] = sum_{m<k} v_m h`` accumulated in ascending index order."""
    out = np.zeros(f.n + 1)
    np.cumsum(f.values * f.h, out=out[1:])
    return out


def window_average(f: SampledFn, w: Window) -> float:
    w.check(f.n)
    P = prefix_sums(f)
    return float((P[w.j + 1] - P[w.i]) / w.measure(f.h))


# -- file formats ---------------------------------------------------------------

def write_csv(f: SampledFn, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,value\n")
        for x, v in zip(f.x, f.values):
            fh.write(f"{x:.17e},{v:.17e}\n")


def read_csv(path) -> SampledFn:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "value"]:
        raise ValueError(f"{path}: expected header 'x,value'")
    data = np.array([[float(r[0]), float(r[1])] for r in rows[1:] if r], dtype=np.float64)
    if data.shape[0] == 0:
        raise ValueError(f"{path}: no data rows")
    x, v = data[:, 0], data[:, 1]
    n = x.shape[0]
    if n == 1:
        raise ValueError(f"{path}: a single row does not determine the grid")
    h = (x[-1] - x[0]) / (n - 1)
    if h <= 0 or not np.allclose(np.diff(x), h, rtol=1e-9, atol=1e-12 * max(1.0, abs(h))):
        raise ValueError(f"{path}: sample points are not uniformly spaced")
    grid = Grid1D(x[0] - h / 2, x[-1] + h / 2, n)
    return SampledFn(grid, v)


def write_json(f: SampledFn, path) -> None:
    Path(path).write_text(json.dumps(f.to_dict()) + "\n")


def read_json(path) -> SampledFn:
    rec = json.loads(Path(path).read_text())
    try:
        g = rec["grid"]
        grid = Grid1D(g["a"], g["b"], g["n"])
        values = rec["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed sampled-function record ({exc})") from None
    if len(values) != grid.n:
        raise ValueError(f"{path}: grid says n={grid.n} but {len(values)} values given")
    return SampledFn(grid, values)


def load(path) -> SampledFn:
    p = Path(path)
    if p.suffix.lower() == ".json":
        return read_json(p)
    return read_csv(p)


def save(f: SampledFn, path, fmt: str | None = None) -> None:
    fmt = fmt or ("json" if str(path).lower().endswith(".json") else "csv")
    if fmt == "json":
        write_json(f, path)
    else:
        write_csv(f, path)
