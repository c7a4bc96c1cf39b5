"""Uniform rectangular grids carrying sampled fields.

Arrays are stored row-major with shape ``(ny, nx)``: row ``j`` is the line
``eta = y[j]`` and column ``i`` is ``xi = x[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["FieldGrid", "BoundaryData", "parse_grid_spec"]


@dataclass(frozen=True)
class FieldGrid:
    """Samples of a scalar or complex field on a uniform (xi, eta) grid.

    ``mask`` marks regular nodes (True).  Norms and residuals skip the rest.
    """

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    mask: np.ndarray = field(default=None)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or y.ndim != 1 or x.size < 3 or y.size < 3:
            raise ValueError("grids need at least 3 nodes per axis")
        for axis in (x, y):
            step = np.diff(axis)
            if np.any(step <= 0) or np.ptp(step) > 1e-9 * abs(step[0]) + 1e-15:
                raise ValueError("grid spacing must be uniform and increasing")
        values = np.asarray(self.values)
        if values.shape != (y.size, x.size):
            raise ValueError(f"values shape {values.shape} != (ny, nx) = {(y.size, x.size)}")
        mask = np.isfinite(values) if self.mask is None else np.asarray(self.mask, dtype=bool)
        if mask.shape != values.shape:
            raise ValueError("mask shape mismatch")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask & np.isfinite(values))

    @classmethod
    def uniform(cls, x_range, y_range, nx: int, ny: int, values=None, mask=None) -> "FieldGrid":
        x = np.linspace(float(x_range[0]), float(x_range[1]), int(nx))
        y = np.linspace(float(y_range[0]), float(y_range[1]), int(ny))
        if values is None:
            values = np.zeros((int(ny), int(nx)))
        return cls(x, y, values, mask)

    @property
    def nx(self) -> int:
        return self.x.size

    @property
    def ny(self) -> int:
        return self.y.size

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def hx(self) -> float:
        return float((self.x[-1] - self.x[0]) / (self.nx - 1))

    @property
    def hy(self) -> float:
        return float((self.y[-1] - self.y[0]) / (self.ny - 1))

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(XI, ETA) node coordinates, each of shape (ny, nx)."""
        return np.meshgrid(self.x, self.y)

    def zeta(self) -> np.ndarray:
        xi, eta = self.mesh()
        return xi + 1j * eta

    def with_values(self, values, mask=None) -> "FieldGrid":
        """Same geometry, new samples; the mask is intersected with ours."""
        values = np.asarray(values)
        base = self.mask if mask is None else (self.mask & np.asarray(mask, dtype=bool))
        return FieldGrid(self.x, self.y, values, base)

    def same_geometry(self, other: "FieldGrid") -> bool:
        return (
            self.shape == other.shape
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet values of R on the four edges of a grid.

    ``bottom``/``top`` run along xi (length nx) at eta = y[0] / y[-1];
    ``left``/``right`` run along eta (length ny) at xi = x[0] / x[-1].
    ``anchor`` optionally fixes S at one node: ((j, i), value).
    """

    bottom: np.ndarray
    top: np.ndarray
    left: np.ndarray
    right: np.ndarray
    anchor: tuple | None = None

    def check(self, grid: FieldGrid) -> None:
        if len(self.bottom) != grid.nx or len(self.top) != grid.nx:
            raise ValueError("bottom/top boundary arrays must have nx entries")
        if len(self.left) != grid.ny or len(self.right) != grid.ny:
            raise ValueError("left/right boundary arrays must have ny entries")

    @classmethod
    def from_function(cls, grid: FieldGrid, fn, anchor=None) -> "BoundaryData":
        """Sample ``fn(xi, eta)`` on the edges of ``grid``."""
        x, y = grid.x, grid.y
        return cls(
            bottom=np.asarray(fn(x, np.full_like(x, y[0])), dtype=float),
            top=np.asarray(fn(x, np.full_like(x, y[-1])), dtype=float),
            left=np.asarray(fn(np.full_like(y, x[0]), y), dtype=float),
            right=np.asarray(fn(np.full_like(y, x[-1]), y), dtype=float),
            anchor=anchor,
        )


def parse_grid_spec(spec: str) -> tuple[int, int]:
    """'201x101' -> (nx, ny) = (201, 101)."""
    try:
        a, b = spec.lower().split("x")
        nx, ny = int(a), int(b)
    except ValueError:
        raise ValueError(f"grid spec {spec!r} is not of the form NXxNY") from None
    if nx < 3 or ny < 3:
        raise ValueError("grid needs at least 3 nodes per axis")
    return nx, ny
