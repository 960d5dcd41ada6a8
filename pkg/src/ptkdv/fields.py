"""Periodic grids, sampled fields, spectral derivatives, quadrature and norms."""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform periodic grid on [-L/2, L/2) with N points."""

    length: float
    n_points: int
    nodes: np.ndarray = dataclass_field(repr=False)

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    def compatible(self, other: "Grid") -> bool:
        return self.n_points == other.n_points and self.length == other.length

    def wavenumbers(self, real: bool) -> np.ndarray:
        """Angular wavenumbers 2*pi*m/L matching rfft (real) or fft ordering."""
        if real:
            return 2.0 * np.pi * np.fft.rfftfreq(self.n_points, d=self.spacing)
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)


@dataclass
class Field:
    """Samples of u(x, t) on a Grid; carrier is float64 or complex128."""

    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.grid.n_points,):
            raise ValueError(
                f"values length {self.values.shape} does not match grid "
                f"n_points {self.grid.n_points}"
            )
        if self.values.dtype not in (np.float64, np.complex128):
            self.values = self.values.astype(
                np.complex128 if np.iscomplexobj(self.values) else np.float64
            )

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy(), self.time)


def make_grid(length: float, n_points: int) -> Grid:
    """Build a uniform periodic grid of n_points nodes on [-length/2, length/2)."""
    if not length > 0:
        raise ValueError(f"grid length must be positive, got {length}")
    if int(n_points) != n_points or n_points < 16:
        raise ValueError(f"n_points must be an integer >= 16, got {n_points}")
    n_points = int(n_points)
    dx = length / n_points
    nodes = -0.5 * length + dx * np.arange(n_points)
    return Grid(float(length), n_points, nodes)


def sample(fn, grid: Grid, t: float = 0.0) -> Field:
    """Sample a pointwise function of x onto the grid nodes at time t."""
    out = np.asarray(fn(grid.nodes))
    if out.shape == ():
        out = np.full(grid.n_points, complex(out) if np.iscomplexobj(out) else float(out))
    return Field(grid, out.copy(), t)


def _derivative_multiplier(grid: Grid, order: int, real: bool) -> np.ndarray:
    k = grid.wavenumbers(real)
    if order % 2 == 1 and grid.n_points % 2 == 0:
        # Nyquist mode has no well-defined odd derivative; zero it.
        if real:
            k = k.copy()
            k[-1] = 0.0
        else:
            k = k.copy()
            k[grid.n_points // 2] = 0.0
    return (1j * k) ** order


def spectral_derivative(field: Field, order: int) -> Field:
    """order-th spatial derivative via the discrete Fourier transform."""
    if order not in (1, 2, 3):
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")
    if field.is_real:
        spec = np.fft.rfft(field.values)
        spec *= _derivative_multiplier(field.grid, order, real=True)
        deriv = np.fft.irfft(spec, n=field.grid.n_points)
    else:
        spec = np.fft.fft(field.values)
        spec *= _derivative_multiplier(field.grid, order, real=False)
        deriv = np.fft.ifft(spec)
    return Field(field.grid, deriv, field.time)


def quadrature(field: Field):
    """Integral of the field over the box (trapezoid = rectangle rule, periodic)."""
    total = field.grid.spacing * field.values.sum()
    return float(total) if field.is_real else complex(total)


def distance(a: Field, b: Field, norm: str = "linf") -> float:
    """Linf (max-abs) or L2 (root-mean-square) distance between two fields."""
    if not a.grid.compatible(b.grid):
        raise ValueError("fields live on different grids")
    diff = a.values - b.values
    key = norm.lower()
    if key == "linf":
        return float(np.max(np.abs(diff)))
    if key == "l2":
        return float(np.sqrt(np.mean(np.abs(diff) ** 2)))
    raise ValueError(f"unknown norm {norm!r}; use 'linf' or 'l2'")


def write_field_csv(field: Field, path) -> None:
    """Snapshot CSV: `x,re_u,im_u` (im_u omitted for real carrier), 17 digits."""
    lines = []
    if field.is_real:
        lines.append("x,re_u")
        for x, v in zip(field.grid.nodes, field.values):
            lines.append(f"{x:.17g},{v:.17g}")
    else:
        lines.append("x,re_u,im_u")
        for x, v in zip(field.grid.nodes, field.values):
            lines.append(f"{x:.17g},{v.real:.17g},{v.imag:.17g}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
