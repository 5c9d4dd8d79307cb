"""Uniform 1D grids, sampled scalar profiles, finite differences and
weighted quadrature.

Everything downstream (geometry, the discrete p-Laplacian, the
verification suite) is built on this module.  Design choices: uniform
grids only, order-2 central differences with order-2 one-sided stencils
at the endpoints, and trapezoid quadrature so the quadrature order
matches the stencil order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid of `npoints` nodes on [t_lo, t_hi]."""

    t_lo: float
    t_hi: float
    npoints: int

    def __post_init__(self):
        if not self.t_lo < self.t_hi:
            raise ValueError(f"need t_lo < t_hi, got [{self.t_lo}, {self.t_hi}]")
        if self.npoints < 3:
            raise ValueError(f"need at least 3 nodes, got {self.npoints}")

    @property
    def h(self) -> float:
        return (self.t_hi - self.t_lo) / (self.npoints - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.t_lo, self.t_hi, self.npoints)


@dataclass(frozen=True)
class RadialField:
    """A scalar profile sampled on a RadialGrid."""

    grid: RadialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.npoints,):
            raise ValueError(
                f"values shape {vals.shape} does not match grid with "
                f"{self.grid.npoints} nodes"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")


def sample(grid: RadialGrid, func) -> RadialField:
    """Sample a callable on the grid nodes."""
    return RadialField(grid, func(grid.nodes()))


def _require_shared_grid(*fields: RadialField) -> RadialGrid:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise ValueError("fields are defined on different grids")
    return grid


def derivative(field: RadialField) -> RadialField:
    """First derivative: central differences inside, 3-point one-sided
    stencils at both endpoints.  Exact on polynomials of degree <= 1,
    order 2 on smooth profiles."""
    d = np.gradient(field.values, field.grid.h, edge_order=2)
    return RadialField(field.grid, d)


def integrate_weighted(field: RadialField, density: RadialField) -> float:
    """Trapezoid rule of field * density over the grid interval."""
    grid = _require_shared_grid(field, density)
    if np.any(density.values < 0):
        raise ValueError("density must be nonnegative")
    return float(np.trapezoid(field.values * density.values, dx=grid.h))


def lp_norm(field: RadialField, density: RadialField, q: float) -> float:
    """(integral |field|^q density)^(1/q).

    Evaluated as M * (integral (|field|/M)^q density)^(1/q) with
    M = max|field|, so large exponents (Moser ladders push q into the
    hundreds) do not overflow.
    """
    if q < 1:
        raise ValueError(f"need q >= 1, got {q}")
    _require_shared_grid(field, density)
    mag = np.abs(field.values)
    m = float(np.max(mag))
    if m == 0.0:
        return 0.0
    scaled = RadialField(field.grid, (mag / m) ** q)
    return m * integrate_weighted(scaled, density) ** (1.0 / q)


def restrict(field: RadialField, a: float, b: float) -> RadialField:
    """Restrict to the grid nodes covering [a, b] (nearest enclosing
    nodes).  The result lives on its own (still uniform) grid."""
    grid = field.grid
    if not (grid.t_lo <= a < b <= grid.t_hi + 1e-12 * max(1.0, abs(grid.t_hi))):
        raise ValueError(f"[{a}, {b}] is not inside [{grid.t_lo}, {grid.t_hi}]")
    h = grid.h
    # round() guards against a, b sitting on a node up to float noise
    i0 = int(np.floor((a - grid.t_lo) / h + 1e-9))
    i1 = int(np.ceil((b - grid.t_lo) / h - 1e-9))
    i0 = max(i0, 0)
    i1 = min(i1, grid.npoints - 1)
    if i1 - i0 + 1 < 3:
        raise ValueError("restriction keeps fewer than 3 nodes")
    nodes = grid.nodes()
    sub = RadialGrid(float(nodes[i0]), float(nodes[i1]), i1 - i0 + 1)
    return RadialField(sub, field.values[i0 : i1 + 1].copy())
