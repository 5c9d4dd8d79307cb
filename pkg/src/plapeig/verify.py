"""Numerical verification of the gradient estimates, Harnack control,
Picone identity, subsolution equality cases, Liouville decay rate, and
the iteration norm ladder.

Conventions shared by the checks:

* Theorems about balls become statements about symmetric slabs [-r, r]
  of the line models; "inner half" and "inner 80%" always refer to the
  centered subinterval of the field's own domain.  Dirichlet truncation
  distorts |v'|/v near the endpoints, while the estimates are interior
  statements, so boundary layers are excluded by design.
* Constants that the estimates only assert to exist (the local gradient
  constant, the Harnack constant, the ladder constant) are fitted
  empirically and tested for stability across radii, never asserted as
  known values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import local_bound, sharp_root
from .geometry import ModelSpace, density, ricci_f_m_radial, weighted_volume
from .mesh import RadialField, RadialGrid, derivative, lp_norm, restrict
from .plaplacian import EigenResult, apply_p_laplacian, harmonic_radial
from .reports import CheckReport


def gradient_ratio(v: RadialField) -> RadialField:
    """|v'| / v nodewise; v must be positive everywhere."""
    if np.any(v.values <= 0):
        raise ValueError("gradient ratio needs a positive field")
    dv = derivative(v)
    return RadialField(v.grid, np.abs(dv.values) / v.values)


def _inner(v: RadialField, fraction: float) -> RadialField:
    """Centered subinterval covering `fraction` of the field's span."""
    grid = v.grid
    mid = 0.5 * (grid.t_lo + grid.t_hi)
    half = 0.5 * fraction * (grid.t_hi - grid.t_lo)
    return restrict(v, mid - half, mid + half)


def _positive_part(v: RadialField, floor_frac: float = 0.0) -> RadialField:
    """Drop boundary nodes where a Dirichlet eigenfield vanishes."""
    keep = v.values > floor_frac * float(np.max(v.values))
    idx = np.nonzero(keep)[0]
    return restrict(v, float(v.grid.nodes()[idx[0]]), float(v.grid.nodes()[idx[-1]]))


def _hypothesis_ok(space: ModelSpace, grid: RadialGrid, kappa: float) -> bool:
    ric = ricci_f_m_radial(space, grid)
    floor = -(space.m - 1) * kappa
    return bool(np.min(ric.values) >= floor - 1e-8 * max(1.0, abs(floor)))


def check_local_gradient_estimate(space: ModelSpace, eig: EigenResult,
                                  R: float, C: float) -> CheckReport:
    """sup of |v'|/v on the inner half interval against C(1+sqrt(kappa)R)/R.
    Also reports the constant the measurement would actually require."""
    kappa = space.kappa
    v = eig.eigenfield
    hyp = _hypothesis_ok(space, v.grid, kappa)
    inner = _inner(_positive_part(v), 0.5)
    measured = float(np.max(gradient_ratio(inner).values))
    bound = local_bound(kappa, R, C)
    c_required = measured * R / (1.0 + kappa**0.5 * R)
    return CheckReport(
        name="local_gradient_estimate",
        passed=measured <= bound,
        measured=measured,
        bound=bound,
        margin=bound - measured,
        hypothesis_ok=hyp,
        details={"C": C, "C_required": c_required, "R": R, "kappa": kappa},
    )


def check_global_sharp(space: ModelSpace, eig: EigenResult, p: float,
                       m: float) -> CheckReport:
    """sup of |v'|/v over the inner 80% against the sharp root of the
    eigenvalue-dependent bound equation (kappa = 1 normalization)."""
    v = eig.eigenfield
    hyp = _hypothesis_ok(space, v.grid, 1.0)
    inner = _inner(_positive_part(v), 0.8)
    measured = float(np.max(gradient_ratio(inner).values))
    bound = sharp_root(p, m, min(eig.lam, ((m - 1) / p) ** p))
    tol = 0.02 * bound + 100.0 * v.grid.h**2
    return CheckReport(
        name="global_sharp_gradient",
        passed=measured <= bound + tol,
        measured=measured,
        bound=bound,
        margin=bound - measured,
        hypothesis_ok=hyp,
        details={"lambda": eig.lam, "tol": tol},
    )


def check_harnack(v: RadialField, R: float, kappa: float,
                  C_calibration: float) -> CheckReport:
    """Oscillation control: ln(sup v / inf v) over the inner half must
    fit the shape C (1 + sqrt(kappa) R) with a constant stable relative
    to a caller-supplied calibration value."""
    if np.any(v.values <= 0):
        raise ValueError("Harnack check needs a positive field")
    inner = _inner(v, 0.5)
    measured = float(np.log(np.max(inner.values) / np.min(inner.values)))
    shape = 1.0 + kappa**0.5 * R
    c_required = measured / shape
    bound = 2.0 * C_calibration * shape
    return CheckReport(
        name="harnack",
        passed=c_required <= 2.0 * C_calibration,
        measured=measured,
        bound=bound,
        margin=bound - measured,
        details={"C_required": c_required, "C_calibration": C_calibration,
                 "R": R, "kappa": kappa},
    )


def picone(u: RadialField, v: RadialField, p: float, space: ModelSpace | None = None):
    """Pointwise Picone fields.

    L = |u'|^p + (p-1)(u/v)^p |v'|^p - p (u/v)^(p-1) u' v' |v'|^(p-2)
    R = |u'|^p - (u^p / v^(p-1))' |v'|^(p-2) v'

    Returns (L, R, max_gap, min_L).  L = R holds analytically; L >= 0 is
    a pointwise convexity inequality, so min_L may only dip below zero
    by rounding, while the gap ||L - R||_inf is pure discretization
    error of the extra derivative in R.
    """
    if u.grid != v.grid:
        raise ValueError("fields are defined on different grids")
    if np.any(v.values <= 0):
        raise ValueError("Picone needs v > 0")
    if np.any(u.values < 0):
        raise ValueError("Picone needs u >= 0")
    du = derivative(u).values
    dv = derivative(v).values
    ratio = u.values / v.values
    sig = np.abs(dv) ** (p - 2.0) * dv
    L = (np.abs(du) ** p + (p - 1.0) * ratio**p * np.abs(dv) ** p
         - p * ratio ** (p - 1.0) * du * sig)
    quot = RadialField(u.grid, u.values**p / v.values ** (p - 1.0))
    Rf = np.abs(du) ** p - derivative(quot).values * sig
    Lf = RadialField(u.grid, L)
    Rfield = RadialField(u.grid, Rf)
    max_gap = float(np.max(np.abs(L - Rf)))
    min_L = float(np.min(L))
    return Lf, Rfield, max_gap, min_L


def check_subsolution(space: ModelSpace, p: float, c: float, lam: float,
                      interval: tuple[float, float] = (-8.0, 8.0),
                      npoints: int = 2001) -> CheckReport:
    """Equality-case subsolution check on line models where the distance
    function along the end is the coordinate itself (beta = -t):
    the residual of the p-Laplacian of e^(c beta) plus lam e^(c beta)^(p-1)
    must be nonnegative up to discretization error, and identically zero
    in the calibrated equality cases."""
    if space.kind != "line_warped":
        raise ValueError("subsolution check supports line_warped models only")
    grid = RadialGrid(interval[0], interval[1], npoints)
    t = grid.nodes()
    omega = RadialField(grid, np.exp(-c * t))
    lap = apply_p_laplacian(space, omega, p, eps=0.0)
    resid = lap.values + lam * omega.values ** (p - 1.0)
    scale = float(np.max(lam * omega.values ** (p - 1.0)))
    measured = float(np.min(resid[1:-1]))
    tol = 100.0 * grid.h**2 * scale
    return CheckReport(
        name="subsolution",
        passed=measured >= -tol,
        measured=measured,
        bound=0.0,
        margin=measured,
        details={"tol": tol, "c": c, "lambda": lam,
                 "max_residual": float(np.max(np.abs(resid[1:-1])))},
    )


def check_liouville_rate(space: ModelSpace, p: float, radii,
                         offset: float = 1.0, npoints: int = 2001) -> CheckReport:
    """Decay rate forcing the constancy of bounded p-harmonic functions
    under nonnegative curvature: the inner-half gradient ratio of a
    bounded positive p-harmonic field must decay like 1/R, i.e.
    measured(R) * R stays bounded across the radius sweep."""
    radii = list(radii)
    products = []
    hyp = True
    for r in radii:
        if space.kind == "line_warped":
            interval = (-r, r)
        else:
            interval = (r * 1e-3, r)
        grid = RadialGrid(interval[0], interval[1], npoints)
        if not _hypothesis_ok(space, grid, 0.0):
            hyp = False
        v = harmonic_radial(space, p, flux=1.0, offset=offset,
                            interval=interval, npoints=npoints)
        if np.any(v.values <= 0):
            raise ValueError("harmonic field not positive; increase offset")
        inner = _inner(v, 0.5)
        products.append(float(np.max(gradient_ratio(inner).values)) * r)
    med = float(np.median(products))
    worst = float(np.max(products))
    return CheckReport(
        name="liouville_rate",
        passed=worst <= 2.0 * med,
        measured=worst,
        bound=2.0 * med,
        margin=2.0 * med - worst,
        hypothesis_ok=hyp,
        details={f"R={r:g}": prod for r, prod in zip(radii, products)},
    )


@dataclass
class MoserTrace:
    """Norm ladder of the squared log-gradient h = (u')^2 of
    u = -(p-1) ln v on shrinking slabs."""

    b0: float
    b_sequence: list = field(default_factory=list)
    ball_radii: list = field(default_factory=list)
    norms: list = field(default_factory=list)
    sup_inner: float = 0.0
    d_fit: float = 0.0

    def to_dict(self) -> dict:
        return {
            "b0": self.b0,
            "b_sequence": list(self.b_sequence),
            "ball_radii": list(self.ball_radii),
            "norms": list(self.norms),
            "sup_inner": self.sup_inner,
            "d_fit": self.d_fit,
        }


def moser_trace(space: ModelSpace, u: RadialField, p: float, R: float,
                C_b0: float, kappa: float, kmax: int = 8) -> MoserTrace:
    """Exponent ladder b_(k+1) = b_k n/(n-2) on slabs shrinking toward
    the inner half; the weighted norms of h = (u')^2 climb toward the
    inner sup norm.  Also fits the constant of the first-rung bound
    ||h||_(b_1) <= d b_0^2 / R^2 * V_f(R)^(1/b_1)."""
    n = space.n
    if n <= 2:
        raise ValueError(f"exponent ladder needs n > 2, got n={n}")
    if kmax < 1:
        raise ValueError("need kmax >= 1")
    ratio = n / (n - 2.0)
    b0 = C_b0 * (1.0 + kappa**0.5 * R)
    b1 = (b0 + p / 2.0) * ratio
    b_seq = [b1]
    for _ in range(kmax - 1):
        b_seq.append(b_seq[-1] * ratio)

    h_field = RadialField(u.grid, derivative(u).values ** 2)
    Jall = density(space, u.grid)

    def region(rk):
        if space.kind == "line_warped":
            return -rk, rk
        lo = max(u.grid.t_lo, 0.0)
        return lo, rk

    radii_k = [R / 2.0 + R / 4.0**k for k in range(1, kmax + 1)]
    norms = []
    for bk, rk in zip(b_seq, radii_k):
        lo, hi = region(rk)
        h_sub = restrict(h_field, lo, hi)
        J_sub = restrict(Jall, lo, hi)
        norms.append(lp_norm(h_sub, J_sub, bk))

    lo, hi = region(R / 2.0)
    sup_inner = float(np.max(restrict(h_field, lo, hi).values))
    vol = weighted_volume(space, R)
    d_fit = norms[0] * R**2 / (b0**2 * vol ** (1.0 / b1))
    return MoserTrace(
        b0=b0,
        b_sequence=b_seq,
        ball_radii=radii_k,
        norms=norms,
        sup_inner=sup_inner,
        d_fit=d_fit,
    )


def log_gradient_field(v: RadialField, p: float) -> RadialField:
    """u = -(p-1) ln v from a positive field."""
    if np.any(v.values <= 0):
        raise ValueError("needs a positive field")
    return RadialField(v.grid, -(p - 1.0) * np.log(v.values))
