"""Model smooth metric measure spaces reduced to one radial variable.

A model is a warp profile phi(t), a weight f(t), a topological dimension
n, a generalized dimension m >= n entering the curvature tensor, and a
curvature parameter kappa.  The radial weighted density is
J(t) = phi(t)^(n-1) * exp(-f(t)) with the cross-section volume
normalized to 1 (every inequality checked here is scale invariant in
that constant).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .mesh import RadialField, RadialGrid, derivative
from .reports import CheckReport

PROFILE_TAGS = ("exp", "sinh", "linear", "power", "tabulated")


@dataclass(frozen=True)
class ProfileSpec:
    """A 1D profile with analytic first and second derivatives.

    tags: "exp" e^(c t), "sinh" sinh(c t), "linear" c t + d,
    "power" t^k, "tabulated" (sampled table, differentiated by finite
    differences).
    """

    tag: str
    params: tuple = ()
    table: RadialField | None = None

    def __post_init__(self):
        if self.tag not in PROFILE_TAGS:
            raise ValueError(f"unknown profile tag {self.tag!r}")
        object.__setattr__(self, "params", tuple(float(x) for x in self.params))
        if self.tag == "tabulated" and self.table is None:
            raise ValueError("tabulated profile needs a table")

    def _check_domain(self, t: np.ndarray):
        if self.tag == "tabulated":
            g = self.table.grid
            if np.min(t) < g.t_lo - 1e-12 or np.max(t) > g.t_hi + 1e-12:
                raise ValueError("evaluation point outside tabulated domain")

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        self._check_domain(t)
        if self.tag == "exp":
            (c,) = self.params
            return np.exp(c * t)
        if self.tag == "sinh":
            (c,) = self.params
            return np.sinh(c * t)
        if self.tag == "linear":
            c, d = self.params
            return c * t + d
        if self.tag == "power":
            (k,) = self.params
            return t**k
        return np.interp(t, self.table.grid.nodes(), self.table.values)

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        self._check_domain(t)
        if self.tag == "exp":
            (c,) = self.params
            return c * np.exp(c * t)
        if self.tag == "sinh":
            (c,) = self.params
            return c * np.cosh(c * t)
        if self.tag == "linear":
            c, _ = self.params
            return np.full_like(t, c)
        if self.tag == "power":
            (k,) = self.params
            if k == 0:
                return np.zeros_like(t)
            return k * t ** (k - 1)
        dtab = derivative(self.table)
        return np.interp(t, dtab.grid.nodes(), dtab.values)

    def d2(self, t):
        t = np.asarray(t, dtype=float)
        self._check_domain(t)
        if self.tag == "exp":
            (c,) = self.params
            return c * c * np.exp(c * t)
        if self.tag == "sinh":
            (c,) = self.params
            return c * c * np.sinh(c * t)
        if self.tag == "linear":
            return np.zeros_like(t)
        if self.tag == "power":
            (k,) = self.params
            if k in (0.0, 1.0):
                return np.zeros_like(t)
            return k * (k - 1) * t ** (k - 2)
        d2tab = derivative(derivative(self.table))
        return np.interp(t, d2tab.grid.nodes(), d2tab.values)

    def is_constant(self) -> bool:
        if self.tag == "linear":
            return self.params[0] == 0.0
        if self.tag in ("exp", "sinh"):
            return self.params[0] == 0.0
        if self.tag == "power":
            return self.params[0] == 0.0
        return bool(np.all(self.table.values == self.table.values[0]))

    def to_dict(self) -> dict:
        return {"tag": self.tag, "params": list(self.params)}

    @classmethod
    def from_dict(cls, d: dict) -> "ProfileSpec":
        return cls(tag=d["tag"], params=tuple(d.get("params", ())))


CONSTANT_ONE = ProfileSpec("linear", (0.0, 1.0))
ZERO_WEIGHT = ProfileSpec("linear", (0.0, 0.0))

KINDS = ("line_warped", "ball_rotsym", "custom_density")


@dataclass(frozen=True)
class ModelSpace:
    """A 1D-reducible model geometry."""

    kind: str
    n: int
    m: float
    kappa: float
    warp: ProfileSpec
    weight: ProfileSpec

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind in ("line_warped", "ball_rotsym") and self.n < 2:
            raise ValueError(f"kind {self.kind!r} needs n >= 2, got {self.n}")
        if self.m < self.n:
            raise ValueError(f"need m >= n, got m={self.m}, n={self.n}")
        if self.m == self.n and not self.weight.is_constant():
            raise ValueError("m = n requires a constant weight")
        if self.kappa < 0:
            raise ValueError(f"need kappa >= 0, got {self.kappa}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "m": self.m,
            "kappa": self.kappa,
            "warp": self.warp.to_dict(),
            "weight": self.weight.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpace":
        return cls(
            kind=d["kind"],
            n=int(d["n"]),
            m=float(d["m"]),
            kappa=float(d.get("kappa", 1.0)),
            warp=ProfileSpec.from_dict(d["warp"]),
            weight=ProfileSpec.from_dict(d["weight"]),
        )


def line_exp_model(n: int, m: float, kappa: float = 1.0) -> ModelSpace:
    """Line model with exponential warp e^t and linear weight -(m-n)t.
    Its radial curvature profile is constantly -(m-1)."""
    return ModelSpace(
        kind="line_warped",
        n=n,
        m=m,
        kappa=kappa,
        warp=ProfileSpec("exp", (1.0,)),
        weight=ProfileSpec("linear", (-(m - n), 0.0)),
    )


def flat_interval_model() -> ModelSpace:
    """Unit density J = 1: the plain interval with Lebesgue measure."""
    return ModelSpace(
        kind="custom_density",
        n=2,
        m=2.0,
        kappa=0.0,
        warp=CONSTANT_ONE,
        weight=ZERO_WEIGHT,
    )


def density(space: ModelSpace, grid: RadialGrid) -> RadialField:
    """J(t) = phi(t)^(n-1) e^(-f(t)), cross-section volume normalized."""
    t = grid.nodes()
    phi = space.warp.eval(t)
    if np.any(phi <= 0):
        raise ValueError("warp profile must be positive on the grid")
    vals = phi ** (space.n - 1) * np.exp(-space.weight.eval(t))
    return RadialField(grid, vals)


def ricci_f_m_radial(space: ModelSpace, grid: RadialGrid) -> RadialField:
    """Radial profile of the generalized curvature tensor applied to the
    radial direction: -(n-1) phi''/phi + f'' - (f')^2/(m-n); the last
    term is dropped when m = n (constant weight)."""
    t = grid.nodes()
    phi = space.warp.eval(t)
    if np.any(phi <= 0):
        raise ValueError("warp profile must be positive on the grid")
    vals = -(space.n - 1) * space.warp.d2(t) / phi + space.weight.d2(t)
    if space.m > space.n:
        vals = vals - space.weight.d1(t) ** 2 / (space.m - space.n)
    elif not space.weight.is_constant():
        raise ValueError("m = n with nonconstant weight")
    return RadialField(grid, vals)


def weighted_volume(space: ModelSpace, r: float) -> float:
    """Weighted volume of the radius-r region: the interval [0, r] for
    ball and custom-density models, the coordinate slab [-r, r] for line
    models (a documented proxy: true metric balls of a line model are
    not radial, so the slab is used for volume-growth diagnostics
    only)."""
    if r <= 0:
        raise ValueError(f"need r > 0, got {r}")
    lo = -r if space.kind == "line_warped" else 0.0

    def integrand(t):
        return float(
            space.warp.eval(t) ** (space.n - 1) * np.exp(-space.weight.eval(t))
        )

    val, _ = quad(integrand, lo, r, limit=200)
    return val


def hyperbolic_model_volume(m: float, r: float) -> float:
    """Volume integral of the constant-curvature comparison model:
    integral_0^r sinh(s)^(m-1) ds (angular constant omitted; it cancels
    in every ratio used here)."""
    if m <= 1:
        raise ValueError(f"need m > 1, got {m}")
    if r <= 0:
        raise ValueError(f"need r > 0, got {r}")
    val, _ = quad(lambda s: np.sinh(s) ** (m - 1), 0.0, r, limit=200)
    return val


def _curvature_hypothesis_ok(space: ModelSpace, t_lo: float, t_hi: float,
                             kappa: float, npoints: int = 801) -> tuple[bool, float]:
    grid = RadialGrid(t_lo, t_hi, npoints)
    ric = ricci_f_m_radial(space, grid)
    lowest = float(np.min(ric.values))
    floor = -(space.m - 1) * kappa
    return lowest >= floor - 1e-8 * max(1.0, abs(floor)), lowest


def volume_ratio_check(space: ModelSpace, r1: float, r2: float) -> CheckReport:
    """Volume doubling control: V_f(r2)/V_f(r1) must not exceed the
    constant-curvature model ratio, provided the radial curvature is
    bounded below by -(m-1) (kappa = 1 normalization)."""
    if not 0 < r1 < r2:
        raise ValueError(f"need 0 < r1 < r2, got {r1}, {r2}")
    if space.kind == "line_warped":
        lo, hi = -r2, r2
    else:
        # avoid the pole where phi may vanish
        lo, hi = r2 * 1e-3, r2
    hyp_ok, lowest = _curvature_hypothesis_ok(space, lo, hi, kappa=1.0)

    measured = weighted_volume(space, r2) / weighted_volume(space, r1)
    bound = hyperbolic_model_volume(space.m, r2) / hyperbolic_model_volume(space.m, r1)
    tol = 1e-6
    passed = measured <= bound * (1.0 + tol)
    return CheckReport(
        name="volume_ratio",
        passed=passed,
        measured=measured,
        bound=bound,
        margin=bound - measured,
        hypothesis_ok=hyp_ok,
        details={"r1": r1, "r2": r2, "min_radial_curvature": lowest},
    )


def laplacian_comparison_check(space: ModelSpace, grid: RadialGrid) -> CheckReport:
    """Weighted Laplacian of the distance coordinate against the
    coth-type model bound, at every interior node of the grid.  Only
    rotationally symmetric ball models qualify: there the distance from
    the pole is the coordinate itself."""
    if space.kind != "ball_rotsym":
        raise ValueError(
            "laplacian comparison needs a ball_rotsym model "
            "(distance must equal the radial coordinate)"
        )
    if space.kappa <= 0:
        raise ValueError("laplacian comparison needs kappa > 0")
    t = grid.nodes()[1:-1]
    if np.any(t <= 0):
        raise ValueError("interior nodes must satisfy r > 0")
    phi = space.warp.eval(t)
    lap = (space.n - 1) * space.warp.d1(t) / phi - space.weight.d1(t)
    sk = np.sqrt(space.kappa)
    bound_profile = (space.m - 1) * sk / np.tanh(sk * t)
    gap = lap - bound_profile
    measured = float(np.max(gap))
    tol = max(1e-8, 10 * grid.h**2)
    return CheckReport(
        name="laplacian_comparison",
        passed=measured <= tol,
        measured=measured,
        bound=0.0,
        margin=-measured,
        details={"tol": tol, "worst_node": float(t[int(np.argmax(gap))])},
    )
