"""Closed-form eigenvalue bounds and gradient-bound root equations.

The central object is the root equation

    g(y) = (p-1) y^p - (m-1) y^(p-1) + lambda = 0,

whose largest positive root bounds |grad ln v| for a positive first
eigenfunction v.  For 0 < lambda < ((m-1)/p)^p the equation has two
positive roots; the larger one is returned because it is the branch
consistent with both endpoint cases: lambda = 0 gives (m-1)/(p-1) (the
p-harmonic bound) and lambda = ((m-1)/p)^p gives (m-1)/p.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


def lambda_max(p: float, m: float) -> float:
    """Largest admissible first eigenvalue, ((m-1)/p)^p."""
    if p <= 1 or m <= 1:
        raise ValueError(f"need p > 1 and m > 1, got p={p}, m={m}")
    return ((m - 1.0) / p) ** p


def _check_lambda_range(p: float, m: float, lam: float):
    lmax = lambda_max(p, m)
    if lam < 0:
        raise ValueError(f"need lambda >= 0, got {lam}")
    if lam > lmax * (1.0 + 1e-12):
        raise ValueError(
            f"lambda = {lam} exceeds the maximal admissible first eigenvalue "
            f"((m-1)/p)^p = {lmax} under the curvature lower bound -(m-1); "
            "no real root exists on this branch"
        )
    return min(lam, lmax)


def sharp_root(p: float, m: float, lam: float) -> float:
    """Largest positive root of (p-1)y^p - (m-1)y^(p-1) + lambda = 0.

    g is <= 0 at y = (m-1)/p, >= 0 at y = (m-1)/(p-1), and strictly
    increasing in between, so bisection on that bracket is certain;
    Newton polishing drives |g| below 1e-12 * scale.
    """
    lam = _check_lambda_range(p, m, lam)

    def g(y):
        return (p - 1.0) * y**p - (m - 1.0) * y ** (p - 1.0) + lam

    def dg(y):
        return p * (p - 1.0) * y ** (p - 1.0) - (m - 1.0) * (p - 1.0) * y ** (p - 2.0)

    lo = (m - 1.0) / p
    hi = (m - 1.0) / (p - 1.0)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if g(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    y = 0.5 * (lo + hi)
    scale = max(1.0, lam)
    for _ in range(8):
        d = dg(y)
        if d == 0.0:
            break
        ynew = y - g(y) / d
        if not (lo * 0.5 <= ynew <= hi * 2.0):
            break
        y = ynew
        if abs(g(y)) <= 1e-13 * scale:
            break
    return y


def x_root(p: float, m: float, lam: float) -> float:
    """Largest positive root x of
    x^(p/2) - (m-1) x^((p-1)/2) + lambda (p-1)^(p-1) = 0,
    located through s = sqrt(x) on [(p-1)(m-1)/p, m-1]."""
    lam = _check_lambda_range(p, m, lam)
    const = lam * (p - 1.0) ** (p - 1.0)

    def g(s):
        return s**p - (m - 1.0) * s ** (p - 1.0) + const

    lo = (p - 1.0) * (m - 1.0) / p
    hi = m - 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if g(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)

    def dg(s):
        return p * s ** (p - 1.0) - (m - 1.0) * (p - 1.0) * s ** (p - 2.0)

    for _ in range(8):
        d = dg(s)
        if d == 0.0:
            break
        snew = s - g(s) / d
        if not (lo * 0.5 <= snew <= hi * 2.0):
            break
        s = snew
    return s * s


def p_harmonic_bound(p: float, m: float) -> float:
    """Gradient bound (m-1)/(p-1) for positive weighted p-harmonic
    functions (the lambda = 0 root)."""
    if p <= 1 or m <= 1:
        raise ValueError(f"need p > 1 and m > 1, got p={p}, m={m}")
    return (m - 1.0) / (p - 1.0)


def model_lambda(p: float, m: float, a: float) -> tuple[float, bool]:
    """Eigenvalue (m-1-(p-1)a) a^(p-1) of the exponential-warp line
    model eigenfunction e^(-a t).  Returns (value, in_range) where
    in_range reflects the admissible window (m-1)/p <= a <= (m-1)/(p-1);
    outside it the formula is still evaluated but flagged."""
    if p <= 1 or m <= 1:
        raise ValueError(f"need p > 1 and m > 1, got p={p}, m={m}")
    in_range = (m - 1.0) / p - 1e-12 <= a <= (m - 1.0) / (p - 1.0) + 1e-12
    return (m - 1.0 - (p - 1.0) * a) * a ** (p - 1.0), in_range


def lambda_upper_lin(p: float, a: float) -> float:
    """Upper bound (a/p)^p when the weight grows at most linearly with
    rate a and the curvature tensor (without dimension bound) is
    nonnegative.  Sublinear weight (a = 0) forces eigenvalue 0."""
    if p <= 1:
        raise ValueError(f"need p > 1, got {p}")
    if a < 0:
        raise ValueError(f"need a >= 0, got {a}")
    return (a / p) ** p


def lambda_upper_neg(p: float, n: int, a: float) -> float:
    """Upper bound ((n-1+a)/p)^p under curvature >= -(n-1) and weight
    growth rate a."""
    if p <= 1:
        raise ValueError(f"need p > 1, got {p}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if a < 0:
        raise ValueError(f"need a >= 0, got {a}")
    return ((n - 1.0 + a) / p) ** p


def soliton_lambda(p: float, a: float, grad_f_min: float | None = None
                   ) -> tuple[float, bool]:
    """Eigenvalue (a/p)^p on a steady gradient soliton with radial Ricci
    flatness and normalization |grad f|^2 + S = a^2.  The value is
    attained when 1 < p < 2 unconditionally, and for p >= 2 when
    inf |grad f| >= a sqrt((p-2)/(p-1)); the flag reports whether the
    applicable condition is known to hold."""
    if p <= 1:
        raise ValueError(f"need p > 1, got {p}")
    if a <= 0:
        raise ValueError(f"need a > 0, got {a}")
    value = (a / p) ** p
    if p < 2:
        valid = True
    elif grad_f_min is None:
        valid = False
    else:
        valid = grad_f_min >= a * ((p - 2.0) / (p - 1.0)) ** 0.5
    return value, valid


def local_bound(kappa: float, R: float, C: float) -> float:
    """Local gradient bound shape C (1 + sqrt(kappa) R)/R."""
    if R <= 0 or C <= 0 or kappa < 0:
        raise ValueError(f"need R > 0, C > 0, kappa >= 0; got {R}, {C}, {kappa}")
    return C * (1.0 + kappa**0.5 * R) / R


@dataclass
class BoundSet:
    """All closed-form bounds evaluated for one parameter tuple."""

    p: float
    n: int
    m: float
    a: float
    lam: float
    kappa: float
    lambda_max: float
    p_harmonic_bound: float
    sharp_y: float
    sharp_x: float
    lambda_upper_lin: float
    lambda_upper_neg: float
    model_lambda: float
    model_lambda_in_range: bool
    soliton_lambda: float
    soliton_valid: bool

    def to_dict(self) -> dict:
        return asdict(self)


def bound_set(p: float, n: int, m: float, a: float, lam: float,
              kappa: float = 1.0) -> BoundSet:
    """Evaluate every closed-form bound for (p, n, m, a, lambda, kappa)."""
    mlam, in_range = model_lambda(p, m, a) if a > 0 else (0.0, False)
    slam, svalid = soliton_lambda(p, a) if a > 0 else (0.0, False)
    return BoundSet(
        p=p,
        n=n,
        m=m,
        a=a,
        lam=lam,
        kappa=kappa,
        lambda_max=lambda_max(p, m),
        p_harmonic_bound=p_harmonic_bound(p, m),
        sharp_y=sharp_root(p, m, lam),
        sharp_x=x_root(p, m, lam),
        lambda_upper_lin=lambda_upper_lin(p, a),
        lambda_upper_neg=lambda_upper_neg(p, n, a),
        model_lambda=mlam,
        model_lambda_in_range=in_range,
        soliton_lambda=slam,
        soliton_valid=svalid,
    )
