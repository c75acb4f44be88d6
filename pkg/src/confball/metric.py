"""Radial conformal factors and the ambient quantities derived from them.

The ambient space is a Euclidean ball with metric e^{2u(|x|^2)} <,> for a
smooth radial function u on [0, a^2).  Everything downstream (profile ODEs,
curvatures, the gap functional, the convexity potential) is driven by u and
its first two derivatives, so derivatives are always analytic: built-ins are
hardcoded, custom factors are polynomials in rho = |x|^2 differentiated by
coefficient shifts, never by finite differencing.

Built-ins:

* ``euclidean``   u = 0
* ``gaussian``    u = -rho/8          (metric e^{-|x|^2/4} <,>)
* ``hyperbolic``  u = ln(2/(1-rho))   (Poincare ball, a = 1)
* ``spherical``   u = ln(2/(1+rho))   (round sphere minus a pole)

The potential of the conformal position field is
sigma(rho) = 1 + 2 u'(rho) rho; its gradient in the ambient metric is
grad sigma = 4 e^{-2u} (u'' rho + u') x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from ._backend import kernel
from .errors import DomainError

_KIND_CODES = {
    "euclidean": kernel.KIND_EUCLIDEAN,
    "gaussian": kernel.KIND_GAUSSIAN,
    "hyperbolic": kernel.KIND_HYPERBOLIC,
    "spherical": kernel.KIND_SPHERICAL,
    "custom": kernel.KIND_POLY,
}

# scan ceiling (in rho units) used when hunting for a sigma root on an
# unbounded domain
_RHO_SCAN_MAX = 1e8


@dataclass(frozen=True)
class ConformalFactor:
    """The radial factor u(rho), rho = |x|^2, with analytic derivatives."""

    kind: str
    poly: tuple[float, ...] = ()
    domain_limit: float = math.inf  # ball radius a; the u-domain is [0, a^2)

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ValueError(f"unknown conformal factor kind {self.kind!r}")
        if self.kind == "custom" and len(self.poly) == 0:
            raise ValueError("custom conformal factor needs polynomial coefficients")

    @property
    def code(self) -> int:
        return _KIND_CODES[self.kind]

    @classmethod
    def euclidean(cls):
        return cls("euclidean")

    @classmethod
    def gaussian(cls):
        return cls("gaussian")

    @classmethod
    def hyperbolic(cls):
        return cls("hyperbolic", domain_limit=1.0)

    @classmethod
    def spherical(cls):
        return cls("spherical")

    @classmethod
    def custom(cls, poly, domain_limit=math.inf):
        return cls("custom", poly=tuple(float(c) for c in poly), domain_limit=domain_limit)

    @classmethod
    def from_json(cls, obj: dict) -> "ConformalFactor":
        """Metric selection wire format: {"kind": "gaussian"} or
        {"kind": "custom", "poly": [c0, c1, ...]}."""
        kind = obj.get("kind")
        if kind == "custom":
            return cls.custom(obj["poly"], obj.get("domain_limit", math.inf))
        ctor = {
            "euclidean": cls.euclidean,
            "gaussian": cls.gaussian,
            "hyperbolic": cls.hyperbolic,
            "spherical": cls.spherical,
        }.get(kind)
        if ctor is None:
            raise ValueError(f"unknown conformal factor kind {kind!r}")
        return ctor()

    def to_json(self) -> dict:
        if self.kind == "custom":
            obj = {"kind": "custom", "poly": list(self.poly)}
            if math.isfinite(self.domain_limit):
                obj["domain_limit"] = self.domain_limit
            return obj
        return {"kind": self.kind}

    # -- pointwise evaluation ------------------------------------------------

    def _check(self, rho: float):
        if rho < 0.0:
            raise DomainError(f"negative squared radius {rho}")
        if rho >= self.domain_limit * self.domain_limit:
            raise DomainError(
                f"squared radius {rho} outside the factor domain "
                f"[0, {self.domain_limit}^2)"
            )

    def u(self, rho: float) -> float:
        self._check(rho)
        return kernel.cf_eval(self.code, self.poly, rho)[0]

    def du(self, rho: float) -> float:
        self._check(rho)
        return kernel.cf_eval(self.code, self.poly, rho)[1]

    def ddu(self, rho: float) -> float:
        self._check(rho)
        return kernel.cf_eval(self.code, self.poly, rho)[2]

    def eval(self, rho: float) -> tuple[float, float, float]:
        """(u, u', u'') in one call."""
        self._check(rho)
        return kernel.cf_eval(self.code, self.poly, rho)


@dataclass(frozen=True)
class AmbientPoint:
    """A point of the ball with its squared radius cached."""

    position: tuple[float, float, float]
    radius_sq: float = field(init=False)

    def __post_init__(self):
        p = self.position
        object.__setattr__(self, "radius_sq", p[0] * p[0] + p[1] * p[1] + p[2] * p[2])


def sigma(cf: ConformalFactor, radius_sq: float) -> float:
    """Potential of the conformal position field: 1 + 2 u'(rho) rho."""
    cf._check(radius_sq)
    du = kernel.cf_eval(cf.code, cf.poly, radius_sq)[1]
    return 1.0 + 2.0 * du * radius_sq


def grad_sigma_coefficient(cf: ConformalFactor, radius_sq: float) -> float:
    """Scalar c with grad sigma = c * x in the ambient metric:
    c = 4 e^{-2u} (u'' rho + u')."""
    u, du, ddu = cf.eval(radius_sq)
    return 4.0 * math.exp(-2.0 * u) * (ddu * radius_sq + du)


def sigma_positivity_radius(cf: ConformalFactor) -> float:
    """Largest r <= a with sigma > 0 on [0, r^2).

    Bisection on the smallest root of sigma in rho; returns the domain limit
    when sigma never vanishes there (the scan for a sign change on unbounded
    domains is capped at rho = 1e8).
    """
    rho_max = cf.domain_limit * cf.domain_limit
    scan_end = min(rho_max, _RHO_SCAN_MAX)

    def s(rho):
        return 1.0 + 2.0 * kernel.cf_eval(cf.code, cf.poly, rho)[1] * rho

    if s(0.0) <= 0.0:
        return 0.0

    # geometric sweep for the first sign change
    lo = 0.0
    hi = None
    step = min(scan_end, 1.0) / 64.0
    rho = step
    while rho < scan_end:
        if s(rho) <= 0.0:
            hi = rho
            break
        lo = rho
        rho = rho * 1.25 if rho > 0 else step
    if hi is None:
        # probe the boundary region of a finite domain
        if math.isfinite(rho_max):
            rho = lo + (rho_max - lo) * 0.5
            probes = 0
            while probes < 200 and s(rho) > 0.0:
                lo = rho
                rho = lo + (rho_max - lo) * 0.5
                probes += 1
            if s(rho) > 0.0:
                return cf.domain_limit
            hi = rho
        else:
            return cf.domain_limit

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if s(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return math.sqrt(hi)


def conformal_distance(cf: ConformalFactor, r: float) -> float:
    """Distance from the origin to |x| = r in the conformal metric:
    r * integral_0^1 e^{u(t^2 r^2)} dt, by adaptive quadrature."""
    if r < 0.0 or r >= cf.domain_limit:
        raise DomainError(f"radius {r} outside [0, {cf.domain_limit})")
    if r == 0.0:
        return 0.0
    kind, poly = cf.code, cf.poly
    rr = r * r

    def integrand(t):
        return math.exp(kernel.cf_eval(kind, poly, t * t * rr)[0])

    val, _ = quad(integrand, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12, limit=200)
    return r * val
