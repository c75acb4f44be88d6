"""Profile curves of CMC surfaces of revolution and their integrators.

A surface of revolution around the z-axis is generated by a planar profile
(x, z) with x > 0.  Two parametrizations are integrated:

* graph mode: x(t) with t == z the axial coordinate; the state is
  (t, x, x') and the second-order equation is solved for x''
  (``cmc_rhs``).  Substituting the returned x'' back into the forward
  mean-curvature expression reproduces the prescribed value to roundoff
  (``forward_mean_curvature``), which pins the algebraic inversion.
* arclength mode: (x(s), z(s), theta(s)) with tangent
  (cos theta, sin theta) and curvature dtheta/ds.  This continues through
  vertical tangents where graph mode must truncate (closed profiles).

Integration is adaptive Dormand-Prince 5(4) via the selected backend
kernel.  Dense output between accepted nodes uses two-point Hermite
interpolation (quintic in graph mode, where node accelerations are free;
cubic per component in arclength mode).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from ._backend import kernel
from .errors import AxisError, DomainError
from .metric import ConformalFactor

GRAPH = "graph"
ARCLENGTH = "arclength"

DEFAULT_TOL = 1e-10
DEFAULT_SLOPE_CAP = 1e6
DEFAULT_MAX_STEPS = 1_000_000

_TRUNCATION = {
    kernel.STATUS_COMPLETE: None,
    kernel.STATUS_AXIS: "axis",
    kernel.STATUS_SLOPE: "slope",
    kernel.STATUS_DOMAIN: "domain",
}


@dataclass(frozen=True)
class ProfileState:
    """One point of a profile curve.

    ``param`` is t (graph mode) or s (arclength mode); ``deriv`` is x'
    (graph) or the tangent angle theta (arclength); ``z`` is the axial
    coordinate (== param in graph mode).
    """

    param: float
    x: float
    deriv: float
    z: float

    @classmethod
    def graph(cls, t, x, xp):
        return cls(float(t), float(x), float(xp), float(t))

    @classmethod
    def arc(cls, s, x, z, theta):
        return cls(float(s), float(x), float(theta), float(z))

    @property
    def t(self):
        return self.param

    @property
    def s(self):
        return self.param

    @property
    def xp(self):
        return self.deriv

    @property
    def theta(self):
        return self.deriv

    @property
    def radius_sq(self):
        return self.x * self.x + self.z * self.z


def cmc_rhs(cf: ConformalFactor, Hbar: float, state: ProfileState) -> float:
    """x'' solved from the prescribed-mean-curvature equation (graph mode).

    x'' = (1+x'^2)/x + 4 u'(rho) (x - x' t)(1+x'^2) - e^{u(rho)} H (1+x'^2)^{3/2}
    """
    if state.x <= 0.0:
        raise AxisError(f"x = {state.x} <= 0 at t = {state.t}")
    rho = state.x * state.x + state.t * state.t
    cf._check(rho)
    return kernel.cmc_accel(cf.code, cf.poly, Hbar, state.t, state.x, state.xp)


def forward_mean_curvature(cf: ConformalFactor, state: ProfileState, xpp: float) -> float:
    """Mean curvature (k1 + k2 convention) of the revolution surface at a
    graph-mode state with the given x'' — the forward expression whose
    algebraic inversion is ``cmc_rhs``."""
    if state.x <= 0.0:
        raise AxisError(f"x = {state.x} <= 0 at t = {state.t}")
    x, v, t = state.x, state.xp, state.t
    rho = x * x + t * t
    u, du, _ = cf.eval(rho)
    opv2 = 1.0 + v * v
    root = math.sqrt(opv2)
    return math.exp(-u) * (
        (-xpp * x + v * v + 1.0) / (x * opv2 * root) + 4.0 * du * (x - v * t) / root
    )


def shrinker_rhs(state: ProfileState) -> float:
    """x'' for the self-shrinker equation of the Gaussian metric:
    x''/(1+x'^2) = 1/x - (x - x' t)/2."""
    if state.x <= 0.0:
        raise AxisError(f"x = {state.x} <= 0 at t = {state.t}")
    x, v, t = state.x, state.xp, state.t
    return (1.0 + v * v) * (1.0 / x - 0.5 * (x - v * t))


def arc_rhs(cf: ConformalFactor, Hbar: float, state: ProfileState):
    """(dx/ds, dz/ds, dtheta/ds) at an arclength-mode state."""
    if state.x <= 0.0:
        raise AxisError(f"x = {state.x} <= 0 at s = {state.s}")
    rho = state.x * state.x + state.z * state.z
    cf._check(rho)
    return kernel.arc_rates(cf.code, cf.poly, Hbar, state.x, state.z, state.theta)


@dataclass
class ProfileCurve:
    """A discretized ODE solution with dense output.

    Node arrays: ``params`` (t or s), ``x``, ``deriv`` (x' or theta),
    ``z``, ``second`` (x'' or dtheta/ds at the nodes).
    """

    mode: str
    cf: ConformalFactor
    target_H: float
    tol: float
    params: np.ndarray
    x: np.ndarray
    deriv: np.ndarray
    z: np.ndarray
    second: np.ndarray
    truncation: str | None = None
    _ascending: bool = field(init=False, repr=False, default=True)

    def __post_init__(self):
        if len(self.params) == 0:
            raise ValueError("empty curve")
        if np.any(self.x <= 0.0):
            raise AxisError("stored profile state with x <= 0")
        d = np.diff(self.params)
        if len(d) and np.all(d < 0):
            # normalize to ascending parameter order
            for name in ("params", "x", "deriv", "z", "second"):
                setattr(self, name, getattr(self, name)[::-1].copy())
        elif len(d) and not np.all(d > 0):
            raise ValueError("curve parameters are not strictly ordered")

    def __len__(self):
        return len(self.params)

    @property
    def param_start(self):
        return float(self.params[0])

    @property
    def param_end(self):
        return float(self.params[-1])

    @property
    def states(self) -> list[ProfileState]:
        return [
            ProfileState(float(p), float(x), float(d), float(z))
            for p, x, d, z in zip(self.params, self.x, self.deriv, self.z)
        ]

    def state_at_node(self, i: int) -> ProfileState:
        return ProfileState(
            float(self.params[i]), float(self.x[i]), float(self.deriv[i]), float(self.z[i])
        )

    # -- dense output --------------------------------------------------------

    def _interval(self, p: float) -> int:
        if p < self.params[0] - 1e-12 or p > self.params[-1] + 1e-12:
            raise DomainError(
                f"parameter {p} outside the curve range "
                f"[{self.params[0]}, {self.params[-1]}]"
            )
        i = int(np.searchsorted(self.params, p, side="right")) - 1
        return min(max(i, 0), len(self.params) - 2) if len(self.params) > 1 else 0

    def eval(self, p: float) -> ProfileState:
        """Dense-output state at an arbitrary parameter inside the range."""
        if len(self.params) == 1:
            return self.state_at_node(0)
        i = self._interval(p)
        if self.mode == GRAPH:
            x, v = _quintic_hermite(
                self.params[i], self.params[i + 1],
                self.x[i], self.deriv[i], self.second[i],
                self.x[i + 1], self.deriv[i + 1], self.second[i + 1], p,
            )
            return ProfileState(float(p), float(x), float(v), float(p))
        x = _cubic_hermite(
            self.params[i], self.params[i + 1],
            self.x[i], math.cos(self.deriv[i]),
            self.x[i + 1], math.cos(self.deriv[i + 1]), p,
        )
        z = _cubic_hermite(
            self.params[i], self.params[i + 1],
            self.z[i], math.sin(self.deriv[i]),
            self.z[i + 1], math.sin(self.deriv[i + 1]), p,
        )
        th = _cubic_hermite(
            self.params[i], self.params[i + 1],
            self.deriv[i], self.second[i],
            self.deriv[i + 1], self.second[i + 1], p,
        )
        return ProfileState.arc(float(p), float(x), float(z), float(th))

    def second_at(self, state: ProfileState) -> float:
        """x'' (graph) or dtheta/ds (arclength) from the ODE right-hand side,
        never from differencing."""
        if self.mode == GRAPH:
            return cmc_rhs(self.cf, self.target_H, state)
        return arc_rhs(self.cf, self.target_H, state)[2]

    def sample_params(self, min_count: int = 257) -> np.ndarray:
        """Node parameters plus a uniform refinement (deduplicated, sorted)."""
        uni = np.linspace(self.params[0], self.params[-1], max(min_count, 2))
        return np.unique(np.concatenate([self.params, uni]))

    # -- transforms -----------------------------------------------------------

    def mirror_even(self) -> "ProfileCurve":
        """Extend a graph-mode solution on [0, T] with x'(0) = 0 to [-T, T]
        using the even symmetry x(-t) = x(t)."""
        if self.mode != GRAPH:
            raise ValueError("mirror_even needs a graph-mode curve")
        if abs(self.params[0]) > 1e-14 or abs(self.deriv[0]) > 1e-9:
            raise ValueError("mirror_even needs a curve starting at t = 0 with x'(0) = 0")
        p = np.concatenate([-self.params[:0:-1], self.params])
        x = np.concatenate([self.x[:0:-1], self.x])
        v = np.concatenate([-self.deriv[:0:-1], self.deriv])
        a = np.concatenate([self.second[:0:-1], self.second])
        return ProfileCurve(
            mode=GRAPH, cf=self.cf, target_H=self.target_H, tol=self.tol,
            params=p, x=x, deriv=v, z=p.copy(), second=a, truncation=self.truncation,
        )

    def arclength_total(self) -> float:
        """Euclidean length of the profile curve."""
        if self.mode == ARCLENGTH:
            return float(self.params[-1] - self.params[0])
        val, _ = quad(
            lambda t: math.sqrt(1.0 + self.eval(t).xp ** 2),
            self.params[0], self.params[-1], epsabs=1e-12, epsrel=1e-12, limit=500,
        )
        return val

    # -- serialization --------------------------------------------------------

    def to_csv_rows(self):
        header = ("param", "x", "xp_or_theta", "z")
        rows = zip(self.params, self.x, self.deriv, self.z)
        return header, rows

    def to_json_obj(self) -> dict:
        return {
            "mode": self.mode,
            "cf": self.cf.to_json(),
            "target_H": self.target_H,
            "tol": self.tol,
            "truncation": self.truncation,
            "param": [float(v) for v in self.params],
            "x": [float(v) for v in self.x],
            "xp_or_theta": [float(v) for v in self.deriv],
            "z": [float(v) for v in self.z],
            "second": [float(v) for v in self.second],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ProfileCurve":
        return cls(
            mode=obj["mode"],
            cf=ConformalFactor.from_json(obj["cf"]),
            target_H=float(obj["target_H"]),
            tol=float(obj["tol"]),
            params=np.asarray(obj["param"], dtype=float),
            x=np.asarray(obj["x"], dtype=float),
            deriv=np.asarray(obj["xp_or_theta"], dtype=float),
            z=np.asarray(obj["z"], dtype=float),
            second=np.asarray(obj["second"], dtype=float),
            truncation=obj.get("truncation"),
        )


def _quintic_hermite(t0, t1, x0, v0, a0, x1, v1, a1, t):
    """Two-point quintic Hermite matching (x, x', x'') at both ends;
    returns (x, x') at t."""
    h = t1 - t0
    tau = (t - t0) / h
    A = x1 - x0 - h * v0 - 0.5 * h * h * a0
    B = h * (v1 - v0) - h * h * a0
    C = h * h * (a1 - a0)
    c3 = 10.0 * A - 4.0 * B + 0.5 * C
    c4 = -15.0 * A + 7.0 * B - C
    c5 = 6.0 * A - 3.0 * B + 0.5 * C
    x = x0 + tau * (h * v0 + tau * (0.5 * h * h * a0 + tau * (c3 + tau * (c4 + tau * c5))))
    dp = h * v0 + tau * (h * h * a0 + tau * (3.0 * c3 + tau * (4.0 * c4 + tau * 5.0 * c5)))
    return x, dp / h


def _cubic_hermite(t0, t1, y0, d0, y1, d1, t):
    h = t1 - t0
    tau = (t - t0) / h
    tau2 = tau * tau
    tau3 = tau2 * tau
    return (
        (2.0 * tau3 - 3.0 * tau2 + 1.0) * y0
        + (tau3 - 2.0 * tau2 + tau) * h * d0
        + (-2.0 * tau3 + 3.0 * tau2) * y1
        + (tau3 - tau2) * h * d1
    )


def _graph_curve_from_raw(cf, hbar, tol, raw) -> ProfileCurve:
    ts, xs, vs, accs, status = raw
    p = np.asarray(ts, dtype=float)
    return ProfileCurve(
        mode=GRAPH, cf=cf, target_H=hbar, tol=tol,
        params=p, x=np.asarray(xs, dtype=float), deriv=np.asarray(vs, dtype=float),
        z=p.copy(), second=np.asarray(accs, dtype=float),
        truncation=_TRUNCATION[status],
    )


def _integrate_graph_raw(cf, hbar, t0, x0, v0, t1, tol, slope_cap, stop_radius, max_steps):
    domain_rho = cf.domain_limit * cf.domain_limit
    stop_rho = min(stop_radius * stop_radius, math.inf) if stop_radius is not None else math.inf
    return kernel.integrate_graph(
        cf.code, cf.poly, hbar, t0, x0, v0, t1, tol, tol,
        slope_cap, domain_rho, stop_rho, max_steps,
    )


def integrate(cf: ConformalFactor, Hbar: float, x0: float, xp0: float,
              span, tol: float = DEFAULT_TOL, slope_cap: float = DEFAULT_SLOPE_CAP,
              stop_radius: float | None = None,
              max_steps: int = DEFAULT_MAX_STEPS) -> ProfileCurve:
    """Integrate the graph-mode CMC equation from (x0, x'0) at t = 0.

    ``span`` is (0, T); T may be negative.  Stops early with a flagged
    truncation reason when the profile approaches the axis, exceeds the
    slope cap, or leaves the radial domain (or the optional hard stop
    radius).
    """
    t0, t1 = float(span[0]), float(span[1])
    if t0 != 0.0:
        raise ValueError(f"span must start at 0, got {span}")
    if x0 <= 0.0:
        raise AxisError(f"x0 = {x0} <= 0")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    raw = _integrate_graph_raw(cf, Hbar, t0, x0, xp0, t1, tol, slope_cap, stop_radius, max_steps)
    return _graph_curve_from_raw(cf, Hbar, tol, raw)


def _arc_curve_from_raw(cf, hbar, tol, raw) -> ProfileCurve:
    ss, xs, zs, ths, kappas, status = raw
    return ProfileCurve(
        mode=ARCLENGTH, cf=cf, target_H=hbar, tol=tol,
        params=np.asarray(ss, dtype=float), x=np.asarray(xs, dtype=float),
        deriv=np.asarray(ths, dtype=float), z=np.asarray(zs, dtype=float),
        second=np.asarray(kappas, dtype=float),
        truncation=_TRUNCATION[status],
    )


def _integrate_arc_raw(cf, hbar, s0, x0, z0, th0, s1, tol, stop_radius, max_steps):
    domain_rho = cf.domain_limit * cf.domain_limit
    stop_rho = min(stop_radius * stop_radius, math.inf) if stop_radius is not None else math.inf
    return kernel.integrate_arc(
        cf.code, cf.poly, hbar, s0, x0, z0, th0, s1, tol, tol,
        domain_rho, stop_rho, max_steps,
    )


def integrate_arclength(cf: ConformalFactor, Hbar: float, start: ProfileState,
                        max_s: float, tol: float = DEFAULT_TOL,
                        stop_radius: float | None = None,
                        max_steps: int = DEFAULT_MAX_STEPS) -> ProfileCurve:
    """Integrate the arclength form from an arc-mode start state over
    [start.s, start.s + max_s]."""
    if start.x <= 0.0:
        raise AxisError(f"start.x = {start.x} <= 0")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    raw = _integrate_arc_raw(
        cf, Hbar, start.s, start.x, start.z, start.theta,
        start.s + max_s, tol, stop_radius, max_steps,
    )
    return _arc_curve_from_raw(cf, Hbar, tol, raw)


def graph_to_arclength(curve: ProfileCurve, tol: float | None = None) -> ProfileCurve:
    """Re-integrate a graph-mode solution in arclength form from its first
    node (theta = atan2(1, x'), the orientation of increasing t)."""
    if curve.mode != GRAPH:
        raise ValueError("expected a graph-mode curve")
    tol = curve.tol if tol is None else tol
    s_total = curve.arclength_total()
    start = ProfileState.arc(
        0.0, curve.x[0], curve.params[0], math.atan2(1.0, curve.deriv[0])
    )
    return integrate_arclength(curve.cf, curve.target_H, start, s_total, tol=tol)


def arclength_to_graph(curve: ProfileCurve, tol: float | None = None) -> ProfileCurve:
    """Re-integrate an arclength-mode solution as a graph over the axis.

    Requires the tangent to keep a positive z-component (sin theta > 0)
    along the curve, i.e. no vertical turning points.
    """
    if curve.mode != ARCLENGTH:
        raise ValueError("expected an arclength-mode curve")
    if np.any(np.sin(curve.deriv) <= 0.0):
        raise ValueError("curve is not a graph over the axis (vertical tangent present)")
    tol = curve.tol if tol is None else tol
    th0 = curve.deriv[0]
    v0 = math.cos(th0) / math.sin(th0)
    raw = _integrate_graph_raw(
        curve.cf, curve.target_H, float(curve.z[0]), float(curve.x[0]), v0,
        float(curve.z[-1]), tol, DEFAULT_SLOPE_CAP, None, DEFAULT_MAX_STEPS,
    )
    return _graph_curve_from_raw(curve.cf, curve.target_H, tol, raw)
