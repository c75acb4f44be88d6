"""Pure-Python twin of the compiled core (`confball._core`).

Hot kernels: radial conformal-factor evaluation, the two CMC right-hand
sides (graph parametrization over the rotation axis, and arclength /
tangent-angle form), and the adaptive Dormand-Prince 5(4) stepping loops
built on them.  The Cython module implements the same arithmetic in the
same order; either backend must pass the full test suite on its own.

Conventions shared by both backends:

* ``rho`` is the squared Euclidean distance to the origin, |x|^2 = x^2 + z^2.
* The radial factor u(rho) defines the ambient metric e^{2u(rho)} <,>.
* Graph mode integrates x(t) with t the axial coordinate (z == t);
  arclength mode integrates (x(s), z(s), theta(s)) with tangent
  (cos theta, sin theta) and curvature dtheta/ds.
* Status codes: 0 complete, 1 axis (x -> 0), 2 slope cap (graph mode),
  3 left the radial domain / stop radius.
"""

from math import cos, exp, log, sin, sqrt

from .errors import ToleranceError

BACKEND_NAME = "pure"

KIND_EUCLIDEAN = 0
KIND_GAUSSIAN = 1
KIND_HYPERBOLIC = 2
KIND_SPHERICAL = 3
KIND_POLY = 4

STATUS_COMPLETE = 0
STATUS_AXIS = 1
STATUS_SLOPE = 2
STATUS_DOMAIN = 3

_AXIS_EPS = 1e-9

# Dormand-Prince 5(4) tableau, FSAL.
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0

_MAX_FACTOR = 5.0
_MIN_FACTOR = 0.2
_SAFETY = 0.9


def cf_eval(kind, coefs, rho):
    """Radial factor and derivatives: returns (u, u', u'') at rho = |x|^2."""
    if kind == KIND_EUCLIDEAN:
        return 0.0, 0.0, 0.0
    if kind == KIND_GAUSSIAN:
        return -0.125 * rho, -0.125, 0.0
    if kind == KIND_HYPERBOLIC:
        om = 1.0 - rho
        inv = 1.0 / om
        return log(2.0 * inv), inv, inv * inv
    if kind == KIND_SPHERICAL:
        op = 1.0 + rho
        inv = 1.0 / op
        return log(2.0 * inv), -inv, inv * inv
    # polynomial in rho, Horner for u, u', u''
    u = 0.0
    du = 0.0
    ddu = 0.0
    i = len(coefs) - 1
    while i >= 0:
        c = coefs[i]
        if i >= 2:
            ddu = ddu * rho + c * i * (i - 1)
        if i >= 1:
            du = du * rho + c * i
        u = u * rho + c
        i -= 1
    return u, du, ddu


def cmc_accel(kind, coefs, hbar, t, x, v):
    """x'' for the graph-mode CMC equation.

    Inversion of the prescribed-mean-curvature equation for the revolution
    surface of x(t) in the metric e^{2u}<,> with H = k1 + k2:

        x'' = (1+v^2)/x + 4 u'(rho) (x - v t)(1+v^2) - e^{u(rho)} H (1+v^2)^{3/2}
    """
    rho = x * x + t * t
    u, du, _ = cf_eval(kind, coefs, rho)
    opv2 = 1.0 + v * v
    acc = opv2 / x + 4.0 * du * (x - v * t) * opv2
    if hbar != 0.0:
        acc -= hbar * exp(u) * opv2 * sqrt(opv2)
    return acc


def arc_rates(kind, coefs, hbar, x, z, theta):
    """(dx/ds, dz/ds, dtheta/ds) for the arclength form of the CMC equation.

    dtheta/ds is the planar curvature of the profile with respect to the
    normal obtained by rotating the tangent by +pi/2 (matching the graph-mode
    orientation when sin(theta) > 0):

        kappa = e^{u} H - sin(theta)/x + 4 u'(rho) (z cos(theta) - x sin(theta))
    """
    rho = x * x + z * z
    u, du, _ = cf_eval(kind, coefs, rho)
    st = sin(theta)
    ct = cos(theta)
    kappa = -st / x + 4.0 * du * (z * ct - x * st)
    if hbar != 0.0:
        kappa += hbar * exp(u)
    return ct, st, kappa


def integrate_graph(kind, coefs, hbar, t0, x0, v0, t_end, rtol, atol,
                    slope_cap, domain_rho, stop_rho, max_steps):
    """Adaptive DP5(4) integration of the graph-mode equation.

    Returns (ts, xs, vs, accs, status) with per-node accelerations for the
    dense Hermite output.  Raises ToleranceError when the controller
    underflows the step size for accuracy reasons (as opposed to hitting a
    geometric guard, which truncates with a status code).
    """
    if x0 <= 0.0:
        raise ValueError(f"profile starts on the axis: x0 = {x0}")
    span = t_end - t0
    if span == 0.0:
        acc0 = cmc_accel(kind, coefs, hbar, t0, x0, v0)
        return [t0], [x0], [v0], [acc0], STATUS_COMPLETE

    direction = 1.0 if span > 0.0 else -1.0
    h = direction * min(abs(span), max(1e-8, 0.01 * abs(span)))
    hmin = 1e-14 * max(abs(t0), abs(t_end), 1.0)

    t, x, v = t0, x0, v0
    rho0 = x * x + t * t
    if rho0 >= domain_rho:
        raise ValueError(f"start point outside the metric domain: |x|^2 = {rho0}")
    k1x = v
    k1v = cmc_accel(kind, coefs, hbar, t, x, v)

    ts = [t]
    xs = [x]
    vs = [v]
    accs = [k1v]
    status = STATUS_COMPLETE
    guard = 0  # pending geometric reason for step rejections

    steps = 0
    while direction * (t_end - t) > 0.0:
        steps += 1
        if steps > max_steps:
            raise ToleranceError(f"exceeded {max_steps} steps at t = {t}")
        if direction * (t + h - t_end) > 0.0:
            h = t_end - t

        bad = 0
        # stage 2
        xt = x + h * (_A21 * k1x)
        vt = v + h * (_A21 * k1v)
        tt = t + _C2 * h
        if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
            bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
        else:
            k2x = vt
            k2v = cmc_accel(kind, coefs, hbar, tt, xt, vt)
            # stage 3
            xt = x + h * (_A31 * k1x + _A32 * k2x)
            vt = v + h * (_A31 * k1v + _A32 * k2v)
            tt = t + _C3 * h
            if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
                bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
            else:
                k3x = vt
                k3v = cmc_accel(kind, coefs, hbar, tt, xt, vt)
                # stage 4
                xt = x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
                vt = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
                tt = t + _C4 * h
                if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
                    bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                else:
                    k4x = vt
                    k4v = cmc_accel(kind, coefs, hbar, tt, xt, vt)
                    # stage 5
                    xt = x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
                    vt = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
                    tt = t + _C5 * h
                    if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
                        bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                    else:
                        k5x = vt
                        k5v = cmc_accel(kind, coefs, hbar, tt, xt, vt)
                        # stage 6
                        xt = x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
                        vt = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v)
                        tt = t + h
                        if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
                            bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                        else:
                            k6x = vt
                            k6v = cmc_accel(kind, coefs, hbar, tt, xt, vt)
                            # 5th-order solution (also stage 7 point, FSAL)
                            xn = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
                            vn = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
                            tn = t + h
                            if xn <= 0.0 or xn * xn + tn * tn >= domain_rho:
                                bad = STATUS_AXIS if xn <= 0.0 else STATUS_DOMAIN

        if bad:
            guard = bad
            h *= 0.5
            if abs(h) < hmin:
                status = bad
                break
            continue

        k7x = vn
        k7v = cmc_accel(kind, coefs, hbar, tn, xn, vn)

        ex = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v)
        scx = atol + rtol * max(abs(x), abs(xn))
        scv = atol + rtol * max(abs(v), abs(vn))
        rx = ex / scx
        rv = ev / scv
        err = sqrt(0.5 * (rx * rx + rv * rv))

        if err <= 1.0:
            guard = 0
            t, x, v = tn, xn, vn
            k1x, k1v = k7x, k7v
            ts.append(t)
            xs.append(x)
            vs.append(v)
            accs.append(k1v)
            if x <= _AXIS_EPS:
                status = STATUS_AXIS
                break
            if abs(v) > slope_cap:
                status = STATUS_SLOPE
                break
            if x * x + t * t >= stop_rho:
                status = STATUS_DOMAIN
                break
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))
            h *= factor
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            if abs(h) < hmin:
                if guard:
                    status = guard
                    break
                raise ToleranceError(f"step size underflow at t = {t}")

    return ts, xs, vs, accs, status


def integrate_arc(kind, coefs, hbar, s0, x0, z0, th0, s_end, rtol, atol,
                  domain_rho, stop_rho, max_steps):
    """Adaptive DP5(4) integration of the arclength form.

    Returns (ss, xs, zs, ths, kappas, status); kappas are the node values of
    dtheta/ds (the meridian principal curvature k1).
    """
    if x0 <= 0.0:
        raise ValueError(f"profile starts on the axis: x0 = {x0}")
    span = s_end - s0
    if span == 0.0:
        _, _, kap = arc_rates(kind, coefs, hbar, x0, z0, th0)
        return [s0], [x0], [z0], [th0], [kap], STATUS_COMPLETE

    direction = 1.0 if span > 0.0 else -1.0
    h = direction * min(abs(span), max(1e-8, 0.01 * abs(span)))
    hmin = 1e-14 * max(abs(s0), abs(s_end), 1.0)

    s, x, z, th = s0, x0, z0, th0
    if x * x + z * z >= domain_rho:
        raise ValueError(f"start point outside the metric domain: |x|^2 = {x * x + z * z}")
    k1x, k1z, k1t = arc_rates(kind, coefs, hbar, x, z, th)

    ss = [s]
    xs = [x]
    zs = [z]
    ths = [th]
    kappas = [k1t]
    status = STATUS_COMPLETE
    guard = 0

    steps = 0
    while direction * (s_end - s) > 0.0:
        steps += 1
        if steps > max_steps:
            raise ToleranceError(f"exceeded {max_steps} steps at s = {s}")
        if direction * (s + h - s_end) > 0.0:
            h = s_end - s

        bad = 0
        xt = x + h * (_A21 * k1x)
        zt = z + h * (_A21 * k1z)
        tt = th + h * (_A21 * k1t)
        if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
            bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
        else:
            k2x, k2z, k2t = arc_rates(kind, coefs, hbar, xt, zt, tt)
            xt = x + h * (_A31 * k1x + _A32 * k2x)
            zt = z + h * (_A31 * k1z + _A32 * k2z)
            tt = th + h * (_A31 * k1t + _A32 * k2t)
            if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
                bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
            else:
                k3x, k3z, k3t = arc_rates(kind, coefs, hbar, xt, zt, tt)
                xt = x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
                zt = z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z)
                tt = th + h * (_A41 * k1t + _A42 * k2t + _A43 * k3t)
                if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
                    bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                else:
                    k4x, k4z, k4t = arc_rates(kind, coefs, hbar, xt, zt, tt)
                    xt = x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
                    zt = z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z)
                    tt = th + h * (_A51 * k1t + _A52 * k2t + _A53 * k3t + _A54 * k4t)
                    if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
                        bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                    else:
                        k5x, k5z, k5t = arc_rates(kind, coefs, hbar, xt, zt, tt)
                        xt = x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
                        zt = z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z)
                        tt = th + h * (_A61 * k1t + _A62 * k2t + _A63 * k3t + _A64 * k4t + _A65 * k5t)
                        if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
                            bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                        else:
                            k6x, k6z, k6t = arc_rates(kind, coefs, hbar, xt, zt, tt)
                            xn = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
                            zn = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
                            tn = th + h * (_B1 * k1t + _B3 * k3t + _B4 * k4t + _B5 * k5t + _B6 * k6t)
                            if xn <= 0.0 or xn * xn + zn * zn >= domain_rho:
                                bad = STATUS_AXIS if xn <= 0.0 else STATUS_DOMAIN

        if bad:
            guard = bad
            h *= 0.5
            if abs(h) < hmin:
                status = bad
                break
            continue

        k7x, k7z, k7t = arc_rates(kind, coefs, hbar, xn, zn, tn)

        ex = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        ez = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)
        et = h * (_E1 * k1t + _E3 * k3t + _E4 * k4t + _E5 * k5t + _E6 * k6t + _E7 * k7t)
        scx = atol + rtol * max(abs(x), abs(xn))
        scz = atol + rtol * max(abs(z), abs(zn))
        sct = atol + rtol * max(abs(th), abs(tn))
        rx = ex / scx
        rz = ez / scz
        rt = et / sct
        err = sqrt((rx * rx + rz * rz + rt * rt) / 3.0)

        if err <= 1.0:
            guard = 0
            s, x, z, th = s + h, xn, zn, tn
            k1x, k1z, k1t = k7x, k7z, k7t
            ss.append(s)
            xs.append(x)
            zs.append(z)
            ths.append(th)
            kappas.append(k1t)
            if x <= _AXIS_EPS:
                status = STATUS_AXIS
                break
            if x * x + z * z >= stop_rho:
                status = STATUS_DOMAIN
                break
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))
            h *= factor
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            if abs(h) < hmin:
                if guard:
                    status = guard
                    break
                raise ToleranceError(f"step size underflow at s = {s}")

    return ss, xs, zs, ths, kappas, status
