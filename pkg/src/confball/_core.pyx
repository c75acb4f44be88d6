# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of confball._kernel_py.

Same kernels, same arithmetic, same stepping logic; see the pure module for
the documented conventions.  Either backend must pass the full test suite.
"""

from libc.math cimport cos, exp, fabs, log, pow, sin, sqrt

from .errors import ToleranceError

BACKEND_NAME = "compiled"

KIND_EUCLIDEAN = 0
KIND_GAUSSIAN = 1
KIND_HYPERBOLIC = 2
KIND_SPHERICAL = 3
KIND_POLY = 4

STATUS_COMPLETE = 0
STATUS_AXIS = 1
STATUS_SLOPE = 2
STATUS_DOMAIN = 3

cdef double _AXIS_EPS = 1e-9

cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0, _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0, _A42 = -56.0 / 15.0, _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0, _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0, _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0, _A62 = -355.0 / 33.0, _A63 = 46732.0 / 5247.0
cdef double _A64 = 49.0 / 176.0, _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0, _B3 = 500.0 / 1113.0, _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0, _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0, _E3 = -71.0 / 16695.0, _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0, _E6 = 22.0 / 525.0, _E7 = -1.0 / 40.0
cdef double _C2 = 1.0 / 5.0, _C3 = 3.0 / 10.0, _C4 = 4.0 / 5.0, _C5 = 8.0 / 9.0

cdef double _MAX_FACTOR = 5.0
cdef double _MIN_FACTOR = 0.2
cdef double _SAFETY = 0.9


cdef inline void _cf_eval_c(int kind, double[::1] coefs, double rho,
                            double *u, double *du, double *ddu) noexcept nogil:
    cdef double om, op, inv, uu, d1, d2, c
    cdef Py_ssize_t i
    if kind == 0:
        u[0] = 0.0; du[0] = 0.0; ddu[0] = 0.0
        return
    if kind == 1:
        u[0] = -0.125 * rho; du[0] = -0.125; ddu[0] = 0.0
        return
    if kind == 2:
        om = 1.0 - rho
        inv = 1.0 / om
        u[0] = log(2.0 * inv); du[0] = inv; ddu[0] = inv * inv
        return
    if kind == 3:
        op = 1.0 + rho
        inv = 1.0 / op
        u[0] = log(2.0 * inv); du[0] = -inv; ddu[0] = inv * inv
        return
    uu = 0.0
    d1 = 0.0
    d2 = 0.0
    i = coefs.shape[0] - 1
    while i >= 0:
        c = coefs[i]
        if i >= 2:
            d2 = d2 * rho + c * i * (i - 1)
        if i >= 1:
            d1 = d1 * rho + c * i
        uu = uu * rho + c
        i -= 1
    u[0] = uu; du[0] = d1; ddu[0] = d2


cdef inline double _cmc_accel_c(int kind, double[::1] coefs, double hbar,
                                double t, double x, double v) noexcept nogil:
    cdef double rho = x * x + t * t
    cdef double u, du, ddu, opv2, acc
    _cf_eval_c(kind, coefs, rho, &u, &du, &ddu)
    opv2 = 1.0 + v * v
    acc = opv2 / x + 4.0 * du * (x - v * t) * opv2
    if hbar != 0.0:
        acc -= hbar * exp(u) * opv2 * sqrt(opv2)
    return acc


cdef inline void _arc_rates_c(int kind, double[::1] coefs, double hbar,
                              double x, double z, double theta,
                              double *dx, double *dz, double *dth) noexcept nogil:
    cdef double rho = x * x + z * z
    cdef double u, du, ddu, st, ct, kappa
    _cf_eval_c(kind, coefs, rho, &u, &du, &ddu)
    st = sin(theta)
    ct = cos(theta)
    kappa = -st / x + 4.0 * du * (z * ct - x * st)
    if hbar != 0.0:
        kappa += hbar * exp(u)
    dx[0] = ct; dz[0] = st; dth[0] = kappa


def cf_eval(int kind, coefs, double rho):
    """Radial factor and derivatives: returns (u, u', u'') at rho = |x|^2."""
    cdef double[::1] cmem = _as_coefs(coefs)
    cdef double u, du, ddu
    _cf_eval_c(kind, cmem, rho, &u, &du, &ddu)
    return u, du, ddu


def cmc_accel(int kind, coefs, double hbar, double t, double x, double v):
    """x'' for the graph-mode CMC equation (see the pure twin for the formula)."""
    cdef double[::1] cmem = _as_coefs(coefs)
    return _cmc_accel_c(kind, cmem, hbar, t, x, v)


def arc_rates(int kind, coefs, double hbar, double x, double z, double theta):
    """(dx/ds, dz/ds, dtheta/ds) for the arclength form."""
    cdef double[::1] cmem = _as_coefs(coefs)
    cdef double dx, dz, dth
    _arc_rates_c(kind, cmem, hbar, x, z, theta, &dx, &dz, &dth)
    return dx, dz, dth


import numpy as _np

cdef double[::1] _as_coefs(coefs):
    if len(coefs) == 0:
        return _np.empty(0, dtype=_np.float64)
    return _np.ascontiguousarray(coefs, dtype=_np.float64)


def integrate_graph(int kind, coefs, double hbar, double t0, double x0, double v0,
                    double t_end, double rtol, double atol, double slope_cap,
                    double domain_rho, double stop_rho, long max_steps):
    cdef double[::1] cmem = _as_coefs(coefs)
    if x0 <= 0.0:
        raise ValueError(f"profile starts on the axis: x0 = {x0}")
    cdef double span = t_end - t0
    cdef double acc0
    if span == 0.0:
        acc0 = _cmc_accel_c(kind, cmem, hbar, t0, x0, v0)
        return [t0], [x0], [v0], [acc0], STATUS_COMPLETE

    cdef double direction = 1.0 if span > 0.0 else -1.0
    cdef double mn = 0.01 * fabs(span)
    if mn < 1e-8:
        mn = 1e-8
    if mn > fabs(span):
        mn = fabs(span)
    cdef double h = direction * mn
    cdef double hmin = fabs(t0)
    if fabs(t_end) > hmin:
        hmin = fabs(t_end)
    if hmin < 1.0:
        hmin = 1.0
    hmin *= 1e-14

    cdef double t = t0, x = x0, v = v0
    cdef double rho0 = x * x + t * t
    if rho0 >= domain_rho:
        raise ValueError(f"start point outside the metric domain: |x|^2 = {rho0}")
    cdef double k1x = v
    cdef double k1v = _cmc_accel_c(kind, cmem, hbar, t, x, v)

    ts = [t]
    xs = [x]
    vs = [v]
    accs = [k1v]
    cdef int status = STATUS_COMPLETE
    cdef int guard = 0
    cdef int bad
    cdef long steps = 0

    cdef double xt, vt, tt, xn, vn, tn
    cdef double k2x, k2v, k3x, k3v, k4x, k4v, k5x, k5v, k6x, k6v, k7x, k7v
    cdef double ex, ev, scx, scv, rx, rv, err, factor, m

    while direction * (t_end - t) > 0.0:
        steps += 1
        if steps > max_steps:
            raise ToleranceError(f"exceeded {max_steps} steps at t = {t}")
        if direction * (t + h - t_end) > 0.0:
            h = t_end - t

        bad = 0
        xt = x + h * (_A21 * k1x)
        vt = v + h * (_A21 * k1v)
        tt = t + _C2 * h
        if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
            bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
        else:
            k2x = vt
            k2v = _cmc_accel_c(kind, cmem, hbar, tt, xt, vt)
            xt = x + h * (_A31 * k1x + _A32 * k2x)
            vt = v + h * (_A31 * k1v + _A32 * k2v)
            tt = t + _C3 * h
            if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
                bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
            else:
                k3x = vt
                k3v = _cmc_accel_c(kind, cmem, hbar, tt, xt, vt)
                xt = x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
                vt = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
                tt = t + _C4 * h
                if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
                    bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                else:
                    k4x = vt
                    k4v = _cmc_accel_c(kind, cmem, hbar, tt, xt, vt)
                    xt = x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
                    vt = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
                    tt = t + _C5 * h
                    if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
                        bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                    else:
                        k5x = vt
                        k5v = _cmc_accel_c(kind, cmem, hbar, tt, xt, vt)
                        xt = x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
                        vt = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v)
                        tt = t + h
                        if xt <= 0.0 or xt * xt + tt * tt >= domain_rho:
                            bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                        else:
                            k6x = vt
                            k6v = _cmc_accel_c(kind, cmem, hbar, tt, xt, vt)
                            xn = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
                            vn = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
                            tn = t + h
                            if xn <= 0.0 or xn * xn + tn * tn >= domain_rho:
                                bad = STATUS_AXIS if xn <= 0.0 else STATUS_DOMAIN

        if bad:
            guard = bad
            h *= 0.5
            if fabs(h) < hmin:
                status = bad
                break
            continue

        k7x = vn
        k7v = _cmc_accel_c(kind, cmem, hbar, tn, xn, vn)

        ex = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v)
        m = fabs(x)
        if fabs(xn) > m:
            m = fabs(xn)
        scx = atol + rtol * m
        m = fabs(v)
        if fabs(vn) > m:
            m = fabs(vn)
        scv = atol + rtol * m
        rx = ex / scx
        rv = ev / scv
        err = sqrt(0.5 * (rx * rx + rv * rv))

        if err <= 1.0:
            guard = 0
            t = tn; x = xn; v = vn
            k1x = k7x; k1v = k7v
            ts.append(t)
            xs.append(x)
            vs.append(v)
            accs.append(k1v)
            if x <= _AXIS_EPS:
                status = STATUS_AXIS
                break
            if fabs(v) > slope_cap:
                status = STATUS_SLOPE
                break
            if x * x + t * t >= stop_rho:
                status = STATUS_DOMAIN
                break
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = _SAFETY * pow(err, -0.2)
                if factor > _MAX_FACTOR:
                    factor = _MAX_FACTOR
                if factor < _MIN_FACTOR:
                    factor = _MIN_FACTOR
            h *= factor
        else:
            factor = _SAFETY * pow(err, -0.2)
            if factor < _MIN_FACTOR:
                factor = _MIN_FACTOR
            h *= factor
            if fabs(h) < hmin:
                if guard:
                    status = guard
                    break
                raise ToleranceError(f"step size underflow at t = {t}")

    return ts, xs, vs, accs, status


def integrate_arc(int kind, coefs, double hbar, double s0, double x0, double z0,
                  double th0, double s_end, double rtol, double atol,
                  double domain_rho, double stop_rho, long max_steps):
    cdef double[::1] cmem = _as_coefs(coefs)
    if x0 <= 0.0:
        raise ValueError(f"profile starts on the axis: x0 = {x0}")
    cdef double span = s_end - s0
    cdef double d0x, d0z, d0t
    if span == 0.0:
        _arc_rates_c(kind, cmem, hbar, x0, z0, th0, &d0x, &d0z, &d0t)
        return [s0], [x0], [z0], [th0], [d0t], STATUS_COMPLETE

    cdef double direction = 1.0 if span > 0.0 else -1.0
    cdef double mn = 0.01 * fabs(span)
    if mn < 1e-8:
        mn = 1e-8
    if mn > fabs(span):
        mn = fabs(span)
    cdef double h = direction * mn
    cdef double hmin = fabs(s0)
    if fabs(s_end) > hmin:
        hmin = fabs(s_end)
    if hmin < 1.0:
        hmin = 1.0
    hmin *= 1e-14

    cdef double s = s0, x = x0, z = z0, th = th0
    if x * x + z * z >= domain_rho:
        raise ValueError(f"start point outside the metric domain: |x|^2 = {x * x + z * z}")
    cdef double k1x, k1z, k1t
    _arc_rates_c(kind, cmem, hbar, x, z, th, &k1x, &k1z, &k1t)

    ss = [s]
    xs = [x]
    zs = [z]
    ths = [th]
    kappas = [k1t]
    cdef int status = STATUS_COMPLETE
    cdef int guard = 0
    cdef int bad
    cdef long steps = 0

    cdef double xt, zt, tt, xn, zn, tn
    cdef double k2x, k2z, k2t, k3x, k3z, k3t, k4x, k4z, k4t
    cdef double k5x, k5z, k5t, k6x, k6z, k6t, k7x, k7z, k7t
    cdef double ex, ez, et, scx, scz, sct, rx, rz, rt, err, factor, m

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
            _arc_rates_c(kind, cmem, hbar, xt, zt, tt, &k2x, &k2z, &k2t)
            xt = x + h * (_A31 * k1x + _A32 * k2x)
            zt = z + h * (_A31 * k1z + _A32 * k2z)
            tt = th + h * (_A31 * k1t + _A32 * k2t)
            if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
                bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
            else:
                _arc_rates_c(kind, cmem, hbar, xt, zt, tt, &k3x, &k3z, &k3t)
                xt = x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
                zt = z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z)
                tt = th + h * (_A41 * k1t + _A42 * k2t + _A43 * k3t)
                if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
                    bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                else:
                    _arc_rates_c(kind, cmem, hbar, xt, zt, tt, &k4x, &k4z, &k4t)
                    xt = x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
                    zt = z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z)
                    tt = th + h * (_A51 * k1t + _A52 * k2t + _A53 * k3t + _A54 * k4t)
                    if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
                        bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                    else:
                        _arc_rates_c(kind, cmem, hbar, xt, zt, tt, &k5x, &k5z, &k5t)
                        xt = x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
                        zt = z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z)
                        tt = th + h * (_A61 * k1t + _A62 * k2t + _A63 * k3t + _A64 * k4t + _A65 * k5t)
                        if xt <= 0.0 or xt * xt + zt * zt >= domain_rho:
                            bad = STATUS_AXIS if xt <= 0.0 else STATUS_DOMAIN
                        else:
                            _arc_rates_c(kind, cmem, hbar, xt, zt, tt, &k6x, &k6z, &k6t)
                            xn = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
                            zn = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
                            tn = th + h * (_B1 * k1t + _B3 * k3t + _B4 * k4t + _B5 * k5t + _B6 * k6t)
                            if xn <= 0.0 or xn * xn + zn * zn >= domain_rho:
                                bad = STATUS_AXIS if xn <= 0.0 else STATUS_DOMAIN

        if bad:
            guard = bad
            h *= 0.5
            if fabs(h) < hmin:
                status = bad
                break
            continue

        _arc_rates_c(kind, cmem, hbar, xn, zn, tn, &k7x, &k7z, &k7t)

        ex = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        ez = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)
        et = h * (_E1 * k1t + _E3 * k3t + _E4 * k4t + _E5 * k5t + _E6 * k6t + _E7 * k7t)
        m = fabs(x)
        if fabs(xn) > m:
            m = fabs(xn)
        scx = atol + rtol * m
        m = fabs(z)
        if fabs(zn) > m:
            m = fabs(zn)
        scz = atol + rtol * m
        m = fabs(th)
        if fabs(tn) > m:
            m = fabs(tn)
        sct = atol + rtol * m
        rx = ex / scx
        rz = ez / scz
        rt = et / sct
        err = sqrt((rx * rx + rz * rz + rt * rt) / 3.0)

        if err <= 1.0:
            guard = 0
            s = s + h; x = xn; z = zn; th = tn
            k1x = k7x; k1z = k7z; k1t = k7t
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
                factor = _SAFETY * pow(err, -0.2)
                if factor > _MAX_FACTOR:
                    factor = _MAX_FACTOR
                if factor < _MIN_FACTOR:
                    factor = _MIN_FACTOR
            h *= factor
        else:
            factor = _SAFETY * pow(err, -0.2)
            if factor < _MIN_FACTOR:
                factor = _MIN_FACTOR
            h *= factor
            if fabs(h) < hmin:
                if guard:
                    status = guard
                    break
                raise ToleranceError(f"step size underflow at s = {s}")

    return ss, xs, zs, ths, kappas, status
