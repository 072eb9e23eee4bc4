# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: mirror of ``_core_py`` (see that module's docstring).

Every arithmetic statement matches _core_py.py in order, so both backends
produce bit-identical doubles. Edit the two together or not at all.
"""

from libc.math cimport exp, log, log1p, sqrt, floor, fabs, sinh, cosh
from libc.stdlib cimport malloc, free

BACKEND = "compiled"

# Frozen bit patterns shared with the pure twin (decimal repr round-trips).
cdef double E64I = 1.603810890548638e-28
cdef double E64 = 6.235149080811617e+27
cdef double _E = 2.718281828459045
cdef double _LN2 = 0.6931471805599453
cdef double _BIG = 1e250
cdef double _TINY = 1e-250
cdef double _ADD_CUTOFF = 120.0
cdef double _NAN = float("nan")


cdef struct SR:
    double m
    double k

cdef struct SRP:
    double am
    double ak
    double bm
    double bk

cdef struct Modes:
    double tem
    double tek
    double tmm
    double tmk


# -- scaled primitives -------------------------------------------------------

cdef inline SR c_norm(double m, double k) nogil:
    cdef SR r
    cdef double a, j, h
    if m == 0.0:
        r.m = 0.0
        r.k = 0.0
        return r
    a = fabs(m)
    if a >= _E or a < 1.0:
        j = floor(log(a))
        if j != 0.0:
            if fabs(j) <= 700.0:
                m = m / exp(j)
            else:
                h = floor(j / 2.0)
                m = m / exp(h) / exp(j - h)
            k += j
        a = fabs(m)
        while a >= _E:
            m /= _E
            k += 1.0
            a = fabs(m)
        while a < 1.0:
            m *= _E
            k -= 1.0
            a = fabs(m)
    r.m = m
    r.k = k
    return r


cdef inline SR c_mul(double m1, double k1, double m2, double k2) nogil:
    cdef SR r
    if m1 == 0.0 or m2 == 0.0:
        r.m = 0.0
        r.k = 0.0
        return r
    return c_norm(m1 * m2, k1 + k2)


cdef inline SR c_div(double m1, double k1, double m2, double k2) nogil:
    cdef SR r
    if m1 == 0.0:
        r.m = 0.0
        r.k = 0.0
        return r
    return c_norm(m1 / m2, k1 - k2)


cdef inline SR c_scale(double m, double k, double c) nogil:
    cdef SR r
    if m == 0.0 or c == 0.0:
        r.m = 0.0
        r.k = 0.0
        return r
    return c_norm(m * c, k)


cdef inline SR c_add(double m1, double k1, double m2, double k2) nogil:
    cdef SR r
    cdef double d
    if m1 == 0.0:
        r.m = m2
        r.k = k2
        return r
    if m2 == 0.0:
        r.m = m1
        r.k = k1
        return r
    if k1 >= k2:
        d = k1 - k2
        if d > _ADD_CUTOFF:
            r.m = m1
            r.k = k1
            return r
        return c_norm(m1 + m2 * exp(-d), k1)
    d = k2 - k1
    if d > _ADD_CUTOFF:
        r.m = m2
        r.k = k2
        return r
    return c_norm(m2 + m1 * exp(-d), k2)


cdef inline SR c_sub(double m1, double k1, double m2, double k2) nogil:
    return c_add(m1, k1, -m2, k2)


# -- modified Riccati-Bessel chains ------------------------------------------

cdef inline double c_gamma(double xi, double mu) nogil:
    if mu == 0.0:
        return xi
    if xi == 0.0:
        return mu
    return sqrt(xi * xi + mu * mu)


cdef SR c_s_sum(long l, double z, double m, double k) nogil:
    cdef double z2 = z * z
    cdef double tot = m
    cdef double term = m
    cdef long n = 0
    cdef SR r
    while True:
        term = term * z2 / (2.0 * (n + 1.0) * (2.0 * n + 2.0 * l + 3.0))
        tot += term
        n += 1
        if term <= tot * 1e-18:
            break
        if tot > _BIG:
            tot *= E64I
            term *= E64I
            k += 64.0
        if n > 100000:
            r.m = _NAN
            r.k = 0.0
            return r
    return c_norm(tot, k)


cdef SRP c_s_series_pair(long l, double z) nogil:
    cdef double m = 1.0
    cdef double k = 0.0
    cdef double m1
    cdef long j
    cdef SR a, b
    cdef SRP out
    for j in range(l):
        m *= z / (2.0 * j + 1.0)
        if m > _BIG:
            m *= E64I
            k += 64.0
        elif m < _TINY:
            m *= E64
            k -= 64.0
    m1 = m * (z / (2.0 * l + 1.0))
    a = c_s_sum(l, z, m1, k)
    b = c_s_sum(l - 1, z, m, k)
    out.am = a.m
    out.ak = a.k
    out.bm = b.m
    out.bk = b.k
    return out


cdef SRP c_s_miller(long l, double z) nogil:
    # Start order must clear max(order, argument): below the turning point
    # the two recurrence solutions degenerate and seed junk stops decaying.
    cdef long L = <long> (z if z > <double> l else <double> l) + 26
    cdef double ym = 0.0
    cdef double y = 1.0
    cdef double off = 0.0
    cdef double out1m = 0.0, out1k = 0.0, out0m = 0.0, out0k = 0.0
    cdef double t, k0, m0
    cdef long j = L
    cdef SR a, b
    cdef SRP out
    while j >= 1:
        t = ym + (2.0 * j + 1.0) / z * y
        ym = y
        y = t
        if y > _BIG:
            y *= E64I
            ym *= E64I
            off += 64.0
        if j - 1 == l:
            out1m = y
            out1k = off
        elif j - 1 == l - 1:
            out0m = y
            out0k = off
        j -= 1
    # Normalize against s_0 = exp(z)(1 - exp(-2z))/2 with the exponent held
    # as floor(z): z - floor(z) is exact, so the mantissa never pays the
    # z*eps penalty of an exp(log(..)) round-trip.
    k0 = floor(z)
    m0 = exp(z - k0) * (0.5 * (1.0 - exp(-2.0 * z)))
    a = c_norm(out1m / y * m0, k0 + (out1k - off))
    b = c_norm(out0m / y * m0, k0 + (out0k - off))
    out.am = a.m
    out.ak = a.k
    out.bm = b.m
    out.bk = b.k
    return out


cdef SRP c_s_pair(long l, double z) nogil:
    cdef double em2, f, k0
    cdef SR a, b
    cdef SRP out
    if l == 0:
        if z > 30.0:
            em2 = exp(-2.0 * z)
            k0 = floor(z)
            f = exp(z - k0)
            a = c_norm(f * (0.5 * (1.0 - em2)), k0)
            b = c_norm(f * (0.5 * (1.0 + em2)), k0)
        else:
            a = c_norm(sinh(z), 0.0)
            b = c_norm(cosh(z), 0.0)
        out.am = a.m
        out.ak = a.k
        out.bm = b.m
        out.bk = b.k
        return out
    if z > 1.2 * l + 20.0 and z > 30.0:
        return c_s_miller(l, z)
    return c_s_series_pair(l, z)


cdef SRP c_e_pair(long l, double z) nogil:
    cdef double k = floor(-z)
    cdef double m = exp(-z - k)
    cdef double a = m
    cdef double b = m
    cdef double t
    cdef long j
    cdef SR p, q
    cdef SRP out
    for j in range(l):
        t = a + (2.0 * j + 1.0) / z * b
        a = b
        b = t
        if b > _BIG:
            a *= E64I
            b *= E64I
            k += 64.0
    p = c_norm(b, k)
    q = c_norm(a, k)
    out.am = p.m
    out.ak = p.k
    out.bm = q.m
    out.bk = q.k
    return out


# -- mode determinants -------------------------------------------------------

cdef inline SR c_two(double am, double ak, double bm, double bk,
                     double cm, double ck, double dm, double dk) nogil:
    cdef SR p = c_mul(am, ak, dm, dk)
    cdef SR q = c_mul(bm, bk, cm, ck)
    return c_sub(p.m, p.k, q.m, q.k)


cdef double c_log1m(double m, double k) nogil:
    cdef double la, v
    cdef SR d
    if m == 0.0:
        return -0.0
    la = log(fabs(m)) + k
    if la < -0.7:
        v = m * exp(k)
        if v == 0.0:
            return -0.0
        return log1p(-v)
    d = c_sub(1.0, 0.0, m, k)
    if d.m <= 0.0:
        return _NAN
    return log(d.m) + d.k


cdef Modes c_core_point(long l, double xi, double mu, double ratio, int mode) nogil:
    cdef double g = c_gamma(xi, mu)
    cdef double gr = g * ratio
    cdef SRP sg = c_s_pair(l, g)
    cdef SRP eg = c_e_pair(l, g)
    cdef SRP sr_ = c_s_pair(l, gr)
    cdef SRP er = c_e_pair(l, gr)
    cdef Modes out
    cdef SR n_, d_, t, a, b
    cdef SRP sx, ex
    cdef double x, xr, lg, lgr, L2, m2, g2, x2
    cdef SR spg, epg, stg, etg, spr, epr, str_, etr, stx, etx
    cdef SR q11, q12, q13, q14, q21, q22, q23, q24
    cdef SR q31, q32, q33, q34, q41, q42, q43, q44
    cdef SR d0a, d0b, det0, t1, t2, t3, t4, t5, num

    out.tem = 0.0
    out.tek = 0.0
    out.tmm = 0.0
    out.tmk = 0.0
    if mode != 1:
        n_ = c_mul(sg.am, sg.ak, er.am, er.ak)
        d_ = c_mul(eg.am, eg.ak, sr_.am, sr_.ak)
        t = c_div(n_.m, n_.k, d_.m, d_.k)
        out.tem = t.m
        out.tek = t.k
    if mode == 0:
        return out

    x = xi
    xr = xi * ratio
    sx = c_s_pair(l, x)
    ex = c_e_pair(l, xr)

    lg = l / g
    t = c_scale(sg.am, sg.ak, lg)
    spg = c_sub(sg.bm, sg.bk, t.m, t.k)
    t = c_scale(eg.am, eg.ak, lg)
    epg = c_add(eg.bm, eg.bk, t.m, t.k)
    epg.m = -epg.m
    a = c_scale(sg.am, sg.ak, l + 1.0)
    b = c_scale(sg.bm, sg.bk, g)
    stg = c_sub(a.m, a.k, b.m, b.k)
    a = c_scale(eg.am, eg.ak, l + 1.0)
    b = c_scale(eg.bm, eg.bk, g)
    etg = c_add(a.m, a.k, b.m, b.k)

    lgr = l / gr
    t = c_scale(sr_.am, sr_.ak, lgr)
    spr = c_sub(sr_.bm, sr_.bk, t.m, t.k)
    t = c_scale(er.am, er.ak, lgr)
    epr = c_add(er.bm, er.bk, t.m, t.k)
    epr.m = -epr.m
    a = c_scale(sr_.am, sr_.ak, l + 1.0)
    b = c_scale(sr_.bm, sr_.bk, gr)
    str_ = c_sub(a.m, a.k, b.m, b.k)
    a = c_scale(er.am, er.ak, l + 1.0)
    b = c_scale(er.bm, er.bk, gr)
    etr = c_add(a.m, a.k, b.m, b.k)

    a = c_scale(sx.am, sx.ak, l + 1.0)
    b = c_scale(sx.bm, sx.bk, x)
    stx = c_sub(a.m, a.k, b.m, b.k)
    a = c_scale(ex.am, ex.ak, l + 1.0)
    b = c_scale(ex.bm, ex.bk, xr)
    etx = c_add(a.m, a.k, b.m, b.k)

    L2 = l * (l + 1.0)
    m2 = mu * mu
    g2 = g * g
    x2 = x * x

    q11 = c_scale(spg.m, spg.k, g)
    q12 = c_scale(epg.m, epg.k, g)
    q13 = c_scale(sg.am, sg.ak, -m2)
    q14 = c_scale(eg.am, eg.ak, -m2)
    q21 = c_scale(spr.m, spr.k, gr)
    q22 = c_scale(epr.m, epr.k, gr)
    q23 = c_scale(sr_.am, sr_.ak, -m2)
    q24 = c_scale(er.am, er.ak, -m2)
    a = c_mul(sx.am, sx.ak, sg.am, sg.ak)
    q31 = c_scale(a.m, a.k, L2)
    a = c_mul(sx.am, sx.ak, eg.am, eg.ak)
    q32 = c_scale(a.m, a.k, L2)
    a = c_mul(sg.am, sg.ak, stx.m, stx.k)
    a = c_scale(a.m, a.k, g2)
    b = c_mul(sx.am, sx.ak, stg.m, stg.k)
    b = c_scale(b.m, b.k, x2)
    q33 = c_sub(a.m, a.k, b.m, b.k)
    a = c_mul(eg.am, eg.ak, stx.m, stx.k)
    a = c_scale(a.m, a.k, g2)
    b = c_mul(sx.am, sx.ak, etg.m, etg.k)
    b = c_scale(b.m, b.k, x2)
    q34 = c_sub(a.m, a.k, b.m, b.k)
    a = c_mul(ex.am, ex.ak, sr_.am, sr_.ak)
    q41 = c_scale(a.m, a.k, L2)
    a = c_mul(ex.am, ex.ak, er.am, er.ak)
    q42 = c_scale(a.m, a.k, L2)
    a = c_mul(sr_.am, sr_.ak, etx.m, etx.k)
    a = c_scale(a.m, a.k, g2)
    b = c_mul(ex.am, ex.ak, str_.m, str_.k)
    b = c_scale(b.m, b.k, x2)
    q43 = c_sub(a.m, a.k, b.m, b.k)
    a = c_mul(er.am, er.ak, etx.m, etx.k)
    a = c_scale(a.m, a.k, g2)
    b = c_mul(ex.am, ex.ak, etr.m, etr.k)
    b = c_scale(b.m, b.k, x2)
    q44 = c_sub(a.m, a.k, b.m, b.k)

    d0a = c_two(q21.m, q21.k, q23.m, q23.k, q41.m, q41.k, q43.m, q43.k)
    d0b = c_two(q12.m, q12.k, q14.m, q14.k, q32.m, q32.k, q34.m, q34.k)
    det0 = c_mul(d0a.m, d0a.k, d0b.m, d0b.k)

    a = c_two(q11.m, q11.k, q13.m, q13.k, q21.m, q21.k, q23.m, q23.k)
    b = c_two(q32.m, q32.k, q34.m, q34.k, q42.m, q42.k, q44.m, q44.k)
    t1 = c_mul(a.m, a.k, b.m, b.k)
    t1.m = -t1.m
    a = c_two(q11.m, q11.k, q13.m, q13.k, q31.m, q31.k, q33.m, q33.k)
    b = c_two(q22.m, q22.k, q24.m, q24.k, q42.m, q42.k, q44.m, q44.k)
    t2 = c_mul(a.m, a.k, b.m, b.k)
    a = c_two(q11.m, q11.k, q13.m, q13.k, q41.m, q41.k, q43.m, q43.k)
    b = c_two(q22.m, q22.k, q24.m, q24.k, q32.m, q32.k, q34.m, q34.k)
    t3 = c_mul(a.m, a.k, b.m, b.k)
    t3.m = -t3.m
    a = c_two(q21.m, q21.k, q23.m, q23.k, q31.m, q31.k, q33.m, q33.k)
    b = c_two(q12.m, q12.k, q14.m, q14.k, q42.m, q42.k, q44.m, q44.k)
    t4 = c_mul(a.m, a.k, b.m, b.k)
    t4.m = -t4.m
    a = c_two(q31.m, q31.k, q33.m, q33.k, q41.m, q41.k, q43.m, q43.k)
    b = c_two(q12.m, q12.k, q14.m, q14.k, q22.m, q22.k, q24.m, q24.k)
    t5 = c_mul(a.m, a.k, b.m, b.k)
    t5.m = -t5.m

    a = c_add(t1.m, t1.k, t2.m, t2.k)
    b = c_add(t4.m, t4.k, t5.m, t5.k)
    b = c_add(t3.m, t3.k, b.m, b.k)
    num = c_add(a.m, a.k, b.m, b.k)
    t = c_div(-num.m, num.k, det0.m, det0.k)
    out.tmm = t.m
    out.tmk = t.k
    return out


cdef double c_point_value(long l, double xi, double mu, double ratio, int mode) nogil:
    cdef Modes r = c_core_point(l, xi, mu, ratio, mode)
    if mode == 0:
        return c_log1m(r.tem, r.tek)
    if mode == 1:
        return c_log1m(r.tmm, r.tmk)
    return c_log1m(r.tem, r.tek) + c_log1m(r.tmm, r.tmk)


# -- Python-visible surface (mirrors _core_py signatures) ----------------------

def sr_norm(double m, double k):
    cdef SR r = c_norm(m, k)
    return r.m, r.k


def sr_mul(double m1, double k1, double m2, double k2):
    cdef SR r = c_mul(m1, k1, m2, k2)
    return r.m, r.k


def sr_div(double m1, double k1, double m2, double k2):
    cdef SR r = c_div(m1, k1, m2, k2)
    return r.m, r.k


def sr_scale(double m, double k, double c):
    cdef SR r = c_scale(m, k, c)
    return r.m, r.k


def sr_add(double m1, double k1, double m2, double k2):
    cdef SR r = c_add(m1, k1, m2, k2)
    return r.m, r.k


def sr_sub(double m1, double k1, double m2, double k2):
    cdef SR r = c_sub(m1, k1, m2, k2)
    return r.m, r.k


def gamma_arg(double xi, double mu):
    return c_gamma(xi, mu)


def s_pair(long l, double z):
    cdef SRP r = c_s_pair(l, z)
    return r.am, r.ak, r.bm, r.bk


def e_pair(long l, double z):
    cdef SRP r = c_e_pair(l, z)
    return r.am, r.ak, r.bm, r.bk


def family(long l, double z):
    cdef SRP s = c_s_pair(l, z)
    cdef SRP e = c_e_pair(l, z)
    cdef double lz = l / z
    cdef SR t, a, b, sp, ep, st, et
    t = c_scale(s.am, s.ak, lz)
    sp = c_sub(s.bm, s.bk, t.m, t.k)
    t = c_scale(e.am, e.ak, lz)
    ep = c_add(e.bm, e.bk, t.m, t.k)
    ep.m = -ep.m
    a = c_scale(s.am, s.ak, l + 1.0)
    b = c_scale(s.bm, s.bk, z)
    st = c_sub(a.m, a.k, b.m, b.k)
    a = c_scale(e.am, e.ak, l + 1.0)
    b = c_scale(e.bm, e.bk, z)
    et = c_add(a.m, a.k, b.m, b.k)
    return (s.am, s.ak, e.am, e.ak, sp.m, sp.k, ep.m, ep.k,
            st.m, st.k, et.m, et.k)


def rho_te(long l, double xi, double mu, double ratio):
    cdef Modes r = c_core_point(l, xi, mu, ratio, 0)
    return r.tem, r.tek


def rho_tm(long l, double xi, double mu, double ratio):
    cdef Modes r = c_core_point(l, xi, mu, ratio, 1)
    return r.tmm, r.tmk


def log1m_scaled(double m, double k):
    return c_log1m(m, k)


def log_delta_point(long l, double xi, double mu, double ratio, int mode):
    return c_point_value(l, xi, mu, ratio, mode)


def log_delta_nodes(long l, double mu, double ratio, int mode, xs):
    cdef Py_ssize_t n = len(xs)
    cdef Py_ssize_t i
    cdef double* buf = <double*> malloc(2 * n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            buf[i] = xs[i]
        with nogil:
            for i in range(n):
                buf[n + i] = c_point_value(l, buf[i], mu, ratio, mode)
        return [buf[n + i] for i in range(n)]
    finally:
        free(buf)


def rho_tm_massless(long l, double xi, double ratio):
    cdef double x = xi
    cdef double xr = xi * ratio
    cdef SRP s1 = c_s_pair(l, x)
    cdef SRP e1 = c_e_pair(l, x)
    cdef SRP r1 = c_s_pair(l, xr)
    cdef SRP f1 = c_e_pair(l, xr)
    cdef double lx = l / x
    cdef double lxr = l / xr
    cdef SR t, sp, ep, spr, epr, n_, d_
    t = c_scale(s1.am, s1.ak, lx)
    sp = c_sub(s1.bm, s1.bk, t.m, t.k)
    t = c_scale(e1.am, e1.ak, lx)
    ep = c_add(e1.bm, e1.bk, t.m, t.k)
    ep.m = -ep.m
    t = c_scale(r1.am, r1.ak, lxr)
    spr = c_sub(r1.bm, r1.bk, t.m, t.k)
    t = c_scale(f1.am, f1.ak, lxr)
    epr = c_add(f1.bm, f1.bk, t.m, t.k)
    epr.m = -epr.m
    n_ = c_mul(sp.m, sp.k, epr.m, epr.k)
    d_ = c_mul(ep.m, ep.k, spr.m, spr.k)
    t = c_div(n_.m, n_.k, d_.m, d_.k)
    return t.m, t.k
