"""Pure-Python kernel: scaled Riccati-Bessel chains and mode determinants.

Reference twin of the compiled core (``_core.pyx``).  The two modules are
kept in operation-for-operation lockstep so every double they produce is
bit-identical; any edit here must be mirrored there, in order.  The flat
tuple-passing style (no classes, no numpy) is deliberate: it transcribes
one-to-one into C doubles.

Scaled values travel as (mantissa, scale) pairs meaning m * exp(k) with
|m| in [1, e) and k integer-valued, so scale arithmetic is exact.
"""

import math

BACKEND = "pure"

# Frozen bit patterns shared with the compiled twin: renorm factors exp(+-64).
E64I = float.fromhex("0x1.969d47321e4ccp-93")
E64 = float.fromhex("0x1.425982cf597cdp+92")
_E = 2.718281828459045
_LN2 = 0.6931471805599453
_BIG = 1e250
_TINY = 1e-250
# Exponent gap beyond which an addend is below one ulp of the other term.
_ADD_CUTOFF = 120.0


# -- scaled primitives -------------------------------------------------------

def sr_norm(m, k):
    if m == 0.0:
        return 0.0, 0.0
    a = abs(m)
    if a >= _E or a < 1.0:
        j = math.floor(math.log(a))
        if j != 0.0:
            if abs(j) <= 700.0:
                m = m / math.exp(j)
            else:
                h = math.floor(j / 2.0)
                m = m / math.exp(h) / math.exp(j - h)
            k += j
        a = abs(m)
        while a >= _E:
            m /= _E
            k += 1.0
            a = abs(m)
        while a < 1.0:
            m *= _E
            k -= 1.0
            a = abs(m)
    return m, k


def sr_mul(m1, k1, m2, k2):
    if m1 == 0.0 or m2 == 0.0:
        return 0.0, 0.0
    return sr_norm(m1 * m2, k1 + k2)


def sr_div(m1, k1, m2, k2):
    if m1 == 0.0:
        return 0.0, 0.0
    return sr_norm(m1 / m2, k1 - k2)


def sr_scale(m, k, c):
    if m == 0.0 or c == 0.0:
        return 0.0, 0.0
    return sr_norm(m * c, k)


def sr_add(m1, k1, m2, k2):
    if m1 == 0.0:
        return m2, k2
    if m2 == 0.0:
        return m1, k1
    if k1 >= k2:
        d = k1 - k2
        if d > _ADD_CUTOFF:
            return m1, k1
        return sr_norm(m1 + m2 * math.exp(-d), k1)
    d = k2 - k1
    if d > _ADD_CUTOFF:
        return m2, k2
    return sr_norm(m2 + m1 * math.exp(-d), k2)


def sr_sub(m1, k1, m2, k2):
    return sr_add(m1, k1, -m2, k2)


# -- modified Riccati-Bessel chains ------------------------------------------

def gamma_arg(xi, mu):
    """sqrt(xi^2 + mu^2), exact in the single-parameter limits."""
    if mu == 0.0:
        return xi
    if xi == 0.0:
        return mu
    return math.sqrt(xi * xi + mu * mu)


def _s_sum(l, z, m, k):
    # Sum the all-positive power series given the leading term m*exp(k).
    z2 = z * z
    tot = m
    term = m
    n = 0
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
            # Unreachable on the branch domain; NaN propagates to callers,
            # which surface it as a convergence failure.
            return math.nan, 0.0
    return sr_norm(tot, k)


def _s_series_pair(l, z):
    # Leading coefficient prod_{j<=l} z/(2j+1), built once for both orders.
    m = 1.0
    k = 0.0
    for j in range(l):
        m *= z / (2.0 * j + 1.0)
        if m > _BIG:
            m *= E64I
            k += 64.0
        elif m < _TINY:
            m *= E64
            k -= 64.0
    m1 = m * (z / (2.0 * l + 1.0))
    am, ak = _s_sum(l, z, m1, k)
    bm, bk = _s_sum(l - 1, z, m, k)
    return am, ak, bm, bk


def _s_miller(l, z):
    # Downward recurrence from above BOTH the order and the turning point:
    # seed contamination only decays above max(l, z), so the start order
    # must clear the argument as well as the order.
    L = int(max(float(l), z)) + 26
    ym = 0.0
    y = 1.0
    off = 0.0
    out1m = out1k = out0m = out0k = 0.0
    j = L
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
    k0 = math.floor(z)
    m0 = math.exp(z - k0) * (0.5 * (1.0 - math.exp(-2.0 * z)))
    am, ak = sr_norm(out1m / y * m0, k0 + (out1k - off))
    bm, bk = sr_norm(out0m / y * m0, k0 + (out0k - off))
    return am, ak, bm, bk


def s_pair(l, z):
    """(s_l, s_{l-1}) scaled; s_{-1} = cosh z. Requires l >= 0, z > 0."""
    if l == 0:
        if z > 30.0:
            em2 = math.exp(-2.0 * z)
            k0 = math.floor(z)
            f = math.exp(z - k0)
            am, ak = sr_norm(f * (0.5 * (1.0 - em2)), k0)
            bm, bk = sr_norm(f * (0.5 * (1.0 + em2)), k0)
            return am, ak, bm, bk
        am, ak = sr_norm(math.sinh(z), 0.0)
        bm, bk = sr_norm(math.cosh(z), 0.0)
        return am, ak, bm, bk
    if z > 1.2 * l + 20.0 and z > 30.0:
        return _s_miller(l, z)
    return _s_series_pair(l, z)


def e_pair(l, z):
    """(e_l, e_{l-1}) scaled; e_{-1} = e_0 = exp(-z). Upward is the stable
    direction for the decaying solution, so no normalization pass is needed."""
    k = math.floor(-z)
    m = math.exp(-z - k)
    a = m
    b = m
    for j in range(l):
        t = a + (2.0 * j + 1.0) / z * b
        a = b
        b = t
        if b > _BIG:
            a *= E64I
            b *= E64I
            k += 64.0
    am, ak = sr_norm(b, k)
    bm, bk = sr_norm(a, k)
    return am, ak, bm, bk


def family(l, z):
    """(s, e, s', e', s - z s', e - z e') as six scaled pairs, flattened."""
    s1m, s1k, s0m, s0k = s_pair(l, z)
    e1m, e1k, e0m, e0k = e_pair(l, z)
    lz = l / z
    tm_, tk_ = sr_scale(s1m, s1k, lz)
    spm, spk = sr_sub(s0m, s0k, tm_, tk_)
    tm_, tk_ = sr_scale(e1m, e1k, lz)
    epm, epk = sr_add(e0m, e0k, tm_, tk_)
    epm = -epm
    am, ak = sr_scale(s1m, s1k, l + 1.0)
    bm, bk = sr_scale(s0m, s0k, z)
    stm, stk = sr_sub(am, ak, bm, bk)
    am, ak = sr_scale(e1m, e1k, l + 1.0)
    bm, bk = sr_scale(e0m, e0k, z)
    etm, etk = sr_add(am, ak, bm, bk)
    return (s1m, s1k, e1m, e1k, spm, spk, epm, epk, stm, stk, etm, etk)


# -- mode determinants -------------------------------------------------------

def _two(am, ak, bm, bk, cm, ck, dm, dk):
    # 2x2 determinant a*d - b*c of scaled entries.
    pm, pk = sr_mul(am, ak, dm, dk)
    qm, qk = sr_mul(bm, bk, cm, ck)
    return sr_sub(pm, pk, qm, qk)


def log1m_scaled(m, k):
    """ln(1 - rho) for scaled rho; -0.0 when rho underflows, nan when
    rho >= 1 (callers turn that into a domain failure)."""
    if m == 0.0:
        return -0.0
    la = math.log(abs(m)) + k
    if la < -0.7:
        v = m * math.exp(k)
        if v == 0.0:
            return -0.0
        return math.log1p(-v)
    dm, dk = sr_sub(1.0, 0.0, m, k)
    if dm <= 0.0:
        return math.nan
    return math.log(dm) + dk


def _core_point(l, xi, mu, ratio, mode):
    """Scaled rho for the requested modes at one imaginary-frequency node.

    mode: 0 transverse-electric only, 1 transverse-magnetic only, 2 both.
    Returns (te_m, te_k, tm_m, tm_k); unused slots are zero.
    """
    g = gamma_arg(xi, mu)
    gr = g * ratio
    sgm, sgk, sg0m, sg0k = s_pair(l, g)
    egm, egk, eg0m, eg0k = e_pair(l, g)
    srm, srk, sr0m, sr0k = s_pair(l, gr)
    erm, erk, er0m, er0k = e_pair(l, gr)

    te_m = te_k = 0.0
    if mode != 1:
        nm, nk = sr_mul(sgm, sgk, erm, erk)
        dm, dk = sr_mul(egm, egk, srm, srk)
        te_m, te_k = sr_div(nm, nk, dm, dk)
    if mode == 0:
        return te_m, te_k, 0.0, 0.0

    x = xi
    xr = xi * ratio
    sxm, sxk, sx0m, sx0k = s_pair(l, x)
    exm, exk, ex0m, ex0k = e_pair(l, xr)

    # primes and s - z s' / e - z e' combinations at g and g*ratio
    lg = l / g
    tm_, tk_ = sr_scale(sgm, sgk, lg)
    spgm, spgk = sr_sub(sg0m, sg0k, tm_, tk_)
    tm_, tk_ = sr_scale(egm, egk, lg)
    epgm, epgk = sr_add(eg0m, eg0k, tm_, tk_)
    epgm = -epgm
    am, ak = sr_scale(sgm, sgk, l + 1.0)
    bm, bk = sr_scale(sg0m, sg0k, g)
    stgm, stgk = sr_sub(am, ak, bm, bk)
    am, ak = sr_scale(egm, egk, l + 1.0)
    bm, bk = sr_scale(eg0m, eg0k, g)
    etgm, etgk = sr_add(am, ak, bm, bk)

    lgr = l / gr
    tm_, tk_ = sr_scale(srm, srk, lgr)
    sprm, sprk = sr_sub(sr0m, sr0k, tm_, tk_)
    tm_, tk_ = sr_scale(erm, erk, lgr)
    eprm, eprk = sr_add(er0m, er0k, tm_, tk_)
    eprm = -eprm
    am, ak = sr_scale(srm, srk, l + 1.0)
    bm, bk = sr_scale(sr0m, sr0k, gr)
    strm, strk = sr_sub(am, ak, bm, bk)
    am, ak = sr_scale(erm, erk, l + 1.0)
    bm, bk = sr_scale(er0m, er0k, gr)
    etrm, etrk = sr_add(am, ak, bm, bk)

    # s - z s' at x and e - z e' at x*ratio (the only vacuum-side combos used)
    am, ak = sr_scale(sxm, sxk, l + 1.0)
    bm, bk = sr_scale(sx0m, sx0k, x)
    stxm, stxk = sr_sub(am, ak, bm, bk)
    am, ak = sr_scale(exm, exk, l + 1.0)
    bm, bk = sr_scale(ex0m, ex0k, xr)
    etxm, etxk = sr_add(am, ak, bm, bk)

    L2 = l * (l + 1.0)
    m2 = mu * mu
    g2 = g * g
    x2 = x * x

    q11m, q11k = sr_scale(spgm, spgk, g)
    q12m, q12k = sr_scale(epgm, epgk, g)
    q13m, q13k = sr_scale(sgm, sgk, -m2)
    q14m, q14k = sr_scale(egm, egk, -m2)
    q21m, q21k = sr_scale(sprm, sprk, gr)
    q22m, q22k = sr_scale(eprm, eprk, gr)
    q23m, q23k = sr_scale(srm, srk, -m2)
    q24m, q24k = sr_scale(erm, erk, -m2)
    am, ak = sr_mul(sxm, sxk, sgm, sgk)
    q31m, q31k = sr_scale(am, ak, L2)
    am, ak = sr_mul(sxm, sxk, egm, egk)
    q32m, q32k = sr_scale(am, ak, L2)
    am, ak = sr_mul(sgm, sgk, stxm, stxk)
    am, ak = sr_scale(am, ak, g2)
    bm, bk = sr_mul(sxm, sxk, stgm, stgk)
    bm, bk = sr_scale(bm, bk, x2)
    q33m, q33k = sr_sub(am, ak, bm, bk)
    am, ak = sr_mul(egm, egk, stxm, stxk)
    am, ak = sr_scale(am, ak, g2)
    bm, bk = sr_mul(sxm, sxk, etgm, etgk)
    bm, bk = sr_scale(bm, bk, x2)
    q34m, q34k = sr_sub(am, ak, bm, bk)
    am, ak = sr_mul(exm, exk, srm, srk)
    q41m, q41k = sr_scale(am, ak, L2)
    am, ak = sr_mul(exm, exk, erm, erk)
    q42m, q42k = sr_scale(am, ak, L2)
    am, ak = sr_mul(srm, srk, etxm, etxk)
    am, ak = sr_scale(am, ak, g2)
    bm, bk = sr_mul(exm, exk, strm, strk)
    bm, bk = sr_scale(bm, bk, x2)
    q43m, q43k = sr_sub(am, ak, bm, bk)
    am, ak = sr_mul(erm, erk, etxm, etxk)
    am, ak = sr_scale(am, ak, g2)
    bm, bk = sr_mul(exm, exk, etrm, etrk)
    bm, bk = sr_scale(bm, bk, x2)
    q44m, q44k = sr_sub(am, ak, bm, bk)

    # Laplace split by odd/even column pairs: six surviving products, one of
    # which is the decoupled determinant; the other five all sit at the
    # interaction scale, so no large cancellation ever forms.
    d0am, d0ak = _two(q21m, q21k, q23m, q23k, q41m, q41k, q43m, q43k)
    d0bm, d0bk = _two(q12m, q12k, q14m, q14k, q32m, q32k, q34m, q34k)
    det0m, det0k = sr_mul(d0am, d0ak, d0bm, d0bk)

    am, ak = _two(q11m, q11k, q13m, q13k, q21m, q21k, q23m, q23k)
    bm, bk = _two(q32m, q32k, q34m, q34k, q42m, q42k, q44m, q44k)
    t1m, t1k = sr_mul(am, ak, bm, bk)
    t1m = -t1m
    am, ak = _two(q11m, q11k, q13m, q13k, q31m, q31k, q33m, q33k)
    bm, bk = _two(q22m, q22k, q24m, q24k, q42m, q42k, q44m, q44k)
    t2m, t2k = sr_mul(am, ak, bm, bk)
    am, ak = _two(q11m, q11k, q13m, q13k, q41m, q41k, q43m, q43k)
    bm, bk = _two(q22m, q22k, q24m, q24k, q32m, q32k, q34m, q34k)
    t3m, t3k = sr_mul(am, ak, bm, bk)
    t3m = -t3m
    am, ak = _two(q21m, q21k, q23m, q23k, q31m, q31k, q33m, q33k)
    bm, bk = _two(q12m, q12k, q14m, q14k, q42m, q42k, q44m, q44k)
    t4m, t4k = sr_mul(am, ak, bm, bk)
    t4m = -t4m
    am, ak = _two(q31m, q31k, q33m, q33k, q41m, q41k, q43m, q43k)
    bm, bk = _two(q12m, q12k, q14m, q14k, q22m, q22k, q24m, q24k)
    t5m, t5k = sr_mul(am, ak, bm, bk)
    t5m = -t5m

    am, ak = sr_add(t1m, t1k, t2m, t2k)
    bm, bk = sr_add(t4m, t4k, t5m, t5k)
    bm, bk = sr_add(t3m, t3k, bm, bk)
    num_m, num_k = sr_add(am, ak, bm, bk)
    tm_m, tm_k = sr_div(-num_m, num_k, det0m, det0k)
    return te_m, te_k, tm_m, tm_k


def rho_te(l, xi, mu, ratio):
    m1, k1, _, _ = _core_point(l, xi, mu, ratio, 0)
    return m1, k1


def rho_tm(l, xi, mu, ratio):
    _, _, m2, k2 = _core_point(l, xi, mu, ratio, 1)
    return m2, k2


def log_delta_point(l, xi, mu, ratio, mode):
    te_m, te_k, tm_m, tm_k = _core_point(l, xi, mu, ratio, mode)
    if mode == 0:
        return log1m_scaled(te_m, te_k)
    if mode == 1:
        return log1m_scaled(tm_m, tm_k)
    return log1m_scaled(te_m, te_k) + log1m_scaled(tm_m, tm_k)


def log_delta_nodes(l, mu, ratio, mode, xs):
    out = []
    for x in xs:
        out.append(log_delta_point(l, x, mu, ratio, mode))
    return out


def rho_tm_massless(l, xi, ratio):
    """Conducting-boundary ratio s'(x)e'(xr)/(e'(x)s'(xr)), scaled."""
    x = xi
    xr = xi * ratio
    s1m, s1k, s0m, s0k = s_pair(l, x)
    e1m, e1k, e0m, e0k = e_pair(l, x)
    r1m, r1k, r0m, r0k = s_pair(l, xr)
    f1m, f1k, f0m, f0k = e_pair(l, xr)
    lx = l / x
    tm_, tk_ = sr_scale(s1m, s1k, lx)
    spm, spk = sr_sub(s0m, s0k, tm_, tk_)
    tm_, tk_ = sr_scale(e1m, e1k, lx)
    epm, epk = sr_add(e0m, e0k, tm_, tk_)
    epm = -epm
    lxr = l / xr
    tm_, tk_ = sr_scale(r1m, r1k, lxr)
    sprm, sprk = sr_sub(r0m, r0k, tm_, tk_)
    tm_, tk_ = sr_scale(f1m, f1k, lxr)
    eprm, eprk = sr_add(f0m, f0k, tm_, tk_)
    eprm = -eprm
    nm, nk = sr_mul(spm, spk, eprm, eprk)
    dm, dk = sr_mul(epm, epk, sprm, sprk)
    return sr_div(nm, nk, dm, dk)
