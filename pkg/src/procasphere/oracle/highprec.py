"""Arbitrary-precision reference routes, deliberately independent of the
fast kernel.

Everything here is recomputed from scratch with mpmath: the decaying
solution by its exact terminating sum, the growing one by a positive power
series or a guarded two-exponential form, determinants both by the
column-pair split and by a plain 4x4 cofactor expansion, and the frequency
integral by tanh-sinh quadrature at two precisions. Disagreement between
internal routes raises OracleError rather than returning a number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import extradps, mp, mpf, workdps


class OracleError(RuntimeError):
    """Internal high-precision routes failed to agree."""


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision for the reference routes.

    decimal_digits is the accuracy target of returned values; internal
    passes run with guard digits on top. max_series_terms caps the growing
    series so a bad argument fails loudly instead of spinning.
    """

    decimal_digits: int = 40
    max_series_terms: int = 200000

    def __post_init__(self):
        if (isinstance(self.decimal_digits, bool)
                or not isinstance(self.decimal_digits, int)
                or self.decimal_digits < 40):
            raise ValueError(
                f"decimal_digits must be an integer >= 40, "
                f"got {self.decimal_digits!r}")
        if (isinstance(self.max_series_terms, bool)
                or not isinstance(self.max_series_terms, int)
                or self.max_series_terms < 1000):
            raise ValueError(
                f"max_series_terms must be an integer >= 1000, "
                f"got {self.max_series_terms!r}")


def _check_order(l, minimum=0):
    if isinstance(l, bool) or not isinstance(l, int) or l < minimum:
        raise ValueError(f"order must be an integer >= {minimum}, got {l!r}")


def _check_positive(name, v):
    if not (math.isfinite(v) and v > 0.0):
        raise ValueError(f"{name} must be finite and > 0, got {v!r}")


# -- scalar building blocks (ambient precision) ------------------------------

def _mp_e_ambient(l, zz):
    # Exact terminating sum: e_l(z) = exp(-z) * sum_k c_k with
    # c_0 = 1, c_{k+1} = c_k (l+k+1)(l-k) / ((k+1) 2z).
    c = mpf(1)
    tot = mpf(1)
    for k in range(l):
        c = c * (l + k + 1) * (l - k) / ((k + 1) * 2 * zz)
        tot += c
    return mp.exp(-zz) * tot


def _mp_s_ambient(l, zz, max_terms):
    if zz <= max(l, 30):
        # All-positive power series: no cancellation at any precision.
        t = zz ** (l + 1)
        for j in range(l):
            t /= 2 * j + 3
        tot = t
        eps = mpf(10) ** (-(mp.dps + 5))
        n = 0
        while True:
            n += 1
            if n > max_terms:
                raise OracleError(
                    f"growing series did not converge for l={l}, z={zz}")
            t = t * zz * zz / (2 * n * (2 * n + 2 * l + 1))
            tot += t
            if t <= tot * eps:
                return tot
    # Two-exponential form; the alternating sum inside loses roughly
    # l^2/(2z) * log10(e) digits at its peak term, guard for that.
    zf = float(zz) if zz < mpf("1e300") else 1e300
    kstar = l * l / (2.0 * zf) + 2.0
    with extradps(20 + int(0.9 * kstar)):
        c = mpf(1)
        alt = mpf(1)
        pos = mpf(1)
        sign = 1
        for k in range(l):
            c = c * (l + k + 1) * (l - k) / ((k + 1) * 2 * zz)
            pos += c
            sign = -sign
            alt += sign * c
        parity = -1 if l % 2 else 1
        val = (mp.exp(zz) * alt - parity * mp.exp(-zz) * pos) / 2
    return val


def _mp_family_ambient(l, zz, max_terms):
    # (s, e, s', e', s - z s', e - z e') at the ambient precision.
    s = _mp_s_ambient(l, zz, max_terms)
    e = _mp_e_ambient(l, zz)
    if l == 0:
        sm1 = mp.cosh(zz)
        em1 = mp.exp(-zz)
    else:
        sm1 = _mp_s_ambient(l - 1, zz, max_terms)
        em1 = _mp_e_ambient(l - 1, zz)
    sp = sm1 - l * s / zz
    ep = -em1 - l * e / zz
    st = s - zz * sp
    et = e - zz * ep
    return s, e, sp, ep, st, et


def _mp_log1m(rho):
    # log(1 - rho) with the subtraction done above the cancellation depth.
    if rho == 0:
        return mpf(0)
    if rho >= 1:
        raise OracleError(f"mode ratio {mp.nstr(rho, 8)} >= 1")
    a = abs(rho)
    if a < mpf(10) ** (-(mp.dps + 10)):
        # |log(1-rho) + rho| <= rho^2, far below working precision.
        return -rho
    gap = max(0, -int(mp.floor(mp.log10(a))))
    with extradps(gap + 10):
        val = mp.log(1 - rho)
    return val


# -- public scalar oracles ----------------------------------------------------

def mp_s(l, z, cfg: PrecisionConfig | None = None):
    """Growing Riccati-Bessel value as an mpmath float."""
    cfg = cfg or PrecisionConfig()
    _check_order(l)
    with workdps(cfg.decimal_digits + 15):
        zz = mpf(z)
        if not zz > 0:
            raise ValueError(f"argument must be > 0, got {z!r}")
        return _mp_s_ambient(l, zz, cfg.max_series_terms)


def mp_e(l, z, cfg: PrecisionConfig | None = None):
    """Decaying Riccati-Bessel value as an mpmath float."""
    cfg = cfg or PrecisionConfig()
    _check_order(l)
    with workdps(cfg.decimal_digits + 15):
        zz = mpf(z)
        if not zz > 0:
            raise ValueError(f"argument must be > 0, got {z!r}")
        return _mp_e_ambient(l, zz)


def mp_family(l, z, cfg: PrecisionConfig | None = None):
    """(s, e, s', e', s - z s', e - z e') as mpmath floats."""
    cfg = cfg or PrecisionConfig()
    _check_order(l)
    with workdps(cfg.decimal_digits + 15):
        zz = mpf(z)
        if not zz > 0:
            raise ValueError(f"argument must be > 0, got {z!r}")
        return _mp_family_ambient(l, zz, cfg.max_series_terms)


def oracle_s(l, z, cfg: PrecisionConfig | None = None) -> str:
    """Growing value as a decimal string at the configured digit count."""
    cfg = cfg or PrecisionConfig()
    return mp.nstr(mp_s(l, z, cfg), cfg.decimal_digits)


def oracle_e(l, z, cfg: PrecisionConfig | None = None) -> str:
    """Decaying value as a decimal string at the configured digit count."""
    cfg = cfg or PrecisionConfig()
    return mp.nstr(mp_e(l, z, cfg), cfg.decimal_digits)


# -- mode ratios and determinants ---------------------------------------------

def _rho_te_ambient(l, x, m, r, max_terms):
    g = x if m == 0 else mp.sqrt(x * x + m * m)
    gr_ = g * r
    sg = _mp_s_ambient(l, g, max_terms)
    eg = _mp_e_ambient(l, g)
    sgr = _mp_s_ambient(l, gr_, max_terms)
    egr = _mp_e_ambient(l, gr_)
    return (sg * egr) / (eg * sgr)


def _q_entries(l, x, m, r, max_terms):
    # The 4x4 boundary matrix, rows: field matching at each shell, then
    # potential matching at each shell.
    g = x if m == 0 else mp.sqrt(x * x + m * m)
    gr_ = g * r
    xr_ = x * r
    sg, eg, spg, epg, stg, etg = _mp_family_ambient(l, g, max_terms)
    sr_, er_, spr, epr, str_, etr = _mp_family_ambient(l, gr_, max_terms)
    sx, _ex_unused, _spx, _epx, stx, _etx_unused = _mp_family_ambient(
        l, x, max_terms)
    _sxr, exr, _spxr, _epxr, _stxr, etx = _mp_family_ambient(
        l, xr_, max_terms)
    m2 = m * m
    g2 = g * g
    x2 = x * x
    L2 = l * (l + 1)
    q = [[None] * 4 for _ in range(4)]
    q[0][0] = g * spg
    q[0][1] = g * epg
    q[0][2] = -m2 * sg
    q[0][3] = -m2 * eg
    q[1][0] = gr_ * spr
    q[1][1] = gr_ * epr
    q[1][2] = -m2 * sr_
    q[1][3] = -m2 * er_
    q[2][0] = L2 * sx * sg
    q[2][1] = L2 * sx * eg
    q[2][2] = g2 * sg * stx - x2 * sx * stg
    q[2][3] = g2 * eg * stx - x2 * sx * etg
    q[3][0] = L2 * exr * sr_
    q[3][1] = L2 * exr * er_
    q[3][2] = g2 * sr_ * etx - x2 * exr * str_
    q[3][3] = g2 * er_ * etx - x2 * exr * etr
    return q


def _rho_tm_from_q(q):
    # Column-pair split of the determinant: the decoupled product plus five
    # interaction-scale terms, each free of large cancellation.
    d0a = q[1][0] * q[3][2] - q[1][2] * q[3][0]
    d0b = q[0][1] * q[2][3] - q[0][3] * q[2][1]
    det0 = d0a * d0b
    t1 = -(q[0][0] * q[1][2] - q[0][2] * q[1][0]) * (
        q[2][1] * q[3][3] - q[2][3] * q[3][1])
    t2 = (q[0][0] * q[2][2] - q[0][2] * q[2][0]) * (
        q[1][1] * q[3][3] - q[1][3] * q[3][1])
    t3 = -(q[0][0] * q[3][2] - q[0][2] * q[3][0]) * (
        q[1][1] * q[2][3] - q[1][3] * q[2][1])
    t4 = -(q[1][0] * q[2][2] - q[1][2] * q[2][0]) * (
        q[0][1] * q[3][3] - q[0][3] * q[3][1])
    t5 = -(q[2][0] * q[3][2] - q[2][2] * q[3][0]) * (
        q[0][1] * q[1][3] - q[0][3] * q[1][1])
    num = (t1 + t2) + (t3 + (t4 + t5))
    return -num / det0, det0


def _rho_tm_ambient(l, x, m, r, max_terms):
    rho, _det0 = _rho_tm_from_q(_q_entries(l, x, m, r, max_terms))
    return rho


def _det4(q):
    def det3(a):
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))

    tot = mpf(0)
    sign = 1
    for col in range(4):
        minor = [[q[row][c] for c in range(4) if c != col]
                 for row in (1, 2, 3)]
        tot += sign * q[0][col] * det3(minor)
        sign = -sign
    return tot


def _validate_point(l, xi, mu, ratio, zero_xi_ok=False):
    _check_order(l, minimum=1)
    for name, v in (("xi", xi), ("mu", mu), ("ratio", ratio)):
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")
    if mu < 0.0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    if zero_xi_ok and xi == 0.0:
        # TE with a massive field: the factor only sees gamma = mu > 0.
        if mu <= 0.0:
            raise ValueError("xi = 0 needs mu > 0")
    else:
        _check_positive("xi", xi)
    if ratio <= 1.0:
        raise ValueError(f"ratio must be > 1, got {ratio!r}")


def oracle_log_delta(l, xi, mu, ratio, mode, cfg: PrecisionConfig | None = None):
    """ln of the TE or TM mode factor, with an internal route cross-check.

    TE is evaluated twice at different precisions; TM is evaluated by the
    split form and by a plain cofactor determinant run with enough guard
    digits to survive the det/det cancellation. Returns an mpmath float.
    """
    cfg = cfg or PrecisionConfig()
    if mode not in ("te", "tm"):
        raise ValueError(f"mode must be 'te' or 'tm', got {mode!r}")
    _validate_point(l, xi, mu, ratio, zero_xi_ok=(mode == "te"))
    digits = cfg.decimal_digits
    tol = mpf(10) ** (-digits)
    if mode == "te":
        vals = []
        for dps in (digits + 15, digits + 30):
            with workdps(dps):
                rho = _rho_te_ambient(l, mpf(xi), mpf(mu), mpf(ratio),
                                      cfg.max_series_terms)
                vals.append(_mp_log1m(rho))
        v1, v2 = vals
        if abs(v1 - v2) > abs(v2) * tol:
            raise OracleError(
                f"TE precisions disagree at l={l}, xi={xi}, mu={mu}, "
                f"ratio={ratio}")
        return v1
    with workdps(digits + 15):
        rho = _rho_tm_ambient(l, mpf(xi), mpf(mu), mpf(ratio),
                              cfg.max_series_terms)
        primary = _mp_log1m(rho)
        # Guard digits for the direct route: the full determinant agrees
        # with the decoupled one through the first -log10|rho| digits.
        cancel = 0
        if rho != 0 and abs(rho) < 1:
            cancel = max(0, -int(mp.floor(mp.log10(abs(rho)))))
    with workdps(digits + 25 + cancel):
        q = _q_entries(l, mpf(xi), mpf(mu), mpf(ratio), cfg.max_series_terms)
        det_full = _det4(q)
        d0a = q[1][0] * q[3][2] - q[1][2] * q[3][0]
        d0b = q[0][1] * q[2][3] - q[0][3] * q[2][1]
        delta = det_full / (d0a * d0b)
        if delta <= 0:
            raise OracleError(
                f"direct determinant ratio not positive at l={l}, xi={xi}, "
                f"mu={mu}, ratio={ratio}")
        direct = mp.log(delta)
    if abs(primary - direct) > abs(primary) * tol:
        raise OracleError(
            f"TM routes disagree at l={l}, xi={xi}, mu={mu}, ratio={ratio}: "
            f"{mp.nstr(primary, 25)} vs {mp.nstr(direct, 25)}")
    return primary


def oracle_l_term(l, mu, ratio, mode, cfg: PrecisionConfig | None = None):
    """(2l+1) times the frequency integral of one partial wave's log factor.

    tanh-sinh quadrature run at two precisions; they must agree to the
    configured digits. Returns an mpmath float.
    """
    cfg = cfg or PrecisionConfig()
    _check_order(l, minimum=1)
    if mode not in ("te", "tm"):
        raise ValueError(f"mode must be 'te' or 'tm', got {mode!r}")
    if not (math.isfinite(mu) and mu >= 0.0):
        raise ValueError(f"mu must be finite and >= 0, got {mu!r}")
    if not (math.isfinite(ratio) and ratio > 1.0):
        raise ValueError(f"ratio must be > 1, got {ratio!r}")

    def run(dps):
        with workdps(dps):
            m = mpf(mu)
            r = mpf(ratio)

            def f(x):
                if mode == "te":
                    rho = _rho_te_ambient(l, x, m, r, cfg.max_series_terms)
                else:
                    rho = _rho_tm_ambient(l, x, m, r, cfg.max_series_terms)
                return _mp_log1m(rho)

            d = (45 + 2 * l * mp.log(r)) / (2 * (r - 1))
            x_edge = mp.sqrt(d * (d + 2 * m))
            val = mp.quad(f, [0, x_edge / 64, x_edge / 8, x_edge,
                              8 * x_edge, mp.inf])
            return (2 * l + 1) * val

    v1 = run(cfg.decimal_digits)
    v2 = run(cfg.decimal_digits + 10)
    if abs(v1 - v2) > abs(v2) * mpf(10) ** (-(cfg.decimal_digits - 8)):
        raise OracleError(
            f"quadrature precisions disagree at l={l}, mu={mu}, "
            f"ratio={ratio}, mode={mode}")
    return v2
