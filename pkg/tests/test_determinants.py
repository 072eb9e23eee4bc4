"""Tests of the TE and TM mode factors and their determinant routes."""

import math

import pytest

from procasphere.determinants import (
    DivergenceError,
    SpectralPoint,
    build_q_blocks,
    det_q0_expansion,
    det_q0_factored,
    det_q_direct,
    det_q_expansion,
    expansion_coefficients,
    log_delta_te,
    log_delta_tm,
    log_delta_tm_massless,
    reference_expansion_coefficients,
)

# A broad but quick grid reused by several tests below.
GRID = [
    SpectralPoint(l=l, xi_hat=xi, mu=mu, ratio=ratio)
    for l in (1, 2, 5, 12, 40)
    for xi in (1e-3, 0.3, 2.0, 15.0)
    for mu in (0.0, 0.4, 3.0)
    for ratio in (1.1, 1.7, 3.0)
]


def test_spectral_point_validation():
    with pytest.raises(ValueError):
        SpectralPoint(l=0, xi_hat=1.0, mu=0.0, ratio=1.5)
    with pytest.raises(ValueError):
        SpectralPoint(l=True, xi_hat=1.0, mu=0.0, ratio=1.5)
    with pytest.raises(ValueError):
        SpectralPoint(l=1, xi_hat=-1.0, mu=0.0, ratio=1.5)
    with pytest.raises(ValueError):
        SpectralPoint(l=1, xi_hat=1.0, mu=-0.1, ratio=1.5)
    with pytest.raises(ValueError):
        SpectralPoint(l=1, xi_hat=1.0, mu=0.0, ratio=1.0)
    with pytest.raises(ValueError):
        SpectralPoint(l=1, xi_hat=math.inf, mu=0.0, ratio=1.5)


def test_gamma_hat():
    p = SpectralPoint(l=1, xi_hat=3.0, mu=4.0, ratio=1.5)
    assert p.gamma_hat == pytest.approx(5.0, rel=1e-15)
    q = SpectralPoint(l=1, xi_hat=2.0, mu=0.0, ratio=1.5)
    assert q.gamma_hat == 2.0  # massless case must be exact, not a sqrt trip


def test_block_structure_massless():
    # With mu = 0 the mass rows vanish identically and gamma == xi collapses
    # the bracket rows to x^3 [[0, -1], [r, 0]] by the Wronskian.
    p = SpectralPoint(l=2, xi_hat=1.3, mu=0.0, ratio=1.4)
    q = build_q_blocks(p)
    for row in q.w2:
        for entry in row:
            assert entry.is_zero
    x3 = p.xi_hat ** 3
    assert q.w4[0][0].is_zero
    assert q.w4[0][1].to_float() == pytest.approx(-x3, rel=1e-13)
    assert q.w4[1][0].to_float() == pytest.approx(x3 * p.ratio, rel=1e-13)
    assert q.w4[1][1].is_zero


def test_as_matrix_layout():
    p = SpectralPoint(l=1, xi_hat=0.8, mu=0.5, ratio=1.6)
    q = build_q_blocks(p)
    m = q.as_matrix()
    assert len(m) == 4 and all(len(row) == 4 for row in m)
    assert m[0][0] is q.w1[0][0]
    assert m[0][2] is q.w2[0][0]
    assert m[2][0] is q.w3[0][0]
    assert m[3][3] is q.w4[1][1]


def test_expansion_matches_direct_determinant():
    """Two independent routes to det Q agree to 1e-9 everywhere."""
    worst = 0.0
    for p in GRID:
        d_exp = det_q_expansion(p)
        d_dir = det_q_direct(p)
        rel = abs((d_exp / d_dir).to_float() - 1.0)
        worst = max(worst, rel)
    assert worst <= 1e-9


def test_reference_expansion_matches_factored():
    worst = 0.0
    for p in GRID:
        d_exp = det_q0_expansion(p)
        d_fac = det_q0_factored(p)
        rel = abs((d_exp / d_fac).to_float() - 1.0)
        worst = max(worst, rel)
    assert worst <= 1e-10


def test_mass_order_coefficients_positive():
    # The whole point of the expansion route: every coefficient is a sum of
    # positive pieces, so the evaluation is cancellation-free.
    for p in GRID:
        for orders in (expansion_coefficients(p),
                       reference_expansion_coefficients(p)):
            assert orders.order0.sign() == 1.0, p
            assert orders.order1.sign() == 1.0, p
            assert orders.order2.sign() == 1.0, p


def test_massless_expansion_orders_collapse():
    # At mu = 0 the c1 weight vanishes, so order0 alone is the determinant.
    p = SpectralPoint(l=3, xi_hat=1.0, mu=0.0, ratio=1.5)
    orders = expansion_coefficients(p)
    assert (det_q_expansion(p) / orders.order0).to_float() == pytest.approx(
        1.0, rel=1e-15)


def test_log_delta_bounds_and_sign():
    # 0 < det Q / det Q0 < 1 always; the log factor is finite and negative.
    for p in GRID:
        if p.xi_hat <= 0.0:
            continue
        for f in (log_delta_te, log_delta_tm):
            v = f(p)
            assert math.isfinite(v)
            assert v < 0.0, (f.__name__, p)


def test_log_delta_monotone_in_ratio():
    # Wider gap, weaker interaction: |ln Delta| decreases as ratio grows.
    for l, xi, mu in ((1, 0.5, 0.0), (4, 2.0, 1.0)):
        prev_te = prev_tm = None
        for ratio in (1.1, 1.3, 1.7, 2.5, 4.0):
            p = SpectralPoint(l=l, xi_hat=xi, mu=mu, ratio=ratio)
            te, tm = log_delta_te(p), log_delta_tm(p)
            if prev_te is not None:
                assert abs(te) < abs(prev_te)
                assert abs(tm) < abs(prev_tm)
            prev_te, prev_tm = te, tm


def test_log_delta_decays_with_l_and_xi():
    base = dict(mu=0.3, ratio=1.5)
    seq_l = [abs(log_delta_tm(SpectralPoint(l=l, xi_hat=1.0, **base)))
             for l in (1, 3, 8, 20)]
    assert all(b < a for a, b in zip(seq_l, seq_l[1:]))
    seq_xi = [abs(log_delta_te(SpectralPoint(l=2, xi_hat=xi, **base)))
              for xi in (0.5, 2.0, 8.0, 30.0)]
    assert all(b < a for a, b in zip(seq_xi, seq_xi[1:]))


def test_massless_tm_reduction():
    """The general TM route at mu = 0 lands on the closed-form code path."""
    worst = 0.0
    for l in (1, 2, 5, 12, 30):
        for xi in (0.05, 0.7, 3.0, 20.0):
            for ratio in (1.2, 1.8, 3.5):
                a = log_delta_tm(SpectralPoint(l=l, xi_hat=xi, mu=0.0,
                                               ratio=ratio))
                b = log_delta_tm_massless(l, xi, ratio)
                worst = max(worst, abs(a - b) / abs(b))
    assert worst <= 1e-10


def test_te_zero_frequency_massive_is_finite():
    # A massive field still propagates at xi = 0 through gamma = mu.
    p = SpectralPoint(l=1, xi_hat=0.0, mu=1.0, ratio=1.5)
    v = log_delta_te(p)
    assert math.isfinite(v) and v < 0.0


def test_te_zero_frequency_massless_rejected():
    with pytest.raises(ValueError):
        log_delta_te(SpectralPoint(l=1, xi_hat=0.0, mu=0.0, ratio=1.5))


def test_tm_zero_frequency_rejected():
    p = SpectralPoint(l=1, xi_hat=0.0, mu=1.0, ratio=1.5)
    with pytest.raises(ValueError):
        log_delta_tm(p)
    with pytest.raises(ValueError):
        det_q_expansion(p)
    with pytest.raises(ValueError):
        build_q_blocks(p)


def test_massless_tm_validation_and_near_touching():
    with pytest.raises(ValueError):
        log_delta_tm_massless(0, 1.0, 1.5)
    with pytest.raises(ValueError):
        log_delta_tm_massless(1, 0.0, 1.5)
    with pytest.raises(ValueError):
        log_delta_tm_massless(1, 1.0, 1.0)
    # Shells a few ulps apart: the mode ratio is within rounding of 1, yet
    # the log factor must come back finite and strongly negative, never NaN.
    v = log_delta_tm_massless(1, 1e-8, 1.0 + 1e-15)
    assert math.isfinite(v)
    assert v < -25.0


def test_divergence_error_is_arithmetic_error():
    assert issubclass(DivergenceError, ArithmeticError)
