"""Bit-identity between the compiled kernel and its pure-Python twin.

The two implementations share expression shapes on purpose; every public
kernel entry point must agree to the last bit, so that results never depend
on which backend happened to import.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from procasphere import _core_py as pure

compiled = pytest.importorskip(
    "procasphere._core", reason="compiled kernel not built here")


def test_backend_tags():
    assert pure.BACKEND == "pure"
    assert compiled.BACKEND == "compiled"


# Normalized mantissa/scale pairs as the kernels produce them.
mantissas = st.one_of(
    st.floats(min_value=1.0, max_value=math.e - 1e-12),
    st.floats(min_value=-math.e + 1e-12, max_value=-1.0))
scales = st.integers(min_value=-100000, max_value=100000).map(float)


@settings(max_examples=250, deadline=None)
@given(mantissas, scales, mantissas, scales)
def test_scalar_primitives_bit_identical(m1, k1, m2, k2):
    assert pure.sr_norm(m1 * 2.5, k1) == compiled.sr_norm(m1 * 2.5, k1)
    assert pure.sr_mul(m1, k1, m2, k2) == compiled.sr_mul(m1, k1, m2, k2)
    assert pure.sr_div(m1, k1, m2, k2) == compiled.sr_div(m1, k1, m2, k2)
    assert pure.sr_add(m1, k1, m2, k2) == compiled.sr_add(m1, k1, m2, k2)
    assert pure.sr_sub(m1, k1, m2, k2) == compiled.sr_sub(m1, k1, m2, k2)
    assert pure.sr_scale(m1, k1, m2) == compiled.sr_scale(m1, k1, m2)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e8),
       st.floats(min_value=0.0, max_value=1e8))
def test_gamma_arg_bit_identical(xi, mu):
    assert pure.gamma_arg(xi, mu) == compiled.gamma_arg(xi, mu)


def test_family_bit_identical_on_grid():
    for l in (0, 1, 2, 7, 40, 400, 1000):
        for z in (0.001, 0.03, 0.5, 3.0, 12.0, 29.9, 30.1, 60.0, 300.0,
                  1500.0, 20000.0):
            assert pure.family(l, z) == compiled.family(l, z), (l, z)
            assert pure.s_pair(l, z) == compiled.s_pair(l, z), (l, z)
            assert pure.e_pair(l, z) == compiled.e_pair(l, z), (l, z)


def test_log_delta_bit_identical_on_grid():
    for l in (1, 3, 10, 25):
        for xi in (0.05, 1.0, 8.0):
            for mu in (0.0, 0.7, 3.0):
                for ratio in (1.3, 2.2):
                    for mode in (0, 1, 2):
                        a = pure.log_delta_point(l, xi, mu, ratio, mode)
                        b = compiled.log_delta_point(l, xi, mu, ratio, mode)
                        assert a == b, (l, xi, mu, ratio, mode)


def test_log_delta_nodes_bit_identical():
    xs = [0.01 * (1.35 ** i) for i in range(40)]
    for mode in (0, 1, 2):
        a = pure.log_delta_nodes(4, 0.5, 1.6, mode, xs)
        b = compiled.log_delta_nodes(4, 0.5, 1.6, mode, xs)
        assert list(a) == list(b)
        # Batched evaluation is the pointwise one, not an approximation.
        for x, v in zip(xs, a):
            assert v == pure.log_delta_point(4, x, 0.5, 1.6, mode)


def test_massless_tm_bit_identical():
    for l in (1, 2, 9, 30):
        for xi in (0.02, 0.8, 12.0):
            for ratio in (1.15, 1.9):
                a = pure.rho_tm_massless(l, xi, ratio)
                b = compiled.rho_tm_massless(l, xi, ratio)
                assert a == b
                assert (pure.log1m_scaled(*a) == compiled.log1m_scaled(*b))


def test_rho_routes_bit_identical():
    for l, xi, mu, ratio in ((1, 0.4, 0.0, 1.5), (6, 2.5, 1.2, 1.25),
                             (15, 9.0, 0.3, 2.0)):
        assert pure.rho_te(l, xi, mu, ratio) == compiled.rho_te(l, xi, mu, ratio)
        assert pure.rho_tm(l, xi, mu, ratio) == compiled.rho_tm(l, xi, mu, ratio)


def test_default_backend_is_compiled():
    import os

    if os.environ.get("PROCASPHERE_PURE"):
        pytest.skip("pure backend forced via PROCASPHERE_PURE")
    from procasphere.backend import active_backend, kernel
    assert active_backend() == "compiled"
    assert kernel is compiled
