"""Modified Riccati-Bessel functions of imaginary argument, overflow-free.

The growing solution s_l and decaying solution e_l (with s_l e_l' - s_l' e_l
= -1) are returned as :class:`ScaledReal` so that arguments up to tens of
thousands stay representable. Three evaluation strategies are used under the
hood: the all-positive power series at small-to-moderate argument, a
downward recurrence normalized against s_0 = sinh z above the switch point,
and the always-stable upward recurrence for e_l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .backend import kernel
from .scaledrep import ScaledReal


def _check_order(l: int) -> None:
    if not isinstance(l, int) or isinstance(l, bool) or l < 0:
        raise ValueError(f"order must be a nonnegative integer, got {l!r}")


def _check_argument(z: float) -> None:
    if not (isinstance(z, (int, float)) and math.isfinite(z)) or z <= 0.0:
        raise ValueError(f"argument must be a finite positive real, got {z!r}")


@dataclass(frozen=True)
class RBFamily:
    """One order's worth of values at a fixed argument.

    s_tilde = s - z s' and e_tilde = e - z e' are the combinations that
    enter the mode determinants.
    """

    l: int
    z: float
    s: ScaledReal
    e: ScaledReal
    s_prime: ScaledReal
    e_prime: ScaledReal
    s_tilde: ScaledReal
    e_tilde: ScaledReal


def eval_s(l: int, z: float) -> ScaledReal:
    """Growing solution s_l(z); s_0 = sinh z."""
    _check_order(l)
    _check_argument(z)
    m, k, _, _ = kernel.s_pair(l, float(z))
    return ScaledReal(m, k)


def eval_e(l: int, z: float) -> ScaledReal:
    """Decaying solution e_l(z); e_0 = exp(-z)."""
    _check_order(l)
    _check_argument(z)
    m, k, _, _ = kernel.e_pair(l, float(z))
    return ScaledReal(m, k)


def eval_family(l: int, z: float) -> RBFamily:
    """s, e, their derivatives, and the tilde combinations at one point."""
    _check_order(l)
    _check_argument(z)
    (sm, sk, em, ek, spm, spk, epm, epk,
     stm, stk, etm, etk) = kernel.family(l, float(z))
    return RBFamily(
        l=l,
        z=float(z),
        s=ScaledReal(sm, sk),
        e=ScaledReal(em, ek),
        s_prime=ScaledReal(spm, spk),
        e_prime=ScaledReal(epm, epk),
        s_tilde=ScaledReal(stm, stk),
        e_tilde=ScaledReal(etm, etk),
    )


def eval_batch(l_max: int, z: float) -> list[RBFamily]:
    """Families for every order 0..l_max at a fixed argument."""
    _check_order(l_max)
    _check_argument(z)
    return [eval_family(l, z) for l in range(l_max + 1)]
