"""Partial-wave sum over the imaginary-frequency spectrum.

The interaction energy between the shells, in units of hbar*c/(2*pi*a1),
is the sum over partial waves l >= 1 of (2l+1) times the integral over the
dimensionless imaginary frequency of the combined TE and TM log factors.
Each log factor is strictly negative and decays like
exp(-2*gamma*(ratio-1)), which drives both the quadrature framing and the
tail bounds used here.

Everything is deterministic by construction: panels are refined by a
first-maximum scan, sums are accumulated in a fixed order, and the threaded
path consumes partial waves strictly in ascending order, so results are
bit-identical for any thread count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from .backend import kernel

_MODE_CODE = {"te": 0, "tm": 1, "total": 2}

# 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
# Generated once at 30 digits via the Laurie recursion and frozen; the test
# suite pins them through polynomial exactness up to degree 22.
_XGK = (
    0.99145537112081264,
    0.94910791234275852,
    0.86486442335976907,
    0.74153118559939444,
    0.58608723546769113,
    0.40584515137739717,
    0.20778495500789847,
    0.0,
)
_WGK = (
    0.022935322010529225,
    0.063092092629978553,
    0.10479001032225018,
    0.14065325971552592,
    0.1690047266392679,
    0.19035057806478541,
    0.20443294007529889,
    0.20948214108472783,
)
_WG = (
    0.12948496616886969,
    0.27970539148927667,
    0.38183005050511894,
    0.41795918367346939,
)


class ConvergenceError(RuntimeError):
    """Quadrature or partial-wave sum could not reach the requested tolerance.

    Carries the partial state so callers can report how far the run got.
    """

    def __init__(self, message: str, *, partial_sum: float | None = None,
                 last_term: float | None = None, l_reached: int | None = None,
                 evals: int | None = None):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.last_term = last_term
        self.l_reached = l_reached
        self.evals = evals


@dataclass(frozen=True)
class ProblemSpec:
    """Dimensionless statement of one two-shell problem.

    ratio is the outer over inner radius (> 1), mu the field mass scaled by
    the inner radius (>= 0). rel_tol bounds the relative error of the summed
    energy; l_cap is a hard ceiling on the partial-wave order; mode selects
    "te", "tm" or "total".
    """

    ratio: float
    mu: float = 0.0
    rel_tol: float = 1e-8
    l_cap: int = 5000
    mode: str = "total"

    def __post_init__(self):
        object.__setattr__(self, "ratio", float(self.ratio))
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "rel_tol", float(self.rel_tol))
        object.__setattr__(self, "mode", str(self.mode).lower())
        if isinstance(self.l_cap, bool) or not isinstance(self.l_cap, int):
            raise ValueError(f"l_cap must be an integer, got {self.l_cap!r}")
        if not (math.isfinite(self.ratio) and self.ratio > 1.0):
            raise ValueError(f"ratio must be finite and > 1, got {self.ratio!r}")
        if not (math.isfinite(self.mu) and self.mu >= 0.0):
            raise ValueError(f"mu must be finite and >= 0, got {self.mu!r}")
        if not (0.0 < self.rel_tol <= 1e-2):
            raise ValueError(f"rel_tol must lie in (0, 1e-2], got {self.rel_tol!r}")
        if self.l_cap < 1:
            raise ValueError(f"l_cap must be >= 1, got {self.l_cap!r}")
        if self.mode not in _MODE_CODE:
            raise ValueError(
                f"mode must be one of {sorted(_MODE_CODE)}, got {self.mode!r}")


@dataclass(frozen=True)
class EnergyResult:
    """Converged energy plus the bookkeeping needed to audit it.

    value is E / E0 with E0 = hbar*c/(2*pi*a1). abs_error_estimate combines
    the per-wave quadrature errors with a geometric bound on the dropped
    partial-wave tail. per_l_terms lists every (l, term) that entered the
    sum, in order.
    """

    value: float
    abs_error_estimate: float
    l_used: int
    integrand_evals: int
    per_l_terms: tuple[tuple[int, float], ...]


def _neumaier(values):
    # Compensated sum. The iteration order is part of the contract: callers
    # feed a deterministically ordered sequence.
    s = 0.0
    c = 0.0
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def _panel_nodes(a: float, b: float):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    xs = []
    for j in range(7):
        xs.append(c - h * _XGK[j])
        xs.append(c + h * _XGK[j])
    xs.append(c)
    return xs, h


def _gk15_combine(fv, h: float):
    k15 = 0.0
    for j in range(7):
        k15 += _WGK[j] * (fv[2 * j] + fv[2 * j + 1])
    k15 += _WGK[7] * fv[14]
    # The even-index Kronrod abscissae are the Gauss-7 abscissae.
    g7 = (_WG[0] * (fv[2] + fv[3]) + _WG[1] * (fv[6] + fv[7])
          + _WG[2] * (fv[10] + fv[11]) + _WG[3] * fv[14])
    return h * k15, abs(h * (k15 - g7))


def _panel(l: int, mu: float, ratio: float, mode: int, a: float, b: float):
    xs, h = _panel_nodes(a, b)
    fv = kernel.log_delta_nodes(l, mu, ratio, mode, xs)
    for x, f in zip(xs, fv):
        if math.isnan(f):
            raise ConvergenceError(
                f"mode factor not finite at l={l}, xi_hat={x!r}", l_reached=l)
    val, err = _gk15_combine(fv, h)
    return [a, b, val, err]


def _l_term_full(l: int, mu: float, ratio: float, mode: int, rel_tol: float):
    """One partial wave: returns ((2l+1)*integral, error bound, eval count)."""
    # Frame the decay: the integrand falls like
    # exp(-2*gamma*(ratio-1) - 2*l*log(ratio)), so put the right edge where
    # that exponent reaches ~45 (twenty digits below the peak).
    d = (45.0 + 2.0 * l * math.log(ratio)) / (2.0 * (ratio - 1.0))
    X = math.sqrt(d * (d + 2.0 * mu))
    evals = 0
    panels = []
    edges = [0.0] + [X * 2.0 ** (-j) for j in range(12, -1, -1)]
    for a, b in zip(edges, edges[1:]):
        panels.append(_panel(l, mu, ratio, mode, a, b))
        evals += 15

    def plain_total():
        t = 0.0
        for p in panels:
            t += p[2]
        return t

    def tail_bound(x):
        f = kernel.log_delta_point(l, x, mu, ratio, mode)
        if math.isnan(f):
            raise ConvergenceError(
                f"mode factor not finite at l={l}, xi_hat={x!r}", l_reached=l)
        g = kernel.gamma_arg(x, mu)
        # Integral of an exponential with local rate 2*(ratio-1)*x/gamma(x),
        # and the rate only grows to the right of x.
        return abs(f) * g / (2.0 * x * (ratio - 1.0))

    tail = tail_bound(X)
    evals += 1
    total = plain_total()
    for _ in range(60):
        if tail <= (rel_tol / 100.0) * abs(total):
            break
        panels.append(_panel(l, mu, ratio, mode, X, 2.0 * X))
        evals += 15
        X *= 2.0
        tail = tail_bound(X)
        evals += 1
        total = plain_total()
    else:
        raise ConvergenceError(
            f"integration tail would not close at l={l}",
            l_reached=l, evals=evals)

    while True:
        errsum = 0.0
        for p in panels:
            errsum += p[3]
        total = plain_total()
        target = max((rel_tol / 10.0) * abs(total), 1e-280)
        if errsum + tail <= target or errsum == 0.0:
            break
        if evals >= 40000:
            raise ConvergenceError(
                f"quadrature budget exhausted at l={l}",
                partial_sum=(2.0 * l + 1.0) * total, l_reached=l, evals=evals)
        worst = 0
        wmax = panels[0][3]
        for i in range(1, len(panels)):
            if panels[i][3] > wmax:
                worst = i
                wmax = panels[i][3]
        a, b, v, _e = panels[worst]
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            # Interval exhausted at double resolution; its residual error is
            # already in the honest estimate, stop touching it.
            panels[worst] = [a, b, v, 0.0]
            continue
        panels[worst] = _panel(l, mu, ratio, mode, a, mid)
        panels.append(_panel(l, mu, ratio, mode, mid, b))
        evals += 30

    panels.sort(key=lambda p: p[0])
    errsum = 0.0
    for p in panels:
        errsum += p[3]
    value = (2.0 * l + 1.0) * _neumaier([p[2] for p in panels])
    err = (2.0 * l + 1.0) * (errsum + tail)
    return value, err, evals


def l_term(spec: ProblemSpec, l: int) -> float:
    """Contribution of one partial wave: (2l+1) times its xi integral."""
    if isinstance(l, bool) or not isinstance(l, int) or l < 1:
        raise ValueError(f"partial wave must be an integer >= 1, got {l!r}")
    value, _err, _evals = _l_term_full(
        l, spec.mu, spec.ratio, _MODE_CODE[spec.mode], spec.rel_tol)
    return value


def _term_stream(spec: ProblemSpec, mode: int, threads: int):
    # Yields (l, value, err, evals) strictly in ascending l. The threaded
    # branch prefetches a bounded window; wasted prefetch past the stopping
    # point is discarded, keeping results independent of thread count.
    if threads == 1:
        for l in range(1, spec.l_cap + 1):
            yield (l,) + _l_term_full(
                l, spec.mu, spec.ratio, mode, spec.rel_tol)
        return
    depth = threads + 2
    with ThreadPoolExecutor(max_workers=threads) as ex:
        pending = {}
        next_l = 1
        cur = 1
        try:
            while cur <= spec.l_cap:
                while next_l <= spec.l_cap and len(pending) < depth:
                    pending[next_l] = ex.submit(
                        _l_term_full, next_l, spec.mu, spec.ratio, mode,
                        spec.rel_tol)
                    next_l += 1
                res = pending.pop(cur).result()
                yield (cur,) + res
                cur += 1
        finally:
            for f in pending.values():
                f.cancel()


def energy(spec: ProblemSpec, threads: int = 1) -> EnergyResult:
    """Interaction energy in units of hbar*c/(2*pi*a1).

    Partial waves are summed (with compensation) until three consecutive
    terms fall below rel_tol relative to the running sum; exhausting l_cap
    first raises ConvergenceError. threads > 1 evaluates waves concurrently
    without changing a single bit of the result.
    """
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        raise ValueError(f"threads must be an integer >= 1, got {threads!r}")
    mode = _MODE_CODE[spec.mode]
    s = 0.0
    c = 0.0
    err_quad = 0.0
    terms = []
    consec = 0
    evals_total = 0
    l_used = 0
    prev_t = None
    last_t = None
    converged = False
    for l, value, err, ev in _term_stream(spec, mode, threads):
        evals_total += ev
        err_quad += err
        terms.append((l, value))
        t = s + value
        if abs(s) >= abs(value):
            c += (s - t) + value
        else:
            c += (value - t) + s
        s = t
        prev_t = last_t
        last_t = value
        l_used = l
        if value == 0.0 or abs(value) <= spec.rel_tol * abs(s + c):
            consec += 1
        else:
            consec = 0
        if consec >= 3:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"partial-wave cap {spec.l_cap} reached without convergence",
            partial_sum=s + c, last_term=last_t, l_reached=l_used,
            evals=evals_total)
    a_last = abs(last_t)
    if a_last == 0.0:
        l_tail = 0.0
    else:
        # Geometric bound on the dropped waves; the observed decay quotient
        # is clamped away from 1 so the bound stays finite.
        q = 0.95
        if prev_t is not None and abs(prev_t) > 0.0:
            q = min(a_last / abs(prev_t), 0.95)
        l_tail = a_last * q / (1.0 - q)
    return EnergyResult(
        value=s + c,
        abs_error_estimate=err_quad + l_tail,
        l_used=l_used,
        integrand_evals=evals_total,
        per_l_terms=tuple(terms),
    )


def default_fd_step(spec: ProblemSpec) -> float:
    """Step used by force() when fd_step is omitted."""
    return min(1e-3, (spec.ratio - 1.0) / 10.0)


def force(spec: ProblemSpec, fd_step: float | None = None,
          threads: int = 1) -> float:
    """-dE/d(ratio) at fixed inner radius, by Richardson extrapolation.

    Central differences at steps h and h/2 combine to an O(h^4) derivative;
    the inner energy calls run at rel_tol/100 so cancellation in the
    differences does not eat the requested accuracy.
    """
    h = float(fd_step) if fd_step is not None else default_fd_step(spec)
    if not (math.isfinite(h) and h > 0.0):
        raise ValueError(f"fd_step must be positive and finite, got {fd_step!r}")
    if spec.ratio - h <= 1.0:
        raise ValueError("fd_step too large: ratio - fd_step must stay > 1")
    inner = replace(spec, rel_tol=spec.rel_tol / 100.0)

    def e_at(r: float) -> float:
        return energy(replace(inner, ratio=r), threads=threads).value

    d1 = (e_at(spec.ratio + h) - e_at(spec.ratio - h)) / (2.0 * h)
    half = 0.5 * h
    d2 = (e_at(spec.ratio + half) - e_at(spec.ratio - half)) / h
    return -(4.0 * d2 - d1) / 3.0


_CSV_HEADER = "param,e_te,e_tm,e_total,abs_err,l_used"


@dataclass(frozen=True)
class SweepRow:
    """One sweep point; a row that failed to converge holds NaN energies."""

    param: float
    e_te: float
    e_tm: float
    e_total: float
    abs_err: float
    l_used: int


@dataclass(frozen=True)
class SweepTable:
    """Sweep results plus the manifest of fixed parameters that made them."""

    param_name: str
    manifest: tuple[tuple[str, str], ...]
    rows: tuple[SweepRow, ...]

    def to_csv(self) -> str:
        lines = [f"# {k}={v}" for k, v in self.manifest]
        lines.append(_CSV_HEADER)
        for r in self.rows:
            lines.append(",".join((
                repr(r.param), repr(r.e_te), repr(r.e_tm), repr(r.e_total),
                repr(r.abs_err), str(r.l_used))))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        manifest = []
        rows = []
        header_seen = False
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                manifest.append((key.strip(), val.strip()))
                continue
            if not header_seen:
                if line != _CSV_HEADER:
                    raise ValueError(f"unexpected sweep header {line!r}")
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != 6:
                raise ValueError(f"malformed sweep row {line!r}")
            rows.append(SweepRow(
                param=float(parts[0]), e_te=float(parts[1]),
                e_tm=float(parts[2]), e_total=float(parts[3]),
                abs_err=float(parts[4]), l_used=int(parts[5])))
        if not header_seen:
            raise ValueError("sweep CSV has no header line")
        return cls(param_name=dict(manifest).get("sweep", "param"),
                   manifest=tuple(manifest), rows=tuple(rows))

    def to_json(self) -> str:
        return json.dumps({
            "sweep": self.param_name,
            "manifest": dict(self.manifest),
            "rows": [
                {"param": r.param, "e_te": r.e_te, "e_tm": r.e_tm,
                 "e_total": r.e_total, "abs_err": r.abs_err,
                 "l_used": r.l_used}
                for r in self.rows
            ],
        }, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SweepTable":
        obj = json.loads(text)
        rows = tuple(
            SweepRow(param=float(r["param"]), e_te=float(r["e_te"]),
                     e_tm=float(r["e_tm"]), e_total=float(r["e_total"]),
                     abs_err=float(r["abs_err"]), l_used=int(r["l_used"]))
            for r in obj["rows"])
        return cls(param_name=str(obj["sweep"]),
                   manifest=tuple((str(k), str(v))
                                  for k, v in obj["manifest"].items()),
                   rows=rows)


def _sweep_row(spec: ProblemSpec, param_value: float, threads: int) -> SweepRow:
    try:
        te = energy(replace(spec, mode="te"), threads=threads)
        tm = energy(replace(spec, mode="tm"), threads=threads)
    except ConvergenceError:
        nan = float("nan")
        return SweepRow(param=param_value, e_te=nan, e_tm=nan, e_total=nan,
                        abs_err=nan, l_used=0)
    return SweepRow(
        param=param_value,
        e_te=te.value,
        e_tm=tm.value,
        e_total=te.value + tm.value,
        abs_err=te.abs_error_estimate + tm.abs_error_estimate,
        l_used=max(te.l_used, tm.l_used),
    )


def sweep_ratio(template: ProblemSpec, ratio_from: float, ratio_to: float,
                steps: int, threads: int = 1) -> SweepTable:
    """Energy table over an inclusive linear grid of radius ratios."""
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps!r}")
    ratio_from = float(ratio_from)
    ratio_to = float(ratio_to)
    for name, v in (("ratio_from", ratio_from), ("ratio_to", ratio_to)):
        if not (math.isfinite(v) and v > 1.0):
            raise ValueError(f"{name} must be finite and > 1, got {v!r}")
    manifest = (("sweep", "ratio"), ("mu", repr(template.mu)),
                ("rel_tol", repr(template.rel_tol)),
                ("l_cap", str(template.l_cap)))
    span = ratio_to - ratio_from
    rows = []
    for i in range(steps):
        rv = ratio_to if i == steps - 1 else ratio_from + span * (i / (steps - 1.0))
        rows.append(_sweep_row(replace(template, ratio=rv), rv, threads))
    return SweepTable(param_name="ratio", manifest=manifest, rows=tuple(rows))


def sweep_mass(template: ProblemSpec, mu_values: Sequence[float],
               threads: int = 1) -> SweepTable:
    """Energy table over a strictly ascending list of field masses."""
    mus = [float(m) for m in mu_values]
    if not mus:
        raise ValueError("mu_values must be non-empty")
    for m in mus:
        if not (math.isfinite(m) and m >= 0.0):
            raise ValueError(f"mass values must be finite and >= 0, got {m!r}")
    if any(b <= a for a, b in zip(mus, mus[1:])):
        raise ValueError("mu_values must be strictly ascending")
    manifest = (("sweep", "mu"), ("ratio", repr(template.ratio)),
                ("rel_tol", repr(template.rel_tol)),
                ("l_cap", str(template.l_cap)))
    rows = [_sweep_row(replace(template, mu=m), m, threads) for m in mus]
    return SweepTable(param_name="mu", manifest=manifest, rows=tuple(rows))
