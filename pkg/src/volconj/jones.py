"""Overflow-safe colored Jones evaluation at arbitrary complex q.

Normalization: J_N(unknot) = 1 and J_2 is the Jones polynomial.  The
figure-eight knot uses the cyclotomic sum

    J_N = sum_{k=0}^{N-1} prod_{j=1}^{k} (q^N + q^{-N} - q^j - q^{-j}),

torus knots T(a,b) the sum

    J_N = q^{ab(1-N^2)/4} / (q^{N/2} - q^{-N/2})
          * sum_k (q^{ab k^2 + (a+b)k + 1/2} - q^{ab k^2 + (a-b)k - 1/2}),

k stepping by 1 from -(N-1)/2 to (N-1)/2.  All exponents are quarter-integers
in q, so everything is carried out in exact integer multiples of
w/(4N) where q = exp(w/N); that removes per-term branch ambiguity once
q^{1/4} is fixed by the [-pi, pi) logarithm branch.

Evaluations are done in shifted log space.  When the terms of a sum cancel
below the double-precision noise floor (which genuinely happens deep in the
torus asymptotic regime), the evaluator transparently re-runs the sum in an
independent mpmath context with enough digits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, NumericalError
from .knots import FIGURE_EIGHT, TORUS, UNKNOT, KnotSpec
from .numerics import PI, TWO_PI, LogComplex, log_branch_neg

__all__ = [
    "JonesEvaluation",
    "colored_jones",
    "colored_jones_fig8",
    "colored_jones_torus",
    "log_jones_scaled",
    "log_jones_sequence",
]

NEG_INF = float("-inf")

# escalate to mpmath once a sum loses this many decimal digits to cancellation
_CANCEL_GUARD_DIGITS = 3.0
_MAX_DPS = 1400


@dataclass(frozen=True)
class JonesEvaluation:
    """One colored Jones value: J_N(knot; q) kept in log form."""

    knot: KnotSpec
    N: int
    q: complex
    value: LogComplex


@dataclass(frozen=True)
class _LogEval:
    """Split logarithm of J_N: an exact-branch part plus an anchored sum part.

    ``log_pre`` carries exponents computed by exact integer arithmetic (its
    imaginary part is trustworthy as a branch), ``log_sum`` is anchored to the
    dominant term of the remaining sum (imaginary part correct up to the
    principal correction, never reduced against the dominant exponent).
    """

    log_pre: complex
    log_sum: complex

    @property
    def total(self) -> complex:
        if self.log_sum.real == NEG_INF:
            return complex(NEG_INF, 0.0)
        return self.log_pre + self.log_sum


def _check_q(q: complex) -> complex:
    q = complex(q)
    if q == 0:
        raise DomainError("colored Jones undefined at q = 0")
    return q


def _w_of_q(q: complex, N: int) -> complex:
    # q = exp(w/N) with w/N on the [-pi, pi) branch
    return log_branch_neg(q) * N


# ---------------------------------------------------------------------------
# anchored summation with precision escalation
# ---------------------------------------------------------------------------


def _anchored_sum_double(logs: np.ndarray) -> tuple[complex, float]:
    """Anchored log-sum over an array of complex logs.

    Returns (anchored log of the sum, cancellation depth in nats).  The depth
    compares sum(|terms|) against |sum(terms)|.
    """
    finite = logs[np.isfinite(logs.real)]
    if finite.size == 0:
        return complex(NEG_INF, 0.0), 0.0
    k = int(np.argmax(finite.real))
    zstar = complex(finite[k])
    shifted = np.exp(finite - zstar)
    s = complex(shifted.sum())
    mag = float(np.abs(shifted).sum())
    if s == 0 or mag == 0.0:
        return complex(NEG_INF, 0.0), math.inf
    return zstar + cmath.log(s), math.log(mag / abs(s))


def _sum_with_escalation(builder, n_terms_hint: int) -> complex:
    """Run ``builder`` in double precision, escalating to mpmath on deep
    cancellation.

    ``builder(ctx)`` must return an iterable of term logs when ``ctx`` is an
    mpmath context, or a numpy array when ``ctx is None``.
    """
    logs = builder(None)
    anchored, depth = _anchored_sum_double(logs)
    noise_floor = -math.log(len(logs) * 2.220446049250313e-16)
    if depth < noise_floor - _CANCEL_GUARD_DIGITS * math.log(10.0):
        return anchored
    # cancellation ate (nearly) all double digits: redo with mpmath; a
    # measured depth close to the working precision means the true depth is
    # deeper still, so the ladder keeps climbing until digits survive
    dps = 60
    while dps <= _MAX_DPS:
        ctx = mpmath.mp.clone()
        ctx.dps = dps
        mp_logs = builder(ctx)
        zstar = max(mp_logs, key=lambda z: z.real)
        s = ctx.mpc(0)
        mag = ctx.mpf(0)
        for z in mp_logs:
            term = ctx.exp(z - zstar)
            s += term
            mag += abs(term)
        if s != 0 and mag > 0:
            depth_digits = float(ctx.log(mag / abs(s))) / math.log(10.0)
            if depth_digits < dps - 8:
                res = zstar + ctx.log(s)
                return complex(res)
            dps = max(2 * dps + 50, int(depth_digits) + 40)
        else:
            dps = 2 * dps + 50
    raise NumericalError(
        f"cancellation too deep for {_MAX_DPS} digits in a {n_terms_hint}-term sum"
    )


# ---------------------------------------------------------------------------
# figure-eight evaluator
# ---------------------------------------------------------------------------


def _fig8_term_logs(N: int, w: complex, ctx) -> "np.ndarray | list":
    # term k is prod_{j<=k} f_j with f_j = 2 cosh(w) - 2 cosh(j w / N);
    # a factor that is exactly zero kills every later term
    if ctx is None:
        j = np.arange(1, N)
        factors = 2.0 * np.cosh(complex(w)) - 2.0 * np.cosh(j * (complex(w) / N))
        zero = np.nonzero(factors == 0)[0]
        if zero.size:
            factors = factors[: zero[0]]
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.log(factors)
        return np.concatenate([[0.0 + 0.0j], np.cumsum(logs)])
    wm = ctx.mpc(w.real, w.imag)
    cw = 2 * ctx.cosh(wm)
    out = [ctx.mpc(0)]
    acc = ctx.mpc(0)
    for j in range(1, N):
        f = cw - 2 * ctx.cosh(wm * j / N)
        if f == 0:
            break
        acc = acc + ctx.log(f)
        out.append(acc)
    return out


def _fig8_log_eval(N: int, w: complex) -> _LogEval:
    if N == 1:
        return _LogEval(0.0 + 0.0j, 0.0 + 0.0j)
    sum_log = _sum_with_escalation(lambda ctx: _fig8_term_logs(N, w, ctx), N)
    return _LogEval(0.0 + 0.0j, sum_log)


def colored_jones_fig8(N: int, q: complex) -> LogComplex:
    """Figure-eight colored Jones via the cyclotomic sum, O(N) factors."""
    q = _check_q(q)
    if N < 1:
        raise DomainError(f"color N must be positive, got {N}")
    w = _w_of_q(q, N)
    return LogComplex.from_log(_fig8_log_eval(N, w).total)


# ---------------------------------------------------------------------------
# torus evaluator
# ---------------------------------------------------------------------------


def _torus_exponents(a: int, b: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    # q-exponents in quarter units: with j = 2k odd/even as N is even/odd,
    # 4*e+ = ab j^2 + 2(a+b) j + 2 and 4*e- = ab j^2 + 2(a-b) j - 2
    j = np.arange(-(N - 1), N, 2, dtype=np.int64)
    mplus = a * b * j * j + 2 * (a + b) * j + 2
    mminus = a * b * j * j + 2 * (a - b) * j - 2
    return mplus, mminus


def _torus_sum_logs(a: int, b: int, N: int, w: complex, ctx) -> "np.ndarray | list":
    mplus, mminus = _torus_exponents(a, b, N)
    if ctx is None:
        base = complex(w) / (4.0 * N)
        return np.concatenate([mplus * base, mminus * base + 1j * PI])
    wm = ctx.mpc(w.real, w.imag)
    base = wm / (4 * N)
    ipi = ctx.mpc(0, ctx.pi)
    out = [base * int(m) for m in mplus]
    out.extend(base * int(m) + ipi for m in mminus)
    return out


def _torus_kashaev_logs(a: int, b: int, N: int, w: complex, ctx) -> "np.ndarray | list":
    # derivative of the sum in sigma = q^{1/4} for the removable singularity
    # at exp(w) = 1: terms m * sigma^{m-1} and -m * sigma^{m-1}
    mplus, mminus = _torus_exponents(a, b, N)
    coeffs = np.concatenate([mplus, -mminus])
    ms = np.concatenate([mplus, mminus])
    keep = coeffs != 0
    coeffs, ms = coeffs[keep], ms[keep]
    if ctx is None:
        base = complex(w) / (4.0 * N)
        logs = np.log(np.abs(coeffs).astype(float)) + (ms - 1) * base
        logs = logs + np.where(coeffs < 0, 1j * PI, 0.0)
        return logs
    wm = ctx.mpc(w.real, w.imag)
    base = wm / (4 * N)
    ipi = ctx.mpc(0, ctx.pi)
    out = []
    for c, m in zip(coeffs, ms):
        z = ctx.log(abs(int(c))) + (int(m) - 1) * base
        if c < 0:
            z = z + ipi
        out.append(z)
    return out


def _torus_log_eval(a: int, b: int, N: int, w: complex) -> _LogEval:
    if N == 1:
        return _LogEval(0.0 + 0.0j, 0.0 + 0.0j)
    ew = cmath.exp(w)
    if abs(ew - 1.0) < 1e-12:
        if abs(w) < 1e-12:
            # q = 1: every colored Jones polynomial evaluates to 1
            return _LogEval(0.0 + 0.0j, 0.0 + 0.0j)
        # removable singularity q^{N/2} = q^{-N/2}: L'Hopital in sigma
        log_pre = w * (a * b * (1 - N * N)) / (4.0 * N)
        num = _sum_with_escalation(
            lambda ctx: _torus_kashaev_logs(a, b, N, w, ctx), 2 * N
        )
        sig = w / (4.0 * N)
        den = 2.0 * N * (cmath.exp((2 * N - 1) * sig) + cmath.exp(-(2 * N + 1) * sig))
        return _LogEval(log_pre - cmath.log(den), num)
    log_pre = w * (a * b * (1 - N * N)) / (4.0 * N) - cmath.log(2.0 * cmath.sinh(w / 2.0))
    sum_log = _sum_with_escalation(lambda ctx: _torus_sum_logs(a, b, N, w, ctx), 2 * N)
    return _LogEval(log_pre, sum_log)


def colored_jones_torus(a: int, b: int, N: int, q: complex) -> LogComplex:
    """Torus knot colored Jones via the integer-spin sum, O(N) terms.

    The q with q^{N/2} = q^{-N/2} (roots of unity for w) are removable
    singularities of the formula and are evaluated by the sigma-derivative
    limit rather than rejected.
    """
    KnotSpec.torus(a, b)  # validates coprimality and a, b > 1
    q = _check_q(q)
    if N < 1:
        raise DomainError(f"color N must be positive, got {N}")
    w = _w_of_q(q, N)
    return LogComplex.from_log(_torus_log_eval(a, b, N, w).total)


# ---------------------------------------------------------------------------
# dispatcher and the scaled-log sequence
# ---------------------------------------------------------------------------


def _log_eval(knot: KnotSpec, N: int, w: complex) -> _LogEval:
    if knot.kind == UNKNOT:
        return _LogEval(0.0 + 0.0j, 0.0 + 0.0j)
    if knot.kind == FIGURE_EIGHT:
        return _fig8_log_eval(N, w)
    return _torus_log_eval(knot.a, knot.b, N, w)


def colored_jones(knot: KnotSpec, N: int, q: complex) -> LogComplex:
    """J_N(knot; q) as a LogComplex; dispatches on the knot kind."""
    q = _check_q(q)
    if N < 1:
        raise DomainError(f"color N must be positive, got {N}")
    if knot.kind == UNKNOT:
        return LogComplex.one()
    if knot.kind == FIGURE_EIGHT:
        return colored_jones_fig8(N, q)
    return colored_jones_torus(knot.a, knot.b, N, q)


def jones_evaluation(knot: KnotSpec, N: int, q: complex) -> JonesEvaluation:
    return JonesEvaluation(knot, N, complex(q), colored_jones(knot, N, q))


def log_jones_scaled(knot: KnotSpec, N: int, u: complex) -> complex:
    """log J_N(knot; exp((u+2*pi*i)/N)) / N, one point of the limit sequence.

    The imaginary part is anchored to the dominant term of the underlying
    sum, which pins the winding up to an N-independent 2*pi*k offset; use
    :func:`log_jones_sequence` for a branch made continuous along a schedule.
    """
    if N < 2:
        raise DomainError(f"limit sequence needs N >= 2, got {N}")
    w = complex(u) + TWO_PI * 1j
    return _log_eval(knot, N, w).total / N


def _wrap_pm_pi(x: float) -> float:
    return math.remainder(x, TWO_PI)


def log_jones_sequence(
    knot: KnotSpec,
    u: complex,
    schedule,
    unwind: bool = True,
) -> list[tuple[int, complex]]:
    """The sequence (N, log J_N(exp((u+2*pi*i)/N))/N) along a schedule.

    With ``unwind`` the imaginary part of the sum-log is made continuous in N:
    local slopes are measured on (N, N+1) pairs (for the registry knots the
    per-step phase increment stays inside (-pi, pi)), then integrated across
    the schedule gaps.  The overall 2*pi*k seed offset is constant in N and is
    absorbed by the b/N term of the extrapolation model.

    At w = u + 2*pi*i a nonzero multiple of 2*pi*i (the root-of-unity points)
    no continuous-in-N branch exists and principal values are returned.
    """
    ns = [int(n) for n in schedule]
    if not ns:
        raise DomainError("empty N schedule")
    if any(n < 2 for n in ns):
        raise DomainError("limit sequence needs N >= 2")
    for n0, n1 in zip(ns, ns[1:]):
        if n1 <= n0:
            raise DomainError("N schedule must increase strictly")
    w = complex(u) + TWO_PI * 1j
    if knot.kind == UNKNOT:
        return [(n, 0.0 + 0.0j) for n in ns]
    at_root_of_unity = abs(cmath.exp(w) - 1.0) < 1e-12
    if not unwind or at_root_of_unity:
        return [(n, _log_eval(knot, n, w).total / n) for n in ns]

    evals = [_log_eval(knot, n, w) for n in ns]
    nexts = [_log_eval(knot, n + 1, w) for n in ns]
    slopes = [
        _wrap_pm_pi(nx.log_sum.imag - ev.log_sum.imag)
        for ev, nx in zip(evals, nexts)
    ]
    out: list[tuple[int, complex]] = []
    im_prev = evals[0].log_sum.imag
    for i, (n, ev) in enumerate(zip(ns, evals)):
        if i == 0:
            im_unwound = ev.log_sum.imag
        else:
            gap = n - ns[i - 1]
            predicted = im_prev + 0.5 * (slopes[i - 1] + slopes[i]) * gap
            k = round((predicted - ev.log_sum.imag) / TWO_PI)
            im_unwound = ev.log_sum.imag + TWO_PI * k
        im_prev = im_unwound
        total = ev.log_pre + complex(ev.log_sum.real, im_unwound)
        out.append((n, total / n))
    return out
