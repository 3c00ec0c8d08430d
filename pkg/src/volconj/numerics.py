"""Branch-controlled elementary/special functions and log-space arithmetic.

Everything here is a pure function of its inputs and safe to call from any
number of threads.  Two logarithm branches are exposed and every caller in the
package names the one it uses:

* ``log_principal`` -- arg in (-pi, pi], the usual principal branch;
* ``log_branch_neg`` -- arg in [-pi, pi), so that log(-1) = -pi*i.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import AmbiguousBranchError, DomainError, InsufficientDataError

PI = math.pi
TWO_PI = 2.0 * math.pi
NEG_INF = float("-inf")

__all__ = [
    "LogComplex",
    "LimitEstimate",
    "log_principal",
    "log_branch_neg",
    "normalize_phase",
    "dilog",
    "log_sum_exp",
    "log_sum_exp_anchored",
    "central_derivative",
    "derivative",
    "extrapolate",
]


def normalize_phase(phase: float) -> float:
    """Reduce a phase to the canonical interval [-pi, pi)."""
    if not math.isfinite(phase):
        raise DomainError(f"non-finite phase {phase!r}")
    p = math.remainder(phase, TWO_PI)
    if p == PI:
        p = -PI
    return p


def log_principal(z: complex) -> complex:
    """Principal logarithm, arg in (-pi, pi]."""
    if z == 0:
        raise DomainError("logarithm undefined at z = 0")
    return cmath.log(z)


def log_branch_neg(z: complex) -> complex:
    """Logarithm with arg in [-pi, pi), fixing log(-1) = -pi*i."""
    if z == 0:
        raise DomainError("logarithm undefined at z = 0")
    w = cmath.log(z)
    if w.imag == PI:
        return complex(w.real, -PI)
    return w


def _unit(phase: float) -> complex:
    # exp(i*phase) with exact values on the axes, so that phase-coded signs
    # cancel exactly in sums
    if phase == 0.0:
        return 1.0 + 0.0j
    if phase == PI or phase == -PI:
        return -1.0 + 0.0j
    if phase == PI / 2:
        return 1j
    if phase == -PI / 2:
        return -1j
    return cmath.exp(1j * phase)


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as (log-magnitude, phase), phase in [-pi, pi).

    Zero is the sentinel ``LogComplex(-inf, 0.0)``.
    """

    log_mag: float
    phase: float = 0.0

    def __post_init__(self):
        if math.isnan(self.log_mag) or self.log_mag == math.inf:
            raise DomainError(f"invalid log magnitude {self.log_mag!r}")
        if self.log_mag == NEG_INF:
            object.__setattr__(self, "phase", 0.0)
        else:
            object.__setattr__(self, "phase", normalize_phase(self.phase))

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(NEG_INF, 0.0)

    @classmethod
    def one(cls) -> "LogComplex":
        return cls(0.0, 0.0)

    @classmethod
    def from_complex(cls, z: complex) -> "LogComplex":
        z = complex(z)
        if z == 0:
            return cls.zero()
        return cls(math.log(abs(z)), cmath.phase(z))

    @classmethod
    def from_log(cls, w: complex) -> "LogComplex":
        """Wrap a plain complex logarithm, reducing its imaginary part."""
        return cls(w.real, w.imag)

    @property
    def is_zero(self) -> bool:
        return self.log_mag == NEG_INF

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0.0 + 0.0j
        if self.log_mag > 709.0:
            raise DomainError(
                f"log magnitude {self.log_mag:.3g} exceeds double range; keep log form"
            )
        return math.exp(self.log_mag) * _unit(self.phase)

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        if not isinstance(other, LogComplex):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag + other.log_mag, self.phase + other.phase)


def log_sum_exp(terms: Sequence[LogComplex]) -> LogComplex:
    """Sum of LogComplex values, shifted by the maximal log-magnitude.

    Exact cancellation of all terms yields the zero sentinel.
    """
    ts = list(terms)
    if not ts:
        raise DomainError("log_sum_exp of an empty sequence")
    m = max(t.log_mag for t in ts)
    if m == NEG_INF:
        return LogComplex.zero()
    s = 0.0 + 0.0j
    for t in ts:
        if t.is_zero:
            continue
        s += math.exp(t.log_mag - m) * _unit(t.phase)
    if s == 0:
        return LogComplex.zero()
    return LogComplex(m + math.log(abs(s)), cmath.phase(s))


def log_sum_exp_anchored(logs: Sequence[complex]) -> complex:
    """A branch of log(sum_k exp(z_k)) anchored to the dominant exponent.

    Unlike :func:`log_sum_exp` the imaginary part is *not* reduced mod 2*pi:
    it equals Im(z*) plus a principal correction, where z* is the term of
    maximal real part.  Returns complex(-inf, 0) on exact cancellation.
    """
    zs = list(logs)
    if not zs:
        raise DomainError("log_sum_exp_anchored of an empty sequence")
    zstar = max(zs, key=lambda z: z.real)
    if zstar.real == NEG_INF:
        return complex(NEG_INF, 0.0)
    s = 0.0 + 0.0j
    for z in zs:
        if z.real == NEG_INF:
            continue
        s += cmath.exp(z - zstar)
    if s == 0:
        return complex(NEG_INF, 0.0)
    return zstar + cmath.log(s)


# ---------------------------------------------------------------------------
# dilogarithm
# ---------------------------------------------------------------------------

PI2_6 = PI * PI / 6.0


def _bernoulli_over_factorial(count: int) -> list[float]:
    # c_n = B_n / (n+1)!  (B_1 = -1/2 convention), exact rationals then floats
    bern = [Fraction(0)] * count
    bern[0] = Fraction(1)
    for n in range(1, count):
        acc = Fraction(0)
        for k in range(n):
            acc += math.comb(n + 1, k) * bern[k]
        bern[n] = -acc / (n + 1)
    coeffs = []
    fact = Fraction(1)
    for n in range(count):
        fact *= n + 1
        coeffs.append(float(bern[n] / fact))
    return coeffs


_DILOG_COEFFS = _bernoulli_over_factorial(52)


def _dilog_power_series(z: complex) -> complex:
    # sum z^k / k^2, |z| <= 0.6 or so
    acc = 0.0 + 0.0j
    term = z
    k = 1
    while True:
        inc = term / (k * k)
        acc += inc
        if abs(inc) <= 1e-18 * max(abs(acc), 1e-300):
            return acc
        k += 1
        term *= z
        if k > 400:
            return acc


def _dilog_log_series(z: complex) -> complex:
    # Debye expansion in u = -log(1-z); converges for |u| < 2*pi, used on the
    # annulus 0.5 < |z| <= 1, Re z <= 1/2 where neither plain series nor the
    # functional equations terminate (the Moebius orbit of e^{i*pi/3} stays
    # on the unit circle)
    u = -cmath.log(1.0 - z)
    acc = 0.0 + 0.0j
    upow = u
    for c in _DILOG_COEFFS:
        if c != 0.0:
            inc = c * upow
            acc += inc
            # odd Bernoulli numbers vanish; only nonzero terms may stop us
            if abs(inc) <= 1e-18 * max(abs(acc), 1e-300):
                break
        upow *= u
    return acc


def dilog(z: complex, cut_side: str | None = None) -> complex:
    """Principal-branch dilogarithm Li2(z).

    The branch cut is [1, inf); points on the open cut need
    ``cut_side="above"`` or ``"below"``, otherwise an
    :class:`AmbiguousBranchError` is raised.
    """
    z = complex(z)
    if z == 0:
        return 0.0 + 0.0j
    if z == 1:
        return complex(PI2_6, 0.0)
    if z.imag == 0.0 and z.real > 1.0:
        if cut_side not in ("above", "below"):
            raise AmbiguousBranchError(
                f"dilog({z.real}) lies on the branch cut [1, inf); pass cut_side"
            )
        x = z.real
        lx = math.log(x)
        base = PI * PI / 3.0 - 0.5 * lx * lx - dilog(1.0 / x)
        sign = 1.0 if cut_side == "above" else -1.0
        return base + sign * 1j * PI * lx
    if abs(z) > 1.0:
        # inversion: Li2(z) + Li2(1/z) = -pi^2/6 - log(-z)^2 / 2
        lg = cmath.log(-z)
        return -PI2_6 - 0.5 * lg * lg - dilog(1.0 / z)
    if z.real > 0.5:
        # reflection: Li2(z) + Li2(1-z) = pi^2/6 - log(z) log(1-z)
        return PI2_6 - cmath.log(z) * cmath.log(1.0 - z) - dilog(1.0 - z)
    if abs(z) <= 0.5:
        return _dilog_power_series(z)
    return _dilog_log_series(z)


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------


def central_derivative(f: Callable[[complex], complex], u: complex, h: float) -> complex:
    """Plain central difference (f(u+h) - f(u-h)) / (2h), error O(h^2)."""
    if not (h > 0):
        raise DomainError(f"step must be positive, got {h!r}")
    return (f(u + h) - f(u - h)) / (2.0 * h)


def derivative(f: Callable[[complex], complex], u: complex, h: float = 1e-5) -> complex:
    """Central derivative with one h/2 refinement and Richardson combination."""
    d1 = central_derivative(f, u, h)
    d2 = central_derivative(f, u, h / 2.0)
    return (4.0 * d2 - d1) / 3.0


# ---------------------------------------------------------------------------
# sequence extrapolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitEstimate:
    """Extrapolated limit of a sequence f_N with the raw tail kept around."""

    value: complex
    error_estimate: float
    samples: tuple[tuple[int, complex], ...]


def _fit_limit(samples: Sequence[tuple[int, complex]]) -> complex:
    # least squares for f_N = L + a log(N)/N + b/N over the trailing half,
    # never fewer points than the three model parameters
    take = max(3, math.ceil(len(samples) / 2))
    window = list(samples)[-take:]
    ns = np.array([n for n, _ in window], dtype=float)
    fs = np.array([f for _, f in window], dtype=complex)
    design = np.column_stack(
        [np.ones_like(ns), np.log(ns) / ns, 1.0 / ns]
    ).astype(complex)
    coeffs, *_ = np.linalg.lstsq(design, fs, rcond=None)
    return complex(coeffs[0])


def extrapolate(samples: Sequence[tuple[int, complex]]) -> LimitEstimate:
    """Estimate lim f_N from samples (N, f_N), N strictly increasing.

    The model is L + a log(N)/N + b/N fitted to the trailing half of the
    samples; the error estimate is the change of L when the last sample is
    dropped.
    """
    pts = [(int(n), complex(f)) for n, f in samples]
    if len(pts) < 4:
        raise InsufficientDataError(
            f"extrapolation needs at least 4 samples, got {len(pts)}"
        )
    for (n0, _), (n1, _) in zip(pts, pts[1:]):
        if n1 <= n0:
            raise DomainError(f"sample indices must increase strictly ({n0} -> {n1})")
    full = _fit_limit(pts)
    prev = _fit_limit(pts[:-1])
    return LimitEstimate(full, abs(full - prev), tuple(pts))
