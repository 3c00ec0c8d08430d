"""The analytic layer of the parameterized volume conjecture.

Potentials H(K;u), the longitude function v_K(u) = 2 dH/du - 2*pi*i, the
volume function V(K;u) = Im H - pi Re u - (1/2) Re u Im v, the Schlafli
residual, geodesic length, generalized Dehn-surgery coefficients, the
A-polynomial pairing, the Neumann-Zagier potential Phi = 4H - 4*pi*i*u,
the abelian-regime check against 1/Delta, and the shared-root observation
relating zeros of H to roots of the Alexander polynomial.

Closed forms:

* torus T(a,b):   H = -(ab(u+2*pi*i) - 2*pi*i)^2 / (4ab),  v = -ab(u+2*pi*i),
  asserted in the region |u+2*pi*i| > 2*pi/(ab), Re u < 0, Im u > -2*pi but
  evaluated everywhere (the closed forms are entire); out-of-region queries
  are tagged, not rejected.
* figure-eight:   H = Li2(exp(-u)/y) - Li2(y exp(-u)) + (log(-y) + pi*i) u
  with y + 1/y = 2 cosh(u) - 1 and the log branch fixed by log(-1) = -pi*i.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import DomainError, NumericalError
from .jones import log_jones_scaled, log_jones_sequence
from .knots import (
    FIGURE_EIGHT,
    TORUS,
    UNKNOT,
    APolynomial,
    KnotSpec,
    a_polynomial,
    alexander_symmetrized,
)
from .numerics import (
    PI,
    TWO_PI,
    LimitEstimate,
    central_derivative,
    derivative,
    dilog,
    extrapolate,
    log_branch_neg,
)

__all__ = [
    "GeometryPoint",
    "SaddleY",
    "GukovReport",
    "SharedRootReport",
    "MMReport",
    "torus_in_region",
    "h_closed",
    "h_numeric",
    "solve_y",
    "v_of_u",
    "volume",
    "volume_geodesic_form",
    "geodesic_length",
    "schlafli_residual",
    "surgery_coefficients",
    "gukov_check",
    "shared_root_check",
    "nz_potential",
    "mm_check",
    "geometry_point",
    "r_parameter",
    "u_of_gukov_a",
]

I2PI = 2j * math.pi

CLOSED_FORM = "closed_form"
NUMERIC_LIMIT = "numeric_limit"

DEFAULT_SCHEDULE = tuple(range(500, 2001, 150))


def r_parameter(u: complex) -> complex:
    """The deformation ratio r with q = exp(2*pi*r*i/N), i.e. r = 1 + u/(2*pi*i)."""
    return 1.0 + complex(u) / I2PI


def u_of_gukov_a(a: complex) -> complex:
    """Translate the holomorphic-torsion parameter a: u = 2*pi*a*i - 2*pi*i."""
    return I2PI * (complex(a) - 1.0)


def torus_in_region(a: int, b: int, u: complex) -> bool:
    """Sufficient region for the torus closed forms:
    |u+2*pi*i| > 2*pi/(ab), Re u < 0, Im u > -2*pi."""
    w = complex(u) + I2PI
    return abs(w) > TWO_PI / (a * b) and u.real < 0 and u.imag > -TWO_PI


# ---------------------------------------------------------------------------
# saddle and closed-form potentials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SaddleY:
    """Solution of y + 1/y = 2 cosh(u) - 1 on the geometric branch."""

    y: complex


def _fig8_h_with_y(u: complex, y: complex) -> complex:
    if abs(y - 1.0) < 1e-13:
        # double root: the two dilogarithms cancel identically
        return (log_branch_neg(-1.0) + 1j * PI) * u
    emu = cmath.exp(-u)
    return (
        dilog(emu / y)
        - dilog(y * emu)
        + (log_branch_neg(-y) + 1j * PI) * u
    )


def _y_candidates(u: complex) -> tuple[complex, complex]:
    c = 2.0 * cmath.cosh(u) - 1.0
    disc = c * c - 4.0
    if abs(disc) < 1e-26:
        y = c / 2.0
        return y, y
    root = cmath.sqrt(disc)
    y1 = (c + root) / 2.0
    y2 = (c - root) / 2.0
    # the more accurate small root comes from the product y1*y2 = 1
    if abs(y1) >= abs(y2):
        y2 = 1.0 / y1
    else:
        y1 = 1.0 / y2
    return y1, y2


def solve_y(u: complex) -> SaddleY:
    """Geometric-branch root of y^2 - (2 cosh u - 1) y + 1 = 0.

    Picks the root maximizing Im H(fig8; u); ties break toward |y| <= 1.
    """
    u = complex(u)
    y1, y2 = _y_candidates(u)
    if y1 == y2:
        return SaddleY(y1)
    try:
        im1 = _fig8_h_with_y(u, y1).imag
        im2 = _fig8_h_with_y(u, y2).imag
    except DomainError:
        # branch-cut collision: fall back to the bounded root
        return SaddleY(y1 if abs(y1) <= abs(y2) else y2)
    if math.isclose(im1, im2, rel_tol=0.0, abs_tol=1e-12):
        return SaddleY(y1 if abs(y1) <= abs(y2) else y2)
    return SaddleY(y1 if im1 > im2 else y2)


def _h_torus(a: int, b: int, u: complex) -> complex:
    w = complex(u) + I2PI
    z = a * b * w - I2PI
    return -(z * z) / (4.0 * a * b)


def h_closed(knot: KnotSpec, u: complex) -> complex:
    """Closed-form potential H(K;u).

    Torus knots use the entire quadratic form; the figure-eight knot the
    dilogarithm form on the geometric y-branch.  The unknot has no closed
    form and is rejected.
    """
    u = complex(u)
    if knot.kind == UNKNOT:
        raise DomainError("no closed-form potential for the unknot")
    if knot.kind == TORUS:
        return _h_torus(knot.a, knot.b, u)
    return _fig8_h_with_y(u, solve_y(u).y)


def h_numeric(knot: KnotSpec, u: complex, schedule=DEFAULT_SCHEDULE) -> LimitEstimate:
    """H(K;u) from the limit: (u+2*pi*i) * lim log J_N(exp((u+2*pi*i)/N))/N."""
    ns = [int(n) for n in schedule]
    if not ns or max(ns) < 500:
        raise DomainError("schedule must reach N >= 500")
    u = complex(u)
    w = u + I2PI
    if knot.kind == UNKNOT:
        samples = tuple((n, 0.0 + 0.0j) for n in ns)
        return LimitEstimate(0.0 + 0.0j, 0.0, samples)
    seq = log_jones_sequence(knot, u, ns)
    est = extrapolate(seq)
    return LimitEstimate(w * est.value, abs(w) * est.error_estimate, est.samples)


# ---------------------------------------------------------------------------
# v, volume, geodesic length
# ---------------------------------------------------------------------------


def v_of_u(
    knot: KnotSpec,
    u: complex,
    route: str = CLOSED_FORM,
    h: float = 1e-5,
    schedule=DEFAULT_SCHEDULE,
) -> complex:
    """Longitude log-eigenvalue-ratio v_K(u) = 2 dH/du - 2*pi*i.

    Torus knots return -ab(u+2*pi*i) exactly.  Otherwise the derivative is a
    Richardson-refined central difference of the closed-form H, or of the
    numeric-limit H when ``route="numeric_limit"`` (wider step, since the
    extrapolated H carries noise).
    """
    u = complex(u)
    if knot.kind == TORUS and route == CLOSED_FORM:
        return -knot.a * knot.b * (u + I2PI)
    if knot.kind == UNKNOT:
        return -I2PI
    if route == CLOSED_FORM:
        return 2.0 * derivative(lambda z: h_closed(knot, z), u, h) - I2PI
    if route == NUMERIC_LIMIT:
        step = max(h, 2e-2)
        d = central_derivative(
            lambda z: h_numeric(knot, z, schedule).value, u, step
        )
        return 2.0 * d - I2PI
    raise DomainError(f"unknown route {route!r}")


def geodesic_length(u: complex, v: complex) -> float:
    """Length of the completing core geodesic: -Im(u * conj(v)) / (2*pi)."""
    return -(complex(u) * complex(v).conjugate()).imag / TWO_PI


def volume_from_parts(u: complex, H: complex, v: complex) -> float:
    return H.imag - PI * u.real - 0.5 * u.real * v.imag


def volume_geodesic_form(u: complex, H: complex, v: complex) -> float:
    """Alternative figure-eight form via the geodesic length; agrees with the
    standard form by the identity Im(u conj(v)) - Im(u v) = -2 Re(u) Im(v)."""
    return (
        H.imag
        - PI * u.real
        - 0.25 * (u * v).imag
        - 0.5 * PI * geodesic_length(u, v)
    )


def volume(knot: KnotSpec, u: complex, route: str = CLOSED_FORM) -> float:
    """Volume function V(K;u) = Im H - pi Re u - (1/2) Re u Im v."""
    u = complex(u)
    if knot.kind == UNKNOT:
        return 0.0
    H = h_closed(knot, u) if route == CLOSED_FORM else h_numeric(knot, u).value
    v = v_of_u(knot, u, route=route)
    return volume_from_parts(u, H, v)


# ---------------------------------------------------------------------------
# Schlafli residual and surgery coefficients
# ---------------------------------------------------------------------------


def schlafli_residual(knot: KnotSpec, path, t: float, dt: float = 1e-3) -> float:
    """|dV/dt - RHS| for dV/dt = -1/2 (Re u dIm(v)/dt - Re v dIm(u)/dt).

    ``path`` maps a real parameter to u; central differences at step dt on
    both sides.
    """
    if not (dt > 0):
        raise DomainError("dt must be positive")

    def parts(s: float):
        u = complex(path(s))
        if knot.kind == UNKNOT:
            return u, 0.0 + 0.0j, -I2PI
        H = h_closed(knot, u)
        v = v_of_u(knot, u)
        return u, H, v

    um, Hm, vm = parts(t - dt)
    u0, H0, v0 = parts(t)
    up, Hp, vp = parts(t + dt)
    dv_dt = (volume_from_parts(up, Hp, vp) - volume_from_parts(um, Hm, vm)) / (2 * dt)
    dimv = (vp.imag - vm.imag) / (2 * dt)
    dimu = (up.imag - um.imag) / (2 * dt)
    rhs = -0.5 * (u0.real * dimv - v0.real * dimu)
    return abs(dv_dt - rhs)


def surgery_coefficients(
    u: complex, v: complex, residual_tol: float = 1e-9
) -> tuple[float, float] | None:
    """Real (p, q) with p u + q v = 2*pi*i, or None when no real pair exists.

    A rank-deficient but consistent system (e.g. u = 0, v = 2*pi*i) yields
    the minimal-norm solution; an inconsistent one yields None.  Check
    :func:`is_integral_surgery` for the coprime-integer flag.
    """
    import numpy as np

    u, v = complex(u), complex(v)
    design = np.array([[u.real, v.real], [u.imag, v.imag]], dtype=float)
    target = np.array([0.0, TWO_PI])
    sol, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.hypot(*(design @ sol - target)))
    if residual > residual_tol * max(1.0, abs(u), abs(v)):
        return None
    p, q = float(sol[0]) + 0.0, float(sol[1]) + 0.0
    return (p, q)


def is_integral_surgery(pq: tuple[float, float] | None, tol: float = 1e-6) -> bool:
    """Whether (p, q) sits within tol of a coprime integer pair."""
    if pq is None:
        return False
    p, q = pq
    pi_, qi = round(p), round(q)
    if abs(p - pi_) > tol or abs(q - qi) > tol:
        return False
    if pi_ == 0 and qi == 0:
        return False
    return math.gcd(abs(pi_), abs(qi)) == 1


# ---------------------------------------------------------------------------
# Gukov's A-polynomial pairing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GukovReport:
    """Evaluation table of the stored A-polynomial factors at both candidate
    (L, M) pairs (-exp(-v/2), exp(u/2)) and (-exp(v/2), exp(u/2))."""

    knot: KnotSpec
    u: complex
    v: complex
    l_of_a: complex
    pairs: dict
    magnitudes: dict
    vanishing: tuple
    tol: float

    def pair_vanishes(self, factor_label: str) -> list[str]:
        return [p for (f, p) in self.vanishing if f == factor_label]


def gukov_check(
    knot: KnotSpec,
    u: complex,
    tol: float = 1e-6,
    v: complex | None = None,
    route: str = CLOSED_FORM,
) -> GukovReport:
    """Evaluate the A-polynomial factors at (-exp(-+v/2), exp(u/2)).

    Every stored factor (abelian L-1 and all nonabelian candidates) is
    evaluated at both pairs; the report lists which combinations vanish
    within tol and echoes l(a) = -v/2 - pi*i.  Pass ``v`` explicitly to
    probe a regime directly (e.g. the abelian v = -2*pi*i).
    """
    if knot.kind == UNKNOT:
        raise DomainError("the unknot has no nonabelian A-polynomial pairing")
    u = complex(u)
    if v is None:
        v = v_of_u(knot, u, route=route)
    m = cmath.exp(u / 2.0)
    pairs = {
        "minus": (-cmath.exp(-v / 2.0), m),
        "plus": (-cmath.exp(v / 2.0), m),
    }
    record = a_polynomial(knot)
    magnitudes: dict = {}
    vanishing = []
    for label, poly in record.factors():
        for pname, (L, M) in pairs.items():
            mag = abs(poly(L, M))
            magnitudes[(label, pname)] = mag
            if mag <= tol:
                vanishing.append((label, pname))
    return GukovReport(
        knot=knot,
        u=u,
        v=v,
        l_of_a=-v / 2.0 - 1j * PI,
        pairs=pairs,
        magnitudes=magnitudes,
        vanishing=tuple(vanishing),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# shared root of H and the Alexander polynomial
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SharedRootReport:
    knot: KnotSpec
    root: complex
    h_at_root: complex
    alexander_at_exp_root: complex
    iterations: int
    converged: bool


def _newton_root(f, seed: complex, tol: float, max_iter: int = 120) -> tuple[complex, int, bool]:
    z = complex(seed)
    fz = f(z)
    it = 0
    for it in range(1, max_iter + 1):
        if abs(fz) <= tol:
            break
        df = derivative(f, z, 1e-6)
        if df == 0:
            return z, it, False
        z = z - fz / df
        fz = f(z)
    if abs(fz) > tol:
        return z, it, False
    # the registry roots are double zeros of H: plain Newton runs out of
    # |H|-resolution at |u - u*| ~ sqrt(eps); multiplicity-2 steps recover
    # the root itself to near machine precision
    best, best_f = z, abs(fz)
    for _ in range(10):
        df = derivative(f, z, 1e-6)
        if df == 0:
            break
        step = 2.0 * fz / df
        z = z - step
        fz = f(z)
        if abs(fz) <= best_f:
            best, best_f = z, abs(fz)
        if abs(step) <= 1e-14 * (1.0 + abs(z)):
            break
    return best, it, True


def shared_root_check(knot: KnotSpec, tol: float = 1e-10) -> SharedRootReport:
    """Locate a zero of H(K;.) by Newton's method and test it against
    Delta(K; exp(root)).

    Seeds: +1 for the figure-eight knot (the paper's root is arccosh(3/2)),
    2*pi*i/(ab) - 2*pi*i + 0.1 for torus knots.  Both roots are double zeros
    of H, so plain Newton converges geometrically; the iteration cap is
    sized for that.
    """
    if knot.kind == UNKNOT:
        raise DomainError("shared-root check needs a nontrivial knot")
    if knot.kind == FIGURE_EIGHT:
        seed = 1.0 + 0.0j
    else:
        ab = knot.a * knot.b
        seed = I2PI / ab - I2PI + 0.1
    f = lambda z: h_closed(knot, z)
    root, iters, ok = _newton_root(f, seed, tol=min(tol, 1e-12))
    h_val = f(root)
    ok = abs(h_val) <= tol
    if not ok:
        raise NumericalError(
            f"Newton stalled for {knot.display()} at {root} after {iters} steps, |H|={abs(h_val):.3g}"
        )
    delta = alexander_symmetrized(knot)(cmath.exp(root))
    return SharedRootReport(knot, root, h_val, delta, iters, ok)


def nz_potential(knot: KnotSpec, u: complex, route: str = CLOSED_FORM) -> complex:
    """Neumann-Zagier potential Phi(u) = 4 H(K;u) - 4*pi*i*u."""
    u = complex(u)
    if knot.kind == UNKNOT:
        H = 0.0 + 0.0j
    elif route == CLOSED_FORM:
        H = h_closed(knot, u)
    else:
        H = h_numeric(knot, u).value
    return 4.0 * H - 4j * PI * u


# ---------------------------------------------------------------------------
# abelian regime: J_N against 1/Delta
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MMReport:
    knot: KnotSpec
    u: complex
    N: int
    jn: complex
    delta_inverse: complex
    deviation: float
    tol: float
    within: bool


def mm_check(knot: KnotSpec, u: complex, N: int, tol: float = 1e-2) -> MMReport:
    """Abelian-regime check: |J_N(exp((u+2*pi*i)/N)) - 1/Delta(e^{u+2*pi*i})|.

    Delta uses the symmetric unit normalization (Delta(1) = 1,
    Delta(t) = Delta(1/t)), which is the one the limit selects.  The caller
    keeps u + 2*pi*i small; the default gate is |u + 2*pi*i| <= 0.5.
    """
    u = complex(u)
    w = u + I2PI
    if abs(w) > 0.5:
        raise DomainError(
            f"abelian-regime check expects |u + 2*pi*i| <= 0.5, got {abs(w):.3g}"
        )
    if knot.kind == UNKNOT:
        return MMReport(knot, u, N, 1.0 + 0.0j, 1.0 + 0.0j, 0.0, tol, True)
    t = cmath.exp(w)
    delta = alexander_symmetrized(knot)(t)
    if abs(delta) < 1e-12:
        raise NumericalError(f"Alexander polynomial vanishes at {t}; 1/Delta pole")
    jn = cmath.exp(N * log_jones_scaled(knot, N, u))
    dev = abs(jn - 1.0 / delta)
    return MMReport(knot, u, N, jn, 1.0 / delta, dev, tol, dev <= tol)


# ---------------------------------------------------------------------------
# assembled geometry records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeometryPoint:
    """Everything the conjecture attaches to one deformation parameter u."""

    u: complex
    H: complex
    v: complex
    V: float
    geodesic_length: float
    surgery: tuple[float, float] | None
    err_est: float
    flags: tuple[str, ...]
    source: str


def geometry_point(
    knot: KnotSpec,
    u: complex,
    mode: str = CLOSED_FORM,
    schedule=DEFAULT_SCHEDULE,
) -> GeometryPoint:
    """Assemble the GeometryPoint record at u.

    ``mode`` is ``closed_form``, ``numeric_limit`` or ``both``; *both* uses
    the closed forms and reports |H_numeric - H_closed| as err_est.  The
    closed-form err_est is the residual of v against 2 dH/du - 2*pi*i; for
    torus knots an out-of-region flag marks points outside the asserted
    domain of the closed forms.
    """
    u = complex(u)
    flags: list[str] = []
    if mode not in (CLOSED_FORM, NUMERIC_LIMIT, "both"):
        raise DomainError(f"unknown mode {mode!r}")
    if knot.kind == UNKNOT:
        source = CLOSED_FORM if mode != NUMERIC_LIMIT else NUMERIC_LIMIT
        v = -I2PI
        return GeometryPoint(u, 0.0 + 0.0j, v, 0.0, geodesic_length(u, v),
                             surgery_coefficients(u, v), 0.0, ("abelian",), source)
    if knot.kind == TORUS and not torus_in_region(knot.a, knot.b, u):
        flags.append("out_of_region")

    if mode == NUMERIC_LIMIT:
        est = h_numeric(knot, u, schedule)
        H = est.value
        err = est.error_estimate
        v = v_of_u(knot, u, route=NUMERIC_LIMIT, schedule=schedule)
        source = NUMERIC_LIMIT
    else:
        H = h_closed(knot, u)
        v = v_of_u(knot, u)
        if knot.kind == TORUS:
            # exact v: record the derivative consistency residual
            err = abs(2.0 * derivative(lambda z: h_closed(knot, z), u, 1e-5) - I2PI - v)
        else:
            err = 0.0
        source = CLOSED_FORM
        if mode == "both":
            est = h_numeric(knot, u, schedule)
            err = abs(est.value - H)
    V = volume_from_parts(u, H, v)
    if not math.isfinite(V):
        raise NumericalError(f"volume not finite at u = {u}")
    pq = surgery_coefficients(u, v)
    if pq is None:
        flags.append("surgery_singular")
    elif is_integral_surgery(pq):
        flags.append("integral_surgery")
    return GeometryPoint(
        u=u,
        H=H,
        v=v,
        V=V,
        geodesic_length=geodesic_length(u, v),
        surgery=pq,
        err_est=err,
        flags=tuple(flags),
        source=source,
    )
