"""Knot registry: Alexander polynomials, A-polynomials, exact polynomial
arithmetic and numeric root extraction.

The registry covers the unknot, the figure-eight knot and torus knots
T(a,b) with coprime a, b > 1.  All polynomial data is integer-exact; roots
are polished to residuals below 1e-12.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError

__all__ = [
    "KnotSpec",
    "UnivariatePolynomial",
    "BivariatePolynomial",
    "APolynomial",
    "alexander",
    "alexander_roots",
    "a_polynomial",
    "eval_bivariate",
]

UNKNOT = "unknot"
FIGURE_EIGHT = "figure_eight"
TORUS = "torus"


@dataclass(frozen=True)
class KnotSpec:
    """Which knot: unknot, figure-eight, or torus T(a,b) with coprime a,b > 1."""

    kind: str
    a: int | None = None
    b: int | None = None

    def __post_init__(self):
        if self.kind not in (UNKNOT, FIGURE_EIGHT, TORUS):
            raise DomainError(f"unknown knot kind {self.kind!r}")
        if self.kind == TORUS:
            a, b = self.a, self.b
            if not (isinstance(a, int) and isinstance(b, int)):
                raise DomainError("torus knots need integer parameters a, b")
            if a <= 1 or b <= 1:
                raise DomainError(f"torus parameters must exceed 1, got ({a}, {b})")
            if math.gcd(a, b) != 1:
                raise DomainError(f"torus parameters must be coprime, got ({a}, {b})")
        elif self.a is not None or self.b is not None:
            raise DomainError(f"{self.kind} takes no parameters")

    @classmethod
    def unknot(cls) -> "KnotSpec":
        return cls(UNKNOT)

    @classmethod
    def figure_eight(cls) -> "KnotSpec":
        return cls(FIGURE_EIGHT)

    @classmethod
    def torus(cls, a: int, b: int) -> "KnotSpec":
        return cls(TORUS, a, b)

    @classmethod
    def parse(cls, text: str) -> "KnotSpec":
        """Parse the CLI grammar: ``unknot``, ``fig8``, ``torus:A,B``."""
        t = text.strip().lower()
        if t == "unknot":
            return cls.unknot()
        if t in ("fig8", "figure_eight", "figure-eight"):
            return cls.figure_eight()
        if t.startswith("torus:"):
            body = t[len("torus:"):]
            parts = body.split(",")
            if len(parts) != 2:
                raise DomainError(f"bad torus spec {text!r}, expected torus:A,B")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise DomainError(f"bad torus spec {text!r}: {exc}") from exc
            return cls.torus(a, b)
        raise DomainError(f"unknown knot spec {text!r} (use unknot, fig8, torus:A,B)")

    def display(self) -> str:
        if self.kind == TORUS:
            return f"torus:{self.a},{self.b}"
        return "fig8" if self.kind == FIGURE_EIGHT else "unknot"


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def _strip_zeros(coeffs: Mapping) -> dict:
    return {k: int(c) for k, c in coeffs.items() if c != 0}


@dataclass(frozen=True)
class UnivariatePolynomial:
    """Integer Laurent polynomial, exponent -> coefficient, no zero entries."""

    coefficients: dict

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _strip_zeros(self.coefficients))

    def __call__(self, t: complex):
        if not self.coefficients:
            return 0 if isinstance(t, int) else 0.0 + 0.0j
        lo = min(self.coefficients)
        hi = max(self.coefficients)
        if lo < 0 and t == 0:
            raise DomainError("Laurent polynomial undefined at t = 0")
        # Horner over the dense exponent span, then one power of t^lo
        acc = 0
        for e in range(hi, lo - 1, -1):
            acc = acc * t + self.coefficients.get(e, 0)
        if lo:
            acc = acc * t ** lo
        return acc

    def __mul__(self, other: "UnivariatePolynomial") -> "UnivariatePolynomial":
        out: dict = {}
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return UnivariatePolynomial(out)

    def __sub__(self, other: "UnivariatePolynomial") -> "UnivariatePolynomial":
        out = dict(self.coefficients)
        for e, c in other.coefficients.items():
            out[e] = out.get(e, 0) - c
        return UnivariatePolynomial(out)

    def exact_divide(self, den: "UnivariatePolynomial") -> "UnivariatePolynomial":
        """Long division over the integers; raises if any remainder is left."""
        if not den.coefficients:
            raise DomainError("division by the zero polynomial")
        num = dict(self.coefficients)
        dhi = max(den.coefficients)
        dlead = den.coefficients[dhi]
        quo: dict = {}
        while num:
            nhi = max(num)
            if nhi - dhi < min(num) - min(den.coefficients):
                raise DomainError("polynomial division left a remainder")
            c, r = divmod(num[nhi], dlead)
            if r != 0:
                raise DomainError("polynomial division left a remainder")
            e = nhi - dhi
            quo[e] = quo.get(e, 0) + c
            for de, dc in den.coefficients.items():
                ne = de + e
                v = num.get(ne, 0) - dc * c
                if v:
                    num[ne] = v
                elif ne in num:
                    del num[ne]
        return UnivariatePolynomial(quo)

    def derivative_at(self, t: complex) -> complex:
        acc = 0.0 + 0.0j
        for e, c in self.coefficients.items():
            if e != 0:
                acc += c * e * t ** (e - 1)
        return acc

    def pretty(self, var: str = "t") -> str:
        if not self.coefficients:
            return "0"
        bits = []
        for e in sorted(self.coefficients, reverse=True):
            c = self.coefficients[e]
            if e == 0:
                term = f"{c:+d}"
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                sign = "+" if c > 0 else "-"
                pow_ = var if e == 1 else f"{var}^{e}"
                term = f"{sign}{mag}{pow_}"
            bits.append(term)
        out = "".join(bits)
        return out[1:] if out.startswith("+") else out


def _monomial(e: int, c: int = 1) -> UnivariatePolynomial:
    return UnivariatePolynomial({e: c})


@dataclass(frozen=True)
class BivariatePolynomial:
    """Integer polynomial in (L, M): (L_exp, M_exp) -> coefficient."""

    terms: dict

    def __post_init__(self):
        object.__setattr__(self, "terms", _strip_zeros(self.terms))

    def __call__(self, L: complex, M: complex):
        # Horner in L; each L-slice is a sparse Horner in M
        by_l: dict[int, dict[int, int]] = {}
        for (le, me), c in self.terms.items():
            by_l.setdefault(le, {})[me] = c
        if not by_l:
            return 0 if isinstance(L, int) and isinstance(M, int) else 0.0 + 0.0j
        acc = 0
        prev_e = None
        for le in sorted(by_l, reverse=True):
            inner = _sparse_horner(by_l[le], M)
            if prev_e is None:
                acc = inner
            else:
                acc = acc * L ** (prev_e - le) + inner
            prev_e = le
        if prev_e:
            acc = acc * L ** prev_e
        return acc

    def to_term_lines(self) -> str:
        """One ``coeff L_exp M_exp`` triple per line, exponents sorted."""
        lines = [
            f"{self.terms[key]} {key[0]} {key[1]}"
            for key in sorted(self.terms)
        ]
        return "\n".join(lines)

    @classmethod
    def from_term_lines(cls, text: str) -> "BivariatePolynomial":
        terms: dict = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            c, le, me = line.split()
            key = (int(le), int(me))
            terms[key] = terms.get(key, 0) + int(c)
        return cls(terms)


def _sparse_horner(coeffs: dict[int, int], x: complex):
    acc = 0
    prev_e = None
    for e in sorted(coeffs, reverse=True):
        if prev_e is None:
            acc = coeffs[e]
        else:
            acc = acc * x ** (prev_e - e) + coeffs[e]
        prev_e = e
    if prev_e:
        acc = acc * x ** prev_e
    return acc


def eval_bivariate(p: BivariatePolynomial, L: complex, M: complex):
    """Horner-style evaluation; exact for integer inputs."""
    return p(L, M)


# ---------------------------------------------------------------------------
# Alexander polynomials
# ---------------------------------------------------------------------------


def alexander(knot: KnotSpec) -> UnivariatePolynomial:
    """Exact Alexander polynomial of a registry knot.

    Torus knots use (t^{ab}-1)(t-1) / ((t^a-1)(t^b-1)), computed by exact
    division which must be remainder-free.
    """
    if knot.kind == UNKNOT:
        return UnivariatePolynomial({0: 1})
    if knot.kind == FIGURE_EIGHT:
        return UnivariatePolynomial({2: -1, 1: 3, 0: -1})
    a, b = knot.a, knot.b
    num = (_monomial(a * b) - _monomial(0)) * (_monomial(1) - _monomial(0))
    den = (_monomial(a) - _monomial(0)) * (_monomial(b) - _monomial(0))
    return num.exact_divide(den)


def alexander_symmetrized(knot: KnotSpec) -> UnivariatePolynomial:
    """Alexander polynomial normalized so Delta(t) = Delta(1/t) and Delta(1) = 1.

    This is the unit-normalization under which J_N converges to 1/Delta in
    the abelian (Melvin-Morton) regime; the plain :func:`alexander` output
    differs from it by a unit +-t^k.
    """
    poly = alexander(knot)
    lo, hi = min(poly.coefficients), max(poly.coefficients)
    if (lo + hi) % 2 != 0:
        raise DomainError("Alexander span has odd length; cannot symmetrize")
    shift = -(lo + hi) // 2
    shifted = {e + shift: c for e, c in poly.coefficients.items()}
    sym = UnivariatePolynomial(shifted)
    at_one = sum(sym.coefficients.values())
    if at_one == -1:
        sym = UnivariatePolynomial({e: -c for e, c in sym.coefficients.items()})
    elif at_one != 1:
        raise DomainError(f"Alexander polynomial evaluates to {at_one} at 1")
    return sym


def alexander_roots(knot: KnotSpec) -> list[complex]:
    """All complex roots of the Alexander polynomial, residuals <= 1e-12.

    The unknot has none.  Roots come from the companion matrix and get two
    Newton polishing steps against the exact coefficients.
    """
    if knot.kind == UNKNOT:
        return []
    poly = alexander(knot)
    lo = min(poly.coefficients)
    hi = max(poly.coefficients)
    dense = [poly.coefficients.get(e, 0) for e in range(hi, lo - 1, -1)]
    roots = np.roots(np.array(dense, dtype=float))
    polished = []
    for r in roots:
        z = complex(r)
        for _ in range(3):
            dp = poly.derivative_at(z)
            if dp == 0:
                break
            z = z - poly(z) / dp
        polished.append(z)
    return polished


# ---------------------------------------------------------------------------
# A-polynomials
# ---------------------------------------------------------------------------

ABELIAN_FACTOR = BivariatePolynomial({(1, 0): 1, (0, 0): -1})  # L - 1

# nonabelian factor of the figure-eight knot:
# M^4 L^2 - (M^8 - M^6 - 2 M^4 - M^2 + 1) L + M^4
FIG8_NONABELIAN = BivariatePolynomial(
    {
        (2, 4): 1,
        (1, 8): -1,
        (1, 6): 1,
        (1, 4): 2,
        (1, 2): 1,
        (1, 0): -1,
        (0, 4): 1,
    }
)


@dataclass(frozen=True)
class APolynomial:
    """A-polynomial record: abelian factor plus nonabelian candidate factors.

    For torus knots two convention candidates are stored (they differ by the
    meridian/longitude orientation choice); the geometry checker reports
    which one vanishes rather than committing here.
    """

    knot: KnotSpec
    abelian: BivariatePolynomial
    candidates: tuple[BivariatePolynomial, ...]
    labels: tuple[str, ...]

    def factors(self) -> list[tuple[str, BivariatePolynomial]]:
        out = [("L-1", self.abelian)]
        out.extend(zip(self.labels, self.candidates))
        return out


def a_polynomial(knot: KnotSpec) -> APolynomial:
    """Stored A-polynomial, abelian (L-1) factor included.

    The unknot carries only (L-1).  Torus knots T(a,b) store the candidate
    pair L*M^{ab} + 1 and L + M^{ab} in meridian-eigenvalue variables
    (M = eigenvalue, L = longitude eigenvalue).
    """
    if knot.kind == UNKNOT:
        return APolynomial(knot, ABELIAN_FACTOR, (), ())
    if knot.kind == FIGURE_EIGHT:
        return APolynomial(knot, ABELIAN_FACTOR, (FIG8_NONABELIAN,), ("fig8",))
    ab = knot.a * knot.b
    cand1 = BivariatePolynomial({(1, ab): 1, (0, 0): 1})
    cand2 = BivariatePolynomial({(1, 0): 1, (0, ab): 1})
    return APolynomial(knot, ABELIAN_FACTOR, (cand1, cand2), (f"L*M^{ab}+1", f"L+M^{ab}"))
