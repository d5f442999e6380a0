"""Fractional ideals over degree 1 and 2 totally real fields.

An ideal is stored as a scalar times a primitive module: q * (Z a + Z (b + w))
with integers a >= 1, 0 <= b < a and a | N(b + w), where (1, w) is the
integral basis. Over the rationals the module part degenerates to Z.

Provides ideal arithmetic, prime splitting, enumeration by norm, the
multiplicative functions mu / tau / psi, the principal character, truncated
Dedekind zeta values with rigorous tail bounds, and narrow-class operations
(class representatives, decomposition against them, square roots of classes).
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, NamedTuple, Optional

import mpmath
import numpy as np
import sympy

from .fields import (
    FieldElement,
    FieldError,
    NumberField,
    balanced_representative,
)


class IdealError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Module normal form
# ---------------------------------------------------------------------------


def _rows_to_hnf(rows: list) -> tuple:
    """Canonical basis of the Z-module spanned by coordinate rows (u, v)
    over the basis (1, w). Returns (q, a, b) with the module equal to
    q*(Z a + Z (b + w)); raises on the zero module."""
    den = 1
    for u, v in rows:
        den = den * Fraction(u).denominator // gcd(den, Fraction(u).denominator)
        den = den * Fraction(v).denominator // gcd(den, Fraction(v).denominator)
    int_rows = [(int(Fraction(u) * den), int(Fraction(v) * den)) for u, v in rows]
    # combine to a single row (w0, g) with g = gcd of all second coordinates
    w0, g = 0, 0
    zeros = []
    for u, v in int_rows:
        if v == 0:
            zeros.append(u)
            continue
        gg, x, y = _extgcd(g, v)
        # new second row becomes (x*w0 + y*u, gg); the discarded combination
        # (v/gg)*w0 - (g/gg)*u has second coordinate 0
        zeros.append((v // gg) * w0 - (g // gg) * u)
        w0, g = x * w0 + y * u, gg
    A = 0
    for u in zeros:
        A = gcd(A, u)
    if g == 0:
        if A == 0:
            raise IdealError("zero module")
        return (Fraction(A, den), 1, 0)
    if A == 0:
        raise IdealError("module of rank 1 is not an ideal")
    if A % g:
        raise IdealError("module is not an ideal of the maximal order")
    a = A // g
    b = (w0 // g) % a
    return (Fraction(g, den), a, b)


def _extgcd(x: int, y: int) -> tuple:
    """g, s, t with s*x + t*y = g = gcd(x, y) >= 0."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class FractionalIdeal:
    """Nonzero fractional ideal of the maximal order."""

    __slots__ = ("field", "q", "a", "b", "_factors", "_norm")

    def __init__(self, field: NumberField, q, a: int = 1, b: int = 0):
        q = Fraction(q)
        if q <= 0:
            raise IdealError("scalar must be positive")
        if field.degree == 1:
            a, b = 1, 0
        else:
            if a < 1:
                raise IdealError("module coefficient must be >= 1")
            b %= a
            t, n = field.omega_trace, field.omega_norm
            if (b * b + b * t + n) % a:
                raise IdealError("module is not an ideal: a must divide N(b+w)")
        self.field = field
        self.q = q
        self.a = a
        self.b = b
        self._factors = None
        self._norm = None

    # -- basic data -----------------------------------------------------------

    def norm(self) -> Fraction:
        if self._norm is None:
            if self.field.degree == 1:
                self._norm = self.q
            else:
                self._norm = self.q * self.q * self.a
        return self._norm

    def is_integral(self) -> bool:
        return self.q.denominator == 1

    def basis(self) -> tuple:
        """Z-basis as field elements: (q*a, q*(b+w))."""
        F = self.field
        if F.degree == 1:
            return (F.element(self.q),)
        return (F.element(self.q * self.a), F.element(self.q * self.b, self.q))

    def key(self) -> tuple:
        return (self.norm(), self.a, self.b, self.q)

    def __eq__(self, other):
        return (
            isinstance(other, FractionalIdeal)
            and self.field == other.field
            and self.q == other.q
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.field, self.q, self.a, self.b))

    def __repr__(self):
        if self.field.degree == 1:
            return f"({self.q})"
        return f"{self.q}*[{self.a}, {self.b}+w]"

    # -- arithmetic -------------------------------------------------------------

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        if self.field != other.field:
            raise IdealError("mixed-field ideal product")
        F = self.field
        if F.degree == 1:
            return FractionalIdeal(F, self.q * other.q)
        t, n = F.omega_trace, F.omega_norm
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        rows = [
            (a1 * a2, 0),
            (a1 * b2, a1),
            (a2 * b1, a2),
            (b1 * b2 - n, b1 + b2 + t),
        ]
        q, a, b = _rows_to_hnf(rows)
        return FractionalIdeal(F, self.q * other.q * q, a, b)

    def conjugate(self) -> "FractionalIdeal":
        F = self.field
        if F.degree == 1:
            return self
        t = F.omega_trace
        # conj(b + w) = (b + t) - w
        rows = [(self.a, 0), (self.b + t, -1)]
        q, a, b = _rows_to_hnf(rows)
        return FractionalIdeal(F, self.q * q, a, b)

    def inverse(self) -> "FractionalIdeal":
        conj = self.conjugate()
        return FractionalIdeal(
            conj.field, conj.q / self.norm(), conj.a, conj.b
        )

    def __pow__(self, k: int) -> "FractionalIdeal":
        out = unit_ideal(self.field)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __truediv__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        return self * other.inverse()

    def __add__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        """Ideal sum (= gcd)."""
        if self.field != other.field:
            raise IdealError("mixed-field ideal sum")
        F = self.field
        if F.degree == 1:
            num = gcd(
                self.q.numerator * other.q.denominator,
                other.q.numerator * self.q.denominator,
            )
            return FractionalIdeal(F, Fraction(num, self.q.denominator * other.q.denominator))
        rows = [
            (self.q * self.a, 0),
            (self.q * self.b, self.q),
            (other.q * other.a, 0),
            (other.q * other.b, other.q),
        ]
        q, a, b = _rows_to_hnf(rows)
        return FractionalIdeal(F, q, a, b)

    def intersect(self, other: "FractionalIdeal") -> "FractionalIdeal":
        return (self * other) / (self + other)

    def contains(self, x: FieldElement) -> bool:
        if x.field != self.field:
            raise IdealError("element from the wrong field")
        if x.is_zero():
            return True
        if self.field.degree == 1:
            return (Fraction(x.a) / self.q).denominator == 1
        v = x.b / self.q
        if v.denominator != 1:
            return False
        u = x.a / self.q - v * self.b
        return u.denominator == 1 and int(u) % self.a == 0

    def divides(self, other: "FractionalIdeal") -> bool:
        """self | other, i.e. other is contained in self."""
        return (other / self).is_integral()

    def is_coprime(self, other: "FractionalIdeal") -> bool:
        return (self + other).norm() == 1

    # -- factorization ------------------------------------------------------------

    def factorization(self) -> dict:
        """Exact factorization {PrimeIdeal: exponent} (negative allowed)."""
        if self._factors is not None:
            return dict(self._factors)
        F = self.field
        out = {}
        num, den = self.q.numerator, self.q.denominator
        support = set(sympy.factorint(num * self.a if F.degree == 2 else num))
        support |= set(sympy.factorint(den))
        norm_val = {p: 0 for p in support}
        nn, nd = self.norm().numerator, self.norm().denominator
        for p in support:
            while nn % p == 0:
                nn //= p
                norm_val[p] += 1
            while nd % p == 0:
                nd //= p
                norm_val[p] -= 1
        for p in sorted(support):
            primes = prime_splitting(F, p)
            total = norm_val[p]
            if len(primes) == 1:
                # inert (f=2) or ramified (e=2) or degree 1: the exponent is
                # forced by the norm valuation alone
                P = primes[0]
                v = total // P.f
                if v:
                    out[P] = v
            else:
                P1, P2 = primes
                v1 = self.valuation(P1)
                v2 = total - v1
                if v1:
                    out[P1] = v1
                if v2:
                    out[P2] = v2
        self._factors = dict(out)
        return out

    def valuation(self, P: "PrimeIdeal") -> int:
        """Exact exponent of the prime P in this ideal."""
        # scale to an integral ideal, count divisions, undo the scaling
        den = self.q.denominator
        I = FractionalIdeal(self.field, self.q * den, self.a, self.b)
        v = 0
        while P.ideal.divides(I):
            I = I / P.ideal
            v += 1
        return v - den_valuation(den, P)

    def smallest_integer(self) -> Fraction:
        """The positive generator of (self intersect Q)."""
        if self.field.degree == 1:
            return self.q
        return self.q * self.a


def den_valuation(den: int, P: "PrimeIdeal") -> int:
    """Valuation of the rational integer den at P."""
    if den == 1:
        return 0
    v = 0
    p = P.p
    while den % p == 0:
        den //= p
        v += 1
    return v * P.e


def unit_ideal(field: NumberField) -> FractionalIdeal:
    return FractionalIdeal(field, 1, 1, 0)


def principal_ideal(x: FieldElement) -> FractionalIdeal:
    """The fractional ideal generated by a nonzero element."""
    if x.is_zero():
        raise IdealError("zero generates the zero module")
    F = x.field
    if F.degree == 1:
        return FractionalIdeal(F, abs(x.a))
    xw = x * F.element(0, 1)
    q, a, b = _rows_to_hnf([(x.a, x.b), (xw.a, xw.b)])
    return FractionalIdeal(F, q, a, b)


def ideal_from_norm_one_generators(field, gens: Iterable[FieldElement]) -> FractionalIdeal:
    """Ideal generated by finitely many field elements."""
    rows = []
    w = field.element(0, 1) if field.degree == 2 else None
    for g in gens:
        rows.append((g.a, g.b))
        if w is not None:
            gw = g * w
            rows.append((gw.a, gw.b))
    q, a, b = _rows_to_hnf(rows)
    return FractionalIdeal(field, q, a, b)


# ---------------------------------------------------------------------------
# Prime splitting
# ---------------------------------------------------------------------------


class PrimeIdeal:
    """Maximal ideal above a rational prime p, with residue degree f and
    ramification index e."""

    __slots__ = ("field", "p", "e", "f", "ideal")

    def __init__(self, field: NumberField, p: int, e: int, f: int, ideal: FractionalIdeal):
        self.field = field
        self.p = p
        self.e = e
        self.f = f
        self.ideal = ideal

    def norm(self) -> int:
        return self.p ** self.f

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.ideal == other.ideal

    def __hash__(self):
        return hash(("prime", self.ideal))

    def __repr__(self):
        return f"P({self.p}; e={self.e}, f={self.f}, {self.ideal})"


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n >= 1."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if n < 0:
        raise ValueError("only positive lower arguments are needed here")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    # Jacobi symbol (a|n) for odd n >= 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


_split_cache: dict = {}


def prime_splitting(field: NumberField, p: int) -> list:
    """All primes above p, sorted deterministically."""
    key = (field.D, p)
    if key in _split_cache:
        return _split_cache[key]
    if not sympy.isprime(p):
        raise IdealError("prime_splitting needs a rational prime")
    if field.degree == 1:
        out = [PrimeIdeal(field, p, 1, 1, FractionalIdeal(field, p))]
        _split_cache[key] = out
        return out
    disc = field.discriminant
    t, n = field.omega_trace, field.omega_norm
    if disc % p == 0:
        # ramified: double root of x^2 + t x + n mod p
        if p == 2:
            b = next(x for x in (0, 1) if (x * x + x * t + n) % 2 == 0)
        else:
            b = (-t * pow(2, -1, p)) % p
        out = [PrimeIdeal(field, p, 2, 1, FractionalIdeal(field, 1, p, b))]
    elif kronecker_symbol(disc, p) == 1:
        if p == 2:
            roots = [0, 1]
        else:
            s = sympy.ntheory.sqrt_mod(disc, p)
            inv2 = pow(2, -1, p)
            roots = sorted({((-t + s) * inv2) % p, ((-t - s) * inv2) % p})
        out = [
            PrimeIdeal(field, p, 1, 1, FractionalIdeal(field, 1, p, b))
            for b in roots
        ]
    else:
        out = [PrimeIdeal(field, p, 1, 2, FractionalIdeal(field, p))]
    _split_cache[key] = out
    return out


def prime_ideals_up_to(field: NumberField, X) -> list:
    """All prime ideals of norm <= X, sorted by (norm, module data)."""
    out = []
    for p in sympy.primerange(2, int(X) + 1):
        for P in prime_splitting(field, p):
            if P.norm() <= X:
                out.append(P)
    out.sort(key=lambda P: (P.norm(), P.ideal.a, P.ideal.b, P.ideal.q))
    return out


def different_ideal(field: NumberField) -> FractionalIdeal:
    """The different; its norm is |field discriminant|."""
    if field.degree == 1:
        return unit_ideal(field)
    # generated by the minimal-polynomial derivative at w, i.e. 2w - t:
    # sqrt(D) when D = 1 mod 4, else 2 sqrt(D)
    gen = field.element(-field.omega_trace, 2)
    return principal_ideal(gen)


# ---------------------------------------------------------------------------
# Enumeration and multiplicative functions
# ---------------------------------------------------------------------------


def enumerate_ideals(field: NumberField, X) -> list:
    """All integral ideals of norm <= X, sorted by norm with a deterministic
    tie-break. Factorizations are attached as they are known exactly."""
    if X < 1:
        return []
    X = int(math.floor(X))
    if field.degree == 1:
        out = []
        for m in range(1, X + 1):
            I = FractionalIdeal(field, m)
            I._factors = {
                prime_splitting(field, p)[0]: e for p, e in sympy.factorint(m).items()
            }
            out.append(I)
        return out
    primes = prime_ideals_up_to(field, X)
    results = [(unit_ideal(field), {})]
    for P in primes:
        NP = P.norm()
        extended = list(results)
        for I, fac in results:
            J, e = I, 0
            while I.norm() * NP ** (e + 1) <= X:
                e += 1
                J = J * P.ideal
                newfac = dict(fac)
                newfac[P] = e
                extended.append((J, newfac))
        results = extended
    out = []
    for I, fac in results:
        I._factors = fac
        out.append(I)
    out.sort(key=lambda I: I.key())
    return out


def _require_integral(I: FractionalIdeal):
    if not I.is_integral():
        raise IdealError("integral ideal required")


def moebius(I: FractionalIdeal) -> int:
    _require_integral(I)
    fac = I.factorization()
    if any(e >= 2 for e in fac.values()):
        return 0
    return (-1) ** len(fac)


def tau(I: FractionalIdeal) -> int:
    """Number of integral divisors."""
    _require_integral(I)
    out = 1
    for e in I.factorization().values():
        out *= e + 1
    return out


def psi(I: FractionalIdeal) -> Fraction:
    """Multiplicative: product over prime divisors of (1 + 1/N(P))."""
    _require_integral(I)
    out = Fraction(1)
    for P in I.factorization():
        out *= 1 + Fraction(1, P.norm())
    return out


def divisors(I: FractionalIdeal) -> list:
    """All integral divisors, sorted by norm."""
    _require_integral(I)
    fac = list(I.factorization().items())
    out = [unit_ideal(I.field)]
    for P, e in fac:
        out = [D * P.ideal ** k for D in out for k in range(e + 1)]
    out.sort(key=lambda D: D.key())
    return out


def principal_character(d: FractionalIdeal, q: FractionalIdeal) -> int:
    """1 unless q divides d."""
    return 0 if q.divides(d) else 1


# ---------------------------------------------------------------------------
# Dedekind zeta (convergence region only)
# ---------------------------------------------------------------------------


class ZetaResult(NamedTuple):
    value: object          # mpf or mpc
    error_bound: object    # mpf, rigorous


def dedekind_zeta(field: NumberField, s, terms: int = 100000,
                  exclude: Optional[FractionalIdeal] = None,
                  route: str = "auto") -> ZetaResult:
    """Dedekind zeta at s with Re(s) > 1, with a rigorous tail bound.

    route "factored" (default for degree 2) uses zeta(s) * L(s, chi_disc)
    with an Abel-summation tail bound on the character series; route "euler"
    uses the truncated Euler product over prime ideals of norm <= terms.
    If exclude is given, the local factor of that (prime) ideal is removed.
    """
    s = mpmath.mpc(s) if mpmath.im(s) != 0 else mpmath.mpf(s)
    sigma = mpmath.re(s)
    if sigma <= 1:
        raise IdealError("continuation not supported")
    if route == "auto":
        route = "direct" if field.degree == 1 else "factored"
    if field.degree == 1 and route in ("direct", "factored"):
        value = mpmath.zeta(s)
        err = mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))
    elif route == "factored":
        zq = mpmath.zeta(s)
        lval, lerr = _l_character(field.discriminant, s, terms)
        value = zq * lval
        err = abs(zq) * lerr + mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)) * abs(lval)
    elif route == "euler":
        value, err = _zeta_euler(field, s, terms)
    else:
        raise IdealError(f"unknown zeta route: {route!r}")
    if exclude is not None:
        factor = 1 - mpmath.mpf(int(exclude.norm())) ** (-s)
        value = value * factor
        err = err * abs(factor)
    return ZetaResult(value, err)


def _l_character(disc: int, s, terms: int) -> tuple:
    """L(s, chi_disc) by direct summation with an Abel tail bound.

    The symbol n -> (disc|n) is periodic mod disc, so one period of values
    suffices; the sum itself is vectorized in double precision and a float
    rounding allowance is folded into the reported bound."""
    sigma = mpmath.re(s)
    pattern = np.array([kronecker_symbol(disc, r) for r in range(disc)], dtype=np.float64)
    chi = np.tile(pattern, terms // disc + 2)[1:terms + 1]
    n = np.arange(1, terms + 1, dtype=np.float64)
    if mpmath.im(s) == 0:
        total = float(np.dot(chi, n ** (-float(sigma))))
        value = mpmath.mpf(total)
    else:
        sc = complex(s)
        total = complex(np.dot(chi.astype(np.complex128), np.exp(-sc * np.log(n))))
        value = mpmath.mpc(total)
    # partial sums of chi are bounded by disc; Abel summation on the tail,
    # plus a generous double-precision rounding allowance
    tail = abs(s) * disc * mpmath.mpf(terms) ** (-sigma) / sigma + mpmath.mpf("1e-12")
    return value, tail


def _zeta_euler(field: NumberField, s, terms: int) -> tuple:
    sigma = mpmath.re(s)
    value = mpmath.mpf(1) if mpmath.im(s) == 0 else mpmath.mpc(1)
    if field.degree == 1:
        for p in sympy.primerange(2, terms + 1):
            value /= 1 - mpmath.mpf(p) ** (-s)
        log_tail = 2 * mpmath.mpf(terms) ** (1 - sigma) / (sigma - 1)
    else:
        for P in prime_ideals_up_to(field, terms):
            value /= 1 - mpmath.mpf(P.norm()) ** (-s)
        # missing split/ramified primes have norm > terms (rational p > terms);
        # missing inert primes have p > sqrt(terms)
        log_tail = 2 * (
            2 * mpmath.mpf(terms) ** (1 - sigma) / (sigma - 1)
            + mpmath.mpf(terms) ** ((1 - 2 * sigma) / 2) / (2 * sigma - 1)
        )
    return value, abs(value) * mpmath.expm1(log_tail)


# ---------------------------------------------------------------------------
# Narrow class operations
# ---------------------------------------------------------------------------


def ideal_form(I: FractionalIdeal) -> tuple:
    """Integral binary quadratic form (A, B, C) of the ideal's Z-basis,
    of discriminant equal to the field discriminant."""
    F = I.field
    if F.degree == 1:
        raise IdealError("forms need a quadratic field")
    alpha, beta = I.basis()
    nI = I.norm()
    A = Fraction(alpha.norm()) / nI
    B = Fraction((alpha * beta.conjugate()).trace()) / nI
    C = Fraction(beta.norm()) / nI
    if A.denominator != 1 or B.denominator != 1 or C.denominator != 1:
        raise IdealError("basis form is not integral")
    A, B, C = int(A), int(B), int(C)
    if B * B - 4 * A * C != F.discriminant:
        raise IdealError("form discriminant mismatch")
    return (A, B, C)


def _rho_tracked(form: tuple, disc: int) -> tuple:
    """One reduction step and the SL2 column transform that realizes it."""
    a, b, c = form
    ac = abs(c)
    srt = isqrt(disc)
    r0 = (-b) % (2 * ac)
    if ac * ac > disc:
        r = r0 if r0 <= ac else r0 - 2 * ac
    else:
        r = srt - ((srt - r0) % (2 * ac))
    s = (b + r) // (2 * c)
    new = (c, r, (r * r - disc) // (4 * c))
    return new, (0, -1, 1, s)


def narrow_principal_generator(I: FractionalIdeal) -> Optional[FieldElement]:
    """A totally positive generator if the ideal is principal in the narrow
    sense, else None. Deterministic (canonical form-cycle walk, balanced)."""
    F = I.field
    if F.degree == 1:
        return F.element(I.q)
    from .fields import _is_reduced  # same package, shared reduction logic

    disc = F.discriminant
    alpha, beta = I.basis()
    form = ideal_form(I)
    # track the change of basis while reducing, then walk the cycle once
    v11, v12, v21, v22 = 1, 0, 0, 1
    steps = 0
    while not _is_reduced(form, disc):
        form, (u11, u12, u21, u22) = _rho_tracked(form, disc)
        v11, v12, v21, v22 = (
            v11 * u11 + v12 * u21,
            v11 * u12 + v12 * u22,
            v21 * u11 + v22 * u21,
            v21 * u12 + v22 * u22,
        )
        steps += 1
        if steps > 10000:
            raise IdealError("form reduction did not terminate")
    start = form
    while True:
        if form[0] == 1:
            xi = alpha * v11 + beta * v21
            if not xi.is_totally_positive():
                xi = -xi
            bal, _ = balanced_representative(xi)
            return bal
        form, (u11, u12, u21, u22) = _rho_tracked(form, disc)
        v11, v12, v21, v22 = (
            v11 * u11 + v12 * u21,
            v11 * u12 + v12 * u22,
            v21 * u11 + v22 * u21,
            v21 * u12 + v22 * u22,
        )
        if form == start:
            return None


def is_narrowly_principal(I: FractionalIdeal) -> bool:
    return narrow_principal_generator(I) is not None


_reps_cache: dict = {}


def narrow_class_representatives(field: NumberField, coprime_norm: int = 1) -> list:
    """Fixed ordered representatives of the narrow classes: integral ideals
    of minimal norm coprime to coprime_norm, the unit ideal first."""
    key = (field.D, coprime_norm)
    if key in _reps_cache:
        return _reps_cache[key]
    reps = [unit_ideal(field)]
    hp = field.narrow_class_number()
    X = 8
    while len(reps) < hp:
        for I in enumerate_ideals(field, X):
            if I.norm() <= 1:
                continue
            if math.gcd(int(I.norm()), coprime_norm) != 1:
                continue
            if any(is_narrowly_principal(I / r) for r in reps):
                continue
            reps.append(I)
            if len(reps) == hp:
                break
        X *= 4
        if X > 10 ** 7:
            raise IdealError("could not find class representatives")
    _reps_cache[key] = reps
    return reps


def decompose_to_class_rep(I: FractionalIdeal, coprime_norm: int = 1) -> tuple:
    """(representative, xi) with I = xi * representative, xi totally positive
    and balanced; the representative is from the fixed ordered list."""
    for rep in narrow_class_representatives(I.field, coprime_norm):
        xi = narrow_principal_generator(I / rep)
        if xi is not None:
            return rep, xi
    raise IdealError("no class representative matched (broken class data)")


def class_square_roots(field: NumberField, target: FractionalIdeal,
                       coprime_norm: int = 1) -> list:
    """All fixed representatives c with c^2 in the narrow class of target."""
    reps = narrow_class_representatives(field, coprime_norm)
    return [c for c in reps if is_narrowly_principal((c * c) / target)]


def totally_positive_generator(I: FractionalIdeal) -> FieldElement:
    """Canonical totally positive generator of a narrowly principal ideal."""
    xi = narrow_principal_generator(I)
    if xi is None:
        raise IdealError("ideal is not narrowly principal")
    return xi
