"""Totally real base fields: the rationals and real quadratic fields.

Exact arithmetic (rational coordinates over an integral basis), high-precision
real embeddings, fundamental units, totally positive unit groups, and the
narrow class number via cycles of reduced indefinite binary quadratic forms.

Degree is restricted to 1 and 2, but every interface is written against the
generic degree-d contract so callers never special-case the base field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Optional

import mpmath

# Working precision (decimal digits) for real embeddings.
DEFAULT_DPS = 64

Rational = Fraction | int


def _mpf(x: Fraction | int) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)
    return mpmath.mpf(x)


def _is_squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 2
    return True


class FieldError(ValueError):
    pass


class NumberField:
    """A totally real number field of degree 1 or 2.

    Quadratic fields are Q(sqrt(D)) for squarefree D > 1, with integral basis
    (1, w) where w = (1+sqrt(D))/2 if D = 1 mod 4 and w = sqrt(D) otherwise.
    The rationals use the degenerate basis (1,).

    Instances are immutable; all mutable state is write-once caching.
    """

    def __init__(self, D: Optional[int] = None, dps: int = DEFAULT_DPS):
        self.D = D
        self.dps = dps
        if D is None:
            self.degree = 1
            self.discriminant = 1
            # Degenerate quadratic data so element arithmetic is uniform.
            self.omega_trace = 0
            self.omega_norm = 0
        else:
            if D <= 1:
                raise FieldError("radicand must be a positive integer > 1")
            if not _is_squarefree(D):
                raise FieldError("radicand must be squarefree")
            self.degree = 2
            if D % 4 == 1:
                self.discriminant = D
                self.omega_trace = 1          # w + w' for w = (1+sqrt(D))/2
                self.omega_norm = (1 - D) // 4
            else:
                self.discriminant = 4 * D
                self.omega_trace = 0          # w = sqrt(D)
                self.omega_norm = -D
        with mpmath.workdps(self.dps + 16):
            self._sqrtD = mpmath.sqrt(D) if D is not None else mpmath.mpf(0)
        self._fundamental_unit: Optional[FieldElement] = None
        self._h_plus: Optional[int] = None

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.D == self.D

    def __hash__(self):
        return hash(("NumberField", self.D))

    def __repr__(self):
        return "Q" if self.D is None else f"Q(sqrt{self.D})"

    # -- elements ---------------------------------------------------------

    def element(self, a: Rational, b: Rational = 0) -> "FieldElement":
        a = Fraction(a)
        b = Fraction(b)
        if self.degree == 1 and b != 0:
            raise FieldError("rational field elements have a single coordinate")
        return FieldElement(self, a, b)

    def one(self) -> "FieldElement":
        return self.element(1)

    def zero(self) -> "FieldElement":
        return self.element(0)

    def sqrt_disc(self) -> mpmath.mpf:
        """sqrt(D) at working precision (0 for the rationals)."""
        return self._sqrtD

    def omega_embeddings(self) -> tuple:
        if self.degree == 1:
            return (mpmath.mpf(0),)
        if self.D % 4 == 1:
            return ((1 + self._sqrtD) / 2, (1 - self._sqrtD) / 2)
        return (self._sqrtD, -self._sqrtD)

    # -- units ------------------------------------------------------------

    def fundamental_unit(self) -> Optional["FieldElement"]:
        """The fundamental unit > 1 of the maximal order; None over Q."""
        if self.degree == 1:
            return None
        if self._fundamental_unit is None:
            self._fundamental_unit = _fundamental_unit(self)
        return self._fundamental_unit

    def regulator(self) -> mpmath.mpf:
        if self.degree == 1:
            return mpmath.mpf(0)
        eps = self.fundamental_unit()
        with mpmath.workdps(self.dps + 16):
            return mpmath.log(abs(eps.embeddings()[0]))

    def class_number(self) -> int:
        """Ordinary class number h, from h+ and the norm of the unit."""
        if self.degree == 1:
            return 1
        hp = self.narrow_class_number()
        if self.fundamental_unit().norm() == -1:
            return hp
        return hp // 2

    def narrow_class_number(self) -> int:
        if self.degree == 1:
            return 1
        if self._h_plus is None:
            self._h_plus = len(form_cycles(self.discriminant))
        return self._h_plus

    def zeta_residue(self) -> mpmath.mpf:
        """Residue at s=1 of the Dedekind zeta function (class number formula)."""
        if self.degree == 1:
            return mpmath.mpf(1)
        h = self.class_number()
        with mpmath.workdps(self.dps + 16):
            return 2 * h * self.regulator() / mpmath.sqrt(self.discriminant)

    def different_ideal(self):
        """The different of the maximal order; norm = |discriminant|."""
        from . import ideals

        return ideals.different_ideal(self)

    def narrow_class_representatives(self, coprime_norm: int = 1) -> list:
        """Fixed ordered integral representatives of the narrow classes,
        unit ideal first, minimal norm coprime to coprime_norm."""
        from . import ideals

        return ideals.narrow_class_representatives(self, coprime_norm)


@dataclass(frozen=True)
class FieldElement:
    """Element a + b*w with exact rational coordinates over the integral basis."""

    field: NumberField
    a: Fraction
    b: Fraction

    # -- ring operations (exact) -------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __mul__(self, other):
        other = self._coerce(other)
        t, n = self.field.omega_trace, self.field.omega_norm
        # (a1 + b1 w)(a2 + b2 w) with w^2 = t w - n
        a = self.a * other.a - self.b * other.b * n
        b = self.a * other.b + self.b * other.a + self.b * other.b * t
        return FieldElement(self.field, a, b)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __truediv__(self, other):
        other = self._coerce(other)
        nrm = other.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero field element")
        inv = other.conjugate() * FieldElement(self.field, Fraction(1, 1) / nrm, Fraction(0))
        return self * inv

    def __pow__(self, k: int):
        if k < 0:
            return self.field.one() / (self ** (-k))
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("mixed-field arithmetic")
            return other
        return FieldElement(self.field, Fraction(other), Fraction(0))

    # -- invariants ---------------------------------------------------------

    def conjugate(self) -> "FieldElement":
        t = self.field.omega_trace
        return FieldElement(self.field, self.a + self.b * t, -self.b)

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.field.omega_trace

    def norm(self) -> Fraction:
        if self.field.degree == 1:
            return self.a
        return self.a * self.a + self.a * self.b * self.field.omega_trace \
            + self.b * self.b * self.field.omega_norm

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    # -- embeddings ----------------------------------------------------------

    def embeddings(self) -> tuple:
        """Images under the d real embeddings, as high-precision reals."""
        with mpmath.workdps(self.field.dps + 16):
            if self.field.degree == 1:
                return (_mpf(self.a),)
            out = []
            for w in self.field.omega_embeddings():
                out.append(_mpf(self.a) + _mpf(self.b) * w)
            return tuple(out)

    def signs(self) -> tuple:
        """Exact signs (+1, 0, -1) under each embedding; no floating point."""
        if self.field.degree == 1:
            s = (self.a > 0) - (self.a < 0)
            return (s,)
        D = self.field.D
        # embedding j: p + q*sqrt(D) with exact rationals p, q
        if D % 4 == 1:
            p = self.a + self.b / 2
            q = self.b / 2
        else:
            p, q = self.a, self.b
        return (_sign_p_plus_q_sqrtD(p, q, D), _sign_p_plus_q_sqrtD(p, -q, D))

    def is_totally_positive(self) -> bool:
        if self.is_zero():
            return False
        return all(s > 0 for s in self.signs())

    def __repr__(self):
        if self.field.degree == 1 or self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*w)"


def _sign_p_plus_q_sqrtD(p: Fraction, q: Fraction, D: int) -> int:
    """Exact sign of p + q*sqrt(D) for rational p, q."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return 1 if q > 0 else -1
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    # mixed signs: compare p^2 with q^2 D; the larger magnitude wins
    lhs = p * p
    rhs = q * q * D
    if lhs == rhs:
        return 0
    if p > 0:
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1


# ---------------------------------------------------------------------------
# Fundamental units
# ---------------------------------------------------------------------------


def _pell_fundamental(D: int) -> tuple[int, int, int]:
    """Fundamental solution of x^2 - D y^2 = +-1 by the continued fraction
    of sqrt(D). Returns (x, y, norm)."""
    a0 = isqrt(D)
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if a == 2 * a0:
            # period complete at the previous convergent
            x, y = p_prev, q_prev
            return x, y, x * x - D * y * y


def _fundamental_unit(field: NumberField) -> FieldElement:
    D = field.D
    x, y, nrm = _pell_fundamental(D)
    # unit of Z[sqrt(D)] as an element over the integral basis
    if D % 4 == 1:
        unit = _from_sqrtD_coords(field, x, y)
        # The maximal order may contain its cube root (index 3 in the units).
        root = _try_cube_root(field, unit, nrm)
        if root is not None:
            return root
        return unit
    return _from_sqrtD_coords(field, x, y)


def _from_sqrtD_coords(field: NumberField, x: int, y: int) -> FieldElement:
    """Element x + y*sqrt(D) in integral-basis coordinates."""
    if field.D % 4 == 1:
        # x + y sqrt(D) = (x - y) + 2y * (1+sqrt(D))/2
        return field.element(Fraction(x - y), Fraction(2 * y))
    return field.element(Fraction(x), Fraction(y))


def _try_cube_root(field: NumberField, unit: FieldElement, nrm: int) -> Optional[FieldElement]:
    """Cube root of a unit inside the maximal order, if it exists there."""
    with mpmath.workdps(40):
        u = _mpf(unit.a) + _mpf(unit.b) * field.omega_embeddings()[0]
        e = mpmath.cbrt(u)
        # candidate trace: e + nrm/e since the conjugate of e is nrm/e
        t = e + nrm / e
        t_int = int(mpmath.nint(t))
    if abs(Fraction(t_int)) < 1:
        return None
    # solve z^2 - t z + nrm = 0 over the field: z = (t + sqrt(t^2-4 nrm))/2
    disc = t_int * t_int - 4 * nrm
    if disc <= 0:
        return None
    # need disc = D * y^2 for the candidate to live in Q(sqrt(D))
    D = field.D
    y2, rem = divmod(disc, D)
    if rem != 0:
        return None
    y = isqrt(y2)
    if y * y != y2:
        return None
    cand = _from_sqrtD_coords_half(field, t_int, y)
    if cand is None:
        return None
    if (cand ** 3) == unit:
        return cand
    return None


def _from_sqrtD_coords_half(field: NumberField, t: int, y: int) -> Optional[FieldElement]:
    """Element (t + y*sqrt(D))/2 if it is an algebraic integer of the field."""
    cand = None
    if field.D % 4 == 1:
        if (t - y) % 2 == 0:
            cand = field.element(Fraction(t - y, 2), Fraction(y))
    else:
        if t % 2 == 0 and y % 2 == 0:
            cand = field.element(Fraction(t, 2), Fraction(y, 2))
    if cand is not None and cand.norm().denominator == 1:
        return cand
    return None


def totally_positive_fundamental_unit(field: NumberField) -> Optional[FieldElement]:
    """Generator of the totally positive units modulo nothing: the smallest
    totally positive unit > 1. None over Q (the group is trivial)."""
    if field.degree == 1:
        return None
    eps = field.fundamental_unit()
    if eps.norm() == 1:
        return eps          # norm +1 and eps > 1 forces total positivity
    return eps * eps


def totally_positive_units_mod_squares(field: NumberField) -> list:
    """Representatives of the totally positive units modulo unit squares,
    with 1 listed first."""
    one = field.one()
    if field.degree == 1:
        return [one]
    eps = field.fundamental_unit()
    if eps.norm() == 1:
        return [one, eps]
    return [one]


def unit_window(field: NumberField, bound: float) -> list:
    """All totally positive units whose embeddings all have absolute value
    <= bound. Requires bound > 1; symmetric under eta -> 1/eta."""
    if not bound > 1:
        raise FieldError("unit window bound must exceed 1")
    one = field.one()
    if field.degree == 1:
        return [one]
    gen = totally_positive_fundamental_unit(field)
    g = float(gen.embeddings()[0])
    m_max = int(math.floor(math.log(float(bound)) / math.log(g))) + 1
    bound_fr = Fraction(bound)
    out = []
    for m in range(-m_max, m_max + 1):
        u = gen ** m
        if _max_abs_embedding_leq(u, bound_fr):
            out.append(u)
    return out


def _max_abs_embedding_leq(x: FieldElement, bound: Fraction) -> bool:
    """Exact test max_j |x^(j)| <= bound."""
    D = x.field.D
    if x.field.degree == 1:
        return abs(x.a) <= bound
    if D % 4 == 1:
        p, q = x.a + x.b / 2, x.b / 2
    else:
        p, q = x.a, x.b
    for qq in (q, -q):
        # |p + qq sqrt(D)| <= bound  <=>  -bound <= p + qq sqrt(D) <= bound
        if _sign_p_plus_q_sqrtD(p - bound, qq, D) > 0:
            return False
        if _sign_p_plus_q_sqrtD(p + bound, qq, D) < 0:
            return False
    return True


def balanced_representative(x: FieldElement, window: int = 64) -> tuple:
    """Scale x by a totally positive unit to flatten its embedding spread.

    Minimizes max_j |(u x)^(j)| / min_j |(u x)^(j)| over u in the window
    {g^m : |m| <= window} for the totally positive fundamental unit g,
    with deterministic tie-break toward the smallest |m| (then smallest m).
    Returns (element, achieved_ratio_float).
    """
    if x.is_zero():
        raise FieldError("cannot balance zero")
    if x.field.degree == 1:
        return x, 1.0
    gen = totally_positive_fundamental_unit(x.field)
    lg = mpmath.log(gen.embeddings()[0])        # log of first embedding, > 0
    e1, e2 = (mpmath.log(abs(t)) for t in x.embeddings())
    # |log ratio| of g^m x is |(e1 - e2) + 2 m lg|; minimize over integers
    m0 = mpmath.nint(-(e1 - e2) / (2 * lg))
    best = None
    for m in sorted(range(int(m0) - 2, int(m0) + 3), key=lambda t: (abs(t), t)):
        if abs(m) > window:
            continue
        spread = abs((e1 - e2) + 2 * m * lg)
        if best is None or spread < best[0] - mpmath.mpf(10) ** (-30):
            best = (spread, m)
    if best is None:
        best = (abs(e1 - e2), 0)
    m = best[1]
    out = x * gen ** m
    ratio = float(mpmath.exp(best[0]))
    return out, ratio


# ---------------------------------------------------------------------------
# Indefinite binary quadratic forms: narrow class machinery
# ---------------------------------------------------------------------------


def _is_reduced(form: tuple, disc: int) -> bool:
    a, b, c = form
    if b <= 0 or b * b >= disc:
        return False
    t = 2 * abs(a)
    # |sqrt(disc) - 2|a|| < b  and  b < sqrt(disc)
    if (t - b) >= 0 and (t - b) * (t - b) >= disc:
        return False
    if (t + b) * (t + b) <= disc:
        return False
    return True


def _rho(form: tuple, disc: int) -> tuple:
    """Reduction / cycle step for indefinite forms."""
    a, b, c = form
    ac = abs(c)
    s = isqrt(disc)
    r0 = (-b) % (2 * ac)
    if ac * ac > disc:
        r = r0 if r0 <= ac else r0 - 2 * ac
    else:
        r = s - ((s - r0) % (2 * ac))
    return (c, r, (r * r - disc) // (4 * c))


def reduce_form(form: tuple, disc: int) -> tuple:
    steps = 0
    while not _is_reduced(form, disc):
        form = _rho(form, disc)
        steps += 1
        if steps > 10000:
            raise FieldError("form reduction did not terminate")
    return form


def form_cycle(form: tuple, disc: int) -> frozenset:
    """The cycle of reduced forms containing the reduction of the given form."""
    f = reduce_form(form, disc)
    seen = [f]
    g = _rho(f, disc)
    while g != f:
        seen.append(g)
        g = _rho(g, disc)
    return frozenset(seen)


@lru_cache(maxsize=None)
def form_cycles(disc: int) -> tuple:
    """All cycles of reduced indefinite forms of the given discriminant.

    The number of cycles is the narrow class number. Cycles are returned in a
    canonical order (by their lexicographically smallest form), principal
    cycle first.
    """
    forms = []
    b = 2 - (disc % 2)
    while b * b < disc:
        num = disc - b * b
        if num % 4 == 0:
            P = num // 4  # = -a*c > 0
            for e in range(1, isqrt(P) + 1):
                if P % e:
                    continue
                for aa in {e, P // e}:
                    for form in ((aa, b, -(P // aa)), (-aa, b, P // aa)):
                        if _is_reduced(form, disc):
                            forms.append(form)
        b += 2
    cycles = []
    remaining = set(forms)
    while remaining:
        f = min(remaining)
        cyc = form_cycle(f, disc)
        cycles.append(cyc)
        remaining -= cyc
    principal = form_cycle((1, _principal_b(disc), -(disc - _principal_b(disc) ** 2) // 4), disc)
    cycles.sort(key=lambda cyc: (cyc != principal, min(cyc)))
    return tuple(cycles)


def _principal_b(disc: int) -> int:
    """Largest b < sqrt(disc) with b = disc mod 2 (principal form choice)."""
    s = isqrt(disc)
    b = s if (s - disc) % 2 == 0 else s - 1
    return b


def same_narrow_class(form1: tuple, form2: tuple, disc: int) -> bool:
    return reduce_form(form1, disc) in form_cycle(form2, disc)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cached_field(D: Optional[int]) -> NumberField:
    return NumberField(D)


def make_field(config) -> NumberField:
    """Build a field from a config mapping or a short label.

    Accepted forms: {"type": "rationals"}, {"type": "real_quadratic", "D": 5},
    "Q", "Qsqrt5".
    """
    if isinstance(config, NumberField):
        return config
    if isinstance(config, str):
        label = config.strip()
        if label in ("Q", "q", "rationals"):
            return _cached_field(None)
        if label.lower().startswith("qsqrt"):
            return make_field({"type": "real_quadratic", "D": int(label[5:])})
        raise FieldError(f"unrecognized field label: {config!r}")
    kind = config.get("type")
    if kind == "rationals":
        return _cached_field(None)
    if kind == "real_quadratic":
        D = config.get("D")
        if not isinstance(D, int) or D <= 0:
            raise FieldError("real quadratic field needs a positive integer D")
        if not _is_squarefree(D):
            raise FieldError("radicand must be squarefree")
        return _cached_field(D)
    if kind in ("unsupported", "cubic", "general"):
        raise FieldError("unsupported degree")
    raise FieldError(f"unrecognized field config: {config!r}")
