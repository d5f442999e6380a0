"""Bessel functions, archimedean L-factors, and a vertical-line Mellin
integration engine powering the analytic kernels.

The engine consumes a product of integrand atoms (powers y^{-s}, gamma
factors, zeta factors inside their convergence region, inverse powers of s,
digamma sums for derivative kernels) on a fixed vertical line. Two tiers:
"double" runs vectorized float64 quadrature; "high" runs the same trapezoid
in mpmath working precision for kernels whose values sit far below double
rounding (deep decay regimes).

Error reports are estimates (tail + discretization + rounding), not certified
enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import mpmath
import numpy as np

from .fields import NumberField

DEFAULT_STEP = 1.0 / 64
DEFAULT_T = 200.0
HIGH_DPS = 64


class SpecError(ValueError):
    pass


class PoleError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


class KernelError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Vectorized log-gamma / digamma (double precision, Re z > 0)
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_C = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


def loggamma_vec(z: np.ndarray) -> np.ndarray:
    """log Gamma on Re(z) > 0, Lanczos approximation, complex128."""
    z = np.asarray(z, dtype=np.complex128)
    x = np.full(z.shape, _LANCZOS_C[0], dtype=np.complex128)
    for i in range(1, len(_LANCZOS_C)):
        x = x + _LANCZOS_C[i] / (z - 1 + i)
    t = z + (_LANCZOS_G - 0.5)
    return 0.5 * math.log(2 * math.pi) + (z - 0.5) * np.log(t) - t + np.log(x)


_DIGAMMA_TAIL = [-1.0 / 12, 1.0 / 120, -1.0 / 252, 1.0 / 240, -1.0 / 132]


def digamma_vec(z: np.ndarray) -> np.ndarray:
    """Digamma on Re(z) > 0: recurrence up to |z| >= 8 then asymptotics."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros(z.shape, dtype=np.complex128)
    w = z.copy()
    for _ in range(8):
        small = np.abs(w) < 8
        out = out - np.where(small, 1.0 / w, 0.0)
        w = np.where(small, w + 1, w)
    inv2 = 1.0 / (w * w)
    acc = np.zeros(z.shape, dtype=np.complex128)
    for c in reversed(_DIGAMMA_TAIL):
        acc = (acc + c) * inv2
    return out + np.log(w) - 0.5 / w + acc


# ---------------------------------------------------------------------------
# Vectorized Hurwitz zeta on vertical lines (Euler-Maclaurin)
# ---------------------------------------------------------------------------

_EM_COEFF = [
    1.0 / 12,
    -1.0 / 720,
    1.0 / 30240,
    -1.0 / 1209600,
    1.0 / 47900160,
    -5.2841901386874932e-10,
    1.3382502993889294e-11,
    -3.3896802963225829e-13,
]


def hurwitz_zeta_vec(w: np.ndarray, a: float) -> np.ndarray:
    """zeta(w, a) for an array of w on a vertical line with Re(w) > 1."""
    w = np.asarray(w, dtype=np.complex128)
    tmax = float(np.max(np.abs(w.imag), initial=0.0))
    N = max(24, int(0.4 * tmax) + 8)
    n = np.arange(N, dtype=np.float64) + a
    # sum_{n<N} (n+a)^{-w}: (nodes x N) outer product in log space
    total = np.exp(-np.multiply.outer(w, np.log(n))).sum(axis=-1)
    base = float(N) + a
    lb = math.log(base)
    bw = np.exp(-w * lb)          # (N+a)^{-w}
    total += bw * base / (w - 1) + 0.5 * bw
    poch = w.copy()
    bpow = bw / base              # (N+a)^{-w-1}
    for k, c in enumerate(_EM_COEFF):
        # term: B_{2k+2}/(2k+2)! * poch(w, 2k+1) * (N+a)^{-w-2k-1}
        total += c * poch * bpow
        if k + 1 < len(_EM_COEFF):
            poch = poch * (w + 2 * k + 1) * (w + 2 * k + 2)
            bpow = bpow / (base * base)
    return total


def dedekind_zeta_line_vec(field: NumberField, w: np.ndarray,
                           exclude_norm: Optional[int] = None) -> np.ndarray:
    """zeta_F on a vertical line Re(w) > 1 (vectorized), optionally with the
    local factor of a prime of the given norm removed."""
    w = np.asarray(w, dtype=np.complex128)
    if field.degree == 1:
        out = hurwitz_zeta_vec(w, 1.0)
    else:
        from .ideals import kronecker_symbol

        disc = field.discriminant
        lval = np.zeros(w.shape, dtype=np.complex128)
        for r in range(1, disc + 1):
            chi = kronecker_symbol(disc, r)
            if chi:
                lval += chi * hurwitz_zeta_vec(w, r / disc)
        lval *= np.exp(-w * math.log(disc))
        out = hurwitz_zeta_vec(w, 1.0) * lval
    if exclude_norm is not None:
        out = out * (1 - np.exp(-w * math.log(exclude_norm)))
    return out


# ---------------------------------------------------------------------------
# Integrand atoms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float

    def eval_mp(self, s):
        return mpmath.mpf(self.value)

    def eval_np(self, s):
        return np.full(s.shape, self.value, dtype=np.complex128)

    def decay(self):
        return 0.0

    def alg_exponent(self, sigma):
        return 0.0

    def check(self, sigma):
        pass


@dataclass(frozen=True)
class Power:
    """y^{-s} for fixed y > 0."""

    y: float

    def eval_mp(self, s):
        return mpmath.exp(-s * mpmath.log(self.y))

    def eval_np(self, s):
        return np.exp(-s * math.log(self.y))

    def decay(self):
        return 0.0

    def alg_exponent(self, sigma):
        return 0.0

    def check(self, sigma):
        if self.y <= 0:
            raise SpecError("power base must be positive")


@dataclass(frozen=True)
class GammaAtom:
    """Gamma(alpha + beta*s)^power (power may be negative)."""

    alpha: float
    beta: float = 1.0
    power: int = 1

    def eval_mp(self, s):
        g = mpmath.loggamma(self.alpha + self.beta * s)
        return mpmath.exp(self.power * g)

    def eval_np(self, s):
        return np.exp(self.power * loggamma_vec(self.alpha + self.beta * s))

    def decay(self):
        return self.power * abs(self.beta) * math.pi / 2

    def alg_exponent(self, sigma):
        return self.power * (self.alpha + self.beta * sigma - 0.5)

    def check(self, sigma):
        # line must stay clear of the pole string Re = (-alpha - m)/beta
        x = self.alpha + self.beta * sigma
        if x <= 0 and abs(x - round(x)) < 1e-9:
            raise PoleError(f"abscissa sits on a gamma pole (argument {x})")
        if self.power > 0 and x <= 0:
            # left of the rightmost pole the Lanczos code is unreliable
            raise SpecError("gamma atom evaluated left of its pole string")


@dataclass(frozen=True)
class InvS:
    """1/(s + a)^power."""

    a: float = 0.0
    power: int = 1

    def eval_mp(self, s):
        return (s + self.a) ** (-self.power)

    def eval_np(self, s):
        return (s + self.a) ** (-float(self.power))

    def decay(self):
        return 0.0

    def alg_exponent(self, sigma):
        return -float(self.power)

    def check(self, sigma):
        if abs(sigma + self.a) < 1e-12:
            raise PoleError("abscissa sits on a rational-factor pole")


@dataclass(frozen=True)
class ZetaAtom:
    """zeta_F(shift + scale*s)^power, convergence region only; optionally
    with one local factor removed (by its prime norm)."""

    field: NumberField
    scale: float = 2.0
    shift: float = 1.0
    exclude_norm: Optional[int] = None
    power: int = 1

    def _w_mp(self, s):
        return self.shift + self.scale * s

    def eval_mp(self, s):
        w = self._w_mp(s)
        if self.field.degree == 1:
            val = mpmath.zeta(w)
        else:
            from .ideals import kronecker_symbol

            disc = self.field.discriminant
            lval = mpmath.mpf(0)
            for r in range(1, disc + 1):
                chi = kronecker_symbol(disc, r)
                if chi:
                    lval += chi * mpmath.zeta(w, mpmath.mpf(r) / disc)
            lval *= mpmath.power(disc, -w)
            val = mpmath.zeta(w) * lval
        if self.exclude_norm is not None:
            val *= 1 - mpmath.power(self.exclude_norm, -w)
        return val ** self.power

    def eval_np(self, s):
        w = self.shift + self.scale * s
        out = dedekind_zeta_line_vec(self.field, w, self.exclude_norm)
        return out ** self.power

    def decay(self):
        return 0.0

    def alg_exponent(self, sigma):
        return 0.0

    def check(self, sigma):
        if self.shift + self.scale * sigma <= 1.05:
            raise SpecError("zeta atom outside its convergence region")


@dataclass(frozen=True)
class DigammaSum:
    """sum_j (psi(s + a_j) - log(2 pi)), the log-derivative of an
    archimedean L-factor."""

    shifts: tuple

    def eval_mp(self, s):
        total = mpmath.mpf(0)
        for a in self.shifts:
            total += mpmath.digamma(s + a) - mpmath.log(2 * mpmath.pi)
        return total

    def eval_np(self, s):
        total = np.zeros(s.shape, dtype=np.complex128)
        for a in self.shifts:
            total = total + digamma_vec(s + a) - math.log(2 * math.pi)
        return total

    def decay(self):
        return 0.0

    def alg_exponent(self, sigma):
        return 0.0        # logarithmic growth, dominated by gamma decay

    def check(self, sigma):
        for a in self.shifts:
            if sigma + a <= 0:
                raise SpecError("digamma atom evaluated left of its poles")


def arch_l_atoms(k: Sequence[int], shift) -> list:
    """Atoms of the archimedean L-factor at argument s + shift:
    prod_j (2 pi)^{-(s+shift+(k_j-1)/2)} Gamma(s+shift+(k_j-1)/2)."""
    shift = float(shift)
    atoms = []
    const = 1.0
    for kj in k:
        a = shift + (kj - 1) / 2.0
        const *= (2 * math.pi) ** (-a)
        atoms.append(GammaAtom(alpha=a, beta=1.0, power=1))
    # the remaining (2 pi)^{-s} per component folds into one power factor
    atoms.append(Power((2 * math.pi) ** len(list(k))))
    atoms.append(Const(const))
    return atoms


# ---------------------------------------------------------------------------
# The line-integral engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MellinIntegrandSpec:
    abscissa: float
    atoms: tuple
    T: float = DEFAULT_T
    step: float = DEFAULT_STEP

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))


class MellinResult(NamedTuple):
    value: complex
    error: float
    diagnostics: dict


def _classify(spec: MellinIntegrandSpec):
    """Validate the spec and classify its decay.

    Returns (c, A, r, y): exponential decay rate c, net algebraic exponent A
    (the 1/s powers r are already inside A), and the combined power base y.
    """
    sigma = spec.abscissa
    c = 0.0
    A = 0.0
    r = 0
    y = None
    for atom in spec.atoms:
        atom.check(sigma)
        c += atom.decay()
        A += atom.alg_exponent(sigma)
        if isinstance(atom, InvS):
            r += atom.power
        if isinstance(atom, Power):
            y = atom.y if y is None else y * atom.y
    if c < -1e-12:
        raise SpecError("net exponential growth on the line")
    return c, A, r, y


def _effective_T(spec, c, A, target_digits):
    """Shrink T when exponential decay makes the far tail irrelevant."""
    if c <= 1e-12:
        return spec.T
    T = 30.0
    for _ in range(4):
        T = (target_digits * math.log(10) + max(A, 0.0) * math.log(T + 3) + 8) / c
    return max(30.0, min(spec.T, T))


def _atom_product_np(atoms, s: np.ndarray) -> np.ndarray:
    """Atom product in double precision; gamma atoms accumulate in log space
    so a quotient of gammas never overflows before it cancels."""
    f = np.ones(s.shape, dtype=np.complex128)
    log_acc = None
    for atom in atoms:
        if isinstance(atom, GammaAtom):
            contrib = atom.power * loggamma_vec(atom.alpha + atom.beta * s)
            log_acc = contrib if log_acc is None else log_acc + contrib
        else:
            f = f * atom.eval_np(s)
    if log_acc is not None:
        f = f * np.exp(log_acc)
    return f


_MP_GRID_CACHE: dict = {}


def _mp_prefactor_grid(atoms: tuple, sigma: float, h: float, J: int) -> list:
    """High-precision values of the y-independent atom product on the grid;
    cached because kernel families reuse one grid across many arguments."""
    key = (atoms, sigma, h, J, HIGH_DPS)
    hit = _MP_GRID_CACHE.get(key)
    if hit is not None:
        return hit
    with mpmath.workdps(HIGH_DPS):
        vals = []
        for j in range(J + 1):
            s = mpmath.mpc(sigma, j * h)
            v = mpmath.mpc(1, 0)
            for atom in atoms:
                v = v * atom.eval_mp(s)
            vals.append(v)
    if len(_MP_GRID_CACHE) > 8:
        _MP_GRID_CACHE.clear()
    _MP_GRID_CACHE[key] = vals
    return vals


def mellin_line_integral(spec: MellinIntegrandSpec, precision: str = "double",
                         budget: Optional[int] = None) -> MellinResult:
    """(1/2 pi i) * integral of the atom product over the line Re(s) =
    abscissa, truncated at |Im(s)| <= T, trapezoid rule with the given step.

    All atoms are real on the real axis, so the integrand has conjugate
    symmetry and only the upper half-line is evaluated.
    """
    c, A, r, y = _classify(spec)
    perron = False
    if c <= 1e-12:
        if A < -1 - 1e-9:
            pass                      # polynomial decay, integrable
        elif r >= 1 and y is not None and abs(math.log(y)) > 1e-9:
            perron = True             # conditionally convergent, Perron-type
        else:
            raise SpecError("integrand is not absolutely integrable on the line")
    digits = 17 if precision == "double" else HIGH_DPS
    T = _effective_T(spec, c, A, digits + 4)
    h = spec.step
    J = int(math.ceil(T / h))
    J += J % 2
    if budget is not None and J + 1 > budget:
        raise BudgetError(f"quadrature needs {J + 1} nodes, budget is {budget}")
    sigma = spec.abscissa

    if precision == "double":
        t = np.arange(0, J + 1, dtype=np.float64) * h
        s = sigma + 1j * t
        f = _atom_product_np(spec.atoms, s)
        interior = f[1:J].real
        value_h = (h / (2 * math.pi)) * (f[0].real + 2 * interior.sum() + f[J].real)
        value_2h = (2 * h / (2 * math.pi)) * (
            f[0].real + 2 * f[2:J:2].real.sum() + f[J].real
        )
        rounding = 4e-16 * (h / (2 * math.pi)) * (2 * float(np.abs(f).sum()))
        f_T = complex(f[J])
        f_Tm = complex(f[J - 1])
        f_T2 = complex(f[J - 2])
    else:
        pow_y = 1.0
        others = []
        for atom in spec.atoms:
            if isinstance(atom, Power):
                pow_y *= atom.y
            else:
                others.append(atom)
        pref = _mp_prefactor_grid(tuple(others), sigma, h, J)
        with mpmath.workdps(HIGH_DPS):
            ln_y = mpmath.log(pow_y)
            fs = [pref[j] * mpmath.exp(-mpmath.mpc(sigma, j * h) * ln_y)
                  for j in range(J + 1)]
            abssum = mpmath.fsum(abs(v) for v in fs)
            value_h = (mpmath.mpf(h) / (2 * mpmath.pi)) * (
                fs[0].real + 2 * mpmath.fsum(fs[j].real for j in range(1, J))
                + fs[J].real
            )
            value_2h = (2 * mpmath.mpf(h) / (2 * mpmath.pi)) * (
                fs[0].real + 2 * mpmath.fsum(fs[j].real for j in range(2, J, 2))
                + fs[J].real
            )
            rounding = mpmath.mpf(10) ** (-(HIGH_DPS - 6)) * abssum * h
            f_T = fs[J]
            f_Tm = fs[J - 1]
            f_T2 = fs[J - 2]

    disc_est = abs(value_h - value_2h)
    correction = 0.0
    if c > 1e-12:
        tail = (2.0 / (2 * math.pi)) * float(abs(f_T)) * (2.0 / c)
    else:
        # slow decay: integrate the oscillatory tail by parts once, using a
        # numerically estimated phase slope at the endpoint
        d1 = math.remainder(np.angle(complex(f_T)) - np.angle(complex(f_Tm)),
                            2 * math.pi)
        d2 = math.remainder(np.angle(complex(f_Tm)) - np.angle(complex(f_T2)),
                            2 * math.pi)
        slope = d1 / h
        curv = (d1 - d2) / (h * h)
        if abs(slope) > 1e-6:
            corr = -complex(f_T) / (1j * slope)
            correction = 2 * corr.real / (2 * math.pi)
            tail = 4 * abs(corr) / math.pi * (
                (abs(A) + 1) / (T * abs(slope)) + abs(curv) / (slope * slope)
            )
        elif perron:
            tail = float(y) ** (-sigma) / (math.pi * T * abs(math.log(y)))
        else:
            tail = (2.0 / (2 * math.pi)) * float(abs(f_T)) * T / max(
                -(A + 1), 0.1
            )
    value = value_h + correction
    error = (float(tail) + float(disc_est) + float(rounding)
             + 2.3e-16 * abs(complex(value)))
    diagnostics = {
        "nodes": J + 1,
        "T": T,
        "tail": float(tail),
        "discretization": float(disc_est),
        "rounding": float(rounding),
        "correction": float(correction),
        "decay_rate": c,
    }
    return MellinResult(complex(value), error, diagnostics)


# ---------------------------------------------------------------------------
# Bessel J
# ---------------------------------------------------------------------------


def bessel_j(nu: int, x: float) -> float:
    """J_nu(x) for integer nu >= 1, x >= 0: ascending series for
    x <= nu + 10, large-argument asymptotics beyond. In the window where
    the asymptotic series cannot reach ~1e-11 (large order, moderate
    argument) a normalized downward recurrence takes over."""
    if nu < 1 or nu != int(nu):
        raise SpecError("order must be a positive integer")
    if x < 0:
        raise SpecError("argument must be nonnegative")
    if x == 0:
        return 0.0
    if x <= nu + 10:
        return _bessel_series(nu, x)
    val, ok = _bessel_asymptotic(nu, x)
    if ok:
        return val
    return _bessel_miller(nu, x)


def _bessel_series(nu: int, x: float) -> float:
    u = x * x / 4.0
    term = (x / 2.0) ** nu / math.factorial(nu)
    total = term
    m = 1
    while True:
        term *= -u / (m * (m + nu))
        total += term
        m += 1
        if abs(term) < 1e-19 * (1 + abs(total)) or m > 400:
            break
    return total


def _bessel_asymptotic(nu: int, x: float):
    """Returns (value, converged): converged is False when the smallest
    retained term is too large for ~1e-11 accuracy."""
    mu = 4.0 * nu * nu
    chi = x - (2 * nu + 1) * math.pi / 4
    # a_k = prod_{j<=k} (mu - (2j-1)^2) / (k! 8^k x^k), split into P (even k,
    # alternating) and Q (odd k, alternating)
    P, Q = 1.0, 0.0
    ak = 1.0
    smallest = math.inf
    for kk in range(1, 24):
        ak *= (mu - (2 * kk - 1) ** 2) / (kk * 8.0 * x)
        if abs(ak) > smallest:
            break
        smallest = abs(ak)
        if kk % 2 == 0:
            P += ak * (-1) ** (kk // 2)
        else:
            Q += ak * (-1) ** ((kk - 1) // 2)
    value = math.sqrt(2.0 / (math.pi * x)) * (
        math.cos(chi) * P - math.sin(chi) * Q
    )
    return value, smallest < 1e-11


def _bessel_miller(nu: int, x: float) -> float:
    """Downward recurrence normalized by J_0 + 2 sum J_{2m} = 1; stable for
    integer orders at any moderate argument."""
    N = int(max(nu, x) + 20 + 12 * max(1.0, x) ** (1.0 / 3))
    if N % 2:
        N += 1
    jp = 0.0                      # J~_{n+1}
    jc = 1e-30                    # J~_n at n = N
    target = 0.0
    norm = 0.0                    # accumulates J~_0 + 2 sum J~_{2m}
    for n in range(N, 0, -1):
        jm = (2.0 * n / x) * jc - jp
        jp, jc = jc, jm
        m = n - 1
        if m == nu:
            target = jc
        if m % 2 == 0:
            norm += jc if m == 0 else 2.0 * jc
        if abs(jc) > 1e250:
            jp *= 1e-250
            jc *= 1e-250
            target *= 1e-250
            norm *= 1e-250
    return target / norm


def bessel_j_series_vec(nu: int, x: np.ndarray, terms: int = 60) -> np.ndarray:
    """Ascending series, vectorized (intended for x <= nu + 10)."""
    x = np.asarray(x, dtype=np.float64)
    u = -(x * x) / 4.0
    # Horner in u with coefficients 1/(m! (m+nu)!)
    acc = np.zeros(x.shape, dtype=np.float64)
    for m in range(terms, -1, -1):
        coeff = 1.0 / (math.factorial(m) * math.factorial(m + nu))
        acc = acc * u + coeff
    return acc * (x / 2.0) ** nu


def bessel_j_vec(nu: int, x: np.ndarray) -> np.ndarray:
    """Vectorized J_nu over a nonnegative array (hot path for trace sums)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(x.shape, dtype=np.float64)
    small = x <= nu + 10
    if small.any():
        out[small] = bessel_j_series_vec(nu, x[small])
    if (~small).any():
        xl = x[~small]
        # the asymptotic window: safe once the first term ratio is modest;
        # elements in the gap fall back to the scalar route
        safe = xl >= max(nu + 10.0, 0.6 * nu * nu)
        res = np.empty(xl.shape, dtype=np.float64)
        if safe.any():
            xs = xl[safe]
            mu = 4.0 * nu * nu
            chi = xs - (2 * nu + 1) * math.pi / 4
            P = np.ones_like(xs)
            Q = np.zeros_like(xs)
            ak = np.ones_like(xs)
            for kk in range(1, 14):
                ak = ak * (mu - (2 * kk - 1) ** 2) / (kk * 8.0 * xs)
                if kk % 2 == 0:
                    P += ak * (-1) ** (kk // 2)
                else:
                    Q += ak * (-1) ** ((kk - 1) // 2)
            res[safe] = np.sqrt(2.0 / (math.pi * xs)) * (
                np.cos(chi) * P - np.sin(chi) * Q
            )
        if (~safe).any():
            res[~safe] = [bessel_j(nu, float(v)) for v in xl[~safe]]
        out[~small] = res
    return out


def bessel_j_mellin(nu: int, x: float, sigma: Optional[float] = None,
                    T: Optional[float] = None, step: float = 1.0 / 32) -> MellinResult:
    """J_nu(x) via its vertical-line representation
    (1/2) * (1/2 pi i) * int Gamma((nu-s)/2)/Gamma((nu+s)/2+1) (x/2)^s ds,
    used as a cross-validation of the series/asymptotic route."""
    if x <= 0:
        raise SpecError("the line representation needs x > 0")
    if sigma is None:
        sigma = min(nu - 0.25, 6.0)
    if not -1.5 < sigma < nu:
        raise SpecError("abscissa outside (-3/2, nu)")
    if T is None:
        T = 2000.0 if sigma >= 2 else 20000.0
    atoms = (
        Const(0.5),
        GammaAtom(alpha=nu / 2.0, beta=-0.5, power=1),
        GammaAtom(alpha=nu / 2.0 + 1.0, beta=0.5, power=-1),
        Power(2.0 / x),          # (x/2)^s  ==  (2/x)^{-s}
    )
    spec = MellinIntegrandSpec(abscissa=sigma, atoms=atoms, T=T, step=step)
    return mellin_line_integral(spec, precision="double")


# ---------------------------------------------------------------------------
# Archimedean L-factor and kernels
# ---------------------------------------------------------------------------


def _as_weights(k) -> tuple:
    if isinstance(k, int):
        k = (k,)
    k = tuple(int(kj) for kj in k)
    if not k or any(kj < 2 or kj % 2 for kj in k):
        raise SpecError("weights must be even integers >= 2")
    return k


def arch_l_factor(k, s) -> mpmath.mpc:
    """prod_j (2 pi)^{-(s+(k_j-1)/2)} Gamma(s+(k_j-1)/2)."""
    k = _as_weights(k)
    s = mpmath.mpmathify(s)
    out = mpmath.mpc(1, 0)
    for kj in k:
        z = s + mpmath.mpf(kj - 1) / 2
        if abs(mpmath.im(z)) < 1e-9 and mpmath.re(z) < 0.5:
            zr = mpmath.re(z)
            if abs(zr - mpmath.nint(zr)) < 1e-9 and zr < 1e-9:
                raise PoleError("archimedean factor at a gamma pole")
        out *= mpmath.power(2 * mpmath.pi, -z) * mpmath.gamma(z)
    if mpmath.im(out) == 0:
        return out.real
    return out


class KernelResult(NamedTuple):
    value: float
    error: float


def _kernel_engine(y: float, atoms, T, step, precision, budget) -> MellinResult:
    spec = MellinIntegrandSpec(
        abscissa=1.5,
        atoms=tuple(atoms),
        T=DEFAULT_T if T is None else T,
        step=DEFAULT_STEP if step is None else step,
    )
    return mellin_line_integral(spec, precision=precision, budget=budget)


def kernel_F(y: float, k=(2,), precision: str = "double",
             T: Optional[float] = None, step: Optional[float] = None,
             budget: Optional[int] = None) -> KernelResult:
    """Central-value kernel: (1/2 pi i) int_(3/2) y^{-s} L(s+1/2, infinity
    components of weight k) ds/s. Cross-checked against the incomplete-gamma
    closed form when there is a single weight."""
    if y <= 0:
        raise SpecError("kernel argument must be positive")
    k = _as_weights(k)
    atoms = [Power(y)] + arch_l_atoms(k, 0.5) + [InvS()]
    res = _kernel_engine(y, atoms, T, step, precision, budget)
    value = res.value.real
    if len(k) == 1:
        closed = kernel_F_closed_form(y, k[0],
                                      dps=HIGH_DPS if precision == "high" else 20)
        slack = res.error + abs(closed) * 1e-10 + 1e-13
        if abs(value - closed) > 10 * slack + 1e-12 * abs(closed):
            raise KernelError(
                f"closed-form cross-check failed: {value} vs {closed}"
            )
    return KernelResult(float(value), res.error)


def kernel_F_closed_form(y: float, k: int, dps: int = 20):
    """(2 pi)^{-k/2} * Gamma(k/2, 2 pi y), valid for a single weight."""
    with mpmath.workdps(dps):
        return mpmath.power(2 * mpmath.pi, -mpmath.mpf(k) / 2) * mpmath.gammainc(
            mpmath.mpf(k) / 2, 2 * mpmath.pi * mpmath.mpf(y)
        )


def kernel_G(y: float, k, field: NumberField, exclude_norm: Optional[int] = None,
             precision: str = "double", T: Optional[float] = None,
             step: Optional[float] = None, budget: Optional[int] = None) -> KernelResult:
    """Second-moment kernel: (1/2 pi i) int_(3/2) y^{-s} zeta_F^{(q)}(1+2s)
    L(s+1/2)^2 ds/s; the zeta factor is evaluated on Re = 4."""
    if y <= 0:
        raise SpecError("kernel argument must be positive")
    k = _as_weights(k)
    atoms = (
        [Power(y), ZetaAtom(field, 2.0, 1.0, exclude_norm)]
        + arch_l_atoms(k, 0.5) + arch_l_atoms(k, 0.5) + [InvS()]
    )
    res = _kernel_engine(y, atoms, T, step, precision, budget)
    return KernelResult(float(res.value.real), res.error)


def kernel_F_derivative(y: float, k=(2,), precision: str = "double",
                        T: Optional[float] = None, step: Optional[float] = None,
                        budget: Optional[int] = None) -> KernelResult:
    """Derivative kernel: (1/2 pi i) int_(3/2) d/ds[y^{-s} L(s+1/2)] ds/s
    = -log(y) F(y) + (1/2 pi i) int y^{-s} L(s+1/2) (sum_j psi - d log 2pi)
    ds/s."""
    if y <= 0:
        raise SpecError("kernel argument must be positive")
    k = _as_weights(k)
    base = kernel_F(y, k, precision, T, step, budget)
    shifts = tuple(0.5 + (kj - 1) / 2.0 for kj in k)
    atoms = [Power(y)] + arch_l_atoms(k, 0.5) + [DigammaSum(shifts), InvS()]
    extra = _kernel_engine(y, atoms, T, step, precision, budget)
    value = -math.log(y) * base.value + extra.value.real
    error = abs(math.log(y)) * base.error + extra.error
    return KernelResult(value, error)


def kernel_G_derivative(y: float, k, field: NumberField,
                        exclude_norm: Optional[int] = None,
                        precision: str = "double", T: Optional[float] = None,
                        step: Optional[float] = None,
                        budget: Optional[int] = None) -> KernelResult:
    """Squared-derivative second-moment kernel: the kernel_G integrand
    against ds/s^3 (double pole at the center after squaring)."""
    if y <= 0:
        raise SpecError("kernel argument must be positive")
    k = _as_weights(k)
    atoms = (
        [Power(y), ZetaAtom(field, 2.0, 1.0, exclude_norm)]
        + arch_l_atoms(k, 0.5) + arch_l_atoms(k, 0.5) + [InvS(power=3)]
    )
    res = _kernel_engine(y, atoms, T, step, precision, budget)
    return KernelResult(float(res.value.real), res.error)


# ---------------------------------------------------------------------------
# Batched kernels (shared quadrature grid, double precision)
# ---------------------------------------------------------------------------


class LineKernelBatch:
    """Precomputes the y-independent part of a kernel integrand on the
    quadrature grid; evaluates many y values by a single matrix product."""

    def __init__(self, atoms_without_power, abscissa: float = 1.5,
                 T: Optional[float] = None, step: float = 1.0 / 32):
        atoms = tuple(atoms_without_power)
        probe = MellinIntegrandSpec(abscissa=abscissa, atoms=atoms + (Power(1.0),),
                                    T=DEFAULT_T if T is None else T, step=step)
        c, A, r, _ = _classify(probe)
        if c <= 1e-12:
            raise SpecError("batched kernels need exponential gamma decay")
        Teff = _effective_T(probe, c, A, 21)
        h = step
        J = int(math.ceil(Teff / h))
        J += J % 2
        self.abscissa = abscissa
        self.h = h
        self.t = np.arange(0, J + 1, dtype=np.float64) * h
        s = abscissa + 1j * self.t
        f = _atom_product_np(atoms, s)
        self.pref = f
        # trapezoid weights folded into the prefactor (half end weights)
        self.weights = np.ones(J + 1)
        self.weights[0] = 0.5
        self.weights[J] = 0.5
        self.tail_scale = float(np.abs(f[J])) * 2.0 / c / (2 * math.pi)

    def values(self, ys: np.ndarray) -> np.ndarray:
        """Kernel values at each y: real part of the weighted sums."""
        ys = np.asarray(ys, dtype=np.float64)
        if np.any(ys <= 0):
            raise SpecError("kernel arguments must be positive")
        logy = np.log(ys)
        # y^{-sigma - i t} = y^{-sigma} * exp(-i t log y); conjugate symmetry
        # doubles the t > 0 half, and the endpoint half-weights make the
        # doubled t = 0 node count exactly once
        osc = np.exp(-1j * np.outer(logy, self.t))
        sums = osc @ (self.pref * self.weights)
        return np.power(ys, -self.abscissa) * (self.h / math.pi) * sums.real

    def error_estimate(self, ys: np.ndarray) -> np.ndarray:
        ys = np.asarray(ys, dtype=np.float64)
        return np.power(ys, -self.abscissa) * self.tail_scale + 1e-15


def kernel_F_batch(ys, k=(2,)) -> np.ndarray:
    k = _as_weights(k)
    batch = LineKernelBatch(arch_l_atoms(k, 0.5) + [InvS()])
    return batch.values(ys)


def kernel_G_batch(ys, k, field: NumberField,
                   exclude_norm: Optional[int] = None) -> np.ndarray:
    k = _as_weights(k)
    atoms = ([ZetaAtom(field, 2.0, 1.0, exclude_norm)]
             + arch_l_atoms(k, 0.5) + arch_l_atoms(k, 0.5) + [InvS()])
    return LineKernelBatch(atoms).values(ys)


def kernel_F_derivative_batch(ys, k=(2,)) -> np.ndarray:
    k = _as_weights(k)
    ys = np.asarray(ys, dtype=np.float64)
    shifts = tuple(0.5 + (kj - 1) / 2.0 for kj in k)
    base = LineKernelBatch(arch_l_atoms(k, 0.5) + [InvS()])
    extra = LineKernelBatch(arch_l_atoms(k, 0.5) + [DigammaSum(shifts), InvS()])
    return -np.log(ys) * base.values(ys) + extra.values(ys)


def kernel_G_derivative_batch(ys, k, field: NumberField,
                              exclude_norm: Optional[int] = None) -> np.ndarray:
    k = _as_weights(k)
    atoms = ([ZetaAtom(field, 2.0, 1.0, exclude_norm)]
             + arch_l_atoms(k, 0.5) + arch_l_atoms(k, 0.5) + [InvS(power=3)])
    return LineKernelBatch(atoms).values(ys)
