"""Rotation-number realization of substitution sequences.

A primitive invertible two-letter substitution has a fixed point that is
Sturmian, hence realizable by sampling an irrational circle rotation:

    w_n = chi(n*alpha + beta mod 1),   chi the indicator of [1-alpha, 1)

(or of (1-alpha, 1] -- both endpoint conventions are exposed).  The
angle alpha attached to a substitution here is the slope of the Perron
eigenvector of the transposed abelianization; its continued fraction is
eventually periodic and the periodic block is exactly the factor list of
the substitution's trace map.  The continued fraction is extracted with
exact integer arithmetic on quadratic surds (p + q*sqrt(d))/r, so the
eventual periodicity is detected by state repetition, not by floating
point luck.
"""

import math
from dataclasses import dataclass, field

from .substitution import (
    SubstitutionError,
    UnsupportedSubstitutionError,
    fixed_point_prefix,
)


# -- exact quadratic surds ---------------------------------------------------

@dataclass(frozen=True)
class QuadraticSurd:
    """(p + q*sqrt(d)) / r with integer p, q, r and d >= 0 not a square."""

    p: int
    q: int
    d: int
    r: int

    def __post_init__(self):
        if self.r == 0:
            raise ZeroDivisionError("surd with zero denominator")
        p, q, d, r = self.p, self.q, self.d, self.r
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(abs(p), abs(q)), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    def value(self):
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def _cmp_int(self, n):
        """Sign of self - n, exactly."""
        # self - n = (p - n r + q sqrt(d)) / r, r > 0 after normalization
        a = self.p - n * self.r
        q = self.q
        if q == 0:
            return (a > 0) - (a < 0)
        if q > 0:
            if a >= 0:
                return 1
            # q sqrt(d) vs -a, both positive
            lhs, rhs = q * q * self.d, a * a
            return (lhs > rhs) - (lhs < rhs)
        if a <= 0:
            return -1
        lhs, rhs = a * a, q * q * self.d
        return (lhs > rhs) - (lhs < rhs)

    def floor(self):
        n = math.floor(self.value())
        while self._cmp_int(n) < 0:
            n -= 1
        while self._cmp_int(n + 1) >= 0:
            n += 1
        return n

    def minus_int(self, n):
        return QuadraticSurd(self.p - n * self.r, self.q, self.d, self.r)

    def reciprocal(self):
        # r / (p + q sqrt(d)) = r (p - q sqrt(d)) / (p^2 - q^2 d)
        den = self.p * self.p - self.q * self.q * self.d
        if den == 0:
            raise ZeroDivisionError("reciprocal of zero surd")
        return QuadraticSurd(self.r * self.p, -self.r * self.q, self.d, den)

    def is_rational(self):
        return self.q == 0 or _is_square(self.d)


def _is_square(n):
    if n < 0:
        return False
    s = math.isqrt(n)
    return s * s == n


def continued_fraction(surd, max_terms=10000):
    """CF digits of a surd in (0,1): returns (preperiod, period) tuples.

    Gauss map with exact state (p, q, r); eventual periodicity of the CF
    of a quadratic irrational guarantees a repeat.
    """
    if surd.is_rational():
        raise ValueError("continued_fraction needs a quadratic irrational")
    x = surd
    seen = {}
    digits = []
    for i in range(max_terms):
        state = (x.p, x.q, x.r)
        if state in seen:
            j = seen[state]
            return tuple(digits[:j]), tuple(digits[j:])
        seen[state] = i
        inv = x.reciprocal()
        a = inv.floor()
        if a < 1:
            raise ValueError("CF digit < 1; surd not in (0,1)?")
        digits.append(a)
        x = inv.minus_int(a)
    raise RuntimeError("no CF period found within %d terms" % max_terms)


def cf_value(preperiod, period, terms=64):
    """Float value of [0; preperiod, period, period, ...]."""
    digits = list(preperiod)
    while len(digits) < terms:
        digits.extend(period)
    v = 0.0
    for a in reversed(digits[:terms]):
        v = 1.0 / (a + v)
    return v


# -- rotation parameters ------------------------------------------------------

@dataclass(frozen=True)
class RotationParams:
    """Rotation angle as an eventually periodic CF, plus a phase beta.

    ``closed_right`` selects the alternative indicator chi((1-alpha, 1]).
    """

    cf_preperiod: tuple
    cf_period: tuple
    beta: float = 0.0
    closed_right: bool = False
    surd: QuadraticSurd | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.cf_period:
            raise ValueError("CF period must be nonempty")
        if any(a < 1 for a in self.cf_preperiod + self.cf_period):
            raise ValueError("CF coefficients must be >= 1")

    @property
    def alpha(self):
        if self.surd is not None:
            return self.surd.value()
        return cf_value(self.cf_preperiod, self.cf_period)


def rotation_sample(params, n_from, n_to):
    """Letters w_n for n in [n_from, n_to], w_n = 1 iff frac(n a + b) in [1-a, 1)."""
    if n_from > n_to:
        raise ValueError("need n_from <= n_to")
    alpha, beta = params.alpha, params.beta
    out = []
    for n in range(n_from, n_to + 1):
        frac = (n * alpha + beta) % 1.0
        if params.closed_right:
            hit = 1.0 - alpha < frac <= 1.0 or frac == 0.0
        else:
            hit = frac >= 1.0 - alpha
        out.append("1" if hit else "0")
    return "".join(out)


def rotation_number(s):
    """Rotation parameters of a primitive invertible substitution.

    alpha is the Perron eigenvector slope of the transposed
    abelianization (the reciprocal slope when letter 1 dominates, so
    that alpha stays in (0,1)); the CF periodic block then matches the
    trace-map factor list.  beta is left 0 -- use :func:`scan_beta` to
    search for a phase reproducing the fixed point.
    """
    if not s.primitive:
        raise SubstitutionError("rotation_number needs a primitive substitution")
    if not s.invertible:
        raise SubstitutionError("rotation_number needs an invertible substitution")
    (a00, a01), (a10, a11) = s.abelianization
    # transposed abelianization T = [[a00, a10], [a01, a11]]; slope t of the
    # Perron eigenvector (1, t) solves T01 t^2 + (T00 - T11) t - T10 = 0
    t01, t00, t11, t10 = a10, a00, a11, a01
    disc = (t00 - t11) ** 2 + 4 * t01 * t10
    if _is_square(disc):
        raise UnsupportedSubstitutionError("rational Perron slope; not in the Sturmian class")
    slope = QuadraticSurd(t11 - t00, 1, disc, 2 * t01)
    if slope._cmp_int(1) > 0:
        slope = slope.reciprocal()
    pre, per = continued_fraction(slope)
    return RotationParams(cf_preperiod=pre, cf_period=per, surd=slope)


def scan_beta(s, n_letters=50, m_max=30, params=None):
    """Search beta over {frac(m alpha)} for agreement with the fixed point.

    Both letter polarities and both endpoint conventions are scanned,
    since the classical realization pins neither the phase nor the
    indicator variant.  Returns the best match as a dict with keys
    beta, swap_letters, closed_right, match_len.
    """
    if params is None:
        params = rotation_number(s)
    target = fixed_point_prefix(s, n_letters)
    swapped = target.translate(str.maketrans("01", "10"))
    alpha = params.alpha
    best = {"beta": 0.0, "swap_letters": False, "closed_right": False, "match_len": -1}
    for m in range(-m_max, m_max + 1):
        beta = (m * alpha) % 1.0
        for closed_right in (False, True):
            trial = RotationParams(params.cf_preperiod, params.cf_period,
                                   beta=beta, closed_right=closed_right, surd=params.surd)
            word = rotation_sample(trial, 1, n_letters)
            for swap, ref in ((False, target), (True, swapped)):
                match = 0
                for a, b in zip(word, ref):
                    if a != b:
                        break
                    match += 1
                if match > best["match_len"]:
                    best = {"beta": beta, "swap_letters": swap,
                            "closed_right": closed_right, "match_len": match}
    return best
