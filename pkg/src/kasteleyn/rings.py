"""Exact scalar arithmetic: integer-coefficient Laurent polynomials in q,
rational-coefficient polynomials, and the factorization diagnostics used by
the conjecture harness.

Scalars are deliberately plain: integers are Python ints, rationals are
fractions.Fraction.  Everything here is immutable and safe to share.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd


class DomainError(ValueError):
    """Input outside an operation's stated domain."""


class ExactDivisionError(ArithmeticError):
    """Division requested between elements that do not divide exactly."""


# ---------------------------------------------------------------------------
# Laurent polynomials over Z


class LaurentPoly:
    """Integer-coefficient Laurent polynomial in one variable q.

    Stored as a map exponent -> nonzero coefficient; equal polynomials have
    identical stored maps, so == and hash are structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                if not isinstance(e, int):
                    raise TypeError("exponents must be int")
                c = int(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self._terms = clean
        self._hash = None

    # -- constructors

    @staticmethod
    def zero():
        return LaurentPoly()

    @staticmethod
    def one():
        return LaurentPoly({0: 1})

    @staticmethod
    def const(c):
        return LaurentPoly({0: int(c)})

    @staticmethod
    def q_power(e, coeff=1):
        return LaurentPoly({int(e): int(coeff)})

    @staticmethod
    def coerce(x):
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return LaurentPoly.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- observers

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms

    def coeff(self, e):
        return self._terms.get(e, 0)

    @property
    def min_exp(self):
        if not self._terms:
            raise DomainError("zero polynomial has no exponents")
        return min(self._terms)

    @property
    def max_exp(self):
        if not self._terms:
            raise DomainError("zero polynomial has no exponents")
        return max(self._terms)

    @property
    def span(self):
        return self.max_exp - self.min_exp

    def is_unit(self):
        """Units of Z[q, q^-1] are +-q^k."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def is_one(self):
        return self._terms == {0: 1}

    def content(self):
        g = 0
        for c in self._terms.values():
            g = gcd(g, abs(c))
        return g

    def leading_coeff(self):
        return self._terms[self.max_exp]

    def trailing_coeff(self):
        return self._terms[self.min_exp]

    def num_terms(self):
        return len(self._terms)

    # -- arithmetic

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = terms
        out._hash = None
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {e: -c for e, c in self._terms.items()}
        out._hash = None
        return out

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) + (-self)

    def __mul__(self, other):
        other = LaurentPoly.coerce(other)
        if not self._terms or not other._terms:
            return LaurentPoly.zero()
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = terms
        out._hash = None
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise DomainError("negative powers only for units; shift exponents instead")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by q^k."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {e + k: c for e, c in self._terms.items()}
        out._hash = None
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- division

    def _dense(self):
        """(min_exp, coefficient list from min_exp upward)."""
        lo, hi = self.min_exp, self.max_exp
        coeffs = [0] * (hi - lo + 1)
        for e, c in self._terms.items():
            coeffs[e - lo] = c
        return lo, coeffs

    def divide(self, other):
        """Exact division in Z[q, q^-1]; raises ExactDivisionError if not exact."""
        q = self.try_divide(other)
        if q is None:
            raise ExactDivisionError(f"{other} does not divide {self}")
        return q

    def try_divide(self, other):
        other = LaurentPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero()
        lo_n, num = self._dense()
        lo_d, den = other._dense()
        # long division from the top; abort as soon as a step is inexact
        quot = [0] * (len(num) - len(den) + 1)
        if len(num) < len(den):
            return None
        lead = den[-1]
        for i in range(len(num) - len(den), -1, -1):
            c = num[i + len(den) - 1]
            if c == 0:
                continue
            if c % lead:
                return None
            f = c // lead
            quot[i] = f
            for j, d in enumerate(den):
                num[i + j] -= f * d
        if any(num):
            return None
        return LaurentPoly(
            {i + lo_n - lo_d: c for i, c in enumerate(quot) if c}
        )

    def divides(self, other):
        if self.is_zero():
            return LaurentPoly.coerce(other).is_zero()
        return LaurentPoly.coerce(other).try_divide(self) is not None

    # -- normalization and evaluation

    def unit_normalize(self):
        """Return (sign, exp, f) with self = sign * q^exp * f, f having
        minimum exponent 0 and positive leading coefficient."""
        if self.is_zero():
            return 1, 0, self
        k = self.min_exp
        sign = 1 if self.leading_coeff() > 0 else -1
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {e - k: sign * c for e, c in self._terms.items()}
        out._hash = None
        return sign, k, out

    def normal(self):
        return self.unit_normalize()[2]

    def evaluate(self, q0):
        """Exact evaluation; returns int when integral, Fraction otherwise."""
        if isinstance(q0, float):
            raise TypeError("exact evaluation only; pass int or Fraction")
        q0 = Fraction(q0)
        if q0 == 0 and not self.is_zero() and self.min_exp < 0:
            raise DomainError("cannot evaluate negative exponents at q = 0")
        total = Fraction(0)
        for e, c in self._terms.items():
            total += c * q0 ** e
        return int(total) if total.denominator == 1 else total

    def substitute_q_power(self, k):
        """Return f(q^k) for a positive integer k."""
        if k <= 0:
            raise DomainError("power substitution needs k >= 1")
        return LaurentPoly({e * k: c for e, c in self._terms.items()})

    # -- text form

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self, compact=True)!r})"


def _format_term(c, e, compact):
    star = "*"
    if e == 0:
        return str(c)
    qpart = "q" if e == 1 else f"q^{e}"
    if c == 1:
        return qpart
    if c == -1:
        return "-" + qpart
    return f"{c}{star}{qpart}"


def format_laurent(f, compact=False):
    """Canonical text form: ascending exponents, terms like c*q^e."""
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.items():
        parts.append((c, e))
    first_c, first_e = parts[0]
    out = _format_term(first_c, first_e, compact)
    plus, minus = ("+", "-") if compact else (" + ", " - ")
    for c, e in parts[1:]:
        if c > 0:
            out += plus + _format_term(c, e, compact)
        else:
            out += minus + _format_term(-c, e, compact)
    return out


_TERM_RE = re.compile(
    r"""^\s*(?P<sign>[+-])?\s*
        (?:
            (?P<coeff>\d+)\s*(?:(?P<star>\*)\s*(?P<q1>q(?:\^(?P<exp1>-?\d+))?))?
          | (?P<q2>q(?:\^(?P<exp2>-?\d+))?)
        )\s*$""",
    re.VERBOSE,
)


def parse_laurent(text):
    """Parse the Laurent text syntax (`1 - 2*q + q^3`, `q^-1+1`, ...)."""
    s = text.strip()
    if not s:
        raise DomainError("empty polynomial text")
    # split into signed terms at top level: +/- not preceded by ^ or *
    terms = []
    buf = ""
    for ch in s:
        core = buf.strip()
        if ch in "+-" and core and not core.endswith(("*", "^", "+", "-")):
            terms.append(buf)
            buf = ch
        else:
            buf += ch
    terms.append(buf)
    out = {}
    for raw in terms:
        m = _TERM_RE.match(raw)
        if not m:
            raise DomainError(f"bad Laurent term: {raw!r} in {text!r}")
        c = int(m.group("coeff")) if m.group("coeff") is not None else 1
        if m.group("sign") == "-":
            c = -c
        qpart = m.group("q1") or m.group("q2")
        if qpart:
            exp = m.group("exp1") if m.group("q1") else m.group("exp2")
            e = int(exp) if exp is not None else 1
        else:
            e = 0
        if c:
            out[e] = out.get(e, 0) + c
            if not out[e]:
                del out[e]
    return LaurentPoly(out)


# ---------------------------------------------------------------------------
# q-integers, Gaussian binomials, cyclotomics


def q_integer(n):
    """(n)_q = 1 + q + ... + q^(n-1)."""
    if n < 1:
        raise DomainError(f"q_integer needs n >= 1, got {n}")
    return LaurentPoly({e: 1 for e in range(n)})


def gaussian_binomial(n, k):
    """q-binomial coefficient, computed by exact division of q-integer products."""
    if n < 0 or k < 0:
        raise DomainError("gaussian_binomial needs nonnegative arguments")
    if k > n:
        return LaurentPoly.zero()
    k = min(k, n - k)
    num = LaurentPoly.one()
    den = LaurentPoly.one()
    for i in range(1, k + 1):
        num = num * q_integer(n - k + i)
        den = den * q_integer(i)
    return num.divide(den)


@lru_cache(maxsize=None)
def cyclotomic(d):
    """The d-th cyclotomic polynomial, by exact division of q^d - 1."""
    if d < 1:
        raise DomainError("cyclotomic index must be >= 1")
    f = LaurentPoly({d: 1, 0: -1})
    for e in range(1, d):
        if d % e == 0:
            f = f.divide(cyclotomic(e))
    return f


def _euler_phi(d):
    out, n, p = 1, d, 2
    while p * p <= n:
        if n % p == 0:
            out *= p - 1
            n //= p
            while n % p == 0:
                out *= p
                n //= p
        p += 1
    if n > 1:
        out *= n - 1
    return out


class QRoundFactorization:
    """Outcome of the q-roundness diagnostic.

    When success is true: input = sign * q^exp * product(factors), with each
    factor tagged ('q-integer', n) or ('cyclotomic', d).  On failure the
    residual carries the part that resisted cyclotomic-type division.
    """

    def __init__(self, sign, exp, factors, residual):
        self.sign = sign
        self.exp = exp
        self.factors = tuple(factors)
        self.residual = residual

    @property
    def success(self):
        return self.residual.is_one()

    def rebuild(self):
        out = LaurentPoly.q_power(self.exp, self.sign)
        for _tag, _n, poly in self.factors:
            out = out * poly
        return out * self.residual

    def factor_names(self):
        return tuple(f"({n})_q" if tag == "q-integer" else f"Phi_{n}"
                     for tag, n, _ in self.factors)

    def __repr__(self):
        state = "round" if self.success else f"residual={self.residual}"
        return f"<QRoundFactorization {self.factor_names()} {state}>"


def factor_q_round(f):
    """Greedy factorization into q-integers then cyclotomics, per the
    reported diagnostic convention: (n)_q with n descending first, then
    Phi_d with d descending; success iff the residual is 1."""
    f = LaurentPoly.coerce(f)
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    sign, exp, g = f.unit_normalize()
    factors = []
    n = g.span + 1
    while n >= 2:
        if g.span + 1 < n:
            n = g.span + 1
            continue
        quot = g.try_divide(q_integer(n))
        if quot is not None:
            factors.append(("q-integer", n, q_integer(n)))
            g = quot
        else:
            n -= 1
    if not g.is_one():
        span = g.span
        dmax = 2 * span * span + 2
        for d in range(dmax, 0, -1):
            if _euler_phi(d) > g.span:
                continue
            while True:
                quot = g.try_divide(cyclotomic(d))
                if quot is None:
                    break
                factors.append(("cyclotomic", d, cyclotomic(d)))
                g = quot
            if g.span == 0:
                break
    if g.span == 0 and not g.is_one():
        # leftover integer content is not q-round by itself; report it
        pass
    return QRoundFactorization(sign, exp, factors, g)


# ---------------------------------------------------------------------------
# Smoothness diagnostics over Z


class SmoothFactorization:
    def __init__(self, sign, primes, residual, bound):
        self.sign = sign
        self.primes = tuple(primes)
        self.residual = residual
        self.bound = bound

    @property
    def success(self):
        return self.residual == 1

    def rebuild(self):
        out = self.sign
        for p in self.primes:
            out *= p
        return out * self.residual

    def __repr__(self):
        state = "smooth" if self.success else f"residual={self.residual}"
        return f"<SmoothFactorization {list(self.primes)} {state} bound={self.bound}>"


def _primes_upto(bound):
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(bound ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return [p for p in range(2, bound + 1) if sieve[p]]


def smooth_factor(n, bound):
    """Trial division by all primes <= bound; the residual is what remains."""
    if n == 0:
        raise DomainError("cannot factor zero")
    if bound < 1:
        raise DomainError("bound must be positive")
    sign = 1 if n > 0 else -1
    n = abs(n)
    primes = []
    for p in _primes_upto(bound):
        while n % p == 0:
            primes.append(p)
            n //= p
    return SmoothFactorization(sign, primes, n, bound)


def specialize(f, q0):
    """Evaluate a Laurent polynomial exactly at q0 (int or Fraction)."""
    return LaurentPoly.coerce(f).evaluate(q0)


# ---------------------------------------------------------------------------
# Dense polynomials over Q (the Euclidean-domain fallback for q-matrices)


class RationalPoly:
    """Polynomial in q with Fraction coefficients, dense ascending storage."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def zero():
        return RationalPoly()

    @staticmethod
    def one():
        return RationalPoly((1,))

    @staticmethod
    def const(c):
        return RationalPoly((Fraction(c),))

    @staticmethod
    def coerce(x):
        if isinstance(x, RationalPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return RationalPoly.const(x)
        if isinstance(x, LaurentPoly):
            return RationalPoly.from_laurent(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalPoly")

    @staticmethod
    def from_laurent(f):
        if f.is_zero():
            return RationalPoly()
        if f.min_exp < 0:
            raise DomainError("negative exponents do not embed in Q[q]")
        coeffs = [0] * (f.max_exp + 1)
        for e, c in f.items():
            coeffs[e] = c
        return RationalPoly(coeffs)

    def to_laurent(self):
        """Exact conversion when all coefficients are integers."""
        terms = {}
        for e, c in enumerate(self.coeffs):
            if c:
                if c.denominator != 1:
                    raise DomainError("non-integer coefficient")
                terms[e] = int(c)
        return LaurentPoly(terms)

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        if not self.coeffs:
            return -1
        return len(self.coeffs) - 1

    def leading_coeff(self):
        if not self.coeffs:
            raise DomainError("zero polynomial")
        return self.coeffs[-1]

    def is_unit(self):
        return len(self.coeffs) == 1

    def is_one(self):
        return self.coeffs == (Fraction(1),)

    def __eq__(self, other):
        if not isinstance(other, RationalPoly):
            try:
                other = RationalPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = RationalPoly.coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(
            [
                (self.coeffs[i] if i < len(self.coeffs) else 0)
                + (other.coeffs[i] if i < len(other.coeffs) else 0)
                for i in range(n)
            ]
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-RationalPoly.coerce(other))

    def __rsub__(self, other):
        return RationalPoly.coerce(other) + (-self)

    def __mul__(self, other):
        other = RationalPoly.coerce(other)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def divmod(self, other):
        other = RationalPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dn = len(other.coeffs)
        if len(rem) < dn:
            return RationalPoly(), self
        quot = [Fraction(0)] * (len(rem) - dn + 1)
        lead = other.coeffs[-1]
        for i in range(len(rem) - dn, -1, -1):
            c = rem[i + dn - 1]
            if not c:
                continue
            f = c / lead
            quot[i] = f
            for j, d in enumerate(other.coeffs):
                rem[i + j] -= f * d
        return RationalPoly(quot), RationalPoly(rem)

    def divide(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ExactDivisionError(f"{other} does not divide {self}")
        return q

    def try_divide(self, other):
        q, r = self.divmod(RationalPoly.coerce(other))
        return q if r.is_zero() else None

    def divides(self, other):
        if self.is_zero():
            return RationalPoly.coerce(other).is_zero()
        return RationalPoly.coerce(other).try_divide(self) is not None

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return RationalPoly([c / lead for c in self.coeffs])

    def derivative(self):
        return RationalPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other):
        a, b = self, RationalPoly.coerce(other)
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def gcdext(self, other):
        """Extended Euclid: (g, x, y) with x*self + y*other = g, g monic."""
        other = RationalPoly.coerce(other)
        r0, r1 = self, other
        x0, x1 = RationalPoly.one(), RationalPoly.zero()
        y0, y1 = RationalPoly.zero(), RationalPoly.one()
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        if r0.is_zero():
            return r0, x0, y0
        lead = r0.coeffs[-1]
        inv = RationalPoly.const(1 / lead)
        return r0.monic(), inv * x0, inv * y0

    def primitive_integer_form(self):
        """Scale by a positive rational to primitive integer coefficients with
        positive leading coefficient; returns the scaled RationalPoly."""
        if self.is_zero():
            return self
        denom = 1
        for c in self.coeffs:
            denom = denom * c.denominator // gcd(denom, c.denominator)
        nums = [int(c * denom) for c in self.coeffs]
        g = 0
        for c in nums:
            g = gcd(g, abs(c))
        nums = [c // g for c in nums]
        if nums[-1] < 0:
            nums = [-c for c in nums]
        return RationalPoly(nums)

    def is_squarefree(self):
        if self.is_zero():
            return False
        if self.degree() == 0:
            return True
        return self.gcd(self.derivative()).degree() == 0

    def evaluate(self, q0):
        q0 = Fraction(q0)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * q0 + c
        return int(total) if total.denominator == 1 else total

    def __str__(self):
        if self.is_zero():
            return "0"
        try:
            return format_laurent(self.to_laurent())
        except DomainError:
            parts = []
            for e, c in enumerate(self.coeffs):
                if c:
                    parts.append(f"{c}*q^{e}")
            return " + ".join(parts)

    def __repr__(self):
        return f"RationalPoly({self})"


def integer_squarefree(n, bound=None):
    """True if |n| has no repeated prime factor; exhaustive small-factor
    search (trial division to sqrt), adequate at desk scale."""
    n = abs(n)
    if n == 0:
        return False
    if n == 1:
        return True
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
        else:
            p += 1
    return True
