"""Exact arithmetic in the deformation parameter eps.

Two scalar types live here:

* ``EpsPoly`` -- a univariate polynomial over Q in the parameter eps, stored
  sparsely as ``{exponent: Fraction}`` with no zero coefficients.  It doubles
  as a general exact univariate polynomial (the rank oracle reuses it for
  binary-form gcd work).

* ``EpsScalar`` -- an element of Q(eps) kept as a reduced fraction num/den of
  two ``EpsPoly``.  The denominator is normalized so that its lowest-order
  nonzero coefficient is 1; together with gcd reduction this makes the
  representation canonical, so structural equality is semantic equality.
  The eps-valuation of a scalar is val(num) - val(den) and may be negative;
  nothing is ever truncated.

Scalars coerce from int and Fraction on the fly, so generic polynomial code
can mix them with plain rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .errors import PoleAtZero

Coeff = Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class EpsPoly:
    """Sparse univariate polynomial in eps over Q."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[int, Fraction] | None = None):
        clean: Dict[int, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(e, int) or e < 0:
                    raise ValueError(f"bad exponent {e!r}")
                c = _frac(c)
                if c != 0:
                    clean[e] = c
        self._terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "EpsPoly":
        return cls()

    @classmethod
    def const(cls, c) -> "EpsPoly":
        return cls({0: _frac(c)})

    @classmethod
    def eps(cls, power: int = 1) -> "EpsPoly":
        if power < 0:
            raise ValueError("EpsPoly exponents are nonnegative")
        return cls({power: Fraction(1)})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, Fraction]]) -> "EpsPoly":
        acc: Dict[int, Fraction] = {}
        for e, c in pairs:
            acc[e] = acc.get(e, Fraction(0)) + _frac(c)
        return cls(acc)

    # -- predicates and views --------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Largest exponent; -1 for the zero polynomial."""
        return max(self._terms) if self._terms else -1

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("valuation of the zero polynomial")
        return min(self._terms)

    def coeff(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    def lowest(self) -> Tuple[int, Fraction]:
        """(valuation, coefficient at the valuation)."""
        v = self.valuation()
        return v, self._terms[v]

    def at_zero(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def pairs(self) -> Tuple[Tuple[int, Fraction], ...]:
        """Terms as ((exponent, coefficient), ...) in ascending exponent order."""
        return tuple(sorted(self._terms.items()))

    def evaluate(self, t: Fraction) -> Fraction:
        t = _frac(t)
        return sum((c * t**e for e, c in self._terms.items()), Fraction(0))

    # -- ring operations -------------------------------------------------

    def __add__(self, other) -> "EpsPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            s = acc.get(e, Fraction(0)) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        out = EpsPoly.__new__(EpsPoly)
        out._terms = acc
        return out

    __radd__ = __add__

    def __neg__(self) -> "EpsPoly":
        out = EpsPoly.__new__(EpsPoly)
        out._terms = {e: -c for e, c in self._terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "EpsPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: Dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                s = acc.get(e, Fraction(0)) + c1 * c2
                if s:
                    acc[e] = s
                else:
                    acc.pop(e, None)
        out = EpsPoly.__new__(EpsPoly)
        out._terms = acc
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "EpsPoly":
        if n < 0:
            raise ValueError("negative power of an EpsPoly")
        result = EpsPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "EpsPoly") -> Tuple["EpsPoly", "EpsPoly"]:
        other = self._coerce(other)
        if other is NotImplemented or other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q: Dict[int, Fraction] = {}
        r = self
        dB, lcB = other.degree(), other.coeff(other.degree())
        while not r.is_zero and r.degree() >= dB:
            shift = r.degree() - dB
            c = r.coeff(r.degree()) / lcB
            q[shift] = q.get(shift, Fraction(0)) + c
            r = r - EpsPoly({shift: c}) * other
        return EpsPoly(q), r

    def exact_div(self, other: "EpsPoly") -> "EpsPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError("exact_div with nonzero remainder")
        return q

    def shift(self, k: int) -> "EpsPoly":
        """Multiply by eps**k; k may be negative if the valuation allows it."""
        if self.is_zero:
            return self
        if k < 0 and self.valuation() < -k:
            raise ValueError("shift below eps^0")
        return EpsPoly({e + k: c for e, c in self._terms.items()})

    def truncate(self, max_exponent: int) -> "EpsPoly":
        """Drop all terms with exponent strictly above max_exponent."""
        return EpsPoly({e: c for e, c in self._terms.items() if e <= max_exponent})

    def derivative(self) -> "EpsPoly":
        return EpsPoly({e - 1: c * e for e, c in self._terms.items() if e > 0})

    def monic(self) -> "EpsPoly":
        if self.is_zero:
            return self
        lc = self.coeff(self.degree())
        return EpsPoly({e: c / lc for e, c in self._terms.items()})

    @staticmethod
    def gcd(a: "EpsPoly", b: "EpsPoly") -> "EpsPoly":
        """Monic gcd in Q[eps] by the Euclidean algorithm."""
        while not b.is_zero:
            a, b = b, divmod(a, b)[1]
        return a.monic()

    # -- comparisons -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, EpsPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return EpsPoly.const(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        bits = []
        for e, c in sorted(self._terms.items()):
            if e == 0:
                bits.append(str(c))
            elif e == 1:
                bits.append(f"{c}*eps" if c != 1 else "eps")
            else:
                bits.append(f"{c}*eps^{e}" if c != 1 else f"eps^{e}")
        return " + ".join(bits)


_EP_ONE = EpsPoly.const(1)


class EpsScalar:
    """Element of Q(eps) as a canonical reduced fraction of EpsPoly."""

    __slots__ = ("num", "den")

    def __init__(self, num: EpsPoly, den: EpsPoly | None = None):
        if den is None:
            den = _EP_ONE
        if den.is_zero:
            raise ZeroDivisionError("EpsScalar with zero denominator")
        if num.is_zero:
            self.num = EpsPoly.zero()
            self.den = _EP_ONE
            return
        g = EpsPoly.gcd(num, den)
        if g.degree() > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        # normalize: lowest-order nonzero coefficient of den becomes 1
        _, low = den.lowest()
        if low != 1:
            inv = 1 / low
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rational(cls, c) -> "EpsScalar":
        return cls(EpsPoly.const(_frac(c)))

    @classmethod
    def from_poly(cls, p: EpsPoly) -> "EpsScalar":
        return cls(p)

    @classmethod
    def eps(cls, power: int = 1) -> "EpsScalar":
        """eps**power for any integer power (negative gives a pole at 0)."""
        if power >= 0:
            return cls(EpsPoly.eps(power))
        return cls(_EP_ONE, EpsPoly.eps(-power))

    @classmethod
    def zero(cls) -> "EpsScalar":
        return cls(EpsPoly.zero())

    @classmethod
    def one(cls) -> "EpsScalar":
        return cls(_EP_ONE)

    # -- predicates ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den == _EP_ONE

    def valuation(self) -> int:
        """eps-valuation val(num) - val(den); raises on zero."""
        if self.is_zero:
            raise ValueError("valuation of zero")
        return self.num.valuation() - self.den.valuation()

    def laurent_lead(self) -> Tuple[int, Fraction]:
        """(valuation, leading Laurent coefficient at eps -> 0)."""
        vn, cn = self.num.lowest()
        vd, cd = self.den.lowest()
        return vn - vd, cn / cd

    def limit(self) -> Fraction:
        """Value at eps = 0; requires valuation >= 0."""
        if self.is_zero:
            return Fraction(0)
        v = self.valuation()
        if v < 0:
            raise PoleAtZero(f"pole of order {-v} at eps = 0", witness=self)
        if v > 0:
            return Fraction(0)
        # den is normalized with lowest coefficient 1 and has valuation 0 here
        return self.num.at_zero() / self.den.at_zero()

    # -- field operations ------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, EpsScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return EpsScalar.from_rational(x)
        if isinstance(x, EpsPoly):
            return EpsScalar(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.is_polynomial and other.is_polynomial:
            return EpsScalar(self.num + other.num)
        return EpsScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = EpsScalar.__new__(EpsScalar)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return EpsScalar.zero()
        if self.is_polynomial and other.is_polynomial:
            out = EpsScalar.__new__(EpsScalar)
            out.num = self.num * other.num
            out.den = _EP_ONE
            return out
        return EpsScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero EpsScalar")
        return EpsScalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return (EpsScalar.one() / self) ** (-n)
        result = EpsScalar.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # canonical representation: structural equality is semantic equality
        return self.num == other.num and self.den == other.den

    def __bool__(self) -> bool:
        return not self.is_zero

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        if self.is_polynomial:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def eps_valuation(s) -> int:
    """eps-valuation of an EpsScalar, EpsPoly, or rational; raises on zero."""
    if isinstance(s, EpsPoly):
        return s.valuation()
    if isinstance(s, (int, Fraction)):
        if s == 0:
            raise ValueError("valuation of zero")
        return 0
    if isinstance(s, EpsScalar):
        return s.valuation()
    raise TypeError(f"no eps-valuation for {type(s).__name__}")
