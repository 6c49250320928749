"""Sparse homogeneous polynomials and linear forms.

A monomial is an exponent tuple of length nvars; a ``HomoPoly`` maps monomials
to scalar coefficients (Fraction or EpsScalar, never mixed) and carries an
explicit ``(nvars, degree)`` tag so that zero polynomials of different degrees
stay distinguishable.  The canonical term order used for serialization and
witnesses is graded lexicographic; since every stored polynomial is
homogeneous that is plain descending tuple order on the exponents.

``LinearForm`` is a thin wrapper around a coefficient vector with the
operations the decomposition machinery needs: exact powers via multinomial
expansion, composition with a linear change of variables, restriction.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Sequence, Tuple

from .epsilon import EpsScalar
from .errors import PoleAtZero

Monomial = Tuple[int, ...]


def _is_scalar(c) -> bool:
    return isinstance(c, (int, Fraction, EpsScalar))


def _as_coeff(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


def monomial_key(m: Monomial):
    """Sort key putting monomials in graded-lex order (largest first)."""
    return tuple(-e for e in m)


def falling_factorial(d: int, j: int) -> int:
    """d * (d-1) * ... * (d-j+1)."""
    out = 1
    for i in range(j):
        out *= d - i
    return out


class HomoPoly:
    """Homogeneous polynomial, sparse over Fraction or EpsScalar."""

    __slots__ = ("nvars", "degree", "_terms")

    def __init__(self, nvars: int, degree: int, terms: Dict[Monomial, object] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be at least 1")
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.nvars = nvars
        self.degree = degree
        clean: Dict[Monomial, object] = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != nvars or any(e < 0 for e in m):
                    raise ValueError(f"bad monomial {m} for nvars={nvars}")
                if sum(m) != degree:
                    raise ValueError(f"monomial {m} has degree {sum(m)}, expected {degree}")
                c = _as_coeff(c)
                if not _is_scalar(c):
                    raise TypeError(f"bad coefficient {c!r}")
                if c != 0:
                    clean[m] = c
        self._terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, degree: int) -> "HomoPoly":
        return cls(nvars, degree)

    @classmethod
    def monomial(cls, nvars: int, exps: Monomial, coeff=Fraction(1)) -> "HomoPoly":
        return cls(nvars, sum(exps), {tuple(exps): coeff})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "HomoPoly":
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, 1, {exps: Fraction(1)})

    # -- views -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        return self._terms.items()

    def monomials(self) -> Tuple[Monomial, ...]:
        return tuple(sorted(self._terms, key=monomial_key))

    def coeff(self, m: Monomial):
        return self._terms.get(tuple(m), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def used_vars(self) -> Tuple[int, ...]:
        used = set()
        for m in self._terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return tuple(sorted(used))

    # -- arithmetic ------------------------------------------------------

    def _require_same_shape(self, other: "HomoPoly"):
        if self.nvars != other.nvars or self.degree != other.degree:
            raise ValueError(
                f"shape mismatch: ({self.nvars},{self.degree}) vs ({other.nvars},{other.degree})"
            )

    def __add__(self, other: "HomoPoly") -> "HomoPoly":
        self._require_same_shape(other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            s = acc.get(m, Fraction(0)) + c
            if s != 0:
                acc[m] = s
            else:
                acc.pop(m, None)
        out = HomoPoly.__new__(HomoPoly)
        out.nvars, out.degree, out._terms = self.nvars, self.degree, acc
        return out

    def __neg__(self) -> "HomoPoly":
        out = HomoPoly.__new__(HomoPoly)
        out.nvars, out.degree = self.nvars, self.degree
        out._terms = {m: -c for m, c in self._terms.items()}
        return out

    def __sub__(self, other: "HomoPoly") -> "HomoPoly":
        return self + (-other)

    def scale(self, s) -> "HomoPoly":
        s = _as_coeff(s)
        if s == 0:
            return HomoPoly.zero(self.nvars, self.degree)
        out = HomoPoly.__new__(HomoPoly)
        out.nvars, out.degree = self.nvars, self.degree
        out._terms = {m: c * s for m, c in self._terms.items()}
        return out

    def __mul__(self, other: "HomoPoly") -> "HomoPoly":
        if not isinstance(other, HomoPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch in product")
        acc: Dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = acc.get(m, Fraction(0)) + c1 * c2
                if s != 0:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        out = HomoPoly.__new__(HomoPoly)
        out.nvars, out.degree = self.nvars, self.degree + other.degree
        out._terms = acc
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomoPoly):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.degree == other.degree
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self._terms)))

    # -- calculus and substitution ---------------------------------------

    def differentiate(self, var: int, order: int = 1) -> "HomoPoly":
        """order-th partial derivative in variable var.

        The degree tag of the result is clamped at 0 when order exceeds the
        degree (the result is then the zero polynomial of degree 0).
        """
        if not 0 <= var < self.nvars:
            raise ValueError(f"variable index {var} out of range")
        if order < 0:
            raise ValueError("negative derivative order")
        if order == 0:
            return self
        if order > self.degree:
            return HomoPoly.zero(self.nvars, 0)
        acc: Dict[Monomial, object] = {}
        for m, c in self._terms.items():
            e = m[var]
            if e < order:
                continue
            scale = falling_factorial(e, order)
            m2 = m[:var] + (e - order,) + m[var + 1 :]
            acc[m2] = acc.get(m2, Fraction(0)) + c * scale
        return HomoPoly(self.nvars, self.degree - order, acc)

    def substitute_linear(self, rows: Sequence[Sequence[object]]) -> "HomoPoly":
        """p(Mx) where variable i is replaced by the linear form rows[i].

        rows must be an nvars x nvars matrix of scalars compatible with the
        coefficient kind.  Exact expansion; no truncation anywhere.
        """
        n = self.nvars
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("substitution matrix has wrong shape")
        if self.is_zero:
            return self
        forms = []
        for r in rows:
            coefs = tuple(_as_coeff(c) for c in r)
            forms.append(coefs)
        power_cache: Dict[Tuple[int, int], HomoPoly] = {}

        def var_power(i: int, e: int) -> HomoPoly:
            key = (i, e)
            got = power_cache.get(key)
            if got is None:
                got = _form_power(forms[i], e, n)
                power_cache[key] = got
            return got

        total = HomoPoly.zero(n, self.degree)
        for m, c in self._terms.items():
            piece: HomoPoly | None = None
            for i, e in enumerate(m):
                if e == 0:
                    continue
                p = var_power(i, e)
                piece = p if piece is None else piece * p
            if piece is None:  # degree-0 polynomial
                piece = HomoPoly(n, 0, {(0,) * n: Fraction(1)})
            total = total + piece.scale(c)
        return total

    def limit_at_zero(self) -> "HomoPoly":
        """Entrywise limit at eps = 0; coefficients become Fractions.

        Raises PoleAtZero (with the offending monomial as witness) if any
        coefficient has negative valuation.
        """
        acc: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            if isinstance(c, EpsScalar):
                try:
                    v = c.limit()
                except PoleAtZero as exc:
                    raise PoleAtZero(
                        f"coefficient of {m} has a pole at eps = 0", witness=m
                    ) from exc
            else:
                v = c
            if v != 0:
                acc[m] = v
        return HomoPoly(self.nvars, self.degree, acc)

    def lift_to_eps(self) -> "HomoPoly":
        """Reinterpret rational coefficients as EpsScalars."""
        acc = {
            m: (c if isinstance(c, EpsScalar) else EpsScalar.from_rational(c))
            for m, c in self._terms.items()
        }
        out = HomoPoly.__new__(HomoPoly)
        out.nvars, out.degree, out._terms = self.nvars, self.degree, acc
        return out

    def min_valuation(self) -> Tuple[int, Monomial]:
        """Minimal eps-valuation over coefficients, with a witness monomial."""
        if self.is_zero:
            raise ValueError("min_valuation of the zero polynomial")
        best = None
        best_m = None
        for m in self.monomials():
            c = self._terms[m]
            v = c.valuation() if isinstance(c, EpsScalar) else 0
            if best is None or v < best:
                best, best_m = v, m
        return best, best_m

    def restrict_zero(self, vars_to_zero: Iterable[int]) -> "HomoPoly":
        """Set the listed variables to zero."""
        kill = set(vars_to_zero)
        acc = {m: c for m, c in self._terms.items() if all(m[i] == 0 for i in kill)}
        return HomoPoly(self.nvars, self.degree, acc)

    def extend_vars(self, nvars: int) -> "HomoPoly":
        """Pad with trailing variables that the polynomial does not use."""
        if nvars < self.nvars:
            raise ValueError("extend_vars cannot shrink")
        pad = (0,) * (nvars - self.nvars)
        return HomoPoly(nvars, self.degree, {m + pad: c for m, c in self._terms.items()})

    def take_vars(self, nvars: int) -> "HomoPoly":
        """Drop trailing variables, which must be unused."""
        if nvars > self.nvars:
            raise ValueError("take_vars cannot grow")
        acc = {}
        for m, c in self._terms.items():
            if any(m[nvars:]):
                raise ValueError(f"monomial {m} uses a dropped variable")
            acc[m[:nvars]] = c
        return HomoPoly(nvars, self.degree, acc)

    def __repr__(self) -> str:
        if self.is_zero:
            return f"0[deg {self.degree}]"
        bits = []
        for m in self.monomials():
            c = self._terms[m]
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(m) if e
            )
            bits.append(f"({c!r})*{mono}" if mono else f"({c!r})")
        return " + ".join(bits)


def _compositions(total: int, parts: int):
    """All tuples of length parts of nonnegative ints summing to total."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def monomials_of_degree(nvars: int, degree: int) -> Tuple[Monomial, ...]:
    """All exponent tuples of the given degree, in graded-lex order."""
    return tuple(sorted(_compositions(degree, nvars), key=monomial_key))


def _form_power(coefs: Sequence[object], d: int, nvars: int) -> HomoPoly:
    """Expand (c . x)**d by the multinomial theorem."""
    support = [i for i, c in enumerate(coefs) if c != 0]
    if not support:
        return HomoPoly.zero(nvars, d)
    if d == 0:
        return HomoPoly(nvars, 0, {(0,) * nvars: Fraction(1)})
    acc: Dict[Monomial, object] = {}
    fact_d = factorial(d)
    for alpha in _compositions(d, len(support)):
        coef = Fraction(fact_d)
        for a in alpha:
            coef /= factorial(a)
        term = coef
        exps = [0] * nvars
        for i, a in zip(support, alpha):
            exps[i] = a
            if a:
                term = term * coefs[i] ** a
        acc[tuple(exps)] = term
    return HomoPoly(nvars, d, acc)


class LinearForm:
    """Nonzero linear form given by its coefficient vector."""

    __slots__ = ("coefs",)

    def __init__(self, coefs: Sequence[object]):
        coefs = tuple(_as_coeff(c) for c in coefs)
        if not coefs:
            raise ValueError("empty coefficient vector")
        if all(c == 0 for c in coefs):
            raise ValueError("the zero vector is not a linear form")
        # never mix scalar kinds inside one vector
        if any(isinstance(c, EpsScalar) for c in coefs):
            coefs = tuple(
                c if isinstance(c, EpsScalar) else EpsScalar.from_rational(c)
                for c in coefs
            )
        self.coefs = coefs

    @property
    def is_rational(self) -> bool:
        return not isinstance(self.coefs[0], EpsScalar)

    @property
    def nvars(self) -> int:
        return len(self.coefs)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "LinearForm":
        return cls(tuple(Fraction(1 if i == index else 0) for i in range(nvars)))

    def power(self, d: int) -> HomoPoly:
        return _form_power(self.coefs, d, self.nvars)

    def to_poly(self) -> HomoPoly:
        return self.power(1)

    def scale(self, s) -> "LinearForm":
        s = _as_coeff(s)
        if s == 0:
            raise ValueError("scaling a form by zero")
        return LinearForm(tuple(c * s for c in self.coefs))

    def substitute(self, rows: Sequence[Sequence[object]]) -> "LinearForm":
        """The form x -> self(Mx); coefficient vector becomes c . M."""
        n = self.nvars
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("substitution matrix has wrong shape")
        out = [Fraction(0)] * n
        for i, ci in enumerate(self.coefs):
            if ci == 0:
                continue
            for j in range(n):
                mij = _as_coeff(rows[i][j])
                if mij != 0:
                    out[j] = out[j] + ci * mij
        return LinearForm(out)

    def derivative(self, var: int):
        return self.coefs[var]

    def restrict_zero(self, vars_to_zero: Iterable[int]) -> "LinearForm | None":
        """Zero out the listed coordinates; None if the form vanishes."""
        kill = set(vars_to_zero)
        out = tuple(Fraction(0) if i in kill else c for i, c in enumerate(self.coefs))
        if all(c == 0 for c in out):
            return None
        return LinearForm(out)

    def extend_vars(self, nvars: int) -> "LinearForm":
        if nvars < self.nvars:
            raise ValueError("extend_vars cannot shrink")
        return LinearForm(self.coefs + (Fraction(0),) * (nvars - self.nvars))

    def take_vars(self, nvars: int) -> "LinearForm":
        if any(c != 0 for c in self.coefs[nvars:]):
            raise ValueError("form uses a dropped variable")
        return LinearForm(self.coefs[:nvars])

    def is_parallel(self, other: "LinearForm") -> bool:
        """True if the two forms are proportional."""
        if self.nvars != other.nvars:
            return False
        ratio = None
        for a, b in zip(self.coefs, other.coefs):
            if a == 0 and b == 0:
                continue
            if a == 0 or b == 0:
                return False
            r = a / b
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.coefs == other.coefs

    def __hash__(self):
        return hash(self.coefs)

    def __repr__(self) -> str:
        bits = []
        for i, c in enumerate(self.coefs):
            if c != 0:
                bits.append(f"({c!r})*x{i}")
        return " + ".join(bits)


def substitute_linear(p: HomoPoly, rows: Sequence[Sequence[object]]) -> HomoPoly:
    """Module-level alias for HomoPoly.substitute_linear."""
    return p.substitute_linear(rows)


def differentiate(p: HomoPoly, var: int, order: int = 1) -> HomoPoly:
    """Module-level alias for HomoPoly.differentiate."""
    return p.differentiate(var, order)
