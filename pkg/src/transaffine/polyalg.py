"""Exact arithmetic tower over the Gaussian rationals Q(i).

Three layers live here:

* :class:`GaussianRational` -- ``(a + b*i)/d`` with integer ``a, b`` and ``d > 0``.
* :class:`Polynomial` -- sparse map from exponent tuples to Gaussian rationals.
* :class:`RationalFunction` -- ``num / (x^m * f_1^e_1 * ... * f_r^e_r)``.

The denominator of a rational function is kept *factored*: a monomial part
and a tuple of monic, monomial-free polynomial factors with multiplicities.
No multivariate GCD is ever computed. Instead, monomial content is cancelled
exactly and every stored factor is trial-divided out of the numerator after
each operation.  Two fractions compare equal iff their difference has a zero
numerator, which is the cross-multiplication test.

All objects are immutable; operations return new objects.
"""

from __future__ import annotations

import contextlib
import contextvars
import heapq
import math
import operator
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "AlgebraError",
    "ArityError",
    "DegreeCapError",
    "PoleError",
    "GaussianRational",
    "Polynomial",
    "RationalFunction",
    "degree_cap",
    "get_degree_cap",
    "poly_arith",
    "rf_arith",
    "partial_derivative",
    "evaluate_at_zero",
    "default_names",
]


class AlgebraError(ArithmeticError):
    """Base class for errors raised by the exact arithmetic layer."""


class ArityError(AlgebraError, ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class DegreeCapError(AlgebraError):
    """A product would exceed the configured total-degree cap."""


class PoleError(AlgebraError):
    """A denominator vanishes identically on an evaluation set."""


_DEGREE_CAP: contextvars.ContextVar[int] = contextvars.ContextVar("degree_cap", default=64)


def get_degree_cap() -> int:
    return _DEGREE_CAP.get()


@contextlib.contextmanager
def degree_cap(limit: int) -> Iterator[None]:
    """Temporarily change the maximal total degree allowed in products."""
    if limit < 0:
        raise ValueError("degree cap must be non-negative")
    token = _DEGREE_CAP.set(limit)
    try:
        yield
    finally:
        _DEGREE_CAP.reset(token)


def default_names(nvars: int) -> list[str]:
    return [f"x{k + 1}" for k in range(nvars)]


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


class GaussianRational:
    """An element ``(a + b*i)/d`` of Q(i) kept in lowest terms, ``d > 0``."""

    __slots__ = ("_a", "_b", "_d")

    def __new__(cls, re=0, im=0):
        if isinstance(re, str):
            re = _parse_scalar(re)
        if isinstance(re, GaussianRational):
            if not isinstance(im, str) and im == 0:
                return re
            return re + GaussianRational(0, 1) * GaussianRational(im)
        if isinstance(re, complex):
            raise TypeError("floating-point complex numbers are not exact; use GaussianRational(re, im)")
        re_f = Fraction(re)
        im_f = Fraction(im)
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("floats are not accepted; pass integers, Fractions or strings")
        d1, d2 = re_f.denominator, im_f.denominator
        d = d1 * d2 // math.gcd(d1, d2)
        return cls._make(re_f.numerator * (d // d1), im_f.numerator * (d // d2), d)

    @classmethod
    def _make(cls, a: int, b: int, d: int) -> "GaussianRational":
        if d != 1:
            g = math.gcd(a, b, d)
            if g != 1:
                a //= g
                b //= g
                d //= g
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._d = d
        return obj

    # -- accessors -------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def is_integer(self) -> bool:
        return self._b == 0 and self._d == 1

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._make(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """|z|^2 as an exact rational."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._make(self._a + o._a, self._b + o._b, self._d)
        return GaussianRational._make(
            self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._make(self._a - o._a, self._b - o._b, self._d)
        return GaussianRational._make(
            self._a * o._d - o._a * self._d, self._b * o._d - o._b * self._d, self._d * o._d
        )

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, d = self._a, self._b, self._d
        c, e, f = o._a, o._b, o._d
        if b == 0 and e == 0:
            return GaussianRational._make(a * c, 0, d * f)
        return GaussianRational._make(a * c - b * e, a * e + b * c, d * f)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b, d = self._a, self._b, self._d
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational._make(d * a, -d * b, n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational._make(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    # -- text ------------------------------------------------------------
    def format(self) -> str:
        """Text accepted back by the document parser.

        Real values print as ``3`` or ``-3/4``; purely imaginary ones as
        ``3i`` or ``-3i/4``; mixed values are parenthesised.
        """
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        im_txt = _format_imag(abs(im))
        if re == 0:
            return ("-" if im < 0 else "") + im_txt
        return f"({re} {'-' if im < 0 else '+'} {im_txt})"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"


def _format_imag(value: Fraction) -> str:
    if value.denominator == 1:
        return f"{value.numerator}i"
    return f"{value.numerator}i/{value.denominator}"


def _coerce(value) -> GaussianRational | None:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, int):
        return GaussianRational._make(value, 0, 1)
    if isinstance(value, Fraction):
        return GaussianRational._make(value.numerator, 0, value.denominator)
    return None


_SCALAR_TERM = re.compile(r"([+-]?)(\d*)(i?)(?:/(\d+))?(i?)")


def _parse_scalar(text: str) -> GaussianRational:
    """Parse literals such as ``3``, ``-1/2``, ``3i/4``, ``1/2+3i`` or ``(1/2 + 3i)``."""
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError(f"invalid scalar literal {text!r}")
    re_part = Fraction(0)
    im_part = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _SCALAR_TERM.match(s, pos)
        sign, digits, i1, den, i2 = m.groups()
        imag = bool(i1) + bool(i2)
        if m.end() == pos or imag > 1 or (pos and not sign) or (not digits and not imag):
            raise ValueError(f"invalid scalar literal {text!r}")
        value = Fraction(int(digits or 1), int(den or 1))
        if sign == "-":
            value = -value
        if imag:
            im_part += value
        else:
            re_part += value
        pos = m.end()
    return GaussianRational(re_part, im_part)


ZERO = GaussianRational._make(0, 0, 1)
ONE = GaussianRational._make(1, 0, 1)
I_UNIT = GaussianRational._make(0, 1, 1)
GaussianRational.I = I_UNIT  # type: ignore[attr-defined]


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

Exponent = tuple  # tuple[int, ...]

_add_exp = operator.add


def _grlex_key(e: Exponent) -> tuple:
    return (sum(e), e)


class Polynomial:
    """Sparse multivariate polynomial over Q(i) in ``nvars`` variables.

    ``terms`` maps exponent tuples of length ``nvars`` to non-zero
    :class:`GaussianRational` coefficients.
    """

    __slots__ = ("nvars", "_terms", "_hash", "_deg", "_key")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: dict[Exponent, GaussianRational] = {}
        for exps, coeff in (terms or {}).items():
            e = tuple(int(k) for k in exps)
            if len(e) != nvars:
                raise ArityError(f"exponent {e} has length {len(e)}, expected {nvars}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = GaussianRational(coeff)
            if c:
                prev = clean.get(e)
                c = c if prev is None else prev + c
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        self.nvars = nvars
        self._terms = clean
        self._hash = None
        self._deg = None
        self._key = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        obj._deg = None
        obj._key = None
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, value, nvars: int) -> "Polynomial":
        c = GaussianRational(value)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ArityError(f"variable index {index} out of range for {nvars} variables")
        e = [0] * nvars
        e[index] = 1
        return cls._raw(nvars, {tuple(e): ONE})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): coeff})

    # -- inspection ------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self._terms.get(tuple(exps), ZERO)

    @property
    def constant_term(self) -> GaussianRational:
        return self._terms.get((0,) * self.nvars, ZERO)

    @property
    def total_degree(self) -> int:
        """Largest total degree of a term; ``-1`` for the zero polynomial."""
        if self._deg is None:
            self._deg = max((sum(e) for e in self._terms), default=-1)
        return self._deg

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self._terms), default=-1)

    def variables_used(self) -> set[int]:
        used = set()
        for e in self._terms:
            used.update(k for k, v in enumerate(e) if v)
        return used

    def leading_term(self) -> tuple[Exponent, GaussianRational]:
        """Leading term in graded-lex order (x1 > x2 > ...)."""
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def sorted_terms(self) -> list[tuple[Exponent, GaussianRational]]:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def monomial_content(self) -> Exponent:
        """Componentwise minimum of the exponents (largest dividing monomial)."""
        if not self._terms:
            return (0,) * self.nvars
        it = iter(self._terms)
        m = list(next(it))
        for e in it:
            for k, v in enumerate(e):
                if v < m[k]:
                    m[k] = v
        return tuple(m)

    # -- equality / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        c = _coerce(other)
        if c is None:
            return NotImplemented
        if not c:
            return not self._terms
        return self.is_constant and self.constant_term == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def sort_key(self) -> tuple:
        """A total order used to keep factor lists canonical."""
        if self._key is None:
            self._key = (
                self.total_degree,
                len(self._terms),
                tuple((e, c._a, c._b, c._d) for e, c in self.sorted_terms()),
            )
        return self._key

    # -- arithmetic ------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ArityError(f"arity mismatch: {self.nvars} vs {other.nvars} variables")

    def _lift(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        c = _coerce(other)
        if c is None:
            return None
        return Polynomial.constant(c, self.nvars)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        if len(o._terms) > len(self._terms):
            big, small = o._terms, self._terms
        else:
            big, small = self._terms, o._terms
        res = dict(big)
        for e, c in small.items():
            prev = res.get(e)
            if prev is None:
                res[e] = c
            else:
                s = prev + c
                if s:
                    res[e] = s
                else:
                    del res[e]
        return Polynomial._raw(self.nvars, res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        res = dict(self._terms)
        for e, c in o._terms.items():
            prev = res.get(e)
            if prev is None:
                res[e] = -c
            else:
                s = prev - c
                if s:
                    res[e] = s
                else:
                    del res[e]
        return Polynomial._raw(self.nvars, res)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def scale(self, c) -> "Polynomial":
        c = GaussianRational(c)
        if not c:
            return Polynomial.zero(self.nvars)
        if c == ONE:
            return self
        return Polynomial._raw(self.nvars, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _coerce(other)
            if c is None:
                return NotImplemented
            return self.scale(c)
        self._check(other)
        t1, t2 = self._terms, other._terms
        if not t1 or not t2:
            return Polynomial.zero(self.nvars)
        cap = _DEGREE_CAP.get()
        if self.total_degree + other.total_degree > cap:
            raise DegreeCapError(
                f"product degree {self.total_degree + other.total_degree} exceeds cap {cap}"
            )
        if len(t1) < len(t2):
            t1, t2 = t2, t1
        if len(t2) == 1:
            (e2, c2), = t2.items()
            return Polynomial._raw(
                self.nvars, {tuple(map(_add_exp, e1, e2)): c1 * c2 for e1, c1 in t1.items()}
            )
        return Polynomial._raw(self.nvars, _int_product(t1, t2))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Polynomial.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, m: Exponent) -> "Polynomial":
        if not any(m):
            return self
        return Polynomial._raw(
            self.nvars, {tuple(map(_add_exp, e, m)): c for e, c in self._terms.items()}
        )

    def div_monomial(self, m: Exponent) -> "Polynomial":
        """Exact division by ``x^m``; caller guarantees divisibility."""
        if not any(m):
            return self
        return Polynomial._raw(
            self.nvars, {tuple(map(operator.sub, e, m)): c for e, c in self._terms.items()}
        )

    def exquo(self, divisor: "Polynomial") -> "Polynomial | None":
        """Return ``q`` with ``self == q * divisor`` or ``None`` if no such q."""
        self._check(divisor)
        g = divisor._terms
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._terms:
            return self
        if len(g) == 1:
            (eg, cg), = g.items()
            inv = cg.inverse()
            out = {}
            for e, c in self._terms.items():
                m = tuple(map(operator.sub, e, eg))
                if min(m) < 0:
                    return None
                out[m] = c * inv
            return Polynomial._raw(self.nvars, out)
        if self.total_degree < divisor.total_degree or self.min_degree() < divisor.min_degree():
            return None
        for k in range(self.nvars):
            if divisor.degree_in(k) > self.degree_in(k):
                return None
        eg, cg = divisor.leading_term()
        low_g = min(g, key=_grlex_key)
        low_f = min(self._terms, key=_grlex_key)
        if any(a < b for a, b in zip(low_f, low_g)):
            return None
        quot = _int_exquo(self, divisor, eg)
        return None if quot is None else Polynomial._raw(self.nvars, quot)

    # -- calculus / substitution ----------------------------------------
    def derivative(self, var: int) -> "Polynomial":
        if not 0 <= var < self.nvars:
            raise ArityError(f"variable index {var} out of range")
        out = {}
        for e, c in self._terms.items():
            k = e[var]
            if k:
                ne = e[:var] + (k - 1,) + e[var + 1:]
                out[ne] = c * k
        return Polynomial._raw(self.nvars, out)

    def subs_zero(self, variables: Iterable[int]) -> "Polynomial":
        vs = list(variables)
        return Polynomial._raw(
            self.nvars, {e: c for e, c in self._terms.items() if all(e[v] == 0 for v in vs)}
        )

    def compose(self, values: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``values[k]`` for variable ``k``; all values share one arity."""
        if len(values) != self.nvars:
            raise ArityError(f"expected {self.nvars} substitution values, got {len(values)}")
        if not values:
            return self
        target = values[0].nvars
        powers: list[list[Polynomial]] = [[Polynomial.one(target)] for _ in values]
        result = Polynomial.zero(target)
        for e, c in self._terms.items():
            term = Polynomial.constant(c, target)
            for k, p in enumerate(e):
                if p:
                    cache = powers[k]
                    while len(cache) <= p:
                        cache.append(cache[-1] * values[k])
                    term = term * cache[p]
            result = result + term
        return result

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._raw(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == degree})

    def truncate(self, order: int) -> "Polynomial":
        """Drop every term of total degree greater than ``order``."""
        if self.total_degree <= order:
            return self
        return Polynomial._raw(self.nvars, {e: c for e, c in self._terms.items() if sum(e) <= order})

    def mul_truncated(self, other: "Polynomial", order: int) -> "Polynomial":
        """Product keeping only terms of total degree <= ``order``."""
        self._check(other)
        acc: dict = {}
        get = acc.get
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            if d1 > order:
                continue
            for e2, c2 in other._terms.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(map(_add_exp, e1, e2))
                prev = get(e)
                acc[e] = c1 * c2 if prev is None else prev + c1 * c2
        return Polynomial._raw(self.nvars, {e: c for e, c in acc.items() if c})

    def embed(self, nvars: int, positions: Sequence[int]) -> "Polynomial":
        """Rename variable ``k`` to ``positions[k]`` in a ring with ``nvars`` variables."""
        if len(positions) != self.nvars:
            raise ArityError("one target position per variable is required")
        out = {}
        for e, c in self._terms.items():
            ne = [0] * nvars
            for k, p in enumerate(e):
                ne[positions[k]] += p
            out[tuple(ne)] = c
        return Polynomial._raw(nvars, out)

    def evaluate(self, point: Sequence) -> GaussianRational:
        total = ZERO
        pt = [GaussianRational(v) for v in point]
        for e, c in self._terms.items():
            t = c
            for k, p in enumerate(e):
                if p:
                    t = t * pt[k] ** p
            total = total + t
        return total

    # -- text ------------------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.nvars)
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = _format_monomial(e, names)
            if not mono:
                txt = c.format()
            elif c == ONE:
                txt = mono
            elif c == -ONE:
                txt = "-" + mono
            else:
                txt = c.format() + "*" + mono
            pieces.append(txt)
        out = pieces[0]
        for txt in pieces[1:]:
            out += " - " + txt[1:] if txt.startswith("-") else " + " + txt
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.format()!r})"


def _integer_terms(terms: dict) -> tuple[int, list, bool]:
    """Clear denominators: ``terms == {e: (a + b i)/D}`` with integer ``a, b``."""
    den = 1
    for c in terms.values():
        d = c._d
        if d != 1 and den % d:
            den = den * d // math.gcd(den, d)
    real = True
    out = []
    for e, c in terms.items():
        k = den // c._d
        if c._b:
            real = False
        out.append((e, c._a * k, c._b * k))
    return den, out, real


def _int_product(t1: dict, t2: dict) -> dict:
    """Coefficient dict of the product, accumulated over Z[i]."""
    d1, l1, r1 = _integer_terms(t1)
    d2, l2, r2 = _integer_terms(t2)
    den = d1 * d2
    make = GaussianRational._make
    if r1 and r2:
        acc: dict = {}
        get = acc.get
        for e2, a2, _ in l2:
            for e1, a1, _ in l1:
                e = tuple(map(_add_exp, e1, e2))
                acc[e] = get(e, 0) + a1 * a2
        return {e: make(v, 0, den) for e, v in acc.items() if v}
    re: dict = {}
    im: dict = {}
    rget = re.get
    iget = im.get
    for e2, a2, b2 in l2:
        for e1, a1, b1 in l1:
            e = tuple(map(_add_exp, e1, e2))
            re[e] = rget(e, 0) + a1 * a2 - b1 * b2
            im[e] = iget(e, 0) + a1 * b2 + b1 * a2
    return {e: make(v, im[e], den) for e, v in re.items() if v or im[e]}


def _int_exquo(f: "Polynomial", g: "Polynomial", eg: Exponent):
    """Exact division over Z[i] with a running scalar denominator."""
    df, lf, _ = _integer_terms(f._terms)
    dg, lg, _ = _integer_terms(g._terms)
    # f/g == dg * (F/df) / G with F, G over Z[i]
    la, lb = next((a, b) for e, a, b in lg if e == eg)
    norm = la * la + lb * lb
    rem = {e: (a, b) for e, a, b in lf}
    den = df
    heap = [(-sum(e), tuple(-v for v in e)) for e in rem]
    heapq.heapify(heap)
    quot: dict = {}
    sub = operator.sub
    make = GaussianRational._make
    gcd = math.gcd
    while rem:
        while True:
            _, negexp = heapq.heappop(heap)
            e = tuple(-v for v in negexp)
            if e in rem:
                break
        m = tuple(map(sub, e, eg))
        if min(m) < 0:
            return None
        ra, rb = rem[e]
        na = ra * la + rb * lb
        nb = rb * la - ra * lb
        if na % norm or nb % norm:
            s = norm // gcd(norm, na, nb)
            rem = {k: (a * s, b * s) for k, (a, b) in rem.items()}
            den *= s
            na *= s
            nb *= s
        qa, qb = na // norm, nb // norm
        quot[m] = make(qa * dg, qb * dg, den)
        for ge, ga, gb in lg:
            t = tuple(map(_add_exp, ge, m))
            pa = qa * ga - qb * gb
            pb = qa * gb + qb * ga
            prev = rem.get(t)
            if prev is None:
                rem[t] = (-pa, -pb)
                heapq.heappush(heap, (-sum(t), tuple(-v for v in t)))
            else:
                a, b = prev[0] - pa, prev[1] - pb
                if a or b:
                    rem[t] = (a, b)
                else:
                    del rem[t]
    return quot


def _format_monomial(e: Exponent, names: Sequence[str]) -> str:
    parts = []
    for k, p in enumerate(e):
        if p == 1:
            parts.append(names[k])
        elif p > 1:
            parts.append(f"{names[k]}^{p}")
    return "*".join(parts)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Exact ``add``/``sub``/``mul`` of two polynomials in the same ring."""
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

Factors = tuple  # tuple[tuple[Polynomial, int], ...]


def _split_denominator(p: Polynomial) -> tuple[GaussianRational, Exponent, Polynomial | None]:
    """Write ``p = c * x^m * f`` with ``f`` monic and free of monomial content."""
    m = p.monomial_content()
    p1 = p.div_monomial(m)
    if p1.is_constant:
        return p1.constant_term, m, None
    _, lc = p1.leading_term()
    return lc, m, p1.scale(lc.inverse())


def _sorted_factors(fdict: dict) -> Factors:
    return tuple(sorted(((f, e) for f, e in fdict.items() if e > 0), key=lambda fe: fe[0].sort_key()))


def _cancel(num: Polynomial, mono: Exponent, fdict: dict) -> tuple[Polynomial, Exponent]:
    """Cancel monomial content and trial-divide stored factors out of ``num``.

    ``fdict`` is updated in place.
    """
    if any(mono):
        nm = num.monomial_content()
        common = tuple(map(min, nm, mono))
        if any(common):
            num = num.div_monomial(common)
            mono = tuple(map(operator.sub, mono, common))
    for f in list(fdict):
        e = fdict[f]
        while e:
            q = num.exquo(f)
            if q is None:
                break
            num = q
            e -= 1
        fdict[f] = e
    return num, mono


class RationalFunction:
    """Quotient ``num / den`` with ``den = x^mono * prod(f**e)``.

    Construct from a numerator and an arbitrary non-zero denominator
    polynomial; the denominator is split into monomial part, constant and one
    monic factor.  Equality is decided by cross-multiplication.
    """

    __slots__ = ("nvars", "num", "mono", "factors")

    def __init__(self, num, den=None, nvars: int | None = None):
        if isinstance(num, RationalFunction):
            src = num if den is None else num / RationalFunction(den, nvars=num.nvars)
            self.nvars, self.num, self.mono, self.factors = src.nvars, src.num, src.mono, src.factors
            return
        if not isinstance(num, Polynomial):
            n = nvars if nvars is not None else (den.nvars if isinstance(den, Polynomial) else None)
            if n is None:
                raise ArityError("nvars is required to build a constant rational function")
            num = Polynomial.constant(num, n)
        if den is None:
            self.nvars, self.num, self.mono, self.factors = num.nvars, num, (0,) * num.nvars, ()
            return
        if not isinstance(den, Polynomial):
            den = Polynomial.constant(den, num.nvars)
        num._check(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        c, m, f = _split_denominator(den)
        fdict = {f: 1} if f is not None else {}
        num = num.scale(c.inverse())
        r = RationalFunction._build(num, m, fdict)
        self.nvars, self.num, self.mono, self.factors = r.nvars, r.num, r.mono, r.factors

    @classmethod
    def _raw(cls, num: Polynomial, mono: Exponent, factors: Factors) -> "RationalFunction":
        obj = object.__new__(cls)
        obj.nvars = num.nvars
        obj.num = num
        obj.mono = mono
        obj.factors = factors
        return obj

    @classmethod
    def _build(cls, num: Polynomial, mono: Exponent, fdict: dict, cancel: bool = True) -> "RationalFunction":
        n = num.nvars
        if num.is_zero:
            return cls._raw(num, (0,) * n, ())
        if cancel:
            num, mono = _cancel(num, mono, fdict)
        return cls._raw(num, mono, _sorted_factors(fdict))

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "RationalFunction":
        return cls._raw(Polynomial.zero(nvars), (0,) * nvars, ())

    @classmethod
    def one(cls, nvars: int) -> "RationalFunction":
        return cls.constant(1, nvars)

    @classmethod
    def constant(cls, value, nvars: int) -> "RationalFunction":
        return cls._raw(Polynomial.constant(value, nvars), (0,) * nvars, ())

    @classmethod
    def variable(cls, index: int, nvars: int) -> "RationalFunction":
        return cls._raw(Polynomial.variable(index, nvars), (0,) * nvars, ())

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls._raw(p, (0,) * p.nvars, ())

    # -- inspection ------------------------------------------------------
    @property
    def den(self) -> Polynomial:
        """The denominator expanded into a single polynomial."""
        d = Polynomial.one(self.nvars).mul_monomial(self.mono)
        for f, e in self.factors:
            d = d * f ** e
        return d

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self):
        return not self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        """True when the stored denominator is 1."""
        return not self.factors and not any(self.mono)

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial:
            raise AlgebraError("rational function has a non-trivial denominator")
        return self.num

    @property
    def is_constant(self) -> bool:
        if self.is_polynomial and self.num.is_constant:
            return True
        return all(partial_derivative(self, k).is_zero for k in range(self.nvars))

    def constant_value(self) -> GaussianRational:
        if not self.is_constant:
            raise AlgebraError("rational function is not constant")
        if self.is_polynomial:
            return self.num.constant_term
        point = [0] * self.nvars
        # a constant fraction equals its value at any regular point
        for trial in range(1, 50):
            point = [trial + 3 * k for k in range(self.nvars)]
            den_val = self.den.evaluate(point)
            if den_val:
                return self.num.evaluate(point) / den_val
        raise AlgebraError("could not find a regular evaluation point")

    def pole_order(self, var: int) -> int:
        """Order of the pole along ``{x_var = 0}`` read off the reduced form."""
        return self.mono[var]

    def regular_at_origin(self) -> bool:
        return not any(self.mono) and all(f.constant_term for f, _ in self.factors)

    def variables_used(self) -> set[int]:
        used = self.num.variables_used() | {k for k, v in enumerate(self.mono) if v}
        for f, _ in self.factors:
            used |= f.variables_used()
        return used

    # -- arithmetic ------------------------------------------------------
    def _lift(self, other) -> "RationalFunction | None":
        if isinstance(other, RationalFunction):
            if other.nvars != self.nvars:
                raise ArityError(f"arity mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ArityError(f"arity mismatch: {self.nvars} vs {other.nvars} variables")
            return RationalFunction.from_polynomial(other)
        c = _coerce(other)
        if c is None:
            return None
        return RationalFunction.constant(c, self.nvars)

    def _same_den(self, other: "RationalFunction") -> bool:
        return self.mono == other.mono and self.factors == other.factors

    def _addsub(self, o: "RationalFunction", sign: int) -> "RationalFunction":
        if o.num.is_zero:
            return self
        if self.num.is_zero:
            return o if sign > 0 else -o
        if self._same_den(o):
            num = self.num + o.num if sign > 0 else self.num - o.num
            if not self.factors and not any(self.mono):
                return RationalFunction._raw(num, self.mono, ())
            return RationalFunction._build(num, self.mono, dict(self.factors))
        fa, fb = dict(self.factors), dict(o.factors)
        lcm = dict(fa)
        for f, e in fb.items():
            if lcm.get(f, 0) < e:
                lcm[f] = e
        mono = tuple(map(max, self.mono, o.mono))
        n = self.nvars

        def scaled(num: Polynomial, m: Exponent, fd: dict) -> Polynomial:
            out = num.mul_monomial(tuple(map(operator.sub, mono, m)))
            for f, e in lcm.items():
                k = e - fd.get(f, 0)
                if k:
                    out = out * f ** k
            return out

        left = scaled(self.num, self.mono, fa)
        right = scaled(o.num, o.mono, fb)
        num = left + right if sign > 0 else left - right
        if num.is_zero:
            return RationalFunction.zero(n)
        return RationalFunction._build(num, mono, lcm)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._addsub(o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._addsub(o, -1)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o._addsub(self, -1)

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.mono, self.factors)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero or o.num.is_zero:
            return RationalFunction.zero(self.nvars)
        if self.is_polynomial and o.is_polynomial:
            return RationalFunction._raw(self.num * o.num, self.mono, ())
        fa, fb = dict(self.factors), dict(o.factors)
        na, ma = _cancel(self.num, o.mono, fb)
        nb, mb = _cancel(o.num, self.mono, fa)
        for f, e in fb.items():
            fa[f] = fa.get(f, 0) + e
        mono = tuple(map(_add_exp, ma, mb))
        return RationalFunction._build(na * nb, mono, fa, cancel=False)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        c, m, f = _split_denominator(self.num)
        new_num = Polynomial.one(self.nvars).mul_monomial(self.mono).scale(c.inverse())
        for g, e in self.factors:
            new_num = new_num * g ** e
        fdict = {f: 1} if f is not None else {}
        return RationalFunction._build(new_num, m, fdict)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if self.is_polynomial:
            return RationalFunction._raw(self.num ** n, self.mono, ())
        result = RationalFunction.one(self.nvars)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c) -> "RationalFunction":
        return RationalFunction._raw(self.num.scale(c), self.mono, self.factors) if c else RationalFunction.zero(self.nvars)

    # -- equality --------------------------------------------------------
    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, RationalFunction) else other
        if o is None:
            return NotImplemented
        if o.nvars != self.nvars:
            return False
        if self._same_den(o):
            return self.num == o.num
        return (self - o).num.is_zero

    __hash__ = None  # equality is semantic and has no canonical normal form

    # -- calculus --------------------------------------------------------
    def derivative(self, var: int) -> "RationalFunction":
        if not 0 <= var < self.nvars:
            raise ArityError(f"variable index {var} out of range")
        num = self.num
        a = self.mono[var]
        dep = [(f, e) for f, e in self.factors if f.degree_in(var) > 0]
        dnum = num.derivative(var)
        if a == 0 and not dep:
            if dnum.is_zero:
                return RationalFunction.zero(self.nvars)
            return RationalFunction._build(dnum, self.mono, dict(self.factors))
        n = self.nvars
        xv = Polynomial.variable(var, n) if a else Polynomial.one(n)
        prod = Polynomial.one(n)
        for f, _ in dep:
            prod = prod * f
        s = Polynomial.zero(n)
        for k, (f, e) in enumerate(dep):
            t = f.derivative(var).scale(e)
            for j, (g, _) in enumerate(dep):
                if j != k:
                    t = t * g
            s = s + t
        new_num = dnum * xv * prod - num * (prod.scale(a) + xv * s)
        mono = list(self.mono)
        if a:
            mono[var] += 1
        fdict = dict(self.factors)
        for f, _ in dep:
            fdict[f] += 1
        return RationalFunction._build(new_num, tuple(mono), fdict)

    def subs_zero(self, variables: Iterable[int]) -> "RationalFunction":
        vs = sorted(set(variables))
        for v in vs:
            if not 0 <= v < self.nvars:
                raise ArityError(f"variable index {v} out of range")
            if self.mono[v]:
                raise PoleError(f"denominator vanishes on x{v + 1} = 0")
        num = self.num.subs_zero(vs)
        den = Polynomial.one(self.nvars).mul_monomial(self.mono)
        for f, e in self.factors:
            f0 = f.subs_zero(vs)
            if f0.is_zero:
                raise PoleError("denominator factor vanishes identically on the evaluation set")
            den = den * f0 ** e
        return RationalFunction(num, den)

    def compose(self, values: Sequence["RationalFunction"]) -> "RationalFunction":
        """Substitute ``values[k]`` for variable ``k``."""
        if len(values) != self.nvars:
            raise ArityError(f"expected {self.nvars} substitution values, got {len(values)}")
        target = values[0].nvars if values else self.nvars
        if all(v.is_polynomial for v in values):
            polys = [v.num for v in values]
            num = self.num.compose(polys)
            den = Polynomial.one(target)
            if any(self.mono):
                den = Polynomial.one(self.nvars).mul_monomial(self.mono).compose(polys)
            for f, e in self.factors:
                den = den * f.compose(polys) ** e
            if den.is_zero:
                raise PoleError("substitution makes the denominator identically zero")
            return RationalFunction(num, den)
        num = _compose_poly_rf(self.num, values, target)
        den = _compose_poly_rf(Polynomial.one(self.nvars).mul_monomial(self.mono), values, target)
        for f, e in self.factors:
            den = den * _compose_poly_rf(f, values, target) ** e
        if den.is_zero:
            raise PoleError("substitution makes the denominator identically zero")
        return num / den

    def taylor(self, order: int) -> Polynomial:
        """Taylor polynomial at the origin, truncated at total degree ``order``."""
        if not self.regular_at_origin():
            raise PoleError("rational function has a pole at the origin")
        num = self.num.truncate(order)
        if self.is_polynomial:
            return num
        inv = Polynomial.one(self.nvars)
        for f, e in self.factors:
            fi = _series_inverse(f, order)
            for _ in range(e):
                inv = inv.mul_truncated(fi, order)
        return num.mul_truncated(inv, order)

    def evaluate(self, point: Sequence) -> GaussianRational:
        d = self.den.evaluate(point)
        if not d:
            raise PoleError("evaluation point lies on the pole set")
        return self.num.evaluate(point) / d

    # -- text ------------------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.nvars)
        num_txt = self.num.format(names)
        if self.is_polynomial:
            return num_txt
        pieces = []
        mono_txt = _format_monomial(self.mono, names)
        if mono_txt:
            pieces.extend(mono_txt.split("*"))
        for f, e in self.factors:
            ftxt = "(" + f.format(names) + ")"
            pieces.append(ftxt if e == 1 else f"{ftxt}^{e}")
        den_txt = pieces[0] if len(pieces) == 1 else "(" + "*".join(pieces) + ")"
        if len(self.num) > 1 or num_txt.startswith("("):
            num_txt = "(" + num_txt + ")"
        return f"{num_txt}/{den_txt}"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"RationalFunction({self.nvars}, {self.format()!r})"


def _compose_poly_rf(p: Polynomial, values: Sequence[RationalFunction], target: int) -> RationalFunction:
    powers: list[list[RationalFunction]] = [[RationalFunction.one(target)] for _ in values]
    total = RationalFunction.zero(target)
    for e, c in p.items():
        term = RationalFunction.constant(c, target)
        for k, m in enumerate(e):
            if m:
                cache = powers[k]
                while len(cache) <= m:
                    cache.append(cache[-1] * values[k])
                term = term * cache[m]
        total = total + term
    return total


def _series_inverse(f: Polynomial, order: int) -> Polynomial:
    """Power series of ``1/f`` at the origin truncated at ``order``; f(0) != 0."""
    c0 = f.constant_term
    if not c0:
        raise PoleError("series inverse of a polynomial vanishing at the origin")
    inv0 = c0.inverse()
    parts = [f.homogeneous_part(k) for k in range(order + 1)]
    g = [Polynomial.constant(inv0, f.nvars)]
    for k in range(1, order + 1):
        acc = Polynomial.zero(f.nvars)
        for j in range(1, k + 1):
            if parts[j]:
                acc = acc + parts[j] * g[k - j]
        g.append(acc.scale(-inv0))
    out = Polynomial.zero(f.nvars)
    for piece in g:
        out = out + piece
    return out


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Exact ``add``/``sub``/``mul``/``div`` of rational functions."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown rational-function operation {op!r}")


def partial_derivative(f: RationalFunction, var_index: int) -> RationalFunction:
    """Exact partial derivative (quotient rule on the factored denominator)."""
    if isinstance(f, Polynomial):
        f = RationalFunction.from_polynomial(f)
    return f.derivative(var_index)


def evaluate_at_zero(f: RationalFunction, variables: Iterable[int]) -> RationalFunction:
    """Substitute 0 for each listed variable; :class:`PoleError` on a pole."""
    if isinstance(f, Polynomial):
        f = RationalFunction.from_polynomial(f)
    return f.subs_zero(variables)
