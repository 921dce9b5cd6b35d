"""Scalar and matrix-valued differential forms with rational coefficients.

A :class:`DifferentialForm` of degree ``k`` on ``nvars`` coordinates stores a
map from strictly increasing index tuples ``(i1 < ... < ik)`` (the basis
element ``dz_i1 ^ ... ^ dz_ik``) to non-zero :class:`RationalFunction`
coefficients.  :class:`MatrixForm` is a rectangular array of forms of one
common degree; its wedge product is matrix multiplication with the scalar
wedge on entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .polyalg import (
    AlgebraError,
    ArityError,
    GaussianRational,
    Polynomial,
    RationalFunction,
    default_names,
)

__all__ = [
    "FormError",
    "DimensionError",
    "SingularMatrixError",
    "NonPolynomialError",
    "DifferentialForm",
    "MatrixForm",
    "PolyMap",
    "wedge",
    "exterior_derivative",
    "determinant",
    "matrix_inverse",
    "log_derivative",
    "pullback",
    "homotopy_contraction",
]


class FormError(ValueError):
    """Malformed differential-form data."""


class DimensionError(FormError):
    """Matrix shapes, degrees or arities do not fit together."""


class SingularMatrixError(AlgebraError):
    """The determinant of a matrix of functions vanishes identically."""


class NonPolynomialError(FormError):
    """An operation that needs polynomial coefficients met a proper fraction."""


def _as_rf(value, nvars: int) -> RationalFunction:
    if isinstance(value, RationalFunction):
        if value.nvars != nvars:
            raise ArityError(f"coefficient has {value.nvars} variables, expected {nvars}")
        return value
    if isinstance(value, Polynomial):
        if value.nvars != nvars:
            raise ArityError(f"coefficient has {value.nvars} variables, expected {nvars}")
        return RationalFunction.from_polynomial(value)
    return RationalFunction.constant(value, nvars)


def _merge_sign(left: tuple, right: tuple) -> int:
    """Sign of the permutation sorting ``left + right``; 0 if they overlap."""
    inversions = 0
    for a in left:
        for b in right:
            if a == b:
                return 0
            if a > b:
                inversions += 1
    return -1 if inversions & 1 else 1


class DifferentialForm:
    """A homogeneous differential form of fixed degree."""

    __slots__ = ("nvars", "degree", "_terms")

    def __init__(self, nvars: int, degree: int, terms=None):
        if degree < 0 or degree > nvars:
            raise DimensionError(f"degree {degree} impossible on {nvars} coordinates")
        clean: dict[tuple, RationalFunction] = {}
        for idx, coeff in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DimensionError(f"basis index {idx} does not have degree {degree}")
            if any(not 0 <= v < nvars for v in idx):
                raise DimensionError(f"basis index {idx} out of range")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise FormError(f"basis index {idx} is not strictly increasing")
            c = _as_rf(coeff, nvars)
            if idx in clean:
                c = clean[idx] + c
            if c.is_zero:
                clean.pop(idx, None)
            else:
                clean[idx] = c
        self.nvars = nvars
        self.degree = degree
        self._terms = clean

    @classmethod
    def _raw(cls, nvars: int, degree: int, terms: dict) -> "DifferentialForm":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.degree = degree
        obj._terms = terms
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, degree: int) -> "DifferentialForm":
        return cls._raw(nvars, degree, {})

    @classmethod
    def function(cls, f, nvars: int | None = None) -> "DifferentialForm":
        """The degree-0 form carrying the function ``f``."""
        if nvars is None:
            nvars = f.nvars
        c = _as_rf(f, nvars)
        return cls._raw(nvars, 0, {(): c} if c else {})

    @classmethod
    def differential(cls, var: int, nvars: int) -> "DifferentialForm":
        """The basis 1-form ``dz_var``."""
        if not 0 <= var < nvars:
            raise DimensionError(f"variable {var} out of range")
        return cls._raw(nvars, 1, {(var,): RationalFunction.one(nvars)})

    @classmethod
    def one_form(cls, coefficients: Sequence) -> "DifferentialForm":
        """``sum_k coefficients[k] dz_k``; the arity is read off the coefficients."""
        nvars = len(coefficients)
        return cls(nvars, 1, {(k,): c for k, c in enumerate(coefficients) if _nonzero(c)})

    # -- inspection ------------------------------------------------------
    def items(self):
        return self._terms.items()

    def sorted_items(self) -> list[tuple[tuple, RationalFunction]]:
        return sorted(self._terms.items())

    def coefficient(self, idx: Sequence[int]) -> RationalFunction:
        return self._terms.get(tuple(idx), RationalFunction.zero(self.nvars))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def as_function(self) -> RationalFunction:
        if self.degree != 0:
            raise DimensionError("only a degree-0 form is a function")
        return self._terms.get((), RationalFunction.zero(self.nvars))

    def has_polynomial_coefficients(self) -> bool:
        return all(c.is_polynomial for c in self._terms.values())

    def map_coefficients(self, fn: Callable[[RationalFunction], RationalFunction]) -> "DifferentialForm":
        out = {}
        for idx, c in self._terms.items():
            v = fn(c)
            if not v.is_zero:
                out[idx] = v
        return DifferentialForm._raw(self.nvars, self.degree, out)

    # -- linear structure ------------------------------------------------
    def _check(self, other: "DifferentialForm") -> None:
        if self.nvars != other.nvars:
            raise ArityError(f"forms on {self.nvars} and {other.nvars} coordinates")
        if self.degree != other.degree:
            raise DimensionError(f"cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for idx, c in other._terms.items():
            if idx in out:
                s = out[idx] + c
                if s.is_zero:
                    del out[idx]
                else:
                    out[idx] = s
            else:
                out[idx] = c
        return DifferentialForm._raw(self.nvars, self.degree, out)

    def __neg__(self):
        return DifferentialForm._raw(self.nvars, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for idx, c in other._terms.items():
            if idx in out:
                s = out[idx] - c
                if s.is_zero:
                    del out[idx]
                else:
                    out[idx] = s
            else:
                out[idx] = -c
        return DifferentialForm._raw(self.nvars, self.degree, out)

    def scale(self, f) -> "DifferentialForm":
        """Multiply every coefficient by the function ``f``."""
        f = _as_rf(f, self.nvars)
        if f.is_zero:
            return DifferentialForm.zero(self.nvars, self.degree)
        return self.map_coefficients(lambda c: c * f)

    def __mul__(self, other):
        if isinstance(other, DifferentialForm):
            return self.wedge(other)
        if isinstance(other, (RationalFunction, Polynomial, int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        if self.nvars != other.nvars:
            raise ArityError(f"forms on {self.nvars} and {other.nvars} coordinates")
        degree = self.degree + other.degree
        if degree > self.nvars or not self._terms or not other._terms:
            return _top_zero(self.nvars, degree)
        out: dict[tuple, RationalFunction] = {}
        for i1, c1 in self._terms.items():
            for i2, c2 in other._terms.items():
                sign = _merge_sign(i1, i2)
                if not sign:
                    continue
                idx = tuple(sorted(i1 + i2))
                t = c1 * c2
                if sign < 0:
                    t = -t
                if idx in out:
                    s = out[idx] + t
                    if s.is_zero:
                        del out[idx]
                    else:
                        out[idx] = s
                else:
                    out[idx] = t
        return DifferentialForm._raw(self.nvars, degree, out)

    __xor__ = wedge

    def d(self) -> "DifferentialForm":
        """Exterior derivative."""
        n = self.nvars
        if self.degree + 1 > n:
            return _top_zero(n, self.degree + 1)
        out: dict[tuple, RationalFunction] = {}
        for idx, c in self._terms.items():
            for v in sorted(c.variables_used()):
                if v in idx:
                    continue
                dc = c.derivative(v)
                if dc.is_zero:
                    continue
                pos = sum(1 for k in idx if k < v)
                new = tuple(sorted(idx + (v,)))
                t = -dc if pos & 1 else dc
                if new in out:
                    s = out[new] + t
                    if s.is_zero:
                        del out[new]
                    else:
                        out[new] = s
                else:
                    out[new] = t
        return DifferentialForm._raw(n, self.degree + 1, out)

    def interior(self, vector: Sequence) -> "DifferentialForm":
        """Contraction with the vector field ``sum_k vector[k] d/dz_k``."""
        if self.degree == 0:
            raise DimensionError("cannot contract a function with a vector field")
        comps = [_as_rf(v, self.nvars) for v in vector]
        if len(comps) != self.nvars:
            raise ArityError("vector field needs one component per coordinate")
        out: dict[tuple, RationalFunction] = {}
        for idx, c in self._terms.items():
            for r, v in enumerate(idx):
                if comps[v].is_zero:
                    continue
                rest = idx[:r] + idx[r + 1:]
                t = c * comps[v]
                if r & 1:
                    t = -t
                out[rest] = out[rest] + t if rest in out else t
        return DifferentialForm(self.nvars, self.degree - 1, out)

    def pullback(self, F: "PolyMap") -> "DifferentialForm":
        return pullback(F, self)

    def truncate(self, order: int) -> "DifferentialForm":
        """Keep coefficient terms of total degree <= ``order`` (polynomial forms only)."""
        out = {}
        for idx, c in self._terms.items():
            if not c.is_polynomial:
                raise NonPolynomialError("truncation needs polynomial coefficients")
            p = c.num.truncate(order)
            if p:
                out[idx] = RationalFunction.from_polynomial(p)
        return DifferentialForm._raw(self.nvars, self.degree, out)

    # -- equality --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            if self.degree == 0 and isinstance(other, (RationalFunction, Polynomial, int, Fraction, GaussianRational)):
                return self.as_function == other
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.degree != other.degree:
            return self.is_zero and other.is_zero
        if self._terms.keys() != other._terms.keys():
            return False
        return all(c == other._terms[k] for k, c in self._terms.items())

    __hash__ = None

    # -- text ------------------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.nvars)
        if not self._terms:
            return "0"
        pieces = []
        for idx, c in self.sorted_items():
            basis = "^".join(f"d({names[v]})" for v in idx)
            pieces.append(_format_term(c, basis, names))
        out = pieces[0]
        for txt in pieces[1:]:
            out += " - " + txt[1:] if txt.startswith("-") else " + " + txt
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"DifferentialForm(deg={self.degree}, {self.format()!r})"


def _top_zero(nvars: int, degree: int) -> DifferentialForm:
    # forms of degree > nvars are zero; keep the nominal degree for bookkeeping
    return DifferentialForm._raw(nvars, degree, {})


def _nonzero(c) -> bool:
    if isinstance(c, (RationalFunction, Polynomial)):
        return not c.is_zero
    return bool(c)


def _format_term(c: RationalFunction, basis: str, names: Sequence[str]) -> str:
    if not basis:
        return c.format(names)
    if c == 1:
        return basis
    if c == -1:
        return "-" + basis
    txt = c.format(names)
    if c.is_polynomial and len(c.num) > 1:
        txt = "(" + txt + ")"
    return txt + "*" + basis


# ---------------------------------------------------------------------------
# Matrix-valued forms
# ---------------------------------------------------------------------------


class MatrixForm:
    """A ``rows x cols`` matrix of differential forms of a single degree."""

    __slots__ = ("rows", "cols", "degree", "nvars", "_entries")

    def __init__(self, entries: Sequence[Sequence[DifferentialForm]]):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise DimensionError("matrix forms must have at least one row and one column")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged matrix")
        first = rows[0][0]
        for r in rows:
            for e in r:
                if not isinstance(e, DifferentialForm):
                    raise FormError("matrix entries must be DifferentialForm instances")
                if e.nvars != first.nvars:
                    raise ArityError("matrix entries live on different coordinate systems")
                if e.degree != first.degree:
                    raise DimensionError("mixed-degree matrix forms are not supported")
        self.rows = len(rows)
        self.cols = cols
        self.degree = first.degree
        self.nvars = first.nvars
        self._entries = tuple(tuple(r) for r in rows)

    @classmethod
    def _raw(cls, entries, nvars: int, degree: int) -> "MatrixForm":
        obj = object.__new__(cls)
        obj._entries = tuple(tuple(r) for r in entries)
        obj.rows = len(obj._entries)
        obj.cols = len(obj._entries[0])
        obj.nvars = nvars
        obj.degree = degree
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int, nvars: int, degree: int) -> "MatrixForm":
        z = DifferentialForm.zero(nvars, degree)
        return cls._raw([[z] * cols for _ in range(rows)], nvars, degree)

    @classmethod
    def identity(cls, q: int, nvars: int) -> "MatrixForm":
        one = DifferentialForm.function(RationalFunction.one(nvars))
        z = DifferentialForm.zero(nvars, 0)
        return cls._raw([[one if i == j else z for j in range(q)] for i in range(q)], nvars, 0)

    @classmethod
    def from_functions(cls, rows: Sequence[Sequence], nvars: int) -> "MatrixForm":
        """Degree-0 matrix from functions, polynomials or scalars."""
        return cls([[DifferentialForm.function(_as_rf(v, nvars)) for v in r] for r in rows])

    @classmethod
    def column(cls, forms: Sequence[DifferentialForm]) -> "MatrixForm":
        return cls([[f] for f in forms])

    @classmethod
    def diagonal(cls, forms: Sequence[DifferentialForm]) -> "MatrixForm":
        n = len(forms)
        z = DifferentialForm.zero(forms[0].nvars, forms[0].degree)
        return cls([[forms[i] if i == j else z for j in range(n)] for i in range(n)])

    # -- inspection ------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key) -> DifferentialForm:
        i, j = key
        return self._entries[i][j]

    def entries(self) -> tuple[tuple[DifferentialForm, ...], ...]:
        return self._entries

    def iter_entries(self) -> Iterator[tuple[int, int, DifferentialForm]]:
        for i, r in enumerate(self._entries):
            for j, e in enumerate(r):
                yield i, j, e

    def nonzero_entries(self) -> list[tuple[int, int, DifferentialForm]]:
        return [(i, j, e) for i, j, e in self.iter_entries() if not e.is_zero]

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for _, _, e in self.iter_entries())

    def function_entries(self) -> list[list[RationalFunction]]:
        if self.degree != 0:
            raise DimensionError("only degree-0 matrices hold functions")
        return [[e.as_function for e in r] for r in self._entries]

    def map_entries(self, fn: Callable[[DifferentialForm], DifferentialForm]) -> "MatrixForm":
        return MatrixForm([[fn(e) for e in r] for r in self._entries])

    def transpose(self) -> "MatrixForm":
        return MatrixForm._raw(list(zip(*self._entries)), self.nvars, self.degree)

    def row(self, i: int) -> "MatrixForm":
        return MatrixForm._raw([self._entries[i]], self.nvars, self.degree)

    def with_entry(self, i: int, j: int, value: DifferentialForm) -> "MatrixForm":
        rows = [list(r) for r in self._entries]
        rows[i][j] = value
        return MatrixForm(rows)

    # -- algebra ---------------------------------------------------------
    def _check_same(self, other: "MatrixForm") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.nvars != other.nvars:
            raise ArityError("matrix forms on different coordinate systems")
        if self.degree != other.degree:
            raise DimensionError(f"degree mismatch {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, MatrixForm):
            return NotImplemented
        self._check_same(other)
        return MatrixForm._raw(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._entries, other._entries)],
            self.nvars,
            self.degree,
        )

    def __sub__(self, other):
        if not isinstance(other, MatrixForm):
            return NotImplemented
        self._check_same(other)
        return MatrixForm._raw(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self._entries, other._entries)],
            self.nvars,
            self.degree,
        )

    def __neg__(self):
        return MatrixForm._raw([[-a for a in r] for r in self._entries], self.nvars, self.degree)

    def scale(self, f) -> "MatrixForm":
        return MatrixForm._raw([[a.scale(f) for a in r] for r in self._entries], self.nvars, self.degree)

    def wedge(self, other: "MatrixForm") -> "MatrixForm":
        if self.cols != other.rows:
            raise DimensionError(f"cannot wedge {self.shape} with {other.shape}")
        if self.nvars != other.nvars:
            raise ArityError("matrix forms on different coordinate systems")
        degree = self.degree + other.degree
        out = []
        for i in range(self.rows):
            row = []
            for t in range(other.cols):
                acc = DifferentialForm.zero(self.nvars, degree)
                for j in range(self.cols):
                    a = self._entries[i][j]
                    b = other._entries[j][t]
                    if a.is_zero or b.is_zero:
                        continue
                    acc = acc + a.wedge(b)
                row.append(acc)
            out.append(row)
        return MatrixForm._raw(out, self.nvars, degree)

    __xor__ = wedge
    __matmul__ = wedge

    def d(self) -> "MatrixForm":
        return MatrixForm._raw([[a.d() for a in r] for r in self._entries], self.nvars, self.degree + 1)

    def pullback(self, F: "PolyMap") -> "MatrixForm":
        return pullback(F, self)

    def truncate(self, order: int) -> "MatrixForm":
        return MatrixForm._raw([[a.truncate(order) for a in r] for r in self._entries], self.nvars, self.degree)

    # -- equality --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MatrixForm):
            return NotImplemented
        if self.shape != other.shape or self.nvars != other.nvars:
            return False
        return all(a == b for r1, r2 in zip(self._entries, other._entries) for a, b in zip(r1, r2))

    __hash__ = None

    def format(self, names: Sequence[str] | None = None) -> list[list[str]]:
        return [[e.format(names) for e in r] for r in self._entries]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.format()) + "]"

    def __repr__(self):
        return f"MatrixForm({self.rows}x{self.cols}, deg={self.degree}, {self})"


# ---------------------------------------------------------------------------
# Maps and pullbacks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyMap:
    """A map ``F: C^m -> C^n`` given by ``n`` rational functions of ``m`` variables."""

    source_nvars: int
    components: tuple

    def __post_init__(self):
        comps = tuple(_as_rf(c, self.source_nvars) for c in self.components)
        object.__setattr__(self, "components", comps)

    @property
    def target_nvars(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(n, tuple(RationalFunction.variable(k, n) for k in range(n)))

    def after(self, inner: "PolyMap") -> "PolyMap":
        """The composite ``self o inner`` (apply ``inner`` first)."""
        if inner.target_nvars != self.source_nvars:
            raise ArityError("maps do not compose")
        return PolyMap(inner.source_nvars, tuple(c.compose(list(inner.components)) for c in self.components))

    def differentials(self) -> list[DifferentialForm]:
        n = self.source_nvars
        out = []
        for c in self.components:
            out.append(DifferentialForm(n, 1, {(v,): c.derivative(v) for v in sorted(c.variables_used())}))
        return out


def pullback(F: PolyMap, A):
    """Pull a form or matrix form back along ``F``.

    Coefficients are composed with ``F`` and ``dz_i`` becomes ``dF_i``.
    """
    if isinstance(A, MatrixForm):
        cache: dict = {}
        out = [[_pullback_form(F, e, cache) for e in r] for r in A.entries()]
        return MatrixForm._raw(out, F.source_nvars, A.degree)
    return _pullback_form(F, A, {})


def _pullback_form(F: PolyMap, form: DifferentialForm, cache: dict) -> DifferentialForm:
    if form.nvars != F.target_nvars:
        raise ArityError(f"form lives on {form.nvars} coordinates, map targets {F.target_nvars}")
    m = F.source_nvars
    comps = list(F.components)
    if "d" not in cache:
        cache["d"] = F.differentials()
    dF = cache["d"]
    total = DifferentialForm.zero(m, form.degree)
    for idx, c in form.items():
        basis = cache.get(idx)
        if basis is None:
            basis = DifferentialForm.function(RationalFunction.one(m))
            for v in idx:
                basis = basis.wedge(dF[v])
            cache[idx] = basis
        if basis.is_zero:
            continue
        total = total + basis.scale(c.compose(comps))
    return total


# ---------------------------------------------------------------------------
# Matrix functions
# ---------------------------------------------------------------------------


def _function_matrix(G: MatrixForm) -> list[list[RationalFunction]]:
    if G.degree != 0:
        raise DimensionError("expected a degree-0 matrix")
    if G.rows != G.cols:
        raise DimensionError(f"expected a square matrix, got {G.shape}")
    return G.function_entries()


def _det(M: list[list[RationalFunction]], nvars: int) -> RationalFunction:
    memo: dict = {}

    def minor(rows: tuple, cols: tuple) -> RationalFunction:
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if len(rows) == 1:
            val = M[rows[0]][cols[0]]
        else:
            r0 = rows[0]
            rest = rows[1:]
            val = RationalFunction.zero(nvars)
            for k, c in enumerate(cols):
                a = M[r0][c]
                if a.is_zero:
                    continue
                sub = minor(rest, cols[:k] + cols[k + 1:])
                if sub.is_zero:
                    continue
                t = a * sub
                val = val - t if k & 1 else val + t
        memo[key] = val
        return val

    n = len(M)
    return minor(tuple(range(n)), tuple(range(n)))


def determinant(G: MatrixForm) -> RationalFunction:
    """Determinant of a square degree-0 matrix (cofactor expansion)."""
    return _det(_function_matrix(G), G.nvars)


def matrix_inverse(G: MatrixForm) -> MatrixForm:
    """Inverse of a degree-0 matrix by the adjugate formula."""
    M = _function_matrix(G)
    n = G.nvars
    q = len(M)
    det = _det(M, n)
    if det.is_zero:
        raise SingularMatrixError("determinant vanishes identically")
    if q == 1:
        return MatrixForm.from_functions([[det.inverse()]], n)
    inv_det = det.inverse()
    out = [[None] * q for _ in range(q)]
    for i in range(q):
        for j in range(q):
            sub = [[M[r][c] for c in range(q) if c != j] for r in range(q) if r != i]
            cof = _det(sub, n)
            if (i + j) & 1:
                cof = -cof
            out[j][i] = cof * inv_det
    return MatrixForm.from_functions(out, n)


def log_derivative(G: MatrixForm) -> MatrixForm:
    """``dG . G^{-1}`` for an invertible degree-0 matrix."""
    return G.d().wedge(matrix_inverse(G))


def wedge(A, B):
    """Wedge product of forms or matrix forms."""
    return A.wedge(B)


def exterior_derivative(A):
    return A.d()


# ---------------------------------------------------------------------------
# Homotopy operator
# ---------------------------------------------------------------------------


def homotopy_contraction(omega: DifferentialForm) -> DifferentialForm:
    """Radial homotopy operator at the origin for polynomial forms.

    On a monomial ``z^a dz_I`` with ``|I| = k`` it returns
    ``z^a / (|a| + k) * sum_r (-1)^r z_{I_r} dz_{I without I_r}``, so that
    ``d K + K d`` is the identity on forms of positive degree.
    """
    if omega.degree < 1:
        raise DimensionError("the homotopy operator needs a form of positive degree")
    n = omega.nvars
    k = omega.degree
    out: dict[tuple, Polynomial] = {}
    for idx, c in omega.items():
        if not c.is_polynomial:
            raise NonPolynomialError("homotopy contraction needs polynomial coefficients")
        for e, coeff in c.num.items():
            w = coeff / (sum(e) + k)
            for r, v in enumerate(idx):
                ne = list(e)
                ne[v] += 1
                rest = idx[:r] + idx[r + 1:]
                term = Polynomial._raw(n, {tuple(ne): -w if r & 1 else w})
                out[rest] = out[rest] + term if rest in out else term
    return DifferentialForm(n, k - 1, {i: RationalFunction.from_polynomial(p) for i, p in out.items() if p})
