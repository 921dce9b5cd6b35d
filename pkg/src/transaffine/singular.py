"""Local models at generic singular points and logarithmic decompositions.

Covers the linear diagonal field ``sum_j lambda_j z_j d/dz_j``, its kernel
log-forms, residue extraction along coordinate hyperplanes, the adaptedness
check for a pair, and the decomposition of a matrix of 1-forms in a
log-form basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .affstruct import CheckResult, StructurePair, check_compatible, check_flat
from .forms import (
    DifferentialForm,
    DimensionError,
    MatrixForm,
    determinant,
    log_derivative,
)
from .polyalg import (
    ONE,
    ZERO,
    AlgebraError,
    GaussianRational,
    RationalFunction,
)

__all__ = [
    "HigherOrderPoleError",
    "PoleOutsideDivisorError",
    "MissingWitnessError",
    "DegenerateBasisError",
    "LinearDiagonalField",
    "LogFormSystem",
    "LogDecomposition",
    "ConstancyCertificate",
    "AdaptedReport",
    "KernelDecomposition",
    "type_i_model",
    "type_i_pair",
    "resonance_search",
    "kernel_log_forms",
    "contract_with_field",
    "constancy_certificate",
    "residue_matrices",
    "check_adapted",
    "kernel_basis_decomposition",
    "log_form",
]


class _PoleLocationError(AlgebraError):
    """Pole problem at matrix ``entry`` along ``variable`` (``None`` for a non-monomial factor)."""

    def __init__(self, entry: tuple, variable: int | None, order: int = 1):
        self.entry = entry
        self.variable = variable
        self.order = order
        super().__init__(self.describe())

    def describe(self, names: Sequence[str] | None = None) -> str:
        where = "[" + ",".join(str(k + 1) for k in self.entry) + "]"
        if self.variable is None:
            return self._message(None, where)
        name = names[self.variable] if names else f"x{self.variable + 1}"
        return self._message(name, where)


class HigherOrderPoleError(_PoleLocationError):
    """A declared hyperplane carries a pole of order two or more."""

    def _message(self, name, where):
        return f"pole of order {self.order} along {name} = 0 at entry {where}"


class PoleOutsideDivisorError(_PoleLocationError):
    """A coefficient has poles off the declared coordinate hyperplanes."""

    def _message(self, name, where):
        if name is None:
            return f"pole through the origin off the declared hyperplanes at entry {where}"
        return f"pole along {name} = 0 at entry {where}, which is not a declared hyperplane"


class MissingWitnessError(ValueError):
    pass


class DegenerateBasisError(AlgebraError):
    """Residue vectors are linearly dependent."""


# ---------------------------------------------------------------------------
# Constant linear algebra over Q(i)
# ---------------------------------------------------------------------------


def _row_reduce(rows: list[list[GaussianRational]]) -> tuple[list[list[GaussianRational]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def _rank(rows) -> int:
    return len(_row_reduce(rows)[1]) if rows else 0


def _inverse(rows: list[list[GaussianRational]]) -> list[list[GaussianRational]]:
    n = len(rows)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise DegenerateBasisError("matrix is singular")
    return [r[n:] for r in red]


# ---------------------------------------------------------------------------
# Linear field and log forms
# ---------------------------------------------------------------------------


def _is_positive(c: GaussianRational) -> bool:
    return c.re > 0 or (c.re == 0 and c.im > 0)


@dataclass(frozen=True)
class LinearDiagonalField:
    """The vector field ``sum_j lambda_j z_j d/dz_j`` on ``len(eigenvalues)`` variables."""

    eigenvalues: tuple

    def __post_init__(self):
        lam = tuple(GaussianRational(v) for v in self.eigenvalues)
        if not lam:
            raise ValueError("at least one eigenvalue is required")
        if any(not v for v in lam):
            raise ValueError("eigenvalues must be nonzero")
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def nvars(self) -> int:
        return len(self.eigenvalues)

    @property
    def q(self) -> int:
        return len(self.eigenvalues) - 1

    def components(self) -> list[RationalFunction]:
        n = self.nvars
        return [RationalFunction.variable(j, n).scale(l) for j, l in enumerate(self.eigenvalues)]


def log_form(alpha: Sequence) -> DifferentialForm:
    """``sum_j alpha_j dz_j / z_j``."""
    n = len(alpha)
    terms = {}
    for j, a in enumerate(alpha):
        a = GaussianRational(a)
        if a:
            terms[(j,)] = RationalFunction.variable(j, n).inverse().scale(a)
    return DifferentialForm(n, 1, terms)


@dataclass(frozen=True)
class LogFormSystem:
    """Forms ``omega^nu = sum_j alpha^nu_j dz_j/z_j`` with independent residue vectors."""

    alphas: tuple

    def __post_init__(self):
        alphas = tuple(tuple(GaussianRational(a) for a in v) for v in self.alphas)
        if not alphas:
            raise ValueError("a log-form system needs at least one form")
        n = len(alphas[0])
        if any(len(v) != n for v in alphas):
            raise DimensionError("residue vectors have different lengths")
        if _rank([list(v) for v in alphas]) != len(alphas):
            raise DegenerateBasisError("residue vectors are linearly dependent")
        object.__setattr__(self, "alphas", alphas)

    @property
    def nvars(self) -> int:
        return len(self.alphas[0])

    @property
    def q(self) -> int:
        return len(self.alphas)

    @property
    def forms(self) -> list[DifferentialForm]:
        return [log_form(a) for a in self.alphas]

    def top_form(self) -> DifferentialForm:
        forms = self.forms
        top = forms[0]
        for f in forms[1:]:
            top = top.wedge(f)
        return top

    def annihilates(self, field: LinearDiagonalField) -> bool:
        return all(
            sum((a * l for a, l in zip(v, field.eigenvalues)), ZERO) == 0 for v in self.alphas
        )


def type_i_model(lam, nvars: int, q: int) -> MatrixForm:
    """Rows ``x dy - lambda y dx, dz_1, ..., dz_{q-1}`` on ``nvars`` coordinates."""
    if q < 1:
        raise DimensionError("q must be positive")
    if nvars < q + 1:
        raise DimensionError(f"need at least {q + 1} variables for q = {q}")
    lam = GaussianRational(lam)
    if not lam:
        raise ValueError("lambda must be nonzero")
    x = RationalFunction.variable(0, nvars)
    y = RationalFunction.variable(1, nvars)
    first = DifferentialForm(nvars, 1, {(0,): -y.scale(lam), (1,): x})
    rows = [first] + [DifferentialForm.differential(k, nvars) for k in range(2, q + 1)]
    return MatrixForm.column(rows)


def type_i_pair(lam, nvars: int, q: int) -> StructurePair:
    """Type I model with ``eta = diag(dx/x + dy/y, 0, ..., 0)``."""
    omega = type_i_model(lam, nvars, q)
    first = log_form([1, 1] + [0] * (nvars - 2))
    zero = DifferentialForm.zero(nvars, 1)
    return StructurePair(omega, MatrixForm.diagonal([first] + [zero] * (q - 1)))


def resonance_search(field: LinearDiagonalField, bound: int) -> list[tuple[int, ...]]:
    """All nonzero integer vectors ``n`` with ``|n_j| <= bound`` and ``sum n_j lambda_j = 0``.

    The last coordinate is solved for, so the search costs ``(2N+1)^q`` steps.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    lam = field.eigenvalues
    last = lam[-1].inverse()
    found = []
    for head in product(range(-bound, bound + 1), repeat=len(lam) - 1):
        s = ZERO
        for n, l in zip(head, lam):
            if n:
                s = s + l * n
        t = -(s * last)
        if not t.is_integer():
            continue
        k = int(t.re)
        if abs(k) > bound:
            continue
        vec = head + (k,)
        if any(vec):
            found.append(vec)
    return sorted(found)


def kernel_log_forms(field: LinearDiagonalField) -> LogFormSystem:
    """A basis of residue vectors ``alpha`` with ``sum_j alpha_j lambda_j = 0``.

    With pivot ``p`` (first nonzero eigenvalue) the vectors are
    ``lambda_p e_k - lambda_k e_p`` for ``k != p``, each scaled so its first
    nonzero entry is positive.
    """
    lam = field.eigenvalues
    if field.q < 1:
        raise DimensionError("need at least two eigenvalues")
    p = next(i for i, v in enumerate(lam) if v)
    alphas = []
    for k in range(len(lam)):
        if k == p:
            continue
        v = [ZERO] * len(lam)
        v[k] = lam[p]
        v[p] = -lam[k]
        lead = next(c for c in v if c)
        if not _is_positive(lead):
            v = [-c for c in v]
        alphas.append(tuple(v))
    return LogFormSystem(tuple(alphas))


def contract_with_field(omega: DifferentialForm, field: LinearDiagonalField) -> RationalFunction:
    """``omega(X) = sum_j omega_j lambda_j z_j``."""
    if omega.degree != 1:
        raise DimensionError("only 1-forms are evaluated on a vector field")
    if omega.nvars != field.nvars:
        raise DimensionError("form and field live on different coordinate systems")
    return omega.interior(field.components()).as_function


@dataclass(frozen=True)
class ConstancyCertificate:
    """Outcome of the wedge test ``df ^ omega^1 ^ ... ^ omega^q = 0``.

    ``wedge_vanishes`` is the only fact proven.  Concluding that ``f`` is
    constant also needs non-resonance, for which ``resonances`` holds the
    bounded search result (``None`` if no search was requested).
    """

    wedge_vanishes: bool
    residual: DifferentialForm
    resonances: list | None = None
    bound: int | None = None

    def __bool__(self):
        return self.wedge_vanishes


def constancy_certificate(
    f: RationalFunction,
    system: LogFormSystem,
    field: LinearDiagonalField | None = None,
    bound: int | None = None,
) -> ConstancyCertificate:
    if f.nvars != system.nvars:
        raise DimensionError("function and forms live on different coordinate systems")
    w = DifferentialForm.function(f).d().wedge(system.top_form())
    res = None
    if field is not None and bound is not None:
        res = resonance_search(field, bound)
    return ConstancyCertificate(w.is_zero, w, res, bound if res is not None else None)


# ---------------------------------------------------------------------------
# Residues
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogDecomposition:
    """``eta = remainder + sum_j A_j dy_j / y_j`` along hyperplanes ``y_j = 0``, ``j in S``."""

    hyperplanes: tuple
    residues: tuple  # MatrixForm of degree 0, one per hyperplane
    remainder: MatrixForm
    witness: MatrixForm | None = None
    residues_constant: tuple = ()
    remainder_pole_free: bool = True

    @property
    def ok(self) -> bool:
        return all(self.residues_constant) and self.remainder_pole_free

    def log_part(self) -> MatrixForm:
        total = MatrixForm.zeros(self.remainder.rows, self.remainder.cols, self.remainder.nvars, 1)
        n = self.remainder.nvars
        for j, A in zip(self.hyperplanes, self.residues):
            total = total + _times_log(A, j, n)
        return total

    def reassemble(self) -> MatrixForm:
        return self.remainder + self.log_part()

    def with_witness(self, G: MatrixForm) -> "LogDecomposition":
        return LogDecomposition(
            self.hyperplanes, self.residues, self.remainder, G, self.residues_constant, self.remainder_pole_free
        )


def _unit(j: int, n: int) -> list[int]:
    return [1 if k == j else 0 for k in range(n)]


def _times_log(A: MatrixForm, j: int, n: int) -> MatrixForm:
    """Entrywise ``A * dy_j / y_j``."""
    inv = RationalFunction.variable(j, n).inverse()
    return A.map_entries(lambda f: DifferentialForm(n, 1, {(j,): f.as_function * inv}))


def _check_poles(c: RationalFunction, S: set[int], where) -> None:
    for v, e in enumerate(c.mono):
        if not e:
            continue
        if v not in S:
            raise PoleOutsideDivisorError(where, v)
        if e >= 2:
            raise HigherOrderPoleError(where, v, e)
    for f, _ in c.factors:
        if not f.constant_term:
            raise PoleOutsideDivisorError(where, None)


def residue_matrices(eta: MatrixForm, hyperplanes: Sequence[int]) -> LogDecomposition:
    """Residue matrices ``A_j = (y_j * coefficient of dy_j)|_{y_j=0}`` and the remainder."""
    if eta.degree != 1 or eta.rows != eta.cols:
        raise DimensionError("expected a square matrix of 1-forms")
    n = eta.nvars
    S = list(dict.fromkeys(hyperplanes))
    if any(not 0 <= j < n for j in S):
        raise DimensionError("hyperplane variable out of range")
    Sset = set(S)
    for i, k, e in eta.iter_entries():
        for _, c in e.items():
            _check_poles(c, Sset, (i, k))
    residues = []
    remainder = eta
    for j in S:
        yj = RationalFunction.variable(j, n)
        rows = []
        for i in range(eta.rows):
            row = []
            for k in range(eta.cols):
                c = eta[i, k].coefficient((j,))
                row.append((c * yj).subs_zero([j]) if c else c)
            rows.append(row)
        A = MatrixForm.from_functions(rows, n)
        residues.append(A)
        remainder = remainder - _times_log(A, j, n)
    constant = tuple(all(f.as_function.is_constant for _, _, f in A.iter_entries()) for A in residues)
    pole_free = all(
        c.mono[j] == 0 for _, _, e in remainder.iter_entries() for _, c in e.items() for j in S
    )
    return LogDecomposition(tuple(S), tuple(residues), remainder, None, constant, pole_free)


@dataclass
class AdaptedReport:
    """Named checks in evaluation order, each a :class:`CheckResult`."""

    entries: list

    @property
    def ok(self) -> bool:
        return all(r.ok for _, r in self.entries)

    def __bool__(self):
        return self.ok

    def get(self, name: str) -> CheckResult:
        for n, r in self.entries:
            if n == name:
                return r
        raise KeyError(name)


def _matrix_result(M: MatrixForm) -> CheckResult:
    fails = tuple(((i, j), e) for i, j, e in M.nonzero_entries())
    return CheckResult(not fails, fails)


def check_adapted(pair: StructurePair, decomp: LogDecomposition, Y: MatrixForm | None = None) -> AdaptedReport:
    """Verify that ``decomp`` is a logarithmic decomposition of ``pair.eta`` adapted to ``pair``."""
    G = decomp.witness
    if G is None:
        raise MissingWitnessError("the decomposition carries no witness matrix G")
    entries = [("reassembly", _matrix_result(pair.eta - decomp.reassemble()))]
    entries.append(("witness-identity", _matrix_result(decomp.remainder - log_derivative(G))))
    bad = []
    det = determinant(G)
    for j in decomp.hyperplanes:
        for r, c, e in G.iter_entries():
            if e.as_function.mono[j]:
                bad.append(((r, c), e))
        if det.subs_zero([j]).is_zero:
            bad.append((("det", j), DifferentialForm.function(det)))
    entries.append(("witness-regular", CheckResult(not bad, tuple(bad))))
    consts = []
    for j, A in zip(decomp.hyperplanes, decomp.residues):
        dA = A.d()
        for r, c, e in dA.nonzero_entries():
            consts.append(((j, r, c), e))
    entries.append(("residues-constant", CheckResult(not consts, tuple(consts))))
    entries.append(("compatible", check_compatible(pair)))
    entries.append(("flat", check_flat(pair.eta)))
    if Y is not None:
        entries.append(("coordinates", _matrix_result(pair.omega - G.wedge(Y.d()))))
    return AdaptedReport(entries)


# ---------------------------------------------------------------------------
# Decomposition in a log-form basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelDecomposition:
    """``eta0 = sum_nu M_nu omega^nu + C omega^{q+1}``.

    ``completion`` is the index ``k`` with ``omega^{q+1} = dz_k/z_k``;
    ``constancy_flags[nu]`` records whether ``dM_nu ^ omega^1 ^ ... ^ omega^q``
    vanishes.
    """

    M: tuple
    complement: MatrixForm
    complementary_residual: MatrixForm
    completion: int
    constancy_flags: tuple
    constancy_residuals: tuple

    @property
    def in_span(self) -> bool:
        return self.complement.is_zero


def _completion_index(system: LogFormSystem) -> int:
    n = system.nvars
    for k in range(n):
        rows = [list(a) for a in system.alphas] + [[ONE if j == k else ZERO for j in range(n)]]
        if _rank(rows) == n:
            return k
    raise DegenerateBasisError("cannot complete the residue vectors to a basis")


def kernel_basis_decomposition(eta0: MatrixForm, system: LogFormSystem) -> KernelDecomposition:
    """Write every entry of ``eta0`` in the basis ``omega^1..omega^q, dz_k/z_k``."""
    n = system.nvars
    if system.q != n - 1:
        raise DimensionError("the system must have q forms on q + 1 variables")
    if eta0.nvars != n or eta0.degree != 1:
        raise DimensionError("eta0 must be a matrix of 1-forms on the system's variables")
    k = _completion_index(system)
    basis = [list(a) for a in system.alphas] + [[ONE if j == k else ZERO for j in range(n)]]
    inv = _inverse(basis)
    z = [RationalFunction.variable(j, n) for j in range(n)]
    coeffs = [[[None] * eta0.cols for _ in range(eta0.rows)] for _ in range(n)]
    for r, c, e in eta0.iter_entries():
        beta = [e.coefficient((j,)) * z[j] for j in range(n)]
        for nu in range(n):
            acc = RationalFunction.zero(n)
            for j in range(n):
                if beta[j] and inv[j][nu]:
                    acc = acc + beta[j].scale(inv[j][nu])
            coeffs[nu][r][c] = acc
    Ms = tuple(MatrixForm.from_functions(coeffs[nu], n) for nu in range(n - 1))
    comp = MatrixForm.from_functions(coeffs[n - 1], n)
    comp_form = comp.map_entries(lambda f: log_form(_unit(k, n)).scale(f.as_function))
    top = system.top_form()
    flags, residuals = [], []
    for M in Ms:
        w = M.d().map_entries(lambda f: f.wedge(top))
        flags.append(w.is_zero)
        residuals.append(w)
    return KernelDecomposition(Ms, comp, comp_form, k, tuple(flags), tuple(residuals))
