"""Flat pairs (Omega, eta): structure equations, gauge action, atlases and jets.

A pair consists of a ``q x 1`` matrix of 1-forms ``omega`` and a ``q x q``
matrix of 1-forms ``eta``.  It is *compatible* when ``d omega = eta ^ omega``
and *flat* when ``d eta = eta ^ eta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations


from .forms import (
    DifferentialForm,
    DimensionError,
    MatrixForm,
    homotopy_contraction,
    log_derivative,
    matrix_inverse,
)
from .polyalg import AlgebraError, PoleError, Polynomial, RationalFunction

__all__ = [
    "NotFlatError",
    "PoleAtOriginError",
    "ObstructionError",
    "ConsistencyError",
    "CheckResult",
    "StructurePair",
    "Transition",
    "AffineAtlas",
    "AtlasFinding",
    "AtlasReport",
    "GlueingResult",
    "JetSeries",
    "check_integrable_system",
    "check_flat",
    "check_compatible",
    "maximal_rank",
    "gauge",
    "verify_atlas",
    "maurer_cartan_basis",
    "maurer_cartan_names",
    "glueing_test",
    "integrate_eta_jet",
    "integrate_primitive_jet",
    "taylor_matrix",
    "jet_congruent",
]


class NotFlatError(AlgebraError):
    """``d eta - eta ^ eta`` does not vanish."""


class PoleAtOriginError(PoleError):
    """A coefficient is not regular at the origin, so it has no Taylor jet."""


class ObstructionError(AlgebraError):
    """A right-hand side that should be closed at some jet degree is not."""


class ConsistencyError(AssertionError):
    """Two computations that must agree did not (an internal bug)."""


# ---------------------------------------------------------------------------
# Check results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    """Verdict of an identity check.

    ``failures`` lists every ``(location, residual)`` whose residual form is
    nonzero, in row-major order; ``location`` and ``residual`` expose the
    first one.
    """

    ok: bool
    failures: tuple = ()

    def __bool__(self):
        return self.ok

    @property
    def location(self):
        return self.failures[0][0] if self.failures else None

    @property
    def residual(self):
        return self.failures[0][1] if self.failures else None


def _entry_failures(M: MatrixForm) -> tuple:
    return tuple(((i, j), e) for i, j, e in M.nonzero_entries())


def _result_from_residual(M: MatrixForm) -> CheckResult:
    fails = _entry_failures(M)
    return CheckResult(not fails, fails)


# ---------------------------------------------------------------------------
# Pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructurePair:
    omega: MatrixForm
    eta: MatrixForm

    def __post_init__(self):
        o, e = self.omega, self.eta
        if o.cols != 1 or o.degree != 1:
            raise DimensionError("omega must be a q x 1 matrix of 1-forms")
        if e.shape != (o.rows, o.rows) or e.degree != 1:
            raise DimensionError("eta must be a q x q matrix of 1-forms matching omega")
        if o.nvars != e.nvars:
            raise DimensionError("omega and eta live on different coordinate systems")

    @property
    def q(self) -> int:
        return self.omega.rows

    @property
    def nvars(self) -> int:
        return self.omega.nvars

    def __eq__(self, other):
        if not isinstance(other, StructurePair):
            return NotImplemented
        return self.omega == other.omega and self.eta == other.eta

    __hash__ = None


def check_integrable_system(omega: MatrixForm) -> CheckResult:
    """Frobenius test ``d omega_j ^ omega_1 ^ ... ^ omega_q = 0`` for each row j."""
    if omega.cols != 1 or omega.degree != 1:
        raise DimensionError("expected a q x 1 matrix of 1-forms")
    rows = [omega[j, 0] for j in range(omega.rows)]
    top = rows[0]
    for r in rows[1:]:
        top = top.wedge(r)
    fails = []
    for j, r in enumerate(rows):
        w = r.d().wedge(top)
        if not w.is_zero:
            fails.append((j, w))
    return CheckResult(not fails, tuple(fails))


def maximal_rank(omega: MatrixForm) -> CheckResult:
    """``omega_1 ^ ... ^ omega_q`` is not identically zero."""
    top = omega[0, 0]
    for j in range(1, omega.rows):
        top = top.wedge(omega[j, 0])
    if top.is_zero:
        return CheckResult(False, ((None, top),))
    return CheckResult(True)


def check_flat(eta: MatrixForm) -> CheckResult:
    if eta.degree != 1 or eta.rows != eta.cols:
        raise DimensionError("expected a square matrix of 1-forms")
    return _result_from_residual(eta.d() - eta.wedge(eta))


def check_compatible(pair: StructurePair) -> CheckResult:
    return _result_from_residual(pair.omega.d() - pair.eta.wedge(pair.omega))


def _gauge_eta(eta: MatrixForm, G: MatrixForm, Ginv: MatrixForm) -> MatrixForm:
    # conjugation keeps flatness and the group law for non-commuting G
    return G.wedge(eta).wedge(Ginv) + G.d().wedge(Ginv)


def gauge(pair: StructurePair, G: MatrixForm) -> StructurePair:
    """Act by the invertible function matrix ``G``: ``(G omega, G eta G^-1 + dG G^-1)``."""
    if G.shape != (pair.q, pair.q) or G.degree != 0:
        raise DimensionError("gauge matrix must be a q x q matrix of functions")
    Ginv = matrix_inverse(G)
    return StructurePair(G.wedge(pair.omega), _gauge_eta(pair.eta, G, Ginv))


# ---------------------------------------------------------------------------
# Atlases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    """``omega_target = G . omega_source`` on the overlap."""

    target: str
    source: str
    G: MatrixForm


@dataclass(frozen=True)
class AffineAtlas:
    charts: tuple  # of (label, StructurePair)
    transitions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "charts", tuple(self.charts))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        labels = [lab for lab, _ in self.charts]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate chart label")
        known = set(labels)
        for t in self.transitions:
            if t.target not in known or t.source not in known:
                raise ValueError(f"transition {t.target}<-{t.source} references an unknown chart")

    def chart(self, label: str) -> StructurePair:
        for lab, p in self.charts:
            if lab == label:
                return p
        raise KeyError(label)


@dataclass(frozen=True)
class AtlasFinding:
    """One checked identity.  ``location`` is a chart label or a tuple of labels."""

    condition: str
    location: object
    ok: bool
    failures: tuple = ()


@dataclass
class AtlasReport:
    findings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(f.ok for f in self.findings)

    def __bool__(self):
        return self.ok

    @property
    def violations(self) -> list:
        return [f for f in self.findings if not f.ok]


def verify_atlas(atlas: AffineAtlas) -> AtlasReport:
    """Check every chart, transition and available cocycle triple."""
    report = AtlasReport()
    add = report.findings.append
    for label, pair in sorted(atlas.charts, key=lambda c: c[0]):
        integ = check_integrable_system(pair.omega)
        add(AtlasFinding("integrable", label, integ.ok, integ.failures))
        rank = maximal_rank(pair.omega)
        add(AtlasFinding("rank", label, rank.ok, rank.failures))
        flat = check_flat(pair.eta)
        add(AtlasFinding("flat", label, flat.ok, flat.failures))
        comp = check_compatible(pair)
        add(AtlasFinding("compatible", label, comp.ok, comp.failures))
    by_pair = {}
    for t in sorted(atlas.transitions, key=lambda t: (t.target, t.source)):
        by_pair[(t.target, t.source)] = t.G
        loc = (t.target, t.source)
        ti, tj = atlas.chart(t.target), atlas.chart(t.source)
        try:
            Ginv = matrix_inverse(t.G)
        except AlgebraError:
            add(AtlasFinding("invertible", loc, False, ((None, None),)))
            continue
        res = _result_from_residual(t.G.wedge(tj.omega) - ti.omega)
        add(AtlasFinding("transition-omega", loc, res.ok, res.failures))
        res = _result_from_residual(_gauge_eta(tj.eta, t.G, Ginv) - ti.eta)
        add(AtlasFinding("transition-eta", loc, res.ok, res.failures))
    for i, j, k in permutations(sorted({lab for lab, _ in atlas.charts}), 3):
        if (i, j) in by_pair and (j, k) in by_pair and (i, k) in by_pair:
            res = _result_from_residual(by_pair[(i, j)].wedge(by_pair[(j, k)]) - by_pair[(i, k)])
            add(AtlasFinding("cocycle", (i, j, k), res.ok, res.failures))
    return report


# ---------------------------------------------------------------------------
# Maurer-Cartan forms of the affine group
# ---------------------------------------------------------------------------


def maurer_cartan_names(q: int) -> list[str]:
    return [f"X{i}{j}" for i in range(1, q + 1) for j in range(1, q + 1)] + [f"Y{i}" for i in range(1, q + 1)]


def maurer_cartan_basis(q: int) -> StructurePair:
    """``(X dY, dX X^-1)`` on ``q^2 + q`` variables ``X11..Xqq, Y1..Yq``."""
    if q < 1:
        raise ValueError("q must be positive")
    n = q * q + q
    X = MatrixForm.from_functions(
        [[RationalFunction.variable(i * q + j, n) for j in range(q)] for i in range(q)], n
    )
    Y = MatrixForm.from_functions([[RationalFunction.variable(q * q + i, n)] for i in range(q)], n)
    return StructurePair(X.wedge(Y.d()), log_derivative(X))


# ---------------------------------------------------------------------------
# Glueing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlueingResult:
    equal_log_derivative: bool
    A: MatrixForm
    dA_zero: bool


def glueing_test(G: MatrixForm, Gp: MatrixForm) -> GlueingResult:
    """Compare ``dG G^-1`` with ``dG' G'^-1`` and test ``A = G^-1 G'`` for constancy."""
    A = matrix_inverse(G).wedge(Gp)
    equal = log_derivative(G) == log_derivative(Gp)
    dA_zero = A.d().is_zero
    if equal != dA_zero:
        raise ConsistencyError("log-derivative comparison and dA = 0 disagree")
    return GlueingResult(equal, A, dA_zero)


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JetSeries:
    """Matrix of polynomials truncated at total degree ``order``."""

    order: int
    nvars: int
    entries: tuple  # tuple of tuples of Polynomial

    def __post_init__(self):
        rows = tuple(tuple(p.truncate(self.order) for p in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def q(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, q: int, nvars: int, order: int) -> "JetSeries":
        one, zero = Polynomial.one(nvars), Polynomial.zero(nvars)
        return cls(order, nvars, tuple(tuple(one if i == j else zero for j in range(q)) for i in range(q)))

    def __getitem__(self, key) -> Polynomial:
        i, j = key
        return self.entries[i][j]

    def to_matrix(self) -> MatrixForm:
        return MatrixForm.from_functions(self.entries, self.nvars)

    def __matmul__(self, other: "JetSeries") -> "JetSeries":
        order = min(self.order, other.order)
        rows, inner = self.shape
        if other.shape[0] != inner:
            raise DimensionError("jet shapes do not multiply")
        out = []
        for i in range(rows):
            row = []
            for t in range(other.shape[1]):
                acc = Polynomial.zero(self.nvars)
                for j in range(inner):
                    acc = acc + self.entries[i][j].mul_truncated(other.entries[j][t], order)
                row.append(acc)
            out.append(tuple(row))
        return JetSeries(order, self.nvars, tuple(out))

    def inverse(self) -> "JetSeries":
        """Series inverse for a square jet whose value at 0 is the identity."""
        q = self.q
        for i in range(q):
            for j in range(q):
                if self.entries[i][j].constant_term != (1 if i == j else 0):
                    raise ValueError("jet inverse requires X(0) = I")
        ident = JetSeries.identity(q, self.nvars, self.order)
        # N = I - X is nilpotent modulo degree order+1
        N = JetSeries(self.order, self.nvars, tuple(
            tuple(ident.entries[i][j] - self.entries[i][j] for j in range(q)) for i in range(q)
        ))
        result, power = ident, ident
        for _ in range(self.order):
            power = power @ N
            result = JetSeries(self.order, self.nvars, tuple(
                tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(result.entries, power.entries)
            ))
        return result

    def __eq__(self, other):
        if not isinstance(other, JetSeries):
            return NotImplemented
        return self.order == other.order and self.entries == other.entries

    __hash__ = None


def taylor_matrix(A: MatrixForm, order: int) -> MatrixForm:
    """Replace every coefficient by its Taylor polynomial of total degree <= ``order``.

    Raises :class:`PoleAtOriginError` when a coefficient is singular at 0.
    """
    def expand(f: DifferentialForm) -> DifferentialForm:
        terms = {}
        for idx, c in f.items():
            try:
                p = c.taylor(order)
            except PoleError as exc:
                raise PoleAtOriginError(str(exc)) from None
            if p:
                terms[idx] = RationalFunction.from_polynomial(p)
        if not terms:
            return DifferentialForm.zero(f.nvars, f.degree)
        return DifferentialForm(f.nvars, f.degree, terms)

    return A.map_entries(expand)


def _truncate_total(A: MatrixForm, order: int) -> MatrixForm:
    """Keep terms whose coefficient degree plus form degree is <= ``order``."""
    return taylor_matrix(A, order - A.degree) if order >= A.degree else MatrixForm.zeros(A.rows, A.cols, A.nvars, A.degree)


def jet_congruent(A: MatrixForm, B: MatrixForm, order: int) -> bool:
    """Terms of total degree <= ``order`` agree, counting each ``dz`` as degree 1."""
    return _truncate_total(A - B, order).is_zero


def _homogeneous(A: MatrixForm, degree: int) -> MatrixForm:
    def part(f: DifferentialForm) -> DifferentialForm:
        terms = {}
        for idx, c in f.items():
            p = c.num.homogeneous_part(degree)
            if p:
                terms[idx] = RationalFunction.from_polynomial(p)
        if not terms:
            return DifferentialForm.zero(f.nvars, f.degree)
        return DifferentialForm(f.nvars, f.degree, terms)

    return A.map_entries(part)


def integrate_eta_jet(eta: MatrixForm, order: int) -> JetSeries:
    """Jet of the solution of ``dX = eta X`` with ``X(0) = I``, to total degree ``order``.

    The degree-k part is ``K(sum_{m+j=k-1} eta_m X_j)`` with ``K`` the radial
    homotopy operator; flatness makes each right-hand side closed.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    flat = check_flat(eta)
    if not flat:
        raise NotFlatError(f"d eta - eta^eta is nonzero at entry {flat.location}")
    q, n = eta.rows, eta.nvars
    eta_t = taylor_matrix(eta, max(order - 1, 0))
    eta_parts = [_homogeneous(eta_t, m) for m in range(order)]
    X_parts = [MatrixForm.identity(q, n)]
    for k in range(1, order + 1):
        rhs = MatrixForm.zeros(q, q, n, 1)
        for m in range(k):
            if not eta_parts[m].is_zero and not X_parts[k - 1 - m].is_zero:
                rhs = rhs + eta_parts[m].wedge(X_parts[k - 1 - m])
        closed = rhs.d()
        if not closed.is_zero:
            raise ObstructionError(f"right-hand side at jet degree {k} is not closed")
        X_parts.append(rhs.map_entries(homotopy_contraction))
    entries = []
    for i in range(q):
        row = []
        for j in range(q):
            acc = Polynomial.zero(n)
            for part in X_parts:
                c = part[i, j].as_function
                if c:
                    acc = acc + c.num
            row.append(acc)
        entries.append(tuple(row))
    return JetSeries(order, n, tuple(entries))


def integrate_primitive_jet(pair: StructurePair, X: JetSeries, order: int) -> JetSeries:
    """Jet of ``Y`` with ``Y(0) = 0`` and ``omega = X dY``, to total degree ``order``."""
    for label, res in (("flat", check_flat(pair.eta)), ("compatible", check_compatible(pair))):
        if not res:
            raise NotFlatError(f"pair is not {label} at entry {res.location}")
    taylor_matrix(pair.eta, max(order - 1, 0))  # rejects poles at the origin
    n = pair.nvars
    omega_t = taylor_matrix(pair.omega, max(order - 1, 0))
    Xinv = X.inverse().to_matrix()
    theta = _truncate_total(Xinv.wedge(omega_t), order)
    if not _truncate_total(theta.d(), order).is_zero:
        raise ObstructionError("X^-1 omega is not closed at jet level")
    entries = []
    for i in range(pair.q):
        f = theta[i, 0]
        entries.append((homotopy_contraction(f).as_function.num,))
    return JetSeries(order, n, tuple(entries))
