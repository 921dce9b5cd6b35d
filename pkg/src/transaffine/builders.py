"""Constructors for intersection and suspension structures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .affstruct import CheckResult, StructurePair, check_compatible, check_flat
from .forms import (
    DifferentialForm,
    DimensionError,
    MatrixForm,
    PolyMap,
    determinant,
    log_derivative,
    matrix_inverse,
    pullback,
)
from .polyalg import AlgebraError, RationalFunction

__all__ = [
    "BuildError",
    "SuspensionResult",
    "build_intersection",
    "build_suspension",
    "suspension_names",
]


class BuildError(AlgebraError):
    """Input data violate a construction precondition.

    ``location`` names the failing piece and ``residual`` is the nonzero form
    that should have vanished.
    """

    def __init__(self, message: str, location=None, residual=None):
        super().__init__(message)
        self.location = location
        self.residual = residual


def _as_matrix_result(M: MatrixForm) -> CheckResult:
    fails = tuple(((i, j), e) for i, j, e in M.nonzero_entries())
    return CheckResult(not fails, fails)


def build_intersection(pairs: Sequence[tuple[DifferentialForm, DifferentialForm]]) -> StructurePair:
    """Stack scalar pairs with ``d omega_j = eta_j ^ omega_j`` and ``d eta_j = 0``.

    The result has a diagonal ``eta``; both structure equations are verified
    before returning.
    """
    if not pairs:
        raise DimensionError("need at least one scalar pair")
    for j, (om, et) in enumerate(pairs):
        if om.degree != 1 or et.degree != 1:
            raise DimensionError(f"pair {j} must consist of two 1-forms")
        res = om.d() - et.wedge(om)
        if not res.is_zero:
            raise BuildError(f"pair {j}: d omega != eta ^ omega", j, res)
        res = et.d()
        if not res.is_zero:
            raise BuildError(f"pair {j}: eta is not closed", j, res)
    pair = StructurePair(MatrixForm.column([p[0] for p in pairs]), MatrixForm.diagonal([p[1] for p in pairs]))
    for label, res in (("compatible", check_compatible(pair)), ("flat", check_flat(pair.eta))):
        if not res:
            raise BuildError(f"stacked pair is not {label}", res.location, res.residual)
    return pair


@dataclass(frozen=True)
class SuspensionResult:
    pair: StructurePair
    F: PolyMap
    report: tuple  # (name, CheckResult) in a fixed order
    names: tuple

    @property
    def ok(self) -> bool:
        return all(r.ok for _, r in self.report)


def suspension_names(base: Sequence[str], q: int) -> list[str]:
    return list(base) + [f"T{i}{j}" for i in range(1, q + 1) for j in range(1, q + 1)]


def build_suspension(
    w: MatrixForm,
    f: PolyMap,
    A: MatrixForm,
    base_names: Sequence[str] | None = None,
) -> SuspensionResult:
    """``Omega = T w(x)`` and ``eta = dT T^-1`` on ``x`` plus the entries of ``T``.

    ``f`` maps the ``x`` space to itself with ``f* w = A w``; the returned map is
    ``F(x, T) = (f(x), T A^-1)`` and the report checks both structure equations
    and the invariance of ``Omega`` and ``eta`` under ``F``.
    """
    q = w.rows
    m = w.nvars
    if w.cols != 1 or w.degree != 1:
        raise DimensionError("w must be a q x 1 matrix of 1-forms")
    if f.source_nvars != m or f.target_nvars != m:
        raise DimensionError("f must map the base coordinates to themselves")
    if A.shape != (q, q) or A.degree != 0 or A.nvars != m:
        raise DimensionError("A must be a constant q x q matrix on the base coordinates")
    if not A.d().is_zero:
        raise BuildError("A is not constant", None, A.d())
    dw = w.d()
    if not dw.is_zero:
        loc, res = next(((i, j), e) for i, j, e in dw.nonzero_entries())
        raise BuildError("w is not closed", loc, res)
    mismatch = pullback(f, w) - A.wedge(w)
    if not mismatch.is_zero:
        loc, res = next(((i, j), e) for i, j, e in mismatch.nonzero_entries())
        raise BuildError("f* w != A w", loc, res)
    if determinant(A).is_zero:
        raise BuildError("A is singular")

    n = m + q * q
    names = tuple(suspension_names(base_names or [f"x{k + 1}" for k in range(m)], q))
    # x-coordinates of the big space, then T row-major
    proj = PolyMap(n, tuple(RationalFunction.variable(k, n) for k in range(m)))
    T = MatrixForm.from_functions(
        [[RationalFunction.variable(m + i * q + j, n) for j in range(q)] for i in range(q)], n
    )
    omega = T.wedge(pullback(proj, w))
    eta = log_derivative(T)
    pair = StructurePair(omega, eta)

    Ainv = matrix_inverse(A).function_entries()
    Ainv_const = [[c.constant_value() for c in r] for r in Ainv]
    T_entries = T.function_entries()
    new_T = []
    for i in range(q):
        for j in range(q):
            acc = RationalFunction.zero(n)
            for k in range(q):
                if Ainv_const[k][j]:
                    acc = acc + T_entries[i][k].scale(Ainv_const[k][j])
            new_T.append(acc)
    base = [c.compose(list(proj.components)) for c in f.components]
    F = PolyMap(n, tuple(base + new_T))

    report = (
        ("compatible", check_compatible(pair)),
        ("flat", check_flat(eta)),
        ("omega-invariant", _as_matrix_result(pullback(F, omega) - omega)),
        ("eta-invariant", _as_matrix_result(pullback(F, eta) - eta)),
    )
    return SuspensionResult(pair, F, report, names)
