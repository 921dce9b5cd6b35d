"""Ready-made structure documents for the worked examples."""

from __future__ import annotations

from typing import Sequence

from .affstruct import maurer_cartan_basis, maurer_cartan_names
from .builders import build_intersection, build_suspension
from .document import StructureDocument
from .forms import DifferentialForm, MatrixForm, PolyMap
from .polyalg import GaussianRational, RationalFunction
from .singular import LinearDiagonalField, kernel_log_forms, log_form, type_i_pair

__all__ = [
    "maurer_cartan_document",
    "intersection_document",
    "suspension_document",
    "type_i_document",
    "type_ii_document",
    "EXAMPLES",
]


def maurer_cartan_document(q: int = 1) -> StructureDocument:
    pair = maurer_cartan_basis(q)
    return StructureDocument(
        variables=tuple(maurer_cartan_names(q)),
        q=q,
        title=f"affine Maurer-Cartan forms, q={q}",
        description="omega = X dY, eta = dX X^-1 on the entries of X and Y",
        omega=pair.omega,
        eta=pair.eta,
    )


def _trailing_names(count: int) -> list[str]:
    return [f"z{k}" for k in range(1, count + 1)]


def intersection_document(q: int = 2) -> StructureDocument:
    """``(x dy, dx/x)`` stacked with ``(dz_k, 0)`` for ``k < q``."""
    names = ["x", "y"] + _trailing_names(q - 1)
    n = len(names)
    x = RationalFunction.variable(0, n)
    pairs = [(DifferentialForm.differential(1, n).scale(x), log_form([1] + [0] * (n - 1)))]
    pairs += [(DifferentialForm.differential(k, n), DifferentialForm.zero(n, 1)) for k in range(2, n)]
    pair = build_intersection(pairs)
    return StructureDocument(
        variables=tuple(names),
        q=q,
        title=f"intersection structure, q={q}",
        description="diagonal eta from scalar pairs (x dy, dx/x) and (dz_k, 0)",
        omega=pair.omega,
        eta=pair.eta,
    )


def _suspension_data(q: int):
    if q == 1:
        x = RationalFunction.variable(0, 1)
        w = MatrixForm([[log_form([1])]])
        return w, PolyMap(1, (x ** 2,)), MatrixForm.from_functions([[2]], 1), ["x"]
    if q == 2:
        x1, x2 = RationalFunction.variable(0, 2), RationalFunction.variable(1, 2)
        w = MatrixForm.column([log_form([1, 0]), log_form([0, 1])])
        f = PolyMap(2, (x1 ** 2 * x2, x1 * x2))
        return w, f, MatrixForm.from_functions([[2, 1], [1, 1]], 2), ["x1", "x2"]
    raise ValueError("suspension examples exist for q = 1 and q = 2")


def suspension_document(q: int = 1) -> StructureDocument:
    w, f, A, base = _suspension_data(q)
    res = build_suspension(w, f, A, base)
    return StructureDocument(
        variables=res.names,
        q=q,
        title=f"suspension, q={q}",
        description="omega = T w(x), eta = dT T^-1; map is F(x, T) = (f(x), T A^-1)",
        omega=res.pair.omega,
        eta=res.pair.eta,
        map=res.F,
    )


def type_i_document(lam=2, q: int = 1) -> StructureDocument:
    lam = GaussianRational(lam)
    names = ["x", "y"] + _trailing_names(q - 1)
    n = len(names)
    pair = type_i_pair(lam, n, q)
    return StructureDocument(
        variables=tuple(names),
        q=q,
        title=f"type I model, lambda={lam.format()}, q={q}",
        description="x dy - lambda y dx with trivial factors; eta = diag(dx/x + dy/y, 0, ...)",
        omega=pair.omega,
        eta=pair.eta,
        divisor=("x", "y"),
        witness=MatrixForm.identity(q, n),
    )


def type_ii_document(eigenvalues: Sequence = (1, 2, -3)) -> StructureDocument:
    field = LinearDiagonalField(tuple(eigenvalues))
    system = kernel_log_forms(field)
    n, q = field.nvars, field.q
    forms = system.forms
    return StructureDocument(
        variables=tuple(_trailing_names(n)),
        q=q,
        title="type II model, lambda=(" + ", ".join(v.format() for v in field.eigenvalues) + ")",
        description="kernel log-forms of the linear diagonal field; eta = diag(omega^1, ..., omega^q)",
        omega=MatrixForm.column(forms),
        eta=MatrixForm.diagonal(forms),
        divisor=tuple(_trailing_names(n)),
        witness=MatrixForm.identity(q, n),
        eigenvalues=field.eigenvalues,
    )


EXAMPLES = {
    "maurer-cartan": maurer_cartan_document,
    "intersection": intersection_document,
    "suspension": suspension_document,
    "type-i": type_i_document,
    "type-ii": type_ii_document,
}
