"""Exact exterior calculus for transversely affine structures of foliations."""

from .affstruct import (
    AffineAtlas,
    JetSeries,
    StructurePair,
    Transition,
    check_compatible,
    check_flat,
    check_integrable_system,
    gauge,
    glueing_test,
    integrate_eta_jet,
    integrate_primitive_jet,
    maurer_cartan_basis,
    verify_atlas,
)
from .builders import build_intersection, build_suspension
from .document import StructureDocument, parse_document, print_document
from .expr import ParseError, parse_form
from .forms import (
    DifferentialForm,
    MatrixForm,
    PolyMap,
    exterior_derivative,
    homotopy_contraction,
    log_derivative,
    matrix_inverse,
    pullback,
    wedge,
)
from .polyalg import GaussianRational, Polynomial, RationalFunction, degree_cap
from .singular import (
    LinearDiagonalField,
    LogDecomposition,
    LogFormSystem,
    check_adapted,
    constancy_certificate,
    contract_with_field,
    kernel_basis_decomposition,
    kernel_log_forms,
    resonance_search,
    residue_matrices,
    type_i_model,
)

__all__ = [name for name in dir() if not name.startswith("_")]
