import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_constant_matrix, random_invertible
from transaffine.affstruct import (
    AffineAtlas,
    ConsistencyError,
    JetSeries,
    NotFlatError,
    ObstructionError,
    PoleAtOriginError,
    StructurePair,
    Transition,
    check_compatible,
    check_flat,
    check_integrable_system,
    gauge,
    glueing_test,
    integrate_eta_jet,
    integrate_primitive_jet,
    jet_congruent,
    maurer_cartan_basis,
    maximal_rank,
    verify_atlas,
)
from transaffine.forms import DifferentialForm, MatrixForm, SingularMatrixError, log_derivative, matrix_inverse
from transaffine.polyalg import Polynomial, RationalFunction

N = 2
x = RationalFunction.variable(0, N)
y = RationalFunction.variable(1, N)
dx = DifferentialForm.differential(0, N)
dy = DifferentialForm.differential(1, N)
Z1 = DifferentialForm.zero(N, 1)


def col(*forms):
    return MatrixForm([[f] for f in forms])


def mat(rows):
    return MatrixForm(rows)


def fm(rows, n=N):
    return MatrixForm.from_functions(rows, n)


def seed_pair(rng, q, nvars):
    """Flat compatible pair (G dY, dG G^-1) with Y the first q coordinates."""
    G = random_invertible(rng, q, nvars)
    dY = MatrixForm([[DifferentialForm.differential(i, nvars)] for i in range(q)])
    return StructurePair(G.wedge(dY), log_derivative(G))


# -- predicates ---------------------------------------------------------------------


def test_integrable_examples():
    assert check_integrable_system(col(dy.scale(x)))
    z1, z2 = RationalFunction.variable(0, 2), RationalFunction.variable(1, 2)
    assert check_integrable_system(col(dx.scale(z1.inverse()), dy.scale(z2.inverse())))


def test_contact_form_not_integrable():
    x3 = RationalFunction.variable(0, 3)
    d = [DifferentialForm.differential(k, 3) for k in range(3)]
    res = check_integrable_system(col(d[2] + d[1].scale(x3)))
    assert not res
    assert res.location == 0
    assert res.residual == d[0].wedge(d[1]).wedge(d[2])


def test_maximal_rank():
    assert maximal_rank(col(dx, dy))
    assert not maximal_rank(col(dx, dx.scale(y)))


def test_flat_examples():
    assert check_flat(mat([[dx.scale(x.inverse())]]))
    assert check_flat(mat([[Z1, dy], [Z1, Z1]]))
    res = check_flat(mat([[Z1, dy.scale(x)], [Z1, Z1]]))
    assert not res
    assert res.location == (0, 1)
    assert res.residual == dx.wedge(dy)


def test_compatible_examples():
    assert check_compatible(StructurePair(col(dy.scale(x)), mat([[dx.scale(x.inverse())]])))
    assert check_compatible(StructurePair(col(dy), mat([[Z1]])))
    res = check_compatible(StructurePair(col(dy.scale(x)), mat([[Z1]])))
    assert not res and res.residual == dx.wedge(dy)


def test_structure_pair_shape_checks():
    with pytest.raises(ValueError):
        StructurePair(col(dx, dy), mat([[Z1]]))


# -- gauge -------------------------------------------------------------------------------


def test_gauge_examples():
    pair = StructurePair(col(dy), mat([[Z1]]))
    assert gauge(pair, fm([[1]])) == pair
    assert gauge(pair, fm([[x]])) == StructurePair(col(dy.scale(x)), mat([[dx.scale(x.inverse())]]))
    G = fm([[1, y], [0, x]])
    p2 = StructurePair(col(dx, dy), mat([[Z1, Z1], [Z1, Z1]]))
    assert gauge(gauge(p2, G), matrix_inverse(G)) == p2


def test_gauge_rejects_singular():
    with pytest.raises(SingularMatrixError):
        gauge(StructurePair(col(dx, dy), MatrixForm.zeros(2, 2, N, 1)), fm([[x, y], [x, y]]))


def test_gauge_keeps_flatness_for_noncommuting_matrices():
    # nilpotent eta and a lower-triangular G do not commute; the additive rule breaks here
    pair = StructurePair(col(dx, dy), mat([[Z1, dy], [Z1, Z1]]))
    assert check_flat(pair.eta)
    G = fm([[1, 0], [x, 1]])
    out = gauge(pair, G)
    assert check_flat(out.eta)
    naive = pair.eta + log_derivative(G)
    assert not check_flat(naive)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 3))
def test_gauge_preserves_flat_and_compatible(seed, q, extra):
    rng = random.Random(seed)
    nvars = max(q, extra)
    pair = seed_pair(rng, q, nvars)
    out = gauge(pair, random_invertible(rng, q, nvars))
    assert check_flat(out.eta) and check_compatible(out)


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_gauge_is_group_action(seed, q):
    rng = random.Random(seed)
    pair = seed_pair(rng, q, 2)
    G, H = random_invertible(rng, q, 2, 1), random_invertible(rng, q, 2, 1)
    assert gauge(pair, G.wedge(H)) == gauge(gauge(pair, H), G)


# -- atlas ---------------------------------------------------------------------------------------

MC1 = StructurePair(col(dy.scale(x)), mat([[dx.scale(x.inverse())]]))


def test_single_chart_atlas():
    assert verify_atlas(AffineAtlas((("U", MC1),))).ok


def test_constant_transition_atlas():
    two = StructurePair(MC1.omega.scale(RationalFunction.constant(2, N)), MC1.eta)
    atlas = AffineAtlas((("U", two), ("V", MC1)), (Transition("U", "V", fm([[2]])),))
    assert verify_atlas(atlas).ok


def test_transition_eta_failure_reports_residual():
    base = StructurePair(col(dy), mat([[Z1]]))
    charts = (("U", StructurePair(col(dy.scale(x)), base.eta)), ("V", base))
    report = verify_atlas(AffineAtlas(charts, (Transition("U", "V", fm([[x]])),)))
    assert not report.ok
    found = {(f.condition, f.location): f for f in report.violations}
    # chart U is also incompatible (d(x dy) != 0 with eta = 0); the omega transition holds
    assert set(found) == {("compatible", "U"), ("transition-eta", ("U", "V"))}
    assert found["transition-eta", ("U", "V")].failures[0] == ((0, 0), dx.scale(x.inverse()))


def test_atlas_rejects_unknown_label():
    with pytest.raises(ValueError):
        AffineAtlas((("U", MC1),), (Transition("U", "W", fm([[1]])),))


def test_singular_transition_reported():
    atlas = AffineAtlas((("U", MC1), ("V", MC1)), (Transition("U", "V", fm([[0]])),))
    (bad,) = verify_atlas(atlas).violations
    assert bad.condition == "invertible"


def test_cocycle_failure():
    charts = tuple((lab, MC1) for lab in "ABC")
    one, two = fm([[1]]), fm([[2]])
    ok = AffineAtlas(charts, (Transition("A", "B", one), Transition("B", "C", one), Transition("A", "C", one)))
    assert verify_atlas(ok).ok
    # every transition is invertible and constant, so only the cocycle trips
    twice = tuple((lab, StructurePair(MC1.omega.scale(RationalFunction.constant(c, N)), MC1.eta))
                  for lab, c in (("A", 2), ("B", 1), ("C", 1)))
    bad = AffineAtlas(twice, (Transition("A", "B", two), Transition("B", "C", one), Transition("A", "C", one)))
    conds = {f.condition for f in verify_atlas(bad).violations}
    assert "cocycle" in conds


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_generated_atlases_are_accepted(seed):
    rng = random.Random(seed)
    q = rng.randint(1, 2)
    base = seed_pair(rng, q, 2)
    charts = [("A", base)]
    G_B = random_invertible(rng, q, 2, 1)
    charts.append(("B", gauge(base, G_B)))
    C = random_constant_matrix(rng, q, 2)
    charts.append(("C", gauge(base, C)))
    G_BA = G_B
    G_CA = C
    G_BC = G_B.wedge(matrix_inverse(C))
    transitions = (Transition("B", "A", G_BA), Transition("C", "A", G_CA), Transition("B", "C", G_BC))
    report = verify_atlas(AffineAtlas(tuple(charts), transitions))
    assert report.ok, report.violations


# -- Maurer-Cartan --------------------------------------------------------------------------------


@pytest.mark.parametrize("q", [1, 2, 3])
def test_maurer_cartan_structure_equations(q):
    pair = maurer_cartan_basis(q)
    assert pair.nvars == q * q + q
    assert check_flat(pair.eta) and check_compatible(pair)


def test_maurer_cartan_q1_is_x_dy():
    assert maurer_cartan_basis(1) == MC1


# -- glueing ---------------------------------------------------------------------------------------


def test_glueing_examples():
    r = glueing_test(fm([[x]]), fm([[x.scale(3)]]))
    assert r.equal_log_derivative and r.dA_zero and r.A == fm([[3]])
    r = glueing_test(fm([[x]]), fm([[x * x]]))
    assert not r.equal_log_derivative and not r.dA_zero and r.A == fm([[x]])
    G = fm([[1, y], [x, 2]])
    assert glueing_test(G, G).A == MatrixForm.identity(2, N)


def test_consistency_error_is_assertion():
    assert issubclass(ConsistencyError, AssertionError)


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_glueing_constant_multiple_is_equal(seed, q):
    rng = random.Random(seed)
    G = random_invertible(rng, q, 2)
    r = glueing_test(G, G.wedge(random_constant_matrix(rng, q, 2)))
    assert r.equal_log_derivative and r.dA_zero


# -- jets ---------------------------------------------------------------------------------------------


def test_exponential_jet():
    X = integrate_eta_jet(mat([[dx]]), 3)
    P = Polynomial.variable(0, N)
    expected = Polynomial.one(N) + P + (P * P).scale(Fraction(1, 2)) + (P ** 3).scale(Fraction(1, 6))
    assert X[0, 0] == expected


def test_zero_eta_jet_is_identity():
    assert integrate_eta_jet(MatrixForm.zeros(2, 2, N, 1), 4) == JetSeries.identity(2, N, 4)


def test_jet_errors():
    with pytest.raises(NotFlatError):
        integrate_eta_jet(mat([[Z1, dy.scale(x)], [Z1, Z1]]), 3)
    with pytest.raises(PoleAtOriginError):
        integrate_eta_jet(mat([[dx.scale(x.inverse())]]), 3)
    with pytest.raises(PoleAtOriginError):
        integrate_primitive_jet(MC1, JetSeries.identity(1, N, 3), 3)


def test_obstruction_error_is_distinct():
    assert not issubclass(ObstructionError, NotFlatError)


def test_primitive_jet_examples():
    Y = integrate_primitive_jet(StructurePair(col(dy), mat([[Z1]])), JetSeries.identity(1, N, 3), 3)
    assert Y[0, 0] == Polynomial.variable(1, N)
    one_x = 1 + x
    pair = StructurePair(col(dy.scale(one_x)), mat([[dx.scale(one_x.inverse())]]))
    X = integrate_eta_jet(pair.eta, 4)
    assert X[0, 0] == one_x.num
    Y = integrate_primitive_jet(pair, X, 4)
    assert Y[0, 0] == Polynomial.variable(1, N)



def test_primitive_jet_in_one_variable():
    # d of a one-form on a line is a top-degree-plus-one zero form
    t = RationalFunction.variable(0, 1)
    G = fm([[1 + t]], 1)
    pair = StructurePair(G.wedge(mat([[DifferentialForm.differential(0, 1)]])), log_derivative(G))
    X = integrate_eta_jet(pair.eta, 3)
    Y = integrate_primitive_jet(pair, X, 3)
    assert Y[0, 0] == Polynomial.variable(0, 1)

@settings(max_examples=10)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_jet_recovers_gauge_matrix(seed, q):
    rng = random.Random(seed)
    G = random_invertible(rng, q, 2, unit_at_zero=True)
    X = integrate_eta_jet(log_derivative(G), 5)
    assert jet_congruent(X.to_matrix(), G, 5)
