import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import forms, gaussian, polynomials, rational_functions
from transaffine.affstruct import AffineAtlas, Transition
from transaffine.catalog import EXAMPLES
from transaffine.document import StructureDocument, parse_document, print_document
from transaffine.expr import ParseError, format_matrix, parse_form, parse_function, parse_matrix, parse_scalar
from transaffine.forms import DifferentialForm, MatrixForm, PolyMap
from transaffine.polyalg import GaussianRational, RationalFunction

XY = ["x", "y"]
x, y = (RationalFunction.variable(k, 2) for k in range(2))
dx, dy = (DifferentialForm.differential(k, 2) for k in range(2))


# -- expressions ----------------------------------------------------------------------


def test_parse_examples():
    assert parse_form("x*d(y) - 2*y*d(x)", XY) == dy.scale(x) - dx.scale(y.scale(2))
    assert parse_form("d(x)/x ^ d(y)", XY) == dx.scale(x.inverse()).wedge(dy)
    w = parse_form("(1/2 + 3i)*d(z1)", ["z1"])
    assert w == DifferentialForm.differential(0, 1).scale(GaussianRational("1/2", 3))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("x^2", lambda: DifferentialForm.function(x * x)),
        ("(x+y)^3/(x-y)", lambda: DifferentialForm.function((x + y) ** 3 / (x - y))),
        ("-x^2", lambda: DifferentialForm.function(-(x * x))),
        ("d(x) * d(y)", lambda: dx.wedge(dy)),
        ("d(y)^d(x)", lambda: -dx.wedge(dy)),
        ("1i*x", lambda: DifferentialForm.function(x.scale(GaussianRational(0, 1)))),
        ("0", lambda: DifferentialForm.zero(2, 0)),
    ],
)
def test_parse_table(text, expected):
    assert parse_form(text, XY) == expected()


def test_zero_promotes_to_requested_degree():
    assert parse_form("0", XY, degree=1).degree == 1
    assert parse_form("0 + d(x)", XY) == dx


@pytest.mark.parametrize(
    "text, column, fragment",
    [
        ("x ^ d(y)", 3, "natural-number exponent"),
        ("x +* y", 4, "unexpected"),
        ("3x", 2, "run into a name"),
        ("q*d(x)", 1, "unknown variable"),
        ("(x", 3, "expected ')'"),
        ("x + d(x)", 3, "degree"),
        ("d(x)^d(x)^d(y)", None, None),
        ("1.5*x", 1, "decimal"),
        ("x $ y", 3, None),
    ],
)
def test_parse_errors(text, column, fragment):
    try:
        w = parse_form(text, XY, context="omega[0][0]")
    except ParseError as err:
        assert err.context == "omega[0][0]" and err.line == 1
        if column is not None:
            assert err.column == column
        if fragment is not None:
            assert fragment in err.message
        assert str(err).startswith("omega[0][0]: line 1, column ")
    else:
        # repeated differentials wedge to zero, which is legal
        assert column is None and w.is_zero


def test_degree_mismatch_against_request():
    with pytest.raises(ParseError):
        parse_form("x", XY, degree=1)


def test_parse_function_and_scalar():
    assert parse_function("x/(1+y)", XY) == x / (1 + y)
    assert parse_scalar("-3i/4") == GaussianRational(0, "-3/4")
    with pytest.raises(ParseError):
        parse_function("d(x)", XY)


def test_matrix_round_trip():
    M = MatrixForm([[dx.scale(x.inverse()), dy], [DifferentialForm.zero(2, 1), dy.scale(x * y)]])
    text = format_matrix(M, XY)
    assert parse_matrix(text, XY, 1) == M


@settings(max_examples=150)
@given(st.integers(0, 2).flatmap(lambda k: forms(2, k, coeffs=lambda: rational_functions(2))))
def test_form_print_parse_round_trip(w):
    text = w.format(XY)
    back = parse_form(text, XY, degree=w.degree)
    assert back == w and back.format(XY) == text


# -- documents ------------------------------------------------------------------------


def test_minimal_document():
    doc = parse_document('{"format_version": 1, "variables": ["x", "y"], "q": 1}')
    assert doc == StructureDocument(("x", "y"), 1)
    assert parse_document(print_document(doc)) == doc


@pytest.mark.parametrize(
    "text, context",
    [
        ('{"format_version": 2, "variables": ["x"], "q": 1}', "format_version"),
        ('{"format_version": 1, "variables": ["x"], "q": 1, "extra": 0}', "document"),
        ('{"format_version": 1, "variables": ["x"]}', "document"),
        ('{"format_version": 1, "variables": ["d"], "q": 1}', "variables"),
        ('{"format_version": 1, "variables": ["x", "x"], "q": 1}', "variables"),
        ('{"format_version": 1, "variables": ["x"], "q": 0}', "q"),
        ('{"format_version": 1, "variables": ["x"], "q": 1, "omega": [["d(x)", "x"]]}', "omega[0][1]"),
        ('{"format_version": 1, "variables": ["x"], "q": 1, "omega": [["d(x)"], ["d(x)"]]}', "omega"),
        ('{"format_version": 1, "variables": ["x"], "q": 1, "omega": [["d(x"]]}', "omega[0][0]"),
        ('{"format_version": 1, "variables": ["x"], "q": 1, "divisor": ["y"]}', "divisor"),
        ('{"format_version": 1, "variables": ["x"], "q": 1, "eigenvalues": [1.5]}', "eigenvalues[0]"),
    ],
)
def test_document_errors(text, context):
    with pytest.raises(ParseError) as err:
        parse_document(text)
    assert err.value.context == context


def test_json_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_document('{"format_version": 1,\n "variables": ["x"]\n "q": 1}')
    assert (err.value.line, err.value.column) == (3, 2)


def test_transition_direction():
    text = json.dumps({
        "format_version": 1, "variables": ["x", "y"], "q": 1,
        "atlas": {
            "charts": [{"label": "U", "omega": [["2*d(y)"]], "eta": [["0"]]},
                       {"label": "V", "omega": [["d(y)"]], "eta": [["0"]]}],
            "transitions": [{"from": "V", "to": "U", "G": [["2"]]}],
        },
    })
    (t,) = parse_document(text).atlas.transitions
    assert (t.target, t.source) == ("U", "V")


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_catalog_documents_round_trip(name):
    doc = EXAMPLES[name]()
    text = print_document(doc)
    assert parse_document(text) == doc
    assert print_document(parse_document(text)) == text


NAME_POOL = ["x", "y", "z1", "z2", "T11", "w_2", "alpha", "i"]


@st.composite
def documents(draw):
    n = draw(st.integers(1, 3))
    names = tuple(draw(st.permutations(NAME_POOL))[:n])
    q = draw(st.integers(1, 2))

    def coeff():
        return rational_functions(n, 1)

    def mat(rows, cols, degree):
        return MatrixForm([[draw(forms(n, degree, coeffs=coeff)) for _ in range(cols)] for _ in range(rows)])

    doc = StructureDocument(names, q, title=draw(st.text(max_size=12)), description=draw(st.text(max_size=20)))
    if draw(st.booleans()):
        doc.omega = mat(q, 1, 1)
    if draw(st.booleans()):
        doc.eta = mat(q, q, 1)
    if draw(st.booleans()):
        doc.witness = mat(q, q, 0)
    if draw(st.booleans()):
        doc.coordinates = mat(q, 1, 0)
    if draw(st.booleans()):
        doc.divisor = tuple(draw(st.lists(st.sampled_from(names), unique=True)))
    if draw(st.booleans()):
        doc.eigenvalues = tuple(draw(st.lists(gaussian(), min_size=1, max_size=3)))
    if draw(st.booleans()):
        doc.map = PolyMap(n, tuple(RationalFunction(draw(polynomials(n, 2, 2))) for _ in range(n)))
    if draw(st.booleans()):
        labels = ["U", "V", "W"][: draw(st.integers(1, 3))]
        charts = tuple((lab, _pair(mat(q, 1, 1), mat(q, q, 1))) for lab in labels)
        transitions = tuple(
            Transition(a, b, mat(q, q, 0)) for a in labels for b in labels if a != b and draw(st.booleans())
        )
        doc.atlas = AffineAtlas(charts, transitions)
    return doc


def _pair(omega, eta):
    from transaffine.affstruct import StructurePair

    return StructurePair(omega, eta)


@settings(max_examples=100)
@given(documents())
def test_random_document_round_trip(doc):
    text = print_document(doc)
    back = parse_document(text)
    assert back == doc
    assert print_document(back) == text
