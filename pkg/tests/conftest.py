import os
import random
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from transaffine.forms import DifferentialForm, MatrixForm  # noqa: E402
from transaffine.polyalg import GaussianRational, Polynomial, RationalFunction  # noqa: E402

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")


# -- hypothesis strategies ----------------------------------------------------

small_ints = st.integers(-4, 4)


@st.composite
def gaussian(draw, allow_imag=True):
    re = draw(st.fractions(min_value=-5, max_value=5, max_denominator=4))
    im = draw(st.fractions(min_value=-3, max_value=3, max_denominator=3)) if allow_imag and draw(st.booleans()) else 0
    return GaussianRational(re, im)


@st.composite
def polynomials(draw, nvars, max_degree=3, max_terms=4, allow_imag=True):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = draw(st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars))
        while sum(e) > max_degree:
            k = max(range(nvars), key=lambda i: e[i])
            e[k] -= 1
        terms[tuple(e)] = draw(gaussian(allow_imag))
    return Polynomial(nvars, terms)


@st.composite
def rational_functions(draw, nvars, max_degree=2):
    num = draw(polynomials(nvars, max_degree))
    den = draw(polynomials(nvars, max_degree, max_terms=3))
    if den.is_zero:
        den = Polynomial.one(nvars)
    return RationalFunction(num, den)


@st.composite
def forms(draw, nvars, degree, coeffs=None):
    from itertools import combinations

    coeffs = coeffs or (lambda: polynomials(nvars, 2, 3))
    terms = {}
    for idx in combinations(range(nvars), degree):
        if draw(st.booleans()):
            terms[idx] = draw(coeffs())
    return DifferentialForm(nvars, degree, terms)


@st.composite
def matrix_forms(draw, nvars, rows, cols, degree, coeffs=None):
    return MatrixForm([[draw(forms(nvars, degree, coeffs)) for _ in range(cols)] for _ in range(rows)])


# -- plain random generators (for acceptance loops) ---------------------------


def random_poly(rng: random.Random, nvars: int, max_degree: int = 2, max_terms: int = 3, imag: bool = False):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * nvars
        for _ in range(rng.randint(0, max_degree)):
            e[rng.randrange(nvars)] += 1
        c = GaussianRational(rng.randint(-3, 3), rng.randint(-2, 2) if imag and rng.random() < 0.3 else 0)
        terms[tuple(e)] = c
    return Polynomial(nvars, terms)


def random_invertible(rng: random.Random, q: int, nvars: int, max_degree: int = 2, unit_at_zero: bool = False):
    """Random polynomial matrix with nonzero determinant (optionally G(0) = I)."""
    from transaffine.forms import determinant

    while True:
        rows = []
        for i in range(q):
            row = []
            for j in range(q):
                p = random_poly(rng, nvars, max_degree) if rng.random() < 0.7 else Polynomial.zero(nvars)
                if unit_at_zero:
                    p = p - Polynomial.constant(p.constant_term, nvars)
                    if i == j:
                        p = p + Polynomial.one(nvars)
                elif i == j and rng.random() < 0.5:
                    p = p + Polynomial.constant(rng.choice([1, 2, -1]), nvars)
                row.append(p)
            rows.append(row)
        G = MatrixForm.from_functions(rows, nvars)
        if not determinant(G).is_zero:
            return G


def random_constant_matrix(rng: random.Random, q: int, nvars: int, invertible: bool = True):
    from transaffine.forms import determinant

    while True:
        G = MatrixForm.from_functions([[rng.randint(-3, 3) for _ in range(q)] for _ in range(q)], nvars)
        if not invertible or not determinant(G).is_zero:
            return G


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE: dict[int, str] = {}


def record_acceptance(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
