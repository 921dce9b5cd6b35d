"""JSON structure documents (``format_version`` 1).

Layout::

    {
      "format_version": 1,
      "title": "...", "description": "...",
      "variables": ["x", "y"],
      "q": 1,
      "omega": [["x*d(y)"]],                 # q x 1, 1-forms
      "eta": [["d(x)/x"]],                   # q x q, 1-forms
      "atlas": {"charts": [{"label": "U", "omega": ..., "eta": ...}],
                "transitions": [{"from": "V", "to": "U", "G": [[...]]}]},
      "divisor": ["x"],                      # hyperplanes {v = 0}
      "witness": [["1"]],                    # q x q functions
      "coordinates": [["y"]],                # q x 1 functions
      "eigenvalues": ["1", "2", "-3"],
      "map": ["x^2", "y"]                    # one function per variable
    }

Only ``format_version``, ``variables`` and ``q`` are required.  A transition
``{"from": j, "to": i, "G": G}`` states ``omega_i = G omega_j``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .affstruct import AffineAtlas, StructurePair, Transition
from .expr import ParseError, parse_form, parse_matrix, parse_scalar
from .forms import FormError, MatrixForm, PolyMap
from .polyalg import AlgebraError, GaussianRational

__all__ = ["StructureDocument", "parse_document", "print_document", "FORMAT_VERSION"]

FORMAT_VERSION = 1

_FIELDS = (
    "format_version", "title", "description", "variables", "q", "omega", "eta",
    "atlas", "divisor", "witness", "coordinates", "eigenvalues", "map",
)
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(eq=True)
class StructureDocument:
    variables: tuple
    q: int
    title: str = ""
    description: str = ""
    omega: MatrixForm | None = None
    eta: MatrixForm | None = None
    atlas: AffineAtlas | None = None
    divisor: tuple | None = None
    witness: MatrixForm | None = None
    coordinates: MatrixForm | None = None
    eigenvalues: tuple | None = None
    map: PolyMap | None = None

    __hash__ = None

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def pair(self) -> StructurePair:
        if self.omega is None or self.eta is None:
            raise ValueError("document needs both omega and eta")
        return StructurePair(self.omega, self.eta)

    def divisor_indices(self) -> list[int]:
        return [self.variables.index(v) for v in self.divisor or ()]


# ---------------------------------------------------------------------------
# Reading
# ---------------------------------------------------------------------------


def _fail(message: str, context: str) -> ParseError:
    return ParseError(message, 1, 1, context)


def _check_shape(M: MatrixForm, shape: tuple, context: str) -> MatrixForm:
    if M.shape != shape:
        raise _fail(f"expected a {shape[0]} x {shape[1]} matrix, got {M.rows} x {M.cols}", context)
    return M


def _matrix(raw, names, degree, shape, context) -> MatrixForm:
    try:
        M = parse_matrix(raw, names, degree, context)
    except (FormError, AlgebraError) as exc:
        raise _fail(str(exc), context) from None
    return _check_shape(M, shape, context)


def _names(raw, context: str) -> tuple:
    if not isinstance(raw, list) or not all(isinstance(v, str) for v in raw):
        raise _fail("expected a list of variable names", context)
    return tuple(raw)


def parse_document(text: str) -> StructureDocument:
    """Parse and validate a document; every failure is a :class:`ParseError`."""
    try:
        return _parse_document(text)
    except (FormError, AlgebraError) as exc:
        raise _fail(str(exc), "document") from None


def _parse_document(text: str) -> StructureDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, "document") from None
    if not isinstance(data, dict):
        raise _fail("top level must be an object", "document")
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise _fail(f"unknown field {unknown[0]!r}", "document")
    for key in ("format_version", "variables", "q"):
        if key not in data:
            raise _fail(f"missing required field {key!r}", "document")
    if data["format_version"] != FORMAT_VERSION or isinstance(data["format_version"], bool):
        raise _fail(f"unsupported format_version {data['format_version']!r}", "format_version")

    names = _names(data["variables"], "variables")
    if not names:
        raise _fail("at least one variable is required", "variables")
    for v in names:
        if not _NAME.match(v) or v == "d":
            raise _fail(f"invalid variable name {v!r}", "variables")
    if len(set(names)) != len(names):
        raise _fail("duplicate variable name", "variables")
    n = len(names)
    q = data["q"]
    if not isinstance(q, int) or isinstance(q, bool) or q < 1:
        raise _fail("q must be a positive integer", "q")

    doc = StructureDocument(variables=names, q=q)
    for key in ("title", "description"):
        if key in data:
            if not isinstance(data[key], str):
                raise _fail("expected a string", key)
            setattr(doc, key, data[key])
    if "omega" in data:
        doc.omega = _matrix(data["omega"], names, 1, (q, 1), "omega")
    if "eta" in data:
        doc.eta = _matrix(data["eta"], names, 1, (q, q), "eta")
    if "witness" in data:
        doc.witness = _matrix(data["witness"], names, 0, (q, q), "witness")
    if "coordinates" in data:
        doc.coordinates = _matrix(data["coordinates"], names, 0, (q, 1), "coordinates")
    if "divisor" in data:
        div = _names(data["divisor"], "divisor")
        for v in div:
            if v not in names:
                raise _fail(f"divisor variable {v!r} is not declared", "divisor")
        if len(set(div)) != len(div):
            raise _fail("duplicate divisor variable", "divisor")
        doc.divisor = div
    if "eigenvalues" in data:
        raw = data["eigenvalues"]
        if not isinstance(raw, list) or not raw:
            raise _fail("expected a non-empty list of numbers", "eigenvalues")
        vals = []
        for k, v in enumerate(raw):
            if isinstance(v, int) and not isinstance(v, bool):
                v = str(v)
            if not isinstance(v, str):
                raise _fail("eigenvalues are integers or number strings", f"eigenvalues[{k}]")
            try:
                vals.append(parse_scalar(v, f"eigenvalues[{k}]"))
            except (AlgebraError, FormError) as exc:
                raise _fail(str(exc), f"eigenvalues[{k}]") from None
        doc.eigenvalues = tuple(vals)
    if "map" in data:
        raw = data["map"]
        if not isinstance(raw, list) or len(raw) != n:
            raise _fail(f"expected {n} component expressions", "map")
        comps = [parse_form(e, names, 0, f"map[{k}]").as_function for k, e in enumerate(raw)]
        doc.map = PolyMap(n, tuple(comps))
    if "atlas" in data:
        doc.atlas = _atlas(data["atlas"], names, q)
    return doc


def _atlas(raw, names, q) -> AffineAtlas:
    if not isinstance(raw, dict) or set(raw) - {"charts", "transitions"} or "charts" not in raw:
        raise _fail("atlas needs 'charts' and optional 'transitions' only", "atlas")
    charts = []
    if not isinstance(raw["charts"], list) or not raw["charts"]:
        raise _fail("expected a non-empty list of charts", "atlas.charts")
    for k, c in enumerate(raw["charts"]):
        ctx = f"atlas.charts[{k}]"
        if not isinstance(c, dict) or set(c) != {"label", "omega", "eta"}:
            raise _fail("a chart has exactly 'label', 'omega' and 'eta'", ctx)
        if not isinstance(c["label"], str) or not c["label"]:
            raise _fail("chart label must be a non-empty string", ctx)
        om = _matrix(c["omega"], names, 1, (q, 1), ctx + ".omega")
        et = _matrix(c["eta"], names, 1, (q, q), ctx + ".eta")
        charts.append((c["label"], StructurePair(om, et)))
    labels = [lab for lab, _ in charts]
    if len(set(labels)) != len(labels):
        raise _fail("duplicate chart label", "atlas.charts")
    transitions = []
    raw_t = raw.get("transitions", [])
    if not isinstance(raw_t, list):
        raise _fail("expected a list of transitions", "atlas.transitions")
    for k, t in enumerate(raw_t):
        ctx = f"atlas.transitions[{k}]"
        if not isinstance(t, dict) or set(t) != {"from", "to", "G"}:
            raise _fail("a transition has exactly 'from', 'to' and 'G'", ctx)
        for end in ("from", "to"):
            if t[end] not in labels:
                raise _fail(f"unknown chart label {t[end]!r}", ctx)
        G = _matrix(t["G"], names, 0, (q, q), ctx + ".G")
        transitions.append(Transition(t["to"], t["from"], G))
    return AffineAtlas(tuple(charts), tuple(transitions))


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------


def _scalar_text(v: GaussianRational) -> str:
    return v.format()


def print_document(doc: StructureDocument) -> str:
    names = list(doc.variables)
    out: dict = {"format_version": FORMAT_VERSION, "title": doc.title, "description": doc.description,
                 "variables": names, "q": doc.q}
    if doc.omega is not None:
        out["omega"] = doc.omega.format(names)
    if doc.eta is not None:
        out["eta"] = doc.eta.format(names)
    if doc.atlas is not None:
        out["atlas"] = {
            "charts": [
                {"label": lab, "omega": p.omega.format(names), "eta": p.eta.format(names)}
                for lab, p in doc.atlas.charts
            ],
            "transitions": [
                {"from": t.source, "to": t.target, "G": t.G.format(names)} for t in doc.atlas.transitions
            ],
        }
    if doc.divisor is not None:
        out["divisor"] = list(doc.divisor)
    if doc.witness is not None:
        out["witness"] = doc.witness.format(names)
    if doc.coordinates is not None:
        out["coordinates"] = doc.coordinates.format(names)
    if doc.eigenvalues is not None:
        out["eigenvalues"] = [_scalar_text(v) for v in doc.eigenvalues]
    if doc.map is not None:
        out["map"] = [c.format(names) for c in doc.map.components]
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n"
