# schema.py
"""
JSON input documents for `qpg check`. A document is one object; the keys a
command reads are:

    algebra      "so3" | "sl2" | {"abelian": n}
                 | {"name", "basis", "brackets": {"a,b": {"c": 1}}, "form", "matrices"}
    s            optional S^2 tensor replacing the inverse form
    chart        {"variables": [...], "ideal": [...], "name"} | {"group": true, "prefix": "x"}
    action       "conjugation" | "double" | "trivial" | {"<basis>": {"<variable>": "<poly>"}}
    bivector     "conjugation" | "zero" | {"x,y": "<poly>"}
    convention   "stored" (default) | "printed" for an explicit bivector
    moment       "identity" | ["<poly>", ...] into the matrix group of `algebra`
    graded       {"kind": "ghat" | "Q" | "Qs", "algebra": <algebra>}
    subalgebras  {"A": [{"<name>": c}], "B": [...]} | "ghat-pair"
    courant      {"kind": "standard", "eta": {"x,y,z": "<poly>"}} | {"kind": "action"}
    dirac        "tangent" | "cotangent" | "cartan" | {"bivector": {...}} | {"two_form": {...}}
                 | {"span": [{"vector": {...}, "form": {...}}]}
    bialgebroid  "point" | "tangent"
    generators   ["<poly>", ...] with optional
    parametrization {"variables", "ideal", "components"}
    points       [[...], ...]

Sign of bivectors: an explicit {"x,y": p} is used as given, and "conjugation"
is stored as -1/2 sum_i e^i_L ^ (e_i)_R. A bivector copied from the printed
form +1/2 sum_i e^i_L ^ (e_i)_R needs "convention": "printed", which negates
it on load.

Every error is a SchemaError whose `path` addresses the offending value.
"""

import json

from chart_geometry import (
    Chart,
    DifferentialForm,
    GAction,
    HamiltonianSpace,
    MatrixGroupChart,
    MultivectorField,
    PolyMap,
    conjugation_group_action,
    conjugation_structure,
    double_action,
    identity_map,
)
from courant import (
    DiracData,
    action_courant,
    bivector_graph,
    cartan_dirac,
    cotangent_bundle,
    standard_courant,
    standard_section,
    tangent_bundle,
    two_form_graph,
)
from quadratic_lie import (
    abelian_algebra,
    build_ghat,
    build_Q,
    build_Qs,
    ghat_bialgebra_pair,
    lie_algebra,
    sl2_algebra,
    so3_algebra,
)
from symbolic_core import ParseError, RingMismatchError, qq

BUILTIN_ALGEBRAS = {"so3": so3_algebra, "sl2": sl2_algebra}
GRADED_BUILDERS = {"ghat": build_ghat, "Q": build_Q}


class SchemaError(ValueError):
    def __init__(self, path, reason, position=None):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason
        self.position = position


def read_document(path):
    """Load a JSON object from a file path."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}", exc.pos) from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "the document must be a JSON object")
    return doc


def _require(obj, key, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing")
    return obj[key]


def _expect(value, kind, path, label):
    if not isinstance(value, kind):
        raise SchemaError(path, f"expected {label}")
    return value


def _rational(value, path):
    try:
        return qq(value)
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, f"not a rational number: {value!r}") from exc


def _matrix(rows, path):
    _expect(rows, list, path, "a list of rows")
    out = []
    for i, row in enumerate(rows):
        _expect(row, list, f"{path}[{i}]", "a list")
        out.append([_rational(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    return out


def _poly(chart, text, path):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = str(text)
    _expect(text, str, path, "a polynomial string")
    try:
        return chart.poly(text)
    except ParseError as exc:
        raise SchemaError(path, f"{exc.reason} at position {exc.position}", exc.position) from exc


def _variable_index(chart, name, path):
    if name not in chart.variables:
        raise SchemaError(path, f"unknown variable {name!r}")
    return chart.variables.index(name)


def _alternating(cls, chart, terms, path):
    """{"x,y": "p"} -> sum p * d_x ^ d_y, signs from reordering."""
    _expect(terms, dict, path, "an object keyed by comma-separated variables")
    out = cls.zero(chart)
    for key, text in terms.items():
        here = f"{path}['{key}']"
        names = [k.strip() for k in key.split(",")] if key else []
        indices = [_variable_index(chart, n, here) for n in names]
        if len(set(indices)) != len(indices):
            raise SchemaError(here, "repeated variable")
        out = out + cls.coordinate(chart, *indices).scale(_poly(chart, text, here))
    return out


# ===============================
# DOCUMENT
# ===============================
class InputDocument:
    """Lazily builds the objects a command asks for."""

    def __init__(self, doc):
        self.doc = doc
        self._algebra = None
        self._chart = None
        self._action = None

    @classmethod
    def from_file(cls, path):
        return cls(read_document(path))

    # -----------------------------
    # ALGEBRA
    # -----------------------------
    def algebra(self):
        if self._algebra is None:
            self._algebra = self._load_algebra(_require(self.doc, "algebra", "$"), "$.algebra")
        return self._algebra

    def _load_algebra(self, spec, path):
        if isinstance(spec, str):
            if spec not in BUILTIN_ALGEBRAS:
                raise SchemaError(path, f"unknown algebra {spec!r}, expected one of {sorted(BUILTIN_ALGEBRAS)}")
            return BUILTIN_ALGEBRAS[spec]()
        _expect(spec, dict, path, "a name or an object")
        if "abelian" in spec:
            n = _expect(spec["abelian"], int, f"{path}.abelian", "an integer")
            return abelian_algebra(n)

        basis = _expect(_require(spec, "basis", path), list, f"{path}.basis", "a list of names")
        brackets = {}
        raw = spec.get("brackets", {})
        _expect(raw, dict, f"{path}.brackets", "an object")
        for key, terms in raw.items():
            here = f"{path}.brackets['{key}']"
            pair = [k.strip() for k in key.split(",")]
            if len(pair) != 2 or any(p not in basis for p in pair):
                raise SchemaError(here, "expected two basis names")
            _expect(terms, dict, here, "an object")
            out = {}
            for name, c in terms.items():
                if name not in basis:
                    raise SchemaError(f"{here}.{name}", "unknown basis element")
                out[basis.index(name)] = _rational(c, f"{here}.{name}")
            brackets[(basis.index(pair[0]), basis.index(pair[1]))] = out
        form = _matrix(spec["form"], f"{path}.form") if "form" in spec else None
        matrices = None
        if "matrices" in spec:
            matrices = tuple(
                tuple(tuple(row) for row in _matrix(m, f"{path}.matrices[{k}]"))
                for k, m in enumerate(spec["matrices"])
            )
        try:
            return lie_algebra(spec.get("name", "g"), basis, brackets, form, matrices)
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from exc

    def tensor(self):
        return _matrix(self.doc["s"], "$.s") if "s" in self.doc else None

    # -----------------------------
    # CHART
    # -----------------------------
    def chart(self):
        if self._chart is None:
            self._chart = self._load_chart(_require(self.doc, "chart", "$"), "$.chart")
        return self._chart

    def _load_chart(self, spec, path):
        _expect(spec, dict, path, "an object")
        if spec.get("group"):
            try:
                return MatrixGroupChart(self.algebra(), prefix=spec.get("prefix", "x"))
            except ValueError as exc:
                raise SchemaError(path, str(exc)) from exc
        variables = _expect(_require(spec, "variables", path), list, f"{path}.variables", "a list of names")
        try:
            raw = Chart.affine(variables, name=spec.get("name", ""))
        except ValueError as exc:
            raise SchemaError(f"{path}.variables", str(exc)) from exc
        ideal = [_poly(raw, g, f"{path}.ideal[{i}]") for i, g in enumerate(spec.get("ideal", []))]
        return Chart.affine(variables, ideal, name=spec.get("name", ""))

    def points(self, override=None):
        raw = override if override is not None else self.doc.get("points", [])
        _expect(raw, list, "$.points", "a list of points")
        if not raw:
            return []
        chart = self.chart()
        out = []
        for i, point in enumerate(raw):
            here = f"$.points[{i}]"
            values = [_rational(v, f"{here}[{j}]") for j, v in enumerate(_expect(point, list, here, "a list"))]
            try:
                out.append(chart.check_point(values))
            except ValueError as exc:
                raise SchemaError(here, str(exc)) from exc
        return out

    # -----------------------------
    # ACTION, BIVECTOR, MOMENT
    # -----------------------------
    def action(self):
        if self._action is not None:
            return self._action
        spec = _require(self.doc, "action", "$")
        chart, L = self.chart(), self.algebra()
        if isinstance(spec, str):
            if spec == "trivial":
                self._action = GAction.trivial(L, chart)
            elif spec in ("conjugation", "double"):
                if not isinstance(chart, MatrixGroupChart):
                    raise SchemaError("$.action", f"{spec!r} needs a group chart")
                if spec == "conjugation":
                    self._action = conjugation_structure(chart, self.tensor())[0]
                else:
                    self._action = double_action(chart, negate_second=self.doc.get("negate_second", True))
            else:
                raise SchemaError("$.action", f"unknown action {spec!r}")
            return self._action

        _expect(spec, dict, "$.action", "a name or an object keyed by basis elements")
        fields = []
        for name in L.basis_names:
            here = f"$.action.{name}"
            components = spec.get(name, {})
            _expect(components, dict, here, "an object keyed by variables")
            field = MultivectorField.zero(chart)
            for var, text in components.items():
                c = _variable_index(chart, var, f"{here}.{var}")
                field = field + MultivectorField.coordinate(chart, c).scale(_poly(chart, text, f"{here}.{var}"))
            fields.append(field)
        for name in spec:
            if name not in L.basis_names:
                raise SchemaError(f"$.action.{name}", f"not a basis element of {L.name}")
        self._action = GAction(L, fields, chart)
        return self._action

    def bivector(self):
        spec = self.doc.get("bivector", "zero")
        chart = self.chart()
        if spec == "zero":
            return MultivectorField.zero(chart)
        if spec == "conjugation":
            if not isinstance(chart, MatrixGroupChart):
                raise SchemaError("$.bivector", "'conjugation' needs a group chart")
            return conjugation_structure(chart, self.tensor())[1]
        pi = _alternating(MultivectorField, chart, spec, "$.bivector")
        if not pi.is_zero() and pi.degree != 2:
            raise SchemaError("$.bivector", "expected a bivector")
        convention = self.doc.get("convention", "stored")
        if convention not in ("stored", "printed"):
            raise SchemaError("$.convention", f"expected 'stored' or 'printed', got {convention!r}")
        return -pi if convention == "printed" else pi

    def moment(self):
        spec = _require(self.doc, "moment", "$")
        chart = self.chart()
        if spec == "identity":
            if not isinstance(chart, MatrixGroupChart):
                raise SchemaError("$.moment", "'identity' needs a group chart")
            return identity_map(chart)
        _expect(spec, list, "$.moment", "'identity' or a list of components")
        try:
            target = MatrixGroupChart(self.algebra())
        except ValueError as exc:
            raise SchemaError("$.algebra", str(exc)) from exc
        components = [_poly(chart, c, f"$.moment[{i}]") for i, c in enumerate(spec)]
        try:
            return PolyMap(chart, target, components, name="Phi")
        except ValueError as exc:
            raise SchemaError("$.moment", str(exc)) from exc

    def space(self, with_moment=False):
        chart = self.chart()
        moment = self.moment() if with_moment else None
        group_action = conjugation_group_action(chart) if self.doc.get("action") == "conjugation" else None
        return HamiltonianSpace(
            chart, self.action(), self.bivector(), moment, group_action, chart.name, self.tensor()
        )

    # -----------------------------
    # GRADED ALGEBRAS
    # -----------------------------
    def graded(self):
        spec = _require(self.doc, "graded", "$")
        kind = _require(spec, "kind", "$.graded")
        L = self._load_algebra(_require(spec, "algebra", "$.graded"), "$.graded.algebra")
        if kind == "Qs":
            s = _matrix(spec["s"], "$.graded.s") if "s" in spec else L.tensor()
            return build_Qs(L, s)
        if kind not in GRADED_BUILDERS:
            raise SchemaError("$.graded.kind", f"unknown kind {kind!r}")
        return GRADED_BUILDERS[kind](L)

    def subalgebras(self):
        """(D, A, B) for a Manin triple check."""
        spec = _require(self.doc, "subalgebras", "$")
        if spec == "ghat-pair":
            L = self._load_algebra(_require(self.doc, "algebra", "$"), "$.algebra")
            return ghat_bialgebra_pair(L)
        D = self.graded()
        out = []
        for label in ("A", "B"):
            vectors = []
            for i, coeffs in enumerate(_require(spec, label, "$.subalgebras")):
                here = f"$.subalgebras.{label}[{i}]"
                _expect(coeffs, dict, here, "an object keyed by generator names")
                for name in coeffs:
                    if name not in D.names:
                        raise SchemaError(f"{here}.{name}", f"not a generator of {D.name}")
                vectors.append(D.vector({k: _rational(v, f"{here}.{k}") for k, v in coeffs.items()}))
            out.append(vectors)
        return D, out[0], out[1]

    # -----------------------------
    # COURANT AND DIRAC
    # -----------------------------
    def courant(self):
        spec = _require(self.doc, "courant", "$")
        kind = _require(spec, "kind", "$.courant")
        if kind == "standard":
            chart = self.chart()
            eta = _alternating(DifferentialForm, chart, spec["eta"], "$.courant.eta") if "eta" in spec else None
            try:
                return standard_courant(chart, eta)
            except (ValueError, RingMismatchError) as exc:
                raise SchemaError("$.courant", str(exc)) from exc
        if kind == "action":
            try:
                return action_courant(self.action().algebra, self.action())
            except ValueError as exc:
                raise SchemaError("$.courant", str(exc)) from exc
        raise SchemaError("$.courant.kind", f"unknown kind {kind!r}")

    def dirac(self):
        spec = _require(self.doc, "dirac", "$")
        if spec == "cartan":
            chart = self.chart()
            if not isinstance(chart, MatrixGroupChart):
                raise SchemaError("$.dirac", "'cartan' needs a group chart")
            return cartan_dirac(chart, s=self.tensor())
        E = self.courant()
        if spec == "tangent":
            return tangent_bundle(E)
        if spec == "cotangent":
            return cotangent_bundle(E)
        _expect(spec, dict, "$.dirac", "a name or an object")
        chart = E.chart
        try:
            if "bivector" in spec:
                return bivector_graph(E, _alternating(MultivectorField, chart, spec["bivector"], "$.dirac.bivector"))
            if "two_form" in spec:
                return two_form_graph(E, _alternating(DifferentialForm, chart, spec["two_form"], "$.dirac.two_form"))
            if "span" in spec:
                span = []
                for i, item in enumerate(spec["span"]):
                    here = f"$.dirac.span[{i}]"
                    X = _alternating(MultivectorField, chart, item.get("vector", {}), f"{here}.vector")
                    alpha = _alternating(DifferentialForm, chart, item.get("form", {}), f"{here}.form")
                    span.append(standard_section(E, X, alpha))
                return DiracData(E, span, "span")
        except ValueError as exc:
            raise SchemaError("$.dirac", str(exc)) from exc
        raise SchemaError("$.dirac", "expected 'bivector', 'two_form' or 'span'")

    # -----------------------------
    # COISOTROPY
    # -----------------------------
    def generators(self):
        chart = self.chart()
        raw = _expect(_require(self.doc, "generators", "$"), list, "$.generators", "a list")
        return [_poly(chart, g, f"$.generators[{i}]") for i, g in enumerate(raw)]

    def parametrization(self):
        spec = self.doc.get("parametrization")
        if spec is None:
            return None
        source = self._load_chart(spec, "$.parametrization")
        raw = _expect(_require(spec, "components", "$.parametrization"), list, "$.parametrization.components", "a list")
        components = [_poly(source, c, f"$.parametrization.components[{i}]") for i, c in enumerate(raw)]
        try:
            return PolyMap(source, self.chart(), components, name="parametrization")
        except ValueError as exc:
            raise SchemaError("$.parametrization.components", str(exc)) from exc


def load_points(path):
    """A JSON list of points for --points."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}", exc.pos) from exc
    return _expect(doc, list, "$", "a list of points")
