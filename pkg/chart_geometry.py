# chart_geometry.py
"""
Polynomial multivector calculus on affine charts and SL(n) varieties,
and the manifold-level checks built on it: quasi-Poisson actions, the
cotangent Lie algebroid, group-valued moment maps, fusion, braiding,
twisting, coisotropy and quasi-Poisson bialgebroids.

Sign convention: bivectors are stored as the negatives of the usual
printed ones, e.g. pi_G = -1/2 sum e^{iL} ^ e_i^R. With this choice
[pi, pi] = rho(phi), the moment-map identity and a o i = rho hold on the
nose with the Schouten bracket below.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations

from sympy.polys.domains import QQ

from quadratic_lie import (
    ExteriorElement,
    LieAlgebraData,
    cartan_trivector,
    check_r_matrix,
    direct_sum,
    double,
    sl2_algebra,
)
from report import Report
from symbolic_core import (
    CoordinateRing,
    GradedBracket,
    GradedPresentation,
    RingMismatchError,
    apply_derivation,
    determinant,
    embed_polynomial,
    evaluate_polynomial,
    exterior_merge,
    format_polynomial,
    graded_multiply,
    inverse_matrix,
    null_space,
    parse_polynomial,
    polynomial_determinant,
    qq,
    rank_of,
    span_contains,
    substitute,
)

GENERIC_DETERMINANT_MAX_RANK = 4

ZERO = QQ(0)
ONE = QQ(1)
HALF = QQ(1, 2)


# ===============================
# CHARTS
# ===============================
class Chart:
    """
    An affine chart Spec(QQ[x]/I). `frame` is a list of vector fields
    spanning the tangent spaces of the variety and `coframe` the dual
    1-forms; on a plain affine chart they are the coordinate fields and dx.
    """

    def __init__(self, ring, name="", frame=None, coframe=None):
        self.ring = ring
        self.name = name or ring.name
        self._frame = frame
        self._coframe = coframe

    @classmethod
    def affine(cls, variables, ideal=(), name=""):
        return cls(CoordinateRing(variables, ideal, name=name), name)

    @classmethod
    def point(cls, name="point"):
        return cls(CoordinateRing([], name=name), name)

    def __repr__(self):
        return f"Chart({self.name or ','.join(self.ring.variables)})"

    def __eq__(self, other):
        return isinstance(other, Chart) and self.ring == other.ring

    def __hash__(self):
        return hash(self.ring)

    @property
    def dim(self):
        return self.ring.ngens

    @property
    def variables(self):
        return self.ring.variables

    def gen(self, name_or_index):
        return self.ring.gen(name_or_index)

    def poly(self, value):
        """Polynomial of this chart from text, a number or a ring element."""
        if isinstance(value, str):
            return parse_polynomial(value, self.ring)
        return self.ring.reduce(self.ring.coerce(value))

    @property
    def frame(self):
        if self._frame is None:
            self._frame = [MultivectorField.coordinate(self, c) for c in range(self.dim)]
        return self._frame

    @property
    def coframe(self):
        if self._coframe is None:
            self._coframe = [DifferentialForm.coordinate(self, c) for c in range(self.dim)]
        return self._coframe

    def check_point(self, point):
        point = [qq(v) for v in point]
        if not self.ring.contains_point(point):
            raise ValueError(f"point {format_point(point)} is not on {self.name or 'the chart'}")
        return point


def format_point(point):
    return "(" + ", ".join(str(qq(v)) for v in point) + ")"


# ===============================
# MULTIVECTORS AND FORMS
# ===============================
def _accumulate(out, key, value):
    if not value:
        return
    if key in out:
        out[key] = out[key] + value
    else:
        out[key] = value


def _sorted_with_sign(indices):
    """Sort an index tuple; (sign, sorted) or None on repeats."""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        return None
    sign = 1
    for i in range(len(indices)):
        for j in range(i + 1, len(indices)):
            if indices[i] > indices[j]:
                sign = -sign
    return sign, tuple(sorted(indices))


class _Alternating:
    """Alternating polynomial tensor keyed by increasing coordinate-index tuples."""

    __slots__ = ("chart", "terms")
    symbol = ""

    def __init__(self, chart, terms=None, reduced=False):
        self.chart = chart
        ring = chart.ring
        clean = {}
        for key, c in (terms or {}).items():
            c = ring.coerce(c)
            if not reduced:
                c = ring.reduce(c)
            if c:
                clean[tuple(key)] = c
        self.terms = clean

    # --- constructors ---
    @classmethod
    def function(cls, chart, f):
        return cls(chart, {(): chart.poly(f)})

    @classmethod
    def vector(cls, chart, components):
        if len(components) != chart.dim:
            raise ValueError(f"{len(components)} components for a chart of dimension {chart.dim}")
        return cls(chart, {(c,): chart.poly(v) for c, v in enumerate(components)})

    @classmethod
    def coordinate(cls, chart, *indices):
        normal = _sorted_with_sign(indices)
        if normal is None:
            return cls(chart)
        sign, key = normal
        return cls(chart, {key: chart.ring.constant(sign)})

    @classmethod
    def zero(cls, chart):
        return cls(chart)

    # --- arithmetic ---
    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.chart != self.chart:
            raise RingMismatchError(f"{other.chart!r} used with {self.chart!r}")

    def __add__(self, other):
        self._same(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(terms, k, c)
        return type(self)(self.chart, terms)

    def __neg__(self):
        return type(self)(self.chart, {k: -c for k, c in self.terms.items()}, reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        ring = self.chart.ring
        factor = ring.coerce(factor)
        return type(self)(self.chart, {k: c * factor for k, c in self.terms.items()})

    def wedge(self, other):
        self._same(other)
        terms = {}
        for I, a in self.terms.items():
            for J, b in other.terms.items():
                merged = exterior_merge(I, J)
                if merged is None:
                    continue
                sign, K = merged
                _accumulate(terms, K, a * b if sign > 0 else -(a * b))
        return type(self)(self.chart, terms)

    # --- inspection ---
    @property
    def degree(self):
        found = {len(k) for k in self.terms}
        return found.pop() if len(found) == 1 else None

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if type(other) is not type(self) or other.chart != self.chart:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def coefficient(self, *indices):
        return self.terms.get(tuple(indices), self.chart.ring.zero)

    def component(self, degree):
        return type(self)(
            self.chart, {k: c for k, c in self.terms.items() if len(k) == degree}, reduced=True
        )

    def components(self):
        """Coefficient list of a 1-tensor in coordinate order."""
        return [self.coefficient(c) for c in range(self.chart.dim)]

    def value(self, point):
        point = [qq(v) for v in point]
        return {k: evaluate_polynomial(c, point) for k, c in self.terms.items()}

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.chart.variables
        pieces = []
        for key in sorted(self.terms):
            text = format_polynomial(self.terms[key])
            word = "^".join(f"{self.symbol}{names[i]}" for i in key)
            if not word:
                pieces.append(f"({text})")
            elif text == "1":
                pieces.append(word)
            elif text == "-1":
                pieces.append(f"-{word}")
            else:
                pieces.append(f"({text})*{word}")
        return " + ".join(pieces)

    __repr__ = __str__


class MultivectorField(_Alternating):
    __slots__ = ()
    symbol = "d_"

    def __call__(self, f):
        """X(f) for a vector field X."""
        return apply_vector(self, f)


class DifferentialForm(_Alternating):
    __slots__ = ()
    symbol = "d"

    def pair(self, X):
        """alpha(X) for a 1-form and a vector field."""
        ring = self.chart.ring
        total = ring.zero
        for (c,), a in self.terms.items():
            x = X.terms.get((c,))
            if x:
                total += a * x
        return ring.reduce(total)


def vector_components(X):
    return [X.coefficient(c) for c in range(X.chart.dim)]


def apply_vector(X, f):
    ring = X.chart.ring
    f = X.chart.poly(f)
    gens = ring.poly_ring.gens
    total = ring.zero
    for (c,), x in X.terms.items():
        df = f.diff(gens[c])
        if df:
            total += x * df
    return ring.reduce(total)


def differential(chart, f):
    f = chart.poly(f)
    gens = chart.ring.poly_ring.gens
    return DifferentialForm(chart, {(c,): f.diff(gens[c]) for c in range(chart.dim)})


def sharp(pi, alpha):
    """(pi# alpha)^b = sum_a alpha_a pi^{ab}."""
    out = {}
    for key, p in pi.terms.items():
        if len(key) != 2:
            raise ValueError("sharp needs a bivector")
        a, b = key
        alpha_a, alpha_b = alpha.terms.get((a,)), alpha.terms.get((b,))
        if alpha_a:
            _accumulate(out, (b,), alpha_a * p)
        if alpha_b:
            _accumulate(out, (a,), -(alpha_b * p))
    return MultivectorField(pi.chart, out)


def pi_pair(pi, alpha, beta):
    """pi(alpha, beta) = sum_{a<b} pi^{ab} (alpha_a beta_b - alpha_b beta_a)."""
    ring = pi.chart.ring
    zero = ring.zero
    total = zero
    for (a, b), p in pi.terms.items():
        value = alpha.terms.get((a,), zero) * beta.terms.get((b,), zero) - alpha.terms.get(
            (b,), zero
        ) * beta.terms.get((a,), zero)
        if value:
            total += p * value
    return ring.reduce(total)


def _permutation_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def contract(P, forms):
    """P(alpha_1, ..., alpha_k) for a homogeneous k-vector P."""
    ring = P.chart.ring
    k = len(forms)
    total = ring.zero
    perms = [(p, _permutation_sign(p)) for p in permutations(range(k))]
    for key, p in P.terms.items():
        if len(key) != k:
            continue
        det = ring.zero
        for perm, sign in perms:
            term = ring.one
            for j in range(k):
                a = forms[j].terms.get((key[perm[j]],))
                if not a:
                    term = None
                    break
                term = term * a
            if term is not None:
                det = det + term if sign > 0 else det - term
        if det:
            total += p * det
    return ring.reduce(total)


def _bracket_with_polynomial(P, f):
    """Unreduced coefficients of [P, f] for a raw polynomial f."""
    gens = P.chart.ring.poly_ring.gens
    out = {}
    for key, p in P.terms.items():
        k = len(key)
        for m, v in enumerate(key):
            df = f.diff(gens[v])
            if not df:
                continue
            value = p * df
            _accumulate(out, key[:m] + key[m + 1:], value if (k - 1 - m) % 2 == 0 else -value)
    return out


def preserves_ideal(P):
    """[P, h] lies in the ideal for every ideal generator h."""
    ring = P.chart.ring
    for h in ring.ideal_generators:
        for c in _bracket_with_polynomial(P, h).values():
            if ring.reduce(c):
                return False
    return True


def embed_field(P, chart, positions):
    """Move P to a larger chart, coordinate i going to positions[i]."""
    out = {}
    for key, c in P.terms.items():
        normal = _sorted_with_sign([positions[i] for i in key])
        sign, new_key = normal
        value = embed_polynomial(c, chart.ring, positions)
        _accumulate(out, new_key, value if sign > 0 else -value)
    return type(P)(chart, out)


def schouten(a, b, strict=False):
    """
    Schouten-Nijenhuis bracket through the odd-coordinate picture
        [P, Q] = sum_v (P <-d/dtheta_v)(d_v Q) - (d_v P)(d/dtheta_v-> Q).
    [X, f] = X(f) and on vector fields it is the Lie bracket.
    """
    if a.chart != b.chart:
        raise RingMismatchError(f"schouten bracket across {a.chart!r} and {b.chart!r}")
    if strict:
        for label, P in (("first", a), ("second", b)):
            if not preserves_ideal(P):
                raise ValueError(f"{label} argument does not preserve the ideal of {a.chart!r}")
    chart = a.chart
    gens = chart.ring.poly_ring.gens
    out = {}
    for I, p in a.terms.items():
        k = len(I)
        for J, q in b.terms.items():
            for m, v in enumerate(I):
                dq = q.diff(gens[v])
                if not dq:
                    continue
                merged = exterior_merge(I[:m] + I[m + 1:], J)
                if merged is None:
                    continue
                sign, K = merged
                if (k - 1 - m) % 2:
                    sign = -sign
                value = p * dq
                _accumulate(out, K, value if sign > 0 else -value)
            for m, v in enumerate(J):
                dp = p.diff(gens[v])
                if not dp:
                    continue
                merged = exterior_merge(I, J[:m] + J[m + 1:])
                if merged is None:
                    continue
                sign, K = merged
                if m % 2:
                    sign = -sign
                value = dp * q
                _accumulate(out, K, -value if sign > 0 else value)
    return MultivectorField(chart, out)


# ===============================
# ACTIONS
# ===============================
class GAction:
    """Infinitesimal action rho: g -> vector fields, one field per basis element."""

    def __init__(self, algebra, fields, chart=None):
        self.algebra = algebra
        self.fields = list(fields)
        if chart is None:
            if not self.fields:
                raise ValueError("an action without fields needs an explicit chart")
            chart = self.fields[0].chart
        self.chart = chart
        for X in self.fields:
            if X.chart != chart:
                raise RingMismatchError("action fields live on different charts")

    @classmethod
    def trivial(cls, algebra, chart):
        return cls(algebra, [MultivectorField.zero(chart) for _ in range(algebra.dim)], chart)

    def field(self, i):
        return self.fields[i]

    def of(self, vector):
        out = MultivectorField.zero(self.chart)
        for c, X in zip(vector, self.fields):
            if c:
                out = out + X.scale(c)
        return out

    def dual_field(self, i, S):
        """rho(e^i) with e^i = sum_j S_ij e_j."""
        return self.of(S[i])

    def extend(self, element):
        """rho on the exterior algebra of g."""
        out = MultivectorField.zero(self.chart)
        unit = MultivectorField.function(self.chart, 1)
        for key, c in element.terms.items():
            term = unit
            for i in key:
                term = term.wedge(self.fields[i])
            out = out + term.scale(c)
        return out

    def restrict(self, indices, algebra):
        return GAction(algebra, [self.fields[i] for i in indices], self.chart)


def check_action(act):
    L = act.algebra
    report = Report(f"action of {L.name}")
    count = len(act.fields) == L.dim
    report.add("field count", count, f"{len(act.fields)} fields for dimension {L.dim}")
    if not count:
        report.skip("ideal preserved", "field count mismatch")
        report.skip("bracket relations", "field count mismatch")
        return report

    bad = [L.basis_names[i] for i, X in enumerate(act.fields) if not preserves_ideal(X)]
    report.add("ideal preserved", not bad, f"rho({bad[0]}) leaves the ideal" if bad else "")

    witness = ""
    for i, j in combinations(range(L.dim), 2):
        residue = schouten(act.field(i), act.field(j)) - act.of(L.bracket_basis(i, j))
        if not residue.is_zero():
            witness = f"({L.basis_names[i]}, {L.basis_names[j]}): {residue}"
            break
    report.add("bracket relations", not witness, witness)
    return report


def _tensor(L, s=None):
    if s is not None:
        return [[qq(v) for v in row] for row in s]
    if L.form is None or determinant(L.form) == 0:
        return [[ZERO] * L.dim for _ in range(L.dim)]
    return L.tensor()


def check_quasi_poisson(chart, act, pi, s=None):
    """[pi, pi] = rho(phi) and [pi, rho(xi)] = 0, plus tangency of pi on varieties."""
    L = act.algebra
    report = Report(f"quasi-poisson {L.name} on {chart.name}")
    if chart.ring.ideal_generators:
        report.add("pi tangent", preserves_ideal(pi), "pi does not preserve the ideal")

    phi = cartan_trivector(L, _tensor(L, s)).phi
    residue = schouten(pi, pi) - act.extend(phi)
    report.add("[pi,pi] = rho(phi)", residue.is_zero(), f"[pi,pi] - rho(phi) = {residue}")

    witness = ""
    for i in range(L.dim):
        br = schouten(pi, act.field(i))
        if not br.is_zero():
            witness = f"[pi, rho({L.basis_names[i]})] = {br}"
            break
    report.add("[pi, rho(xi)] = 0", not witness, witness)
    return report


@dataclass
class CoisotropicCheck:
    report: Report
    generic: bool
    pointwise: list = field(default_factory=list)


def stabilizer_at(act, point):
    """Basis of g_x = {xi : rho(xi)(x) = 0}."""
    n = act.algebra.dim
    values = [X.value(point) for X in act.fields]
    rows = [[values[i].get((c,), ZERO) for i in range(n)] for c in range(act.chart.dim)]
    return null_space(rows, n)


def check_coisotropic_stabilizers(act, s=None, points=()):
    L = act.algebra
    S = _tensor(L, s)
    report = Report(f"coisotropic stabilizers of {L.name}")
    phi = cartan_trivector(L, S).phi
    image = act.extend(phi)
    generic = image.is_zero()
    report.add("rho(phi) = 0", generic, f"rho(phi) = {image}")

    pointwise = []
    for point in points:
        point = act.chart.check_point(point)
        stab = stabilizer_at(act, point)
        annihilator = null_space(stab, L.dim) if stab else [
            [ONE if i == j else ZERO for j in range(L.dim)] for i in range(L.dim)
        ]
        bad = None
        for lam in annihilator:
            v = [sum((S[i][j] * lam[j] for j in range(L.dim)), ZERO) for i in range(L.dim)]
            if any(v) and not (stab and span_contains(stab, v)):
                bad = v
                break
        ok = bad is None
        pointwise.append(ok)
        report.add(
            f"s#(g_x^0) in g_x at {format_point(point)}",
            ok,
            f"s# maps the annihilator to {L.format(bad)}" if bad else "",
        )
    return CoisotropicCheck(report, generic, pointwise)


# ===============================
# COTANGENT LIE ALGEBROID
# ===============================
class CotangentDifferential:
    """d(P) = [pi, P] + 1/2 sum_i rho(e^i) ^ [rho(e_i), P] on multivector fields."""

    def __init__(self, chart, action, pi, S):
        self.chart = chart
        self.action = action
        self.pi = pi
        self.S = S
        self.dual_fields = [action.dual_field(i, S) for i in range(action.algebra.dim)]
        self.report = None

    def __call__(self, P):
        out = schouten(self.pi, P)
        for i, X in enumerate(self.action.fields):
            if self.dual_fields[i].is_zero():
                continue
            br = schouten(X, P)
            if not br.is_zero():
                out = out + self.dual_fields[i].wedge(br).scale(HALF)
        return out

    def generators(self):
        """Coordinates and frame fields, with printable labels."""
        chart = self.chart
        out = [(name, MultivectorField.function(chart, chart.gen(c))) for c, name in enumerate(chart.variables)]
        out += [(f"V{k + 1}", V) for k, V in enumerate(chart.frame)]
        return out


def build_cotangent_differential(chart, act, pi, s=None):
    L = act.algebra
    S = _tensor(L, s)
    d = CotangentDifferential(chart, act, pi, S)
    report = Report(f"cotangent algebroid on {chart.name}")
    gens = d.generators()

    images = {}
    witness = ""
    for label, g in gens:
        images[label] = d(g)
        twice = d(images[label])
        if not twice.is_zero():
            witness = f"d^2({label}) = {twice}"
            break
    report.add("d^2 = 0", not witness, witness)

    witness = ""
    for i in range(L.dim):
        X = act.field(i)
        for label, g in gens:
            image = images[label] if label in images else d(g)
            residue = schouten(X, image) - d(schouten(X, g))
            if not residue.is_zero():
                witness = f"(rho({L.basis_names[i]}), {label}): {residue}"
                break
        if witness:
            break
    report.add("equivariance", not witness, witness)

    witness = ""
    c = L.structure
    for k in range(L.dim):
        lhs = d(d.dual_fields[k])
        rhs = MultivectorField.zero(chart)
        for i in range(L.dim):
            for j in range(L.dim):
                if c[i][j][k]:
                    rhs = rhs + d.dual_fields[i].wedge(d.dual_fields[j]).scale(-HALF * c[i][j][k])
        if lhs != rhs:
            witness = f"{L.basis_names[k]}: {lhs - rhs}"
            break
    report.add("mu_rho morphism", not witness, witness)
    d.report = report
    return d


class CotangentBracket:
    """Anchor a = pi# + 1/2 rho o rho* and the bracket on 1-forms."""

    def __init__(self, chart, action, pi, S):
        self.chart = chart
        self.action = action
        self.pi = pi
        self.S = S
        n = action.algebra.dim
        self.dual_fields = [action.dual_field(i, S) for i in range(n)]
        self.report = None

    def anchor(self, alpha):
        out = sharp(self.pi, alpha)
        for X, Xdual in zip(self.action.fields, self.dual_fields):
            c = alpha.pair(Xdual)
            if c:
                out = out + X.scale(c * HALF)
        return out

    @property
    def anchor_matrix(self):
        """A[a][c] = a(dx_a)^c."""
        chart = self.chart
        return [
            vector_components(self.anchor(DifferentialForm.coordinate(chart, a)))
            for a in range(chart.dim)
        ]

    def pi_pair(self, alpha, beta):
        return pi_pair(self.pi, alpha, beta)

    def bracket(self, alpha, beta):
        chart = self.chart
        out = differential(chart, self.pi_pair(alpha, beta))
        out = out + interior_derivative(sharp(self.pi, alpha), beta) - interior_derivative(sharp(self.pi, beta), alpha)
        for X, Xdual in zip(self.action.fields, self.dual_fields):
            a, b = alpha.pair(Xdual), beta.pair(Xdual)
            if a:
                out = out + lie_derivative(X, beta).scale(a * HALF)
            if b:
                out = out - lie_derivative(X, alpha).scale(b * HALF)
        return out


def lie_derivative(X, beta):
    """(L_X beta)_c = sum_a X^a d_a beta_c + beta_a d_c X^a."""
    chart = X.chart
    gens = chart.ring.poly_ring.gens
    out = {}
    for (a,), x in X.terms.items():
        for (c,), b in beta.terms.items():
            _accumulate(out, (c,), x * b.diff(gens[a]))
        b = beta.coefficient(a)
        if not b:
            continue
        for c in range(chart.dim):
            _accumulate(out, (c,), b * x.diff(gens[c]))
    return DifferentialForm(chart, out)


def interior_derivative(X, beta):
    """(i_X d beta)_c = sum_a X^a (d_a beta_c - d_c beta_a)."""
    chart = X.chart
    gens = chart.ring.poly_ring.gens
    out = {}
    for (a,), x in X.terms.items():
        for c in range(chart.dim):
            value = beta.coefficient(c).diff(gens[a]) - beta.coefficient(a).diff(gens[c])
            if value:
                _accumulate(out, (c,), x * value)
    return DifferentialForm(chart, out)


def oneform_bracket_and_anchor(chart, act, pi, s=None, differential_map=None):
    """
    Anchor and 1-form bracket of T*M, checked against d_{T*M}:
        (d x_c)(dx_a) = a(dx_a)(x_c)
        (d V)(dx_a, dx_b) = a(dx_a) V^b - a(dx_b) V^a - [dx_a, dx_b](V)
    """
    S = _tensor(act.algebra, s)
    result = CotangentBracket(chart, act, pi, S)
    d = differential_map or CotangentDifferential(chart, act, pi, S)
    report = Report(f"cotangent bracket on {chart.name}")
    n = chart.dim
    dx = [DifferentialForm.coordinate(chart, a) for a in range(n)]
    anchors = [result.anchor(dx[a]) for a in range(n)]

    witness = ""
    for c in range(n):
        image = d(MultivectorField.function(chart, chart.gen(c)))
        for a in range(n):
            if chart.ring.reduce(image.coefficient(a) - anchors[a].coefficient(c)):
                witness = f"(x = {chart.variables[c]}, dx = d{chart.variables[a]})"
                break
        if witness:
            break
    report.add("anchor matches d on functions", not witness, witness)

    witness = ""
    for k, V in enumerate(chart.frame):
        dV = d(V)
        for a, b in combinations(range(n), 2):
            lhs = contract(dV, [dx[a], dx[b]])
            rhs = (
                apply_vector(anchors[a], V.coefficient(b))
                - apply_vector(anchors[b], V.coefficient(a))
                - result.bracket(dx[a], dx[b]).pair(V)
            )
            if chart.ring.reduce(lhs - rhs):
                witness = f"(V{k + 1}, d{chart.variables[a]}, d{chart.variables[b]})"
                break
        if witness:
            break
    report.add("bracket matches d on frame", not witness, witness)
    result.report = report
    return result


@dataclass
class QuasiSymplecticCheck:
    report: Report
    generic: bool
    pointwise: list = field(default_factory=list)


def frame_anchor_matrix(chart, act, pi, s=None):
    """M[a][b] = theta^a(a(theta^b)) in the chart frame."""
    cb = CotangentBracket(chart, act, pi, _tensor(act.algebra, s))
    coframe = chart.coframe
    images = [cb.anchor(theta) for theta in coframe]
    return [[theta.pair(images[b]) for b in range(len(coframe))] for theta in coframe]


def check_quasi_symplectic(chart, act, pi, points=(), s=None):
    M = frame_anchor_matrix(chart, act, pi, s)
    size = len(M)
    report = Report(f"quasi-symplectic on {chart.name}")
    constant = all(not p or p.is_ground for row in M for p in row)

    if constant:
        det = determinant([[p.LC if p else ZERO for p in row] for row in M])
        generic = det != 0
        report.add("anchor generically invertible", generic, f"det = {det}")
    elif size <= GENERIC_DETERMINANT_MAX_RANK:
        det = polynomial_determinant(M, chart.ring)
        generic = bool(det)
        report.add("anchor generically invertible", generic, "det lies in the ideal")
    else:
        generic = None
        report.add("anchor generically invertible", None, f"frame rank {size} above {GENERIC_DETERMINANT_MAX_RANK}")

    pointwise = []
    for point in points:
        point = chart.check_point(point)
        values = [[evaluate_polynomial(p, point) if p else ZERO for p in row] for row in M]
        rank = rank_of(values, size)
        pointwise.append(rank == size)
        report.add(f"anchor invertible at {format_point(point)}", rank == size, f"rank {rank} of {size}")
    return QuasiSymplecticCheck(report, generic, pointwise)


# ===============================
# MATRIX GROUPS
# ===============================
def _matrix_leaves(L, offset=0):
    if L.matrices is not None:
        return [(L, offset)]
    if not L.components:
        raise ValueError(f"{L.name} has no matrix realization")
    out = []
    for comp in L.components:
        out += _matrix_leaves(comp, offset)
        offset += comp.dim
    return out


def _poly_matmul(A, B, zero):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            total = zero
            for k in range(m):
                a, b = A[i][k], B[k][j]
                if a and b:
                    total = total + a * b
            row.append(total)
        out.append(row)
    return out


def adjugate(rows, ring):
    """Classical adjoint of a square polynomial matrix, reduced in `ring`."""
    n = len(rows)
    if n == 1:
        return [[ring.one]]
    out = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            value = polynomial_determinant(minor, ring)
            out[i][j] = value if (i + j) % 2 == 0 else -value
    return out


class MatrixGroupChart(Chart):
    """
    Product of SL(n_b) blocks, one per matrix component of `algebra`.
    The inverse witness of each block is its adjugate, verified to be an
    inverse modulo det - 1.
    """

    def __init__(self, algebra, prefix="x", name=None):
        leaves = _matrix_leaves(algebra)
        single = len(leaves) == 1
        variables = []
        self.blocks = []
        for b, (comp, offset) in enumerate(leaves):
            mats = comp.matrices
            n = len(mats[0])
            if any(sum(qq(m[i][i]) for i in range(n)) for m in mats):
                raise ValueError(f"{comp.name}: only traceless (SL(n)) realizations are supported")
            if comp.dim != n * n - 1:
                raise ValueError(f"{comp.name} does not span sl({n})")
            tag = "" if single else f"_{b + 1}"
            names = [[f"{prefix}{i + 1}{j + 1}{tag}" for j in range(n)] for i in range(n)]
            start = len(variables)
            variables += [v for row in names for v in row]
            self.blocks.append(_Block(comp, offset, n, start))

        raw = CoordinateRing(variables)
        dets = []
        for blk in self.blocks:
            X = [[raw.gen(blk.start + i * blk.n + j) for j in range(blk.n)] for i in range(blk.n)]
            dets.append(polynomial_determinant(X, raw) - raw.one)
        label = name or f"G({algebra.name})"
        ring = CoordinateRing(variables, dets, name=label)
        super().__init__(ring, label)
        self.algebra = algebra
        self.prefix = prefix

        for blk in self.blocks:
            blk.coordinates = self._coordinate_matrix(blk)
            blk.witness = adjugate(self.matrix(blk.index(self)), ring)

        witness = ""
        for b, blk in enumerate(self.blocks):
            product = _poly_matmul(self.matrix(b), blk.witness, ring.zero)
            for i in range(blk.n):
                for j in range(blk.n):
                    if ring.reduce(product[i][j] - (ring.one if i == j else ring.zero)):
                        witness = f"block {b + 1} entry ({i + 1}, {j + 1})"
        self.witness_ok = not witness
        if witness:
            raise ValueError(f"inverse witness fails at {witness}")

    def _coordinate_matrix(self, blk):
        """Coord = (M^T M)^-1 M^T over the flattened basis matrices."""
        flat = [[qq(v) for row in m for v in row] for m in blk.algebra.matrices]
        gram = [[sum((a * b for a, b in zip(u, v)), ZERO) for v in flat] for u in flat]
        ginv = inverse_matrix(gram)
        size = len(flat[0])
        return [
            [sum((ginv[k][l] * flat[l][p] for l in range(len(flat))), ZERO) for p in range(size)]
            for k in range(len(flat))
        ]

    def block_of(self, k):
        for b, blk in enumerate(self.blocks):
            if blk.offset <= k < blk.offset + blk.algebra.dim:
                return b, k - blk.offset
        raise IndexError(k)

    def matrix(self, b):
        blk = self.blocks[b]
        return [[self.gen(blk.start + i * blk.n + j) for j in range(blk.n)] for i in range(blk.n)]

    def inverse(self, b):
        return self.blocks[b].witness

    def variable_index(self, b, i, j):
        blk = self.blocks[b]
        return blk.start + i * blk.n + j

    def basis_matrix(self, k):
        b, local = self.block_of(k)
        return b, [[qq(v) for v in row] for row in self.blocks[b].algebra.matrices[local]]

    def _algebra_matrix(self, b, xi):
        blk = self.blocks[b]
        out = [[ZERO] * blk.n for _ in range(blk.n)]
        for local, m in enumerate(blk.algebra.matrices):
            c = qq(xi[blk.offset + local])
            if not c:
                continue
            for i in range(blk.n):
                for j in range(blk.n):
                    out[i][j] += c * qq(m[i][j])
        return out

    def _translation_field(self, xi, left):
        ring = self.ring
        terms = {}
        for b, blk in enumerate(self.blocks):
            Xi = self._algebra_matrix(b, xi)
            if not any(any(r) for r in Xi):
                continue
            X = self.matrix(b)
            Xi = [[ring.constant(v) for v in row] for row in Xi]
            product = _poly_matmul(X, Xi, ring.zero) if left else _poly_matmul(Xi, X, ring.zero)
            for i in range(blk.n):
                for j in range(blk.n):
                    _accumulate(terms, (self.variable_index(b, i, j),), product[i][j])
        return MultivectorField(self, terms)

    def left_field(self, xi):
        """xi^L: x -> x xi on each block."""
        return self._translation_field(xi, left=True)

    def right_field(self, xi):
        """xi^R: x -> xi x on each block."""
        return self._translation_field(xi, left=False)

    def b_field(self, xi):
        return (self.left_field(xi) + self.right_field(xi)).scale(HALF)

    def basis_left(self, k):
        return self.left_field([ONE if i == k else ZERO for i in range(self.algebra.dim)])

    def basis_right(self, k):
        return self.right_field([ONE if i == k else ZERO for i in range(self.algebra.dim)])

    def _theta(self, k, left):
        b, local = self.block_of(k)
        blk = self.blocks[b]
        W = blk.witness
        coord = blk.coordinates[local]
        n = blk.n
        terms = {}
        for i in range(n):
            for j in range(n):
                if left:
                    # (W E_ij)_pq = W_pi delta_qj
                    value = sum((W[p][i] * coord[p * n + j] for p in range(n) if coord[p * n + j]), self.ring.zero)
                else:
                    # (E_ij W)_pq = delta_pi W_jq
                    value = sum((W[j][q] * coord[i * n + q] for q in range(n) if coord[i * n + q]), self.ring.zero)
                _accumulate(terms, (self.variable_index(b, i, j),), value)
        return DifferentialForm(self, terms)

    def theta_left(self, k):
        return self._theta(k, left=True)

    def theta_right(self, k):
        return self._theta(k, left=False)

    def pair_theta(self, xi, left=True):
        """<xi, theta^L> = sum_k (G xi)_k theta^k."""
        G = self.algebra.form
        if G is None:
            raise ValueError(f"{self.algebra.name} carries no invariant form")
        n = self.algebra.dim
        out = DifferentialForm.zero(self)
        for k in range(n):
            c = sum((qq(G[k][j]) * qq(xi[j]) for j in range(n)), ZERO)
            if c:
                out = out + (self.theta_left(k) if left else self.theta_right(k)).scale(c)
        return out

    @property
    def frame(self):
        if self._frame is None:
            self._frame = [self.basis_left(k) for k in range(self.algebra.dim)]
        return self._frame

    @property
    def coframe(self):
        if self._coframe is None:
            self._coframe = [self.theta_left(k) for k in range(self.algebra.dim)]
        return self._coframe

    def identity_point(self):
        point = [ZERO] * self.dim
        for b, blk in enumerate(self.blocks):
            for i in range(blk.n):
                point[self.variable_index(b, i, i)] = ONE
        return point


class _Block:
    def __init__(self, algebra, offset, n, start):
        self.algebra = algebra
        self.offset = offset
        self.n = n
        self.start = start
        self.coordinates = None
        self.witness = None

    def index(self, chart):
        return chart.blocks.index(self)


def special_linear_group(algebra=None, prefix="x"):
    return MatrixGroupChart(algebra or sl2_algebra(), prefix=prefix)


def conjugation_action(G):
    """rho(xi) = xi^L - xi^R: the infinitesimal conjugation."""
    fields = [G.basis_left(k) - G.basis_right(k) for k in range(G.algebra.dim)]
    return GAction(G.algebra, fields, G)


def double_action(G, negate_second=True):
    """rho(xi, eta) = -xi^R + eta^L, generating x -> g1 x g2^-1."""
    if len(G.blocks) != 1:
        raise ValueError("the double action needs a single-block group")
    g = G.algebra
    d = double(g, negate_second=negate_second)
    fields = [-G.basis_right(k) for k in range(g.dim)] + [G.basis_left(k) for k in range(g.dim)]
    return GAction(d, fields, G)


def conjugation_structure(G, s=None):
    """pi_G = -1/2 sum_i (e^i)^L ^ (e_i)^R and the conjugation action."""
    L = G.algebra
    S = _tensor(L, s)
    pi = MultivectorField.zero(G)
    for i in range(L.dim):
        upper = G.left_field(S[i])
        if upper.is_zero():
            continue
        pi = pi + upper.wedge(G.basis_right(i)).scale(-HALF)
    return conjugation_action(G), pi


@dataclass
class GroupFields:
    left: MultivectorField
    right: MultivectorField
    b: MultivectorField
    theta_left: DifferentialForm
    theta_right: DifferentialForm
    report: Report = None


def matrix_group_fields(G, xi):
    xi = [qq(v) for v in xi]
    left, right = G.left_field(xi), G.right_field(xi)
    report = Report(f"invariant fields on {G.name}")
    report.add("left field preserves ideal", preserves_ideal(left), "xi^L leaves the ideal")
    report.add("right field preserves ideal", preserves_ideal(right), "xi^R leaves the ideal")
    return GroupFields(
        left,
        right,
        (left + right).scale(HALF),
        G.pair_theta(xi, left=True),
        G.pair_theta(xi, left=False),
        report,
    )


# ===============================
# MAPS AND HAMILTONIAN SPACES
# ===============================
class PolyMap:
    """Polynomial map source -> target given by pullbacks of target coordinates."""

    def __init__(self, source, target, components, name=""):
        if len(components) != target.dim:
            raise ValueError(f"{len(components)} components for a target of dimension {target.dim}")
        self.source = source
        self.target = target
        self.components = [source.poly(c) for c in components]
        self.name = name

    def pullback(self, p):
        return substitute(self.target.ring.coerce(p), self.components, self.source.ring)

    def pullback_form(self, alpha):
        out = DifferentialForm.zero(self.source)
        for (c,), a in alpha.terms.items():
            out = out + differential(self.source, self.components[c]).scale(self.pullback(a))
        return out

    def then(self, other):
        """other o self."""
        return PolyMap(self.source, other.target, [self.pullback(c) for c in other.components])

    def ideal_witness(self):
        for g in self.target.ring.ideal_generators:
            image = self.pullback(g)
            if image:
                return f"{format_polynomial(g)} pulls back to {format_polynomial(image)}"
        return ""

    def block_matrices(self):
        """Component matrices per block of a matrix-group target."""
        T = self.target
        return [
            [[self.components[T.variable_index(b, i, j)] for j in range(blk.n)] for i in range(blk.n)]
            for b, blk in enumerate(T.blocks)
        ]

    def __repr__(self):
        return f"PolyMap({self.source.name} -> {self.target.name})"


def identity_map(chart):
    return PolyMap(chart, chart, [chart.gen(c) for c in range(chart.dim)], name="id")


@dataclass
class HamiltonianSpace:
    chart: Chart
    action: GAction
    pi: MultivectorField
    moment: PolyMap = None
    group_action: object = None     # (g_blocks, g_inverse_blocks, coords) -> coords
    name: str = ""
    s: list = None

    @property
    def tensor(self):
        return _tensor(self.action.algebra, self.s)


def conjugation_group_action(G):
    def act(g_blocks, g_inverse, coords):
        out = list(coords)
        for b, blk in enumerate(G.blocks):
            X = [[coords[G.variable_index(b, i, j)] for j in range(blk.n)] for i in range(blk.n)]
            zero = coords[0] - coords[0]
            Y = _poly_matmul(_poly_matmul(g_blocks[b], X, zero), g_inverse[b], zero)
            for i in range(blk.n):
                for j in range(blk.n):
                    out[G.variable_index(b, i, j)] = Y[i][j]
        return out

    return act


def conjugation_space(G, s=None, name=None):
    """G with conjugation, pi_G and moment map the identity."""
    act, pi = conjugation_structure(G, s)
    return HamiltonianSpace(G, act, pi, identity_map(G), conjugation_group_action(G), name or G.name, s)


def product_chart(first, second):
    """(chart, positions of first, positions of second); names suffixed on clashes."""
    v1, v2 = first.variables, second.variables
    if set(v1) & set(v2):
        v1 = tuple(f"{v}_1" for v in v1)
        v2 = tuple(f"{v}_2" for v in v2)
    variables = list(v1) + list(v2)
    raw = CoordinateRing(variables)
    p1 = list(range(len(v1)))
    p2 = [len(v1) + i for i in range(len(v2))]
    ideal = [embed_polynomial(g, raw, p1) for g in first.ring.ideal_generators]
    ideal += [embed_polynomial(g, raw, p2) for g in second.ring.ideal_generators]
    name = f"{first.name}x{second.name}"
    chart = Chart(CoordinateRing(variables, ideal, name=name), name)
    chart._frame = [embed_field(V, chart, p1) for V in first.frame] + [
        embed_field(V, chart, p2) for V in second.frame
    ]
    chart._coframe = [embed_field(t, chart, p1) for t in first.coframe] + [
        embed_field(t, chart, p2) for t in second.coframe
    ]
    return chart, p1, p2


def product_spaces(M1, M2):
    """M1 x M2 as a g1 (+) g2 quasi-Poisson manifold."""
    chart, p1, p2 = product_chart(M1.chart, M2.chart)
    L = direct_sum(M1.action.algebra, M2.action.algebra, name=f"{M1.action.algebra.name}+{M2.action.algebra.name}")
    fields = [embed_field(X, chart, p1) for X in M1.action.fields]
    fields += [embed_field(X, chart, p2) for X in M2.action.fields]
    pi = embed_field(M1.pi, chart, p1) + embed_field(M2.pi, chart, p2)
    return HamiltonianSpace(chart, GAction(L, fields, chart), pi, name=f"{M1.name}x{M2.name}")


def check_moment_map(M, s=None):
    """
    pi#(d Phi_c) = sum_k Phi*(b(e_k)^c) rho(e^k) for every target coordinate,
    and rho_M(xi)(Phi* y) = Phi*(rho_G(xi) y).
    """
    chart, act, pi, Phi = M.chart, M.action, M.pi, M.moment
    T = Phi.target
    L = act.algebra
    if T.algebra.dim != L.dim:
        raise ValueError(f"moment map target {T.name} does not match {L.name}")
    S = _tensor(L, s if s is not None else M.s)
    report = Report(f"moment map {M.name or chart.name}")
    ideal = Phi.ideal_witness()
    report.add("map respects ideals", not ideal, ideal)

    b_fields = [T.b_field([ONE if i == k else ZERO for i in range(L.dim)]) for k in range(L.dim)]
    duals = [act.dual_field(k, S) for k in range(L.dim)]
    witness = ""
    for c, name in enumerate(T.variables):
        lhs = sharp(pi, differential(chart, Phi.components[c]))
        rhs = MultivectorField.zero(chart)
        for k in range(L.dim):
            coeff = b_fields[k].coefficient(c)
            if coeff:
                rhs = rhs + duals[k].scale(Phi.pullback(coeff))
        if lhs != rhs:
            witness = f"d{name}: {lhs - rhs}"
            break
    report.add("moment identity", not witness, witness)

    rho_T = conjugation_action(T)
    witness = ""
    for i in range(L.dim):
        for c, name in enumerate(T.variables):
            lhs = apply_vector(act.field(i), Phi.components[c])
            rhs = Phi.pullback(rho_T.field(i).coefficient(c))
            if chart.ring.reduce(lhs - rhs):
                witness = f"({L.basis_names[i]}, {name})"
                break
        if witness:
            break
    report.add("equivariance", not witness, witness)
    return report


def i_forms(M):
    """i(xi) = Phi* <xi, theta^L> for every basis element."""
    T = M.moment.target
    L = M.action.algebra
    return [
        M.moment.pullback_form(T.pair_theta([ONE if i == k else ZERO for i in range(L.dim)]))
        for k in range(L.dim)
    ]


def _forms_agree_on_frame(chart, alpha, beta):
    for V in chart.frame:
        if chart.ring.reduce(alpha.pair(V) - beta.pair(V)):
            return False
    return True


@dataclass
class IMapCheck:
    report: Report
    forms: list


def i_map_and_check(M, points=(), s=None):
    chart, act = M.chart, M.action
    L = act.algebra
    S = _tensor(L, s if s is not None else M.s)
    cb = CotangentBracket(chart, act, M.pi, S)
    forms = i_forms(M)
    report = Report(f"i-map {M.name or chart.name}")

    witness = ""
    for k, alpha in enumerate(forms):
        residue = cb.anchor(alpha) - act.field(k)
        if not residue.is_zero():
            witness = f"{L.basis_names[k]}: {residue}"
            break
    report.add("a o i = rho", not witness, witness)

    witness = ""
    for i, j in combinations(range(L.dim), 2):
        lhs = cb.bracket(forms[i], forms[j])
        rhs = DifferentialForm.zero(chart)
        for k, c in enumerate(L.structure[i][j]):
            if c:
                rhs = rhs + forms[k].scale(c)
        if not _forms_agree_on_frame(chart, lhs, rhs):
            witness = f"([i({L.basis_names[i]}), i({L.basis_names[j]})])"
            break
    report.add("i morphism", not witness, witness)

    n = chart.dim
    dx = [DifferentialForm.coordinate(chart, a) for a in range(n)]
    for point in points:
        point = chart.check_point(point)

        def at(X):
            v = X.value(point)
            return [v.get((c,), ZERO) for c in range(n)]

        orbit = [at(X) for X in act.fields]
        poisson = [at(sharp(M.pi, a)) for a in dx]
        anchored = [at(cb.anchor(a)) for a in dx]
        left = rank_of(orbit + poisson, n)
        right = rank_of(anchored, n)
        both = rank_of(orbit + poisson + anchored, n)
        ok = left == right == both
        report.add(
            f"subspace identity at {format_point(point)}",
            ok,
            f"rank(rho + pi#) = {left}, rank(a) = {right}, rank(sum) = {both}",
        )
    return IMapCheck(report, forms)


# ===============================
# FUSION
# ===============================
@dataclass
class FusionResult:
    pi: MultivectorField
    action: GAction
    psi: ExteriorElement


def _double_parts(L):
    if len(L.components) != 2:
        raise ValueError(f"{L.name} is not a double g + g")
    g1, g2 = L.components
    if g1.structure != g2.structure or g1.form != g2.form:
        raise ValueError(f"{L.name} is not a double g + g with equal forms")
    return g1, g2


def fusion_element(L):
    """psi = 1/2 sum_i (0, e_i) ^ (e^i, 0) in the exterior algebra of g + g."""
    g1, _ = _double_parts(L)
    n = g1.dim
    S = g1.tensor()
    terms = {}
    for i in range(n):
        for j in range(n):
            if S[i][j]:
                terms[(j, n + i)] = terms.get((j, n + i), ZERO) - HALF * S[i][j]
    return ExteriorElement(L, terms)


def fuse(chart, action, pi, include_psi=True):
    """(rho restricted to the diagonal, pi + rho(psi))."""
    L = action.algebra
    g1, _ = _double_parts(L)
    n = g1.dim
    psi = fusion_element(L)
    diag = GAction(g1, [action.field(i) + action.field(n + i) for i in range(n)], chart)
    fused = pi + action.extend(psi) if include_psi else pi
    return FusionResult(fused, diag, psi)


def fuse_spaces(M1, M2, include_psi=True):
    """M1 (*) M2 with moment map Phi1 Phi2."""
    P = product_spaces(M1, M2)
    result = fuse(P.chart, P.action, P.pi, include_psi)
    moment = None
    if M1.moment is not None and M2.moment is not None:
        T = M1.moment.target
        if M2.moment.target != T:
            raise ValueError("fusion needs moment maps into the same group")
        _, p1, p2 = product_chart(M1.chart, M2.chart)
        ring = P.chart.ring
        first = [embed_polynomial(c, ring, p1) for c in M1.moment.components]
        second = [embed_polynomial(c, ring, p2) for c in M2.moment.components]
        components = [None] * T.dim
        for b, blk in enumerate(T.blocks):
            A = [[first[T.variable_index(b, i, j)] for j in range(blk.n)] for i in range(blk.n)]
            B = [[second[T.variable_index(b, i, j)] for j in range(blk.n)] for i in range(blk.n)]
            AB = _poly_matmul(A, B, ring.zero)
            for i in range(blk.n):
                for j in range(blk.n):
                    components[T.variable_index(b, i, j)] = AB[i][j]
        moment = PolyMap(P.chart, T, components)
    return HamiltonianSpace(
        P.chart, result.action, result.pi, moment, diagonal_group_action(M1, M2), f"{M1.name}*{M2.name}", M1.s
    )


def diagonal_group_action(M1, M2):
    """g . (x1, x2) = (g . x1, g . x2) on the product chart coordinates."""
    if M1.group_action is None or M2.group_action is None:
        return None
    n1 = M1.chart.dim

    def act(g_blocks, g_inverse, coords):
        coords = list(coords)
        first = M1.group_action(g_blocks, g_inverse, coords[:n1])
        second = M2.group_action(g_blocks, g_inverse, coords[n1:])
        return list(first) + list(second)

    return act


def fuse_space(M, group_action=None, prefix="x", include_psi=True):
    """Fuse a g + g space into a g space; the moment map becomes Phi_1 Phi_2."""
    result = fuse(M.chart, M.action, M.pi, include_psi)
    g = result.action.algebra
    moment = None
    if M.moment is not None:
        blocks = M.moment.block_matrices()
        if len(blocks) != 2:
            raise ValueError("fusing a space needs a moment map into a two-block group")
        target = MatrixGroupChart(g, prefix=prefix)
        product = _poly_matmul(blocks[0], blocks[1], M.chart.ring.zero)
        moment = PolyMap(M.chart, target, [v for row in product for v in row])
    return HamiltonianSpace(M.chart, result.action, result.pi, moment, group_action, f"fused {M.name}", None)


def braiding_map(M1, M2):
    """(x1, x2) -> (Phi1(x1) . x2, x1) from M1 (*) M2 to M2 (*) M1."""
    if M2.group_action is None or M1.moment is None:
        raise ValueError("braiding needs a moment map on the first factor and a group action on the second")
    source, p1, p2 = product_chart(M1.chart, M2.chart)
    target, _, _ = product_chart(M2.chart, M1.chart)
    ring = source.ring
    g_blocks = [
        [[embed_polynomial(v, ring, p1) for v in row] for row in block]
        for block in M1.moment.block_matrices()
    ]
    g_inverse = [adjugate(block, ring) for block in g_blocks]
    x1 = [source.gen(i) for i in p1]
    x2 = [source.gen(i) for i in p2]
    moved = M2.group_action(g_blocks, g_inverse, x2)
    return PolyMap(source, target, list(moved) + x1, name="braiding")


def twist_by_r_matrix(chart, act, pi, u, s=None):
    """pi' = pi + rho(u) for an r-matrix u; returns (pi', report)."""
    L = act.algebra
    r = check_r_matrix(L, u, s)
    if not r.is_r_matrix:
        raise ValueError(f"u is not an r-matrix: {r.report.outcomes[0].witness}")
    twisted = pi + act.extend(u)
    report = Report(f"twist on {chart.name}")
    square = schouten(twisted, twisted)
    report.add("[pi',pi'] = 0", square.is_zero(), f"[pi',pi'] = {square}")
    witness = ""
    for i, name in enumerate(L.basis_names):
        residue = schouten(twisted, act.field(i)) - act.extend(r.cobracket[name])
        if not residue.is_zero():
            witness = f"{name}: {residue}"
            break
    report.add("[pi', rho(xi)] = rho(delta xi)", not witness, witness)
    return twisted, report


def check_qp_morphism(f, source, target, anti=False):
    """
    source/target are (action, pi) pairs. Checks rho2 = f_* rho1 and
    pi2 = f_* pi1 (or -f_* pi1 with anti) on target coordinates.
    """
    act1, pi1 = source
    act2, pi2 = target
    chart = f.source
    ring = chart.ring
    report = Report(f"{'anti-' if anti else ''}quasi-poisson morphism {f.name or ''}".strip())
    ideal = f.ideal_witness()
    report.add("map respects ideals", not ideal, ideal)

    if act1.algebra.dim != act2.algebra.dim:
        raise ValueError("actions of different algebras")
    names = f.target.variables
    witness = ""
    for i in range(act1.algebra.dim):
        for a, name in enumerate(names):
            lhs = apply_vector(act1.field(i), f.components[a])
            rhs = f.pullback(act2.field(i).coefficient(a))
            if ring.reduce(lhs - rhs):
                witness = f"({act1.algebra.basis_names[i]}, {name})"
                break
        if witness:
            break
    report.add("rho related", not witness, witness)

    dfs = [differential(chart, c) for c in f.components]
    witness = ""
    for a, b in combinations(range(len(names)), 2):
        lhs = pi_pair(pi1, dfs[a], dfs[b])
        rhs = f.pullback(pi2.coefficient(a, b))
        residue = ring.reduce(lhs + rhs if anti else lhs - rhs)
        if residue:
            witness = f"({names[a]}, {names[b]}): {format_polynomial(residue)}"
            break
    report.add("pi anti-related" if anti else "pi related", not witness, witness)
    return report


def coisotropy_witness(chart, generators, pi, parametrization=None):
    """
    "" when pi(df, dg) lies in <generators> + I for all generator pairs,
    else the first offending pair. With a parametrization of the
    subvariety the test becomes vanishing of the pulled-back values.
    """
    gens = [chart.poly(g) if isinstance(g, str) else chart.ring.coerce(g) for g in generators]
    dfs = [differential(chart, g) for g in gens]
    if parametrization is not None:
        if parametrization.target != chart:
            raise RingMismatchError("parametrization does not land in the chart")
        for g in gens:
            if parametrization.pullback(g):
                raise ValueError(f"{format_polynomial(g)} does not vanish on the parametrization")
        reduce = parametrization.pullback
    else:
        reduce = chart.ring.with_ideal(gens).reduce
    for a, b in combinations(range(len(gens)), 2):
        value = reduce(pi_pair(pi, dfs[a], dfs[b]))
        if value:
            return f"pi(d{a + 1}, d{b + 1}) = {format_polynomial(value)}"
    return ""


def check_coisotropic_subvariety(chart, generators, pi, parametrization=None):
    return not coisotropy_witness(chart, generators, pi, parametrization)


# ===============================
# BIALGEBROIDS
# ===============================
class LieAlgebroidFrame:
    """
    Free Lie algebroid with frame e_a: structure functions c^k_ij and
    anchor fields. Sections of the exterior algebra are graded elements
    over the chart ring with odd generators eps_<name>.
    """

    def __init__(self, chart, structure, anchor, names=None):
        self.chart = chart
        self.rank = len(anchor)
        self.names = list(names or [f"e{a + 1}" for a in range(self.rank)])
        self.structure = {
            key: {k: chart.ring.reduce(chart.ring.coerce(c)) for k, c in terms.items()}
            for key, terms in structure.items()
        }
        self.anchor = list(anchor)
        self.presentation = GradedPresentation(
            [f"eps_{n}" for n in self.names], [1] * self.rank, chart.ring, name=f"A({chart.name})"
        )
        P = self.presentation
        self.bracket = GradedBracket(P)
        for (i, j), terms in self.structure.items():
            value = P.zero()
            for k, c in terms.items():
                value = value + P.generator(P.names[k]).scale(c)
            self.bracket.set(P.names[i], P.names[j], value)
        for a, X in enumerate(self.anchor):
            for v, var in enumerate(chart.variables):
                c = X.coefficient(v)
                if c:
                    self.bracket.set(P.names[a], var, P.scalar(c))

    def eps(self, a):
        return self.presentation.generator(self.presentation.names[a])

    def section(self, coefficients):
        P = self.presentation
        out = P.zero()
        for a, c in enumerate(coefficients):
            if c:
                out = out + self.eps(a).scale(c)
        return out

    def structure_vector(self, i, j):
        terms = self.structure.get((i, j))
        if terms is not None:
            return terms
        terms = self.structure.get((j, i), {})
        return {k: -c for k, c in terms.items()}

    def generator_names(self):
        return list(self.chart.variables) + list(self.presentation.names)


def check_algebroid_frame(F):
    report = Report(f"lie algebroid {F.presentation.name}")
    P = F.presentation
    witness = ""
    for i, j, k in combinations(range(F.rank), 3):
        x, y, z = F.eps(i), F.eps(j), F.eps(k)
        total = F.bracket(x, F.bracket(y, z)) + F.bracket(y, F.bracket(z, x)) + F.bracket(z, F.bracket(x, y))
        if not total.is_zero():
            witness = f"({P.names[i]}, {P.names[j]}, {P.names[k]}): {total}"
            break
    report.add("frame jacobi", not witness, witness)

    witness = ""
    for i, j in combinations(range(F.rank), 2):
        lhs = schouten(F.anchor[i], F.anchor[j])
        rhs = MultivectorField.zero(F.chart)
        for k, c in F.structure_vector(i, j).items():
            rhs = rhs + F.anchor[k].scale(c)
        if lhs != rhs:
            witness = f"({F.names[i]}, {F.names[j]}): {lhs - rhs}"
            break
    report.add("anchor morphism", not witness, witness)
    return report


@dataclass
class QPBialgebroidData:
    algebroid: LieAlgebroidFrame
    algebra: LieAlgebraData
    rho_to_A: list              # rho_to_A[i][a]: frame coefficient of rho(e_i)
    D_rules: dict               # generator name -> graded element of degree +1
    s: list = None

    def rho(self, i):
        return self.algebroid.section(self.rho_to_A[i])

    def rho_of(self, vector):
        P = self.algebroid.presentation
        out = P.zero()
        for i, c in enumerate(vector):
            if c:
                out = out + self.rho(i).scale(c)
        return out

    def D(self, x):
        return apply_derivation(self.D_rules, 1, x)

    @property
    def tensor(self):
        return _tensor(self.algebra, self.s)


def _rho_phi(B):
    phi = cartan_trivector(B.algebra, B.tensor).phi
    P = B.algebroid.presentation
    out = P.zero()
    for (i, j, k), c in phi.terms.items():
        out = out + graded_multiply(graded_multiply(B.rho(i), B.rho(j)), B.rho(k)).scale(c)
    return out


def check_qp_bialgebroid(B):
    F = B.algebroid
    P = F.presentation
    L = B.algebra
    report = Report(f"quasi-poisson bialgebroid {P.name}")
    report.extend(check_algebroid_frame(F))

    witness = ""
    for i, j in combinations(range(L.dim), 2):
        lhs = F.bracket(B.rho(i), B.rho(j))
        rhs = B.rho_of(L.bracket_basis(i, j))
        if lhs != rhs:
            witness = f"({L.basis_names[i]}, {L.basis_names[j]}): {lhs - rhs}"
            break
    report.add("rho morphism", not witness, witness)

    names = F.generator_names()
    gens = {n: P.generator(n) for n in names}
    witness = ""
    for a in names:
        for b in names:
            x, y = gens[a], gens[b]
            lhs = B.D(F.bracket(x, y))
            sign = -1 if (P.degree_of(a) - 1) % 2 else 1
            rhs = F.bracket(B.D(x), y) + F.bracket(x, B.D(y)).scale(sign)
            if lhs != rhs:
                witness = f"({a}, {b}): {lhs - rhs}"
                break
        if witness:
            break
    report.add("D derivation of the bracket", not witness, witness)

    witness = ""
    for i, name in enumerate(L.basis_names):
        image = B.D(B.rho(i))
        if not image.is_zero():
            witness = f"D rho({name}) = {image}"
            break
    report.add("D rho = 0", not witness, witness)

    rho_phi = _rho_phi(B)
    witness = ""
    for n in names:
        lhs = B.D(B.D(gens[n]))
        rhs = F.bracket(rho_phi, gens[n]).scale(HALF)
        if lhs != rhs:
            witness = f"{n}: {lhs - rhs}"
            break
    report.add("D^2 = 1/2 [rho(phi), .]", not witness, witness)
    return report


@dataclass
class DualDifferential:
    rules: dict
    pi_D: MultivectorField
    action: GAction
    report: Report

    def __call__(self, x):
        return apply_derivation(self.rules, 1, x)


def dual_differential_and_induced_bivector(B):
    """
    d_{A*} = D + 1/2 sum rho(e^i) [rho(e_i), .], the induced bivector
    pi_D^{uv} = -{D x_u, x_v} and the induced action a o rho.
    """
    F = B.algebroid
    P = F.presentation
    L = B.algebra
    chart = F.chart
    S = B.tensor
    report = Report(f"dual differential of {P.name}")

    rho = [B.rho(i) for i in range(L.dim)]
    rho_dual = [B.rho_of(S[i]) for i in range(L.dim)]
    names = F.generator_names()
    rules = {}
    for n in names:
        g = P.generator(n)
        value = B.D(g)
        for i in range(L.dim):
            if rho_dual[i].is_zero():
                continue
            value = value + graded_multiply(rho_dual[i], F.bracket(rho[i], g)).scale(HALF)
        rules[n] = value

    witness = ""
    for n in names:
        twice = apply_derivation(rules, 1, rules[n])
        if not twice.is_zero():
            witness = f"d^2({n}) = {twice}"
            break
    report.add("d_A* squared = 0", not witness, witness)

    witness = ""
    c = L.structure
    for k in range(L.dim):
        lhs = apply_derivation(rules, 1, rho_dual[k])
        rhs = P.zero()
        for i in range(L.dim):
            for j in range(L.dim):
                if c[i][j][k]:
                    rhs = rhs + graded_multiply(rho_dual[i], rho_dual[j]).scale(-HALF * c[i][j][k])
        if lhs != rhs:
            witness = f"{L.basis_names[k]}: {lhs - rhs}"
            break
    report.add("mu_rho morphism", not witness, witness)

    terms = {}
    variables = chart.variables
    for u, v in combinations(range(chart.dim), 2):
        value = F.bracket(B.D(P.generator(variables[u])), P.generator(variables[v]))
        _accumulate(terms, (u, v), -value.coefficient(()))
    pi_D = MultivectorField(chart, terms)

    fields = []
    for i in range(L.dim):
        X = MultivectorField.zero(chart)
        for a, coeff in enumerate(B.rho_to_A[i]):
            if coeff:
                X = X + F.anchor[a].scale(coeff)
        fields.append(X)
    action = GAction(L, fields, chart)
    report.extend(check_quasi_poisson(chart, action, pi_D, S), prefix="induced ")
    return DualDifferential(rules, pi_D, action, report)


def bialgebra_over_point(L, s=None):
    """A = g over a point with rho = id and D = 0."""
    chart = Chart.point()
    n = L.dim
    structure = {
        (i, j): {k: c for k, c in enumerate(L.structure[i][j]) if c}
        for i in range(n)
        for j in range(n)
        if any(L.structure[i][j])
    }
    F = LieAlgebroidFrame(chart, structure, [MultivectorField.zero(chart) for _ in range(n)], L.basis_names)
    P = F.presentation
    rules = {name: P.zero() for name in P.names}
    rho = [[chart.ring.one if a == i else chart.ring.zero for a in range(n)] for i in range(n)]
    return QPBialgebroidData(F, L, rho, rules, s)


class TangentBialgebroid:
    """(TM, rho, [pi, .]) written in the chart frame V with coframe theta."""

    def __init__(self, chart, act, pi, s=None):
        self.chart = chart
        self.frame = chart.frame
        self.coframe = chart.coframe
        self.pi = pi
        ring = chart.ring
        r = len(self.frame)
        structure = {}
        for i, j in combinations(range(r), 2):
            br = schouten(self.frame[i], self.frame[j])
            terms = {k: self.coframe[k].pair(br) for k in range(r)}
            terms = {k: c for k, c in terms.items() if c}
            if terms:
                structure[(i, j)] = terms
        names = [f"v{a + 1}" for a in range(r)]
        F = LieAlgebroidFrame(chart, structure, self.frame, names)
        P = F.presentation
        rho = [[theta.pair(X) for theta in self.coframe] for X in act.fields]
        rules = {}
        for v, var in enumerate(chart.variables):
            image = schouten(pi, MultivectorField.function(chart, chart.gen(v)))
            rules[var] = self.from_multivector(image, P)
        for a, V in enumerate(self.frame):
            rules[P.names[a]] = self.from_multivector(schouten(pi, V), P)
        self.data = QPBialgebroidData(F, act.algebra, rho, rules, s)
        self.ring = ring

    def from_multivector(self, X, presentation=None):
        P = presentation or self.data.algebroid.presentation
        out = P.zero()
        degrees = {len(k) for k in X.terms}
        for k in degrees:
            part = X.component(k)
            for I in combinations(range(len(self.coframe)), k):
                c = contract(part, [self.coframe[i] for i in I])
                if c:
                    out = out + P.word(I, c)
        return out

    def to_multivector(self, x):
        chart = self.chart
        out = MultivectorField.zero(chart)
        unit = MultivectorField.function(chart, 1)
        for word, c in x.terms.items():
            term = unit
            for a in word:
                term = term.wedge(self.frame[a])
            out = out + term.scale(c)
        return out


def tangent_bialgebroid(chart, act, pi, s=None):
    return TangentBialgebroid(chart, act, pi, s)


def check_dual_matches_cotangent(tb, dual, cotangent):
    """d_{A*} of the tangent bialgebroid against d_{T*M} on every generator."""
    P = tb.data.algebroid.presentation
    report = Report("d_A* against d_T*M")
    witness = ""
    for name in tb.data.algebroid.generator_names():
        g = P.generator(name)
        expected = tb.from_multivector(cotangent(tb.to_multivector(g)))
        if dual.rules[name] != expected:
            witness = f"{name}: {dual.rules[name] - expected}"
            break
    report.add("d_A* = d_T*M", not witness, witness)
    return report


def fusion_algebroid_isomorphism(M1, M2, include_correction=True):
    """
    d_fus = d1 + d2 + sum rho2(e^i) ^ [rho1(e_i), .] on generators, and
    J*(d_fus x) = (d1 + d2)(J* x) with
    J*(d_c) = d_c - sum_i i1(e^i)_c rho2(e_i).
    """
    fused = fuse_spaces(M1, M2)
    chart = fused.chart
    _, p1, p2 = product_chart(M1.chart, M2.chart)
    g = M1.action.algebra
    n = g.dim
    S = _tensor(g, M1.s)
    rho1 = GAction(g, [embed_field(X, chart, p1) for X in M1.action.fields], chart)
    rho2 = GAction(g, [embed_field(X, chart, p2) for X in M2.action.fields], chart)
    d_fus = CotangentDifferential(chart, fused.action, fused.pi, S)
    d1 = CotangentDifferential(chart, rho1, embed_field(M1.pi, chart, p1), S)
    d2 = CotangentDifferential(chart, rho2, embed_field(M2.pi, chart, p2), S)
    rho2_dual = [rho2.dual_field(i, S) for i in range(n)]

    def cross(P):
        out = MultivectorField.zero(chart)
        for i in range(n):
            if rho2_dual[i].is_zero():
                continue
            br = schouten(rho1.field(i), P)
            if not br.is_zero():
                out = out + rho2_dual[i].wedge(br)
        return out

    report = Report(f"fusion algebroid {M1.name}*{M2.name}")
    gens = d_fus.generators()
    witness = ""
    for label, x in gens:
        residue = d_fus(x) - d1(x) - d2(x) - cross(x)
        if not residue.is_zero():
            witness = f"{label}: {residue}"
            break
    report.add("fused differential identity", not witness, witness)

    forms = [embed_field(a, chart, p1) for a in i_forms(M1)]
    dual_forms = []
    for i in range(n):
        alpha = DifferentialForm.zero(chart)
        for j in range(n):
            if S[i][j]:
                alpha = alpha + forms[j].scale(S[i][j])
        dual_forms.append(alpha)

    images = []
    for c in range(chart.dim):
        X = MultivectorField.coordinate(chart, c)
        if include_correction:
            for i in range(n):
                coeff = dual_forms[i].coefficient(c)
                if coeff:
                    X = X - rho2.field(i).scale(coeff)
        images.append(X)

    def j_star(P):
        out = MultivectorField.zero(chart)
        unit = MultivectorField.function(chart, 1)
        for key, c in P.terms.items():
            term = unit
            for v in key:
                term = term.wedge(images[v])
            out = out + term.scale(c)
        return out

    witness = ""
    for label, x in gens:
        lhs = j_star(d_fus(x))
        jx = j_star(x)
        rhs = d1(jx) + d2(jx)
        if lhs != rhs:
            witness = f"{label}: {lhs - rhs}"
            break
    report.add("J chain map", not witness, witness)
    return report
