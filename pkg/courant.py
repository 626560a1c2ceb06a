# courant.py
"""
Trivialized Courant algebroids over charts: the standard bracket on
TM + T*M twisted by a closed 3-form, action algebroids M x d, Dirac
structures, and morphisms of Manin pairs over a point.

Sections are coefficient lists in a fixed frame. For the standard
algebroid the frame is d_x1..d_xn followed by dx1..dxn and the pairing is
<X + a, Y + b> = a(Y) + b(X).
"""

import os
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from sympy.polys.domains import QQ

from chart_geometry import (
    DifferentialForm,
    GAction,
    MatrixGroupChart,
    MultivectorField,
    check_coisotropic_stabilizers,
    differential,
    double_action,
    format_point,
    interior_derivative,
    lie_derivative,
    schouten,
    sharp,
)
from quadratic_lie import (
    check_qp_group_quadruple,
    direct_sum,
    double,
    lagrangian_witness,
    subalgebra_witness,
)
from report import Report, announce
from symbolic_core import (
    RingMismatchError,
    determinant,
    evaluate_polynomial,
    format_polynomial,
    inverse_matrix,
    qq,
    rank_of,
    solve_in_span,
)

DEFAULT_DEGREE_CAP = 6
DEGREE_CAP_VARIABLE = "QPG_DEGREE_CAP"

STANDARD = "standard"
ACTION = "action"

ZERO = QQ(0)
ONE = QQ(1)


def degree_cap():
    """Membership-degree cap, read from the environment on every call."""
    raw = os.environ.get(DEGREE_CAP_VARIABLE, "").strip()
    if not raw:
        return DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{DEGREE_CAP_VARIABLE} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValueError(f"{DEGREE_CAP_VARIABLE} must be non-negative, got {cap}")
    return cap


# ===============================
# COURANT ALGEBROIDS
# ===============================
class CourantData:
    """
    Trivial pseudo-Euclidean bundle over `chart`: constant pairing on the
    frame, one anchor field per frame element and a bracket rule tagged
    STANDARD (with eta) or ACTION (with algebra and action).
    """

    def __init__(self, chart, pairing, anchor, kind, eta=None, algebra=None, action=None, names=None, name=""):
        if kind not in (STANDARD, ACTION):
            raise ValueError(f"unknown bracket rule {kind!r}")
        self.chart = chart
        self.pairing = [[qq(v) for v in row] for row in pairing]
        self.anchor = list(anchor)
        self.kind = kind
        self.eta = eta
        self.algebra = algebra
        self.action = action
        self.name = name or chart.name
        rank = len(self.pairing)
        if len(self.anchor) != rank or any(len(row) != rank for row in self.pairing):
            raise ValueError(f"pairing of size {rank} with {len(self.anchor)} anchor fields")
        if any(self.pairing[i][j] != self.pairing[j][i] for i in range(rank) for j in range(rank)):
            raise ValueError("pairing is not symmetric")
        if rank and determinant(self.pairing) == 0:
            raise ValueError("pairing is degenerate")
        for X in self.anchor:
            if X.chart != chart:
                raise RingMismatchError("anchor field from another chart")
        self.inverse = inverse_matrix(self.pairing)
        self.names = list(names) if names else [f"v{a + 1}" for a in range(rank)]

    def __repr__(self):
        return f"CourantData({self.name}, {self.kind}, rank {self.rank})"

    @property
    def rank(self):
        return len(self.pairing)

    def section(self, coefficients):
        return SectionE(self, coefficients)

    def zero(self):
        return SectionE(self, [self.chart.ring.zero] * self.rank, reduced=True)

    def basis(self, a):
        ring = self.chart.ring
        return SectionE(self, [ring.one if b == a else ring.zero for b in range(self.rank)], reduced=True)

    @property
    def frame(self):
        return [self.basis(a) for a in range(self.rank)]

    def pair(self, s1, s2):
        ring = self.chart.ring
        total = ring.zero
        for a, f in enumerate(s1.coefficients):
            if not f:
                continue
            for b, g in enumerate(s2.coefficients):
                G = self.pairing[a][b]
                if G and g:
                    total += f * g * G
        return ring.reduce(total)

    def anchor_of(self, s):
        out = MultivectorField.zero(self.chart)
        for f, X in zip(s.coefficients, self.anchor):
            if f and not X.is_zero():
                out = out + X.scale(f)
        return out

    def dual_anchor(self, h):
        """a*(dh), using the pairing to identify E* with E."""
        ring = self.chart.ring
        values = [X(h) if not X.is_zero() else ring.zero for X in self.anchor]
        out = []
        for c in range(self.rank):
            total = ring.zero
            for b, v in enumerate(values):
                S = self.inverse[c][b]
                if S and v:
                    total += v * S
            out.append(total)
        return SectionE(self, out)


class SectionE:
    """Section of a trivialized Courant algebroid, reduced modulo the chart ideal."""

    __slots__ = ("parent", "coefficients")

    def __init__(self, parent, coefficients, reduced=False):
        coefficients = list(coefficients)
        if len(coefficients) != parent.rank:
            raise ValueError(f"{len(coefficients)} coefficients for rank {parent.rank}")
        chart = parent.chart
        if not reduced:
            coefficients = [chart.poly(c) for c in coefficients]
        self.parent = parent
        self.coefficients = coefficients

    def _same(self, other):
        if not isinstance(other, SectionE) or other.parent is not self.parent:
            raise RingMismatchError("sections of different Courant algebroids")

    def __add__(self, other):
        self._same(other)
        return SectionE(self.parent, [a + b for a, b in zip(self.coefficients, other.coefficients)], reduced=True)

    def __neg__(self):
        return SectionE(self.parent, [-a for a in self.coefficients], reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        ring = self.parent.chart.ring
        factor = ring.coerce(factor)
        return SectionE(self.parent, [ring.reduce(a * factor) for a in self.coefficients], reduced=True)

    def is_zero(self):
        return not any(self.coefficients)

    def __eq__(self, other):
        return isinstance(other, SectionE) and other.parent is self.parent and (self - other).is_zero()

    __hash__ = None

    def value(self, point):
        return [evaluate_polynomial(c, point) if c else ZERO for c in self.coefficients]

    def __str__(self):
        pieces = []
        for name, c in zip(self.parent.names, self.coefficients):
            if not c:
                continue
            text = format_polynomial(c)
            if text == "1":
                pieces.append(name)
            elif text == "-1":
                pieces.append(f"-{name}")
            else:
                pieces.append(f"({text})*{name}")
        return " + ".join(pieces) if pieces else "0"

    __repr__ = __str__


def standard_courant(chart, eta=None, name=""):
    """TM + T*M over an affine chart, twisted by the 3-form eta."""
    if chart.ring.ideal_generators:
        raise ValueError("the standard Courant algebroid needs an affine chart without ideal")
    if eta is not None:
        if eta.chart != chart:
            raise RingMismatchError("eta lives on another chart")
        if not eta.is_zero() and eta.degree != 3:
            raise ValueError("eta must be a 3-form")
    n = chart.dim
    pairing = [[ONE if abs(a - b) == n else ZERO for b in range(2 * n)] for a in range(2 * n)]
    anchor = [MultivectorField.coordinate(chart, c) for c in range(n)]
    anchor += [MultivectorField.zero(chart) for _ in range(n)]
    names = [f"d_{v}" for v in chart.variables] + [f"d{v}" for v in chart.variables]
    label = name or f"T{chart.name}" + ("" if eta is None or eta.is_zero() else " twisted")
    return CourantData(chart, pairing, anchor, STANDARD, eta=eta, names=names, name=label)


def action_courant(algebra, action, name=""):
    """M x d with anchor rho and the Lie bracket of d on constant sections."""
    if algebra.form is None:
        raise ValueError(f"{algebra.name} carries no invariant form")
    if len(action.fields) != algebra.dim:
        raise ValueError(f"{len(action.fields)} action fields for {algebra.name} of dimension {algebra.dim}")
    chart = action.chart
    return CourantData(
        chart,
        algebra.form,
        action.fields,
        ACTION,
        algebra=algebra,
        action=action,
        names=list(algebra.basis_names),
        name=name or f"{chart.name} x {algebra.name}",
    )


def vector_part(s):
    E = s.parent
    n = E.chart.dim
    return MultivectorField(E.chart, {(c,): f for c, f in enumerate(s.coefficients[:n]) if f}, reduced=True)


def form_part(s):
    E = s.parent
    n = E.chart.dim
    return DifferentialForm(E.chart, {(c,): f for c, f in enumerate(s.coefficients[n:]) if f}, reduced=True)


def standard_section(E, X=None, alpha=None):
    """X + alpha as a section of the standard algebroid."""
    if E.kind != STANDARD:
        raise ValueError(f"{E.name} is not a standard Courant algebroid")
    n = E.chart.dim
    zero = E.chart.ring.zero
    vec = [X.coefficient(c) for c in range(n)] if X is not None else [zero] * n
    form = [alpha.coefficient(c) for c in range(n)] if alpha is not None else [zero] * n
    return SectionE(E, vec + form, reduced=True)


# ===============================
# BRACKETS
# ===============================
def _eta_contract(eta, X, Y):
    """i_Y i_X eta = eta(X, Y, .)."""
    chart = eta.chart
    zero = chart.ring.zero
    out = {}

    def minor(p, q):
        return X.terms.get((p,), zero) * Y.terms.get((q,), zero) - X.terms.get((q,), zero) * Y.terms.get((p,), zero)

    for (i, j, k), h in eta.terms.items():
        for c, value in ((k, minor(i, j)), (j, -minor(i, k)), (i, minor(j, k))):
            if value:
                out[(c,)] = out.get((c,), zero) + h * value
    return DifferentialForm(chart, out)


def _standard_bracket(E, s1, s2):
    X, alpha = vector_part(s1), form_part(s1)
    Y, beta = vector_part(s2), form_part(s2)
    vec = schouten(X, Y)
    form = lie_derivative(X, beta) - interior_derivative(Y, alpha)
    if E.eta is not None and not E.eta.is_zero():
        form = form + _eta_contract(E.eta, X, Y)
    return standard_section(E, vec, form)


def _action_bracket(E, s1, s2):
    """
    [[X, Y]] = sum f_a g_b [v_a, v_b] + rho(X) g_b v_b - rho(Y) f_a v_a
               + rho*(sum_ab G_ab g_b df_a)
    """
    L = E.algebra
    ring = E.chart.ring
    f, g = s1.coefficients, s2.coefficients
    r = E.rank
    out = [ring.zero] * r

    for a, fa in enumerate(f):
        if not fa:
            continue
        for b, gb in enumerate(g):
            if not gb:
                continue
            fg = fa * gb
            for c, k in enumerate(L.structure[a][b]):
                if k:
                    out[c] += fg * k

    X, Y = E.anchor_of(s1), E.anchor_of(s2)
    for b, gb in enumerate(g):
        if gb and not gb.is_ground:
            out[b] += X(gb)
    for a, fa in enumerate(f):
        if fa and not fa.is_ground:
            out[a] -= Y(fa)

    # w_a = <v_a, Y>, then gamma(rho(v_b)) = sum_a w_a rho(v_b)(f_a)
    w = []
    for a in range(r):
        total = ring.zero
        for b, gb in enumerate(g):
            G = E.pairing[a][b]
            if G and gb:
                total += gb * G
        w.append(total)
    varying = [a for a, fa in enumerate(f) if fa and not fa.is_ground and w[a]]
    if varying:
        gamma = []
        for b, field in enumerate(E.anchor):
            total = ring.zero
            if not field.is_zero():
                for a in varying:
                    total += w[a] * field(f[a])
            gamma.append(total)
        for c in range(r):
            for b, v in enumerate(gamma):
                S = E.inverse[c][b]
                if S and v:
                    out[c] += v * S
    return SectionE(E, out)


def courant_bracket(E, s1, s2):
    if s1.parent is not E or s2.parent is not E:
        raise RingMismatchError(f"sections do not belong to {E.name}")
    if E.kind == STANDARD:
        return _standard_bracket(E, s1, s2)
    return _action_bracket(E, s1, s2)


def exterior_derivative(omega):
    """d(h dx_I) = dh ^ dx_I."""
    chart = omega.chart
    out = DifferentialForm.zero(chart)
    for key, h in omega.terms.items():
        if h.is_ground:
            continue
        out = out + differential(chart, h).wedge(DifferentialForm.coordinate(chart, *key))
    return out


def default_generating_family(E):
    """The constant frame plus one coordinate multiple of each frame element."""
    family = E.frame
    dim = E.chart.dim
    if dim:
        family += [E.basis(a).scale(E.chart.gen(a % dim)) for a in range(E.rank)]
    return family


def sample_points(chart):
    if isinstance(chart, MatrixGroupChart):
        identity = chart.identity_point()
        shifted = list(identity)
        for b, blk in enumerate(chart.blocks):
            if blk.n > 1:
                shifted[chart.variable_index(b, 0, 1)] = ONE
        return [identity, shifted]
    if not chart.dim:
        return [[]]
    candidates = [[ZERO] * chart.dim, [QQ(i + 1) for i in range(chart.dim)]]
    return [p for p in candidates if chart.ring.contains_point(p)]


def check_courant_axioms(E, generating=None, points=None):
    family = list(generating) if generating is not None else default_generating_family(E)
    report = Report(f"courant axioms on {E.name}")

    if E.kind == STANDARD:
        d_eta = exterior_derivative(E.eta) if E.eta is not None else None
        report.add("eta closed", d_eta is None or d_eta.is_zero(), f"d eta = {d_eta}")
    else:
        pts = sample_points(E.chart) if points is None else points
        cois = check_coisotropic_stabilizers(E.action, E.inverse, pts)
        report.extend(cois.report)

    count = len(family)
    brackets = [[courant_bracket(E, family[i], family[j]) for j in range(count)] for i in range(count)]

    witness = ""
    for i, j, k in product(range(count), repeat=3):
        lhs = courant_bracket(E, family[i], brackets[j][k])
        rhs = courant_bracket(E, brackets[i][j], family[k]) + courant_bracket(E, family[j], brackets[i][k])
        residue = lhs - rhs
        if not residue.is_zero():
            witness = f"(u{i}, u{j}, u{k}): jacobiator {residue}"
            break
    report.add("C-1 jacobi", not witness, witness)

    witness = ""
    for i in range(count):
        X = E.anchor_of(family[i])
        for j, k in combinations_with_replacement(range(count), 2):
            lhs = X(E.pair(family[j], family[k]))
            rhs = E.pair(brackets[i][j], family[k]) + E.pair(family[j], brackets[i][k])
            residue = E.chart.ring.reduce(lhs - rhs)
            if residue:
                witness = f"(u{i}, u{j}, u{k}): residue {format_polynomial(residue)}"
                break
        if witness:
            break
    report.add("C-2 invariance", not witness, witness)

    witness = ""
    for i, j in combinations_with_replacement(range(count), 2):
        lhs = brackets[i][j] + brackets[j][i]
        rhs = E.dual_anchor(E.pair(family[i], family[j]))
        if lhs != rhs:
            witness = f"(u{i}, u{j}): symmetric part {lhs}, a*(d<u,v>) = {rhs}"
            break
    report.add("C-3 symmetric part", not witness, witness)

    witness = ""
    for i, j in combinations_with_replacement(range(count), 2):
        residue = E.anchor_of(brackets[i][j]) - schouten(E.anchor_of(family[i]), E.anchor_of(family[j]))
        if not residue.is_zero():
            witness = f"(u{i}, u{j}): {residue}"
            break
    report.add("anchor bracket", not witness, witness)
    return report


# ===============================
# DIRAC STRUCTURES
# ===============================
@dataclass
class DiracData:
    parent: CourantData
    span: list
    name: str = ""


def tangent_bundle(E):
    n = E.chart.dim
    return DiracData(E, [E.basis(c) for c in range(n)], f"T{E.chart.name}")


def cotangent_bundle(E):
    n = E.chart.dim
    return DiracData(E, [E.basis(n + c) for c in range(n)], f"T*{E.chart.name}")


def bivector_graph(E, pi):
    """Sections pi#(dx_c) + dx_c."""
    if pi.chart != E.chart:
        raise RingMismatchError("bivector from another chart")
    span = []
    for c in range(E.chart.dim):
        dx = DifferentialForm.coordinate(E.chart, c)
        span.append(standard_section(E, sharp(pi, dx), dx))
    return DiracData(E, span, f"graph of {pi}")


def two_form_graph(E, omega):
    """Sections d_c + i_{d_c} omega."""
    if omega.chart != E.chart:
        raise RingMismatchError("2-form from another chart")
    chart = E.chart
    zero = chart.ring.zero
    span = []
    for c in range(chart.dim):
        terms = {}
        for (a, b), w in omega.terms.items():
            if a == c:
                terms[(b,)] = terms.get((b,), zero) + w
            elif b == c:
                terms[(a,)] = terms.get((a,), zero) - w
        span.append(standard_section(E, MultivectorField.coordinate(chart, c), DifferentialForm(chart, terms)))
    return DiracData(E, span, f"graph of {omega}")


def cartan_dirac(G, L=None, s=None):
    """
    The diagonal of d = g + gbar inside G x d, with rho(xi, eta) = -xi^R + eta^L.
    `s` replaces the S^2 tensor (the inverse form) of the algebra.
    """
    if not isinstance(G, MatrixGroupChart) or len(G.blocks) != 1:
        raise ValueError("the Cartan-Dirac structure needs a single-block matrix group")
    g = L or G.algebra
    if s is not None:
        g = g.with_form(inverse_matrix([[qq(v) for v in row] for row in s]))
    if g.form is None:
        raise ValueError(f"{g.name} carries no invariant form")
    d = double(g, negate_second=True)
    act = GAction(d, double_action(G, negate_second=True).fields, G)
    E = action_courant(d, act, name=f"{G.name} x {d.name}")
    n = g.dim
    span = [E.section([ONE if k in (i, n + i) else ZERO for k in range(2 * n)]) for i in range(n)]
    return DiracData(E, span, f"E_{G.name}")


def _monomials(chart, degree):
    ring = chart.ring
    out = []
    for combo in combinations_with_replacement(range(chart.dim), degree):
        m = ring.one
        for i in combo:
            m = m * ring.gen(i)
        m = ring.reduce(m)
        if m:
            out.append(m)
    return out


def _membership(generators, target):
    """Rational coefficients c with sum c_j generators[j] = target, or None."""
    keys = {}

    def flatten(s):
        out = {}
        for a, c in enumerate(s.coefficients):
            for monom, coeff in c.iterterms():
                out[keys.setdefault((a, monom), len(keys))] = coeff
        return out

    flat = [flatten(s) for s in generators]
    goal = flatten(target)
    size = len(keys)
    vectors = [[v.get(k, ZERO) for k in range(size)] for v in flat]
    return solve_in_span(vectors, [goal.get(k, ZERO) for k in range(size)])


def _involutive(D, multiples, cap, quiet):
    E = D.parent
    span = D.span
    family = list(span)
    dim = E.chart.dim
    if multiples and dim:
        family += [s.scale(E.chart.gen(i % dim)) for i, s in enumerate(span)]

    pending = []
    for i, j in combinations_with_replacement(range(len(family)), 2):
        w = courant_bracket(E, family[i], family[j])
        if w.is_zero():
            continue
        for k, c in enumerate(span):
            value = E.pair(w, c)
            if value:
                return False, f"<[[u{i}, u{j}]], s{k}> = {format_polynomial(value)}"
        pending.append((i, j, w))

    generators = []
    for degree in range(cap + 1):
        generators += [s.scale(m) for m in _monomials(E.chart, degree) for s in span]
        pending = [(i, j, w) for i, j, w in pending if _membership(generators, w) is None]
        if not pending:
            return True, ""
    i, j, _ = pending[0]
    announce(f"⚠ {D.name}: no membership certificate for [[u{i}, u{j}]] up to degree {cap}", quiet)
    return None, f"no certificate for [[u{i}, u{j}]] within degree cap {cap}"


def check_dirac(D, points=None, multiples=True, cap=None, quiet=True):
    E = D.parent
    span = D.span
    report = Report(f"dirac structure {D.name or '?'} in {E.name}")

    witness = ""
    for i, j in combinations_with_replacement(range(len(span)), 2):
        value = E.pair(span[i], span[j])
        if value:
            witness = f"<s{i}, s{j}> = {format_polynomial(value)}"
            break
    report.add("isotropic", not witness, witness)

    for point in sample_points(E.chart) if points is None else points:
        point = E.chart.check_point(point)
        rows = [s.value(point) for s in span]
        rank = rank_of(rows, E.rank) if rows else 0
        report.add(f"half rank at {format_point(point)}", 2 * rank == E.rank, f"rank {rank} of {E.rank}")

    result, witness = _involutive(D, multiples, degree_cap() if cap is None else cap, quiet)
    report.add("involutive", result, witness)
    return report


# ===============================
# MANIN PAIR MORPHISMS OVER A POINT
# ===============================
@dataclass
class LinearManinMorphism:
    E1: object               # quadratic LieAlgebraData
    E2: object
    A1: list                 # Lagrangian subalgebra of E1
    A2: list                 # Lagrangian subalgebra of E2
    K: list                  # subspace of E2 (+) E1bar, E2 coordinates first


@dataclass
class ManinMorphismCheck:
    report: Report
    phi: list                # phi[j] = image in A2* of the j-th basis covector of A1*
    ambient: object


def check_manin_pair_morphism_linear(M):
    E1, E2 = M.E1, M.E2
    for E in (E1, E2):
        if E.form is None:
            raise ValueError(f"{E.name} carries no invariant form")
    n1, n2 = E1.dim, E2.dim
    for label, vectors, size in (("A1", M.A1, n1), ("A2", M.A2, n2), ("K", M.K, n1 + n2)):
        for v in vectors:
            if len(v) != size:
                raise ValueError(f"{label}: vector of length {len(v)}, expected {size}")

    report = Report(f"manin pair morphism ({E1.name}) -> ({E2.name})")
    for label, E, A in (("A1", E1, M.A1), ("A2", E2, M.A2)):
        w = lagrangian_witness(E.pair, A, E.dim)
        report.add(f"{label} lagrangian", not w, w)
        w = subalgebra_witness(E.bracket, A, E.format)
        report.add(f"{label} subalgebra", not w, w)

    ambient = direct_sum(E2, E1, negate_second=True, name=f"({E2.name})+({E1.name})bar", suffixes=("_2", "_1"))
    w = lagrangian_witness(ambient.pair, M.K, ambient.dim)
    report.add("K lagrangian", not w, w)
    w = subalgebra_witness(ambient.bracket, M.K, ambient.format)
    report.add("K subalgebra", not w, w)

    # E/A is identified with A* through the pairing
    q1 = [[E1.pair(k[n2:], a) for a in M.A1] for k in M.K]
    q2 = [[E2.pair(k[:n2], b) for b in M.A2] for k in M.K]
    m1, m2 = len(M.A1), len(M.A2)
    r1 = rank_of(q1, m1) if q1 else 0
    r = rank_of([x + y for x, y in zip(q1, q2)], m1 + m2) if q1 else 0
    graph = r1 == m1 and r == m1
    report.add(
        "projection is a graph",
        graph,
        f"rank of the A1* part {r1} of {m1}, rank of the projection {r}",
    )

    phi = None
    if graph:
        phi = []
        for j in range(m1):
            coeffs = solve_in_span(q1, [ONE if t == j else ZERO for t in range(m1)])
            phi.append([sum((c * row[i] for c, row in zip(coeffs, q2)), ZERO) for i in range(m2)])
    report.add("full (trivial over a point)", True)
    return ManinMorphismCheck(report, phi, ambient)


@dataclass
class RoundTrip:
    report: Report
    phi: list
    quadruple: object


def quadruple_round_trip(Q):
    """K of a quasi-Poisson group quadruple, as a morphism (f, h) -> (d, diag g)."""
    qc = check_qp_group_quadruple(Q)
    g = Q.g
    n = g.dim
    d = double(g)
    diagonal = [list(g.basis_vector(i)) + list(g.basis_vector(i)) for i in range(n)]
    check = check_manin_pair_morphism_linear(LinearManinMorphism(Q.f, d, list(Q.h), diagonal, qc.K))

    report = Report(f"quadruple round trip ({g.name}, {Q.f.name})")
    report.extend(qc.report, prefix="quadruple: ")
    report.extend(check.report, prefix="morphism: ")
    if check.phi is None:
        report.add("phi_K recovers rho", False, "K does not project to a graph")
        return RoundTrip(report, None, qc)

    witness = ""
    for i in range(n):
        coeffs = solve_in_span(Q.h, Q.rho[i])
        if coeffs is None:
            witness = f"rho({g.basis_names[i]}) not in h"
            break
        column = [check.phi[j][i] for j in range(len(Q.h))]
        if column != list(coeffs):
            witness = f"{g.basis_names[i]}: phi_K gives {column}, rho gives {list(coeffs)}"
            break
    report.add("phi_K recovers rho", not witness, witness)
    return RoundTrip(report, check.phi, qc)
