# graded_poisson.py
"""
Finitely presented graded Poisson algebras with degree -1 brackets:
G_small, G_big, the multivector presentation of a chart, graded Poisson
maps between them, the multiplication pullback and the fusion crosscheck.
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from sympy.polys.domains import QQ

from chart_geometry import (
    MatrixGroupChart,
    MultivectorField,
    _tensor,
    embed_field,
    fuse_spaces,
    product_chart,
)
from quadratic_lie import cartan_trivector
from report import Report
from symbolic_core import (
    CoordinateRing,
    GradedBracket,
    GradedPresentation,
    RingMismatchError,
    embed_polynomial,
    format_polynomial,
    graded_multiply,
    substitute,
)

HALF = QQ(1, 2)
T_NAME = "t"


def xi_name(basis_name):
    return f"xi_{basis_name}"


def _copy_name(name, copy):
    return f"{name}_{copy}"


# ===============================
# PRESENTATIONS
# ===============================
@dataclass
class GradedPoissonPresentation:
    presentation: GradedPresentation
    bracket: GradedBracket
    name: str = ""
    algebra: object = None      # LieAlgebraData for G_small / G_big
    group: object = None        # MatrixGroupChart for G_big
    s: list = None
    chart: object = None        # Chart, for multivector presentations
    base: object = None         # the factor of a tensor power
    body_positions: list = None

    @property
    def body(self):
        return self.presentation.body

    def generator(self, name):
        return self.presentation.generator(name)

    def generator_names(self):
        return self.presentation.all_names()

    def zero(self):
        return self.presentation.zero()

    def xi(self, i):
        return self.generator(xi_name(self.algebra.basis_names[i]))

    def xi_upper(self, i):
        """xi^i = sum_j S_ij xi_j."""
        S = _tensor(self.algebra, self.s)
        out = self.zero()
        for j, c in enumerate(S[i]):
            if c:
                out = out + self.xi(j).scale(c)
        return out

    def __call__(self, x, y):
        return self.bracket(x, y)


def _small_generators(L):
    return [T_NAME] + [xi_name(b) for b in L.basis_names], [2] + [1] * L.dim


def _fill_algebra_table(P, L, S):
    """{t,t} = phi, {t,xi} = 0, {xi,eta} = [xi,eta]."""
    pres = P.presentation
    phi = cartan_trivector(L, S).phi
    value = pres.zero()
    for (i, j, k), c in phi.terms.items():
        value = value + pres.word((1 + i, 1 + j, 1 + k), pres.body.constant(c))
    P.bracket.set(T_NAME, T_NAME, value)
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            out = pres.zero()
            for k, c in enumerate(L.structure[i][j]):
                if c:
                    out = out + P.xi(k).scale(c)
            if not out.is_zero():
                P.bracket.set(xi_name(L.basis_names[i]), xi_name(L.basis_names[j]), out)


def build_Gsmall(L, s=None):
    """C(R[2] x g[1]) = (wedge g)[t] with {t,t} = phi and {xi,eta} = [xi,eta]."""
    S = _tensor(L, s)
    names, degrees = _small_generators(L)
    pres = GradedPresentation(names, degrees, CoordinateRing([], name="point"), name=f"G_small({L.name})")
    P = GradedPoissonPresentation(pres, GradedBracket(pres), pres.name, L, None, S)
    _fill_algebra_table(P, L, S)
    return P


def build_Gbig(L, s=None, G=None):
    """
    G_small extended by the coordinates of G, with
        {t, f} = sum_i b(e_i)(f) xi^i,  {xi, f} = (xi^L - xi^R)(f),  {f, g} = 0.
    """
    G = G or MatrixGroupChart(L)
    if G.algebra.dim != L.dim:
        raise ValueError(f"{G.name} does not integrate {L.name}")
    S = _tensor(L, s)
    names, degrees = _small_generators(L)
    pres = GradedPresentation(names, degrees, G.ring, name=f"G_big({L.name})")
    P = GradedPoissonPresentation(pres, GradedBracket(pres), pres.name, L, G, S)
    _fill_algebra_table(P, L, S)

    unit = [[QQ(1) if a == b else QQ(0) for a in range(L.dim)] for b in range(L.dim)]
    b_fields = [G.b_field(unit[i]) for i in range(L.dim)]
    conj = [G.basis_left(i) - G.basis_right(i) for i in range(L.dim)]
    uppers = [P.xi_upper(i) for i in range(L.dim)]
    for c, var in enumerate(G.variables):
        value = pres.zero()
        for i in range(L.dim):
            coeff = b_fields[i].coefficient(c)
            if coeff:
                value = value + uppers[i].scale(coeff)
        if not value.is_zero():
            P.bracket.set(T_NAME, var, value)
        for i, name in enumerate(L.basis_names):
            coeff = conj[i].coefficient(c)
            if coeff:
                P.bracket.set(xi_name(name), var, pres.scalar(coeff))
    return P


def multivector_presentation(chart):
    """Gamma(wedge TM) as C(T*[1]M): coordinates, odd d_<x> and {d_x, x} = 1."""
    names = [f"d_{v}" for v in chart.variables]
    pres = GradedPresentation(names, [1] * len(names), chart.ring, name=f"T*[1]{chart.name}")
    bracket = GradedBracket(pres)
    for name, var in zip(names, chart.variables):
        bracket.set(name, var, pres.scalar(1))
    return GradedPoissonPresentation(pres, bracket, pres.name, chart=chart)


def multivector_to_graded(P, X):
    pres = P.presentation
    if X.chart.ring != pres.body:
        raise RingMismatchError(f"{X.chart!r} is not the body of {pres!r}")
    out = pres.zero()
    for key, c in X.terms.items():
        out = out + pres.word(key, c)
    return out


def graded_to_multivector(P, x):
    return MultivectorField(P.chart, dict(x.terms))


def check_graded_poisson(P):
    pres = P.presentation
    names = P.generator_names()
    report = Report(f"graded poisson {P.name}")

    witness = ""
    for (a, b), value in P.bracket.table.items():
        expected = pres.degree_of(a) + pres.degree_of(b) - 1
        found = value.degrees()
        if found and found != {expected}:
            witness = f"{{{a}, {b}}} has degrees {sorted(found)}, expected {expected}"
            break
    report.add("degree homogeneity", not witness, witness)

    witness = ""
    for (a, b), value in P.bracket.table.items():
        if (b, a) not in P.bracket.table:
            continue
        other = P.bracket.table[(b, a)]
        expected = other if P.bracket.antisymmetry_sign(a, b) > 0 else -other
        if value != expected:
            witness = f"({a}, {b}): {value - expected}"
            break
    report.add("antisymmetry", not witness, witness)

    gens = {n: pres.generator(n) for n in names}
    witness = ""
    for a, b, c in combinations_with_replacement(names, 3):
        x, y, z = gens[a], gens[b], gens[c]
        lhs = P(x, P(y, z))
        sign = -1 if ((pres.degree_of(a) - 1) * (pres.degree_of(b) - 1)) % 2 else 1
        rhs = P(P(x, y), z) + P(y, P(x, z)).scale(sign)
        if lhs != rhs:
            witness = f"({a}, {b}, {c}): {lhs - rhs}"
            break
    report.add("jacobi", not witness, witness)
    return report


# ===============================
# POISSON MAPS
# ===============================
class GradedPoissonMap:
    """Algebra map target -> source given by images of the target generators."""

    def __init__(self, source, target, images, name=""):
        self.source = source
        self.target = target
        self.name = name
        missing = [n for n in target.generator_names() if n not in images]
        if missing:
            raise ValueError(f"no image for {', '.join(missing)}")
        self.images = dict(images)
        self._body_images = [
            self.images[v].coefficient(()) for v in target.body.variables
        ]

    def pullback(self, x):
        src = self.source.presentation
        out = src.zero()
        for word, coeff in x.terms.items():
            c = substitute(coeff, self._body_images, src.body)
            if not c:
                continue
            term = src.scalar(c)
            for letter in word:
                term = graded_multiply(term, self.images[self.target.presentation.names[letter]])
            out = out + term
        return out

    def image(self, name):
        return self.images[name]


def check_poisson_map(F):
    source, target = F.source, F.target
    tp = target.presentation
    names = target.generator_names()
    report = Report(f"graded poisson map {F.name}".strip())

    witness = ""
    for name in names:
        image = F.images[name]
        found = image.degrees()
        if found and found != {tp.degree_of(name)}:
            witness = f"{name} maps to degrees {sorted(found)}"
            break
    report.add("degree preserving", not witness, witness)

    witness = ""
    for g in target.body.ideal_generators:
        image = F.pullback(tp.scalar(g))
        if not image.is_zero():
            witness = f"{format_polynomial(g)} maps to {image}"
            break
    report.add("relations preserved", not witness, witness)

    witness = ""
    for a, b in combinations_with_replacement(names, 2):
        lhs = F.pullback(target(tp.generator(a), tp.generator(b)))
        rhs = source(F.images[a], F.images[b])
        if lhs != rhs:
            witness = f"{{{a}, {b}}}: {lhs - rhs}"
            break
    report.add("brackets preserved", not witness, witness)
    return report


def quasi_poisson_map(P, M, name=""):
    """
    t -> -pi, xi_i -> rho(e_i), f -> Phi* f from P into the multivector
    presentation of M's chart.
    """
    S = multivector_presentation(M.chart)
    L = P.algebra
    if M.action.algebra.dim != L.dim:
        raise ValueError(f"{M.action.algebra.name} does not match {L.name}")
    images = {T_NAME: multivector_to_graded(S, -M.pi)}
    for i, basis in enumerate(L.basis_names):
        images[xi_name(basis)] = multivector_to_graded(S, M.action.field(i))
    if P.group is not None:
        if M.moment is None:
            raise ValueError(f"{P.name} needs a moment map")
        for var, comp in zip(P.group.variables, M.moment.components):
            images[var] = S.presentation.scalar(comp)
    return GradedPoissonMap(S, P, images, name or f"{M.name} -> {P.name}")


# ===============================
# TENSOR POWERS AND MULTIPLICATION
# ===============================
def tensor_power(P, k):
    """P (x) ... (x) P with copies suffixed _1 .. _k, copy-major generator order."""
    pres = P.presentation
    body = pres.body
    variables, ideal_positions = [], []
    for c in range(1, k + 1):
        start = len(variables)
        variables += [_copy_name(v, c) for v in body.variables]
        ideal_positions.append(list(range(start, start + body.ngens)))
    raw = CoordinateRing(variables)
    ideal = [
        embed_polynomial(g, raw, positions)
        for positions in ideal_positions
        for g in body.ideal_generators
    ]
    new_body = CoordinateRing(variables, ideal, name=f"{body.name}^{k}")
    names = [_copy_name(n, c) for c in range(1, k + 1) for n in pres.names]
    degrees = list(pres.degrees) * k
    new_pres = GradedPresentation(names, degrees, new_body, name=f"{P.name}^{k}")
    out = GradedPoissonPresentation(
        new_pres, GradedBracket(new_pres), new_pres.name, P.algebra, P.group, P.s,
        base=P, body_positions=ideal_positions,
    )
    for c in range(1, k + 1):
        for (a, b), value in P.bracket.table.items():
            out.bracket.set(_copy_name(a, c), _copy_name(b, c), embed_into_copy(out, value, c))
    return out


def embed_into_copy(T, x, copy):
    """Element of the base presentation placed in copy `copy` of a tensor power."""
    pres = T.presentation
    ng = len(T.base.presentation.names)
    offset = (copy - 1) * ng
    positions = T.body_positions[copy - 1]
    out = pres.zero()
    for word, c in x.terms.items():
        out = out + pres.word(tuple(offset + i for i in word), embed_polynomial(c, pres.body, positions))
    return out


def _mult_images(T, first, second, include_cocycle=True):
    """mult* with the factors landing in copies `first` and `second` of T."""
    base = T.base
    L = base.algebra
    S = _tensor(L, base.s)

    def copy_gen(name, c):
        return T.generator(_copy_name(name, c))

    images = {}
    t = copy_gen(T_NAME, first) + copy_gen(T_NAME, second)
    if include_cocycle:
        for i in range(L.dim):
            for j, c in enumerate(S[i]):
                if c:
                    upper = copy_gen(xi_name(L.basis_names[j]), first)
                    lower = copy_gen(xi_name(L.basis_names[i]), second)
                    t = t + graded_multiply(upper, lower).scale(c * HALF)
    images[T_NAME] = t
    for name in L.basis_names:
        images[xi_name(name)] = copy_gen(xi_name(name), first) + copy_gen(xi_name(name), second)

    G = base.group
    if G is not None:
        for b, blk in enumerate(G.blocks):
            for i in range(blk.n):
                for j in range(blk.n):
                    value = T.zero()
                    for m in range(blk.n):
                        left = copy_gen(G.variables[G.variable_index(b, i, m)], first)
                        right = copy_gen(G.variables[G.variable_index(b, m, j)], second)
                        value = value + graded_multiply(left, right)
                    images[G.variables[G.variable_index(b, i, j)]] = value
    return images


def multiplication_pullback(P, include_cocycle=True):
    """
    mult*: t -> t_1 + t_2 + 1/2 sum (xi^i)_1 (xi_i)_2, xi -> xi_1 + xi_2 and
    coordinates through the matrix product.
    """
    T = tensor_power(P, 2)
    images = _mult_images(T, 1, 2, include_cocycle)
    return GradedPoissonMap(T, P, images, f"mult* on {P.name}")


def _slot_map(P, k, slot, include_cocycle=True):
    """id (x) .. (x) mult (x) .. (x) id from P^k to P^(k+1), mult at `slot`."""
    source = tensor_power(P, k + 1)
    target = tensor_power(P, k)
    base_names = P.generator_names()
    images = {}
    for c in range(1, k + 1):
        if c < slot:
            for n in base_names:
                images[_copy_name(n, c)] = source.generator(_copy_name(n, c))
        elif c == slot:
            for n, value in _mult_images(source, c, c + 1, include_cocycle).items():
                images[_copy_name(n, c)] = value
        else:
            for n in base_names:
                images[_copy_name(n, c)] = source.generator(_copy_name(n, c + 1))
    return GradedPoissonMap(source, target, images, f"mult at {slot}")


@dataclass
class MultiplicationCheck:
    report: Report
    mult: GradedPoissonMap


def check_multiplication(P, include_cocycle=True):
    """mult* is a graded Poisson map and is coassociative on generators."""
    mult = multiplication_pullback(P, include_cocycle)
    report = Report(f"multiplication on {P.name}")
    report.extend(check_poisson_map(mult), prefix="mult* ")
    left = _slot_map(P, 2, 1, include_cocycle)
    right = _slot_map(P, 2, 2, include_cocycle)
    witness = ""
    for name in P.generator_names():
        once = mult.images[name]
        a, b = left.pullback(once), right.pullback(once)
        if a != b:
            witness = f"{name}: {a - b}"
            break
    report.add("coassociativity", not witness, witness)
    return MultiplicationCheck(report, mult)


# ===============================
# FUSION THROUGH MULTIPLICATION
# ===============================
@dataclass
class FusionCrosscheck:
    report: Report
    residue: MultivectorField = None
    composite: GradedPoissonMap = None
    extra: dict = field(default_factory=dict)


def fusion_crosscheck(M1, M2, P=None, include_cocycle=True):
    """
    Compare (F1 (x) F2) o mult* with the chart fusion M1 (*) M2 on t, xi
    and the coordinates. `residue` is the composite image of t plus the
    fused bivector.
    """
    g = M1.action.algebra
    if P is None:
        if M1.moment is not None and M2.moment is not None:
            P = build_Gbig(g, M1.s, M1.moment.target)
        else:
            P = build_Gsmall(g, M1.s)
    chart, p1, p2 = product_chart(M1.chart, M2.chart)
    S12 = multivector_presentation(chart)
    T = tensor_power(P, 2)

    images = {}
    for copy, (M, positions) in enumerate(((M1, p1), (M2, p2)), start=1):
        images[_copy_name(T_NAME, copy)] = multivector_to_graded(S12, -embed_field(M.pi, chart, positions))
        for i, basis in enumerate(g.basis_names):
            images[_copy_name(xi_name(basis), copy)] = multivector_to_graded(
                S12, embed_field(M.action.field(i), chart, positions)
            )
        if P.group is not None:
            for var, comp in zip(P.group.variables, M.moment.components):
                images[_copy_name(var, copy)] = S12.presentation.scalar(
                    embed_polynomial(comp, chart.ring, positions)
                )
    product_map = GradedPoissonMap(S12, T, images, "F1 (x) F2")
    mult = GradedPoissonMap(T, P, _mult_images(T, 1, 2, include_cocycle), "mult*")
    composite = GradedPoissonMap(
        S12, P, {n: product_map.pullback(mult.images[n]) for n in P.generator_names()}, "fusion through mult*"
    )

    fused = fuse_spaces(M1, M2)
    report = Report(f"fusion crosscheck {M1.name}*{M2.name}")
    expected_t = multivector_to_graded(S12, -fused.pi)
    residue = graded_to_multivector(S12, composite.images[T_NAME] - expected_t)
    report.add("t matches fused bivector", residue.is_zero(), f"residue {residue}")

    witness = ""
    for i, basis in enumerate(g.basis_names):
        expected = multivector_to_graded(S12, fused.action.field(i))
        if composite.images[xi_name(basis)] != expected:
            witness = f"{basis}: {composite.images[xi_name(basis)] - expected}"
            break
    report.add("xi matches diagonal action", not witness, witness)

    if P.group is not None:
        witness = ""
        for var, comp in zip(P.group.variables, fused.moment.components):
            found = composite.images[var].coefficient(())
            if chart.ring.reduce(found - comp):
                witness = f"{var}: {format_polynomial(chart.ring.reduce(found - comp))}"
                break
        report.add("coordinates match product moment", not witness, witness)
    return FusionCrosscheck(report, residue, composite)
