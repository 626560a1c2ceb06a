# fixtures.py
"""
Named examples. Each builder assembles its objects, runs the checks and
returns one Report; EXPECTED_PASS lists the rows every run must pass.
"""

import time
from dataclasses import dataclass

from chart_geometry import (
    Chart,
    DifferentialForm,
    GAction,
    HamiltonianSpace,
    MatrixGroupChart,
    MultivectorField,
    PolyMap,
    _poly_matmul,
    adjugate,
    bialgebra_over_point,
    build_cotangent_differential,
    check_action,
    check_coisotropic_stabilizers,
    check_dual_matches_cotangent,
    check_moment_map,
    check_qp_bialgebroid,
    check_qp_morphism,
    check_quasi_poisson,
    check_quasi_symplectic,
    conjugation_space,
    conjugation_structure,
    coisotropy_witness,
    double_action,
    dual_differential_and_induced_bivector,
    embed_field,
    fuse,
    fuse_space,
    fuse_spaces,
    fusion_algebroid_isomorphism,
    fusion_element,
    i_map_and_check,
    oneform_bracket_and_anchor,
    product_chart,
    product_spaces,
    special_linear_group,
    tangent_bialgebroid,
)
from courant import (
    LinearManinMorphism,
    bivector_graph,
    cartan_dirac,
    check_courant_axioms,
    check_dirac,
    check_manin_pair_morphism_linear,
    courant_bracket,
    cotangent_bundle,
    quadruple_round_trip,
    sample_points,
    standard_courant,
    tangent_bundle,
    two_form_graph,
)
from graded_poisson import (
    build_Gbig,
    build_Gsmall,
    check_graded_poisson,
    check_multiplication,
    check_poisson_map,
    fusion_crosscheck,
    quasi_poisson_map,
)
from quadratic_lie import (
    GeneralizedManinTriple,
    QPGroupQuadruple,
    abelian_algebra,
    build_ghat,
    build_Q,
    build_Qs,
    check_generalized_manin_triple,
    check_graded_lie,
    check_manin_triple,
    check_rhat_quasitriangular,
    direct_sum,
    double,
    ghat_bialgebra_pair,
    sl2_algebra,
    so3_algebra,
)
from report import FAIL, PASS, Report, announce

SLOW_REASON = "slow check, run with --slow"


def _slow(report, slow, name, check, prefix=""):
    """Run `check() -> Report` when slow checks are enabled, else record a skip."""
    if slow:
        report.extend(check(), prefix=prefix)
    else:
        report.skip(name, SLOW_REASON)


def _unit(n, i):
    return [1 if j == i else 0 for j in range(n)]


# ===============================
# MATRIX HELPERS
# ===============================
class _MatrixOps:
    """Products and adjugate inverses of SL(n) blocks, reduced in one ring."""

    def __init__(self, ring):
        self.ring = ring

    def mul(self, *factors):
        out = factors[0]
        for m in factors[1:]:
            out = _poly_matmul(out, m, self.ring.zero)
        return [[self.ring.reduce(v) for v in row] for row in out]

    def inv(self, m):
        return adjugate(m, self.ring)

    def identity(self, n):
        return [[self.ring.one if i == j else self.ring.zero for j in range(n)] for i in range(n)]

    def equal(self, A, B):
        return all(not self.ring.reduce(a - b) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def _flatten(m):
    return [v for row in m for v in row]


def _blocks(chart, n, count):
    size = n * n
    return [
        [[chart.gen(k * size + i * n + j) for j in range(n)] for i in range(n)]
        for k in range(count)
    ]


def _power(g, k):
    """g (+) ... (+) g, k copies, with the positive form."""
    out = g
    for _ in range(k - 1):
        out = direct_sum(out, g, name=f"{out.name}+{g.name}")
    return out


# ===============================
# THE DOUBLE AND THE AMM GROUPOID
# ===============================
def half_double(G):
    """(G, rho, 0) over g + g with rho(xi, eta) = -xi^R + eta^L."""
    act = double_action(G, negate_second=False)
    return HamiltonianSpace(G, act, MultivectorField.zero(G), name=G.name)


def double_space(G):
    """D(G) = (G, rho, 0) (*) (G, rho, 0) with moment map (a, b) -> (a b^-1, a^-1 b)."""
    half = half_double(G)
    P = product_spaces(half, half)
    fused = fuse(P.chart, P.action, P.pi)
    n = G.blocks[0].n
    ops = _MatrixOps(P.chart.ring)
    a, b = _blocks(P.chart, n, 2)
    target = MatrixGroupChart(half.action.algebra)
    components = _flatten(ops.mul(a, ops.inv(b))) + _flatten(ops.mul(ops.inv(a), b))
    moment = PolyMap(P.chart, target, components, name="Phi")
    return HamiltonianSpace(P.chart, fused.action, fused.pi, moment, None, f"D({G.name})")


def amm_groupoid(G):
    """The fused double over G with its diagonal g-action."""
    D = double_space(G)
    Gamma = fuse_space(D, prefix=G.prefix)
    Gamma.name = f"AMM({G.name})"
    return Gamma


def source_map(Gamma, G):
    """s(a, b) = a b^-1."""
    ops = _MatrixOps(Gamma.chart.ring)
    a, b = _blocks(Gamma.chart, G.blocks[0].n, 2)
    return PolyMap(Gamma.chart, G, _flatten(ops.mul(a, ops.inv(b))), name="s")


def target_map(Gamma, G):
    """t(a, b) = b^-1 a."""
    ops = _MatrixOps(Gamma.chart.ring)
    a, b = _blocks(Gamma.chart, G.blocks[0].n, 2)
    return PolyMap(Gamma.chart, G, _flatten(ops.mul(ops.inv(b), a)), name="t")


def _compose(ops, first, second):
    """(a', b') . (a, b) = (a' a, a' b)."""
    return ops.mul(first[0], second[0]), ops.mul(first[0], second[1])


def amm_groupoid_structure(g):
    """
    Groupoid identities of the AMM groupoid as polynomial identities on
    parametrized composable pairs and triples.
    """
    report = Report(f"AMM groupoid structure over {g.name}")
    s = lambda ops, x: ops.mul(x[0], ops.inv(x[1]))
    t = lambda ops, x: ops.mul(ops.inv(x[1]), x[0])

    # pairs (a', b') . (a, b) with b = a'^-1 b' a, i.e. s(a, b) = t(a', b')
    H = MatrixGroupChart(_power(g, 3), name="G^3")
    ops = _MatrixOps(H.ring)
    a1, b1, a = (H.matrix(k) for k in range(3))
    left, right = (a1, b1), (a, ops.mul(ops.inv(a1), b1, a))
    product = _compose(ops, left, right)
    report.add("composable pairs", ops.equal(s(ops, right), t(ops, left)), "s(a, b) != t(a', b')")
    report.add("a'b = b'a", ops.equal(ops.mul(left[0], right[1]), ops.mul(left[1], right[0])), "the two formulas differ")
    report.add("s(gh) = s(g)", ops.equal(s(ops, product), s(ops, left)), "")
    report.add("t(gh) = t(h)", ops.equal(t(ops, product), t(ops, right)), "")

    # unit bisection x -> (1, x^-1)
    single = MatrixGroupChart(g, name=g.name)
    ops1 = _MatrixOps(single.ring)
    x = single.matrix(0)
    n = len(x)
    unit = (ops1.identity(n), ops1.inv(x))
    report.add("s o unit = id", ops1.equal(s(ops1, unit), x), "")
    report.add("t o unit = id", ops1.equal(t(ops1, unit), x), "")

    pair = MatrixGroupChart(_power(g, 2), name="G^2")
    ops2 = _MatrixOps(pair.ring)
    gamma = (pair.matrix(0), pair.matrix(1))
    left_unit = (ops2.identity(n), ops2.inv(s(ops2, gamma)))
    right_unit = (ops2.identity(n), ops2.inv(t(ops2, gamma)))
    ok = ops2.equal(t(ops2, left_unit), s(ops2, gamma)) and all(
        ops2.equal(u, v) for u, v in zip(_compose(ops2, left_unit, gamma), gamma)
    )
    report.add("left unit", ok, "unit(s(g)) . g != g")
    ok = ops2.equal(s(ops2, right_unit), t(ops2, gamma)) and all(
        ops2.equal(u, v) for u, v in zip(_compose(ops2, gamma, right_unit), gamma)
    )
    report.add("right unit", ok, "g . unit(t(g)) != g")

    # triples with b2 = a1^-1 b1 a2, b3 = a2^-1 b2 a3
    H4 = MatrixGroupChart(_power(g, 4), name="G^4")
    ops4 = _MatrixOps(H4.ring)
    a1, b1, a2, a3 = (H4.matrix(k) for k in range(4))
    b2 = ops4.mul(ops4.inv(a1), b1, a2)
    b3 = ops4.mul(ops4.inv(a2), b2, a3)
    g1, g2, g3 = (a1, b1), (a2, b2), (a3, b3)
    lhs = _compose(ops4, _compose(ops4, g1, g2), g3)
    rhs = _compose(ops4, g1, _compose(ops4, g2, g3))
    report.add("associativity", all(ops4.equal(u, v) for u, v in zip(lhs, rhs)), "(g1 g2) g3 != g1 (g2 g3)")
    return report


def multiplication_coisotropy(Gamma, g):
    """
    The graph of multiplication is coisotropic in (Gamma (*) Gamma) x Gamma
    with bivector pi_fused - pi_Gamma, tested through the parametrization
    (a1, a2, b2) -> (a1, a1 b2 a2^-1, a2, b2, a1 a2, a1 b2).
    """
    pair = fuse_spaces(Gamma, Gamma)
    chart, p12, p3 = product_chart(pair.chart, Gamma.chart)
    pi = embed_field(pair.pi, chart, p12) - embed_field(Gamma.pi, chart, p3)

    source = MatrixGroupChart(_power(g, 3), name="G^3")
    ops = _MatrixOps(source.ring)
    a1, a2, b2 = (source.matrix(k) for k in range(3))
    images = [a1, ops.mul(a1, b2, ops.inv(a2)), a2, b2, ops.mul(a1, a2), ops.mul(a1, b2)]
    param = PolyMap(source, chart, [v for m in images for v in _flatten(m)], name="graph of multiplication")

    n = len(a1)
    A1, B1, A2, B2, C, D = _blocks(chart, n, 6)
    zero = chart.ring.zero
    generators = []
    for lhs, rhs in (
        (C, _poly_matmul(A1, A2, zero)),
        (D, _poly_matmul(A1, B2, zero)),
        (_poly_matmul(B1, A2, zero), _poly_matmul(A1, B2, zero)),
    ):
        generators += [lhs[i][j] - rhs[i][j] for i in range(n) for j in range(n)]

    report = Report(f"multiplicativity of {Gamma.name}")
    witness = coisotropy_witness(chart, generators, pi, param)
    report.add("graph of multiplication coisotropic", not witness, witness)
    return report


# ===============================
# BUILDERS
# ===============================
def build_abelian_r2(slow=False):
    L = abelian_algebra(2)
    report = Report("abelian-r2")
    report.extend(check_graded_lie(build_ghat(L)), prefix="ghat: ")
    report.extend(check_graded_lie(build_Q(L)), prefix="Q: ")
    report.extend(check_graded_lie(build_Qs(L, L.tensor())), prefix="Q_s: ")

    chart = Chart.affine(["x", "y"], name="R2")
    act = GAction(L, [MultivectorField.coordinate(chart, c) for c in range(2)], chart)
    pi = MultivectorField.zero(chart)
    report.extend(check_action(act), prefix="translations: ")
    report.extend(check_quasi_poisson(chart, act, pi), prefix="translations: ")
    report.extend(build_cotangent_differential(chart, act, pi).report, prefix="translations: ")

    E = standard_courant(chart)
    report.extend(check_courant_axioms(E), prefix="TR2: ")
    report.extend(check_dirac(tangent_bundle(E)), prefix="TR2 tangent: ")
    report.extend(check_dirac(cotangent_bundle(E)), prefix="TR2 cotangent: ")
    report.extend(check_dirac(bivector_graph(E, MultivectorField.coordinate(chart, 0, 1))), prefix="TR2 graph: ")

    R3 = Chart.affine(["x", "y", "z"], name="R3")
    E3 = standard_courant(R3, DifferentialForm.coordinate(R3, 0, 1, 2))
    report.extend(check_courant_axioms(E3), prefix="TR3 twisted: ")
    # d(-x dy^dz) + dx^dy^dz = 0
    omega = DifferentialForm(R3, {(1, 2): -R3.gen(0)})
    report.extend(check_dirac(two_form_graph(E3, omega)), prefix="TR3 twisted graph: ")

    R4 = Chart.affine(["x1", "x2", "x3", "x4"], name="R4")
    E4 = standard_courant(R4, DifferentialForm(R4, {(1, 2, 3): R4.gen(0)}))
    control = check_courant_axioms(E4, generating=E4.frame)
    report.add(
        "non-closed eta breaks jacobi",
        control.status_of("eta closed") == FAIL and control.status_of("C-1 jacobi") == FAIL,
        "the twisted bracket on R4 satisfied jacobi",
    )
    return report


def build_so3_trivial(slow=False):
    L = so3_algebra()
    report = Report("so3-trivial")
    report.extend(check_graded_lie(build_ghat(L)), prefix="ghat: ")
    report.extend(check_graded_lie(build_Q(L)), prefix="Q: ")
    report.extend(check_graded_lie(build_Qs(L, L.tensor())), prefix="Q_s: ")

    chart = Chart.affine(["x", "y", "z"], name="R3")
    act = GAction.trivial(L, chart)
    pi = MultivectorField.zero(chart)
    report.extend(check_action(act))
    report.extend(check_quasi_poisson(chart, act, pi))
    report.extend(build_cotangent_differential(chart, act, pi).report)
    report.extend(check_coisotropic_stabilizers(act, points=sample_points(chart)).report)

    P = build_Gsmall(L)
    report.extend(check_graded_poisson(P), prefix="G_small: ")
    M = HamiltonianSpace(chart, act, pi, name="R3")
    report.extend(check_poisson_map(quasi_poisson_map(P, M)), prefix="G_small -> R3: ")
    return report


def build_sl2_conjugation(slow=False):
    G = special_linear_group()
    M = conjugation_space(G)
    points = sample_points(G)
    report = Report("sl2-conjugation")
    report.extend(check_action(M.action))
    report.extend(check_quasi_poisson(G, M.action, M.pi))
    report.extend(check_moment_map(M))
    report.extend(i_map_and_check(M, points).report)
    d = build_cotangent_differential(G, M.action, M.pi)
    report.extend(d.report)
    report.extend(oneform_bracket_and_anchor(G, M.action, M.pi, differential_map=d).report)

    P = build_Gbig(G.algebra, G=G)
    report.extend(check_graded_poisson(P), prefix="G_big: ")
    report.extend(check_poisson_map(quasi_poisson_map(P, M)), prefix="G_big -> G: ")

    _slow(report, slow, "G_big coassociativity", lambda: check_multiplication(P).report, prefix="G_big ")
    _slow(report, slow, "fused moment identity", lambda: check_moment_map(fuse_spaces(M, M)), prefix="fused ")
    _slow(
        report, slow, "crosscheck: t matches fused bivector",
        lambda: fusion_crosscheck(M, M, P).report, prefix="crosscheck: ",
    )
    _slow(report, slow, "cocycle isolates rho(psi)", lambda: _cocycle_control(M, P))
    _slow(report, slow, "J chain map", lambda: _fusion_algebroid(M))
    return report


def _cocycle_control(M, P):
    report = Report("cocycle control")
    check = fusion_crosscheck(M, M, P, include_cocycle=False)
    product = product_spaces(M, M)
    rho_psi = product.action.extend(fusion_element(product.action.algebra))
    report.add("cocycle isolates rho(psi)", check.residue == rho_psi, f"residue {check.residue}")
    return report


def _fusion_algebroid(M):
    report = fusion_algebroid_isomorphism(M, M)
    control = fusion_algebroid_isomorphism(M, M, include_correction=False)
    report.add(
        "J needs its correction term",
        control.status_of("J chain map") == FAIL,
        "J without correction is still a chain map",
    )
    return report


def build_double_sl2(slow=False):
    G = special_linear_group()
    points = sample_points(G)
    half = half_double(G)
    report = Report("double-sl2")
    report.extend(check_action(half.action))
    report.extend(check_quasi_poisson(G, half.action, half.pi))
    report.extend(check_quasi_symplectic(G, half.action, half.pi, points).report)
    report.extend(build_cotangent_differential(G, half.action, half.pi).report)

    bar = double_action(G, negate_second=True)
    report.extend(check_quasi_poisson(G, bar, half.pi), prefix="g+gbar: ")
    report.extend(check_coisotropic_stabilizers(bar, points=points).report, prefix="g+gbar: ")

    D = double_space(G)
    report.extend(check_quasi_poisson(D.chart, D.action, D.pi), prefix="D(G): ")
    report.extend(check_moment_map(D), prefix="D(G): ")
    return report


def build_amm_sl2(slow=False):
    G = special_linear_group()
    g = G.algebra
    Gamma = amm_groupoid(G)
    act_G, pi_G = conjugation_structure(G)
    report = Report("amm-sl2")
    report.extend(check_quasi_poisson(Gamma.chart, Gamma.action, Gamma.pi))
    report.extend(check_moment_map(Gamma))
    report.extend(check_qp_morphism(source_map(Gamma, G), (Gamma.action, Gamma.pi), (act_G, pi_G)), prefix="s: ")
    report.extend(
        check_qp_morphism(target_map(Gamma, G), (Gamma.action, Gamma.pi), (act_G, pi_G), anti=True),
        prefix="t: ",
    )
    report.extend(amm_groupoid_structure(g))
    _slow(report, slow, "graph of multiplication coisotropic", lambda: multiplication_coisotropy(Gamma, g))
    return report


def build_qp_bialgebra_sl2(slow=False):
    g = sl2_algebra()
    B = bialgebra_over_point(g)
    report = Report("qp-bialgebra-sl2")
    report.extend(check_qp_bialgebroid(B))
    report.extend(dual_differential_and_induced_bivector(B).report)

    def tangent():
        G = special_linear_group()
        M = conjugation_space(G)
        tb = tangent_bialgebroid(G, M.action, M.pi)
        out = Report("tangent bialgebroid")
        out.extend(check_qp_bialgebroid(tb.data))
        dual = dual_differential_and_induced_bivector(tb.data)
        out.extend(dual.report)
        cotangent = build_cotangent_differential(G, M.action, M.pi)
        out.extend(check_dual_matches_cotangent(tb, dual, cotangent))
        return out

    _slow(report, slow, "TG: D^2 = 1/2 [rho(phi), .]", tangent, prefix="TG: ")
    return report


def build_cartan_dirac_sl2(slow=False):
    G = special_linear_group()
    D = cartan_dirac(G)
    E = D.parent
    report = Report("cartan-dirac-sl2")
    report.extend(check_action(E.action))
    report.extend(check_coisotropic_stabilizers(E.action, E.inverse, sample_points(G)).report)

    witness = ""
    for a in range(E.rank):
        for b in range(E.rank):
            expected = E.section(E.algebra.bracket_basis(a, b))
            found = courant_bracket(E, E.basis(a), E.basis(b))
            if found != expected:
                witness = f"({E.names[a]}, {E.names[b]}): {found}"
                break
        if witness:
            break
    report.add("constant brackets are the bracket of d", not witness, witness)

    report.extend(check_dirac(D))
    _slow(report, slow, "A_G: C-1 jacobi", lambda: check_courant_axioms(E), prefix="A_G: ")
    return report


def build_manin_triple_q_so3(slow=False):
    L = so3_algebra()
    report = Report("manin-triple-Q-so3")
    Q = build_Q(L)
    report.extend(check_graded_lie(Q), prefix="Q(g): ")
    A = [Q.vector({"T": 1})] + [Q.vector({f"I_{b}": 1}) for b in L.basis_names]
    B = [Q.vector({f"L_{b}": 1}) for b in L.basis_names] + [Q.vector({"D": 1})]
    report.extend(check_manin_triple(Q, A, B), prefix="Q(g): ")

    Qd, A2, B2 = ghat_bialgebra_pair(L)
    report.extend(check_manin_triple(Qd, A2, B2), prefix="Q(d): ")
    report.add("rhat quasitriangular", check_rhat_quasitriangular(L), "Gr(rhat) is not an ideal")
    report.add("tilted graph is not an ideal", not check_rhat_quasitriangular(L, tilted=True), "")

    P = build_Gsmall(L)
    report.extend(check_graded_poisson(P), prefix="G_small: ")
    report.extend(check_multiplication(P).report, prefix="G_small ")
    return report


def build_gen_manin_triple_double_sl2(slow=False):
    g = sl2_algebra()
    f = double(g)
    n = g.dim
    h = [_unit(2 * n, i) for i in range(n)]
    k = [[1 if j in (i, n + i) else 0 for j in range(2 * n)] for i in range(n)]
    report = Report("gen-manin-triple-double-sl2")
    check = check_generalized_manin_triple(GeneralizedManinTriple(f, f.tensor(), h, k))
    report.extend(check.report)

    zero = [[0] * (2 * n) for _ in range(2 * n)]
    control = check_generalized_manin_triple(GeneralizedManinTriple(f, zero, h, k))
    report.add("s = 0 is valid but not exact", control.valid and not control.exact, "")
    report.extend(check_graded_lie(build_Qs(f, f.tensor())), prefix="Q_s: ")
    return report


def build_qp_group_quadruple_double(slow=False):
    g = sl2_algebra()
    f = double(g)
    n = g.dim
    diagonal = [[1 if j in (i, n + i) else 0 for j in range(2 * n)] for i in range(n)]
    first = [_unit(2 * n, i) for i in range(n)]
    Q = QPGroupQuadruple(g, f, diagonal, first, diagonal)
    report = Report("qp-group-quadruple-double")
    report.extend(quadruple_round_trip(Q).report)

    m = f.dim
    diag_f = [[1 if j in (i, n + i) else 0 for j in range(m)] for i in range(n)]
    identity = [_unit(m, a) + _unit(m, a) for a in range(m)]
    check = check_manin_pair_morphism_linear(LinearManinMorphism(f, f, diag_f, diag_f, identity))
    report.extend(check.report, prefix="identity: ")

    split = [v + [0] * m for v in diag_f] + [[0] * m + v for v in diag_f]
    control = check_manin_pair_morphism_linear(LinearManinMorphism(f, f, diag_f, diag_f, split))
    report.add(
        "A2 + A1 is not a graph",
        control.report.status_of("projection is a graph") == FAIL,
        "A2 + A1 projected to a graph",
    )
    return report


# ===============================
# REGISTRY
# ===============================
EXAMPLE_BUILDERS = {
    "abelian-r2": build_abelian_r2,
    "so3-trivial": build_so3_trivial,
    "sl2-conjugation": build_sl2_conjugation,
    "double-sl2": build_double_sl2,
    "amm-sl2": build_amm_sl2,
    "qp-bialgebra-sl2": build_qp_bialgebra_sl2,
    "cartan-dirac-sl2": build_cartan_dirac_sl2,
    "manin-triple-Q-so3": build_manin_triple_q_so3,
    "gen-manin-triple-double-sl2": build_gen_manin_triple_double_sl2,
    "qp-group-quadruple-double": build_qp_group_quadruple_double,
}

DESCRIPTIONS = {
    "abelian-r2": "graded suite for abelian R^2, translations on R^2, standard Courant algebroids",
    "so3-trivial": "trivial so(3) action on R^3 with pi = 0, G_small(so3)",
    "sl2-conjugation": "SL(2) with conjugation, pi_G and moment map the identity",
    "double-sl2": "(G, -xi^R + eta^L, 0) over g + g and the double D(G)",
    "amm-sl2": "fused double with source, target and groupoid structure",
    "qp-bialgebra-sl2": "sl(2) with rho = id and D = 0, and TG for the conjugation space",
    "cartan-dirac-sl2": "diagonal Dirac structure in SL(2) x (g + gbar)",
    "manin-triple-Q-so3": "Manin triples in Q(so3) and Q(so3 + so3bar), r-hat criterion",
    "gen-manin-triple-double-sl2": "generalized Manin triple (g + gbar, g + 0, diag g)",
    "qp-group-quadruple-double": "quadruple (g, g + gbar, diag g, g + 0) and its Manin pair morphism",
}

EXPECTED_PASS = {
    "abelian-r2": [
        "TR2: C-1 jacobi",
        "TR3 twisted: C-1 jacobi",
        "TR2 graph: involutive",
        "non-closed eta breaks jacobi",
    ],
    "so3-trivial": ["[pi,pi] = rho(phi)", "d^2 = 0", "G_small -> R3: brackets preserved"],
    "sl2-conjugation": [
        "[pi,pi] = rho(phi)",
        "moment identity",
        "a o i = rho",
        "i morphism",
        "d^2 = 0",
        "bracket matches d on frame",
        "G_big -> G: brackets preserved",
    ],
    "double-sl2": ["[pi,pi] = rho(phi)", "anchor generically invertible", "D(G): moment identity"],
    "amm-sl2": ["s: pi related", "t: pi anti-related", "associativity", "s(gh) = s(g)", "t(gh) = t(h)"],
    "qp-bialgebra-sl2": ["D^2 = 1/2 [rho(phi), .]", "d_A* squared = 0"],
    "cartan-dirac-sl2": ["isotropic", "involutive", "constant brackets are the bracket of d"],
    "manin-triple-Q-so3": ["Q(g): transversal", "Q(d): transversal", "rhat quasitriangular"],
    "gen-manin-triple-double-sl2": ["exact", "s = 0 is valid but not exact"],
    "qp-group-quadruple-double": [
        "quadruple: K lagrangian",
        "morphism: projection is a graph",
        "phi_K recovers rho",
        "A2 + A1 is not a graph",
    ],
}


@dataclass
class ExampleFixture:
    name: str
    builder: object
    description: str
    expected: list


def registry():
    return [
        ExampleFixture(name, builder, DESCRIPTIONS[name], EXPECTED_PASS[name])
        for name, builder in EXAMPLE_BUILDERS.items()
    ]


def run_fixture(name, slow=False, quiet=True):
    """Build and check one example; the last row compares with EXPECTED_PASS."""
    if name not in EXAMPLE_BUILDERS:
        raise KeyError(f"unknown example {name!r}")
    start = time.perf_counter()
    report = EXAMPLE_BUILDERS[name](slow=slow)
    elapsed = time.perf_counter() - start
    statuses = {o.name: o.status for o in report}
    missing = [row for row in EXPECTED_PASS[name] if statuses.get(row) != PASS]
    report.add("expected outcomes", not missing, f"not passing: {', '.join(missing)}", elapsed)
    if report.ok:
        announce(f"✔ {name}: {len(report)} checks", quiet)
    else:
        announce(f"⚠ {name}: {len(report.failures())} failing checks", quiet)
    return report
