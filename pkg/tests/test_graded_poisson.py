import pytest

from chart_geometry import (
    Chart,
    GAction,
    HamiltonianSpace,
    MultivectorField,
    PolyMap,
    check_moment_map,
    check_quasi_poisson,
    conjugation_space,
    special_linear_group,
)
from graded_poisson import (
    GradedPoissonMap,
    build_Gbig,
    build_Gsmall,
    check_graded_poisson,
    check_multiplication,
    check_poisson_map,
    graded_to_multivector,
    multivector_presentation,
    multivector_to_graded,
    quasi_poisson_map,
    tensor_power,
)
from quadratic_lie import abelian_algebra, sl2_algebra, so3_algebra
from report import FAIL, PASS
from symbolic_core import RingMismatchError


def r3():
    return Chart.affine(["x", "y", "z"], name="R3")


# ===============================
# PRESENTATIONS
# ===============================
def test_gsmall_table():
    P = build_Gsmall(so3_algebra())
    assert P.presentation.names == ("t", "xi_e1", "xi_e2", "xi_e3")
    assert P.presentation.degrees == (2, 1, 1, 1)
    assert P(P.xi(0), P.xi(1)) == P.xi(2)
    assert P(P.generator("t"), P.generator("t")).homogeneous_degree() == 3


@pytest.mark.parametrize("L", [so3_algebra(), sl2_algebra()], ids=lambda L: L.name)
def test_gsmall_is_graded_poisson(L):
    assert check_graded_poisson(build_Gsmall(L)).ok


def test_multivector_presentation():
    chart = r3()
    S = multivector_presentation(chart)
    assert check_graded_poisson(S).ok
    X = MultivectorField(chart, {(0, 2): chart.gen("y"), (1,): 1})
    assert graded_to_multivector(S, multivector_to_graded(S, X)) == X
    with pytest.raises(RingMismatchError):
        multivector_to_graded(S, MultivectorField.zero(Chart.affine(["u"])))


def test_gbig_table():
    G = special_linear_group()
    P = build_Gbig(G.algebra, G=G)
    report = check_graded_poisson(P)
    assert report.status_of("degree homogeneity") == PASS
    assert report.status_of("antisymmetry") == PASS

    rho_h = G.basis_left(0) - G.basis_right(0)
    value = P.bracket.lookup("xi_h", "x12")
    assert value == P.presentation.scalar(rho_h.coefficient(1))


def test_gbig_needs_matching_group():
    with pytest.raises(ValueError):
        build_Gbig(abelian_algebra(2), G=special_linear_group())


def test_tensor_power_names():
    T = tensor_power(build_Gsmall(so3_algebra()), 2)
    assert T.presentation.names[:2] == ("t_1", "xi_e1_1")
    assert len(T.presentation.names) == 8
    assert T(T.generator("xi_e1_1"), T.generator("xi_e2_2")).is_zero()


# ===============================
# POISSON MAPS
# ===============================
def test_trivial_space_receives_gsmall():
    chart = r3()
    L = so3_algebra()
    M = HamiltonianSpace(chart, GAction.trivial(L, chart), MultivectorField.zero(chart), name="R3")
    assert check_poisson_map(quasi_poisson_map(build_Gsmall(L), M)).ok


def test_wrong_degree_image():
    chart = r3()
    P = build_Gsmall(so3_algebra())
    S = multivector_presentation(chart)
    images = {name: S.zero() for name in P.generator_names()}
    images["t"] = S.generator("d_x")
    report = check_poisson_map(GradedPoissonMap(S, P, images))
    assert report.status_of("degree preserving") == FAIL

    del images["xi_e1"]
    with pytest.raises(ValueError):
        GradedPoissonMap(S, P, images)


def test_conjugation_map_respects_relations():
    G = special_linear_group()
    P = build_Gbig(G.algebra, G=G)
    F = quasi_poisson_map(P, conjugation_space(G))
    report = check_poisson_map(F)
    assert report.status_of("degree preserving") == PASS
    assert report.status_of("relations preserved") == PASS


def test_gbig_map_needs_moment():
    G = special_linear_group()
    M = conjugation_space(G)
    M.moment = None
    with pytest.raises(ValueError):
        quasi_poisson_map(build_Gbig(G.algebra, G=G), M)


def trivial_r3(bivector):
    chart = r3()
    pi = MultivectorField(chart, {k: chart.poly(v) for k, v in bivector.items()})
    return HamiltonianSpace(chart, GAction.trivial(so3_algebra(), chart), pi, name="R3")


def conjugation_variant(kind):
    G = special_linear_group()
    M = conjugation_space(G)
    if kind == "double bivector":
        return HamiltonianSpace(G, M.action, M.pi.scale(2), M.moment, name="SL2")
    if kind == "constant moment":
        return HamiltonianSpace(G, M.action, M.pi, PolyMap(G, G, G.identity_point(), name="const"), name="SL2")
    return M


@pytest.mark.parametrize(
    "build, quasi_poisson",
    [
        (lambda: trivial_r3({(1, 2): "x"}), True),
        (lambda: trivial_r3({(0, 1): "z", (0, 2): "-x^3"}), False),
        (lambda: conjugation_variant("conjugation"), True),
        (lambda: conjugation_variant("double bivector"), False),
        (lambda: conjugation_variant("constant moment"), False),
    ],
    ids=["poisson-r3", "bent-r3", "conjugation", "double-bivector", "constant-moment"],
)
def test_poisson_map_agrees_with_the_geometric_checks(build, quasi_poisson):
    M = build()
    L = M.action.algebra
    P = build_Gsmall(L) if M.moment is None else build_Gbig(L, G=M.chart)
    geometric = check_quasi_poisson(M.chart, M.action, M.pi).ok and (M.moment is None or check_moment_map(M).ok)
    assert geometric == quasi_poisson
    assert check_poisson_map(quasi_poisson_map(P, M)).ok == quasi_poisson


# ===============================
# MULTIPLICATION
# ===============================
def test_gsmall_multiplication_is_coassociative():
    check = check_multiplication(build_Gsmall(so3_algebra()))
    assert check.report.status_of("coassociativity") == PASS
    assert check.report.status_of("mult* degree preserving") == PASS
    bare = check_multiplication(build_Gsmall(so3_algebra()), include_cocycle=False)
    assert bare.report.status_of("coassociativity") == PASS


@pytest.mark.slow
def test_gbig_multiplication_is_coassociative():
    G = special_linear_group()
    check = check_multiplication(build_Gbig(G.algebra, G=G))
    assert check.report.status_of("coassociativity") == PASS
