import pytest
from sympy.polys.domains import QQ

from chart_geometry import Chart, DifferentialForm, GAction, MultivectorField, special_linear_group
from courant import (
    DEFAULT_DEGREE_CAP,
    DEGREE_CAP_VARIABLE,
    CourantData,
    LinearManinMorphism,
    action_courant,
    bivector_graph,
    cartan_dirac,
    check_courant_axioms,
    check_dirac,
    check_manin_pair_morphism_linear,
    cotangent_bundle,
    courant_bracket,
    degree_cap,
    exterior_derivative,
    quadruple_round_trip,
    sample_points,
    standard_courant,
    standard_section,
    tangent_bundle,
    two_form_graph,
)
from quadratic_lie import QPGroupQuadruple, abelian_algebra, double, sl2_algebra, so3_algebra
from report import FAIL, INCONCLUSIVE, PASS
from symbolic_core import RingMismatchError

AXIOMS = ["C-1 jacobi", "C-2 invariance", "C-3 symmetric part", "anchor bracket"]


def r3():
    return Chart.affine(["x", "y", "z"], name="R3")


def volume(chart):
    return DifferentialForm.coordinate(chart, 0, 1, 2)


def unit(n, i):
    return [1 if j == i else 0 for j in range(n)]


def diagonal(n):
    return [[1 if j in (i, n + i) else 0 for j in range(2 * n)] for i in range(n)]


# ===============================
# CONFIGURATION
# ===============================
def test_degree_cap_from_environment(monkeypatch):
    monkeypatch.delenv(DEGREE_CAP_VARIABLE, raising=False)
    assert degree_cap() == DEFAULT_DEGREE_CAP
    monkeypatch.setenv(DEGREE_CAP_VARIABLE, " ")
    assert degree_cap() == DEFAULT_DEGREE_CAP
    monkeypatch.setenv(DEGREE_CAP_VARIABLE, "2")
    assert degree_cap() == 2


@pytest.mark.parametrize("raw", ["two", "-1", "1.5"])
def test_degree_cap_rejects_bad_values(monkeypatch, raw):
    monkeypatch.setenv(DEGREE_CAP_VARIABLE, raw)
    with pytest.raises(ValueError):
        degree_cap()


# ===============================
# STANDARD ALGEBROIDS
# ===============================
def test_standard_frame_and_pairing():
    chart = Chart.affine(["x", "y"], name="R2")
    E = standard_courant(chart)
    assert E.rank == 4
    assert E.names == ["d_x", "d_y", "dx", "dy"]
    assert E.pair(E.basis(0), E.basis(2)) == chart.ring.one
    assert not E.pair(E.basis(0), E.basis(1))
    assert E.anchor_of(E.basis(3)).is_zero()


def test_standard_bracket_is_the_dorfman_bracket():
    chart = Chart.affine(["x", "y"])
    E = standard_courant(chart)
    d_x = MultivectorField.coordinate(chart, 0)
    x_dy = DifferentialForm(chart, {(1,): chart.gen("x")})
    dy = DifferentialForm.coordinate(chart, 1)
    # L_{d_x}(x dy) = dy, and i_{d_x} d(x dy) = dy enters with a minus sign
    assert courant_bracket(E, standard_section(E, X=d_x), standard_section(E, alpha=x_dy)) == standard_section(
        E, alpha=dy
    )
    assert courant_bracket(E, standard_section(E, alpha=x_dy), standard_section(E, X=d_x)) == standard_section(
        E, alpha=-dy
    )


def test_standard_axioms():
    E = standard_courant(Chart.affine(["x", "y"], name="R2"))
    report = check_courant_axioms(E)
    assert report.status_of("eta closed") == PASS
    for row in AXIOMS:
        assert report.status_of(row) == PASS


def test_axioms_on_mixed_coordinate_sections():
    chart = Chart.affine(["x", "y"], name="R2")
    E = standard_courant(chart)
    x, y = chart.gen("x"), chart.gen("y")
    y_dx = MultivectorField(chart, {(0,): y})
    x_dy = DifferentialForm(chart, {(1,): x})
    family = E.frame + [standard_section(E, X=y_dx), standard_section(E, alpha=x_dy)]
    report = check_courant_axioms(E, generating=family)
    for row in AXIOMS:
        assert report.status_of(row) == PASS
    # [[y d_x, x dy]] = L_{y d_x}(x dy) = y dy
    bracket = courant_bracket(E, standard_section(E, X=y_dx), standard_section(E, alpha=x_dy))
    assert bracket == standard_section(E, alpha=DifferentialForm(chart, {(1,): y}))


def test_closed_twist_keeps_the_axioms():
    chart = r3()
    E = standard_courant(chart, volume(chart))
    assert E.name == "TR3 twisted"
    assert check_courant_axioms(E).ok


def test_non_closed_twist_breaks_jacobi():
    R4 = Chart.affine(["x1", "x2", "x3", "x4"], name="R4")
    E = standard_courant(R4, DifferentialForm(R4, {(1, 2, 3): R4.gen(0)}))
    report = check_courant_axioms(E, generating=E.frame)
    assert report.status_of("eta closed") == FAIL
    assert report.status_of("C-1 jacobi") == FAIL


def test_standard_courant_rejects_bad_input():
    chart = r3()
    with pytest.raises(ValueError):
        standard_courant(chart, DifferentialForm.coordinate(chart, 0, 1))
    with pytest.raises(ValueError):
        standard_courant(Chart.affine(["a", "b"], ["a*b - 1"]))
    with pytest.raises(RingMismatchError):
        standard_courant(chart, volume(Chart.affine(["u", "v", "w"])))


def test_courant_data_validates_pairing():
    chart = Chart.affine(["x"])
    anchor = [MultivectorField.zero(chart)] * 2
    with pytest.raises(ValueError):
        CourantData(chart, [[1, 1], [0, 1]], anchor, "standard")
    with pytest.raises(ValueError):
        CourantData(chart, [[1, 1], [1, 1]], anchor, "standard")
    with pytest.raises(ValueError):
        CourantData(chart, [[1, 0], [0, 1]], anchor, "mixed")


def test_sections_of_different_algebroids_do_not_mix():
    E1 = standard_courant(Chart.affine(["x"]))
    E2 = standard_courant(Chart.affine(["x"]))
    with pytest.raises(RingMismatchError):
        courant_bracket(E1, E1.basis(0), E2.basis(0))
    with pytest.raises(RingMismatchError):
        E1.basis(0) + E2.basis(0)


def test_exterior_derivative():
    chart = Chart.affine(["x", "y"])
    x_dy = DifferentialForm(chart, {(1,): chart.gen("x")})
    assert exterior_derivative(x_dy) == DifferentialForm.coordinate(chart, 0, 1)
    assert exterior_derivative(DifferentialForm.coordinate(chart, 0)).is_zero()


# ===============================
# ACTION ALGEBROIDS
# ===============================
def test_action_algebroid_of_a_trivial_action():
    chart = r3()
    L = so3_algebra()
    E = action_courant(L, GAction.trivial(L, chart))
    assert E.names == ["e1", "e2", "e3"]
    assert courant_bracket(E, E.basis(0), E.basis(1)) == E.section(L.bracket_basis(0, 1))
    report = check_courant_axioms(E)
    for row in AXIOMS:
        assert report.status_of(row) == PASS


def test_action_algebroid_needs_matching_fields():
    chart = r3()
    with pytest.raises(ValueError):
        action_courant(so3_algebra(), GAction.trivial(abelian_algebra(2), chart))


# ===============================
# DIRAC STRUCTURES
# ===============================
def test_tangent_and_cotangent_bundles():
    E = standard_courant(Chart.affine(["x", "y"], name="R2"))
    assert check_dirac(tangent_bundle(E)).ok
    assert check_dirac(cotangent_bundle(E)).ok


def test_graph_of_a_poisson_bivector():
    chart = r3()
    E = standard_courant(chart)
    poisson = MultivectorField(chart, {(1, 2): chart.gen("x")})
    report = check_dirac(bivector_graph(E, poisson))
    assert report.status_of("isotropic") == PASS
    assert report.status_of("involutive") == PASS

    bent = MultivectorField(chart, {(0, 1): chart.gen("z"), (0, 2): -chart.gen("x") ** 3})
    report = check_dirac(bivector_graph(E, bent))
    assert report.status_of("isotropic") == PASS
    assert report.status_of("involutive") == FAIL


def test_involutivity_beyond_the_degree_cap_is_inconclusive():
    chart = r3()
    E = standard_courant(chart)
    D = bivector_graph(E, MultivectorField(chart, {(1, 2): chart.gen("x")}))
    # [[y s1, z s2]] needs quadratic coefficients in the graph sections
    assert check_dirac(D, cap=0).status_of("involutive") == INCONCLUSIVE
    assert check_dirac(D, cap=2).status_of("involutive") == PASS
    assert check_dirac(D, cap=0, multiples=False).status_of("involutive") == PASS
    assert check_dirac(D, cap=0).exit_code() == 3


def test_graph_of_a_two_form_in_the_twisted_algebroid():
    chart = r3()
    E = standard_courant(chart, volume(chart))
    x = chart.gen("x")
    assert check_dirac(two_form_graph(E, DifferentialForm(chart, {(1, 2): -x}))).ok
    wrong = check_dirac(two_form_graph(E, DifferentialForm(chart, {(1, 2): x})))
    assert wrong.status_of("involutive") == FAIL


def test_half_rank_is_checked_pointwise():
    chart = Chart.affine(["x", "y"])
    E = standard_courant(chart)
    D = tangent_bundle(E)
    D.span = D.span[:1]
    report = check_dirac(D, points=[[0, 0]])
    assert [o.status for o in report if o.name.startswith("half rank")] == [FAIL]


def test_graph_rejects_foreign_bivector():
    E = standard_courant(r3())
    with pytest.raises(RingMismatchError):
        bivector_graph(E, MultivectorField.zero(Chart.affine(["u"])))


def test_sample_points():
    assert sample_points(Chart.affine(["x", "y"])) == [[0, 0], [1, 2]]
    assert sample_points(Chart.affine(["a", "b"], ["a*b - 1"])) == []
    G = special_linear_group()
    assert sample_points(G) == [[1, 0, 0, 1], [1, 1, 0, 1]]


@pytest.mark.slow
def test_cartan_dirac_structure():
    D = cartan_dirac(special_linear_group())
    assert D.parent.rank == 6
    report = check_dirac(D)
    assert report.status_of("isotropic") == PASS
    assert report.status_of("involutive") == PASS


def test_cartan_dirac_needs_a_matrix_group():
    with pytest.raises(ValueError):
        cartan_dirac(r3())


# ===============================
# MANIN PAIR MORPHISMS
# ===============================
def test_identity_morphism_of_the_double():
    f = double(sl2_algebra())
    m = f.dim
    A = diagonal(3)
    identity = [unit(m, a) + unit(m, a) for a in range(m)]
    check = check_manin_pair_morphism_linear(LinearManinMorphism(f, f, A, A, identity))
    assert check.report.ok
    assert check.phi == [[QQ(1) if i == j else QQ(0) for i in range(3)] for j in range(3)]


def test_split_subspace_is_not_a_graph():
    f = double(sl2_algebra())
    m = f.dim
    A = diagonal(3)
    split = [v + [0] * m for v in A] + [[0] * m + v for v in A]
    check = check_manin_pair_morphism_linear(LinearManinMorphism(f, f, A, A, split))
    assert check.report.status_of("projection is a graph") == FAIL
    assert check.phi is None


def test_manin_morphism_rejects_wrong_lengths():
    f = double(sl2_algebra())
    with pytest.raises(ValueError):
        check_manin_pair_morphism_linear(LinearManinMorphism(f, f, [[1, 0]], diagonal(3), []))


def test_quadruple_round_trip():
    g = sl2_algebra()
    f = double(g)
    Q = QPGroupQuadruple(g, f, diagonal(3), [unit(6, i) for i in range(3)], diagonal(3))
    trip = quadruple_round_trip(Q)
    assert trip.report.status_of("phi_K recovers rho") == PASS
    assert trip.report.status_of("quadruple: K lagrangian") == PASS
    assert trip.report.status_of("morphism: projection is a graph") == PASS
