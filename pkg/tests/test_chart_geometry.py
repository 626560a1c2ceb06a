import pytest
from sympy.polys.domains import QQ

from chart_geometry import (
    Chart,
    DifferentialForm,
    GAction,
    HamiltonianSpace,
    MatrixGroupChart,
    MultivectorField,
    PolyMap,
    apply_vector,
    bialgebra_over_point,
    braiding_map,
    check_action,
    check_coisotropic_stabilizers,
    check_coisotropic_subvariety,
    check_moment_map,
    check_qp_bialgebroid,
    check_qp_morphism,
    check_quasi_poisson,
    check_quasi_symplectic,
    coisotropy_witness,
    conjugation_space,
    contract,
    differential,
    dual_differential_and_induced_bivector,
    fuse,
    fuse_spaces,
    fusion_element,
    i_map_and_check,
    lie_derivative,
    identity_map,
    matrix_group_fields,
    oneform_bracket_and_anchor,
    pi_pair,
    preserves_ideal,
    product_chart,
    product_spaces,
    schouten,
    sharp,
    special_linear_group,
    twist_by_r_matrix,
)
from quadratic_lie import (
    ExteriorElement,
    abelian_algebra,
    direct_sum,
    from_matrices,
    sl2_algebra,
    so3_algebra,
)
from report import FAIL, PASS


@pytest.fixture(scope="module")
def sl2_group():
    return special_linear_group()


@pytest.fixture(scope="module")
def conjugation(sl2_group):
    return conjugation_space(sl2_group)


def r3():
    return Chart.affine(["x", "y", "z"], name="R3")


# ===============================
# MULTIVECTOR CALCULUS
# ===============================
def test_schouten_of_vector_fields_is_the_lie_bracket():
    chart = Chart.affine(["x", "y"])
    x, y = chart.gen("x"), chart.gen("y")
    X = MultivectorField(chart, {(1,): x})
    Y = MultivectorField(chart, {(0,): y})
    assert schouten(X, Y) == MultivectorField(chart, {(0,): x, (1,): -y})
    f = MultivectorField.function(chart, "x^2")
    assert schouten(MultivectorField.coordinate(chart, 0), f) == MultivectorField.function(chart, "2*x")


def test_schouten_of_a_decomposable_bivector():
    chart = r3()
    # (d_x) ^ (x d_y + d_z), with [d_x, x d_y + d_z] = d_y
    P = MultivectorField(chart, {(0, 1): chart.gen("x"), (0, 2): 1})
    assert schouten(P, P) == MultivectorField.coordinate(chart, 0, 1, 2).scale(-2)


def test_schouten_is_a_graded_lie_bracket():
    chart = r3()
    x, y, z = chart.gen("x"), chart.gen("y"), chart.gen("z")
    fields = [
        (1, MultivectorField(chart, {(0,): y * z, (2,): x})),
        (1, MultivectorField(chart, {(1,): x**2})),
        (2, MultivectorField(chart, {(0, 1): z, (1, 2): x * y})),
        (2, MultivectorField(chart, {(0, 2): y**2 + 1})),
    ]
    for p, P in fields:
        for q, Q in fields:
            sign = -1 if (p - 1) * (q - 1) % 2 else 1
            assert schouten(P, Q) == schouten(Q, P).scale(-sign)
    for p, P in fields:
        for q, Q in fields:
            sign = -1 if (p - 1) * (q - 1) % 2 else 1
            for _, R in fields:
                lhs = schouten(P, schouten(Q, R))
                rhs = schouten(schouten(P, Q), R) + schouten(Q, schouten(P, R)).scale(sign)
                assert lhs == rhs


def test_contractions():
    chart = Chart.affine(["x", "y"])
    pi = MultivectorField.coordinate(chart, 0, 1)
    dx, dy = DifferentialForm.coordinate(chart, 0), DifferentialForm.coordinate(chart, 1)
    assert sharp(pi, dx) == MultivectorField.coordinate(chart, 1)
    assert pi_pair(pi, dx, dy) == chart.ring.one
    assert contract(pi, [dy, dx]) == -chart.ring.one
    assert MultivectorField.coordinate(chart, 1, 0) == -pi

    df = differential(chart, "x*y")
    assert df.pair(MultivectorField.coordinate(chart, 0)) == chart.gen("y")
    assert apply_vector(MultivectorField.coordinate(chart, 1), "x*y^2") == chart.poly("2*x*y")


def test_lie_derivative_of_one_forms():
    chart = r3()
    x, y = chart.gen("x"), chart.gen("y")
    dx, dy = DifferentialForm.coordinate(chart, 0), DifferentialForm.coordinate(chart, 1)
    # L_{x d_z}(x dx) = x d_z(x) dx + x d(x d_z x) = 0
    assert lie_derivative(MultivectorField(chart, {(2,): x}), dx.scale(x)).is_zero()
    # L_{y d_x} dx = d(y)
    assert lie_derivative(MultivectorField(chart, {(0,): y}), dx) == dy
    # L_{x d_x}(y dx) = y dx
    assert lie_derivative(MultivectorField(chart, {(0,): x}), dx.scale(y)) == dx.scale(y)


def test_chart_rejects_points_off_the_variety():
    chart = Chart.affine(["a", "b"], ["a*b - 1"])
    assert chart.check_point([2, "1/2"]) == [QQ(2), QQ(1, 2)]
    with pytest.raises(ValueError):
        chart.check_point([1, 2])


def test_product_chart_suffixes_clashing_names():
    chart, p1, p2 = product_chart(r3(), r3())
    assert chart.variables[:3] == ("x_1", "y_1", "z_1")
    assert p2 == [3, 4, 5]
    assert len(chart.frame) == 6


# ===============================
# ACTIONS AND QUASI-POISSON STRUCTURES
# ===============================
def test_translations_and_broken_action():
    chart = Chart.affine(["x", "y"])
    L = abelian_algebra(2)
    act = GAction(L, [MultivectorField.coordinate(chart, c) for c in range(2)], chart)
    assert check_action(act).ok

    sheared = GAction(L, [MultivectorField.coordinate(chart, 0), MultivectorField(chart, {(1,): chart.gen("x")})])
    assert check_action(sheared).status_of("bracket relations") == FAIL


def test_trivial_action_with_poisson_bivector():
    chart = r3()
    act = GAction.trivial(so3_algebra(), chart)
    poisson = MultivectorField(chart, {(1, 2): chart.gen("x")})
    assert check_quasi_poisson(chart, act, poisson).ok

    # {x,y} = z, {x,z} = -x^3 fails jacobi
    bent = MultivectorField(chart, {(0, 1): chart.gen("z"), (0, 2): -chart.gen("x") ** 3})
    report = check_quasi_poisson(chart, act, bent)
    assert report.status_of("[pi,pi] = rho(phi)") == FAIL

    stabilizers = check_coisotropic_stabilizers(act, points=[[0, 0, 0], [1, 2, 3]])
    assert stabilizers.generic
    assert stabilizers.pointwise == [True, True]


def test_coisotropy_witness():
    chart = r3()
    pi = MultivectorField(chart, {(1, 2): chart.gen("x")})
    assert coisotropy_witness(chart, ["x", "y"], pi) == ""
    assert coisotropy_witness(chart, ["y", "z"], pi) != ""


def test_coisotropy_on_a_parametrized_line():
    chart = r3()
    pi = MultivectorField(chart, {(1, 2): chart.gen("x")})
    line = Chart.affine(["u"])
    x_axis = PolyMap(line, chart, ["u", "0", "0"])
    z_axis = PolyMap(line, chart, ["0", "0", "u"])
    assert not check_coisotropic_subvariety(chart, ["y", "z"], pi, x_axis)
    assert check_coisotropic_subvariety(chart, ["x", "y"], pi, z_axis)
    with pytest.raises(ValueError):
        check_coisotropic_subvariety(chart, ["x"], pi, x_axis)


def test_zero_anchor_is_not_quasi_symplectic():
    chart = Chart.affine(["x"])
    act = GAction.trivial(abelian_algebra(1), chart)
    check = check_quasi_symplectic(chart, act, MultivectorField.zero(chart))
    assert check.generic is False


# ===============================
# MATRIX GROUPS
# ===============================
def test_sl2_chart(sl2_group):
    G = sl2_group
    assert G.variables == ("x11", "x12", "x21", "x22")
    assert G.witness_ok
    assert G.ring.contains_point(G.identity_point())
    assert len(G.frame) == 3
    assert not preserves_ideal(MultivectorField.coordinate(G, 0))


def test_group_chart_needs_a_traceless_realization():
    with pytest.raises(ValueError):
        MatrixGroupChart(from_matrices("scalars", ["t"], [[[1]]]))
    with pytest.raises(ValueError):
        MatrixGroupChart(so3_algebra())


def test_invariant_fields(sl2_group):
    G = sl2_group
    fields = matrix_group_fields(G, [0, 1, 0])
    assert fields.report.ok
    at_identity = {k: v for k, v in fields.b.value(G.identity_point()).items() if v}
    assert at_identity == {(1,): 1}

    assert schouten(G.basis_left(1), G.basis_left(2)) == G.basis_left(0)
    assert schouten(G.basis_left(1), G.basis_right(2)).is_zero()


def test_conjugation_is_quasi_poisson(sl2_group, conjugation):
    M = conjugation
    assert check_action(M.action).ok
    assert check_quasi_poisson(sl2_group, M.action, M.pi).ok


def test_conjugation_moment_map(sl2_group, conjugation):
    M = conjugation
    report = check_moment_map(M)
    assert report.status_of("moment identity") == PASS
    assert report.status_of("equivariance") == PASS

    i_check = i_map_and_check(M, [sl2_group.identity_point()])
    assert i_check.report.status_of("a o i = rho") == PASS
    assert i_check.report.status_of("i morphism") == PASS


def test_conjugation_cotangent_bracket(sl2_group, conjugation):
    M = conjugation
    result = oneform_bracket_and_anchor(sl2_group, M.action, M.pi)
    assert result.report.status_of("anchor matches d on functions") == PASS
    assert result.report.status_of("bracket matches d on frame") == PASS


def test_constant_moment_map_fails(sl2_group, conjugation):
    G = sl2_group
    constant = PolyMap(G, G, G.identity_point(), name="const")
    M = HamiltonianSpace(G, conjugation.action, conjugation.pi, constant)
    assert check_moment_map(M).status_of("moment identity") == FAIL


def test_identity_is_a_quasi_poisson_morphism(sl2_group, conjugation):
    M = conjugation
    report = check_qp_morphism(identity_map(sl2_group), (M.action, M.pi), (M.action, M.pi))
    assert report.ok
    anti = check_qp_morphism(identity_map(sl2_group), (M.action, M.pi), (M.action, M.pi), anti=True)
    assert anti.status_of("pi anti-related") == FAIL


def test_twist_by_r_matrix(sl2_group, conjugation):
    L = conjugation.action.algebra
    u = ExteriorElement.basis(L, 1, 2).scale(QQ(1, 2))
    twisted, report = twist_by_r_matrix(sl2_group, conjugation.action, conjugation.pi, u)
    assert report.ok
    assert schouten(twisted, twisted).is_zero()


def test_twist_rejects_non_r_matrix():
    chart = r3()
    L = so3_algebra()
    act = GAction.trivial(L, chart)
    with pytest.raises(ValueError):
        twist_by_r_matrix(chart, act, MultivectorField.zero(chart), ExteriorElement.basis(L, 0, 1))


# ===============================
# BIALGEBROIDS
# ===============================
def test_bialgebra_over_a_point():
    B = bialgebra_over_point(sl2_algebra())
    assert check_qp_bialgebroid(B).status_of("D^2 = 1/2 [rho(phi), .]") == PASS
    dual = dual_differential_and_induced_bivector(B)
    assert dual.report.status_of("d_A* squared = 0") == PASS


# ===============================
# FUSION
# ===============================
def test_fusion_element():
    d = direct_sum(so3_algebra(), so3_algebra())
    psi = fusion_element(d)
    assert psi.coefficient(0, 3) == QQ(-1, 2)
    assert psi.coefficient(2, 5) == QQ(-1, 2)
    assert psi.coefficient(0, 4) == 0


def test_fusing_trivial_actions():
    chart = r3()
    act = GAction.trivial(direct_sum(so3_algebra(), so3_algebra()), chart)
    result = fuse(chart, act, MultivectorField.zero(chart))
    assert result.pi.is_zero()
    assert result.action.algebra.dim == 3


def test_fusion_needs_a_double():
    chart = r3()
    with pytest.raises(ValueError):
        fuse(chart, GAction.trivial(so3_algebra(), chart), MultivectorField.zero(chart))


@pytest.mark.slow
def test_fused_conjugation_spaces(conjugation):
    P = product_spaces(conjugation, conjugation)
    fused = fuse(P.chart, P.action, P.pi)
    assert check_quasi_poisson(P.chart, fused.action, fused.pi).ok
    bare = fuse(P.chart, P.action, P.pi, include_psi=False)
    assert check_quasi_poisson(P.chart, bare.action, bare.pi).status_of("[pi,pi] = rho(phi)") == FAIL


@pytest.mark.slow
def test_braiding_is_a_quasi_poisson_morphism(conjugation):
    M = conjugation
    f = braiding_map(M, M)
    assert f.source.dim == 8
    source, target = fuse_spaces(M, M), fuse_spaces(M, M)
    report = check_qp_morphism(f, (source.action, source.pi), (target.action, target.pi))
    assert report.ok
