from dataclasses import replace

import pytest
from sympy.polys.domains import QQ

from quadratic_lie import (
    ExteriorElement,
    GeneralizedManinTriple,
    QPGroupQuadruple,
    abelian_algebra,
    build_ghat,
    build_Q,
    build_Qs,
    cartan_trivector,
    check_generalized_manin_triple,
    check_graded_lie,
    check_invariant_form,
    check_lie_algebra,
    check_manin_triple,
    check_qp_group_quadruple,
    check_r_matrix,
    check_rhat_quasitriangular,
    direct_sum,
    double,
    gerstenhaber_bracket,
    ghat_bialgebra_pair,
    lie_algebra,
    sl2_algebra,
    so3_algebra,
    solve_r_matrix_scale,
)
from report import FAIL, PASS


def unit(n, i):
    return [1 if j == i else 0 for j in range(n)]


def diagonal(n):
    return [[1 if j in (i, n + i) else 0 for j in range(2 * n)] for i in range(n)]


# ===============================
# LIE ALGEBRAS
# ===============================
def test_sl2_structure_constants():
    L = sl2_algebra()
    assert L.basis_names == ("h", "e", "f")
    assert L.bracket_basis(0, 1) == [0, 2, 0]
    assert L.bracket_basis(1, 2) == [1, 0, 0]
    # trace form
    assert L.form[0][0] == 2 and L.form[1][2] == 1 and L.form[1][1] == 0


@pytest.mark.parametrize("L", [abelian_algebra(2), so3_algebra(), sl2_algebra()], ids=lambda L: L.name)
def test_builtin_algebras_are_lie(L):
    assert check_lie_algebra(L).ok
    assert check_invariant_form(L, L.form)
    assert check_invariant_form(L, L.tensor(), kind="tensor")


def test_jacobi_failure_is_reported():
    L = lie_algebra("broken", ["a", "b", "c"], {(0, 1): {2: 1}, (0, 2): {0: 1}})
    report = check_lie_algebra(L)
    assert report.status_of("antisymmetry") == PASS
    assert report.status_of("jacobi") == FAIL


def test_antisymmetry_failure_is_reported():
    L = lie_algebra("lopsided", ["a", "b", "c"], {(0, 1): {2: 1}, (1, 0): {2: 1}})
    assert check_lie_algebra(L).status_of("antisymmetry") == FAIL


def test_identity_form_on_sl2_is_not_invariant():
    assert not check_invariant_form(sl2_algebra(), [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_asymmetric_form_is_rejected():
    with pytest.raises(ValueError):
        check_invariant_form(so3_algebra(), [[1, 1, 0], [0, 1, 0], [0, 0, 1]])


def test_double_negates_second_form():
    d = double(so3_algebra())
    assert d.dim == 6
    assert d.form[0][0] == 1 and d.form[3][3] == -1
    same = direct_sum(so3_algebra(), so3_algebra())
    assert same.form[3][3] == 1


# ===============================
# EXTERIOR ALGEBRA AND R-MATRICES
# ===============================
def test_gerstenhaber_on_vectors_is_the_bracket():
    L = sl2_algebra()
    h, e = ExteriorElement.basis(L, 0), ExteriorElement.basis(L, 1)
    assert gerstenhaber_bracket(h, e) == e.scale(2)


def test_cartan_trivector_of_sl2():
    phi = cartan_trivector(sl2_algebra()).phi
    assert phi.degree == 3
    assert phi.coefficient(0, 1, 2) == QQ(-1, 2)


def test_r_matrix_scale():
    L = sl2_algebra()
    he = ExteriorElement.basis(L, 0, 1)
    assert gerstenhaber_bracket(he, he).is_zero()
    assert solve_r_matrix_scale(L, he) is None

    ef = ExteriorElement.basis(L, 1, 2)
    c = solve_r_matrix_scale(L, ef)
    assert c == QQ(1, 2)
    check = check_r_matrix(L, ef.scale(c))
    assert check.is_r_matrix
    assert check.report.status_of("[u,u] = -phi") == PASS
    assert not check_r_matrix(L, ef).is_r_matrix


def test_r_matrix_rejects_vectors():
    L = so3_algebra()
    with pytest.raises(ValueError):
        check_r_matrix(L, ExteriorElement.basis(L, 0))


# ===============================
# GRADED LIE ALGEBRAS
# ===============================
@pytest.mark.parametrize("L", [abelian_algebra(2), so3_algebra(), sl2_algebra()], ids=lambda L: L.name)
def test_graded_constructions(L):
    assert check_graded_lie(build_ghat(L)).ok
    assert check_graded_lie(build_Q(L)).ok
    assert check_graded_lie(build_Qs(L, L.tensor())).ok


def test_ghat_degrees():
    G = build_ghat(so3_algebra())
    assert G.degrees == (-1, -1, -1, 0, 0, 0, 1)
    assert G.bracket(G.vector({"D": 1}), G.vector({"I_e1": 1})) == G.vector({"L_e1": 1})


def test_manin_triple_in_Q():
    L = so3_algebra()
    Q = build_Q(L)
    A = [Q.vector({"T": 1})] + [Q.vector({f"I_{b}": 1}) for b in L.basis_names]
    B = [Q.vector({f"L_{b}": 1}) for b in L.basis_names] + [Q.vector({"D": 1})]
    assert check_manin_triple(Q, A, B).ok
    assert check_manin_triple(Q, A, A).status_of("transversal") == FAIL
    with pytest.raises(ValueError):
        check_manin_triple(Q, [[1, 0]], B)


def test_manin_triple_of_the_double():
    Qd, A, B = ghat_bialgebra_pair(so3_algebra())
    assert check_manin_triple(Qd, A, B).status_of("transversal") == PASS


def test_rhat_graph():
    assert check_rhat_quasitriangular(so3_algebra())
    assert not check_rhat_quasitriangular(so3_algebra(), tilted=True)


# ===============================
# GENERALIZED MANIN TRIPLES
# ===============================
def test_generalized_manin_triple_on_double():
    g = sl2_algebra()
    f = double(g)
    h = [unit(6, i) for i in range(3)]
    k = diagonal(3)
    check = check_generalized_manin_triple(GeneralizedManinTriple(f, f.tensor(), h, k))
    assert check.report.ok
    assert check.valid and check.transitive and check.exact

    zero = [[0] * 6 for _ in range(6)]
    control = check_generalized_manin_triple(GeneralizedManinTriple(f, zero, h, k))
    assert control.valid
    assert not control.transitive and not control.exact


def test_generalized_manin_triple_needs_subalgebra():
    f = double(so3_algebra())
    h = [unit(6, 0), unit(6, 1)]
    k = diagonal(3) + [unit(6, 5)]
    check = check_generalized_manin_triple(GeneralizedManinTriple(f, f.tensor(), h, k))
    assert check.report.status_of("decomposition f = h + k") == PASS
    assert check.report.status_of("h subalgebra") == FAIL
    assert not check.valid


# ===============================
# QUASI-POISSON GROUP QUADRUPLES
# ===============================
def test_quadruple_from_the_double():
    g = sl2_algebra()
    f = double(g)
    first = [unit(6, i) for i in range(3)]
    check = check_qp_group_quadruple(QPGroupQuadruple(g, f, diagonal(3), first, diagonal(3)))
    assert check.report.ok
    assert len(check.K) == 6
    assert check.rho_star == [unit(3, i) for i in range(3)]


def test_quadruple_with_zero_rho_is_not_isometric():
    g = sl2_algebra()
    f = double(g)
    first = [unit(6, i) for i in range(3)]
    zero = [[0] * 6 for _ in range(3)]
    check = check_qp_group_quadruple(QPGroupQuadruple(g, f, diagonal(3), first, zero))
    names = [o.name for o in check.report.failures()]
    assert "(2) rho* isometric" in names
    assert check.report.status_of("rho morphism") == PASS


def test_quadruple_rejects_short_rho():
    g = sl2_algebra()
    f = double(g)
    with pytest.raises(ValueError):
        check_qp_group_quadruple(QPGroupQuadruple(g, f, diagonal(3), [], []))


def test_manin_triple_needs_a_nondegenerate_pairing():
    Qd, A, B = ghat_bialgebra_pair(so3_algebra())
    flat = replace(Qd, pairing=tuple(tuple(QQ(0) for _ in range(Qd.dim)) for _ in range(Qd.dim)))
    with pytest.raises(ValueError, match="degenerate"):
        check_manin_triple(flat, A, B)


# ===============================
# DUAL BASES
# ===============================
@pytest.mark.parametrize("L", [so3_algebra(), sl2_algebra(), double(sl2_algebra())], ids=lambda L: L.name)
def test_dual_basis_expansion(L):
    S = L.tensor()
    x = [QQ(i + 1, 2) for i in range(L.dim)]
    # e^i = sum_j S_ij e_j
    weights = [sum((S[i][j] * L.pair(x, L.basis_vector(j)) for j in range(L.dim)), QQ(0)) for i in range(L.dim)]
    assert weights == x
