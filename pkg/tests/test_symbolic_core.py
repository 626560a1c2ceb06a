import random

import pytest
from sympy.polys.domains import QQ

from polynomial_patterns import parse_rational, tokenize
import symbolic_core
from symbolic_core import (
    CoordinateRing,
    GradedPresentation,
    IdealTooLargeError,
    MissingRuleError,
    ParseError,
    RingMismatchError,
    apply_derivation,
    evaluate_polynomial,
    exterior_merge,
    graded_multiply,
    format_polynomial,
    ideal_member,
    normal_word,
    null_space,
    parse_graded,
    parse_polynomial,
    polynomial_determinant,
    rank_of,
    solve_in_span,
    substitute,
)


def plane():
    return CoordinateRing(["x", "y"], name="plane")


def sl2_ring():
    return CoordinateRing(["a", "b", "c", "d"], ["a*d - b*c - 1"], name="SL2")


# ===============================
# PARSING
# ===============================
def test_parse_and_format():
    R = plane()
    p = parse_polynomial("x^2 - 2*x*y + 1/2", R)
    x, y = R.gen("x"), R.gen("y")
    assert p == x**2 - x * y * 2 + R.constant(QQ(1, 2))
    assert format_polynomial(p) == "x^2 - 2*x*y + 1/2"


def test_printed_polynomials_parse_back():
    R = plane()
    for text in ["-x + y", "-3/4*x^3*y + 7", "(x - y)^3", "0"]:
        p = parse_polynomial(text, R)
        assert parse_polynomial(format_polynomial(p), R) == p


@pytest.mark.parametrize(
    "text, position",
    [
        ("x + * y", 4),
        ("x $ y", 2),
        ("2/0", 2),
        ("x^-1", 2),
        ("(x + y", 6),
        ("x + z", 4),
    ],
)
def test_parse_error_positions(text, position):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text, plane())
    assert info.value.position == position


def test_tokenizer_reports_bad_character():
    tokens, bad = tokenize("x + #")
    assert tokens is None and bad == 4


def test_parse_rational():
    assert parse_rational("-3/4") == QQ(-3, 4)
    assert parse_rational(" 5 ") == QQ(5)
    assert parse_rational("1/0") is None
    assert parse_rational("x") is None


# ===============================
# QUOTIENT RINGS
# ===============================
def test_reduction_modulo_determinant():
    R = sl2_ring()
    a, b, c, d = (R.gen(v) for v in "abcd")
    assert R.reduce(a * d - b * c) == R.one
    assert ideal_member(a * d - b * c - 1, R)
    assert not ideal_member(a * d, R)


def test_contains_point():
    R = sl2_ring()
    assert R.contains_point([1, 0, 0, 1])
    assert not R.contains_point([1, 1, 1, 1])
    with pytest.raises(ValueError):
        R.contains_point([1, 0])


def test_groebner_guard():
    big = CoordinateRing([f"v{i}" for i in range(40)], ["v0 - 1"])
    with pytest.raises(IdealTooLargeError):
        big.reduce(big.gen(0))
    steep = CoordinateRing(["x"], ["x^13 - 1"])
    with pytest.raises(IdealTooLargeError):
        steep.reduce(steep.gen(0))


def test_groebner_basis_of_a_non_coprime_ideal():
    R = CoordinateRing(["x", "y"], ["x^2 - y", "x*y - 1"])
    x, y = R.gen("x"), R.gen("y")
    # x^3 = x y = 1 and y^2 = x modulo the ideal
    assert R.reduce(x**3) == R.one
    assert R.reduce(y**2) == R.reduce(x)
    assert all(g.LC == 1 for g in R.groebner_basis)
    assert ideal_member(x**3 - 1, R)


def test_groebner_step_limit(monkeypatch):
    monkeypatch.setattr(symbolic_core, "GROEBNER_MAX_STEPS", 1)
    R = CoordinateRing(["x", "y"], ["x^2 - y", "x*y - 1"])
    with pytest.raises(IdealTooLargeError):
        R.reduce(R.gen("x"))


def test_reduction_is_a_ring_map():
    R = sl2_ring()
    rng = random.Random(7)
    gens = [R.gen(v) for v in "abcd"]

    def sample():
        p = R.zero
        for _ in range(4):
            term = R.constant(rng.randint(-3, 3))
            for _ in range(rng.randint(0, 3)):
                term *= rng.choice(gens)
            p += term
        return p

    for _ in range(10):
        p, q = sample(), sample()
        assert R.reduce(R.reduce(p)) == R.reduce(p)
        assert R.reduce(p * q) == R.reduce(R.reduce(p) * R.reduce(q))
        assert R.reduce(p + q) == R.reduce(p) + R.reduce(q)


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        plane().coerce(sl2_ring().gen(0))
    with pytest.raises(RingMismatchError):
        plane().gen("z")


def test_invalid_variable_names():
    with pytest.raises(ValueError):
        CoordinateRing(["x", "x"])
    with pytest.raises(ValueError):
        CoordinateRing(["1x"])


def test_evaluate_and_substitute():
    R = plane()
    p = parse_polynomial("x^2*y - 3", R)
    assert evaluate_polynomial(p, [2, QQ(1, 2)]) == QQ(-1)
    x, y = R.gen(0), R.gen(1)
    swapped = substitute(p, [y, x], R)
    assert swapped == parse_polynomial("y^2*x - 3", R)


def test_polynomial_determinant():
    R = sl2_ring()
    M = [[R.gen("a"), R.gen("b")], [R.gen("c"), R.gen("d")]]
    assert polynomial_determinant(M, R) == R.one


# ===============================
# LINEAR ALGEBRA
# ===============================
def test_linear_algebra():
    rows = [[1, 2, 3], [2, 4, 6]]
    assert rank_of(rows) == 1
    kernel = null_space(rows, 3)
    assert len(kernel) == 2
    for v in kernel:
        assert sum(QQ(a) * b for a, b in zip(rows[0], v)) == 0
    assert solve_in_span([[1, 0], [1, 1]], [3, 1]) == [QQ(2), QQ(1)]
    assert solve_in_span([[1, 0]], [0, 1]) is None


# ===============================
# GRADED WORDS
# ===============================
def test_koszul_signs():
    assert normal_word([1, 1], (1, 0)) == (-1, (0, 1))
    assert normal_word([2, 1], (1, 0)) == (1, (0, 1))
    assert normal_word([1, 1], (0, 0)) is None
    assert normal_word([2], (0, 0)) == (1, (0, 0))
    assert exterior_merge((0, 2), (1,)) == (-1, (0, 1, 2))
    assert exterior_merge((0,), (0,)) is None


def test_graded_commutativity():
    P = GradedPresentation(["a", "b", "t"], [1, 1, 2], plane())
    a, b, t = P.generator("a"), P.generator("b"), P.generator("t")
    assert a * b == -(b * a)
    assert (a * a).is_zero()
    assert t * a == a * t
    assert parse_graded("x*a*b - b*a*x", P) == (a * b).scale(P.body.gen("x")) * 2


def test_missing_rule():
    P = GradedPresentation(["a"], [1], plane())
    with pytest.raises(MissingRuleError):
        apply_derivation({}, 1, P.generator("a"))


def graded_samples(P, seed):
    rng = random.Random(seed)
    letters = [P.generator(n) for n in P.names]
    body = [P.body.gen(v) for v in P.body.variables]
    out = []
    for _ in range(6):
        word = P.one()
        for _ in range(rng.randint(1, 3)):
            word = word * rng.choice(letters)
        coefficient = P.body.constant(rng.randint(1, 3)) + rng.choice(body)
        out.append(word.scale(coefficient))
    return [w for w in out if not w.is_zero()]


def test_graded_product_is_associative():
    P = GradedPresentation(["a", "b", "t"], [1, 1, 2], plane())
    samples = graded_samples(P, 3)
    for u in samples:
        for v in samples:
            for w in samples[:3]:
                assert graded_multiply(graded_multiply(u, v), w) == graded_multiply(u, graded_multiply(v, w))


def test_derivation_satisfies_leibniz():
    P = GradedPresentation(["a", "b", "t"], [1, 1, 2], plane())
    a, b, t = P.generator("a"), P.generator("b"), P.generator("t")
    x = P.generator("x")
    rules = {"a": t, "b": a * b, "t": (a * t).scale(P.body.gen("y")), "x": a, "y": b.scale(P.body.gen("x"))}
    samples = [s for s in graded_samples(P, 5) if s.homogeneous_degree() is not None] + [x, a, t]
    for u in samples:
        sign = -1 if u.homogeneous_degree() % 2 else 1
        for v in samples:
            lhs = apply_derivation(rules, 1, u * v)
            rhs = apply_derivation(rules, 1, u) * v + (u * apply_derivation(rules, 1, v)).scale(sign)
            assert lhs == rhs
