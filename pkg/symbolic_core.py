# symbolic_core.py
"""
Exact arithmetic underneath every check: polynomials over QQ, quotient
rings with a cached Groebner basis, small exact linear algebra, and
graded-commutative words with Koszul signs.
"""

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from polynomial_patterns import format_rational, is_identifier, parse_rational, tokenize

# ===============================
# LIMITS
# ===============================
GROEBNER_MAX_GENERATORS = 32
GROEBNER_MAX_VARIABLES = 36
GROEBNER_MAX_DEGREE = 12
GROEBNER_MAX_STEPS = 400     # S-pair reductions before giving up


# ===============================
# ERRORS
# ===============================
class ParseError(ValueError):
    def __init__(self, reason, position):
        super().__init__(f"{reason} at position {position}")
        self.reason = reason
        self.position = position


class IdealTooLargeError(RuntimeError):
    pass


class RingMismatchError(ValueError):
    pass


class MissingRuleError(LookupError):
    pass


# ===============================
# COORDINATE RINGS
# ===============================
def qq(value):
    """Exact rational from int, QQ element or "p/q" text."""
    if isinstance(value, str):
        parsed = parse_rational(value)
        if parsed is None:
            raise ValueError(f"not a rational literal: {value!r}")
        return parsed
    return QQ.convert(value)


class CoordinateRing:
    """
    QQ[variables] / ideal, grevlex in declared variable order.
    The Groebner basis is computed on first use and cached.
    """

    def __init__(self, variables, ideal=(), name=""):
        self.variables = tuple(variables)
        self.name = name
        for v in self.variables:
            if not is_identifier(v):
                raise ValueError(f"invalid variable name: {v!r}")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")

        self.poly_ring = PolyRing(list(self.variables), QQ, grevlex)
        self._basis = None

        generators = []
        for g in ideal:
            if isinstance(g, str):
                g = parse_polynomial(g, self, reduce=False)
            elif not isinstance(g, PolyElement) or g.ring != self.poly_ring:
                raise RingMismatchError("ideal generator outside the ring")
            if g:
                generators.append(g)
        self.ideal_generators = tuple(generators)

    def __repr__(self):
        return f"CoordinateRing({self.name or ','.join(self.variables)})"

    def __eq__(self, other):
        return (
            isinstance(other, CoordinateRing)
            and self.variables == other.variables
            and self.ideal_generators == other.ideal_generators
        )

    def __hash__(self):
        return hash(self.variables)

    @property
    def ngens(self):
        return len(self.variables)

    @property
    def zero(self):
        return self.poly_ring.zero

    @property
    def one(self):
        return self.poly_ring.one

    def gen(self, name_or_index):
        if isinstance(name_or_index, str):
            if name_or_index not in self.variables:
                raise RingMismatchError(f"unknown variable {name_or_index!r}")
            name_or_index = self.variables.index(name_or_index)
        return self.poly_ring.gens[name_or_index]

    def constant(self, value):
        return self.poly_ring.ground_new(qq(value))

    def coerce(self, value):
        if isinstance(value, PolyElement):
            if value.ring != self.poly_ring:
                raise RingMismatchError(
                    f"polynomial from {value.ring.symbols} used in {self}"
                )
            return value
        return self.constant(value)

    @property
    def groebner_basis(self):
        if self._basis is None:
            self._basis = self._compute_basis()
        return self._basis

    def _compute_basis(self):
        gens = list(self.ideal_generators)
        if not gens:
            return ()

        if len(gens) > GROEBNER_MAX_GENERATORS:
            raise IdealTooLargeError(
                f"{len(gens)} generators exceed the limit {GROEBNER_MAX_GENERATORS}"
            )
        if self.ngens > GROEBNER_MAX_VARIABLES:
            raise IdealTooLargeError(
                f"{self.ngens} variables exceed the limit {GROEBNER_MAX_VARIABLES}"
            )
        top = max(sum(m) for g in gens for m in g.monoms())
        if top > GROEBNER_MAX_DEGREE:
            raise IdealTooLargeError(
                f"generator degree {top} exceeds the limit {GROEBNER_MAX_DEGREE}"
            )

        # pairwise coprime leading monomials already form a Groebner basis
        leads = [g.LM for g in gens]
        coprime = all(
            not any(a and b for a, b in zip(leads[i], leads[j]))
            for i in range(len(leads))
            for j in range(i + 1, len(leads))
        )
        if coprime:
            return tuple(g.monic() for g in gens)

        return _reduced_basis(_buchberger(gens))

    def reduce(self, p):
        p = self.coerce(p)
        basis = self.groebner_basis
        if not basis or not p:
            return p
        return p.rem(list(basis))

    def with_ideal(self, extra, name=""):
        """Same variables, ideal enlarged by `extra` generators."""
        return CoordinateRing(
            self.variables,
            list(self.ideal_generators) + [self.coerce(g) for g in extra],
            name=name or self.name,
        )

    def contains_point(self, point):
        if len(point) != self.ngens:
            raise ValueError(
                f"point has {len(point)} coordinates, chart has {self.ngens}"
            )
        return all(evaluate_polynomial(g, point) == 0 for g in self.ideal_generators)


def _coprime(a, b):
    return not any(x and y for x, y in zip(a, b))


def _s_polynomial(f, g):
    lcm = monomial_lcm(f.LM, g.LM)
    return f.mul_monom(monomial_div(lcm, f.LM)) - g.mul_monom(monomial_div(lcm, g.LM))


def _buchberger(gens):
    """
    Pair loop over monic generators with the coprime-leads criterion.
    Each S-pair reduction counts as one step.
    """
    basis = [g.monic() for g in gens if g]
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    steps = 0
    while pairs:
        i, j = pairs.pop(0)
        if _coprime(basis[i].LM, basis[j].LM):
            continue
        steps += 1
        if steps > GROEBNER_MAX_STEPS:
            raise IdealTooLargeError(
                f"no Groebner basis after {GROEBNER_MAX_STEPS} S-pair reductions"
            )
        h = _s_polynomial(basis[i], basis[j]).rem(basis)
        if h:
            basis.append(h.monic())
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return basis


def _reduced_basis(basis):
    """Minimal, inter-reduced and monic, so normal forms are canonical."""
    minimal = []
    for k, g in enumerate(basis):
        if any(
            monomial_divides(h.LM, g.LM) and (h.LM != g.LM or m < k)
            for m, h in enumerate(basis)
            if m != k
        ):
            continue
        minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        r = g.rem(others) if others else g
        reduced.append(r.monic())
    return tuple(sorted(reduced, key=lambda g: grevlex(g.LM), reverse=True))


# ===============================
# POLYNOMIAL TEXT
# ===============================
class _ExpressionParser:
    """
    Recursive descent over
        expr   := ['+'|'-'] term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := atom ('^' uint)?
        atom   := rational | ident | '(' expr ')'
    A single leading sign per expression is accepted so printed
    polynomials parse back.
    """

    def __init__(self, text, resolve, constant):
        tokens, bad = tokenize(text)
        if tokens is None:
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        self.tokens = tokens
        self.index = 0
        self.resolve = resolve
        self.constant = constant

    @property
    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def is_op(self, chars):
        return self.peek.kind == "op" and self.peek.text in chars

    def fail(self, reason=None):
        tok = self.peek
        if reason is None:
            reason = "unexpected end of input" if tok.kind == "end" else f"unexpected {tok.text!r}"
        raise ParseError(reason, tok.position)

    def parse(self):
        value = self.expr()
        if self.peek.kind != "end":
            self.fail()
        return value

    def expr(self):
        negate = False
        if self.is_op("+-"):
            negate = self.advance().text == "-"
        value = self.term()
        if negate:
            value = -value
        while self.is_op("+-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.is_op("*"):
            self.advance()
            value = value * self.factor()
        return value

    def factor(self):
        base = self.atom()
        if not self.is_op("^"):
            return base
        self.advance()
        if self.is_op("-"):
            self.fail("negative exponent")
        if self.peek.kind != "number":
            self.fail("expected a non-negative integer exponent")
        return base ** int(self.advance().text)

    def atom(self):
        tok = self.peek
        if tok.kind == "number":
            self.advance()
            num = int(tok.text)
            den = 1
            if self.is_op("/"):
                self.advance()
                if self.peek.kind != "number":
                    self.fail("expected a denominator")
                den_tok = self.advance()
                den = int(den_tok.text)
                if den == 0:
                    raise ParseError("zero denominator", den_tok.position)
            return self.constant(QQ(num, den))
        if tok.kind == "ident":
            self.advance()
            return self.resolve(tok.text, tok.position)
        if self.is_op("("):
            self.advance()
            value = self.expr()
            if not self.is_op(")"):
                self.fail("expected ')'")
            self.advance()
            return value
        self.fail()


def parse_polynomial(text, ring, reduce=True):
    def resolve(name, position):
        if name not in ring.variables:
            raise ParseError(f"unknown identifier {name!r}", position)
        return ring.gen(name)

    p = _ExpressionParser(str(text), resolve, ring.constant).parse()
    return ring.reduce(p) if reduce else p


def format_monomial(variables, monom):
    parts = []
    for name, e in zip(variables, monom):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p):
    """Inverse of parse_polynomial: '^' powers, 'p/q' coefficients."""
    if not p:
        return "0"
    variables = [str(s) for s in p.ring.symbols]
    pieces = []
    for monom, coeff in p.terms():
        negative = coeff < 0
        size = -coeff if negative else coeff
        mono = format_monomial(variables, monom)
        if not mono:
            body = format_rational(size)
        elif size == 1:
            body = mono
        else:
            body = f"{format_rational(size)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces)


def ideal_member(p, ring):
    return not ring.reduce(p)


def evaluate_polynomial(p, point):
    """Value of p at a rational point (one coordinate per ring variable)."""
    ngens = p.ring.ngens
    if ngens == 0:
        return p.const()
    if len(point) != ngens:
        raise ValueError(f"expected {ngens} coordinates, got {len(point)}")
    return QQ.convert(p(*[qq(v) for v in point]))


def substitute(p, images, ring):
    """Replace variable i of p's ring by images[i] (polynomials of `ring`)."""
    if len(images) != p.ring.ngens:
        raise RingMismatchError(
            f"{len(images)} images for {p.ring.ngens} variables"
        )
    target = ring.poly_ring
    powers = {}
    result = target.zero
    for monom, coeff in p.iterterms():
        term = target.ground_new(coeff)
        for i, e in enumerate(monom):
            if not e:
                continue
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] ** e
            term = term * powers[key]
        result += term
    return ring.reduce(result)


def embed_polynomial(p, ring, positions):
    """Rename p into `ring`, variable i going to ring variable positions[i]."""
    width = ring.ngens
    data = {}
    for monom, coeff in p.iterterms():
        target = [0] * width
        for i, e in enumerate(monom):
            if e:
                target[positions[i]] = e
        data[tuple(target)] = coeff
    return ring.poly_ring.from_dict(data)


def total_degree(p):
    return max((sum(m) for m in p.monoms()), default=0) if p else -1


# ===============================
# EXACT LINEAR ALGEBRA
# ===============================
def qq_matrix(rows, ncols=None):
    rows = [[qq(v) for v in row] for row in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), ncols), QQ)


def rank_of(rows, ncols=None):
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return qq_matrix(rows, ncols).rank()


def null_space(rows, ncols):
    """Basis (as row lists) of {v : rows . v = 0}."""
    if ncols == 0:
        return []
    rows = [list(r) for r in rows]
    if not rows or rank_of(rows, ncols) == 0:
        return [[QQ(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    if rank_of(rows, ncols) == ncols:
        return []
    basis = qq_matrix(rows, ncols).nullspace()
    return [list(r) for r in basis.to_list()]


def solve_in_span(vectors, target):
    """Coefficients c with sum c_j vectors[j] = target, or None."""
    n = len(target)
    k = len(vectors)
    target = [qq(v) for v in target]
    if k == 0 or n == 0:
        return [QQ(0)] * k if all(v == 0 for v in target) else None

    rows = [[qq(vectors[j][i]) for j in range(k)] + [target[i]] for i in range(n)]
    reduced, pivots = qq_matrix(rows, k + 1).rref()
    if k in pivots:
        return None
    entries = reduced.to_list()
    coeffs = [QQ(0)] * k
    for r, p in enumerate(pivots):
        coeffs[p] = entries[r][k]
    return coeffs


def span_contains(vectors, target):
    return solve_in_span(vectors, target) is not None


def inverse_matrix(rows):
    n = len(rows)
    if n == 0:
        return []
    return [list(r) for r in qq_matrix(rows, n).inv().to_list()]


def determinant(rows):
    if not rows:
        return QQ(1)
    return qq_matrix(rows, len(rows)).det()


def mat_vec(rows, vec):
    return [sum((qq(a) * qq(b) for a, b in zip(row, vec)), QQ(0)) for row in rows]


def transpose(rows, ncols=None):
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def polynomial_determinant(rows, ring):
    """Determinant of a square matrix of polynomials, reduced in `ring`."""
    n = len(rows)
    if n == 0:
        return ring.one
    domain = ring.poly_ring.to_domain()
    matrix = DomainMatrix([list(r) for r in rows], (n, n), domain)
    return ring.reduce(matrix.det())


# ===============================
# GRADED WORDS
# ===============================
def normal_word(degrees, letters):
    """
    Sort a word of generator indices with Koszul signs.
    Returns (sign, word) or None when an odd generator repeats.
    """
    word = list(letters)
    sign = 1
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j - 1] > word[j]:
            if degrees[word[j - 1]] % 2 and degrees[word[j]] % 2:
                sign = -sign
            word[j - 1], word[j] = word[j], word[j - 1]
            j -= 1
    for a, b in zip(word, word[1:]):
        if a == b and degrees[a] % 2:
            return None
    return sign, tuple(word)


def exterior_merge(first, second):
    """
    Wedge of two increasing index tuples: (sign, merged) or None on repeats.
    """
    if set(first) & set(second):
        return None
    inversions = 0
    for i in first:
        for j in second:
            if i > j:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(first + second))


class GradedPresentation:
    """
    Generators with nonzero integer degrees over a body ring of degree-0
    coordinates. Words are tuples of generator indices in sorted order.
    """

    def __init__(self, names, degrees, body, name=""):
        self.names = tuple(names)
        self.degrees = tuple(int(d) for d in degrees)
        self.body = body
        self.name = name
        if len(self.names) != len(self.degrees):
            raise ValueError("one degree per generator is required")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names in {self.names}")
        for n, d in zip(self.names, self.degrees):
            if not is_identifier(n):
                raise ValueError(f"invalid generator name: {n!r}")
            if d == 0:
                raise ValueError(f"degree-0 generator {n!r} belongs to the body ring")
            if n in body.variables:
                raise ValueError(f"generator {n!r} clashes with a body variable")
        self._index = {n: i for i, n in enumerate(self.names)}

    def __eq__(self, other):
        return (
            isinstance(other, GradedPresentation)
            and self.names == other.names
            and self.degrees == other.degrees
            and self.body == other.body
        )

    def __hash__(self):
        return hash((self.names, self.degrees))

    def __repr__(self):
        return f"GradedPresentation({self.name or ','.join(self.names)})"

    def index(self, name):
        return self._index[name]

    def degree_of(self, name):
        if name in self._index:
            return self.degrees[self._index[name]]
        if name in self.body.variables:
            return 0
        raise MissingRuleError(f"unknown generator {name!r}")

    def all_names(self):
        return list(self.body.variables) + list(self.names)

    def word_degree(self, word):
        return sum(self.degrees[i] for i in word)

    def zero(self):
        return GradedElement(self, {})

    def one(self):
        return GradedElement(self, {(): self.body.one})

    def scalar(self, value):
        return GradedElement(self, {(): self.body.coerce(value)})

    def word(self, word, coeff=None):
        return GradedElement(self, {tuple(word): self.body.one if coeff is None else coeff})

    def generator(self, name):
        if name in self._index:
            return self.word((self._index[name],))
        return self.scalar(self.body.gen(name))


class GradedElement:
    __slots__ = ("ambient", "terms")

    def __init__(self, ambient, terms):
        self.ambient = ambient
        body = ambient.body
        clean = {}
        for word, coeff in terms.items():
            coeff = body.reduce(coeff)
            if coeff:
                clean[tuple(word)] = coeff
        self.terms = clean

    # --- coercion ---
    def _coerce(self, other):
        if isinstance(other, GradedElement):
            if other.ambient != self.ambient:
                raise RingMismatchError(
                    f"{other.ambient!r} element used with {self.ambient!r}"
                )
            return other
        return self.ambient.scalar(other)

    # --- arithmetic ---
    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms[w] + c if w in terms else c
        return GradedElement(self.ambient, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.ambient, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, GradedElement):
            return graded_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        result = self.ambient.one()
        for _ in range(int(n)):
            result = graded_multiply(result, self)
        return result

    def scale(self, value):
        factor = self.ambient.body.coerce(value)
        return GradedElement(self.ambient, {w: c * factor for w, c in self.terms.items()})

    # --- inspection ---
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (RingMismatchError, TypeError, ValueError):
            return False
        return (self - other).is_zero()

    __hash__ = None

    def degrees(self):
        return {self.ambient.word_degree(w) for w in self.terms}

    def homogeneous_degree(self):
        found = self.degrees()
        return found.pop() if len(found) == 1 else None

    def split_terms(self):
        return [GradedElement(self.ambient, {w: c}) for w, c in self.terms.items()]

    def component(self, degree):
        P = self.ambient
        return GradedElement(
            P, {w: c for w, c in self.terms.items() if P.word_degree(w) == degree}
        )

    def coefficient(self, word):
        return self.terms.get(tuple(word), self.ambient.body.zero)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ambient.names
        pieces = []
        for word in sorted(self.terms):
            coeff = self.terms[word]
            letters = "*".join(names[i] for i in word)
            text = format_polynomial(coeff)
            if not letters:
                pieces.append(text)
            elif text == "1":
                pieces.append(letters)
            elif text == "-1":
                pieces.append(f"-{letters}")
            else:
                pieces.append(f"({text})*{letters}")
        return " + ".join(pieces)

    __repr__ = __str__


def graded_multiply(a, b):
    if a.ambient != b.ambient:
        raise RingMismatchError("graded product across presentations")
    P = a.ambient
    zero = P.body.zero
    out = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            normal = normal_word(P.degrees, wa + wb)
            if normal is None:
                continue
            sign, word = normal
            c = ca * cb
            out[word] = out.get(word, zero) + (c if sign > 0 else -c)
    return GradedElement(P, out)


def parse_graded(text, presentation):
    """Polynomial text where identifiers may also be graded generators."""
    P = presentation

    def resolve(name, position):
        if name in P.names or name in P.body.variables:
            return P.generator(name)
        raise ParseError(f"unknown identifier {name!r}", position)

    return _ExpressionParser(str(text), resolve, P.scalar).parse()


# ===============================
# DERIVATIONS AND BRACKETS
# ===============================
def _rule(rules, name):
    try:
        return rules[name]
    except KeyError:
        raise MissingRuleError(f"no rule for generator {name!r}") from None


def apply_derivation(rules, sign_degree, x):
    """
    Extend `rules` (generator name -> element, body variables included)
    to the derivation of degree `sign_degree`:
        D(ab) = D(a) b + (-1)^(|D||a|) a D(b).
    """
    P = x.ambient
    body = P.body
    gens = body.poly_ring.gens
    result = P.zero()
    for word, coeff in x.terms.items():
        w = P.word(word)
        for v, name in enumerate(body.variables):
            dc = coeff.diff(gens[v])
            if dc:
                result = result + graded_multiply(_rule(rules, name).scale(dc), w)

        prefix_degree = 0
        for pos, letter in enumerate(word):
            image = _rule(rules, P.names[letter])
            if not image.is_zero():
                piece = graded_multiply(
                    graded_multiply(P.word(word[:pos]), image), P.word(word[pos + 1:])
                )
                if (sign_degree * prefix_degree) % 2:
                    piece = -piece
                result = result + piece.scale(coeff)
            prefix_degree += P.degrees[letter]
    return result


class _RuleView:
    """Read-only mapping h -> {g, h} for a fixed generator g."""

    def __init__(self, bracket, name):
        self.bracket = bracket
        self.name = name

    def __getitem__(self, other):
        return self.bracket.lookup(self.name, other)


class GradedBracket:
    """
    Degree -1 bracket given on generator pairs. Missing pairs are taken
    from the reversed entry by graded antisymmetry, or are zero.
    """

    def __init__(self, presentation, table=None):
        self.presentation = presentation
        self.table = {}
        for (a, b), value in (table or {}).items():
            self.set(a, b, value)

    def set(self, a, b, value):
        P = self.presentation
        P.degree_of(a)
        P.degree_of(b)
        if not isinstance(value, GradedElement):
            value = P.scalar(value)
        elif value.ambient != P:
            raise RingMismatchError(f"bracket value for ({a}, {b}) outside {P!r}")
        self.table[(a, b)] = value

    def antisymmetry_sign(self, a, b):
        P = self.presentation
        da, db = P.degree_of(a), P.degree_of(b)
        return 1 if ((da - 1) * (db - 1)) % 2 else -1

    def lookup(self, a, b):
        if (a, b) in self.table:
            return self.table[(a, b)]
        if (b, a) in self.table:
            value = self.table[(b, a)]
            return value if self.antisymmetry_sign(a, b) > 0 else -value
        return self.presentation.zero()

    def rules_for(self, name):
        return _RuleView(self, name)

    def generator_bracket(self, name, y):
        """{g, y} for a generator (or body variable) g."""
        return apply_derivation(
            self.rules_for(name), self.presentation.degree_of(name) - 1, y
        )

    def __call__(self, x, y):
        return graded_bracket(self, x, y)


def _bracket_word(bracket, word, y, y_degree):
    P = bracket.presentation
    if not word:
        return P.zero()
    head, tail = word[0], word[1:]
    out = graded_multiply(P.word((head,)), _bracket_word(bracket, tail, y, y_degree))
    piece = graded_multiply(bracket.generator_bracket(P.names[head], y), P.word(tail))
    if (P.word_degree(tail) * (y_degree - 1)) % 2:
        piece = -piece
    return out + piece


def graded_bracket(bracket, x, y):
    """
    {x, y} from generator data through the right Leibniz rule
        {AB, y} = A{B, y} + (-1)^(|B|(|y|-1)) {A, y} B
    and {g, .} being a derivation of degree |g| - 1.
    """
    P = bracket.presentation
    if x.ambient != P or y.ambient != P:
        raise RingMismatchError("bracket arguments outside the presentation")
    gens = P.body.poly_ring.gens
    result = P.zero()
    for y_term in y.split_terms():
        y_degree = y_term.homogeneous_degree()
        for word, coeff in x.terms.items():
            result = result + _bracket_word(bracket, word, y_term, y_degree).scale(coeff)
            w = P.word(word)
            odd = (P.word_degree(word) * (y_degree - 1)) % 2
            for v, name in enumerate(P.body.variables):
                dc = coeff.diff(gens[v])
                if not dc:
                    continue
                piece = graded_multiply(
                    bracket.generator_bracket(name, y_term).scale(dc), w
                )
                result = result + (-piece if odd else piece)
    return result
