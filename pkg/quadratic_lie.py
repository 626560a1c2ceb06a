# quadratic_lie.py
"""
Quadratic Lie algebras over QQ, the Cartan trivector, the Gerstenhaber
bracket on the exterior algebra, r-matrices, and the graded Lie algebras
ghat(g), Q(g), Q_s(f) together with their Manin-triple checks.
"""

from dataclasses import dataclass, field
from itertools import combinations

from sympy import integer_nthroot
from sympy.polys.domains import QQ

from polynomial_patterns import format_rational
from report import Report
from symbolic_core import (
    RingMismatchError,
    determinant,
    exterior_merge,
    inverse_matrix,
    mat_vec,
    null_space,
    qq,
    rank_of,
    solve_in_span,
    span_contains,
)

ZERO = QQ(0)
ONE = QQ(1)


def format_vector(vector, names):
    pieces = []
    for c, name in zip(vector, names):
        if not c:
            continue
        if c == 1:
            pieces.append(name)
        elif c == -1:
            pieces.append(f"-{name}")
        else:
            pieces.append(f"{format_rational(c)}*{name}")
    return " + ".join(pieces) if pieces else "0"


def _zeros(n):
    return [ZERO] * n


def _unit(n, i):
    v = _zeros(n)
    v[i] = ONE
    return v


def _add_into(acc, vector, factor=ONE):
    for k, c in enumerate(vector):
        if c:
            acc[k] += factor * c


# ===============================
# LIE ALGEBRAS
# ===============================
@dataclass(frozen=True)
class LieAlgebraData:
    name: str
    basis_names: tuple
    structure: tuple            # structure[i][j][k] = c^k_ij
    form: tuple = None          # symmetric matrix, the inner product on g
    components: tuple = ()      # summands, when built by direct_sum
    matrices: tuple = None      # matrix realization, one matrix per basis element

    def __post_init__(self):
        n = len(self.basis_names)
        if len(self.structure) != n or any(
            len(row) != n or any(len(v) != n for v in row) for row in self.structure
        ):
            raise ValueError(f"structure constants of {self.name!r} are not {n}x{n}x{n}")
        if self.form is not None and (
            len(self.form) != n or any(len(r) != n for r in self.form)
        ):
            raise ValueError(f"form of {self.name!r} is not {n}x{n}")

    @property
    def dim(self):
        return len(self.basis_names)

    def index(self, name):
        return self.basis_names.index(name)

    def basis_vector(self, i):
        return _unit(self.dim, i)

    def bracket_basis(self, i, j):
        return list(self.structure[i][j])

    def bracket(self, x, y):
        out = _zeros(self.dim)
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b:
                    _add_into(out, self.structure[i][j], a * b)
        return out

    def pair(self, x, y, form=None):
        G = self.form if form is None else form
        if G is None:
            raise ValueError(f"{self.name!r} carries no invariant form")
        return sum(
            (x[i] * G[i][j] * y[j] for i in range(self.dim) for j in range(self.dim) if x[i] and y[j]),
            ZERO,
        )

    def tensor(self):
        """The S^2 g element dual to the form (its inverse)."""
        if self.form is None or determinant(self.form) == 0:
            raise ValueError(f"form of {self.name!r} is degenerate or missing")
        return inverse_matrix(self.form)

    def format(self, vector):
        return format_vector(vector, self.basis_names)

    def with_form(self, form, name=None):
        return LieAlgebraData(
            name or self.name,
            self.basis_names,
            self.structure,
            _as_matrix(form),
            self.components,
            self.matrices,
        )


def _as_matrix(rows):
    if rows is None:
        return None
    return tuple(tuple(qq(v) for v in row) for row in rows)


def lie_algebra(name, basis, brackets, form=None, matrices=None):
    """
    Build from sparse brackets {(i, j): {k: c}}. A pair whose reversed
    entry is absent is completed by antisymmetry; pairs given both ways
    are stored as given.
    """
    n = len(basis)
    table = [[_zeros(n) for _ in range(n)] for _ in range(n)]
    given = set()
    for (i, j), terms in brackets.items():
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"bracket index ({i}, {j}) outside dimension {n}")
        given.add((i, j))
        for k, c in terms.items():
            if not 0 <= k < n:
                raise ValueError(f"bracket term index {k} outside dimension {n}")
            table[i][j][k] += qq(c)
    for (i, j) in list(given):
        if (j, i) not in given and i != j:
            table[j][i] = [-c for c in table[i][j]]
    structure = tuple(tuple(tuple(v) for v in row) for row in table)
    return LieAlgebraData(name, tuple(basis), structure, _as_matrix(form), (), matrices)


def abelian_algebra(n=2, form=None, name=None):
    if form is None:
        form = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    return lie_algebra(name or f"abelian{n}", [f"e{i + 1}" for i in range(n)], {}, form)


def so3_algebra(form=None):
    """[e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2 with the identity form by default."""
    brackets = {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}
    if form is None:
        form = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    return lie_algebra("so3", ["e1", "e2", "e3"], brackets, form)


def matrix_product(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]


def matrix_commutator(a, b):
    ab, ba = matrix_product(a, b), matrix_product(b, a)
    return [[ab[i][j] - ba[i][j] for j in range(len(a))] for i in range(len(a))]


def _flatten(m):
    return [v for row in m for v in row]


def from_matrices(name, basis, matrices, form=None):
    """
    Structure constants of a matrix Lie algebra; the trace form is used
    when no form is given.
    """
    mats = [[[qq(v) for v in row] for row in m] for m in matrices]
    flat = [_flatten(m) for m in mats]
    n = len(mats)
    brackets = {}
    for i in range(n):
        for j in range(n):
            coeffs = solve_in_span(flat, _flatten(matrix_commutator(mats[i], mats[j])))
            if coeffs is None:
                raise ValueError(f"{name}: [{basis[i]}, {basis[j]}] leaves the span")
            brackets[(i, j)] = {k: c for k, c in enumerate(coeffs) if c}
    if form is None:
        form = [
            [sum(matrix_product(mats[i], mats[j])[k][k] for k in range(len(mats[i]))) for j in range(n)]
            for i in range(n)
        ]
    frozen = tuple(tuple(tuple(row) for row in m) for m in mats)
    return lie_algebra(name, basis, brackets, form, frozen)


def sl2_algebra():
    """sl(2) in the basis h, e, f with the trace form."""
    h = [[1, 0], [0, -1]]
    e = [[0, 1], [0, 0]]
    f = [[0, 0], [1, 0]]
    return from_matrices("sl2", ["h", "e", "f"], [h, e, f])


def direct_sum(first, second, negate_second=False, name=None, suffixes=("_1", "_2")):
    """first (+) second; with negate_second the second form is negated (g (+) gbar)."""
    n1, n2 = first.dim, second.dim
    n = n1 + n2
    table = [[_zeros(n) for _ in range(n)] for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            for k, c in enumerate(first.structure[i][j]):
                table[i][j][k] = c
    for i in range(n2):
        for j in range(n2):
            for k, c in enumerate(second.structure[i][j]):
                table[n1 + i][n1 + j][n1 + k] = c

    form = None
    second_part = second
    if first.form is not None and second.form is not None:
        sign = -ONE if negate_second else ONE
        form = [[ZERO] * n for _ in range(n)]
        for i in range(n1):
            for j in range(n1):
                form[i][j] = first.form[i][j]
        for i in range(n2):
            for j in range(n2):
                form[n1 + i][n1 + j] = sign * second.form[i][j]
        if negate_second:
            second_part = second.with_form(
                [[-c for c in row] for row in second.form], f"{second.name}bar"
            )

    names = tuple(f"{b}{suffixes[0]}" for b in first.basis_names) + tuple(
        f"{b}{suffixes[1]}" for b in second.basis_names
    )
    label = name or f"{first.name}+{second_part.name}"
    structure = tuple(tuple(tuple(v) for v in row) for row in table)
    return LieAlgebraData(label, names, structure, _as_matrix(form), (first, second_part), None)


def double(L, negate_second=True):
    """d = g (+) gbar (or g (+) g)."""
    return direct_sum(L, L, negate_second=negate_second, name=f"{L.name}+{L.name}{'bar' if negate_second else ''}")


def check_lie_algebra(L):
    report = Report(f"lie algebra {L.name}")
    n = L.dim
    names = L.basis_names

    witness = ""
    for i in range(n):
        for j in range(i, n):
            total = [a + b for a, b in zip(L.structure[i][j], L.structure[j][i])]
            if any(total):
                witness = f"([{names[i]}, {names[j]}] + [{names[j]}, {names[i]}]) = {L.format(total)}"
                break
        if witness:
            break
    report.add("antisymmetry", not witness, witness)

    witness = ""
    for i, j, k in combinations(range(n), 3):
        x, y, z = L.basis_vector(i), L.basis_vector(j), L.basis_vector(k)
        total = _zeros(n)
        _add_into(total, L.bracket(x, L.bracket(y, z)))
        _add_into(total, L.bracket(y, L.bracket(z, x)))
        _add_into(total, L.bracket(z, L.bracket(x, y)))
        if any(total):
            witness = f"({names[i]}, {names[j]}, {names[k]}): {L.format(total)}"
            break
    report.add("jacobi", not witness, witness)
    return report


def _check_symmetric(s):
    n = len(s)
    if any(len(row) != n for row in s):
        raise ValueError("form must be a square matrix")
    for i in range(n):
        for j in range(i + 1, n):
            if qq(s[i][j]) != qq(s[j][i]):
                raise ValueError(f"form is not symmetric at ({i}, {j})")


def check_invariant_form(L, s, kind="form"):
    """
    kind="form": s([x,y],z) + s(y,[x,z]) = 0 on basis triples.
    kind="tensor": s in (S^2 g)^g, i.e. the induced form on g* is
    coadjoint invariant.
    """
    _check_symmetric(s)
    S = [[qq(v) for v in row] for row in s]
    n = L.dim
    if len(S) != n:
        raise ValueError(f"form is {len(S)}x{len(S)}, algebra has dimension {n}")
    c = L.structure
    for x in range(n):
        for i in range(n):
            for j in range(n):
                if kind == "tensor":
                    total = sum((c[x][a][i] * S[a][j] + c[x][a][j] * S[i][a] for a in range(n)), ZERO)
                else:
                    total = sum((c[x][i][a] * S[a][j] + c[x][j][a] * S[i][a] for a in range(n)), ZERO)
                if total:
                    return False
    return True


# ===============================
# EXTERIOR ALGEBRA
# ===============================
class ExteriorElement:
    """Element of the exterior algebra of g, keyed by increasing index tuples."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient, terms=None):
        self.ambient = ambient
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if any(not 0 <= i < ambient.dim for i in key) or list(key) != sorted(set(key)):
                raise ValueError(f"index tuple {key} is not increasing inside dimension {ambient.dim}")
            c = qq(c)
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def vector(cls, ambient, coeffs):
        return cls(ambient, {(i,): c for i, c in enumerate(coeffs) if c})

    @classmethod
    def basis(cls, ambient, *indices):
        merged = normal = (1, ())
        for i in indices:
            normal = exterior_merge(merged[1], (i,))
            if normal is None:
                return cls(ambient)
            merged = (merged[0] * normal[0], normal[1])
        return cls(ambient, {merged[1]: merged[0]})

    @property
    def degree(self):
        found = {len(k) for k in self.terms}
        return found.pop() if len(found) == 1 else None

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if not isinstance(other, ExteriorElement) or other.ambient != self.ambient:
            raise RingMismatchError("exterior elements over different algebras")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, ZERO) + c
        return ExteriorElement(self.ambient, terms)

    def __neg__(self):
        return ExteriorElement(self.ambient, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        factor = qq(factor)
        return ExteriorElement(self.ambient, {k: c * factor for k, c in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def wedge(self, other):
        self._check(other)
        terms = {}
        for I, a in self.terms.items():
            for J, b in other.terms.items():
                merged = exterior_merge(I, J)
                if merged is None:
                    continue
                sign, K = merged
                terms[K] = terms.get(K, ZERO) + sign * a * b
        return ExteriorElement(self.ambient, terms)

    def __eq__(self, other):
        if not isinstance(other, ExteriorElement) or other.ambient != self.ambient:
            return False
        return self.terms == other.terms

    __hash__ = None

    def coefficient(self, *indices):
        return self.terms.get(tuple(indices), ZERO)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ambient.basis_names
        pieces = []
        for key in sorted(self.terms):
            c = self.terms[key]
            word = "^".join(names[i] for i in key) or "1"
            if c == 1:
                pieces.append(word)
            elif c == -1:
                pieces.append(f"-{word}")
            else:
                pieces.append(f"{format_rational(c)}*{word}")
        return " + ".join(pieces)

    __repr__ = __str__


def gerstenhaber_bracket(a, b):
    """
    Biderivation extension of the Lie bracket, shifted degree |A^k| = k - 1:
        [X1..Xp, Y1..Yq] = sum (-1)^(i+j) [Xi, Yj] ^ X1..^Xi..Xp ^ Y1..^Yj..Yq
    Scalars bracket to zero.
    """
    if a.ambient != b.ambient:
        raise RingMismatchError("gerstenhaber bracket across algebras")
    L = a.ambient
    terms = {}
    for I, x in a.terms.items():
        for J, y in b.terms.items():
            if not I or not J:
                continue
            for i, p in enumerate(I):
                rest_i = I[:i] + I[i + 1:]
                for j, q in enumerate(J):
                    br = L.structure[p][q]
                    if not any(br):
                        continue
                    tail = exterior_merge(rest_i, J[:j] + J[j + 1:])
                    if tail is None:
                        continue
                    tail_sign, K = tail
                    sign = tail_sign * (-1 if (i + j) % 2 else 1)
                    for k, c in enumerate(br):
                        if not c:
                            continue
                        merged = exterior_merge((k,), K)
                        if merged is None:
                            continue
                        s, W = merged
                        terms[W] = terms.get(W, ZERO) + s * sign * c * x * y
    return ExteriorElement(L, terms)


@dataclass
class CartanData:
    phi: ExteriorElement
    tensor: list
    dual_basis: list = None     # e^i as coordinate vectors, when s is nondegenerate

    def dual(self, i):
        return self.dual_basis[i]


def cartan_trivector(L, s=None):
    """
    phi(a, b, c) = 1/2 a([s# b, s# c]); s is the S^2 g tensor, the inverse
    of the form when omitted.
    """
    S = L.tensor() if s is None else [[qq(v) for v in row] for row in s]
    _check_symmetric(S)
    n = L.dim
    c = L.structure
    terms = {}
    for i, j, k in combinations(range(n), 3):
        value = ZERO
        for a in range(n):
            if not S[j][a]:
                continue
            for b in range(n):
                if S[k][b] and c[a][b][i]:
                    value += S[j][a] * S[k][b] * c[a][b][i]
        if value:
            terms[(i, j, k)] = value / 2
    dual = None
    if n == 0 or determinant(S) != 0:
        dual = [list(S[i]) for i in range(n)]
    return CartanData(ExteriorElement(L, terms), S, dual)


@dataclass
class RMatrixCheck:
    report: Report
    is_r_matrix: bool
    cobracket: dict = field(default_factory=dict)


def check_r_matrix(L, u, s=None):
    if u.ambient != L:
        raise RingMismatchError("u lives over a different algebra")
    if not u.is_zero() and u.degree != 2:
        raise ValueError("u must lie in the second exterior power")

    phi = cartan_trivector(L, s).phi
    report = Report(f"r-matrix over {L.name}")
    residue = gerstenhaber_bracket(u, u) + phi
    is_r = residue.is_zero()
    report.add("[u,u] = -phi", is_r, f"[u,u] + phi = {residue}")

    cobracket = {}
    for i, name in enumerate(L.basis_names):
        cobracket[name] = gerstenhaber_bracket(u, ExteriorElement.basis(L, i))

    witness = ""
    for i, j in combinations(range(L.dim), 2):
        x = ExteriorElement.basis(L, i)
        y = ExteriorElement.basis(L, j)
        lhs = gerstenhaber_bracket(u, gerstenhaber_bracket(x, y))
        rhs = gerstenhaber_bracket(x, cobracket[L.basis_names[j]]) - gerstenhaber_bracket(
            y, cobracket[L.basis_names[i]]
        )
        if lhs != rhs:
            witness = f"({L.basis_names[i]}, {L.basis_names[j]}): {lhs - rhs}"
            break
    report.add("cobracket cocycle", not witness, witness)

    witness = ""
    for name, delta in cobracket.items():
        twice = gerstenhaber_bracket(u, delta)
        if not twice.is_zero():
            witness = f"{name}: {twice}"
            break
    report.add("co-jacobi", not witness, witness)
    return RMatrixCheck(report, is_r, cobracket)


def _rational_sqrt(value):
    if value < 0:
        return None
    num, den = int(QQ.numer(value)), int(QQ.denom(value))
    rn, exact_n = integer_nthroot(num, 2)
    rd, exact_d = integer_nthroot(den, 2)
    if not (exact_n and exact_d):
        return None
    return QQ(int(rn), int(rd))


def solve_r_matrix_scale(L, u, s=None):
    """Positive c with [cu, cu] = -phi, or None when no rational c exists."""
    target = -cartan_trivector(L, s).phi
    uu = gerstenhaber_bracket(u, u)
    if uu.is_zero():
        return ONE if target.is_zero() else None
    key = next(iter(uu.terms))
    ratio = target.coefficient(*key) / uu.terms[key]
    if uu.scale(ratio) != target:
        return None
    return _rational_sqrt(ratio)


# ===============================
# GRADED LIE ALGEBRAS
# ===============================
@dataclass
class GradedLieAlgebra:
    name: str
    names: tuple
    degrees: tuple
    table: dict                 # (i, j) -> {k: c}
    pairing: tuple = None
    pairing_degree: int = 1     # <a,b> != 0 only when deg a + deg b + pairing_degree == 0

    @property
    def dim(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def basis_vector(self, i):
        return _unit(self.dim, i)

    def vector(self, coeffs):
        """Coordinate vector from {name: coefficient}."""
        v = _zeros(self.dim)
        for name, c in coeffs.items():
            v[self.index(name)] += qq(c)
        return v

    def bracket_basis(self, i, j):
        out = _zeros(self.dim)
        if (i, j) in self.table:
            for k, c in self.table[(i, j)].items():
                out[k] += c
        elif (j, i) in self.table:
            sign = ONE if (self.degrees[i] * self.degrees[j]) % 2 else -ONE
            for k, c in self.table[(j, i)].items():
                out[k] += sign * c
        return out

    def bracket(self, x, y):
        out = _zeros(self.dim)
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b:
                    _add_into(out, self.bracket_basis(i, j), a * b)
        return out

    def pair(self, x, y):
        if self.pairing is None:
            raise ValueError(f"{self.name!r} has no pairing")
        P = self.pairing
        return sum(
            (x[i] * P[i][j] * y[j] for i in range(self.dim) for j in range(self.dim) if x[i] and y[j]),
            ZERO,
        )

    def homogeneous_degree(self, vector):
        found = {self.degrees[i] for i, c in enumerate(vector) if c}
        return found.pop() if len(found) == 1 else None

    def format(self, vector):
        return format_vector(vector, self.names)


def _graded_table(names, degrees):
    return GradedLieAlgebra("", tuple(names), tuple(degrees), {})


def _set(table, i, j, terms):
    clean = {k: qq(c) for k, c in terms.items() if qq(c)}
    if clean:
        table[(i, j)] = clean


def check_graded_lie(A):
    report = Report(f"graded lie algebra {A.name}")
    n = A.dim
    names, deg = A.names, A.degrees

    witness = ""
    for (i, j), terms in sorted(A.table.items()):
        bad = [k for k in terms if deg[k] != deg[i] + deg[j]]
        if bad:
            witness = f"[{names[i]}, {names[j]}] has a term {names[bad[0]]} of the wrong degree"
            break
    report.add("degree homogeneity", not witness, witness)

    witness = ""
    for (i, j), terms in sorted(A.table.items()):
        if (j, i) not in A.table:
            if i == j and (deg[i] % 2 == 0):
                witness = f"[{names[i]}, {names[i]}] must vanish for even degree"
                break
            continue
        sign = ONE if (deg[i] * deg[j]) % 2 else -ONE
        other = A.table[(j, i)]
        keys = set(terms) | set(other)
        if any(terms.get(k, ZERO) != sign * other.get(k, ZERO) for k in keys):
            witness = f"([{names[i]}, {names[j]}], [{names[j]}, {names[i]}])"
            break
    report.add("antisymmetry", not witness, witness)

    brackets = [[A.bracket_basis(i, j) for j in range(n)] for i in range(n)]

    def br(x, y):
        return A.bracket(x, y)

    witness = ""
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = br(A.basis_vector(a), brackets[b][c])
                rhs = br(brackets[a][b], A.basis_vector(c))
                sign = -ONE if (deg[a] * deg[b]) % 2 else ONE
                _add_into(rhs, br(A.basis_vector(b), brackets[a][c]), sign)
                diff = [p - q for p, q in zip(lhs, rhs)]
                if any(diff):
                    witness = f"({names[a]}, {names[b]}, {names[c]}): {A.format(diff)}"
                    break
            if witness:
                break
        if witness:
            break
    report.add("jacobi", not witness, witness)

    if A.pairing is None:
        return report

    P = A.pairing
    witness = ""
    for i in range(n):
        for j in range(n):
            if P[i][j] != P[j][i]:
                witness = f"<{names[i]}, {names[j]}>"
                break
            if P[i][j] and deg[i] + deg[j] + A.pairing_degree != 0:
                witness = f"<{names[i]}, {names[j]}> breaks the pairing degree"
                break
        if witness:
            break
    report.add("pairing symmetric of degree", not witness, witness)

    witness = ""
    for a in range(n):
        for b in range(n):
            for c in range(n):
                sign = -ONE if (deg[a] * deg[b]) % 2 else ONE
                value = A.pair(brackets[a][b], A.basis_vector(c)) + sign * A.pair(
                    A.basis_vector(b), brackets[a][c]
                )
                if value:
                    witness = f"({names[a]}, {names[b]}, {names[c]}): {format_rational(value)}"
                    break
            if witness:
                break
        if witness:
            break
    report.add("pairing invariant", not witness, witness)

    rank = rank_of([list(r) for r in P], n)
    report.add("pairing nondegenerate", rank == n, f"rank {rank} of {n}")
    return report


def build_ghat(L):
    """ghat = g[1] + g + R[-1]: generators I_x (deg -1), L_x (deg 0), D (deg 1)."""
    n = L.dim
    names = [f"I_{b}" for b in L.basis_names] + [f"L_{b}" for b in L.basis_names] + ["D"]
    degrees = [-1] * n + [0] * n + [1]
    I = lambda i: i
    Lx = lambda i: n + i
    D = 2 * n
    table = {}
    for i in range(n):
        for j in range(n):
            c = L.structure[i][j]
            _set(table, Lx(i), I(j), {I(k): v for k, v in enumerate(c)})
            _set(table, Lx(i), Lx(j), {Lx(k): v for k, v in enumerate(c)})
        _set(table, D, I(i), {Lx(i): 1})
    return GradedLieAlgebra(f"ghat({L.name})", tuple(names), tuple(degrees), table)


def build_Q(L, form=None):
    """
    Q(g): central extension of ghat by T (deg -2) with cocycle
    [I_u, I_v] = <u,v> T and pairing <T,D> = 1, <I_x, L_y> = <x,y>.
    """
    G = [list(r) for r in (L.form if form is None else _as_matrix(form))]
    n = L.dim
    names = ["T"] + [f"I_{b}" for b in L.basis_names] + [f"L_{b}" for b in L.basis_names] + ["D"]
    degrees = [-2] + [-1] * n + [0] * n + [1]
    T, D = 0, 2 * n + 1
    I = lambda i: 1 + i
    Lx = lambda i: 1 + n + i
    table = {}
    for i in range(n):
        for j in range(n):
            c = L.structure[i][j]
            _set(table, Lx(i), I(j), {I(k): v for k, v in enumerate(c)})
            _set(table, Lx(i), Lx(j), {Lx(k): v for k, v in enumerate(c)})
            _set(table, I(i), I(j), {T: G[i][j]})
        _set(table, D, I(i), {Lx(i): 1})

    size = 2 * n + 2
    pairing = [[ZERO] * size for _ in range(size)]
    pairing[T][D] = pairing[D][T] = ONE
    for i in range(n):
        for j in range(n):
            pairing[I(i)][Lx(j)] = pairing[Lx(j)][I(i)] = qq(G[i][j])
    return GradedLieAlgebra(
        f"Q({L.name})", tuple(names), tuple(degrees), table, _as_matrix(pairing)
    )


def build_Qs(F, s):
    """
    Q_s(f) = R[2] + f*[1] + f + R[-1] with [a, b] = s(a, b) T,
    [x, a] = -ad*(x) a, [D, a] = s#(a), <T,D> = 1, <x, a> = a(x).
    """
    S = [[qq(v) for v in row] for row in s]
    _check_symmetric(S)
    n = F.dim
    names = ["T"] + [f"alpha_{b}" for b in F.basis_names] + [f"xi_{b}" for b in F.basis_names] + ["D"]
    degrees = [-2] + [-1] * n + [0] * n + [1]
    T, D = 0, 2 * n + 1
    A = lambda i: 1 + i
    X = lambda i: 1 + n + i
    c = F.structure
    table = {}
    for i in range(n):
        for j in range(n):
            _set(table, A(i), A(j), {T: S[i][j]})
            _set(table, X(i), X(j), {X(k): v for k, v in enumerate(c[i][j])})
            _set(table, X(i), A(j), {A(k): -c[i][k][j] for k in range(n)})
        _set(table, D, A(i), {X(k): S[i][k] for k in range(n)})

    size = 2 * n + 2
    pairing = [[ZERO] * size for _ in range(size)]
    pairing[T][D] = pairing[D][T] = ONE
    for i in range(n):
        pairing[X(i)][A(i)] = pairing[A(i)][X(i)] = ONE
    return GradedLieAlgebra(
        f"Q_s({F.name})", tuple(names), tuple(degrees), table, _as_matrix(pairing)
    )


def _check_inside(D, vectors, label):
    for v in vectors:
        if len(v) != D.dim:
            raise ValueError(f"{label}: basis vector of length {len(v)} is not inside {D.name} (dim {D.dim})")


def subalgebra_witness(bracket, vectors, fmt):
    for i in range(len(vectors)):
        for j in range(i, len(vectors)):
            v = bracket(vectors[i], vectors[j])
            if any(v) and not span_contains(vectors, v):
                return f"[{fmt(vectors[i])}, {fmt(vectors[j])}] = {fmt(v)}"
    return ""


def lagrangian_witness(pair, vectors, dim):
    for i in range(len(vectors)):
        for j in range(i, len(vectors)):
            value = pair(vectors[i], vectors[j])
            if value:
                return f"pairing of basis vectors {i}, {j} is {format_rational(value)}"
    rank = rank_of(vectors, dim)
    if 2 * rank != dim:
        return f"isotropic of dimension {rank}, half of {dim} required"
    return ""


def check_manin_triple(D, A, B):
    _check_inside(D, A, "A")
    _check_inside(D, B, "B")
    if D.pairing is None:
        raise ValueError(f"{D.name} has no pairing")
    if determinant(D.pairing) == 0:
        raise ValueError(f"pairing on {D.name} is degenerate")
    report = Report(f"manin triple in {D.name}")
    for label, vectors in (("A", A), ("B", B)):
        bad = [D.format(v) for v in vectors if D.homogeneous_degree(v) is None]
        report.add(f"{label} homogeneous", not bad, bad[0] if bad else "")
    for label, vectors in (("A", A), ("B", B)):
        w = subalgebra_witness(D.bracket, vectors, D.format)
        report.add(f"{label} subalgebra", not w, w)
    for label, vectors in (("A", A), ("B", B)):
        w = lagrangian_witness(D.pair, vectors, D.dim)
        report.add(f"{label} lagrangian", not w, w)
    ra, rb, total = rank_of(A, D.dim), rank_of(B, D.dim), rank_of(list(A) + list(B), D.dim)
    ok = ra + rb == D.dim and total == D.dim
    report.add("transversal", ok, f"dim A + dim B = {ra + rb}, dim(A + B) = {total}, dim D = {D.dim}")
    return report


def is_ideal(D, vectors):
    """(True, "") when [D, S] lies in S, else (False, witness)."""
    for i in range(D.dim):
        x = D.basis_vector(i)
        for v in vectors:
            w = D.bracket(x, v)
            if any(w) and not span_contains(vectors, w):
                return False, f"[{D.names[i]}, {D.format(v)}] = {D.format(w)}"
    return True, ""


def _nondegenerate_form(L, form):
    G = L.form if form is None else _as_matrix(form)
    if G is None or determinant(G) == 0:
        raise ValueError(f"degenerate form on {L.name}")
    return G


def ghat_bialgebra_pair(L, form=None):
    """
    Inside Q(d), d = g (+) gbar:
        A = R T + I_{g+0} + L_{0+gbar},  B = I_diag + L_diag + R D.
    """
    G = _nondegenerate_form(L, form)
    d = double(L.with_form(G))
    Q = build_Q(d)
    n = L.dim
    vec = lambda names: Q.vector(names)
    first = lambda prefix, i: f"{prefix}_{d.basis_names[i]}"
    second = lambda prefix, i: f"{prefix}_{d.basis_names[n + i]}"

    A = [vec({"T": 1})]
    A += [vec({first("I", i): 1}) for i in range(n)]
    A += [vec({second("L", i): 1}) for i in range(n)]
    B = [vec({first("I", i): 1, second("I", i): 1}) for i in range(n)]
    B += [vec({first("L", i): 1, second("L", i): 1}) for i in range(n)]
    B += [vec({"D": 1})]
    return Q, A, B


def rhat_graph(L, form=None, tilted=False):
    """
    Gr(rhat) = R T + I_{g+0} + L_{g+0} inside Q(d); `tilted` swaps the
    I block for I_diag, which is not an ideal.
    """
    G = _nondegenerate_form(L, form)
    d = double(L.with_form(G))
    Q = build_Q(d)
    n = L.dim
    vectors = [Q.vector({"T": 1})]
    for i in range(n):
        if tilted:
            vectors.append(Q.vector({f"I_{d.basis_names[i]}": 1, f"I_{d.basis_names[n + i]}": 1}))
        else:
            vectors.append(Q.vector({f"I_{d.basis_names[i]}": 1}))
    vectors += [Q.vector({f"L_{d.basis_names[i]}": 1}) for i in range(n)]
    return Q, vectors


def check_rhat_quasitriangular(L, form=None, tilted=False):
    Q, vectors = rhat_graph(L, form, tilted)
    ok, _ = is_ideal(Q, vectors)
    return ok


# ===============================
# GENERALIZED MANIN TRIPLES
# ===============================
@dataclass
class GeneralizedManinTriple:
    f: LieAlgebraData
    s: list          # S^2 f tensor, possibly degenerate
    h: list          # basis vectors in f coordinates
    k: list


@dataclass
class GeneralizedManinCheck:
    report: Report
    valid: bool
    transitive: bool
    exact: bool


def check_generalized_manin_triple(T):
    F = T.f
    n = F.dim
    S = [[qq(v) for v in row] for row in T.s]
    _check_symmetric(S)
    report = Report(f"generalized manin triple over {F.name}")

    rh, rk = rank_of(T.h, n), rank_of(T.k, n)
    total = rank_of(list(T.h) + list(T.k), n)
    report.add(
        "decomposition f = h + k",
        rh + rk == n and total == n,
        f"dim h = {rh}, dim k = {rk}, dim(h + k) = {total}, dim f = {n}",
    )
    for label, vectors in (("h", T.h), ("k", T.k)):
        w = subalgebra_witness(F.bracket, vectors, F.format)
        report.add(f"{label} subalgebra", not w, w)
    invariant = check_invariant_form(F, S, kind="tensor")
    report.add("s invariant", invariant, "s is not ad-invariant")

    annihilator = null_space(T.k, n)
    images = [mat_vec(S, lam) for lam in annihilator]
    bad = [v for v in images if any(v) and not span_contains(T.k, v)]
    report.add("k coisotropic", not bad, f"s#(k0) contains {F.format(bad[0])}" if bad else "")

    valid = report.ok
    image_rank = rank_of(images, n) if images else 0
    transitive = valid and image_rank == len(annihilator)
    exact = transitive and len(annihilator) == rk
    report.add("transitive", transitive, f"rank of s# on k0 is {image_rank} of {len(annihilator)}")
    report.add("exact", exact, f"s# maps k0 (dim {len(annihilator)}) onto a space of dim {image_rank}, dim k = {rk}")
    return GeneralizedManinCheck(report, valid, transitive, exact)


# ===============================
# QUASI-POISSON GROUP QUADRUPLES
# ===============================
@dataclass
class QPGroupQuadruple:
    g: LieAlgebraData          # quadratic
    f: LieAlgebraData          # quadratic
    h: list                    # Lagrangian subalgebra of f
    hstar: list                # complementary subalgebra
    rho: list                  # rho[j] = rho(e_j) in f coordinates


@dataclass
class QuadrupleCheck:
    report: Report
    K: list                    # basis of K inside d (+) fbar
    ambient: LieAlgebraData    # d (+) fbar
    rho_star: list             # rho*(x_a) in g coordinates


def rho_star(Q):
    """rho*(x) = G^-1 w with w_j = <x, rho(e_j)>_f, for every basis vector of h*."""
    Ginv = Q.g.tensor()
    out = []
    for x in Q.hstar:
        w = [Q.f.pair(x, Q.rho[j]) for j in range(Q.g.dim)]
        out.append(mat_vec(Ginv, w))
    return out


def _in_span_coords(vectors, target):
    coeffs = solve_in_span(vectors, target)
    if coeffs is None:
        raise ValueError("vector outside the declared subspace")
    return coeffs


def check_qp_group_quadruple(Q):
    g, F = Q.g, Q.f
    n, m = g.dim, F.dim
    if len(Q.rho) != n:
        raise ValueError(f"rho needs {n} images, got {len(Q.rho)}")
    report = Report(f"quasi-poisson group quadruple ({g.name}, {F.name})")

    w = lagrangian_witness(F.pair, Q.h, m)
    report.add("h lagrangian", not w, w)
    for label, vectors in (("h", Q.h), ("h*", Q.hstar)):
        w = subalgebra_witness(F.bracket, vectors, F.format)
        report.add(f"{label} subalgebra", not w, w)
    total = rank_of(list(Q.h) + list(Q.hstar), m)
    report.add(
        "f = h + h*",
        total == m and rank_of(Q.h, m) + rank_of(Q.hstar, m) == m,
        f"dim(h + h*) = {total} of {m}",
    )

    outside = [j for j in range(n) if not span_contains(Q.h, Q.rho[j])]
    report.add("rho lands in h", not outside, f"rho({g.basis_names[outside[0]]}) not in h" if outside else "")

    witness = ""
    for i, j in combinations(range(n), 2):
        lhs = F.bracket(Q.rho[i], Q.rho[j])
        rhs = [sum((c * Q.rho[k][a] for k, c in enumerate(g.structure[i][j])), ZERO) for a in range(m)]
        if lhs != rhs:
            witness = f"({g.basis_names[i]}, {g.basis_names[j]})"
            break
    report.add("rho morphism", not witness, witness)

    stars = rho_star(Q)
    hs = Q.hstar

    witness = ""
    for a, b in combinations(range(len(hs)), 2):
        coeffs = _in_span_coords(hs, F.bracket(hs[a], hs[b])) if span_contains(hs, F.bracket(hs[a], hs[b])) else None
        if coeffs is None:
            witness = f"[x{a}, x{b}] leaves h*"
            break
        lhs = [sum((c * stars[k][i] for k, c in enumerate(coeffs)), ZERO) for i in range(n)]
        rhs = g.bracket(stars[a], stars[b])
        if lhs != rhs:
            witness = f"(x{a}, x{b}): rho*[x,y] = {g.format(lhs)}, [rho*x, rho*y] = {g.format(rhs)}"
            break
    report.add("(1) rho* morphism", not witness, witness)

    witness = ""
    for a in range(len(hs)):
        for b in range(a, len(hs)):
            lhs, rhs = F.pair(hs[a], hs[b]), g.pair(stars[a], stars[b])
            if lhs != rhs:
                witness = f"(x{a}, x{b}): {format_rational(lhs)} != {format_rational(rhs)}"
                break
        if witness:
            break
    report.add("(2) rho* isometric", not witness, witness)

    witness = ""
    for i in range(n):
        for a in range(len(hs)):
            v = F.bracket(Q.rho[i], hs[a])
            if not span_contains(hs, v):
                witness = f"[rho({g.basis_names[i]}), x{a}] leaves h*"
                break
            coeffs = _in_span_coords(hs, v)
            lhs = [sum((c * stars[k][t] for k, c in enumerate(coeffs)), ZERO) for t in range(n)]
            rhs = g.bracket(g.basis_vector(i), stars[a])
            if lhs != rhs:
                witness = f"({g.basis_names[i]}, x{a}): {g.format(lhs)} != {g.format(rhs)}"
                break
        if witness:
            break
    report.add("(3) rho equivariance on h*", not witness, witness)

    d = double(g)
    ambient = direct_sum(d, F, negate_second=True, name=f"({d.name})+({F.name})bar", suffixes=("", "_f"))
    K = []
    for j in range(n):
        e = g.basis_vector(j)
        K.append(e + e + list(Q.rho[j]))
    for a, x in enumerate(hs):
        K.append(list(stars[a]) + _zeros(n) + list(x))

    w = lagrangian_witness(ambient.pair, K, ambient.dim)
    report.add("K lagrangian", not w, w)
    w = subalgebra_witness(ambient.bracket, K, ambient.format)
    report.add("K subalgebra", not w, w)
    return QuadrupleCheck(report, K, ambient, stars)
