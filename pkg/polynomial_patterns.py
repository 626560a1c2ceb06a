# polynomial_patterns.py

import regex as re

from sympy.polys.domains import QQ

# ---------------------------
# Compiled regex patterns
# ---------------------------

# Identifier: "x11", "p_a", "xi_h_1"
PATTERN_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# One token at a given offset, leading whitespace allowed.
# Example: "  3/4*x^2" -> number "3", then op "/", number "4", op "*", ...
PATTERN_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>\d+)"                     # unsigned integer literal
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"  # variable / generator name
    r"|(?P<op>[-+*^/()])"                  # operators and brackets
    r")"
)

# Signed rational as used in JSON tables: "-3/4", "2", " +1/2 "
PATTERN_RATIONAL = re.compile(
    r"^\s*([+-]?)\s*(\d+)"     # sign + numerator
    r"(?:\s*/\s*(\d+))?\s*$"   # optional denominator
)

TRAILING_SPACE = re.compile(r"\s*$")


class Token:
    __slots__ = ("kind", "text", "position")

    def __init__(self, kind, text, position):
        self.kind = kind
        self.text = text
        self.position = position

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.position})"


# ---------------------------
# Helpers
# ---------------------------

def tokenize(text: str):
    """
    Split polynomial text into tokens.
    Returns (tokens, None) or (None, position_of_bad_character).
    The token list always ends with an "end" token.
    """
    tokens = []
    pos = 0
    while True:
        tail = TRAILING_SPACE.match(text, pos)
        if tail and tail.end() == len(text):
            tokens.append(Token("end", "", len(text)))
            return tokens, None

        m = PATTERN_TOKEN.match(text, pos)
        if not m:
            bad = pos
            while bad < len(text) and text[bad].isspace():
                bad += 1
            return None, bad

        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start))
        pos = m.end()


def is_identifier(name: str) -> bool:
    return bool(PATTERN_IDENT.fullmatch(name or ""))


def parse_rational(text):
    """
    Parse "p", "-p/q" or an int into a QQ element.
    Returns None when the text is not a rational literal.
    """
    if isinstance(text, bool):
        return None
    if isinstance(text, int):
        return QQ(text)

    m = PATTERN_RATIONAL.match(str(text))
    if not m:
        return None

    sign, num, den = m.groups()
    den = int(den) if den else 1
    if den == 0:
        return None

    value = QQ(int(num), den)
    return -value if sign == "-" else value


def format_rational(value) -> str:
    value = QQ.convert(value)
    num, den = int(QQ.numer(value)), int(QQ.denom(value))
    return str(num) if den == 1 else f"{num}/{den}"
