"""
Text grammar for mixed polynomials

Grammar (whitespace between tokens is ignored):
    expr   := term (('+' | '-') term)*
    term   := factor ('*'? factor)*            # juxtaposition multiplies: "2u" == "2*u"
    factor := ('-' | '+') factor | base ('^' uint)?
    base   := number | 'i' | 'u' | 'z1' | 'z2' | 'conj(' expr ')' | '(' expr ')' | param

Variable families:
    u            one-variable polynomials
    z1, z2       two-variable polynomials
    Z0, Z1, Z2   homogeneous forms (parse_homogeneous only)
Mixing families in one expression is an error.

Usage:
    from src.polynomials.parser import parse, format_poly

    f = parse("u^2*conj(u)*(u - 2*conj(u)) + 1")
    format_poly(f)   # 'u^3*conj(u) - 2*u^2*conj(u)^2 + 1'
"""

import re
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.errors import DimensionMismatch, MixParseError, UsageError
from src.polynomials.mixed_poly import MixedPoly

logger = logging.getLogger(__name__)

# The parser works on three variable slots; each family uses a prefix of them.
_SLOTS = 3
_ZERO_EXP = (0,) * (2 * _SLOTS)

_FAMILIES = {
    "u": ("u", {"u": 0}),
    "z": ("z", {"z1": 0, "z2": 1}),
    "Z": ("Z", {"Z0": 0, "Z1": 1, "Z2": 2}),
}
_VARIABLE_FAMILY = {
    name: family for family, (_, names) in _FAMILIES.items() for name in names
}
_RESERVED = set(_VARIABLE_FAMILY) | {"i", "conj"}
# longest names first so "conj" wins over a lone letter
_SPLIT_ORDER = sorted(_RESERVED, key=lambda name: (-len(name), name))

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^()])"
)
_UINT_RE = re.compile(r"\d+")

Terms = Dict[Tuple[int, ...], complex]


# ============ RAW TERM ARITHMETIC ============

def _add(a: Terms, b: Terms, sign: int = 1) -> Terms:
    out = dict(a)
    for exp, c in b.items():
        value = out.get(exp, 0j) + sign * c
        if value == 0:
            out.pop(exp, None)
        else:
            out[exp] = value
    return out


def _mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(x + y for x, y in zip(e1, e2))
            out[key] = out.get(key, 0j) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


def _pow(a: Terms, n: int) -> Terms:
    result: Terms = {_ZERO_EXP: 1 + 0j}
    base = a
    while n:
        if n & 1:
            result = _mul(result, base)
        base = _mul(base, base)
        n >>= 1
    return result


def _conj(a: Terms) -> Terms:
    out: Terms = {}
    for exp, c in a.items():
        swapped: List[int] = []
        for k in range(_SLOTS):
            swapped += [exp[2 * k + 1], exp[2 * k]]
        out[tuple(swapped)] = c.conjugate()
    return out


def _constant(value: complex) -> Terms:
    return {_ZERO_EXP: complex(value)} if value != 0 else {}


def _variable(slot: int) -> Terms:
    exp = [0] * (2 * _SLOTS)
    exp[2 * slot] = 1
    return {tuple(exp): 1 + 0j}


# ============ TOKENIZER + RECURSIVE DESCENT ============

class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _split_identifier(run: str, pos: int, text: str) -> List[_Token]:
    """Split a juxtaposed run such as "uconj" or "z1z2" into reserved names."""
    pieces = []
    offset = 0
    while offset < len(run):
        name = next((n for n in _SPLIT_ORDER if run.startswith(n, offset)), None)
        if name is None:
            raise MixParseError(f"unknown identifier {run!r}", pos, text)
        pieces.append(_Token("ident", name, pos + offset))
        offset += len(name)
    return pieces


def _tokenize(text: str, params: Mapping[str, complex]) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise MixParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = match.lastgroup
        word = match.group()
        if kind == "ident" and word not in _RESERVED and word not in params:
            tokens.extend(_split_identifier(word, pos, text))
        elif kind != "ws":
            tokens.append(_Token(kind, word, pos))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, params: Mapping[str, complex], allowed: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text, params)
        self.index = 0
        self.params = params
        self.allowed = allowed
        self.family: Optional[str] = None
        self.family_pos = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str, token: Optional[_Token] = None) -> MixParseError:
        token = token or self.current
        return MixParseError(message, token.pos, self.text)

    def expect(self, text: str) -> _Token:
        if self.current.text != text or self.current.kind not in ("op", "ident"):
            found = self.current.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Terms:
        if self.current.kind == "end":
            raise self.error("empty expression")
        terms = self.expr()
        if self.current.kind != "end":
            raise self.error(f"unexpected token {self.current.text!r}")
        return terms

    def expr(self) -> Terms:
        result = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            sign = 1 if self.advance().text == "+" else -1
            result = _add(result, self.term(), sign)
        return result

    def _starts_factor(self) -> bool:
        token = self.current
        return token.kind in ("number", "ident") or (token.kind == "op" and token.text == "(")

    def term(self) -> Terms:
        result = self.factor()
        while True:
            if self.current.kind == "op" and self.current.text == "*":
                self.advance()
                result = _mul(result, self.factor())
            elif self._starts_factor():
                result = _mul(result, self.factor())
            else:
                return result

    def factor(self) -> Terms:
        token = self.current
        if token.kind == "op" and token.text in "+-":
            self.advance()
            inner = self.factor()
            return inner if token.text == "+" else {k: -v for k, v in inner.items()}
        base = self.base()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            exp_token = self.current
            if exp_token.kind == "op" and exp_token.text == "-":
                raise self.error("negative exponent", exp_token)
            if exp_token.kind != "number" or not _UINT_RE.fullmatch(exp_token.text):
                raise self.error("exponent must be a non-negative integer", exp_token)
            self.advance()
            base = _pow(base, int(exp_token.text))
        return base

    def _use_family(self, name: str, token: _Token) -> int:
        family = _VARIABLE_FAMILY[name]
        if family not in self.allowed:
            raise self.error(f"variable {name!r} is not allowed here", token)
        if self.family is None:
            self.family = family
            self.family_pos = token.pos
        elif self.family != family:
            raise self.error(
                f"variable {name!r} mixes variable families "
                f"(first variable at position {self.family_pos})",
                token,
            )
        return _FAMILIES[family][1][name]

    def base(self) -> Terms:
        token = self.current
        if token.kind == "number":
            self.advance()
            return _constant(float(token.text) if any(ch in token.text for ch in ".eE") else int(token.text))
        if token.kind == "op" and token.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind == "ident":
            name = token.text
            self.advance()
            if name == "i":
                return _constant(1j)
            if name == "conj":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return _conj(inner)
            if name in _VARIABLE_FAMILY:
                return _variable(self._use_family(name, token))
            if name in self.params:
                return _constant(self.params[name])
            raise self.error(f"unknown identifier {name!r}", token)
        found = token.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def _check_params(params: Optional[Mapping[str, complex]]) -> Dict[str, complex]:
    checked = {}
    for name, value in (params or {}).items():
        if name in _RESERVED:
            raise UsageError(f"parameter name {name!r} is reserved")
        checked[name] = complex(value)
    return checked


# ============ PUBLIC API ============

def parse(
    text: str,
    nvars: Optional[int] = None,
    params: Optional[Mapping[str, complex]] = None,
) -> MixedPoly:
    """
    Parse mixed-polynomial text into a canonical MixedPoly.

    Args:
        text: Expression in the u family or the z1/z2 family
        nvars: Optional hint; needed to read constant-only text as a
            two-variable polynomial
        params: Named constants (e.g. {"t": 0.01}) for parametrized families

    Returns:
        MixedPoly with nvars 1 (u) or 2 (z1, z2)
    """
    parser = _Parser(text, _check_params(params), allowed=("u", "z"))
    terms = parser.parse()
    family = parser.family
    if family is None:
        target = nvars or 1
    else:
        target = 1 if family == "u" else 2
        if nvars is not None and nvars != target:
            raise DimensionMismatch(
                f"text uses the {family!r} variables ({target} variable(s)) but nvars={nvars}"
            )
    reduced = {exp[: 2 * target]: c for exp, c in terms.items()}
    return MixedPoly(reduced, target)


def parse_homogeneous(
    text: str, params: Optional[Mapping[str, complex]] = None
) -> Tuple[Terms, int]:
    """
    Parse a form in Z0, Z1[, Z2].

    Returns:
        (terms keyed by exponent tuples over the homogeneous variables,
         number of homogeneous variables: 2 or 3)
    """
    parser = _Parser(text, _check_params(params), allowed=("Z",))
    terms = parser.parse()
    uses_z2 = any(exp[4] or exp[5] for exp in terms)
    count = 3 if uses_z2 else 2
    return {exp[: 2 * count]: c for exp, c in terms.items()}, count


def _format_real(x: float) -> str:
    if float(x).is_integer() and abs(x) < 2 ** 53:
        return str(int(x))
    return repr(float(x))


def _format_monomial(exp: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for k, name in enumerate(names):
        nu, mu = exp[2 * k], exp[2 * k + 1]
        if nu:
            parts.append(name if nu == 1 else f"{name}^{nu}")
        if mu:
            parts.append(f"conj({name})" if mu == 1 else f"conj({name})^{mu}")
    return "*".join(parts)


def _format_term(c: complex, monomial: str) -> Tuple[bool, str]:
    """(is_negative, body) so the caller can place the sign."""
    if c.imag == 0:
        negative, magnitude = c.real < 0, abs(c.real)
        if not monomial:
            return negative, _format_real(magnitude)
        if magnitude == 1:
            return negative, monomial
        return negative, f"{_format_real(magnitude)}*{monomial}"
    if c.real == 0:
        negative, magnitude = c.imag < 0, abs(c.imag)
        coeff = "i" if magnitude == 1 else f"{_format_real(magnitude)}*i"
        return negative, f"{coeff}*{monomial}" if monomial else coeff
    op = "+" if c.imag > 0 else "-"
    im = abs(c.imag)
    im_text = "i" if im == 1 else f"{_format_real(im)}*i"
    coeff = f"({_format_real(c.real)} {op} {im_text})"
    return False, f"{coeff}*{monomial}" if monomial else coeff


def format_terms(terms: Mapping[Tuple[int, ...], complex], names: Sequence[str]) -> str:
    """Render a term map; terms sorted by descending (total degree, exponents)."""
    if not terms:
        return "0"
    pieces = []
    for exp in sorted(terms, key=lambda e: (sum(e), tuple(e)), reverse=True):
        negative, body = _format_term(complex(terms[exp]), _format_monomial(exp, names))
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def format_poly(f: MixedPoly) -> str:
    """Deterministic text form of f; parse(format_poly(f)) == f."""
    names = ("u",) if f.nvars == 1 else ("z1", "z2")
    return format_terms(f.terms, names)


def format_homogenization(terms: Mapping[Tuple[int, ...], complex]) -> str:
    """Render a homogeneous form in Z0, Z1[, Z2]."""
    count = len(next(iter(terms))) // 2 if terms else 2
    return format_terms(terms, [f"Z{k}" for k in range(count)])


if __name__ == "__main__":
    samples = [
        "u^2*conj(u)*(u - 2*conj(u)) + 1",
        "u^3 + u + conj(u)",
        "2z1 + z1*conj(z1) + z2*conj(z2)",
        "(1 + 2i)u - 3i*conj(u)",
    ]
    for text in samples:
        f = parse(text)
        print(f"🔍 {text!r:40} → {format_poly(f)}")
    try:
        parse("u + z1")
    except MixParseError as e:
        print(f"✅ mixed families rejected: {e}\n{e.pointer()}")
