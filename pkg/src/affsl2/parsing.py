"""Expression parser and canonical printer for Elements and UElements.

Grammar (recursive descent, standard precedence; ^ binds tightest and is
right-associative, * next, then binary + and -; a leading - negates the
first term):

  expr       := ['-'] term (('+' | '-') term)*
  term       := factor ('*' factor)*
  factor     := primary ['^' signed_int]
  primary    := rational | atom | '(' expr ')'
  rational   := int ['/' int]
  atom       := ('x' | 'y') '[' signed_int ']'          (elements)
              | ('e' | 'f' | 'h') '[' signed_int ']'    (algebra words)
              | 'c' | 'd'

Exponents are integers; a negative power of anything but a single monomial
(or an f-generator) is rejected.  y-indices must be positive.

The printer emits terms in canonical monomial order, so parse(print(v))
returns v for every element.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from .errors import ElementIndexError, ElementSyntaxError
from .realization import CENTRAL, DEGREE, E, F, Gen, H, format_generator
from .ring import (
    KIND_X,
    Element,
    Monomial,
    Q,
    X,
    Y,
    add,
    const,
    mul,
    neg,
    power,
    sorted_terms,
    var,
)
from .ualgebra import UElement, u_add, u_gen, u_mul, u_scalar, u_scale, uword, uelement

Token = Tuple[str, object, int]  # (kind, value, position)


def _tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            if j < n and text[j] == "/":
                k = j + 1
                if k >= n or not text[k].isdigit():
                    raise ElementSyntaxError("expected digits after '/'", j + 1)
                m = k
                while m < n and text[m].isdigit():
                    m += 1
                out.append(("num", Fraction(num, int(text[k:m])), i))
                i = m
            else:
                out.append(("num", Fraction(num), i))
                i = j
            continue
        if ch.isalpha():
            out.append(("name", ch, i))
            i += 1
            continue
        if ch in "[]()+-*^":
            out.append((ch, ch, i))
            i += 1
            continue
        raise ElementSyntaxError(f"unexpected character {ch!r}", i)
    out.append(("end", None, n))
    return out


class _Parser:
    """Shared sum/product/power machinery; atoms are supplied by subclasses."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self, kind: Optional[str] = None) -> Token:
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ElementSyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.pos += 1
        return tok

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        tok = self.take("num")
        if tok[1].denominator != 1:
            raise ElementSyntaxError("expected an integer", tok[2])
        return sign * int(tok[1])

    def bracket_index(self) -> int:
        self.take("[")
        idx = self.signed_int()
        self.take("]")
        return idx

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ElementSyntaxError("trailing input", tok[2])
        return value

    def expr(self):
        negate = False
        if self.peek()[0] == "-":
            self.take()
            negate = True
        value = self.term()
        if negate:
            value = self.negate(value)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            if op == "-":
                rhs = self.negate(rhs)
            value = self.combine(value, rhs)
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "*":
            self.take()
            value = self.multiply(value, self.factor())
        return value

    def factor(self):
        tok = self.peek()
        base = self.primary()
        if self.peek()[0] == "^":
            caret = self.take()
            exp = self.signed_int()
            base = self.raise_power(base, exp, caret[2])
        return base

    def primary(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return self.scalar(tok[1])
        if tok[0] == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if tok[0] == "name":
            return self.atom()
        raise ElementSyntaxError("expected a number, variable, or '('", tok[2])


class _ElementParser(_Parser):
    def scalar(self, q: Fraction) -> Element:
        return const(q)

    def negate(self, a: Element) -> Element:
        return neg(a)

    def combine(self, a: Element, b: Element) -> Element:
        return add(a, b)

    def multiply(self, a: Element, b: Element) -> Element:
        return mul(a, b)

    def raise_power(self, a: Element, k: int, pos: int) -> Element:
        try:
            return power(a, k)
        except ValueError as exc:
            raise ElementSyntaxError(str(exc), pos)

    def atom(self) -> Element:
        tok = self.take("name")
        name = tok[1]
        if name not in ("x", "y"):
            raise ElementSyntaxError(f"unknown variable {name!r}", tok[2])
        idx = self.bracket_index()
        if name == "y":
            if idx < 1:
                raise ElementIndexError(f"y-index must be positive, got y[{idx}]")
            return var(Y(idx))
        return var(X(idx))


class _UElementParser(_Parser):
    def scalar(self, q: Fraction) -> UElement:
        return u_scalar(q)

    def negate(self, u: UElement) -> UElement:
        return u_scale(u, -1)

    def combine(self, a: UElement, b: UElement) -> UElement:
        return u_add(a, b)

    def multiply(self, a: UElement, b: UElement) -> UElement:
        return u_mul(a, b)

    def raise_power(self, u: UElement, k: int, pos: int) -> UElement:
        # negative powers only make sense on a single bare generator word
        if len(u) == 1 and len(u[0].factors) == 1 and u[0].coeff == 1:
            g, p = u[0].factors[0]
            return uelement([uword(1, ((g, p * k),))])
        if k < 0:
            raise ElementSyntaxError("negative power of a compound word", pos)
        out = u_scalar(1)
        for _ in range(k):
            out = u_mul(out, u)
        return out

    def atom(self) -> UElement:
        tok = self.take("name")
        name = tok[1]
        if name == "c":
            return u_gen(CENTRAL)
        if name == "d":
            return u_gen(DEGREE)
        if name not in ("e", "f", "h"):
            raise ElementSyntaxError(f"unknown generator {name!r}", tok[2])
        idx = self.bracket_index()
        return u_gen({"e": E, "f": F, "h": H}[name](idx))


def parse_element(text: str) -> Element:
    return _ElementParser(text).parse()


def parse_uelement(text: str) -> UElement:
    return _UElementParser(text).parse()


def parse_generator(text: str) -> Gen:
    u = parse_uelement(text)
    if len(u) == 1 and u[0].coeff == 1 and len(u[0].factors) == 1 and u[0].factors[0][1] == 1:
        return u[0].factors[0][0]
    raise ElementSyntaxError("expected a single generator like e[-1], f[0], h[2], c, or d", 0)


# ---------------------------------------------------------------------------
# printing


def format_var(v) -> str:
    kind, idx = v
    return f"x[{idx}]" if kind == KIND_X else f"y[{idx}]"


def format_monomial(m: Monomial) -> str:
    return "*".join(
        format_var(v) + (f"^{e}" if e != 1 else "") for v, e in m
    )


def _signed_join(parts: List[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def format_element(a: Element) -> str:
    """Canonical text form; parse_element inverts it exactly."""
    parts = []
    for m, c in sorted_terms(a):
        body = format_monomial(m)
        if not m:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c}*{body}")
    return _signed_join(parts)


def format_uelement(u: UElement) -> str:
    parts = []
    for w in sorted(u, key=lambda w: w.factors):
        body = "*".join(
            format_generator(g) + (f"^{p}" if p != 1 else "") for g, p in w.factors
        )
        if not w.factors:
            parts.append(str(w.coeff))
        elif w.coeff == 1:
            parts.append(body)
        elif w.coeff == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{w.coeff}*{body}")
    return _signed_join(parts)
