"""Pratt parser for the little rational-expression grammar used everywhere:
elements ("3/4+1/2i", "(T^2+1)/(2*T)"), certificate polynomials in X, and
rational map components in x1..xl.

Tokens: nonnegative integer literals, names ([A-Za-z][A-Za-z0-9]*), + - * / ^
and parentheses. Juxtaposition is implicit multiplication ("2i", "3(T+1)") at
the same precedence as '*'. '^' requires a nonnegative integer literal
exponent and binds tighter than unary minus.

The parser is generic over an "ops" object providing from_int, add, sub, mul,
div, neg and pow_int, plus a name -> value mapping, so the same grammar can
evaluate into any of the coefficient algebras.
"""

from .errors import ParseError

_SYMBOLS = set("+-*/^()")


def tokenize(text: str):
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("int", int(text[i:j])))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            out.append(("name", text[i:j]))
            i = j
            continue
        if ch in _SYMBOLS:
            out.append((ch, ch))
            i += 1
            continue
        raise ParseError(f"bad character {ch!r} at position {i}")
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens, ops, names):
        self.toks = tokens
        self.pos = 0
        self.ops = ops
        self.names = names

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr(0)
        kind, _ = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {kind!r} after expression")
        return value

    def atom(self):
        kind, val = self.advance()
        if kind == "int":
            return self.ops.from_int(val)
        if kind == "name":
            if val not in self.names:
                raise ParseError(f"unknown name {val!r}")
            return self.names[val]
        if kind == "(":
            value = self.expr(0)
            kind2, _ = self.advance()
            if kind2 != ")":
                raise ParseError("missing closing parenthesis")
            return value
        raise ParseError(f"expected a value, got {kind!r}")

    def expr(self, minbp: int):
        kind, _ = self.peek()
        if kind == "-":
            self.advance()
            value = self.ops.neg(self.expr(25))
        elif kind == "+":
            self.advance()
            value = self.expr(25)
        else:
            value = self.atom()
        while True:
            kind, _ = self.peek()
            if kind == "^" and minbp <= 30:
                self.advance()
                ekind, eval_ = self.advance()
                if ekind != "int":
                    raise ParseError("exponent must be a nonnegative integer literal")
                value = self.ops.pow_int(value, eval_)
            elif kind in ("*", "/") and minbp <= 20:
                self.advance()
                rhs = self.expr(21)
                value = self.ops.mul(value, rhs) if kind == "*" else self.ops.div(value, rhs)
            elif kind in ("int", "name", "(") and minbp <= 20:
                rhs = self.expr(21)
                value = self.ops.mul(value, rhs)
            elif kind in ("+", "-") and minbp <= 10:
                self.advance()
                rhs = self.expr(11)
                value = self.ops.add(value, rhs) if kind == "+" else self.ops.sub(value, rhs)
            else:
                return value


def parse_expression(text: str, ops, names: dict):
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    return _Parser(tokenize(text), ops, names).parse()
