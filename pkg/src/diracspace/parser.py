"""Expression grammar for polynomials, forms, fields and sections.

Tokens: variables ``x1..x9`` / ``x{10}``, basis forms ``dx<i>``, basis
fields ``Dx<i>``, rationals ``p/q``, wedge/product ``^`` and ``*``
(one graded-commutative product; ``x1^2`` is a power), ``+``/``-`` and
parentheses; whitespace-insensitive.  ``parse_expression`` classifies
the normalized result as a Poly, Form, VField, MultiVec or (given the
order p) a SectionEp.  Nilpotent squares such as ``dx1^dx1`` normalize
to zero with a warning.  The canonical printers are the classes' str();
parse o print o parse = parse.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .calculus import Form, MultiVec, VField
from .courant import SectionEp
from .poly import Context, Poly


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line, self.col = line, col


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<dx>dx(?:\d+|\{\d+\}))
  | (?P<ddx>Dx(?:\d+|\{\d+\}))
  | (?P<var>x(?:\d+|\{\d+\}))
  | (?P<op>[-+*^()])
""", re.VERBOSE)


def _index(text: str) -> int:
    digits = text.strip("{}")
    return int(digits)


def tokenize(src: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(("end", "", line, col))
    return tokens


class _Terms:
    """Sum of coefficient * dx-word * Dx-word, sign-normalized."""

    def __init__(self, ctx: Context, terms=None, warnings=None):
        self.ctx = ctx
        self.terms = terms if terms is not None else {}
        self.warnings = warnings if warnings is not None else []

    @staticmethod
    def scalar(ctx: Context, p: Poly) -> "_Terms":
        return _Terms(ctx, {((), ()): p} if not p.is_zero() else {})

    @staticmethod
    def generator(ctx: Context, kind: str, i: int) -> "_Terms":
        if not 1 <= i <= ctx.dim:
            raise ValueError(f"index {i} out of range 1..{ctx.dim}")
        key = ((i,), ()) if kind == "dx" else ((), (i,))
        return _Terms(ctx, {key: Poly.constant(ctx, 1)})

    def _put(self, out, key, c):
        if key in out:
            out[key] = out[key] + c
        else:
            out[key] = c

    def __add__(self, other: "_Terms") -> "_Terms":
        out = dict(self.terms)
        for k, c in other.terms.items():
            self._put(out, k, c)
        return _Terms(self.ctx, {k: c for k, c in out.items()
                                 if not c.is_zero()},
                      self.warnings + other.warnings)

    def __neg__(self) -> "_Terms":
        return _Terms(self.ctx, {k: -c for k, c in self.terms.items()},
                      list(self.warnings))

    def __mul__(self, other: "_Terms") -> "_Terms":
        out: dict = {}
        warnings = self.warnings + other.warnings
        for (fa, va), ca in self.terms.items():
            for (fb, vb), cb in other.terms.items():
                sf, f = _sort_word(fa + fb)
                sv, v = _sort_word(va + vb)
                if sf == 0 or sv == 0:
                    word = fa + fb if sf == 0 else va + vb
                    warnings.append(
                        "repeated factor normalizes to zero: "
                        + "^".join(("dx" if sf == 0 else "Dx") + str(i)
                                   for i in word))
                    continue
                self._put(out, (f, v), (sf * sv) * (ca * cb))
        return _Terms(self.ctx, {k: c for k, c in out.items()
                                 if not c.is_zero()}, warnings)


def _sort_word(word):
    word = list(word)
    sign = 1
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j - 1] > word[j]:
            word[j - 1], word[j] = word[j], word[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(word, word[1:]):
        if a == b:
            return 0, ()
    return sign, tuple(word)


class _Parser:
    def __init__(self, src: str, ctx: Context):
        self.tokens = tokenize(src)
        self.ctx = ctx
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message):
        _, _, line, col = self.peek()
        raise ParseError(message, line, col)

    def parse(self) -> _Terms:
        out = self.sum_expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return out

    def sum_expr(self) -> _Terms:
        neg = False
        if self.peek()[:2] == ("op", "-"):
            self.next()
            neg = True
        elif self.peek()[:2] == ("op", "+"):
            self.next()
        out = self.term()
        if neg:
            out = -out
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.next()[1]
            t = self.term()
            out = out + (-t if op == "-" else t)
        return out

    def term(self) -> _Terms:
        out = self.power()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "^"):
            self.next()
            out = out * self.power()
        return out

    def power(self) -> _Terms:
        # unary minus binds looser than a power: -x1^2 is -(x1^2)
        if self.peek()[:2] == ("op", "-"):
            self.next()
            return -self.power()
        base = self.atom()
        # x1^2 means a square: ^ followed by a bare integer is a power
        if (self.peek()[:2] == ("op", "^")
                and self.tokens[self.pos + 1][0] == "num"
                and "/" not in self.tokens[self.pos + 1][1]):
            self.next()
            k = int(self.next()[1])
            out = _Terms.scalar(self.ctx, Poly.constant(self.ctx, 1))
            for _ in range(k):
                out = out * base
            return out
        return base

    def atom(self) -> _Terms:
        kind, text, line, col = self.peek()
        if kind == "num":
            self.next()
            if "/" in text:
                a, b = text.split("/")
                val = Fraction(int(a), int(b))
            else:
                val = Fraction(int(text))
            return _Terms.scalar(self.ctx, Poly.constant(self.ctx, val))
        if kind == "var":
            self.next()
            i = _index(text[1:])
            if not 1 <= i <= self.ctx.dim:
                raise ParseError(f"unknown variable {text}", line, col)
            return _Terms.scalar(self.ctx, Poly.variable(self.ctx, i))
        if kind in ("dx", "ddx"):
            self.next()
            i = _index(text[2:])
            if not 1 <= i <= self.ctx.dim:
                raise ParseError(f"unknown basis index {text}", line, col)
            return _Terms.generator(self.ctx, "dx" if kind == "dx" else "Dx",
                                    i)
        if (kind, text) == ("op", "("):
            self.next()
            out = self.sum_expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.next()
            return out
        self.error(f"unexpected token {text!r}" if text else "unexpected end "
                   "of input")


def parse_expression(src: str, ctx: Context, p: int | None = None):
    """Parse and classify; returns (value, warnings).

    The value is a Poly, Form, VField or MultiVec according to the basis
    content; a mix of degree-1 field terms and degree-p form terms with
    ``p`` supplied yields a SectionEp.
    """
    t = _Parser(src, ctx).parse()
    form_terms = {k: c for k, c in t.terms.items() if k[0]}
    field_terms = {k: c for k, c in t.terms.items() if k[1]}
    scalar = t.terms.get(((), ()), Poly.zero(ctx))
    if any(k[0] and k[1] for k in t.terms):
        raise ParseError("cannot mix dx and Dx factors in one term", 1, 1)
    form_degs = {len(k[0]) for k in form_terms}
    field_degs = {len(k[1]) for k in field_terms}
    if len(form_degs) > 1 or len(field_degs) > 1:
        raise ParseError("mixed degrees in one expression", 1, 1)
    fdeg = form_degs.pop() if form_degs else None
    vdeg = field_degs.pop() if field_degs else None
    form = Form(ctx, fdeg or 0,
                {k[0]: c for k, c in form_terms.items()}) if fdeg else None
    if vdeg is not None:
        mv = MultiVec(ctx, vdeg, {k[1]: c for k, c in field_terms.items()})
    else:
        mv = None
    if p is None:
        if mv is not None and form is None and scalar.is_zero():
            return (mv.to_vfield() if vdeg == 1 else mv), t.warnings
        if mv is None and form is not None and scalar.is_zero():
            return form, t.warnings
        if mv is None and form is None:
            return Poly(ctx, scalar.terms), t.warnings
        raise ParseError("supply the order p to read X + alpha sections",
                         1, 1)
    # a section X + alpha of order p (the 0-form part is alpha when p == 0)
    if mv is not None and vdeg != 1:
        raise ParseError("section parts must be plain vector fields", 1, 1)
    X = mv.to_vfield() if mv is not None else VField.zero(ctx)
    if form is None:
        if not scalar.is_zero() and p != 0:
            raise ParseError(f"scalar part needs p = 0, got p = {p}", 1, 1)
        form = Form.from_poly(scalar) if p == 0 else Form.zero(ctx, p)
    elif not scalar.is_zero():
        raise ParseError("cannot mix a scalar with a form of degree > 0",
                         1, 1)
    if form.degree != p:
        raise ParseError(f"form part has degree {form.degree}, "
                         f"expected {p}", 1, 1)
    return SectionEp(p, X, form), t.warnings


def print_expression(value) -> str:
    """Canonical printer (round-trips through parse_expression)."""
    return str(value)
