"""Multivariate polynomials with dense exponent vectors and sparse term lists.

A monomial is a tuple of non-negative exponents, one per ring variable.  A
polynomial is a dict from monomials to nonzero field elements; the term order
is supplied externally (``MonomialOrder``) and used for leading terms,
canonical printing and Groebner computations.
"""

from __future__ import annotations

from typing import Iterable

from .errors import FieldMismatch, StablehomError, VariableCountMismatch
from .scalars import Field

Monomial = tuple  # tuple[int, ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class MonomialOrder:
    """A degree-compatible total order on monomials.

    ``kind`` is ``degrevlex`` or ``deglex``; ``priority`` permutes the
    variables (earlier = more significant); ``weights`` are the positive
    variable degrees used for the degree comparison.
    """

    def __init__(self, kind: str, nvars: int, priority=None, weights=None):
        if kind not in ("degrevlex", "deglex"):
            raise StablehomError(f"unknown monomial order kind {kind!r}")
        self.kind = kind
        self.nvars = nvars
        self.priority = tuple(priority) if priority is not None else tuple(range(nvars))
        if sorted(self.priority) != list(range(nvars)):
            raise StablehomError("priority must be a permutation of the variables")
        self.weights = tuple(weights) if weights is not None else (1,) * nvars
        if any(w <= 0 for w in self.weights):
            raise StablehomError("variable degrees must be positive")

    def degree(self, m: Monomial) -> int:
        w = self.weights
        return sum(e * w[i] for i, e in enumerate(m))

    def key(self, m: Monomial):
        """Sort key; larger key = larger monomial."""
        d = self.degree(m)
        if self.kind == "deglex":
            return (d,) + tuple(m[p] for p in self.priority)
        return (d,) + tuple(-m[p] for p in reversed(self.priority))

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        if len(m1) != len(m2) or len(m1) != self.nvars:
            raise VariableCountMismatch("monomials of different length")
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def descr(self) -> str:
        return f"{self.kind}{list(self.priority)}"


def compare(m1: Monomial, m2: Monomial, order: MonomialOrder) -> int:
    """Public comparison: -1, 0 or 1."""
    return order.compare(m1, m2)


class Poly:
    """Immutable sparse polynomial over an exact field."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: dict):
        self.field = field
        self.nvars = nvars
        self.terms = terms  # Monomial -> nonzero coeff; treat as frozen

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero(field: Field, nvars: int) -> "Poly":
        return Poly(field, nvars, {})

    @staticmethod
    def const(field: Field, nvars: int, n: int) -> "Poly":
        c = field.from_int(n)
        if field.is_zero(c):
            return Poly.zero(field, nvars)
        return Poly(field, nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(field: Field, nvars: int, i: int) -> "Poly":
        m = tuple(1 if j == i else 0 for j in range(nvars))
        return Poly(field, nvars, {m: field.from_int(1)})

    @staticmethod
    def from_terms(field: Field, nvars: int, items: Iterable) -> "Poly":
        acc: dict = {}
        for m, c in items:
            if m in acc:
                c = field.add(acc[m], c)
            if field.is_zero(c):
                acc.pop(m, None)
            else:
                acc[m] = c
        return Poly(field, nvars, acc)

    # -- predicates --------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Poly") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.nvars != other.nvars:
            raise VariableCountMismatch(f"{self.nvars} vs {other.nvars}")

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.nvars, self.field.from_int(0))

    def degrees(self, weights) -> set:
        return {sum(e * weights[i] for i, e in enumerate(m)) for m in self.terms}

    def is_homogeneous(self, weights) -> bool:
        return len(self.degrees(weights)) <= 1

    def degree(self, weights) -> int | None:
        """Degree of a nonzero homogeneous polynomial, else max term degree."""
        if not self.terms:
            return None
        return max(sum(e * weights[i] for i, e in enumerate(m)) for m in self.terms)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = f.add(out[m], c)
                if f.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Poly(f, self.nvars, out)

    def __neg__(self) -> "Poly":
        f = self.field
        return Poly(f, self.nvars, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = f.sub(out[m], c)
                if f.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = f.neg(c)
        return Poly(f, self.nvars, out)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = f.mul(c1, c2)
                if m in out:
                    s = f.add(out[m], c)
                    if f.is_zero(s):
                        del out[m]
                    else:
                        out[m] = s
                else:
                    out[m] = c
        return Poly(f, self.nvars, out)

    def scale(self, c) -> "Poly":
        f = self.field
        if f.is_zero(c):
            return Poly.zero(f, self.nvars)
        return Poly(f, self.nvars, {m: f.mul(v, c) for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c) -> "Poly":
        f = self.field
        if f.is_zero(c):
            return Poly.zero(f, self.nvars)
        return Poly(f, self.nvars, {mono_mul(m, mono): f.mul(v, c) for m, v in self.terms.items()})

    def leading(self, order: MonomialOrder):
        """(monomial, coeff) of the largest term; None for the zero polynomial."""
        if not self.terms:
            return None
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    # -- canonical form ----------------------------------------------------
    def key(self) -> tuple:
        """Hashable canonical form (terms sorted by exponent tuple)."""
        return tuple(sorted((m, str(c)) for m, c in self.terms.items()))

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.nvars, self.key()))

    def __repr__(self):
        return f"Poly({self.terms!r})"


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Exact arithmetic with explicit pre-condition checks."""
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise StablehomError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# Text syntax:  + - * ^, integer coefficients, variables by name.
# ---------------------------------------------------------------------------


class _PolyText:
    def __init__(self, text: str, var_names, field: Field):
        self.text = text
        self.pos = 0
        self.vars = {name: i for i, name in enumerate(var_names)}
        self.nvars = len(var_names)
        self.field = field

    def error(self, msg: str) -> StablehomError:
        return StablehomError(f"polynomial syntax error at column {self.pos + 1}: {msg}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Poly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.text[self.pos] == "-":
                sign = -sign
            self.pos += 1
        acc = self.term().scale(self.field.from_int(sign))
        while self.peek() in ("+", "-"):
            sign = 1
            while self.peek() in ("+", "-"):
                if self.text[self.pos] == "-":
                    sign = -sign
                self.pos += 1
            acc = acc + self.term().scale(self.field.from_int(sign))
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.factor()
        return acc

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            n = self.integer()
            if n < 0:
                raise self.error("negative exponent")
            out = Poly.const(self.field, self.nvars, 1)
            for _ in range(n):
                out = out * base
            return out
        return base

    def atom(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == "-":
            self.pos += 1
            return -self.factor()
        if ch.isdigit():
            return Poly.const(self.field, self.nvars, self.integer())
        if ch.isalpha() or ch == "_":
            name = self.name()
            if name not in self.vars:
                raise self.error(f"unknown variable {name!r}")
            return Poly.variable(self.field, self.nvars, self.vars[name])
        raise self.error("expected a coefficient, variable or '('")

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start : self.pos])

    def name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start : self.pos]


def parse_poly(text: str, var_names, field: Field) -> Poly:
    p = _PolyText(text, var_names, field)
    p.skip_ws()
    if p.pos >= len(text.strip()) and not text.strip():
        return Poly.zero(field, len(list(var_names)))
    out = p.expr()
    p.skip_ws()
    if p.pos != len(p.text):
        raise p.error("trailing input")
    return out


def format_coeff(field: Field, c) -> str:
    return field.to_str(c)


def format_poly(p: Poly, var_names, order: MonomialOrder) -> str:
    """Canonical text form: terms descending in the order, explicit * and ^."""
    if p.is_zero:
        return "0"
    field = p.field
    monos = sorted(p.terms, key=order.key, reverse=True)
    parts: list[str] = []
    for idx, m in enumerate(monos):
        c = p.terms[m]
        cs = format_coeff(field, c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(var_names[i])
            elif e > 1:
                factors.append(f"{var_names[i]}^{e}")
        if not factors:
            body = cs
        elif cs == "1":
            body = "*".join(factors)
        else:
            body = "*".join([cs] + factors)
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
