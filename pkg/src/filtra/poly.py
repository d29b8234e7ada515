"""Dense-exponent multivariate polynomials over an exact field.

Monomials are plain int tuples (one slot per variable, total degree is just
``sum``).  A ``PolyContext`` bundles variable names, the coefficient field and
the active monomial order; contexts are interned so identity comparison works
and sort keys can be memoized per context.
"""
from __future__ import annotations

import itertools
from typing import Iterable

from .fields import QQ
from .orders import MonomialOrder, grevlex

Monomial = tuple  # exponent vector; degree = sum(m)


class ContextMismatch(ValueError):
    """Operands live in different ring contexts."""


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """Exact quotient a / b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def mono_deg(a: Monomial) -> int:
    return sum(a)


_CONTEXTS: dict = {}


class PolyContext:
    """Interned ring context: variable names, field, active monomial order."""

    __slots__ = ("variables", "field", "order", "_keys", "_negkeys", "descriptor")

    def __init__(self, variables: tuple, field, order: MonomialOrder):
        self.variables = variables
        self.field = field
        self.order = order
        self._keys: dict = {}
        self._negkeys: dict = {}
        self.descriptor = f"{','.join(variables)}|{field.descriptor}|{order.descriptor}"

    @staticmethod
    def get(variables: Iterable[str], field=QQ, order: MonomialOrder | None = None) -> "PolyContext":
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        if order is None:
            order = grevlex(len(variables))
        if order.nvars != len(variables):
            raise ValueError("order width does not match variable count")
        ck = (variables, field, order)
        ctx = _CONTEXTS.get(ck)
        if ctx is None:
            ctx = _CONTEXTS[ck] = PolyContext(variables, field, order)
        return ctx

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def key(self, m: Monomial) -> tuple:
        k = self._keys.get(m)
        if k is None:
            k = self._keys[m] = self.order.key(m)
        return k

    def negkey(self, m: Monomial) -> tuple:
        k = self._negkeys.get(m)
        if k is None:
            k = self._negkeys[m] = tuple(-c for c in self.order.key(m))
        return k

    def with_order(self, order: MonomialOrder) -> "PolyContext":
        return PolyContext.get(self.variables, self.field, order)

    def zero_mono(self) -> Monomial:
        return (0,) * self.nvars

    def var_mono(self, i: int, e: int = 1) -> Monomial:
        m = [0] * self.nvars
        m[i] = e
        return tuple(m)

    def monomials_of_degree(self, d: int) -> list:
        """All exponent vectors of total degree exactly d."""
        out = []
        n = self.nvars
        for bars in itertools.combinations(range(d + n - 1), n - 1):
            prev, e = -1, []
            for b in bars:
                e.append(b - prev - 1)
                prev = b
            e.append(d + n - 2 - prev)
            out.append(tuple(e))
        return out

    def __repr__(self):
        return f"PolyContext({self.descriptor})"


class Polynomial:
    """Immutable polynomial; terms kept sorted descending in the active order."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: PolyContext, terms: dict):
        self.ctx = ctx
        key = ctx.key
        self.terms = tuple(sorted(terms.items(), key=lambda t: key(t[0]), reverse=True))
        self._hash = None

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero(ctx: PolyContext) -> "Polynomial":
        return Polynomial(ctx, {})

    @staticmethod
    def constant(ctx: PolyContext, c) -> "Polynomial":
        if not c:
            return Polynomial(ctx, {})
        return Polynomial(ctx, {ctx.zero_mono(): c})

    @staticmethod
    def from_int(ctx: PolyContext, n: int) -> "Polynomial":
        return Polynomial.constant(ctx, ctx.field.from_int(n))

    @staticmethod
    def variable(ctx: PolyContext, name: str) -> "Polynomial":
        i = ctx.variables.index(name)
        return Polynomial(ctx, {ctx.var_mono(i): ctx.field.one})

    @staticmethod
    def monomial(ctx: PolyContext, m: Monomial, c=None) -> "Polynomial":
        if c is None:
            c = ctx.field.one
        if not c:
            return Polynomial(ctx, {})
        return Polynomial(ctx, {tuple(m): c})

    def as_dict(self) -> dict:
        return dict(self.terms)

    # -- inspection -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def lead_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no lead monomial")
        return self.terms[0][0]

    def lead_coefficient(self):
        if not self.terms:
            raise ValueError("zero polynomial has no lead coefficient")
        return self.terms[0][1]

    def constant_term(self):
        z = self.ctx.zero_mono()
        for m, c in self.terms:
            if m == z:
                return c
        return self.ctx.field.zero

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m, _ in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ctx is not other.ctx:
            raise ContextMismatch(
                f"operands in different contexts: {self.ctx.descriptor} vs {other.ctx.descriptor}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        field = self.ctx.field
        out = dict(self.terms)
        for m, c in other.terms:
            prev = out.get(m)
            if prev is None:
                out[m] = c
            else:
                s = field.add(prev, c)
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ctx, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        field = self.ctx.field
        out = dict(self.terms)
        for m, c in other.terms:
            prev = out.get(m)
            if prev is None:
                out[m] = field.neg(c)
            else:
                s = field.sub(prev, c)
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ctx, out)

    def __neg__(self) -> "Polynomial":
        field = self.ctx.field
        return Polynomial(self.ctx, {m: field.neg(c) for m, c in self.terms})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        field = self.ctx.field
        out: dict = {}
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        for m1, c1 in a:
            for m2, c2 in b:
                m = tuple(x + y for x, y in zip(m1, m2))
                prev = out.get(m)
                if prev is None:
                    out[m] = field.mul(c1, c2)
                else:
                    s = field.add(prev, field.mul(c1, c2))
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return Polynomial(self.ctx, out)

    def scale(self, c) -> "Polynomial":
        if not c:
            return Polynomial.zero(self.ctx)
        field = self.ctx.field
        return Polynomial(self.ctx, {m: field.mul(c, v) for m, v in self.terms})

    def shift(self, m: Monomial) -> "Polynomial":
        """Multiply by a monomial."""
        return Polynomial(self.ctx, {mono_mul(m, mm): c for mm, c in self.terms})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial.constant(self.ctx, self.ctx.field.one)
        base = self
        while n:
            if n & 1:
                out = out * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return out

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.terms[0][1]
        if lc == self.ctx.field.one:
            return self
        field = self.ctx.field
        inv = field.inv(lc)
        return Polynomial(self.ctx, {m: field.mul(inv, c) for m, c in self.terms})

    # -- conversion -------------------------------------------------------

    def convert(self, ctx: PolyContext) -> "Polynomial":
        """Re-sort into another context over the same variables and field."""
        if ctx.variables != self.ctx.variables or ctx.field != self.ctx.field:
            raise ContextMismatch("convert only changes the monomial order")
        return Polynomial(ctx, dict(self.terms))

    # -- comparison and printing -----------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.ctx is other.ctx
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.descriptor, self.terms))
        return self._hash

    def __str__(self):
        return poly_to_str(self)

    def __repr__(self):
        return f"<{poly_to_str(self)}>"


def _coeff_str(field, c) -> str:
    return field.to_str(c)


def poly_to_str(p: Polynomial) -> str:
    """Canonical print: descending order, ^ powers, explicit *."""
    if p.is_zero:
        return "0"
    ctx = p.ctx
    field = ctx.field
    parts = []
    for m, c in p.terms:
        body = "*".join(
            v if e == 1 else f"{v}^{e}"
            for v, e in zip(ctx.variables, m) if e)
        cs = _coeff_str(field, c)
        negative = cs.startswith("-")
        if negative:
            cs = cs[1:]
        if not body:
            chunk = cs
        elif cs == "1":
            chunk = body
        else:
            chunk = f"{cs}*{body}"
        if not parts:
            parts.append(f"-{chunk}" if negative else chunk)
        else:
            parts.append(f"- {chunk}" if negative else f"+ {chunk}")
    return " ".join(parts)
