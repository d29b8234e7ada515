"""Ideal arithmetic in Noetherian local rings presented as quotients of
polynomial rings localized at the origin.

A ring is k[x1..xn]/J with the maximal ideal m = (x1..xn).  Ideal handles
carry generators reduced modulo a fixed Groebner basis of J.  The
constructive operations (sum, product, intersection, colon, saturation)
commute with localization, so a handle is a faithful presentation of its
localized ideal.  Membership, containment and equality are decided
locally through colon ideals; colengths are certified finite by exhibiting
a power of each variable inside the ideal, which pins the support to the
origin and makes the global standard-monomial count equal the local length.
"""
from __future__ import annotations

from .fields import QQ
from .groebner import (GroebnerBasis, count_box_complement, eliminate,
                       groebner_basis, standard_monomials)
from .orders import grevlex
from .poly import (Polynomial, PolyContext, mono_divides, mono_lcm)
from .parser import parse_polynomial


class NotMPrimary(ValueError):
    """A finite colength was required but could not be certified."""


class NotNested(ValueError):
    """Subquotient length asked for ideals that are not nested."""


class NotFiniteLength(ValueError):
    """A subquotient is not killed by any tested power of the maximal ideal."""


SUBQUOTIENT_POWER_BOUND = 40
_PURE_POWER_CAP = 64
_SATURATION_CAP = 100


def _as_poly(ring: "LocalRing", g) -> Polynomial:
    if isinstance(g, Polynomial):
        return g if g.ctx is ring.ctx else g.convert(ring.ctx)
    if isinstance(g, str):
        return parse_polynomial(g, ring.ctx)
    if isinstance(g, int):
        return Polynomial.from_int(ring.ctx, g)
    raise TypeError(f"cannot interpret {g!r} as a ring element")


def _exact_divide(h: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient h/g in the ambient polynomial ring; h must be a multiple."""
    ctx = h.ctx
    lmg = g.lead_monomial()
    lcg = g.lead_coefficient()
    field = ctx.field
    work = h.as_dict()
    q: dict = {}
    while work:
        m = max(work, key=ctx.key)
        shift = tuple(a - b for a, b in zip(m, lmg))
        if any(e < 0 for e in shift):
            raise ArithmeticError("exact division failed; dividend is not a multiple")
        c = field.div(work[m], lcg)
        q[shift] = c
        for m2, c2 in g.terms:
            mm = tuple(a + b for a, b in zip(m2, shift))
            nv = field.sub(work.get(mm, field.zero), field.mul(c, c2))
            if nv:
                work[mm] = nv
            else:
                work.pop(mm, None)
    return Polynomial(ctx, q)


class LocalRing:
    """k[variables]/(relations) localized at the origin."""

    def __init__(self, variables, relations=(), field=QQ, name: str | None = None):
        variables = tuple(variables)
        self.ctx = PolyContext.get(variables, field, grevlex(len(variables)))
        self.name = name
        rels = [_as_poly(self, r) for r in relations]
        rels = [r for r in rels if not r.is_zero]
        for r in rels:
            if r.constant_term() != field.zero:
                raise ValueError(f"relation {r} does not vanish at the origin")
        self.relations = tuple(rels)
        self.gb_relations = groebner_basis(rels, ctx=self.ctx)
        if self.gb_relations.is_unit_ideal():
            raise ValueError("relations generate the unit ideal; the ring is zero")
        from .groebner import lead_ideal_dimension
        self.dimension = lead_ideal_dimension(self.gb_relations)
        self.monomial_relations = all(g.is_monomial() for g in self.gb_relations.polys)
        self._torsion = None

    @property
    def nvars(self) -> int:
        return self.ctx.nvars

    @property
    def field(self):
        return self.ctx.field

    def __repr__(self):
        rel = ", ".join(str(r) for r in self.relations)
        return f"LocalRing({','.join(self.ctx.variables)}; {rel or '0'})"

    # -- handle constructors ------------------------------------------

    def ideal(self, gens) -> "IdealHandle":
        polys = [self.gb_relations.normal_form(_as_poly(self, g)) for g in gens]
        return self._make(polys)

    def zero_ideal(self) -> "IdealHandle":
        return self._make([])

    def unit_ideal(self) -> "IdealHandle":
        return self._make([Polynomial.from_int(self.ctx, 1)])

    def maximal_ideal(self) -> "IdealHandle":
        return self.ideal(list(self.ctx.variables))

    def principal(self, g) -> "IdealHandle":
        return self.ideal([g])

    def _make(self, polys) -> "IdealHandle":
        """Normalize reduced generators: monic, deduplicated, sorted."""
        out = []
        unit = False
        for p in polys:
            if p.is_zero:
                continue
            if p.constant_term() != self.field.zero:
                unit = True  # a unit of the local ring generates everything
                break
            out.append(p.monic())
        if unit:
            return IdealHandle(self, (Polynomial.from_int(self.ctx, 1),))
        seen = {}
        for p in out:
            seen[p.terms] = p
        gens = sorted(seen.values(), key=lambda p: (self.ctx.key(p.lead_monomial()), str(p)))
        return IdealHandle(self, tuple(gens))

    # -- torsion part -------------------------------------------------

    def torsion_ideal(self) -> "IdealHandle":
        """Elements killed by a power of the maximal ideal."""
        if self._torsion is None:
            self._torsion = self.zero_ideal().saturate(self.maximal_ideal())
        return self._torsion

    def torsion_length(self) -> int:
        W = self.torsion_ideal()
        if not W.gens:
            return 0
        return self.subquotient_length(W, self.zero_ideal())

    def has_positive_depth(self) -> bool:
        return not self.torsion_ideal().gens

    def torsion_free_quotient(self) -> "LocalRing":
        """The quotient by the torsion ideal, on the same variables."""
        W = self.torsion_ideal()
        if not W.gens:
            return self
        rels = list(self.gb_relations.polys) + list(W.gens)
        return LocalRing(self.ctx.variables, rels, field=self.field,
                         name=(self.name + "/torsion") if self.name else None)

    def transport(self, handle: "IdealHandle") -> "IdealHandle":
        """Image of a handle of another ring on the same variables."""
        return self.ideal(handle.gens)

    # -- regular sequences and the Cohen-Macaulay certificate ---------

    def is_regular_sequence(self, elements) -> bool:
        elements = [_as_poly(self, g) for g in elements]
        prior: list = []
        for g in elements:
            base = self._make([self.gb_relations.normal_form(p) for p in prior])
            if not base.colon(g).equals_local(base):
                return False
            prior.append(g)
        return True

    def is_cm_via_parameters(self, parameters) -> bool:
        """Cohen-Macaulayness witnessed by a system of parameters.

        For an m-primary parameter ideal, regularity of the sequence is
        equivalent to the ring being Cohen-Macaulay.
        """
        parameters = list(parameters)
        if len(parameters) != self.dimension:
            raise ValueError("need exactly dim-many parameters")
        return self.is_regular_sequence(parameters)

    # -- subquotient length -------------------------------------------

    def subquotient_length(self, x: "IdealHandle", y: "IdealHandle") -> int:
        """Length of x/y for nested ideals, via a spanning-set rank.

        Requires a power of m multiplying x into y; the quotient is then
        torsion, so the global rank equals the local length.
        """
        if not x.contains_ideal(y):
            raise NotNested("subquotient requires the second ideal inside the first")
        gb_y = y.gb()
        nf = gb_y.normal_form
        gens = [nf(g) for g in x.gens]
        gens = [g for g in gens if not g.is_zero]
        if not gens:
            return 0
        D = None
        for cand in range(1, SUBQUOTIENT_POWER_BOUND + 1):
            monos = self.ctx.monomials_of_degree(cand)
            if all(nf(g.shift(u)).is_zero for g in gens for u in monos):
                D = cand
                break
        if D is None:
            raise NotFiniteLength(
                f"no power of m up to {SUBQUOTIENT_POWER_BOUND} multiplies the "
                "first ideal into the second")
        rows = []
        for g in gens:
            rows.append(g.as_dict())
            for deg in range(1, D):
                for u in self.ctx.monomials_of_degree(deg):
                    r = nf(g.shift(u))
                    if not r.is_zero:
                        rows.append(r.as_dict())
        return _dict_rank(rows, self.ctx)


def _dict_rank(rows, ctx: PolyContext) -> int:
    """Rank of term-dict rows by Gaussian elimination on the monomial key."""
    field = ctx.field
    key = ctx.key
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            piv = max(row, key=key)
            hit = pivots.get(piv)
            if hit is None:
                inv = field.inv(row[piv])
                row = {m: field.mul(inv, c) for m, c in row.items()}
                pivots[piv] = row
                rank += 1
                break
            c = row.pop(piv)
            for m, pc in hit.items():
                if m == piv:
                    continue
                nv = field.sub(row.get(m, field.zero), field.mul(c, pc))
                if nv:
                    row[m] = nv
                else:
                    row.pop(m, None)
    return rank


class IdealHandle:
    """An ideal of a local ring, presented by reduced generators."""

    __slots__ = ("ring", "gens", "_gb", "_colength", "_colength_known")

    def __init__(self, ring: LocalRing, gens: tuple):
        self.ring = ring
        self.gens = gens
        self._gb = None
        self._colength = None
        self._colength_known = False

    def __repr__(self):
        return f"IdealHandle({', '.join(str(g) for g in self.gens) or '0'})"

    @property
    def is_unit(self) -> bool:
        return bool(self.gens) and self.gens[0].degree() == 0

    @property
    def is_zero_presented(self) -> bool:
        return not self.gens

    def gb(self) -> GroebnerBasis:
        """Groebner basis of the ideal together with the ring relations."""
        if self._gb is None:
            ring = self.ring
            self._gb = groebner_basis(
                list(ring.gb_relations.polys) + list(self.gens), ctx=ring.ctx)
        return self._gb

    def normal_form(self, f) -> Polynomial:
        return self.gb().normal_form(_as_poly(self.ring, f))

    def is_monomial_presented(self) -> bool:
        return self.ring.monomial_relations and all(g.is_monomial() for g in self.gens)

    # -- membership and comparison (local semantics) ------------------

    def contains_element(self, f) -> bool:
        """Local membership at the origin, via a colon when reduction fails."""
        f = _as_poly(self.ring, f)
        if self.normal_form(f).is_zero:
            return True
        if self.is_monomial_presented() and f.is_monomial():
            return False
        c = self.colon(f)
        return c.is_unit

    def contains_ideal(self, other: "IdealHandle") -> bool:
        return all(self.contains_element(g) for g in other.gens)

    def equals_local(self, other: "IdealHandle") -> bool:
        if self.gb().fingerprint == other.gb().fingerprint:
            return True
        return self.contains_ideal(other) and other.contains_ideal(self)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "IdealHandle") -> "IdealHandle":
        return self.ring._make(list(self.gens) + list(other.gens))

    def __mul__(self, other) -> "IdealHandle":
        ring = self.ring
        if isinstance(other, Polynomial) or isinstance(other, (str, int)):
            other = ring.ideal([other])
        nf = ring.gb_relations.normal_form
        prods = [nf(a * b) for a in self.gens for b in other.gens]
        out = ring._make(prods)
        if out.is_monomial_presented():
            out = ring._make(_minimalize_monomial_gens(out.gens))
        return out

    def power(self, n: int) -> "IdealHandle":
        if n < 0:
            raise ValueError("negative ideal power")
        acc = self.ring.unit_ideal()
        for _ in range(n):
            acc = acc * self
        return acc

    def intersect(self, other: "IdealHandle") -> "IdealHandle":
        ring = self.ring
        if self.is_unit:
            return other
        if other.is_unit:
            return self
        if not self.gens or not other.gens:
            return ring.zero_ideal()
        if self.is_monomial_presented() and other.is_monomial_presented():
            rel = [g.lead_monomial() for g in ring.gb_relations.polys]
            left = [g.lead_monomial() for g in self.gens] + rel
            right = [g.lead_monomial() for g in other.gens] + rel
            nf = ring.gb_relations.normal_form
            out = [nf(Polynomial.monomial(ring.ctx, mono_lcm(u, v)))
                   for u in left for v in right]
            return ring._make(_minimalize_monomial_poly_list(
                [p for p in out if not p.is_zero], ring.ctx))
        big = _intersection_in_ambient(
            ring, list(self.gens), list(other.gens))
        return ring.ideal(big)

    def colon(self, divisor) -> "IdealHandle":
        """(self : divisor) for a single element or a finitely generated ideal."""
        ring = self.ring
        if isinstance(divisor, IdealHandle):
            acc = ring.unit_ideal()
            for g in divisor.gens:
                acc = acc.intersect(self.colon(g))
            return acc
        g = ring.gb_relations.normal_form(_as_poly(ring, divisor))
        if g.is_zero:
            return ring.unit_ideal()
        if g.constant_term() != ring.field.zero:
            return self  # dividing by a local unit changes nothing
        if self.is_monomial_presented() and g.is_monomial():
            rel = ring.gb_relations.polys
            mono_g = g.lead_monomial()
            out = []
            for p in list(self.gens) + list(rel):
                u = p.lead_monomial()
                gcd = tuple(min(a, b) for a, b in zip(u, mono_g))
                out.append(tuple(a - b for a, b in zip(u, gcd)))
            nf = ring.gb_relations.normal_form
            polys = [nf(Polynomial.monomial(ring.ctx, m)) for m in out]
            return ring._make(_minimalize_monomial_poly_list(
                [p for p in polys if not p.is_zero], ring.ctx))
        inter = _intersection_in_ambient(
            ring, list(self.gens) + list(ring.gb_relations.polys), [g],
            include_relations=False)
        quots = [_exact_divide(h, g) for h in inter]
        return ring.ideal(quots)

    def saturate(self, other: "IdealHandle") -> "IdealHandle":
        cur = self
        for _ in range(_SATURATION_CAP):
            nxt = cur.colon(other)
            if nxt.gb().fingerprint == cur.gb().fingerprint:
                return cur
            cur = nxt
        raise RuntimeError("saturation did not stabilize")

    # -- length -------------------------------------------------------

    def colength(self) -> int | None:
        """Length of the quotient ring by this ideal; None when not finite.

        Finiteness is certified by finding a power of every variable inside
        the ideal, so the answer is the honest local length.
        """
        if self._colength_known:
            return self._colength
        value = self._colength_compute()
        self._colength = value
        self._colength_known = True
        return value

    def _colength_compute(self) -> int | None:
        G = self.gb()
        if G.is_unit_ideal():
            return 0
        sm = standard_monomials(G)
        if not sm.finite:
            return None
        ctx = self.ring.ctx
        nf = G.normal_form
        for i, bound in enumerate(sm.bounds):
            cap = max(_PURE_POWER_CAP, 6 * bound + 8)
            e = bound
            while e <= cap:
                if nf(Polynomial.monomial(ctx, ctx.var_mono(i, e))).is_zero:
                    break
                e += 1
            else:
                return None
        return count_box_complement(sm.bounds, list(sm.leads))

    def finite_colength(self) -> int:
        v = self.colength()
        if v is None:
            raise NotMPrimary(f"{self!r} is not m-primary within the certificate bounds")
        return v


def _minimalize_monomial_gens(gens):
    ctx = gens[0].ctx if gens else None
    if ctx is None:
        return []
    return _minimalize_monomial_poly_list(list(gens), ctx)


def _minimalize_monomial_poly_list(polys, ctx):
    monos = sorted({p.lead_monomial() for p in polys}, key=sum)
    keep = []
    for m in monos:
        if not any(mono_divides(k, m) for k in keep):
            keep.append(m)
    return [Polynomial.monomial(ctx, m) for m in keep]


def _fresh_variable(variables) -> str:
    name = "_t"
    while name in variables:
        name = "_" + name
    return name


def _intersection_in_ambient(ring: LocalRing, left, right, include_relations=True):
    """Generators of (left + J) meet (right + J) in the polynomial ring.

    Uses one auxiliary variable t with an elimination order on
    t*left + (1-t)*right + J.  With include_relations=False the relations
    are not appended, so the right side is intersected as given; the colon
    path needs this to keep every output a true multiple of the divisor.
    """
    ctx = ring.ctx
    n = ctx.nvars
    from .orders import elimination_block
    tname = _fresh_variable(ctx.variables)
    big = PolyContext.get((tname,) + ctx.variables, ctx.field,
                          elimination_block(1, n + 1))

    def lift(p: Polynomial, mult_t: int) -> Polynomial:
        # mult_t: 0 -> p, 1 -> t*p, 2 -> (1-t)*p
        d = {}
        for m, c in p.terms:
            d[(0,) + m] = c
        q = Polynomial(big, d)
        if mult_t == 0:
            return q
        t = Polynomial.variable(big, tname)
        if mult_t == 1:
            return t * q
        return q - t * q

    gens = [lift(p, 1) for p in left]
    gens += [lift(p, 2) for p in right]
    if include_relations:
        gens += [lift(p, 0) for p in ring.gb_relations.polys]
    elim = eliminate(gens, 1, ctx=big)
    out = []
    for p in elim:
        d = {m[1:]: c for m, c in p.terms}
        out.append(Polynomial(ctx, d))
    return out


