"""Buchberger's algorithm with the normal selection strategy, reduced bases,
normal forms, standard monomials, elimination and a memoizing cache.

The kernel works on raw term dicts (monomial tuple -> coefficient) and keeps
basis elements monic so reduction needs no divisions.  Pair selection is by
minimal lcm (degree first); the coprime-lead and chain criteria can be
switched off to serve as their own correctness oracle.
"""
from __future__ import annotations

import hashlib
import heapq
import itertools
import json
import os
import tempfile
import threading
from dataclasses import dataclass

from .orders import elimination_block
from .poly import (Monomial, Polynomial, PolyContext, mono_coprime,
                   mono_divides, mono_lcm)


class InfiniteSetEnumerationRequested(ValueError):
    """Enumeration of standard monomials asked for a positive-dimensional ideal."""


def _nf_dict(f: dict, basis: list, ctx: PolyContext) -> dict:
    """Full normal form of a term dict against monic (lead, tail) basis entries.

    Monomials are finalized in strictly descending order, so the result has no
    term divisible by any basis lead.
    """
    if not f or not basis:
        return dict(f)
    negkey = ctx.negkey
    p = ctx.field.p
    work = dict(f)
    heap = [(negkey(m), m) for m in work]
    heapq.heapify(heap)
    rem: dict = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        hit_tail = None
        for lm, tail in basis:
            ok = True
            for a, b in zip(lm, m):
                if a > b:
                    ok = False
                    break
            if ok:
                hit_tail = tail
                shift = tuple(x - y for x, y in zip(m, lm))
                break
        if hit_tail is None:
            rem[m] = c
            continue
        if p is None:
            for m2, c2 in hit_tail:
                mm = tuple(x + y for x, y in zip(m2, shift))
                prev = work.get(mm)
                if prev is None:
                    work[mm] = -c * c2
                    heapq.heappush(heap, (negkey(mm), mm))
                else:
                    nv = prev - c * c2
                    if nv:
                        work[mm] = nv
                    else:
                        del work[mm]
        else:
            for m2, c2 in hit_tail:
                mm = tuple(x + y for x, y in zip(m2, shift))
                prev = work.get(mm)
                if prev is None:
                    work[mm] = -c * c2 % p
                    heapq.heappush(heap, (negkey(mm), mm))
                else:
                    nv = (prev - c * c2) % p
                    if nv:
                        work[mm] = nv
                    else:
                        del work[mm]
    return rem


def _monic_dict(d: dict, ctx: PolyContext) -> tuple:
    """Return (lead, tail_items, full_dict) with lead coefficient one."""
    lm = max(d, key=ctx.key)
    lc = d[lm]
    field = ctx.field
    if lc != field.one:
        inv = field.inv(lc)
        d = {m: field.mul(inv, c) for m, c in d.items()}
    tail = tuple((m, c) for m, c in d.items() if m != lm)
    return lm, tail, d


def _spoly_dict(a, b, ctx: PolyContext) -> dict:
    """S-polynomial of two monic basis entries; the leads cancel by design."""
    lma, taila, _ = a
    lmb, tailb, _ = b
    L = mono_lcm(lma, lmb)
    ua = tuple(x - y for x, y in zip(L, lma))
    ub = tuple(x - y for x, y in zip(L, lmb))
    field = ctx.field
    out: dict = {}
    for m, c in taila:
        out[tuple(x + y for x, y in zip(m, ua))] = c
    for m, c in tailb:
        mm = tuple(x + y for x, y in zip(m, ub))
        prev = out.get(mm)
        if prev is None:
            out[mm] = field.neg(c)
        else:
            nv = field.sub(prev, c)
            if nv:
                out[mm] = nv
            else:
                del out[mm]
    return out


def _autoreduce(dicts: list, ctx: PolyContext) -> list:
    """Minimalize by lead divisibility, then tail-reduce to the reduced basis."""
    entries = [_monic_dict(d, ctx) for d in dicts]
    entries.sort(key=lambda e: ctx.key(e[0]))
    kept = []
    for e in entries:
        if not any(mono_divides(k[0], e[0]) for k in kept):
            kept.append(e)
    changed = True
    while changed:
        changed = False
        for i, (lm, tail, full) in enumerate(kept):
            others = [(k[0], k[1]) for j, k in enumerate(kept) if j != i]
            r = _nf_dict(full, others, ctx)
            if r != full:
                kept[i] = _monic_dict(r, ctx)
                changed = True
    kept.sort(key=lambda e: ctx.key(e[0]))
    return [e[2] for e in kept]


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic, auto-reduced basis in a fixed context."""

    ctx: PolyContext
    polys: tuple
    fingerprint: str

    @property
    def leads(self) -> tuple:
        return tuple(g.lead_monomial() for g in self.polys)

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ctx is not self.ctx:
            f = f.convert(self.ctx)
        basis = [(g.lead_monomial(), g.terms[1:]) for g in self.polys]
        return Polynomial(self.ctx, _nf_dict(f.as_dict(), basis, self.ctx))

    def contains_globally(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero

    def is_unit_ideal(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].degree() == 0


def _fingerprint(ctx: PolyContext, gens) -> str:
    payload = ctx.descriptor + "\n" + "\n".join(sorted(str(g) for g in gens))
    return hashlib.sha256(payload.encode()).hexdigest()


def _buchberger_raw(inputs: list, ctx: PolyContext, use_criteria: bool) -> list:
    basis: list = []      # (lead, tail_items, full_dict), monic
    reduce_view: list = []  # (lead, tail_items) view for _nf_dict
    pairs: list = []
    key = ctx.key

    def add(d: dict):
        entry = _monic_dict(d, ctx)
        t = len(basis)
        for i in range(t):
            L = mono_lcm(basis[i][0], entry[0])
            heapq.heappush(pairs, (key(L), L, i, t))
        basis.append(entry)
        reduce_view.append((entry[0], entry[1]))

    for d in inputs:
        r = _nf_dict(d, reduce_view, ctx)
        if r:
            add(r)

    while pairs:
        _, L, i, j = heapq.heappop(pairs)
        lmi, lmj = basis[i][0], basis[j][0]
        if mono_lcm(lmi, lmj) != L:
            continue  # defensive; leads never change
        if use_criteria:
            if mono_coprime(lmi, lmj):
                continue
            # chain criterion, proper-divisor form: the two replacing pairs
            # have strictly smaller lcms, hence were already handled
            skip = False
            for l in range(len(basis)):
                if l == i or l == j:
                    continue
                lml = basis[l][0]
                if mono_divides(lml, L) and mono_lcm(lmi, lml) != L and mono_lcm(lmj, lml) != L:
                    skip = True
                    break
            if skip:
                continue
        s = _spoly_dict(basis[i], basis[j], ctx)
        if not s:
            continue
        r = _nf_dict(s, reduce_view, ctx)
        if r:
            add(r)

    return _autoreduce([e[2] for e in basis], ctx)


# -- cache ----------------------------------------------------------------

_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()
CACHE_ENV_VAR = "FILTRA_CACHE_DIR"
_CACHE_FORMAT_VERSION = 1


def clear_cache():
    with _CACHE_LOCK:
        _CACHE.clear()


def _cache_path(fingerprint: str):
    root = os.environ.get(CACHE_ENV_VAR)
    if not root:
        return None
    d = os.path.join(root, f"v{_CACHE_FORMAT_VERSION}")
    return os.path.join(d, fingerprint + ".json")


def _cache_load(fingerprint: str, ctx: PolyContext):
    path = _cache_path(fingerprint)
    if path is None or not os.path.exists(path):
        return None
    from .parser import parse_polynomial
    try:
        with open(path) as fh:
            data = json.load(fh)
        if data.get("version") != _CACHE_FORMAT_VERSION or data.get("context") != ctx.descriptor:
            return None
        polys = tuple(parse_polynomial(s, ctx) for s in data["basis"])
        return GroebnerBasis(ctx, polys, fingerprint)
    except (ValueError, KeyError, OSError):
        return None


def _cache_store(gb: GroebnerBasis):
    path = _cache_path(gb.fingerprint)
    if path is None:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    data = {
        "version": _CACHE_FORMAT_VERSION,
        "context": gb.ctx.descriptor,
        "basis": [str(g) for g in gb.polys],
    }
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh)
        os.replace(tmp, path)  # atomic on POSIX
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)


def groebner_basis(gens, ctx: PolyContext | None = None, use_criteria: bool = True,
                   cache: bool = True) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Zero generators are allowed and yield the empty basis.  The result only
    depends on the generated ideal, never on generator order.
    """
    gens = list(gens)
    if ctx is None:
        if not gens:
            raise ValueError("context required for an empty generator list")
        ctx = gens[0].ctx
    gens = [g if g.ctx is ctx else g.convert(ctx) for g in gens]
    inputs = [g.as_dict() for g in gens if not g.is_zero]
    fingerprint = _fingerprint(ctx, [g for g in gens if not g.is_zero])
    if use_criteria and cache:
        with _CACHE_LOCK:
            hit = _CACHE.get(fingerprint)
        if hit is not None:
            return hit
        hit = _cache_load(fingerprint, ctx)
        if hit is not None:
            with _CACHE_LOCK:
                _CACHE[fingerprint] = hit
            return hit
    reduced = _buchberger_raw(inputs, ctx, use_criteria)
    gb = GroebnerBasis(ctx, tuple(Polynomial(ctx, d) for d in reduced), fingerprint)
    if use_criteria and cache:
        with _CACHE_LOCK:
            _CACHE[fingerprint] = gb
        _cache_store(gb)
    return gb


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


# -- standard monomials and dimension -------------------------------------

def _minimal_monomials(monos) -> tuple:
    out = []
    for m in sorted(monos, key=sum):
        if not any(mono_divides(k, m) for k in out):
            out.append(m)
    return tuple(out)


@dataclass(frozen=True)
class StandardMonomials:
    """Monomials outside the lead-term ideal of a basis."""

    nvars: int
    leads: tuple          # minimal generators of the lead ideal
    finite: bool
    bounds: tuple         # per-variable pure-power exponents when finite

    def is_standard(self, m: Monomial) -> bool:
        return not any(mono_divides(l, m) for l in self.leads)

    def enumerate(self) -> list:
        """All standard monomials, degree-lexicographically."""
        if not self.finite:
            raise InfiniteSetEnumerationRequested(
                "standard monomial set is infinite (lead ideal is not zero-dimensional)")
        out = [m for m in itertools.product(*(range(b) for b in self.bounds))
               if self.is_standard(m)]
        out.sort(key=lambda m: (sum(m), tuple(-e for e in m)))
        return out

    def count(self) -> int:
        if not self.finite:
            raise InfiniteSetEnumerationRequested(
                "standard monomial set is infinite (lead ideal is not zero-dimensional)")
        return count_box_complement(self.bounds, list(self.leads))


def count_box_complement(bounds, leads) -> int:
    """Monomials below the bounds divisible by no lead, without enumeration.

    Splits on the first exponent at the thresholds where the active lead set
    changes, so runtime scales with the number of leads rather than the box.
    """
    if any(sum(l) == 0 for l in leads):
        return 0
    if not bounds:
        return 1
    b0 = bounds[0]
    if b0 <= 0:
        return 0
    cuts = sorted({0, b0} | {l[0] for l in leads if 0 < l[0] < b0})
    total = 0
    for lo, hi in zip(cuts, cuts[1:]):
        active = [l[1:] for l in leads if l[0] <= lo]
        reduced = []
        for m in sorted(active, key=sum):
            if not any(mono_divides(k, m) for k in reduced):
                reduced.append(m)
        total += (hi - lo) * count_box_complement(bounds[1:], reduced)
    return total


def standard_monomials(gb: GroebnerBasis) -> StandardMonomials:
    nvars = gb.ctx.nvars
    leads = _minimal_monomials(gb.leads)
    bounds = []
    finite = True
    for i in range(nvars):
        pure = [m[i] for m in leads if sum(m) == m[i]]
        if pure:
            bounds.append(min(pure))
        else:
            finite = False
            bounds.append(0)
    return StandardMonomials(nvars, leads, finite, tuple(bounds))


def lead_ideal_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of the quotient by the ideal; -1 for the unit ideal."""
    nvars = gb.ctx.nvars
    leads = _minimal_monomials(gb.leads)
    if any(sum(m) == 0 for m in leads):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    best = 0
    for mask in range(1 << nvars):
        S = frozenset(i for i in range(nvars) if mask >> i & 1)
        if len(S) <= best:
            continue
        if all(not sup <= S for sup in supports):
            best = len(S)
    return best


def eliminate(polys, k: int, ctx: PolyContext | None = None) -> list:
    """Generators of the elimination ideal dropping the first k variables.

    The result still lives in the full ring but is free of those variables.
    """
    polys = list(polys)
    if ctx is None:
        ctx = polys[0].ctx
    elim_ctx = ctx.with_order(elimination_block(k, ctx.nvars))
    gb = groebner_basis(polys, ctx=elim_ctx)
    out = []
    for g in gb.polys:
        if all(all(m[i] == 0 for i in range(k)) for m, _ in g.terms):
            out.append(g.convert(ctx))
    return out
