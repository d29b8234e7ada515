"""Multiplicative ideal filtrations, reductions and sequence conditions.

A filtration assigns to every n >= 0 an ideal I_n with I_0 the unit ideal,
I_{n+1} inside I_n, products I_a I_b inside I_{a+b}, an m-primary I_1, and a
parameter ideal Q inside I_1 with I_{n+1} = Q I_n for all large n within the
working horizon.  Three constructions are supported: powers of I_1, the
stabilized colon closure (I^{n+k} : I^k), and explicitly listed ideals
continued by the tail rule I_{n+1} = I_1 I_n.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .ideals import IdealHandle, LocalRing, _as_poly


class HorizonExceeded(RuntimeError):
    """An internal loop asked for a filtration stage beyond the safety cap."""


class RatliffRushNotStabilized(RuntimeError):
    """The colon closure did not repeat within the iteration bound."""


class SearchExhausted(RuntimeError):
    """Random search for a reduction gave up."""


class NoSuperficialWitness(RuntimeError):
    """No admissible single-element superficial bound was found."""


class NotAdmissible(ValueError):
    """Filtration axioms failed; carries a witness describing where."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


RR_ITERATION_BOUND = 10
ADIC, RATLIFF_RUSH, EXPLICIT = "adic", "ratliff_rush", "explicit"


class Filtration:
    """Lazy tower of ideals; stages are memoized handles."""

    def __init__(self, ring: LocalRing, kind: str, i1: IdealHandle,
                 explicit: dict | None = None, hard_cap: int = 64):
        if kind not in (ADIC, RATLIFF_RUSH, EXPLICIT):
            raise ValueError(f"unknown filtration kind {kind!r}")
        self.ring = ring
        self.kind = kind
        self.hard_cap = hard_cap
        self._seed = i1
        self._stages: dict = {0: ring.unit_ideal()}
        if kind != RATLIFF_RUSH:
            self._stages[1] = i1  # the closure may enlarge stage one
        self._base_powers: dict = {0: ring.unit_ideal(), 1: i1}
        self._explicit_top = 1
        if kind == EXPLICIT:
            explicit = explicit or {}
            keys = sorted(explicit)
            if keys and keys != list(range(2, keys[-1] + 1)):
                raise ValueError("explicit stages must be consecutive from 2")
            for n in keys:
                self._stages[n] = explicit[n]
            self._explicit_top = max(1, *keys) if keys else 1

    @property
    def i1(self) -> IdealHandle:
        return self.get_ideal(1)

    def _base_power(self, n: int) -> IdealHandle:
        top = max(self._base_powers)
        while top < n:
            top += 1
            self._base_powers[top] = self._base_powers[top - 1] * self._seed
        return self._base_powers[n]

    def get_ideal(self, n: int) -> IdealHandle:
        if n < 0:
            raise ValueError("filtration index must be nonnegative")
        if n > self.hard_cap:
            raise HorizonExceeded(f"stage {n} beyond cap {self.hard_cap}")
        got = self._stages.get(n)
        if got is not None:
            return got
        if self.kind == ADIC:
            out = self._base_power(n)
        elif self.kind == RATLIFF_RUSH:
            out = self._colon_closure(n)
        else:
            out = self.i1 * self.get_ideal(n - 1)  # tail rule
        self._stages[n] = out
        return out

    def _colon_closure(self, n: int) -> IdealHandle:
        prev = None
        for k in range(1, RR_ITERATION_BOUND + 1):
            cur = self._base_power(n + k).colon(self._base_power(k))
            if prev is not None and cur.equals_local(prev):
                return prev
            prev = cur
        raise RatliffRushNotStabilized(
            f"colon closure at stage {n} kept growing for {RR_ITERATION_BOUND} steps")


def adic_filtration(ring: LocalRing, gens, hard_cap: int = 64) -> Filtration:
    return Filtration(ring, ADIC, ring.ideal(gens), hard_cap=hard_cap)


def ratliff_rush_filtration(ring: LocalRing, gens, hard_cap: int = 64) -> Filtration:
    return Filtration(ring, RATLIFF_RUSH, ring.ideal(gens), hard_cap=hard_cap)


def explicit_filtration(ring: LocalRing, stages: dict, hard_cap: int = 64) -> Filtration:
    """stages maps 1,2,... to generator lists; later stages follow the tail rule."""
    by_index = {int(n): g for n, g in stages.items()}
    if 1 not in by_index:
        raise ValueError("explicit filtration needs stage 1")
    handles = {n: ring.ideal(g) for n, g in by_index.items() if n >= 2}
    return Filtration(ring, EXPLICIT, ring.ideal(by_index[1]),
                      explicit=handles, hard_cap=hard_cap)


@dataclass(frozen=True)
class ReductionSystem:
    """A parameter ideal inside stage one, with its ordered generator list."""

    ring: LocalRing
    generators: tuple
    handle: IdealHandle

    @property
    def count(self) -> int:
        return len(self.generators)

    def prefix_handle(self, k: int) -> IdealHandle:
        return self.ring.ideal(list(self.generators[:k]))

    def omit_handle(self, i: int) -> IdealHandle:
        gens = [g for j, g in enumerate(self.generators) if j != i]
        return self.ring.ideal(gens)


def reduction_system(ring: LocalRing, gens) -> ReductionSystem:
    polys = tuple(ring.gb_relations.normal_form(_as_poly(ring, g)) for g in gens)
    if any(p.is_zero for p in polys):
        raise ValueError("reduction generators must be nonzero in the ring")
    return ReductionSystem(ring, polys, ring.ideal(list(polys)))


@dataclass(frozen=True)
class AdmissibilityCertificate:
    reduction_postulation: int
    stage_equalities: tuple  # n -> I_{n+1} == Q I_n over the checked window


def verify_admissible(filt: Filtration, red: ReductionSystem,
                      horizon: int) -> AdmissibilityCertificate:
    """Check all filtration axioms up to the horizon; raise with a witness."""
    ring = filt.ring
    I1 = filt.i1
    if I1.is_unit:
        raise NotAdmissible("stage one is the unit ideal", {"check": "proper"})
    if not I1.gens:
        raise NotAdmissible("stage one is zero", {"check": "proper"})
    if I1.colength() is None:
        raise NotAdmissible("stage one is not m-primary",
                            {"check": "m_primary", "ideal": [str(g) for g in I1.gens]})
    if len(red.generators) != ring.dimension:
        raise NotAdmissible(
            f"reduction has {len(red.generators)} generators, dimension is {ring.dimension}",
            {"check": "parameter_count"})
    if red.handle.colength() is None:
        raise NotAdmissible("reduction is not m-primary", {"check": "reduction_m_primary"})
    if not I1.contains_ideal(red.handle):
        raise NotAdmissible("reduction is not inside stage one",
                            {"check": "reduction_inside"})
    for n in range(1, horizon):
        upper, lower = filt.get_ideal(n), filt.get_ideal(n + 1)
        if not upper.contains_ideal(lower):
            bad = next(g for g in lower.gens if not upper.contains_element(g))
            raise NotAdmissible(f"stage {n + 1} not inside stage {n}",
                               {"check": "chain", "n": n, "generator": str(bad)})
    if filt.kind != ADIC:
        for a in range(1, horizon):
            for b in range(a, horizon - a + 1):
                prod = filt.get_ideal(a) * filt.get_ideal(b)
                target = filt.get_ideal(a + b)
                if not target.contains_ideal(prod):
                    raise NotAdmissible(
                        f"product of stages {a} and {b} escapes stage {a + b}",
                        {"check": "products", "a": a, "b": b})
    flags = []
    for n in range(0, horizon - 1):
        lhs = filt.get_ideal(n + 1)
        rhs = red.handle * filt.get_ideal(n)
        flags.append(lhs.equals_local(rhs))
    r = horizon - 1
    for n in range(horizon - 2, -1, -1):
        if flags[n]:
            r = n
        else:
            break
    if r >= horizon - 1:
        raise NotAdmissible(
            "reduction never becomes exact within the horizon",
            {"check": "reduction_tail", "last_n": horizon - 2})
    return AdmissibilityCertificate(r, tuple(flags))


def find_reduction(filt: Filtration, horizon: int, seed: int = 0,
                   attempts: int = 60) -> ReductionSystem:
    """Random small-coefficient combinations of stage-one generators."""
    ring = filt.ring
    d = ring.dimension
    gens = filt.i1.gens
    rng = random.Random(seed)
    coeffs = [c for c in range(-2, 3)]
    for _ in range(attempts):
        cand = []
        for _ in range(d):
            p = None
            for g in gens:
                c = rng.choice(coeffs)
                term = g.scale(ring.field.from_int(c))
                p = term if p is None else p + term
            cand.append(p)
        if any(p is None or p.is_zero for p in cand):
            continue
        try:
            red = reduction_system(ring, cand)
            verify_admissible(filt, red, horizon)
            return red
        except (NotAdmissible, ValueError):
            continue
    raise SearchExhausted(f"no reduction found in {attempts} attempts (seed {seed})")


# -- sequence conditions ---------------------------------------------------

def check_d_sequence(ring: LocalRing, elements) -> tuple:
    """Colon stability over prefixes, for all 1 <= i <= j <= d."""
    elements = [ring.gb_relations.normal_form(_as_poly(ring, g)) for g in elements]
    d = len(elements)
    for i in range(d):
        base = ring.ideal(elements[:i])
        for j in range(i, d):
            prod = elements[i] * elements[j]
            left = base.colon(prod)
            right = base.colon(elements[j])
            if not left.equals_local(right):
                return False, {"i": i + 1, "j": j + 1,
                               "prefix": [str(g) for g in elements[:i]]}
    return True, None


def check_usd_bounded(ring: LocalRing, elements, power_bound: int = 2) -> tuple:
    """Every permutation with every exponent vector up to the bound is a
    d-sequence; this is the finitely tested surrogate for the unconditioned
    statement, and the bound is part of the reported claim."""
    elements = [ring.gb_relations.normal_form(_as_poly(ring, g)) for g in elements]
    d = len(elements)
    for perm in itertools.permutations(range(d)):
        for exps in itertools.product(range(1, power_bound + 1), repeat=d):
            seq = [elements[p] ** e for p, e in zip(perm, exps)]
            ok, wit = check_d_sequence(ring, seq)
            if not ok:
                wit = dict(wit or {})
                wit.update({"permutation": [p + 1 for p in perm], "exponents": list(exps)})
                return False, wit
    return True, None


def check_colon_in_i1(ring: LocalRing, red: ReductionSystem, I1: IdealHandle) -> tuple:
    """Each omitted-generator colon lands inside stage one."""
    for i in range(red.count):
        base = red.omit_handle(i)
        col = base.colon(red.generators[i])
        if not I1.contains_ideal(col):
            bad = next(g for g in col.gens if not I1.contains_element(g))
            return False, {"i": i + 1, "witness": str(bad)}
    return True, None


def check_superficial(filt: Filtration, red: ReductionSystem, element,
                      horizon: int) -> int:
    """Smallest c with (I_{n+1} : a) meet I_c = I_n for all checkable n >= c."""
    ring = filt.ring
    a = ring.gb_relations.normal_form(_as_poly(ring, element))
    if not red.handle.contains_element(a):
        raise ValueError("superficial candidate must lie in the reduction")
    mQ = ring.maximal_ideal() * red.handle
    if mQ.contains_element(a):
        raise ValueError("superficial candidate must avoid m times the reduction")
    for c in range(1, horizon - 1):
        ok = True
        Ic = filt.get_ideal(c)
        for n in range(c, horizon - 1):
            lhs = filt.get_ideal(n + 1).colon(a).intersect(Ic)
            if not lhs.equals_local(filt.get_ideal(n)):
                ok = False
                break
        if ok:
            return c
    raise NoSuperficialWitness(
        f"no superficial bound up to {horizon - 2} for {a}")
