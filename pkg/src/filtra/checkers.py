"""The verification pipeline: invariants, the master inequality, the
boundary-equality characterization and all consequence identities.

Every check reports its gate (applicability), its outcome and enough detail
to audit the numbers.  Checks are never weakened: when a gate is off the
check is skipped and says so, and when a gate is on a failure is a failure.
"""
from __future__ import annotations

from dataclasses import dataclass

from .filtration import (Filtration, ReductionSystem, EXPLICIT, ADIC,
                         NotAdmissible, check_colon_in_i1, check_d_sequence,
                         check_usd_bounded, reduction_system, verify_admissible)
from .hilbert import (HorizonTooSmall, NoPolynomialTail, PolynomialFit,
                      SallyFit, binom, fit_hilbert_samuel, fit_sally)
from .ideals import IdealHandle, LocalRing


class EquivalenceViolation(AssertionError):
    """Boundary equality and the structural criterion disagreed under the
    hypotheses that force them to coincide."""


STABILITY_MARGIN = 3


@dataclass
class BoundaryData:
    """Everything numeric the checks consume, for one ring."""

    ring: LocalRing
    filt: Filtration
    red: ReductionSystem
    horizon: int
    h_filt: list
    h_red: list
    fit_filt: PolynomialFit
    fit_red: PolynomialFit
    sally_values: list
    sally: SallyFit
    q_powers: dict
    stage_one_colength: int
    graded_colength: int      # l(I_1 / (I_2 + Q))
    lhs: int
    rhs: int
    gap: int
    equality: bool
    second_nonnegative: bool

    @property
    def d(self) -> int:
        return self.ring.dimension

    def e_filt(self, i: int) -> int:
        return self.fit_filt.coefficients[i]

    def e_red(self, i: int) -> int:
        return self.fit_red.coefficients[i]


def compute_boundary_data(ring: LocalRing, filt: Filtration, red: ReductionSystem,
                          horizon: int) -> BoundaryData:
    d = ring.dimension
    q_powers = {0: ring.unit_ideal()}
    for n in range(1, horizon + 1):
        q_powers[n] = q_powers[n - 1] * red.handle
    h_filt = [filt.get_ideal(n).finite_colength() for n in range(horizon + 1)]
    h_red = [q_powers[n].finite_colength() for n in range(horizon + 1)]
    fit_filt = fit_hilbert_samuel(h_filt, d)
    fit_red = fit_hilbert_samuel(h_red, d)
    sally_values = []
    I1 = filt.i1
    for n in range(horizon):
        val = (q_powers[n] * I1).finite_colength() - h_filt[n + 1]
        if val < 0:
            raise NotAdmissible(
                f"stage {n + 1} is smaller than reduction-power times stage one",
                {"check": "sally_nonnegative", "n": n})
        sally_values.append(val)
    sally = fit_sally(sally_values, d)
    I2 = filt.get_ideal(2)
    graded_colength = ring.subquotient_length(I1, I2 + red.handle)
    ell_i1 = h_filt[1]
    lhs = fit_filt.coefficients[1] - fit_red.coefficients[1]
    rhs = 2 * fit_filt.coefficients[0] - 2 * ell_i1 - graded_colength
    gap = lhs - rhs
    return BoundaryData(
        ring=ring, filt=filt, red=red, horizon=horizon,
        h_filt=h_filt, h_red=h_red, fit_filt=fit_filt, fit_red=fit_red,
        sally_values=sally_values, sally=sally, q_powers=q_powers,
        stage_one_colength=ell_i1, graded_colength=graded_colength,
        lhs=lhs, rhs=rhs, gap=gap, equality=(gap == 0),
        second_nonnegative=(rhs >= 0))


def _check(name: str, applicable: bool, passed, **details) -> dict:
    status = "skipped" if not applicable else ("pass" if passed else "fail")
    out = {"name": name, "applicable": applicable, "status": status}
    if details:
        out["details"] = details
    return out


# -- conditions ------------------------------------------------------------

def evaluate_conditions(ring: LocalRing, filt: Filtration, red: ReductionSystem,
                        power_bound: int) -> dict:
    c0, w0 = check_d_sequence(ring, red.generators)
    c1, w1 = check_usd_bounded(ring, red.generators, power_bound)
    c2, w2 = check_colon_in_i1(ring, red, filt.i1)
    c3 = ring.has_positive_depth()
    out = {
        "c0_d_sequence": {"holds": c0, "witness": w0},
        "c1_usd_bounded": {"holds": c1, "witness": w1, "power_bound": power_bound},
        "c2_colon_in_i1": {"holds": c2, "witness": w2},
        "c3_positive_depth": {"holds": c3,
                              "torsion_length": ring.torsion_length()},
    }
    return out


# -- structural criterion --------------------------------------------------

def evaluate_structural(data: BoundaryData, W: IdealHandle) -> dict:
    """The three-clause structural condition with per-clause witnesses."""
    filt, red, H = data.filt, data.red, data.horizon
    ring = data.ring
    I1, I2 = filt.i1, filt.get_ideal(2)

    collapse = {"holds": True, "range": [1, H - 2], "witness": None}
    for n in range(1, H - 1):
        target = data.q_powers[n] * I2 + W
        stage = filt.get_ideal(n + 2)
        if not target.contains_ideal(stage):
            bad = next(g for g in stage.gens if not target.contains_element(g))
            collapse = {"holds": False, "range": [1, H - 2],
                        "witness": {"n": n, "generator": str(bad)}}
            break

    graded = {"holds": True, "range": [1, H - 1], "witness": None}
    for n in range(1, H):
        left = (data.q_powers[n] + W).intersect(filt.get_ideal(n + 1) + W)
        right = data.q_powers[n] * I1 + W
        if not left.equals_local(right):
            wit = None
            for g in left.gens:
                if not right.contains_element(g):
                    wit = str(g)
                    break
            graded = {"holds": False, "range": [1, H - 1],
                      "witness": {"n": n, "generator": wit}}
            break

    colon = {"holds": True, "witness": None}
    i2q = I2 + red.handle
    for i in range(red.count):
        col = red.omit_handle(i).colon(red.generators[i])
        if not i2q.contains_ideal(col):
            bad = next(g for g in col.gens if not i2q.contains_element(g))
            colon = {"holds": False,
                     "witness": {"i": i + 1, "generator": str(bad)}}
            break

    holds = collapse["holds"] and graded["holds"] and colon["holds"]
    return {"holds": holds, "clause_collapse": collapse,
            "clause_graded": graded, "clause_colon": colon}


# -- individual checks -----------------------------------------------------

def check_master_inequality(data: BoundaryData) -> dict:
    e0_match = data.e_filt(0) == data.e_red(0)
    passed = data.gap >= 0 and e0_match
    return _check(
        "master_inequality", True, passed,
        lhs=data.lhs, rhs=data.rhs, gap=data.gap,
        multiplicities_agree=e0_match,
        second_part_nonnegative=data.second_nonnegative)


def check_boundary_equality(data: BoundaryData, conditions: dict,
                            structural: dict) -> dict:
    gate = conditions["c1_usd_bounded"]["holds"] and conditions["c2_colon_in_i1"]["holds"]
    agree = data.equality == structural["holds"]
    return _check(
        "boundary_equality", gate, agree if gate else None,
        equality=data.equality, structural_holds=structural["holds"])


def check_torsion_in_stage_two(data: BoundaryData, conditions: dict,
                               W: IdealHandle) -> dict:
    gate = (data.equality and conditions["c1_usd_bounded"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"])
    passed = None
    if gate:
        passed = data.filt.get_ideal(2).contains_ideal(W)
    return _check("torsion_in_stage_two", gate, passed,
                  torsion_generators=[str(g) for g in W.gens])


def check_adic_collapse(data: BoundaryData, conditions: dict) -> dict:
    gate = (data.equality
            and conditions["c1_usd_bounded"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"]
            and conditions["c3_positive_depth"]["holds"])
    if not gate:
        return _check("adic_collapse", False, None)
    filt, H = data.filt, data.horizon
    I1 = filt.i1
    detail = {}
    ok = True
    for n in range(1, H - 1):
        target = data.q_powers[n] * I1
        if not target.contains_ideal(filt.get_ideal(n + 2)):
            ok = False
            detail["containment_failed_at"] = n
            break
    if ok:
        for n in range(1, H):
            left = data.q_powers[n].intersect(filt.get_ideal(n + 1))
            right = data.q_powers[n] * I1
            if not left.equals_local(right):
                ok = False
                detail["intersection_failed_at"] = n
                break
    return _check("adic_collapse", True, ok, **detail)


def check_coefficient_identities(data: BoundaryData, conditions: dict) -> dict:
    gate = (data.equality and data.d >= 2
            and conditions["c1_usd_bounded"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"]
            and conditions["c3_positive_depth"]["holds"])
    if not gate:
        return _check("coefficient_identities", False, None)
    d = data.d
    expected_e2 = (data.e_red(1) + data.e_red(2) + data.e_filt(1)
                   - data.e_filt(0) + data.stage_one_colength)
    ok = data.e_filt(2) == expected_e2
    higher = {}
    for i in range(3, d + 1):
        want = data.e_red(i - 2) + 2 * data.e_red(i - 1) + data.e_red(i)
        higher[f"e{i}"] = {"actual": data.e_filt(i), "expected": want}
        ok = ok and data.e_filt(i) == want
    return _check("coefficient_identities", True, ok,
                  e2_actual=data.e_filt(2), e2_expected=expected_e2,
                  higher=higher)


def check_fiber_cone_identity(data: BoundaryData, conditions: dict) -> dict:
    """l(A/Q^n I_1) - l(A/Q^n) must equal l(A/I_1) * C(n+d-1, d-1); the
    length shadow of the reduction fiber being a polynomial ring over A/I_1."""
    gate = (conditions["c0_d_sequence"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"])
    if not gate:
        return _check("fiber_cone_identity", False, None)
    d, H = data.d, data.horizon
    ell = data.stage_one_colength
    bad = None
    for n in range(0, H):
        lhs = data.sally_values[n] + data.h_filt[n + 1] - data.h_red[n]
        rhs = ell * binom(n + d - 1, d - 1)
        if lhs != rhs:
            bad = {"n": n, "actual": lhs, "expected": rhs}
            break
    return _check("fiber_cone_identity", True, bad is None,
                  checked_range=[0, H - 1], failed=bad)


def check_sally_length_identity(data: BoundaryData, conditions: dict) -> dict:
    gate = (conditions["c0_d_sequence"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"])
    if not gate:
        return _check("sally_length_identity", False, None)
    d, H = data.d, data.horizon
    e0 = data.e_filt(0)
    second = e0 + data.e_red(1) - data.stage_one_colength

    def formula(n: int) -> int:
        total = e0 * binom(n + d, d) - second * binom(n + d - 1, d - 1)
        for i in range(2, d + 1):
            term = (data.e_red(i - 1) + data.e_red(i)) * binom(n + d - i, d - i)
            total += -term if i % 2 else term
        return total

    ok = True
    bad = None
    for n in range(1, H):
        if formula(n) - data.sally_values[n] != data.h_filt[n + 1]:
            ok = False
            bad = {"n": n, "formula": formula(n) - data.sally_values[n],
                   "actual": data.h_filt[n + 1]}
            break
    at_zero = formula(0) - data.sally_values[0] == data.h_filt[1]
    return _check("sally_length_identity", True, ok,
                  failed=bad, holds_at_zero_informational=at_zero)


def check_sally_coefficient_relations(data: BoundaryData, conditions: dict) -> dict:
    gate = (conditions["c0_d_sequence"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"])
    if not gate:
        return _check("sally_coefficient_relations", False, None)
    d, s = data.d, data.sally.dim
    eS = data.sally.e_coeff
    mism = {}
    if s == d:
        want = data.e_filt(0) + data.e_red(1) - data.stage_one_colength + eS(0)
        if data.e_filt(1) != want:
            mism["e1"] = {"actual": data.e_filt(1), "expected": want}
        for i in range(2, d + 1):
            want = data.e_red(i - 1) + data.e_red(i) + eS(i - 1)
            if data.e_filt(i) != want:
                mism[f"e{i}"] = {"actual": data.e_filt(i), "expected": want}
    else:
        want = data.e_filt(0) + data.e_red(1) - data.stage_one_colength
        if data.e_filt(1) != want:
            mism["e1"] = {"actual": data.e_filt(1), "expected": want}
        sign = -1 if (d - s) % 2 else 1
        for i in range(2, d + 1):
            want = data.e_red(i - 1) + data.e_red(i)
            if i >= d - s + 1:
                want += sign * eS(i - d + s - 1)
            if data.e_filt(i) != want:
                mism[f"e{i}"] = {"actual": data.e_filt(i), "expected": want}
    return _check("sally_coefficient_relations", True, not mism,
                  branch=("full_dimension" if s == d else "small_dimension"),
                  module_dimension=s, mismatches=mism)


def check_sally_relations_at_equality(data: BoundaryData, conditions: dict) -> dict:
    gate = (data.equality and not data.sally.vanishes
            and conditions["c1_usd_bounded"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"]
            and conditions["c3_positive_depth"]["holds"])
    if not gate:
        return _check("sally_relations_at_equality", False, None)
    d = data.d
    etop = data.sally.e_top
    mism = {}
    want0 = data.e_filt(0) - data.stage_one_colength - data.graded_colength
    if etop[0] != want0:
        mism["eS0"] = {"actual": etop[0], "expected": want0}
    want1 = data.e_filt(1) - data.e_filt(0) + data.stage_one_colength
    if d >= 2 and etop[1] != want1:
        mism["eS1"] = {"actual": etop[1], "expected": want1}
    for i in range(2, d):
        want = data.e_red(i - 1) + data.e_red(i)
        if etop[i] != want:
            mism[f"eS{i}"] = {"actual": etop[i], "expected": want}
    return _check("sally_relations_at_equality", True, not mism,
                  coefficients=list(etop), mismatches=mism)


def check_sally_lower_bound(data: BoundaryData, conditions: dict) -> dict:
    gate = (conditions["c0_d_sequence"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"])
    if not gate:
        return _check("sally_lower_bound", False, None)
    excess = (data.e_filt(1) - data.e_red(1) - data.e_filt(0)
              + data.stage_one_colength)
    floor = data.sally.e_coeff(0) if data.sally.dim == data.d else 0
    return _check("sally_lower_bound", True, excess >= floor,
                  excess=excess, floor=floor)


def check_multiplicity_colon_formula(data: BoundaryData, conditions: dict) -> dict:
    gate = conditions["c1_usd_bounded"]["holds"]
    if not gate:
        return _check("multiplicity_colon_formula", False, None)
    ring = data.ring
    C = ring.torsion_free_quotient()
    gens = list(data.red.generators)
    qc = C.ideal(gens)
    first = qc.finite_colength()
    prefix = C.ideal(gens[:-1])
    col = prefix.colon(gens[-1])
    inter = col.intersect(qc)
    second = C.subquotient_length(col, inter) if col.gens else 0
    expected = first - second
    return _check("multiplicity_colon_formula", True,
                  data.e_filt(0) == expected,
                  colength_modulo_reduction=first,
                  colon_correction=second, expected=expected,
                  actual=data.e_filt(0))


def check_torsion_quotient_reduction(data: BoundaryData, conditions: dict,
                                     W: IdealHandle) -> dict:
    gate = (conditions["c1_usd_bounded"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"])
    if not gate:
        return _check("torsion_quotient_reduction", False, None)
    ring, filt, H = data.ring, data.filt, data.horizon
    w_inside = (filt.get_ideal(2) + data.red.handle).contains_ideal(W)
    if not W.gens:
        return _check("torsion_quotient_reduction", True, True,
                      torsion_free_already=True, equality=data.equality)
    C = ring.torsion_free_quotient()
    stages = {n: C.transport(filt.get_ideal(n)) for n in range(2, H + 1)}
    cfilt = Filtration(C, EXPLICIT, C.transport(filt.i1), explicit=stages,
                       hard_cap=filt.hard_cap)
    cred = reduction_system(C, list(data.red.generators))
    try:
        verify_admissible(cfilt, cred, H)
        cdata = compute_boundary_data(C, cfilt, cred, H)
    except (NotAdmissible, HorizonTooSmall, NoPolynomialTail) as exc:
        return _check("torsion_quotient_reduction", True, False,
                      error=f"{type(exc).__name__}: {exc}")
    reduced_equality = cdata.equality and w_inside
    return _check("torsion_quotient_reduction", True,
                  data.equality == reduced_equality,
                  equality=data.equality, quotient_equality=cdata.equality,
                  torsion_inside_stage2_plus_reduction=w_inside,
                  quotient_gap=cdata.gap)


def check_torsion_graded_pieces(data: BoundaryData, W: IdealHandle) -> dict:
    gate = data.equality
    if not gate:
        return _check("torsion_graded_pieces", False, None)
    ring, filt, H = data.ring, data.filt, data.horizon
    w_len = ring.torsion_length()
    if not W.gens:
        return _check("torsion_graded_pieces", True, True,
                      pieces=[0, 0], total=0, torsion_length=0)
    pieces = [0, 0]
    cuts = {n: filt.get_ideal(n).intersect(W) for n in range(3, H + 1)}
    pieces.append(ring.subquotient_length(W, cuts[3]))
    for n in range(3, H):
        pieces.append(ring.subquotient_length(cuts[n], cuts[n + 1]))
    tail_empty = len(cuts[H].gens) == 0
    total = sum(pieces)
    ok = tail_empty and total == w_len
    return _check("torsion_graded_pieces", True, ok,
                  pieces=pieces, total=total, torsion_length=w_len,
                  tail_vanishes=tail_empty)


def check_small_stage_two_collapse(data: BoundaryData, conditions: dict) -> dict:
    in_q = data.red.handle.contains_ideal(data.filt.get_ideal(2))
    gate = (data.equality and in_q
            and conditions["c1_usd_bounded"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"])
    if not gate:
        return _check("small_stage_two_collapse", False, None,
                      stage_two_inside_reduction=in_q)
    ring, filt, H = data.ring, data.filt, data.horizon
    cm = ring.is_cm_via_parameters(list(data.red.generators))
    svan = data.sally.vanishes
    stages_ok = True
    for n in range(1, H):
        if not filt.get_ideal(n + 1).equals_local(data.q_powers[n] * filt.i1):
            stages_ok = False
            break
    return _check("small_stage_two_collapse", True, cm and svan and stages_ok,
                  cohen_macaulay=cm, sally_vanishes=svan,
                  stages_collapse=stages_ok)


def check_base_reduction_equal(data: BoundaryData, conditions: dict) -> dict:
    same = data.filt.i1.equals_local(data.red.handle)
    gate = (same and data.equality
            and conditions["c1_usd_bounded"]["holds"]
            and conditions["c2_colon_in_i1"]["holds"])
    if not gate:
        return _check("base_reduction_equal", False, None,
                      stage_one_is_reduction=same)
    ring, filt, H = data.ring, data.filt, data.horizon
    coeffs_equal = data.fit_filt.coefficients == data.fit_red.coefficients
    cm = ring.is_cm_via_parameters(list(data.red.generators))
    adic = all(filt.get_ideal(n).equals_local(data.q_powers[n])
               for n in range(1, H + 1))
    return _check("base_reduction_equal", True, coeffs_equal and cm and adic,
                  coefficients_equal=coeffs_equal, cohen_macaulay=cm,
                  collapses_to_powers=adic)


def check_fit_stability(data: BoundaryData) -> dict:
    """Recompute both fits with a longer horizon; coefficients must agree."""
    H = data.horizon + STABILITY_MARGIN
    filt, red = data.filt, data.red
    h_filt = list(data.h_filt)
    h_red = list(data.h_red)
    q = data.q_powers[data.horizon]
    for n in range(data.horizon + 1, H + 1):
        h_filt.append(filt.get_ideal(n).finite_colength())
        q = q * red.handle
        h_red.append(q.finite_colength())
    try:
        long_filt = fit_hilbert_samuel(h_filt, data.d)
        long_red = fit_hilbert_samuel(h_red, data.d)
    except (HorizonTooSmall, NoPolynomialTail) as exc:
        return _check("fit_stability", True, False,
                      error=f"{type(exc).__name__}: {exc}")
    ok = (long_filt.coefficients == data.fit_filt.coefficients
          and long_red.coefficients == data.fit_red.coefficients
          and long_filt.postulation == data.fit_filt.postulation
          and long_red.postulation == data.fit_red.postulation)
    return _check("fit_stability", True, ok,
                  margin=STABILITY_MARGIN,
                  extended_filtration=list(long_filt.coefficients),
                  extended_reduction=list(long_red.coefficients))


ALL_CHECKS = (
    "master_inequality",
    "boundary_equality",
    "torsion_in_stage_two",
    "adic_collapse",
    "coefficient_identities",
    "fiber_cone_identity",
    "sally_length_identity",
    "sally_coefficient_relations",
    "sally_relations_at_equality",
    "sally_lower_bound",
    "multiplicity_colon_formula",
    "torsion_quotient_reduction",
    "torsion_graded_pieces",
    "small_stage_two_collapse",
    "base_reduction_equal",
    "fit_stability",
)


def run_checks(data: BoundaryData, conditions: dict, structural: dict,
               selected=None) -> list:
    W = data.ring.torsion_ideal()
    producers = {
        "master_inequality": lambda: check_master_inequality(data),
        "boundary_equality": lambda: check_boundary_equality(data, conditions, structural),
        "torsion_in_stage_two": lambda: check_torsion_in_stage_two(data, conditions, W),
        "adic_collapse": lambda: check_adic_collapse(data, conditions),
        "coefficient_identities": lambda: check_coefficient_identities(data, conditions),
        "fiber_cone_identity": lambda: check_fiber_cone_identity(data, conditions),
        "sally_length_identity": lambda: check_sally_length_identity(data, conditions),
        "sally_coefficient_relations": lambda: check_sally_coefficient_relations(data, conditions),
        "sally_relations_at_equality": lambda: check_sally_relations_at_equality(data, conditions),
        "sally_lower_bound": lambda: check_sally_lower_bound(data, conditions),
        "multiplicity_colon_formula": lambda: check_multiplicity_colon_formula(data, conditions),
        "torsion_quotient_reduction": lambda: check_torsion_quotient_reduction(data, conditions, W),
        "torsion_graded_pieces": lambda: check_torsion_graded_pieces(data, W),
        "small_stage_two_collapse": lambda: check_small_stage_two_collapse(data, conditions),
        "base_reduction_equal": lambda: check_base_reduction_equal(data, conditions),
        "fit_stability": lambda: check_fit_stability(data),
    }
    names = ALL_CHECKS if selected is None else [n for n in ALL_CHECKS if n in selected]
    return [producers[n]() for n in names]


def ensure_consistent(checks: list):
    """Raise when the dual-path characterization or an applicable consequence
    failed; library-level counterpart of the exit-code contract."""
    for c in checks:
        if c["status"] == "fail":
            raise EquivalenceViolation(
                f"check {c['name']} failed: {c.get('details', {})}")
