"""Defect elements of a formula and the decision reports built on them.

A defect is an explicit element of Q[D] (x) S measuring the failure of
the half skew symmetry, of the half commutator formula, or of one
component of the half Jacobi identity.  Where the defects land decides
whether the basis embeds into the quotient algebra the formula
generates:

* every defect zero                      -> the free module is already
                                            the target algebra;
* defects inside D.Q[D] (x) c, c central -> the quotient kills exactly
                                            the positive D-span of c;
* a skew defect with a constant part
  outside the span of c                  -> the embedding cannot exist;
* anything else                          -> undetermined (no general
                                            decision procedure).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional

from .formula import (
    BasisRef,
    BoundInsufficientError,
    Element,
    FormulaError,
    FormulaSpec,
    UngradedError,
    Violation,
    _accumulate,
    basis_element,
    extend_product,
    gen_binomial,
    validate_spec,
)

SKEW = "skew"
COMMUTATOR = "commutator"
JACOBI = "jacobi"

INJECTIVE_ZERO_IDEAL = "injective_zero_ideal"
INJECTIVE_CENTRAL_IDEAL = "injective_central_ideal"
PURE_LIE = "pure_lie"
NOT_INJECTIVE_CANDIDATE = "not_injective_candidate"
UNDETERMINED = "undetermined"

INJECTIVE_STATUSES = frozenset({INJECTIVE_ZERO_IDEAL, INJECTIVE_CENTRAL_IDEAL, PURE_LIE})


@dataclass(frozen=True)
class Defect:
    """One nonzero defect: its kind, index tuple and exact value."""

    kind: str
    indices: tuple
    value: Element


@dataclass(frozen=True)
class Verdict:
    """Structured outcome of the injectivity analysis."""

    status: str
    witnesses: tuple
    notes: str

    @property
    def injective(self) -> bool:
        return self.status in INJECTIVE_STATUSES

    def __str__(self) -> str:
        return f"{self.status}: {self.notes}"


@lru_cache(maxsize=1 << 16)
def _prod(spec: FormulaSpec, A: Element, n: int, B: Element) -> Element:
    # defect sweeps reuse a small set of table elements heavily
    return extend_product(spec, A, n, B)


def skew_defect(spec: FormulaSpec, u: BasisRef, n: int, v: BasisRef) -> Element:
    """u_n v + eps * sum_k (-1)^(n+k) (D^k/k!) v_{n+k} u."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    uid, vid = spec.bid(u), spec.bid(v)
    eps = spec.epsilon(uid, vid)
    acc = dict(spec.constant_by_id(uid, n, vid)._terms)
    for k in range(max(0, spec.n_max - n)):
        base = spec.constant_by_id(vid, n + k, uid)
        if not base:
            continue
        coeff = eps * Fraction((-1) ** (n + k), factorial(k))
        for (j, tid), c in base._terms.items():
            _accumulate(acc, (j + k, tid), coeff * c)
    return Element(acc)


def commutator_defect(spec: FormulaSpec, u: BasisRef, m: int, v: BasisRef,
                      n: int, w: BasisRef) -> Element:
    """u_m(v_n w) - eps v_n(u_m w) - sum_i (m over i) (u_i v)_{m+n-i} w."""
    if m < 0 or n < 0:
        raise ValueError("indices must be nonnegative")
    uid, vid, wid = spec.bid(u), spec.bid(v), spec.bid(w)
    eps = spec.epsilon(uid, vid)
    eu, ev, ew = basis_element(uid), basis_element(vid), basis_element(wid)
    out = _prod(spec, eu, m, spec.constant_by_id(vid, n, wid))
    out = out - _prod(spec, ev, n, spec.constant_by_id(uid, m, wid)).scale(eps)
    for i in range(min(spec.n_max, m + 1)):
        coeff = gen_binomial(m, i)
        if not coeff:
            continue
        uv = spec.constant_by_id(uid, i, vid)
        if not uv:
            continue
        out = out - _prod(spec, uv, m + n - i, ew).scale(coeff)
    return out


def jacobi_component_defect(spec: FormulaSpec, u: BasisRef, k: int, v: BasisRef,
                            m: int, w: BasisRef, n: int) -> Element:
    """One component of the half Jacobi identity, as an element defect.

    sum_i (-1)^i (k over i) ( u_{m+k-i}(v_{n+i} w)
                              - eps (-1)^k v_{n+k-i}(u_{m+i} w) )
    - sum_i (m over i) (u_{k+i} v)_{m+n-i} w

    The case k = 0 collapses to commutator_defect(u, m, v, n, w).
    """
    if k < 0 or m < 0 or n < 0:
        raise ValueError("indices must be nonnegative")
    uid, vid, wid = spec.bid(u), spec.bid(v), spec.bid(w)
    eps = spec.epsilon(uid, vid)
    eu, ev, ew = basis_element(uid), basis_element(vid), basis_element(wid)
    out = Element()
    for i in range(k + 1):
        coeff = (-1) ** i * gen_binomial(k, i)
        if not coeff:
            continue
        left = _prod(spec, eu, m + k - i, spec.constant_by_id(vid, n + i, wid))
        right = _prod(spec, ev, n + k - i, spec.constant_by_id(uid, m + i, wid))
        out = out + (left - right.scale(eps * (-1) ** k)).scale(coeff)
    for i in range(min(spec.n_max - k, m + 1)):
        coeff = gen_binomial(m, i)
        if not coeff:
            continue
        uv = spec.constant_by_id(uid, k + i, vid)
        if not uv:
            continue
        out = out - _prod(spec, uv, m + n - i, ew).scale(coeff)
    return out


def default_bound(spec: FormulaSpec) -> int:
    """Sweep bound: every defect vanishes at and beyond this index."""
    return spec.n_max + spec.k_max + 1


@lru_cache(maxsize=None)
def _sweep(spec: FormulaSpec, bound: int) -> tuple:
    defects = []
    ids = range(spec.dim)
    labels = spec.labels
    for uid in ids:
        for vid in ids:
            for n in range(bound + 1):
                value = skew_defect(spec, uid, n, vid)
                if not value:
                    continue
                if n == bound:
                    raise BoundInsufficientError(
                        f"skew defect nonzero at boundary index {bound}: "
                        f"({labels[uid]},{n},{labels[vid]})")
                defects.append(Defect(SKEW, (labels[uid], n, labels[vid]), value))
    for uid in ids:
        for vid in ids:
            for wid in ids:
                for m in range(bound + 1):
                    for n in range(bound + 1):
                        value = commutator_defect(spec, uid, m, vid, n, wid)
                        if not value:
                            continue
                        if m == bound or n == bound:
                            raise BoundInsufficientError(
                                f"commutator defect nonzero at boundary index {bound}: "
                                f"({labels[uid]},{m},{labels[vid]},{n},{labels[wid]})")
                        defects.append(Defect(
                            COMMUTATOR,
                            (labels[uid], m, labels[vid], n, labels[wid]), value))
    return tuple(defects)


def defect_sweep(spec: FormulaSpec, bound: Optional[int] = None) -> list:
    """All nonzero skew and commutator defects over the index window.

    The boundary row (any index equal to the bound) is evaluated and must
    be identically zero; otherwise the bound is reported insufficient.
    """
    if bound is None:
        bound = default_bound(spec)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    return list(_sweep(spec, bound))


def membership_central(spec: FormulaSpec, A: Element, c: BasisRef) -> bool:
    """True iff every term of A is the central vector at D-power >= 1."""
    cid = spec.bid(c)
    return all(bid == cid and k >= 1 for (k, bid) in A._terms)


def central_check(spec: FormulaSpec, c: BasisRef) -> bool:
    """True iff c annihilates and is annihilated by every basis vector."""
    cid = spec.bid(c)
    return not any(uid == cid or vid == cid for (uid, _n, vid) in spec._constants)


def _min_central_power(defects: tuple, cid: int) -> Optional[int]:
    powers = [k for d in defects for (k, bid) in d.value._terms if bid == cid]
    return min(powers) if powers else None


@lru_cache(maxsize=None)
def central_reduction(spec: FormulaSpec) -> Optional[int]:
    """Basis index of the central vector killed by the quotient, if any.

    The quotient relation Dc = 0 (hence c_n = 0 for n != -1 in the local
    algebra) is justified exactly when a central vector is designated,
    annihilation holds both ways, every defect lies in D.Q[D] (x) c and
    some defect has a D^1 component on c: then the defect ideal equals
    the full positive D-span of c.  Returns None otherwise, in
    particular when there are no defects at all (free case, no quotient).
    """
    cid = spec.central
    if cid is None or not central_check(spec, cid):
        return None
    defects = _sweep(spec, default_bound(spec))
    if not defects:
        return None
    if not all(membership_central(spec, d.value, cid) for d in defects):
        return None
    if _min_central_power(defects, cid) != 1:
        return None
    return cid


def injectivity_verdict(spec: FormulaSpec, central: Optional[BasisRef] = None) -> Verdict:
    """Decide whether the basis embeds into the generated quotient algebra.

    The status names the commutator/Jacobi ideal: injective_zero_ideal
    when all commutator defects vanish (skew defects, if any, must be
    absorbed by the central quotient), injective_central_ideal when the
    commutator defects generate exactly the positive D-span of the
    central vector.  Everything the two settled routes do not cover is
    reported undetermined rather than guessed.
    """
    cid = spec.bid(central) if central is not None else spec.central
    defects = _sweep(spec, default_bound(spec))
    if not defects:
        return Verdict(INJECTIVE_ZERO_IDEAL, (),
                       "all skew and commutator defects vanish; the free module "
                       "itself carries the algebra")

    def constant_part_outside_center(d: Defect) -> bool:
        return any(k == 0 and (cid is None or bid != cid)
                   for (k, bid) in d.value._terms)

    bad_skew = tuple(d for d in defects if d.kind == SKEW and constant_part_outside_center(d))
    if bad_skew:
        return Verdict(NOT_INJECTIVE_CANDIDATE, bad_skew,
                       "skew defects have constant parts outside the center: the "
                       "basis cannot embed into any quotient algebra")

    if cid is not None and central_check(spec, cid) and \
            all(membership_central(spec, d.value, cid) for d in defects):
        c_label = spec.vectors[cid].label
        commutator_defects = tuple(d for d in defects if d.kind == COMMUTATOR)
        if _min_central_power(defects, cid) != 1:
            return Verdict(UNDETERMINED, defects,
                           f"defects sit in higher D-powers of {c_label}; the "
                           "defect ideal is strictly smaller than its full "
                           "positive D-span and the quotient is not computed")
        if not commutator_defects:
            return Verdict(INJECTIVE_ZERO_IDEAL, defects,
                           "commutator defects all vanish; skew defects lie in "
                           f"D.Q[D].{c_label} and are killed by the central quotient")
        return Verdict(INJECTIVE_CENTRAL_IDEAL, defects,
                       f"defect ideal equals D.Q[D].{c_label} "
                       f"(central element {c_label})")

    return Verdict(UNDETERMINED, defects,
                   "defects fit neither settled pattern (zero ideal or the "
                   "positive D-span of a central vector); no decision procedure")


def pure_lie_check(spec: FormulaSpec) -> Verdict:
    """Check the degenerate case: constants inside S defining a Lie bracket.

    Requires every structure constant to sit at D-power 0; then the free
    module is an honest algebra iff all products above index 0 vanish,
    the index-0 product is eps-antisymmetric, and its super Jacobi
    identity holds on basis triples.
    """
    for (_uid, _n, _vid), elt in spec.constant_entries():
        if elt.d_degree > 0:
            raise FormulaError("constants leave S: some product has a positive D-power")

    labels = spec.labels
    problems = []
    witnesses = []
    for (uid, n, vid), _elt in spec.constant_entries():
        if n >= 1:
            problems.append(f"F_{n}({labels[uid]},{labels[vid]}) != 0")
            # the reversed index-0 skew defect picks up the offending
            # product through its D^n-correction, giving a nonzero witness
            halfskew = skew_defect(spec, vid, 0, uid)
            if halfskew:
                witnesses.append(Defect(SKEW, (labels[vid], 0, labels[uid]), halfskew))

    ids = range(spec.dim)
    antisym_broken = False
    for uid in ids:
        for vid in ids:
            d = spec.constant_by_id(uid, 0, vid) + \
                spec.constant_by_id(vid, 0, uid).scale(spec.epsilon(uid, vid))
            if d:
                antisym_broken = True
                problems.append(f"F_0({labels[uid]},{labels[vid]}) is not antisymmetric")
                witnesses.append(Defect(SKEW, (labels[uid], 0, labels[vid]),
                                        skew_defect(spec, uid, 0, vid)))
    jacobi_broken = False
    for uid in ids:
        for vid in ids:
            for wid in ids:
                d = commutator_defect(spec, uid, 0, vid, 0, wid)
                if d:
                    jacobi_broken = True
                    problems.append(
                        f"Jacobi identity of F_0 fails on "
                        f"({labels[uid]},{labels[vid]},{labels[wid]})")
                    witnesses.append(Defect(
                        COMMUTATOR, (labels[uid], 0, labels[vid], 0, labels[wid]), d))

    if not problems:
        return Verdict(PURE_LIE, (),
                       "products above index 0 vanish and the index-0 product "
                       "is a Lie superalgebra bracket")
    status = NOT_INJECTIVE_CANDIDATE if (antisym_broken or jacobi_broken) else UNDETERMINED
    return Verdict(status, tuple(witnesses), "; ".join(problems))


@dataclass(frozen=True)
class ConformalReport:
    """Clause-by-clause outcome of the conformal-vector validation."""

    self_product: bool        # (a) omega_n omega matches the required series
    central: bool             # (b) c annihilates and is annihilated
    action: bool              # (c) omega_0 = D, omega_1 = weight, omega_2 = 0 on S
    weight_zero_space: bool   # (d) weight-0 subspace is exactly the span of c
    weights_nonnegative: bool  # (e)
    failures: tuple

    @property
    def ok(self) -> bool:
        return (self.self_product and self.central and self.action
                and self.weight_zero_space and self.weights_nonnegative)


def conformal_validate(spec: FormulaSpec, omega: Optional[BasisRef] = None,
                       c: Optional[BasisRef] = None) -> ConformalReport:
    """Validate a conformal vector omega with central element c."""
    if not spec.graded:
        raise UngradedError("conformal validation needs weights")
    if omega is None or c is None:
        if spec.conformal is None:
            raise FormulaError("no conformal pair designated or given")
        oid, cid = spec.conformal
    else:
        oid, cid = spec.bid(omega), spec.bid(c)
    failures = []

    want = {0: basis_element(oid, k=1), 1: basis_element(oid).scale(2),
            3: basis_element(cid).scale(Fraction(1, 2))}
    got = {n: spec.constant_by_id(oid, n, oid) for n in range(spec.n_max)}
    got = {n: e for n, e in got.items() if e}
    self_product = got == want
    if not self_product:
        failures.append("self-product of the conformal vector is not "
                        "D.omega/z + 2 omega/z^2 + (1/2)c/z^4")

    central = central_check(spec, cid)
    if not central:
        failures.append("designated central vector is not central")

    action = True
    for v in spec.vectors:
        if v.index == cid:
            # the central column is identically zero, so omega_0 c = 0;
            # Dc only matches that in the quotient where Dc = 0.
            checks = (spec.constant_by_id(oid, 1, cid).is_zero
                      and spec.constant_by_id(oid, 2, cid).is_zero)
        else:
            checks = (spec.constant_by_id(oid, 0, v.index) == basis_element(v.index, k=1)
                      and spec.constant_by_id(oid, 1, v.index)
                      == basis_element(v.index).scale(v.weight)
                      and spec.constant_by_id(oid, 2, v.index).is_zero)
        if not checks:
            action = False
            failures.append(f"field of the conformal vector acts wrongly on {v.label!r}")

    zero_space = [v.label for v in spec.vectors if v.weight == 0]
    weight_zero_space = zero_space == [spec.vectors[cid].label]
    if not weight_zero_space:
        failures.append(f"weight-0 subspace is spanned by {zero_space}, "
                        "expected exactly the central vector")

    weights_nonnegative = all(v.weight >= 0 for v in spec.vectors)
    if not weights_nonnegative:
        failures.append("negative weights present")

    return ConformalReport(self_product, central, action, weight_zero_space,
                           weights_nonnegative, tuple(failures))
