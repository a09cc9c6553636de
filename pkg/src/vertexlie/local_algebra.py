"""The Lie (super)algebra spanned by the integer modes of a formula.

Generators are symbols u_n, u a basis vector and n any integer, subject
to the mode relation (Du)_n = -n u_{n-1}; the bracket is

    [u_n, v_p] = sum_{i >= 0} (n over i) (u_i v)_{n+p-i},

a finite sum because the products truncate.  When the defect analysis
shows the formula's quotient kills the positive D-span of a central
vector c, the relation Dc = 0 is enforced here by dropping c_n for
n != -1 (and every (D^k c)_n with k >= 1); the bracket then descends to
the quotient algebra, where the Lie axioms hold on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional, Union

from .defects import central_reduction
from .formula import (
    BasisRef,
    Element,
    FormulaSpec,
    InhomogeneousError,
    SparseVector,
    apply_D,
    extend_product,
    falling,
    gen_binomial,
    support_bound,
)


@dataclass(frozen=True, order=True)
class LieGenerator:
    """The mode u_n: basis index and integer mode number."""

    bid: int
    n: int


class LieElement(SparseVector):
    """Finite rational combination of mode generators."""

    def display(self, spec: FormulaSpec) -> str:
        if not self:
            return "0"
        parts = []
        for gen, coeff in self.items():
            body = f"{spec.vectors[gen.bid].label}_{gen.n}"
            if coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


GeneratorRef = Union[LieGenerator, tuple]


def generator(spec: FormulaSpec, ref: GeneratorRef, n: Optional[int] = None) -> LieGenerator:
    """Coerce (basis ref, n) or a LieGenerator to a LieGenerator."""
    if isinstance(ref, LieGenerator):
        return ref
    if n is None:
        ref, n = ref
    return LieGenerator(spec.bid(ref), int(n))


def single(spec: FormulaSpec, ref: GeneratorRef, n: Optional[int] = None) -> LieElement:
    return LieElement({generator(spec, ref, n): 1})


def reduce_generator(spec: FormulaSpec, A: Element, n: int) -> LieElement:
    """Canonical image of the mode A_n: (D^k u)_n -> (-1)^k n...(n-k+1) u_{n-k}.

    With an active central quotient the images c_m, m != -1, and every
    positive D-power of c are dropped.
    """
    cid = central_reduction(spec)
    acc: dict = {}
    for (k, bid), coeff in A._terms.items():
        f = falling(n, k)
        if not f:
            continue
        if cid is not None and bid == cid and (k >= 1 or n - k != -1):
            continue
        gen = LieGenerator(bid, n - k)
        new = acc.get(gen, 0) + coeff * f * (-1) ** k
        if new:
            acc[gen] = new
        else:
            acc.pop(gen, None)
    return LieElement(acc)


@lru_cache(maxsize=None)
def _pair_bracket(spec: FormulaSpec, ubid: int, n: int, vbid: int, p: int) -> LieElement:
    out = LieElement()
    for i in range(spec.n_max):
        coeff = gen_binomial(n, i)
        if not coeff:
            continue
        prod = spec.constant_by_id(ubid, i, vbid)
        if not prod:
            continue
        out = out + reduce_generator(spec, prod, n + p - i).scale(coeff)
    return out


def bracket(spec: FormulaSpec, x: LieElement, y: LieElement) -> LieElement:
    """[x, y], bilinear over [u_n, v_p] = sum_i (n over i)(u_i v)_{n+p-i}."""
    acc: dict = {}
    for gx, cx in x._terms.items():
        for gy, cy in y._terms.items():
            pb = _pair_bracket(spec, gx.bid, gx.n, gy.bid, gy.n)
            if not pb:
                continue
            scale = cx * cy
            for g, c in pb._terms.items():
                new = acc.get(g, 0) + scale * c
                if new:
                    acc[g] = new
                else:
                    acc.pop(g, None)
    return LieElement(acc)


def lie_D(spec: FormulaSpec, x: LieElement) -> LieElement:
    """The derivation u_n -> -n u_{n-1} (descending to the quotient)."""
    cid = central_reduction(spec)
    acc: dict = {}
    for g, c in x._terms.items():
        if g.n == 0:
            continue
        if cid is not None and g.bid == cid:
            continue
        target = LieGenerator(g.bid, g.n - 1)
        new = acc.get(target, 0) + (-g.n) * c
        if new:
            acc[target] = new
        else:
            acc.pop(target, None)
    return LieElement(acc)


def parity_of_lie(spec: FormulaSpec, x: LieElement) -> int:
    seen = {spec.parity(g.bid) for g in x._terms}
    if len(seen) > 1:
        raise InhomogeneousError("element mixes even and odd modes")
    return seen.pop() if seen else 0


def triangular_split(x: LieElement) -> tuple:
    """Partition into (modes n < 0, modes n >= 0); their sum is x."""
    neg = LieElement({g: c for g, c in x._terms.items() if g.n < 0})
    pos = LieElement({g: c for g, c in x._terms.items() if g.n >= 0})
    return neg, pos


@dataclass(frozen=True)
class LawViolation:
    """One failed Lie-algebra law found during window verification."""

    law: str  # "skew" | "jacobi" | "derivation"
    generators: tuple
    discrepancy: LieElement

    def __str__(self) -> str:
        return f"{self.law} fails at {self.generators}"


def jacobi_window_verify(spec: FormulaSpec, window: int) -> list:
    """Exact Lie-superalgebra laws over all modes |n| <= window.

    Checks eps-skew-symmetry and the derivation law on all generator
    pairs and the super Jacobi identity on all triples; returns every
    violation (empty list = pass).
    """
    if window < 0:
        raise ValueError("window must be nonnegative")
    violations = []
    modes = range(-window, window + 1)
    gens = [LieGenerator(bid, n) for bid in range(spec.dim) for n in modes]

    for gx in gens:
        x = LieElement({gx: 1})
        dx = lie_D(spec, x)
        for gy in gens:
            y = LieElement({gy: 1})
            xy = bracket(spec, x, y)
            eps = -1 if spec.parity(gx.bid) and spec.parity(gy.bid) else 1
            skew = xy + bracket(spec, y, x).scale(eps)
            if skew:
                violations.append(LawViolation("skew", (gx, gy), skew))
            leib = lie_D(spec, xy) - bracket(spec, dx, y) - bracket(spec, x, lie_D(spec, y))
            if leib:
                violations.append(LawViolation("derivation", (gx, gy), leib))

    # A basis vector that never occurs as an argument of the constants
    # table brackets to zero with every mode, so any Jacobi triple
    # containing it reads 0 = 0 - 0; skip those outright.
    inert = {bid for bid in range(spec.dim)
             if not any(bid in (uid, vid) for (uid, _n, vid) in spec._constants)}
    triple_gens = [g for g in gens if g.bid not in inert]
    for gx in triple_gens:
        x = LieElement({gx: 1})
        for gy in triple_gens:
            y = LieElement({gy: 1})
            eps = -1 if spec.parity(gx.bid) and spec.parity(gy.bid) else 1
            xy = bracket(spec, x, y)
            for gz in triple_gens:
                z = LieElement({gz: 1})
                jac = bracket(spec, x, bracket(spec, y, z)) \
                    - bracket(spec, xy, z) \
                    - bracket(spec, y, bracket(spec, x, z)).scale(eps)
                if jac:
                    violations.append(LawViolation("jacobi", (gx, gy, gz), jac))
    return violations


def bracket_on_U(spec: FormulaSpec, u: Element, v: Element) -> Element:
    """The bracket transported to Q[D] (x) S through u -> u_{-1}:

    [u, v] = sum_{n >= 0} ((-1)^n / (n+1)!) D^{n+1} (u_n v).
    """
    out = Element()
    for n in range(support_bound(spec, u, v)):
        prod = extend_product(spec, u, n, v)
        if prod:
            out = out + apply_D(prod, n + 1).scale(Fraction((-1) ** n, factorial(n + 1)))
    return out
