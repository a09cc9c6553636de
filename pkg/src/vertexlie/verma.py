"""The vacuum module of a formula: PBW vectors, gradings, fields.

Vectors are rational combinations of normal-ordered monomials
u^(1)_{n_1} ... u^(k)_{n_k} . 1 with every mode n_i < 0, factors sorted
by (generator weight descending, basis index, mode).  Modes n >= 0 kill
the vacuum; left multiplication rewrites to normal form through
x y = eps y x + [x, y] with the bracket of the local algebra, so the
module structure is exactly left multiplication in the enveloping
algebra of the negative half.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, floor
from typing import Dict, Iterable, List, Optional, Tuple

from .defects import central_reduction, injectivity_verdict
from .formula import (
    CutoffExceededError,
    Element,
    FormulaError,
    FormulaSpec,
    RatLike,
    SparseVector,
    UngradedError,
    gen_binomial,
    rat,
)
from .local_algebra import LieElement, LieGenerator, _pair_bracket, lie_D


class NotInjectiveError(FormulaError):
    """The vacuum module is only built over an injective verdict."""


@dataclass(frozen=True, order=True)
class PbwMonomial:
    """Normal-ordered word of negative modes (empty word = vacuum)."""

    factors: Tuple[LieGenerator, ...] = ()

    def display(self, spec: FormulaSpec) -> str:
        if not self.factors:
            return "1"
        body = " ".join(f"{spec.vectors[g.bid].label}_{g.n}" for g in self.factors)
        return f"{body} 1"


VACUUM_MONOMIAL = PbwMonomial()


class PbwVector(SparseVector):
    """Finite rational combination of normal-ordered monomials."""

    def display(self, spec: FormulaSpec) -> str:
        if not self:
            return "0"
        parts = []
        for mono, coeff in self.items():
            body = mono.display(spec)
            if coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff} * {body}")
        return " + ".join(parts).replace("+ -", "- ")


def vacuum() -> PbwVector:
    """The vacuum vector: empty monomial with coefficient one."""
    return PbwVector({VACUUM_MONOMIAL: 1})


_ZERO = PbwVector()


def generator_weight(spec: FormulaSpec, g: LieGenerator) -> Fraction:
    """wt(u_n) = wt(u) - n - 1."""
    return spec.weight(g.bid) - g.n - 1


def monomial_weight(spec: FormulaSpec, mono: PbwMonomial) -> Fraction:
    return sum((generator_weight(spec, g) for g in mono.factors), Fraction(0))


def monomial_parity(spec: FormulaSpec, mono: PbwMonomial) -> int:
    return sum(spec.parity(g.bid) for g in mono.factors) % 2


def _order_key(spec: FormulaSpec, g: LieGenerator) -> tuple:
    primary = -generator_weight(spec, g) if spec.graded else Fraction(0)
    return (primary, g.bid, g.n)


@lru_cache(maxsize=None)
def _mul_gen(spec: FormulaSpec, g: LieGenerator, mono: PbwMonomial) -> PbwVector:
    """Left-multiply one generator onto a normal-ordered monomial."""
    cid = central_reduction(spec)
    if cid is not None and g.bid == cid and g.n != -1:
        return _ZERO  # the quotient kills every central mode but c_{-1}
    factors = mono.factors
    if not factors:
        if g.n >= 0:
            return _ZERO
        return PbwVector({PbwMonomial((g,)): 1})
    head, rest = factors[0], PbwMonomial(factors[1:])
    if g.n < 0:
        kg, kh = _order_key(spec, g), _order_key(spec, head)
        if kg < kh:
            return PbwVector({PbwMonomial((g,) + factors): 1})
        if kg == kh:  # identical generator: keys determine (bid, n)
            if spec.parity(g.bid):
                # odd square: g g = (1/2)[g, g]
                half = _pair_bracket(spec, g.bid, g.n, g.bid, g.n)
                return act_lie(spec, half, PbwVector({rest: 1})).scale(Fraction(1, 2))
            return PbwVector({PbwMonomial((g,) + factors): 1})
    eps = -1 if spec.parity(g.bid) and spec.parity(head.bid) else 1
    swapped = act(spec, head, _mul_gen(spec, g, rest)).scale(eps)
    corr = act_lie(spec, _pair_bracket(spec, g.bid, g.n, head.bid, head.n),
                   PbwVector({rest: 1}))
    return swapped + corr


def act(spec: FormulaSpec, g: LieGenerator, v: PbwVector) -> PbwVector:
    """Action of the mode g on a module vector (normal-ordered result)."""
    out: dict = {}
    for mono, coeff in v._terms.items():
        for m2, c2 in _mul_gen(spec, g, mono)._terms.items():
            new = out.get(m2, 0) + coeff * c2
            if new:
                out[m2] = new
            else:
                out.pop(m2, None)
    return PbwVector(out)


def act_lie(spec: FormulaSpec, x: LieElement, v: PbwVector) -> PbwVector:
    """Linear extension of act over a combination of modes."""
    out = _ZERO
    for g, coeff in x._terms.items():
        out = out + act(spec, g, v).scale(coeff)
    return out


def act_word(spec: FormulaSpec, word: Iterable[LieGenerator],
             v: Optional[PbwVector] = None) -> PbwVector:
    """Apply a word of modes to v (default vacuum), rightmost first."""
    out = vacuum() if v is None else v
    for g in reversed(list(word)):
        out = act(spec, g, out)
    return out


def apply_D_module(spec: FormulaSpec, v: PbwVector) -> PbwVector:
    """Derivation with [D, u_n] = -n u_{n-1} and D(vacuum) = 0."""
    out = _ZERO
    for mono, coeff in v._terms.items():
        factors = mono.factors
        for i, g in enumerate(factors):
            dg = lie_D(spec, LieElement({g: 1}))
            if not dg:
                continue
            piece = act_lie(spec, dg, PbwVector({PbwMonomial(factors[i + 1:]): 1}))
            for f in reversed(factors[:i]):
                piece = act(spec, f, piece)
            out = out + piece.scale(coeff)
    return out


def specialize_level(spec: FormulaSpec, v: PbwVector, level: RatLike) -> PbwVector:
    """Substitute the central mode c_{-1} by the rational level; idempotent."""
    if spec.central is None:
        raise FormulaError("no central vector designated")
    cid = spec.central
    ell = rat(level)
    out: dict = {}
    for mono, coeff in v._terms.items():
        kept = []
        power = 0
        for g in mono.factors:
            if g.bid == cid and g.n == -1:
                power += 1
            else:
                kept.append(g)
        scaled = coeff * ell ** power
        if not scaled:
            continue
        key = PbwMonomial(tuple(kept))
        new = out.get(key, 0) + scaled
        if new:
            out[key] = new
        else:
            out.pop(key, None)
    return PbwVector(out)


# ---------------------------------------------------------------------------
# Graded structure
# ---------------------------------------------------------------------------

def _require_graded(spec: FormulaSpec) -> None:
    if not spec.graded:
        raise UngradedError("this operation needs a graded formula")


def _require_injective(spec: FormulaSpec) -> None:
    verdict = injectivity_verdict(spec)
    if not verdict.injective:
        raise NotInjectiveError(
            f"verdict is {verdict.status}; run the defect check first")


def _counting_generators(spec: FormulaSpec, cutoff: Fraction) -> List[tuple]:
    """(generator, weight, odd) with weight <= cutoff, PBW-ordered.

    The central mode c_{-1} is excluded: graded pieces are counted as
    ranks over the polynomial algebra it generates, which equals the
    dimension after level specialization.
    """
    cid = spec.central
    reduced = central_reduction(spec)
    gens = []
    for vec in spec.vectors:
        start = -1
        if vec.index == cid:
            if reduced is not None:
                continue
            start = -2  # c_{-1} is the excluded polynomial generator
        if vec.weight <= 0 and vec.index != cid:
            raise FormulaError(
                f"basis vector {vec.label!r} of weight {vec.weight} makes "
                "graded pieces infinite-dimensional")
        n = start
        while vec.weight - n - 1 <= cutoff:
            g = LieGenerator(vec.index, n)
            gens.append((g, generator_weight(spec, g), bool(spec.parity(vec.index))))
            n -= 1
    gens.sort(key=lambda item: _order_key(spec, item[0]))
    return gens


def monomial_basis(spec: FormulaSpec, cutoff: RatLike) -> Dict[Fraction, List[PbwMonomial]]:
    """All normal-ordered monomials of weight <= cutoff, keyed by weight.

    Central polynomial factors are excluded (see _counting_generators);
    odd generators appear at most once per monomial.
    """
    _require_graded(spec)
    _require_injective(spec)
    bound = rat(cutoff)
    if bound < 0:
        raise ValueError("cutoff must be nonnegative")
    gens = _counting_generators(spec, bound)
    out: Dict[Fraction, List[PbwMonomial]] = {}

    def rec(start: int, factors: list, weight: Fraction) -> None:
        out.setdefault(weight, []).append(PbwMonomial(tuple(factors)))
        for i in range(start, len(gens)):
            g, w, odd = gens[i]
            if weight + w > bound:
                continue
            factors.append(g)
            rec(i + 1 if odd else i, factors, weight + w)
            factors.pop()

    rec(0, [], Fraction(0))
    for monos in out.values():
        monos.sort()
    return dict(sorted(out.items()))


def graded_dimension(spec: FormulaSpec, cutoff: RatLike) -> Dict[Fraction, int]:
    """Dimensions of the graded pieces up to the cutoff.

    Integer weights up to the cutoff are always present (zero-filled);
    fractional weights appear when they occur.
    """
    basis = monomial_basis(spec, cutoff)
    dims = {w: len(monos) for w, monos in basis.items()}
    for k in range(floor(rat(cutoff)) + 1):
        dims.setdefault(Fraction(k), 0)
    return dict(sorted(dims.items()))


def _by_weight(spec: FormulaSpec, v: PbwVector) -> Dict[Fraction, PbwVector]:
    pieces: Dict[Fraction, dict] = {}
    for mono, coeff in v._terms.items():
        pieces.setdefault(monomial_weight(spec, mono), {})[mono] = coeff
    return {w: PbwVector(d) for w, d in sorted(pieces.items())}


def weight_of_vector(spec: FormulaSpec, v: PbwVector) -> Optional[Fraction]:
    """Common weight of a homogeneous vector (None for zero)."""
    pieces = _by_weight(spec, v)
    if len(pieces) > 1:
        raise FormulaError(f"vector mixes weights {sorted(pieces)}")
    return next(iter(pieces), None)


def kappa(spec: FormulaSpec, A: Element) -> PbwVector:
    """Embedding of Q[D] (x) S into the module: D^k u -> k! u_{-k-1} 1."""
    cid = central_reduction(spec)
    out: dict = {}
    for (k, bid), coeff in A._terms.items():
        if cid is not None and bid == cid and k >= 1:
            continue
        mono = PbwMonomial((LieGenerator(bid, -k - 1),))
        new = out.get(mono, 0) + coeff * factorial(k)
        if new:
            out[mono] = new
        else:
            out.pop(mono, None)
    return PbwVector(out)


def kappa_basis(spec: FormulaSpec, ref) -> PbwVector:
    """kappa of a single basis vector: u_{-1} 1."""
    return PbwVector({PbwMonomial((LieGenerator(spec.bid(ref), -1),)): 1})


# ---------------------------------------------------------------------------
# Field coefficients
# ---------------------------------------------------------------------------

def field_coefficient(spec: FormulaSpec, a: PbwVector, n: int, b: PbwVector,
                      cutoff: RatLike) -> PbwVector:
    """The coefficient a_n b of the field generated by a.

    Defined recursively from the normal-order product: the vacuum gives
    the identity field, and for a = u_m a' the modes are

        (a)_n = sum_i (-1)^i (m over i)
                ( u_{m-i} a'_{n+i}  -  eps (-1)^m a'_{m+n-i} u_i ).

    All sums truncate because module weights are bounded below by zero;
    any intermediate whose weight passes the cutoff raises
    CutoffExceededError instead of being dropped.
    """
    _require_graded(spec)
    _require_injective(spec)
    bound = rat(cutoff)
    out = _ZERO
    for mono, coeff in a._terms.items():
        for bw, piece in _by_weight(spec, b).items():
            out = out + _fc(spec, mono, n, piece, bw, bound).scale(coeff)
    return out


def _fc(spec: FormulaSpec, mono: PbwMonomial, n: int, b: PbwVector,
        bw: Fraction, cutoff: Fraction) -> PbwVector:
    if not b:
        return _ZERO
    if not mono.factors:
        return b if n == -1 else _ZERO
    g = mono.factors[0]
    rest = PbwMonomial(mono.factors[1:])
    m = g.n
    lam = spec.weight(g.bid)
    wr = monomial_weight(spec, rest)
    eps = -1 if spec.parity(g.bid) and monomial_parity(spec, rest) else 1

    total = lam + wr + bw - m - n - 2
    if total > cutoff:
        raise CutoffExceededError(
            f"field coefficient of weight {total} exceeds cutoff {cutoff}")

    out = _ZERO
    imax = floor(wr + bw - n - 1)
    for i in range(0, imax + 1):
        coeff = (-1) ** i * gen_binomial(m, i)
        if not coeff:
            continue
        inner = _fc(spec, rest, n + i, b, bw, cutoff)
        if inner:
            out = out + act(spec, LieGenerator(g.bid, m - i), inner).scale(coeff)

    sign = eps * (1 if m % 2 == 0 else -1)
    imax = floor(bw + lam - 1)
    for i in range(0, imax + 1):
        coeff = (-1) ** i * gen_binomial(m, i)
        if not coeff:
            continue
        if bw + lam - i - 1 > cutoff:
            raise CutoffExceededError(
                f"intermediate of weight {bw + lam - i - 1} exceeds cutoff {cutoff}")
        ub = act(spec, LieGenerator(g.bid, i), b)
        if ub:
            out = out - _fc(spec, rest, m + n - i, ub, bw + lam - i - 1,
                            cutoff).scale(sign * coeff)
    return out


# ---------------------------------------------------------------------------
# Axiom spot-checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpotcheckReport:
    """Truncated module-level checks of the field axioms."""

    creation: bool
    vacuum_field: bool
    half_skew: bool
    locality: bool
    translation: bool
    commutator_formula: bool
    failures: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def axiom_spotcheck(spec: FormulaSpec, cutoff: RatLike) -> SpotcheckReport:
    """Exact truncated checks of the field axioms on graded pieces.

    Verifies, on all graded pieces of weight <= cutoff: the creation
    property, the identity field of the vacuum, half skew symmetry on
    the embedded basis, locality of basis fields at order n_max, the
    translation rule for D, and the commutator formula.  Field
    coefficients are computed with an internal cutoff margin wide enough
    that no intermediate overflows on these windows.
    """
    _require_graded(spec)
    _require_injective(spec)
    bound = rat(cutoff)
    lam_max = max(v.weight for v in spec.vectors)
    # wide enough that no deliberate window below trips the overflow guard
    margin = 2 * bound + 2 * lam_max + 6
    failures: list = []
    basis = monomial_basis(spec, bound)
    vectors = [PbwVector({m: 1}) for monos in basis.values() for m in monos]
    active = [v for v in spec.vectors
              if any(v.index in (uid, vid) for (uid, _n, vid) in spec._constants)]

    creation = True
    for v in spec.vectors:
        kv = kappa_basis(spec, v.index)
        for n in range(0, spec.n_max + 2):
            if field_coefficient(spec, kv, n, vacuum(), margin):
                creation = False
                failures.append(f"creation fails for {v.label!r} at mode {n}")
        if field_coefficient(spec, kv, -1, vacuum(), margin) != kv:
            creation = False
            failures.append(f"creation fails for {v.label!r} at mode -1")

    vacuum_field = True
    for b in vectors:
        for n in range(-3, 3):
            want = b if n == -1 else _ZERO
            if field_coefficient(spec, vacuum(), n, b, margin) != want:
                vacuum_field = False
                failures.append(f"vacuum field acts wrongly at mode {n}")

    half_skew = True
    for u in active:
        for v in active:
            ku, kv = kappa_basis(spec, u.index), kappa_basis(spec, v.index)
            eps = spec.epsilon(u.index, v.index)
            nmax = floor(u.weight + v.weight)
            for n in range(0, nmax + 1):
                # u_n v = -eps sum_k (-1)^(n+k) (D^k/k!) v_{n+k} u
                lhs = field_coefficient(spec, ku, n, kv, margin)
                rhs = _ZERO
                k = 0
                while u.weight + v.weight - n - k - 1 >= 0:
                    term = field_coefficient(spec, kv, n + k, ku, margin)
                    for _ in range(k):
                        term = apply_D_module(spec, term)
                    rhs = rhs - term.scale(
                        Fraction((-1) ** (n + k), factorial(k)) * eps)
                    k += 1
                if lhs != rhs:
                    half_skew = False
                    failures.append(
                        f"half skew symmetry fails for ({u.label},{n},{v.label})")

    locality = True
    N = spec.n_max
    mode_lo, mode_hi = -floor(bound) - 2, floor(bound) + 2
    for u in active:
        for v in active:
            eps = spec.epsilon(u.index, v.index)
            for w in vectors:
                for a in range(mode_lo, mode_hi + 1):
                    for b in range(mode_lo, mode_hi + 1):
                        total = _ZERO
                        for j in range(N + 1):
                            coeff = (-1) ** j * gen_binomial(N, j)
                            gu = LieGenerator(u.index, a - j)
                            gv = LieGenerator(v.index, b + j)
                            term = act(spec, gu, act(spec, gv, w)) \
                                - act(spec, gv, act(spec, gu, w)).scale(eps)
                            total = total + term.scale(coeff)
                        if total:
                            locality = False
                            failures.append(
                                f"locality fails for ({u.label},{v.label}) "
                                f"at modes ({a},{b})")

    translation = True
    samples = [kappa_basis(spec, v.index) for v in active]
    samples += [vec for vec in vectors if len(next(iter(vec._terms)).factors) == 2][:3]
    for a in samples:
        da = apply_D_module(spec, a)
        for b in vectors[:6]:
            for n in range(-4, 5):
                lhs = field_coefficient(spec, da, n, b, margin)
                rhs = field_coefficient(spec, a, n - 1, b, margin).scale(-n)
                if lhs != rhs:
                    translation = False
                    failures.append(f"translation rule fails at mode {n}")

    commutator_formula = True
    for u in active:
        for v in active:
            eps = spec.epsilon(u.index, v.index)
            for w in vectors[:8]:
                for m in range(-2, 3):
                    for n in range(-2, 3):
                        gu, gv = LieGenerator(u.index, m), LieGenerator(v.index, n)
                        lhs = act(spec, gu, act(spec, gv, w)) \
                            - act(spec, gv, act(spec, gu, w)).scale(eps)
                        rhs = _ZERO
                        for i in range(spec.n_max):
                            coeff = gen_binomial(m, i)
                            prod = spec.constant_by_id(u.index, i, v.index)
                            if not coeff or not prod:
                                continue
                            rhs = rhs + field_coefficient(
                                spec, kappa(spec, prod), m + n - i, w,
                                margin).scale(coeff)
                        if lhs != rhs:
                            commutator_formula = False
                            failures.append(
                                f"commutator formula fails for "
                                f"({u.label},{m},{v.label},{n})")

    return SpotcheckReport(creation, vacuum_field, half_skew, locality,
                           translation, commutator_formula, tuple(failures))
