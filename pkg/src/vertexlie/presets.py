"""Ready-made formulas: affine, Virasoro, Neveu-Schwarz, Novikov-type.

Each constructor returns a FormulaSpec whose constants are exact
rationals; central elements carry the level symbolically (a basis vector
c), to be specialized to a number only inside the vacuum module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

from . import defects
from .formula import EVEN, ODD, FormulaSpec, rat


def _table(rows) -> tuple:
    return tuple(tuple(rat(x) for x in row) for row in rows)


def _cube(data) -> tuple:
    return tuple(tuple(tuple(rat(x) for x in vec) for vec in row) for row in data)


@dataclass(frozen=True)
class LieData:
    """Finite-dimensional Lie algebra data with an invariant form.

    bracket[i][j] is the coordinate vector of [e_i, e_j]; form[i][j] is
    <e_i, e_j>.  Antisymmetry, symmetry of the form and invariance
    <[x,y],z> = <x,[y,z]> are enforced; the Jacobi identity is not, so
    that broken inputs can be fed to the defect analysis on purpose.
    """

    labels: Tuple[str, ...]
    bracket: tuple
    form: tuple

    def __init__(self, labels: Sequence[str], bracket, form):
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "bracket", _cube(bracket))
        object.__setattr__(self, "form", _table(form))
        self._validate()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def _validate(self) -> None:
        d = self.dim
        if len(self.bracket) != d or any(len(r) != d for r in self.bracket) \
                or any(len(v) != d for r in self.bracket for v in r):
            raise ValueError("bracket table has wrong shape")
        if len(self.form) != d or any(len(r) != d for r in self.form):
            raise ValueError("form table has wrong shape")
        for i in range(d):
            for j in range(d):
                if self.form[i][j] != self.form[j][i]:
                    raise ValueError("form is not symmetric")
                for k in range(d):
                    if self.bracket[i][j][k] != -self.bracket[j][i][k]:
                        raise ValueError("bracket is not antisymmetric")
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    left = sum(self.bracket[i][j][t] * self.form[t][k] for t in range(d))
                    right = sum(self.bracket[j][k][t] * self.form[i][t] for t in range(d))
                    if left != right:
                        raise ValueError("form is not invariant")


@dataclass(frozen=True)
class BilinearAlgebra:
    """A plain bilinear product and a bilinear form on a finite basis."""

    labels: Tuple[str, ...]
    product: tuple  # product[i][j] = coordinates of e_i . e_j
    form: tuple

    def __init__(self, labels: Sequence[str], product, form):
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "product", _cube(product))
        object.__setattr__(self, "form", _table(form))
        d = self.dim
        if len(self.product) != d or any(len(r) != d for r in self.product) \
                or any(len(v) != d for r in self.product for v in r):
            raise ValueError("product table has wrong shape")
        if len(self.form) != d or any(len(r) != d for r in self.form):
            raise ValueError("form table has wrong shape")

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def form_symmetric(self) -> bool:
        return all(self.form[i][j] == self.form[j][i]
                   for i in range(self.dim) for j in range(self.dim))

    def mul_vec(self, x: tuple, y: tuple) -> tuple:
        """Product of two coordinate vectors."""
        d = self.dim
        out = [Fraction(0)] * d
        for i in range(d):
            if not x[i]:
                continue
            for j in range(d):
                if not y[j]:
                    continue
                c = x[i] * y[j]
                for k in range(d):
                    out[k] += c * self.product[i][j][k]
        return tuple(out)

    def form_vec(self, x: tuple, y: tuple) -> Fraction:
        return sum(x[i] * y[j] * self.form[i][j]
                   for i in range(self.dim) for j in range(self.dim))

    def unit(self, i: int) -> tuple:
        return tuple(Fraction(int(j == i)) for j in range(self.dim))


def _vector_terms(labels: Sequence[str], vec, k: int = 0, scale: Fraction = Fraction(1)) -> dict:
    return {(k, labels[t]): scale * c for t, c in enumerate(vec) if c}


def affine(g: LieData, central_label: str = "c") -> FormulaSpec:
    """Formula of an affinization: x_0 y = [x,y], x_1 y = <x,y> c.

    Basis vectors of g get weight 1, the central vector weight 0.
    """
    if central_label in g.labels:
        raise ValueError(f"central label {central_label!r} collides with the basis")
    basis = [(lbl, EVEN, 1) for lbl in g.labels] + [(central_label, EVEN, 0)]
    constants: dict = {}
    for i, li in enumerate(g.labels):
        for j, lj in enumerate(g.labels):
            terms = _vector_terms(g.labels, g.bracket[i][j])
            if terms:
                constants[(li, 0, lj)] = terms
            if g.form[i][j]:
                constants[(li, 1, lj)] = {(0, central_label): g.form[i][j]}
    return FormulaSpec(basis, constants, central=central_label, name="affine")


def virasoro() -> FormulaSpec:
    """Two-dimensional formula with the conformal self-product."""
    basis = [("omega", EVEN, 2), ("c", EVEN, 0)]
    constants = {
        ("omega", 0, "omega"): {(1, "omega"): 1},
        ("omega", 1, "omega"): {(0, "omega"): 2},
        ("omega", 3, "omega"): {(0, "c"): Fraction(1, 2)},
    }
    return FormulaSpec(basis, constants, conformal=("omega", "c"), name="virasoro")


def neveu_schwarz() -> FormulaSpec:
    """Even conformal vector plus an odd weight-3/2 partner."""
    basis = [("omega", EVEN, 2), ("tau", ODD, Fraction(3, 2)), ("c", EVEN, 0)]
    constants = {
        ("omega", 0, "omega"): {(1, "omega"): 1},
        ("omega", 1, "omega"): {(0, "omega"): 2},
        ("omega", 3, "omega"): {(0, "c"): Fraction(1, 2)},
        ("tau", 0, "tau"): {(0, "omega"): 2},
        ("tau", 2, "tau"): {(0, "c"): Fraction(2, 3)},
        ("omega", 0, "tau"): {(1, "tau"): 1},
        ("omega", 1, "tau"): {(0, "tau"): Fraction(3, 2)},
        ("tau", 0, "omega"): {(1, "tau"): Fraction(1, 2)},
        ("tau", 1, "omega"): {(0, "tau"): Fraction(3, 2)},
    }
    return FormulaSpec(basis, constants, conformal=("omega", "c"), name="neveu-schwarz")


def novikov(algebra: BilinearAlgebra, central_label: str = "c") -> FormulaSpec:
    """Weight-2 formula of a bilinear algebra with a symmetric form:

    u_0 v = D(u.v),  u_1 v = u.v + v.u,  u_3 v = (1/2)<u,v> c.
    """
    if not algebra.form_symmetric:
        raise ValueError("form is not symmetric")
    if central_label in algebra.labels:
        raise ValueError(f"central label {central_label!r} collides with the basis")
    labels = algebra.labels
    basis = [(lbl, EVEN, 2) for lbl in labels] + [(central_label, EVEN, 0)]
    constants: dict = {}
    for i, li in enumerate(labels):
        for j, lj in enumerate(labels):
            uv = algebra.product[i][j]
            vu = algebra.product[j][i]
            terms = _vector_terms(labels, uv, k=1)
            if terms:
                constants[(li, 0, lj)] = terms
            sym = tuple(a + b for a, b in zip(uv, vu))
            terms = _vector_terms(labels, sym)
            if terms:
                constants[(li, 1, lj)] = terms
            if algebra.form[i][j]:
                constants[(li, 3, lj)] = {(0, central_label): Fraction(1, 2) * algebra.form[i][j]}
    return FormulaSpec(basis, constants, central=central_label, name="novikov")


def comm_assoc(algebra: BilinearAlgebra, identity: str, central_label: str = "c") -> FormulaSpec:
    """Weight-2 formula of a commutative associative algebra with identity:

    u_0 v = D(u.v),  u_1 v = 2 u.v,  u_3 v = (1/2)<u,v> c,

    with the identity element serving as the conformal vector.  Requires
    commutativity, associativity, an associative symmetric form and
    <identity, identity> = 1.
    """
    if not algebra.form_symmetric:
        raise ValueError("invalid tables: form is not symmetric")
    labels = algebra.labels
    d = algebra.dim
    iid = labels.index(identity)
    one = algebra.unit(iid)
    for i in range(d):
        ei = algebra.unit(i)
        if algebra.mul_vec(one, ei) != ei or algebra.mul_vec(ei, one) != ei:
            raise ValueError(f"invalid tables: {identity!r} is not an identity")
        for j in range(d):
            ej = algebra.unit(j)
            if algebra.mul_vec(ei, ej) != algebra.mul_vec(ej, ei):
                raise ValueError("invalid tables: product is not commutative")
            for k in range(d):
                ek = algebra.unit(k)
                if algebra.mul_vec(algebra.mul_vec(ei, ej), ek) \
                        != algebra.mul_vec(ei, algebra.mul_vec(ej, ek)):
                    raise ValueError("invalid tables: product is not associative")
                if algebra.form_vec(algebra.mul_vec(ei, ej), ek) \
                        != algebra.form_vec(ei, algebra.mul_vec(ej, ek)):
                    raise ValueError("invalid tables: form is not associative")
    if algebra.form_vec(one, one) != 1:
        raise ValueError("invalid tables: <identity, identity> must be 1")
    if central_label in labels:
        raise ValueError(f"central label {central_label!r} collides with the basis")
    basis = [(lbl, EVEN, 2) for lbl in labels] + [(central_label, EVEN, 0)]
    constants: dict = {}
    for i, li in enumerate(labels):
        for j, lj in enumerate(labels):
            uv = algebra.product[i][j]
            terms = _vector_terms(labels, uv, k=1)
            if terms:
                constants[(li, 0, lj)] = terms
            terms = _vector_terms(labels, uv, scale=Fraction(2))
            if terms:
                constants[(li, 1, lj)] = terms
            if algebra.form[i][j]:
                constants[(li, 3, lj)] = {(0, central_label): Fraction(1, 2) * algebra.form[i][j]}
    return FormulaSpec(basis, constants, conformal=(identity, central_label),
                       name="comm-assoc")


# ---------------------------------------------------------------------------
# Novikov identity report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NovikovReport:
    """Identity check of a bilinear algebra, cross-validated defect-side."""

    identity_failures: Tuple[str, ...]
    defects_in_central_ideal: bool

    @property
    def ok(self) -> bool:
        return not self.identity_failures

    @property
    def consistent(self) -> bool:
        """The identity check and the defect location must agree."""
        return self.ok == self.defects_in_central_ideal


def novikov_check(algebra: BilinearAlgebra) -> NovikovReport:
    """Check the three identity families that make the weight-2 formula work.

    (1) u.(v.w) = v.(u.w)
    (2) (v.w).u + v.(u.w) = v.(w.u) + (v.u).w
    (3) <u.v, w> = <v.u, w> = <v, u.w> = <v, w.u>

    Independently builds the weight-2 formula and reports whether its
    defect sweep lands inside the positive D-span of the central vector;
    the two answers agree exactly (desk-scale cross-validation).
    """
    if not algebra.form_symmetric:
        raise ValueError("form is not symmetric")
    labels = algebra.labels
    failures = []
    d = algebra.dim
    units = [algebra.unit(i) for i in range(d)]
    mul, frm = algebra.mul_vec, algebra.form_vec
    for i in range(d):
        u = units[i]
        for j in range(d):
            v = units[j]
            for k in range(d):
                w = units[k]
                name = f"({labels[i]},{labels[j]},{labels[k]})"
                if mul(u, mul(v, w)) != mul(v, mul(u, w)):
                    failures.append(f"left-commutativity fails on {name}")
                lhs = tuple(a + b for a, b in zip(mul(mul(v, w), u), mul(v, mul(u, w))))
                rhs = tuple(a + b for a, b in zip(mul(v, mul(w, u)), mul(mul(v, u), w)))
                if lhs != rhs:
                    failures.append(f"right-symmetry fails on {name}")
                vals = {frm(mul(u, v), w), frm(mul(v, u), w), frm(v, mul(u, w)),
                        frm(v, mul(w, u))}
                if len(vals) > 1:
                    failures.append(f"form compatibility fails on {name}")

    spec = novikov(algebra)
    cid = spec.central
    in_ideal = all(defects.membership_central(spec, dft.value, cid)
                   for dft in defects.defect_sweep(spec))
    return NovikovReport(tuple(failures), in_ideal)


# ---------------------------------------------------------------------------
# Named instances
# ---------------------------------------------------------------------------

def sl2() -> LieData:
    """Standard e, h, f with the form normalized by <h,h> = 2."""
    e, h, f = range(3)
    bracket = [[[0, 0, 0] for _ in range(3)] for _ in range(3)]

    def put(i, j, vec):
        bracket[i][j] = list(vec)
        bracket[j][i] = [-x for x in vec]

    put(e, f, (0, 1, 0))      # [e,f] = h
    put(h, e, (2, 0, 0))      # [h,e] = 2e
    put(h, f, (0, 0, -2))     # [h,f] = -2f
    form = [[0, 0, 1], [0, 2, 0], [1, 0, 0]]
    return LieData(("e", "h", "f"), bracket, form)


def heisenberg() -> LieData:
    """One abelian generator with <x,x> = 1."""
    return LieData(("x",), [[[0]]], [[1]])


def abelian(dim: int = 1) -> LieData:
    """Abelian Lie algebra with zero form (loop-algebra input)."""
    labels = tuple(f"x{i}" for i in range(dim)) if dim > 1 else ("x",)
    zero_vec = [0] * dim
    bracket = [[list(zero_vec) for _ in range(dim)] for _ in range(dim)]
    form = [[0] * dim for _ in range(dim)]
    return LieData(labels, bracket, form)


def lambda_algebra(weights: Sequence = (1, 0), labels: Optional[Sequence[str]] = None,
                   flipped: bool = False) -> BilinearAlgebra:
    """u.v = lambda(u) v (or lambda(v) u when flipped), <u,v> = lambda(u)lambda(v)."""
    lam = [rat(x) for x in weights]
    d = len(lam)
    if labels is None:
        labels = ("omega",) + tuple(f"u{i}" for i in range(1, d))
    product = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            if flipped:
                product[i][j][i] = lam[j]
            else:
                product[i][j][j] = lam[i]
    form = [[lam[i] * lam[j] for j in range(d)] for i in range(d)]
    return BilinearAlgebra(tuple(labels), product, form)


def dual_numbers() -> BilinearAlgebra:
    """Q[x]/(x^2) with identity omega and the form dual to the socle."""
    # omega.omega = omega, omega.x = x, x.x = 0; <omega,omega> = 1,
    # <omega,x> = <x,x> = 0 (the only associative symmetric choice with
    # <x,x> = 0 forced by x.x = 0).
    product = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    form = [[1, 0], [0, 0]]
    return BilinearAlgebra(("omega", "x"), product, form)


PRESETS: Dict[str, Callable[[], FormulaSpec]] = {
    "virasoro": virasoro,
    "neveu-schwarz": neveu_schwarz,
    "affine-sl2": lambda: affine(sl2()),
    "heisenberg": lambda: affine(heisenberg()),
    "loop-abelian": lambda: affine(abelian()),
    "novikov-lambda": lambda: novikov(lambda_algebra()),
    "novikov-flipped": lambda: novikov(lambda_algebra(flipped=True)),
    "comm-assoc-dual": lambda: comm_assoc(dual_numbers(), identity="omega"),
}


def preset(name: str) -> FormulaSpec:
    try:
        builder = PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {name!r} (known: {known})") from None
    return builder()
