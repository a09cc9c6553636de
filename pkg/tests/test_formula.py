from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from vertexlie import (
    EVEN,
    Element,
    FormulaSpec,
    InhomogeneousError,
    UngradedError,
    apply_D,
    basis_element,
    extend_product,
    format_element,
    gen_binomial,
    parity_of,
    rat,
    support_bound,
    validate_spec,
    virasoro,
    weight_of,
    y_principal,
)
from vertexlie.formula import falling

VIR = virasoro()
OM = basis_element(VIR.bid("omega"))
C = basis_element(VIR.bid("c"))


def brute_binomial(n: int, i: int) -> F:
    out = F(1)
    for j in range(i):
        out *= F(n - j, j + 1)
    return out


def test_gen_binomial_values() -> None:
    assert gen_binomial(3, 3) == 1
    assert gen_binomial(-1, 2) == 1  # (-1)(-2)/2
    assert gen_binomial(2, 5) == 0  # falling factorial hits zero
    assert gen_binomial(-2, 3) == -4
    assert gen_binomial(7, 0) == 1


def test_gen_binomial_against_product_oracle() -> None:
    for n in range(-8, 9):
        for i in range(0, 8):
            assert gen_binomial(n, i) == brute_binomial(n, i)


def test_gen_binomial_rejects_negative_lower_index() -> None:
    with pytest.raises(ValueError):
        gen_binomial(3, -1)


def test_falling_zeroes_out_in_range() -> None:
    assert falling(3, 5) == 0
    assert falling(-1, 3) == -6
    assert falling(4, 2) == 12


def test_rat_coercions() -> None:
    assert rat("3/4") == F(3, 4)
    assert rat(5) == F(5)
    assert rat(F(1, 2)) == F(1, 2)
    with pytest.raises(TypeError):
        rat(0.5)


def test_element_arithmetic_and_canonical_form() -> None:
    a = Element({(0, 0): 1, (2, 1): F(1, 2)})
    b = Element({(0, 0): -1, (1, 0): 3})
    s = a + b
    assert s.coeff((0, 0)) == 0
    assert s.coeff((1, 0)) == 3
    assert (a - a).is_zero
    assert not Element()
    assert a.scale(0).is_zero
    assert (2 * a).coeff((2, 1)) == 1
    assert a == Element([((2, 1), F(1, 2)), ((0, 0), F(1, 2)), ((0, 0), F(1, 2))])
    assert hash(a) == hash(Element({(2, 1): F(1, 2), (0, 0): 1}))


def test_element_rejects_negative_d_power() -> None:
    with pytest.raises(ValueError):
        Element({(-1, 0): 1})


def test_apply_D_shifts() -> None:
    assert apply_D(OM) == Element({(1, 0): 1})
    assert apply_D(OM, 3).d_degree == 3
    assert apply_D(Element()).is_zero


def test_spec_lookup_and_errors() -> None:
    assert VIR.bid("omega") == 0
    assert VIR.bid(1) == 1
    with pytest.raises(KeyError):
        VIR.bid("nope")
    assert VIR.n_max == 4 and VIR.k_max == 1
    assert VIR.graded


def test_spec_rejects_bad_data() -> None:
    with pytest.raises(ValueError):
        FormulaSpec([("a", EVEN), ("a", EVEN)], {})
    with pytest.raises(ValueError):
        FormulaSpec([("a", 2)], {})
    with pytest.raises(ValueError):
        FormulaSpec([("a", EVEN, -1)], {})
    with pytest.raises(ValueError):
        FormulaSpec([("a", EVEN, 1), ("b", EVEN)], {})
    with pytest.raises(ValueError):
        FormulaSpec([("a", EVEN)], {("a", -1, "a"): {(0, "a"): 1}})


def test_validate_spec_clean_presets() -> None:
    assert validate_spec(VIR) == []
    assert validate_spec(FormulaSpec([], {})) == []


def test_validate_spec_weight_violation() -> None:
    # same constants as the conformal preset but the generator claimed at weight 3
    broken = FormulaSpec(
        [("omega", EVEN, 3), ("c", EVEN, 0)],
        {
            ("omega", 0, "omega"): {(1, "omega"): 1},
            ("omega", 1, "omega"): {(0, "omega"): 2},
            ("omega", 3, "omega"): {(0, "c"): F(1, 2)},
        },
    )
    violations = validate_spec(broken)
    assert violations
    assert any(v.kind == "weight" and v.entry[:3] == ("omega", 1, "omega")
               for v in violations)


def test_validate_spec_parity_violation() -> None:
    from vertexlie import ODD

    broken = FormulaSpec([("a", EVEN), ("t", ODD)],
                         {("a", 0, "a"): {(0, "t"): 1}})
    violations = validate_spec(broken)
    assert [v.kind for v in violations] == ["parity"]


def test_product_on_basis_matches_table() -> None:
    assert extend_product(VIR, OM, 0, OM) == Element({(1, 0): 1})
    assert extend_product(VIR, OM, 1, OM) == Element({(0, 0): 2})
    assert extend_product(VIR, OM, 2, OM).is_zero
    assert extend_product(VIR, OM, 3, OM) == Element({(0, 1): F(1, 2)})
    for n in range(7):
        assert extend_product(VIR, C, n, OM).is_zero
        assert extend_product(VIR, OM, n, C).is_zero


def test_product_examples_with_derivatives() -> None:
    dom = apply_D(OM)
    assert extend_product(VIR, dom, 1, OM) == -Element({(1, 0): 1})
    assert extend_product(VIR, OM, 1, dom) == Element({(1, 0): 3})


def test_y_principal_virasoro() -> None:
    ser = y_principal(VIR, OM, OM)
    assert ser.support() == (0, 1, 3)
    assert ser[0] == apply_D(OM)
    assert ser[1] == 2 * OM
    assert ser[3] == F(1, 2) * C
    assert not y_principal(VIR, C, OM)


def test_y_principal_derivative_series() -> None:
    ser = y_principal(VIR, apply_D(OM), OM)
    assert dict(ser.items()) == {
        1: -apply_D(OM),
        2: -4 * OM,
        4: -2 * C,
    }


def _random_element(rng: random.Random, spec: FormulaSpec, parity: int,
                    max_k: int = 2) -> Element:
    terms = {}
    for vec in spec.vectors:
        if vec.parity != parity:
            continue
        for _ in range(rng.randint(0, 2)):
            k = rng.randint(0, max_k)
            coeff = F(rng.randint(-4, 4), rng.randint(1, 3))
            if coeff:
                terms[(k, vec.index)] = terms.get((k, vec.index), 0) + coeff
    return Element(terms)


def test_derivation_laws_on_random_elements() -> None:
    rng = random.Random(20240811)
    for _ in range(40):
        a = _random_element(rng, VIR, EVEN)
        b = _random_element(rng, VIR, EVEN)
        for n in range(VIR.n_max + VIR.k_max + 1):
            lhs = extend_product(VIR, apply_D(a), n, b)
            rhs = -n * extend_product(VIR, a, n - 1, b) if n else Element()
            assert lhs == rhs
            left = apply_D(extend_product(VIR, a, n, b))
            right = extend_product(VIR, apply_D(a), n, b) \
                + extend_product(VIR, a, n, apply_D(b))
            assert left == right


def test_truncation_boundary_sweep() -> None:
    rng = random.Random(7)
    for _ in range(20):
        a = _random_element(rng, VIR, EVEN)
        b = _random_element(rng, VIR, EVEN)
        bound = support_bound(VIR, a, b)
        assert extend_product(VIR, a, bound, b).is_zero
        assert extend_product(VIR, a, bound + 1, b).is_zero


def test_parity_bookkeeping() -> None:
    from vertexlie import neveu_schwarz

    ns = neveu_schwarz()
    tau = basis_element(ns.bid("tau"))
    om = basis_element(ns.bid("omega"))
    assert parity_of(ns, extend_product(ns, tau, 0, tau)) == EVEN
    assert parity_of(ns, extend_product(ns, om, 0, tau)) == 1
    with pytest.raises(InhomogeneousError):
        parity_of(ns, om + tau)


def test_weight_bookkeeping() -> None:
    assert weight_of(VIR, apply_D(OM, 2)) == 4
    assert weight_of(VIR, Element()) is None
    with pytest.raises(InhomogeneousError):
        weight_of(VIR, OM + C)
    for n in range(5):
        prod = extend_product(VIR, OM, n, OM)
        if prod:
            assert weight_of(VIR, prod) == 4 - n - 1
    ungraded = FormulaSpec([("a", EVEN)], {})
    with pytest.raises(UngradedError):
        weight_of(ungraded, basis_element(0))


def test_format_element() -> None:
    assert format_element(VIR, Element()) == "0"
    # equal weights sort by D-power, so D.omega precedes D^3.c
    assert format_element(VIR, apply_D(OM) - F(1, 2) * apply_D(C, 3)) \
        == "D.omega - 1/2*D^3.c"
