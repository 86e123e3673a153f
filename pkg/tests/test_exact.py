import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from patchspec.exact import (
    INF,
    ExactArithError,
    MultiPoly,
    PAdicApprox,
    UniPoly,
    WeightVector,
    content_primitive,
    eval_mod_pk,
    format_poly,
    gcd_uni,
    monomial_valuation,
    parse_poly,
    parse_uni,
    poly_arith,
    rational_valuation,
)

ALPHA = ("X0", "X1", "T", "U")


def P(text):
    return parse_poly(text, ALPHA)


def random_poly(rng, alphabet=ALPHA, max_terms=4, max_exp=3, zero_ok=True):
    terms = {}
    for _ in range(rng.randrange(0 if zero_ok else 1, max_terms + 1)):
        e = tuple(rng.randrange(0, max_exp + 1) for _ in alphabet)
        terms[e] = Fraction(rng.randrange(-9, 10), rng.randrange(1, 7))
    return MultiPoly(alphabet, terms)


# -- poly_arith examples ----------------------------------------------------

def test_add_cancellation():
    assert poly_arith(P("X0 + T"), P("-X0"), "add") == P("T")


def test_mul_monomials():
    assert poly_arith(P("T"), P("U"), "mul") == P("T*U")


def test_mul_by_zero():
    f = P("3/2*X0^2*T - U")
    assert poly_arith(f, MultiPoly.zero(ALPHA), "mul").is_zero


def test_alphabet_mismatch():
    with pytest.raises(ExactArithError):
        P("T") + parse_poly("X", ("X",))


def test_ring_laws_random():
    rng = random.Random(7)
    for _ in range(1000):
        f, g, h = (random_poly(rng) for _ in range(3))
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f + g == g + f
        assert f * g == g * f


# -- gcd / content ----------------------------------------------------------

def U_(text):
    return parse_uni(text)


def test_gcd_trivial():
    assert gcd_uni(U_("X^2 - 1"), U_("X - 1")) == U_("X - 1")


def test_gcd_coprime():
    for p in (2, 3, 5, 7):
        assert gcd_uni(UniPoly([p]), U_("X")) == UniPoly([1])


def test_gcd_content_and_primitive():
    # content gcd(4,6) = 2 times primitive gcd X+1 (Gauss-lemma oracle)
    assert gcd_uni(U_("4*X + 4"), U_("6*X + 6")) == U_("2*X + 2")


def test_gcd_monic_over_q():
    f = U_("1/2*X^2 - 1/2")
    g = U_("X - 1")
    assert gcd_uni(f, g) == U_("X - 1")


def test_gcd_both_zero():
    with pytest.raises(ExactArithError):
        gcd_uni(UniPoly([]), UniPoly([]))


def test_content_primitive_examples():
    assert content_primitive(U_("2*X + 4")) == (2, U_("X + 2"))
    assert content_primitive(U_("X")) == (1, U_("X"))
    assert content_primitive(U_("-6*X^2 + 9")) == (3, U_("-2*X^2 + 3"))


def test_content_primitive_zero():
    with pytest.raises(ExactArithError):
        content_primitive(UniPoly([]))


def random_uni(rng, max_deg=4, zero_ok=True):
    if zero_ok and rng.random() < 0.05:
        return UniPoly([])
    deg = rng.randrange(0, max_deg + 1)
    cs = [rng.randrange(-9, 10) for _ in range(deg)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    return UniPoly(cs)


def test_gcd_divides_inputs_and_common_divisors_divide_gcd():
    rng = random.Random(13)
    for _ in range(300):
        d = random_uni(rng, max_deg=2, zero_ok=False)
        f = d * random_uni(rng, max_deg=2, zero_ok=False)
        g = d * random_uni(rng, max_deg=2, zero_ok=False)
        h = gcd_uni(f, g)
        assert h.divides(f) and h.divides(g)
        assert d.monic().divides(h)


# -- valuations -------------------------------------------------------------

def w_i(i):
    return WeightVector.on_variables(ALPHA, {f"X{i}", "T", "U"})


def test_valuation_paper_values():
    assert monomial_valuation(P("T"), w_i(0)) == 1
    assert monomial_valuation(P("X1"), w_i(0)) == 0
    assert monomial_valuation(P("X0*T + U^2"), w_i(0)) == 2


def test_valuation_zero_poly_is_inf():
    assert monomial_valuation(MultiPoly.zero(ALPHA), w_i(0)) == INF


def test_rational_valuation_examples():
    assert rational_valuation(P("T"), P("X0"), w_i(0)) == 0
    assert rational_valuation(P("T"), P("X0"), w_i(1)) == 1
    f = P("3*X0*T - U")
    assert rational_valuation(f, f, w_i(0)) == 0


def test_rational_valuation_zero_den():
    with pytest.raises(ExactArithError):
        rational_valuation(P("T"), MultiPoly.zero(ALPHA), w_i(0))


def test_valuation_multiplicative():
    rng = random.Random(99)
    w = w_i(0)
    for _ in range(1000):
        f = random_poly(rng, zero_ok=False)
        g = random_poly(rng, zero_ok=False)
        assert monomial_valuation(f * g, w) == monomial_valuation(f, w) + monomial_valuation(g, w)


def test_valuation_ultrametric():
    rng = random.Random(23)
    w = w_i(1)
    for _ in range(500):
        f = random_poly(rng)
        g = random_poly(rng)
        assert monomial_valuation(f + g, w) >= min(monomial_valuation(f, w),
                                                   monomial_valuation(g, w))


# -- p-adic evaluation ------------------------------------------------------

def test_eval_mod_pk_identity():
    assert eval_mod_pk(U_("X"), PAdicApprox(2, 3, 3)) == 3


def test_eval_mod_pk_binomial():
    f = U_("1/2*X^2 - 1/2*X")  # X(X-1)/2
    assert eval_mod_pk(f, PAdicApprox(2, 3, 4)) == 6


def test_eval_mod_pk_bad_denominator():
    with pytest.raises(ExactArithError):
        eval_mod_pk(U_("1/3*X"), PAdicApprox(3, 2, 1))


def test_eval_mod_pk_cancelling_denominator():
    # binomial-type denominators cancel at every integer residue
    f = U_("1/2*X^2 - 1/2*X")
    assert eval_mod_pk(f, PAdicApprox(2, 2, 3)) == (3 * 2 // 2) % 4


def test_padic_validation():
    with pytest.raises(ExactArithError):
        PAdicApprox(4, 1, 0)
    with pytest.raises(ExactArithError):
        PAdicApprox(5, 0, 0)
    assert PAdicApprox(5, 2, 27).residue == 2


# -- parsing / formatting ---------------------------------------------------

def test_parse_rational_coefficients():
    f = P("3/2*X0^2*T - U")
    assert f.terms == {(2, 0, 1, 0): Fraction(3, 2), (0, 0, 0, 1): Fraction(-1)}


def test_parse_implicit_multiplication():
    assert P("2 X0 T") == P("2*X0*T")


def test_format_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        f = random_poly(rng)
        assert parse_poly(format_poly(f), ALPHA) == f


def test_parse_rejects_unknown_symbol():
    with pytest.raises(ExactArithError):
        P("Y + 1")


# -- property-based checks --------------------------------------------------

@st.composite
def unipolys(draw, max_deg=4):
    coeffs = draw(st.lists(
        st.fractions(min_value=-9, max_value=9, max_denominator=6),
        min_size=1, max_size=max_deg + 1))
    return UniPoly(coeffs)


@given(unipolys(), unipolys())
def test_divmod_reconstructs(f, g):
    if g.is_zero:
        return
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.is_zero or r.degree < g.degree


@given(unipolys(), unipolys())
def test_gcd_divides_both(f, g):
    if f.is_zero and g.is_zero:
        return
    d = gcd_uni(f, g)
    assert f.is_zero or d.divides(f)
    assert g.is_zero or d.divides(g)
