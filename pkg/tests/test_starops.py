import random
from fractions import Fraction

import pytest
import sympy

from patchspec.exact import UniPoly, parse_uni
from patchspec.spectra import FamGeneric, FamPt, PosetPt
from patchspec.starops import (
    FracIdealFG,
    FracPoly,
    GaussianZi,
    IntegersZ,
    LocalizedZ,
    PolyQ,
    PolyZX,
    PrimeDesc,
    PullbackVD,
    StarOpsError,
    ZPlusXQX,
    colon_to_domain,
    domain_by_id,
    essential_at,
    is_t_ideal,
    is_t_prime,
    parse_ideal,
    parse_prime,
    t_closure,
    t_representation_check,
    v_closure,
)

Z = IntegersZ()
ZX = PolyZX()
QX = PolyQ()


def U_(text):
    return parse_uni(text)


def to_sympy(f: UniPoly):
    x = sympy.Symbol("X")
    return sum(sympy.Rational(c.numerator, c.denominator) * x ** i
               for i, c in enumerate(f.coeffs))


# -- colon / v / t examples -------------------------------------------------

def test_colon_z_example():
    J = colon_to_domain(FracIdealFG(Z, [4, 6]))
    assert J.generators == (Fraction(1, 2),)
    # brute-force oracle: x*I subset of Z iff x lies in (1/2)Z, |x| bounded
    for n in range(-20, 21):
        for m in range(1, 21):
            x = Fraction(n, m)
            in_colon = (4 * x).denominator == 1 and (6 * x).denominator == 1
            assert in_colon == ((x / Fraction(1, 2)).denominator == 1)


def test_colon_zx_unit_ideal():
    J = colon_to_domain(FracIdealFG(ZX, ["5", "X"]))
    assert J.generators == (FracPoly(UniPoly([1])),)
    # candidate sweep: x = f/d with small degree and denominator, x*5 and x*X
    # both polynomial forces x polynomial
    rng = random.Random(3)
    for _ in range(200):
        deg = rng.randrange(0, 4)
        f = UniPoly([rng.randrange(-6, 7) for _ in range(deg + 1)])
        d = rng.randrange(2, 5)
        x = FracPoly(f, UniPoly([d]))
        if x.is_zero or x.is_polynomial:
            continue
        five_ok = FracPoly(x.num.scale(5), x.den).is_polynomial
        x_ok = FracPoly(x.num * U_("X"), x.den).is_polynomial
        assert not (five_ok and x_ok)


def test_colon_principal():
    f = FracPoly(U_("X^2+1"))
    J = colon_to_domain(FracIdealFG(ZX, [f]))
    assert J.generators == (FracPoly(UniPoly([1]), U_("X^2+1")),)


def test_v_closure_z_example():
    I = FracIdealFG(Z, [4, 6])
    assert v_closure(I).generators == (Fraction(2),)
    # oracle: largest d dividing every generator
    best = max(d for d in range(1, 101) if 4 % d == 0 and 6 % d == 0)
    assert best == 2


def test_v_closure_zx_examples():
    assert v_closure(FracIdealFG(ZX, ["5", "X"])).generators == (FracPoly(UniPoly([1])),)
    f = FracPoly(U_("2*X+4"))
    assert v_closure(FracIdealFG(ZX, [f])).generators == (f,)


def test_v_closure_matches_sympy_gcd():
    rng = random.Random(17)
    x = sympy.Symbol("X")
    for _ in range(150):
        gens = []
        for _ in range(rng.randrange(2, 4)):
            deg = rng.randrange(0, 3)
            cs = [rng.randrange(-8, 9) for _ in range(deg + 1)]
            if any(cs):
                gens.append(UniPoly(cs))
        if not gens:
            continue
        g = v_closure(FracIdealFG(ZX, gens)).generators[0]
        assert g.is_polynomial
        want = sympy.gcd([to_sympy(f) for f in gens])
        got = to_sympy(g.num)
        assert sympy.simplify(got - want) == 0 or sympy.simplify(got + want) == 0


def test_t_closure_zero_ideal():
    I = FracIdealFG.zero(Z)
    assert t_closure(I) is I
    assert is_t_ideal(I)


def test_t_closure_equals_v_closure():
    I = FracIdealFG(Z, [4, 6])
    assert t_closure(I).same_ideal(v_closure(I))


def test_is_t_ideal_examples():
    assert not is_t_ideal(FracIdealFG(ZX, ["5", "X"]))
    assert is_t_ideal(FracIdealFG(ZX, ["2*X+4"]))
    assert is_t_ideal(FracIdealFG(Z, [4, 6]))  # (4,6) = (2) in a PID


def test_oracle_domains_reject_arithmetic():
    with pytest.raises(StarOpsError):
        GaussianZi().gcd_of([1])
    with pytest.raises(StarOpsError):
        ZPlusXQX().coerce(1)


def test_colon_zero_ideal_rejected():
    with pytest.raises(StarOpsError):
        colon_to_domain(FracIdealFG.zero(Z))


# -- invariants -------------------------------------------------------------

def random_z_ideal(rng):
    gens = [Fraction(rng.randrange(-30, 31), rng.randrange(1, 7))
            for _ in range(rng.randrange(1, 4))]
    if not any(gens):
        gens.append(Fraction(rng.randrange(1, 30)))
    return FracIdealFG(Z, gens)


def random_zx_ideal(rng, integral=False):
    gens = []
    for _ in range(rng.randrange(1, 4)):
        deg = rng.randrange(0, 3)
        cs = [rng.randrange(-6, 7) for _ in range(deg + 1)]
        if any(cs):
            f = UniPoly(cs)
            gens.append(FracPoly(f) if integral
                        else FracPoly(f, UniPoly([rng.randrange(1, 5)])))
    if not gens:
        gens.append(FracPoly(U_("X")))
    return FracIdealFG(ZX, gens)


def test_generators_lie_in_v_closure():
    rng = random.Random(41)
    for _ in range(200):
        I = random_z_ideal(rng)
        J = v_closure(I)
        assert all(J.contains(g) for g in I.generators)
        I2 = random_zx_ideal(rng)
        J2 = v_closure(I2)
        assert all(J2.contains(g) for g in I2.generators)


def test_v_closure_idempotent():
    rng = random.Random(43)
    for _ in range(200):
        for I in (random_z_ideal(rng), random_zx_ideal(rng)):
            J = v_closure(I)
            assert v_closure(J).same_ideal(J)


def test_v_closure_principal_scaling():
    rng = random.Random(47)
    for _ in range(200):
        I = random_z_ideal(rng)
        f = Fraction(rng.randrange(1, 20), rng.randrange(1, 7))
        assert v_closure(I.scale(f)).same_ideal(v_closure(I).scale(f))
    for _ in range(200):
        I = random_zx_ideal(rng)
        deg = rng.randrange(0, 2)
        f = FracPoly(UniPoly([rng.randrange(-5, 6) for _ in range(deg)] + [rng.randrange(1, 6)]))
        assert v_closure(I.scale(f)).same_ideal(v_closure(I).scale(f))
    for _ in range(100):
        gens = [U_("X").scale(rng.randrange(1, 9)), UniPoly([rng.randrange(1, 9)])]
        I = FracIdealFG(QX, gens)
        f = FracPoly(U_("X+1"))
        assert v_closure(I.scale(f)).same_ideal(v_closure(I).scale(f))


def test_t_ideal_iff_principal_in_ufd():
    rng = random.Random(53)
    primes = [2, 3, 5, 7, 11, 13]
    for _ in range(500):
        if rng.random() < 0.5:
            # coprime, non-associate pair (p, X - a): proper and not principal
            p = rng.choice(primes)
            a = rng.randrange(-9, 10)
            I = FracIdealFG(ZX, [FracPoly(UniPoly([p])), FracPoly(U_(f"X - {a}" if a >= 0 else f"X + {-a}"))])
            assert not is_t_ideal(I)
        else:
            I = FracIdealFG(ZX, [random_zx_ideal(rng, integral=True).generators[0]])
            assert is_t_ideal(I)


# -- prime classification ---------------------------------------------------

def catalog_primes():
    out = []
    for p in (2, 5, 11):
        out.append(PrimeDesc(Z, FamPt("z", p), "height1", (p,)))
    out.append(PrimeDesc(Z, FamGeneric("z"), "zero"))
    semi = LocalizedZ(keep=[2, 3])
    out.append(PrimeDesc(semi, PosetPt("(0)"), "zero"))
    out.append(PrimeDesc(semi, PosetPt("(2)"), "height1", (2,)))
    inv = LocalizedZ(invert=[5])
    out.append(PrimeDesc(inv, FamGeneric(inv.name), "zero"))
    out.append(PrimeDesc(inv, FamPt(inv.name, 7), "height1", (7,)))
    out.append(PrimeDesc(QX, FamGeneric("qx"), "zero"))
    out.append(PrimeDesc(QX, FamPt("qx", "X^2+1"), "height1", ("X^2+1",)))
    out.append(PrimeDesc(ZX, FamGeneric("zx_h1"), "zero"))
    out.append(PrimeDesc(ZX, FamPt("zx_h1", 2), "height1", (2,)))
    out.append(PrimeDesc(ZX, FamPt("zx_h1", "X"), "height1", ("X",)))
    out.append(PrimeDesc(ZX, FamPt("zx_h1", "X^2+1"), "upper", ("X^2+1",)))
    out.append(PrimeDesc(ZX, PosetPt("(2,X)"), "maximal2", (2, "X")))
    out.append(PrimeDesc(ZX, PosetPt("(5,X-2)"), "maximal2", (5, "X-2")))
    zi = GaussianZi()
    out.append(PrimeDesc(zi, FamGeneric("zi"), "zero"))
    out.append(PrimeDesc(zi, FamPt("zi", "5.0"), "indexed"))
    zq = ZPlusXQX()
    out.append(PrimeDesc(zq, FamGeneric("zxq"), "zero"))
    out.append(PrimeDesc(zq, FamPt("zxq", "m2"), "indexed"))
    pb = PullbackVD(Z)
    out.append(PrimeDesc(pb, PosetPt("q0"), "indexed"))
    out.append(PrimeDesc(pb, FamGeneric("z"), "zero"))
    out.append(PrimeDesc(pb, FamPt("z", 3), "height1", (3,)))
    pbx = PullbackVD(ZX, chain_len=2)
    out.append(PrimeDesc(pbx, PosetPt("q1"), "indexed"))
    out.append(PrimeDesc(pbx, PosetPt("(2,X)"), "maximal2", (2, "X")))
    return out


def test_is_t_prime_examples():
    assert not is_t_prime(PrimeDesc(ZX, PosetPt("(5,X-2)"), "maximal2", (5, "X-2")))
    assert is_t_prime(PrimeDesc(ZX, FamPt("zx_h1", "X^2+1"), "upper", ("X^2+1",)))
    assert is_t_prime(PrimeDesc(Z, FamPt("z", 5), "height1", (5,)))


def test_essential_examples():
    assert not essential_at(PrimeDesc(ZX, PosetPt("(2,X)"), "maximal2", (2, "X")))
    assert essential_at(PrimeDesc(Z, FamPt("z", 5), "height1", (5,)))
    assert essential_at(PrimeDesc(ZX, FamPt("zx_h1", "X^2+1"), "upper", ("X^2+1",)))


def test_essential_implies_t_prime():
    for P in catalog_primes():
        if essential_at(P):
            assert is_t_prime(P), f"essential but not t-prime: {P}"
    rng = random.Random(61)
    primes = [p for p in range(2, 200) if all(p % d for d in range(2, p))]
    for _ in range(200):
        p = rng.choice(primes)
        P = PrimeDesc(Z, FamPt("z", p), "height1", (p,))
        assert essential_at(P) and is_t_prime(P)


def test_pullback_classification_delegates():
    pb = PullbackVD(ZX)
    assert is_t_prime(PrimeDesc(pb, PosetPt("q0"), "indexed"))
    assert essential_at(PrimeDesc(pb, PosetPt("q0"), "indexed"))
    bad = PrimeDesc(pb, PosetPt("(2,X)"), "maximal2", (2, "X"))
    assert not is_t_prime(bad) and not essential_at(bad)
    # the glue point (maximal ideal of the valuation domain) localizes to V
    glue = PrimeDesc(pb, FamGeneric("zx_h1"), "zero")
    assert essential_at(glue) and is_t_prime(glue)


def test_prime_desc_validation():
    with pytest.raises(StarOpsError):
        PrimeDesc(Z, PosetPt("nope"), "zero")
    with pytest.raises(StarOpsError):
        PrimeDesc(Z, FamGeneric("z"), "weird-kind")


# -- representation check ---------------------------------------------------

def test_representation_z():
    rep = t_representation_check(Z, [Fraction(1, 2), Fraction(3), Fraction(9, 4)])
    assert rep["rows"][0]["excluded_by"] == ["(2)"]
    assert rep["rows"][1]["in_domain"] and not rep["rows"][1]["excluded_by"]
    assert rep["rows"][2]["excluded_by"] == ["(2)"]
    assert rep["violations"] == []


def test_representation_localized():
    dom = LocalizedZ(keep=[2, 3])
    rep = t_representation_check(dom, [Fraction(1, 5), Fraction(1, 6)])
    assert rep["rows"][0]["in_domain"] and not rep["rows"][0]["excluded_by"]
    assert sorted(rep["rows"][1]["excluded_by"]) == ["(2)", "(3)"]
    assert rep["violations"] == []


def test_representation_zx():
    t_max = [parse_prime(ZX, "(5)"), parse_prime(ZX, "(2)"), parse_prime(ZX, "(X)")]
    rep = t_representation_check(ZX, ["X", "(X^2+1)/(5)", "(X+1)/(X)"], t_max)
    assert rep["rows"][0]["in_domain"]
    assert rep["rows"][1]["excluded_by"] == ["zx_h1:5"]
    assert rep["rows"][2]["excluded_by"] == ["zx_h1:X"]
    assert rep["violations"] == []


def test_localized_contraction_of_t_ideal():
    # contraction of a (principal, hence t-) ideal of the localization is
    # again a t-ideal: its generator keeps only the active prime powers
    dom = LocalizedZ(keep=[2, 3])
    rng = random.Random(71)
    for _ in range(100):
        g = rng.randrange(1, 500)
        c = dom.canonical(Fraction(g))
        assert c.denominator == 1
        for x in range(1, 60):
            in_localized = dom.divides(Fraction(g), Fraction(x))
            assert in_localized == (x % c == 0)
        assert is_t_ideal(FracIdealFG(Z, [c]))


# -- literals and canonical forms -------------------------------------------

def test_parse_ideal_literals():
    I = parse_ideal("ideal over Z: 4, 6")
    assert isinstance(I.domain, IntegersZ) and I.generators == (Fraction(4), Fraction(6))
    J = parse_ideal("ideal over Z[X]: p=5, X")
    assert isinstance(J.domain, PolyZX)
    assert J.generators == (FracPoly(UniPoly([5])), FracPoly(U_("X")))
    assert parse_ideal("over Z: 0").is_zero_ideal
    with pytest.raises(StarOpsError):
        parse_ideal("4, 6")


def test_parse_prime_literals():
    P = parse_prime(ZX, "(5, X-2)")
    assert P.kind == "maximal2" and P.point == PosetPt("(5,X-2)")
    up = parse_prime(ZX, "upper (X^2+1)")
    assert up.kind == "upper" and up.point == FamPt("zx_h1", "X^2+1")
    assert parse_prime(Z, "(0)").kind == "zero"
    assert parse_prime(Z, "(7)").point == FamPt("z", 7)
    with pytest.raises(StarOpsError):
        parse_prime(ZX, "(7, X)")  # not a tabulated maximal


def test_domain_by_id():
    assert isinstance(domain_by_id("Z[X]"), PolyZX)
    assert domain_by_id("Zloc:2,3").keep == frozenset({2, 3})
    assert domain_by_id("Zinv:5").invert == frozenset({5})
    with pytest.raises(StarOpsError):
        domain_by_id("R[[T]]")


def test_fracpoly_canonical_form():
    x = FracPoly(U_("X^2-1"), U_("2*X+2"))
    assert x.num == U_("X-1") and x.den == UniPoly([2])
    y = FracPoly(U_("-3*X"), U_("-6"))
    assert y.num == U_("X") and y.den == UniPoly([2])
    assert FracPoly(UniPoly([]), U_("7")).is_zero


def test_ideal_needs_nonzero_generator():
    with pytest.raises(StarOpsError):
        FracIdealFG(Z, [0, Fraction(0)])
