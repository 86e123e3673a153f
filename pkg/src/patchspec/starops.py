"""Catalog domains, finitely generated fractional ideals, and the v/t star
operations in the computable (UFD/PID) settings.

Ideal arithmetic is implemented only where a gcd theory makes it exact:
Z, localizations of Z, Q[X] and Z[X].  The colon ideal of a finitely
generated ideal is the principal fractional ideal generated by the inverse
of the gcd of its generators (valuation-wise: x lies in (D : I) exactly when
v_p(x) >= -min v_p(generators) at every height-one prime p).  The
oracle-backed domains (Z + XQ[X], Z[i]) expose only classification
predicates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact import (
    ExactArithError,
    UniPoly,
    content_primitive,
    gcd_uni,
    is_prime,
    parse_uni,
    format_uni,
)
from .spectra import (
    DisjointUnion,
    ElementRule,
    FamGeneric,
    FamPt,
    FinitePoset,
    FiniteCharacterFamily,
    OrdinalSum,
    PointRef,
    PosetPt,
    SpectrumModel,
)


class StarOpsError(ValueError):
    pass


def prime_factors(n: int) -> dict:
    n = abs(n)
    out: dict = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# fractional polynomial elements
# ---------------------------------------------------------------------------

class FracPoly:
    """num/den with integral UniPoly parts, reduced: the primitive parts are
    coprime, the integer contents are coprime, and den has positive leading
    coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly = UniPoly([1])):
        if den.is_zero:
            raise StarOpsError("zero denominator")
        # clear rational coefficients
        scale = 1
        for c in list(num.coeffs) + list(den.coeffs):
            scale = scale * c.denominator // math.gcd(scale, c.denominator)
        num, den = num.scale(scale), den.scale(scale)
        if not num.is_zero:
            h = gcd_uni(num, den)
            num = num.divmod(h)[0]
            den = den.divmod(h)[0]
            cn, _ = content_primitive(num)
            cd, _ = content_primitive(den)
            c = math.gcd(cn, cd)
            num, den = num.scale(Fraction(1, c)), den.scale(Fraction(1, c))
        else:
            den = UniPoly([1])
        if den.leading < 0:
            num, den = num.scale(-1), den.scale(-1)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("FracPoly is immutable")

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_polynomial(self):
        return self.den == UniPoly([1])

    def __eq__(self, other):
        return (isinstance(other, FracPoly)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __mul__(self, other: "FracPoly") -> "FracPoly":
        return FracPoly(self.num * other.num, self.den * other.den)

    def __str__(self):
        if self.is_polynomial:
            return format_uni(self.num)
        return f"({format_uni(self.num)})/({format_uni(self.den)})"

    __repr__ = __str__


Element = Union[Fraction, FracPoly]


def lcm_uni(a: UniPoly, b: UniPoly) -> UniPoly:
    g = gcd_uni(a, b)
    return a * b.divmod(g)[0]


# ---------------------------------------------------------------------------
# catalog domains
# ---------------------------------------------------------------------------

class CatalogDomain:
    """Base class; concrete variants declare their classification rules and,
    in the UFD cases, gcd-based ideal arithmetic."""

    name: str
    is_ufd = False
    supports_ideal_arithmetic = False
    is_pruefer = False

    def spectrum(self) -> SpectrumModel:
        raise NotImplementedError

    # element handling -----------------------------------------------------

    def coerce(self, x) -> Element:
        raise NotImplementedError

    def is_unit_element(self, x: Element) -> bool:
        raise NotImplementedError

    def contains_element(self, x: Element) -> bool:
        raise NotImplementedError

    # ideal arithmetic -----------------------------------------------------

    def gcd_of(self, gens: Sequence[Element]) -> Element:
        raise StarOpsError(f"ideal arithmetic unsupported over {self.name}")

    def divides(self, a: Element, b: Element) -> bool:
        """a | b within the domain (b/a in D)."""
        raise StarOpsError(f"ideal arithmetic unsupported over {self.name}")

    def invert(self, x: Element) -> Element:
        raise NotImplementedError

    # classifications ------------------------------------------------------

    def is_t_prime(self, p: "PrimeDesc") -> bool:
        raise NotImplementedError

    def essential_at(self, p: "PrimeDesc") -> bool:
        raise NotImplementedError


class _ZLike(CatalogDomain):
    """Z or a localization of Z: elements are Fractions; the active primes
    (those not inverted) carry the whole ideal theory."""

    is_ufd = True
    supports_ideal_arithmetic = True
    is_pruefer = True  # PIDs and their localizations

    def active(self, p: int) -> bool:
        raise NotImplementedError

    def active_primes_of(self, n: int) -> dict:
        return {p: e for p, e in prime_factors(n).items() if self.active(p)}

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def contains_element(self, x: Fraction) -> bool:
        return all(not self.active(p) for p in prime_factors(x.denominator))

    def is_unit_element(self, x: Fraction) -> bool:
        return x != 0 and self.contains_element(x) and self.contains_element(1 / x)

    def canonical(self, x: Fraction) -> Fraction:
        """Associate of x supported on the active primes only, positive."""
        if x == 0:
            return Fraction(0)
        g = Fraction(1)
        for p, e in self.active_primes_of(x.numerator).items():
            g *= Fraction(p) ** e
        for p, e in self.active_primes_of(x.denominator).items():
            g /= Fraction(p) ** e
        return g

    def gcd_of(self, gens: Sequence[Fraction]) -> Fraction:
        gens = [Fraction(g) for g in gens if g != 0]
        if not gens:
            raise StarOpsError("gcd of zero ideal")
        L = 1
        for g in gens:
            L = L * g.denominator // math.gcd(L, g.denominator)
        nums = [int(g * L) for g in gens]
        n = 0
        for m in nums:
            n = math.gcd(n, m)
        return self.canonical(Fraction(n, L))

    def divides(self, a: Fraction, b: Fraction) -> bool:
        if a == 0:
            return b == 0
        return self.contains_element(b / a)

    def invert(self, x: Fraction) -> Fraction:
        if x == 0:
            raise StarOpsError("cannot invert zero")
        return 1 / x

    def is_t_prime(self, p):
        return True  # Pruefer: every ideal is a t-ideal

    def essential_at(self, p):
        return True  # localizations of a PID are DVRs or the field


class IntegersZ(_ZLike):
    name = "Z"

    def active(self, p):
        return True

    def spectrum(self):
        return spec_z_family("z")


class LocalizedZ(_ZLike):
    """Z with some primes inverted.  ``keep`` gives a finite set of active
    primes (everything else inverted: a semilocal PID); ``invert`` inverts a
    finite set (infinitely many primes stay active)."""

    def __init__(self, keep: Optional[Sequence[int]] = None,
                 invert: Optional[Sequence[int]] = None):
        if (keep is None) == (invert is None):
            raise StarOpsError("specify exactly one of keep / invert")
        self.keep = frozenset(keep) if keep is not None else None
        self.invert = frozenset(invert) if invert is not None else frozenset()
        for p in (self.keep or self.invert):
            if not is_prime(p):
                raise StarOpsError(f"{p} is not prime")
        if self.keep is not None:
            self.name = "Zloc:" + ",".join(str(p) for p in sorted(self.keep))
        else:
            self.name = "Zinv:" + ",".join(str(p) for p in sorted(self.invert))

    def active(self, p):
        if self.keep is not None:
            return p in self.keep
        return p not in self.invert

    def spectrum(self):
        if self.keep is not None:
            pts = ["(0)"] + [f"({p})" for p in sorted(self.keep)]
            leq = [("(0)", f"({p})") for p in sorted(self.keep)]
            elems = {"1": []}
            for p in sorted(self.keep):
                elems[str(p)] = [f"({p})"]
            return FinitePoset(pts, leq, elems)
        return spec_z_family(self.name, active=self.active)


def spec_z_family(name: str, active=lambda p: True) -> FiniteCharacterFamily:
    """Spec(Z)-shaped family: maximals indexed by their primes, integer
    element symbols resolved to their (active) prime divisors."""

    def resolver(sym: str) -> ElementRule:
        n = int(sym)
        if n == 0:
            return ElementRule("cofinite", frozenset(), at_generic=True)
        return ElementRule("finite",
                           frozenset(p for p in prime_factors(n) if active(p)))

    sample = tuple(p for p in (2, 3, 5, 7, 11, 13, 17) if active(p))[:5]
    return FiniteCharacterFamily(name, generic_id="(0)", resolver=resolver,
                                 sample_indices=sample)


class _PolyDomain(CatalogDomain):
    is_ufd = True
    supports_ideal_arithmetic = True

    def coerce(self, x) -> FracPoly:
        if isinstance(x, FracPoly):
            return x
        if isinstance(x, UniPoly):
            return FracPoly(x)
        if isinstance(x, (int, Fraction)):
            return FracPoly(UniPoly([x]))
        if isinstance(x, str):
            if "/" in x and x.lstrip("-").split("/")[0].strip().isdigit() is False:
                num, den = x.split("/", 1)
                return FracPoly(parse_uni(num.strip().strip("()")),
                                parse_uni(den.strip().strip("()")))
            return FracPoly(parse_uni(x))
        raise StarOpsError(f"cannot coerce {x!r}")

    def _fractional_gcd(self, gens: Sequence[FracPoly]) -> FracPoly:
        gens = [g for g in gens if not g.is_zero]
        if not gens:
            raise StarOpsError("gcd of zero ideal")
        L = UniPoly([1])
        for g in gens:
            L = lcm_uni(L, g.den)
        if L.leading < 0:
            L = L.scale(-1)
        nums = [g.num * L.divmod(g.den)[0] for g in gens]
        acc = nums[0]
        for m in nums[1:]:
            acc = gcd_uni(acc, m)
        return FracPoly(acc, L)


class PolyQ(_PolyDomain):
    """Q[X]: a PID, so ideal theory is the monic gcd; integer contents and
    rational scalars are units."""

    name = "QX"
    is_pruefer = True  # a PID

    def contains_element(self, x: FracPoly) -> bool:
        return x.den.degree == 0

    def is_unit_element(self, x: FracPoly) -> bool:
        return (not x.is_zero) and x.num.degree == 0 and x.den.degree == 0

    def canonical(self, x: FracPoly) -> FracPoly:
        if x.is_zero:
            return x
        _, n = content_primitive(x.num)
        if n.leading < 0:
            n = n.scale(-1)
        _, d = content_primitive(x.den)
        return FracPoly(n, d)

    def gcd_of(self, gens):
        return self.canonical(self._fractional_gcd([self.coerce(g) for g in gens]))

    def divides(self, a: FracPoly, b: FracPoly) -> bool:
        if a.is_zero:
            return b.is_zero
        return self.contains_element(FracPoly(b.num * a.den, b.den * a.num))

    def invert(self, x: FracPoly) -> FracPoly:
        if x.is_zero:
            raise StarOpsError("cannot invert zero")
        return FracPoly(x.den, x.num)

    def spectrum(self):
        elems = {
            "X": ElementRule("finite", frozenset({"X"})),
            "X-2": ElementRule("finite", frozenset({"X-2"})),
            "X^2+1": ElementRule("finite", frozenset({"X^2+1"})),
            "X^2-2*X": ElementRule("finite", frozenset({"X", "X-2"})),
            "1": ElementRule("finite", frozenset()),
            "0": ElementRule("cofinite", frozenset(), at_generic=True),
        }
        return FiniteCharacterFamily("qx", generic_id="(0)", elements=elems,
                                     sample_indices=("X", "X-2", "X^2+1"))

    def is_t_prime(self, p):
        return True

    def essential_at(self, p):
        return True


#: tabulated height-two maximals of Z[X] available in the symbolic model
ZX_MAXIMALS = ("(2,X)", "(2,X+1)", "(3,X)", "(5,X-2)", "(5,X)")


class PolyZX(_PolyDomain):
    """Z[X]: a UFD with height-two maximals (p, f); gcd is content times
    primitive gcd."""

    name = "ZX"

    def contains_element(self, x: FracPoly) -> bool:
        return x.is_polynomial

    def is_unit_element(self, x: FracPoly) -> bool:
        return x.is_polynomial and x.num.degree == 0 and abs(x.num.coeffs[0]) == 1

    def canonical(self, x: FracPoly) -> FracPoly:
        if x.is_zero:
            return x
        if x.num.leading < 0 and x.den.degree == 0:
            return FracPoly(x.num.scale(-1), x.den)
        return x

    def gcd_of(self, gens):
        return self.canonical(self._fractional_gcd([self.coerce(g) for g in gens]))

    def divides(self, a: FracPoly, b: FracPoly) -> bool:
        if a.is_zero:
            return b.is_zero
        q = FracPoly(b.num * a.den, b.den * a.num)
        return q.is_polynomial

    def invert(self, x: FracPoly) -> FracPoly:
        if x.is_zero:
            raise StarOpsError("cannot invert zero")
        return FracPoly(x.den, x.num)

    def spectrum(self):
        def resolver(sym: str) -> ElementRule:
            # height-one vanishing: prime divisors of the content plus the
            # caller-declared irreducible primitive factors (symbol "p*f1*f2")
            indices = set()
            for tok in sym.split("*#"):
                tok = tok.strip()
                if tok.lstrip("-").isdigit():
                    indices.update(prime_factors(int(tok)))
                elif tok:
                    indices.add(tok)
            return ElementRule("finite", frozenset(indices))

        h1 = FiniteCharacterFamily("zx_h1", generic_id="(0)", resolver=resolver,
                                   sample_indices=(2, 3, 5, "X", "X^2+1"))
        maximals = FinitePoset(ZX_MAXIMALS)
        return DisjointUnion([h1, maximals])

    def is_t_prime(self, p: "PrimeDesc") -> bool:
        return p.kind in ("zero", "height1", "upper")

    def essential_at(self, p: "PrimeDesc") -> bool:
        # localizations at (0), uppers to zero and principal height-one
        # primes are DVRs (or the field); at (p, f) the maximal ideal needs
        # two generators, so the localization is not a valuation domain
        return p.kind in ("zero", "height1", "upper")


class _OracleDomain(CatalogDomain):
    """Classification-only catalog entries; no ideal arithmetic."""

    def coerce(self, x):
        raise StarOpsError(f"element arithmetic unsupported over {self.name}")

    contains_element = is_unit_element = coerce


class GaussianZi(_OracleDomain):
    """Z[i]: a Dedekind (hence Pruefer) domain, recorded as an oracle."""

    name = "Zi"
    is_pruefer = True

    def spectrum(self):
        sample = []
        for p in (2, 3, 5, 7, 13):
            sample.append(f"{p}.0")
            if p % 4 == 1:
                sample.append(f"{p}.1")
        return FiniteCharacterFamily("zi", generic_id="(0)",
                                     sample_indices=tuple(sample))

    def is_t_prime(self, p):
        return True

    def essential_at(self, p):
        return True


class ZPlusXQX(_OracleDomain):
    """Z + XQ[X]: a Pruefer domain without t-finite character (the maximal
    ideals containing X all share it), recorded as an oracle."""

    name = "Z+XQX"
    is_pruefer = True

    def spectrum(self):
        return FiniteCharacterFamily("zxq", generic_id="(0)",
                                     finite_character=False,
                                     sample_indices=("m2", "m3", "mX.0"))

    def is_t_prime(self, p):
        return True

    def essential_at(self, p):
        return True


class PullbackVD(_OracleDomain):
    """Pullback of a top catalog domain along a valuation domain V: the
    preimage of the top domain under V -> V/M.  Spec is the chain of primes
    of V strictly below M placed under Spec of the top domain; the glue
    point (M itself) is the top model's limit point.

    Classification rules: the chain primes localize inside V (valuation
    domains), and a prime above the conductor classifies as its image in the
    top domain does."""

    def __init__(self, top: CatalogDomain, chain_len: int = 1,
                 name: Optional[str] = None):
        if chain_len < 1:
            raise StarOpsError("the valuation chain needs at least (0)")
        self.top = top
        self.chain = tuple(f"q{i}" for i in range(chain_len))
        self.name = name or f"VD+{top.name}"
        self.is_pruefer = top.is_pruefer

    def spectrum(self):
        return OrdinalSum(self.chain, self.top.spectrum())

    def _delegate(self, p: "PrimeDesc") -> Optional["PrimeDesc"]:
        if isinstance(p.point, PosetPt) and p.point.pid in self.chain:
            return None
        return PrimeDesc(self.top, p.point, p.kind, p.gens)

    def is_t_prime(self, p):
        top = self._delegate(p)
        return True if top is None else self.top.is_t_prime(top)

    def essential_at(self, p):
        top = self._delegate(p)
        return True if top is None else self.top.essential_at(top)


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------

class FracIdealFG:
    """Finitely generated fractional ideal, given by generators; the zero
    ideal is a distinguished variant."""

    __slots__ = ("domain", "generators", "is_zero_ideal")

    def __init__(self, domain: CatalogDomain, generators: Sequence = (),
                 zero: bool = False):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "is_zero_ideal", zero)
        if zero:
            object.__setattr__(self, "generators", ())
            return
        gens = []
        for g in generators:
            e = domain.coerce(g)
            nonzero = (e != 0) if isinstance(e, Fraction) else not e.is_zero
            if nonzero:
                gens.append(e)
        if not gens:
            raise StarOpsError("an ideal needs a nonzero generator (or the zero flag)")
        object.__setattr__(self, "generators", tuple(gens))

    def __setattr__(self, *a):
        raise AttributeError("FracIdealFG is immutable")

    @classmethod
    def zero(cls, domain: CatalogDomain) -> "FracIdealFG":
        return cls(domain, zero=True)

    def scale(self, f) -> "FracIdealFG":
        if self.is_zero_ideal:
            return self
        f = self.domain.coerce(f)
        return FracIdealFG(self.domain, [f * g for g in self.generators])

    def contains(self, x) -> bool:
        """Membership.  Exact in the Bezout variants (via the gcd); over
        Z[X] this is the sound generator-divisibility test from the design
        notes (incomplete for non-principal combinations)."""
        x = self.domain.coerce(x)
        if self.is_zero_ideal:
            return (x == 0) if isinstance(x, Fraction) else x.is_zero
        if isinstance(self.domain, (_ZLike, PolyQ)):
            return self.domain.divides(self.domain.gcd_of(self.generators), x)
        return any(self.domain.divides(g, x) for g in self.generators)

    def same_ideal(self, other: "FracIdealFG") -> bool:
        if self.is_zero_ideal or other.is_zero_ideal:
            return self.is_zero_ideal and other.is_zero_ideal
        return (all(other.contains(g) for g in self.generators)
                and all(self.contains(g) for g in other.generators))

    def __str__(self):
        if self.is_zero_ideal:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    __repr__ = __str__


def colon_to_domain(I: FracIdealFG) -> FracIdealFG:
    """(D : I), the principal fractional ideal generated by 1/gcd(gens)."""
    if I.is_zero_ideal:
        raise StarOpsError("colon of the zero ideal")
    d = I.domain
    if not d.supports_ideal_arithmetic:
        raise StarOpsError(f"ideal arithmetic unsupported over {d.name}")
    g = d.gcd_of(I.generators)
    return FracIdealFG(d, [d.invert(g)])


def v_closure(I: FracIdealFG) -> FracIdealFG:
    """I^v = (D : (D : I)); equals the principal ideal on gcd(gens)."""
    if I.is_zero_ideal:
        raise StarOpsError("v-closure of the zero ideal")
    d = I.domain
    if not d.supports_ideal_arithmetic:
        raise StarOpsError(f"ideal arithmetic unsupported over {d.name}")
    return FracIdealFG(d, [d.gcd_of(I.generators)])


def t_closure(I: FracIdealFG) -> FracIdealFG:
    """For finitely generated I the union defining I^t is attained at I
    itself; the zero ideal is a t-ideal by declaration."""
    if I.is_zero_ideal:
        return I
    return v_closure(I)


def is_t_ideal(I: FracIdealFG) -> bool:
    if I.is_zero_ideal:
        return True
    return t_closure(I).same_ideal(I)


# ---------------------------------------------------------------------------
# prime descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeDesc:
    """A prime of a catalog domain: its point in the spectrum model plus the
    generator data the classification rules need.

    kinds: ``zero``; ``height1`` (a prime integer or an irreducible
    primitive polynomial); ``upper`` (upper to zero, given by its
    irreducible); ``maximal2`` ((p, f) with f irreducible mod p);
    ``indexed`` (an opaque family point of an oracle-backed domain).
    """

    domain: CatalogDomain
    point: PointRef
    kind: str
    gens: tuple = ()

    def __post_init__(self):
        if self.kind not in ("zero", "height1", "upper", "maximal2", "indexed"):
            raise StarOpsError(f"unknown prime kind {self.kind!r}")
        if not self.domain.spectrum().contains_point(self.point):
            raise StarOpsError(f"point {self.point} not in Spec({self.domain.name})")


def is_t_prime(P: PrimeDesc) -> bool:
    return P.domain.is_t_prime(P)


def essential_at(P: PrimeDesc) -> bool:
    return P.domain.essential_at(P)


def parse_prime(domain: CatalogDomain, text: str) -> PrimeDesc:
    """CLI prime literals: ``(5, X-2)``, ``upper (X^2+1)``, ``(5)``, ``(0)``."""
    text = text.strip()
    spec_model = domain.spectrum()
    if text.startswith("upper"):
        body = text[len("upper"):].strip().strip("()")
        f = parse_uni(body)
        sym = format_uni(f).replace(" ", "")
        return PrimeDesc(domain, FamPt("zx_h1", sym) if isinstance(domain, PolyZX)
                         else FamGeneric("qx"), "upper", (sym,))
    body = text.strip("()")
    parts = [b.strip() for b in body.split(",")]
    if parts == ["0"]:
        fams = list(spec_model.families())
        if fams:
            return PrimeDesc(domain, FamGeneric(fams[0]), "zero")
        return PrimeDesc(domain, PosetPt("(0)"), "zero")
    if len(parts) == 1:
        gen = parts[0]
        if gen.lstrip("-").isdigit():
            p = int(gen)
            if isinstance(domain, PolyZX):
                return PrimeDesc(domain, FamPt("zx_h1", p), "height1", (p,))
            if isinstance(domain, LocalizedZ) and domain.keep is not None:
                return PrimeDesc(domain, PosetPt(f"({p})"), "height1", (p,))
            fam = list(spec_model.families())[0]
            return PrimeDesc(domain, FamPt(fam, p), "height1", (p,))
        sym = format_uni(parse_uni(gen)).replace(" ", "")
        fam = "zx_h1" if isinstance(domain, PolyZX) else "qx"
        return PrimeDesc(domain, FamPt(fam, sym), "height1", (sym,))
    if len(parts) == 2 and isinstance(domain, PolyZX):
        p = int(parts[0])
        sym = format_uni(parse_uni(parts[1])).replace(" ", "")
        pid = f"({p},{sym})"
        if pid not in ZX_MAXIMALS:
            raise StarOpsError(
                f"maximal {pid} is not tabulated in the Z[X] model "
                f"(known: {', '.join(ZX_MAXIMALS)})")
        return PrimeDesc(domain, PosetPt(pid), "maximal2", (p, sym))
    raise StarOpsError(f"cannot parse prime literal {text!r}")


_DOMAIN_IDS = {
    "Z": IntegersZ,
    "Z[X]": PolyZX,
    "ZX": PolyZX,
    "Q[X]": PolyQ,
    "QX": PolyQ,
    "Zi": GaussianZi,
    "Z+XQX": ZPlusXQX,
}


def domain_by_id(name: str) -> CatalogDomain:
    """Catalog lookup for CLI identifiers; localizations are spelled
    ``Zloc:2,3`` (keep those primes) or ``Zinv:5`` (invert those primes)."""
    name = name.strip()
    if name in _DOMAIN_IDS:
        return _DOMAIN_IDS[name]()
    if name.startswith("Zloc:"):
        return LocalizedZ(keep=[int(t) for t in name[5:].split(",")])
    if name.startswith("Zinv:"):
        return LocalizedZ(invert=[int(t) for t in name[5:].split(",")])
    raise StarOpsError(f"unknown catalog domain {name!r}")


def parse_ideal(text: str) -> FracIdealFG:
    """CLI ideal literals: ``ideal over Z: 4, 6`` / ``ideal over Z[X]: p=5, X``."""
    body = text.strip()
    if body.startswith("ideal"):
        body = body[len("ideal"):].strip()
    if not body.startswith("over"):
        raise StarOpsError(f"cannot parse ideal literal {text!r}")
    head, _, gens = body[len("over"):].partition(":")
    domain = domain_by_id(head)
    toks = [t.strip() for t in gens.split(",") if t.strip()]
    if toks == ["0"]:
        return FracIdealFG.zero(domain)
    out = []
    for t in toks:
        if t.startswith("p="):
            t = t[2:].strip()
        out.append(Fraction(t) if isinstance(domain, _ZLike) else t)
    return FracIdealFG(domain, out)


# ---------------------------------------------------------------------------
# representation check
# ---------------------------------------------------------------------------

def t_representation_check(domain: CatalogDomain, samples: Sequence,
                           t_maximals: Sequence[PrimeDesc] = ()) -> dict:
    """Check D = intersection of the localizations at its t-maximal ideals
    on sample elements of the quotient field.

    For the Z-like domains membership in each D_(p) is the p-valuation rule
    over all active primes; for the polynomial domains the declared t-maximal
    list is consulted.  Returns a report; a 'violations' entry would witness
    a failure of the representation identity on the sample."""
    rows = []
    violations = []
    for raw in samples:
        x = domain.coerce(raw)
        in_domain = domain.contains_element(x)
        excluded_by = []
        if isinstance(domain, _ZLike):
            for p in domain.active_primes_of(Fraction(x).denominator):
                excluded_by.append(f"({p})")
        else:
            for P in t_maximals:
                if P.kind in ("height1", "upper") and not x.is_zero:
                    gen = P.gens[0]
                    gpoly = (UniPoly([gen]) if isinstance(gen, int)
                             else parse_uni(str(gen)))
                    if gpoly.divides(x.den):
                        excluded_by.append(str(P.point))
        in_all_localizations = not excluded_by
        if in_domain != in_all_localizations:
            violations.append(str(raw))
        rows.append({"element": str(x), "in_domain": in_domain,
                     "excluded_by": excluded_by})
    return {"domain": domain.name, "rows": rows, "violations": violations}
