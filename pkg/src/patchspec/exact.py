"""Exact arithmetic layer: rationals, multivariate and univariate polynomials,
gcd machinery and monomial (weight) valuations.

All coefficients are `fractions.Fraction` (arbitrary precision, always in
lowest terms with positive denominator), so every computation here is exact.
Valuations take values in the integers extended by ``math.inf`` for the zero
polynomial.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction

INF = math.inf


class ExactArithError(ValueError):
    pass


# ---------------------------------------------------------------------------
# multivariate polynomials
# ---------------------------------------------------------------------------

class MultiPoly:
    """Multivariate polynomial over the rationals with a fixed, ordered
    variable alphabet.

    Terms are stored as a map from exponent tuples (one entry per alphabet
    symbol) to nonzero Fraction coefficients.  Instances are immutable.
    """

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Sequence[str], terms: Mapping[tuple, Union[int, Fraction]]):
        alpha = tuple(alphabet)
        clean = {}
        for exps, coeff in terms.items():
            c = Fraction(coeff)
            if c == 0:
                continue
            e = tuple(int(x) for x in exps)
            if len(e) != len(alpha) or any(x < 0 for x in e):
                raise ExactArithError(f"bad exponent vector {exps} for alphabet {alpha}")
            clean[e] = clean.get(e, Fraction(0)) + c
        object.__setattr__(self, "alphabet", alpha)
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})

    def __setattr__(self, *a):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, alphabet: Sequence[str]) -> "MultiPoly":
        return cls(alphabet, {})

    @classmethod
    def const(cls, alphabet: Sequence[str], c) -> "MultiPoly":
        return cls(alphabet, {(0,) * len(tuple(alphabet)): Fraction(c)})

    @classmethod
    def var(cls, alphabet: Sequence[str], name: str) -> "MultiPoly":
        alpha = tuple(alphabet)
        if name not in alpha:
            raise ExactArithError(f"variable {name!r} not in alphabet {alpha}")
        e = [0] * len(alpha)
        e[alpha.index(name)] = 1
        return cls(alpha, {tuple(e): Fraction(1)})

    # -- predicates -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MultiPoly)
                and self.alphabet == other.alphabet
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if not isinstance(other, MultiPoly) or other.alphabet != self.alphabet:
            raise ExactArithError("alphabet mismatch")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MultiPoly(self.alphabet, terms)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.alphabet, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.alphabet, terms)

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        return MultiPoly(self.alphabet, {e: c * v for e, v in self.terms.items()})

    # -- structure --------------------------------------------------------

    def min_exponents(self) -> tuple:
        """Componentwise minimum of the exponent vectors (the largest
        monomial dividing every term).  Undefined for the zero polynomial."""
        if self.is_zero:
            raise ExactArithError("zero polynomial has no minimal monomial")
        its = iter(self.terms)
        acc = list(next(its))
        for e in its:
            for i, x in enumerate(e):
                if x < acc[i]:
                    acc[i] = x
        return tuple(acc)

    def shift_down(self, exps: Sequence[int]) -> "MultiPoly":
        """Divide by the monomial with the given exponents (must divide
        every term)."""
        out = {}
        for e, c in self.terms.items():
            ne = tuple(a - b for a, b in zip(e, exps))
            if any(x < 0 for x in ne):
                raise ExactArithError("monomial does not divide polynomial")
            out[ne] = c
        return MultiPoly(self.alphabet, out)

    def uses_variable(self, name: str) -> bool:
        i = self.alphabet.index(name)
        return any(e[i] > 0 for e in self.terms)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def poly_arith(f: MultiPoly, g: MultiPoly, kind: str) -> MultiPoly:
    """Dispatch form of +, -, * used by the CLI."""
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    raise ExactArithError(f"unknown operation {kind!r}")


# ---------------------------------------------------------------------------
# weight valuations (monomial valuations given by a weight per variable)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightVector:
    """One nonnegative integer weight per alphabet symbol."""

    alphabet: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.alphabet) != len(self.weights):
            raise ExactArithError("weight/alphabet length mismatch")
        if any(w < 0 for w in self.weights):
            raise ExactArithError("weights must be nonnegative")

    @classmethod
    def on_variables(cls, alphabet: Sequence[str], ones: Iterable[str]) -> "WeightVector":
        alpha = tuple(alphabet)
        ones = set(ones)
        return cls(alpha, tuple(1 if v in ones else 0 for v in alpha))


def monomial_valuation(f: MultiPoly, w: WeightVector):
    """Minimum weighted exponent sum over the stored terms; +inf for 0."""
    if w.alphabet != f.alphabet:
        raise ExactArithError("alphabet mismatch")
    if f.is_zero:
        return INF
    return min(sum(wi * ei for wi, ei in zip(w.weights, e)) for e in f.terms)


def rational_valuation(num: MultiPoly, den: MultiPoly, w: WeightVector):
    """Valuation of the quotient num/den (difference of the two values)."""
    if den.is_zero:
        raise ExactArithError("zero denominator")
    return monomial_valuation(num, w) - monomial_valuation(den, w)


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------

class UniPoly:
    """Dense univariate polynomial, coefficients ascending by degree.

    Coefficients are Fractions; a polynomial is *integral* when every
    coefficient is an integer (this is the UniPolyZ case).  The zero
    polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        # degree of 0 is -1 by convention here
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ExactArithError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([(self.coeffs[i] if i < len(self.coeffs) else 0)
                        + (other.coeffs[i] if i < len(other.coeffs) else 0)
                        for i in range(n)])

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero or other.is_zero:
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def scale(self, c) -> "UniPoly":
        c = Fraction(c)
        return UniPoly([c * a for a in self.coeffs])

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "UniPoly"):
        """Quotient and remainder over the rationals."""
        if other.is_zero:
            raise ExactArithError("division by zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        dc = other.coeffs
        while len(rem) >= len(dc) and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) < len(dc):
                break
            k = len(rem) - len(dc)
            f = rem[-1] / dc[-1]
            q[k] = f
            for i, c in enumerate(dc):
                rem[k + i] -= f * c
            rem.pop()
        return UniPoly(q), UniPoly(rem)

    def divides(self, other: "UniPoly") -> bool:
        """Exact divisibility in Z[X] when both are integral, else in Q[X]."""
        if self.is_zero:
            return other.is_zero
        q, r = other.divmod(self)
        if not r.is_zero:
            return False
        if self.is_integral and other.is_integral:
            return q.is_integral
        return True

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def __repr__(self):
        return f"UniPoly({format_uni(self)!r})"


def content_primitive(f: UniPoly):
    """Split an integral polynomial as (positive content, primitive part).

    The sign of f stays with the primitive part, so that
    f == primitive.scale(content) always holds.
    """
    if f.is_zero:
        raise ExactArithError("zero polynomial has no content")
    if not f.is_integral:
        raise ExactArithError("content defined for integer polynomials only")
    content = 0
    for c in f.coeffs:
        content = math.gcd(content, abs(c.numerator))
    return content, f.scale(Fraction(1, content))


def gcd_uni(f: UniPoly, g: UniPoly) -> UniPoly:
    """Gcd of univariate polynomials.

    Over Z (both inputs integral): content gcd times primitive gcd, with a
    positive leading coefficient.  Otherwise: the monic gcd over Q.
    """
    if f.is_zero and g.is_zero:
        raise ExactArithError("gcd(0, 0) is undefined")
    if f.is_zero:
        f, g = g, f
    over_z = f.is_integral and g.is_integral
    a, b = f, g
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    h = a.monic()
    if not over_z:
        return h
    # clear denominators, then restore the integer content factor
    den = 1
    for c in h.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    prim = h.scale(den)
    _, prim = content_primitive(prim)
    if prim.leading < 0:
        prim = prim.scale(-1)
    cf, _ = content_primitive(f)
    cg = 0 if g.is_zero else content_primitive(g)[0]
    return prim.scale(math.gcd(cf, cg))


# ---------------------------------------------------------------------------
# p-adic residues
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PAdicApprox:
    """A p-adic integer known modulo p^k."""

    p: int
    precision: int
    residue: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ExactArithError(f"{self.p} is not prime")
        if self.precision < 1:
            raise ExactArithError("precision must be >= 1")
        object.__setattr__(self, "residue", self.residue % self.p ** self.precision)

    @property
    def modulus(self) -> int:
        return self.p ** self.precision


def eval_mod_pk(f: UniPoly, a: PAdicApprox) -> int:
    """Value of f at the residue a, mod p^k.

    Denominators coprime to p are handled by modular inversion.  A p-power in
    a denominator is tolerated only if it cancels in the exact value at the
    residue (the integer-valued polynomial case); otherwise the value is not
    a p-adic integer and an error is raised.
    """
    m = a.modulus
    if all(c.denominator % a.p != 0 for c in f.coeffs):
        acc = 0
        for c in reversed(f.coeffs):
            term = c.numerator * pow(c.denominator, -1, m)
            acc = (acc * a.residue + term) % m
        return acc
    v = f(Fraction(a.residue))
    if v.denominator % a.p == 0:
        raise ExactArithError(f"value {v} at residue {a.residue} is not {a.p}-integral")
    return v.numerator * pow(v.denominator, -1, m) % m


# ---------------------------------------------------------------------------
# polynomial literal parsing (CLI input syntax)
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*([+-]|\^|\*|/|\d+|[A-Za-z][A-Za-z0-9]*)")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExactArithError(f"cannot parse polynomial near {text[pos:pos+12]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_poly(text: str, alphabet: Sequence[str]) -> MultiPoly:
    """Parse a term-list literal such as ``3/2*X0^2*T - U``.

    ``*`` is optional between factors; coefficients may be ``a/b``.
    """
    alpha = tuple(alphabet)
    toks = _tokenize(text)
    result = MultiPoly.zero(alpha)
    i = 0
    if not toks:
        raise ExactArithError("empty polynomial literal")
    while i < len(toks):
        sign = 1
        while i < len(toks) and toks[i] in "+-":
            if toks[i] == "-":
                sign = -sign
            i += 1
        if i >= len(toks):
            raise ExactArithError("dangling sign in polynomial literal")
        coeff = Fraction(sign)
        exps = [0] * len(alpha)
        saw_factor = False
        while i < len(toks) and toks[i] not in "+-":
            tok = toks[i]
            if tok == "*":
                i += 1
                continue
            if tok.isdigit():
                num = int(tok)
                i += 1
                if i < len(toks) and toks[i] == "/":
                    if i + 1 >= len(toks) or not toks[i + 1].isdigit():
                        raise ExactArithError("bad rational coefficient")
                    coeff *= Fraction(num, int(toks[i + 1]))
                    i += 2
                else:
                    coeff *= num
            elif tok in alpha:
                power = 1
                i += 1
                if i < len(toks) and toks[i] == "^":
                    if i + 1 >= len(toks) or not toks[i + 1].isdigit():
                        raise ExactArithError("bad exponent")
                    power = int(toks[i + 1])
                    i += 2
                exps[alpha.index(tok)] += power
            else:
                raise ExactArithError(f"unknown symbol {tok!r} (alphabet {alpha})")
            saw_factor = True
        if not saw_factor:
            raise ExactArithError("empty term in polynomial literal")
        result = result + MultiPoly(alpha, {tuple(exps): coeff})
    return result


def parse_uni(text: str, var: str = "X") -> UniPoly:
    """Parse a univariate literal into a UniPoly."""
    mp = parse_poly(text, (var,))
    n = 1 + max((e[0] for e in mp.terms), default=0)
    cs = [Fraction(0)] * n
    for e, c in mp.terms.items():
        cs[e[0]] = c
    return UniPoly(cs)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(f: MultiPoly) -> str:
    if f.is_zero:
        return "0"
    parts = []
    for e in sorted(f.terms, reverse=True):
        c = f.terms[e]
        factors = []
        for name, p in zip(f.alphabet, e):
            if p == 1:
                factors.append(name)
            elif p > 1:
                factors.append(f"{name}^{p}")
        body = "*".join(factors)
        if not body:
            part = _fmt_coeff(abs(c))
        elif abs(c) == 1:
            part = body
        else:
            part = f"{_fmt_coeff(abs(c))}*{body}"
        parts.append(("- " if c < 0 else "+ ") + part)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def format_uni(f: UniPoly, var: str = "X") -> str:
    mp = MultiPoly((var,), {(i,): c for i, c in enumerate(f.coeffs)})
    return format_poly(mp)
