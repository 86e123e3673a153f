"""A truncated reconstruction of a classical essential-but-not-PvMD domain.

The ambient field is K = Q(X_0, ..., X_{n-1}); inside K(T, U) sit the local
ring R = K[T, U] localized at (T, U) and, for each index i, a monomial
valuation v_i giving weight 1 to X_i, T and U and weight 0 to the other
variables.  The domain of interest is D = R intersected with all the
valuation rings V_i.  Every maximal ideal m_i of V_i contracts to an
essential prime of D, yet the contractions accumulate (along any
nonprincipal ultrafilter) on a prime whose localization sits inside R and is
not a valuation domain -- the certificate this module computes.

Only finitely many X-variables are materialized (the truncation level n);
the valuations with index >= n act identically on any element that does not
mention their variable, so a single symbolic tail check covers all of them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .exact import (
    INF,
    ExactArithError,
    MultiPoly,
    WeightVector,
    monomial_valuation,
    parse_poly,
    rational_valuation,
)
from .spectra import (
    DisjointUnion,
    ElementRule,
    FamGeneric,
    FinitePoset,
    FiniteCharacterFamily,
    PosetPt,
    SubsetDesc,
)


class HOError(ValueError):
    pass


HO_FAMILY = "ho_mi"
HO_RBLOCK_POINTS = ("rT", "rU")


class HOConfig:
    """Truncation level n >= 1: alphabet X0..X{n-1}, T, U."""

    __slots__ = ("n", "alphabet", "_tu")

    def __init__(self, n: int):
        if n < 1:
            raise HOError("need at least one materialized variable")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "alphabet",
                           tuple(f"X{i}" for i in range(n)) + ("T", "U"))
        object.__setattr__(self, "_tu",
                           WeightVector.on_variables(self.alphabet, {"T", "U"}))

    def __setattr__(self, *a):
        raise AttributeError("HOConfig is immutable")

    def weight(self, i: int) -> WeightVector:
        if not 0 <= i < self.n:
            raise HOError(f"valuation index {i} is not materialized (n={self.n})")
        return WeightVector.on_variables(self.alphabet, {f"X{i}", "T", "U"})

    def poly(self, text: str) -> MultiPoly:
        return parse_poly(text, self.alphabet)

    def element(self, num, den="1") -> "HOElement":
        num = num if isinstance(num, MultiPoly) else self.poly(num)
        den = den if isinstance(den, MultiPoly) else self.poly(den)
        return HOElement(self, num, den)

    def tu_order(self, f: MultiPoly):
        """Minimal total (T,U)-degree over the monomials of f."""
        return monomial_valuation(f, self._tu)


class HOElement:
    """num/den over the config alphabet, stored with the common monomial
    factor cancelled (the canonical form the membership rules need)."""

    __slots__ = ("config", "num", "den")

    def __init__(self, config: HOConfig, num: MultiPoly, den: MultiPoly):
        if den.is_zero:
            raise HOError("zero denominator")
        if not num.is_zero:
            lo = tuple(min(a, b) for a, b in
                       zip(num.min_exponents(), den.min_exponents()))
            num, den = num.shift_down(lo), den.shift_down(lo)
        object.__setattr__(self, "config", config)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("HOElement is immutable")

    def valuation(self, i: int):
        return rational_valuation(self.num, self.den, self.config.weight(i))

    def tail_valuation(self):
        """Common value of every non-materialized valuation (they weight only
        T and U on elements that omit their variable)."""
        if self.num.is_zero:
            return INF
        return self.config.tu_order(self.num) - self.config.tu_order(self.den)

    def max_x_index(self) -> int:
        top = -1
        for i in range(self.config.n):
            if self.num.uses_variable(f"X{i}") or self.den.uses_variable(f"X{i}"):
                top = i
        return top

    def __str__(self):
        return f"({self.num!r})/({self.den!r})"


def ho_in_R(x: HOElement) -> bool:
    """Membership in K[T,U] localized at (T,U): after the canonical
    cancellation, x lies in R exactly when the denominator keeps a
    (T,U)-constant term."""
    if x.num.is_zero:
        return True
    return x.config.tu_order(x.den) == 0


def ho_in_D(x: HOElement) -> bool:
    if not ho_in_R(x):
        return False
    if any(x.valuation(i) < 0 for i in range(x.config.n)):
        return False
    return x.tail_valuation() >= 0


def ho_in_core(x: HOElement) -> bool:
    """The core ideal: elements of D of positive (T,U)-adic order."""
    if x.num.is_zero:
        return True
    order = x.config.tu_order(x.num) - x.config.tu_order(x.den)
    return ho_in_D(x) and order >= 1


def ho_in_mi(x: HOElement, i: int) -> bool:
    return x.valuation(i) >= 1


def ho_fip_witness(fs):
    """Verify the finite-intersection-property step: every materialized
    valuation with index beyond the variables used by ``fs`` has all of them
    in its maximal ideal.  Returns (bound, trace)."""
    fs = list(fs)
    if not fs:
        raise HOError("empty family")
    config = fs[0].config
    for f in fs:
        if not ho_in_core(f):
            raise HOError(f"{f} is not in the core ideal")
    bound = max(0, max(f.max_x_index() for f in fs))
    trace = {}
    for k, f in enumerate(fs):
        for i in range(bound + 1, config.n):
            if not ho_in_mi(f, i):
                raise HOError(f"FIP failure: member {k} escapes m_{i}")
        trace[f"f{k}"] = {
            "in_core": True,
            "indices_checked": list(range(bound + 1, config.n)),
            "tail_valuation": f.tail_valuation(),
        }
    return bound, trace


def ho_limit_contains(x: HOElement) -> bool:
    """Sound lower bound for membership in the ultrafilter-limit prime: the
    whole core ideal is contained in it (completeness is not claimed)."""
    return ho_in_core(x)


def _random_poly(config: HOConfig, rng: random.Random, max_terms=4, max_exp=2):
    terms = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        e = tuple(rng.randrange(0, max_exp + 1) for _ in config.alphabet)
        terms[e] = rng.randrange(-5, 6) or 1
    return MultiPoly(config.alphabet, terms)


def _divisible_by(config: HOConfig, f: MultiPoly, name: str) -> bool:
    if f.is_zero:
        return True
    i = config.alphabet.index(name)
    return f.min_exponents()[i] >= 1


def ho_nonvaluation_certificate(config: HOConfig, samples: int = 500,
                                seed: int = 0) -> dict:
    """Certificate that the localization at the limit prime is not a
    valuation domain: neither T/U nor U/T belongs to it.

    The checked lemma: for a polynomial d, if U divides d*T then d lies in
    the core ideal (and symmetrically with T and U swapped).  Since T and U
    themselves sit in the limit prime while the quotients stay outside the
    localization, the two are incomparable.  A sampled counterexample would
    falsify the construction and raises."""
    rng = random.Random(seed)
    T = MultiPoly.var(config.alphabet, "T")
    U = MultiPoly.var(config.alphabet, "U")
    checked = vacuous = 0
    for k in range(samples):
        d = _random_poly(config, rng)
        if k % 2:
            d = d * (U if k % 4 == 1 else T)  # make half the samples non-vacuous
        for top, other in ((T, U), (U, T)):
            if _divisible_by(config, d * top, "U" if other is U else "T"):
                if not ho_in_core(config.element(d)):
                    raise HOError(
                        f"divisibility lemma fails at sample {k}: d = {d!r}")
                checked += 1
            else:
                vacuous += 1
    return {
        "pair": ["T", "U"],
        "samples": samples,
        "instances_checked": checked,
        "vacuous": vacuous,
        "conclusion": "neither T/U nor U/T lies in the localization at the "
                      "limit prime; comparability fails, so it is not a "
                      "valuation domain",
    }


# ---------------------------------------------------------------------------
# spectrum export
# ---------------------------------------------------------------------------

def ho_model(config: HOConfig) -> DisjointUnion:
    """Spectrum model for the decision lab: the contractions m_i cap D as an
    indexed family whose limit slot is the shared nonprincipal-ultrafilter
    limit (the family is *not* of finite character: T and U vanish at every
    index), plus a small tabulated block for the contractions of height-one
    primes of R."""
    elements = {
        "T": ElementRule("cofinite", frozenset(), at_generic=True),
        "U": ElementRule("cofinite", frozenset(), at_generic=True),
        "X0": ElementRule("finite", frozenset({0})),
    }
    mi = FiniteCharacterFamily(HO_FAMILY, generic_id="Y_U", elements=elements,
                               finite_character=False,
                               sample_indices=tuple(range(min(config.n, 4))))
    rblock = FinitePoset(HO_RBLOCK_POINTS, (),
                         {"T": ["rT"], "U": ["rU"]})
    return DisjointUnion([mi, rblock])


def ho_representation() -> SubsetDesc:
    """The essential representation: all indexed contractions plus the
    height-one block (the limit slot itself is excluded -- it is exactly the
    point the closure adds)."""
    return SubsetDesc.cofinite_in(HO_FAMILY).union(
        SubsetDesc(PosetPt(p) for p in HO_RBLOCK_POINTS))


def ho_essential_point(p) -> bool:
    """Essential-locus rule: every representation point is essential; the
    nonprincipal limit is not (its localization embeds in R but the maximal
    ideal is not comparable-generated)."""
    return p != FamGeneric(HO_FAMILY)
