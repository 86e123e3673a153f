"""Integer-valued polynomial machinery over the computable catalog domains.

Int(D) is the ring of polynomials over the fraction field mapping D into
itself.  Membership is decided by the finite-difference criterion: a
polynomial of degree d is integer-valued at an active prime p exactly when
its values at 0..d are p-integral (D is dense in the p-adic completion and
polynomials are continuous).

The maximal ideals of Int(Z) above an active prime p are indexed by p-adic
integers alpha known here only to finite precision, so the membership test
for m_{p,alpha} = {f : f(alpha) in p-adic maximal ideal} is tri-state:
``in`` / ``out`` when provable at the given precision, ``needs_precision``
otherwise -- never a silent escalation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .catalog import catalog_descriptor
from .exact import ExactArithError, PAdicApprox, UniPoly, parse_uni
from .pvmd import localization_intersection, pvmd_check_closure
from .spectra import FamGeneric, FamPt, PosetPt, SubsetDesc, is_patch_closed, patch_closure
from .starops import IntegersZ, LocalizedZ, PolyQ, _ZLike, prime_factors


class IntPolyError(ValueError):
    pass


def vp(x: Fraction, p: int):
    """p-adic valuation of a rational (math.inf for zero)."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# membership domains
# ---------------------------------------------------------------------------

class IntMembershipDomain:
    """Catalog entry with its set of active primes: the primes whose
    denominators matter for integer-valuedness.  ``active_primes`` is a
    frozenset, or None meaning all rational primes."""

    def __init__(self, cid: str):
        from .starops import domain_by_id
        self.cid = cid
        dom = domain_by_id(cid)
        if isinstance(dom, IntegersZ):
            self.active_primes: Optional[frozenset] = None
        elif isinstance(dom, LocalizedZ):
            if dom.keep is not None:
                self.active_primes = dom.keep
            else:
                self.active_primes = None  # cofinitely many; use is_active
        elif isinstance(dom, PolyQ):
            self.active_primes = frozenset()
        else:
            raise IntPolyError(f"Int membership unsupported over {cid!r}")
        self.domain = dom

    def is_active(self, p: int) -> bool:
        if isinstance(self.domain, _ZLike):
            return self.domain.active(p)
        return False

    def active_denominator_primes(self, x: Fraction):
        return sorted(p for p in prime_factors(Fraction(x).denominator)
                      if self.is_active(p))


def int_membership(f: Union[UniPoly, str], D: IntMembershipDomain) -> bool:
    """f maps D into D: checked at the consecutive integers 0..deg(f)."""
    if isinstance(f, str):
        f = parse_uni(f)
    if f.is_zero:
        return True
    for a in range(f.degree + 1):
        if D.active_denominator_primes(f(a)):
            return False
    return True


# ---------------------------------------------------------------------------
# the primes m_{p,alpha}
# ---------------------------------------------------------------------------

def mpalpha_membership(f: Union[UniPoly, str], p: int, alpha: PAdicApprox) -> str:
    """Tri-state membership of f in m_{p,alpha}.

    With e = max p-adic denominator exponent over the coefficients, the
    value f(alpha) is determined modulo p^(k-e); a verdict is only issued
    when that modulus is nontrivial."""
    if isinstance(f, str):
        f = parse_uni(f)
    if alpha.p != p:
        raise IntPolyError("alpha is an approximation at a different prime")
    if not int_membership(f, IntMembershipDomain("Z")):
        raise IntPolyError("f is not integer-valued")
    e = 0 if f.is_zero else max(vp(Fraction(1, c.denominator), p) * -1
                                for c in f.coeffs)
    m = alpha.precision - e
    if m < 1:
        return "needs_precision"
    v = vp(f(alpha.residue), p)
    # v < m: exact valuation of the true value; v >= m: true value is 0 mod
    # p^m with m >= 1 -- in either case v >= 1 decides membership
    return "in" if v >= 1 else "out"


@dataclass(frozen=True)
class ContractedPrime:
    """The contraction of m_{p,alpha} to the polynomial subring: (p, X - a)
    with a the residue of alpha modulo p."""

    p: int
    a: int

    def __str__(self):
        if self.a == 0:
            return f"({self.p}, X)"
        return f"({self.p}, X - {self.a})"

    @property
    def generators(self):
        return (self.p, f"X - {self.a}" if self.a else "X")


def mpalpha_contract_ZX(p: int, alpha: PAdicApprox) -> ContractedPrime:
    if alpha.p != p:
        raise IntPolyError("alpha is an approximation at a different prime")
    return ContractedPrime(p, alpha.residue % p)


# ---------------------------------------------------------------------------
# Lambda classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaClassification:
    """Split of t-Spec(D) into the int-primes (finite residue field, where
    Int(D) localizes nontrivially) and the rest; D0/D1 are the intersections
    of the corresponding localizations."""

    cid: str
    lambda0: SubsetDesc
    lambda1: SubsetDesc
    d0_active: frozenset        # active primes of D0 (None-like: frozenset())
    d0_all_primes: bool         # D0 active at every rational prime
    residue_size_rule: str

    def residue_size(self, point) -> Union[int, float]:
        if isinstance(point, FamPt):
            return int(point.index)
        if isinstance(point, PosetPt) and point.pid.strip("()").isdigit():
            return int(point.pid.strip("()"))
        return math.inf


def lambda_classify(cid: str) -> LambdaClassification:
    desc = catalog_descriptor(cid)
    dom = desc.catalog
    if isinstance(dom, IntegersZ):
        return LambdaClassification(
            cid, SubsetDesc.cofinite_in("z"), SubsetDesc.of(FamGeneric("z")),
            frozenset(), True, "residue field F_p at (p)")
    if isinstance(dom, LocalizedZ) and dom.keep is not None:
        pts = SubsetDesc(PosetPt(f"({p})") for p in sorted(dom.keep))
        return LambdaClassification(
            cid, pts, SubsetDesc.of(PosetPt("(0)")),
            dom.keep, False, "residue field F_p at (p)")
    if isinstance(dom, LocalizedZ):
        return LambdaClassification(
            cid, SubsetDesc.cofinite_in(dom.name),
            SubsetDesc.of(FamGeneric(dom.name)),
            frozenset(p for p in range(2, 50) if dom.active(p)), True,
            "residue field F_p at (p)")
    if isinstance(dom, PolyQ):
        whole = SubsetDesc.cofinite_in("qx").union(SubsetDesc.of(FamGeneric("qx")))
        return LambdaClassification(
            cid, SubsetDesc.empty(), whole,
            frozenset(), False, "all residue fields infinite")
    raise IntPolyError(f"no classification rule for {cid!r}")


def lambda_d0_domain(cls: LambdaClassification) -> IntMembershipDomain:
    """D0 as a membership domain (the fraction field when Lambda0 is empty)."""
    if cls.lambda0.is_empty:
        return IntMembershipDomain("QX")  # no active primes: Int(K) = K[X]
    if cls.d0_all_primes:
        return IntMembershipDomain("Z" if cls.cid == "Z" else cls.cid)
    return IntMembershipDomain("Zloc:" + ",".join(str(p) for p in sorted(cls.d0_active)))


def decomposition_check(cid: str, samples: Sequence) -> dict:
    """Int(D) = D1[X] ∩ Int(D0) on samples: membership on the left must
    match (coefficients in D1) ∧ Int(D0)-membership on the right."""
    cls = lambda_classify(cid)
    D = IntMembershipDomain(cid)
    D0 = lambda_d0_domain(cls)
    # D1 active primes: indexed primes classified into Lambda1 (none in the
    # catalog: Lambda1 holds the zero ideal or infinite-residue primes)
    d1_active = frozenset()
    rows, violations = [], []
    for raw in samples:
        f = parse_uni(raw) if isinstance(raw, str) else raw
        left = int_membership(f, D)
        coeffs_ok = not any(p for c in f.coeffs
                            for p in prime_factors(c.denominator)
                            if p in d1_active)
        right = coeffs_ok and int_membership(f, D0)
        if left != right:
            violations.append(str(raw))
        rows.append({"f": str(raw), "left": left, "right": right})
    return {"domain": cid, "rows": rows, "violations": violations}


# ---------------------------------------------------------------------------
# instance checks
# ---------------------------------------------------------------------------

def lemma33_check(chain_model, v_point, w_point, residue_size) -> dict:
    """Two comparable valuation overrings with the larger one of finite
    residue field must coincide; report the contradiction otherwise."""
    if residue_size is None or residue_size is math.inf:
        return {"status": "not applicable", "reason": "infinite residue field"}
    if not chain_model.leq(w_point, v_point):
        raise IntPolyError("W must be an overring of V (its center below)")
    if v_point == w_point:
        return {"status": "equal", "point": str(v_point)}
    return {"status": "contradiction",
            "reason": f"distinct comparable valuations {v_point} ⊂ {w_point} "
                      f"with finite residue field {residue_size} are inconsistent"}


def prop34_check(cid: str) -> dict:
    """The contraction of Spec(D0) meets t-Spec(D) exactly in Lambda0; the
    closedness claim is computed in both possible ambients (the full patch
    topology on the model, and the subspace topology on the image) and both
    results are reported without adjudicating."""
    cls = lambda_classify(cid)
    desc = catalog_descriptor(cid)
    if not cls.lambda0.is_empty:
        _, verdict = localization_intersection(desc, cls.lambda0)
        image = cls.lambda0
        if verdict.is_pvmd is not True:
            raise IntPolyError("D0 representation is not PvMD-certified")
    else:
        image = SubsetDesc.empty()
    closed_in_spec = is_patch_closed(desc.model, cls.lambda0)
    report = {
        "domain": cid,
        "image_equals_lambda0": image == cls.lambda0,
        "closed_in_spec": closed_in_spec,
        "closed_in_image": True,  # the image is the whole subspace
    }
    if not closed_in_spec:
        added = patch_closure(desc.model, cls.lambda0)
        report["dual_reading"] = (
            f"patch closure in the full spectrum adds {added} \\ {cls.lambda0}; "
            "closedness holds in the image subspace but not in the ambient "
            "spectrum -- both readings reported")
    return report


#: recorded oracle facts (not re-derived): Pruefer-ness of the relevant
#: integer-valued polynomial rings, and the PvMD property of D1[X]
_INT_ORACLES = {
    "Z": {"int_d0_pruefer": True, "d1x_pvmd": True},
    "Zloc:2,3": {"int_d0_pruefer": True, "d1x_pvmd": True},
    "QX": {"int_d0_pruefer": True, "d1x_pvmd": True},
}


def thm37_check(cid: str) -> dict:
    """Instance-level equivalence: Int(D) is a PvMD iff D is a PvMD and
    Int(D0) is a Pruefer domain (conjunction reading of the hypothesis; the
    statement's stray 'if' is noted)."""
    if cid not in _INT_ORACLES:
        raise IntPolyError(f"missing oracle flags for {cid!r}")
    oracles = _INT_ORACLES[cid]
    desc = catalog_descriptor(cid)
    d_pvmd = pvmd_check_closure(desc).is_pvmd is True
    cond2 = d_pvmd and oracles["int_d0_pruefer"]
    # condition (1) via the finite-intersection route: Int(D) = D1[X] ∩
    # Int(D0), a two-part intersection of a PvMD and a Pruefer domain
    cond1 = oracles["d1x_pvmd"] and oracles["int_d0_pruefer"]
    return {
        "domain": cid,
        "condition_1_int_pvmd": cond1,
        "condition_2_conjunction": cond2,
        "equivalent": cond1 == cond2,
        "note": "hypothesis read as the conjunction 'D is a PvMD and "
                "Int(D0) is Pruefer'",
        "oracle_flags": dict(oracles),
    }
