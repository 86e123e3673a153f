"""Symbolic models of prime spectra with the Zariski and constructible
(patch) topologies.

A model is one of four shapes:

* ``FinitePoset`` -- finitely many points ordered by containment, with an
  element alphabet mapping symbols to (up-closed) vanishing sets;
* ``FiniteCharacterFamily`` -- one distinguished limit point plus a countably
  indexed antichain of closed points.  When the ``finite_character`` flag is
  set, every nonzero element symbol vanishes at only finitely many indexed
  points and the limit point behaves like the zero ideal: every nonprincipal
  ultrafilter on an infinite subset converges to it;
* ``DisjointUnion`` -- finitely many models with disjoint point namespaces;
* ``OrdinalSum`` -- a finite chain placed below every point of a top model
  (the pullback spectrum shape).

Subsets are finite unions of explicit point sets and cofinite-in-family
parts, which keeps membership, intersection, complement and both closures
decidable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union


class SpectraError(ValueError):
    pass


class FIPError(SpectraError):
    """A family of sets fails the finite intersection property."""


class ModelUnsupportedError(SpectraError):
    """An operation is not defined for this model variant."""


class LocalFinitenessError(SpectraError):
    def __init__(self, failures):
        self.failures = tuple(failures)
        super().__init__(f"local-finiteness witness fails at: "
                         f"{', '.join(str(p) for p in self.failures)}")


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PosetPt:
    pid: str

    def __str__(self):
        return self.pid


@dataclass(frozen=True)
class FamGeneric:
    """The distinguished limit point of an indexed family (the generic point
    in the finite-character case)."""

    family: str

    def __str__(self):
        return f"{self.family}:generic"


@dataclass(frozen=True)
class FamPt:
    family: str
    index: Union[int, str]

    def __str__(self):
        return f"{self.family}:{self.index}"


PointRef = Union[PosetPt, FamGeneric, FamPt]


def _index_key(ix):
    return (0, ix, "") if isinstance(ix, int) else (1, 0, str(ix))


def point_key(p: PointRef):
    """Deterministic total order on points, used for tie-breaks and output."""
    if isinstance(p, PosetPt):
        return (0, p.pid, (0, 0, ""))
    if isinstance(p, FamGeneric):
        return (1, p.family, (0, 0, ""))
    return (2, p.family, _index_key(p.index))


# ---------------------------------------------------------------------------
# subsets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CofinitePart:
    """All indexed points of a family except finitely many."""

    family: str
    excluded: frozenset = frozenset()


class SubsetDesc:
    """Finite union of explicit points and cofinite-in-family parts."""

    __slots__ = ("explicit", "cofinite")

    def __init__(self, explicit: Iterable[PointRef] = (), cofinite: Iterable[CofinitePart] = ()):
        parts: dict = {}
        for part in cofinite:
            if part.family in parts:
                parts[part.family] &= part.excluded
            else:
                parts[part.family] = frozenset(part.excluded)
        expl = set(explicit)
        # indexed points absorbed by a cofinite part are redundant;
        # excluded indices re-added explicitly shrink the exclusion set
        for p in list(expl):
            if isinstance(p, FamPt) and p.family in parts:
                if p.index in parts[p.family]:
                    parts[p.family] -= {p.index}
                expl.discard(p)
        object.__setattr__(self, "explicit", frozenset(expl))
        object.__setattr__(self, "cofinite",
                           frozenset(CofinitePart(f, ex) for f, ex in parts.items()))

    def __setattr__(self, *a):
        raise AttributeError("SubsetDesc is immutable")

    @classmethod
    def of(cls, *points: PointRef) -> "SubsetDesc":
        return cls(points)

    @classmethod
    def empty(cls) -> "SubsetDesc":
        return cls()

    @classmethod
    def cofinite_in(cls, family: str, excluded: Iterable = ()) -> "SubsetDesc":
        return cls((), (CofinitePart(family, frozenset(excluded)),))

    # -- queries ----------------------------------------------------------

    def part_for(self, family: str) -> Optional[CofinitePart]:
        for part in self.cofinite:
            if part.family == family:
                return part
        return None

    def __contains__(self, p: PointRef) -> bool:
        if p in self.explicit:
            return True
        if isinstance(p, FamPt):
            part = self.part_for(p.family)
            return part is not None and p.index not in part.excluded
        return False

    @property
    def is_empty(self) -> bool:
        return not self.explicit and not self.cofinite

    @property
    def is_infinite(self) -> bool:
        return bool(self.cofinite)

    def __eq__(self, other):
        return (isinstance(other, SubsetDesc)
                and self.explicit == other.explicit
                and self.cofinite == other.cofinite)

    def __hash__(self):
        return hash((self.explicit, self.cofinite))

    # -- algebra ----------------------------------------------------------

    def union(self, other: "SubsetDesc") -> "SubsetDesc":
        return SubsetDesc(self.explicit | other.explicit,
                          tuple(self.cofinite) + tuple(other.cofinite))

    def intersect(self, other: "SubsetDesc") -> "SubsetDesc":
        expl = {p for p in self.explicit if p in other}
        expl |= {p for p in other.explicit if p in self}
        parts = []
        for part in self.cofinite:
            o = other.part_for(part.family)
            if o is not None:
                parts.append(CofinitePart(part.family, part.excluded | o.excluded))
        return SubsetDesc(expl, parts)

    def sorted_explicit(self):
        return sorted(self.explicit, key=point_key)

    def __str__(self):
        bits = [str(p) for p in self.sorted_explicit()]
        for part in sorted(self.cofinite, key=lambda c: c.family):
            ex = ",".join(str(i) for i in sorted(part.excluded, key=_index_key))
            bits.append(f"cofinite-of {part.family}" + (f" except {ex}" if ex else ""))
        return "{" + "; ".join(bits) + "}"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# element rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ElementRule:
    """Vanishing behavior of one element symbol within an indexed family."""

    kind: str  # "finite" or "cofinite"
    indices: frozenset = frozenset()  # vanishing indices, or excluded ones
    at_generic: bool = False

    def vanishing(self, family: str) -> SubsetDesc:
        if self.kind == "finite":
            pts = [FamPt(family, i) for i in self.indices]
            if self.at_generic:
                pts.append(FamGeneric(family))
            return SubsetDesc(pts)
        if self.kind == "cofinite":
            s = SubsetDesc.cofinite_in(family, self.indices)
            if self.at_generic:
                s = s.union(SubsetDesc.of(FamGeneric(family)))
            return s
        raise SpectraError(f"bad element rule kind {self.kind!r}")


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

class SpectrumModel:
    def contains_point(self, p: PointRef) -> bool:
        raise NotImplementedError

    def leq(self, p: PointRef, q: PointRef) -> bool:
        """p leq q means p is contained in q."""
        raise NotImplementedError

    def all_points(self) -> Optional[list]:
        """All points when the model is finite, else None."""
        return None

    def whole(self) -> SubsetDesc:
        raise NotImplementedError

    def families(self) -> dict:
        return {}

    def vanishing_set(self, sym: str) -> SubsetDesc:
        raise NotImplementedError

    def up_of_point(self, p: PointRef) -> SubsetDesc:
        raise NotImplementedError

    def down_of_point(self, p: PointRef) -> SubsetDesc:
        raise NotImplementedError

    def sample_points(self) -> list:
        """Finite, deterministic point sample used by witness checks."""
        pts = self.all_points()
        if pts is not None:
            return sorted(pts, key=point_key)
        out = []
        for name, fam in self.families().items():
            out.append(FamGeneric(name))
            for ix in fam.sample_indices:
                out.append(FamPt(name, ix))
        return sorted(set(out), key=point_key)


class FinitePoset(SpectrumModel):
    """Finitely many points with containment order and tabulated elements."""

    def __init__(self, points: Iterable[str], leq_pairs: Iterable[tuple] = (),
                 elements: Mapping[str, Iterable[str]] = ()):
        self.points = frozenset(points)
        rel = {(p, p) for p in self.points}
        for a, b in leq_pairs:
            if a not in self.points or b not in self.points:
                raise SpectraError(f"relation over unknown point: {(a, b)}")
            rel.add((a, b))
        # reflexive-transitive closure; reject cycles
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        for a, b in rel:
            if a != b and (b, a) in rel:
                raise SpectraError(f"leq is not antisymmetric: {a} <> {b}")
        self._leq = frozenset(rel)
        elems = {}
        for sym, vanish in dict(elements).items():
            vs = frozenset(vanish)
            for p in vs:
                for q in self.points:
                    if (p, q) in self._leq and q not in vs:
                        raise SpectraError(f"vanishing set of {sym!r} is not up-closed")
            elems[sym] = vs
        self.elements = elems

    def contains_point(self, p):
        return isinstance(p, PosetPt) and p.pid in self.points

    def leq(self, p, q):
        if not (self.contains_point(p) and self.contains_point(q)):
            raise SpectraError(f"point not in model: {p} / {q}")
        return (p.pid, q.pid) in self._leq

    def all_points(self):
        return [PosetPt(p) for p in self.points]

    def whole(self):
        return SubsetDesc(self.all_points())

    def vanishing_set(self, sym):
        if sym not in self.elements:
            raise SpectraError(f"unknown element symbol {sym!r}")
        return SubsetDesc(PosetPt(p) for p in self.elements[sym])

    def up_of_point(self, p):
        return SubsetDesc(PosetPt(q) for q in self.points if (p.pid, q) in self._leq)

    def down_of_point(self, p):
        return SubsetDesc(PosetPt(q) for q in self.points if (q, p.pid) in self._leq)


class FiniteCharacterFamily(SpectrumModel):
    """A limit point plus a countably indexed antichain of closed points.

    ``elements`` maps symbols to ElementRules; a callable ``resolver`` may be
    supplied instead for rule-described alphabets (e.g. integers with their
    prime divisors).  ``finite_character`` asserts that every nonzero symbol
    has a finite vanishing set; the essential-not-PvMD construction sets it
    to False and uses the limit point for the common nonprincipal
    ultrafilter limit.
    """

    def __init__(self, name: str, generic_id: str = "generic",
                 elements: Mapping[str, ElementRule] = (),
                 resolver: Optional[Callable[[str], ElementRule]] = None,
                 finite_character: bool = True,
                 sample_indices: Sequence = (0, 1, 2, 3, 5)):
        self.name = name
        self.generic_id = generic_id
        self.elements = dict(elements)
        self.resolver = resolver
        self.finite_character = finite_character
        self.sample_indices = tuple(sample_indices)
        if finite_character:
            for sym, rule in self.elements.items():
                if rule.kind != "finite" and sym != "0":
                    raise SpectraError(
                        f"finite-character family {name!r}: element {sym!r} has "
                        f"infinite vanishing set")

    @property
    def generic(self) -> FamGeneric:
        return FamGeneric(self.name)

    def contains_point(self, p):
        if isinstance(p, FamGeneric):
            return p.family == self.name
        return isinstance(p, FamPt) and p.family == self.name

    def leq(self, p, q):
        if not (self.contains_point(p) and self.contains_point(q)):
            raise SpectraError(f"point not in model: {p} / {q}")
        if isinstance(p, FamGeneric):
            return True
        return p == q

    def whole(self):
        return SubsetDesc.cofinite_in(self.name).union(SubsetDesc.of(self.generic))

    def families(self):
        return {self.name: self}

    def _rule(self, sym: str) -> ElementRule:
        if sym in self.elements:
            return self.elements[sym]
        if self.resolver is not None:
            return self.resolver(sym)
        raise SpectraError(f"unknown element symbol {sym!r} in family {self.name!r}")

    def vanishing_set(self, sym):
        return self._rule(sym).vanishing(self.name)

    def up_of_point(self, p):
        if isinstance(p, FamGeneric):
            return self.whole()
        return SubsetDesc.of(p)

    def down_of_point(self, p):
        if isinstance(p, FamGeneric):
            return SubsetDesc.of(p)
        return SubsetDesc.of(p, self.generic)


class DisjointUnion(SpectrumModel):
    """Finitely many component models with disjoint point namespaces."""

    def __init__(self, components: Sequence[SpectrumModel]):
        self.components = tuple(components)
        names = [n for c in self.components for n in c.families()]
        if len(names) != len(set(names)):
            raise SpectraError("family names must be unique across components")

    def component_of(self, p):
        for c in self.components:
            if c.contains_point(p):
                return c
        raise SpectraError(f"point not in model: {p}")

    def contains_point(self, p):
        return any(c.contains_point(p) for c in self.components)

    def leq(self, p, q):
        cp, cq = self.component_of(p), self.component_of(q)
        return cp is cq and cp.leq(p, q)

    def all_points(self):
        out = []
        for c in self.components:
            pts = c.all_points()
            if pts is None:
                return None
            out.extend(pts)
        return out

    def whole(self):
        s = SubsetDesc.empty()
        for c in self.components:
            s = s.union(c.whole())
        return s

    def families(self):
        out = {}
        for c in self.components:
            out.update(c.families())
        return out

    def vanishing_set(self, sym):
        # a symbol is resolved in every component that knows it
        out = SubsetDesc.empty()
        found = False
        for c in self.components:
            try:
                out = out.union(c.vanishing_set(sym))
                found = True
            except SpectraError:
                continue
        if not found:
            raise SpectraError(f"unknown element symbol {sym!r}")
        return out

    def up_of_point(self, p):
        return self.component_of(p).up_of_point(p)

    def down_of_point(self, p):
        return self.component_of(p).down_of_point(p)

    def sample_points(self):
        out = []
        for c in self.components:
            out.extend(c.sample_points())
        return sorted(set(out), key=point_key)


class OrdinalSum(SpectrumModel):
    """A finite chain of points placed strictly below every point of a top
    model (the fiber picture of a pullback along a valuation domain).

    ``bottom`` lists the chain ids from smallest to largest prime; the glue
    point (the maximal ideal of the valuation domain) is the top model's
    limit/generic point and is not repeated in the chain.
    """

    def __init__(self, bottom: Sequence[str], top: SpectrumModel):
        self.bottom = tuple(bottom)
        self.top = top
        for pid in self.bottom:
            if top.contains_point(PosetPt(pid)):
                raise SpectraError(f"chain id {pid!r} collides with top model")

    def contains_point(self, p):
        if isinstance(p, PosetPt) and p.pid in self.bottom:
            return True
        return self.top.contains_point(p)

    def _chain_pos(self, p):
        if isinstance(p, PosetPt) and p.pid in self.bottom:
            return self.bottom.index(p.pid)
        return None

    def leq(self, p, q):
        ip, iq = self._chain_pos(p), self._chain_pos(q)
        if ip is not None and iq is not None:
            return ip <= iq
        if ip is not None:
            return True  # chain below everything in the top
        if iq is not None:
            return False
        return self.top.leq(p, q)

    def all_points(self):
        pts = self.top.all_points()
        if pts is None:
            return None
        return [PosetPt(b) for b in self.bottom] + pts

    def whole(self):
        return SubsetDesc(PosetPt(b) for b in self.bottom).union(self.top.whole())

    def families(self):
        return self.top.families()

    def vanishing_set(self, sym):
        return self.top.vanishing_set(sym)

    def up_of_point(self, p):
        i = self._chain_pos(p)
        if i is None:
            return self.top.up_of_point(p)
        chain = SubsetDesc(PosetPt(b) for b in self.bottom[i:])
        return chain.union(self.top.whole())

    def down_of_point(self, p):
        i = self._chain_pos(p)
        if i is not None:
            return SubsetDesc(PosetPt(b) for b in self.bottom[: i + 1])
        below = self.top.down_of_point(p)
        return below.union(SubsetDesc(PosetPt(b) for b in self.bottom))

    def sample_points(self):
        pts = [PosetPt(b) for b in self.bottom] + self.top.sample_points()
        return sorted(set(pts), key=point_key)


# ---------------------------------------------------------------------------
# ultrafilters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Principal:
    point: PointRef

    def __str__(self):
        return f"principal({self.point})"


@dataclass(frozen=True)
class NonprincipalClass:
    """Any nonprincipal ultrafilter on an infinite subset of the family; all
    of them share the same limit point in a representable model."""

    family: str

    def __str__(self):
        return f"nonprincipal({self.family})"


UltrafilterDesc = Union[Principal, NonprincipalClass]


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def _check_subset(model: SpectrumModel, Y: SubsetDesc):
    for p in Y.explicit:
        if not model.contains_point(p):
            raise SpectraError(f"point {p} not in model")
    fams = model.families()
    for part in Y.cofinite:
        if part.family not in fams:
            raise SpectraError(f"unknown family {part.family!r}")


def zariski_closure(model: SpectrumModel, Y: SubsetDesc) -> SubsetDesc:
    """Smallest Zariski-closed superset of Y.

    For explicit points this is the up-closure under containment.  A cofinite
    part of an indexed family only fits inside V((0)), so it closes up to the
    whole family including the limit point (which keeps Zariski-closed sets
    patch-closed)."""
    _check_subset(model, Y)
    out = SubsetDesc.empty()
    for part in Y.cofinite:
        out = out.union(SubsetDesc.cofinite_in(part.family))
        out = out.union(SubsetDesc.of(FamGeneric(part.family)))
    for p in Y.explicit:
        out = out.union(model.up_of_point(p))
    return out


def generization(model: SpectrumModel, Y: SubsetDesc) -> SubsetDesc:
    """Down-closure of Y under containment."""
    _check_subset(model, Y)
    out = SubsetDesc.empty()
    for p in Y.explicit:
        out = out.union(model.down_of_point(p))
    fams = model.families()
    for part in Y.cofinite:
        out = out.union(SubsetDesc(cofinite=(part,)))
        out = out.union(generization(model, SubsetDesc.of(FamPt(part.family, _witness_index(part)))))
    return out


def _witness_index(part: CofinitePart):
    # any index outside the exclusions; only used to borrow the down-set shape
    fresh = 0
    seen = {i for i in part.excluded if isinstance(i, int)}
    while fresh in seen:
        fresh += 1
    return fresh


def ultrafilter_limit(model: SpectrumModel, Y: SubsetDesc, U: UltrafilterDesc) -> PointRef:
    """Limit point of Y along the ultrafilter U."""
    _check_subset(model, Y)
    if isinstance(U, Principal):
        if U.point not in Y:
            raise SpectraError(f"principal ultrafilter point {U.point} not in Y")
        return U.point
    part = Y.part_for(U.family)
    if part is None:
        raise SpectraError(
            f"nonprincipal ultrafilters need an infinite subset of {U.family!r}")
    return FamGeneric(U.family)


def patch_closure(model: SpectrumModel, Y: SubsetDesc) -> SubsetDesc:
    """Closure in the constructible topology: Y plus the limit of every
    representable ultrafilter class.  Finite sets are closed; an infinite
    subset of an indexed family picks up the family's limit point."""
    _check_subset(model, Y)
    out = Y
    for part in Y.cofinite:
        out = out.union(SubsetDesc.of(FamGeneric(part.family)))
    return out


def is_patch_closed(model: SpectrumModel, Y: SubsetDesc) -> bool:
    return patch_closure(model, Y) == Y


def enumerate_limits(model: SpectrumModel, Y: SubsetDesc) -> SubsetDesc:
    """The set {Y_U : U representable ultrafilter on Y} -- principal ones for
    every explicit point and for witnesses of cofinite parts, plus the
    nonprincipal class where Y is infinite in a family."""
    out = SubsetDesc.empty()
    for p in Y.explicit:
        out = out.union(SubsetDesc.of(ultrafilter_limit(model, Y, Principal(p))))
    for part in Y.cofinite:
        out = out.union(SubsetDesc(cofinite=(part,)))
        out = out.union(SubsetDesc.of(ultrafilter_limit(model, Y, NonprincipalClass(part.family))))
    return out


def extend_fip(model: SpectrumModel, Y: SubsetDesc,
               F: Sequence[SubsetDesc]) -> UltrafilterDesc:
    """Extend a family of subsets of Y with the finite intersection property
    to a representable ultrafilter containing it.

    Deterministic: a finite total intersection yields the principal
    ultrafilter at its least point; an infinite one yields the nonprincipal
    class on the (lexicographically least) surviving family.
    """
    _check_subset(model, Y)
    acc = Y
    for S in F:
        acc = acc.intersect(S)
        if acc.is_empty:
            raise FIPError("empty finite intersection found")
    if acc.is_infinite:
        fam = min(part.family for part in acc.cofinite)
        return NonprincipalClass(fam)
    return Principal(min(acc.explicit, key=point_key))


def is_quasi_compact(model: SpectrumModel, Y: SubsetDesc) -> bool:
    """Zariski quasi-compactness for the supported model variants.

    Finite posets are trivially compact.  In an indexed family every basic
    open D(f) omits only the finite vanishing set of f, so any subset is
    covered by two basic opens; the finite-omission rule is verified on the
    model's tabulated alphabet instead of enumerating covers.
    """
    _check_subset(model, Y)
    if isinstance(model, FinitePoset):
        return True
    if isinstance(model, FiniteCharacterFamily):
        for sym, rule in model.elements.items():
            if sym != "0" and rule.kind != "finite":
                return False
        return True
    raise ModelUnsupportedError(
        f"quasi-compactness is not decided for {type(model).__name__}")


# -- constructible basic sets ----------------------------------------------

def complement(model: SpectrumModel, S: SubsetDesc) -> SubsetDesc:
    _check_subset(model, S)
    out = SubsetDesc.empty()
    pts = model.all_points()
    fams = model.families()
    if pts is not None:
        out = out.union(SubsetDesc(p for p in pts if p not in S))
        return out
    # finite poset components of a mixed model
    finite_part = [p for p in _finite_points(model)]
    out = out.union(SubsetDesc(p for p in finite_part if p not in S))
    for name in fams:
        part = S.part_for(name)
        if part is not None:
            extra = [FamPt(name, i) for i in part.excluded if FamPt(name, i) not in S]
            out = out.union(SubsetDesc(extra))
        else:
            present = {p.index for p in S.explicit
                       if isinstance(p, FamPt) and p.family == name}
            out = out.union(SubsetDesc.cofinite_in(name, present))
        if FamGeneric(name) not in S:
            out = out.union(SubsetDesc.of(FamGeneric(name)))
    return out


def _finite_points(model: SpectrumModel):
    if isinstance(model, FinitePoset):
        return model.all_points()
    if isinstance(model, DisjointUnion):
        out = []
        for c in model.components:
            out.extend(_finite_points(c))
        return out
    if isinstance(model, OrdinalSum):
        return [PosetPt(b) for b in model.bottom] + _finite_points(model.top)
    return []


@dataclass(frozen=True)
class ConstructibleBasicSet:
    """D(f) intersected with V of a finitely generated ideal, both given by
    element symbols ("1" and the empty ideal are the whole space)."""

    f: str = "1"
    ideal: tuple = ()

    def resolve(self, model: SpectrumModel) -> SubsetDesc:
        if self.f in ("1", ""):
            out = model.whole()
        else:
            out = complement(model, model.vanishing_set(self.f))
        for sym in self.ideal:
            out = out.intersect(model.vanishing_set(sym))
        return out

    def __str__(self):
        v = ",".join(self.ideal) if self.ideal else "0"
        return f"D({self.f})&V({v})"


# -- locally finite unions --------------------------------------------------

class IndexedSingletons:
    """The indexed family of closed sets {m_j} for j ranging over a
    FiniteCharacterFamily (each member is a one-point, hence patch-closed,
    set)."""

    def __init__(self, family: str):
        self.family = family

    def member(self, ix) -> SubsetDesc:
        return SubsetDesc.of(FamPt(self.family, ix))

    def members_meeting(self, S: SubsetDesc):
        """Indices whose member meets S, or None when infinitely many do."""
        if S.part_for(self.family) is not None:
            return None
        return sorted({p.index for p in S.explicit
                       if isinstance(p, FamPt) and p.family == self.family},
                      key=_index_key)

    def union(self) -> SubsetDesc:
        return SubsetDesc.cofinite_in(self.family)


def locally_finite_union(model: SpectrumModel,
                         members,
                         witness: Callable[[PointRef], ConstructibleBasicSet],
                         checkpoints: Optional[Iterable[PointRef]] = None):
    """Union of a family of patch-closed sets, certified closed by a
    local-finiteness witness.

    ``members`` is either a finite sequence of SubsetDescs or an
    IndexedSingletons family.  The witness assigns each checkpoint a
    constructible neighborhood; it must contain the point and meet only
    finitely many members.  Failing points are reported together (the
    behavior at a family's limit point is exactly the reported, not guessed,
    case)."""
    indexed = isinstance(members, IndexedSingletons)
    if not indexed:
        members = list(members)
        for i, C in enumerate(members):
            if not is_patch_closed(model, C):
                raise SpectraError(f"member {i} is not patch-closed: {C}")
    pts = list(checkpoints) if checkpoints is not None else model.sample_points()
    failures = []
    trace = {}
    for p in pts:
        nbhd = witness(p).resolve(model)
        if p not in nbhd:
            failures.append(p)
            trace[str(p)] = "witness neighborhood does not contain the point"
            continue
        if indexed:
            meeting = members.members_meeting(nbhd)
            if meeting is None:
                failures.append(p)
                trace[str(p)] = "neighborhood meets infinitely many members"
            else:
                trace[str(p)] = f"meets members {meeting}"
        else:
            meeting = [i for i, C in enumerate(members)
                       if not nbhd.intersect(C).is_empty]
            trace[str(p)] = f"meets members {meeting}"
    if failures:
        raise LocalFinitenessError(failures)
    if indexed:
        union = members.union()
    else:
        union = SubsetDesc.empty()
        for C in members:
            union = union.union(C)
    return union, {"closed": True, "witness_trace": trace}


# -- spectral maps ----------------------------------------------------------

class SpectralMap:
    """A point map between spectrum models that is monotone and pulls
    vanishing sets back to vanishing sets (hence continuous and closed for
    the patch topologies).

    For indexed families the map is described index-wise: ``index_map`` sends
    source indices to target indices and ``fibers`` lists, for each target
    index, its finitely many source preimages.
    """

    def __init__(self, source: SpectrumModel, target: SpectrumModel,
                 point_map: Callable[[PointRef], PointRef],
                 family_pairs: Mapping[str, str] = (),
                 index_map: Optional[Callable] = None,
                 fibers: Optional[Callable] = None,
                 element_pullback: Optional[Callable[[str], str]] = None):
        self.source = source
        self.target = target
        self.point_map = point_map
        self.family_pairs = dict(family_pairs)
        self.index_map = index_map
        self.fibers = fibers
        self.element_pullback = element_pullback
        self._validate()

    def _validate(self):
        pts = self.source.sample_points()
        for p in pts:
            q = self.point_map(p)
            if not self.target.contains_point(q):
                raise SpectraError(f"image point {q} not in target model")
        for p in pts:
            for q in pts:
                try:
                    if self.source.leq(p, q) and not self.target.leq(self.point_map(p), self.point_map(q)):
                        raise SpectraError(f"map not monotone at {p} <= {q}")
                except ModelUnsupportedError:
                    continue
        if self.element_pullback is not None:
            self._validate_pullback()

    def _validate_pullback(self):
        tgt_syms = _tabulated_symbols(self.target)
        for sym in tgt_syms:
            src_sym = self.element_pullback(sym)
            if src_sym is None:
                continue
            want = self.preimage(self.target.vanishing_set(sym))
            got = self.source.vanishing_set(src_sym)
            if want != got:
                raise SpectraError(
                    f"pullback of V({sym}) is {want}, but V({src_sym}) = {got}")

    def preimage(self, S: SubsetDesc) -> SubsetDesc:
        _check_subset(self.target, S)
        out = SubsetDesc.empty()
        src_pts = self.source.all_points()
        for q in S.explicit:
            if src_pts is not None:
                out = out.union(SubsetDesc(p for p in src_pts if self.point_map(p) == q))
            elif isinstance(q, FamGeneric):
                for sf, tf in self.family_pairs.items():
                    if tf == q.family:
                        out = out.union(SubsetDesc.of(FamGeneric(sf)))
            elif isinstance(q, FamPt):
                if self.fibers is None:
                    raise SpectraError("need fibers to compute preimages of indexed points")
                for sf, tf in self.family_pairs.items():
                    if tf == q.family:
                        out = out.union(SubsetDesc(FamPt(sf, i) for i in self.fibers(q.index)))
            else:
                out = out.union(SubsetDesc(p for p in _finite_points(self.source)
                                           if self.point_map(p) == q))
        for part in S.cofinite:
            for sf, tf in self.family_pairs.items():
                if tf != part.family:
                    continue
                if self.fibers is None or self.index_map is None:
                    raise SpectraError("need index maps to pull back cofinite parts")
                excl = set()
                for j in part.excluded:
                    excl.update(self.fibers(j))
                out = out.union(SubsetDesc.cofinite_in(sf, excl))
        return out

    def image_patch_closed(self, S: SubsetDesc) -> SubsetDesc:
        """Image of a patch-closed set (closed maps preserve closedness)."""
        _check_subset(self.source, S)
        if not is_patch_closed(self.source, S):
            raise SpectraError("image_patch_closed expects a patch-closed set")
        out = SubsetDesc(self.point_map(p) for p in S.explicit)
        for part in S.cofinite:
            tf = self.family_pairs.get(part.family)
            if tf is None or self.index_map is None or self.fibers is None:
                raise SpectraError("need index maps to push forward cofinite parts")
            excl_t = set()
            for j in part.excluded:
                t = self.index_map(j)
                if all(i in part.excluded for i in self.fibers(t)):
                    excl_t.add(t)
            out = out.union(SubsetDesc.cofinite_in(tf, excl_t))
        return patch_closure(self.target, out)


def _tabulated_symbols(model: SpectrumModel):
    if isinstance(model, FinitePoset):
        return sorted(model.elements)
    if isinstance(model, FiniteCharacterFamily):
        return sorted(model.elements)
    if isinstance(model, DisjointUnion):
        out = []
        for c in model.components:
            out.extend(_tabulated_symbols(c))
        return out
    if isinstance(model, OrdinalSum):
        return _tabulated_symbols(model.top)
    return []


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def _parse_index(tok: str):
    return int(tok) if tok.lstrip("-").isdigit() else tok


def parse_pointref(tok: str) -> PointRef:
    if ":" in tok:
        fam, ix = tok.split(":", 1)
        if ix == "generic":
            return FamGeneric(fam)
        return FamPt(fam, _parse_index(ix))
    return PosetPt(tok)


def load_model(text: str) -> SpectrumModel:
    """Line-oriented model format: ``point``, ``le``, ``elem .. vanishes``,
    ``family .. generic``, ``elem .. vanishes-indices``."""
    points, leq_pairs, poset_elems = [], [], {}
    family = None
    fam_elems: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "point":
            points.append(toks[1])
        elif toks[0] == "le":
            leq_pairs.append((toks[1], toks[2]))
        elif toks[0] == "family":
            if toks[2] != "generic" and len(toks) < 4:
                raise SpectraError(f"bad family line: {line!r}")
            family = (toks[1], toks[3] if len(toks) > 3 else "generic")
        elif toks[0] == "elem":
            sym = toks[1]
            if toks[2] == "vanishes":
                poset_elems[sym] = toks[3:]
            elif toks[2] == "vanishes-indices":
                fam_elems[sym] = ElementRule("finite",
                                             frozenset(_parse_index(t) for t in toks[3:]))
            else:
                raise SpectraError(f"bad elem line: {line!r}")
        else:
            raise SpectraError(f"unknown directive {toks[0]!r}")
    parts = []
    if points:
        parts.append(FinitePoset(points, leq_pairs, poset_elems))
    if family is not None:
        parts.append(FiniteCharacterFamily(family[0], family[1], fam_elems))
    elif fam_elems:
        raise SpectraError("vanishes-indices without a family declaration")
    if not parts:
        raise SpectraError("empty model file")
    return parts[0] if len(parts) == 1 else DisjointUnion(parts)


def load_subset(text: str) -> SubsetDesc:
    """Subset format: ``in <pointref>...`` and
    ``cofinite-of <family> [except <j>...]`` lines."""
    out = SubsetDesc.empty()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "in":
            out = out.union(SubsetDesc(parse_pointref(t) for t in toks[1:]))
        elif toks[0] == "cofinite-of":
            fam = toks[1]
            excl = ()
            if len(toks) > 2:
                if toks[2] != "except":
                    raise SpectraError(f"bad subset line: {line!r}")
                excl = tuple(_parse_index(t) for t in toks[3:])
            out = out.union(SubsetDesc.cofinite_in(fam, excl))
        else:
            raise SpectraError(f"unknown directive {toks[0]!r}")
    return out
