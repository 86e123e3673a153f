"""Ready-made domain descriptors for the catalog, keyed by CLI identifier."""

from __future__ import annotations

from .ho import HOConfig, ho_model, ho_representation
from .pvmd import DomainDescriptor, PointPredicate, pullback_construct
from .spectra import PosetPt, SubsetDesc
from .starops import (
    GaussianZi,
    IntegersZ,
    LocalizedZ,
    PolyQ,
    PolyZX,
    StarOpsError,
    ZPlusXQX,
    domain_by_id,
)


def _all_true():
    return PointPredicate(default=True)


def _z_descriptor() -> DomainDescriptor:
    dom = IntegersZ()
    return DomainDescriptor(
        "Z", dom.spectrum(), SubsetDesc.cofinite_in("z"),
        _all_true(), _all_true(), catalog=dom,
        t_finite_character=True, pruefer=True, krull_type=True)


def _zloc_descriptor(dom: LocalizedZ) -> DomainDescriptor:
    model = dom.spectrum()
    if dom.keep is not None:
        Y = SubsetDesc(PosetPt(f"({p})") for p in sorted(dom.keep))
    else:
        Y = SubsetDesc.cofinite_in(dom.name)
    return DomainDescriptor(dom.name, model, Y, _all_true(), _all_true(),
                            catalog=dom, t_finite_character=True,
                            pruefer=True, krull_type=True)


def _qx_descriptor() -> DomainDescriptor:
    dom = PolyQ()
    return DomainDescriptor(
        "QX", dom.spectrum(), SubsetDesc.cofinite_in("qx"),
        _all_true(), _all_true(), catalog=dom,
        t_finite_character=True, pruefer=True, krull_type=True)


def _zx_descriptor() -> DomainDescriptor:
    dom = PolyZX()
    # essential/t-prime locus: the height-one family and its limit, but not
    # the tabulated height-two maximals (which live in the poset block)
    locus = PointPredicate(default=False,
                           families={"zx_h1": True},
                           generics={"zx_h1": True})
    return DomainDescriptor(
        "ZX", dom.spectrum(), SubsetDesc.cofinite_in("zx_h1"),
        locus, locus, catalog=dom, t_finite_character=True, krull_type=True)


def _zi_descriptor() -> DomainDescriptor:
    dom = GaussianZi()
    return DomainDescriptor(
        "Zi", dom.spectrum(), SubsetDesc.cofinite_in("zi"),
        _all_true(), _all_true(), catalog=dom,
        t_finite_character=True, pruefer=True, krull_type=True)


def _zxq_descriptor() -> DomainDescriptor:
    dom = ZPlusXQX()
    return DomainDescriptor(
        "Z+XQX", dom.spectrum(), SubsetDesc.cofinite_in("zxq"),
        _all_true(), _all_true(), catalog=dom,
        t_finite_character=False, pruefer=True)


def ho_descriptor(level: int = 4) -> DomainDescriptor:
    config = HOConfig(level)
    essential = PointPredicate(default=True, generics={"ho_mi": False})
    t_spec = PointPredicate(default=True, generics={"ho_mi": False})
    return DomainDescriptor(
        "HO", ho_model(config), ho_representation(), essential, t_spec,
        t_finite_character=False)


_BUILDERS = {
    "Z": _z_descriptor,
    "QX": _qx_descriptor,
    "Q[X]": _qx_descriptor,
    "ZX": _zx_descriptor,
    "Z[X]": _zx_descriptor,
    "Zi": _zi_descriptor,
    "Z+XQX": _zxq_descriptor,
    "HO": ho_descriptor,
}


def catalog_ids():
    return ["Z", "Zloc:2,3", "Zinv:5", "QX", "ZX", "Zi", "Z+XQX", "VD+Z", "HO"]


def catalog_descriptor(cid: str) -> DomainDescriptor:
    cid = cid.strip()
    if cid in _BUILDERS:
        return _BUILDERS[cid]()
    if cid.startswith(("Zloc:", "Zinv:")):
        return _zloc_descriptor(domain_by_id(cid))
    if cid.startswith("VD+"):
        return pullback_construct(catalog_descriptor(cid[3:]))
    raise StarOpsError(f"unknown catalog domain {cid!r}")
