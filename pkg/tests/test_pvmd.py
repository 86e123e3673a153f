import pytest

from patchspec.catalog import catalog_descriptor, catalog_ids, ho_descriptor
from patchspec.pvmd import (
    DomainDescriptor,
    PointPredicate,
    PvmdError,
    Verdict,
    griffin_check,
    intersection_pvmd_check,
    localization_intersection,
    predicate_subset,
    pullback_construct,
    pvmd_check,
    pvmd_check_closure,
    pvmd_check_compact,
    pvmd_check_essential_closed,
    transfer_check,
)
from patchspec.spectra import (
    FamGeneric,
    FamPt,
    FinitePoset,
    PosetPt,
    SpectralMap,
    SubsetDesc,
    is_patch_closed,
    patch_closure,
)
from patchspec.starops import prime_factors


# -- closure criterion ------------------------------------------------------

def test_z_is_pvmd():
    v = pvmd_check_closure(catalog_descriptor("Z"))
    assert v.is_pvmd is True
    assert "z:generic" in v.certificate["closure"]


def test_zx_is_pvmd():
    assert pvmd_check_closure(catalog_descriptor("ZX")).is_pvmd is True


def test_ho_is_not_pvmd():
    v = pvmd_check_closure(catalog_descriptor("HO"))
    assert v.is_pvmd is False
    assert v.certificate["offending_point"] == "ho_mi:generic"
    assert v.certificate["offending_in_closure"]


def test_negative_certificate_is_sound():
    desc = ho_descriptor()
    v = pvmd_check_closure(desc)
    closure = patch_closure(desc.model, desc.Y)
    assert FamGeneric("ho_mi") in closure
    assert not desc.essential.holds(FamGeneric("ho_mi"))


# -- essential-closed criterion ---------------------------------------------

def test_essential_closed_z():
    assert pvmd_check_essential_closed(catalog_descriptor("Z")).is_pvmd is True


def test_essential_closed_zx():
    v = pvmd_check_essential_closed(catalog_descriptor("ZX"))
    assert v.is_pvmd is True
    assert "cofinite-of zx_h1" in v.certificate["essential_locus"]


def test_essential_closed_ho():
    v = pvmd_check_essential_closed(catalog_descriptor("HO"))
    assert v.is_pvmd is False
    assert v.certificate["offending_point"] == "ho_mi:generic"


# -- compactness criterion --------------------------------------------------

def test_compact_z():
    v = pvmd_check_compact(catalog_descriptor("Z"))
    assert v.is_pvmd is True
    assert "basic opens" in v.certificate["cover"]


def test_compact_finite_poset():
    assert pvmd_check_compact(catalog_descriptor("Zloc:2,3")).is_pvmd is True


def test_compact_ho_unsupported():
    v = pvmd_check_compact(catalog_descriptor("HO"))
    assert v.is_pvmd is None
    assert "error" in v.certificate


# -- finite-character route -------------------------------------------------

def test_griffin_z():
    v = griffin_check(catalog_descriptor("Z"))
    assert v.is_pvmd is True and v.certificate["limits_added"] == ["z:generic"]


def test_griffin_zx():
    assert griffin_check(catalog_descriptor("ZX")).is_pvmd is True


def test_griffin_finite_y():
    assert griffin_check(catalog_descriptor("Zloc:2,3")).is_pvmd is True


def test_griffin_rejects_non_finite_character():
    v = griffin_check(catalog_descriptor("HO"))
    assert v.is_pvmd is None and "finite character" in v.certificate["error"]


def test_auto_dispatch():
    assert pvmd_check(catalog_descriptor("ZX")).criterion == "griffin"
    assert pvmd_check(catalog_descriptor("HO")).criterion == "thm24"
    with pytest.raises(PvmdError):
        pvmd_check(catalog_descriptor("Z"), "thm999")


# -- criterion agreement across the catalog ---------------------------------

def test_criterion_agreement():
    for cid in catalog_ids():
        desc = catalog_descriptor(cid)
        verdicts = [f(desc) for f in (pvmd_check_closure,
                                      pvmd_check_essential_closed,
                                      pvmd_check_compact, griffin_check)]
        answered = {v.is_pvmd for v in verdicts if v.is_pvmd is not None}
        assert len(answered) == 1, f"{cid}: criteria disagree: {verdicts}"


def test_pruefer_flag_implies_pvmd():
    for cid in catalog_ids():
        desc = catalog_descriptor(cid)
        if desc.pruefer:
            assert pvmd_check_closure(desc).is_pvmd is True


# -- descriptor validation --------------------------------------------------

def test_descriptor_rejects_nonessential_representation():
    model = FinitePoset(["a", "b"], [("a", "b")])
    bad = PointPredicate(default=True, explicit={PosetPt("b"): False})
    with pytest.raises(PvmdError):
        DomainDescriptor("bad", model, SubsetDesc.of(PosetPt("b")),
                         bad, PointPredicate(default=True))


def test_descriptor_rejects_essential_outside_tspec():
    model = FinitePoset(["a"])
    with pytest.raises(PvmdError):
        DomainDescriptor("bad", model, SubsetDesc.of(PosetPt("a")),
                         PointPredicate(default=True),
                         PointPredicate(default=False))


def test_predicate_subset_roundtrip():
    desc = catalog_descriptor("ZX")
    E = predicate_subset(desc.model, desc.essential)
    assert FamPt("zx_h1", 2) in E and FamGeneric("zx_h1") in E
    assert PosetPt("(2,X)") not in E
    assert is_patch_closed(desc.model, E)


# -- pullback ---------------------------------------------------------------

def test_pullback_over_z():
    desc = pullback_construct(catalog_descriptor("Z"))
    assert desc.name == "VD+Z"
    assert PosetPt("vq0") in desc.Y and FamGeneric("z") in desc.Y
    assert pvmd_check_closure(desc).is_pvmd is True


def test_pullback_over_field():
    field = DomainDescriptor("K", FinitePoset(["(0)"]),
                             SubsetDesc.of(PosetPt("(0)")),
                             PointPredicate(default=True),
                             PointPredicate(default=True), pruefer=True)
    desc = pullback_construct(field, chain_len=1)
    assert pvmd_check_closure(desc).is_pvmd is True


def test_pullback_rank_two_chain():
    desc = pullback_construct(catalog_descriptor("Z"), chain_len=2)
    assert desc.model.leq(PosetPt("vq0"), PosetPt("vq1"))
    assert pvmd_check_closure(desc).is_pvmd is True


def test_pullback_requires_pvmd_top():
    with pytest.raises(PvmdError):
        pullback_construct(catalog_descriptor("HO"))


def test_pullback_preserves_verdict_many():
    # generated (chain, top) pairs: the construction always stays PvMD
    count = 0
    for top_id in ("Z", "Zloc:2,3", "Zinv:5", "QX", "ZX"):
        for chain_len in (1, 2, 3, 4):
            desc = pullback_construct(catalog_descriptor(top_id), chain_len)
            assert pvmd_check_closure(desc).is_pvmd is True
            count += 1
    assert count == 20


# -- transfer ---------------------------------------------------------------

def zi_to_z_map(zi_model, z_model):
    def fibers(p):
        return (f"{p}.0", f"{p}.1") if p % 4 == 1 else (f"{p}.0",)

    def point_map(q):
        if isinstance(q, FamGeneric):
            return FamGeneric("z")
        return FamPt("z", int(str(q.index).split(".")[0]))

    return SpectralMap(zi_model, z_model, point_map, {"zi": "z"},
                       index_map=lambda i: int(str(i).split(".")[0]),
                       fibers=fibers)


def test_transfer_zi_over_z():
    A = catalog_descriptor("Z")
    B = catalog_descriptor("Zi")
    v = transfer_check(A, B, zi_to_z_map(B.model, A.model))
    assert v.is_pvmd is True
    assert "t-Spec(Z)" in v.certificate["containment"]


def test_transfer_identity():
    A = catalog_descriptor("Z")
    fams = {"z": "z"}
    ident = SpectralMap(A.model, A.model, lambda p: p, fams,
                        index_map=lambda i: i, fibers=lambda i: (i,))
    assert transfer_check(A, A, ident).is_pvmd is True


def test_transfer_rejects_bad_center():
    A = catalog_descriptor("ZX")
    spot = FinitePoset(["m"])
    B = DomainDescriptor("B", spot, SubsetDesc.of(PosetPt("m")),
                         PointPredicate(default=True),
                         PointPredicate(default=True))
    to_max = SpectralMap(spot, A.model, lambda p: PosetPt("(2,X)"))
    with pytest.raises(PvmdError, match="not a t-prime"):
        transfer_check(A, B, to_max)


# -- localization intersection ----------------------------------------------

def test_localization_intersection_semilocal():
    A = catalog_descriptor("Z")
    X = SubsetDesc.of(FamPt("z", 2), FamPt("z", 3))
    B, v = localization_intersection(A, X)
    assert v.is_pvmd is True
    assert B.Y == X


def test_localization_intersection_field():
    A = catalog_descriptor("Z")
    _, v = localization_intersection(A, SubsetDesc.of(FamGeneric("z")))
    assert v.is_pvmd is True


def test_localization_intersection_rejects_non_t_prime():
    A = catalog_descriptor("ZX")
    with pytest.raises(PvmdError, match="not a t-prime"):
        localization_intersection(A, SubsetDesc.of(PosetPt("(2,X)")))


# -- intersection theorems --------------------------------------------------

def zp_part(A, p):
    return DomainDescriptor(f"Z_({p})", A.model, SubsetDesc.of(FamPt("z", p)),
                            A.essential, A.t_spec, pruefer=True)


def test_finite_intersection_z2_z3():
    A = catalog_descriptor("Z")
    parts = [zp_part(A, 2), zp_part(A, 3)]
    v = intersection_pvmd_check(parts, ["DVR", "DVR"])
    assert v.is_pvmd is True and v.criterion == "cor215"
    assert v.certificate["locally_finite"]["closed"]


def test_finite_intersection_requires_witness():
    A = catalog_descriptor("Z")
    with pytest.raises(PvmdError, match="witness"):
        intersection_pvmd_check([zp_part(A, 2)], [])


def test_finite_intersection_rejects_non_pvmd_part():
    A = catalog_descriptor("Z")
    ho = catalog_descriptor("HO")
    with pytest.raises(PvmdError):
        intersection_pvmd_check([ho], ["claimed"])


def test_indexed_intersection_all_zp():
    A = catalog_descriptor("Z")

    def data(p):
        if isinstance(p, FamPt):
            return ("1", (str(p.index),))
        return ("1", ("0",))  # at the limit: V(0), reported only

    v = intersection_pvmd_check(A, ["DVRs"], finiteness_data=data)
    assert v.is_pvmd is True and v.criterion == "thm214"
    assert "fails at the limit point" in v.certificate["limit_point"]


def test_indexed_intersection_bad_data():
    A = catalog_descriptor("Z")
    with pytest.raises(PvmdError, match="finiteness data fails"):
        intersection_pvmd_check(A, ["DVRs"],
                                finiteness_data=lambda p: ("1", ("0",)))


def test_indexed_intersection_f_reading_note():
    A = catalog_descriptor("Z")

    def data(p):
        if isinstance(p, FamPt):
            # non-unit f: D(f) & V(p) still isolates the one center
            q = 3 if p.index == 2 else 2
            return (str(q), (str(p.index),))
        return ("1", ("0",))

    v = intersection_pvmd_check(A, ["DVRs"], finiteness_data=data)
    assert v.is_pvmd is True
    assert "readings differ" in v.certificate["note"]


# -- verdict plumbing -------------------------------------------------------

def test_exit_codes():
    assert Verdict(True, "thm24", {}).exit_code == 0
    assert Verdict(False, "thm24", {}).exit_code == 1
    assert Verdict(None, "cor27", {}).exit_code == 2


def test_verdict_json_shape():
    v = pvmd_check_closure(catalog_descriptor("Z"))
    j = v.to_json()
    assert set(j) == {"is_pvmd", "criterion", "certificate"}
