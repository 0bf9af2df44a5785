import pytest

from globrep.complexes import (
    ChainMap,
    delta,
    homology,
    mapping_cone,
    single_complex,
)
from globrep.derived import (
    DerivedError,
    compactness_table,
    dualizable_test,
    eG_split_mono,
    ihom_complex,
    nu_map,
    perfect_certificate,
    torsion_free_homology,
)
from globrep.exactlin import Matrix
from globrep.rep import (
    hom_space,
    identity_map,
    standard_e,
    tensor,
    unit_object,
)
from globrep.site import preset_site

S_1C2 = preset_site("1C2")
S_CY2 = preset_site("cyclic2")
S_EA2 = preset_site("elemab2")
S_GPD = preset_site("gpd-c2")


def counit_to_unit(site, gidx):
    e = standard_e(site, gidx)
    u = unit_object(site)
    f = hom_space(e, u)[0]
    return f.scale(1 / f.mats[gidx].entry(0, 0))


def cofiber_counit(site, gidx):
    eps = counit_to_unit(site, gidx)
    fmap = ChainMap(single_complex(eps.source), single_complex(eps.target), {0: eps})
    cone, _, _ = mapping_cone(fmap)
    return cone


def test_compactness_table_cofiber():
    c = cofiber_counit(S_CY2, S_CY2.object_index("C2"))
    table = compactness_table(c)
    assert table == {"1": 1, "C2": 0, "C4": 0}


def test_compactness_table_unit_and_delta():
    u = single_complex(unit_object(S_CY2))
    assert set(compactness_table(u).values()) == {1}
    d = delta(S_CY2, {0: standard_e(S_CY2, 1)})
    assert set(compactness_table(d).values()) == {0}


def test_torsion_free_homology_cyclic_vs_elemab():
    c = cofiber_counit(S_CY2, S_CY2.object_index("C2"))
    assert torsion_free_homology(c) is None
    c2 = cofiber_counit(S_EA2, S_EA2.object_index("C2"))
    hit = torsion_free_homology(c2)
    assert hit is not None
    n, label, vec = hit
    assert n == 1 and label == "C2^2"


def test_torsion_free_homology_generator():
    c = single_complex(standard_e(S_1C2, S_1C2.object_index("C2")))
    hit = torsion_free_homology(c)
    assert hit is not None
    assert hit[0] == 0


def test_perfect_certificate_generator():
    i4 = S_CY2.object_index("C4")
    cert = perfect_certificate(single_complex(standard_e(S_CY2, i4)))
    assert cert.generators == [("C4", 2, 0)]


def test_perfect_certificate_delta_empty():
    d = delta(S_CY2, {0: standard_e(S_CY2, 1)})
    cert = perfect_certificate(d)
    assert cert.generators == []
    assert cert.model.is_zero()


def test_perfect_certificate_cofiber_layers():
    c = cofiber_counit(S_CY2, S_CY2.object_index("C2"))
    cert = perfect_certificate(c)
    orders = sorted({S_CY2.objects[S_CY2.object_index(lbl)].order for lbl, _, _ in cert.generators})
    assert orders == [1, 2]


def test_split_mono_unit():
    site = S_1C2
    g = site.object_index("C2")
    u = unit_object(site)
    one = Matrix.from_rows([[1]])
    mono, retr = eG_split_mono(u, g, one)
    composite = retr @ mono
    assert composite.mats == identity_map(standard_e(site, g)).mats


def test_split_mono_on_generator():
    site = S_1C2
    g = site.object_index("C2")
    e = standard_e(site, g)
    from globrep.rep import torsion_free_search

    vec = torsion_free_search(e, g)
    mono, retr = eG_split_mono(e, g, vec)
    assert (retr @ mono).mats == identity_map(e).mats


def test_split_mono_on_h1_of_elemab_cofiber():
    c = cofiber_counit(S_EA2, S_EA2.object_index("C2"))
    hdata = homology(c)
    h1 = hdata[1].homology
    g = S_EA2.object_index("C2^2")
    from globrep.rep import torsion_free_search

    vec = torsion_free_search(h1, g)
    assert vec is not None
    mono, retr = eG_split_mono(h1, g, vec)
    e = standard_e(S_EA2, g)
    assert (retr @ mono).mats == identity_map(e).mats


def test_split_mono_rejects_torsion():
    site = S_1C2
    eps = counit_to_unit(site, site.object_index("C2"))
    from globrep.rep import exact_pieces

    q = exact_pieces(eps).cokernel
    with pytest.raises(DerivedError):
        eG_split_mono(q, site.object_index("1"), Matrix.from_rows([[1]]))


def test_ihom_complex_shape():
    e = standard_e(S_1C2, S_1C2.object_index("C2"))
    c = single_complex(e)
    ih, _, _ = ihom_complex(c, c)
    assert ih.lo == 0 and ih.hi == 0
    i1 = S_1C2.object_index("1")
    assert ih.term(0).dims[i1] >= 1


def test_nu_is_chain_map():
    e = standard_e(S_1C2, S_1C2.object_index("C2"))
    u = unit_object(S_1C2)
    x = single_complex(e)
    nu = nu_map(x)  # validation happens in the ChainMap constructor
    y = ChainMap(
        single_complex(e), single_complex(u),
        {0: counit_to_unit(S_1C2, S_1C2.object_index("C2"))})
    cone, _, _ = mapping_cone(y)
    from globrep.thin import thin_replacement

    t, _ = thin_replacement(cone)
    nu2 = nu_map(t)


def test_dualizable_unit():
    res = dualizable_test(single_complex(unit_object(S_1C2)))
    assert res["dualizable"] is True


def test_dualizable_generator_on_groupoid():
    res = dualizable_test(single_complex(standard_e(S_GPD, 0)))
    assert res["dualizable"] is True


def test_not_dualizable_generator_with_witness():
    e = standard_e(S_1C2, S_1C2.object_index("C2"))
    res = dualizable_test(single_complex(e))
    assert res["dualizable"] is False
    w = res["witness"]
    assert sum(w["source_homology"]["1"].values() or [0]) == 0
    assert w["target_homology"]["1"].get(0, 0) >= 1


def test_dualizable_constant_complexes():
    u = unit_object(S_1C2)
    from globrep.rep import direct_sum
    from globrep.complexes import Complex, zero_map as _zm

    two, _, _ = direct_sum([u, u])
    c = Complex(S_1C2, 0, 1, {0: u, 1: two},
                {1: __import__("globrep.rep", fromlist=["zero_map"]).zero_map(two, u)})
    res = dualizable_test(c)
    assert res["dualizable"] is True
