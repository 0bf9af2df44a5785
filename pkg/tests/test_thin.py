import pytest

from globrep.complexes import (
    ChainMap,
    Complex,
    delta,
    direct_sum_complex,
    homology_dims,
    is_quasi_iso,
    is_thin,
    mapping_cone,
    single_complex,
    tensor_complex,
)
from globrep.rep import hom_space, identity_map, standard_e, unit_object
from globrep.resolutions import p_total
from globrep.site import preset_site
from globrep.thin import (
    ThinError,
    compare_thin_replacements,
    thin_iso,
    thin_replacement,
    thin_split,
)

S_1C2 = preset_site("1C2")
S_CY2 = preset_site("cyclic2")
S_EA2 = preset_site("elemab2")


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


def test_thin_split_already_thin():
    e = standard_e(S_1C2, 1)
    c = single_complex(e)
    dec = thin_split(c)
    assert dec.contractible_part.is_zero()
    assert dec.thin_part.dims_table() == c.dims_table()


def test_thin_split_delta_is_fully_contractible():
    e = standard_e(S_CY2, 1)
    d = delta(S_CY2, {0: e})
    dec = thin_split(d)
    assert dec.thin_part.is_zero()
    assert not dec.contractible_part.is_zero()
    assert dec.contraction is not None


def test_thin_split_mixed():
    e = standard_e(S_CY2, 1)
    d = delta(S_CY2, {0: e})
    flat = single_complex(standard_e(S_CY2, 2))
    x, _, _ = direct_sum_complex([d, flat])
    dec = thin_split(x)
    ok, _ = is_thin(dec.thin_part, require_projective=False)
    assert ok
    assert homology_dims(dec.thin_part) == homology_dims(x)
    # iso validity is asserted inside thin_split; spot-check the pieces add up
    for n in x.degrees():
        assert dec.thin_part.term(n).total_dim() + dec.contractible_part.term(n).total_dim() \
            == x.terms[n].total_dim()


def test_thin_split_rejects_nonprojective():
    u = unit_object(S_1C2)
    eps = counit_to_unit(S_1C2, 1)
    from globrep.rep import exact_pieces

    q = exact_pieces(eps).cokernel  # not projective
    with pytest.raises(ThinError):
        thin_split(single_complex(q))


def test_thin_replacement_of_generator():
    c = single_complex(standard_e(S_CY2, 1))
    t, u = thin_replacement(c)
    assert is_quasi_iso(u)
    assert homology_dims(t)[0] == c.terms[0].dims


def test_thin_replacement_of_p_total_cofiber():
    c = cofiber_counit(S_CY2, S_CY2.object_index("C2"))
    t, u = thin_replacement(c)
    ok, _ = is_thin(t, require_projective=False)
    assert ok
    assert is_quasi_iso(u)
    assert homology_dims(t) == {n: d for n, d in homology_dims(c).items() if n in homology_dims(t)} \
        or all(homology_dims(t).get(n, (0,) * S_CY2.n) == homology_dims(c).get(n, (0,) * S_CY2.n)
               for n in set(homology_dims(t)) | set(homology_dims(c)))


def test_thin_replacement_acyclic_is_zero():
    e = standard_e(S_1C2, 1)
    c = Complex(S_1C2, 0, 1, {1: e, 0: e}, {1: identity_map(e)})
    t, u = thin_replacement(c)
    assert t.is_zero()


def test_thin_iso_identity_and_scaling():
    c = single_complex(standard_e(S_1C2, 1))
    t, _ = thin_replacement(c)
    from globrep.complexes import identity_chain_map

    ident = identity_chain_map(t)
    inv = thin_iso(ident)
    assert all(inv.comp(n).mats == ident.comp(n).mats for n in t.degrees())
    double = ident.scale(2)
    inv2 = thin_iso(double)
    for n in t.degrees():
        assert (inv2.comp(n) @ double.comp(n)).mats == ident.comp(n).mats


def test_thin_iso_rejects_non_quasi_iso():
    t1, _ = thin_replacement(single_complex(standard_e(S_1C2, 1)))
    from globrep.complexes import zero_chain_map

    with pytest.raises(ThinError):
        thin_iso(zero_chain_map(t1, t1))


def test_uniqueness_of_thin_replacement():
    c = cofiber_counit(S_EA2, S_EA2.object_index("C2"))
    t1, u1 = thin_replacement(c)
    t2, u2 = thin_replacement(c)
    f = compare_thin_replacements(t1, u1, t2, u2)
    assert f.is_iso()


def test_tensor_square_replacement_not_thin_input():
    x = Complex(S_EA2, 0, 1,
                {1: standard_e(S_EA2, S_EA2.object_index("C2")),
                 0: unit_object(S_EA2)},
                {1: counit_to_unit(S_EA2, S_EA2.object_index("C2"))})
    sq = tensor_complex(x, x)
    ok, witness = is_thin(sq)
    assert not ok
    t, u = thin_replacement(sq)
    ok2, _ = is_thin(t, require_projective=False)
    assert ok2
    assert homology_dims(t) == {n: homology_dims(sq).get(n, (0,) * S_EA2.n) for n in homology_dims(t)}


def test_uniqueness_across_computation_routes():
    # the direct splitting of a projective complex and the totalization
    # route must produce isomorphic thin models
    from globrep.sampling import Rng, random_projective_complex

    rng = Rng(31)
    for k in range(3):
        x = random_projective_complex(S_CY2, rng.fork(), 0, 2, 1)
        dec = thin_split(x)
        t1, u1 = dec.thin_part, dec.section
        t2, u2 = thin_replacement(x)
        f = compare_thin_replacements(t1, u1, t2, u2)
        assert f.is_iso()
