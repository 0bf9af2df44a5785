import pytest

from globrep.exactlin import Matrix
from globrep.rep import (
    OutRep,
    RepError,
    counit_P0,
    direct_sum,
    exact_pieces,
    find_iso,
    hom_space,
    identity_map,
    ihom,
    ihom_post,
    ihom_unit_iso,
    is_s_pure,
    is_torsion_free_vector,
    l_filtration,
    make_e,
    projectivity_section,
    rep_from_json,
    rep_to_json,
    standard_e,
    tensor,
    torsion_free_search,
    unit_object,
    value_out_rep,
    zero_map,
    zero_object,
    _hom_basis_by_solving,
)
from globrep.site import preset_site

S_1C2 = preset_site("1C2")
S_CY2 = preset_site("cyclic2")
S_EA2 = preset_site("elemab2")
S_NOU = preset_site("cyclic2-nounit")
S_GPD = preset_site("gpd-c2")
S_C6 = preset_site("c2c3c6")


def dims_at(site, x):
    return tuple(x.dims)


def test_unit_object():
    for s in (S_1C2, S_CY2, S_EA2, S_NOU):
        u = unit_object(s)
        assert all(d == 1 for d in u.dims)
        u.validate()


def test_unit_is_e1_when_1_present():
    u = unit_object(S_1C2)
    e1 = make_e(S_1C2, S_1C2.object_index("1"), "regular")
    assert u.dims == e1.dims
    assert all(u.act[k] == e1.act[k] for k in S_1C2.all_class_keys())


def test_make_e_dims():
    i2 = S_EA2.object_index("C2")
    e = make_e(S_EA2, i2, "regular")
    assert e.dims == (0, 1, 3)
    iv = S_EA2.object_index("C2^2")
    ev = make_e(S_EA2, iv, "regular")
    assert ev.dims == (0, 0, 6)
    e1 = make_e(S_CY2, S_CY2.object_index("1"), "regular")
    assert e1.dims == (1, 1, 1)


def test_c_g_unit_iso_on_tower():
    c = make_e(S_NOU, S_NOU.object_index("C2"), "trivial")
    assert c.dims == (1, 1, 1)
    assert all(c.act[k].is_identity() for k in S_NOU.all_class_keys())
    u = unit_object(S_NOU)
    iso = find_iso(u, c)
    assert iso is not None and iso.is_iso()


def test_general_outrep_e():
    iv = S_EA2.object_index("C2^2")
    reg = OutRep.regular(S_EA2, iv)
    e_general = make_e(S_EA2, iv, reg)
    e_fast = make_e(S_EA2, iv, "regular")
    assert e_general.dims == e_fast.dims
    iso = find_iso(e_general, e_fast)
    assert iso is not None
    triv = OutRep.trivial(S_EA2, iv)
    c_general = make_e(S_EA2, iv, triv)
    c_fast = make_e(S_EA2, iv, "trivial")
    assert c_general.dims == c_fast.dims


def test_hom_space_adjunction_dims():
    for s in (S_1C2, S_EA2):
        u = unit_object(s)
        for g in range(s.n):
            e = make_e(s, g, "regular")
            assert len(hom_space(e, u)) == u.dims[g]
            t = tensor(e, e)
            assert len(hom_space(e, t)) == t.dims[g]


def test_hom_fast_path_matches_solver():
    for s in (S_1C2, S_EA2):
        u = unit_object(s)
        for g in range(s.n):
            e = make_e(s, g, "regular")
            for y in (u, tensor(e, e), make_e(s, g, "trivial")):
                fast = hom_space(e, y)
                slow = _hom_basis_by_solving(e, y)
                assert len(fast) == len(slow)
                for f in fast:
                    f.validate(all_classes=True)


def test_hom_space_unit_unit():
    assert len(hom_space(unit_object(S_CY2), unit_object(S_CY2))) == 1


def test_exact_pieces_identity_and_zero():
    u = unit_object(S_CY2)
    pieces = exact_pieces(identity_map(u))
    assert pieces.kernel.is_zero() and pieces.cokernel.is_zero()
    e = standard_e(S_CY2, 1)
    z = zero_map(e, u)
    pieces = exact_pieces(z)
    assert pieces.kernel.dims == e.dims
    assert pieces.cokernel.dims == u.dims


def counit_to_unit(site, gidx):
    e = standard_e(site, gidx)
    u = unit_object(site)
    basis = hom_space(e, u)
    assert len(basis) == 1
    return basis[0].scale(1 / basis[0].mats[gidx].entry(0, 0))


def test_counit_cokernel_kernel_dims():
    i2 = S_EA2.object_index("C2")
    eps = counit_to_unit(S_EA2, i2)
    pieces = exact_pieces(eps)
    assert pieces.cokernel.dims == (1, 0, 0)
    assert pieces.kernel.dims == (0, 0, 2)


def test_tensor_dims_and_decomposition():
    i2 = S_EA2.object_index("C2")
    iv = S_EA2.object_index("C2^2")
    e = standard_e(S_EA2, i2)
    t = tensor(e, e)
    assert t.dims == (0, 1, 9)
    cand, _, _ = direct_sum([standard_e(S_EA2, iv), standard_e(S_EA2, i2)])
    assert cand.dims == (0, 1, 9)
    iso = find_iso(t, cand)
    assert iso is not None and iso.is_iso()


def test_ihom_unit_law():
    u = unit_object(S_1C2)
    e = standard_e(S_1C2, S_1C2.object_index("C2"))
    data = ihom(u, e)
    assert data.obj.dims == e.dims
    iso = ihom_unit_iso(data, e)
    assert iso.is_iso()


def test_ihom_vs_dual_tensor_at_1():
    i1 = S_1C2.object_index("1")
    i2 = S_1C2.object_index("C2")
    e = standard_e(S_1C2, i2)
    u = unit_object(S_1C2)
    ihom_ee = ihom(e, e)
    assert ihom_ee.obj.dims[i1] >= 1
    dual = ihom(e, u)
    assert tensor(dual.obj, e).dims[i1] == 0


def test_counit_P0():
    u = unit_object(S_1C2)
    p0, eps = counit_P0(u)
    assert p0.dims == (1, 2)
    assert eps.is_pointwise_surjective()
    pieces = exact_pieces(eps)
    assert pieces.kernel.dims == (0, 1)
    e = standard_e(S_1C2, 1)
    p0e, eps_e = counit_P0(e)
    assert eps_e.is_pointwise_surjective()
    z = zero_object(S_1C2)
    p0z, _ = counit_P0(z)
    assert p0z.is_zero()


def test_projectivity_sections():
    e = standard_e(S_EA2, S_EA2.object_index("C2"))
    assert projectivity_section(e) is not None
    # the unit is projective on the cyclic tower without 1 ...
    assert projectivity_section(unit_object(S_NOU)) is not None
    # ... and not on {C2, C3, C6}, which has two minimal quotients
    assert projectivity_section(unit_object(S_C6)) is None
    # cokernel of e_C2 -> unit over {1, C2}: supported at 1 only, not projective
    eps = counit_to_unit(S_1C2, S_1C2.object_index("C2"))
    q = exact_pieces(eps).cokernel
    assert q.dims == (1, 0)
    assert projectivity_section(q) is None


def test_l_filtration():
    i2 = S_EA2.object_index("C2")
    e = standard_e(S_EA2, i2)
    for s, expect in [(0, (0, 0, 0)), (1, (0, 0, 0)), (2, e.dims), (4, e.dims)]:
        data = l_filtration(e, s)
        assert data["sub"].dims == expect
    u = unit_object(S_1C2)
    assert l_filtration(u, 1)["sub"].dims == (1, 1)
    assert l_filtration(u, 0)["sub"].dims == (0, 0)
    # layer = subquotient
    data = l_filtration(e, 2)
    assert data["layer"].dims == e.dims


def test_l_filtration_monotone_and_sum_compatible():
    i2 = S_EA2.object_index("C2")
    iv = S_EA2.object_index("C2^2")
    x, _, _ = direct_sum([standard_e(S_EA2, i2), standard_e(S_EA2, iv)])
    prev = 0
    for s in [0, 1, 2, 4]:
        d = sum(l_filtration(x, s)["sub"].dims)
        assert d >= prev
        prev = d
    assert l_filtration(x, 4)["sub"].dims == x.dims


def test_is_s_pure():
    i2 = S_EA2.object_index("C2")
    iv = S_EA2.object_index("C2^2")
    assert is_s_pure(standard_e(S_EA2, i2), 2)
    assert not is_s_pure(standard_e(S_EA2, i2), 4)
    assert is_s_pure(unit_object(S_1C2), 1)
    both, _, _ = direct_sum([standard_e(S_EA2, i2), standard_e(S_EA2, iv)])
    assert not is_s_pure(both, 2)
    assert is_s_pure(zero_object(S_EA2), 2)


def test_torsion_free_search_on_e():
    for s in (S_1C2, S_EA2):
        for g in range(s.n):
            e = standard_e(s, g)
            if e.dims[g] == 0:
                continue
            vec = torsion_free_search(e, g)
            assert vec is not None
            assert is_torsion_free_vector(e, g, vec)


def test_torsion_search_zero_prolongation():
    eps = counit_to_unit(S_1C2, S_1C2.object_index("C2"))
    q = exact_pieces(eps).cokernel  # supported at 1 with zero prolongation
    i1 = S_1C2.object_index("1")
    assert q.dims[i1] == 1
    assert torsion_free_search(q, i1) is None


def test_value_out_rep_validates():
    iv = S_EA2.object_index("C2^2")
    e = standard_e(S_EA2, iv)
    v = value_out_rep(e, iv)
    assert v.dim == 6


def test_rep_json_roundtrip():
    e = standard_e(S_EA2, S_EA2.object_index("C2"))
    j = rep_to_json(e)
    e2 = rep_from_json(S_EA2, j)
    assert e2.dims == e.dims
    assert all(e2.act[k] == e.act[k] for k in S_EA2.all_class_keys())
    with pytest.raises(RepError):
        bad = dict(j)
        bad["site_hash"] = "nope"
        rep_from_json(S_EA2, bad)


def test_hom_fast_path_on_direct_sums_and_units():
    from globrep.rep import _hom_basis_by_solving

    for s in (S_1C2, S_EA2):
        e = standard_e(s, s.object_index("C2"))
        c = make_e(s, s.object_index("C2"), "trivial")
        u = unit_object(s)
        big, _, _ = direct_sum([e, c, u])
        assert big.edecomp is not None
        for y in (u, e, tensor(e, e)):
            fast = hom_space(big, y)
            slow = _hom_basis_by_solving(big, y)
            assert len(fast) == len(slow)
            for f in fast:
                f.validate(all_classes=True)
