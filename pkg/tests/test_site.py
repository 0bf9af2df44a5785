import pytest

from globrep.groups import cyclic, elementary_abelian, from_table
from globrep.site import (
    SiteError,
    build_site,
    check_widely_closed,
    classify_site,
    minimal_objects,
    preset_site,
    site_from_json,
    site_to_json,
)


def dihedral4():
    table = []
    for i in range(8):
        ri, si = i % 4, i // 4
        row = []
        for j in range(8):
            rj, sj = j % 4, j // 4
            r = (ri + rj) % 4 if si == 0 else (ri - rj) % 4
            row.append(r + 4 * ((si + sj) % 2))
        table.append(row)
    return from_table(table, "D4")


def test_build_trivial():
    s = build_site([cyclic(1)])
    assert s.n == 1
    assert len(s.homs[(0, 0)]) == 1


def test_build_cyclic2():
    s = preset_site("cyclic2")
    i1, i2, i4 = s.object_index("1"), s.object_index("C2"), s.object_index("C4")
    assert len(s.homs[(i4, i2)]) == 1
    assert len(s.homs[(i4, i1)]) == 1
    assert len(s.homs[(i2, i2)]) == 1
    assert len(s.homs[(i4, i4)]) == 2
    assert len(s.homs[(i2, i4)]) == 0


def test_build_elemab2():
    s = preset_site("elemab2")
    iv = s.object_index("C2^2")
    i2 = s.object_index("C2")
    assert len(s.homs[(iv, i2)]) == 3
    assert len(s.homs[(iv, iv)]) == 6


def test_duplicate_iso_class_rejected():
    from globrep.groups import product

    with pytest.raises(SiteError):
        build_site([cyclic(2), elementary_abelian(2, 1)])
    with pytest.raises(SiteError):
        build_site([elementary_abelian(2, 2), product(cyclic(2), cyclic(2))])


def test_out_counts_match():
    s = preset_site("cyclic2x3")
    for i, g in enumerate(s.objects):
        from globrep.groups import automorphisms, inner_automorphisms

        assert len(s.homs[(i, i)]) == len(automorphisms(g)) // len(inner_automorphisms(g))


def test_widely_closed_passes():
    for name in ("trivial", "1C2", "cyclic2", "cyclic2x3", "elemab2", "gpd-c2", "cyclic2-nounit", "c2c3c6"):
        s = preset_site(name)
        assert s.widely_closed is True


def test_widely_closed_failure_witness():
    # D4 has two distinct C2 quotients whose combined quotient is C2^2;
    # with C2^2 absent the closure check must fail and name the kernels.
    with pytest.raises(SiteError):
        build_site([cyclic(2), dihedral4()])
    s = build_site([cyclic(2), dihedral4()], force=True)
    g, n0, n1 = s.widely_closed
    assert g.label == "D4"
    assert len(n0) == 4 and len(n1) == 4 and n0 != n1
    ok = build_site([cyclic(2), elementary_abelian(2, 2), dihedral4()])
    assert ok.widely_closed is True


def test_minimal_objects():
    s = preset_site("cyclic2")
    assert [s.objects[i].label for i in minimal_objects(s)] == ["1"]
    s2 = preset_site("cyclic2-nounit")
    assert [s2.objects[i].label for i in minimal_objects(s2)] == ["C2"]
    s3 = build_site([cyclic(2), cyclic(3)])
    assert [s3.objects[i].label for i in minimal_objects(s3)] == ["C2", "C3"]


def test_classify_site():
    assert classify_site(preset_site("cyclic2-nounit"))["unit_projectivity_prediction"] is True
    assert classify_site(preset_site("cyclic2"))["unit_projectivity_prediction"] is True
    report = classify_site(preset_site("c2c3c6"))
    assert report["unit_projectivity_prediction"] is False
    assert report["minimal_quotient_counts"]["C6"] == 2
    assert classify_site(preset_site("gpd-c2"))["is_groupoid"] is True


def test_generating_classes_cover():
    for name in ("cyclic2", "elemab2", "cyclic2x3"):
        s = preset_site(name)
        assert set(s.class_words) == set(s.all_class_keys())
        # words compose back to the class they index
        for key, word in s.class_words.items():
            if not word:
                continue
            acc = None
            for g in word:
                acc = g if acc is None else s.compose(acc, g)
            assert acc == key


def test_site_json_roundtrip():
    s = preset_site("cyclic2")
    blob = site_to_json(s)
    s2 = site_from_json(blob)
    assert s2.hash == s.hash
    blob["hash"] = "0" * 64
    with pytest.raises(SiteError):
        site_from_json(blob)


def test_groupoid_detection():
    assert preset_site("gpd-c2").is_groupoid()
    assert not preset_site("1C2").is_groupoid()


def test_one_and_elemab_without_c2_is_widely_closed():
    # both targets of any surjection pair out of C2^2 must themselves lie in
    # the site, so with C2 absent only trivial kernel pairs occur and the
    # closure condition holds
    s = build_site([cyclic(1), elementary_abelian(2, 2)])
    assert s.widely_closed is True
