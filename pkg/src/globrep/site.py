"""Finite sites: the ambient categories for global representations.

A Site materializes a finite full subcategory of finite groups with
conjugacy classes of surjections as morphisms: chosen objects (one per
isomorphism class, sorted by order then label), every hom-set of surjection
classes, the full composition table on class indices, and the wide-closure
verdict that the rest of the package treats as a gate.

Classes are addressed by keys (i, j, c): class number c in the hom-set from
object i to object j.  A generating set of classes is precomputed so that
naturality conditions only need to be imposed for generators; every other
class records a word in the generators.
"""

from __future__ import annotations

import hashlib
import json

from .groups import (
    Group,
    conj_orbit,
    group_from_json,
    group_to_json,
    is_isomorphic,
    normal_with_quotient,
    quotient_group,
    surj_classes,
)


class SiteError(ValueError):
    pass


class Site:
    def __init__(self, groups, force: bool = False):
        objs = sorted(groups, key=lambda g: (g.order, g.label))
        for a in range(len(objs)):
            for b in range(a + 1, len(objs)):
                if is_isomorphic(objs[a], objs[b]):
                    raise SiteError(
                        f"duplicate isomorphism class: {objs[a].label} and {objs[b].label}"
                    )
        self.objects: list[Group] = objs
        self.n = len(objs)
        self.homs: dict = {}
        for i in range(self.n):
            for j in range(self.n):
                self.homs[(i, j)] = surj_classes(objs[i], objs[j]) if i != j else surj_classes(objs[i], objs[i])
        self.class_index: dict = {}
        for (i, j), classes in self.homs.items():
            for c, cl in enumerate(classes):
                self.class_index[(i, j, cl.representative.images)] = c
        self.comp: dict = {}
        self._build_composition()
        self.identity_class = {}
        for i in range(self.n):
            self.identity_class[i] = self._find_identity(i)
        self._validate()
        self.generators, self.class_words = self._generating_classes()
        self.force = force
        self.widely_closed = check_widely_closed(self)
        if self.widely_closed is not True and not force:
            g, n0, n1 = self.widely_closed
            raise SiteError(
                "site is not widely closed: "
                f"{g.label} has quotients with kernels {n0} and {n1} whose "
                "combined quotient is missing (pass force=True to override)"
            )
        self.hash = self._hash()

    # -- construction helpers ------------------------------------------

    def _find_identity(self, i: int) -> int:
        images = tuple(range(self.objects[i].order))
        for c, cl in enumerate(self.homs[(i, i)]):
            if cl.representative.images == images:
                return c
        raise SiteError("identity class missing")

    def _class_of(self, i: int, j: int, hom) -> int:
        key = (i, j, min(conj_orbit(hom)))
        return self.class_index[key]

    def _build_composition(self):
        for i in range(self.n):
            for j in range(self.n):
                for k in range(self.n):
                    ab = self.homs[(i, j)]
                    bc = self.homs[(j, k)]
                    for a, ca in enumerate(ab):
                        for b, cb in enumerate(bc):
                            comp = cb.representative.compose(ca.representative)
                            self.comp[(i, j, a), (j, k, b)] = self._class_of(i, k, comp)

    def compose(self, first, second) -> tuple:
        """Compose class keys: first: i->j, then second: j->k; returns the
        key of (second after first): i->k."""
        (i, j, a), (j2, k, b) = first, second
        assert j == j2, "classes are not composable"
        return (i, k, self.comp[(i, j, a), (j2, k, b)])

    def _validate(self):
        # identity laws, associativity, and divisibility on nonempty hom-sets
        for (i, j), classes in self.homs.items():
            if classes and self.objects[j].order and i != j:
                assert self.objects[i].order % self.objects[j].order == 0
            for a in range(len(classes)):
                assert self.comp[(i, i, self.identity_class[i]), (i, j, a)] == a
                assert self.comp[(i, j, a), (j, j, self.identity_class[j])] == a
        for i in range(self.n):
            for j in range(self.n):
                for k in range(self.n):
                    for m in range(self.n):
                        for a in range(len(self.homs[(i, j)])):
                            for b in range(len(self.homs[(j, k)])):
                                for c in range(len(self.homs[(k, m)])):
                                    ab = self.comp[(i, j, a), (j, k, b)]
                                    bc = self.comp[(j, k, b), (k, m, c)]
                                    assert (
                                        self.comp[(i, k, ab), (k, m, c)]
                                        == self.comp[(i, j, a), (j, m, bc)]
                                    ), "composition is not associative"
        # composition is independent of orbit representatives
        for (i, j), ab in self.homs.items():
            for k in range(self.n):
                bc = self.homs[(j, k)]
                for a, ca in enumerate(ab):
                    for b, cb in enumerate(bc):
                        expect = self.comp[(i, j, a), (j, k, b)]
                        for f in ca.orbit:
                            for g in cb.orbit:
                                if self._class_of(i, k, g.compose(f)) != expect:
                                    raise SiteError("composition not well-defined on classes")

    def _generating_classes(self):
        """Greedy generating set plus a word in generators for every class.

        Words are composition chains: word [g1, ..., gk] means the class is
        g_k o ... o g_1 (g1 applied first); the empty word is an identity.
        """
        all_keys = [
            (i, j, c)
            for i in range(self.n)
            for j in range(self.n)
            for c in range(len(self.homs[(i, j)]))
        ]
        gens: list = []

        def closure():
            words = {(i, i, self.identity_class[i]): [] for i in range(self.n)}
            frontier = list(words)
            while frontier:
                nxt = []
                for key in frontier:
                    for g in gens:
                        if g[0] == key[1]:
                            comp = self.compose(key, g)
                            if comp not in words:
                                words[comp] = words[key] + [g]
                                nxt.append(comp)
                frontier = nxt
            return words

        words = closure()
        for key in all_keys:
            if key not in words:
                gens.append(key)
                words = closure()
        return gens, words

    # -- accessors ------------------------------------------------------

    def order(self, i: int) -> int:
        return self.objects[i].order

    def orders(self) -> list:
        return sorted({g.order for g in self.objects})

    def max_order(self) -> int:
        return max(g.order for g in self.objects)

    def objects_of_order(self, s: int) -> list:
        return [i for i, g in enumerate(self.objects) if g.order == s]

    def object_index(self, label: str) -> int:
        for i, g in enumerate(self.objects):
            if g.label == label:
                return i
        raise SiteError(f"no object labelled {label!r}")

    def hom_classes(self, i: int, j: int) -> list:
        return self.homs[(i, j)]

    def all_class_keys(self) -> list:
        return [
            (i, j, c)
            for i in range(self.n)
            for j in range(self.n)
            for c in range(len(self.homs[(i, j)]))
        ]

    def nonidentity_class_keys(self):
        return [
            key for key in self.all_class_keys()
            if not (key[0] == key[1] and key[2] == self.identity_class[key[0]])
        ]

    def out_classes(self, i: int) -> list:
        return list(range(len(self.homs[(i, i)])))

    def out_inverse(self, i: int, c: int) -> int:
        ident = self.identity_class[i]
        for c2 in self.out_classes(i):
            if self.comp[(i, i, c), (i, i, c2)] == ident:
                return c2
        raise SiteError("automorphism class has no inverse")

    def out_action(self, t: int, g: int, out_class: int, hom_class: int) -> int:
        """Post-composition action of an automorphism class of G on the
        hom classes T -> G."""
        return self.comp[(t, g, hom_class), (g, g, out_class)]

    def classes_into(self, j: int) -> list:
        """All class keys (i, j, c) with target j, identity included."""
        return [
            (i, j, c)
            for i in range(self.n)
            for c in range(len(self.homs[(i, j)]))
        ]

    def is_groupoid(self) -> bool:
        return all(
            not self.homs[(i, j)] for i in range(self.n) for j in range(self.n) if i != j
        )

    def _hash(self) -> str:
        payload = {
            "groups": [{"label": g.label, "table": [list(r) for r in g.table]} for g in self.objects],
            "homs": {
                f"{i},{j}": [list(cl.representative.images) for cl in classes]
                for (i, j), classes in sorted(self.homs.items())
            },
            "comp": sorted(
                [[list(a), list(b), c] for (a, b), c in self.comp.items()]
            ),
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()

    def __repr__(self):
        labels = ", ".join(g.label for g in self.objects)
        return f"Site({{{labels}}})"


def build_site(groups, force: bool = False) -> Site:
    return Site(groups, force=force)


def check_widely_closed(site: Site):
    """True, or the first witness (G, N0, N1) where the combined quotient
    G/(N0 n N1) is missing from the site.

    Kernels only depend on the surjection class, so it is enough to range
    over pairs of class representatives.
    """
    for i, g in enumerate(site.objects):
        kernels = []
        for j in range(site.n):
            for cl in site.homs[(i, j)]:
                kernels.append(cl.representative.kernel())
        kernels = sorted(set(kernels))
        for n0 in kernels:
            for n1 in kernels:
                meet = tuple(sorted(set(n0) & set(n1)))
                q, _ = quotient_group(g, meet)
                if not any(is_isomorphic(q, h) for h in site.objects):
                    return (g, n0, n1)
    return True


def minimal_objects(site: Site) -> list:
    """Indices of objects with no surjections to any other object."""
    out = []
    for i in range(site.n):
        if all(not site.homs[(i, j)] for j in range(site.n) if j != i):
            out.append(i)
    return out


def classify_site(site: Site) -> dict:
    """Groupoid flag, minimal objects, and the prediction of whether the
    tensor unit is projective: every object must admit exactly one normal
    subgroup whose quotient is a minimal object."""
    minima = minimal_objects(site)
    prediction = True
    counts = []
    for g in site.objects:
        count = 0
        for m in minima:
            count += len(normal_with_quotient(g, site.objects[m]))
        counts.append(count)
        if count != 1:
            prediction = False
    return {
        "is_groupoid": site.is_groupoid(),
        "minimal_objects": [site.objects[m].label for m in minima],
        "minimal_quotient_counts": {g.label: c for g, c in zip(site.objects, counts)},
        "unit_projectivity_prediction": prediction,
    }


# -- named presets ------------------------------------------------------


def preset_site(name: str, force: bool = False) -> Site:
    from .groups import cyclic, elementary_abelian

    presets = {
        "trivial": lambda: [cyclic(1)],
        "1C2": lambda: [cyclic(1), cyclic(2)],
        "cyclic2": lambda: [cyclic(1), cyclic(2), cyclic(4)],
        "cyclic2x3": lambda: [cyclic(1), cyclic(2), cyclic(4), cyclic(8)],
        "elemab2": lambda: [cyclic(1), cyclic(2), elementary_abelian(2, 2)],
        "gpd-c2": lambda: [cyclic(2)],
        "cyclic2-nounit": lambda: [cyclic(2), cyclic(4), cyclic(8)],
        "c2c3c6": lambda: [cyclic(2), cyclic(3), cyclic(6)],
    }
    if name not in presets:
        raise SiteError(f"unknown site preset {name!r}; choose from {sorted(presets)}")
    return build_site(presets[name](), force=force)


PRESET_NAMES = ("trivial", "1C2", "cyclic2", "cyclic2x3", "elemab2", "gpd-c2", "cyclic2-nounit", "c2c3c6")


# -- serialization -------------------------------------------------------


def site_to_json(site: Site) -> dict:
    return {
        "groups": [group_to_json(g) for g in site.objects],
        "homs": {
            f"{i},{j}": [list(cl.representative.images) for cl in classes]
            for (i, j), classes in sorted(site.homs.items())
        },
        "comp": sorted([[list(a), list(b), c] for (a, b), c in site.comp.items()]),
        "widely_closed": site.widely_closed is True,
        "force": site.force,
        "hash": site.hash,
    }


def site_from_json(obj) -> Site:
    groups = [group_from_json(g) for g in obj["groups"]]
    site = build_site(groups, force=obj.get("force", False))
    if obj.get("hash") and obj["hash"] != site.hash:
        raise SiteError("site file is stale: stored hash does not match rebuilt site")
    return site
