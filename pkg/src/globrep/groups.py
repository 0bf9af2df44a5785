"""Finite groups as explicit multiplication tables.

Groups are stored as order x order tables of element indices with element 0
the identity.  Everything downstream (surjection classes, quotients, normal
subgroups, automorphisms) is enumerated by brute force or by backtracking
over generator images; all groups in play have order <= 32, so this is cheap
and keeps every answer exact and deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class GroupError(ValueError):
    pass


class Group:
    """A finite group: order, multiplication table, identity at index 0."""

    __slots__ = ("order", "table", "label", "inverse", "spec", "_gens", "_subgroups")

    def __init__(self, table, label: str, spec=None, validate: bool = True):
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.label = label
        self.spec = spec if spec is not None else {"kind": "table", "table": [list(r) for r in self.table]}
        if validate:
            self._check_group_law()
        inv = [None] * self.order
        for x in range(self.order):
            for y in range(self.order):
                if self.table[x][y] == 0:
                    inv[x] = y
                    break
            if inv[x] is None:
                raise GroupError(f"{label}: element {x} has no inverse")
        self.inverse = tuple(inv)
        self._gens = None
        self._subgroups = None

    def _check_group_law(self):
        n = self.order
        if n == 0:
            raise GroupError("empty table")
        for row in self.table:
            if len(row) != n:
                raise GroupError(f"{self.label}: table is not square")
            for x in row:
                if not (0 <= x < n):
                    raise GroupError(f"{self.label}: entry out of range")
        for x in range(n):
            if self.table[0][x] != x or self.table[x][0] != x:
                raise GroupError(f"{self.label}: element 0 is not an identity")
        for x in range(n):
            for y in range(n):
                xy = self.table[x][y]
                for z in range(n):
                    if self.table[xy][z] != self.table[x][self.table[y][z]]:
                        raise GroupError(f"{self.label}: associativity fails at ({x},{y},{z})")

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.inverse[x]

    def conj(self, t: int, x: int) -> int:
        """t x t^-1."""
        return self.table[self.table[t][x]][self.inverse[t]]

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.table[y][x]
            k += 1
        return k

    def generating_sequence(self) -> tuple:
        """Greedy generating sequence: scan elements in index order, keep
        those that enlarge the generated subgroup."""
        if self._gens is not None:
            return self._gens
        gens = []
        span = {0}
        for x in range(self.order):
            if x not in span:
                gens.append(x)
                span = self._closure(span | {x})
                if len(span) == self.order:
                    break
        self._gens = tuple(gens)
        return self._gens

    def _closure(self, seed) -> set:
        elems = set(seed) | {0}
        frontier = list(elems)
        while frontier:
            x = frontier.pop()
            for y in list(elems):
                for z in (self.table[x][y], self.table[y][x]):
                    if z not in elems:
                        elems.add(z)
                        frontier.append(z)
            xi = self.inverse[x]
            if xi not in elems:
                elems.add(xi)
                frontier.append(xi)
        return elems

    def subgroups(self) -> list:
        """All subgroups, as sorted element tuples (deterministic order)."""
        if self._subgroups is not None:
            return self._subgroups
        found = {frozenset({0})}
        frontier = [frozenset({0})]
        while frontier:
            s = frontier.pop()
            for x in range(1, self.order):
                if x not in s:
                    t = frozenset(self._closure(s | {x}))
                    if t not in found:
                        found.add(t)
                        frontier.append(t)
        self._subgroups = sorted(tuple(sorted(s)) for s in found)
        return self._subgroups

    def is_subgroup(self, elems) -> bool:
        s = set(elems)
        if 0 not in s:
            return False
        return all(self.table[x][y] in s and self.inverse[x] in s for x in s for y in s)

    def is_normal(self, elems) -> bool:
        s = set(elems)
        return all(self.conj(t, x) in s for t in range(self.order) for x in s)

    def __repr__(self):
        return f"Group({self.label}, order {self.order})"


@dataclass(frozen=True)
class Hom:
    """A group homomorphism recorded by its images tuple."""

    source: Group
    target: Group
    images: tuple

    def __call__(self, x: int) -> int:
        return self.images[x]

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_surjective()

    def kernel(self) -> tuple:
        return tuple(x for x in range(self.source.order) if self.images[x] == 0)

    def compose(self, other: "Hom") -> "Hom":
        """self after other (other: A -> B, self: B -> C)."""
        assert other.target is self.target or other.target.table == self.source.table or other.target is self.source
        return Hom(other.source, self.target, tuple(self.images[y] for y in other.images))

    def validate(self):
        g, h = self.source, self.target
        assert len(self.images) == g.order
        assert self.images[0] == 0
        for x in range(g.order):
            for y in range(g.order):
                if self.images[g.table[x][y]] != h.table[self.images[x]][self.images[y]]:
                    raise GroupError("not a homomorphism")


def identity_hom(g: Group) -> Hom:
    return Hom(g, g, tuple(range(g.order)))


# -- constructors -----------------------------------------------------


def cyclic(n: int, label: str | None = None) -> Group:
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    if label is None:
        label = "1" if n == 1 else f"C{n}"
    return Group(table, label, spec={"kind": "cyclic", "n": n}, validate=False)


def elementary_abelian(p: int, r: int, label: str | None = None) -> Group:
    if p < 2 or any(p % d == 0 for d in range(2, p)):
        raise GroupError("p must be prime")
    if r < 0:
        raise GroupError("r must be >= 0")
    n = p ** r
    # elements are base-p digit vectors in lexicographic order
    def add(i, j):
        out, mult = 0, 1
        for _ in range(r):
            out += ((i % p + j % p) % p) * mult
            i //= p
            j //= p
            mult *= p
        return out

    table = [[add(i, j) for j in range(n)] for i in range(n)]
    if label is None:
        label = "1" if n == 1 else (f"C{p}" if r == 1 else f"C{p}^{r}")
    return Group(table, label, spec={"kind": "elem_abelian", "p": p, "r": r}, validate=False)


def product(g: Group, h: Group, label: str | None = None) -> Group:
    n, m = g.order, h.order
    table = [
        [g.table[x1][x2] * m + h.table[y1][y2] for x2 in range(n) for y2 in range(m)]
        for x1 in range(n)
        for y1 in range(m)
    ]
    if label is None:
        label = f"{g.label}x{h.label}"
    return Group(table, label, spec={"kind": "product", "a": g.spec, "b": h.spec}, validate=False)


def from_table(raw, label: str) -> Group:
    return Group(raw, label, spec={"kind": "table", "table": [list(r) for r in raw]})


def make_group(spec, label: str | None = None) -> Group:
    """Build a group from a spec dict: cyclic / elem_abelian / product / table."""
    kind = spec["kind"]
    if kind == "cyclic":
        return cyclic(spec["n"], label)
    if kind == "elem_abelian":
        return elementary_abelian(spec["p"], spec["r"], label)
    if kind == "product":
        return product(make_group(spec["a"]), make_group(spec["b"]), label)
    if kind == "table":
        return from_table(spec["table"], label or "G")
    raise GroupError(f"unknown group spec kind {kind!r}")


# -- homomorphism enumeration -----------------------------------------


def _expressions(g: Group) -> list:
    """For each element, a word in the generating sequence (BFS, so words are
    shortest-first and deterministic)."""
    gens = g.generating_sequence()
    expr = {0: ()}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, gen in enumerate(gens):
                y = g.table[x][gen]
                if y not in expr:
                    expr[y] = expr[x] + (gi,)
                    nxt.append(y)
        frontier = nxt
    assert len(expr) == g.order, "generating sequence does not generate"
    return [expr[x] for x in range(g.order)]


def enumerate_homs(g: Group, h: Group) -> list:
    """All homomorphisms g -> h, in lexicographic order of image tuples.

    Backtracks over images of a generating sequence; a candidate tuple
    determines the whole map through the expression table, and the full
    homomorphism property is then checked directly.
    """
    gens = g.generating_sequence()
    exprs = _expressions(g)
    gen_orders = [g.element_order(x) for x in gens]
    h_orders = [h.element_order(y) for y in range(h.order)]
    out = []
    for images in itertools.product(range(h.order), repeat=len(gens)):
        # the image order must divide the generator order
        if any(gen_orders[i] % h_orders[y] != 0 for i, y in enumerate(images)):
            continue
        full = []
        for w in exprs:
            y = 0
            for gi in w:
                y = h.table[y][images[gi]]
            full.append(y)
        ok = True
        for x in range(g.order):
            fx = full[x]
            rowx = g.table[x]
            for y in range(g.order):
                if full[rowx[y]] != h.table[fx][full[y]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(Hom(g, h, tuple(full)))
    out.sort(key=lambda f: f.images)
    return out


def enumerate_homs_bruteforce(g: Group, h: Group) -> list:
    """Oracle: filter all |h|^|g| functions.  Only viable for tiny groups."""
    assert h.order ** g.order <= 10 ** 7, "brute-force oracle out of range"
    out = []
    for images in itertools.product(range(h.order), repeat=g.order):
        if images[0] != 0:
            continue
        ok = True
        for x in range(g.order):
            for y in range(g.order):
                if images[g.table[x][y]] != h.table[images[x]][images[y]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(Hom(g, h, images))
    return out


def enumerate_epis(g: Group, h: Group, brute_force: bool = False) -> list:
    """All surjective homomorphisms g -> h (lexicographic order)."""
    if g.order % h.order != 0:
        return []
    homs = enumerate_homs_bruteforce(g, h) if brute_force else enumerate_homs(g, h)
    return [f for f in homs if f.is_surjective()]


def automorphisms(g: Group) -> list:
    return [f for f in enumerate_epis(g, g)]


def inner_automorphisms(g: Group) -> list:
    seen = {}
    for t in range(g.order):
        images = tuple(g.conj(t, x) for x in range(g.order))
        seen.setdefault(images, Hom(g, g, images))
    return [seen[k] for k in sorted(seen)]


@dataclass(frozen=True)
class SurjClass:
    """A conjugacy class of surjections: orbit under post-composition with
    conjugation in the target; the representative is the lexicographically
    least orbit member."""

    representative: Hom
    orbit: tuple

    @property
    def source(self) -> Group:
        return self.representative.source

    @property
    def target(self) -> Group:
        return self.representative.target


def conj_orbit(f: Hom) -> tuple:
    h = f.target
    orbit = {tuple(h.conj(t, y) for y in f.images) for t in range(h.order)}
    return tuple(sorted(orbit))


def surj_classes(g: Group, h: Group) -> list:
    """Conjugacy classes of surjections g -> h, sorted by representative."""
    epis = enumerate_epis(g, h)
    seen = {}
    for f in epis:
        orb = conj_orbit(f)
        if orb[0] not in seen:
            seen[orb[0]] = SurjClass(Hom(g, h, orb[0]), tuple(Hom(g, h, im) for im in orb))
    return [seen[k] for k in sorted(seen)]


# -- quotients, normal subgroups, isomorphism --------------------------


def quotient_group(g: Group, normal) -> tuple:
    """(g/N, projection hom).  Cosets are labelled by their least element."""
    n = tuple(sorted(set(normal)))
    if not g.is_subgroup(n):
        raise GroupError("not a subgroup")
    if not g.is_normal(n):
        raise GroupError("subgroup is not normal")
    coset_of = [None] * g.order
    reps = []
    for x in range(g.order):
        if coset_of[x] is None:
            members = sorted(g.table[x][k] for k in n)
            rep = members[0]
            idx = len(reps)
            reps.append(rep)
            for m in members:
                coset_of[m] = idx
    # relabel so the identity coset is 0 and reps are sorted
    order = sorted(range(len(reps)), key=lambda i: reps[i])
    relabel = {old: new for new, old in enumerate(order)}
    coset_of = [relabel[c] for c in coset_of]
    reps = sorted(reps)
    table = [[coset_of[g.table[a][b]] for b in reps] for a in reps]
    q = Group(table, f"{g.label}/{len(n)}", spec={"kind": "table", "table": table})
    proj = Hom(g, q, tuple(coset_of))
    proj.validate()
    return q, proj


def is_isomorphic(g: Group, h: Group) -> bool:
    if g.order != h.order:
        return False
    if sorted(g.element_order(x) for x in range(g.order)) != sorted(
        h.element_order(x) for x in range(h.order)
    ):
        return False
    return bool(enumerate_epis(g, h))


def normal_subgroups(g: Group) -> list:
    return [s for s in g.subgroups() if g.is_normal(s)]


def normal_with_quotient(t: Group, m: Group) -> list:
    """All normal subgroups N of t with t/N isomorphic to m.

    Enumerated from the subgroup lattice, independently of epi enumeration
    (the two routes are cross-checked in the tests).
    """
    if t.order % m.order != 0:
        return []
    want_index = t.order // m.order
    out = []
    for n in normal_subgroups(t):
        if len(n) != want_index:
            continue
        q, _ = quotient_group(t, n)
        if is_isomorphic(q, m):
            out.append(n)
    return out


# -- serialization -----------------------------------------------------


def group_to_json(g: Group) -> dict:
    return {"label": g.label, "spec": g.spec}


def group_from_json(obj) -> Group:
    return make_group(obj["spec"], obj.get("label"))
