"""The abelian category of global representations over a finite site.

Objects assign an exact-rational vector space to every site object and a
matrix to every surjection class, contravariantly and functorially.  All
constructions (kernels, cokernels, tensor, internal hom, the canonical
projective generators, the order filtration, purity and torsion tests)
reduce to exact linear algebra on those matrices.

Natural maps are found by linear solves.  When the source is a direct sum
of standard generators, Hom(e_{G,V}, Y) is written down directly from the
generator structure instead of solving a naturality system; this fast path
is what keeps chain-level computations cheap, so constructors are careful
to record generator decompositions whenever they are known.
"""

from __future__ import annotations

from .exactlin import (
    Matrix,
    block_diag,
    hstack,
    kron,
    matrix_from_json,
    matrix_to_json,
    scalar,
)
from .site import Site

VALIDATE = True


class RepError(ValueError):
    pass


def _site_gate(site: Site):
    if site.widely_closed is not True and not site.force:
        raise RepError("site failed the wide-closure check; rebuild with force to proceed")


# ---------------------------------------------------------------------------
# Out(G)-representations


class OutRep:
    """A representation of the automorphism classes of one site object,
    given by one matrix per class of Hom(G, G)."""

    def __init__(self, site: Site, gidx: int, dim: int, mats: dict, validate: bool = True):
        self.site = site
        self.gidx = gidx
        self.dim = dim
        self.mats = dict(mats)
        if validate:
            self.validate()

    def validate(self):
        s, g = self.site, self.gidx
        ident = s.identity_class[g]
        assert set(self.mats) == set(s.out_classes(g))
        for c, m in self.mats.items():
            assert m.shape == (self.dim, self.dim)
        assert self.mats[ident].is_identity()
        for c1 in s.out_classes(g):
            for c2 in s.out_classes(g):
                # left action: the matrix of (c2 after c1) is mats[c2] @ mats[c1]
                c21 = s.comp[(g, g, c1), (g, g, c2)]
                if self.mats[c21] != self.mats[c2] @ self.mats[c1]:
                    raise RepError("matrices do not respect the Out-group law")

    @staticmethod
    def regular(site: Site, gidx: int) -> "OutRep":
        classes = site.out_classes(gidx)
        n = len(classes)
        mats = {}
        for c in classes:
            m = Matrix.zeros(n, n)
            for d in classes:
                # basis vector [d] maps to [c o d]
                cd = site.comp[(gidx, gidx, d), (gidx, gidx, c)]
                m._d[cd][d] = scalar(1)
            mats[c] = m
        return OutRep(site, gidx, n, mats)

    @staticmethod
    def trivial(site: Site, gidx: int, dim: int = 1) -> "OutRep":
        mats = {c: Matrix.identity(dim) for c in site.out_classes(gidx)}
        return OutRep(site, gidx, dim, mats)


def value_out_rep(x: "RepObject", gidx: int) -> OutRep:
    """X(G) as a left Out(G)-representation: the class gamma acts by the
    action matrix of its inverse class (so that evaluation against hom
    classes is equivariant)."""
    s = x.site
    mats = {}
    for c in s.out_classes(gidx):
        inv = s.out_inverse(gidx, c)
        mats[c] = x.act[(gidx, gidx, inv)]
    return OutRep(s, gidx, x.dims[gidx], mats)


# ---------------------------------------------------------------------------
# Objects and maps


class EDecomp:
    """Witness that an object is isomorphic to a direct sum of standard
    generators: the generator parts plus the iso onto their direct sum
    (None when the object is that direct sum on the nose)."""

    def __init__(self, parts: list, iso):
        self.parts = parts  # list of make_e outputs, in block order
        self.iso = iso      # RepMap X -> direct sum of parts, or None


class RepObject:
    def __init__(self, site: Site, dims, act: dict, label: str = "X",
                 edecomp: EDecomp | None = None, validate: bool = True):
        _site_gate(site)
        self.site = site
        self.dims = tuple(dims)
        self.act = dict(act)
        self.label = label
        self.edecomp = edecomp
        self._hom_cache: dict = {}
        assert len(self.dims) == site.n
        if validate and VALIDATE:
            self.validate()

    def validate(self):
        s = self.site
        for key in s.all_class_keys():
            i, j, _ = key
            m = self.act.get(key)
            assert m is not None, f"missing action for class {key}"
            assert m.shape == (self.dims[i], self.dims[j]), f"bad shape at {key}"
        for i in range(s.n):
            assert self.act[(i, i, s.identity_class[i])].is_identity()
        for (i, j, a) in s.all_class_keys():
            for (j2, k, b) in s.all_class_keys():
                if j2 != j:
                    continue
                c = s.comp[(i, j, a), (j2, k, b)]
                if self.act[(i, k, c)] != self.act[(i, j, a)] @ self.act[(j, k, b)]:
                    raise RepError(f"functoriality fails composing {(i, j, a)} then {(j2, k, b)}")

    def action(self, key) -> Matrix:
        return self.act[key]

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)

    def __repr__(self):
        return f"RepObject({self.label}, dims={self.dims})"


def complete_actions(site: Site, partial: dict, dims) -> dict:
    """Extend action matrices given on generating classes to all classes by
    multiplying along the stored generator words."""
    act = {}
    for i in range(site.n):
        act[(i, i, site.identity_class[i])] = Matrix.identity(dims[i])
    for key, word in site.class_words.items():
        if not word:
            continue
        m = None
        for gkey in word:
            gm = partial[gkey]
            m = gm if m is None else m @ gm
        act[key] = m
    return act


class RepMap:
    def __init__(self, source: RepObject, target: RepObject, mats, validate: bool = True):
        self.source = source
        self.target = target
        self.mats = list(mats)
        assert len(self.mats) == source.site.n
        for i in range(source.site.n):
            assert self.mats[i].shape == (target.dims[i], source.dims[i]), \
                f"component {i} has shape {self.mats[i].shape}"
        if validate and VALIDATE:
            self.validate()

    def validate(self, all_classes: bool = False):
        s = self.source.site
        keys = s.all_class_keys() if all_classes else s.generators
        for (i, j, c) in keys:
            lhs = self.mats[i] @ self.source.act[(i, j, c)]
            rhs = self.target.act[(i, j, c)] @ self.mats[j]
            if lhs != rhs:
                raise RepError(f"naturality fails at class {(i, j, c)}")

    def __matmul__(self, other: "RepMap") -> "RepMap":
        assert other.target is self.source or other.target.dims == self.source.dims
        return RepMap(other.source, self.target,
                      [a @ b for a, b in zip(self.mats, other.mats)], validate=False)

    def __add__(self, other: "RepMap") -> "RepMap":
        return RepMap(self.source, self.target,
                      [a + b for a, b in zip(self.mats, other.mats)], validate=False)

    def __sub__(self, other: "RepMap") -> "RepMap":
        return RepMap(self.source, self.target,
                      [a - b for a, b in zip(self.mats, other.mats)], validate=False)

    def __neg__(self) -> "RepMap":
        return RepMap(self.source, self.target, [-a for a in self.mats], validate=False)

    def scale(self, c) -> "RepMap":
        return RepMap(self.source, self.target, [a.scale(c) for a in self.mats], validate=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def __eq__(self, other):
        if not isinstance(other, RepMap):
            return NotImplemented
        return self.mats == other.mats

    def __hash__(self):
        return id(self)

    def is_pointwise_injective(self) -> bool:
        return all(m.rank() == m.cols for m in self.mats)

    def is_pointwise_surjective(self) -> bool:
        return all(m.rank() == m.rows for m in self.mats)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and all(m.is_invertible() for m in self.mats)

    def inverse(self) -> "RepMap":
        assert self.is_iso()
        return RepMap(self.target, self.source, [m.inverse() for m in self.mats], validate=False)

    def __repr__(self):
        return f"RepMap({self.source.label} -> {self.target.label})"


def identity_map(x: RepObject) -> RepMap:
    return RepMap(x, x, [Matrix.identity(d) for d in x.dims], validate=False)


def zero_map(x: RepObject, y: RepObject) -> RepMap:
    return RepMap(x, y, [Matrix.zeros(dy, dx) for dx, dy in zip(x.dims, y.dims)], validate=False)


# ---------------------------------------------------------------------------
# Basic objects


def zero_object(site: Site) -> RepObject:
    act = {key: Matrix.zeros(0, 0) for key in site.all_class_keys()}
    return RepObject(site, [0] * site.n, act, label="0",
                     edecomp=EDecomp([], None), validate=False)


def unit_object(site: Site) -> RepObject:
    """The constant functor with value k; equals e_1 when 1 is in the site."""
    one = Matrix.identity(1)
    act = {key: one for key in site.all_class_keys()}
    unit = RepObject(site, [1] * site.n, act, label="unit")
    for i, g in enumerate(site.objects):
        if g.order == 1:
            # literally e_1: one surjection class T -> 1 for every T
            unit.edecomp = EDecomp([unit], None)
            unit._ekind = ("regular", i, None, None)
            break
    return unit


def make_e(site: Site, gidx: int, v="regular") -> RepObject:
    """The standard projective e_{G,V}.

    v is "regular" (gives e_G with value k[Hom(-, G)]), "trivial" (gives c_G
    with value k[Hom(-, G)/Out(G)]), or an OutRep, in which case the value at
    T is the image of the averaging idempotent on V (x) k[Hom(T, G)].
    """
    _site_gate(site)
    if not (0 <= gidx < site.n):
        raise RepError("group is not a site object")
    glabel = site.objects[gidx].label
    if isinstance(v, str) and v == "regular":
        dims = [len(site.homs[(t, gidx)]) for t in range(site.n)]
        partial = {}
        for (i, j, c) in site.generators:
            m = Matrix.zeros(dims[i], dims[j])
            for a in range(dims[j]):
                # precomposition: [alpha] |-> [alpha o beta]
                target = site.comp[(i, j, c), (j, gidx, a)]
                m._d[target][a] = scalar(1)
            partial[(i, j, c)] = m
        act = complete_actions(site, partial, dims)
        obj = RepObject(site, dims, act, label=f"e[{glabel}]")
        obj.edecomp = EDecomp([obj], None)
        obj._ekind = ("regular", gidx, None, None)
        return obj
    if isinstance(v, str) and v == "trivial":
        orbits = _hom_orbits(site, gidx)
        dims = [len(orbits[t]) for t in range(site.n)]
        partial = {}
        for (i, j, c) in site.generators:
            m = Matrix.zeros(dims[i], dims[j])
            for a, orb in enumerate(orbits[j]):
                target_class = site.comp[(i, j, c), (j, gidx, orb[0])]
                ti = _orbit_index(orbits[i], target_class)
                m._d[ti][a] = scalar(1)
            partial[(i, j, c)] = m
        act = complete_actions(site, partial, dims)
        obj = RepObject(site, dims, act, label=f"c[{glabel}]")
        obj.edecomp = EDecomp([obj], None)
        obj._ekind = ("trivial", gidx, None, orbits)
        return obj
    assert isinstance(v, OutRep) and v.gidx == gidx
    nout = len(site.out_classes(gidx))
    bases = []
    amb_dims = []
    for t in range(site.n):
        homs = site.homs[(t, gidx)]
        amb = v.dim * len(homs)
        amb_dims.append(amb)
        if amb == 0:
            bases.append(Matrix.zeros(0, 0))
            continue
        idem = Matrix.zeros(amb, amb)
        for c in site.out_classes(gidx):
            perm = Matrix.zeros(len(homs), len(homs))
            for a in range(len(homs)):
                perm._d[site.comp[(t, gidx, a), (gidx, gidx, c)]][a] = scalar(1)
            idem = idem + kron(v.mats[c], perm)
        idem = idem.scale(scalar(1) / nout)
        basis, _ = idem.column_space_basis()
        bases.append(basis)
    dims = [b.cols for b in bases]
    partial = {}
    for (i, j, c) in site.generators:
        homs_j = site.homs[(j, gidx)]
        homs_i = site.homs[(i, gidx)]
        pre = Matrix.zeros(len(homs_i), len(homs_j))
        for a in range(len(homs_j)):
            pre._d[site.comp[(i, j, c), (j, gidx, a)]][a] = scalar(1)
        ambient = kron(Matrix.identity(v.dim), pre)
        sol = bases[i].solve_right(ambient @ bases[j])
        assert sol is not None, "idempotent image is not action-stable"
        partial[(i, j, c)] = sol
    act = complete_actions(site, partial, dims)
    obj = RepObject(site, dims, act, label=f"e[{glabel},V{v.dim}]")
    obj.edecomp = EDecomp([obj], None)
    obj._ekind = ("general", gidx, v, bases)
    return obj


def standard_e(site: Site, gidx: int) -> RepObject:
    """Cached e_G with the regular Out-representation."""
    cache = getattr(site, "_e_cache", None)
    if cache is None:
        cache = {}
        site._e_cache = cache
    if gidx not in cache:
        cache[gidx] = make_e(site, gidx, "regular")
    return cache[gidx]


def _hom_orbits(site: Site, gidx: int) -> list:
    """Orbits of each Hom(T, G) under post-composition with Out(G), each
    orbit sorted, orbits sorted by least member."""
    out = []
    for t in range(site.n):
        n = len(site.homs[(t, gidx)])
        seen = set()
        orbits = []
        for a in range(n):
            if a in seen:
                continue
            orb = sorted({site.comp[(t, gidx, a), (gidx, gidx, c)] for c in site.out_classes(gidx)})
            seen.update(orb)
            orbits.append(tuple(orb))
        out.append(sorted(orbits))
    return out


def _orbit_index(orbits, cls: int) -> int:
    for i, orb in enumerate(orbits):
        if cls in orb:
            return i
    raise RepError("class missing from orbit partition")


def direct_sum(objs) -> tuple:
    """(sum, injections, projections); provenance is combined when every
    summand has it."""
    objs = list(objs)
    assert objs, "direct sum of nothing"
    site = objs[0].site
    dims = [sum(o.dims[i] for o in objs) for i in range(site.n)]
    act = {}
    for key in site.all_class_keys():
        act[key] = block_diag([o.act[key] for o in objs])
    label = "(" + "+".join(o.label for o in objs) + ")"
    total = RepObject(site, dims, act, label=label, validate=False)
    injections, projections = [], []
    for k, o in enumerate(objs):
        inj, proj = [], []
        for i in range(site.n):
            before = sum(p.dims[i] for p in objs[:k])
            inj_m = Matrix.zeros(dims[i], o.dims[i])
            proj_m = Matrix.zeros(o.dims[i], dims[i])
            for r in range(o.dims[i]):
                inj_m._d[before + r][r] = scalar(1)
                proj_m._d[r][before + r] = scalar(1)
            inj.append(inj_m)
            proj.append(proj_m)
        injections.append(RepMap(o, total, inj, validate=False))
        projections.append(RepMap(total, o, proj, validate=False))
    if all(o.edecomp is not None for o in objs):
        parts = []
        isos = []
        for o in objs:
            parts.extend(o.edecomp.parts)
            isos.append(o.edecomp.iso if o.edecomp.iso is not None else identity_map(o))
        if parts:
            iso_mats = [block_diag([f.mats[i] for f in isos]) for i in range(site.n)]
            canon_dims = dims  # same dims blockwise
            total.edecomp = EDecomp(parts, _BlockIso(iso_mats, canon_dims))
        else:
            total.edecomp = EDecomp([], None)
    return total, injections, projections


class _BlockIso:
    """Component matrices of the iso onto the canonical generator sum; only
    the matrices are needed by the hom fast path."""

    def __init__(self, mats, dims):
        self.mats = mats
        self.dims = dims


# ---------------------------------------------------------------------------
# Hom spaces


def hom_space(x: RepObject, y: RepObject) -> list:
    """A basis of the natural transformations x -> y."""
    cached = x._hom_cache.get(id(y))
    if cached is not None and cached[0] is y:
        return cached[1]
    if x.edecomp is not None:
        basis = _hom_basis_from_decomposition(x, y)
    else:
        basis = _hom_basis_by_solving(x, y)
    x._hom_cache[id(y)] = (y, basis)
    return basis


def _generator_hom_basis(part: RepObject, y: RepObject) -> list:
    """Basis of Hom(e_{G,V}, Y) read off from the generator structure."""
    site = part.site
    kind, gidx, v, extra = part._ekind
    out = []
    if kind == "regular":
        for col in range(y.dims[gidx]):
            mats = []
            for t in range(site.n):
                cols = [y.act[(t, gidx, a)].col_list(col)
                        for a in range(len(site.homs[(t, gidx)]))]
                mats.append(Matrix.from_cols(cols, nrows=y.dims[t]))
            out.append(RepMap(part, y, mats, validate=False))
        return out
    if kind == "trivial":
        orbits = extra
        inv = _invariant_basis(y, gidx)
        for w in inv:
            mats = []
            for t in range(site.n):
                cols = [ (y.act[(t, gidx, orb[0])] @ w).col_list(0) for orb in orbits[t] ]
                mats.append(Matrix.from_cols(cols, nrows=y.dims[t]))
            out.append(RepMap(part, y, mats, validate=False))
        return out
    # general V: equivariant maps M : V -> Y(G), i.e. act[c] @ M @ rho(c) = M
    bases = extra
    dv, dy = v.dim, y.dims[gidx]
    if dv * dy == 0:
        return []
    rows = []
    for c in site.out_classes(gidx):
        if c == site.identity_class[gidx]:
            continue
        op = kron(y.act[(gidx, gidx, c)], v.mats[c].transpose()) - Matrix.identity(dv * dy)
        rows.append(op)
    if rows:
        stacked = Matrix(sum(r.rows for r in rows), dv * dy,
                         [row for r in rows for row in r._d])
        vecs = stacked.kernel_basis()
    else:
        vecs = Matrix.identity(dv * dy)
    for k in range(vecs.cols):
        m = _unvec(vecs.col(k), dy, dv)
        mats = []
        for t in range(site.n):
            homs = site.homs[(t, gidx)]
            if part.dims[t] == 0:
                mats.append(Matrix.zeros(y.dims[t], 0))
                continue
            cols = []
            for vi in range(dv):
                mv = m.col(vi)
                for a in range(len(homs)):
                    cols.append((y.act[(t, gidx, a)] @ mv).col_list(0))
            amb = Matrix.from_cols(cols, nrows=y.dims[t])
            mats.append(amb @ bases[t])
        out.append(RepMap(part, y, mats, validate=False))
    return out


def _invariant_basis(y: RepObject, gidx: int) -> list:
    """Columns spanning the Out(G)-invariants of Y(G) under c |-> act[c]."""
    site = y.site
    d = y.dims[gidx]
    if d == 0:
        return []
    rows = []
    for c in site.out_classes(gidx):
        if c == site.identity_class[gidx]:
            continue
        rows.extend((y.act[(gidx, gidx, c)] - Matrix.identity(d))._d)
    if not rows:
        k = Matrix.identity(d)
    else:
        k = Matrix(len(rows), d, [list(r) for r in rows]).kernel_basis()
    return [k.col(j) for j in range(k.cols)]


def _hom_basis_from_decomposition(x: RepObject, y: RepObject) -> list:
    dec = x.edecomp
    if not dec.parts:
        return []
    site = x.site
    offsets = []
    pos = [0] * site.n
    for part in dec.parts:
        offsets.append(list(pos))
        for i in range(site.n):
            pos[i] += part.dims[i]
    total_dims = pos
    out = []
    for part, off in zip(dec.parts, offsets):
        for f in _generator_hom_basis(part, y):
            mats = []
            for i in range(site.n):
                m = Matrix.zeros(y.dims[i], total_dims[i])
                fm = f.mats[i]
                for r in range(fm.rows):
                    row = m._d[r]
                    frow = fm._d[r]
                    for c in range(fm.cols):
                        row[off[i] + c] = frow[c]
                mats.append(m)
            if dec.iso is not None:
                mats = [m @ g for m, g in zip(mats, dec.iso.mats)]
            out.append(RepMap(x, y, mats, validate=False))
    return out


def _hom_basis_by_solving(x: RepObject, y: RepObject) -> list:
    site = x.site
    sizes = [y.dims[i] * x.dims[i] for i in range(site.n)]
    total = sum(sizes)
    if total == 0:
        return []
    starts = [sum(sizes[:i]) for i in range(site.n)]
    basis = Matrix.identity(total)
    for key in sorted(site.generators):
        i, j, c = key
        a = x.act[key]
        b = y.act[key]
        rows = y.dims[i] * x.dims[j]
        if rows == 0 or basis.cols == 0:
            continue
        m = Matrix.zeros(rows, total)
        left = kron(Matrix.identity(y.dims[i]), a.transpose())
        for r in range(rows):
            mr = m._d[r]
            lr = left._d[r]
            for cc in range(sizes[i]):
                mr[starts[i] + cc] = lr[cc]
        right = kron(b, Matrix.identity(x.dims[j]))
        for r in range(rows):
            mr = m._d[r]
            rr = right._d[r]
            for cc in range(sizes[j]):
                mr[starts[j] + cc] = mr[starts[j] + cc] - rr[cc]
        mk = m @ basis
        basis = basis @ mk.kernel_basis()
        if basis.cols == 0:
            break
    out = []
    for k in range(basis.cols):
        col = basis.col(k)
        mats = []
        for i in range(site.n):
            seg = [col.entry(starts[i] + t, 0) for t in range(sizes[i])]
            mats.append(_unvec_list(seg, y.dims[i], x.dims[i]))
        out.append(RepMap(x, y, mats, validate=False))
    return out


def _unvec(col: Matrix, rows: int, cols: int) -> Matrix:
    return _unvec_list([col.entry(i, 0) for i in range(col.rows)], rows, cols)


def _unvec_list(seg, rows: int, cols: int) -> Matrix:
    assert len(seg) == rows * cols
    return Matrix(rows, cols, [list(seg[r * cols:(r + 1) * cols]) for r in range(rows)])


def vec_map(f: RepMap) -> list:
    out = []
    for m in f.mats:
        for row in m._d:
            out.extend(row)
    return out


# ---------------------------------------------------------------------------
# Kernels, images, cokernels, subquotients


class ExactPieces:
    def __init__(self, kernel, ker_incl, image, img_factor, img_incl, cokernel, coker_proj, coker_section):
        self.kernel = kernel
        self.ker_incl = ker_incl
        self.image = image
        self.img_factor = img_factor
        self.img_incl = img_incl
        self.cokernel = cokernel
        self.coker_proj = coker_proj
        self.coker_section = coker_section


def subobject_from_columns(x: RepObject, columns, label: str = "sub") -> tuple:
    """Build the subobject spanned pointwise by the given columns (one
    Matrix of column vectors per site object; must be action-stable).
    Returns (subobject, inclusion)."""
    site = x.site
    bases = []
    for i in range(site.n):
        cols = columns[i]
        if cols.cols == 0:
            bases.append(Matrix.zeros(x.dims[i], 0))
            continue
        basis, _ = cols.column_space_basis()
        bases.append(basis)
    dims = [b.cols for b in bases]
    partial = {}
    for key in site.generators:
        i, j, _ = key
        sol = bases[i].solve_right(x.act[key] @ bases[j])
        if sol is None:
            raise RepError("columns are not action-stable")
        partial[key] = sol
    act = complete_actions(site, partial, dims)
    sub = RepObject(site, dims, act, label=label)
    incl = RepMap(sub, x, bases)
    return sub, incl


def quotient_by_subobject(y: RepObject, incl: RepMap, label: str = "quot") -> tuple:
    """(quotient, projection, section) of y by the image of incl."""
    site = y.site
    projs, sections = [], []
    for i in range(site.n):
        b = incl.mats[i]
        aug = hstack([b, Matrix.identity(y.dims[i])]) if y.dims[i] else Matrix.zeros(0, b.cols)
        _, pivots = aug.rref()
        comp_idx = [p - b.cols for p in pivots if p >= b.cols]
        section = Matrix.zeros(y.dims[i], len(comp_idx))
        for k, idx in enumerate(comp_idx):
            section._d[idx][k] = scalar(1)
        sq = hstack([b.select_cols([p for p in pivots if p < b.cols]), section]) if y.dims[i] else Matrix.zeros(0, 0)
        if y.dims[i]:
            inv = sq.inverse()
            assert inv is not None
            proj = Matrix(len(comp_idx), y.dims[i], inv._d[sq.cols - len(comp_idx):])
        else:
            proj = Matrix.zeros(0, 0)
        projs.append(proj)
        sections.append(section)
    dims = [p.rows for p in projs]
    partial = {}
    for key in site.generators:
        i, j, _ = key
        partial[key] = projs[i] @ y.act[key] @ sections[j]
    act = complete_actions(site, partial, dims)
    quot = RepObject(site, dims, act, label=label)
    proj_map = RepMap(y, quot, projs)
    section_map = RepMap(quot, y, sections, validate=False)  # a section, not natural in general
    return quot, proj_map, section_map


def exact_pieces(f: RepMap) -> ExactPieces:
    x, y = f.source, f.target
    site = x.site
    ker_cols = [f.mats[i].kernel_basis() for i in range(site.n)]
    kernel, ker_incl = subobject_from_columns(x, ker_cols, label=f"ker({x.label})")
    img_cols = [f.mats[i] for i in range(site.n)]
    image, img_incl = subobject_from_columns(y, img_cols, label=f"im({x.label})")
    factor_mats = []
    for i in range(site.n):
        sol = img_incl.mats[i].solve_right(f.mats[i])
        assert sol is not None
        factor_mats.append(sol)
    img_factor = RepMap(x, image, factor_mats)
    cokernel, coker_proj, coker_section = quotient_by_subobject(y, img_incl, label=f"coker({x.label})")
    if VALIDATE:
        assert (f @ ker_incl).is_zero()
        assert (coker_proj @ f).is_zero()
        for i in range(site.n):
            assert kernel.dims[i] + image.dims[i] == x.dims[i]
            assert image.dims[i] + cokernel.dims[i] == y.dims[i]
    return ExactPieces(kernel, ker_incl, image, img_factor, img_incl,
                       cokernel, coker_proj, coker_section)


# ---------------------------------------------------------------------------
# Monoidal structure


def tensor(x: RepObject, y: RepObject) -> RepObject:
    site = x.site
    dims = [x.dims[i] * y.dims[i] for i in range(site.n)]
    act = {key: kron(x.act[key], y.act[key]) for key in site.all_class_keys()}
    return RepObject(site, dims, act, label=f"({x.label}(x){y.label})", validate=False)


def tensor_map(f: RepMap, g: RepMap, source=None, target=None) -> RepMap:
    src = source if source is not None else tensor(f.source, g.source)
    tgt = target if target is not None else tensor(f.target, g.target)
    return RepMap(src, tgt, [kron(a, b) for a, b in zip(f.mats, g.mats)], validate=False)


class IHomData:
    """iHom(X, Y) together with the chosen bases: per site object, the basis
    of Hom(e_G (x) X, Y) and its stacked vec-matrix for coordinate solves."""

    def __init__(self, obj, bases, stacked, e_objs, tensors):
        self.obj = obj
        self.bases = bases
        self.stacked = stacked
        self.e_objs = e_objs
        self.tensors = tensors

    def coords(self, gidx: int, f: RepMap) -> Matrix:
        vec = Matrix.from_cols([vec_map(f)], nrows=self.stacked[gidx].rows) \
            if self.stacked[gidx].rows else Matrix.zeros(0, 1)
        sol = self.stacked[gidx].solve_right(vec)
        assert sol is not None, "map does not lie in the hom space"
        return sol


def ihom(x: RepObject, y: RepObject) -> IHomData:
    """Internal hom: value at G is Hom(e_G (x) X, Y); the contravariant
    action precomposes with the maps e_alpha (x) 1 induced on generators by
    post-composition of hom classes."""
    site = x.site
    e_objs = [standard_e(site, g) for g in range(site.n)]
    tensors = [tensor(e_objs[g], x) for g in range(site.n)]
    bases = [hom_space(tensors[g], y) for g in range(site.n)]
    dims = [len(b) for b in bases]
    stacked = []
    for g in range(site.n):
        cols = [vec_map(f) for f in bases[g]]
        nrows = sum(y.dims[i] * tensors[g].dims[i] for i in range(site.n))
        stacked.append(Matrix.from_cols(cols, nrows=nrows))
    partial = {}
    for key in site.generators:
        i, j, _ = key
        ealpha = _e_post_map(e_objs[i], e_objs[j], key)
        comp_mats = [kron(ealpha.mats[t], Matrix.identity(x.dims[t])) for t in range(site.n)]
        m = Matrix.zeros(dims[i], dims[j])
        for bcol, f in enumerate(bases[j]):
            composed = RepMap(tensors[i], y,
                              [f.mats[t] @ comp_mats[t] for t in range(site.n)], validate=False)
            vec = vec_map(composed)
            sol = stacked[i].solve_right(Matrix.from_cols([vec], nrows=stacked[i].rows)) \
                if stacked[i].rows else Matrix.zeros(dims[i], 1)
            assert sol is not None
            for r in range(dims[i]):
                m._d[r][bcol] = sol.entry(r, 0)
        partial[key] = m
    act = complete_actions(site, partial, dims)
    obj = RepObject(site, dims, act, label=f"iHom({x.label},{y.label})")
    return IHomData(obj, bases, stacked, e_objs, tensors)


def _e_post_map(e_i: RepObject, e_j: RepObject, key) -> RepMap:
    """The covariant map e_{G_i} -> e_{G_j} induced by a class G_i -> G_j:
    post-composition on hom classes."""
    i, j, c = key
    site = e_i.site
    mats = []
    for t in range(site.n):
        m = Matrix.zeros(e_j.dims[t], e_i.dims[t])
        for a in range(e_i.dims[t]):
            m._d[site.comp[(t, i, a), key]][a] = scalar(1)
        mats.append(m)
    return RepMap(e_i, e_j, mats)


def ihom_post(data: IHomData, data2: IHomData, v: RepMap) -> RepMap:
    """iHom(X, Y) -> iHom(X, Y'): post-composition with v: Y -> Y'."""
    site = data.obj.site
    mats = []
    for g in range(site.n):
        m = Matrix.zeros(data2.obj.dims[g], data.obj.dims[g])
        for bcol, f in enumerate(data.bases[g]):
            composed = RepMap(data.tensors[g], v.target,
                              [v.mats[t] @ f.mats[t] for t in range(site.n)], validate=False)
            sol = data2.coords(g, composed)
            for r in range(m.rows):
                m._d[r][bcol] = sol.entry(r, 0)
        mats.append(m)
    return RepMap(data.obj, data2.obj, mats)


def ihom_pre(data: IHomData, data2: IHomData, u: RepMap) -> RepMap:
    """iHom(X, Y) -> iHom(X', Y): precomposition with 1 (x) u for u: X' -> X."""
    site = data.obj.site
    mats = []
    for g in range(site.n):
        m = Matrix.zeros(data2.obj.dims[g], data.obj.dims[g])
        for bcol, f in enumerate(data.bases[g]):
            comp_mats = [f.mats[t] @ kron(Matrix.identity(data.e_objs[g].dims[t]), u.mats[t])
                         for t in range(site.n)]
            composed = RepMap(data2.tensors[g], f.target, comp_mats, validate=False)
            sol = data2.coords(g, composed)
            for r in range(m.rows):
                m._d[r][bcol] = sol.entry(r, 0)
        mats.append(m)
    return RepMap(data.obj, data2.obj, mats)


def ihom_unit_iso(data: IHomData, y: RepObject) -> RepMap:
    """The canonical iso iHom(unit, Y) -> Y: evaluate at the identity class."""
    site = y.site
    mats = []
    for g in range(site.n):
        ident = site.identity_class[g]
        cols = []
        for f in data.bases[g]:
            cols.append(f.mats[g].col_list(ident))
        mats.append(Matrix.from_cols(cols, nrows=y.dims[g]))
    return RepMap(data.obj, y, mats)


# ---------------------------------------------------------------------------
# Projectivity via the counit


def counit_P0(x: RepObject) -> tuple:
    """(P0, eps): P0 is the sum over G of e_{G, X(G)} and eps evaluates.
    eps is a natural epimorphism for every x."""
    site = x.site
    parts = []
    meta = []
    eps_blocks = []
    for g in range(site.n):
        if x.dims[g] == 0:
            continue
        v = value_out_rep(x, g)
        part = make_e(site, g, v)
        parts.append(part)
        _, _, _, bases = part._ekind
        meta.append((g, v, part, bases))
        blocks = []
        for t in range(site.n):
            homs = site.homs[(t, g)]
            if part.dims[t] == 0:
                blocks.append(Matrix.zeros(x.dims[t], part.dims[t]))
                continue
            cols = []
            for vi in range(v.dim):
                for a in range(len(homs)):
                    cols.append(x.act[(t, g, a)].col(vi).col_list(0))
            amb = Matrix.from_cols(cols, nrows=x.dims[t])
            blocks.append(amb @ bases[t])
        eps_blocks.append(blocks)
    if not parts:
        p0 = zero_object(site)
        p0._counit_meta = []
        return p0, zero_map(p0, x)
    p0, _, projections = direct_sum(parts)
    p0._counit_meta = meta
    mats = []
    for t in range(site.n):
        mats.append(hstack([blocks[t] for blocks in eps_blocks]))
    eps = RepMap(p0, x, mats)
    if VALIDATE:
        assert eps.is_pointwise_surjective(), "counit must be an epimorphism"
    return p0, eps


def projectivity_section(x: RepObject):
    """A natural section of the counit P0 -> x, or None: x is projective
    exactly when one exists."""
    if x.is_zero():
        return identity_map(x)
    p0, eps = counit_P0(x)
    basis = hom_space(x, p0)
    if not basis:
        return None
    cols = [vec_map(eps @ f) for f in basis]
    target = vec_map(identity_map(x))
    nrows = sum(d * d for d in x.dims)
    m = Matrix.from_cols(cols, nrows=nrows)
    sol = m.solve_right(Matrix.from_cols([target], nrows=nrows))
    if sol is None:
        return None
    section = zero_map(x, p0)
    for k, f in enumerate(basis):
        c = sol.entry(k, 0)
        if c:
            section = section + f.scale(c)
    if VALIDATE:
        assert (eps @ section).mats == identity_map(x).mats
    return section


def is_projective(x: RepObject) -> bool:
    if x.edecomp is not None:
        return True
    return projectivity_section(x) is not None


# ---------------------------------------------------------------------------
# The order filtration, purity, torsion


def l_filtration(x: RepObject, s: int) -> dict:
    """The subobject generated by all values at groups of order <= s, and
    its top layer.

    Returns {"sub": L_{<=s}, "incl": into x, "layer": L_s,
    "layer_proj": L_{<=s} -> L_s, "prev_incl": L_{<=s-1} -> L_{<=s}}.
    """
    assert s >= 0
    site = x.site
    sub, incl = _l_sub(x, s)
    prev, prev_incl_x = _l_sub(x, s - 1)
    prev_in_sub = []
    for i in range(site.n):
        sol = incl.mats[i].solve_right(prev_incl_x.mats[i])
        assert sol is not None
        prev_in_sub.append(sol)
    prev_map = RepMap(prev, sub, prev_in_sub)
    layer, layer_proj, _ = quotient_by_subobject(sub, prev_map, label=f"L{s}({x.label})")
    return {
        "sub": sub,
        "incl": incl,
        "prev": prev,
        "prev_incl": prev_map,
        "layer": layer,
        "layer_proj": layer_proj,
    }


def _l_sub(x: RepObject, s: int) -> tuple:
    site = x.site
    cols = []
    for t in range(site.n):
        pieces = [Matrix.zeros(x.dims[t], 0)]
        for g in range(site.n):
            if site.order(g) <= s:
                for c in range(len(site.homs[(t, g)])):
                    pieces.append(x.act[(t, g, c)])
        cols.append(hstack(pieces))
    return subobject_from_columns(x, cols, label=f"L<={s}({x.label})")


def is_s_pure(q: RepObject, s: int) -> bool:
    """Purity via the counit from the order-s layer: build the sum of
    e_{G, Q(G)} over |G| = s and test pointwise bijectivity."""
    site = q.site
    parts = []
    blocks_per_part = []
    for g in site.objects_of_order(s):
        if q.dims[g] == 0:
            continue
        v = value_out_rep(q, g)
        part = make_e(site, g, v)
        _, _, _, bases = part._ekind
        blocks = []
        for t in range(site.n):
            if part.dims[t] == 0:
                blocks.append(Matrix.zeros(q.dims[t], 0))
                continue
            cols = []
            for vi in range(v.dim):
                for a in range(len(site.homs[(t, g)])):
                    cols.append(q.act[(t, g, a)].col(vi).col_list(0))
            blocks.append(Matrix.from_cols(cols, nrows=q.dims[t]) @ bases[t])
        parts.append(part)
        blocks_per_part.append(blocks)
    if not parts:
        return q.is_zero()
    for t in range(site.n):
        m = hstack([blocks[t] for blocks in blocks_per_part])
        if m.rows != m.cols or not m.is_invertible():
            return False
    return True


def torsion_classes_into(site: Site, gidx: int) -> list:
    return site.classes_into(gidx)


def is_torsion_free_vector(x: RepObject, gidx: int, vec: Matrix) -> bool:
    if vec.is_zero():
        return False
    for key in x.site.classes_into(gidx):
        if (x.act[key] @ vec).is_zero():
            return False
    return True


def torsion_free_search(x: RepObject, gidx: int):
    """A torsion-free vector in X(G), or None.

    One exists iff no class into G acts by zero on X(G) (finitely many
    proper subspaces cannot cover a rational space); the search enumerates
    integer vectors by increasing max-norm, so it is deterministic, and the
    norm bound (number of classes) is a certified cutoff.
    """
    d = x.dims[gidx]
    if d == 0:
        return None
    keys = x.site.classes_into(gidx)
    for key in keys:
        if x.act[key].is_zero():
            return None
    bound = max(1, len(keys))
    for vec in _integer_vectors(d, bound):
        m = Matrix.from_cols([vec], nrows=d)
        if is_torsion_free_vector(x, gidx, m):
            return m
    raise RepError("internal error: torsion-free vector must exist within the norm bound")


def _integer_vectors(dim: int, max_norm: int):
    """All nonzero integer vectors with max-norm m = 1, 2, ..., in
    lexicographic order within each norm shell."""
    import itertools as it

    for m in range(1, max_norm + 1):
        for vec in it.product(range(-m, m + 1), repeat=dim):
            if max(abs(v) for v in vec) == m:
                yield [scalar(v) for v in vec]


# ---------------------------------------------------------------------------
# Isomorphism search


def find_iso(x: RepObject, y: RepObject, max_grid: int = 200000):
    """An invertible natural transformation x -> y, or None.

    Scans integer coefficient combinations of the hom-space basis in
    increasing max-norm.  The grid {0..D}^m with D the total determinant
    degree is decisive by the polynomial identity theorem; if that grid is
    out of reach the scan is truncated (sufficient for every use at desk
    scale, where isos show up with tiny coefficients).
    """
    if x.dims != y.dims:
        return None
    if x.is_zero():
        return identity_map(x)
    basis = hom_space(x, y)
    if not basis:
        return None
    m = len(basis)
    degree = sum(x.dims)
    count = 0
    for coeffs in _integer_vectors(m, degree + 1):
        count += 1
        if count > max_grid:
            return None
        f = None
        for c, b in zip(coeffs, basis):
            if c:
                f = b.scale(c) if f is None else f + b.scale(c)
        if f is None:
            continue
        if f.is_iso():
            return f
    return None


# ---------------------------------------------------------------------------
# Serialization


def rep_to_json(x: RepObject) -> dict:
    return {
        "site_hash": x.site.hash,
        "label": x.label,
        "dims": list(x.dims),
        "act": {
            f"{i},{j},{c}": matrix_to_json(m)
            for (i, j, c), m in sorted(x.act.items())
        },
    }


def rep_from_json(site: Site, obj) -> RepObject:
    if obj.get("site_hash") and obj["site_hash"] != site.hash:
        raise RepError("representation file belongs to a different site")
    act = {}
    for key, m in obj["act"].items():
        i, j, c = (int(t) for t in key.split(","))
        act[(i, j, c)] = matrix_from_json(m)
    return RepObject(site, obj["dims"], act, label=obj.get("label", "X"))


def repmap_to_json(f: RepMap) -> dict:
    return {
        "site_hash": f.source.site.hash,
        "mats": [matrix_to_json(m) for m in f.mats],
    }


def repmap_from_json(source: RepObject, target: RepObject, obj) -> RepMap:
    return RepMap(source, target, [matrix_from_json(m) for m in obj["mats"]])
