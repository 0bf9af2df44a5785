"""Bounded chain complexes of global representations.

Homological (lower) indexing: d_n goes from degree n to degree n-1 and
d o d = 0 is validated on construction.  Shifting by k multiplies the
differential by (-1)^k so that mapping-cone projections are honest chain
maps.  The hom complex pairs every bidegree through hom-space bases, so its
differentials are small coordinate matrices; tensor complexes use the usual
sign (-1)^i on the second factor.
"""

from __future__ import annotations

from .exactlin import Matrix, hstack, kron, scalar
from .natsolve import MapSystem
from .rep import (
    RepMap,
    RepObject,
    direct_sum,
    hom_space,
    identity_map,
    is_projective,
    quotient_by_subobject,
    subobject_from_columns,
    tensor,
    vec_map,
    zero_map,
    zero_object,
    _l_sub,
)
from .site import Site


class ComplexError(ValueError):
    pass


class Complex:
    """Terms X_n for lo <= n <= hi and differentials d_n: X_n -> X_{n-1}."""

    def __init__(self, site: Site, lo: int, hi: int, terms: dict, diffs: dict,
                 validate: bool = True):
        assert lo <= hi + 1
        self.site = site
        self.lo = lo
        self.hi = hi
        self.terms = dict(terms)
        self.diffs = dict(diffs)
        self._zero = None
        for n in range(lo, hi + 1):
            assert n in self.terms, f"missing term in degree {n}"
        if validate:
            self.validate()

    def validate(self):
        for n in range(self.lo + 1, self.hi + 1):
            d = self.diffs.get(n)
            assert d is not None, f"missing differential in degree {n}"
            assert d.source.dims == self.terms[n].dims
            assert d.target.dims == self.terms[n - 1].dims
            if n - 1 > self.lo:
                dd = self.diffs[n - 1] @ d
                if not dd.is_zero():
                    raise ComplexError(f"d^2 != 0 between degrees {n} and {n - 2}")

    def term(self, n: int) -> RepObject:
        if self.lo <= n <= self.hi:
            return self.terms[n]
        if self._zero is None:
            self._zero = zero_object(self.site)
        return self._zero

    def diff(self, n: int) -> RepMap:
        if self.lo + 1 <= n <= self.hi:
            return self.diffs[n]
        return zero_map(self.term(n), self.term(n - 1))

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def dims_table(self) -> dict:
        return {n: self.terms[n].dims for n in self.degrees()}

    def is_zero(self) -> bool:
        return all(self.terms[n].is_zero() for n in self.degrees())

    def total_dim(self) -> int:
        return sum(self.terms[n].total_dim() for n in self.degrees())

    def __repr__(self):
        return f"Complex([{self.lo},{self.hi}], dims={self.dims_table()})"


def single_complex(obj: RepObject, degree: int = 0) -> Complex:
    return Complex(obj.site, degree, degree, {degree: obj}, {})


def zero_complex(site: Site) -> Complex:
    z = zero_object(site)
    return Complex(site, 0, 0, {0: z}, {})


def trim(c: Complex) -> Complex:
    """Drop zero terms at both ends (keeping at least one degree)."""
    lo, hi = c.lo, c.hi
    while lo < hi and c.terms[lo].is_zero():
        lo += 1
    while hi > lo and c.terms[hi].is_zero():
        hi -= 1
    terms = {n: c.terms[n] for n in range(lo, hi + 1)}
    diffs = {n: c.diffs[n] for n in range(lo + 1, hi + 1)}
    return Complex(c.site, lo, hi, terms, diffs, validate=False)


def shift(c: Complex, k: int) -> Complex:
    """Suspension: (shift(C,k))_n = C_{n-k}, differential scaled by (-1)^k."""
    terms = {n + k: c.terms[n] for n in c.degrees()}
    sign = scalar(-1 if k % 2 else 1)
    diffs = {}
    for n in range(c.lo + 1, c.hi + 1):
        d = c.diffs[n]
        diffs[n + k] = d if sign == 1 else d.scale(sign)
    return Complex(c.site, c.lo + k, c.hi + k, terms, diffs, validate=False)


def delta(site: Site, graded: dict) -> Complex:
    """The contractible complex on a graded object: degree n carries
    U_n + U_{n+1} and the differential is the identity block [[0,0],[1,0]]."""
    if not graded:
        return zero_complex(site)
    lo = min(graded)
    hi = max(graded)
    z = zero_object(site)
    terms = {}
    pieces = {}
    for n in range(lo - 1, hi + 1):
        un = graded.get(n, z)
        un1 = graded.get(n + 1, z)
        total, injs, projs = direct_sum([un, un1])
        terms[n] = total
        pieces[n] = (un, un1, injs, projs)
    diffs = {}
    for n in range(lo, hi + 1):
        un, un1, injs, projs = pieces[n]
        _, _, injs_prev, projs_prev = pieces[n - 1]
        # U_n component of degree n includes as the U_n component of degree n-1
        d = injs_prev[1] @ projs[0]
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats, validate=False)
    return Complex(site, lo - 1, hi, terms, diffs)


def standard_delta_contraction(c: Complex, graded: dict) -> "GradedMap":
    """The contraction s = [[0,1],[0,0]] of delta(graded)."""
    site = c.site
    z = zero_object(site)
    comps = {}
    for n in c.degrees():
        un1 = graded.get(n + 1, z)
        src = c.terms[n]
        tgt = c.term(n + 1)
        mats = []
        for i in range(site.n):
            d_un = src.dims[i] - un1.dims[i]
            m = Matrix.zeros(tgt.dims[i], src.dims[i])
            for r in range(un1.dims[i]):
                m._d[r][d_un + r] = scalar(1)
            mats.append(m)
        comps[n] = RepMap(src, tgt, mats, validate=False)
    return GradedMap(c, c, 1, comps)


class ChainMap:
    def __init__(self, source: Complex, target: Complex, comps: dict, validate: bool = True):
        self.source = source
        self.target = target
        self.comps = dict(comps)
        if validate:
            self.validate()

    def validate(self):
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi + 1):
            f = self.comp(n)
            assert f.source is self.source.term(n) or f.source.dims == self.source.term(n).dims
            lhs = self.target.diff(n) @ self.comp(n)
            rhs = self.comp(n - 1) @ self.source.diff(n)
            if lhs.mats != rhs.mats:
                raise ComplexError(f"chain map does not commute with d in degree {n}")

    def comp(self, n: int) -> RepMap:
        f = self.comps.get(n)
        if f is not None:
            return f
        return zero_map(self.source.term(n), self.target.term(n))

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        comps = {}
        lo = min(other.source.lo, self.target.lo)
        hi = max(other.source.hi, self.target.hi)
        for n in range(lo, hi + 1):
            comps[n] = self.comp(n) @ other.comp(n)
        return ChainMap(other.source, self.target, comps, validate=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        comps = {}
        for n in set(self.comps) | set(other.comps):
            comps[n] = self.comp(n) + other.comp(n)
        return ChainMap(self.source, self.target, comps, validate=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        comps = {}
        for n in set(self.comps) | set(other.comps):
            comps[n] = self.comp(n) - other.comp(n)
        return ChainMap(self.source, self.target, comps, validate=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {n: -f for n, f in self.comps.items()}, validate=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {n: f.scale(c) for n, f in self.comps.items()}, validate=False)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.comps.values())

    def is_pointwise_injective(self) -> bool:
        return all(self.comp(n).is_pointwise_injective()
                   for n in self.source.degrees())

    def is_pointwise_surjective(self) -> bool:
        return all(self.comp(n).is_pointwise_surjective()
                   for n in self.target.degrees())

    def is_iso(self) -> bool:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return all(self.comp(n).is_iso() for n in range(lo, hi + 1))

    def inverse(self) -> "ChainMap":
        assert self.is_iso()
        comps = {}
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi + 1):
            comps[n] = self.comp(n).inverse()
        return ChainMap(self.target, self.source, comps, validate=False)


class GradedMap:
    """A degree-shifting family of natural maps X_n -> Y_{n+degree}; no
    compatibility with the differentials is required."""

    def __init__(self, source: Complex, target: Complex, degree: int, comps: dict):
        self.source = source
        self.target = target
        self.degree = degree
        self.comps = dict(comps)

    def comp(self, n: int) -> RepMap:
        f = self.comps.get(n)
        if f is not None:
            return f
        return zero_map(self.source.term(n), self.target.term(n + self.degree))


def identity_chain_map(c: Complex) -> ChainMap:
    return ChainMap(c, c, {n: identity_map(c.terms[n]) for n in c.degrees()}, validate=False)


def zero_chain_map(c: Complex, d: Complex) -> ChainMap:
    return ChainMap(c, d, {}, validate=False)


def direct_sum_complex(parts) -> tuple:
    parts = list(parts)
    site = parts[0].site
    lo = min(p.lo for p in parts)
    hi = max(p.hi for p in parts)
    terms = {}
    piece_injs = {}
    piece_projs = {}
    for n in range(lo, hi + 1):
        total, injs, projs = direct_sum([p.term(n) for p in parts])
        terms[n] = total
        piece_injs[n] = injs
        piece_projs[n] = projs
    diffs = {}
    for n in range(lo + 1, hi + 1):
        d = None
        for k, p in enumerate(parts):
            piece = piece_injs[n - 1][k] @ p.diff(n) @ piece_projs[n][k]
            d = piece if d is None else d + piece
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats, validate=False)
    total = Complex(site, lo, hi, terms, diffs)
    injections = []
    projections = []
    for k, p in enumerate(parts):
        injections.append(ChainMap(p, total, {n: piece_injs[n][k] for n in range(lo, hi + 1)}, validate=False))
        projections.append(ChainMap(total, p, {n: piece_projs[n][k] for n in range(lo, hi + 1)}, validate=False))
    return total, injections, projections


# ---------------------------------------------------------------------------
# Homology


class HomologyData:
    def __init__(self, degree, cycles, cycle_incl, boundary_in_cycles, homology, proj, section):
        self.degree = degree
        self.cycles = cycles
        self.cycle_incl = cycle_incl
        self.boundary_in_cycles = boundary_in_cycles
        self.homology = homology
        self.proj = proj          # cycles -> homology
        self.section = section    # homology -> cycles (pointwise linear section)


def homology(c: Complex) -> dict:
    """Per degree: cycles, boundaries and the subquotient with its chosen
    basis, all with induced actions."""
    out = {}
    for n in c.degrees():
        d_out = c.diff(n)
        d_in = c.diff(n + 1)
        ker_cols = [d_out.mats[i].kernel_basis() for i in range(c.site.n)]
        cycles, incl = subobject_from_columns(c.terms[n], ker_cols, label=f"Z{n}")
        b_in_z = []
        for i in range(c.site.n):
            sol = incl.mats[i].solve_right(d_in.mats[i])
            assert sol is not None, "boundaries must be cycles"
            b_in_z.append(sol)
        bsub, bincl = subobject_from_columns(cycles, b_in_z, label=f"B{n}")
        h, proj, section = quotient_by_subobject(cycles, bincl, label=f"H{n}")
        out[n] = HomologyData(n, cycles, incl, bincl, h, proj, section)
    return out


def homology_dims(c: Complex) -> dict:
    out = {}
    for n in c.degrees():
        d_out = c.diff(n)
        d_in = c.diff(n + 1)
        dims = []
        for i in range(c.site.n):
            dims.append(c.terms[n].dims[i] - d_out.mats[i].rank() - d_in.mats[i].rank())
        out[n] = tuple(dims)
    return out


def is_acyclic(c: Complex) -> bool:
    return all(all(d == 0 for d in dims) for dims in homology_dims(c).values())


def pointwise_homology_dims(c: Complex, gidx: int) -> dict:
    return {n: dims[gidx] for n, dims in homology_dims(c).items()}


def mapping_cone(f: ChainMap) -> tuple:
    """(cone, inclusion of the target, projection to the shifted source)."""
    x, y = f.source, f.target
    site = x.site
    lo = min(y.lo, x.lo + 1)
    hi = max(y.hi, x.hi + 1)
    terms = {}
    pieces = {}
    for n in range(lo, hi + 1):
        total, injs, projs = direct_sum([y.term(n), x.term(n - 1)])
        terms[n] = total
        pieces[n] = (injs, projs)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        injs_prev, _ = pieces[n - 1]
        _, projs = pieces[n]
        d = (injs_prev[0] @ y.diff(n) @ projs[0]) \
            + (injs_prev[0] @ f.comp(n - 1) @ projs[1]) \
            - (injs_prev[1] @ x.diff(n - 1) @ projs[1])
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats, validate=False)
    cone = Complex(site, lo, hi, terms, diffs)
    sx = shift(x, 1)
    incl = ChainMap(y, cone, {n: pieces[n][0][0] for n in range(lo, hi + 1)}, validate=False)
    proj = ChainMap(cone, sx, {n: pieces[n][1][1] for n in range(lo, hi + 1)})
    return cone, incl, proj


def is_quasi_iso(f: ChainMap) -> bool:
    cone, _, _ = mapping_cone(f)
    return is_acyclic(cone)


# ---------------------------------------------------------------------------
# Hom and tensor complexes


class HomComplexData:
    """The complex of graded hom spaces Hom(X, Y)_n = prod_j Hom(X_j, Y_{j+n})
    as plain vector spaces: coordinate dims, differential matrices, and the
    bases needed to realize coordinate vectors as graded maps."""

    def __init__(self, x: Complex, y: Complex, lo, hi, bases, offsets, dims, d_mats):
        self.x = x
        self.y = y
        self.lo = lo
        self.hi = hi
        self.bases = bases      # {n: {j: basis list}}
        self.offsets = offsets  # {n: {j: offset}}
        self.dims = dims        # {n: total dim}
        self.d_mats = d_mats    # {n: Matrix dims[n] -> dims[n-1]}

    def homology_dims(self) -> dict:
        out = {}
        for n in range(self.lo, self.hi + 1):
            d_out = self.d_mats.get(n)
            d_in = self.d_mats.get(n + 1)
            r_out = d_out.rank() if d_out is not None else 0
            r_in = d_in.rank() if d_in is not None else 0
            out[n] = self.dims[n] - r_out - r_in
        return out

    def realize(self, n: int, coords: Matrix) -> GradedMap:
        comps = {}
        for j, basis in self.bases[n].items():
            off = self.offsets[n][j]
            f = None
            for k, base in enumerate(basis):
                c = coords.entry(off + k, 0)
                if c:
                    f = base.scale(c) if f is None else f + base.scale(c)
            if f is not None:
                comps[j] = f
        return GradedMap(self.x, self.y, n, comps)

    def cycle_coords(self, n: int) -> Matrix:
        d = self.d_mats.get(n)
        if d is None:
            return Matrix.identity(self.dims[n])
        return d.kernel_basis()

    def chain_maps(self) -> list:
        """Basis of Z_0: honest chain maps X -> Y."""
        if 0 < self.lo or 0 > self.hi:
            return []
        k = self.cycle_coords(0)
        out = []
        for j in range(k.cols):
            g = self.realize(0, k.col(j))
            out.append(ChainMap(self.x, self.y, g.comps))
        return out


def hom_complex(x: Complex, y: Complex) -> HomComplexData:
    lo = y.lo - x.hi
    hi = y.hi - x.lo
    bases = {}
    offsets = {}
    dims = {}
    stacked: dict = {}
    for n in range(lo, hi + 1):
        bases[n] = {}
        offsets[n] = {}
        pos = 0
        for j in x.degrees():
            if not (y.lo <= j + n <= y.hi):
                continue
            basis = hom_space(x.terms[j], y.terms[j + n])
            bases[n][j] = basis
            offsets[n][j] = pos
            pos += len(basis)
            key = (j, j + n)
            if key not in stacked and basis:
                nrows = sum(y.terms[j + n].dims[i] * x.terms[j].dims[i]
                            for i in range(x.site.n))
                stacked[key] = Matrix.from_cols([vec_map(f) for f in basis], nrows=nrows)
        dims[n] = pos
    d_mats = {}
    for n in range(lo + 1, hi + 1):
        m = Matrix.zeros(dims[n - 1], dims[n])
        sign = scalar(1 if n % 2 else -1)  # -(-1)^n
        for j, basis in bases[n].items():
            off_in = offsets[n][j]
            # post-composition with d_Y lands in Hom(X_j, Y_{j+n-1})
            if j in bases[n - 1] and basis and bases[n - 1][j]:
                off_out = offsets[n - 1][j]
                dsy = y.diff(j + n)
                cols = [vec_map(dsy @ f) for f in basis]
                key = (j, j + n - 1)
                sol = stacked[key].solve_right(
                    Matrix.from_cols(cols, nrows=stacked[key].rows))
                assert sol is not None
                for r in range(sol.rows):
                    for cidx in range(sol.cols):
                        v = sol.entry(r, cidx)
                        if v:
                            m._d[off_out + r][off_in + cidx] = v
            # precomposition with d_X lands in Hom(X_{j+1}, Y_{j+n})
            jj = j + 1
            if jj in bases[n - 1] and basis and bases[n - 1][jj]:
                off_out = offsets[n - 1][jj]
                dx = x.diff(jj)
                cols = [vec_map(f @ dx) for f in basis]
                key = (jj, j + n)
                sol = stacked[key].solve_right(
                    Matrix.from_cols(cols, nrows=stacked[key].rows))
                assert sol is not None
                for r in range(sol.rows):
                    for cidx in range(sol.cols):
                        v = sol.entry(r, cidx)
                        if v:
                            m._d[off_out + r][off_in + cidx] = \
                                m._d[off_out + r][off_in + cidx] + sign * v
        d_mats[n] = m
    data = HomComplexData(x, y, lo, hi, bases, offsets, dims, d_mats)
    for n in range(lo + 2, hi + 1):
        assert (d_mats[n - 1] @ d_mats[n]).is_zero(), "hom complex signs broken"
    return data


def tensor_complex(x: Complex, y: Complex) -> Complex:
    """Pointwise Kronecker with the sign (-1)^i on d_Y against X_i."""
    site = x.site
    lo = x.lo + y.lo
    hi = x.hi + y.hi
    terms = {}
    pieces = {}
    for n in range(lo, hi + 1):
        parts = []
        index = []
        for i in x.degrees():
            j = n - i
            if y.lo <= j <= y.hi:
                parts.append(tensor(x.terms[i], y.terms[j]))
                index.append((i, j))
        if not parts:
            terms[n] = zero_object(site)
            pieces[n] = ([], [], [])
            continue
        total, injs, projs = direct_sum(parts)
        terms[n] = total
        pieces[n] = (index, injs, projs)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        index, injs, projs = pieces[n]
        index_prev, injs_prev, _ = pieces[n - 1]
        lookup = {pair: k for k, pair in enumerate(index_prev)}
        d = zero_map(terms[n], terms[n - 1])
        for k, (i, j) in enumerate(index):
            # d_X (x) 1
            if (i - 1, j) in lookup:
                piece = tensor_map(x.diffs[i], _idmap(y.terms[j]))
                d = d + (injs_prev[lookup[(i - 1, j)]] @ piece @ projs[k])
            # (-1)^i 1 (x) d_Y
            if (i, j - 1) in lookup:
                piece = tensor_map(_idmap(x.terms[i]), y.diffs[j])
                if i % 2:
                    piece = piece.scale(scalar(-1))
                d = d + (injs_prev[lookup[(i, j - 1)]] @ piece @ projs[k])
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats, validate=False)
    return Complex(site, lo, hi, terms, diffs)


def _idmap(o: RepObject) -> RepMap:
    return identity_map(o)


def tensor_map(f: RepMap, g: RepMap) -> RepMap:
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    return RepMap(src, tgt, [kron(a, b) for a, b in zip(f.mats, g.mats)], validate=False)


def tensor_chain_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """f (x) g, assembled block by block over the bidegree decomposition."""
    src = tensor_complex(f.source, g.source)
    tgt = tensor_complex(f.target, g.target)
    comps = {}
    for n in src.degrees():
        blocks_src = [(i, n - i) for i in f.source.degrees()
                      if g.source.lo <= n - i <= g.source.hi]
        blocks_tgt = [(i, n - i) for i in f.target.degrees()
                      if g.target.lo <= n - i <= g.target.hi]
        tgt_pos = {pair: k for k, pair in enumerate(blocks_tgt)}
        mats = []
        for gi in range(src.site.n):
            rows = tgt.term(n).dims[gi]
            cols = src.term(n).dims[gi]
            m = Matrix.zeros(rows, cols)
            c0 = 0
            for (i, j) in blocks_src:
                bw = f.source.term(i).dims[gi] * g.source.term(j).dims[gi]
                if (i, j) in tgt_pos:
                    r0 = 0
                    for (ti, tj) in blocks_tgt:
                        bh = f.target.term(ti).dims[gi] * g.target.term(tj).dims[gi]
                        if (ti, tj) == (i, j):
                            block = kron(f.comp(i).mats[gi], g.comp(j).mats[gi])
                            for r in range(block.rows):
                                for c in range(block.cols):
                                    v = block.entry(r, c)
                                    if v:
                                        m._d[r0 + r][c0 + c] = v
                        r0 += bh
                c0 += bw
            mats.append(m)
        comps[n] = RepMap(src.term(n), tgt.term(n), mats, validate=False)
    return ChainMap(src, tgt, comps)


# ---------------------------------------------------------------------------
# Homotopies and contractions


def find_homotopy(f: ChainMap, g: ChainMap):
    """A graded map s of degree +1 with ds + sd = f - g, or None.  With
    g = 0 and f = id this is the contraction finder."""
    x, y = f.source, f.target
    h = f - g
    sys = MapSystem()
    lo = min(x.lo, y.lo)
    hi = max(x.hi, y.hi)
    var_degs = list(range(lo - 1, hi + 1))
    for n in var_degs:
        sys.var(("s", n), x.term(n), y.term(n + 1))
    for n in range(lo, hi + 1):
        sys.constrain(
            [(("s", n), y.diff(n + 1), None, 1),
             (("s", n - 1), None, x.diff(n), 1)],
            rhs=h.comp(n),
        )
    sol = sys.solve()
    if sol is None:
        return None
    comps = {n: sol[("s", n)] for n in var_degs}
    return GradedMap(x, y, 1, comps)


def find_contraction(c: Complex):
    ident = identity_chain_map(c)
    return find_homotopy(ident, zero_chain_map(c, c))


def check_contraction(c: Complex, s: GradedMap) -> bool:
    for n in c.degrees():
        lhs = (c.diff(n + 1) @ s.comp(n)) + (s.comp(n - 1) @ c.diff(n))
        if lhs.mats != identity_map(c.terms[n]).mats:
            return False
    return True


def split_contractible(x: Complex, s: GradedMap) -> tuple:
    """Split a contracted complex as delta of its cycles.

    Given ds + sd = 1, put U_n = Z_{n-1}X and return (U, p, i) with
    p: delta(U) -> X given degreewise by [s, incl] and i: X -> delta(U) by
    [d; ds] (corestricted to cycles); p and i are mutually inverse chain
    isomorphisms.
    """
    if not check_contraction(x, s):
        raise ComplexError("s is not a contraction")
    site = x.site
    z_objs = {}
    z_incl = {}
    for n in range(x.lo, x.hi + 2):
        d = x.diff(n - 1) if n - 1 >= x.lo else zero_map(x.term(n - 1), x.term(n - 2))
        ker_cols = [d.mats[i].kernel_basis() for i in range(site.n)]
        z, incl = subobject_from_columns(x.term(n - 1), ker_cols, label=f"Z{n - 1}")
        z_objs[n] = z       # U_n = Z_{n-1} X
        z_incl[n] = incl    # into X_{n-1}
    graded = {n: z_objs[n] for n in z_objs if not z_objs[n].is_zero()}
    du = delta(site, graded)
    du = Complex(site, min(x.lo, du.lo), max(x.hi, du.hi),
                 {n: du.term(n) for n in range(min(x.lo, du.lo), max(x.hi, du.hi) + 1)},
                 {n: du.diff(n) for n in range(min(x.lo, du.lo) + 1, max(x.hi, du.hi) + 1)},
                 validate=False)
    z = zero_object(site)
    p_comps = {}
    i_comps = {}
    for n in du.degrees():
        un = z_objs.get(n, z)
        un1 = z_objs.get(n + 1, z)
        xt = x.term(n)
        # p = [ s o incl_{Z_{n-1}} , incl_{Z_n} ]
        left = (s.comp(n - 1) @ z_incl[n]) if not un.is_zero() else zero_map(un, xt)
        right = z_incl[n + 1] if not un1.is_zero() else zero_map(un1, xt)
        mats = [hstack([left.mats[i], right.mats[i]]) for i in range(site.n)]
        p_comps[n] = RepMap(du.term(n), xt, mats, validate=False)
        # i = [ d ; d s ] corestricted to cycles
        d_to_z = []
        ds_to_z = []
        for i in range(site.n):
            top = z_incl[n].mats[i].solve_right(x.diff(n).mats[i]) \
                if not un.is_zero() else Matrix.zeros(0, xt.dims[i])
            assert top is not None
            bot_raw = (x.diff(n + 1) @ s.comp(n)).mats[i]
            bot = z_incl[n + 1].mats[i].solve_right(bot_raw) \
                if not un1.is_zero() else Matrix.zeros(0, xt.dims[i])
            assert bot is not None
            d_to_z.append(top)
            ds_to_z.append(bot)
        mats = [Matrix(du.term(n).dims[i], xt.dims[i],
                       [list(r) for r in d_to_z[i]._d] + [list(r) for r in ds_to_z[i]._d])
                for i in range(site.n)]
        i_comps[n] = RepMap(xt, du.term(n), mats, validate=False)
    p = ChainMap(du, x, p_comps)
    i = ChainMap(x, du, i_comps)
    for n in x.degrees():
        assert (p.comp(n) @ i.comp(n)).mats == identity_map(x.term(n)).mats, "p i != 1"
    for n in du.degrees():
        assert (i.comp(n) @ p.comp(n)).mats == identity_map(du.term(n)).mats, "i p != 1"
    return graded, p, i


# ---------------------------------------------------------------------------
# Pure layers and the semisimple splitting


def pure_level(c: Complex):
    """The least order s for which every term is s-pure, or None."""
    from .rep import is_s_pure

    for s in c.site.orders():
        if all(is_s_pure(c.terms[n], s) for n in c.degrees()):
            return s
    return None


def semisimple_split(x: Complex) -> dict:
    """Split a pure-layer complex as (zero differential) + (contractible).

    Chooses natural splittings of X_n ->> B_{n-1} and Z_n ->> H_n by a
    constrained solve (they exist because the layer is semisimple) and
    assembles the model H + delta(B) with an explicit mutually inverse
    chain-map pair.
    """
    s = pure_level(x)
    if s is None:
        raise ComplexError("semisimple splitting needs a complex concentrated in one pure layer")
    site = x.site
    hdata = homology(x)
    z = zero_object(site)
    # boundaries, uniformly represented inside the cycle subobjects
    b_obj = {n: hdata[n].boundary_in_cycles.source for n in x.degrees()}
    binc_x = {n: hdata[n].cycle_incl @ hdata[n].boundary_in_cycles for n in x.degrees()}
    bfac = {}
    for n in range(x.lo + 1, x.hi + 1):
        mats = [binc_x[n - 1].mats[i].solve_right(x.diffs[n].mats[i]) for i in range(site.n)]
        assert all(m is not None for m in mats), "d must land in the boundaries"
        bfac[n] = RepMap(x.terms[n], b_obj[n - 1], mats, validate=False)
    sigma = {}
    tau = {}
    for n in x.degrees():
        bm = b_obj.get(n - 1)
        if bm is not None and not bm.is_zero():
            sys = MapSystem()
            sys.var("s", bm, x.terms[n])
            sys.constrain([("s", bfac[n], None, 1)], rhs=identity_map(bm))
            sol = sys.solve()
            assert sol is not None, "pure layer epimorphism must split naturally"
            sigma[n] = sol["s"]
        h = hdata[n]
        if not h.homology.is_zero():
            sys = MapSystem()
            sys.var("t", h.homology, h.cycles)
            sys.constrain([("t", h.proj, None, 1)], rhs=identity_map(h.homology))
            sol = sys.solve()
            assert sol is not None, "pure layer quotient must split naturally"
            tau[n] = sol["t"]
    hterms = {n: hdata[n].homology for n in x.degrees()}
    xprime = Complex(site, x.lo, x.hi, hterms, {
        n: zero_map(hterms[n], hterms[n - 1]) for n in range(x.lo + 1, x.hi + 1)
    })
    graded_b = {n: b_obj[n - 1] for n in x.degrees()
                if n - 1 in b_obj and not b_obj[n - 1].is_zero()}
    # model: degree n carries H_n + B_{n-1} + B_n
    model_terms = {}
    for n in x.degrees():
        bn1 = b_obj.get(n - 1, z)
        bn = b_obj.get(n, z)
        model_terms[n] = direct_sum([hterms[n], bn1, bn])
    model_diffs = {}
    for n in range(x.lo + 1, x.hi + 1):
        model, _, projs = model_terms[n]
        _, injs_prev, _ = model_terms[n - 1]
        d = injs_prev[2] @ identity_map(b_obj.get(n - 1, z)) @ projs[1]
        model_diffs[n] = RepMap(model, model_terms[n - 1][0], d.mats, validate=False)
    model_cx = Complex(site, x.lo, x.hi,
                       {n: model_terms[n][0] for n in x.degrees()}, model_diffs)
    phi_comps = {}
    psi_comps = {}
    for n in x.degrees():
        h = hdata[n]
        xt = x.terms[n]
        model, injs, projs = model_terms[n]
        bn1 = b_obj.get(n - 1, z)
        bn = b_obj.get(n, z)
        if n in sigma:
            pi_z = identity_map(xt) - (sigma[n] @ bfac[n])
        else:
            pi_z = identity_map(xt)
        rho_mats = [h.cycle_incl.mats[i].solve_right(pi_z.mats[i]) for i in range(site.n)]
        assert all(m is not None for m in rho_mats), "projection must land in cycles"
        rho = RepMap(xt, h.cycles, rho_mats, validate=False)
        h_row = h.proj @ rho
        b1_row = bfac[n] if n in sigma else zero_map(xt, bn1)
        hpart = (h.cycle_incl @ tau[n] @ h_row) if n in tau else zero_map(xt, xt)
        resid = (h.cycle_incl @ rho) - hpart
        if not bn.is_zero():
            b2_mats = [binc_x[n].mats[i].solve_right(resid.mats[i]) for i in range(site.n)]
            assert all(m is not None for m in b2_mats)
            b2_row = RepMap(xt, bn, b2_mats, validate=False)
        else:
            b2_row = zero_map(xt, bn)
        phi = (injs[0] @ h_row) + (injs[1] @ b1_row) + (injs[2] @ b2_row)
        phi_comps[n] = RepMap(xt, model, phi.mats, validate=False)
        part0 = (h.cycle_incl @ tau[n]) if n in tau else zero_map(hterms[n], xt)
        part1 = sigma[n] if n in sigma else zero_map(bn1, xt)
        part2 = binc_x[n]
        psi = (part0 @ projs[0]) + (part1 @ projs[1]) + (part2 @ projs[2])
        psi_comps[n] = RepMap(model, xt, psi.mats, validate=False)
    phi = ChainMap(x, model_cx, phi_comps)
    psi = ChainMap(model_cx, x, psi_comps)
    for n in x.degrees():
        assert (phi.comp(n) @ psi.comp(n)).mats == identity_map(model_cx.terms[n]).mats
        assert (psi.comp(n) @ phi.comp(n)).mats == identity_map(x.terms[n]).mats
    return {
        "zero_part": xprime,
        "boundaries": graded_b,
        "model": model_cx,
        "phi": phi,
        "psi": psi,
        "homology": hdata,
    }


# ---------------------------------------------------------------------------
# Thinness


def l_sub_complex(x: Complex, s: int) -> tuple:
    """(subcomplex L_{<=s} X, inclusion chain map)."""
    site = x.site
    terms = {}
    incls = {}
    for n in x.degrees():
        sub, incl = _l_sub(x.terms[n], s)
        terms[n] = sub
        incls[n] = incl
    diffs = {}
    for n in range(x.lo + 1, x.hi + 1):
        mats = []
        for i in range(site.n):
            sol = incls[n - 1].mats[i].solve_right((x.diffs[n] @ incls[n]).mats[i])
            assert sol is not None, "differential must preserve the order filtration"
            mats.append(sol)
        diffs[n] = RepMap(terms[n], terms[n - 1], mats, validate=False)
    sub = Complex(site, x.lo, x.hi, terms, diffs)
    incl = ChainMap(sub, x, incls)
    return sub, incl


def is_thin(x: Complex, require_projective: bool = True):
    """(True, None) if d(L_{<=s} X) lands in L_{<s} X for every s, else
    (False, witness) with witness (s, degree, group label, vector)."""
    if require_projective:
        for n in x.degrees():
            if not is_projective(x.terms[n]):
                raise ComplexError(f"term in degree {n} is not projective")
    site = x.site
    for s in site.orders():
        for n in range(x.lo + 1, x.hi + 1):
            _, incl_n = _l_sub(x.terms[n], s)
            _, incl_prev = _l_sub(x.terms[n - 1], s - 1)
            image = x.diffs[n] @ incl_n
            for i in range(site.n):
                sol = incl_prev.mats[i].solve_right(image.mats[i])
                if sol is None:
                    for col in range(image.mats[i].cols):
                        one = incl_prev.mats[i].solve_right(image.mats[i].col(col))
                        if one is None:
                            return False, (s, n, site.objects[i].label,
                                           image.mats[i].col(col))
    return True, None


# ---------------------------------------------------------------------------
# Pushouts and pullbacks


def pushout(f: ChainMap, g: ChainMap) -> tuple:
    """Pushout of B <-f- A -g-> C: (P, leg_B, leg_C), degreewise pointwise."""
    assert f.source is g.source or f.source.dims_table() == g.source.dims_table()
    a, b, c = f.source, f.target, g.target
    site = a.site
    total, injs, projs = direct_sum_complex([b, c])
    lo, hi = total.lo, total.hi
    terms = {}
    proj_maps = {}
    section_maps = {}
    for n in range(lo, hi + 1):
        span = (injs[0].comp(n) @ f.comp(n)) - (injs[1].comp(n) @ g.comp(n))
        img_cols = [span.mats[i] for i in range(site.n)]
        sub, incl = subobject_from_columns(total.term(n), img_cols, label=f"po{n}")
        quot, proj, section = quotient_by_subobject(total.term(n), incl, label=f"P{n}")
        terms[n] = quot
        proj_maps[n] = proj
        section_maps[n] = section
    diffs = {}
    for n in range(lo + 1, hi + 1):
        d = proj_maps[n - 1] @ total.diff(n) @ section_maps[n]
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats)
    p = Complex(site, lo, hi, terms, diffs)
    proj_chain = ChainMap(total, p, proj_maps)
    leg_b = proj_chain @ injs[0]
    leg_c = proj_chain @ injs[1]
    return p, leg_b, leg_c


def pullback(f: ChainMap, g: ChainMap) -> tuple:
    """Pullback of B -f-> A <-g- C: (P, leg_B, leg_C)."""
    assert f.target is g.target
    b, c = f.source, g.source
    site = b.site
    total, injs, projs = direct_sum_complex([b, c])
    lo, hi = total.lo, total.hi
    terms = {}
    incl_maps = {}
    for n in range(lo, hi + 1):
        diffmap = (f.comp(n) @ projs[0].comp(n)) - (g.comp(n) @ projs[1].comp(n))
        ker_cols = [diffmap.mats[i].kernel_basis() for i in range(site.n)]
        sub, incl = subobject_from_columns(total.term(n), ker_cols, label=f"pb{n}")
        terms[n] = sub
        incl_maps[n] = incl
    diffs = {}
    for n in range(lo + 1, hi + 1):
        mats = []
        for i in range(site.n):
            sol = incl_maps[n - 1].mats[i].solve_right((total.diff(n) @ incl_maps[n]).mats[i])
            assert sol is not None
            mats.append(sol)
        diffs[n] = RepMap(terms[n], terms[n - 1], mats)
    p = Complex(site, lo, hi, terms, diffs)
    incl_chain = ChainMap(p, total, incl_maps)
    leg_b = projs[0] @ incl_chain
    leg_c = projs[1] @ incl_chain
    return p, leg_b, leg_c


# ---------------------------------------------------------------------------
# Subcomplexes and quotient complexes


def subcomplex_from_columns(x: Complex, columns: dict, label: str = "sub") -> tuple:
    """Subcomplex spanned degreewise by given columns (must be d-stable)."""
    site = x.site
    terms = {}
    incls = {}
    for n in x.degrees():
        cols = columns.get(n)
        if cols is None:
            cols = [Matrix.zeros(x.terms[n].dims[i], 0) for i in range(site.n)]
        sub, incl = subobject_from_columns(x.terms[n], cols, label=f"{label}{n}")
        terms[n] = sub
        incls[n] = incl
    diffs = {}
    for n in range(x.lo + 1, x.hi + 1):
        mats = []
        for i in range(site.n):
            sol = incls[n - 1].mats[i].solve_right((x.diffs[n] @ incls[n]).mats[i])
            if sol is None:
                raise ComplexError("columns do not span a subcomplex")
            mats.append(sol)
        diffs[n] = RepMap(terms[n], terms[n - 1], mats)
    sub = Complex(site, x.lo, x.hi, terms, diffs)
    return sub, ChainMap(sub, x, incls)


def quotient_complex(x: Complex, incl: ChainMap) -> tuple:
    """(X / V, projection, degreewise linear sections) for a degreewise-mono
    inclusion V -> X of a subcomplex."""
    site = x.site
    terms = {}
    projs = {}
    sections = {}
    for n in x.degrees():
        quot, proj, section = quotient_by_subobject(x.terms[n], incl.comp(n), label=f"q{n}")
        terms[n] = quot
        projs[n] = proj
        sections[n] = section
    diffs = {}
    for n in range(x.lo + 1, x.hi + 1):
        d = projs[n - 1] @ x.diffs[n] @ sections[n]
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats)
    q = Complex(site, x.lo, x.hi, terms, diffs)
    return q, ChainMap(x, q, projs), sections
