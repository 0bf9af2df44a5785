"""Projective resolutions and their totalization over complexes.

Each stage applies the counit from the groupoid layer to the kernel of the
previous stage; on a finite site the support of the kernels moves strictly
up in group order, so the iteration stops on its own and the length never
exceeds (max order) - (least order in the support).  The stage construction
is functorial, which is what the totalization and the factorization
machinery rely on.
"""

from __future__ import annotations

from .exactlin import Matrix, kron
from .complexes import ChainMap, Complex, hom_complex, is_acyclic, mapping_cone
from .rep import (
    RepError,
    RepMap,
    RepObject,
    counit_P0,
    direct_sum,
    exact_pieces,
    zero_map,
    zero_object,
)


class Resolution:
    """Stages P_0, P_1, ... with differentials delta_i: P_{i+1} -> P_i and
    the augmentation P_0 -> X; kernels and counits are kept so that maps can
    be resolved alongside objects."""

    def __init__(self, x, stages, deltas, augmentation, kernels, kernel_incls, counits):
        self.x = x
        self.stages = stages
        self.deltas = deltas
        self.augmentation = augmentation
        self.kernels = kernels
        self.kernel_incls = kernel_incls
        self.counits = counits

    @property
    def length(self) -> int:
        return len(self.stages) - 1

    def stage(self, i: int) -> RepObject:
        if 0 <= i < len(self.stages):
            return self.stages[i]
        return zero_object(self.x.site)


def min_support_order(x: RepObject) -> int:
    site = x.site
    orders = [site.order(i) for i in range(site.n) if x.dims[i] > 0]
    return min(orders) if orders else site.max_order()


def resolve_object(x: RepObject) -> Resolution:
    """Iterate the layer counit on successive kernels until they vanish."""
    site = x.site
    stages = []
    deltas = []
    kernels = []
    kernel_incls = []
    counits = []
    current = x
    incl_prev = None
    augmentation = None
    while True:
        p, eps = counit_P0(current)
        stages.append(p)
        counits.append(eps)
        if incl_prev is None:
            augmentation = eps
        else:
            deltas.append(incl_prev @ eps)
        if p.is_zero():
            break
        pieces = exact_pieces(eps)
        kernels.append(pieces.kernel)
        kernel_incls.append(pieces.ker_incl)
        if pieces.kernel.is_zero():
            break
        current = pieces.kernel
        incl_prev = pieces.ker_incl
    res = Resolution(x, stages, deltas, augmentation, kernels, kernel_incls, counits)
    bound = site.max_order() - min_support_order(x)
    assert res.length <= max(bound, 0), \
        f"resolution length {res.length} exceeds the support bound {bound}"
    _check_exactness(res)
    return res


def _check_exactness(res: Resolution):
    """The augmented complex P_* -> X must be exact."""
    x = res.x
    site = x.site
    terms = {-1: x}
    diffs = {}
    for i, p in enumerate(res.stages):
        terms[i] = p
    diffs[0] = res.augmentation
    for i, d in enumerate(res.deltas):
        diffs[i + 1] = d
    aug = Complex(site, -1, len(res.stages) - 1, terms, diffs)
    if not is_acyclic(aug):
        raise RepError("resolution is not exact")


def _p0_map(f: RepMap, p0x: RepObject, p0y: RepObject) -> RepMap:
    """The stage-zero functorial map between counit covers: blockwise
    f(G) (x) id on hom classes, restricted to the idempotent images."""
    site = f.source.site
    metax = p0x._counit_meta
    metay = p0y._counit_meta
    blocks_by_g = {}
    for g in range(site.n):
        fx = f.mats[g]
        if f.source.dims[g] == 0 or f.target.dims[g] == 0:
            continue
        blocks_by_g[g] = fx
    mats = []
    for t in range(site.n):
        rows = p0y.dims[t]
        cols = p0x.dims[t]
        m = Matrix.zeros(rows, cols)
        r0 = 0
        row_off = {}
        for (g, v, part, bases) in metay:
            row_off[g] = r0
            r0 += part.dims[t]
        c0 = 0
        for (g, v, part, bases) in metax:
            w = part.dims[t]
            if g in row_off and w and f.target.dims[g]:
                ymeta = next(mm for mm in metay if mm[0] == g)
                ybases = ymeta[3]
                nhom = len(site.homs[(t, g)])
                amb = kron(f.mats[g], Matrix.identity(nhom))
                sol = ybases[t].solve_right(amb @ bases[t])
                assert sol is not None, "stage map must preserve idempotent images"
                for r in range(sol.rows):
                    for c in range(sol.cols):
                        val = sol.entry(r, c)
                        if val:
                            m._d[row_off[g] + r][c0 + c] = val
            c0 += w
        mats.append(m)
    return RepMap(p0x, p0y, mats)


def resolve_map(f: RepMap, rx: Resolution, ry: Resolution) -> list:
    """Stage maps P_i(f) commuting with counits and differentials."""
    out = []
    fx = f
    depth = max(len(rx.stages), len(ry.stages))
    for i in range(depth):
        px = rx.stage(i)
        py = ry.stage(i)
        if px.is_zero() or py.is_zero():
            out.append(zero_map(px, py))
            fx = None
            continue
        g = _p0_map(fx, px, py)
        out.append(g)
        if i < len(rx.kernels) and i < len(ry.kernels) \
                and not rx.kernels[i].is_zero() and not ry.kernels[i].is_zero():
            mats = []
            for t in range(f.source.site.n):
                sol = ry.kernel_incls[i].mats[t].solve_right(
                    (g @ rx.kernel_incls[i]).mats[t])
                assert sol is not None, "stage map must preserve kernels"
                mats.append(sol)
            fx = RepMap(rx.kernels[i], ry.kernels[i], mats)
        else:
            fx = None
    return out


class PTotal:
    """A totalized resolution with enough bookkeeping to resolve maps."""

    def __init__(self, source, complex, eps, res, sums):
        self.source = source
        self.complex = complex
        self.eps = eps
        self.res = res
        self.sums = sums

    def __iter__(self):
        return iter((self.complex, self.eps))


def p_total(c: Complex) -> PTotal:
    """Totalize the stagewise resolution of a complex.

    Degree m of the total complex carries P_i(X_j) for i + j = m, with
    differential delta + (-1)^i P_i(d_j); the augmentation hits the i = 0
    row and is a quasi-isomorphism.
    """
    site = c.site
    res = {j: resolve_object(c.terms[j]) for j in c.degrees()}
    stage_maps = {}
    for j in range(c.lo + 1, c.hi + 1):
        stage_maps[j] = resolve_map(c.diffs[j], res[j], res[j - 1])
    max_len = max(len(res[j].stages) for j in c.degrees())
    lo = c.lo
    hi = c.hi + max_len - 1
    blocks = {}
    for m in range(lo, hi + 1):
        idx = []
        for j in c.degrees():
            i = m - j
            if 0 <= i < len(res[j].stages) and not res[j].stages[i].is_zero():
                idx.append((i, j))
        blocks[m] = idx
    terms = {}
    sums = {}
    for m in range(lo, hi + 1):
        idx = blocks[m]
        if not idx:
            terms[m] = zero_object(site)
            sums[m] = ([], [], [])
            continue
        parts = [res[j].stages[i] for (i, j) in idx]
        total, injs, projs = direct_sum(parts)
        terms[m] = total
        sums[m] = (idx, injs, projs)
    diffs = {}
    for m in range(lo + 1, hi + 1):
        idx, injs, projs = sums[m]
        idx_prev, injs_prev, _ = sums[m - 1]
        lookup = {pair: k for k, pair in enumerate(idx_prev)}
        d = zero_map(terms[m], terms[m - 1])
        for k, (i, j) in enumerate(idx):
            if (i - 1, j) in lookup:
                delta = res[j].deltas[i - 1]
                d = d + (injs_prev[lookup[(i - 1, j)]] @ delta @ projs[k])
            if (i, j - 1) in lookup:
                pm = stage_maps[j][i]
                if i % 2:
                    pm = pm.scale(-1)
                d = d + (injs_prev[lookup[(i, j - 1)]] @ pm @ projs[k])
        diffs[m] = RepMap(terms[m], terms[m - 1], d.mats, validate=False)
    pc = Complex(site, lo, hi, terms, diffs)
    eps_comps = {}
    for m in range(lo, hi + 1):
        idx, injs, projs = sums[m]
        comp = zero_map(terms[m], c.term(m))
        for k, (i, j) in enumerate(idx):
            if i == 0 and j == m:
                comp = comp + (res[j].augmentation @ projs[k])
        eps_comps[m] = comp
    eps = ChainMap(pc, c, eps_comps)
    cone, _, _ = mapping_cone(eps)
    assert is_acyclic(cone), "the resolution augmentation must be a quasi-isomorphism"
    return PTotal(c, pc, eps, res, sums)


def p_chain_map(f: ChainMap, px: PTotal, py: PTotal) -> ChainMap:
    """The totalized functorial map P(f): PX -> PY, assembled from the
    stagewise resolutions of the components of f."""
    x, y = f.source, f.target
    stage_maps = {}
    for j in x.degrees():
        if y.lo <= j <= y.hi:
            stage_maps[j] = resolve_map(f.comp(j), px.res[j], py.res[j])
    comps = {}
    pcx, pcy = px.complex, py.complex
    for m in pcx.degrees():
        idx, _, projs = px.sums[m]
        tgt_idx, injs, _ = py.sums[m] if pcy.lo <= m <= pcy.hi else ([], [], [])
        lookup = {pair: k for k, pair in enumerate(tgt_idx)}
        comp = zero_map(pcx.term(m), pcy.term(m))
        for k, (i, j) in enumerate(idx):
            if (i, j) in lookup and j in stage_maps and i < len(stage_maps[j]):
                comp = comp + (injs[lookup[(i, j)]] @ stage_maps[j][i] @ projs[k])
        comps[m] = comp
    return ChainMap(pcx, pcy, comps)


def derived_hom(x: Complex, y: Complex) -> dict:
    """Dimensions of the maps-up-to-quasi-isomorphism [shift^t x, y]: the
    source is replaced by its projective totalization and the hom-complex
    homology is read off degree by degree."""
    px, _ = p_total(x)
    data = hom_complex(px, y)
    return data.homology_dims()
