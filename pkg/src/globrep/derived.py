"""Compactness, torsion, and dualizability of derived objects.

On a finite site every bounded complex with finite-dimensional values is
compact; the certificate below makes that concrete by exhibiting the thin
model and its generator layers.  Dualizability is decided by the canonical
map dual (x) X -> iHom(X, X) on a thin model, cross-checked (when the
trivial group is present) against the comparison with the constant complex
on the value at the trivial group; the two verdicts must agree.
"""

from __future__ import annotations

from .exactlin import Matrix, scalar
from .complexes import (
    ChainMap,
    Complex,
    homology,
    homology_dims,
    is_quasi_iso,
    single_complex,
    tensor_complex,
    trim,
)
from .natsolve import MapSystem
from .rep import (
    IHomData,
    RepMap,
    RepObject,
    direct_sum,
    identity_map,
    ihom,
    is_torsion_free_vector,
    l_filtration,
    is_s_pure,
    standard_e,
    tensor,
    torsion_free_search,
    unit_object,
    zero_map,
    zero_object,
)
from .site import Site
from .thin import thin_replacement


class DerivedError(ValueError):
    pass


class PerfectCertificate:
    """A thin bounded model with its generator layers: entries
    (group label, value dimension, degree)."""

    def __init__(self, model: Complex, quasi_iso: ChainMap, generators: list):
        self.model = model
        self.quasi_iso = quasi_iso
        self.generators = generators


def perfect_certificate(c: Complex) -> PerfectCertificate:
    t, u = thin_replacement(c)
    t = trim(t)
    site = c.site
    gens = []
    for n in t.degrees():
        term = t.terms[n]
        for s in site.orders():
            data = l_filtration(term, s)
            layer = data["layer"]
            if layer.is_zero():
                continue
            assert is_s_pure(layer, s), "filtration layer must be pure"
            for g in site.objects_of_order(s):
                if layer.dims[g]:
                    gens.append((site.objects[g].label, layer.dims[g], n))
    return PerfectCertificate(t, u, sorted(gens, key=lambda e: (e[2], e[0])))


def compactness_table(c: Complex) -> dict:
    """Per object: the total dimension of the pointwise homology."""
    site = c.site
    hd = homology_dims(c)
    return {site.objects[g].label: sum(dims[g] for dims in hd.values())
            for g in range(site.n)}


def torsion_free_homology(c: Complex):
    """First (degree, group label, vector) whose homology value contains a
    torsion-free element, scanning degrees then site objects; None if every
    homology class is torsion."""
    site = c.site
    hdata = homology(c)
    for n in sorted(hdata):
        h = hdata[n].homology
        for g in range(site.n):
            vec = torsion_free_search(h, g)
            if vec is not None:
                return (n, site.objects[g].label, vec)
    return None


def eG_split_mono(x: RepObject, gidx: int, vec: Matrix) -> tuple:
    """The split monomorphism e_G -> e_G (x) X attached to a torsion-free
    vector: on hom classes, [alpha] goes to [alpha] (x) alpha^*(vec).  The
    retraction is produced by a naturality-constrained solve."""
    site = x.site
    if not is_torsion_free_vector(x, gidx, vec):
        raise DerivedError("vector is torsion")
    e = standard_e(site, gidx)
    target = tensor(e, x)
    mats = []
    for t in range(site.n):
        nhom = e.dims[t]
        m = Matrix.zeros(target.dims[t], nhom)
        for a in range(nhom):
            img = x.act[(t, gidx, a)] @ vec
            for r in range(img.rows):
                v = img.entry(r, 0)
                if v:
                    m._d[a * x.dims[t] + r][a] = v
        mats.append(m)
    mono = RepMap(e, target, mats)
    assert mono.is_pointwise_injective()
    sys = MapSystem()
    sys.var("r", target, e)
    sys.constrain([("r", None, mono, 1)], rhs=identity_map(e))
    sol = sys.solve()
    if sol is None:
        raise DerivedError("no natural retraction found for the split mono")
    return mono, sol["r"]


# ---------------------------------------------------------------------------
# Internal hom complexes and dualizability


def ihom_complex(x: Complex, y: Complex) -> tuple:
    """(iHom(X, Y) as a complex, pair data {(j, i): IHomData}).

    Degree n collects iHom(X_j, Y_{j+n}); the differential post-composes
    with d_Y and pre-composes with d_X with the sign -(-1)^n.
    """
    from .rep import ihom_post, ihom_pre

    site = x.site
    pair_data = {}
    for j in x.degrees():
        for i in y.degrees():
            pair_data[(j, i)] = None
    lo = y.lo - x.hi
    hi = y.hi - x.lo
    blocks = {}
    for n in range(lo, hi + 1):
        idx = []
        for j in x.degrees():
            i = j + n
            if y.lo <= i <= y.hi:
                if pair_data[(j, i)] is None:
                    pair_data[(j, i)] = ihom(x.terms[j], y.terms[i])
                idx.append((j, i))
        blocks[n] = idx
    terms = {}
    sums = {}
    for n in range(lo, hi + 1):
        idx = blocks[n]
        parts = [pair_data[pair].obj for pair in idx]
        if not parts:
            terms[n] = zero_object(site)
            sums[n] = ([], [], [])
            continue
        total, injs, projs = direct_sum(parts)
        terms[n] = total
        sums[n] = (idx, injs, projs)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        idx, injs, projs = sums[n]
        idx_prev, injs_prev, _ = sums[n - 1]
        lookup = {pair: k for k, pair in enumerate(idx_prev)}
        d = zero_map(terms[n], terms[n - 1])
        sign = scalar(1 if n % 2 else -1)  # -(-1)^n
        for k, (j, i) in enumerate(idx):
            if (j, i - 1) in lookup:
                post = ihom_post(pair_data[(j, i)], pair_data[(j, i - 1)], y.diffs[i])
                d = d + (injs_prev[lookup[(j, i - 1)]] @ post @ projs[k])
            if (j + 1, i) in lookup:
                pre = ihom_pre(pair_data[(j, i)], pair_data[(j + 1, i)], x.diffs[j + 1])
                d = d + (injs_prev[lookup[(j + 1, i)]] @ pre @ projs[k]).scale(sign)
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats, validate=False)
    cx = Complex(site, lo, hi, terms, diffs)
    return cx, pair_data, sums


def dual_complex(x: Complex) -> tuple:
    unit = unit_object(x.site)
    return ihom_complex(x, single_complex(unit))


def nu_map(x: Complex) -> ChainMap:
    """The canonical map dual(X) (x) X -> iHom(X, X) on a complex of
    projectives: on the (p, q) block it sends phi (x) y to the map
    [alpha] (x) xi |-> phi([alpha] (x) xi) . alpha^*(y), with the Koszul
    sign (-1)^{pq}."""
    site = x.site
    dx, dual_data, dual_sums = dual_complex(x)
    ih, pair_data, ih_sums = ihom_complex(x, x)
    source = tensor_complex(dx, x)
    comps = {}
    for n in source.degrees():
        src = source.term(n)
        tgt = ih.term(n)
        mats = [Matrix.zeros(tgt.dims[g], src.dims[g]) for g in range(site.n)]
        # source blocks: p + q = n with dx_p nonzero; dx_p has the single
        # hom block j = -p
        col_off = [0] * site.n
        for p in dx.degrees():
            q = n - p
            if not (x.lo <= q <= x.hi):
                continue
            j = -p
            if not (x.lo <= j <= x.hi):
                for g in range(site.n):
                    col_off[g] += dx.term(p).dims[g] * x.term(q).dims[g]
                continue
            ddata = dual_data[(j, 0)]
            tdata = pair_data[(j, q)]
            idx, injs, _ = ih_sums[n]
            if (j, q) not in idx:
                for g in range(site.n):
                    col_off[g] += dx.term(p).dims[g] * x.term(q).dims[g]
                continue
            inj = injs[idx.index((j, q))]
            sign = scalar(-1 if (p % 2) and (q % 2) else 1)
            for g in range(site.n):
                ncolsblock = dx.term(p).dims[g] * x.term(q).dims[g]
                if ncolsblock == 0 or tgt.dims[g] == 0:
                    col_off[g] += ncolsblock
                    continue
                cols = []
                for phi_idx in range(dx.term(p).dims[g]):
                    phi = ddata.bases[g][phi_idx]
                    for y_idx in range(x.term(q).dims[g]):
                        psi = _transport_map(site, g, phi, x.terms[q], y_idx, tdata)
                        coords = tdata.coords(g, psi)
                        cols.append([sign * coords.entry(r, 0) for r in range(coords.rows)])
                block = Matrix.from_cols(cols, nrows=tdata.obj.dims[g])
                placed = inj.mats[g] @ block
                for r in range(placed.rows):
                    for cdx in range(placed.cols):
                        v = placed.entry(r, cdx)
                        if v:
                            mats[g]._d[r][col_off[g] + cdx] = v
                col_off[g] += ncolsblock
        comps[n] = RepMap(src, tgt, mats, validate=False)
    return ChainMap(source, ih, comps)


def _transport_map(site: Site, g: int, phi: RepMap, aq: RepObject, y_idx: int,
                   tdata: IHomData) -> RepMap:
    """The natural map e_g (x) A_j -> A_q given by
    [alpha] (x) xi |-> phi([alpha] (x) xi) . alpha^*(y)."""
    src = phi.source  # e_g (x) A_j
    e_dims = tdata.e_objs[g].dims
    aj_dims = [src.dims[t] // e_dims[t] if e_dims[t] else 0 for t in range(site.n)]
    mats = []
    for t in range(site.n):
        m = Matrix.zeros(aq.dims[t], src.dims[t])
        phirow = phi.mats[t]
        for a in range(e_dims[t]):
            img = aq.act[(t, g, a)].col(y_idx)
            for xi in range(aj_dims[t]):
                colidx = a * aj_dims[t] + xi
                coeff = phirow.entry(0, colidx) if phirow.rows else scalar(0)
                if coeff:
                    for r in range(aq.dims[t]):
                        v = img.entry(r, 0)
                        if v:
                            m._d[r][colidx] = coeff * v
        mats.append(m)
    return RepMap(src, aq, mats, validate=False)


def constant_complex_comparison(c: Complex):
    """The comparison map from the constant complex on the homology at the
    trivial group (None when the trivial group is absent)."""
    site = c.site
    one = None
    for i, grp in enumerate(site.objects):
        if grp.order == 1:
            one = i
            break
    if one is None:
        return None
    unit = unit_object(site)
    hdata = homology(c)
    terms = {}
    comps = {}
    lo, hi = c.lo, c.hi
    for n in range(lo, hi + 1):
        h = hdata[n]
        dim = h.homology.dims[one]
        if dim == 0:
            terms[n] = zero_object(site)
            comps[n] = zero_map(terms[n], c.terms[n])
            continue
        const, _, _ = direct_sum([unit] * dim)
        # representing cycles at the trivial group
        reps = h.cycle_incl.mats[one] @ h.section.mats[one]
        mats = []
        for t in range(site.n):
            cls = (t, one, 0)  # the unique class T -> 1
            cols = [ (c.terms[n].act[cls] @ reps.col(k)).col_list(0) for k in range(dim) ]
            mats.append(Matrix.from_cols(cols, nrows=c.terms[n].dims[t]))
        terms[n] = const
        comps[n] = RepMap(const, c.terms[n], mats)
    cf = Complex(site, lo, hi, terms,
                 {n: zero_map(terms[n], terms[n - 1]) for n in range(lo + 1, hi + 1)})
    f = ChainMap(cf, c, comps)
    return cf, f


def dualizable_test(c: Complex) -> dict:
    """Dualizability verdict with witnesses.

    Computes the thin model T, tests whether nu: dual(T) (x) T -> iHom(T, T)
    is a quasi-isomorphism, and (when the trivial group is present)
    cross-checks against the constant-complex comparison; a disagreement is
    a hard error.
    """
    site = c.site
    t, _ = thin_replacement(c)
    t = trim(t)
    nu = nu_map(t)
    nu_verdict = is_quasi_iso(nu)
    witness = None
    if not nu_verdict:
        hs = homology_dims(nu.source)
        ht = homology_dims(nu.target)
        witness = {
            "source_homology": {site.objects[g].label:
                                {n: dims[g] for n, dims in hs.items() if dims[g]}
                                for g in range(site.n)},
            "target_homology": {site.objects[g].label:
                                {n: dims[g] for n, dims in ht.items() if dims[g]}
                                for g in range(site.n)},
        }
    comparison = constant_complex_comparison(t)
    if comparison is not None:
        _, f = comparison
        thick_verdict = is_quasi_iso(f)
        if thick_verdict != nu_verdict:
            raise DerivedError(
                f"dualizability criteria disagree: nu says {nu_verdict}, "
                f"constant-complex comparison says {thick_verdict}")
    return {"dualizable": nu_verdict, "witness": witness}
