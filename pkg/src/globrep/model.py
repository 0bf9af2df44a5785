"""The projective model structure on chain complexes.

Weak equivalences are quasi-isomorphisms, fibrations are degreewise
epimorphisms, cofibrations are degreewise monomorphisms with projective
cokernel terms.  Both factorizations are built from the totalized
resolution with explicit three-block differentials, lifts are found by a
constrained solve, and the right-lifting-property checks against the
generating sets are decided exactly: the commuting squares form a linear
subspace, so RLP is a column-space containment.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlin import Matrix
from .complexes import (
    ChainMap,
    Complex,
    delta,
    direct_sum_complex,
    hom_complex,
    is_quasi_iso,
    quotient_complex,
    shift,
    single_complex,
    subcomplex_from_columns,
    tensor_complex,
    tensor_chain_map,
    zero_complex,
    zero_chain_map,
    check_contraction,
    pullback,
    pushout,
)
from .natsolve import MapSystem
from .rep import (
    RepMap,
    direct_sum,
    exact_pieces,
    identity_map,
    is_projective,
    standard_e,
    vec_map,
)
from .resolutions import p_chain_map, p_total
from .site import Site


class ModelError(ValueError):
    pass


@dataclass
class MapClass:
    we: bool
    cof: bool
    fib: bool

    @property
    def acf(self) -> bool:
        return self.we and self.cof

    @property
    def afb(self) -> bool:
        return self.we and self.fib


def classify_map(f: ChainMap) -> MapClass:
    lo = min(f.source.lo, f.target.lo)
    hi = max(f.source.hi, f.target.hi)
    we = is_quasi_iso(f)
    fib = all(f.comp(n).is_pointwise_surjective() for n in range(lo, hi + 1))
    cof = True
    for n in range(lo, hi + 1):
        comp = f.comp(n)
        if not comp.is_pointwise_injective():
            cof = False
            break
        coker = exact_pieces(comp).cokernel
        if not is_projective(coker):
            cof = False
            break
    return MapClass(we=we, cof=cof, fib=fib)


@dataclass
class LiftingProblem:
    """A commuting square: i: A -> B against q: L -> M with top f: A -> L
    and bottom g: B -> M."""

    i: ChainMap
    q: ChainMap
    f: ChainMap
    g: ChainMap

    def validate(self):
        lo = min(self.i.source.lo, self.q.target.lo)
        hi = max(self.i.source.hi, self.q.target.hi)
        for n in range(lo, hi + 1):
            lhs = self.q.comp(n) @ self.f.comp(n)
            rhs = self.g.comp(n) @ self.i.comp(n)
            if lhs.mats != rhs.mats:
                raise ModelError(f"square does not commute in degree {n}")


def solve_lift(problem: LiftingProblem):
    """A lift h with h o i = f and q o h = g, or None."""
    problem.validate()
    a, b = problem.i.source, problem.i.target
    l, m = problem.q.source, problem.q.target
    lo = min(b.lo, l.lo)
    hi = max(b.hi, l.hi)
    sys = MapSystem()
    for n in range(lo, hi + 1):
        sys.var(("h", n), b.term(n), l.term(n))
    for n in range(lo, hi + 1):
        if n > lo:
            sys.constrain(
                [(("h", n), l.diff(n), None, 1),
                 (("h", n - 1), None, b.diff(n), -1)],
                shape=(b.term(n), l.term(n - 1)),
            )
        sys.constrain([(("h", n), None, problem.i.comp(n), 1)], rhs=problem.f.comp(n))
        sys.constrain([(("h", n), problem.q.comp(n), None, 1)], rhs=problem.g.comp(n))
    sol = sys.solve()
    if sol is None:
        return None
    return ChainMap(b, l, {n: sol[("h", n)] for n in range(lo, hi + 1)})


# ---------------------------------------------------------------------------
# Factorizations


def factor_M(f: ChainMap) -> dict:
    """Cofibration followed by acyclic fibration.

    Degree n of the middle object is X_n + (PX)_{n-1} + (PY)_n with
    differential [[d, eps, 0], [0, -d, 0], [0, -Pf, d]]; the factors are
    i = [1;0;0] and p = [f, 0, eps].
    """
    x, y = f.source, f.target
    site = x.site
    ptx = p_total(x)
    pty = p_total(y)
    pf = p_chain_map(f, ptx, pty)
    px_s = shift(ptx.complex, 1)
    parts = [x, px_s, pty.complex]
    lo = min(p.lo for p in parts)
    hi = max(p.hi for p in parts)
    terms = {}
    sums = {}
    for n in range(lo, hi + 1):
        total, injs, projs = direct_sum([p.term(n) for p in parts])
        terms[n] = total
        sums[n] = (injs, projs)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        injs_prev, _ = sums[n - 1]
        _, projs = sums[n]
        d = (injs_prev[0] @ x.diff(n) @ projs[0]) \
            + (injs_prev[0] @ ptx.eps.comp(n - 1) @ projs[1]) \
            + (injs_prev[1] @ px_s.diff(n) @ projs[1]) \
            - (injs_prev[2] @ pf.comp(n - 1) @ projs[1]) \
            + (injs_prev[2] @ pty.complex.diff(n) @ projs[2])
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats, validate=False)
    mf = Complex(site, lo, hi, terms, diffs)
    i = ChainMap(x, mf, {n: sums[n][0][0] for n in range(lo, hi + 1)})
    p_comps = {}
    for n in range(lo, hi + 1):
        _, projs = sums[n]
        comp = (f.comp(n) @ projs[0]) + (pty.eps.comp(n) @ projs[2])
        p_comps[n] = RepMap(terms[n], y.term(n), comp.mats, validate=False)
    p = ChainMap(mf, y, p_comps)
    for n in range(lo, hi + 1):
        assert (p.comp(n) @ i.comp(n)).mats == f.comp(n).mats, "p o i must equal f"
    return {"mid": mf, "cof": i, "afb": p}


def factor_N(f: ChainMap) -> dict:
    """Acyclic cofibration followed by fibration.

    Degree n of the middle object is X_n + (PY)_{n+1} + (PY)_n with
    differential [[d, 0, 0], [0, -d, 1], [0, 0, d]]; j = [1;0;0] and
    q = [f, 0, eps].  The cokernel of j is contractible via s = [[0,0],[1,0]].
    """
    x, y = f.source, f.target
    site = x.site
    pty = p_total(y)
    py = pty.complex
    py_down = shift(py, -1)
    parts = [x, py_down, py]
    lo = min(p.lo for p in parts)
    hi = max(p.hi for p in parts)
    terms = {}
    sums = {}
    for n in range(lo, hi + 1):
        total, injs, projs = direct_sum([p.term(n) for p in parts])
        terms[n] = total
        sums[n] = (injs, projs)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        injs_prev, _ = sums[n - 1]
        _, projs = sums[n]
        # the middle slot of degree n-1 is (PY)_n: it receives -d from the
        # middle slot and the identity from the third slot
        ident = identity_map(py.term(n))
        d = (injs_prev[0] @ x.diff(n) @ projs[0]) \
            + (injs_prev[1] @ py_down.diff(n) @ projs[1]) \
            + (injs_prev[1] @ ident @ projs[2]) \
            + (injs_prev[2] @ py.diff(n) @ projs[2])
        diffs[n] = RepMap(terms[n], terms[n - 1], d.mats, validate=False)
    nf = Complex(site, lo, hi, terms, diffs)
    j = ChainMap(x, nf, {n: sums[n][0][0] for n in range(lo, hi + 1)})
    q_comps = {}
    for n in range(lo, hi + 1):
        _, projs = sums[n]
        comp = (f.comp(n) @ projs[0]) + (pty.eps.comp(n) @ projs[2])
        q_comps[n] = RepMap(terms[n], y.term(n), comp.mats, validate=False)
    q = ChainMap(nf, y, q_comps)
    for n in range(lo, hi + 1):
        assert (q.comp(n) @ j.comp(n)).mats == f.comp(n).mats, "q o j must equal f"
    # cok(j)_n = (PY)_{n+1} + (PY)_n with d = [[-d, 1], [0, d]] and the
    # printed contraction s = [[0, 0], [1, 0]]
    cok_terms = {}
    for n in range(lo, hi + 1):
        cok_terms[n] = direct_sum([py_down.term(n), py.term(n)])
    cok_diffs = {}
    for n in range(lo + 1, hi + 1):
        _, injs_prev, _ = cok_terms[n - 1]
        _, _, projs = cok_terms[n]
        d = (injs_prev[0] @ py_down.diff(n) @ projs[0]) \
            + (injs_prev[0] @ identity_map(py.term(n)) @ projs[1]) \
            + (injs_prev[1] @ py.diff(n) @ projs[1])
        cok_diffs[n] = RepMap(cok_terms[n][0], cok_terms[n - 1][0], d.mats, validate=False)
    cok = Complex(site, lo, hi, {n: cok_terms[n][0] for n in cok_terms}, cok_diffs)
    s_comps = {}
    for n in range(lo, hi):
        _, injs_up, _ = cok_terms[n + 1]
        _, _, projs = cok_terms[n]
        # first slot of degree n is PY_{n+1}, the second slot of degree n+1
        s_comps[n] = RepMap(cok.term(n), cok.term(n + 1),
                            (injs_up[1] @ identity_map(py.term(n + 1)) @ projs[0]).mats,
                            validate=False)
    from .complexes import GradedMap

    s = GradedMap(cok, cok, 1, s_comps)
    if not check_contraction(cok, s):
        raise ModelError("printed contraction of cok(j) failed")
    return {"mid": nf, "acf": j, "fib": q, "cok_j": cok, "cok_contraction": s}


# ---------------------------------------------------------------------------
# Generating sets and right lifting properties


def generating_cofibrations(site: Site, lo: int, hi: int) -> list:
    """The maps (shift^{n-1} e_G -> shift^n Delta(e_G)) for n in [lo, hi]."""
    out = []
    for n in range(lo, hi + 1):
        for g in range(site.n):
            e = standard_e(site, g)
            src = single_complex(e, n - 1)
            tgt = delta(site, {n: e})
            incl = ChainMap(src, tgt, {n - 1: _include_second_slot(e, tgt.term(n - 1))})
            out.append(("gcof", n, site.objects[g].label, incl))
    return out


def generating_acyclic_cofibrations(site: Site, lo: int, hi: int) -> list:
    """The maps (0 -> Delta(shift^n e_G)) for n in [lo, hi]."""
    out = []
    for n in range(lo, hi + 1):
        for g in range(site.n):
            e = standard_e(site, g)
            tgt = delta(site, {n: e})
            src = zero_complex(site)
            out.append(("gacf", n, site.objects[g].label, zero_chain_map(src, tgt)))
    return out


def _include_second_slot(e, target) -> RepMap:
    """e_G into the bottom slot of Delta(e_G) in its lowest degree: the
    first slot there is zero, so the inclusion is the identity block."""
    from .exactlin import scalar

    mats = []
    for i in range(e.site.n):
        m = Matrix.zeros(target.dims[i], e.dims[i])
        off = target.dims[i] - e.dims[i]
        for r in range(e.dims[i]):
            m._d[off + r][r] = scalar(1)
        mats.append(m)
    return RepMap(e, target, mats)


def generating_sets(site: Site, lo: int, hi: int) -> tuple:
    return generating_cofibrations(site, lo, hi), generating_acyclic_cofibrations(site, lo, hi)


def _chain_map_space(x: Complex, y: Complex) -> list:
    return hom_complex(x, y).chain_maps()


def _raw_vec(f: ChainMap, degrees) -> list:
    out = []
    for n in degrees:
        out.extend(vec_map(f.comp(n)))
    return out


def rlp_check(f: ChainMap, generators) -> bool:
    """Exact right-lifting-property test of f against each generator.

    Squares (u, v) with f o u = v o i form a linear subspace of pairs of
    chain maps; f has RLP against i exactly when the linear map
    h |-> (h o i, f o h) covers that subspace.
    """
    x, y = f.source, f.target
    for _, _, _, i in generators:
        a, b = i.source, i.target
        ua = _chain_map_space(a, x)
        vb = _chain_map_space(b, y)
        hb = _chain_map_space(b, x)
        adeg = list(range(a.lo, a.hi + 1))
        bdeg = list(range(b.lo, b.hi + 1))
        # commuting squares: kernel of (u, v) |-> f o u - v o i
        cond_cols = []
        for u in ua:
            cond_cols.append(_raw_vec(f @ u, adeg))
        for v in vb:
            cond_cols.append([-c for c in _raw_vec(v @ i, adeg)])
        nrows = len(_raw_vec(zero_chain_map(a, y), adeg))
        cond = Matrix.from_cols(cond_cols, nrows=nrows) if cond_cols else Matrix.zeros(nrows, 0)
        squares = cond.kernel_basis()
        if squares.cols == 0:
            continue
        # image of the lift operator in the raw pair space
        ra = len(_raw_vec(zero_chain_map(a, x), adeg))
        rb = len(_raw_vec(zero_chain_map(b, y), bdeg))
        phi_cols = []
        for h in hb:
            phi_cols.append(_raw_vec(h @ i, adeg) + _raw_vec(f @ h, bdeg))
        phi = Matrix.from_cols(phi_cols, nrows=ra + rb) if phi_cols else Matrix.zeros(ra + rb, 0)
        sq_cols = []
        for k in range(squares.cols):
            col = squares.col(k)
            u = zero_chain_map(a, x)
            for idx in range(len(ua)):
                c = col.entry(idx, 0)
                if c:
                    u = u + ua[idx].scale(c)
            v = zero_chain_map(b, y)
            for idx in range(len(vb)):
                c = col.entry(len(ua) + idx, 0)
                if c:
                    v = v + vb[idx].scale(c)
            sq_cols.append(_raw_vec(u, adeg) + _raw_vec(v, bdeg))
        sq = Matrix.from_cols(sq_cols, nrows=ra + rb)
        if phi.solve_right(sq) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# The lifting extension (diagnostic route through an Ext group)


def build_lifting_extension(problem: LiftingProblem) -> dict:
    """The extension ker(q) -> T -> cok(i) whose splittings biject with the
    lifts of the square; an independent route to solve_lift."""
    problem.validate()
    a, b = problem.i.source, problem.i.target
    l, m = problem.q.source, problem.q.target
    # Z = pullback of g: B -> M and q: L -> M
    z, leg_b, leg_l = pullback(problem.g, problem.q)
    # A -> Z through (i, f)
    sys = MapSystem()
    for n in range(z.lo, z.hi + 1):
        sys.var(("t", n), a.term(n), z.term(n))
    for n in range(z.lo, z.hi + 1):
        sys.constrain([(("t", n), leg_b.comp(n), None, 1)], rhs=problem.i.comp(n))
        sys.constrain([(("t", n), leg_l.comp(n), None, 1)], rhs=problem.f.comp(n))
        if n > z.lo:
            sys.constrain(
                [(("t", n), z.diff(n), None, 1),
                 (("t", n - 1), None, a.diff(n), -1)],
                shape=(a.term(n), z.term(n - 1)),
            )
    sol = sys.solve()
    assert sol is not None, "the square factors through the pullback"
    ti = ChainMap(a, z, {n: sol[("t", n)] for n in range(z.lo, z.hi + 1)})
    cols = {n: [ti.comp(n).mats[i] for i in range(a.site.n)] for n in z.degrees()}
    img, img_incl = subcomplex_from_columns(z, cols, label="imA")
    t_cx, t_proj, _ = quotient_complex(z, img_incl)
    # C = cok(i)
    icols = {n: [problem.i.comp(n).mats[i] for i in range(a.site.n)] for n in b.degrees()}
    isub, isub_incl = subcomplex_from_columns(b, icols, label="imI")
    c_cx, c_proj, _ = quotient_complex(b, isub_incl)
    # r: T -> C descends from Z -> B -> C
    r_comps = {}
    for n in t_cx.degrees():
        raw = (c_proj.comp(n) @ leg_b.comp(n))
        sec_mats = []
        for i in range(a.site.n):
            sec = t_proj.comp(n).mats[i].solve_right(Matrix.identity(t_cx.term(n).dims[i]))
            assert sec is not None
            sec_mats.append(raw.mats[i] @ sec)
        r_comps[n] = RepMap(t_cx.term(n), c_cx.term(n), sec_mats, validate=False)
    r = ChainMap(t_cx, c_cx, r_comps)
    return {"total": t_cx, "to_cok": r, "pullback": z, "ti": ti}


def extension_splits(ext: dict) -> bool:
    """Whether the extension admits a chain-map section of T -> cok."""
    t_cx, r = ext["total"], ext["to_cok"]
    c_cx = r.target
    sys = MapSystem()
    for n in range(c_cx.lo, c_cx.hi + 1):
        sys.var(("n", n), c_cx.term(n), t_cx.term(n))
    for n in range(c_cx.lo, c_cx.hi + 1):
        sys.constrain([(("n", n), r.comp(n), None, 1)],
                      rhs=identity_map(c_cx.term(n)))
        if n > c_cx.lo:
            sys.constrain(
                [(("n", n), t_cx.diff(n), None, 1),
                 (("n", n - 1), None, c_cx.diff(n), -1)],
                shape=(c_cx.term(n), t_cx.term(n - 1)),
            )
    return sys.solve() is not None


# ---------------------------------------------------------------------------
# Pushout-product


def pushout_product(f: ChainMap, g: ChainMap) -> dict:
    """For cofibrations f: U -> V and g: X -> Y, the induced map h from the
    pushout of V(x)X <- U(x)X -> U(x)Y to V(x)Y, together with the canonical
    comparison cok(h) -> cok(f) (x) cok(g)."""
    u, v = f.source, f.target
    x, y = g.source, g.target
    fx = tensor_chain_map(f, identity_chain_map_on(x))
    uy = tensor_chain_map(identity_chain_map_on(u), g)
    p, leg_vx, leg_uy = pushout(fx, uy)
    vy = tensor_complex(v, y)
    a = tensor_chain_map(identity_chain_map_on(v), g)   # V(x)X -> V(x)Y
    bmap = tensor_chain_map(f, identity_chain_map_on(y))  # U(x)Y -> V(x)Y
    # h descends from [a, b] on the ambient sum
    total, injs, projs = direct_sum_complex([fx.target, uy.target])
    ab = (a @ projs[0]) + (bmap @ projs[1])
    h_comps = {}
    for n in p.degrees():
        # section of the quotient defining P: rebuild it as in pushout()
        span = (injs[0].comp(n) @ fx.comp(n)) - (injs[1].comp(n) @ uy.comp(n))
        sub, incl = subcomplex_like(total.term(n), span)
        from .rep import quotient_by_subobject

        quot, proj, section = quotient_by_subobject(total.term(n), incl)
        assert quot.dims == p.term(n).dims
        h_comps[n] = RepMap(p.term(n), vy.term(n), (ab.comp(n) @ section).mats,
                            validate=False)
    h = ChainMap(p, vy, h_comps)
    for n in p.degrees():
        assert ((h @ leg_vx).comp(n)).mats == a.comp(n).mats
        assert ((h @ leg_uy).comp(n)).mats == bmap.comp(n).mats
    return {"pushout": p, "map": h, "legs": (leg_vx, leg_uy)}


def identity_chain_map_on(c: Complex) -> ChainMap:
    from .complexes import identity_chain_map

    return identity_chain_map(c)


def subcomplex_like(term, span: RepMap):
    from .rep import subobject_from_columns

    cols = [span.mats[i] for i in range(term.site.n)]
    return subobject_from_columns(term, cols)


def cokernel_complex(h: ChainMap) -> tuple:
    """(cok(h) as a complex, projection)."""
    icols = {n: [h.comp(n).mats[i] for i in range(h.source.site.n)]
             for n in h.target.degrees()}
    sub, incl = subcomplex_from_columns(h.target, icols)
    return quotient_complex(h.target, incl)[:2]


def pushout_product_cokernel_check(f: ChainMap, g: ChainMap) -> bool:
    """cok(h) must be isomorphic to cok(f) (x) cok(g) via the canonical map."""
    data = pushout_product(f, g)
    h = data["map"]
    cok_h, proj_h = cokernel_complex(h)
    cok_f, proj_f = cokernel_complex(f)
    cok_g, proj_g = cokernel_complex(g)
    target = tensor_complex(cok_f, cok_g)
    # canonical: V(x)Y ->> cok(f)(x)cok(g) kills the image of h, so it
    # descends to cok(h)
    big = tensor_chain_map(proj_f, proj_g)
    comps = {}
    for n in cok_h.degrees():
        sec_mats = []
        for i in range(f.source.site.n):
            sec = proj_h.comp(n).mats[i].solve_right(
                Matrix.identity(cok_h.term(n).dims[i]))
            assert sec is not None
            sec_mats.append(big.comp(n).mats[i] @ sec)
        comps[n] = RepMap(cok_h.term(n), target.term(n), sec_mats, validate=False)
    medge = ChainMap(cok_h, target, comps)
    return medge.is_iso()
