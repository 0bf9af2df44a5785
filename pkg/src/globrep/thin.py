"""Thin replacements: every complex is quasi-isomorphic to a complex of
projectives whose differential strictly drops the order filtration, and
that model is unique up to isomorphism of complexes.

The splitting walks the order layers bottom-up: each layer lives in a
groupoid category, so it splits as homology + contractible; the
contractible part lifts to a subcomplex, and quotienting by the
accumulated lifts leaves the thin model, split off by one more lift.
"""

from __future__ import annotations

from .exactlin import Matrix, hstack
from .complexes import (
    ChainMap,
    Complex,
    delta,
    direct_sum_complex,
    find_contraction,
    identity_chain_map,
    is_quasi_iso,
    is_thin,
    l_sub_complex,
    quotient_complex,
    semisimple_split,
    subcomplex_from_columns,
    zero_complex,
)
from .natsolve import MapSystem
from .rep import RepMap, identity_map, is_projective
from .resolutions import p_total


class ThinError(ValueError):
    pass


class ThinDecomposition:
    def __init__(self, thin_part, contractible_part, iso_to, iso_from, contraction, proj, section):
        self.thin_part = thin_part
        self.contractible_part = contractible_part
        self.iso_to = iso_to        # X -> thin + contractible
        self.iso_from = iso_from    # thin + contractible -> X
        self.contraction = contraction
        self.proj = proj            # X -> thin
        self.section = section      # thin -> X


def _layer_complex(x: Complex, s: int):
    """(layer L_s X, sub complex L_{<=s} X, inclusion, projection to layer)."""
    sub, incl = l_sub_complex(x, s)
    prev, prev_incl = l_sub_complex(x, s - 1)
    comps = {}
    for n in x.degrees():
        sol_mats = []
        for i in range(x.site.n):
            sol = incl.comp(n).mats[i].solve_right(prev_incl.comp(n).mats[i])
            assert sol is not None
            sol_mats.append(sol)
        comps[n] = RepMap(prev.terms[n], sub.terms[n], sol_mats, validate=False)
    prev_in_sub = ChainMap(prev, sub, comps)
    layer, proj, _ = quotient_complex(sub, prev_in_sub)
    return layer, sub, incl, proj


def thin_split(x: Complex) -> ThinDecomposition:
    """Split a complex of projectives as thin + contractible."""
    site = x.site
    for n in x.degrees():
        if not is_projective(x.terms[n]):
            raise ThinError(
                f"term in degree {n} is not projective; totalize first (p_total)")
    v_columns = {n: [Matrix.zeros(x.terms[n].dims[i], 0) for i in range(site.n)]
                 for n in x.degrees()}
    any_cols = False
    for s in site.orders():
        layer, sub, incl, proj = _layer_complex(x, s)
        if all(layer.terms[n].is_zero() for n in layer.degrees()):
            continue
        split = semisimple_split(layer)
        graded_b = split["boundaries"]
        if not graded_b:
            continue
        vcx = delta(site, {n: b for n, b in graded_b.items()})
        # inclusion of the delta part into the layer: psi restricted to the
        # two boundary slots
        w_comps = {}
        for n in layer.degrees():
            model = split["model"].terms[n]
            h_dim = split["zero_part"].terms[n].dims
            psi = split["psi"].comp(n)
            vt = vcx.term(n)
            mats = []
            for i in range(site.n):
                cols = list(range(h_dim[i], model.dims[i]))
                mats.append(psi.mats[i].select_cols(cols))
            w_comps[n] = RepMap(vt, layer.terms[n], mats, validate=False)
        w = ChainMap(vcx, layer, w_comps)
        # lift w through the layer projection as a chain map
        sys = MapSystem()
        degs = [n for n in vcx.degrees() if x.lo <= n <= x.hi]
        for n in degs:
            sys.var(("v", n), vcx.term(n), sub.term(n))
        for n in degs:
            sys.constrain([(("v", n), proj.comp(n), None, 1)], rhs=w.comp(n))
            chain_terms = [(("v", n), sub.diff(n), None, 1)]
            if n - 1 in degs:
                chain_terms.append((("v", n - 1), None, vcx.diff(n), -1))
            sys.constrain(chain_terms, shape=(vcx.term(n), sub.term(n - 1)))
        sol = sys.solve()
        assert sol is not None, "contractible layer part must lift to a subcomplex"
        for n in degs:
            lifted = incl.comp(n) @ sol[("v", n)]
            for i in range(site.n):
                if lifted.mats[i].cols:
                    v_columns[n][i] = hstack([v_columns[n][i], lifted.mats[i]])
                    any_cols = True
    if not any_cols:
        v = zero_complex(site)
        thin_cx = x
        ok, _ = is_thin(thin_cx, require_projective=False)
        if not ok:
            raise ThinError("internal error: no contractible part found but complex is not thin")
        model, injs, projs = direct_sum_complex([thin_cx, _pad(v, x.lo, x.hi)])
        return ThinDecomposition(
            thin_cx, _pad(v, x.lo, x.hi), injs[0], projs[0], None,
            identity_chain_map(x), identity_chain_map(x))
    columns = {n: v_columns[n] for n in x.degrees()}
    v, v_incl = subcomplex_from_columns(x, columns, label="V")
    for n in x.degrees():
        for i in range(site.n):
            assert v.terms[n].dims[i] == columns[n][i].rank(), \
                "layer lifts must be independent"
    thin_cx, proj, _sections = quotient_complex(x, v_incl)
    ok, witness = is_thin(thin_cx, require_projective=False)
    if not ok:
        raise ThinError(f"quotient by the contractible part is not thin: {witness}")
    # split the quotient: a chain-map section exists because the kernel is
    # a contractible complex of projectives
    sys = MapSystem()
    for n in x.degrees():
        sys.var(("t", n), thin_cx.terms[n], x.terms[n])
    for n in x.degrees():
        sys.constrain([(("t", n), proj.comp(n), None, 1)],
                      rhs=identity_map(thin_cx.terms[n]))
        if n > x.lo:
            sys.constrain(
                [(("t", n), x.diff(n), None, 1),
                 (("t", n - 1), None, thin_cx.diff(n), -1)],
                shape=(thin_cx.term(n), x.term(n - 1)),
            )
    sol = sys.solve()
    assert sol is not None, "thin quotient must split"
    theta = ChainMap(thin_cx, x, {n: sol[("t", n)] for n in x.degrees()})
    # retraction onto V: 1 - theta o proj factors through v_incl
    rho_comps = {}
    for n in x.degrees():
        resid = identity_map(x.terms[n]) - (theta.comp(n) @ proj.comp(n))
        mats = []
        for i in range(site.n):
            sol_m = v_incl.comp(n).mats[i].solve_right(resid.mats[i])
            assert sol_m is not None
            mats.append(sol_m)
        rho_comps[n] = RepMap(x.terms[n], v.terms[n], mats, validate=False)
    rho = ChainMap(x, v, rho_comps)
    model, injs, projs = direct_sum_complex([thin_cx, v])
    iso_to = (injs[0] @ proj) + (injs[1] @ rho)
    iso_from = (theta @ projs[0]) + (v_incl @ projs[1])
    for n in x.degrees():
        assert ((iso_from @ iso_to).comp(n)).mats == identity_map(x.terms[n]).mats
    for n in model.degrees():
        assert ((iso_to @ iso_from).comp(n)).mats == identity_map(model.terms[n]).mats
    contraction = find_contraction(v)
    assert contraction is not None, "the complement must be contractible"
    return ThinDecomposition(thin_cx, v, iso_to, iso_from, contraction, proj, theta)


def _pad(c: Complex, lo: int, hi: int) -> Complex:
    lo2, hi2 = min(lo, c.lo), max(hi, c.hi)
    return Complex(c.site, lo2, hi2,
                   {n: c.term(n) for n in range(lo2, hi2 + 1)},
                   {n: c.diff(n) for n in range(lo2 + 1, hi2 + 1)},
                   validate=False)


def thin_replacement(c: Complex) -> tuple:
    """(thin complex T, quasi-isomorphism u: T -> C)."""
    pc, eps = p_total(c)
    dec = thin_split(pc)
    u = eps @ dec.section
    ok, _ = is_thin(dec.thin_part, require_projective=False)
    assert ok
    assert is_quasi_iso(u), "thin replacement must be a quasi-isomorphism"
    return dec.thin_part, u


def layer_map(f: ChainMap, s: int):
    """The induced map on the order-s layer complexes."""
    x, y = f.source, f.target
    lx, subx, inclx, projx = _layer_complex(x, s)
    ly, suby, incly, projy = _layer_complex(y, s)
    comps = {}
    for n in x.degrees():
        fx = f.comp(n) @ inclx.comp(n)
        mats = []
        for i in range(x.site.n):
            sol = incly.comp(n).mats[i].solve_right(fx.mats[i])
            assert sol is not None, "chain maps preserve the order filtration"
            mats.append(sol)
        fsub = RepMap(subx.terms[n], suby.terms[n], mats, validate=False)
        # descend to the layer: the result is independent of the chosen
        # preimages because chain maps preserve the filtration
        sec_mats = []
        for i in range(x.site.n):
            sec = projx.comp(n).mats[i].solve_right(Matrix.identity(lx.terms[n].dims[i]))
            assert sec is not None
            sec_mats.append(sec)
        comps[n] = RepMap(lx.terms[n], ly.terms[n],
                          [(projy.comp(n) @ fsub).mats[i] @ sec_mats[i]
                           for i in range(x.site.n)])
    return ChainMap(lx, ly, comps)


def thin_iso(f: ChainMap) -> ChainMap:
    """Invert a quasi-isomorphism between thin complexes.

    Verifies that every layer map is an isomorphism (which forces f itself
    to be one) and returns the literal pointwise inverse.
    """
    okx, _ = is_thin(f.source, require_projective=False)
    oky, _ = is_thin(f.target, require_projective=False)
    if not (okx and oky):
        raise ThinError("both complexes must be thin")
    if not is_quasi_iso(f):
        raise ThinError("map is not a quasi-isomorphism")
    for s in f.source.site.orders():
        lf = layer_map(f, s)
        for n in lf.source.degrees():
            if not lf.comp(n).is_iso():
                raise ThinError(f"layer {s} map fails to be an isomorphism in degree {n}")
    assert f.is_iso(), "layerwise isomorphism must force a chain isomorphism"
    return f.inverse()


def compare_thin_replacements(t1: Complex, u1: ChainMap, t2: Complex, u2: ChainMap) -> ChainMap:
    """Given two thin replacements u1: T1 -> C and u2: T2 -> C, produce the
    canonical comparison isomorphism T1 -> T2: solve for a chain map f with
    u2 o f homotopic to u1, then invert layerwise."""
    c = u1.target
    sys = MapSystem()
    lo = min(t1.lo, t2.lo, c.lo) - 1
    hi = max(t1.hi, t2.hi, c.hi) + 1
    sys.var(("h", lo - 1), t1.term(lo - 1), c.term(lo))
    for n in range(lo, hi + 1):
        sys.var(("f", n), t1.term(n), t2.term(n))
        sys.var(("h", n), t1.term(n), c.term(n + 1))
    for n in range(lo, hi + 1):
        # chain map condition for f
        if n > lo:
            sys.constrain(
                [(("f", n), t2.diff(n), None, 1),
                 (("f", n - 1), None, t1.diff(n), -1)],
                shape=(t1.term(n), t2.term(n - 1)),
            )
        # u2 f - u1 = d h + h d
        sys.constrain(
            [(("f", n), u2.comp(n), None, 1),
             (("h", n), c.diff(n + 1), None, -1),
             (("h", n - 1), None, t1.diff(n), -1)],
            rhs=u1.comp(n),
        )
    sol = sys.solve()
    assert sol is not None, "comparison map must exist"
    f = ChainMap(t1, t2, {n: sol[("f", n)] for n in range(lo, hi + 1)})
    thin_iso(f)
    return f
