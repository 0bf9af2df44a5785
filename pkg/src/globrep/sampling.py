"""Seeded random instances for the verification suites.

All randomness flows through one linear congruential generator so that a
(seed, site, count) triple reproduces the same instance stream in any
implementation: state <- (6364136223846793005 * state + 1442695040888963407)
mod 2^64, and draws below n take (state >> 33) mod n.
"""

from __future__ import annotations

from .exactlin import Matrix, scalar
from .complexes import (
    ChainMap,
    Complex,
    delta,
    direct_sum_complex,
    hom_complex,
    shift,
)
from .natsolve import MapSystem
from .rep import (
    RepMap,
    RepObject,
    direct_sum,
    exact_pieces,
    hom_space,
    make_e,
    standard_e,
    unit_object,
    zero_map,
    zero_object,
)
from .resolutions import resolve_object
from .site import Site

LCG_MULT = 6364136223846793005
LCG_INC = 1442695040888963407
LCG_MASK = (1 << 64) - 1


class Rng:
    def __init__(self, seed: int):
        self.state = seed & LCG_MASK

    def next(self) -> int:
        self.state = (LCG_MULT * self.state + LCG_INC) & LCG_MASK
        return self.state

    def below(self, n: int) -> int:
        assert n > 0
        return (self.next() >> 33) % n

    def pick(self, items):
        return items[self.below(len(items))]

    def coeff(self, bound: int = 2) -> int:
        """A nonzero-biased small integer in [-bound, bound]."""
        return self.below(2 * bound + 1) - bound

    def fork(self) -> "Rng":
        return Rng(self.next())


# ---------------------------------------------------------------------------
# Random objects


def random_e_sum(site: Site, rng: Rng, max_mult: int = 2, allow_zero: bool = True) -> RepObject:
    """A direct sum of standard generators with multiplicities <= max_mult."""
    parts = []
    for g in range(site.n):
        for _ in range(rng.below(max_mult + 1)):
            parts.append(standard_e(site, g) if rng.below(3) else make_e(site, g, "trivial"))
    if not parts:
        if allow_zero:
            return zero_object(site)
        parts.append(standard_e(site, rng.below(site.n)))
    total, _, _ = direct_sum(parts)
    return total


def random_map(x: RepObject, y: RepObject, rng: Rng, bound: int = 2) -> RepMap:
    basis = hom_space(x, y)
    f = zero_map(x, y)
    for b in basis:
        c = rng.coeff(bound)
        if c:
            f = f + b.scale(c)
    return f


def random_fp_object(site: Site, rng: Rng, max_mult: int = 2) -> RepObject:
    """A random finitely presented object: kernel, image, or cokernel of a
    random map between generator sums."""
    x = random_e_sum(site, rng, max_mult, allow_zero=False)
    y = random_e_sum(site, rng, max_mult, allow_zero=False)
    f = random_map(x, y, rng)
    pieces = exact_pieces(f)
    return rng.pick([pieces.kernel, pieces.image, pieces.cokernel])


def random_invertible(n: int, rng: Rng) -> Matrix:
    """A random integer matrix with determinant +-1: a product of unit
    upper and lower triangular matrices."""
    m = Matrix.identity(n)
    for _ in range(2):
        u = Matrix.identity(n)
        for i in range(n):
            for j in range(i + 1, n):
                u._d[i][j] = scalar(rng.coeff(1))
        l = Matrix.identity(n)
        for i in range(n):
            for j in range(i):
                l._d[i][j] = scalar(rng.coeff(1))
        m = m @ u @ l
    return m


def shuffle_object(x: RepObject, rng: Rng) -> tuple:
    """(x', iso: x' -> x): the same object in a random basis."""
    site = x.site
    s_mats = [random_invertible(d, rng) for d in x.dims]
    s_inv = [m.inverse() for m in s_mats]
    act = {}
    for key in site.all_class_keys():
        i, j, _ = key
        act[key] = s_inv[i] @ x.act[key] @ s_mats[j]
    shuffled = RepObject(site, x.dims, act, label=f"{x.label}~")
    iso = RepMap(shuffled, x, s_mats)
    return shuffled, iso


def shuffle_complex(c: Complex, rng: Rng) -> tuple:
    """(c', iso: c' -> c) with every term in a random basis."""
    terms = {}
    isos = {}
    for n in c.degrees():
        terms[n], isos[n] = shuffle_object(c.terms[n], rng)
    diffs = {}
    for n in range(c.lo + 1, c.hi + 1):
        mats = [isos[n - 1].mats[i].inverse() @ c.diffs[n].mats[i] @ isos[n].mats[i]
                for i in range(c.site.n)]
        diffs[n] = RepMap(terms[n], terms[n - 1], mats, validate=False)
    shuffled = Complex(c.site, c.lo, c.hi, terms, diffs)
    iso = ChainMap(shuffled, c, {n: isos[n] for n in c.degrees()})
    return shuffled, iso


# ---------------------------------------------------------------------------
# Random complexes


def random_projective_complex(site: Site, rng: Rng, lo: int = 0, hi: int = 3,
                              max_mult: int = 2) -> Complex:
    """A complex of generator sums with d^2 = 0: each differential is a
    random solution of the kernel constraint against the previous one."""
    terms = {n: random_e_sum(site, rng, max_mult) for n in range(lo, hi + 1)}
    diffs = {}
    prev = None
    for n in range(lo + 1, hi + 1):
        sys = MapSystem()
        sys.var("d", terms[n], terms[n - 1])
        if prev is not None and not prev.is_zero():
            sys.constrain([("d", prev, None, 1)], shape=(terms[n], terms[n - 2]))
        sol = sys.solve_space()
        assert sol is not None
        _, kernel = sol
        d = zero_map(terms[n], terms[n - 1])
        for basis_sol in kernel:
            c = rng.coeff(1)
            if c:
                d = d + basis_sol["d"].scale(c)
        diffs[n] = d
        prev = d
    return Complex(site, lo, hi, terms, diffs)


def random_complex(site: Site, rng: Rng, lo: int = 0, hi: int = 2,
                   max_mult: int = 1) -> Complex:
    """A bounded complex with general (not necessarily projective) terms."""
    terms = {n: random_fp_object(site, rng, max_mult) for n in range(lo, hi + 1)}
    diffs = {}
    prev = None
    for n in range(lo + 1, hi + 1):
        sys = MapSystem()
        sys.var("d", terms[n], terms[n - 1])
        if prev is not None and not prev.is_zero():
            sys.constrain([("d", prev, None, 1)], shape=(terms[n], terms[n - 2]))
        sol = sys.solve_space()
        _, kernel = sol
        d = zero_map(terms[n], terms[n - 1])
        for basis_sol in kernel:
            c = rng.coeff(1)
            if c:
                d = d + basis_sol["d"].scale(c)
        diffs[n] = d
        prev = d
    return Complex(site, lo, hi, terms, diffs)


def random_acyclic_complex(site: Site, rng: Rng) -> Complex:
    """An acyclic complex that is usually not contractible: the augmented
    resolution of a random object, plus possibly a contractible cushion."""
    kind = rng.below(3)
    if kind == 0:
        graded = {}
        for n in range(rng.below(3) + 1):
            obj = random_fp_object(site, rng, 1)
            if not obj.is_zero():
                graded[n] = obj
        if not graded:
            graded[0] = unit_object(site)
        return delta(site, graded)
    x = random_fp_object(site, rng, 1)
    if x.is_zero():
        x = unit_object(site)
    res = resolve_object(x)
    terms = {-1: x}
    diffs = {}
    for i, p in enumerate(res.stages):
        terms[i] = p
    diffs[0] = res.augmentation
    for i, d in enumerate(res.deltas):
        diffs[i + 1] = d
    aug = Complex(site, -1, len(res.stages) - 1, terms, diffs)
    aug = shift(aug, rng.below(3))
    if kind == 2:
        cushion = delta(site, {rng.below(3): random_e_sum(site, rng, 1)})
        aug, _, _ = direct_sum_complex([aug, cushion])
    return aug


def random_chain_map(x: Complex, y: Complex, rng: Rng, bound: int = 2) -> ChainMap:
    data = hom_complex(x, y)
    maps = data.chain_maps()
    f = None
    for m in maps:
        c = rng.coeff(bound)
        if c:
            f = m.scale(c) if f is None else f + m.scale(c)
    if f is None:
        return ChainMap(x, y, {}, validate=False)
    return f
