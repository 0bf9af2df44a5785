"""Linear systems whose unknowns are natural transformations.

Sections, homotopies, chain-map lifts and comparison maps are all solutions
of systems of the form

    sum_k  coeff * L o t_k o R  =  rhs

in several unknown natural maps t_k.  Each unknown is parametrized by a
basis of its hom space, so the solve happens in a small coefficient space;
constraints are imposed block by block, which keeps the eliminations small.
"""

from __future__ import annotations

from .exactlin import AffineSolutions, Matrix, scalar
from .rep import RepObject, hom_space, vec_map, zero_map


class MapSystem:
    def __init__(self):
        self.keys: list = []
        self.vars: dict = {}  # key -> (A, B, basis, offset)
        self.total = 0
        self.constraints: list = []

    def var(self, key, a: RepObject, b: RepObject):
        assert key not in self.vars
        basis = hom_space(a, b)
        self.vars[key] = (a, b, basis, self.total)
        self.keys.append(key)
        self.total += len(basis)

    def constrain(self, terms, rhs=None, shape=None):
        """terms: list of (key, L, R, coeff) contributing coeff * L o t o R;
        L or R may be None (identity).  rhs: a RepMap, or None for zero, in
        which case shape=(source, target) fixes the ambient hom space."""
        self.constraints.append((terms, rhs, shape))

    def _constraint_shape(self, terms, rhs, shape):
        if rhs is not None:
            return rhs.source, rhs.target
        if shape is not None:
            return shape
        key, l, r, _ = terms[0]
        a, b, _, _ = self.vars[key]
        src = r.source if r is not None else a
        tgt = l.target if l is not None else b
        return src, tgt

    def _solve_space(self) -> AffineSolutions | None:
        acc = AffineSolutions(self.total)
        for terms, rhs, shape in self.constraints:
            src, tgt = self._constraint_shape(terms, rhs, shape)
            site = src.site
            nrows = sum(tgt.dims[i] * src.dims[i] for i in range(site.n))
            if nrows == 0:
                continue
            m = Matrix.zeros(nrows, self.total)
            for key, l, r, coeff in terms:
                a, b, basis, offset = self.vars[key]
                if not basis:
                    continue
                c = scalar(coeff)
                for k, f in enumerate(basis):
                    g = f
                    if r is not None:
                        g = g @ r
                    if l is not None:
                        g = l @ g
                    vec = vec_map(g)
                    col = offset + k
                    for row_i, v in enumerate(vec):
                        if v:
                            m._d[row_i][col] = m._d[row_i][col] + c * v
            if rhs is not None:
                bvec = Matrix.from_cols([vec_map(rhs)], nrows=nrows)
            else:
                bvec = Matrix.zeros(nrows, 1)
            if not acc.restrict(m, bvec):
                return None
        return acc

    def _coords_to_maps(self, col: Matrix) -> dict:
        out = {}
        for key in self.keys:
            a, b, basis, offset = self.vars[key]
            f = zero_map(a, b)
            for k, base in enumerate(basis):
                c = col.entry(offset + k, 0)
                if c:
                    f = f + base.scale(c)
            out[key] = f
        return out

    def solve(self) -> dict | None:
        """One solution as {key: RepMap}, or None if inconsistent.
        Deterministic: free coefficients are zero."""
        acc = self._solve_space()
        if acc is None:
            return None
        return self._coords_to_maps(acc.particular)

    def solve_space(self):
        """(particular, kernel basis) as map dicts, or None.  The kernel
        lets callers enumerate or randomize over all solutions."""
        acc = self._solve_space()
        if acc is None:
            return None
        particular = self._coords_to_maps(acc.particular)
        kernel = [self._coords_to_maps(acc.basis.col(j)) for j in range(acc.basis.cols)]
        return particular, kernel
