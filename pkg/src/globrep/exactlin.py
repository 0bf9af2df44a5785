"""Exact rational scalars and dense matrices.

Every linear-algebra question in this package bottoms out here: scalars are
arbitrary-precision rationals (gmpy2.mpq, always in lowest terms with positive
denominator), matrices are dense and row-major, and every operation is exact.
Results are deterministic: rref picks the first nonzero pivot in column order,
and solve_right sets all free variables to zero.
"""

from __future__ import annotations

from gmpy2 import mpq

Scalar = mpq

ZERO = mpq(0)
ONE = mpq(1)


def scalar(x) -> mpq:
    """Coerce an int, string ("a/b" or "a"), or mpq to an exact rational."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, str):
        return mpq(x)
    if isinstance(x, (int, bool)):
        return mpq(int(x))
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact arithmetic")
    return mpq(x)


def scalar_str(x: mpq) -> str:
    """Serialize a scalar as "a/b", or "a" when the denominator is 1."""
    x = scalar(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """An immutable dense matrix of exact rationals.

    0xN and Nx0 matrices are legal and represent maps to or from the zero
    space.  All arithmetic skips stored zeros, which matters because the
    action matrices showing up in practice are permutation-like.
    """

    __slots__ = ("rows", "cols", "_d", "_rref")

    def __init__(self, rows: int, cols: int, data):
        assert rows >= 0 and cols >= 0
        assert len(data) == rows
        self.rows = rows
        self.cols = cols
        self._d = data  # list of row lists of mpq; not shared externally
        self._rref = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(rows_of_values) -> "Matrix":
        data = [[scalar(x) for x in row] for row in rows_of_values]
        ncols = len(data[0]) if data else 0
        for row in data:
            assert len(row) == ncols, "ragged rows"
        return Matrix(len(data), ncols, data)

    @staticmethod
    def from_rows_shape(rows: int, cols: int, rows_of_values) -> "Matrix":
        m = Matrix.from_rows(rows_of_values)
        if m.rows == 0:
            return Matrix.zeros(rows, cols) if rows == 0 else m
        assert (m.rows, m.cols) == (rows, cols)
        return m

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, [[ZERO] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "Matrix":
        data = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = ONE
        return Matrix(n, n, data)

    @staticmethod
    def from_cols(cols_of_vectors, nrows: int | None = None) -> "Matrix":
        cols = [[scalar(x) for x in col] for col in cols_of_vectors]
        if cols:
            nrows = len(cols[0])
            for c in cols:
                assert len(c) == nrows
        else:
            assert nrows is not None, "need nrows for a matrix with no columns"
        data = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        return Matrix(nrows, len(cols), data)

    @staticmethod
    def scalar_matrix(n: int, s) -> "Matrix":
        s = scalar(s)
        data = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = s
        return Matrix(n, n, data)

    # -- accessors ----------------------------------------------------

    @property
    def entries(self) -> list:
        """Row-major flat list of all entries."""
        return [x for row in self._d for x in row]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> mpq:
        return self._d[i][j]

    def row_list(self, i: int) -> list:
        return list(self._d[i])

    def col_list(self, j: int) -> list:
        return [self._d[i][j] for i in range(self.rows)]

    def col(self, j: int) -> "Matrix":
        return Matrix(self.rows, 1, [[self._d[i][j]] for i in range(self.rows)])

    def select_cols(self, idxs) -> "Matrix":
        return Matrix(self.rows, len(idxs), [[row[j] for j in idxs] for row in self._d])

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._d for x in row)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self._d[i][j] == (1 if i == j else 0)
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(self._d[i] == other._d[i] for i in range(self.rows))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self._d)))

    def __repr__(self) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"Matrix({self.rows}x{self.cols})"
        body = "; ".join(" ".join(scalar_str(x) for x in row) for row in self._d)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        assert self.shape == other.shape
        return Matrix(
            self.rows,
            self.cols,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._d, other._d)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        assert self.shape == other.shape
        return Matrix(
            self.rows,
            self.cols,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self._d, other._d)],
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [[-a for a in row] for row in self._d])

    def scale(self, s) -> "Matrix":
        s = scalar(s)
        return Matrix(self.rows, self.cols, [[s * a for a in row] for row in self._d])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        assert self.cols == other.rows, f"shape mismatch {self.shape} @ {other.shape}"
        od = other._d
        out = []
        for row in self._d:
            nz = [(j, x) for j, x in enumerate(row) if x]
            if not nz:
                out.append([ZERO] * other.cols)
                continue
            acc = [ZERO] * other.cols
            for j, x in nz:
                orow = od[j]
                for k in range(other.cols):
                    v = orow[k]
                    if v:
                        acc[k] += x * v
            out.append(acc)
        return Matrix(self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols, self.rows,
            [[self._d[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    # -- elimination --------------------------------------------------

    def rref(self) -> tuple:
        """Reduced row echelon form.

        Returns (R, pivots) where pivots is the tuple of pivot column
        indices.  Deterministic: scans columns left to right and takes the
        first row with a nonzero entry.
        """
        if self._rref is not None:
            return self._rref
        rows = [list(r) for r in self._d]
        nrows, ncols = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(ncols):
            pr = None
            for i in range(r, nrows):
                if rows[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            prow = rows[r]
            pv = prow[c]
            if pv != 1:
                inv = 1 / pv
                for j in range(c, ncols):
                    if prow[j]:
                        prow[j] = prow[j] * inv
            nz = [j for j in range(c, ncols) if prow[j]]
            for i in range(nrows):
                ri = rows[i]
                if i != r and ri[c]:
                    f = ri[c]
                    for j in nz:
                        ri[j] = ri[j] - f * prow[j]
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        result = (Matrix(nrows, ncols, rows), tuple(pivots))
        self._rref = result
        result[0]._rref = result
        return result

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """A matrix whose columns form a basis of the null space."""
        R, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self.cols) if j not in pivset]
        cols = []
        for fj in free:
            v = [ZERO] * self.cols
            v[fj] = ONE
            for r, pj in enumerate(pivots):
                v[pj] = -R._d[r][fj]
            cols.append(v)
        return Matrix.from_cols(cols, nrows=self.cols)

    def solve_right(self, b: "Matrix") -> "Matrix | None":
        """One solution X of self @ X = b, or None if the system is
        inconsistent.  Free variables are set to zero under the rref
        parameterization."""
        assert self.rows == b.rows, "row count mismatch"
        n, m = self.cols, b.cols
        aug = Matrix(
            self.rows, n + m,
            [list(ra) + list(rb) for ra, rb in zip(self._d, b._d)],
        )
        R, pivots = aug.rref()
        for c in pivots:
            if c >= n:
                return None
        data = [[ZERO] * m for _ in range(n)]
        for r, pj in enumerate(pivots):
            row = R._d[r]
            for k in range(m):
                data[pj][k] = row[n + k]
        return Matrix(n, m, data)

    def column_space_basis(self) -> tuple:
        """(B, pivot column indices): columns of B are the pivot columns of
        self, a deterministic basis of the column space."""
        _, pivots = self.rref()
        return self.select_cols(list(pivots)), list(pivots)

    def inverse(self) -> "Matrix | None":
        if self.rows != self.cols:
            return None
        sol = self.solve_right(Matrix.identity(self.rows))
        if sol is None:
            return None
        return sol

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; row (i1,i2) maps to i1*other.rows + i2."""
        out = []
        for i1 in range(self.rows):
            arow = self._d[i1]
            for i2 in range(other.rows):
                brow = other._d[i2]
                row = []
                for a in arow:
                    if a:
                        row.extend(a * b for b in brow)
                    else:
                        row.extend([ZERO] * other.cols)
                out.append(row)
        return Matrix(self.rows * other.rows, self.cols * other.cols, out)


# -- module-level operation names ------------------------------------


def rref(m: Matrix) -> tuple:
    return m.rref()


def kernel_basis(m: Matrix) -> Matrix:
    return m.kernel_basis()


def solve_right(a: Matrix, b: Matrix):
    return a.solve_right(b)


def kron(a: Matrix, b: Matrix) -> Matrix:
    return a.kron(b)


def hstack(mats) -> Matrix:
    mats = list(mats)
    assert mats, "hstack of nothing"
    rows = mats[0].rows
    assert all(m.rows == rows for m in mats)
    data = [sum((list(m._d[i]) for m in mats), []) for i in range(rows)]
    return Matrix(rows, sum(m.cols for m in mats), data)


def vstack(mats) -> Matrix:
    mats = list(mats)
    assert mats, "vstack of nothing"
    cols = mats[0].cols
    assert all(m.cols == cols for m in mats)
    data = [list(row) for m in mats for row in m._d]
    return Matrix(sum(m.rows for m in mats), cols, data)


def block_matrix(blocks) -> Matrix:
    """Assemble from a 2D grid of matrices (each grid row vstacks an hstack)."""
    return vstack([hstack(row) for row in blocks])


def block_diag(mats) -> Matrix:
    mats = list(mats)
    total_r = sum(m.rows for m in mats)
    total_c = sum(m.cols for m in mats)
    out = Matrix.zeros(total_r, total_c)
    data = out._d
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            row = data[r0 + i]
            for j in range(m.cols):
                row[c0 + j] = m._d[i][j]
        r0 += m.rows
        c0 += m.cols
    return Matrix(total_r, total_c, data)


def matrix_to_json(m: Matrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[scalar_str(x) for x in m.row_list(i)] for i in range(m.rows)],
    }


def matrix_from_json(obj) -> Matrix:
    m = Matrix(
        obj["rows"], obj["cols"],
        [[scalar(x) for x in row] for row in obj["entries"]],
    )
    assert len(obj["entries"]) == obj["rows"]
    for row in obj["entries"]:
        assert len(row) == obj["cols"]
    return m


class AffineSolutions:
    """The solution set {p + K c} of an accumulating linear system.

    Constraints are imposed one block at a time; each block is solved in the
    current (shrinking) coefficient space, which keeps the eliminations small.
    Used by the natural-transformation solvers, where one global stacked
    system would be needlessly large.
    """

    def __init__(self, n: int):
        self.n = n
        self.particular = Matrix.zeros(n, 1)
        self.basis = Matrix.identity(n)  # columns span the homogeneous part
        self.consistent = True

    @property
    def dim(self) -> int:
        return self.basis.cols

    def restrict(self, a: Matrix, b: Matrix) -> bool:
        """Impose a @ x = b; returns False (and marks inconsistent) if the
        combined system has no solution."""
        assert a.cols == self.n and b.cols == 1 and a.rows == b.rows
        if not self.consistent:
            return False
        if a.rows == 0:
            return True
        ak = a @ self.basis
        resid = b - a @ self.particular
        sol = ak.solve_right(resid)
        if sol is None:
            self.consistent = False
            return False
        self.particular = self.particular + self.basis @ sol
        self.basis = self.basis @ ak.kernel_basis()
        return True

    def solution(self) -> Matrix | None:
        return self.particular if self.consistent else None
