"""Exact dense linear algebra over the rationals and prime fields.

Everything downstream (representations, differential modules, the
homotopy-hom oracles) is built on the handful of operations here.  Values
are immutable and all functions are pure, so matrices can be shared freely.

Rational entries are `fractions.Fraction`, which keeps them in lowest
terms with a positive denominator; prime-field entries are ints in
[0, p).  Both give bit-exact equality.  Elimination and multiplication
over a prime field dispatch to the compiled kernel when it was built, and
to the pure-Python twin otherwise; the outputs are identical either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ._kernels import impl as _kernel
from .errors import SingularMatrixError

MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3_215_031_751."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ScalarField:
    """The rationals (p is None) or the prime field F_p with p < 2**31."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not (2 <= self.p < MAX_PRIME) or not is_prime(self.p):
                raise ValueError(f"modulus must be a prime below 2**31, got {self.p!r}")

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def canon(self, x):
        """Canonical representative: reduced Fraction, or int in [0, p)."""
        if self.p is None:
            return x if type(x) is Fraction else Fraction(x)
        return x % self.p if type(x) is int else int(x) % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else a * b % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return 1 / a if self.p is None else pow(a, self.p - 2, self.p)

    def parse(self, token: str):
        """Read an element from text: '7', '-3', or 'a/b' over the rationals."""
        token = token.strip()
        if self.p is None:
            return Fraction(token)
        return int(token) % self.p

    def format(self, x) -> str:
        return str(x)

    def __str__(self):
        return "Q" if self.p is None else f"F{self.p}"


QQ = ScalarField()


def GF(p: int) -> ScalarField:
    return ScalarField(p)


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix; entries row-major and canonical for the field.

    Zero-row and zero-column matrices are legal and behave as identities
    for block assembly and as empty maps under composition.
    """

    field: ScalarField
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entry count {len(self.entries)} != {self.rows}x{self.cols}"
            )
        canon = self.field.canon
        object.__setattr__(self, "entries", tuple(canon(x) for x in self.entries))

    def __getitem__(self, rc):
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(rc)
        return self.entries[r * self.cols + c]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_lists(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def __repr__(self):
        return f"Mat({self.field}, {self.rows}x{self.cols}, {self.to_lists()})"


def mat(field: ScalarField, rows: list) -> Mat:
    """Build a matrix from nested lists; [] is the 0x0 matrix."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    flat = []
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged rows")
        flat.extend(r)
    return Mat(field, nrows, ncols, tuple(flat))


def mat_zeros(field: ScalarField, rows: int, cols: int) -> Mat:
    z = field.zero()
    return Mat(field, rows, cols, (z,) * (rows * cols))


def mat_identity(field: ScalarField, n: int) -> Mat:
    z, o = field.zero(), field.one()
    return Mat(field, n, n, tuple(o if i == j else z for i in range(n) for j in range(n)))


def mat_col(field: ScalarField, seq) -> Mat:
    seq = list(seq)
    return Mat(field, len(seq), 1, tuple(seq))


def mat_is_zero(A: Mat) -> bool:
    z = A.field.zero()
    return all(x == z for x in A.entries)


def mat_transpose(A: Mat) -> Mat:
    return Mat(
        A.field, A.cols, A.rows,
        tuple(A.entries[r * A.cols + c] for c in range(A.cols) for r in range(A.rows)),
    )


def _check_same_field(A: Mat, B: Mat):
    if A.field != B.field:
        raise ValueError(f"field mismatch: {A.field} vs {B.field}")


def mat_add(A: Mat, B: Mat) -> Mat:
    _check_same_field(A, B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    add = A.field.add
    return Mat(A.field, A.rows, A.cols, tuple(add(a, b) for a, b in zip(A.entries, B.entries)))


def mat_sub(A: Mat, B: Mat) -> Mat:
    return mat_add(A, mat_neg(B))


def mat_neg(A: Mat) -> Mat:
    neg = A.field.neg
    return Mat(A.field, A.rows, A.cols, tuple(neg(a) for a in A.entries))


def mat_scale(c, A: Mat) -> Mat:
    c = A.field.canon(c)
    mul = A.field.mul
    return Mat(A.field, A.rows, A.cols, tuple(mul(c, a) for a in A.entries))


def mat_mul(A: Mat, B: Mat) -> Mat:
    _check_same_field(A, B)
    if A.cols != B.rows:
        raise ValueError(f"inner dimension mismatch: {A.shape} * {B.shape}")
    f = A.field
    if f.is_prime_field:
        out = _kernel.matmul_mod(list(A.entries), A.rows, A.cols, list(B.entries), B.cols, f.p)
        return Mat(f, A.rows, B.cols, tuple(out))
    zero = f.zero()
    out = [zero] * (A.rows * B.cols)
    bc = B.cols
    for i in range(A.rows):
        ao = i * A.cols
        oo = i * bc
        for k in range(A.cols):
            aik = A.entries[ao + k]
            if aik == 0:
                continue
            bo = k * bc
            for j in range(bc):
                bkj = B.entries[bo + j]
                if bkj != 0:
                    out[oo + j] += aik * bkj
    return Mat(f, A.rows, B.cols, tuple(out))


def mat_block(grid: list) -> Mat:
    """Assemble a matrix from a grid (list of rows) of conforming blocks."""
    if not grid or not grid[0]:
        raise ValueError("empty block grid")
    field = grid[0][0].field
    row_heights = [row[0].rows for row in grid]
    col_widths = [blk.cols for blk in grid[0]]
    for i, row in enumerate(grid):
        if len(row) != len(col_widths):
            raise ValueError("ragged block grid")
        for j, blk in enumerate(row):
            if blk.field != field:
                raise ValueError("field mismatch in block grid")
            if blk.rows != row_heights[i] or blk.cols != col_widths[j]:
                raise ValueError(f"block ({i},{j}) has shape {blk.shape}")
    total_cols = sum(col_widths)
    flat = []
    for i, row in enumerate(grid):
        for r in range(row_heights[i]):
            for blk in row:
                flat.extend(blk.row(r))
    return Mat(field, sum(row_heights), total_cols, tuple(flat))


def mat_hstack(mats: list) -> Mat:
    return mat_block([list(mats)])


def mat_vstack(mats: list) -> Mat:
    return mat_block([[m] for m in mats])


def mat_direct_sum(A: Mat, B: Mat) -> Mat:
    _check_same_field(A, B)
    return mat_block([
        [A, mat_zeros(A.field, A.rows, B.cols)],
        [mat_zeros(A.field, B.rows, A.cols), B],
    ])


def _rref_fraction(A: Mat):
    # Fraction-free elimination on the augmented matrix [A | I]: clear the
    # denominators per row, do integer cross-multiplication row operations
    # with content reduction to keep entries small, and divide each pivot
    # row at the very end.  The reduced echelon form is unique, so this
    # matches entrywise what naive Fraction elimination would produce.
    rows, cols = A.rows, A.cols
    n_aug = cols + rows
    aug = []
    for i in range(rows):
        row = list(A.row(i))
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        irow = [int(x * den) for x in row] + [0] * rows
        irow[cols + i] = den
        aug.append(irow)
    pivots = []
    pr = 0
    for c in range(cols):
        if pr == rows:
            break
        r = pr
        while r < rows and aug[r][c] == 0:
            r += 1
        if r == rows:
            continue
        if r != pr:
            aug[pr], aug[r] = aug[r], aug[pr]
        pv = aug[pr][c]
        prow = aug[pr]
        for r2 in range(rows):
            if r2 == pr:
                continue
            f = aug[r2][c]
            if f == 0:
                continue
            row2 = aug[r2]
            g = 0
            for j in range(n_aug):
                v = pv * row2[j] - f * prow[j]
                row2[j] = v
                if v:
                    g = gcd(g, v)
            if g > 1:
                for j in range(n_aug):
                    row2[j] //= g
        pivots.append(c)
        pr += 1
    r_flat = []
    t_flat = []
    for i in range(rows):
        row = aug[i]
        pv = row[pivots[i]] if i < len(pivots) else 1
        r_flat.extend(Fraction(x, pv) for x in row[:cols])
        t_flat.extend(Fraction(x, pv) for x in row[cols:])
    R = Mat(A.field, rows, cols, tuple(r_flat))
    T = Mat(A.field, rows, rows, tuple(t_flat))
    return R, tuple(pivots), T


def mat_rref(A: Mat):
    """Reduced row echelon form.

    Returns (R, pivots, T) with R = T*A, T invertible, pivots strictly
    increasing, rank = len(pivots).  Pivot rule: first nonzero entry of
    each column scanning top to bottom, so the output is deterministic.
    """
    f = A.field
    if f.is_prime_field:
        flat_r, pivots, flat_t = _kernel.rref_mod(list(A.entries), A.rows, A.cols, f.p)
        R = Mat(f, A.rows, A.cols, tuple(flat_r))
        T = Mat(f, A.rows, A.rows, tuple(flat_t))
        return R, tuple(pivots), T
    return _rref_fraction(A)


def mat_rank(A: Mat) -> int:
    return len(mat_rref(A)[1])


def mat_kernel_basis(A: Mat) -> Mat:
    """Columns form a basis of the null space; width = cols - rank.

    Free columns are taken in increasing order, each contributing the
    vector with a 1 there and the back-substituted pivot entries.
    """
    R, pivots, _ = mat_rref(A)
    pivot_set = set(pivots)
    free = [c for c in range(A.cols) if c not in pivot_set]
    z, o = A.field.zero(), A.field.one()
    neg = A.field.neg
    cols = []
    for fc in free:
        v = [z] * A.cols
        v[fc] = o
        for k, pc in enumerate(pivots):
            v[pc] = neg(R[k, fc])
        cols.append(v)
    flat = tuple(cols[j][i] for i in range(A.cols) for j in range(len(free)))
    return Mat(A.field, A.cols, len(free), flat)


def mat_image_basis(A: Mat) -> Mat:
    """The pivot columns of A, a deterministic basis of the column space."""
    _, pivots, _ = mat_rref(A)
    flat = tuple(A[i, c] for i in range(A.rows) for c in pivots)
    return Mat(A.field, A.rows, len(pivots), flat)


def mat_solve(A: Mat, b: Mat):
    """A particular solution of A x = b (free variables set to 0), or None."""
    if b.rows != A.rows or b.cols != 1:
        raise ValueError(f"rhs must be {A.rows}x1, got {b.shape}")
    R, pivots, _ = mat_rref(mat_hstack([A, b]))
    if pivots and pivots[-1] == A.cols:
        return None
    z = A.field.zero()
    x = [z] * A.cols
    for k, pc in enumerate(pivots):
        x[pc] = R[k, A.cols]
    return mat_col(A.field, x)


def mat_inverse(A: Mat) -> Mat:
    if A.rows != A.cols:
        raise SingularMatrixError(f"cannot invert a {A.rows}x{A.cols} matrix")
    R, pivots, T = mat_rref(A)
    if len(pivots) != A.rows:
        raise SingularMatrixError(f"matrix of rank {len(pivots)} < {A.rows} is singular")
    # R = T*A is the identity here, so T is the inverse.
    return T
