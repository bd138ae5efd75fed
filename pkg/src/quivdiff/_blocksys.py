"""Builder for block linear systems whose unknowns are matrices.

Used for the representation intertwining system and for the brute-force
differential-map and null-homotopy systems.  Unknown blocks X and equation
blocks E are declared with shapes; terms L*X and X*R accumulate into the
coefficient matrix, flattening every block row-major.
"""

from __future__ import annotations

from .exactla import Mat, ScalarField


class BlockSystem:
    def __init__(self, field: ScalarField):
        self.field = field
        self._var_shapes = []
        self._var_offsets = []
        self._eq_shapes = []
        self._eq_offsets = []
        self._n_vars = 0
        self._n_eqs = 0
        self._terms = []  # (kind, eq_id, var_id, coefficient Mat)

    def add_var(self, rows: int, cols: int) -> int:
        self._var_shapes.append((rows, cols))
        self._var_offsets.append(self._n_vars)
        self._n_vars += rows * cols
        return len(self._var_shapes) - 1

    def add_eq(self, rows: int, cols: int) -> int:
        self._eq_shapes.append((rows, cols))
        self._eq_offsets.append(self._n_eqs)
        self._n_eqs += rows * cols
        return len(self._eq_shapes) - 1

    @property
    def n_vars(self) -> int:
        return self._n_vars

    @property
    def n_eqs(self) -> int:
        return self._n_eqs

    def add_left(self, eq: int, var: int, L: Mat):
        """Contribute L * X to the equation block."""
        vr, vc = self._var_shapes[var]
        er, ec = self._eq_shapes[eq]
        if L.cols != vr or L.rows != er or vc != ec:
            raise ValueError(f"left term shape mismatch: L{L.shape} X({vr},{vc}) -> E({er},{ec})")
        self._terms.append(("l", eq, var, L))

    def add_right(self, eq: int, var: int, R: Mat):
        """Contribute X * R to the equation block."""
        vr, vc = self._var_shapes[var]
        er, ec = self._eq_shapes[eq]
        if R.rows != vc or vr != er or R.cols != ec:
            raise ValueError(f"right term shape mismatch: X({vr},{vc}) R{R.shape} -> E({er},{ec})")
        self._terms.append(("r", eq, var, R))

    def to_mat(self) -> Mat:
        f = self.field
        zero = f.zero()
        add = f.add
        ne, nv = self._n_eqs, self._n_vars
        buf = [zero] * (ne * nv)
        for kind, eq, var, C in self._terms:
            eo = self._eq_offsets[eq]
            vo = self._var_offsets[var]
            er, ec = self._eq_shapes[eq]
            vr, vc = self._var_shapes[var]
            if kind == "l":
                # (L*X)[r,c] = sum_k L[r,k] X[k,c]
                for r in range(er):
                    for k in range(vr):
                        lrk = C[r, k]
                        if lrk == 0:
                            continue
                        for c in range(ec):
                            pos = (eo + r * ec + c) * nv + vo + k * vc + c
                            buf[pos] = add(buf[pos], lrk)
            else:
                # (X*R)[r,c] = sum_k X[r,k] R[k,c]
                for r in range(vr):
                    for k in range(vc):
                        for c in range(ec):
                            rkc = C[k, c]
                            if rkc == 0:
                                continue
                            pos = (eo + r * ec + c) * nv + vo + r * vc + k
                            buf[pos] = add(buf[pos], rkc)
        return Mat(f, ne, nv, tuple(buf))

    def unflatten(self, vec, var: int) -> Mat:
        """Extract the block of a flat solution vector belonging to one unknown."""
        vr, vc = self._var_shapes[var]
        off = self._var_offsets[var]
        return Mat(self.field, vr, vc, tuple(vec[off:off + vr * vc]))
