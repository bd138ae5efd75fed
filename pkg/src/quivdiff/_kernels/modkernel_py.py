"""Pure-Python mod-p kernels, the reference semantics for the compiled twin.

All matrices are flat row-major lists of ints already reduced mod p.
The pivot rule is fixed: walk the columns left to right and take the first
nonzero entry scanning top to bottom, so outputs are deterministic.
"""

BACKEND = "python"


def rref_mod(entries, rows, cols, p):
    """Reduced row echelon form over F_p with a transform witness.

    Returns (r_entries, pivots, t_entries) where R = T * A mod p and T is
    invertible (the accumulated row operations applied to the identity).
    """
    a = [entries[i * cols:(i + 1) * cols] for i in range(rows)]
    t = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    pivots = []
    pr = 0
    for c in range(cols):
        if pr == rows:
            break
        r = pr
        while r < rows and a[r][c] == 0:
            r += 1
        if r == rows:
            continue
        if r != pr:
            a[pr], a[r] = a[r], a[pr]
            t[pr], t[r] = t[r], t[pr]
        pv = a[pr][c]
        if pv != 1:
            inv = pow(pv, p - 2, p)
            a[pr] = [x * inv % p for x in a[pr]]
            t[pr] = [x * inv % p for x in t[pr]]
        arow = a[pr]
        trow = t[pr]
        for r2 in range(rows):
            if r2 == pr:
                continue
            f = a[r2][c]
            if f == 0:
                continue
            a2 = a[r2]
            t2 = t[r2]
            for j in range(c, cols):
                a2[j] = (a2[j] - f * arow[j]) % p
            for j in range(rows):
                t2[j] = (t2[j] - f * trow[j]) % p
        pivots.append(c)
        pr += 1
    flat_a = [x for row in a for x in row]
    flat_t = [x for row in t for x in row]
    return flat_a, pivots, flat_t


def matmul_mod(a, am, an, b, bn, p):
    """Product of an am x an and an an x bn matrix over F_p (flat lists)."""
    out = [0] * (am * bn)
    for i in range(am):
        ao = i * an
        oo = i * bn
        for k in range(an):
            aik = a[ao + k]
            if aik == 0:
                continue
            bo = k * bn
            for j in range(bn):
                out[oo + j] = (out[oo + j] + aik * b[bo + j]) % p
    return out
