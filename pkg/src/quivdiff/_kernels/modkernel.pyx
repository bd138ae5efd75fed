# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p kernels; semantics identical to modkernel_py.

Entries are int64; p < 2**31 keeps every intermediate product inside
int64 range.
"""

from libc.stdlib cimport free, malloc

BACKEND = "c"


cdef long long _modinv(long long a, long long p):
    # extended Euclid; a nonzero mod p, p prime
    cdef long long old_r = a, r = p
    cdef long long old_s = 1, s = 0
    cdef long long q, tmp
    while r != 0:
        q = old_r / r
        tmp = old_r - q * r
        old_r = r
        r = tmp
        tmp = old_s - q * s
        old_s = s
        s = tmp
    old_s %= p
    if old_s < 0:
        old_s += p
    return old_s


def rref_mod(entries, int rows, int cols, long long p):
    """Reduced row echelon form over F_p; returns (r_entries, pivots, t_entries)."""
    cdef int n = rows * cols
    cdef long long *a = <long long *> malloc(n * sizeof(long long) if n else sizeof(long long))
    cdef long long *t = <long long *> malloc((rows * rows if rows else 1) * sizeof(long long))
    if a == NULL or t == NULL:
        free(a)
        free(t)
        raise MemoryError()
    cdef int i, j, c, r, r2, pr
    cdef long long pv, inv, f, x
    for i in range(n):
        a[i] = entries[i]
    for i in range(rows * rows):
        t[i] = 0
    for i in range(rows):
        t[i * rows + i] = 1
    pivots = []
    pr = 0
    for c in range(cols):
        if pr == rows:
            break
        r = pr
        while r < rows and a[r * cols + c] == 0:
            r += 1
        if r == rows:
            continue
        if r != pr:
            for j in range(cols):
                x = a[pr * cols + j]
                a[pr * cols + j] = a[r * cols + j]
                a[r * cols + j] = x
            for j in range(rows):
                x = t[pr * rows + j]
                t[pr * rows + j] = t[r * rows + j]
                t[r * rows + j] = x
        pv = a[pr * cols + c]
        if pv != 1:
            inv = _modinv(pv, p)
            for j in range(cols):
                a[pr * cols + j] = a[pr * cols + j] * inv % p
            for j in range(rows):
                t[pr * rows + j] = t[pr * rows + j] * inv % p
        for r2 in range(rows):
            if r2 == pr:
                continue
            f = a[r2 * cols + c]
            if f == 0:
                continue
            for j in range(c, cols):
                x = (a[r2 * cols + j] - f * a[pr * cols + j]) % p
                if x < 0:
                    x += p
                a[r2 * cols + j] = x
            for j in range(rows):
                x = (t[r2 * rows + j] - f * t[pr * rows + j]) % p
                if x < 0:
                    x += p
                t[r2 * rows + j] = x
        pivots.append(c)
        pr += 1
    flat_a = [a[i] for i in range(n)]
    flat_t = [t[i] for i in range(rows * rows)]
    free(a)
    free(t)
    return flat_a, pivots, flat_t


def matmul_mod(a_list, int am, int an, b_list, int bn, long long p):
    """Product of an am x an and an an x bn matrix over F_p (flat lists)."""
    cdef int na = am * an, nb = an * bn, no = am * bn
    cdef long long *a = <long long *> malloc((na if na else 1) * sizeof(long long))
    cdef long long *b = <long long *> malloc((nb if nb else 1) * sizeof(long long))
    cdef long long *o = <long long *> malloc((no if no else 1) * sizeof(long long))
    if a == NULL or b == NULL or o == NULL:
        free(a)
        free(b)
        free(o)
        raise MemoryError()
    cdef int i, j, k
    cdef long long aik
    for i in range(na):
        a[i] = a_list[i]
    for i in range(nb):
        b[i] = b_list[i]
    for i in range(no):
        o[i] = 0
    for i in range(am):
        for k in range(an):
            aik = a[i * an + k]
            if aik == 0:
                continue
            for j in range(bn):
                o[i * bn + j] = (o[i * bn + j] + aik * b[k * bn + j]) % p
    out = [o[i] for i in range(no)]
    free(a)
    free(b)
    free(o)
    return out
