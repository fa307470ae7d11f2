# cython: language_level=3
# cython: overflowcheck=True
# cython: boundscheck=False
# cython: wraparound=False
"""Smith normal form kernel on 64-bit integers.

Mirrors the algorithm in ``_snf_py`` on C ``long long`` arithmetic.  Every
add/multiply is overflow-checked by Cython; on overflow the caller catches
``OverflowError`` and retries with the arbitrary-precision Python kernel.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef inline void _ext_gcd(i64 a, i64 b, i64 *g, i64 *x, i64 *y):
    cdef i64 x0 = 1, x1 = 0, y0 = 0, y1 = 1
    cdef i64 q, r, t
    while b != 0:
        q = a // b
        r = a - q * b
        a = b
        b = r
        t = x0 - q * x1
        x0 = x1
        x1 = t
        t = y0 - q * y1
        y0 = y1
        y1 = t
    if a < 0:
        a = -a
        x0 = -x0
        y0 = -y0
    g[0] = a
    x[0] = x0
    y[0] = y0


cdef inline void _row_combine(i64 *m, Py_ssize_t ncols, Py_ssize_t r1, Py_ssize_t r2,
                              i64 a, i64 b, i64 c, i64 d) except *:
    cdef Py_ssize_t j
    cdef i64 u, v
    for j in range(ncols):
        u = m[r1 * ncols + j]
        v = m[r2 * ncols + j]
        m[r1 * ncols + j] = a * u + b * v
        m[r2 * ncols + j] = c * u + d * v


cdef inline void _col_combine(i64 *m, Py_ssize_t nrows, Py_ssize_t ncols,
                              Py_ssize_t c1, Py_ssize_t c2,
                              i64 a, i64 b, i64 c, i64 d) except *:
    cdef Py_ssize_t i
    cdef i64 u, v
    for i in range(nrows):
        u = m[i * ncols + c1]
        v = m[i * ncols + c2]
        m[i * ncols + c1] = a * u + b * v
        m[i * ncols + c2] = c * u + d * v


cdef inline void _negate_row(i64 *m, Py_ssize_t ncols, Py_ssize_t r) except *:
    cdef Py_ssize_t j
    for j in range(ncols):
        m[r * ncols + j] = -m[r * ncols + j]


def smith_normal_form(rows, Py_ssize_t nrows, Py_ssize_t ncols):
    """(U, D, V) with U*A*V = D; raises OverflowError if int64 is exceeded."""
    cdef i64 *D = NULL
    cdef i64 *U = NULL
    cdef i64 *V = NULL
    cdef Py_ssize_t i, j, t, pi, pj, limit, rank
    cdef i64 a, b, g, x, y, q, best
    cdef bint have_piv, dirty, changed
    cdef object row

    D = <i64 *> malloc(nrows * ncols * sizeof(i64))
    U = <i64 *> malloc(nrows * nrows * sizeof(i64))
    V = <i64 *> malloc(ncols * ncols * sizeof(i64))
    if (nrows and ncols and D == NULL) or (nrows and U == NULL) or (ncols and V == NULL):
        free(D); free(U); free(V)
        raise MemoryError()
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                D[i * ncols + j] = row[j]  # raises OverflowError if too large
        for i in range(nrows):
            for j in range(nrows):
                U[i * nrows + j] = 1 if i == j else 0
        for i in range(ncols):
            for j in range(ncols):
                V[i * ncols + j] = 1 if i == j else 0

        limit = nrows if nrows < ncols else ncols
        t = 0
        while t < limit:
            have_piv = False
            best = 0
            pi = pj = 0
            for i in range(t, nrows):
                for j in range(t, ncols):
                    a = D[i * ncols + j]
                    if a != 0:
                        if a < 0:
                            a = -a
                        if (not have_piv) or a < best:
                            have_piv = True
                            best = a
                            pi = i
                            pj = j
            if not have_piv:
                break
            if pi != t:
                for j in range(ncols):
                    a = D[t * ncols + j]; D[t * ncols + j] = D[pi * ncols + j]; D[pi * ncols + j] = a
                for j in range(nrows):
                    a = U[t * nrows + j]; U[t * nrows + j] = U[pi * nrows + j]; U[pi * nrows + j] = a
            if pj != t:
                for i in range(nrows):
                    a = D[i * ncols + t]; D[i * ncols + t] = D[i * ncols + pj]; D[i * ncols + pj] = a
                for i in range(ncols):
                    a = V[i * ncols + t]; V[i * ncols + t] = V[i * ncols + pj]; V[i * ncols + pj] = a

            while True:
                for i in range(t + 1, nrows):
                    b = D[i * ncols + t]
                    if b != 0:
                        a = D[t * ncols + t]
                        if b % a == 0:
                            q = b // a
                            _row_combine(D, ncols, t, i, 1, 0, -q, 1)
                            _row_combine(U, nrows, t, i, 1, 0, -q, 1)
                        else:
                            _ext_gcd(a, b, &g, &x, &y)
                            _row_combine(D, ncols, t, i, x, y, -(b // g), a // g)
                            _row_combine(U, nrows, t, i, x, y, -(b // g), a // g)
                for j in range(t + 1, ncols):
                    b = D[t * ncols + j]
                    if b != 0:
                        a = D[t * ncols + t]
                        if b % a == 0:
                            q = b // a
                            _col_combine(D, nrows, ncols, t, j, 1, 0, -q, 1)
                            _col_combine(V, ncols, ncols, t, j, 1, 0, -q, 1)
                        else:
                            _ext_gcd(a, b, &g, &x, &y)
                            _col_combine(D, nrows, ncols, t, j, x, y, -(b // g), a // g)
                            _col_combine(V, ncols, ncols, t, j, x, y, -(b // g), a // g)
                dirty = False
                for i in range(t + 1, nrows):
                    if D[i * ncols + t] != 0:
                        dirty = True
                        break
                if not dirty:
                    for j in range(t + 1, ncols):
                        if D[t * ncols + j] != 0:
                            dirty = True
                            break
                if not dirty:
                    break
            t += 1

        rank = t
        for i in range(rank):
            if D[i * ncols + i] < 0:
                _negate_row(D, ncols, i)
                _negate_row(U, nrows, i)

        changed = True
        while changed:
            changed = False
            for i in range(rank - 1):
                a = D[i * ncols + i]
                b = D[(i + 1) * ncols + (i + 1)]
                if b % a != 0:
                    changed = True
                    _col_combine(D, nrows, ncols, i, i + 1, 1, 1, 0, 1)
                    _col_combine(V, ncols, ncols, i, i + 1, 1, 1, 0, 1)
                    _ext_gcd(a, b, &g, &x, &y)
                    _row_combine(D, ncols, i, i + 1, x, y, -(b // g), a // g)
                    _row_combine(U, nrows, i, i + 1, x, y, -(b // g), a // g)
                    q = D[i * ncols + (i + 1)] // D[i * ncols + i]
                    _col_combine(D, nrows, ncols, i, i + 1, 1, 0, -q, 1)
                    _col_combine(V, ncols, ncols, i, i + 1, 1, 0, -q, 1)
                    if D[i * ncols + i] < 0:
                        _negate_row(D, ncols, i)
                        _negate_row(U, nrows, i)
                    if D[(i + 1) * ncols + (i + 1)] < 0:
                        _negate_row(D, ncols, i + 1)
                        _negate_row(U, nrows, i + 1)

        U_out = [[U[i * nrows + j] for j in range(nrows)] for i in range(nrows)]
        D_out = [[D[i * ncols + j] for j in range(ncols)] for i in range(nrows)]
        V_out = [[V[i * ncols + j] for j in range(ncols)] for i in range(ncols)]
        return U_out, D_out, V_out
    finally:
        free(D)
        free(U)
        free(V)
