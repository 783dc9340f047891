# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; see motzeta._pykernels for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


def system_histogram(add_tab, mul_tab, long q, long nvars, exps, coefs, owner, kinds):
    cdef int64_t[:, ::1] A = np.ascontiguousarray(add_tab, dtype=np.int64)
    cdef int64_t[:, ::1] Mt = np.ascontiguousarray(mul_tab, dtype=np.int64)
    cdef int64_t[:, ::1] E = np.ascontiguousarray(np.asarray(exps, dtype=np.int64).reshape(-1, nvars))
    cdef int64_t[::1] C = np.ascontiguousarray(coefs, dtype=np.int64)
    cdef int64_t[::1] O = np.ascontiguousarray(owner, dtype=np.int64)
    cdef int64_t[::1] K = np.ascontiguousarray(kinds, dtype=np.int64)
    cdef long T = C.shape[0]
    cdef long npoly = K.shape[0]
    cdef long maxdeg = int(np.asarray(exps).max()) if T else 0
    cdef int64_t[:, ::1] P = np.zeros((q, maxdeg + 1), dtype=np.int64)
    cdef long x, e, i, t, j
    for x in range(q):
        P[x, 0] = 1
        for e in range(1, maxdeg + 1):
            P[x, e] = Mt[P[x, e - 1], x]
    cdef int64_t[::1] hist = np.zeros(q, dtype=np.int64)
    cdef int64_t[::1] vals = np.zeros(npoly, dtype=np.int64)
    cdef int64_t[::1] pt = np.zeros(nvars, dtype=np.int64)
    cdef long long total = 1
    for i in range(nvars):
        total *= q
    cdef long long idx
    cdef int64_t m, value
    cdef bint ok
    for idx in range(total):
        # odometer update of pt
        if idx:
            i = 0
            while True:
                pt[i] += 1
                if pt[i] < q:
                    break
                pt[i] = 0
                i += 1
        for j in range(npoly):
            vals[j] = 0
        for t in range(T):
            m = C[t]
            for i in range(nvars):
                e = E[t, i]
                if e:
                    m = Mt[m, P[pt[i], e]]
            j = O[t]
            vals[j] = A[vals[j], m]
        ok = True
        value = 0
        for j in range(npoly):
            if K[j] == 0:
                if vals[j] != 0:
                    ok = False
                    break
            elif K[j] == 1:
                if vals[j] == 0:
                    ok = False
                    break
            else:
                value = vals[j]
        if ok:
            hist[value] += 1
    return np.asarray(hist)


def fourier_accumulate(phi, xdig, ydig, bil, add_tab, mul_tab, trace, long p):
    cdef int64_t[:, ::1] F = np.ascontiguousarray(phi, dtype=np.int64)
    cdef int64_t[:, ::1] X = np.ascontiguousarray(xdig, dtype=np.int64)
    cdef int64_t[:, ::1] Y = np.ascontiguousarray(ydig, dtype=np.int64)
    cdef int64_t[:, ::1] B = np.ascontiguousarray(bil, dtype=np.int64)
    cdef int64_t[:, ::1] A = np.ascontiguousarray(add_tab, dtype=np.int64)
    cdef int64_t[:, ::1] Mt = np.ascontiguousarray(mul_tab, dtype=np.int64)
    cdef int64_t[::1] Tr = np.ascontiguousarray(trace, dtype=np.int64)
    cdef long nx = X.shape[0], ny = Y.shape[0]
    cdef long da = B.shape[0], db = B.shape[1]
    cdef int64_t[:, ::1] out = np.zeros((ny, p), dtype=np.int64)
    # precompute z[x, b] = sum_a bil[a, b] x_a so that r = sum_b z[x, b] y_b
    cdef int64_t[:, ::1] Z = np.zeros((nx, db), dtype=np.int64)
    cdef long x, y, a, b, k, s
    cdef int64_t r
    for x in range(nx):
        for b in range(db):
            r = 0
            for a in range(da):
                if B[a, b]:
                    r = A[r, Mt[B[a, b], X[x, a]]]
            Z[x, b] = r
    for y in range(ny):
        for x in range(nx):
            r = 0
            for b in range(db):
                if Y[y, b]:
                    r = A[r, Mt[Z[x, b], Y[y, b]]]
            s = Tr[r]
            for k in range(p):
                if F[x, k]:
                    out[y, (k + s) % p] += F[x, k]
    return np.asarray(out)


cdef long long _cover(long[:, ::1] masks, long[::1] counts, long i, long n, long acc, long full):
    cdef long long c = 0
    cdef long j
    if i == n:
        return 1 if acc == full else 0
    for j in range(counts[i]):
        c += _cover(masks, counts, i + 1, n, acc | masks[i, j], full)
    return c


def howe_cover_count(sizes, long L):
    from itertools import combinations
    cdef long n = len(sizes)
    lists = []
    for a in sizes:
        ms = []
        for comb in combinations(range(L), a):
            m = 0
            for c in comb:
                m |= 1 << c
            ms.append(m)
        lists.append(ms)
    width = max([len(l) for l in lists] + [1])
    arr = np.zeros((n, width), dtype=np.int_)
    cnt = np.zeros(n, dtype=np.int_)
    for i, l in enumerate(lists):
        cnt[i] = len(l)
        arr[i, :len(l)] = l
    cdef long[:, ::1] masks = arr
    cdef long[::1] counts = cnt
    return int(_cover(masks, counts, 0, n, 0, (1 << L) - 1))


cdef bint _coprime(long* a, long da, long* b, long db, long p, long* inv, long* wa, long* wb):
    # gcd over F_p of polynomials of degrees da, db (arrays low -> high); -1 means zero
    cdef long i, s, c
    cdef long la = da, lb = db
    cdef long* u = wa
    cdef long* v = wb
    cdef long* tmp
    for i in range(da + 1):
        u[i] = a[i]
    for i in range(db + 1):
        v[i] = b[i]
    while lb >= 0:
        while la >= lb:
            c = (u[la] * inv[v[lb]]) % p
            s = la - lb
            for i in range(lb + 1):
                u[s + i] = (u[s + i] - c * v[i]) % p
                if u[s + i] < 0:
                    u[s + i] += p
            while la >= 0 and u[la] == 0:
                la -= 1
        tmp = u
        u = v
        v = tmp
        i = la
        la = lb
        lb = i
    return la == 0


cdef long _ipow(long b, long e):
    cdef long r = 1
    while e > 0:
        r *= b
        e -= 1
    return r


def coprime_height_counts(long p, long d):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(d + 1, dtype=np.int64)
    cdef long invs[64]
    cdef long wa[64]
    cdef long wb[64]
    cdef long av[64]
    cdef long bv[64]
    cdef long i, da, db, h, na, nb, ia, ib, x
    for i in range(1, p):
        invs[i] = 1
        for h in range(p - 2):
            invs[i] = (invs[i] * i) % p
    for db in range(0, d + 1):
        nb = _ipow(p, db)
        for ib in range(nb):
            x = ib
            for i in range(db):
                bv[i] = x % p
                x //= p
            bv[db] = 1
            # a = 0
            if db == 0:
                counts[0] += 1
            for da in range(0, d + 1):
                h = da if da > db else db
                na = (p - 1) * _ipow(p, da)
                for ia in range(na):
                    x = ia
                    for i in range(da):
                        av[i] = x % p
                        x //= p
                    av[da] = x + 1
                    if _coprime(av, da, bv, db, p, invs, wa, wb):
                        counts[h] += 1
    return counts
