"""Reference implementations of the enumeration kernels (numpy / pure Python).

Signatures match the compiled module ``motzeta._kernels`` exactly.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np


def system_histogram(add_tab, mul_tab, q, nvars, exps, coefs, owner, kinds):
    """Histogram of the value polynomial over points of a system.

    Polynomials are given monomial-wise: row t of ``exps`` is the exponent
    vector of a monomial with (encoded) coefficient ``coefs[t]`` belonging to
    polynomial ``owner[t]``.  ``kinds[j]`` is 0 for an equation (must vanish),
    1 for an open condition (must not vanish) and 2 for the value polynomial
    (at most one).  Returns an int64 array h with h[c] = #{x : value(x) = c}.
    """
    add_tab = np.asarray(add_tab)
    mul_tab = np.asarray(mul_tab)
    exps = np.asarray(exps, dtype=np.int64).reshape(-1, nvars)
    npoly = len(kinds)
    maxdeg = int(exps.max()) if exps.size else 0
    # powtab[x, e] = x^e
    powtab = np.zeros((q, maxdeg + 1), dtype=np.int64)
    powtab[:, 0] = 1
    for e in range(1, maxdeg + 1):
        powtab[:, e] = mul_tab[powtab[:, e - 1], np.arange(q)]
    hist = np.zeros(q, dtype=np.int64)
    total = q ** nvars
    chunk = 1 << 16
    has_value = any(k == 2 for k in kinds)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        coords = []
        rem = idx.copy()
        for _ in range(nvars):
            coords.append(rem % q)
            rem //= q
        vals = np.zeros((npoly, len(idx)), dtype=np.int64)
        for t in range(len(coefs)):
            m = np.full(len(idx), coefs[t], dtype=np.int64)
            for i in range(nvars):
                e = exps[t, i]
                if e:
                    m = mul_tab[m, powtab[coords[i], e]]
            j = owner[t]
            vals[j] = add_tab[vals[j], m]
        keep = np.ones(len(idx), dtype=bool)
        value = np.zeros(len(idx), dtype=np.int64)
        for j, k in enumerate(kinds):
            if k == 0:
                keep &= vals[j] == 0
            elif k == 1:
                keep &= vals[j] != 0
            else:
                value = vals[j]
        if not has_value:
            value = np.zeros(len(idx), dtype=np.int64)
        hist += np.bincount(value[keep], minlength=q)
    return hist


def fourier_accumulate(phi, xdig, ydig, bil, add_tab, mul_tab, trace, p):
    """out[y, (k + Tr r(x, y)) mod p] += phi[x, k] with r(x, y) = sum bil[a, b] x_a y_b."""
    phi = np.asarray(phi, dtype=object)
    xdig = np.asarray(xdig, dtype=np.int64)
    ydig = np.asarray(ydig, dtype=np.int64)
    bil = np.asarray(bil, dtype=np.int64)
    nx, ny = len(xdig), len(ydig)
    # r(x, y) for all pairs
    r = np.zeros((nx, ny), dtype=np.int64)
    for a in range(bil.shape[0]):
        for b in range(bil.shape[1]):
            c = bil[a, b]
            if c == 0:
                continue
            t = mul_tab[mul_tab[c, xdig[:, a]][:, None], ydig[None, :, b]]
            r = add_tab[r, t]
    shift = trace[r]  # (nx, ny)
    out = np.zeros((ny, p), dtype=object)
    out[:] = 0
    for k in range(p):
        col = phi[:, k]
        nz = np.nonzero(col)[0]
        for x in nz:
            v = col[x]
            s = (shift[x] + k) % p
            for kk in range(p):
                sel = s == kk
                if sel.any():
                    out[sel, kk] += v
    return out


def howe_cover_count(sizes, L):
    """Number of tuples (S_1..S_n) of subsets of range(L), |S_i| = sizes[i], covering range(L)."""
    full = (1 << L) - 1
    masks = []
    for a in sizes:
        ms = []
        for comb in combinations(range(L), a):
            m = 0
            for c in comb:
                m |= 1 << c
            ms.append(m)
        masks.append(ms)
    count = 0

    def rec(i, acc):
        nonlocal count
        if i == len(masks):
            if acc == full:
                count += 1
            return
        for m in masks[i]:
            rec(i + 1, acc | m)

    rec(0, 0)
    return count


def _pgcd_is_one(a, b, p):
    # a, b: coefficient lists low -> high, trimmed
    while b:
        inv = pow(b[-1], -1, p)
        a = list(a)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            s = len(a) - len(b)
            for i, bi in enumerate(b):
                a[s + i] = (a[s + i] - c * bi) % p
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) == 1


def coprime_height_counts(p, d):
    """counts[h] = #{(a, b) : b monic, gcd(a, b) = 1, max(deg a, deg b) = h} for h <= d, over F_p.

    deg 0 is taken as -infinity, so a = 0 pairs only with b = 1.
    """
    counts = np.zeros(d + 1, dtype=np.int64)
    polys_by_deg = [[]]
    # all polynomials of degree exactly e (leading coefficient nonzero)
    from itertools import product

    allp = {-1: [[]]}
    for e in range(0, d + 1):
        lst = []
        for lead in range(1, p):
            for tail in product(range(p), repeat=e):
                lst.append(list(reversed(tail)) + [lead] if e else [lead])
        allp[e] = lst
    del polys_by_deg
    for db in range(0, d + 1):
        monics = [f for f in allp[db] if f[-1] == 1]
        for da in range(-1, d + 1):
            h = max(da, db, 0)
            for b in monics:
                for a in allp[da]:
                    if not a:
                        if len(b) == 1:
                            counts[h] += 1
                        continue
                    if _pgcd_is_one(a, b, p):
                        counts[h] += 1
    return counts
