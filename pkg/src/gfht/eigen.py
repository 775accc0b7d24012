"""Eigenvalues of real nonsymmetric matrices.

Householder reduction to upper Hessenberg form followed by the Francis
implicit double-shift QR iteration (eigenvalues only, so each sweep touches
just the active block). Complex eigenvalues come out as exact conjugate
pairs.
"""

from __future__ import annotations

import math

import numpy as np


class ConvergenceError(RuntimeError):
    """QR iteration exhausted its budget."""


def hessenberg(a) -> np.ndarray:
    """Orthogonally similar upper Hessenberg matrix (Householder reflections)."""
    h = np.array(a, dtype=np.float64)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0])
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        h[k + 1 :, k:] -= 2.0 * np.outer(v, v @ h[k + 1 :, k:])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v)
        h[k + 2 :, k] = 0.0
    return h


def hessenberg_eigenvalues(h, tol: float = 1e-10, max_iter: int | None = None) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    A subdiagonal entry is treated as zero once it is below ``tol`` times the
    magnitude of its two diagonal neighbours, or below machine epsilon times
    the matrix norm (needed when those neighbours are themselves
    negligible, as for rank-deficient input). Exceptional shifts are applied
    after 10 and 20 stagnant iterations on one eigenvalue; more than
    ``max_iter`` iterations in total (default 40 N) raise
    :class:`ConvergenceError`.
    """
    a = np.array(h, dtype=np.float64)
    n = a.shape[0]
    if max_iter is None:
        max_iter = 40 * max(n, 1)
    wr = np.zeros(n)
    wi = np.zeros(n)
    anorm = float(np.abs(np.triu(a, -1)).sum())
    floor = np.finfo(np.float64).eps * anorm
    total = 0
    shift_acc = 0.0
    nn = n - 1
    while nn >= 0:
        its = 0
        while True:
            # find the lowest negligible subdiagonal entry above nn
            l = nn
            while l >= 1:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) <= max(tol * s, floor):
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + shift_acc
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                # trailing 2x2 block
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += shift_acc
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                nn -= 2
                break
            if total >= max_iter:
                raise ConvergenceError(f"no convergence after {total} QR iterations (n={n})")
            if its in (10, 20):
                shift_acc += x
                idx = np.arange(nn + 1)
                a[idx, idx] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            total += 1
            # look for two consecutive small subdiagonal entries
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            # chase the bulge from row m down to nn
            for k in range(m, nn):
                last = k == nn - 1
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = 0.0 if last else a[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k, k - 1] = -a[k, k - 1]
                else:
                    a[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                if last:
                    rows = a[k : k + 2, k : nn + 1]
                    pv = rows[0] + q * rows[1]
                    rows[1] -= pv * y
                    rows[0] -= pv * x
                    top = min(nn, k + 3)
                    cols = a[l : top + 1, k : k + 2]
                    pc = x * cols[:, 0] + y * cols[:, 1]
                    cols[:, 1] -= pc * q
                    cols[:, 0] -= pc
                else:
                    rows = a[k : k + 3, k : nn + 1]
                    pv = rows[0] + q * rows[1] + r * rows[2]
                    rows[2] -= pv * z
                    rows[1] -= pv * y
                    rows[0] -= pv * x
                    top = min(nn, k + 3)
                    cols = a[l : top + 1, k : k + 3]
                    pc = x * cols[:, 0] + y * cols[:, 1] + z * cols[:, 2]
                    cols[:, 2] -= pc * r
                    cols[:, 1] -= pc * q
                    cols[:, 0] -= pc
    return wr + 1j * wi


def eigvals(a, tol: float = 1e-10, max_iter: int | None = None) -> np.ndarray:
    """All eigenvalues of a real square matrix, unordered."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"matrix must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("matrix must be at least 1x1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return hessenberg_eigenvalues(hessenberg(arr), tol=tol, max_iter=max_iter)
