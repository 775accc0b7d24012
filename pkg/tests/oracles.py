"""Independent reference computations used by the tests.

Nothing here imports the package: the eigenvalue oracle works from exact
integer characteristic polynomials and high-precision root finding.
"""

from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
import sympy
from scipy.optimize import linear_sum_assignment


def char_poly(a) -> tuple:
    """Exact coefficients of det(xI - A), leading 1 first (Faddeev-LeVerrier)."""
    n = len(a)
    a = [[Fraction(int(v)) for v in row] for row in a]
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        m = [
            [sum(a[i][t] * m[t][j] for t in range(n)) + (coeffs[-1] if i == j else 0) for j in range(n)]
            for i in range(n)
        ]
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(am[i][i] for i in range(n)) / k)
    assert all(c.denominator == 1 for c in coeffs)
    return tuple(int(c) for c in coeffs)


@lru_cache(maxsize=None)
def exact_roots(coeffs: tuple) -> tuple:
    """Distinct roots with multiplicities, as ((complex root, multiplicity), ...)."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(coeffs), x)
    out = []
    for factor, mult in sympy.sqf_list(poly)[1]:
        fc = [int(c) for c in factor.all_coeffs()]
        if len(fc) == 2:
            roots = [mpmath.mpf(-fc[1]) / fc[0]]
        else:
            with mpmath.workdps(50):
                roots = mpmath.polyroots(fc, maxsteps=200, extraprec=200)
        out.extend((complex(r), mult) for r in roots)
    return tuple(out)


def eigen_error(a, computed) -> float:
    """Largest discrepancy between computed eigenvalues and the exact ones.

    Each computed value is matched to an exact root copy; for a root of
    multiplicity k the mean of its k matched values is compared, because
    the individual values of a defective eigenvalue scatter like eps**(1/k)
    while their mean stays well conditioned.
    """
    reference = []
    for root, mult in exact_roots(char_poly(a)):
        reference.extend([(root, mult)] * mult)
    ref = np.array([r for r, _ in reference])
    computed = np.asarray(computed, dtype=complex)
    if ref.size != computed.size:
        return float("inf")
    cost = np.abs(computed[:, None] - ref[None, :])
    rows, cols = linear_sum_assignment(cost)
    err = 0.0
    groups = {}
    for r, c in zip(rows, cols):
        groups.setdefault(reference[c][0], []).append(computed[r])
    for root, vals in groups.items():
        err = max(err, abs(np.mean(vals) - root))
    return err


def exact_det(a) -> int:
    return int(sympy.Matrix(np.asarray(a, dtype=int).tolist()).det())
