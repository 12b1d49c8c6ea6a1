"""NumPy implementations of the entrywise kernels.

Every function takes C-contiguous float64 arrays and mirrors the compiled
versions in ``_kernels.pyx`` up to floating-point summation order.
Zero entries follow the conventions ``0 ln 0 = 0`` and ``0**a = 0``.
"""
import numpy as np


def row_entropies(O):
    u = O * O
    out = np.zeros_like(u)
    nz = u > 0
    out[nz] = -u[nz] * np.log(u[nz])
    return out.sum(axis=1)


def entropy_gradient(O):
    u = O * O
    out = np.zeros_like(O)
    nz = u > 0
    out[nz] = -2.0 * O[nz] * (1.0 + np.log(u[nz]))
    return out


def power_sum(O, a):
    u = O * O
    nz = u > 0
    return float(np.sum(u[nz] ** a))


def power_gradient(O, a):
    # d/dx (x^2)^a = 2a x |x|^(2a-2); set to 0 at x = 0 (the one-sided limit for a > 1/2)
    u = O * O
    out = np.zeros_like(O)
    nz = u > 0
    out[nz] = 2.0 * a * O[nz] * u[nz] ** (a - 1.0)
    return out


def objective_gain(old, new, a):
    """Accurate ``f(new) - f(old)`` for nearby matrices.

    ``f`` is the Shannon sum ``-sum u ln u`` for ``a == 1`` and
    ``(sum u**a - n) / (1 - a)`` otherwise, with ``u`` the squared entries.
    Each entry's change is formed from ``new - old`` directly so the result
    keeps relative accuracy when the two values agree to many digits.
    """
    u = old * old
    v = new * new
    dv = (new - old) * (new + old)
    # log1p forms only for nearby values; for |dv| >= u/2 the plain
    # difference is accurate and log1p(dv/u) near -1 is not
    near = (u > 0) & (np.abs(dv) < 0.5 * u)
    far = ~near
    terms = np.zeros_like(u)
    un, dn = u[near], dv[near]
    if a == 1.0:
        # v ln v - u ln u = dv ln v + u ln(v/u)
        terms[near] = dn * np.log(v[near]) + un * np.log1p(dn / un)
        terms[far] = _xlogx(v[far]) - _xlogx(u[far])
        return float(-terms.sum())
    terms[near] = un ** a * np.expm1(a * np.log1p(dn / un))
    terms[far] = _pow0(v[far], a) - _pow0(u[far], a)
    return float(terms.sum() / (1.0 - a))


def _xlogx(x):
    out = np.zeros_like(x)
    nz = x > 0
    out[nz] = x[nz] * np.log(x[nz])
    return out


def _pow0(x, a):
    out = np.zeros_like(x)
    nz = x > 0
    out[nz] = x[nz] ** a
    return out


def stationarity_residual(O, a):
    n = O.shape[0]
    u = O * O
    nz = u > 0
    if a == 1.0:
        w = np.zeros_like(u)
        w[nz] = np.log(u[nz])
    else:
        w = np.zeros_like(u)
        w[nz] = u[nz] ** (a - 1.0)
    R = np.zeros((n, n))
    for j in range(n):
        for l in range(j + 1, n):
            prod = O[:, j] * O[:, l]
            r = float(np.sum(prod * (w[:, j] - w[:, l])))
            R[j, l] = r
            R[l, j] = -r
    return R
