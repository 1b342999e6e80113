"""Shared numerics: square-root branch, entire-function towers, quadrature
nodes, canonical JSON.

The spectral parameter enters everything through rho = sqrt(lambda) with the
branch fixed to arg rho in [-pi/2, pi/2).  Model quantities reduce to the
Taylor coefficients in lambda of cos(sqrt(lambda) x), which are entire; they
are evaluated through the scaled tower c_j(w) = (1/j!) (d/dw)^j cos(sqrt(w))
so that no branch or 0/0 issues arise at lambda = 0.
"""
from __future__ import annotations

import json
import os
import tempfile

import numpy as np

PI = np.pi

MAX_DERIV_ORDER = 3  # multiplicity cap: clusters up to triple eigenvalues


def sqrt_lambda(lam):
    """sqrt(lambda) with arg in [-pi/2, pi/2); vectorized."""
    r = np.sqrt(np.asarray(lam, dtype=complex))
    # numpy principal branch gives arg in (-pi/2, pi/2]; flip the arg = pi/2 ray
    flip = np.angle(r) >= PI / 2 - 1e-14
    return np.where(flip, -r, r)


def sin_pi(z):
    """sin(pi z) with integer argument reduction for large real parts."""
    z = np.asarray(z, dtype=complex)
    m = np.round(z.real)
    return np.where(m.astype(int) % 2 == 0, 1.0, -1.0) * np.sin(PI * (z - m))


def cos_pi(z):
    """cos(pi z) with integer argument reduction."""
    z = np.asarray(z, dtype=complex)
    m = np.round(z.real)
    return np.where(m.astype(int) % 2 == 0, 1.0, -1.0) * np.cos(PI * (z - m))


# ---------------------------------------------------------------------------
# Taylor tower of cos(sqrt(w)):  c_j(w) = (1/j!) (d/dw)^j cos(sqrt(w)).
# Closed forms in s = sqrt(w) are even in s; a series branch covers |s| < 1/2.
# c_j' = (j+1) c_{j+1}.

_C_SERIES_TERMS = 16


def _c_series(j, w):
    # sum_{m >= j} (-1)^m C(m, j) w^(m-j) / (2m)!
    out = np.zeros_like(w)
    term = np.ones_like(w)  # w^(m-j) running power
    from math import comb, factorial
    for m in range(j, j + _C_SERIES_TERMS):
        out = out + ((-1) ** m * comb(m, j) / factorial(2 * m)) * term
        term = term * w
    return out


def cos_sqrt_taylor(j, w):
    """c_j(w) for 0 <= j <= 4; w complex array."""
    w = np.asarray(w, dtype=complex)
    s = np.sqrt(w)  # branch-irrelevant: formulas below are even in s
    small = np.abs(s) < 0.5
    ssafe = np.where(np.abs(s) < 1e-300, 1.0, s)
    sn, cs = np.sin(s), np.cos(s)
    if j == 0:
        closed = cs
    elif j == 1:
        closed = -sn / (2 * ssafe)
    elif j == 2:
        closed = (sn - s * cs) / (8 * ssafe**3)
    elif j == 3:
        closed = ((s * s - 3) * sn + 3 * s * cs) / (48 * ssafe**5)
    elif j == 4:
        closed = ((15 - 6 * s * s) * sn + s * (s * s - 15) * cs) / (384 * ssafe**7)
    else:
        raise ValueError(f"cos_sqrt_taylor order {j} not implemented")
    return np.where(small, _c_series(j, w), closed)


def phi_model(j, x, lam):
    """(1/j!) d^j/dlam^j cos(sqrt(lam) x); entire in lam, valid at lam = 0."""
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=complex)
    return x ** (2 * j) * cos_sqrt_taylor(j, lam * x * x)


def phi_model_dx(j, x, lam):
    """x-derivative of phi_model(j, x, lam)."""
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=complex)
    u = lam * x * x
    out = 2 * lam * (j + 1) * x ** (2 * j + 1) * cos_sqrt_taylor(j + 1, u)
    if j > 0:
        out = out + 2 * j * x ** (2 * j - 1) * cos_sqrt_taylor(j, u)
    return out


# ---------------------------------------------------------------------------
# Gauss-Legendre nodes, cached.

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def gl_nodes_on(a, b, n):
    """Nodes and weights for integral over [a, b]."""
    t, w = gauss_legendre(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * t, half * w


# ---------------------------------------------------------------------------
# Canonical JSON: sorted keys, floats at 17 significant digits, complex as
# [re, im]. Deterministic across runs; atomic writes.


def cplx(z):
    z = complex(z)
    return [z.real, z.imag]


def _fmt(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return json.dumps(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError("non-finite float in canonical JSON")
        return f"{value:.17g}"
    if isinstance(value, complex):
        return _fmt([value.real, value.imag])
    if isinstance(value, (np.integer,)):
        return json.dumps(int(value))
    if isinstance(value, (np.floating,)):
        return _fmt(float(value))
    if isinstance(value, (np.complexfloating,)):
        return _fmt(complex(value))
    if isinstance(value, (list, tuple, np.ndarray)):
        items = [_fmt(v) for v in value]
        return "[" + ",".join(items) + "]"
    if isinstance(value, dict):
        parts = []
        for key in sorted(value):
            parts.append(json.dumps(str(key)) + ":" + _fmt(value[key]))
        return "{" + ",".join(parts) + "}"
    raise TypeError(f"cannot canonicalize {type(value)}")


def canonical_dumps(obj) -> str:
    return _fmt(obj) + "\n"


def write_json_atomic(path, obj):
    """Canonical serialization, write-then-rename."""
    text = canonical_dumps(obj)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path):
    with open(path) as fh:
        return json.load(fh)
