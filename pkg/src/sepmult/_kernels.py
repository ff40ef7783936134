"""Low-level numerical kernels.

Two kernels carry essentially all of the floating-point work in this package:

* a cyclic Jacobi eigensolver for complex Hermitian matrices (two-sided
  unitary rotations annihilating one off-diagonal entry at a time), and
* a one-sided Jacobi pass that orthogonalizes the columns of a square matrix
  while accumulating the applied rotations, used to harden the left factor
  of the SVD.

Each kernel exists twice: a plain-loop version compiled with numba's ``njit``
and a vectorized numpy version that performs the same rotation sequence with
slice arithmetic.  The active backend is chosen once at import time from the
environment variable ``SEPMULT_BACKEND``:

    SEPMULT_BACKEND=numba   force numba (ImportError if unavailable)
    SEPMULT_BACKEND=numpy   force the pure-numpy path
    SEPMULT_BACKEND=auto    numba when importable, numpy otherwise (default)

Both implementations of each kernel are always importable so tests and the
benchmark script can compare them directly regardless of the active choice.

Kernel contract (shared by both backends): matrices are modified in place,
the return value is the number of completed sweeps on convergence and -1 if
the sweep cap was exhausted first.
"""

import math
import os

import numpy as np

#: sweep cap for both kernels; exceeding it is reported to the caller, which
#: raises a hard error rather than returning a half-converged answer.
MAX_SWEEPS = 100


def _rotation_scalars(app, aqq, zpq, r):
    """Cosine/sine/phase of the 2x2 unitary annihilating the (p,q) entry.

    ``app`` and ``aqq`` are the (real) diagonal entries, ``zpq`` the complex
    off-diagonal one and ``r = |zpq|`` (caller guarantees r > 0).  Returns
    ``(c, su, suc)`` with ``su = s*phase`` and ``suc = s*conj(phase)`` so
    column updates are ``new_p = c*col_p + suc*col_q`` and
    ``new_q = c*col_q - su*col_p`` (rows use the conjugate pattern).
    """
    u = zpq / r
    tau = (aqq - app) / (2.0 * r)
    if tau >= 0.0:
        t = -1.0 / (tau + math.sqrt(1.0 + tau * tau))
    else:
        t = 1.0 / (-tau + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    return c, s * u, s * u.conjugate()


def _hermitian_jacobi_loops(h, v, max_sweeps, off_target):
    n = h.shape[0]
    for sweep in range(max_sweeps):
        off2 = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = h[p, q]
                off2 += z.real * z.real + z.imag * z.imag
        if math.sqrt(2.0 * off2) <= off_target:
            return sweep
        thresh = off_target / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = h[p, q]
                r = abs(z)
                if r <= thresh:
                    continue
                u = z / r
                app = h[p, p].real
                aqq = h[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = -1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                su = s * u
                suc = s * u.conjugate()
                for i in range(n):
                    hip = h[i, p]
                    hiq = h[i, q]
                    h[i, p] = c * hip + suc * hiq
                    h[i, q] = c * hiq - su * hip
                for i in range(n):
                    hpi = h[p, i]
                    hqi = h[q, i]
                    h[p, i] = c * hpi + su * hqi
                    h[q, i] = c * hqi - suc * hpi
                h[p, q] = 0.0 + 0.0j
                h[q, p] = 0.0 + 0.0j
                h[p, p] = complex(h[p, p].real, 0.0)
                h[q, q] = complex(h[q, q].real, 0.0)
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip + suc * viq
                    v[i, q] = c * viq - su * vip
    off2 = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            z = h[p, q]
            off2 += z.real * z.real + z.imag * z.imag
    if math.sqrt(2.0 * off2) <= off_target:
        return max_sweeps
    return -1


def _hermitian_jacobi_numpy(h, v, max_sweeps, off_target):
    n = h.shape[0]
    for sweep in range(max_sweeps):
        off2 = 0.0
        for p in range(n - 1):
            row = h[p, p + 1:]
            off2 += float(np.sum(row.real * row.real + row.imag * row.imag))
        if math.sqrt(2.0 * off2) <= off_target:
            return sweep
        thresh = off_target / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = h[p, q]
                r = abs(z)
                if r <= thresh:
                    continue
                c, su, suc = _rotation_scalars(h[p, p].real, h[q, q].real, z, r)
                colp = h[:, p].copy()
                colq = h[:, q].copy()
                h[:, p] = c * colp + suc * colq
                h[:, q] = c * colq - su * colp
                rowp = h[p, :].copy()
                rowq = h[q, :].copy()
                h[p, :] = c * rowp + su * rowq
                h[q, :] = c * rowq - suc * rowp
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + suc * vq
                v[:, q] = c * vq - su * vp
    off2 = 0.0
    for p in range(n - 1):
        row = h[p, p + 1:]
        off2 += float(np.sum(row.real * row.real + row.imag * row.imag))
    if math.sqrt(2.0 * off2) <= off_target:
        return max_sweeps
    return -1


def _onesided_jacobi_loops(w, v, max_sweeps, eps):
    n = w.shape[1]
    m = w.shape[0]
    for sweep in range(max_sweeps):
        rotated = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                gpp = 0.0
                gqq = 0.0
                gpq = 0.0 + 0.0j
                for i in range(m):
                    wip = w[i, p]
                    wiq = w[i, q]
                    gpp += wip.real * wip.real + wip.imag * wip.imag
                    gqq += wiq.real * wiq.real + wiq.imag * wiq.imag
                    gpq += wip.conjugate() * wiq
                r = abs(gpq)
                if gpp == 0.0 or gqq == 0.0 or r <= eps * math.sqrt(gpp * gqq):
                    continue
                u = gpq / r
                tau = (gqq - gpp) / (2.0 * r)
                if tau >= 0.0:
                    t = -1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                su = s * u
                suc = s * u.conjugate()
                for i in range(m):
                    wip = w[i, p]
                    wiq = w[i, q]
                    w[i, p] = c * wip + suc * wiq
                    w[i, q] = c * wiq - su * wip
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip + suc * viq
                    v[i, q] = c * viq - su * vip
                rotated += 1
        if rotated == 0:
            return sweep
    return -1


def _onesided_jacobi_numpy(w, v, max_sweeps, eps):
    n = w.shape[1]
    for sweep in range(max_sweeps):
        rotated = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp = w[:, p]
                wq = w[:, q]
                gpp = float(np.real(np.vdot(wp, wp)))
                gqq = float(np.real(np.vdot(wq, wq)))
                gpq = complex(np.vdot(wp, wq))
                r = abs(gpq)
                if gpp == 0.0 or gqq == 0.0 or r <= eps * math.sqrt(gpp * gqq):
                    continue
                c, su, suc = _rotation_scalars(gpp, gqq, gpq, r)
                colp = wp.copy()
                colq = wq.copy()
                w[:, p] = c * colp + suc * colq
                w[:, q] = c * colq - su * colp
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + suc * vq
                v[:, q] = c * vq - su * vp
                rotated += 1
        if rotated == 0:
            return sweep
    return -1


def _requested_backend():
    value = os.environ.get("SEPMULT_BACKEND", "auto").strip().lower()
    if value not in ("auto", "numba", "numpy"):
        raise ValueError(
            "SEPMULT_BACKEND must be one of 'auto', 'numba', 'numpy', got %r" % value
        )
    return value


_HERMITIAN_NUMBA = None
_ONESIDED_NUMBA = None
HAVE_NUMBA = False

_choice = _requested_backend()
if _choice in ("auto", "numba"):
    try:
        from numba import njit

        _HERMITIAN_NUMBA = njit(cache=True)(_hermitian_jacobi_loops)
        _ONESIDED_NUMBA = njit(cache=True)(_onesided_jacobi_loops)
        HAVE_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise
        HAVE_NUMBA = False

if HAVE_NUMBA and _choice in ("auto", "numba"):
    ACTIVE_BACKEND = "numba"
    hermitian_jacobi = _HERMITIAN_NUMBA
    onesided_jacobi = _ONESIDED_NUMBA
else:
    ACTIVE_BACKEND = "numpy"
    hermitian_jacobi = _hermitian_jacobi_numpy
    onesided_jacobi = _onesided_jacobi_numpy


def available_backends():
    """Map backend name -> (hermitian_jacobi, onesided_jacobi) callables."""
    out = {"numpy": (_hermitian_jacobi_numpy, _onesided_jacobi_numpy)}
    if HAVE_NUMBA:
        out["numba"] = (_HERMITIAN_NUMBA, _ONESIDED_NUMBA)
    return out
