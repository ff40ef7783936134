"""Dense complex linear algebra on top of the Jacobi kernels.

Everything here works on square ``numpy.complex128`` matrices.  The design
is deliberately self-contained: the Hermitian eigensolver is a cyclic complex
Jacobi iteration (see ``_kernels``), the SVD is derived from the
eigendecomposition of ``A*A`` with a one-sided cleanup of the left factor,
and polar decomposition / support projections / Schatten norms are built on
those two.  Intended scale is dim <= ~200; no sparsity, no rectangular SVD.

Tolerance convention: one package-wide default ``DEFAULT_TOL = 1e-9``, always
interpreted relative to the Frobenius norm of the operand (so the zero matrix
is Hermitian, positive, unitary-invariant, ... without special pleading).
Every equality decision accepts an overriding ``tol`` argument.
"""

import math
from typing import NamedTuple

import numpy as np

from ._kernels import MAX_SWEEPS, hermitian_jacobi, onesided_jacobi

#: package-wide relative tolerance default
DEFAULT_TOL = 1e-9

#: relative off-diagonal mass at which the eigensolver declares convergence
_JACOBI_EPS = 1e-14

#: relative threshold for the one-sided orthogonalization pass
_ONESIDED_EPS = 1e-15


class LinalgError(Exception):
    """Base class for numerical-linear-algebra failures."""


class NotHermitian(LinalgError):
    """Input was required to be Hermitian and is not (within tolerance)."""


class NoConvergence(LinalgError):
    """An iteration hit its sweep cap without reaching its target."""


class InvalidExponent(LinalgError):
    """Schatten exponent outside [1, inf]."""


class NotPositive(LinalgError):
    """Input was required to be positive semidefinite and is not."""


class DimMismatch(LinalgError):
    """Operands have incompatible dimensions."""


class EigenDecomposition(NamedTuple):
    """Eigenvalues (real, ascending) and matching unitary eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def as_complex_matrix(a):
    """Validate and return ``a`` as a square complex128 ndarray.

    Accepts anything ``np.asarray`` does; raises ``ValueError`` for inputs
    that are not finite square 2-d arrays.  Always returns a fresh C-ordered
    copy so callers can mutate the result safely.
    """
    arr = np.array(a, dtype=np.complex128, order="C")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (arr.shape,))
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("matrix entries must be finite")
    return arr


def frobenius(a):
    """Frobenius norm of an ndarray."""
    return float(np.linalg.norm(np.asarray(a)))


def _run_hermitian(h):
    """Diagonalize an exactly-Hermitian matrix in place; ascending order."""
    n = h.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = frobenius(h)
    if scale == 0.0:
        return np.zeros(n), v
    sweeps = hermitian_jacobi(h, v, MAX_SWEEPS, _JACOBI_EPS * scale)
    if sweeps < 0:
        raise NoConvergence(
            "Jacobi eigensolver did not converge in %d sweeps" % MAX_SWEEPS
        )
    vals = np.real(np.diag(h)).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], np.ascontiguousarray(v[:, order])


def hermitian_eig(h, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    The input must satisfy ``||H - H*||_F <= tol * ||H||_F``; it is then
    symmetrized exactly before iterating, so returned eigenvalues are real
    and the eigenvector matrix is unitary to machine precision.  Eigenvalues
    come back ascending with eigenvector columns in matching order.

    Raises ``NotHermitian`` on asymmetric input and ``NoConvergence`` if the
    100-sweep cap is exhausted (which does not happen for finite data; the
    cap exists so a silent bad answer is impossible).
    """
    a = as_complex_matrix(h)
    scale = frobenius(a)
    if frobenius(a - a.conj().T) > tol * max(scale, 1e-300):
        raise NotHermitian(
            "matrix is not Hermitian within relative tolerance %g" % tol
        )
    a = 0.5 * (a + a.conj().T)
    vals, vecs = _run_hermitian(a)
    return EigenDecomposition(vals, vecs)


def singular_values(a):
    """Singular values of a square matrix, descending.

    Cheap path used by the norm routines: eigenvalues of ``A*A`` only, no
    left factor extraction.
    """
    a = as_complex_matrix(a)
    if frobenius(a) == 0.0:
        return np.zeros(a.shape[0])
    m = a.conj().T @ a
    m = 0.5 * (m + m.conj().T)
    vals, _ = _run_hermitian(m)
    return np.sqrt(np.clip(vals, 0.0, None))[::-1].copy()


def _complete_orthonormal(u, missing):
    """Fill the columns listed in ``missing`` with an orthonormal complement.

    Greedy: repeatedly take the standard basis vector with the largest
    residual against all currently filled columns, orthogonalize twice
    (classic re-orthogonalization) and normalize.
    """
    n = u.shape[0]
    filled = [j for j in range(n) if j not in set(missing)]
    basis = [u[:, j] for j in filled]
    for slot in missing:
        best = None
        best_norm = -1.0
        for k in range(n):
            cand = np.zeros(n, dtype=np.complex128)
            cand[k] = 1.0
            for _ in range(2):
                for b in basis:
                    cand = cand - np.vdot(b, cand) * b
            norm = float(np.linalg.norm(cand))
            if norm > best_norm:
                best_norm = norm
                best = cand
        vec = best / best_norm
        u[:, slot] = vec
        basis.append(vec)
    return u


def svd(a):
    """Singular value decomposition ``A = U diag(sigma) V*`` of a square matrix.

    ``V`` and the singular values come from the Jacobi eigendecomposition of
    ``A*A``; the left factor starts as ``A V Sigma^+`` and a one-sided Jacobi
    pass on ``W = A V`` (rotating V along) restores its orthonormality at
    machine precision without disturbing ``A = U Sigma V*``.  Exactly-zero
    columns of ``W`` are replaced by an orthonormal completion.

    Returns ``(U, sigma, V)`` with sigma descending and U, V unitary.
    """
    a = as_complex_matrix(a)
    n = a.shape[0]
    if frobenius(a) == 0.0:
        eye = np.eye(n, dtype=np.complex128)
        return eye, np.zeros(n), eye.copy()
    m = a.conj().T @ a
    m = 0.5 * (m + m.conj().T)
    vals, vecs = _run_hermitian(m)
    v = np.ascontiguousarray(vecs[:, ::-1])
    w = np.ascontiguousarray(a @ v)
    sweeps = onesided_jacobi(w, v, MAX_SWEEPS, _ONESIDED_EPS)
    if sweeps < 0:
        raise NoConvergence(
            "one-sided orthogonalization did not converge in %d sweeps" % MAX_SWEEPS
        )
    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = np.ascontiguousarray(w[:, order])
    v = np.ascontiguousarray(v[:, order])
    u = np.zeros((n, n), dtype=np.complex128)
    missing = []
    for j in range(n):
        if sigma[j] > 0.0:
            u[:, j] = w[:, j] / sigma[j]
        else:
            missing.append(j)
    if missing:
        u = _complete_orthonormal(u, missing)
    return u, sigma, v


def schatten_norm(a, p, trace_weight=1.0):
    """Weighted Schatten p-norm ``(w * sum(sigma_i^p))^(1/p)``.

    ``trace_weight`` is the weight of the trace functional: 1 for plain
    matrix algebras, 1/n for a group von Neumann algebra of order n.  The
    exponent must satisfy ``p >= 1``; ``p = math.inf`` gives the operator
    norm (largest singular value, weight-free, as the limit demands).
    """
    if not (isinstance(p, (int, float)) and p >= 1.0):
        raise InvalidExponent("Schatten exponent must satisfy p >= 1, got %r" % (p,))
    weight = float(trace_weight)
    if not weight > 0.0:
        raise ValueError("trace_weight must be positive, got %r" % (trace_weight,))
    sigma = singular_values(a)
    if math.isinf(p):
        return float(sigma[0]) if sigma.size else 0.0
    return float((weight * np.sum(sigma ** float(p))) ** (1.0 / float(p)))


def polar_decompose(a, tol=DEFAULT_TOL):
    """Polar decomposition ``A = w B`` with B psd and w a partial isometry.

    ``B = (A*A)^(1/2)`` and ``w`` carries the support of B onto the closure
    of the range of A, so ``w* w = support_projection(B)``.  Singular values
    at or below ``tol * sigma_max`` are treated as zero and excluded from w.
    """
    u, sigma, v = svd(a)
    b = (v * sigma) @ v.conj().T
    b = 0.5 * (b + b.conj().T)
    smax = float(sigma[0]) if sigma.size else 0.0
    keep = sigma > tol * smax if smax > 0.0 else np.zeros(sigma.shape, dtype=bool)
    uk = u[:, keep]
    vk = v[:, keep]
    w = uk @ vk.conj().T
    return w, b


def support_projection(b, tol=DEFAULT_TOL):
    """Orthogonal projection onto the range of a psd matrix.

    Eigenvalues below ``tol * max|eig|`` count as zero; an eigenvalue below
    ``-tol * max|eig|`` means the input is not positive and raises
    ``NotPositive``.  The zero matrix has zero support.
    """
    vals, vecs = hermitian_eig(b, tol)
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if scale == 0.0:
        return np.zeros((vals.size, vals.size), dtype=np.complex128)
    if vals[0] < -tol * scale:
        raise NotPositive(
            "matrix has eigenvalue %g below -tol*scale = %g"
            % (vals[0], -tol * scale)
        )
    keep = vals > tol * scale
    vk = vecs[:, keep]
    return vk @ vk.conj().T


def psd_pseudo_inverse(b, rel_cutoff=1e-9, tol=DEFAULT_TOL):
    """Moore-Penrose inverse of a psd matrix via its eigendecomposition.

    Eigenvalues at or below ``rel_cutoff * max(eig)`` are treated as zero.
    """
    vals, vecs = hermitian_eig(b, tol)
    scale = float(np.max(vals)) if vals.size else 0.0
    if scale <= 0.0:
        return np.zeros_like(vecs)
    inv = np.where(vals > rel_cutoff * scale, 1.0 / np.where(vals == 0, 1.0, vals), 0.0)
    return (vecs * inv) @ vecs.conj().T


def random_unitary(n, rng):
    """Haar-ish random unitary: polar factor of a Gaussian complex matrix."""
    eye = np.eye(n, dtype=np.complex128)
    for _ in range(8):
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        w, _ = polar_decompose(z)
        if frobenius(w.conj().T @ w - eye) <= 1e-10 * math.sqrt(n):
            return w
    raise NoConvergence("failed to draw an invertible Gaussian matrix")


def matrix_to_json(a):
    """Serialize a square complex matrix as {"dim", "re", "im"}."""
    arr = as_complex_matrix(a)
    return {
        "dim": int(arr.shape[0]),
        "re": arr.real.tolist(),
        "im": arr.imag.tolist(),
    }


def matrix_from_json(obj):
    """Inverse of :func:`matrix_to_json`; raises ``ValueError`` on bad input."""
    if not isinstance(obj, dict):
        raise ValueError("matrix JSON must be an object")
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj["im"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("matrix JSON needs numeric 'dim', 're', 'im'") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(
            "matrix JSON shape mismatch: dim=%d, re%r, im%r"
            % (dim, re.shape, im.shape)
        )
    return as_complex_matrix(re + 1j * im)
