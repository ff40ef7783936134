"""Schur multipliers: entrywise actions, factorization certificates, Herz-Schur.

A Schur symbol is just a square complex matrix m acting entrywise,
``T_m(x) = m .* x``.  The certificate of interest is the rank-one unimodular
factorization ``m_ij = c * alpha_i * beta_j`` with |alpha_i| = |beta_j| = 1,
gauged so alpha_1 = 1 and c = m_11.  Existence of the certificate is a value
("absent" is a legitimate answer), not an error.

``herz_schur_symbol`` turns a function on a group into the two-variable
symbol m[s, t] = phi(s^{-1} t); ``recover_character`` inverts that: given a
rank-one certificate of such a symbol it reconstructs the scalar and the
character, verifying translation covariance on the way.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .groups import Character, FiniteGroup
from .linalg import DEFAULT_TOL, DimMismatch, as_complex_matrix


@dataclass
class RankOneCertificate:
    """Witness of m = c * outer(alpha, beta) with unimodular alpha, beta."""

    c: complex
    alpha: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.c = complex(self.c)
        self.alpha = np.asarray(self.alpha, dtype=np.complex128).reshape(-1)
        self.beta = np.asarray(self.beta, dtype=np.complex128).reshape(-1)

    def reconstruct(self):
        return self.c * np.outer(self.alpha, self.beta)


def schur_apply(m, x):
    """Entrywise (Hadamard) action of the symbol on a matrix."""
    mm = as_complex_matrix(m)
    xx = as_complex_matrix(x)
    if mm.shape != xx.shape:
        raise DimMismatch(
            "symbol %r and operand %r differ in shape" % (mm.shape, xx.shape)
        )
    return mm * xx


def _unimodular(z):
    mod = np.abs(z)
    safe = np.where(mod == 0.0, 1.0, mod)
    return z / safe


def rank_one_unimodular_factor(m, tol=DEFAULT_TOL) -> Optional[RankOneCertificate]:
    """Factor m = c * outer(alpha, beta) with unimodular alpha, beta, or None.

    All entry moduli must agree within ``tol`` relative to the largest one
    (the zero symbol factors as c = 0 with all-ones vectors).  Gauge:
    alpha_1 = 1, c = m_11; the candidate is verified entrywise before being
    returned, so near-misses come back as None rather than a bad certificate.
    """
    mm = as_complex_matrix(m)
    n = mm.shape[0]
    moduli = np.abs(mm)
    mmax = float(moduli.max())
    if mmax == 0.0:
        ones = np.ones(n, dtype=np.complex128)
        return RankOneCertificate(0.0, ones, ones.copy())
    if float(mmax - moduli.min()) > tol * mmax:
        return None
    c = complex(mm[0, 0])
    alpha = _unimodular(mm[:, 0] / c)
    alpha[0] = 1.0
    beta = _unimodular(mm[0, :] / c)
    residual = np.max(np.abs(mm - c * np.outer(alpha, beta)))
    if float(residual) > tol * mmax:
        return None
    return RankOneCertificate(c, alpha, beta)


def herz_schur_symbol(g: FiniteGroup, phi):
    """Two-variable symbol m[s, t] = phi(s^{-1} t) from a function on g."""
    values = np.asarray(phi, dtype=np.complex128).reshape(-1)
    if values.shape != (g.order,):
        raise ValueError("symbol needs one value per group element")
    return values[g.mul[g.inv, :]]


def recover_character(g: FiniteGroup, cert: RankOneCertificate, tol=DEFAULT_TOL):
    """Recover (c, psi) from a certificate of a Herz-Schur symbol.

    psi(r) = beta(r * e) / beta(e) referenced at the identity, then two
    verifications: psi must be a character within ``tol`` and the certificate
    must be translation covariant, i.e. c * alpha_s * beta_t must equal
    c' * psi(s^{-1} t) for c' = c * alpha(e) * beta(e).  Returns None when
    either fails, which is exactly the case of a certificate that did not
    come from a scalar multiple of a character.
    """
    if cert.alpha.shape != (g.order,) or cert.beta.shape != (g.order,):
        raise ValueError("certificate vectors do not match the group order")
    e = g.identity
    if cert.beta[e] == 0.0:
        return None
    psi_values = cert.beta / cert.beta[e]
    psi = Character(g, psi_values)
    try:
        psi.validate(tol)
    except ValueError:
        return None
    c_prime = complex(cert.c * cert.alpha[e] * cert.beta[e])
    expected = c_prime * psi_values[g.mul[g.inv, :]]
    actual = cert.c * np.outer(cert.alpha, cert.beta)
    scale = max(1.0, abs(cert.c))
    if float(np.max(np.abs(actual - expected))) > tol * scale:
        return None
    return c_prime, psi


def fit_entrywise_action(pairs, tol=1e-12):
    """Solve m .* x = y entrywise over a probe set, or None if inconsistent.

    Unconstrained entries come back as 0.  Used to show maps like the
    transpose cannot be Schur multipliers: their probe constraints clash.
    """
    m = None
    known = None
    for x, y in pairs:
        xx = as_complex_matrix(x)
        yy = as_complex_matrix(y)
        if xx.shape != yy.shape:
            raise DimMismatch("probe and image differ in shape")
        if m is None:
            m = np.zeros(xx.shape, dtype=np.complex128)
            known = np.zeros(xx.shape, dtype=bool)
        elif m.shape != xx.shape:
            raise DimMismatch("probes differ in shape")
        scale = max(float(np.max(np.abs(xx))), 1.0)
        for i in range(xx.shape[0]):
            for j in range(xx.shape[1]):
                if abs(xx[i, j]) > tol * scale:
                    value = yy[i, j] / xx[i, j]
                    if known[i, j] and abs(m[i, j] - value) > tol * max(
                        1.0, abs(value)
                    ):
                        return None
                    m[i, j] = value
                    known[i, j] = True
                elif abs(yy[i, j]) > tol * max(1.0, float(np.max(np.abs(yy)))):
                    return None
    return m


def transpose_symbol_fit(n):
    """Try to realize x -> x^T as a Schur multiplier on the standard probes.

    Returns the solved symbol for n = 1 and None for every n >= 2: the
    probes e_11, e_12, e_21 force contradictory constraints.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    probes = []
    for (i, j) in ((0, 0), (0, 1), (1, 0)):
        if i < n and j < n:
            x = np.zeros((n, n), dtype=np.complex128)
            x[i, j] = 1.0
            probes.append((x, x.T.copy()))
    return fit_entrywise_action(probes)
