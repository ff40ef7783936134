"""Group von Neumann algebra elements and Fourier multipliers.

An element is a coefficient vector f over the group together with its matrix
realization ``sum_s f(s) lambda(s)`` acting on l2(G); ``lambda(s)`` is the
left translation permutation matrix.  Coefficients are authoritative, the
matrix is a cached derivative.  The trace is the normalized matrix trace,
which on coefficients reads off the identity coefficient, so the 2-norm of an
element equals the Euclidean norm of its coefficient vector.

Products are computed by convolution in coefficient space (exact membership,
no rounding drift out of the algebra); matrices realized from arbitrary input
are re-projected through the coefficient extraction
``f(s) = normalized trace of lambda(s)* X``.

Seeded randomness: every draw is a pure function of (group, seed).  Spectral
projection pairs come from splitting the spectrum of a random self-adjoint
element at the midpoint of its largest gap; disjoint pairs are ``p x r`` and
``q y s`` for two independent projection splits.
"""

from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, same_group
from .linalg import (
    DEFAULT_TOL,
    DimMismatch,
    frobenius,
    hermitian_eig,
    schatten_norm,
)

#: relative tolerance for "this matrix lies in the group algebra"
MEMBERSHIP_TOL = 1e-8

#: smallest admissible spectral gap, relative to the spectral radius
_GAP_FLOOR = 1e-6

_PROJECTION_RETRIES = 16
_PAIR_RETRIES = 64


class VnaError(Exception):
    """Base class for group-algebra failures."""


class GroupMismatch(VnaError):
    """Operands live over different groups."""


class DegenerateSpectrum(VnaError):
    """Random spectra refused to split into two clusters."""


class ExhaustedRetries(VnaError):
    """Rejection sampling ran out of attempts."""


def derive_seed(*parts):
    """Deterministic child seed from integer parts (order-sensitive)."""
    entropy = [int(p) & 0xFFFFFFFFFFFFFFFF for p in parts]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0])


def _rebuild_grid(g):
    """Index grid I with I[u, t] = mul[u, inv[t]], memoized on the group."""
    grid = getattr(g, "_vna_rebuild_grid", None)
    if grid is None:
        grid = np.ascontiguousarray(g.mul[:, g.inv])
        g._vna_rebuild_grid = grid
    return grid


class GroupAlgebraElement:
    """Element of the group von Neumann algebra, held as coefficients."""

    __slots__ = ("group", "coeffs", "_matrix")

    def __init__(self, group, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.complex128).reshape(-1).copy()
        if coeffs.shape != (group.order,):
            raise ValueError(
                "need %d coefficients, got %d" % (group.order, coeffs.shape[0])
            )
        if not np.all(np.isfinite(coeffs.view(np.float64))):
            raise ValueError("coefficients must be finite")
        self.group = group
        self.coeffs = coeffs
        self._matrix = None

    @property
    def matrix(self):
        if self._matrix is None:
            self._matrix = self.coeffs[_rebuild_grid(self.group)]
        return self._matrix

    @classmethod
    def from_matrix(cls, group, matrix, membership_tol=MEMBERSHIP_TOL):
        """Re-project a matrix onto the algebra through the trace pairing.

        Raises ``ValueError`` when the matrix is not in the algebra within
        ``membership_tol`` (relative Frobenius); pass ``None`` to skip the
        check and take the conditional expectation unconditionally.
        """
        x = np.asarray(matrix, dtype=np.complex128)
        n = group.order
        if x.shape != (n, n):
            raise DimMismatch("matrix shape %r does not match order %d" % (x.shape, n))
        cols = np.arange(n)
        coeffs = x[group.mul, cols[None, :]].mean(axis=1)
        element = cls(group, coeffs)
        if membership_tol is not None:
            defect = frobenius(element.matrix - x)
            if defect > membership_tol * max(frobenius(x), 1e-300):
                raise ValueError(
                    "matrix is not in the group algebra "
                    "(relative defect %.3g)" % (defect / max(frobenius(x), 1e-300))
                )
        return element

    def adjoint(self):
        return GroupAlgebraElement(self.group, np.conj(self.coeffs[self.group.inv]))

    def __add__(self, other):
        self._check(other)
        return GroupAlgebraElement(self.group, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return GroupAlgebraElement(self.group, self.coeffs - other.coeffs)

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            self._check(other)
            out = np.zeros(self.group.order, dtype=np.complex128)
            mul = self.group.mul
            for s in range(self.group.order):
                fs = self.coeffs[s]
                if fs != 0:
                    out[mul[s]] += fs * other.coeffs
            return GroupAlgebraElement(self.group, out)
        return GroupAlgebraElement(self.group, self.coeffs * complex(other))

    def __rmul__(self, scalar):
        return GroupAlgebraElement(self.group, self.coeffs * complex(scalar))

    def _check(self, other):
        if not same_group(self.group, other.group):
            raise GroupMismatch("elements live over different groups")

    def __repr__(self):
        return "GroupAlgebraElement(order=%d)" % self.group.order


def regular_representation(g, s):
    """Left translation matrix lambda(s): column t has its 1 in row s*t."""
    n = g.order
    mat = np.zeros((n, n), dtype=np.complex128)
    mat[g.mul[s], np.arange(n)] = 1.0
    return mat


def basis_element(g, s):
    coeffs = np.zeros(g.order, dtype=np.complex128)
    coeffs[s] = 1.0
    return GroupAlgebraElement(g, coeffs)


def algebra_unit(g):
    return basis_element(g, g.identity)


def plancherel_trace(x):
    """Normalized trace: the identity coefficient."""
    return complex(x.coeffs[x.group.identity])


def lp_norm(x, p):
    """Noncommutative p-norm with the normalized trace weight 1/|G|."""
    return schatten_norm(x.matrix, p, 1.0 / x.group.order)


@dataclass
class FourierMultiplier:
    """Pointwise action on coefficients: lambda(s) -> symbol[s] lambda(s)."""

    group: FiniteGroup
    symbol: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.symbol = np.asarray(self.symbol, dtype=np.complex128).reshape(-1).copy()
        if self.symbol.shape != (self.group.order,):
            raise ValueError("symbol needs one value per group element")
        if not np.all(np.isfinite(self.symbol.view(np.float64))):
            raise ValueError("symbol values must be finite")

    def __call__(self, x):
        return apply_fourier(self, x)


def apply_fourier(multiplier, x):
    if not same_group(multiplier.group, x.group):
        raise GroupMismatch("multiplier and element live over different groups")
    return GroupAlgebraElement(x.group, multiplier.symbol * x.coeffs)


def _as_matrix(x):
    if isinstance(x, GroupAlgebraElement):
        return x.matrix
    return np.asarray(x, dtype=np.complex128)


def disjointness_defect(a, b):
    """max(||a* b||, ||a b*||) / (||a|| ||b||), 0 when either factor is 0."""
    am = _as_matrix(a)
    bm = _as_matrix(b)
    if am.shape != bm.shape:
        raise DimMismatch("operands have shapes %r and %r" % (am.shape, bm.shape))
    na = frobenius(am)
    nb = frobenius(bm)
    if na == 0.0 or nb == 0.0:
        return 0.0
    left = frobenius(am.conj().T @ bm)
    right = frobenius(am @ bm.conj().T)
    return max(left, right) / (na * nb)


def is_disjoint(a, b, tol=DEFAULT_TOL):
    """Whether a* b and a b* both vanish within relative tolerance."""
    return disjointness_defect(a, b) <= tol


def random_element(g, rng):
    coeffs = rng.standard_normal(g.order) + 1j * rng.standard_normal(g.order)
    return GroupAlgebraElement(g, coeffs)


def random_self_adjoint(g, rng):
    x = random_element(g, rng)
    return x + x.adjoint()


def random_projection_pair(g, seed):
    """Two orthogonal projections (p, q) in the algebra with p + q = 1.

    A random self-adjoint element is drawn, its spectrum split at the
    midpoint of the largest gap (which must exceed 1e-6 of the spectral
    radius), and the spectral projection re-projected onto coefficients.
    Retries internally up to 16 times, then raises ``DegenerateSpectrum``.
    The one-element group has one-point spectra, so the only splits are
    (0, 1) and (1, 0), chosen by the seed.
    """
    rng = np.random.default_rng(seed)
    if g.order == 1:
        zero = GroupAlgebraElement(g, [0.0])
        one = algebra_unit(g)
        return (zero, one) if int(rng.integers(2)) == 0 else (one, zero)
    unit_coeffs = algebra_unit(g).coeffs
    for _ in range(_PROJECTION_RETRIES):
        x = random_self_adjoint(g, rng)
        vals, vecs = hermitian_eig(x.matrix)
        radius = float(np.max(np.abs(vals)))
        if radius == 0.0:
            continue
        gaps = np.diff(vals)
        cut = int(np.argmax(gaps))
        if gaps[cut] <= _GAP_FLOOR * radius:
            continue
        low = vecs[:, : cut + 1]
        pmat = low @ low.conj().T
        try:
            p = GroupAlgebraElement.from_matrix(g, pmat)
        except ValueError:
            continue
        q = GroupAlgebraElement(g, unit_coeffs - p.coeffs)
        defect = frobenius(_as_matrix(p * p) - p.matrix)
        if defect > 1e-9 * max(1.0, frobenius(p.matrix)):
            continue
        return p, q
    raise DegenerateSpectrum(
        "no spectral gap above %g of the radius after %d draws"
        % (_GAP_FLOOR, _PROJECTION_RETRIES)
    )


def random_disjoint_pair(g, seed):
    """A disjoint pair (a, b): a = p x r, b = q y s for independent splits.

    Disjointness (a*b = ab* = 0) holds by construction since pq = rs = 0;
    the returned pair is verified against ``is_disjoint`` at 1e-10.  Pairs
    with a vanishing factor are rejected and redrawn; on the one-element
    group every pair degenerates, so ``ExhaustedRetries`` is immediate.
    """
    if g.order == 1:
        raise ExhaustedRetries(
            "the one-dimensional algebra has no nonzero disjoint pairs"
        )
    rng = np.random.default_rng(derive_seed(seed, 0x0E1E))
    for attempt in range(_PAIR_RETRIES):
        p, q = random_projection_pair(g, derive_seed(seed, 2 * attempt))
        r, s = random_projection_pair(g, derive_seed(seed, 2 * attempt + 1))
        x = random_element(g, rng)
        y = random_element(g, rng)
        a = p * x * r
        b = q * y * s
        scale = max(
            float(np.linalg.norm(x.coeffs)), float(np.linalg.norm(y.coeffs))
        )
        if (
            np.linalg.norm(a.coeffs) <= 1e-8 * scale
            or np.linalg.norm(b.coeffs) <= 1e-8 * scale
        ):
            continue
        if not is_disjoint(a, b, 1e-10):
            continue
        return a, b
    raise ExhaustedRetries(
        "could not draw a nonzero disjoint pair in %d attempts" % _PAIR_RETRIES
    )


def symbol_to_json(phi):
    arr = np.asarray(phi, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in arr]


def symbol_from_json(obj, expected_len=None):
    """Parse a symbol from a JSON array of [re, im] pairs."""
    try:
        arr = np.asarray(obj, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValueError("symbol JSON must be an array of [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("symbol JSON must be an array of [re, im] pairs")
    values = arr[:, 0] + 1j * arr[:, 1]
    if expected_len is not None and values.shape[0] != expected_len:
        raise ValueError(
            "symbol has %d entries, expected %d" % (values.shape[0], expected_len)
        )
    return values
